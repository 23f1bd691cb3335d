//! Apollonius-circle geometry for the border defense game.
//!
//! The border is the line `y = 0` and play happens in `y >= 0`. For a pursuer
//! `P` and an evader `E` with speed ratio `alpha = v_E / v_P < 1`, the
//! Apollonius circle is the locus of points `S` with `|ES| = alpha |PS|`. Its
//! interior is the evader's dominance region, and its lowest point is where the
//! pair meets under optimal play.
//!
//! Everything here is closed form; no iterative root finding is used.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn dist(self, other: Self) -> T {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl<T: Scalar> Add for Point2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<T: Scalar> Sub for Point2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<T: Scalar> Mul<T> for Point2<T> {
    type Output = Self;
    fn mul(self, rhs: T) -> Self {
        Self::new(self.x * rhs, self.y * rhs)
    }
}

/// Which pair of agents generated a circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CircleKind {
    /// Dominance boundary between a pursuer and an evader.
    PursuerEvader { pursuer: usize, evader: usize },
    /// Equal-arrival-time locus of two pursuers; `fast` is the quicker one.
    PursuerPair { slow: usize, fast: usize },
}

/// An Apollonius circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle<T> {
    pub center: Point2<T>,
    pub radius: T,
    pub kind: CircleKind,
    /// Speed ratio of the generating pair, in `(0, 1)`.
    pub ratio: T,
}

impl<T: Scalar> Circle<T> {
    pub fn with_kind(mut self, kind: CircleKind) -> Self {
        self.kind = kind;
        self
    }

    /// The lowest point on the circle.
    pub fn bottom(&self) -> Point2<T> {
        Point2::new(self.center.x, self.center.y - self.radius)
    }

    /// Closed-disk membership with a relative slack of `1e-12` radius.
    pub fn contains(&self, p: Point2<T>) -> bool {
        self.center.dist(p) <= self.radius * (T::one() + T::lit(1e-12))
    }

    /// Whether this closed disk contains all of `other`.
    pub fn contains_circle(&self, other: &Circle<T>) -> bool {
        self.center.dist(other.center) + other.radius
            <= self.radius * (T::one() + T::lit(1e-12))
    }
}

/// How an evader is captured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaptureMode {
    /// Captured by a single pursuer.
    Solo(usize),
    /// Captured at the same instant by two pursuers.
    Simultaneous(usize, usize),
}

impl CaptureMode {
    pub fn pursuers(&self) -> Vec<usize> {
        match *self {
            CaptureMode::Solo(i) => vec![i],
            CaptureMode::Simultaneous(a, b) => vec![a, b],
        }
    }

    pub fn is_simultaneous(&self) -> bool {
        matches!(self, CaptureMode::Simultaneous(..))
    }
}

/// The lowest point of an evader's dominance region and how it is reached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapturePoint<T> {
    pub point: Point2<T>,
    pub mode: CaptureMode,
}

impl<T: Scalar> CapturePoint<T> {
    /// Replaces the local slot indices (0 and 1) produced by
    /// [`cooperative_lowest_point`] with real pursuer indices.
    pub fn relabel(self, slot0: usize, slot1: usize) -> Self {
        let map = |k: usize| if k == 0 { slot0 } else { slot1 };
        let mode = match self.mode {
            CaptureMode::Solo(k) => CaptureMode::Solo(map(k)),
            CaptureMode::Simultaneous(a, b) => {
                let (a, b) = (map(a), map(b));
                CaptureMode::Simultaneous(a.min(b), a.max(b))
            }
        };
        Self { point: self.point, mode }
    }
}

fn check_ratio<T: Scalar>(alpha: T) -> Result<()> {
    if alpha.is_finite() && alpha > T::zero() && alpha < T::one() {
        Ok(())
    } else {
        Err(Error::DegenerateInput("speed ratio must lie in (0, 1)"))
    }
}

/// Builds the locus `|S - slow| / |S - fast| = alpha` for foci `slow`, `fast`.
fn ratio_circle<T: Scalar>(slow: Point2<T>, fast: Point2<T>, alpha: T) -> Result<(Point2<T>, T)> {
    check_ratio(alpha)?;
    if !slow.is_finite() || !fast.is_finite() {
        return Err(Error::DegenerateInput("non-finite coordinates"));
    }
    let d = slow.dist(fast);
    if !(d > T::zero()) {
        return Err(Error::DegenerateInput("generating points coincide"));
    }
    let a2 = alpha * alpha;
    let k = T::one() / (T::one() - a2);
    let center = Point2::new((slow.x - a2 * fast.x) * k, (slow.y - a2 * fast.y) * k);
    Ok((center, alpha * d * k))
}

/// Apollonius circle of a pursuer-evader pair with `alpha = v_E / v_P`.
pub fn apollonius_circle<T: Scalar>(
    pursuer: Point2<T>,
    evader: Point2<T>,
    alpha: T,
) -> Result<Circle<T>> {
    let (center, radius) = ratio_circle(evader, pursuer, alpha)?;
    Ok(Circle {
        center,
        radius,
        kind: CircleKind::PursuerEvader { pursuer: 0, evader: 0 },
        ratio: alpha,
    })
}

/// Lowest point of a pursuer-evader circle, reported as a solo capture.
pub fn lowest_point<T: Scalar>(c: &Circle<T>) -> Result<CapturePoint<T>> {
    match c.kind {
        CircleKind::PursuerEvader { pursuer, .. } => Ok(CapturePoint {
            point: c.bottom(),
            mode: CaptureMode::Solo(pursuer),
        }),
        CircleKind::PursuerPair { .. } => Err(Error::InvalidArgument(
            "lowest_point expects a pursuer-evader circle".into(),
        )),
    }
}

/// Circle of points reached at the same instant by two pursuers, where
/// `alpha_pp = v_slow / v_fast`.
pub fn pursuer_pair_circle<T: Scalar>(
    p_slow: Point2<T>,
    p_fast: Point2<T>,
    alpha_pp: T,
) -> Result<Circle<T>> {
    if (alpha_pp - T::one()).abs() <= T::lit(1e-12) {
        return Err(Error::EqualSpeed);
    }
    let (center, radius) = ratio_circle(p_slow, p_fast, alpha_pp)?;
    Ok(Circle {
        center,
        radius,
        kind: CircleKind::PursuerPair { slow: 0, fast: 1 },
        ratio: alpha_pp,
    })
}

/// Intersection points of two circles, sorted by ascending `y` (then `x`).
///
/// The chord is found on the radical line, measured along the line of
/// centers, so no coordinate axis is singled out. Points closer together than
/// `1e-9` of the larger radius collapse to one tangency point.
pub fn circle_intersections<T: Scalar>(c1: &Circle<T>, c2: &Circle<T>) -> Result<Vec<Point2<T>>> {
    let (r1, r2) = (c1.radius, c2.radius);
    let rmax = r1.max(r2);
    let tol = T::lit(1e-9) * rmax;
    let delta = c2.center - c1.center;
    let d = delta.norm();

    if d <= T::lit(1e-12) * rmax {
        return if (r1 - r2).abs() <= tol {
            Err(Error::CoincidentCircles)
        } else {
            Ok(Vec::new())
        };
    }
    if d > r1 + r2 + tol || d < (r1 - r2).abs() - tol {
        return Ok(Vec::new());
    }

    // Distance from c1 to the radical line, along the line of centers.
    let a = (r1 * r1 - r2 * r2 + d * d) / (T::two() * d);
    let h = (r1 * r1 - a * a).max(T::zero()).sqrt();
    let u = delta * (T::one() / d);
    let mid = c1.center + u * a;
    if T::two() * h <= tol {
        return Ok(vec![mid]);
    }
    let off = Point2::new(-u.y * h, u.x * h);
    let mut pts = vec![mid + off, mid - off];
    pts.sort_by(|p, q| p.y.partial_cmp(&q.y).unwrap().then(p.x.partial_cmp(&q.x).unwrap()));
    Ok(pts)
}

/// Lowest point of the lens-shaped intersection of two pursuer-evader disks.
///
/// Pursuer `p_a` is slot 0 and `p_b` is slot 1 in the returned mode; use
/// [`CapturePoint::relabel`] to map slots to real indices.
pub fn cooperative_lowest_point<T: Scalar>(
    p_a: Point2<T>,
    p_b: Point2<T>,
    e: Point2<T>,
    alpha_a: T,
    alpha_b: T,
) -> Result<CapturePoint<T>> {
    let ca = apollonius_circle(p_a, e, alpha_a)?;
    let cb = apollonius_circle(p_b, e, alpha_b)?
        .with_kind(CircleKind::PursuerEvader { pursuer: 1, evader: 0 });
    let solo_a = CapturePoint { point: ca.bottom(), mode: CaptureMode::Solo(0) };
    let solo_b = CapturePoint { point: cb.bottom(), mode: CaptureMode::Solo(1) };

    if cb.contains_circle(&ca) {
        return Ok(solo_a);
    }
    if ca.contains_circle(&cb) {
        return Ok(solo_b);
    }
    match (cb.contains(solo_a.point), ca.contains(solo_b.point)) {
        (true, true) => {
            return Ok(if solo_b.point.y < solo_a.point.y { solo_b } else { solo_a });
        }
        (true, false) => return Ok(solo_a),
        (false, true) => return Ok(solo_b),
        (false, false) => {}
    }
    let pts = match circle_intersections(&ca, &cb) {
        Err(Error::CoincidentCircles) => return Ok(solo_a),
        other => other?,
    };
    match pts.first() {
        Some(&point) => Ok(CapturePoint { point, mode: CaptureMode::Simultaneous(0, 1) }),
        // The evader lies inside both disks, so disjoint disks cannot happen;
        // only rounding at near-tangency lands here.
        None => Ok(if solo_a.point.y >= solo_b.point.y { solo_a } else { solo_b }),
    }
}

/// Intermediate quantities of the closed-form simultaneous-capture height.
///
/// `i` is the slower pursuer and `i'` the faster one. Centers and radii are
/// those of the two pursuer-evader circles and of the pursuer-pair circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoopTerms<T> {
    pub circle_i: Circle<T>,
    pub circle_iprime: Circle<T>,
    pub pair: Circle<T>,
    pub f: T,
    pub g: T,
    pub d: T,
    pub r: T,
    /// Signed root `R/2 + x'(x_i - x_i') + y'(y_i - y_i')`, with `W^2 = r'^2 D - G`.
    pub w: T,
}

impl<T: Scalar> CoopTerms<T> {
    pub fn new(
        p_i: Point2<T>,
        p_iprime: Point2<T>,
        e: Point2<T>,
        alpha_i: T,
        alpha_iprime: T,
        alpha_pp: T,
    ) -> Result<Self> {
        let ci = apollonius_circle(p_i, e, alpha_i)?;
        let cj = apollonius_circle(p_iprime, e, alpha_iprime)?
            .with_kind(CircleKind::PursuerEvader { pursuer: 1, evader: 0 });
        let pair = pursuer_pair_circle(p_i, p_iprime, alpha_pp)?;
        let (xi, yi, ri) = (ci.center.x, ci.center.y, ci.radius);
        let (xj, yj, rj) = (cj.center.x, cj.center.y, cj.radius);
        let (xp, yp, rp) = (pair.center.x, pair.center.y, pair.radius);
        let half = T::lit(0.5);

        let d = (xi - xj).powi(2) + (yi - yj).powi(2);
        let r = ri * ri - rj * rj - xi * xi + xj * xj - yi * yi + yj * yj;
        let f = yp * (xi - xj).powi(2) - (yi - yj) * (half * r - xp * (xj - xi));
        let w = half * r + xp * (xi - xj) + yp * (yi - yj);
        let g = rp * rp * d - w * w;
        Ok(Self { circle_i: ci, circle_iprime: cj, pair, f, g, d, r, w })
    }

    /// `x_i - x_i'`, the horizontal offset of the two evader-circle centers.
    pub fn dx(&self) -> T {
        self.circle_i.center.x - self.circle_iprime.center.x
    }

    pub fn dy(&self) -> T {
        self.circle_i.center.y - self.circle_iprime.center.y
    }

    /// Lower root `(F - sqrt(dx^2 G)) / D` of the intersection quadratic.
    pub fn lower_root(&self) -> T {
        (self.f - (self.dx().powi(2) * self.g).sqrt()) / self.d
    }
}

/// Simultaneous-capture height from the closed-form `F/G/D/R` expression.
///
/// `p_iprime` must be strictly faster than `p_i`, with
/// `alpha_pp = v_i / v_i' < 1`. Serves as a cross-check on the direct
/// two-circle intersection used by [`cooperative_lowest_point`].
pub fn vs_closed_form<T: Scalar>(
    p_i: Point2<T>,
    p_iprime: Point2<T>,
    e: Point2<T>,
    alpha_i: T,
    alpha_iprime: T,
    alpha_pp: T,
) -> Result<T> {
    let terms = CoopTerms::new(p_i, p_iprime, e, alpha_i, alpha_iprime, alpha_pp)?;
    let scale = terms.circle_i.radius.max(terms.circle_iprime.radius);
    if terms.d <= (T::lit(1e-12) * scale).powi(2) {
        return Err(Error::DegenerateConfiguration("D vanishes: evader circles are concentric"));
    }
    // The discriminant dx^2 G is zero exactly when both crossings share a height.
    if terms.dx().powi(2) * terms.g <= T::lit(1e-12) * terms.pair.radius.powi(2) * terms.d.powi(2) {
        return Err(Error::DegenerateConfiguration("G vanishes: intersection heights coincide"));
    }
    Ok(terms.lower_root())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p(x: f64, y: f64) -> Point2<f64> {
        Point2::new(x, y)
    }

    #[test]
    fn collinear_tail_chase_circle() {
        let c = apollonius_circle(p(0.0, 0.0), p(0.0, 3.0), 0.5).unwrap();
        assert_abs_diff_eq!(c.center.x, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.center.y, 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.radius, 2.0, epsilon = 1e-12);
        let low = lowest_point(&c).unwrap();
        assert_eq!(low.mode, CaptureMode::Solo(0));
        assert_abs_diff_eq!(low.point.y, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn example_one_pairs() {
        let c11 = apollonius_circle(p(-1.5, 4.2), p(4.1, 11.0), 0.81).unwrap();
        assert_abs_diff_eq!(c11.bottom().y, 3.225, epsilon = 1e-3);
        let c22 = apollonius_circle(p(9.3, 4.5), p(5.5, 12.2), 0.77 / 1.04).unwrap();
        assert_abs_diff_eq!(c22.center.x, 0.890, epsilon = 1e-3);
        assert_abs_diff_eq!(c22.bottom().y, 7.472, epsilon = 1e-3);
    }

    #[test]
    fn degenerate_circle_inputs() {
        assert!(matches!(
            apollonius_circle(p(1.0, 1.0), p(1.0, 1.0), 0.5),
            Err(Error::DegenerateInput(_))
        ));
        for alpha in [0.0, 1.0, 1.2, -0.3, f64::NAN] {
            assert!(apollonius_circle(p(0.0, 0.0), p(0.0, 1.0), alpha).is_err());
        }
    }

    #[test]
    fn pursuer_pair_circles() {
        let c = pursuer_pair_circle(p(0.0, 0.0), p(4.0, 0.0), 0.5).unwrap();
        assert_abs_diff_eq!(c.center.x, -4.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.radius, 8.0 / 3.0, epsilon = 1e-12);
        assert!(matches!(c.kind, CircleKind::PursuerPair { .. }));
        assert!(lowest_point(&c).is_err());

        let c = pursuer_pair_circle(p(0.0, 0.0), p(0.0, 4.0), 0.8).unwrap();
        assert_abs_diff_eq!(c.center.y, -7.111, epsilon = 1e-3);
        assert_abs_diff_eq!(c.radius, 8.889, epsilon = 1e-3);
        // time-equidistance: |S - slow| / v_slow == |S - fast| / v_fast
        for k in 0..360 {
            let th = (k as f64).to_radians();
            let s = c.center + p(th.cos(), th.sin()) * c.radius;
            let t_slow = s.dist(p(0.0, 0.0)) / 0.8;
            let t_fast = s.dist(p(0.0, 4.0)) / 1.0;
            assert_abs_diff_eq!(t_slow, t_fast, epsilon = 1e-9 * t_fast.max(1.0));
        }

        assert_eq!(pursuer_pair_circle(p(0.0, 0.0), p(4.0, 0.0), 1.0), Err(Error::EqualSpeed));
    }

    fn raw(cx: f64, cy: f64, r: f64) -> Circle<f64> {
        Circle {
            center: p(cx, cy),
            radius: r,
            kind: CircleKind::PursuerEvader { pursuer: 0, evader: 0 },
            ratio: 0.5,
        }
    }

    #[test]
    fn intersections_tangent_and_secant() {
        let pts = circle_intersections(&raw(0.0, 0.0, 1.0), &raw(2.0, 0.0, 1.0)).unwrap();
        assert_eq!(pts.len(), 1);
        assert_abs_diff_eq!(pts[0].x, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pts[0].y, 0.0, epsilon = 1e-12);

        let pts = circle_intersections(&raw(0.0, 0.0, 5.0), &raw(6.0, 0.0, 5.0)).unwrap();
        assert_eq!(pts.len(), 2);
        assert_abs_diff_eq!(pts[0].x, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pts[0].y, -4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pts[1].y, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn intersections_vertical_centers_and_disjoint() {
        // centers share x: the chord is horizontal
        let pts = circle_intersections(&raw(1.0, 0.0, 5.0), &raw(1.0, 8.0, 5.0)).unwrap();
        assert_eq!(pts.len(), 2);
        assert_abs_diff_eq!(pts[0].y, 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pts[1].y, 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pts[0].x, -2.0, epsilon = 1e-12);

        assert!(circle_intersections(&raw(0.0, 0.0, 1.0), &raw(5.0, 0.0, 1.0)).unwrap().is_empty());
        assert!(circle_intersections(&raw(0.0, 0.0, 5.0), &raw(0.5, 0.0, 1.0)).unwrap().is_empty());
        assert!(circle_intersections(&raw(0.0, 0.0, 5.0), &raw(0.0, 0.0, 1.0)).unwrap().is_empty());
        assert_eq!(
            circle_intersections(&raw(2.0, 3.0, 1.5), &raw(2.0, 3.0, 1.5)),
            Err(Error::CoincidentCircles)
        );
    }

    #[test]
    fn symmetric_flanking_pair_is_simultaneous() {
        let ca = apollonius_circle(p(0.0, 0.0), p(5.0, 4.0), 0.5).unwrap();
        let cb = apollonius_circle(p(10.0, 0.0), p(5.0, 4.0), 0.5).unwrap();
        let pts = circle_intersections(&ca, &cb).unwrap();
        assert_abs_diff_eq!(pts[0].x, 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pts[0].y, 1.403, epsilon = 1e-3);

        let cp = cooperative_lowest_point(p(0.0, 0.0), p(10.0, 0.0), p(5.0, 4.0), 0.5, 0.5).unwrap();
        assert_eq!(cp.mode, CaptureMode::Simultaneous(0, 1));
        assert_abs_diff_eq!(cp.point.x, 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cp.point.y, pts[0].y, epsilon = 1e-15);
    }

    #[test]
    fn containment_gives_solo_capture() {
        // A slow pursuer far away yields a huge disk that swallows the near one.
        let e = p(0.0, 5.0);
        let near = p(0.0, 3.0);
        let far = p(40.0, 5.0);
        let ca = apollonius_circle(near, e, 0.5).unwrap();
        let cb = apollonius_circle(far, e, 0.9).unwrap();
        assert!(cb.contains_circle(&ca));
        let cp = cooperative_lowest_point(near, far, e, 0.5, 0.9).unwrap();
        assert_eq!(cp.mode, CaptureMode::Solo(0));
        assert_eq!(cp.point, ca.bottom());
        let swapped = cooperative_lowest_point(far, near, e, 0.9, 0.5).unwrap();
        assert_eq!(swapped.mode, CaptureMode::Solo(1));
        assert_eq!(swapped.point, ca.bottom());
    }

    #[test]
    fn solo_arc_regime_when_intersection_is_higher() {
        // Circles cross, but the lowest point of the second disk is already
        // inside the first; the lower crossing sits above it.
        let e = p(7.0, 11.0);
        let pa = p(2.0, 12.0);
        let pb = p(8.8, 5.0);
        let (aa, ab) = (0.75, 0.7);
        let ca = apollonius_circle(pa, e, aa).unwrap();
        let cb = apollonius_circle(pb, e, ab).unwrap();
        let pts = circle_intersections(&ca, &cb).unwrap();
        assert_eq!(pts.len(), 2);
        assert!(pts[0].y > cb.bottom().y);
        assert!(ca.contains(cb.bottom()));
        let cp = cooperative_lowest_point(pa, pb, e, aa, ab).unwrap();
        assert_eq!(cp.mode, CaptureMode::Solo(1));
        assert_eq!(cp.point, cb.bottom());
    }

    #[test]
    fn closed_form_matches_intersection() {
        // P_i slower (v=1), P_i' faster (v=1.25), evader v=0.6
        let (pi, pj, e) = (p(0.3, 0.1), p(9.7, 0.4), p(5.2, 4.1));
        let (ai, aj) = (0.6, 0.48);
        let cp = cooperative_lowest_point(pi, pj, e, ai, aj).unwrap();
        assert!(cp.mode.is_simultaneous());
        let y = vs_closed_form(pi, pj, e, ai, aj, 0.8).unwrap();
        assert_abs_diff_eq!(y, cp.point.y, epsilon = 1e-9 * cp.point.y.abs());
    }

    #[test]
    fn closed_form_degeneracies() {
        // Same evader-circle center for both pursuers: D = 0.
        let e = p(0.0, 5.0);
        let pi = p(0.0, 0.0);
        let (ai, aj) = (0.5, 0.4);
        // c = (E - a^2 P)/(1 - a^2): choose P' on the same vertical line so the
        // centers coincide.
        let k_i = ai * ai / (1.0 - ai * ai);
        let k_j = aj * aj / (1.0 - aj * aj);
        // c_y = E_y + k (E_y - P_y); equal centers need k_i (E_y - P_y) = k_j (E_y - P'_y)
        let pj = p(0.0, e.y - k_i * (e.y - pi.y) / k_j);
        assert!(matches!(
            vs_closed_form(pi, pj, e, ai, aj, aj / ai),
            Err(Error::DegenerateConfiguration(_))
        ));

        // Evader-circle centers on one vertical line: both crossings share a
        // height and the discriminant vanishes.
        let e = p(0.0, 5.0);
        let pi = p(-2.0, 0.0);
        let (ai, aj) = (0.5, 0.4);
        let xj = e.x - k_i * (e.x - pi.x) / k_j;
        let pj = p(xj, 8.0);
        let t = CoopTerms::new(pi, pj, e, ai, aj, aj / ai).unwrap();
        assert_abs_diff_eq!(t.dx(), 0.0, epsilon = 1e-12);
        let pts = circle_intersections(&t.circle_i, &t.circle_iprime).unwrap();
        assert_eq!(pts.len(), 2);
        assert_abs_diff_eq!(pts[0].y, pts[1].y, epsilon = 1e-9);
        assert!(matches!(
            vs_closed_form(pi, pj, e, ai, aj, aj / ai),
            Err(Error::DegenerateConfiguration(_))
        ));
        assert_eq!(vs_closed_form(pi, pj, e, ai, aj, 1.0), Err(Error::EqualSpeed));
    }
}
