//! The game's value, its gradient, and the HJI check.
//!
//! `V(x)` is the frozen payoff of evaders already out of play plus the best
//! assignment's sum of capture heights. Off dispersal surfaces `V` is smooth
//! and its gradient follows from each evader's capture point: the closed form
//! of the circle's lowest point for solo capture, and implicit differentiation
//! of the two circle equations for simultaneous capture.

use serde::{Deserialize, Serialize};

use crate::assignment::{enumerate_assignments, game_of_kind, select_best, tie_tolerance, Assignment};
use crate::error::{Error, Result};
use crate::geometry::{cooperative_lowest_point, vs_closed_form, CaptureMode, CoopTerms, Point2};
use crate::scalar::Scalar;
use crate::state::{GameState, SpeedTable};
use crate::strategy::{team_headings, Heading, Side, TeamPolicy};

/// `dV/dx` laid out like [`GameState::coordinates`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueGradient<T> {
    pub components: Vec<T>,
    pub n_pursuers: usize,
}

impl<T: Scalar> ValueGradient<T> {
    fn zeros(n_pursuers: usize, n_evaders: usize) -> Self {
        Self { components: vec![T::zero(); 2 * (n_pursuers + n_evaders)], n_pursuers }
    }

    pub fn pursuer(&self, i: usize) -> Point2<T> {
        Point2::new(self.components[2 * i], self.components[2 * i + 1])
    }

    pub fn evader(&self, j: usize) -> Point2<T> {
        let k = 2 * (self.n_pursuers + j);
        Point2::new(self.components[k], self.components[k + 1])
    }

    pub fn norm(&self) -> T {
        self.components.iter().map(|&c| c * c).sum::<T>().sqrt()
    }

    fn add_pursuer(&mut self, i: usize, g: Point2<T>) {
        self.components[2 * i] = self.components[2 * i] + g.x;
        self.components[2 * i + 1] = self.components[2 * i + 1] + g.y;
    }

    fn add_evader(&mut self, j: usize, g: Point2<T>) {
        let k = 2 * (self.n_pursuers + j);
        self.components[k] = self.components[k] + g.x;
        self.components[k + 1] = self.components[k + 1] + g.y;
    }
}

/// The optimal assignment, or the outside-winning-region error.
pub fn active_assignment<T: Scalar>(state: &GameState<T>, speeds: &SpeedTable<T>) -> Result<Assignment<T>> {
    let all = enumerate_assignments(state, speeds)?;
    if let Some(best) = select_best(all.iter().filter(|a| a.feasible())) {
        return Ok(best.clone());
    }
    if all.is_empty() {
        // No evader left in play.
        return Ok(Assignment {
            pairs: Default::default(),
            potential: Default::default(),
            plans: Default::default(),
            value: T::zero(),
            unstoppable: Vec::new(),
        });
    }
    let report = game_of_kind(state, speeds)?;
    Err(Error::OutsideWinRegion { unstoppable: report.unstoppable_evaders })
}

/// Value of the game at `state`.
pub fn value<T: Scalar>(state: &GameState<T>, speeds: &SpeedTable<T>) -> Result<T> {
    Ok(state.frozen_payoff() + active_assignment(state, speeds)?.value)
}

/// Gap between the best and second-best feasible assignment values.
pub fn dispersal_gap<T: Scalar>(state: &GameState<T>, speeds: &SpeedTable<T>) -> Result<T> {
    let all = enumerate_assignments(state, speeds)?;
    let values: Vec<T> = all.iter().filter(|a| a.feasible()).map(|a| a.value).collect();
    match values.as_slice() {
        [best, second, ..] => Ok(*best - *second),
        _ => Err(Error::FewerThanTwoAssignments),
    }
}

/// Gradient of the solo capture height `c_y - r` with respect to `(P, E)`.
pub fn solo_gradient<T: Scalar>(p: Point2<T>, e: Point2<T>, alpha: T) -> Result<(Point2<T>, Point2<T>)> {
    let d = p.dist(e);
    if !(d > T::zero()) {
        return Err(Error::DegenerateInput("pursuer and evader coincide"));
    }
    let k = alpha / (T::one() - alpha * alpha);
    let u = (e - p) * (T::one() / d);
    let de = Point2::new(-k * u.x, (T::one() - alpha * u.y) / (T::one() - alpha * alpha));
    let dp = Point2::new(k * u.x, k * (u.y - alpha));
    Ok((dp, de))
}

/// Gradient of the simultaneous capture height at `s`, the lower crossing of
/// the circles `|S - E| = alpha_k |S - P_k|`. Returns `(dP_a, dP_b, dE)`.
pub fn simultaneous_gradient<T: Scalar>(
    s: Point2<T>,
    p_a: Point2<T>,
    p_b: Point2<T>,
    e: Point2<T>,
    alpha_a: T,
    alpha_b: T,
) -> Result<(Point2<T>, Point2<T>, Point2<T>)> {
    let two = T::two();
    let normal = |p: Point2<T>, a: T| (s - e) * two - (s - p) * (two * a * a);
    let (na, nb) = (normal(p_a, alpha_a), normal(p_b, alpha_b));
    let det = na.x * nb.y - na.y * nb.x;
    let scale = na.norm() * nb.norm();
    if !(det.abs() > T::lit(1e-12) * scale) {
        return Err(Error::DegenerateConfiguration("circles cross tangentially"));
    }
    // dS_y = (nb.x dg_a - na.x dg_b) / det, where dg_k is the partial of
    // |S - E|^2 - alpha_k^2 |S - P_k|^2 with S held fixed.
    let de_g = (s - e) * (-two);
    let dpa_g = (s - p_a) * (two * alpha_a * alpha_a);
    let dpb_g = (s - p_b) * (two * alpha_b * alpha_b);
    let dpa = dpa_g * (nb.x / det);
    let dpb = dpb_g * (-na.x / det);
    let de = de_g * ((nb.x - na.x) / det);
    Ok((dpa, dpb, de))
}

/// Analytic gradient of [`value`].
///
/// Errors on dispersal surfaces, where two assignments tie and `V` has a kink.
pub fn value_gradient<T: Scalar>(state: &GameState<T>, speeds: &SpeedTable<T>) -> Result<ValueGradient<T>> {
    let best = active_assignment(state, speeds)?;
    match dispersal_gap(state, speeds) {
        Ok(gap) if gap <= tie_tolerance(best.value) => {
            return Err(Error::OnDispersalSurface { gap: gap.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(_) | Err(Error::FewerThanTwoAssignments) => {}
        Err(other) => return Err(other),
    }
    let mut grad = ValueGradient::zeros(state.n_pursuers(), state.n_evaders());
    for (&j, plan) in &best.plans {
        let e = state.evader(j);
        match plan.mode {
            CaptureMode::Solo(i) => {
                let (dp, de) = solo_gradient(state.pursuer(i), e, speeds.alpha(i, j))?;
                grad.add_pursuer(i, dp);
                grad.add_evader(j, de);
            }
            CaptureMode::Simultaneous(a, b) => {
                let (dpa, dpb, de) = simultaneous_gradient(
                    plan.point,
                    state.pursuer(a),
                    state.pursuer(b),
                    e,
                    speeds.alpha(a, j),
                    speeds.alpha(b, j),
                )?;
                grad.add_pursuer(a, dpa);
                grad.add_pursuer(b, dpb);
                grad.add_evader(j, de);
            }
        }
    }
    Ok(grad)
}

/// Central-difference gradient of [`value`], step `1e-6 * max(1, |x_k|)`.
pub fn finite_difference_gradient<T: Scalar>(state: &GameState<T>, speeds: &SpeedTable<T>) -> Result<Vec<T>> {
    let x = state.coordinates();
    let mut out = Vec::with_capacity(x.len());
    for (k, &xk) in x.iter().enumerate() {
        let h = T::lit(1e-6) * xk.abs().max(T::one());
        let hi = value(&state.with_coordinate(k, xk + h), speeds)?;
        let lo = value(&state.with_coordinate(k, xk - h), speeds)?;
        out.push((hi - lo) / (T::two() * h));
    }
    Ok(out)
}

/// `dV/dx . f(x, u_P, u_E)` for the given headings and gradient.
pub fn hamiltonian<T: Scalar>(
    speeds: &SpeedTable<T>,
    grad: &ValueGradient<T>,
    pursuer_headings: &[Option<Heading<T>>],
    evader_headings: &[Option<Heading<T>>],
) -> T {
    let p = pursuer_headings.iter().enumerate().filter_map(|(i, h)| {
        h.map(|h| speeds.pursuer_speeds[i] * grad.pursuer(i).dot(h.as_vector()))
    });
    let e = evader_headings.iter().enumerate().filter_map(|(j, h)| {
        h.map(|h| speeds.evader_speeds[j] * grad.evader(j).dot(h.as_vector()))
    });
    p.chain(e).sum()
}

/// HJI residual `dV/dx . f` under saddle-point headings; zero where `V` is
/// a regular solution.
pub fn hji_residual<T: Scalar>(state: &GameState<T>, speeds: &SpeedTable<T>) -> Result<T> {
    let grad = value_gradient(state, speeds)?;
    let best = active_assignment(state, speeds)?;
    let hp = team_headings(state, speeds, &TeamPolicy::Optimal, Side::Pursuers, &best)?;
    let he = team_headings(state, speeds, &TeamPolicy::Optimal, Side::Evaders, &best)?;
    Ok(hamiltonian(speeds, &grad, &hp, &he))
}

/// Relative distance from the optimal assignment to a solo/simultaneous mode
/// switch of any cooperating pair; `None` when no pair is committed.
pub fn mode_boundary_margin<T: Scalar>(state: &GameState<T>, speeds: &SpeedTable<T>) -> Result<Option<T>> {
    let best = active_assignment(state, speeds)?;
    let mut margin: Option<T> = None;
    for (&j, set) in &best.potential {
        let &[a, b] = set.as_slice() else { continue };
        let e = state.evader(j);
        let ca = crate::geometry::apollonius_circle(state.pursuer(a), e, speeds.alpha(a, j))?;
        let cb = crate::geometry::apollonius_circle(state.pursuer(b), e, speeds.alpha(b, j))?;
        let m = ((cb.center.dist(ca.bottom()) - cb.radius).abs() / cb.radius)
            .min((ca.center.dist(cb.bottom()) - ca.radius).abs() / ca.radius);
        margin = Some(margin.map_or(m, |x| x.min(m)));
    }
    Ok(margin)
}

/// Partial derivatives of the closed-form terms `F`, `G`, `D` with respect to
/// `(x_Pi, y_Pi, x_Pi', y_Pi', x_E, y_E)`, where `P_i` is the slower pursuer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoopDerivs<T> {
    pub terms: CoopTerms<T>,
    pub coords: [T; 6],
    pub df: [T; 6],
    pub dg: [T; 6],
    pub dd: [T; 6],
}

impl<T: Scalar> CoopDerivs<T> {
    pub fn new(
        p_i: Point2<T>,
        p_iprime: Point2<T>,
        e: Point2<T>,
        alpha_i: T,
        alpha_iprime: T,
        alpha_pp: T,
    ) -> Result<Self> {
        let t = CoopTerms::new(p_i, p_iprime, e, alpha_i, alpha_iprime, alpha_pp)?;
        let one = T::one();
        let two = T::two();
        let half = T::lit(0.5);
        let (ai2, aj2, a2) = (alpha_i * alpha_i, alpha_iprime * alpha_iprime, alpha_pp * alpha_pp);
        let (ki, kj, k) = (one / (one - ai2), one / (one - aj2), one / (one - a2));
        let ke = ki - kj;
        let (xi, yi) = (t.circle_i.center.x, t.circle_i.center.y);
        let (xj, yj) = (t.circle_iprime.center.x, t.circle_iprime.center.y);
        let (xp, yp, rp) = (t.pair.center.x, t.pair.center.y, t.pair.radius);
        let (dx, dy) = (xi - xj, yi - yj);
        let (d, r, w) = (t.d, t.r, t.w);
        let rp2 = rp * rp;

        let df = [
            ai2 * ki * (two * yp * (xj - xi) + dy * (xp - p_i.x)) + (xj - xi) * dy * k,
            ai2 * ki * (half * r + xp * dx - dy * p_i.y) + dx * dx * k,
            -aj2 * kj * (two * yp * (xj - xi) + dy * (xp - p_iprime.x)) - a2 * (xj - xi) * dy * k,
            -aj2 * kj * (half * r + xp * dx - dy * p_iprime.y) - a2 * dx * dx * k,
            ke * (two * yp * dx + dy * (e.x - xp)),
            ke * (dy * e.y - half * r + xp * (xj - xi)),
        ];
        // `w` is the signed square root of `r'^2 D - G`.
        let dg = [
            -two * ai2 * ki * (dx * rp2 + (p_i.x - xp) * w) + two * k * (a2 * k * (p_i.x - p_iprime.x) * d - dx * w),
            -two * ai2 * ki * (dy * rp2 + (p_i.y - yp) * w) + two * k * (a2 * k * (p_i.y - p_iprime.y) * d - dy * w),
            two * aj2 * kj * (dx * rp2 + (p_iprime.x - xp) * w) - two * a2 * k * (k * (p_i.x - p_iprime.x) * d - dx * w),
            two * aj2 * kj * (dy * rp2 + (p_iprime.y - yp) * w) - two * a2 * k * (k * (p_i.y - p_iprime.y) * d - dy * w),
            two * ke * (dx * rp2 + (e.x - xp) * w),
            two * ke * (dy * rp2 + (e.y - yp) * w),
        ];
        let dd = [
            -two * ai2 * ki * dx,
            -two * ai2 * ki * dy,
            two * aj2 * kj * dx,
            two * aj2 * kj * dy,
            two * ke * dx,
            two * ke * dy,
        ];
        let coords = [p_i.x, p_i.y, p_iprime.x, p_iprime.y, e.x, e.y];
        Ok(Self { terms: t, coords, df, dg, dd })
    }

    /// Gradient of the lower root `(F - |dx| sqrt(G)) / D` by the quotient rule.
    pub fn value_gradient(&self) -> Result<[T; 6]> {
        let t = &self.terms;
        let adx = t.dx().abs();
        if !(t.g > T::zero()) || !(adx > T::zero()) || !(t.d > T::zero()) {
            return Err(Error::DegenerateConfiguration("closed form is not differentiable here"));
        }
        let sg = t.g.sqrt();
        let v = t.lower_root();
        let one = T::one();
        let (ai2, aj2) = {
            let ci = t.circle_i.ratio;
            let cj = t.circle_iprime.ratio;
            (ci * ci, cj * cj)
        };
        let (ki, kj) = (one / (one - ai2), one / (one - aj2));
        let ke = ki - kj;
        let (dx, dy) = (t.dx(), t.dy());
        let two = T::two();
        let xterm = two * v + sg / adx;
        let extra = [
            ai2 * ki * dx * xterm,
            two * ai2 * ki * dy * v,
            -aj2 * kj * dx * xterm,
            -two * aj2 * kj * dy * v,
            -ke * dx * xterm,
            -two * ke * dy * v,
        ];
        let c = T::lit(0.5) * adx / sg;
        let mut out = [T::zero(); 6];
        for k in 0..6 {
            out[k] = (self.df[k] - c * self.dg[k] + extra[k]) / t.d;
        }
        Ok(out)
    }
}

/// Relative residuals of the translation and scaling identities satisfied by
/// `F` and `G`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoopIdentities<T> {
    /// `sum over x-coordinates of dF = 0`.
    pub f_x_sum: T,
    /// `sum over y-coordinates of dF = D`.
    pub f_y_sum: T,
    /// `sum over x-coordinates of dG = 0`.
    pub g_x_sum: T,
    /// `sum over y-coordinates of dG = 0`.
    pub g_y_sum: T,
    /// `sum of coordinate * dF = 3F`.
    pub f_euler: T,
    /// `sum of coordinate * dG = 4G`.
    pub g_euler: T,
}

impl<T: Scalar> CoopIdentities<T> {
    pub fn max(&self) -> T {
        [self.f_x_sum, self.f_y_sum, self.g_x_sum, self.g_y_sum, self.f_euler, self.g_euler]
            .into_iter()
            .fold(T::zero(), T::max)
    }
}

fn rel_residual<T: Scalar>(terms: &[T], rhs: T) -> T {
    let lhs: T = terms.iter().copied().sum();
    let scale = terms.iter().map(|t| t.abs()).sum::<T>() + rhs.abs();
    if scale == T::zero() {
        T::zero()
    } else {
        (lhs - rhs).abs() / scale
    }
}

/// Derivative blocks for evader `j` and the pursuer pair `(a, b)`, ordered so
/// the slower pursuer comes first.
pub fn coop_derivs<T: Scalar>(
    state: &GameState<T>,
    speeds: &SpeedTable<T>,
    pair: (usize, usize),
    j: usize,
) -> Result<CoopDerivs<T>> {
    let args = coop_args(state, speeds, pair, j)?;
    CoopDerivs::new(args.0, args.1, args.2, args.3, args.4, args.5)
}

type CoopArgs<T> = (Point2<T>, Point2<T>, Point2<T>, T, T, T);

fn coop_args<T: Scalar>(
    state: &GameState<T>,
    speeds: &SpeedTable<T>,
    (a, b): (usize, usize),
    j: usize,
) -> Result<CoopArgs<T>> {
    speeds.check_dims(state)?;
    let (va, vb) = (speeds.pursuer_speeds[a], speeds.pursuer_speeds[b]);
    let (slow, fast) = if va <= vb { (a, b) } else { (b, a) };
    Ok((
        state.pursuer(slow),
        state.pursuer(fast),
        state.evader(j),
        speeds.alpha(slow, j),
        speeds.alpha(fast, j),
        speeds.pursuer_speeds[slow] / speeds.pursuer_speeds[fast],
    ))
}

/// Checks the translation and homogeneity identities of `F` and `G` for a
/// pair that captures evader `j` simultaneously.
pub fn coop_identities<T: Scalar>(
    state: &GameState<T>,
    speeds: &SpeedTable<T>,
    pair: (usize, usize),
    j: usize,
) -> Result<CoopIdentities<T>> {
    let (a, b) = pair;
    let cp = cooperative_lowest_point(
        state.pursuer(a),
        state.pursuer(b),
        state.evader(j),
        speeds.alpha(a, j),
        speeds.alpha(b, j),
    )?;
    if !cp.mode.is_simultaneous() {
        return Err(Error::DegenerateConfiguration("the pair captures in solo mode"));
    }
    let args = coop_args(state, speeds, pair, j)?;
    vs_closed_form(args.0, args.1, args.2, args.3, args.4, args.5)?;
    let cd = CoopDerivs::new(args.0, args.1, args.2, args.3, args.4, args.5)?;
    let t = &cd.terms;
    let xs = |v: &[T; 6]| [v[0], v[2], v[4]];
    let ys = |v: &[T; 6]| [v[1], v[3], v[5]];
    let weighted = |v: &[T; 6]| -> [T; 6] { std::array::from_fn(|k| cd.coords[k] * v[k]) };
    Ok(CoopIdentities {
        f_x_sum: rel_residual(&xs(&cd.df), T::zero()),
        f_y_sum: rel_residual(&ys(&cd.df), t.d),
        g_x_sum: rel_residual(&xs(&cd.dg), T::zero()),
        g_y_sum: rel_residual(&ys(&cd.dg), T::zero()),
        f_euler: rel_residual(&weighted(&cd.df), T::lit(3.0) * t.f),
        g_euler: rel_residual(&weighted(&cd.dg), T::lit(4.0) * t.g),
    })
}
