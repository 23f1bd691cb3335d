//! Brute-force reference for the lowest point of an evader's dominance region.
//!
//! The region is `{S : |ES| <= alpha_k |P_k S| for every k}`, the intersection
//! of the evader's Apollonius disks. The oracle finds its lowest point on a
//! square lattice through `E` by best-first branch and bound over lattice
//! blocks, pruning a block when the Lipschitz bound proves it empty. It never
//! touches circle algebra, so it is an independent check on the closed forms.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Block {
    i0: i64,
    i1: i64,
    j0: i64,
    j1: i64,
}

impl Ord for Block {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.j0, self.i0, self.j1, self.i1).cmp(&(other.j0, other.i0, other.j1, other.i1))
    }
}

impl PartialOrd for Block {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lowest lattice point (spacing `resolution`, anchored at the evader) inside
/// every disk `|ES| <= alpha |PS|` of `pursuers = [(P, alpha)]`.
pub fn lattice_lowest_point<T: Scalar>(
    evader: Point2<T>,
    pursuers: &[(Point2<T>, T)],
    resolution: T,
) -> Result<Point2<T>> {
    if !(resolution > T::zero()) || !resolution.is_finite() {
        return Err(Error::InvalidArgument("resolution must be positive".into()));
    }
    if pursuers.is_empty() {
        return Err(Error::InvalidArgument("at least one pursuer is required".into()));
    }
    let mut reach = T::infinity();
    let mut lip = T::one();
    for &(p, a) in pursuers {
        if !(a > T::zero() && a < T::one()) {
            return Err(Error::DegenerateInput("speed ratio must lie in (0, 1)"));
        }
        let d = p.dist(evader);
        if !(d > T::zero()) {
            return Err(Error::DegenerateInput("pursuer sits on the evader"));
        }
        // Farthest point of this disk from the evader.
        reach = reach.min(a * d / (T::one() - a));
        lip = lip.max(T::one() + a);
    }
    let h = resolution;
    let at = |i: T, j: T| Point2::new(evader.x + i * h, evader.y + j * h);
    let f = |s: Point2<T>| {
        pursuers
            .iter()
            .map(|&(p, a)| s.dist(evader) - a * s.dist(p))
            .fold(T::neg_infinity(), T::max)
    };

    let n = (reach / h).ceil().to_i64().ok_or(Error::InvalidArgument("resolution too fine".into()))? + 1;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(Block { i0: -n, i1: n, j0: -n, j1: n }));
    let half = T::lit(0.5);
    while let Some(Reverse(b)) = heap.pop() {
        let (wi, wj) = (b.i1 - b.i0, b.j1 - b.j0);
        if wi == 0 && wj == 0 {
            let s = at(T::lit(b.i0 as f64), T::lit(b.j0 as f64));
            if f(s) <= T::zero() {
                return Ok(s);
            }
            continue;
        }
        let children = if wi >= wj {
            let m = b.i0 + wi / 2;
            [Block { i1: m, ..b }, Block { i0: m + 1, ..b }]
        } else {
            let m = b.j0 + wj / 2;
            [Block { j1: m, ..b }, Block { j0: m + 1, ..b }]
        };
        for c in children {
            let ci = T::lit((c.i0 + c.i1) as f64) * half;
            let cj = T::lit((c.j0 + c.j1) as f64) * half;
            let hd = h * half * T::lit((c.i1 - c.i0) as f64).hypot(T::lit((c.j1 - c.j0) as f64));
            if f(at(ci, cj)) - lip * hd <= T::zero() {
                heap.push(Reverse(c));
            }
        }
    }
    // The evader itself is always a member, so the search cannot run dry.
    Err(Error::DegenerateConfiguration("empty dominance region"))
}
