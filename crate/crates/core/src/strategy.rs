//! State-feedback guidance.
//!
//! Optimal play is "everyone heads straight for the capture point": a solo
//! pair aims at the lowest point of its Apollonius circle, a cooperating pair
//! and its evader aim at the lowest point of the lens. The same machinery
//! drives a small library of deviating policies used for robustness sweeps.

use serde::{Deserialize, Serialize};

use crate::assignment::{game_of_kind, optimal_assignment, plan_for, Assignment, Matching};
use crate::error::{Error, Result};
use crate::geometry::{apollonius_circle, cooperative_lowest_point, CapturePoint, Point2};
use crate::scalar::Scalar;
use crate::state::{GameState, SpeedTable};

/// Unit heading `(cos h, sin h)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Heading<T> {
    pub cos_h: T,
    pub sin_h: T,
}

impl<T: Scalar> Heading<T> {
    pub fn from_angle(theta: T) -> Self {
        Self { cos_h: theta.cos(), sin_h: theta.sin() }
    }

    /// Straight down, toward the border.
    pub fn down() -> Self {
        Self { cos_h: T::zero(), sin_h: -T::one() }
    }

    pub fn angle(&self) -> T {
        self.sin_h.atan2(self.cos_h)
    }

    pub fn rotated(&self, delta: T) -> Self {
        Self::from_angle(self.angle() + delta)
    }

    pub fn as_vector(&self) -> Point2<T> {
        Point2::new(self.cos_h, self.sin_h)
    }
}

/// Which team a policy drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Pursuers,
    Evaders,
}

impl Side {
    fn name(self) -> &'static str {
        match self {
            Side::Pursuers => "pursuer",
            Side::Evaders => "evader",
        }
    }
}

/// Team-level guidance policy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TeamPolicy<T> {
    /// Saddle-point play for the assignment committed at the start.
    Optimal,
    /// Saddle-point play for a given matching instead of the committed one.
    FixedAssignmentOptimal(Matching),
    /// Pursuers head at their evader's current position.
    PurePursuit,
    /// Aim at the lowest point of each solo circle of the matching, ignoring
    /// cooperation.
    WrongLowestPoint(Matching),
    /// Evaders head straight down.
    StraightToBorder,
    /// Constant angle per agent of the team, in radians.
    FixedHeading(Vec<T>),
    /// Re-solve the assignment from the current state every call.
    ReassignEachStep,
}

impl<T> TeamPolicy<T> {
    pub fn name(&self) -> &'static str {
        match self {
            TeamPolicy::Optimal => "optimal",
            TeamPolicy::FixedAssignmentOptimal(_) => "fixed-assignment",
            TeamPolicy::PurePursuit => "pure-pursuit",
            TeamPolicy::WrongLowestPoint(_) => "wrong-lowest-point",
            TeamPolicy::StraightToBorder => "straight-to-border",
            TeamPolicy::FixedHeading(_) => "fixed-heading",
            TeamPolicy::ReassignEachStep => "reassign",
        }
    }

    pub fn check_side(&self, side: Side) -> Result<()> {
        match (self, side) {
            (TeamPolicy::PurePursuit, Side::Evaders) | (TeamPolicy::StraightToBorder, Side::Pursuers) => {
                Err(Error::PolicySideMismatch { policy: self.name(), side: side.name() })
            }
            _ => Ok(()),
        }
    }
}

/// Distance below which an agent counts as sitting on its aimpoint.
pub fn aim_tolerance<T: Scalar>(aim: Point2<T>) -> T {
    T::lit(1e-12) * aim.norm().max(T::one())
}

/// Capture point of a solo pursuer-evader pair.
pub fn aimpoint_solo<T: Scalar>(p: Point2<T>, e: Point2<T>, alpha: T) -> Result<Point2<T>> {
    Ok(apollonius_circle(p, e, alpha)?.bottom())
}

/// Shared aimpoint of a cooperating pair and its evader.
///
/// When the lens bottoms out on one arc the returned mode is solo and names
/// the capturing slot (0 for `p_a`, 1 for `p_b`).
pub fn aimpoint_cooperative<T: Scalar>(
    p_a: Point2<T>,
    p_b: Point2<T>,
    e: Point2<T>,
    alpha_a: T,
    alpha_b: T,
) -> Result<CapturePoint<T>> {
    cooperative_lowest_point(p_a, p_b, e, alpha_a, alpha_b)
}

/// Unit heading from `from` toward `aim`; errors when closer than `eps`.
pub fn heading_to<T: Scalar>(from: Point2<T>, aim: Point2<T>, eps: T) -> Result<Heading<T>> {
    let d = aim - from;
    let n = d.norm();
    if !(n >= eps) || n == T::zero() {
        return Err(Error::AtAimpoint);
    }
    Ok(Heading { cos_h: d.x / n, sin_h: d.y / n })
}

fn head_or<T: Scalar>(from: Point2<T>, aim: Point2<T>, fallback: impl FnOnce() -> Heading<T>) -> Heading<T> {
    heading_to(from, aim, aim_tolerance(aim)).unwrap_or_else(|_| fallback())
}

/// Matching actually pursued under `policy`, used to decide which pursuers
/// may capture which evader.
pub fn policy_matching<T: Scalar>(
    state: &GameState<T>,
    speeds: &SpeedTable<T>,
    policy: &TeamPolicy<T>,
    committed: &Assignment<T>,
) -> Result<Matching> {
    Ok(match policy {
        TeamPolicy::FixedAssignmentOptimal(m) | TeamPolicy::WrongLowestPoint(m) => m.clone(),
        TeamPolicy::ReassignEachStep => current_best(state, speeds)?.potential,
        _ => committed.potential.clone(),
    })
}

fn current_best<T: Scalar>(state: &GameState<T>, speeds: &SpeedTable<T>) -> Result<Assignment<T>> {
    match optimal_assignment(state, speeds) {
        Err(Error::NoFeasibleAssignment) => Ok(game_of_kind(state, speeds)?.best_assignment),
        other => other,
    }
}

/// Pursuers of `set` that are still in play and faster than evader `j`.
fn usable_set<T: Scalar>(state: &GameState<T>, speeds: &SpeedTable<T>, j: usize, set: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = set
        .iter()
        .copied()
        .filter(|&i| i < state.n_pursuers() && state.pursuers[i].active && speeds.allowed(i, j))
        .collect();
    out.sort_unstable();
    out.truncate(2);
    out
}

/// Capture plan for evader `j` under `set`, recomputed from the current state.
fn live_plan<T: Scalar>(
    state: &GameState<T>,
    speeds: &SpeedTable<T>,
    j: usize,
    set: &[usize],
) -> Result<Option<CapturePoint<T>>> {
    let set = usable_set(state, speeds, j, set);
    Ok(plan_for(state, speeds, j, &set)?.1)
}

/// Lowest point of the solo circle of pursuer `i` and evader `j`.
fn solo_aim<T: Scalar>(state: &GameState<T>, speeds: &SpeedTable<T>, j: usize, i: usize) -> Result<Point2<T>> {
    aimpoint_solo(state.pursuer(i), state.evader(j), speeds.alpha(i, j))
}

/// Headings for every agent of `side`, indexed by agent; `None` for agents
/// that are out of play or idle.
///
/// `committed` is the assignment fixed at the start of the engagement. All
/// aimpoints are recomputed from `state`, so the policies are closed-loop.
pub fn team_headings<T: Scalar>(
    state: &GameState<T>,
    speeds: &SpeedTable<T>,
    policy: &TeamPolicy<T>,
    side: Side,
    committed: &Assignment<T>,
) -> Result<Vec<Option<Heading<T>>>> {
    policy.check_side(side)?;
    speeds.check_dims(state)?;
    let n = match side {
        Side::Pursuers => state.n_pursuers(),
        Side::Evaders => state.n_evaders(),
    };
    let mut out = vec![None; n];

    if let TeamPolicy::FixedHeading(angles) = policy {
        if angles.len() != n {
            return Err(Error::InvalidArgument(format!(
                "{} fixed headings for {n} {}s",
                angles.len(),
                side.name()
            )));
        }
        for (k, &a) in angles.iter().enumerate() {
            if is_active(state, side, k) {
                out[k] = Some(Heading::from_angle(a));
            }
        }
        return Ok(out);
    }
    if let (TeamPolicy::StraightToBorder, Side::Evaders) = (policy, side) {
        for j in state.active_evaders() {
            out[j] = Some(Heading::down());
        }
        return Ok(out);
    }

    let matching = policy_matching(state, speeds, policy, committed)?;
    for j in state.active_evaders() {
        let e = state.evader(j);
        let set = matching.get(&j).map(|s| usable_set(state, speeds, j, s)).unwrap_or_default();
        match (policy, side) {
            (TeamPolicy::PurePursuit, _) => {
                for &i in &set {
                    out[i] = Some(head_or(state.pursuer(i), e, Heading::down));
                }
            }
            (TeamPolicy::WrongLowestPoint(_), Side::Pursuers) => {
                for &i in &set {
                    let p = state.pursuer(i);
                    let aim = solo_aim(state, speeds, j, i)?;
                    out[i] = Some(head_or(p, aim, || head_or(p, e, Heading::down)));
                }
            }
            (TeamPolicy::WrongLowestPoint(_), Side::Evaders) => {
                let mut aim: Option<Point2<T>> = None;
                for &i in &set {
                    let a = solo_aim(state, speeds, j, i)?;
                    if aim.is_none_or(|b| a.y < b.y) {
                        aim = Some(a);
                    }
                }
                out[j] = Some(aim.map_or_else(Heading::down, |a| head_or(e, a, Heading::down)));
            }
            (_, Side::Pursuers) => {
                if let Some(plan) = live_plan(state, speeds, j, &set)? {
                    for &i in &set {
                        let p = state.pursuer(i);
                        out[i] = Some(head_or(p, plan.point, || head_or(p, e, Heading::down)));
                    }
                }
            }
            (_, Side::Evaders) => {
                let h = match live_plan(state, speeds, j, &set)? {
                    Some(plan) => head_or(e, plan.point, Heading::down),
                    None => Heading::down(),
                };
                out[j] = Some(h);
            }
        }
    }
    Ok(out)
}

fn is_active<T>(state: &GameState<T>, side: Side, k: usize) -> bool {
    match side {
        Side::Pursuers => state.pursuers[k].active,
        Side::Evaders => state.evaders[k].active,
    }
}
