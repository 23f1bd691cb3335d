//! Pursuer-to-evader assignments.
//!
//! Every evader receives one pursuer or a cooperating pair, and each pursuer
//! serves at most one evader. A pair whose lens-shaped dominance region
//! bottoms out on one of its arcs (solo capture) is reduced to the single
//! pursuer that actually captures; the other one is released.

mod hungarian;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use hungarian::hungarian_assign;

use crate::error::{Error, Result};
use crate::geometry::{apollonius_circle, cooperative_lowest_point, CaptureMode, CapturePoint, CircleKind};
use crate::scalar::Scalar;
use crate::state::{GameState, SpeedTable};

/// Evader index to the (sorted) set of pursuers assigned to it.
pub type Matching = BTreeMap<usize, Vec<usize>>;

/// Default cap on `N + M` for exhaustive enumeration.
pub const DEFAULT_PLAYER_LIMIT: usize = 16;

/// Relative tolerance used to detect ties between assignment values.
pub fn tie_tolerance<T: Scalar>(value: T) -> T {
    T::lit(1e-9) * value.abs().max(T::one())
}

/// One candidate assignment with its capture plan and payoff.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment<T> {
    /// Pursuers that actually capture each evader, after pair reduction.
    pub pairs: Matching,
    /// The matching that was examined before pair reduction.
    pub potential: Matching,
    /// Capture point per evader; missing when no pursuer could be assigned.
    pub plans: BTreeMap<usize, CapturePoint<T>>,
    /// Sum of capture heights over evaders with a plan.
    pub value: T,
    /// Evaders whose capture height is not above the border (or unassigned).
    pub unstoppable: Vec<usize>,
}

impl<T: Scalar> Assignment<T> {
    pub fn feasible(&self) -> bool {
        self.unstoppable.is_empty()
    }

    /// Lexicographic encoding used for deterministic tie-breaking.
    pub fn key(&self) -> Vec<Vec<usize>> {
        self.pairs.values().cloned().collect()
    }

    /// Payoff counting only evaders captured above the border.
    pub fn captured_value(&self) -> T {
        self.plans.values().map(|c| c.point.y).filter(|&y| y > T::zero()).sum()
    }

    /// Pursuer-to-evader lookup.
    pub fn pursuer_targets(&self) -> BTreeMap<usize, usize> {
        self.pairs
            .iter()
            .flat_map(|(&j, set)| set.iter().map(move |&i| (i, j)))
            .collect()
    }
}

/// Outcome of the game of kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Winner {
    Pursuers,
    EvadersPartial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameOfKindReport<T> {
    pub winner: Winner,
    pub unstoppable_evaders: Vec<usize>,
    pub best_assignment: Assignment<T>,
}

/// Capture heights `y_ij` for every pursuer-evader pair; `None` when the
/// pursuer is not faster than the evader or either agent is inactive.
pub fn solo_heights<T: Scalar>(state: &GameState<T>, speeds: &SpeedTable<T>) -> Result<Vec<Vec<Option<T>>>> {
    speeds.check_dims(state)?;
    (0..state.n_pursuers())
        .map(|i| {
            (0..state.n_evaders())
                .map(|j| {
                    if !state.pursuers[i].active || !state.evaders[j].active || !speeds.allowed(i, j) {
                        return Ok(None);
                    }
                    let c = apollonius_circle(state.pursuer(i), state.evader(j), speeds.alpha(i, j))?;
                    Ok(Some(c.bottom().y))
                })
                .collect()
        })
        .collect()
}

/// Whether pursuer `p` alone can stop evader `e` strictly above the border.
pub fn pair_feasible<T: Scalar>(p: usize, e: usize, state: &GameState<T>, speeds: &SpeedTable<T>) -> bool {
    if p >= state.n_pursuers() || e >= state.n_evaders() || speeds.check_dims(state).is_err() {
        return false;
    }
    if !speeds.allowed(p, e) {
        return false;
    }
    apollonius_circle(state.pursuer(p), state.evader(e), speeds.alpha(p, e))
        .map(|c| c.bottom().y > T::zero())
        .unwrap_or(false)
}

/// Capture plan for evader `j` chased by `set`; returns the reduced set.
pub(crate) fn plan_for<T: Scalar>(
    state: &GameState<T>,
    speeds: &SpeedTable<T>,
    j: usize,
    set: &[usize],
) -> Result<(Vec<usize>, Option<CapturePoint<T>>)> {
    let e = state.evader(j);
    match *set {
        [] => Ok((Vec::new(), None)),
        [i] => {
            let c = apollonius_circle(state.pursuer(i), e, speeds.alpha(i, j))?
                .with_kind(CircleKind::PursuerEvader { pursuer: i, evader: j });
            Ok((vec![i], Some(CapturePoint { point: c.bottom(), mode: CaptureMode::Solo(i) })))
        }
        [a, b] => {
            let cp = cooperative_lowest_point(
                state.pursuer(a),
                state.pursuer(b),
                e,
                speeds.alpha(a, j),
                speeds.alpha(b, j),
            )?
            .relabel(a, b);
            let mut reduced = cp.mode.pursuers();
            reduced.sort_unstable();
            Ok((reduced, Some(cp)))
        }
        _ => Err(Error::InvalidArgument(format!(
            "evader {j} has {} pursuers; at most two may cooperate",
            set.len()
        ))),
    }
}

fn build<T: Scalar>(
    potential: Matching,
    parts: Vec<(usize, Vec<usize>, Option<CapturePoint<T>>)>,
) -> Assignment<T> {
    let mut pairs = Matching::new();
    let mut plans = BTreeMap::new();
    let mut unstoppable = Vec::new();
    let mut value = T::zero();
    for (j, reduced, plan) in parts {
        match plan {
            Some(cp) => {
                if !(cp.point.y > T::zero()) {
                    unstoppable.push(j);
                }
                value = value + cp.point.y;
                plans.insert(j, cp);
            }
            None => unstoppable.push(j),
        }
        pairs.insert(j, reduced);
    }
    Assignment { pairs, potential, plans, value, unstoppable }
}

/// Evaluates a given matching on the current state (a forced assignment).
///
/// Keys must be active evaders and every active evader must appear; sets hold
/// one or two active pursuers that are faster than the evader.
pub fn evaluate_matching<T: Scalar>(
    state: &GameState<T>,
    speeds: &SpeedTable<T>,
    matching: &Matching,
) -> Result<Assignment<T>> {
    speeds.check_dims(state)?;
    let mut seen = vec![false; state.n_pursuers()];
    for j in state.active_evaders() {
        if !matching.contains_key(&j) {
            return Err(Error::InvalidArgument(format!("evader {j} is not assigned")));
        }
    }
    let mut parts = Vec::new();
    for (&j, set) in matching {
        if j >= state.n_evaders() || !state.evaders[j].active {
            return Err(Error::InvalidArgument(format!("evader {j} is not in play")));
        }
        for &i in set {
            if i >= state.n_pursuers() || !state.pursuers[i].active {
                return Err(Error::InvalidArgument(format!("pursuer {i} is not in play")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument(format!("pursuer {i} is assigned twice")));
            }
            if !speeds.allowed(i, j) {
                return Err(Error::InvalidArgument(format!(
                    "pursuer {i} is not faster than evader {j}"
                )));
            }
        }
        let mut sorted = set.clone();
        sorted.sort_unstable();
        let (reduced, plan) = plan_for(state, speeds, j, &sorted)?;
        parts.push((j, reduced, plan));
    }
    let potential = matching.iter().map(|(&j, s)| {
        let mut s = s.clone();
        s.sort_unstable();
        (j, s)
    });
    Ok(build(potential.collect(), parts))
}

struct Candidate<T> {
    set: Vec<usize>,
    reduced: Vec<usize>,
    plan: Option<CapturePoint<T>>,
}

/// Enumerates all assignments with the default player limit.
pub fn enumerate_assignments<T: Scalar>(state: &GameState<T>, speeds: &SpeedTable<T>) -> Result<Vec<Assignment<T>>> {
    enumerate_assignments_with_limit(state, speeds, DEFAULT_PLAYER_LIMIT)
}

/// Enumerates every maximal assignment of active pursuers to active evaders.
///
/// At most `N - M` evaders receive a pair, so each evader can still get a
/// pursuer. Structures that leave a usable pursuer idle next to an evader that
/// could take it are dropped: adding a cooperating pursuer never lowers the
/// capture height. Assignments are deduplicated on their reduced pairs and
/// sorted feasible first, then by descending value, then by [`Assignment::key`].
pub fn enumerate_assignments_with_limit<T: Scalar>(
    state: &GameState<T>,
    speeds: &SpeedTable<T>,
    player_limit: usize,
) -> Result<Vec<Assignment<T>>> {
    speeds.check_dims(state)?;
    let pursuers: Vec<usize> = state.active_pursuers().collect();
    let evaders: Vec<usize> = state.active_evaders().collect();
    if pursuers.len() < evaders.len() {
        return Err(Error::OutnumberedPursuers { pursuers: pursuers.len(), evaders: evaders.len() });
    }
    if pursuers.len() + evaders.len() > player_limit {
        return Err(Error::TooManyPlayers { players: pursuers.len() + evaders.len(), limit: player_limit });
    }
    if evaders.is_empty() {
        return Ok(Vec::new());
    }

    let mut options: Vec<Vec<Candidate<T>>> = Vec::with_capacity(evaders.len());
    for &j in &evaders {
        let usable: Vec<usize> = pursuers.iter().copied().filter(|&i| speeds.allowed(i, j)).collect();
        let mut opts = Vec::new();
        for &i in &usable {
            let (reduced, plan) = plan_for(state, speeds, j, &[i])?;
            opts.push(Candidate { set: vec![i], reduced, plan });
        }
        for (k, &a) in usable.iter().enumerate() {
            for &b in &usable[k + 1..] {
                let (reduced, plan) = plan_for(state, speeds, j, &[a, b])?;
                opts.push(Candidate { set: vec![a, b], reduced, plan });
            }
        }
        options.push(opts);
    }

    let ctx = Enumerator {
        state,
        speeds,
        evaders: &evaders,
        pursuers: &pursuers,
        options: &options,
    };
    let mut used = vec![false; state.n_pursuers()];
    let mut chosen: Vec<Option<usize>> = Vec::with_capacity(evaders.len());
    let mut out = Vec::new();
    ctx.recurse(0, pursuers.len() - evaders.len(), &mut used, &mut chosen, &mut out);

    let mut seen = std::collections::BTreeSet::new();
    out.retain(|a: &Assignment<T>| seen.insert(a.pairs.clone()));
    out.sort_by(compare_for_listing);
    Ok(out)
}

fn compare_for_listing<T: Scalar>(a: &Assignment<T>, b: &Assignment<T>) -> Ordering {
    b.feasible()
        .cmp(&a.feasible())
        .then_with(|| b.value.partial_cmp(&a.value).unwrap_or(Ordering::Equal))
        .then_with(|| a.key().cmp(&b.key()))
}

struct Enumerator<'a, T> {
    state: &'a GameState<T>,
    speeds: &'a SpeedTable<T>,
    evaders: &'a [usize],
    pursuers: &'a [usize],
    options: &'a [Vec<Candidate<T>>],
}

impl<T: Scalar> Enumerator<'_, T> {
    fn recurse(
        &self,
        k: usize,
        pairs_left: usize,
        used: &mut [bool],
        chosen: &mut Vec<Option<usize>>,
        out: &mut Vec<Assignment<T>>,
    ) {
        if k == self.evaders.len() {
            if self.is_maximal(used, chosen) {
                out.push(self.assemble(chosen));
            }
            return;
        }
        let mut any = false;
        for (idx, cand) in self.options[k].iter().enumerate() {
            let is_pair = cand.set.len() == 2;
            if (is_pair && pairs_left == 0) || cand.set.iter().any(|&i| used[i]) {
                continue;
            }
            any = true;
            cand.set.iter().for_each(|&i| used[i] = true);
            chosen.push(Some(idx));
            self.recurse(k + 1, pairs_left - usize::from(is_pair), used, chosen, out);
            chosen.pop();
            cand.set.iter().for_each(|&i| used[i] = false);
        }
        if !any {
            chosen.push(None);
            self.recurse(k + 1, pairs_left, used, chosen, out);
            chosen.pop();
        }
    }

    fn is_maximal(&self, used: &[bool], chosen: &[Option<usize>]) -> bool {
        let idle: Vec<usize> = self.pursuers.iter().copied().filter(|&i| !used[i]).collect();
        !chosen.iter().enumerate().any(|(k, c)| {
            let size = c.map_or(0, |idx| self.options[k][idx].set.len());
            size < 2 && idle.iter().any(|&i| self.speeds.allowed(i, self.evaders[k]))
        })
    }

    fn assemble(&self, chosen: &[Option<usize>]) -> Assignment<T> {
        let mut potential = Matching::new();
        let mut parts = Vec::with_capacity(chosen.len());
        for (k, c) in chosen.iter().enumerate() {
            let j = self.evaders[k];
            match c {
                Some(idx) => {
                    let cand = &self.options[k][*idx];
                    potential.insert(j, cand.set.clone());
                    parts.push((j, cand.reduced.clone(), cand.plan));
                }
                None => {
                    potential.insert(j, Vec::new());
                    parts.push((j, Vec::new(), None));
                }
            }
        }
        debug_assert!(parts.len() == self.state.active_evaders().count());
        build(potential, parts)
    }
}

/// Picks the best assignment by value; values within [`tie_tolerance`] of the
/// best are broken by the smallest [`Assignment::key`].
pub fn select_best<'a, T: Scalar>(candidates: impl IntoIterator<Item = &'a Assignment<T>>) -> Option<&'a Assignment<T>> {
    let list: Vec<&Assignment<T>> = candidates.into_iter().collect();
    let best = list.iter().map(|a| a.value).fold(None, |m: Option<T>, v| Some(m.map_or(v, |m| m.max(v))))?;
    let eps = tie_tolerance(best);
    list.into_iter()
        .filter(|a| a.value >= best - eps)
        .min_by(|a, b| a.key().cmp(&b.key()))
}

/// The value-maximizing feasible assignment.
pub fn optimal_assignment<T: Scalar>(state: &GameState<T>, speeds: &SpeedTable<T>) -> Result<Assignment<T>> {
    let all = enumerate_assignments(state, speeds)?;
    select_best(all.iter().filter(|a| a.feasible()))
        .cloned()
        .ok_or(Error::NoFeasibleAssignment)
}

/// Decides whether the pursuers can stop every evader, and otherwise which
/// assignment lets the fewest evaders through (then maximizes the captures).
pub fn game_of_kind<T: Scalar>(state: &GameState<T>, speeds: &SpeedTable<T>) -> Result<GameOfKindReport<T>> {
    let all = enumerate_assignments(state, speeds)?;
    let best = all
        .into_iter()
        .min_by(|a, b| {
            a.unstoppable
                .len()
                .cmp(&b.unstoppable.len())
                .then_with(|| b.captured_value().partial_cmp(&a.captured_value()).unwrap_or(Ordering::Equal))
                .then_with(|| a.key().cmp(&b.key()))
        })
        .ok_or(Error::NoFeasibleAssignment)?;
    let winner = if best.feasible() { Winner::Pursuers } else { Winner::EvadersPartial };
    Ok(GameOfKindReport {
        winner,
        unstoppable_evaders: best.unstoppable.clone(),
        best_assignment: best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;
    use approx::assert_abs_diff_eq;

    fn p(x: f64, y: f64) -> Point2<f64> {
        Point2::new(x, y)
    }

    fn example_one() -> (GameState<f64>, SpeedTable<f64>) {
        (
            GameState::new(&[p(-1.5, 4.2), p(9.3, 4.5)], &[p(4.1, 11.0), p(5.5, 12.2)]),
            SpeedTable::new(vec![1.0, 1.04], vec![0.81, 0.77]).unwrap(),
        )
    }

    #[test]
    fn feasibility_of_single_pairs() {
        let s = GameState::new(&[p(0.0, 10.0)], &[p(0.0, 1.0)]);
        let v = SpeedTable::new(vec![1.0], vec![0.9]).unwrap();
        assert!(!pair_feasible(0, 0, &s, &v));

        let (s, v) = example_one();
        assert!(pair_feasible(0, 0, &s, &v));
        assert!(!pair_feasible(5, 0, &s, &v));

        // Tangent to the border: y = 0 exactly counts as infeasible.
        let s = GameState::new(&[p(0.0, 2.0)], &[p(0.0, 1.0)]);
        let v = SpeedTable::new(vec![2.0], vec![1.0]).unwrap();
        let c = apollonius_circle(s.pursuer(0), s.evader(0), 0.5).unwrap();
        assert_eq!(c.bottom().y, 0.0);
        assert!(!pair_feasible(0, 0, &s, &v));
    }

    #[test]
    fn example_one_values_and_optimum() {
        let (s, v) = example_one();
        let all = enumerate_assignments(&s, &v).unwrap();
        assert_eq!(all.len(), 2);
        assert_abs_diff_eq!(all[0].value, 10.696, epsilon = 1e-3);
        assert_abs_diff_eq!(all[1].value, 8.288, epsilon = 1e-3);
        let best = optimal_assignment(&s, &v).unwrap();
        assert_eq!(best.pairs, Matching::from([(0, vec![0]), (1, vec![1])]));
        assert_abs_diff_eq!(best.value, 10.696, epsilon = 1e-3);
    }

    #[test]
    fn relabeling_pursuers_keeps_the_physical_matching() {
        let (s, v) = example_one();
        let swapped = GameState::new(&[s.pursuer(1), s.pursuer(0)], &[s.evader(0), s.evader(1)]);
        let vs = SpeedTable::new(vec![1.04, 1.0], vec![0.81, 0.77]).unwrap();
        let best = optimal_assignment(&swapped, &vs).unwrap();
        assert_eq!(best.pairs, Matching::from([(0, vec![1]), (1, vec![0])]));
        assert_abs_diff_eq!(best.value, optimal_assignment(&s, &v).unwrap().value, epsilon = 1e-12);
    }

    #[test]
    fn dispersal_tie_picks_smallest_key() {
        // Evaders on the perpendicular bisector of two identical pursuers.
        let s = GameState::new(&[p(-4.0, 1.0), p(4.0, 1.0)], &[p(0.0, 8.0), p(0.0, 11.0)]);
        let v = SpeedTable::new(vec![1.0, 1.0], vec![0.6, 0.6]).unwrap();
        let all = enumerate_assignments(&s, &v).unwrap();
        assert_eq!(all.len(), 2);
        assert_abs_diff_eq!(all[0].value, all[1].value, epsilon = 1e-9);
        let best = optimal_assignment(&s, &v).unwrap();
        assert_eq!(best.pairs, Matching::from([(0, vec![0]), (1, vec![1])]));
    }

    #[test]
    fn one_on_one() {
        let s = GameState::new(&[p(0.0, 0.0)], &[p(0.0, 3.0)]);
        let v = SpeedTable::new(vec![1.0], vec![0.5]).unwrap();
        let all = enumerate_assignments(&s, &v).unwrap();
        assert_eq!(all.len(), 1);
        assert_abs_diff_eq!(all[0].value, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn player_limit_guard() {
        let ps: Vec<_> = (0..9).map(|k| p(k as f64, 0.0)).collect();
        let es: Vec<_> = (0..8).map(|k| p(k as f64, 10.0)).collect();
        let s = GameState::new(&ps, &es);
        let v = SpeedTable::new(vec![1.0; 9], vec![0.5; 8]).unwrap();
        assert_eq!(
            enumerate_assignments(&s, &v).unwrap_err(),
            Error::TooManyPlayers { players: 17, limit: 16 }
        );
        assert!(enumerate_assignments_with_limit(&s, &v, 4).is_err());
    }

    #[test]
    fn more_evaders_than_pursuers_is_rejected() {
        let s = GameState::new(&[p(0.0, 0.0)], &[p(0.0, 3.0), p(1.0, 3.0)]);
        let v = SpeedTable::new(vec![1.0], vec![0.5, 0.5]).unwrap();
        assert!(matches!(enumerate_assignments(&s, &v), Err(Error::OutnumberedPursuers { .. })));
    }

    #[test]
    fn game_of_kind_single_pair() {
        let s = GameState::new(&[p(0.0, 10.0)], &[p(0.0, 1.0)]);
        let v = SpeedTable::new(vec![1.0], vec![0.9]).unwrap();
        let r = game_of_kind(&s, &v).unwrap();
        assert_eq!(r.winner, Winner::EvadersPartial);
        assert_eq!(r.unstoppable_evaders, vec![0]);
        assert_eq!(optimal_assignment(&s, &v).unwrap_err(), Error::NoFeasibleAssignment);

        let (s, v) = example_one();
        assert_eq!(game_of_kind(&s, &v).unwrap().winner, Winner::Pursuers);
    }

    #[test]
    fn slow_pursuer_is_never_assigned() {
        let s = GameState::new(&[p(0.0, 0.0), p(5.0, 0.0)], &[p(2.0, 6.0)]);
        let v = SpeedTable::new(vec![1.0, 0.4], vec![0.5]).unwrap();
        let all = enumerate_assignments(&s, &v).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].pairs, Matching::from([(0, vec![0])]));
        assert!(evaluate_matching(&s, &v, &Matching::from([(0, vec![1])])).is_err());
    }

    #[test]
    fn evaluate_forced_matching() {
        let (s, v) = example_one();
        let a2 = evaluate_matching(&s, &v, &Matching::from([(0, vec![1]), (1, vec![0])])).unwrap();
        assert_abs_diff_eq!(a2.value, 8.288, epsilon = 1e-3);
        assert!(evaluate_matching(&s, &v, &Matching::from([(0, vec![1])])).is_err());
        assert!(evaluate_matching(&s, &v, &Matching::from([(0, vec![1]), (1, vec![1])])).is_err());
    }
}
