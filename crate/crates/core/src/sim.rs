//! Fixed-step engagement simulator.
//!
//! Forward Euler with event interpolation: both policies run against the
//! current state each step, agents move in straight lines over the step, and
//! any capture or border crossing inside the step is located by interpolating
//! linearly between the two end states.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assignment::{game_of_kind, optimal_assignment, Assignment, Matching};
use crate::error::Error;
use crate::geometry::Point2;
use crate::scalar::Scalar;
use crate::state::{GameState, SpeedTable};
use crate::strategy::{policy_matching, team_headings, Heading, Side, TeamPolicy};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig<T> {
    pub dt: T,
    /// Distance at which an assigned pursuer captures its evader.
    pub capture_radius: T,
    /// Defaults to four configuration diameters over the slowest pursuer speed.
    pub t_max: Option<T>,
    /// Record every `sample_stride`-th step (steps with events are always kept).
    pub sample_stride: usize,
    /// Start from the game-of-kind assignment when no feasible one exists.
    pub allow_outside_win_region: bool,
}

impl<T: Scalar> Default for SimConfig<T> {
    fn default() -> Self {
        Self {
            dt: T::lit(1e-3),
            capture_radius: T::lit(1e-3),
            t_max: None,
            sample_stride: 1,
            allow_outside_win_region: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario<T> {
    pub initial: GameState<T>,
    pub speeds: SpeedTable<T>,
    pub config: SimConfig<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    Capture,
    BorderReach,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event<T> {
    pub t: T,
    pub kind: EventKind,
    pub evader: usize,
    pub pursuers: Vec<usize>,
    pub location: Point2<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample<T> {
    pub t: T,
    pub pursuers: Vec<Point2<T>>,
    pub evaders: Vec<Point2<T>>,
    /// Commands applied from this sample on; `None` for idle or retired agents.
    pub pursuer_headings: Vec<Option<Heading<T>>>,
    pub evader_headings: Vec<Option<Heading<T>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryLog<T> {
    pub samples: Vec<Sample<T>>,
    pub events: Vec<Event<T>>,
    /// Sum of terminal evader heights, zero for each border reach.
    pub payoff: T,
    pub terminal_time: T,
    /// Assignment both teams committed to at the start.
    pub committed: Assignment<T>,
    pub final_state: GameState<T>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError<T: std::fmt::Debug> {
    #[error(transparent)]
    Game(#[from] Error),
    #[error("time limit reached with evaders still in play")]
    Timeout(Box<TrajectoryLog<T>>),
}

/// Advances every active agent by `speed * heading * dt`.
///
/// A `None` heading leaves an active agent in place; a heading for an inactive
/// agent is a contract violation.
pub fn step<T: Scalar>(
    state: &GameState<T>,
    speeds: &SpeedTable<T>,
    pursuer_headings: &[Option<Heading<T>>],
    evader_headings: &[Option<Heading<T>>],
    dt: T,
) -> Result<GameState<T>, Error> {
    speeds.check_dims(state)?;
    if !(dt > T::zero()) {
        return Err(Error::InvalidArgument("dt must be positive".into()));
    }
    if pursuer_headings.len() != state.n_pursuers() || evader_headings.len() != state.n_evaders() {
        return Err(Error::InvalidArgument("one heading slot per agent is required".into()));
    }
    let mut next = state.clone();
    for (i, h) in pursuer_headings.iter().enumerate() {
        let Some(h) = h else { continue };
        if !state.pursuers[i].active {
            return Err(Error::InactiveHeading { kind: "pursuer", index: i });
        }
        next.pursuers[i].pos = state.pursuers[i].pos + h.as_vector() * (speeds.pursuer_speeds[i] * dt);
    }
    for (j, h) in evader_headings.iter().enumerate() {
        let Some(h) = h else { continue };
        if !state.evaders[j].active {
            return Err(Error::InactiveHeading { kind: "evader", index: j });
        }
        next.evaders[j].pos = state.evaders[j].pos + h.as_vector() * (speeds.evader_speeds[j] * dt);
    }
    next.time = state.time + dt;
    Ok(next)
}

fn lerp<T: Scalar>(a: Point2<T>, b: Point2<T>, s: T) -> Point2<T> {
    a + (b - a) * s
}

/// Earliest `s` in `[0, 1]` with `|r0 + s (r1 - r0)| <= eps`.
fn first_contact<T: Scalar>(r0: Point2<T>, r1: Point2<T>, eps: T) -> Option<T> {
    let c = r0.dot(r0) - eps * eps;
    if c <= T::zero() {
        return Some(T::zero());
    }
    let dr = r1 - r0;
    let a = dr.dot(dr);
    if a == T::zero() {
        return None;
    }
    let b = r0.dot(dr);
    let disc = b * b - a * c;
    if disc < T::zero() {
        return None;
    }
    let s = (-b - disc.sqrt()) / a;
    (s >= T::zero() && s <= T::one()).then_some(s)
}

struct Pending<T> {
    s: T,
    kind: EventKind,
    evader: usize,
    pursuers: Vec<usize>,
}

fn detect<T: Scalar>(prev: &GameState<T>, next: &GameState<T>, matching: &Matching, eps: T) -> Vec<Pending<T>> {
    let mut out = Vec::new();
    for j in prev.active_evaders() {
        let (e0, e1) = (prev.evader(j), next.evader(j));
        let mut capture: Option<(T, Vec<usize>)> = None;
        for &i in matching.get(&j).map(Vec::as_slice).unwrap_or(&[]) {
            if i >= prev.n_pursuers() || !prev.pursuers[i].active {
                continue;
            }
            let Some(s) = first_contact(prev.pursuer(i) - e0, next.pursuer(i) - e1, eps) else { continue };
            match &mut capture {
                Some((best, who)) if s == *best => who.push(i),
                Some((best, _)) if s > *best => {}
                _ => capture = Some((s, vec![i])),
            }
        }
        let border = (e1.y < T::zero() && e0.y >= T::zero()).then(|| e0.y / (e0.y - e1.y));
        // A capture wins a tie with the border crossing.
        let ev = match (capture, border) {
            (Some((sc, who)), sb) if sb.is_none_or(|sb| sc <= sb) => {
                Pending { s: sc, kind: EventKind::Capture, evader: j, pursuers: who }
            }
            (_, Some(sb)) => Pending { s: sb, kind: EventKind::BorderReach, evader: j, pursuers: Vec::new() },
            _ => continue,
        };
        out.push(ev);
    }
    out.sort_by(|a, b| a.s.partial_cmp(&b.s).unwrap_or(std::cmp::Ordering::Equal).then(a.evader.cmp(&b.evader)));
    out
}

fn sample<T: Scalar>(state: &GameState<T>, hp: &[Option<Heading<T>>], he: &[Option<Heading<T>>]) -> Sample<T> {
    Sample {
        t: state.time,
        pursuers: state.pursuers.iter().map(|p| p.pos).collect(),
        evaders: state.evaders.iter().map(|e| e.pos).collect(),
        pursuer_headings: hp.to_vec(),
        evader_headings: he.to_vec(),
    }
}

/// Default time limit: four configuration diameters over the slowest pursuer.
pub fn default_t_max<T: Scalar>(state: &GameState<T>, speeds: &SpeedTable<T>) -> T {
    let v_min = speeds.pursuer_speeds.iter().copied().fold(T::infinity(), T::min);
    T::lit(4.0) * state.diameter().max(T::one()) / v_min
}

/// Runs one engagement to termination.
///
/// Both teams commit to the optimal assignment of the initial state. An
/// evader leaves play when an assigned pursuer comes within the capture radius
/// (payoff: its height there) or when it crosses the border (payoff: zero);
/// the pursuers assigned to it retire at the same instant, except under
/// [`TeamPolicy::ReassignEachStep`], where they stay in play.
pub fn run_engagement<T: Scalar>(
    scenario: &Scenario<T>,
    pursuer_policy: &TeamPolicy<T>,
    evader_policy: &TeamPolicy<T>,
) -> Result<TrajectoryLog<T>, SimError<T>> {
    let cfg = &scenario.config;
    let speeds = &scenario.speeds;
    pursuer_policy.check_side(Side::Pursuers)?;
    evader_policy.check_side(Side::Evaders)?;
    if !(cfg.dt > T::zero()) || !(cfg.capture_radius > T::zero()) {
        return Err(Error::InvalidArgument("dt and capture radius must be positive".into()).into());
    }
    let committed = match optimal_assignment(&scenario.initial, speeds) {
        Err(Error::NoFeasibleAssignment) if cfg.allow_outside_win_region => {
            game_of_kind(&scenario.initial, speeds)?.best_assignment
        }
        other => other?,
    };
    let t_max = cfg.t_max.unwrap_or_else(|| default_t_max(&scenario.initial, speeds));
    let retire = !matches!(pursuer_policy, TeamPolicy::ReassignEachStep);
    let stride = cfg.sample_stride.max(1);

    let mut state = scenario.initial.clone();
    let mut samples = Vec::new();
    let mut events = Vec::new();
    let mut steps = 0usize;
    let mut last_event_time = state.time;

    loop {
        if state.active_evaders().next().is_none() {
            let hp = vec![None; state.n_pursuers()];
            let he = vec![None; state.n_evaders()];
            samples.push(sample(&state, &hp, &he));
            break;
        }
        let hp = team_headings(&state, speeds, pursuer_policy, Side::Pursuers, &committed)?;
        let he = team_headings(&state, speeds, evader_policy, Side::Evaders, &committed)?;
        if steps.is_multiple_of(stride) {
            samples.push(sample(&state, &hp, &he));
        }
        if state.time >= t_max {
            let payoff = state.frozen_payoff();
            return Err(SimError::Timeout(Box::new(TrajectoryLog {
                samples,
                events,
                payoff,
                terminal_time: state.time,
                committed,
                final_state: state,
            })));
        }
        let matching = policy_matching(&state, speeds, pursuer_policy, &committed)?;
        let mut next = step(&state, speeds, &hp, &he, cfg.dt)?;
        for ev in detect(&state, &next, &matching, cfg.capture_radius) {
            let j = ev.evader;
            let t = state.time + ev.s * cfg.dt;
            let mut at = lerp(state.evader(j), next.evader(j), ev.s);
            if ev.kind == EventKind::BorderReach {
                at.y = T::zero();
            }
            let e = &mut next.evaders[j];
            e.pos = at;
            e.active = false;
            e.frozen_y = Some(at.y);
            if retire {
                for &i in matching.get(&j).map(Vec::as_slice).unwrap_or(&[]) {
                    if state.pursuers[i].active && next.pursuers[i].active {
                        next.pursuers[i].pos = lerp(state.pursuer(i), next.pursuer(i), ev.s);
                        next.pursuers[i].active = false;
                    }
                }
            }
            last_event_time = t;
            events.push(Event { t, kind: ev.kind, evader: j, pursuers: ev.pursuers, location: at });
        }
        state = next;
        steps += 1;
    }

    Ok(TrajectoryLog {
        samples,
        payoff: state.frozen_payoff(),
        terminal_time: last_event_time,
        events,
        committed,
        final_state: state,
    })
}
