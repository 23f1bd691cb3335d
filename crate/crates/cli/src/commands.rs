use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use border_defense::value::{finite_difference_gradient, mode_boundary_margin};
use border_defense::{
    coop_identities, dispersal_gap, enumerate_assignments, game_of_kind, hji_residual, lattice_lowest_point,
    optimal_assignment, run_engagement, select_best, value_gradient, Assignment64, CaptureMode, Error, GameState64,
    Point64, SimError, TrajectoryLog64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::policy::parse_policy;
use crate::report::{
    AssignmentEntry, EnumerateReport, EventRecord, OracleEntry, OracleReport, PlanEntry, SolveReport, VerifyReport,
};
use crate::scenario::ScenarioFile;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    OutsideWinRegion = 2,
    VerificationFailed = 3,
}

const TOL_HJI: f64 = 1e-6;
const TOL_GRADIENT: f64 = 1e-5;
const TOL_IDENTITY: f64 = 1e-9;
/// Relative gap below which a sampled state counts as on a dispersal surface.
const MIN_GAP: f64 = 1e-4;
/// Relative margin below which a sampled state counts as at a mode switch.
const MIN_MODE_MARGIN: f64 = 1e-3;
/// Capture heights below this are too close to the border for central
/// differences.
const MIN_HEIGHT: f64 = 1e-4;

fn print_json<S: serde::Serialize>(report: &S) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, report)?;
    writeln!(out)?;
    Ok(())
}

fn entries(all: &[Assignment64]) -> Vec<AssignmentEntry> {
    all.iter().enumerate().map(|(k, a)| AssignmentEntry::new(k + 1, a)).collect()
}

fn plans(a: &Assignment64) -> Vec<PlanEntry> {
    a.plans.iter().map(|(&j, cp)| PlanEntry::new(j, cp)).collect()
}

pub fn solve(path: &Path) -> anyhow::Result<Status> {
    let file = ScenarioFile::load(path)?;
    let (state, speeds) = (file.state(), file.speeds()?);
    let all = enumerate_assignments(&state, &speeds)?;
    let gok = game_of_kind(&state, &speeds)?;
    let feasible: Vec<_> = entries(&all).into_iter().filter(|a| a.feasible).collect();
    let best = select_best(all.iter().filter(|a| a.feasible()));
    let report = SolveReport {
        value: best.map(|b| b.value),
        optimal_id: best.and_then(|b| all.iter().position(|a| a.pairs == b.pairs)).map(|k| k + 1),
        assignments: feasible,
        plans: plans(best.unwrap_or(&gok.best_assignment)),
        dispersal_gap: match dispersal_gap(&state, &speeds) {
            Ok(g) => Some(g),
            Err(Error::FewerThanTwoAssignments | Error::NoFeasibleAssignment) => None,
            Err(e) => return Err(e.into()),
        },
        game_of_kind: gok,
    };
    print_json(&report)?;
    Ok(if best.is_some() { Status::Ok } else { Status::OutsideWinRegion })
}

pub fn enumerate(path: &Path) -> anyhow::Result<Status> {
    let file = ScenarioFile::load(path)?;
    let all = enumerate_assignments(&file.state(), &file.speeds()?)?;
    print_json(&EnumerateReport { assignments: entries(&all) })?;
    Ok(Status::Ok)
}

pub struct SimulateArgs<'a> {
    pub pursuer_policy: &'a str,
    pub evader_policy: &'a str,
    pub out: Option<&'a Path>,
    pub events_out: Option<&'a Path>,
    pub allow_outside: bool,
}

pub fn simulate(path: &Path, args: &SimulateArgs) -> anyhow::Result<Status> {
    let file = ScenarioFile::load(path)?;
    let mut scenario = file.scenario()?;
    scenario.config.allow_outside_win_region = args.allow_outside;
    let all = enumerate_assignments(&scenario.initial, &scenario.speeds)?;
    let pp = parse_policy(args.pursuer_policy, &all).context("--pursuer-policy")?;
    let ep = parse_policy(args.evader_policy, &all).context("--evader-policy")?;

    let big_v = match optimal_assignment(&scenario.initial, &scenario.speeds) {
        Ok(a) => a.value,
        Err(Error::NoFeasibleAssignment) if args.allow_outside => {
            game_of_kind(&scenario.initial, &scenario.speeds)?.best_assignment.captured_value()
        }
        Err(Error::NoFeasibleAssignment) => {
            eprintln!("error: the scenario is outside the pursuers' winning region (pass --allow-outside to run it)");
            return Ok(Status::OutsideWinRegion);
        }
        Err(e) => return Err(e.into()),
    };
    let (log, timed_out) = match run_engagement(&scenario, &pp, &ep) {
        Ok(log) => (log, false),
        Err(SimError::Timeout(log)) => (*log, true),
        Err(SimError::Game(e)) => return Err(e.into()),
    };
    if let Some(out) = args.out {
        write_trajectory(out, &log).with_context(|| format!("writing {}", out.display()))?;
    }
    if let Some(out) = args.events_out {
        write_events(out, &log).with_context(|| format!("writing {}", out.display()))?;
    }
    println!(
        "payoff={} terminal_time={} V={} payoff-V={}",
        log.payoff,
        log.terminal_time,
        big_v,
        log.payoff - big_v
    );
    if timed_out {
        anyhow::bail!("engagement timed out at t = {} with evaders still in play", log.terminal_time);
    }
    Ok(Status::Ok)
}

fn write_trajectory(path: &Path, log: &TrajectoryLog64) -> anyhow::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let n = log.final_state.n_pursuers();
    let m = log.final_state.n_evaders();
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).flat_map(|i| [format!("P{i}x"), format!("P{i}y")]));
    header.extend((1..=m).flat_map(|j| [format!("E{j}x"), format!("E{j}y")]));
    writeln!(w, "{}", header.join(","))?;
    for s in &log.samples {
        let mut row = vec![s.t.to_string()];
        row.extend(s.pursuers.iter().chain(&s.evaders).flat_map(|p| [p.x.to_string(), p.y.to_string()]));
        writeln!(w, "{}", row.join(","))?;
    }
    w.flush()?;
    Ok(())
}

fn write_events(path: &Path, log: &TrajectoryLog64) -> anyhow::Result<()> {
    let events: Vec<_> = log
        .events
        .iter()
        .map(|e| EventRecord {
            t: e.t,
            kind: e.kind,
            evader: e.evader,
            pursuers: e.pursuers.clone(),
            x: e.location.x,
            y: e.location.y,
        })
        .collect();
    std::fs::write(path, serde_json::to_string_pretty(&events)? + "\n")?;
    Ok(())
}

fn jitter(state: &GameState64, rng: &mut ChaCha8Rng, scale: f64) -> GameState64 {
    let mut move_point = |p: Point64| {
        let q = Point64::new(p.x + rng.gen_range(-scale..scale), p.y + rng.gen_range(-scale..scale));
        Point64::new(q.x, q.y.abs())
    };
    let ps: Vec<_> = (0..state.n_pursuers()).map(|i| move_point(state.pursuer(i))).collect();
    let es: Vec<_> = (0..state.n_evaders()).map(|j| move_point(state.evader(j))).collect();
    GameState64::new(&ps, &es)
}

fn fold_max(acc: Option<f64>, x: f64) -> Option<f64> {
    Some(acc.map_or(x, |a| a.max(x)))
}

/// Samples winning-region states around the scenario and checks the value
/// function against its analytic properties.
pub fn verify(path: &Path, samples: usize, seed: Option<u64>) -> anyhow::Result<Status> {
    let file = ScenarioFile::load(path)?;
    let (base, speeds) = (file.state(), file.speeds()?);
    let seed = seed.unwrap_or(file.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 0.1 * base.diameter().max(1.0);
    let mut r = VerifyReport {
        seed,
        requested: samples,
        evaluated: 0,
        skipped_outside: 0,
        skipped_dispersal: 0,
        skipped_mode_boundary: 0,
        max_hji: None,
        max_gradient_error: None,
        identity_checks: 0,
        max_identity_residual: None,
        passed: true,
    };
    let attempts = samples.saturating_mul(50);
    for _ in 0..attempts {
        if r.evaluated == samples {
            break;
        }
        let state = jitter(&base, &mut rng, scale);
        let best = match optimal_assignment(&state, &speeds) {
            Ok(b) if b.plans.values().all(|c| c.point.y > MIN_HEIGHT) => b,
            _ => {
                r.skipped_outside += 1;
                continue;
            }
        };
        match dispersal_gap(&state, &speeds) {
            Ok(g) if g < MIN_GAP * best.value.max(1.0) => {
                r.skipped_dispersal += 1;
                continue;
            }
            _ => {}
        }
        if mode_boundary_margin(&state, &speeds)?.is_some_and(|m| m < MIN_MODE_MARGIN) {
            r.skipped_mode_boundary += 1;
            continue;
        }
        let grad = value_gradient(&state, &speeds)?;
        let h = hji_residual(&state, &speeds)?;
        r.max_hji = fold_max(r.max_hji, h.abs() / (speeds.v_max() * grad.norm()));
        let fd = finite_difference_gradient(&state, &speeds)?;
        for (a, b) in grad.components.iter().zip(&fd) {
            r.max_gradient_error = fold_max(r.max_gradient_error, (a - b).abs() / a.abs().max(1.0));
        }
        for (&j, plan) in &best.plans {
            let CaptureMode::Simultaneous(a, b) = plan.mode else { continue };
            // The closed form needs distinct pursuer speeds.
            if speeds.pursuer_speeds[a] == speeds.pursuer_speeds[b] {
                continue;
            }
            let id = coop_identities(&state, &speeds, (a, b), j)?;
            r.identity_checks += 1;
            r.max_identity_residual = fold_max(r.max_identity_residual, id.max());
        }
        r.evaluated += 1;
    }
    r.passed = r.max_hji.is_none_or(|x| x <= TOL_HJI)
        && r.max_gradient_error.is_none_or(|x| x <= TOL_GRADIENT)
        && r.max_identity_residual.is_none_or(|x| x <= TOL_IDENTITY);
    print_json(&r)?;
    if r.evaluated < samples {
        eprintln!("warning: only {} of {samples} samples landed in the winning region", r.evaluated);
    }
    Ok(if r.passed { Status::Ok } else { Status::VerificationFailed })
}

/// Compares each evader's planned capture height with the lattice search.
pub fn oracle(path: &Path, resolution: f64) -> anyhow::Result<Status> {
    if !(resolution > 0.0 && resolution.is_finite()) {
        anyhow::bail!("--resolution must be positive (got {resolution})");
    }
    let file = ScenarioFile::load(path)?;
    let (state, speeds) = (file.state(), file.speeds()?);
    let best = match optimal_assignment(&state, &speeds) {
        Ok(b) => b,
        Err(Error::NoFeasibleAssignment) => game_of_kind(&state, &speeds)?.best_assignment,
        Err(e) => return Err(e.into()),
    };
    let tolerance = 2.0 * resolution;
    let mut evaders = Vec::new();
    for (&j, plan) in &best.plans {
        let set = &best.potential[&j];
        let disks: Vec<_> = set.iter().map(|&i| (state.pursuer(i), speeds.alpha(i, j))).collect();
        let grid = lattice_lowest_point(state.evader(j), &disks, resolution)?;
        evaders.push(OracleEntry {
            evader: j,
            pursuers: set.clone(),
            closed_form_y: plan.point.y,
            grid_y: grid.y,
            error: (plan.point.y - grid.y).abs(),
        });
    }
    let passed = evaders.iter().all(|e| e.error <= tolerance);
    print_json(&OracleReport { resolution, tolerance, evaders, passed })?;
    Ok(if passed { Status::Ok } else { Status::VerificationFailed })
}
