use anyhow::{anyhow, bail, Context};
use border_defense::{Assignment64, TeamPolicy};

pub const POLICY_NAMES: &str = "optimal, pure-pursuit, straight-to-border, reassign, \
wrong-lowest-point:<k>, fixed-assignment:<k>, fixed-heading:<deg>[,<deg>...] \
(k is the 1-based id printed by `enumerate`)";

/// Parses a policy name. `assignments` is the sorted enumeration that the
/// `<k>` suffix indexes into.
pub fn parse_policy(input: &str, assignments: &[Assignment64]) -> anyhow::Result<TeamPolicy<f64>> {
    let (name, arg) = match input.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (input, None),
    };
    let pick = |arg: Option<&str>| -> anyhow::Result<_> {
        let arg = arg.ok_or_else(|| anyhow!("policy {name} needs an assignment id, e.g. {name}:2"))?;
        let k: usize = arg.trim().parse().with_context(|| format!("bad assignment id {arg:?}"))?;
        let a = k
            .checked_sub(1)
            .and_then(|i| assignments.get(i))
            .ok_or_else(|| anyhow!("assignment id {k} out of range 1..={}", assignments.len()))?;
        Ok(a.potential.clone())
    };
    let policy = match (name, arg) {
        ("optimal", None) => TeamPolicy::Optimal,
        ("pure-pursuit", None) => TeamPolicy::PurePursuit,
        ("straight-to-border", None) => TeamPolicy::StraightToBorder,
        ("reassign", None) => TeamPolicy::ReassignEachStep,
        ("wrong-lowest-point", arg) => TeamPolicy::WrongLowestPoint(pick(arg)?),
        ("fixed-assignment", arg) => TeamPolicy::FixedAssignmentOptimal(pick(arg)?),
        ("fixed-heading", Some(arg)) => {
            let angles = arg
                .split(',')
                .map(|s| s.trim().parse::<f64>().map(f64::to_radians))
                .collect::<Result<Vec<_>, _>>()
                .with_context(|| format!("bad heading list {arg:?}"))?;
            TeamPolicy::FixedHeading(angles)
        }
        _ => bail!("unknown policy {input:?}; valid policies: {POLICY_NAMES}"),
    };
    Ok(policy)
}
