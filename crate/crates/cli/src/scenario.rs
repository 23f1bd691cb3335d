use std::path::Path;

use anyhow::{bail, Context};
use border_defense::{GameState64, Point64, Scenario64, SimConfig, SpeedTable64};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Agent {
    pub x: f64,
    pub y: f64,
    pub speed: f64,
}

/// On-disk scenario description (TOML).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub pursuers: Vec<Agent>,
    pub evaders: Vec<Agent>,
    #[serde(default = "default_step")]
    pub dt: f64,
    #[serde(default = "default_step")]
    pub capture_radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

fn default_step() -> f64 {
    1e-3
}

impl ScenarioFile {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let file: ScenarioFile =
            toml::from_str(&text).with_context(|| format!("malformed scenario {}", path.display()))?;
        file.validate().with_context(|| format!("invalid scenario {}", path.display()))?;
        Ok(file)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.pursuers.is_empty() || self.evaders.is_empty() {
            bail!("need at least one pursuer and one evader");
        }
        if self.pursuers.len() < self.evaders.len() {
            bail!(
                "need at least as many pursuers as evaders (got {} pursuers, {} evaders)",
                self.pursuers.len(),
                self.evaders.len()
            );
        }
        let teams = [("pursuers", &self.pursuers), ("evaders", &self.evaders)];
        for (team, agents) in teams {
            for (k, a) in agents.iter().enumerate() {
                if !(a.x.is_finite() && a.y.is_finite()) {
                    bail!("{team}[{k}]: position must be finite");
                }
                if a.y < 0.0 {
                    bail!("{team}[{k}].y = {} is below the border (y must be >= 0)", a.y);
                }
                if !(a.speed > 0.0 && a.speed.is_finite()) {
                    bail!("{team}[{k}].speed = {} must be positive", a.speed);
                }
            }
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            bail!("dt = {} must be positive", self.dt);
        }
        if !(self.capture_radius > 0.0 && self.capture_radius.is_finite()) {
            bail!("capture_radius = {} must be positive", self.capture_radius);
        }
        if let Some(t) = self.t_max {
            if !(t > 0.0 && t.is_finite()) {
                bail!("t_max = {t} must be positive");
            }
        }
        Ok(())
    }

    pub fn state(&self) -> GameState64 {
        let pos = |a: &Agent| Point64::new(a.x, a.y);
        let ps: Vec<_> = self.pursuers.iter().map(pos).collect();
        let es: Vec<_> = self.evaders.iter().map(pos).collect();
        GameState64::new(&ps, &es)
    }

    pub fn speeds(&self) -> anyhow::Result<SpeedTable64> {
        let vp = self.pursuers.iter().map(|a| a.speed).collect();
        let ve = self.evaders.iter().map(|a| a.speed).collect();
        Ok(SpeedTable64::new(vp, ve)?)
    }

    pub fn scenario(&self) -> anyhow::Result<Scenario64> {
        Ok(Scenario64 {
            initial: self.state(),
            speeds: self.speeds()?,
            config: SimConfig {
                dt: self.dt,
                capture_radius: self.capture_radius,
                t_max: self.t_max,
                ..SimConfig::default()
            },
        })
    }
}
