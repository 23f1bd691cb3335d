use border_defense::{Assignment64, CaptureMode, CapturePoint, GameOfKindReport, Matching, Point64};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentEntry {
    /// 1-based rank in the sorted enumeration.
    pub id: usize,
    /// Evader index to the pursuers that capture it.
    pub pairs: Matching,
    /// Matching before pair reduction.
    pub potential: Matching,
    pub value: f64,
    pub feasible: bool,
    pub unstoppable: Vec<usize>,
}

impl AssignmentEntry {
    pub fn new(id: usize, a: &Assignment64) -> Self {
        Self {
            id,
            pairs: a.pairs.clone(),
            potential: a.potential.clone(),
            value: a.value,
            feasible: a.feasible(),
            unstoppable: a.unstoppable.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Solo,
    Simultaneous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanEntry {
    pub evader: usize,
    pub mode: Mode,
    pub pursuers: Vec<usize>,
    pub aimpoint: Point64,
}

impl PlanEntry {
    pub fn new(evader: usize, cp: &CapturePoint<f64>) -> Self {
        let mode = match cp.mode {
            CaptureMode::Solo(_) => Mode::Solo,
            CaptureMode::Simultaneous(..) => Mode::Simultaneous,
        };
        Self { evader, mode, pursuers: cp.mode.pursuers(), aimpoint: cp.point }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    /// `None` outside the pursuers' winning region.
    pub value: Option<f64>,
    pub optimal_id: Option<usize>,
    /// Feasible assignments, best first.
    pub assignments: Vec<AssignmentEntry>,
    /// Capture plan of the optimal assignment, or of the game-of-kind pick
    /// when no assignment is feasible.
    pub plans: Vec<PlanEntry>,
    pub game_of_kind: GameOfKindReport<f64>,
    /// Margin to the runner-up assignment; `None` with fewer than two.
    pub dispersal_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumerateReport {
    pub assignments: Vec<AssignmentEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub t: f64,
    pub kind: border_defense::EventKind,
    pub evader: usize,
    pub pursuers: Vec<usize>,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub requested: usize,
    pub evaluated: usize,
    pub skipped_outside: usize,
    pub skipped_dispersal: usize,
    pub skipped_mode_boundary: usize,
    /// Largest `|H| / (v_max |grad V|)`.
    pub max_hji: Option<f64>,
    /// Largest `|analytic - fd| / max(|analytic|, 1)` over all components.
    pub max_gradient_error: Option<f64>,
    pub identity_checks: usize,
    pub max_identity_residual: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleEntry {
    pub evader: usize,
    pub pursuers: Vec<usize>,
    pub closed_form_y: f64,
    pub grid_y: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub resolution: f64,
    pub tolerance: f64,
    pub evaders: Vec<OracleEntry>,
    pub passed: bool,
}
