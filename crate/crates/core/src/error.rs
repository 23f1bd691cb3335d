use thiserror::Error;

/// Errors raised by the geometry, assignment, strategy and value layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("equal pursuer speeds: the pursuer-pair circle degenerates to a line")]
    EqualSpeed,
    #[error("coincident circles")]
    CoincidentCircles,
    #[error("degenerate cooperative configuration: {0}")]
    DegenerateConfiguration(&'static str),
    #[error("too many players: {players} exceeds the limit of {limit}")]
    TooManyPlayers { players: usize, limit: usize },
    #[error("fewer pursuers ({pursuers}) than evaders ({evaders})")]
    OutnumberedPursuers { pursuers: usize, evaders: usize },
    #[error("no feasible assignment: every assignment lets an evader reach the border")]
    NoFeasibleAssignment,
    #[error("state is outside the pursuers' winning region; unstoppable evaders {unstoppable:?}")]
    OutsideWinRegion { unstoppable: Vec<usize> },
    #[error("state lies on a dispersal surface (gap {gap:e})")]
    OnDispersalSurface { gap: f64 },
    #[error("fewer than two feasible assignments")]
    FewerThanTwoAssignments,
    #[error("score matrix is not square ({rows} rows, row {row} has {cols} columns)")]
    NonSquare { rows: usize, row: usize, cols: usize },
    #[error("agent is already at its aimpoint")]
    AtAimpoint,
    #[error("policy {policy} cannot be used by the {side} team")]
    PolicySideMismatch { policy: &'static str, side: &'static str },
    #[error("heading supplied for inactive {kind} {index}")]
    InactiveHeading { kind: &'static str, index: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
