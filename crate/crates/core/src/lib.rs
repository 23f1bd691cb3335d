//! Closed-form solver for the multi-pursuer, multi-evader border defense game.
//!
//! Evaders try to reach the border `y = 0`; pursuers try to capture them as far
//! above it as possible. The payoff is the sum of the evaders' terminal heights.
//! The crate computes the game's value and optimal assignment from Apollonius
//! circles, produces state-feedback headings, checks the value against its HJI
//! equation, and simulates engagements under optimal and deviating policies.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the `*64` aliases
//! below cover the common case.

// `!(x > 0)` is how NaN gets rejected along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assignment;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod scalar;
pub mod sim;
pub mod state;
pub mod strategy;
pub mod value;

pub use assignment::{
    enumerate_assignments, enumerate_assignments_with_limit, evaluate_matching, game_of_kind,
    hungarian_assign, optimal_assignment, pair_feasible, select_best, solo_heights, Assignment, GameOfKindReport,
    Matching, Winner,
};
pub use error::{Error, Result};
pub use geometry::{
    apollonius_circle, circle_intersections, cooperative_lowest_point, lowest_point, pursuer_pair_circle,
    vs_closed_form, CaptureMode, CapturePoint, Circle, CircleKind, Point2,
};
pub use oracle::lattice_lowest_point;
pub use scalar::Scalar;
pub use sim::{run_engagement, step, Event, EventKind, Sample, Scenario, SimConfig, SimError, TrajectoryLog};
pub use state::{EvaderState, GameState, PursuerState, SpeedTable};
pub use strategy::{aimpoint_cooperative, aimpoint_solo, heading_to, team_headings, Heading, Side, TeamPolicy};
pub use value::{
    coop_identities, dispersal_gap, hji_residual, value, value_gradient, CoopDerivs, CoopIdentities, ValueGradient,
};

pub type Point64 = Point2<f64>;
pub type Point32 = Point2<f32>;
pub type Circle64 = Circle<f64>;
pub type Circle32 = Circle<f32>;
pub type GameState64 = GameState<f64>;
pub type GameState32 = GameState<f32>;
pub type SpeedTable64 = SpeedTable<f64>;
pub type SpeedTable32 = SpeedTable<f32>;
pub type Assignment64 = Assignment<f64>;
pub type TrajectoryLog64 = TrajectoryLog<f64>;
pub type Scenario64 = Scenario<f64>;
