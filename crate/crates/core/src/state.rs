//! Game state and speed data shared by every layer.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PursuerState<T> {
    pub pos: Point2<T>,
    pub active: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaderState<T> {
    pub pos: Point2<T>,
    pub active: bool,
    /// Capture or border-arrival height once the evader is out of play.
    pub frozen_y: Option<T>,
}

/// Positions of all `N` pursuers and `M` evaders plus their activity flags.
///
/// Flattened, the state is the vector
/// `(x_P1, y_P1, .., x_PN, y_PN, x_E1, y_E1, .., x_EM, y_EM)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameState<T> {
    pub pursuers: Vec<PursuerState<T>>,
    pub evaders: Vec<EvaderState<T>>,
    pub time: T,
}

impl<T: Scalar> GameState<T> {
    /// All agents active at time zero.
    pub fn new(pursuers: &[Point2<T>], evaders: &[Point2<T>]) -> Self {
        Self {
            pursuers: pursuers.iter().map(|&pos| PursuerState { pos, active: true }).collect(),
            evaders: evaders
                .iter()
                .map(|&pos| EvaderState { pos, active: true, frozen_y: None })
                .collect(),
            time: T::zero(),
        }
    }

    pub fn n_pursuers(&self) -> usize {
        self.pursuers.len()
    }

    pub fn n_evaders(&self) -> usize {
        self.evaders.len()
    }

    pub fn pursuer(&self, i: usize) -> Point2<T> {
        self.pursuers[i].pos
    }

    pub fn evader(&self, j: usize) -> Point2<T> {
        self.evaders[j].pos
    }

    pub fn active_pursuers(&self) -> impl Iterator<Item = usize> + '_ {
        self.pursuers.iter().enumerate().filter(|(_, p)| p.active).map(|(i, _)| i)
    }

    pub fn active_evaders(&self) -> impl Iterator<Item = usize> + '_ {
        self.evaders.iter().enumerate().filter(|(_, e)| e.active).map(|(j, _)| j)
    }

    /// Sum of terminal heights of evaders already out of play.
    pub fn frozen_payoff(&self) -> T {
        self.evaders.iter().filter_map(|e| e.frozen_y).sum()
    }

    /// Flattened coordinates, pursuers first.
    pub fn coordinates(&self) -> Vec<T> {
        self.pursuers
            .iter()
            .map(|p| p.pos)
            .chain(self.evaders.iter().map(|e| e.pos))
            .flat_map(|p| [p.x, p.y])
            .collect()
    }

    /// Copy of the state with coordinate `k` of [`Self::coordinates`] replaced.
    pub fn with_coordinate(&self, k: usize, value: T) -> Self {
        let mut out = self.clone();
        let n2 = 2 * self.pursuers.len();
        let slot = if k < n2 {
            &mut out.pursuers[k / 2].pos
        } else {
            &mut out.evaders[(k - n2) / 2].pos
        };
        if k.is_multiple_of(2) {
            slot.x = value;
        } else {
            slot.y = value;
        }
        out
    }

    /// Applies `f` to every agent position.
    pub fn map_positions(&self, f: impl Fn(Point2<T>) -> Point2<T>) -> Self {
        let mut out = self.clone();
        out.pursuers.iter_mut().for_each(|p| p.pos = f(p.pos));
        out.evaders.iter_mut().for_each(|e| e.pos = f(e.pos));
        out
    }

    /// Largest distance between any two agents.
    pub fn diameter(&self) -> T {
        let pts: Vec<_> = self
            .pursuers
            .iter()
            .map(|p| p.pos)
            .chain(self.evaders.iter().map(|e| e.pos))
            .collect();
        let mut best = T::zero();
        for (k, a) in pts.iter().enumerate() {
            for b in &pts[k + 1..] {
                best = best.max(a.dist(*b));
            }
        }
        best
    }
}

/// Top speeds of every agent. Pairs whose ratio `v_E / v_P` is not below one
/// are forbidden from being assigned rather than rejected globally.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedTable<T> {
    pub pursuer_speeds: Vec<T>,
    pub evader_speeds: Vec<T>,
}

impl<T: Scalar> SpeedTable<T> {
    pub fn new(pursuer_speeds: Vec<T>, evader_speeds: Vec<T>) -> Result<Self> {
        let ok = |v: &T| v.is_finite() && *v > T::zero();
        if !pursuer_speeds.iter().all(ok) || !evader_speeds.iter().all(ok) {
            return Err(Error::InvalidArgument("speeds must be finite and positive".into()));
        }
        Ok(Self { pursuer_speeds, evader_speeds })
    }

    /// `v_E / v_P` for pursuer `i` and evader `j`.
    pub fn alpha(&self, i: usize, j: usize) -> T {
        self.evader_speeds[j] / self.pursuer_speeds[i]
    }

    /// Whether pursuer `i` is fast enough to be assigned to evader `j`.
    pub fn allowed(&self, i: usize, j: usize) -> bool {
        self.alpha(i, j) < T::one()
    }

    pub fn v_max(&self) -> T {
        self.pursuer_speeds
            .iter()
            .chain(&self.evader_speeds)
            .fold(T::zero(), |m, &v| m.max(v))
    }

    /// Whether the table matches the number of agents in `state`.
    pub fn check_dims(&self, state: &GameState<T>) -> Result<()> {
        if self.pursuer_speeds.len() != state.n_pursuers() || self.evader_speeds.len() != state.n_evaders() {
            return Err(Error::InvalidArgument(format!(
                "speed table is {}x{} but state has {} pursuers and {} evaders",
                self.pursuer_speeds.len(),
                self.evader_speeds.len(),
                state.n_pursuers(),
                state.n_evaders()
            )));
        }
        Ok(())
    }
}
