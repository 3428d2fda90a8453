//! Randomized and exhaustive search for frame starters.
//!
//! - [`hill_climb`]: seeded local search with eviction and restarts;
//! - [`exhaustive`] / [`exhaustive_count`]: backtracking certificates;
//! - [`find_orthogonal_mate`]: backtracking over adder values;
//! - [`survey`]: the cyclic-group sweep behind the admissibility table.

use std::fmt;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::starter::{Adder, FrameStarter};

mod exhaustive;
mod hill;
mod mate;
mod survey;

pub use exhaustive::{
    exhaustive, exhaustive_count, exhaustive_for_each, exhaustive_orthogonal_pair, EXHAUSTIVE_FRAME_CAP,
    EXHAUSTIVE_STRONG_CAP,
};
pub use hill::hill_climb;
pub use mate::{find_orthogonal_mate, MateBudget};
pub use survey::{survey, SurveyCell, SurveyOutcome, SurveyTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Frame,
    Strong,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Frame => "frame",
            Mode::Strong => "strong",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "frame" => Ok(Mode::Frame),
            "strong" => Ok(Mode::Strong),
            _ => Err(Error::invalid(format!("mode must be frame or strong, got {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchParams {
    pub seed: u64,
    /// Steps without a new best pair count before a restart.
    pub max_iterations: u64,
    pub max_restarts: u64,
    pub time_budget: Duration,
    pub mode: Mode,
    /// Run even when a nonexistence rule applies.
    pub allow_infeasible: bool,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            seed: 0,
            max_iterations: 20_000,
            max_restarts: 100_000,
            time_budget: Duration::from_secs(10),
            mode: Mode::Strong,
            allow_infeasible: false,
        }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 || self.max_restarts == 0 || self.time_budget.is_zero() {
            return Err(Error::invalid("search budgets must be positive"));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_budget(mut self, budget: Duration) -> Self {
        self.time_budget = budget;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Found(FrameStarter),
    /// Every restart hit its plateau limit.
    Exhausted,
    TimedOut,
    /// Exhaustive search finished without a solution.
    ProvedNone,
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Found(_) => "found",
            Outcome::Exhausted => "exhausted",
            Outcome::TimedOut => "timeout",
            Outcome::ProvedNone => "none",
        }
    }

    pub fn found(&self) -> Option<&FrameStarter> {
        match self {
            Outcome::Found(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub outcome: Outcome,
    /// Hill-climbing steps or backtracking nodes.
    pub iterations: u64,
    pub restarts: u64,
    pub elapsed: Duration,
    pub seed: u64,
    /// Total solutions, when counting.
    pub solutions: Option<u64>,
    /// The adder, for orthogonal mate search.
    pub adder: Option<Adder>,
}

impl SearchReport {
    fn new(outcome: Outcome, seed: u64) -> Self {
        SearchReport {
            outcome,
            iterations: 0,
            restarts: 0,
            elapsed: Duration::ZERO,
            seed,
            solutions: None,
            adder: None,
        }
    }

    /// One line of statistics, without timing.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "outcome={} seed={} iterations={} restarts={}",
            self.outcome.label(),
            self.seed,
            self.iterations,
            self.restarts
        );
        if let Some(n) = self.solutions {
            s.push_str(&format!(" solutions={n}"));
        }
        s
    }
}
