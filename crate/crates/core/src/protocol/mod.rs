//! What an honest agent sends, how it updates, and how it checks its
//! neighbors.

mod agent;
mod detect;
mod info;
mod update;
mod vote;

pub use agent::{AgentState, UpdateRule};
pub use detect::{
    algorithm1_detect, algorithm2_detect, Detection, DetectionVerdict, DetectionView, Reason,
};
pub use info::{build_information_set, Broadcast, CheckSet, InformationSet};
pub use update::{mean_ascending, normal_update, wmsr_update};
pub use vote::{algorithm2_majority_vote, majority_vote, threshold_reports, Vote};

/// Closed admissible interval `[min, max]` for round-0 values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SafetyInterval {
    pub min: f64,
    pub max: f64,
}

impl SafetyInterval {
    pub fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.min <= v && v <= self.max
    }

    pub fn clamp(&self, v: f64) -> f64 {
        v.clamp(self.min, self.max)
    }
}

impl Default for SafetyInterval {
    fn default() -> Self {
        Self::new(0.0, 100.0)
    }
}
