//! Configuration files, the Monte Carlo sweep, canned scenarios and the
//! graph report behind the command-line tool.

mod check;
mod config;
mod repro;
mod sweep;

use thiserror::Error;

use crate::engine::ConfigError;
use crate::graph::GraphError;

pub use check::{check_graph, GraphReport, Verdict};
pub use config::{load_run_config, load_sweep_config, RunFile, SweepFile, SPEC_VERSION};
pub use repro::{
    k9_minus5, nine_node_graph, repro_scenario, Check, ReproReport, K9_REMOVED_IN_EDGES, NINE_NODE_EDGES,
    NINE_NODE_START, SCENARIOS,
};
pub use sweep::{
    condition_ok, sweep, AttackScenario, CellStats, RunDraw, SchemeLabel, SweepConfig, SweepResult, SweepRow,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Run(#[from] ConfigError),
    #[error("i/o: {0}")]
    Io(String),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
}
