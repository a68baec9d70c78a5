pub mod adversary;
pub mod engine;
pub mod graph;
pub mod protocol;
pub mod harness;
