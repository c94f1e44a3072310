//! Batch experiment runner: every demonstration in the crate as a seeded,
//! report-emitting command with strict configs and byte-stable outputs.

pub mod config;
pub mod experiments;
pub mod report;

pub use config::{
    CircleParams, ExperimentConfig, ExperimentKind, GroverParams, LdliParams, LdliScenarioSpec,
    SignalParams, SuperposeParams, UdParams,
};
pub use experiments::run;
pub use report::{emit, Check, DataTable, EmitFormat, RunReport};
