use std::path::PathBuf;

use thiserror::Error;

use crate::model::{NodeId, TaskId};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid energy parameters: {0}")]
    InvalidParams(String),
    #[error("invalid area {width}x{height}")]
    InvalidArea { width: f64, height: f64 },
    #[error("{kind} at index {index} has id {id}; ids must equal their index")]
    NonSequentialId {
        kind: &'static str,
        index: usize,
        id: usize,
    },
    #[error("node {node} has invalid sensing range {range}")]
    InvalidRange { node: NodeId, range: f64 },
    #[error("{kind} {id} lies outside the area")]
    OutsideArea { kind: &'static str, id: usize },
    #[error("unknown task id {task}")]
    UnknownTask { task: TaskId },
    #[error("unknown node id {node}")]
    UnknownNode { node: NodeId },
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid generation config: {0}")]
    InvalidConfig(String),
    #[error("task {task}: no covering position found after {draws} draws")]
    CoverageExhausted { task: TaskId, draws: u32 },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{context}: parse error at line {line}, column {column}: {message}")]
    Parse {
        context: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{context}: unsupported schema_version {found} (expected {expected})")]
    Version {
        context: String,
        found: u64,
        expected: u64,
    },
}

impl ScenarioError {
    pub(crate) fn parse(context: impl Into<String>, err: serde_json::Error) -> Self {
        ScenarioError::Parse {
            context: context.into(),
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("brute force refused: {tasks} tasks exceeds the cap of {cap}")]
    TooLarge { tasks: usize, cap: usize },
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("a sweep needs at least one seed")]
    NoSeeds,
    #[error("a sweep needs at least one scenario family")]
    NoFamilies,
    #[error("failed to write report: {0}")]
    Csv(#[from] csv::Error),
    #[error("failed to write report: {0}")]
    Io(#[from] std::io::Error),
}
