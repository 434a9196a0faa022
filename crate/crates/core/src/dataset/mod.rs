//! Seeded topology sampling, JSONL corpora, corpus statistics, performance
//! tables and mock generators that stand in for a trained model.

mod jsonl;
mod mock;
mod perf;
mod sampler;
mod stats;

use thiserror::Error;

use crate::canon::CanonError;
use crate::circuit::DutyCycle;
use crate::formulations::{EncodeError, FormulationId};

pub use jsonl::{
    build_records, export_jsonl, import_jsonl, read_circuits, read_jsonl, write_circuits, write_jsonl,
    DatasetRecord,
};
pub use mock::{corrupt_output, mock_generate, MockMode};
pub use perf::{PerformanceProvider, PerformanceTable};
pub use sampler::{random_design, random_spec, random_topology, sample_topologies, SampleConfig, TopologySampler, ATTEMPT_BUDGET};
pub use stats::{corpus_stats, CorpusStats, LengthStats};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DatasetError {
    #[error("invalid sample configuration: {0}")]
    Config(String),
    #[error("sampling exhausted after {attempts} attempts: {produced} of {requested} unique topologies")]
    Exhausted {
        produced: usize,
        requested: usize,
        attempts: u64,
    },
    #[error(transparent)]
    Canon(#[from] CanonError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("no records")]
    Empty,
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("line {line}: formulation mismatch: expected {expected}, found {found}")]
    FormulationMismatch {
        line: usize,
        expected: FormulationId,
        found: FormulationId,
    },
    #[error("no performance values for topology {key} at duty {duty}")]
    MissingPerformance { key: String, duty: DutyCycle },
    #[error("performance table: {0}")]
    Csv(String),
    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for DatasetError {
    fn from(e: std::io::Error) -> Self {
        DatasetError::Io(e.to_string())
    }
}
