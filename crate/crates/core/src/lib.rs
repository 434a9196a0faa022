//! Power-converter topologies as typed hypergraphs, with bidirectional
//! token-sequence formulations for sequence models, isomorphism-aware
//! canonicalization, dataset tooling and evaluation metrics.
//!
//! ```
//! use amforge_core::{decode, encode, fixtures, CircuitDesign, DutyCycle, FormulationId, Spec};
//!
//! let design = CircuitDesign::new(fixtures::buck(), DutyCycle::D05);
//! let spec = Spec::new(0.65, 0.95544).unwrap();
//! let pair = encode(FormulationId::Sfci, &design, &spec).unwrap();
//! assert_eq!(pair.output.len(), 19);
//! assert_eq!(decode(FormulationId::Sfci, &pair.input, &pair.output).unwrap(), design);
//! ```

pub mod canon;
pub mod circuit;
pub mod dataset;
pub mod fixtures;
pub mod formulations;
pub mod metrics;
mod unionfind;

pub use canon::{canonical_key, is_isomorphic, permute, CanonError, CanonicalKey, DevicePermutation};
pub use circuit::{
    is_connected, parse_circuit_json, serialize_circuit_json, validate_structure, vertex_degree,
    CircuitDesign, CircuitError, DeviceKind, DutyCycle, Hyperedge, PortKind, Slot, Spec, Terminal,
    Topology, ValidityReport, Vertex, Violation,
};
pub use dataset::{
    sample_topologies, DatasetError, DatasetRecord, MockMode, PerformanceProvider, PerformanceTable, SampleConfig,
};
pub use formulations::{
    build_matrix, decode, encode, matrix_to_edges, token_length, vocabulary, DecodeError, Element,
    EncodeError, FormulationId, IncidenceMatrix, MatrixEntry, SequencePair, Vocabulary,
};
pub use metrics::{mse, success_rate, sweep, EvalRecord, MetricsError, Outcome, ToleranceSweep};
