//! Token-sequence formulations of `(CircuitDesign, Spec)` pairs.
//!
//! Seven formulations are supported:
//!
//! | id         | input numerals    | output structure                     |
//! |------------|-------------------|--------------------------------------|
//! | `cf`       | digit text        | labeled, parenthesized net list      |
//! | `pm`       | digit text        | select block + incidence matrix      |
//! | `fm`       | scalars + labels  | select block + incidence matrix      |
//! | `sfm`      | scalars           | duty token + incidence matrix        |
//! | `sfci`     | scalars           | duty token + net list with kind/id   |
//! | `sfci-nct` | scalars           | as `sfci`, identifiers only          |
//! | `sfci-ndp` | scalars, no duty options prefix | as `sfci`              |
//!
//! Every encoder is deterministic and every decoder inverts its encoder
//! exactly on valid designs. Decoders reject malformed sequences with a
//! [`DecodeError`]; sequences that parse but describe a structurally invalid
//! circuit decode successfully and fail [`validate_structure`].
//!
//! [`validate_structure`]: crate::circuit::validate_structure

mod assemble;
mod cf;
mod cursor;
mod matrix;
mod matrix_seq;
pub mod numeric;
mod sfci;
pub mod vocab;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{
    validate_structure, CircuitDesign, CircuitError, DeviceKind, Spec, Terminal, ValidityReport, Vertex,
};

pub use cursor::Side;
pub use matrix::{build_matrix, matrix_to_edges, IncidenceMatrix, MatrixEntry};
pub use vocab::{vocabulary, Vocabulary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FormulationId {
    Cf,
    Pm,
    Fm,
    Sfm,
    Sfci,
    SfciNct,
    SfciNdp,
}

impl FormulationId {
    pub const ALL: [FormulationId; 7] = [
        FormulationId::Cf,
        FormulationId::Pm,
        FormulationId::Fm,
        FormulationId::Sfm,
        FormulationId::Sfci,
        FormulationId::SfciNct,
        FormulationId::SfciNdp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FormulationId::Cf => "cf",
            FormulationId::Pm => "pm",
            FormulationId::Fm => "fm",
            FormulationId::Sfm => "sfm",
            FormulationId::Sfci => "sfci",
            FormulationId::SfciNct => "sfci-nct",
            FormulationId::SfciNdp => "sfci-ndp",
        }
    }

    /// Output is an incidence matrix.
    pub fn is_matrix(self) -> bool {
        matches!(self, FormulationId::Pm | FormulationId::Fm | FormulationId::Sfm)
    }

    /// Numeric inputs travel as [`Element::Scalar`].
    pub fn uses_scalars(self) -> bool {
        !matches!(self, FormulationId::Cf | FormulationId::Pm)
    }

    /// Number of output tokens spent on the duty choice.
    pub fn duty_block_len(self) -> usize {
        match self {
            FormulationId::Pm | FormulationId::Fm => 5,
            // `Duty cycle :` plus a seven-character numeral.
            FormulationId::Cf => 3 + 7,
            _ => 1,
        }
    }
}

impl fmt::Display for FormulationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormulationId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        FormulationId::ALL
            .into_iter()
            .find(|f| f.name() == norm)
            .ok_or_else(|| format!("unknown formulation `{s}`"))
    }
}

impl TryFrom<String> for FormulationId {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<FormulationId> for String {
    fn from(f: FormulationId) -> String {
        f.name().to_string()
    }
}

/// One sequence position: a symbolic token or a raw numeric value.
#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Token(String),
    Scalar(f64),
}

impl Element {
    pub fn token(s: impl Into<String>) -> Self {
        Element::Token(s.into())
    }

    pub fn as_token(&self) -> Option<&str> {
        match self {
            Element::Token(t) => Some(t),
            Element::Scalar(_) => None,
        }
    }

    pub fn is_scalar(&self) -> bool {
        matches!(self, Element::Scalar(_))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Token(t) => f.write_str(t),
            Element::Scalar(x) => write!(f, "[{x}]"),
        }
    }
}

/// Encoded input and output sequences of one design.
#[derive(Debug, Clone, PartialEq)]
pub struct SequencePair {
    pub formulation: FormulationId,
    pub input: Vec<Element>,
    pub output: Vec<Element>,
}

impl SequencePair {
    /// Checks scalar discipline: scalars only on the input side of
    /// float-input formulations.
    pub fn new(
        formulation: FormulationId,
        input: Vec<Element>,
        output: Vec<Element>,
    ) -> Result<Self, DecodeError> {
        if let Some(pos) = output.iter().position(Element::is_scalar) {
            return Err(DecodeError::UnexpectedScalar {
                side: Side::Output,
                pos,
            });
        }
        if !formulation.uses_scalars() {
            if let Some(pos) = input.iter().position(Element::is_scalar) {
                return Err(DecodeError::UnexpectedScalar {
                    side: Side::Input,
                    pos,
                });
            }
        }
        Ok(Self {
            formulation,
            input,
            output,
        })
    }

    /// Space-separated rendering; scalars appear as `[value]`.
    pub fn render(elements: &[Element]) -> String {
        elements
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EncodeError {
    #[error("design is not structurally valid: {0}")]
    Invalid(ValidityReport),
    #[error("{formulation} does not support {kind} devices")]
    UnsupportedKind {
        formulation: FormulationId,
        kind: DeviceKind,
    },
    #[error("{devices} devices exceed the identifier vocabulary (at most {max})")]
    TooManyDevices { devices: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecodeError {
    #[error("unknown token `{token}` at {side} position {pos}")]
    UnknownToken { side: Side, pos: usize, token: String },
    #[error("unexpected `{found}` at {side} position {pos}, expected {expected}")]
    UnexpectedToken {
        side: Side,
        pos: usize,
        found: String,
        expected: &'static str,
    },
    #[error("unexpected scalar at {side} position {pos}")]
    UnexpectedScalar { side: Side, pos: usize },
    #[error("{side} ended early, expected {expected}")]
    Truncated { side: Side, expected: &'static str },
    #[error("malformed numeral at {side} position {pos}")]
    MalformedNumeral { side: Side, pos: usize },
    #[error("missing duty")]
    MissingDuty,
    #[error("invalid duty: {0}")]
    InvalidDuty(String),
    #[error("duty option prefix does not list 0.1, 0.3, 0.5, 0.7, 0.9")]
    DutyOptions,
    #[error("malformed vertex declaration: {0}")]
    Declaration(CircuitError),
    #[error("ragged matrix: row {row} has {len} entries, expected {expected}")]
    RaggedMatrix { row: usize, len: usize, expected: usize },
    #[error("matrix has {rows} rows, expected {expected}")]
    RowCount { rows: usize, expected: usize },
    #[error("asymmetric incidence at ({row}, {col})")]
    AsymmetricIncidence { row: usize, col: usize },
    #[error("diagonal entry {0} is not <no_edge>")]
    DiagonalEntry(usize),
    #[error("port row {row} has a slot-2 entry at column {col}")]
    PortEntry { row: usize, col: usize },
    #[error("incidence entries are inconsistent with any net grouping")]
    InconsistentIncidence,
    #[error("terminal {0} has no connections")]
    DanglingTerminal(Terminal),
    #[error("identifier {id} out of range for {devices} devices")]
    IdentifierOutOfRange { id: usize, devices: usize },
    #[error("device {id} is declared as {declared}, generated as {found}")]
    KindMismatch {
        id: usize,
        declared: DeviceKind,
        found: DeviceKind,
    },
    #[error("vertex {0} is not declared in the input")]
    UndeclaredVertex(Vertex),
    #[error("{0} appears more often than it has terminals")]
    TerminalOverflow(Vertex),
    #[error("terminal {0} listed twice in one net")]
    DuplicateMember(Terminal),
    #[error("empty net")]
    EmptyEdge,
    #[error("{0}")]
    Structure(CircuitError),
}

impl DecodeError {
    /// Short failure class, stable across messages.
    pub fn class(&self) -> &'static str {
        match self {
            DecodeError::UnknownToken { .. } => "unknown token",
            DecodeError::UnexpectedToken { .. } => "unexpected token",
            DecodeError::UnexpectedScalar { .. } => "unexpected scalar",
            DecodeError::Truncated { .. } => "truncated",
            DecodeError::MalformedNumeral { .. } => "malformed numeral",
            DecodeError::MissingDuty => "missing duty",
            DecodeError::InvalidDuty(_) => "invalid duty",
            DecodeError::DutyOptions => "duty options",
            DecodeError::Declaration(_) => "declaration",
            DecodeError::RaggedMatrix { .. } => "ragged matrix",
            DecodeError::RowCount { .. } => "row count",
            DecodeError::AsymmetricIncidence { .. } => "asymmetric incidence",
            DecodeError::DiagonalEntry(_) => "diagonal entry",
            DecodeError::PortEntry { .. } => "port entry",
            DecodeError::InconsistentIncidence => "inconsistent incidence",
            DecodeError::DanglingTerminal(_) => "dangling terminal",
            DecodeError::IdentifierOutOfRange { .. } => "identifier out of range",
            DecodeError::KindMismatch { .. } => "kind mismatch",
            DecodeError::UndeclaredVertex(_) => "undeclared vertex",
            DecodeError::TerminalOverflow(_) => "terminal overflow",
            DecodeError::DuplicateMember(_) => "duplicate member",
            DecodeError::EmptyEdge => "empty edge",
            DecodeError::Structure(_) => "structure",
        }
    }
}

/// Encodes `design` and `spec` in formulation `f`.
pub fn encode(f: FormulationId, design: &CircuitDesign, spec: &Spec) -> Result<SequencePair, EncodeError> {
    let t = &design.topology;
    for kind in t.device_kinds() {
        if kind.is_transistor() && f != FormulationId::Sfci {
            return Err(EncodeError::UnsupportedKind { formulation: f, kind });
        }
    }
    if matches!(
        f,
        FormulationId::Cf | FormulationId::Sfci | FormulationId::SfciNct | FormulationId::SfciNdp
    ) && t.device_count() > vocab::MAX_IDENTIFIER + 1
    {
        return Err(EncodeError::TooManyDevices {
            devices: t.device_count(),
            max: vocab::MAX_IDENTIFIER + 1,
        });
    }
    let report = validate_structure(t);
    if !report.is_valid() {
        return Err(EncodeError::Invalid(report));
    }

    let (input, output) = match f {
        FormulationId::Cf => cf::encode(design, spec),
        FormulationId::Pm | FormulationId::Fm | FormulationId::Sfm => matrix_seq::encode(f, design, spec)?,
        FormulationId::Sfci | FormulationId::SfciNct | FormulationId::SfciNdp => sfci::encode(f, design, spec),
    };
    Ok(SequencePair {
        formulation: f,
        input,
        output,
    })
}

/// Reconstructs a design from an input/output pair. The input supplies the
/// vertex declaration.
pub fn decode(f: FormulationId, input: &[Element], output: &[Element]) -> Result<CircuitDesign, DecodeError> {
    if let Some(pos) = output.iter().position(Element::is_scalar) {
        return Err(DecodeError::UnexpectedScalar {
            side: Side::Output,
            pos,
        });
    }
    match f {
        FormulationId::Cf => cf::decode(input, output),
        FormulationId::Pm | FormulationId::Fm | FormulationId::Sfm => matrix_seq::decode(f, input, output),
        FormulationId::Sfci | FormulationId::SfciNct | FormulationId::SfciNdp => sfci::decode(f, input, output),
    }
}

/// `(input length, output length)`; a scalar counts as one position.
pub fn token_length(pair: &SequencePair) -> (usize, usize) {
    (pair.input.len(), pair.output.len())
}
