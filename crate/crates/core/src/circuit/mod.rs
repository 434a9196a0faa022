//! Typed hypergraph model of power-converter topologies.
//!
//! A [`Topology`] is a set of vertices (the three ports plus numbered
//! devices) and a list of hyperedges (electrical nets) over device
//! terminals. Two-terminal devices (`Sa`, `Sb`, `C`, `L`) expose slots `1`
//! and `2`; transistors expose pins `D`, `G`, `S`, `B`; each port exposes a
//! single terminal.
//!
//! Topologies are stored in canonical form. Members of each net are sorted
//! by `(vertex index, slot)`, nets are sorted by their member sequence, and
//! two-terminal devices are oriented so that slot `1` sits on the net that
//! sorts first. Two-terminal devices are unpolarized, so orientation carries
//! no electrical meaning and every encoder sees one representative per
//! wiring.

mod json;
mod validity;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use json::{design_from_value, design_to_value, parse_circuit_json, serialize_circuit_json};
pub use validity::{is_connected, validate_structure, vertex_degree, ValidityReport, Violation};

/// One of the three fixed circuit ports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PortKind {
    Vin,
    Vout,
    Gnd,
}

impl PortKind {
    pub const ALL: [PortKind; 3] = [PortKind::Vin, PortKind::Vout, PortKind::Gnd];

    pub fn name(self) -> &'static str {
        match self {
            PortKind::Vin => "VIN",
            PortKind::Vout => "VOUT",
            PortKind::Gnd => "GND",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        PortKind::ALL.into_iter().find(|p| p.name() == name)
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for PortKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Device kinds: the four converter components plus the four-pin
/// transistor extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DeviceKind {
    /// Phase-I switch.
    Sa,
    /// Phase-II switch.
    Sb,
    C,
    L,
    Nmos,
    Pmos,
}

impl DeviceKind {
    pub const ALL: [DeviceKind; 6] = [
        DeviceKind::Sa,
        DeviceKind::Sb,
        DeviceKind::C,
        DeviceKind::L,
        DeviceKind::Nmos,
        DeviceKind::Pmos,
    ];
    pub const TWO_TERMINAL: [DeviceKind; 4] =
        [DeviceKind::Sa, DeviceKind::Sb, DeviceKind::C, DeviceKind::L];

    pub fn name(self) -> &'static str {
        match self {
            DeviceKind::Sa => "Sa",
            DeviceKind::Sb => "Sb",
            DeviceKind::C => "C",
            DeviceKind::L => "L",
            DeviceKind::Nmos => "NMOS",
            DeviceKind::Pmos => "PMOS",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        DeviceKind::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn is_transistor(self) -> bool {
        matches!(self, DeviceKind::Nmos | DeviceKind::Pmos)
    }

    pub fn slots(self) -> &'static [Slot] {
        if self.is_transistor() {
            &[Slot::D, Slot::G, Slot::S, Slot::B]
        } else {
            &[Slot::One, Slot::Two]
        }
    }
}

impl fmt::Display for DeviceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Terminal label within a vertex. Ports use [`Slot::One`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    One,
    Two,
    /// Drain.
    D,
    /// Gate.
    G,
    /// Source.
    S,
    /// Body.
    B,
}

impl Slot {
    pub fn label(self) -> &'static str {
        match self {
            Slot::One => "1",
            Slot::Two => "2",
            Slot::D => "D",
            Slot::G => "G",
            Slot::S => "S",
            Slot::B => "B",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        [Slot::One, Slot::Two, Slot::D, Slot::G, Slot::S, Slot::B]
            .into_iter()
            .find(|s| s.label() == label)
    }

    pub fn is_pin(self) -> bool {
        !matches!(self, Slot::One | Slot::Two)
    }
}

/// A vertex of the topology hypergraph.
///
/// Ordering follows the canonical declaration order: `VIN < VOUT < GND`,
/// then devices by identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Port(PortKind),
    // `id` precedes `kind` so the derived ordering is by identifier.
    Device { id: usize, kind: DeviceKind },
}

impl Vertex {
    pub fn device(kind: DeviceKind, id: usize) -> Self {
        Vertex::Device { id, kind }
    }

    /// Position in the full canonical declaration order (ports occupy 0..3).
    pub fn rank(&self) -> usize {
        match *self {
            Vertex::Port(p) => p.index(),
            Vertex::Device { id, .. } => 3 + id,
        }
    }

    pub fn slots(&self) -> &'static [Slot] {
        match self {
            Vertex::Port(_) => &[Slot::One],
            Vertex::Device { kind, .. } => kind.slots(),
        }
    }

    pub fn device_kind(&self) -> Option<DeviceKind> {
        match *self {
            Vertex::Port(_) => None,
            Vertex::Device { kind, .. } => Some(kind),
        }
    }

    pub fn is_two_terminal(&self) -> bool {
        matches!(self.device_kind(), Some(k) if !k.is_transistor())
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Port(p) => f.write_str(p.name()),
            Vertex::Device { id, kind } => write!(f, "{kind}{id}"),
        }
    }
}

/// A single connection point: a vertex plus one of its slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Terminal {
    pub vertex: Vertex,
    pub slot: Slot,
}

impl Terminal {
    pub fn new(vertex: Vertex, slot: Slot) -> Self {
        Self { vertex, slot }
    }

    pub fn port(kind: PortKind) -> Self {
        Self::new(Vertex::Port(kind), Slot::One)
    }

    pub fn device(kind: DeviceKind, id: usize, slot: Slot) -> Self {
        Self::new(Vertex::device(kind, id), slot)
    }

    // Sort key with two-terminal orientation erased.
    fn erased_key(&self) -> (usize, Slot) {
        let slot = if self.vertex.is_two_terminal() {
            Slot::One
        } else {
            self.slot
        };
        (self.vertex.rank(), slot)
    }
}

impl fmt::Display for Terminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.vertex {
            Vertex::Port(p) => f.write_str(p.name()),
            Vertex::Device { .. } => write!(f, "{}.{}", self.vertex, self.slot.label()),
        }
    }
}

impl FromStr for Terminal {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(p) = PortKind::from_name(s) {
            return Ok(Terminal::port(p));
        }
        let bad = || CircuitError::Syntax(format!("malformed terminal `{s}`"));
        let (vertex, slot) = s.split_once('.').ok_or_else(bad)?;
        let digits = vertex.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
        let kind = DeviceKind::from_name(&vertex[..digits]).ok_or_else(bad)?;
        let id = vertex[digits..].parse().map_err(|_| bad())?;
        let slot = Slot::from_label(slot).ok_or_else(bad)?;
        Ok(Terminal::device(kind, id, slot))
    }
}

/// An electrical net: a sorted set of at least one terminal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperedge {
    members: Vec<Terminal>,
}

impl Hyperedge {
    pub fn members(&self) -> &[Terminal] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, t: &Terminal) -> bool {
        self.members.binary_search(t).is_ok()
    }

    pub fn touches(&self, v: &Vertex) -> bool {
        self.members.iter().any(|m| m.vertex == *v)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("{location}: {source}")]
    At {
        location: String,
        #[source]
        source: Box<CircuitError>,
    },
    #[error("duplicate port {0}")]
    DuplicatePort(PortKind),
    #[error("ports must be declared first, in VIN, VOUT, GND order")]
    PortOrder,
    #[error("identifier gap: device identifiers must be 0..{count}, found {found}")]
    IdentifierGap { count: usize, found: usize },
    #[error("unknown kind `{0}`")]
    UnknownKind(String),
    #[error("device {id} is declared as {declared}, referenced as {found}")]
    KindMismatch {
        id: usize,
        declared: DeviceKind,
        found: DeviceKind,
    },
    #[error("vertex {0} is not declared")]
    UnknownVertex(Vertex),
    #[error("slot `{slot}` is not valid for {vertex}")]
    InvalidSlot { vertex: Vertex, slot: String },
    #[error("terminal {0} listed twice in one hyperedge")]
    DuplicateMember(Terminal),
    #[error("empty hyperedge")]
    EmptyEdge,
    #[error("duty {0} not in option set")]
    InvalidDuty(f64),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Syntax(String),
}

impl CircuitError {
    pub(crate) fn at(self, location: impl Into<String>) -> Self {
        CircuitError::At {
            location: location.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, with location wrappers removed.
    pub fn root(&self) -> &CircuitError {
        match self {
            CircuitError::At { source, .. } => source.root(),
            other => other,
        }
    }
}

/// A power-converter topology in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Topology {
    vertex_order: Vec<Vertex>,
    edges: Vec<Hyperedge>,
}

impl Topology {
    /// Builds a topology from a declaration order and a list of nets.
    ///
    /// The declaration must list ports first (a subset of `VIN, VOUT, GND`,
    /// in that order) followed by devices with identifiers `0..n`. Every
    /// terminal must reference a declared vertex with a valid slot, and no
    /// net may list the same terminal twice. Structural validity (dangling
    /// terminals, shorts, connectivity) is not required here; see
    /// [`validate_structure`].
    pub fn new(vertex_order: Vec<Vertex>, edges: Vec<Vec<Terminal>>) -> Result<Self, CircuitError> {
        check_vertex_order(&vertex_order)?;
        let device_kinds: Vec<DeviceKind> =
            vertex_order.iter().filter_map(Vertex::device_kind).collect();
        let ports: Vec<PortKind> = vertex_order
            .iter()
            .filter_map(|v| match v {
                Vertex::Port(p) => Some(*p),
                _ => None,
            })
            .collect();

        let mut nets = Vec::with_capacity(edges.len());
        for (i, edge) in edges.into_iter().enumerate() {
            if edge.is_empty() {
                return Err(CircuitError::EmptyEdge.at(format!("edges[{i}]")));
            }
            for (j, t) in edge.iter().enumerate() {
                check_terminal(t, &ports, &device_kinds)
                    .map_err(|e| e.at(format!("edges[{i}][{j}]")))?;
            }
            let mut members = edge;
            members.sort_unstable();
            if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
                return Err(CircuitError::DuplicateMember(w[0]).at(format!("edges[{i}]")));
            }
            nets.push(members);
        }

        orient(&mut nets, &device_kinds);
        let mut edges: Vec<Hyperedge> = nets
            .into_iter()
            .map(|mut members| {
                members.sort_unstable();
                Hyperedge { members }
            })
            .collect();
        edges.sort_unstable();
        Ok(Self {
            vertex_order,
            edges,
        })
    }

    /// Builds a topology declaring all three ports followed by `devices`.
    pub fn with_devices(
        devices: &[DeviceKind],
        edges: Vec<Vec<Terminal>>,
    ) -> Result<Self, CircuitError> {
        Self::new(full_order(devices), edges)
    }

    pub fn vertex_order(&self) -> &[Vertex] {
        &self.vertex_order
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_order.len()
    }

    pub fn device_count(&self) -> usize {
        self.vertex_order
            .iter()
            .filter(|v| matches!(v, Vertex::Device { .. }))
            .count()
    }

    /// Device kinds in identifier order.
    pub fn device_kinds(&self) -> Vec<DeviceKind> {
        self.vertex_order
            .iter()
            .filter_map(Vertex::device_kind)
            .collect()
    }

    pub fn has_port(&self, port: PortKind) -> bool {
        self.vertex_order.contains(&Vertex::Port(port))
    }

    pub fn has_transistors(&self) -> bool {
        self.device_kinds().iter().any(|k| k.is_transistor())
    }

    /// Position of `v` in the declaration order.
    pub fn position(&self, v: &Vertex) -> Option<usize> {
        self.vertex_order.binary_search(v).ok()
    }

    /// Sum of hyperedge cardinalities.
    pub fn incidence_count(&self) -> usize {
        self.edges.iter().map(Hyperedge::len).sum()
    }

    /// Indices of the nets containing `t`.
    pub fn nets_of(&self, t: &Terminal) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.contains(t))
            .map(|(i, _)| i)
            .collect()
    }
}

/// `VIN, VOUT, GND` followed by devices numbered in order.
pub fn full_order(devices: &[DeviceKind]) -> Vec<Vertex> {
    PortKind::ALL
        .into_iter()
        .map(Vertex::Port)
        .chain(
            devices
                .iter()
                .enumerate()
                .map(|(id, &kind)| Vertex::device(kind, id)),
        )
        .collect()
}

fn check_vertex_order(order: &[Vertex]) -> Result<(), CircuitError> {
    let mut last_port: Option<PortKind> = None;
    let mut next_id = 0;
    for (i, v) in order.iter().enumerate() {
        let at = |e: CircuitError| e.at(format!("vertices[{i}]"));
        match *v {
            Vertex::Port(p) => {
                if next_id > 0 {
                    return Err(at(CircuitError::PortOrder));
                }
                match last_port {
                    Some(q) if q == p => return Err(at(CircuitError::DuplicatePort(p))),
                    Some(q) if q > p => return Err(at(CircuitError::PortOrder)),
                    _ => {}
                }
                last_port = Some(p);
            }
            Vertex::Device { id, .. } => {
                if id != next_id {
                    return Err(at(CircuitError::IdentifierGap {
                        count: next_id,
                        found: id,
                    }));
                }
                next_id += 1;
            }
        }
    }
    Ok(())
}

fn check_terminal(
    t: &Terminal,
    ports: &[PortKind],
    device_kinds: &[DeviceKind],
) -> Result<(), CircuitError> {
    match t.vertex {
        Vertex::Port(p) => {
            if !ports.contains(&p) {
                return Err(CircuitError::UnknownVertex(t.vertex));
            }
        }
        Vertex::Device { id, kind } => {
            let declared = *device_kinds.get(id).ok_or(CircuitError::IdentifierGap {
                count: device_kinds.len(),
                found: id,
            })?;
            if declared != kind {
                return Err(CircuitError::KindMismatch {
                    id,
                    declared,
                    found: kind,
                });
            }
        }
    }
    if !t.vertex.slots().contains(&t.slot) {
        return Err(CircuitError::InvalidSlot {
            vertex: t.vertex,
            slot: t.slot.label().to_string(),
        });
    }
    Ok(())
}

/// Orients two-terminal devices so slot 1 lies on the net whose
/// orientation-free key sorts first. A device with exactly one used terminal
/// gets it on slot 1. Devices whose terminals are reused or tied keep their
/// labels.
fn orient(nets: &mut [Vec<Terminal>], device_kinds: &[DeviceKind]) {
    let keys: Vec<Vec<(usize, Slot)>> = nets
        .iter()
        .map(|n| {
            let mut k: Vec<_> = n.iter().map(Terminal::erased_key).collect();
            k.sort_unstable();
            k
        })
        .collect();

    let mut flips = vec![false; device_kinds.len()];
    let mut any = false;
    for (id, kind) in device_kinds.iter().enumerate() {
        if kind.is_transistor() {
            continue;
        }
        let one = Terminal::device(*kind, id, Slot::One);
        let two = Terminal::device(*kind, id, Slot::Two);
        let find = |t: &Terminal| -> Vec<usize> {
            nets.iter()
                .enumerate()
                .filter(|(_, n)| n.binary_search(t).is_ok())
                .map(|(i, _)| i)
                .collect()
        };
        let flip = match (find(&one).as_slice(), find(&two).as_slice()) {
            ([a], [b]) => keys[*b].cmp(&keys[*a]) == Ordering::Less,
            ([], [_]) => true,
            _ => false,
        };
        flips[id] = flip;
        any |= flip;
    }
    if !any {
        return;
    }
    for net in nets.iter_mut() {
        for t in net.iter_mut() {
            if let Vertex::Device { id, .. } = t.vertex {
                if flips[id] {
                    t.slot = match t.slot {
                        Slot::One => Slot::Two,
                        Slot::Two => Slot::One,
                        s => s,
                    };
                }
            }
        }
    }
}

/// Compact text notation: the declaration list, a colon, then nets
/// separated by `;`, for example
/// `VIN VOUT GND Sa Sb L : VIN Sa0.1 ; Sa0.2 Sb1.1 L2.1 ; L2.2 VOUT ; Sb1.2 GND`.
impl FromStr for Topology {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (decl, nets) = s
            .split_once(':')
            .ok_or_else(|| CircuitError::Syntax("expected `:` after declarations".into()))?;
        let mut order = Vec::new();
        let mut next_id = 0;
        for name in decl.split_whitespace() {
            if let Some(p) = PortKind::from_name(name) {
                order.push(Vertex::Port(p));
            } else if let Some(k) = DeviceKind::from_name(name) {
                order.push(Vertex::device(k, next_id));
                next_id += 1;
            } else {
                return Err(CircuitError::UnknownKind(name.to_string()));
            }
        }
        let edges = nets
            .split(';')
            .filter(|n| !n.trim().is_empty())
            .map(|n| n.split_whitespace().map(str::parse).collect())
            .collect::<Result<Vec<Vec<Terminal>>, _>>()?;
        Topology::new(order, edges)
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertex_order.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match v {
                Vertex::Port(p) => f.write_str(p.name())?,
                Vertex::Device { kind, .. } => f.write_str(kind.name())?,
            }
        }
        f.write_str(" :")?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(" ;")?;
            }
            for m in e.members() {
                write!(f, " {m}")?;
            }
        }
        Ok(())
    }
}

/// The five selectable duty cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DutyCycle {
    D01,
    D03,
    D05,
    D07,
    D09,
}

impl DutyCycle {
    pub const ALL: [DutyCycle; 5] = [
        DutyCycle::D01,
        DutyCycle::D03,
        DutyCycle::D05,
        DutyCycle::D07,
        DutyCycle::D09,
    ];

    pub fn value(self) -> f64 {
        match self {
            DutyCycle::D01 => 0.1,
            DutyCycle::D03 => 0.3,
            DutyCycle::D05 => 0.5,
            DutyCycle::D07 => 0.7,
            DutyCycle::D09 => 0.9,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_value(value: f64) -> Option<Self> {
        DutyCycle::ALL
            .into_iter()
            .find(|d| (d.value() - value).abs() < 1e-9)
    }
}

impl fmt::Display for DutyCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// A topology with a chosen duty cycle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CircuitDesign {
    pub topology: Topology,
    pub duty: DutyCycle,
}

impl CircuitDesign {
    pub fn new(topology: Topology, duty: DutyCycle) -> Self {
        Self { topology, duty }
    }
}

/// Target performance: voltage conversion ratio and power efficiency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spec {
    voltage_ratio: f64,
    efficiency: f64,
}

impl Spec {
    pub fn new(voltage_ratio: f64, efficiency: f64) -> Result<Self, CircuitError> {
        if !voltage_ratio.is_finite() {
            return Err(CircuitError::InvalidSpec(format!(
                "voltage ratio {voltage_ratio} is not finite"
            )));
        }
        if !(0.0..=1.0).contains(&efficiency) {
            return Err(CircuitError::InvalidSpec(format!(
                "efficiency {efficiency} outside [0, 1]"
            )));
        }
        Ok(Self {
            voltage_ratio,
            efficiency,
        })
    }

    pub fn voltage_ratio(&self) -> f64 {
        self.voltage_ratio
    }

    pub fn efficiency(&self) -> f64 {
        self.efficiency
    }
}
