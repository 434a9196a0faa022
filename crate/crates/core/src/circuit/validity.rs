//! Structural validity rules.
//!
//! A topology is valid when (a) every port is declared, (b) every terminal
//! sits in exactly one net, (c) no net shorts both terminals of a
//! two-terminal device, (d) every net has at least two members and (e) the
//! vertex/net incidence graph is connected.

use std::collections::HashMap;
use std::fmt;

use super::{CircuitError, PortKind, Terminal, Topology, Vertex};
use crate::unionfind::DisjointSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingPort(PortKind),
    UnusedTerminal(Terminal),
    ReusedTerminal { terminal: Terminal, count: usize },
    SelfShort { vertex: Vertex, edge: usize },
    UndersizedEdge { edge: usize, size: usize },
    Disconnected { components: usize },
}

impl Violation {
    /// The rule letter (`a` through `e`) this violation breaks.
    pub fn rule(&self) -> char {
        match self {
            Violation::MissingPort(_) => 'a',
            Violation::UnusedTerminal(_) | Violation::ReusedTerminal { .. } => 'b',
            Violation::SelfShort { .. } => 'c',
            Violation::UndersizedEdge { .. } => 'd',
            Violation::Disconnected { .. } => 'e',
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingPort(p) => write!(f, "(a) port {p} missing"),
            Violation::UnusedTerminal(t) => write!(f, "(b) terminal {t} is not connected"),
            Violation::ReusedTerminal { terminal, count } => {
                write!(f, "(b) terminal {terminal} appears in {count} nets")
            }
            Violation::SelfShort { vertex, edge } => {
                write!(f, "(c) net {edge} shorts both terminals of {vertex}")
            }
            Violation::UndersizedEdge { edge, size } => {
                write!(f, "(d) net {edge} has {size} member(s)")
            }
            Violation::Disconnected { components } => {
                write!(f, "(e) circuit splits into {components} components")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub fn validate_structure(t: &Topology) -> ValidityReport {
    let mut violations = Vec::new();

    for p in PortKind::ALL {
        if !t.has_port(p) {
            violations.push(Violation::MissingPort(p));
        }
    }

    let mut uses: HashMap<Terminal, usize> = HashMap::new();
    for e in t.edges() {
        for m in e.members() {
            *uses.entry(*m).or_default() += 1;
        }
    }
    for v in t.vertex_order() {
        for &slot in v.slots() {
            let terminal = Terminal::new(*v, slot);
            match uses.get(&terminal).copied().unwrap_or(0) {
                0 => violations.push(Violation::UnusedTerminal(terminal)),
                1 => {}
                count => violations.push(Violation::ReusedTerminal { terminal, count }),
            }
        }
    }

    for (i, e) in t.edges().iter().enumerate() {
        // Members are sorted, so both slots of a device are adjacent.
        for w in e.members().windows(2) {
            if w[0].vertex == w[1].vertex && w[0].vertex.is_two_terminal() {
                violations.push(Violation::SelfShort {
                    vertex: w[0].vertex,
                    edge: i,
                });
            }
        }
        if e.len() < 2 {
            violations.push(Violation::UndersizedEdge {
                edge: i,
                size: e.len(),
            });
        }
    }

    let components = component_count(t);
    if components != 1 {
        violations.push(Violation::Disconnected { components });
    }

    ValidityReport { violations }
}

fn component_count(t: &Topology) -> usize {
    let order = t.vertex_order();
    let mut ds = DisjointSet::new(order.len());
    for e in t.edges() {
        let mut positions = e.members().iter().filter_map(|m| t.position(&m.vertex));
        if let Some(first) = positions.next() {
            for p in positions {
                ds.union(first, p);
            }
        }
    }
    ds.components()
}

/// True when all declared vertices form a single connected component, with
/// terminals of the same vertex treated as linked.
pub fn is_connected(t: &Topology) -> bool {
    component_count(t) == 1
}

/// Number of distinct nets touching any terminal of `v`.
pub fn vertex_degree(t: &Topology, v: &Vertex) -> Result<usize, CircuitError> {
    if t.position(v).is_none() {
        return Err(CircuitError::UnknownVertex(*v));
    }
    Ok(t.edges().iter().filter(|e| e.touches(v)).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{DeviceKind, Slot, Topology};
    use crate::fixtures;

    fn parse(s: &str) -> Topology {
        s.parse().unwrap()
    }

    #[test]
    fn buck_is_valid() {
        let report = validate_structure(&fixtures::buck());
        assert!(report.is_valid(), "{report}");
    }

    #[test]
    fn self_short_is_rule_c() {
        let t = parse("VIN VOUT GND Sa : VIN VOUT GND ; Sa0.1 Sa0.2");
        let report = validate_structure(&t);
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.rule() == 'c'));
    }

    #[test]
    fn dangling_ground_is_rule_b() {
        let t = parse("VIN VOUT GND Sa : VIN Sa0.1 ; Sa0.2 VOUT");
        let report = validate_structure(&t);
        assert!(report.violations.contains(&Violation::UnusedTerminal(
            Terminal::port(PortKind::Gnd)
        )));
    }

    #[test]
    fn missing_port_is_rule_a() {
        let t = parse("VIN VOUT Sa : VIN Sa0.1 ; Sa0.2 VOUT");
        let report = validate_structure(&t);
        assert_eq!(report.violations, vec![Violation::MissingPort(PortKind::Gnd)]);
    }

    #[test]
    fn singleton_and_reuse() {
        let t = parse("VIN VOUT GND Sa : VIN Sa0.1 ; VIN Sa0.2 VOUT ; GND");
        let rules: Vec<char> = validate_structure(&t).violations.iter().map(Violation::rule).collect();
        assert!(rules.contains(&'b'));
        assert!(rules.contains(&'d'));
    }

    #[test]
    fn connectivity() {
        assert!(is_connected(&fixtures::buck()));
        // Two loops sharing no vertex.
        let split = parse("VIN VOUT GND C L : VIN VOUT GND ; C0.1 L1.1 ; C0.2 L1.2");
        assert!(!is_connected(&split));
        assert_eq!(component_count(&split), 2);
        let ports_only = parse("VIN VOUT GND : VIN VOUT GND");
        assert!(is_connected(&ports_only));
        assert!(validate_structure(&ports_only).is_valid());
    }

    #[test]
    fn degrees() {
        let buck = fixtures::buck();
        assert_eq!(vertex_degree(&buck, &Vertex::Port(PortKind::Vin)).unwrap(), 1);
        assert_eq!(vertex_degree(&buck, &Vertex::device(DeviceKind::L, 2)).unwrap(), 2);
        assert!(vertex_degree(&buck, &Vertex::device(DeviceKind::C, 7)).is_err());
        let total: usize = buck
            .vertex_order()
            .iter()
            .map(|v| vertex_degree(&buck, v).unwrap())
            .sum();
        assert_eq!(total, buck.incidence_count());
        assert!(total <= 2 * buck.vertex_count());
    }

    #[test]
    fn transistor_pins_may_share_a_net() {
        let inv = fixtures::inverter();
        assert!(validate_structure(&inv).is_valid());
        let short = Terminal::device(DeviceKind::Nmos, 0, Slot::S);
        assert_eq!(inv.nets_of(&short).len(), 1);
    }
}
