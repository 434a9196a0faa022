//! Incidence-matrix view of a topology.
//!
//! `entries[i][j]` records which of vertex `i`'s own terminals share a net
//! with some terminal of vertex `j`: `<edge_1>` for slot 1, `<edge_2>` for
//! slot 2, `<both_edges>` for both.

use std::collections::HashMap;
use std::fmt;

use super::{DecodeError, EncodeError, FormulationId};
use crate::circuit::{validate_structure, CircuitError, Terminal, Topology, Vertex};
use crate::unionfind::DisjointSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixEntry {
    NoEdge,
    Edge1,
    Edge2,
    BothEdges,
}

impl MatrixEntry {
    pub const ALL: [MatrixEntry; 4] = [
        MatrixEntry::NoEdge,
        MatrixEntry::Edge1,
        MatrixEntry::Edge2,
        MatrixEntry::BothEdges,
    ];

    pub fn token(self) -> &'static str {
        match self {
            MatrixEntry::NoEdge => "<no_edge>",
            MatrixEntry::Edge1 => "<edge_1>",
            MatrixEntry::Edge2 => "<edge_2>",
            MatrixEntry::BothEdges => "<both_edges>",
        }
    }

    pub fn from_token(tok: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.token() == tok)
    }

    fn from_claims(one: bool, two: bool) -> Self {
        match (one, two) {
            (false, false) => MatrixEntry::NoEdge,
            (true, false) => MatrixEntry::Edge1,
            (false, true) => MatrixEntry::Edge2,
            (true, true) => MatrixEntry::BothEdges,
        }
    }

    fn claims(self) -> &'static [usize] {
        match self {
            MatrixEntry::NoEdge => &[],
            MatrixEntry::Edge1 => &[0],
            MatrixEntry::Edge2 => &[1],
            MatrixEntry::BothEdges => &[0, 1],
        }
    }
}

impl fmt::Display for MatrixEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// A square grid of [`MatrixEntry`] over a vertex declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    order: Vec<Vertex>,
    entries: Vec<Vec<MatrixEntry>>,
}

impl IncidenceMatrix {
    /// Checks shape, the `<no_edge>` diagonal, port rows and mutual presence.
    pub fn new(order: Vec<Vertex>, entries: Vec<Vec<MatrixEntry>>) -> Result<Self, DecodeError> {
        let n = order.len();
        if let Some(v) = order.iter().find(|v| !matches!(v, Vertex::Port(_)) && !v.is_two_terminal()) {
            return Err(DecodeError::Declaration(CircuitError::Syntax(format!(
                "{v} has no incidence-matrix form"
            ))));
        }
        if entries.len() != n {
            return Err(DecodeError::RowCount {
                rows: entries.len(),
                expected: n,
            });
        }
        for (row, r) in entries.iter().enumerate() {
            if r.len() != n {
                return Err(DecodeError::RaggedMatrix {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
        }
        for i in 0..n {
            if entries[i][i] != MatrixEntry::NoEdge {
                return Err(DecodeError::DiagonalEntry(i));
            }
            if matches!(order[i], Vertex::Port(_)) {
                if let Some(col) = entries[i]
                    .iter()
                    .position(|e| matches!(e, MatrixEntry::Edge2 | MatrixEntry::BothEdges))
                {
                    return Err(DecodeError::PortEntry { row: i, col });
                }
            }
            for (j, other) in entries.iter().enumerate() {
                let a = entries[i][j] != MatrixEntry::NoEdge;
                let b = other[i] != MatrixEntry::NoEdge;
                if a != b {
                    return Err(DecodeError::AsymmetricIncidence { row: i, col: j });
                }
            }
        }
        Ok(Self { order, entries })
    }

    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn entries(&self) -> &[Vec<MatrixEntry>] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> MatrixEntry {
        self.entries[row][col]
    }

    pub fn size(&self) -> usize {
        self.order.len()
    }
}

/// Incidence matrix of a valid two-terminal topology.
pub fn build_matrix(t: &Topology) -> Result<IncidenceMatrix, EncodeError> {
    if let Some(kind) = t.device_kinds().into_iter().find(|k| k.is_transistor()) {
        return Err(EncodeError::UnsupportedKind {
            formulation: FormulationId::Sfm,
            kind,
        });
    }
    let report = validate_structure(t);
    if !report.is_valid() {
        return Err(EncodeError::Invalid(report));
    }
    let mut net_of: HashMap<Terminal, usize> = HashMap::new();
    for (n, e) in t.edges().iter().enumerate() {
        for m in e.members() {
            net_of.insert(*m, n);
        }
    }
    let order = t.vertex_order();
    let groups: Vec<Vec<usize>> = order
        .iter()
        .map(|v| v.slots().iter().map(|&s| net_of[&Terminal::new(*v, s)]).collect())
        .collect();
    let entries = claims_from_groups(&groups);
    Ok(IncidenceMatrix {
        order: order.to_vec(),
        entries,
    })
}

/// Entries implied by a per-vertex list of group ids (one per slot).
fn claims_from_groups(groups: &[Vec<usize>]) -> Vec<Vec<MatrixEntry>> {
    let n = groups.len();
    let mut entries = vec![vec![MatrixEntry::NoEdge; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let claim = |k: usize| groups[i].get(k).is_some_and(|g| groups[j].contains(g));
            entries[i][j] = MatrixEntry::from_claims(claim(0), claim(1));
        }
    }
    entries
}

/// Rebuilds nets from membership claims.
///
/// Mutual claims merge terminal groups. When both sides claim both slots,
/// slot 1 pairs with slot 1 and slot 2 with slot 2.
pub fn matrix_to_edges(m: &IncidenceMatrix) -> Result<Topology, DecodeError> {
    let n = m.size();
    let mut base = Vec::with_capacity(n + 1);
    base.push(0);
    for v in &m.order {
        base.push(base.last().unwrap() + v.slots().len());
    }
    let mut ds = DisjointSet::new(base[n]);
    for i in 0..n {
        for j in i + 1..n {
            let si = m.entries[i][j].claims();
            let sj = m.entries[j][i].claims();
            if si.len() == 2 && sj.len() == 2 {
                ds.union(base[i], base[j]);
                ds.union(base[i] + 1, base[j] + 1);
            } else {
                for &a in si {
                    for &b in sj {
                        ds.union(base[i] + a, base[j] + b);
                    }
                }
            }
        }
    }

    let mut by_root: HashMap<usize, Vec<Terminal>> = HashMap::new();
    let mut groups: Vec<Vec<usize>> = Vec::with_capacity(n);
    for (i, v) in m.order.iter().enumerate() {
        let mut g = Vec::with_capacity(2);
        for (k, &slot) in v.slots().iter().enumerate() {
            let root = ds.find(base[i] + k);
            by_root.entry(root).or_default().push(Terminal::new(*v, slot));
            g.push(root);
        }
        groups.push(g);
    }
    for members in by_root.values() {
        if members.len() == 1 {
            return Err(DecodeError::DanglingTerminal(members[0]));
        }
    }
    if claims_from_groups(&groups) != m.entries {
        return Err(DecodeError::InconsistentIncidence);
    }
    let nets: Vec<Vec<Terminal>> = by_root.into_values().collect();
    Topology::new(m.order.clone(), nets).map_err(DecodeError::Structure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{DeviceKind, PortKind};
    use crate::fixtures;
    use MatrixEntry::*;

    fn pos(t: &Topology, v: Vertex) -> usize {
        t.position(&v).unwrap()
    }

    #[test]
    fn buck_entries() {
        let buck = fixtures::buck();
        let m = build_matrix(&buck).unwrap();
        let vin = pos(&buck, Vertex::Port(PortKind::Vin));
        let sa = pos(&buck, Vertex::device(DeviceKind::Sa, 0));
        let l = pos(&buck, Vertex::device(DeviceKind::L, 2));
        assert_eq!(m.entry(vin, sa), Edge1);
        assert_eq!(m.entry(sa, vin), Edge1);
        assert_eq!(m.entry(sa, l), Edge2);
        for i in 0..m.size() {
            assert_eq!(m.entry(i, i), NoEdge);
        }
        assert_eq!(matrix_to_edges(&m).unwrap(), buck);
    }

    #[test]
    fn parallel_pair_is_slot_aligned() {
        let t: Topology = "VIN VOUT GND C L : VIN C0.1 L1.1 ; C0.2 L1.2 VOUT GND".parse().unwrap();
        let m = build_matrix(&t).unwrap();
        assert_eq!(m.entry(3, 4), BothEdges);
        assert_eq!(m.entry(4, 3), BothEdges);
        let back = matrix_to_edges(&m).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn empty_matrix_dangles() {
        let order = crate::circuit::full_order(&[DeviceKind::Sa]);
        let m = IncidenceMatrix::new(order, vec![vec![NoEdge; 4]; 4]).unwrap();
        assert!(matches!(matrix_to_edges(&m), Err(DecodeError::DanglingTerminal(_))));
    }

    #[test]
    fn structural_checks() {
        let order = crate::circuit::full_order(&[DeviceKind::Sa]);
        let mut e = vec![vec![NoEdge; 4]; 4];
        e[0][3] = Edge1;
        assert_eq!(
            IncidenceMatrix::new(order.clone(), e.clone()).unwrap_err(),
            DecodeError::AsymmetricIncidence { row: 0, col: 3 }
        );
        e[3][0] = Edge1;
        e[0][3] = Edge2;
        assert!(matches!(
            IncidenceMatrix::new(order.clone(), e.clone()),
            Err(DecodeError::PortEntry { row: 0, col: 3 })
        ));
        let mut diag = vec![vec![NoEdge; 4]; 4];
        diag[2][2] = Edge1;
        assert_eq!(IncidenceMatrix::new(order.clone(), diag).unwrap_err(), DecodeError::DiagonalEntry(2));
        let mut ragged = vec![vec![NoEdge; 4]; 4];
        ragged[1].pop();
        assert!(matches!(
            IncidenceMatrix::new(order, ragged),
            Err(DecodeError::RaggedMatrix { row: 1, len: 3, expected: 4 })
        ));
    }

    #[test]
    fn inconsistent_claims_detected() {
        let buck = fixtures::buck();
        let m = build_matrix(&buck).unwrap();
        let mut e = m.entries().to_vec();
        // Sa0 claims L2 through slot 1 instead of slot 2.
        e[3][5] = Edge1;
        let bad = IncidenceMatrix::new(m.order().to_vec(), e).unwrap();
        assert!(matrix_to_edges(&bad).is_err());
    }

    #[test]
    fn transistors_rejected() {
        assert!(matches!(
            build_matrix(&fixtures::inverter()),
            Err(EncodeError::UnsupportedKind { .. })
        ));
    }
}
