//! Canonical labeling, isomorphism testing and type-preserving relabeling.
//!
//! Ports are never relabeled. Devices may be relabeled only among devices of
//! the same kind, so the kind sequence of the declaration is an invariant of
//! the isomorphism class. The canonical key is the lexicographically least
//! net-list rendering over all such relabelings, with two-terminal
//! orientation dropped. Search is exhaustive, bounded by [`MAX_DEVICES`].

use std::collections::HashMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::circuit::{DeviceKind, Slot, Terminal, Topology, Vertex};

/// Largest device count accepted by [`canonical_key`].
pub const MAX_DEVICES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("canonicalization size limit: {devices} devices exceeds {MAX_DEVICES}")]
    SizeLimit { devices: usize },
    #[error("canonicalization does not support {0} devices")]
    UnsupportedKind(DeviceKind),
    #[error("permutation is not a bijection on 0..{0}")]
    NotBijection(usize),
    #[error("permutation covers {got} devices, topology has {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("permutation maps {from_kind}{from} to {to_kind}{to}")]
    NotTypePreserving {
        from: usize,
        from_kind: DeviceKind,
        to: usize,
        to_kind: DeviceKind,
    },
}

/// Byte string identifying an isomorphism class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Lowercase hex SHA-256 of the key bytes, as used in CLI output and
    /// index files.
    pub fn digest_hex(&self) -> String {
        hex::encode(Sha256::digest(&self.0))
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.digest_hex())
    }
}

/// A relabeling of device identifiers: device `i` becomes device
/// `mapping[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DevicePermutation {
    mapping: Vec<usize>,
}

impl DevicePermutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self, CanonError> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &m in &mapping {
            if m >= n || std::mem::replace(&mut seen[m], true) {
                return Err(CanonError::NotBijection(n));
            }
        }
        Ok(Self { mapping })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mapping: (0..n).collect(),
        }
    }

    /// Uniformly random permutation within each kind class of `kinds`.
    pub fn random<R: Rng + ?Sized>(kinds: &[DeviceKind], rng: &mut R) -> Self {
        let mut mapping: Vec<usize> = (0..kinds.len()).collect();
        for class in kind_classes(kinds) {
            let mut targets = class.clone();
            targets.shuffle(rng);
            for (src, dst) in class.into_iter().zip(targets) {
                mapping[src] = dst;
            }
        }
        Self { mapping }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.mapping.len()];
        for (i, &m) in self.mapping.iter().enumerate() {
            inv[m] = i;
        }
        Self { mapping: inv }
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }
}

/// Relabels devices of `t` by `sigma`. Nets are rewritten and the result is
/// re-canonicalized; validity is preserved.
pub fn permute(t: &Topology, sigma: &DevicePermutation) -> Result<Topology, CanonError> {
    let kinds = t.device_kinds();
    if sigma.len() != kinds.len() {
        return Err(CanonError::LengthMismatch {
            expected: kinds.len(),
            got: sigma.len(),
        });
    }
    for (from, &to) in sigma.mapping.iter().enumerate() {
        if kinds[from] != kinds[to] {
            return Err(CanonError::NotTypePreserving {
                from,
                from_kind: kinds[from],
                to,
                to_kind: kinds[to],
            });
        }
    }
    let relabel = |m: &Terminal| match m.vertex {
        Vertex::Device { id, kind } => Terminal::device(kind, sigma.mapping[id], m.slot),
        Vertex::Port(_) => *m,
    };
    let edges = t
        .edges()
        .iter()
        .map(|e| e.members().iter().map(relabel).collect())
        .collect();
    Ok(Topology::new(t.vertex_order().to_vec(), edges)
        .expect("relabeling a well-formed topology keeps it well formed"))
}

type Member = (u8, u8);

fn member_code(t: &Terminal) -> Member {
    let label = match t.slot {
        Slot::One | Slot::Two => 0,
        Slot::D => 1,
        Slot::G => 2,
        Slot::S => 3,
        Slot::B => 4,
    };
    (t.vertex.rank() as u8, label)
}

fn vertex_code(v: &Vertex) -> u8 {
    match v {
        Vertex::Port(p) => *p as u8,
        Vertex::Device { kind, .. } => 3 + *kind as u8,
    }
}

fn kind_classes(kinds: &[DeviceKind]) -> Vec<Vec<usize>> {
    let mut classes: Vec<(DeviceKind, Vec<usize>)> = Vec::new();
    for (id, &k) in kinds.iter().enumerate() {
        match classes.iter_mut().find(|(c, _)| *c == k) {
            Some((_, ids)) => ids.push(id),
            None => classes.push((k, vec![id])),
        }
    }
    classes.into_iter().map(|(_, ids)| ids).collect()
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

pub fn canonical_key(t: &Topology) -> Result<CanonicalKey, CanonError> {
    let kinds = t.device_kinds();
    if let Some(k) = kinds.iter().find(|k| k.is_transistor()) {
        return Err(CanonError::UnsupportedKind(*k));
    }
    if kinds.len() > MAX_DEVICES {
        return Err(CanonError::SizeLimit {
            devices: kinds.len(),
        });
    }

    let nets: Vec<Vec<Member>> = t
        .edges()
        .iter()
        .map(|e| e.members().iter().map(member_code).collect())
        .collect();

    // Per-class candidate images; the relabeling is the product over classes.
    let classes = kind_classes(&kinds);
    let images: Vec<Vec<Vec<usize>>> = classes.iter().map(|c| permutations(c)).collect();
    let mut choice = vec![0usize; classes.len()];
    let mut rank_map: Vec<u8> = (0..(3 + kinds.len()) as u8).collect();
    let mut scratch: Vec<Vec<Member>> = nets.clone();
    let mut best: Option<Vec<Vec<Member>>> = None;

    loop {
        for (ci, class) in classes.iter().enumerate() {
            for (src, &dst) in class.iter().zip(&images[ci][choice[ci]]) {
                rank_map[3 + src] = (3 + dst) as u8;
            }
        }
        for (out, net) in scratch.iter_mut().zip(&nets) {
            // Rebuilt in full: the previous pass reordered the nets.
            out.clear();
            out.extend(net.iter().map(|&(rank, label)| (rank_map[rank as usize], label)));
            out.sort_unstable();
        }
        scratch.sort_unstable();
        if best.as_ref().is_none_or(|b| scratch < *b) {
            best = Some(scratch.clone());
        }

        // Odometer over class choices.
        let mut ci = 0;
        loop {
            if ci == classes.len() {
                return Ok(render_key(t, best.unwrap_or_default()));
            }
            choice[ci] += 1;
            if choice[ci] < images[ci].len() {
                break;
            }
            choice[ci] = 0;
            ci += 1;
        }
    }
}

fn render_key(t: &Topology, nets: Vec<Vec<Member>>) -> CanonicalKey {
    let mut bytes: Vec<u8> = t.vertex_order().iter().map(vertex_code).collect();
    bytes.push(0xff);
    for net in nets {
        bytes.push(net.len() as u8);
        for (rank, label) in net {
            bytes.push(rank);
            bytes.push(label);
        }
    }
    CanonicalKey(bytes)
}

/// True iff `a` and `b` have equal canonical keys. Topologies with different
/// declarations are never isomorphic.
pub fn is_isomorphic(a: &Topology, b: &Topology) -> Result<bool, CanonError> {
    let ka = canonical_key(a)?;
    let kb = canonical_key(b)?;
    Ok(ka == kb)
}

/// Counts topologies per isomorphism class, in order of first appearance.
#[derive(Debug, Default, Clone)]
pub struct DedupIndex {
    order: Vec<CanonicalKey>,
    counts: HashMap<CanonicalKey, usize>,
}

impl DedupIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `t`; returns `true` when its class was not seen before.
    pub fn insert(&mut self, t: &Topology) -> Result<bool, CanonError> {
        let key = canonical_key(t)?;
        Ok(self.insert_key(key))
    }

    pub fn insert_key(&mut self, key: CanonicalKey) -> bool {
        let count = self.counts.entry(key.clone()).or_default();
        *count += 1;
        if *count == 1 {
            self.order.push(key);
            true
        } else {
            false
        }
    }

    pub fn contains(&self, key: &CanonicalKey) -> bool {
        self.counts.contains_key(key)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// `(key, count)` pairs in first-appearance order.
    pub fn entries(&self) -> impl Iterator<Item = (&CanonicalKey, usize)> {
        self.order.iter().map(|k| (k, self.counts[k]))
    }
}

/// Keeps the first topology of each isomorphism class.
pub fn dedup(topologies: impl IntoIterator<Item = Topology>) -> Result<Vec<Topology>, CanonError> {
    let mut index = DedupIndex::new();
    let mut out = Vec::new();
    for t in topologies {
        if index.insert(&t)? {
            out.push(t);
        }
    }
    Ok(out)
}
