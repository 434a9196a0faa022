//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::HashSet;

use amforge_core::circuit::full_order;
use amforge_core::{validate_structure, DeviceKind, Slot, Terminal, Topology, Vertex};
use rand::seq::SliceRandom;
use rand::Rng;

/// Nets as sorted vectors of `(rank, pin)`, with `pin = 0` for every
/// two-terminal slot, after relabeling devices by `perm`.
pub fn erased_nets(t: &Topology, perm: &[usize]) -> Vec<Vec<(usize, u8)>> {
    let mut nets: Vec<Vec<(usize, u8)>> = t
        .edges()
        .iter()
        .map(|e| {
            let mut net: Vec<(usize, u8)> = e
                .members()
                .iter()
                .map(|m| match m.vertex {
                    Vertex::Port(_) => (m.vertex.rank(), 0),
                    Vertex::Device { id, .. } => {
                        let pin = match m.slot {
                            Slot::One | Slot::Two => 0,
                            Slot::D => 1,
                            Slot::G => 2,
                            Slot::S => 3,
                            Slot::B => 4,
                        };
                        (3 + perm[id], pin)
                    }
                })
                .collect();
            net.sort_unstable();
            net
        })
        .collect();
    nets.sort_unstable();
    nets
}

fn permutations_into(kinds_a: &[DeviceKind], kinds_b: &[DeviceKind], prefix: &mut Vec<usize>, used: &mut Vec<bool>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    let i = prefix.len();
    if i == kinds_a.len() {
        return f(prefix);
    }
    for j in 0..kinds_b.len() {
        if used[j] || kinds_b[j] != kinds_a[i] {
            continue;
        }
        used[j] = true;
        prefix.push(j);
        let stop = permutations_into(kinds_a, kinds_b, prefix, used, f);
        prefix.pop();
        used[j] = false;
        if stop {
            return true;
        }
    }
    false
}

/// Brute-force isomorphism: searches every kind-preserving bijection.
pub fn oracle_isomorphic(a: &Topology, b: &Topology) -> bool {
    let (ka, kb) = (a.device_kinds(), b.device_kinds());
    if ka.len() != kb.len() || a.edges().len() != b.edges().len() {
        return false;
    }
    let target = erased_nets(b, &(0..kb.len()).collect::<Vec<_>>());
    let mut prefix = Vec::new();
    let mut used = vec![false; kb.len()];
    permutations_into(&ka, &kb, &mut prefix, &mut used, &mut |perm| erased_nets(a, perm) == target)
}

pub fn terminals(kinds: &[DeviceKind]) -> Vec<Terminal> {
    full_order(kinds)
        .into_iter()
        .flat_map(|v| v.slots().iter().map(move |&s| Terminal::new(v, s)))
        .collect()
}

/// Calls `f` with every restricted-growth string of length `n`, i.e. every
/// set partition of `0..n`.
pub fn for_each_partition(n: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(a: &mut Vec<usize>, max: usize, n: usize, f: &mut dyn FnMut(&[usize])) {
        if a.len() == n {
            f(a);
            return;
        }
        for b in 0..=max + 1 {
            a.push(b);
            go(a, max.max(b), n, f);
            a.pop();
        }
    }
    if n == 0 {
        f(&[]);
        return;
    }
    let mut a = vec![0];
    go(&mut a, 0, n, f);
}

/// Every valid topology over the given device kinds.
pub fn all_valid_topologies(kinds: &[DeviceKind]) -> Vec<Topology> {
    let ts = terminals(kinds);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for_each_partition(ts.len(), &mut |blocks| {
        let count = blocks.iter().max().map_or(0, |m| m + 1);
        let mut nets = vec![Vec::new(); count];
        for (t, &b) in ts.iter().zip(blocks) {
            nets[b].push(*t);
        }
        let topo = Topology::new(full_order(kinds), nets).unwrap();
        if validate_structure(&topo).is_valid() && seen.insert(topo.clone()) {
            out.push(topo);
        }
    });
    out
}

/// Sorted kind multisets of size `n` over the two-terminal kinds.
pub fn kind_multisets(n: usize) -> Vec<Vec<DeviceKind>> {
    fn go(start: usize, left: usize, cur: &mut Vec<DeviceKind>, out: &mut Vec<Vec<DeviceKind>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..4 {
            cur.push(DeviceKind::TWO_TERMINAL[i]);
            go(i, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

/// A valid wiring of exactly `kinds`, drawn by shuffling terminals into
/// random blocks until the result is valid.
pub fn random_wiring<R: Rng>(rng: &mut R, kinds: &[DeviceKind]) -> Topology {
    let mut ts = terminals(kinds);
    loop {
        ts.shuffle(rng);
        let nets = rng.random_range(2..=ts.len() / 2);
        let mut cuts: Vec<usize> = (1..ts.len()).collect();
        cuts.shuffle(rng);
        let mut cuts: Vec<usize> = cuts.into_iter().take(nets - 1).collect();
        cuts.sort_unstable();
        let mut edges = Vec::new();
        let mut prev = 0;
        for c in cuts.into_iter().chain([ts.len()]) {
            edges.push(ts[prev..c].to_vec());
            prev = c;
        }
        let t = Topology::new(full_order(kinds), edges).unwrap();
        if validate_structure(&t).is_valid() {
            return t;
        }
    }
}

/// Moves one terminal into another net, retrying until the result is valid.
pub fn rewire<R: Rng>(rng: &mut R, t: &Topology) -> Topology {
    loop {
        let mut nets: Vec<Vec<Terminal>> = t.edges().iter().map(|e| e.members().to_vec()).collect();
        let from = rng.random_range(0..nets.len());
        let to = rng.random_range(0..nets.len());
        if from == to || nets[from].is_empty() {
            continue;
        }
        let i = rng.random_range(0..nets[from].len());
        let m = nets[from].remove(i);
        let j = rng.random_range(0..nets[to].len());
        let n = nets[to].remove(j);
        nets[from].push(n);
        nets[to].push(m);
        let r = Topology::new(t.vertex_order().to_vec(), nets).unwrap();
        if validate_structure(&r).is_valid() {
            return r;
        }
    }
}

/// SFCI output length by direct count: duty token, one token per port
/// member, kind plus identifier per device member, a pin token per
/// transistor member, and separators between nets.
pub fn sfci_length(t: &Topology) -> usize {
    let members: usize = t
        .edges()
        .iter()
        .flat_map(|e| e.members())
        .map(|m| match m.vertex {
            Vertex::Port(_) => 1,
            Vertex::Device { kind, .. } if kind.is_transistor() => 3,
            Vertex::Device { .. } => 2,
        })
        .sum();
    1 + members + t.edges().len() - 1
}
