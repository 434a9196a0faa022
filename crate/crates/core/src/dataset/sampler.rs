use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::DatasetError;
use crate::canon::{DedupIndex, MAX_DEVICES};
use crate::circuit::{
    full_order, validate_structure, CircuitDesign, DeviceKind, DutyCycle, Spec, Terminal, Topology,
};

/// Draws allowed per requested topology before giving up.
pub const ATTEMPT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleConfig {
    pub device_counts: Vec<usize>,
    /// Weights over `Sa, Sb, C, L`.
    pub kind_weights: [f64; 4],
    pub count: usize,
    pub seed: u64,
}

impl SampleConfig {
    pub fn new(device_counts: Vec<usize>, count: usize, seed: u64) -> Self {
        Self {
            device_counts,
            kind_weights: [1.0; 4],
            count,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), DatasetError> {
        if self.count == 0 {
            return Err(DatasetError::Config("count must be at least 1".into()));
        }
        if self.device_counts.is_empty() {
            return Err(DatasetError::Config("no device counts".into()));
        }
        if let Some(n) = self.device_counts.iter().find(|&&n| n > MAX_DEVICES) {
            return Err(DatasetError::Config(format!(
                "{n} devices exceeds the supported maximum of {MAX_DEVICES}"
            )));
        }
        if self.kind_weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(DatasetError::Config("kind weights must be finite and non-negative".into()));
        }
        if self.kind_weights.iter().all(|&w| w == 0.0) {
            return Err(DatasetError::Config("kind weights are all zero".into()));
        }
        Ok(())
    }
}

/// Draws one random wiring of `devices` random devices. The result is
/// well-formed but not necessarily valid.
pub fn random_topology<R: Rng + ?Sized>(rng: &mut R, devices: usize, kind_weights: &[f64; 4]) -> Topology {
    let dist = WeightedIndex::new(kind_weights).expect("validated weights");
    let mut kinds: Vec<DeviceKind> = (0..devices)
        .map(|_| DeviceKind::TWO_TERMINAL[dist.sample(rng)])
        .collect();
    kinds.sort_unstable();
    let order = full_order(&kinds);
    let mut terminals: Vec<Terminal> = order
        .iter()
        .flat_map(|v| v.slots().iter().map(move |&s| Terminal::new(*v, s)))
        .collect();
    terminals.shuffle(rng);

    // Random composition into blocks of at least two terminals.
    let total = terminals.len();
    let max_nets = total / 2;
    let nets = if max_nets >= 2 { rng.random_range(2..=max_nets) } else { 1 };
    let mut sizes = vec![2; nets];
    for _ in 0..total - 2 * nets {
        sizes[rng.random_range(0..nets)] += 1;
    }
    let mut rest = terminals.as_slice();
    let mut edges = Vec::with_capacity(nets);
    for size in sizes {
        let (head, tail) = rest.split_at(size);
        edges.push(head.to_vec());
        rest = tail;
    }
    Topology::new(order, edges).expect("sampled terminals are well-formed")
}

/// Rejection-samples a valid topology with `devices` devices.
fn valid_topology<R: Rng + ?Sized>(
    rng: &mut R,
    devices: usize,
    kind_weights: &[f64; 4],
    budget: u64,
) -> Option<Topology> {
    (0..budget)
        .map(|_| random_topology(rng, devices, kind_weights))
        .find(|t| validate_structure(t).is_valid())
}

/// A valid design with uniform kinds and a uniformly chosen duty cycle.
pub fn random_design<R: Rng + ?Sized>(rng: &mut R, devices: usize) -> CircuitDesign {
    let t = valid_topology(rng, devices, &[1.0; 4], ATTEMPT_BUDGET).expect("valid topologies exist for every size");
    let duty = DutyCycle::ALL[rng.random_range(0..DutyCycle::ALL.len())];
    CircuitDesign::new(t, duty)
}

/// Ratio uniform in `[-2, 2]`, efficiency uniform in `[0, 1]`, both rounded
/// to five decimals.
pub fn random_spec<R: Rng + ?Sized>(rng: &mut R) -> Spec {
    let round = |x: f64| (x * 1e5).round() / 1e5;
    Spec::new(round(rng.random_range(-2.0..=2.0)), round(rng.random_range(0.0..=1.0))).expect("in range")
}

/// Stream of valid, pairwise non-isomorphic topologies.
pub struct TopologySampler {
    cfg: SampleConfig,
    rng: ChaCha8Rng,
    seen: DedupIndex,
    produced: usize,
}

impl TopologySampler {
    pub fn new(cfg: SampleConfig) -> Result<Self, DatasetError> {
        cfg.validate()?;
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Ok(Self {
            cfg,
            rng,
            seen: DedupIndex::new(),
            produced: 0,
        })
    }

    fn draw(&mut self) -> Result<Topology, DatasetError> {
        for _ in 0..ATTEMPT_BUDGET {
            let n = self.cfg.device_counts[self.rng.random_range(0..self.cfg.device_counts.len())];
            let t = random_topology(&mut self.rng, n, &self.cfg.kind_weights);
            if validate_structure(&t).is_valid() && self.seen.insert(&t)? {
                self.produced += 1;
                return Ok(t);
            }
        }
        Err(DatasetError::Exhausted {
            produced: self.produced,
            requested: self.cfg.count,
            attempts: ATTEMPT_BUDGET,
        })
    }
}

impl Iterator for TopologySampler {
    type Item = Result<Topology, DatasetError>;

    fn next(&mut self) -> Option<Self::Item> {
        (self.produced < self.cfg.count).then(|| self.draw())
    }
}

pub fn sample_topologies(cfg: &SampleConfig) -> Result<Vec<Topology>, DatasetError> {
    TopologySampler::new(cfg.clone())?.collect()
}
