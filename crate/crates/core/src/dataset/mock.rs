//! Deterministic stand-ins for a trained generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DatasetError, DatasetRecord, PerformanceProvider};
use crate::formulations::{decode, Element};
use crate::metrics::{EvalRecord, Outcome};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MockMode {
    /// Emit the ground-truth output.
    Echo,
    /// Ground truth, with each measured value shifted by `±ε`.
    Perturb(f64),
    /// Corrupt the output with probability `p`.
    Corrupt(f64),
}

/// Inserts a token outside every vocabulary at a random position, which
/// guarantees a decode failure.
pub fn corrupt_output<R: Rng + ?Sized>(output: &[Element], rng: &mut R) -> Vec<Element> {
    let mut out = output.to_vec();
    out.insert(rng.random_range(0..=out.len()), Element::token("<unk>"));
    out
}

/// Runs `mode` over `records` and scores each generation against the
/// record's spec.
pub fn mock_generate(
    records: &[DatasetRecord],
    mode: MockMode,
    provider: &dyn PerformanceProvider,
    seed: u64,
) -> Result<Vec<EvalRecord>, DatasetError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    records
        .iter()
        .map(|r| {
            let output = match mode {
                MockMode::Corrupt(p) if rng.random_bool(p.clamp(0.0, 1.0)) => corrupt_output(&r.pair.output, &mut rng),
                _ => r.pair.output.clone(),
            };
            let outcome = match decode(r.pair.formulation, &r.pair.input, &output) {
                Err(_) => Outcome::Invalid,
                Ok(design) => {
                    let (mut ratio, mut eff) = provider.performance(&design)?;
                    if let MockMode::Perturb(eps) = mode {
                        ratio += if rng.random_bool(0.5) { eps } else { -eps };
                        eff += if rng.random_bool(0.5) { eps } else { -eps };
                    }
                    Outcome::Measured {
                        voltage_ratio: ratio,
                        efficiency: eff,
                    }
                }
            };
            Ok(EvalRecord::new(r.spec, outcome))
        })
        .collect()
}
