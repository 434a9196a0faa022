//! Token-length statistics over a corpus.

use std::collections::BTreeMap;

use super::{DatasetError, DatasetRecord};
use crate::formulations::{token_length, FormulationId};

#[derive(Debug, Clone, PartialEq)]
pub struct LengthStats {
    pub records: usize,
    pub input_mean: f64,
    pub input_min: usize,
    pub input_max: usize,
    pub output_mean: f64,
    pub output_min: usize,
    pub output_max: usize,
}

impl LengthStats {
    fn from_lengths(lengths: &[(usize, usize)]) -> Self {
        let n = lengths.len();
        let (ins, outs): (Vec<usize>, Vec<usize>) = lengths.iter().copied().unzip();
        // Integer sums keep the means exact up to the final division.
        let mean = |xs: &[usize]| xs.iter().sum::<usize>() as f64 / n as f64;
        Self {
            records: n,
            input_mean: mean(&ins),
            input_min: *ins.iter().min().unwrap(),
            input_max: *ins.iter().max().unwrap(),
            output_mean: mean(&outs),
            output_min: *outs.iter().min().unwrap(),
            output_max: *outs.iter().max().unwrap(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusStats {
    pub by_formulation: BTreeMap<FormulationId, LengthStats>,
    /// Keyed by device count.
    pub by_size: BTreeMap<usize, BTreeMap<FormulationId, LengthStats>>,
    /// Record count per device count.
    pub size_histogram: BTreeMap<usize, usize>,
}

pub fn corpus_stats(records: &[DatasetRecord]) -> Result<CorpusStats, DatasetError> {
    if records.is_empty() {
        return Err(DatasetError::Empty);
    }
    let mut all: BTreeMap<FormulationId, Vec<(usize, usize)>> = BTreeMap::new();
    let mut sized: BTreeMap<usize, BTreeMap<FormulationId, Vec<(usize, usize)>>> = BTreeMap::new();
    let mut size_histogram = BTreeMap::new();
    for r in records {
        let len = token_length(&r.pair);
        let size = r.design.topology.device_count();
        all.entry(r.formulation()).or_default().push(len);
        sized.entry(size).or_default().entry(r.formulation()).or_default().push(len);
        *size_histogram.entry(size).or_default() += 1;
    }
    let summarize = |m: BTreeMap<FormulationId, Vec<(usize, usize)>>| {
        m.into_iter()
            .map(|(f, lens)| (f, LengthStats::from_lengths(&lens)))
            .collect()
    };
    Ok(CorpusStats {
        by_formulation: summarize(all),
        by_size: sized.into_iter().map(|(s, m)| (s, summarize(m))).collect(),
        size_histogram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{CircuitDesign, DutyCycle, Spec};
    use crate::dataset::build_records;
    use crate::fixtures;

    #[test]
    fn single_buck() {
        let d = CircuitDesign::new(fixtures::buck(), DutyCycle::D05);
        let records = build_records([(d, Spec::new(0.65, 0.95544).unwrap())], FormulationId::Sfci).unwrap();
        let stats = corpus_stats(&records).unwrap();
        let s = &stats.by_formulation[&FormulationId::Sfci];
        assert_eq!(s.output_mean, 19.0);
        assert_eq!(s.input_mean, 16.0);
        assert_eq!(stats.size_histogram[&3], 1);
        assert!(corpus_stats(&[]).is_err());
    }
}
