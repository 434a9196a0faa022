use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use amforge_core::dataset::{
    corpus_stats, mock_generate, random_design, random_spec, read_circuits, read_jsonl, write_circuits, write_jsonl,
    CorpusStats, DatasetRecord, LengthStats, PerformanceProvider, PerformanceTable, SampleConfig, TopologySampler,
};
use amforge_core::metrics::{read_results, write_results};
use amforge_core::{
    canonical_key, decode, encode, mse, sweep, validate_structure, CircuitDesign, DutyCycle, FormulationId, Spec,
};
use anyhow::{Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cli::{CanonArgs, DecodeArgs, EncodeArgs, EvalArgs, InputArgs, MockArgs, RoundtripArgs, SampleArgs, StatsArgs};
use crate::io::{looks_like_dataset, open_input, open_output, read_to_string};

/// How a command that ran to completion judged its input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Clean,
    DataFailures,
}

impl Verdict {
    fn from_failures(n: usize) -> Self {
        if n == 0 {
            Verdict::Clean
        } else {
            Verdict::DataFailures
        }
    }
}

pub fn sample(args: &SampleArgs) -> Result<Verdict> {
    let cfg = SampleConfig {
        device_counts: args.devices.0.clone(),
        kind_weights: args.weights.0,
        count: args.count,
        seed: args.seed,
    };
    let mut topologies = Vec::with_capacity(cfg.count);
    for t in TopologySampler::new(cfg)? {
        topologies.push(t?);
    }
    // Duties and specs come from a second stream so the topology sequence
    // does not depend on --with-spec.
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed ^ 0x5eed_d0d0);
    let items: Vec<(CircuitDesign, Option<Spec>)> = topologies
        .into_iter()
        .map(|t| {
            let duty = DutyCycle::ALL[rand::Rng::random_range(&mut rng, 0..DutyCycle::ALL.len())];
            let spec = args.with_spec.then(|| random_spec(&mut rng));
            (CircuitDesign::new(t, duty), spec)
        })
        .collect();
    write_circuits(open_output(&args.out)?, items.iter().map(|(d, s)| (d, s.as_ref())))?;
    eprintln!("sampled {} designs", items.len());
    Ok(Verdict::Clean)
}

fn load_table(path: Option<&Path>) -> Result<Option<PerformanceTable>> {
    path.map(|p| {
        PerformanceTable::from_csv(open_input(p)?).with_context(|| format!("reading {}", p.display()))
    })
    .transpose()
}

pub fn encode_cmd(args: &EncodeArgs) -> Result<Verdict> {
    let circuits = read_circuits(open_input(&args.input)?)?;
    let table = load_table(args.perf.as_deref())?;
    let mut placeholders = 0usize;
    let placeholder = Spec::new(0.0, 0.0).expect("in range");
    let mut items = Vec::with_capacity(circuits.len());
    for (design, spec) in circuits {
        let spec = match (spec, &table) {
            (Some(s), _) => s,
            (None, Some(t)) => match t.performance(&design) {
                Ok((ratio, eff)) => Spec::new(ratio, eff)?,
                Err(_) => {
                    placeholders += 1;
                    placeholder
                }
            },
            (None, None) => {
                placeholders += 1;
                placeholder
            }
        };
        items.push((design, spec));
    }
    if placeholders > 0 {
        eprintln!("warning: {placeholders} design(s) have no spec; using ratio 0, eff 0");
    }
    let f = args.formulation;
    let encoded: Vec<(usize, Result<DatasetRecord, String>)> = items
        .into_par_iter()
        .enumerate()
        .map(|(i, (design, spec))| {
            let rec = encode(f, &design, &spec)
                .map(|pair| DatasetRecord {
                    id: i as u64,
                    pair,
                    design,
                    spec,
                })
                .map_err(|e| e.to_string());
            (i, rec)
        })
        .collect();
    let mut records = Vec::with_capacity(encoded.len());
    let mut failures = 0;
    for (i, rec) in encoded {
        match rec {
            Ok(r) => records.push(r),
            Err(e) => {
                failures += 1;
                eprintln!("design {}: {e}", i + 1);
            }
        }
    }
    write_jsonl(open_output(&args.out)?, &records)?;
    eprintln!("encoded {} of {} designs as {}", records.len(), records.len() + failures, f);
    Ok(Verdict::from_failures(failures))
}

pub fn decode_cmd(args: &DecodeArgs) -> Result<Verdict> {
    let records = read_jsonl(open_input(&args.input)?)?;
    if let (Some(expected), Some(first)) = (args.formulation, records.first()) {
        anyhow::ensure!(
            first.formulation() == expected,
            "dataset holds {}, expected {expected}",
            first.formulation()
        );
    }
    let decoded: Vec<Result<CircuitDesign, String>> = records
        .par_iter()
        .map(|r| {
            let d = decode(r.formulation(), &r.pair.input, &r.pair.output).map_err(|e| format!("{} ({})", e, e.class()))?;
            if d != r.design {
                return Err("decoded design differs from the recorded circuit".into());
            }
            Ok(d)
        })
        .collect();
    let mut out = Vec::with_capacity(decoded.len());
    let mut failures = 0;
    for (r, d) in records.iter().zip(decoded) {
        match d {
            Ok(d) => out.push((d, r.spec)),
            Err(e) => {
                failures += 1;
                eprintln!("record {}: {e}", r.id);
            }
        }
    }
    write_circuits(open_output(&args.out)?, out.iter().map(|(d, s)| (d, Some(s))))?;
    eprintln!("decoded {} of {} records", out.len(), records.len());
    Ok(Verdict::from_failures(failures))
}

pub fn validate(args: &InputArgs) -> Result<Verdict> {
    let circuits = read_circuits(open_input(&args.input)?)?;
    let mut invalid = 0;
    for (i, (design, _)) in circuits.iter().enumerate() {
        let report = validate_structure(&design.topology);
        if !report.is_valid() {
            invalid += 1;
            let reasons: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
            println!("design {}: invalid: {}", i + 1, reasons.join("; "));
        }
    }
    println!("{}/{} valid", circuits.len() - invalid, circuits.len());
    Ok(Verdict::from_failures(invalid))
}

pub fn canon(args: &CanonArgs) -> Result<Verdict> {
    let circuits = read_circuits(open_input(&args.input)?)?;
    let keys: Vec<String> = circuits
        .par_iter()
        .map(|(d, _)| canonical_key(&d.topology).map(|k| k.digest_hex()))
        .collect::<Result<_, _>>()?;
    let mut out = open_output(Path::new("-"))?;
    if args.dedup {
        let mut order: Vec<&str> = Vec::new();
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for k in &keys {
            let c = counts.entry(k).or_default();
            if *c == 0 {
                order.push(k);
            }
            *c += 1;
        }
        for k in order {
            writeln!(out, "{k}\t{}", counts[k])?;
        }
    } else {
        for k in &keys {
            writeln!(out, "{k}")?;
        }
    }
    out.flush()?;
    Ok(Verdict::Clean)
}

pub fn stats(args: &StatsArgs) -> Result<Verdict> {
    let text = read_to_string(&args.input)?;
    let records = if looks_like_dataset(&text) {
        read_jsonl(text.as_bytes())?
    } else {
        let circuits = read_circuits(text.as_bytes())?;
        let formulations = if args.formulation.is_empty() {
            FormulationId::ALL.to_vec()
        } else {
            args.formulation.clone()
        };
        // Designs a formulation cannot express are skipped for it.
        let jobs: Vec<(FormulationId, usize)> = formulations
            .iter()
            .flat_map(|&f| (0..circuits.len()).map(move |i| (f, i)))
            .collect();
        let placeholder = Spec::new(0.0, 0.0).expect("in range");
        jobs.par_iter()
            .filter_map(|&(f, i)| {
                let (design, spec) = &circuits[i];
                encode(f, design, &spec.unwrap_or(placeholder)).ok().map(|pair| DatasetRecord {
                    id: i as u64,
                    pair,
                    design: design.clone(),
                    spec: spec.unwrap_or(placeholder),
                })
            })
            .collect()
    };
    print_stats(&corpus_stats(&records)?)?;
    Ok(Verdict::Clean)
}

fn print_stats(stats: &CorpusStats) -> Result<()> {
    let mut out = open_output(Path::new("-"))?;
    let row = |out: &mut dyn Write, scope: &str, f: FormulationId, s: &LengthStats| {
        writeln!(
            out,
            "{scope}\t{f}\t{}\t{:.2}\t{}\t{}\t{:.2}\t{}\t{}",
            s.records, s.input_mean, s.input_min, s.input_max, s.output_mean, s.output_min, s.output_max
        )
    };
    writeln!(out, "scope\tformulation\trecords\tin_mean\tin_min\tin_max\tout_mean\tout_min\tout_max")?;
    for (f, s) in &stats.by_formulation {
        row(&mut out, "all", *f, s)?;
    }
    for (size, by_f) in &stats.by_size {
        for (f, s) in by_f {
            row(&mut out, &format!("n={size}"), *f, s)?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn eval(args: &EvalArgs) -> Result<Verdict> {
    let records = read_results(open_input(&args.results)?)?;
    let rates = sweep(&records, &args.tolerances)?;
    let (mse_ratio, mse_eff) = mse(&records)?;
    let invalid = records.iter().filter(|r| r.outcome.is_invalid()).count();
    let mut out = open_output(Path::new("-"))?;
    writeln!(out, "tolerance\tsuccess_rate")?;
    for (t, rate) in rates {
        writeln!(out, "{t:.4}\t{rate:.6}")?;
    }
    writeln!(out, "mse_ratio\t{mse_ratio:.6}")?;
    writeln!(out, "mse_eff\t{mse_eff:.6}")?;
    out.flush()?;
    eprintln!("{} results, {invalid} invalid", records.len());
    Ok(Verdict::Clean)
}

pub fn roundtrip(args: &RoundtripArgs) -> Result<Verdict> {
    let f = args.formulation;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let counts = &args.devices.0;
    let designs: Vec<(CircuitDesign, Spec)> = (0..args.count)
        .map(|_| {
            let n = counts[rand::Rng::random_range(&mut rng, 0..counts.len())];
            (random_design(&mut rng, n), random_spec(&mut rng))
        })
        .collect();
    let failures: Vec<(usize, String)> = designs
        .par_iter()
        .enumerate()
        .filter_map(|(i, (design, spec))| {
            let result = encode(f, design, spec)
                .map_err(|e| e.to_string())
                .and_then(|pair| decode(f, &pair.input, &pair.output).map_err(|e| e.to_string()))
                .and_then(|d| if &d == design { Ok(()) } else { Err("decoded design differs".into()) });
            result.err().map(|e| (i, e))
        })
        .collect();
    for (i, e) in &failures {
        eprintln!("design {}: {e}", i + 1);
    }
    println!("{}/{} round-trips exact", args.count - failures.len(), args.count);
    Ok(Verdict::from_failures(failures.len()))
}

pub fn mock(args: &MockArgs) -> Result<Verdict> {
    let records = read_jsonl(open_input(&args.input)?)?;
    let table = match load_table(args.perf.as_deref())? {
        Some(t) => t,
        None => PerformanceTable::from_records(&records)?,
    };
    let results = mock_generate(&records, args.mode, &table, args.seed)?;
    write_results(open_output(&args.out)?, &results)?;
    let invalid = results.iter().filter(|r| r.outcome.is_invalid()).count();
    eprintln!("scored {} generations, {invalid} invalid", results.len());
    Ok(Verdict::Clean)
}
