//! Ground-truth performance keyed by `(canonical key, duty)`.

use std::collections::HashMap;
use std::io::{Read, Write};

use super::{DatasetError, DatasetRecord};
use crate::canon::canonical_key;
use crate::circuit::{CircuitDesign, DutyCycle};

/// Source of measured `(voltage_ratio, efficiency)` for a design.
pub trait PerformanceProvider {
    fn lookup(&self, key_hex: &str, duty: DutyCycle) -> Option<(f64, f64)>;

    fn performance(&self, design: &CircuitDesign) -> Result<(f64, f64), DatasetError> {
        let key = canonical_key(&design.topology)?.digest_hex();
        self.lookup(&key, design.duty)
            .ok_or(DatasetError::MissingPerformance { key, duty: design.duty })
    }
}

/// In-memory table, read from and written to `key,duty,ratio,eff` CSV.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PerformanceTable {
    rows: HashMap<(String, DutyCycle), (f64, f64)>,
}

impl PerformanceTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key_hex: impl Into<String>, duty: DutyCycle, ratio: f64, eff: f64) {
        self.rows.insert((key_hex.into(), duty), (ratio, eff));
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Uses each record's own spec as its measured performance.
    pub fn from_records(records: &[DatasetRecord]) -> Result<Self, DatasetError> {
        let mut table = Self::new();
        for r in records {
            let key = canonical_key(&r.design.topology)?.digest_hex();
            table.insert(key, r.design.duty, r.spec.voltage_ratio(), r.spec.efficiency());
        }
        Ok(table)
    }

    pub fn from_csv(reader: impl Read) -> Result<Self, DatasetError> {
        let mut rdr = csv::Reader::from_reader(reader);
        let headers = rdr.headers().map_err(|e| DatasetError::Csv(e.to_string()))?;
        if headers != vec!["key", "duty", "ratio", "eff"] {
            return Err(DatasetError::Csv("header must be key,duty,ratio,eff".into()));
        }
        let mut table = Self::new();
        for (i, row) in rdr.records().enumerate() {
            let line = i + 2;
            let row = row.map_err(|e| DatasetError::Csv(e.to_string()))?;
            let bad = |what: &str| DatasetError::Line {
                line,
                message: format!("bad {what}"),
            };
            let num = |j: usize, what: &str| row[j].trim().parse::<f64>().map_err(|_| bad(what));
            let duty = DutyCycle::from_value(num(1, "duty")?).ok_or_else(|| bad("duty"))?;
            table.insert(row[0].trim(), duty, num(2, "ratio")?, num(3, "eff")?);
        }
        Ok(table)
    }

    /// Rows sorted by key then duty.
    pub fn write_csv(&self, writer: impl Write) -> Result<(), DatasetError> {
        let mut w = csv::Writer::from_writer(writer);
        let csv_err = |e: csv::Error| DatasetError::Csv(e.to_string());
        w.write_record(["key", "duty", "ratio", "eff"]).map_err(csv_err)?;
        let mut rows: Vec<_> = self.rows.iter().collect();
        rows.sort_by(|a, b| a.0.cmp(b.0));
        for ((key, duty), (ratio, eff)) in rows {
            w.write_record([key.clone(), duty.to_string(), ratio.to_string(), eff.to_string()])
                .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

impl PerformanceProvider for PerformanceTable {
    fn lookup(&self, key_hex: &str, duty: DutyCycle) -> Option<(f64, f64)> {
        self.rows.get(&(key_hex.to_string(), duty)).copied()
    }
}
