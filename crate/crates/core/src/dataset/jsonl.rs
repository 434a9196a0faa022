//! JSONL corpora: one encoded design per line.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde_json::{json, Map, Value};

use super::DatasetError;
use crate::circuit::{design_from_value, design_to_value, CircuitDesign, Spec};
use crate::formulations::{encode, Element, FormulationId, SequencePair};

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetRecord {
    pub id: u64,
    pub pair: SequencePair,
    pub design: CircuitDesign,
    pub spec: Spec,
}

impl DatasetRecord {
    pub fn formulation(&self) -> FormulationId {
        self.pair.formulation
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "formulation": self.pair.formulation.name(),
            "input": elements_to_json(&self.pair.input),
            "output": elements_to_json(&self.pair.output),
            "circuit": design_to_value(&self.design),
            "spec": spec_to_json(&self.spec),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self, String> {
        let obj = value.as_object().ok_or("expected a JSON object")?;
        if let Some(k) = obj
            .keys()
            .find(|k| !matches!(k.as_str(), "id" | "formulation" | "input" | "output" | "circuit" | "spec"))
        {
            return Err(format!("unexpected key `{k}`"));
        }
        let field = |k: &str| obj.get(k).ok_or_else(|| format!("missing key `{k}`"));
        let id = field("id")?.as_u64().ok_or("`id` must be a non-negative integer")?;
        let formulation: FormulationId = field("formulation")?
            .as_str()
            .ok_or("`formulation` must be a string")?
            .parse()?;
        let input = elements_from_json(field("input")?).map_err(|e| format!("input: {e}"))?;
        let output = elements_from_json(field("output")?).map_err(|e| format!("output: {e}"))?;
        let pair = SequencePair::new(formulation, input, output).map_err(|e| e.to_string())?;
        let design = design_from_value(field("circuit")?).map_err(|e| format!("circuit: {e}"))?;
        let spec = spec_from_json(field("spec")?)?;
        Ok(Self { id, pair, design, spec })
    }
}

fn elements_to_json(elems: &[Element]) -> Value {
    Value::Array(
        elems
            .iter()
            .map(|e| match e {
                Element::Token(t) => json!({ "t": t }),
                Element::Scalar(x) => json!({ "f": x }),
            })
            .collect(),
    )
}

fn elements_from_json(value: &Value) -> Result<Vec<Element>, String> {
    let items = value.as_array().ok_or("expected an array")?;
    items
        .iter()
        .enumerate()
        .map(|(i, item)| {
            let obj = item.as_object().filter(|o| o.len() == 1);
            match obj.and_then(|o| o.iter().next()) {
                Some((k, Value::String(t))) if k == "t" => Ok(Element::Token(t.clone())),
                Some((k, v)) if k == "f" => v
                    .as_f64()
                    .map(Element::Scalar)
                    .ok_or_else(|| format!("element {i}: `f` must be a number")),
                _ => Err(format!("element {i}: expected {{\"t\": token}} or {{\"f\": number}}")),
            }
        })
        .collect()
}

pub(crate) fn spec_to_json(spec: &Spec) -> Value {
    json!({"ratio": spec.voltage_ratio(), "eff": spec.efficiency()})
}

pub(crate) fn spec_from_json(value: &Value) -> Result<Spec, String> {
    let get = |k: &str| {
        value
            .get(k)
            .and_then(Value::as_f64)
            .ok_or_else(|| format!("spec.{k} must be a number"))
    };
    Spec::new(get("ratio")?, get("eff")?).map_err(|e| e.to_string())
}

/// Encodes designs in `f`, numbering records from 0.
pub fn build_records(
    items: impl IntoIterator<Item = (CircuitDesign, Spec)>,
    f: FormulationId,
) -> Result<Vec<DatasetRecord>, DatasetError> {
    items
        .into_iter()
        .enumerate()
        .map(|(i, (design, spec))| {
            let pair = encode(f, &design, &spec)?;
            Ok(DatasetRecord {
                id: i as u64,
                pair,
                design,
                spec,
            })
        })
        .collect()
}

pub fn write_jsonl(mut writer: impl Write, records: &[DatasetRecord]) -> Result<(), DatasetError> {
    for r in records {
        writeln!(writer, "{}", r.to_json())?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads records, requiring a single formulation across the file.
pub fn read_jsonl(reader: impl BufRead) -> Result<Vec<DatasetRecord>, DatasetError> {
    let mut records: Vec<DatasetRecord> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let at = |message: String| DatasetError::Line { line: i + 1, message };
        let value: Value = serde_json::from_str(&line).map_err(|e| at(e.to_string()))?;
        let record = DatasetRecord::from_json(&value).map_err(at)?;
        if let Some(first) = records.first() {
            if first.formulation() != record.formulation() {
                return Err(DatasetError::FormulationMismatch {
                    line: i + 1,
                    expected: first.formulation(),
                    found: record.formulation(),
                });
            }
        }
        records.push(record);
    }
    Ok(records)
}

pub fn export_jsonl(path: impl AsRef<Path>, records: &[DatasetRecord]) -> Result<(), DatasetError> {
    write_jsonl(BufWriter::new(File::create(path)?), records)
}

pub fn import_jsonl(path: impl AsRef<Path>) -> Result<Vec<DatasetRecord>, DatasetError> {
    read_jsonl(BufReader::new(File::open(path)?))
}

/// Reads circuit JSON lines. Each line may carry an optional `"spec"`.
pub fn read_circuits(reader: impl BufRead) -> Result<Vec<(CircuitDesign, Option<Spec>)>, DatasetError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let at = |message: String| DatasetError::Line { line: i + 1, message };
        let mut value: Map<String, Value> = serde_json::from_str(&line).map_err(|e| at(e.to_string()))?;
        let spec = value
            .remove("spec")
            .map(|v| spec_from_json(&v))
            .transpose()
            .map_err(at)?;
        let design = design_from_value(&Value::Object(value)).map_err(|e| at(e.to_string()))?;
        out.push((design, spec));
    }
    Ok(out)
}

pub fn write_circuits<'a>(
    mut writer: impl Write,
    items: impl IntoIterator<Item = (&'a CircuitDesign, Option<&'a Spec>)>,
) -> Result<(), DatasetError> {
    for (design, spec) in items {
        let mut value = design_to_value(design);
        if let (Some(spec), Value::Object(obj)) = (spec, &mut value) {
            obj.insert("spec".into(), spec_to_json(spec));
        }
        writeln!(writer, "{value}")?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::DutyCycle;
    use crate::fixtures;

    fn buck_record(f: FormulationId) -> DatasetRecord {
        let d = CircuitDesign::new(fixtures::buck(), DutyCycle::D05);
        build_records([(d, Spec::new(0.65, 0.95544).unwrap())], f).unwrap().remove(0)
    }

    #[test]
    fn record_round_trip() {
        for f in FormulationId::ALL {
            let r = buck_record(f);
            let mut buf = Vec::new();
            write_jsonl(&mut buf, std::slice::from_ref(&r)).unwrap();
            assert_eq!(read_jsonl(buf.as_slice()).unwrap(), vec![r]);
        }
    }

    #[test]
    fn layout() {
        let text = buck_record(FormulationId::Sfci).to_json().to_string();
        assert!(text.starts_with(r#"{"id":0,"formulation":"sfci","input":[{"f":0.1},"#), "{text}");
        assert!(text.contains(r#""spec":{"ratio":0.65,"eff":0.95544}"#));
    }

    #[test]
    fn scalar_in_output_rejected() {
        let mut v = buck_record(FormulationId::Sfm).to_json();
        v["output"].as_array_mut().unwrap().push(json!({"f": 0.5}));
        let err = read_jsonl(format!("{v}\n").as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
        assert!(err.to_string().contains("scalar"), "{err}");
    }

    #[test]
    fn mixed_formulations_rejected() {
        let a = buck_record(FormulationId::Sfci).to_json();
        let b = buck_record(FormulationId::Sfm).to_json();
        let err = read_jsonl(format!("{a}\n{b}\n").as_bytes()).unwrap_err();
        assert!(err.to_string().contains("formulation mismatch"), "{err}");
        assert!(matches!(err, DatasetError::FormulationMismatch { line: 2, .. }));
    }

    #[test]
    fn circuits_with_optional_spec() {
        let d = CircuitDesign::new(fixtures::boost(), DutyCycle::D07);
        let s = Spec::new(2.1, 0.8).unwrap();
        let mut buf = Vec::new();
        write_circuits(&mut buf, [(&d, Some(&s)), (&d, None)]).unwrap();
        let back = read_circuits(buf.as_slice()).unwrap();
        assert_eq!(back, vec![(d.clone(), Some(s)), (d, None)]);
    }
}
