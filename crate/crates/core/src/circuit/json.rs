//! Circuit JSON: `{"vertices": [...], "edges": [[[kind, id, slot], ...], ...], "duty": x}`.
//!
//! Ports are written with identifier `0` and slot `1`; transistor pins use
//! their letter as the slot.

use serde_json::{json, Map, Value};

use super::{CircuitDesign, CircuitError, DeviceKind, DutyCycle, PortKind, Slot, Terminal, Topology, Vertex};

pub fn parse_circuit_json(text: &str) -> Result<CircuitDesign, CircuitError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CircuitError::Json(e.to_string()))?;
    design_from_value(&value)
}

pub fn serialize_circuit_json(design: &CircuitDesign) -> String {
    design_to_value(design).to_string()
}

pub fn design_to_value(design: &CircuitDesign) -> Value {
    let t = &design.topology;
    let vertices: Vec<&str> = t
        .vertex_order()
        .iter()
        .map(|v| match v {
            Vertex::Port(p) => p.name(),
            Vertex::Device { kind, .. } => kind.name(),
        })
        .collect();
    let edges: Vec<Value> = t
        .edges()
        .iter()
        .map(|e| Value::Array(e.members().iter().map(terminal_to_value).collect()))
        .collect();
    json!({
        "vertices": vertices,
        "edges": edges,
        "duty": design.duty.value(),
    })
}

fn terminal_to_value(t: &Terminal) -> Value {
    match t.vertex {
        Vertex::Port(p) => json!([p.name(), 0, 1]),
        Vertex::Device { id, kind } => {
            let slot = match t.slot {
                Slot::One => json!(1),
                Slot::Two => json!(2),
                pin => json!(pin.label()),
            };
            json!([kind.name(), id, slot])
        }
    }
}

pub fn design_from_value(value: &Value) -> Result<CircuitDesign, CircuitError> {
    let obj = value
        .as_object()
        .ok_or_else(|| CircuitError::Schema("expected a JSON object".into()))?;
    if let Some(extra) = obj
        .keys()
        .find(|k| !matches!(k.as_str(), "vertices" | "edges" | "duty"))
    {
        return Err(CircuitError::Schema(format!("unexpected key `{extra}`")));
    }
    let order = parse_vertices(field(obj, "vertices")?)?;
    let edges = parse_edges(field(obj, "edges")?)?;
    let duty = parse_duty(field(obj, "duty")?).map_err(|e| e.at("duty"))?;
    let topology = Topology::new(order, edges)?;
    Ok(CircuitDesign::new(topology, duty))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, CircuitError> {
    obj.get(key)
        .ok_or_else(|| CircuitError::Schema(format!("missing key `{key}`")))
}

fn parse_vertices(value: &Value) -> Result<Vec<Vertex>, CircuitError> {
    let items = value
        .as_array()
        .ok_or_else(|| CircuitError::Schema("expected an array".into()).at("vertices"))?;
    let mut order = Vec::with_capacity(items.len());
    let mut next_id = 0;
    for (i, item) in items.iter().enumerate() {
        let at = |e: CircuitError| e.at(format!("vertices[{i}]"));
        let name = item
            .as_str()
            .ok_or_else(|| at(CircuitError::Schema("expected a kind name".into())))?;
        if let Some(p) = PortKind::from_name(name) {
            order.push(Vertex::Port(p));
        } else if let Some(k) = DeviceKind::from_name(name) {
            order.push(Vertex::device(k, next_id));
            next_id += 1;
        } else {
            return Err(at(CircuitError::UnknownKind(name.to_string())));
        }
    }
    Ok(order)
}

fn parse_edges(value: &Value) -> Result<Vec<Vec<Terminal>>, CircuitError> {
    let edges = value
        .as_array()
        .ok_or_else(|| CircuitError::Schema("expected an array".into()).at("edges"))?;
    edges
        .iter()
        .enumerate()
        .map(|(i, edge)| {
            let members = edge.as_array().ok_or_else(|| {
                CircuitError::Schema("expected an array of terminals".into()).at(format!("edges[{i}]"))
            })?;
            members
                .iter()
                .enumerate()
                .map(|(j, m)| parse_terminal(m).map_err(|e| e.at(format!("edges[{i}][{j}]"))))
                .collect()
        })
        .collect()
}

fn parse_terminal(value: &Value) -> Result<Terminal, CircuitError> {
    let schema = || CircuitError::Schema("terminal must be [kind, identifier, slot]".into());
    let parts = value.as_array().filter(|a| a.len() == 3).ok_or_else(schema)?;
    let name = parts[0].as_str().ok_or_else(schema)?;
    let id = parts[1].as_u64().ok_or_else(schema)? as usize;
    let slot = match &parts[2] {
        Value::Number(n) => n.as_u64().map(|n| n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
    .ok_or_else(schema)?;

    if let Some(p) = PortKind::from_name(name) {
        if id != 0 || slot != "1" {
            return Err(CircuitError::Schema(format!(
                "port {p} must be written as [\"{p}\", 0, 1]"
            )));
        }
        return Ok(Terminal::port(p));
    }
    let kind = DeviceKind::from_name(name).ok_or_else(|| CircuitError::UnknownKind(name.to_string()))?;
    let vertex = Vertex::device(kind, id);
    let slot = Slot::from_label(&slot)
        .filter(|s| kind.slots().contains(s))
        .ok_or(CircuitError::InvalidSlot { vertex, slot })?;
    Ok(Terminal::new(vertex, slot))
}

fn parse_duty(value: &Value) -> Result<DutyCycle, CircuitError> {
    let x = value
        .as_f64()
        .ok_or_else(|| CircuitError::Schema("duty must be a number".into()))?;
    DutyCycle::from_value(x).ok_or(CircuitError::InvalidDuty(x))
}
