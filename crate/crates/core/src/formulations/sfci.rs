//! SFCI and its two variants: sparse net lists with identifier tokens.

use super::assemble::{check_duty_options, port_tokens, read_ports, NetAssembler};
use super::cursor::{Cursor, Side};
use super::vocab::{
    self, duty_from_token, duty_token, id_from_token, kind_from_token, kind_token, pin_from_token, port_from_token,
    port_token, COMMA,
};
use super::{DecodeError, Element, FormulationId};
use crate::circuit::{CircuitDesign, CircuitError, DutyCycle, Spec, Vertex};

type Pair = (Vec<Element>, Vec<Element>);

pub(crate) fn encode(f: FormulationId, design: &CircuitDesign, spec: &Spec) -> Pair {
    let t = &design.topology;
    let mut input = Vec::new();
    if f != FormulationId::SfciNdp {
        input.extend(DutyCycle::ALL.map(|d| Element::Scalar(d.value())));
    }
    input.push(Element::Scalar(spec.voltage_ratio()));
    input.push(Element::Scalar(spec.efficiency()));
    input.extend(port_tokens());
    for (id, kind) in t.device_kinds().into_iter().enumerate() {
        input.push(Element::token(kind_token(kind)));
        input.push(Element::token(id.to_string()));
    }

    let mut output = vec![Element::token(duty_token(design.duty))];
    for (i, edge) in t.edges().iter().enumerate() {
        if i > 0 {
            output.push(Element::token(COMMA));
        }
        for m in edge.members() {
            match m.vertex {
                Vertex::Port(p) => output.push(Element::token(port_token(p))),
                Vertex::Device { id, kind } => {
                    if f != FormulationId::SfciNct {
                        output.push(Element::token(kind_token(kind)));
                    }
                    output.push(Element::token(id.to_string()));
                    if kind.is_transistor() {
                        output.push(Element::token(m.slot.label()));
                    }
                }
            }
        }
    }
    (input, output)
}

pub(crate) fn decode(f: FormulationId, input: &[Element], output: &[Element]) -> Result<CircuitDesign, DecodeError> {
    let vocab = vocab::vocabulary(f);
    let mut cur = Cursor::new(Side::Input, input, vocab);
    if f != FormulationId::SfciNdp {
        let options = (0..5)
            .map(|_| cur.scalar("duty option"))
            .collect::<Result<Vec<_>, _>>()?;
        check_duty_options(&options)?;
    }
    cur.scalar("voltage conversion ratio")?;
    cur.scalar("efficiency")?;
    read_ports(&mut cur)?;
    let mut kinds = Vec::new();
    while !cur.at_end() {
        kinds.push(cur.parse("device kind", kind_from_token)?);
        let id = cur.parse("device identifier", id_from_token)?;
        if id != kinds.len() - 1 {
            return Err(DecodeError::Declaration(CircuitError::IdentifierGap {
                count: kinds.len() - 1,
                found: id,
            }));
        }
    }

    let mut out = Cursor::new(Side::Output, output, vocab);
    let duty = match out.token("duty token") {
        Ok(t) => duty_from_token(t).ok_or(DecodeError::MissingDuty)?,
        Err(DecodeError::Truncated { .. }) => return Err(DecodeError::MissingDuty),
        Err(e) => return Err(e),
    };
    let mut nets = NetAssembler::new(kinds);
    while !out.at_end() {
        let tok = out.token("net member")?;
        if tok == COMMA {
            nets.end_net()?;
            continue;
        }
        if let Some(p) = port_from_token(tok) {
            nets.port(p)?;
            continue;
        }
        let (kind, id) = if f == FormulationId::SfciNct {
            let id = id_from_token(tok).ok_or_else(|| out.unexpected_prev(tok, "port or identifier"))?;
            (None, id)
        } else {
            let kind = kind_from_token(tok).ok_or_else(|| out.unexpected_prev(tok, "port or device kind"))?;
            (Some(kind), out.parse("device identifier", id_from_token)?)
        };
        let pin = if nets.declared(id)?.is_transistor() {
            Some(out.parse("transistor pin", pin_from_token)?)
        } else {
            None
        };
        nets.device(kind, id, pin)?;
    }
    nets.end_net()?;
    Ok(CircuitDesign::new(nets.finish()?, duty))
}
