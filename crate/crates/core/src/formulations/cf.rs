//! CF: labeled pure-text input, parenthesized net list with fused device
//! tokens such as `<Sa0>`.

use super::assemble::{check_duty_options, port_tokens, read_ports, NetAssembler};
use super::cursor::{Cursor, Side};
use super::numeric::{numeral_tokens, read_numeral};
use super::vocab::{self, fused_from_token, fused_token, port_from_token, port_token, CLOSE, COMMA, OPEN};
use super::{DecodeError, Element, FormulationId};
use crate::circuit::{CircuitDesign, CircuitError, DutyCycle, Spec, Vertex};

type Pair = (Vec<Element>, Vec<Element>);

fn labels(out: &mut Vec<Element>, words: &[&str]) {
    out.extend(words.iter().map(|w| Element::token(*w)));
}

pub(crate) fn encode(design: &CircuitDesign, spec: &Spec) -> Pair {
    let t = &design.topology;
    let mut input = Vec::new();
    labels(&mut input, vocab::DUTY_OPTIONS_LABEL);
    for d in DutyCycle::ALL {
        input.extend(numeral_tokens(d.value()));
    }
    labels(&mut input, vocab::RATIO_LABEL);
    input.extend(numeral_tokens(spec.voltage_ratio()));
    labels(&mut input, vocab::EFFICIENCY_LABEL);
    input.extend(numeral_tokens(spec.efficiency()));
    labels(&mut input, vocab::VERTICES_LABEL);
    input.extend(port_tokens());
    for (id, kind) in t.device_kinds().into_iter().enumerate() {
        input.push(Element::token(fused_token(kind, id)));
    }

    let mut output = Vec::new();
    labels(&mut output, vocab::DUTY_LABEL);
    output.extend(numeral_tokens(design.duty.value()));
    labels(&mut output, vocab::CONNECTIONS_LABEL);
    for (i, edge) in t.edges().iter().enumerate() {
        if i > 0 {
            output.push(Element::token(COMMA));
        }
        output.push(Element::token(OPEN));
        for (j, m) in edge.members().iter().enumerate() {
            if j > 0 {
                output.push(Element::token(COMMA));
            }
            output.push(Element::token(match m.vertex {
                Vertex::Port(p) => port_token(p).to_string(),
                Vertex::Device { id, kind } => fused_token(kind, id),
            }));
        }
        output.push(Element::token(CLOSE));
    }
    (input, output)
}

pub(crate) fn decode(input: &[Element], output: &[Element]) -> Result<CircuitDesign, DecodeError> {
    let vocab = vocab::vocabulary(FormulationId::Cf);
    let mut cur = Cursor::new(Side::Input, input, vocab);
    cur.expect_all(vocab::DUTY_OPTIONS_LABEL, "field label")?;
    let options = (0..5)
        .map(|_| read_numeral(&mut cur))
        .collect::<Result<Vec<_>, _>>()?;
    check_duty_options(&options)?;
    cur.expect_all(vocab::RATIO_LABEL, "field label")?;
    read_numeral(&mut cur)?;
    cur.expect_all(vocab::EFFICIENCY_LABEL, "field label")?;
    read_numeral(&mut cur)?;
    cur.expect_all(vocab::VERTICES_LABEL, "field label")?;
    read_ports(&mut cur)?;
    let mut kinds = Vec::new();
    while !cur.at_end() {
        let (kind, id) = cur.parse("device", fused_from_token)?;
        if id != kinds.len() {
            return Err(DecodeError::Declaration(CircuitError::IdentifierGap {
                count: kinds.len(),
                found: id,
            }));
        }
        kinds.push(kind);
    }

    let mut out = Cursor::new(Side::Output, output, vocab);
    let duty_label = out.expect_all(vocab::DUTY_LABEL, "duty label");
    if let Err(DecodeError::Truncated { .. }) = duty_label {
        return Err(DecodeError::MissingDuty);
    }
    duty_label?;
    let x = read_numeral(&mut out)?;
    let duty = DutyCycle::from_value(x).ok_or_else(|| DecodeError::InvalidDuty(format!("{x} not in option set")))?;
    out.expect_all(vocab::CONNECTIONS_LABEL, "connections label")?;

    let mut nets = NetAssembler::new(kinds);
    loop {
        out.expect(OPEN, "(")?;
        loop {
            let tok = out.token("net member")?;
            if let Some(p) = port_from_token(tok) {
                nets.port(p)?;
            } else if let Some((kind, id)) = fused_from_token(tok) {
                nets.device(Some(kind), id, None)?;
            } else if tok == CLOSE {
                // `( )` or `( a , )`
                return Err(DecodeError::EmptyEdge);
            } else {
                return Err(out.unexpected_prev(tok, "net member"));
            }
            let sep = out.token(", or )")?;
            match sep {
                COMMA => continue,
                CLOSE => break,
                other => return Err(out.unexpected_prev(other, ", or )")),
            }
        }
        nets.end_net()?;
        if out.at_end() {
            break;
        }
        out.expect(COMMA, ",")?;
    }
    Ok(CircuitDesign::new(nets.finish()?, duty))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::formulations::SequencePair;

    #[test]
    fn buck_text() {
        let d = CircuitDesign::new(fixtures::buck(), DutyCycle::D05);
        let (input, output) = encode(&d, &Spec::new(0.65, 0.95544).unwrap());
        let text = SequencePair::render(&output);
        assert!(text.starts_with("Duty cycle : 0 . 5 0 0 0 0 Connections : ( <VIN> , <Sa0> ) , ( <VOUT> , <L2> )"), "{text}");
        let input_text = SequencePair::render(&input);
        assert!(input_text.contains("Efficiency : 0 . 9 5 5 4 4 Vertices : <VIN> <VOUT> <GND> <Sa0> <Sb1> <L2>"));
        assert_eq!(decode(&input, &output).unwrap(), d);
    }

    #[test]
    fn empty_net_and_bad_duty() {
        let d = CircuitDesign::new(fixtures::buck(), DutyCycle::D05);
        let (input, output) = encode(&d, &Spec::new(0.65, 0.95544).unwrap());
        let mut empty = output.clone();
        empty.extend([",", "(", ")"].map(Element::token));
        assert_eq!(decode(&input, &empty).unwrap_err(), DecodeError::EmptyEdge);
        let mut duty = output.clone();
        duty[5] = Element::token("4");
        assert_eq!(decode(&input, &duty).unwrap_err().class(), "invalid duty");
        assert_eq!(decode(&input, &[]).unwrap_err(), DecodeError::MissingDuty);
    }
}
