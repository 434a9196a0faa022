//! PM, FM and SFM: spec prefix plus declaration in, incidence matrix out.

use super::assemble::{
    check_duty_options, port_tokens, read_bare_kinds, read_ports, read_select_block, select_block,
};
use super::cursor::{Cursor, Side};
use super::numeric::{numeral_tokens, read_numeral};
use super::vocab::{self, duty_from_token, duty_token, kind_token, SEP};
use super::{build_matrix, matrix_to_edges, DecodeError, Element, EncodeError, FormulationId, IncidenceMatrix, MatrixEntry};
use crate::circuit::{full_order, CircuitDesign, DutyCycle, Spec};

type Pair = (Vec<Element>, Vec<Element>);

pub(crate) fn encode(f: FormulationId, design: &CircuitDesign, spec: &Spec) -> Result<Pair, EncodeError> {
    let matrix = build_matrix(&design.topology).map_err(|e| match e {
        EncodeError::UnsupportedKind { kind, .. } => EncodeError::UnsupportedKind { formulation: f, kind },
        other => other,
    })?;

    let mut input = Vec::new();
    let options = DutyCycle::ALL.map(DutyCycle::value);
    let numeric = |input: &mut Vec<Element>, label: &[&str], values: &[f64]| {
        if f != FormulationId::Sfm {
            input.extend(label.iter().map(|t| Element::token(*t)));
        }
        for &x in values {
            if f == FormulationId::Pm {
                input.extend(numeral_tokens(x));
            } else {
                input.push(Element::Scalar(x));
            }
        }
    };
    numeric(&mut input, vocab::DUTY_OPTIONS_LABEL, &options);
    numeric(&mut input, vocab::RATIO_LABEL, &[spec.voltage_ratio()]);
    numeric(&mut input, vocab::EFFICIENCY_LABEL, &[spec.efficiency()]);
    input.extend(port_tokens());
    input.extend(design.topology.device_kinds().into_iter().map(|k| Element::token(kind_token(k))));

    let mut output: Vec<Element> = if f == FormulationId::Sfm {
        vec![Element::token(duty_token(design.duty))]
    } else {
        select_block(design.duty).collect()
    };
    for (i, row) in matrix.entries().iter().enumerate() {
        if i > 0 {
            output.push(Element::token(SEP));
        }
        output.extend(row.iter().map(|e| Element::token(e.token())));
    }
    Ok((input, output))
}

pub(crate) fn decode(f: FormulationId, input: &[Element], output: &[Element]) -> Result<CircuitDesign, DecodeError> {
    let vocab = vocab::vocabulary(f);
    let mut cur = Cursor::new(Side::Input, input, vocab);
    let numeric = |cur: &mut Cursor<'_>, label: &[&str], count: usize| -> Result<Vec<f64>, DecodeError> {
        if f != FormulationId::Sfm {
            cur.expect_all(label, "field label")?;
        }
        (0..count)
            .map(|_| {
                if f == FormulationId::Pm {
                    read_numeral(cur)
                } else {
                    cur.scalar("numeric value")
                }
            })
            .collect()
    };
    check_duty_options(&numeric(&mut cur, vocab::DUTY_OPTIONS_LABEL, 5)?)?;
    numeric(&mut cur, vocab::RATIO_LABEL, 1)?;
    numeric(&mut cur, vocab::EFFICIENCY_LABEL, 1)?;
    read_ports(&mut cur)?;
    let kinds = read_bare_kinds(&mut cur)?;

    let mut out = Cursor::new(Side::Output, output, vocab);
    let duty = if f == FormulationId::Sfm {
        match out.token("duty token") {
            Ok(t) => duty_from_token(t).ok_or(DecodeError::MissingDuty)?,
            Err(DecodeError::Truncated { .. }) => return Err(DecodeError::MissingDuty),
            Err(e) => return Err(e),
        }
    } else {
        read_select_block(&mut out)?
    };

    let mut rows: Vec<Vec<MatrixEntry>> = vec![Vec::new()];
    while !out.at_end() {
        let tok = out.token("matrix entry")?;
        if tok == SEP {
            rows.push(Vec::new());
        } else {
            let e = MatrixEntry::from_token(tok).ok_or_else(|| out.unexpected_prev(tok, "matrix entry"))?;
            rows.last_mut().unwrap().push(e);
        }
    }
    let matrix = IncidenceMatrix::new(full_order(&kinds), rows)?;
    let topology = matrix_to_edges(&matrix)?;
    Ok(CircuitDesign::new(topology, duty))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn pair(f: FormulationId) -> Pair {
        let d = CircuitDesign::new(fixtures::buck(), DutyCycle::D05);
        encode(f, &d, &Spec::new(0.65, 0.95544).unwrap()).unwrap()
    }

    #[test]
    fn sfm_input_layout() {
        let (input, output) = pair(FormulationId::Sfm);
        let scalars: Vec<f64> = input
            .iter()
            .filter_map(|e| match e {
                Element::Scalar(x) => Some(*x),
                _ => None,
            })
            .collect();
        assert_eq!(scalars, vec![0.1, 0.3, 0.5, 0.7, 0.9, 0.65, 0.95544]);
        assert!(input[..7].iter().all(Element::is_scalar));
        let toks: Vec<&str> = input[7..].iter().filter_map(Element::as_token).collect();
        assert_eq!(toks, ["<VIN>", "<VOUT>", "<GND>", "<Sa>", "<Sb>", "<L>"]);
        assert_eq!(output.len(), 36 + 5 + 1);
        assert_eq!(output[0], Element::token("<duty_0.5>"));
    }

    #[test]
    fn pm_duty_block() {
        let (input, output) = pair(FormulationId::Pm);
        let block: Vec<&str> = output[..5].iter().filter_map(Element::as_token).collect();
        assert_eq!(block, ["<unselect>", "<unselect>", "<select>", "<unselect>", "<unselect>"]);
        assert!(input.iter().all(|e| !e.is_scalar()));
        assert_eq!(output.len(), 36 + 5 + 5);
    }

    #[test]
    fn ragged_row() {
        let (input, mut output) = pair(FormulationId::Sfm);
        output.remove(1);
        let err = decode(FormulationId::Sfm, &input, &output).unwrap_err();
        assert_eq!(err.class(), "ragged matrix");
    }

    #[test]
    fn asymmetric_entry() {
        let (input, mut output) = pair(FormulationId::Sfm);
        // Row VIN, column Sa0 sits at offset 1 + 3.
        output[4] = Element::token("<no_edge>");
        let err = decode(FormulationId::Sfm, &input, &output).unwrap_err();
        assert_eq!(err.class(), "asymmetric incidence");
    }

    #[test]
    fn duty_problems() {
        let (input, output) = pair(FormulationId::Fm);
        let mut none = output.clone();
        none[2] = Element::token("<unselect>");
        assert_eq!(decode(FormulationId::Fm, &input, &none).unwrap_err(), DecodeError::MissingDuty);
        let mut two = output.clone();
        two[0] = Element::token("<select>");
        assert!(matches!(decode(FormulationId::Fm, &input, &two), Err(DecodeError::InvalidDuty(_))));
        assert_eq!(decode(FormulationId::Sfm, &pair(FormulationId::Sfm).0, &[]).unwrap_err(), DecodeError::MissingDuty);
    }

    #[test]
    fn wrong_options_prefix() {
        let (mut input, output) = pair(FormulationId::Sfm);
        input[0] = Element::Scalar(0.2);
        assert_eq!(decode(FormulationId::Sfm, &input, &output).unwrap_err(), DecodeError::DutyOptions);
    }
}
