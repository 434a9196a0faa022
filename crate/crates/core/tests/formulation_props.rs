mod common;

use amforge_core::dataset::{random_design, random_spec};
use amforge_core::formulations::numeric::{parse_numeral, render_numeral};
use amforge_core::{
    build_matrix, decode, encode, matrix_to_edges, token_length, CircuitDesign, DutyCycle, Element, FormulationId,
    MatrixEntry, Spec, Terminal, Topology,
};
use proptest::prelude::*;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn design_and_spec() -> impl Strategy<Value = (CircuitDesign, Spec, u64)> {
    (any::<u64>(), 3usize..=6, 0usize..5).prop_map(|(seed, n, duty)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut d = random_design(&mut rng, n);
        d.duty = DutyCycle::ALL[duty];
        (d, random_spec(&mut rng), seed)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn every_formulation_round_trips((d, s, _) in design_and_spec()) {
        for f in FormulationId::ALL {
            let pair = encode(f, &d, &s).unwrap();
            prop_assert_eq!(decode(f, &pair.input, &pair.output).unwrap(), d.clone(), "{}", f);
        }
    }

    #[test]
    fn outputs_never_hold_scalars((d, s, _) in design_and_spec()) {
        for f in FormulationId::ALL {
            let pair = encode(f, &d, &s).unwrap();
            prop_assert!(pair.output.iter().all(|e| !e.is_scalar()));
            if !f.uses_scalars() {
                prop_assert!(pair.input.iter().all(|e| !e.is_scalar()));
            }
        }
    }

    #[test]
    fn redeclaration_does_not_change_encoding((d, s, seed) in design_and_spec()) {
        // Rebuild the same nets with members and nets listed in random order.
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut nets: Vec<Vec<Terminal>> = d.topology.edges().iter().map(|e| e.members().to_vec()).collect();
        for n in &mut nets {
            n.shuffle(&mut rng);
        }
        nets.shuffle(&mut rng);
        let again = CircuitDesign::new(Topology::new(d.topology.vertex_order().to_vec(), nets).unwrap(), d.duty);
        for f in [FormulationId::Cf, FormulationId::Sfci] {
            prop_assert_eq!(encode(f, &d, &s).unwrap(), encode(f, &again, &s).unwrap());
        }
    }

    #[test]
    fn length_laws((d, s, _) in design_and_spec()) {
        let t = &d.topology;
        let v = t.vertex_count();
        let sfci = encode(FormulationId::Sfci, &d, &s).unwrap();
        let (_, out) = token_length(&sfci);
        prop_assert_eq!(out, common::sfci_length(t));
        prop_assert!(out <= 4 * v + t.edges().len());
        for f in [FormulationId::Pm, FormulationId::Fm, FormulationId::Sfm] {
            let (_, out) = token_length(&encode(f, &d, &s).unwrap());
            prop_assert_eq!(out, v * v + v - 1 + f.duty_block_len());
        }
    }

    #[test]
    fn matrix_is_mutually_present_and_invertible((d, _, _) in design_and_spec()) {
        let m = build_matrix(&d.topology).unwrap();
        for i in 0..m.size() {
            prop_assert_eq!(m.entry(i, i), MatrixEntry::NoEdge);
            for j in 0..m.size() {
                prop_assert_eq!(m.entry(i, j) == MatrixEntry::NoEdge, m.entry(j, i) == MatrixEntry::NoEdge);
            }
        }
        prop_assert_eq!(matrix_to_edges(&m).unwrap(), d.topology);
    }

    #[test]
    fn numerals_reparse_within_tolerance(x in -1000.0f64..1000.0) {
        let text = render_numeral(x);
        let frac = text.split_once('.').unwrap().1;
        prop_assert_eq!(frac.len(), 5);
        let back = parse_numeral(&text).unwrap();
        prop_assert!((back - x).abs() <= 5e-6, "{} -> {}", x, back);
    }

    #[test]
    fn substituted_matrix_presence_is_never_accepted(
        (d, s, seed) in design_and_spec(),
        f in prop::sample::select(vec![FormulationId::Pm, FormulationId::Fm, FormulationId::Sfm]),
    ) {
        let pair = encode(f, &d, &s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let positions: Vec<usize> = (f.duty_block_len()..pair.output.len())
            .filter(|&i| pair.output[i].as_token().and_then(MatrixEntry::from_token).is_some())
            .collect();
        let &pos = positions.choose(&mut rng).unwrap();
        let old = MatrixEntry::from_token(pair.output[pos].as_token().unwrap()).unwrap();
        let new = if old == MatrixEntry::NoEdge { MatrixEntry::Edge1 } else { MatrixEntry::NoEdge };
        let mut out = pair.output.clone();
        out[pos] = Element::token(new.token());
        prop_assert!(decode(f, &pair.input, &out).is_err());
    }
}

#[test]
fn sfm_closed_form_for_seven_vertices() {
    // Four devices give |V| = 7.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let d = random_design(&mut rng, 4);
    let pair = encode(FormulationId::Sfm, &d, &random_spec(&mut rng)).unwrap();
    assert_eq!(token_length(&pair).1, 49 + 6 + 1);
}
