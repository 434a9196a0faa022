mod common;

use amforge_core::canon::{canonical_key, dedup, permute, DevicePermutation};
use amforge_core::dataset::random_design;
use amforge_core::{
    is_isomorphic, parse_circuit_json, serialize_circuit_json, validate_structure, vertex_degree, CircuitDesign,
    Topology,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn topology() -> impl Strategy<Value = (Topology, u64)> {
    (any::<u64>(), 1usize..=6).prop_map(|(seed, n)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (random_design(&mut rng, n).topology, seed)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn key_is_permutation_invariant((t, seed) in topology()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let key = canonical_key(&t).unwrap();
        for _ in 0..20 {
            let sigma = DevicePermutation::random(&t.device_kinds(), &mut rng);
            let p = permute(&t, &sigma).unwrap();
            prop_assert_eq!(canonical_key(&p).unwrap(), key.clone());
            prop_assert!(validate_structure(&p).is_valid());
            prop_assert_eq!(permute(&p, &sigma.inverse()).unwrap(), t.clone());
        }
        prop_assert_eq!(permute(&t, &DevicePermutation::identity(t.device_count())).unwrap(), t);
    }

    #[test]
    fn agrees_with_oracle((a, seed) in topology()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kinds = a.device_kinds();
        if kinds.len() >= 2 {
            let b = common::random_wiring(&mut rng, &kinds);
            prop_assert_eq!(is_isomorphic(&a, &b).unwrap(), common::oracle_isomorphic(&a, &b));
        }
    }

    #[test]
    fn degree_sum_bound((t, _) in topology()) {
        let total: usize = t.vertex_order().iter().map(|v| vertex_degree(&t, v).unwrap()).sum();
        prop_assert_eq!(total, t.incidence_count());
        prop_assert!(total <= 2 * t.vertex_count());
    }

    #[test]
    fn circuit_json_round_trip((t, seed) in topology()) {
        let d = CircuitDesign::new(t, amforge_core::DutyCycle::ALL[(seed % 5) as usize]);
        let text = serialize_circuit_json(&d);
        let back = parse_circuit_json(&text).unwrap();
        prop_assert_eq!(serialize_circuit_json(&back), text);
        prop_assert_eq!(back, d);
    }

    #[test]
    fn dedup_idempotent_and_order_independent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut stream: Vec<Topology> = (0..12).map(|i| random_design(&mut rng, 3 + i % 2).topology).collect();
        // Add isomorphic copies.
        for i in 0..4 {
            let t = stream[i].clone();
            stream.push(permute(&t, &DevicePermutation::random(&t.device_kinds(), &mut rng)).unwrap());
        }
        let once = dedup(stream.clone()).unwrap();
        prop_assert_eq!(dedup(once.clone()).unwrap(), once.clone());
        let mut shuffled = stream;
        shuffled.shuffle(&mut rng);
        let mut a: Vec<_> = once.iter().map(|t| canonical_key(t).unwrap()).collect();
        let mut b: Vec<_> = dedup(shuffled).unwrap().iter().map(|t| canonical_key(t).unwrap()).collect();
        a.sort_by(|x, y| x.as_bytes().cmp(y.as_bytes()));
        b.sort_by(|x, y| x.as_bytes().cmp(y.as_bytes()));
        prop_assert_eq!(a, b);
    }
}

#[test]
fn exhaustive_two_device_agreement() {
    for kinds in common::kind_multisets(2) {
        let all = common::all_valid_topologies(&kinds);
        for a in &all {
            for b in &all {
                assert_eq!(is_isomorphic(a, b).unwrap(), common::oracle_isomorphic(a, b), "{a} / {b}");
            }
        }
    }
}
