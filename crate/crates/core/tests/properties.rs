mod support;

use proptest::prelude::*;

use crpla::auth::{verify, Decision, VerifierConfig};
use crpla::channel::{load_map, save_map, ChannelMap, GridSpec};
use crpla::policy::{
    energy, greedy_next, std_next, strategic_field, EnergyModel, Greedy, PolicyTable,
};

fn arb_map() -> impl Strategy<Value = ChannelMap> {
    (2usize..9, 2usize..9, 0.25f64..4.0, 2usize..8).prop_flat_map(|(n1, n2, step, levels)| {
        prop::collection::vec(50.0f64..120.0, n1 * n2).prop_map(move |eta| {
            let grid = GridSpec::new(n1, n2, step, 15.0, 2.4e9).unwrap();
            ChannelMap::from_eta(grid, eta, levels).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn classes_partition_the_grid(map in arb_map()) {
        let mut seen = vec![false; map.len()];
        for class in &map.classes {
            prop_assert!(!class.positions.is_empty());
            for &p in &class.positions {
                prop_assert!(!seen[p]);
                seen[p] = true;
                prop_assert_eq!(map.quantized[p], class.value);
            }
        }
        prop_assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn quantization_error_is_bounded(map in arb_map()) {
        let half = map.quantizer.width() / 2.0;
        for (e, q) in map.eta.iter().zip(&map.quantized) {
            prop_assert!((e - q).abs() <= half + 1e-9);
            // nearest level
            let nearest = map.levels.iter().map(|l| (l - e).abs()).fold(f64::INFINITY, f64::min);
            prop_assert!((q - e).abs() <= nearest + 1e-9);
        }
    }

    #[test]
    fn map_file_roundtrip_is_bit_exact(map in arb_map()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        save_map(&map, &path).unwrap();
        let back = load_map(&path).unwrap();
        prop_assert!(back.eta.iter().zip(&map.eta).all(|(a, b)| a.to_bits() == b.to_bits()));
        prop_assert_eq!(back, map);
    }

    #[test]
    fn energy_is_symmetric_and_nonnegative(map in arb_map(), a in 0usize..64, b in 0usize..64) {
        let (a, b) = (a % map.len(), b % map.len());
        let m = EnergyModel::default();
        let ab = energy(a, b, &m, &map.grid).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert_eq!(ab, energy(b, a, &m, &map.grid).unwrap());
        prop_assert_eq!(ab, support::oracle_energy(&map, &m, a, b));
    }

    #[test]
    fn policies_always_realize_the_challenge(map in arb_map(), t in 0usize..200) {
        let m = EnergyModel::default();
        let field = strategic_field(&map, 3).unwrap();
        for x in 0..map.len() {
            for a in map.challenges() {
                let g = greedy_next(x, a, &map, &m).unwrap();
                let s = std_next(x, a, t, &field, &map, &m).unwrap();
                prop_assert_eq!(map.quantized[g], a);
                prop_assert_eq!(map.quantized[s], a);
            }
        }
        let table = PolicyTable::tabulate(&Greedy { model: m }, &map, 1).unwrap();
        for (state, &to) in table.next_position.iter().enumerate() {
            prop_assert_eq!(map.class_of(to), state % map.num_classes());
        }
    }

    #[test]
    fn strategic_value_ignores_constant_offsets(map in arb_map(), offset in -30.0f64..30.0) {
        let shifted = ChannelMap::from_eta(
            map.grid,
            map.eta.iter().map(|e| e + offset).collect(),
            map.quantizer.num_levels,
        ).unwrap();
        let a = strategic_field(&map, 3).unwrap();
        let b = strategic_field(&shifted, 3).unwrap();
        for (x, y) in a.y.iter().zip(&b.y) {
            prop_assert!((x - y).abs() < 1e-6);
        }
    }

    #[test]
    fn verify_is_interval_membership(challenge in 40.0f64..120.0, dev in -5.0f64..10.0, p in 0.001f64..0.999) {
        let c = VerifierConfig::new(p).unwrap();
        let d1 = verify(challenge + dev, challenge, &c);
        let d2 = verify(challenge + dev, challenge, &c);
        prop_assert_eq!(d1, d2);
        let d = (challenge + dev) - challenge;
        prop_assert_eq!(d1 == Decision::Accept, d >= 0.0 && d <= -p.ln());
    }
}
