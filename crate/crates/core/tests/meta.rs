mod common;

use listpart::meta::{
    find_derect_sequence, reduce_independent_set, verify_certificate, SearchOutcome,
};
use listpart::{ListFamily, SearchLimits};
use proptest::prelude::*;
use rand::Rng;

use common::*;

const NAMED: [[&str; 3]; 5] = [
    ["**0", "**0", "00*"],
    ["*00", "0**", "0**"],
    ["*00", "0*0", "00*"],
    ["000", "000", "000"],
    ["100", "010", "001"],
];
/// One layer that is both first and last, used only when `k = 1`.
const SINGLE_LAYER: [&str; 3] = ["**0", "***", "0**"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn certificates_verify(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = r.gen_range(1..=5);
        let star = r.gen_range(0.3..0.9);
        let m = random_matrix(&mut r, d, star);
        let fam = if r.gen_bool(0.5) { ListFamily::full(d) } else { random_family(&mut r, d) };
        if let SearchOutcome::Found(cert) = find_derect_sequence(&m, &fam, SearchLimits::default()) {
            prop_assert!(verify_certificate(&m, &fam, &cert));
            prop_assert!(cert.sequence.iter().all(|s| (2..=3).contains(&s.len())));
        }
    }

    #[test]
    fn gadget_blocks_are_named(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=4);
        let g = random_graph(&mut r, n, 0.5);
        let k = r.gen_range(1..=n);
        let out = reduce_independent_set(&g, k).unwrap();
        let m = &out.matrix;
        prop_assert_eq!(m.size(), 3 * n * k);
        for a in 0..n * k {
            for b in 0..n * k {
                let block: Vec<String> = (0..3)
                    .map(|i| (0..3).map(|j| m.entry(3 * a + i, 3 * b + j).as_char()).collect())
                    .collect();
                let named = NAMED.iter().any(|nb| block.iter().zip(nb).all(|(x, y)| x == y));
                let single = k == 1 && a == b && block.iter().zip(&SINGLE_LAYER).all(|(x, y)| x == y);
                prop_assert!(named || single, "block ({}, {}) = {:?}", a, b, block);
            }
        }
        prop_assert_eq!(out.family.maximal().len(), n * k);
    }
}
