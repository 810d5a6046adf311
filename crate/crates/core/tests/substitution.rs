mod common;

use std::collections::HashSet;

use common::{listed_code, listing_bijections, RULE_1D_LISTING, SEED_1D_LISTING, SEED_2D_LISTING};
use num_rational::BigRational;
use num_traits::{One, Zero};
use paperfold::complexity::{count_stabilized, letter_block_count};
use paperfold::crease::generate_recursive;
use paperfold::spectral::{
    coincidence_persists, find_coincidence, is_primitive, substitution_matrix,
};
use paperfold::substitution::{
    alphabet_size, derive_rule, seed, substitute, substitute_n, to_creases, SymbolicPattern,
};
use proptest::prelude::*;

#[test]
fn one_dimensional_rule_matches_listing() {
    let rule = derive_rule(1).unwrap();
    for (from, to) in RULE_1D_LISTING {
        assert_eq!(rule.image(from), &to, "a{:02b}", from);
    }
    let s = seed(1).unwrap();
    assert_eq!(s.origin(), &[-1]);
    assert_eq!(s.cells(), &SEED_1D_LISTING);
}

#[test]
fn two_dimensional_rule_matches_listing() {
    let rule = derive_rule(2).unwrap();
    let found = listing_bijections(&rule);
    assert_eq!(found.len(), 1, "bijections: {found:?}");
    let perm = found[0];
    let s = seed(2).unwrap();
    // Listed rows run top to bottom, so the first row sits at x₂ = 0.
    let listed = [
        ([-1, 0], SEED_2D_LISTING[0]),
        ([0, 0], SEED_2D_LISTING[1]),
        ([-1, -1], SEED_2D_LISTING[2]),
        ([0, -1], SEED_2D_LISTING[3]),
    ];
    for (pos, letter) in listed {
        assert_eq!(s.get(&pos), Some(listed_code(letter, &perm)), "{pos:?}");
    }
}

#[test]
fn local_rules_hold_after_every_step() {
    for dim in 1..=3 {
        let rule = derive_rule(dim).unwrap();
        let mut p = seed(dim).unwrap();
        p.check_parity().unwrap();
        for _ in 0..4 {
            p = substitute(&p, &rule).unwrap();
            p.check_local_rules().unwrap();
        }
    }
}

#[test]
fn grown_patterns_sit_inside_the_recursion() {
    for dim in 1..=2 {
        let rule = derive_rule(dim).unwrap();
        for k in 0..=3 {
            let grown = to_creases(&substitute_n(&seed(dim).unwrap(), &rule, k).unwrap()).unwrap();
            let full = generate_recursive(dim, k + 2).unwrap();
            for (face, sign) in grown.iter() {
                assert_eq!(full.get(&face), Some(sign), "d={dim} k={k} {face}");
            }
        }
    }
}

#[test]
fn substitution_matrix_is_uniform() {
    for dim in 1..=3 {
        let m = substitution_matrix(&derive_rule(dim).unwrap());
        assert_eq!(m.size(), alphabet_size(dim));
        assert!(m.column_sums().iter().all(|&s| s == 1 << dim));
        let perron = m.perron_data().unwrap();
        assert_eq!(perron.eigenvalue, 1 << dim);
        let total: BigRational = perron.frequencies.iter().sum();
        assert!(total.is_one());
        assert!(perron.frequencies.iter().all(|f| *f > BigRational::zero()));
        let lambda = BigRational::from_integer(perron.eigenvalue.into());
        for j in 0..m.size() {
            let row: BigRational = (0..m.size())
                .map(|i| BigRational::from_integer(m.entry(j, i).into()) * &perron.frequencies[i])
                .sum();
            assert_eq!(row, &lambda * &perron.frequencies[j]);
        }
    }
}

#[test]
fn coincidence_persists_at_next_level() {
    for dim in 1..=3 {
        let rule = derive_rule(dim).unwrap();
        let report = find_coincidence(&rule, 6);
        assert!(report.found);
        for pos in &report.positions {
            assert!(coincidence_persists(&rule, report.k, pos).unwrap());
        }
        assert!(is_primitive(&rule, 8).primitive);
    }
}

/// Distinct length-`n` sign words of a long one-dimensional pattern.
fn words_1d(n: usize) -> usize {
    let p = generate_recursive(1, 14).unwrap();
    let signs: Vec<char> = p.iter().map(|(_, s)| s.symbol()).collect();
    signs
        .windows(n)
        .map(|w| w.iter().collect::<String>())
        .collect::<HashSet<_>>()
        .len()
}

#[test]
fn one_dimensional_counts_match_direct_enumeration() {
    for n in 1..=20 {
        assert_eq!(
            count_stabilized(1, n).unwrap().count(),
            words_1d(n),
            "n={n}"
        );
    }
}

#[test]
fn letter_blocks_match_direct_enumeration() {
    // Words of two letters are windows of two signs plus a parity.
    let p = generate_recursive(1, 12).unwrap();
    let faces: Vec<(i64, char)> = p.iter().map(|(f, s)| (f.corner[0], s.symbol())).collect();
    let blocks: HashSet<_> = faces
        .windows(2)
        .map(|w| (w[0].1, w[1].1, w[0].0.rem_euclid(2)))
        .collect();
    assert_eq!(letter_block_count(1).unwrap(), blocks.len());
}

fn arb_symbolic() -> impl Strategy<Value = SymbolicPattern> {
    (1usize..=3).prop_flat_map(|dim| {
        (
            proptest::collection::vec(-5i64..5, dim),
            proptest::collection::vec(1usize..4, dim),
        )
            .prop_flat_map(move |(origin, shape)| {
                let len: usize = shape.iter().product();
                let size = alphabet_size(dim) as u16;
                proptest::collection::vec(0..size, len).prop_map(move |cells| {
                    SymbolicPattern::new(dim, origin.clone(), shape.clone(), cells).unwrap()
                })
            })
    })
}

proptest! {
    #[test]
    fn symbolic_json_round_trip(p in arb_symbolic()) {
        let json = serde_json::to_string(&p).unwrap();
        let back: SymbolicPattern = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), json);
        prop_assert_eq!(back, p);
    }
}
