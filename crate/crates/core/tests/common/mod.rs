#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use paperfold::crease::{simulate_fold, ReflectionSet, Sign};
use paperfold::linalg::IntMatrix;
use paperfold::substitution::BlockSubstitution;
use rand::Rng;

/// The one-dimensional rule as listed: `a_ij` is code `2i + j`, crease type
/// first, parity second.
pub const RULE_1D_LISTING: [(u16, [u16; 2]); 4] = [
    (0b00, [0b00, 0b11]),
    (0b01, [0b00, 0b01]),
    (0b10, [0b10, 0b11]),
    (0b11, [0b10, 0b01]),
];

pub const SEED_1D_LISTING: [u16; 2] = [0b11, 0b00];

/// The two-dimensional rule as listed: letter `b_ij` written as the number
/// `10 i + j`, image block as `[top left, top right, bottom left, bottom right]`.
pub const RULE_2D_LISTING: [(u16, [u16; 4]); 16] = [
    (0, [1, 13, 0, 2]),
    (1, [11, 23, 0, 22]),
    (2, [1, 33, 0, 22]),
    (3, [11, 3, 0, 2]),
    (10, [1, 13, 10, 12]),
    (11, [11, 23, 10, 32]),
    (12, [1, 33, 10, 32]),
    (13, [11, 3, 10, 12]),
    (20, [21, 13, 20, 2]),
    (21, [31, 23, 20, 22]),
    (22, [21, 33, 20, 22]),
    (23, [31, 3, 20, 2]),
    (30, [21, 13, 30, 12]),
    (31, [31, 23, 30, 32]),
    (32, [21, 33, 30, 32]),
    (33, [31, 3, 30, 12]),
];

/// The listed seed, rows top to bottom: `b32 b00 / b13 b01`.
pub const SEED_2D_LISTING: [u16; 4] = [32, 0, 13, 1];

/// Listed parity index `j = 2·(x₁ mod 2) + (x₂ mod 2)` as a parity bitmask
/// with axis 1 in bit 0.
pub fn listed_parity(j: u16) -> u16 {
    (j >> 1) | ((j & 1) << 1)
}

/// Code of the listed letter `b_ij` under a relabelling `perm` of crease indices.
pub fn listed_code(listed: u16, perm: &[u16; 4]) -> u16 {
    (perm[(listed / 10) as usize] << 2) | listed_parity(listed % 10)
}

/// Child index (bit 0 along axis 1) for each slot of a listed block.
pub const LISTED_SLOTS: [usize; 4] = [0b10, 0b11, 0b00, 0b01];

/// Every permutation of the four crease indices under which the listed
/// rule equals `rule`.
pub fn listing_bijections(rule: &BlockSubstitution) -> Vec<[u16; 4]> {
    let mut found = Vec::new();
    for a in 0..4u16 {
        for b in 0..4u16 {
            for c in 0..4u16 {
                for d in 0..4u16 {
                    let perm = [a, b, c, d];
                    let mut sorted = perm;
                    sorted.sort_unstable();
                    if sorted != [0, 1, 2, 3] {
                        continue;
                    }
                    let agrees = RULE_2D_LISTING.iter().all(|(from, block)| {
                        let symbol = listed_code(*from, &perm);
                        block
                            .iter()
                            .zip(LISTED_SLOTS)
                            .all(|(&to, slot)| rule.child(symbol, slot) == listed_code(to, &perm))
                    });
                    if agrees {
                        found.push(perm);
                    }
                }
            }
        }
    }
    found
}

/// `S_d(1)` taken from the folding simulation, keyed by `(axis, corner)`.
pub fn folded_s1(dim: usize) -> BTreeMap<(usize, Vec<i64>), Sign> {
    simulate_fold(dim, 1)
        .unwrap()
        .iter()
        .map(|(f, s)| ((f.axis, f.corner), s))
        .collect()
}

/// Mirror a face set in `x_axis = 0`, swapping all signs.
pub fn mirror_faces(
    faces: &BTreeMap<(usize, Vec<i64>), Sign>,
    axis: usize,
) -> BTreeMap<(usize, Vec<i64>), Sign> {
    faces
        .iter()
        .map(|((k, corner), &s)| {
            let mut c = corner.clone();
            c[axis] = if *k == axis { -c[axis] } else { -c[axis] - 1 };
            ((*k, c), -s)
        })
        .collect()
}

pub fn mirror_all(
    faces: &BTreeMap<(usize, Vec<i64>), Sign>,
    a: &ReflectionSet,
) -> BTreeMap<(usize, Vec<i64>), Sign> {
    a.axes()
        .iter()
        .fold(faces.clone(), |f, &axis| mirror_faces(&f, axis))
}

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| big(rng.gen_range(-bound..=bound)))
}

/// A random unimodular matrix and its inverse, built from elementary row operations.
pub fn random_unimodular(rng: &mut impl Rng, n: usize, steps: usize) -> (IntMatrix, IntMatrix) {
    let mut u = IntMatrix::identity(n);
    let mut u_inv = IntMatrix::identity(n);
    if n < 2 {
        return (u, u_inv);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = big(rng.gen_range(-2..=2));
        // u ← E u with E = I + c e_i e_jᵀ, and u⁻¹ ← u⁻¹ E⁻¹.
        for col in 0..n {
            let delta = &c * &u[(j, col)];
            u[(i, col)] += delta;
        }
        for row in 0..n {
            let delta = &c * &u_inv[(row, i)];
            u_inv[(row, j)] -= delta;
        }
    }
    (u, u_inv)
}

/// `d · (2ⁿ − 1) · 2^{n(d−1)}` interior faces in a cube of side `2ⁿ`.
pub fn face_count(dim: usize, n: u32) -> u64 {
    if n == 0 {
        return 0;
    }
    dim as u64 * ((1u64 << n) - 1) * (1u64 << (n as usize * (dim - 1)))
}
