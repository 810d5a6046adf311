//! Substitution matrices, primitivity and coincidences.
//!
//! Everything here works for arbitrary block substitutions, not only the
//! paperfolding rule.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::substitution::{substitute_n, BlockSubstitution, SymbolicPattern};

/// Default iteration bound for [`is_primitive`].
pub const DEFAULT_PRIMITIVITY_BOUND: u32 = 8;
/// Default iteration bound for [`find_coincidence`].
pub const DEFAULT_COINCIDENCE_BOUND: u32 = 6;

/// Letter-occurrence matrix: entry `(j, i)` counts letter `j` in the image of letter `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionMatrix {
    size: usize,
    entries: Vec<u64>,
}

impl SubstitutionMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, j: usize, i: usize) -> u64 {
        self.entries[j * self.size + i]
    }

    pub fn column_sums(&self) -> Vec<u64> {
        (0..self.size)
            .map(|i| (0..self.size).map(|j| self.entry(j, i)).sum())
            .collect()
    }

    fn support(&self) -> Vec<Vec<bool>> {
        (0..self.size)
            .map(|j| (0..self.size).map(|i| self.entry(j, i) > 0).collect())
            .collect()
    }

    /// Perron eigenvalue and normalized letter frequencies.
    ///
    /// The matrix of a constant-length substitution has equal column sums,
    /// which makes that sum an eigenvalue with left eigenvector `(1, …, 1)`.
    /// The frequencies are the exact right eigenvector, scaled to sum to 1.
    /// Returns `None` when the column sums differ or the eigenspace is not
    /// one-dimensional.
    pub fn perron_data(&self) -> Option<PerronData> {
        let sums = self.column_sums();
        let lambda = *sums.first()?;
        if sums.iter().any(|&s| s != lambda) {
            return None;
        }
        let m = self.size;
        let mut rows: Vec<Vec<BigRational>> = (0..m)
            .map(|j| {
                (0..m)
                    .map(|i| {
                        let mut v = self.entry(j, i) as i64;
                        if i == j {
                            v -= lambda as i64;
                        }
                        BigRational::from_integer(BigInt::from(v))
                    })
                    .collect()
            })
            .collect();
        let kernel = rational_kernel(&mut rows, m);
        if kernel.len() != 1 {
            return None;
        }
        let v = &kernel[0];
        let total: BigRational = v.iter().cloned().sum();
        if total.is_zero() {
            return None;
        }
        let frequencies: Vec<BigRational> = v.iter().map(|x| x / &total).collect();
        Some(PerronData {
            eigenvalue: lambda,
            frequencies,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerronData {
    pub eigenvalue: u64,
    pub frequencies: Vec<BigRational>,
}

/// Kernel basis of a rational matrix with `cols` columns, by reduced row echelon form.
fn rational_kernel(rows: &mut [Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[row][f].clone();
            }
            v
        })
        .collect()
}

pub fn substitution_matrix(rule: &BlockSubstitution) -> SubstitutionMatrix {
    let m = rule.alphabet_size();
    let mut entries = vec![0u64; m * m];
    for i in 0..m {
        for &j in rule.image(i as u16) {
            entries[j as usize * m + i] += 1;
        }
    }
    SubstitutionMatrix { size: m, entries }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitivityReport {
    pub primitive: bool,
    pub k: u32,
}

fn bool_product(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let m = a.len();
    let mut out = vec![vec![false; m]; m];
    for (i, row) in a.iter().enumerate() {
        for (l, &x) in row.iter().enumerate() {
            if x {
                for (o, &y) in out[i].iter_mut().zip(&b[l]) {
                    *o |= y;
                }
            }
        }
    }
    out
}

/// Smallest `k ≤ k_max` with every entry of the `k`-th matrix power positive.
pub fn is_primitive(rule: &BlockSubstitution, k_max: u32) -> PrimitivityReport {
    let support = substitution_matrix(rule).support();
    let mut power = support.clone();
    for k in 1..=k_max {
        if power.iter().all(|row| row.iter().all(|&x| x)) {
            return PrimitivityReport { primitive: true, k };
        }
        power = bool_product(&power, &support);
    }
    PrimitivityReport {
        primitive: false,
        k: k_max,
    }
}

/// For each letter, the smallest `k ≤ k_max` whose `k`-fold image contains every letter.
pub fn letter_exponents(rule: &BlockSubstitution, k_max: u32) -> Vec<Option<u32>> {
    let support = substitution_matrix(rule).support();
    let m = support.len();
    let mut out = vec![None; m];
    let mut power = support.clone();
    for k in 1..=k_max {
        for (i, slot) in out.iter_mut().enumerate() {
            if slot.is_none() && (0..m).all(|j| power[j][i]) {
                *slot = Some(k);
            }
        }
        if out.iter().all(Option::is_some) {
            break;
        }
        power = bool_product(&power, &support);
    }
    out
}

/// Whether `k` substitution steps from `seed` produce every letter.
pub fn seed_covers_alphabet(
    rule: &BlockSubstitution,
    seed: &SymbolicPattern,
    k: u32,
) -> Result<bool> {
    let grown = substitute_n(seed, rule, k)?;
    let mut seen = vec![false; rule.alphabet_size()];
    for &s in grown.cells() {
        seen[s as usize] = true;
    }
    Ok(seen.iter().all(|&x| x))
}

/// Outcome of a coincidence search.
///
/// `position` is the lexicographically first position at the smallest `k`;
/// `positions` lists every coincident position at that `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoincidenceReport {
    pub found: bool,
    pub k: u32,
    pub position: Vec<usize>,
    pub letter: Option<u16>,
    pub positions: Vec<Vec<usize>>,
}

impl CoincidenceReport {
    pub fn contains(&self, position: &[usize]) -> bool {
        self.positions.iter().any(|p| p == position)
    }

    pub fn to_json(&self) -> serde_json::Value {
        if self.found {
            serde_json::json!({
                "coincidence": {
                    "k": self.k,
                    "position": self.position,
                    "letter": self.letter,
                    "positions": self.positions,
                }
            })
        } else {
            serde_json::json!({ "coincidence": null, "k_max": self.k })
        }
    }
}

fn block_position(dim: usize, side: usize, mut idx: usize) -> Vec<usize> {
    let mut pos = vec![0; dim];
    for p in pos.iter_mut().rev() {
        *p = idx % side;
        idx /= side;
    }
    pos
}

/// Positions of the `k`-fold block where every letter's image has the same symbol.
pub fn coincidences_at(rule: &BlockSubstitution, k: u32) -> Vec<(Vec<usize>, u16)> {
    let blocks: Vec<Vec<u16>> = (0..rule.alphabet_size() as u16)
        .map(|s| rule.power_block(s, k))
        .collect();
    let side = 1usize << k;
    (0..blocks[0].len())
        .filter(|&idx| blocks.iter().all(|b| b[idx] == blocks[0][idx]))
        .map(|idx| (block_position(rule.dim(), side, idx), blocks[0][idx]))
        .collect()
}

/// Search `k = 1..=k_max` for a coincidence.
pub fn find_coincidence(rule: &BlockSubstitution, k_max: u32) -> CoincidenceReport {
    for k in 1..=k_max {
        let hits = coincidences_at(rule, k);
        if let Some((position, letter)) = hits.first().cloned() {
            return CoincidenceReport {
                found: true,
                k,
                position,
                letter: Some(letter),
                positions: hits.into_iter().map(|(p, _)| p).collect(),
            };
        }
    }
    CoincidenceReport {
        found: false,
        k: k_max,
        position: Vec::new(),
        letter: None,
        positions: Vec::new(),
    }
}

/// A coincidence at `(k, t)` persists at `(k + 1, 2t + δ)` for every `δ`,
/// with the common symbol given by the image of the common letter.
pub fn coincidence_persists(rule: &BlockSubstitution, k: u32, position: &[usize]) -> Result<bool> {
    if position.len() != rule.dim() {
        return Err(Error::DimensionMismatch {
            expected: rule.dim(),
            found: position.len(),
        });
    }
    let side = 1usize << k;
    if position.iter().any(|&t| t >= side) {
        return Err(Error::InvalidPattern(format!(
            "position {position:?} outside the block of side {side}"
        )));
    }
    let hits = coincidences_at(rule, k);
    let Some(&(_, letter)) = hits.iter().find(|(p, _)| p == position) else {
        return Ok(false);
    };
    let next: Vec<(Vec<usize>, u16)> = coincidences_at(rule, k + 1);
    let dim = rule.dim();
    Ok((0..1usize << dim).all(|delta| {
        let target: Vec<usize> = (0..dim)
            .map(|i| 2 * position[i] + (delta >> i & 1))
            .collect();
        next.iter()
            .any(|(p, s)| *p == target && *s == rule.child(letter, delta))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substitution::{derive_rule, seed};

    #[test]
    fn matrix_columns() {
        let rule = derive_rule(1).unwrap();
        let m = substitution_matrix(&rule);
        assert_eq!(m.size(), 4);
        assert_eq!(m.column_sums(), vec![2; 4]);
        assert_eq!(m.entry(3, 0), 1);
    }

    #[test]
    fn perron_one_dimension() {
        let p = substitution_matrix(&derive_rule(1).unwrap())
            .perron_data()
            .unwrap();
        assert_eq!(p.eigenvalue, 2);
        let quarter = BigRational::new(1.into(), 4.into());
        assert_eq!(p.frequencies, vec![quarter; 4]);
    }

    #[test]
    fn identity_is_not_primitive() {
        let id = BlockSubstitution::new(1, vec![vec![0, 0], vec![1, 1]]).unwrap();
        assert_eq!(
            is_primitive(&id, 8),
            PrimitivityReport {
                primitive: false,
                k: 8
            }
        );
    }

    #[test]
    fn seed_coverage_needs_steps() {
        let rule = derive_rule(1).unwrap();
        let s = seed(1).unwrap();
        assert!(!seed_covers_alphabet(&rule, &s, 0).unwrap());
        // One step from the seed already shows all four letters.
        assert!(seed_covers_alphabet(&rule, &s, 1).unwrap());
        let rule2 = derive_rule(2).unwrap();
        assert!(!seed_covers_alphabet(&rule2, &seed(2).unwrap(), 1).unwrap());
    }

    #[test]
    fn swap_has_no_coincidence() {
        let swap = BlockSubstitution::new(1, vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert!(!find_coincidence(&swap, 10).found);
    }

    #[test]
    fn one_dimensional_coincidence() {
        let rule = derive_rule(1).unwrap();
        let r = find_coincidence(&rule, DEFAULT_COINCIDENCE_BOUND);
        assert!(r.found);
        assert_eq!(r.k, 2);
        assert!(r.contains(&[3]));
        let at3 = coincidences_at(&rule, 2)
            .into_iter()
            .find(|(p, _)| p == &[3])
            .unwrap();
        assert_eq!(at3.1, 0b01);
        assert!(coincidence_persists(&rule, 2, &[3]).unwrap());
    }

    #[test]
    fn report_json() {
        let rule = derive_rule(1).unwrap();
        let json = find_coincidence(&rule, 6).to_json().to_string();
        assert!(json.starts_with(r#"{"coincidence":{"k":2,"#), "{json}");
    }
}
