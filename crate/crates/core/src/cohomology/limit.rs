//! Direct limits `G → G → G → …` of a finitely generated abelian group
//! under one endomorphism.
//!
//! Direct limits are exact, so the torsion of the limit is the limit of the
//! torsion, and the quotient by it is the limit of the free part. The
//! extension splits: a finite group is pure-injective, and any extension
//! of a torsion-free group by it is pure.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::EndomorphismOnGroups;
use crate::error::{Error, Result};
use crate::linalg::{
    characteristic_polynomial, integer_roots, prime_factors, rank_mod_p, smith_normal_form,
    IntMatrix,
};

/// Default number of iterations for stabilization checks.
pub const DEFAULT_K_STAB: u32 = 20;

/// `Z^r ⊕ Z[1/m₁] ⊕ … ⊕ Z/t₁ ⊕ …` in canonical form.
///
/// Printed with the localized summands first (largest `m` first), then the
/// free part, then torsion in invariant-factor order, for example
/// `Z[1/4] + Z[1/2] + Z^3 + Z/2`. The trivial group prints as `0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirectLimitGroup {
    pub free_rank: usize,
    /// Ascending.
    pub localized_summands: Vec<u64>,
    /// Invariant factors, each dividing the next; no entry equals 1.
    pub torsion: Vec<BigInt>,
}

impl DirectLimitGroup {
    /// Canonicalizes: sorts the localized summands and replaces the
    /// torsion by its invariant factors.
    pub fn new(free_rank: usize, mut localized_summands: Vec<u64>, torsion: Vec<BigInt>) -> Self {
        localized_summands.sort_unstable();
        DirectLimitGroup {
            free_rank,
            localized_summands,
            torsion: invariant_factors(&torsion),
        }
    }

    pub fn trivial() -> Self {
        DirectLimitGroup::new(0, Vec::new(), Vec::new())
    }
}

fn invariant_factors(orders: &[BigInt]) -> Vec<BigInt> {
    let diagonal = IntMatrix::from_fn(orders.len(), orders.len(), |i, j| {
        if i == j {
            orders[i].clone()
        } else {
            BigInt::zero()
        }
    });
    smith_normal_form(&diagonal)
        .invariant_factors()
        .into_iter()
        .filter(|t| !t.is_one())
        .collect()
}

impl fmt::Display for DirectLimitGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .localized_summands
            .iter()
            .rev()
            .map(|m| format!("Z[1/{m}]"))
            .collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl FromStr for DirectLimitGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(DirectLimitGroup::trivial());
        }
        let bad = |part: &str| Error::Parse(format!("unrecognized summand {part:?}"));
        let mut free_rank = 0;
        let mut localized = Vec::new();
        let mut torsion = Vec::new();
        for part in s.split('+').map(str::trim) {
            if part == "Z" {
                free_rank += 1;
            } else if let Some(r) = part.strip_prefix("Z^") {
                free_rank += r.parse::<usize>().map_err(|_| bad(part))?;
            } else if let Some(m) = part.strip_prefix("Z[1/").and_then(|p| p.strip_suffix(']')) {
                let m: u64 = m.parse().map_err(|_| bad(part))?;
                if m < 2 {
                    return Err(bad(part));
                }
                localized.push(m);
            } else if let Some(t) = part.strip_prefix("Z/") {
                let t: BigInt = t.parse().map_err(|_| bad(part))?;
                if t <= BigInt::one() {
                    return Err(bad(part));
                }
                torsion.push(t);
            } else {
                return Err(bad(part));
            }
        }
        Ok(DirectLimitGroup::new(free_rank, localized, torsion))
    }
}

/// Free part handed back unclassified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitPresentation {
    /// Invariant factors of the torsion of the limit.
    pub torsion: Vec<BigInt>,
    /// Basis of the eventual image lattice, as columns.
    pub lattice: IntMatrix,
    /// The endomorphism restricted to that lattice; the free part of the
    /// limit is the direct limit of this matrix.
    pub matrix: IntMatrix,
    pub reason: String,
    /// Set when a rank sequence failed to settle within the iteration bound.
    pub inconclusive: bool,
    /// Agreement of `coker(B^k)` with a candidate group, when one was given.
    pub candidate_matches: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DirectLimit {
    Split(DirectLimitGroup),
    Presentation(LimitPresentation),
}

impl DirectLimit {
    pub fn group(&self) -> Option<&DirectLimitGroup> {
        match self {
            DirectLimit::Split(g) => Some(g),
            DirectLimit::Presentation(_) => None,
        }
    }
}

impl fmt::Display for DirectLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DirectLimit::Split(g) => write!(f, "{g}"),
            DirectLimit::Presentation(p) => {
                write!(f, "lim {} on Z^{}", p.matrix, p.matrix.rows())?;
                for t in &p.torsion {
                    write!(f, " + Z/{t}")?;
                }
                write!(f, " ({})", p.reason)
            }
        }
    }
}

/// Limit of a finite group under an endomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionLimit {
    pub factors: Vec<BigInt>,
    /// Iterations until the image stopped shrinking.
    pub steps: usize,
}

struct Lattice {
    /// Basis vectors as columns.
    basis: IntMatrix,
    /// Rows `i` of `left · v`, divided by `scale[i]`, are the coordinates of
    /// a lattice vector `v` in `basis`.
    left: IntMatrix,
    scale: Vec<BigInt>,
    index: BigInt,
}

/// Basis of the lattice spanned by the columns of a full-rank generator matrix.
fn lattice_of(generators: &IntMatrix) -> Lattice {
    let n = generators.rows();
    let s = smith_normal_form(generators);
    let scale = s.invariant_factors();
    let mut basis = s.u_inv.col_range(0, n);
    for (j, dj) in scale.iter().enumerate() {
        for i in 0..n {
            basis[(i, j)] *= dj;
        }
    }
    Lattice {
        basis,
        left: s.u,
        index: scale.iter().product(),
        scale,
    }
}

/// Limit of `⊕ Z/tᵢ` under `a`: the eventual image `aᵏ(G)`, on which `a`
/// is bijective.
pub fn torsion_limit(a: &IntMatrix, factors: &[BigInt]) -> Result<TorsionLimit> {
    let t = factors.len();
    if a.rows() != t || a.cols() != t {
        return Err(Error::Shape(format!(
            "torsion endomorphism is {}x{} for {t} generators",
            a.rows(),
            a.cols()
        )));
    }
    if t == 0 {
        return Ok(TorsionLimit {
            factors: Vec::new(),
            steps: 0,
        });
    }
    // Image lattices L_{k+1} = a·L_k + R over the relation lattice R.
    let relations = IntMatrix::from_fn(t, t, |i, j| {
        if i == j {
            factors[i].clone()
        } else {
            BigInt::zero()
        }
    });
    let mut basis = IntMatrix::identity(t);
    let mut index = BigInt::one();
    let mut steps = 0;
    loop {
        let image = a.mul(&basis)?;
        let generators = IntMatrix::from_fn(t, 2 * t, |i, j| {
            if j < t {
                image[(i, j)].clone()
            } else {
                relations[(i, j - t)].clone()
            }
        });
        let next = lattice_of(&generators);
        steps += 1;
        if next.index == index {
            let coords = next.left.mul(&relations)?;
            let coords = IntMatrix::from_fn(t, t, |i, j| coords[(i, j)].div_floor(&next.scale[i]));
            let factors = smith_normal_form(&coords)
                .invariant_factors()
                .into_iter()
                .filter(|x| !x.is_one())
                .collect();
            return Ok(TorsionLimit { factors, steps });
        }
        basis = next.basis;
        index = next.index;
    }
}

/// Saturated eventual image of `a` and the restriction of `a` to it.
fn eventual_image(a: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    let r = a.rows();
    let s = smith_normal_form(&a.pow(r as u32)?);
    let lattice = s.u_inv.col_range(0, s.rank);
    let left = s.u.row_range(0, s.rank);
    let b = left.mul(a)?.mul(&lattice)?;
    if a.mul(&lattice)? != lattice.mul(&b)? {
        return Err(Error::IllDefinedEndomorphism(
            "eventual image is not invariant".into(),
        ));
    }
    Ok((lattice, b))
}

enum FreeOutcome {
    Split { units: usize, localized: Vec<u64> },
    Unsplit { reason: String, inconclusive: bool },
}

fn classify_free(b: &IntMatrix, k_stab: u32) -> Result<FreeOutcome> {
    let n = b.rows();
    let poly = characteristic_polynomial(b)?;
    let (roots, rest) = integer_roots(&poly);
    if rest.len() != 1 {
        return Ok(FreeOutcome::Unsplit {
            reason: "characteristic polynomial does not split over the integers".into(),
            inconclusive: false,
        });
    }
    let mut supports: Vec<Vec<u64>> = Vec::new();
    for r in &roots {
        if r.is_zero() {
            return Err(Error::IllDefinedEndomorphism(
                "restriction to the eventual image is singular".into(),
            ));
        }
        let Some(p) = prime_factors(r) else {
            return Ok(FreeOutcome::Unsplit {
                reason: format!("eigenvalue {r} too large to factor"),
                inconclusive: false,
            });
        };
        supports.push(p);
    }
    let mut chain = supports.clone();
    chain.sort_by_key(Vec::len);
    if chain
        .windows(2)
        .any(|w| !w[0].iter().all(|p| w[1].contains(p)))
    {
        return Ok(FreeOutcome::Unsplit {
            reason: "eigenvalue prime supports are not nested".into(),
            inconclusive: false,
        });
    }
    let mut primes: Vec<u64> = supports.iter().flatten().copied().collect();
    primes.sort_unstable();
    primes.dedup();
    for &p in &primes {
        let expected = roots
            .iter()
            .filter(|r| !r.is_multiple_of(&BigInt::from(p)))
            .count();
        let mut power = IntMatrix::identity(n);
        let mut ranks = Vec::with_capacity(k_stab as usize);
        for _ in 0..k_stab.max(2) {
            power = power.mul(b)?;
            ranks.push(rank_mod_p(&power, p));
        }
        let last = ranks[ranks.len() - 1];
        if last != ranks[ranks.len() - 2] || last != expected {
            return Ok(FreeOutcome::Unsplit {
                reason: format!("ranks of powers modulo {p} did not settle at {expected}"),
                inconclusive: true,
            });
        }
    }
    let mut units = 0;
    let mut localized = Vec::new();
    for r in &roots {
        let m = r.abs();
        if m.is_one() {
            units += 1;
        } else {
            localized.push(m.to_u64().expect("factored above"));
        }
    }
    Ok(FreeOutcome::Split { units, localized })
}

fn split_parts(e: &EndomorphismOnGroups) -> Result<(TorsionLimit, IntMatrix, IntMatrix)> {
    let torsion = torsion_limit(&e.torsion_block(), e.torsion())?;
    let a = e.free_block();
    if a.rows() == 0 {
        return Ok((torsion, IntMatrix::zeros(0, 0), IntMatrix::zeros(0, 0)));
    }
    let (lattice, b) = eventual_image(&a)?;
    Ok((torsion, lattice, b))
}

/// Direct limit of the group under its endomorphism.
///
/// The free part is classified when the restriction `B` of the map to its
/// eventual image has integer eigenvalues whose prime supports are nested,
/// and for every prime `p | det B` the rank of `Bᵏ` modulo `p` settles, by
/// `k = k_stab`, at the number of eigenvalues prime to `p`. Each eigenvalue
/// `λ` then contributes `Z` if `|λ| = 1` and `Z[1/|λ|]` otherwise.
pub fn direct_limit(e: &EndomorphismOnGroups, k_stab: u32) -> Result<DirectLimit> {
    let (torsion, lattice, b) = split_parts(e)?;
    if b.rows() == 0 {
        return Ok(DirectLimit::Split(DirectLimitGroup::new(
            0,
            Vec::new(),
            torsion.factors,
        )));
    }
    Ok(match classify_free(&b, k_stab)? {
        FreeOutcome::Split { units, localized } => {
            DirectLimit::Split(DirectLimitGroup::new(units, localized, torsion.factors))
        }
        FreeOutcome::Unsplit {
            reason,
            inconclusive,
        } => DirectLimit::Presentation(LimitPresentation {
            torsion: torsion.factors,
            lattice,
            matrix: b,
            reason,
            inconclusive,
            candidate_matches: None,
        }),
    })
}

fn cokernel_factors(m: &IntMatrix) -> Vec<BigInt> {
    let s = smith_normal_form(m);
    let mut out: Vec<BigInt> = s
        .invariant_factors()
        .into_iter()
        .filter(|x| !x.is_one())
        .collect();
    out.extend((s.rank..m.rows()).map(|_| BigInt::zero()));
    out
}

/// Like [`direct_limit`], and in presentation mode also compares the
/// result with `candidate`: the torsion must agree, and `coker(Bᵏ)` must
/// have the same invariant factors as for the candidate's model map for
/// every `k ≤ k_stab`.
pub fn direct_limit_against(
    e: &EndomorphismOnGroups,
    k_stab: u32,
    candidate: &DirectLimitGroup,
) -> Result<DirectLimit> {
    let mut result = direct_limit(e, k_stab)?;
    if let DirectLimit::Presentation(p) = &mut result {
        let model: Vec<i64> = std::iter::repeat_n(1i64, candidate.free_rank)
            .chain(candidate.localized_summands.iter().map(|&m| m as i64))
            .collect();
        let mut matches = model.len() == p.matrix.rows() && p.torsion == candidate.torsion;
        if matches {
            let model = IntMatrix::diagonal(&model);
            let mut bk = IntMatrix::identity(model.rows());
            let mut mk = IntMatrix::identity(model.rows());
            for _ in 0..k_stab {
                bk = bk.mul(&p.matrix)?;
                mk = mk.mul(&model)?;
                if cokernel_factors(&bk) != cokernel_factors(&mk) {
                    matches = false;
                    break;
                }
            }
        }
        p.candidate_matches = Some(matches);
    }
    Ok(result)
}
