//! Čech cohomology of the paperfolding hull for `d ≤ 2`.
//!
//! The hull is the inverse limit of Anderson–Putnam complexes built from
//! collared tiles, so its cohomology is the direct limit of the complex's
//! cohomology under the map induced by the substitution. The pipeline is
//! [`collar_letters`], [`ap_complex`], [`cohomology_of_complex`] and
//! [`direct_limit`], all in exact integer arithmetic.

mod approximant;
mod collar;
mod limit;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{smith_normal_form, IntMatrix};
use crate::spectral::{is_primitive, DEFAULT_PRIMITIVITY_BOUND};
use crate::substitution::{derive_rule, seed};

pub use approximant::ap_complex;
pub use collar::{collar_letters, CollaredRule, MAX_COLLAR_STEPS};
pub use limit::{
    direct_limit, direct_limit_against, torsion_limit, DirectLimit, DirectLimitGroup,
    LimitPresentation, TorsionLimit, DEFAULT_K_STAB,
};

/// Finite cell complex given by its cell counts and boundary matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellComplex {
    sizes: Vec<usize>,
    // boundaries[q] is ∂_{q+1}: C_{q+1} → C_q, of shape sizes[q] × sizes[q+1].
    boundaries: Vec<IntMatrix>,
}

impl CellComplex {
    /// `boundaries[q]` is the boundary map from `(q+1)`-cells to `q`-cells.
    pub fn new(sizes: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self> {
        if sizes.is_empty() || boundaries.len() + 1 != sizes.len() {
            return Err(Error::InvalidComplex(format!(
                "{} cell dimensions need {} boundary maps, got {}",
                sizes.len(),
                sizes.len().saturating_sub(1),
                boundaries.len()
            )));
        }
        for (q, b) in boundaries.iter().enumerate() {
            if b.rows() != sizes[q] || b.cols() != sizes[q + 1] {
                return Err(Error::InvalidComplex(format!(
                    "boundary from dimension {} has shape {}x{}, expected {}x{}",
                    q + 1,
                    b.rows(),
                    b.cols(),
                    sizes[q],
                    sizes[q + 1]
                )));
            }
        }
        for q in 1..boundaries.len() {
            if !boundaries[q - 1].mul(&boundaries[q])?.is_zero() {
                return Err(Error::InvalidComplex(format!(
                    "boundary of boundary is nonzero in dimension {}",
                    q + 1
                )));
            }
        }
        Ok(CellComplex { sizes, boundaries })
    }

    /// Highest cell dimension.
    pub fn dim(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// The boundary map `∂_q` for `1 ≤ q ≤ dim`.
    pub fn boundary(&self, q: usize) -> &IntMatrix {
        &self.boundaries[q - 1]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.sizes
            .iter()
            .enumerate()
            .map(|(q, &n)| if q % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }
}

/// A chain map of a complex to itself, one matrix per dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellularMap {
    chain: Vec<IntMatrix>,
}

impl CellularMap {
    /// Checks shapes and that the maps commute with the boundary.
    pub fn new(complex: &CellComplex, chain: Vec<IntMatrix>) -> Result<Self> {
        if chain.len() != complex.sizes.len() {
            return Err(Error::InvalidComplex(
                "one chain matrix per dimension required".into(),
            ));
        }
        for (q, f) in chain.iter().enumerate() {
            let n = complex.sizes[q];
            if f.rows() != n || f.cols() != n {
                return Err(Error::InvalidComplex(format!(
                    "chain map in dimension {q} has shape {}x{}, expected {n}x{n}",
                    f.rows(),
                    f.cols()
                )));
            }
        }
        for q in 1..chain.len() {
            let d = complex.boundary(q);
            if d.mul(&chain[q])? != chain[q - 1].mul(d)? {
                return Err(Error::InvalidComplex(format!(
                    "chain map does not commute with the boundary in dimension {q}"
                )));
            }
        }
        Ok(CellularMap { chain })
    }

    pub fn matrix(&self, q: usize) -> &IntMatrix {
        &self.chain[q]
    }
}

/// An endomorphism of `Z^r ⊕ Z/t₁ ⊕ … ⊕ Z/t_s` in the standard
/// generators, free generators first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndomorphismOnGroups {
    free_rank: usize,
    torsion: Vec<BigInt>,
    matrix: IntMatrix,
}

impl EndomorphismOnGroups {
    /// Torsion rows are reduced modulo their factor. Fails unless the
    /// matrix maps the relations into themselves.
    pub fn new(free_rank: usize, torsion: Vec<BigInt>, matrix: IntMatrix) -> Result<Self> {
        let n = free_rank + torsion.len();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::Shape(format!(
                "endomorphism of a group on {n} generators given as {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if let Some(t) = torsion.iter().find(|t| *t <= &BigInt::one()) {
            return Err(Error::IllDefinedEndomorphism(format!("torsion factor {t}")));
        }
        let mut matrix = matrix;
        for (a, t) in torsion.iter().enumerate() {
            let row = free_rank + a;
            for j in 0..n {
                matrix[(row, j)] = matrix[(row, j)].mod_floor(t);
            }
        }
        for (b, t) in torsion.iter().enumerate() {
            let col = free_rank + b;
            for i in 0..free_rank {
                if !matrix[(i, col)].is_zero() {
                    return Err(Error::IllDefinedEndomorphism(format!(
                        "torsion generator {b} maps to a free generator"
                    )));
                }
            }
            for (a, s) in torsion.iter().enumerate() {
                let row = free_rank + a;
                if !(&matrix[(row, col)] * t).is_multiple_of(s) {
                    return Err(Error::IllDefinedEndomorphism(format!(
                        "order {t} generator sent to an element of order not dividing it"
                    )));
                }
            }
        }
        Ok(EndomorphismOnGroups {
            free_rank,
            torsion,
            matrix,
        })
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn free_block(&self) -> IntMatrix {
        let idx: Vec<usize> = (0..self.free_rank).collect();
        self.matrix.select(&idx, &idx)
    }

    pub fn torsion_block(&self) -> IntMatrix {
        let idx: Vec<usize> = (self.free_rank..self.matrix.rows()).collect();
        self.matrix.select(&idx, &idx)
    }

    /// The group itself, without the map.
    pub fn group(&self) -> DirectLimitGroup {
        DirectLimitGroup::new(self.free_rank, Vec::new(), self.torsion.clone())
    }
}

/// Cohomology of a complex with the endomorphisms induced by a chain map.
///
/// Uses the cochain complex `δ^q = ∂_{q+1}ᵀ`. For each `q`, a basis of
/// `ker δ^q` is read off a Smith form, the image of `δ^{q−1}` is expressed
/// in it, and a second Smith form of that relation matrix gives the
/// invariant factors together with adapted generators.
pub fn cohomology_of_complex(
    complex: &CellComplex,
    map: &CellularMap,
) -> Result<Vec<EndomorphismOnGroups>> {
    let top = complex.dim();
    let mut out = Vec::with_capacity(top + 1);
    for q in 0..=top {
        let n = complex.sizes[q];
        let (kernel, kernel_left_inverse) = if q < top {
            let cobound = complex.boundary(q + 1).transpose();
            let s = smith_normal_form(&cobound);
            (s.v.col_range(s.rank, n), s.v_inv.row_range(s.rank, n))
        } else {
            (IntMatrix::identity(n), IntMatrix::identity(n))
        };
        let z = kernel.cols();
        let relations = if q > 0 {
            let prev = complex.boundary(q).transpose();
            let x = kernel_left_inverse.mul(&prev)?;
            if kernel.mul(&x)? != prev {
                return Err(Error::InvalidComplex(format!(
                    "coboundaries in degree {q} are not cocycles"
                )));
            }
            x
        } else {
            IntMatrix::zeros(z, 0)
        };
        let pullback = map.matrix(q).transpose();
        let on_kernel = kernel_left_inverse.mul(&pullback)?.mul(&kernel)?;
        if kernel.mul(&on_kernel)? != pullback.mul(&kernel)? {
            return Err(Error::IllDefinedEndomorphism(format!(
                "pullback does not preserve cocycles in degree {q}"
            )));
        }
        let s = smith_normal_form(&relations);
        let adapted = s.u.mul(&on_kernel)?.mul(&s.u_inv)?;
        let diag: Vec<BigInt> = (0..z)
            .map(|i| {
                if i < s.rank {
                    s.d[(i, i)].clone()
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        let free: Vec<usize> = (0..z).filter(|&i| diag[i].is_zero()).collect();
        let torsion: Vec<usize> = (0..z)
            .filter(|&i| !diag[i].is_zero() && !diag[i].is_one())
            .collect();
        let order: Vec<usize> = free.iter().chain(&torsion).copied().collect();
        out.push(EndomorphismOnGroups::new(
            free.len(),
            torsion.iter().map(|&i| diag[i].clone()).collect(),
            adapted.select(&order, &order),
        )?);
    }
    Ok(out)
}

/// The full pipeline for the paperfolding substitution in dimension 1 or 2:
/// one direct-limit group per degree.
pub fn paperfolding_cohomology(dim: usize) -> Result<Vec<DirectLimit>> {
    if !(1..=2).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    let rule = derive_rule(dim)?;
    if !is_primitive(&rule, DEFAULT_PRIMITIVITY_BOUND).primitive {
        return Err(Error::NotPrimitive(DEFAULT_PRIMITIVITY_BOUND as usize));
    }
    let collared = collar_letters(&rule, &seed(dim)?)?;
    let (complex, map) = ap_complex(&collared)?;
    cohomology_of_complex(&complex, &map)?
        .iter()
        .map(|e| direct_limit(e, DEFAULT_K_STAB))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn groups(c: &CellComplex) -> Vec<String> {
        let id = CellularMap::new(
            c,
            c.sizes().iter().map(|&n| IntMatrix::identity(n)).collect(),
        )
        .unwrap();
        cohomology_of_complex(c, &id)
            .unwrap()
            .iter()
            .map(|e| e.group().to_string())
            .collect()
    }

    #[test]
    fn circle() {
        let c = CellComplex::new(vec![1, 1], vec![m(&[vec![0]])]).unwrap();
        assert_eq!(groups(&c), vec!["Z", "Z"]);
        assert_eq!(c.euler_characteristic(), 0);
    }

    #[test]
    fn torus() {
        let c = CellComplex::new(
            vec![1, 2, 1],
            vec![m(&[vec![0, 0]]), m(&[vec![0], vec![0]])],
        )
        .unwrap();
        assert_eq!(groups(&c), vec!["Z", "Z^2", "Z"]);
    }

    #[test]
    fn projective_plane() {
        // One cell in each dimension, the 2-cell attached by degree 2.
        let c = CellComplex::new(vec![1, 1, 1], vec![m(&[vec![0]]), m(&[vec![2]])]).unwrap();
        assert_eq!(groups(&c), vec!["Z", "0", "Z/2"]);
    }

    #[test]
    fn rejects_nonzero_square() {
        let r = CellComplex::new(vec![1, 1, 1], vec![m(&[vec![1]]), m(&[vec![1]])]);
        assert!(matches!(r, Err(Error::InvalidComplex(_))));
    }

    #[test]
    fn doubling_map_on_circle() {
        let c = CellComplex::new(vec![1, 1], vec![m(&[vec![0]])]).unwrap();
        let f = CellularMap::new(&c, vec![m(&[vec![1]]), m(&[vec![2]])]).unwrap();
        let h = cohomology_of_complex(&c, &f).unwrap();
        assert_eq!(
            direct_limit(&h[1], DEFAULT_K_STAB).unwrap().to_string(),
            "Z[1/2]"
        );
    }

    #[test]
    fn endomorphism_validation() {
        let t = vec![BigInt::from(2)];
        assert!(EndomorphismOnGroups::new(1, t.clone(), m(&[vec![1, 1], vec![0, 1]])).is_err());
        let e = EndomorphismOnGroups::new(1, t, m(&[vec![3, 0], vec![5, 3]])).unwrap();
        assert_eq!(e.torsion_block(), m(&[vec![1]]));
    }
}
