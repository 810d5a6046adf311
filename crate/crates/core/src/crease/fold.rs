//! Physical folding simulations, independent of the recursion.
//!
//! Each fold bends the half with negative coordinates over onto the positive
//! half, upwards. A crease formed by a fold is a valley when the layer that
//! stays in place faces up at that moment, and a crest otherwise.

use super::pattern::{CellBudget, CreasePattern};
use super::Sign;
use crate::error::{Error, Result};

/// Largest strip-folding depth accepted by [`simulate_strip_fold`].
pub const DEFAULT_FOLD_BOUND: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    FaceUp,
    FaceDown,
}

impl Orientation {
    fn flipped(self) -> Self {
        match self {
            Orientation::FaceUp => Orientation::FaceDown,
            Orientation::FaceDown => Orientation::FaceUp,
        }
    }
}

/// Orientation of every unit cell of a strip after folding it flat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldedStrip {
    /// Position of the leftmost cell.
    pub first: i64,
    pub orientations: Vec<Orientation>,
    /// Bottom-to-top order of the cells in the final pile.
    pub pile: Vec<i64>,
}

impl FoldedStrip {
    pub fn orientation_at(&self, x: i64) -> Option<Orientation> {
        usize::try_from(x - self.first)
            .ok()
            .and_then(|i| self.orientations.get(i).copied())
    }
}

/// Fold a strip of `2^n` unit cells (positions `−2^{n−1} … 2^{n−1}−1`) in
/// half `n` times, left onto right, and report each cell's orientation.
pub fn simulate_strip_fold(n: u32) -> Result<FoldedStrip> {
    if n > DEFAULT_FOLD_BOUND {
        return Err(Error::BudgetExceeded {
            requested: 1u128 << n,
            budget: 1 << DEFAULT_FOLD_BOUND,
        });
    }
    let len = 1usize << n;
    let first = -((len / 2) as i64);
    // Each column holds a stack of (cell, orientation), bottom layer first.
    let mut columns: Vec<Vec<(i64, Orientation)>> = (0..len)
        .map(|i| vec![(first + i as i64, Orientation::FaceUp)])
        .collect();
    while columns.len() > 1 {
        let half = columns.len() / 2;
        let right = columns.split_off(half);
        let left = columns;
        columns = right;
        for (j, stack) in left.into_iter().enumerate() {
            let target = half - 1 - j;
            columns[target].extend(stack.into_iter().rev().map(|(cell, o)| (cell, o.flipped())));
        }
    }
    let mut orientations = vec![Orientation::FaceUp; len];
    let pile: Vec<i64> = columns[0].iter().map(|&(cell, _)| cell).collect();
    for &(cell, o) in &columns[0] {
        orientations[(cell - first) as usize] = o;
    }
    Ok(FoldedStrip {
        first,
        orientations,
        pile,
    })
}

/// Fold a `d`-dimensional sheet `n` times along every axis (axis order
/// `1, …, d` within each round), recording the sign of every crease where
/// it forms. The result is an independent reconstruction of `S_d(n)`.
pub fn simulate_fold(dim: usize, n: u32) -> Result<CreasePattern> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if n >= 63 {
        return Err(Error::BudgetExceeded {
            requested: u128::MAX,
            budget: CellBudget::default().max_cells,
        });
    }
    CellBudget::default().check(dim, 1u64 << n)?;
    let side = 1i64 << n;
    let half_side = side / 2;
    let extent = if n == 0 { 0 } else { half_side };
    let mut pattern = CreasePattern::new(dim, extent)?;
    if n == 0 {
        return Ok(pattern);
    }

    struct Cell {
        origin: Vec<i64>,
        column: Vec<i64>,
        mirrored: Vec<bool>,
        up: bool,
    }
    let count = (side as usize).pow(dim as u32);
    let mut cells: Vec<Cell> = (0..count)
        .map(|mut idx| {
            let mut origin = vec![0i64; dim];
            for c in origin.iter_mut().rev() {
                *c = (idx % side as usize) as i64 - half_side;
                idx /= side as usize;
            }
            let column = origin.iter().map(|&x| x + half_side).collect();
            Cell {
                origin,
                column,
                mirrored: vec![false; dim],
                up: true,
            }
        })
        .collect();

    let mut lengths = vec![side; dim];
    let mut corner = vec![0i64; dim];
    for _ in 0..n {
        for axis in 0..dim {
            let half = lengths[axis] / 2;
            for cell in &cells {
                if cell.column[axis] == half {
                    corner.copy_from_slice(&cell.origin);
                    if cell.mirrored[axis] {
                        corner[axis] += 1;
                    }
                    pattern
                        .insert(
                            super::FaceId::new(axis, corner.clone()),
                            Sign::from_positive(cell.up),
                        )
                        .map_err(|e| Error::InvalidComplex(format!("fold produced {e}")))?;
                }
            }
            for cell in &mut cells {
                if cell.column[axis] < half {
                    cell.column[axis] = lengths[axis] - 1 - cell.column[axis] - half;
                    cell.mirrored[axis] = !cell.mirrored[axis];
                    cell.up = !cell.up;
                } else {
                    cell.column[axis] -= half;
                }
            }
            lengths[axis] = half;
        }
    }
    Ok(pattern)
}
