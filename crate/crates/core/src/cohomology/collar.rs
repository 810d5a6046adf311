//! One-step collaring of a block substitution.
//!
//! A collared tile is a letter together with its `3^d − 1` neighbours, as
//! seen in the fixed point grown from a seed. The substitution lifts to
//! collared tiles because the collar of each child lies inside the image of
//! the parent's `3^d` patch.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::substitution::{substitute, BlockSubstitution, SymbolicPattern};

/// Substitution steps tried before declaring that collaring does not close.
pub const MAX_COLLAR_STEPS: usize = 12;

/// Collared alphabet, the induced rule on it, and the observed adjacencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollaredRule {
    dim: usize,
    /// Each tile's `3^d` patch in row-major order over offsets `{−1, 0, 1}^d`.
    tiles: Vec<Vec<u16>>,
    rule: BlockSubstitution,
    /// `(axis, i, j)`: tile `j` sits one step after tile `i` along `axis`.
    adjacencies: Vec<(usize, usize, usize)>,
    steps: usize,
}

impl CollaredRule {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn tile(&self, i: usize) -> &[u16] {
        &self.tiles[i]
    }

    /// The letter at the centre of collared tile `i`.
    pub fn underlying(&self, i: usize) -> u16 {
        self.tiles[i][self.tiles[i].len() / 2]
    }

    /// The induced substitution on collared tile indices.
    pub fn rule(&self) -> &BlockSubstitution {
        &self.rule
    }

    pub fn adjacencies(&self) -> &[(usize, usize, usize)] {
        &self.adjacencies
    }

    /// Substitution steps from the seed needed for the sets to settle.
    pub fn steps(&self) -> usize {
        self.steps
    }
}

fn offsets(dim: usize) -> Vec<Vec<i64>> {
    (0..3usize.pow(dim as u32))
        .map(|mut i| {
            let mut o = vec![0i64; dim];
            for c in o.iter_mut().rev() {
                *c = (i % 3) as i64 - 1;
                i /= 3;
            }
            o
        })
        .collect()
}

struct Observation {
    tiles: BTreeSet<Vec<u16>>,
    pairs: BTreeSet<(usize, Vec<u16>, Vec<u16>)>,
}

fn observe(p: &SymbolicPattern, offs: &[Vec<i64>]) -> Observation {
    let dim = p.dim();
    let mut collars: HashMap<Vec<i64>, Vec<u16>> = HashMap::new();
    let mut probe = vec![0i64; dim];
    p.for_each_cell(|pos, _| {
        let patch: Option<Vec<u16>> = offs
            .iter()
            .map(|o| {
                for i in 0..dim {
                    probe[i] = pos[i] + o[i];
                }
                p.get(&probe)
            })
            .collect();
        if let Some(patch) = patch {
            collars.insert(pos.to_vec(), patch);
        }
    });
    let mut pairs = BTreeSet::new();
    for (pos, patch) in &collars {
        for axis in 0..dim {
            let mut next = pos.clone();
            next[axis] += 1;
            if let Some(other) = collars.get(&next) {
                pairs.insert((axis, patch.clone(), other.clone()));
            }
        }
    }
    Observation {
        tiles: collars.into_values().collect(),
        pairs,
    }
}

/// Children of a collared tile: the child at `δ` and each of its
/// neighbours at `δ + o` come from the parent patch cell `⌊(δ + o)/2⌋`.
fn collared_children(rule: &BlockSubstitution, patch: &[u16], offs: &[Vec<i64>]) -> Vec<Vec<u16>> {
    let dim = rule.dim();
    (0..1usize << dim)
        .map(|delta| {
            offs.iter()
                .map(|o| {
                    let mut cell = 0usize;
                    let mut sub = 0usize;
                    for (i, &oi) in o.iter().enumerate() {
                        let x = (delta >> i & 1) as i64 + oi;
                        cell = cell * 3 + (x.div_euclid(2) + 1) as usize;
                        sub |= (x.rem_euclid(2) as usize) << i;
                    }
                    rule.child(patch[cell], sub)
                })
                .collect()
        })
        .collect()
}

/// Grow the fixed point from `seed` until the collared tiles and their
/// adjacencies stop changing and the collared tiles are closed under the
/// induced substitution.
pub fn collar_letters(rule: &BlockSubstitution, seed: &SymbolicPattern) -> Result<CollaredRule> {
    if rule.dim() != seed.dim() {
        return Err(Error::DimensionMismatch {
            expected: rule.dim(),
            found: seed.dim(),
        });
    }
    let dim = rule.dim();
    let offs = offsets(dim);
    let mut p = seed.clone();
    let mut previous: Option<(usize, usize)> = None;
    for step in 1..=MAX_COLLAR_STEPS {
        p = substitute(&p, rule)?;
        let obs = observe(&p, &offs);
        let sizes = (obs.tiles.len(), obs.pairs.len());
        if previous != Some(sizes) {
            previous = Some(sizes);
            continue;
        }
        let tiles: Vec<Vec<u16>> = obs.tiles.into_iter().collect();
        if tiles.len() > u16::MAX as usize {
            return Err(Error::UnsupportedDimension(dim));
        }
        let index: HashMap<&[u16], usize> = tiles
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_slice(), i))
            .collect();
        let mut images = Vec::with_capacity(tiles.len());
        let mut closed = true;
        for t in &tiles {
            let children = collared_children(rule, t, &offs);
            let image: Option<Vec<u16>> = children
                .iter()
                .map(|c| index.get(c.as_slice()).map(|&i| i as u16))
                .collect();
            match image {
                Some(img) => images.push(img),
                None => {
                    closed = false;
                    break;
                }
            }
        }
        if !closed {
            continue;
        }
        let adjacencies = obs
            .pairs
            .iter()
            .map(|(axis, a, b)| (*axis, index[a.as_slice()], index[b.as_slice()]))
            .collect();
        let collared = BlockSubstitution::new(dim, images)?;
        return Ok(CollaredRule {
            dim,
            tiles,
            rule: collared,
            adjacencies,
            steps: step,
        });
    }
    Err(Error::CollaringNotClosed(MAX_COLLAR_STEPS))
}
