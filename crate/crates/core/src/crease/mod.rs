//! Crease signs, crease labels and the reflection calculus.
//!
//! A crease is a signed unit face of the integer grid. The first `d`-fold of
//! the sheet produces the pattern `S_d(1)`, whose creases are indexed by
//! labels `σ ∈ {−1, 0, +1}^d` with exactly one zero: the zero sits at the
//! crease axis `k`, and the remaining entries pick the sector `σ_i x_i > 0`
//! of the hyperplane `x_k = 0`.

mod fold;
mod pattern;

use std::fmt;
use std::ops::Neg;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use fold::{simulate_fold, simulate_strip_fold, FoldedStrip, Orientation, DEFAULT_FOLD_BOUND};
pub use pattern::{
    build_s1, generate_recursive, generate_recursive_with_budget, orthant_reflection, reflect,
    CellBudget, CreasePattern, FaceId,
};

/// Sign of a crease: valley (`+`) or crest (`−`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Valley,
    #[serde(rename = "-")]
    Crest,
}

impl Sign {
    pub fn from_positive(positive: bool) -> Self {
        if positive {
            Sign::Valley
        } else {
            Sign::Crest
        }
    }

    pub fn is_valley(self) -> bool {
        self == Sign::Valley
    }

    /// `+1` for a valley, `−1` for a crest.
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Valley => 1,
            Sign::Crest => -1,
        }
    }

    pub fn from_i8(v: i8) -> Option<Self> {
        match v {
            1 => Some(Sign::Valley),
            -1 => Some(Sign::Crest),
            _ => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Valley => '+',
            Sign::Crest => '-',
        }
    }

    /// Flip the sign when `odd` is true.
    pub fn flipped_if(self, odd: bool) -> Self {
        if odd {
            -self
        } else {
            self
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Valley => Sign::Crest,
            Sign::Crest => Sign::Valley,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Label of a sector crease of `S_d(1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CreaseLabel {
    components: Vec<i8>,
    axis: usize,
}

impl CreaseLabel {
    pub fn new(components: Vec<i8>) -> Result<Self> {
        if components.iter().any(|c| !(-1..=1).contains(c)) {
            return Err(Error::InvalidLabel(components));
        }
        let mut zeros = components.iter().enumerate().filter(|(_, &c)| c == 0);
        let axis = match (zeros.next(), zeros.next()) {
            (Some((k, _)), None) => k,
            _ => return Err(Error::InvalidLabel(components)),
        };
        Ok(CreaseLabel { components, axis })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// Zero-based index of the crease axis (the zero component).
    pub fn axis(&self) -> usize {
        self.axis
    }

    pub fn components(&self) -> &[i8] {
        &self.components
    }

    /// All `d · 2^{d−1}` labels of `C_d`, ordered by axis and then by
    /// the sector signs with `−1` before `+1`.
    pub fn all(dim: usize) -> Vec<CreaseLabel> {
        let mut out = Vec::with_capacity(dim << dim.saturating_sub(1));
        for axis in 0..dim {
            for bits in 0..(1usize << (dim - 1)) {
                let mut components = Vec::with_capacity(dim);
                let mut b = 0;
                for i in 0..dim {
                    if i == axis {
                        components.push(0);
                    } else {
                        components.push(if bits >> (dim - 2 - b) & 1 == 1 {
                            1
                        } else {
                            -1
                        });
                        b += 1;
                    }
                }
                out.push(CreaseLabel { components, axis });
            }
        }
        out
    }
}

/// Set of reflection axes, strictly increasing and zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ReflectionSet {
    axes: Vec<usize>,
}

impl ReflectionSet {
    pub fn new(dim: usize, axes: Vec<usize>) -> Result<Self> {
        for &a in &axes {
            if a >= dim {
                return Err(Error::AxisOutOfRange { axis: a, dim });
            }
        }
        if axes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidRule(format!(
                "reflection axes must be strictly increasing, got {axes:?}"
            )));
        }
        Ok(ReflectionSet { axes })
    }

    /// Reduce an arbitrary sequence of reflections. Reflections are
    /// commuting involutions, so only the parity of each axis matters.
    pub fn from_sequence(dim: usize, sequence: &[usize]) -> Result<Self> {
        let mut odd = vec![false; dim];
        for &a in sequence {
            if a >= dim {
                return Err(Error::AxisOutOfRange { axis: a, dim });
            }
            odd[a] = !odd[a];
        }
        Ok(ReflectionSet {
            axes: (0..dim).filter(|&i| odd[i]).collect(),
        })
    }

    /// Every subset of the axes, in increasing bitmask order.
    pub fn all(dim: usize) -> Vec<ReflectionSet> {
        (0..1usize << dim)
            .map(|mask| ReflectionSet {
                axes: (0..dim).filter(|&i| mask >> i & 1 == 1).collect(),
            })
            .collect()
    }

    pub fn axes(&self) -> &[usize] {
        &self.axes
    }

    pub fn contains(&self, axis: usize) -> bool {
        self.axes.binary_search(&axis).is_ok()
    }

    /// Number of reflection axes `≥ axis`.
    pub fn count_from(&self, axis: usize) -> usize {
        self.axes.iter().filter(|&&a| a >= axis).count()
    }
}

/// Orthant label `φ ∈ {+1, −1}^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrthantLabel {
    signs: Vec<i8>,
}

impl OrthantLabel {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidOrthant(signs));
        }
        Ok(OrthantLabel { signs })
    }

    pub fn all(dim: usize) -> Vec<OrthantLabel> {
        (0..1usize << dim)
            .map(|mask| OrthantLabel {
                signs: (0..dim)
                    .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                    .collect(),
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// The reflections making up `M(φ)`: the axes with `φ_i = −1`.
    pub fn reflections(&self) -> ReflectionSet {
        ReflectionSet {
            axes: (0..self.signs.len())
                .filter(|&i| self.signs[i] < 0)
                .collect(),
        }
    }
}

/// Sign of the crease labelled `sigma` in `S_d(1)`: the sign of the product
/// of the components before the crease axis.
pub fn crease_sign(sigma: &CreaseLabel) -> Sign {
    let negatives = sigma.components[..sigma.axis]
        .iter()
        .filter(|&&c| c < 0)
        .count();
    Sign::from_positive(negatives % 2 == 0)
}

/// Sign of the crease labelled `sigma` in `S_d(1)` after applying the
/// reflections in `a`. Each reflection on an axis `≥ k` (the crease axis)
/// flips the sign once.
pub fn reflected_sign(a: &ReflectionSet, sigma: &CreaseLabel) -> Result<Sign> {
    if let Some(&bad) = a.axes.iter().find(|&&x| x >= sigma.dim()) {
        return Err(Error::AxisOutOfRange {
            axis: bad,
            dim: sigma.dim(),
        });
    }
    let flips = a.count_from(sigma.axis);
    Ok(crease_sign(sigma).flipped_if(flips % 2 == 1))
}
