//! Pattern complexity: distinct cubic windows of the crease structure.
//!
//! A window of side `n` at `x` is the set of every crease whose face corner
//! lies in the box `[x, x + n)^d`, translated to the origin. For `d = 1`
//! this is the ordinary factor complexity of the folding sequence.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::crease::{generate_recursive, CreasePattern, Sign};
use crate::error::{Error, Result};
use crate::substitution::{derive_rule, seed, substitute, SymbolicPattern};

/// Largest generation tried by [`count_stabilized`] before giving up.
pub const MAX_GENERATION: u32 = 30;

/// Canonical encoding of a window: one bit per face (set for a crest),
/// ordered by axis and then by corner in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatternKey(Vec<u64>);

impl PatternKey {
    pub fn words(&self) -> &[u64] {
        &self.0
    }
}

/// Dense per-axis sign grids over the cell box `[−h, h)^d`.
struct SignGrid {
    dim: usize,
    h: i64,
    side: usize,
    // 0 valley, 1 crest, 2 absent
    axes: Vec<Vec<u8>>,
}

impl SignGrid {
    fn new(p: &CreasePattern) -> Self {
        let dim = p.dim();
        let h = p.extent();
        let side = (2 * h) as usize;
        let volume = side.pow(dim as u32);
        let mut axes = vec![vec![2u8; volume]; dim];
        p.for_each_face(|axis, corner, sign| {
            if corner.iter().all(|&c| c >= -h && c < h) {
                let idx = corner
                    .iter()
                    .fold(0usize, |acc, &c| acc * side + (c + h) as usize);
                axes[axis][idx] = (sign == Sign::Crest) as u8;
            }
        });
        SignGrid { dim, h, side, axes }
    }

    /// Range of valid window origins along each axis: a window must not
    /// touch the outer edge of the sheet, which carries no crease.
    fn origin_range(&self, n: usize) -> Option<(i64, i64)> {
        let lo = -self.h + 1;
        let hi = self.h - n as i64;
        (lo <= hi).then_some((lo, hi))
    }

    fn key(&self, origin: &[i64], offsets: &[usize]) -> PatternKey {
        let mut words = vec![0u64; (self.dim * offsets.len()).div_ceil(64)];
        let base = origin
            .iter()
            .fold(0usize, |acc, &c| acc * self.side + (c + self.h) as usize);
        let mut bit = 0;
        for grid in &self.axes {
            for &off in offsets {
                let v = grid[base + off];
                debug_assert!(v < 2, "window reaches a missing face");
                if v == 1 {
                    words[bit / 64] |= 1 << (bit % 64);
                }
                bit += 1;
            }
        }
        PatternKey(words)
    }

    fn window_offsets(&self, n: usize) -> Vec<usize> {
        let count = n.pow(self.dim as u32);
        (0..count)
            .map(|mut i| {
                let mut digits = vec![0usize; self.dim];
                for d in digits.iter_mut().rev() {
                    *d = i % n;
                    i /= n;
                }
                digits.iter().fold(0usize, |acc, &x| acc * self.side + x)
            })
            .collect()
    }
}

/// Distinct window keys of side `n` in a crease pattern.
pub fn window_keys(p: &CreasePattern, n: usize) -> Result<HashSet<PatternKey>> {
    if n == 0 {
        return Err(Error::WindowTooLarge { window: 0, side: 0 });
    }
    let grid = SignGrid::new(p);
    let (lo, hi) = grid.origin_range(n).ok_or(Error::WindowTooLarge {
        window: n,
        side: grid.side,
    })?;
    let offsets = grid.window_offsets(n);
    let span = (hi - lo + 1) as usize;
    let mut keys = HashSet::new();
    let mut origin = vec![0i64; grid.dim];
    for i in 0..span.pow(grid.dim as u32) {
        let mut r = i;
        for o in origin.iter_mut().rev() {
            *o = lo + (r % span) as i64;
            r /= span;
        }
        keys.insert(grid.key(&origin, &offsets));
    }
    Ok(keys)
}

/// Number of distinct side-`n` windows in `S_d(m)`.
pub fn count_patterns(dim: usize, n: usize, m: u32) -> Result<usize> {
    let p = generate_recursive(dim, m)?;
    Ok(window_keys(&p, n)?.len())
}

/// Result of growing the generation until the window count settles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stabilization {
    /// `count(generation) = count(generation + 1)`.
    Stable { count: usize, generation: u32 },
    /// The cell budget ran out first; the last two counts differ.
    Unstabilized {
        previous: usize,
        last: usize,
        generation: u32,
    },
}

impl Stabilization {
    pub fn count(&self) -> usize {
        match *self {
            Stabilization::Stable { count, .. } => count,
            Stabilization::Unstabilized { last, .. } => last,
        }
    }

    pub fn is_stable(&self) -> bool {
        matches!(self, Stabilization::Stable { .. })
    }

    pub fn generation(&self) -> u32 {
        match *self {
            Stabilization::Stable { generation, .. }
            | Stabilization::Unstabilized { generation, .. } => generation,
        }
    }
}

/// Count side-`n` windows, starting from the smallest generation `m`
/// with `2^m ≥ 4n` and stopping once `count(m) = count(m + 1)`.
pub fn count_stabilized(dim: usize, n: usize) -> Result<Stabilization> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if n == 0 {
        return Err(Error::WindowTooLarge { window: 0, side: 0 });
    }
    let mut m = 1;
    while (1u64 << m) < 4 * n as u64 {
        m += 1;
    }
    let mut previous = count_patterns(dim, n, m)?;
    loop {
        let next = match count_patterns(dim, n, m + 1) {
            Ok(c) => c,
            Err(Error::BudgetExceeded { .. }) => {
                return Ok(Stabilization::Unstabilized {
                    previous,
                    last: previous,
                    generation: m,
                })
            }
            Err(e) => return Err(e),
        };
        if next == previous {
            return Ok(Stabilization::Stable {
                count: next,
                generation: m,
            });
        }
        if m + 1 >= MAX_GENERATION {
            return Ok(Stabilization::Unstabilized {
                previous,
                last: next,
                generation: m + 1,
            });
        }
        previous = next;
        m += 1;
    }
}

fn floor_log2(x: u64) -> u32 {
    63 - x.leading_zeros()
}

/// The closed form `12n² − 4 − 16·4^⌊log₂(n−1)⌋ + 24n·2^⌊log₂(n−1)⌋`, valid for `n ≥ 3`.
pub fn p2_closed_form(n: u64) -> Result<u64> {
    if n < 3 {
        return Err(Error::FormulaRange(n));
    }
    let p = 1u128 << floor_log2(n - 1);
    let n = n as u128;
    let value = 12 * n * n + 24 * n * p - 4 - 16 * p * p;
    u64::try_from(value).map_err(|_| Error::FormulaRange(n as u64))
}

/// The one-dimensional value `4n`, valid for `n ≥ 7`.
pub fn p1_closed_form(n: u64) -> Result<u64> {
    if n < 7 {
        return Err(Error::FormulaRange(n));
    }
    n.checked_mul(4).ok_or(Error::FormulaRange(n))
}

/// Closed-form value for dimension `dim`, when one is known and `n` is in range.
pub fn closed_form(dim: usize, n: u64) -> Option<u64> {
    match dim {
        1 => p1_closed_form(n).ok(),
        2 => p2_closed_form(n).ok(),
        _ => None,
    }
}

fn distinct_blocks(p: &SymbolicPattern) -> HashSet<Vec<u16>> {
    let dim = p.dim();
    let shape = p.shape();
    let mut out = HashSet::new();
    let mut pos = vec![0i64; dim];
    let mut probe = vec![0i64; dim];
    let starts: usize = shape.iter().map(|&s| s.saturating_sub(1)).product();
    for i in 0..starts {
        let mut r = i;
        for a in (0..dim).rev() {
            let span = shape[a] - 1;
            pos[a] = p.origin()[a] + (r % span) as i64;
            r /= span;
        }
        let block: Vec<u16> = (0..1usize << dim)
            .map(|delta| {
                for a in 0..dim {
                    probe[a] = pos[a] + ((delta >> (dim - 1 - a)) & 1) as i64;
                }
                p.get(&probe).expect("inside the pattern")
            })
            .collect();
        out.insert(block);
    }
    out
}

/// Number of distinct `2 × … × 2` blocks of letters (at any offset) in the
/// paperfolding fixed point, grown from the seed until the set is stable.
pub fn letter_block_count(dim: usize) -> Result<usize> {
    let rule = derive_rule(dim)?;
    let mut p = seed(dim)?;
    let mut last = distinct_blocks(&p).len();
    loop {
        p = substitute(&p, &rule)?;
        let now = distinct_blocks(&p).len();
        if now == last && p.shape()[0] >= 16 {
            return Ok(now);
        }
        last = now;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRow {
    pub n: usize,
    pub count: usize,
    /// `count / n^d`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    pub dim: usize,
    /// Distinct `2^d` letter blocks.
    pub constant: usize,
    pub rows: Vec<GrowthRow>,
    pub max_ratio: f64,
    /// Every count is at most `constant · n^d` and every count stabilized.
    pub holds: bool,
}

/// Check `count_stabilized(d, n) ≤ C · n^d` for `1 ≤ n ≤ n_max`.
pub fn growth_bound_check(dim: usize, n_max: usize) -> Result<GrowthReport> {
    let constant = letter_block_count(dim)?;
    let mut rows = Vec::with_capacity(n_max);
    let mut holds = true;
    for n in 1..=n_max {
        let s = count_stabilized(dim, n)?;
        let volume = (n as u128).pow(dim as u32);
        holds &= s.is_stable() && (s.count() as u128) <= constant as u128 * volume;
        rows.push(GrowthRow {
            n,
            count: s.count(),
            ratio: s.count() as f64 / volume as f64,
        });
    }
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(GrowthReport {
        dim,
        constant,
        rows,
        max_ratio,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityRow {
    pub n: usize,
    pub count: usize,
    pub stabilized: bool,
    pub generation: u32,
    pub formula_value: Option<u64>,
}

impl ComplexityRow {
    pub fn matches(&self) -> Option<bool> {
        self.formula_value.map(|f| f == self.count as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityTable {
    pub dim: usize,
    pub rows: Vec<ComplexityRow>,
}

impl ComplexityTable {
    /// CSV with header `d,n,count,formula_value,match`; cells without a
    /// formula leave the last two columns empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("d,n,count,formula_value,match\n");
        for r in &self.rows {
            let formula = r.formula_value.map(|f| f.to_string()).unwrap_or_default();
            let matched = r.matches().map(|m| m.to_string()).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{}",
                self.dim, r.n, r.count, formula, matched
            )
            .expect("writing to a String");
        }
        out
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &ComplexityRow> {
        self.rows.iter().filter(|r| r.matches() == Some(false))
    }
}

/// Stabilized counts for `1 ≤ n ≤ n_max`, next to the closed form where one exists.
pub fn complexity_table(dim: usize, n_max: usize) -> Result<ComplexityTable> {
    let rows = (1..=n_max)
        .map(|n| {
            let s = count_stabilized(dim, n)?;
            Ok(ComplexityRow {
                n,
                count: s.count(),
                stabilized: s.is_stable(),
                generation: s.generation(),
                formula_value: closed_form(dim, n as u64),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComplexityTable { dim, rows })
}
