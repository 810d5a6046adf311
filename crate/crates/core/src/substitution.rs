//! Semi-cube tiles and the paperfolding block substitution.
//!
//! A semi-cube is a half-open unit cube that owns only its `d` lower faces.
//! Its tile type (a [`Letter`]) records the crease sign on each lower face
//! and the parity of each coordinate of its reference point (the corner
//! with the smallest coordinates), `4^d` types in all.
//!
//! Under substitution a semi-cube at `x` is doubled and split into the
//! `2^d` children at `2x + δ`. A child with `δ_k = 0` inherits the parent's
//! lower face on axis `k`; a child with `δ_k = 1` gets a crease of the copy
//! of `S_d(1)` placed inside the parent, reflected on every axis where the
//! parent's coordinate is even. Only the parent's parity enters, never its
//! crease signs.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::crease::{
    generate_recursive, reflected_sign, CellBudget, CreaseLabel, CreasePattern, FaceId,
    ReflectionSet, Sign,
};
use crate::error::{Error, Result};

/// Largest dimension whose paperfolding alphabet fits the `u16` letter codes.
pub const MAX_DIM: usize = 7;

/// A semi-cube tile type.
///
/// The code is `(face_bits << d) | parity_bits`, where bit `i` of each field
/// belongs to axis `i` (axis 1 is the least significant). A face bit is set
/// for a crest and a parity bit for an odd coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    dim: u8,
    code: u16,
}

impl Letter {
    pub fn new(face_signs: &[Sign], odd: &[bool]) -> Result<Self> {
        let dim = face_signs.len();
        if odd.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: odd.len(),
            });
        }
        check_dim(dim)?;
        let mut code = 0u16;
        for i in 0..dim {
            if face_signs[i] == Sign::Crest {
                code |= 1 << (dim + i);
            }
            if odd[i] {
                code |= 1 << i;
            }
        }
        Ok(Letter {
            dim: dim as u8,
            code,
        })
    }

    pub fn from_code(dim: usize, code: u16) -> Result<Self> {
        check_dim(dim)?;
        if (code as usize) >= alphabet_size(dim) {
            return Err(Error::InvalidPattern(format!(
                "letter code {code} out of range for dimension {dim}"
            )));
        }
        Ok(Letter {
            dim: dim as u8,
            code,
        })
    }

    pub fn dim(self) -> usize {
        self.dim as usize
    }

    pub fn code(self) -> u16 {
        self.code
    }

    pub fn face_sign(self, axis: usize) -> Sign {
        Sign::from_positive(self.code >> (self.dim() + axis) & 1 == 0)
    }

    pub fn face_signs(self) -> Vec<Sign> {
        (0..self.dim()).map(|i| self.face_sign(i)).collect()
    }

    /// Parity bits, bit `i` set when coordinate `i` is odd.
    pub fn parity(self) -> u16 {
        self.code & ((1 << self.dim) - 1)
    }

    /// Crest bits, bit `i` set when the face on axis `i` is a crest.
    pub fn face_bits(self) -> u16 {
        self.code >> self.dim
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let faces: String = self.face_signs().iter().map(|s| s.symbol()).collect();
        let parity: String = (0..self.dim())
            .map(|i| {
                if self.parity() >> i & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect();
        write!(f, "{faces}/{parity}")
    }
}

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        0 => Err(Error::ZeroDimension),
        d if d > MAX_DIM => Err(Error::UnsupportedDimension(d)),
        _ => Ok(()),
    }
}

/// Number of semi-cube tile types, `4^d`.
pub fn alphabet_size(dim: usize) -> usize {
    1 << (2 * dim)
}

/// Parity bits of an absolute cell coordinate.
pub fn parity_of(position: &[i64]) -> u16 {
    position
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &x)| acc | ((x.rem_euclid(2) as u16) << i))
}

/// A `d`-dimensional block substitution of constant block side 2.
///
/// Symbols are plain indices `0..alphabet_size`. Each image is a block of
/// `2^d` symbols indexed by the child offset `δ`, encoded with bit `i` of
/// the index holding `δ_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSubstitution {
    dim: usize,
    alphabet_size: usize,
    paperfolding: bool,
    images: Vec<Vec<u16>>,
}

impl BlockSubstitution {
    pub fn new(dim: usize, images: Vec<Vec<u16>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if dim > 16 {
            return Err(Error::UnsupportedDimension(dim));
        }
        let m = images.len();
        if m == 0 || m > u16::MAX as usize + 1 {
            return Err(Error::InvalidRule(format!("alphabet of size {m}")));
        }
        for (a, img) in images.iter().enumerate() {
            if img.len() != 1 << dim {
                return Err(Error::InvalidRule(format!(
                    "image of symbol {a} has {} entries, expected {}",
                    img.len(),
                    1 << dim
                )));
            }
            if let Some(&bad) = img.iter().find(|&&s| s as usize >= m) {
                return Err(Error::InvalidRule(format!(
                    "image of symbol {a} uses unknown symbol {bad}"
                )));
            }
        }
        Ok(BlockSubstitution {
            dim,
            alphabet_size: m,
            paperfolding: false,
            images,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn block_volume(&self) -> usize {
        1 << self.dim
    }

    /// Whether the symbols are paperfolding letter codes.
    pub fn is_paperfolding(&self) -> bool {
        self.paperfolding
    }

    pub fn image(&self, symbol: u16) -> &[u16] {
        &self.images[symbol as usize]
    }

    pub fn child(&self, symbol: u16, delta: usize) -> u16 {
        self.images[symbol as usize][delta]
    }

    /// The `k`-th iterate of a single symbol as a dense row-major block of side `2^k`.
    pub fn power_block(&self, symbol: u16, k: u32) -> Vec<u16> {
        let mut p = SymbolicPattern {
            dim: self.dim,
            origin: vec![0; self.dim],
            shape: vec![1; self.dim],
            cells: vec![symbol],
        };
        for _ in 0..k {
            p = expand(&p, self);
        }
        p.cells
    }
}

/// A finite box of symbols with absolute coordinates.
///
/// Cells are stored row-major: the last axis varies fastest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PatternRecord", into = "PatternRecord")]
pub struct SymbolicPattern {
    dim: usize,
    origin: Vec<i64>,
    shape: Vec<usize>,
    cells: Vec<u16>,
}

#[derive(Serialize, Deserialize)]
struct PatternRecord {
    d: usize,
    origin: Vec<i64>,
    shape: Vec<usize>,
    letters: Vec<u16>,
}

impl TryFrom<PatternRecord> for SymbolicPattern {
    type Error = Error;

    fn try_from(r: PatternRecord) -> Result<Self> {
        SymbolicPattern::new(r.d, r.origin, r.shape, r.letters)
    }
}

impl From<SymbolicPattern> for PatternRecord {
    fn from(p: SymbolicPattern) -> Self {
        PatternRecord {
            d: p.dim,
            origin: p.origin,
            shape: p.shape,
            letters: p.cells,
        }
    }
}

impl SymbolicPattern {
    pub fn new(dim: usize, origin: Vec<i64>, shape: Vec<usize>, cells: Vec<u16>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if origin.len() != dim || shape.len() != dim {
            return Err(Error::InvalidPattern(format!(
                "origin and shape must have length {dim}"
            )));
        }
        let volume = shape
            .iter()
            .try_fold(1usize, |acc, &s| acc.checked_mul(s))
            .ok_or_else(|| Error::InvalidPattern("shape overflows".into()))?;
        if volume != cells.len() {
            return Err(Error::InvalidPattern(format!(
                "shape {shape:?} holds {volume} cells, got {}",
                cells.len()
            )));
        }
        Ok(SymbolicPattern {
            dim,
            origin,
            shape,
            cells,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn origin(&self) -> &[i64] {
        &self.origin
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn cells(&self) -> &[u16] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    fn index_of(&self, position: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        for ((&x, &o), &n) in position.iter().zip(&self.origin).zip(&self.shape) {
            let rel = x - o;
            if rel < 0 || rel as usize >= n {
                return None;
            }
            idx = idx * n + rel as usize;
        }
        Some(idx)
    }

    fn position_of(&self, mut idx: usize, out: &mut [i64]) {
        for i in (0..self.dim).rev() {
            out[i] = self.origin[i] + (idx % self.shape[i]) as i64;
            idx /= self.shape[i];
        }
    }

    /// Symbol at an absolute cell position.
    pub fn get(&self, position: &[i64]) -> Option<u16> {
        if position.len() != self.dim {
            return None;
        }
        self.index_of(position).map(|i| self.cells[i])
    }

    /// Visit `(position, symbol)` for every cell in storage order.
    pub fn for_each_cell(&self, mut f: impl FnMut(&[i64], u16)) {
        let mut pos = vec![0i64; self.dim];
        for (idx, &s) in self.cells.iter().enumerate() {
            self.position_of(idx, &mut pos);
            f(&pos, s);
        }
    }

    /// Every cell's parity bits match its absolute coordinates.
    pub fn check_parity(&self) -> Result<()> {
        let mut result = Ok(());
        let mask = (1u16 << self.dim) - 1;
        self.for_each_cell(|pos, s| {
            if result.is_ok() {
                let expected = parity_of(pos);
                if s & mask != expected {
                    result = Err(Error::ParityMismatch {
                        position: pos.to_vec(),
                        expected,
                        found: s & mask,
                    });
                }
            }
        });
        result
    }

    /// Local consistency of a paperfolding letter pattern.
    ///
    /// Every face is owned by exactly one semi-cube, so faces cannot
    /// disagree between neighbours. What can be checked cell by cell is the
    /// parity of each letter, and that each face at an odd coordinate along
    /// its own axis carries the interior crease that the parity of the
    /// parent cell `⌊x/2⌋` prescribes. Patterns produced by [`substitute`]
    /// pass; the seed does not, since it was not grown from a parent.
    pub fn check_local_rules(&self) -> Result<()> {
        self.check_parity()?;
        let mut result = Ok(());
        let dim = self.dim;
        let mut parent = vec![0i64; dim];
        self.for_each_cell(|pos, s| {
            if result.is_err() {
                return;
            }
            let letter = Letter {
                dim: dim as u8,
                code: s,
            };
            for i in 0..dim {
                parent[i] = pos[i].div_euclid(2);
            }
            let parent_parity = parity_of(&parent);
            let delta = parity_of(pos) as usize;
            for axis in 0..dim {
                if delta >> axis & 1 == 1 {
                    let want = interior_crease(dim, parent_parity, delta, axis);
                    if letter.face_sign(axis) != want {
                        result = Err(Error::InvalidPattern(format!(
                            "face on axis {} of cell {pos:?} is {}, the parity rule gives {want}",
                            axis + 1,
                            letter.face_sign(axis)
                        )));
                    }
                }
            }
        });
        result
    }
}

/// Sign of the new crease on axis `axis` of the child `delta` (bit `i` is
/// `δ_i`, and `δ_axis` must be 1) inside a parent with the given parity.
pub fn interior_crease(dim: usize, parent_parity: u16, delta: usize, axis: usize) -> Sign {
    debug_assert!(delta >> axis & 1 == 1);
    let components: Vec<i8> = (0..dim)
        .map(|i| {
            if i == axis {
                0
            } else if delta >> i & 1 == 1 {
                1
            } else {
                -1
            }
        })
        .collect();
    let sigma = CreaseLabel::new(components).expect("one zero by construction");
    let reflections = ReflectionSet::new(
        dim,
        (0..dim).filter(|&i| parent_parity >> i & 1 == 0).collect(),
    )
    .expect("axes in range and increasing");
    reflected_sign(&reflections, &sigma).expect("axes in range")
}

/// Derive the paperfolding substitution on the `4^d` semi-cube letters.
pub fn derive_rule(dim: usize) -> Result<BlockSubstitution> {
    check_dim(dim)?;
    let m = alphabet_size(dim);
    let mut images = Vec::with_capacity(m);
    for code in 0..m as u16 {
        let letter = Letter {
            dim: dim as u8,
            code,
        };
        let parity = letter.parity();
        let block = (0..1usize << dim)
            .map(|delta| {
                let signs: Vec<Sign> = (0..dim)
                    .map(|axis| {
                        if delta >> axis & 1 == 0 {
                            letter.face_sign(axis)
                        } else {
                            interior_crease(dim, parity, delta, axis)
                        }
                    })
                    .collect();
                let odd: Vec<bool> = (0..dim).map(|i| delta >> i & 1 == 1).collect();
                Letter::new(&signs, &odd).map(Letter::code)
            })
            .collect::<Result<Vec<u16>>>()?;
        images.push(block);
    }
    let mut rule = BlockSubstitution::new(dim, images)?;
    rule.paperfolding = true;
    Ok(rule)
}

/// The central `2^d` block of semi-cubes of `S_d(2)`, with origin `(−1, …, −1)`.
pub fn seed(dim: usize) -> Result<SymbolicPattern> {
    check_dim(dim)?;
    let s2 = generate_recursive(dim, 2)?;
    let mut cells = Vec::with_capacity(1 << dim);
    for idx in 0..1usize << dim {
        // Row-major over {−1, 0}^d, last axis fastest.
        let pos: Vec<i64> = (0..dim)
            .map(|i| (idx >> (dim - 1 - i) & 1) as i64 - 1)
            .collect();
        let signs = (0..dim)
            .map(|axis| {
                s2.sign_at(axis, &pos)
                    .ok_or_else(|| Error::InvalidPattern(format!("S_d(2) lacks a face at {pos:?}")))
            })
            .collect::<Result<Vec<Sign>>>()?;
        let odd: Vec<bool> = pos.iter().map(|&x| x != 0).collect();
        cells.push(Letter::new(&signs, &odd)?.code());
    }
    SymbolicPattern::new(dim, vec![-1; dim], vec![2; dim], cells)
}

fn expand(p: &SymbolicPattern, rule: &BlockSubstitution) -> SymbolicPattern {
    let dim = p.dim;
    let shape: Vec<usize> = p.shape.iter().map(|&s| 2 * s).collect();
    let origin: Vec<i64> = p.origin.iter().map(|&o| 2 * o).collect();
    let mut cells = vec![0u16; p.cells.len() << dim];
    let mut rel = vec![0usize; dim];
    for (idx, &s) in p.cells.iter().enumerate() {
        let mut r = idx;
        for i in (0..dim).rev() {
            rel[i] = r % p.shape[i];
            r /= p.shape[i];
        }
        for (delta, &child) in rule.image(s).iter().enumerate() {
            let mut out = 0usize;
            for i in 0..dim {
                out = out * shape[i] + 2 * rel[i] + (delta >> i & 1);
            }
            cells[out] = child;
        }
    }
    SymbolicPattern {
        dim,
        origin,
        shape,
        cells,
    }
}

/// Apply the substitution once: the cell at `x` becomes the block at `2x + δ`.
pub fn substitute(p: &SymbolicPattern, rule: &BlockSubstitution) -> Result<SymbolicPattern> {
    if rule.dim != p.dim {
        return Err(Error::DimensionMismatch {
            expected: rule.dim,
            found: p.dim,
        });
    }
    if let Some(&bad) = p.cells.iter().find(|&&s| s as usize >= rule.alphabet_size) {
        return Err(Error::InvalidPattern(format!(
            "symbol {bad} not in the alphabet"
        )));
    }
    if rule.paperfolding {
        p.check_parity()?;
    }
    let volume = (p.cells.len() as u64).saturating_mul(1 << p.dim);
    if volume > CellBudget::default().max_cells {
        return Err(Error::BudgetExceeded {
            requested: volume as u128,
            budget: CellBudget::default().max_cells,
        });
    }
    Ok(expand(p, rule))
}

/// `substitute` applied `k` times.
pub fn substitute_n(
    p: &SymbolicPattern,
    rule: &BlockSubstitution,
    k: u32,
) -> Result<SymbolicPattern> {
    let mut current = p.clone();
    for _ in 0..k {
        current = substitute(&current, rule)?;
    }
    Ok(current)
}

/// The crease pattern of a letter pattern: each cell contributes its `d` lower faces.
pub fn to_creases(p: &SymbolicPattern) -> Result<CreasePattern> {
    check_dim(p.dim)?;
    if let Some(&bad) = p
        .cells
        .iter()
        .find(|&&s| s as usize >= alphabet_size(p.dim))
    {
        return Err(Error::InvalidPattern(format!(
            "letter code {bad} out of range"
        )));
    }
    let extent = (0..p.dim)
        .map(|i| {
            p.origin[i]
                .abs()
                .max((p.origin[i] + p.shape[i] as i64).abs())
        })
        .max()
        .unwrap_or(0);
    let mut out = CreasePattern::new(p.dim, extent)?;
    let mut result = Ok(());
    p.for_each_cell(|pos, s| {
        let letter = Letter {
            dim: p.dim as u8,
            code: s,
        };
        for axis in 0..p.dim {
            if result.is_ok() {
                if let Err(e) = out.insert(FaceId::new(axis, pos.to_vec()), letter.face_sign(axis))
                {
                    result = Err(e);
                }
            }
        }
    });
    result.map(|_| out)
}

/// Outcome of comparing the substitution with the recursion on a window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub dim: usize,
    pub steps: u32,
    pub faces_compared: usize,
    pub mismatch: Option<FaceMismatch>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceMismatch {
    pub face: FaceId,
    pub from_substitution: Option<Sign>,
    pub from_recursion: Option<Sign>,
}

impl EquivalenceReport {
    pub fn is_equivalent(&self) -> bool {
        self.mismatch.is_none()
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.mismatch {
            None => write!(
                f,
                "d={} k={}: substitution and recursion agree on {} faces",
                self.dim, self.steps, self.faces_compared
            ),
            Some(m) => write!(
                f,
                "d={} k={}: mismatch at {}: substitution {:?}, recursion {:?}",
                self.dim, self.steps, m.face, m.from_substitution, m.from_recursion
            ),
        }
    }
}

/// Compare `k` substitution steps from the seed with `S_d(k+2)` on the
/// owned faces of the box `[−2^k, 2^k)^d`.
pub fn equivalence_check(dim: usize, k: u32) -> Result<EquivalenceReport> {
    check_dim(dim)?;
    CellBudget::default().check(dim, 1u64 << (k + 2))?;
    let rule = derive_rule(dim)?;
    let grown = substitute_n(&seed(dim)?, &rule, k)?;
    let from_sub = to_creases(&grown)?;
    let half = 1i64 << k;
    let from_rec =
        generate_recursive(dim, k + 2)?.owned_window(&vec![-half; dim], &vec![half; dim]);

    let mut faces_compared = 0;
    let mut mismatch = None;
    let mut a = from_sub.iter();
    let mut b = from_rec.iter();
    let (mut x, mut y) = (a.next(), b.next());
    while mismatch.is_none() && (x.is_some() || y.is_some()) {
        match (&x, &y) {
            (Some((fa, sa)), Some((fb, sb))) if fa == fb => {
                if sa != sb {
                    mismatch = Some(FaceMismatch {
                        face: fa.clone(),
                        from_substitution: Some(*sa),
                        from_recursion: Some(*sb),
                    });
                }
                faces_compared += 1;
                x = a.next();
                y = b.next();
            }
            (Some((fa, sa)), Some((fb, _))) if fa < fb => {
                mismatch = Some(FaceMismatch {
                    face: fa.clone(),
                    from_substitution: Some(*sa),
                    from_recursion: None,
                });
            }
            (Some(_), Some((fb, sb))) | (None, Some((fb, sb))) => {
                mismatch = Some(FaceMismatch {
                    face: fb.clone(),
                    from_substitution: None,
                    from_recursion: Some(*sb),
                });
            }
            (Some((fa, sa)), None) => {
                mismatch = Some(FaceMismatch {
                    face: fa.clone(),
                    from_substitution: Some(*sa),
                    from_recursion: None,
                });
            }
            (None, None) => unreachable!(),
        }
    }
    Ok(EquivalenceReport {
        dim,
        steps: k,
        faces_compared,
        mismatch,
    })
}
