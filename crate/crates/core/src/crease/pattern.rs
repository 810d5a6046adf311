use std::fmt;

use serde::{Deserialize, Serialize};

use super::{crease_sign, CreaseLabel, OrthantLabel, Sign};
use crate::error::{Error, Result};

/// A unit `(d−1)`-face of the integer grid.
///
/// `axis` is zero-based: the face lies in the hyperplane `x_axis = corner[axis]`
/// and spans `[corner[i], corner[i] + 1]` along every other axis `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceId {
    pub axis: usize,
    pub corner: Vec<i64>,
}

impl FaceId {
    pub fn new(axis: usize, corner: Vec<i64>) -> Self {
        FaceId { axis, corner }
    }
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "axis {} at {:?}", self.axis + 1, self.corner)
    }
}

/// Upper bound on the number of unit cells a construction may touch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellBudget {
    pub max_cells: u64,
}

impl Default for CellBudget {
    fn default() -> Self {
        CellBudget { max_cells: 1 << 26 }
    }
}

impl CellBudget {
    pub fn new(max_cells: u64) -> Self {
        CellBudget { max_cells }
    }

    /// Fails when a box of `side^dim` cells is over budget.
    pub fn check(&self, dim: usize, side: u64) -> Result<()> {
        let requested = (side as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
        if requested > self.max_cells as u128 {
            return Err(Error::BudgetExceeded {
                requested,
                budget: self.max_cells,
            });
        }
        Ok(())
    }
}

/// A finite set of signed faces supported in the box `[−h, h]^d`.
///
/// Storage is dense: one slot per `(axis, corner)` with every corner
/// coordinate in `[−h, h]`. Iteration yields faces sorted by `(axis, corner)`.
#[derive(Clone)]
pub struct CreasePattern {
    dim: usize,
    extent: i64,
    side: usize,
    slots: Vec<i8>,
    len: usize,
}

impl CreasePattern {
    pub fn new(dim: usize, extent: i64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if extent < 0 {
            return Err(Error::Parse(format!("negative extent {extent}")));
        }
        let side = (2 * extent + 1) as usize;
        let per_axis = side.checked_pow(dim as u32).ok_or(Error::BudgetExceeded {
            requested: u128::MAX,
            budget: CellBudget::default().max_cells,
        })?;
        Ok(CreasePattern {
            dim,
            extent,
            side,
            slots: vec![0; dim * per_axis],
            len: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn extent(&self) -> i64 {
        self.extent
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Whether the face lies inside the extent box.
    pub fn in_extent(&self, axis: usize, corner: &[i64]) -> bool {
        let h = self.extent;
        axis < self.dim
            && corner.len() == self.dim
            && corner.iter().enumerate().all(|(i, &c)| {
                if i == axis {
                    (-h..=h).contains(&c)
                } else {
                    (-h..h).contains(&c)
                }
            })
    }

    fn slot(&self, axis: usize, corner: &[i64]) -> Option<usize> {
        if !self.in_extent(axis, corner) {
            return None;
        }
        let mut idx = axis;
        for &c in corner {
            idx = idx * self.side + (c + self.extent) as usize;
        }
        Some(idx)
    }

    fn decode(&self, mut idx: usize, corner: &mut [i64]) -> usize {
        for c in corner.iter_mut().rev() {
            *c = (idx % self.side) as i64 - self.extent;
            idx /= self.side;
        }
        idx
    }

    pub fn sign_at(&self, axis: usize, corner: &[i64]) -> Option<Sign> {
        self.slot(axis, corner)
            .and_then(|i| Sign::from_i8(self.slots[i]))
    }

    pub fn get(&self, face: &FaceId) -> Option<Sign> {
        self.sign_at(face.axis, &face.corner)
    }

    /// Insert a face, returning the previous sign if the slot was taken.
    pub fn insert(&mut self, face: FaceId, sign: Sign) -> Result<Option<Sign>> {
        self.set(face.axis, &face.corner, sign)
            .ok_or_else(|| Error::FaceOutOfExtent(face.to_string()))
    }

    fn set(&mut self, axis: usize, corner: &[i64], sign: Sign) -> Option<Option<Sign>> {
        let i = self.slot(axis, corner)?;
        let old = Sign::from_i8(self.slots[i]);
        if old.is_none() {
            self.len += 1;
        }
        self.slots[i] = sign.as_i8();
        Some(old)
    }

    /// Visit every face in sorted order without allocating per face.
    pub fn for_each_face(&self, mut f: impl FnMut(usize, &[i64], Sign)) {
        let mut corner = vec![0i64; self.dim];
        for (idx, &v) in self.slots.iter().enumerate() {
            if let Some(sign) = Sign::from_i8(v) {
                let axis = self.decode(idx, &mut corner);
                f(axis, &corner, sign);
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (FaceId, Sign)> + '_ {
        self.slots.iter().enumerate().filter_map(move |(idx, &v)| {
            Sign::from_i8(v).map(|sign| {
                let mut corner = vec![0i64; self.dim];
                let axis = self.decode(idx, &mut corner);
                (FaceId { axis, corner }, sign)
            })
        })
    }

    /// Faces whose corner lies in the half-open box `[lower, upper)`.
    pub fn owned_window(&self, lower: &[i64], upper: &[i64]) -> CreasePattern {
        let mut out = CreasePattern::new(self.dim, self.extent).expect("same shape");
        self.for_each_face(|axis, corner, sign| {
            if corner
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(&c, (&lo, &hi))| lo <= c && c < hi)
            {
                out.set(axis, corner, sign);
            }
        });
        out
    }

    /// The faces lying inside the smaller box `[−h, h]^d`, as a pattern of extent `h`.
    pub fn central_box(&self, h: i64) -> Result<CreasePattern> {
        let mut out = CreasePattern::new(self.dim, h)?;
        self.for_each_face(|axis, corner, sign| {
            out.set(axis, corner, sign);
        });
        Ok(out)
    }

    /// Copy the faces of `other`, mirrored on the axes in `mirror`, signs
    /// flipped once per mirror axis, then translated by `shift`.
    fn place(&mut self, other: &CreasePattern, mirror: &[bool], shift: &[i64]) -> Result<()> {
        let flip = mirror.iter().filter(|&&m| m).count() % 2 == 1;
        let mut target = vec![0i64; self.dim];
        let mut failure = None;
        other.for_each_face(|axis, corner, sign| {
            if failure.is_some() {
                return;
            }
            for i in 0..corner.len() {
                let c = if !mirror[i] {
                    corner[i]
                } else if i == axis {
                    -corner[i]
                } else {
                    -corner[i] - 1
                };
                target[i] = c + shift[i];
            }
            match self.set(axis, &target, sign.flipped_if(flip)) {
                Some(None) => {}
                Some(Some(_)) => failure = Some(format!("overlapping face at {target:?}")),
                None => failure = Some(format!("axis {} at {target:?}", axis + 1)),
            }
        });
        match failure {
            Some(msg) => Err(Error::FaceOutOfExtent(msg)),
            None => Ok(()),
        }
    }
}

impl PartialEq for CreasePattern {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.len == other.len && self.iter().eq(other.iter())
    }
}

impl Eq for CreasePattern {}

impl fmt::Debug for CreasePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (face, sign) in self.iter() {
            m.entry(&format_args!("{face}"), &sign.symbol());
        }
        m.finish()
    }
}

#[derive(Serialize, Deserialize)]
struct FaceRecord {
    axis: usize,
    corner: Vec<i64>,
    sign: Sign,
}

#[derive(Serialize, Deserialize)]
struct PatternRecord {
    d: usize,
    extent: i64,
    faces: Vec<FaceRecord>,
}

impl Serialize for CreasePattern {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        PatternRecord {
            d: self.dim,
            extent: self.extent,
            faces: self
                .iter()
                .map(|(face, sign)| FaceRecord {
                    axis: face.axis + 1,
                    corner: face.corner,
                    sign,
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CreasePattern {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rec = PatternRecord::deserialize(deserializer)?;
        CellBudget::default()
            .check(rec.d, 2 * rec.extent.max(0) as u64)
            .map_err(D::Error::custom)?;
        let mut p = CreasePattern::new(rec.d, rec.extent).map_err(D::Error::custom)?;
        for f in rec.faces {
            if f.axis == 0 || f.axis > rec.d {
                return Err(D::Error::custom(format!(
                    "axis {} out of range 1..={}",
                    f.axis, rec.d
                )));
            }
            let face = FaceId::new(f.axis - 1, f.corner);
            if p.insert(face.clone(), f.sign)
                .map_err(D::Error::custom)?
                .is_some()
            {
                return Err(D::Error::custom(format!("duplicate face {face}")));
            }
        }
        Ok(p)
    }
}

/// The first `d`-fold `S_d(1)`: one face per crease label.
pub fn build_s1(dim: usize) -> Result<CreasePattern> {
    let mut p = CreasePattern::new(dim, 1)?;
    for sigma in CreaseLabel::all(dim) {
        let corner: Vec<i64> = sigma
            .components()
            .iter()
            .map(|&s| if s < 0 { -1 } else { 0 })
            .collect();
        p.set(sigma.axis(), &corner, crease_sign(&sigma));
    }
    Ok(p)
}

/// Mirror the pattern in the hyperplane `x_axis = 0` and swap all signs.
pub fn reflect(p: &CreasePattern, axis: usize) -> Result<CreasePattern> {
    if axis >= p.dim {
        return Err(Error::AxisOutOfRange { axis, dim: p.dim });
    }
    let mut mirror = vec![false; p.dim];
    mirror[axis] = true;
    let mut out = CreasePattern::new(p.dim, p.extent)?;
    out.place(p, &mirror, &vec![0; p.dim])?;
    Ok(out)
}

/// Apply `M(φ)`, the product of the reflections on the axes where `φ_i = −1`.
pub fn orthant_reflection(phi: &OrthantLabel, p: &CreasePattern) -> Result<CreasePattern> {
    if phi.dim() != p.dim {
        return Err(Error::DimensionMismatch {
            expected: p.dim,
            found: phi.dim(),
        });
    }
    let mirror: Vec<bool> = phi.signs().iter().map(|&s| s < 0).collect();
    let mut out = CreasePattern::new(p.dim, p.extent)?;
    out.place(p, &mirror, &vec![0; p.dim])?;
    Ok(out)
}

/// `S_d(n)` by the recursion: central slabs of the first `d`-fold plus a
/// reflected copy of `S_d(n−1)` centred in each orthant.
pub fn generate_recursive(dim: usize, n: u32) -> Result<CreasePattern> {
    generate_recursive_with_budget(dim, n, CellBudget::default())
}

pub fn generate_recursive_with_budget(
    dim: usize,
    n: u32,
    budget: CellBudget,
) -> Result<CreasePattern> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if n >= 63 {
        return Err(Error::BudgetExceeded {
            requested: u128::MAX,
            budget: budget.max_cells,
        });
    }
    budget.check(dim, 1u64 << n)?;
    let mut current = CreasePattern::new(dim, 0)?;
    let labels = CreaseLabel::all(dim);
    let orthants = OrthantLabel::all(dim);
    for level in 1..=n {
        let h = 1i64 << (level - 1);
        let mut next = CreasePattern::new(dim, h)?;
        for sigma in &labels {
            fill_slab(&mut next, sigma, h);
        }
        if level >= 2 {
            let t = h / 2;
            for phi in &orthants {
                let mirror: Vec<bool> = phi.signs().iter().map(|&s| s < 0).collect();
                let shift: Vec<i64> = phi.signs().iter().map(|&s| t * s as i64).collect();
                next.place(&current, &mirror, &shift)?;
            }
        }
        current = next;
    }
    Ok(current)
}

fn fill_slab(p: &mut CreasePattern, sigma: &CreaseLabel, h: i64) {
    let dim = sigma.dim();
    let axis = sigma.axis();
    let sign = crease_sign(sigma);
    let ranges: Vec<(i64, i64)> = sigma
        .components()
        .iter()
        .map(|&s| match s {
            0 => (0, 1),
            1 => (0, h),
            _ => (-h, 0),
        })
        .collect();
    let mut corner: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        p.set(axis, &corner, sign);
        let mut i = dim;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            corner[i] += 1;
            if corner[i] < ranges[i].1 {
                break;
            }
            corner[i] = ranges[i].0;
        }
    }
}
