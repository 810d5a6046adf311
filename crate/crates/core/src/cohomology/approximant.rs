//! Anderson–Putnam complexes of collared tiles in dimensions 1 and 2.
//!
//! Every collared tile contributes a unit interval or square. Boundary
//! pieces of two tiles are glued whenever the tiles occur next to each
//! other. In the plane, axis 1 points right and axis 2 up; a square's edges
//! are oriented `B: BL→BR`, `T: TL→TR`, `L: BL→TL`, `R: BR→TR`, and its
//! boundary is `B + R − T − L`.

use std::collections::HashMap;

use num_bigint::BigInt;

use super::collar::CollaredRule;
use super::{CellComplex, CellularMap};
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
        }
    }

    /// Dense class numbers, in order of first appearance.
    fn classes(&mut self) -> (Vec<usize>, usize) {
        let mut number = HashMap::new();
        let mut out = Vec::with_capacity(self.parent.len());
        for x in 0..self.parent.len() {
            let root = self.find(x);
            let next = number.len();
            out.push(*number.entry(root).or_insert(next));
        }
        (out, number.len())
    }
}

/// Records a cell-to-cell assignment and rejects conflicting ones.
fn assign<T: PartialEq + Clone>(slot: &mut Option<T>, value: T, what: &str) -> Result<()> {
    match slot {
        Some(old) if *old != value => Err(Error::InvalidComplex(format!(
            "{what} differs between identified cells"
        ))),
        Some(_) => Ok(()),
        None => {
            *slot = Some(value);
            Ok(())
        }
    }
}

fn one() -> BigInt {
    BigInt::from(1)
}

/// Build the approximant complex and the cellular map induced by the collared substitution.
pub fn ap_complex(collared: &CollaredRule) -> Result<(CellComplex, CellularMap)> {
    match collared.dim() {
        1 => complex_1d(collared),
        2 => complex_2d(collared),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

const LEFT: usize = 0;
const RIGHT: usize = 1;

fn complex_1d(c: &CollaredRule) -> Result<(CellComplex, CellularMap)> {
    let n = c.len();
    let mut uf = UnionFind::new(2 * n);
    for &(_, i, j) in c.adjacencies() {
        uf.union(2 * i + RIGHT, 2 * j + LEFT);
    }
    let (class, nv) = uf.classes();
    let vertex = |i: usize, side: usize| class[2 * i + side];

    let mut d1 = IntMatrix::zeros(nv, n);
    for i in 0..n {
        d1[(vertex(i, RIGHT), i)] += 1;
        d1[(vertex(i, LEFT), i)] -= 1;
    }

    let mut f1 = IntMatrix::zeros(n, n);
    let mut vmap: Vec<Option<usize>> = vec![None; nv];
    for i in 0..n {
        let image = c.rule().image(i as u16);
        for &child in image {
            f1[(child as usize, i)] += 1;
        }
        for (side, &child) in [(LEFT, &image[0]), (RIGHT, &image[image.len() - 1])] {
            assign(
                &mut vmap[vertex(i, side)],
                vertex(child as usize, side),
                "vertex image",
            )?;
        }
    }
    let f0 = vertex_matrix(&vmap)?;
    let complex = CellComplex::new(vec![nv, n], vec![d1])?;
    let map = CellularMap::new(&complex, vec![f0, f1])?;
    Ok((complex, map))
}

fn vertex_matrix(vmap: &[Option<usize>]) -> Result<IntMatrix> {
    let mut f0 = IntMatrix::zeros(vmap.len(), vmap.len());
    for (v, w) in vmap.iter().enumerate() {
        let w = w.ok_or_else(|| Error::InvalidComplex(format!("vertex {v} has no image")))?;
        f0[(w, v)] = one();
    }
    Ok(f0)
}

// Edge sides and corners of a square, and the children touching each.
const B: usize = 0;
const T: usize = 1;
const L: usize = 2;
const R: usize = 3;
const BL: usize = 0;
const BR: usize = 1;
const TL: usize = 2;
const TR: usize = 3;
const EDGE_ENDS: [(usize, usize); 4] = [(BL, BR), (TL, TR), (BL, TL), (BR, TR)];
// Child index: bit 0 is the step along axis 1, bit 1 along axis 2.
const SIDE_CHILDREN: [[usize; 2]; 4] = [[0, 1], [2, 3], [0, 2], [1, 3]];
const CORNER_CHILD: [usize; 4] = [0, 1, 2, 3];

fn complex_2d(c: &CollaredRule) -> Result<(CellComplex, CellularMap)> {
    let n = c.len();
    let mut edges = UnionFind::new(4 * n);
    let mut verts = UnionFind::new(4 * n);
    for &(axis, i, j) in c.adjacencies() {
        if axis == 0 {
            edges.union(4 * i + R, 4 * j + L);
            verts.union(4 * i + BR, 4 * j + BL);
            verts.union(4 * i + TR, 4 * j + TL);
        } else {
            edges.union(4 * i + T, 4 * j + B);
            verts.union(4 * i + TL, 4 * j + BL);
            verts.union(4 * i + TR, 4 * j + BR);
        }
    }
    let (eclass, ne) = edges.classes();
    let (vclass, nv) = verts.classes();
    let edge = |i: usize, s: usize| eclass[4 * i + s];
    let vertex = |i: usize, s: usize| vclass[4 * i + s];

    let mut d2 = IntMatrix::zeros(ne, n);
    let mut ends: Vec<Option<(usize, usize)>> = vec![None; ne];
    for i in 0..n {
        d2[(edge(i, B), i)] += 1;
        d2[(edge(i, R), i)] += 1;
        d2[(edge(i, T), i)] -= 1;
        d2[(edge(i, L), i)] -= 1;
        for (s, &(a, b)) in EDGE_ENDS.iter().enumerate() {
            assign(
                &mut ends[edge(i, s)],
                (vertex(i, a), vertex(i, b)),
                "edge endpoints",
            )?;
        }
    }
    let mut d1 = IntMatrix::zeros(nv, ne);
    for (e, end) in ends.iter().enumerate() {
        let (a, b) = end.ok_or_else(|| Error::InvalidComplex(format!("edge {e} unused")))?;
        d1[(b, e)] += 1;
        d1[(a, e)] -= 1;
    }

    let mut f2 = IntMatrix::zeros(n, n);
    let mut emap: Vec<Option<[usize; 2]>> = vec![None; ne];
    let mut vmap: Vec<Option<usize>> = vec![None; nv];
    for i in 0..n {
        let image = c.rule().image(i as u16);
        for &child in image {
            f2[(child as usize, i)] += 1;
        }
        for (s, kids) in SIDE_CHILDREN.iter().enumerate() {
            let mut targets = kids.map(|k| edge(image[k] as usize, s));
            targets.sort_unstable();
            assign(&mut emap[edge(i, s)], targets, "edge image")?;
        }
        for (corner, &k) in CORNER_CHILD.iter().enumerate() {
            assign(
                &mut vmap[vertex(i, corner)],
                vertex(image[k] as usize, corner),
                "vertex image",
            )?;
        }
    }
    let mut f1 = IntMatrix::zeros(ne, ne);
    for (e, targets) in emap.iter().enumerate() {
        let targets = targets.expect("every edge belongs to some tile");
        for t in targets {
            f1[(t, e)] += 1;
        }
    }
    let f0 = vertex_matrix(&vmap)?;
    let complex = CellComplex::new(vec![nv, ne, n], vec![d1, d2])?;
    let map = CellularMap::new(&complex, vec![f0, f1, f2])?;
    Ok((complex, map))
}
