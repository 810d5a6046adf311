//! Exact integer matrices: Smith normal form with transforms, determinants,
//! characteristic polynomials and ranks modulo a prime.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Build from rows of machine integers; all rows must have the same length.
    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("rows of different lengths".into()));
        }
        Ok(Self::from_fn(rows.len(), cols, |i, j| rows[i][j].into()))
    }

    pub fn diagonal<T: Into<BigInt> + Copy>(entries: &[T]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                entries[i].into()
            } else {
                BigInt::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(l, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape("power of a non-square matrix".into()));
        }
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Submatrix from the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| {
            self[(rows[i], cols[j])].clone()
        })
    }

    pub fn row_range(&self, start: usize, end: usize) -> Self {
        let rows: Vec<usize> = (start..end).collect();
        let cols: Vec<usize> = (0..self.cols).collect();
        self.select(&rows, &cols)
    }

    pub fn col_range(&self, start: usize, end: usize) -> Self {
        let rows: Vec<usize> = (0..self.rows).collect();
        let cols: Vec<usize> = (start..end).collect();
        self.select(&rows, &cols)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * &a[(n - 1, n - 1)])
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().is_ok_and(|d| d.abs().is_one())
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + i, r * self.cols + j);
            }
        }
    }

    /// Row `i` += `c` · row `j`.
    fn add_row(&mut self, i: usize, j: usize, c: &BigInt) {
        for col in 0..self.cols {
            let v = &self.data[j * self.cols + col] * c;
            if !v.is_zero() {
                self.data[i * self.cols + col] += v;
            }
        }
    }

    /// Column `i` += `c` · column `j`.
    fn add_col(&mut self, i: usize, j: usize, c: &BigInt) {
        for r in 0..self.rows {
            let v = &self.data[r * self.cols + j] * c;
            if !v.is_zero() {
                self.data[r * self.cols + i] += v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for col in 0..self.cols {
            let v = &mut self.data[i * self.cols + col];
            *v = -std::mem::take(v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let v = &mut self.data[r * self.cols + j];
            *v = -std::mem::take(v);
        }
    }

    /// Entries as `i64`, when they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
            }
        }
        write!(f, "]")
    }
}

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal, `d₁ | d₂ | …`.
/// The inverses of both transforms are kept alongside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// The nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }
}

struct Reducer {
    m: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.m.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.m.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn add_row(&mut self, i: usize, j: usize, c: &BigInt) {
        self.m.add_row(i, j, c);
        self.u.add_row(i, j, c);
        self.u_inv.add_col(j, i, &-c);
    }

    fn add_col(&mut self, i: usize, j: usize, c: &BigInt) {
        self.m.add_col(i, j, c);
        self.v.add_col(i, j, c);
        self.v_inv.add_row(j, i, &-c);
    }

    fn negate_row(&mut self, i: usize) {
        self.m.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Position of the smallest nonzero entry in the lower-right block from `t`.
    fn smallest(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m.rows {
            for j in t..self.m.cols {
                let v = &self.m[(i, j)];
                if v.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| v.abs() < self.m[(bi, bj)].abs()) {
                    best = Some((i, j));
                    if v.abs().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut r = Reducer {
        m: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((i, j)) = r.smallest(t) else { break };
        r.swap_rows(t, i);
        r.swap_cols(t, j);
        loop {
            let p = r.m[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if !r.m[(i, t)].is_zero() {
                    let q = r.m[(i, t)].div_floor(&p);
                    r.add_row(i, t, &-q);
                    clean &= r.m[(i, t)].is_zero();
                }
            }
            for j in t + 1..cols {
                if !r.m[(t, j)].is_zero() {
                    let q = r.m[(t, j)].div_floor(&p);
                    r.add_col(j, t, &-q);
                    clean &= r.m[(t, j)].is_zero();
                }
            }
            if clean {
                let bad =
                    (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !r.m[(i, j)].is_multiple_of(&p)));
                match bad {
                    Some(i) => {
                        r.add_row(t, i, &BigInt::one());
                        continue;
                    }
                    None => break,
                }
            }
            // Bring the smallest remaining entry of row and column t to the pivot.
            let mut best = (t, t);
            let mut best_abs: Option<BigInt> = None;
            for i in t..rows {
                let v = r.m[(i, t)].abs();
                if !v.is_zero() && best_abs.as_ref().is_none_or(|b| &v < b) {
                    best = (i, t);
                    best_abs = Some(v);
                }
            }
            for j in t..cols {
                let v = r.m[(t, j)].abs();
                if !v.is_zero() && best_abs.as_ref().is_none_or(|b| &v < b) {
                    best = (t, j);
                    best_abs = Some(v);
                }
            }
            r.swap_rows(t, best.0);
            r.swap_cols(t, best.1);
        }
        if r.m[(t, t)].is_negative() {
            r.negate_row(t);
        }
        t += 1;
    }
    SmithForm {
        rank: t,
        u: r.u,
        u_inv: r.u_inv,
        d: r.m,
        v: r.v,
        v_inv: r.v_inv,
    }
}

/// Coefficients of `det(xI − A)`, lowest degree first, by Faddeev–LeVerrier.
pub fn characteristic_polynomial(a: &IntMatrix) -> Result<Vec<BigInt>> {
    if !a.is_square() {
        return Err(Error::Shape(
            "characteristic polynomial of a non-square matrix".into(),
        ));
    }
    let n = a.rows;
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = IntMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a.mul(&m)?;
        for i in 0..n {
            next[(i, i)] += &coeffs[n - k + 1];
        }
        let am = a.mul(&next)?;
        let trace: BigInt = (0..n).map(|i| am[(i, i)].clone()).sum();
        coeffs[n - k] = -trace / BigInt::from(k);
        m = next;
    }
    Ok(coeffs)
}

const TRIAL_DIVISION_LIMIT: u64 = 1 << 40;

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let mut n = n.abs().to_u64()?;
    // Trial division; larger values are not needed here.
    if n == 0 || n > TRIAL_DIVISION_LIMIT {
        return None;
    }
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        factors.push((n, 1));
    }
    let mut out = vec![1u64];
    for (p, e) in factors {
        let current = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(current.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    Some(out.into_iter().map(BigInt::from).collect())
}

/// Divide a polynomial (lowest degree first) by `x − r`, if it is a root.
fn deflate(poly: &[BigInt], r: &BigInt) -> Option<Vec<BigInt>> {
    let n = poly.len() - 1;
    let mut q = vec![BigInt::zero(); n];
    let mut carry = BigInt::zero();
    for i in (0..=n).rev() {
        let v = &poly[i] + &carry * r;
        if i == 0 {
            return v.is_zero().then_some(q);
        }
        q[i - 1] = v.clone();
        carry = v;
    }
    None
}

/// Integer roots with multiplicity of a monic integer polynomial, in
/// increasing order, together with the cofactor left after removing them.
pub fn integer_roots(poly: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut rest = poly.to_vec();
    let mut roots = Vec::new();
    while rest.len() > 1 && rest[0].is_zero() {
        rest.remove(0);
        roots.push(BigInt::zero());
    }
    if rest.len() > 1 {
        if let Some(divs) = divisors(&rest[0]) {
            for d in divs {
                for r in [-d.clone(), d] {
                    while rest.len() > 1 {
                        match deflate(&rest, &r) {
                            Some(q) => {
                                rest = q;
                                roots.push(r.clone());
                            }
                            None => break,
                        }
                    }
                }
            }
        }
    }
    roots.sort();
    (roots, rest)
}

/// Rank over the field with `p` elements.
pub fn rank_mod_p(a: &IntMatrix, p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut m: Vec<Vec<u64>> = (0..a.rows)
        .map(|i| {
            a.row(i)
                .iter()
                .map(|v| v.mod_floor(&pb).to_u64().expect("reduced below p"))
                .collect()
        })
        .collect();
    let mut rank = 0;
    for c in 0..a.cols {
        let Some(piv) = (rank..a.rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = mod_pow(m[rank][c], p - 2, p);
        let pivot = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && row[c] != 0 {
                let f = (row[c] as u128 * inv as u128 % p as u128) as u64;
                for (x, &y) in row[c..].iter_mut().zip(&pivot[c..]) {
                    let sub = (f as u128 * y as u128 % p as u128) as u64;
                    *x = (*x + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

/// Prime factors of a nonzero integer that fits in `u64`.
pub fn prime_factors(n: &BigInt) -> Option<Vec<u64>> {
    let mut n = n.abs().to_u64()?;
    // Trial division; larger values are not needed here.
    if n == 0 || n > TRIAL_DIVISION_LIMIT {
        return None;
    }
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    Some(out)
}
