//! Exact integer linear algebra: matrices over `Z`, Smith normal form,
//! sublattices kept in Hermite row form, orbit saturation and congruence depth.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Dimension { expected: c, found: row.len() });
            }
            data.extend(row);
        }
        Ok(IntMatrix { rows: r, cols: c, data })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> Result<Self> {
        let mut m = IntMatrix::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::Dimension { expected: rows, found: c.len() });
            }
            for (i, x) in c.iter().enumerate() {
                m.data[i * cols.len() + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, x) in entries.iter().enumerate() {
            m.data[i * n + i] = x.clone();
        }
        m
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

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension { expected: self.cols, found: other.rows });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::Dimension { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &IntMatrix, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension { expected: self.rows * self.cols, found: other.rows * other.cols });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * k).collect() }
    }

    /// Kronecker product; row index of the result is `i * other.rows + k`.
    pub fn kron(&self, other: &IntMatrix) -> IntMatrix {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = IntMatrix::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.data[(i * other.rows + k) * c + j * other.cols + l] = a * other.get(k, l);
                    }
                }
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j { x.is_one() } else { x.is_zero() }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::Dimension { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.determinant().map(|d| d.abs().is_one()).unwrap_or(false)
    }

    /// Inverse of a matrix with determinant `±1`.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::NotUnimodular);
        }
        let s = snf(self);
        if !s.d.is_identity() {
            return Err(Error::NotUnimodular);
        }
        // U A V = I  =>  A^{-1} = V U
        s.v.mul(&s.u)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| Value::Array(self.row(i).iter().map(bigint_to_json).collect()))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let rows = v.as_array().ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
        let mut out = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row.as_array().ok_or_else(|| Error::Parse("matrix row must be an array".into()))?;
            out.push(row.iter().map(bigint_from_json).collect::<Result<Vec<_>>>()?);
        }
        IntMatrix::from_rows(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += k * row[src]`
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// `col[dst] += k * col[src]`
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[r * self.cols + j]);
            self.data[r * self.cols + j] = v;
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

pub fn bigint_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn bigint_from_json(v: &Value) -> Result<BigInt> {
    if let Some(i) = v.as_i64() {
        return Ok(BigInt::from(i));
    }
    if let Some(s) = v.as_str() {
        return s.parse().map_err(|_| Error::Parse(format!("bad integer `{s}`")));
    }
    Err(Error::Parse(format!("expected integer, found {v}")))
}

/// `U · A · V = D`, `U` and `V` unimodular, `D` diagonal with
/// `d_1 | d_2 | ...`, all nonnegative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Diagonal entries of `D`, trailing zeros included.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Smith normal form with transforms.
pub fn snf(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry of the remaining block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = d.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -(d.get(i, t) / d.get(t, t));
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !d.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -(d.get(t, j) / d.get(t, t));
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !d.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // move the smallest remainder in row/column t to the pivot
                let mut bi = t;
                let mut bj = t;
                for i in t + 1..m {
                    if !d.get(i, t).is_zero() && d.get(i, t).abs() < d.get(bi, bj).abs() {
                        (bi, bj) = (i, t);
                    }
                }
                for j in t + 1..n {
                    if !d.get(t, j).is_zero() && d.get(t, j).abs() < d.get(bi, bj).abs() {
                        (bi, bj) = (t, j);
                    }
                }
                d.swap_rows(t, bi);
                u.swap_rows(t, bi);
                d.swap_cols(t, bj);
                v.swap_cols(t, bj);
                continue;
            }
            // divisibility: fold an offending row into row t and retry
            let p = d.get(t, t).clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SnfResult { d, u, v }
}

/// Index of a sublattice in its ambient `Z^r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

impl LatticeIndex {
    pub fn is_finite(&self) -> bool {
        matches!(self, LatticeIndex::Finite(_))
    }

    pub fn to_json(&self) -> Value {
        match self {
            LatticeIndex::Finite(k) => bigint_to_json(k),
            LatticeIndex::Infinite => Value::String("infinite".into()),
        }
    }
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(k) => write!(f, "{k}"),
            LatticeIndex::Infinite => f.write_str("infinite"),
        }
    }
}

/// A sublattice of `Z^ambient`, stored as a basis in Hermite row form:
/// strictly increasing pivot columns, positive pivots, entries above each pivot
/// reduced into `[0, pivot)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sublattice {
    ambient: usize,
    basis: Vec<Vec<BigInt>>,
}

fn first_nonzero(v: &[BigInt]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

impl Sublattice {
    pub fn zero(ambient: usize) -> Self {
        Sublattice { ambient, basis: Vec::new() }
    }

    pub fn from_generators(ambient: usize, gens: impl IntoIterator<Item = Vec<BigInt>>) -> Result<Self> {
        let mut l = Sublattice::zero(ambient);
        for g in gens {
            l.insert(g)?;
        }
        Ok(l)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.basis.clone())
            .unwrap_or_else(|_| IntMatrix::zeros(0, self.ambient))
    }

    fn check_len(&self, v: &[BigInt]) -> Result<()> {
        if v.len() != self.ambient {
            return Err(Error::Dimension { expected: self.ambient, found: v.len() });
        }
        Ok(())
    }

    /// Adds `v`; returns whether the lattice grew.
    pub fn insert(&mut self, mut v: Vec<BigInt>) -> Result<bool> {
        self.check_len(&v)?;
        let mut touched: Option<usize> = None;
        let mut r = 0;
        loop {
            let Some(c) = first_nonzero(&v) else { break };
            while r < self.basis.len() && first_nonzero(&self.basis[r]).unwrap() < c {
                r += 1;
            }
            if r == self.basis.len() || first_nonzero(&self.basis[r]).unwrap() > c {
                if v[c].is_negative() {
                    v.iter_mut().for_each(|x| *x = -std::mem::take(x));
                }
                self.basis.insert(r, v);
                touched = Some(touched.map_or(r, |t: usize| t.min(r)));
                break;
            }
            let b = &self.basis[r];
            let (p, x) = (b[c].clone(), v[c].clone());
            if x.is_multiple_of(&p) {
                let q = &x / &p;
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= &q * bi;
                }
                continue;
            }
            let eg = p.extended_gcd(&x);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let (pg, xg) = (&p / &g, &x / &g);
            let new_b: Vec<BigInt> = b.iter().zip(&v).map(|(bi, vi)| &s * bi + &t * vi).collect();
            let new_v: Vec<BigInt> = b.iter().zip(&v).map(|(bi, vi)| &xg * bi - &pg * vi).collect();
            self.basis[r] = new_b;
            if self.basis[r][c].is_negative() {
                self.basis[r].iter_mut().for_each(|x| *x = -std::mem::take(x));
            }
            touched = Some(touched.map_or(r, |t: usize| t.min(r)));
            v = new_v;
        }
        if touched.is_some() {
            self.reduce_above_pivots();
        }
        Ok(touched.is_some())
    }

    fn reduce_above_pivots(&mut self) {
        for r in 0..self.basis.len() {
            let c = first_nonzero(&self.basis[r]).unwrap();
            let p = self.basis[r][c].clone();
            for above in 0..r {
                let q = self.basis[above][c].div_floor(&p);
                if q.is_zero() {
                    continue;
                }
                let (lo, hi) = self.basis.split_at_mut(r);
                for (a, b) in lo[above].iter_mut().zip(&hi[0]) {
                    *a -= &q * b;
                }
            }
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool> {
        self.check_len(v)?;
        let mut v = v.to_vec();
        for b in &self.basis {
            let c = first_nonzero(b).unwrap();
            if let Some(f) = first_nonzero(&v) {
                if f < c {
                    return Ok(false);
                }
            } else {
                return Ok(true);
            }
            if v[c].is_zero() {
                continue;
            }
            if !v[c].is_multiple_of(&b[c]) {
                return Ok(false);
            }
            let q = &v[c] / &b[c];
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= &q * bi;
            }
        }
        Ok(first_nonzero(&v).is_none())
    }

    /// Invariant factors of the basis matrix.
    pub fn snf_diagonal(&self) -> Vec<BigInt> {
        if self.basis.is_empty() {
            return Vec::new();
        }
        snf(&self.basis_matrix()).diagonal()
    }

    pub fn index(&self) -> LatticeIndex {
        lattice_index(self)
    }
}

/// `[Z^r : L]`, or `Infinite` when `L` has rank below `r`.
pub fn lattice_index(l: &Sublattice) -> LatticeIndex {
    if l.rank() < l.ambient {
        return LatticeIndex::Infinite;
    }
    if l.ambient == 0 {
        return LatticeIndex::Finite(BigInt::one());
    }
    LatticeIndex::Finite(l.snf_diagonal().iter().product())
}

pub const DEFAULT_PASS_LIMIT: usize = 64;

/// Smallest sublattice containing `seed` and closed under every generator and
/// its inverse. Each pass applies every action to every current basis vector;
/// saturation stops after a pass that adds nothing.
pub fn orbit_span(seed: &[BigInt], gens: &[IntMatrix], pass_limit: usize) -> Result<Sublattice> {
    let r = seed.len();
    if seed.iter().all(Zero::is_zero) {
        return Err(Error::InvalidArgument("orbit seed must be nonzero".into()));
    }
    let mut actions = Vec::with_capacity(2 * gens.len());
    for g in gens {
        if g.rows != r || g.cols != r {
            return Err(Error::Dimension { expected: r, found: g.rows });
        }
        let inv = g.inverse_unimodular()?;
        actions.push(g.clone());
        actions.push(inv);
    }
    let mut lattice = Sublattice::zero(r);
    lattice.insert(seed.to_vec())?;
    for _pass in 0..pass_limit {
        let mut grew = false;
        let snapshot = lattice.basis.clone();
        for g in &actions {
            for b in &snapshot {
                let img = g.mul_vec(b)?;
                if !lattice.contains(&img)? {
                    lattice.insert(img)?;
                    grew = true;
                }
            }
        }
        if !grew {
            return Ok(lattice);
        }
    }
    Err(Error::PassLimit { passes: pass_limit, rank: lattice.rank() })
}

/// Largest `i <= cap` with `M ≡ I (mod p^i)`.
pub fn congruence_depth(m: &IntMatrix, p: u64, cap: usize) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::Dimension { expected: m.rows, found: m.cols });
    }
    if p < 2 {
        return Err(Error::InvalidArgument(format!("modulus must be prime, got {p}")));
    }
    let diff = m.sub(&IntMatrix::identity(m.rows))?;
    let g = diff.data.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return Ok(cap);
    }
    let p = BigInt::from(p);
    let mut g = g;
    let mut depth = 0;
    while depth < cap && g.is_multiple_of(&p) {
        g /= &p;
        depth += 1;
    }
    Ok(depth)
}
