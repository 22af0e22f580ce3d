//! Magnus expansions, lower-central-series depth, the Johnson homomorphism,
//! and a finite nilpotent test-bed (unitriangular groups over `Z/p`).
//!
//! Lower central series indexing starts at `L_1 = [F, F]`, so a word lies in
//! `L_k` exactly when its Magnus expansion has no nonconstant term of degree
//! `<= k`.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::extrep::ExtBasis;
use crate::freegroup::{Automorphism, Word};

pub const DEFAULT_DEGREE_CAP: usize = 4;
pub const MAX_DEGREE_CAP: usize = 6;

fn check_cap(cap: usize, min: usize) -> Result<()> {
    if cap < min || cap > MAX_DEGREE_CAP {
        return Err(Error::InvalidArgument(format!(
            "degree cap must lie in {min}..={MAX_DEGREE_CAP}, got {cap}"
        )));
    }
    Ok(())
}

/// A monomial `X_{i1} X_{i2} ...`, stored as 1-based generator indices.
pub type Monomial = Vec<u8>;

/// Noncommutative polynomial in `X_1..X_n` truncated above `degree_cap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    rank: usize,
    degree_cap: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl TruncatedSeries {
    pub fn one(rank: usize, degree_cap: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), BigInt::one());
        TruncatedSeries { rank, degree_cap, terms }
    }

    pub fn zero(rank: usize, degree_cap: usize) -> Self {
        TruncatedSeries { rank, degree_cap, terms: BTreeMap::new() }
    }

    /// Builds a series from explicit terms; zero coefficients and monomials
    /// above the cap are dropped.
    pub fn from_terms(
        rank: usize,
        degree_cap: usize,
        terms: impl IntoIterator<Item = (Monomial, BigInt)>,
    ) -> Result<Self> {
        let mut s = TruncatedSeries::zero(rank, degree_cap);
        for (m, c) in terms {
            if let Some(&bad) = m.iter().find(|&&i| i == 0 || i as usize > rank) {
                return Err(Error::IndexOutOfRange { index: bad as usize, rank });
            }
            s.add_term(m, c);
        }
        Ok(s)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if m.len() > self.degree_cap || c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigInt> {
        &self.terms
    }

    pub fn coefficient(&self, m: &[u8]) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Smallest degree of a nonconstant term, if any.
    pub fn min_nonconstant_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.len()).filter(|&d| d > 0).min()
    }

    /// Truncated product.
    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank, right: other.rank });
        }
        let cap = self.degree_cap.min(other.degree_cap);
        let mut out = TruncatedSeries::zero(self.rank, cap);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if m1.len() + m2.len() > cap {
                    continue;
                }
                let mut m = m1.clone();
                m.extend_from_slice(m2);
                out.add_term(m, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Right multiplication by `1 + X_i` or by its inverse
    /// `1 - X_i + X_i^2 - ...`, in place.
    fn mul_letter(&mut self, index: u8, inverse: bool) {
        let cap = self.degree_cap;
        let mut added: Vec<(Monomial, BigInt)> = Vec::new();
        for (m, c) in &self.terms {
            let room = cap - m.len();
            let mut mono = m.clone();
            for k in 1..=room {
                mono.push(index);
                let coef = if inverse && k % 2 == 1 { -c.clone() } else { c.clone() };
                added.push((mono.clone(), coef));
                if !inverse {
                    break;
                }
            }
        }
        for (m, c) in added {
            self.add_term(m, c);
        }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_empty() {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}·")?;
            }
            for i in m {
                write!(f, "X{i}")?;
            }
        }
        Ok(())
    }
}

/// Magnus expansion `a_i -> 1 + X_i`, truncated above `degree_cap`.
pub fn expand(w: &Word, degree_cap: usize) -> Result<TruncatedSeries> {
    check_cap(degree_cap, 1)?;
    if w.rank() > u8::MAX as usize {
        return Err(Error::InvalidArgument("rank too large for series monomials".into()));
    }
    let mut s = TruncatedSeries::one(w.rank(), degree_cap);
    for l in w.letters() {
        s.mul_letter(l.index() as u8, l.is_inverse());
    }
    Ok(s)
}

/// Depth in a filtration, measured up to a degree cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Depth {
    Exact(usize),
    /// At least the cap; nothing below it was detected.
    AtLeastCap(usize),
}

impl Depth {
    /// The depth that is certain.
    pub fn lower_bound(self) -> usize {
        match self {
            Depth::Exact(k) | Depth::AtLeastCap(k) => k,
        }
    }

    pub fn exact(self) -> Option<usize> {
        match self {
            Depth::Exact(k) => Some(k),
            Depth::AtLeastCap(_) => None,
        }
    }

    pub fn min(self, other: Depth) -> Depth {
        match (self, other) {
            (Depth::Exact(a), Depth::Exact(b)) => Depth::Exact(a.min(b)),
            (Depth::Exact(a), Depth::AtLeastCap(_)) | (Depth::AtLeastCap(_), Depth::Exact(a)) => {
                Depth::Exact(a)
            }
            (Depth::AtLeastCap(a), Depth::AtLeastCap(b)) => Depth::AtLeastCap(a.min(b)),
        }
    }
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::Exact(k) => write!(f, "{k}"),
            Depth::AtLeastCap(k) => write!(f, ">={k}"),
        }
    }
}

/// Largest `k` with `w ∈ L_k`, detected through degree `degree_cap`.
pub fn lcs_depth(w: &Word, degree_cap: usize) -> Result<Depth> {
    check_cap(degree_cap, 2)?;
    let s = expand(w, degree_cap)?;
    Ok(match s.min_nonconstant_degree() {
        Some(d) => Depth::Exact(d - 1),
        None => Depth::AtLeastCap(degree_cap),
    })
}

fn displacement(f: &Automorphism, i: usize) -> Result<Word> {
    let ai = Word::generator(f.rank(), i)?;
    ai.invert().multiply(f.forward().image(i))
}

/// Largest `k` with `f` in the `k`-th Johnson filtration term (`0` if `f`
/// acts nontrivially on `H_1`).
pub fn johnson_depth(f: &Automorphism, degree_cap: usize) -> Result<Depth> {
    check_cap(degree_cap, 2)?;
    let mut depth = Depth::AtLeastCap(degree_cap);
    for i in 1..=f.rank() {
        depth = depth.min(lcs_depth(&displacement(f, i)?, degree_cap)?);
    }
    Ok(depth)
}

/// Element of `Hom(H, Λ²H)` in the basis `(i, j∧k)`, `i` major and `j < k`
/// lexicographic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomVector {
    rank: usize,
    coords: Vec<BigInt>,
}

impl HomVector {
    pub fn zero(rank: usize) -> Self {
        HomVector { rank, coords: vec![BigInt::zero(); hom_dimension(rank)] }
    }

    pub fn from_coords(rank: usize, coords: Vec<BigInt>) -> Result<Self> {
        let dim = hom_dimension(rank);
        if coords.len() != dim {
            return Err(Error::Dimension { expected: dim, found: coords.len() });
        }
        Ok(HomVector { rank, coords })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    /// Coordinate of `(i, j∧k)` with 1-based indices, `j < k`.
    pub fn get(&self, i: usize, j: usize, k: usize) -> BigInt {
        self.coords[hom_index(self.rank, i, j, k)].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &HomVector) -> Result<HomVector> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank, right: other.rank });
        }
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(HomVector { rank: self.rank, coords })
    }
}

pub fn hom_dimension(rank: usize) -> usize {
    rank * rank * rank.saturating_sub(1) / 2
}

/// Flat index of `(i, j∧k)`, 1-based, `j < k`.
pub fn hom_index(rank: usize, i: usize, j: usize, k: usize) -> usize {
    let pairs = ExtBasis::new(rank, 2).expect("degree 2 basis");
    let p = pairs.index_of(&[j - 1, k - 1]).expect("j < k within rank");
    (i - 1) * pairs.len() + p
}

/// The Johnson homomorphism: the `Λ²H`-valued degree-2 Lie coefficient of
/// each `a_i^{-1} f(a_i)`.
///
/// A degree-2 Lie element is `Σ_{j<k} c_jk (X_j X_k - X_k X_j)`; the coordinate
/// `(i, j∧k)` is `c_jk`, i.e. half of `coef(X_j X_k) - coef(X_k X_j)`.
pub fn tau(f: &Automorphism) -> Result<HomVector> {
    let n = f.rank();
    let pairs = ExtBasis::new(n, 2)?;
    let mut coords = Vec::with_capacity(n * pairs.len());
    for i in 1..=n {
        let s = expand(&displacement(f, i)?, 2)?;
        if s.terms().keys().any(|m| m.len() == 1) {
            return Err(Error::NotTorelli);
        }
        for t in pairs.tuples() {
            let (j, k) = (t[0] as u8 + 1, t[1] as u8 + 1);
            let a = s.coefficient(&[j, k]);
            let b = s.coefficient(&[k, j]);
            let diff = a - b;
            let (half, rem) = diff.div_rem(&BigInt::from(2));
            debug_assert!(rem.is_zero(), "degree-2 part of a commutator is a Lie element");
            coords.push(half);
        }
    }
    Ok(HomVector { rank: n, coords })
}

/// Upper unitriangular `size × size` matrix over `Z/modulus`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnitriangularElement {
    size: usize,
    modulus: u64,
    entries: Vec<u64>,
}

impl UnitriangularElement {
    pub fn identity(size: usize, modulus: u64) -> Self {
        let mut entries = vec![0; size * size];
        for i in 0..size {
            entries[i * size + i] = 1 % modulus;
        }
        UnitriangularElement { size, modulus, entries }
    }

    /// `I + value·E_{ij}` with 1-based `i < j`.
    pub fn elementary(size: usize, modulus: u64, i: usize, j: usize, value: u64) -> Result<Self> {
        if !(1 <= i && i < j && j <= size) {
            return Err(Error::InvalidArgument(format!("elementary position ({i}, {j}) not above the diagonal")));
        }
        let mut e = UnitriangularElement::identity(size, modulus);
        e.entries[(i - 1) * size + (j - 1)] = value % modulus;
        Ok(e)
    }

    /// Row-major entries; rejects anything not upper unitriangular mod `modulus`.
    pub fn from_rows(size: usize, modulus: u64, rows: &[Vec<i64>]) -> Result<Self> {
        if rows.len() != size || rows.iter().any(|r| r.len() != size) {
            return Err(Error::Dimension { expected: size, found: rows.len() });
        }
        let mut entries = Vec::with_capacity(size * size);
        for (r, row) in rows.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                let v = x.rem_euclid(modulus as i64) as u64;
                let ok = match r.cmp(&c) {
                    std::cmp::Ordering::Equal => v == 1 % modulus,
                    std::cmp::Ordering::Greater => v == 0,
                    std::cmp::Ordering::Less => true,
                };
                if !ok {
                    return Err(Error::NotUnitriangular(modulus));
                }
                entries.push(v);
            }
        }
        Ok(UnitriangularElement { size, modulus, entries })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.size + j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.size;
        let p = self.modulus;
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            for k in i..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in k..n {
                    entries[i * n + j] = (entries[i * n + j] + a * other.entries[k * n + j]) % p;
                }
            }
        }
        UnitriangularElement { size: n, modulus: p, entries }
    }

    /// Image in the abelianization `(Z/p)^{size-1}`.
    pub fn superdiagonal(&self) -> Vec<u64> {
        (0..self.size.saturating_sub(1)).map(|i| self.entry(i, i + 1)).collect()
    }

    fn is_valid(&self) -> bool {
        let n = self.size;
        (0..n).all(|i| {
            (0..n).all(|j| {
                let v = self.entries[i * n + j];
                v < self.modulus
                    && match i.cmp(&j) {
                        std::cmp::Ordering::Equal => v == 1 % self.modulus,
                        std::cmp::Ordering::Greater => v == 0,
                        std::cmp::Ordering::Less => true,
                    }
            })
        })
    }
}

const UT_ENUMERATION_BOUND: usize = 1 << 20;

/// `|UT(size, p)| = p^{size(size-1)/2}`, if it fits the enumeration bound.
pub fn ut_order(size: usize, p: u64) -> Result<usize> {
    let exp = (size * size.saturating_sub(1) / 2) as u32;
    match p.checked_pow(exp) {
        Some(o) if o as usize <= UT_ENUMERATION_BOUND => Ok(o as usize),
        _ => Err(Error::EnumerationBound { size: usize::MAX, bound: UT_ENUMERATION_BOUND }),
    }
}

/// All elements of `UT(size, p)` in a fixed order.
pub fn ut_elements(size: usize, p: u64) -> Result<Vec<UnitriangularElement>> {
    let order = ut_order(size, p)?;
    let positions: Vec<(usize, usize)> =
        (0..size).flat_map(|i| ((i + 1)..size).map(move |j| (i, j))).collect();
    let mut out = Vec::with_capacity(order);
    for mut code in 0..order {
        let mut e = UnitriangularElement::identity(size, p);
        for &(i, j) in &positions {
            e.entries[i * size + j] = code as u64 % p;
            code /= p as usize;
        }
        out.push(e);
    }
    Ok(out)
}

fn rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let inv = |a: u64| -> u64 {
        // Fermat inverse for prime p
        let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] % p != 0) else { continue };
        m.swap(rank, piv);
        let s = inv(m[rank][c]);
        for x in m[rank].iter_mut() {
            *x = *x * s % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for k in 0..cols {
                    m[r][k] = (m[r][k] + (p - f) * m[rank][k]) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Whether the superdiagonal images of `gens` span `(Z/p)^{size-1}`.
pub fn spans_abelianization(size: usize, p: u64, gens: &[UnitriangularElement]) -> bool {
    let rows: Vec<Vec<u64>> = gens.iter().map(|g| g.superdiagonal()).collect();
    rank_mod_p(&rows, p) == size.saturating_sub(1)
}

/// Whether `gens` generate all of `UT(size, p)`, decided by enumerating the
/// generated subgroup.
pub fn frattini_index_check(
    size: usize,
    p: u64,
    gens: &[UnitriangularElement],
) -> Result<bool> {
    if p < 2 {
        return Err(Error::InvalidArgument(format!("modulus must be prime, got {p}")));
    }
    for g in gens {
        if g.size != size || g.modulus != p || !g.is_valid() {
            return Err(Error::NotUnitriangular(p));
        }
    }
    let order = ut_order(size, p)?;
    let id = UnitriangularElement::identity(size, p);
    let mut seen: HashSet<UnitriangularElement> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    Ok(seen.len() == order)
}
