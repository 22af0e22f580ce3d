//! Exterior powers `Λ^d H`, the module `Hom(H, Λ²H)`, and the induced integer
//! actions of `SL(n, Z)` and `Sp(2g, Z)`.
//!
//! Symplectic bases are ordered `e_1..e_g, f_1..f_g`, so the form matrix is
//! `[[0, I], [-I, 0]]` and `ω(e_i, f_i) = 1`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intlattice::IntMatrix;

/// Ordered basis of `Λ^degree Z^rank`: strictly increasing 0-based index
/// tuples in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtBasis {
    rank: usize,
    degree: usize,
    tuples: Vec<Vec<usize>>,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

impl ExtBasis {
    pub fn new(rank: usize, degree: usize) -> Result<Self> {
        if degree == 0 || degree > rank {
            return Err(Error::InvalidArgument(format!("no Λ^{degree} basis in rank {rank}")));
        }
        Ok(ExtBasis { rank, degree, tuples: combinations(rank, degree) })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        self.tuples.binary_search_by(|t| t.as_slice().cmp(tuple)).ok()
    }

    /// `x1^x2^x3`, or `e1^f1^e2` when `genus` names a symplectic basis.
    pub fn label(&self, idx: usize, genus: Option<usize>) -> String {
        self.tuples[idx]
            .iter()
            .map(|&i| match genus {
                Some(g) if i < g => format!("e{}", i + 1),
                Some(g) => format!("f{}", i - g + 1),
                None => format!("x{}", i + 1),
            })
            .collect::<Vec<_>>()
            .join("^")
    }
}

/// Coordinates in an [`ExtBasis`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtVector {
    rank: usize,
    degree: usize,
    coords: Vec<BigInt>,
}

impl ExtVector {
    pub fn zero(rank: usize, degree: usize) -> Result<Self> {
        let len = ExtBasis::new(rank, degree)?.len();
        Ok(ExtVector { rank, degree, coords: vec![BigInt::zero(); len] })
    }

    pub fn from_coords(rank: usize, degree: usize, coords: Vec<BigInt>) -> Result<Self> {
        let len = ExtBasis::new(rank, degree)?.len();
        if coords.len() != len {
            return Err(Error::Dimension { expected: len, found: coords.len() });
        }
        Ok(ExtVector { rank, degree, coords })
    }

    /// `v_1 ∧ ... ∧ v_d`; each coordinate is the matching maximal minor.
    pub fn wedge(vectors: &[&[BigInt]]) -> Result<Self> {
        let degree = vectors.len();
        let rank = vectors.first().map_or(0, |v| v.len());
        if vectors.iter().any(|v| v.len() != rank) {
            return Err(Error::InvalidArgument("wedge factors must share a rank".into()));
        }
        let basis = ExtBasis::new(rank, degree)?;
        let cols: Vec<Vec<BigInt>> = vectors.iter().map(|v| v.to_vec()).collect();
        let m = IntMatrix::from_columns(rank, &cols)?;
        let coords = basis.tuples.iter().map(|t| minor(&m, t, &(0..degree).collect::<Vec<_>>())).collect();
        Ok(ExtVector { rank, degree, coords })
    }

    /// Basis element `e_{i1} ∧ ... ∧ e_{id}` from 0-based indices in any order.
    pub fn basis_element(rank: usize, indices: &[usize]) -> Result<Self> {
        let units: Vec<Vec<BigInt>> = indices
            .iter()
            .map(|&i| {
                let mut u = vec![BigInt::zero(); rank];
                u[i] = BigInt::one();
                u
            })
            .collect();
        let refs: Vec<&[BigInt]> = units.iter().map(Vec::as_slice).collect();
        ExtVector::wedge(&refs)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &ExtVector) -> Result<ExtVector> {
        if self.rank != other.rank || self.degree != other.degree {
            return Err(Error::Dimension { expected: self.coords.len(), found: other.coords.len() });
        }
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(ExtVector { rank: self.rank, degree: self.degree, coords })
    }

    /// Renders nonzero terms, e.g. `e1^f1^e2 + 2·e2^f2^e3`.
    pub fn render(&self, genus: Option<usize>) -> String {
        let basis = ExtBasis::new(self.rank, self.degree).expect("valid basis");
        let mut out = String::new();
        for (i, c) in self.coords.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let neg = c.is_negative();
            match (out.is_empty(), neg) {
                (true, true) => out.push('-'),
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
                (true, false) => {}
            }
            let mag = c.abs();
            if !mag.is_one() {
                out.push_str(&format!("{mag}·"));
            }
            out.push_str(&basis.label(i, genus));
        }
        if out.is_empty() { "0".to_string() } else { out }
    }
}

impl fmt::Display for ExtVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(None))
    }
}

/// Determinant of the submatrix with the given rows and columns.
fn minor(m: &IntMatrix, rows: &[usize], cols: &[usize]) -> BigInt {
    match rows.len() {
        1 => m.get(rows[0], cols[0]).clone(),
        2 => {
            m.get(rows[0], cols[0]) * m.get(rows[1], cols[1])
                - m.get(rows[0], cols[1]) * m.get(rows[1], cols[0])
        }
        _ => {
            let sub = IntMatrix::from_rows(
                rows.iter().map(|&r| cols.iter().map(|&c| m.get(r, c).clone()).collect()).collect(),
            )
            .expect("rectangular");
            sub.determinant().expect("square")
        }
    }
}

/// Matrix of `Λ^degree M` in the lexicographic basis.
pub fn wedge_action(m: &IntMatrix, degree: usize) -> Result<IntMatrix> {
    if !m.is_square() {
        return Err(Error::Dimension { expected: m.rows(), found: m.cols() });
    }
    let basis = ExtBasis::new(m.rows(), degree)?;
    let k = basis.len();
    let mut out = IntMatrix::zeros(k, k);
    for (i, ti) in basis.tuples.iter().enumerate() {
        for (j, tj) in basis.tuples.iter().enumerate() {
            let x = minor(m, ti, tj);
            if !x.is_zero() {
                out.set(i, j, x);
            }
        }
    }
    Ok(out)
}

/// Action of `M` on `Hom(H, Λ²H)`: `T ↦ Λ²M · T · M^{-1}`, in the
/// `(i, j∧k)` coordinates with `i` major.
pub fn hom_action(m: &IntMatrix) -> Result<IntMatrix> {
    let inv_t = m.inverse_unimodular()?.transpose();
    Ok(inv_t.kron(&wedge_action(m, 2)?))
}

/// The standard symplectic form on `Z^{2g}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymplecticForm {
    genus: usize,
}

impl SymplecticForm {
    pub fn new(genus: usize) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidArgument("genus must be positive".into()));
        }
        Ok(SymplecticForm { genus })
    }

    /// Form on `Z^rank`; fails on odd rank.
    pub fn for_rank(rank: usize) -> Result<Self> {
        if rank % 2 != 0 {
            return Err(Error::InvalidArgument(format!("symplectic rank must be even, got {rank}")));
        }
        SymplecticForm::new(rank / 2)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn rank(&self) -> usize {
        2 * self.genus
    }

    /// 0-based index of `e_i` (1-based `i`).
    pub fn e(&self, i: usize) -> usize {
        i - 1
    }

    /// 0-based index of `f_i` (1-based `i`).
    pub fn f(&self, i: usize) -> usize {
        self.genus + i - 1
    }

    pub fn unit(&self, idx: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.rank()];
        v[idx] = BigInt::one();
        v
    }

    pub fn matrix(&self) -> IntMatrix {
        let g = self.genus;
        let mut j = IntMatrix::zeros(2 * g, 2 * g);
        for i in 0..g {
            j.set(i, g + i, BigInt::one());
            j.set(g + i, i, -BigInt::one());
        }
        j
    }

    /// `ω` on basis indices.
    pub fn pair_basis(&self, a: usize, b: usize) -> i64 {
        let g = self.genus;
        if a < g && b == a + g {
            1
        } else if a >= g && b + g == a {
            -1
        } else {
            0
        }
    }

    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let g = self.genus;
        (0..g).map(|i| &x[i] * &y[g + i] - &x[g + i] * &y[i]).sum()
    }

    pub fn preserves(&self, m: &IntMatrix) -> bool {
        let j = self.matrix();
        m.transpose().mul(&j).and_then(|t| t.mul(m)).map(|x| x == j).unwrap_or(false)
    }

    /// `x ↦ x + ω(x, v) v`.
    pub fn transvection(&self, v: &[BigInt]) -> IntMatrix {
        let n = self.rank();
        let jv = self.matrix().mul_vec(v).expect("matching rank");
        let mut t = IntMatrix::identity(n);
        for r in 0..n {
            for c in 0..n {
                let add = &v[r] * &jv[c];
                if !add.is_zero() {
                    let cur = t.get(r, c) + add;
                    t.set(r, c, cur);
                }
            }
        }
        t
    }
}

/// `x∧y∧z ↦ ω(x,y) z + ω(y,z) x + ω(z,x) y`, extended linearly.
pub fn contraction(v: &ExtVector, form: &SymplecticForm) -> Result<Vec<BigInt>> {
    contraction_matrix(v.rank, form)?.mul_vec(&v.coords)
}

/// Matrix of [`contraction`], `2g × C(2g, 3)`.
pub fn contraction_matrix(rank: usize, form: &SymplecticForm) -> Result<IntMatrix> {
    if rank % 2 != 0 {
        return Err(Error::InvalidArgument(format!("contraction needs even rank, got {rank}")));
    }
    if rank != form.rank() {
        return Err(Error::Dimension { expected: form.rank(), found: rank });
    }
    let basis = ExtBasis::new(rank, 3)?;
    let mut m = IntMatrix::zeros(rank, basis.len());
    for (col, t) in basis.tuples.iter().enumerate() {
        let (x, y, z) = (t[0], t[1], t[2]);
        for (coef, target) in [
            (form.pair_basis(x, y), z),
            (form.pair_basis(y, z), x),
            (form.pair_basis(z, x), y),
        ] {
            if coef != 0 {
                let cur = m.get(target, col) + BigInt::from(coef);
                m.set(target, col, cur);
            }
        }
    }
    Ok(m)
}

/// `x ↦ Σ_i e_i ∧ f_i ∧ x`.
pub fn embed_h(x: &[BigInt], form: &SymplecticForm) -> Result<ExtVector> {
    if x.len() != form.rank() {
        return Err(Error::Dimension { expected: form.rank(), found: x.len() });
    }
    let mut acc = ExtVector::zero(form.rank(), 3)?;
    for i in 1..=form.genus() {
        let (e, f) = (form.unit(form.e(i)), form.unit(form.f(i)));
        acc = acc.add(&ExtVector::wedge(&[&e, &f, x])?)?;
    }
    Ok(acc)
}

/// Elementary matrices `I + E_ij`, `i != j`, ordered by `(i, j)`.
pub fn sl_generators(n: usize) -> Result<Vec<IntMatrix>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("SL(n, Z) generators need n >= 2, got {n}")));
    }
    let mut out = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut m = IntMatrix::identity(n);
                m.set(i, j, BigInt::one());
                out.push(m);
            }
        }
    }
    Ok(out)
}

/// Symplectic transvections along `e_i`, `f_i` (all `i`) and `e_i + e_{i+1}`,
/// each checked against the form.
pub fn sp_generators(genus: usize) -> Result<Vec<IntMatrix>> {
    if genus < 2 {
        return Err(Error::InvalidArgument(format!("Sp(2g, Z) generators need g >= 2, got {genus}")));
    }
    let form = SymplecticForm::new(genus)?;
    let mut dirs: Vec<Vec<BigInt>> = Vec::new();
    for i in 1..=genus {
        dirs.push(form.unit(form.e(i)));
    }
    for i in 1..=genus {
        dirs.push(form.unit(form.f(i)));
    }
    for i in 1..genus {
        let mut v = form.unit(form.e(i));
        v[form.e(i + 1)] = BigInt::one();
        dirs.push(v);
    }
    let gens: Vec<IntMatrix> = dirs.iter().map(|v| form.transvection(v)).collect();
    for g in &gens {
        if !form.preserves(g) {
            return Err(Error::InvalidArgument("generator does not preserve the form".into()));
        }
    }
    Ok(gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64(rows).unwrap()
    }

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn basis_order_and_labels() {
        let b = ExtBasis::new(4, 2).unwrap();
        assert_eq!(b.tuples(), &[vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(b.index_of(&[1, 3]), Some(4));
        assert_eq!(b.index_of(&[3, 1]), None);
        let b3 = ExtBasis::new(6, 3).unwrap();
        assert_eq!(b3.len(), 20);
        assert_eq!(b3.label(b3.index_of(&[0, 1, 3]).unwrap(), Some(3)), "e1^e2^f1");
        assert!(ExtBasis::new(2, 3).is_err());
    }

    #[test]
    fn wedge_signs() {
        // f1 ∧ e1 ∧ e2 = e1 ∧ e2 ∧ f1 (cyclic)
        let w = ExtVector::basis_element(6, &[3, 0, 1]).unwrap();
        let b = ExtBasis::new(6, 3).unwrap();
        assert_eq!(w.coords()[b.index_of(&[0, 1, 3]).unwrap()], BigInt::one());
        let w = ExtVector::basis_element(6, &[1, 0, 3]).unwrap();
        assert_eq!(w.coords()[b.index_of(&[0, 1, 3]).unwrap()], -BigInt::one());
        assert!(ExtVector::basis_element(6, &[0, 0, 3]).unwrap().is_zero());
    }

    #[test]
    fn wedge_action_examples() {
        assert!(wedge_action(&IntMatrix::identity(5), 3).unwrap().is_identity());
        assert_eq!(wedge_action(&IntMatrix::identity(5), 3).unwrap().rows(), 10);
        let d = m(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 5]]);
        assert_eq!(wedge_action(&d, 3).unwrap(), m(&[vec![30]]));
        // e1 <- e1 + e2 is the matrix sending e1 to e1 + e2
        let t = m(&[vec![1, 0, 0], vec![1, 1, 0], vec![0, 0, 1]]);
        let w = wedge_action(&t, 2).unwrap();
        let img = w.mul_vec(&v(&[0, 1, 0])).unwrap(); // e1∧e3
        assert_eq!(img, v(&[0, 1, 1])); // e1∧e3 + e2∧e3
        assert!(wedge_action(&IntMatrix::zeros(2, 3), 2).is_err());
    }

    #[test]
    fn hom_action_identity_and_errors() {
        assert!(hom_action(&IntMatrix::identity(3)).unwrap().is_identity());
        assert_eq!(hom_action(&IntMatrix::identity(4)).unwrap().rows(), 24);
        assert!(matches!(hom_action(&m(&[vec![2, 0], vec![0, 1]])), Err(Error::NotUnimodular)));
    }

    #[test]
    fn contraction_examples() {
        let form = SymplecticForm::new(3).unwrap();
        let (e1, f1, e2, e3) = (form.e(1), form.f(1), form.e(2), form.e(3));
        let x = ExtVector::basis_element(6, &[e1, f1, e2]).unwrap();
        assert_eq!(contraction(&x, &form).unwrap(), form.unit(e2));
        let y = ExtVector::basis_element(6, &[e1, e2, e3]).unwrap();
        assert!(contraction(&y, &form).unwrap().iter().all(Zero::is_zero));
        // Σ_i e_i∧f_i∧e3 for g = 3: the i = 3 term vanishes, the other two give e3
        let s = embed_h(&form.unit(e3), &form).unwrap();
        let mut want = form.unit(e3);
        want[e3] = BigInt::from(2);
        assert_eq!(contraction(&s, &form).unwrap(), want);
        assert!(SymplecticForm::for_rank(5).is_err());
        let odd = ExtVector::basis_element(5, &[0, 1, 2]).unwrap();
        assert!(contraction(&odd, &form).is_err());
    }

    #[test]
    fn generator_sets() {
        assert_eq!(sl_generators(3).unwrap().len(), 6);
        for g in 2..=4 {
            let form = SymplecticForm::new(g).unwrap();
            let gens = sp_generators(g).unwrap();
            assert_eq!(gens.len(), 3 * g - 1);
            for m in &gens {
                assert!(form.preserves(m));
                assert!(m.determinant().unwrap().is_one());
            }
        }
        assert!(sp_generators(1).is_err());
    }

    #[test]
    fn form_matrix() {
        let form = SymplecticForm::new(2).unwrap();
        let j = form.matrix();
        assert_eq!(j.transpose(), j.scale(&BigInt::from(-1)));
        assert!(j.determinant().unwrap().is_one());
        assert_eq!(form.pair(&form.unit(form.e(1)), &form.unit(form.f(1))), BigInt::one());
        assert_eq!(form.pair(&form.unit(form.f(2)), &form.unit(form.e(2))), -BigInt::one());
    }
}
