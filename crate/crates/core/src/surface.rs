//! Homology-level actions of point, multi-point, curve and multi-curve pushing
//! maps, the cyclic generation criterion, and Johnson classes of curve pushes.
//!
//! Curves never appear as geometric objects: every operation takes homology
//! classes plus integer bookkeeping. Pairings use `î(a, b) = aᵀ P b`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cover::CoverGraph;
use crate::error::{Error, Result};
use crate::extrep::{ExtVector, SymplecticForm};
use crate::freegroup::Word;
use crate::intlattice::IntMatrix;

/// `H_1` of a surface (possibly punctured) with its intersection pairing.
/// Zero rows of the pairing model puncture classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyModel {
    pairing: IntMatrix,
}

impl HomologyModel {
    pub fn new(pairing: IntMatrix) -> Result<Self> {
        if !pairing.is_square() {
            return Err(Error::Dimension { expected: pairing.rows(), found: pairing.cols() });
        }
        if pairing.transpose() != pairing.scale(&BigInt::from(-1)) {
            return Err(Error::InvalidArgument("pairing must be skew-symmetric".into()));
        }
        Ok(HomologyModel { pairing })
    }

    /// Closed genus-`g` surface, basis `e_1..e_g, f_1..f_g`.
    pub fn closed(genus: usize) -> Result<Self> {
        HomologyModel::new(SymplecticForm::new(genus)?.matrix())
    }

    /// Genus-`g` symplectic block followed by `punctures` degenerate directions.
    pub fn with_punctures(genus: usize, punctures: usize) -> Result<Self> {
        let j = SymplecticForm::new(genus)?.matrix();
        let r = 2 * genus + punctures;
        let mut p = IntMatrix::zeros(r, r);
        for i in 0..2 * genus {
            for k in 0..2 * genus {
                p.set(i, k, j.get(i, k).clone());
            }
        }
        HomologyModel::new(p)
    }

    pub fn rank(&self) -> usize {
        self.pairing.rows()
    }

    pub fn pairing(&self) -> &IntMatrix {
        &self.pairing
    }

    /// `î(a, b)`.
    pub fn intersect(&self, a: &[BigInt], b: &[BigInt]) -> BigInt {
        let pb = self.pairing.mul_vec(b).expect("rank checked by caller");
        a.iter().zip(&pb).map(|(x, y)| x * y).sum()
    }

    /// Whether `Mᵀ P M = P`.
    pub fn preserves(&self, m: &IntMatrix) -> Result<bool> {
        Ok(m.transpose().mul(&self.pairing)?.mul(m)? == self.pairing)
    }

    fn check(&self, v: &[BigInt]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::Dimension { expected: self.rank(), found: v.len() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PushKind {
    Point,
    Curve,
}

/// One pushed point or curve: `c` is the class of the pushing curve, `d` the
/// class of the loop around the point (or of the pushed curve).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PushDatum {
    pub kind: PushKind,
    pub c: Vec<i64>,
    pub d: Vec<i64>,
    #[serde(default)]
    pub i_gamma: i64,
}

impl PushDatum {
    pub fn point(c: Vec<i64>, d: Vec<i64>) -> Self {
        PushDatum { kind: PushKind::Point, c, d, i_gamma: 0 }
    }

    pub fn curve(c: Vec<i64>, d: Vec<i64>, i_gamma: i64) -> Self {
        PushDatum { kind: PushKind::Curve, c, d, i_gamma }
    }

    fn vectors(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        (
            self.c.iter().map(|&x| BigInt::from(x)).collect(),
            self.d.iter().map(|&x| BigInt::from(x)).collect(),
        )
    }
}

/// Parses a JSON list of push data.
pub fn push_data_from_json(text: &str) -> Result<Vec<PushDatum>> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("push data: {e}")))
}

fn push_matrix(
    model: &HomologyModel,
    data: &[PushDatum],
    kind: PushKind,
    image: impl Fn(&[BigInt], &[BigInt], &[BigInt], &BigInt) -> Vec<BigInt>,
) -> Result<IntMatrix> {
    let r = model.rank();
    let mut vectors = Vec::with_capacity(data.len());
    for datum in data {
        if datum.kind != kind {
            return Err(Error::KindMismatch(match kind {
                PushKind::Point => "point",
                PushKind::Curve => "curve",
            }));
        }
        if kind == PushKind::Point && datum.i_gamma != 0 {
            return Err(Error::InvalidArgument("point pushes carry no self-intersection term".into()));
        }
        let (c, d) = datum.vectors();
        model.check(&c)?;
        model.check(&d)?;
        vectors.push((c, d, BigInt::from(datum.i_gamma)));
    }
    let mut cols = Vec::with_capacity(r);
    for k in 0..r {
        let mut a = vec![BigInt::zero(); r];
        a[k] = BigInt::from(1);
        let mut out = a.clone();
        for (c, d, i_gamma) in &vectors {
            for (o, x) in out.iter_mut().zip(image(&a, c, d, i_gamma)) {
                *o += x;
            }
        }
        cols.push(out);
    }
    IntMatrix::from_columns(r, &cols)
}

/// `a ↦ a + Σ_i î(a, c_i) d_i`.
pub fn point_push_matrix(model: &HomologyModel, data: &[PushDatum]) -> Result<IntMatrix> {
    push_matrix(model, data, PushKind::Point, |a, c, d, _| {
        let k = model.intersect(a, c);
        d.iter().map(|x| &k * x).collect()
    })
}

/// `a ↦ a + Σ_j î(a, c_j) d_j + î(a, d_j)(c_j + I_{γ_j} d_j)`.
pub fn curve_push_matrix(model: &HomologyModel, data: &[PushDatum]) -> Result<IntMatrix> {
    push_matrix(model, data, PushKind::Curve, |a, c, d, i_gamma| {
        let kc = model.intersect(a, c);
        let kd = model.intersect(a, d);
        c.iter()
            .zip(d)
            .map(|(ci, di)| &kc * di + &kd * (ci + i_gamma * di))
            .collect()
    })
}

/// `I_γ`: the sum of the local signs at the self-intersections.
pub fn i_gamma_total(local_signs: &[i8]) -> Result<i64> {
    local_signs.iter().try_fold(0i64, |acc, &s| match s {
        1 | -1 => Ok(acc + s as i64),
        _ => Err(Error::InvalidArgument(format!("local sign must be ±1, got {s}"))),
    })
}

/// Order `s` of the deck element of `δ` and the offset `j` of the lift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiftCriterionInput {
    pub s: u64,
    pub j: u64,
}

impl LiftCriterionInput {
    pub fn new(s: u64, j: u64) -> Result<Self> {
        if s == 0 || j >= s {
            return Err(Error::InvalidArgument(format!("need 0 <= j < s, got s = {s}, j = {j}")));
        }
        Ok(LiftCriterionInput { s, j })
    }

    /// Reads `(s, j)` off a graph cover: `s` is the length of the cycle of
    /// vertex 0 under `δ`, and `j` the exponent with `0·γ = 0·δ^j`.
    pub fn from_cover(cover: &CoverGraph, delta: &Word, gamma: &Word) -> Result<Self> {
        let mut orbit = vec![0usize];
        let mut v = cover.trace(delta, 0);
        while v != 0 {
            orbit.push(v);
            v = cover.trace(delta, v);
        }
        let end = cover.trace(gamma, 0);
        let j = orbit
            .iter()
            .position(|&x| x == end)
            .ok_or_else(|| Error::InvalidArgument("γ does not end on a lift of the base point along δ".into()))?;
        LiftCriterionInput::new(orbit.len() as u64, j as u64)
    }
}

/// `j` generates `Z/s`.
pub fn cyclic_criterion(input: LiftCriterionInput) -> bool {
    input.j.gcd(&input.s) == 1
}

/// `Σ_{i=1}^{j} e_i ∧ f_i ∧ c` in `Λ³H` of the genus-`g` surface.
pub fn johnson_class_curve_push(genus: usize, j: usize, c: &[BigInt]) -> Result<ExtVector> {
    if j == 0 || j >= genus {
        return Err(Error::InvalidArgument(format!("need 1 <= j < g, got j = {j}, g = {genus}")));
    }
    let form = SymplecticForm::new(genus)?;
    if c.len() != form.rank() {
        return Err(Error::Dimension { expected: form.rank(), found: c.len() });
    }
    if c.iter().all(Zero::is_zero) {
        return Err(Error::Degenerate("c = 0".into()));
    }
    let mut acc = ExtVector::zero(form.rank(), 3)?;
    for i in 1..=j {
        let (e, f) = (form.unit(form.e(i)), form.unit(form.f(i)));
        acc = acc.add(&ExtVector::wedge(&[&e, &f, c])?)?;
    }
    if acc.is_zero() {
        return Err(Error::Degenerate("Johnson class vanishes".into()));
    }
    Ok(acc)
}
