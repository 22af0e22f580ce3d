mod common;

use std::collections::{HashSet, VecDeque};

use common::big;
use homrep_core::extrep::{
    contraction, contraction_matrix, embed_h, hom_action, sl_generators, sp_generators, wedge_action,
};
use homrep_core::intlattice::{orbit_span, DEFAULT_PASS_LIMIT};
use homrep_core::surface::johnson_class_curve_push;
use homrep_core::{ExtVector, IntMatrix, LatticeIndex, SymplecticForm};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

fn word_in(gens: &[IntMatrix], picks: &[(usize, bool)]) -> IntMatrix {
    let n = gens[0].rows();
    picks.iter().fold(IntMatrix::identity(n), |acc, &(k, inv)| {
        let g = &gens[k % gens.len()];
        let g = if inv { g.inverse_unimodular().unwrap() } else { g.clone() };
        acc.mul(&g).unwrap()
    })
}

fn picks() -> impl Strategy<Value = Vec<(usize, bool)>> {
    prop::collection::vec((0usize..64, any::<bool>()), 0..6)
}

/// Rank over `Z/p` by Gaussian elimination.
fn rank_mod(rows: &[Vec<i64>], p: i64) -> usize {
    let mut rows: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = (1..p).find(|x| x * rows[rank][c] % p == 1).unwrap();
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c];
                for k in 0..cols {
                    rows[r][k] = (rows[r][k] - f * rows[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Index in `Z^n` of the span of `vectors`, by column-by-column Euclidean
/// row reduction; `None` when the span has lower rank.
fn hermite_index(vectors: &[Vec<i64>], n: usize) -> Option<BigInt> {
    let mut basis: Vec<Option<Vec<BigInt>>> = vec![None; n];
    for v in vectors {
        let mut v: Vec<BigInt> = big(v);
        for c in 0..n {
            if v[c].is_zero() {
                continue;
            }
            match basis[c].take() {
                None => {
                    basis[c] = Some(v);
                    break;
                }
                Some(mut b) => {
                    while !v[c].is_zero() {
                        let q = b[c].div_floor(&v[c]);
                        for k in c..n {
                            let t = &q * &v[k];
                            b[k] -= t;
                        }
                        std::mem::swap(&mut b, &mut v);
                    }
                    basis[c] = Some(b);
                }
            }
        }
    }
    basis.iter().enumerate().try_fold(BigInt::one(), |acc, (c, b)| b.as_ref().map(|b| acc * b[c].abs()))
}

fn to_i64(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().unwrap()).collect()
}

fn small_matrices(gens: &[IntMatrix]) -> Vec<Vec<i64>> {
    gens.iter()
        .chain(gens.iter().map(|g| g.inverse_unimodular().unwrap()).collect::<Vec<_>>().iter())
        .map(|g| g.to_rows().concat().iter().map(|x| x.to_i64().unwrap()).collect())
        .collect()
}

fn apply_mod(m: &[i64], v: &[u8], p: i64) -> Vec<u8> {
    let n = v.len();
    (0..n)
        .map(|i| (0..n).map(|j| m[i * n + j] * v[j] as i64).sum::<i64>().rem_euclid(p) as u8)
        .collect()
}

/// Breadth-first orbit of `seed` mod `p`; stops early once the orbit spans
/// the whole space when `stop_at_full_span`.
fn orbit_mod(seed: &[i64], gens: &[IntMatrix], p: i64, stop_at_full_span: bool) -> (usize, usize) {
    let n = seed.len();
    let mats = small_matrices(gens);
    let start: Vec<u8> = seed.iter().map(|x| x.rem_euclid(p) as u8).collect();
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    let mut spanning: Vec<Vec<i64>> = vec![start.iter().map(|&x| x as i64).collect()];
    let mut queued = 1;
    while let Some(v) = queue.pop_front() {
        for m in &mats {
            let w = apply_mod(m, &v, p);
            if seen.insert(w.clone()) && spanning.len() < n {
                let row: Vec<i64> = w.iter().map(|&x| x as i64).collect();
                let mut trial = spanning.clone();
                trial.push(row);
                if rank_mod(&trial, p) > spanning.len() {
                    spanning = trial;
                    if stop_at_full_span && spanning.len() == n {
                        return (seen.len(), n);
                    }
                }
            }
            if seen.len() > queued {
                queued = seen.len();
                queue.push_back(w);
            }
        }
    }
    (seen.len(), spanning.len())
}

/// Integer orbit vectors reached by words of length at most `depth`.
fn integer_orbit(seed: &[BigInt], gens: &[IntMatrix], depth: usize) -> Vec<Vec<i64>> {
    let mut all = gens.to_vec();
    all.extend(gens.iter().map(|g| g.inverse_unimodular().unwrap()));
    let mut seen = HashSet::from([seed.to_vec()]);
    let mut layer = vec![seed.to_vec()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for v in &layer {
            for g in &all {
                let w = g.mul_vec(v).unwrap();
                if seen.insert(w.clone()) {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    seen.iter().map(|v| to_i64(v)).collect()
}

/// Orbit vectors `w · seed` for seeded random words of length at most `len`.
fn sampled_orbit(seed: &[BigInt], gens: &[IntMatrix], count: usize, len: usize) -> Vec<Vec<i64>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let mut all = gens.to_vec();
    all.extend(gens.iter().map(|g| g.inverse_unimodular().unwrap()));
    (0..count)
        .map(|_| {
            let mut v = seed.to_vec();
            for _ in 0..rng.gen_range(0..=len) {
                v = all[rng.gen_range(0..all.len())].mul_vec(&v).unwrap();
            }
            to_i64(&v)
        })
        .collect()
}

proptest! {
    #[test]
    fn wedge_action_is_functorial(a in picks(), b in picks(), degree in 1usize..=3) {
        let gens = sl_generators(4).unwrap();
        let (x, y) = (word_in(&gens, &a), word_in(&gens, &b));
        let xy = wedge_action(&x.mul(&y).unwrap(), degree).unwrap();
        prop_assert_eq!(xy, wedge_action(&x, degree).unwrap().mul(&wedge_action(&y, degree).unwrap()).unwrap());
    }

    #[test]
    fn wedge_action_moves_wedges(a in picks(), v in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 3)) {
        let m = word_in(&sl_generators(5).unwrap(), &a);
        let vs: Vec<Vec<BigInt>> = v.iter().map(|x| big(x)).collect();
        let moved: Vec<Vec<BigInt>> = vs.iter().map(|x| m.mul_vec(x).unwrap()).collect();
        let lhs = wedge_action(&m, 3).unwrap().mul_vec(ExtVector::wedge(&[&vs[0], &vs[1], &vs[2]]).unwrap().coords()).unwrap();
        let rhs = ExtVector::wedge(&[&moved[0], &moved[1], &moved[2]]).unwrap();
        prop_assert_eq!(lhs.as_slice(), rhs.coords());
    }

    #[test]
    fn hom_action_is_functorial(a in picks(), b in picks()) {
        let gens = sl_generators(3).unwrap();
        let (x, y) = (word_in(&gens, &a), word_in(&gens, &b));
        let xy = hom_action(&x.mul(&y).unwrap()).unwrap();
        prop_assert_eq!(xy, hom_action(&x).unwrap().mul(&hom_action(&y).unwrap()).unwrap());
    }

    #[test]
    fn contraction_is_equivariant_on_products(a in picks(), genus in 2usize..=3, v in prop::collection::vec(-3i64..=3, 20)) {
        let form = SymplecticForm::new(genus).unwrap();
        let g = word_in(&sp_generators(genus).unwrap(), &a);
        let dim = wedge_action(&g, 3).unwrap().rows();
        let x = ExtVector::from_coords(2 * genus, 3, big(&v[..dim])).unwrap();
        let moved = ExtVector::from_coords(2 * genus, 3, wedge_action(&g, 3).unwrap().mul_vec(x.coords()).unwrap()).unwrap();
        prop_assert_eq!(contraction(&moved, &form).unwrap(), g.mul_vec(&contraction(&x, &form).unwrap()).unwrap());
    }
}

#[test]
fn contraction_commutes_with_every_sp_generator() {
    for genus in [2, 3] {
        let form = SymplecticForm::new(genus).unwrap();
        let c = contraction_matrix(2 * genus, &form).unwrap();
        for g in sp_generators(genus).unwrap() {
            assert!(form.preserves(&g));
            assert_eq!(c.mul(&wedge_action(&g, 3).unwrap()).unwrap(), g.mul(&c).unwrap());
        }
    }
}

#[test]
fn contraction_after_embedding_is_scalar() {
    for genus in 2..=4 {
        let form = SymplecticForm::new(genus).unwrap();
        for k in 0..2 * genus {
            let x = form.unit(k);
            let back = contraction(&embed_h(&x, &form).unwrap(), &form).unwrap();
            let expected: Vec<BigInt> = x.iter().map(|v| v * BigInt::from(genus as i64 - 1)).collect();
            assert_eq!(back, expected);
        }
    }
}

#[test]
fn sp4_mod_2_has_order_720() {
    let gens: Vec<Vec<i64>> = small_matrices(&sp_generators(2).unwrap());
    let mul = |a: &[i64], b: &[i64]| -> Vec<i64> {
        (0..16).map(|ij| (0..4).map(|k| a[(ij / 4) * 4 + k] * b[k * 4 + ij % 4]).sum::<i64>().rem_euclid(2)).collect()
    };
    let id: Vec<i64> = (0..16).map(|ij| (ij / 4 == ij % 4) as i64).collect();
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = mul(&x, g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    assert_eq!(seen.len(), 720);
}

#[test]
fn sl3_hom_orbit_matches_mod_5_oracle() {
    let gens: Vec<IntMatrix> = sl_generators(3).unwrap().iter().map(|g| hom_action(g).unwrap()).collect();
    for k in [0usize, 1, 5] {
        let mut seed = vec![0i64; 9];
        seed[k] = 1;
        let (orbit, span) = orbit_mod(&seed, &gens, 5, false);
        assert!(orbit > 1);
        assert_eq!(span, 9);
        let l = orbit_span(&big(&seed), &gens, DEFAULT_PASS_LIMIT).unwrap();
        assert_eq!(l.index(), LatticeIndex::Finite(BigInt::from(1)));
        assert_eq!(hermite_index(&integer_orbit(&big(&seed), &gens, 3), 9), Some(BigInt::one()));
    }
}

#[test]
fn sp6_johnson_class_orbit_matches_oracles() {
    let form = SymplecticForm::new(3).unwrap();
    let seed = johnson_class_curve_push(3, 1, &form.unit(form.e(2))).unwrap();
    let gens: Vec<IntMatrix> = sp_generators(3).unwrap().iter().map(|g| wedge_action(g, 3).unwrap()).collect();
    let (_, span) = orbit_mod(&to_i64(seed.coords()), &gens, 5, true);
    assert_eq!(span, 20);
    let io = sampled_orbit(seed.coords(), &gens, 600, 40);

    assert_eq!(hermite_index(&io, 20), Some(BigInt::one()));
    let l = orbit_span(seed.coords(), &gens, DEFAULT_PASS_LIMIT).unwrap();
    assert_eq!(l.rank(), 20);
    assert_eq!(l.index(), LatticeIndex::Finite(BigInt::from(1)));
    assert!(!contraction(&seed, &form).unwrap().iter().all(Zero::is_zero));
}
