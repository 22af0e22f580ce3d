//! Words in the free group `F_n = <a1, ..., an>` and automorphisms built from
//! Nielsen moves.
//!
//! Words are always freely reduced. Automorphisms carry an explicit inverse so
//! that every constructor can be checked by free reduction alone.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A signed generator letter. Stored as a nonzero `i32`: `k` is `a_k`, `-k` is
/// `a_k^{-1}`. Generator indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(i32);

impl Letter {
    pub fn new(index: usize, inverse: bool) -> Self {
        assert!(index >= 1, "generator indices are 1-based");
        let k = i32::try_from(index).expect("generator index fits in i32");
        Letter(if inverse { -k } else { k })
    }

    pub fn gen(index: usize) -> Self {
        Letter::new(index, false)
    }

    pub fn inv(index: usize) -> Self {
        Letter::new(index, true)
    }

    pub fn index(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> i32 {
        self.0.signum()
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "A{}", self.index())
        } else {
            write!(f, "a{}", self.index())
        }
    }
}

/// Above this many output letters `Word::power` switches to repeated squaring.
const POWER_SQUARING_THRESHOLD: usize = 256;

/// A freely reduced word over `rank` generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(rank: usize) -> Self {
        Word { rank, letters: Vec::new() }
    }

    pub fn generator(rank: usize, index: usize) -> Result<Self> {
        Word::reduce(rank, [Letter::gen(index)])
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn reduce(rank: usize, letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if l.index() > rank {
                return Err(Error::IndexOutOfRange { index: l.index(), rank });
            }
            push_reduced(&mut out, l);
        }
        Ok(Word { rank, letters: out })
    }

    /// Builds a word from signed integers (`2` is `a2`, `-2` is `A2`).
    pub fn from_signed(rank: usize, letters: &[i32]) -> Result<Self> {
        let mut ls = Vec::with_capacity(letters.len());
        for &x in letters {
            if x == 0 {
                return Err(Error::IndexOutOfRange { index: 0, rank });
            }
            ls.push(Letter::new(x.unsigned_abs() as usize, x < 0));
        }
        Word::reduce(rank, ls)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn to_signed(&self) -> Vec<i32> {
        self.letters.iter().map(|l| l.0).collect()
    }

    fn check_rank(&self, other: &Word) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank, right: other.rank });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        self.check_rank(other)?;
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        Ok(Word { rank: self.rank, letters: out })
    }

    pub fn invert(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn power(&self, e: i64) -> Word {
        let base = if e < 0 { self.invert() } else { self.clone() };
        let e = e.unsigned_abs();
        if e == 0 || base.is_empty() {
            return Word::identity(self.rank);
        }
        let out_len = (base.len() as u64).saturating_mul(e);
        if out_len <= POWER_SQUARING_THRESHOLD as u64 {
            let mut acc = Word::identity(self.rank);
            for _ in 0..e {
                acc = acc.multiply(&base).expect("same rank");
            }
            return acc;
        }
        let mut acc = Word::identity(self.rank);
        let mut sq = base;
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.multiply(&sq).expect("same rank");
            }
            k >>= 1;
            if k > 0 {
                sq = sq.multiply(&sq).expect("same rank");
            }
        }
        acc
    }

    /// `[u, v] = u v u^{-1} v^{-1}`.
    pub fn commutator(&self, other: &Word) -> Result<Word> {
        self.check_rank(other)?;
        self.multiply(other)?
            .multiply(&self.invert())?
            .multiply(&other.invert())
    }

    /// Text form `a1 A2 a3`. The empty word is written `1`; the parser accepts
    /// both `1` and the empty string.
    pub fn parse(rank: usize, text: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (inverse, digits) = match tok.as_bytes()[0] {
                b'a' => (false, &tok[1..]),
                b'A' => (true, &tok[1..]),
                _ => return Err(Error::Parse(format!("unexpected token `{tok}`"))),
            };
            let index: usize = digits
                .parse()
                .map_err(|_| Error::Parse(format!("bad generator index in `{tok}`")))?;
            if index == 0 || index > rank {
                return Err(Error::IndexOutOfRange { index, rank });
            }
            letters.push(Letter::new(index, inverse));
        }
        Word::reduce(rank, letters)
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// An endomorphism of `F_n`, given by the image of each generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Endomorphism {
    rank: usize,
    images: Vec<Word>,
}

impl Endomorphism {
    pub fn new(rank: usize, images: Vec<Word>) -> Result<Self> {
        if images.len() != rank {
            return Err(Error::Dimension { expected: rank, found: images.len() });
        }
        for w in &images {
            if w.rank != rank {
                return Err(Error::RankMismatch { left: rank, right: w.rank });
            }
        }
        Ok(Endomorphism { rank, images })
    }

    pub fn identity(rank: usize) -> Self {
        let images = (1..=rank).map(|i| Word::generator(rank, i).unwrap()).collect();
        Endomorphism { rank, images }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// Image of generator `a_index` (1-based).
    pub fn image(&self, index: usize) -> &Word {
        &self.images[index - 1]
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.apply_bounded(w, usize::MAX)
    }

    /// Like [`apply`](Self::apply) but refuses to build an unreduced image
    /// longer than `limit` letters.
    pub fn apply_bounded(&self, w: &Word, limit: usize) -> Result<Word> {
        if w.rank != self.rank {
            return Err(Error::RankMismatch { left: self.rank, right: w.rank });
        }
        let len: usize = w.letters.iter().map(|l| self.images[l.index() - 1].len()).sum();
        if len > limit {
            return Err(Error::LengthGuard { len, limit });
        }
        let mut out = Vec::with_capacity(len.min(1 << 16));
        for &l in &w.letters {
            let img = &self.images[l.index() - 1].letters;
            if l.is_inverse() {
                for &x in img.iter().rev() {
                    push_reduced(&mut out, x.inverse());
                }
            } else {
                for &x in img {
                    push_reduced(&mut out, x);
                }
            }
        }
        Ok(Word { rank: self.rank, letters: out })
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank, right: other.rank });
        }
        let images = other.images.iter().map(|w| self.apply(w)).collect::<Result<_>>()?;
        Ok(Endomorphism { rank: self.rank, images })
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, w)| w.letters.len() == 1 && w.letters[0] == Letter::gen(i + 1))
    }
}

/// Elementary Nielsen moves. Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NielsenMove {
    /// `a_i -> a_i a_j`
    RightTransvection { i: usize, j: usize },
    /// `a_i -> a_j a_i`
    LeftTransvection { i: usize, j: usize },
    /// `a_i -> a_i^{-1}`
    Inversion { i: usize },
    /// `a_i <-> a_j`
    Swap { i: usize, j: usize },
}

/// An automorphism of `F_n` together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Automorphism {
    forward: Endomorphism,
    backward: Endomorphism,
}

impl Automorphism {
    /// Checks that `forward` and `backward` are mutually inverse.
    pub fn new(forward: Endomorphism, backward: Endomorphism) -> Result<Self> {
        if forward.rank != backward.rank {
            return Err(Error::RankMismatch { left: forward.rank, right: backward.rank });
        }
        let f = Automorphism { forward, backward };
        f.verify()?;
        Ok(f)
    }

    fn from_images(rank: usize, forward: Vec<Word>, backward: Vec<Word>) -> Result<Self> {
        Automorphism::new(Endomorphism::new(rank, forward)?, Endomorphism::new(rank, backward)?)
    }

    pub fn verify(&self) -> Result<()> {
        if !self.forward.compose(&self.backward)?.is_identity() {
            return Err(Error::NotInverse("forward ∘ backward is not the identity".into()));
        }
        if !self.backward.compose(&self.forward)?.is_identity() {
            return Err(Error::NotInverse("backward ∘ forward is not the identity".into()));
        }
        Ok(())
    }

    pub fn identity(rank: usize) -> Self {
        Automorphism { forward: Endomorphism::identity(rank), backward: Endomorphism::identity(rank) }
    }

    pub fn rank(&self) -> usize {
        self.forward.rank
    }

    pub fn forward(&self) -> &Endomorphism {
        &self.forward
    }

    pub fn backward(&self) -> &Endomorphism {
        &self.backward
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.forward.apply(w)
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism { forward: self.backward.clone(), backward: self.forward.clone() }
    }

    /// `self ∘ other`; the inverse is `other⁻¹ ∘ self⁻¹`.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch { left: self.rank(), right: other.rank() });
        }
        let forward = self.forward.compose(&other.forward)?;
        let backward = other.backward.compose(&self.backward)?;
        Ok(Automorphism { forward, backward })
    }

    /// `[f, g] = f g f^{-1} g^{-1}`.
    pub fn commutator(&self, other: &Automorphism) -> Result<Automorphism> {
        self.compose(other)?.compose(&self.inverse())?.compose(&other.inverse())
    }

    pub fn power(&self, e: i64) -> Result<Automorphism> {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = Automorphism::identity(self.rank());
        for _ in 0..e.unsigned_abs() {
            acc = acc.compose(&base)?;
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        self.forward.is_identity()
    }

    pub fn nielsen(rank: usize, mv: NielsenMove) -> Result<Automorphism> {
        let check = |i: usize| {
            if i == 0 || i > rank {
                Err(Error::IndexOutOfRange { index: i, rank })
            } else {
                Ok(())
            }
        };
        let distinct = |i: usize, j: usize| {
            check(i)?;
            check(j)?;
            if i == j {
                return Err(Error::InvalidArgument(format!("Nielsen move needs i != j, got {i}")));
            }
            Ok(())
        };
        let gens: Vec<Word> = (1..=rank).map(|k| Word::generator(rank, k).unwrap()).collect();
        let mut fwd = gens.clone();
        let mut bwd = gens.clone();
        let ai = |i: usize| gens[i - 1].clone();
        match mv {
            NielsenMove::RightTransvection { i, j } => {
                distinct(i, j)?;
                fwd[i - 1] = ai(i).multiply(&ai(j))?;
                bwd[i - 1] = ai(i).multiply(&ai(j).invert())?;
            }
            NielsenMove::LeftTransvection { i, j } => {
                distinct(i, j)?;
                fwd[i - 1] = ai(j).multiply(&ai(i))?;
                bwd[i - 1] = ai(j).invert().multiply(&ai(i))?;
            }
            NielsenMove::Inversion { i } => {
                check(i)?;
                fwd[i - 1] = ai(i).invert();
                bwd[i - 1] = ai(i).invert();
            }
            NielsenMove::Swap { i, j } => {
                distinct(i, j)?;
                fwd.swap(i - 1, j - 1);
                bwd.swap(i - 1, j - 1);
            }
        }
        Automorphism::from_images(rank, fwd, bwd)
    }

    /// `a_i -> a_i u` for a word `u` not involving `a_i`; the inverse is
    /// `a_i -> a_i u^{-1}`.
    fn right_multiplier(rank: usize, i: usize, u: &Word) -> Result<Automorphism> {
        if u.letters.iter().any(|l| l.index() == i) {
            return Err(Error::InvalidArgument(format!("multiplier involves a{i}")));
        }
        let gens: Vec<Word> = (1..=rank).map(|k| Word::generator(rank, k).unwrap()).collect();
        let mut fwd = gens.clone();
        let mut bwd = gens.clone();
        fwd[i - 1] = gens[i - 1].multiply(u)?;
        bwd[i - 1] = gens[i - 1].multiply(&u.invert())?;
        Automorphism::from_images(rank, fwd, bwd)
    }

    /// The kernel automorphism `a1 -> a1 [a2^e, a3^e]`, fixing every other
    /// generator.
    pub fn paper_phi(rank: usize, e: u32) -> Result<Automorphism> {
        if rank < 3 {
            return Err(Error::InvalidArgument(format!("rank must be at least 3, got {rank}")));
        }
        if e == 0 {
            return Err(Error::InvalidArgument("exponent must be positive".into()));
        }
        let a2 = Word::generator(rank, 2)?.power(e as i64);
        let a3 = Word::generator(rank, 3)?.power(e as i64);
        Automorphism::right_multiplier(rank, 1, &a2.commutator(&a3)?)
    }

    /// The same map as [`paper_phi`](Self::paper_phi), assembled as the product
    /// `R2^e R3^e R2^{-e} R3^{-e}` of right transvections `R_j: a1 -> a1 a_j`.
    pub fn paper_phi_nielsen_product(rank: usize, e: u32) -> Result<Automorphism> {
        if rank < 3 || e == 0 {
            return Err(Error::InvalidArgument("need rank >= 3 and e >= 1".into()));
        }
        let r2 = Automorphism::nielsen(rank, NielsenMove::RightTransvection { i: 1, j: 2 })?;
        let r3 = Automorphism::nielsen(rank, NielsenMove::RightTransvection { i: 1, j: 3 })?;
        let e = e as i64;
        r2.power(e)?
            .compose(&r3.power(e)?)?
            .compose(&r2.power(-e)?)?
            .compose(&r3.power(-e)?)
    }

    /// Conjugation move `a_i -> a_j^{-1} a_i a_j`.
    pub fn conjugation_move(rank: usize, i: usize, j: usize) -> Result<Automorphism> {
        if i == 0 || j == 0 || i > rank || j > rank || i == j {
            return Err(Error::InvalidArgument(format!("bad conjugation move ({i}, {j})")));
        }
        let gens: Vec<Word> = (1..=rank).map(|k| Word::generator(rank, k).unwrap()).collect();
        let (ai, aj) = (&gens[i - 1], &gens[j - 1]);
        let mut fwd = gens.clone();
        let mut bwd = gens.clone();
        fwd[i - 1] = aj.invert().multiply(ai)?.multiply(aj)?;
        bwd[i - 1] = aj.multiply(ai)?.multiply(&aj.invert())?;
        Automorphism::from_images(rank, fwd, bwd)
    }

    /// Commutator move `a_i -> a_i [a_j, a_k]`.
    pub fn commutator_move(rank: usize, i: usize, j: usize, k: usize) -> Result<Automorphism> {
        if [i, j, k].iter().any(|&x| x == 0 || x > rank) || i == j || j == k || i == k {
            return Err(Error::InvalidArgument(format!("bad commutator move ({i}, {j}, {k})")));
        }
        let aj = Word::generator(rank, j)?;
        let ak = Word::generator(rank, k)?;
        Automorphism::right_multiplier(rank, i, &aj.commutator(&ak)?)
    }

    /// Magnus generators of IA_n: all conjugation moves `(i, j)`, then all
    /// commutator moves `(i, j, k)` with `j < k`.
    pub fn ia_generators(rank: usize) -> Result<Vec<Automorphism>> {
        if rank < 3 {
            return Err(Error::InvalidArgument(format!("rank must be at least 3, got {rank}")));
        }
        Ok(ia_generator_labels(rank)
            .into_iter()
            .map(|g| g.build(rank).expect("valid IA generator"))
            .collect())
    }
}

/// Label of a Magnus IA-generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IaGenerator {
    Conjugation { i: usize, j: usize },
    Commutator { i: usize, j: usize, k: usize },
}

impl IaGenerator {
    pub fn build(self, rank: usize) -> Result<Automorphism> {
        match self {
            IaGenerator::Conjugation { i, j } => Automorphism::conjugation_move(rank, i, j),
            IaGenerator::Commutator { i, j, k } => Automorphism::commutator_move(rank, i, j, k),
        }
    }
}

impl fmt::Display for IaGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IaGenerator::Conjugation { i, j } => write!(f, "c({i},{j})"),
            IaGenerator::Commutator { i, j, k } => write!(f, "m({i},{j},{k})"),
        }
    }
}

/// Labels in the same order as [`Automorphism::ia_generators`].
pub fn ia_generator_labels(rank: usize) -> Vec<IaGenerator> {
    let mut out = Vec::new();
    for i in 1..=rank {
        for j in 1..=rank {
            if i != j {
                out.push(IaGenerator::Conjugation { i, j });
            }
        }
    }
    for i in 1..=rank {
        for j in 1..=rank {
            for k in (j + 1)..=rank {
                if i != j && i != k {
                    out.push(IaGenerator::Commutator { i, j, k });
                }
            }
        }
    }
    out
}

impl FromStr for NielsenMove {
    type Err = Error;

    /// `r(i,j)`, `l(i,j)`, `i(i)`, `s(i,j)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let open = s.find('(').ok_or_else(|| Error::Parse(format!("bad move `{s}`")))?;
        if !s.ends_with(')') {
            return Err(Error::Parse(format!("bad move `{s}`")));
        }
        let args: Vec<usize> = s[open + 1..s.len() - 1]
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad index in `{s}`"))))
            .collect::<Result<_>>()?;
        match (&s[..open], args.as_slice()) {
            ("r", &[i, j]) => Ok(NielsenMove::RightTransvection { i, j }),
            ("l", &[i, j]) => Ok(NielsenMove::LeftTransvection { i, j }),
            ("i", &[i]) => Ok(NielsenMove::Inversion { i }),
            ("s", &[i, j]) => Ok(NielsenMove::Swap { i, j }),
            _ => Err(Error::Parse(format!("bad move `{s}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(rank: usize, xs: &[i32]) -> Word {
        Word::from_signed(rank, xs).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(w(3, &[1, -1, 2]).to_signed(), vec![2]);
        assert!(w(3, &[]).is_empty());
        assert_eq!(w(3, &[1, 2, -2, 1]).to_signed(), vec![1, 1]);
        assert!(matches!(
            Word::from_signed(2, &[3]),
            Err(Error::IndexOutOfRange { index: 3, rank: 2 })
        ));
    }

    #[test]
    fn group_operations() {
        assert!(w(3, &[1]).multiply(&w(3, &[-1])).unwrap().is_empty());
        assert_eq!(w(3, &[1, 2]).invert().to_signed(), vec![-2, -1]);
        assert_eq!(w(3, &[2]).power(3).to_signed(), vec![2, 2, 2]);
        assert_eq!(w(3, &[1, 2]).power(-2).to_signed(), vec![-2, -1, -2, -1]);
        assert!(matches!(
            w(3, &[1]).multiply(&w(2, &[1])),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn long_power_uses_squaring_path() {
        let u = w(3, &[1, 2, -3]);
        let p = u.power(1000);
        assert_eq!(p.len(), 3000);
        let naive = (0..1000).fold(Word::identity(3), |acc, _| acc.multiply(&u).unwrap());
        assert_eq!(p, naive);
    }

    #[test]
    fn commutator_examples() {
        assert_eq!(w(3, &[2]).commutator(&w(3, &[3])).unwrap().to_signed(), vec![2, 3, -2, -3]);
        assert!(w(3, &[1]).commutator(&w(3, &[1])).unwrap().is_empty());
        assert_eq!(
            w(3, &[2, 2]).commutator(&w(3, &[3, 3])).unwrap().to_signed(),
            vec![2, 2, 3, 3, -2, -2, -3, -3]
        );
    }

    #[test]
    fn parse_and_display() {
        let u = Word::parse(3, "a1 A2 a3").unwrap();
        assert_eq!(u.to_signed(), vec![1, -2, 3]);
        assert_eq!(u.to_string(), "a1 A2 a3");
        assert_eq!(Word::parse(3, "1").unwrap(), Word::identity(3));
        assert_eq!(Word::identity(3).to_string(), "1");
        assert!(matches!(Word::parse(3, "a0"), Err(Error::IndexOutOfRange { index: 0, .. })));
        assert!(matches!(Word::parse(3, "a4"), Err(Error::IndexOutOfRange { index: 4, .. })));
        assert!(matches!(Word::parse(3, "b1"), Err(Error::Parse(_))));
        assert!(matches!(Word::parse(3, "a"), Err(Error::Parse(_))));
    }

    #[test]
    fn apply_examples() {
        let id = Endomorphism::identity(3);
        let u = w(3, &[1, -2, 3, 3]);
        assert_eq!(id.apply(&u).unwrap(), u);

        let phi = Automorphism::paper_phi(3, 2).unwrap();
        assert_eq!(
            phi.apply(&w(3, &[1])).unwrap().to_signed(),
            vec![1, 2, 2, 3, 3, -2, -2, -3, -3]
        );
        let r12 = Automorphism::nielsen(3, NielsenMove::RightTransvection { i: 1, j: 2 }).unwrap();
        assert_eq!(r12.apply(&w(3, &[1])).unwrap().to_signed(), vec![1, 2]);
    }

    #[test]
    fn apply_respects_length_guard() {
        let phi = Automorphism::paper_phi(3, 2).unwrap();
        let u = w(3, &[1, 1, 1]);
        assert!(matches!(
            phi.forward().apply_bounded(&u, 10),
            Err(Error::LengthGuard { len: 27, limit: 10 })
        ));
    }

    #[test]
    fn compose_examples() {
        let r12 = Automorphism::nielsen(3, NielsenMove::RightTransvection { i: 1, j: 2 }).unwrap();
        assert!(r12.compose(&r12.inverse()).unwrap().is_identity());
        assert_eq!(Automorphism::identity(3).compose(&r12).unwrap(), r12);
        let sq = r12.compose(&r12).unwrap();
        assert_eq!(sq.apply(&w(3, &[1])).unwrap().to_signed(), vec![1, 2, 2]);
    }

    #[test]
    fn broken_inverse_is_rejected() {
        let fwd = Automorphism::nielsen(3, NielsenMove::RightTransvection { i: 1, j: 2 })
            .unwrap()
            .forward()
            .clone();
        let err = Automorphism::new(fwd.clone(), fwd).unwrap_err();
        assert!(matches!(err, Error::NotInverse(_)));
    }

    #[test]
    fn paper_phi_examples() {
        let phi1 = Automorphism::paper_phi(3, 1).unwrap();
        assert_eq!(phi1.forward().image(1).to_signed(), vec![1, 2, 3, -2, -3]);
        let phi2 = Automorphism::paper_phi(3, 2).unwrap();
        assert_eq!(phi2.forward().image(2).to_signed(), vec![2]);
        assert!(phi2.compose(&phi2.inverse()).unwrap().is_identity());
        assert!(Automorphism::paper_phi(2, 1).is_err());
        assert!(Automorphism::paper_phi(3, 0).is_err());
    }

    #[test]
    fn paper_phi_is_a_product_of_transvections() {
        for n in 3..=5 {
            for e in 1..=3 {
                let direct = Automorphism::paper_phi(n, e).unwrap();
                let product = Automorphism::paper_phi_nielsen_product(n, e).unwrap();
                assert_eq!(direct.forward(), product.forward());
                assert_eq!(direct.backward(), product.backward());
            }
        }
    }

    #[test]
    fn ia_generator_examples() {
        let c12 = Automorphism::conjugation_move(3, 1, 2).unwrap();
        assert_eq!(c12.forward().image(1).to_signed(), vec![-2, 1, 2]);
        let m123 = Automorphism::commutator_move(3, 1, 2, 3).unwrap();
        assert_eq!(m123, Automorphism::paper_phi(3, 1).unwrap());
        let gens = Automorphism::ia_generators(4).unwrap();
        // n(n-1) conjugations plus n*C(n-1,2) commutator moves
        assert_eq!(gens.len(), 12 + 12);
        for g in &gens {
            g.verify().unwrap();
        }
        assert_eq!(ia_generator_labels(4).len(), gens.len());
    }

    #[test]
    fn nielsen_move_parsing() {
        assert_eq!("r(1,2)".parse::<NielsenMove>().unwrap(), NielsenMove::RightTransvection { i: 1, j: 2 });
        assert_eq!("i(3)".parse::<NielsenMove>().unwrap(), NielsenMove::Inversion { i: 3 });
        assert!("q(1,2)".parse::<NielsenMove>().is_err());
        assert!(Automorphism::nielsen(3, NielsenMove::Swap { i: 2, j: 2 }).is_err());
    }
}
