//! Finite regular covers of the wedge of `n` circles and the homological
//! representation `ρ_K: Aut(F_n) ⊇ Stab(K) → GL(H_1(K, Z))`.
//!
//! The cover of a quotient `F_n → Q` (|Q| = m) is the Schreier graph on
//! `{0..m-1}`: edge `(v, i)` runs from `v` to `σ_i(v)`. A BFS spanning tree from
//! vertex 0 fixes the basis of `H_1`: one loop per non-tree edge, indexed in
//! `(v, i)` order.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freegroup::{Automorphism, Letter, Word};
use crate::intlattice::IntMatrix;

pub const DEFAULT_LENGTH_GUARD: usize = 1_000_000;
pub const DEFAULT_DECK_BOUND: usize = 4096;

/// Action of the generators on the cosets of `K`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuotientSpec {
    rank: usize,
    degree: usize,
    perms: Vec<Vec<usize>>,
}

/// On-disk form: explicit permutations or the `(Z/q)^n` shorthand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuotientSpecFile {
    Explicit { rank: usize, degree: usize, perms: Vec<Vec<usize>> },
    AbelianModQ { rank: usize, #[serde(rename = "mod")] modulus: usize },
}

impl QuotientSpec {
    pub fn new(rank: usize, perms: Vec<Vec<usize>>) -> Result<Self> {
        if perms.len() != rank {
            return Err(Error::Dimension { expected: rank, found: perms.len() });
        }
        let degree = perms.first().map_or(0, Vec::len);
        if degree == 0 {
            return Err(Error::InvalidArgument("quotient degree must be positive".into()));
        }
        for p in &perms {
            if p.len() != degree {
                return Err(Error::Dimension { expected: degree, found: p.len() });
            }
            let mut seen = vec![false; degree];
            for &x in p {
                if x >= degree || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidArgument("generator action is not a permutation".into()));
                }
            }
        }
        Ok(QuotientSpec { rank, degree, perms })
    }

    /// `F_n → (Z/q)^n`, the kernel of reduction of abelianization mod `q`.
    /// Vertex `Σ x_i q^{i-1}` is the tuple `(x_1, ..., x_n)`.
    pub fn abelian_mod_q(rank: usize, q: usize) -> Result<Self> {
        if q < 2 || rank == 0 {
            return Err(Error::InvalidArgument(format!("need rank >= 1 and q >= 2, got ({rank}, {q})")));
        }
        let degree = q
            .checked_pow(rank as u32)
            .ok_or_else(|| Error::InvalidArgument("quotient too large".into()))?;
        let perms = (0..rank)
            .map(|i| {
                let step = q.pow(i as u32);
                (0..degree)
                    .map(|v| {
                        let digit = (v / step) % q;
                        if digit + 1 == q { v - digit * step } else { v + step }
                    })
                    .collect()
            })
            .collect();
        QuotientSpec::new(rank, perms)
    }

    /// Right-regular action of a finite group given by its multiplication
    /// table (`table[a][b] = a·b`, element 0 the identity); generator `i` maps
    /// to group element `images[i]`.
    pub fn right_regular(table: &[Vec<usize>], images: &[usize]) -> Result<Self> {
        let perms = images
            .iter()
            .map(|&g| (0..table.len()).map(|x| table[x][g]).collect())
            .collect();
        QuotientSpec::new(images.len(), perms)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    pub fn from_file(file: QuotientSpecFile) -> Result<Self> {
        match file {
            QuotientSpecFile::Explicit { rank, degree, perms } => {
                let spec = QuotientSpec::new(rank, perms)?;
                if spec.degree != degree {
                    return Err(Error::Dimension { expected: degree, found: spec.degree });
                }
                Ok(spec)
            }
            QuotientSpecFile::AbelianModQ { rank, modulus } => QuotientSpec::abelian_mod_q(rank, modulus),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: QuotientSpecFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("quotient spec: {e}")))?;
        QuotientSpec::from_file(file)
    }

    pub fn to_file(&self) -> QuotientSpecFile {
        QuotientSpecFile::Explicit { rank: self.rank, degree: self.degree, perms: self.perms.clone() }
    }
}

/// Cycle-space coordinates: signed traversal counts of non-tree edges.
pub type CycleVector = Vec<i64>;

/// The cover graph with its spanning tree and `H_1` basis.
#[derive(Debug, Clone)]
pub struct CoverGraph {
    spec: QuotientSpec,
    inv_perms: Vec<Vec<usize>>,
    /// Word spelling the tree path from 0 to each vertex.
    tree_words: Vec<Word>,
    /// `nontree_index[v * n + i]` for edge `(v, i)`.
    nontree_index: Vec<Option<usize>>,
    nontree_edges: Vec<(usize, usize)>,
    /// `elements[v][x] = x · w_v`, the permutation of the group element at `v`.
    elements: Vec<Vec<usize>>,
    length_guard: usize,
}

impl CoverGraph {
    pub fn build(spec: QuotientSpec) -> Result<Self> {
        let (n, m) = (spec.rank, spec.degree);
        let inv_perms: Vec<Vec<usize>> = spec
            .perms
            .iter()
            .map(|p| {
                let mut inv = vec![0; m];
                for (x, &y) in p.iter().enumerate() {
                    inv[y] = x;
                }
                inv
            })
            .collect();

        let mut tree_words: Vec<Option<Word>> = vec![None; m];
        let mut is_tree = vec![false; m * n];
        tree_words[0] = Some(Word::identity(n));
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for i in 0..n {
                for inverse in [false, true] {
                    let (u, edge) = if inverse {
                        let u = inv_perms[i][v];
                        (u, u * n + i)
                    } else {
                        (spec.perms[i][v], v * n + i)
                    };
                    if tree_words[u].is_none() {
                        let step = Word::reduce(n, [Letter::new(i + 1, inverse)])?;
                        tree_words[u] = Some(tree_words[v].as_ref().unwrap().multiply(&step)?);
                        is_tree[edge] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        if let Some(v) = tree_words.iter().position(Option::is_none) {
            return Err(Error::NotRegular(format!("action is not transitive: vertex {v} unreachable")));
        }
        let tree_words: Vec<Word> = tree_words.into_iter().map(Option::unwrap).collect();

        let mut nontree_index = vec![None; m * n];
        let mut nontree_edges = Vec::with_capacity(m * (n.saturating_sub(1)) + 1);
        for v in 0..m {
            for i in 0..n {
                if !is_tree[v * n + i] {
                    nontree_index[v * n + i] = Some(nontree_edges.len());
                    nontree_edges.push((v, i));
                }
            }
        }

        let mut graph = CoverGraph {
            spec,
            inv_perms,
            tree_words,
            nontree_index,
            nontree_edges,
            elements: Vec::new(),
            length_guard: DEFAULT_LENGTH_GUARD,
        };
        graph.elements = graph.element_permutations()?;
        Ok(graph)
    }

    /// Permutation `x ↦ x·w_v` for each vertex; fails unless these `m`
    /// permutations are closed under the generators, i.e. the action is
    /// regular.
    fn element_permutations(&self) -> Result<Vec<Vec<usize>>> {
        let m = self.spec.degree;
        let elements: Vec<Vec<usize>> = (0..m)
            .map(|v| (0..m).map(|x| self.trace(&self.tree_words[v], x)).collect())
            .collect();
        for v in 0..m {
            for (i, sigma) in self.spec.perms.iter().enumerate() {
                let target = sigma[v];
                if (0..m).any(|x| sigma[elements[v][x]] != elements[target][x]) {
                    return Err(Error::NotRegular(format!(
                        "generator {} does not act through a group of order {m}",
                        i + 1
                    )));
                }
            }
        }
        Ok(elements)
    }

    pub fn with_length_guard(mut self, limit: usize) -> Self {
        self.length_guard = limit;
        self
    }

    pub fn spec(&self) -> &QuotientSpec {
        &self.spec
    }

    pub fn rank(&self) -> usize {
        self.spec.rank
    }

    pub fn degree(&self) -> usize {
        self.spec.degree
    }

    pub fn edge_count(&self) -> usize {
        self.spec.rank * self.spec.degree
    }

    /// Rank of `H_1`, `m(n-1) + 1`.
    pub fn h1_rank(&self) -> usize {
        self.nontree_edges.len()
    }

    /// Non-tree edges `(vertex, generator)` with 0-based generator index.
    pub fn nontree_edges(&self) -> &[(usize, usize)] {
        &self.nontree_edges
    }

    pub fn tree_word(&self, v: usize) -> &Word {
        &self.tree_words[v]
    }

    /// Endpoint of the path spelled by `w` starting at `start`.
    pub fn trace(&self, w: &Word, start: usize) -> usize {
        w.letters().iter().fold(start, |v, l| self.step(v, *l))
    }

    fn step(&self, v: usize, l: Letter) -> usize {
        if l.is_inverse() {
            self.inv_perms[l.index() - 1][v]
        } else {
            self.spec.perms[l.index() - 1][v]
        }
    }

    fn check_rank(&self, w: &Word) -> Result<()> {
        if w.rank() != self.rank() {
            return Err(Error::RankMismatch { left: self.rank(), right: w.rank() });
        }
        Ok(())
    }

    /// `w ∈ K`.
    pub fn member(&self, w: &Word) -> Result<bool> {
        self.check_rank(w)?;
        Ok(self.trace(w, 0) == 0)
    }

    /// Class of a closed path spelled by `w` from `start`.
    pub fn loop_class(&self, w: &Word, start: usize) -> Result<CycleVector> {
        self.check_rank(w)?;
        let n = self.rank();
        let mut c = vec![0i64; self.h1_rank()];
        let mut v = start;
        for &l in w.letters() {
            let i = l.index() - 1;
            if l.is_inverse() {
                let u = self.inv_perms[i][v];
                if let Some(k) = self.nontree_index[u * n + i] {
                    c[k] -= 1;
                }
                v = u;
            } else {
                if let Some(k) = self.nontree_index[v * n + i] {
                    c[k] += 1;
                }
                v = self.spec.perms[i][v];
            }
        }
        if v != start {
            return Err(Error::NotInSubgroup { end: v });
        }
        Ok(c)
    }

    /// Class in `H_1(K)` of `w ∈ K`.
    pub fn h1_class(&self, w: &Word) -> Result<CycleVector> {
        self.loop_class(w, 0)
    }

    /// Tree path to the tail, the edge, and the tree path back from the head.
    pub fn basis_loop_word(&self, e: usize) -> Result<Word> {
        let &(v, i) = self
            .nontree_edges
            .get(e)
            .ok_or_else(|| Error::InvalidArgument(format!("no non-tree edge {e}")))?;
        let head = self.spec.perms[i][v];
        self.tree_words[v]
            .multiply(&Word::generator(self.rank(), i + 1)?)?
            .multiply(&self.tree_words[head].invert())
    }

    fn column_matrix(&self, cols: Vec<CycleVector>) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> =
            cols.into_iter().map(|c| c.into_iter().map(BigInt::from).collect()).collect();
        IntMatrix::from_columns(self.h1_rank(), &cols).expect("columns have length r")
    }

    /// `ρ_K(f)`: column `e` is the class of `f(basis loop e)`.
    pub fn rho(&self, f: &Automorphism) -> Result<IntMatrix> {
        if f.rank() != self.rank() {
            return Err(Error::RankMismatch { left: self.rank(), right: f.rank() });
        }
        let mut cols = Vec::with_capacity(self.h1_rank());
        for e in 0..self.h1_rank() {
            let img = f.forward().apply_bounded(&self.basis_loop_word(e)?, self.length_guard)?;
            if self.trace(&img, 0) != 0 {
                return Err(Error::NotInvariant { edge: e });
            }
            cols.push(self.h1_class(&img)?);
        }
        let m = self.column_matrix(cols);
        if !m.determinant()?.abs().is_one() {
            return Err(Error::NotUnimodular);
        }
        Ok(m)
    }

    /// The deck transformation sending vertex 0 to `u` maps `v ↦ u · w_v`.
    pub fn deck_vertex_map(&self, u: usize) -> Vec<usize> {
        (0..self.degree()).map(|v| self.elements[v][u]).collect()
    }

    /// Action on `H_1` of the deck transformation taking 0 to `u`.
    pub fn deck_matrix(&self, u: usize) -> Result<IntMatrix> {
        if u >= self.degree() {
            return Err(Error::InvalidArgument(format!("no vertex {u}")));
        }
        let cols = (0..self.h1_rank())
            .map(|e| self.loop_class(&self.basis_loop_word(e)?, u))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.column_matrix(cols))
    }

    /// Deck matrices indexed by the image of vertex 0.
    pub fn deck_matrices(&self) -> Result<Vec<IntMatrix>> {
        (0..self.degree()).map(|u| self.deck_matrix(u)).collect()
    }

    /// Whether `M` normalizes the image of the deck group: `M d M^{-1}` and
    /// `M^{-1} d M` lie in `D_*` for every `d ∈ D_*`.
    pub fn normalizes_deck(&self, m: &IntMatrix) -> Result<bool> {
        self.normalizes_deck_bounded(m, DEFAULT_DECK_BOUND)
    }

    pub fn normalizes_deck_bounded(&self, m: &IntMatrix, bound: usize) -> Result<bool> {
        if self.degree() > bound {
            return Err(Error::EnumerationBound { size: self.degree(), bound });
        }
        if m.rows() != self.h1_rank() || m.cols() != self.h1_rank() {
            return Err(Error::Dimension { expected: self.h1_rank(), found: m.rows() });
        }
        let inv = m.inverse_unimodular()?;
        let deck = self.deck_matrices()?;
        let set: HashSet<&IntMatrix> = deck.iter().collect();
        for d in &deck {
            if !set.contains(&m.mul(d)?.mul(&inv)?) || !set.contains(&inv.mul(d)?.mul(m)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
