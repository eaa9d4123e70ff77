//! Matroids from graphs and vector configurations, and their
//! characteristic polynomials.
//!
//! Subsets of the ground set are `u64` bitmasks, so ground sets have at most
//! 64 elements; the exponential algorithms here are meant for a few dozen
//! elements at most anyway.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{binomial, linalg, rat, ExactRational, UnivariatePolynomial};

/// An undirected multigraph; loops and parallel edges are allowed.
/// Vertices are `0..vertex_count` internally and 1-based in text form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= vertex_count || v >= vertex_count) {
            return Err(Error::InvalidInput(format!(
                "edge ({}, {}) has an endpoint outside 1..{vertex_count}",
                u + 1,
                v + 1
            )));
        }
        if edges.len() > 64 {
            return Err(Error::OutOfRange(format!("{} edges exceed the 64-element limit", edges.len())));
        }
        Ok(Self { vertex_count, edges })
    }

    pub fn cycle(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).expect("valid cycle")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self::new(n, edges).expect("valid complete graph")
    }

    pub fn edgeless(n: usize) -> Self {
        Self { vertex_count: n, edges: Vec::new() }
    }

    /// Parses `"v e"` followed by `e` lines `"i j"` with 1-based vertices.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty graph file".into()))?;
        let [v, e] = parse_numbers::<2>(header)?;
        let mut edges = Vec::with_capacity(e);
        for _ in 0..e {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("expected {e} edge lines")))?;
            let [i, j] = parse_numbers::<2>(line)?;
            if i == 0 || j == 0 {
                return Err(Error::Parse(format!("vertices are 1-based, got \"{line}\"")));
            }
            edges.push((i - 1, j - 1));
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("unexpected trailing line \"{extra}\"")));
        }
        Self::new(v, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_loop(&self) -> bool {
        self.edges.iter().any(|(u, v)| u == v)
    }

    /// Number of connected components, isolated vertices included.
    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertex_count);
        let merges = self.edges.iter().filter(|&&(u, v)| uf.union(u, v)).count();
        self.vertex_count - merges
    }

    /// Rank of an edge subset in the cycle matroid: the size of a spanning
    /// forest of those edges.
    fn forest_rank(&self, subset: u64) -> usize {
        let mut uf = UnionFind::new(self.vertex_count);
        self.edges
            .iter()
            .enumerate()
            .filter(|(k, _)| subset >> k & 1 == 1)
            .filter(|(_, &(u, v))| uf.union(u, v))
            .count()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.vertex_count, self.edges.len())?;
        for (u, v) in &self.edges {
            writeln!(f, "{} {}", u + 1, v + 1)?;
        }
        Ok(())
    }
}

fn parse_numbers<const N: usize>(line: &str) -> Result<[usize; N]> {
    let values: Vec<usize> = line
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("\"{t}\": {e}"))))
        .collect::<Result<_>>()?;
    values.try_into().map_err(|v: Vec<usize>| Error::Parse(format!("expected {N} numbers, got {}", v.len())))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Returns false when `a` and `b` were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

#[derive(Clone, Debug)]
enum Realization {
    Graphic(Graph),
    /// Independence of `{e_i}` modulo the row span of `basis`.
    Quotient { basis: linalg::Matrix, base_rank: usize },
    /// Independence of the columns of a matrix.
    Columns { columns: Vec<Vec<ExactRational>> },
    Uniform { rank: usize },
}

/// A matroid on `{0, ..., ground_size - 1}` given by a rank oracle.
#[derive(Clone, Debug)]
pub struct Matroid {
    ground_size: usize,
    realization: Realization,
}

impl Matroid {
    /// The uniform matroid `U_{r,n}`: every set of size at most `r` is independent.
    pub fn uniform(rank: usize, size: usize) -> Result<Self> {
        if rank > size || size > 64 {
            return Err(Error::OutOfRange(format!("U_{{{rank},{size}}} needs rank <= size <= 64")));
        }
        Ok(Self { ground_size: size, realization: Realization::Uniform { rank } })
    }

    /// Column matroid of a matrix: a set of columns is independent when the
    /// vectors are linearly independent. For a matrix whose rows span `L`,
    /// this is the matroid of the coordinate functionals restricted to `L`
    /// (rank `dim L`).
    pub fn from_columns(rows: &[Vec<ExactRational>]) -> Result<Self> {
        let width = check_rows(rows)?;
        let columns = (0..width).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
        Ok(Self { ground_size: width, realization: Realization::Columns { columns } })
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn ground_set(&self) -> u64 {
        if self.ground_size == 64 {
            u64::MAX
        } else {
            (1u64 << self.ground_size) - 1
        }
    }

    /// Rank of a subset given as a bitmask.
    pub fn rank(&self, subset: u64) -> usize {
        let subset = subset & self.ground_set();
        match &self.realization {
            Realization::Graphic(g) => g.forest_rank(subset),
            Realization::Uniform { rank } => (subset.count_ones() as usize).min(*rank),
            Realization::Quotient { basis, base_rank } => {
                let mut rows = basis.clone();
                for i in bits(subset) {
                    let mut e = vec![ExactRational::zero(); self.ground_size];
                    e[i] = ExactRational::one();
                    rows.push(e);
                }
                linalg::rank(&rows) - base_rank
            }
            Realization::Columns { columns } => {
                let chosen: Vec<Vec<ExactRational>> = bits(subset).map(|i| columns[i].clone()).collect();
                linalg::rank(&chosen)
            }
        }
    }

    pub fn rank_of(&self, elements: &[usize]) -> usize {
        self.rank(elements.iter().fold(0u64, |acc, &e| acc | 1 << e))
    }

    pub fn full_rank(&self) -> usize {
        self.rank(self.ground_set())
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.rank(1 << e) == 0
    }

    pub fn has_loop(&self) -> bool {
        (0..self.ground_size).any(|e| self.is_loop(e))
    }
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

fn check_rows(rows: &[Vec<ExactRational>]) -> Result<usize> {
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(Error::InvalidInput("matrix rows have different lengths".into()));
    }
    if width > 64 {
        return Err(Error::OutOfRange(format!("{width} columns exceed the 64-element limit")));
    }
    Ok(width)
}

/// The cycle matroid of a graph: edges are the ground set, forests are independent.
pub fn matroid_from_graph(g: &Graph) -> Matroid {
    Matroid { ground_size: g.edges.len(), realization: Realization::Graphic(g.clone()) }
}

/// Matroid on `[N]` in which `S` is independent when `{e_i | i ∈ S}` is
/// linearly independent modulo the span `L` of the given rows, i.e.
/// `rank(S) = rank(L + span{e_i}) - dim L`.
pub fn matroid_from_subspace(rows: &[Vec<ExactRational>]) -> Result<Matroid> {
    let width = check_rows(rows)?;
    let basis = linalg::row_basis(rows);
    let base_rank = basis.len();
    Ok(Matroid { ground_size: width, realization: Realization::Quotient { basis, base_rank } })
}

/// Characteristic polynomial by deletion–contraction on the rank oracle.
pub fn characteristic_polynomial(m: &Matroid) -> UnivariatePolynomial {
    let minor = Minor { matroid: m, deleted: 0, contracted: 0 };
    minor.characteristic_polynomial()
}

/// A minor `M \ D / C`, ranked by `r(S ∪ C) - r(C)`.
struct Minor<'a> {
    matroid: &'a Matroid,
    deleted: u64,
    contracted: u64,
}

impl Minor<'_> {
    fn ground(&self) -> u64 {
        self.matroid.ground_set() & !self.deleted & !self.contracted
    }

    fn rank(&self, s: u64) -> usize {
        self.matroid.rank(s | self.contracted) - self.matroid.rank(self.contracted)
    }

    fn characteristic_polynomial(&self) -> UnivariatePolynomial {
        let ground = self.ground();
        if ground == 0 {
            return UnivariatePolynomial::constant(ExactRational::one());
        }
        let e = ground.trailing_zeros() as usize;
        let bit = 1u64 << e;
        if self.rank(bit) == 0 {
            return UnivariatePolynomial::zero();
        }
        let deletion = Minor { matroid: self.matroid, deleted: self.deleted | bit, contracted: self.contracted };
        let chi_deleted = deletion.characteristic_polynomial();
        if self.rank(ground & !bit) < self.rank(ground) {
            // coloop
            return &chi_deleted * &UnivariatePolynomial::linear(rat(1));
        }
        let contraction = Minor { matroid: self.matroid, deleted: self.deleted, contracted: self.contracted | bit };
        &chi_deleted - &contraction.characteristic_polynomial()
    }
}

/// `χ_M(λ) = Σ_{S ⊆ E} (-1)^{|S|} λ^{r(E) - r(S)}` summed over all subsets.
pub fn characteristic_polynomial_whitney(m: &Matroid) -> UnivariatePolynomial {
    let full = m.full_rank();
    let mut coeffs = vec![BigInt::zero(); full + 1];
    let ground = m.ground_set();
    let mut s = 0u64;
    loop {
        let sign = if s.count_ones() % 2 == 0 { 1 } else { -1 };
        coeffs[full - m.rank(s)] += sign;
        if s == ground {
            break;
        }
        s = (s.wrapping_sub(ground)) & ground;
    }
    UnivariatePolynomial::from_bigints(&coeffs)
}

/// Unsigned coefficients of `χ_M(λ) / (λ - 1)`, highest degree first.
pub fn reduced_characteristic_coefficients(m: &Matroid) -> Result<Vec<BigInt>> {
    let chi = characteristic_polynomial(m);
    let (quotient, remainder) = chi.div_rem(&UnivariatePolynomial::linear(rat(1)))?;
    if !remainder.is_zero() || chi.is_zero() {
        return Err(Error::NonZeroAtOne(format!(
            "characteristic polynomial {} is not divisible by (λ - 1)",
            chi.display_in("λ")
        )));
    }
    let coeffs = quotient
        .integer_coeffs()
        .ok_or_else(|| Error::Internal("non-integral characteristic polynomial".into()))?;
    Ok(coeffs.into_iter().rev().map(|c| c.abs()).collect())
}

/// `P(g, q) = q^{#components} · χ_{M(g)}(q)`.
pub fn chromatic_polynomial(g: &Graph) -> UnivariatePolynomial {
    let chi = characteristic_polynomial(&matroid_from_graph(g));
    let mut shift = vec![ExactRational::zero(); g.component_count()];
    shift.push(ExactRational::one());
    &chi * &UnivariatePolynomial::new(shift)
}

/// `Σ (-1)^i ν_i`.
pub fn euler_characteristic_complement(nu: &[BigInt]) -> BigInt {
    nu.iter()
        .enumerate()
        .fold(BigInt::zero(), |acc, (i, v)| if i % 2 == 0 { acc + v } else { acc - v })
}

/// Reduced coefficients of `U_{r,n}`: `C(n-1, i)` for `i < r`.
pub fn uniform_reduced_coefficients(rank: usize, size: usize) -> Vec<BigInt> {
    (0..rank).map(|i| binomial(size as i64 - 1, i as i64)).collect()
}
