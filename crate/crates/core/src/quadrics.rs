//! Intersection theory on the space of complete quadrics `CQ_n`.
//!
//! The Picard group has the basis `L_1, ..., L_{n-1}` (pullbacks of the
//! hyperplane classes of the compound-matrix factors) and the boundary
//! divisors satisfy `S_i = -L_{i-1} + 2 L_i - L_{i+1}` with `L_0 = L_n = 0`.
//! Top-degree products `∫ S^a L^b` are reduced to integrals over the flag
//! variety `S_1 ∩ ⋯ ∩ S_{n-1} ≅ Fl_n` by repeatedly rewriting one `L_i`
//! factor in a mixed `S`/`L` basis.

use std::cell::RefCell;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactmath::{binomial_u64, interpolate, linalg, rat, ExactRational, UnivariatePolynomial};
use crate::schubert::FlagIntegrator;

/// `dim CQ_n = C(n+1, 2) - 1`.
pub fn dimension(n: usize) -> u64 {
    binomial_u64(n as u64 + 1, 2) - 1
}

/// A divisor on `CQ_n` in coordinates with respect to `L_1, ..., L_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClass {
    n: usize,
    coeffs: Vec<ExactRational>,
}

impl DivisorClass {
    pub fn new(n: usize, coeffs: Vec<ExactRational>) -> Result<Self> {
        if n < 2 || coeffs.len() != n - 1 {
            return Err(Error::InvalidInput(format!("a divisor on CQ_{n} needs {} coordinates", n.saturating_sub(1))));
        }
        Ok(Self { n, coeffs })
    }

    /// `L_i` for `1 <= i <= n-1`.
    pub fn l(n: usize, i: usize) -> Result<Self> {
        check_index(n, i)?;
        let mut coeffs = vec![ExactRational::zero(); n - 1];
        coeffs[i - 1] = ExactRational::one();
        Self::new(n, coeffs)
    }

    /// `S_i = -L_{i-1} + 2 L_i - L_{i+1}`.
    pub fn s(n: usize, i: usize) -> Result<Self> {
        check_index(n, i)?;
        let mut coeffs = vec![ExactRational::zero(); n - 1];
        coeffs[i - 1] = rat(2);
        if i > 1 {
            coeffs[i - 2] = rat(-1);
        }
        if i < n - 1 {
            coeffs[i] = rat(-1);
        }
        Self::new(n, coeffs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        Self { n: self.n, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self { n: self.n, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }
}

fn check_index(n: usize, i: usize) -> Result<()> {
    if n < 2 || i == 0 || i >= n {
        return Err(Error::OutOfRange(format!("divisor index {i} outside 1..{} for CQ_{n}", n.saturating_sub(1))));
    }
    Ok(())
}

/// An element of the mixed basis `{S_j | j ∈ X} ⊔ {L_j | j ∉ X}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisElement {
    S(usize),
    L(usize),
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisElement::S(j) => write!(f, "S{j}"),
            BasisElement::L(j) => write!(f, "L{j}"),
        }
    }
}

/// Coordinates of `L_i` in the basis `{S_j | j ∈ X} ⊔ {L_j | j ∉ X}`.
/// Zero coefficients are omitted.
pub fn l_in_mixed_basis(n: usize, i: usize, x: &BTreeSet<usize>) -> Result<BTreeMap<BasisElement, ExactRational>> {
    check_index(n, i)?;
    if let Some(&bad) = x.iter().find(|&&j| j == 0 || j >= n) {
        return Err(Error::OutOfRange(format!("basis index {bad} outside 1..{}", n - 1)));
    }
    let basis: Vec<BasisElement> =
        (1..n).map(|j| if x.contains(&j) { BasisElement::S(j) } else { BasisElement::L(j) }).collect();
    let columns: Vec<DivisorClass> = basis
        .iter()
        .map(|e| match *e {
            BasisElement::S(j) => DivisorClass::s(n, j),
            BasisElement::L(j) => DivisorClass::l(n, j),
        })
        .collect::<Result<_>>()?;
    let matrix: linalg::Matrix =
        (0..n - 1).map(|row| columns.iter().map(|c| c.coeffs[row].clone()).collect()).collect();
    let target = DivisorClass::l(n, i)?;
    let solution = linalg::solve(&matrix, &target.coeffs)
        .ok_or_else(|| Error::Internal(format!("mixed basis {basis:?} is singular")))?;
    Ok(basis.into_iter().zip(solution).filter(|(_, c)| !c.is_zero()).collect())
}

/// An exponent profile for `∫_{CQ_n} S_1^{a_1} ⋯ S_{n-1}^{a_{n-1}} L_1^{b_1} ⋯ L_{n-1}^{b_{n-1}}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CQProduct {
    pub n: usize,
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

impl CQProduct {
    pub fn new(n: usize, a: Vec<u32>, b: Vec<u32>) -> Result<Self> {
        if n < 2 {
            return Err(Error::OutOfRange(format!("complete quadrics need n >= 2, got {n}")));
        }
        if a.len() != n - 1 || b.len() != n - 1 {
            return Err(Error::InvalidInput(format!(
                "CQ_{n} products need {} exponents of S and of L, got {} and {}",
                n - 1,
                a.len(),
                b.len()
            )));
        }
        Ok(Self { n, a, b })
    }

    /// Only `L` factors: `∏ L_i^{b_i}`.
    pub fn lines(n: usize, b: Vec<u32>) -> Result<Self> {
        Self::new(n, vec![0; n.saturating_sub(1)], b)
    }

    pub fn total_degree(&self) -> u64 {
        self.a.iter().chain(&self.b).map(|&x| x as u64).sum()
    }
}

/// How step (iv) of the reduction chooses among eligible indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PickStrategy {
    Smallest,
    Largest,
    /// A deterministic pseudo-random choice driven by the seed and the state.
    Seeded(u64),
}

/// Reduction engine for one value of `n`, with its memo tables.
///
/// The engine is not `Sync`; use one per thread (the free functions in this
/// module keep a thread-local engine per `n`).
#[derive(Debug)]
pub struct CqEngine {
    n: usize,
    strategy: PickStrategy,
    flag: FlagIntegrator,
    memo: HashMap<(Vec<u32>, Vec<u32>), BigInt>,
    mixed: HashMap<(Vec<bool>, usize), Vec<(BasisElement, ExactRational)>>,
    restriction_factor: BigInt,
}

impl CqEngine {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_strategy(n, PickStrategy::Smallest)
    }

    pub fn with_strategy(n: usize, strategy: PickStrategy) -> Result<Self> {
        if n < 2 {
            return Err(Error::OutOfRange(format!("complete quadrics need n >= 2, got {n}")));
        }
        // each L_i restricts to twice a Schubert divisor on the flag variety
        let restriction_factor = BigInt::from(2).pow(binomial_u64(n as u64, 2) as u32);
        Ok(Self {
            n,
            strategy,
            flag: FlagIntegrator::new(n),
            memo: HashMap::new(),
            mixed: HashMap::new(),
            restriction_factor,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn intersection_product(&mut self, a: &[u32], b: &[u32]) -> Result<BigInt> {
        let p = CQProduct::new(self.n, a.to_vec(), b.to_vec())?;
        let expected = dimension(self.n);
        let found = p.total_degree();
        if found != expected {
            return Err(Error::DegreeMismatch { expected, found });
        }
        let budget = (found as usize + 1) * self.n + a.iter().map(|&x| x as usize).sum::<usize>();
        self.eval(p.a, p.b, budget)
    }

    /// `∫ L_1^x L_{n-1}^y` (the two factors coincide when `n = 2`).
    pub fn line_pair(&mut self, x: u32, y: u32) -> Result<BigInt> {
        let mut b = vec![0; self.n - 1];
        b[0] += x;
        b[self.n - 2] += y;
        self.intersection_product(&vec![0; self.n - 1], &b)
    }

    fn mixed_coefficients(&mut self, a: &[u32], i: usize) -> Result<Vec<(BasisElement, ExactRational)>> {
        let key: (Vec<bool>, usize) = (a.iter().map(|&x| x == 0).collect(), i);
        if let Some(v) = self.mixed.get(&key) {
            return Ok(v.clone());
        }
        let x: BTreeSet<usize> = key.0.iter().enumerate().filter(|(_, &z)| z).map(|(j, _)| j + 1).collect();
        let coeffs: Vec<_> = l_in_mixed_basis(self.n, i, &x)?.into_iter().collect();
        self.mixed.insert(key, coeffs.clone());
        Ok(coeffs)
    }

    fn pick(&self, eligible: &[usize], a: &[u32], b: &[u32]) -> usize {
        match self.strategy {
            PickStrategy::Smallest => eligible[0],
            PickStrategy::Largest => *eligible.last().unwrap(),
            PickStrategy::Seeded(seed) => {
                let mut h = DefaultHasher::new();
                (seed, a, b).hash(&mut h);
                eligible[(h.finish() % eligible.len() as u64) as usize]
            }
        }
    }

    fn eval(&mut self, a: Vec<u32>, b: Vec<u32>, budget: usize) -> Result<BigInt> {
        if budget == 0 {
            return Err(Error::Internal(format!("reduction of a={a:?} b={b:?} did not terminate")));
        }
        let key = (a, b);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let (a, b) = key;
        let value = self.reduce(&a, &b, budget)?;
        self.memo.insert((a, b), value.clone());
        Ok(value)
    }

    fn reduce(&mut self, a: &[u32], b: &[u32], budget: usize) -> Result<BigInt> {
        let m = self.n - 1;

        // (i) keep one factor of each S_i and trade the surplus for L's
        if let Some(k) = a.iter().position(|&x| x >= 2) {
            let mut total = BigInt::zero();
            let mut child_a = a.to_vec();
            child_a[k] -= 1;
            for (offset, coeff) in [(-1i64, -1i64), (0, 2), (1, -1)] {
                let j = k as i64 + offset;
                if j < 0 || j >= m as i64 {
                    continue;
                }
                let mut child_b = b.to_vec();
                child_b[j as usize] += 1;
                total += BigInt::from(coeff) * self.eval(child_a.clone(), child_b, budget - 1)?;
            }
            return Ok(total);
        }

        // (ii) the product lives on S_1 ∩ ⋯ ∩ S_{n-1} = Fl_n
        if a.iter().all(|&x| x == 1) {
            return Ok(&self.restriction_factor * self.flag.integral(b)?);
        }

        // (iii) vanishing lemma
        let eligible: Vec<usize> = (0..m).filter(|&j| a[j] == 0 && b[j] > 0).collect();
        if eligible.is_empty() {
            return Ok(BigInt::zero());
        }

        // (iv) rewrite one L_i in the basis {S_j | a_j = 0} ⊔ {L_j | a_j = 1}
        let i = self.pick(&eligible, a, b);
        let mut total = ExactRational::zero();
        for (element, coeff) in self.mixed_coefficients(a, i + 1)? {
            let mut child_a = a.to_vec();
            let mut child_b = b.to_vec();
            child_b[i] -= 1;
            match element {
                BasisElement::S(j) => child_a[j - 1] += 1,
                BasisElement::L(j) => child_b[j - 1] += 1,
            }
            debug_assert!(reduction_order_decreases(a, b, &child_a, &child_b));
            let value = self.eval(child_a, child_b, budget - 1)?;
            total += coeff * ExactRational::from_integer(value);
        }
        if !total.is_integer() {
            return Err(Error::Internal(format!("non-integral intersection number {total} for a={a:?} b={b:?}")));
        }
        Ok(total.to_integer())
    }
}

/// Strict decrease in the order that guarantees termination: more `S`
/// factors, or as many with less `L`-weight on indices without an `S`.
fn reduction_order_decreases(a: &[u32], b: &[u32], child_a: &[u32], child_b: &[u32]) -> bool {
    let sa: u32 = a.iter().sum();
    let sc: u32 = child_a.iter().sum();
    let free = |a: &[u32], b: &[u32]| -> u32 { a.iter().zip(b).filter(|(x, _)| **x == 0).map(|(_, y)| *y).sum() };
    sc > sa || (sc == sa && free(child_a, child_b) < free(a, b))
}

thread_local! {
    static ENGINES: RefCell<HashMap<usize, CqEngine>> = RefCell::new(HashMap::new());
}

fn with_engine<T>(n: usize, f: impl FnOnce(&mut CqEngine) -> Result<T>) -> Result<T> {
    ENGINES.with(|cell| {
        let mut map = cell.borrow_mut();
        let engine = match map.entry(n) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => e.insert(CqEngine::new(n)?),
        };
        f(engine)
    })
}

/// `∫_{CQ_n} S^a L^b`.
pub fn intersection_product(p: &CQProduct) -> Result<BigInt> {
    with_engine(p.n, |e| e.intersection_product(&p.a, &p.b))
}

/// `∫_{CQ_n} L_1^x L_{n-1}^y` with `x + y = dim CQ_n`.
pub fn line_pair_integral(n: usize, x: u32, y: u32) -> Result<BigInt> {
    with_engine(n, |e| e.line_pair(x, y))
}

fn top(n: usize) -> Result<u64> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("complete quadrics need n >= 2, got {n}")));
    }
    Ok(binomial_u64(n as u64 + 1, 2))
}

/// ML-degree of a generic `d`-dimensional linear concentration model of
/// `n × n` symmetric matrices: `∫ L_1^{C(n+1,2)-d} L_{n-1}^{d-1}`.
pub fn phi(n: usize, d: u64) -> Result<BigInt> {
    let t = top(n)?;
    if d == 0 || d > t {
        return Err(Error::OutOfRange(format!("phi({n}, {d}) needs 1 <= d <= {t}")));
    }
    line_pair_integral(n, (t - d) as u32, (d - 1) as u32)
}

fn check_delta(m: u64, n: usize, r: usize) -> Result<u64> {
    let t = top(n)?;
    if m == 0 || m >= t || r == 0 || r >= n {
        return Err(Error::OutOfRange(format!("delta({m}, {n}, {r}) needs 0 < m < {t} and 0 < r < {n}")));
    }
    Ok(t)
}

/// Algebraic degree of semidefinite programming,
/// `δ(m, n, r) = ∫ S_r L_1^{C(n+1,2)-m-1} L_{n-1}^{m-1}`.
pub fn delta(m: u64, n: usize, r: usize) -> Result<BigInt> {
    let t = check_delta(m, n, r)?;
    let mut a = vec![0u32; n - 1];
    a[r - 1] = 1;
    let mut b = vec![0u32; n - 1];
    b[0] += (t - m - 1) as u32;
    b[n - 2] += (m - 1) as u32;
    intersection_product(&CQProduct::new(n, a, b)?)
}

/// Pataki's window: `C(n-r+1, 2) <= m <= C(n+1, 2) - C(r+1, 2)`.
pub fn pataki_nonzero(m: u64, n: usize, r: usize) -> Result<bool> {
    let t = check_delta(m, n, r)?;
    let lower = binomial_u64((n - r + 1) as u64, 2);
    let upper = t - binomial_u64(r as u64 + 1, 2);
    Ok(lower <= m && m <= upper)
}

/// `φ(n, d) = (1/n) Σ_{1 <= C(s+1,2) <= d} s · δ(d, n, n-s)`.
///
/// Requires `d < C(n+1, 2)`: the identity comes from expanding one `L_1`
/// factor, which is absent when `d = C(n+1, 2)`.
pub fn phi_from_delta(n: usize, d: u64) -> Result<BigInt> {
    let t = top(n)?;
    if d == 0 || d >= t {
        return Err(Error::OutOfRange(format!("phi_from_delta({n}, {d}) needs 1 <= d < {t}")));
    }
    let mut sum = BigInt::zero();
    for s in 1..n {
        if binomial_u64(s as u64 + 1, 2) > d {
            break;
        }
        sum += BigInt::from(s) * delta(d, n, n - s)?;
    }
    let n_big = BigInt::from(n);
    if !(&sum % &n_big).is_zero() {
        return Err(Error::Internal(format!("sum {sum} in phi_from_delta({n}, {d}) is not divisible by {n}")));
    }
    Ok(sum / n_big)
}

/// `φ_c(n, d) = ∫ L_c L_1^{C(n+1,2)-d-1} L_{n-1}^{d-1}`.
pub fn phi_c(n: usize, c: usize, d: u64) -> Result<BigInt> {
    let t = top(n)?;
    if d == 0 || d >= t || c == 0 || c >= n {
        return Err(Error::OutOfRange(format!("phi_c({n}, {c}, {d}) needs 1 <= c < {n} and 1 <= d < {t}")));
    }
    let mut b = vec![0u32; n - 1];
    b[c - 1] += 1;
    b[0] += (t - d - 1) as u32;
    b[n - 2] += (d - 1) as u32;
    intersection_product(&CQProduct::lines(n, b)?)
}

fn evaluate_samples(ns: &[usize], jobs: usize, f: impl Fn(usize) -> Result<BigInt> + Sync) -> Result<Vec<BigInt>> {
    if jobs <= 1 {
        return ns.iter().map(|&n| f(n)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    pool.install(|| ns.par_iter().map(|&n| f(n)).collect())
}

fn to_points(ns: &[usize], values: &[BigInt]) -> Vec<(i64, ExactRational)> {
    ns.iter().zip(values).map(|(&n, v)| (n as i64, ExactRational::from_integer(v.clone()))).collect()
}

/// The polynomial `n ↦ φ(n, d)`, interpolated from `d` consecutive
/// admissible `n` and checked at one further point.
pub fn phi_polynomial(d: u64) -> Result<UnivariatePolynomial> {
    phi_polynomial_with_jobs(d, 1)
}

pub fn phi_polynomial_with_jobs(d: u64, jobs: usize) -> Result<UnivariatePolynomial> {
    if d == 0 {
        return Err(Error::OutOfRange("phi_polynomial needs d >= 1".into()));
    }
    let start = (2..).find(|&n| binomial_u64(n as u64 + 1, 2) >= d).unwrap();
    let ns: Vec<usize> = (start..=start + d as usize).collect();
    let values = evaluate_samples(&ns, jobs, |n| phi(n, d))?;
    let (check_n, check_v) = (ns[d as usize], &values[d as usize]);
    let poly = interpolate(&to_points(&ns[..d as usize], &values[..d as usize]))?;
    if poly.evaluate_at(check_n as i64) != ExactRational::from_integer(check_v.clone()) {
        return Err(Error::PolynomialityCheckFailed(format!(
            "phi(n, {d}) interpolant {poly} disagrees with phi({check_n}, {d}) = {check_v}"
        )));
    }
    Ok(poly)
}

/// The polynomial `n ↦ δ(m, n, n-s)`, interpolated from `m + 1` admissible
/// `n`, checked at one further point and required to vanish at `n = 0`.
pub fn delta_polynomial(m: u64, s: usize) -> Result<UnivariatePolynomial> {
    delta_polynomial_with_jobs(m, s, 1)
}

pub fn delta_polynomial_with_jobs(m: u64, s: usize, jobs: usize) -> Result<UnivariatePolynomial> {
    if m == 0 || s == 0 {
        return Err(Error::OutOfRange("delta_polynomial needs m, s >= 1".into()));
    }
    let start = ((s + 1).max(2)..).find(|&n| binomial_u64(n as u64 + 1, 2) > m).unwrap();
    let count = m as usize + 1;
    let ns: Vec<usize> = (start..=start + count).collect();
    let values = evaluate_samples(&ns, jobs, |n| delta(m, n, n - s))?;
    let poly = interpolate(&to_points(&ns[..count], &values[..count]))?;
    let (check_n, check_v) = (ns[count], &values[count]);
    if poly.evaluate_at(check_n as i64) != ExactRational::from_integer(check_v.clone()) {
        return Err(Error::PolynomialityCheckFailed(format!(
            "delta({m}, n, n-{s}) interpolant {poly} disagrees with the value {check_v} at n = {check_n}"
        )));
    }
    if !poly.evaluate_at(0).is_zero() {
        return Err(Error::PolynomialityCheckFailed(format!(
            "delta({m}, n, n-{s}) interpolant {poly} does not vanish at n = 0"
        )));
    }
    Ok(poly)
}

/// Number of smooth degree-`d` hypersurfaces in `P^n` through
/// `C(n+d, n) - 1 - b` general points and tangent to `b` general
/// hyperplanes, `(n (d-1)^{n-1})^b`, valid for `d = 5` or `d >= 7` and
/// `b < n(d-2) + 3`.
pub fn hypersurface_characteristic_number(d: u64, n: u64, b: u64) -> Result<BigInt> {
    if !(d == 5 || d >= 7) {
        return Err(Error::OutsideHypotheses(format!("d = {d} must be 5 or at least 7")));
    }
    if n == 0 {
        return Err(Error::OutsideHypotheses("n must be at least 1".into()));
    }
    if b >= n * (d - 2) + 3 {
        return Err(Error::OutsideHypotheses(format!("b = {b} must be below n(d-2)+3 = {}", n * (d - 2) + 3)));
    }
    let base = BigInt::from(n) * BigInt::from(d - 1).pow((n - 1) as u32);
    Ok(base.pow(b as u32))
}
