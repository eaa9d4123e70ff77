//! Schubert calculus on the complete flag variety `Fl_n`.
//!
//! Classes are integer combinations of Schubert classes `σ_w`, indexed by
//! permutations in one-line notation and graded by inversion number.
//! Products with the divisor classes `σ_{s_i}` follow Monk's rule, and the
//! top-degree integral is the coefficient of the longest permutation `w₀`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::binomial_u64;

/// A permutation of `{1, ..., n}` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n > u8::MAX as usize {
            return Err(Error::OutOfRange(format!("permutation of length {n} is too long")));
        }
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x == 0 || x > n || seen[x] {
                return Err(Error::InvalidInput(format!("{images:?} is not a permutation of 1..{n}")));
            }
            seen[x] = true;
        }
        Ok(Self(images.into_iter().map(|x| x as u8).collect()))
    }

    pub fn identity(n: usize) -> Self {
        Self((1..=n as u8).collect())
    }

    /// The longest element `w₀ = [n, n-1, ..., 1]`.
    pub fn longest(n: usize) -> Self {
        Self((1..=n as u8).rev().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `w(i)` for 1-based `i`.
    pub fn image(&self, i: usize) -> usize {
        self.0[i - 1] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&x| x as usize).collect()
    }

    pub fn inversion_number(&self) -> usize {
        let w = &self.0;
        (0..w.len())
            .map(|i| (i + 1..w.len()).filter(|&j| w[i] > w[j]).count())
            .sum()
    }

    /// The permutation with the values at 1-based positions `p` and `q` exchanged.
    pub fn swap_positions(&self, p: usize, q: usize) -> Self {
        let mut v = self.0.clone();
        v.swap(p - 1, q - 1);
        Self(v)
    }

    /// All permutations of `{1..n}` in lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut current = Self::identity(n).0;
        loop {
            out.push(Self(current.clone()));
            // next lexicographic permutation
            let Some(i) = (1..current.len()).rev().find(|&i| current[i - 1] < current[i]) else {
                break;
            };
            let j = (i..current.len()).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A finite integer combination of Schubert classes on `Fl_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchubertCombination {
    n: usize,
    terms: BTreeMap<Permutation, BigInt>,
}

impl SchubertCombination {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn basis(w: Permutation) -> Self {
        let mut c = Self::zero(w.len());
        c.add(w, BigInt::one());
        c
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add(&mut self, w: Permutation, coeff: BigInt) {
        debug_assert_eq!(w.len(), self.n);
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(w.clone()).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Permutation, BigInt> {
        &self.terms
    }

    pub fn coefficient(&self, w: &Permutation) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common inversion number of all terms, `None` if empty or mixed.
    pub fn degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(Permutation::inversion_number);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }
}

impl fmt::Display for SchubertCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("{c}*σ{w}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `σ_{s_i} · σ_w` by Monk's rule.
///
/// Every pair `p <= i < q` with `w(p) < w(q)` and no position strictly
/// between them holding a value strictly between `w(p)` and `w(q)` yields the
/// term `σ_v`, where `v` swaps the values at `p` and `q`.
pub fn monk_multiply(i: usize, w: &Permutation) -> Result<SchubertCombination> {
    let n = w.len();
    if i == 0 || i >= n {
        return Err(Error::OutOfRange(format!("s_{i} is not an elementary transposition of S_{n}")));
    }
    let base = w.inversion_number();
    let mut out = SchubertCombination::zero(n);
    for p in 1..=i {
        for q in i + 1..=n {
            let (wp, wq) = (w.image(p), w.image(q));
            if wp >= wq {
                continue;
            }
            if (p + 1..q).any(|k| (wp + 1..wq).contains(&w.image(k))) {
                continue;
            }
            let v = w.swap_positions(p, q);
            if v.inversion_number() != base + 1 {
                return Err(Error::Internal(format!("Monk term {v} of σ_s{i}·σ{w} has the wrong degree")));
            }
            out.add(v, BigInt::one());
        }
    }
    Ok(out)
}

pub fn monk_multiply_combination(i: usize, c: &SchubertCombination) -> Result<SchubertCombination> {
    let mut out = SchubertCombination::zero(c.n());
    for (w, coeff) in c.terms() {
        for (v, k) in monk_multiply(i, w)?.terms {
            out.add(v, k * coeff);
        }
    }
    Ok(out)
}

/// Index of the elementary transposition whose Schubert class stands for
/// `L_i` on `Fl_n` (the actual restriction is twice that class).
pub fn line_class_generator(n: usize, i: usize) -> usize {
    n - i
}

fn check_flag_degree(n: usize, b: &[u32]) -> Result<()> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("flag variety needs n >= 2, got {n}")));
    }
    if b.len() != n - 1 {
        return Err(Error::InvalidInput(format!("expected {} exponents, got {}", n - 1, b.len())));
    }
    let expected = binomial_u64(n as u64, 2);
    let found: u64 = b.iter().map(|&x| x as u64).sum();
    if found != expected {
        return Err(Error::DegreeMismatch { expected, found });
    }
    Ok(())
}

/// Memoized evaluator of `∫_{Fl_n} σ_w · L_1^{b_1} ⋯ L_{n-1}^{b_{n-1}}`.
///
/// Each step multiplies by the generator with the largest remaining
/// exponent; the memo is keyed on the current permutation and the remaining
/// exponents, so repeated queries from the quadrics reduction are cheap.
#[derive(Debug)]
pub struct FlagIntegrator {
    n: usize,
    longest: Permutation,
    memo: HashMap<(Permutation, Vec<u32>), BigInt>,
}

impl FlagIntegrator {
    pub fn new(n: usize) -> Self {
        Self { n, longest: Permutation::longest(n), memo: HashMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// `∫_{Fl_n} L_1^{b_1} ⋯ L_{n-1}^{b_{n-1}}`.
    pub fn integral(&mut self, b: &[u32]) -> Result<BigInt> {
        check_flag_degree(self.n, b)?;
        self.eval(Permutation::identity(self.n), b.to_vec())
    }

    fn eval(&mut self, w: Permutation, b: Vec<u32>) -> Result<BigInt> {
        let Some((idx, _)) = b.iter().enumerate().filter(|(_, &e)| e > 0).max_by(|x, y| x.1.cmp(y.1).then(y.0.cmp(&x.0)))
        else {
            return Ok(if w == self.longest { BigInt::one() } else { BigInt::zero() });
        };
        let key = (w, b);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let (w, b) = key;
        let mut rest = b.clone();
        rest[idx] -= 1;
        let generator = line_class_generator(self.n, idx + 1);
        let mut total = BigInt::zero();
        for (v, coeff) in monk_multiply(generator, &w)?.terms {
            total += coeff * self.eval(v, rest.clone())?;
        }
        self.memo.insert((w, b), total.clone());
        Ok(total)
    }
}

thread_local! {
    static INTEGRATORS: RefCell<HashMap<usize, FlagIntegrator>> = RefCell::new(HashMap::new());
}

/// `∫_{Fl_n} L_1^{b_1} ⋯ L_{n-1}^{b_{n-1}}` with `L_i = σ_{s_{n-i}}`.
///
/// Uses a per-thread memo table, so results are identical on every thread.
pub fn flag_integral(n: usize, b: &[u32]) -> Result<BigInt> {
    check_flag_degree(n, b)?;
    INTEGRATORS.with(|cell| {
        let mut map = cell.borrow_mut();
        map.entry(n).or_insert_with(|| FlagIntegrator::new(n)).integral(b)
    })
}

/// Multiplies `σ_{s_{g}}` for each `g` in `generators`, in the given order,
/// starting from the fundamental class, and returns the full combination.
pub fn monk_product(n: usize, generators: &[usize]) -> Result<SchubertCombination> {
    let mut c = SchubertCombination::basis(Permutation::identity(n));
    for &g in generators {
        c = monk_multiply_combination(g, &c)?;
    }
    Ok(c)
}

/// `∫_{Fl_n} ∏ σ_{s_g}` over an explicit generator sequence, no memo.
pub fn integrate_generators(n: usize, generators: &[usize]) -> Result<BigInt> {
    let expected = binomial_u64(n as u64, 2);
    if generators.len() as u64 != expected {
        return Err(Error::DegreeMismatch { expected, found: generators.len() as u64 });
    }
    Ok(monk_product(n, generators)?.coefficient(&Permutation::longest(n)))
}
