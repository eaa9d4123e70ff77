use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::ExactRational;
use crate::error::{Error, Result};

/// Exponent vector keyed by variable name; zero exponents are never stored.
pub type Monomial = BTreeMap<String, u32>;

/// Sparse polynomial in named variables with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MultivariatePolynomial {
    terms: BTreeMap<Monomial, ExactRational>,
}

impl MultivariatePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(ExactRational::one())
    }

    pub fn constant(c: ExactRational) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::new(), c);
        p
    }

    pub fn var(name: &str) -> Self {
        let mut m = Monomial::new();
        m.insert(name.to_string(), 1);
        let mut p = Self::zero();
        p.add_term(m, ExactRational::one());
        p
    }

    /// Product of the named variables, each to the first power.
    pub fn monomial<'a>(names: impl IntoIterator<Item = &'a str>) -> Self {
        names.into_iter().fold(Self::one(), |acc, v| &acc * &Self::var(v))
    }

    fn add_term(&mut self, m: Monomial, c: ExactRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactRational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Constant term value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<ExactRational> {
        match self.terms.len() {
            0 => Some(ExactRational::zero()),
            1 => self.terms.get(&Monomial::new()).cloned(),
            _ => None,
        }
    }

    pub fn variables(&self) -> Vec<String> {
        let mut vars: Vec<String> = self.terms.keys().flat_map(|m| m.keys().cloned()).collect();
        vars.sort();
        vars.dedup();
        vars
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    /// Full evaluation; every variable must be assigned.
    pub fn evaluate(&self, values: &HashMap<String, ExactRational>) -> Result<ExactRational> {
        let mut acc = ExactRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (var, &e) in m {
                let v = values
                    .get(var)
                    .ok_or_else(|| Error::InvalidInput(format!("no value for variable {var}")))?;
                term *= num_traits::pow(v.clone(), e as usize);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Sets the given variables to zero.
    pub fn vanish(&self, vars: &[String]) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.keys().any(|v| vars.contains(v)) {
                continue;
            }
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// Smallest exponent of `var` over all terms (0 for the zero polynomial).
    pub fn min_exponent(&self, var: &str) -> u32 {
        self.terms
            .keys()
            .map(|m| m.get(var).copied().unwrap_or(0))
            .min()
            .unwrap_or(0)
    }

    /// Divides every term by `var^e`; the caller guarantees divisibility.
    pub fn divide_by_power(&self, var: &str, e: u32) -> Self {
        if e == 0 {
            return self.clone();
        }
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut m = m.clone();
            let slot = m.get_mut(var).expect("monomial not divisible");
            assert!(*slot >= e, "monomial not divisible");
            *slot -= e;
            if *slot == 0 {
                m.remove(var);
            }
            out.add_term(m, c.clone());
        }
        out
    }
}

impl fmt::Display for MultivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // degree-descending, then lexicographic, which reads like hand-written output
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.values().sum();
            let db: u32 = b.values().sum();
            db.cmp(&da).then_with(|| a.cmp(b))
        });
        for (idx, (m, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            if idx == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let abs = c.abs();
            let body: Vec<String> = m
                .iter()
                .map(|(v, &e)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            if body.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&body.join("*"))?;
            } else {
                write!(f, "{abs}*{}", body.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Add for &MultivariatePolynomial {
    type Output = MultivariatePolynomial;
    fn add(self, rhs: Self) -> MultivariatePolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultivariatePolynomial {
    type Output = MultivariatePolynomial;
    fn sub(self, rhs: Self) -> MultivariatePolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &MultivariatePolynomial {
    type Output = MultivariatePolynomial;
    fn neg(self) -> MultivariatePolynomial {
        self.scale(&-ExactRational::one())
    }
}

impl Mul for &MultivariatePolynomial {
    type Output = MultivariatePolynomial;
    fn mul(self, rhs: Self) -> MultivariatePolynomial {
        let mut out = MultivariatePolynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mut m = ma.clone();
                for (v, e) in mb {
                    *m.entry(v.clone()).or_insert(0) += e;
                }
                out.add_term(m, ca * cb);
            }
        }
        out
    }
}
