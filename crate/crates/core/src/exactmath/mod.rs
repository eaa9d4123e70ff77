//! Exact scalars, polynomials and the small combinatorial helpers shared by
//! every engine in the crate. Nothing here touches floating point.

pub mod linalg;
mod multivariate;
mod univariate;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use multivariate::{Monomial, MultivariatePolynomial};
pub use univariate::{finite_differences, interpolate, UnivariatePolynomial};

/// Rational numbers are kept in lowest terms with a positive denominator by
/// `num-rational`; every quantity in this crate is one of these or a `BigInt`.
pub type ExactRational = num_rational::BigRational;

pub fn rat(n: i64) -> ExactRational {
    ExactRational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> ExactRational {
    ExactRational::new(BigInt::from(n), BigInt::from(d))
}

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` for small arguments where the caller knows the value fits.
pub fn binomial_u64(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
    }
    u64::try_from(acc).expect("binomial overflows u64")
}

/// Log-concavity with no internal zeros: `seq[i]^2 >= seq[i-1] * seq[i+1]`
/// at every interior index, and the nonzero entries form one contiguous run.
pub fn is_log_concave(seq: &[BigInt]) -> bool {
    if seq.iter().any(|x| x.is_negative()) {
        return false;
    }
    let first = seq.iter().position(|x| !x.is_zero());
    let last = seq.iter().rposition(|x| !x.is_zero());
    if let (Some(first), Some(last)) = (first, last) {
        if seq[first..=last].iter().any(|x| x.is_zero()) {
            return false;
        }
    }
    seq.windows(3).all(|w| &w[1] * &w[1] >= &w[0] * &w[2])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn binomial_small_cases() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(3, -1), BigInt::zero());
        assert_eq!(binomial(-2, 1), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(binomial(60, 30), "118264581564861424".parse::<BigInt>().unwrap());
        assert_eq!(binomial_u64(6, 2), 15);
    }

    #[test]
    fn pascal_rule() {
        for n in 1..30 {
            for k in 0..=n {
                assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
            }
        }
    }

    #[test]
    fn log_concavity() {
        assert!(is_log_concave(&big(&[1, 3, 3])));
        assert!(is_log_concave(&big(&[1, 2, 1])));
        assert!(!is_log_concave(&big(&[1, 1, 4])));
        assert!(!is_log_concave(&big(&[1, 0, 1])));
        assert!(is_log_concave(&big(&[0, 1, 2, 1, 0])));
        assert!(is_log_concave(&big(&[5])));
    }
}
