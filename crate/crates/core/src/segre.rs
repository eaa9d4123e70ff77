//! Multidegrees from caller-supplied Segre class degrees, and the
//! comparison between the `μ` and `ν` sequences.

use num_bigint::BigInt;
use num_traits::{pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::binomial;

/// Degrees `s_0, ..., s_{mY}` of the graded pieces of a Segre class of a
/// base locus `Y` of dimension `mY` inside `P(L)` of dimension `nL`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegreData {
    #[serde(rename = "degF")]
    pub deg_f: i64,
    #[serde(rename = "nL")]
    pub n_l: i64,
    #[serde(rename = "mY")]
    pub m_y: i64,
    pub s: Vec<i64>,
}

impl SegreData {
    pub fn validate(&self) -> Result<()> {
        if self.deg_f < 1 {
            return Err(Error::InvalidInput(format!("degF must be at least 1, got {}", self.deg_f)));
        }
        if self.n_l < 0 || self.m_y < 0 || self.m_y > self.n_l {
            return Err(Error::InvalidInput(format!("need 0 <= mY <= nL, got mY={} nL={}", self.m_y, self.n_l)));
        }
        if self.s.len() as i64 != self.m_y + 1 {
            return Err(Error::InvalidInput(format!(
                "expected {} Segre degrees, got {}",
                self.m_y + 1,
                self.s.len()
            )));
        }
        Ok(())
    }
}

/// `(degF-1)^i - Σ_{j=0}^{i-nL+mY} C(i, nL-mY+j) (degF-1)^{i-nL+mY-j} s_j`,
/// with an empty sum when the upper limit is negative.
pub fn mu_from_segre(d: &SegreData, i: i64) -> Result<BigInt> {
    d.validate()?;
    if i < 0 || i > d.n_l {
        return Err(Error::OutOfRange(format!("index {i} not in 0..={}", d.n_l)));
    }
    let base = BigInt::from(d.deg_f - 1);
    let top = i - d.n_l + d.m_y;
    let correction = (0..=top).fold(BigInt::zero(), |acc, j| {
        acc + binomial(i, d.n_l - d.m_y + j) * pow(base.clone(), (top - j) as usize) * d.s[j as usize]
    });
    Ok(pow(base, i as usize) - correction)
}

/// The same formula applied to the Segre data of the restricted gradient map.
pub fn nu_from_segre(d: &SegreData, i: i64) -> Result<BigInt> {
    mu_from_segre(d, i)
}

/// `μ_a - Σ_{j=0}^{b} C(n, j) s_j`; `b = -1` encodes an empty intersection.
pub fn nu_from_mu_correction(mu_a: &BigInt, n_ambient: i64, b: i64, s: &[i64]) -> Result<BigInt> {
    if b < -1 || s.len() as i64 != b + 1 {
        return Err(Error::InvalidInput(format!("expected {} Segre degrees for b={b}, got {}", b + 1, s.len())));
    }
    let correction = s
        .iter()
        .enumerate()
        .fold(BigInt::zero(), |acc, (j, &sj)| acc + binomial(n_ambient, j as i64) * sj);
    Ok(mu_a - correction)
}

/// True when `ν_i ≤ μ_i` for every `i` and the sequences agree everywhere
/// exactly when their last entries agree.
pub fn mu_nu_inequality_check(mu: &[BigInt], nu: &[BigInt]) -> Result<bool> {
    if mu.len() != nu.len() {
        return Err(Error::InvalidInput(format!("μ has {} entries, ν has {}", mu.len(), nu.len())));
    }
    let pointwise = mu.iter().zip(nu).all(|(m, v)| v <= m);
    let all_equal = mu == nu;
    let last_equal = mu.last() == nu.last();
    Ok(pointwise && all_equal == last_equal)
}
