//! Chow rings of smooth complete toric varieties, presented by fan data.
//!
//! Classes are kept as combinations of squarefree cone monomials `x_τ`.
//! Multiplying by a ray that already divides the monomial goes through the
//! linear relations, using the dual basis of a maximal cone containing `τ`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{linalg, rat, ExactRational};

/// Sorted ray indices of a cone.
pub type Cone = Vec<usize>;

/// A smooth complete fan, validated on construction.
#[derive(Clone, Debug)]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<i64>>,
    maximal_cones: Vec<Cone>,
    /// Every face of the fan, mapped to one maximal cone containing it.
    faces: HashMap<Cone, usize>,
    /// `pairings[σ][j][ρ] = ⟨m_j, u_ρ⟩` where `m_j` is the dual basis of maximal cone `σ`.
    pairings: Vec<Vec<Vec<i64>>>,
}

impl Fan {
    pub fn new(rank: usize, rays: Vec<Vec<i64>>, maximal_cones: Vec<Cone>) -> Result<Self> {
        if let Some(r) = rays.iter().find(|r| r.len() != rank) {
            return Err(Error::InvalidInput(format!("ray {r:?} does not have {rank} coordinates")));
        }
        let mut cones = Vec::with_capacity(maximal_cones.len());
        for cone in maximal_cones {
            let mut sorted = cone.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != rank || sorted.iter().any(|&i| i >= rays.len()) {
                return Err(Error::InvalidInput(format!(
                    "cone {cone:?} must list {rank} distinct rays out of {}",
                    rays.len()
                )));
            }
            cones.push(sorted);
        }

        let mut pairings = Vec::with_capacity(cones.len());
        for cone in &cones {
            let basis: linalg::Matrix = (0..rank)
                .map(|row| cone.iter().map(|&i| rat(rays[i][row])).collect())
                .collect();
            let det = linalg::determinant(&basis);
            if det.abs() != ExactRational::one() {
                return Err(Error::FanNotSmooth(format!("cone {} has determinant {det}", one_based(cone))));
            }
            let inv = linalg::inverse(&basis).expect("unimodular matrix is invertible");
            let table = inv
                .iter()
                .map(|m| {
                    rays.iter()
                        .map(|u| {
                            let v = m.iter().zip(u).fold(ExactRational::zero(), |acc, (a, &b)| acc + a * rat(b));
                            v.to_integer().to_i64().expect("pairing fits in i64")
                        })
                        .collect()
                })
                .collect();
            pairings.push(table);
        }

        let mut walls: HashMap<Cone, usize> = HashMap::new();
        for cone in &cones {
            for skip in 0..rank {
                let wall: Cone = cone.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &i)| i).collect();
                *walls.entry(wall).or_insert(0) += 1;
            }
        }
        if let Some((wall, count)) = walls.iter().find(|(_, &c)| c != 2) {
            return Err(Error::FanNotComplete(format!(
                "wall {} lies in {count} maximal cones",
                one_based(wall)
            )));
        }

        let mut faces = HashMap::new();
        for (idx, cone) in cones.iter().enumerate() {
            for mask in 0u32..1 << rank {
                let face: Cone = cone.iter().enumerate().filter(|&(k, _)| mask >> k & 1 == 1).map(|(_, &i)| i).collect();
                faces.entry(face).or_insert(idx);
            }
        }

        Ok(Self { rank, rays, maximal_cones: cones, faces, pairings })
    }

    /// Parses `"rank #rays #cones"`, then one ray per line, then one
    /// maximal cone per line as 1-based ray indices.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let mut next_numbers = |what: &str| -> Result<Vec<i64>> {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("missing {what}")))?;
            line.split_whitespace()
                .map(|t| t.parse::<i64>().map_err(|e| Error::Parse(format!("\"{t}\": {e}"))))
                .collect()
        };
        let header = next_numbers("header line")?;
        let [rank, ray_count, cone_count] = header[..] else {
            return Err(Error::Parse("header must be \"rank #rays #cones\"".into()));
        };
        if rank < 0 || ray_count < 0 || cone_count < 0 {
            return Err(Error::Parse("header values must be nonnegative".into()));
        }
        let rays = (0..ray_count).map(|_| next_numbers("ray line")).collect::<Result<Vec<_>>>()?;
        let mut cones = Vec::new();
        for _ in 0..cone_count {
            let idx = next_numbers("cone line")?;
            if idx.iter().any(|&i| i < 1) {
                return Err(Error::Parse("cone indices are 1-based".into()));
            }
            cones.push(idx.into_iter().map(|i| i as usize - 1).collect());
        }
        if lines.next().is_some() {
            return Err(Error::Parse("unexpected trailing lines".into()));
        }
        Self::new(rank as usize, rays, cones)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.maximal_cones
    }

    /// Whether the given rays span a cone of the fan.
    pub fn is_cone(&self, rays: &[usize]) -> bool {
        let mut key = rays.to_vec();
        key.sort_unstable();
        self.faces.contains_key(&key)
    }

    /// The class of the torus-invariant divisor of ray `r`.
    pub fn ray_divisor(&self, r: usize) -> Vec<ExactRational> {
        (0..self.rays.len()).map(|i| rat((i == r) as i64)).collect()
    }
}

impl fmt::Display for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.rank, self.rays.len(), self.maximal_cones.len())?;
        for r in &self.rays {
            let parts: Vec<String> = r.iter().map(i64::to_string).collect();
            writeln!(f, "{}", parts.join(" "))?;
        }
        for c in &self.maximal_cones {
            let parts: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
            writeln!(f, "{}", parts.join(" "))?;
        }
        Ok(())
    }
}

fn one_based(cone: &[usize]) -> String {
    let parts: Vec<String> = cone.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Ray `i` of the permutohedral fan corresponds to the subset of
/// `{1, ..., n+1}` whose bitmask is `i + 1`.
pub fn permutohedral_subset(i: usize) -> u64 {
    i as u64 + 1
}

/// Ray index of a proper nonempty subset given as a bitmask.
pub fn permutohedral_ray(mask: u64) -> usize {
    mask as usize - 1
}

/// Normal fan of the permutohedron in `Z^{n+1} / Z(1,...,1)`, identified
/// with `Z^n` by subtracting the last coordinate.
pub fn permutohedral_fan(n: usize) -> Result<Fan> {
    if n == 0 || n > 7 {
        return Err(Error::OutOfRange(format!("permutohedral fan needs 1 <= n <= 7, got {n}")));
    }
    let full = (1u64 << (n + 1)) - 1;
    let rays: Vec<Vec<i64>> = (1..full)
        .map(|mask| {
            let last = (mask >> n & 1) as i64;
            (0..n).map(|k| (mask >> k & 1) as i64 - last).collect()
        })
        .collect();
    let mut cones = Vec::new();
    let mut order: Vec<usize> = (0..=n).collect();
    permutations(&mut order, 0, &mut |perm| {
        let mut mask = 0u64;
        let cone = perm[..n]
            .iter()
            .map(|&k| {
                mask |= 1 << k;
                permutohedral_ray(mask)
            })
            .collect();
        cones.push(cone);
    });
    Fan::new(n, rays, cones)
}

fn permutations(items: &mut Vec<usize>, start: usize, visit: &mut impl FnMut(&[usize])) {
    if start == items.len() {
        visit(items);
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permutations(items, start + 1, visit);
        items.swap(start, i);
    }
}

/// A Chow class of homogeneous degree, as a combination of cone monomials.
#[derive(Clone, Debug)]
pub struct ToricClass<'a> {
    fan: &'a Fan,
    degree: usize,
    terms: BTreeMap<Cone, ExactRational>,
}

impl PartialEq for ToricClass<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.fan, other.fan) && self.degree == other.degree && self.terms == other.terms
    }
}

impl<'a> ToricClass<'a> {
    pub fn one(fan: &'a Fan) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), ExactRational::one());
        Self { fan, degree: 0, terms }
    }

    pub fn zero(fan: &'a Fan, degree: usize) -> Self {
        Self { fan, degree, terms: BTreeMap::new() }
    }

    /// The monomial `x_τ`; zero when the rays do not span a cone.
    pub fn monomial(fan: &'a Fan, rays: &[usize]) -> Result<Self> {
        let mut key = rays.to_vec();
        key.sort_unstable();
        key.dedup();
        if key.len() != rays.len() || key.iter().any(|&r| r >= fan.rays.len()) {
            return Err(Error::InvalidInput(format!("not a set of ray indices: {rays:?}")));
        }
        let mut c = Self::zero(fan, key.len());
        if fan.faces.contains_key(&key) {
            c.terms.insert(key, ExactRational::one());
        }
        Ok(c)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Cone, ExactRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, key: Cone, c: ExactRational) {
        let slot = self.terms.entry(key).or_insert_with(ExactRational::zero);
        *slot += c;
    }

    fn prune(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        self
    }
}

/// Product of a class with the divisor `Σ d_ρ x_ρ`.
pub fn multiply_by_divisor<'a>(c: &ToricClass<'a>, d: &[ExactRational]) -> Result<ToricClass<'a>> {
    let fan = c.fan;
    if d.len() != fan.rays.len() {
        return Err(Error::InvalidInput(format!(
            "divisor has {} coefficients, fan has {} rays",
            d.len(),
            fan.rays.len()
        )));
    }
    let mut out = ToricClass::zero(fan, c.degree + 1);
    for (tau, coef) in &c.terms {
        for (r, dr) in d.iter().enumerate() {
            if dr.is_zero() {
                continue;
            }
            let weight = coef * dr;
            match tau.binary_search(&r) {
                Err(pos) => {
                    let mut key = tau.clone();
                    key.insert(pos, r);
                    if fan.faces.contains_key(&key) {
                        out.add_term(key, weight);
                    }
                }
                Ok(_) => self_intersection(fan, tau, r, &weight, &mut out)?,
            }
        }
    }
    Ok(out.prune())
}

/// Adds `weight · x_τ · x_r` for `r ∈ τ`, rewriting `x_r` through the
/// functional dual to `r` on a maximal cone containing `τ`.
fn self_intersection(fan: &Fan, tau: &Cone, r: usize, weight: &ExactRational, out: &mut ToricClass) -> Result<()> {
    let sigma = *fan.faces.get(tau).ok_or_else(|| Error::Internal("term is not a cone".into()))?;
    let j = fan.maximal_cones[sigma].binary_search(&r).map_err(|_| Error::Internal("ray outside its cone".into()))?;
    let pairing = &fan.pairings[sigma][j];
    for (rho, &p) in pairing.iter().enumerate() {
        if p == 0 || tau.binary_search(&rho).is_ok() {
            continue;
        }
        let pos = tau.binary_search(&rho).unwrap_err();
        let mut key = tau.clone();
        key.insert(pos, rho);
        if fan.faces.contains_key(&key) {
            out.add_term(key, -(weight * rat(p)));
        }
    }
    Ok(())
}

/// Degree of a top-dimensional class: every maximal-cone monomial counts 1.
pub fn toric_integral(c: &ToricClass) -> Result<ExactRational> {
    if c.degree != c.fan.rank {
        return Err(Error::DegreeMismatch { expected: c.fan.rank as u64, found: c.degree as u64 });
    }
    Ok(c.terms.values().fold(ExactRational::zero(), |acc, v| acc + v))
}

/// `μ_i = ∫ H₁^{n-i} H₂^i` on the permutohedral fan, where `H₁` sums the
/// rays of subsets containing 1 and `H₂` the remaining rays.
pub fn mu_generic(n: usize) -> Result<Vec<BigInt>> {
    mu_generic_with_distinguished(n, 1)
}

/// Same as [`mu_generic`] with element `k` of `{1, ..., n+1}` in place of 1.
pub fn mu_generic_with_distinguished(n: usize, k: usize) -> Result<Vec<BigInt>> {
    if k == 0 || k > n + 1 {
        return Err(Error::OutOfRange(format!("distinguished element {k} not in 1..={}", n + 1)));
    }
    let fan = permutohedral_fan(n)?;
    let (h1, h2) = hyperplane_pullbacks(&fan, k - 1);
    (0..=n)
        .map(|i| {
            let mut c = ToricClass::one(&fan);
            for _ in 0..n - i {
                c = multiply_by_divisor(&c, &h1)?;
            }
            for _ in 0..i {
                c = multiply_by_divisor(&c, &h2)?;
            }
            let v = toric_integral(&c)?;
            if !v.is_integer() {
                return Err(Error::Internal(format!("non-integral degree {v}")));
            }
            Ok(v.to_integer())
        })
        .collect()
}

/// The two divisor classes `(H₁, H₂)` on a permutohedral fan, split by
/// whether the subset contains the 0-based element `k`.
pub fn hyperplane_pullbacks(fan: &Fan, k: usize) -> (Vec<ExactRational>, Vec<ExactRational>) {
    let contains = |i: usize| permutohedral_subset(i) >> k & 1 == 1;
    let h1 = (0..fan.rays.len()).map(|i| rat(contains(i) as i64)).collect();
    let h2 = (0..fan.rays.len()).map(|i| rat(!contains(i) as i64)).collect();
    (h1, h2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x<'a>(fan: &'a Fan, masks: &[u64]) -> ToricClass<'a> {
        let rays: Vec<usize> = masks.iter().map(|&m| permutohedral_ray(m)).collect();
        ToricClass::monomial(fan, &rays).unwrap()
    }

    #[test]
    fn permutohedral_counts() {
        for (n, rays, cones) in [(1, 2, 2), (2, 6, 6), (3, 14, 24), (4, 30, 120)] {
            let fan = permutohedral_fan(n).unwrap();
            assert_eq!(fan.rays().len(), rays);
            assert_eq!(fan.maximal_cones().len(), cones);
        }
    }

    #[test]
    fn hexagon_products() {
        let fan = permutohedral_fan(2).unwrap();
        let x1 = fan.ray_divisor(permutohedral_ray(0b001));
        let x2 = fan.ray_divisor(permutohedral_ray(0b010));
        let x12 = fan.ray_divisor(permutohedral_ray(0b011));
        assert!(multiply_by_divisor(&x(&fan, &[0b001]), &x2).unwrap().is_zero());
        let point = multiply_by_divisor(&x(&fan, &[0b001]), &x12).unwrap();
        assert_eq!(toric_integral(&point).unwrap(), rat(1));
        assert_eq!(point, x(&fan, &[0b001, 0b011]));
        // a ray divisor squared on the hexagon is -1 (self-intersection of a (-1)-curve)
        let square = multiply_by_divisor(&x(&fan, &[0b001]), &x1).unwrap();
        assert_eq!(toric_integral(&square).unwrap(), rat(-1));
        let (h1, h2) = hyperplane_pullbacks(&fan, 0);
        let c = multiply_by_divisor(&multiply_by_divisor(&ToricClass::one(&fan), &h1).unwrap(), &h2).unwrap();
        assert_eq!(toric_integral(&c).unwrap(), rat(2));
    }

    #[test]
    fn integral_checks_degree() {
        let fan = permutohedral_fan(2).unwrap();
        assert!(matches!(
            toric_integral(&x(&fan, &[0b001])),
            Err(Error::DegreeMismatch { expected: 2, found: 1 })
        ));
        assert_eq!(toric_integral(&ToricClass::zero(&fan, 2)).unwrap(), rat(0));
    }

    #[test]
    fn mu_small() {
        let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(mu_generic(1).unwrap(), ints(&[1, 1]));
        assert_eq!(mu_generic(2).unwrap(), ints(&[1, 2, 1]));
        assert_eq!(mu_generic(3).unwrap(), ints(&[1, 3, 3, 1]));
    }

    #[test]
    fn rejects_bad_fans() {
        // two rays of P^1 scaled: not smooth
        let err = Fan::new(1, vec![vec![2], vec![-1]], vec![vec![0], vec![1]]).unwrap_err();
        assert!(matches!(err, Error::FanNotSmooth(_)));
        // a single quadrant is not complete
        let err = Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]).unwrap_err();
        assert!(matches!(err, Error::FanNotComplete(_)));
    }

    #[test]
    fn projective_plane_from_text() {
        let fan = Fan::parse("2 3 3\n1 0\n0 1\n-1 -1\n1 2\n2 3\n1 3\n").unwrap();
        let h = fan.ray_divisor(0);
        let c = multiply_by_divisor(&multiply_by_divisor(&ToricClass::one(&fan), &h).unwrap(), &h).unwrap();
        assert_eq!(toric_integral(&c).unwrap(), rat(1));
        assert!(Fan::parse(&fan.to_string()).is_ok());
        assert!(Fan::parse("2 3 3\n1 0\n").is_err());
        assert!(Fan::parse("2 1 1\n1 0\n0 1\n").is_err());
    }
}
