//! Torus-fixed points of complete quadrics, indexed by 2-permutations, and
//! the affine cells of the associated decomposition.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{binomial_u64, ExactRational, MultivariatePolynomial};

/// A surjection `σ: [n] → [k]` with fibres of size 1 or 2, stored as its
/// fibres `σ^{-1}(1), ..., σ^{-1}(k)` with 1-based, sorted labels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoPermutation {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl TwoPermutation {
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n: usize = blocks.iter().map(Vec::len).sum();
        let mut seen = vec![false; n + 1];
        let mut sorted = Vec::with_capacity(blocks.len());
        for mut block in blocks {
            if block.is_empty() || block.len() > 2 {
                return Err(Error::InvalidInput(format!("block {block:?} must have 1 or 2 elements")));
            }
            for &e in &block {
                if e == 0 || e > n || seen[e] {
                    return Err(Error::InvalidInput(format!("blocks do not partition 1..={n}")));
                }
                seen[e] = true;
            }
            block.sort_unstable();
            sorted.push(block);
        }
        Ok(Self { n, blocks: sorted })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of blocks `k`.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// `σ(i)` for 1-based `i`.
    pub fn image(&self, i: usize) -> usize {
        self.blocks.iter().position(|b| b.contains(&i)).expect("label in range") + 1
    }

    fn images(&self) -> Vec<usize> {
        let mut img = vec![0; self.n + 1];
        for (j, block) in self.blocks.iter().enumerate() {
            for &e in block {
                img[e] = j + 1;
            }
        }
        img
    }

    /// Whether `y_j` survives: `max σ^{-1}(j) < max σ^{-1}(j+1)`, for `1 ≤ j < k`.
    pub fn y_is_free(&self, j: usize) -> bool {
        self.blocks[j - 1].last() < self.blocks[j].last()
    }

    /// Whether `x_{ij}` survives (for `i < j`): `σ(i) ≤ σ(j)`.
    pub fn x_is_free(&self, i: usize, j: usize) -> bool {
        self.image(i) <= self.image(j)
    }
}

impl fmt::Display for TwoPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n >= 10 { "," } else { "" };
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(usize::to_string).collect::<Vec<_>>().join(sep))
            .collect();
        f.write_str(&parts.join("|"))
    }
}

impl FromStr for TwoPermutation {
    type Err = Error;

    /// Blocks are separated by `|`. Labels inside a block are single digits,
    /// or comma separated when labels above 9 are needed.
    fn from_str(s: &str) -> Result<Self> {
        let blocks = s
            .trim()
            .split('|')
            .map(|block| {
                let block = block.trim();
                let labels: Vec<&str> = if block.contains(',') {
                    block.split(',').map(str::trim).collect()
                } else {
                    block.char_indices().map(|(i, c)| &block[i..i + c.len_utf8()]).collect()
                };
                labels
                    .into_iter()
                    .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad label \"{t}\" in \"{s}\""))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(blocks)
    }
}

/// All 2-permutations of `[n]`, sorted lexicographically by their block lists.
pub fn enumerate_two_permutations(n: usize) -> Vec<TwoPermutation> {
    fn extend(remaining: &BTreeSet<usize>, prefix: &mut Vec<Vec<usize>>, out: &mut Vec<TwoPermutation>, n: usize) {
        if remaining.is_empty() {
            out.push(TwoPermutation { n, blocks: prefix.clone() });
            return;
        }
        let items: Vec<usize> = remaining.iter().copied().collect();
        for (idx, &a) in items.iter().enumerate() {
            let mut rest = remaining.clone();
            rest.remove(&a);
            prefix.push(vec![a]);
            extend(&rest, prefix, out, n);
            prefix.pop();
            for &b in &items[idx + 1..] {
                let mut rest2 = rest.clone();
                rest2.remove(&b);
                prefix.push(vec![a, b]);
                extend(&rest2, prefix, out, n);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        extend(&(1..=n).collect(), &mut Vec::new(), &mut out, n);
    }
    out.sort();
    out
}

/// `#{i < j : σ(i) ≤ σ(j)} + #{j < k : max σ^{-1}(j) < max σ^{-1}(j+1)}`.
pub fn weight(s: &TwoPermutation) -> usize {
    let img = s.images();
    let pairs = (1..=s.n).flat_map(|i| (i + 1..=s.n).map(move |j| (i, j))).filter(|&(i, j)| img[i] <= img[j]).count();
    let ys = (1..s.block_count()).filter(|&j| s.y_is_free(j)).count();
    pairs + ys
}

/// Number of 2-permutations of each weight `m = 0, ..., C(n+1,2) - 1`.
pub fn chow_group_dimensions(n: usize) -> Result<Vec<u64>> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("Chow group dimensions need n >= 2, got {n}")));
    }
    let mut hist = vec![0u64; binomial_u64(n as u64 + 1, 2) as usize];
    for s in enumerate_two_permutations(n) {
        let w = weight(&s);
        *hist.get_mut(w).ok_or_else(|| Error::Internal(format!("weight {w} exceeds the dimension")))? += 1;
    }
    Ok(hist)
}

/// Exponents `d_i = 4^i` of a one-parameter subgroup satisfying
/// `2d_1 < d_1+d_2 < 2d_2 < d_1+d_3 < d_2+d_3 < 2d_3 < ...`.
pub fn one_parameter_subgroup(n: usize) -> Result<Vec<u64>> {
    if n == 0 || n > 16 {
        return Err(Error::OutOfRange(format!("subgroup exponents are fixed for 1 <= n <= 16, got {n}")));
    }
    let d: Vec<u64> = (1..=n as u32).map(|i| 4u64.pow(i)).collect();
    let chain: Vec<u64> = (0..n).flat_map(|j| (0..=j).map(move |i| (i, j))).map(|(i, j)| d[i] + d[j]).collect();
    if chain.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Internal("subgroup exponents violate the ordering".into()));
    }
    Ok(d)
}

pub type SymbolicMatrix = Vec<Vec<MultivariatePolynomial>>;

fn x_name(n: usize, i: usize, j: usize) -> String {
    if n >= 10 {
        format!("x{i}_{j}")
    } else {
        format!("x{i}{j}")
    }
}

fn y_monomial(range: std::ops::Range<usize>, forced: &[bool]) -> MultivariatePolynomial {
    if range.clone().any(|t| forced[t]) {
        return MultivariatePolynomial::zero();
    }
    let names: Vec<String> = range.map(|t| format!("y{t}")).collect();
    MultivariatePolynomial::monomial(names.iter().map(String::as_str))
}

/// Symbolic data of the affine cell of a 2-permutation.
#[derive(Clone, Debug)]
pub struct CellParametrization {
    pub sigma: TwoPermutation,
    /// Lower unitriangular, `x_{ij}` in row `j`, column `i`.
    pub x: SymbolicMatrix,
    /// Block `j` carries `y_1 ⋯ y_{j-1}`.
    pub y: SymbolicMatrix,
    /// Block `j` carries `y_j ⋯ y_{k-1}`, so that `Y·Ỹ = (y_1 ⋯ y_{k-1}) I`.
    pub y_tilde: SymbolicMatrix,
    pub free_x: Vec<String>,
    pub free_y: Vec<String>,
}

impl CellParametrization {
    pub fn free_variable_count(&self) -> usize {
        self.free_x.len() + self.free_y.len()
    }

    pub fn free_variables(&self) -> Vec<String> {
        self.free_x.iter().chain(&self.free_y).cloned().collect()
    }

    /// `A = X Y X^T` with common monomial factors in the `y`'s cleared.
    pub fn a(&self) -> SymbolicMatrix {
        clear_y_gcd(mat_mul(&mat_mul(&self.x, &self.y), &transpose(&self.x)), &self.free_y)
    }

    /// `B = adj(X)^T Ỹ adj(X)` with common monomial factors in the `y`'s cleared.
    pub fn b(&self) -> SymbolicMatrix {
        let adj = unitriangular_inverse(&self.x);
        clear_y_gcd(mat_mul(&mat_mul(&transpose(&adj), &self.y_tilde), &adj), &self.free_y)
    }
}

pub fn cell_parametrization(s: &TwoPermutation) -> CellParametrization {
    let n = s.n;
    let k = s.block_count();
    let mut x = vec![vec![MultivariatePolynomial::zero(); n]; n];
    let mut free_x = Vec::new();
    for (j, row) in x.iter_mut().enumerate() {
        row[j] = MultivariatePolynomial::one();
        for i in 0..j {
            if s.x_is_free(i + 1, j + 1) {
                let name = x_name(n, i + 1, j + 1);
                row[i] = MultivariatePolynomial::var(&name);
                free_x.push(name);
            }
        }
    }
    // forced[t] for t in 1..k says y_t = 0
    let forced: Vec<bool> = (0..k).map(|t| t > 0 && !s.y_is_free(t)).collect();
    let free_y = (1..k).filter(|&t| !forced[t]).map(|t| format!("y{t}")).collect();
    let mut y = vec![vec![MultivariatePolynomial::zero(); n]; n];
    let mut y_tilde = y.clone();
    for (j, block) in s.blocks.iter().enumerate() {
        let (a, b) = (block[0] - 1, *block.last().unwrap() - 1);
        let m = y_monomial(1..j + 1, &forced);
        let mt = y_monomial(j + 1..k, &forced);
        y[a][b] = m.clone();
        y[b][a] = m;
        y_tilde[a][b] = mt.clone();
        y_tilde[b][a] = mt;
    }
    CellParametrization { sigma: s.clone(), x, y, y_tilde, free_x, free_y }
}

fn mat_mul(a: &SymbolicMatrix, b: &SymbolicMatrix) -> SymbolicMatrix {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .filter(|(p, q)| !p.is_zero() && !q[j].is_zero())
                        .fold(MultivariatePolynomial::zero(), |acc, (p, q)| &acc + &(p * &q[j]))
                })
                .collect()
        })
        .collect()
}

fn transpose(a: &SymbolicMatrix) -> SymbolicMatrix {
    let n = a.first().map_or(0, Vec::len);
    (0..n).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Inverse of `I + N` with `N` strictly lower triangular: `Σ (-N)^k`.
fn unitriangular_inverse(x: &SymbolicMatrix) -> SymbolicMatrix {
    let n = x.len();
    let identity: SymbolicMatrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { MultivariatePolynomial::one() } else { MultivariatePolynomial::zero() }).collect())
        .collect();
    let minus_n: SymbolicMatrix = x
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().enumerate().map(|(j, p)| if i == j { MultivariatePolynomial::zero() } else { -p }).collect())
        .collect();
    let mut sum = identity.clone();
    let mut power = identity;
    for _ in 1..n {
        power = mat_mul(&power, &minus_n);
        sum = sum.iter().zip(&power).map(|(r, s)| r.iter().zip(s).map(|(p, q)| p + q).collect()).collect();
    }
    sum
}

fn clear_y_gcd(mut m: SymbolicMatrix, ys: &[String]) -> SymbolicMatrix {
    for y in ys {
        let e = m.iter().flatten().filter(|p| !p.is_zero()).map(|p| p.min_exponent(y)).min().unwrap_or(0);
        if e > 0 {
            m = m.iter().map(|row| row.iter().map(|p| p.divide_by_power(y, e)).collect()).collect();
        }
    }
    m
}

/// Evaluates the cell at the given values of its free variables and checks
/// that `A·B = λ I` for some scalar `λ`; returns `(holds, λ)`.
pub fn verify_cell_point(s: &TwoPermutation, values: &HashMap<String, ExactRational>) -> Result<(bool, ExactRational)> {
    if s.n != 3 {
        return Err(Error::CompanionMatrixUnavailable(s.n));
    }
    evaluate_and_check(s, values)
}

/// The same check for any `n`, with the companion matrix built by the
/// rule `Ỹ` block `j` ↦ `y_j ⋯ y_{k-1}`.
pub fn verify_generic_point(s: &TwoPermutation, values: &HashMap<String, ExactRational>) -> Result<(bool, ExactRational)> {
    evaluate_and_check(s, values)
}

fn evaluate_and_check(s: &TwoPermutation, values: &HashMap<String, ExactRational>) -> Result<(bool, ExactRational)> {
    let cell = cell_parametrization(s);
    let free = cell.free_variables();
    for name in values.keys() {
        if !free.contains(name) {
            return Err(Error::InvalidInput(format!("{name} is not a free variable of the cell {s}")));
        }
    }
    for name in &free {
        match values.get(name) {
            None => return Err(Error::InvalidInput(format!("no value for {name}"))),
            Some(v) if v.is_zero() => return Err(Error::InvalidInput(format!("{name} must be nonzero"))),
            _ => {}
        }
    }
    let eval = |m: SymbolicMatrix| -> Result<Vec<Vec<ExactRational>>> {
        m.iter().map(|row| row.iter().map(|p| p.evaluate(values)).collect()).collect()
    };
    let a = eval(cell.a())?;
    let b = eval(cell.b())?;
    let product = crate::exactmath::linalg::mat_mul(&a, &b);
    let lambda = product[0][0].clone();
    let holds = product.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, v)| if i == j { *v == lambda } else { v.is_zero() })
    });
    Ok((holds, lambda))
}

/// `λ` predicted by the parametrization: the product of the surviving `y`'s,
/// or zero when some `y` is forced to vanish.
pub fn expected_lambda(s: &TwoPermutation, values: &HashMap<String, ExactRational>) -> ExactRational {
    if (1..s.block_count()).any(|t| !s.y_is_free(t)) {
        return ExactRational::zero();
    }
    (1..s.block_count()).fold(ExactRational::one(), |acc, t| acc * values.get(&format!("y{t}")).cloned().unwrap_or_else(ExactRational::zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    fn tp(s: &str) -> TwoPermutation {
        s.parse().unwrap()
    }

    fn v(name: &str) -> MultivariatePolynomial {
        MultivariatePolynomial::var(name)
    }

    fn c(x: i64) -> MultivariatePolynomial {
        MultivariatePolynomial::constant(rat(x))
    }

    #[test]
    fn parse_and_display() {
        let s = tp("2|13");
        assert_eq!(s.blocks(), &[vec![2], vec![1, 3]]);
        assert_eq!(s.to_string(), "2|13");
        assert_eq!(s.image(3), 2);
        assert!("1|1".parse::<TwoPermutation>().is_err());
        assert!("123".parse::<TwoPermutation>().is_err());
        assert!("1|3".parse::<TwoPermutation>().is_err());
        assert!("a|1".parse::<TwoPermutation>().is_err());
        let big = tp("1,10|2|3|4|5|6|7|8|9");
        assert_eq!(big.n(), 10);
        assert_eq!(big.to_string(), "1,10|2|3|4|5|6|7|8|9");
    }

    #[test]
    fn enumeration_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| enumerate_two_permutations(n).len()).collect();
        assert_eq!(counts, vec![1, 3, 12, 66, 450]);
        let two: Vec<String> = enumerate_two_permutations(2).iter().map(ToString::to_string).collect();
        assert_eq!(two, vec!["1|2", "12", "2|1"]);
    }

    #[test]
    fn table_weights() {
        let table = [
            ("1|2|3", 5),
            ("1|3|2", 3),
            ("2|1|3", 3),
            ("2|3|1", 2),
            ("3|1|2", 2),
            ("3|2|1", 0),
            ("12|3", 4),
            ("13|2", 2),
            ("23|1", 1),
            ("1|23", 4),
            ("2|13", 3),
            ("3|12", 1),
        ];
        for (s, w) in table {
            assert_eq!(weight(&tp(s)), w, "{s}");
        }
        assert_eq!(chow_group_dimensions(2).unwrap(), vec![1, 1, 1]);
        assert_eq!(chow_group_dimensions(3).unwrap(), vec![1, 2, 3, 3, 2, 1]);
        assert!(chow_group_dimensions(1).is_err());
    }

    #[test]
    fn subgroup_exponents() {
        assert_eq!(one_parameter_subgroup(3).unwrap(), vec![4, 16, 64]);
        assert!(one_parameter_subgroup(16).is_ok());
        assert!(one_parameter_subgroup(17).is_err());
    }

    #[test]
    fn full_cell_matrices() {
        let cell = cell_parametrization(&tp("1|2|3"));
        assert_eq!(cell.free_variable_count(), 5);
        let y1y2 = &v("y1") * &v("y2");
        assert_eq!(cell.y[0][0], c(1));
        assert_eq!(cell.y[1][1], v("y1"));
        assert_eq!(cell.y[2][2], y1y2);
        assert_eq!(cell.y_tilde[0][0], y1y2);
        assert_eq!(cell.y_tilde[1][1], v("y2"));
        assert_eq!(cell.y_tilde[2][2], c(1));
        let (x12, x13, x23, y1, y2) = (v("x12"), v("x13"), v("x23"), v("y1"), v("y2"));
        let a = cell.a();
        assert_eq!(a[0], vec![c(1), x12.clone(), x13.clone()]);
        assert_eq!(a[1][1], &(&x12 * &x12) + &y1);
        assert_eq!(a[1][2], &(&x12 * &x13) + &(&x23 * &y1));
        assert_eq!(a[2][2], &(&(&(&x23 * &x23) * &y1) + &(&x13 * &x13)) + &y1y2);
        let b = cell.b();
        let b02 = &(&x12 * &x23) - &x13;
        assert_eq!(b[0][2], b02);
        assert_eq!(b[1][1], &(&x23 * &x23) + &y2);
        assert_eq!(b[1][2], -&x23);
        assert_eq!(b[2][2], c(1));
        let b01 = &(&(&x13 * &x23) - &(&(&x12 * &x23) * &x23)) - &(&x12 * &y2);
        assert_eq!(b[0][1], b01);
        assert_eq!(b[1][0], b01);
        let b00 = [
            &(&(&x12 * &x12) * &x23) * &x23,
            &(&(&x12 * &x13) * &x23) * &c(-2),
            &(&x12 * &x12) * &y2,
            &x13 * &x13,
            y1y2.clone(),
        ]
        .iter()
        .fold(MultivariatePolynomial::zero(), |acc, t| &acc + t);
        assert_eq!(b[0][0], b00);
    }

    #[test]
    fn three_dimensional_cell_matrices() {
        let cell = cell_parametrization(&tp("2|13"));
        assert_eq!(cell.free_x, vec!["x13", "x23"]);
        assert_eq!(cell.free_y, vec!["y1"]);
        assert!(cell.x[1][0].is_zero());
        let (x13, x23, y1) = (v("x13"), v("x23"), v("y1"));
        let zero = MultivariatePolynomial::zero();
        assert_eq!(cell.y, vec![vec![zero.clone(), zero.clone(), y1.clone()], vec![zero.clone(), c(1), zero.clone()], vec![y1.clone(), zero.clone(), zero.clone()]]);
        let a = cell.a();
        assert_eq!(a[0], vec![zero.clone(), zero.clone(), y1.clone()]);
        assert_eq!(a[1], vec![zero.clone(), c(1), x23.clone()]);
        assert_eq!(a[2], vec![y1.clone(), x23.clone(), &(&x23 * &x23) + &(&(&x13 * &y1) * &c(2))]);
        let b = cell.b();
        assert_eq!(b[0], vec![&x13 * &c(-2), -&x23, c(1)]);
        assert_eq!(b[1], vec![-&x23, y1.clone(), zero.clone()]);
        assert_eq!(b[2], vec![c(1), zero.clone(), zero]);
    }

    #[test]
    fn point_checks() {
        let vals: HashMap<String, ExactRational> =
            [("x13", 1), ("x23", 1), ("y1", 1)].iter().map(|&(k, x)| (k.to_string(), rat(x))).collect();
        assert_eq!(verify_cell_point(&tp("2|13"), &vals).unwrap(), (true, rat(1)));
        let fixed = tp("3|2|1");
        assert_eq!(cell_parametrization(&fixed).free_variable_count(), 0);
        assert_eq!(verify_cell_point(&fixed, &HashMap::new()).unwrap(), (true, rat(0)));
        assert!(matches!(
            verify_cell_point(&tp("1|2|3|4"), &HashMap::new()),
            Err(Error::CompanionMatrixUnavailable(4))
        ));
        let mut bad = vals.clone();
        bad.insert("y1".into(), rat(0));
        assert!(verify_cell_point(&tp("2|13"), &bad).is_err());
        bad.remove("y1");
        assert!(verify_cell_point(&tp("2|13"), &bad).is_err());
    }
}
