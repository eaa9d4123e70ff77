mod common;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{pow, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use cq_core::cells;
use cq_core::exactmath::{binomial_u64, is_log_concave, rat, rat_frac, ExactRational};
use cq_core::matroid::{self, Graph, Matroid};
use cq_core::quadrics::{self, CQProduct, CqEngine, PickStrategy};
use cq_core::segre::{self, SegreData};
use cq_core::toric::{self, ToricClass};

/// Rewrites every `S_i` as `-L_{i-1} + 2L_i - L_{i+1}` and integrates the
/// resulting pure-`L` monomials one by one.
fn expand_s_factors(n: usize, a: &[u32], b: &[u32]) -> BigInt {
    let mut terms: HashMap<Vec<u32>, BigInt> = HashMap::new();
    terms.insert(b.to_vec(), BigInt::from(1));
    for (idx, &e) in a.iter().enumerate() {
        let i = idx + 1;
        for _ in 0..e {
            let mut next: HashMap<Vec<u32>, BigInt> = HashMap::new();
            for (mono, c) in &terms {
                for (j, coeff) in [(i - 1, -1), (i, 2), (i + 1, -1)] {
                    // L_0 and L_n are zero
                    if j == 0 || j == n {
                        continue;
                    }
                    let mut m = mono.clone();
                    m[j - 1] += 1;
                    *next.entry(m).or_insert_with(BigInt::zero) += c * coeff;
                }
            }
            terms = next;
        }
    }
    terms
        .into_iter()
        .map(|(mono, c)| c * quadrics::intersection_product(&CQProduct::lines(n, mono).unwrap()).unwrap())
        .sum()
}

/// Exponent profiles of top degree on CQ_n with at most `max_s` S factors.
fn profiles(n: usize, max_s: u32) -> Vec<(Vec<u32>, Vec<u32>)> {
    let top = binomial_u64(n as u64 + 1, 2) as u32 - 1;
    let k = n - 1;
    let mut out = Vec::new();
    let compositions = |total: u32| -> Vec<Vec<u32>> {
        let mut res = Vec::new();
        let mut cur = vec![0u32; k];
        fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, res: &mut Vec<Vec<u32>>) {
            if pos + 1 == cur.len() {
                cur[pos] = left;
                res.push(cur.clone());
                return;
            }
            for v in 0..=left {
                cur[pos] = v;
                rec(pos + 1, left - v, cur, res);
            }
        }
        rec(0, total, &mut cur, &mut res);
        res
    };
    for s_total in 0..=max_s.min(top) {
        for a in compositions(s_total) {
            for b in compositions(top - s_total) {
                out.push((a.clone(), b));
            }
        }
    }
    out
}

#[test]
fn engine_matches_s_expansion() {
    for (n, max_s) in [(2, 2), (3, 5), (4, 3)] {
        for (a, b) in profiles(n, max_s) {
            let direct = quadrics::intersection_product(&CQProduct::new(n, a.clone(), b.clone()).unwrap()).unwrap();
            let expanded = expand_s_factors(n, &a, &b);
            assert_eq!(direct, expanded, "n={n} a={a:?} b={b:?}");
        }
    }
}

/// The lemma concerns profiles with every `a_i` in {0, 1}.
#[test]
fn vanishing_lemma_hypothesis_gives_zero() {
    let mut checked = 0;
    for n in [3, 4] {
        for (a, b) in profiles(n, 3).into_iter().filter(|(a, _)| a.iter().all(|&x| x <= 1)) {
            let zero_idx: Vec<usize> = (0..n - 1).filter(|&i| a[i] == 0).collect();
            if zero_idx.is_empty() || a.iter().all(|&x| x == 0) || zero_idx.iter().any(|&i| b[i] != 0) {
                continue;
            }
            assert!(expand_s_factors(n, &a, &b).is_zero(), "n={n} a={a:?} b={b:?}");
            let direct = quadrics::intersection_product(&CQProduct::new(n, a.clone(), b.clone()).unwrap()).unwrap();
            assert!(direct.is_zero(), "n={n} a={a:?} b={b:?}");
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn pick_strategy_does_not_change_results() {
    for n in 2..=4 {
        for (a, b) in profiles(n, 3) {
            let base = CqEngine::new(n).unwrap().intersection_product(&a, &b).unwrap();
            for strategy in [PickStrategy::Largest, PickStrategy::Seeded(17), PickStrategy::Seeded(99)] {
                let other = CqEngine::with_strategy(n, strategy).unwrap().intersection_product(&a, &b).unwrap();
                assert_eq!(base, other, "n={n} a={a:?} b={b:?} {strategy:?}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn line_pair_duality(n in 2usize..=5, frac in 0.0f64..=1.0) {
        let total = binomial_u64(n as u64 + 1, 2) as u32 - 1;
        let x = (frac * total as f64).round() as u32;
        let y = total - x;
        prop_assert_eq!(
            quadrics::line_pair_integral(n, x, y).unwrap(),
            quadrics::line_pair_integral(n, y, x).unwrap()
        );
    }

    #[test]
    fn phi_values_positive(n in 2usize..=5, frac in 0.0f64..=1.0) {
        let top = binomial_u64(n as u64 + 1, 2);
        let d = 1 + (frac * (top - 1) as f64).round() as u64;
        prop_assert!(quadrics::phi(n, d).unwrap() > BigInt::zero());
    }
}

#[test]
fn characteristic_polynomial_paths_agree_on_corpus() {
    for (name, g) in common::graph_corpus(true) {
        let m = matroid::matroid_from_graph(&g);
        assert_eq!(
            matroid::characteristic_polynomial(&m),
            matroid::characteristic_polynomial_whitney(&m),
            "{name}"
        );
        let chi = matroid::characteristic_polynomial(&m);
        if !g.has_loop() && !g.edges().is_empty() {
            assert!(chi.evaluate_at(1).is_zero(), "{name}: chi(1) != 0");
            let nu = matroid::reduced_characteristic_coefficients(&m).unwrap();
            assert!(is_log_concave(&nu), "{name}: {nu:?}");
        } else if g.has_loop() {
            assert!(chi.is_zero(), "{name}");
        }
    }
}

#[test]
fn chromatic_polynomial_counts_colorings() {
    for (name, g) in common::graph_corpus(true).into_iter().filter(|(_, g)| g.vertex_count() <= 5) {
        let p = matroid::chromatic_polynomial(&g);
        for q in 0..=3usize {
            let colorings = (0..pow(q, g.vertex_count()))
                .filter(|&code| {
                    let color = |v: usize| (code / pow(q, v)) % q;
                    g.edges().iter().all(|&(u, v)| color(u) != color(v))
                })
                .count();
            assert_eq!(p.evaluate_at(q as i64), rat(colorings as i64), "{name} q={q}");
        }
    }
}

#[test]
fn uniform_reduced_coefficients_are_binomials() {
    for n in 1..=9 {
        for r in 1..=n {
            let nu = matroid::reduced_characteristic_coefficients(&Matroid::uniform(r, n).unwrap()).unwrap();
            assert_eq!(nu, matroid::uniform_reduced_coefficients(r, n), "U_{r},{n}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_axioms(seed in 0u64..10_000, s in any::<u64>(), t in any::<u64>()) {
        let mut r = common::rng(seed);
        let v = r.gen_range(2..=6);
        let e = r.gen_range(1..=10);
        let edges = (0..e).map(|_| (r.gen_range(0..v), r.gen_range(0..v))).collect();
        let graphic = matroid::matroid_from_graph(&Graph::new(v, edges).unwrap());
        let rows: Vec<Vec<ExactRational>> = (0..r.gen_range(1..=3))
            .map(|_| (0..6).map(|_| rat(r.gen_range(-2..=2))).collect())
            .collect();
        let quotient = matroid::matroid_from_subspace(&rows).unwrap();
        let columns = Matroid::from_columns(&rows).unwrap();
        for m in [&graphic, &quotient, &columns] {
            let (s, t) = (s & m.ground_set(), t & m.ground_set());
            prop_assert_eq!(m.rank(0), 0);
            prop_assert!(m.rank(s) <= s.count_ones() as usize);
            prop_assert!(m.rank(s & t) <= m.rank(s));
            prop_assert!(m.rank(s) + m.rank(t) >= m.rank(s | t) + m.rank(s & t));
        }
    }
}

#[test]
fn permutohedral_fans_validate() {
    for n in 1..=4 {
        let fan = toric::permutohedral_fan(n).unwrap();
        assert_eq!(fan.rays().len(), (1 << (n + 1)) - 2);
        assert_eq!(fan.maximal_cones().len(), (1..=n + 1).product::<usize>());
    }
}

#[test]
fn mu_generic_symmetric_and_log_concave() {
    for n in 1..=4 {
        let mu = toric::mu_generic(n).unwrap();
        let mut rev = mu.clone();
        rev.reverse();
        assert_eq!(mu, rev);
        assert!(is_log_concave(&mu));
        for k in 2..=n + 1 {
            assert_eq!(toric::mu_generic_with_distinguished(n, k).unwrap(), mu, "n={n} k={k}");
        }
    }
}

#[test]
fn toric_products_commute() {
    for n in [2usize, 3] {
        let fan = toric::permutohedral_fan(n).unwrap();
        let mut r = common::rng(n as u64);
        for _ in 0..30 {
            let divisors: Vec<Vec<ExactRational>> = (0..n)
                .map(|_| (0..fan.rays().len()).map(|_| rat(r.gen_range(-2..=2))).collect())
                .collect();
            let integrate = |order: &[usize]| {
                let mut c = ToricClass::one(&fan);
                for &i in order {
                    c = toric::multiply_by_divisor(&c, &divisors[i]).unwrap();
                }
                toric::toric_integral(&c).unwrap()
            };
            let mut order: Vec<usize> = (0..n).collect();
            let base = integrate(&order);
            for _ in 0..4 {
                order.shuffle(&mut r);
                assert_eq!(integrate(&order), base);
            }
        }
    }
}

#[test]
fn cell_dimensions_match_free_variables() {
    for n in 1..=5 {
        for s in cells::enumerate_two_permutations(n) {
            assert_eq!(cells::weight(&s), cells::cell_parametrization(&s).free_variable_count(), "{s}");
        }
    }
}

#[test]
fn chow_histograms_palindromic() {
    for n in 2..=5 {
        let hist = cells::chow_group_dimensions(n).unwrap();
        let mut rev = hist.clone();
        rev.reverse();
        if n <= 4 {
            assert_eq!(hist, rev, "n={n}");
        }
        assert_eq!(hist.iter().sum::<u64>() as usize, cells::enumerate_two_permutations(n).len());
    }
}

#[test]
fn generic_points_on_larger_cells() {
    let mut r = common::rng(44);
    for n in [4, 5] {
        for s in cells::enumerate_two_permutations(n).into_iter().step_by(7) {
            let values: HashMap<String, ExactRational> = cells::cell_parametrization(&s)
                .free_variables()
                .into_iter()
                .map(|name| {
                    let v = loop {
                        let v = r.gen_range(-9i64..=9);
                        if v != 0 {
                            break v;
                        }
                    };
                    (name, rat_frac(v, r.gen_range(1..=4)))
                })
                .collect();
            let (holds, lambda) = cells::verify_generic_point(&s, &values).unwrap();
            assert!(holds, "{s}");
            assert_eq!(lambda, cells::expected_lambda(&s, &values), "{s}");
        }
    }
}

proptest! {
    #[test]
    fn zero_segre_data_gives_bezout_bound(deg_f in 1i64..6, n_l in 0i64..6, m_frac in 0.0f64..=1.0) {
        let m_y = (m_frac * n_l as f64).floor() as i64;
        let d = SegreData { deg_f, n_l, m_y, s: vec![0; m_y as usize + 1] };
        for i in 0..=n_l {
            prop_assert_eq!(segre::mu_from_segre(&d, i).unwrap(), pow(BigInt::from(deg_f - 1), i as usize));
        }
    }

    #[test]
    fn mu_and_nu_formulas_agree_on_shared_data(s0 in -10i64..10, s1 in -10i64..10) {
        let d = SegreData { deg_f: 4, n_l: 2, m_y: 1, s: vec![s0, s1] };
        for i in 0..=2 {
            prop_assert_eq!(segre::mu_from_segre(&d, i).unwrap(), segre::nu_from_segre(&d, i).unwrap());
        }
    }
}

#[test]
fn alternating_sum_of_palindromic_sequence() {
    let nu: Vec<BigInt> = [1, 2, 2, 1].iter().map(|&x| BigInt::from(x)).collect();
    assert!(matroid::euler_characteristic_complement(&nu).is_zero());
}
