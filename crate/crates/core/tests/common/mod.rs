#![allow(dead_code)]

use cq_core::matroid::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Named graphs plus seeded random multigraphs, all with at most 8 edges.
/// Loops are included only when `with_loops` is set.
pub fn graph_corpus(with_loops: bool) -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = Vec::new();
    for n in 2..=8 {
        out.push((format!("C{n}"), Graph::cycle(n)));
    }
    for n in 2..=4 {
        out.push((format!("K{n}"), Graph::complete(n)));
    }
    let named: [(&str, usize, &[(usize, usize)]); 6] = [
        ("path4", 4, &[(0, 1), (1, 2), (2, 3)]),
        ("star5", 5, &[(0, 1), (0, 2), (0, 3), (0, 4)]),
        ("theta", 4, &[(0, 1), (1, 3), (0, 2), (2, 3), (0, 3)]),
        ("bowtie", 5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]),
        ("double-edge", 2, &[(0, 1), (0, 1)]),
        ("K4+chord", 4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 1), (2, 3)]),
    ];
    for (name, v, edges) in named {
        out.push((name.to_string(), Graph::new(v, edges.to_vec()).unwrap()));
    }
    let mut r = rng(2024);
    for k in 0..120 {
        let v = r.gen_range(2..=6);
        let e = r.gen_range(1..=8);
        let edges = (0..e)
            .map(|_| loop {
                let (a, b) = (r.gen_range(0..v), r.gen_range(0..v));
                if a != b || with_loops {
                    break (a, b);
                }
            })
            .collect();
        out.push((format!("random{k}"), Graph::new(v, edges).unwrap()));
    }
    out
}
