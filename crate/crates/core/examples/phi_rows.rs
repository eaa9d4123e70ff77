//! Prints rows of the ML-degree table φ(n, d) and the fitted polynomials in n.
//!
//! Usage: cargo run --release -p cq-core --example phi_rows [max_n]

use std::time::Instant;

use cq_core::exactmath::binomial_u64;
use cq_core::quadrics;

fn main() -> cq_core::error::Result<()> {
    let max_n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5);
    for n in 2..=max_n {
        let start = Instant::now();
        let row = (1..=binomial_u64(n as u64 + 1, 2))
            .map(|d| quadrics::phi(n, d).map(|v| v.to_string()))
            .collect::<cq_core::error::Result<Vec<_>>>()?;
        println!("n={n}: {} ({:.2?})", row.join(" "), start.elapsed());
    }
    for d in 1..=3 {
        println!("phi(n, {d}) = {}", quadrics::phi_polynomial(d)?);
    }
    Ok(())
}
