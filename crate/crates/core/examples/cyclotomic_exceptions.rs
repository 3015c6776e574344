//! Finite exception sets from cyclotomic Bézout denominators: for order `n`,
//! every prime power where the order-`n` subgroup has `m` below
//! `n / (n - φ(n))` divides a denominator of some `Σ X^i` against `Φ_n`.
//!
//! ```bash
//! cargo run --release -p msum --example cyclotomic_exceptions
//! cargo run --release -p msum --example cyclotomic_exceptions -- 11
//! ```

use msum::cyclotomic::{
    bezout_denominator, corollary13_exceptions, cyclotomic, threshold, IntPolynomial,
};
use msum::render::{self, Format};

fn main() -> msum::Result<()> {
    let ns: Vec<u64> = std::env::args()
        .skip(1)
        .filter_map(|s| s.parse().ok())
        .collect();
    let ns = if ns.is_empty() { vec![5, 7] } else { ns };
    for n in ns {
        println!("Φ_{n} = {}", cyclotomic(n)?);
        println!("threshold = {}", threshold(n)?);
        let g = IntPolynomial::from_exponents(&[0, 1, 2]);
        println!("d({g}) = {}", bezout_denominator(&g, n)?);
        let set = corollary13_exceptions(n, 8)?;
        print!("{}", render::exceptions(&set, Format::Text));
        println!();
    }
    Ok(())
}
