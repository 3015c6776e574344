//! Tables of `m` for subgroups of order 5 and 7 modulo prime powers `p^k`,
//! `p ≡ 1 (mod n)`, up to the level where `m` reaches `n`.
//!
//! ```bash
//! cargo run --release -p msum --example order_tables
//! cargo run --release -p msum --example order_tables -- 7 2689
//! ```

use msum::prime_power::{order_table, prop14_expected, prop15_expected};
use msum::render::{self, Format};

fn main() -> msum::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .filter_map(|s| s.parse().ok())
        .collect();
    let n = args.first().copied().unwrap_or(5);
    let p_max = args.get(1).copied().unwrap_or(1000);
    let rows = order_table(n, p_max, 8)?;
    let below: Vec<_> = rows.iter().filter(|r| r.m < n).cloned().collect();
    print!("{}", render::table_rows(&below, Format::Text));
    println!("{} rows, {} with m < {n}", rows.len(), below.len());
    let expected: Option<fn(u64, u32) -> u64> = match n {
        5 => Some(prop14_expected),
        7 => Some(prop15_expected),
        _ => None,
    };
    if let Some(f) = expected {
        let bad = rows.iter().filter(|r| r.m != f(r.p, r.k)).count();
        println!("rows differing from the published table: {bad}");
    }
    Ok(())
}
