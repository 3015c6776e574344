//! Reproduces the tower sequences `m(Q_k, p^k)` for subgroups of prime
//! order 11, 13, 17 and 19, where `Q_k` has the same order at every level.
//!
//! ```bash
//! cargo run --release -p msum --example prime_order_towers
//! cargo run --release -p msum --example prime_order_towers -- 17
//! ```

use std::time::Instant;

use msum::prime_power::{tower_sequence, PRIME_ORDER_SEQUENCES};

fn main() -> msum::Result<()> {
    let only: Option<u64> = std::env::args().nth(1).and_then(|s| s.parse().ok());
    for &(n, primes, expected) in PRIME_ORDER_SEQUENCES {
        if only.is_some_and(|o| o != n) {
            continue;
        }
        for &p in primes {
            let start = Instant::now();
            let report = tower_sequence(p, n, expected.len() as u32 + 1)?;
            let seq = report.sequence();
            let mark = if seq == expected { "ok" } else { "MISMATCH" };
            println!(
                "n={n:>2} p={p:>4}: {seq:?} (expected {expected:?}) {mark} [{:.2?}]",
                start.elapsed()
            );
        }
    }
    Ok(())
}
