//! Prime-power towers beyond prime order: composite subgroup orders, and
//! a fixed base `q` whose order grows once `k` passes `v_p(q^n - 1)`.
//!
//! ```bash
//! cargo run --release -p msum --example composite_towers
//! ```

use msum::prime_power::{fixed_base_tower, tower_sequence, COMPOSITE_ORDER_SEQUENCES};

fn main() -> msum::Result<()> {
    println!("composite orders:");
    for &(p, n, expected) in COMPOSITE_ORDER_SEQUENCES {
        let report = tower_sequence(p, n, expected.len() as u32)?;
        let seq = report.sequence();
        let mark = if seq == expected { "ok" } else { "MISMATCH" };
        println!("  p={p:>4} n={n:>3} r={}: {seq:?} {mark}", report.r);
    }

    let t = fixed_base_tower(9, 11, 4)?;
    println!("\nq = 9, p = 11: ord_p(q) = {}, w = {:?}", t.n, t.w);
    for x in &t.entries {
        println!(
            "  k={} ord = 11^{} * {} = {:>5}  m = {}",
            x.k, x.i, x.d, x.ord, x.m
        );
    }
    println!(
        "order pattern holds: {}, m stabilizes: {}, limit {:?}",
        t.order_pattern_holds(),
        t.m_stabilizes(),
        t.limit()
    );
    Ok(())
}
