//! Computes `m(q, e)` for one pair and prints the witness, the order of `q`,
//! `e1 = gcd(e, q - 1)` and any closed form that determines the value.
//!
//! ```bash
//! cargo run --release -p msum --example single_value -- 4 7
//! cargo run --release -p msum --example single_value -- 3 1000003
//! ```

use msum::render::{self, Format};
use msum::{is_m_two, m, verify_witness, PowerSumInstance};

fn main() -> msum::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .filter_map(|s| s.parse().ok())
        .collect();
    let (q, e) = match args[..] {
        [q, e] => (q, e),
        _ => (4, 7),
    };
    let inst = PowerSumInstance::new(q, e)?;
    let r = m(q, e)?;
    print!("{}", render::m_result(&inst, &r, Format::Text));
    println!(
        "witness checks: {}",
        verify_witness(q, e, &r.witness, r.value)
    );
    println!("m = 2 test: {}", is_m_two(&inst));
    Ok(())
}
