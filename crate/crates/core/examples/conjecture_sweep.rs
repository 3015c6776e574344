//! Exhaustive sweeps over all pairs with `e` in a range: the upper bound
//! `m <= ceil(e/n)` with its equality cases, `e1 | m`, and the conjectured
//! bound `m <= k e1` for `e < (e1+1)^(k+1) - 1`.
//!
//! ```bash
//! cargo run --release -p msum --example conjecture_sweep
//! cargo run --release -p msum --example conjecture_sweep -- 2049 4
//! ```

use msum::campaign::{Campaign, ClaimParams};
use msum::render::{self, Format};

fn main() -> msum::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .filter_map(|s| s.parse::<u64>().ok());
    let e_max = args.next().unwrap_or(600);
    let mut campaign = Campaign::new();
    if let Some(j) = args.next() {
        campaign = campaign.with_jobs(j as usize);
    }
    let params = ClaimParams {
        e_max: Some(e_max),
        ..Default::default()
    };
    for claim in ["theorem1", "divisibility", "conjecture4"] {
        let report = campaign.run(claim, &params)?;
        print!("{}", render::report(&report, Format::Text));
        if let Some(eq) = &report.equality_cases {
            let preview: Vec<String> = eq
                .iter()
                .take(8)
                .map(|(q, e)| format!("({q},{e})"))
                .collect();
            println!("first equality cases: {}", preview.join(" "));
        }
        println!();
    }
    Ok(())
}
