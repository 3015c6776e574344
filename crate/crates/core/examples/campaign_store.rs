//! A grid of `m` values computed in parallel and persisted to a result store,
//! then a second run that reads every row back instead of searching.
//!
//! ```bash
//! cargo run --release -p msum --example campaign_store -- /tmp/msum.store 300
//! ```

use std::path::PathBuf;
use std::time::Instant;

use msum::campaign::{Campaign, ResultStore};
use msum::render::{self, Format};

fn main() -> msum::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("msum-example.store"));
    let e_max: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(300);

    for round in 1..=2 {
        let store = ResultStore::open(&path)?;
        let before = store.len();
        let mut c = Campaign::new().with_store(store);
        let start = Instant::now();
        let records = c.pairs(1, e_max)?;
        println!(
            "run {round}: {} pairs, store had {before} rows, appended {} [{:.2?}]",
            records.len(),
            c.rows_appended(),
            start.elapsed()
        );
        if round == 2 {
            let small: Vec<_> = records.into_iter().filter(|r| r.e <= 8).collect();
            print!("{}", render::grid(&small, Format::Csv));
        }
    }
    println!("store: {}", path.display());
    Ok(())
}
