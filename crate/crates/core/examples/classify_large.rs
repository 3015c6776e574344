//! The pairs with `m(q, e) >= e/6`: the parametric families `e = (a/b)(q-1)`
//! and the finite lists, checked against the search engine.
//!
//! ```bash
//! cargo run --release -p msum --example classify_large
//! cargo run --release -p msum --example classify_large -- 400
//! ```

use msum::classification::{classify_large, exceptional_pairs, CaseTag, FAMILIES};
use msum::m;
use msum::modular::gcd;

fn main() -> msum::Result<()> {
    let e_max: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(200);

    println!("families:");
    for f in FAMILIES {
        let mut cond = format!("q >= {}", f.q_min);
        if f.coprime_to > 1 {
            cond += &format!(", gcd(q, {}) = 1", f.coprime_to);
        }
        if let Some((md, r)) = f.congruence {
            cond += &format!(", q ≡ {r} mod {md}");
        }
        println!("  ({}) e = {}/{} (q-1), {cond}", f.tag, f.a, f.b);
    }

    let mut mismatches = 0;
    for (tag, e, q, listed) in exceptional_pairs() {
        let got = m(q, e)?.value;
        if got != listed {
            mismatches += 1;
            println!("  ({tag}) m({q}, {e}) = {got}, listed {listed}");
        }
    }
    println!(
        "listed pairs: {} checked, {mismatches} mismatches",
        exceptional_pairs().len()
    );

    let mut per_case = std::collections::BTreeMap::new();
    for e in 4..=e_max {
        for q in 2..e - 1 {
            if gcd(q, e) != 1 {
                continue;
            }
            let c = classify_large(q, e)?;
            let got = m(q, e)?.value;
            assert_eq!(c.tag != CaseTag::None, 6 * got >= e, "q = {q}, e = {e}");
            if let Some(p) = c.m_predicted {
                assert_eq!(p, got, "q = {q}, e = {e}");
            }
            *per_case.entry(c.tag.as_str()).or_insert(0u64) += 1;
        }
    }
    println!("pairs with 1 < q < e - 1, e <= {e_max}, by case:");
    for (tag, count) in per_case {
        println!("  {tag:>5}: {count}");
    }
    Ok(())
}
