//! Text, JSON and CSV renderings of library results. Text output is aligned
//! columns; CSV has a header row and only integer fields.

use std::fmt::Write;

use serde::Serialize;

use crate::campaign::{PairRecord, VerificationReport};
use crate::classification::{classify_large, exceptional_pairs, lemma3_applies, CaseTag};
use crate::cyclotomic::ExceptionSet;
use crate::engine::{ceil_bound, is_m_two, two_power_m, MResult};
use crate::modular::PowerSumInstance;
use crate::prime_power::{TableRow, TowerReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format `{s}` (text, json, csv)")),
        }
    }
}

/// Right-aligned columns separated by two spaces.
pub fn aligned(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&width)
            .map(|(c, &w)| format!("{c:>w$}"))
            .collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(headers.to_vec(), &mut out);
    for row in rows {
        line(row.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

fn csv(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = headers.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn json<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn tuple(xs: &[u64]) -> String {
    let parts: Vec<String> = xs.iter().map(u64::to_string).collect();
    format!("({})", parts.join(", "))
}

/// `q^a + q^b + …`, with repeated exponents written as `c*q^a`.
pub fn witness_sum(q: u64, witness: &[u64]) -> String {
    let mut terms = Vec::new();
    let mut i = 0;
    while i < witness.len() {
        let a = witness[i];
        let c = witness[i..].iter().take_while(|&&x| x == a).count();
        terms.push(if c == 1 {
            format!("{q}^{a}")
        } else {
            format!("{c}*{q}^{a}")
        });
        i += c;
    }
    terms.join(" + ")
}

/// Closed forms and structural results that determine `m` for this pair.
pub fn closed_forms(inst: &PowerSumInstance) -> Vec<String> {
    let (q, e) = (inst.q_reduced(), inst.e);
    let mut out = Vec::new();
    if e == 1 {
        out.push("e = 1: m = 1".to_string());
        return out;
    }
    if inst.n == 1 {
        out.push("q ≡ 1 (mod e): m = e".to_string());
        return out;
    }
    if e.is_power_of_two() {
        if let Ok(v) = two_power_m(q, e.trailing_zeros()) {
            out.push(format!("e = 2^{}: m = {v}", e.trailing_zeros()));
        }
    }
    if is_m_two(inst) {
        out.push("q^(n/2) ≡ -1 (mod e): m = 2".to_string());
    }
    if q > 1 && q < e && lemma3_applies(inst) {
        out.push(format!("e < e1^2 + 2e1: m = e1 = {}", inst.e1));
    }
    if q > 1 && q + 1 < e {
        if let Ok(c) = classify_large(q, e) {
            if c.tag != CaseTag::None {
                out.push(format!(
                    "large case ({}): m = {}",
                    c.tag,
                    c.m_predicted.unwrap_or(0)
                ));
            }
        }
    }
    out
}

#[derive(Serialize)]
struct MJson<'a> {
    q: u64,
    e: u64,
    n: u64,
    e1: u64,
    m: u64,
    witness: &'a [u64],
    ceil_bound: u64,
    closed_forms: Vec<String>,
}

pub fn m_result(inst: &PowerSumInstance, r: &MResult, format: Format) -> String {
    let bound = ceil_bound(inst);
    let forms = closed_forms(inst);
    match format {
        Format::Json => json(&MJson {
            q: inst.q,
            e: inst.e,
            n: inst.n,
            e1: inst.e1,
            m: r.value,
            witness: &r.witness,
            ceil_bound: bound,
            closed_forms: forms,
        }),
        Format::Csv => csv(
            &["q", "e", "n", "e1", "m", "ceil_bound"],
            &[[inst.q, inst.e, inst.n, inst.e1, r.value, bound]
                .iter()
                .map(u64::to_string)
                .collect()],
        ),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "m({}, {}) = {}", inst.q, inst.e, r.value).unwrap();
            writeln!(
                s,
                "witness: {} ≡ 0 (mod {})",
                witness_sum(inst.q, &r.witness),
                inst.e
            )
            .unwrap();
            writeln!(s, "n = {}, e1 = {}, ceil(e/n) = {}", inst.n, inst.e1, bound).unwrap();
            if forms.is_empty() {
                writeln!(s, "closed form: none").unwrap();
            }
            for f in forms {
                writeln!(s, "closed form: {f}").unwrap();
            }
            s
        }
    }
}

pub fn grid(records: &[PairRecord], format: Format) -> String {
    let headers = ["e", "q", "n", "e1", "m"];
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                e: u64,
                q: u64,
                n: u64,
                e1: u64,
                m: u64,
            }
            let rows: Vec<Row> = records
                .iter()
                .map(|r| Row {
                    e: r.e,
                    q: r.q,
                    n: r.n,
                    e1: r.e1,
                    m: r.m,
                })
                .collect();
            json(&rows)
        }
        _ => {
            let rows: Vec<Vec<String>> = records
                .iter()
                .map(|r| {
                    [r.e, r.q, r.n, r.e1, r.m]
                        .iter()
                        .map(u64::to_string)
                        .collect()
                })
                .collect();
            if format == Format::Csv {
                csv(&headers, &rows)
            } else {
                aligned(&headers, &rows)
            }
        }
    }
}

pub fn table_rows(rows: &[TableRow], format: Format) -> String {
    match format {
        Format::Json => json(rows),
        Format::Csv => {
            let mut s = format!("{}\n", TableRow::CSV_HEADER);
            for r in rows {
                s.push_str(&r.csv());
                s.push('\n');
            }
            s
        }
        Format::Text => {
            let headers: Vec<&str> = TableRow::CSV_HEADER.split(',').collect();
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| r.csv().split(',').map(str::to_string).collect())
                .collect();
            aligned(&headers, &body)
        }
    }
}

pub fn tower(report: &TowerReport, format: Format) -> String {
    match format {
        Format::Json => json(report),
        Format::Csv => table_rows(&crate::prime_power::tower_rows(report), Format::Csv),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "p = {}, n = {}, r = {}", report.p, report.n, report.r).unwrap();
            let rows: Vec<Vec<String>> = report
                .levels
                .iter()
                .map(|l| {
                    vec![
                        l.k.to_string(),
                        l.modulus.to_string(),
                        l.generator.to_string(),
                        l.ord.to_string(),
                        l.m.to_string(),
                        l.w.to_string(),
                    ]
                })
                .collect();
            s.push_str(&aligned(
                &["k", "modulus", "generator", "ord", "m", "w"],
                &rows,
            ));
            writeln!(s, "sequence: {}", tuple(&report.sequence())).unwrap();
            match report.k_hit {
                Some(k) => writeln!(s, "reaches r = {} at k = {k}", report.r).unwrap(),
                None => writeln!(s, "r = {} not reached", report.r).unwrap(),
            }
            if !report.decreases.is_empty() {
                writeln!(s, "decreases at k = {:?}", report.decreases).unwrap();
            }
            s
        }
    }
}

/// One line per published sequence: expected against computed.
pub fn sequence_summary(rows: &[(u64, u64, Vec<u64>, Vec<u64>)], format: Format) -> String {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Row<'a> {
                p: u64,
                n: u64,
                expected: &'a [u64],
                computed: &'a [u64],
            }
            let v: Vec<Row> = rows
                .iter()
                .map(|(p, n, a, b)| Row {
                    p: *p,
                    n: *n,
                    expected: a,
                    computed: b,
                })
                .collect();
            json(&v)
        }
        _ => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|(p, n, a, b)| {
                    vec![
                        n.to_string(),
                        p.to_string(),
                        tuple(a),
                        tuple(b),
                        if a == b { "ok" } else { "MISMATCH" }.to_string(),
                    ]
                })
                .collect();
            aligned(&["n", "p", "expected", "computed", ""], &body)
        }
    }
}

pub fn exceptions(set: &ExceptionSet, format: Format) -> String {
    match format {
        Format::Json => json(set),
        Format::Csv => {
            let rows: Vec<Vec<String>> = set
                .entries
                .iter()
                .map(|x| {
                    vec![
                        set.n.to_string(),
                        x.p.to_string(),
                        x.k.to_string(),
                        x.m.to_string(),
                        x.q.to_string(),
                    ]
                })
                .collect();
            csv(&["n", "p", "k", "m", "q"], &rows)
        }
        Format::Text => {
            let mut s = String::new();
            writeln!(
                s,
                "n = {}, threshold n/(n - phi(n)) = {}",
                set.n, set.threshold
            )
            .unwrap();
            writeln!(
                s,
                "candidate denominators: {}, prime powers tested: {}",
                set.candidate_pool.len(),
                set.prime_powers_tested
            )
            .unwrap();
            if !matches!(set.n, 5 | 7) && !set.entries.is_empty() {
                writeln!(
                    s,
                    "entries: candidates, verified members (no completeness certificate)"
                )
                .unwrap();
            }
            if set.complete() {
                writeln!(s, "all denominators fully factored").unwrap();
            } else {
                writeln!(s, "unfactored denominators: {}", set.unresolved.join(", ")).unwrap();
            }
            let rows: Vec<Vec<String>> = set
                .entries
                .iter()
                .map(|x| {
                    vec![
                        x.p.to_string(),
                        x.k.to_string(),
                        x.m.to_string(),
                        x.q.to_string(),
                    ]
                })
                .collect();
            s.push_str(&aligned(&["p", "k", "m", "q"], &rows));
            s
        }
    }
}

/// The finite lists of large-`m` pairs with the search engine's values.
pub fn exceptional_cases(computed: &[u64], format: Format) -> String {
    let pairs = exceptional_pairs();
    let rows: Vec<Vec<String>> = pairs
        .iter()
        .zip(computed)
        .map(|(&(tag, e, q, m), &c)| {
            vec![
                tag.to_string(),
                e.to_string(),
                q.to_string(),
                m.to_string(),
                c.to_string(),
            ]
        })
        .collect();
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                case: CaseTag,
                e: u64,
                q: u64,
                m_listed: u64,
                m_computed: u64,
            }
            let v: Vec<Row> = pairs
                .iter()
                .zip(computed)
                .map(|(&(case, e, q, m), &c)| Row {
                    case,
                    e,
                    q,
                    m_listed: m,
                    m_computed: c,
                })
                .collect();
            json(&v)
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = rows.into_iter().map(|r| r[1..].to_vec()).collect();
            csv(&["e", "q", "m_listed", "m_computed"], &rows)
        }
        Format::Text => aligned(&["case", "e", "q", "m listed", "m computed"], &rows),
    }
}

pub fn report(r: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => json(r),
        Format::Csv => {
            let rows: Vec<Vec<String>> = r
                .violations
                .iter()
                .map(|v| {
                    [v.q, v.e, v.expected, v.actual]
                        .iter()
                        .map(u64::to_string)
                        .collect()
                })
                .collect();
            csv(&["q", "e", "expected", "actual"], &rows)
        }
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "claim       {}", r.claim_id).unwrap();
            writeln!(s, "domain      {}", r.domain).unwrap();
            writeln!(s, "checks      {}", r.checks).unwrap();
            writeln!(s, "violations  {}", r.violations.len()).unwrap();
            writeln!(s, "elapsed     {:.3} s", r.elapsed_ms / 1e3).unwrap();
            if let Some(eq) = &r.equality_cases {
                writeln!(s, "equality    {} pairs", eq.len()).unwrap();
            }
            for (k, v) in &r.stats {
                writeln!(s, "  {k} = {v}").unwrap();
            }
            for v in r.violations.iter().take(20) {
                writeln!(
                    s,
                    "  q = {}, e = {}: expected {}, got {} {}",
                    v.q, v.e, v.expected, v.actual, v.detail
                )
                .unwrap();
            }
            if r.violations.len() > 20 {
                writeln!(s, "  … {} more", r.violations.len() - 20).unwrap();
            }
            writeln!(
                s,
                "status      {}",
                if r.verified() { "verified" } else { "VIOLATED" }
            )
            .unwrap();
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_text() {
        assert_eq!(witness_sum(4, &[0, 1, 2]), "4^0 + 4^1 + 4^2");
        assert_eq!(witness_sum(1, &[0; 9]), "9*1^0");
        assert_eq!(witness_sum(3, &[0, 0, 2]), "2*3^0 + 3^2");
    }

    #[test]
    fn alignment() {
        let t = aligned(&["a", "bb"], &[vec!["100".into(), "2".into()]]);
        assert_eq!(t, "  a  bb\n100   2\n");
    }

    #[test]
    fn closed_form_labels() {
        let f = closed_forms(&PowerSumInstance::new(1, 9).unwrap());
        assert_eq!(f, vec!["q ≡ 1 (mod e): m = e"]);
        let f = closed_forms(&PowerSumInstance::new(9, 26).unwrap());
        assert!(f.iter().any(|s| s.contains("large case (x)")));
        let f = closed_forms(&PowerSumInstance::new(3, 16).unwrap());
        assert!(f[0].starts_with("e = 2^4"));
    }
}
