use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use msum::campaign::{Campaign, ClaimParams, ResultStore, CLAIMS};
use msum::classification::exceptional_pairs;
use msum::cyclotomic::corollary13_exceptions;
use msum::prime_power::{
    order_table, tower_sequence, COMPOSITE_ORDER_SEQUENCES, PRIME_ORDER_SEQUENCES,
};
use msum::render::{self, Format};
use msum::{m, Error, PowerSumInstance};

#[derive(Parser)]
#[command(
    name = "msum",
    version,
    about = "Minimal vanishing sums of powers modulo e"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format: text, json or csv.
    #[arg(long, global = true, default_value = "text")]
    format: Format,
    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Result store file, reused across runs.
    #[arg(long, global = true, env = "MSUM_STORE")]
    store: Option<PathBuf>,
    #[arg(long, global = true)]
    k_cap: Option<u32>,
    #[arg(long, global = true)]
    e_max: Option<u64>,
    #[arg(long, global = true)]
    p_max: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// m(q, e) with a witness and the closed forms that apply.
    M { q: u64, e: u64 },
    /// Grid of m values, or a prime-power table with --order.
    Table {
        #[arg(long, default_value_t = 1)]
        e_min: u64,
        #[arg(long, default_value_t = 1)]
        q_min: u64,
        #[arg(long)]
        q_max: Option<u64>,
        /// Subgroup order n: rows (p, k) for primes p ≡ 1 mod n.
        #[arg(long, conflicts_with = "exceptional")]
        order: Option<u64>,
        /// The finite lists of large-m pairs, recomputed.
        #[arg(long)]
        exceptional: bool,
        /// Write to this file instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run a verification campaign and write its report.
    Verify {
        claim: String,
        #[arg(long)]
        e_min: Option<u64>,
        #[arg(long)]
        q_max: Option<u64>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        r: Option<u64>,
        /// Report path (default ./reports/<claim>.json).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Tower sequence m(Q_k, p^k) for a subgroup of order n.
    Sequence {
        #[arg(required_unless_present = "published")]
        p: Option<u64>,
        #[arg(required_unless_present = "published")]
        n: Option<u64>,
        k_max: Option<u32>,
        /// Every published tower sequence against its computed value.
        #[arg(long, conflicts_with_all = ["p", "n", "k_max"])]
        published: bool,
    },
    /// Prime powers with m below the cyclotomic threshold for order n.
    Exceptions { n: u64 },
    /// List claim ids.
    Claims,
}

enum Outcome {
    Ok,
    Violations,
    CapExceeded,
}

fn campaign(g: &Global) -> msum::Result<Campaign> {
    let mut c = Campaign::new();
    if let Some(j) = g.jobs {
        c = c.with_jobs(j);
    }
    if let Some(path) = &g.store {
        c = c.with_store(ResultStore::open(path)?);
    }
    Ok(c)
}

fn emit(text: &str, out: Option<&PathBuf>) -> msum::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Error::Store(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> msum::Result<Outcome> {
    let g = &cli.global;
    match cli.command {
        Command::M { q, e } => {
            let inst = PowerSumInstance::new(q, e)?;
            let r = m(q, e)?;
            print!("{}", render::m_result(&inst, &r, g.format));
        }
        Command::Table {
            e_min,
            q_min,
            q_max,
            order,
            exceptional,
            out,
        } => {
            let text = if let Some(n) = order {
                let rows = order_table(n, g.p_max.unwrap_or(1000), g.k_cap.unwrap_or(8))?;
                render::table_rows(&rows, g.format)
            } else if exceptional {
                let mut computed = Vec::new();
                for (_, e, q, _) in exceptional_pairs() {
                    computed.push(m(q, e)?.value);
                }
                render::exceptional_cases(&computed, g.format)
            } else {
                let mut c = campaign(g)?;
                let records = c.pairs(e_min, g.e_max.unwrap_or(12))?;
                let records: Vec<_> = records
                    .into_iter()
                    .filter(|r| r.q >= q_min && q_max.is_none_or(|hi| r.q <= hi))
                    .collect();
                render::grid(&records, g.format)
            };
            emit(&text, out.as_ref())?;
        }
        Command::Verify {
            claim,
            e_min,
            q_max,
            n,
            r,
            report,
        } => {
            let params = ClaimParams {
                e_min,
                e_max: g.e_max,
                p_max: g.p_max,
                q_max,
                k_cap: g.k_cap,
                r,
                n,
                ..Default::default()
            };
            let mut c = campaign(g)?;
            let rep = c.run(&claim, &params)?;
            let path =
                report.unwrap_or_else(|| PathBuf::from("reports").join(format!("{claim}.json")));
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)
                    .map_err(|e| Error::Store(format!("{}: {e}", dir.display())))?;
            }
            emit(&render::report(&rep, Format::Json), Some(&path))?;
            print!("{}", render::report(&rep, g.format));
            return Ok(if rep.verified() {
                Outcome::Ok
            } else {
                Outcome::Violations
            });
        }
        Command::Sequence {
            published: true, ..
        } => {
            let mut rows = Vec::new();
            for &(n, primes, seq) in PRIME_ORDER_SEQUENCES {
                for &p in primes {
                    rows.push((p, n, seq.to_vec()));
                }
            }
            rows.extend(
                COMPOSITE_ORDER_SEQUENCES
                    .iter()
                    .map(|&(p, n, s)| (p, n, s.to_vec())),
            );
            let mut table = Vec::new();
            for (p, n, want) in rows {
                let got = tower_sequence(p, n, want.len() as u32)?.sequence();
                table.push((p, n, want, got));
            }
            let all_match = table.iter().all(|(_, _, a, b)| a == b);
            print!("{}", render::sequence_summary(&table, g.format));
            return Ok(if all_match {
                Outcome::Ok
            } else {
                Outcome::Violations
            });
        }
        Command::Sequence { p, n, k_max, .. } => {
            let (p, n) = (p.expect("required"), n.expect("required"));
            let report = tower_sequence(p, n, k_max.or(g.k_cap).unwrap_or(6))?;
            print!("{}", render::tower(&report, g.format));
            if report.k_hit.is_none() {
                return Ok(Outcome::CapExceeded);
            }
        }
        Command::Exceptions { n } => {
            let set = corollary13_exceptions(n, g.k_cap.unwrap_or(8))?;
            print!("{}", render::exceptions(&set, g.format));
        }
        Command::Claims => {
            for (id, what) in CLAIMS {
                println!("{id:<12} {what}");
            }
        }
    }
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violations) => ExitCode::from(1),
        Ok(Outcome::CapExceeded) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::NotFoundWithinCap { .. } | Error::SearchTooLarge { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
