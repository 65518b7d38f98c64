use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use scdkit::constructions::{
    collapse, enumerate_matchings, expand, extend_dimension, generate, middle_graph, repair, shift,
};
use scdkit::data_io::{builtin_document, render_pictorial, BuiltinTableId, ScdDocument};
use scdkit::scd::necessary_conditions;
use scdkit::search::{enumerate_scds, exists_nontaut_scd, find_scd, SearchConfig, StopReason};
use scdkit::{build_hypercube, validate_scd, ChainProduct, Scd};

#[derive(Parser)]
#[command(name = "scdkit", version, about = "Symmetric chain decompositions of Q_k x n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a document is an SCD of its host.
    Validate {
        /// Input document; `-` or nothing reads standard input.
        file: Option<PathBuf>,
        /// Also fail when any chain is taut.
        #[arg(long)]
        require_nontaut: bool,
    },
    /// Print the packet grid of Q_k x n.
    Show {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Emit a builtin table (P53, P54 or P55).
    Tables {
        #[arg(long)]
        id: BuiltinTableId,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a taut-free SCD of P(k, n) for k >= 5, n >= 3.
    Generate {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Move an SCD of P(k, n) to P(k, m); both lengths must exceed k.
    Shift {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        to: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Map an SCD of P(k, k+1) down to P(k, k).
    Collapse {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lift an SCD of P(k, k) to P(k, k+1) using matching I of its middle graph.
    Expand {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        matching: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Remove a run (min,0) .. (min,n-1) hidden in the maximal chain.
    Repair {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lift a taut-free SCD of P(k, n) to P(k+J, n).
    Lift {
        #[arg(long)]
        file: PathBuf,
        #[arg(long = "with-hypercube")]
        with_hypercube: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive search over SCDs of P(k, n).
    Search {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        forbid_taut: bool,
        /// Answer only whether a taut-free SCD exists.
        #[arg(long)]
        exists: bool,
        #[arg(long)]
        limit: Option<usize>,
        /// Node budget.
        #[arg(long, env = "SCDKIT_NODE_BUDGET")]
        budget: Option<u64>,
        /// Wall-clock budget in seconds.
        #[arg(long)]
        seconds: Option<f64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Prune by coordinate permutations; only with --limit 1 or --exists.
        #[arg(long)]
        symmetry: bool,
        /// Print found decompositions, not just the summary.
        #[arg(long)]
        print: bool,
    },
    /// Necessary conditions on Q_k for taut-free SCDs of Q_k x n.
    Check {
        #[arg(long)]
        k: usize,
    },
}

enum Status {
    Ok,
    Failed,
    Inconclusive,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Ok(Status::Inconclusive) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn read_input(path: Option<&Path>) -> Result<String> {
    match path {
        None => read_stdin(),
        Some(p) if p == Path::new("-") => read_stdin(),
        Some(p) => fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display())),
    }
}

fn read_stdin() -> Result<String> {
    let mut text = String::new();
    io::stdin().read_to_string(&mut text).context("cannot read standard input")?;
    Ok(text)
}

fn load(path: &Path) -> Result<(ChainProduct, Scd, Vec<String>)> {
    let doc = ScdDocument::parse(&read_input(Some(path))?)?;
    let host = doc.host()?;
    let scd = doc.to_scd(&host)?;
    Ok((host, scd, doc.notes))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_scd(host: &ChainProduct, scd: &Scd, notes: Vec<String>, out: Option<&Path>) -> Result<()> {
    let doc = ScdDocument::from_scd(host, scd, notes)?;
    emit(&doc.to_text(), out)
}

fn run(command: Command) -> Result<Status> {
    match command {
        Command::Validate { file, require_nontaut } => {
            let doc = ScdDocument::parse(&read_input(file.as_deref())?)?;
            let host = doc.host()?;
            let report = validate_scd(&host, &doc.to_scd(&host)?);
            println!("{report}");
            let ok = if require_nontaut {
                report.is_valid_nontaut()
            } else {
                report.is_valid()
            };
            Ok(if ok { Status::Ok } else { Status::Failed })
        }
        Command::Show { k, n } => {
            if n == 0 {
                bail!("n must be at least 1");
            }
            print!("{}", render_pictorial(&build_hypercube(k), n));
            Ok(Status::Ok)
        }
        Command::Tables { id, out } => {
            emit(&builtin_document(id).to_text(), out.as_deref())?;
            Ok(Status::Ok)
        }
        Command::Generate { k, n, out } => {
            let built = generate(k, n)?;
            emit_scd(&built.host, &built.scd, built.notes, out.as_deref())?;
            Ok(Status::Ok)
        }
        Command::Shift { file, to, out } => {
            let (host, scd, _) = load(&file)?;
            let (target, moved) = shift(&host, &scd, to)?;
            let note = format!("shifted from P({}, {}) to P({}, {})", k_of(&host), host.n(), k_of(&host), to);
            emit_scd(&target, &moved, vec![note], out.as_deref())?;
            Ok(Status::Ok)
        }
        Command::Collapse { file, out } => {
            let (host, scd, _) = load(&file)?;
            let (target, down) = collapse(&host, &scd)?;
            emit_scd(&target, &down, vec![format!("collapsed from P({}, {})", k_of(&host), host.n())], out.as_deref())?;
            Ok(Status::Ok)
        }
        Command::Expand { file, matching, out } => {
            let (host, scd, _) = load(&file)?;
            let graph = middle_graph(&host, &scd)?;
            let matchings = enumerate_matchings(&graph);
            let f = matchings
                .get(matching)
                .ok_or_else(|| anyhow!("matching {matching} out of range: the middle graph has {} matchings", matchings.len()))?;
            let (target, up) = expand(&host, &scd, f)?;
            let note = format!(
                "expanded from P({}, {}) with matching {matching} (unmatched vertex {})",
                k_of(&host),
                host.n(),
                host.base().name(f.unmatched)
            );
            emit_scd(&target, &up, vec![note], out.as_deref())?;
            Ok(Status::Ok)
        }
        Command::Repair { file, out } => {
            let (host, scd, notes) = load(&file)?;
            let fixed = repair(&host, &scd)?;
            emit_scd(&host, &fixed, notes, out.as_deref())?;
            Ok(Status::Ok)
        }
        Command::Lift { file, with_hypercube, out } => {
            let (host, scd, _) = load(&file)?;
            let k = k_of(&host);
            let (target, lifted) = extend_dimension(&host, &scd, k + with_hypercube)?;
            let note = format!("lifted from P({k}, {}) by the doubling SCD of Q_{with_hypercube}", host.n());
            emit_scd(&target, &lifted, vec![note], out.as_deref())?;
            Ok(Status::Ok)
        }
        Command::Search {
            k,
            n,
            forbid_taut,
            exists,
            limit,
            budget,
            seconds,
            jobs,
            symmetry,
            print,
        } => {
            if n == 0 {
                bail!("n must be at least 1");
            }
            let config = SearchConfig {
                forbid_taut,
                limit,
                time_budget: seconds.map(Duration::from_secs_f64),
                node_budget: budget,
                use_symmetry: symmetry,
                deterministic_order: true,
                jobs: jobs.max(1),
            };
            if exists {
                let report = exists_nontaut_scd(k, n, &config)?;
                let basis = report.basis.map_or("budget exhausted".to_string(), |b| format!("{b:?}"));
                match report.exists {
                    Some(answer) => {
                        println!(
                            "taut-free SCD of P({k}, {n}): {} ({basis}{})",
                            if answer { "exists" } else { "does not exist" },
                            if report.proof_exhaustive { ", exhaustive" } else { "" }
                        );
                        if print {
                            if let Some(w) = &report.witness {
                                emit_scd(&ChainProduct::cuboid(k, n)?, w, Vec::new(), None)?;
                            }
                        }
                        Ok(Status::Ok)
                    }
                    None => {
                        println!("inconclusive: {basis} after {} nodes", report.nodes_visited);
                        Ok(Status::Inconclusive)
                    }
                }
            } else {
                let host = ChainProduct::cuboid(k, n)?;
                let outcome = if symmetry {
                    if limit.is_some_and(|l| l != 1) {
                        bail!("--symmetry answers existence only; use it with --limit 1 or --exists");
                    }
                    find_scd(&host, &config)
                } else {
                    enumerate_scds(&host, &config)?
                };
                if print {
                    for scd in &outcome.found {
                        emit_scd(&host, scd, Vec::new(), None)?;
                        println!();
                    }
                }
                let what = if forbid_taut { "taut-free SCDs" } else { "SCDs" };
                let found = outcome.found.len();
                match outcome.stop {
                    StopReason::Exhausted => {
                        println!("exhausted: {found} {what} of P({k}, {n}) ({} nodes)", outcome.nodes_visited);
                        Ok(Status::Ok)
                    }
                    StopReason::LimitReached => {
                        println!("limit reached: {found} {what} of P({k}, {n}) ({} nodes)", outcome.nodes_visited);
                        Ok(Status::Ok)
                    }
                    StopReason::NodeBudget | StopReason::TimeBudget => {
                        println!(
                            "inconclusive: {found} {what} of P({k}, {n}) before the {} ran out ({} nodes)",
                            if outcome.stop == StopReason::NodeBudget { "node budget" } else { "time budget" },
                            outcome.nodes_visited
                        );
                        Ok(Status::Inconclusive)
                    }
                }
            }
        }
        Command::Check { k } => {
            let q = build_hypercube(k);
            let sizes = q.rank_sizes();
            let cond = necessary_conditions(&q, true);
            println!("Q_{k} rank sizes: {sizes:?}");
            println!("rank-symmetric: {}", cond.rank_symmetric);
            let middle = cond.middle_rank_ok.unwrap_or(true);
            let rk = q.height();
            if rk.is_multiple_of(2) {
                let below: usize = sizes[..rk / 2].iter().sum();
                println!("middle rank {} <= sum of lower ranks {below}: {middle}", sizes[rk / 2]);
            } else {
                let lo = rk / 2;
                let below: usize = sizes[..lo].iter().sum();
                println!("middle ranks {} <= twice the lower ranks {}: {middle}", sizes[lo], 2 * below);
            }
            if cond.hold() {
                println!("necessary conditions hold for taut-free SCDs of Q_{k} x n");
            } else {
                println!("no SCD of Q_{k} x n is taut-free, for any n");
            }
            Ok(Status::Ok)
        }
    }
}

fn k_of(host: &ChainProduct) -> usize {
    host.cube_dim().expect("documents describe cuboids")
}
