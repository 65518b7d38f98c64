//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use scdkit::constructions::{
    collapse, enumerate_matchings, expand, generate, grid_scd, hypercube_scd, middle_graph, repair, shift,
};
use scdkit::data_io::{builtin_table, render_pictorial, serialize_scd, BuiltinTableId};
use scdkit::scd::{middle_block_is_vertical, validate_decomposition};
use scdkit::search::{count_scds, enumerate_scds, exists_nontaut_scd, Basis, SearchConfig};
use scdkit::{build_cuboid, build_hypercube, validate_scd, ChainProduct, Scd};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Size of the middle rank of `Q_k × n`, counted from the rank generating
/// function directly.
fn middle_rank_size(k: usize, n: usize) -> usize {
    let mid = (k + n - 1) / 2;
    (0..n).filter(|&c| c <= mid).map(|c| binomial(k, mid - c)).sum()
}

fn all_scds(host: &ChainProduct) -> Result<Vec<Scd>, String> {
    let out = enumerate_scds(host, &SearchConfig::default()).map_err(|e| e.to_string())?;
    ensure!(out.exhausted, "enumeration of {} elements did not finish", host.len());
    Ok(out.found)
}

fn table_fidelity() -> Outcome {
    let expected = [(BuiltinTableId::P53, 25, 96), (BuiltinTableId::P54, 30, 128), (BuiltinTableId::P55, 31, 160)];
    for (id, chains, elements) in expected {
        let host = id.host();
        let scd = builtin_table(id);
        let report = validate_scd(&host, &scd);
        ensure!(report.is_valid(), "{id}: {report}");
        ensure!(report.taut_count() == 0, "{id}: {} taut chains", report.taut_count());
        ensure!(scd.len() == chains, "{id}: {} chains, expected {chains}", scd.len());
        let covered: usize = scd.chains().iter().map(|c| c.len()).sum();
        ensure!(covered == elements && host.len() == elements, "{id}: covers {covered} of {}", host.len());
    }
    Ok("25/30/31 chains over 96/128/160 elements, no taut chains".into())
}

fn negative_side() -> Outcome {
    let config = SearchConfig::default();
    let mut nodes = 0;
    for (k, n) in [(1, 3), (1, 4), (2, 3), (2, 4)] {
        let r = exists_nontaut_scd(k, n, &config).map_err(|e| e.to_string())?;
        ensure!(r.exists == Some(false), "({k},{n}): exists = {:?}", r.exists);
        ensure!(r.proof_exhaustive, "({k},{n}): not settled exhaustively");
        nodes += r.nodes_visited;
    }
    for k in [3, 4] {
        for n in 3..=64 {
            let r = exists_nontaut_scd(k, n, &config).map_err(|e| e.to_string())?;
            ensure!(r.exists == Some(false), "({k},{n}): exists = {:?}", r.exists);
            ensure!(r.basis == Some(Basis::NecessaryConditions), "({k},{n}): basis {:?}", r.basis);
        }
    }
    for k in 0..=16 {
        for n in 1..=2 {
            let r = exists_nontaut_scd(k, n, &config).map_err(|e| e.to_string())?;
            ensure!(r.exists == Some(false), "({k},{n}): exists = {:?}", r.exists);
            ensure!(r.basis == Some(Basis::ShortChain), "({k},{n}): basis {:?}", r.basis);
        }
    }
    Ok(format!("4 exhaustive refutations ({nodes} nodes); k=3,4 and n<=2 rejected without search"))
}

fn generation_sweep() -> Outcome {
    let mut count = 0;
    for k in 5..=8 {
        for n in 3..=12 {
            let built = generate(k, n).map_err(|e| format!("({k},{n}): {e}"))?;
            ensure!(built.host.cube_dim() == Some(k) && built.host.n() == n, "({k},{n}): wrong host");
            let report = validate_scd(&built.host, &built.scd);
            ensure!(report.is_valid_nontaut(), "({k},{n}): {report}");
            let expected = middle_rank_size(k, n);
            ensure!(built.scd.len() == expected, "({k},{n}): {} chains, expected {expected}", built.scd.len());
            count += 1;
        }
    }
    Ok(format!("{count} cuboids generated and validated"))
}

fn shift_bijection() -> Outcome {
    let host = build_cuboid(2, 3).map_err(|e| e.to_string())?;
    let scds = all_scds(&host)?;
    ensure!(!scds.is_empty(), "no SCDs enumerated");
    for scd in &scds {
        let taut = validate_scd(&host, scd).taut_count();
        let text = serialize_scd(&host, scd, Vec::new()).map_err(|e| e.to_string())?;
        for m in 4..=8 {
            let (up_host, up) = shift(&host, scd, m).map_err(|e| e.to_string())?;
            let report = validate_scd(&up_host, &up);
            ensure!(report.is_valid(), "shift to {m}: {report}");
            ensure!(report.taut_count() == taut, "shift to {m}: taut count {} != {taut}", report.taut_count());
            let (back_host, back) = shift(&up_host, &up, 3).map_err(|e| e.to_string())?;
            let back_text = serialize_scd(&back_host, &back, Vec::new()).map_err(|e| e.to_string())?;
            ensure!(back_text == text, "shift 3 -> {m} -> 3 changed the decomposition");
        }
    }
    Ok(format!("{} SCDs of Q_2 x 3 shifted to m = 4..8 and back", scds.len()))
}

fn surjection() -> Outcome {
    let mut summary = Vec::new();
    for (k, rk) in [(1, 1), (2, 2)] {
        let upper = build_cuboid(k, rk + 1).map_err(|e| e.to_string())?;
        let lower = build_cuboid(k, rk).map_err(|e| e.to_string())?;
        let up_count = count_scds(&upper).map_err(|e| e.to_string())?;
        let low_count = count_scds(&lower).map_err(|e| e.to_string())?;
        ensure!(
            up_count == (rk as u64 + 1) * low_count,
            "Q_{k}: {up_count} != {} * {low_count}",
            rk + 1
        );

        let lowers = all_scds(&lower)?;
        let mut fibers = vec![0usize; lowers.len()];
        for scd in all_scds(&upper)? {
            let (_, down) = collapse(&upper, &scd).map_err(|e| e.to_string())?;
            let i = lowers.iter().position(|s| *s == down).ok_or("collapse left the enumerated set")?;
            fibers[i] += 1;
        }
        ensure!(fibers.iter().all(|&f| f == rk + 1), "Q_{k}: fiber sizes {fibers:?}");

        for scd in &lowers {
            let matchings = enumerate_matchings(&middle_graph(&lower, scd).map_err(|e| e.to_string())?);
            ensure!(matchings.len() == rk + 1, "Q_{k}: {} matchings", matchings.len());
            for f in &matchings {
                let (up_host, up) = expand(&lower, scd, f).map_err(|e| e.to_string())?;
                let (_, down) = collapse(&up_host, &up).map_err(|e| e.to_string())?;
                ensure!(down == *scd, "Q_{k}: collapse after expand is not the identity");
            }
        }
        summary.push(format!("Q_{k}: {up_count} = {} * {low_count}", rk + 1));
    }
    Ok(summary.join(", "))
}

fn repair_property() -> Outcome {
    let id = BuiltinTableId::P55;
    let host = id.host();
    let table = builtin_table(id);
    let matchings = enumerate_matchings(&middle_graph(&host, &table).map_err(|e| e.to_string())?);
    ensure!(matchings.len() == 6, "{} matchings, expected 6", matchings.len());
    for (i, f) in matchings.iter().enumerate() {
        let (up_host, up) = expand(&host, &table, f).map_err(|e| e.to_string())?;
        let fixed = repair(&up_host, &up).map_err(|e| format!("matching {i}: {e}"))?;
        ensure!(up_host.n() == 6 && up_host.cube_dim() == Some(5), "matching {i}: wrong host");
        let report = validate_scd(&up_host, &fixed);
        ensure!(report.is_valid_nontaut(), "matching {i}: {report}");
        let (low_host, low) = collapse(&up_host, &fixed).map_err(|e| e.to_string())?;
        let low_report = validate_scd(&low_host, &low);
        ensure!(low_report.taut_count() == 0, "matching {i}: collapse has {low_report}");
    }
    Ok("6 repaired lifts of the P(5,5) table".into())
}

const Q4_BY_6: &str = "\
&&&&1
&&&4&1
&&6&4&1
&4&6&4&1
1&4&6&4&1
1&4&6&4&1
1&4&6&4&
1&4&6&&
1&4&&&
1&&&&";

fn pictorial_q4_by_6() -> Outcome {
    let expected: Vec<Vec<String>> = Q4_BY_6
        .lines()
        .map(|row| row.split('&').map(|c| c.trim().to_string()).collect())
        .collect();
    let text = render_pictorial(&build_hypercube(4), 6);
    let width = text.split_whitespace().map(str::len).max().unwrap_or(1);
    let rendered: Vec<Vec<String>> = text
        .lines()
        .map(|line| {
            (0..5)
                .map(|x| {
                    let start = x * (width + 1);
                    line.get(start..(start + width).min(line.len())).unwrap_or("").trim().to_string()
                })
                .collect()
        })
        .collect();
    ensure!(rendered.len() == expected.len(), "{} rows, expected {}", rendered.len(), expected.len());
    for (y, (got, want)) in rendered.iter().zip(&expected).enumerate() {
        ensure!(got == want, "row {y} from the top: {got:?} != {want:?}");
    }
    Ok("10 rows x 5 columns match".into())
}

fn structural_invariants() -> Outcome {
    for a in 1..=12 {
        for b in 1..=12 {
            let (host, scd) = grid_scd(a, b).map_err(|e| e.to_string())?;
            ensure!(validate_decomposition(&host, &scd).is_valid(), "grid {a}x{b} invalid");
            ensure!(scd.len() == a.min(b), "grid {a}x{b}: {} chains", scd.len());
        }
    }
    for k in 0..=10 {
        let scd = hypercube_scd(k);
        ensure!(validate_decomposition(&build_hypercube(k), &scd).is_valid(), "Q_{k} invalid");
        ensure!(scd.len() == binomial(k, k / 2), "Q_{k}: {} chains", scd.len());
    }
    let mut checked = 0;
    for k in 5..=8 {
        for n in k + 1..=12 {
            let built = generate(k, n).map_err(|e| e.to_string())?;
            ensure!(middle_block_is_vertical(&built.host, &built.scd), "P({k},{n}) middle block not vertical");
            checked += 1;
        }
    }
    Ok(format!("grids to 12x12, Q_0..Q_10, {checked} generated SCDs vertical in the middle block"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("table fidelity", Duration::from_secs(1), table_fidelity),
        ("negative side at desk scale", Duration::from_secs(120), negative_side),
        ("generation sweep k=5..8, n=3..12", Duration::from_secs(30), generation_sweep),
        ("shift bijection on Q_2 x 3", Duration::from_secs(60), shift_bijection),
        ("collapse surjection and fibers", Duration::from_secs(300), surjection),
        ("repair of P(5,6) lifts", Duration::from_secs(5), repair_property),
        ("pictorial grid of Q_4 x 6", Duration::from_secs(1), pictorial_q4_by_6),
        ("structural invariants", Duration::from_secs(30), structural_invariants),
    ];
    let mut failures = 0;
    for (i, (name, bound, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > bound => Err(format!("{detail}, but took {elapsed:.2?} (bound {bound:?})")),
            other => other,
        };
        match result {
            Ok(detail) => println!("[PASS] {}. {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(why) => {
                failures += 1;
                println!("[FAIL] {}. {name}: {why} ({elapsed:.2?})", i + 1);
            }
        }
    }
    println!("{} of 8 criteria passed", 8 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
