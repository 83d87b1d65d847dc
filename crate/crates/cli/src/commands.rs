use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use stormer_core::infra::{compact_rep_build, regulator_bsgs, DEFAULT_GIANT_STEP_BUDGET};
use stormer_core::quadfield::{
    fundamental_solution, log_unit, pell_power_exact, pell_power_mod, tower_index,
    DEFAULT_EXACT_DIGIT_LIMIT,
};
use stormer_core::real::MANTISSA_BITS;
use stormer_core::sieve::{brute_force_oracle, run_search, scan_d, Mode};
use stormer_core::smooth::{gen_basis, smooth_split, solution_exponents, squarefree_part};
use stormer_core::{Error, SearchConfig, SmoothBasis, SolutionRecord, SolutionSet};

use crate::report::render_report;
use crate::results::{Claim, FileRecord, ResultFile, Source};
use crate::{Command, PellArgs, SearchArgs, EXIT_FAILURE, EXIT_INCOMPLETE, EXIT_OK, EXIT_USAGE};

/// Refusal to work on a partial result.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct IncompleteRefusal(pub String);

/// Bad flags or input that no rerun will fix.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

pub fn exit_code(e: &anyhow::Error) -> i32 {
    if e.is::<IncompleteRefusal>() {
        return EXIT_INCOMPLETE;
    }
    if e.is::<UsageError>() {
        return EXIT_USAGE;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::Incomplete(_)) => EXIT_INCOMPLETE,
        Some(
            Error::Config(_)
            | Error::InvalidBound(_)
            | Error::InvalidModulus(_)
            | Error::CheckpointMismatch(_)
            | Error::CheckpointCorrupt(_),
        ) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

pub fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    match cmd {
        Command::Search(a) => cmd_search(&a, out, err),
        Command::Verify { file } => cmd_verify(&read_results(&file)?, out),
        Command::Report { file } => {
            out.write_all(cmd_report(&read_results(&file)?)?.as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Oracle {
            k,
            limit,
            out: path,
        } => {
            let file = cmd_oracle(k, limit)?;
            emit(&file, path.as_deref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Pell(a) => cmd_pell(&a, out),
    }
}

fn read_results(path: &Path) -> anyhow::Result<ResultFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    ResultFile::parse(&text).map_err(|e| anyhow!(UsageError(format!("{}: {e}", path.display()))))
}

fn emit(file: &ResultFile, path: Option<&Path>, out: &mut dyn Write) -> anyhow::Result<()> {
    let text = file.to_text();
    match path {
        Some(p) => {
            let tmp = p.with_extension("tmp");
            fs::write(&tmp, &text).with_context(|| format!("writing {}", tmp.display()))?;
            fs::rename(&tmp, p)?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn parse_mode(s: &str) -> anyhow::Result<Mode> {
    Ok(s.parse::<Mode>()?)
}

pub fn cmd_search(a: &SearchArgs, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    let mut cfg = SearchConfig::new(a.k);
    cfg.worker_count = a.jobs;
    cfg.checkpoint_path = a.checkpoint.clone();
    cfg.resume = a.resume;
    cfg.restart = a.restart;
    cfg.mode = parse_mode(&a.mode)?;
    cfg.approx_tol = a.tolerance;
    cfg.chunk_size = a.chunk_size;
    cfg.stop_after_chunks = a.stop_after_chunks;
    if let Some(b) = a.budget {
        cfg.giant_step_budget = b;
    }
    let o = run_search(&cfg)?;
    let s = &o.stats;
    writeln!(
        err,
        "chunks {}/{}, moduli {}, log tests {}, exact units {}, compact units {}",
        o.chunks_done, o.chunks_total, s.moduli, s.log_tests, s.exact_units, s.compact_units
    )?;
    writeln!(
        err,
        "largest accepted |gap| {:.3e}, smallest rejected gap {:.4}, convergent checks {}",
        s.max_accepted, s.min_rejected, s.convergent_checks
    )?;
    if o.chunks_done < o.chunks_total {
        writeln!(err, "search interrupted; resume with --resume")?;
        return Ok(EXIT_INCOMPLETE);
    }
    let file = ResultFile {
        source: Source::Search,
        bound: a.k,
        basis: o.set.basis.primes().to_vec(),
        complete: o.set.complete,
        limit: None,
        skipped: o.skipped.clone(),
        records: o.set.records.iter().map(FileRecord::from).collect(),
    };
    emit(&file, a.out.as_deref(), out)?;
    writeln!(err, "{} solutions", file.records.len())?;
    if !o.skipped.is_empty() {
        writeln!(
            err,
            "{} moduli skipped; the result is incomplete",
            o.skipped.len()
        )?;
        return Ok(EXIT_INCOMPLETE);
    }
    Ok(EXIT_OK)
}

/// Basis of a result file, which must be the primes up to its bound.
fn file_basis(file: &ResultFile) -> anyhow::Result<SmoothBasis> {
    let basis = gen_basis(file.bound)?;
    if !file.basis.is_empty() && file.basis != basis.primes() {
        return Err(anyhow!(UsageError(format!(
            "basis {:?} is not the primes up to {}",
            file.basis, file.bound
        ))));
    }
    Ok(basis)
}

/// Full record for a solution `x`, recovering `d` and the tower index.
pub fn record_for(x: &BigInt, basis: &SmoothBasis) -> Result<SolutionRecord, String> {
    if x < &BigInt::from(2) {
        return Err("x must be at least 2".into());
    }
    let exps = solution_exponents(x, basis).ok_or_else(|| {
        let cof = smooth_split(&(x * x - 1u32), basis)
            .map(|s| s.cofactor)
            .unwrap_or_default();
        format!("x²-1 has the factor {cof} outside the basis")
    })?;
    let d = squarefree_part(&exps, basis);
    let y2 = (x * x - 1u32) / &d;
    let y = y2.sqrt();
    let n = tower_index(x, &y, &d)
        .map_err(|e| e.to_string())?
        .ok_or_else(|| format!("x is not in the tower of d={d}"))?;
    Ok(SolutionRecord {
        x: x.clone(),
        d,
        n: u32::try_from(n).map_err(|_| "tower index overflows")?,
        exponents: exps,
    })
}

fn check_record(r: &FileRecord, basis: &SmoothBasis, limit: Option<u64>) -> Result<(), String> {
    let full = record_for(&r.x, basis)?;
    if let Some(l) = limit {
        if r.x > BigInt::from(l) {
            return Err(format!("x exceeds the file limit {l}"));
        }
    }
    if let Some(a) = &r.a {
        if a != &full.exponents {
            return Err(format!(
                "exponents {:?} differ from {:?}",
                a.0, full.exponents.0
            ));
        }
    }
    if let Some(d) = &r.d {
        if d != &full.d {
            return Err(format!("d={d} but the squarefree part is {}", full.d));
        }
    }
    if let Some(n) = r.n {
        if n != full.n {
            return Err(format!(
                "n={n} but x is power {} of the fundamental unit",
                full.n
            ));
        }
    }
    for c in &r.claims {
        match *c {
            Claim::Support(k) if k != full.exponents.support() => {
                return Err(format!("support is {}, not {k}", full.exponents.support()))
            }
            Claim::Sum(s) if s != full.exponents.sum() => {
                return Err(format!("exponent sum is {}, not {s}", full.exponents.sum()))
            }
            Claim::Valuation(p, e) => {
                let got = basis
                    .index_of(p)
                    .map(|i| full.exponents.0[i])
                    .ok_or_else(|| format!("{p} is not a basis prime"))?;
                if got != e {
                    return Err(format!("v{p} is {got}, not {e}"));
                }
            }
            _ => {}
        }
    }
    Ok(())
}

fn describe_claims(r: &FileRecord) -> String {
    let mut parts = Vec::new();
    if r.d.is_some() {
        parts.push("d".to_string());
    }
    if r.n.is_some() {
        parts.push("n".to_string());
    }
    if r.a.is_some() {
        parts.push("a".to_string());
    }
    for c in &r.claims {
        parts.push(match c {
            Claim::Support(k) => format!("support={k}"),
            Claim::Sum(s) => format!("sum={s}"),
            Claim::Valuation(p, e) => format!("v{p}={e}"),
        });
    }
    if parts.is_empty() {
        String::new()
    } else {
        format!(" ({})", parts.join(", "))
    }
}

/// Re-verify every record by trial division. Exit code 1 on any failure.
pub fn cmd_verify(file: &ResultFile, out: &mut dyn Write) -> anyhow::Result<i32> {
    let basis = file_basis(file)?;
    let mut failures = 0usize;
    for r in &file.records {
        match check_record(r, &basis, file.limit) {
            Ok(()) => writeln!(out, "pass x={}{}", r.x, describe_claims(r))?,
            Err(msg) => {
                failures += 1;
                writeln!(out, "FAIL x={}: {msg}", r.x)?;
            }
        }
    }
    writeln!(
        out,
        "{} records checked against the primes up to {}: {} passed, {} failed",
        file.records.len(),
        file.bound,
        file.records.len() - failures,
        failures
    )?;
    Ok(if failures == 0 { EXIT_OK } else { EXIT_FAILURE })
}

/// Solution set of a complete file, with any missing fields recovered.
pub fn solution_set(file: &ResultFile) -> anyhow::Result<SolutionSet> {
    if !file.complete {
        let mut msg = format!(
            "the {} file for K={} is not complete",
            match file.source {
                Source::Oracle => "oracle",
                Source::Search => "search",
                Source::Claims => "claims",
            },
            file.bound
        );
        if !file.skipped.is_empty() {
            msg += &format!("; {} moduli were skipped:", file.skipped.len());
            for s in file.skipped.iter().take(10) {
                msg += &format!("\n  d={}: {}", s.d, s.reason);
            }
        }
        bail!(IncompleteRefusal(msg));
    }
    let basis = file_basis(file)?;
    let records = file
        .records
        .iter()
        .map(|r| match r.to_record() {
            Some(full) => Ok(full),
            None => record_for(&r.x, &basis).map_err(|m| anyhow!("x={}: {m}", r.x)),
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(SolutionSet::new(records, basis, true)?)
}

pub fn cmd_report(file: &ResultFile) -> anyhow::Result<String> {
    let set = solution_set(file)?;
    Ok(render_report(&set)?)
}

pub fn cmd_oracle(k: u64, limit: u64) -> anyhow::Result<ResultFile> {
    let basis = gen_basis(k)?;
    let records = brute_force_oracle(limit, &basis)
        .into_iter()
        .map(|x| record_for(&BigInt::from(x), &basis).map(|r| FileRecord::from(&r)))
        .collect::<Result<Vec<_>, String>>()
        .map_err(|m| anyhow!(m))?;
    Ok(ResultFile {
        source: Source::Oracle,
        bound: k,
        basis: basis.primes().to_vec(),
        complete: false,
        limit: Some(limit),
        skipped: Vec::new(),
        records,
    })
}

/// Largest regulator for which the fundamental solution is printed in full.
const PRINT_DIGITS: f64 = 400.0;

pub fn cmd_pell(a: &PellArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let d = BigInt::from(a.d);
    let mode = parse_mode(&a.mode)?;
    let reg = regulator_bsgs(&d, DEFAULT_GIANT_STEP_BUDGET)?;
    let rstar = reg.value;
    writeln!(out, "d = {d}")?;
    writeln!(out, "R* = {}", rstar)?;
    writeln!(
        out,
        "norm of the fundamental unit: {}",
        if reg.norm_minus_one { "-1" } else { "+1" }
    )?;
    let digits = rstar.to_f64() / std::f64::consts::LN_10;
    let exact = rstar.to_f64() < 5e4 && mode != Mode::Compact;
    let fund = if exact {
        let s = fundamental_solution(&d)?;
        let check = (log_unit(&s, MANTISSA_BITS) - rstar).to_f64().abs();
        if check > 1e-6 {
            bail!("regulator {rstar} disagrees with the expanded unit");
        }
        if digits <= PRINT_DIGITS {
            writeln!(out, "x1 = {}", s.x1)?;
            writeln!(out, "y1 = {}", s.y1)?;
        } else {
            writeln!(out, "x1 has {} digits", s.x1.to_string().len())?;
        }
        Some(s)
    } else {
        None
    };
    let rep = if fund.is_none() {
        let rep = compact_rep_build(&d, &reg)?;
        writeln!(
            out,
            "compact representation: {} parts, about {digits:.0} digits",
            rep.len()
        )?;
        Some(rep)
    } else {
        None
    };

    if let Some(n) = a.n {
        if n == 0 {
            bail!(UsageError("--n must be at least 1".into()));
        }
        match &a.modulus {
            Some(m) => {
                let m: BigInt = m
                    .parse()
                    .map_err(|_| anyhow!(UsageError(format!("bad modulus {m:?}"))))?;
                if !m.is_positive() || m.is_one() {
                    bail!(UsageError("the modulus must be at least 2".into()));
                }
                let (x1, y1) = match (&fund, &rep) {
                    (Some(s), _) => (s.x1.clone(), s.y1.clone()),
                    (None, Some(r)) => r.eval_mod(&m)?,
                    (None, None) => unreachable!(),
                };
                let (xn, yn) = pell_power_mod(&x1, &y1, n, &d, &m);
                writeln!(out, "x{n} mod {m} = {xn}")?;
                writeln!(out, "y{n} mod {m} = {yn}")?;
            }
            None => {
                let s = match (&fund, &rep) {
                    (Some(s), _) => s.clone(),
                    (None, Some(r)) => {
                        let (x1, y1) = r.eval_exact()?;
                        stormer_core::PellSolution {
                            d: d.clone(),
                            x1,
                            y1,
                        }
                    }
                    (None, None) => unreachable!(),
                };
                let (xn, yn) = pell_power_exact(&s, n, DEFAULT_EXACT_DIGIT_LIMIT)?;
                writeln!(out, "x{n} = {xn}")?;
                writeln!(out, "y{n} = {yn}")?;
            }
        }
    }

    if let Some(k) = a.k {
        let basis = gen_basis(k)?;
        if !smooth_split(&d, &basis)?.cofactor.is_one() {
            bail!(UsageError(format!("d={d} has a prime factor above {k}")));
        }
        let mut cfg = SearchConfig::new(k);
        cfg.mode = mode;
        let scan = scan_d(&d, &cfg, &basis)?;
        if let Some(s) = scan.skipped {
            bail!(IncompleteRefusal(format!("d={}: {}", s.d, s.reason)));
        }
        for r in &scan.records {
            writeln!(out, "n={} x={}", r.n, r.x)?;
        }
        let top = scan.records.iter().map(|r| r.n).max();
        match top {
            Some(n) => writeln!(
                out,
                "{} solutions under K={k}, largest at n={n}",
                scan.records.len()
            )?,
            None => writeln!(out, "no solutions under K={k}")?,
        }
    }
    Ok(EXIT_OK)
}
