//! The per-modulus scan and the exhaustive search over all squarefree
//! moduli composed of basis primes.

mod oracle;
mod search;

pub use oracle::brute_force_oracle;
pub use search::{run_search, SearchOutcome};

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::infra::{compact_rep_build, regulator_bsgs, CompactRep, DEFAULT_GIANT_STEP_BUDGET};
use crate::quadfield::{
    fundamental_solution, log_unit, pell_power_exact, pell_power_mod, Convergents, PellSolution,
    DEFAULT_EXACT_DIGIT_LIMIT,
};
use crate::real::{Real, MANTISSA_BITS};
use crate::smooth::{smooth_split, ExponentVector, SmoothBasis};

/// How the fundamental unit of each modulus is obtained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    /// Exact unit when the regulator is below the threshold, compact otherwise.
    #[default]
    Auto,
    /// Always expand the unit from the continued fraction.
    Exact,
    /// Always go through the regulator and a compact representation.
    Compact,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "auto" => Ok(Mode::Auto),
            "exact" => Ok(Mode::Exact),
            "compact" => Ok(Mode::Compact),
            _ => Err(Error::Config(format!(
                "unknown mode {s:?} (expected auto, exact or compact)"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Auto => "auto",
            Mode::Exact => "exact",
            Mode::Compact => "compact",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub bound: u64,
    pub c_start: u32,
    pub approx_tol: f64,
    pub exact_path_threshold: f64,
    pub giant_step_budget: u64,
    pub worker_count: usize,
    pub checkpoint_path: Option<PathBuf>,
    pub mode: Mode,
    /// Masks per checkpoint chunk.
    pub chunk_size: u64,
    pub resume: bool,
    /// Discard an existing checkpoint instead of refusing to touch it.
    pub restart: bool,
    /// Stop after this many newly completed chunks (simulated interruption).
    pub stop_after_chunks: Option<usize>,
}

pub const DEFAULT_CHUNK_SIZE: u64 = 256;

impl SearchConfig {
    pub fn new(bound: u64) -> SearchConfig {
        SearchConfig {
            bound,
            c_start: 15,
            approx_tol: 0.5,
            exact_path_threshold: 5e4,
            giant_step_budget: DEFAULT_GIANT_STEP_BUDGET,
            worker_count: 1,
            checkpoint_path: None,
            mode: Mode::Auto,
            chunk_size: DEFAULT_CHUNK_SIZE,
            resume: false,
            restart: false,
            stop_after_chunks: None,
        }
    }

    pub fn validate(&self, basis: &SmoothBasis) -> Result<()> {
        let gap = (basis.first_excluded_prime() as f64).ln();
        if !(self.approx_tol > 0.0 && self.approx_tol < 2.3 && self.approx_tol < gap / 2.0) {
            return Err(Error::Config(format!(
                "tolerance {} must lie in (0, min(2.3, {:.3}))",
                self.approx_tol,
                gap / 2.0
            )));
        }
        if self.c_start == 0 {
            return Err(Error::Config("c_start must be positive".into()));
        }
        if self.chunk_size == 0 {
            return Err(Error::Config("chunk size must be positive".into()));
        }
        if self.worker_count == 0 {
            return Err(Error::Config("at least one worker is required".into()));
        }
        if basis.len() > 40 {
            return Err(Error::Config(format!(
                "{} basis primes is beyond reach",
                basis.len()
            )));
        }
        Ok(())
    }
}

/// One solution `x` of `P(x² − 1) <= K` with its tower position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionRecord {
    pub x: BigInt,
    pub d: BigInt,
    pub n: u32,
    /// Exponents of `x² − 1` over the basis.
    pub exponents: ExponentVector,
}

impl SolutionRecord {
    pub fn to_line(&self) -> String {
        let a: Vec<String> = self.exponents.0.iter().map(u32::to_string).collect();
        format!("x={} d={} n={} a={}", self.x, self.d, self.n, a.join(","))
    }

    /// Inverse of [`SolutionRecord::to_line`].
    pub fn from_line(line: &str) -> std::result::Result<SolutionRecord, String> {
        let mut x = None;
        let mut d = None;
        let mut n = None;
        let mut a = None;
        for field in line.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| format!("field {field:?} is not key=value"))?;
            let bad = |_| format!("bad value for {key}: {value:?}");
            match key {
                "x" => x = Some(value.parse::<BigInt>().map_err(bad)?),
                "d" => d = Some(value.parse::<BigInt>().map_err(bad)?),
                "n" => {
                    n = Some(
                        value
                            .parse::<u32>()
                            .map_err(|_| format!("bad value for n: {value:?}"))?,
                    )
                }
                "a" => {
                    let exps = if value.is_empty() {
                        Vec::new()
                    } else {
                        value
                            .split(',')
                            .map(|e| e.parse::<u32>())
                            .collect::<std::result::Result<_, _>>()
                            .map_err(|_| format!("bad exponent list {value:?}"))?
                    };
                    a = Some(ExponentVector(exps));
                }
                _ => return Err(format!("unknown field {key:?}")),
            }
        }
        Ok(SolutionRecord {
            x: x.ok_or("missing x")?,
            d: d.ok_or("missing d")?,
            n: n.ok_or("missing n")?,
            exponents: a.ok_or("missing a")?,
        })
    }

    /// Independent re-check by trial division: `x² − 1` is smooth with the
    /// recorded exponents and squarefree part `d`.
    pub fn reverify(&self, basis: &SmoothBasis) -> bool {
        if self.x < BigInt::from(2) || self.exponents.len() != basis.len() {
            return false;
        }
        let v = &self.x * &self.x - 1u32;
        let Ok(split) = smooth_split(&v, basis) else {
            return false;
        };
        split.cofactor.is_one()
            && split.exponents == self.exponents
            && crate::smooth::squarefree_part(&split.exponents, basis) == self.d
    }
}

/// A modulus whose unit could not be computed within the configured limits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkippedModulus {
    pub d: BigInt,
    pub reason: String,
}

impl SkippedModulus {
    pub fn to_line(&self) -> String {
        format!(
            "skip d={} reason={}",
            self.d,
            self.reason.replace('\n', " ")
        )
    }

    pub fn from_line(line: &str) -> std::result::Result<SkippedModulus, String> {
        let rest = line.strip_prefix("skip d=").ok_or("not a skip line")?;
        let (d, reason) = rest
            .split_once(" reason=")
            .ok_or("skip line without reason")?;
        Ok(SkippedModulus {
            d: d.parse().map_err(|_| format!("bad modulus {d:?}"))?,
            reason: reason.to_string(),
        })
    }
}

/// Margins observed by the log tests, to show the separation holds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchStats {
    pub moduli: u64,
    pub log_tests: u64,
    /// Largest `|value|` among accepted (smooth) indices.
    pub max_accepted: f64,
    /// Smallest value among rejected indices.
    pub min_rejected: f64,
    pub convergent_checks: u64,
    pub exact_units: u64,
    pub compact_units: u64,
}

impl Default for SearchStats {
    fn default() -> SearchStats {
        SearchStats {
            moduli: 0,
            log_tests: 0,
            max_accepted: 0.0,
            min_rejected: f64::INFINITY,
            convergent_checks: 0,
            exact_units: 0,
            compact_units: 0,
        }
    }
}

impl SearchStats {
    pub fn merge(&mut self, o: &SearchStats) {
        self.moduli += o.moduli;
        self.log_tests += o.log_tests;
        self.max_accepted = self.max_accepted.max(o.max_accepted);
        self.min_rejected = self.min_rejected.min(o.min_rejected);
        self.convergent_checks += o.convergent_checks;
        self.exact_units += o.exact_units;
        self.compact_units += o.compact_units;
    }
}

/// Largest tower index that can carry a solution: past it, `y_n/y₁` has a
/// primitive prime divisor `p ≡ ±1 (mod n)` that exceeds the basis.
pub fn n_max(basis: &SmoothBasis) -> u32 {
    (basis.largest() as u32 + 1).max(12)
}

/// Residues of the fundamental solution modulo any requested modulus.
pub trait UnitResidues {
    fn d(&self) -> &BigInt;
    fn residues(&self, m: &BigInt) -> Result<(BigInt, BigInt)>;
}

impl UnitResidues for PellSolution {
    fn d(&self) -> &BigInt {
        &self.d
    }

    fn residues(&self, m: &BigInt) -> Result<(BigInt, BigInt)> {
        Ok((self.x1.mod_floor(m), self.y1.mod_floor(m)))
    }
}

impl UnitResidues for CompactRep {
    fn d(&self) -> &BigInt {
        &self.d
    }

    fn residues(&self, m: &BigInt) -> Result<(BigInt, BigInt)> {
        self.eval_mod(m)
    }
}

/// `y_n mod m` for the tower of `unit`.
fn tower_y_mod(unit: &dyn UnitResidues, n: u64, m: &BigInt) -> Result<BigInt> {
    let (x1, y1) = unit.residues(m)?;
    Ok(pell_power_mod(&x1, &y1, n, unit.d(), m).1)
}

const MAX_VALUATION_EXPONENT: u32 = 1 << 20;

/// Smooth part `z` of `y_n` and its exponents, using residues only: `y_n`
/// modulo the basis product says which primes divide it, then `y_n` modulo
/// `p^c` pins each valuation, doubling `c` while the residue vanishes.
pub fn smooth_valuations_of_y(
    unit: &dyn UnitResidues,
    n: u64,
    basis: &SmoothBasis,
    c_start: u32,
) -> Result<(BigInt, ExponentVector)> {
    let yv = tower_y_mod(unit, n, basis.product())?;
    let mut exps = ExponentVector::zeros(basis.len());
    let mut pending: Vec<(usize, u32)> = basis
        .primes()
        .iter()
        .enumerate()
        .filter(|(_, &p)| (&yv % p).is_zero())
        .map(|(i, _)| (i, c_start))
        .collect();
    while !pending.is_empty() {
        let powers: Vec<BigInt> = pending
            .iter()
            .map(|&(i, c)| BigInt::from(basis.primes()[i]).pow(c))
            .collect();
        let m = powers.iter().fold(BigInt::one(), |acc, q| acc * q);
        let y = tower_y_mod(unit, n, &m)?;
        let mut next = Vec::new();
        for (&(i, c), q) in pending.iter().zip(&powers) {
            let r = &y % q;
            if r.is_zero() {
                if c >= MAX_VALUATION_EXPONENT {
                    return Err(Error::InternalLimit(format!(
                        "valuation of {} in y_{n} for d={} exceeds 2^20",
                        basis.primes()[i],
                        unit.d()
                    )));
                }
                next.push((i, c * 2));
            } else {
                exps.0[i] = crate::smooth::valuation(&r, basis.primes()[i])?;
            }
        }
        pending = next;
    }
    Ok((basis.recompose(&exps), exps))
}

/// Outcome of the convergent check and the log test on `y₁`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// `y₁` equals its smooth part.
    Verified,
    /// `y₁` has a prime factor outside the basis.
    RefutedSolutionFree,
    /// A convergent below the smooth part solves the equation, which the
    /// regulator rules out. Never expected.
    Inconsistent,
}

/// `n·R* − log 2 − ½ log d − log z`: about `log(y_n / z)`.
pub fn log_gap(n: u32, rstar: Real, d: &BigInt, z: &BigInt) -> Real {
    rstar * Real::from_f64(f64::from(n))
        - Real::LN2
        - Real::ln_bigint(d).ldexp(-1)
        - Real::ln_bigint(z)
}

/// Decide smoothness from a log gap. Values in the band between the
/// tolerance and `log q − tol` (`q` the first excluded prime) cannot occur
/// for a correct regulator and are reported as errors.
pub fn classify_gap(value: f64, tol: f64, q_next: u64, d: &BigInt, n: u32) -> Result<bool> {
    let hi = (q_next as f64).ln() - tol;
    if value.abs() < tol {
        Ok(true)
    } else if value >= hi {
        Ok(false)
    } else {
        Err(Error::ForbiddenBand {
            d: d.clone(),
            n,
            value,
            lo: tol,
            hi,
        })
    }
}

/// Convergent check and log test for the fundamental solution itself.
pub fn unconditional_check(
    d: &BigInt,
    rstar: Real,
    z: &BigInt,
    tol: f64,
    q_next: u64,
) -> Result<Verdict> {
    for (p, q) in Convergents::new(d)? {
        if &q >= z {
            break;
        }
        if &p * &p - d * &q * &q == BigInt::one() {
            return Ok(Verdict::Inconsistent);
        }
    }
    let value = log_gap(1, rstar, d, z).to_f64();
    Ok(if classify_gap(value, tol, q_next, d, 1)? {
        Verdict::Verified
    } else {
        Verdict::RefutedSolutionFree
    })
}

enum Unit {
    Exact(PellSolution),
    Compact(CompactRep),
}

impl Unit {
    fn access(&self) -> &dyn UnitResidues {
        match self {
            Unit::Exact(s) => s,
            Unit::Compact(r) => r,
        }
    }
}

/// Results for one modulus.
#[derive(Clone, Debug, Default)]
pub struct DScan {
    pub records: Vec<SolutionRecord>,
    pub skipped: Option<SkippedModulus>,
    pub stats: SearchStats,
}

fn obtain_unit(d: &BigInt, config: &SearchConfig) -> Result<(Unit, Real)> {
    let exact = |expect: Option<Real>| -> Result<(Unit, Real)> {
        let s = fundamental_solution(d)?;
        let r = log_unit(&s, MANTISSA_BITS);
        if let Some(e) = expect {
            if (r - e).to_f64().abs() > 1e-6 {
                return Err(Error::Construction {
                    d: d.clone(),
                    reason: format!("regulator {e} disagrees with the expanded unit {r}"),
                });
            }
        }
        Ok((Unit::Exact(s), r))
    };
    match config.mode {
        Mode::Exact => exact(None),
        Mode::Auto | Mode::Compact => {
            let reg = regulator_bsgs(d, config.giant_step_budget)?;
            if config.mode == Mode::Auto && reg.value.to_f64() < config.exact_path_threshold {
                exact(Some(reg.value))
            } else {
                let rep = compact_rep_build(d, &reg)?;
                Ok((Unit::Compact(rep), reg.value))
            }
        }
    }
}

/// Scan the tower of one modulus for indices `n <= n_max` with smooth `y_n`.
pub fn scan_d(d: &BigInt, config: &SearchConfig, basis: &SmoothBasis) -> Result<DScan> {
    let mut out = DScan::default();
    out.stats.moduli = 1;
    let (unit, rstar) = match obtain_unit(d, config) {
        Ok(u) => u,
        Err(e @ Error::RegulatorTooLarge { .. }) => {
            out.skipped = Some(SkippedModulus {
                d: d.clone(),
                reason: e.to_string(),
            });
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    match unit {
        Unit::Exact(_) => out.stats.exact_units = 1,
        Unit::Compact(_) => out.stats.compact_units = 1,
    }
    let q_next = basis.first_excluded_prime();
    let tol = config.approx_tol;
    let top = n_max(basis);
    let mut dead = vec![false; top as usize + 1];
    for n in 1..=top {
        if dead[n as usize] {
            continue;
        }
        let (z, zexps) =
            smooth_valuations_of_y(unit.access(), u64::from(n), basis, config.c_start)?;
        let value = log_gap(n, rstar, d, &z).to_f64();
        out.stats.log_tests += 1;
        if n == 1 {
            out.stats.convergent_checks += 1;
            if unconditional_check(d, rstar, &z, tol, q_next)? == Verdict::Inconsistent {
                return Err(Error::Inconsistent { d: d.clone() });
            }
        }
        if classify_gap(value, tol, q_next, d, n)? {
            out.stats.max_accepted = out.stats.max_accepted.max(value.abs());
            out.records.push(assemble(d, n, &z, &zexps, &unit, basis)?);
        } else {
            out.stats.min_rejected = out.stats.min_rejected.min(value);
            for m in (n..=top).step_by(n as usize) {
                dead[m as usize] = true;
            }
        }
    }
    Ok(out)
}

/// Exact record for an accepted index: `x = √(d z² + 1)` must be an integer,
/// and on the exact path must equal the expanded `x_n`.
fn assemble(
    d: &BigInt,
    n: u32,
    z: &BigInt,
    zexps: &ExponentVector,
    unit: &Unit,
    basis: &SmoothBasis,
) -> Result<SolutionRecord> {
    let fail = |reason: String| Error::Construction {
        d: d.clone(),
        reason,
    };
    let x2 = d * z * z + 1u32;
    let x = x2.sqrt();
    if &x * &x != x2 {
        return Err(fail(format!(
            "index {n} passed the log test but d·z²+1 is not a square"
        )));
    }
    if let Unit::Exact(s) = unit {
        let (xn, yn) = pell_power_exact(s, u64::from(n), DEFAULT_EXACT_DIGIT_LIMIT)?;
        if xn != x || &yn != z {
            return Err(fail(format!("index {n} disagrees with the expanded tower")));
        }
    }
    let mut exponents = ExponentVector::zeros(basis.len());
    let dsplit = smooth_split(d, basis)?;
    if !dsplit.cofactor.is_one() {
        return Err(fail("modulus is not composed of basis primes".into()));
    }
    for (i, e) in exponents.0.iter_mut().enumerate() {
        *e = dsplit.exponents.0[i] + 2 * zexps.0[i];
    }
    let record = SolutionRecord {
        x,
        d: d.clone(),
        n,
        exponents,
    };
    if !record.reverify(basis) {
        return Err(fail(format!("record for index {n} fails trial division")));
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::gen_basis;

    fn big(n: u64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn tower_bounds() {
        assert_eq!(n_max(&gen_basis(100).unwrap()), 98);
        assert_eq!(n_max(&gen_basis(41).unwrap()), 42);
        assert_eq!(n_max(&gen_basis(7).unwrap()), 12);
    }

    #[test]
    fn valuations_of_small_units() {
        let basis = gen_basis(100).unwrap();
        let s = fundamental_solution(&big(3)).unwrap();
        let (z, e) = smooth_valuations_of_y(&s, 1, &basis, 15).unwrap();
        assert_eq!(z, big(1));
        assert_eq!(e.sum(), 0);
        let s = fundamental_solution(&big(2)).unwrap();
        let (z, e) = smooth_valuations_of_y(&s, 1, &basis, 15).unwrap();
        assert_eq!(z, big(2));
        assert_eq!(e.0[0], 1);
    }

    #[test]
    fn valuation_doubling_reaches_large_exponents() {
        // y_n of d=3 at n = 2^20: v₂(y_n) = v₂(n) + 0 ... grows past c_start.
        let basis = gen_basis(7).unwrap();
        let s = fundamental_solution(&big(3)).unwrap();
        let (_, e) = smooth_valuations_of_y(&s, 1 << 20, &basis, 2).unwrap();
        // y_{2k} = 2 x_k y_k with x_k odd for k even: v₂ rises by one per doubling
        let exact = {
            let (_, y) = pell_power_exact(&s, 1 << 10, DEFAULT_EXACT_DIGIT_LIMIT).unwrap();
            crate::smooth::valuation(&y, 2).unwrap()
        };
        assert_eq!(e.0[0], exact + 10);
    }

    #[test]
    fn unconditional_check_examples() {
        let r3 = log_unit(&fundamental_solution(&big(3)).unwrap(), 106);
        assert_eq!(
            unconditional_check(&big(3), r3, &big(1), 0.5, 101).unwrap(),
            Verdict::Verified
        );
        let r2 = log_unit(&fundamental_solution(&big(2)).unwrap(), 106);
        assert_eq!(
            unconditional_check(&big(2), r2, &big(2), 0.5, 101).unwrap(),
            Verdict::Verified
        );
        let v = log_gap(1, r3, &big(3), &big(1)).to_f64();
        assert!((v - 0.0745).abs() < 1e-3);
        // d=7: y₁ = 3, pretending only z=1 is smooth gives log 3 ≈ 1.1, which
        // is forbidden for a basis whose next prime is 101.
        let r7 = log_unit(&fundamental_solution(&big(7)).unwrap(), 106);
        assert!(matches!(
            unconditional_check(&big(7), r7, &big(1), 0.5, 101),
            Err(Error::ForbiddenBand { .. })
        ));
        // but for basis {2} the gap log 3 clears log 3 − 0.5
        assert_eq!(
            unconditional_check(&big(7), r7, &big(1), 0.5, 3).unwrap(),
            Verdict::RefutedSolutionFree
        );
    }

    #[test]
    fn convergent_check_flags_inconsistent_smooth_part() {
        // A smooth part larger than y₁ leaves y₁ among the convergents below it.
        let s = fundamental_solution(&big(2)).unwrap();
        let r = log_unit(&s, 106);
        assert_eq!(
            unconditional_check(&big(2), r, &big(1000), 0.5, 101).unwrap(),
            Verdict::Inconsistent
        );
    }

    #[test]
    fn d3_tower_under_k100() {
        let basis = gen_basis(100).unwrap();
        let scan = scan_d(&big(3), &SearchConfig::new(100), &basis).unwrap();
        let xs: Vec<String> = scan.records.iter().map(|r| r.x.to_string()).collect();
        assert_eq!(
            xs,
            [
                "2",
                "7",
                "26",
                "97",
                "362",
                "1351",
                "5042",
                "18817",
                "70226",
                "9863382151"
            ]
        );
        assert_eq!(scan.records.last().unwrap().n, 18);
    }

    #[test]
    fn small_examples() {
        let basis = gen_basis(7).unwrap();
        let scan = scan_d(&big(35), &SearchConfig::new(7), &basis).unwrap();
        assert_eq!(scan.records[0].x, big(6));
        assert_eq!(scan.records[0].n, 1);
        let basis = gen_basis(100).unwrap();
        let scan = scan_d(&big(3), &SearchConfig::new(100), &basis).unwrap();
        assert!(scan.records.iter().any(|r| r.x == big(7) && r.n == 2));
    }

    #[test]
    fn exact_and_compact_paths_agree() {
        let basis = gen_basis(13).unwrap();
        for mask in 1u64..(1 << basis.len()) {
            let d = basis.subset_product(mask);
            let mut cfg = SearchConfig::new(13);
            cfg.mode = Mode::Exact;
            let a = scan_d(&d, &cfg, &basis).unwrap();
            cfg.mode = Mode::Compact;
            let b = scan_d(&d, &cfg, &basis).unwrap();
            assert_eq!(a.records, b.records, "d={d}");
        }
    }

    #[test]
    fn regulator_budget_becomes_audited_skip() {
        let basis = gen_basis(13).unwrap();
        let mut cfg = SearchConfig::new(13);
        cfg.giant_step_budget = 1;
        cfg.mode = Mode::Compact;
        let d = basis.subset_product((1 << basis.len()) - 1);
        let scan = scan_d(&d, &cfg, &basis).unwrap();
        assert!(scan.records.is_empty());
        assert_eq!(scan.skipped.unwrap().d, d);
    }

    #[test]
    fn record_lines_round_trip() {
        let r = SolutionRecord {
            x: big(17),
            d: big(2),
            n: 4,
            exponents: ExponentVector(vec![5, 2]),
        };
        assert_eq!(r.to_line(), "x=17 d=2 n=4 a=5,2");
        assert_eq!(SolutionRecord::from_line(&r.to_line()).unwrap(), r);
        assert!(r.reverify(&gen_basis(3).unwrap()));
        let s = SkippedModulus {
            d: big(30),
            reason: "budget".into(),
        };
        assert_eq!(SkippedModulus::from_line(&s.to_line()).unwrap(), s);
    }

    #[test]
    fn tolerance_is_validated() {
        let basis = gen_basis(2).unwrap();
        let mut cfg = SearchConfig::new(2);
        assert!(cfg.validate(&basis).is_ok());
        cfg.approx_tol = 0.6; // log 3 / 2 ≈ 0.549
        assert!(cfg.validate(&basis).is_err());
        let basis = gen_basis(100).unwrap();
        cfg.approx_tol = 2.4;
        assert!(cfg.validate(&basis).is_err());
    }
}
