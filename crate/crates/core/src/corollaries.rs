//! Analytics over a complete solution set: extremes, perfect powers,
//! exponent statistics, runs of consecutive smooth integers.
//!
//! Nothing here trusts stored exponent vectors; every reported value is
//! re-checked by trial division first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::sieve::SolutionRecord;
use crate::smooth::{is_smooth, solution_exponents, ExponentVector, SmoothBasis};

/// Dabrowski's conjectured complete list of `x² − 1 = p_1^α_1 ⋯ p_k^α_k`
/// with all `α_i >= 1`.
pub const DABROWSKI_CONJECTURED: &[(u64, &[u32])] = &[
    (3, &[3]),
    (5, &[3, 1]),
    (7, &[4, 1]),
    (17, &[5, 2]),
    (11, &[3, 1, 1]),
    (19, &[3, 2, 1]),
    (31, &[6, 1, 1]),
    (49, &[5, 1, 2]),
    (161, &[6, 4, 1]),
    (29, &[3, 1, 1, 1]),
    (41, &[4, 1, 1, 1]),
    (71, &[4, 2, 1, 1]),
    (251, &[3, 2, 3, 1]),
    (449, &[7, 2, 2, 1]),
    (4801, &[7, 1, 2, 4]),
    (8749, &[3, 7, 4, 1]),
    (769, &[9, 1, 1, 1, 1]),
    (881, &[5, 2, 1, 2, 1]),
    (1079, &[4, 3, 1, 2, 1]),
    (6049, &[6, 3, 2, 1, 2]),
    (19601, &[5, 4, 2, 2, 2]),
    (3431, &[4, 1, 1, 3, 1, 1]),
    (4159, &[7, 3, 1, 1, 1, 1]),
    (246401, &[8, 6, 2, 1, 1, 2]),
    (1429, &[3, 1, 1, 1, 1, 1, 1]),
    (24751, &[5, 2, 3, 1, 1, 1, 1]),
    (388961, &[6, 4, 1, 4, 1, 1, 1]),
    (1267111, &[4, 3, 1, 1, 3, 1, 1, 2]),
];

/// All solutions of a search, sorted by `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSet {
    pub records: Vec<SolutionRecord>,
    pub basis: SmoothBasis,
    /// True iff every modulus was scanned.
    pub complete: bool,
}

/// An extremal record; `tied` is set when another record reached the same
/// value (the larger `x` wins).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extremum<T> {
    pub x: BigInt,
    pub value: T,
    pub tied: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentStats {
    /// Number of primes dividing `x² − 1`.
    pub max_support: Extremum<usize>,
    /// Sum of the exponents.
    pub max_sum: Extremum<u64>,
    /// `(prime, exponent)` of the single largest exponent.
    pub max_single: Extremum<(u64, u32)>,
}

/// Extreme pairs of consecutive smooth integers of equal parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityPairs {
    /// `t − 1, t + 1` for the largest odd solution `t`.
    pub even: Option<(BigInt, BigInt)>,
    /// `s − 1, s + 1` for the largest even solution `s`.
    pub odd: Option<(BigInt, BigInt)>,
}

fn keep_max<T, K: PartialOrd>(
    best: &mut Option<Extremum<T>>,
    x: &BigInt,
    value: T,
    key: impl Fn(&T) -> K,
) {
    match best {
        Some(b) if key(&value) < key(&b.value) => {}
        Some(b) if key(&value) == key(&b.value) => {
            b.tied = true;
            if x > &b.x {
                b.x = x.clone();
                b.value = value;
            }
        }
        _ => {
            *best = Some(Extremum {
                x: x.clone(),
                value,
                tied: false,
            })
        }
    }
}

impl SolutionSet {
    pub fn new(
        records: Vec<SolutionRecord>,
        basis: SmoothBasis,
        complete: bool,
    ) -> Result<SolutionSet> {
        if records.windows(2).any(|w| w[0].x >= w[1].x) {
            return Err(Error::Verification(
                "records are not strictly increasing in x".into(),
            ));
        }
        Ok(SolutionSet {
            records,
            basis,
            complete,
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    fn ensure_complete(&self) -> Result<()> {
        if self.complete {
            Ok(())
        } else {
            Err(Error::Incomplete(
                "extremal statements need every modulus scanned".into(),
            ))
        }
    }

    /// Exponents of `x² − 1` by trial division; an error if it is not smooth.
    fn exponents_of(&self, x: &BigInt) -> Result<ExponentVector> {
        solution_exponents(x, &self.basis)
            .ok_or_else(|| Error::Verification(format!("{x}² − 1 is not smooth over the basis")))
    }

    fn check_smooth(&self, n: &BigInt) -> Result<()> {
        if is_smooth(n, &self.basis)? {
            Ok(())
        } else {
            Err(Error::Verification(format!(
                "{n} is not smooth over the basis"
            )))
        }
    }

    fn top_where(&self, count: usize, keep: impl Fn(&BigInt) -> bool) -> Result<Vec<BigInt>> {
        self.ensure_complete()?;
        let out: Vec<BigInt> = self
            .records
            .iter()
            .rev()
            .map(|r| &r.x)
            .filter(|x| keep(x))
            .take(count)
            .cloned()
            .collect();
        for x in &out {
            self.exponents_of(x)?;
        }
        Ok(out)
    }

    /// The `count` largest solutions, descending.
    pub fn largest(&self, count: usize) -> Result<Vec<BigInt>> {
        self.top_where(count, |_| true)
    }

    pub fn largest_odd(&self) -> Result<Option<BigInt>> {
        Ok(self.top_where(1, |x| x.is_odd())?.pop())
    }

    pub fn largest_even(&self) -> Result<Option<BigInt>> {
        Ok(self.top_where(1, |x| x.is_even())?.pop())
    }

    /// `(r, x)` for every solution `x = r^e` with `r >= 2`, by increasing `r`.
    /// Then `r^(2e) − 1` is smooth, which is re-checked.
    pub fn power_solutions(&self, e: u32) -> Result<Vec<(BigInt, BigInt)>> {
        self.ensure_complete()?;
        let mut out = Vec::new();
        for r in &self.records {
            let root = r.x.nth_root(e);
            if root >= BigInt::from(2) && root.pow(e) == r.x {
                self.check_smooth(&(root.pow(2 * e) - 1u32))?;
                out.push((root, r.x.clone()));
            }
        }
        Ok(out)
    }

    /// Largest `e` such that `r^(2e) − 1` is smooth for some `r >= min_root`,
    /// with the largest such `r`.
    pub fn largest_power_exponent(&self, min_root: u64) -> Result<Option<(u32, BigInt)>> {
        self.ensure_complete()?;
        let Some(top) = self.records.last() else {
            return Ok(None);
        };
        let max_e = top.x.bits() as u32;
        for e in (2..=max_e).rev() {
            let sols = self.power_solutions(e)?;
            if let Some((r, _)) = sols
                .iter()
                .rev()
                .find(|(r, _)| r >= &BigInt::from(min_root))
            {
                return Ok(Some((e, r.clone())));
            }
        }
        Ok(None)
    }

    /// Solutions whose `x² − 1` is divisible by exactly the first `k` basis
    /// primes, with their exponents.
    pub fn dabrowski_check(&self, k: usize) -> Result<Vec<(BigInt, Vec<u32>)>> {
        self.ensure_complete()?;
        if k == 0 || k > self.basis.len() {
            return Err(Error::Config(format!(
                "k must lie in 1..={}",
                self.basis.len()
            )));
        }
        let mut out = Vec::new();
        for r in &self.records {
            let exps = self.exponents_of(&r.x)?;
            let (head, tail) = exps.0.split_at(k);
            if head.iter().all(|&a| a >= 1) && tail.iter().all(|&a| a == 0) {
                out.push((r.x.clone(), head.to_vec()));
            }
        }
        Ok(out)
    }

    /// Maximal runs `[a, a + len]` of consecutive smooth integers, built from
    /// the pairs `((x − 1)/2, (x + 1)/2)` of the odd solutions. Returned as
    /// `(a, len)` with `len >= 1` pairs merged.
    fn runs(&self) -> Vec<(BigInt, u64)> {
        let starts: Vec<BigInt> = self
            .records
            .iter()
            .filter(|r| r.x.is_odd())
            .map(|r| (&r.x - 1u32) / 2u32)
            .collect();
        let mut runs: Vec<(BigInt, u64)> = Vec::new();
        for a in starts {
            match runs.last_mut() {
                Some((s, len)) if &*s + BigInt::from(*len) == a => *len += 1,
                _ => runs.push((a, 1)),
            }
        }
        runs
    }

    /// Largest `x` with `x, x + 1, …, x + n` all smooth.
    pub fn consecutive_runs(&self, n: u64) -> Result<Option<BigInt>> {
        self.ensure_complete()?;
        if n == 0 {
            return Err(Error::Config("run length n must be at least 1".into()));
        }
        let best = self
            .runs()
            .into_iter()
            .filter(|(_, len)| *len >= n)
            .map(|(a, len)| a + BigInt::from(len - n))
            .max();
        if let Some(x) = &best {
            let mut m = x.clone();
            for _ in 0..=n {
                self.check_smooth(&m)?;
                m += 1u32;
            }
        }
        Ok(best)
    }

    /// `consecutive_runs` for `n = 1..=max_n`.
    pub fn consecutive_table(&self, max_n: u64) -> Result<Vec<(u64, Option<BigInt>)>> {
        (1..=max_n)
            .map(|n| Ok((n, self.consecutive_runs(n)?)))
            .collect()
    }

    pub fn parity_pairs(&self) -> Result<ParityPairs> {
        let pair = |x: BigInt| -> Result<(BigInt, BigInt)> {
            let (lo, hi) = (&x - 1u32, &x + 1u32);
            if !lo.is_zero() {
                self.check_smooth(&lo)?;
            }
            self.check_smooth(&hi)?;
            Ok((lo, hi))
        };
        Ok(ParityPairs {
            even: self.largest_odd()?.map(pair).transpose()?,
            odd: self.largest_even()?.map(pair).transpose()?,
        })
    }

    pub fn exponent_stats(&self) -> Result<Option<ExponentStats>> {
        self.ensure_complete()?;
        let (mut support, mut sum, mut single) = (None, None, None);
        for r in &self.records {
            let exps = self.exponents_of(&r.x)?;
            keep_max(&mut support, &r.x, exps.support(), |v| *v);
            keep_max(&mut sum, &r.x, exps.sum(), |v| *v);
            let (i, &a) = exps
                .0
                .iter()
                .enumerate()
                .max_by_key(|&(i, a)| (*a, std::cmp::Reverse(i)))
                .expect("nonempty basis");
            keep_max(&mut single, &r.x, (self.basis.primes()[i], a), |v| v.1);
        }
        Ok(match (support, sum, single) {
            (Some(max_support), Some(max_sum), Some(max_single)) => Some(ExponentStats {
                max_support,
                max_sum,
                max_single,
            }),
            _ => None,
        })
    }

    /// `(t² − 1)/8` for the largest odd solution `t`: the triangular number
    /// `T_m` with `m = (t − 1)/2`, the largest smooth triangular number.
    pub fn triangular_largest(&self) -> Result<Option<BigInt>> {
        let Some(t) = self.largest_odd()? else {
            return Ok(None);
        };
        Ok(Some(triangular_from(&t, &self.basis)?))
    }
}

/// `(t² − 1)/8` for odd `t >= 3`, checked to be `T_m`, `m = (t − 1)/2`, and
/// smooth.
pub fn triangular_from(t: &BigInt, basis: &SmoothBasis) -> Result<BigInt> {
    if t.is_even() || t < &BigInt::from(3) {
        return Err(Error::Verification(format!(
            "{t} is not an odd solution >= 3"
        )));
    }
    let v = (t * t - 1u32) / 8u32;
    let m: BigInt = (t - 1u32) / 2u32;
    let tm = &m * (&m + BigInt::one()) / 2u32;
    if tm != v || !is_smooth(&v, basis)? {
        return Err(Error::Verification(format!(
            "{v} is not a smooth triangular number"
        )));
    }
    Ok(v)
}
