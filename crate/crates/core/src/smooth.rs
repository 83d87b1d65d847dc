//! Prime bases and exact valuation arithmetic over them.
//!
//! All factoring in this crate is trial division by a fixed small set of
//! primes; nothing here attempts general factorization.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The ordered primes `p_1 < ... < p_t <= K` and their product `v`.
#[derive(Clone, PartialEq, Eq)]
pub struct SmoothBasis {
    bound: u64,
    primes: Vec<u64>,
    product: BigInt,
}

impl fmt::Debug for SmoothBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothBasis")
            .field("bound", &self.bound)
            .field("primes", &self.primes)
            .finish()
    }
}

/// Exponents `(a_1, ..., a_t)` aligned with the primes of a basis.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn zeros(len: usize) -> ExponentVector {
        ExponentVector(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of nonzero exponents.
    pub fn support(&self) -> usize {
        self.0.iter().filter(|&&e| e != 0).count()
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn add(&self, other: &ExponentVector) -> ExponentVector {
        assert_eq!(self.len(), other.len());
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: u32) -> ExponentVector {
        ExponentVector(self.0.iter().map(|a| a * k).collect())
    }
}

/// Deterministic primality for the small bounds a basis is built from.
pub fn is_small_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut q = n + 1;
    while !is_small_prime(q) {
        q += 1;
    }
    q
}

/// All primes `<= bound`, in increasing order, with their product.
pub fn gen_basis(bound: u64) -> Result<SmoothBasis> {
    if bound < 2 {
        return Err(Error::InvalidBound(bound));
    }
    let bound_usize = usize::try_from(bound).map_err(|_| Error::InvalidBound(bound))?;
    let mut sieve = vec![true; bound_usize + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= bound_usize {
        if sieve[i] {
            let mut j = i * i;
            while j <= bound_usize {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    let primes: Vec<u64> = sieve
        .iter()
        .enumerate()
        .filter(|(_, &p)| p)
        .map(|(i, _)| i as u64)
        .collect();
    let product = primes.iter().fold(BigInt::one(), |acc, &p| acc * p);
    Ok(SmoothBasis {
        bound,
        primes,
        product,
    })
}

impl SmoothBasis {
    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Product of all basis primes.
    pub fn product(&self) -> &BigInt {
        &self.product
    }

    pub fn largest(&self) -> u64 {
        *self.primes.last().expect("basis is never empty")
    }

    /// The smallest prime outside the basis; every non-smooth cofactor is at
    /// least this large.
    pub fn first_excluded_prime(&self) -> u64 {
        next_prime(self.bound)
    }

    pub fn index_of(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok()
    }

    /// Product of the primes selected by the bits of `mask` (bit `i` selects
    /// `p_{i+1}`).
    pub fn subset_product(&self, mask: u64) -> BigInt {
        self.primes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(BigInt::one(), |acc, (_, &p)| acc * p)
    }

    /// Recompose `∏ p_i^{a_i}`.
    pub fn recompose(&self, exps: &ExponentVector) -> BigInt {
        assert_eq!(exps.len(), self.len());
        self.primes
            .iter()
            .zip(&exps.0)
            .fold(BigInt::one(), |acc, (&p, &e)| acc * BigInt::from(p).pow(e))
    }
}

/// Largest `e` with `p^e | n`.
pub fn valuation(n: &BigInt, p: u64) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::UndefinedValuation);
    }
    let p = BigInt::from(p);
    let mut m = n.abs();
    let mut e = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Ok(e);
        }
        m = q;
        e += 1;
    }
}

/// Result of splitting `|n|` over a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothSplit {
    pub smooth_part: BigInt,
    pub cofactor: BigInt,
    pub exponents: ExponentVector,
}

/// Split `|n|` into its basis-smooth part and a cofactor coprime to the basis.
pub fn smooth_split(n: &BigInt, basis: &SmoothBasis) -> Result<SmoothSplit> {
    if n.is_zero() {
        return Err(Error::UndefinedValuation);
    }
    let mut rest = n.abs();
    let mut exps = Vec::with_capacity(basis.len());
    for &p in basis.primes() {
        let p = BigInt::from(p);
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        exps.push(e);
    }
    let exponents = ExponentVector(exps);
    Ok(SmoothSplit {
        smooth_part: basis.recompose(&exponents),
        cofactor: rest,
        exponents,
    })
}

/// `true` iff every prime factor of `n` lies in the basis (`±1` counts as
/// smooth).
pub fn is_smooth(n: &BigInt, basis: &SmoothBasis) -> Result<bool> {
    Ok(smooth_split(n, basis)?.cofactor.is_one())
}

/// Squarefree kernel of a smooth value given by its exponent vector: the
/// product of the primes with odd exponent.
pub fn squarefree_part(exps: &ExponentVector, basis: &SmoothBasis) -> BigInt {
    basis
        .primes()
        .iter()
        .zip(&exps.0)
        .filter(|(_, &e)| e % 2 == 1)
        .fold(BigInt::one(), |acc, (&p, _)| acc * p)
}

/// Exponent vector of `x^2 - 1` for a smooth solution, or `None` when
/// `x^2 - 1` has a prime factor outside the basis.
pub fn solution_exponents(x: &BigInt, basis: &SmoothBasis) -> Option<ExponentVector> {
    let n = x * x - 1u32;
    if n.is_zero() {
        return None;
    }
    let split = smooth_split(&n, basis).ok()?;
    split.cofactor.is_one().then_some(split.exponents)
}

/// `u64` smoothness test used by the brute-force scans.
pub fn is_smooth_u64(mut n: u64, primes: &[u64]) -> bool {
    if n == 0 {
        return false;
    }
    for &p in primes {
        while n.is_multiple_of(p) {
            n /= p;
        }
        if n == 1 {
            return true;
        }
    }
    n == 1
}
