//! Exact arithmetic in `Z[√d]`: continued fractions of `√d`, fundamental
//! solutions of `x² − dy² = 1`, unit logarithms and tower powering.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::real::Real;

/// Default cap on the decimal size of an exactly expanded tower member.
pub const DEFAULT_EXACT_DIGIT_LIMIT: u64 = 10_000_000;

/// Default working precision, in bits, for unit logarithms.
pub const DEFAULT_LOG_PRECISION: u32 = 96;

/// `(a + b√d) / denom` with `denom ∈ {1, 2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadInt {
    pub a: BigInt,
    pub b: BigInt,
    pub denom: u8,
}

impl QuadInt {
    pub fn new(a: BigInt, b: BigInt, denom: u8, d: &BigInt) -> Option<QuadInt> {
        let ok = match denom {
            1 => true,
            2 => (&a - &b * d).is_even(),
            _ => false,
        };
        ok.then_some(QuadInt { a, b, denom })
    }

    pub fn integral(a: BigInt, b: BigInt) -> QuadInt {
        QuadInt { a, b, denom: 1 }
    }

    /// `denom² · N(self) = a² − d b²`.
    pub fn scaled_norm(&self, d: &BigInt) -> BigInt {
        &self.a * &self.a - d * &self.b * &self.b
    }

    pub fn conjugate(&self) -> QuadInt {
        QuadInt {
            a: self.a.clone(),
            b: -&self.b,
            denom: self.denom,
        }
    }

    /// Product, when it stays on the lattice with denominator 1 or 2.
    pub fn mul(&self, other: &QuadInt, d: &BigInt) -> Option<QuadInt> {
        let a = &self.a * &other.a + d * &self.b * &other.b;
        let b = &self.a * &other.b + &self.b * &other.a;
        let denom = u32::from(self.denom) * u32::from(other.denom);
        match denom {
            1 => Some(QuadInt::integral(a, b)),
            2 => QuadInt::new(a, b, 2, d),
            4 if a.is_even() && b.is_even() => QuadInt::new(a / 2, b / 2, 2, d),
            _ => None,
        }
    }

    /// `log |value|`, avoiding cancellation between the two terms.
    pub fn ln_abs(&self, d: &BigInt, sqrt_d: Real) -> Real {
        let same_sign = self.a.sign() == self.b.sign() || self.a.is_zero() || self.b.is_zero();
        let denom = Real::from_f64(f64::from(self.denom)).ln();
        if same_sign {
            ln_abs_sum(&self.a, &self.b, sqrt_d) - denom
        } else {
            // |a + b√d| = |a² − d b²| / |a − b√d|
            let norm = self.scaled_norm(d).abs();
            Real::ln_bigint(&norm) - ln_abs_sum(&self.a, &-&self.b, sqrt_d) - denom
        }
    }
}

/// `log |a + b·s|` for `a`, `b` of equal sign (or one of them zero).
fn ln_abs_sum(a: &BigInt, b: &BigInt, s: Real) -> Real {
    let a = a.abs();
    let b = b.abs();
    let bits = a.bits().max(b.bits());
    let shift = bits.saturating_sub(crate::real::MANTISSA_BITS as u64);
    let ar = Real::from_bigint(&(&a >> shift));
    let br = Real::from_bigint(&(&b >> shift));
    (ar + br * s).ln() + Real::LN2 * Real::from_f64(shift as f64)
}

/// Fundamental solution `(x₁, y₁)` of `x² − dy² = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PellSolution {
    pub d: BigInt,
    pub x1: BigInt,
    pub y1: BigInt,
}

impl PellSolution {
    pub fn is_solution(&self) -> bool {
        &self.x1 * &self.x1 - &self.d * &self.y1 * &self.y1 == BigInt::one()
    }
}

/// `√d = [a0; period, period, ...]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfExpansion {
    pub d: BigInt,
    pub a0: BigInt,
    pub period: Vec<BigInt>,
}

fn check_modulus(d: &BigInt) -> Result<BigInt> {
    if d < &BigInt::from(2) {
        return Err(Error::InvalidModulus(d.clone()));
    }
    let a0 = d.sqrt();
    if &a0 * &a0 == *d {
        return Err(Error::InvalidModulus(d.clone()));
    }
    Ok(a0)
}

/// Partial quotients of `√d` after `a0`, produced by the `(P, Q)` recurrence.
struct Quotients {
    d: BigInt,
    a0: BigInt,
    p: BigInt,
    q: BigInt,
}

impl Quotients {
    fn new(d: &BigInt, a0: &BigInt) -> Quotients {
        Quotients {
            d: d.clone(),
            a0: a0.clone(),
            p: a0.clone(),
            q: d - a0 * a0,
        }
    }
}

impl Iterator for Quotients {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        let a = (&self.a0 + &self.p) / &self.q;
        let p = &a * &self.q - &self.p;
        let (q, r) = (&self.d - &p * &p).div_rem(&self.q);
        debug_assert!(r.is_zero());
        self.p = p;
        self.q = q;
        Some(a)
    }
}

/// Continued fraction of `√d` with its minimal period.
pub fn cf_expand(d: &BigInt) -> Result<CfExpansion> {
    let a0 = check_modulus(d)?;
    let two_a0 = &a0 * 2u32;
    let mut period = Vec::new();
    for a in Quotients::new(d, &a0) {
        let end = a == two_a0;
        period.push(a);
        if end {
            break;
        }
    }
    Ok(CfExpansion {
        d: d.clone(),
        a0,
        period,
    })
}

/// Convergents `p/q` of `√d` with `q < bound`, in increasing `q`.
pub fn convergents_below(d: &BigInt, bound: &BigInt) -> Result<Vec<(BigInt, BigInt)>> {
    let mut out = Vec::new();
    for pq in Convergents::new(d)? {
        if &pq.1 >= bound {
            break;
        }
        out.push(pq);
    }
    Ok(out)
}

/// Endless stream of convergents of `√d`.
pub struct Convergents {
    quotients: Quotients,
    prev: (BigInt, BigInt),
    cur: Option<(BigInt, BigInt)>,
}

impl Convergents {
    pub fn new(d: &BigInt) -> Result<Convergents> {
        let a0 = check_modulus(d)?;
        Ok(Convergents {
            quotients: Quotients::new(d, &a0),
            prev: (BigInt::one(), BigInt::zero()),
            cur: None,
        })
    }
}

impl Iterator for Convergents {
    type Item = (BigInt, BigInt);

    fn next(&mut self) -> Option<(BigInt, BigInt)> {
        let next = match &self.cur {
            None => (self.quotients.a0.clone(), BigInt::one()),
            Some((p, q)) => {
                let a = self.quotients.next()?;
                let np = &a * p + &self.prev.0;
                let nq = &a * q + &self.prev.1;
                self.prev = (p.clone(), q.clone());
                (np, nq)
            }
        };
        self.cur = Some(next.clone());
        Some(next)
    }
}

/// `[[p_k, p_{k-1}], [q_k, q_{k-1}]]` for the quotient block, by product tree.
fn convergent_matrix(qs: &[BigInt]) -> [BigInt; 4] {
    if qs.len() == 1 {
        return [qs[0].clone(), BigInt::one(), BigInt::one(), BigInt::zero()];
    }
    let (l, r) = qs.split_at(qs.len() / 2);
    let [a, b, c, d] = convergent_matrix(l);
    let [e, f, g, h] = convergent_matrix(r);
    [
        &a * &e + &b * &g,
        &a * &f + &b * &h,
        &c * &e + &d * &g,
        &c * &f + &d * &h,
    ]
}

/// Minimal solution of `x² − dy² = 1`. When the period is odd the
/// norm −1 unit is squared.
pub fn fundamental_solution(d: &BigInt) -> Result<PellSolution> {
    let cf = cf_expand(d)?;
    Ok(fundamental_from_cf(&cf))
}

pub fn fundamental_from_cf(cf: &CfExpansion) -> PellSolution {
    let l = cf.period.len();
    let mut qs = Vec::with_capacity(l);
    qs.push(cf.a0.clone());
    qs.extend_from_slice(&cf.period[..l - 1]);
    let [p, _, q, _] = convergent_matrix(&qs);
    let d = &cf.d;
    let (x1, y1) = if l % 2 == 1 {
        (&p * &p + d * &q * &q, 2u32 * &p * &q)
    } else {
        (p, q)
    };
    PellSolution {
        d: d.clone(),
        x1,
        y1,
    }
}

/// `log(x₁ + y₁√d)` from the leading `precision` bits of `x₁` and `y₁`.
pub fn log_unit(s: &PellSolution, precision: u32) -> Real {
    let precision = precision.clamp(24, crate::real::MANTISSA_BITS);
    let bits = s.x1.bits().max(s.y1.bits());
    let shift = bits.saturating_sub(u64::from(precision));
    let x = Real::from_bigint(&(&s.x1 >> shift));
    let y = Real::from_bigint(&(&s.y1 >> shift));
    let sqrt_d = Real::sqrt_bigint(&s.d);
    (x + y * sqrt_d).ln() + Real::LN2 * Real::from_f64(shift as f64)
}

/// `(x_n mod m, y_n mod m)` from `(x₁ mod m, y₁ mod m)` by binary powering
/// with `x_{2k} = 2x_k² − 1`, `y_{2k} = 2x_k y_k` and
/// `x_{k+1} = x_k x₁ + d y_k y₁`, `y_{k+1} = x_k y₁ + y_k x₁`.
pub fn pell_power_mod(
    x1m: &BigInt,
    y1m: &BigInt,
    n: u64,
    d: &BigInt,
    m: &BigInt,
) -> (BigInt, BigInt) {
    assert!(n >= 1, "tower index starts at 1");
    let dm = d.mod_floor(m);
    let mut x = x1m.mod_floor(m);
    let mut y = y1m.mod_floor(m);
    let (bx, by) = (x.clone(), y.clone());
    for bit in (0..63 - n.leading_zeros()).rev() {
        let nx = (2u32 * &x * &x - 1u32).mod_floor(m);
        let ny = (2u32 * &x * &y).mod_floor(m);
        x = nx;
        y = ny;
        if n >> bit & 1 == 1 {
            let nx = (&x * &bx + &dm * &y * &by).mod_floor(m);
            let ny = (&x * &by + &y * &bx).mod_floor(m);
            x = nx;
            y = ny;
        }
    }
    (x, y)
}

/// Exact `(x_n, y_n)`, refusing when the expansion would exceed
/// `digit_limit` decimal digits.
pub fn pell_power_exact(s: &PellSolution, n: u64, digit_limit: u64) -> Result<(BigInt, BigInt)> {
    assert!(n >= 1, "tower index starts at 1");
    let log10 = log_unit(s, 64).to_f64() / std::f64::consts::LN_10;
    let estimated_digits = log10 * n as f64;
    if estimated_digits > digit_limit as f64 {
        return Err(Error::TooLarge {
            estimated_digits,
            limit: digit_limit,
        });
    }
    let d = &s.d;
    let mut x = s.x1.clone();
    let mut y = s.y1.clone();
    for bit in (0..63 - n.leading_zeros()).rev() {
        let nx = 2u32 * &x * &x - 1u32;
        let ny = 2u32 * &x * &y;
        x = nx;
        y = ny;
        if n >> bit & 1 == 1 {
            let nx = &x * &s.x1 + d * &y * &s.y1;
            let ny = &x * &s.y1 + &y * &s.x1;
            x = nx;
            y = ny;
        }
    }
    Ok((x, y))
}

/// The fundamental solution for `d`, found among the convergents with
/// denominator at most `y_bound`. Every solution is a convergent, so this
/// succeeds whenever some solution has `y <= y_bound`.
pub fn fundamental_below(d: &BigInt, y_bound: &BigInt) -> Result<Option<PellSolution>> {
    for (p, q) in Convergents::new(d)? {
        if &q > y_bound {
            return Ok(None);
        }
        if &p * &p - d * &q * &q == BigInt::one() {
            return Ok(Some(PellSolution {
                d: d.clone(),
                x1: p,
                y1: q,
            }));
        }
    }
    unreachable!("convergent stream is endless")
}

/// For a solution `x² − dy² = 1`, the index `n` with
/// `x + y√d = (x₁ + y₁√d)^n`.
pub fn tower_index(x: &BigInt, y: &BigInt, d: &BigInt) -> Result<Option<u64>> {
    let Some(fund) = fundamental_below(d, y)? else {
        return Ok(None);
    };
    let mut cx = fund.x1.clone();
    let mut cy = fund.y1.clone();
    let mut n = 1;
    while &cy < y {
        let nx = &cx * &fund.x1 + d * &cy * &fund.y1;
        let ny = &cx * &fund.y1 + &cy * &fund.x1;
        cx = nx;
        cy = ny;
        n += 1;
    }
    Ok((&cx == x && &cy == y).then_some(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Roots;
    use proptest::prelude::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn bigs(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| big(x)).collect()
    }

    fn is_square(n: u64) -> bool {
        let r = n.sqrt();
        r * r == n
    }

    /// Reference `(P, Q)` recurrence on machine integers.
    fn oracle_period(d: u64) -> Vec<u64> {
        let a0 = d.sqrt();
        let (mut m, mut den, mut a) = (0u64, 1u64, a0);
        let mut out = vec![];
        while a != 2 * a0 {
            m = den * a - m;
            den = (d - m * m) / den;
            a = (a0 + m) / den;
            out.push(a);
        }
        out
    }

    #[test]
    fn small_expansions() {
        let e = cf_expand(&big(2)).unwrap();
        assert_eq!((e.a0, e.period), (big(1), bigs(&[2])));
        let e = cf_expand(&big(3)).unwrap();
        assert_eq!((e.a0, e.period), (big(1), bigs(&[1, 2])));
        let e = cf_expand(&big(7)).unwrap();
        assert_eq!((e.a0, e.period), (big(2), bigs(&[1, 1, 1, 4])));
        assert!(matches!(cf_expand(&big(9)), Err(Error::InvalidModulus(_))));
        assert!(matches!(cf_expand(&big(1)), Err(Error::InvalidModulus(_))));
    }

    #[test]
    fn expansion_matches_machine_recurrence() {
        for d in 2..3000u64 {
            if is_square(d) {
                continue;
            }
            let e = cf_expand(&big(d as i64)).unwrap();
            let want: Vec<BigInt> = oracle_period(d).into_iter().map(BigInt::from).collect();
            assert_eq!(e.period, want, "d={d}");
        }
    }

    #[test]
    fn period_without_last_is_palindrome() {
        for d in 2..10_000i64 {
            if is_square(d as u64) {
                continue;
            }
            let e = cf_expand(&big(d)).unwrap();
            let body = &e.period[..e.period.len() - 1];
            let rev: Vec<_> = body.iter().rev().cloned().collect();
            assert_eq!(body, &rev[..], "d={d}");
            assert_eq!(e.period.last().unwrap(), &(2u32 * &e.a0));
        }
    }

    #[test]
    fn convergent_lists() {
        assert!(convergents_below(&big(3), &big(1)).unwrap().is_empty());
        // √3 = [1; 1, 2, ...]: both 1/1 and 2/1 have denominator 1.
        assert_eq!(
            convergents_below(&big(3), &big(2)).unwrap(),
            vec![(big(1), big(1)), (big(2), big(1))]
        );
        let want: Vec<_> = [(1, 1), (3, 2), (7, 5), (17, 12)]
            .iter()
            .map(|&(p, q)| (big(p), big(q)))
            .collect();
        assert_eq!(convergents_below(&big(2), &big(13)).unwrap(), want);
    }

    #[test]
    fn fundamental_solutions() {
        let f = |d| {
            let s = fundamental_solution(&big(d)).unwrap();
            (s.x1, s.y1)
        };
        assert_eq!(f(3), (big(2), big(1)));
        assert_eq!(f(2), (big(3), big(2)));
        assert_eq!(f(5), (big(9), big(4)));
        assert_eq!(f(61), (big(1766319049), big(226153980)));
        assert!(fundamental_solution(&big(16)).is_err());
    }

    #[test]
    fn fundamental_solution_is_minimal_by_brute_force() {
        for d in 2..400u64 {
            if is_square(d) {
                continue;
            }
            let s = fundamental_solution(&big(d as i64)).unwrap();
            assert!(s.is_solution());
            let y1 = u64::try_from(&s.y1).unwrap_or(u64::MAX);
            // no smaller y works
            for y in 1..y1.min(200_000) {
                assert!(!is_square(d * y * y + 1), "d={d} y={y}");
            }
        }
    }

    #[test]
    fn unit_logarithms() {
        // 40-digit reference values.
        let cases = [
            (3, 1.316_957_896_924_816_7),
            (2, 1.762_747_174_039_086),
            (5, 2.887_270_950_357_620_7),
        ];
        for (d, want) in cases {
            let s = fundamental_solution(&big(d)).unwrap();
            let got = log_unit(&s, DEFAULT_LOG_PRECISION).to_f64();
            assert!((got - want).abs() < 1e-15, "d={d} got {got}");
        }
        // Tighter: exp of the double-double value gives back 2 + √3.
        let s = fundamental_solution(&big(3)).unwrap();
        let got = log_unit(&s, DEFAULT_LOG_PRECISION);
        let back = got.exp() - Real::from_f64(2.0) - Real::sqrt_bigint(&big(3));
        assert!(back.to_f64().abs() < 1e-28, "{back:?}");
    }

    #[test]
    fn log_gap_to_two_y_root_d() {
        for d in 2..2000i64 {
            if is_square(d as u64) {
                continue;
            }
            let s = fundamental_solution(&big(d)).unwrap();
            let r = log_unit(&s, DEFAULT_LOG_PRECISION);
            let approx =
                Real::LN2 + Real::from_f64(d as f64).ln().ldexp(-1) + Real::ln_bigint(&s.y1);
            let gap = (r - approx).to_f64();
            let y1 = Real::from_bigint_scaled(&s.y1);
            // upper bound 1/(2 d y1^2), generous slack for roundoff
            let ub = if y1.1 > 400 {
                0.0
            } else {
                let yf = Real::from_bigint(&s.y1).to_f64();
                1.0 / (2.0 * d as f64 * yf * yf)
            };
            assert!(
                gap >= -1e-25 && gap <= ub + 1e-25,
                "d={d} gap={gap} ub={ub}"
            );
        }
    }

    #[test]
    fn modular_powers() {
        let m = big(1_000_000_000);
        assert_eq!(
            pell_power_mod(&big(2), &big(1), 2, &big(3), &m),
            (big(7), big(4))
        );
        assert_eq!(
            pell_power_mod(&big(2), &big(1), 3, &big(3), &m),
            (big(26), big(15))
        );
        assert_eq!(
            pell_power_mod(&big(2), &big(1), 1, &big(3), &big(5)),
            (big(2), big(1))
        );
    }

    #[test]
    fn exact_powers() {
        let s3 = fundamental_solution(&big(3)).unwrap();
        assert_eq!(
            pell_power_exact(&s3, 4, DEFAULT_EXACT_DIGIT_LIMIT).unwrap(),
            (big(97), big(56))
        );
        let s2 = fundamental_solution(&big(2)).unwrap();
        assert_eq!(
            pell_power_exact(&s2, 2, DEFAULT_EXACT_DIGIT_LIMIT).unwrap(),
            (big(17), big(12))
        );
        let (x18, y18) = pell_power_exact(&s3, 18, DEFAULT_EXACT_DIGIT_LIMIT).unwrap();
        assert_eq!(x18, big(9_863_382_151));
        let b = crate::smooth::gen_basis(100).unwrap();
        assert!(crate::smooth::is_smooth(&(&x18 * &x18 - 1), &b).unwrap());
        assert_eq!(&x18 * &x18 - 3 * &y18 * &y18, big(1));
        assert!(matches!(
            pell_power_exact(&s3, 1000, 10),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn lucas_sequence_structure() {
        for d in [2i64, 3, 5, 6, 7, 10, 13, 29] {
            let s = fundamental_solution(&big(d)).unwrap();
            let mut u = vec![big(0), big(1)];
            for n in 1..20u64 {
                let (xn, yn) = pell_power_exact(&s, n, DEFAULT_EXACT_DIGIT_LIMIT).unwrap();
                assert_eq!(&xn * &xn - big(d) * &yn * &yn, big(1));
                let (q, r) = yn.div_rem(&s.y1);
                assert!(r.is_zero(), "y1 | y_n");
                assert_eq!(q, u[n as usize]);
                let next = 2u32 * &s.x1 * &u[n as usize] - &u[n as usize - 1];
                u.push(next);
            }
            assert_eq!(u[2], 2u32 * &s.x1);
        }
    }

    #[test]
    fn primitive_divisor_congruence() {
        for d in [2i64, 3, 5, 6, 7] {
            let s = fundamental_solution(&big(d)).unwrap();
            for n in 13..=20u64 {
                let (_, yn) = pell_power_exact(&s, n, DEFAULT_EXACT_DIGIT_LIMIT).unwrap();
                let un = yn / &s.y1;
                let found = (2..200_000u64)
                    .filter(|p| (p % n == 1 || p % n == n - 1) && crate::smooth::is_small_prime(*p))
                    .any(|p| (&un % p).is_zero());
                assert!(found, "d={d} n={n}: no prime ≡ ±1 mod n divides u_n");
            }
        }
    }

    #[test]
    fn tower_index_recovers_n() {
        let s3 = fundamental_solution(&big(3)).unwrap();
        for n in 1..12u64 {
            let (x, y) = pell_power_exact(&s3, n, DEFAULT_EXACT_DIGIT_LIMIT).unwrap();
            assert_eq!(tower_index(&x, &y, &big(3)).unwrap(), Some(n));
        }
        assert_eq!(tower_index(&big(6), &big(1), &big(35)).unwrap(), Some(1));
    }

    #[test]
    fn quadint_invariants() {
        let d = big(5);
        assert!(QuadInt::new(big(1), big(1), 2, &d).is_some());
        assert!(QuadInt::new(big(1), big(2), 2, &d).is_none());
        let phi = QuadInt::new(big(1), big(1), 2, &d).unwrap();
        let sq = phi.mul(&phi, &d).unwrap();
        assert_eq!(
            sq,
            QuadInt {
                a: big(3),
                b: big(1),
                denom: 2
            }
        );
        assert_eq!(sq.scaled_norm(&d), big(4)); // N = 1
        let unit = QuadInt::integral(big(9), big(-4));
        let l = unit.ln_abs(&d, Real::sqrt_bigint(&d)).to_f64();
        assert!((l + 2.887_270_950_357_620_7).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn modular_power_matches_exact(d in 2i64..50, n in 1u64..20, m in 2i64..1_000_000_000) {
            prop_assume!(!is_square(d as u64));
            let s = fundamental_solution(&big(d)).unwrap();
            let m = big(m);
            let (x, y) = pell_power_exact(&s, n, DEFAULT_EXACT_DIGIT_LIMIT).unwrap();
            let got = pell_power_mod(&(&s.x1 % &m), &(&s.y1 % &m), n, &big(d), &m);
            prop_assert_eq!(got, (x.mod_floor(&m), y.mod_floor(&m)));
        }
    }
}
