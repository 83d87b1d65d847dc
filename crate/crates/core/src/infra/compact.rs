use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::form::{Infra, ReducedForm};
use super::regulator::Regulator;
use super::QuadRational;
use crate::error::{Error, Result};
use crate::quadfield::QuadInt;
use crate::real::Real;

/// One level `(a + b√d) / 2` over the denominator `d_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactPart {
    pub a: BigInt,
    pub b: BigInt,
    pub denom: BigInt,
}

/// The fundamental solution as `∏_j (α_j / d_j)^(2^(k−j))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactRep {
    pub d: BigInt,
    pub parts: Vec<CompactPart>,
}

/// Tolerance for the closing distance of the ladder and for the log check.
const CLOSE_TOL: f64 = 1e-4;

fn part_from(t: &QuadRational) -> CompactPart {
    CompactPart {
        a: &t.e * 2u32,
        b: &t.f * 2u32,
        denom: t.g.clone(),
    }
}

/// Build the compact representation of `x₁ + y₁√d` from its regulator.
///
/// The ladder keeps a form at distance about `R*/2^(k−j)` on level `j`:
/// level 1 is reached by baby steps, every further level by squaring the
/// previous form and walking to the target. The relative generator of each
/// level is tracked exactly and becomes one part.
pub fn compact_rep_build(d: &BigInt, reg: &Regulator) -> Result<CompactRep> {
    let inf = Infra::new(d)?;
    let rstar = reg.value;
    let lim = Real::ln_bigint(&(d * 4u32));
    let mut k = 1i32;
    while rstar.ldexp(1 - k) > lim {
        k += 1;
    }
    let target = |j: i32| rstar.ldexp(j - k);

    let mut parts = Vec::with_capacity(k as usize);
    let mut base = inf.principal_form();
    for j in 1..=k {
        let mut theta = QuadRational::one();
        let f = if j == 1 {
            base.clone()
        } else {
            let g = inf.compose(&base, &base, Some(&mut theta));
            inf.reduce_tracked(g, Some(&mut theta)).0
        };
        let f = if j < k {
            walk_to(&inf, f, target(j), &mut theta)
        } else {
            close_cycle(&inf, f, rstar, &mut theta)?
        };
        parts.push(theta);
        base = f;
    }
    let last = parts.last_mut().expect("k >= 1");
    if last.is_negative(d) {
        last.e = -&last.e;
        last.f = -&last.f;
    }
    let rep = CompactRep {
        d: d.clone(),
        parts: parts.iter().map(part_from).collect(),
    };
    rep.check(reg)?;
    Ok(rep)
}

/// The last form with distance at most `t`, reached from `f`.
fn walk_to(inf: &Infra, mut f: ReducedForm, t: Real, theta: &mut QuadRational) -> ReducedForm {
    while f.distance.value > t {
        f = inf.rho_inv_tracked(&f, Some(theta));
    }
    loop {
        let mut th = theta.clone();
        let g = inf.rho_tracked(&f, Some(&mut th));
        if g.distance.value > t {
            return f;
        }
        f = g;
        *theta = th;
    }
}

/// Among the principal forms with positive sign near `R*`, the one whose
/// distance is closest to `R*`.
fn close_cycle(
    inf: &Infra,
    f: ReducedForm,
    rstar: Real,
    theta: &mut QuadRational,
) -> Result<ReducedForm> {
    let hi = rstar + Real::ONE;
    let lo = rstar - Real::ONE;
    let mut f = walk_to(inf, f, hi, theta);
    let mut best: Option<(f64, ReducedForm, QuadRational)> = None;
    while f.distance.value >= lo {
        if f.a.is_one() {
            let gap = (f.distance.value - rstar).to_f64().abs();
            if best.as_ref().is_none_or(|b| gap < b.0) {
                best = Some((gap, f.clone(), theta.clone()));
            }
        }
        f = inf.rho_inv_tracked(&f, Some(theta));
    }
    match best {
        Some((gap, f, t)) if gap < CLOSE_TOL => {
            *theta = t;
            Ok(f)
        }
        _ => Err(Error::Construction {
            d: inf.d().clone(),
            reason: "no principal form at distance R* on the cycle".into(),
        }),
    }
}

/// Moduli for the built-in norm check: products of primes near 2^31.
fn check_modulus() -> BigInt {
    BigInt::from(2_147_483_647u64) * BigInt::from(2_147_483_629u64) * BigInt::from(1_000_000_007u64)
}

impl CompactRep {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Size bounds: `|d_j| <= 4d`, `|a_j|, |b_j| <= 16d²`, and
    /// `k <= 2⌈log₂ R*⌉ + 8`.
    pub fn check_bounds(&self, rstar: Real) -> Result<()> {
        let dmax: BigInt = &self.d * 4u32;
        let cmax: BigInt = &self.d * &self.d * 16u32;
        for (j, p) in self.parts.iter().enumerate() {
            if p.denom.abs() > dmax || p.a.abs() > cmax || p.b.abs() > cmax {
                return Err(Error::Construction {
                    d: self.d.clone(),
                    reason: format!("level {} exceeds the coefficient bounds", j + 1),
                });
            }
        }
        let kmax = 2.0 * rstar.to_f64().log2().ceil().max(0.0) + 8.0;
        if self.len() as f64 > kmax {
            return Err(Error::Construction {
                d: self.d.clone(),
                reason: format!("{} levels exceed the bound {kmax}", self.len()),
            });
        }
        Ok(())
    }

    fn check(&self, reg: &Regulator) -> Result<()> {
        self.check_bounds(reg.value)?;
        let log = self.eval_log();
        if (log - reg.value).to_f64().abs() >= CLOSE_TOL {
            return Err(Error::Construction {
                d: self.d.clone(),
                reason: format!("logarithm {log} does not match R* = {}", reg.value),
            });
        }
        let m = check_modulus();
        let (x, y) = self.eval_mod(&m).map_err(|e| Error::Construction {
            d: self.d.clone(),
            reason: e.to_string(),
        })?;
        let norm = (&x * &x - &self.d * &y * &y).mod_floor(&m);
        if !norm.is_one() {
            return Err(Error::Construction {
                d: self.d.clone(),
                reason: "evaluated value is not a norm 1 unit".into(),
            });
        }
        Ok(())
    }

    /// `(x₁ mod m, y₁ mod m)` by the shrinking-modulus scheme: the working
    /// modulus starts as `m · ∏_{j>=2} 2d_j` and each exact division by
    /// `2d_j` divides it by the same amount.
    pub fn eval_mod(&self, m: &BigInt) -> Result<(BigInt, BigInt)> {
        if m < &BigInt::from(2) {
            return Err(Error::InvalidModulus(m.clone()));
        }
        let corrupt = |j: usize| {
            Error::CorruptRepresentation(format!("level {} is not an exact division", j + 1))
        };
        let d = &self.d;
        let first = &self.parts[0];
        let t1: BigInt = &first.denom * 2u32;
        let (x, rx) = first.a.div_rem(&t1);
        let (y, ry) = first.b.div_rem(&t1);
        if !rx.is_zero() || !ry.is_zero() {
            return Err(corrupt(0));
        }
        let mut modulus = self.parts[1..]
            .iter()
            .fold(m.clone(), |acc, p| acc * &p.denom * 2u32);
        let mut x = x.mod_floor(&modulus);
        let mut y = y.mod_floor(&modulus);
        for (j, p) in self.parts.iter().enumerate().skip(1) {
            let x2 = (&x * &x + d * &y * &y).mod_floor(&modulus);
            let y2 = (2u32 * &x * &y).mod_floor(&modulus);
            let nx = (&x2 * &p.a + d * &y2 * &p.b).mod_floor(&modulus);
            let ny = (&x2 * &p.b + &y2 * &p.a).mod_floor(&modulus);
            let t: BigInt = &p.denom * 2u32;
            let (qx, rx) = nx.div_rem(&t);
            let (qy, ry) = ny.div_rem(&t);
            if !rx.is_zero() || !ry.is_zero() {
                return Err(corrupt(j));
            }
            modulus /= &t;
            x = qx;
            y = qy;
        }
        debug_assert_eq!(&modulus, m);
        Ok((x.mod_floor(m), y.mod_floor(m)))
    }

    /// Exact expansion; only sensible for small units.
    pub fn eval_exact(&self) -> Result<(BigInt, BigInt)> {
        let d = &self.d;
        let mut x = BigInt::one();
        let mut y = BigInt::zero();
        for (j, p) in self.parts.iter().enumerate() {
            let (x2, y2) = if j == 0 {
                (BigInt::one(), BigInt::zero())
            } else {
                (&x * &x + d * &y * &y, 2u32 * &x * &y)
            };
            let nx = &x2 * &p.a + d * &y2 * &p.b;
            let ny = &x2 * &p.b + &y2 * &p.a;
            let t: BigInt = &p.denom * 2u32;
            let (qx, rx) = nx.div_rem(&t);
            let (qy, ry) = ny.div_rem(&t);
            if !rx.is_zero() || !ry.is_zero() {
                return Err(Error::CorruptRepresentation(format!(
                    "level {} is not an exact division",
                    j + 1
                )));
            }
            x = qx;
            y = qy;
        }
        Ok((x, y))
    }

    /// `Σ 2^(k−j) (log|α_j| − log d_j)`.
    pub fn eval_log(&self) -> Real {
        let sqrt_d = Real::sqrt_bigint(&self.d);
        let k = self.parts.len() as i32;
        let mut sum = Real::ZERO;
        for (j, p) in self.parts.iter().enumerate() {
            let alpha = QuadInt {
                a: p.a.clone(),
                b: p.b.clone(),
                denom: 2,
            };
            let term = alpha.ln_abs(&self.d, sqrt_d) - Real::ln_bigint(&p.denom);
            sum += term.ldexp(k - 1 - j as i32);
        }
        sum
    }
}
