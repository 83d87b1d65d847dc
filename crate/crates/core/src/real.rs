//! Double-double floating point.
//!
//! A [`Real`] is an unevaluated sum `hi + lo` of two `f64` values with
//! `|lo| <= ulp(hi) / 2`, giving roughly 106 bits of mantissa. All
//! logarithmic quantities (unit logarithms, infrastructure distances) are
//! carried in this type so that accumulated rounding stays far below the
//! tolerances used by the magnitude tests.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

/// Mantissa bits carried by a [`Real`].
pub const MANTISSA_BITS: u32 = 106;

/// Relative error bound charged per arithmetic operation or logarithm.
pub const OP_EPS: f64 = 7.888609052210118e-31; // 2^-100

#[derive(Clone, Copy, Default, PartialEq)]
pub struct Real {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Real {
    pub const ZERO: Real = Real { hi: 0.0, lo: 0.0 };
    pub const ONE: Real = Real { hi: 1.0, lo: 0.0 };
    pub const LN2: Real = Real {
        hi: std::f64::consts::LN_2,
        lo: 2.319_046_813_846_299_6e-17,
    };

    pub fn from_f64(x: f64) -> Real {
        Real { hi: x, lo: 0.0 }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_sign_negative(self) -> bool {
        self.hi < 0.0
    }

    pub fn abs(self) -> Real {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    /// Multiply by `2^k` exactly (barring overflow).
    pub fn ldexp(self, k: i32) -> Real {
        let f = 2f64.powi(k);
        Real {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    pub fn from_u128(m: u128) -> Real {
        if m >> MANTISSA_BITS != 0 {
            let shift = 128 - m.leading_zeros() - MANTISSA_BITS;
            return Real::from_u128(m >> shift).ldexp(shift as i32);
        }
        let top = (m >> 53) as f64;
        let bottom = (m & ((1u128 << 53) - 1)) as f64;
        let (hi, lo) = quick_two_sum(top * 9_007_199_254_740_992.0, bottom);
        Real { hi, lo }
    }

    /// Nearest `Real` to a big integer, together with a binary exponent:
    /// `n ≈ m · 2^shift` where `m` keeps the top `MANTISSA_BITS` bits of `n`.
    /// Used to take logarithms of integers far outside the `f64` range.
    pub fn from_bigint_scaled(n: &BigInt) -> (Real, u64) {
        let mag = n.magnitude();
        let bits = mag.bits();
        let shift = bits.saturating_sub(MANTISSA_BITS as u64);
        let top: BigUint = mag >> shift;
        let m = Real::from_u128(top.to_u128().expect("at most 106 bits"));
        let m = if n.sign() == Sign::Minus { -m } else { m };
        (m, shift)
    }

    /// Nearest `Real` to a big integer. Panics if the value overflows `f64`.
    pub fn from_bigint(n: &BigInt) -> Real {
        let (m, shift) = Real::from_bigint_scaled(n);
        let shift = i32::try_from(shift).expect("integer too large for Real");
        let r = m.ldexp(shift);
        assert!(r.hi.is_finite(), "integer too large for Real");
        r
    }

    /// Natural logarithm of a positive big integer.
    pub fn ln_bigint(n: &BigInt) -> Real {
        assert!(
            n.sign() == Sign::Plus,
            "logarithm of a non-positive integer"
        );
        let (m, shift) = Real::from_bigint_scaled(n);
        m.ln() + Real::LN2 * Real::from_f64(shift as f64)
    }

    /// Square root of a non-negative big integer, correct to the full
    /// mantissa (computed from an integer square root of a scaled value).
    pub fn sqrt_bigint(n: &BigInt) -> Real {
        assert!(n.sign() != Sign::Minus);
        if n.is_zero() {
            return Real::ZERO;
        }
        let bits = n.bits() as i64;
        // Scale so the root carries about 128 bits.
        let e = ((256 - bits) / 2).max(0);
        let scaled: BigInt = n << (2 * e) as usize;
        let root = scaled.sqrt();
        Real::from_bigint(&root).ldexp(-(e as i32))
    }

    pub fn sqrt(self) -> Real {
        if self.hi <= 0.0 {
            assert!(self.hi == 0.0, "square root of a negative Real");
            return Real::ZERO;
        }
        let q = self.hi.sqrt();
        let qr = Real::from_f64(q);
        let r = self - qr * qr;
        qr + r / Real::from_f64(2.0 * q)
    }

    pub fn exp(self) -> Real {
        if self.hi > 709.0 {
            return Real::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Real::ZERO;
        }
        let k = (self.hi / Real::LN2.hi).round();
        let r = (self - Real::LN2 * Real::from_f64(k)).ldexp(-10);
        // Taylor series on |r| < 2^-10 · ln2/2.
        let mut term = r;
        let mut sum = r;
        let mut i = 2.0;
        loop {
            term = term * r / Real::from_f64(i);
            sum += term;
            if term.hi.abs() < 1e-34 * sum.hi.abs().max(1e-300) || i > 30.0 {
                break;
            }
            i += 1.0;
        }
        // (1 + s)^(2^10) - 1 by repeated squaring of 1 + s.
        for _ in 0..10 {
            sum = sum.ldexp(1) + sum * sum;
        }
        (sum + Real::ONE).ldexp(k as i32)
    }

    /// Natural logarithm by one Newton step from the `f64` logarithm.
    pub fn ln(self) -> Real {
        assert!(self.hi > 0.0, "logarithm of a non-positive Real");
        let y = Real::from_f64(self.hi.ln());
        y + self * (-y).exp() - Real::ONE
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_f64(), f)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Real) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            o => Some(o),
        }
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Real {
    type Output = Real;
    fn add(self, b: Real) -> Real {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let e = e + t;
        let (s, e) = quick_two_sum(s, e);
        let e = e + f;
        let (hi, lo) = quick_two_sum(s, e);
        Real { hi, lo }
    }
}

impl Sub for Real {
    type Output = Real;
    fn sub(self, b: Real) -> Real {
        self + (-b)
    }
}

impl AddAssign for Real {
    fn add_assign(&mut self, b: Real) {
        *self = *self + b;
    }
}

impl SubAssign for Real {
    fn sub_assign(&mut self, b: Real) {
        *self = *self - b;
    }
}

impl Mul for Real {
    type Output = Real;
    fn mul(self, b: Real) -> Real {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Real { hi, lo }
    }
}

impl Div for Real {
    type Output = Real;
    fn div(self, b: Real) -> Real {
        let q1 = self.hi / b.hi;
        let r = self - b * Real::from_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Real::from_f64(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Real { hi: q1, lo: q2 } + Real::from_f64(q3)
    }
}

impl From<f64> for Real {
    fn from(x: f64) -> Real {
        Real::from_f64(x)
    }
}
