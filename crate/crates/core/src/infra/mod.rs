//! Infrastructure of the principal cycle of reduced forms of discriminant
//! `4d`, used to compute the regulator without expanding the fundamental
//! unit and to build a compact representation of it.
//!
//! A form `(a, b, c)` stands for the ideal `[|a|, −b/2 + √d]` together with a
//! generator `γ` of that ideal, of which only `log|γ|` (the distance) is
//! tracked. The sign of `a` is the sign of `N(γ)`; this is what lets the
//! regulator search tell a norm −1 unit from a norm +1 unit without ever
//! evaluating either.

mod compact;
mod form;
mod regulator;

pub use compact::{compact_rep_build, CompactPart, CompactRep};
pub use form::{Distance, Infra, ReducedForm};
pub use regulator::{regulator_bsgs, Regulator, DEFAULT_GIANT_STEP_BUDGET};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Exact element `(e + f√d) / g` of `Q(√d)`, kept in lowest terms with
/// `g > 0`. Used to record relative generators while walking the cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct QuadRational {
    pub e: BigInt,
    pub f: BigInt,
    pub g: BigInt,
}

impl QuadRational {
    pub fn one() -> QuadRational {
        QuadRational {
            e: BigInt::one(),
            f: BigInt::zero(),
            g: BigInt::one(),
        }
    }

    fn normalize(&mut self) {
        if self.g.is_negative() {
            self.e = -&self.e;
            self.f = -&self.f;
            self.g = -&self.g;
        }
        let h = self.e.gcd(&self.f).gcd(&self.g);
        if !h.is_one() && !h.is_zero() {
            self.e /= &h;
            self.f /= &h;
            self.g /= &h;
        }
    }

    /// Multiply by `(p + √d) / q`.
    pub fn mul_step(&mut self, p: &BigInt, q: &BigInt, d: &BigInt) {
        let e = &self.e * p + &self.f * d;
        let f = &self.e + &self.f * p;
        self.e = e;
        self.f = f;
        self.g *= q;
        self.normalize();
    }

    /// Divide by `(p + √d) / q`.
    pub fn div_step(&mut self, p: &BigInt, q: &BigInt, d: &BigInt) {
        // q / (p + √d) = q (p − √d) / (p² − d)
        let e = (&self.e * p - &self.f * d) * q;
        let f = (&self.f * p - &self.e) * q;
        self.e = e;
        self.f = f;
        self.g *= p * p - d;
        self.normalize();
    }

    pub fn div_int(&mut self, t: &BigInt) {
        self.g *= t;
        self.normalize();
    }

    /// Sign of the real value `e + f√d`.
    pub fn is_negative(&self, d: &BigInt) -> bool {
        match (self.e.is_negative(), self.f.is_negative()) {
            (false, false) => false,
            (true, true) => true,
            // opposite signs: compare e² with d f²
            (e_neg, _) => {
                let e2 = &self.e * &self.e;
                let f2 = d * &self.f * &self.f;
                if e2 > f2 {
                    e_neg
                } else {
                    !e_neg
                }
            }
        }
    }
}
