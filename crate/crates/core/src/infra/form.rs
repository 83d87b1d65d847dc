use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::QuadRational;
use crate::error::{Error, Result};
use crate::real::{Real, OP_EPS};

/// Logarithmic position on the cycle with an accumulated error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Distance {
    pub value: Real,
    pub err: f64,
}

impl Distance {
    pub const ZERO: Distance = Distance {
        value: Real::ZERO,
        err: 0.0,
    };

    fn shifted(self, inc: Real) -> Distance {
        let v = self.value + inc;
        Distance {
            value: v,
            err: self.err + OP_EPS * (v.to_f64().abs() + 4.0 * inc.to_f64().abs() + 1.0),
        }
    }
}

/// A reduced indefinite form `(a, b, c)` with `b² − 4ac = 4d`, carrying the
/// distance of its ideal from the unit ideal.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub distance: Distance,
}

impl ReducedForm {
    /// `(|a|, b)`: identifies the ideal independently of the generator sign.
    pub fn ideal_key(&self) -> (BigInt, BigInt) {
        (self.a.abs(), self.b.clone())
    }
}

/// Per-discriminant context: `d`, `Δ = 4d`, `⌊√Δ⌋` and `√Δ`.
#[derive(Clone, Debug)]
pub struct Infra {
    d: BigInt,
    delta: BigInt,
    isqrt_delta: BigInt,
    sqrt_delta: Real,
}

impl Infra {
    pub fn new(d: &BigInt) -> Result<Infra> {
        let r = d.sqrt();
        if d < &BigInt::from(2) || &r * &r == *d {
            return Err(Error::InvalidModulus(d.clone()));
        }
        let delta: BigInt = d * 4u32;
        Ok(Infra {
            d: d.clone(),
            isqrt_delta: delta.sqrt(),
            sqrt_delta: Real::sqrt_bigint(&delta),
            delta,
        })
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn delta(&self) -> &BigInt {
        &self.delta
    }

    /// `√d` to double-double precision.
    pub fn sqrt_d(&self) -> Real {
        self.sqrt_delta.ldexp(-1)
    }

    /// Reducedness with integer comparisons only:
    /// `0 < b < √Δ` and `√Δ − b < 2|a| < √Δ + b`.
    pub fn is_reduced(&self, a: &BigInt, b: &BigInt) -> bool {
        let s = &self.isqrt_delta;
        let two_a: BigInt = a.abs() * 2u32;
        b.is_positive() && b <= s && s < &(&two_a + b) && &(&two_a - b) <= s
    }

    fn c_of(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let (c, r) = (b * b - &self.delta).div_rem(&(a * 4u32));
        debug_assert!(r.is_zero(), "discriminant mismatch");
        c
    }

    /// The unique `b' ≡ b (mod 2|c|)` in the normalization window for `c`.
    fn normalize_b(&self, b: &BigInt, c: &BigInt) -> BigInt {
        let two_c: BigInt = c.abs() * 2u32;
        if c.abs() <= self.isqrt_delta {
            // √Δ − 2|c| < b' < √Δ
            &self.isqrt_delta - (&self.isqrt_delta - b).mod_floor(&two_c)
        } else {
            // −|c| < b' <= |c|
            let r = b.mod_floor(&two_c);
            if r > c.abs() {
                r - two_c
            } else {
                r
            }
        }
    }

    /// `log |(b + √Δ) / (2a)|`, the distance gained by a rho step from
    /// `(a, b, c)`.
    fn step_log(&self, a: &BigInt, b: &BigInt, c: &BigInt) -> Real {
        if b.is_negative() {
            // |b + √Δ| = 4|ac| / (|b| + √Δ)
            let num = Real::from_bigint(&(c.abs() * 2u32));
            (num / (Real::from_bigint(&b.abs()) + self.sqrt_delta)).ln()
        } else {
            let den = Real::from_bigint(&(a.abs() * 2u32));
            ((Real::from_bigint(b) + self.sqrt_delta) / den).ln()
        }
    }

    /// The principal form `(1, 2⌊√d⌋, ⌊√d⌋² − d)` at distance 0.
    pub fn principal_form(&self) -> ReducedForm {
        let a0 = self.d.sqrt();
        ReducedForm {
            a: BigInt::one(),
            b: &a0 * 2u32,
            c: &a0 * &a0 - &self.d,
            distance: Distance::ZERO,
        }
    }

    pub(crate) fn rho_tracked(
        &self,
        f: &ReducedForm,
        track: Option<&mut QuadRational>,
    ) -> ReducedForm {
        let inc = self.step_log(&f.a, &f.b, &f.c);
        if let Some(t) = track {
            let p: BigInt = &f.b / 2u32;
            t.mul_step(&p, &f.a.abs(), &self.d);
        }
        let a = f.c.clone();
        let b = self.normalize_b(&-&f.b, &a);
        let c = self.c_of(&a, &b);
        ReducedForm {
            a,
            b,
            c,
            distance: f.distance.shifted(inc),
        }
    }

    /// Baby step: the next form on the cycle.
    pub fn rho(&self, f: &ReducedForm) -> ReducedForm {
        self.rho_tracked(f, None)
    }

    pub(crate) fn rho_inv_tracked(
        &self,
        f: &ReducedForm,
        track: Option<&mut QuadRational>,
    ) -> ReducedForm {
        let c = f.a.clone();
        let b = self.normalize_b(&-&f.b, &c);
        let a = self.c_of(&c, &b);
        let dec = self.step_log(&a, &b, &c);
        if let Some(t) = track {
            let p: BigInt = &b / 2u32;
            t.div_step(&p, &a.abs(), &self.d);
        }
        ReducedForm {
            a,
            b,
            c,
            distance: f.distance.shifted(-dec),
        }
    }

    /// The previous form on the cycle of a reduced form.
    pub fn rho_inv(&self, f: &ReducedForm) -> ReducedForm {
        self.rho_inv_tracked(f, None)
    }

    /// Gauss composition of the ideals of `f` and `g` (not reduced). The
    /// product ideal is `d1` times the ideal of the result; the distance
    /// accounts for that factor.
    pub(crate) fn compose(
        &self,
        f: &ReducedForm,
        g: &ReducedForm,
        track: Option<&mut QuadRational>,
    ) -> ReducedForm {
        let sign = f.a.signum() * g.a.signum();
        let pos = |h: &ReducedForm| {
            let a = h.a.abs();
            let c = self.c_of(&a, &h.b);
            (a, h.b.clone(), c)
        };
        let (mut p1, mut p2) = (pos(f), pos(g));
        if p1.0 > p2.0 {
            std::mem::swap(&mut p1, &mut p2);
        }
        let (a1, b1, _) = p1;
        let (a2, b2, c2) = p2;
        let s: BigInt = (&b1 + &b2) / 2u32;
        let n = &b2 - &s;
        let (y1, dd) = if (&a2 % &a1).is_zero() {
            (BigInt::zero(), a1.clone())
        } else {
            let eg = a2.extended_gcd(&a1);
            (eg.x, eg.gcd)
        };
        let (x2, y2, d1) = if (&s % &dd).is_zero() {
            (BigInt::zero(), -BigInt::one(), dd)
        } else {
            let eg = s.extended_gcd(&dd);
            (eg.x, -eg.y, eg.gcd)
        };
        let v1 = &a1 / &d1;
        let v2 = &a2 / &d1;
        let r = (&y1 * &y2 * &n - &x2 * &c2).mod_floor(&v1);
        let b3 = &b2 + 2u32 * &v2 * &r;
        let a3 = &v1 * &v2;
        let c3 = self.c_of(&a3, &b3);
        if let Some(t) = track {
            t.div_int(&d1);
        }
        let value = f.distance.value + g.distance.value - Real::ln_bigint(&d1);
        let err = f.distance.err
            + g.distance.err
            + OP_EPS * (value.to_f64().abs() + Real::ln_bigint(&d1).to_f64() + 4.0);
        ReducedForm {
            a: &a3 * &sign,
            b: b3,
            c: c3 * &sign,
            distance: Distance { value, err },
        }
    }

    /// Apply rho until the form is reduced. Returns the number of steps.
    pub(crate) fn reduce_tracked(
        &self,
        mut f: ReducedForm,
        mut track: Option<&mut QuadRational>,
    ) -> (ReducedForm, u64) {
        let mut steps = 0;
        while !self.is_reduced(&f.a, &f.b) {
            f = self.rho_tracked(&f, track.as_deref_mut());
            steps += 1;
        }
        (f, steps)
    }

    /// Giant step: compose and reduce. The result lies on the cycle near
    /// `distance(f) + distance(g)`, at its exactly tracked distance.
    pub fn giant_step(&self, f: &ReducedForm, g: &ReducedForm) -> ReducedForm {
        self.giant_step_counted(f, g).0
    }

    pub(crate) fn giant_step_counted(
        &self,
        f: &ReducedForm,
        g: &ReducedForm,
    ) -> (ReducedForm, u64) {
        let (r, steps) = self.reduce_tracked(self.compose(f, g, None), None);
        (r, steps + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Roots;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn infra(d: i64) -> Infra {
        Infra::new(&big(d)).unwrap()
    }

    fn check(inf: &Infra, f: &ReducedForm) {
        assert_eq!(
            &f.b * &f.b - 4u32 * &f.a * &f.c,
            *inf.delta(),
            "discriminant"
        );
        assert!(inf.is_reduced(&f.a, &f.b), "not reduced: {:?}", f);
    }

    /// The principal cycle up to the first return of `|a| = 1`, which is at
    /// the log of the fundamental unit (of either norm).
    fn ideal_cycle(inf: &Infra) -> Vec<ReducedForm> {
        let p = inf.principal_form();
        let mut out = vec![p.clone()];
        let mut f = inf.rho(&p);
        while !f.a.abs().is_one() {
            out.push(f.clone());
            f = inf.rho(&f);
        }
        out.push(f);
        out
    }

    /// The cycle up to the first return to the principal form with a
    /// positive generator.
    fn cycle(inf: &Infra) -> Vec<ReducedForm> {
        let p = inf.principal_form();
        let mut out = vec![p.clone()];
        let mut f = inf.rho(&p);
        while !(f.a == BigInt::one() && f.b == p.b) {
            out.push(f.clone());
            f = inf.rho(&f);
        }
        out.push(f);
        out
    }

    #[test]
    fn principal_forms() {
        let f = infra(3).principal_form();
        assert_eq!((f.a, f.b, f.c), (big(1), big(2), big(-2)));
        let f = infra(2).principal_form();
        assert_eq!((f.a, f.b, f.c), (big(1), big(2), big(-1)));
        for d in [2, 3, 5, 7, 30, 1001] {
            let inf = infra(d);
            let f = inf.principal_form();
            assert_eq!(f.distance.value, Real::ZERO);
            check(&inf, &f);
        }
    }

    #[test]
    fn cycle_closes_at_log_of_pell_unit() {
        // The signed cycle closes at log(x1 + y1 √d) itself.
        for (d, want) in [(3, 1.316_957_896_924_816_7), (2, 1.762_747_174_039_086)] {
            let inf = infra(d);
            let c = cycle(&inf);
            let last = c.last().unwrap();
            assert!((last.distance.value.to_f64() - want).abs() < 1e-15, "d={d}");
        }
    }

    #[test]
    fn steps_positive_and_bounded() {
        for d in [2i64, 3, 5, 6, 7, 13, 94, 109, 991, 4099, 30030] {
            let inf = infra(d);
            let bound = (4.0 * d as f64).ln();
            let mut f = inf.principal_form();
            for _ in 0..200 {
                let g = inf.rho(&f);
                check(&inf, &g);
                let inc = (g.distance.value - f.distance.value).to_f64();
                assert!(inc > 0.0 && inc < bound, "d={d} inc={inc}");
                // two steps gain more than log 2
                let h = inf.rho(&g);
                assert!((h.distance.value - f.distance.value).to_f64() > std::f64::consts::LN_2);
                f = g;
            }
        }
    }

    #[test]
    fn rho_inverse_undoes_rho() {
        for d in [2i64, 3, 7, 19, 1234567] {
            let inf = infra(d);
            let mut f = inf.principal_form();
            for _ in 0..50 {
                let g = inf.rho(&f);
                let back = inf.rho_inv(&g);
                assert_eq!((&back.a, &back.b, &back.c), (&f.a, &f.b, &f.c));
                assert!((back.distance.value - f.distance.value).to_f64().abs() < 1e-25);
                f = g;
            }
        }
    }

    /// Locate a form on the explicitly walked cycle; returns (index, distance).
    fn find(c: &[ReducedForm], f: &ReducedForm) -> Option<(usize, f64)> {
        c.iter()
            .position(|g| g.ideal_key() == f.ideal_key())
            .map(|i| (i, c[i].distance.value.to_f64()))
    }

    #[test]
    fn giant_steps_agree_with_baby_walk() {
        // Independent oracle: the explicitly walked cycle and its distances.
        for d in [7i64, 46, 94, 151, 331, 1_009, 4_099, 9_949, 9_973] {
            let inf = infra(d);
            let c = ideal_cycle(&inf);
            let r = c.last().unwrap().distance.value.to_f64();
            let lim = (4.0 * d as f64).ln();
            // identity
            for f in c.iter().take(c.len() - 1) {
                let g = inf.giant_step(&inf.principal_form(), f);
                check(&inf, &g);
                let (_, dist) = find(&c, &g).expect("on cycle");
                let got = g.distance.value.to_f64();
                assert!((got - f.distance.value.to_f64()).abs() < lim);
                // tracked distance agrees with the cycle position modulo R
                let k = ((got - dist) / r).round();
                assert!((got - dist - k * r).abs() < 1e-9, "d={d}");
            }
            // doubling
            for f in c.iter().take(c.len() - 1) {
                let g = inf.giant_step(f, f);
                check(&inf, &g);
                let got = g.distance.value.to_f64();
                assert!((got - 2.0 * f.distance.value.to_f64()).abs() < lim, "d={d}");
                let (_, dist) = find(&c, &g).expect("on cycle");
                let k = ((got - dist) / r).round();
                assert!(
                    (got - dist - k * r).abs() < 1e-9,
                    "d={d} got={got} dist={dist} r={r}"
                );
            }
        }
    }

    #[test]
    fn giant_steps_associate_up_to_rho_adjustment() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let d = loop {
                let d: i64 = rng.gen_range(2..10_000);
                if (d as u64).sqrt().pow(2) != d as u64 {
                    break d;
                }
            };
            let inf = infra(d);
            let c = ideal_cycle(&inf);
            let r = c.last().unwrap().distance.value.to_f64();
            let n = c.len() - 1;
            let pick = |rng: &mut rand_chacha::ChaCha8Rng| c[rng.gen_range(0..n)].clone();
            let (f, g, h) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let left = inf.giant_step(&inf.giant_step(&f, &g), &h);
            let right = inf.giant_step(&f, &inf.giant_step(&g, &h));
            let (il, dl) = find(&c, &left).unwrap();
            let (ir, dr) = find(&c, &right).unwrap();
            // Both land on the cycle; their tracked distances are consistent
            // with the positions they landed on.
            let dlv = left.distance.value.to_f64();
            let drv = right.distance.value.to_f64();
            for (got, pos) in [(dlv, dl), (drv, dr)] {
                let k = ((got - pos) / r).round();
                assert!((got - pos - k * r).abs() < 1e-9);
            }
            // And they are within a few steps of each other.
            let lim = 3.0 * (4.0 * d as f64).ln();
            assert!((dlv - drv).abs() < lim, "d={d} {il} {ir}");
        }
    }

    #[test]
    fn rejects_squares() {
        assert!(Infra::new(&big(49)).is_err());
        assert!(Infra::new(&big(1)).is_err());
    }
}
