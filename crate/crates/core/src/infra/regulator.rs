use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::form::{Infra, ReducedForm};
use crate::error::{Error, Result};
use crate::real::Real;

/// Form operations allowed before the regulator search gives up.
pub const DEFAULT_GIANT_STEP_BUDGET: u64 = 1 << 26;

/// `log ε*`, where `ε*` is the fundamental solution of `x² − d y² = 1`.
#[derive(Clone, Debug)]
pub struct Regulator {
    pub d: BigInt,
    pub value: Real,
    pub err: f64,
    /// The fundamental unit has norm −1 and `value` is twice its logarithm.
    pub norm_minus_one: bool,
    pub form_ops: u64,
}

fn sign(f: &ReducedForm) -> i8 {
    if f.a.is_negative() {
        -1
    } else {
        1
    }
}

/// Regulator by baby steps and giant steps over the principal cycle.
///
/// Baby steps record every form with its distance. Giant steps repeatedly
/// compose with the last baby form `G`, adjusted back so that each giant
/// stride stays at most `D(G)`; a stride of at most `D(G)` cannot jump over
/// the window of recorded babies, so the first giant whose ideal matches a
/// baby at a clearly smaller offset lies exactly one cycle further. The sign
/// of the matched generators gives the norm of the unit found.
pub fn regulator_bsgs(d: &BigInt, budget: u64) -> Result<Regulator> {
    let inf = Infra::new(d)?;
    let mut ops = 0u64;
    let mut table: HashMap<(BigInt, BigInt), (Real, i8)> = HashMap::new();
    let mut cur = inf.principal_form();
    table.insert(cur.ideal_key(), (cur.distance.value, 1));
    let mut babies = 0usize;
    let mut target = 32usize;

    let finish = |value: Real, err: f64, s: i8, ops: u64| {
        let (value, err) = if s < 0 {
            (value.ldexp(1), 2.0 * err)
        } else {
            (value, err)
        };
        Ok(Regulator {
            d: d.clone(),
            value,
            err,
            norm_minus_one: s < 0,
            form_ops: ops,
        })
    };

    macro_rules! extend_babies {
        () => {
            while babies < target {
                if ops >= budget {
                    return Err(Error::RegulatorTooLarge {
                        d: d.clone(),
                        budget,
                    });
                }
                cur = inf.rho(&cur);
                ops += 1;
                babies += 1;
                if cur.a.abs().is_one() {
                    return finish(cur.distance.value, cur.distance.err, sign(&cur), ops);
                }
                table.insert(cur.ideal_key(), (cur.distance.value, sign(&cur)));
            }
        };
    }

    extend_babies!();
    let mut stride = cur.clone();
    let mut g = cur.clone();
    let mut giants = 0usize;
    loop {
        if ops >= budget {
            return Err(Error::RegulatorTooLarge {
                d: d.clone(),
                budget,
            });
        }
        let span = stride.distance.value;
        let prev = g.distance.value;
        let (mut next, n) = inf.giant_step_counted(&g, &stride);
        ops += n;
        while next.distance.value - prev > span {
            next = inf.rho_inv(&next);
            ops += 1;
        }
        while next.distance.value <= prev {
            next = inf.rho(&next);
            ops += 1;
        }
        if let Some(&(db, sb)) = table.get(&next.ideal_key()) {
            let diff = next.distance.value - db;
            if diff > span.ldexp(-1) {
                return finish(diff, 2.0 * next.distance.err, sign(&next) * sb, ops);
            }
        }
        g = next;
        giants += 1;
        if giants > babies {
            target *= 2;
            extend_babies!();
            stride = cur.clone();
        }
    }
}
