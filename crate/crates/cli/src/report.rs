//! Human-readable summary of a complete solution set. Sections always come
//! in the same order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use stormer_core::corollaries::DABROWSKI_CONJECTURED;
use stormer_core::{Result, SolutionSet};

/// Rows of the consecutive-run table.
pub const RUN_TABLE_ROWS: u64 = 8;

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

pub fn render_report(set: &SolutionSet) -> Result<String> {
    let mut s = String::new();
    let w = &mut s;
    let basis = &set.basis;
    let odd = set.records.iter().filter(|r| r.x.is_odd()).count();

    writeln!(w, "# solutions of P(x^2 - 1) <= {}", basis.bound()).unwrap();
    writeln!(
        w,
        "basis: {} primes, {} .. {}",
        basis.len(),
        basis.primes()[0],
        basis.largest()
    )
    .unwrap();
    writeln!(w, "solutions: {}", set.len()).unwrap();
    writeln!(w, "odd solutions: {odd}").unwrap();
    writeln!(w, "even solutions: {}", set.len() - odd).unwrap();

    writeln!(w, "\n# largest solutions").unwrap();
    for (i, x) in set.largest(3)?.iter().enumerate() {
        writeln!(w, "{}. {x} ({} digits)", i + 1, x.to_string().len()).unwrap();
    }
    if let Some(t) = set.largest_odd()? {
        writeln!(w, "largest odd: {t}").unwrap();
    }
    if let Some(e) = set.largest_even()? {
        writeln!(w, "largest even: {e}").unwrap();
    }

    writeln!(w, "\n# power solutions: largest r with P(r^(2e) - 1) <= K").unwrap();
    let max_e = set.records.last().map_or(1, |r| r.x.bits() as u32);
    for e in 2..=max_e {
        let sols = set.power_solutions(e)?;
        let Some((r, _)) = sols.last() else { continue };
        writeln!(w, "e={e}: {} values of r, largest r = {r}", sols.len()).unwrap();
    }
    for min_root in [2u64, 3] {
        match set.largest_power_exponent(min_root)? {
            Some((e, r)) => {
                writeln!(w, "largest e with a root r >= {min_root}: e={e}, r={r}").unwrap()
            }
            None => writeln!(w, "no power solution with r >= {min_root}").unwrap(),
        }
    }

    writeln!(w, "\n# solutions over exactly the first k primes").unwrap();
    for k in 1..=basis.len() {
        let found = set.dabrowski_check(k)?;
        let mut conjectured: Vec<(BigInt, Vec<u32>)> = DABROWSKI_CONJECTURED
            .iter()
            .filter(|(_, a)| a.len() == k)
            .map(|(x, a)| (BigInt::from(*x), a.to_vec()))
            .collect();
        conjectured.sort();
        let verdict = if found == conjectured {
            "agrees"
        } else {
            "DIFFERS"
        };
        let tuples: Vec<String> = found
            .iter()
            .map(|(x, a)| format!("({x}; {})", join(a)))
            .collect();
        writeln!(
            w,
            "k={k}: {} solutions, {verdict} with the conjectured list: {}",
            found.len(),
            tuples.join(" ")
        )
        .unwrap();
    }

    // A run starting at x is built from the pairs ((t-1)/2, (t+1)/2) of odd
    // solutions t = 2x+1, 2x+3, ...; both numbers are shown.
    writeln!(w, "\n# largest x with x, x+1, ..., x+n all smooth").unwrap();
    for (n, x) in set.consecutive_table(RUN_TABLE_ROWS)? {
        match x {
            Some(x) => {
                let t: BigInt = 2u32 * &x + 1u32;
                writeln!(w, "n={n}: {x} (first pair from the odd solution {t})").unwrap()
            }
            None => writeln!(w, "n={n}: none").unwrap(),
        }
    }

    writeln!(w, "\n# consecutive smooth integers of equal parity").unwrap();
    let pairs = set.parity_pairs()?;
    if let Some((a, b)) = pairs.even {
        writeln!(w, "largest even pair: {a}, {b}").unwrap();
    }
    if let Some((a, b)) = pairs.odd {
        writeln!(w, "largest odd pair: {a}, {b}").unwrap();
    }
    if let Some(t) = set.triangular_largest()? {
        writeln!(w, "largest smooth triangular number: {t}").unwrap();
    }

    if let Some(st) = set.exponent_stats()? {
        let tie = |t: bool| if t { " (tied)" } else { "" };
        writeln!(w, "\n# exponents of x^2 - 1").unwrap();
        writeln!(
            w,
            "most primes: {} at x={}{}",
            st.max_support.value,
            st.max_support.x,
            tie(st.max_support.tied)
        )
        .unwrap();
        writeln!(
            w,
            "largest exponent sum: {} at x={}{}",
            st.max_sum.value,
            st.max_sum.x,
            tie(st.max_sum.tied)
        )
        .unwrap();
        let (p, a) = st.max_single.value;
        writeln!(
            w,
            "largest single exponent: {p}^{a} at x={}{}",
            st.max_single.x,
            tie(st.max_single.tied)
        )
        .unwrap();
    }

    writeln!(w, "\n# towers").unwrap();
    let mut per_d: BTreeMap<&BigInt, usize> = BTreeMap::new();
    for r in &set.records {
        *per_d.entry(&r.d).or_default() += 1;
    }
    if let Some(most) = per_d.values().max() {
        let ds: Vec<String> = per_d
            .iter()
            .filter(|(_, c)| *c == most)
            .map(|(d, _)| d.to_string())
            .collect();
        writeln!(w, "moduli with solutions: {}", per_d.len()).unwrap();
        writeln!(w, "most solutions for one d: {most} (d={})", ds.join(",")).unwrap();
    }
    if let Some(r) = set
        .records
        .iter()
        .max_by_key(|r| (r.n, std::cmp::Reverse(r.d.clone())))
    {
        writeln!(
            w,
            "largest tower index: n={} for d={} (x={})",
            r.n, r.d, r.x
        )
        .unwrap();
    }
    Ok(s)
}
