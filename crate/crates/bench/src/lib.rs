//! Shared inputs for the benchmarks.

use num_bigint::BigInt;
use stormer_core::smooth::gen_basis;

/// Moduli of growing regulator size: products of the first primes.
pub fn sample_moduli() -> Vec<BigInt> {
    let basis = gen_basis(41).expect("valid bound");
    [0b11u64, 0b1011, 0b1_0110_1101, 0b1_1111_1111_1111]
        .iter()
        .map(|&m| basis.subset_product(m))
        .collect()
}
