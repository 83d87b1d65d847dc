use crate::smooth::{is_smooth_u64, SmoothBasis};

/// Every `2 <= x <= limit` with `x² − 1 = (x − 1)(x + 1)` smooth, by trial
/// division of both factors.
pub fn brute_force_oracle(limit: u64, basis: &SmoothBasis) -> Vec<u64> {
    let primes = basis.primes();
    let mut out = Vec::new();
    // s(x − 1), s(x) for the current x; each value is tested once
    let (mut s_prev, mut s_cur) = (true, is_smooth_u64(2, primes));
    for x in 2..=limit {
        let s_next = is_smooth_u64(x + 1, primes);
        if s_prev && s_next {
            out.push(x);
        }
        s_prev = s_cur;
        s_cur = s_next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::gen_basis;

    #[test]
    fn examples() {
        let b23 = gen_basis(3).unwrap();
        assert_eq!(brute_force_oracle(10, &b23), vec![2, 3, 5, 7]);
        assert_eq!(brute_force_oracle(50, &b23), vec![2, 3, 5, 7, 17]);
        assert_eq!(brute_force_oracle(3, &gen_basis(2).unwrap()), vec![3]);
        assert!(brute_force_oracle(1, &b23).is_empty());
    }
}
