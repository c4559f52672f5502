//! Bernoulli numbers from the integer recurrence, and zeta at non-positive integers.

use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

/// Shared table of `B_0, B_1, ...` with `B_1 = -1/2`.
static TABLE: Lazy<RwLock<Vec<BigRational>>> =
    Lazy::new(|| RwLock::new(vec![BigRational::one()]));

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `B_n` via `sum_{j<=n} C(n+1, j) B_j = 0`.
pub fn bernoulli(n: usize) -> BigRational {
    if let Some(b) = TABLE.read().expect("bernoulli table").get(n) {
        return b.clone();
    }
    let mut table = TABLE.write().expect("bernoulli table");
    while table.len() <= n {
        let m = table.len();
        let mut s = BigRational::zero();
        for (j, b) in table.iter().enumerate() {
            s += BigRational::from_integer(binomial(m as u64 + 1, j as u64)) * b;
        }
        let next = -s / BigRational::from_integer(BigInt::from(m + 1));
        table.push(next);
    }
    table[n].clone()
}

/// `ζ(-k)` for `k >= 0`.
pub fn zeta_neg(k: u32) -> BigRational {
    if k == 0 {
        return BigRational::new(BigInt::from(-1), BigInt::from(2));
    }
    -bernoulli(k as usize + 1) / BigRational::from_integer(BigInt::from(k + 1))
}

/// Bernoulli polynomial `B_n(x)`.
pub fn bernoulli_poly(n: usize, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    let mut xp = BigRational::one();
    for j in (0..=n).rev() {
        acc += BigRational::from_integer(binomial(n as u64, j as u64)) * bernoulli(j) * &xp;
        xp *= x;
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_bernoulli_numbers() {
        assert_eq!(bernoulli(0), q(1, 1));
        assert_eq!(bernoulli(1), q(-1, 2));
        assert_eq!(bernoulli(2), q(1, 6));
        assert_eq!(bernoulli(3), q(0, 1));
        assert_eq!(bernoulli(4), q(-1, 30));
        assert_eq!(bernoulli(12), q(-691, 2730));
    }

    #[test]
    fn zeta_values() {
        assert_eq!(zeta_neg(0), q(-1, 2));
        assert_eq!(zeta_neg(1), q(-1, 12));
        assert_eq!(zeta_neg(2), q(0, 1));
        assert_eq!(zeta_neg(3), q(1, 120));
        assert_eq!(zeta_neg(5), q(-1, 252));
    }

    #[test]
    fn polynomial_matches_numbers() {
        for n in 0..10 {
            assert_eq!(bernoulli_poly(n, &q(0, 1)), bernoulli(n));
        }
        // B_2(x) = x^2 - x + 1/6
        assert_eq!(bernoulli_poly(2, &q(1, 3)), q(1, 9) - q(1, 3) + q(1, 6));
    }
}
