//! Exact rational arithmetic for identity checks.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type ExactRational = BigRational;

pub fn rational(numer: i64, denom: i64) -> ExactRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(n: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Generalized binomial `x (x-1) ... (x-k+1) / k!`.
///
/// Only rational `x` is supported. For integer `0 <= x < k` the product
/// contains a zero factor, so the result is 0.
pub fn binomial_exact(x: &ExactRational, k: u32) -> ExactRational {
    let mut acc = ExactRational::one();
    let mut factor = x.clone();
    for i in 1..=k {
        if factor.is_zero() {
            return ExactRational::zero();
        }
        acc = acc * &factor / integer(i as i64);
        factor -= ExactRational::one();
    }
    acc
}

/// `C(n, k)` for integer `n` (any sign) and `k`; zero when `k < 0`.
pub fn binomial_int(n: i64, k: i64) -> ExactRational {
    if k < 0 {
        return ExactRational::zero();
    }
    binomial_exact(&integer(n), k as u32)
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_choose_two() {
        assert_eq!(binomial_int(5, 2), integer(10));
    }

    #[test]
    fn choose_zero_is_one() {
        for x in [integer(0), integer(-4), rational(7, 3)] {
            assert_eq!(binomial_exact(&x, 0), integer(1));
        }
    }

    #[test]
    fn half_integer() {
        // (3/2)(1/2)/2
        assert_eq!(binomial_exact(&rational(3, 2), 2), rational(3, 8));
    }

    #[test]
    fn integer_below_k_vanishes() {
        assert_eq!(binomial_int(3, 5), integer(0));
        assert_eq!(binomial_int(0, 1), integer(0));
        assert_eq!(binomial_int(4, -1), integer(0));
    }

    #[test]
    fn negative_upper_argument() {
        // C(-1, k) = (-1)^k
        for k in 0..6 {
            let expected = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(binomial_int(-1, k), integer(expected));
        }
    }

    #[test]
    fn pascal_rule() {
        for x in -6..=12i64 {
            for k in 1..=8i64 {
                assert_eq!(binomial_int(x, k), binomial_int(x - 1, k) + binomial_int(x - 1, k - 1));
            }
        }
    }

    #[test]
    fn lowest_terms() {
        let r = rational(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
    }
}
