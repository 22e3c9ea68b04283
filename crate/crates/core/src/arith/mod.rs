//! Exact integer utilities.

mod residue;

pub use residue::{residue_search, MultiPoly, ResidueSystem};

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Arbitrary-precision signed integer used throughout the crate.
pub type Integer = BigInt;

/// Quadratic residues mod 64, as a bitmask.
const SQUARES_MOD_64: u64 = {
    let mut mask = 0u64;
    let mut i = 0;
    while i < 64 {
        mask |= 1 << ((i * i) % 64);
        i += 1;
    }
    mask
};

/// Returns the nonnegative square root of `n` if `n` is a perfect square.
pub fn is_perfect_square(n: &Integer) -> Option<Integer> {
    match n.sign() {
        Sign::Minus => None,
        Sign::NoSign => Some(Integer::zero()),
        Sign::Plus => {
            let low = n.iter_u64_digits().next().unwrap_or(0);
            if SQUARES_MOD_64 & (1 << (low & 63)) == 0 {
                return None;
            }
            let r = n.sqrt();
            (&r * &r == *n).then_some(r)
        }
    }
}

/// Largest `r` with `r^2 <= n`.
pub fn floor_sqrt(n: &Integer) -> Result<Integer> {
    if n.is_negative() {
        return Err(Error::NegativeSqrt(n.to_string()));
    }
    Ok(n.sqrt())
}

/// Fixed-width twin of [`is_perfect_square`] for the hot loops of the box solvers.
pub fn is_perfect_square_i128(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    if SQUARES_MOD_64 & (1 << (n & 63)) == 0 {
        return None;
    }
    let r = isqrt_i128(n);
    (r * r == n).then_some(r)
}

/// Floor square root for nonnegative `i128`.
pub fn isqrt_i128(n: i128) -> i128 {
    debug_assert!(n >= 0);
    (n as u128).isqrt() as i128
}

/// All ordered pairs `(d, e)` with `d * e = n`, negative divisors included.
///
/// Pairs are sorted by `d`.
pub fn divisor_pairs(n: &Integer) -> Result<Vec<(Integer, Integer)>> {
    if n.is_zero() {
        return Err(Error::ZeroDivisors);
    }
    let positive = positive_divisors(&n.abs());
    let mut pairs = Vec::with_capacity(positive.len() * 2);
    for d in &positive {
        let e = n / d;
        pairs.push((-d.clone(), -e.clone()));
        pairs.push((d.clone(), e));
    }
    pairs.sort();
    Ok(pairs)
}

/// Positive divisors of `m > 0` in increasing order, by trial division.
pub fn positive_divisors(m: &Integer) -> Vec<Integer> {
    debug_assert!(m.is_positive());
    if let Some(small) = m.to_u64() {
        return positive_divisors_u64(small).into_iter().map(Integer::from).collect();
    }
    let mut low = Vec::new();
    let mut high = Vec::new();
    let mut d = Integer::from(1);
    while &d * &d <= *m {
        if (m % &d).is_zero() {
            let q = m / &d;
            if q != d {
                high.push(q);
            }
            low.push(d.clone());
        }
        d += 1;
    }
    low.extend(high.into_iter().rev());
    low
}

pub fn positive_divisors_u64(m: u64) -> Vec<u64> {
    debug_assert!(m > 0);
    let mut low = Vec::new();
    let mut high = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= m {
        if m.is_multiple_of(d) {
            if m / d != d {
                high.push(m / d);
            }
            low.push(d);
        }
        d += 1;
    }
    low.extend(high.into_iter().rev());
    low
}

/// Number of positive divisors of `m > 0`.
pub fn divisor_count(m: &Integer) -> usize {
    positive_divisors(m).len()
}

/// Euclidean remainder in `[0, m)`.
pub fn mod_floor_u64(n: &Integer, m: u64) -> u64 {
    use num_integer::Integer as _;
    n.mod_floor(&Integer::from(m)).to_u64().expect("remainder fits modulus")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> Integer {
        Integer::from(v)
    }

    #[test]
    fn square_detection() {
        assert_eq!(is_perfect_square(&int(0)), Some(int(0)));
        assert_eq!(is_perfect_square(&int(144)), Some(int(12)));
        assert_eq!(is_perfect_square(&int(12)), None);
        assert_eq!(is_perfect_square(&int(-4)), None);
        let big = Integer::from(10).pow(40u32) + 1;
        assert_eq!(is_perfect_square(&big), None);
        assert_eq!(is_perfect_square(&(&big - 1)), Some(Integer::from(10).pow(20u32)));
    }

    #[test]
    fn floor_sqrt_examples() {
        assert_eq!(floor_sqrt(&int(0)).unwrap(), int(0));
        assert_eq!(floor_sqrt(&int(15)).unwrap(), int(3));
        assert_eq!(
            floor_sqrt(&Integer::from(10).pow(40u32)).unwrap(),
            Integer::from(10).pow(20u32)
        );
        assert!(matches!(floor_sqrt(&int(-1)), Err(Error::NegativeSqrt(_))));
    }

    #[test]
    fn divisor_pair_examples() {
        let three: Vec<_> = divisor_pairs(&int(3)).unwrap();
        let expect = vec![(int(-3), int(-1)), (int(-1), int(-3)), (int(1), int(3)), (int(3), int(1))];
        assert_eq!(three, expect);

        let one = divisor_pairs(&int(1)).unwrap();
        assert_eq!(one, vec![(int(-1), int(-1)), (int(1), int(1))]);

        let m12 = divisor_pairs(&int(-12)).unwrap();
        assert_eq!(m12.len(), 12);
        assert!(m12.contains(&(int(-2), int(6))));
        assert!(m12.contains(&(int(6), int(-2))));

        assert_eq!(divisor_pairs(&int(0)), Err(Error::ZeroDivisors));
    }

    #[test]
    fn i128_square_agrees_with_bigint() {
        for n in -50i128..5000 {
            let big = is_perfect_square(&Integer::from(n)).map(|r| r.to_i128().unwrap());
            assert_eq!(is_perfect_square_i128(n), big, "n = {n}");
        }
        let r = 3_037_000_499i128;
        assert_eq!(is_perfect_square_i128(r * r), Some(r));
        assert_eq!(is_perfect_square_i128(r * r + 1), None);
    }
}
