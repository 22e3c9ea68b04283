//! Canonical heights for `x^2 + c` on integers, integral points on
//! `Y^2 = phi^2(X)`, and the iterate bound `N = ceil(log2(B / hmin)) + 2`.
//!
//! For integer `x` and `X = max(|x|, 1)`:
//!
//! * `|x^2 + c| <= X^2 (1 + |c|)`, so `h(phi(x)) <= 2 h(x) + log(1 + |c|)`;
//! * if `X^2 >= 2|c|` then `|x^2 + c| >= X^2 / 2`, and otherwise
//!   `X^2 / (2(|c| + 1)) < 1`; either way `h(phi(x)) >= 2 h(x) - log(2(|c| + 1))`.
//!
//! Hence `|h(phi(x)) - 2 h(x)| <= C = log(|c| + 1) + log 2`, and telescoping gives
//! `|h_hat(a) - h(phi^n(a)) / 2^n| <= C / 2^n`.

use std::collections::BTreeSet;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{divisor_pairs, is_perfect_square, Integer};
use crate::dynamics::QuadraticMap;
use crate::portraits::preper_set;
use crate::{Error, Result};

pub const DEFAULT_ITERATIONS: u32 = 30;

/// Past this many bits the orbit continues in the log domain.
const EXACT_BITS: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeightEstimate {
    pub value: f64,
    /// The canonical height lies in `[value - error, value + error]`.
    pub error: f64,
    pub iterations: u32,
}

impl HeightEstimate {
    pub fn lower(&self) -> f64 {
        self.value - self.error
    }

    pub fn upper(&self) -> f64 {
        self.value + self.error
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rigor {
    Rigorous,
    /// The minimum height was taken over integers in a box, not over all of `Q`.
    BoxSearched,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinHeight {
    pub hmin: f64,
    pub argmin: Integer,
    /// Half-width of the searched box.
    pub bound: Integer,
    pub rigor: Rigor,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterateBound {
    pub n: u32,
    pub b: f64,
    pub hmin: f64,
    pub hmin_argmin: Integer,
    pub integral_points: usize,
    pub rigor: Rigor,
}

/// Natural log of `|x|` for `x != 0`, accurate to double precision.
pub fn ln_abs(x: &Integer) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return x.abs().to_f64().expect("fits").ln();
    }
    let shift = bits - 64;
    let top = (x.abs() >> shift).to_f64().expect("64-bit mantissa");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `h(x) = log max(|x|, 1)`.
pub fn naive_height(x: &Integer) -> f64 {
    if x.abs() <= Integer::one() {
        0.0
    } else {
        ln_abs(x)
    }
}

/// `C(phi) = log(|c| + 1) + log 2`.
pub fn height_constant(map: &QuadraticMap) -> f64 {
    ln_abs(&(map.c.abs() + 1)) + std::f64::consts::LN_2
}

/// `h(phi^n(a)) / 2^n` with error `C / 2^n`.
///
/// The orbit is exact until it exceeds `2^4096`; beyond that `|c| / x^2` is below
/// double precision and each step just doubles `log|x|`.
pub fn canonical_height(map: &QuadraticMap, a: &Integer, iterations: u32) -> HeightEstimate {
    let scale = 2f64.powi(iterations as i32);
    let error = (height_constant(map) / scale).next_up();
    let c_bits = map.c.bits();
    let mut x = a.clone();
    for k in 0..iterations {
        if x.bits() > EXACT_BITS && c_bits < x.bits() / 4 {
            let value = ln_abs(&x) / 2f64.powi(k as i32);
            return HeightEstimate { value, error, iterations };
        }
        x = map.eval(&x);
    }
    HeightEstimate { value: naive_height(&x) / scale, error, iterations }
}

fn reject_degenerate(map: &QuadraticMap) -> Result<()> {
    if map.c.is_zero() || map.c == -Integer::one() {
        return Err(Error::DegenerateMap { c: map.c.to_string() });
    }
    Ok(())
}

/// Every `(X, Y)` in `Z^2` with `Y^2 = (X^2 + c)^2 + c`.
///
/// `Y^2 - (X^2 + c)^2 = c` factors as `d * e = c` with `Y = (d + e) / 2` and
/// `X^2 = (e - d) / 2 - c`, so the divisor pairs of `c` give all solutions.
pub fn integral_points_on_phi2(map: &QuadraticMap) -> Result<BTreeSet<(Integer, Integer)>> {
    reject_degenerate(map)?;
    let c = &map.c;
    let mut points = BTreeSet::new();
    for (d, e) in divisor_pairs(c)? {
        let sum = &d + &e;
        if num_integer::Integer::is_odd(&sum) {
            continue;
        }
        let y: Integer = sum / 2;
        let x2: Integer = (&e - &d) / 2 - c;
        if let Some(x) = is_perfect_square(&x2) {
            points.insert((x.clone(), y.clone()));
            points.insert((-x, y));
        }
    }
    Ok(points)
}

/// Smallest lower bound `value - error` over non-preperiodic integers with
/// `|a| <= max(search_box, |c| + 1)`.
///
/// Fails if some non-preperiodic integer in the box has a nonpositive lower
/// bound, since the estimate would then not be a valid minimum.
pub fn min_positive_height(map: &QuadraticMap, search_box: &Integer, iterations: u32) -> Result<MinHeight> {
    reject_degenerate(map)?;
    let bound = search_box.abs().max(map.c.abs() + 1);
    let limit = bound
        .to_i64()
        .filter(|b| *b <= 50_000_000)
        .ok_or_else(|| Error::InvalidArgument(format!("search box {bound} too large")))?;
    let preper = preper_set(&map.c);
    let lowers: Vec<(f64, i64)> = (-limit..=limit)
        .into_par_iter()
        .filter(|a| !preper.contains(&Integer::from(*a)))
        .map(|a| (canonical_height(map, &Integer::from(a), iterations).lower(), a))
        .collect();
    if lowers.iter().any(|(h, _)| *h <= 0.0) || lowers.is_empty() {
        return Err(Error::NoPositiveHeight { bound: bound.to_string() });
    }
    let (hmin, arg) = lowers
        .into_iter()
        .min_by(|x, y| x.0.total_cmp(&y.0).then(x.1.abs().cmp(&y.1.abs())).then(x.1.cmp(&y.1)))
        .expect("nonempty");
    Ok(MinHeight { hmin, argmin: Integer::from(arg), bound, rigor: Rigor::BoxSearched })
}

/// The iterate bound for `map`: past `N` iterates, a square value forces the
/// starting integer to be preperiodic.
pub fn compute_iterate_bound(map: &QuadraticMap, search_box: &Integer, iterations: u32) -> Result<IterateBound> {
    let min = min_positive_height(map, search_box, iterations)?;
    let points = integral_points_on_phi2(map)?;
    let b = points
        .iter()
        .map(|(x, _)| canonical_height(map, x, iterations).upper())
        .fold(min.hmin, f64::max);
    let ratio = b / min.hmin;
    let n = ratio.log2().ceil().max(0.0) as u32 + 2;
    Ok(IterateBound {
        n,
        b,
        hmin: min.hmin,
        hmin_argmin: min.argmin,
        integral_points: points.len(),
        rigor: min.rigor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> Integer {
        Integer::from(v)
    }

    #[test]
    fn naive_height_examples() {
        assert_eq!(naive_height(&int(0)), 0.0);
        assert_eq!(naive_height(&int(1)), 0.0);
        assert!((naive_height(&int(100)) - 100f64.ln()).abs() < 1e-15);
        let big = Integer::from(10).pow(300u32);
        assert!((naive_height(&big) - 300.0 * 10f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn fixed_point_has_zero_height() {
        let phi = QuadraticMap::new(-12);
        for n in [1, 5, 30] {
            let h = canonical_height(&phi, &int(4), n);
            assert!(h.value <= h.error);
            assert!(h.error <= height_constant(&phi) / 2f64.powi(n as i32) * (1.0 + 1e-15));
        }
    }

    #[test]
    fn escaping_points_are_positive() {
        let h = canonical_height(&QuadraticMap::new(1), &int(0), 30);
        assert!(h.lower() > 0.0);
        assert!(h.error <= 2.0 * std::f64::consts::LN_2 / 2f64.powi(30) * (1.0 + 1e-15));
        let h = canonical_height(&QuadraticMap::new(-12), &int(5), 20);
        assert!(h.lower() > 0.0);
    }

    #[test]
    fn log_domain_matches_exact_orbit() {
        // 12 iterations of x^2 + 1 from 3 stay exact (about 2^12 * 1.6 bits);
        // compare against a run that is forced into the log domain.
        let phi = QuadraticMap::new(1);
        let exact = canonical_height(&phi, &int(3), 12);
        let deep = canonical_height(&phi, &int(3), 30);
        assert!((exact.value - deep.value).abs() <= exact.error + deep.error);
    }

    #[test]
    fn integral_point_examples() {
        let pts = integral_points_on_phi2(&QuadraticMap::new(-12)).unwrap();
        let expect: BTreeSet<_> = [(4, 2), (4, -2), (-4, 2), (-4, -2)].iter().map(|&(x, y)| (int(x), int(y))).collect();
        assert_eq!(pts, expect);
        assert!(integral_points_on_phi2(&QuadraticMap::new(3)).unwrap().is_empty());
        assert!(integral_points_on_phi2(&QuadraticMap::new(2)).unwrap().is_empty());
        assert!(integral_points_on_phi2(&QuadraticMap::new(0)).is_err());
        assert!(integral_points_on_phi2(&QuadraticMap::new(-1)).is_err());
    }

    #[test]
    fn min_height_examples() {
        let m = min_positive_height(&QuadraticMap::new(2), &int(0), 30).unwrap();
        assert!(m.hmin > 0.0);
        assert_eq!(m.rigor, Rigor::BoxSearched);
        let h0 = canonical_height(&QuadraticMap::new(2), &int(0), 30);
        assert!(m.hmin <= h0.lower());

        let m = min_positive_height(&QuadraticMap::new(-12), &int(0), 30).unwrap();
        assert!(m.argmin.abs() <= int(13));
        assert!(!preper_set(&int(-12)).contains(&m.argmin));

        let m = min_positive_height(&QuadraticMap::new(1), &int(0), 30).unwrap();
        assert_eq!(m.argmin, int(0));
    }

    #[test]
    fn iterate_bound_examples() {
        let b = compute_iterate_bound(&QuadraticMap::new(3), &int(0), 30).unwrap();
        assert_eq!(b.integral_points, 0);
        assert_eq!(b.b, b.hmin);
        assert_eq!(b.n, 2);
        let b = compute_iterate_bound(&QuadraticMap::new(-12), &int(0), 30).unwrap();
        assert_eq!(b.integral_points, 4);
        assert_eq!(b.b, b.hmin);
        assert_eq!(b.n, 2);
        assert!(compute_iterate_bound(&QuadraticMap::new(0), &int(0), 30).is_err());
    }
}
