//! Rational periodic and preperiodic points of `x^2 + c` with `c` integral.
//!
//! Rational periodic points of a monic integral map are integers of period 1, 2
//! or 4, and `x^2 + c` has no rational points of period 4; so fixed points and
//! 2-cycles are the whole periodic set.

use std::collections::BTreeSet;

use num_integer::Integer as _;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{floor_sqrt, is_perfect_square, Integer};
use crate::{Error, Result};

/// Which square-periodic normal form a map has.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SquareFormKind {
    /// `c = s^2 - s^4`; `s^2` is a fixed point.
    FixedSquare,
    /// `c = -1 - s^2 - s^4`; `s^2` lies in a 2-cycle.
    TwoCycleSquare,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquareForm {
    pub kind: SquareFormKind,
    /// Nonnegative parameter; only `s^2` matters.
    pub s: Integer,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Portrait {
    pub c: Integer,
    pub fixed_points: BTreeSet<Integer>,
    /// Each cycle stored as `(smaller, larger)`.
    pub two_cycles: BTreeSet<(Integer, Integer)>,
    pub preper: BTreeSet<Integer>,
    pub square_form: Option<SquareForm>,
}

impl Portrait {
    pub fn compute(c: &Integer) -> Self {
        let (fixed_points, two_cycles) = rational_periodic_points(c);
        Portrait {
            c: c.clone(),
            fixed_points,
            two_cycles,
            preper: preper_set(c),
            square_form: recognize_square_periodic(c),
        }
    }

    pub fn periodic_points(&self) -> BTreeSet<Integer> {
        let mut out = self.fixed_points.clone();
        for (a, b) in &self.two_cycles {
            out.insert(a.clone());
            out.insert(b.clone());
        }
        out
    }

    /// A periodic point that is a perfect square, if any.
    pub fn square_periodic_point(&self) -> Option<Integer> {
        self.periodic_points().into_iter().find(|p| is_perfect_square(p).is_some())
    }
}

/// Integer roots of a monic quadratic `x^2 + bx + k` (discriminant must be a square).
fn monic_quadratic_roots(b: &Integer, k: &Integer) -> Option<(Integer, Integer)> {
    let disc = b * b - Integer::from(4) * k;
    let r = is_perfect_square(&disc)?;
    let two = Integer::from(2);
    let lo = -b - &r;
    let hi = -b + &r;
    // b and r share parity here since disc = b^2 - 4k
    (lo.is_even() && hi.is_even()).then(|| (lo / &two, hi / &two))
}

/// Fixed points (roots of `x^2 - x + c`) and 2-cycles (roots of `x^2 + x + c + 1`).
pub fn rational_periodic_points(c: &Integer) -> (BTreeSet<Integer>, BTreeSet<(Integer, Integer)>) {
    let mut fixed = BTreeSet::new();
    if let Some((a, b)) = monic_quadratic_roots(&Integer::from(-1), c) {
        fixed.insert(a);
        fixed.insert(b);
    }
    let mut cycles = BTreeSet::new();
    if let Some((a, b)) = monic_quadratic_roots(&Integer::from(1), &(c + 1)) {
        if a != b {
            cycles.insert((a, b));
        }
    }
    (fixed, cycles)
}

/// Matches `c = s^2 - s^4` (checked first) or `c = -1 - s^2 - s^4` for `s >= 0`.
pub fn recognize_square_periodic(c: &Integer) -> Option<SquareForm> {
    let bound = floor_sqrt(&floor_sqrt(&c.abs()).expect("nonnegative")).expect("nonnegative") + 2;
    let forms = [SquareFormKind::FixedSquare, SquareFormKind::TwoCycleSquare];
    for kind in forms {
        let mut s = Integer::zero();
        while s <= bound {
            let s2 = &s * &s;
            let value = match kind {
                SquareFormKind::FixedSquare => &s2 - &s2 * &s2,
                SquareFormKind::TwoCycleSquare => -Integer::from(1) - &s2 - &s2 * &s2,
            };
            if &value == c {
                return Some(SquareForm { kind, s });
            }
            s += 1;
        }
    }
    None
}

/// Closed form of the preperiodic set for a recognised square form.
pub fn closed_form_preper(form: &SquareForm) -> BTreeSet<Integer> {
    let s2 = &form.s * &form.s;
    let other = match form.kind {
        SquareFormKind::FixedSquare => Integer::from(1) - &s2,
        SquareFormKind::TwoCycleSquare => Integer::from(1) + &s2,
    };
    [s2.clone(), -s2, other.clone(), -other].into_iter().collect()
}

/// All rational (hence integral) preperiodic points of `x^2 + c`.
pub fn preper_set(c: &Integer) -> BTreeSet<Integer> {
    if let Some(form) = recognize_square_periodic(c) {
        return closed_form_preper(&form);
    }
    let (fixed, cycles) = rational_periodic_points(c);
    let mut set: BTreeSet<Integer> = fixed;
    for (a, b) in cycles {
        set.insert(a);
        set.insert(b);
    }
    let mut frontier: Vec<Integer> = set.iter().cloned().collect();
    while let Some(p) = frontier.pop() {
        if let Some(y) = is_perfect_square(&(&p - c)) {
            for pre in [y.clone(), -y] {
                if set.insert(pre.clone()) {
                    frontier.push(pre);
                }
            }
        }
    }
    set
}

/// Largest `|c|` accepted by [`brute_force_preper`].
pub const BRUTE_FORCE_LIMIT: i64 = 1_000_000;

/// Orbit simulation over `|a| <= |c| + 1`. Independent of [`preper_set`].
///
/// Any iterate leaving that window escapes to infinity, since
/// `|a^2 + c| > |a|` whenever `|a| >= |c| + 2`.
pub fn brute_force_preper(c: &Integer) -> Result<BTreeSet<Integer>> {
    let c = c
        .to_i64()
        .filter(|v| v.abs() <= BRUTE_FORCE_LIMIT)
        .ok_or_else(|| Error::InvalidArgument(format!("|c| exceeds brute-force limit {BRUTE_FORCE_LIMIT}")))?;
    let bound = c.abs() + 1;
    let width = (2 * bound + 1) as usize;
    // 0 = unknown, 1 = preperiodic, 2 = escapes
    let mut state = vec![0u8; width];
    let slot = |v: i64| (v + bound) as usize;
    for start in -bound..=bound {
        if state[slot(start)] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut v = start;
        let verdict = loop {
            if v.abs() > bound {
                break 2;
            }
            match state[slot(v)] {
                0 => {}
                known => break known,
            }
            if !seen.insert(v) {
                break 1;
            }
            path.push(v);
            v = v * v + c;
        };
        for p in path {
            state[slot(p)] = verdict;
        }
    }
    Ok((-bound..=bound).filter(|&a| state[slot(a)] == 1).map(Integer::from).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> Integer {
        Integer::from(v)
    }

    fn set(v: &[i64]) -> BTreeSet<Integer> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn periodic_examples() {
        let (f, t) = rational_periodic_points(&int(-12));
        assert_eq!(f, set(&[4, -3]));
        assert!(t.is_empty());
        let (f, t) = rational_periodic_points(&int(-1));
        assert!(f.is_empty());
        assert_eq!(t, [(int(-1), int(0))].into_iter().collect());
        let (f, t) = rational_periodic_points(&int(1));
        assert!(f.is_empty() && t.is_empty());
    }

    #[test]
    fn recognition_examples() {
        assert_eq!(
            recognize_square_periodic(&int(-12)),
            Some(SquareForm { kind: SquareFormKind::FixedSquare, s: int(2) })
        );
        assert_eq!(
            recognize_square_periodic(&int(-21)),
            Some(SquareForm { kind: SquareFormKind::TwoCycleSquare, s: int(2) })
        );
        assert_eq!(recognize_square_periodic(&int(-4)), None);
        assert_eq!(recognize_square_periodic(&int(0)).unwrap().s, int(0));
    }

    #[test]
    fn preper_examples() {
        assert_eq!(preper_set(&int(-12)), set(&[4, -4, 3, -3]));
        assert_eq!(preper_set(&int(-3)), set(&[1, -1, 2, -2]));
        assert_eq!(preper_set(&int(0)), set(&[0, 1, -1]));
        assert_eq!(preper_set(&int(-1)), set(&[0, 1, -1]));
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_preper(&int(-12)).unwrap(), set(&[3, -3, 4, -4]));
        assert_eq!(brute_force_preper(&int(0)).unwrap(), set(&[0, 1, -1]));
        assert!(brute_force_preper(&int(2)).unwrap().is_empty());
        assert!(brute_force_preper(&(int(BRUTE_FORCE_LIMIT) + 1)).is_err());
    }

    #[test]
    fn portrait_invariants() {
        for c in -300i64..=300 {
            let p = Portrait::compute(&int(c));
            for x in &p.fixed_points {
                assert_eq!(x * x + &p.c, *x);
            }
            for (a, b) in &p.two_cycles {
                assert_ne!(a, b);
                assert_eq!(a * a + &p.c, *b);
                assert_eq!(b * b + &p.c, *a);
            }
            for x in &p.preper {
                assert!(p.preper.contains(&(x * x + &p.c)), "c = {c}: not forward closed at {x}");
            }
            assert!(p.periodic_points().is_subset(&p.preper));
            if let Some(form) = &p.square_form {
                let s2 = &form.s * &form.s;
                match form.kind {
                    SquareFormKind::FixedSquare => assert!(p.fixed_points.contains(&s2)),
                    SquareFormKind::TwoCycleSquare => {
                        assert!(p.two_cycles.iter().any(|(a, b)| *a == s2 || *b == s2))
                    }
                }
                assert!(p.square_periodic_point().is_some());
            }
        }
    }

    #[test]
    fn fixed_square_identities() {
        for s in 0i64..40 {
            let s2 = int(s * s);
            let c = &s2 - &s2 * &s2;
            let phi = |x: &Integer| x * x + &c;
            let pre = preper_set(&c);
            let one_minus = int(1) - &s2;
            for v in [s2.clone(), -s2.clone(), one_minus.clone(), -one_minus.clone()] {
                assert!(pre.contains(&v));
            }
            assert_eq!(phi(&s2), s2);
            assert_eq!(phi(&-s2.clone()), s2);
            assert_eq!(phi(&one_minus), one_minus);
            assert_eq!(phi(&-one_minus.clone()), one_minus);
        }
    }

    #[test]
    fn escape_bound_is_sound() {
        for c in -60i64..=60 {
            for a in (c.abs() + 2)..(c.abs() + 80) {
                for a in [a, -a] {
                    assert!((a * a + c).abs() > a.abs());
                }
            }
        }
    }
}
