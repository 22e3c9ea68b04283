use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{mod_floor_u64, Integer};
use crate::{Error, Result};

/// Sparse multivariate integer polynomial in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    arity: usize,
    terms: BTreeMap<Vec<u32>, Integer>,
}

impl MultiPoly {
    pub fn zero(arity: usize) -> Self {
        MultiPoly { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: impl Into<Integer>) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(vec![0; arity], c.into());
        p
    }

    /// The variable with index `i`.
    pub fn var(arity: usize, i: usize) -> Self {
        assert!(i < arity, "variable index {i} out of range for arity {arity}");
        let mut exps = vec![0; arity];
        exps[i] = 1;
        let mut p = Self::zero(arity);
        p.add_term(exps, Integer::one());
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.arity, 1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Integer) {
        let entry = self.terms.entry(exps).or_insert_with(Integer::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// Parses a sum of monomials such as `x^2 + s^2 - s^4 - t^2` or `2*s*t - 3`.
    ///
    /// Parentheses are not supported.
    pub fn parse(expr: &str, vars: &[&str]) -> Result<Self> {
        let arity = vars.len();
        let cleaned: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::InvalidArgument("empty polynomial expression".into()));
        }
        let mut poly = Self::zero(arity);
        let mut rest = cleaned.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let (negative, body) = match rest.as_bytes()[0] {
                b'+' => (false, &rest[1..]),
                b'-' => (true, &rest[1..]),
                _ if first => (false, rest),
                _ => return Err(Error::InvalidArgument(format!("expected sign in {expr:?}"))),
            };
            first = false;
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let (coef, exps) = parse_monomial(&body[..end], vars, expr)?;
            poly.add_term(exps, if negative { -coef } else { coef });
            rest = &body[end..];
        }
        Ok(poly)
    }

    pub fn eval(&self, point: &[Integer]) -> Integer {
        assert_eq!(point.len(), self.arity);
        self.terms
            .iter()
            .map(|(exps, c)| {
                exps.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&e, v)| acc * num_traits::pow(v.clone(), e as usize))
            })
            .sum()
    }

    /// Evaluates modulo `m` at a residue vector.
    pub fn eval_mod(&self, point: &[u64], m: u64) -> u64 {
        self.reduce_mod(m).eval(point)
    }

    pub(crate) fn reduce_mod(&self, m: u64) -> ReducedPoly {
        ReducedPoly {
            m,
            terms: self
                .terms
                .iter()
                .map(|(exps, c)| (exps.clone(), mod_floor_u64(c, m)))
                .filter(|(_, c)| *c != 0)
                .collect(),
        }
    }
}

fn parse_monomial(src: &str, vars: &[&str], whole: &str) -> Result<(Integer, Vec<u32>)> {
    let bad = || Error::InvalidArgument(format!("cannot parse monomial {src:?} in {whole:?}"));
    if src.is_empty() {
        return Err(bad());
    }
    let mut coef = Integer::one();
    let mut exps = vec![0u32; vars.len()];
    for factor in src.split('*') {
        let (base, exp) = match factor.split_once('^') {
            Some((b, e)) => (b, e.parse::<u32>().map_err(|_| bad())?),
            None => (factor, 1),
        };
        if let Ok(n) = base.parse::<Integer>() {
            coef *= num_traits::pow(n, exp as usize);
        } else if let Some(i) = vars.iter().position(|v| *v == base) {
            exps[i] += exp;
        } else {
            return Err(bad());
        }
    }
    Ok((coef, exps))
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (exps, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("v{i}") } else { format!("v{i}^{e}") })
                .collect();
            match (k, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{mag}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.arity, rhs.arity);
        let mut out = self.clone();
        for (exps, c) in &rhs.terms {
            out.add_term(exps.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.arity, rhs.arity);
        let mut out = MultiPoly::zero(self.arity);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exps = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// A polynomial with coefficients reduced into `[0, m)`.
pub(crate) struct ReducedPoly {
    m: u64,
    terms: Vec<(Vec<u32>, u64)>,
}

impl ReducedPoly {
    pub(crate) fn eval(&self, point: &[u64]) -> u64 {
        let m = self.m as u128;
        let mut acc = 0u128;
        for (exps, c) in &self.terms {
            let mut term = *c as u128;
            for (&e, &v) in exps.iter().zip(point) {
                for _ in 0..e {
                    term = term * v as u128 % m;
                }
            }
            acc = (acc + term) % m;
        }
        acc as u64
    }
}

/// Outcome of an exhaustive search over `(Z/m)^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueSystem {
    pub modulus: u64,
    pub arity: usize,
    /// Number of residue vectors examined, always `m^k`.
    pub tested: u64,
    pub solutions: Vec<Vec<u64>>,
}

impl ResidueSystem {
    pub fn run(polys: &[MultiPoly], m: u64) -> Result<Self> {
        let arity = polys.first().map(MultiPoly::arity).unwrap_or(0);
        let solutions = residue_search(polys, m)?;
        Ok(ResidueSystem { modulus: m, arity, tested: m.pow(arity as u32), solutions })
    }

    /// An empty solution list certifies that the system has no integer solutions.
    pub fn is_obstruction(&self) -> bool {
        self.solutions.is_empty()
    }
}

/// All vectors in `(Z/m)^k` at which every polynomial vanishes mod `m`, in
/// lexicographic order.
pub fn residue_search(polys: &[MultiPoly], m: u64) -> Result<Vec<Vec<u64>>> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("modulus must be at least 2, got {m}")));
    }
    let Some(first) = polys.first() else {
        return Err(Error::InvalidArgument("residue search needs at least one polynomial".into()));
    };
    let k = first.arity();
    if !(1..=4).contains(&k) || polys.iter().any(|p| p.arity() != k) {
        return Err(Error::InvalidArgument(format!(
            "residue search supports 1 to 4 variables of equal arity, got {k}"
        )));
    }
    if m.checked_pow(k as u32).is_none_or(|n| n > 1 << 32) {
        return Err(Error::Budget { requested: (m as u128).pow(k as u32), budget: 1 << 32 });
    }
    let reduced: Vec<_> = polys.iter().map(|p| p.reduce_mod(m)).collect();
    let mut out = Vec::new();
    let mut point = vec![0u64; k];
    loop {
        if reduced.iter().all(|p| p.eval(&point) == 0) {
            out.push(point.clone());
        }
        // odometer, last coordinate fastest
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            point[i] += 1;
            if point[i] < m {
                break;
            }
            point[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_eval() {
        let p = MultiPoly::parse("x^2 + s^2 - s^4 - t^2", &["x", "s", "t"]).unwrap();
        let v = |a: i64, b: i64, c: i64| p.eval(&[a.into(), b.into(), c.into()]);
        assert_eq!(v(1, 0, 1), Integer::zero());
        assert_eq!(v(2, 3, 1), Integer::from(4 + 9 - 81 - 1));
        let q = MultiPoly::parse("-2*s*t^2 + 7", &["s", "t"]).unwrap();
        assert_eq!(q.eval(&[3.into(), 2.into()]), Integer::from(-24 + 7));
        assert!(MultiPoly::parse("x^2 + y", &["x"]).is_err());
        assert!(MultiPoly::parse("", &["x"]).is_err());
    }

    #[test]
    fn ring_ops_match_parse() {
        let vars = ["s", "t"];
        let s = MultiPoly::var(2, 0);
        let t = MultiPoly::var(2, 1);
        let built = &(&s.pow(4) - &s.pow(2)) + &(&t * &t);
        assert_eq!(built, MultiPoly::parse("s^4 - s^2 + t^2", &vars).unwrap());
        assert_eq!(&built - &built, MultiPoly::zero(2));
    }

    #[test]
    fn obstruction_examples() {
        let vars = ["z", "s"];
        let a = MultiPoly::parse("z^2 - s^2 - 2", &vars).unwrap();
        assert!(residue_search(&[a], 4).unwrap().is_empty());
        let b = MultiPoly::parse("z^2 - s^2 + 2", &vars).unwrap();
        assert!(residue_search(&[b], 4).unwrap().is_empty());
        let c = MultiPoly::parse("x^2 - s^2", &["x", "s"]).unwrap();
        let sols = residue_search(&[c], 4).unwrap();
        assert!(sols.contains(&vec![0, 0]));
        assert!(sols.contains(&vec![1, 1]));
    }

    #[test]
    fn rejects_bad_shapes() {
        let p = MultiPoly::parse("x", &["x"]).unwrap();
        assert!(residue_search(std::slice::from_ref(&p), 1).is_err());
        assert!(residue_search(&[], 4).is_err());
        let five = MultiPoly::zero(5);
        assert!(residue_search(&[five], 4).is_err());
    }
}
