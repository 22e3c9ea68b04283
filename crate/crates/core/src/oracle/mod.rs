//! Exact irreducibility over `Q` for small-degree integer polynomials.
//!
//! This path shares no code with the orbit certificate in [`crate::dynamics`]:
//! linear factors come from the rational-root test, higher-degree factors from
//! Kronecker's interpolation search. Factorisation patterns modulo small primes
//! are used only to discard factor degrees that cannot occur.

mod modp;
mod poly;

pub use modp::{admissible_factor_degrees, degree_pattern, irreducible_mod_some_prime};
pub use poly::DensePolynomial;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::{divisor_count, positive_divisors, Integer};
use crate::dynamics::{all_words, compose_word, stability_certificate, GeneratorSet, StabilityStatus, Word};
use crate::{Error, Result};

/// Default degree cap for the exact oracle.
pub const DEFAULT_ORACLE_DEGREE_CAP: usize = 8;

const PATTERN_PRIMES: usize = 12;

/// Irreducibility over `Q` of a polynomial of degree at most `cap`.
///
/// Constants are not irreducible; content is ignored.
pub fn is_irreducible_exact(p: &DensePolynomial, cap: usize) -> Result<bool> {
    Ok(match p.degree() {
        None | Some(0) => false,
        Some(_) => find_factor(p, cap)?.is_none(),
    })
}

/// A nontrivial factor in `Z[x]` (degree between 1 and `deg/2`), or `None` if the
/// primitive part of `p` is irreducible.
pub fn find_factor(p: &DensePolynomial, cap: usize) -> Result<Option<DensePolynomial>> {
    let Some(n) = p.degree() else {
        return Err(Error::InvalidArgument("the zero polynomial has no factorisation".into()));
    };
    if n > cap {
        return Err(Error::DegreeCap { degree: n, cap });
    }
    let f = p.primitive_part();
    if n <= 1 {
        return Ok(None);
    }
    if let Some(linear) = rational_root_factor(&f) {
        return Ok(Some(linear));
    }
    if n <= 3 {
        return Ok(None);
    }
    if irreducible_mod_some_prime(&f, PATTERN_PRIMES).is_some() {
        return Ok(None);
    }
    let admissible = admissible_factor_degrees(&f, PATTERN_PRIMES);
    for d in admissible.into_iter().filter(|&d| (2..=n / 2).contains(&d)) {
        if let Some(g) = kronecker_factor(&f, d) {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// Linear factor `q x - p` from a rational root `p/q`, if any.
fn rational_root_factor(f: &DensePolynomial) -> Option<DensePolynomial> {
    let coeffs = f.coefficients();
    let a0 = &coeffs[0];
    if a0.is_zero() {
        return Some(DensePolynomial::x());
    }
    let lead = f.leading()?.abs();
    let n = coeffs.len() - 1;
    for q in positive_divisors(&lead) {
        for p in positive_divisors(&a0.abs()) {
            if !p.gcd(&q).is_one() {
                continue;
            }
            for num in [p.clone(), -p.clone()] {
                // q^n f(num/q) = sum c_i num^i q^(n-i)
                let mut acc = Integer::zero();
                let mut num_pow = Integer::one();
                let mut q_pows: Vec<Integer> = Vec::with_capacity(n + 1);
                let mut qp = Integer::one();
                for _ in 0..=n {
                    q_pows.push(qp.clone());
                    qp *= &q;
                }
                for (i, c) in coeffs.iter().enumerate() {
                    acc += c * &num_pow * &q_pows[n - i];
                    num_pow *= &num;
                }
                if acc.is_zero() {
                    return Some(DensePolynomial::new(vec![-num, q.clone()]));
                }
            }
        }
    }
    None
}

/// Kronecker search for a factor of exact degree `d` with positive leading
/// coefficient. `f` must have no rational roots.
fn kronecker_factor(f: &DensePolynomial, d: usize) -> Option<DensePolynomial> {
    let nodes = choose_nodes(f, d);
    let candidates: Vec<Vec<Integer>> = nodes
        .iter()
        .map(|x| {
            let v = f.eval(x).abs();
            positive_divisors(&v).into_iter().flat_map(|q| [q.clone(), -q]).collect()
        })
        .collect();
    let lead = f.leading()?.abs();
    for l in positive_divisors(&lead) {
        let shifts: Vec<Integer> = nodes.iter().map(|x| &l * num_traits::pow(x.clone(), d)).collect();
        let mut search = Search { f, d, lead: &l, nodes: &nodes, candidates: &candidates, shifts: &shifts, rows: Vec::new() };
        if let Some(g) = search.descend(0) {
            return Some(g);
        }
    }
    None
}

/// `d` distinct integer nodes where `f` has few divisors.
fn choose_nodes(f: &DensePolynomial, d: usize) -> Vec<Integer> {
    let radius = (2 * d + 6) as i64;
    let mut scored: Vec<(usize, i64)> = (-radius..=radius)
        .filter_map(|x| {
            let v = f.eval(&Integer::from(x)).abs();
            (!v.is_zero()).then(|| (divisor_count(&v), x))
        })
        .collect();
    scored.sort_by_key(|&(score, x)| (score, x.abs(), x));
    scored.into_iter().take(d).map(|(_, x)| Integer::from(x)).collect()
}

struct Search<'a> {
    f: &'a DensePolynomial,
    d: usize,
    lead: &'a Integer,
    nodes: &'a [Integer],
    candidates: &'a [Vec<Integer>],
    shifts: &'a [Integer],
    /// Divided-difference rows of the remainder `g - lead*x^d`.
    rows: Vec<Vec<Integer>>,
}

impl Search<'_> {
    fn descend(&mut self, i: usize) -> Option<DensePolynomial> {
        if i == self.d {
            return self.assemble();
        }
        for v in &self.candidates[i] {
            let mut row = Vec::with_capacity(i + 1);
            row.push(v - &self.shifts[i]);
            let mut integral = true;
            for j in 1..=i {
                let num = &row[j - 1] - &self.rows[i - 1][j - 1];
                let den = &self.nodes[i] - &self.nodes[i - j];
                let (q, r) = num.div_rem(&den);
                if !r.is_zero() {
                    integral = false;
                    break;
                }
                row.push(q);
            }
            if !integral {
                continue;
            }
            self.rows.push(row);
            let found = self.descend(i + 1);
            self.rows.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn assemble(&self) -> Option<DensePolynomial> {
        // Newton form: r = sum_j a_j prod_{k<j} (x - x_k)
        let mut r = DensePolynomial::zero();
        let mut basis = DensePolynomial::constant(Integer::one());
        for j in 0..self.d {
            let a = DensePolynomial::constant(self.rows[j][j].clone());
            r = &r + &(&a * &basis);
            basis = &basis * &DensePolynomial::new(vec![-self.nodes[j].clone(), Integer::one()]);
        }
        let mut lead_term = vec![Integer::zero(); self.d + 1];
        lead_term[self.d] = self.lead.clone();
        let g = &DensePolynomial::new(lead_term) + &r;
        self.f.div_exact(&g).map(|_| g)
    }
}

/// Result of checking the orbit certificate against the exact oracle.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CrossValidationReport {
    pub words_checked: usize,
    pub certified: usize,
    /// Unknown verdict, oracle says irreducible. Allowed.
    pub unknown_irreducible: Vec<Word>,
    /// Unknown verdict, oracle says reducible.
    pub unknown_reducible: Vec<Word>,
    /// Certified yet reducible. Must stay empty.
    pub forbidden: Vec<Word>,
}

impl CrossValidationReport {
    pub fn is_consistent(&self) -> bool {
        self.forbidden.is_empty()
    }
}

enum Outcome {
    Certified,
    UnknownIrreducible,
    UnknownReducible,
    Forbidden,
}

/// Runs the certificate and the oracle on every word of length `1..=max_len`.
pub fn cross_validate(set: &GeneratorSet, max_len: usize, cap: usize) -> Result<CrossValidationReport> {
    let degree = 1usize.checked_shl(max_len as u32).unwrap_or(usize::MAX);
    if degree > cap {
        return Err(Error::DegreeCap { degree, cap });
    }
    let words = all_words(set, max_len, u128::MAX)?;
    let outcomes: Vec<(Word, Outcome)> = words
        .into_par_iter()
        .map(|w| {
            let verdict = stability_certificate(set, &w);
            let poly = compose_word(set, &w, cap)?;
            let irreducible = is_irreducible_exact(&poly, cap)?;
            let outcome = match (verdict.status, irreducible) {
                (StabilityStatus::CertifiedIrreducible, true) => Outcome::Certified,
                (StabilityStatus::CertifiedIrreducible, false) => Outcome::Forbidden,
                (StabilityStatus::Unknown, true) => Outcome::UnknownIrreducible,
                (StabilityStatus::Unknown, false) => Outcome::UnknownReducible,
            };
            Ok((w, outcome))
        })
        .collect::<Result<_>>()?;
    let mut report = CrossValidationReport { words_checked: outcomes.len(), ..Default::default() };
    for (w, o) in outcomes {
        match o {
            Outcome::Certified => report.certified += 1,
            Outcome::UnknownIrreducible => report.unknown_irreducible.push(w),
            Outcome::UnknownReducible => report.unknown_reducible.push(w),
            Outcome::Forbidden => report.forbidden.push(w),
        }
    }
    Ok(report)
}


#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> DensePolynomial {
        DensePolynomial::from_i64(c)
    }

    #[test]
    fn examples() {
        assert!(!is_irreducible_exact(&poly(&[-4, 0, 1]), 8).unwrap());
        assert!(is_irreducible_exact(&poly(&[1, 0, 1]), 8).unwrap());
        let p = poly(&[143, 0, -24, 0, 1]);
        assert!(!is_irreducible_exact(&p, 8).unwrap());
        let g = find_factor(&p, 8).unwrap().unwrap();
        assert!(g == poly(&[-11, 0, 1]) || g == poly(&[-13, 0, 1]));
    }

    #[test]
    fn degree_cap_enforced() {
        let p = DensePolynomial::new((0..10).map(|_| Integer::one()).collect());
        assert!(matches!(is_irreducible_exact(&p, 8), Err(Error::DegreeCap { degree: 9, cap: 8 })));
    }

    #[test]
    fn everywhere_locally_reducible_yet_irreducible() {
        // x^4 + 1 and x^4 - 10x^2 + 1 split modulo every prime.
        assert!(is_irreducible_exact(&poly(&[1, 0, 0, 0, 1]), 8).unwrap());
        assert!(is_irreducible_exact(&poly(&[1, 0, -10, 0, 1]), 8).unwrap());
    }

    #[test]
    fn finds_cubic_and_quartic_factors() {
        let a = poly(&[3, -1, 0, 2]);
        let b = poly(&[-5, 2, 7, 0, 1]);
        let p = &a * &b;
        let g = find_factor(&p, 8).unwrap().expect("reducible");
        assert!(p.div_exact(&g).is_some());
        let c = poly(&[2, 0, 0, 0, 1]);
        let d = poly(&[-3, 1, 0, 0, 1]);
        let q = &c * &d;
        assert!(!is_irreducible_exact(&q, 8).unwrap());
    }

    #[test]
    fn non_monic_rational_root() {
        // (3x - 2)(x^2 + x + 5)
        let p = &poly(&[-2, 3]) * &poly(&[5, 1, 1]);
        assert_eq!(find_factor(&p, 8).unwrap(), Some(poly(&[-2, 3])));
    }

    #[test]
    fn cross_validate_examples() {
        let s = GeneratorSet::new([1, 2]).unwrap();
        let r = cross_validate(&s, 3, 8).unwrap();
        assert_eq!(r.words_checked, 14);
        assert!(r.is_consistent());

        let s = GeneratorSet::new([-1, -12]).unwrap();
        let r = cross_validate(&s, 2, 8).unwrap();
        assert!(r.is_consistent());
        let w = Word::new(vec![0, 1], &s).unwrap();
        assert!(r.unknown_reducible.contains(&w));

        let s = GeneratorSet::new([-4]).unwrap();
        let r = cross_validate(&s, 1, 8).unwrap();
        assert_eq!(r.unknown_reducible.len(), 1);

        assert!(cross_validate(&s, 4, 8).is_err());
    }
}
