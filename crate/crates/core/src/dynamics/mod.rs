//! Generator sets, composition words and the adjusted-critical-orbit certificate.
//!
//! A word `[i_1, ..., i_n]` denotes `theta_1 o ... o theta_n` with `theta_1`
//! applied last. Its adjusted critical orbit is
//! `-theta_1(0), theta_1(theta_2(0)), ..., theta_1(...(theta_n(0)))`; if no entry
//! is a square in `Q` the composition is irreducible over `Q`.

mod montecarlo;

pub use montecarlo::{monte_carlo_stability, MonteCarloEstimate, SequenceSampler};

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::{is_perfect_square, Integer};
use crate::oracle::DensePolynomial;
use crate::{Error, Result};

/// Default cap on the degree produced by [`compose_word`].
pub const DEFAULT_DEGREE_CAP: usize = 256;

/// Default cap on the number of words enumerated by [`scan_words`].
pub const DEFAULT_SCAN_BUDGET: u128 = 1 << 22;

/// The map `x^2 + c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticMap {
    pub c: Integer,
}

impl QuadraticMap {
    pub fn new(c: impl Into<Integer>) -> Self {
        QuadraticMap { c: c.into() }
    }

    pub fn eval(&self, x: &Integer) -> Integer {
        x * x + &self.c
    }

    pub fn iterate(&self, n: usize, x: &Integer) -> Integer {
        let mut v = x.clone();
        for _ in 0..n {
            v = self.eval(&v);
        }
        v
    }

    /// `x^2 + c` is irreducible over `Q` iff `-c` is not a square.
    pub fn is_irreducible(&self) -> bool {
        is_perfect_square(&-&self.c).is_none()
    }
}

impl fmt::Display for QuadraticMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_zero() {
            write!(f, "x^2")
        } else if self.c < Integer::zero() {
            write!(f, "x^2 - {}", -&self.c)
        } else {
            write!(f, "x^2 + {}", self.c)
        }
    }
}

pub fn evaluate(map: &QuadraticMap, x: &Integer) -> Integer {
    map.eval(x)
}

pub fn iterate(map: &QuadraticMap, n: usize, x: &Integer) -> Integer {
    map.iterate(n, x)
}

/// An ordered list of maps `x^2 + c_i` with pairwise distinct `c_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    maps: Vec<QuadraticMap>,
}

impl GeneratorSet {
    pub fn new<I, C>(cs: I) -> Result<Self>
    where
        I: IntoIterator<Item = C>,
        C: Into<Integer>,
    {
        let maps: Vec<_> = cs.into_iter().map(QuadraticMap::new).collect();
        if maps.is_empty() {
            return Err(Error::InvalidArgument("generator set is empty".into()));
        }
        let distinct: BTreeSet<_> = maps.iter().map(|m| &m.c).collect();
        if distinct.len() != maps.len() {
            return Err(Error::InvalidArgument("generator constants must be pairwise distinct".into()));
        }
        Ok(GeneratorSet { maps })
    }

    pub fn maps(&self) -> &[QuadraticMap] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn get(&self, i: usize) -> &QuadraticMap {
        &self.maps[i]
    }

    pub fn index_of(&self, c: &Integer) -> Option<usize> {
        self.maps.iter().position(|m| &m.c == c)
    }
}

/// A nonempty sequence of 0-based generator indices, outermost map first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    indices: Vec<usize>,
}

impl Word {
    pub fn new(indices: Vec<usize>, set: &GeneratorSet) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidArgument("word must be nonempty".into()));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= set.len()) {
            return Err(Error::InvalidArgument(format!(
                "generator index {} out of range for {} generators",
                bad + 1,
                set.len()
            )));
        }
        Ok(Word { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// 1-based indices, as shown to users.
    pub fn display_indices(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i + 1).collect()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut indices = self.indices.clone();
        indices.extend_from_slice(&other.indices);
        Word { indices }
    }

    pub fn prefix(&self, k: usize) -> Word {
        assert!((1..=self.len()).contains(&k));
        Word { indices: self.indices[..k].to_vec() }
    }

    /// Evaluates the whole composition at `x`.
    pub fn eval(&self, set: &GeneratorSet, x: &Integer) -> Integer {
        self.indices.iter().rev().fold(x.clone(), |v, &i| set.get(i).eval(&v))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.display_indices().iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjustedCriticalOrbit {
    pub entries: Vec<Integer>,
}

/// Lazily produces the adjusted critical orbit entries of a word.
fn orbit_entries<'a>(set: &'a GeneratorSet, w: &'a Word) -> impl Iterator<Item = Integer> + 'a {
    let idx = w.indices();
    (1..=idx.len()).map(move |k| {
        if k == 1 {
            -&set.get(idx[0]).c
        } else {
            idx[..k].iter().rev().fold(Integer::zero(), |v, &i| set.get(i).eval(&v))
        }
    })
}

pub fn adjusted_critical_orbit(set: &GeneratorSet, w: &Word) -> AdjustedCriticalOrbit {
    AdjustedCriticalOrbit { entries: orbit_entries(set, w).collect() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilityStatus {
    CertifiedIrreducible,
    /// Some orbit entry is a square; says nothing about reducibility.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub status: StabilityStatus,
    /// 1-based position of the first square orbit entry.
    pub first_square_index: Option<usize>,
    pub witness_root: Option<Integer>,
}

impl StabilityVerdict {
    pub fn is_certified(&self) -> bool {
        self.status == StabilityStatus::CertifiedIrreducible
    }
}

pub fn stability_certificate(set: &GeneratorSet, w: &Word) -> StabilityVerdict {
    for (k, entry) in orbit_entries(set, w).enumerate() {
        if let Some(root) = is_perfect_square(&entry) {
            return StabilityVerdict {
                status: StabilityStatus::Unknown,
                first_square_index: Some(k + 1),
                witness_root: Some(root),
            };
        }
    }
    StabilityVerdict { status: StabilityStatus::CertifiedIrreducible, first_square_index: None, witness_root: None }
}

/// Expands the composition into dense coefficients, constant term first.
pub fn compose_word(set: &GeneratorSet, w: &Word, degree_cap: usize) -> Result<DensePolynomial> {
    let degree = u32::try_from(w.len())
        .ok()
        .and_then(|n| 1usize.checked_shl(n))
        .unwrap_or(usize::MAX);
    if degree > degree_cap {
        return Err(Error::DegreeCap { degree, cap: degree_cap });
    }
    let mut p = DensePolynomial::x();
    for &i in w.indices().iter().rev() {
        p = &(&p * &p) + &DensePolynomial::constant(set.get(i).c.clone());
    }
    Ok(p)
}

/// Every word of length `1..=max_len`, shortest first and lexicographic within a
/// length, paired with its certificate.
pub fn scan_words(set: &GeneratorSet, max_len: usize, budget: u128) -> Result<Vec<(Word, StabilityVerdict)>> {
    let words = all_words(set, max_len, budget)?;
    Ok(words
        .into_par_iter()
        .map(|w| {
            let v = stability_certificate(set, &w);
            (w, v)
        })
        .collect())
}

/// Number of words of length `1..=max_len` over `s` letters, saturating.
pub fn word_count(s: usize, max_len: usize) -> u128 {
    (1..=max_len as u32).fold(0u128, |acc, n| acc.saturating_add((s as u128).saturating_pow(n)))
}

/// Enumerates words of length `1..=max_len` in shortlex order.
pub fn all_words(set: &GeneratorSet, max_len: usize, budget: u128) -> Result<Vec<Word>> {
    let requested = word_count(set.len(), max_len);
    if requested > budget {
        return Err(Error::Budget { requested, budget });
    }
    let s = set.len();
    let mut out = Vec::with_capacity(requested as usize);
    for n in 1..=max_len {
        let mut idx = vec![0usize; n];
        loop {
            out.push(Word { indices: idx.clone() });
            let mut pos = n;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < s {
                    break;
                }
                idx[pos] = 0;
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    Ok(out)
}
