//! Exceptional pairs, square-image certificates and irreducible prefixes.
//!
//! A pair `(c1, c2)` is exceptional when both maps have a periodic point that is
//! a square and each map sends some integer into the other's preperiodic set.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::{residue_search, MultiPoly};
use crate::arith::{is_perfect_square, Integer};
use crate::dynamics::{GeneratorSet, QuadraticMap, Word};
use crate::heights::{compute_iterate_bound, Rigor, DEFAULT_ITERATIONS};
use crate::portraits::{preper_set, Portrait};
use crate::{Error, Result};

/// Sweep width used when building a three-letter recipe.
pub const RECIPE_SWEEP: u64 = 200;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    PairMinus1Minus3,
    /// `{s^2 - s^4, -1 - s^2 - s^4}` with `s >= 0`.
    Family(Integer),
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedForm::PairMinus1Minus3 => write!(f, "(-1,-3)"),
            ClosedForm::Family(s) => write!(f, "family s={s}"),
        }
    }
}

/// `b` with `b^2 + c_self = image`, and `image` preperiodic for the other map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cond2Witness {
    pub b: Integer,
    pub image: Integer,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalVerdict {
    pub c: [Integer; 2],
    pub is_exceptional: bool,
    pub cond1_witnesses: [Option<Integer>; 2],
    /// Index 0 is the direction `phi_1(b) in PrePer(phi_2)`.
    pub cond2_witnesses: [Option<Cond2Witness>; 2],
    pub closed_form: Option<ClosedForm>,
}

/// Solves `c_fixed = s^2 - s^4` and `c_cycle = -1 - s^2 - s^4` for `s >= 0`.
fn family_parameter(c_fixed: &Integer, c_cycle: &Integer) -> Option<Integer> {
    // s^2 = t with t^2 + t + 1 + c_cycle = 0
    let disc = Integer::from(-3) - Integer::from(4) * c_cycle;
    let r = is_perfect_square(&disc)?;
    let twice = r - 1;
    if num_integer::Integer::is_odd(&twice) {
        return None;
    }
    let t: Integer = twice / 2;
    let s = is_perfect_square(&t)?;
    (&t - &t * &t == *c_fixed).then_some(s)
}

pub fn closed_form(c1: &Integer, c2: &Integer) -> Option<ClosedForm> {
    let (m1, m3) = (Integer::from(-1), Integer::from(-3));
    if (*c1 == m1 && *c2 == m3) || (*c1 == m3 && *c2 == m1) {
        return Some(ClosedForm::PairMinus1Minus3);
    }
    family_parameter(c1, c2).or_else(|| family_parameter(c2, c1)).map(ClosedForm::Family)
}

/// Per-map data reused across pairs.
#[derive(Clone, Debug)]
struct Profile {
    c: Integer,
    square_periodic: Option<Integer>,
    preper: BTreeSet<Integer>,
}

impl Profile {
    fn new(c: &Integer) -> Self {
        let portrait = Portrait::compute(c);
        Profile { c: c.clone(), square_periodic: portrait.square_periodic_point(), preper: portrait.preper }
    }
}

/// Smallest `b >= 0` (then smallest image) with `b^2 + c_self` in `target`.
fn cond2(c_self: &Integer, target: &BTreeSet<Integer>) -> Option<Cond2Witness> {
    target
        .iter()
        .filter_map(|p| is_perfect_square(&(p - c_self)).map(|b| Cond2Witness { b, image: p.clone() }))
        .min_by(|x, y| x.b.cmp(&y.b).then(x.image.cmp(&y.image)))
}

fn verdict(p1: &Profile, p2: &Profile) -> ExceptionalVerdict {
    let cond1_witnesses = [p1.square_periodic.clone(), p2.square_periodic.clone()];
    let cond2_witnesses = if cond1_witnesses.iter().all(Option::is_some) {
        [cond2(&p1.c, &p2.preper), cond2(&p2.c, &p1.preper)]
    } else {
        [None, None]
    };
    let is_exceptional = cond2_witnesses.iter().all(Option::is_some) && cond1_witnesses.iter().all(Option::is_some);
    ExceptionalVerdict {
        c: [p1.c.clone(), p2.c.clone()],
        is_exceptional,
        cond1_witnesses,
        cond2_witnesses,
        closed_form: closed_form(&p1.c, &p2.c),
    }
}

pub fn is_exceptional_pair(c1: &Integer, c2: &Integer) -> Result<ExceptionalVerdict> {
    if c1 == c2 {
        return Err(Error::InvalidArgument(format!("pair entries must be distinct, got {c1} twice")));
    }
    Ok(verdict(&Profile::new(c1), &Profile::new(c2)))
}

/// All ordered exceptional pairs with both entries in `[min, max]`.
pub fn scan_pairs(min: i64, max: i64) -> Result<Vec<ExceptionalVerdict>> {
    if min > max {
        return Err(Error::InvalidArgument(format!("empty range [{min}, {max}]")));
    }
    let profiles: Vec<Profile> = (min..=max).into_par_iter().map(|c| Profile::new(&Integer::from(c))).collect();
    // only maps with a square periodic point can take part
    let candidates: Vec<&Profile> = profiles.iter().filter(|p| p.square_periodic.is_some()).collect();
    let mut out: Vec<ExceptionalVerdict> = candidates
        .par_iter()
        .flat_map_iter(|p1| {
            candidates.iter().filter(move |p2| p1.c != p2.c).map(move |p2| verdict(p1, p2))
        })
        .filter(|v| v.is_exceptional)
        .collect();
    out.sort_by(|a, b| a.c.cmp(&b.c));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateReason {
    /// `phi_1` has no periodic point that is a square.
    NoSquarePeriodicPoint,
    /// No value `phi_2(b)` is preperiodic for `phi_1`.
    NoPreperiodicImage,
    /// Every preperiodic value `phi_2(b)` has a nonsquare `N`-th image.
    ImagesNonsquare,
}

impl fmt::Display for CertificateReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateReason::NoSquarePeriodicPoint => "no square periodic point",
            CertificateReason::NoPreperiodicImage => "no preperiodic image",
            CertificateReason::ImagesNonsquare => "preperiodic images have nonsquare iterates",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SquareImageCertificate {
    /// `phi_1^n(phi_2(b))` is never a square. `rigor` is inherited from the
    /// height minimum behind `n`.
    Certified { n: u32, reason: CertificateReason, rigor: Rigor },
    /// `phi_1^n(phi_2(b)) = value` is a square.
    Refuted { n: u32, b: Integer, value: Integer },
    Inapplicable(String),
}

impl SquareImageCertificate {
    pub fn certified_n(&self) -> Option<u32> {
        match self {
            SquareImageCertificate::Certified { n, .. } => Some(*n),
            _ => None,
        }
    }
}

/// Decides whether `phi_1^N(phi_2(b))` avoids squares for all integers `b`.
///
/// Past the iterate bound `N`, a square image forces `phi_2(b)` to be
/// preperiodic for `phi_1`; the finitely many such values are checked directly.
pub fn certify_no_square_images(c1: &Integer, c2: &Integer) -> Result<SquareImageCertificate> {
    let excluded = |c: &Integer| c.is_zero() || *c == -Integer::one();
    if excluded(c1) || excluded(c2) {
        return Ok(SquareImageCertificate::Inapplicable("entries must avoid 0 and -1".into()));
    }
    if c1 == c2 {
        return Ok(SquareImageCertificate::Inapplicable("entries must be distinct".into()));
    }
    let phi1 = QuadraticMap::new(c1.clone());
    let bound = compute_iterate_bound(&phi1, &Integer::zero(), DEFAULT_ITERATIONS)?;
    let (n, rigor) = (bound.n, bound.rigor);
    let portrait = Portrait::compute(c1);
    let mut hits: Vec<(Integer, Integer)> = portrait
        .preper
        .iter()
        .filter_map(|p| is_perfect_square(&(p - c2)).map(|b| (b, p.clone())))
        .collect();
    hits.sort();
    for (b, p) in &hits {
        let value = phi1.iterate(n as usize, p);
        if is_perfect_square(&value).is_some() {
            return Ok(SquareImageCertificate::Refuted { n, b: b.clone(), value });
        }
    }
    let reason = if portrait.square_periodic_point().is_none() {
        CertificateReason::NoSquarePeriodicPoint
    } else if hits.is_empty() {
        CertificateReason::NoPreperiodicImage
    } else {
        CertificateReason::ImagesNonsquare
    };
    Ok(SquareImageCertificate::Certified { n, reason, rigor })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubCheck {
    pub name: &'static str,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalPrefixReport {
    pub s: Integer,
    pub c1: Integer,
    pub c2: Integer,
    pub n: u32,
    pub checks: Vec<SubCheck>,
    pub b_range: u64,
    /// Values of `b` in the sweep where `phi_1^N(phi_2(phi_1(b)))` is a square.
    pub square_hits: Vec<Integer>,
}

impl ExceptionalPrefixReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed) && self.square_hits.is_empty()
    }
}

/// Re-checks each step of the argument that `phi_1^N(phi_2(phi_1(b)))` is
/// never a square for the family pair with parameter `s`, then sweeps
/// `|b| <= b_range`.
pub fn check_exceptional_prefix(s: &Integer, b_range: u64) -> Result<ExceptionalPrefixReport> {
    if s.abs() <= Integer::one() {
        return Err(Error::InvalidArgument(format!("family parameter must satisfy |s| >= 2, got {s}")));
    }
    let s2 = s * s;
    let s4 = &s2 * &s2;
    let c1 = &s2 - &s4;
    let c2 = -Integer::one() - &s2 - &s4;
    let phi1 = QuadraticMap::new(c1.clone());
    let phi2 = QuadraticMap::new(c2.clone());
    let n = compute_iterate_bound(&phi1, &Integer::zero(), DEFAULT_ITERATIONS)?.n;
    let preper = preper_set(&c1);

    let expected: BTreeSet<Integer> =
        [s2.clone(), -s2.clone(), Integer::one() - &s2, &s2 - Integer::one()].into_iter().collect();
    // b^2 + s^2 - s^4 = -(s^2 + 1), moved to one side
    let mod4 = MultiPoly::parse("b^2 + 2*s^2 - s^4 + 1", &["b", "s"])?;
    let checks = vec![
        SubCheck { name: "preperiodic set is {+-s^2, +-(1-s^2)}", passed: preper == expected },
        SubCheck { name: "1 - s^2 is not a square", passed: is_perfect_square(&(Integer::one() - &s2)).is_none() },
        SubCheck { name: "b^2 + s^2 - s^4 = -(s^2+1) has no solution mod 4", passed: residue_search(&[mod4], 4)?.is_empty() },
        SubCheck { name: "s^4 + 1 is not a square", passed: is_perfect_square(&(&s4 + 1)).is_none() },
        SubCheck { name: "middle entry -1-s^2-s^4 is not preperiodic", passed: !preper.contains(&c2) },
    ];

    let limit = b_range as i64;
    let square_hits: Vec<Integer> = (-limit..=limit)
        .into_par_iter()
        .map(Integer::from)
        .filter(|b| {
            let a = phi2.eval(&phi1.eval(b));
            is_perfect_square(&phi1.iterate(n as usize, &a)).is_some()
        })
        .collect();
    Ok(ExceptionalPrefixReport { s: s.clone(), c1, c2, n, checks, b_range, square_hits })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StollOutcome {
    Pass,
    /// `phi^n(0)` is a square.
    Counterexample(u32),
}

/// Checks `phi^n(0)` is not a square for `2 <= n <= n_max`.
pub fn stoll_check(c: &Integer, n_max: u32) -> StollOutcome {
    let phi = QuadraticMap::new(c.clone());
    let mut x = phi.eval(&Integer::zero());
    for n in 2..=n_max {
        x = phi.eval(&x);
        if is_perfect_square(&x).is_some() {
            return StollOutcome::Counterexample(n);
        }
    }
    StollOutcome::Pass
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrefixShape {
    /// `phi_i^N o phi_j`
    TwoLetter,
    /// `phi_i^N o phi_j o phi_i`
    ThreeLetter,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixRecipe {
    /// Generator indices, 0-based.
    pub i: usize,
    pub j: usize,
    pub n: u32,
    pub shape: PrefixShape,
    pub certificate: String,
}

impl PrefixRecipe {
    pub fn prefix_indices(&self) -> Vec<usize> {
        let mut out = vec![self.i; self.n as usize];
        out.push(self.j);
        if self.shape == PrefixShape::ThreeLetter {
            out.push(self.i);
        }
        out
    }

    /// The word `prefix o suffix`.
    pub fn word(&self, set: &GeneratorSet, suffix: &Word) -> Result<Word> {
        let mut indices = self.prefix_indices();
        indices.extend_from_slice(suffix.indices());
        Word::new(indices, set)
    }
}

/// A prefix `P` such that `P o F` is irreducible for every word `F`.
pub fn construct_irreducible_prefix(set: &GeneratorSet) -> Result<PrefixRecipe> {
    let irreducible: Vec<usize> = (0..set.len()).filter(|&k| set.get(k).is_irreducible()).collect();
    let [a, b] = match irreducible.as_slice() {
        [a, b, ..] => [*a, *b],
        _ => {
            return Err(Error::InvalidArgument(format!(
                "need at least two irreducible generators, found {}",
                irreducible.len()
            )))
        }
    };
    let (ca, cb) = (&set.get(a).c, &set.get(b).c);
    let verdict = is_exceptional_pair(ca, cb)?;
    if !verdict.is_exceptional {
        for (i, j) in [(a, b), (b, a)] {
            let cert = certify_no_square_images(&set.get(i).c, &set.get(j).c)?;
            if let SquareImageCertificate::Certified { n, reason, .. } = cert {
                return Ok(PrefixRecipe {
                    i,
                    j,
                    n,
                    shape: PrefixShape::TwoLetter,
                    certificate: format!("phi_i^{n}(phi_j(b)) never square: {reason}"),
                });
            }
        }
        return Err(Error::TheoremViolation(format!(
            "non-exceptional pair ({ca}, {cb}) certified in neither order"
        )));
    }
    let Some(ClosedForm::Family(s)) = verdict.closed_form else {
        return Err(Error::TheoremViolation(format!("exceptional pair ({ca}, {cb}) has no family form")));
    };
    let s2 = &s * &s;
    let c_fixed = &s2 - &s2 * &s2;
    let (i, j) = if *ca == c_fixed { (a, b) } else { (b, a) };
    let report = check_exceptional_prefix(&s, RECIPE_SWEEP)?;
    if !report.passed() {
        return Err(Error::TheoremViolation(format!("family check failed for s={s}: {report:?}")));
    }
    Ok(PrefixRecipe {
        i,
        j,
        n: report.n,
        shape: PrefixShape::ThreeLetter,
        certificate: format!(
            "exceptional family s={s}; middle entry phi_i^{}({}) nonsquare; {} sub-checks pass",
            report.n,
            report.c2,
            report.checks.len()
        ),
    })
}
