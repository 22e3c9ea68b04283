//! The 48 integer systems attached to exceptional pairs, a bounded solver, and
//! a comparator against the claimed solution lists.
//!
//! Each system couples
//!
//! ```text
//! x^2 + L(s) = left(t),    y^2 + R(t) = right(s)
//! ```
//!
//! where `L`, `R` are `q^2 - q^4` or `-1 - q^2 - q^4` depending on the family
//! and each selector is one of four signed quadratics. Only even powers of
//! `x, y, s, t` occur, so solutions are stored with `x, y >= 0`.

mod checks;
mod template;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::Deserialize;

use crate::arith::{is_perfect_square_i128, MultiPoly};
use crate::{Error, Result};

pub use checks::{
    modular_obstruction, quartic_curve_points, sandwich_probe, Obstruction, Region, SandwichOutcome, SandwichProbe,
};
pub use template::{Component, Quad, Template};

/// Bound used by the default checks.
pub const DEFAULT_BOUND: u32 = 50;
/// Bound for the extended suite.
pub const EXTENDED_BOUND: u32 = 500;
/// Largest accepted solver bound; keeps every intermediate inside `i128`.
pub const MAX_BOUND: u32 = 100_000;
/// Templates are checked against their system for `|u|` up to this on load.
pub const TEMPLATE_CHECK_RANGE: i64 = 10;

/// The bundled registry text.
pub const REGISTRY_TOML: &str = include_str!("../../data/registry.toml");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize)]
pub enum Family {
    /// Both maps have a square fixed point.
    A,
    /// Square fixed point on the left, square 2-cycle point on the right.
    B,
    /// Both maps have a square 2-cycle point.
    C,
}

impl Family {
    fn fixed_form(self, side: usize) -> bool {
        matches!((self, side), (Family::A, _) | (Family::B, 0))
    }

    /// `L(q)` for side 0, `R(q)` for side 1.
    pub fn base(self, side: usize, q: i128) -> i128 {
        let q2 = q * q;
        if self.fixed_form(side) {
            q2 - q2 * q2
        } else {
            -1 - q2 - q2 * q2
        }
    }

    fn base_text(self, side: usize, var: &str) -> String {
        if self.fixed_form(side) {
            format!("{var}^2 - {var}^4")
        } else {
            format!("-1 - {var}^2 - {var}^4")
        }
    }

    /// Selectors legal on each side, in registry order.
    pub fn legal_selectors(self, side: usize) -> [Selector; 4] {
        use Selector::*;
        if self.fixed_form(1 - side) {
            [Square, NegSquare, OneMinusSquare, SquareMinusOne]
        } else {
            [Square, NegSquare, SquarePlusOne, NegSquarePlusOne]
        }
    }
}

/// Right-hand side of one equation, as a function of the opposite parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Selector {
    Square,
    NegSquare,
    SquareMinusOne,
    OneMinusSquare,
    SquarePlusOne,
    NegSquarePlusOne,
}

impl Selector {
    const ALL: [Selector; 6] = [
        Selector::Square,
        Selector::NegSquare,
        Selector::SquareMinusOne,
        Selector::OneMinusSquare,
        Selector::SquarePlusOne,
        Selector::NegSquarePlusOne,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Selector::Square => "+q^2",
            Selector::NegSquare => "-q^2",
            Selector::SquareMinusOne => "+(q^2-1)",
            Selector::OneMinusSquare => "-(q^2-1)",
            Selector::SquarePlusOne => "+(q^2+1)",
            Selector::NegSquarePlusOne => "-(q^2+1)",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Selector::ALL
            .into_iter()
            .find(|s| s.as_str() == text.trim())
            .ok_or_else(|| Error::Registry(format!("unknown selector {text:?}")))
    }

    pub fn eval(self, q: i128) -> i128 {
        let q2 = q * q;
        match self {
            Selector::Square => q2,
            Selector::NegSquare => -q2,
            Selector::SquareMinusOne => q2 - 1,
            Selector::OneMinusSquare => 1 - q2,
            Selector::SquarePlusOne => q2 + 1,
            Selector::NegSquarePlusOne => -q2 - 1,
        }
    }

    fn text(self, var: &str) -> String {
        match self {
            Selector::Square => format!("{var}^2"),
            Selector::NegSquare => format!("-{var}^2"),
            Selector::SquareMinusOne => format!("{var}^2 - 1"),
            Selector::OneMinusSquare => format!("1 - {var}^2"),
            Selector::SquarePlusOne => format!("{var}^2 + 1"),
            Selector::NegSquarePlusOne => format!("-1 - {var}^2"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct System {
    pub family: Family,
    pub left: Selector,
    pub right: Selector,
}

impl System {
    pub fn new(family: Family, left: Selector, right: Selector) -> Result<Self> {
        if !family.legal_selectors(0).contains(&left) || !family.legal_selectors(1).contains(&right) {
            return Err(Error::Registry(format!(
                "selectors {} / {} are not legal for family {family:?}",
                left.as_str(),
                right.as_str()
            )));
        }
        Ok(System { family, left, right })
    }

    /// `x^2` forced by the left equation.
    pub fn x_squared(&self, s: i128, t: i128) -> i128 {
        self.left.eval(t) - self.family.base(0, s)
    }

    /// `y^2` forced by the right equation.
    pub fn y_squared(&self, s: i128, t: i128) -> i128 {
        self.right.eval(s) - self.family.base(1, t)
    }

    pub fn satisfies(&self, q: &Quad) -> bool {
        let [x, y, s, t] = q.map(i128::from);
        x * x == self.x_squared(s, t) && y * y == self.y_squared(s, t)
    }

    /// Both equations as polynomials in `(x, y, s, t)` that vanish on solutions.
    pub fn polynomials(&self) -> [MultiPoly; 2] {
        let vars = ["x", "y", "s", "t"];
        let parse = |text: String| MultiPoly::parse(&text, &vars).expect("well-formed");
        let left = &(&parse("x^2".into()) + &parse(self.family.base_text(0, "s"))) - &parse(self.left.text("t"));
        let right = &(&parse("y^2".into()) + &parse(self.family.base_text(1, "t"))) - &parse(self.right.text("s"));
        [left, right]
    }

    /// Swaps the roles of the two maps.
    pub fn swapped(&self) -> Option<System> {
        let family = match self.family {
            Family::A => Family::A,
            Family::C => Family::C,
            Family::B => return None,
        };
        Some(System { family, left: self.right, right: self.left })
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "x^2 + {} = {}, y^2 + {} = {}",
            self.family.base_text(0, "s"),
            self.left.text("t"),
            self.family.base_text(1, "t"),
            self.right.text("s")
        )
    }
}

/// `(x, y, s, t) -> (y, x, t, s)`.
pub fn swap(q: &Quad) -> Quad {
    [q[1], q[0], q[3], q[2]]
}

pub fn canonical(q: &Quad) -> Quad {
    [q[0].abs(), q[1].abs(), q[2], q[3]]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolutionFamily {
    Explicit(Template),
    Parametric(Template),
}

impl SolutionFamily {
    pub fn parse(text: &str) -> Result<Self> {
        let t = Template::parse(text)?;
        Ok(if t.is_parametric() { SolutionFamily::Parametric(t) } else { SolutionFamily::Explicit(t) })
    }

    pub fn template(&self) -> &Template {
        match self {
            SolutionFamily::Explicit(t) | SolutionFamily::Parametric(t) => t,
        }
    }

    /// All instances for `|u| <= range` (a single pass for explicit families).
    pub fn instances(&self, range: i64) -> Vec<Quad> {
        match self {
            SolutionFamily::Explicit(t) => t.instances(0),
            SolutionFamily::Parametric(t) => (-range..=range).flat_map(|u| t.instances(u)).collect(),
        }
    }

    /// Canonical instances with `|s|, |t| <= bound`.
    pub fn canonical_in_box(&self, bound: u32) -> BTreeSet<Quad> {
        let b = i64::from(bound);
        self.instances(b + self.template().max_constant())
            .iter()
            .filter(|q| q[2].abs() <= b && q[3].abs() <= b)
            .map(canonical)
            .collect()
    }
}

impl fmt::Display for SolutionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.template().fmt(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Technique {
    Mod4,
    Mod8,
    Sandwich,
    Curve,
    Factor,
    /// Follows from the named entry under [`swap`].
    Symmetry(String),
}

impl Technique {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(match text.trim() {
            "mod4" => Technique::Mod4,
            "mod8" => Technique::Mod8,
            "sandwich" => Technique::Sandwich,
            "curve" => Technique::Curve,
            "factor" => Technique::Factor,
            other => match other.strip_prefix("symmetry:") {
                Some(target) => Technique::Symmetry(target.to_string()),
                None => return Err(Error::Registry(format!("unknown technique {other:?}"))),
            },
        })
    }
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Technique::Mod4 => f.write_str("mod4"),
            Technique::Mod8 => f.write_str("mod8"),
            Technique::Sandwich => f.write_str("sandwich"),
            Technique::Curve => f.write_str("curve"),
            Technique::Factor => f.write_str("factor"),
            Technique::Symmetry(t) => write!(f, "symmetry:{t}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaEntry {
    pub id: String,
    pub system: System,
    /// Empty when the system has no solutions.
    pub claimed: Vec<SolutionFamily>,
    pub techniques: Vec<Technique>,
}

impl LemmaEntry {
    pub fn has(&self, t: &Technique) -> bool {
        self.techniques.contains(t)
    }

    pub fn symmetry_target(&self) -> Option<&str> {
        self.techniques.iter().find_map(|t| match t {
            Technique::Symmetry(id) => Some(id.as_str()),
            _ => None,
        })
    }

    /// Caveat attached to reports on entries whose completeness rests on
    /// elliptic-curve arguments.
    pub fn note(&self) -> Option<&'static str> {
        self.has(&Technique::Curve).then_some("desk-scale check, completeness by cited curve results")
    }

    pub fn claimed_in_box(&self, bound: u32) -> BTreeSet<Quad> {
        self.claimed.iter().flat_map(|f| f.canonical_in_box(bound)).collect()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRegistry {
    lemma: Vec<RawEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    id: String,
    family: Family,
    left: String,
    right: String,
    claimed: Vec<String>,
    techniques: Vec<String>,
}

/// Parses and validates registry text.
pub fn parse_registry(text: &str) -> Result<Vec<LemmaEntry>> {
    let raw: RawRegistry = toml::from_str(text).map_err(|e| Error::Registry(e.to_string()))?;
    let mut entries = Vec::with_capacity(raw.lemma.len());
    for r in raw.lemma {
        let system = System::new(r.family, Selector::parse(&r.left)?, Selector::parse(&r.right)?)?;
        let claimed = r.claimed.iter().map(|c| SolutionFamily::parse(c)).collect::<Result<Vec<_>>>()?;
        let techniques = r.techniques.iter().map(|t| Technique::parse(t)).collect::<Result<Vec<_>>>()?;
        entries.push(LemmaEntry { id: r.id, system, claimed, techniques });
    }
    validate(&entries)?;
    Ok(entries)
}

fn validate(entries: &[LemmaEntry]) -> Result<()> {
    let mut per_family: BTreeMap<Family, usize> = BTreeMap::new();
    let mut seen: BTreeMap<&str, &LemmaEntry> = BTreeMap::new();
    for e in entries {
        *per_family.entry(e.system.family).or_default() += 1;
        if seen.insert(&e.id, e).is_some() {
            return Err(Error::Registry(format!("duplicate id {}", e.id)));
        }
        if let Some(target) = e.symmetry_target() {
            let t = seen
                .get(target)
                .filter(|t| t.id != e.id)
                .ok_or_else(|| Error::Registry(format!("{} references {target}, which is not an earlier entry", e.id)))?;
            if e.system.swapped() != Some(t.system) {
                return Err(Error::Registry(format!("{} is not the swap of {target}", e.id)));
            }
        }
        for fam in &e.claimed {
            if let Some(q) = fam.instances(TEMPLATE_CHECK_RANGE).into_iter().find(|q| !e.system.satisfies(q)) {
                return Err(Error::Registry(format!("{}: claimed {fam} gives non-solution {q:?}", e.id)));
            }
        }
    }
    for fam in [Family::A, Family::B, Family::C] {
        let n = per_family.get(&fam).copied().unwrap_or(0);
        if n != 16 {
            return Err(Error::Registry(format!("family {fam:?} has {n} entries, expected 16")));
        }
    }
    Ok(())
}

/// The bundled registry.
pub fn registry() -> Result<Vec<LemmaEntry>> {
    parse_registry(REGISTRY_TOML)
}

pub fn find_lemma<'a>(entries: &'a [LemmaEntry], id: &str) -> Result<&'a LemmaEntry> {
    entries.iter().find(|e| e.id == id).ok_or_else(|| Error::UnknownLemma(id.to_string()))
}

/// All canonical solutions with `|s|, |t| <= bound`.
pub fn solve_system_bounded(system: &System, bound: u32) -> Result<BTreeSet<Quad>> {
    if bound > MAX_BOUND {
        return Err(Error::InvalidArgument(format!("bound {bound} exceeds {MAX_BOUND}")));
    }
    let b = i128::from(bound);
    let found: Vec<Vec<Quad>> = (-b..=b)
        .into_par_iter()
        .map(|s| {
            (-b..=b)
                .filter_map(|t| {
                    let x = is_perfect_square_i128(system.x_squared(s, t))?;
                    let y = is_perfect_square_i128(system.y_squared(s, t))?;
                    Some([x as i64, y as i64, s as i64, t as i64])
                })
                .collect()
        })
        .collect();
    Ok(found.into_iter().flatten().collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LemmaVerdict {
    Match { solutions: BTreeSet<Quad> },
    /// `extra`: found but not claimed; `missing`: claimed but not found.
    Mismatch { extra: BTreeSet<Quad>, missing: BTreeSet<Quad> },
}

impl LemmaVerdict {
    pub fn is_match(&self) -> bool {
        matches!(self, LemmaVerdict::Match { .. })
    }
}

/// Compares the bounded solution set with the claimed families clipped to the box.
pub fn verify_lemma(entry: &LemmaEntry, bound: u32) -> Result<LemmaVerdict> {
    let found = solve_system_bounded(&entry.system, bound)?;
    let claimed = entry.claimed_in_box(bound);
    if found == claimed {
        return Ok(LemmaVerdict::Match { solutions: found });
    }
    Ok(LemmaVerdict::Mismatch {
        extra: found.difference(&claimed).copied().collect(),
        missing: claimed.difference(&found).copied().collect(),
    })
}

/// For a symmetry-tagged entry, whether its solutions are the swaps of its target's.
pub fn symmetry_holds(entries: &[LemmaEntry], entry: &LemmaEntry, bound: u32) -> Result<Option<bool>> {
    let Some(target) = entry.symmetry_target() else {
        return Ok(None);
    };
    let target = find_lemma(entries, target)?;
    let mine = solve_system_bounded(&entry.system, bound)?;
    let theirs: BTreeSet<Quad> = solve_system_bounded(&target.system, bound)?.iter().map(swap).collect();
    Ok(Some(mine == theirs))
}
