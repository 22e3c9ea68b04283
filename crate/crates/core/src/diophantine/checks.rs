//! Residue obstructions, quartic curve point search and sandwich probes.

use num_traits::Signed;

use super::{LemmaEntry, Technique};
use crate::arith::{is_perfect_square_i128, residue_search, Integer, MultiPoly};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    /// No solution in `(Z/m)^4`; `tested = m^4`.
    Confirmed { modulus: u64, tested: u64 },
    /// A residue vector `(x, y, s, t)` solving both equations mod `m`.
    Refuted { modulus: u64, witness: Vec<u64> },
}

/// Searches `(Z/m)^4` for a common zero of both equations of a mod-tagged entry.
pub fn modular_obstruction(entry: &LemmaEntry, m: u64) -> Result<Obstruction> {
    let tag = match m {
        4 => Technique::Mod4,
        8 => Technique::Mod8,
        _ => return Err(Error::InvalidArgument(format!("modulus must be 4 or 8, got {m}"))),
    };
    if !entry.has(&tag) {
        return Err(Error::TagMismatch { id: entry.id.clone(), tag: tag.to_string() });
    }
    let sols = residue_search(&entry.system.polynomials(), m)?;
    Ok(match sols.into_iter().next() {
        None => Obstruction::Confirmed { modulus: m, tested: m.pow(4) },
        Some(witness) => Obstruction::Refuted { modulus: m, witness },
    })
}

/// Largest `B` accepted by [`quartic_curve_points`].
pub const MAX_CURVE_BOUND: u64 = 10_000_000;

/// All `(q, y)` with `|q| <= bound`, `y >= 0` and `y^2 = a4 q^4 + a2 q^2 + a0`.
pub fn quartic_curve_points(a4: i64, a2: i64, a0: i64, bound: u64) -> Result<Vec<(i64, i64)>> {
    if bound > MAX_CURVE_BOUND {
        return Err(Error::InvalidArgument(format!("bound {bound} exceeds {MAX_CURVE_BOUND}")));
    }
    let b = bound as i64;
    let mut out = Vec::new();
    for q in -b..=b {
        let q2 = i128::from(q) * i128::from(q);
        let v = i128::from(a4) * q2 * q2 + i128::from(a2) * q2 + i128::from(a0);
        if let Some(y) = is_perfect_square_i128(v) {
            out.push((q, y as i64));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    /// `t^2 > s^2 >= 1`
    TDominates,
    /// `s^2 > t^2 >= 1`
    SDominates,
}

impl Region {
    fn contains(self, s: i64, t: i64) -> bool {
        let (s2, t2) = (s * s, t * t);
        match self {
            Region::TDominates => t2 > s2 && s2 >= 1,
            Region::SDominates => s2 > t2 && t2 >= 1,
        }
    }
}

/// Claims `lower^2 < expr < upper^2` with `upper = lower + 1 > 0` on `region`,
/// which rules out `expr` being a square there. Polynomials are in `(s, t)`.
#[derive(Clone, Debug)]
pub struct SandwichProbe {
    pub expr: MultiPoly,
    pub lower: MultiPoly,
    pub upper: MultiPoly,
    pub region: Region,
}

impl SandwichProbe {
    pub fn parse(expr: &str, lower: &str, upper: &str, region: Region) -> Result<Self> {
        let vars = ["s", "t"];
        Ok(SandwichProbe {
            expr: MultiPoly::parse(expr, &vars)?,
            lower: MultiPoly::parse(lower, &vars)?,
            upper: MultiPoly::parse(upper, &vars)?,
            region,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SandwichOutcome {
    AllPass { points: usize },
    Violation { s: i64, t: i64 },
}

/// Checks the probe at every grid point with `|s|, |t| <= radius` inside its region.
pub fn sandwich_probe(probe: &SandwichProbe, radius: i64) -> Result<SandwichOutcome> {
    let mut points = 0;
    for s in -radius..=radius {
        for t in -radius..=radius {
            if !probe.region.contains(s, t) {
                continue;
            }
            points += 1;
            let at = [Integer::from(s), Integer::from(t)];
            let (e, lo, hi) = (probe.expr.eval(&at), probe.lower.eval(&at), probe.upper.eval(&at));
            let ok = !lo.is_negative() && hi == &lo + 1 && &lo * &lo < e && e < &hi * &hi;
            if !ok {
                return Ok(SandwichOutcome::Violation { s, t });
            }
        }
    }
    if points == 0 {
        return Err(Error::InvalidArgument(format!("no grid point within radius {radius} lies in the region")));
    }
    Ok(SandwichOutcome::AllPass { points })
}
