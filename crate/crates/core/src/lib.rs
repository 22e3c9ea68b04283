//! Irreducible polynomials in composition semigroups generated by `x^2 + c`.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: exact integer utilities (square detection, divisors, residue search).
//! * [`dynamics`]: generator sets, words, adjusted critical orbits and the
//!   square-free-orbit irreducibility certificate.
//! * [`portraits`]: rational periodic and preperiodic points of a single map.
//! * [`heights`]: canonical heights, integral points on `Y^2 = phi^2(X)` and the
//!   iterate bound `N`.
//! * [`exceptional`]: exceptional-pair classification and the constructive
//!   irreducible-prefix recipe.
//! * [`diophantine`]: the 48-case lemma registry and its bounded verifier.
//! * [`oracle`]: an independent exact irreducibility test for small degrees.

pub mod arith;
pub mod diophantine;
pub mod dynamics;
mod error;
pub mod exceptional;
pub mod heights;
pub mod oracle;
pub mod portraits;

pub use arith::Integer;
pub use error::{Error, Result};

pub use dynamics::{GeneratorSet, QuadraticMap, StabilityStatus, StabilityVerdict, Word};
pub use exceptional::{ExceptionalVerdict, PrefixRecipe};
pub use portraits::Portrait;
