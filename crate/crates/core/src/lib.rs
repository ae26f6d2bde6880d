//! Connected sums for multiple zeta values.
//!
//! The [`engine`] runs the transport algorithms for the shuffle and harmonic
//! products, duality, Hoffman duality, the cyclic sum formula and Hoffman's
//! relation as guarded rewriting, recording replayable traces. [`numeric`]
//! evaluates truncated sums and connected sums exactly, and [`finite`] checks
//! congruences for finite multiple zeta values modulo a prime.

pub mod engine;
pub mod error;
pub mod finite;
pub mod index;
pub mod numeric;
pub mod sweep;

pub use engine::{Expr, Family, Identity, RuleId, Term, Trace, Validity};
pub use error::{Error, Result};
pub use finite::Residue;
pub use index::{FormalSum, Index};

/// Exact rational numbers used for coefficients and values.
pub type Rational = num_rational::BigRational;
