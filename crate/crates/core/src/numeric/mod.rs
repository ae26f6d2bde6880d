//! Exact evaluation of truncated nested sums and connected sums, and numeric
//! verification of transport relations, boundary conditions and identities.

mod connected;
mod mhs;
mod scalar;
mod verify;

pub use connected::{connector_value, eval_connected, eval_expr, eval_expr_in, eval_term_in, ConnectorKind, EvalParams};
pub use mhs::{h_star, h_star_in, zeta_star_trunc, zeta_star_trunc_in, zeta_trunc, zeta_trunc_in};
pub use scalar::Scalar;
pub use verify::{
    boundary_checks, check_transport_numeric, eval_factor_in, eval_poly_in, verify_duality_tails,
    verify_identity_numeric, BoundaryCheck, Convergence, EvalReport, Verdict,
};

/// Default truncation for exact checks.
pub const DEFAULT_N: u32 = 20;
/// Default cap for limit checks.
pub const DEFAULT_CAP: u32 = 1000;

/// Default tolerance `10/cap`.
pub fn default_tolerance(cap: u32) -> crate::Rational {
    crate::Rational::new(10.into(), cap.into())
}
