//! Finite multiple zeta values `ζ_{p-1}(k)` modulo a prime and the congruences
//! they satisfy.

mod congruence;
mod residue;

pub use congruence::{
    check_transport_mod_p, verify_boundary_mod_p, verify_cyclic_mod_p, verify_identity_mod_p, verify_shuffle_mod_p,
    zeta_mod_p, Congruence, CongruenceReport,
};
pub use residue::{is_prime, PrimeField, Residue, MAX_PRIME};
