use std::fmt;

use serde::{Deserialize, Serialize};

use super::residue::{PrimeField, Residue};
use crate::engine::{apply_rule, derive_cyclic_identity_mod_p, derive_shuffle, Identity, RuleId, Term, Validity};
use crate::error::{Error, Result};
use crate::index::{oracle::shuffle_oracle, FormalSum, Index};
use crate::numeric::{eval_expr_in, eval_poly_in, eval_term_in, zeta_trunc_in, EvalParams, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Congruence {
    Congruent,
    NotCongruent,
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Congruence::Congruent => "congruent",
            Congruence::NotCongruent => "not-congruent",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub p: u64,
    pub lhs: u64,
    pub rhs: u64,
    pub verdict: Congruence,
    pub instance: String,
}

impl CongruenceReport {
    fn new(instance: String, lhs: Residue, rhs: Residue) -> Self {
        let verdict = if lhs == rhs { Congruence::Congruent } else { Congruence::NotCongruent };
        CongruenceReport { p: lhs.modulus(), lhs: lhs.value(), rhs: rhs.value(), verdict, instance }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Congruence::Congruent
    }
}

impl fmt::Display for CongruenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "instance: {}", self.instance)?;
        writeln!(f, "lhs ≡ {} (mod {})", self.lhs, self.p)?;
        writeln!(f, "rhs ≡ {} (mod {})", self.rhs, self.p)?;
        write!(f, "verdict: {}", self.verdict)
    }
}

/// `ζ_{p-1}(k)` reduced mod `p`.
pub fn zeta_mod_p(k: &Index, p: u64) -> Result<Residue> {
    let f = PrimeField::new(p)?;
    zeta_in(k, &f)
}

fn zeta_in(k: &Index, f: &PrimeField) -> Result<Residue> {
    zeta_trunc_in::<Residue>(k, (f.p() - 1) as u32, f)
}

fn sum_in(s: &FormalSum, f: &PrimeField) -> Result<Residue> {
    let mut acc = Residue::zero(f);
    for (h, c) in s.iter() {
        acc = acc + f.from_i64(c) * zeta_in(h, f)?;
    }
    Ok(acc)
}

fn signed_concat(k: &Index, l: &Index, f: &PrimeField) -> Result<Residue> {
    let v = zeta_in(&k.concat(&l.reversed()), f)?;
    Ok(if l.weight().is_multiple_of(2) { v } else { -v })
}

/// `(-1)^{wt l} ζ_{p-1}(k, l̄) ≡ Σ a_h ζ_{p-1}(h)` with the `a_h` from the engine,
/// cross-checked against the classical shuffle product.
pub fn verify_shuffle_mod_p(k: &Index, l: &Index, p: u64) -> Result<CongruenceReport> {
    let f = PrimeField::new(p)?;
    let (engine, _) = derive_shuffle(k, l)?;
    let oracle = shuffle_oracle(k, l);
    let lhs = signed_concat(k, l, &f)?;
    let rhs = sum_in(&engine, &f)?;
    let rhs_oracle = sum_in(&oracle, &f)?;
    if (lhs == rhs) != (lhs == rhs_oracle) {
        return Err(Error::invariant(format!(
            "engine and oracle shuffle products of {} and {} disagree mod {p}",
            k.paren(),
            l.paren()
        )));
    }
    let id = Identity::shuffle_mod_p(k, l, &engine)?;
    Ok(CongruenceReport::new(format!("{id} at p = {p}"), lhs, rhs))
}

/// `Zш_{p-1}(k_↑; l_↑; (1)) ≡ (-1)^{wt l} ζ_{p-1}(k, l̄)`.
pub fn verify_boundary_mod_p(k: &Index, l: &Index, p: u64) -> Result<CongruenceReport> {
    let f = PrimeField::new(p)?;
    let t = Term::Sh { k: k.raise_last(), l: l.raise_last(), h: Index::from_slice(&[1]) };
    let n = (p - 1) as u32;
    let lhs = eval_term_in::<Residue>(&t, &EvalParams::new(n, n), &f)?;
    let rhs = signed_concat(k, l, &f)?;
    let instance = format!("{t} ≡ (-1)^{} ζ_{{p-1}}({}) at p = {p}", l.weight(), k.concat(&l.reversed()));
    Ok(CongruenceReport::new(instance, lhs, rhs))
}

/// Evaluates both sides of an identity at `N = p - 1` mod `p`. Identities that
/// hold for every `N` hold in particular there; limit identities are refused.
pub fn verify_identity_mod_p(id: &Identity, p: u64) -> Result<CongruenceReport> {
    if id.validity == Validity::LimitOnly {
        return Err(Error::Usage("limit identities are checked numerically, not modulo a prime".into()));
    }
    let f = PrimeField::new(p)?;
    let n = (p - 1) as u32;
    let lhs = eval_poly_in::<Residue>(&id.lhs, n, &f)?;
    let rhs = eval_poly_in::<Residue>(&id.rhs, n, &f)?;
    Ok(CongruenceReport::new(format!("{id} at p = {p}"), lhs, rhs))
}

/// The cyclic sum congruence for the class of `k`.
pub fn verify_cyclic_mod_p(k: &Index, p: u64) -> Result<CongruenceReport> {
    PrimeField::new(p)?;
    let (id, _) = derive_cyclic_identity_mod_p(k)?;
    verify_identity_mod_p(&id, p)
}

/// Both sides of one rule application at `N = p - 1`, mod `p`.
pub fn check_transport_mod_p(r: RuleId, t: &Term, p: u64) -> Result<CongruenceReport> {
    if r.validity() == Validity::LimitOnly {
        return Err(Error::Usage(format!("rule {r} holds only in the limit")));
    }
    let f = PrimeField::new(p)?;
    let (after, _) = apply_rule(t, r)?;
    let n = (p - 1) as u32;
    let params = EvalParams::new(n, n);
    let lhs = eval_term_in::<Residue>(t, &params, &f)?;
    let rhs = eval_expr_in::<Residue>(&after, &params, &f)?;
    Ok(CongruenceReport::new(format!("[{r}] {t} ≡ {after} at p = {p}"), lhs, rhs))
}
