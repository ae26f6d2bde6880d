use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::connected::{eval_expr_in, eval_term_in, EvalParams};
use super::mhs::{h_star_in, zeta_star_trunc_in};
use super::scalar::Scalar;
use crate::engine::{apply_rule, derive_dual, Identity, Level, RuleId, Tails, Term, Validity, ZetaFn, ZetaPoly};
use crate::error::{Error, Result};
use crate::index::Index;
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ExactPass,
    ExactFail,
    WithinTolerance,
    OutsideTolerance,
}

impl Verdict {
    pub fn passed(self) -> bool {
        matches!(self, Verdict::ExactPass | Verdict::WithinTolerance)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ExactPass => "exact-pass",
            Verdict::ExactFail => "exact-fail",
            Verdict::WithinTolerance => "within-tolerance",
            Verdict::OutsideTolerance => "outside-tolerance",
        })
    }
}

pub(crate) mod ratio_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| serde::de::Error::custom(format!("bad rational {s:?}")))
    }
}

/// Cap-doubling diagnostic: `|lhs - rhs|` recomputed at twice the cap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convergence {
    pub cap: u32,
    #[serde(with = "ratio_str")]
    pub doubled_diff: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalReport {
    pub instance: String,
    #[serde(with = "ratio_str")]
    pub lhs: Rational,
    #[serde(with = "ratio_str")]
    pub rhs: Rational,
    #[serde(with = "ratio_str")]
    pub diff: Rational,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence: Option<Convergence>,
}

impl EvalReport {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    fn exact(instance: String, lhs: Rational, rhs: Rational) -> Self {
        let diff = (&lhs - &rhs).abs();
        let verdict = if Zero::is_zero(&diff) { Verdict::ExactPass } else { Verdict::ExactFail };
        EvalReport { instance, lhs, rhs, diff, verdict, convergence: None }
    }

    fn limit(instance: String, at_cap: (Rational, Rational), at_double: (Rational, Rational), cap: u32, tol: &Rational) -> Self {
        let (lhs, rhs) = at_cap;
        let diff = (&lhs - &rhs).abs();
        let doubled_diff = (&at_double.0 - &at_double.1).abs();
        let verdict = if &diff <= tol && doubled_diff <= diff {
            Verdict::WithinTolerance
        } else {
            Verdict::OutsideTolerance
        };
        EvalReport { instance, lhs, rhs, diff, verdict, convergence: Some(Convergence { cap, doubled_diff }) }
    }
}

fn approx(r: &Rational) -> String {
    match r.to_f64() {
        Some(x) => format!("{x:.12}"),
        None => "?".into(),
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "instance: {}", self.instance)?;
        writeln!(f, "lhs ≈ {}", approx(&self.lhs))?;
        writeln!(f, "rhs ≈ {}", approx(&self.rhs))?;
        let exact = self.diff.to_string();
        if exact.len() <= 40 {
            writeln!(f, "|lhs - rhs| = {exact} ≈ {}", approx(&self.diff))?;
        } else {
            writeln!(f, "|lhs - rhs| ≈ {}", approx(&self.diff))?;
        }
        if let Some(c) = &self.convergence {
            writeln!(f, "at cap {}: |lhs - rhs| ≈ {}", 2 * c.cap, approx(&c.doubled_diff))?;
        }
        write!(f, "verdict: {}", self.verdict)
    }
}

/// Value of one factor `ζ_N`, `ζ⋆_N` or `H⋆_N`.
pub fn eval_factor_in<S: Scalar>(func: ZetaFn, k: &Index, n: u32, ctx: &S::Ctx) -> Result<S> {
    match func {
        ZetaFn::Zeta => S::zeta_trunc(k, n, ctx),
        ZetaFn::ZetaStar => zeta_star_trunc_in(k, n, ctx),
        ZetaFn::HStar => h_star_in(k, n, ctx),
    }
}

/// Value of a polynomial in nested sums, all truncated at `n`.
pub fn eval_poly_in<S: Scalar>(p: &ZetaPoly, n: u32, ctx: &S::Ctx) -> Result<S> {
    let mut total = S::zero(ctx);
    for (mono, c) in p.iter() {
        let mut v = S::from_int(c, ctx);
        for f in mono {
            v = v * eval_factor_in::<S>(f.func, &f.index, n, ctx)?;
        }
        total = total + v;
    }
    Ok(total)
}

fn need_tol<'a>(tol: Option<&'a Rational>, what: &str) -> Result<&'a Rational> {
    match tol {
        Some(t) if t.is_positive() => Ok(t),
        Some(t) => Err(Error::Usage(format!("tolerance must be positive, got {t}"))),
        None => Err(Error::Usage(format!("{what} holds only in the limit; a tolerance is required"))),
    }
}

/// Checks an identity: exactly at `N` for finite-N identities, at the cap
/// (and twice the cap) against `tol` for limit identities.
pub fn verify_identity_numeric(id: &Identity, params: &EvalParams, tol: Option<&Rational>) -> Result<EvalReport> {
    let instance = id.to_string();
    match id.validity {
        Validity::ExactFiniteN => {
            let lhs = eval_poly_in::<Rational>(&id.lhs, params.n, &())?;
            let rhs = eval_poly_in::<Rational>(&id.rhs, params.n, &())?;
            Ok(EvalReport::exact(format!("{instance} at N = {}", params.n), lhs, rhs))
        }
        Validity::LimitOnly => {
            let tol = need_tol(tol, "this identity")?;
            id.check()?;
            let at = |n: u32| -> Result<(Rational, Rational)> {
                Ok((eval_poly_in::<Rational>(&id.lhs, n, &())?, eval_poly_in::<Rational>(&id.rhs, n, &())?))
            };
            let (a, b) = (at(params.cap)?, at(2 * params.cap)?);
            Ok(EvalReport::limit(format!("{instance} at cap {}", params.cap), a, b, params.cap, tol))
        }
        Validity::ModP => Err(Error::Usage("congruences are checked modulo a prime, not numerically".into())),
    }
}

/// Evaluates both sides of one rule application.
pub fn check_transport_numeric(r: RuleId, t: &Term, params: &EvalParams, tol: Option<&Rational>) -> Result<EvalReport> {
    let (after, _) = apply_rule(t, r)?;
    let instance = format!("[{r}] {t} = {after}");
    let lhs = Term::clone(t);
    match r.validity() {
        Validity::ExactFiniteN => {
            let l = eval_term_in::<Rational>(&lhs, params, &())?;
            let rr = eval_expr_in::<Rational>(&after, params, &())?;
            Ok(EvalReport::exact(format!("{instance} at N = {}, cap {}", params.n, params.cap), l, rr))
        }
        Validity::LimitOnly => {
            let tol = need_tol(tol, &format!("rule {r}"))?;
            let at = |p: EvalParams| -> Result<(Rational, Rational)> {
                Ok((eval_term_in::<Rational>(&lhs, &p, &())?, eval_expr_in::<Rational>(&after, &p, &())?))
            };
            let a = at(*params)?;
            let b = at(params.with_cap(2 * params.cap))?;
            Ok(EvalReport::limit(format!("{instance} at cap {}", params.cap), a, b, params.cap, tol))
        }
        Validity::ModP => Err(Error::Usage(format!("rule {r} is a congruence; check it modulo a prime"))),
    }
}

/// `ζ_{n,m}(k) = ζ_{m,n}(k†)` by partial sums, with `k†` from the duality algorithm.
pub fn verify_duality_tails(k: &Index, n: u32, m: u32, cap: u32, tol: &Rational) -> Result<EvalReport> {
    let (dual, _) = derive_dual(k)?;
    let lhs = Term::D { k: k.clone(), l: Index::empty(), tails: Tails::Straight };
    let rhs = Term::D { k: dual.clone(), l: Index::empty(), tails: Tails::Swapped };
    let p = EvalParams::new(cap, cap).with_tails(n, m);
    let at = |p: EvalParams| -> Result<(Rational, Rational)> {
        Ok((eval_term_in::<Rational>(&lhs, &p, &())?, eval_term_in::<Rational>(&rhs, &p, &())?))
    };
    let a = at(p)?;
    let b = at(p.with_cap(2 * cap))?;
    let instance = format!("ζ_{{{n},{m}}}{} = ζ_{{{m},{n}}}{} at cap {cap}", k.paren(), dual.paren());
    Ok(EvalReport::limit(instance, a, b, cap, tol))
}

/// One boundary condition instance, evaluated exactly.
#[derive(Debug, Clone)]
pub struct BoundaryCheck {
    pub name: String,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl BoundaryCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// The boundary conditions that hold exactly at finite truncation, instantiated at
/// `k`, `l` and `N`: the shuffle terminal, both harmonic boundaries, both Hoffman-dual
/// boundaries, and `Z^H((1); k) = ζ(←k)` (exact for every cap).
pub fn boundary_checks(k: &Index, l: &Index, n: u32) -> Result<Vec<BoundaryCheck>> {
    let p = EvalParams::new(n, n);
    let val = |t: Term| eval_term_in::<Rational>(&t, &p, &());
    let z = |x: &Index| super::mhs::zeta_trunc(x, n);
    let mut out = Vec::new();
    let mut push = |name: String, lhs: Rational, rhs: Rational| out.push(BoundaryCheck { name, lhs, rhs });
    // Zш(∅; k_↑; ←l) = ζ_N(k, l)
    push(
        format!("Zш(∅;{};{}) = ζ_N({})", k.raise_last().paren(), l.prepend_one().paren(), k.concat(l)),
        val(Term::Sh { k: Index::empty(), l: k.raise_last(), h: l.prepend_one() })?,
        z(&k.concat(l)),
    );
    push(
        format!("Z*(←{};←{};∅) = ζ_N·ζ_N", k.paren(), l.paren()),
        val(Term::Har { k: k.prepend_one(), l: l.prepend_one(), h: Index::empty() })?,
        z(k) * z(l),
    );
    // Z*((1); ↑^j←l; k) = ζ_N(k_{↑^j}, l)
    for j in 0..3u32 {
        if j > 0 && k.is_empty() {
            continue;
        }
        let second = l.prepend_one().raise_first_by(j);
        push(
            format!("Z*((1);{};{}) = ζ_N", second.paren(), k.paren()),
            val(Term::Har { k: Index::from_slice(&[1]), l: second.clone(), h: k.clone() })?,
            z(&k.raise_last_by(j).concat(l)),
        );
    }
    if !k.is_empty() {
        push(
            format!("ZHD({};∅) = H⋆_N{}", k.raise_last().paren(), k.paren()),
            val(Term::HD { k: k.raise_last(), l: Index::empty() })?,
            super::mhs::h_star(k, n)?,
        );
        push(
            format!("ZHD((1);{}) = ζ⋆_N{}", k.paren(), k.paren()),
            val(Term::HD { k: Index::from_slice(&[1]), l: k.clone() })?,
            super::mhs::zeta_star_trunc(k, n),
        );
    }
    if k.is_admissible() {
        push(
            format!("ZH((1);{}) = ζ(←{}) at cap {n}", k.paren(), k.paren()),
            val(Term::H { k: Index::from_slice(&[1]), l: k.clone() })?,
            eval_term_in::<Rational>(&Term::zeta(k.prepend_one(), Level::Limit), &p, &())?,
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{derive_harmonic, derive_hoffman_dual};
    use crate::ind;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn harmonic_identity_exact() {
        let (_, t) = derive_harmonic(&ind!(1), &ind!(2)).unwrap();
        let r = verify_identity_numeric(t.identity.as_ref().unwrap(), &EvalParams::new(10, 10), None).unwrap();
        assert_eq!(r.verdict, Verdict::ExactPass);
    }

    #[test]
    fn hoffman_dual_identity_exact() {
        let (_, t) = derive_hoffman_dual(&ind!(3, 2)).unwrap();
        let r = verify_identity_numeric(t.identity.as_ref().unwrap(), &EvalParams::new(6, 6), None).unwrap();
        assert_eq!(r.verdict, Verdict::ExactPass);
    }

    #[test]
    fn limit_identity_needs_tolerance() {
        let (_, t) = derive_dual(&ind!(3, 2)).unwrap();
        let id = t.identity.unwrap();
        assert!(matches!(verify_identity_numeric(&id, &EvalParams::new(10, 50), None), Err(Error::Usage(_))));
        let r = verify_identity_numeric(&id, &EvalParams::new(10, 200), Some(&q(1, 10))).unwrap();
        assert_eq!(r.verdict, Verdict::WithinTolerance, "{r}");
        assert!(r.convergence.unwrap().doubled_diff <= r.diff);
    }

    #[test]
    fn transport_examples() {
        let t = Term::Har { k: ind!(1, 1), l: ind!(1, 2), h: ind!() };
        let r = check_transport_numeric(RuleId::HAR_MAIN, &t, &EvalParams::new(8, 8), None).unwrap();
        assert_eq!(r.verdict, Verdict::ExactPass, "{r}");
        let t = Term::HD { k: ind!(2, 2), l: ind!() };
        let r = check_transport_numeric(RuleId::HD_UP, &t, &EvalParams::new(5, 5), None).unwrap();
        assert_eq!(r.verdict, Verdict::ExactPass, "{r}");
        let t = Term::D { k: ind!(2), l: ind!(1), tails: Tails::Straight };
        let r = check_transport_numeric(RuleId::D_UP, &t, &EvalParams::new(5, 100), Some(&q(1, 10))).unwrap();
        assert_eq!(r.verdict, Verdict::WithinTolerance, "{r}");
    }

    #[test]
    fn report_json_shape() {
        let (_, t) = derive_harmonic(&ind!(1), &ind!(2)).unwrap();
        let r = verify_identity_numeric(t.identity.as_ref().unwrap(), &EvalParams::new(3, 3), None).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["verdict"], "exact-pass");
        assert_eq!(v["diff"], "0");
        let back: EvalReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn boundaries_small() {
        for k in Index::all_up_to_weight(3) {
            for l in Index::all_up_to_weight(2) {
                for c in boundary_checks(&k, &l, 6).unwrap() {
                    assert!(c.holds(), "{}", c.name);
                }
            }
        }
    }
}
