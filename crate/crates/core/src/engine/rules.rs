//! The transport relations as guarded rewrite rules.
//!
//! Each rule rewrites one connected sum into the exact right-hand side of its
//! relation, including any zeta side terms with their signs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::term::{Expr, Level, Term};
use super::trace::TraceStep;
use crate::error::{Error, Result};
use crate::index::Index;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[allow(non_camel_case_types)]
pub enum RuleId {
    SH_SYM,
    SH_MAIN,
    SH_UNLOAD,
    HAR_SYM,
    HAR_MAIN,
    HAR_UNLOAD,
    D_SYM,
    D_UP,
    D_ARROW,
    HD_UP,
    HD_ARROW,
    CS_UP,
    CS_ROTATE,
    CS_ROTATE_MODP,
    H_UP,
    H_ARROW,
}

/// How far an equality is known to hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Validity {
    #[serde(rename = "exact-finite-N")]
    ExactFiniteN,
    #[serde(rename = "limit-only")]
    LimitOnly,
    #[serde(rename = "mod-p")]
    ModP,
}

impl Validity {
    /// The weaker of two classes. Limit-only and mod-p never mix in one derivation.
    pub fn combine(self, other: Validity) -> Result<Validity> {
        use Validity::*;
        match (self, other) {
            (ExactFiniteN, x) | (x, ExactFiniteN) => Ok(x),
            (a, b) if a == b => Ok(a),
            _ => Err(Error::invariant("a derivation mixed limit-only and mod-p relations")),
        }
    }
}

impl fmt::Display for Validity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Validity::ExactFiniteN => "exact-finite-N",
            Validity::LimitOnly => "limit-only",
            Validity::ModP => "mod-p",
        })
    }
}

impl RuleId {
    pub const ALL: [RuleId; 16] = [
        RuleId::SH_SYM,
        RuleId::SH_MAIN,
        RuleId::SH_UNLOAD,
        RuleId::HAR_SYM,
        RuleId::HAR_MAIN,
        RuleId::HAR_UNLOAD,
        RuleId::D_SYM,
        RuleId::D_UP,
        RuleId::D_ARROW,
        RuleId::HD_UP,
        RuleId::HD_ARROW,
        RuleId::CS_UP,
        RuleId::CS_ROTATE,
        RuleId::CS_ROTATE_MODP,
        RuleId::H_UP,
        RuleId::H_ARROW,
    ];

    pub fn validity(self) -> Validity {
        use RuleId::*;
        match self {
            SH_SYM | SH_MAIN | SH_UNLOAD | HAR_SYM | HAR_MAIN | HAR_UNLOAD | HD_UP | HD_ARROW | CS_UP => {
                Validity::ExactFiniteN
            }
            // the symmetry holds term by term for any common truncation of both summation ranges
            D_SYM => Validity::ExactFiniteN,
            D_UP | D_ARROW | CS_ROTATE | H_UP | H_ARROW => Validity::LimitOnly,
            CS_ROTATE_MODP => Validity::ModP,
        }
    }

    /// The relation this rule implements, in the arrow notation.
    pub fn relation(self) -> &'static str {
        use RuleId::*;
        match self {
            SH_SYM => "Zш(k;l;h) = Zш(l;k;h)",
            SH_MAIN => "Zш(k_↑;l_↑;h) = Zш(k;l_↑;↑h) + Zш(k_↑;l;↑h)",
            SH_UNLOAD => "Zш(k_→;l;↑h) = Zш(k_↑;l;←h)",
            HAR_SYM => "Z*(k;l;h) = Z*(l;k;h)",
            HAR_MAIN => "Z*(←k;←l;h) = Z*(k;←l;h_→) + Z*(←k;l;h_→) + Z*(k;l;h_→↑)",
            HAR_UNLOAD => "Z*(↑k;l;h) = Z*(k;l;h_↑)",
            D_SYM => "ZD_{n,m}(k;l) = ZD_{m,n}(l;k)",
            D_UP => "ZD(k_↑;l) = ZD(k;l_→)",
            D_ARROW => "ZD(k_→;l) = ZD(k;l_↑)",
            HD_UP => "ZHD(k_↑;l) = ZHD(k;←l)",
            HD_ARROW => "ZHD(k_→;l) = ZHD(k;↑l)",
            CS_UP => "ZO(k_↑) = ZO(↑k) - ζ(k_↑)",
            CS_ROTATE => "ZO_∞(k_→) = ZO_∞(←k) + ζ(k_↑)",
            CS_ROTATE_MODP => "ZO_{p-1}(k_→) ≡ ZO_{p-1}(←k) + ζ(k_↑) + ζ(↑k) + ζ(←k)",
            H_UP => "ZH(k_↑;l) = ZH(k;↑l) + ζ(k,↑l)",
            H_ARROW => "ZH(k_→;l) = ZH(k;←l) + ζ(k,←l)",
        }
    }

    /// Evaluates the rule's precondition on `t`, returning a textual witness of what held.
    pub fn guard(self, t: &Term) -> Result<String> {
        use RuleId::*;
        let fail = |reason: String| Err(Error::RuleNotApplicable { rule: self, reason });
        match (self, t) {
            (SH_SYM, Term::Sh { .. }) => Ok("symmetry holds unconditionally".into()),
            (SH_MAIN, Term::Sh { k, l, .. }) => {
                if k.is_admissible() && l.is_admissible() {
                    Ok(format!("k={} ∈ I′ and l={} ∈ I′", k.paren(), l.paren()))
                } else {
                    fail(format!("needs k, l ∈ I′; got k={}, l={}", k.paren(), l.paren()))
                }
            }
            (SH_UNLOAD, Term::Sh { k, h, .. }) => {
                if !k.is_non_admissible() {
                    fail(format!("needs k ∈ I∖I′; got k={}", k.paren()))
                } else if h.first().unwrap_or(0) < 2 {
                    fail(format!("needs h = ↑h′ (first entry ≥ 2); got h={}", h.paren()))
                } else {
                    Ok(format!("k={} ∈ I∖I′, h={} has first entry ≥ 2", k.paren(), h.paren()))
                }
            }
            (HAR_SYM, Term::Har { .. }) => Ok("symmetry holds unconditionally".into()),
            (HAR_MAIN, Term::Har { k, l, .. }) => {
                let ok = |x: &Index| x.first() == Some(1) && !x.is_unit();
                if ok(k) && ok(l) {
                    Ok(format!("k̄, l̄ ∈ I∖(I′∪{{(1)}}) for k={}, l={}", k.paren(), l.paren()))
                } else {
                    fail(format!("needs k = ←k′, l = ←l′ with k′, l′ ≠ ∅; got k={}, l={}", k.paren(), l.paren()))
                }
            }
            (HAR_UNLOAD, Term::Har { k, .. }) => {
                if k.first().unwrap_or(0) >= 2 {
                    Ok(format!("k̄ ∈ I′ for k={}", k.paren()))
                } else {
                    fail(format!("needs first entry of k ≥ 2; got k={}", k.paren()))
                }
            }
            (D_SYM, Term::D { .. }) => Ok("symmetry holds unconditionally".into()),
            (D_UP, Term::D { k, .. }) => {
                if k.is_admissible() {
                    Ok(format!("k={} ∈ I′", k.paren()))
                } else {
                    fail(format!("needs k ∈ I′; got k={}", k.paren()))
                }
            }
            (D_ARROW, Term::D { k, l, .. }) => {
                if !k.is_non_admissible() {
                    fail(format!("needs k ∈ I∖I′; got k={}", k.paren()))
                } else if l.is_empty() {
                    fail("needs l ≠ ∅".into())
                } else {
                    Ok(format!("k={} ∈ I∖I′, l={} ≠ ∅", k.paren(), l.paren()))
                }
            }
            (HD_UP, Term::HD { k, .. }) => {
                if k.is_admissible() {
                    Ok(format!("k={} ∈ I′", k.paren()))
                } else {
                    fail(format!("needs k ∈ I′; got k={}", k.paren()))
                }
            }
            (HD_ARROW, Term::HD { k, l }) => {
                if !k.is_non_admissible() || k.is_unit() {
                    fail(format!("needs k ∈ I∖I′, k ≠ (1); got k={}", k.paren()))
                } else if l.is_empty() {
                    fail("needs l ≠ ∅".into())
                } else {
                    Ok(format!("k={} ∈ I∖I′, k ≠ (1), l ≠ ∅", k.paren()))
                }
            }
            (CS_UP, Term::O { k, .. }) => {
                if k.is_admissible() {
                    Ok(format!("k={} ∈ I′", k.paren()))
                } else {
                    fail(format!("needs k ∈ I′; got k={}", k.paren()))
                }
            }
            (CS_ROTATE, Term::O { k, level }) => {
                if *level != Level::Limit {
                    fail("stated for the limit N → ∞ only".into())
                } else if !k.is_non_admissible() {
                    fail(format!("needs k ∈ I∖I′; got k={}", k.paren()))
                } else {
                    Ok(format!("k={} ∈ I∖I′", k.paren()))
                }
            }
            (CS_ROTATE_MODP, Term::O { k, level }) => {
                if *level != Level::Truncated {
                    fail("stated at the truncation N = p - 1 only".into())
                } else if !k.is_non_admissible() {
                    fail(format!("needs k ∈ I∖I′; got k={}", k.paren()))
                } else {
                    Ok(format!("k={} ∈ I∖I′ (mod p)", k.paren()))
                }
            }
            (H_UP, Term::H { k, l }) => {
                if !k.is_admissible() {
                    fail(format!("needs k ∈ I′; got k={}", k.paren()))
                } else if !(l.is_admissible() || l.is_unit()) {
                    fail(format!("needs l ∈ I′∪{{(1)}}; got l={}", l.paren()))
                } else {
                    Ok(format!("k={} ∈ I′, l={} ∈ I′∪{{(1)}}", k.paren(), l.paren()))
                }
            }
            (H_ARROW, Term::H { k, l }) => {
                if !k.is_non_admissible() || k.is_unit() {
                    fail(format!("needs k ∈ I∖I′, k ≠ (1); got k={}", k.paren()))
                } else if !l.is_admissible() {
                    fail(format!("needs l ∈ I′; got l={}", l.paren()))
                } else {
                    Ok(format!("k={} ∈ I∖I′, k ≠ (1), l={} ∈ I′", k.paren(), l.paren()))
                }
            }
            (_, t) => fail(format!("rule does not act on {} terms", t.family_tag())),
        }
    }

    /// The right-hand side of the relation for `t`. Assumes the guard holds.
    fn rewrite(self, t: &Term) -> Result<Expr> {
        use RuleId::*;
        let one = |t: Term| Expr::single(t);
        let strip_last = |k: &Index| {
            k.strip_last_one()
                .ok_or_else(|| Error::invariant(format!("{} does not end in 1", k.paren())))
        };
        let out = match (self, t) {
            (SH_SYM, Term::Sh { k, l, h }) => one(Term::Sh { k: l.clone(), l: k.clone(), h: h.clone() }),
            (SH_MAIN, Term::Sh { k, l, h }) => Expr::zero()
                .with(Term::Sh { k: k.lower_last()?, l: l.clone(), h: h.raise_first() }, 1)
                .with(Term::Sh { k: k.clone(), l: l.lower_last()?, h: h.raise_first() }, 1),
            (SH_UNLOAD, Term::Sh { k, l, h }) => {
                let kp = strip_last(k)?;
                one(Term::Sh { k: kp.raise_last(), l: l.clone(), h: h.lower_first()?.prepend_one() })
            }
            (HAR_SYM, Term::Har { k, l, h }) => one(Term::Har { k: l.clone(), l: k.clone(), h: h.clone() }),
            (HAR_MAIN, Term::Har { k, l, h }) => {
                let kp = k.strip_first_one().expect("guard checked");
                let lp = l.strip_first_one().expect("guard checked");
                let h_app = h.append_one();
                Expr::zero()
                    .with(Term::Har { k: kp.clone(), l: l.clone(), h: h_app.clone() }, 1)
                    .with(Term::Har { k: k.clone(), l: lp.clone(), h: h_app.clone() }, 1)
                    .with(Term::Har { k: kp, l: lp, h: h_app.raise_last() }, 1)
            }
            (HAR_UNLOAD, Term::Har { k, l, h }) => {
                one(Term::Har { k: k.lower_first()?, l: l.clone(), h: h.raise_last() })
            }
            (D_SYM, Term::D { k, l, tails }) => one(Term::D { k: l.clone(), l: k.clone(), tails: tails.flipped() }),
            (D_UP, Term::D { k, l, tails }) => one(Term::D { k: k.lower_last()?, l: l.append_one(), tails: *tails }),
            (D_ARROW, Term::D { k, l, tails }) => one(Term::D { k: strip_last(k)?, l: l.raise_last(), tails: *tails }),
            (HD_UP, Term::HD { k, l }) => one(Term::HD { k: k.lower_last()?, l: l.prepend_one() }),
            (HD_ARROW, Term::HD { k, l }) => one(Term::HD { k: strip_last(k)?, l: l.raise_first() }),
            (CS_UP, Term::O { k, level }) => Expr::zero()
                .with(Term::O { k: k.lower_last()?.raise_first(), level: *level }, 1)
                .with(Term::zeta(k.clone(), *level), -1),
            (CS_ROTATE, Term::O { k, level }) => {
                let kp = strip_last(k)?;
                Expr::zero()
                    .with(Term::O { k: kp.prepend_one(), level: *level }, 1)
                    .with(Term::zeta(kp.raise_last(), Level::Limit), 1)
            }
            (CS_ROTATE_MODP, Term::O { k, level }) => {
                let kp = strip_last(k)?;
                Expr::zero()
                    .with(Term::O { k: kp.prepend_one(), level: *level }, 1)
                    .with(Term::zeta(kp.raise_last(), Level::Truncated), 1)
                    .with(Term::zeta(kp.raise_first(), Level::Truncated), 1)
                    .with(Term::zeta(kp.prepend_one(), Level::Truncated), 1)
            }
            (H_UP, Term::H { k, l }) => {
                let kd = k.lower_last()?;
                let lu = l.raise_first();
                Expr::zero()
                    .with(Term::zeta(kd.concat(&lu), Level::Limit), 1)
                    .with(Term::H { k: kd, l: lu }, 1)
            }
            (H_ARROW, Term::H { k, l }) => {
                let kp = strip_last(k)?;
                let ll = l.prepend_one();
                Expr::zero()
                    .with(Term::zeta(kp.concat(&ll), Level::Limit), 1)
                    .with(Term::H { k: kp, l: ll }, 1)
            }
            _ => return Err(Error::invariant(format!("rule {self} applied to {t}"))),
        };
        Ok(out)
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for RuleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.to_string() == s)
            .ok_or_else(|| Error::Usage(format!("unknown rule {s:?}")))
    }
}

/// Applies `r` to `t`, returning the replacement expression and its trace step.
///
/// A failing guard yields [`Error::RuleNotApplicable`]; an arrow that cannot be
/// applied after the guard passed is an invariant violation.
pub fn apply_rule(t: &Term, r: RuleId) -> Result<(Expr, TraceStep)> {
    t.check()?;
    let witness = r.guard(t)?;
    let after = r.rewrite(t).map_err(|e| match e {
        Error::InapplicableArrow { op, index } => {
            Error::invariant(format!("rule {r} demanded arrow {op} on {index} after its guard held"))
        }
        other => other,
    })?;
    for term in after.terms() {
        term.check().map_err(|e| Error::invariant(format!("rule {r} produced an ill-formed term: {e}")))?;
    }
    let step = TraceStep { rule: r, before: t.clone(), after: after.clone(), guard: witness };
    Ok((after, step))
}
