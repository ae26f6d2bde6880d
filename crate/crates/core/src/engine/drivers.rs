//! Algorithm drivers: each runs one rule system from its start term until every
//! connected sum is terminal, and reads the result off the boundary conditions.

use std::collections::HashMap;

use num_traits::{One, ToPrimitive};

use super::identity::{Identity, ZetaPoly};
use super::rules::{apply_rule, RuleId, Validity};
use super::term::{Expr, Level, Tails, Term};
use super::trace::{Trace, TraceStep};
use super::Family;
use crate::error::{Error, Result};
use crate::index::{cyclic_class, FormalSum, Index};
use crate::Rational;

/// The rule the algorithm for `family` applies to `t`, or `None` when `t` is terminal.
///
/// Guards are tried in the fixed order stop, unload, swap, main. A state in
/// which no rule is admissible is reported as an invariant violation.
pub fn select_rule(family: Family, t: &Term) -> Result<Option<RuleId>> {
    use RuleId::*;
    let stuck = |why: &str| Err(Error::invariant(format!("no {family} rule applies to {t}: {why}")));
    match (family, t) {
        (_, Term::Zeta { .. }) => Ok(None),
        (Family::Shuffle, Term::Sh { k, l, h }) => {
            if k.is_empty() {
                return Ok(None);
            }
            if k.is_non_admissible() {
                if l.is_non_admissible() {
                    return stuck("both leading slots lie in I∖I′");
                }
                if h.first().unwrap_or(0) < 2 {
                    return stuck("unloading needs the third slot to start with an entry ≥ 2");
                }
                return Ok(Some(SH_UNLOAD));
            }
            if !l.is_admissible() {
                return Ok(Some(SH_SYM));
            }
            Ok(Some(SH_MAIN))
        }
        (Family::Harmonic, Term::Har { k, l, .. }) => {
            if k.is_unit() {
                return Ok(None);
            }
            if k.first() >= Some(2) {
                return Ok(Some(HAR_UNLOAD));
            }
            if l.first() >= Some(2) || l.is_unit() {
                return Ok(Some(HAR_SYM));
            }
            Ok(Some(HAR_MAIN))
        }
        (Family::Dual, Term::D { k, l, .. }) => {
            if k.is_empty() {
                Ok(None)
            } else if k.is_admissible() {
                Ok(Some(D_UP))
            } else if l.is_empty() {
                stuck("k ∈ I∖I′ with an empty second slot")
            } else {
                Ok(Some(D_ARROW))
            }
        }
        (Family::HoffmanDual, Term::HD { k, l }) => {
            if k.is_unit() {
                Ok(None)
            } else if k.is_admissible() {
                Ok(Some(HD_UP))
            } else if l.is_empty() {
                stuck("k ∈ I∖I′ with an empty second slot")
            } else {
                Ok(Some(HD_ARROW))
            }
        }
        (Family::Cyclic | Family::CyclicModP, Term::O { k, level }) => {
            if k.is_admissible() {
                Ok(Some(CS_UP))
            } else if *level == Level::Limit {
                Ok(Some(CS_ROTATE))
            } else {
                Ok(Some(CS_ROTATE_MODP))
            }
        }
        (Family::Hoffman, Term::H { k, l }) => {
            if k.is_unit() {
                Ok(None)
            } else if k.is_admissible() {
                if l.is_admissible() || l.is_unit() {
                    Ok(Some(H_UP))
                } else {
                    stuck("second slot outside I′∪{(1)}")
                }
            } else if l.is_admissible() {
                Ok(Some(H_ARROW))
            } else {
                stuck("second slot outside I′")
            }
        }
        _ => Err(Error::invariant(format!("{t} does not belong to the {family} algorithm"))),
    }
}

/// `4·(wt(k)+wt(l)+depth(k)+depth(l)+1)²`.
pub fn step_bound(k: &Index, l: &Index) -> usize {
    let s = (k.weight() + l.weight()) as usize + k.depth() + l.depth() + 1;
    4 * s * s
}

struct Run {
    family: Family,
    start: Expr,
    cur: Expr,
    steps: Vec<TraceStep>,
    validity: Validity,
}

impl Run {
    fn new(family: Family, start: Term) -> Result<Self> {
        start.check()?;
        let e = Expr::single(start);
        Ok(Run { family, start: e.clone(), cur: e, steps: Vec::new(), validity: Validity::ExactFiniteN })
    }

    /// Applies the selected rule to `t` (which must occur in the running expression)
    /// and returns what replaced it.
    fn step(&mut self, t: &Term) -> Result<Expr> {
        let rule = select_rule(self.family, t)?
            .ok_or_else(|| Error::invariant(format!("{t} is terminal but was selected for rewriting")))?;
        let (after, step) = apply_rule(t, rule).map_err(|e| match e {
            Error::RuleNotApplicable { rule, reason } => {
                Error::invariant(format!("selected rule {rule} failed its guard on {t}: {reason}"))
            }
            other => other,
        })?;
        self.validity = self.validity.combine(rule.validity())?;
        self.cur.substitute(t, &after);
        self.steps.push(step);
        Ok(after)
    }

    /// Rewrites the first non-terminal term (in canonical order) until none is left.
    /// `bound` caps the number of rewrites along any one chain from the start term;
    /// the total grows with the number of terms in the result.
    fn run_to_terminal(&mut self, bound: usize) -> Result<()> {
        let mut depth: HashMap<Term, usize> = HashMap::new();
        loop {
            let mut next = None;
            for t in self.cur.terms() {
                if select_rule(self.family, t)?.is_some() {
                    next = Some(t.clone());
                    break;
                }
            }
            let Some(t) = next else { return Ok(()) };
            let d = depth.get(&t).copied().unwrap_or(0);
            if d >= bound {
                return Err(Error::invariant(format!(
                    "{} derivation exceeded its step bound {bound} at {t}",
                    self.family
                )));
            }
            for u in self.step(&t)?.terms() {
                let e = depth.entry(u.clone()).or_insert(0);
                *e = (*e).max(d + 1);
            }
        }
    }

    fn finish(self, identity: Option<Identity>) -> Trace {
        Trace { family: self.family, start: self.start, steps: self.steps, result: self.cur, identity }
    }
}

fn integer_coeff(c: &Rational, what: &Term) -> Result<i64> {
    if !c.is_integer() {
        return Err(Error::invariant(format!("non-integral coefficient {c} on {what}")));
    }
    c.to_integer()
        .to_i64()
        .ok_or_else(|| Error::invariant(format!("coefficient {c} on {what} overflows")))
}

fn shuffle_terminal(t: &Term) -> Result<Index> {
    let Term::Sh { k, l, h } = t else {
        return Err(Error::invariant(format!("{t} is not a shuffle term")));
    };
    if !k.is_empty() {
        return Err(Error::invariant(format!("{t} is not terminal")));
    }
    // Zш(∅; a_↑; ←b) = ζ_N(a, b)
    let a = l.lower_last().map_err(|_| Error::invariant(format!("second slot of {t} is not of the form h_↑")))?;
    let b = h
        .strip_first_one()
        .ok_or_else(|| Error::invariant(format!("third slot of {t} is not of the form ←h′")))?;
    Ok(a.concat(&b))
}

/// `k ш l` by the shuffle algorithm, starting from `Zш(k_↑; l_↑; (1))`.
pub fn derive_shuffle(k: &Index, l: &Index) -> Result<(FormalSum, Trace)> {
    let start = Term::Sh { k: k.raise_last(), l: l.raise_last(), h: Index::from_slice(&[1]) };
    let mut run = Run::new(Family::Shuffle, start)?;
    run.run_to_terminal(step_bound(k, l))?;
    let mut out = FormalSum::zero();
    for (t, c) in run.cur.iter() {
        out.add_term(shuffle_terminal(t)?, integer_coeff(c, t)?);
    }
    let identity = if (k.is_empty() || k.is_admissible()) && (l.is_empty() || l.is_admissible()) {
        Identity::shuffle(k, l, &out)?
    } else {
        Identity::shuffle_mod_p(k, l, &out)?
    };
    Ok((out, run.finish(Some(identity))))
}

fn harmonic_terminal(t: &Term) -> Result<Index> {
    let Term::Har { k, l, h } = t else {
        return Err(Error::invariant(format!("{t} is not a harmonic term")));
    };
    if !k.is_unit() {
        return Err(Error::invariant(format!("{t} is not terminal")));
    }
    // Z*((1); ↑^j←b; a) = ζ_N(a_{↑^j}, b)
    let j = l.first().expect("well-formed harmonic term") - 1;
    let b = l.suffix(1);
    if j > 0 && h.is_empty() {
        return Err(Error::invariant(format!("{t} raises an empty third slot")));
    }
    Ok(h.raise_last_by(j).concat(&b))
}

/// `k * l` by the harmonic algorithm, starting from `Z*(←k; ←l; ∅)`.
pub fn derive_harmonic(k: &Index, l: &Index) -> Result<(FormalSum, Trace)> {
    let start = Term::Har { k: k.prepend_one(), l: l.prepend_one(), h: Index::empty() };
    let mut run = Run::new(Family::Harmonic, start)?;
    run.run_to_terminal(step_bound(k, l))?;
    let mut out = FormalSum::zero();
    for (t, c) in run.cur.iter() {
        out.add_term(harmonic_terminal(t)?, integer_coeff(c, t)?);
    }
    let identity = Identity::harmonic(k, l, &out)?;
    Ok((out, run.finish(Some(identity))))
}

/// Runs a two-slot transport for exactly `wt(k)` steps and returns the terminal second slot.
fn derive_linear(family: Family, start: Term, steps: u32) -> Result<(Index, Run)> {
    let mut run = Run::new(family, start)?;
    let mut t = run.cur.terms().next().expect("single start term").clone();
    for _ in 0..steps {
        run.step(&t)?;
        t = match run.cur.iter().collect::<Vec<_>>().as_slice() {
            [(t, c)] if c.is_one() => (*t).clone(),
            _ => return Err(Error::invariant(format!("{family} transport left {}", run.cur))),
        };
    }
    if select_rule(family, &t)?.is_some() {
        return Err(Error::invariant(format!("{family} derivation not terminal after {steps} steps: {t}")));
    }
    match t {
        Term::D { l, .. } | Term::HD { l, .. } => Ok((l, run)),
        other => Err(Error::invariant(format!("unexpected terminal {other}"))),
    }
}

/// `k†` by transporting `Z^D(k; ∅)` to `Z^D(∅; k†)`.
pub fn derive_dual(k: &Index) -> Result<(Index, Trace)> {
    if !k.is_admissible() {
        return Err(Error::domain(format!("duality needs an admissible index, got {}", k.paren())));
    }
    let start = Term::D { k: k.clone(), l: Index::empty(), tails: Tails::Straight };
    let (d, run) = derive_linear(Family::Dual, start, k.weight())?;
    let id = Identity::duality(k, &d)?;
    Ok((d, run.finish(Some(id))))
}

/// `k^∨` by transporting `Z^HD(k_↑; ∅)` to `Z^HD((1); k^∨)`.
pub fn derive_hoffman_dual(k: &Index) -> Result<(Index, Trace)> {
    if k.is_empty() {
        return Err(Error::domain("Hoffman dual of the empty index"));
    }
    let start = Term::HD { k: k.raise_last(), l: Index::empty() };
    let (d, run) = derive_linear(Family::HoffmanDual, start, k.weight())?;
    let id = Identity::hoffman_dual(k, &d)?;
    Ok((d, run.finish(Some(id))))
}

/// `S(k) = Σ_{j=0}^{k_a-2} ↑^j←(k_{↓^j})`.
pub fn expand_s(k: &Index) -> Result<FormalSum> {
    let ka = k.last().ok_or_else(|| Error::domain("S of the empty index"))?;
    let mut out = FormalSum::zero();
    for j in 0..ka.saturating_sub(1) {
        out.add_term(k.lower_last_by(j)?.prepend_one().raise_first_by(j), 1);
    }
    Ok(out)
}

/// `H_i(k) = Σ_{j=1}^{k_i-1} ((k_(i))_{↓^j}, ↑^j←k^(i))`, with `1 ≤ i ≤ depth(k)`.
pub fn expand_h(k: &Index, i: usize) -> Result<FormalSum> {
    if i == 0 || i > k.depth() {
        return Err(Error::domain(format!("H_i needs 1 ≤ i ≤ {}, got i = {i}", k.depth())));
    }
    let ki = k.entries()[i - 1];
    let (pre, suf) = (k.prefix(i), k.suffix(i));
    let mut out = FormalSum::zero();
    for j in 1..ki {
        out.add_term(pre.lower_last_by(j)?.concat(&suf.prepend_one().raise_first_by(j)), 1);
    }
    Ok(out)
}

/// Runs the cyclic-sum loop from `Z^O(←k)` until the start term recurs.
/// Returns the accumulated zeta side terms, which must equal `lhs - rhs`.
fn run_cyclic(k: &Index, level: Level) -> Result<(Expr, Run)> {
    let family = if level == Level::Limit { Family::Cyclic } else { Family::CyclicModP };
    let start = Term::O { k: k.prepend_one(), level };
    let mut run = Run::new(family, start.clone())?;
    let bound = k.weight() as usize * k.depth() + k.depth();
    let mut t = start.clone();
    loop {
        if run.steps.len() >= bound {
            return Err(Error::invariant(format!("cyclic loop for {} exceeded {bound} steps", k.paren())));
        }
        run.step(&t).map_err(|e| match e {
            Error::Domain(why) | Error::Invariant(why) => {
                Error::invariant(format!("cyclic loop for {} produced a divergent term: {why}", k.paren()))
            }
            other => other,
        })?;
        let (conn, _) = run.cur.split_zeta();
        let next: Vec<_> = conn.iter().collect();
        t = match next.as_slice() {
            // the recurring start term cancels against the left-hand side
            [] => break,
            [(n, c)] if c.is_one() => (*n).clone(),
            _ => return Err(Error::invariant(format!("cyclic loop left {}", run.cur))),
        };
        if t == start {
            break;
        }
    }
    // Z^O(←k) = Z^O(←k) + side, so side = 0 is the identity
    let mut side = run.cur.clone();
    side.substitute(&start, &Expr::zero());
    Ok((side, run))
}

fn zeta_poly_of(e: &Expr) -> Result<ZetaPoly> {
    let mut p = ZetaPoly::zero();
    for (t, c) in e.iter() {
        match t {
            Term::Zeta { k, .. } => p.add_monomial(vec![super::identity::Factor::zeta(k.clone())], integer_coeff(c, t)?),
            other => return Err(Error::invariant(format!("connected sum {other} survived cancellation"))),
        }
    }
    Ok(p)
}

fn zeta_expr(s: &FormalSum, level: Level) -> Expr {
    let mut e = Expr::zero();
    for (k, c) in s.iter() {
        e.add_term(Term::zeta(k.clone(), level), Rational::from_integer(c.into()));
    }
    e
}

fn check_side(side: &Expr, lhs: &FormalSum, rhs: &FormalSum, level: Level, what: &str) -> Result<()> {
    let mut want = zeta_expr(lhs, level);
    want.add_scaled(&zeta_expr(rhs, level), &-Rational::one());
    if &want != side {
        return Err(Error::invariant(format!("{what}: side terms {side} differ from lhs - rhs = {want}")));
    }
    Ok(())
}

/// The cyclic sum formula for the class of an admissible `k`, by the limit algorithm.
pub fn derive_cyclic_identity(k: &Index) -> Result<(Identity, Trace)> {
    if !k.is_admissible() {
        return Err(Error::domain(format!("the cyclic sum formula needs an admissible index, got {}", k.paren())));
    }
    let (side, run) = run_cyclic(k, Level::Limit)?;
    let class = cyclic_class(k)?;
    let mut lhs = FormalSum::zero();
    let mut rhs = FormalSum::zero();
    for j in &class {
        lhs.add_term(j.raise_last(), 1);
        rhs.add_scaled(&expand_s(j)?, 1);
    }
    check_side(&side, &lhs, &rhs, Level::Limit, "cyclic sum")?;
    let id = Identity::new(
        Family::Cyclic,
        ZetaPoly::from_zeta_sum(&lhs),
        ZetaPoly::from_zeta_sum(&rhs),
        class,
        run.validity,
    )?;
    let trace = run.finish(Some(id.clone()));
    Ok((id, trace))
}

/// The cyclic sum formula for finite multiple zeta values, for any nonempty `k`.
pub fn derive_cyclic_identity_mod_p(k: &Index) -> Result<(Identity, Trace)> {
    if k.is_empty() {
        return Err(Error::domain("the cyclic sum formula needs a nonempty index"));
    }
    let (side, run) = run_cyclic(k, Level::Truncated)?;
    let class = cyclic_class(k)?;
    let mut lhs = FormalSum::zero();
    let mut rhs = FormalSum::zero();
    for j in &class {
        let js = j.rotated();
        lhs.add_term(j.raise_last(), 1);
        lhs.add_term(js.raise_first(), 1);
        lhs.add_term(js.prepend_one(), 1);
        rhs.add_scaled(&expand_s(j)?, 1);
    }
    check_side(&side, &lhs, &rhs, Level::Truncated, "cyclic sum mod p")?;
    let id = Identity::new(
        Family::CyclicModP,
        ZetaPoly::from_zeta_sum(&lhs),
        ZetaPoly::from_zeta_sum(&rhs),
        class,
        run.validity.combine(Validity::ModP)?,
    )?;
    let trace = run.finish(Some(id.clone()));
    Ok((id, trace))
}

/// Hoffman's relation for admissible `k`, from `Z^H(k; (1)) = Z^H((1); k) + side`.
///
/// The boundary values are `Z^H(k;(1)) = Σ_{i=0}^{a-1} ζ(k_(i), ↑k^(i)) + Σ_{i=0}^{a-1} ζ(k_(i), ←k^(i))`
/// and `Z^H((1);k) = ζ(←k)`. The `i = 0` arrow term is `ζ(←k)` itself; every other
/// arrow term must cancel against a side term.
pub fn derive_hoffman_relation(k: &Index) -> Result<(Identity, Trace)> {
    if !k.is_admissible() {
        return Err(Error::domain(format!("Hoffman's relation needs an admissible index, got {}", k.paren())));
    }
    let one = Index::from_slice(&[1]);
    let mut run = Run::new(Family::Hoffman, Term::H { k: k.clone(), l: one.clone() })?;
    run.run_to_terminal(k.weight() as usize)?;
    let terminal = Term::H { k: one, l: k.clone() };
    let (conn, side) = run.cur.split_zeta();
    if conn != Expr::single(terminal.clone()) {
        return Err(Error::invariant(format!("Hoffman transport ended in {conn}, expected {terminal}")));
    }
    let a = k.depth();
    let mut lhs = FormalSum::zero();
    let mut arrows = FormalSum::zero();
    for i in 0..a {
        lhs.add_term(k.prefix(i).concat(&k.suffix(i).raise_first()), 1);
        if i > 0 {
            arrows.add_term(k.prefix(i).concat(&k.suffix(i).prepend_one()), 1);
        }
    }
    // rhs = side - Σ_{i≥1} arrow terms; every arrow term must occur in side
    let mut rest = side.clone();
    for (h, c) in arrows.iter() {
        let t = Term::zeta(h.clone(), Level::Limit);
        if rest.coeff(&t) < Rational::from_integer(c.into()) {
            return Err(Error::invariant(format!("arrow term {t} of the boundary expansion does not cancel")));
        }
        rest.add_term(t, Rational::from_integer((-c).into()));
    }
    let rhs = zeta_poly_of(&rest)?.as_zeta_sum().expect("single zeta factors");
    let mut expected = FormalSum::zero();
    for i in 1..=a {
        expected.add_scaled(&expand_h(k, i)?, 1);
    }
    if rhs != expected {
        return Err(Error::invariant(format!(
            "Hoffman relation for {}: derived right side {rhs} differs from Σ H_i(k) = {expected}",
            k.paren()
        )));
    }
    let id = Identity::new(
        Family::Hoffman,
        ZetaPoly::from_zeta_sum(&lhs),
        ZetaPoly::from_zeta_sum(&rhs),
        vec![k.clone()],
        run.validity,
    )?;
    let trace = run.finish(Some(id.clone()));
    Ok((id, trace))
}
