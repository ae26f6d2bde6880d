//! Exact values of the connected sums, truncated where their definitions are infinite.
//!
//! Truncation convention: sums stated at a finite `N` use `N`; limit objects
//! (`ζ`, `Z^O_∞`, and the series `Z^D`, `Z^H`) bound every summation variable
//! by the cap.

use serde::{Deserialize, Serialize};

use super::mhs::{ending_at, pascal, starting_at, Order};
use super::scalar::Scalar;
use crate::engine::{Expr, Level, Tails, Term};
use crate::error::{Error, Result};
use crate::index::Index;
use crate::Rational;

/// Truncation parameters for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalParams {
    /// Finite truncation `N`.
    pub n: u32,
    /// Bound used for limit objects.
    pub cap: u32,
    /// Tails `(n, m)` of the duality sums.
    pub tails: (u32, u32),
}

impl EvalParams {
    pub fn new(n: u32, cap: u32) -> Self {
        EvalParams { n, cap, tails: (0, 0) }
    }

    pub fn with_tails(mut self, n: u32, m: u32) -> Self {
        self.tails = (n, m);
        self
    }

    pub fn with_cap(mut self, cap: u32) -> Self {
        self.cap = cap;
        self
    }

    fn bound(&self, level: Level) -> usize {
        match level {
            Level::Truncated => self.n as usize,
            Level::Limit => self.cap as usize,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConnectorKind {
    D,
    HD,
    O,
    H,
}

/// Exact connector values: `C^D(n,m) = n! m!/(n+m)!`, `C^HD(n,m) = (-1)^{n-1} binom(m,n)`,
/// `C^O(n_1,n_a) = 1/(n_a - n_1)`, `C^H(n_a,m_1) = 1/(m_1 - n_a)`.
pub fn connector_value(kind: ConnectorKind, a: u64, b: u64) -> Result<Rational> {
    use num_bigint::BigInt;
    let fact = |n: u64| (1..=n).fold(BigInt::from(1), |acc, i| acc * i);
    match kind {
        ConnectorKind::D => Ok(Rational::new(fact(a) * fact(b), fact(a + b))),
        ConnectorKind::HD => {
            if a == 0 || a > b {
                return Err(Error::domain(format!("C^HD needs 1 ≤ n_a ≤ m_1, got ({a}, {b})")));
            }
            let c = fact(b) / (fact(a) * fact(b - a));
            let sign = if a % 2 == 1 { 1 } else { -1 };
            Ok(Rational::from_integer(c * sign))
        }
        ConnectorKind::O | ConnectorKind::H => {
            if a >= b {
                return Err(Error::domain(format!("connector 1/(y - x) needs x < y, got ({a}, {b})")));
            }
            Ok(Rational::new(1.into(), (b - a).into()))
        }
    }
}

fn recip<S: Scalar>(n: u64, ctx: &S::Ctx) -> Result<S> {
    S::recip_int(n, ctx).ok_or_else(|| Error::domain(format!("{n} is not invertible in the scalar field")))
}

/// Chain weights ending at `n_a = x`, with `A[lo] = 1` standing for the empty chain `n_a = n_0 = lo`.
fn ending_or_tail<S: Scalar>(exps: &[u32], lo: usize, order: Order, m: usize, ctx: &S::Ctx) -> Result<Vec<S>> {
    if exps.is_empty() {
        let mut v = vec![S::zero(ctx); m + 1];
        if lo <= m {
            v[lo] = S::one(ctx);
        }
        return Ok(v);
    }
    ending_at(exps, lo, order, m, ctx)
}

fn eval_sh<S: Scalar>(k: &Index, l: &Index, h: &Index, m: usize, ctx: &S::Ctx) -> Result<S> {
    let a = ending_or_tail::<S>(&k.exps_last_lowered(), 0, Order::Strict, m, ctx)?;
    let b = ending_or_tail::<S>(&l.exps_last_lowered(), 0, Order::Strict, m, ctx)?;
    let hx = h.exps_first_lowered();
    let r = starting_at::<S>(&hx, Order::Strict, m, ctx)?;
    let mut total = S::zero(ctx);
    if !a[0].is_zero() && !b[0].is_zero() {
        // r_1 = n_0 + m_0 = 0 contributes 0^{-(h_1 - 1)}
        if hx[0] != 0 {
            return Err(Error::Divergent(format!("Zш(∅;∅;{}) divides by r_1 = 0", h.paren())));
        }
        total = total + super::mhs::zeta_trunc_in::<S>(&h.suffix(1), m as u32, ctx)?;
    }
    for s in 1..=m {
        if r[s].is_zero() {
            continue;
        }
        let mut conv = S::zero(ctx);
        for x in 0..=s {
            if !a[x].is_zero() && !b[s - x].is_zero() {
                conv = conv + a[x].clone() * b[s - x].clone();
            }
        }
        if !conv.is_zero() {
            total = total + conv * r[s].clone();
        }
    }
    Ok(total)
}

fn eval_har<S: Scalar>(k: &Index, l: &Index, h: &Index, m: usize, ctx: &S::Ctx) -> Result<S> {
    let kx = k.exps_first_lowered();
    let lx = l.exps_first_lowered();
    if h.is_empty() {
        // n_1 = m_1 = r_0 = 0, weighted by 0^0 = 1
        if kx[0] != 0 || lx[0] != 0 {
            return Err(Error::Divergent(format!("Z*({};{};∅) divides by n_1 = 0", k.paren(), l.paren())));
        }
        let zk = super::mhs::zeta_trunc_in::<S>(&k.suffix(1), m as u32, ctx)?;
        let zl = super::mhs::zeta_trunc_in::<S>(&l.suffix(1), m as u32, ctx)?;
        return Ok(zk * zl);
    }
    let r = ending_at::<S>(h.entries(), 0, Order::Strict, m, ctx)?;
    let tk = starting_at::<S>(&kx, Order::Strict, m, ctx)?;
    let tl = starting_at::<S>(&lx, Order::Strict, m, ctx)?;
    let mut total = S::zero(ctx);
    for t in 1..=m {
        if !r[t].is_zero() && !tk[t].is_zero() && !tl[t].is_zero() {
            total = total + r[t].clone() * tk[t].clone() * tl[t].clone();
        }
    }
    Ok(total)
}

#[allow(clippy::needless_range_loop)]
fn eval_d<S: Scalar>(k: &Index, l: &Index, tails: (u32, u32), cap: usize, ctx: &S::Ctx) -> Result<S> {
    let (n0, m0) = (tails.0 as usize, tails.1 as usize);
    if n0 > cap || m0 > cap {
        return Err(Error::domain(format!("cap {cap} is below the tails ({n0}, {m0})")));
    }
    let a = ending_or_tail::<S>(k.entries(), n0, Order::Strict, cap, ctx)?;
    let b = ending_or_tail::<S>(l.entries(), m0, Order::Strict, cap, ctx)?;
    let single = |v: &[S]| {
        let mut nz = v.iter().enumerate().filter(|(_, s)| !s.is_zero()).map(|(i, _)| i);
        match (nz.next(), nz.next()) {
            (Some(i), None) => Some(i),
            _ => None,
        }
    };
    // an empty slot pins its variable to the tail: one linear pass
    if let Some((y0, pinned, other)) = single(&b).map(|y| (y, &b, &a)).or_else(|| single(&a).map(|x| (x, &a, &b))) {
        let mut c = S::one(ctx);
        let mut total = if other[0].is_zero() { S::zero(ctx) } else { other[0].clone() };
        for x in 1..=cap {
            c = c * S::from_int(x as i64, ctx) * recip::<S>((x + y0) as u64, ctx)?;
            if !other[x].is_zero() {
                total = total + c.clone() * other[x].clone();
            }
        }
        return Ok(total * pinned[y0].clone());
    }
    S::connector_sum(&a, &b, ctx)
}

fn eval_hd<S: Scalar>(k: &Index, l: &Index, m: usize, ctx: &S::Ctx) -> Result<S> {
    let a = ending_at::<S>(&k.exps_last_lowered(), 0, Order::Weak, m, ctx)?;
    let tl = if l.is_empty() {
        // m_1 = m_{b+1} = N
        let mut v = vec![S::zero(ctx); m + 1];
        v[m] = S::one(ctx);
        v
    } else {
        starting_at::<S>(l.entries(), Order::Weak, m, ctx)?
    };
    let binom = pascal::<S>(m, ctx);
    let mut total = S::zero(ctx);
    for y in 1..=m {
        if tl[y].is_zero() {
            continue;
        }
        let mut inner = S::zero(ctx);
        for x in 1..=y {
            if a[x].is_zero() {
                continue;
            }
            let t = a[x].clone() * binom[y][x].clone();
            inner = if x % 2 == 1 { inner + t } else { inner - t };
        }
        total = total + inner * tl[y].clone();
    }
    Ok(total)
}

fn eval_o<S: Scalar>(k: &Index, m: usize, ctx: &S::Ctx) -> Result<S> {
    let exps = k.exps_first_lowered();
    let w: Vec<Vec<S>> = exps.iter().map(|&e| super::mhs::recip_powers::<S>(m, e, ctx)).collect::<Result<_>>()?;
    let inv: Vec<S> = (0..=m).map(|d| if d == 0 { Ok(S::zero(ctx)) } else { recip::<S>(d as u64, ctx) }).collect::<Result<_>>()?;
    let mut total = S::zero(ctx);
    for s in 1..=m {
        // chains s = n_1 < ⋯ < n_a = x
        let mut cur = vec![S::zero(ctx); m + 1];
        cur[s] = w[0][s].clone();
        for layer in &w[1..] {
            let mut acc = S::zero(ctx);
            let mut next = vec![S::zero(ctx); m + 1];
            for x in s..=m {
                if !acc.is_zero() {
                    next[x] = layer[x].clone() * acc.clone();
                }
                acc = acc + cur[x].clone();
            }
            cur = next;
        }
        for x in s + 1..=m {
            if !cur[x].is_zero() {
                total = total + cur[x].clone() * inv[x - s].clone();
            }
        }
    }
    Ok(total)
}

fn eval_h<S: Scalar>(k: &Index, l: &Index, m: usize, ctx: &S::Ctx) -> Result<S> {
    let a = ending_at::<S>(&k.exps_last_lowered(), 0, Order::Strict, m, ctx)?;
    let tl = starting_at::<S>(l.entries(), Order::Strict, m, ctx)?;
    let inv: Vec<S> = (0..=m).map(|d| if d == 0 { Ok(S::zero(ctx)) } else { recip::<S>(d as u64, ctx) }).collect::<Result<_>>()?;
    let mut total = S::zero(ctx);
    for y in 2..=m {
        if tl[y].is_zero() {
            continue;
        }
        let mut inner = S::zero(ctx);
        for x in 1..y {
            if !a[x].is_zero() {
                inner = inner + a[x].clone() * inv[y - x].clone();
            }
        }
        total = total + inner * tl[y].clone();
    }
    Ok(total)
}

/// Value of one term under `p`.
pub fn eval_term_in<S: Scalar>(t: &Term, p: &EvalParams, ctx: &S::Ctx) -> Result<S> {
    if let Term::O { k, level: Level::Limit } = t {
        if k.entries().iter().all(|&e| e == 1) {
            return Err(Error::Divergent(format!("{t} has all entries 1")));
        }
    }
    if let Term::Zeta { k, level: Level::Limit } = t {
        if !k.is_empty() && !k.is_admissible() {
            return Err(Error::Divergent(format!("{t} is not admissible")));
        }
    }
    t.check()?;
    let n = p.n as usize;
    let cap = p.cap as usize;
    match t {
        Term::Sh { k, l, h } => eval_sh(k, l, h, n, ctx),
        Term::Har { k, l, h } => eval_har(k, l, h, n, ctx),
        Term::D { k, l, tails } => {
            let tl = match tails {
                Tails::Straight => p.tails,
                Tails::Swapped => (p.tails.1, p.tails.0),
            };
            eval_d(k, l, tl, cap, ctx)
        }
        Term::HD { k, l } => eval_hd(k, l, n, ctx),
        Term::O { k, level } => eval_o(k, p.bound(*level), ctx),
        Term::H { k, l } => eval_h(k, l, cap, ctx),
        Term::Zeta { k, level } => S::zeta_trunc(k, p.bound(*level) as u32, ctx),
    }
}

/// Value of a linear combination of terms.
pub fn eval_expr_in<S: Scalar>(e: &Expr, p: &EvalParams, ctx: &S::Ctx) -> Result<S> {
    let mut total = S::zero(ctx);
    for (t, c) in e.iter() {
        let c = S::from_rational(c, ctx)
            .ok_or_else(|| Error::domain(format!("coefficient {c} of {t} is not defined in the scalar field")))?;
        total = total + c * eval_term_in::<S>(t, p, ctx)?;
    }
    Ok(total)
}

pub fn eval_connected(t: &Term, p: &EvalParams) -> Result<Rational> {
    eval_term_in::<Rational>(t, p, &())
}

pub fn eval_expr(e: &Expr, p: &EvalParams) -> Result<Rational> {
    eval_expr_in::<Rational>(e, p, &())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ind;
    use crate::numeric::mhs::{h_star, zeta_trunc};

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn connector_examples() {
        assert_eq!(connector_value(ConnectorKind::D, 1, 1).unwrap(), q(1, 2));
        assert_eq!(connector_value(ConnectorKind::D, 2, 3).unwrap(), q(1, 10));
        assert_eq!(connector_value(ConnectorKind::O, 1, 3).unwrap(), q(1, 2));
        assert_eq!(connector_value(ConnectorKind::HD, 2, 3).unwrap(), q(-3, 1));
        assert!(connector_value(ConnectorKind::H, 4, 4).is_err());
        assert!(connector_value(ConnectorKind::HD, 4, 3).is_err());
    }

    #[test]
    fn boundary_examples() {
        let p = EvalParams::new(5, 5);
        let t = Term::Sh { k: ind!(), l: ind!(2), h: ind!(1, 1) };
        assert_eq!(eval_connected(&t, &p).unwrap(), zeta_trunc(&ind!(1, 1), 5));
        let p = EvalParams::new(6, 6);
        let t = Term::Har { k: ind!(1, 1), l: ind!(1, 2), h: ind!() };
        assert_eq!(eval_connected(&t, &p).unwrap(), zeta_trunc(&ind!(1), 6) * zeta_trunc(&ind!(2), 6));
        let p = EvalParams::new(4, 4);
        let t = Term::HD { k: ind!(2, 2), l: ind!() };
        assert_eq!(eval_connected(&t, &p).unwrap(), h_star(&ind!(2, 1), 4).unwrap());
    }

    #[test]
    fn empty_shuffle_start_is_one() {
        let t = Term::Sh { k: ind!(), l: ind!(), h: ind!(1) };
        assert_eq!(eval_connected(&t, &EvalParams::new(7, 7)).unwrap(), q(1, 1));
    }

    #[test]
    fn divergent_requests() {
        let t = Term::O { k: ind!(1, 1), level: Level::Limit };
        assert!(matches!(eval_connected(&t, &EvalParams::new(5, 5)), Err(Error::Divergent(_))));
        let t = Term::zeta(ind!(2, 1), Level::Limit);
        assert!(matches!(eval_connected(&t, &EvalParams::new(5, 5)), Err(Error::Divergent(_))));
    }
}
