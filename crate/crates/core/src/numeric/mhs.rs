//! Truncated nested sums by layered prefix sums.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::scalar::Scalar;
use crate::error::{Error, Result};
use crate::index::Index;
use crate::Rational;

/// Chain order between consecutive summation variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Strict,
    Weak,
}

fn no_inverse(n: u64) -> Error {
    Error::domain(format!("{n} is not invertible in the scalar field"))
}

/// `w[n] = n^{-e}` for `0 ≤ n ≤ m`; `w[0]` is only defined for `e = 0`.
pub(crate) fn recip_powers<S: Scalar>(m: usize, e: u32, ctx: &S::Ctx) -> Result<Vec<S>> {
    let mut w = Vec::with_capacity(m + 1);
    w.push(if e == 0 { S::one(ctx) } else { S::zero(ctx) });
    for n in 1..=m as u64 {
        w.push(S::recip_pow(n, e, ctx).ok_or_else(|| no_inverse(n))?);
    }
    Ok(w)
}

/// `E[x] = Σ_{lo < n_1 ⋯ n_a = x ≤ m} Π n_i^{-e_i}` with `⋯` strict or weak.
/// `exps` must be nonempty.
pub(crate) fn ending_at<S: Scalar>(exps: &[u32], lo: usize, order: Order, m: usize, ctx: &S::Ctx) -> Result<Vec<S>> {
    assert!(!exps.is_empty(), "ending_at needs at least one variable");
    let start = lo + 1;
    let w = recip_powers::<S>(m, exps[0], ctx)?;
    let mut cur: Vec<S> = (0..=m).map(|x| if x >= start { w[x].clone() } else { S::zero(ctx) }).collect();
    for &e in &exps[1..] {
        let w = recip_powers::<S>(m, e, ctx)?;
        let mut acc = S::zero(ctx);
        let mut next = Vec::with_capacity(m + 1);
        for x in 0..=m {
            if order == Order::Weak {
                acc = acc + cur[x].clone();
            }
            next.push(if acc.is_zero() { S::zero(ctx) } else { w[x].clone() * acc.clone() });
            if order == Order::Strict {
                acc = acc + cur[x].clone();
            }
        }
        cur = next;
    }
    Ok(cur)
}

/// `T[y] = Σ_{y = m_1 ⋯ m_b ≤ m} Π m_i^{-e_i}`. `exps` must be nonempty.
pub(crate) fn starting_at<S: Scalar>(exps: &[u32], order: Order, m: usize, ctx: &S::Ctx) -> Result<Vec<S>> {
    assert!(!exps.is_empty(), "starting_at needs at least one variable");
    let last = exps.len() - 1;
    let mut cur = recip_powers::<S>(m, exps[last], ctx)?;
    cur[0] = S::zero(ctx);
    for &e in exps[..last].iter().rev() {
        let w = recip_powers::<S>(m, e, ctx)?;
        let mut acc = S::zero(ctx);
        let mut next = vec![S::zero(ctx); m + 1];
        for y in (1..=m).rev() {
            if order == Order::Weak {
                acc = acc + cur[y].clone();
            }
            if !acc.is_zero() {
                next[y] = w[y].clone() * acc.clone();
            }
            if order == Order::Strict {
                acc = acc + cur[y].clone();
            }
        }
        cur = next;
    }
    Ok(cur)
}

fn sum<S: Scalar>(v: &[S], ctx: &S::Ctx) -> S {
    v.iter().fold(S::zero(ctx), |a, x| a + x.clone())
}

/// `ζ_N(k)` over any scalar field.
pub fn zeta_trunc_in<S: Scalar>(k: &Index, n: u32, ctx: &S::Ctx) -> Result<S> {
    if k.is_empty() {
        return Ok(S::one(ctx));
    }
    Ok(sum(&ending_at::<S>(k.entries(), 0, Order::Strict, n as usize, ctx)?, ctx))
}

/// `ζ⋆_N(k)` over any scalar field.
pub fn zeta_star_trunc_in<S: Scalar>(k: &Index, n: u32, ctx: &S::Ctx) -> Result<S> {
    if k.is_empty() {
        return Ok(S::one(ctx));
    }
    Ok(sum(&ending_at::<S>(k.entries(), 0, Order::Weak, n as usize, ctx)?, ctx))
}

/// Row `binom(y, ·)` for every `0 ≤ y ≤ m`, by Pascal's rule.
pub(crate) fn pascal<S: Scalar>(m: usize, ctx: &S::Ctx) -> Vec<Vec<S>> {
    let mut rows: Vec<Vec<S>> = Vec::with_capacity(m + 1);
    rows.push(vec![S::one(ctx)]);
    for y in 1..=m {
        let prev = &rows[y - 1];
        let mut row = Vec::with_capacity(y + 1);
        row.push(S::one(ctx));
        for x in 1..y {
            row.push(prev[x - 1].clone() + prev[x].clone());
        }
        row.push(S::one(ctx));
        rows.push(row);
    }
    rows
}

/// `H⋆_N(k) = Σ_{1 ≤ n_1 ≤ ⋯ ≤ n_a ≤ N} (-1)^{n_a - 1} binom(N, n_a) / n^k`.
pub fn h_star_in<S: Scalar>(k: &Index, n: u32, ctx: &S::Ctx) -> Result<S> {
    if k.is_empty() {
        return Err(Error::domain("H⋆ of the empty index"));
    }
    let m = n as usize;
    let e = ending_at::<S>(k.entries(), 0, Order::Weak, m, ctx)?;
    let row = pascal::<S>(m, ctx).pop().expect("row N");
    let mut acc = S::zero(ctx);
    for x in 1..=m {
        let t = e[x].clone() * row[x].clone();
        acc = if x % 2 == 1 { acc + t } else { acc - t };
    }
    Ok(acc)
}

pub fn zeta_star_trunc(k: &Index, n: u32) -> Rational {
    zeta_star_trunc_in::<Rational>(k, n, &()).expect("rationals invert every positive integer")
}

pub fn h_star(k: &Index, n: u32) -> Result<Rational> {
    h_star_in::<Rational>(k, n, &())
}

/// `ζ_N(k)` exactly. Runs the layered recurrence on integers scaled by
/// `L = lcm(1, ..., N)` and divides by `L^{wt(k)}` once at the end.
pub fn zeta_trunc(k: &Index, n: u32) -> Rational {
    if k.is_empty() {
        return <Rational as One>::one();
    }
    let m = n as usize;
    if m < k.depth() {
        return <Rational as Zero>::zero();
    }
    let l = (1..=n as u64).fold(BigInt::one(), |acc, i| acc.lcm(&BigInt::from(i)));
    let quot: Vec<BigInt> = (0..=m as u64).map(|i| if i == 0 { BigInt::zero() } else { &l / i }).collect();
    let pow = |x: usize, e: u32| num_traits::pow(quot[x].clone(), e as usize);
    let exps = k.entries();
    let mut cur: Vec<BigInt> = (0..=m).map(|x| if x == 0 { BigInt::zero() } else { pow(x, exps[0]) }).collect();
    for (i, &e) in exps.iter().enumerate().skip(1) {
        let mut acc = BigInt::zero();
        let mut next = vec![BigInt::zero(); m + 1];
        // variable i takes values ≥ i + 1
        for x in 1..=m {
            if x > i && !acc.is_zero() {
                next[x] = pow(x, e) * &acc;
            }
            acc += &cur[x];
        }
        cur = next;
    }
    let total: BigInt = cur.into_iter().sum();
    Rational::new(total, num_traits::pow(l, k.weight() as usize))
}
