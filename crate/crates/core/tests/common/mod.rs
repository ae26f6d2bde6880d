//! Reference implementations used only by the tests: nested loops straight from
//! the summation definitions, and the classical word-level products and duals.

#![allow(dead_code)]

use std::collections::BTreeMap;

use connsum::engine::{Level, Tails, Term};
use connsum::{FormalSum, Index, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};

pub fn q(a: i64, b: i64) -> Rational {
    Rational::new(a.into(), b.into())
}

/// `n^{-e}`, with `0^0 = 1` and `None` for `0^{-e}`, `e > 0`.
fn rp(n: u64, e: u32) -> Option<Rational> {
    if e == 0 {
        return Some(Rational::one());
    }
    if n == 0 {
        return None;
    }
    Some(Rational::new(BigInt::one(), num_traits::pow(BigInt::from(n), e as usize)))
}

/// Calls `f` on every chain `x_1 ⋯ x_len` with `lo ≤ x_1`, `x_len ≤ hi`, and
/// consecutive entries strictly (or weakly) increasing.
pub fn chains(len: usize, lo: u64, hi: u64, weak: bool, f: &mut dyn FnMut(&[u64])) {
    fn go(len: usize, lo: u64, hi: u64, weak: bool, cur: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
        if cur.len() == len {
            f(cur);
            return;
        }
        for x in lo..=hi {
            cur.push(x);
            go(len, if weak { x } else { x + 1 }, hi, weak, cur, f);
            cur.pop();
        }
    }
    go(len, lo, hi, weak, &mut Vec::new(), f)
}

fn weight(vars: &[u64], exps: &[u32]) -> Option<Rational> {
    let mut w = Rational::one();
    for (&v, &e) in vars.iter().zip(exps) {
        w *= rp(v, e)?;
    }
    Some(w)
}

fn lowered_last(k: &[u32]) -> Vec<u32> {
    let mut v = k.to_vec();
    if let Some(x) = v.last_mut() {
        *x -= 1;
    }
    v
}

fn lowered_first(k: &[u32]) -> Vec<u32> {
    let mut v = k.to_vec();
    if let Some(x) = v.first_mut() {
        *x -= 1;
    }
    v
}

pub fn zeta(k: &[u32], n: u64) -> Rational {
    let mut s = Rational::zero();
    chains(k.len(), 1, n, false, &mut |c| s += weight(c, k).unwrap());
    s
}

pub fn zeta_star(k: &[u32], n: u64) -> Rational {
    let mut s = Rational::zero();
    chains(k.len(), 1, n, true, &mut |c| s += weight(c, k).unwrap());
    s
}

fn binom(n: u64, r: u64) -> Rational {
    if r > n {
        return Rational::zero();
    }
    let mut b = BigInt::one();
    for i in 0..r {
        b = b * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(b)
}

pub fn h_star(k: &[u32], n: u64) -> Rational {
    let mut s = Rational::zero();
    chains(k.len(), 1, n, true, &mut |c| {
        let last = *c.last().unwrap();
        let sign = if last % 2 == 1 { 1 } else { -1 };
        s += weight(c, k).unwrap() * binom(n, last) * Rational::from_integer(sign.into());
    });
    s
}

/// `Zш_N(k; l; h)`; `None` if a term is infinite.
pub fn sh(k: &[u32], l: &[u32], h: &[u32], n: u64) -> Option<Rational> {
    let (ke, le, he) = (lowered_last(k), lowered_last(l), lowered_first(h));
    let mut s = Some(Rational::zero());
    chains(k.len(), 1, n, false, &mut |ns| {
        chains(l.len(), 1, n, false, &mut |ms| {
            let r1 = ns.last().copied().unwrap_or(0) + ms.last().copied().unwrap_or(0);
            if r1 > n {
                return;
            }
            chains(h.len() - 1, r1 + 1, n, false, &mut |rest| {
                let mut rs = vec![r1];
                rs.extend_from_slice(rest);
                let w = (|| Some(weight(ns, &ke)? * weight(ms, &le)? * weight(&rs, &he)?))();
                s = match (s.take(), w) {
                    (Some(a), Some(b)) => Some(a + b),
                    _ => None,
                };
            });
        });
    });
    s
}

/// `Z*_N(k; l; h)`, with `r_0 = 0`; `None` if a term is infinite.
pub fn har(k: &[u32], l: &[u32], h: &[u32], n: u64) -> Option<Rational> {
    let (ke, le) = (lowered_first(k), lowered_first(l));
    let mut s = Some(Rational::zero());
    let mut body = |rs: &[u64]| {
        let rc = rs.last().copied().unwrap_or(0);
        chains(k.len() - 1, rc + 1, n, false, &mut |nt| {
            chains(l.len() - 1, rc + 1, n, false, &mut |mt| {
                let mut ns = vec![rc];
                ns.extend_from_slice(nt);
                let mut ms = vec![rc];
                ms.extend_from_slice(mt);
                let w = (|| Some(weight(&ns, &ke)? * weight(&ms, &le)? * weight(rs, h)?))();
                s = match (s.take(), w) {
                    (Some(a), Some(b)) => Some(a + b),
                    _ => None,
                };
            });
        });
    };
    if h.is_empty() {
        body(&[]);
    } else {
        chains(h.len(), 1, n, false, &mut body);
    }
    s
}

/// `Z^D_{t0,t1}(k; l)` with every variable at most `cap`.
pub fn d(k: &[u32], l: &[u32], t0: u64, t1: u64, cap: u64) -> Rational {
    let mut s = Rational::zero();
    chains(k.len(), t0 + 1, cap, false, &mut |ns| {
        chains(l.len(), t1 + 1, cap, false, &mut |ms| {
            let a = ns.last().copied().unwrap_or(t0);
            let b = ms.last().copied().unwrap_or(t1);
            // a! b! / (a+b)! = 1 / binom(a+b, a)
            let c = binom(a + b, a).recip();
            s += weight(ns, k).unwrap() * c * weight(ms, l).unwrap();
        });
    });
    s
}

pub fn hd(k: &[u32], l: &[u32], n: u64) -> Rational {
    let ke = lowered_last(k);
    let mut s = Rational::zero();
    chains(k.len() + l.len(), 1, n, true, &mut |all| {
        let (ns, ms) = all.split_at(k.len());
        let na = *ns.last().unwrap();
        let m1 = ms.first().copied().unwrap_or(n);
        let sign = if na % 2 == 1 { 1 } else { -1 };
        let c = binom(m1, na) * Rational::from_integer(sign.into());
        s += weight(ns, &ke).unwrap() * c * weight(ms, l).unwrap();
    });
    s
}

pub fn ohno(k: &[u32], n: u64) -> Rational {
    let ke = lowered_first(k);
    let mut s = Rational::zero();
    chains(k.len(), 1, n, false, &mut |ns| {
        let c = Rational::new(BigInt::one(), BigInt::from(ns[ns.len() - 1] - ns[0]));
        s += weight(ns, &ke).unwrap() * c;
    });
    s
}

pub fn hoff(k: &[u32], l: &[u32], cap: u64) -> Rational {
    let ke = lowered_last(k);
    let mut s = Rational::zero();
    chains(k.len() + l.len(), 1, cap, false, &mut |all| {
        let (ns, ms) = all.split_at(k.len());
        let c = Rational::new(BigInt::one(), BigInt::from(ms[0] - ns[ns.len() - 1]));
        s += weight(ns, &ke).unwrap() * c * weight(ms, l).unwrap();
    });
    s
}

/// Naive value of any term, with `N = n` and limit objects cut at `cap`.
pub fn term(t: &Term, n: u64, cap: u64, tails: (u64, u64)) -> Option<Rational> {
    let bound = |lv: Level| if lv == Level::Truncated { n } else { cap };
    Some(match t {
        Term::Sh { k, l, h } => sh(k.entries(), l.entries(), h.entries(), n)?,
        Term::Har { k, l, h } => har(k.entries(), l.entries(), h.entries(), n)?,
        Term::D { k, l, tails: tl } => {
            let (a, b) = if *tl == Tails::Straight { tails } else { (tails.1, tails.0) };
            d(k.entries(), l.entries(), a, b, cap)
        }
        Term::HD { k, l } => hd(k.entries(), l.entries(), n),
        Term::O { k, level } => ohno(k.entries(), bound(*level)),
        Term::H { k, l } => hoff(k.entries(), l.entries(), cap),
        Term::Zeta { k, level } => zeta(k.entries(), bound(*level)),
    })
}

// ---- word-level products and duals ----

/// `(k_1, …, k_a) ↦ y x^{k_1 - 1} ⋯ y x^{k_a - 1}`, with `y = 1`, `x = 0`.
pub fn to_word(k: &[u32]) -> Vec<u8> {
    let mut w = Vec::new();
    for &e in k {
        w.push(1);
        w.extend(std::iter::repeat_n(0, e as usize - 1));
    }
    w
}

pub fn from_word(w: &[u8]) -> Vec<u32> {
    let mut k: Vec<u32> = Vec::new();
    for &c in w {
        if c == 1 {
            k.push(1);
        } else {
            *k.last_mut().expect("word starts with y") += 1;
        }
    }
    k
}

fn shuffle_words(a: &[u8], b: &[u8], memo: &mut BTreeMap<(Vec<u8>, Vec<u8>), BTreeMap<Vec<u8>, i64>>) -> BTreeMap<Vec<u8>, i64> {
    if a.is_empty() || b.is_empty() {
        let mut m = BTreeMap::new();
        m.insert([a, b].concat(), 1);
        return m;
    }
    if let Some(r) = memo.get(&(a.to_vec(), b.to_vec())) {
        return r.clone();
    }
    let mut out = BTreeMap::new();
    for (head, x, y) in [(a[0], &a[1..], b), (b[0], a, &b[1..])] {
        for (w, c) in shuffle_words(x, y, memo) {
            let mut full = vec![head];
            full.extend(w);
            *out.entry(full).or_insert(0) += c;
        }
    }
    memo.insert((a.to_vec(), b.to_vec()), out.clone());
    out
}

pub fn shuffle(k: &[u32], l: &[u32]) -> BTreeMap<Vec<u32>, i64> {
    shuffle_words(&to_word(k), &to_word(l), &mut BTreeMap::new())
        .into_iter()
        .map(|(w, c)| (from_word(&w), c))
        .collect()
}

pub fn stuffle(k: &[u32], l: &[u32]) -> BTreeMap<Vec<u32>, i64> {
    let mut out = BTreeMap::new();
    if k.is_empty() || l.is_empty() {
        out.insert([k, l].concat(), 1);
        return out;
    }
    let (a, kk) = k.split_last().unwrap();
    let (b, ll) = l.split_last().unwrap();
    let mut add = |m: BTreeMap<Vec<u32>, i64>, tail: u32| {
        for (mut h, c) in m {
            h.push(tail);
            *out.entry(h).or_insert(0) += c;
        }
    };
    add(stuffle(kk, l), *a);
    add(stuffle(k, ll), *b);
    add(stuffle(kk, ll), a + b);
    out
}

/// Reverse the word and swap its letters.
pub fn dual(k: &[u32]) -> Vec<u32> {
    let w: Vec<u8> = to_word(k).into_iter().rev().map(|c| 1 - c).collect();
    from_word(&w)
}

/// Complement of the set of partial sums in `{1, …, wt - 1}`.
pub fn hoffman_dual(k: &[u32]) -> Vec<u32> {
    let wt: u32 = k.iter().sum();
    let mut partial = std::collections::BTreeSet::new();
    let mut acc = 0;
    for &e in &k[..k.len() - 1] {
        acc += e;
        partial.insert(acc);
    }
    let mut out = Vec::new();
    let mut prev = 0;
    for s in 1..wt {
        if !partial.contains(&s) {
            out.push(s - prev);
            prev = s;
        }
    }
    out.push(wt - prev);
    out
}

pub fn as_map(s: &FormalSum) -> BTreeMap<Vec<u32>, i64> {
    s.iter().map(|(k, c)| (k.entries().to_vec(), c)).collect()
}

pub fn idx(e: &[u32]) -> Index {
    Index::from_slice(e)
}
