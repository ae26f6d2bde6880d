//! Classical constructions of the shuffle product, the harmonic (quasi-shuffle)
//! product, the dual index and the Hoffman dual index.
//!
//! These are written directly from the combinatorial definitions and serve as
//! independent references for the rewrite engine; the engine never calls them.

use std::collections::{BTreeSet, HashMap};

use super::{ArrowWord, FormalSum, Index};
use crate::error::{Error, Result};

/// `k†`: spell `k` as an arrow word, reverse it, exchange `→` and `↑`.
pub fn dual_oracle(k: &Index) -> Result<Index> {
    if !k.is_admissible() {
        return Err(Error::domain(format!("dual of non-admissible index {}", k.paren())));
    }
    Ok(ArrowWord::encode(k).reverse_swap().decode())
}

/// `k^∨`: complement of the partial-sum set of `k` inside `{1, ..., wt(k) - 1}`.
pub fn hoffman_dual_oracle(k: &Index) -> Result<Index> {
    if k.is_empty() {
        return Err(Error::domain("Hoffman dual of the empty index"));
    }
    let w = k.weight();
    let cuts: BTreeSet<u32> = k
        .entries()
        .iter()
        .scan(0, |acc, &e| {
            *acc += e;
            Some(*acc)
        })
        .filter(|&s| s < w)
        .collect();
    let mut entries = Vec::new();
    let mut prev = 0;
    for s in (1..w).filter(|s| !cuts.contains(s)).chain(std::iter::once(w)) {
        entries.push(s - prev);
        prev = s;
    }
    Ok(Index::from_slice(&entries))
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Letter {
    X,
    Y,
}

/// Entry `e` becomes `y x^{e-1}`.
fn to_letters(k: &Index) -> Vec<Letter> {
    let mut w = Vec::new();
    for &e in k.entries() {
        w.push(Letter::Y);
        w.extend(std::iter::repeat_n(Letter::X, e as usize - 1));
    }
    w
}

fn from_letters(w: &[Letter]) -> Index {
    let mut entries: Vec<u32> = Vec::new();
    for l in w {
        match l {
            Letter::Y => entries.push(1),
            Letter::X => *entries.last_mut().expect("shuffled words of indices begin with y") += 1,
        }
    }
    Index::from_slice(&entries)
}

type Words = Vec<(Vec<Letter>, i64)>;

fn shuffle_words(u: &[Letter], v: &[Letter], memo: &mut HashMap<(usize, usize), Words>) -> Words {
    if u.is_empty() {
        return vec![(v.to_vec(), 1)];
    }
    if v.is_empty() {
        return vec![(u.to_vec(), 1)];
    }
    let key = (u.len(), v.len());
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let mut acc: HashMap<Vec<Letter>, i64> = HashMap::new();
    for (w, c) in shuffle_words(&u[1..], v, memo) {
        let mut word = Vec::with_capacity(w.len() + 1);
        word.push(u[0]);
        word.extend(w);
        *acc.entry(word).or_insert(0) += c;
    }
    for (w, c) in shuffle_words(u, &v[1..], memo) {
        let mut word = Vec::with_capacity(w.len() + 1);
        word.push(v[0]);
        word.extend(w);
        *acc.entry(word).or_insert(0) += c;
    }
    let out: Vec<_> = acc.into_iter().collect();
    memo.insert(key, out.clone());
    out
}

/// `k ш l` via the recursive word shuffle.
pub fn shuffle_oracle(k: &Index, l: &Index) -> FormalSum {
    let (u, v) = (to_letters(k), to_letters(l));
    // memo keyed by suffix lengths of the two fixed words
    let mut memo = HashMap::new();
    shuffle_words(&u, &v, &mut memo)
        .into_iter()
        .map(|(w, c)| (from_letters(&w), c))
        .collect()
}

/// `k * l` via the quasi-shuffle recursion on last entries.
pub fn harmonic_oracle(k: &Index, l: &Index) -> FormalSum {
    fn rec(k: &[u32], l: &[u32], memo: &mut HashMap<(usize, usize), FormalSum>) -> FormalSum {
        if k.is_empty() {
            return FormalSum::single(Index::from_slice(l));
        }
        if l.is_empty() {
            return FormalSum::single(Index::from_slice(k));
        }
        if let Some(hit) = memo.get(&(k.len(), l.len())) {
            return hit.clone();
        }
        let (a, kp) = (k[k.len() - 1], &k[..k.len() - 1]);
        let (b, lp) = (l[l.len() - 1], &l[..l.len() - 1]);
        let mut out = FormalSum::zero();
        let append = |s: FormalSum, x: u32, out: &mut FormalSum| {
            for (h, c) in s.iter() {
                let mut e = h.entries().to_vec();
                e.push(x);
                out.add_term(Index::from_slice(&e), c);
            }
        };
        append(rec(kp, l, memo), a, &mut out);
        append(rec(k, lp, memo), b, &mut out);
        append(rec(kp, lp, memo), a + b, &mut out);
        memo.insert((k.len(), l.len()), out.clone());
        out
    }
    rec(k.entries(), l.entries(), &mut HashMap::new())
}
