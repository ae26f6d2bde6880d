use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::Index;
use crate::Rational;

/// Whether a sum is truncated at a finite `N` or taken in the limit `N → ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Truncated,
    Limit,
}

/// Order of the symbolic tails `(n, m)` of a duality connected sum.
/// `Swapped` stands for `Z^D_{m,n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tails {
    Straight,
    Swapped,
}

impl Tails {
    pub fn flipped(self) -> Tails {
        match self {
            Tails::Straight => Tails::Swapped,
            Tails::Swapped => Tails::Straight,
        }
    }
}

/// A symbolic connected sum or zeta value.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// `Z^ш_N(k; l; h)`, connecting relation `n_a + m_b = r_1`.
    Sh { k: Index, l: Index, h: Index },
    /// `Z^*_N(k; l; h)`, connecting relation `n_1 = m_1 = r_c`.
    Har { k: Index, l: Index, h: Index },
    /// `Z^D_{n,m}(k; l)` with connector `n_a! m_b! / (n_a + m_b)!`.
    D { k: Index, l: Index, tails: Tails },
    /// `Z^HD_N(k; l)` with connector `(-1)^{n_a - 1} binom(m_1, n_a)`.
    HD { k: Index, l: Index },
    /// `Z^O(k)` with connector `1 / (n_a - n_1)`.
    O { k: Index, level: Level },
    /// `Z^H(k; l)` with connector `1 / (m_1 - n_a)`.
    H { k: Index, l: Index },
    /// `ζ_N(k)` or `ζ(k)`.
    Zeta { k: Index, level: Level },
}

impl Term {
    pub fn family_tag(&self) -> &'static str {
        match self {
            Term::Sh { .. } => "sh",
            Term::Har { .. } => "har",
            Term::D { .. } => "D",
            Term::HD { .. } => "HD",
            Term::O { .. } => "O",
            Term::H { .. } => "H",
            Term::Zeta { .. } => "zeta",
        }
    }

    pub fn is_zeta(&self) -> bool {
        matches!(self, Term::Zeta { .. })
    }

    /// Family-specific well-formedness.
    pub fn check(&self) -> Result<()> {
        let bad = |why: &str| Err(Error::domain(format!("ill-formed term {self}: {why}")));
        match self {
            Term::Sh { h, .. } if h.is_empty() => bad("third slot must be nonempty"),
            Term::Har { k, l, .. } if k.is_empty() || l.is_empty() => bad("first two slots must be nonempty"),
            Term::Sh { k, l, h } if k.is_empty() && l.is_empty() && h.first() != Some(1) => {
                bad("with two empty slots r_1 = 0, so h must start with 1")
            }
            // with h = ∅ the sum sits at n_1 = m_1 = 0, finite only for zero exponents there
            Term::Har { k, l, h } if h.is_empty() && (k.first() != Some(1) || l.first() != Some(1)) => {
                bad("with an empty third slot both others must start with 1")
            }
            Term::HD { k, .. } if k.is_empty() => bad("first slot must be nonempty"),
            Term::O { k, .. } if k.depth() < 2 => bad("connector 1/(n_a - n_1) needs depth at least 2"),
            Term::O { k, level: Level::Limit } if k.entries().iter().all(|&e| e == 1) => {
                bad("all entries are 1, the limit diverges")
            }
            Term::H { k, l } if k.is_empty() || l.is_empty() => bad("both slots must be nonempty"),
            Term::Zeta { k, level: Level::Limit } if !k.is_empty() && !k.is_admissible() => {
                bad("a limit zeta value needs an admissible index")
            }
            _ => Ok(()),
        }
    }

    pub fn zeta(k: Index, level: Level) -> Term {
        Term::Zeta { k, level }
    }

    pub fn slots(&self) -> Vec<&Index> {
        match self {
            Term::Sh { k, l, h } | Term::Har { k, l, h } => vec![k, l, h],
            Term::D { k, l, .. } | Term::HD { k, l } | Term::H { k, l } => vec![k, l],
            Term::O { k, .. } | Term::Zeta { k, .. } => vec![k],
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Sh { k, l, h } => write!(f, "Zш({};{};{})", k.paren(), l.paren(), h.paren()),
            Term::Har { k, l, h } => write!(f, "Z*({};{};{})", k.paren(), l.paren(), h.paren()),
            Term::D { k, l, tails } => {
                let t = match tails {
                    Tails::Straight => "n,m",
                    Tails::Swapped => "m,n",
                };
                write!(f, "ZD_{{{t}}}({};{})", k.paren(), l.paren())
            }
            Term::HD { k, l } => write!(f, "ZHD({};{})", k.paren(), l.paren()),
            Term::O { k, level } => {
                let sub = if *level == Level::Limit { "∞" } else { "N" };
                write!(f, "ZO_{sub}{}", k.paren())
            }
            Term::H { k, l } => write!(f, "ZH({};{})", k.paren(), l.paren()),
            Term::Zeta { k, level: Level::Limit } => write!(f, "ζ{}", k.paren()),
            Term::Zeta { k, level: Level::Truncated } => write!(f, "ζ_N{}", k.paren()),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    family: String,
    slots: Vec<Index>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
}

impl Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let kind = match self {
            Term::O { level, .. } | Term::Zeta { level, .. } => Some(match level {
                Level::Truncated => "truncated",
                Level::Limit => "limit",
            }),
            Term::D { tails, .. } => Some(match tails {
                Tails::Straight => "n,m",
                Tails::Swapped => "m,n",
            }),
            _ => None,
        };
        TermRepr {
            family: self.family_tag().to_string(),
            slots: self.slots().into_iter().cloned().collect(),
            kind: kind.map(str::to_string),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = TermRepr::deserialize(d)?;
        let want = |n: usize| {
            if r.slots.len() == n {
                Ok(())
            } else {
                Err(D::Error::custom(format!("family {} takes {n} slots, got {}", r.family, r.slots.len())))
            }
        };
        let level = || match r.kind.as_deref() {
            Some("truncated") => Ok(Level::Truncated),
            Some("limit") | None => Ok(Level::Limit),
            Some(other) => Err(D::Error::custom(format!("unknown level {other:?}"))),
        };
        let mut s = r.slots.clone().into_iter();
        let mut next = || s.next().expect("slot count checked");
        let term = match r.family.as_str() {
            "sh" => {
                want(3)?;
                Term::Sh { k: next(), l: next(), h: next() }
            }
            "har" => {
                want(3)?;
                Term::Har { k: next(), l: next(), h: next() }
            }
            "D" => {
                want(2)?;
                let tails = match r.kind.as_deref() {
                    Some("n,m") | None => Tails::Straight,
                    Some("m,n") => Tails::Swapped,
                    Some(other) => return Err(D::Error::custom(format!("unknown tails {other:?}"))),
                };
                Term::D { k: next(), l: next(), tails }
            }
            "HD" => {
                want(2)?;
                Term::HD { k: next(), l: next() }
            }
            "O" => {
                want(1)?;
                Term::O { k: next(), level: level()? }
            }
            "H" => {
                want(2)?;
                Term::H { k: next(), l: next() }
            }
            "zeta" => {
                want(1)?;
                Term::Zeta { k: next(), level: level()? }
            }
            other => return Err(D::Error::custom(format!("unknown family {other:?}"))),
        };
        term.check().map_err(D::Error::custom)?;
        Ok(term)
    }
}

/// Rational linear combination of terms; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Expr {
    terms: BTreeMap<Term, Rational>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn single(t: Term) -> Self {
        let mut e = Expr::zero();
        e.add_term(t, Rational::one());
        e
    }

    pub fn add_term(&mut self, t: Term, c: Rational) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn with(mut self, t: Term, c: i64) -> Self {
        self.add_term(t, Rational::from_integer(c.into()));
        self
    }

    pub fn add_scaled(&mut self, other: &Expr, scale: &Rational) {
        for (t, c) in &other.terms {
            self.add_term(t.clone(), c * scale);
        }
    }

    pub fn coeff(&self, t: &Term) -> Rational {
        self.terms.get(t).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Term, &Rational)> {
        self.terms.iter()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.terms.keys()
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Replaces every occurrence of `before` by `after`, scaled by its coefficient.
    /// Returns the coefficient that was substituted (zero when absent).
    pub fn substitute(&mut self, before: &Term, after: &Expr) -> Rational {
        match self.terms.remove(before) {
            Some(c) => {
                self.add_scaled(after, &c);
                c
            }
            None => Rational::zero(),
        }
    }

    /// Splits into (connected-sum part, zeta part).
    pub fn split_zeta(&self) -> (Expr, Expr) {
        let mut conn = Expr::zero();
        let mut zeta = Expr::zero();
        for (t, c) in &self.terms {
            if t.is_zeta() {
                zeta.add_term(t.clone(), c.clone());
            } else {
                conn.add_term(t.clone(), c.clone());
            }
        }
        (conn, zeta)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag}·")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr[{self}]")
    }
}

#[derive(Serialize, Deserialize)]
struct ExprTermRepr {
    coeff: String,
    term: Term,
}

impl Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<ExprTermRepr> = self
            .terms
            .iter()
            .map(|(t, c)| ExprTermRepr { coeff: c.to_string(), term: t.clone() })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = Vec::<ExprTermRepr>::deserialize(d)?;
        let mut e = Expr::zero();
        for r in v {
            let c: Rational = r.coeff.parse().map_err(|_| D::Error::custom(format!("bad coefficient {:?}", r.coeff)))?;
            e.add_term(r.term, c);
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ind;

    #[test]
    fn well_formedness() {
        assert!(Term::Sh { k: ind!(), l: ind!(), h: ind!() }.check().is_err());
        assert!(Term::Har { k: ind!(1), l: ind!(), h: ind!() }.check().is_err());
        assert!(Term::O { k: ind!(1, 1), level: Level::Limit }.check().is_err());
        assert!(Term::O { k: ind!(1, 1), level: Level::Truncated }.check().is_ok());
        assert!(Term::O { k: ind!(3), level: Level::Truncated }.check().is_err());
        assert!(Term::zeta(ind!(2, 1), Level::Limit).check().is_err());
        assert!(Term::zeta(ind!(2, 1), Level::Truncated).check().is_ok());
    }

    #[test]
    fn term_json_round_trip() {
        let terms = [
            Term::Sh { k: ind!(1, 2), l: ind!(2), h: ind!(1) },
            Term::D { k: ind!(3, 1), l: ind!(1), tails: Tails::Swapped },
            Term::O { k: ind!(1, 2, 1, 3), level: Level::Limit },
            Term::zeta(ind!(2, 1), Level::Truncated),
        ];
        for t in terms {
            let json = serde_json::to_string(&t).unwrap();
            let back: Term = serde_json::from_str(&json).unwrap();
            assert_eq!(back, t);
        }
        let json = serde_json::to_string(&Term::HD { k: ind!(2), l: ind!() }).unwrap();
        assert_eq!(json, r#"{"family":"HD","slots":[[2],[]]}"#);
    }

    #[test]
    fn expr_substitution() {
        let a = Term::zeta(ind!(2), Level::Limit);
        let b = Term::zeta(ind!(3), Level::Limit);
        let mut e = Expr::zero().with(a.clone(), 2).with(b.clone(), -1);
        let c = e.substitute(&a, &Expr::single(b.clone()));
        assert_eq!(c, Rational::from_integer(2.into()));
        assert_eq!(e, Expr::single(b));
        assert_eq!(e.to_string(), "ζ(3)");
    }
}
