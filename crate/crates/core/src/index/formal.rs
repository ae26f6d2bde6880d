use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::Index;

/// Integer linear combination of indices. Zero coefficients are never stored and
/// iteration follows the lexicographic order of the keys.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FormalSum {
    terms: BTreeMap<Index, i64>,
}

impl FormalSum {
    pub fn zero() -> Self {
        FormalSum::default()
    }

    pub fn single(k: Index) -> Self {
        let mut s = FormalSum::zero();
        s.add_term(k, 1);
        s
    }

    pub fn add_term(&mut self, k: Index, coeff: i64) {
        if coeff == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(k) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().checked_add(coeff).expect("formal sum coefficient overflow");
                if sum == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FormalSum, scale: i64) {
        for (k, &c) in &other.terms {
            self.add_term(k.clone(), c * scale);
        }
    }

    pub fn coeff(&self, k: &Index) -> i64 {
        self.terms.get(k).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Index, i64)> {
        self.terms.iter().map(|(k, &c)| (k, c))
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of all coefficients.
    pub fn mass(&self) -> i64 {
        self.terms.values().sum()
    }

    /// The common weight of every key, if there is one.
    pub fn homogeneous_weight(&self) -> Option<u32> {
        let mut weights = self.terms.keys().map(Index::weight);
        let first = weights.next()?;
        weights.all(|w| w == first).then_some(first)
    }

    /// Bilinear extension of a product defined on single indices.
    pub fn bilinear(&self, other: &FormalSum, mut op: impl FnMut(&Index, &Index) -> FormalSum) -> FormalSum {
        let mut out = FormalSum::zero();
        for (a, ca) in self.iter() {
            for (b, cb) in other.iter() {
                out.add_scaled(&op(a, b), ca * cb);
            }
        }
        out
    }
}

impl FromIterator<(Index, i64)> for FormalSum {
    fn from_iter<I: IntoIterator<Item = (Index, i64)>>(iter: I) -> Self {
        let mut s = FormalSum::zero();
        for (k, c) in iter {
            s.add_term(k, c);
        }
        s
    }
}

impl Add for &FormalSum {
    type Output = FormalSum;

    fn add(self, rhs: &FormalSum) -> FormalSum {
        let mut out = self.clone();
        out.add_scaled(rhs, 1);
        out
    }
}

impl Sub for &FormalSum {
    type Output = FormalSum;

    fn sub(self, rhs: &FormalSum) -> FormalSum {
        let mut out = self.clone();
        out.add_scaled(rhs, -1);
        out
    }
}

impl Neg for &FormalSum {
    type Output = FormalSum;

    fn neg(self) -> FormalSum {
        let mut out = FormalSum::zero();
        out.add_scaled(self, -1);
        out
    }
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.iter().enumerate() {
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            if i == 0 {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mag != 1 {
                write!(f, "{mag}·")?;
            }
            if k.is_empty() {
                f.write_str("()")?;
            } else {
                write!(f, "{}", k.paren())?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormalSum[{self}]")
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coeff: i64,
    index: Index,
}

impl Serialize for FormalSum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<TermRepr> = self.iter().map(|(k, c)| TermRepr { coeff: c, index: k.clone() }).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FormalSum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<TermRepr>::deserialize(d)?;
        Ok(v.into_iter().map(|t| (t.index, t.coeff)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ind;

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut s = FormalSum::single(ind!(1, 2));
        s.add_term(ind!(2, 1), 3);
        s.add_term(ind!(1, 2), -1);
        assert_eq!(s.len(), 1);
        assert_eq!(s.coeff(&ind!(2, 1)), 3);
        assert_eq!(s.coeff(&ind!(1, 2)), 0);
    }

    #[test]
    fn display_and_json() {
        let s: FormalSum = [(ind!(2, 1), 1), (ind!(1, 2), 1), (ind!(1, 1, 1), 3)].into_iter().collect();
        assert_eq!(s.to_string(), "3·(1,1,1) + (1,2) + (2,1)");
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"[{"coeff":3,"index":[1,1,1]},{"coeff":1,"index":[1,2]},{"coeff":1,"index":[2,1]}]"#);
        let back: FormalSum = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        let neg = -&s;
        assert_eq!(neg.to_string(), "-3·(1,1,1) - (1,2) - (2,1)");
    }
}
