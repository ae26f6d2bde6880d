use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::rules::Validity;
use super::Family;
use crate::error::{Error, Result};
use crate::index::{FormalSum, Index};

/// The nested sums an identity may be stated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZetaFn {
    /// `ζ_N(k)` / `ζ(k)`: strictly increasing summation.
    Zeta,
    /// `ζ⋆_N(k)`: weakly increasing summation.
    ZetaStar,
    /// `H⋆_N(k)`: weakly increasing, alternating, binomially weighted.
    HStar,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Factor {
    #[serde(rename = "fn")]
    pub func: ZetaFn,
    pub index: Index,
}

impl Factor {
    pub fn zeta(index: Index) -> Self {
        Factor { func: ZetaFn::Zeta, index }
    }
}

/// Integer combination of products of nested sums. Factors inside a monomial
/// are kept sorted so that products compare structurally.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ZetaPoly {
    terms: BTreeMap<Vec<Factor>, i64>,
}

impl ZetaPoly {
    pub fn zero() -> Self {
        ZetaPoly::default()
    }

    pub fn add_monomial(&mut self, mut factors: Vec<Factor>, coeff: i64) {
        use std::collections::btree_map::Entry;
        if coeff == 0 {
            return;
        }
        factors.sort();
        match self.terms.entry(factors) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let s = *o.get() + coeff;
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// `Σ c_h ζ(h)` from a formal sum of indices.
    pub fn from_zeta_sum(s: &FormalSum) -> Self {
        Self::from_sum_with(s, ZetaFn::Zeta)
    }

    pub fn from_sum_with(s: &FormalSum, func: ZetaFn) -> Self {
        let mut p = ZetaPoly::zero();
        for (k, c) in s.iter() {
            p.add_monomial(vec![Factor { func, index: k.clone() }], c);
        }
        p
    }

    pub fn single(f: Factor) -> Self {
        let mut p = ZetaPoly::zero();
        p.add_monomial(vec![f], 1);
        p
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[Factor], i64)> {
        self.terms.iter().map(|(m, &c)| (m.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = &Factor> {
        self.terms.keys().flatten()
    }

    /// Common weight of all monomials (sum of factor weights), if any.
    pub fn homogeneous_weight(&self) -> Option<u32> {
        let mut ws = self.terms.keys().map(|m| m.iter().map(|f| f.index.weight()).sum::<u32>());
        let first = ws.next()?;
        ws.all(|w| w == first).then_some(first)
    }

    /// Reads a single-factor `ζ` polynomial back as a formal sum of indices.
    pub fn as_zeta_sum(&self) -> Option<FormalSum> {
        let mut s = FormalSum::zero();
        for (m, c) in self.iter() {
            match m {
                [Factor { func: ZetaFn::Zeta, index }] => s.add_term(index.clone(), c),
                _ => return None,
            }
        }
        Some(s)
    }
}

impl fmt::Display for ZetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.iter().enumerate() {
            let mag = c.abs();
            match (i, c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if mag != 1 {
                write!(f, "{mag}·")?;
            }
            if m.is_empty() {
                f.write_str("1")?;
            }
            for fac in m {
                let name = match fac.func {
                    ZetaFn::Zeta => "ζ",
                    ZetaFn::ZetaStar => "ζ⋆",
                    ZetaFn::HStar => "H⋆",
                };
                if fac.index.is_empty() {
                    write!(f, "{name}(∅)")?;
                } else {
                    write!(f, "{name}{}", fac.index.paren())?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MonomialRepr {
    coeff: i64,
    factors: Vec<Factor>,
}

impl Serialize for ZetaPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<MonomialRepr> =
            self.iter().map(|(m, c)| MonomialRepr { coeff: c, factors: m.to_vec() }).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ZetaPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<MonomialRepr>::deserialize(d)?;
        let mut p = ZetaPoly::zero();
        for m in v {
            p.add_monomial(m.factors, m.coeff);
        }
        Ok(p)
    }
}

/// An identity between nested sums, together with the strength in which it holds:
/// at every truncation `N`, only in the limit, or modulo a prime at `N = p - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identity {
    pub family: Family,
    pub lhs: ZetaPoly,
    pub rhs: ZetaPoly,
    /// The source indices (the arguments, or the members of a cyclic class).
    pub provenance: Vec<Index>,
    pub validity: Validity,
}

impl Identity {
    pub fn new(family: Family, lhs: ZetaPoly, rhs: ZetaPoly, provenance: Vec<Index>, validity: Validity) -> Result<Self> {
        let id = Identity { family, lhs, rhs, provenance, validity };
        id.check()?;
        Ok(id)
    }

    pub fn check(&self) -> Result<()> {
        if self.validity == Validity::LimitOnly {
            for f in self.lhs.factors().chain(self.rhs.factors()) {
                if f.func != ZetaFn::Zeta {
                    return Err(Error::domain(format!("limit identity uses a finite-N function on {}", f.index.paren())));
                }
                if !f.index.is_empty() && !f.index.is_admissible() {
                    return Err(Error::domain(format!(
                        "limit identity contains non-admissible index {}",
                        f.index.paren()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Both sides homogeneous of one common weight.
    pub fn is_homogeneous(&self) -> bool {
        match (self.lhs.homogeneous_weight(), self.rhs.homogeneous_weight()) {
            (Some(a), Some(b)) => a == b,
            (Some(_), None) => self.rhs.is_zero(),
            (None, Some(_)) => self.lhs.is_zero(),
            (None, None) => self.lhs.is_zero() && self.rhs.is_zero(),
        }
    }

    /// `ζ(k) ζ(l) = Σ a_h ζ(h)` for admissible (or empty) `k`, `l`.
    pub fn shuffle(k: &Index, l: &Index, product: &FormalSum) -> Result<Self> {
        for x in [k, l] {
            if !x.is_empty() && !x.is_admissible() {
                return Err(Error::domain(format!("shuffle identity needs admissible indices, got {}", x.paren())));
            }
        }
        let mut lhs = ZetaPoly::zero();
        lhs.add_monomial(vec![Factor::zeta(k.clone()), Factor::zeta(l.clone())], 1);
        Identity::new(
            Family::Shuffle,
            lhs,
            ZetaPoly::from_zeta_sum(product),
            vec![k.clone(), l.clone()],
            Validity::LimitOnly,
        )
    }

    /// `(-1)^{wt(l)} ζ_{p-1}(k, l̄) ≡ Σ a_h ζ_{p-1}(h) (mod p)`.
    pub fn shuffle_mod_p(k: &Index, l: &Index, product: &FormalSum) -> Result<Self> {
        let sign = if l.weight().is_multiple_of(2) { 1 } else { -1 };
        let mut lhs = ZetaPoly::zero();
        lhs.add_monomial(vec![Factor::zeta(k.concat(&l.reversed()))], sign);
        Identity::new(
            Family::Shuffle,
            lhs,
            ZetaPoly::from_zeta_sum(product),
            vec![k.clone(), l.clone()],
            Validity::ModP,
        )
    }

    /// `ζ_N(k) ζ_N(l) = Σ b_h ζ_N(h)`.
    pub fn harmonic(k: &Index, l: &Index, product: &FormalSum) -> Result<Self> {
        let mut lhs = ZetaPoly::zero();
        lhs.add_monomial(vec![Factor::zeta(k.clone()), Factor::zeta(l.clone())], 1);
        Identity::new(
            Family::Harmonic,
            lhs,
            ZetaPoly::from_zeta_sum(product),
            vec![k.clone(), l.clone()],
            Validity::ExactFiniteN,
        )
    }

    /// `ζ(k) = ζ(k†)`.
    pub fn duality(k: &Index, dual: &Index) -> Result<Self> {
        Identity::new(
            Family::Dual,
            ZetaPoly::single(Factor::zeta(k.clone())),
            ZetaPoly::single(Factor::zeta(dual.clone())),
            vec![k.clone()],
            Validity::LimitOnly,
        )
    }

    /// `H⋆_N(k) = ζ⋆_N(k^∨)`.
    pub fn hoffman_dual(k: &Index, dual: &Index) -> Result<Self> {
        Identity::new(
            Family::HoffmanDual,
            ZetaPoly::single(Factor { func: ZetaFn::HStar, index: k.clone() }),
            ZetaPoly::single(Factor { func: ZetaFn::ZetaStar, index: dual.clone() }),
            vec![k.clone()],
            Validity::ExactFiniteN,
        )
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.validity {
            Validity::ModP => write!(f, "{} ≡ {} (mod p, N = p-1)", self.lhs, self.rhs),
            Validity::ExactFiniteN => write!(f, "{} = {} (every N)", self.lhs, self.rhs),
            Validity::LimitOnly => write!(f, "{} = {}", self.lhs, self.rhs),
        }
    }
}
