use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::numeric::Scalar;
use crate::Rational;

/// Largest modulus accepted; keeps every product below `2^64`.
pub const MAX_PRIME: u64 = 1 << 31;

/// The field of `p` elements with a table of inverses of `1..p-1`.
#[derive(Debug, Clone)]
pub struct PrimeField {
    p: u64,
    inv: Vec<u64>,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        if p >= MAX_PRIME {
            return Err(Error::domain(format!("modulus {p} is too large (limit {MAX_PRIME})")));
        }
        let mut inv = vec![0u64; p as usize];
        if p > 1 {
            inv[1] = 1;
        }
        // i^{-1} = -(p div i) (p mod i)^{-1}
        for i in 2..p {
            inv[i as usize] = (p - (p / i) * inv[(p % i) as usize] % p) % p;
        }
        Ok(PrimeField { p, inv })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, v: u64) -> Residue {
        Residue { v: v % self.p, p: self.p }
    }

    pub fn from_i64(&self, n: i64) -> Residue {
        self.elem(n.rem_euclid(self.p as i64) as u64)
    }

    pub fn inverse(&self, r: Residue) -> Option<Residue> {
        (r.v != 0).then(|| Residue { v: self.inv[r.v as usize], p: self.p })
    }

    fn reduce_int(&self, n: &BigInt) -> Residue {
        let m = n.mod_floor(&BigInt::from(self.p));
        self.elem(m.to_u64().expect("reduced below p"))
    }
}

/// An element of the field of `p` elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    v: u64,
    p: u64,
}

impl Residue {
    pub fn value(self) -> u64 {
        self.v
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    fn same_field(self, o: Residue) {
        assert_eq!(self.p, o.p, "residues modulo different primes");
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.v, self.p)
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, o: Residue) -> Residue {
        self.same_field(o);
        Residue { v: (self.v + o.v) % self.p, p: self.p }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, o: Residue) -> Residue {
        self.same_field(o);
        Residue { v: (self.v + self.p - o.v) % self.p, p: self.p }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, o: Residue) -> Residue {
        self.same_field(o);
        Residue { v: self.v * o.v % self.p, p: self.p }
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue { v: (self.p - self.v) % self.p, p: self.p }
    }
}

impl Scalar for Residue {
    type Ctx = PrimeField;

    fn zero(f: &PrimeField) -> Self {
        f.elem(0)
    }

    fn one(f: &PrimeField) -> Self {
        f.elem(1)
    }

    fn from_int(n: i64, f: &PrimeField) -> Self {
        f.from_i64(n)
    }

    fn recip_int(n: u64, f: &PrimeField) -> Option<Self> {
        f.inverse(f.elem(n))
    }

    fn from_rational(r: &Rational, f: &PrimeField) -> Option<Self> {
        let den = f.reduce_int(&r.denom().abs());
        let num = f.reduce_int(r.numer());
        let num = if r.denom().is_negative() { -num } else { num };
        Some(num * f.inverse(den)?)
    }

    fn is_zero(&self) -> bool {
        self.v == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(1).is_err());
    }

    #[test]
    fn inverse_table() {
        for p in [2, 3, 5, 7, 13, 101] {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p {
                assert_eq!((f.elem(a) * f.inverse(f.elem(a)).unwrap()).value(), 1, "{a} mod {p}");
            }
            assert!(f.inverse(f.elem(0)).is_none());
        }
    }

    #[test]
    fn rationals_reduce() {
        let f = PrimeField::new(7).unwrap();
        let r = Rational::new((-3).into(), 4.into());
        // 4^{-1} = 2 mod 7, so -3/4 = -6 = 1
        assert_eq!(Residue::from_rational(&r, &f).unwrap().value(), 1);
        assert!(Residue::from_rational(&Rational::new(1.into(), 14.into()), &f).is_none());
    }
}
