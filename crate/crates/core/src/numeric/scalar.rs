use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::index::Index;
use crate::Rational;

/// Field elements the evaluators run over. The context carries whatever a value
/// needs that is only known at run time (the modulus, for residues).
pub trait Scalar:
    Clone + Debug + PartialEq + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    type Ctx: Sync + ?Sized;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_int(n: i64, ctx: &Self::Ctx) -> Self;
    /// `1/n`, or `None` when `n` is zero in the field.
    fn recip_int(n: u64, ctx: &Self::Ctx) -> Option<Self>;
    /// `r`, or `None` when its denominator is zero in the field.
    fn from_rational(r: &Rational, ctx: &Self::Ctx) -> Option<Self>;
    fn is_zero(&self) -> bool;

    /// `n^{-e}`; `0^0 = 1`.
    fn recip_pow(n: u64, e: u32, ctx: &Self::Ctx) -> Option<Self> {
        if e == 0 {
            return Some(Self::one(ctx));
        }
        let r = Self::recip_int(n, ctx)?;
        let mut acc = r.clone();
        for _ in 1..e {
            acc = acc * r.clone();
        }
        Some(acc)
    }

    /// `ζ_N(k)`; rationals override this with a faster exact path.
    fn zeta_trunc(k: &Index, n: u32, ctx: &Self::Ctx) -> Result<Self> {
        super::mhs::zeta_trunc_in(k, n, ctx)
    }

    /// `Σ_{x,y} a[x] b[y] x! y!/(x+y)!` over the box `0 ≤ x, y ≤ cap`.
    fn connector_sum(a: &[Self], b: &[Self], ctx: &Self::Ctx) -> Result<Self> {
        let mut total = Self::zero(ctx);
        for (x, ax) in a.iter().enumerate() {
            if ax.is_zero() {
                continue;
            }
            // C(x, y) = C(x, y-1)·y/(x+y)
            let mut c = Self::one(ctx);
            let mut inner = if b[0].is_zero() { Self::zero(ctx) } else { b[0].clone() };
            for (y, by) in b.iter().enumerate().skip(1) {
                let r = Self::recip_int((x + y) as u64, ctx)
                    .ok_or_else(|| Error::domain(format!("{} is not invertible in the scalar field", x + y)))?;
                c = c * Self::from_int(y as i64, ctx) * r;
                if !by.is_zero() {
                    inner = inner + c.clone() * by.clone();
                }
            }
            total = total + ax.clone() * inner;
        }
        Ok(total)
    }
}

/// Common denominator of `v` and the integer numerators over it.
fn over_common_denominator(v: &[Rational]) -> (BigInt, Vec<BigInt>) {
    let d = v.iter().fold(BigInt::one(), |d, r| d.lcm(r.denom()));
    let nums = v.iter().map(|r| r.numer() * (&d / r.denom())).collect();
    (d, nums)
}

impl Scalar for Rational {
    type Ctx = ();

    fn zero(_: &()) -> Self {
        Zero::zero()
    }

    fn one(_: &()) -> Self {
        One::one()
    }

    fn from_int(n: i64, _: &()) -> Self {
        Rational::from_integer(n.into())
    }

    fn recip_int(n: u64, _: &()) -> Option<Self> {
        (n != 0).then(|| Rational::new(BigInt::one(), n.into()))
    }

    fn from_rational(r: &Rational, _: &()) -> Option<Self> {
        Some(r.clone())
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn recip_pow(n: u64, e: u32, _: &()) -> Option<Self> {
        if e == 0 {
            return Some(One::one());
        }
        (n != 0).then(|| Rational::new(BigInt::one(), num_traits::pow(BigInt::from(n), e as usize)))
    }

    fn zeta_trunc(k: &Index, n: u32, _: &()) -> Result<Self> {
        Ok(super::mhs::zeta_trunc(k, n))
    }

    // Scaled by M!·Da·Db with M = 2·cap, the sum is integral:
    // Σ_x A[x]·x!·(M!/(x+cap)!)·Σ_y B[y]·y!·(x+cap)!/(x+y)!, the inner sum by Horner in y.
    fn connector_sum(a: &[Self], b: &[Self], _: &()) -> Result<Self> {
        let cap = a.len().max(b.len()).saturating_sub(1);
        let (da, an) = over_common_denominator(a);
        let (db, bn) = over_common_denominator(b);
        let mut fact = BigInt::one();
        let bf: Vec<BigInt> = bn
            .iter()
            .enumerate()
            .map(|(y, n)| {
                if y > 0 {
                    fact *= y;
                }
                n * &fact
            })
            .collect();
        // head[x] = M!/(x+cap)!
        let mut head = vec![BigInt::one(); cap + 1];
        for x in (0..cap).rev() {
            head[x] = &head[x + 1] * (x + cap + 1);
        }
        let mut total = BigInt::zero();
        let mut xf = BigInt::one();
        for (x, ax) in an.iter().enumerate() {
            if x > 0 {
                xf *= x;
            }
            if ax.is_zero() {
                continue;
            }
            let mut t = BigInt::zero();
            for (y, by) in bf.iter().enumerate() {
                t *= x + y;
                t += by;
            }
            // Horner stopped at y = len-1; pad up to cap
            for j in (x + bf.len())..=(x + cap) {
                t *= j;
            }
            total += ax * &xf * &head[x] * t;
        }
        Ok(Rational::new(total, da * db * &head[0] * (1..=cap).fold(BigInt::one(), |f, j| f * j)))
    }
}

