//! Coefficient rings for measures and q-series.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::padic::{PAdicApprox, PrimeContext};

/// Operations a measure or q-series needs from its coefficients.
pub trait CoeffRing: Clone + std::fmt::Debug + PartialEq + Send + Sync {
    type Ctx: Clone + std::fmt::Debug + Send + Sync;

    fn zero_in(ctx: &Self::Ctx) -> Self;
    fn from_ratio(ctx: &Self::Ctx, num: &BigInt, den: &BigInt) -> Result<Self>;
    fn zero_like(&self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scale_int(&self, k: &BigInt) -> Self;
    /// Exact division by an integer prime to `p`.
    fn div_int(&self, k: &BigInt) -> Result<Self>;
    /// Whether the value is divisible by `p^j`.
    fn divisible_by_p_pow(&self, p: u64, j: u32) -> bool;
    fn vanishes(&self) -> bool;

    fn from_int(ctx: &Self::Ctx, k: i128) -> Self {
        Self::from_ratio(ctx, &BigInt::from(k), &BigInt::from(1)).expect("integers embed")
    }

    fn from_rational(ctx: &Self::Ctx, q: &BigRational) -> Result<Self> {
        Self::from_ratio(ctx, q.numer(), q.denom())
    }
}

/// Multiplication by scalars of type `S`.
pub trait Module<S> {
    fn smul(&self, s: &S) -> Self;
}

impl CoeffRing for BigRational {
    type Ctx = ();

    fn zero_in(_: &()) -> Self {
        BigRational::zero()
    }
    fn from_ratio(_: &(), num: &BigInt, den: &BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(BigRational::new(num.clone(), den.clone()))
    }
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scale_int(&self, k: &BigInt) -> Self {
        self * BigRational::from_integer(k.clone())
    }
    fn div_int(&self, k: &BigInt) -> Result<Self> {
        if k.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(self / BigRational::from_integer(k.clone()))
    }
    fn divisible_by_p_pow(&self, p: u64, j: u32) -> bool {
        if Zero::is_zero(self) {
            return true;
        }
        let pj = BigInt::from(p).pow(j);
        !self.denom().is_multiple_of(&BigInt::from(p)) && self.numer().is_multiple_of(&pj)
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Module<BigRational> for BigRational {
    fn smul(&self, s: &BigRational) -> Self {
        self * s
    }
}

fn bigint_mod(x: &BigInt, m: u64) -> i128 {
    let r = x.mod_floor(&BigInt::from(m));
    r.to_i128().expect("residue fits")
}

impl CoeffRing for PAdicApprox {
    type Ctx = PrimeContext;

    fn zero_in(ctx: &PrimeContext) -> Self {
        ctx.zero()
    }
    fn from_ratio(ctx: &PrimeContext, num: &BigInt, den: &BigInt) -> Result<Self> {
        let m = ctx.modulus();
        let d = bigint_mod(den, m);
        let n = bigint_mod(num, m);
        if d % ctx.p() as i128 == 0 {
            return Err(Error::Domain(format!(
                "{num}/{den} is not {}-integral",
                ctx.p()
            )));
        }
        ctx.ratio(n, d)
    }
    fn zero_like(&self) -> Self {
        self.ctx().zero().reduce(self.precision())
    }
    fn plus(&self, o: &Self) -> Self {
        *self + *o
    }
    fn minus(&self, o: &Self) -> Self {
        *self - *o
    }
    fn times(&self, o: &Self) -> Self {
        *self * *o
    }
    fn negated(&self) -> Self {
        -*self
    }
    fn scale_int(&self, k: &BigInt) -> Self {
        let r = bigint_mod(k, self.ctx().modulus());
        self.scale(r)
    }
    fn div_int(&self, k: &BigInt) -> Result<Self> {
        let unit = <PAdicApprox as CoeffRing>::from_ratio(&self.ctx(), &BigInt::from(1), k)?;
        Ok(*self * unit)
    }
    fn divisible_by_p_pow(&self, p: u64, j: u32) -> bool {
        debug_assert_eq!(p, self.p());
        self.valuation() >= j
    }
    fn vanishes(&self) -> bool {
        PAdicApprox::is_zero(self)
    }
}

impl Module<PAdicApprox> for PAdicApprox {
    fn smul(&self, s: &PAdicApprox) -> Self {
        *self * *s
    }
}

/// Reduce an exact rational into `Z/p^M`.
pub fn rational_to_padic(ctx: &PrimeContext, q: &BigRational) -> Result<PAdicApprox> {
    <PAdicApprox as CoeffRing>::from_rational(ctx, q)
}

/// String form used in serialized output: `num/den` or `num`.
pub fn rational_string(q: &BigRational) -> String {
    if q.denom() == &BigInt::from(1) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Whether a rational has a denominator prime to `p`.
pub fn is_p_integral(q: &BigRational, p: u64) -> bool {
    !q.denom().abs().is_multiple_of(&BigInt::from(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_reduce_into_residues() {
        let ctx = PrimeContext::new(5, 3).unwrap();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let r = rational_to_padic(&ctx, &half).unwrap();
        assert_eq!(r.residue(), 63);
        let fifth = BigRational::new(BigInt::from(1), BigInt::from(5));
        assert!(rational_to_padic(&ctx, &fifth).is_err());
        assert!(is_p_integral(&half, 5));
        assert!(!is_p_integral(&fifth, 5));
    }

    #[test]
    fn divisibility_query() {
        let x = BigRational::new(BigInt::from(50), BigInt::from(3));
        assert!(x.divisible_by_p_pow(5, 2));
        assert!(!x.divisible_by_p_pow(5, 3));
        let y = BigRational::new(BigInt::from(25), BigInt::from(15));
        assert!(y.divisible_by_p_pow(5, 1));
        assert!(!y.divisible_by_p_pow(5, 2));
        let z = BigRational::new(BigInt::from(1), BigInt::from(5));
        assert!(!z.divisible_by_p_pow(5, 0));
    }
}
