//! Truncated q-expansions with coefficients in a [`CoeffRing`].

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::padic::{PAdicApprox, PrimeContext};
use crate::ring::{rational_to_padic, CoeffRing};
use num_rational::BigRational;

/// `Σ_{m <= order} c_m q^{m/denom}`.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries<R> {
    coeffs: Vec<R>,
    denom: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QSeriesCtx<C> {
    pub inner: C,
    pub order: usize,
    pub denom: u64,
}

impl<R: CoeffRing> QSeries<R> {
    pub fn new(coeffs: Vec<R>, denom: u64) -> Result<Self> {
        if coeffs.is_empty() || denom == 0 {
            return Err(Error::InvalidParameter("empty series or zero exponent denominator".into()));
        }
        Ok(QSeries { coeffs, denom })
    }

    pub fn constant(c: R, order: usize) -> Self {
        let zero = c.zero_like();
        let mut coeffs = vec![zero; order + 1];
        coeffs[0] = c;
        QSeries { coeffs, denom: 1 }
    }

    pub fn from_fn(order: usize, f: impl Fn(usize) -> R) -> Self {
        QSeries {
            coeffs: (0..=order).map(f).collect(),
            denom: 1,
        }
    }

    /// Last exponent index whose coefficient is known.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn coeff(&self, m: usize) -> Option<&R> {
        self.coeffs.get(m)
    }

    pub fn coefficients(&self) -> &[R] {
        &self.coeffs
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&R, &R) -> R) -> Self {
        assert_eq!(self.denom, other.denom, "exponent denominators differ");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect();
        QSeries { coeffs, denom: self.denom }
    }

    pub fn plus(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.plus(b))
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.minus(b))
    }

    pub fn negated(&self) -> Self {
        self.map_same(|c| c.negated())
    }

    /// Product, truncated to the smaller order.
    pub fn times(&self, other: &Self) -> Self {
        assert_eq!(self.denom, other.denom, "exponent denominators differ");
        let order = self.order().min(other.order());
        let mut coeffs = vec![self.coeffs[0].zero_like(); order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.vanishes() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(order + 1 - i).enumerate() {
                coeffs[i + j] = coeffs[i + j].plus(&a.times(b));
            }
        }
        QSeries { coeffs, denom: self.denom }
    }

    pub fn scale(&self, s: &R) -> Self {
        self.map_same(|c| c.times(s))
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        self.map_same(|c| c.scale_int(k))
    }

    fn map_same(&self, f: impl Fn(&R) -> R) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
            denom: self.denom,
        }
    }

    pub fn map<S: CoeffRing>(&self, f: impl Fn(&R) -> Result<S>) -> Result<QSeries<S>> {
        Ok(QSeries {
            coeffs: self.coeffs.iter().map(f).collect::<Result<_>>()?,
            denom: self.denom,
        })
    }

    pub fn truncate(&self, order: usize) -> Self {
        QSeries {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
            denom: self.denom,
        }
    }

    /// `f(q^e)` at the same order; only the first `⌊order/e⌋ + 1` source terms matter.
    pub fn substitute_power(&self, e: u64) -> Self {
        let e = e as usize;
        let zero = self.coeffs[0].zero_like();
        let coeffs = (0..=self.order())
            .map(|m| {
                if m % e == 0 {
                    self.coeffs[m / e].clone()
                } else {
                    zero.clone()
                }
            })
            .collect();
        QSeries { coeffs, denom: self.denom }
    }

    /// Same coefficients on exponents `m/denom`.
    pub fn with_denom(&self, denom: u64) -> Self {
        QSeries {
            coeffs: self.coeffs.clone(),
            denom,
        }
    }

    /// First index where the two series differ according to `same`.
    pub fn first_mismatch(&self, other: &Self, same: impl Fn(&R, &R) -> bool) -> Option<usize> {
        let order = self.order().min(other.order());
        (0..=order).find(|&m| !same(&self.coeffs[m], &other.coeffs[m]))
    }
}

impl QSeries<BigRational> {
    pub fn to_padic(&self, ctx: &PrimeContext) -> Result<QSeries<PAdicApprox>> {
        self.map(|c| rational_to_padic(ctx, c))
    }
}

impl QSeries<PAdicApprox> {
    /// Coefficientwise congruence mod `p^k`; returns the first failing index.
    pub fn congruence_failure(&self, other: &Self, k: u32) -> Option<usize> {
        self.first_mismatch(other, |a, b| a.congruent(b, k))
    }
}

impl<R: CoeffRing> CoeffRing for QSeries<R> {
    type Ctx = QSeriesCtx<R::Ctx>;

    fn zero_in(ctx: &Self::Ctx) -> Self {
        QSeries {
            coeffs: vec![R::zero_in(&ctx.inner); ctx.order + 1],
            denom: ctx.denom,
        }
    }
    fn from_ratio(ctx: &Self::Ctx, num: &BigInt, den: &BigInt) -> Result<Self> {
        let c = R::from_ratio(&ctx.inner, num, den)?;
        Ok(QSeries::constant(c, ctx.order).with_denom(ctx.denom))
    }
    fn zero_like(&self) -> Self {
        self.map_same(|c| c.zero_like())
    }
    fn plus(&self, o: &Self) -> Self {
        QSeries::plus(self, o)
    }
    fn minus(&self, o: &Self) -> Self {
        QSeries::minus(self, o)
    }
    fn times(&self, o: &Self) -> Self {
        QSeries::times(self, o)
    }
    fn negated(&self) -> Self {
        QSeries::negated(self)
    }
    fn scale_int(&self, k: &BigInt) -> Self {
        QSeries::scale_int(self, k)
    }
    fn div_int(&self, k: &BigInt) -> Result<Self> {
        Ok(QSeries {
            coeffs: self.coeffs.iter().map(|c| c.div_int(k)).collect::<Result<_>>()?,
            denom: self.denom,
        })
    }
    fn divisible_by_p_pow(&self, p: u64, j: u32) -> bool {
        self.coeffs.iter().all(|c| c.divisible_by_p_pow(p, j))
    }
    fn vanishes(&self) -> bool {
        self.coeffs.iter().all(|c| c.vanishes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn series(v: &[i64]) -> QSeries<BigRational> {
        QSeries::new(v.iter().map(|&x| BigRational::from_integer(x.into())).collect(), 1).unwrap()
    }

    #[test]
    fn product_truncates_to_the_shorter_order() {
        let a = series(&[1, 1, 0, 0]);
        let b = series(&[1, -1, 0]);
        assert_eq!(a.times(&b), series(&[1, 0, -1]));
    }

    #[test]
    fn substitution_reindexes() {
        let a = series(&[1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(a.substitute_power(3), series(&[1, 0, 0, 2, 0, 0, 3]));
        let one = QSeries::constant(BigRational::one(), 4);
        assert_eq!(one.substitute_power(5), one);
    }
}
