//! Measures on `Z_p` stored as coset tables, the Amice transform, and moments.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::cyclotomic::{CyclotomicElement, MAX_LEVEL};
use crate::error::{Error, Result};
use crate::padic::{ipow, mod_reduce, valuation_u64, PAdicApprox, PrimeContext};
use crate::ring::{rational_to_padic, CoeffRing};

/// The coset `rep + p^level Z_p`, with `0 <= rep < p^level`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetAddress {
    rep: u64,
    level: u32,
}

impl CosetAddress {
    pub fn new(p: u64, a: i128, level: u32) -> Self {
        CosetAddress {
            rep: mod_reduce(a, ipow(p, level)),
            level,
        }
    }

    pub fn rep(&self) -> u64 {
        self.rep
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// The `p` cosets one level down.
    pub fn children(&self, p: u64) -> Vec<CosetAddress> {
        let step = ipow(p, self.level);
        (0..p)
            .map(|b| CosetAddress {
                rep: self.rep + b * step,
                level: self.level + 1,
            })
            .collect()
    }

    pub fn parent(&self, p: u64) -> Option<CosetAddress> {
        (self.level > 0).then(|| CosetAddress {
            rep: self.rep % ipow(p, self.level - 1),
            level: self.level - 1,
        })
    }
}

impl fmt::Display for CosetAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+p^{}", self.rep, self.level)
    }
}

/// Closed-form value of a measure on `a + p^n Z_p`.
pub type Rule<R> = Arc<dyn Fn(u64, u32) -> R + Send + Sync>;

/// A measure tabulated on the cosets of one level.
#[derive(Clone)]
pub struct FiniteLevelMeasure<R: CoeffRing> {
    ctx: PrimeContext,
    level: u32,
    values: Vec<R>,
    name: String,
    rule: Option<Rule<R>>,
}

impl<R: CoeffRing> fmt::Debug for FiniteLevelMeasure<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteLevelMeasure")
            .field("name", &self.name)
            .field("level", &self.level)
            .field("values", &self.values)
            .finish()
    }
}

impl<R: CoeffRing + 'static> FiniteLevelMeasure<R> {
    /// Tabulate a rule at `level`.
    pub fn from_rule(ctx: PrimeContext, name: &str, level: u32, rule: Rule<R>) -> Self {
        let size = ipow(ctx.p(), level);
        let values = (0..size).into_par_iter().map(|a| rule(a, level)).collect();
        FiniteLevelMeasure {
            ctx,
            level,
            values,
            name: name.to_string(),
            rule: Some(rule),
        }
    }

    /// A bare table; it can be coarsened but not refined.
    pub fn from_table(ctx: PrimeContext, name: &str, level: u32, values: Vec<R>) -> Result<Self> {
        if values.len() as u64 != ipow(ctx.p(), level) {
            return Err(Error::InvalidParameter(format!(
                "table of length {} does not match level {level}",
                values.len()
            )));
        }
        Ok(FiniteLevelMeasure {
            ctx,
            level,
            values,
            name: name.to_string(),
            rule: None,
        })
    }

    /// Unit mass at the point `x`.
    pub fn dirac(ctx: PrimeContext, x: i128, level: u32, one: R) -> Self {
        let zero = one.zero_like();
        let p = ctx.p();
        let rule: Rule<R> = Arc::new(move |a, n| {
            if mod_reduce(x, ipow(p, n)) == a {
                one.clone()
            } else {
                zero.clone()
            }
        });
        Self::from_rule(ctx, &format!("dirac({x})"), level, rule)
    }

    pub fn ctx(&self) -> PrimeContext {
        self.ctx
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[R] {
        &self.values
    }

    pub fn value(&self, a: i128) -> &R {
        &self.values[mod_reduce(a, ipow(self.ctx.p(), self.level)) as usize]
    }

    /// Value on a coset of any level at or above the table's level, or any level with a rule.
    pub fn coset_value(&self, addr: CosetAddress) -> Result<R> {
        if addr.level == self.level {
            return Ok(self.values[addr.rep as usize].clone());
        }
        if let Some(rule) = &self.rule {
            return Ok(rule(addr.rep, addr.level));
        }
        if addr.level > self.level {
            return Err(Error::Domain(format!(
                "table {} has no rule to refine to level {}",
                self.name, addr.level
            )));
        }
        let step = ipow(self.ctx.p(), addr.level);
        let mut acc = self.values[0].zero_like();
        let mut b = addr.rep;
        while (b as usize) < self.values.len() {
            acc = acc.plus(&self.values[b as usize]);
            b += step;
        }
        Ok(acc)
    }

    /// The same measure at another level.
    pub fn at_level(&self, level: u32) -> Result<Self> {
        if level == self.level {
            return Ok(self.clone());
        }
        let size = ipow(self.ctx.p(), level);
        let values = (0..size)
            .into_par_iter()
            .map(|a| self.coset_value(CosetAddress { rep: a, level }))
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteLevelMeasure {
            ctx: self.ctx,
            level,
            values,
            name: self.name.clone(),
            rule: self.rule.clone(),
        })
    }

    pub fn total_mass(&self) -> R {
        self.values
            .iter()
            .fold(self.values[0].zero_like(), |acc, v| acc.plus(v))
    }

    /// Whether the level-`n+1` values sum to the level-`n` values.
    pub fn is_coherent(&self, n: u32) -> Result<bool> {
        let coarse = self.at_level(n)?;
        let fine = self.at_level(n + 1)?;
        let p = self.ctx.p();
        Ok((0..ipow(p, n)).all(|a| {
            let addr = CosetAddress { rep: a, level: n };
            let s = addr
                .children(p)
                .iter()
                .fold(coarse.values[0].zero_like(), |acc, ch| {
                    acc.plus(&fine.values[ch.rep as usize])
                });
            s == coarse.values[a as usize]
        }))
    }

    /// Apply a coefficient map coset by coset, keeping the rule.
    pub fn map<S: CoeffRing + 'static>(
        &self,
        f: impl Fn(&R) -> Result<S> + Send + Sync + Clone + 'static,
    ) -> Result<FiniteLevelMeasure<S>> {
        let values = self.values.iter().map(&f).collect::<Result<Vec<_>>>()?;
        let rule = self.rule.clone().map(|r| {
            let g = f.clone();
            Arc::new(move |a, n| g(&r(a, n)).expect("coefficient map failed on refinement"))
                as Rule<S>
        });
        Ok(FiniteLevelMeasure {
            ctx: self.ctx,
            level: self.level,
            values,
            name: self.name.clone(),
            rule,
        })
    }
}

impl FiniteLevelMeasure<BigRational> {
    /// Reduce a p-integral rational measure into `Z/p^M`.
    pub fn to_padic(&self, ctx: PrimeContext) -> Result<FiniteLevelMeasure<PAdicApprox>> {
        self.map(move |q| {
            rational_to_padic(&ctx, q).map_err(|_| {
                Error::UnsupportedRing(format!("value {q} does not embed in Z/{}^M", ctx.p()))
            })
        })
    }
}

/// Truncated Amice transform `Σ c_j (t-1)^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct AmiceSeries {
    ctx: PrimeContext,
    coeffs: Vec<PAdicApprox>,
}

impl AmiceSeries {
    pub fn new(ctx: PrimeContext, coeffs: Vec<PAdicApprox>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("empty Amice series".into()));
        }
        Ok(AmiceSeries { ctx, coeffs })
    }

    /// `t^x` truncated at order `j_order`.
    pub fn monomial(ctx: PrimeContext, x: u64, j_order: usize) -> Self {
        let coeffs = (0..j_order)
            .map(|j| {
                let b = crate::bernoulli::binomial(x, j as u64);
                <PAdicApprox as CoeffRing>::from_ratio(&ctx, &b, &BigInt::from(1))
                    .expect("integers embed")
            })
            .collect();
        AmiceSeries { ctx, coeffs }
    }

    pub fn ctx(&self) -> PrimeContext {
        self.ctx
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficients(&self) -> &[PAdicApprox] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Option<&PAdicApprox> {
        self.coeffs.get(j)
    }
}

/// Refinement level at which Riemann sums give every `c_j`, `j < j_order`, mod `p^target`.
pub fn amice_level(p: u64, j_order: usize, target: u32) -> u32 {
    let loss = (1..j_order.max(1) as u64)
        .map(|i| valuation_u64(i, p))
        .max()
        .unwrap_or(0);
    target + loss
}

/// `c_j = Σ_a C(a, j) μ(a + p^m Z_p)`, by Horner's rule in `u = t - 1`.
pub fn amice_of_measure(
    mu: &FiniteLevelMeasure<PAdicApprox>,
    j_order: usize,
    target_precision: u32,
) -> Result<AmiceSeries> {
    if j_order == 0 {
        return Err(Error::InvalidParameter("truncation order must be positive".into()));
    }
    let ctx = mu.ctx().with_precision(target_precision)?;
    let m = amice_level(ctx.p(), j_order, target_precision);
    let fine = mu.at_level(m.max(mu.level()))?;
    let modulus = ctx.modulus();
    let mut poly = vec![0u64; j_order];
    for v in fine.values().iter().rev() {
        for j in (1..j_order).rev() {
            poly[j] = (poly[j] + poly[j - 1]) % modulus;
        }
        poly[0] = (poly[0] + v.residue() % modulus) % modulus;
    }
    let coeffs = poly.into_iter().map(|c| ctx.element(c as i128)).collect();
    AmiceSeries::new(ctx, coeffs)
}

/// Minimal truncation order for evaluating at a primitive `p^level`-th root of unity mod `p^prec`.
pub fn required_order(p: u64, level: u32, prec: u32) -> usize {
    if level == 0 {
        1
    } else {
        ((p - 1) * ipow(p, level - 1)) as usize * prec as usize
    }
}

/// `Σ c_j (ζ - 1)^j` for `ζ` a primitive `p^level`-th root of unity.
pub fn cyclo_eval(a: &AmiceSeries, level: u32) -> Result<CyclotomicElement> {
    let ctx = a.ctx();
    let need = required_order(ctx.p(), level, ctx.precision());
    if a.order() < need {
        return Err(Error::Precision {
            required: need,
            available: a.order(),
        });
    }
    let z = CyclotomicElement::root_power(ctx, level, 1)?
        .sub(&CyclotomicElement::constant(ctx, level, 1)?);
    let mut acc = CyclotomicElement::zero(ctx, level)?;
    for c in a.coefficients().iter().rev() {
        acc = acc.mul(&z).add(&CyclotomicElement::constant(ctx, level, c.residue() as i128)?);
    }
    Ok(acc)
}

/// `μ(a + p^n Z_p) = p^{-n} Σ_{ζ^{p^n}=1} A(ζ) ζ^{-a}`.
pub fn periods_from_series(a: &AmiceSeries, addr: CosetAddress) -> Result<PAdicApprox> {
    let n = addr.level();
    if n > MAX_LEVEL {
        return Err(Error::UnsupportedRing(format!(
            "periods at level {n} need cyclotomic level above {MAX_LEVEL}"
        )));
    }
    let ctx = a.ctx();
    if ctx.precision() <= n {
        return Err(Error::Precision {
            required: n as usize + 1,
            available: ctx.precision() as usize,
        });
    }
    let mut total = ctx.zero();
    for j in 0..=n {
        let value = cyclo_eval(a, j)?;
        let twist = CyclotomicElement::root_power(ctx, j, -(addr.rep() as i64))?;
        let tr = value.mul(&twist).trace();
        let c = tr.as_constant().ok_or_else(|| {
            Error::Consistency("trace of a cyclotomic element is not rational".into())
        })?;
        total = total + c;
    }
    total.div_p_pow(n)
}

/// `Σ_{0 <= a < p^n} a^k μ(a + p^n Z_p)`.
pub fn moment_riemann<R: CoeffRing + 'static>(
    mu: &FiniteLevelMeasure<R>,
    k: u32,
    n: u32,
) -> Result<R> {
    let table = mu.at_level(n)?;
    let terms: Vec<R> = table
        .values()
        .par_iter()
        .enumerate()
        .map(|(a, v)| {
            if k == 0 {
                v.clone()
            } else {
                v.scale_int(&BigInt::from(a).pow(k))
            }
        })
        .collect();
    Ok(terms
        .iter()
        .fold(table.values()[0].zero_like(), |acc, t| acc.plus(t)))
}

/// `(t d/dt)^k A` at `t = 1`.
pub fn moment_operator(a: &AmiceSeries, k: u32) -> Result<PAdicApprox> {
    if a.order() < k as usize + 1 {
        return Err(Error::Precision {
            required: k as usize + 1,
            available: a.order(),
        });
    }
    let mut c: Vec<PAdicApprox> = a.coefficients()[..=k as usize].to_vec();
    for _ in 0..k {
        let len = c.len();
        let next: Vec<PAdicApprox> = (0..len - 1)
            .map(|i| c[i + 1].scale(i as i128 + 1) + c[i].scale(i as i128))
            .collect();
        c = next;
    }
    Ok(c[0])
}

/// Zero out the cosets inside `pZ_p`.
pub fn restrict_to_units<R: CoeffRing + 'static>(
    mu: &FiniteLevelMeasure<R>,
) -> Result<FiniteLevelMeasure<R>> {
    if mu.level() == 0 {
        return Err(Error::Domain("restriction to units needs level >= 1".into()));
    }
    let p = mu.ctx().p();
    let values = mu
        .values()
        .iter()
        .enumerate()
        .map(|(a, v)| if (a as u64).is_multiple_of(p) { v.zero_like() } else { v.clone() })
        .collect();
    let rule = mu.rule.clone().map(|r| {
        Arc::new(move |a: u64, n: u32| {
            let v = r(a, n);
            if n > 0 && a.is_multiple_of(p) {
                v.zero_like()
            } else {
                v
            }
        }) as Rule<R>
    });
    Ok(FiniteLevelMeasure {
        ctx: mu.ctx(),
        level: mu.level(),
        values,
        name: format!("{}|units", mu.name()),
        rule,
    })
}

/// A Riemann sum together with the exponent up to which it is reliable.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedIntegral<R> {
    pub value: R,
    pub reliable_exponent: u32,
}

/// `Σ_a w(a) μ(a + p^n Z_p)`; the weight returns `None` where it is undefined.
pub fn weighted_integral<R: CoeffRing + 'static>(
    mu: &FiniteLevelMeasure<R>,
    weight: impl Fn(u64) -> Option<R> + Sync,
    n: u32,
    modulus_loss: u32,
) -> Result<WeightedIntegral<R>> {
    let table = mu.at_level(n)?;
    let mut acc = table.values()[0].zero_like();
    for (a, v) in table.values().iter().enumerate() {
        match weight(a as u64) {
            Some(w) => acc = acc.plus(&w.times(v)),
            None if v.vanishes() => {}
            None => {
                return Err(Error::Domain(format!(
                    "weight undefined on coset {a}+p^{n} of nonzero measure"
                )))
            }
        }
    }
    Ok(WeightedIntegral {
        value: acc,
        reliable_exponent: n.saturating_sub(modulus_loss),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrimeContext {
        PrimeContext::new(5, 6).unwrap()
    }

    #[test]
    fn dirac_amice_series() {
        let c = ctx();
        let d0 = FiniteLevelMeasure::dirac(c, 0, 1, c.one());
        let a0 = amice_of_measure(&d0, 6, 6).unwrap();
        assert_eq!(a0.coeff(0).unwrap().residue(), 1);
        assert!(a0.coefficients()[1..].iter().all(|x| x.is_zero()));
        let d1 = FiniteLevelMeasure::dirac(c, 1, 1, c.one());
        let a1 = amice_of_measure(&d1, 6, 6).unwrap();
        assert_eq!(a1.coeff(1).unwrap().residue(), 1);
        assert!(a1.coefficients()[2..].iter().all(|x| x.is_zero()));
    }

    #[test]
    fn dirac_periods() {
        let c = ctx();
        let one = AmiceSeries::monomial(c, 0, 24);
        let addr0 = CosetAddress::new(5, 0, 1);
        let addr1 = CosetAddress::new(5, 1, 1);
        assert_eq!(periods_from_series(&one, addr0).unwrap().residue(), 1);
        assert!(periods_from_series(&one, addr1).unwrap().is_zero());
    }

    #[test]
    fn moment_operator_on_diracs() {
        let c = ctx();
        let one = AmiceSeries::monomial(c, 0, 8);
        let t = AmiceSeries::monomial(c, 1, 8);
        let t3 = AmiceSeries::monomial(c, 3, 8);
        for k in 1..5 {
            assert!(moment_operator(&one, k).unwrap().is_zero());
            assert_eq!(moment_operator(&t, k).unwrap().residue(), 1);
            assert_eq!(moment_operator(&t3, k).unwrap().residue(), 3u64.pow(k));
        }
        assert!(moment_operator(&one, 9).is_err());
    }

    #[test]
    fn restriction() {
        let c = ctx();
        let d0 = FiniteLevelMeasure::dirac(c, 0, 2, c.one());
        let r = restrict_to_units(&d0).unwrap();
        assert!(r.total_mass().is_zero());
        let d1 = FiniteLevelMeasure::dirac(c, 1, 2, c.one());
        assert_eq!(restrict_to_units(&d1).unwrap().values(), d1.values());
        let level0 = FiniteLevelMeasure::dirac(c, 1, 0, c.one());
        assert!(restrict_to_units(&level0).is_err());
    }
}
