//! The Mazur measure `μ_N`, the regularized Kubota–Leopoldt measure `μ_KL`, and `γ_p`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::bernoulli::{bernoulli_poly, zeta_neg};
use crate::error::{Error, Result};
use crate::measure::{moment_riemann, FiniteLevelMeasure, Rule};
use crate::padic::{inv_mod, ipow, mod_reduce, padic_log, PAdicApprox, PrimeContext};
use crate::report::Report;
use crate::ring::{rational_string, rational_to_padic};

/// Auxiliary integers `c, N > 1`, coprime to each other and to `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RegularizationPair {
    c: u64,
    n: u64,
}

impl RegularizationPair {
    pub fn new(c: u64, n: u64, p: u64) -> Result<Self> {
        if c < 2 || n < 2 {
            return Err(Error::InvalidParameter(format!("c={c} and N={n} must exceed 1")));
        }
        if c.gcd(&n) != 1 {
            return Err(Error::InvalidParameter(format!("c={c} and N={n} are not coprime")));
        }
        if (c * n).is_multiple_of(p) {
            return Err(Error::InvalidParameter(format!("c·N = {} is divisible by p={p}", c * n)));
        }
        Ok(RegularizationPair { c, n })
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    #[allow(non_snake_case)]
    pub fn N(&self) -> u64 {
        self.n
    }

    /// `(c² - c^{k+1})(1 - N^{k+1})`.
    pub fn euler_factor(&self, k: u32) -> BigInt {
        let c = BigInt::from(self.c);
        let n = BigInt::from(self.n);
        (&c * &c - c.pow(k + 1)) * (BigInt::one() - n.pow(k + 1))
    }
}

/// `a♭`: the representative of `a` in `[0, p^n)`.
pub fn flat(a: i128, p: u64, n: u32) -> u64 {
    mod_reduce(a, ipow(p, n))
}

/// `(a/d)♭` for `d` prime to `p`.
pub fn div_flat(a: i128, d: u64, p: u64, n: u32) -> Result<u64> {
    let m = ipow(p, n);
    if n == 0 {
        return Ok(0);
    }
    let inv = inv_mod(d as i128, m)
        .ok_or_else(|| Error::Domain(format!("{d} is not invertible mod {p}^{n}")))?;
    Ok(((flat(a, p, n) as u128 * inv as u128) % m as u128) as u64)
}

fn q(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// `μ_N(a + p^n Z_p) = (a♭ - N (a/N)♭)/p^n + (N-1)/2`.
#[allow(non_snake_case)]
pub fn mu_n_period(p: u64, a: i128, n: u32, N: u64) -> Result<BigRational> {
    if N.is_multiple_of(p) {
        return Err(Error::Domain(format!("N={N} is not prime to p={p}")));
    }
    let af = flat(a, p, n) as i128;
    let anf = div_flat(a, N, p, n)? as i128;
    Ok(q(af - N as i128 * anf, ipow(p, n)) + q(N as i64 - 1, 2))
}

/// `-c² μ_N(a) + c μ_N(a/c) + (c²-c)(N-1)/2 · 1_{a ≡ 0}`.
pub fn mu_kl_period(p: u64, a: i128, n: u32, pair: &RegularizationPair) -> Result<BigRational> {
    let c = pair.c() as i64;
    let mut v = -q(c * c, 1) * mu_n_period(p, a, n, pair.N())?
        + q(c, 1) * mu_n_period(p, div_flat(a, pair.c(), p, n)? as i128, n, pair.N())?;
    if flat(a, p, n) == 0 {
        v += q((c * c - c) * (pair.N() as i64 - 1), 2);
    }
    Ok(v)
}

/// The same period written as the constant term of the weight-one divisor-sum form.
pub fn mu_kl_direct(p: u64, a: i128, n: u32, pair: &RegularizationPair) -> Result<BigRational> {
    let c = pair.c() as i128;
    let nn = pair.N() as i128;
    let af = flat(a, p, n) as i128;
    let a_n = div_flat(a, pair.N(), p, n)? as i128;
    let a_c = div_flat(a, pair.c(), p, n)? as i128;
    let a_cn = div_flat(a, pair.c() * pair.N(), p, n)? as i128;
    let mut v = q(-c * c * af + c * c * nn * a_n + c * a_c - c * nn * a_cn, ipow(p, n));
    if af != 0 {
        v -= q(c * (c - 1) * (nn - 1), 2);
    }
    Ok(v)
}

#[allow(non_snake_case)]
pub fn mazur_measure(ctx: PrimeContext, N: u64, level: u32) -> Result<FiniteLevelMeasure<BigRational>> {
    let p = ctx.p();
    mu_n_period(p, 0, 0, N)?;
    let rule: Rule<BigRational> =
        Arc::new(move |a, n| mu_n_period(p, a as i128, n, N).expect("validated N"));
    Ok(FiniteLevelMeasure::from_rule(ctx, &format!("mazur(N={N})"), level, rule))
}

pub fn kl_measure(
    ctx: PrimeContext,
    pair: RegularizationPair,
    level: u32,
) -> FiniteLevelMeasure<BigRational> {
    let p = ctx.p();
    let rule: Rule<BigRational> =
        Arc::new(move |a, n| mu_kl_period(p, a as i128, n, &pair).expect("validated pair"));
    FiniteLevelMeasure::from_rule(
        ctx,
        &format!("kl(c={},N={})", pair.c(), pair.N()),
        level,
        rule,
    )
}

/// `∫_{b+p^n Z_p} x^k dμ_N` from Bernoulli polynomials.
#[allow(non_snake_case)]
pub fn mazur_coset_moment(p: u64, b: i128, n: u32, N: u64, k: u32) -> Result<BigRational> {
    let pn = BigInt::from(ipow(p, n));
    let scale = BigRational::from_integer(pn.pow(k)) / BigRational::from_integer(BigInt::from(k + 1));
    let x1 = q(flat(b, p, n), pn.clone());
    let x2 = q(div_flat(b, N, p, n)?, pn);
    let nk = BigRational::from_integer(BigInt::from(N).pow(k + 1));
    Ok(scale * (bernoulli_poly(k as usize + 1, &x1) - nk * bernoulli_poly(k as usize + 1, &x2)))
}

/// `∫_{a+p^n Z_p} x^k dμ_KL`, exact.
pub fn kl_coset_moment(
    p: u64,
    a: i128,
    n: u32,
    pair: &RegularizationPair,
    k: u32,
) -> Result<BigRational> {
    if k == 0 {
        return mu_kl_period(p, a, n, pair);
    }
    let c = BigInt::from(pair.c());
    let a_c = div_flat(a, pair.c(), p, n)? as i128;
    Ok(-BigRational::from_integer(&c * &c) * mazur_coset_moment(p, a, n, pair.N(), k)?
        + BigRational::from_integer(c.pow(k + 1)) * mazur_coset_moment(p, a_c, n, pair.N(), k)?)
}

/// The same moment as a Riemann sum over the sub-cosets of level `fine`.
pub fn kl_coset_moment_riemann(
    ctx: PrimeContext,
    a: i128,
    n: u32,
    pair: &RegularizationPair,
    k: u32,
    fine: u32,
) -> Result<PAdicApprox> {
    if fine < n {
        return Err(Error::InvalidParameter(format!("level {fine} is coarser than {n}")));
    }
    let p = ctx.p();
    let base = flat(a, p, n);
    let step = ipow(p, n);
    let count = ipow(p, fine - n);
    let terms = (0..count)
        .into_par_iter()
        .map(|j| {
            let x = base + j * step;
            let v = mu_kl_period(p, x as i128, fine, pair)?;
            Ok(rational_to_padic(&ctx, &v)? * ctx.element(x as i128).pow(k as u64))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(terms.into_iter().fold(ctx.zero(), |acc, t| acc + t))
}

/// `(c² - c^{k+1})(1 - N^{k+1}) ζ(-k)`, the moment target.
pub fn kl_interpolation_target(pair: &RegularizationPair, k: u32) -> BigRational {
    if k == 0 {
        return BigRational::zero();
    }
    BigRational::from_integer(pair.euler_factor(k)) * zeta_neg(k)
}

/// Riemann moment of `μ_KL` at level `n` against the interpolation target, mod `p^n`.
pub fn verify_kl_interpolation(
    p: u64,
    pair: &RegularizationPair,
    k: u32,
    n: u32,
) -> Result<Report> {
    let ctx = PrimeContext::new(p, n.max(1))?;
    let mu = kl_measure(ctx, *pair, n);
    let lhs = moment_riemann(&mu, k, n)?;
    let rhs = kl_interpolation_target(pair, k);
    let lhs_p = rational_to_padic(&ctx, &lhs)?;
    let rhs_p = rational_to_padic(&ctx, &rhs)?;
    let mut report = Report::new("kl-interpolation")
        .param("p", p)
        .param("c", pair.c())
        .param("N", pair.N())
        .param("k", k)
        .param("n", n);
    report.set_value("lhs", lhs_p);
    report.set_value("rhs", rhs_p);
    report.set_value("rhs_exact", rational_string(&rhs));
    report.expect(lhs_p.congruent(&rhs_p, n), || {
        format!("moment {lhs_p} differs from target {rhs_p}")
    });
    Ok(report)
}

/// `log_p a` for an integer unit.
pub fn log_of_integer(ctx: &PrimeContext, a: i128) -> Result<PAdicApprox> {
    padic_log(&ctx.element(a))
}

/// `Σ_{a unit} w(a) μ_N(a + p^n Z_p)` in `Z/p^M` for a weight given on unit representatives.
#[allow(non_snake_case)]
pub fn mazur_unit_sum(
    ctx: &PrimeContext,
    N: u64,
    n: u32,
    weight: impl Fn(u64) -> Result<PAdicApprox> + Sync,
) -> Result<PAdicApprox> {
    let p = ctx.p();
    let terms = (1..ipow(p, n))
        .into_par_iter()
        .filter(|a| a % p != 0)
        .map(|a| {
            let v = rational_to_padic(ctx, &mu_n_period(p, a as i128, n, N)?)?;
            Ok(weight(a)? * v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(terms.into_iter().fold(ctx.zero(), |acc, t| acc + t))
}

/// `∫_{Z_p^×} x^{-1} dμ_N`, which equals `-(1-1/p) log_p N`.
#[allow(non_snake_case)]
pub fn leopoldt_value(ctx: &PrimeContext, N: u64, n: u32) -> Result<PAdicApprox> {
    mazur_unit_sum(ctx, N, n, |a| ctx.element(a as i128).inv())
}

/// `∫_{Z_p^×} x^{-1} log_p x dμ_N`.
#[allow(non_snake_case)]
pub fn mazur_log_moment(ctx: &PrimeContext, N: u64, n: u32) -> Result<PAdicApprox> {
    mazur_unit_sum(ctx, N, n, |a| {
        Ok(ctx.element(a as i128).inv()? * log_of_integer(ctx, a as i128)?)
    })
}

/// The p-adic Euler constant from the probe `N`, declared to precision `n - 2`.
pub fn gamma_p(p: u64, n_probe: u64, n: u32) -> Result<PAdicApprox> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("gamma_p needs level n >= 3, got {n}")));
    }
    if n_probe < 2 || n_probe.is_multiple_of(p) {
        return Err(Error::InvalidParameter(format!(
            "probe N={n_probe} must exceed 1 and be prime to p"
        )));
    }
    let ctx = PrimeContext::new(p, n + 1)?;
    let w = mazur_log_moment(&ctx, n_probe, n)?.reduce(n);
    let log_n = log_of_integer(&ctx, n_probe as i128)?;
    if log_n.is_zero() {
        return Err(Error::Domain(format!(
            "log_p {n_probe} vanishes to working precision; choose another probe"
        )));
    }
    let scaled = w.mul_p_pow(1) * ctx.ratio(1, p as i128 - 1)?;
    let numer = scaled + log_n * log_n * ctx.ratio(1, 2)?;
    let gamma = numer.div_exact(&log_n)?;
    Ok(gamma.reduce(n - 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair() -> RegularizationPair {
        RegularizationPair::new(2, 3, 5).unwrap()
    }

    #[test]
    fn mazur_examples() {
        assert_eq!(mu_n_period(5, 1, 1, 3).unwrap(), q(0, 1));
        assert_eq!(mu_n_period(5, 2, 1, 3).unwrap(), q(-1, 1));
        assert_eq!(mu_n_period(5, 7, 0, 3).unwrap(), q(1, 1));
    }

    #[test]
    fn kl_examples() {
        let pr = pair();
        assert_eq!(mu_kl_period(5, 1, 1, &pr).unwrap(), q(2, 1));
        assert_eq!(mu_kl_period(5, 0, 1, &pr).unwrap(), q(0, 1));
        assert_eq!(mu_kl_period(5, 3, 0, &pr).unwrap(), q(0, 1));
        let table: Vec<BigRational> = (0..5).map(|a| mu_kl_period(5, a, 1, &pr).unwrap()).collect();
        assert_eq!(table, vec![q(0, 1), q(2, 1), q(4, 1), q(-4, 1), q(-2, 1)]);
    }

    #[test]
    fn pair_validation() {
        assert!(RegularizationPair::new(2, 4, 5).is_err());
        assert!(RegularizationPair::new(5, 3, 5).is_err());
        assert!(RegularizationPair::new(1, 3, 5).is_err());
        assert!(RegularizationPair::new(7, 4, 5).is_ok());
    }

    #[test]
    fn interpolation_targets() {
        let pr = pair();
        assert_eq!(kl_interpolation_target(&pr, 3), q(8, 1));
        assert_eq!(kl_interpolation_target(&pr, 0), q(0, 1));
        assert_eq!(kl_interpolation_target(&pr, 2), q(0, 1));
        assert_eq!(
            kl_interpolation_target(&pr, 5),
            q((4 - 64) * (1 - 729), 1) * q(-1, 252)
        );
    }
}
