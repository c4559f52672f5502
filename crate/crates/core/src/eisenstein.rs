//! The Eisenstein families `Φ⁽ᵏ⁾_{a,n}`, `Ψ⁽ᵏ⁾_{a,n}`, `G_k`, and the weight-zero series `G_{0,n}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::bernoulli::{factorial, zeta_neg};
use crate::error::{Error, Result};
use crate::kl::{div_flat, flat, kl_coset_moment, RegularizationPair};
use crate::padic::{ipow, valuation_u64, PAdicApprox, PrimeContext};
use crate::qseries::QSeries;
use crate::report::Report;
use crate::ring::{rational_string, rational_to_padic};

/// Which member of the family: residue `a` mod `p^n`, derivative order `k` (weight `k+1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormSpec {
    pub p: u64,
    pub a: i128,
    pub n: u32,
    pub k: u32,
    pub pair: RegularizationPair,
}

impl FormSpec {
    pub fn new(p: u64, a: i128, n: u32, k: u32, pair: RegularizationPair) -> Self {
        FormSpec { p, a, n, k, pair }
    }
}

/// Positive divisors of `m >= 1`, ascending.
pub fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m.is_multiple_of(d) {
            small.push(d);
            if d * d != m {
                large.push(m / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `Σ sgn(d) d^k` over all divisors `d` of `m`, both signs, with `d ≡ r (mod modulus)` if given.
pub fn signed_divisor_sum(m: u64, k: u32, filter: Option<(u64, u64)>) -> BigInt {
    let mut acc = BigInt::zero();
    let keep = |d: i128| match filter {
        None => true,
        Some((r, modulus)) => d.rem_euclid(modulus as i128) as u64 == r % modulus,
    };
    for d in divisors(m) {
        let dk = BigInt::from(d).pow(k);
        if keep(d as i128) {
            acc += &dk;
        }
        if keep(-(d as i128)) {
            // sgn(-d)(-d)^k = (-1)^{k+1} d^k
            if k.is_multiple_of(2) {
                acc -= &dk;
            } else {
                acc += &dk;
            }
        }
    }
    acc
}

/// `σ⁽ᵏ⁾_{a,n}(m)`: the four filtered divisor sums for `m >= 1`, the coset moment of `μ_KL` for `m = 0`.
pub fn sigma_coeff(spec: &FormSpec, m: u64) -> Result<BigRational> {
    let FormSpec { p, a, n, k, pair } = *spec;
    if m == 0 {
        return kl_coset_moment(p, a, n, &pair, k);
    }
    let modulus = ipow(p, n);
    let filt = |r: u64| if n == 0 { None } else { Some((r, modulus)) };
    let c = BigInt::from(pair.c());
    let nn = BigInt::from(pair.N());
    let s_a = signed_divisor_sum(m, k, filt(flat(a, p, n)));
    let s_n = signed_divisor_sum(m, k, filt(div_flat(a, pair.N(), p, n)?));
    let s_c = signed_divisor_sum(m, k, filt(div_flat(a, pair.c(), p, n)?));
    let s_cn = signed_divisor_sum(m, k, filt(div_flat(a, pair.c() * pair.N(), p, n)?));
    let c2 = &c * &c;
    let v = &c2 * s_a - &c2 * nn.pow(k + 1) * s_n - c.pow(k + 1) * s_c
        + (&c * &nn).pow(k + 1) * s_cn;
    Ok(BigRational::from_integer(v))
}

/// `Φ⁽ᵏ⁾_{a,n}(q) = Σ σ⁽ᵏ⁾_{a,n}(m) q^m`.
pub fn phi_series(spec: &FormSpec, order: usize) -> Result<QSeries<BigRational>> {
    let coeffs = (0..=order as u64)
        .into_par_iter()
        .map(|m| sigma_coeff(spec, m))
        .collect::<Result<Vec<_>>>()?;
    QSeries::new(coeffs, 1)
}

/// `Ψ⁽ᵏ⁾_{a,n}`: the coefficients of `Φ` on exponents `m/p^n`.
pub fn psi_series(spec: &FormSpec, order: usize) -> Result<QSeries<BigRational>> {
    Ok(phi_series(spec, order)?.with_denom(ipow(spec.p, spec.n)))
}

/// `G_k` in the normalization where `(k-1)! G_k = ζ(1-k)·1_{k>1} + Σ q^m Σ_{d|m} sgn(d) d^{k-1}`.
pub fn eisenstein_g(k: u32, order: usize) -> Result<QSeries<BigRational>> {
    if k == 0 {
        return Err(Error::InvalidParameter("G_k needs k >= 1".into()));
    }
    let fact = BigRational::from_integer(factorial(k as u64 - 1));
    let coeffs: Vec<BigRational> = (0..=order as u64)
        .into_par_iter()
        .map(|m| {
            let raw = if m == 0 {
                if k > 1 {
                    zeta_neg(k - 1)
                } else {
                    BigRational::zero()
                }
            } else {
                BigRational::from_integer(signed_divisor_sum(m, k - 1, None))
            };
            raw / &fact
        })
        .collect();
    QSeries::new(coeffs, 1)
}

fn require_integral_exponents<R>(f: &QSeries<R>) -> Result<()>
where
    R: crate::ring::CoeffRing,
{
    if f.denom() != 1 {
        return Err(Error::Domain(format!(
            "series has fractional exponents (denominator {})",
            f.denom()
        )));
    }
    Ok(())
}

/// `f(q) - p^{k-1} f(q^p)` for a form of weight `k`.
pub fn p_stabilize(f: &QSeries<BigRational>, k: u32, p: u64) -> Result<QSeries<BigRational>> {
    require_integral_exponents(f)?;
    if k == 0 {
        return Err(Error::InvalidParameter("stabilization needs weight >= 1".into()));
    }
    let pk = BigInt::from(p).pow(k - 1);
    Ok(f.minus(&f.substitute_power(p).scale_int(&pk)))
}

/// `f(q^p)`.
pub fn dagger<R: crate::ring::CoeffRing>(f: &QSeries<R>, p: u64) -> Result<QSeries<R>> {
    require_integral_exponents(f)?;
    Ok(f.substitute_power(p))
}

/// `∏_{m>=1} (1 - q^{m·step})^{e}` mod `p^M`, through `order`.
fn eta_product(ctx: &PrimeContext, e: u64, step: usize, order: usize) -> Vec<u64> {
    let modulus = ctx.modulus();
    let mut f = vec![0u64; order + 1];
    f[0] = 1 % modulus;
    let mut j = step;
    while j <= order {
        for _ in 0..e {
            for i in (j..=order).rev() {
                f[i] = (f[i] + modulus - f[i - j]) % modulus;
            }
        }
        j += step;
    }
    f
}

/// Divide by `∏ (1 - q^{m·step})^{e}` mod `p^M`.
fn divide_eta_product(ctx: &PrimeContext, f: &mut [u64], e: u64, step: usize) {
    let modulus = ctx.modulus();
    let order = f.len() - 1;
    let mut j = step;
    while j <= order {
        for _ in 0..e {
            for i in j..=order {
                f[i] = (f[i] + f[i - j]) % modulus;
            }
        }
        j += step;
    }
}

/// `Δ(q) = q ∏ (1 - q^m)^{24}` with exact integer coefficients.
pub fn delta_series(order: usize) -> QSeries<BigRational> {
    let mut f = vec![BigInt::zero(); order + 1];
    if order >= 1 {
        f[1] = BigInt::one();
    }
    for j in 1..=order {
        for _ in 0..24 {
            for i in (j..=order).rev() {
                let sub = f[i - j].clone();
                f[i] -= sub;
            }
        }
    }
    QSeries::new(f.into_iter().map(BigRational::from_integer).collect(), 1).expect("nonempty")
}

/// `Δ⁽ᵖ⁾ = Δ(q)^p / Δ(q^p) = ∏(1-q^m)^{24p} / ∏(1-q^{mp})^{24}` mod `p^M`.
pub fn delta_p_series(ctx: &PrimeContext, order: usize) -> Result<QSeries<PAdicApprox>> {
    if ctx.precision() < 2 {
        return Err(Error::InvalidParameter("Δ⁽ᵖ⁾ needs M >= 2".into()));
    }
    let p = ctx.p();
    let mut f = eta_product(ctx, 24 * p, 1, order);
    divide_eta_product(ctx, &mut f, 24, p as usize);
    QSeries::new(f.into_iter().map(|c| ctx.element(c as i128)).collect(), 1)
}

/// `G_{0,n}` from `Σ_{d|m, p∤d} sgn(d)/d`, mod `p^{M-1}`.
pub fn g0n_divisor_series(ctx: &PrimeContext, order: usize) -> Result<QSeries<PAdicApprox>> {
    let p = ctx.p();
    let out = ctx.with_precision(ctx.precision() - 1)?;
    let coeffs = (0..=order as u64)
        .map(|m| {
            if m == 0 {
                return Ok(out.zero());
            }
            let mut acc = BigRational::zero();
            for d in divisors(m).into_iter().filter(|d| d % p != 0) {
                acc += BigRational::new(BigInt::from(2), BigInt::from(d));
            }
            rational_to_padic(&out, &acc)
        })
        .collect::<Result<Vec<_>>>()?;
    QSeries::new(coeffs, 1)
}

/// `G_{0,n}` as `-(1/12)·(1/p) log Δ⁽ᵖ⁾`, mod `p^{M-1}`.
pub fn g0n_log_series(ctx: &PrimeContext, order: usize) -> Result<QSeries<PAdicApprox>> {
    let p = ctx.p();
    let out = ctx.with_precision(ctx.precision() - 1)?;
    let dp = delta_p_series(ctx, order)?;
    let one = QSeries::constant(ctx.one(), order);
    let y = dp.minus(&one).map(|c| {
        let v = c.div_p_pow(1)?;
        Ok(out.element(v.residue() as i128))
    })?;
    let mut acc = QSeries::constant(out.zero(), order);
    let mut ypow = QSeries::constant(out.one(), order);
    let limit = out.precision();
    for j in 1..=order as u64 {
        ypow = ypow.times(&y);
        let vj = valuation_u64(j, p);
        let e = (j - 1) as i64 - vj as i64;
        if e < 0 || e as u32 >= limit {
            continue;
        }
        let unit = j / ipow(p, vj);
        let factor = out.element(ipow(p, e as u32) as i128) * out.ratio(1, unit as i128)?;
        let term = ypow.scale(&factor);
        acc = if j % 2 == 1 { acc.plus(&term) } else { acc.minus(&term) };
    }
    let minus_twelfth = -out.ratio(1, 12)?;
    Ok(acc.scale(&minus_twelfth))
}

/// `G_{0,n}`; both constructions are computed and must agree.
pub fn g0n_series(ctx: &PrimeContext, n: u32, order: usize) -> Result<QSeries<PAdicApprox>> {
    if n == 0 {
        return Err(Error::InvalidParameter("G_{0,n} needs n >= 1".into()));
    }
    if ctx.precision() < 2 {
        return Err(Error::InvalidParameter("G_{0,n} needs M >= 2".into()));
    }
    let by_divisors = g0n_divisor_series(ctx, order)?;
    let by_log = g0n_log_series(ctx, order)?;
    if let Some(m) = by_divisors.first_mismatch(&by_log, |a, b| a == b) {
        return Err(Error::Consistency(format!(
            "G_0 divisor and logarithm constructions differ at q^{m}: {} vs {}",
            by_divisors.coefficients()[m],
            by_log.coefficients()[m]
        )));
    }
    Ok(by_divisors)
}

/// `A_n(q) = 1` over `Z/p^n`.
pub fn hasse_an(p: u64, n: u32, order: usize) -> Result<QSeries<PAdicApprox>> {
    let ctx = PrimeContext::new(p, n)?;
    Ok(QSeries::constant(ctx.one(), order))
}

fn spec_report(name: &str, p: u64, pair: &RegularizationPair) -> Report {
    Report::new(name)
        .param("p", p)
        .param("c", pair.c())
        .param("N", pair.N())
}

/// `a^k Φ_{a,n}(q) ≡ Φ⁽ᵏ⁾_{a,n}(q) mod p^n` for every residue `a`.
pub fn check_weight_congruence(
    p: u64,
    pair: &RegularizationPair,
    n: u32,
    k: u32,
    order: usize,
) -> Result<Report> {
    let mut report = spec_report("weight-congruence", p, pair)
        .param("n", n)
        .param("k", k)
        .param("qprec", order);
    if n == 0 {
        report.set_value("note", "vacuous modulo 1");
        return Ok(report);
    }
    let ctx = PrimeContext::new(p, n)?;
    let failures: Vec<String> = (0..ipow(p, n) as i128)
        .into_par_iter()
        .map(|a| -> Result<Vec<String>> {
            let base = phi_series(&FormSpec::new(p, a, n, 0, *pair), order)?.to_padic(&ctx)?;
            let twisted = phi_series(&FormSpec::new(p, a, n, k, *pair), order)?.to_padic(&ctx)?;
            let ak = ctx.element(a).pow(k as u64);
            Ok(base
                .scale(&ak)
                .congruence_failure(&twisted, n)
                .map(|m| vec![format!("a={a} m={m}")])
                .unwrap_or_default())
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    for f in failures {
        report.fail(f);
    }
    Ok(report)
}

/// `Σ_{b<p} σ⁽ᵏ⁾_{a+bp^t, t+1}(m) = σ⁽ᵏ⁾_{a,t}(m)` exactly.
pub fn check_distribution(
    p: u64,
    pair: &RegularizationPair,
    t: u32,
    k: u32,
    order: usize,
) -> Result<Report> {
    let mut report = spec_report("distribution", p, pair)
        .param("t", t)
        .param("k", k)
        .param("qprec", order);
    let pt = ipow(p, t) as i128;
    for a in 0..pt {
        let coarse = phi_series(&FormSpec::new(p, a, t, k, *pair), order)?;
        let mut fine = QSeries::constant(BigRational::zero(), order);
        for b in 0..p as i128 {
            fine = fine.plus(&phi_series(&FormSpec::new(p, a + b * pt, t + 1, k, *pair), order)?);
        }
        if let Some(m) = coarse.first_mismatch(&fine, |x, y| x == y) {
            report.fail(format!("a={a} m={m}"));
        }
    }
    Ok(report)
}

/// `Ψ⁽ᵏ⁾_{0,0} = (c² - c^{k+1})(1 - N^{k+1}) k! G_{k+1}` exactly.
pub fn check_full_coset(p: u64, pair: &RegularizationPair, k: u32, order: usize) -> Result<Report> {
    let mut report = spec_report("full-coset", p, pair).param("k", k).param("qprec", order);
    let lhs = psi_series(&FormSpec::new(p, 0, 0, k, *pair), order)?;
    let scale = pair.euler_factor(k) * factorial(k as u64);
    let rhs = eisenstein_g(k + 1, order)?.scale_int(&scale);
    report.set_value("constant", rational_string(&lhs.coefficients()[0]));
    if let Some(m) = lhs.first_mismatch(&rhs, |x, y| x == y) {
        report.fail(format!(
            "m={m}: {} vs {}",
            rational_string(&lhs.coefficients()[m]),
            rational_string(&rhs.coefficients()[m])
        ));
    }
    Ok(report)
}

/// `Φ⁽ᵏ⁾_{0,1}(q) = p^k Φ⁽ᵏ⁾_{0,0}(q^p)` exactly.
pub fn check_level_raising(
    p: u64,
    pair: &RegularizationPair,
    k: u32,
    order: usize,
) -> Result<Report> {
    let mut report = spec_report("level-raising", p, pair).param("k", k).param("qprec", order);
    let lhs = phi_series(&FormSpec::new(p, 0, 1, k, *pair), order)?;
    let base = phi_series(&FormSpec::new(p, 0, 0, k, *pair), order)?;
    let rhs = dagger(&base, p)?.scale_int(&BigInt::from(p).pow(k));
    if let Some(m) = lhs.first_mismatch(&rhs, |x, y| x == y) {
        report.fail(format!("m={m}"));
    }
    Ok(report)
}

/// `Φ_{pa,n+1}(q) = Φ_{a,n}(q^p)` exactly, for every `a` mod `p^n`.
pub fn check_rescaling(p: u64, pair: &RegularizationPair, n: u32, order: usize) -> Result<Report> {
    let mut report = spec_report("rescaling", p, pair).param("n", n).param("qprec", order);
    for a in 0..ipow(p, n) as i128 {
        let lhs = phi_series(&FormSpec::new(p, p as i128 * a, n + 1, 0, *pair), order)?;
        let rhs = dagger(&phi_series(&FormSpec::new(p, a, n, 0, *pair), order)?, p)?;
        if let Some(m) = lhs.first_mismatch(&rhs, |x, y| x == y) {
            report.fail(format!("a={a} m={m}"));
        }
    }
    Ok(report)
}
