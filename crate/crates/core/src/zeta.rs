//! The Tate-cusp Bernoulli–Hurwitz measure, its zeta function, and the congruence suites.

use std::sync::Arc;

use num_rational::BigRational;

use crate::bernoulli::factorial;
use crate::eisenstein::{eisenstein_g, g0n_series, p_stabilize, phi_series, FormSpec};
use crate::error::{Error, Result};
use crate::kl::{gamma_p, log_of_integer, RegularizationPair};
use crate::measure::{restrict_to_units, weighted_integral, FiniteLevelMeasure, Rule};
use crate::padic::{decompose_unit, ipow, principal_power, PAdicApprox, PrimeContext};
use crate::qseries::QSeries;
use crate::report::Report;

/// `μ_BH(a + p^n Z_p) = Φ_{a,n}(q)`, reduced into `Z/p^M`.
pub fn tate_bh_measure(
    ctx: PrimeContext,
    pair: RegularizationPair,
    order: usize,
    level: u32,
) -> FiniteLevelMeasure<QSeries<PAdicApprox>> {
    let p = ctx.p();
    let rule: Rule<QSeries<PAdicApprox>> = Arc::new(move |a, n| {
        phi_series(&FormSpec::new(p, a as i128, n, 0, pair), order)
            .and_then(|s| s.to_padic(&ctx))
            .expect("Eisenstein coefficients are p-integral")
    });
    FiniteLevelMeasure::from_rule(ctx, "bernoulli-hurwitz", level, rule)
}

/// `Σ_{a unit mod p^n} w(a) Φ_{a,n}(q)`.
pub fn unit_weighted_sum(
    ctx: PrimeContext,
    pair: RegularizationPair,
    n: u32,
    order: usize,
    weight: impl Fn(u64) -> Result<PAdicApprox> + Sync,
) -> Result<QSeries<PAdicApprox>> {
    let mu = tate_bh_measure(ctx, pair, order, n);
    let p = ctx.p();
    let weights: Vec<Option<PAdicApprox>> = (0..ipow(p, n))
        .map(|a| if a % p == 0 { Ok(None) } else { weight(a).map(Some) })
        .collect::<Result<_>>()?;
    let units = restrict_to_units(&mu)?;
    Ok(weighted_integral(
        &units,
        |a| weights[a as usize].map(|w| QSeries::constant(w, order)),
        n,
        0,
    )?
    .value)
}

fn working_ctx(p: u64, n: u32) -> Result<PrimeContext> {
    PrimeContext::new(p, n + 2)
}

fn base_report(name: &str, p: u64, pair: &RegularizationPair, n: u32, order: usize) -> Report {
    Report::new(name)
        .param("p", p)
        .param("c", pair.c())
        .param("N", pair.N())
        .param("n", n)
        .param("qprec", order)
}

fn compare(report: &mut Report, label: &str, lhs: &QSeries<PAdicApprox>, rhs: &QSeries<PAdicApprox>, k: u32) {
    if let Some(m) = lhs.congruence_failure(rhs, k) {
        report.fail(format!(
            "{label}: q^{m} coefficient {} vs {} mod p^{k}",
            lhs.coefficients()[m],
            rhs.coefficients()[m]
        ));
    }
}

/// `k! G*_{k+1}(q)` scaled by `(c² - c^{k+1})(1 - N^{k+1})`, exact.
pub fn interpolation_target(
    p: u64,
    pair: &RegularizationPair,
    k: u32,
    order: usize,
) -> Result<QSeries<BigRational>> {
    let g = eisenstein_g(k + 1, order)?;
    let gs = p_stabilize(&g, k + 1, p)?;
    Ok(gs.scale_int(&(pair.euler_factor(k) * factorial(k as u64))))
}

/// `Σ_{a unit} a^k Φ_{a,n}(q) ≡ (c²-c^{k+1})(1-N^{k+1}) k! G*_{k+1}(q) mod p^n`, `k ≠ 1`.
pub fn zeta_interpolation_check(
    p: u64,
    pair: &RegularizationPair,
    k: u32,
    n: u32,
    order: usize,
) -> Result<Report> {
    if k == 1 {
        return Err(Error::InvalidParameter(
            "k = 1 is the exceptional branch; use the exceptional check".into(),
        ));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("interpolation check needs n >= 1".into()));
    }
    let ctx = working_ctx(p, n)?;
    let mut report = base_report("interpolation", p, pair, n, order).param("k", k);
    let lhs = unit_weighted_sum(ctx, *pair, n, order, |a| Ok(ctx.element(a as i128).pow(k as u64)))?;
    let rhs = interpolation_target(p, pair, k, order)?.to_padic(&ctx)?;
    report.set_value("lhs_constant", lhs.coefficients()[0].reduce(n));
    report.set_value("rhs_constant", rhs.coefficients()[0].reduce(n));
    compare(&mut report, "series", &lhs, &rhs, n);
    Ok(report)
}

/// `Σ a log_p(a) Φ_{a,n} ≡ -c² log_p(c)(1-N²) G*_2 mod p^{n-1}`, plus `Σ a Φ_{a,n} ≡ 0 mod p^n`.
pub fn zeta_exceptional_check(
    p: u64,
    pair: &RegularizationPair,
    n: u32,
    order: usize,
) -> Result<Report> {
    if n < 2 {
        return Err(Error::InvalidParameter("exceptional check needs n >= 2".into()));
    }
    let ctx = working_ctx(p, n)?;
    let mut report = base_report("exceptional", p, pair, n, order);
    let linear = unit_weighted_sum(ctx, *pair, n, order, |a| Ok(ctx.element(a as i128)))?;
    let zero = QSeries::constant(ctx.zero(), order);
    compare(&mut report, "regularity", &linear, &zero, n);
    let lhs = unit_weighted_sum(ctx, *pair, n, order, |a| {
        Ok(ctx.element(a as i128) * log_of_integer(&ctx, a as i128)?)
    })?;
    let g2s = p_stabilize(&eisenstein_g(2, order)?, 2, p)?.to_padic(&ctx)?;
    let c = pair.c() as i128;
    let nn = pair.N() as i128;
    let factor = -(ctx.element(c * c) * log_of_integer(&ctx, c)? * ctx.element(1 - nn * nn));
    let rhs = g2s.scale(&factor);
    report.set_value("lhs_constant", lhs.coefficients()[0].reduce(n - 1));
    report.set_value("rhs_constant", rhs.coefficients()[0].reduce(n - 1));
    compare(&mut report, "log-weighted", &lhs, &rhs, n - 1);
    Ok(report)
}

/// `Σ a^{-1} Φ_{a,n}(q)` is the constant `(c²-1)(1-1/p) log_p N` mod `p^n`.
pub fn residue_check(p: u64, pair: &RegularizationPair, n: u32, order: usize) -> Result<Report> {
    if n == 0 {
        return Err(Error::InvalidParameter("residue check needs n >= 1".into()));
    }
    let ctx = working_ctx(p, n)?;
    let mut report = base_report("residue", p, pair, n, order);
    let lhs = unit_weighted_sum(ctx, *pair, n, order, |a| ctx.element(a as i128).inv())?;
    let log_n = log_of_integer(&ctx, pair.N() as i128)?;
    let c = pair.c() as i128;
    let constant = ctx.element(c * c - 1) * ctx.element(p as i128 - 1) * log_n.div_p_pow(1)?;
    let rhs = QSeries::constant(constant, order);
    report.set_value("constant", lhs.coefficients()[0].reduce(n));
    report.set_value("expected", constant.reduce(n));
    compare(&mut report, "series", &lhs, &rhs, n);
    Ok(report)
}

/// The constant `C` of the limit formula, from `γ_p` with the pair's own `N` as probe.
fn limit_constant(ctx: &PrimeContext, pair: &RegularizationPair, gamma: &PAdicApprox) -> Result<PAdicApprox> {
    let p = ctx.p() as i128;
    let c = pair.c() as i128;
    let log_n = log_of_integer(ctx, pair.N() as i128)?;
    let log_c = log_of_integer(ctx, c)?;
    // (1 - 1/p) log_p N = (p-1) (log_p N)/p
    let weighted_log = ctx.element(p - 1) * log_n.div_p_pow(1)?;
    let one_minus_c2 = ctx.element(1 - c * c);
    let half = ctx.ratio(1, 2)?;
    Ok(one_minus_c2 * weighted_log * *gamma
        - weighted_log * (one_minus_c2 * log_n * half + log_c))
}

/// `Σ a^{-1} log_p(a) Φ_{a,n} ≡ C + (1-c²) log_p(N) G_{0,n}(q) mod p^{n-1}`.
pub fn limit_formula_check(
    p: u64,
    pair: &RegularizationPair,
    n: u32,
    order: usize,
) -> Result<Report> {
    if n < 2 {
        return Err(Error::InvalidParameter("limit formula check needs n >= 2".into()));
    }
    let ctx = working_ctx(p, n)?;
    let mut report = base_report("limit", p, pair, n, order);
    let lhs = unit_weighted_sum(ctx, *pair, n, order, |a| {
        Ok(ctx.element(a as i128).inv()? * log_of_integer(&ctx, a as i128)?)
    })?;
    let gamma = gamma_p(p, pair.N(), n + 2)?;
    let gamma_ctx = ctx.element(gamma.residue() as i128).reduce(gamma.precision());
    let constant = limit_constant(&ctx, pair, &gamma_ctx)?;
    let g0 = g0n_series(&ctx, n, order)?;
    let log_n = log_of_integer(&ctx, pair.N() as i128)?;
    let c = pair.c() as i128;
    let slope = ctx.element(1 - c * c) * log_n;
    let rhs = g0.scale(&slope).plus(&QSeries::constant(constant, order));
    report.set_value("gamma_p", gamma);
    report.set_value("lhs_constant", lhs.coefficients()[0].reduce(n - 1));
    report.set_value("rhs_constant", rhs.coefficients()[0].reduce(n - 1));
    compare(&mut report, "series", &lhs, &rhs, n - 1);
    if n >= 3 {
        let alt = gamma_p(p, if pair.N() == 7 { 3 } else { 7 }, n)?;
        let same = gamma.congruent(&alt, n - 2);
        report.expect(same, || format!("gamma_p probes disagree: {gamma} vs {alt}"));
    }
    Ok(report)
}

/// Two Laurent coefficients at the pole, both multiplied by `p^scale_exponent`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentData {
    pub scale_exponent: u32,
    pub residue: PAdicApprox,
    pub constant: QSeries<PAdicApprox>,
}

/// `ζ_p^BH(s, ω^i)` at the Tate cusp.
#[derive(Clone, Debug, PartialEq)]
pub struct ZetaValue {
    pub pole_order: u8,
    /// The value is `p^{-scale_exponent}` times `value`.
    pub scale_exponent: u32,
    pub value: Option<QSeries<PAdicApprox>>,
    pub laurent: Option<LaurentData>,
}

impl ZetaValue {
    fn finite(value: QSeries<PAdicApprox>, scale_exponent: u32) -> Self {
        ZetaValue { pole_order: 0, scale_exponent, value: Some(value), laurent: None }
    }

    /// First coefficient disagreeing with an exact series, at each coefficient's precision.
    pub fn mismatch_with(&self, target: &QSeries<BigRational>) -> Result<Option<usize>> {
        let value = self
            .value
            .as_ref()
            .ok_or_else(|| Error::Domain("value has a pole".into()))?;
        let ctx = value.coefficients()[0].ctx();
        let scaled = target.scale_int(&num_bigint::BigInt::from(ctx.p()).pow(self.scale_exponent));
        let t = scaled.to_padic(&ctx)?;
        Ok(value.first_mismatch(&t, |a, b| a.congruent(b, a.precision())))
    }
}

/// `num / denom` where `denom = p^v·unit`; returns the series times `p^scale` and `scale <= v`.
fn divide_series(num: &QSeries<PAdicApprox>, denom: &PAdicApprox, what: &str) -> Result<(QSeries<PAdicApprox>, u32)> {
    let v = denom.valuation();
    if v >= denom.precision() {
        return Err(Error::VanishingFactor(format!(
            "{what} vanishes to working precision {}",
            denom.precision()
        )));
    }
    let unit_inv = denom.div_p_pow(v)?.inv()?;
    let stored = num.scale(&unit_inv);
    let common = stored
        .coefficients()
        .iter()
        .map(|c| c.valuation())
        .min()
        .unwrap_or(0)
        .min(v);
    Ok((stored.map(|c| c.div_p_pow(common))?, v - common))
}

fn is_integer(s: &PAdicApprox, k: i128) -> bool {
    *s == s.ctx().element(k).reduce(s.precision())
}

/// `ω^j(x)⟨x⟩^{e}` for a unit `x`.
fn character_power(x: &PAdicApprox, j: u64, e: &PAdicApprox) -> Result<PAdicApprox> {
    let dec = decompose_unit(x)?;
    Ok(dec.teichmuller.pow(j) * principal_power(&dec.principal, e)?)
}

/// Evaluate `ζ_p^BH(s, ω^i)` from Riemann sums at level `n`.
pub fn zeta_eval(
    pair: &RegularizationPair,
    s: &PAdicApprox,
    i: u64,
    n: u32,
    order: usize,
) -> Result<ZetaValue> {
    let ctx = s.ctx();
    let p = ctx.p();
    if n == 0 || n > ctx.precision() {
        return Err(Error::InvalidParameter(format!(
            "level n={n} must lie in 1..=M={}",
            ctx.precision()
        )));
    }
    let i = i % (p - 1);
    let one = ctx.one();
    let c = pair.c() as i128;
    let nn = pair.N() as i128;
    if i == 0 && is_integer(s, 1) {
        return zeta_pole(ctx, pair, n, order);
    }
    if i == 2 % (p - 1) && is_integer(s, -1) {
        let lhs = unit_weighted_sum(ctx, *pair, n, order, |a| {
            Ok(ctx.element(a as i128) * log_of_integer(&ctx, a as i128)?)
        })?;
        let denom = ctx.element(c * c) * log_of_integer(&ctx, c)? * ctx.element(1 - nn * nn);
        let num = lhs.map(|x| Ok(-x.reduce(n - 1)))?;
        let (value, scale) = divide_series(&num, &denom, "c² log_p(c)(1 - N²)")?;
        return Ok(ZetaValue::finite(value, scale));
    }
    let exponent = (i + p - 2) % (p - 1);
    let minus_s = -*s;
    let integral = unit_weighted_sum(ctx, *pair, n, order, |a| {
        character_power(&ctx.element(a as i128), exponent, &minus_s)
    })?;
    let one_minus_s = one - *s;
    let p_c = ctx.element(c * c) - character_power(&ctx.element(c), i, &one_minus_s)?;
    let p_n = one - character_power(&ctx.element(nn), i, &one_minus_s)?;
    for (name, f) in [("c² - ω^i(c)⟨c⟩^{1-s}", p_c), ("1 - ω^i(N)⟨N⟩^{1-s}", p_n)] {
        if f.is_zero() {
            return Err(Error::VanishingFactor(format!(
                "{name} vanishes to working precision {}",
                f.precision()
            )));
        }
    }
    let num = integral.map(|x| Ok(x.reduce(n)))?;
    let (value, scale) = divide_series(&num, &(p_c * p_n), "the Euler-type prefactor")?;
    Ok(ZetaValue::finite(value, scale))
}

fn zeta_pole(ctx: PrimeContext, pair: &RegularizationPair, n: u32, order: usize) -> Result<ZetaValue> {
    let p = ctx.p() as i128;
    let c = pair.c() as i128;
    let log_n = log_of_integer(&ctx, pair.N() as i128)?;
    let log_c = log_of_integer(&ctx, c)?;
    let e = log_n.valuation();
    if e == 0 || e >= log_n.precision() {
        return Err(Error::VanishingFactor("log_p N vanishes to working precision".into()));
    }
    let log_unit = log_n.div_p_pow(e)?;
    let c2m1 = ctx.element(c * c - 1);
    let a0 = unit_weighted_sum(ctx, *pair, n, order, |a| ctx.element(a as i128).inv())?;
    let a1 = unit_weighted_sum(ctx, *pair, n, order, |a| {
        Ok(-(ctx.element(a as i128).inv()? * log_of_integer(&ctx, a as i128)?))
    })?;
    let scale = c2m1 * log_unit;
    let residue = a0.coefficients()[0].reduce(n).div_exact(&scale)?;
    // p^e (1 - 1/p)(L/2 - log c/(c²-1)) = p^{e-1}(p-1)(L/2 - log c/(c²-1))
    let shift = (ctx.element(log_n.residue() as i128) * ctx.ratio(1, 2)? - log_c * c2m1.inv()?)
        * ctx.element(p - 1);
    let shift = shift.mul_p_pow(e - 1);
    let constant = a1
        .map(|x| x.reduce(n - 1).div_exact(&scale))?
        .plus(&QSeries::constant(shift, order));
    Ok(ZetaValue {
        pole_order: 1,
        scale_exponent: e,
        value: None,
        laurent: Some(LaurentData { scale_exponent: e, residue, constant }),
    })
}

/// The interpolation target as a value of `ζ_p^BH(-k, ω^{k+1})`, i.e. `k! G*_{k+1}(q)`.
pub fn zeta_interpolated_value(p: u64, k: u32, order: usize) -> Result<QSeries<BigRational>> {
    let g = eisenstein_g(k + 1, order)?;
    Ok(p_stabilize(&g, k + 1, p)?.scale_int(&factorial(k as u64)))
}

/// Laurent data expected at `s = 1`: `p^e(1-1/p)` and `p^e[(1-1/p)γ_p + G_{0,n}]`.
pub fn expected_pole_data(
    ctx: &PrimeContext,
    pair: &RegularizationPair,
    n: u32,
    order: usize,
) -> Result<LaurentData> {
    let p = ctx.p();
    let log_n = log_of_integer(ctx, pair.N() as i128)?;
    let e = log_n.valuation();
    let gamma = gamma_p(p, pair.N(), n + 2)?;
    let gamma = ctx.element(gamma.residue() as i128).reduce(gamma.precision());
    let residue = ctx.element(p as i128 - 1).mul_p_pow(e - 1);
    let g0 = g0n_series(ctx, n, order)?;
    let constant = g0
        .scale(&ctx.element(ipow(p, e) as i128))
        .plus(&QSeries::constant(gamma * residue, order));
    Ok(LaurentData { scale_exponent: e, residue, constant })
}

/// Integer `s` as a p-adic scalar.
pub fn integer_s(ctx: &PrimeContext, s: i64) -> PAdicApprox {
    ctx.element(s as i128)
}
