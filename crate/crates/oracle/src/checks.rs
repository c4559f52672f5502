//! Numerical certificates for the complex identities, emitted as [`Report`]s.

use bhlab_core::bernoulli::{bernoulli, factorial};
use bhlab_core::eisenstein::{sigma_coeff, signed_divisor_sum, FormSpec};
use bhlab_core::kl::RegularizationPair;
use bhlab_core::padic::inv_mod;
use bhlab_core::report::Report;
use bhlab_core::{PAdicApprox, PrimeContext};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use std::f64::consts::PI;

use crate::error::{OracleError, Result};
use crate::lattice::{lattice_sum_extrapolated, lattice_sum_sk, two_pi_i, Lattice, TruncationPolicy, I};
use crate::theta::{
    lambda, log_lambda, log_lambda_derivative, log_theta_c, log_theta_derivative, log_theta_derivative_parts,
    theta_c_product,
};
use crate::weierstrass::numeric_derivative;

/// One side-by-side comparison; `scale` bounds the error denominator from below.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub label: String,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub scale: f64,
}

impl Comparison {
    pub fn new(label: impl Into<String>, lhs: Complex64, rhs: Complex64, scale: f64) -> Self {
        Comparison { label: label.into(), lhs, rhs, scale }
    }

    pub fn rel_error(&self) -> f64 {
        (self.lhs - self.rhs).norm() / self.rhs.norm().max(self.scale).max(f64::MIN_POSITIVE)
    }

    fn denominator(&self) -> f64 {
        self.rhs.norm().max(self.scale).max(f64::MIN_POSITIVE)
    }
}

pub fn format_complex(z: Complex64) -> String {
    format!("{:.12e}{:+.12e}i", z.re, z.im)
}

fn to_f64(q: &num_rational::BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Evaluate under `policy` and its doubling; fail on tolerance breach or on a drift of 10% of the tolerance.
fn certify(
    mut report: Report,
    tol: f64,
    policy: &TruncationPolicy,
    compute: impl Fn(&TruncationPolicy) -> Result<Vec<Comparison>>,
) -> Result<Report> {
    let coarse = compute(policy)?;
    let fine = compute(&policy.doubled())?;
    report.set_value("tolerance", format!("{tol:e}"));
    let mut worst: Option<&Comparison> = None;
    for (a, b) in coarse.iter().zip(&fine) {
        let err = a.rel_error();
        report.set_value(&format!("lhs[{}]", a.label), format_complex(a.lhs));
        report.set_value(&format!("rhs[{}]", a.label), format_complex(a.rhs));
        report.set_value(&format!("rel_error[{}]", a.label), format!("{err:.3e}"));
        if err.is_nan() || err > tol {
            report.fail(format!("{}: relative error {err:.3e}", a.label));
        }
        let drift = ((a.lhs - b.lhs).norm()).max((a.rhs - b.rhs).norm()) / a.denominator();
        if drift.is_nan() || drift >= 0.1 * tol {
            report.fail(format!("{}: not converged, drift {drift:.3e}", a.label));
        }
        if worst.is_none_or(|w| err > w.rel_error()) {
            worst = Some(a);
        }
    }
    if let Some(w) = worst {
        report.set_value("lhs", format_complex(w.lhs));
        report.set_value("rhs", format_complex(w.rhs));
        report.set_value("rel_error", format!("{:.3e}", w.rel_error()));
        report.set_value("worst", w.label.clone());
    }
    Ok(report)
}

/// `(d/dz)^{k+1} log Λ_{c,N}(0)/k!` against `12(c² - c^{k+1})(1 - N^{k+1}) s_{k+1}(L)`.
pub fn verify_z_interpolation(
    lattice: &Lattice,
    c: u64,
    n: u64,
    k_max: usize,
    tol: f64,
    policy: &TruncationPolicy,
) -> Result<Report> {
    let report = Report::new("z-interp")
        .param("tau", format_complex(lattice.tau()))
        .param("c", c)
        .param("N", n)
        .param("kmax", k_max);
    let zero = Complex64::new(0.0, 0.0);
    certify(report, tol, policy, |pol| {
        let mut rows = Vec::new();
        for k in 0..=k_max {
            let fact = factorial(k as u64).to_f64().unwrap_or(f64::INFINITY);
            let mut lhs = zero;
            let mut parts = 0.0;
            for rho in lattice.torsion(n) {
                let (x, y) = log_theta_derivative_parts(lattice, rho, c, k, pol)?;
                lhs += (x - y) / fact;
                parts += (x.norm() + y.norm()) / fact;
            }
            let factor = ((c * c) as f64 - (c as f64).powi(k as i32 + 1)) * (1.0 - (n as f64).powi(k as i32 + 1));
            let rhs = if factor == 0.0 || k % 2 == 0 {
                zero
            } else {
                lattice_sum_sk(lattice, k as u32 + 1, pol)?.value * (12.0 * factor)
            };
            rows.push((lhs, rhs, parts));
        }
        Ok((0..rows.len())
            .map(|k| {
                let neighbours = rows[k.saturating_sub(2)..(k + 3).min(rows.len())]
                    .iter()
                    .map(|r| r.0.norm())
                    .fold(rows[k].2, f64::max);
                Comparison::new(format!("k={k}"), rows[k].0, rows[k].1, neighbours)
            })
            .collect())
    })
}

fn sample_points(lattice: &Lattice, count: usize) -> Vec<Complex64> {
    let frac = |x: f64| x - x.floor();
    (0..count)
        .map(|j| {
            let x = frac(0.137 + 0.618_033_988_7 * j as f64);
            let y = frac(0.291 + 0.414_213_562_4 * j as f64);
            lattice.w1() * x + lattice.w2() * y
        })
        .collect()
}

/// `Λ_{c,N}(z)·Θ_c(z)/Θ_c(Nz)` is constant in `z`; its `z → 0` limit factor is `N^{12(c²-1)}`.
pub fn verify_lambda_ratio(lattice: &Lattice, c: u64, n: u64, tol: f64, policy: &TruncationPolicy) -> Result<Report> {
    let report = Report::new("lambda-ratio")
        .param("tau", format_complex(lattice.tau()))
        .param("c", c)
        .param("N", n);
    certify(report, tol, policy, |pol| {
        let ratio = |l: &Lattice, z: Complex64| -> Result<Complex64> {
            Ok((log_lambda(l, z, c, n, pol)? + log_theta_c(l, z, c, pol)? - log_theta_c(l, z * n as f64, c, pol)?).exp())
        };
        let points = sample_points(lattice, 20);
        let values: Vec<Complex64> = points.iter().map(|&z| ratio(lattice, z)).collect::<Result<_>>()?;
        let mean = values.iter().sum::<Complex64>() / values.len() as f64;
        let mut out: Vec<Comparison> = values
            .iter()
            .enumerate()
            .map(|(j, v)| Comparison::new(format!("point={j}"), *v, mean, 0.0))
            .collect();
        let z0 = lattice.w2() * Complex64::new(1e-4, 0.7e-4);
        let limit = theta_c_product(lattice, z0 * n as f64, c, pol)? / theta_c_product(lattice, z0, c, pol)?;
        let expected = (n as f64).powi(12 * ((c * c) as i32 - 1));
        out.push(Comparison::new("limit", limit, Complex64::new(expected, 0.0), 0.0));
        let lam = Complex64::new(0.7, 0.4);
        let z = points[3];
        out.push(Comparison::new("scaling", ratio(&lattice.scaled(lam), z * lam)?, values[3], 0.0));
        Ok(out)
    })
}

/// `Ψ⁽ᵏ⁾_{a,n}(ω₁, ω₂)`: the `ζ^{-a l₂}`-weighted torsion average of `(d/dz)^{k+1} log Λ_{c,N}`.
pub fn psi(
    lattice: &Lattice,
    pair: &RegularizationPair,
    p: u64,
    a: i64,
    level: u32,
    k: usize,
    policy: &TruncationPolicy,
) -> Result<(Complex64, f64)> {
    let pn = p.pow(level);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for l1 in 0..pn {
        for l2 in 0..pn {
            let z = (lattice.w1() * l1 as f64 + lattice.w2() * l2 as f64) / pn as f64;
            let d = log_lambda_derivative(lattice, z, pair.c(), pair.N(), k, policy)?;
            let phase = (-2.0 * PI * (a.rem_euclid(pn as i64) as f64) * l2 as f64 / pn as f64) * I;
            let t = d * phase.exp();
            acc += t;
            scale += t.norm();
        }
    }
    let norm = 12.0 * pn as f64;
    Ok((acc / norm, scale / norm))
}

fn sigma_series(
    p: u64,
    a: i64,
    level: u32,
    k: u32,
    pair: &RegularizationPair,
    x: Complex64,
    terms: usize,
) -> Result<Complex64> {
    let spec = FormSpec::new(p, a as i128, level, k, *pair);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut xm = Complex64::new(1.0, 0.0);
    for m in 0..=terms as u64 {
        acc += xm * to_f64(&sigma_coeff(&spec, m)?);
        xm *= x;
    }
    Ok(acc)
}

/// Torsion averages on `Zτ + Z` against `(2πi)^{k+1} Σ σ⁽ᵏ⁾_{a,n}(m) q^{m/pⁿ}`.
#[allow(clippy::too_many_arguments)]
pub fn verify_qexp_identity(
    tau: Complex64,
    p: u64,
    level: u32,
    k: usize,
    qprec: usize,
    pair: &RegularizationPair,
    tol: f64,
    policy: &TruncationPolicy,
) -> Result<Report> {
    if level != 1 {
        return Err(OracleError::Unsupported("torsion averages are certified at level 1 only".into()));
    }
    let lattice = Lattice::from_tau(tau)?;
    let report = Report::new("qexp")
        .param("tau", format_complex(tau))
        .param("p", p)
        .param("n", level)
        .param("k", k)
        .param("c", pair.c())
        .param("N", pair.N())
        .param("qprec", qprec);
    let pn = p.pow(level);
    let qfrac = (two_pi_i() * tau / pn as f64).exp();
    let gamma = lattice.rebased([[2, 5], [1, 3]])?;
    certify(report, tol, policy, |pol| {
        let mut out = Vec::new();
        for a in 0..pn as i64 {
            let (lhs, scale) = psi(&lattice, pair, p, a, level, k, pol)?;
            let rhs = sigma_series(p, a, level, k as u32, pair, qfrac, qprec)? * two_pi_i().powi(k as i32 + 1);
            out.push(Comparison::new(format!("a={a}"), lhs, rhs, scale));
        }
        if p == 5 && level == 1 {
            for a in 0..pn as i64 {
                let (moved, scale) = psi(&gamma, pair, p, a, level, k, pol)?;
                let (relabeled, _) = psi(&lattice, pair, p, 2 * a, level, k, pol)?;
                out.push(Comparison::new(format!("mf2:a={a}"), moved, relabeled, scale));
            }
        }
        let z0 = (lattice.w1() + lattice.w2()) / pn as f64;
        let analytic = log_lambda_derivative(&lattice, z0, pair.c(), pair.N(), k, pol)?;
        let numeric = if k == 0 {
            let f = |z: Complex64| lambda(&lattice, z, pair.c(), pair.N(), pol).unwrap_or(Complex64::new(f64::NAN, 0.0));
            numeric_derivative(f, z0, pol.step).value / f(z0)
        } else {
            let f = |z: Complex64| {
                log_lambda_derivative(&lattice, z, pair.c(), pair.N(), k - 1, pol).unwrap_or(Complex64::new(f64::NAN, 0.0))
            };
            numeric_derivative(f, z0, pol.step).value
        };
        out.push(Comparison::new("difference-quotient", numeric, analytic, 0.0));
        Ok(out)
    })
}

/// The Gaussian CM configuration: `K = Q(i)`, `p = 5`, `ϖ = 2 + i`, `ς = i`, `Ω_∞ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CMSetup {
    pub p: u64,
    pub varpi: Complex64,
    pub varsigma: Complex64,
    /// The integer in `[0, p)` congruent to `-ς` modulo `𝔭`.
    pub s1: u64,
    /// `ϖ̄` in `Z_p` under `i ↦ √-1 ≡ 3 (mod 5)`.
    pub rho: PAdicApprox,
    pub sqrt_minus_one: PAdicApprox,
    pub omega_inf: Complex64,
}

impl CMSetup {
    pub fn gaussian(precision: u32) -> Result<Self> {
        let ctx = PrimeContext::new(5, precision)?;
        let mut x = ctx.element(3);
        for _ in 0..precision + 1 {
            let f = x * x + ctx.one();
            x = x - f * (x.scale(2)).inv()?;
        }
        let i_p = x;
        if !(i_p * i_p + ctx.one()).is_zero() {
            return Err(OracleError::InvalidParameter("square root of -1 did not converge".into()));
        }
        let varpi_p = ctx.element(2) + i_p;
        if !varpi_p.congruent(&ctx.zero(), 1) {
            return Err(OracleError::InvalidParameter("2 + i must lie in the chosen prime".into()));
        }
        let s1 = (-i_p).residue() % 5;
        Ok(CMSetup {
            p: 5,
            varpi: Complex64::new(2.0, 1.0),
            varsigma: I,
            s1,
            rho: ctx.element(2) - i_p,
            sqrt_minus_one: i_p,
            omega_inf: Complex64::new(1.0, 0.0),
        })
    }

    pub fn varpi_bar(&self) -> Complex64 {
        self.varpi.conj()
    }

    /// `Ω_∞(Z + Zς)`.
    pub fn lattice(&self) -> Lattice {
        Lattice::new(self.varsigma * self.omega_inf, self.omega_inf).expect("oriented basis")
    }

    /// `q₁ = e^{2πi(ς + s₁)/p}`.
    pub fn q1(&self) -> Complex64 {
        (two_pi_i() * (self.varsigma + self.s1 as f64) / self.p as f64).exp()
    }

    pub fn rho_inverse_mod_p(&self) -> u64 {
        inv_mod(self.rho.residue() as i128 % self.p as i128, self.p).expect("unit")
    }
}

/// Period of the coset `aϱ^{-1} + pZ_p` from torsion values of `dlog Θ_c`, against `(2πi/ϖ̄) Σ σ_{a,1}(m) q₁^m`.
pub fn verify_cm_period(
    setup: &CMSetup,
    pair: &RegularizationPair,
    labels: &[i64],
    qprec: usize,
    tol: f64,
    policy: &TruncationPolicy,
) -> Result<Report> {
    let p = setup.p;
    let mut report = Report::new("cm-period")
        .param("p", p)
        .param("c", pair.c())
        .param("N", pair.N())
        .param("n", 1)
        .param("labels", labels.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","));
    report.set_value("s1", setup.s1);
    report.set_value("rho", setup.rho.residue());
    let q = (two_pi_i() * setup.varsigma).exp();
    let q1 = setup.q1();
    for j in 0..p as i32 {
        let r = q1.powi(j).norm();
        report.expect(q.norm() < r && r <= 1.0 + 1e-12, || format!("|q1^{j}| = {r:.6} outside (|q|, 1]"));
    }
    let lattice = setup.lattice();
    let rho_inv = setup.rho_inverse_mod_p();
    let n_inv = inv_mod(pair.N() as i128, p).expect("N prime to p");
    let vb = setup.varpi_bar();
    let zeta = |e: i64| (two_pi_i() * (e.rem_euclid(p as i64) as f64) / p as f64).exp();
    certify(report, tol, policy, |pol| {
        labels
            .iter()
            .map(|&a| {
                let b = (a.rem_euclid(p as i64) as u64 * rho_inv) % p;
                let bn = (b * n_inv) % p;
                let mut lhs = Complex64::new(0.0, 0.0);
                let mut scale = 0.0;
                for j in 1..p {
                    let z = vb * setup.omega_inf * ((j * rho_inv) % p) as f64 / p as f64;
                    let g = log_theta_derivative(&lattice, z, pair.c(), 0, pol)?;
                    let w = -zeta(-((b * j) as i64)) + zeta(-((bn * j) as i64)) * pair.N() as f64;
                    let t = w * g / (12.0 * p as f64);
                    lhs += t;
                    scale += t.norm();
                }
                let rhs = sigma_series(p, a, 1, 0, pair, q1, qprec)? * two_pi_i() / (setup.omega_inf * vb);
                Ok(Comparison::new(format!("a={a}"), lhs, rhs, scale))
            })
            .collect()
    })
}

/// `Σ_{λ<p} Ψ⁽ᵏ⁾_{a+λ,1}(ϖ, 1) = ϖ̄^{k+1} Ψ⁽ᵏ⁾_{aϱ^{-1},0}(ϖ, 1)` on `Z[i]`.
pub fn verify_cm_addition(
    setup: &CMSetup,
    pair: &RegularizationPair,
    a: i64,
    k: usize,
    tol: f64,
    policy: &TruncationPolicy,
) -> Result<Report> {
    let p = setup.p;
    let basis = Lattice::new(setup.varpi * setup.omega_inf, setup.omega_inf)?;
    let mut report = Report::new("cm-addition")
        .param("p", p)
        .param("c", pair.c())
        .param("N", pair.N())
        .param("n", 1)
        .param("k", k)
        .param("a", a);
    let spans = basis.contains(setup.varsigma * setup.omega_inf, 1e-12)
        && setup.lattice().contains(basis.w1(), 1e-12);
    report.expect(spans, || "basis does not span the CM lattice".into());
    let b = (a.rem_euclid(p as i64) as u64 * setup.rho_inverse_mod_p()) % p;
    certify(report, tol, policy, |pol| {
        let mut lhs = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for lam in 0..p as i64 {
            let (v, s) = psi(&basis, pair, p, a + lam, 1, k, pol)?;
            lhs += v;
            scale += s;
        }
        let (base, s0) = psi(&basis, pair, p, b as i64, 0, k, pol)?;
        let factor = setup.varpi_bar().powi(k as i32 + 1);
        let rhs = factor * base;
        Ok(vec![Comparison::new(format!("k={k}"), lhs, rhs, scale.max(s0 * factor.norm()))])
    })
}

/// `2ζ(2j)` for `j >= 1`.
fn two_zeta_even(w: u32) -> f64 {
    let b = to_f64(&bernoulli(w as usize)).abs();
    let f = factorial(w as u64).to_f64().unwrap_or(f64::INFINITY);
    (2.0 * PI).powi(w as i32) * b / f
}

/// `Σ'(mτ + n)^{-(k+1)}` against `2ζ(k+1) + (2πi)^{k+1}/k! Σ q^m Σ_{d|m} sgn(d) d^k`.
pub fn verify_gk_poisson(tau: Complex64, k: u32, tol: f64, policy: &TruncationPolicy) -> Result<Report> {
    if k + 1 < 3 {
        return Err(OracleError::Unsupported(format!("weight {} lattice sums converge only conditionally", k + 1)));
    }
    let lattice = Lattice::from_tau(tau)?;
    let report = Report::new("gk-poisson").param("tau", format_complex(tau)).param("k", k);
    let w = k + 1;
    certify(report, tol, policy, |pol| {
        let lhs = lattice_sum_extrapolated(&lattice, w, pol);
        let scale = if w.is_multiple_of(2) { two_zeta_even(w) } else { 2.0 };
        let rhs = if w % 2 == 1 {
            Complex64::new(0.0, 0.0)
        } else {
            let q = lattice.q();
            let terms = pol.terms(q.norm(), 1.0) * 2;
            let mut s = Complex64::new(0.0, 0.0);
            let mut qm = Complex64::new(1.0, 0.0);
            for m in 1..=terms as u64 {
                qm *= q;
                s += qm * signed_divisor_sum(m, k, None).to_f64().unwrap_or(f64::NAN);
            }
            let f = factorial(k as u64).to_f64().unwrap_or(f64::INFINITY);
            s * two_pi_i().powi(w as i32) / f + two_zeta_even(w)
        };
        Ok(vec![Comparison::new(format!("weight={w}"), lhs.value, rhs, scale)])
    })
}
