//! Weierstrass functions through `q`-expansions on `Zτ + Z`, rescaled to arbitrary lattices.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{OracleError, Result};
use crate::lattice::{richardson, two_pi_i, Estimate, Lattice, TruncationPolicy};

const MAX_EULERIAN: usize = 32;

fn eulerian_rows() -> &'static Vec<Vec<f64>> {
    static ROWS: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    ROWS.get_or_init(|| {
        let mut rows = vec![vec![1.0]];
        for m in 1..=MAX_EULERIAN {
            let prev: &Vec<f64> = &rows[m - 1];
            let row = (0..m.max(1))
                .map(|k| {
                    let a = prev.get(k).copied().unwrap_or(0.0);
                    let b = if k > 0 { prev.get(k - 1).copied().unwrap_or(0.0) } else { 0.0 };
                    (k + 1) as f64 * a + (m - k) as f64 * b
                })
                .collect();
            rows.push(row);
        }
        rows
    })
}

/// `Li_{-m}(x) = Σ_{j>=1} j^m x^j`, continued as the rational function `x A_m(x)/(1-x)^{m+1}`.
pub fn polylog_neg(m: usize, x: Complex64) -> Complex64 {
    assert!(m <= MAX_EULERIAN, "order {m} exceeds the Eulerian table");
    let one = Complex64::new(1.0, 0.0);
    if m == 0 {
        return x / (one - x);
    }
    let row = &eulerian_rows()[m];
    let mut poly = Complex64::new(0.0, 0.0);
    for c in row.iter().rev() {
        poly = poly * x + c;
    }
    x * poly / (one - x).powi(m as i32 + 1)
}

/// `z = w + mτ + n` with `w` in the centred fundamental parallelogram.
fn reduce(tau: Complex64, z: Complex64) -> (Complex64, f64, f64) {
    let m = (z.im / tau.im).round();
    let w = z - tau * m;
    let n = w.re.round();
    (w - n, m, n)
}

fn near_lattice(tau: Complex64, z: Complex64) -> bool {
    let (w, _, _) = reduce(tau, z);
    w.norm() < 1e-9
}

/// Functions attached to `Zτ + Z`.
#[derive(Clone, Copy, Debug)]
pub struct Normalized {
    tau: Complex64,
    q: Complex64,
    policy: TruncationPolicy,
}

impl Normalized {
    pub fn new(tau: Complex64, policy: TruncationPolicy) -> Self {
        Normalized { tau, q: (two_pi_i() * tau).exp(), policy }
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    fn terms(&self, bound: f64) -> usize {
        self.policy.terms(self.q.norm(), bound)
    }

    /// `(π²/3) E₂(τ)`, the quasi-period attached to `1`.
    pub fn eta2(&self) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        let mut qn = Complex64::new(1.0, 0.0);
        for n in 1..=self.terms(1.0) {
            qn *= self.q;
            s += qn * n as f64 / (Complex64::new(1.0, 0.0) - qn);
        }
        (Complex64::new(1.0, 0.0) - s * 24.0) * (PI * PI / 3.0)
    }

    /// `(u^{1/2} - u^{-1/2}) ∏ (1 - qⁿu)(1 - qⁿ/u)`, `u = e^{2πiz}`.
    pub fn product(&self, z: Complex64) -> Complex64 {
        self.log_product(z).exp()
    }

    /// A logarithm of [`Normalized::product`], defined up to `2πiZ`.
    pub fn log_product(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let half = (two_pi_i() * z * 0.5).exp();
        let u = half * half;
        let mut acc = (half - one / half).ln();
        let mut qn = one;
        for _ in 1..=self.terms(u.norm().max(1.0 / u.norm())) {
            qn *= self.q;
            acc += (one - qn * u).ln() + (one - qn / u).ln();
        }
        acc
    }

    /// `j`-th derivative of `d/dz log product(z)`.
    pub fn log_product_derivative(&self, z: Complex64, j: usize) -> Complex64 {
        let (w, m, _) = reduce(self.tau, z);
        let u = (two_pi_i() * w).exp();
        let mut s = -polylog_neg(j, u);
        let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
        let mut qn = Complex64::new(1.0, 0.0);
        for _ in 1..=self.terms(u.norm().max(1.0 / u.norm())) {
            qn *= self.q;
            s += -polylog_neg(j, qn * u) + polylog_neg(j, qn / u) * sign;
        }
        if j == 0 {
            s -= 0.5;
        }
        let value = s * two_pi_i().powi(j as i32 + 1);
        if j == 0 {
            value - two_pi_i() * m
        } else {
            value
        }
    }

    pub fn sigma(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let mut norm = one;
        let mut qn = one;
        for _ in 1..=self.terms(1.0) {
            qn *= self.q;
            norm *= (one - qn) * (one - qn);
        }
        (self.eta2() * z * z * 0.5).exp() * self.product(z) / (two_pi_i() * norm)
    }

    pub fn zeta(&self, z: Complex64) -> Complex64 {
        self.eta2() * z + self.log_product_derivative(z, 0)
    }

    /// `℘^{(j)}(z)`, with `j = 0` the function itself.
    pub fn wp_derivative(&self, z: Complex64, j: usize) -> Complex64 {
        let (w, _, _) = reduce(self.tau, z);
        let u = (two_pi_i() * w).exp();
        let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
        let mut s = polylog_neg(j + 1, u);
        let mut qn = Complex64::new(1.0, 0.0);
        let mut constant = Complex64::new(0.0, 0.0);
        for n in 1..=self.terms(u.norm().max(1.0 / u.norm())) {
            qn *= self.q;
            s += polylog_neg(j + 1, qn * u) + polylog_neg(j + 1, qn / u) * sign;
            if j == 0 {
                constant += qn * n as f64 / (Complex64::new(1.0, 0.0) - qn);
            }
        }
        if j == 0 {
            s += Complex64::new(1.0 / 12.0, 0.0) - constant * 2.0;
        }
        s * two_pi_i().powi(j as i32 + 2)
    }

    /// `q ∏ (1 - qⁿ)^{24}` times `(2πi)^{12}`.
    pub fn discriminant(&self) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let mut acc = self.q;
        let mut qn = one;
        for _ in 1..=self.terms(1.0) {
            qn *= self.q;
            acc *= (one - qn).powi(24);
        }
        acc * two_pi_i().powi(12)
    }
}

impl Lattice {
    pub fn normalized(&self, policy: &TruncationPolicy) -> Normalized {
        Normalized::new(self.tau(), *policy)
    }

    fn check_regular(&self, z: Complex64) -> Result<Complex64> {
        let zn = z / self.w2();
        if near_lattice(self.tau(), zn) {
            return Err(OracleError::Conditioning(format!("{z} is too close to a lattice point")));
        }
        Ok(zn)
    }

    pub fn discriminant(&self, policy: &TruncationPolicy) -> Complex64 {
        self.normalized(policy).discriminant() * self.w2().powi(-12)
    }

    /// `s₂(L)`, the `s → 0⁺` regularized weight-two sum.
    pub fn s2(&self, policy: &TruncationPolicy) -> Complex64 {
        (self.normalized(policy).eta2() - PI / self.tau().im) * self.w2().powi(-2)
    }

    /// `ζ(z + μ) - ζ(z) = s₂ μ + (π/area) μ̄` for `μ ∈ L`.
    pub fn quasi_period(&self, mu: Complex64, policy: &TruncationPolicy) -> Complex64 {
        self.s2(policy) * mu + mu.conj() * (PI / self.area())
    }
}

/// `σ, ζ, ℘` and derivatives `℘', ℘'', ...` at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassValues {
    pub sigma: Complex64,
    pub zeta: Complex64,
    pub wp: Complex64,
    pub wp_derivatives: Vec<Complex64>,
}

pub fn sigma(lattice: &Lattice, z: Complex64, policy: &TruncationPolicy) -> Result<Complex64> {
    let zn = z / lattice.w2();
    Ok(lattice.normalized(policy).sigma(zn) * lattice.w2())
}

pub fn zeta(lattice: &Lattice, z: Complex64, policy: &TruncationPolicy) -> Result<Complex64> {
    let zn = lattice.check_regular(z)?;
    Ok(lattice.normalized(policy).zeta(zn) / lattice.w2())
}

pub fn wp_derivative(lattice: &Lattice, z: Complex64, j: usize, policy: &TruncationPolicy) -> Result<Complex64> {
    let zn = lattice.check_regular(z)?;
    Ok(lattice.normalized(policy).wp_derivative(zn, j) * lattice.w2().powi(-(j as i32) - 2))
}

pub fn weierstrass_suite(
    lattice: &Lattice,
    z: Complex64,
    derivatives: usize,
    policy: &TruncationPolicy,
) -> Result<WeierstrassValues> {
    Ok(WeierstrassValues {
        sigma: sigma(lattice, z, policy)?,
        zeta: zeta(lattice, z, policy)?,
        wp: wp_derivative(lattice, z, 0, policy)?,
        wp_derivatives: (1..=derivatives)
            .map(|j| wp_derivative(lattice, z, j, policy))
            .collect::<Result<_>>()?,
    })
}

/// Central differences at `h, h/2, h/4, h/8`, Richardson-extrapolated in `h²`.
pub fn numeric_derivative(f: impl Fn(Complex64) -> Complex64, z: Complex64, h: f64) -> Estimate {
    let values: Vec<Complex64> = (0..4)
        .map(|j| {
            let s = h / f64::from(1 << j);
            (f(z + s) - f(z - s)) / (2.0 * s)
        })
        .collect();
    richardson(&values, 2, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polylog_series_agrees() {
        let x = Complex64::new(0.3, -0.2);
        for m in 0..6 {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 1..200 {
                s += x.powi(j) * (j as f64).powi(m as i32);
            }
            assert!((polylog_neg(m, x) - s).norm() < 1e-12, "m={m}");
        }
    }

    #[test]
    fn laurent_leading_terms() {
        let l = Lattice::gaussian();
        let p = TruncationPolicy::default();
        let z = Complex64::new(1e-3, 2e-3);
        let wp = wp_derivative(&l, z, 0, &p).unwrap();
        assert!((wp * z * z - 1.0).norm() < 1e-6);
        let zt = zeta(&l, z, &p).unwrap();
        assert!((zt * z - 1.0).norm() < 1e-6);
        let sg = sigma(&l, z, &p).unwrap();
        assert!((sg / z - 1.0).norm() < 1e-6);
    }
}
