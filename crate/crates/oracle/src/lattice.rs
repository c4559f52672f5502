//! Period lattices, truncation policies and Eisenstein lattice sums.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{OracleError, Result};

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// `2πi`.
pub fn two_pi_i() -> Complex64 {
    Complex64::new(0.0, 2.0 * PI)
}

/// `Zω₁ + Zω₂` with `im(ω₁/ω₂) > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lattice {
    w1: Complex64,
    w2: Complex64,
}

impl Lattice {
    pub fn new(w1: Complex64, w2: Complex64) -> Result<Self> {
        if w2.norm() == 0.0 || !(w1 / w2).im.is_finite() || (w1 / w2).im <= 0.0 {
            return Err(OracleError::InvalidParameter(format!(
                "basis ({w1}, {w2}) is not positively oriented"
            )));
        }
        Ok(Lattice { w1, w2 })
    }

    /// `Zτ + Z`.
    pub fn from_tau(tau: Complex64) -> Result<Self> {
        Lattice::new(tau, Complex64::new(1.0, 0.0))
    }

    /// `Z + Zi`.
    pub fn gaussian() -> Self {
        Lattice { w1: I, w2: Complex64::new(1.0, 0.0) }
    }

    pub fn w1(&self) -> Complex64 {
        self.w1
    }

    pub fn w2(&self) -> Complex64 {
        self.w2
    }

    pub fn tau(&self) -> Complex64 {
        self.w1 / self.w2
    }

    pub fn q(&self) -> Complex64 {
        (two_pi_i() * self.tau()).exp()
    }

    pub fn scaled(&self, lambda: Complex64) -> Self {
        Lattice { w1: lambda * self.w1, w2: lambda * self.w2 }
    }

    /// Same lattice, basis `(aω₁ + bω₂, cω₁ + dω₂)` for `[[a,b],[c,d]]` in `SL₂(Z)`.
    pub fn rebased(&self, m: [[i64; 2]; 2]) -> Result<Self> {
        if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 1 {
            return Err(OracleError::InvalidParameter("change of basis must have determinant 1".into()));
        }
        let f = |a: i64, b: i64| self.w1 * a as f64 + self.w2 * b as f64;
        Lattice::new(f(m[0][0], m[0][1]), f(m[1][0], m[1][1]))
    }

    pub fn area(&self) -> f64 {
        (self.w1.conj() * self.w2).im.abs()
    }

    /// Real coordinates `(x, y)` with `z = xω₁ + yω₂`.
    pub fn coordinates(&self, z: Complex64) -> (f64, f64) {
        let det = (self.w1.conj() * self.w2).im;
        let x = (z.conj() * self.w2).im / det;
        let y = (self.w1.conj() * z).im / det;
        (x, y)
    }

    /// Whether `z` lies within `tol` of a lattice point, measured in lattice coordinates.
    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        let (x, y) = self.coordinates(z);
        (x - x.round()).abs() < tol && (y - y.round()).abs() < tol
    }

    /// `εL = L` for the unit `ε`.
    pub fn stable_under(&self, eps: Complex64) -> bool {
        self.contains(eps * self.w1, 1e-9) && self.contains(eps * self.w2, 1e-9)
    }

    /// Representatives `(d₁ω₁ + d₂ω₂)/m` of the nonzero `m`-torsion.
    pub fn torsion(&self, m: u64) -> Vec<Complex64> {
        let mut out = Vec::new();
        for d1 in 0..m {
            for d2 in 0..m {
                if d1 == 0 && d2 == 0 {
                    continue;
                }
                out.push((self.w1 * d1 as f64 + self.w2 * d2 as f64) / m as f64);
            }
        }
        out
    }
}

/// Truncation settings for series, products and lattice sums.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPolicy {
    /// Smallest square box `max(|m|,|n|) <= B` in the extrapolation ladder.
    pub box_bound: usize,
    /// Number of box doublings fed to Richardson extrapolation.
    pub ladder: usize,
    /// Drop product and series terms once `|q|^m` falls below this.
    pub product_eps: f64,
    /// Base step for numerical differentiation.
    pub step: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy { box_bound: 32, ladder: 5, product_eps: 1e-18, step: 1e-3 }
    }
}

impl TruncationPolicy {
    /// The refined policy used for convergence certificates.
    pub fn doubled(&self) -> Self {
        TruncationPolicy {
            box_bound: self.box_bound * 2,
            ladder: self.ladder,
            product_eps: self.product_eps * self.product_eps,
            step: self.step / 2.0,
        }
    }

    /// Terms `m >= 1` needed before `|q|^m · bound` drops below the cutoff.
    pub fn terms(&self, q_abs: f64, bound: f64) -> usize {
        let eps = self.product_eps.max(1e-300);
        let t = ((eps / bound.max(1.0)).ln() / q_abs.ln()).ceil();
        (t.max(1.0) as usize) + 2
    }
}

/// A numerical value with an error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

fn box_sum(tau: Complex64, k: u32, bound: i64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for m in -bound..=bound {
        let mut row = Complex64::new(0.0, 0.0);
        for n in -bound..=bound {
            if m == 0 && n == 0 {
                continue;
            }
            let mu = tau * m as f64 + n as f64;
            row += mu.powi(-(k as i32));
        }
        total += row;
    }
    total
}

/// Repeated Richardson elimination of `B^{-e}`, `B^{-e-stride}`, ... from values at `B, 2B, 4B, ...`.
pub fn richardson(values: &[Complex64], first_exponent: i32, stride: i32) -> Estimate {
    let mut table = values.to_vec();
    let mut e = first_exponent;
    let mut last = table[table.len() - 1];
    let mut prev = if table.len() > 1 { table[table.len() - 2] } else { last };
    while table.len() > 1 {
        let f = 2f64.powi(e);
        table = table.windows(2).map(|w| (w[1] * f - w[0]) / (f - 1.0)).collect();
        prev = last;
        last = table[table.len() - 1];
        e += stride;
    }
    Estimate { value: last, error: (last - prev).norm() }
}

/// `s_k(L) = Σ' μ^{-k}` for `k >= 3`, by extrapolated box sums.
pub fn lattice_sum_sk(lattice: &Lattice, k: u32, policy: &TruncationPolicy) -> Result<Estimate> {
    if k < 3 {
        return Err(OracleError::Unsupported(format!("s_{k} is not absolutely convergent")));
    }
    let zero = Estimate { value: Complex64::new(0.0, 0.0), error: 0.0 };
    if k % 2 == 1 || (!k.is_multiple_of(4) && lattice.stable_under(I)) {
        return Ok(zero);
    }
    let rho = Complex64::from_polar(1.0, PI / 3.0);
    if !k.is_multiple_of(6) && lattice.stable_under(rho) {
        return Ok(zero);
    }
    Ok(lattice_sum_extrapolated(lattice, k, policy))
}

/// Extrapolated box sums for `k >= 3` without symmetry shortcuts.
pub fn lattice_sum_extrapolated(lattice: &Lattice, k: u32, policy: &TruncationPolicy) -> Estimate {
    let tau = lattice.tau();
    let values: Vec<Complex64> = (0..policy.ladder)
        .map(|j| box_sum(tau, k, (policy.box_bound << j) as i64))
        .collect();
    let est = richardson(&values, k as i32 - 2, 1);
    let scale = lattice.w2().powi(-(k as i32));
    Estimate { value: est.value * scale, error: est.error * scale.norm() }
}

/// `s_k` by direct box summation at bound `B`, without extrapolation or symmetry shortcuts.
pub fn lattice_sum_box(lattice: &Lattice, k: u32, bound: usize) -> Complex64 {
    box_sum(lattice.tau(), k, bound as i64) * lattice.w2().powi(-(k as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_roundtrip() {
        let l = Lattice::new(Complex64::new(0.3, 1.2), Complex64::new(1.1, -0.2)).unwrap();
        let z = l.w1() * 0.25 + l.w2() * -1.5;
        let (x, y) = l.coordinates(z);
        assert!((x - 0.25).abs() < 1e-12 && (y + 1.5).abs() < 1e-12);
        assert!(Lattice::new(Complex64::new(1.0, 0.0), I).is_err());
    }

    #[test]
    fn gaussian_s4() {
        let s4 = lattice_sum_sk(&Lattice::gaussian(), 4, &TruncationPolicy::default()).unwrap();
        assert!((s4.value.re - 3.151212002153897).abs() < 1e-9, "{:?}", s4);
        assert!(s4.value.im.abs() < 1e-9);
        let s6 = lattice_sum_sk(&Lattice::gaussian(), 6, &TruncationPolicy::default()).unwrap();
        assert_eq!(s6.value, Complex64::new(0.0, 0.0));
    }
}
