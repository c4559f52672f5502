//! The functions `Θ_c(z, L) = θ(z)^{c²}/θ(cz)` and `Λ_{c,N}(z, L) = ∏_ρ Θ_c(z + ρ)`.

use num_complex::Complex64;

use crate::error::{OracleError, Result};
use crate::lattice::{two_pi_i, Estimate, Lattice, TruncationPolicy};
use crate::weierstrass::wp_derivative;

fn check_c(c: u64) -> Result<()> {
    if c < 2 {
        return Err(OracleError::InvalidParameter(format!("c = {c} must exceed 1")));
    }
    Ok(())
}

fn regular_point(lattice: &Lattice, z: Complex64, c: u64) -> Result<()> {
    if lattice.contains(z * c as f64, 1e-9) {
        return Err(OracleError::Conditioning(format!("{z} is too close to a {c}-torsion point")));
    }
    Ok(())
}

/// `Θ_c` from the `q`-product for `θ`.
pub fn theta_c_product(lattice: &Lattice, z: Complex64, c: u64, policy: &TruncationPolicy) -> Result<Complex64> {
    Ok(log_theta_c(lattice, z, c, policy)?.exp())
}

/// A logarithm of `Θ_c(z, L)` up to `2πiZ`, from the `q`-product.
pub fn log_theta_c(lattice: &Lattice, z: Complex64, c: u64, policy: &TruncationPolicy) -> Result<Complex64> {
    check_c(c)?;
    regular_point(lattice, z, c)?;
    let norm = lattice.normalized(policy);
    let zn = z / lattice.w2();
    let c2 = (c * c) as f64;
    Ok(two_pi_i() * norm.tau() * (c2 - 1.0) + norm.log_product(zn) * (12.0 * c2)
        - norm.log_product(zn * c as f64) * 12.0)
}

/// `Θ_c = c^{-12} Δ^{c²-1} ∏_Q (℘(z) - ℘(Q))^{-6}` over the nonzero `c`-torsion.
pub fn theta_c_weierstrass(lattice: &Lattice, z: Complex64, c: u64, policy: &TruncationPolicy) -> Result<Complex64> {
    check_c(c)?;
    regular_point(lattice, z, c)?;
    let wz = wp_derivative(lattice, z, 0, policy)?;
    let mut prod = Complex64::new(1.0, 0.0);
    for point in lattice.torsion(c) {
        prod *= wz - wp_derivative(lattice, point, 0, policy)?;
    }
    let delta = lattice.discriminant(policy);
    Ok(delta.powi((c * c) as i32 - 1) / prod.powi(6) / (c as f64).powi(12))
}

/// `Θ_c(z, L)` with the two evaluation routes' discrepancy as error.
pub fn theta_c(lattice: &Lattice, z: Complex64, c: u64, policy: &TruncationPolicy) -> Result<Estimate> {
    let a = theta_c_product(lattice, z, c, policy)?;
    let b = theta_c_weierstrass(lattice, z, c, policy)?;
    Ok(Estimate { value: a, error: (a - b).norm() })
}

/// `(d/dz)^{j+1} log Θ_c(z, L) = 12 [c² ζ^{(j)}(z) - c^{j+1} ζ^{(j)}(cz)]`.
pub fn log_theta_derivative(
    lattice: &Lattice,
    z: Complex64,
    c: u64,
    j: usize,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    let (a, b) = log_theta_derivative_parts(lattice, z, c, j, policy)?;
    Ok(a - b)
}

/// The two terms of [`log_theta_derivative`], before subtraction.
pub fn log_theta_derivative_parts(
    lattice: &Lattice,
    z: Complex64,
    c: u64,
    j: usize,
    policy: &TruncationPolicy,
) -> Result<(Complex64, Complex64)> {
    check_c(c)?;
    regular_point(lattice, z, c)?;
    let norm = lattice.normalized(policy);
    let zn = z / lattice.w2();
    let cf = c as f64;
    let scale = lattice.w2().powi(-(j as i32) - 1) * 12.0;
    Ok((
        norm.log_product_derivative(zn, j) * (cf * cf) * scale,
        norm.log_product_derivative(zn * cf, j) * cf.powi(j as i32 + 1) * scale,
    ))
}

fn check_pair(c: u64, n: u64) -> Result<()> {
    check_c(c)?;
    if n < 2 || num_gcd(c, n) != 1 {
        return Err(OracleError::InvalidParameter(format!("need N > 1 prime to c, got c={c} N={n}")));
    }
    Ok(())
}

fn num_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `Λ_{c,N}(z, L)` from the product route of `Θ_c`.
pub fn lambda(lattice: &Lattice, z: Complex64, c: u64, n: u64, policy: &TruncationPolicy) -> Result<Complex64> {
    Ok(log_lambda(lattice, z, c, n, policy)?.exp())
}

/// A logarithm of `Λ_{c,N}(z, L)` up to `2πiZ`.
pub fn log_lambda(lattice: &Lattice, z: Complex64, c: u64, n: u64, policy: &TruncationPolicy) -> Result<Complex64> {
    check_pair(c, n)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for rho in lattice.torsion(n) {
        acc += log_theta_c(lattice, z + rho, c, policy)?;
    }
    Ok(acc)
}

/// `(d/dz)^{j+1} log Λ_{c,N}(z, L)`.
pub fn log_lambda_derivative(
    lattice: &Lattice,
    z: Complex64,
    c: u64,
    n: u64,
    j: usize,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    check_pair(c, n)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for rho in lattice.torsion(n) {
        acc += log_theta_derivative(lattice, z + rho, c, j, policy)?;
    }
    Ok(acc)
}
