use bhlab_core::kl::RegularizationPair;
use bhlab_oracle::checks::*;
use bhlab_oracle::{Lattice, TruncationPolicy};
use num_complex::Complex64;

fn pol() -> TruncationPolicy {
    TruncationPolicy::default()
}

fn pair() -> RegularizationPair {
    RegularizationPair::new(2, 3, 5).unwrap()
}

#[test]
fn z_expansion_of_the_log_derivative() {
    let r = verify_z_interpolation(&Lattice::gaussian(), 2, 3, 8, 1e-8, &pol()).unwrap();
    assert!(r.passed(), "{r}");
    assert!(r.values["lhs[k=3]"].starts_with("3.630196226"));
    let other = Lattice::from_tau(Complex64::new(0.2, 1.3)).unwrap();
    let r = verify_z_interpolation(&other, 3, 2, 6, 1e-8, &pol()).unwrap();
    assert!(r.passed(), "{r}");
}

#[test]
fn lambda_is_a_theta_ratio() {
    let r = verify_lambda_ratio(&Lattice::gaussian(), 2, 3, 1e-7, &pol()).unwrap();
    assert!(r.passed(), "{r}");
}

#[test]
fn torsion_averages_have_the_sigma_expansion() {
    for k in 0..=3 {
        let r = verify_qexp_identity(Complex64::new(0.31, 1.07), 5, 1, k, 60, &pair(), 1e-6, &pol()).unwrap();
        assert!(r.passed(), "{r}");
    }
    assert!(verify_qexp_identity(Complex64::new(0.31, 1.07), 5, 2, 0, 60, &pair(), 1e-6, &pol()).is_err());
}

#[test]
fn cm_periods_match_the_sigma_series() {
    let setup = CMSetup::gaussian(8).unwrap();
    assert_eq!(setup.s1, 2);
    assert_eq!(setup.rho.residue() % 5, 4);
    let r = verify_cm_period(&setup, &pair(), &[0, 1, 2, 3, 4], 60, 1e-6, &pol()).unwrap();
    assert!(r.passed(), "{r}");
}

#[test]
fn cm_addition_formula() {
    let setup = CMSetup::gaussian(8).unwrap();
    for (a, k) in [(0, 0), (0, 3), (1, 3), (2, 1), (3, 2)] {
        let r = verify_cm_addition(&setup, &pair(), a, k, 1e-6, &pol()).unwrap();
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn eisenstein_lattice_sums_by_poisson_summation() {
    for tau in [Complex64::new(0.2, 1.3), Complex64::new(-0.35, 0.9), Complex64::new(0.0, 1.0)] {
        for k in [3, 4, 5, 7] {
            let r = verify_gk_poisson(tau, k, 1e-6, &pol()).unwrap();
            assert!(r.passed(), "{r}");
        }
    }
    assert!(verify_gk_poisson(Complex64::new(0.0, 1.0), 1, 1e-6, &pol()).is_err());
}

#[test]
fn a_wrong_identity_is_reported() {
    let other = RegularizationPair::new(3, 2, 5).unwrap();
    let setup = CMSetup::gaussian(8).unwrap();
    let r = verify_cm_period(&setup, &other, &[1], 60, 1e-6, &pol()).unwrap();
    assert!(r.passed());
    let r = verify_gk_poisson(Complex64::new(0.2, 1.3), 3, 1e-30, &pol()).unwrap();
    assert!(!r.passed());
    assert!(!r.witnesses.is_empty());
}
