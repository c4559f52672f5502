use bhlab_core::eisenstein::eisenstein_g;
use bhlab_oracle::lattice::{lattice_sum_box, lattice_sum_extrapolated, lattice_sum_sk, I};
use bhlab_oracle::theta::{log_theta_derivative, theta_c, theta_c_product};
use bhlab_oracle::weierstrass::*;
use bhlab_oracle::{Lattice, TruncationPolicy};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pol() -> TruncationPolicy {
    TruncationPolicy::default()
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

fn lattices() -> Vec<Lattice> {
    vec![
        Lattice::gaussian(),
        Lattice::from_tau(c(0.31, 1.07)).unwrap(),
        Lattice::new(c(0.4, 1.9), c(1.3, -0.2)).unwrap(),
    ]
}

#[test]
fn zeta_is_odd_and_wp_is_periodic() {
    for l in lattices() {
        let z = l.w1() * 0.23 + l.w2() * 0.41;
        let zt = zeta(&l, z, &pol()).unwrap();
        assert!(close(zeta(&l, -z, &pol()).unwrap(), -zt, 1e-12));
        let wp = wp_derivative(&l, z, 0, &pol()).unwrap();
        for mu in [l.w1(), l.w2(), l.w1() * 2.0 - l.w2()] {
            assert!(close(wp_derivative(&l, z + mu, 0, &pol()).unwrap(), wp, 1e-11));
        }
    }
}

#[test]
fn zeta_shifts_by_the_quasi_period() {
    for l in lattices() {
        let z = l.w1() * 0.17 + l.w2() * 0.36;
        for mu in [l.w1(), l.w2(), l.w1() * 3.0 + l.w2() * 2.0] {
            let shift = zeta(&l, z + mu, &pol()).unwrap() - zeta(&l, z, &pol()).unwrap();
            assert!(close(shift, l.quasi_period(mu, &pol()), 1e-10), "{shift} vs {}", l.quasi_period(mu, &pol()));
        }
    }
}

#[test]
fn derivatives_are_cross_consistent() {
    for l in lattices() {
        let z = l.w1() * 0.29 + l.w2() * 0.13;
        let p = pol();
        let dlog_sigma = numeric_derivative(|w| sigma(&l, w, &p).unwrap().ln(), z, 1e-3);
        assert!(close(dlog_sigma.value, zeta(&l, z, &p).unwrap(), 1e-9));
        let dzeta = numeric_derivative(|w| zeta(&l, w, &p).unwrap(), z, 1e-3);
        assert!(close(-dzeta.value, wp_derivative(&l, z, 0, &p).unwrap(), 1e-9));
        for j in 1..5 {
            let d = numeric_derivative(|w| wp_derivative(&l, w, j - 1, &p).unwrap(), z, 1e-3);
            let exact = wp_derivative(&l, z, j, &p).unwrap();
            assert!(close(d.value, exact, 1e-7), "j={j}: {} vs {exact}", d.value);
        }
        let suite = weierstrass_suite(&l, z, 2, &p).unwrap();
        let wp = suite.wp;
        let g2 = lattice_sum_sk(&l, 4, &p).unwrap().value * 60.0;
        let g3 = lattice_sum_sk(&l, 6, &p).unwrap().value * 140.0;
        let lhs = suite.wp_derivatives[0].powi(2);
        assert!(close(lhs, wp.powi(3) * 4.0 - g2 * wp - g3, 1e-9), "differential equation");
    }
}

#[test]
fn lattice_points_are_rejected() {
    let l = Lattice::gaussian();
    assert!(wp_derivative(&l, l.w1() + l.w2(), 0, &pol()).is_err());
    assert!(theta_c_product(&l, l.w1() * 0.5, 2, &pol()).is_err());
}

#[test]
fn theta_routes_agree_and_theta_is_periodic() {
    for l in lattices() {
        for cc in [2u64, 3] {
            for z in [l.w1() * 0.21 + l.w2() * 0.33, l.w1() * 0.62 + l.w2() * 0.07] {
                let t = theta_c(&l, z, cc, &pol()).unwrap();
                assert!(t.error <= 1e-8 * t.value.norm(), "c={cc}: {:?}", t);
                for mu in [l.w1(), l.w2(), l.w1() - l.w2() * 2.0] {
                    let shifted = theta_c_product(&l, z + mu, cc, &pol()).unwrap();
                    assert!(close(shifted, t.value, 1e-8) || (shifted - t.value).norm() < 1e-8 * t.value.norm());
                }
            }
        }
    }
}

#[test]
fn theta_log_derivative_matches_difference_quotients() {
    let l = Lattice::from_tau(c(0.31, 1.07)).unwrap();
    let z = c(0.23, 0.41);
    let num = numeric_derivative(|w| theta_c_product(&l, w, 2, &pol()).unwrap(), z, 1e-3);
    let ratio = num.value / theta_c_product(&l, z, 2, &pol()).unwrap();
    assert!(close(ratio, log_theta_derivative(&l, z, 2, 0, &pol()).unwrap(), 1e-9));
}

#[test]
fn gaussian_sums_vanish_off_multiples_of_four() {
    let l = Lattice::gaussian();
    assert_eq!(lattice_sum_sk(&l, 6, &pol()).unwrap().value, c(0.0, 0.0));
    assert!(lattice_sum_extrapolated(&l, 6, &pol()).value.norm() < 1e-12);
    assert!(lattice_sum_box(&l, 5, 40).norm() < 1e-12);
    assert!(lattice_sum_sk(&l, 2, &pol()).is_err());
}

#[test]
fn gaussian_s4_matches_the_eisenstein_expansion() {
    let q = (-2.0 * std::f64::consts::PI).exp();
    let g4 = eisenstein_g(4, 30).unwrap();
    let mut value = 0.0;
    for (m, a) in g4.coefficients().iter().enumerate() {
        value += a.to_f64().unwrap() * q.powi(m as i32);
    }
    let bridge = (2.0 * std::f64::consts::PI).powi(4) * value;
    let s4 = lattice_sum_sk(&Lattice::gaussian(), 4, &pol()).unwrap().value;
    assert!((s4.re - bridge).abs() < 1e-10 * bridge && s4.im.abs() < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lattice_sums_are_homogeneous(r in 0.5f64..2.0, arg in -3.0f64..3.0, k in prop::sample::select(vec![4u32, 8])) {
        let lam = Complex64::from_polar(r, arg);
        let l = Lattice::from_tau(c(0.2, 1.3)).unwrap();
        let a = lattice_sum_sk(&l.scaled(lam), k, &pol()).unwrap().value;
        let b = lattice_sum_sk(&l, k, &pol()).unwrap().value * lam.powi(-(k as i32));
        prop_assert!(close(a, b, 1e-9));
    }

    #[test]
    fn theta_is_scale_invariant(r in 0.5f64..2.0, arg in -3.0f64..3.0, x in 0.05f64..0.45, y in 0.05f64..0.45) {
        let lam = Complex64::from_polar(r, arg);
        let l = Lattice::gaussian();
        let z = l.w1() * x + l.w2() * y;
        let base = theta_c(&l, z, 2, &pol()).unwrap().value;
        let moved = theta_c(&l.scaled(lam), z * lam, 2, &pol()).unwrap();
        prop_assert!((moved.value - base).norm() <= 1e-9 * base.norm());
        prop_assert!(moved.error <= 1e-8 * base.norm());
    }

    #[test]
    fn theta_ignores_the_choice_of_basis(x in 0.05f64..0.45, y in 0.05f64..0.45) {
        let l = Lattice::from_tau(c(0.31, 1.07)).unwrap();
        let other = l.rebased([[2, 5], [1, 3]]).unwrap();
        let z = l.w1() * x + l.w2() * y;
        let a = theta_c_product(&l, z, 2, &pol()).unwrap();
        let b = theta_c_product(&other, z, 2, &pol()).unwrap();
        prop_assert!((a - b).norm() <= 1e-8 * a.norm());
        let z2 = theta_c(&l, z * I, 3, &pol()).unwrap();
        prop_assert!(z2.error <= 1e-8 * z2.value.norm());
    }
}
