use bhlab_core::eisenstein::*;
use bhlab_core::kl::RegularizationPair;
use bhlab_core::PrimeContext;

const QPREC: usize = 60;

fn pair() -> RegularizationPair {
    RegularizationPair::new(2, 3, 5).unwrap()
}

#[test]
fn weight_congruence_up_to_level_three() {
    for n in 1..=3 {
        for k in 0..=8 {
            let r = check_weight_congruence(5, &pair(), n, k, QPREC).unwrap();
            assert!(r.passed(), "{r}");
        }
    }
}

#[test]
fn sigma_coefficients_form_a_distribution() {
    for t in 0..=2 {
        for k in [0, 1, 3] {
            let r = check_distribution(5, &pair(), t, k, 30).unwrap();
            assert!(r.passed(), "{r}");
        }
    }
}

#[test]
fn full_coset_is_a_scaled_eisenstein_series() {
    for k in 0..=8 {
        let r = check_full_coset(5, &pair(), k, QPREC).unwrap();
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn zero_coset_raises_level() {
    for k in 0..=6 {
        let r = check_level_raising(5, &pair(), k, QPREC).unwrap();
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn rescaled_residues_dagger() {
    for n in 0..=2 {
        let r = check_rescaling(5, &pair(), n, 40).unwrap();
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn both_routes_to_the_log_eta_series_agree() {
    let ctx = PrimeContext::new(5, 8).unwrap();
    let a = g0n_divisor_series(&ctx, QPREC).unwrap();
    let b = g0n_log_series(&ctx, QPREC).unwrap();
    assert_eq!(a.congruence_failure(&b, 7), None);
    assert!(g0n_series(&ctx, 4, QPREC).is_ok());
}

#[test]
fn gk_matches_the_documented_expansion() {
    let g = eisenstein_g(2, 5).unwrap();
    let got: Vec<String> = g.coefficients().iter().map(bhlab_core::ring::rational_string).collect();
    assert_eq!(got, ["-1/12", "2", "6", "8", "14", "12"].map(String::from).to_vec());
}
