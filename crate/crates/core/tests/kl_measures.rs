use bhlab_core::bernoulli::zeta_neg;
use bhlab_core::kl::*;
use bhlab_core::measure::*;
use bhlab_core::padic::padic_log;
use bhlab_core::ring::rational_to_padic;
use bhlab_core::PrimeContext;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

fn pair() -> RegularizationPair {
    RegularizationPair::new(2, 3, 5).unwrap()
}

#[test]
fn riemann_moments_hit_the_interpolation_targets() {
    for k in [0u32, 1, 2, 3, 5, 7] {
        let r = verify_kl_interpolation(5, &pair(), k, 6).unwrap();
        assert!(r.passed(), "{r}");
    }
    let r = verify_kl_interpolation(5, &pair(), 3, 6).unwrap();
    assert_eq!(r.values["rhs_exact"], "8");
}

#[test]
fn masses_sum_to_the_zeta_zero_value() {
    for p in [5u64, 7] {
        let ctx = PrimeContext::new(p, 4).unwrap();
        for n in 0..=4u32 {
            if p == 7 && n > 3 {
                continue;
            }
            let mazur = mazur_measure(ctx, 3, n).unwrap();
            assert_eq!(mazur.total_mass(), BigRational::new(BigInt::from(1), BigInt::from(1)));
            let kl = kl_measure(ctx, RegularizationPair::new(2, 3, p).unwrap(), n);
            assert!(kl.total_mass().is_zero());
        }
    }
}

#[test]
fn both_kl_closed_forms_agree_coset_by_coset() {
    for p in [5u64, 7] {
        for (c, nn) in [(2u64, 3u64), (3, 2), (7, 4)] {
            if (c * nn) % p == 0 {
                continue;
            }
            let pr = RegularizationPair::new(c, nn, p).unwrap();
            for n in 0..=3u32 {
                for a in 0..(p.pow(n) as i128) {
                    assert_eq!(
                        mu_kl_period(p, a, n, &pr).unwrap(),
                        mu_kl_direct(p, a, n, &pr).unwrap(),
                        "p={p} c={c} N={nn} n={n} a={a}"
                    );
                }
            }
        }
    }
}

#[test]
fn measures_are_distributions() {
    let ctx = PrimeContext::new(5, 4).unwrap();
    let kl = kl_measure(ctx, pair(), 0);
    let mazur = mazur_measure(ctx, 3, 0).unwrap();
    for n in 0..4 {
        assert!(kl.is_coherent(n).unwrap());
        assert!(mazur.is_coherent(n).unwrap());
    }
}

#[test]
fn exact_coset_moments_match_riemann_sums() {
    let ctx = PrimeContext::new(5, 7).unwrap();
    let pr = pair();
    for k in 0..=6u32 {
        for n in 1..=2u32 {
            for a in 0..5i128.pow(n) {
                let exact = rational_to_padic(&ctx, &kl_coset_moment(5, a, n, &pr, k).unwrap()).unwrap();
                let riemann = kl_coset_moment_riemann(ctx, a, n, &pr, k, 7).unwrap();
                assert!(exact.congruent(&riemann, 7), "k={k} n={n} a={a}: {exact} vs {riemann}");
            }
        }
    }
}

#[test]
fn full_moments_are_bernoulli_values() {
    let pr = pair();
    for k in 1..=9u32 {
        let exact = kl_coset_moment(5, 0, 0, &pr, k).unwrap();
        let target = BigRational::from_integer(pr.euler_factor(k)) * zeta_neg(k);
        assert_eq!(exact, target, "k={k}");
    }
}

#[test]
fn amice_roundtrip_recovers_the_level_one_table() {
    let ctx = PrimeContext::new(5, 6).unwrap();
    let mu = kl_measure(ctx, pair(), 1).to_padic(ctx).unwrap();
    let order = required_order(5, 1, 6);
    let series = amice_of_measure(&mu, order, 6).unwrap();
    assert!(series.coeff(0).unwrap().is_zero());
    for a in 0..5 {
        let got = periods_from_series(&series, CosetAddress::new(5, a, 1)).unwrap();
        assert_eq!(got.precision(), 5);
        assert!(got.congruent(mu.value(a), 5), "a={a}");
    }
    assert_eq!(
        periods_from_series(&series, CosetAddress::new(5, 1, 1)).unwrap().residue(),
        2
    );
}

#[test]
fn moment_operator_agrees_with_riemann_sums() {
    let ctx = PrimeContext::new(5, 6).unwrap();
    let exact = kl_measure(ctx, pair(), 6);
    let mu = exact.to_padic(ctx).unwrap();
    let series = amice_of_measure(&mu, 10, 6).unwrap();
    for k in 0..=7u32 {
        let op = moment_operator(&series, k).unwrap();
        let rs = moment_riemann(&mu, k, 6).unwrap();
        assert!(op.congruent(&rs, 6), "k={k}: {op} vs {rs}");
    }
    assert_eq!(moment_operator(&series, 3).unwrap().residue(), 8);
}

#[test]
fn leopoldt_value_of_mazur_measure() {
    let ctx = PrimeContext::new(5, 6).unwrap();
    let lhs = leopoldt_value(&ctx, 3, 6).unwrap();
    let log3 = padic_log(&ctx.element(3)).unwrap();
    // (1 - 1/p) log_p 3 = 4 · (log_p 3)/5
    let rhs = -(log3.div_p_pow(1).unwrap() * ctx.element(4));
    assert!(lhs.congruent(&rhs, 5), "{lhs} vs {rhs}");
}

#[test]
fn gamma_is_independent_of_the_probe() {
    for n in 3..=5u32 {
        let g3 = gamma_p(5, 3, n).unwrap();
        let g7 = gamma_p(5, 7, n).unwrap();
        assert_eq!(g3.precision(), n - 2);
        assert_eq!(g3, g7, "n={n}");
    }
    let lo = gamma_p(5, 3, 4).unwrap();
    let hi = gamma_p(5, 3, 6).unwrap();
    assert!(lo.congruent(&hi, 2));
}
