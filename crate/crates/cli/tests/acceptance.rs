//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bhlab_core::eisenstein::{check_full_coset, check_weight_congruence};
use bhlab_core::kl::{gamma_p, kl_measure, verify_kl_interpolation, RegularizationPair};
use bhlab_core::measure::{amice_of_measure, periods_from_series, required_order, CosetAddress};
use bhlab_core::report::Report;
use bhlab_core::zeta::{limit_formula_check, residue_check, zeta_exceptional_check, zeta_interpolation_check};
use bhlab_core::PrimeContext;
use bhlab_oracle::checks::{
    verify_cm_addition, verify_cm_period, verify_gk_poisson, verify_qexp_identity, verify_z_interpolation, CMSetup,
};
use bhlab_oracle::{Lattice, TruncationPolicy};
use num_complex::Complex64;

const QPREC: usize = 60;

type Outcome = Result<Vec<String>, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn pair() -> RegularizationPair {
    RegularizationPair::new(2, 3, 5).unwrap()
}

fn collect<E: std::fmt::Display>(reports: impl IntoIterator<Item = Result<Report, E>>) -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for r in reports {
        let r = r.map_err(|e| e.to_string())?;
        count += 1;
        if !r.passed() {
            failures.push(r.to_string());
        }
    }
    if failures.is_empty() {
        Ok(vec![format!("{count} checks")])
    } else {
        Err(failures.join("; "))
    }
}

fn kl_interpolation() -> Outcome {
    let ks = [0u32, 1, 2, 3, 5, 7];
    let reports: Vec<_> = ks.iter().map(|&k| verify_kl_interpolation(5, &pair(), k, 6)).collect();
    let k3 = reports[3].as_ref().map_err(|e| e.to_string())?.values["rhs_exact"].clone();
    if k3 != "8" {
        return Err(format!("k=3 target {k3}"));
    }
    collect(reports)
}

fn weight_congruence() -> Outcome {
    collect((1..=3).flat_map(|n| (0..=8).map(move |k| check_weight_congruence(5, &pair(), n, k, QPREC))))
}

fn full_coset() -> Outcome {
    collect((0..=8).map(|k| check_full_coset(5, &pair(), k, QPREC)))
}

fn tate_interpolation() -> Outcome {
    let mut reports: Vec<_> = (1..=3)
        .flat_map(|n| [0u32, 2, 3, 4, 5, 6].into_iter().map(move |k| zeta_interpolation_check(5, &pair(), k, n, QPREC)))
        .collect();
    reports.extend((2..=3).map(|n| zeta_exceptional_check(5, &pair(), n, QPREC)));
    collect(reports)
}

fn residue() -> Outcome {
    collect((1..=4).map(|n| residue_check(5, &pair(), n, QPREC)))
}

fn limit_formula() -> Outcome {
    let mut out = collect((2..=3).map(|n| limit_formula_check(5, &pair(), n, QPREC)))?;
    for n in 3..=5u32 {
        let g3 = gamma_p(5, 3, n).map_err(|e| e.to_string())?;
        let g7 = gamma_p(5, 7, n).map_err(|e| e.to_string())?;
        if !g3.congruent(&g7, n - 2) {
            return Err(format!("gamma_p probes differ at n={n}: {g3} vs {g7}"));
        }
    }
    out.push("gamma_p probe-independent".into());
    Ok(out)
}

fn amice_roundtrip() -> Outcome {
    let m = 6;
    let ctx = PrimeContext::new(5, m).map_err(|e| e.to_string())?;
    let exact = kl_measure(ctx, pair(), 1);
    let mu = exact.to_padic(ctx).map_err(|e| e.to_string())?;
    let series = amice_of_measure(&mu, required_order(5, 1, m), m).map_err(|e| e.to_string())?;
    let mut table = Vec::new();
    for a in 0..5 {
        let got = periods_from_series(&series, CosetAddress::new(5, a, 1)).map_err(|e| e.to_string())?;
        if got.precision() < m - 1 || !got.congruent(mu.value(a), m - 1) {
            return Err(format!("coset {a}: {got} vs {}", mu.value(a)));
        }
        table.push(got.to_signed().to_string());
    }
    Ok(vec![format!("[{}] mod 5^{}", table.join(","), m - 1)])
}

fn z_interpolation() -> Outcome {
    collect([verify_z_interpolation(&Lattice::gaussian(), 2, 3, 8, 1e-8, &TruncationPolicy::default())])
}

fn cm_checks() -> Outcome {
    let pol = TruncationPolicy::default();
    let setup = CMSetup::gaussian(8).map_err(|e| e.to_string())?;
    let tau = Complex64::new(0.31, 1.07);
    let mut reports: Vec<_> = (0..=3).map(|k| verify_qexp_identity(tau, 5, 1, k, QPREC, &pair(), 1e-6, &pol)).collect();
    reports.push(verify_cm_period(&setup, &pair(), &[0, 1, 2, 3, 4], QPREC, 1e-6, &pol));
    for (a, k) in [(0, 0), (0, 3), (1, 3), (2, 1), (3, 2)] {
        reports.push(verify_cm_addition(&setup, &pair(), a, k, 1e-6, &pol));
    }
    collect(reports)
}

fn gk_poisson() -> Outcome {
    let pol = TruncationPolicy::default();
    let taus = [Complex64::new(0.2, 1.3), Complex64::new(-0.35, 0.9)];
    collect(taus.iter().flat_map(|&t| [3u32, 5, 7].into_iter().map(move |k| verify_gk_poisson(t, k, 1e-6, &pol))))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("KL interpolation, n=6", 1, kl_interpolation),
        ("weight congruence, n<=3, k<=8", 10, weight_congruence),
        ("full coset equals scaled G_{k+1}, k<=8", 5, full_coset),
        ("Tate interpolation and exceptional weight", 30, tate_interpolation),
        ("residue at s=1, n<=4", 10, residue),
        ("limit formula and gamma_p", 30, limit_formula),
        ("Amice roundtrip, M=6", 5, amice_roundtrip),
        ("oracle z-expansion on Z+Zi", 10, z_interpolation),
        ("oracle torsion averages and CM periods", 60, cm_checks),
        ("oracle G_k by Poisson summation", 10, gk_poisson),
    ];
    let mut all = true;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed < Duration::from_secs(*limit);
        let (ok, detail) = match outcome {
            Ok(notes) if in_time => (true, notes.join(", ")),
            Ok(_) => (false, format!("over the {limit}s budget")),
            Err(e) => (false, e),
        };
        all &= ok;
        println!(
            "criterion {:>2}: {} | {name} | {:.2}s | {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
