use bhlab_core::eisenstein::*;
use bhlab_core::kl::{kl_interpolation_target, kl_measure, mazur_measure, verify_kl_interpolation};
use bhlab_core::measure::{amice_of_measure, moment_riemann, periods_from_series, required_order, AmiceSeries, CosetAddress};
use bhlab_core::report::Report;
use bhlab_core::ring::rational_string;
use bhlab_core::zeta::{
    integer_s, limit_formula_check, residue_check, zeta_eval, zeta_exceptional_check, zeta_interpolated_value,
    zeta_interpolation_check,
};
use bhlab_core::PAdicApprox;
use bhlab_oracle::checks::{
    verify_cm_addition, verify_cm_period, verify_gk_poisson, verify_lambda_ratio, verify_qexp_identity,
    verify_z_interpolation, CMSetup,
};
use bhlab_oracle::{Lattice, TruncationPolicy};
use num_complex::Complex64;
use serde_json::json;

use crate::args::{Command, MeasureKind, OracleKind, QexpKind, VerifyKind, ZetaKind};
use crate::config::RunConfig;
use crate::emit::{self, padic_json, Emission};
use crate::CliError;

pub fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<Emission, CliError> {
    match cmd {
        Command::Sigma => sigma(cfg),
        Command::Qexp { which } => qexp(*which, cfg),
        Command::Measure { which } => measure(*which, cfg),
        Command::Moment => moment(cfg),
        Command::Zeta { which } => zeta(*which, cfg),
        Command::Verify { which } => verify(*which, cfg),
        Command::Oracle { which } => oracle(*which, cfg),
    }
}

fn form(cfg: &RunConfig) -> FormSpec {
    FormSpec::new(cfg.p, cfg.a_or(0) as i128, cfg.n_or(1), cfg.k_or(0), cfg.pair())
}

fn sigma(cfg: &RunConfig) -> Result<Emission, CliError> {
    let spec = form(cfg);
    let m = cfg.m.unwrap_or(1);
    let v = sigma_coeff(&spec, m)?;
    Ok(emit::record(vec![
        ("p", json!(spec.p.to_string())),
        ("a", json!(spec.a.to_string())),
        ("n", json!(spec.n.to_string())),
        ("k", json!(spec.k.to_string())),
        ("m", json!(m.to_string())),
        ("value", json!(rational_string(&v))),
    ]))
}

fn qexp(which: QexpKind, cfg: &RunConfig) -> Result<Emission, CliError> {
    let order = cfg.qprec;
    let ctx = cfg.ctx();
    Ok(match which {
        QexpKind::Phi => emit::exact_series(&phi_series(&form(cfg), order)?),
        QexpKind::Psi => emit::exact_series(&psi_series(&form(cfg), order)?),
        QexpKind::Gk => emit::exact_series(&eisenstein_g(cfg.k_or(4), order)?),
        QexpKind::Gkstar => {
            let k = cfg.k_or(4);
            emit::exact_series(&p_stabilize(&eisenstein_g(k, order)?, k, cfg.p)?)
        }
        QexpKind::DeltaP => emit::padic_series(&delta_p_series(&ctx, order)?),
        QexpKind::G0n => emit::padic_series(&g0n_series(&ctx, cfg.n_or(1), order)?),
        QexpKind::An => emit::padic_series(&hasse_an(cfg.p, cfg.prec, order)?),
    })
}

fn kl_padic(cfg: &RunConfig, level: u32) -> Result<bhlab_core::measure::FiniteLevelMeasure<PAdicApprox>, CliError> {
    let ctx = cfg.ctx();
    Ok(kl_measure(ctx, cfg.pair(), level).to_padic(ctx)?)
}

fn amice(cfg: &RunConfig, level: u32) -> Result<AmiceSeries, CliError> {
    let mu = kl_padic(cfg, level)?;
    Ok(amice_of_measure(&mu, required_order(cfg.p, level, cfg.prec), cfg.prec)?)
}

fn measure(which: MeasureKind, cfg: &RunConfig) -> Result<Emission, CliError> {
    let level = cfg.n_or(1);
    let p = cfg.p;
    let cosets = || 0..p.pow(level);
    match which {
        MeasureKind::Kl | MeasureKind::Mazur => {
            let mu = match which {
                MeasureKind::Kl => kl_measure(cfg.ctx(), cfg.pair(), level),
                _ => mazur_measure(cfg.ctx(), cfg.N, level)?,
            };
            let values = cosets().map(|a| (a, rational_string(mu.value(a as i128)))).collect();
            Ok(emit::table(mu.name(), level, "exact".into(), values))
        }
        MeasureKind::Amice => {
            let series = amice(cfg, level)?;
            let cs = series.coefficients();
            let k = cs.iter().map(|c| c.precision()).min().unwrap_or(0);
            let values = cs.iter().enumerate().map(|(j, c)| (j as u64, c.reduce(k).residue().to_string())).collect();
            Ok(emit::table("amice", level, format!("{p}^{k}"), values))
        }
        MeasureKind::Periods => {
            let series = amice(cfg, level)?;
            let periods: Vec<PAdicApprox> = cosets()
                .map(|a| periods_from_series(&series, CosetAddress::new(p, a as i128, level)))
                .collect::<Result<_, _>>()?;
            let k = periods.iter().map(|c| c.precision()).min().unwrap_or(0);
            let values = periods.iter().enumerate().map(|(a, c)| (a as u64, c.reduce(k).to_signed().to_string())).collect();
            Ok(emit::table("periods", level, format!("{p}^{k}"), values))
        }
    }
}

fn moment(cfg: &RunConfig) -> Result<Emission, CliError> {
    let n = cfg.n_or(cfg.prec);
    let k = cfg.k_or(0);
    let mu = kl_padic(cfg, n)?;
    let riemann = moment_riemann(&mu, k, n)?;
    Ok(emit::record(vec![
        ("k", json!(k.to_string())),
        ("n", json!(n.to_string())),
        ("riemann", padic_json(&riemann.reduce(n.min(riemann.precision())))),
        ("target", json!(rational_string(&kl_interpolation_target(&cfg.pair(), k)))),
    ]))
}

fn parse_s(cfg: &RunConfig) -> Result<PAdicApprox, CliError> {
    let text = cfg.s.as_deref().ok_or_else(|| CliError::Usage("zeta eval needs --s".into()))?;
    let bad = || CliError::Usage(format!("cannot parse s `{text}`"));
    let ctx = cfg.ctx();
    match text.split_once('/') {
        Some((u, v)) => {
            let u: i128 = u.trim().parse().map_err(|_| bad())?;
            let v: i128 = v.trim().parse().map_err(|_| bad())?;
            Ok(ctx.ratio(u, v)?)
        }
        None => Ok(integer_s(&ctx, text.trim().parse().map_err(|_| bad())?)),
    }
}

fn zeta(which: ZetaKind, cfg: &RunConfig) -> Result<Emission, CliError> {
    match which {
        ZetaKind::Interpolate => Ok(emit::exact_series(&zeta_interpolated_value(cfg.p, cfg.k_or(0), cfg.qprec)?)),
        ZetaKind::Eval => {
            let s = parse_s(cfg)?;
            let n = cfg.n_or(3.min(cfg.prec));
            let i = cfg.omega_power.unwrap_or(0);
            let z = zeta_eval(&cfg.pair(), &s, i, n, cfg.qprec)?;
            let mut fields = vec![
                ("s", json!(cfg.s.clone().unwrap_or_default())),
                ("omega_power", json!(i.to_string())),
                ("n", json!(n.to_string())),
                ("pole_order", json!(z.pole_order.to_string())),
                ("scale_exponent", json!(z.scale_exponent.to_string())),
            ];
            if let Some(v) = &z.value {
                fields.push(("value", emit::padic_series(v).json));
            }
            if let Some(l) = &z.laurent {
                fields.push(("residue", padic_json(&l.residue)));
                fields.push(("constant", emit::padic_series(&l.constant).json));
            }
            Ok(emit::record(fields))
        }
    }
}

/// Explicit `--n`/`--k` pick one case; otherwise the whole default range runs.
fn grid(cfg: &RunConfig, ns: &[u32], ks: &[u32]) -> Vec<(u32, u32)> {
    let ns = cfg.n.map(|n| vec![n]).unwrap_or_else(|| ns.to_vec());
    let ks = cfg.k.map(|k| vec![k]).unwrap_or_else(|| ks.to_vec());
    ns.iter().flat_map(|&n| ks.iter().map(move |&k| (n, k))).collect()
}

fn verify(which: VerifyKind, cfg: &RunConfig) -> Result<Emission, CliError> {
    let p = cfg.p;
    let pair = cfg.pair();
    let q = cfg.qprec;
    let weights: Vec<u32> = (0..=8).collect();
    let run = |cases: Vec<(u32, u32)>, f: &dyn Fn(u32, u32) -> bhlab_core::Result<Report>| -> Result<Vec<Report>, CliError> {
        cases.into_iter().map(|(n, k)| f(n, k).map_err(CliError::from)).collect()
    };
    let list = match which {
        VerifyKind::KlInterpolation => {
            run(grid(cfg, &[6], &[0, 1, 2, 3, 5, 7]), &|n, k| verify_kl_interpolation(p, &pair, k, n))?
        }
        VerifyKind::WeightCongruence => {
            run(grid(cfg, &[1, 2, 3], &weights), &|n, k| check_weight_congruence(p, &pair, n, k, q))?
        }
        VerifyKind::Distribution => run(grid(cfg, &[0, 1, 2], &weights), &|t, k| check_distribution(p, &pair, t, k, q))?,
        VerifyKind::Prop55 => run(grid(cfg, &[0], &weights), &|_, k| check_full_coset(p, &pair, k, q))?,
        VerifyKind::Interpolation => {
            run(grid(cfg, &[1, 2, 3], &[0, 2, 3, 4, 5, 6]), &|n, k| zeta_interpolation_check(p, &pair, k, n, q))?
        }
        VerifyKind::Exceptional => run(grid(cfg, &[2, 3], &[1]), &|n, _| zeta_exceptional_check(p, &pair, n, q))?,
        VerifyKind::Residue => run(grid(cfg, &[1, 2, 3, 4], &[0]), &|n, _| residue_check(p, &pair, n, q))?,
        VerifyKind::Limit => run(grid(cfg, &[2, 3], &[0]), &|n, _| limit_formula_check(p, &pair, n, q))?,
    };
    Ok(emit::reports(list))
}

const GENERIC_TAUS: [(f64, f64); 2] = [(0.2, 1.3), (-0.35, 0.9)];

fn oracle(which: OracleKind, cfg: &RunConfig) -> Result<Emission, CliError> {
    let pol = TruncationPolicy::default();
    let pair = cfg.pair();
    let (c, big_n) = (cfg.c, cfg.N);
    let list: Vec<Report> = match which {
        OracleKind::ZInterp => {
            let lattice = match cfg.tau {
                Some(t) => Lattice::from_tau(t)?,
                None => Lattice::gaussian(),
            };
            let k = cfg.k_or(8) as usize;
            vec![verify_z_interpolation(&lattice, c, big_n, k, cfg.tol.unwrap_or(1e-8), &pol)?]
        }
        OracleKind::LambdaRatio => {
            let lattice = match cfg.tau {
                Some(t) => Lattice::from_tau(t)?,
                None => Lattice::gaussian(),
            };
            vec![verify_lambda_ratio(&lattice, c, big_n, cfg.tol.unwrap_or(1e-7), &pol)?]
        }
        OracleKind::Qexp => {
            let tau = cfg.tau.unwrap_or(Complex64::new(0.31, 1.07));
            let ks = cfg.k.map(|k| vec![k]).unwrap_or_else(|| (0..=3).collect());
            ks.into_iter()
                .map(|k| {
                    verify_qexp_identity(tau, cfg.p, cfg.n_or(1), k as usize, cfg.qprec, &pair, cfg.tol.unwrap_or(1e-6), &pol)
                })
                .collect::<Result<_, _>>()?
        }
        OracleKind::CmPeriod => {
            let setup = gaussian_setup(cfg)?;
            let labels: Vec<i64> = cfg.a.map(|a| vec![a]).unwrap_or_else(|| (0..setup.p as i64).collect());
            vec![verify_cm_period(&setup, &pair, &labels, cfg.qprec, cfg.tol.unwrap_or(1e-6), &pol)?]
        }
        OracleKind::CmAddition => {
            let setup = gaussian_setup(cfg)?;
            let cases = match (cfg.a, cfg.k) {
                (None, None) => vec![(0, 0), (0, 3), (1, 3), (2, 1), (3, 2)],
                (a, k) => vec![(a.unwrap_or(0), k.unwrap_or(0))],
            };
            cases
                .into_iter()
                .map(|(a, k)| verify_cm_addition(&setup, &pair, a, k as usize, cfg.tol.unwrap_or(1e-6), &pol))
                .collect::<Result<_, _>>()?
        }
        OracleKind::GkPoisson => {
            let taus: Vec<Complex64> = match cfg.tau {
                Some(t) => vec![t],
                None => GENERIC_TAUS.iter().map(|&(re, im)| Complex64::new(re, im)).collect(),
            };
            let ks = cfg.k.map(|k| vec![k]).unwrap_or_else(|| vec![3, 5, 7]);
            let mut out = Vec::new();
            for tau in taus {
                for &k in &ks {
                    out.push(verify_gk_poisson(tau, k, cfg.tol.unwrap_or(1e-6), &pol)?);
                }
            }
            out
        }
    };
    Ok(emit::reports(list))
}

fn gaussian_setup(cfg: &RunConfig) -> Result<CMSetup, CliError> {
    if cfg.p != 5 {
        return Err(CliError::Usage("CM checks are set up for Q(i) at p = 5 only".into()));
    }
    Ok(CMSetup::gaussian(cfg.prec)?)
}
