use std::fs;

use bhlab_core::kl::RegularizationPair;
use bhlab_core::PrimeContext;
use num_complex::Complex64;
use serde::Deserialize;

use crate::args::{Flags, Format};
use crate::CliError;

/// Optional values read from `--config`; explicit flags take precedence.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    p: Option<u64>,
    prec: Option<u32>,
    qprec: Option<usize>,
    c: Option<u64>,
    #[serde(rename = "N")]
    big_n: Option<u64>,
    n: Option<u32>,
    k: Option<u32>,
    a: Option<i64>,
    m: Option<u64>,
    s: Option<String>,
    omega_power: Option<u64>,
    tau: Option<String>,
    tol: Option<f64>,
    out: Option<Format>,
}

#[derive(Debug, Clone)]
#[allow(non_snake_case)]
pub struct RunConfig {
    pub p: u64,
    pub prec: u32,
    pub qprec: usize,
    pub c: u64,
    pub N: u64,
    pub n: Option<u32>,
    pub k: Option<u32>,
    pub a: Option<i64>,
    pub m: Option<u64>,
    pub s: Option<String>,
    pub omega_power: Option<u64>,
    pub tau: Option<Complex64>,
    pub tol: Option<f64>,
    pub out: Format,
}

impl RunConfig {
    pub fn resolve(flags: &Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };
        let tau = flags.tau.clone().or(file.tau).map(|t| parse_tau(&t)).transpose()?;
        let cfg = RunConfig {
            p: flags.p.or(file.p).unwrap_or(5),
            prec: flags.prec.or(file.prec).unwrap_or(8),
            qprec: flags.qprec.or(file.qprec).unwrap_or(60),
            c: flags.c.or(file.c).unwrap_or(2),
            N: flags.big_n.or(file.big_n).unwrap_or(3),
            n: flags.n.or(file.n),
            k: flags.k.or(file.k),
            a: flags.a.or(file.a),
            m: flags.m.or(file.m),
            s: flags.s.clone().or(file.s),
            omega_power: flags.omega_power.or(file.omega_power),
            tau,
            tol: flags.tol.or(file.tol),
            out: flags.out.or(file.out).unwrap_or(Format::Json),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        PrimeContext::new(self.p, self.prec)?;
        RegularizationPair::new(self.c, self.N, self.p)?;
        if self.qprec == 0 {
            return Err(CliError::Usage("--qprec must be positive".into()));
        }
        if let Some(t) = self.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Usage("--tol must be a positive number".into()));
            }
        }
        Ok(())
    }

    pub fn ctx(&self) -> PrimeContext {
        PrimeContext::new(self.p, self.prec).expect("validated")
    }

    pub fn pair(&self) -> RegularizationPair {
        RegularizationPair::new(self.c, self.N, self.p).expect("validated")
    }

    pub fn n_or(&self, default: u32) -> u32 {
        self.n.unwrap_or(default)
    }

    pub fn k_or(&self, default: u32) -> u32 {
        self.k.unwrap_or(default)
    }

    pub fn a_or(&self, default: i64) -> i64 {
        self.a.unwrap_or(default)
    }
}

/// Parse `re,im`.
pub fn parse_tau(text: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Usage(format!("cannot parse tau `{text}`; expected `re,im`"));
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let (re, im) = match parts.as_slice() {
        [re, im] => (re.parse::<f64>().map_err(|_| bad())?, im.parse::<f64>().map_err(|_| bad())?),
        _ => return Err(bad()),
    };
    if im.is_nan() || im <= 0.0 {
        return Err(CliError::Usage("tau must lie in the upper half plane".into()));
    }
    Ok(Complex64::new(re, im))
}
