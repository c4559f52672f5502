use bhlab_core::qseries::QSeries;
use bhlab_core::report::{sort_reports, Report};
use bhlab_core::ring::rational_string;
use bhlab_core::PAdicApprox;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::args::Format;

/// Something ready to print, in both encodings.
#[derive(Debug, Clone)]
pub struct Emission {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// `Some(false)` when a check failed.
    pub verdict: Option<bool>,
}

impl Emission {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).expect("in-memory write");
                for row in &self.rows {
                    w.write_record(row).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
            }
        }
    }

    /// Attach extra top-level string fields to the JSON object.
    pub fn with_fields(mut self, fields: &[(&str, String)]) -> Self {
        if let Value::Object(map) = &mut self.json {
            for (k, v) in fields {
                map.insert((*k).to_string(), Value::String(v.clone()));
            }
        }
        self
    }
}

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|s| s.to_string()).collect()
}

pub fn padic_json(x: &PAdicApprox) -> Value {
    json!({ "residue": x.residue().to_string(), "modulus": format!("{}^{}", x.p(), x.precision()) })
}

pub fn exact_series(s: &QSeries<BigRational>) -> Emission {
    let coeffs: Vec<(usize, String)> = s.coefficients().iter().map(rational_string).enumerate().collect();
    series(s.denom(), coeffs, "exact".into())
}

/// All coefficients reduced to the smallest precision present.
pub fn padic_series(s: &QSeries<PAdicApprox>) -> Emission {
    let cs = s.coefficients();
    let p = cs[0].p();
    let k = cs.iter().map(|c| c.precision()).min().unwrap_or(0);
    let coeffs = cs.iter().map(|c| c.reduce(k).residue().to_string()).enumerate().collect();
    series(s.denom(), coeffs, format!("{p}^{k}"))
}

fn series(denom: u64, coeffs: Vec<(usize, String)>, modulus: String) -> Emission {
    let json = json!({
        "denom": denom.to_string(),
        "modulus": modulus,
        "coeffs": coeffs.iter().map(|(m, v)| json!([m.to_string(), v])).collect::<Vec<_>>(),
    });
    let rows = coeffs.into_iter().map(|(m, v)| vec![m.to_string(), v, modulus.clone()]).collect();
    Emission { json, header: header(&["m", "value", "modulus"]), rows, verdict: None }
}

/// `(coset, value)` pairs.
pub fn table(name: &str, level: u32, modulus: String, values: Vec<(u64, String)>) -> Emission {
    let json = json!({
        "measure": name,
        "level": level.to_string(),
        "modulus": modulus,
        "values": values.iter().map(|(a, v)| json!([a.to_string(), v])).collect::<Vec<_>>(),
    });
    let rows = values
        .into_iter()
        .map(|(a, v)| vec![name.to_string(), level.to_string(), a.to_string(), v, modulus.clone()])
        .collect();
    Emission { json, header: header(&["measure", "level", "coset", "value", "modulus"]), rows, verdict: None }
}

/// Flat key/value output.
pub fn record(fields: Vec<(&str, Value)>) -> Emission {
    let rows = fields
        .iter()
        .map(|(k, v)| vec![k.to_string(), v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string())])
        .collect();
    let json = Value::Object(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect());
    Emission { json, header: header(&["key", "value"]), rows, verdict: None }
}

const PROMOTED: [&str; 4] = ["lhs", "rhs", "rel_error", "tolerance"];

fn report_json(r: &Report) -> Value {
    let strings = |m: &std::collections::BTreeMap<String, String>| -> Map<String, Value> {
        m.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect()
    };
    let mut obj = Map::new();
    obj.insert("check".into(), Value::String(r.check.clone()));
    obj.insert("params".into(), Value::Object(strings(&r.params)));
    obj.insert("status".into(), Value::String(r.status.to_string()));
    obj.insert("pass".into(), Value::Bool(r.passed()));
    obj.insert("failures".into(), Value::String(r.failures.to_string()));
    obj.insert("witnesses".into(), json!(r.witnesses));
    obj.insert("values".into(), Value::Object(strings(&r.values)));
    for key in PROMOTED {
        if let Some(v) = r.values.get(key) {
            obj.insert(key.into(), Value::String(v.clone()));
        }
    }
    Value::Object(obj)
}

pub fn reports(mut list: Vec<Report>) -> Emission {
    sort_reports(&mut list);
    let pass = list.iter().all(|r| r.status != bhlab_core::report::Status::Fail);
    let json = json!({
        "pass": pass,
        "count": list.len().to_string(),
        "reports": list.iter().map(report_json).collect::<Vec<_>>(),
    });
    let rows = list
        .iter()
        .map(|r| {
            let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let mut row = vec![
                r.check.clone(),
                params.join(";"),
                r.status.to_string(),
                r.witnesses.first().cloned().unwrap_or_default(),
            ];
            row.extend(PROMOTED.iter().map(|k| r.values.get(*k).cloned().unwrap_or_default()));
            row
        })
        .collect();
    Emission {
        json,
        header: header(&["check", "params", "status", "witness", "lhs", "rhs", "rel_error", "tolerance"]),
        rows,
        verdict: Some(pass),
    }
}
