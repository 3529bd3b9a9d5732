//! Output records and their CSV / JSON encodings.

use serde::Serialize;
use strongmono::monogamy::Decomposition;

pub const CSV_HEADER: &str = "N,M,r_bar,r_db,residual,fidelity";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KTerm {
    #[serde(rename = "K")]
    pub k: usize,
    /// Exact multiplicity, as a decimal string.
    pub multiplicity: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRecord {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub r_bar: f64,
    pub r_db: f64,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<f64>,
    #[serde(rename = "per_K_terms", skip_serializing_if = "Option::is_none")]
    pub per_k_terms: Option<Vec<KTerm>>,
}

impl OutputRecord {
    pub fn new(n: usize, m: usize, r_bar: f64, residual: f64) -> anyhow::Result<Self> {
        let fidelity = if m == 0 {
            Some(strongmono::teleportation::fidelity_from_squeezing(n, r_bar)?)
        } else {
            None
        };
        Ok(OutputRecord {
            n,
            m,
            r_bar,
            r_db: strongmono::squeezing_to_db(r_bar),
            residual,
            fidelity,
            per_k_terms: None,
        })
    }

    pub fn with_terms(mut self, d: &Decomposition) -> Self {
        self.per_k_terms = Some(
            d.terms
                .iter()
                .map(|(&k, t)| KTerm {
                    k,
                    multiplicity: t.multiplicity.to_string(),
                    value: t.value,
                })
                .collect(),
        );
        self
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.n,
            self.m,
            fmt_g(self.r_bar, 12),
            fmt_g(self.r_db, 12),
            fmt_g(self.residual, 12),
            self.fidelity.map(|f| fmt_g(f, 12)).unwrap_or_default()
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn render(records: &[OutputRecord], format: Format) -> anyhow::Result<String> {
    Ok(match format {
        Format::Csv => {
            let mut s = String::from(CSV_HEADER);
            s.push('\n');
            for r in records {
                s.push_str(&r.csv_row());
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(records)?;
            s.push('\n');
            s
        }
    })
}

/// C-style `%.{digits}g`.
pub fn fmt_g(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let p = digits.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
