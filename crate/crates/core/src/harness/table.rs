use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Significant digits written for floating-point CSV fields.
pub const SIG_DIGITS: usize = 12;

/// One CSV row: a scheme at one sweep point, in display scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub scheme: String,
    /// Grade count, or `"ns"` for numerical scoring.
    #[serde(rename = "T")]
    pub grades: String,
    pub alpha_m: f64,
    pub alpha_d: f64,
    pub r: u32,
    pub mu: Option<f64>,
    pub sigma: Option<f64>,
    pub gamma_noise: Option<f64>,
    pub n: usize,
    pub seed: u64,
    pub perf_mean: f64,
    pub perf_ci_lo: f64,
    pub perf_ci_hi: f64,
}

pub const HEADER: [&str; 13] = [
    "scheme",
    "T",
    "alpha_m",
    "alpha_d",
    "r",
    "mu",
    "sigma",
    "gamma_noise",
    "n",
    "seed",
    "perf_mean",
    "perf_ci_lo",
    "perf_ci_hi",
];

/// Formats `x` with [`SIG_DIGITS`] significant digits, plain notation where
/// reasonable and trailing zeros dropped.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (_, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-7..16).contains(&exp) {
        return sci;
    }
    let rounded: f64 = sci.parse().expect("round-trips");
    let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
    let mut s = format!("{rounded:.decimals$}");
    if s.contains('.') {
        s.truncate(s.trim_end_matches('0').len());
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

fn opt(x: Option<f64>) -> String {
    x.map(format_sig).unwrap_or_default()
}

pub fn write_rows<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for row in rows {
        w.write_record([
            row.scheme.clone(),
            row.grades.clone(),
            format_sig(row.alpha_m),
            format_sig(row.alpha_d),
            row.r.to_string(),
            opt(row.mu),
            opt(row.sigma),
            opt(row.gamma_noise),
            row.n.to_string(),
            row.seed.to_string(),
            format_sig(row.perf_mean),
            format_sig(row.perf_ci_lo),
            format_sig(row.perf_ci_hi),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut buf = Vec::new();
    write_rows(&mut buf, rows).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

pub fn read_rows<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers()?.clone();
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(Error::parse(
            "sweep csv",
            &header.iter().collect::<Vec<_>>().join(","),
            "unexpected header",
        ));
    }
    rd.deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}
