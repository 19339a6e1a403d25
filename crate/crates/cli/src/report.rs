//! Benchmark and sweep rows with CSV/JSON emission.
//!
//! Floats are printed with 17 significant digits so that parsing an emitted
//! CSV reproduces the values exactly.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Standard Newton iteration (one inner step per factorization).
    Newton,
    /// Frozen-derivative iteration (a block of inner steps per factorization).
    Modified,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Newton => "newton",
            Method::Modified => "modified",
        }
    }

    fn parse(s: &str) -> Result<Self, String> {
        match s {
            "newton" => Ok(Method::Newton),
            "modified" => Ok(Method::Modified),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

/// One benchmark run: a (size, method) pair.
///
/// `outer_iter` equals the trace's factorization count, the number of
/// Frechet-derivative evaluations. Failures are recorded in-row via
/// `error`; numeric fields then hold whatever partial data the run
/// produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub method: Method,
    pub time_s: f64,
    pub nres: f64,
    pub outer_iter: usize,
    pub inner_total: usize,
    pub condition9: bool,
    pub error: Option<String>,
}

pub const BENCH_CSV_HEADER: &str = "n,method,time_s,nres,outer_iter,inner_total,condition9,error";

/// 17 significant digits: enough to reproduce any f64 exactly on re-parse.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn bench_rows_to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(BENCH_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let error = r
            .error
            .as_deref()
            .unwrap_or("")
            .replace([',', '\n'], ";");
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.n,
            r.method.as_str(),
            fmt_f64(r.time_s),
            fmt_f64(r.nres),
            r.outer_iter,
            r.inner_total,
            r.condition9,
            error
        ));
    }
    out
}

/// Parses a CSV emitted by [`bench_rows_to_csv`].
pub fn bench_rows_from_csv(text: &str) -> Result<Vec<BenchRow>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == BENCH_CSV_HEADER => {}
        other => return Err(format!("unexpected header {other:?}")),
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return Err(format!("row {i}: expected 8 fields, got {}", f.len()));
        }
        let num = |s: &str, what: &str| -> Result<f64, String> {
            s.parse().map_err(|_| format!("row {i}: bad {what} `{s}`"))
        };
        let int = |s: &str, what: &str| -> Result<usize, String> {
            s.parse().map_err(|_| format!("row {i}: bad {what} `{s}`"))
        };
        rows.push(BenchRow {
            n: int(f[0], "n")?,
            method: Method::parse(f[1])?,
            time_s: num(f[2], "time_s")?,
            nres: num(f[3], "nres")?,
            outer_iter: int(f[4], "outer_iter")?,
            inner_total: int(f[5], "inner_total")?,
            condition9: f[6]
                .parse()
                .map_err(|_| format!("row {i}: bad condition9 `{}`", f[6]))?,
            error: if f[7].is_empty() {
                None
            } else {
                Some(f[7].to_string())
            },
        });
    }
    Ok(rows)
}

/// One lambda-sweep result row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub x_inf_norm: f64,
    pub x_min: f64,
    pub outer_iter: usize,
}

pub const SWEEP_CSV_HEADER: &str = "lambda,x_inf_norm,x_min,outer_iter";

pub fn sweep_rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(r.lambda),
            fmt_f64(r.x_inf_norm),
            fmt_f64(r.x_min),
            r.outer_iter
        ));
    }
    out
}
