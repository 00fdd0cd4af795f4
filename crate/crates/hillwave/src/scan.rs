//! Parameter-space scans over `(g, kappa)` slices, machine-readable output
//! and the winding quantizer.
//!
//! Scans dispatch points to a worker pool and merge results in row-major
//! `g`-then-`kappa` order, so identical configurations give byte-identical
//! CSV regardless of scheduling. Floats are printed with 17 significant
//! digits; `NaN` is never emitted (empty cell instead).

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{self, ClassifyOptions, Model, StabilityReport};
use crate::waves::{self, WaveParams, WaveProfile};
use crate::{Error, Result};

/// Inclusive linear range with a fixed number of samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RangeSpec {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl RangeSpec {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Result<Self> {
        if steps == 0 || !lo.is_finite() || !hi.is_finite() || (steps > 1 && hi < lo) {
            return Err(Error::InvalidArgument(format!(
                "bad range {lo}:{hi}:{steps} (want lo <= hi, steps >= 1)"
            )));
        }
        Ok(Self { lo, hi, steps })
    }

    /// Parses `lo:hi:steps`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidArgument(format!(
                "range must be lo:hi:steps, got {s:?}"
            )));
        }
        let lo = parts[0].parse().map_err(|_| bad_num(parts[0]))?;
        let hi = parts[1].parse().map_err(|_| bad_num(parts[1]))?;
        let steps = parts[2]
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad step count {:?}", parts[2])))?;
        Self::new(lo, hi, steps)
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        let d = (self.hi - self.lo) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.lo + d * i as f64).collect()
    }
}

fn bad_num(s: &str) -> Error {
    Error::InvalidArgument(format!("bad number {s:?}"))
}

/// Output format of a scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// A full scan request.
#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub model: Model,
    /// Slice level; required for [`Model::Dnls`], ignored for the quintic
    /// family (where `mu` is pinned by `c = 0`).
    pub mu: Option<f64>,
    pub g_range: RangeSpec,
    pub kappa_range: RangeSpec,
    pub n_collocation: usize,
    pub with_spectrum: bool,
    pub format: OutputFormat,
    /// Worker threads; `None` uses the available parallelism.
    pub jobs: Option<usize>,
}

impl ScanConfig {
    fn validate(&self) -> Result<()> {
        if self.model == Model::Dnls && self.mu.is_none() {
            return Err(Error::InvalidArgument("dnls scans need --mu".into()));
        }
        Ok(())
    }
}

/// Row status: classified, outside the admissible region, or failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "detail")]
pub enum RowStatus {
    Ok,
    Skipped(String),
    Error(String),
}

impl RowStatus {
    fn as_cell(&self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Skipped(_) => "skipped",
            RowStatus::Error(_) => "error",
        }
    }
}

/// One grid point of a scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub g: f64,
    pub kappa: f64,
    pub mu: f64,
    pub status: RowStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<StabilityReport>,
}

/// Runs the scan; rows come back in row-major `g`-then-`kappa` order.
pub fn run_scan(cfg: &ScanConfig) -> Result<Vec<ScanRow>> {
    cfg.validate()?;
    let g_values = cfg.g_range.values();
    let kappa_values = cfg.kappa_range.values();
    let mut points = Vec::with_capacity(g_values.len() * kappa_values.len());
    for &g in &g_values {
        for &kappa in &kappa_values {
            points.push((g, kappa));
        }
    }
    let opts = ClassifyOptions {
        n_collocation: cfg.n_collocation,
        with_spectrum: cfg.with_spectrum,
        ..Default::default()
    };

    let eval = |&(g, kappa): &(f64, f64)| -> ScanRow {
        let mu = match cfg.model {
            Model::Dnls => cfg.mu.expect("validated"),
            Model::QuinticNls => waves::quintic_mu(g, kappa),
        };
        match waves::validate(g, kappa, mu) {
            waves::Admissibility::Rejected(v) => {
                return ScanRow { g, kappa, mu, status: RowStatus::Skipped(v.to_string()), report: None }
            }
            waves::Admissibility::Admissible { .. } => {}
        }
        match classify::classify(cfg.model, g, kappa, Some(mu), &opts) {
            Ok(report) => ScanRow { g, kappa, mu, status: RowStatus::Ok, report: Some(report) },
            Err(e) => ScanRow { g, kappa, mu, status: RowStatus::Error(e.to_string()), report: None },
        }
    };

    let rows = match cfg.jobs {
        Some(1) => points.iter().map(eval).collect(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?
            .install(|| points.par_iter().map(eval).collect()),
        None => points.par_iter().map(eval).collect(),
    };
    Ok(rows)
}

/// CSV header, fixed column order.
pub const CSV_COLUMNS: &[&str] = &[
    "g", "kappa", "mu", "status", "c", "omega", "T", "a", "mass", "inv_sq", "pairing", "denom",
    "kernel_margin", "d11", "d12_num", "d22_num", "detD", "morse_L", "morse_D", "k_ham",
    "max_re_lambda", "winding_dist", "verdict",
];

/// 17-significant-digit float cell; empty for non-finite values.
fn cell(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        String::new()
    }
}

/// Writes rows as deterministic CSV.
pub fn write_csv<W: Write>(mut out: W, rows: &[ScanRow]) -> Result<()> {
    writeln!(out, "{}", CSV_COLUMNS.join(","))?;
    for row in rows {
        let mut cells: Vec<String> = vec![cell(row.g), cell(row.kappa), cell(row.mu)];
        cells.push(row.status.as_cell().to_string());
        match &row.report {
            Some(r) => {
                cells.extend([
                    cell(r.scalars.c),
                    cell(r.scalars.omega),
                    cell(r.scalars.half_period),
                    cell(r.scalars.a),
                    cell(r.closed.mass),
                    cell(r.closed.inv_sq),
                    cell(r.closed.pairing),
                    cell(r.closed.denom),
                    cell(r.closed.kernel_margin),
                    cell(r.closed.d11),
                    cell(r.d12_num),
                    cell(r.d22_num),
                    cell(r.det_d),
                    r.morse_l.to_string(),
                    r.morse_d.to_string(),
                    r.k_ham.to_string(),
                    r.max_re_lambda.map_or_else(String::new, cell),
                    cell(r.winding_distance),
                    r.verdict.to_string(),
                ]);
            }
            None => cells.extend(std::iter::repeat_n(String::new(), CSV_COLUMNS.len() - 4)),
        }
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct JsonScan<'a> {
    schema_version: u32,
    rows: &'a [ScanRow],
}

/// Writes rows as a JSON document with a `schema_version` field.
pub fn write_json<W: Write>(mut out: W, rows: &[ScanRow]) -> Result<()> {
    let doc = JsonScan { schema_version: 1, rows };
    serde_json::to_writer_pretty(&mut out, &doc)
        .map_err(|e| Error::InvalidArgument(format!("json encoding: {e}")))?;
    writeln!(out)?;
    Ok(())
}

/// Result of the winding quantizer.
#[derive(Debug, Clone, Serialize)]
pub struct QuantizeResult {
    pub g: f64,
    pub kappa: f64,
    pub mu: f64,
    pub branch: i64,
    /// `W = c T - (3/4) ||phi||^2` at the returned point.
    pub winding_value: f64,
    /// `|W - 2π branch|` at the returned point.
    pub residual: f64,
}

/// Finds `g` at fixed `(kappa, mu)` with `W(g) = 2π branch`, i.e. a wave
/// whose gauged phase is genuinely `2T`-periodic on the requested branch.
///
/// Scans the admissible `g`-interval for a sign change and bisects it to
/// `|W - 2π branch| <= 1e-9`; errors when the target level is not crossed.
pub fn quantize(kappa: f64, mu: f64, branch: i64) -> Result<QuantizeResult> {
    let target = std::f64::consts::TAU * branch as f64;
    let g_cap = waves::g_limit(mu).min(40.0);
    let f = |g: f64| -> Result<f64> {
        let p = WaveParams::new(g, kappa, mu)?;
        Ok(WaveProfile::new(p)?.phase_winding().value - target)
    };

    // admissible samples along g
    let samples = 400;
    let mut prev: Option<(f64, f64)> = None;
    let mut bracket = None;
    for i in 1..=samples {
        let g = g_cap * i as f64 / (samples + 1) as f64;
        let Ok(v) = f(g) else {
            prev = None;
            continue;
        };
        if let Some((g0, v0)) = prev {
            if v0 == 0.0 || v0.signum() != v.signum() {
                bracket = Some((g0, g));
                break;
            }
        }
        prev = Some((g, v));
    }
    let (lo, hi) = bracket.ok_or_else(|| {
        Error::NoRoot(format!(
            "winding never crosses 2π * {branch} on the admissible g-interval at (kappa, mu) = ({kappa}, {mu})"
        ))
    })?;
    let g = classify::bisect_zero(f, lo, hi, 1e-15)?;
    let p = WaveParams::new(g, kappa, mu)?;
    let winding = WaveProfile::new(p)?.phase_winding();
    let residual = (winding.value - target).abs();
    if residual > 1e-9 {
        return Err(Error::NoRoot(format!(
            "bisection stalled: |W - 2π {branch}| = {residual:.3e}"
        )));
    }
    Ok(QuantizeResult { g, kappa, mu, branch, winding_value: winding.value, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        let r = RangeSpec::parse("0.5:2.5:5").unwrap();
        assert_eq!(r.values(), vec![0.5, 1.0, 1.5, 2.0, 2.5]);
        assert_eq!(RangeSpec::parse("1:1:1").unwrap().values(), vec![1.0]);
        assert!(RangeSpec::parse("1:2").is_err());
        assert!(RangeSpec::parse("2:1:5").is_err());
        assert!(RangeSpec::parse("a:1:5").is_err());
    }

    #[test]
    fn scan_marks_inadmissible_points_skipped() {
        let cfg = ScanConfig {
            model: Model::Dnls,
            mu: Some(1.0),
            g_range: RangeSpec::new(2.0, 3.2, 3).unwrap(), // 3.2 > sqrt(8)
            kappa_range: RangeSpec::new(0.4, 0.4, 1).unwrap(),
            n_collocation: 64,
            with_spectrum: false,
            format: OutputFormat::Csv,
            jobs: Some(1),
        };
        let rows = run_scan(&cfg).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].status, RowStatus::Ok);
        assert!(matches!(rows[2].status, RowStatus::Skipped(_)));
        assert!(rows[2].report.is_none());
    }

    #[test]
    fn csv_rows_deterministic_and_clean() {
        let cfg = ScanConfig {
            model: Model::Dnls,
            mu: Some(1.0),
            g_range: RangeSpec::new(0.8, 2.9, 3).unwrap(),
            kappa_range: RangeSpec::new(0.3, 0.5, 2).unwrap(),
            n_collocation: 64,
            with_spectrum: false,
            format: OutputFormat::Csv,
            jobs: None,
        };
        let rows1 = run_scan(&cfg).unwrap();
        let rows2 = run_scan(&cfg).unwrap();
        let mut buf1 = Vec::new();
        let mut buf2 = Vec::new();
        write_csv(&mut buf1, &rows1).unwrap();
        write_csv(&mut buf2, &rows2).unwrap();
        assert_eq!(buf1, buf2, "scan output must be byte-identical");

        let text = String::from_utf8(buf1).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_COLUMNS.join(","));
        assert_eq!(lines.len(), 1 + 6);
        assert!(!text.contains("NaN") && !text.contains("nan"));
        // skipped rows carry no numeric stability fields
        for line in &lines[1..] {
            if line.contains(",skipped,") {
                let after: Vec<&str> = line.split(",skipped,").collect();
                assert!(after[1].chars().all(|ch| ch == ','), "skipped row not empty: {line}");
            }
        }
    }

    #[test]
    fn json_has_schema_version() {
        let cfg = ScanConfig {
            model: Model::QuinticNls,
            mu: None,
            g_range: RangeSpec::new(1.0, 1.0, 1).unwrap(),
            kappa_range: RangeSpec::new(0.4, 0.4, 1).unwrap(),
            n_collocation: 64,
            with_spectrum: false,
            format: OutputFormat::Json,
            jobs: Some(1),
        };
        let rows = run_scan(&cfg).unwrap();
        let mut buf = Vec::new();
        write_json(&mut buf, &rows).unwrap();
        let doc: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(doc["schema_version"], 1);
        assert_eq!(doc["rows"][0]["status"]["kind"], "ok");
    }

    #[test]
    fn quantize_lands_on_branch() {
        // W at (kappa, mu) = (0.5, 1) spans a range crossing -2π.
        let q = quantize(0.5, 1.0, -1).unwrap();
        assert!(q.residual <= 1e-9, "residual {:.3e}", q.residual);
        // returned point re-validates as admissible
        let p = WaveParams::new(q.g, q.kappa, q.mu).unwrap();
        let w = WaveProfile::new(p).unwrap().phase_winding();
        assert!(w.distance <= 1e-9);
        assert_eq!(w.nearest_branch, -1);
    }

    #[test]
    fn quantize_errors_off_range() {
        match quantize(0.5, 1.0, 50) {
            Err(Error::NoRoot(_)) => {}
            other => panic!("expected no-root error, got {other:?}"),
        }
    }
}
