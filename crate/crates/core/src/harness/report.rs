//! Report emission: RMSE CSV, timing CSV, and SVG line charts.

use super::config::EstimatorKind;
use super::montecarlo::{BiasKind, MonteCarloReport, RmseEntry};
use super::svg::LineChart;
use super::HarnessError;
use std::path::{Path, PathBuf};

/// Output flavors for [`emit_report`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Svg,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Writes `rmse.csv`: one row per (estimator, noise point, sensor, bias
/// component). Floats are printed in shortest round-trip form, so parsing
/// the file back recovers the in-memory values exactly.
fn write_rmse_csv(report: &MonteCarloReport, path: &Path) -> Result<(), HarnessError> {
    let file = std::fs::File::create(path).map_err(io_err(path))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record([
        "estimator",
        "noise_sigma_rho_m",
        "noise_sigma_phi_deg",
        "q",
        "sensor_id",
        "bias_kind",
        "rmse",
        "excluded_runs",
    ])?;
    for e in &report.entries {
        w.write_record(&[
            e.estimator.name().to_string(),
            format!("{}", e.sigma_rho_m),
            format!("{}", e.sigma_phi_deg),
            format!("{}", e.q_m2s3),
            format!("{}", e.sensor_id),
            e.bias_kind.name().to_string(),
            format!("{}", e.rmse),
            format!("{}", e.excluded_runs),
        ])?;
    }
    w.flush().map_err(|e| HarnessError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    Ok(())
}

/// Writes `timing.csv`: mean wall-clock seconds and iterations per
/// estimator and noise point.
fn write_timing_csv(report: &MonteCarloReport, path: &Path) -> Result<(), HarnessError> {
    let file = std::fs::File::create(path).map_err(io_err(path))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record([
        "estimator",
        "noise_sigma_rho_m",
        "noise_sigma_phi_deg",
        "q",
        "mean_time_s",
        "mean_iterations",
    ])?;
    for t in &report.timings {
        w.write_record(&[
            t.estimator.name().to_string(),
            format!("{}", t.sigma_rho_m),
            format!("{}", t.sigma_phi_deg),
            format!("{}", t.q_m2s3),
            format!("{}", t.mean_time_s),
            format!("{}", t.mean_iterations),
        ])?;
    }
    w.flush().map_err(|e| HarnessError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    Ok(())
}

/// Parses a `rmse.csv` file back into entries (test/verification aid).
pub fn parse_rmse_csv<R: std::io::Read>(reader: R) -> Result<Vec<RmseEntry>, HarnessError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let bad = |what: &str| HarnessError::Validation(format!("rmse.csv: bad {what}: {rec:?}"));
        let estimator = match &rec[0] {
            "bcd-sdr" => EstimatorKind::BcdSdr,
            "bcd-gp" => EstimatorKind::BcdGp,
            "two-stage" => EstimatorKind::TwoStage,
            _ => return Err(bad("estimator")),
        };
        let bias_kind = match &rec[5] {
            "range" => BiasKind::Range,
            "azimuth" => BiasKind::Azimuth,
            _ => return Err(bad("bias_kind")),
        };
        out.push(RmseEntry {
            estimator,
            sigma_rho_m: rec[1].parse().map_err(|_| bad("sigma_rho"))?,
            sigma_phi_deg: rec[2].parse().map_err(|_| bad("sigma_phi"))?,
            q_m2s3: rec[3].parse().map_err(|_| bad("q"))?,
            sensor_id: rec[4].parse().map_err(|_| bad("sensor_id"))?,
            bias_kind,
            rmse: rec[6].parse().map_err(|_| bad("rmse"))?,
            excluded_runs: rec[7].parse().map_err(|_| bad("excluded_runs"))?,
        });
    }
    Ok(out)
}

/// One chart per (sensor, bias component): RMSE against the noise grid,
/// one line per estimator.
fn write_svg_charts(report: &MonteCarloReport, dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    let mut files = Vec::new();
    let mut sensors: Vec<usize> = report.entries.iter().map(|e| e.sensor_id).collect();
    sensors.sort_unstable();
    sensors.dedup();
    let mut estimators: Vec<EstimatorKind> = Vec::new();
    for e in &report.entries {
        if !estimators.contains(&e.estimator) {
            estimators.push(e.estimator);
        }
    }
    // The noise grid, in first-appearance order.
    let mut grid: Vec<(f64, f64, f64)> = Vec::new();
    for e in &report.entries {
        let key = (e.sigma_rho_m, e.sigma_phi_deg, e.q_m2s3);
        if !grid.contains(&key) {
            grid.push(key);
        }
    }

    for sensor in &sensors {
        for (kind, unit) in [(BiasKind::Range, "m"), (BiasKind::Azimuth, "deg")] {
            let mut chart = LineChart::new(
                format!("sensor {sensor}: {} bias RMSE", kind.name()),
                "noise point (σρ m / σφ° / q)".to_string(),
                format!("RMSE [{unit}]"),
            );
            for (i, (sr, sp, q)) in grid.iter().enumerate() {
                chart.add_x_tick(i as f64, format!("{sr}/{sp}/{q}"));
            }
            for est in &estimators {
                let points: Vec<(f64, f64)> = grid
                    .iter()
                    .enumerate()
                    .filter_map(|(i, (sr, sp, q))| {
                        report
                            .entries
                            .iter()
                            .find(|e| {
                                e.estimator == *est
                                    && e.sensor_id == *sensor
                                    && e.bias_kind == kind
                                    && e.sigma_rho_m == *sr
                                    && e.sigma_phi_deg == *sp
                                    && e.q_m2s3 == *q
                            })
                            .map(|e| (i as f64, e.rmse))
                    })
                    .collect();
                if !points.is_empty() {
                    chart.add_series(est.name().to_string(), points);
                }
            }
            let path = dir.join(format!("rmse_sensor{sensor}_{}.svg", kind.name()));
            std::fs::write(&path, chart.render()).map_err(io_err(&path))?;
            files.push(path);
        }
    }
    Ok(files)
}

/// Emits the requested artifacts into `out_dir` and returns the paths
/// written. CSV produces `rmse.csv` and `timing.csv`; SVG produces one
/// chart per sensor and bias component.
pub fn emit_report(
    report: &MonteCarloReport,
    out_dir: &Path,
    formats: &[ReportFormat],
) -> Result<Vec<PathBuf>, HarnessError> {
    if report.entries.is_empty() {
        return Err(HarnessError::Validation("empty report".into()));
    }
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let mut files = Vec::new();
    for format in formats {
        match format {
            ReportFormat::Csv => {
                let rmse_path = out_dir.join("rmse.csv");
                write_rmse_csv(report, &rmse_path)?;
                files.push(rmse_path);
                let timing_path = out_dir.join("timing.csv");
                write_timing_csv(report, &timing_path)?;
                files.push(timing_path);
            }
            ReportFormat::Svg => {
                files.extend(write_svg_charts(report, out_dir)?);
            }
        }
    }
    Ok(files)
}
