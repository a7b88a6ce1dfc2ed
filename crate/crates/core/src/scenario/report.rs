//! Comparison summaries, CSV output and gnuplot scripts.

use std::fmt::Write as _;
use std::path::Path;

use crate::delay::DelayDemo;
use crate::engine::{trapezoid, Trajectory};
use crate::error::{Error, Result};

/// Noise deadband for counting local maxima, mg/min.
pub const PEAK_DEADBAND: f64 = 1e-3;

/// One `R_A` series of a comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub model: String,
    /// Meal carbohydrate, mg.
    pub carbs: f64,
    pub body_weight: f64,
    /// `R_A` in mg/min.
    pub values: Vec<f64>,
    /// `(time, R_A)` at the largest sample.
    pub peak: (f64, f64),
    pub local_maxima: usize,
    /// `∫ R_A dt`, mg.
    pub integral: f64,
}

impl Series {
    pub fn from_trajectory(
        name: impl Into<String>,
        carbs: f64,
        body_weight: f64,
        traj: &Trajectory,
    ) -> Self {
        let peak = traj.peak().map(|(r, t)| (t, r)).unwrap_or((0.0, 0.0));
        Self {
            name: name.into(),
            model: traj.model.clone(),
            carbs,
            body_weight,
            local_maxima: count_local_maxima(&traj.outputs, PEAK_DEADBAND),
            integral: trapezoid(&traj.times, &traj.outputs),
            values: traj.outputs.clone(),
            peak,
        }
    }

    pub fn per_kg(&self) -> Vec<f64> {
        self.values.iter().map(|v| v / self.body_weight).collect()
    }
}

/// Several series on a shared time grid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComparisonReport {
    pub times: Vec<f64>,
    pub series: Vec<Series>,
    /// Write mg/(kg·min) instead of mg/min.
    pub per_kg: bool,
}

impl ComparisonReport {
    pub fn new(times: Vec<f64>, per_kg: bool) -> Self {
        Self {
            times,
            series: Vec::new(),
            per_kg,
        }
    }

    pub fn push(&mut self, series: Series) -> Result<()> {
        if series.values.len() != self.times.len() {
            return Err(Error::DimensionMismatch {
                what: "series length",
                expected: self.times.len(),
                found: series.values.len(),
            });
        }
        self.series.push(series);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }

    /// Plain-text summary table.
    pub fn summary(&self) -> String {
        let unit = if self.per_kg { "mg/kg/min" } else { "mg/min" };
        let mut out = format!(
            "{:<28} {:>8} {:>10} {:>14} {:>8} {:>14}\n",
            "series",
            "D [g]",
            "t_peak",
            format!("peak [{unit}]"),
            "maxima",
            "integral [g]"
        );
        for s in &self.series {
            let peak = if self.per_kg {
                s.peak.1 / s.body_weight
            } else {
                s.peak.1
            };
            let _ = writeln!(
                out,
                "{:<28} {:>8.1} {:>10.1} {:>14.4} {:>8} {:>14.4}",
                s.name,
                s.carbs / 1000.0,
                s.peak.0,
                peak,
                s.local_maxima,
                s.integral / 1000.0
            );
        }
        let _ = write!(
            out,
            "local maxima counted with a {PEAK_DEADBAND:e} mg/min deadband"
        );
        out
    }
}

/// Number of local maxima of `y`.
///
/// A maximum is counted once the signal has risen by more than `deadband`
/// and then fallen by more than `deadband` from its highest point.
pub fn count_local_maxima(y: &[f64], deadband: f64) -> usize {
    let Some(&first) = y.first() else { return 0 };
    let (mut trend, mut extreme, mut count) = (0i8, first, 0);
    for &v in &y[1..] {
        match trend {
            1 => {
                if v > extreme {
                    extreme = v;
                } else if v < extreme - deadband {
                    count += 1;
                    trend = -1;
                    extreme = v;
                }
            }
            -1 => {
                if v < extreme {
                    extreme = v;
                } else if v > extreme + deadband {
                    trend = 1;
                    extreme = v;
                }
            }
            _ => {
                if v > extreme + deadband {
                    trend = 1;
                    extreme = v;
                } else if v < extreme - deadband {
                    trend = -1;
                    extreme = v;
                }
            }
        }
    }
    count
}

/// 17 significant digits, round-trips exactly.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_columns(
    path: &Path,
    header: &[String],
    times: &[f64],
    columns: &[Vec<f64>],
) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?;
    w.write_record(header)?;
    for (i, t) in times.iter().enumerate() {
        let mut row = Vec::with_capacity(columns.len() + 1);
        row.push(format_value(*t));
        row.extend(columns.iter().map(|c| format_value(c[i])));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// `time_min` followed by `R_A` and every state.
pub fn write_trajectory_csv(traj: &Trajectory, path: &Path) -> Result<()> {
    let mut header = vec!["time_min".to_string(), "r_a".to_string()];
    let mut columns = vec![traj.outputs.clone()];
    if let Some(pk) = &traj.per_kg_outputs {
        header.push("r_a_per_kg".into());
        columns.push(pk.clone());
    }
    for (j, label) in traj.labels.iter().enumerate() {
        header.push(label.clone());
        columns.push(traj.states.iter().map(|x| x[j]).collect());
    }
    write_columns(path, &header, &traj.times, &columns)
}

/// `time_min` followed by one column per series.
pub fn write_report_csv(report: &ComparisonReport, path: &Path) -> Result<()> {
    let mut header = vec!["time_min".to_string()];
    header.extend(report.series.iter().map(|s| s.name.clone()));
    let columns: Vec<Vec<f64>> = report
        .series
        .iter()
        .map(|s| {
            if report.per_kg {
                s.per_kg()
            } else {
                s.values.clone()
            }
        })
        .collect();
    write_columns(path, &header, &report.times, &columns)
}

/// Peak, maxima count and integral per series.
pub fn write_summary_csv(report: &ComparisonReport, path: &Path) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?;
    w.write_record([
        "series",
        "model",
        "carbs_mg",
        "body_weight_kg",
        "peak_time_min",
        "peak_r_a",
        "local_maxima",
        "integral_mg",
    ])?;
    for s in &report.series {
        w.write_record([
            s.name.clone(),
            s.model.clone(),
            format_value(s.carbs),
            format_value(s.body_weight),
            format_value(s.peak.0),
            format_value(s.peak.1),
            s.local_maxima.to_string(),
            format_value(s.integral),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `time_min`, `input`, `exact`, then one column per approximation.
pub fn write_delay_demo_csv(demo: &DelayDemo, path: &Path) -> Result<()> {
    let mut header = vec!["time_min".to_string(), "input".into(), "exact".into()];
    let mut columns = vec![demo.input.clone(), demo.exact.clone()];
    for (kind, y) in &demo.approximations {
        header.push(kind.name().to_string());
        columns.push(y.clone());
    }
    write_columns(path, &header, &demo.times, &columns)
}

/// A gnuplot script plotting every column of `csv_name` (a path relative
/// to the script) against time.
pub fn plot_script(report: &ComparisonReport, csv_name: &str, png_name: &str) -> String {
    let ylabel = if report.per_kg {
        "R_A [mg/(kg min)]"
    } else {
        "R_A [mg/min]"
    };
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set terminal pngcairo size 1200,800");
    let _ = writeln!(s, "set output '{png_name}'");
    let _ = writeln!(s, "set xlabel 'time [min]'");
    let _ = writeln!(s, "set ylabel '{ylabel}'");
    let _ = writeln!(s, "set key outside right");
    let _ = writeln!(s, "set grid");
    if report.series.is_empty() {
        let _ = writeln!(s, "# no series");
        return s;
    }
    let plots: Vec<String> = report
        .series
        .iter()
        .enumerate()
        .map(|(i, series)| {
            format!(
                "'{csv_name}' using 1:{} skip 1 with lines title '{}'",
                i + 2,
                series.name.replace('_', "\\_")
            )
        })
        .collect();
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}

pub fn emit_plot_script(report: &ComparisonReport, path: &Path, csv_name: &str) -> Result<()> {
    let png = path.with_extension("png");
    let png_name = png
        .file_name()
        .and_then(|n| n.to_str())
        .unwrap_or("plot.png");
    std::fs::write(path, plot_script(report, csv_name, png_name))?;
    Ok(())
}
