//! CSV and text renderings of sweeps, trajectories and bound reports.
//!
//! Floats are written as `{:.16e}`, 17 significant digits, which round-trips
//! every `f64` exactly.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use qsl_core::bounds::BoundReport;
use qsl_core::dynamics::Trajectory;

use crate::config::SweepConfig;
use crate::sweep::SweepRow;
use crate::{HarnessError, Result};

pub const CSV_HEADER: &str =
    "theta,gamma,regime,t_opt,tqsl_closed,tqsl_traj,tmin_a,tmin_b,tmin_c1,tmin_c2,fidelity,pass_a,pass_b,pass_c1,pass_c2";

pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_flag(flag: Option<bool>) -> &'static str {
    match flag {
        Some(true) => "true",
        Some(false) => "false",
        None => "na",
    }
}

pub fn csv_row(r: &SweepRow) -> String {
    let floats = [
        r.t_opt, r.tqsl_closed, r.tqsl_traj, r.tmin_a, r.tmin_b, r.tmin_c1, r.tmin_c2, r.fidelity,
    ];
    let mut line = format!("{},{},{}", fmt_float(r.theta), fmt_float(r.gamma), r.regime);
    for x in floats {
        line.push(',');
        line.push_str(&fmt_float(x));
    }
    for f in [r.pass_a, r.pass_b, r.pass_c1, r.pass_c2] {
        line.push(',');
        line.push_str(fmt_flag(f));
    }
    line
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", csv_row(r))?;
    }
    out.flush()
}

/// `<file name>.summary.txt` next to the CSV.
pub fn summary_path(csv: &Path) -> PathBuf {
    let mut name = csv.file_name().map(|n| n.to_os_string()).unwrap_or_else(|| "sweep".into());
    name.push(".summary.txt");
    csv.with_file_name(name)
}

pub fn summary_text(rows: &[SweepRow], cfg: &SweepConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "qsl {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, "config {}", serde_json::to_string(cfg).expect("config serializes"));
    let _ = writeln!(s, "rows {}", rows.len());
    let mut regimes: Vec<(&str, usize)> = Vec::new();
    for r in rows {
        match regimes.iter_mut().find(|(name, _)| *name == r.regime) {
            Some((_, n)) => *n += 1,
            None => regimes.push((r.regime, 1)),
        }
    }
    for (name, n) in regimes {
        let _ = writeln!(s, "regime {name} {n}");
    }
    let passing = rows.iter().filter(|r| r.all_pass()).count();
    let _ = writeln!(s, "rows with every bound <= t_opt {passing}/{}", rows.len());
    let min_fidelity = rows.iter().map(|r| r.fidelity).fold(f64::INFINITY, f64::min);
    let _ = writeln!(s, "min fidelity {}", fmt_float(min_fidelity));
    let qsl_gap = rows.iter().map(|r| (r.tqsl_traj - r.tqsl_closed).abs()).fold(0.0, f64::max);
    let _ = writeln!(s, "max |tqsl_traj - tqsl_closed| {}", fmt_float(qsl_gap));
    s
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| HarnessError::Write { path: path.to_owned(), source })
}

/// Write the sweep CSV to `path` plus its summary sidecar; returns the
/// sidecar's path.
pub fn emit_report(rows: &[SweepRow], cfg: &SweepConfig, path: &Path) -> Result<PathBuf> {
    if rows.is_empty() {
        return Err(HarnessError::EmptyTable);
    }
    let mut csv = Vec::new();
    write_csv(rows, &mut csv).expect("writing to memory");
    write_file(path, &csv)?;
    let sidecar = summary_path(path);
    write_file(&sidecar, summary_text(rows, cfg).as_bytes())?;
    Ok(sidecar)
}

pub fn trajectory_header(dim: usize) -> String {
    let mut h = String::from("t");
    for k in 0..dim {
        let _ = write!(h, ",re_c{k},im_c{k}");
    }
    h.push_str(",deltaE,survival");
    h
}

/// One row per sample: time, amplitudes, `ΔE`, survival probability.
pub fn write_trajectory<W: Write>(traj: &Trajectory, mut out: W) -> io::Result<()> {
    writeln!(out, "{}", trajectory_header(traj.dim()))?;
    for k in 0..traj.len() {
        let mut line = fmt_float(traj.times()[k]);
        for z in traj.states()[k].amplitudes() {
            let _ = write!(line, ",{},{}", fmt_float(z.re), fmt_float(z.im));
        }
        let _ = write!(
            line,
            ",{},{}",
            fmt_float(traj.variance_samples()[k]),
            fmt_float(traj.survival()[k])
        );
        writeln!(out, "{line}")?;
    }
    out.flush()
}

pub fn emit_trajectory(traj: &Trajectory, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_trajectory(traj, &mut buf).expect("writing to memory");
    write_file(path, &buf)
}

fn fmt_bound(b: &qsl_core::Result<f64>) -> String {
    match b {
        Ok(x) => fmt_float(*x),
        Err(e) => format!("error: {e}"),
    }
}

pub const BOUND_REPORT_HEADER: &str = "tmin_a,tmin_b,tmin_c1,tmin_c2,tqsl_star,t_opt,pass_a,pass_b,pass_c1,pass_c2";

/// Flat CSV row matching [`BOUND_REPORT_HEADER`]; missing values are empty.
pub fn bound_report_csv(r: &BoundReport) -> String {
    let value = |b: &qsl_core::Result<f64>| b.as_ref().map(|x| fmt_float(*x)).unwrap_or_default();
    let qsl = match &r.t_qsl_star {
        Some(Ok(q)) => fmt_float(q.time),
        _ => String::new(),
    };
    let t_opt = r.t_opt.map(fmt_float).unwrap_or_default();
    let f = &r.flags;
    format!(
        "{},{},{},{},{qsl},{t_opt},{},{},{},{}",
        value(&r.t_min_a),
        value(&r.t_min_b),
        value(&r.t_min_c1),
        value(&r.t_min_c2),
        fmt_flag(f.a),
        fmt_flag(f.b),
        fmt_flag(f.c1),
        fmt_flag(f.c2)
    )
}

/// Human-readable block, one quantity per line.
pub fn bound_report_text(r: &BoundReport) -> String {
    let mut s = String::new();
    let flags = [r.flags.a, r.flags.b, r.flags.c1, r.flags.c2];
    for ((name, b), flag) in r.bounds().into_iter().zip(flags) {
        let verdict = match flag {
            Some(true) => "  <= t_opt",
            Some(false) => "  EXCEEDS t_opt",
            None => "",
        };
        let _ = writeln!(s, "  {name:<10} {}{verdict}", fmt_bound(b));
    }
    match &r.t_qsl_star {
        Some(Ok(q)) => {
            let _ = writeln!(s, "  {:<10} {}", "tqsl_star", fmt_float(q.time));
            if q.missed_target {
                let _ = writeln!(s, "             (target missed, fidelity {})", fmt_float(q.target_fidelity));
            }
        }
        Some(Err(e)) => {
            let _ = writeln!(s, "  {:<10} error: {e}", "tqsl_star");
        }
        None => {}
    }
    if let Some(t) = r.t_opt {
        let _ = writeln!(s, "  {:<10} {}", "t_opt", fmt_float(t));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ThetaGrid;
    use crate::sweep::run_sweep;

    #[test]
    fn floats_round_trip() {
        for x in [std::f64::consts::PI, 1e-300, -0.1, 12345.678901234567] {
            assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_shape() {
        let cfg = SweepConfig { theta: ThetaGrid { min: 0.2, max: 1.0, count: 3 }, ..Default::default() };
        let rows = run_sweep(&cfg).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 4);
        for l in &lines[1..] {
            assert_eq!(l.split(',').count(), 15);
        }
    }

    #[test]
    fn summary_sits_next_to_csv() {
        assert_eq!(summary_path(Path::new("out/a.csv")), PathBuf::from("out/a.csv.summary.txt"));
    }

    #[test]
    fn trajectory_header_lists_amplitudes() {
        assert_eq!(trajectory_header(2), "t,re_c0,im_c0,re_c1,im_c1,deltaE,survival");
    }
}
