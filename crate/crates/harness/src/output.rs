//! CSV, JSON and SVG files of a run.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::run::{ErrorSeries, RunOutcome, Snapshot};

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// 17 significant digits, enough to parse back to `v` exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn error_csv(series: &ErrorSeries) -> String {
    let mut s = String::from("t,l2\n");
    for (t, e) in series.times.iter().zip(&series.l2) {
        let _ = writeln!(s, "{},{}", fmt_f64(*t), fmt_f64(*e));
    }
    s
}

/// Parses the output of [`error_csv`] back into `(t, l2)` columns.
pub fn parse_error_csv(text: &str) -> Result<(Vec<f64>, Vec<f64>), String> {
    let mut lines = text.lines();
    if lines.next() != Some("t,l2") {
        return Err("missing header 't,l2'".into());
    }
    let mut t = Vec::new();
    let mut e = Vec::new();
    for (i, line) in lines.enumerate() {
        let (a, b) = line.split_once(',').ok_or_else(|| format!("row {}: expected two columns", i + 2))?;
        t.push(a.parse().map_err(|_| format!("row {}: bad t '{a}'", i + 2))?);
        e.push(b.parse().map_err(|_| format!("row {}: bad l2 '{b}'", i + 2))?);
    }
    Ok((t, e))
}

pub fn snapshot_csv(s: &Snapshot) -> String {
    let mut out = String::from("x,u_num,u_exact\n");
    for i in 0..s.x.len() {
        let _ = writeln!(out, "{},{},{}", fmt_f64(s.x[i]), fmt_f64(s.u_num[i]), fmt_f64(s.u_exact[i]));
    }
    out
}

/// File-name id of a snapshot time: `5` for 5.0, `2p5` for 2.5.
pub fn snapshot_id(t: f64) -> String {
    format!("{t:?}").trim_end_matches(".0").replace('.', "p").replace('-', "m")
}

pub fn run_json(run: &RunOutcome) -> String {
    let c = &run.config;
    let v = serde_json::json!({
        "scheme": c.scheme.name(),
        "frame": c.frame.to_string(),
        "nx": c.nx,
        "cfl": c.cfl,
        "viscosity_input": match c.viscosity {
            crate::config::ViscositySpec::Nu(n) => serde_json::json!({ "nu": n }),
            crate::config::ViscositySpec::ReH(r) => serde_json::json!({ "re_h": r }),
        },
        "t_final": c.t_final,
        "snapshot_times": c.snapshot_times,
        "c_kappa": c.c_kappa,
        "resolved": run.steps,
        "samples": run.series.len(),
        "completed": run.completed(),
        "aborted": run.aborted,
        "doubling_step": run.doubling_step,
        "unstable_flags": run.series.flags.iter().filter(|f| !f.is_stable()).count(),
    });
    serde_json::to_string_pretty(&v).expect("plain JSON values") + "\n"
}

/// A named polyline.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<'a> {
    pub label: String,
    pub x: &'a [f64],
    pub y: &'a [f64],
}

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn nice_range(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

/// Line chart with axes, five ticks per axis and a legend.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series<'_>]) -> String {
    let (w, h) = (640.0, 400.0);
    let (left, right, top, bottom) = (70.0, 20.0, 30.0, 50.0);
    let finite = |v: &&f64| v.is_finite();
    let xs = series.iter().flat_map(|s| s.x.iter()).filter(finite);
    let ys = series.iter().flat_map(|s| s.y.iter()).filter(finite);
    let (x0, x1) = nice_range(
        xs.clone().fold(f64::INFINITY, |a, &b| a.min(b)),
        xs.fold(f64::NEG_INFINITY, |a, &b| a.max(b)),
    );
    let (y0, y1) = nice_range(
        ys.clone().fold(f64::INFINITY, |a, &b| a.min(b)),
        ys.fold(f64::NEG_INFINITY, |a, &b| a.max(b)),
    );
    let px = |x: f64| left + (x - x0) / (x1 - x0) * (w - left - right);
    let py = |y: f64| h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="11">"#);
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="18" text-anchor="middle" font-size="13">{}</text>"#, w / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<path d="M{left},{top} V{} H{}" fill="none" stroke="black"/>"#,
        h - bottom,
        w - right
    );
    for k in 0..=4 {
        let f = f64::from(k) / 4.0;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let (tx, ty) = (px(xv), py(yv));
        let _ = writeln!(s, r#"<line x1="{tx:.2}" y1="{}" x2="{tx:.2}" y2="{}" stroke="black"/>"#, h - bottom, h - bottom + 5.0);
        let _ = writeln!(s, r#"<text x="{tx:.2}" y="{}" text-anchor="middle">{}</text>"#, h - bottom + 18.0, tick(xv));
        let _ = writeln!(s, r#"<line x1="{}" y1="{ty:.2}" x2="{left}" y2="{ty:.2}" stroke="black"/>"#, left - 5.0);
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, left - 8.0, ty + 4.0, tick(yv));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (left + w - right) / 2.0, h - 12.0, escape(x_label));
    let _ = writeln!(
        s,
        r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
        (top + h - bottom) / 2.0,
        escape(y_label)
    );
    for (k, ser) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let mut d = String::new();
        let mut pen_down = false;
        for (x, y) in ser.x.iter().zip(ser.y) {
            if !(x.is_finite() && y.is_finite()) {
                pen_down = false;
                continue;
            }
            let _ = write!(d, "{}{:.2},{:.2} ", if pen_down { "L" } else { "M" }, px(*x), py(*y));
            pen_down = true;
        }
        let _ = writeln!(
            s,
            r#"<path class="series" data-label="{}" d="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            escape(&ser.label),
            d.trim_end()
        );
        let ly = top + 14.0 * k as f64 + 8.0;
        let lx = w - right - 120.0;
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 18.0);
        let _ = writeln!(s, r#"<text class="legend" x="{}" y="{}">{}</text>"#, lx + 24.0, ly + 4.0, escape(&ser.label));
    }
    s.push_str("</svg>\n");
    s
}

fn tick(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e-2 && v.abs() < 1e4 {
        format!("{v:.3}").trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.2e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn write(dir: &Path, name: &str, body: &str, written: &mut Vec<PathBuf>) -> Result<(), OutputError> {
    let path = dir.join(name);
    fs::write(&path, body).map_err(|source| OutputError::Io { path: path.clone(), source })?;
    written.push(path);
    Ok(())
}

/// Writes the files of one run into `dir`; returns their paths.
pub fn emit_outputs(run: &RunOutcome, dir: &Path) -> Result<Vec<PathBuf>, OutputError> {
    fs::create_dir_all(dir).map_err(|source| OutputError::Io { path: dir.to_path_buf(), source })?;
    let mut written = Vec::new();
    write(dir, "config.txt", &run.config.to_text(), &mut written)?;
    write(dir, "run.json", &run_json(run), &mut written)?;
    write(dir, "error.csv", &error_csv(&run.series), &mut written)?;
    let label = run.config.scheme.name().to_string();
    let err = [Series {
        label,
        x: &run.series.times,
        y: &run.series.l2,
    }];
    write(dir, "error.svg", &line_chart("L2 error", "t", "l2", &err), &mut written)?;
    for snap in &run.snapshots {
        write(dir, &format!("snapshot_t{}.csv", snapshot_id(snap.time)), &snapshot_csv(snap), &mut written)?;
    }
    if let Some(last) = run.snapshots.last() {
        let lines = [
            Series {
                label: "numerical".into(),
                x: &last.x,
                y: &last.u_num,
            },
            Series {
                label: "exact".into(),
                x: &last.x,
                y: &last.u_exact,
            },
        ];
        let title = format!("u at t = {}", tick(last.time));
        write(dir, "snapshot.svg", &line_chart(&title, "x", "u", &lines), &mut written)?;
    }
    Ok(written)
}

/// One error curve per run in a single chart, labelled by scheme.
pub fn comparison_chart(runs: &[&RunOutcome], title: &str) -> String {
    let series: Vec<Series<'_>> = runs
        .iter()
        .map(|r| Series {
            label: r.config.scheme.name().to_string(),
            x: &r.series.times,
            y: &r.series.l2,
        })
        .collect();
    line_chart(title, "t", "l2", &series)
}
