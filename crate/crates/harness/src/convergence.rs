//! Observed orders of accuracy under grid refinement.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use invscheme_core::problems::{FrameKind, FrameTransform};
use invscheme_core::schemes::SchemeKind;

use crate::config::{resolve_steps, ConfigError, ResolvedSteps, RunConfig, ViscositySpec};
use crate::run::run_with_steps;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Probe {
    /// Halve `h` with `ντ/h²` fixed.
    Spatial,
    /// Halve `h` with `τ/h` fixed.
    Temporal,
}

impl FromStr for Probe {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "spatial" => Ok(Probe::Spatial),
            "temporal" => Ok(Probe::Temporal),
            _ => Err(format!("unknown probe '{s}' (spatial | temporal)")),
        }
    }
}

impl fmt::Display for Probe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Probe::Spatial => "spatial",
            Probe::Temporal => "temporal",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceTemplate {
    pub scheme: SchemeKind,
    pub probe: Probe,
    /// Frame of the reference solution.
    pub frame: FrameTransform,
    pub nu: f64,
    /// Grid points of the coarsest level.
    pub nx: usize,
    pub levels: usize,
    pub t_final: f64,
    /// `ντ/h²` (spatial) or `τ/h` (temporal).
    pub ratio: f64,
    /// `κ` of the artificial viscosity at the coarsest level; the temporal
    /// probe scales it with `τ`, since `C` is a first-order term.
    pub c_kappa: f64,
}

impl ConvergenceTemplate {
    /// Desk-scale defaults: `nx` 201 to 1601.
    ///
    /// The spatial probe uses `ν = 1` on `t ∈ [0, 0.5]`. The temporal probe
    /// starts the solution at `t = 1` (time translation by −1) with `ν = 0.1`
    /// and `τ = 0.07·h`, which keeps every explicit scheme stable on all
    /// levels while the time error still shows.
    pub fn standard(scheme: SchemeKind, probe: Probe) -> ConvergenceTemplate {
        match probe {
            Probe::Spatial => ConvergenceTemplate {
                scheme,
                probe,
                frame: FrameTransform::identity(),
                nu: 1.0,
                nx: 201,
                levels: 4,
                t_final: 0.5,
                ratio: 0.25,
                c_kappa: -0.01,
            },
            Probe::Temporal => ConvergenceTemplate {
                scheme,
                probe,
                frame: FrameTransform::new(FrameKind::TimeTranslation, -1.0).expect("additive kind"),
                nu: 0.1,
                nx: 201,
                levels: 4,
                t_final: 1.0,
                ratio: 0.07,
                c_kappa: -0.01,
            },
        }
    }

    fn level(&self, k: usize) -> (usize, f64, f64) {
        let nx = (self.nx - 1) * (1 << k) + 1;
        let h = (crate::config::X_MAX - crate::config::X_MIN) / (nx - 1) as f64;
        match self.probe {
            Probe::Spatial => (nx, self.ratio * h * h / self.nu, self.c_kappa),
            Probe::Temporal => (nx, self.ratio * h, self.c_kappa / (1 << k) as f64),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub h: f64,
    pub tau: f64,
    pub error: f64,
    /// `log2(previous error / error)`.
    pub order: Option<f64>,
    /// The error grew from the previous level.
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceTable {
    pub scheme: SchemeKind,
    pub probe: Probe,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    /// Order observed between the two finest levels.
    pub fn final_order(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.order)
    }
}

impl fmt::Display for ConvergenceTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {} {} probe", self.scheme, self.probe)?;
        writeln!(f, "{:>12} {:>12} {:>14} {:>8}", "h", "tau", "error", "order")?;
        for r in &self.rows {
            let order = r.order.map_or_else(|| "-".to_string(), |o| format!("{o:.3}"));
            let flag = if r.flagged { "  error increased" } else { "" };
            writeln!(f, "{:>12.5e} {:>12.5e} {:>14.6e} {:>8}{flag}", r.h, r.tau, r.error, order)?;
        }
        Ok(())
    }
}

fn level_error(template: &ConvergenceTemplate, k: usize) -> Result<ConvergenceRow, ConfigError> {
    let (nx, tau, c_kappa) = template.level(k);
    let cfg = RunConfig {
        scheme: template.scheme,
        frame: template.frame,
        nx,
        viscosity: ViscositySpec::Nu(template.nu),
        cfl: 1.0,
        t_final: template.t_final,
        snapshot_times: vec![template.t_final],
        c_kappa,
        output_dir: PathBuf::new(),
    };
    let steps = ResolvedSteps { tau, ..resolve_steps(&cfg)? };
    let run = run_with_steps(&cfg, steps)?;
    if let Some(msg) = run.aborted {
        return Err(ConfigError::Invalid(format!("run at h = {}, tau = {} aborted: {msg}", steps.h, steps.tau)));
    }
    let error = *run.series.l2.last().expect("series starts at t = 0");
    Ok(ConvergenceRow {
        h: steps.h,
        tau,
        error,
        order: None,
        flagged: false,
    })
}

/// Final-time error per level and observed orders; levels run in parallel.
pub fn convergence_study(template: &ConvergenceTemplate) -> Result<ConvergenceTable, ConfigError> {
    if template.levels < 3 {
        return Err(ConfigError::Invalid("a convergence study needs at least 3 levels".into()));
    }
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..template.levels)
            .map(|k| s.spawn(move || level_error(template, k)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut rows = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    for i in 1..rows.len() {
        let (prev, cur) = (rows[i - 1].error, rows[i].error);
        rows[i].order = Some((prev / cur).log2());
        rows[i].flagged = !(cur <= prev);
    }
    Ok(ConvergenceTable {
        scheme: template.scheme,
        probe: template.probe,
        rows,
    })
}
