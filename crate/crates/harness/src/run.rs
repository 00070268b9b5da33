//! Time integration with error tracking.

use invscheme_core::problems::{build_problem, ReferenceSolution};
use invscheme_core::schemes::{step, Field, Grid1D, SchemeError, SchemeKind, StepParams};
use invscheme_core::stability::{Monitor, Verdict};

use crate::config::{resolve_steps, ConfigError, ResolvedSteps, RunConfig};

/// `sqrt(h · Σ_interior (u_i − u_ref(x_i, t))²)`.
pub fn l2_error(f: &Field, reference: &ReferenceSolution, t: f64, g: &Grid1D) -> f64 {
    let sum: f64 = g
        .interior()
        .map(|i| {
            let e = f.values[i] - reference.u(g.x_at(i), t).unwrap_or(f64::NAN);
            e * e
        })
        .sum();
    (g.h * sum).sqrt()
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ErrorSeries {
    pub times: Vec<f64>,
    pub l2: Vec<f64>,
    pub flags: Vec<Verdict>,
}

impl ErrorSeries {
    pub fn push(&mut self, t: f64, l2: f64, flag: Verdict) {
        self.times.push(t);
        self.l2.push(l2);
        self.flags.push(flag);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest error over samples with `t <= t_max`.
    pub fn max_until(&self, t_max: f64) -> f64 {
        self.times
            .iter()
            .zip(&self.l2)
            .filter(|(t, _)| **t <= t_max + 1e-12)
            .fold(0.0, |m, (_, e)| if *e > m || e.is_nan() { *e } else { m })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub x: Vec<f64>,
    pub u_num: Vec<f64>,
    pub u_exact: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub config: RunConfig,
    pub steps: ResolvedSteps,
    pub series: ErrorSeries,
    pub snapshots: Vec<Snapshot>,
    /// Set when the run stopped early.
    pub aborted: Option<String>,
    /// First step whose field norm doubled.
    pub doubling_step: Option<usize>,
}

impl RunOutcome {
    pub fn completed(&self) -> bool {
        self.aborted.is_none()
    }
}

fn snapshot(f: &Field, reference: &ReferenceSolution, g: &Grid1D) -> Snapshot {
    let mut s = Snapshot {
        time: f.time,
        x: Vec::new(),
        u_num: Vec::new(),
        u_exact: Vec::new(),
    };
    for i in g.physical() {
        let x = g.x_at(i);
        s.x.push(x);
        s.u_num.push(f.values[i]);
        s.u_exact.push(reference.u(x, f.time).unwrap_or(f64::NAN));
    }
    s
}

/// Runs `cfg` with its own resolved steps.
pub fn run_experiment(cfg: &RunConfig) -> Result<RunOutcome, ConfigError> {
    let steps = resolve_steps(cfg)?;
    run_with_steps(cfg, steps)
}

/// Runs `cfg` with the given `(h, τ, ν, a)`; `h` must match `cfg.nx`.
///
/// Steps are shortened to land exactly on snapshot times and `t_final`.
pub fn run_with_steps(cfg: &RunConfig, steps: ResolvedSteps) -> Result<RunOutcome, ConfigError> {
    let grid = cfg.grid();
    let setup = cfg.setup(steps.nu);
    let (mut field, reference) = build_problem(&setup, &grid).map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let params =
        StepParams::new(steps.tau, steps.nu, cfg.art_visc()).map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let mut monitor = Monitor::new(cfg.scheme, params, steps.a);

    let mut stops: Vec<f64> = cfg
        .snapshot_times
        .iter()
        .copied()
        .filter(|&t| t <= cfg.t_final)
        .chain([cfg.t_final])
        .collect();
    stops.sort_by(f64::total_cmp);
    stops.dedup();
    let mut pending_snaps: Vec<f64> = cfg.snapshot_times.iter().copied().filter(|&t| t <= cfg.t_final).collect();
    pending_snaps.sort_by(f64::total_cmp);
    pending_snaps.dedup();

    let mut out = RunOutcome {
        config: cfg.clone(),
        steps,
        series: ErrorSeries::default(),
        snapshots: Vec::new(),
        aborted: None,
        doubling_step: None,
    };
    let record = |out: &mut RunOutcome, field: &Field, monitor: &mut Monitor| {
        let rec = monitor.observe(field, &grid);
        out.series.push(field.time, l2_error(field, &reference, field.time, &grid), rec.verdict);
    };
    let take_snaps = |out: &mut RunOutcome, field: &Field, pending: &mut Vec<f64>| {
        while let Some(&t) = pending.first() {
            if (t - field.time).abs() <= 1e-9 * (1.0 + t) {
                out.snapshots.push(snapshot(field, &reference, &grid));
                pending.remove(0);
            } else {
                break;
            }
        }
    };

    record(&mut out, &field, &mut monitor);
    take_snaps(&mut out, &field, &mut pending_snaps);
    let mut n = 0u64;
    let start = field.time;
    for &stop in &stops {
        loop {
            let remaining = stop - field.time;
            if remaining <= 1e-9 * (1.0 + stop) {
                field.time = stop;
                break;
            }
            // Time as `start + n·τ` avoids drift from repeated addition.
            let nominal = start + (n + 1) as f64 * steps.tau;
            let p = if nominal > stop - 1e-9 * (1.0 + stop) {
                StepParams { tau: remaining, ..params }
            } else {
                params
            };
            match step(cfg.scheme, &field, &p, &grid, &reference) {
                Ok(next) => {
                    field = next;
                    if p.tau == steps.tau {
                        n += 1;
                        field.time = start + n as f64 * steps.tau;
                    } else {
                        field.time = stop;
                        n = ((stop - start) / steps.tau).floor() as u64;
                    }
                }
                Err(e) => {
                    out.aborted = Some(e.to_string());
                    if let Some(f) = out.series.flags.last_mut() {
                        *f = Verdict::Unstable;
                    }
                    out.doubling_step = monitor.doubling_step();
                    return Ok(out);
                }
            }
            record(&mut out, &field, &mut monitor);
            if field.values.iter().any(|v| !v.is_finite()) {
                out.aborted = Some(SchemeError::Instability { index: -1, time: field.time }.to_string());
                out.doubling_step = monitor.doubling_step();
                return Ok(out);
            }
        }
        take_snaps(&mut out, &field, &mut pending_snaps);
    }
    out.doubling_step = monitor.doubling_step();
    Ok(out)
}

/// `max_t l2_F2 / max_t l2_F1` over samples with `t <= t_max`.
pub fn frame_sensitivity(f1: &ErrorSeries, f2: &ErrorSeries, t_max: f64) -> f64 {
    f2.max_until(t_max) / f1.max_until(t_max)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrameComparison {
    pub scheme: SchemeKind,
    pub f1: RunOutcome,
    pub f2: RunOutcome,
    pub rho: f64,
}

/// Runs `cfg` in the identity frame and in `f2`, both with the steps
/// resolved in the identity frame.
pub fn compare_frames(
    cfg: &RunConfig,
    f2: invscheme_core::problems::FrameTransform,
    t_max: f64,
) -> Result<FrameComparison, ConfigError> {
    let base = RunConfig {
        frame: invscheme_core::problems::FrameTransform::identity(),
        ..cfg.clone()
    };
    let steps = resolve_steps(&base)?;
    let moved = RunConfig { frame: f2, ..cfg.clone() };
    let (r1, r2) = std::thread::scope(|s| {
        let h1 = s.spawn(|| run_with_steps(&base, steps));
        let h2 = s.spawn(|| run_with_steps(&moved, steps));
        (h1.join().expect("worker panicked"), h2.join().expect("worker panicked"))
    });
    let (r1, r2) = (r1?, r2?);
    let rho = frame_sensitivity(&r1.series, &r2.series, t_max);
    Ok(FrameComparison {
        scheme: cfg.scheme,
        f1: r1,
        f2: r2,
        rho,
    })
}

/// Runs every config on its own thread; results keep the input order.
pub fn sweep(configs: &[RunConfig]) -> Vec<Result<RunOutcome, ConfigError>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = configs.iter().map(|c| s.spawn(move || run_experiment(c))).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    })
}
