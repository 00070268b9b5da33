//! Linear stability conditions, amplification factors, mode-growth
//! experiments and a run monitor.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::schemes::{discrete_op, omega_half_points, ArtificialViscosity, DiscreteOp, Field, Grid1D, SchemeKind, StepParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StabilityError {
    #[error("{0} has no classical stability condition")]
    NotClassical(SchemeKind),
    #[error("characteristic speed must be positive and finite")]
    BadSpeed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Stable,
    /// All conditions hold and at least one holds with equality.
    StableAtBoundary,
    Unstable,
    Unconditional,
}

impl Verdict {
    pub fn is_stable(self) -> bool {
        !matches!(self, Verdict::Unstable)
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Stable => "stable",
            Verdict::StableAtBoundary => "stable_at_boundary",
            Verdict::Unstable => "unstable",
            Verdict::Unconditional => "unconditional",
        }
    }
}

impl core::fmt::Display for Verdict {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// `S = ντ/h²`, `CFL = aτ/h`, `S* = (ν + a·h·CFL/2)τ/h²` and `Ωτ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityParams {
    pub s: f64,
    pub cfl: f64,
    pub s_star: f64,
    pub omega_tau: f64,
}

impl StabilityParams {
    /// From dimensionless numbers; `S*` is derived as `S + CFL²/2`.
    pub fn new(s: f64, cfl: f64, omega_tau: f64) -> StabilityParams {
        StabilityParams {
            s,
            cfl,
            s_star: s + 0.5 * cfl * cfl,
            omega_tau,
        }
    }

    pub fn from_steps(nu: f64, a: f64, h: f64, tau: f64, omega_tau: f64) -> StabilityParams {
        let cfl = a * tau / h;
        StabilityParams {
            s: nu * tau / (h * h),
            cfl,
            s_star: (nu + 0.5 * a * h * cfl) * tau / (h * h),
            omega_tau,
        }
    }
}

/// `a = max |u|` over the physical nodes of the initial data.
pub fn characteristic_speed(f: &Field, g: &Grid1D) -> Result<f64, StabilityError> {
    let a = f.physical(g).iter().fold(0.0f64, |m, v| m.max(libm::fabs(*v)));
    if a > 0.0 && a.is_finite() {
        Ok(a)
    } else {
        Err(StabilityError::BadSpeed)
    }
}

/// Tabulated conditions: FTCS `S ≤ 1/2, CFL ≤ 1`; Lax-Wendroff
/// `S* ≤ 1/2, CFL ≤ 1`; Crank-Nicolson unconditional.
pub fn check_classical(kind: SchemeKind, sp: &StabilityParams) -> Result<Verdict, StabilityError> {
    let both = |x: f64| match (x <= 0.5, sp.cfl <= 1.0) {
        (true, true) if x == 0.5 || sp.cfl == 1.0 => Verdict::StableAtBoundary,
        (true, true) => Verdict::Stable,
        _ => Verdict::Unstable,
    };
    match kind {
        SchemeKind::Ftcs => Ok(both(sp.s)),
        SchemeKind::LaxWendroff => Ok(both(sp.s_star)),
        SchemeKind::CrankNicolson => Ok(Verdict::Unconditional),
        other => Err(StabilityError::NotClassical(other)),
    }
}

/// Default `|Ωτ|` above which the invariant conditions are only necessary.
pub const CAVEAT_THRESHOLD: f64 = 0.05;

const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvariantCheck {
    /// `CFL² − 2S − 2Ωτ`, must be `≤ 0`.
    pub slack1: f64,
    /// `4S/3 − 2S² + Ωτ`, must lie in `[0, 1/2]`.
    pub middle: f64,
    pub verdict: Verdict,
    /// `|Ωτ|` exceeds the threshold: the conditions are necessary only.
    pub necessary_only: bool,
}

pub fn check_invariant(sp: &StabilityParams, caveat_threshold: f64) -> InvariantCheck {
    let slack1 = sp.cfl * sp.cfl - 2.0 * sp.s - 2.0 * sp.omega_tau;
    let middle = 4.0 * sp.s / 3.0 - 2.0 * sp.s * sp.s + sp.omega_tau;
    let ok = slack1 <= BOUNDARY_TOL && (-BOUNDARY_TOL..=0.5 + BOUNDARY_TOL).contains(&middle);
    let on_edge = libm::fabs(slack1) <= BOUNDARY_TOL
        || libm::fabs(middle) <= BOUNDARY_TOL
        || libm::fabs(middle - 0.5) <= BOUNDARY_TOL;
    let verdict = match (ok, on_edge) {
        (false, _) => Verdict::Unstable,
        (true, true) => Verdict::StableAtBoundary,
        (true, false) => Verdict::Stable,
    };
    InvariantCheck {
        slack1,
        middle,
        verdict,
        necessary_only: libm::fabs(sp.omega_tau) > caveat_threshold,
    }
}

/// Verdict of whichever check applies to `kind`.
pub fn check(kind: SchemeKind, sp: &StabilityParams) -> Verdict {
    match kind {
        SchemeKind::Invariant | SchemeKind::HighOrder => check_invariant(sp, CAVEAT_THRESHOLD).verdict,
        _ => check_classical(kind, sp).expect("classical kinds"),
    }
}

/// Amplification factor of `u_t + a u_x = ν u_xx` discretized by `kind`
/// for the Fourier mode `e^{ijθ}` (frozen `Ωτ` for the invariant family).
pub fn amplification_factor(kind: SchemeKind, sp: &StabilityParams, theta: f64) -> Complex64 {
    let i = Complex64::i();
    let sn = libm::sin(theta);
    let d2 = 2.0 * libm::cos(theta) - 2.0;
    let (c, s) = (sp.cfl, sp.s);
    let one = Complex64::new(1.0, 0.0);
    match kind {
        SchemeKind::Ftcs => one - i * (c * sn) + s * d2,
        SchemeKind::LaxWendroff => {
            one - i * (c * sn) + (s + 0.5 * c * c) * d2 + 0.5 * s * s * d2 * d2 - i * (s * c * sn * d2)
        }
        SchemeKind::CrankNicolson => {
            let z = i * (0.5 * c * sn) - 0.5 * s * d2;
            (one - z) / (one + z)
        }
        SchemeKind::Invariant | SchemeKind::HighOrder => {
            one - i * (c * sn * (1.0 - d2 / 6.0)) + s * (d2 - d2 * d2 / 12.0) + sp.omega_tau * d2
                - i * (s * c * sn * d2)
                + 0.5 * s * s * d2 * d2
        }
    }
}

pub fn amplification_modulus(kind: SchemeKind, sp: &StabilityParams, theta: f64) -> f64 {
    libm::sqrt(amplification_factor(kind, sp, theta).norm_sqr())
}

/// Periodic linear problem `u_t + a u_x = ν u_xx` discretized by `kind`.
pub struct LinearStepper {
    kind: SchemeKind,
    sp: StabilityParams,
    n: usize,
    /// LU factors of the implicit operator (Crank-Nicolson only).
    lu: Option<(Vec<Vec<f64>>, Vec<usize>)>,
}

const PAD: usize = 2;

fn padded(u: &[f64]) -> Vec<f64> {
    let n = u.len();
    (0..n + 2 * PAD).map(|k| u[(k + n - PAD) % n]).collect()
}

fn op(o: DiscreteOp, f: &[f64], i: usize) -> f64 {
    discrete_op(o, f, i).expect("padded storage")
}

fn lu_factor(mut a: Vec<Vec<f64>>) -> (Vec<Vec<f64>>, Vec<usize>) {
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&p, &q| libm::fabs(a[p][col]).total_cmp(&libm::fabs(a[q][col])))
            .unwrap_or(col);
        a.swap(col, piv);
        perm.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            a[row][col] = f;
            for k in col + 1..n {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    (a, perm)
}

fn lu_solve(lu: &[Vec<f64>], perm: &[usize], b: &[f64]) -> Vec<f64> {
    let n = lu.len();
    let mut y: Vec<f64> = perm.iter().map(|&p| b[p]).collect();
    for row in 0..n {
        for k in 0..row {
            y[row] -= lu[row][k] * y[k];
        }
    }
    for row in (0..n).rev() {
        for k in row + 1..n {
            y[row] -= lu[row][k] * y[k];
        }
        y[row] /= lu[row][row];
    }
    y
}

impl LinearStepper {
    pub fn new(kind: SchemeKind, sp: StabilityParams, n: usize) -> LinearStepper {
        let lu = (kind == SchemeKind::CrankNicolson).then(|| {
            let mut m = vec![vec![0.0; n]; n];
            for (j, row) in m.iter_mut().enumerate() {
                row[j] += 1.0 + sp.s;
                row[(j + 1) % n] += 0.25 * sp.cfl - 0.5 * sp.s;
                row[(j + n - 1) % n] += -0.25 * sp.cfl - 0.5 * sp.s;
            }
            lu_factor(m)
        });
        LinearStepper { kind, sp, n, lu }
    }

    /// Explicit increment `u^{n+1} − u^n` at padded index `i`.
    fn increment(&self, u: &[f64], i: usize) -> f64 {
        let (c, s, w) = (self.sp.cfl, self.sp.s, self.sp.omega_tau);
        let md = op(DiscreteOp::MuDelta, u, i);
        let d2 = op(DiscreteOp::Delta2, u, i);
        match self.kind {
            SchemeKind::Ftcs => -c * md + s * d2,
            SchemeKind::LaxWendroff => {
                let md3 = op(DiscreteOp::MuDelta3, u, i);
                let d4 = op(DiscreteOp::Delta4, u, i);
                -c * md + (s + 0.5 * c * c) * d2 - s * c * md3 + 0.5 * s * s * d4
            }
            SchemeKind::Invariant | SchemeKind::HighOrder => {
                let md3 = op(DiscreteOp::MuDelta3, u, i);
                let d4 = op(DiscreteOp::Delta4, u, i);
                -c * (md - md3 / 6.0) + s * (d2 - d4 / 12.0) + w * d2 - s * c * md3 + 0.5 * s * s * d4
            }
            SchemeKind::CrankNicolson => -0.5 * c * md + 0.5 * s * d2,
        }
    }

    /// One step of the periodic grid function `u`.
    pub fn step(&self, u: &[f64]) -> Vec<f64> {
        let p = padded(u);
        let explicit: Vec<f64> = (0..self.n).map(|j| u[j] + self.increment(&p, j + PAD)).collect();
        match &self.lu {
            Some((lu, perm)) => lu_solve(lu, perm, &explicit),
            None => explicit,
        }
    }
}

fn l2(u: &[f64]) -> f64 {
    libm::sqrt(u.iter().map(|v| v * v).sum())
}

/// Largest growth `‖u_steps‖/‖u_0‖` over the single cosine modes
/// `cos(2πkj/n)`, `k = 0..=n/2`, of the periodic linear problem.
pub fn mode_growth(kind: SchemeKind, sp: &StabilityParams, n: usize, steps: usize) -> f64 {
    let stepper = LinearStepper::new(kind, *sp, n);
    let mut worst = 0.0f64;
    for k in 0..=n / 2 {
        let theta = 2.0 * PI * k as f64 / n as f64;
        let mut u: Vec<f64> = (0..n).map(|j| libm::cos(theta * j as f64)).collect();
        let start = l2(&u);
        for _ in 0..steps {
            u = stepper.step(&u);
            if !l2(&u).is_finite() {
                return f64::INFINITY;
            }
        }
        worst = worst.max(l2(&u) / start);
    }
    worst
}

/// Growth factor above which a mode experiment counts as unstable.
pub const GROWTH_THRESHOLD: f64 = 1.01;

/// `(S, CFL)` values of a 5×5 grid straddling a scheme's stability boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilityGrid {
    pub kind: SchemeKind,
    pub s: [f64; 5],
    pub cfl: [f64; 5],
    pub omega_tau: f64,
}

/// Grids for the four schemes that have stated conditions.
///
/// FTCS and Lax-Wendroff cells sit where the tabulated conditions are
/// sharp: at small `S` FTCS needs `CFL² ≤ 2S`, and Lax-Wendroff is stable
/// beyond `S* = 1/2` once `CFL` is moderate.
pub fn stability_grids() -> [StabilityGrid; 4] {
    [
        StabilityGrid {
            kind: SchemeKind::Ftcs,
            s: [0.4, 0.45, 0.5, 0.55, 0.6],
            cfl: [0.3, 0.5, 0.7, 0.85, 1.1],
            omega_tau: 0.0,
        },
        StabilityGrid {
            kind: SchemeKind::LaxWendroff,
            s: [0.3, 0.45, 0.49, 0.51, 0.6],
            cfl: [0.02, 0.05, 0.08, 0.1, 1.1],
            omega_tau: 0.0,
        },
        StabilityGrid {
            kind: SchemeKind::CrankNicolson,
            s: [0.1, 0.5, 1.0, 5.0, 20.0],
            cfl: [0.1, 0.5, 1.0, 2.0, 5.0],
            omega_tau: 0.0,
        },
        StabilityGrid {
            kind: SchemeKind::Invariant,
            s: [0.1, 0.3, 0.5, 0.65, 0.7],
            cfl: [0.2, 0.4, 0.6, 0.8, 1.0],
            omega_tau: 0.0,
        },
    ]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridCell {
    pub s: f64,
    pub cfl: f64,
    pub predicted: Verdict,
    pub growth: f64,
}

impl GridCell {
    pub fn agrees(&self) -> bool {
        self.predicted.is_stable() == (self.growth <= GROWTH_THRESHOLD)
    }
}

/// Runs every cell of `grid` for `steps` steps on `n` periodic nodes.
pub fn run_grid(grid: &StabilityGrid, n: usize, steps: usize) -> Vec<GridCell> {
    let mut out = Vec::with_capacity(25);
    for &s in &grid.s {
        for &cfl in &grid.cfl {
            let sp = StabilityParams::new(s, cfl, grid.omega_tau);
            out.push(GridCell {
                s,
                cfl,
                predicted: check(grid.kind, &sp),
                growth: mode_growth(grid.kind, &sp, n, steps),
            });
        }
    }
    out
}

/// One step's worth of monitoring.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonitorRecord {
    pub step: usize,
    pub time: f64,
    pub max_abs_omega_tau: f64,
    pub verdict: Verdict,
    /// First non-finite physical node, if any.
    pub first_nan: Option<usize>,
    pub norm_ratio: f64,
}

/// Watches a run without touching it.
#[derive(Clone, Debug)]
pub struct Monitor {
    kind: SchemeKind,
    params: StepParams,
    nu: f64,
    a: f64,
    initial_norm: Option<f64>,
    steps_seen: usize,
    doubling_step: Option<usize>,
}

impl Monitor {
    pub fn new(kind: SchemeKind, params: StepParams, a: f64) -> Monitor {
        let params = if kind == SchemeKind::HighOrder {
            StepParams { art_visc: ArtificialViscosity::Zero, ..params }
        } else {
            params
        };
        Monitor {
            kind,
            params,
            nu: params.nu,
            a,
            initial_norm: None,
            steps_seen: 0,
            doubling_step: None,
        }
    }

    /// First observed step whose field norm is at least twice the first.
    pub fn doubling_step(&self) -> Option<usize> {
        self.doubling_step
    }

    pub fn observe(&mut self, f: &Field, g: &Grid1D) -> MonitorRecord {
        let step = self.steps_seen;
        self.steps_seen += 1;
        let phys = f.physical(g);
        let first_nan = phys.iter().position(|v| !v.is_finite());
        let norm = l2(phys);
        let initial = *self.initial_norm.get_or_insert(norm);
        let norm_ratio = if initial > 0.0 { norm / initial } else { 1.0 };
        if self.doubling_step.is_none() && !(norm_ratio < 2.0) {
            self.doubling_step = Some(step);
        }
        let tau = self.params.tau;
        let (max_abs, max_signed) = match self.kind {
            SchemeKind::Invariant | SchemeKind::HighOrder if first_nan.is_none() => {
                let om = omega_half_points(f, &self.params, g);
                let half = g.physical().start..g.physical().end - 1;
                om[half].iter().fold((0.0f64, f64::NEG_INFINITY), |(ma, ms), w| {
                    (ma.max(libm::fabs(w * tau)), ms.max(w * tau))
                })
            }
            _ => (0.0, 0.0),
        };
        let sp = StabilityParams::from_steps(self.nu, self.a, g.h, tau, max_signed);
        let verdict = if first_nan.is_some() {
            Verdict::Unstable
        } else {
            check(self.kind, &sp)
        };
        MonitorRecord {
            step,
            time: f.time,
            max_abs_omega_tau: max_abs,
            verdict,
            first_nan,
            norm_ratio,
        }
    }
}
