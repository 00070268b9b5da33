//! Time-stepping schemes on a uniform grid with ghost layers.
//!
//! Storage holds `n_points` physical nodes plus `ghost_depth` nodes on each
//! side. A step updates the interior physical nodes and then overwrites both
//! endpoints and all ghosts from the boundary provider at the new time.

mod cn;
mod ops;

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use cn::{solve_cn_level, solve_tridiagonal, CnSolve};
pub use ops::{discrete_op, DiscreteOp};

/// The five schemes of the catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemeKind {
    Ftcs,
    LaxWendroff,
    CrankNicolson,
    Invariant,
    HighOrder,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 5] = [
        SchemeKind::Ftcs,
        SchemeKind::LaxWendroff,
        SchemeKind::CrankNicolson,
        SchemeKind::Invariant,
        SchemeKind::HighOrder,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Ftcs => "ftcs",
            SchemeKind::LaxWendroff => "lax_wendroff",
            SchemeKind::CrankNicolson => "crank_nicolson",
            SchemeKind::Invariant => "invariant",
            SchemeKind::HighOrder => "high_order",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown scheme {0:?}")]
pub struct UnknownScheme(pub alloc::string::String);

impl FromStr for SchemeKind {
    type Err = UnknownScheme;

    /// Accepts the full names and the short forms `lw`, `cn`, `high`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "ftcs" => SchemeKind::Ftcs,
            "lax_wendroff" | "lw" => SchemeKind::LaxWendroff,
            "crank_nicolson" | "cn" => SchemeKind::CrankNicolson,
            "invariant" => SchemeKind::Invariant,
            "high_order" | "high" => SchemeKind::HighOrder,
            _ => return Err(UnknownScheme(s.into())),
        })
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SchemeError {
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("invalid step parameters: {0}")]
    InvalidParams(&'static str),
    #[error("stencil at index {index} reaches outside a sequence of length {len}")]
    OutOfRange { index: usize, len: usize },
    #[error("non-finite value at node {index} at t = {time}")]
    Instability { index: i64, time: f64 },
    #[error("implicit solve did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
}

/// Uniform grid `x_j = x0 + j·h`, `j = 0..n_points`, with ghost layers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1D {
    pub x0: f64,
    pub h: f64,
    pub n_points: usize,
    pub ghost_depth: usize,
}

impl Grid1D {
    pub fn new(x0: f64, h: f64, n_points: usize, ghost_depth: usize) -> Result<Self, SchemeError> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(SchemeError::InvalidGrid("h must be positive"));
        }
        if n_points < 5 {
            return Err(SchemeError::InvalidGrid("at least 5 points are needed"));
        }
        if ghost_depth < 2 {
            return Err(SchemeError::InvalidGrid("the widest stencil needs 2 ghost layers"));
        }
        Ok(Grid1D { x0, h, n_points, ghost_depth })
    }

    /// `n_points` nodes spanning `[x_min, x_max]` with two ghost layers.
    pub fn spanning(x_min: f64, x_max: f64, n_points: usize) -> Result<Self, SchemeError> {
        if !(x_max > x_min) || n_points < 2 {
            return Err(SchemeError::InvalidGrid("empty interval"));
        }
        Grid1D::new(x_min, (x_max - x_min) / (n_points - 1) as f64, n_points, 2)
    }

    /// Storage length including ghosts.
    pub fn len(&self) -> usize {
        self.n_points + 2 * self.ghost_depth
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate of storage slot `i`.
    pub fn x_at(&self, i: usize) -> f64 {
        self.x0 + (i as f64 - self.ghost_depth as f64) * self.h
    }

    /// Storage slots of the physical nodes.
    pub fn physical(&self) -> core::ops::Range<usize> {
        self.ghost_depth..self.ghost_depth + self.n_points
    }

    /// Storage slots updated by a step (physical nodes minus the endpoints).
    pub fn interior(&self) -> core::ops::Range<usize> {
        self.ghost_depth + 1..self.ghost_depth + self.n_points - 1
    }
}

/// Grid values at one time level, ghosts included.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    pub values: Vec<f64>,
    pub time: f64,
}

impl Field {
    pub fn sample(g: &Grid1D, time: f64, mut u: impl FnMut(f64) -> f64) -> Field {
        Field {
            values: (0..g.len()).map(|i| u(g.x_at(i))).collect(),
            time,
        }
    }

    /// Values at the physical nodes.
    pub fn physical<'a>(&'a self, g: &Grid1D) -> &'a [f64] {
        &self.values[g.physical()]
    }
}

/// Artificial viscosity of the invariant scheme.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ArtificialViscosity {
    Zero,
    /// `C = κ·t·(t·u − x)²·u_x²`.
    Quadratic { kappa: f64 },
}

impl ArtificialViscosity {
    pub const DEFAULT: ArtificialViscosity = ArtificialViscosity::Quadratic { kappa: -0.01 };

    pub fn eval(&self, x: f64, t: f64, u: f64, ux: f64) -> f64 {
        match *self {
            ArtificialViscosity::Zero => 0.0,
            ArtificialViscosity::Quadratic { kappa } => {
                let w = t * u - x;
                kappa * t * w * w * ux * ux
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepParams {
    pub tau: f64,
    pub nu: f64,
    pub art_visc: ArtificialViscosity,
}

impl StepParams {
    pub fn new(tau: f64, nu: f64, art_visc: ArtificialViscosity) -> Result<Self, SchemeError> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(SchemeError::InvalidParams("tau must be positive"));
        }
        if !(nu >= 0.0 && nu.is_finite()) {
            return Err(SchemeError::InvalidParams("nu must be non-negative"));
        }
        Ok(StepParams { tau, nu, art_visc })
    }
}

/// Dirichlet data for endpoints and ghosts, plus an optional source term
/// added to the right-hand side of every scheme.
pub trait BoundaryProvider: Sync {
    fn value(&self, x: f64, t: f64) -> f64;

    fn source(&self, _x: f64, _t: f64) -> f64 {
        0.0
    }
}

/// Boundary data from a closure, without a source term.
pub struct FnBoundary<F>(pub F);

impl<F: Fn(f64, f64) -> f64 + Sync> BoundaryProvider for FnBoundary<F> {
    fn value(&self, x: f64, t: f64) -> f64 {
        (self.0)(x, t)
    }
}

/// `Ω = (τu²/2 − C)/h²`, so that `C = τu²/2 − h²Ω`.
pub fn compute_omega(x: f64, t: f64, u_half: f64, ux_half: f64, p: &StepParams, h: f64) -> f64 {
    (0.5 * p.tau * u_half * u_half - p.art_visc.eval(x, t, u_half, ux_half)) / (h * h)
}

/// `Ω` at every half point `x_{i+1/2}` of the storage (length `len − 1`),
/// with `u` and `u_x` there taken as the neighbour average and difference.
pub fn omega_half_points(f: &Field, p: &StepParams, g: &Grid1D) -> Vec<f64> {
    let u = &f.values;
    (0..u.len() - 1)
        .map(|i| {
            let x = g.x_at(i) + 0.5 * g.h;
            let uh = 0.5 * (u[i] + u[i + 1]);
            let uxh = (u[i + 1] - u[i]) / g.h;
            compute_omega(x, f.time, uh, uxh, p, g.h)
        })
        .collect()
}

fn check_finite(f: &Field, g: &Grid1D) -> Result<(), SchemeError> {
    match f.values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(SchemeError::Instability {
            index: i as i64 - g.ghost_depth as i64,
            time: f.time,
        }),
        None => Ok(()),
    }
}

/// Overwrites endpoints and ghosts with boundary data at `f.time`.
pub fn apply_boundary(f: &mut Field, g: &Grid1D, bc: &dyn BoundaryProvider) {
    let len = g.len();
    let right = g.ghost_depth + g.n_points - 1;
    for i in (0..=g.ghost_depth).chain(right..len) {
        f.values[i] = bc.value(g.x_at(i), f.time);
    }
}

/// `(1/h)μδf − (ν/h²)δ²u` at `i`.
fn centered_rate(u: &[f64], fl: &[f64], i: usize, h: f64, nu: f64) -> f64 {
    0.5 * (fl[i + 1] - fl[i - 1]) / h - nu * (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h)
}

fn delta2(u: &[f64], i: usize) -> f64 {
    u[i + 1] - 2.0 * u[i] + u[i - 1]
}

fn delta4(u: &[f64], i: usize) -> f64 {
    u[i + 2] - 4.0 * u[i + 1] + 6.0 * u[i] - 4.0 * u[i - 1] + u[i - 2]
}

fn mu_delta3(fl: &[f64], i: usize) -> f64 {
    0.5 * (fl[i + 2] - 2.0 * fl[i + 1] + 2.0 * fl[i - 1] - fl[i - 2])
}

/// Terms shared by Lax-Wendroff and the invariant scheme:
/// `ντ/(2h³)[u₊ μδ²u|₊ − u₋ μδ²u|₋] − ν²τ/2·δ⁴u/h⁴ + ντ/2·μδ³f/h³`.
fn viscous_correction(u: &[f64], fl: &[f64], i: usize, h: f64, p: &StepParams) -> f64 {
    let (nu, tau) = (p.nu, p.tau);
    let up = 0.5 * (u[i] + u[i + 1]);
    let um = 0.5 * (u[i - 1] + u[i]);
    let mp = 0.5 * (delta2(u, i) + delta2(u, i + 1));
    let mm = 0.5 * (delta2(u, i - 1) + delta2(u, i));
    let h3 = h * h * h;
    0.5 * nu * tau * (up * mp - um * mm) / h3 - 0.5 * nu * nu * tau * delta4(u, i) / (h3 * h)
        + 0.5 * nu * tau * mu_delta3(fl, i) / h3
}

/// `(u_i^{n+1} − u_i^n)/τ` of an explicit scheme at storage slot `i`; `fl` holds `u²/2`
/// and `omega` the half-point `Ω` values.
pub fn explicit_rate(kind: SchemeKind, u: &[f64], fl: &[f64], omega: &[f64], i: usize, h: f64, p: &StepParams) -> f64 {
    match kind {
        SchemeKind::Ftcs => centered_rate(u, fl, i, h, p.nu),
        SchemeKind::LaxWendroff => {
            let up = 0.5 * (u[i] + u[i + 1]);
            let um = 0.5 * (u[i - 1] + u[i]);
            let adv = -0.5 * p.tau * (up * (fl[i + 1] - fl[i]) - um * (fl[i] - fl[i - 1])) / (h * h);
            centered_rate(u, fl, i, h, p.nu) + adv + viscous_correction(u, fl, i, h, p)
        }
        SchemeKind::Invariant | SchemeKind::HighOrder => {
            let flux = (0.5 * (fl[i + 1] - fl[i - 1]) - mu_delta3(fl, i) / 6.0) / h;
            let visc = p.nu * (delta2(u, i) - delta4(u, i) / 12.0) / (h * h);
            let art = omega[i] * (u[i + 1] - u[i]) - omega[i - 1] * (u[i] - u[i - 1]);
            flux - visc - art + viscous_correction(u, fl, i, h, p)
        }
        SchemeKind::CrankNicolson => unreachable!("implicit scheme"),
    }
}

/// Advances `f` by one step of `p.tau`.
///
/// `HighOrder` ignores `p.art_visc` and runs the invariant update with `C = 0`.
pub fn step(
    kind: SchemeKind,
    f: &Field,
    p: &StepParams,
    g: &Grid1D,
    bc: &dyn BoundaryProvider,
) -> Result<Field, SchemeError> {
    if f.values.len() != g.len() {
        return Err(SchemeError::InvalidGrid("field length does not match grid"));
    }
    check_finite(f, g)?;
    if kind == SchemeKind::CrankNicolson {
        return solve_cn_level(f, p, g, bc, 1e-12, 50).map(|s| s.field);
    }
    let p = if kind == SchemeKind::HighOrder {
        StepParams { art_visc: ArtificialViscosity::Zero, ..*p }
    } else {
        *p
    };
    let u = &f.values;
    let fl: Vec<f64> = u.iter().map(|v| 0.5 * v * v).collect();
    let omega = match kind {
        SchemeKind::Invariant | SchemeKind::HighOrder => omega_half_points(f, &p, g),
        _ => Vec::new(),
    };
    let t_mid = f.time + 0.5 * p.tau;
    let mut out = Field {
        values: u.clone(),
        time: f.time + p.tau,
    };
    for i in g.interior() {
        let rate = explicit_rate(kind, u, &fl, &omega, i, g.h, &p);
        out.values[i] = u[i] - p.tau * rate + p.tau * bc.source(g.x_at(i), t_mid);
    }
    apply_boundary(&mut out, g, bc);
    check_finite(&out, g)?;
    Ok(out)
}
