//! Reference solutions, frame changes and problem setup.

mod frames;
mod jet;

use alloc::boxed::Box;
use alloc::string::String;
use alloc::format;

use crate::modeq::TestField;
use crate::schemes::{BoundaryProvider, Field, Grid1D};

pub use frames::{FrameError, FrameKind, FramePoint, FrameTransform};
pub use jet::Jet;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ProblemError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("invalid problem: {0}")]
    Invalid(&'static str),
    #[error("grid [{x_min}, {x_max}] does not span the problem domain")]
    GridMismatch { x_min: f64, x_max: f64 },
}

/// `u`, `u_x`, `u_xx`, `u_t` at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExactValues {
    pub u: f64,
    pub ux: f64,
    pub uxx: f64,
    pub ut: f64,
}

impl ExactValues {
    fn from_jet(j: &Jet) -> ExactValues {
        ExactValues {
            u: j.value(),
            ux: j.derivative(1, 0),
            uxx: j.derivative(2, 0),
            ut: j.derivative(0, 1),
        }
    }

    /// `u_t + u u_x − ν u_xx`.
    pub fn burgers_residual(&self, nu: f64) -> f64 {
        self.ut + self.u * self.ux - nu * self.uxx
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ReferenceSolution {
    /// `2 + ((x−2t)/s) / (1 + ν²√s·exp((x−2t)²/(4νs)))`, `s = t + 0.1`.
    Exact { nu: f64 },
    /// `2 + amp·sin(k(x − ct))·exp(−νk²t)`, driven by its own residual as
    /// a source term.
    Manufactured { nu: f64, k: f64, c: f64, amp: f64 },
    /// `base` seen in the image frame of `frame`.
    Pushforward {
        frame: FrameTransform,
        base: Box<ReferenceSolution>,
    },
}

/// Saturated closed form: with `w = exp(−E)` the fraction becomes
/// `z·w/(w + ν²√s)`, which tends to 0 instead of overflowing.
fn exact_jet(nu: f64, x: &Jet, t: &Jet) -> Jet {
    let s = t.add_const(0.1);
    let xi = x - &t.scale(2.0);
    let z = &xi * &s.recip();
    let e = &(&xi * &xi) * &s.scale(4.0 * nu).recip();
    let w = (-&e).exp();
    let denom = &w + &s.sqrt().scale(nu * nu);
    (&(&z * &w) * &denom.recip()).add_const(2.0)
}

impl ReferenceSolution {
    pub fn exact(nu: f64) -> ReferenceSolution {
        ReferenceSolution::Exact { nu }
    }

    /// `base` in the frame `frame`; identity frames return `base` itself.
    pub fn pushforward(frame: FrameTransform, base: ReferenceSolution) -> ReferenceSolution {
        if frame.is_identity() {
            base
        } else {
            ReferenceSolution::Pushforward {
                frame,
                base: Box::new(base),
            }
        }
    }

    pub fn nu(&self) -> f64 {
        match self {
            ReferenceSolution::Exact { nu } | ReferenceSolution::Manufactured { nu, .. } => *nu,
            ReferenceSolution::Pushforward { frame, base } => frame.map_nu(base.nu()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ReferenceSolution::Exact { .. } => "exact".into(),
            ReferenceSolution::Manufactured { k, c, amp, .. } => {
                format!("manufactured(k={k},c={c},amp={amp})")
            }
            ReferenceSolution::Pushforward { frame, base } => format!("{} in {}", base.label(), frame),
        }
    }

    /// Whether schemes need the residual as a source term.
    pub fn needs_forcing(&self) -> bool {
        match self {
            ReferenceSolution::Exact { .. } => false,
            ReferenceSolution::Manufactured { .. } => true,
            ReferenceSolution::Pushforward { base, .. } => base.needs_forcing(),
        }
    }

    /// The solution evaluated on jet arguments.
    pub fn eval_jet(&self, x: &Jet, t: &Jet) -> Result<Jet, ProblemError> {
        match self {
            ReferenceSolution::Exact { nu } => Ok(exact_jet(*nu, x, t)),
            ReferenceSolution::Manufactured { nu, k, c, amp } => {
                let phase = (x - &t.scale(*c)).scale(*k);
                let decay = t.scale(-nu * k * k).exp();
                Ok((&phase.sin() * &decay).scale(*amp).add_const(2.0))
            }
            ReferenceSolution::Pushforward { frame, base } => {
                let (x0, t0) = frame.pull_back(x, t)?;
                let u0 = base.eval_jet(&x0, &t0)?;
                Ok(frame.push_u(&x0, &t0, &u0))
            }
        }
    }

    /// Taylor jet of order `order` at `(x, t)`.
    pub fn jet_at(&self, x: f64, t: f64, order: u32) -> Result<Jet, ProblemError> {
        self.eval_jet(&Jet::x(order, x), &Jet::t(order, t))
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<ExactValues, ProblemError> {
        Ok(ExactValues::from_jet(&self.jet_at(x, t, 2)?))
    }

    pub fn u(&self, x: f64, t: f64) -> Result<f64, ProblemError> {
        Ok(self.jet_at(x, t, 0)?.value())
    }

    /// `u_t + u u_x − ν u_xx` with this solution's `ν`.
    pub fn residual(&self, x: f64, t: f64) -> Result<f64, ProblemError> {
        Ok(self.eval(x, t)?.burgers_residual(self.nu()))
    }
}

/// Values and derivatives of the closed-form exact solution.
pub fn exact_eval(x: f64, t: f64, nu: f64) -> ExactValues {
    ExactValues::from_jet(&exact_jet(nu, &Jet::x(2, x), &Jet::t(2, t)))
}

impl TestField for ReferenceSolution {
    fn nu(&self) -> f64 {
        ReferenceSolution::nu(self)
    }

    fn derivative(&self, a: u32, b: u32, x: f64, t: f64) -> f64 {
        self.jet_at(x, t, a + b)
            .map(|j| j.derivative(a, b))
            .unwrap_or(f64::NAN)
    }
}

impl BoundaryProvider for ReferenceSolution {
    fn value(&self, x: f64, t: f64) -> f64 {
        self.u(x, t).unwrap_or(f64::NAN)
    }

    fn source(&self, x: f64, t: f64) -> f64 {
        if self.needs_forcing() {
            self.residual(x, t).unwrap_or(f64::NAN)
        } else {
            0.0
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSetup {
    pub x_min: f64,
    pub x_max: f64,
    pub t_final: f64,
    /// Solution in the lab frame.
    pub base: ReferenceSolution,
    pub frame: FrameTransform,
}

impl ProblemSetup {
    /// `[0, 40] × [0, 20]` with the closed-form solution.
    pub fn standard(nu: f64, frame: FrameTransform) -> ProblemSetup {
        ProblemSetup {
            x_min: 0.0,
            x_max: 40.0,
            t_final: 20.0,
            base: ReferenceSolution::exact(nu),
            frame,
        }
    }

    pub fn validate(&self) -> Result<(), ProblemError> {
        if !(self.x_min < self.x_max) {
            return Err(ProblemError::Invalid("x_min must be below x_max"));
        }
        if !(self.t_final > 0.0) {
            return Err(ProblemError::Invalid("t_final must be positive"));
        }
        Ok(())
    }

    /// The reference solution of the active frame.
    pub fn reference(&self) -> ReferenceSolution {
        ReferenceSolution::pushforward(self.frame, self.base.clone())
    }
}

/// Initial field at `t = 0` (ghosts included) and the reference solution,
/// which doubles as boundary provider.
pub fn build_problem(setup: &ProblemSetup, grid: &Grid1D) -> Result<(Field, ReferenceSolution), ProblemError> {
    setup.validate()?;
    let last = grid.x_at(grid.ghost_depth + grid.n_points - 1);
    let first = grid.x_at(grid.ghost_depth);
    let tol = 1e-9 * (setup.x_max - setup.x_min);
    if (first - setup.x_min).abs() > tol || (last - setup.x_max).abs() > tol {
        return Err(ProblemError::GridMismatch { x_min: first, x_max: last });
    }
    let reference = setup.reference();
    let mut values = alloc::vec::Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        values.push(reference.u(grid.x_at(i), 0.0)?);
    }
    Ok((Field { values, time: 0.0 }, reference))
}

/// Outcome of sampling the Burgers residual of a reference solution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualAudit {
    pub points: usize,
    pub max_residual: f64,
    pub at: (f64, f64),
}

/// Radical inverse of `i` in `base` (van der Corput).
fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Max `|u_t + u u_x − ν u_xx|` over `n` Halton points of
/// `[x_min, x_max] × [0, t_final]`.
pub fn residual_audit(reference: &ReferenceSolution, setup: &ProblemSetup, n: usize) -> Result<ResidualAudit, ProblemError> {
    let mut worst = ResidualAudit {
        points: n,
        max_residual: 0.0,
        at: (f64::NAN, f64::NAN),
    };
    for i in 1..=n {
        let x = setup.x_min + (setup.x_max - setup.x_min) * radical_inverse(i, 2);
        let t = setup.t_final * radical_inverse(i, 3);
        let r = libm::fabs(reference.residual(x, t)?);
        if !(r <= worst.max_residual) {
            worst.max_residual = r;
            worst.at = (x, t);
        }
    }
    Ok(worst)
}
