use alloc::vec;
use alloc::vec::Vec;

use super::{apply_boundary, BoundaryProvider, Field, Grid1D, SchemeError, StepParams};

/// Result of one implicit Crank-Nicolson level.
#[derive(Clone, Debug, PartialEq)]
pub struct CnSolve {
    pub field: Field,
    /// Residual evaluations performed, the initial guess included.
    pub iterations: usize,
    /// Max-norm of `τ·G(v)` at the returned level.
    pub residual: f64,
}

/// Thomas elimination for `lower[k]·x[k−1] + diag[k]·x[k] + upper[k]·x[k+1] = rhs[k]`.
/// `lower[0]` and `upper[n−1]` are ignored. Returns `None` on a zero pivot.
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut denom = diag[0];
    if denom == 0.0 {
        return None;
    }
    c[0] = upper[0] / denom;
    d[0] = rhs[0] / denom;
    for k in 1..n {
        denom = diag[k] - lower[k] * c[k - 1];
        if denom == 0.0 {
            return None;
        }
        c[k] = if k + 1 < n { upper[k] / denom } else { 0.0 };
        d[k] = (rhs[k] - lower[k] * d[k - 1]) / denom;
    }
    for k in (0..n - 1).rev() {
        d[k] -= c[k] * d[k + 1];
    }
    Some(d)
}

/// `τ·G_i(v)` for the Crank-Nicolson system
/// `(v−u)/τ + μδ(v²/2 + u²/2)/(2h) − ν δ²(v + u)/(2h²) − s = 0`.
fn residual(v: &[f64], u: &[f64], s: &[f64], range: core::ops::Range<usize>, h: f64, p: &StepParams) -> Vec<f64> {
    let a = p.tau / (4.0 * h);
    let b = p.nu * p.tau / (2.0 * h * h);
    range
        .map(|i| {
            let flux = 0.5 * (v[i + 1] * v[i + 1] - v[i - 1] * v[i - 1])
                + 0.5 * (u[i + 1] * u[i + 1] - u[i - 1] * u[i - 1]);
            let visc = (v[i + 1] - 2.0 * v[i] + v[i - 1]) + (u[i + 1] - 2.0 * u[i] + u[i - 1]);
            v[i] - u[i] + a * flux - b * visc - p.tau * s[i]
        })
        .collect()
}

fn max_abs(r: &[f64]) -> f64 {
    r.iter().fold(0.0f64, |m, v| if v.is_nan() { f64::NAN } else { m.max(v.abs()) })
}

/// Solves the implicit level by damped Newton iteration with a tridiagonal
/// Jacobian. Endpoints and ghosts come from `bc` at `t + τ`.
pub fn solve_cn_level(
    f: &Field,
    p: &StepParams,
    g: &Grid1D,
    bc: &dyn BoundaryProvider,
    tol: f64,
    max_iter: usize,
) -> Result<CnSolve, SchemeError> {
    assert!(tol > 0.0, "tolerance must be positive");
    let u = &f.values;
    let mut next = Field {
        values: u.clone(),
        time: f.time + p.tau,
    };
    apply_boundary(&mut next, g, bc);
    let t_mid = f.time + 0.5 * p.tau;
    let mut s = vec![0.0; u.len()];
    for i in g.interior() {
        s[i] = bc.source(g.x_at(i), t_mid);
    }

    let range = g.interior();
    let first = range.start;
    let a = p.tau / (4.0 * g.h);
    let b = p.nu * p.tau / (2.0 * g.h * g.h);

    let mut r = residual(&next.values, u, &s, range.clone(), g.h, p);
    let mut norm = max_abs(&r);
    let mut evals = 1;
    while !(norm <= tol) {
        if evals >= max_iter || !norm.is_finite() {
            return Err(SchemeError::NoConvergence { iterations: evals, residual: norm });
        }
        let v = &next.values;
        let lower: Vec<f64> = range.clone().map(|i| -a * v[i - 1] - b).collect();
        let diag: Vec<f64> = range.clone().map(|_| 1.0 + 2.0 * b).collect();
        let upper: Vec<f64> = range.clone().map(|i| a * v[i + 1] - b).collect();
        let rhs: Vec<f64> = r.iter().map(|x| -x).collect();
        let dv = solve_tridiagonal(&lower, &diag, &upper, &rhs)
            .ok_or(SchemeError::NoConvergence { iterations: evals, residual: norm })?;

        let mut lambda = 1.0;
        loop {
            let mut trial = next.values.clone();
            for (k, d) in dv.iter().enumerate() {
                trial[first + k] += lambda * d;
            }
            let rt = residual(&trial, u, &s, range.clone(), g.h, p);
            let nt = max_abs(&rt);
            evals += 1;
            if nt < norm || lambda < 1.0 / 1024.0 || evals >= max_iter {
                next.values = trial;
                r = rt;
                norm = nt;
                break;
            }
            lambda *= 0.5;
        }
    }
    if let Some(i) = next.values.iter().position(|v| !v.is_finite()) {
        return Err(SchemeError::Instability {
            index: i as i64 - g.ghost_depth as i64,
            time: next.time,
        });
    }
    Ok(CnSolve { field: next, iterations: evals, residual: norm })
}
