//! Line-oriented run configuration.

use std::fmt::Write as _;
use std::path::PathBuf;

use invscheme_core::problems::{FrameTransform, ProblemSetup, ReferenceSolution};
use invscheme_core::schemes::{ArtificialViscosity, Grid1D, SchemeKind};
use invscheme_core::stability::characteristic_speed;

pub const X_MIN: f64 = 0.0;
pub const X_MAX: f64 = 40.0;
pub const MAX_T_FINAL: f64 = 20.0;
pub const MIN_NX: usize = 11;

/// Keys accepted by [`parse_config`], with their defaults.
pub const KEYS: &[(&str, &str)] = &[
    ("scheme", "required: ftcs | lax_wendroff | crank_nicolson | invariant | high_order"),
    ("re_h", "mesh Reynolds number a*h/nu (exactly one of re_h, nu)"),
    ("nu", "viscosity (exactly one of re_h, nu)"),
    ("cfl", "required: a*tau/h, positive"),
    ("nx", "grid points on [0, 40], at least 11 (default 201)"),
    ("t_final", "final time in (0, 20] or 0 (default 20)"),
    ("frame", "kind[:eps], identity or f2 = galilean:1 (default identity)"),
    ("snapshot_times", "comma-separated times (default 5)"),
    ("c_kappa", "kappa of C = kappa*t*(t*u - x)^2*u_x^2 (default -0.01)"),
    ("output_dir", "directory for emitted files (default out)"),
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ViscositySpec {
    Nu(f64),
    ReH(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub scheme: SchemeKind,
    pub frame: FrameTransform,
    pub nx: usize,
    pub viscosity: ViscositySpec,
    pub cfl: f64,
    pub t_final: f64,
    pub snapshot_times: Vec<f64>,
    pub c_kappa: f64,
    pub output_dir: PathBuf,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("missing required key '{0}'")]
    Missing(&'static str),
    #[error("{0}")]
    Invalid(String),
    #[error("viscosity fixed point did not converge after {iterations} iterations (last nu = {nu}); give nu directly")]
    NoFixedPoint { iterations: usize, nu: f64 },
}

fn line_err(line: usize, msg: impl Into<String>) -> ConfigError {
    ConfigError::Line { line, msg: msg.into() }
}

fn number(line: usize, key: &str, v: &str) -> Result<f64, ConfigError> {
    let x: f64 = v
        .parse()
        .map_err(|_| line_err(line, format!("malformed number for {key}: '{v}'")))?;
    if !x.is_finite() {
        return Err(line_err(line, format!("{key} must be finite")));
    }
    Ok(x)
}

fn positive(line: usize, key: &str, v: &str) -> Result<f64, ConfigError> {
    let x = number(line, key, v)?;
    if !(x > 0.0) {
        return Err(line_err(line, format!("{key} must be positive")));
    }
    Ok(x)
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut scheme = None;
    let mut frame = FrameTransform::identity();
    let mut nx = 201usize;
    let mut nu: Option<(usize, f64)> = None;
    let mut re_h: Option<(usize, f64)> = None;
    let mut cfl = None;
    let mut t_final = MAX_T_FINAL;
    let mut snapshot_times = vec![5.0];
    let mut c_kappa = -0.01;
    let mut output_dir = PathBuf::from("out");
    let mut seen: Vec<String> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| line_err(line, format!("expected key = value, got '{body}'")))?;
        let (key, value) = (key.trim(), value.trim());
        if seen.iter().any(|k| k == key) {
            return Err(line_err(line, format!("duplicate key '{key}'")));
        }
        seen.push(key.to_string());
        match key {
            "scheme" => {
                scheme = Some(value.parse::<SchemeKind>().map_err(|e| line_err(line, e.to_string()))?)
            }
            "frame" => frame = value.parse().map_err(|e: invscheme_core::problems::FrameError| line_err(line, e.to_string()))?,
            "nx" => {
                let n: usize = value
                    .parse()
                    .map_err(|_| line_err(line, format!("malformed integer for nx: '{value}'")))?;
                if n < MIN_NX {
                    return Err(line_err(line, format!("nx must be at least {MIN_NX}")));
                }
                nx = n;
            }
            "nu" => {
                if let Some((l, _)) = re_h {
                    return Err(line_err(line, format!("nu conflicts with re_h on line {l}; give only one")));
                }
                nu = Some((line, positive(line, key, value)?));
            }
            "re_h" => {
                if let Some((l, _)) = nu {
                    return Err(line_err(line, format!("re_h conflicts with nu on line {l}; give only one")));
                }
                re_h = Some((line, positive(line, key, value)?));
            }
            "cfl" => cfl = Some(positive(line, key, value)?),
            "t_final" => {
                let t = number(line, key, value)?;
                if !(0.0..=MAX_T_FINAL).contains(&t) {
                    return Err(line_err(line, format!("t_final must lie in [0, {MAX_T_FINAL}]")));
                }
                t_final = t;
            }
            "snapshot_times" => {
                snapshot_times = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        let t = number(line, key, s)?;
                        if t < 0.0 {
                            return Err(line_err(line, "snapshot times must be non-negative"));
                        }
                        Ok(t)
                    })
                    .collect::<Result<_, _>>()?;
            }
            "c_kappa" => c_kappa = number(line, key, value)?,
            "output_dir" => {
                if value.is_empty() {
                    return Err(line_err(line, "output_dir must not be empty"));
                }
                output_dir = PathBuf::from(value);
            }
            _ => return Err(line_err(line, format!("unknown key '{key}'"))),
        }
    }

    let viscosity = match (nu, re_h) {
        (Some((_, v)), None) => ViscositySpec::Nu(v),
        (None, Some((_, r))) => ViscositySpec::ReH(r),
        _ => return Err(ConfigError::Missing("re_h or nu")),
    };
    Ok(RunConfig {
        scheme: scheme.ok_or(ConfigError::Missing("scheme"))?,
        frame,
        nx,
        viscosity,
        cfl: cfl.ok_or(ConfigError::Missing("cfl"))?,
        t_final,
        snapshot_times,
        c_kappa,
        output_dir,
    })
}

impl RunConfig {
    /// The configuration in `parse_config` syntax.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "scheme = {}", self.scheme);
        match self.viscosity {
            ViscositySpec::Nu(v) => {
                let _ = writeln!(s, "nu = {v:?}");
            }
            ViscositySpec::ReH(r) => {
                let _ = writeln!(s, "re_h = {r:?}");
            }
        }
        let _ = writeln!(s, "cfl = {:?}", self.cfl);
        let _ = writeln!(s, "nx = {}", self.nx);
        let _ = writeln!(s, "t_final = {:?}", self.t_final);
        let _ = writeln!(s, "frame = {}", self.frame);
        let times: Vec<String> = self.snapshot_times.iter().map(|t| format!("{t:?}")).collect();
        let _ = writeln!(s, "snapshot_times = {}", times.join(","));
        let _ = writeln!(s, "c_kappa = {:?}", self.c_kappa);
        let _ = writeln!(s, "output_dir = {}", self.output_dir.display());
        s
    }

    pub fn art_visc(&self) -> ArtificialViscosity {
        if self.c_kappa == 0.0 {
            ArtificialViscosity::Zero
        } else {
            ArtificialViscosity::Quadratic { kappa: self.c_kappa }
        }
    }

    pub fn grid(&self) -> Grid1D {
        Grid1D::spanning(X_MIN, X_MAX, self.nx).expect("nx >= 11 gives a valid grid")
    }

    pub fn setup(&self, nu: f64) -> ProblemSetup {
        ProblemSetup {
            t_final: self.t_final.max(f64::MIN_POSITIVE),
            ..ProblemSetup::standard(nu, self.frame)
        }
    }
}

/// Mesh size, time step, viscosity and characteristic speed of a run.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct ResolvedSteps {
    pub h: f64,
    pub tau: f64,
    pub nu: f64,
    pub a: f64,
}

fn initial_speed(cfg: &RunConfig, grid: &Grid1D, nu: f64) -> Result<f64, ConfigError> {
    let reference = ReferenceSolution::pushforward(cfg.frame, ReferenceSolution::exact(nu));
    let field = invscheme_core::schemes::Field::sample(grid, 0.0, |x| reference.u(x, 0.0).unwrap_or(f64::NAN));
    characteristic_speed(&field, grid).map_err(|e| ConfigError::Invalid(e.to_string()))
}

/// `h = 40/(nx − 1)`, `a = max |u(x, 0)|`, `τ = cfl·h/a`; with `re_h` the
/// viscosity solves `ν = a(ν)·h/re_h` by fixed-point iteration.
pub fn resolve_steps(cfg: &RunConfig) -> Result<ResolvedSteps, ConfigError> {
    let grid = cfg.grid();
    let h = grid.h;
    let (nu, a) = match cfg.viscosity {
        ViscositySpec::Nu(nu) => (nu, initial_speed(cfg, &grid, nu)?),
        ViscositySpec::ReH(re_h) => {
            let mut nu = 2.0 * h / re_h;
            let mut done = None;
            for _ in 0..20 {
                let a = initial_speed(cfg, &grid, nu)?;
                let next = a * h / re_h;
                let converged = (next - nu).abs() <= 1e-10 * nu.max(1.0);
                nu = next;
                if converged {
                    done = Some(initial_speed(cfg, &grid, nu)?);
                    break;
                }
            }
            match done {
                Some(a) => (nu, a),
                None => return Err(ConfigError::NoFixedPoint { iterations: 20, nu }),
            }
        }
    };
    if !(a > 0.0) {
        return Err(ConfigError::Invalid("initial data vanish; cfl is undefined".into()));
    }
    Ok(ResolvedSteps {
        h,
        tau: cfg.cfl * h / a,
        nu,
        a,
    })
}

/// Help text listing every key.
pub fn keys_help() -> String {
    let mut s = String::from("config keys (key = value, # comments):\n");
    for (k, d) in KEYS {
        let _ = writeln!(s, "  {k:<15}{d}");
    }
    s
}
