use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use super::jet::Jet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FrameKind {
    SpaceTranslation,
    TimeTranslation,
    /// `(εx, ε²t, u/ε, ν)`
    Dilatation3,
    /// `(x/(1−εt), t/(1−εt), εx + u(1−εt), ν)`
    Projective,
    /// `(x + εt, t, u + ε, ν)`
    Galilean,
    /// `(x, t/ε, εu, εν)`
    Dilatation6,
}

impl FrameKind {
    pub const ALL: [FrameKind; 6] = [
        FrameKind::SpaceTranslation,
        FrameKind::TimeTranslation,
        FrameKind::Dilatation3,
        FrameKind::Projective,
        FrameKind::Galilean,
        FrameKind::Dilatation6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FrameKind::SpaceTranslation => "space_translation",
            FrameKind::TimeTranslation => "time_translation",
            FrameKind::Dilatation3 => "dilatation3",
            FrameKind::Projective => "projective",
            FrameKind::Galilean => "galilean",
            FrameKind::Dilatation6 => "dilatation6",
        }
    }

    /// Dilatations are parametrized multiplicatively.
    pub fn is_multiplicative(self) -> bool {
        matches!(self, FrameKind::Dilatation3 | FrameKind::Dilatation6)
    }

    /// Parameter value of the identity map.
    pub fn identity_parameter(self) -> f64 {
        if self.is_multiplicative() {
            1.0
        } else {
            0.0
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum FrameError {
    #[error("projective transform with eps = {eps} has a pole at t = {t}")]
    Pole { eps: f64, t: f64 },
    #[error("dilatation parameter must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error("cannot parse frame '{0}' (expected kind[:eps], e.g. galilean:1)")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameTransform {
    pub kind: FrameKind,
    pub eps: f64,
}

/// Point in `(x, t, u, ν)` space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FramePoint {
    pub x: f64,
    pub t: f64,
    pub u: f64,
    pub nu: f64,
}

impl FrameTransform {
    pub fn new(kind: FrameKind, eps: f64) -> Result<FrameTransform, FrameError> {
        if kind.is_multiplicative() && !(eps > 0.0) {
            return Err(FrameError::NonPositiveScale(eps));
        }
        Ok(FrameTransform { kind, eps })
    }

    pub fn identity() -> FrameTransform {
        FrameTransform {
            kind: FrameKind::SpaceTranslation,
            eps: 0.0,
        }
    }

    /// `(x + t, t, u + 1, ν)`.
    pub fn galilean_unit() -> FrameTransform {
        FrameTransform {
            kind: FrameKind::Galilean,
            eps: 1.0,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.eps == self.kind.identity_parameter()
    }

    pub fn inverse(&self) -> FrameTransform {
        let eps = if self.kind.is_multiplicative() {
            1.0 / self.eps
        } else {
            -self.eps
        };
        FrameTransform { kind: self.kind, eps }
    }

    /// `self` followed by `then`, when both are of the same kind.
    pub fn compose(&self, then: &FrameTransform) -> Option<FrameTransform> {
        if self.kind != then.kind {
            return None;
        }
        let eps = if self.kind.is_multiplicative() {
            self.eps * then.eps
        } else {
            self.eps + then.eps
        };
        Some(FrameTransform { kind: self.kind, eps })
    }

    fn check_projective(&self, t: f64) -> Result<(), FrameError> {
        if self.kind == FrameKind::Projective && !(1.0 - self.eps * t > 0.0) {
            return Err(FrameError::Pole { eps: self.eps, t });
        }
        Ok(())
    }

    pub fn apply_point(&self, p: FramePoint) -> Result<FramePoint, FrameError> {
        let e = self.eps;
        let FramePoint { x, t, u, nu } = p;
        Ok(match self.kind {
            FrameKind::SpaceTranslation => FramePoint { x: x + e, ..p },
            FrameKind::TimeTranslation => FramePoint { t: t + e, ..p },
            FrameKind::Dilatation3 => FramePoint {
                x: e * x,
                t: e * e * t,
                u: u / e,
                nu,
            },
            FrameKind::Projective => {
                self.check_projective(t)?;
                let d = 1.0 - e * t;
                FramePoint {
                    x: x / d,
                    t: t / d,
                    u: e * x + u * d,
                    nu,
                }
            }
            FrameKind::Galilean => FramePoint {
                x: x + e * t,
                u: u + e,
                ..p
            },
            FrameKind::Dilatation6 => FramePoint {
                t: t / e,
                u: e * u,
                nu: e * nu,
                x,
            },
        })
    }

    pub fn map_nu(&self, nu: f64) -> f64 {
        if self.kind == FrameKind::Dilatation6 {
            self.eps * nu
        } else {
            nu
        }
    }

    /// Original coordinates `(x, t)` as jets in the image coordinates.
    pub(crate) fn pull_back(&self, x: &Jet, t: &Jet) -> Result<(Jet, Jet), FrameError> {
        let e = self.eps;
        Ok(match self.kind {
            FrameKind::SpaceTranslation => (x.add_const(-e), t.clone()),
            FrameKind::TimeTranslation => (x.clone(), t.add_const(-e)),
            FrameKind::Dilatation3 => (x.scale(1.0 / e), t.scale(1.0 / (e * e))),
            FrameKind::Projective => {
                let d = t.scale(e).add_const(1.0);
                if !(d.value() > 0.0) {
                    return Err(FrameError::Pole { eps: e, t: t.value() });
                }
                let r = d.recip();
                (x * &r, t * &r)
            }
            FrameKind::Galilean => (x - &t.scale(e), t.clone()),
            FrameKind::Dilatation6 => (x.clone(), t.scale(e)),
        })
    }

    /// Transformed `u` given the original point and value as jets.
    pub(crate) fn push_u(&self, x: &Jet, t: &Jet, u: &Jet) -> Jet {
        let e = self.eps;
        match self.kind {
            FrameKind::SpaceTranslation | FrameKind::TimeTranslation => u.clone(),
            FrameKind::Dilatation3 => u.scale(1.0 / e),
            FrameKind::Projective => &x.scale(e) + &(u * &t.scale(-e).add_const(1.0)),
            FrameKind::Galilean => u.add_const(e),
            FrameKind::Dilatation6 => u.scale(e),
        }
    }
}

impl fmt::Display for FrameTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind.name(), self.eps)
    }
}

impl FromStr for FrameTransform {
    type Err = FrameError;

    /// `kind:eps`, a bare kind (identity parameter), or `identity`.
    fn from_str(s: &str) -> Result<Self, FrameError> {
        let s = s.trim();
        if s == "identity" || s == "f1" {
            return Ok(FrameTransform::identity());
        }
        if s == "f2" {
            return Ok(FrameTransform::galilean_unit());
        }
        let bad = || FrameError::Parse(s.to_string());
        let (name, eps) = match s.split_once(':') {
            Some((n, e)) => (n.trim(), Some(e.trim().parse::<f64>().map_err(|_| bad())?)),
            None => (s, None),
        };
        let kind = FrameKind::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(bad)?;
        let eps = eps.unwrap_or(kind.identity_parameter());
        if !eps.is_finite() {
            return Err(bad());
        }
        FrameTransform::new(kind, eps)
    }
}
