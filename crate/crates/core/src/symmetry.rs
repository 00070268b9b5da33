//! Infinitesimal generators, their prolongation to jet coordinates, and
//! on-shell invariance residuals.
//!
//! A generator acts on `(x, t, u, h, τ, ν)`:
//!
//! ```text
//! L = ξ1 ∂x + ξ2 ∂t + η ∂u + ζ1 ∂h + ζ2 ∂τ + θ ∂ν
//! ```
//!
//! and is prolonged to `u_{(a,b)}` by the recursion
//! `σ^{(a+1,b)} = D_x σ^{(a,b)} − u_{(a+1,b)} D_x ξ1 − u_{(a,b+1)} D_x ξ2`
//! (and the analogous `t` step), starting from `σ^{(0,0)} = η`.
//! A differential polynomial `P = u_t + …` is invariant when the prolonged
//! generator applied to `P` vanishes after substituting `P = 0`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::diffalg::{rat, DiffPoly, Dir, Eliminator, GridOrder, Rational, Sym};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SymmetryError {
    #[error("generator slot {slot} may not depend on {sym}")]
    SlotDependency { slot: &'static str, sym: Sym },
    #[error("prolongation order {order} does not cover derivative coordinate {sym}")]
    OrderTooSmall { order: u32, sym: Sym },
    #[error("polynomial is not solvable for u_t (needs a nonzero constant coefficient on a linear u_t)")]
    NotSolvableForUt,
    #[error("artificial viscosity may not contain time derivative {sym}")]
    TimeDerivativeInC { sym: Sym },
}

/// Infinitesimal generator with slots for `∂x, ∂t, ∂u, ∂h, ∂τ, ∂ν`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub xi1: DiffPoly,
    pub xi2: DiffPoly,
    pub eta: DiffPoly,
    pub zeta1: DiffPoly,
    pub zeta2: DiffPoly,
    pub theta: DiffPoly,
}

const POINT_SYMS: [Sym; 3] = [Sym::X, Sym::T, Sym::U(0, 0)];
const STEP_SYMS: [Sym; 5] = [Sym::X, Sym::T, Sym::U(0, 0), Sym::H, Sym::Tau];

fn check_slot(slot: &'static str, p: &DiffPoly, allowed: &[Sym]) -> Result<(), SymmetryError> {
    match p.symbols().into_iter().find(|s| !allowed.contains(s)) {
        Some(sym) => Err(SymmetryError::SlotDependency { slot, sym }),
        None => Ok(()),
    }
}

impl Generator {
    /// Validates the slot dependencies: `ξ1, ξ2, η` on `{x, t, u}`, `ζ1, ζ2`
    /// additionally on `{h, τ}`, `θ` only on `ν`.
    pub fn new(
        name: impl Into<String>,
        [xi1, xi2, eta, zeta1, zeta2, theta]: [DiffPoly; 6],
    ) -> Result<Self, SymmetryError> {
        check_slot("xi1", &xi1, &POINT_SYMS)?;
        check_slot("xi2", &xi2, &POINT_SYMS)?;
        check_slot("eta", &eta, &POINT_SYMS)?;
        check_slot("zeta1", &zeta1, &STEP_SYMS)?;
        check_slot("zeta2", &zeta2, &STEP_SYMS)?;
        check_slot("theta", &theta, &[Sym::Nu])?;
        Ok(Generator {
            name: name.into(),
            xi1,
            xi2,
            eta,
            zeta1,
            zeta2,
            theta,
        })
    }

    fn parse(name: &str, slots: [&str; 6]) -> Self {
        let polys = slots.map(|s| DiffPoly::parse(s).expect("built-in generator literal"));
        Generator::new(name, polys).expect("built-in generator respects slot dependencies")
    }

    fn slots(&self) -> [&DiffPoly; 6] {
        [
            &self.xi1,
            &self.xi2,
            &self.eta,
            &self.zeta1,
            &self.zeta2,
            &self.theta,
        ]
    }

    /// `Σ c_k · g_k`, slot by slot.
    pub fn linear_combination(name: impl Into<String>, parts: &[(Rational, &Generator)]) -> Self {
        let mut slots: [DiffPoly; 6] = Default::default();
        for (c, g) in parts {
            for (acc, s) in slots.iter_mut().zip(g.slots()) {
                *acc += s.scale(c);
            }
        }
        let [xi1, xi2, eta, zeta1, zeta2, theta] = slots;
        Generator {
            name: name.into(),
            xi1,
            xi2,
            eta,
            zeta1,
            zeta2,
            theta,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = ["d/dx", "d/dt", "d/du", "d/dh", "d/dtau", "d/dnu"];
        write!(f, "{} =", self.name)?;
        let mut first = true;
        for (label, slot) in labels.iter().zip(self.slots()) {
            if slot.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" +")?;
            }
            write!(f, " ({slot}) {label}")?;
            first = false;
        }
        if first {
            f.write_str(" 0")?;
        }
        Ok(())
    }
}

/// A generator together with its prolongation coefficients `σ^{(a,b)}`.
#[derive(Clone, Debug)]
pub struct Prolongation {
    pub base: Generator,
    pub max_order: u32,
    pub sigmas: BTreeMap<(u32, u32), DiffPoly>,
}

impl Prolongation {
    pub fn sigma(&self, a: u32, b: u32) -> Option<&DiffPoly> {
        self.sigmas.get(&(a, b))
    }
}

/// `σ` of `u_{a,b}` differentiated once more along `dir`.
pub fn sigma_step(prev: &DiffPoly, g: &Generator, a: u32, b: u32, dir: Dir) -> DiffPoly {
    let dxi1 = g.xi1.total_derivative(dir);
    let dxi2 = g.xi2.total_derivative(dir);
    let mut out = prev.total_derivative(dir);
    out -= &DiffPoly::u(a + 1, b) * &dxi1;
    out -= &DiffPoly::u(a, b + 1) * &dxi2;
    out
}

/// Prolongs `g` to every jet coordinate of total order `1..=max_total_order`.
pub fn prolong(g: &Generator, max_total_order: u32) -> Prolongation {
    assert!(max_total_order >= 1, "prolongation order must be at least 1");
    let mut sigmas = BTreeMap::new();
    sigmas.insert((0, 0), g.eta.clone());
    for order in 1..=max_total_order {
        for a in 0..=order {
            let b = order - a;
            let s = if a >= 1 {
                sigma_step(&sigmas[&(a - 1, b)], g, a - 1, b, Dir::X)
            } else {
                sigma_step(&sigmas[&(0, b - 1)], g, 0, b - 1, Dir::T)
            };
            sigmas.insert((a, b), s);
        }
    }
    Prolongation {
        base: g.clone(),
        max_order: max_total_order,
        sigmas,
    }
}

/// Applies a prolonged generator to `p`.
pub fn lie_apply_prolonged(pr: &Prolongation, p: &DiffPoly) -> Result<DiffPoly, SymmetryError> {
    let g = &pr.base;
    let mut out = DiffPoly::zero();
    for s in p.symbols() {
        let coeff = match s {
            Sym::X => g.xi1.clone(),
            Sym::T => g.xi2.clone(),
            Sym::Nu => g.theta.clone(),
            Sym::H => g.zeta1.clone(),
            Sym::Tau => g.zeta2.clone(),
            Sym::U(a, b) => pr
                .sigma(a, b)
                .cloned()
                .ok_or(SymmetryError::OrderTooSmall {
                    order: pr.max_order,
                    sym: s,
                })?,
        };
        if coeff.is_zero() {
            continue;
        }
        out += &coeff * &p.partial(s);
    }
    Ok(out)
}

/// `ξ1 ∂p/∂x + ξ2 ∂p/∂t + η ∂p/∂u + Σ σ^{(a,b)} ∂p/∂u_{(a,b)} + ζ1 ∂p/∂h + ζ2 ∂p/∂τ + θ ∂p/∂ν`.
pub fn lie_apply(g: &Generator, p: &DiffPoly, order: u32) -> Result<DiffPoly, SymmetryError> {
    let pr = prolong(g, order.max(1));
    lie_apply_prolonged(&pr, p)
}

/// Solves `p = 0` for `u_t`, returning the right-hand side.
pub fn solve_for_ut(p: &DiffPoly) -> Result<DiffPoly, SymmetryError> {
    let (coeff, rest) = p
        .split_linear(Sym::U(0, 1))
        .ok_or(SymmetryError::NotSolvableForUt)?;
    let c = coeff
        .as_constant()
        .filter(|c| !c.is_zero())
        .ok_or(SymmetryError::NotSolvableForUt)?;
    Ok(rest.scale(&(-(Rational::one() / c))))
}

/// Invariance residual of `p` under `g` on the solution manifold `p = 0`.
///
/// The Lie derivative is computed, `u_t` is replaced by its value from
/// `p = 0`, any remaining time derivatives are eliminated through the leading
/// Burgers relation, and the result is optionally truncated in `(h, τ)`.
pub fn onshell_residual(
    g: &Generator,
    p: &DiffPoly,
    trunc: Option<GridOrder>,
) -> Result<DiffPoly, SymmetryError> {
    let rhs = solve_for_ut(p)?;
    let lie = lie_apply(g, p, p.max_jet_order())?;
    let substituted = lie.substitute(Sym::U(0, 1), &rhs);
    let mut elim = Eliminator::burgers();
    let reduced = elim.eliminate(&substituted);
    Ok(match trunc {
        Some(order) => reduced.truncate(order),
        None => reduced,
    })
}

/// Named generator families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorSet {
    /// The six point symmetries of the Burgers equation.
    Burgers6,
    /// The four-parameter group kept by the FTCS, Lax-Wendroff and
    /// Crank-Nicolson differential representations.
    Fda4,
    /// The six-parameter group `(a, …, f)` of the invariant scheme's
    /// differential representation, including `h` and `τ`.
    Invariant6,
}

impl GeneratorSet {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorSet::Burgers6 => "burgers6",
            GeneratorSet::Fda4 => "fda4",
            GeneratorSet::Invariant6 => "invariant6",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "burgers6" => Some(GeneratorSet::Burgers6),
            "fda4" => Some(GeneratorSet::Fda4),
            "invariant6" => Some(GeneratorSet::Invariant6),
            _ => None,
        }
    }
}

pub fn builtin_generators(set: GeneratorSet) -> Vec<Generator> {
    //                 xi1      xi2     eta        zeta1  zeta2    theta
    match set {
        GeneratorSet::Burgers6 => vec![
            Generator::parse("L1", ["1", "0", "0", "0", "0", "0"]),
            Generator::parse("L2", ["0", "1", "0", "0", "0", "0"]),
            Generator::parse("L3", ["x", "2*t", "-u", "0", "0", "0"]),
            Generator::parse("L4", ["x*t", "t^2", "x - t*u", "0", "0", "0"]),
            Generator::parse("L5", ["t", "0", "1", "0", "0", "0"]),
            Generator::parse("L6", ["0", "-t", "u", "0", "0", "nu"]),
        ],
        GeneratorSet::Fda4 => vec![
            Generator::parse("L1", ["1", "0", "0", "0", "0", "0"]),
            Generator::parse("L2", ["0", "1", "0", "0", "0", "0"]),
            Generator::parse("L3'", ["x", "2*t", "-u", "h", "2*tau", "0"]),
            Generator::parse("L4'", ["0", "-t", "u", "0", "-tau", "nu"]),
        ],
        GeneratorSet::Invariant6 => vec![
            Generator::parse("a", ["1", "0", "0", "0", "0", "0"]),
            Generator::parse("b", ["x", "2*t", "-u", "h", "2*tau", "0"]),
            Generator::parse("c", ["t", "0", "1", "0", "0", "0"]),
            Generator::parse("d", ["t*x", "t^2", "x - t*u", "0", "0", "0"]),
            Generator::parse("e", ["0", "1", "0", "0", "0", "0"]),
            Generator::parse("f", ["0", "-t", "u", "0", "-tau", "nu"]),
        ],
    }
}

/// One subgroup's determining constraints evaluated on a candidate `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintRow {
    pub subgroup: &'static str,
    /// `(constraint label, residual)` pairs.
    pub residuals: Vec<(&'static str, DiffPoly)>,
}

impl ConstraintRow {
    pub fn is_zero(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero())
    }
}

/// Per-subgroup residuals of the artificial-viscosity constraints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintReport {
    pub c: DiffPoly,
    pub rows: Vec<ConstraintRow>,
}

impl fmt::Display for ConstraintReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "C = {}", self.c)?;
        for row in &self.rows {
            let verdict = if row.is_zero() { "zero" } else { "nonzero" };
            writeln!(f, "[{}] {}", row.subgroup, verdict)?;
            for (label, r) in &row.residuals {
                writeln!(f, "  {label} = {r}")?;
            }
        }
        Ok(())
    }
}

/// Evaluates the linear constraints each subgroup of the invariant group
/// imposes on `C(x, t, h, τ, u, u_x, u_xx)`.
pub fn c_constraint_residuals(c: &DiffPoly) -> Result<ConstraintReport, SymmetryError> {
    if let Some(sym) = c.symbols().into_iter().find(|s| s.is_time_derivative()) {
        return Err(SymmetryError::TimeDerivativeInC { sym });
    }
    let d = |s: Sym| c.partial(s);
    let var = DiffPoly::var;
    let x = var(Sym::X);
    let t = var(Sym::T);
    let u = DiffPoly::u(0, 0);
    let two = DiffPoly::int(2);

    let dilatation = &(&(&(&x * &d(Sym::X)) + &(&(&two * &t) * &d(Sym::T))) - &(&u * &d(Sym::U(0, 0))))
        + &(&(&var(Sym::H) * &d(Sym::H)) + &(&(&two * &var(Sym::Tau)) * &d(Sym::Tau)));
    let projective = &(&t * &t) * &d(Sym::T) + (&two * &d(Sym::U(1, 0)));
    let galilean = &d(Sym::U(0, 0)) + &(&t * &d(Sym::X));
    let dilatation_nu = &(&(&(-&t) * &d(Sym::T)) + &(&u * &d(Sym::U(0, 0))))
        + &(&(&var(Sym::Nu) * &d(Sym::Nu)) - &(&var(Sym::Tau) * &d(Sym::Tau)));

    let rows = vec![
        ConstraintRow {
            subgroup: "space_translation",
            residuals: vec![("dC/dx", d(Sym::X))],
        },
        ConstraintRow {
            subgroup: "time_translation",
            residuals: vec![("dC/dt", d(Sym::T))],
        },
        ConstraintRow {
            subgroup: "dilatation",
            residuals: vec![("x*dC/dx + 2t*dC/dt - u*dC/du + h*dC/dh + 2tau*dC/dtau", dilatation)],
        },
        ConstraintRow {
            subgroup: "projective",
            residuals: vec![
                ("dC/dx", d(Sym::X)),
                ("dC/du", d(Sym::U(0, 0))),
                ("dC/du_xx", d(Sym::U(2, 0))),
                ("t^2*dC/dt + 2*dC/du_x", projective),
            ],
        },
        ConstraintRow {
            subgroup: "galilean",
            residuals: vec![("dC/du + t*dC/dx", galilean)],
        },
        ConstraintRow {
            subgroup: "dilatation_nu",
            residuals: vec![("-t*dC/dt + u*dC/du + nu*dC/dnu - tau*dC/dtau", dilatation_nu)],
        },
    ];
    Ok(ConstraintReport { c: c.clone(), rows })
}

/// The artificial viscosity family `κ·t·(t·u − x)²·u_x²`.
pub fn default_viscosity(kappa: Rational) -> DiffPoly {
    let t = DiffPoly::var(Sym::T);
    let tu_minus_x = &(&t * &DiffPoly::u(0, 0)) - &DiffPoly::var(Sym::X);
    (&(&t * &tu_minus_x.pow(2)) * &DiffPoly::u(1, 0).pow(2)).scale(&kappa)
}

/// `κ = −1/100`.
pub fn default_kappa() -> Rational {
    rat(-1, 100)
}

