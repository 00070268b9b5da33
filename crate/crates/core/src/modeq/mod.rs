//! Differential approximations of finite-difference stencils.
//!
//! Every sampled value `u(x + p·h, t + q·τ)` is replaced by its Taylor series
//! about `(x, t)`, time derivatives are rewritten through the Burgers relation
//! and the result is cut at a weighted `(h, τ)` order.

mod catalog;
mod stencil;

use alloc::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::diffalg::{DiffPoly, Eliminator, GridOrder, Rational, Sym};

pub use catalog::{
    catalog, catalog_entry, g_sequence, invariant_entry, invariant_literal, reference_representation,
    SchemeCatalogEntry,
};
pub use stencil::{delta, delta_minus, delta_n, delta_plus, mu, Shift, Stencil, StencilTerm};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModeqError {
    #[error("stencil is singular as h, tau -> 0 (a term is not divisible by h^{inv_h}*tau^{inv_tau})")]
    Singular { inv_h: u32, inv_tau: u32 },
    #[error("stencil is inconsistent; defect {defect}")]
    Inconsistent { defect: DiffPoly },
    #[error("jet coordinate {0} has no grid representation here")]
    UnsupportedJet(Sym),
    #[error("stencil has no later time level")]
    Stationary,
}

/// Taylor series of `u(x + p·h, t + q·τ)` through total `(h, τ)` degree `k`.
fn shifted_series(s: Shift, k: u32) -> DiffPoly {
    let (p, q) = (s.p(), s.q());
    let h = DiffPoly::var(Sym::H);
    let tau = DiffPoly::var(Sym::Tau);
    let mut out = DiffPoly::zero();
    let mut fact = alloc::vec![Rational::one()];
    for n in 1..=k {
        let prev = fact[n as usize - 1].clone();
        fact.push(prev * Rational::from_integer(BigInt::from(n)));
    }
    for a in 0..=k {
        if a > 0 && p.is_zero() {
            break;
        }
        for b in 0..=(k - a) {
            if b > 0 && q.is_zero() {
                break;
            }
            let c = pow_rat(&p, a) * pow_rat(&q, b) / (&fact[a as usize] * &fact[b as usize]);
            let m = &(&h.pow(a) * &tau.pow(b)) * &DiffPoly::u(a, b);
            out += m.scale(&c);
        }
    }
    out
}

fn pow_rat(r: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= r;
    }
    acc
}

/// Taylor expansion of a stencil about `(x, t)`.
///
/// The result holds every monomial of total `(h, τ)` degree at most `k`
/// exactly. Each term's numerator is expanded deep enough to survive its
/// division by `h^i τ^j`; numerators are brought to the common denominator
/// before dividing, so only the stencil as a whole has to be regular.
pub fn taylor_expand(st: &Stencil, k: u32) -> Result<DiffPoly, ModeqError> {
    let max_h = st.terms().map(|t| t.inv_h).max().unwrap_or(0);
    let max_tau = st.terms().map(|t| t.inv_tau).max().unwrap_or(0);
    let h = DiffPoly::var(Sym::H);
    let tau = DiffPoly::var(Sym::Tau);
    let mut series_cache: BTreeMap<(Shift, u32), DiffPoly> = BTreeMap::new();
    let mut numerator = DiffPoly::zero();
    for term in st.terms() {
        let depth = k + term.inv_h + term.inv_tau;
        let mut acc = term.coefficient.truncate_total_grid_degree(depth);
        for &(s, e) in term.factors {
            let series = series_cache
                .entry((s, depth))
                .or_insert_with(|| shifted_series(s, depth))
                .clone();
            for _ in 0..e {
                acc = (&acc * &series).truncate_total_grid_degree(depth);
            }
        }
        let lift = &h.pow(max_h - term.inv_h) * &tau.pow(max_tau - term.inv_tau);
        numerator += &acc * &lift;
    }
    let out = numerator
        .truncate_total_grid_degree(k + max_h + max_tau)
        .divide_grid(max_h, max_tau)
        .ok_or(ModeqError::Singular {
            inv_h: max_h,
            inv_tau: max_tau,
        })?;
    Ok(out.truncate_total_grid_degree(k))
}

/// Taylor expansion, then time-derivative elimination, then truncation at
/// `order`, without the consistency check.
///
/// The `h = τ = 0` part is kept as expanded (it carries `u_t`); time
/// derivatives in the grid-dependent remainder are rewritten through the
/// Burgers relation.
pub fn expand_at_order(st: &Stencil, order: GridOrder) -> Result<DiffPoly, ModeqError> {
    let raw = taylor_expand(st, order.max)?.truncate(order);
    let leading = raw.truncate(GridOrder::leading());
    let rest = Eliminator::burgers().eliminate(&(&raw - &leading));
    Ok(&leading + &rest.truncate(order))
}

/// The entry's differential approximation at its modeled order.
///
/// Fails when the `h = τ = 0` part differs from the entry's expected leading
/// equation (the Burgers polynomial for every consistent scheme).
pub fn differential_approximation(entry: &SchemeCatalogEntry) -> Result<DiffPoly, ModeqError> {
    differential_approximation_at(entry, entry.modeled_order)
}

/// As [`differential_approximation`] at an explicit order.
pub fn differential_approximation_at(
    entry: &SchemeCatalogEntry,
    order: GridOrder,
) -> Result<DiffPoly, ModeqError> {
    if !entry.stencil.is_evolutionary() {
        return Err(ModeqError::Stationary);
    }
    let da = expand_at_order(&entry.stencil, order)?;
    let defect = &da.truncate(GridOrder::leading()) - &entry.leading;
    if !defect.is_zero() {
        return Err(ModeqError::Inconsistent { defect });
    }
    Ok(da)
}

/// A smooth solution of the Burgers equation with evaluable partial
/// derivatives.
pub trait TestField {
    fn nu(&self) -> f64;
    /// `∂^{a+b} u / ∂x^a ∂t^b` at `(x, t)`.
    fn derivative(&self, a: u32, b: u32, x: f64, t: f64) -> f64;
}

/// `|stencil − differential approximation|` at `(x, t)` for the given steps.
pub fn numerical_consistency_check(
    entry: &SchemeCatalogEntry,
    da: &DiffPoly,
    field: &dyn TestField,
    (x, t): (f64, f64),
    h: f64,
    tau: f64,
) -> f64 {
    let nu = field.nu();
    let discrete = entry
        .stencil
        .evaluate(x, t, h, tau, nu, |xx, tt| field.derivative(0, 0, xx, tt));
    let modeled = da.evaluate(|s| match s {
        Sym::X => x,
        Sym::T => t,
        Sym::Nu => nu,
        Sym::H => h,
        Sym::Tau => tau,
        Sym::U(a, b) => field.derivative(a, b, x, t),
    });
    libm::fabs(discrete - modeled)
}
