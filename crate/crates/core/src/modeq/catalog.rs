use alloc::vec::Vec;

use crate::diffalg::{burgers, g1, rat, DiffPoly, GridOrder, GridWeights, Rational, Sym};
use crate::schemes::SchemeKind;
use crate::symmetry::{default_kappa, default_viscosity};

use super::stencil::{delta, delta_minus, delta_n, delta_plus, mu, Stencil};
use super::ModeqError;

/// A scheme's stencil (the full left-hand side, normalized so the forward
/// difference reads `(u^{n+1} − u^n)/τ`) together with the order at which its
/// differential approximation is modeled.
#[derive(Clone, Debug)]
pub struct SchemeCatalogEntry {
    pub kind: SchemeKind,
    pub stencil: Stencil,
    pub modeled_order: GridOrder,
    /// Expected `h = τ = 0` part of the differential approximation.
    pub leading: DiffPoly,
    /// Hand-entered representation the computed one is compared against.
    pub literal: DiffPoly,
}

fn nu() -> DiffPoly {
    DiffPoly::var(Sym::Nu)
}

fn tau() -> DiffPoly {
    DiffPoly::var(Sym::Tau)
}

fn half() -> Rational {
    rat(1, 2)
}

fn flux(s: &Stencil) -> Stencil {
    s.pow(2).scale_rat(half())
}

fn forward_difference() -> Stencil {
    (&Stencil::value(0, 2) - &Stencil::value(0, 0)).div_tau(1)
}

fn ftcs_stencil() -> Stencil {
    let u = Stencil::value(0, 0);
    let adv = mu(&delta(&flux(&u))).div_h(1);
    let diff = delta_n(&u, 2).div_h(2).scale(&nu());
    &(&forward_difference() + &adv) - &diff
}

fn lax_wendroff_stencil() -> Stencil {
    let u = Stencil::value(0, 0);
    let f = flux(&u);
    let up = u.shift(1, 0);
    let um = u.shift(-1, 0);
    let nu_tau_half = (&nu() * &tau()).scale(&half());

    let t1 = (&(&up * &delta_plus(&f)) - &(&um * &delta_minus(&f)))
        .div_h(2)
        .scale(&tau().scale(&rat(-1, 2)));
    let t2 = delta_n(&u, 4)
        .div_h(4)
        .scale(&(&nu().pow(2) * &tau()).scale(&rat(-1, 2)));
    let t3 = (&(&up * &delta_n(&up, 2)) - &(&um * &delta_n(&um, 2)))
        .div_h(3)
        .scale(&nu_tau_half);
    let t4 = mu(&delta_n(&f, 3)).div_h(3).scale(&nu_tau_half);
    let a = &(&t1 + &t2) + &(&t3 + &t4);
    &ftcs_stencil() + &a
}

fn crank_nicolson_stencil() -> Stencil {
    let u0 = Stencil::value(0, 0);
    let u1 = Stencil::value(0, 2);
    let adv = mu(&delta(&(&flux(&u1) + &flux(&u0))))
        .div_h(1)
        .scale_rat(half());
    let diff = delta_n(&(&u1 + &u0), 2)
        .div_h(2)
        .scale(&nu().scale(&half()));
    &(&forward_difference() + &adv) - &diff
}

/// The invariant scheme with artificial viscosity `c(x, t, u, u_x, u_xx)`.
///
/// `Ω = (τu²/2 − C)/h²` is sampled at the half points `x ± h/2` with
/// `u_x ≈ (u_{i+1} − u_i)/h` there.
fn invariant_stencil(c: &DiffPoly) -> Result<Stencil, ModeqError> {
    let u = Stencil::value(0, 0);
    let f = flux(&u);
    let up = u.shift(1, 0);
    let um = u.shift(-1, 0);
    let sixth = rat(1, 6);
    let twelfth = rat(1, 12);

    let adv = (&mu(&delta(&f)) - &mu(&delta_n(&f, 3)).scale_rat(sixth)).div_h(1);
    let diff = (&delta_n(&u, 2) - &delta_n(&u, 4).scale_rat(twelfth))
        .div_h(2)
        .scale(&nu());

    let c_grid = Stencil::from_poly(c, |s| match s {
        Sym::U(0, 0) => Some(u.clone()),
        Sym::U(1, 0) => Some(delta(&u).div_h(1)),
        Sym::U(2, 0) => Some(delta_n(&u, 2).div_h(2)),
        _ => None,
    })
    .map_err(ModeqError::UnsupportedJet)?;
    let omega = (&u.pow(2).scale(&tau().scale(&half())) - &c_grid).div_h(2);
    let omega_term = &(&omega.shift(1, 0) * &delta_plus(&u)) - &(&omega.shift(-1, 0) * &delta_minus(&u));

    let nu_tau_half = (&nu() * &tau()).scale(&half());
    let e1 = (&(&up * &mu(&delta_n(&up, 2))) - &(&um * &mu(&delta_n(&um, 2))))
        .div_h(3)
        .scale(&nu_tau_half);
    let e2 = delta_n(&u, 4)
        .div_h(4)
        .scale(&(&nu().pow(2) * &tau()).scale(&rat(-1, 2)));
    let e3 = mu(&delta_n(&f, 3)).div_h(3).scale(&nu_tau_half);

    let main = &(&(&forward_difference() + &adv) - &diff) - &omega_term;
    Ok(&(&main + &e1) + &(&e2 + &e3))
}

/// `[g1, g2, g3]`: `g2 = (−g1 u)_x + ν (g1)_xx`, `g3 = (−g2 u − g1²)_x + ν (g2)_xx`.
pub fn g_sequence() -> [DiffPoly; 3] {
    let u = DiffPoly::u(0, 0);
    let g1 = g1();
    let g2 = &(-(&g1 * &u)).dx() + &(&nu() * &g1.dx_n(2));
    let g3 = &(-(&(&g2 * &u) + &g1.pow(2))).dx() + &(&nu() * &g2.dx_n(2));
    [g1, g2, g3]
}

fn h2_block() -> DiffPoly {
    let h2 = DiffPoly::var(Sym::H).pow(2);
    let u = DiffPoly::u(0, 0);
    let adv = u.pow(2).dx_n(3).scale(&rat(1, 12));
    let diff = (&nu() * &DiffPoly::u(4, 0)).scale(&rat(1, 12));
    &h2 * &(&adv - &diff)
}

/// The hand-entered differential representations.
///
/// For the invariant scheme this is `F + (C u_x)_x` with the default
/// artificial viscosity; use [`invariant_literal`] for another `C`.
pub fn reference_representation(kind: SchemeKind) -> DiffPoly {
    let [g1, g2, g3] = g_sequence();
    let u = DiffPoly::u(0, 0);
    let f = burgers();
    match kind {
        SchemeKind::Ftcs => &(&f + &(&tau() * &g2).scale(&half())) + &h2_block(),
        SchemeKind::LaxWendroff => {
            &(&f + &(&tau().pow(2) * &g3).scale(&rat(1, 6))) + &h2_block()
        }
        SchemeKind::CrankNicolson => {
            let block = &(&g3.scale(&rat(1, 6)) + &(&g1.pow(2) + &(&u * &g2)).dx().scale(&rat(1, 4)))
                - &(&nu() * &g2.dx_n(2)).scale(&rat(1, 4));
            &(&f + &(&tau().pow(2) * &block)) + &h2_block()
        }
        SchemeKind::Invariant => invariant_literal(&default_viscosity(default_kappa())),
        SchemeKind::HighOrder => f,
    }
}

/// `u_t + u u_x − ν u_xx + (C u_x)_x`.
pub fn invariant_literal(c: &DiffPoly) -> DiffPoly {
    &burgers() + &(c * &DiffPoly::u(1, 0)).dx()
}

fn modeled_order(kind: SchemeKind) -> GridOrder {
    match kind {
        SchemeKind::Ftcs => GridOrder::new(GridWeights::tau_weight(2), 2),
        SchemeKind::LaxWendroff | SchemeKind::CrankNicolson => {
            GridOrder::new(GridWeights::tau_weight(1), 2)
        }
        SchemeKind::Invariant => GridOrder::new(GridWeights::tau_weight(1), 1),
        SchemeKind::HighOrder => GridOrder::new(GridWeights::tau_weight(2), 3),
    }
}

/// The invariant scheme's entry for an arbitrary artificial viscosity.
pub fn invariant_entry(c: &DiffPoly) -> Result<SchemeCatalogEntry, ModeqError> {
    let literal = invariant_literal(c);
    Ok(SchemeCatalogEntry {
        kind: SchemeKind::Invariant,
        stencil: invariant_stencil(c)?,
        modeled_order: modeled_order(SchemeKind::Invariant),
        leading: literal.truncate(GridOrder::leading()),
        literal,
    })
}

pub fn catalog_entry(kind: SchemeKind) -> SchemeCatalogEntry {
    let stencil = match kind {
        SchemeKind::Ftcs => ftcs_stencil(),
        SchemeKind::LaxWendroff => lax_wendroff_stencil(),
        SchemeKind::CrankNicolson => crank_nicolson_stencil(),
        SchemeKind::Invariant => {
            return invariant_entry(&default_viscosity(default_kappa()))
                .expect("default viscosity uses u and u_x only")
        }
        SchemeKind::HighOrder => {
            invariant_stencil(&DiffPoly::zero()).expect("zero viscosity has no jets")
        }
    };
    SchemeCatalogEntry {
        kind,
        stencil,
        modeled_order: modeled_order(kind),
        leading: burgers(),
        literal: reference_representation(kind),
    }
}

pub fn catalog() -> Vec<SchemeCatalogEntry> {
    SchemeKind::ALL.iter().map(|&k| catalog_entry(k)).collect()
}
