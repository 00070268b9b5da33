use invscheme_core::symmetry::*;
use invscheme_core::diffalg::{rat, DiffPoly, Dir, GridOrder, Rational, Sym};
use invscheme_core::diffalg::burgers;

fn p(s: &str) -> DiffPoly {
    DiffPoly::parse(s).unwrap()
}

fn gen(set: GeneratorSet, name: &str) -> Generator {
    builtin_generators(set)
        .into_iter()
        .find(|g| g.name == name)
        .unwrap()
}

#[test]
fn galilean_prolongation() {
    let l5 = gen(GeneratorSet::Burgers6, "L5");
    let pr = prolong(&l5, 2);
    assert!(pr.sigma(1, 0).unwrap().is_zero());
    assert_eq!(pr.sigma(0, 1).unwrap(), &p("-u_x"));
    assert_eq!(pr.sigma(1, 1).unwrap(), &p("-u_xx"));
    assert_eq!(pr.sigma(0, 2).unwrap(), &p("-2*u_xt"));
}

#[test]
fn translation_prolongation_vanishes() {
    let pr = prolong(&gen(GeneratorSet::Burgers6, "L1"), 3);
    assert!(pr.sigmas.values().all(DiffPoly::is_zero));
}

#[test]
fn dilatation_prolongation() {
    let pr = prolong(&gen(GeneratorSet::Burgers6, "L3"), 2);
    assert_eq!(pr.sigma(1, 0).unwrap(), &p("-2*u_x"));
    assert_eq!(pr.sigma(0, 1).unwrap(), &p("-3*u_t"));
    assert_eq!(pr.sigma(2, 0).unwrap(), &p("-3*u_xx"));
}

#[test]
fn mixed_sigma_is_path_independent() {
    // σ^{(1,1)} built x-then-t must equal t-then-x.
    for g in builtin_generators(GeneratorSet::Invariant6) {
        let pr = prolong(&g, 2);
        let via_t = sigma_step(pr.sigma(1, 0).unwrap(), &g, 1, 0, Dir::T);
        assert_eq!(&via_t, pr.sigma(1, 1).unwrap(), "generator {}", g.name);
    }
}

#[test]
fn prolongation_consistent_with_lie_apply() {
    for g in builtin_generators(GeneratorSet::Burgers6) {
        let pr = prolong(&g, 2);
        let applied = lie_apply(&g, &DiffPoly::u(2, 0), 2).unwrap();
        assert_eq!(&applied, pr.sigma(2, 0).unwrap());
    }
}

#[test]
fn lie_derivatives_of_burgers() {
    let f = burgers();
    assert!(lie_apply(&gen(GeneratorSet::Burgers6, "L1"), &f, 2).unwrap().is_zero());
    assert!(lie_apply(&gen(GeneratorSet::Burgers6, "L5"), &f, 2).unwrap().is_zero());
    let l3 = lie_apply(&gen(GeneratorSet::Burgers6, "L3"), &f, 2).unwrap();
    assert_eq!(l3, f.scale(&rat(-3, 1)));
}

#[test]
fn lie_apply_rejects_low_order() {
    let err = lie_apply(&gen(GeneratorSet::Burgers6, "L3"), &burgers(), 1).unwrap_err();
    assert_eq!(
        err,
        SymmetryError::OrderTooSmall {
            order: 1,
            sym: Sym::U(2, 0)
        }
    );
}

#[test]
fn lie_apply_vanishes_on_constants() {
    for g in builtin_generators(GeneratorSet::Invariant6) {
        assert!(lie_apply(&g, &DiffPoly::int(7), 1).unwrap().is_zero());
    }
}

#[test]
fn burgers_symmetries_are_onshell_invariant() {
    let f = burgers();
    for g in builtin_generators(GeneratorSet::Burgers6) {
        let r = onshell_residual(&g, &f, None).unwrap();
        assert!(r.is_zero(), "{} gives {}", g.name, r);
    }
}

#[test]
fn non_symmetry_is_detected() {
    // u -> u + ε without the x shift is not a symmetry
    let g = Generator::new("shift_u", ["0", "0", "1", "0", "0", "0"].map(p)).unwrap();
    let r = onshell_residual(&g, &burgers(), None).unwrap();
    assert_eq!(r, p("u_x"));
}

#[test]
fn onshell_needs_linear_ut() {
    let g = gen(GeneratorSet::Burgers6, "L1");
    assert_eq!(
        onshell_residual(&g, &p("u_t^2 + u"), None),
        Err(SymmetryError::NotSolvableForUt)
    );
    assert_eq!(
        onshell_residual(&g, &p("u*u_t + u_x"), None),
        Err(SymmetryError::NotSolvableForUt)
    );
}

#[test]
fn builtin_literals() {
    let b6 = builtin_generators(GeneratorSet::Burgers6);
    assert_eq!(b6[4].xi1, p("t"));
    assert!(b6[4].xi2.is_zero());
    assert_eq!(b6[4].eta, DiffPoly::one());
    let f4 = builtin_generators(GeneratorSet::Fda4);
    assert_eq!(f4[2].zeta1, p("h"));
    assert_eq!(f4[2].zeta2, p("2*tau"));
    let i6 = builtin_generators(GeneratorSet::Invariant6);
    assert_eq!(i6[3].xi1, p("t*x"));
    assert_eq!(i6[3].xi2, p("t^2"));
    assert_eq!(i6[3].eta, p("x - t*u"));
}

#[test]
fn slot_dependencies_enforced() {
    let bad = Generator::new(
        "bad",
        [p("h"), DiffPoly::zero(), DiffPoly::zero(), DiffPoly::zero(), DiffPoly::zero(), DiffPoly::zero()],
    );
    assert_eq!(
        bad.unwrap_err(),
        SymmetryError::SlotDependency {
            slot: "xi1",
            sym: Sym::H
        }
    );
    let bad = Generator::new(
        "bad",
        [DiffPoly::zero(), DiffPoly::zero(), DiffPoly::zero(), DiffPoly::zero(), DiffPoly::zero(), p("u")],
    );
    assert!(bad.is_err());
}

#[test]
fn constant_c_satisfies_every_constraint() {
    let report = c_constraint_residuals(&DiffPoly::int(3)).unwrap();
    assert_eq!(report.rows.len(), 6);
    assert!(report.rows.iter().all(ConstraintRow::is_zero));
}

#[test]
fn default_c_is_galilean_but_not_translation_invariant() {
    let c = default_viscosity(default_kappa());
    let report = c_constraint_residuals(&c).unwrap();
    let row = |name: &str| report.rows.iter().find(|r| r.subgroup == name).unwrap();
    assert!(row("galilean").is_zero());
    let dx = &row("space_translation").residuals[0].1;
    assert_eq!(dx, &p("1/50*t*(t*u - x)*u_x^2"));
    assert!(!row("space_translation").is_zero());
}

#[test]
fn c_with_time_derivative_rejected() {
    assert_eq!(
        c_constraint_residuals(&p("u_t")),
        Err(SymmetryError::TimeDerivativeInC { sym: Sym::U(0, 1) })
    );
}

fn representation(kind: invscheme_core::schemes::SchemeKind) -> (DiffPoly, GridOrder) {
    let entry = invscheme_core::modeq::catalog_entry(kind);
    (entry.literal, entry.modeled_order)
}

#[test]
fn fda4_preserves_classical_representations() {
    use invscheme_core::schemes::SchemeKind::*;
    for kind in [Ftcs, LaxWendroff, CrankNicolson] {
        let (rep, order) = representation(kind);
        for g in builtin_generators(GeneratorSet::Fda4) {
            let r = onshell_residual(&g, &rep, Some(order)).unwrap();
            assert!(r.is_zero(), "{} on {kind}: {r}", g.name);
        }
    }
}

#[test]
fn ftcs_loses_galilean_and_projective() {
    let (rep, order) = representation(invscheme_core::schemes::SchemeKind::Ftcs);
    for name in ["L4", "L5"] {
        let r = onshell_residual(&gen(GeneratorSet::Burgers6, name), &rep, Some(order)).unwrap();
        assert!(!r.is_zero(), "{name}");
    }
    // the Galilean defect is the τ/2·g2 term's response to u -> u + ε
    let r = onshell_residual(&gen(GeneratorSet::Burgers6, "L5"), &rep, Some(order)).unwrap();
    assert!(r.contains(Sym::Tau));
}

#[test]
fn invariant_representation_keeps_galilean() {
    let (rep, order) = representation(invscheme_core::schemes::SchemeKind::Invariant);
    let r = onshell_residual(&gen(GeneratorSet::Invariant6, "c"), &rep, Some(order)).unwrap();
    assert!(r.is_zero(), "{r}");
}

fn generator_strategy() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-3i64..4, 6)
}

use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn residual_is_linear_in_generator(coeffs in generator_strategy()) {
        let (rep, order) = representation(invscheme_core::schemes::SchemeKind::Ftcs);
        let gens = builtin_generators(GeneratorSet::Burgers6);
        let parts: Vec<(Rational, &Generator)> =
            coeffs.iter().zip(&gens).map(|(&c, g)| (rat(c, 1), g)).collect();
        let combo = Generator::linear_combination("combo", &parts);
        let lhs = onshell_residual(&combo, &rep, Some(order)).unwrap();
        let mut rhs = DiffPoly::zero();
        for (c, g) in &parts {
            rhs += onshell_residual(g, &rep, Some(order)).unwrap().scale(c);
        }
        prop_assert_eq!(lhs, rhs);
    }
}
