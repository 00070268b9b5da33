use invscheme_core::problems::*;
use invscheme_core::schemes::{BoundaryProvider, Grid1D};
use invscheme_core::modeq::{catalog_entry, differential_approximation, numerical_consistency_check, TestField};
use invscheme_core::schemes::SchemeKind;
use std::string::ToString;
use proptest::prelude::*;

fn pt(x: f64, t: f64, u: f64, nu: f64) -> FramePoint {
    FramePoint { x, t, u, nu }
}

fn frame(kind: FrameKind, eps: f64) -> FrameTransform {
    FrameTransform::new(kind, eps).unwrap()
}

/// Central differences of the solution's own `u`.
fn fd_values(r: &ReferenceSolution, x: f64, t: f64) -> ExactValues {
    let d = 1e-4;
    let u = |x: f64, t: f64| r.u(x, t).unwrap();
    ExactValues {
        u: u(x, t),
        ux: (u(x + d, t) - u(x - d, t)) / (2.0 * d),
        uxx: (u(x + d, t) - 2.0 * u(x, t) + u(x - d, t)) / (d * d),
        ut: (u(x, t + d) - u(x, t - d)) / (2.0 * d),
    }
}

fn assert_self_consistent(r: &ReferenceSolution, x: f64, t: f64) {
    let a = r.eval(x, t).unwrap();
    let b = fd_values(r, x, t);
    let scale = 1.0 + a.ux.abs().max(a.ut.abs());
    for (p, q, tol) in [(a.ux, b.ux, 1e-6), (a.ut, b.ut, 1e-6), (a.uxx, b.uxx, 1e-4)] {
        assert!((p - q).abs() <= tol * (scale + a.uxx.abs()), "{} at ({x}, {t}): {p} vs {q}", r.label());
    }
}

#[test]
fn exact_solution_on_the_characteristic() {
    for (t, nu) in [(0.0, 0.3), (3.0, 1.0), (17.5, 0.05)] {
        assert_eq!(exact_eval(2.0 * t, t, nu).u, 2.0);
    }
}

#[test]
fn exact_solution_saturates() {
    for nu in [0.01, 0.2, 1.0] {
        let v = exact_eval(40.0, 0.0, nu);
        assert!((v.u - 2.0).abs() < 1e-12);
        assert!(v.ux.is_finite() && v.uxx.is_finite() && v.ut.is_finite());
    }
}

#[test]
fn exact_solution_value_matches_direct_formula() {
    let (x, t, nu) = (3.0, 0.5, 1.2);
    let s: f64 = t + 0.1;
    let xi: f64 = x - 2.0 * t;
    let direct = (xi / s) / (1.0 + nu * nu * s.sqrt() * (xi * xi / (4.0 * nu * s)).exp()) + 2.0;
    assert!((exact_eval(x, t, nu).u - direct).abs() < 1e-14);
}

#[test]
fn derivatives_match_finite_differences() {
    let sols = [
        ReferenceSolution::exact(1.0),
        ReferenceSolution::exact(0.5),
        ReferenceSolution::Manufactured { nu: 0.1, k: 0.5, c: 1.0, amp: 0.3 },
        ReferenceSolution::pushforward(FrameTransform::galilean_unit(), ReferenceSolution::exact(1.0)),
        ReferenceSolution::pushforward(frame(FrameKind::Projective, 0.02), ReferenceSolution::exact(1.0)),
        ReferenceSolution::pushforward(frame(FrameKind::Dilatation3, 1.3), ReferenceSolution::exact(0.7)),
    ];
    for r in &sols {
        for (x, t) in [(1.0, 0.5), (4.0, 1.5), (7.5, 2.0)] {
            assert_self_consistent(r, x, t);
        }
    }
}

#[test]
fn manufactured_derivatives_closed_form() {
    let (nu, k, c, amp) = (0.2, 0.7, 1.5, 0.4);
    let r = ReferenceSolution::Manufactured { nu, k, c, amp };
    let (x, t) = (2.0, 1.0);
    let ph = k * (x - c * t);
    let dec = (-nu * k * k * t).exp();
    let v = r.eval(x, t).unwrap();
    assert!((v.ux - amp * k * ph.cos() * dec).abs() < 1e-14);
    assert!((v.uxx + amp * k * k * ph.sin() * dec).abs() < 1e-14);
    let ut = amp * dec * (-k * c * ph.cos() - nu * k * k * ph.sin());
    assert!((v.ut - ut).abs() < 1e-14);
    assert!(r.needs_forcing());
    assert!((r.source(x, t) - (v.ut + v.u * v.ux - nu * v.uxx)).abs() < 1e-15);
}

#[test]
fn exact_solution_residual_audit() {
    for nu in [0.05, 0.2, 1.0, 3.0] {
        let setup = ProblemSetup::standard(nu, FrameTransform::identity());
        let audit = residual_audit(&setup.reference(), &setup, 1000).unwrap();
        assert_eq!(audit.points, 1000);
        assert!(audit.max_residual <= 1e-8, "nu = {nu}: {audit:?}");
    }
}

#[test]
fn manufactured_solution_is_not_a_solution() {
    let r = ReferenceSolution::Manufactured { nu: 0.1, k: 0.5, c: 1.0, amp: 0.3 };
    let setup = ProblemSetup { base: r.clone(), ..ProblemSetup::standard(0.1, FrameTransform::identity()) };
    assert!(residual_audit(&r, &setup, 100).unwrap().max_residual > 1e-3);
}

#[test]
fn frame_point_examples() {
    let g = FrameTransform::galilean_unit();
    assert_eq!(g.apply_point(pt(3.0, 2.0, 5.0, 0.1)).unwrap(), pt(5.0, 2.0, 6.0, 0.1));
    let eps = 0.3;
    let p = frame(FrameKind::Projective, eps).apply_point(pt(2.0, 0.0, 1.5, 0.1)).unwrap();
    assert_eq!(p, pt(2.0, 0.0, 1.5 + 2.0 * eps, 0.1));
    let p = frame(FrameKind::Dilatation6, 2.0).apply_point(pt(1.0, 4.0, 1.5, 0.1)).unwrap();
    assert_eq!(p, pt(1.0, 2.0, 3.0, 0.2));
}

#[test]
fn identity_parameters() {
    let q = pt(1.25, 0.75, -0.5, 0.3);
    for kind in FrameKind::ALL {
        let f = frame(kind, kind.identity_parameter());
        assert!(f.is_identity());
        assert_eq!(f.apply_point(q).unwrap(), q, "{kind:?}");
    }
}

#[test]
fn projective_pole_and_bad_scale() {
    let f = frame(FrameKind::Projective, 0.5);
    assert!(matches!(f.apply_point(pt(1.0, 2.0, 0.0, 1.0)), Err(FrameError::Pole { .. })));
    assert!(f.apply_point(pt(1.0, 1.9, 0.0, 1.0)).is_ok());
    let r = ReferenceSolution::pushforward(frame(FrameKind::Projective, -0.5), ReferenceSolution::exact(1.0));
    assert!(matches!(r.eval(1.0, 2.0), Err(ProblemError::Frame(FrameError::Pole { .. }))));
    assert!(matches!(FrameTransform::new(FrameKind::Dilatation3, 0.0), Err(FrameError::NonPositiveScale(_))));
}

#[test]
fn frame_parsing() {
    assert_eq!("galilean:1".parse::<FrameTransform>().unwrap(), FrameTransform::galilean_unit());
    assert!("identity".parse::<FrameTransform>().unwrap().is_identity());
    assert!("dilatation3".parse::<FrameTransform>().unwrap().is_identity());
    assert_eq!(
        "projective:-0.25".parse::<FrameTransform>().unwrap(),
        frame(FrameKind::Projective, -0.25)
    );
    assert!("rotation:1".parse::<FrameTransform>().is_err());
    assert!("galilean:x".parse::<FrameTransform>().is_err());
    assert!("dilatation6:-1".parse::<FrameTransform>().is_err());
    let f = frame(FrameKind::TimeTranslation, 0.5);
    assert_eq!(f.to_string().parse::<FrameTransform>().unwrap(), f);
}

fn close_points(a: FramePoint, b: FramePoint) -> bool {
    let c = |p: f64, q: f64| (p - q).abs() <= 1e-10 * (1.0 + q.abs());
    c(a.x, b.x) && c(a.t, b.t) && c(a.u, b.u) && c(a.nu, b.nu)
}

fn eps_for(kind: FrameKind, raw: f64) -> f64 {
    if kind.is_multiplicative() {
        libm::exp(raw)
    } else {
        raw
    }
}

proptest! {
    #[test]
    fn group_law(k in 0usize..6, e1 in -0.3f64..0.3, e2 in -0.3f64..0.3,
                 x in -5.0f64..5.0, t in 0.0f64..1.0, u in -3.0f64..3.0, nu in 0.01f64..2.0) {
        let kind = FrameKind::ALL[k];
        let f1 = frame(kind, eps_for(kind, e1));
        let f2 = frame(kind, eps_for(kind, e2));
        let p = pt(x, t, u, nu);
        let two = f2.apply_point(f1.apply_point(p).unwrap()).unwrap();
        let one = f1.compose(&f2).unwrap().apply_point(p).unwrap();
        prop_assert!(close_points(two, one), "{:?} vs {:?}", two, one);
        let back = f1.inverse().apply_point(f1.apply_point(p).unwrap()).unwrap();
        prop_assert!(close_points(back, p));
    }

    #[test]
    fn pushforward_keeps_solutions(k in 0usize..6, e in -0.2f64..0.2,
                                   x in 0.0f64..8.0, t in 0.0f64..2.0, nu in 0.3f64..2.0) {
        let kind = FrameKind::ALL[k];
        let f = frame(kind, eps_for(kind, e));
        let base = ReferenceSolution::exact(nu);
        // evaluate at the image of a point where the base is defined
        let img = f.apply_point(pt(x, t, 0.0, nu)).unwrap();
        let r = ReferenceSolution::pushforward(f, base.clone());
        let res = r.residual(img.x, img.t).unwrap();
        let scale = 1.0 + r.eval(img.x, img.t).unwrap().uxx.abs();
        prop_assert!(res.abs() <= 1e-8 * scale, "{} residual {}", kind.name(), res);
        let u0 = base.u(x, t).unwrap();
        let mapped = f.apply_point(pt(x, t, u0, nu)).unwrap();
        prop_assert!((r.u(img.x, img.t).unwrap() - mapped.u).abs() <= 1e-10 * (1.0 + mapped.u.abs()));
        prop_assert!((r.nu() - mapped.nu).abs() <= 1e-15);
    }
}

#[test]
fn galilean_pushforward_formula() {
    let base = ReferenceSolution::exact(0.8);
    let r = ReferenceSolution::pushforward(FrameTransform::galilean_unit(), base.clone());
    for (x, t) in [(1.0, 0.0), (3.0, 1.0), (10.0, 4.0)] {
        let a = r.eval(x, t).unwrap();
        let b = base.eval(x - t, t).unwrap();
        assert!((a.u - (b.u + 1.0)).abs() < 1e-14);
        assert!((a.ux - b.ux).abs() < 1e-12);
        assert!((a.ut - (b.ut - b.ux)).abs() < 1e-12);
    }
}

#[test]
fn build_problem_examples() {
    let nu = 0.4;
    let grid = Grid1D::spanning(0.0, 40.0, 201).unwrap();
    let (f1, r1) = build_problem(&ProblemSetup::standard(nu, FrameTransform::identity()), &grid).unwrap();
    let (f2, r2) = build_problem(&ProblemSetup::standard(nu, FrameTransform::galilean_unit()), &grid).unwrap();
    let i0 = grid.ghost_depth;
    assert_eq!(f1.values[i0], exact_eval(0.0, 0.0, nu).u);
    for i in 0..grid.len() {
        assert!((f2.values[i] - (f1.values[i] + 1.0)).abs() < 1e-14);
    }
    for t in [0.0, 3.0, 20.0] {
        assert_eq!(r1.value(40.0, t), exact_eval(40.0, t, nu).u);
        assert!((r2.value(40.0, t) - (exact_eval(40.0 - t, t, nu).u + 1.0)).abs() < 1e-14);
    }
    assert_eq!(r1.source(3.0, 1.0), 0.0);
    let short = Grid1D::spanning(0.0, 30.0, 201).unwrap();
    assert!(matches!(
        build_problem(&ProblemSetup::standard(nu, FrameTransform::identity()), &short),
        Err(ProblemError::GridMismatch { .. })
    ));
    let bad = ProblemSetup { t_final: 0.0, ..ProblemSetup::standard(nu, FrameTransform::identity()) };
    assert!(bad.validate().is_err());
}

#[test]
fn test_field_derivatives_from_jets() {
    let r = ReferenceSolution::exact(1.0);
    let j = r.jet_at(5.0, 2.0, 4).unwrap();
    assert_eq!(r.derivative(3, 1, 5.0, 2.0), j.derivative(3, 1));
    // the field solves Burgers, so u_xt = −(u u_x)_x + ν u_xxx
    let d = |a, b| r.derivative(a, b, 5.0, 2.0);
    let lhs = d(1, 1);
    let rhs = -(d(1, 0) * d(1, 0) + d(0, 0) * d(2, 0)) + d(3, 0);
    assert!((lhs - rhs).abs() < 1e-12);
}

fn consistency_defect(kind: SchemeKind, h: f64, tau: f64) -> f64 {
    let entry = catalog_entry(kind);
    let da = differential_approximation(&entry).unwrap();
    let field = ReferenceSolution::exact(1.0);
    numerical_consistency_check(&entry, &da, &field, (5.0, 2.0), h, tau)
}

#[test]
fn ftcs_consistency_defect_order() {
    // modeled through τ and h²; the remainder is O(h⁴) with τ = h²
    let e1 = consistency_defect(SchemeKind::Ftcs, 0.2, 0.04);
    let e2 = consistency_defect(SchemeKind::Ftcs, 0.1, 0.01);
    let ratio = e1 / e2;
    assert!((ratio - 16.0).abs() < 3.0, "{ratio}");
}

#[test]
fn tiny_steps_defect_is_small() {
    let modeled_to_second_order = [SchemeKind::Ftcs, SchemeKind::LaxWendroff, SchemeKind::CrankNicolson, SchemeKind::HighOrder];
    for kind in modeled_to_second_order {
        let e = consistency_defect(kind, 2e-3, 2e-3 * 2e-3);
        assert!(e < 1e-8, "{kind}: {e}");
    }
}

#[test]
fn high_order_consistency_orders() {
    // spatial: remainder O(h⁴) at τ = h²·(small)
    let e1 = consistency_defect(SchemeKind::HighOrder, 0.2, 0.2 * 0.2 * 0.01);
    let e2 = consistency_defect(SchemeKind::HighOrder, 0.1, 0.1 * 0.1 * 0.01);
    let ratio = e1 / e2;
    assert!(ratio > 12.0, "{ratio}");
}

#[test]
fn invariant_consistency_defect_order() {
    // The expanded stencil loses digits like 1/h² below h ≈ 0.02, so the
    // remainder (observed O(h⁴) with τ = h²) is probed on coarse steps.
    let e1 = consistency_defect(SchemeKind::Invariant, 0.08, 0.08 * 0.08);
    let e2 = consistency_defect(SchemeKind::Invariant, 0.04, 0.04 * 0.04);
    let ratio = e1 / e2;
    assert!(ratio > 8.0, "{ratio}");
    assert!(e2 < 1e-6);
}

