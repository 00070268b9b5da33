use invscheme_core::stability::*;
use core::f64::consts::PI;
use num_complex::Complex64;
use invscheme_core::schemes::{ArtificialViscosity, Field, Grid1D, SchemeKind, StepParams};
use invscheme_core::schemes::{step, FnBoundary};
use proptest::prelude::*;

fn sp(s: f64, cfl: f64, w: f64) -> StabilityParams {
    StabilityParams::new(s, cfl, w)
}

#[test]
fn classical_examples() {
    assert_eq!(check_classical(SchemeKind::Ftcs, &sp(0.4, 0.9, 0.0)), Ok(Verdict::Stable));
    assert_eq!(check_classical(SchemeKind::Ftcs, &sp(0.6, 0.5, 0.0)), Ok(Verdict::Unstable));
    assert_eq!(check_classical(SchemeKind::Ftcs, &sp(0.5, 0.5, 0.0)), Ok(Verdict::StableAtBoundary));
    assert_eq!(check_classical(SchemeKind::Ftcs, &sp(0.1, 1.2, 0.0)), Ok(Verdict::Unstable));
    for (s, c) in [(0.0, 0.0), (3.0, 7.0), (100.0, 0.1)] {
        assert_eq!(check_classical(SchemeKind::CrankNicolson, &sp(s, c, 0.0)), Ok(Verdict::Unconditional));
    }
    // S* = 0.3 + 0.8²/2 = 0.62
    assert_eq!(check_classical(SchemeKind::LaxWendroff, &sp(0.3, 0.8, 0.0)), Ok(Verdict::Unstable));
    assert_eq!(check_classical(SchemeKind::LaxWendroff, &sp(0.3, 0.4, 0.0)), Ok(Verdict::Stable));
    assert_eq!(
        check_classical(SchemeKind::Invariant, &sp(0.3, 0.4, 0.0)),
        Err(StabilityError::NotClassical(SchemeKind::Invariant))
    );
}

#[test]
fn s_star_from_steps() {
    let p = StabilityParams::from_steps(0.1, 2.0, 0.2, 0.01, 0.0);
    assert!((p.s - 0.025).abs() < 1e-15);
    assert!((p.cfl - 0.1).abs() < 1e-15);
    assert!((p.s_star - (0.1 + 0.5 * 2.0 * 0.2 * 0.1) * 0.01 / 0.04).abs() < 1e-15);
    assert!((p.s_star - (p.s + 0.5 * p.cfl * p.cfl)).abs() < 1e-15);
}

#[test]
fn invariant_examples() {
    let c = check_invariant(&sp(0.5, 0.5, 0.0), CAVEAT_THRESHOLD);
    assert!((c.slack1 + 0.75).abs() < 1e-15);
    assert!((c.middle - 1.0 / 6.0).abs() < 1e-15);
    assert_eq!(c.verdict, Verdict::Stable);
    assert!(!c.necessary_only);

    let c = check_invariant(&sp(0.0, 0.1, 0.0), CAVEAT_THRESHOLD);
    assert!((c.slack1 - 0.01).abs() < 1e-15);
    assert_eq!(c.verdict, Verdict::Unstable);

    let c = check_invariant(&sp(0.0, 0.0, 0.5), CAVEAT_THRESHOLD);
    assert_eq!(c.middle, 0.5);
    assert_eq!(c.verdict, Verdict::StableAtBoundary);
    assert!(c.necessary_only);
    assert!(!check_invariant(&sp(0.0, 0.0, 0.5), 0.6).necessary_only);
}

#[test]
fn characteristic_speed_from_data() {
    let g = Grid1D::new(0.0, 0.5, 5, 2).unwrap();
    let mut f = Field::sample(&g, 0.0, |x| 1.0 - x);
    assert_eq!(characteristic_speed(&f, &g), Ok(1.0));
    f.values[0] = -50.0; // ghosts are ignored
    assert_eq!(characteristic_speed(&f, &g), Ok(1.0));
    let z = Field::sample(&g, 0.0, |_| 0.0);
    assert_eq!(characteristic_speed(&z, &g), Err(StabilityError::BadSpeed));
}

/// One linear step applied to the complex mode must multiply it by G.
#[test]
fn linear_stepper_matches_amplification_factor() {
    let n = 16;
    for kind in SchemeKind::ALL {
        let p = sp(0.3, 0.45, 0.07);
        let stepper = LinearStepper::new(kind, p, n);
        for k in 1..n / 2 {
            let theta = 2.0 * PI * k as f64 / n as f64;
            let re: Vec<f64> = (0..n).map(|j| libm::cos(theta * j as f64)).collect();
            let im: Vec<f64> = (0..n).map(|j| libm::sin(theta * j as f64)).collect();
            let (r1, i1) = (stepper.step(&re), stepper.step(&im));
            let g = amplification_factor(kind, &p, theta);
            for j in 0..n {
                let e = Complex64::new(re[j], im[j]) * g;
                assert!((r1[j] - e.re).abs() < 1e-12 && (i1[j] - e.im).abs() < 1e-12, "{kind} k={k}");
            }
        }
    }
}

/// Nonlinear step about the constant state `a` versus the linear factor,
/// with `Ωτ = CFL²/2` for the invariant family.
#[test]
fn frozen_coefficient_agreement() {
    let (a, h, s, cfl, eps) = (1.5, 0.1, 0.2, 0.3, 1e-6);
    let tau = cfl * h / a;
    let nu = s * h * h / tau;
    let g = Grid1D::new(0.0, h, 41, 2).unwrap();
    let theta = 2.0 * PI / 8.0;
    let k = theta / h;
    for kind in SchemeKind::ALL {
        let w = match kind {
            SchemeKind::Invariant | SchemeKind::HighOrder => 0.5 * cfl * cfl,
            _ => 0.0,
        };
        let gf = amplification_factor(kind, &sp(s, cfl, w), theta);
        let exact = move |x: f64, t: f64| {
            let n = libm::round(t / tau) as i32;
            let mut z = Complex64::new(libm::cos(k * x), libm::sin(k * x));
            for _ in 0..n {
                z *= gf;
            }
            a + eps * z.re
        };
        let f0 = Field::sample(&g, 0.0, |x| exact(x, 0.0));
        let params = StepParams::new(tau, nu, ArtificialViscosity::DEFAULT).unwrap();
        let f1 = step(kind, &f0, &params, &g, &FnBoundary(exact)).unwrap();
        for i in g.interior() {
            let pred = exact(g.x_at(i), tau);
            assert!((f1.values[i] - pred).abs() < 1e-3 * eps, "{kind} at {i}: {} vs {pred}", f1.values[i]);
        }
    }
}

#[test]
fn mode_growth_examples() {
    assert!(mode_growth(SchemeKind::Ftcs, &sp(0.3, 0.5, 0.0), 32, 200) <= 1.0 + 1e-12);
    assert!(mode_growth(SchemeKind::Ftcs, &sp(0.6, 0.5, 0.0), 32, 200) > 1e10);
    // pure centered advection grows slowly
    let g = mode_growth(SchemeKind::Ftcs, &sp(0.0, 0.1, 0.0), 32, 200);
    assert!(g > GROWTH_THRESHOLD && g < 10.0, "{g}");
    assert!(mode_growth(SchemeKind::CrankNicolson, &sp(50.0, 10.0, 0.0), 32, 200) <= 1.0 + 1e-12);
}

#[test]
fn grids_agree_with_checks() {
    for grid in stability_grids() {
        let cells = run_grid(&grid, 32, 200);
        let agree = cells.iter().filter(|c| c.agrees()).count();
        assert!(agree >= 24, "{}: {agree}/25 {cells:?}", grid.kind);
        assert!(cells.iter().any(|c| c.predicted.is_stable()));
        if grid.kind != SchemeKind::CrankNicolson {
            assert!(cells.iter().any(|c| !c.predicted.is_stable()));
        }
    }
}

#[test]
fn monitor_constant_run() {
    let g = Grid1D::new(0.0, 0.2, 21, 2).unwrap();
    let bc = FnBoundary(|_, _| 1.0);
    let p = StepParams::new(0.01, 0.05, ArtificialViscosity::DEFAULT).unwrap();
    let mut f = Field::sample(&g, 0.0, |_| 1.0);
    let mut mon = Monitor::new(SchemeKind::Invariant, p, 1.0);
    let first = mon.observe(&f, &g);
    for _ in 0..10 {
        f = step(SchemeKind::Invariant, &f, &p, &g, &bc).unwrap();
        let r = mon.observe(&f, &g);
        assert_eq!(r.max_abs_omega_tau, first.max_abs_omega_tau);
        assert_eq!(r.verdict, first.verdict);
        assert_eq!(r.first_nan, None);
    }
    assert!((first.max_abs_omega_tau - 0.5 * 0.01 * 0.01 / 0.04).abs() < 1e-15);
    assert_eq!(mon.doubling_step(), None);
}

#[test]
fn monitor_flags_unstable_ftcs() {
    let g = Grid1D::new(0.0, 0.1, 41, 2).unwrap();
    let init = |x: f64| 1.0 + 0.01 * libm::sin(3.0 * x);
    let bc = FnBoundary(move |x, _| init(x));
    // S = 0.8
    let p = StepParams::new(0.008, 1.0, ArtificialViscosity::Zero).unwrap();
    let mut f = Field::sample(&g, 0.0, init);
    let mut mon = Monitor::new(SchemeKind::Ftcs, p, 1.0);
    let first = mon.observe(&f, &g);
    assert_eq!(first.verdict, Verdict::Unstable);
    let mut records = Vec::new();
    for _ in 0..200 {
        match step(SchemeKind::Ftcs, &f, &p, &g, &bc) {
            Ok(next) => f = next,
            Err(_) => break,
        }
        records.push(mon.observe(&f, &g));
        if mon.doubling_step().is_some() {
            break;
        }
    }
    let d = mon.doubling_step().expect("norm doubles");
    let rec = records.iter().find(|r| r.step == d).unwrap();
    assert!(rec.norm_ratio >= 2.0);
    assert!(records.iter().filter(|r| r.step < d).all(|r| r.norm_ratio < 2.0));
}

#[test]
fn monitor_reports_first_nan() {
    let g = Grid1D::new(0.0, 0.5, 7, 2).unwrap();
    let mut f = Field::sample(&g, 0.0, |_| 1.0);
    f.values[g.ghost_depth + 4] = f64::NAN;
    let mut mon = Monitor::new(SchemeKind::Ftcs, StepParams::new(0.1, 0.1, ArtificialViscosity::Zero).unwrap(), 1.0);
    let r = mon.observe(&f, &g);
    assert_eq!(r.first_nan, Some(4));
    assert_eq!(r.verdict, Verdict::Unstable);
}

proptest! {
    #[test]
    fn condition_one_monotone_in_s(cfl in 0.0f64..1.0, s1 in 0.0f64..0.5, ds in 0.0f64..0.5) {
        let s_lo = s1.max(0.5 * cfl * cfl).min(0.5);
        let s_hi = (s_lo + ds).min(0.5);
        let lo = check_invariant(&sp(s_lo, cfl, 0.0), CAVEAT_THRESHOLD);
        let hi = check_invariant(&sp(s_hi, cfl, 0.0), CAVEAT_THRESHOLD);
        prop_assert!(lo.slack1 <= 1e-12);
        prop_assert!(hi.slack1 <= lo.slack1 + 1e-15);
    }

    #[test]
    fn crank_nicolson_never_amplifies(s in 0.0f64..100.0, cfl in 0.0f64..50.0, theta in 0.0f64..6.3) {
        prop_assert!(amplification_modulus(SchemeKind::CrankNicolson, &sp(s, cfl, 0.0), theta) <= 1.0 + 1e-12);
    }

    #[test]
    fn conditions_match_amplification_at_zero_omega(s in 0.0f64..0.8, cfl in 0.0f64..1.2) {
        // away from the boundary the invariant conditions are exact at Ωτ = 0
        let c = check_invariant(&sp(s, cfl, 0.0), CAVEAT_THRESHOLD);
        let margin = c.slack1.abs().min(c.middle.abs()).min((c.middle - 0.5).abs());
        prop_assume!(margin > 1e-3);
        let worst = (0..=64)
            .map(|k| amplification_modulus(SchemeKind::Invariant, &sp(s, cfl, 0.0), PI * k as f64 / 64.0))
            .fold(0.0f64, f64::max);
        prop_assert_eq!(c.verdict.is_stable(), worst <= 1.0 + 1e-12, "max |G| = {}", worst);
    }
}
