//! Acceptance criteria 1 to 8; one PASS/FAIL line each.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use invscheme_core::diffalg::burgers;
use invscheme_core::modeq::reference_representation;
use invscheme_core::problems::{residual_audit, FrameTransform, ProblemSetup};
use invscheme_core::schemes::SchemeKind;
use invscheme_core::stability::{run_grid, stability_grids};
use invscheme_core::symmetry::{builtin_generators, onshell_residual, GeneratorSet};
use invscheme_harness::convergence::{convergence_study, ConvergenceTemplate, Probe};
use invscheme_harness::reports::{default_constraint_report, modified_equation, symmetry_rows, Target, CONSTRAINT_GOLDEN};
use invscheme_harness::{compare_frames, parse_config, resolve_steps};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: String) -> Outcome {
    if cond {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let f = burgers();
    let mut nonzero = Vec::new();
    for g in builtin_generators(GeneratorSet::Burgers6) {
        let r = onshell_residual(&g, &f, None).map_err(|e| e.to_string())?;
        if !r.is_zero() {
            nonzero.push(format!("{} -> {r}", g.name));
        }
    }
    let elapsed = start.elapsed();
    check(
        nonzero.is_empty() && elapsed < Duration::from_secs(5),
        format!("burgers6 on-shell residuals all zero: {} ({elapsed:.2?} < 5 s) {nonzero:?}", nonzero.is_empty()),
    )
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("goldens").join(name)
}

fn criterion_2() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for kind in [SchemeKind::Ftcs, SchemeKind::LaxWendroff, SchemeKind::CrankNicolson] {
        let computed = modified_equation(kind, None).map_err(|e| e.to_string())?;
        let literal = reference_representation(kind);
        let golden = std::fs::read_to_string(golden_path(&format!("modified_{}.txt", kind.name())))
            .map_err(|e| e.to_string())?;
        let exact = computed == literal && golden.trim_end() == literal.to_string();
        ok &= exact;
        notes.push(format!("{kind} {}", if exact { "exact" } else { "MISMATCH" }));
    }
    check(ok, format!("differential approximations equal the literals: {}", notes.join(", ")))
}

fn criterion_3() -> Outcome {
    use SchemeKind::*;
    let pairs: Vec<_> = [Ftcs, LaxWendroff, CrankNicolson]
        .into_iter()
        .map(|k| (GeneratorSet::Fda4, Target::Scheme(k)))
        .collect();
    let rows = symmetry_rows(&pairs).map_err(|e| e.to_string())?;
    let zero = rows.iter().filter(|r| r.residual.is_zero()).count();
    let lost = symmetry_rows(&[(GeneratorSet::Burgers6, Target::Scheme(Ftcs))]).map_err(|e| e.to_string())?;
    let l4_l5: Vec<bool> = lost
        .iter()
        .filter(|r| r.generator == "L4" || r.generator == "L5")
        .map(|r| !r.residual.is_zero())
        .collect();
    check(
        zero == 12 && l4_l5 == [true, true],
        format!("fda4 zero on ftcs/lw/cn: {zero}/12; L4, L5 nonzero on ftcs: {l4_l5:?}"),
    )
}

fn criterion_4() -> Outcome {
    let report = default_constraint_report();
    let galilean = report
        .rows
        .iter()
        .find(|r| r.subgroup == "galilean")
        .map(|r| r.is_zero())
        .unwrap_or(false);
    let matches = report.to_string() == CONSTRAINT_GOLDEN;
    check(
        galilean && matches,
        format!("galilean constraint zero: {galilean}; six-row report matches golden: {matches}"),
    )
}

fn criterion_5() -> Outcome {
    use SchemeKind::*;
    let cases = [
        (Ftcs, Probe::Spatial, 2.0),
        (Ftcs, Probe::Temporal, 1.0),
        (LaxWendroff, Probe::Temporal, 2.0),
        (CrankNicolson, Probe::Temporal, 2.0),
        (HighOrder, Probe::Spatial, 4.0),
        (HighOrder, Probe::Temporal, 2.0),
        (Invariant, Probe::Temporal, 1.0),
    ];
    let start = Instant::now();
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = cases
            .iter()
            .map(|&(k, p, _)| {
                s.spawn(move || {
                    let t = ConvergenceTemplate::standard(k, p);
                    let finest = (t.nx - 1) * (1 << (t.levels - 1)) + 1;
                    (finest, convergence_study(&t))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("study panicked")).collect()
    });
    let elapsed = start.elapsed();
    let mut ok = elapsed < Duration::from_secs(120);
    let mut notes = Vec::new();
    for ((kind, probe, expected), (finest, table)) in cases.iter().zip(results) {
        let order = table.as_ref().ok().and_then(|t| t.final_order());
        let pass = finest <= 1601 && order.is_some_and(|o| (o - expected).abs() <= 0.3);
        ok &= pass;
        notes.push(match order {
            Some(o) => format!("{kind} {probe} {o:.3} (want {expected} +- 0.3)"),
            None => format!("{kind} {probe} failed: {:?}", table.err()),
        });
    }
    check(ok, format!("observed orders [{}] in {elapsed:.1?} < 120 s", notes.join("; ")))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for grid in stability_grids() {
        let cells = run_grid(&grid, 32, 200);
        let agree = cells.iter().filter(|c| c.agrees()).count();
        ok &= agree >= 24;
        notes.push(format!("{} {agree}/25", grid.kind));
    }
    let elapsed = start.elapsed();
    check(
        ok && elapsed < Duration::from_secs(30),
        format!("mode growth agrees with predicted verdicts: {} in {elapsed:.2?} < 30 s", notes.join(", ")),
    )
}

fn criterion_7() -> Outcome {
    let configs = [(2.0, 0.04), (2.0, 0.08), (3.0, 0.08)];
    let schemes = SchemeKind::ALL;
    let mut ok = true;
    let mut notes = Vec::new();
    for (re_h, cfl) in configs {
        let results: Vec<_> = std::thread::scope(|s| {
            let handles: Vec<_> = schemes
                .iter()
                .map(|&k| {
                    s.spawn(move || {
                        let text = format!("scheme = {k}\nre_h = {re_h}\ncfl = {cfl}\nnx = 201\nt_final = 5\n");
                        let cfg = parse_config(&text).expect("valid config");
                        compare_frames(&cfg, FrameTransform::galilean_unit(), 5.0)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("run panicked")).collect()
        });
        let mut by_kind = std::collections::BTreeMap::new();
        for (k, r) in schemes.iter().zip(results) {
            match r {
                Ok(c) if c.f1.completed() && c.f2.completed() => {
                    by_kind.insert(*k, (c.rho, c.f2.series.max_until(5.0)));
                }
                Ok(_) => return Err(format!("{k} run aborted at Re_h={re_h}, CFL={cfl}")),
                Err(e) => return Err(e.to_string()),
            }
        }
        let (rho_inv, f2_inv) = by_kind[&SchemeKind::Invariant];
        let below = [SchemeKind::Ftcs, SchemeKind::LaxWendroff, SchemeKind::CrankNicolson]
            .iter()
            .all(|k| rho_inv < by_kind[k].0);
        let f2_high = by_kind[&SchemeKind::HighOrder].1;
        let close = f2_inv <= 2.0 * f2_high && f2_high <= 2.0 * f2_inv;
        ok &= below && close;
        notes.push(format!(
            "(Re_h={re_h}, CFL={cfl}) rho inv {:.4} ftcs {:.4} lw {:.4} cn {:.4}; F2 max l2 inv/high {:.3}",
            rho_inv,
            by_kind[&SchemeKind::Ftcs].0,
            by_kind[&SchemeKind::LaxWendroff].0,
            by_kind[&SchemeKind::CrankNicolson].0,
            f2_inv / f2_high
        ));
    }
    check(ok, notes.join("; "))
}

fn criterion_8() -> Outcome {
    let cfg = parse_config("scheme = invariant\nre_h = 2\ncfl = 0.04\n").expect("valid config");
    let nu = resolve_steps(&cfg).map_err(|e| e.to_string())?.nu;
    let setup = ProblemSetup::standard(nu, FrameTransform::identity());
    let audit = residual_audit(&setup.reference(), &setup, 1000).map_err(|e| e.to_string())?;
    let passed = audit.max_residual <= 1e-8;
    let outcome = if passed {
        "closed form solves Burgers, manufactured fallback not engaged".to_string()
    } else {
        "residual above 1e-8, convergence studies must use the manufactured solution".to_string()
    };
    // Either outcome is acceptable; only a missing record would fail.
    Ok(format!(
        "exact-solution audit at {} points, nu = {nu:.6}: max |residual| = {:.3e} at (x, t) = ({:.4}, {:.4}); {outcome}",
        audit.points, audit.max_residual, audit.at.0, audit.at.1
    ))
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let mut failed = 0;
    for (n, f) in criteria {
        match f() {
            Ok(msg) => println!("criterion {n}: PASS {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n}: FAIL {msg}");
            }
        }
    }
    println!("acceptance: {}/8 passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
