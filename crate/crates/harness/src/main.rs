use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use invscheme_core::problems::FrameTransform;
use invscheme_core::schemes::SchemeKind;
use invscheme_core::stability::{check_classical, check_invariant, StabilityParams, Verdict, CAVEAT_THRESHOLD};
use invscheme_core::symmetry::GeneratorSet;
use invscheme_harness::convergence::{convergence_study, ConvergenceTemplate, Probe};
use invscheme_harness::output::{comparison_chart, emit_outputs};
use invscheme_harness::reports::{
    default_constraint_report, golden_mismatches, modified_equation, modified_equation_diff, parse_order, select_pairs,
    symmetry_machine, symmetry_rows, symmetry_table, Target, CONSTRAINT_GOLDEN, SYMMETRY_GOLDEN,
};
use invscheme_harness::{compare_frames, config, parse_config, run_experiment, sweep, ConfigError, RunConfig, RunOutcome};

const EXIT_CONFIG: u8 = 1;
const EXIT_UNSTABLE: u8 = 2;
const EXIT_GOLDEN: u8 = 3;

#[derive(Parser)]
#[command(name = "invscheme", version, about = "Invariant finite-difference schemes for the Burgers equation")]
#[command(after_help = "Exit codes: 0 success, 1 config error, 2 instability, 3 golden mismatch")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration and write its files to its output_dir
    #[command(after_help = config::keys_help())]
    Run { config: PathBuf },
    /// Run every *.cfg file of a directory in parallel
    Sweep {
        dir: PathBuf,
        /// Each run writes to <out>/<file stem>; the error comparison goes to <out>/errors.svg
        #[arg(long, default_value = "sweep_out")]
        out: PathBuf,
    },
    /// Frame sensitivity max l2(F2) / max l2(F1) of a configuration
    CompareFrames {
        config: PathBuf,
        /// The second frame
        #[arg(long, default_value = "galilean:1")]
        frame: String,
        /// Upper end of the compared time window
        #[arg(long, default_value_t = 5.0)]
        t_max: f64,
        /// Compare every scheme instead of the configured one
        #[arg(long)]
        all_schemes: bool,
    },
    /// On-shell symmetry residuals, checked against the committed goldens
    CheckSymmetries {
        #[arg(long, value_parser = parse_set)]
        set: Option<GeneratorSet>,
        #[arg(long, value_parser = |s: &str| s.parse::<Target>())]
        target: Option<Target>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Differential approximation of a scheme
    ModifiedEquation {
        #[arg(long)]
        scheme: SchemeKind,
        /// Truncation order as "tau,h", e.g. 1,2 for O(tau, h^2)
        #[arg(long)]
        order: Option<String>,
        /// Print computed minus the hand-entered representation instead
        #[arg(long = "diff-paper")]
        diff_reference: bool,
    },
    /// Constraint residuals of the default artificial viscosity
    CConstraints,
    /// Stability verdict and slacks; give --s/--cfl or --nu/--a/--h/--tau
    StabilityCheck {
        #[arg(long)]
        scheme: SchemeKind,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        cfl: Option<f64>,
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        omega_tau: f64,
        #[arg(long, default_value_t = CAVEAT_THRESHOLD)]
        caveat: f64,
    },
    /// Observed order of accuracy under refinement
    Convergence {
        #[arg(long)]
        scheme: SchemeKind,
        #[arg(long)]
        probe: Probe,
        #[arg(long, default_value_t = 4)]
        levels: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Machine,
}

fn parse_set(s: &str) -> Result<GeneratorSet, String> {
    GeneratorSet::from_name(s).ok_or_else(|| format!("unknown set '{s}' (burgers6 | fda4 | invariant6)"))
}

fn load(path: &Path) -> Result<RunConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn report_run(run: &RunOutcome, dir: &Path) -> Result<bool, String> {
    let s = &run.steps;
    println!(
        "{} h={} tau={} nu={} a={} samples={} max_l2={:e}",
        run.config.scheme,
        s.h,
        s.tau,
        s.nu,
        s.a,
        run.series.len(),
        run.series.max_until(f64::INFINITY)
    );
    emit_outputs(run, dir).map_err(|e| e.to_string())?;
    if let Some(msg) = &run.aborted {
        eprintln!("run aborted: {msg}");
        if let Some(k) = run.doubling_step {
            eprintln!("field norm doubled at step {k}");
        }
        return Ok(false);
    }
    Ok(true)
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn print_stability(kind: SchemeKind, sp: &StabilityParams, caveat: f64) -> Verdict {
    println!("S = {}  CFL = {}  S* = {}  omega*tau = {}", sp.s, sp.cfl, sp.s_star, sp.omega_tau);
    match kind {
        SchemeKind::Invariant | SchemeKind::HighOrder => {
            let c = check_invariant(sp, caveat);
            println!("slack CFL^2 - 2S - 2*omega*tau = {} (must be <= 0)", c.slack1);
            println!("4S/3 - 2S^2 + omega*tau = {} (must lie in [0, 1/2])", c.middle);
            if c.necessary_only {
                println!("note: |omega*tau| > {caveat}; the conditions are necessary only");
            }
            c.verdict
        }
        _ => {
            let v = check_classical(kind, sp).expect("classical kinds");
            match kind {
                SchemeKind::Ftcs => println!("slack 1/2 - S = {}", 0.5 - sp.s),
                SchemeKind::LaxWendroff => println!("slack 1/2 - S* = {}", 0.5 - sp.s_star),
                _ => {}
            }
            if kind != SchemeKind::CrankNicolson {
                println!("slack 1 - CFL = {}", 1.0 - sp.cfl);
            }
            v
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Run { config } => {
            let cfg = match load(&config) {
                Ok(c) => c,
                Err(e) => return fail(EXIT_CONFIG, e),
            };
            let run = match run_experiment(&cfg) {
                Ok(r) => r,
                Err(e) => return fail(EXIT_CONFIG, e),
            };
            match report_run(&run, &cfg.output_dir) {
                Ok(true) => ExitCode::SUCCESS,
                Ok(false) => ExitCode::from(EXIT_UNSTABLE),
                Err(e) => fail(EXIT_CONFIG, e),
            }
        }
        Command::Sweep { dir, out } => {
            let mut files: Vec<PathBuf> = match std::fs::read_dir(&dir) {
                Ok(rd) => rd
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|p| p.extension().is_some_and(|x| x == "cfg"))
                    .collect(),
                Err(e) => return fail(EXIT_CONFIG, format!("{}: {e}", dir.display())),
            };
            files.sort();
            if files.is_empty() {
                return fail(EXIT_CONFIG, format!("{}: no .cfg files", dir.display()));
            }
            let mut configs = Vec::new();
            for f in &files {
                match load(f) {
                    Ok(c) => configs.push(c),
                    Err(e) => return fail(EXIT_CONFIG, e),
                }
            }
            let mut all_ok = true;
            let mut runs = Vec::new();
            for (f, r) in files.iter().zip(sweep(&configs)) {
                let stem = f.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                let run = match r {
                    Ok(r) => r,
                    Err(e) => return fail(EXIT_CONFIG, format!("{}: {e}", f.display())),
                };
                print!("{stem}: ");
                match report_run(&run, &out.join(&stem)) {
                    Ok(ok) => all_ok &= ok,
                    Err(e) => return fail(EXIT_CONFIG, e),
                }
                runs.push(run);
            }
            let refs: Vec<&RunOutcome> = runs.iter().collect();
            if let Err(e) = std::fs::write(out.join("errors.svg"), comparison_chart(&refs, "L2 error")) {
                return fail(EXIT_CONFIG, format!("{}: {e}", out.display()));
            }
            if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_UNSTABLE)
            }
        }
        Command::CompareFrames {
            config,
            frame,
            t_max,
            all_schemes,
        } => {
            let cfg = match load(&config) {
                Ok(c) => c,
                Err(e) => return fail(EXIT_CONFIG, e),
            };
            let f2: FrameTransform = match frame.parse() {
                Ok(f) => f,
                Err(e) => return fail(EXIT_CONFIG, e),
            };
            let schemes = if all_schemes { SchemeKind::ALL.to_vec() } else { vec![cfg.scheme] };
            let mut unstable = false;
            println!("{:<16} {:>14} {:>14} {:>10}", "scheme", "max l2 F1", "max l2 F2", "rho");
            for k in schemes {
                let c = match compare_frames(&RunConfig { scheme: k, ..cfg.clone() }, f2, t_max) {
                    Ok(c) => c,
                    Err(e) => return fail(EXIT_CONFIG, e),
                };
                unstable |= !(c.f1.completed() && c.f2.completed());
                println!(
                    "{:<16} {:>14.6e} {:>14.6e} {:>10.5}",
                    k.name(),
                    c.f1.series.max_until(t_max),
                    c.f2.series.max_until(t_max),
                    c.rho
                );
            }
            if unstable {
                ExitCode::from(EXIT_UNSTABLE)
            } else {
                ExitCode::SUCCESS
            }
        }
        Command::CheckSymmetries { set, target, format } => {
            let pairs = select_pairs(set, target);
            let rows = match symmetry_rows(&pairs) {
                Ok(r) => r,
                Err(e) => return fail(EXIT_CONFIG, e),
            };
            match format {
                Format::Table => print!("{}", symmetry_table(&rows)),
                Format::Machine => print!("{}", symmetry_machine(&rows)),
            }
            let bad = golden_mismatches(&rows, SYMMETRY_GOLDEN);
            if bad.is_empty() {
                ExitCode::SUCCESS
            } else {
                for b in &bad {
                    eprintln!("golden mismatch: {b}");
                }
                ExitCode::from(EXIT_GOLDEN)
            }
        }
        Command::ModifiedEquation {
            scheme,
            order,
            diff_reference,
        } => {
            let order = match order.as_deref().map(parse_order).transpose() {
                Ok(o) => o,
                Err(e) => return fail(EXIT_CONFIG, e),
            };
            let out = if diff_reference {
                if order.is_some() {
                    return fail(EXIT_CONFIG, "--diff-paper compares at the modeled order; drop --order");
                }
                modified_equation_diff(scheme)
            } else {
                modified_equation(scheme, order)
            };
            match out {
                Ok(p) => {
                    println!("{p}");
                    ExitCode::SUCCESS
                }
                Err(e) => fail(EXIT_CONFIG, e),
            }
        }
        Command::CConstraints => {
            let report = default_constraint_report().to_string();
            print!("{report}");
            if report == CONSTRAINT_GOLDEN {
                ExitCode::SUCCESS
            } else {
                fail(EXIT_GOLDEN, "constraint report differs from the committed golden")
            }
        }
        Command::StabilityCheck {
            scheme,
            s,
            cfl,
            nu,
            a,
            h,
            tau,
            omega_tau,
            caveat,
        } => {
            let sp = match (s, cfl, nu, a, h, tau) {
                (Some(s), Some(cfl), None, None, None, None) => StabilityParams::new(s, cfl, omega_tau),
                (None, None, Some(nu), Some(a), Some(h), Some(tau)) if h > 0.0 => {
                    StabilityParams::from_steps(nu, a, h, tau, omega_tau)
                }
                _ => return fail(EXIT_CONFIG, "give either --s and --cfl, or --nu, --a, --h (> 0) and --tau"),
            };
            let v = print_stability(scheme, &sp, caveat);
            println!("verdict: {v}");
            if v.is_stable() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_UNSTABLE)
            }
        }
        Command::Convergence { scheme, probe, levels } => {
            let template = ConvergenceTemplate {
                levels,
                ..ConvergenceTemplate::standard(scheme, probe)
            };
            match convergence_study(&template) {
                Ok(t) => {
                    print!("{t}");
                    ExitCode::SUCCESS
                }
                Err(ConfigError::Invalid(msg)) if msg.contains("aborted") => fail(EXIT_UNSTABLE, msg),
                Err(e) => fail(EXIT_CONFIG, e),
            }
        }
    }
}
