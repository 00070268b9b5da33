use invscheme_core::problems::FrameTransform;
use invscheme_core::schemes::SchemeKind;
use invscheme_harness::{parse_config, resolve_steps, ConfigError, ViscositySpec};

const MOVING_FRAME_RUN: &str = "scheme=invariant\nre_h=2\ncfl=0.04\nnx=201\nt_final=20\nframe=galilean:1";

#[test]
fn moving_frame_run_parses() {
    let cfg = parse_config(MOVING_FRAME_RUN).unwrap();
    assert_eq!(cfg.scheme, SchemeKind::Invariant);
    assert_eq!(cfg.viscosity, ViscositySpec::ReH(2.0));
    assert_eq!(cfg.cfl, 0.04);
    assert_eq!(cfg.nx, 201);
    assert_eq!(cfg.t_final, 20.0);
    assert_eq!(cfg.frame, FrameTransform::galilean_unit());
    assert_eq!(cfg.snapshot_times, vec![5.0]);
}

#[test]
fn defaults_and_comments() {
    let cfg = parse_config("# header\nscheme = ftcs  # trailing\n\nnu = 0.5\ncfl = 0.1\n").unwrap();
    assert_eq!(cfg.nx, 201);
    assert_eq!(cfg.t_final, 20.0);
    assert_eq!(cfg.c_kappa, -0.01);
    assert_eq!(cfg.frame, FrameTransform::identity());
    assert_eq!(cfg.output_dir.to_str(), Some("out"));
}

#[test]
fn to_text_round_trips() {
    let cfg = parse_config("scheme=lax_wendroff\nnu=0.3\ncfl=0.2\nsnapshot_times=1, 2.5\nc_kappa=0\noutput_dir=x/y").unwrap();
    assert_eq!(parse_config(&cfg.to_text()).unwrap(), cfg);
}

fn line_error(text: &str) -> (usize, String) {
    match parse_config(text) {
        Err(ConfigError::Line { line, msg }) => (line, msg),
        other => panic!("expected a line error, got {other:?}"),
    }
}

#[test]
fn zero_cfl_rejected() {
    let (line, msg) = line_error("scheme=ftcs\nnu=1\ncfl=0");
    assert_eq!(line, 3);
    assert_eq!(msg, "cfl must be positive");
}

#[test]
fn nu_and_re_h_conflict() {
    let (line, msg) = line_error("scheme=ftcs\nre_h=2\nnu=0.05\ncfl=0.1");
    assert_eq!(line, 3);
    assert!(msg.contains("nu") && msg.contains("re_h") && msg.contains("line 2"), "{msg}");
    let (line, msg) = line_error("nu=0.05\nre_h=2");
    assert_eq!(line, 2);
    assert!(msg.contains("conflicts"), "{msg}");
}

#[test]
fn malformed_and_unknown_entries_carry_line_numbers() {
    assert_eq!(line_error("scheme=ftcs\ncfl=abc").0, 2);
    assert_eq!(line_error("scheme=ftcs\n\nspeed=3").0, 3);
    assert_eq!(line_error("scheme=ftcs\nscheme=cn").0, 2);
    assert_eq!(line_error("no equals sign").0, 1);
    assert_eq!(line_error("scheme=upwind").0, 1);
    assert_eq!(line_error("nx=10").0, 1);
    assert_eq!(line_error("t_final=21").0, 1);
    assert_eq!(line_error("frame=rotation:1").0, 1);
}

#[test]
fn missing_keys() {
    assert_eq!(parse_config("nu=1\ncfl=1"), Err(ConfigError::Missing("scheme")));
    assert_eq!(parse_config("scheme=ftcs\nnu=1"), Err(ConfigError::Missing("cfl")));
    assert_eq!(parse_config("scheme=ftcs\ncfl=1"), Err(ConfigError::Missing("re_h or nu")));
}

#[test]
fn mesh_size_is_exact() {
    let cfg = parse_config("scheme=ftcs\nnu=1\ncfl=0.04\nnx=201").unwrap();
    assert_eq!(resolve_steps(&cfg).unwrap().h, 0.2);
}

#[test]
fn tau_from_cfl() {
    let cfg = parse_config("scheme=ftcs\nnu=0.7\ncfl=0.04\nnx=201").unwrap();
    let s = resolve_steps(&cfg).unwrap();
    assert_eq!(s.nu, 0.7);
    assert!(s.a > 0.0);
    assert_eq!(s.tau, 0.04 * s.h / s.a);
}

#[test]
fn re_h_fixed_point() {
    for (re_h, frame) in [(2.0, "identity"), (3.0, "identity"), (2.0, "galilean:1")] {
        let cfg = parse_config(&format!("scheme=invariant\nre_h={re_h}\ncfl=0.04\nframe={frame}")).unwrap();
        let s = resolve_steps(&cfg).unwrap();
        assert!((s.a * s.h / s.nu - re_h).abs() <= 1e-8, "{re_h} {frame}: {s:?}");
    }
}
