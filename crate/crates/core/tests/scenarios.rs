use plasmon_dimer::scenarios::{
    config_from_json, emit_csv, named_scenario, run_scenario, write_csv, Method, RunOptions, Sweep,
    TimeGrid,
};
use plasmon_dimer::Error;

fn csv_of(name: &str, json: &str, threads: usize) -> String {
    let cfg = config_from_json(name, json).unwrap();
    let out = run_scenario(
        &cfg,
        &RunOptions {
            threads: Some(threads),
            ..Default::default()
        },
    )
    .unwrap();
    let mut buf = Vec::new();
    write_csv(&out, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn sweeps_are_deterministic_across_thread_counts() {
    let json = r#"{"time": {"t_max": 12.0, "samples": 25}, "sweep": {"axis": "laser_amplitude", "min": 0.4, "max": 3.6, "points": 5}}"#;
    let one = csv_of("fig3", json, 1);
    let four = csv_of("fig3", json, 4);
    assert_eq!(one, four);
    assert_eq!(one, csv_of("fig3", json, 3));
    assert_eq!(one.lines().count(), 1 + 5 * 25);
}

#[test]
fn fig4_grid_row_count() {
    let json = r#"{"time": {"t_max": 4.0, "samples": 41}}"#;
    let text = csv_of("fig4", json, 2);
    assert_eq!(text.lines().count(), 1 + 21 * 41);
    let first_cols: Vec<f64> = text
        .lines()
        .skip(1)
        .step_by(41)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(first_cols.len(), 21);
    assert!(first_cols.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn time_column_is_monotone() {
    let text = csv_of("fig1b", "{}", 1);
    let t: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(t.len(), 401);
    assert!(t.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn fig1b_bell_populations_sum_to_one() {
    let out = run_scenario(&named_scenario("fig1b").unwrap(), &RunOptions::default()).unwrap();
    for r in &out.points[0].records {
        assert!((r.bell.total() - 1.0).abs() < 1e-12);
    }
    assert_eq!(out.points[0].method, Method::Resonant);
}

#[test]
fn fig2b_sweep_uses_closed_form_and_stays_uncorrelated() {
    let mut cfg = named_scenario("fig2b").unwrap();
    cfg.time = TimeGrid {
        t_max: 10.0,
        samples: 21,
    };
    let out = run_scenario(
        &cfg,
        &RunOptions {
            verify: true,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(out.points.len(), 41);
    for p in &out.points {
        assert_eq!(p.method, Method::GammaZero);
        for r in &p.records {
            assert!(r.report.mutual_information < 1e-8);
        }
    }
}

#[test]
fn raw_elements_match_trace() {
    let mut cfg = named_scenario("fig3-uncoupled").unwrap();
    cfg.time = TimeGrid {
        t_max: 2.0,
        samples: 5,
    };
    let out = run_scenario(
        &cfg,
        &RunOptions {
            raw_elements: true,
            ..Default::default()
        },
    )
    .unwrap();
    for r in &out.points[0].records {
        let e = r.elements.unwrap();
        let tr: f64 = (0..4).map(|i| e[5 * i].re).sum();
        assert!((tr - 1.0).abs() < 1e-12);
    }
}

#[test]
fn emit_csv_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1a.csv");
    let mut cfg = named_scenario("fig1a").unwrap();
    cfg.time = TimeGrid {
        t_max: 1.0,
        samples: 3,
    };
    let out = run_scenario(&cfg, &RunOptions::default()).unwrap();
    emit_csv(&out, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("0.000000000000,1.0"));
}

#[test]
fn emit_csv_reports_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    let mut cfg = named_scenario("fig1a").unwrap();
    cfg.time = TimeGrid {
        t_max: 1.0,
        samples: 2,
    };
    let out = run_scenario(&cfg, &RunOptions::default()).unwrap();
    let err = emit_csv(&out, &path).unwrap_err();
    assert!(matches!(err, Error::Io { .. }));
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn config_errors_name_the_field() {
    let cases = [
        (r#"{"zeta": 0}"#, "zeta"),
        (r#"{"time": {"t_max": -1}}"#, "time.t_max"),
        (r#"{"waveguide": {"beta": 1.5}}"#, "waveguide.beta"),
        (
            r#"{"sweep": {"axis": "c_plus", "min": 0, "max": 1, "points": 0}}"#,
            "sweep.points",
        ),
        (
            r#"{"initial_state": {"kind": "x_state", "a3": 0.9, "b3": -0.9, "eta": 0.9, "h3": 0.0}}"#,
            "initial_state",
        ),
        (
            r#"{"initial_state": {"kind": "tachyon"}}"#,
            "initial_state.kind",
        ),
    ];
    for (json, field) in cases {
        match config_from_json("fig1a", json) {
            Err(Error::Config { path, .. }) => assert_eq!(path, field, "{json}"),
            other => panic!("{json}: {other:?}"),
        }
    }
}

#[test]
fn switching_variants_drops_old_fields() {
    let cfg = config_from_json(
        "fig2b",
        r#"{"initial_state": {"kind": "ground"}, "sweep": {"axis": "none"}}"#,
    )
    .unwrap();
    assert_eq!(cfg.sweep, Sweep::None);
    let cfg = config_from_json(
        "fig2b",
        r#"{"initial_state": {"kind": "bell", "which": "PsiMinus"}}"#,
    )
    .unwrap();
    assert!(matches!(
        cfg.initial_state,
        plasmon_dimer::scenarios::InitialState::Bell { .. }
    ));
    let cfg = config_from_json("fig3", r#"{"sweep": {"points": 5}}"#).unwrap();
    assert_eq!(
        cfg.sweep,
        Sweep::LaserAmplitude {
            min: 0.4,
            max: 3.6,
            points: 5
        }
    );
}

#[test]
fn sweep_override_changes_axis() {
    let cfg = config_from_json(
        "fig1a",
        r#"{"sweep": {"axis": "molecular_detuning", "min": 0.5, "max": 1.5, "points": 3}}"#,
    )
    .unwrap();
    assert_eq!(
        cfg.sweep,
        Sweep::MolecularDetuning {
            min: 0.5,
            max: 1.5,
            points: 3
        }
    );
    let pts = cfg.points().unwrap();
    assert_eq!(pts[1].drive.molecular_detuning, 1.0);
    // zeta = 1 has gamma != 0, so detuned points are integrated
    assert_eq!(pts[1].method(), Method::Integrator);
}
