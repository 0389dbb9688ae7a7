//! CLI surface behavior: exit codes, file schemas, byte-level reproducibility,
//! config-file merging, and the verify round trip. Numeric tolerances live in
//! the acceptance suite; these tests keep run sizes small.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use semirandom_core::ode;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_semirandom"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("semirandom-test-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn invalid_configs_exit_with_code_2() {
    let cases: &[&[&str]] = &[
        &["simulate", "--strategy", "warmup", "--n", "0"],
        &["simulate", "--strategy", "warmup", "--n", "7"],
        &["simulate", "--strategy", "nosuch", "--n", "100"],
        &[
            "simulate",
            "--strategy",
            "uniform",
            "--n",
            "100",
            "--stop-unsat-frac",
            "0.5",
        ],
        &[
            "simulate",
            "--strategy",
            "warmup",
            "--n",
            "100",
            "--tol",
            "-1",
        ],
        &["bounds", "--k", "0"],
        &["bounds", "--h", "0"],
        &["lowerbound", "--n", "11"],
        &["lowerbound", "--n", "100", "--grid-frac", "0"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "args {args:?} should exit 2");
    }
}

#[test]
fn missing_files_exit_with_code_3() {
    let out = run(&[
        "verify",
        "--arcs",
        "/nonexistent/a.csv",
        "--matching",
        "/nonexistent/m.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn simulate_outputs_are_byte_reproducible() {
    let d1 = tmpdir("repro1");
    let d2 = tmpdir("repro2");
    for dir in [&d1, &d2] {
        let out = run(&[
            "simulate",
            "--strategy",
            "warmup",
            "--n",
            "400",
            "--seeds",
            "2",
            "--stop-unsat-frac",
            "0.05",
            "--export-arcs",
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    for name in [
        "traj_seed0.csv",
        "traj_seed1.csv",
        "arcs_seed0.csv",
        "matching_seed0.csv",
        "summary.json",
    ] {
        let a = std::fs::read(d1.join(name)).unwrap();
        let b = std::fs::read(d2.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
    // Metadata may differ only in its timestamp field.
    let meta = |p: &Path| -> serde_json::Value {
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("timestamp");
        v
    };
    assert_eq!(
        meta(&d1.join("meta_seed0.json")),
        meta(&d2.join("meta_seed0.json"))
    );
    // Trajectory files carry the config hash and seed up front.
    let traj = std::fs::read_to_string(d1.join("traj_seed0.csv")).unwrap();
    let first = traj.lines().next().unwrap();
    assert!(
        first.starts_with("# config_hash=") && first.contains("seed=0"),
        "{first}"
    );
    assert_eq!(
        traj.lines().nth(1).unwrap(),
        "step,matched,unsaturated,green,red,X,Y,U,D,W"
    );
}

#[test]
fn metadata_records_generator_and_hash() {
    let dir = tmpdir("meta");
    let out = run(&[
        "simulate",
        "--strategy",
        "uniform",
        "--n",
        "200",
        "--rounds",
        "100",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("meta_seed0.json")).unwrap())
            .unwrap();
    assert_eq!(meta["generator"], "pcg64");
    assert_eq!(meta["n"], 200);
    assert!(meta["config_hash"].as_str().unwrap().len() == 16);
    assert!(meta.get("git_describe").is_some());
    assert!(meta.get("timestamp").is_some());
}

#[test]
fn verify_round_trip_on_a_perfect_run() {
    let dir = tmpdir("roundtrip");
    // Warm-up to a perfect matching at small n, exporting the arc list.
    let out = run(&[
        "simulate",
        "--strategy",
        "warmup",
        "--n",
        "200",
        "--seeds",
        "1",
        "--stop-unsat-frac",
        "0",
        "--export-arcs",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let arcs = dir.join("arcs_seed0.csv");
    let matching = dir.join("matching_seed0.csv");
    let verdict = stdout_json(&run(&[
        "verify",
        "--arcs",
        arcs.to_str().unwrap(),
        "--matching",
        matching.to_str().unwrap(),
        "--assert",
    ]));
    assert_eq!(verdict["n"], 200);
    assert_eq!(verdict["perfect"], true);
    assert_eq!(verdict["simple"], true);
    assert_eq!(verdict["certificate_ok"], true);

    // Corrupt the matching: drop a pair. The verifier must reject and
    // --assert must exit 4.
    let text = std::fs::read_to_string(&matching).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines.pop();
    let corrupt = dir.join("matching_corrupt.csv");
    std::fs::write(&corrupt, lines.join("\n") + "\n").unwrap();
    let out = run(&[
        "verify",
        "--arcs",
        arcs.to_str().unwrap(),
        "--matching",
        corrupt.to_str().unwrap(),
        "--assert",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn bounds_cli_reports_alpha_and_partial_flag() {
    let value = stdout_json(&run(&["bounds", "--k", "1", "--h", "1e-4"]));
    let alpha = value["alpha"].as_f64().unwrap();
    assert!((0.93261..=0.93262).contains(&alpha));
    assert_eq!(value["partial"], true);
    assert_eq!(value["c_q"].as_array().unwrap().len(), 1);
    assert_eq!(value["beta_components"]["cleanup"], 1e-5);
    let deltas = &value["half_step_deltas"];
    assert!(deltas["cascade"].as_f64().unwrap() <= 1e-8);
    assert!(deltas["warmup_only"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn bounds_cli_default_run_reports_the_headline_constants() {
    let value = stdout_json(&run(&["bounds"]));
    let alpha = value["alpha"].as_f64().unwrap();
    let beta = value["beta"].as_f64().unwrap();
    assert!((0.93261..=0.93262).contains(&alpha), "alpha = {alpha}");
    assert!(beta <= 1.20525, "beta = {beta}");
    assert_eq!(value["partial"], false);
    assert_eq!(value["c_q"].as_array().unwrap().len(), 1100);
    assert!(value["cascade_unsat"].as_f64().unwrap() <= 1e-6);
    assert!(value["continuation_time"].as_f64().unwrap() <= 0.00158);
    assert!(value["warmup_only_time"].as_f64().unwrap() <= 1.2769497);
    for key in ["cascade", "continuation", "warmup_only"] {
        assert!(value["half_step_deltas"][key].as_f64().unwrap() <= 1e-8);
    }
}

#[test]
fn phased_boundary_export_tracks_the_cascade() {
    // tau_1..tau_5 from the exported file against c_1..c_5, within 0.01 n.
    let n = 100_000u32;
    let dir = tmpdir("phases");
    let out = run(&[
        "simulate",
        "--strategy",
        "phased",
        "--n",
        "100000",
        "--phases",
        "5",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(dir.join("phases_seed0.csv")).unwrap();
    let taus: Vec<(u32, u64)> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('q'))
        .map(|l| {
            let mut it = l.split(',');
            (
                it.next().unwrap().parse().unwrap(),
                it.next().unwrap().parse().unwrap(),
            )
        })
        .collect();
    assert_eq!(taus.len(), 5);
    let cascade = ode::phase_cascade(5, 1e-5, 0, 0).unwrap();
    for ((q, tau), rec) in taus.iter().zip(&cascade.records) {
        assert_eq!(*q, rec.q);
        let dev = (*tau as f64 / n as f64 - rec.c).abs();
        assert!(
            dev <= 0.01,
            "tau_{q} = {tau}, c_{q} = {}, deviation {dev}",
            rec.c
        );
    }
}

#[test]
fn compare_ode_assert_mode_gates_on_tolerance() {
    // Machinery check at desk scale: a generous tolerance passes (exit 0), an
    // absurdly tight one trips the gate (exit 4). The real tolerance is
    // proven in the acceptance suite.
    let dir = tmpdir("assert");
    let base = [
        "simulate",
        "--strategy",
        "warmup",
        "--n",
        "20000",
        "--seeds",
        "1",
        "--stop-unsat-frac",
        "0.02",
        "--compare-ode",
        "--ode-h",
        "1e-5",
        "--assert",
        "--out",
    ];
    let mut ok_args: Vec<&str> = base.to_vec();
    let d1 = dir.join("ok");
    std::fs::create_dir_all(&d1).unwrap();
    let d1s = d1.to_str().unwrap().to_string();
    ok_args.push(&d1s);
    ok_args.extend_from_slice(&["--tol", "0.2"]);
    let out = bin().args(&ok_args).output().unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    let mut bad_args: Vec<&str> = base.to_vec();
    let d2 = dir.join("bad");
    std::fs::create_dir_all(&d2).unwrap();
    let d2s = d2.to_str().unwrap().to_string();
    bad_args.push(&d2s);
    bad_args.extend_from_slice(&["--tol", "0.00001"]);
    let out = bin().args(&bad_args).output().unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn simulate_sweep_with_ode_comparison_at_full_scale() {
    // The flagship sweep: ten warm-up seeds at n = 1e5 stay within 0.01 of
    // the ODE curves, end to end through the CLI (--assert exits 0).
    let dir = tmpdir("flagship");
    let out = run(&[
        "simulate",
        "--strategy",
        "warmup",
        "--n",
        "100000",
        "--seeds",
        "10",
        "--stop-unsat-frac",
        "0.01",
        "--compare-ode",
        "--assert",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap();
    let dev = summary["max_dev_x"].as_f64().unwrap();
    assert!(dev <= 0.01, "max |X/n - x| = {dev}");
    assert_eq!(summary["runs"].as_array().unwrap().len(), 10);
}

#[test]
fn lowerbound_grid_starts_false_and_warns_at_small_n() {
    let dir = tmpdir("lower");
    let summary = stdout_json(&run(&[
        "lowerbound",
        "--n",
        "1000",
        "--t-max-frac",
        "0.5",
        "--grid-frac",
        "0.05",
        "--out",
        dir.to_str().unwrap(),
    ]));
    assert!(
        summary["small_n_warning"].is_string(),
        "small-n warning missing"
    );
    assert_eq!(summary["mu"].as_f64().unwrap(), (1000f64).sqrt());
    let csv = std::fs::read_to_string(dir.join("certificate_seed0.csv")).unwrap();
    let first_row = csv.lines().nth(2).unwrap();
    assert!(first_row.starts_with("0.000000"), "{first_row}");
    assert!(
        first_row.ends_with("false"),
        "t=0 must rule a matching out: {first_row}"
    );
}

#[test]
fn pipeline_runs_emit_stage_reports() {
    let dir = tmpdir("pipeline");
    let out = run(&[
        "simulate",
        "--strategy",
        "pipeline",
        "--n",
        "2000",
        "--seeds",
        "2",
        "--phases",
        "10",
        "--continuation-eps",
        "0.01",
        "--cleanup-eps",
        "0.01",
        "--export-arcs",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    for seed in 0..2 {
        let report: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(dir.join(format!("pipeline_seed{seed}.json"))).unwrap(),
        )
        .unwrap();
        assert_eq!(report["n"], 2000);
        assert_eq!(report["perfect"], true);
        assert_eq!(report["failed_stage"], serde_json::Value::Null);
        let stages = report["stage_rounds"].as_array().unwrap();
        assert_eq!(stages.len(), 3);
        let total: u64 = stages.iter().map(|v| v.as_u64().unwrap()).sum();
        assert_eq!(total, report["total_rounds"].as_u64().unwrap());
        assert_eq!(report["phase_boundaries"].as_array().unwrap().len(), 10);
    }
    // Exported graph verifies through the verify subcommand.
    let verdict = stdout_json(&run(&[
        "verify",
        "--arcs",
        dir.join("arcs_seed0.csv").to_str().unwrap(),
        "--matching",
        dir.join("matching_seed0.csv").to_str().unwrap(),
        "--assert",
    ]));
    assert_eq!(verdict["perfect"], true);

    // Pipeline-only flags are rejected elsewhere.
    let out = run(&[
        "simulate",
        "--strategy",
        "warmup",
        "--n",
        "100",
        "--cleanup-eps",
        "0.1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "simulate",
        "--strategy",
        "pipeline",
        "--n",
        "100",
        "--compare-ode",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_is_merged_under_flags() {
    let dir = tmpdir("config");
    let cfg_path = dir.join("sim.json");
    std::fs::write(
        &cfg_path,
        serde_json::json!({
            "strategy": "warmup",
            "n": 300,
            "seeds": 2,
            "seed_base": 5,
            "rounds": null,
            "stop_unsat_frac": 0.05,
            "phases": null,
            "sample_every": 10,
            "compare_ode": false,
            "tol": 0.01,
            "export_arcs": false
        })
        .to_string(),
    )
    .unwrap();
    // Flag overrides the file's seed count; everything else comes from it.
    let summary = stdout_json(&run(&[
        "simulate",
        "--config",
        cfg_path.to_str().unwrap(),
        "--seeds",
        "1",
    ]));
    assert_eq!(summary["config"]["n"], 300);
    assert_eq!(summary["config"]["seeds"], 1);
    assert_eq!(summary["config"]["seed_base"], 5);
    assert_eq!(summary["runs"].as_array().unwrap().len(), 1);
    assert_eq!(summary["runs"][0]["seed"], 5);
}
