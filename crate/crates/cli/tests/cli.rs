use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mirror-dd"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Header must match exactly; numbers to 1e-12 so libm differences across
/// platforms do not break the schema check.
fn assert_csv_matches(got: &str, want: &str) {
    let (gl, wl): (Vec<_>, Vec<_>) = (got.lines().collect(), want.lines().collect());
    assert_eq!(gl[0], wl[0], "header");
    assert_eq!(gl.len(), wl.len(), "row count");
    assert!(!got.contains('\r'));
    for (g, w) in gl[1..].iter().zip(&wl[1..]) {
        let gv: Vec<f64> = g.split(',').map(|x| x.parse().unwrap()).collect();
        let wv: Vec<f64> = w.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(gv.len(), wv.len());
        for (a, b) in gv.iter().zip(&wv) {
            assert!((a - b).abs() < 1e-12, "{g} vs {w}");
        }
    }
}

#[test]
fn rates_csv_golden() {
    let got = stdout(&[
        "rates",
        "--xi",
        "6.283185307179586",
        "--dipole-a",
        "0,1,0",
        "--dipole-b",
        "0,1,0",
        "--ta",
        "0.5",
        "--rb",
        "1.0",
    ]);
    assert_csv_matches(&got, &golden("rates.csv"));
}

#[test]
fn rates_json_is_single_object_with_fixed_keys() {
    let got = stdout(&[
        "rates",
        "--xi",
        "6.283185307179586",
        "--dipole-a",
        "0,1,0",
        "--dipole-b",
        "0,1,0",
        "--ta",
        "0.5",
        "--rb",
        "1.0",
        "--format",
        "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&got).unwrap();
    let want: serde_json::Value = serde_json::from_str(&golden("rates.json")).unwrap();
    let keys = |v: &serde_json::Value| v.as_object().unwrap().keys().cloned().collect::<Vec<_>>();
    assert_eq!(keys(&value), keys(&want));
    assert_eq!(keys(&value["config"]), keys(&want["config"]));
    assert_eq!(value["config"], want["config"]);
    for k in [
        "xi",
        "re_gamma_ab",
        "delta_mir",
        "gamma_plus",
        "gamma_minus",
    ] {
        assert!(
            (value[k].as_f64().unwrap() - want[k].as_f64().unwrap()).abs() < 1e-12,
            "{k}"
        );
    }
}

#[test]
fn table_commands_match_golden() {
    let cases: [(&str, &[&str]); 5] = [
        (
            "sweep.csv",
            &[
                "sweep",
                "--xi-min",
                "0.5",
                "--xi-max",
                "4",
                "--points",
                "3",
                "--orientations",
                "0,1",
            ],
        ),
        (
            "lifetime.csv",
            &[
                "lifetime",
                "--re-gamma",
                "0.05",
                "--p",
                "0.1,0.2",
                "--t-max",
                "1",
                "--steps",
                "2",
            ],
        ),
        (
            "evolve.csv",
            &[
                "evolve",
                "--initial",
                "plus",
                "--t-max",
                "1",
                "--steps",
                "2",
                "--re-gamma",
                "0.05",
                "--delta-mir",
                "0.02",
            ],
        ),
        (
            "evolve_conditional.csv",
            &[
                "evolve",
                "--conditional",
                "--initial",
                "mixture",
                "--p",
                "0.1",
                "--t-max",
                "1",
                "--steps",
                "2",
            ],
        ),
        (
            "trajectories.csv",
            &[
                "trajectories",
                "--seed",
                "42",
                "--n",
                "200",
                "--t-max",
                "1",
                "--steps",
                "2",
            ],
        ),
    ];
    for (file, args) in cases {
        assert_csv_matches(&stdout(args), &golden(file));
    }
}

#[test]
fn crossing_json_golden() {
    let got: serde_json::Value =
        serde_json::from_str(&stdout(&["crossing", "--format", "json"])).unwrap();
    let want: serde_json::Value = serde_json::from_str(&golden("crossing.json")).unwrap();
    assert_eq!(got["config"], want["config"]);
    assert!((got["t_star"].as_f64().unwrap() - want["t_star"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn lifetime_starts_at_twice_p() {
    let got = stdout(&["lifetime", "--re-gamma", "0.05", "--p", "0.1"]);
    let mut lines = got.lines();
    assert_eq!(lines.next(), Some("t,p,I,I0,ratio"));
    assert_eq!(lines.next(), Some("0.0,0.1,0.2,0.2,1.0"));
    assert_eq!(got.lines().count(), 502);
}

#[test]
fn trajectories_rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let files: Vec<PathBuf> = (0..2)
        .map(|k| dir.path().join(format!("run{k}.csv")))
        .collect();
    for f in &files {
        let out = bin()
            .args(["trajectories", "--seed", "42", "--n", "10000", "--output"])
            .arg(f)
            .output()
            .unwrap();
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    assert_eq!(
        std::fs::read(&files[0]).unwrap(),
        std::fs::read(&files[1]).unwrap()
    );
}

#[test]
fn sequential_flag_gives_same_bytes() {
    let args = ["trajectories", "--seed", "5", "--n", "500", "--steps", "10"];
    let par = stdout(&args);
    let mut seq_args = args.to_vec();
    seq_args.push("--sequential");
    assert_eq!(par, stdout(&seq_args));
}

#[test]
fn json_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 4] = [
        &[
            "rates",
            "--xi",
            "2.5",
            "--dipole-a",
            "0.6,0.8,0",
            "--coupling",
            "0.3",
            "--method",
            "quadrature",
        ],
        &[
            "sweep",
            "--points",
            "5",
            "--spacing",
            "linear",
            "--orientations",
            "0.25,1",
            "--backend",
            "quadrature",
        ],
        &[
            "evolve",
            "--initial",
            "doubly-excited",
            "--re-gamma",
            "-0.2",
            "--delta-mir",
            "0.4",
            "--steps",
            "7",
        ],
        &[
            "trajectories",
            "--n",
            "300",
            "--seed",
            "9",
            "--steps",
            "5",
            "--sequential",
        ],
    ];
    for args in runs {
        let mut first = args.to_vec();
        first.extend(["--format", "json"]);
        let original = stdout(&first);
        let cfg = dir.path().join("echo.json");
        std::fs::write(&cfg, &original).unwrap();
        let replay = stdout(&[args[0], "--config", cfg.to_str().unwrap()]);
        assert_eq!(original, replay, "{args:?}");
    }
}

#[test]
fn flat_config_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(
        &cfg,
        "# lifetime run\nre_gamma = 0.1\np = 0.3\nsteps = 4\nt-max = 2\n",
    )
    .unwrap();
    let from_file = stdout(&["lifetime", "--config", cfg.to_str().unwrap()]);
    assert_eq!(from_file.lines().nth(1), Some("0.0,0.3,0.6,0.6,1.0"));
    let overridden = stdout(&["lifetime", "--config", cfg.to_str().unwrap(), "--p", "0.05"]);
    assert_eq!(overridden.lines().nth(1), Some("0.0,0.05,0.1,0.1,1.0"));
    assert_eq!(overridden.lines().count(), 6);
}

#[test]
fn usage_errors_exit_two_and_name_the_flag() {
    let cases: [&[&str]; 9] = [
        &["rates", "--xi", "-1"],
        &["rates", "--xi", "abc"],
        &["rates"],
        &["rates", "--xi", "1", "--ta", "1.5"],
        &["rates", "--xi", "1", "--dipole-a", "0,0,0"],
        &["sweep", "--xi-min", "5", "--xi-max", "1"],
        &["lifetime", "--p", "1.5"],
        &["evolve", "--re-gamma", "1.0"],
        &["frobnicate"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let err = String::from_utf8(run(&["rates", "--xi", "-1"]).stderr).unwrap();
    assert!(err.contains("--xi"), "{err}");
}

#[test]
fn unwritable_output_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("out.csv");
    let out = bin()
        .args(["crossing", "--output"])
        .arg(&target)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn renormalised_dipole_warns() {
    let out = run(&["rates", "--xi", "1", "--dipole-a", "0,2,0"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("renormalised"));
    let quiet = run(&["rates", "--xi", "1", "--dipole-a", "0,1,0"]);
    assert!(quiet.stderr.is_empty());
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("trajectories"));
}
