//! End-to-end runs of the compiled binary: one test per subcommand contract,
//! plus the exit-code map.

use std::path::Path;
use std::process::{Command, Output};

fn agreetensor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_agreetensor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf8 path")
}

#[test]
fn fiber_dim_prints_the_bare_count() {
    let out = agreetensor(&["fiber-dim", "--family", "pqi", "--n", "3", "--degree", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "52");
}

#[test]
fn verify_passes_for_the_single_coefficient_family() {
    let out = agreetensor(&["verify", "--family", "qI", "--n", "2", "--seeds", "5"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("2/2 checks passed"), "got: {text}");
    assert!(!text.contains("FAIL"));
}

#[test]
fn materialize_then_kappa_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("params.json");
    let tensor = dir.path().join("point.txt");
    std::fs::write(
        &params,
        r#"{"family":"qI","n":2,"a":["1/2","1/2"],"b":["1/2","1/2"],"c":["1/2","1/2"],"gamma":"3"}"#,
    )
    .unwrap();

    let out = agreetensor(&[
        "materialize",
        "--params",
        path_str(&params),
        "--out",
        path_str(&tensor),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));

    let out = agreetensor(&["kappa", "--tensor", path_str(&tensor)]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    // Uniform marginals with one shared diagonal weight treat the three
    // raters symmetrically, and this point evaluates to exactly 1/3.
    assert!(text.contains("kappa12 = 1/3"), "got: {text}");
    assert!(text.contains("kappa13 = 1/3"), "got: {text}");
    assert!(text.contains("kappa23 = 1/3"), "got: {text}");
}

#[test]
fn pmix_sweep_does_not_depend_on_n() {
    let dir = tempfile::tempdir().unwrap();
    let two = dir.path().join("pmix2.csv");
    let five = dir.path().join("pmix5.csv");
    for (n, path) in [("2", &two), ("5", &five)] {
        let out = agreetensor(&["sweep", "--family", "pmix", "--n", n, "--out", path_str(path)]);
        assert!(out.status.success(), "stderr: {}", stderr(&out));
    }
    let a = std::fs::read(&two).unwrap();
    let b = std::fs::read(&five).unwrap();
    assert_eq!(a, b, "pmix sweep must be byte-identical across n");
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 1002, "header plus 1001 grid points");
    assert!(text.starts_with("a0,a12,a13,a23,a123,kappa12,kappa13,kappa23,error"));
}

#[test]
fn counterexample_prints_tensor_and_certificate() {
    for direction in ["mix-not-in-qi", "qi-not-in-mix"] {
        let out = agreetensor(&["counterexample", "--direction", direction, "--n", "3"]);
        assert!(out.status.success(), "stderr: {}", stderr(&out));
        let text = stdout(&out);
        assert!(text.starts_with("n=3"), "got: {text}");
        assert!(text.contains("check: P[1,1,1]"), "got: {text}");
    }
}

#[test]
fn fit_writes_parameters_with_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let counts = dir.path().join("counts.txt");
    let fit = dir.path().join("fit.json");
    // Exact single-coefficient point scaled to integers: diagonal 30, rest 10.
    let mut text = String::from("n=2\n");
    for i in 1..=2 {
        for j in 1..=2 {
            for k in 1..=2 {
                let v = if i == j && j == k { 30 } else { 10 };
                text.push_str(&format!("{i} {j} {k} {v}\n"));
            }
        }
    }
    std::fs::write(&counts, text).unwrap();

    let out = agreetensor(&[
        "fit",
        "--family",
        "qI",
        "--counts",
        path_str(&counts),
        "--out",
        path_str(&fit),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let doc = std::fs::read_to_string(&fit).unwrap();
    assert!(doc.contains("\"family\": \"qI\""), "got: {doc}");
    assert!(doc.contains("\"converged\": true"), "got: {doc}");
    // The counts sit exactly on the model, so the fitted diagonal weight is 3
    // up to the stopping tolerance.
    let gamma_line = doc
        .lines()
        .find(|l| l.contains("\"gamma\""))
        .expect("gamma present");
    let value: f64 = gamma_line
        .split('"')
        .nth(3)
        .expect("quoted value")
        .parse()
        .expect("numeric gamma");
    assert!((value - 3.0).abs() < 1e-6, "gamma = {value}");
}

#[test]
fn invariants_subcommand_writes_readable_polynomials() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("pqi2.txt");
    let out = agreetensor(&[
        "invariants",
        "--family",
        "pqi",
        "--n",
        "2",
        "--out",
        path_str(&out_path),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(
        text.trim(),
        "P[1,1,1]*P[1,2,2]*P[2,1,2]*P[2,2,1] - P[1,1,2]*P[1,2,1]*P[2,1,1]*P[2,2,2]"
    );
}

#[test]
fn usage_errors_exit_2_and_io_errors_exit_3() {
    let out = agreetensor(&["fiber-dim", "--family", "nope", "--n", "2", "--degree", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unsupported family"));

    let out = agreetensor(&[
        "sweep",
        "--family",
        "pmix",
        "--n",
        "2",
        "--marginals",
        "whatever.json",
        "--out",
        "unused.csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--marginals"));

    let out = agreetensor(&["kappa", "--tensor", "/definitely/not/here.txt"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("io error"));

    // Unknown flags are a clap-level usage error, also exit 2.
    let out = agreetensor(&["kappa", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}
