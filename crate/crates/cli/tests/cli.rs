use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

const PERTURBATION: f64 = 1e-3;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

/// Runs the CLI in process.
fn cqg(args: &[&str]) -> Outcome {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cqg_cli::run(std::iter::once("cqg").chain(args.iter().copied()), &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn element_blocks(path: &Path) -> Value {
    let v: Value = serde_json::from_slice(&fs::read(path).unwrap()).unwrap();
    v["blocks"].clone()
}

#[test]
fn conv_of_scalars_multiplies() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("six.json");
    let r = cqg(&[
        "conv",
        path_str(&fixture("scalar3.json")),
        path_str(&fixture("scalar2.json")),
        "--instance",
        path_str(&fixture("trivial-instance.json")),
        "-o",
        path_str(&out),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let blocks = element_blocks(&out);
    assert_eq!(blocks["0"][0][0][0].as_f64(), Some(6.0));
    assert_eq!(blocks["0"][0][0][1].as_f64(), Some(0.0));
}

#[test]
fn validate_reports_non_hermitian_q() {
    let r = cqg(&["validate", path_str(&fixture("nonhermitian-instance.json"))]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("not Hermitian"), "{}", r.stdout);
    assert!(r.stdout.contains("1.000e0"), "{}", r.stdout);
}

#[test]
fn validate_accepts_every_good_fixture() {
    for name in [
        "z2-hopf.json",
        "s3-hopf.json",
        "z2-group.json",
        "s3-group.json",
        "z2-instance.json",
        "s3-instance.json",
        "q05-instance.json",
        "half-instance.json",
        "trivial-instance.json",
    ] {
        let r = cqg(&["validate", path_str(&fixture(name))]);
        assert_eq!(r.code, 0, "{name}: {}{}", r.stdout, r.stderr);
    }
    let r = cqg(&[
        "validate",
        path_str(&fixture("half-element.json")),
        "--instance",
        path_str(&fixture("half-instance.json")),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn element_outside_instance_is_a_failure() {
    let r = cqg(&[
        "validate",
        path_str(&fixture("half-element.json")),
        "--instance",
        path_str(&fixture("trivial-instance.json")),
    ]);
    assert_eq!(r.code, 1, "{}{}", r.stdout, r.stderr);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cqg(&[]).code, 2);
    assert_eq!(cqg(&["frobnicate"]).code, 2);
    assert_eq!(cqg(&["check", "--suite", "nonsense"]).code, 2);
    assert_eq!(cqg(&["check", "--tol", "-1"]).code, 2);
    assert_eq!(cqg(&["validate", "/nonexistent/file.json"]).code, 2);
    assert_eq!(cqg(&["norm", "--kind", "max", "x", "--instance", "y"]).code, 2);
    let help = cqg(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("check"));
}

#[test]
fn norms_of_a_deformed_element() {
    let args = |kind| {
        cqg(&[
            "--json",
            "norm",
            "--kind",
            kind,
            path_str(&fixture("half-element.json")),
            "--instance",
            path_str(&fixture("half-instance.json")),
        ])
    };
    let value = |r: Outcome| {
        assert_eq!(r.code, 0, "{}", r.stderr);
        let v: Value = serde_json::from_str(&r.stdout).unwrap();
        v["value"].as_f64().unwrap()
    };
    let (l2, cstar) = (value(args("l2")), value(args("cstar")));
    // The L2 norm dominates the C* norm.
    assert!(cstar <= l2 + 1e-12, "{cstar} > {l2}");
    assert!(cstar > 0.0);
    assert!(l2 > 0.0);
    let text = cqg(&[
        "norm",
        "--kind",
        "l2",
        path_str(&fixture("half-element.json")),
        "--instance",
        path_str(&fixture("half-instance.json")),
    ]);
    assert!(text.stdout.starts_with("L2 norm: "), "{}", text.stdout);
}

#[test]
fn unit_of_full_window_is_identity_on_each_block() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("unit.json");
    let r = cqg(&[
        "unit",
        "--instance",
        path_str(&fixture("half-instance.json")),
        "--window",
        "j1/2",
        "-o",
        path_str(&out),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let blocks = element_blocks(&out);
    // E = tr(Q) Q^{-1} with Q = diag(1/2, 2): diag(5, 5/4).
    let e = &blocks["j1/2"];
    assert!((e[0][0][0].as_f64().unwrap() - 5.0).abs() < 1e-12);
    assert!((e[1][1][0].as_f64().unwrap() - 1.25).abs() < 1e-12);
    assert!((blocks["0"][0][0][0].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let r = cqg(&[
        "unit",
        "--instance",
        path_str(&fixture("half-instance.json")),
        "--window",
        "nope",
    ]);
    assert_ne!(r.code, 0);
}

#[test]
fn fourier_round_trip() {
    let dir = TempDir::new().unwrap();
    let (fwd, back) = (dir.path().join("f.json"), dir.path().join("g.json"));
    let input = fixture("s3-function.json");
    let r = cqg(&["fourier", "--group", "s3", path_str(&input), "-o", path_str(&fwd)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = cqg(&[
        "validate",
        path_str(&fwd),
        "--instance",
        path_str(&fixture("s3-instance.json")),
    ]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    let r = cqg(&["fourier", "--group", "s3", "--inverse", path_str(&fwd), "-o", path_str(&back)]);
    assert_eq!(r.code, 0, "{}", r.stderr);

    let a: Value = serde_json::from_slice(&fs::read(&input).unwrap()).unwrap();
    let b: Value = serde_json::from_slice(&fs::read(&back).unwrap()).unwrap();
    let a = a.as_object().unwrap();
    assert_eq!(a.len(), 6);
    for (key, value) in a {
        for part in 0..2 {
            let (x, y) = (value[part].as_f64().unwrap(), b[key][part].as_f64().unwrap());
            assert!((x - y).abs() < 1e-12, "{key}: {x} vs {y}");
        }
    }
    // A group file with irreps works in place of a built-in name.
    let r = cqg(&["fourier", "--group", path_str(&fixture("s3-group.json")), path_str(&input)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn full_check_passes_and_report_mirrors_it() {
    let dir = TempDir::new().unwrap();
    let state = dir.path().join("nested/state.json");
    let r = cqg(&[
        "check",
        "--suite",
        "all",
        "--seed",
        "42",
        "--samples",
        "500",
        "--tol",
        "1e-10",
        "--group",
        "z6,s3,d4",
        "--state",
        path_str(&state),
    ]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.contains("result: PASS"));
    let again = cqg(&["report", "--state", path_str(&state)]);
    assert_eq!(again.code, 0);
    assert_eq!(again.stdout, r.stdout);
}

#[test]
fn check_with_user_sources_passes() {
    let dir = TempDir::new().unwrap();
    let state = dir.path().join("s.json");
    let r = cqg(&[
        "check",
        "--group",
        &format!("z2,{}", path_str(&fixture("s3-group.json"))),
        "--instance",
        &format!(
            "{},{},{}",
            path_str(&fixture("s3-instance.json")),
            path_str(&fixture("z2-instance.json")),
            path_str(&fixture("half-instance.json"))
        ),
        "--hopf",
        &format!("{},{}", path_str(&fixture("z2-hopf.json")), path_str(&fixture("s3-hopf.json"))),
        "--samples",
        "50",
        "--state",
        path_str(&state),
    ]);
    assert_eq!(r.code, 0, "{}", r.stdout);
}

#[test]
fn check_output_is_deterministic() {
    let bin = env!("CARGO_BIN_EXE_cqg");
    let dir = TempDir::new().unwrap();
    let run = |state: &str| {
        let out = Command::new(bin)
            .args(["--json", "check", "--seed", "7", "--samples", "100", "--group", "z3,s3"])
            .args(["--state", path_str(&dir.path().join(state))])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    let first = run("a.json");
    assert_eq!(first, run("b.json"));
    assert_eq!(
        fs::read(dir.path().join("a.json")).unwrap(),
        fs::read(dir.path().join("b.json")).unwrap()
    );
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_cqg");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["validate", path_str(&fixture("nonhermitian-instance.json"))]), Some(1));
    assert_eq!(status(&["validate", path_str(&fixture("s3-hopf.json"))]), Some(0));
    assert_eq!(status(&["bogus"]), Some(2));
}

/// Paths to every floating-point leaf of a JSON document.
fn float_leaves(v: &Value, path: &mut Vec<Value>, found: &mut Vec<Vec<Value>>) {
    match v {
        Value::Number(n) if n.is_f64() => found.push(path.clone()),
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                path.push(Value::from(i));
                float_leaves(item, path, found);
                path.pop();
            }
        }
        Value::Object(map) => {
            for (k, item) in map {
                path.push(Value::from(k.as_str()));
                float_leaves(item, path, found);
                path.pop();
            }
        }
        _ => {}
    }
}

fn leaf_mut<'a>(v: &'a mut Value, path: &[Value]) -> &'a mut Value {
    path.iter().fold(v, |v, key| match key {
        Value::String(k) => &mut v[k.as_str()],
        Value::Number(i) => &mut v[i.as_u64().unwrap() as usize],
        _ => unreachable!(),
    })
}

/// Perturbs every floating-point constant of `name` in turn and expects
/// `check` to fail on each copy.
fn every_perturbation_fails(name: &str, option: &str, group: &str) {
    let original: Value = serde_json::from_slice(&fs::read(fixture(name)).unwrap()).unwrap();
    let mut leaves = Vec::new();
    float_leaves(&original, &mut Vec::new(), &mut leaves);
    assert!(!leaves.is_empty());

    let dir = TempDir::new().unwrap();
    let file = dir.path().join(name);
    let state = dir.path().join("state.json");
    let mut missed = Vec::new();
    for leaf in &leaves {
        let mut doc = original.clone();
        let x = leaf_mut(&mut doc, leaf);
        *x = Value::from(x.as_f64().unwrap() + PERTURBATION);
        fs::write(&file, serde_json::to_vec(&doc).unwrap()).unwrap();
        let group_arg = if option == "--group" { path_str(&file) } else { group };
        let mut args = vec![
            "check",
            "--samples",
            "20",
            "--no-synthetic",
            "--group",
            group_arg,
            "--state",
            path_str(&state),
        ];
        if option != "--group" {
            args.extend([option, path_str(&file)]);
        }
        let r = cqg(&args);
        if r.code != 1 {
            missed.push(format!("{leaf:?} (exit {})", r.code));
        }
    }
    assert!(missed.is_empty(), "{name}: undetected perturbations {missed:?}");
}

#[test]
fn perturbed_hopf_constants_are_caught() {
    every_perturbation_fails("z2-hopf.json", "--hopf", "z2");
    every_perturbation_fails("s3-hopf.json", "--hopf", "s3");
}

#[test]
fn perturbed_group_constants_are_caught() {
    every_perturbation_fails("z2-group.json", "--group", "");
    every_perturbation_fails("s3-group.json", "--group", "");
}

#[test]
fn perturbed_instance_constants_are_caught() {
    every_perturbation_fails("z2-instance.json", "--instance", "z2");
    every_perturbation_fails("s3-instance.json", "--instance", "s3");
}
