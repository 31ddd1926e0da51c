//! End-to-end runs of the `chainlet` binary. Outputs are compared with files in `golden/`;
//! set `CHAINLET_BLESS=1` to rewrite them after an intended change.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

/// Runs in `dir` with fixtures copied in, so printed paths are relative and stable.
fn run_in(dir: &Path, args: &[&str]) -> Run {
    for f in [
        "single.chain",
        "dipole.chain",
        "empty.chain",
        "pair.chain",
        "unknown_key.json",
    ] {
        let to = dir.join(f);
        if !to.exists() {
            fs::copy(data(f), to).unwrap();
        }
    }
    let out = Command::new(env!("CARGO_BIN_EXE_chainlet"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn run(args: &[&str]) -> (TempDir, Run) {
    let dir = tempfile::tempdir().unwrap();
    let r = run_in(dir.path(), args);
    (dir, r)
}

fn golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("CHAINLET_BLESS").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let want = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, want, "output differs from {}", path.display());
}

fn bracket(stdout: &str) -> (f64, f64) {
    let line = stdout
        .lines()
        .find(|l| l.starts_with("bracket: "))
        .expect("bracket line");
    let inner = line.trim_start_matches("bracket: [").trim_end_matches(']');
    let (a, b) = inner.split_once(", ").unwrap();
    (a.parse().unwrap(), b.parse().unwrap())
}

#[test]
fn norm_single_pole_is_one() {
    let (_d, r) = run(&["norm", "single.chain", "--r", "1", "--brute"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r
        .stdout
        .starts_with("chainlet norm | mode: rational (exact)\n"));
    assert_eq!(bracket(&r.stdout), (1.0, 1.0));
    golden("norm_single.out", &r.stdout);
}

#[test]
fn norm_dipole_bracket() {
    let (_d, r) = run(&["norm", "dipole.chain", "--r", "1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (lo, hi) = bracket(&r.stdout);
    assert_eq!(hi, 0.5);
    assert!(lo >= 0.3 && lo <= hi, "{lo}");
    golden("norm_dipole.out", &r.stdout);
}

#[test]
fn norm_empty_chain() {
    let (_d, r) = run(&["norm", "empty.chain"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(bracket(&r.stdout), (0.0, 0.0));
    assert!(!r.stdout.contains("-0.0"));
    golden("norm_empty.out", &r.stdout);
}

#[test]
fn norm_rejects_bad_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("bad.chain"),
        "chainlet-chain v1\nn 2\nmode rational\np 0 0 0 1 3 1\n",
    )
    .unwrap();
    let r = run_in(dir.path(), &["norm", "bad.chain"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("bad.chain: line 4"), "{}", r.stderr);
    let r = run_in(dir.path(), &["norm", "missing.chain"]);
    assert_eq!(r.code, 2);
}

#[test]
fn apply_operators() {
    let (d, r) = run(&["apply", "boundary", "pair.chain"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    golden("apply_boundary.out", &r.stdout);

    // hand-checked: x1^2 doubles e1 at x1 = 1, and maps (1/2, -1) to (1/4, -1) with e1 ^ e2 scaled by 1
    let r = run_in(
        d.path(),
        &["apply", "pushforward", "--map", "x1^2,x2", "pair.chain"],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("p 1 2 0 1 1 3\n"), "{}", r.stdout);
    assert!(r.stdout.contains("p 1/4 -1 0 2 1 2 -1/4\n"), "{}", r.stdout);
    golden("apply_pushforward.out", &r.stdout);

    let r = run_in(
        d.path(),
        &["apply", "prederivative", "--dir", "1/2,0", "pair.chain"],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    golden("apply_prederivative.out", &r.stdout);
}

#[test]
fn perp_twice_is_sign_times_identity() {
    let (d, r) = run(&["apply", "perp", "pair.chain", "--out", "p1.chain"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    golden("apply_perp_summary.out", &r.stdout);
    let twice = run_in(d.path(), &["apply", "perp", "p1.chain"]);
    // grade 1 in R^2 flips sign, grade 2 does not
    let expect = "chainlet-chain v1\nn 2\nmode rational\np 1/2 -1 0 2 1 2 -1/4\np 1 2 0 1 1 -3/2\n";
    assert_eq!(twice.stdout, expect);
}

#[test]
fn apply_errors_exit_2() {
    let (d, r) = run(&["apply", "pushforward", "pair.chain"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("--map"));
    let r = run_in(
        d.path(),
        &["apply", "pushforward", "--map", "x1,x2,x1", "pair.chain"],
    );
    assert_eq!(r.code, 0, "maps into R^3 are allowed: {}", r.stderr);
    let r = run_in(
        d.path(),
        &["apply", "pushforward", "--map", "sin(x1),x2", "pair.chain"],
    );
    assert_eq!(r.code, 2, "trigonometric maps have no exact rational value");
    let r = run_in(
        d.path(),
        &["apply", "prederivative", "--dir", "1", "pair.chain"],
    );
    assert_eq!(r.code, 2);
    let r = run_in(d.path(), &["apply", "twist", "pair.chain"]);
    assert_eq!(r.code, 2);
}

#[test]
fn convert_round_trips_modes() {
    let (d, r) = run(&[
        "convert",
        "chain",
        "pair.chain",
        "--mode",
        "float",
        "--out",
        "f.chain",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let back = run_in(
        d.path(),
        &["convert", "chain", "f.chain", "--mode", "rational"],
    );
    assert_eq!(back.code, 0);
    let original = run_in(
        d.path(),
        &["convert", "chain", "pair.chain", "--mode", "rational"],
    );
    assert_eq!(back.stdout, original.stdout);
    let cube = run_in(
        d.path(),
        &["convert", "cube", "--n", "2", "--k", "2", "--level", "1"],
    );
    golden("convert_cube.out", &cube.stdout);
    let mesh = run_in(
        d.path(),
        &["convert", "mesh", "--level", "1", "--dual", "circumcentric"],
    );
    golden("convert_mesh.out", &mesh.stdout);
    assert_eq!(
        run_in(d.path(), &["convert", "cube", "--n", "2", "--k", "3"]).code,
        2
    );
}

fn meshes(dir: &Path, dual: &str, levels: &[u32]) -> Vec<String> {
    levels
        .iter()
        .map(|l| {
            let name = format!("{dual}{l}.mesh");
            let r = run_in(
                dir,
                &[
                    "convert",
                    "mesh",
                    "--level",
                    &l.to_string(),
                    "--dual",
                    dual,
                    "--out",
                    &name,
                ],
            );
            assert_eq!(r.code, 0, "{}", r.stderr);
            name
        })
        .collect()
}

#[test]
fn hodge_sequences() {
    let dir = tempfile::tempdir().unwrap();
    let circ = meshes(dir.path(), "circumcentric", &[1, 2, 3]);
    let mut args = vec!["hodge", "--final-ratio", "0.2"];
    args.extend(circ.iter().map(String::as_str));
    let r = run_in(dir.path(), &args);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("verdict: HODGE\n"));
    golden("hodge_circumcentric.out", &r.stdout);

    let skew = meshes(dir.path(), "barycentric", &[1, 2]);
    let mut args = vec!["hodge", "--no-lower"];
    args.extend(skew.iter().map(String::as_str));
    let r = run_in(dir.path(), &args);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("verdict: NOT-HODGE\n"));
    golden("hodge_skew.out", &r.stdout);

    let perp = meshes(dir.path(), "perp", &[1]);
    let r = run_in(dir.path(), &["hodge", "--no-lower", &perp[0]]);
    let row = r.stdout.lines().nth(2).unwrap();
    assert_eq!(row.split("  ").nth(4), Some("0.000000000000"), "{row}");

    let text = fs::read_to_string(dir.path().join(&perp[0])).unwrap();
    let cut: String = text
        .lines()
        .take(text.lines().count() - 1)
        .map(|l| format!("{l}\n"))
        .collect();
    fs::write(dir.path().join("cut.mesh"), cut).unwrap();
    let r = run_in(dir.path(), &["hodge", "cut.mesh"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("cut.mesh"), "{}", r.stderr);
}

#[test]
fn verify_custom_stokes() {
    let (d, r) = run(&[
        "verify",
        "stokes",
        "--form",
        "x1*dx2",
        "--domain",
        "unit-square",
        "--levels",
        "8",
        "--out",
        "rep",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let row8 = r
        .stdout
        .lines()
        .find(|l| l.starts_with("  8  "))
        .expect("level 8 row");
    let error: f64 = row8
        .split("  ")
        .filter(|s| !s.is_empty())
        .nth(9)
        .unwrap()
        .parse()
        .unwrap();
    assert!(error < 1e-3);
    assert!(d.path().join("rep/custom_stokes.csv").exists());
    assert!(d.path().join("rep/custom_stokes.json").exists());
    golden("verify_custom_stokes.out", &r.stdout);
}

#[test]
fn verify_input_errors_exit_2() {
    let (d, r) = run(&["verify", "stokes", "--form", "x1*dx2 +", "--out", "rep"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("parse error"), "{}", r.stderr);
    assert_eq!(
        run_in(
            d.path(),
            &["verify", "stokes", "--form", "x1", "--out", "rep"]
        )
        .code,
        2
    );
    assert_eq!(
        run_in(d.path(), &["verify", "div", "--form", "x1*dx2"]).code,
        2
    );
    assert_eq!(run_in(d.path(), &["verify", "nonsense"]).code, 2);
    let r = run_in(
        d.path(),
        &["verify", "stokes", "--config", "unknown_key.json"],
    );
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("bogus_key"), "{}", r.stderr);
    assert_eq!(run_in(d.path(), &["verify", "stokes", "--n", "9"]).code, 2);
    assert_eq!(run_in(d.path(), &["frobnicate"]).code, 2);
}

#[test]
fn verify_all_spec_example() {
    let (d, r) = run(&[
        "verify", "all", "--n", "3", "--levels", "6", "--seed", "7", "--out", "rep",
    ]);
    assert_eq!(r.code, 0, "{}\n{}", r.stdout, r.stderr);
    assert!(r.stdout.contains("verdict: PASS (24 reports, 0 failed)"));
    let files = fs::read_dir(d.path().join("rep")).unwrap().count();
    assert_eq!(files, 48);
    golden("verify_all.out", &r.stdout);
}
