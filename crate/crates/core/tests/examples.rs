//! Every cargo example runs to completion and prints its headline result.

use std::path::PathBuf;
use std::process::Command;

/// Builds the examples with the profile of this test binary, so a stale
/// build is never exercised.
fn build_examples() -> PathBuf {
    // target/<profile>/deps/<this test> -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap().to_path_buf();
    let mut cmd = Command::new(env!("CARGO"));
    cmd.args(["build", "--examples", "-p", "twochart", "--quiet"]);
    if profile_dir.file_name().is_some_and(|n| n == "release") {
        cmd.arg("--release");
    }
    assert!(cmd.status().unwrap().success());
    profile_dir.join("examples")
}

fn run(dir: &std::path::Path, name: &str) -> String {
    let out = Command::new(dir.join(format!("{name}{}", std::env::consts::EXE_SUFFIX))).output().unwrap();
    assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn examples_run() {
    let expect = [
        ("laurent_arithmetic", "on Z1: z^-2*u = xi^3*v"),
        ("chart_validation", "sign error rejected"),
        ("cohomology_w2_tangent", "H^1(W2, T): 9 classes, Exact"),
        ("nonalgebraic_bundle", "pullback to W3: NonPolynomialUpTo(10)"),
        ("splitting_type", "splitting [-1, 1]"),
        ("moduli_dimensions", "Z2     3      8         2        2"),
        ("deformation_families", "W3 family: (z^-1, z*t1 + z^2*t2 + z^3*u1, z^-1*u2)"),
        ("affineness_probe", "(z^-1) = -u + Minv*(v)"),
        ("hirzebruch", "k = 5: Ok"),
        ("claim_suite", "3 verified, 1 discrepancy-flagged, 0 failed"),
    ];
    let dir = build_examples();
    for (name, needle) in expect {
        let out = run(&dir, name);
        assert!(out.contains(needle), "{name}:\n{out}");
    }
}
