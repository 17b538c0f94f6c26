use std::process::{Command, Output};

fn twochart(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twochart")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn h1_json_schema() {
    let o = twochart(&["h1", "W2", "--fiber-max", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["claimId", "anchor", "space", "bundle", "box", "certification", "generators", "dims", "witnesses"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["box"], serde_json::json!({ "lLo": -10, "lHi": -1, "fiberMax": 3 }));
    assert_eq!(v["certification"]["kind"], "Exact");
    let gens = v["generators"].as_array().unwrap();
    assert_eq!(gens.len(), 4);
    assert_eq!(gens[1], serde_json::json!({ "component": 2, "exponents": { "z": -1, "u1": 0, "u2": 1 }, "coeff": "1" }));
}

#[test]
fn table_is_default() {
    let o = twochart(&["h1", "W1", "--fiber-max", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("certification Exact"));
    assert!(s.contains("0 classes"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["h1"],
        vec!["nonsense"],
        vec!["h1", "Q7"],
        vec!["h1", "W2", "--bundle", "Sym(T)"],
        vec!["verify-paper", "bogus-id"],
        vec!["coboundary", "Z1", "--bundle", "O(-2)", "--class", "z^^2"],
        vec!["coboundary", "Z1", "--bundle", "O(-2)", "--class", "w"],
        vec!["h1", "W2", "--l-lo", "3", "--l-hi", "-1"],
    ] {
        let o = twochart(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    let o = twochart(&["coboundary", "Z1", "--bundle", "O(-2)", "--class", "z^^2"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("column 3"));
}

#[test]
fn single_claim() {
    let o = twochart(&["verify-paper", "W1-rigidity", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let claims = v["claims"].as_array().unwrap();
    assert_eq!(claims.len(), 1);
    assert_eq!(claims[0]["status"], "verified");
    assert_eq!(claims[0]["certification"]["kind"], "Exact");
    assert_eq!(v["bodySha256"].as_str().unwrap().len(), 64);
}

#[test]
fn flagged_claims_exit_zero_with_warning() {
    let o = twochart(&["verify-paper", "Zminus1-classes", "CY-determinant"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("discrepancy-flagged"));
}

#[test]
fn reports_are_byte_deterministic() {
    let ids = ["verify-paper", "W3-tangent-window", "Nonalgebraic-eu", "Families-glue", "--format", "json"];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_twochart")).args(ids).env("RAYON_NUM_THREADS", threads).output().unwrap().stdout
    };
    let a = run("1");
    assert_eq!(a, run("4"));
    assert_eq!(a, run("2"));
}

#[test]
fn cell_limit() {
    let o = Command::new(env!("CARGO_BIN_EXE_twochart"))
        .args(["h1", "W2", "--bundle", "End(T)", "--fiber-max", "3"])
        .env("CECH_MAX_CELLS", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cell limit"));
}

#[test]
fn space_file_and_probe() {
    let dir = std::env::temp_dir().join(format!("twochart-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("w2t.txt");
    std::fs::write(
        &path,
        "name = W2t\nparams = t1\nvalues = 1\nforward = (z^-1, z^2*u1 + z*t1*u2, u2)\ninverse = (xi^-1, xi^2*v1 - xi*t1*v2, v2)\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let o = twochart(&["coboundary", p, "--bundle", "O(-4)", "--class", "z^-1", "--fiber-max", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["witnesses"][0]["coboundary"], false);
    let o = twochart(&["probe-affine", p, "--degrees", "-4", "--fiber-max", "2"]);
    assert!(stdout(&o).contains("not affine"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn other_commands() {
    let s = stdout(&twochart(&["split-type", "Z(-1)", "--bundle", "ext(-1, 1, z^-2*exp(u))"]));
    assert!(s.contains("O(-1) + O(1)"), "{s}");
    let s = stdout(&twochart(&["ext-verdict", "Z1", "--b", "-1", "--a", "1", "--p", "z^-2*exp(u)"]));
    assert!(s.contains("SplitZero"), "{s}");
    let s = stdout(&twochart(&["moduli-dim", "Z2", "--j", "3"]));
    assert!(s.contains("quotient 2, formula 2j-k-2 = 2"), "{s}");
    let s = stdout(&twochart(&["deform", "Z3", "--cocycle", "(0, z^-2)", "--cocycle", "(0, z^-1)"]));
    assert!(s.contains("forward (z^-1, z*t1 + z^2*t2 + z^3*u)"), "{s}");
    let o = twochart(&["deform", "W2", "--cocycle", "(z^-1, 0, 0)"]);
    assert_eq!(o.status.code(), Some(2));
    let s = stdout(&twochart(&["hirzebruch", "--k", "2,3"]));
    assert!(s.contains("k = 3"), "{s}");
    let s = stdout(&twochart(&["reduce", "Z(-1)", "--bundle", "O(-2)", "--class", "z^-2*exp(u)", "--cutoff", "3", "--fiber-max", "3"]));
    assert!(s.contains("representative (z^-2*u + 1/2*z^-2*u^2 + 1/6*z^-2*u^3)"), "{s}");
    let s = stdout(&twochart(&["verify-paper", "--list"]));
    assert_eq!(s.lines().count(), 15);
}
