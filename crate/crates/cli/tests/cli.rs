use std::process::{Command, Output};

fn vertexid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vertexid"))
        .args(args)
        .env_remove("VERTEXID_DEFAULT_ORDER")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn verify_exit_codes() {
    let ok = vertexid(&["verify", "no-classic", "--z-order", "6", "--q-order", "24"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).starts_with("no-classic: match\n"));

    let unknown = vertexid(&["verify", "no-such-thing"]);
    assert_eq!(unknown.status.code(), Some(1));
    assert!(unknown.stdout.is_empty());
    assert!(stderr(&unknown).contains("known identities"));

    let typo = vertexid(&["verify", "cauchy-duel"]);
    assert_eq!(typo.status.code(), Some(1));
    assert!(stderr(&typo).contains("did you mean: cauchy-dual"));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(vertexid(&["verify"]).status.code(), Some(1));
    assert_eq!(vertexid(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(vertexid(&["verify", "no-classic", "--z-order", "x"]).status.code(), Some(1));
    assert_eq!(vertexid(&["verify", "no-theta", "--theta", "1/0"]).status.code(), Some(1));
    assert_eq!(vertexid(&["--threads", "0", "list"]).status.code(), Some(1));
    assert_eq!(vertexid(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_json_report_shape() {
    let out = vertexid(&["verify", "no-classic", "--json", "--deterministic"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["name"], "no-classic");
    assert_eq!(v["verdict"], "match");
    assert!(v["mismatch"].is_null());
    assert_eq!(v["duration_ms"], 0);
    assert_eq!(v["window"]["z_windows"][0]["hi"], 4);
}

#[test]
fn theta_flag_runs_one_value() {
    let out = vertexid(&["verify", "no-theta", "--theta", "7/2", "--z-order", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("cases: 1\n"));
}

#[test]
fn env_var_sets_default_order() {
    let out = Command::new(env!("CARGO_BIN_EXE_vertexid"))
        .args(["series", "rhs:no-classic"])
        .env("VERTEXID_DEFAULT_ORDER", "1")
        .output()
        .unwrap();
    assert_eq!(stdout(&out), "1 + (-t^2 + 1)*z1\n");
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_vertexid"))
        .args(["series", "rhs:no-classic", "--z-order", "0"])
        .env("VERTEXID_DEFAULT_ORDER", "1")
        .output()
        .unwrap();
    assert_eq!(stdout(&flag_wins), "1\n");
}

#[test]
fn series_expressions() {
    let s = vertexid(&["series", "schur:1", "--q-order", "3"]);
    assert_eq!(stdout(&s), "q^(1/2) + q^(3/2) + q^(5/2)\n");
    assert_eq!(stdout(&vertexid(&["series", "vertex:;;"])), "1\n");
    let rhs = stdout(&vertexid(&["series", "rhs:no-classic", "--z-order", "2"]));
    assert!(rhs.starts_with("1 + (-t^2 + 1)*z1 + "), "{rhs}");
    // C_{∅∅(1)} is s_(1)(q^-ρ).
    assert_eq!(stdout(&vertexid(&["series", "vertex:;;1"])), stdout(&vertexid(&["series", "schur:1"])));

    for bad in ["schur:5,3,x", "schur:1,2", "vertex:1;2", "nonsense", "lhs:nope", "lhs:hook-product"] {
        assert_eq!(vertexid(&["series", bad]).status.code(), Some(1), "{bad}");
    }
}

#[test]
fn series_json_is_machine_readable() {
    let out = vertexid(&["series", "schur:2,1", "--json", "--q-order", "4"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["expression"], "schur:2,1");
    assert_eq!(v["ring"], "Q");
    let first = &v["terms"][0];
    // x₁²x₂ = q^{5/2}
    assert_eq!(first["u_exp"], 5);
}

#[test]
fn graph_matches_cauchy_dual_product() {
    let g = vertexid(&["graph", "one-vertex", "--z-order", "5"]);
    let s = vertexid(&["series", "rhs:cauchy-dual", "--z-order", "5"]);
    assert_eq!(g.status.code(), Some(0));
    assert_eq!(g.stdout, s.stdout);
}

#[test]
fn graph_rotations_and_errors() {
    let out = vertexid(&["graph", "four-loop", "--check-rotations"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("rotations: invariant\n"));

    assert_eq!(vertexid(&["graph", "missing.json"]).status.code(), Some(1));

    let dir = std::env::temp_dir().join(format!("vertexid-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let broken = dir.join("broken.json");
    std::fs::write(&broken, "{\"vertices\": [\n  {\"slots\": [\"a\", \"b\"]}\n]}").unwrap();
    let out = vertexid(&["graph", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line"), "{}", stderr(&out));

    let good = dir.join("one.json");
    let text = r#"{"vertices": [{"slots": ["a0", "a1", "a2"]}], "edges": [
        {"tail": "a0", "head": "external"}, {"tail": "a1", "head": "external"}, {"tail": "a2", "head": "external"}]}"#;
    std::fs::write(&good, text).unwrap();
    let out = vertexid(&["graph", good.to_str().unwrap(), "--check-rotations"]);
    assert_eq!(stdout(&out), "1\nrotations: invariant\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn list_has_every_identity() {
    let out = vertexid(&["list", "--json"]);
    let v: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v.len(), 10);
    assert!(v.iter().any(|i| i["name"] == "four-loop-limit"));
    assert_eq!(stdout(&vertexid(&["list"])).lines().count(), 10);
}

#[test]
fn output_is_stable_across_runs_and_threads() {
    let args = ["verify", "four-loop", "--z-order", "2", "--json", "--deterministic"];
    let a = vertexid(&[&["--threads", "1"][..], &args[..]].concat());
    let b = vertexid(&[&["--threads", "4"][..], &args[..]].concat());
    assert_eq!(a.stdout, b.stdout);
    let h1 = vertexid(&["verify", "hook-product", "--z-order", "3"]);
    let h2 = vertexid(&["verify", "hook-product", "--z-order", "3"]);
    assert_eq!(h1.stdout, h2.stdout);
}
