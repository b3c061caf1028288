//! End-to-end CLI tests: exit codes, artifact shapes, determinism of the
//! JSON reports (everything but timing_ms), and the error paths the
//! commands promise.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skewlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn tmp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("skewlab-test-{}-{name}", std::process::id()))
}

#[test]
fn validate_cocycle_exit_codes() {
    let ok = run(&["validate-cocycle", fixture("cocycle_trivial_klein.json").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    let report = stdout_json(&ok);
    assert_eq!(report["verdicts"][0]["status"], "pass");
    assert!(report["verdicts"][0]["detail"]
        .as_str()
        .unwrap()
        .contains("64 triples"));

    let bad = run(&["validate-cocycle", fixture("cocycle_perturbed_klein.json").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    let report = stdout_json(&bad);
    assert_eq!(report["verdicts"][0]["status"], "fail");
    assert!(report["verdicts"][0]["detail"]
        .as_str()
        .unwrap()
        .contains("violating triple"));

    let missing = run(&["validate-cocycle", "/nonexistent/file.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn build_cyclic_quaternion_artifact() {
    let out_path = tmp_path("quat.json");
    let out = run(&[
        "build",
        fixture("cyclic_quaternion.json").to_str().unwrap(),
        "--kind",
        "cyclic",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let artifact: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(artifact["kind"], "cyclic");
    assert_eq!(artifact["algebra"]["dim"], 4);
    assert_eq!(artifact["center_dim"], 1);
    std::fs::remove_file(out_path).ok();
}

#[test]
fn build_klein_chain_artifact() {
    let out = run(&[
        "build",
        fixture("chain_klein.json").to_str().unwrap(),
        "--kind",
        "abelian-chain",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["artifact"]["algebra"]["dim"], 16);
    assert_eq!(report["artifact"]["center_dim"], 1);
    // the descriptor asked for a probe; it is included in the verdicts
    let names: Vec<&str> = report["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"division-probe"));
}

#[test]
fn build_precondition_violation_exits_2() {
    let out = run(&[
        "build",
        fixture("chain_non_galois.json").to_str().unwrap(),
        "--kind",
        "abelian-chain",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let report = stdout_json(&out);
    assert!(report["error"].as_str().unwrap().contains("Galois"));
}

#[test]
fn decompose_quaternion_crossed_product() {
    let artifact_path = tmp_path("quat-crossed.json");
    let build = run(&[
        "build",
        fixture("crossed_quaternion.json").to_str().unwrap(),
        "--kind",
        "crossed",
        "--out",
        artifact_path.to_str().unwrap(),
    ]);
    assert_eq!(build.status.code(), Some(0));
    let out = run(&["decompose", artifact_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["artifact"]["levels"].as_array().unwrap().len(), 1);
    assert_eq!(report["artifact"]["center_dims"], serde_json::json!([2, 1]));
    // c_0 = -1 in M-coordinates
    assert_eq!(
        report["artifact"]["levels"][0]["c"],
        serde_json::json!(["-1", "0"])
    );
    std::fs::remove_file(artifact_path).ok();
}

#[test]
fn decompose_zeta5_two_levels_all_pass() {
    let artifact_path = tmp_path("zeta5-crossed.json");
    let build = run(&[
        "build",
        fixture("crossed_zeta5.json").to_str().unwrap(),
        "--kind",
        "crossed",
        "--out",
        artifact_path.to_str().unwrap(),
    ]);
    assert_eq!(build.status.code(), Some(0));
    let out = run(&["decompose", artifact_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["artifact"]["levels"].as_array().unwrap().len(), 2);
    assert_eq!(report["artifact"]["center_dims"], serde_json::json!([4, 2, 1]));
    for v in report["verdicts"].as_array().unwrap() {
        assert_eq!(v["status"], "pass", "verdict {v}");
    }
    std::fs::remove_file(artifact_path).ok();
}

#[test]
fn decompose_non_solvable_group_exits_1_citing_solvability() {
    // hand-crafted artifact whose declared group is A_5; the solvability
    // check fires before anything else is rebuilt
    let a5 = skewlab::groups::alternating_group(5);
    let group = skewlab::descriptor::GroupDesc::from_group(&a5);
    let ext = skewlab::descriptor::ExtensionDesc::from_extension(
        &skewlab::fieldext::catalog("gauss_Q_i").unwrap(),
    );
    let artifact = serde_json::json!({
        "kind": "crossed",
        "extension": ext,
        "group": group,
        "factor_set": [],
        "algebra": {
            "dim": 1,
            "domain": "Q",
            "unit": ["1"],
            "structconsts": ["1"]
        },
        "galois": false,
        "center_dim": 1
    });
    let path = tmp_path("a5-artifact.json");
    std::fs::write(&path, serde_json::to_string(&artifact).unwrap()).unwrap();
    let out = run(&["decompose", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["verdicts"][0]["name"], "is_solvable");
    assert_eq!(report["verdicts"][0]["status"], "fail");
    assert!(report["verdicts"][0]["detail"]
        .as_str()
        .unwrap()
        .contains("not solvable"));
    std::fs::remove_file(path).ok();
}

#[test]
fn probe_division_verdicts_and_exit_codes() {
    // quaternion chain: undetermined at any height; exit 1 without the flag
    let quat_chain = tmp_path("quat-chain.json");
    let build = run(&[
        "build",
        fixture("chain_quaternion.json").to_str().unwrap(),
        "--kind",
        "abelian-chain",
        "--out",
        quat_chain.to_str().unwrap(),
    ]);
    assert_eq!(build.status.code(), Some(0));
    let undetermined = run(&["probe-division", quat_chain.to_str().unwrap(), "--height", "3"]);
    assert_eq!(undetermined.status.code(), Some(1));
    let report = stdout_json(&undetermined);
    let verdict = report["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["name"] == "verdict")
        .unwrap();
    assert_eq!(verdict["status"], "undetermined");
    assert!(verdict["detail"].as_str().unwrap().contains("undetermined(3)"));

    let allowed = run(&[
        "probe-division",
        quat_chain.to_str().unwrap(),
        "--height",
        "3",
        "--allow-undetermined",
    ]);
    assert_eq!(allowed.status.code(), Some(0));

    // exhaustive over Q is unsupported: exit 2
    let unsupported = run(&["probe-division", quat_chain.to_str().unwrap(), "--exhaustive"]);
    assert_eq!(unsupported.status.code(), Some(2));

    // split chain: witness i at level 0, definite verdict, exit 0
    let split_chain = tmp_path("split-chain.json");
    let build = run(&[
        "build",
        fixture("chain_split.json").to_str().unwrap(),
        "--kind",
        "abelian-chain",
        "--out",
        split_chain.to_str().unwrap(),
    ]);
    assert_eq!(build.status.code(), Some(0));
    let split = run(&["probe-division", split_chain.to_str().unwrap(), "--height", "1"]);
    assert_eq!(split.status.code(), Some(0));
    let report = stdout_json(&split);
    let level0 = &report["verdicts"][0];
    assert!(level0["detail"].as_str().unwrap().contains("witness b = [0, 1]"));

    // F_9 cyclic artifact, exhaustive: not-division, exit 0
    let f9 = tmp_path("f9.json");
    let build = run(&[
        "build",
        fixture("cyclic_f9.json").to_str().unwrap(),
        "--kind",
        "cyclic",
        "--out",
        f9.to_str().unwrap(),
    ]);
    assert_eq!(build.status.code(), Some(0));
    let probe = run(&["probe-division", f9.to_str().unwrap(), "--exhaustive"]);
    assert_eq!(probe.status.code(), Some(0));
    let report = stdout_json(&probe);
    let verdict = report["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["name"] == "verdict")
        .unwrap();
    assert!(verdict["detail"].as_str().unwrap().contains("not-division"));

    for p in [quat_chain, split_chain, f9] {
        std::fs::remove_file(p).ok();
    }
}

#[test]
fn center_and_centralizer_commands() {
    let artifact = tmp_path("quat-center.json");
    let build = run(&[
        "build",
        fixture("cyclic_quaternion.json").to_str().unwrap(),
        "--kind",
        "cyclic",
        "--out",
        artifact.to_str().unwrap(),
    ]);
    assert_eq!(build.status.code(), Some(0));
    let center = run(&["center", artifact.to_str().unwrap()]);
    assert_eq!(center.status.code(), Some(0));
    let report = stdout_json(&center);
    assert_eq!(report["artifact"]["dim"], 1);

    // centralizer of the embedded Q(i) inside the quaternions is Q(i)
    let gens = tmp_path("gens.json");
    std::fs::write(&gens, r#"[["0", "1", "0", "0"]]"#).unwrap();
    let cent = run(&[
        "centralizer",
        artifact.to_str().unwrap(),
        "--gens",
        gens.to_str().unwrap(),
    ]);
    assert_eq!(cent.status.code(), Some(0));
    let report = stdout_json(&cent);
    assert_eq!(report["artifact"]["dim"], 2);
    std::fs::remove_file(artifact).ok();
    std::fs::remove_file(gens).ok();
}

#[test]
fn reports_are_deterministic_modulo_timing() {
    let run_once = || {
        let out = run(&[
            "build",
            fixture("chain_klein.json").to_str().unwrap(),
            "--kind",
            "abelian-chain",
        ]);
        assert_eq!(out.status.code(), Some(0));
        let mut v = stdout_json(&out);
        v["timing_ms"] = serde_json::json!(0);
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(run_once(), run_once());
}
