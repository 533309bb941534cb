//! End-to-end runs of the `infoengine` binary.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_infoengine"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn omega_bar_cycle_reports_net_work_and_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("curve.csv");
    let json = dir.path().join("report.json");
    let out = run(&[
        "cycle",
        "--model",
        "omega-bar",
        "--csv-out",
        csv.to_str().unwrap(),
        "--json-out",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    let dw = v["data"]["cycle"]["delta_w"].as_f64().unwrap();
    assert!((dw + 0.120_807_431_831_258_42).abs() < 1e-12);
    let saved: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(saved, v);
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("leg,component,volume_fraction,cumulative_work"));
    let last: Vec<&str> = text.lines().last().unwrap().split(',').collect();
    assert_eq!(last[0], "mixing");
    let w_mix = v["data"]["cycle"]["w_mixing"].as_f64().unwrap();
    assert!((last[3].parse::<f64>().unwrap() - w_mix).abs() < 1e-12);
}

#[test]
fn scaled_cycle_work() {
    let out = run(&["cycle", "--model", "omega-bar", "--N", "2", "--kT", "3"]);
    let dw = stdout_json(&out)["data"]["cycle"]["delta_w"]
        .as_f64()
        .unwrap();
    assert!((dw + 6.0 * 0.120_807_431_831_258_42).abs() < 1e-11);
}

#[test]
fn quantum_and_polytope_cycles_close_without_work() {
    for model in ["qubit", "square-bit", "classical:3"] {
        let out = run(&["cycle", "--model", model]);
        assert_eq!(out.status.code(), Some(0), "{model}");
        assert!(
            stdout_json(&out)["data"]["cycle"]["delta_w"]
                .as_f64()
                .unwrap()
                .abs()
                < 1e-12
        );
    }
    let out = run(&[
        "cycle",
        "--model",
        "qubit",
        "--state",
        "[[[0.75,0],[0,0]],[[0,0],[0.25,0]]]",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn explicit_decompositions_must_share_a_target() {
    let q = r#"{"probs":[0.5,0.5],"states":[[1,1,1],[1,-1,-1]]}"#;
    let p = r#"{"probs":[0.5,0.5],"states":[[1,1,-1],[1,-1,1]]}"#;
    let out = run(&[
        "cycle",
        "--model",
        "square-bit",
        "--decomp-q",
        q,
        "--decomp-p",
        p,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let far = r#"{"probs":[0.25,0.75],"states":[[1,1,-1],[1,-1,1]]}"#;
    let out = run(&[
        "cycle",
        "--model",
        "square-bit",
        "--decomp-q",
        q,
        "--decomp-p",
        far,
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not close"));
}

#[test]
fn sep22_cycle_needs_decompositions() {
    let out = run(&["cycle", "--model", "sep22"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn majorize_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    let s = dir.path().join("s.json");
    std::fs::write(
        &t,
        r#"{"kind":"mpp","effects":[[1,0,0],[0,1,0],[0,0,1]],"outputs":[[1,0,0],[0,1,0],[0,0,1]]}"#,
    )
    .unwrap();
    std::fs::write(
        &s,
        r#"{"kind":"generic","events":[{"matrix":[[1,0,0],[0,1,0],[0,0,0]]},{"matrix":[[0,0,0],[0,0,0],[0,0,1]]}]}"#,
    )
    .unwrap();
    let (t, s) = (t.to_str().unwrap(), s.to_str().unwrap());
    let args = [
        "majorize",
        "--model",
        "classical:3",
        "--state",
        "[0.2,0.3,0.5]",
    ];

    let out = run(&[&args[..], &["--t", t, "--s", s]].concat());
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["data"]["majorizes"], true);
    assert_eq!(v["verdicts"][0]["check"], "information-gain-monotone");
    assert_eq!(v["data"]["kernel"][1][2], 1.0);

    let out = run(&[&args[..], &["--t", s, "--s", t]].concat());
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["data"]["majorizes"], false);
    assert!(v["verdicts"].as_array().unwrap().is_empty());
}

#[test]
fn decompose_square_bit() {
    let out = run(&["decompose", "--model", "square-bit"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(
        v["data"]["decompositions"]["decompositions"]
            .as_array()
            .unwrap()
            .len(),
        2
    );
    let dists = v["data"]["distributions"].as_array().unwrap();
    assert_eq!(dists.len(), 1);
    assert!(dists[0]
        .as_array()
        .unwrap()
        .iter()
        .all(|p| (p.as_f64().unwrap() - 0.5).abs() < 1e-12));
    assert_eq!(v["data"]["entropy"]["verdict"], "unique");

    let out = run(&["decompose", "--model", "square-bit", "--state", "[1,1,0.5]"]);
    let v = stdout_json(&out);
    let p: Vec<f64> = serde_json::from_value(v["data"]["distributions"][0].clone()).unwrap();
    assert!((p[0] - 0.75).abs() < 1e-12 && (p[1] - 0.25).abs() < 1e-12);
}

#[test]
fn inline_polytope_model() {
    let model = r#"{"kind":"polytope","dim":2,"unit":[1,1],"vertices":[[1,0],[0,1]]}"#;
    let out = run(&["decompose", "--model", model, "--state", r#"["1/3","2/3"]"#]);
    assert_eq!(out.status.code(), Some(0));
    let h = stdout_json(&out)["data"]["entropy"]["entropies"]
        .as_f64()
        .unwrap();
    assert!((h - 0.636_514_168_294_812_8).abs() < 1e-12);
}

#[test]
fn fixtures_print_json() {
    let v = stdout_json(&run(&["fixture", "omega-bar"]));
    assert!(v["sigma1"].is_array() && v["e1"].is_array());
    let v = stdout_json(&run(&["fixture", "appendix-b"]));
    assert_eq!(v["rho1"].as_array().unwrap().len(), 4);
    assert_eq!(run(&["fixture", "nope"]).status.code(), Some(2));
}

#[test]
fn verify_is_deterministic_and_honours_options() {
    let a = run(&[
        "verify",
        "theorem2",
        "--model",
        "classical:3",
        "--trials",
        "30",
        "--seed",
        "11",
    ]);
    let b = run(&[
        "verify",
        "theorem2",
        "--model",
        "classical:3",
        "--trials",
        "30",
        "--seed",
        "11",
    ]);
    assert_eq!(a.status.code(), Some(0));
    let (mut va, mut vb) = (stdout_json(&a), stdout_json(&b));
    assert_eq!(va["seed"], 11);
    assert_eq!(va["trials"], 30);
    va["runtime_ms"] = 0.into();
    vb["runtime_ms"] = 0.into();
    assert_eq!(va, vb);
}

#[test]
fn verify_appendix_c_passes() {
    let out = run(&["verify", "appendix-c"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn omega_bar_breaks_theorem1() {
    let out = run(&["verify", "theorem1", "--model", "omega-bar"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify", "lemma7"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "appendix-c", "--model", "qubit"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["cycle", "--model", "no-such-model"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
