//! End-to-end command line tests driving the built binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ucount_core::corpus;
use ucount_core::io::{to_json, GraphFile};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_ucount")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_graph(dir: &Path, name: &str, e: &ucount_core::embed::Embedded) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, to_json(&GraphFile::from_embedded(e))).unwrap();
    p
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ucount-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout_field(out: &Output, key: &str) -> String {
    let text = String::from_utf8_lossy(&out.stdout);
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix(&format!("{key}: ")) {
            return rest.to_string();
        }
    }
    panic!("field {key} missing in output:\n{text}");
}

#[test]
fn count_uperm_fkt_with_cross_check() {
    let dir = tempdir();
    let k4 = write_graph(&dir, "k4.json", &corpus::k4());
    let out = run(&[
        "count",
        "--quantity",
        "uperm",
        "--method",
        "fkt",
        "--cross-check",
        k4.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    assert_eq!(stdout_field(&out, "result"), "3");
    assert_eq!(stdout_field(&out, "cross_check"), "pass");
}

#[test]
fn count_udet_semipfaffian_cube() {
    let dir = tempdir();
    let cube = write_graph(&dir, "cube.json", &corpus::cube_q3());
    let out = run(&[
        "count",
        "--quantity",
        "udet",
        "--method",
        "semipfaffian",
        "--cross-check",
        "--json",
        cube.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let v: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("json report");
    assert_eq!(v["result"], "-3");
    assert_eq!(v["cross_check"], "pass");
}

#[test]
fn count_rejects_fkt_udet() {
    let dir = tempdir();
    let k4 = write_graph(&dir, "k4b.json", &corpus::k4());
    let out = run(&[
        "count",
        "--quantity",
        "udet",
        "--method",
        "fkt",
        k4.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn resource_bounds_exit_3() {
    let dir = tempdir();
    let cube = write_graph(&dir, "cube3.json", &corpus::cube_q3());
    let out = run(&[
        "count",
        "--quantity",
        "uperm",
        "--max-vertices",
        "4",
        cube.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

#[test]
fn signature_builtin_goldens() {
    for (name, mode) in [
        ("skew-crossover", "perm"),
        ("skew-crossover", "det"),
        ("iff", "perm"),
        ("iff", "det"),
        ("clause", "perm"),
        ("clause", "det"),
        ("auxiliary", "det"),
        ("null-edge", "det"),
        ("degree4-vertex", "det"),
    ] {
        let out = run(&[
            "signature",
            "--builtin",
            name,
            "--mode",
            mode,
            "--golden-builtin",
        ]);
        assert!(out.status.success(), "{name} {mode}: {out:?}");
    }
}

#[test]
fn signature_gadget_file_and_corruption() {
    let dir = tempdir();
    let emit = dir.join("crossover.json");
    // emit the gadget, then recheck the file path end to end
    let out = run(&[
        "signature",
        "--builtin",
        "skew-crossover",
        "--mode",
        "perm",
        "--golden-builtin",
        "--emit-gadget",
        emit.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let golden = dir.join("crossover.golden.json");
    let out = run(&[
        "--json",
        "signature",
        emit.to_str().unwrap(),
        "--flavor",
        "perm",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    std::fs::write(&golden, serde_json::to_string(&v["table"]).unwrap()).unwrap();
    let out = run(&[
        "signature",
        emit.to_str().unwrap(),
        "--flavor",
        "perm",
        "--golden",
        golden.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");

    // corrupt the gadget: flip the middle weight
    let text = std::fs::read_to_string(&emit).unwrap();
    let corrupted = text.replace("\"-1\"", "\"1\"");
    assert_ne!(text, corrupted);
    std::fs::write(&emit, corrupted).unwrap();
    let out = run(&[
        "signature",
        emit.to_str().unwrap(),
        "--flavor",
        "perm",
        "--golden",
        golden.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
}

#[test]
fn compile_satcount_roundtrip() {
    let dir = tempdir();
    let cnf = dir.join("f.cnf");
    std::fs::write(&cnf, "c test\np cnf 3 1\n1 2 3 0\n").unwrap();

    let sat = run(&["satcount", cnf.to_str().unwrap()]);
    assert!(sat.status.success());
    assert_eq!(stdout_field(&sat, "result"), "7");

    let graph = dir.join("b.json");
    let out = run(&[
        "compile",
        "--mode",
        "perm",
        cnf.to_str().unwrap(),
        "-o",
        graph.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    assert!(dir.join("b.provenance.json").exists());

    let count = run(&[
        "count",
        "--quantity",
        "uperm",
        "--method",
        "oracle",
        "--max-vertices",
        "256",
        graph.to_str().unwrap(),
    ]);
    assert!(count.status.success(), "{count:?}");
    assert_eq!(stdout_field(&count, "result"), "7");
}

#[test]
fn compile_det_matches_satcount_with_sign() {
    let dir = tempdir();
    let cnf = dir.join("g.cnf");
    std::fs::write(&cnf, "p cnf 2 1\n1 2 2 0\n").unwrap();
    let graph = dir.join("a.json");
    let out = run(&[
        "compile",
        "--mode",
        "det",
        cnf.to_str().unwrap(),
        "-o",
        graph.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let count = run(&[
        "count",
        "--quantity",
        "udet",
        "--method",
        "oracle",
        "--max-vertices",
        "256",
        graph.to_str().unwrap(),
    ]);
    assert!(count.status.success());
    // one clause: #SAT = (-1)^1 * udet = 3
    assert_eq!(stdout_field(&count, "result"), "-3");
}

#[test]
fn orient_verify_tension_pipeline() {
    let dir = tempdir();
    let cube = write_graph(&dir, "cube2.json", &corpus::cube_q3());
    let oriented = dir.join("cube-oriented.json");
    let out = run(&[
        "orient",
        "--pfaffian",
        cube.to_str().unwrap(),
        "-o",
        oriented.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let out = run(&["verify", "--pfaffian", oriented.to_str().unwrap()]);
    assert!(out.status.success(), "{out:?}");
    // a Pfaffian orientation violates the semi-Pfaffian parity rule on Q3
    let out = run(&["verify", "--semi-pfaffian", oriented.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");

    let semi = dir.join("cube-semi.json");
    let out = run(&[
        "orient",
        "--semi-pfaffian",
        cube.to_str().unwrap(),
        "-o",
        semi.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let out = run(&["verify", "--semi-pfaffian", semi.to_str().unwrap()]);
    assert!(out.status.success(), "{out:?}");

    let out = run(&["tension", cube.to_str().unwrap(), "--all-central"]);
    assert!(out.status.success(), "{out:?}");
    assert_eq!(stdout_field(&out, "without_tension"), "true");
    assert_eq!(stdout_field(&out, "max_tension"), "0");
}

#[test]
fn pfaffian_subcommand() {
    let dir = tempdir();
    let m = dir.join("m.json");
    std::fs::write(
        &m,
        r#"[["0","2","3","5"],["-2","0","7","11"],["-3","-7","0","13"],["-5","-11","-13","0"]]"#,
    )
    .unwrap();
    let out = run(&["pfaffian", m.to_str().unwrap(), "--by-definition"]);
    assert!(out.status.success(), "{out:?}");
    assert_eq!(stdout_field(&out, "result"), "28"); // 2*13 - 3*11 + 5*7
    assert_eq!(stdout_field(&out, "verification"), "pass");

    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"[["0","1"],["1","0"]]"#).unwrap();
    let out = run(&["pfaffian", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn deterministic_outputs() {
    let dir = tempdir();
    let cnf = dir.join("d.cnf");
    std::fs::write(&cnf, "p cnf 2 2\n1 -2 1 0\n2 2 -1 0\n").unwrap();
    let (a, b) = (dir.join("o1.json"), dir.join("o2.json"));
    for p in [&a, &b] {
        let out = run(&[
            "compile",
            "--mode",
            "det",
            cnf.to_str().unwrap(),
            "-o",
            p.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(
        std::fs::read_to_string(&a).unwrap(),
        std::fs::read_to_string(&b).unwrap()
    );
}
