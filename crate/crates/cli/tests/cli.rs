use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_superbethe"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    if let Some(text) = stdin {
        child
            .stdin
            .take()
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
    } else {
        drop(child.stdin.take());
    }
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

const SL2: &str =
    r#"{"grading":{"r":1,"s":-1,"p":[1,1]},"counts":[1],"inhomogeneities":[[0,0],[0,0]]}"#;
const SL12: &str = r#"{"grading":{"r":0,"s":1,"p":[1,-1,-1]},"counts":[2,1],"inhomogeneities":[[0.1,0],[-0.3,0],[0.25,0],[0.05,0]]}"#;

#[test]
fn grading_counts() {
    let out = run(&["gradings", "--r", "1", "--s", "1"], None);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["gradings"].as_array().unwrap().len(), 6);
    let out = run(&["gradings", "--r", "0", "--s", "1"], None);
    assert_eq!(json(&out)["count"], 3);
}

#[test]
fn degenerate_algebra_rejected() {
    let out = run(&["gradings", "--r", "-1", "--s", "-1"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sl(0|0)"));
}

#[test]
fn dynkin_dot_file() {
    let dir = std::env::temp_dir().join(format!("superbethe-dot-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("d.dot");
    let out = run(
        &[
            "dynkin",
            "--grading",
            "+-+-",
            "--dot",
            path.to_str().unwrap(),
        ],
        None,
    );
    assert!(out.status.success());
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("graph dynkin"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn worked_example_tableaux() {
    let out = run(&["tableaux", "--grading", "+-+", "--shape", "2,1"], None);
    let v = json(&out);
    let signs: Vec<i64> = v["tableaux"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["sign"].as_i64().unwrap())
        .collect();
    assert_eq!(signs, [-1, 1, 1, -1, -1, 1, 1, -1]);
}

#[test]
fn single_shape_jt_passes() {
    let out = run(
        &["verify", "jt", "--grading", "+-+", "--shape", "2,1"],
        None,
    );
    assert!(out.status.success());
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn injected_sign_fault_fails() {
    for kind in ["jt", "dual"] {
        let out = run(
            &[
                "verify",
                kind,
                "--grading",
                "+-+",
                "--shape",
                "2,1",
                "--inject-sign-fault",
                "4",
            ],
            None,
        );
        assert_eq!(out.status.code(), Some(1), "{kind}");
        assert_eq!(json(&out)["passed"], false);
    }
}

#[test]
fn small_suite_passes() {
    let out = run(&["verify", "--r", "0", "--s", "1", "--max", "2"], None);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert_eq!(json(&out)["cases"].as_array().unwrap().len(), 3);
}

#[test]
fn output_is_byte_identical() {
    let args = ["verify", "series", "--grading", "-+-", "--seed", "7"];
    assert_eq!(run(&args, None).stdout, run(&args, None).stdout);
    let a = run(&["solve-bae", "--seed", "3"], Some(SL12));
    let b = run(&["solve-bae", "--seed", "3"], Some(SL12));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sl2_oracle_root() {
    let out = run(&["solve-bae"], Some(SL2));
    assert!(out.status.success());
    let v = json(&out);
    let root = &v["solutions"][0]["roots"][0][0];
    let re = root[0].as_f64().unwrap();
    let im = root[1].as_f64().unwrap();
    assert!(re.hypot(im) < 1e-10);
}

#[test]
fn empty_and_oversized_systems() {
    let empty =
        r#"{"grading":{"r":0,"s":1,"p":[1,-1,-1]},"counts":[0,0],"inhomogeneities":[[0.2,0]]}"#;
    let v = json(&run(&["solve-bae"], Some(empty)));
    assert_eq!(v["solutions"].as_array().unwrap().len(), 1);
    let big = r#"{"grading":{"r":1,"s":-1,"p":[1,1]},"counts":[9],"inhomogeneities":[]}"#;
    assert_eq!(run(&["solve-bae"], Some(big)).status.code(), Some(2));
    assert_eq!(
        run(&["solve-bae"], Some("{not json")).status.code(),
        Some(2)
    );
}

#[test]
fn particle_hole_chain() {
    let solved = run(&["solve-bae"], Some(SL12));
    assert!(solved.status.success());
    let text = String::from_utf8(solved.stdout).unwrap();
    let out = run(&["particle-hole", "--path", "1,2"], Some(&text));
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["final_signs"], "--+");
    assert_eq!(v["result"]["steps"].as_array().unwrap().len(), 2);
    let even = run(&["particle-hole", "--path", "2"], Some(&text));
    assert_eq!(even.status.code(), Some(2));
}
