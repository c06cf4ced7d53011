use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lab(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gjms-lab"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("GJMS_LAB_THREADS", t),
        None => cmd.env_remove("GJMS_LAB_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn constants_json() {
    let o = lab(&["constants", "--n", "3", "--s", "1"], None);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["lambda0_tilde"], 0.25);
    let o = lab(&["constants", "--n", "5", "--s", "0.5"], None);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let pi = std::f64::consts::PI;
    assert!((v["lambda0"].as_f64().unwrap() - 2.0 / pi).abs() < 1e-12);
    assert!((v["b"].as_f64().unwrap() - 1.0 / pi).abs() < 1e-12);
    assert!((v["gap"].as_f64().unwrap() - 1.0 / pi).abs() < 1e-12);
}

#[test]
fn invalid_input_exits_2() {
    let o = lab(&["constants", "--n", "3", "--s", "2"], None);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.trim().lines().count(), 1, "{err}");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    for args in [
        vec![
            "bubble-asymptotics",
            "--n",
            "5",
            "--s",
            "1",
            "--eps",
            "",
            "--out",
            p(&out),
        ],
        vec![
            "kernel-decay",
            "--n",
            "3",
            "--s",
            "0.6",
            "--r",
            "0.4,2,3",
            "--out",
            p(&out),
        ],
        vec![
            "blowdown",
            "--n",
            "5",
            "--s",
            "0.8",
            "--lambda",
            "0.1",
            "--out",
            p(&out),
        ],
        vec![
            "multiplier",
            "--kind",
            "nope",
            "--n",
            "3",
            "--s",
            "1",
            "--out",
            p(&out),
        ],
        vec![
            "gap-scan",
            "--n",
            "5",
            "--s",
            "0.8",
            "--lambda",
            "0:1",
            "--out",
            p(&out),
        ],
        vec!["constants", "--n", "3"],
        vec!["no-such-command"],
    ] {
        assert_eq!(code(&lab(&args, None)), 2, "{args:?}");
    }
    let o = lab(
        &[
            "blowdown",
            "--n",
            "5",
            "--s",
            "0.8",
            "--lambda",
            "0.1",
            "--out",
            p(&out),
        ],
        None,
    );
    assert!(String::from_utf8_lossy(&o.stderr).contains("if and only if"));
    assert!(!out.exists());
    assert_eq!(
        code(&lab(&["constants", "--n", "3", "--s", "1"], Some("zero"))),
        2
    );
}

#[test]
fn io_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing").join("m.csv");
    let o = lab(
        &["multiplier", "--n", "3", "--s", "1", "--out", p(&out)],
        None,
    );
    assert_eq!(code(&o), 3);
    let cfg = dir.path().join("absent.cfg");
    assert_eq!(code(&lab(&["constants", "--config", p(&cfg)], None)), 3);
}

#[test]
fn failed_fit_exits_4_and_keeps_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k.csv");
    // a kernel decay slope can not reach the threshold on a short, near range with heavy smoothing
    let o = lab(
        &[
            "kernel-decay",
            "--n",
            "3",
            "--s",
            "0.6",
            "--r",
            "0.5:0.6:3",
            "--eps-reg",
            "2",
            "--out",
            p(&out),
        ],
        None,
    );
    assert_eq!(code(&o), 4, "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("k.csv.summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["pass"], false);
}

#[test]
fn multiplier_table_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.csv");
    let o = lab(
        &[
            "multiplier",
            "--kind",
            "intertwined",
            "--n",
            "3",
            "--s",
            "1",
            "--beta-max",
            "10",
            "--count",
            "11",
            "--out",
            p(&out),
        ],
        None,
    );
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&out).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "beta,value");
    assert_eq!(lines.len(), 12);
    assert_eq!(lines[3], "2.0,4.25");
    let betas: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(betas
        .windows(2)
        .all(|w| w[1] > w[0] && ((w[1] - w[0]) - 1.0).abs() < 1e-12));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("m.csv.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["command"], "multiplier");
    assert_eq!(manifest["outputs"], serde_json::json!(["m.csv"]));
    assert_eq!(manifest["params"]["count"], 11);
    for key in ["git_describe", "started_at", "tolerances"] {
        assert!(manifest.get(key).is_some(), "{key}");
    }
}

#[test]
fn config_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("m.csv");
    fs::write(
        &cfg,
        format!(
            "kind = intertwined\nn = 3\ns = 2\ncount = 5\nbeta_max = 4\nout = {}\n",
            out.display()
        ),
    )
    .unwrap();
    // s = 2 from the file would be invalid for n = 3; the flag overrides it
    let o = lab(&["multiplier", "--s", "1", "--config", p(&cfg)], None);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.contains("\n1.0,1.25\n"));
    assert_eq!(code(&lab(&["multiplier", "--config", p(&cfg)], None)), 2);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str, threads: &str| {
        let m = dir.path().join(format!("{tag}-m.csv"));
        let k = dir.path().join(format!("{tag}-k.csv"));
        let mo = lab(
            &[
                "multiplier",
                "--n",
                "5",
                "--s",
                "0.8",
                "--count",
                "101",
                "--out",
                p(&m),
            ],
            Some(threads),
        );
        let ko = lab(
            &["kernel-decay", "--n", "5", "--s", "0.7", "--out", p(&k)],
            Some(threads),
        );
        assert_eq!(code(&mo), 0);
        assert_eq!(code(&ko), 0);
        let ks = dir.path().join(format!("{tag}-k.csv.summary.json"));
        (
            fs::read(&m).unwrap(),
            fs::read(&k).unwrap(),
            fs::read_to_string(ks).unwrap(),
        )
    };
    let a = run("a", "1");
    let b = run("b", "4");
    assert_eq!(a.0, b.0);
    assert_eq!(a.1, b.1);
    // summaries differ only in the manifest name
    assert_eq!(a.2.replace("a-k.csv", ""), b.2.replace("b-k.csv", ""));
}
