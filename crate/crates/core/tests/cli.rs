use std::path::Path;
use std::process::{Command, Output};

fn pinch(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pinch"))
        .args(args)
        .current_dir(dir)
        .env_remove("PINCH_OUT_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn word_subcommands() {
    let tmp = tempfile::tempdir().unwrap();
    let o = pinch(&["word", "reduce", "a1 b b^-1 a2"], tmp.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "a1 a2");

    let o = pinch(&["word", "cyclic", "a2 a1 b a2^-1"], tmp.path());
    assert!(stdout(&o).contains("core: a1 b"));

    let o = pinch(&["word", "sums", "a1 b^3 a1"], tmp.path());
    let out = stdout(&o);
    assert!(out.contains("b: 3") && out.contains("a1: 2"), "{out}");

    let o = pinch(&["word", "autzero", "a1^2 b^3"], tmp.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("witness"));

    assert_eq!(pinch(&["word", "reduce", "a1 q7"], tmp.path()).status.code(), Some(2));
}

#[test]
fn build_then_inspect() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let o = pinch(&["preset", "surface", "--genus", "2", "--out", "cfg.json"], dir);
    assert!(o.status.success());

    let o = pinch(&["build", "--config", "cfg.json", "--out", "run"], dir);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["config.json", "g_action.json", "h_action.json", "sigma.json", "report.json"] {
        assert!(dir.join("run").join(f).exists(), "{f} missing");
    }

    assert_eq!(pinch(&["verify", "--dir", "run"], dir).status.code(), Some(0));
    assert!(pinch(&["sigma", "--dir", "run"], dir).status.success());
    assert!(pinch(&["orbits", "--dir", "run", "--factor", "h"], dir).status.success());
    let o = pinch(&["folner", "--dir", "run", "--k", "10"], dir);
    assert!(o.status.success());
    assert!(stdout(&o).contains("b: 1/5"));

    let o = pinch(&["export", "--snapshot", "run/g_action.json"], dir);
    assert!(stdout(&o).starts_with("digraph"));

    // the env var stands in for --dir
    let o = Command::new(env!("CARGO_BIN_EXE_pinch"))
        .args(["verify"])
        .current_dir(dir)
        .env("PINCH_OUT_DIR", dir.join("run"))
        .output()
        .unwrap();
    assert!(o.status.success());

    // a second build is byte-identical
    assert!(pinch(&["build", "--config", "cfg.json", "--out", "again"], dir).status.success());
    for f in ["g_action.json", "h_action.json", "sigma.json", "report.json"] {
        let a = std::fs::read(dir.join("run").join(f)).unwrap();
        let b = std::fs::read(dir.join("again").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }

    std::fs::write(dir.join("run/sigma.json"), "{ not json").unwrap();
    assert_ne!(pinch(&["verify", "--dir", "run"], dir).status.code(), Some(0));
}

#[test]
fn bad_configs_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    pinch(&["preset", "surface", "--genus", "2", "--out", "cfg.json"], dir);
    let text = std::fs::read_to_string(dir.join("cfg.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["c"] = "a1 b".into();
    std::fs::write(dir.join("bad.json"), v.to_string()).unwrap();
    let o = pinch(&["build", "--config", "bad.json", "--out", "run"], dir);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("word autzero"));

    assert_eq!(pinch(&["verify"], dir).status.code(), Some(2));
}
