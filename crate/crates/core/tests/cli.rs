use std::path::Path;
use std::process::{Command, Output};

fn plrhc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plrhc")).args(args).current_dir(dir).env("RUST_LOG", "warn").output().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn generate_learn_eval_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let out = plrhc(
        &[
            "generate",
            "--type",
            "grid",
            "--d",
            "16",
            "--n",
            "1500",
            "--seed",
            "3",
            "--burn-in",
            "500",
            "--thinning",
            "5",
            "--out-data",
            "d.txt",
            "--out-graph",
            "truth.txt",
            "--out-model",
            "m.tsv",
        ],
        p,
    );
    assert!(out.status.success(), "{}", stderr(&out));
    for f in ["d.txt", "truth.txt", "m.tsv"] {
        assert!(p.join(format!("{f}.manifest.json")).exists(), "{f}");
    }
    assert!(std::fs::read_to_string(p.join("m.tsv")).unwrap().starts_with("node\t0\t"));

    let out = plrhc(&["learn", "--data", "d.txt", "--out", "g.txt", "--stats", "s.json", "--dump-plr", "plr.tsv"], p);
    assert!(out.status.success(), "{}", stderr(&out));
    let stats: serde_json::Value = serde_json::from_slice(&std::fs::read(p.join("s.json")).unwrap()).unwrap();
    for key in ["phase1_evals", "phase2_evals", "pairwise_fraction", "mean_blanket_size", "wall_ms"] {
        assert!(stats.get(key).is_some(), "{key}");
    }
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(p.join("g.txt.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["subcommand"], "learn");
    assert_eq!(manifest["flags"]["mode"], "plrhc");
    assert_eq!(manifest["flags"]["gamma"], 0.5);
    assert_eq!(manifest["input_digests"]["d.txt"].as_str().unwrap().len(), 64);

    let out = plrhc(&["eval", "--truth", "truth.txt", "--estimate", "g.txt", "--json", "r.json"], p);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("fp="));
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(p.join("r.json")).unwrap()).unwrap();
    assert_eq!(report["hd"].as_u64().unwrap(), report["fp"].as_u64().unwrap() + report["fn"].as_u64().unwrap());
}

#[test]
fn learning_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let gen = plrhc(
        &[
            "generate",
            "--type",
            "hub",
            "--d",
            "16",
            "--n",
            "800",
            "--burn-in",
            "300",
            "--thinning",
            "3",
            "--out-data",
            "d.csv",
        ],
        p,
    );
    assert!(gen.status.success(), "{}", stderr(&gen));
    assert!(std::fs::read_to_string(p.join("d.csv")).unwrap().lines().next().unwrap().contains(','));
    for out in ["a.txt", "b.txt"] {
        assert!(plrhc(&["learn", "--data", "d.csv", "--mode", "hc", "--out", out], p).status.success());
    }
    assert_eq!(std::fs::read(p.join("a.txt")).unwrap(), std::fs::read(p.join("b.txt")).unwrap());
}

#[test]
fn usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = plrhc(&["learn", "--out", "g.txt"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("ERROR usage:"));
    let out = plrhc(&["frobnicate"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn data_errors() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    std::fs::write(p.join("bad.txt"), "0 1 0\n1 2 0\n").unwrap();
    let out = plrhc(&["learn", "--data", "bad.txt", "--out", "g.txt"], p);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("ERROR parse:"), "{}", stderr(&out));
    assert!(!p.join("g.txt").exists());

    let out = plrhc(&["generate", "--type", "grid", "--d", "15", "--n", "10", "--out-data", "x.txt"], p);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("ERROR invalid-size:"));

    std::fs::write(p.join("empty.txt"), "# d=4\n").unwrap();
    std::fs::write(p.join("one.txt"), "# d=4\n0 1\n").unwrap();
    let out = plrhc(&["eval", "--truth", "empty.txt", "--estimate", "one.txt"], p);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("ERROR degenerate-truth:"));
}

#[test]
fn version_and_help() {
    let dir = tempfile::tempdir().unwrap();
    let out = plrhc(&["--version"], dir.path());
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains(env!("CARGO_PKG_VERSION")));
    let out = plrhc(&["bench", "--help"], dir.path());
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("--n-list"));
}
