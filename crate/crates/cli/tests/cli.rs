use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn qpuf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpuf"))
        .args(args)
        .output()
        .expect("spawn qpuf")
}

fn ok(args: &[&str]) -> String {
    let out = qpuf(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    qpuf(args).status.code().unwrap()
}

struct Dir(tempfile::TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }
    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }
    fn s(&self, name: &str) -> String {
        self.path(name).to_str().unwrap().to_string()
    }
}

fn report(csv: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(csv.with_extension("json")).unwrap()).unwrap()
}

#[test]
fn qgen_is_deterministic_and_prints_its_hash() {
    let d = Dir::new();
    let stdout = ok(&["qgen", "--n", "4", "--k", "2", "--seed", "7", "--out", &d.s("a.json")]);
    ok(&["qgen", "--n", "4", "--k", "2", "--seed", "7", "--out", &d.s("b.json")]);
    let a = std::fs::read(d.path("a.json")).unwrap();
    assert_eq!(a, std::fs::read(d.path("b.json")).unwrap());
    assert!(stdout.starts_with(&hex::encode(Sha256::digest(&a))));
}

#[test]
fn qgen_usage_errors() {
    let d = Dir::new();
    assert_eq!(code(&["qgen", "--n", "1", "--k", "2", "--out", &d.s("x.json")]), 2);
    assert_eq!(code(&["qgen", "--n", "4", "--k", "2"]), 2);
    assert_eq!(code(&["qgen", "--n", "four"]), 2);
}

#[test]
fn qeval_identity_appends_and_classifies_errors() {
    let d = Dir::new();
    ok(&["qgen", "--n", "2", "--k", "0", "--out", &d.s("id.json")]);
    std::fs::write(d.path("c.json"), "[[1,0],[0,0],[0,0],[0,0]]").unwrap();
    let store = d.s("crp.jsonl");
    let args = [
        "qeval",
        "--descriptor",
        &d.s("id.json"),
        "--challenge",
        &d.s("c.json"),
        "--expected",
        &d.s("c.json"),
        "--out",
        &store,
    ];
    assert_eq!(ok(&args).trim(), "fidelity 1");
    ok(&args);
    let text = std::fs::read_to_string(&store).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    let rec: Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(rec["challenge"], rec["response"]);
    assert_eq!(rec["n_qubits"], 2);

    std::fs::write(d.path("bad.json"), "[[1,0],").unwrap();
    std::fs::write(d.path("short.json"), "[[1,0],[0,0]]").unwrap();
    assert_eq!(
        code(&[
            "qeval",
            "--descriptor",
            &d.s("id.json"),
            "--challenge",
            &d.s("bad.json"),
            "--out",
            &store
        ]),
        3
    );
    assert_eq!(
        code(&[
            "qeval",
            "--descriptor",
            &d.s("id.json"),
            "--challenge",
            &d.s("short.json"),
            "--out",
            &store
        ]),
        4
    );
    assert_eq!(std::fs::read_to_string(&store).unwrap().lines().count(), 2);
}

#[test]
fn qeval_accepts_a_crp_record_as_challenge() {
    let d = Dir::new();
    ok(&["qgen", "--n", "2", "--k", "3", "--seed", "5", "--out", &d.s("q.json")]);
    std::fs::write(
        d.path("c.json"),
        r#"{"challenge": [[0.6,0],[0,0.8],[0,0],[0,0]], "n_qubits": 2}"#,
    )
    .unwrap();
    ok(&[
        "qeval",
        "--descriptor",
        &d.s("q.json"),
        "--challenge",
        &d.s("c.json"),
        "--out",
        &d.s("s.jsonl"),
    ]);
    // the stored record replays as challenge and expected response
    let line = std::fs::read_to_string(d.path("s.jsonl")).unwrap();
    std::fs::write(d.path("rec.json"), line.trim()).unwrap();
    let out = ok(&[
        "qeval",
        "--descriptor",
        &d.s("q.json"),
        "--challenge",
        &d.s("rec.json"),
        "--expected",
        &d.s("rec.json"),
        "--out",
        &d.s("s.jsonl"),
    ]);
    let f: f64 = out.trim().strip_prefix("fidelity ").unwrap().parse().unwrap();
    assert!((f - 1.0).abs() < 1e-12);
}

#[test]
fn uniqueness_csv_schema_and_single_run() {
    let d = Dir::new();
    let out = d.path("u.csv");
    ok(&[
        "uniqueness",
        "--n",
        "3",
        "--k",
        "2",
        "--runs",
        "1",
        "--seed",
        "9",
        "--out",
        out.to_str().unwrap(),
    ]);
    let csv = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "run_index,n_qubits,n_blocks,diamond_distance");
    assert_eq!(lines.len(), 2);
    let r = report(&out);
    let g = &r["summary"]["groups"][0];
    assert_eq!(g["min"], g["mean"]);
    assert_eq!(r["command"], "uniqueness");
    assert_eq!(r["master_seed"], 9);
    assert!(r["wall_clock_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn uniqueness_prefix_is_stable_when_runs_grow() {
    let d = Dir::new();
    ok(&[
        "uniqueness",
        "--n",
        "3",
        "--k",
        "1",
        "--runs",
        "5",
        "--seed",
        "4",
        "--out",
        &d.s("a.csv"),
    ]);
    ok(&[
        "uniqueness",
        "--n",
        "3",
        "--k",
        "1",
        "--runs",
        "8",
        "--seed",
        "4",
        "--out",
        &d.s("b.csv"),
    ]);
    let a = std::fs::read_to_string(d.path("a.csv")).unwrap();
    let b = std::fs::read_to_string(d.path("b.csv")).unwrap();
    let b_prefix: Vec<&str> = b.lines().take(6).collect();
    assert_eq!(a.lines().collect::<Vec<_>>(), b_prefix);
}

#[test]
fn config_file_merges_under_flags() {
    let d = Dir::new();
    std::fs::write(d.path("cfg.json"), r#"{"n": [3], "k": [1, 2], "runs": 3, "seed": 1}"#).unwrap();
    ok(&[
        "uniqueness",
        "--config",
        &d.s("cfg.json"),
        "--seed",
        "2",
        "--out",
        &d.s("a.csv"),
    ]);
    ok(&[
        "uniqueness",
        "--n",
        "3",
        "--k",
        "1,2",
        "--runs",
        "3",
        "--seed",
        "2",
        "--out",
        &d.s("b.csv"),
    ]);
    assert_eq!(
        std::fs::read(d.path("a.csv")).unwrap(),
        std::fs::read(d.path("b.csv")).unwrap()
    );
    assert_eq!(report(&d.path("a.csv"))["config"]["seed"], 2);

    std::fs::write(d.path("bad.json"), r#"{"n": [3], "bogus": 1}"#).unwrap();
    assert_eq!(
        code(&["uniqueness", "--config", &d.s("bad.json"), "--out", &d.s("c.csv")]),
        3
    );
}

#[test]
fn guard_errors_exit_4() {
    let d = Dir::new();
    assert_eq!(
        code(&[
            "design",
            "error",
            "--sampler",
            "haar",
            "--d",
            "16",
            "--t",
            "2",
            "--out",
            &d.s("e.csv")
        ]),
        4
    );
}

#[test]
fn design_subcommands() {
    let d = Dir::new();
    assert_eq!(code(&["design", "bogus"]), 2);

    let fp = d.path("fp.csv");
    ok(&[
        "design",
        "frame-potential",
        "--sampler",
        "haar",
        "--n",
        "3",
        "--t",
        "2",
        "--pairs",
        "20000",
        "--seed",
        "5",
        "--out",
        fp.to_str().unwrap(),
    ]);
    let s = &report(&fp)["summary"];
    let (v, se) = (s["frame_potential"].as_f64().unwrap(), s["std_error"].as_f64().unwrap());
    assert!((v - 2.0).abs() <= 3.0 * se, "{v} +- {se}");

    let arc = d.path("arc.csv");
    ok(&[
        "design",
        "arc-stats",
        "--sampler",
        "haar",
        "--d",
        "128",
        "--samples",
        "200",
        "--seed",
        "5",
        "--out",
        arc.to_str().unwrap(),
    ]);
    let s = &report(&arc)["summary"];
    let sigma = (s["var_count"].as_f64().unwrap() / 200.0).sqrt();
    assert!((s["mean_count"].as_f64().unwrap() - 64.0).abs() <= 3.0 * sigma);

    let err = d.path("err.csv");
    ok(&[
        "design",
        "error",
        "--n",
        "2",
        "--k",
        "3",
        "--t",
        "1",
        "--exact",
        "--out",
        err.to_str().unwrap(),
    ]);
    let r = report(&err);
    assert!(r["summary"]["proxies"]["frobenius_moment_error"]
        .as_str()
        .unwrap()
        .contains("not a diamond norm"));
    assert_eq!(r["records"].as_array().unwrap().len(), 3);
}

#[test]
fn games_subcommands() {
    let d = Dir::new();
    let forge = d.path("f.csv");
    ok(&[
        "games",
        "forge",
        "--n",
        "3",
        "--k",
        "2",
        "--trials",
        "200",
        "--adversary",
        "exact-clone",
        "--out",
        forge.to_str().unwrap(),
    ]);
    let m = report(&forge)["records"][0]["mean_fidelity"].as_f64().unwrap();
    assert!(m >= 1.0 - 1e-9);

    let unk = d.path("u.csv");
    ok(&[
        "games",
        "unknownness",
        "--sampler",
        "haar",
        "--n",
        "2",
        "--trials",
        "2000",
        "--seed",
        "8",
        "--out",
        unk.to_str().unwrap(),
    ]);
    for rec in report(&unk)["records"].as_array().unwrap() {
        let (rate, sigma) = (rec["success_rate"].as_f64().unwrap(), rec["sigma"].as_f64().unwrap());
        assert!((rate - 0.5).abs() <= 3.0 * sigma, "{rate}");
    }

    let noise = d.path("n.csv");
    ok(&[
        "games",
        "noise-check",
        "--n",
        "2",
        "--k",
        "2",
        "--t",
        "2",
        "--sigma",
        "0",
        "--budget",
        "40",
        "--out",
        noise.to_str().unwrap(),
    ]);
    let rec = &report(&noise)["records"][0];
    assert_eq!(rec["epsilon"], rec["epsilon_noisy"]);

    // a negative tolerance makes the bound fail: assertion exit status
    assert_eq!(
        code(&[
            "games",
            "noise-check",
            "--n",
            "2",
            "--k",
            "1",
            "--t",
            "1",
            "--sigma",
            "0.05",
            "--budget",
            "20",
            "--tolerance=-1",
            "--out",
            &d.s("m.csv")
        ]),
        5
    );
}
