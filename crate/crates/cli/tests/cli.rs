use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use paulilie::{CliffordLayer, DerivationTree, Term};
use serde_json::Value;
use tempfile::TempDir;

fn paulilie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paulilie"))
        .args(args)
        .env_remove("PAULILIE_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

#[test]
fn classify_reports_and_exit_codes() {
    let dir = TempDir::new().unwrap();
    let ghz = write(
        &dir,
        "ghz.ham",
        "# GHZ projector, identity dropped\n1 III\n1 ZZI\n1 ZIZ\n1 IZZ\n-1 XYY\n-1 YXY\n-1 YYX\n",
    );
    let out = paulilie(&["classify", s(&ghz)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("Universal"));

    let xxx = write(&dir, "xxx.ham", "1.0 XXX\n");
    let out = paulilie(&["classify", s(&xxx)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).starts_with("OddEntangling, sp(8), dim 36"));

    let dis = write(&dir, "disconnected.ham", "qubits: 4\n1 XXII\n0.5 IIZY\n");
    let out = paulilie(&["classify", s(&dis)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("components {1,2} {3,4}"));
    let v = json(&paulilie(&["classify", "--json", s(&dis)]));
    assert_eq!(v["classification"]["class"], "NotEntangling");
    assert_eq!(v["components"], serde_json::json!([[0, 1], [2, 3]]));
}

#[test]
fn parse_errors_exit_one_with_position() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.ham", "1.0 XXI\n1.0 XQI\n");
    let out = paulilie(&["classify", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2, column 6"), "{err}");
    let out = paulilie(&["classify", s(&dir.path().join("missing.ham"))]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn closure_dump() {
    let dir = TempDir::new().unwrap();
    let xxx = write(&dir, "xxx.ham", "1 XXX\n");
    let v = json(&paulilie(&["closure", "--json", "--dump", s(&xxx)]));
    assert_eq!(v["dimension"], 36);
    assert_eq!(v["algebra"]["kind"], "odd");
    assert_eq!(v["weight_histogram"], serde_json::json!([0, 9, 0, 27]));
    assert_eq!(v["elements"].as_array().unwrap().len(), 36);
    let v = json(&paulilie(&["closure", "--json", "--no-locals", s(&xxx)]));
    assert_eq!(v["dimension"], 1);
}

#[test]
fn deterministic_isolation_scale() {
    let dir = TempDir::new().unwrap();
    let h = write(&dir, "xxi_ixx.ham", "1.0 XXI\n1.0 IXX\n");
    let out = paulilie(&["isolate", s(&h), "--term", "0", "--method", "det"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("scale 32"));
    let v = json(&paulilie(&["isolate", "--json", s(&h), "--term", "XXI"]));
    assert_eq!(v["schedule"]["scale"], 32.0);
    assert_eq!(v["schedule"]["layers"].as_array().unwrap().len(), 5);
    assert_eq!(v["result"], serde_json::json!([{ "coefficient": 32.0, "pauli": "ZZI" }]));
    let out = paulilie(&["isolate", s(&h), "--term", "ZZZ"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn randomized_runs_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let h = write(&dir, "h.ham", "1 XXI\n1 IXX\n-0.5 ZIZ\n");
    let out_file = dir.path().join("run.json");
    let args = ["isolate", s(&h), "--term", "1", "--method", "rand", "--m", "5", "--seed", "11"];
    let a = paulilie(&args);
    let mut with_output = args.to_vec();
    with_output.extend(["--output", s(&out_file)]);
    let b = paulilie(&with_output);
    assert_eq!(a.stdout, b.stdout);
    let written: Value = serde_json::from_slice(&std::fs::read(&out_file).unwrap()).unwrap();
    assert_eq!(written["seed"], 11);
    assert_eq!(written["schedule"]["layers"].as_array().unwrap().len(), 5);

    let v = json(&paulilie(&["isolate", "--json", s(&h), "--term", "1", "--method", "rand"]));
    assert!(v["seed"].is_u64(), "generated seed is recorded");
}

#[test]
fn sweep_csv_is_deterministic() {
    let args = ["sweep", "--family", "chain", "--n", "6,8", "--m", "2,4", "--trials", "200", "--seed", "7"];
    let a = paulilie(&args);
    assert_eq!(a.status.code(), Some(0));
    let b = Command::new(env!("CARGO_BIN_EXE_paulilie"))
        .args(args)
        .env("PAULILIE_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,N,m,trials,failures,bound,failure_rate,acceptance_rate,seed"));
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0][..4], ["6", "9", "2", "200"]);
    assert_eq!(rows[0][5], "2.25");
    assert_eq!(rows[3][..4], ["8", "13", "4", "200"]);

    let v = paulilie(&["sweep", "--family", "subsets", "--n", "4", "--m", "3", "--trials", "10"]);
    let text = stdout(&v);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[1], "11");
    assert!(row[8].parse::<u64>().is_ok());
}

#[test]
fn verify_exact_and_trotterized() {
    let dir = TempDir::new().unwrap();
    let exact = DerivationTree::rescale(
        DerivationTree::conjugate(
            DerivationTree::given(Term::new(1.0, "XZ".parse().unwrap()).unwrap()),
            CliffordLayer::from_pauli(&"YI".parse().unwrap()),
        )
        .unwrap(),
        2.0,
    )
    .unwrap();
    let exact_path = write(&dir, "exact.json", &exact.to_json());
    let out = paulilie(&["verify", "--derivation", s(&exact_path), "--time", "0.3", "--delta", "0.05"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let err: f64 = text.lines().nth(1).unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!(err <= 1e-9);

    let h = write(&dir, "xxi_ixx.ham", "1.0 XXI\n1.0 IXX\n");
    let tree = dir.path().join("xxx.json");
    let out = paulilie(&["synthesize", s(&h), "--target", "XXX", "--dump-tree", s(&tree)]);
    assert_eq!(out.status.code(), Some(0));
    let out = paulilie(&[
        "verify",
        "--derivation",
        s(&tree),
        "--time",
        "0.1",
        "--delta",
        "0.1",
        "--cycle-delta",
        "0.05",
        "--ladder",
        "3",
    ]);
    let errors: Vec<f64> = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(errors.len(), 3);
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
}

#[test]
fn synthesize_routes() {
    let dir = TempDir::new().unwrap();
    let h = write(&dir, "h.ham", "1 ZZZII\n1 IIZZZ\n");
    let v = json(&paulilie(&["synthesize", "--json", s(&h), "--target", "ZIIZZ"]));
    assert_eq!(v["route"], "odd");
    assert_eq!(v["result"][0]["pauli"], "ZIIZZ");
    assert!(v["result"][0]["coefficient"].as_f64().unwrap() > 0.0);
    let v = json(&paulilie(&["synthesize", "--json", s(&h), "--target", "ZIIZ", "--encoded"]));
    assert_eq!(v["route"], "encoded");
    assert_eq!(v["extended_target"], "ZIIZZ");
    assert_eq!(v["ancilla"], 4);
    assert_eq!(v["ancilla_state"], "|0>");
    let out = paulilie(&["synthesize", s(&h), "--target", "ZZIII"]);
    assert_eq!(out.status.code(), Some(1));
}
