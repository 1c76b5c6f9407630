use std::path::{Path, PathBuf};

use serde_json::Value;
use tftwb::cli::{run, Outcome, EXIT_INVALID, EXIT_USAGE};

const QX2: &str =
    r#"{"dim": 2, "mult": [[["1","0"],["0","1"]],[["0","1"],["0","0"]]], "unit": ["1","0"], "counit": ["0","1"]}"#;
const KXX: &str = r#"{"vars": ["x"], "rank": [1,1], "D": [["0","x"],["x","0"]], "c": "0", "w": "x^2"}"#;
const SL2: &str = r#"{"basis": [{"name": "e", "degree": 0}, {"name": "f", "degree": 0}, {"name": "h", "degree": 0}],
  "d": [],
  "bracket": [[0, 1, 2, "1"], [1, 0, 2, "-1"], [2, 0, 0, "2"], [0, 2, 0, "-2"], [2, 1, 1, "-2"], [1, 2, 1, "2"]]}"#;
/// sl2 ⊗ (1, ξ) with ξ odd: the odd part is a copy of sl2 with zero bracket.
const SL2_XI: &str = r#"{"basis": [{"name": "e", "degree": 0}, {"name": "f", "degree": 0}, {"name": "h", "degree": 0},
  {"name": "e*xi", "degree": 1}, {"name": "f*xi", "degree": 1}, {"name": "h*xi", "degree": 1}],
  "d": [],
  "bracket": [[0, 1, 2, "1"], [1, 0, 2, "-1"], [2, 0, 0, "2"], [0, 2, 0, "-2"], [2, 1, 1, "-2"], [1, 2, 1, "2"],
              [0, 4, 5, "1"], [4, 0, 5, "-1"], [2, 3, 3, "2"], [3, 2, 3, "-2"], [2, 4, 4, "-2"], [4, 2, 4, "2"],
              [3, 1, 5, "1"], [1, 3, 5, "-1"], [5, 0, 3, "2"], [0, 5, 3, "-2"], [5, 1, 4, "-2"], [1, 5, 4, "2"]]}"#;
const SO3: &str = r#"{"vars": ["x1", "x2", "x3"],
  "terms": [{"theta": [1, 2], "coef": "x1"}, {"theta": [2, 0], "coef": "x2"}, {"theta": [0, 1], "coef": "x3"}]}"#;

struct Dir(tempfile::TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn file(&self, name: &str, text: &str) -> String {
        let p = self.0.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.display().to_string()
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }
}

fn tftwb(args: &[&str]) -> Outcome {
    run(std::iter::once("tftwb").chain(args.iter().copied()))
}

fn ok(args: &[&str]) -> Value {
    let out = tftwb(args);
    assert_eq!(out.code, 0, "{args:?}: {}{}", out.stdout, out.stderr);
    let report: Value = serde_json::from_str(&out.stdout).unwrap();
    report["result"].clone()
}

fn failing(args: &[&str], code: i32) -> Value {
    let out = tftwb(args);
    assert_eq!(out.code, code, "{args:?}: {}{}", out.stdout, out.stderr);
    serde_json::from_str(&out.stdout).unwrap_or(Value::Null)
}

#[test]
fn torus_on_dual_numbers() {
    let d = Dir::new();
    let a = d.file("qx2.json", QX2);
    let r = ok(&["eval", "--algebra", &a, "--word", "up ; down"]);
    assert_eq!(r["matrix"], serde_json::json!([["2"]]));
    let w = d.file("word.txt", "up;\n down\n");
    assert_eq!(
        ok(&["eval", "--algebra", &a, "--word", &w])["matrix"],
        serde_json::json!([["2"]])
    );
}

#[test]
fn move_checks_need_a_seed() {
    let d = Dir::new();
    let a = d.file("qx2.json", QX2);
    failing(
        &["eval", "--algebra", &a, "--word", "up ; down", "--check-moves", "3"],
        EXIT_USAGE,
    );
    let r = ok(&[
        "eval",
        "--algebra",
        &a,
        "--word",
        "up ; down",
        "--check-moves",
        "25",
        "--seed",
        "9",
    ]);
    assert_eq!(r["all_equal"], Value::Bool(true));
    assert_eq!(r["decompositions_checked"], 25);
}

#[test]
fn bad_words_report_the_layer() {
    let d = Dir::new();
    let a = d.file("qx2.json", QX2);
    let e = failing(&["eval", "--algebra", &a, "--word", "pants ; pants"], EXIT_INVALID);
    assert_eq!(e["error"]["kind"], "bordism");
    assert!(e["error"]["witness"].as_str().unwrap().contains("layer: 2"));
}

#[test]
fn koszul_endomorphisms() {
    let d = Dir::new();
    let k = d.file("kxx.json", KXX);
    let r = ok(&["mf", "hom", "--a", &k, "--b", &k, "--trunc", "8"]);
    assert_eq!(r["dims"], serde_json::json!({"even": 1, "odd": 1, "stabilized": true}));
}

#[test]
fn truncation_default_from_environment() {
    let d = Dir::new();
    let k = d.file("kxx.json", KXX);
    std::env::set_var("TFTWB_TRUNC_DEFAULT", "5");
    let r = ok(&["mf", "hom", "--a", &k, "--b", &k]);
    std::env::remove_var("TFTWB_TRUNC_DEFAULT");
    assert_eq!(r["truncation"], 5);
    assert_eq!(ok(&["mf", "hom", "--a", &k, "--b", &k])["truncation"], 8);
}

#[test]
fn tensor_writes_a_valid_document() {
    let d = Dir::new();
    let k = d.file("kxx.json", KXX);
    let out = d.path("t.json");
    let out_s = out.display().to_string();
    let r = ok(&["mf", "tensor", "--a", &k, "--b", &k, "-o", &out_s]);
    assert_eq!(r["rank"], serde_json::json!([2, 2]));
    assert_eq!(r["w"], "2*x^2");
    let checked = ok(&["mf", "check", &out_s]);
    assert_eq!(checked["valid"], Value::Bool(true));
    let text = std::fs::read_to_string(Path::new(&out)).unwrap();
    let again = tftwb::doc::mf_to_json(&tftwb::doc::mf_from_json(&text).unwrap().build().unwrap());
    assert_eq!(text, again);
}

#[test]
fn schema_and_validation_errors_exit_2() {
    let d = Dir::new();
    let bad = d.file("bad.json", &KXX.replace(r#""c": "0""#, r#""c": "1/0""#));
    let e = failing(&["mf", "check", &bad], EXIT_INVALID);
    assert_eq!(e["error"]["kind"], "schema");
    let wrong = d.file("wrong.json", &KXX.replace("x^2", "x^3"));
    assert_eq!(
        failing(&["mf", "check", &wrong], EXIT_INVALID)["error"]["kind"],
        "mfcat"
    );
    let missing = d.path("nope.json").display().to_string();
    assert_eq!(failing(&["mf", "check", &missing], EXIT_INVALID)["error"]["kind"], "io");
    failing(&["mf", "frobnicate"], EXIT_USAGE);
    failing(&[], EXIT_USAGE);
}

#[test]
fn maurer_cartan_commands() {
    let d = Dir::new();
    let m = d.file("sl2xi.json", SL2_XI);
    // β = e⊗ξ + f⊗ξ: [β, β] = 0 since ξ² = 0, so β solves the equation.
    let beta = d.file("beta.json", r#"{"coeffs": ["0","0","0","1","1","0"]}"#);
    let r = ok(&["mc", "check", "--model", &m, "--beta", &beta]);
    assert_eq!(r["is_solution"], Value::Bool(true));
    let a = d.file("a.json", r#"{"coeffs": ["0","0","1","0","0","0"]}"#);
    let g = ok(&["mc", "gauge", "--model", &m, "--beta", &beta, "--a", &a]);
    assert_eq!(g["covariant"], Value::Bool(true));
    // [e⊗ξ + f⊗ξ, h] = -2 e⊗ξ + 2 f⊗ξ
    assert_eq!(g["gauged"]["eps"], serde_json::json!(["0", "0", "0", "-2", "2", "0"]));
    let odd_a = d.file("odd.json", r#"{"coeffs": ["0","0","0","1","0","0"]}"#);
    let e = failing(
        &["mc", "gauge", "--model", &m, "--beta", &beta, "--a", &odd_a],
        EXIT_INVALID,
    );
    assert_eq!(e["error"]["kind"], "deformation");
}

#[test]
fn invalid_dgla_reports_failing_indices() {
    let d = Dir::new();
    let flipped = SL2.replace(
        r#"[2, 0, 0, "2"], [0, 2, 0, "-2"]"#,
        r#"[2, 0, 0, "-2"], [0, 2, 0, "2"]"#,
    );
    let m = d.file("bad.json", &flipped);
    let beta = d.file("beta.json", r#"{"coeffs": ["0","0","0"]}"#);
    let e = failing(&["mc", "check", "--model", &m, "--beta", &beta], EXIT_INVALID);
    assert!(e["error"]["witness"].as_str().unwrap().starts_with("JacobiFailure"));
}

#[test]
fn degree3_and_schouten() {
    let r = ok(&["mc", "degree3", "--symt", "m=1,p=4,deg=6,charts=2"]);
    assert_eq!(r["degree3"], 0);
    failing(&["mc", "degree3", "--symt", "m=1,p=4"], EXIT_USAGE);
    let d = Dir::new();
    let p = d.file("so3.json", SO3);
    let r = ok(&["mc", "schouten", "--p", &p]);
    assert_eq!(r["poisson"], Value::Bool(true));
    let bad = d.file(
        "bad.json",
        r#"{"vars": ["x1","x2","x3"], "terms": [{"theta": [0,1], "coef": "x2"}, {"theta": [1,2], "coef": "1"}]}"#,
    );
    let r = ok(&["mc", "schouten", "--p", &bad]);
    assert_eq!(r["poisson"], Value::Bool(false));
    let v = d.file(
        "v.json",
        r#"{"vars": ["x1","x2","x3"], "terms": [{"theta": [0], "coef": "x1"}]}"#,
    );
    let w = d.file(
        "w.json",
        r#"{"vars": ["x1","x2","x3"], "terms": [{"theta": [1], "coef": "x1 x2"}]}"#,
    );
    let r = ok(&["mc", "schouten", "--p", &v, "--q", &w]);
    assert_eq!(
        r["bracket"]["terms"],
        serde_json::json!([{"theta": [1], "coef": "x1*x2"}])
    );
}

#[test]
fn state_spaces() {
    let r = ok(&[
        "states",
        "--dim",
        "2",
        "--hodge",
        "1,2,1",
        "--trivial-tangent",
        "--genus",
        "1",
    ]);
    assert_eq!(r["total"], "16");
    let d = Dir::new();
    let t = d.file(
        "t.json",
        r#"{"dim": 1, "hodge": [1, 1], "table": [{"p": 0, "genus": 0, "dim": 1}, {"p": 1, "genus": 0, "dim": 1}]}"#,
    );
    assert_eq!(ok(&["states", "--table", &t, "--genus", "0"])["total"], "2");
    let e = failing(&["states", "--table", &t, "--genus", "1"], EXIT_INVALID);
    assert!(e["error"]["witness"].as_str().unwrap().contains("MissingData"));
    failing(&["states", "--genus", "1"], EXIT_USAGE);
    failing(
        &["states", "--dim", "2", "--hodge", "1,2", "--genus", "1"],
        EXIT_INVALID,
    );
}

#[test]
fn reports_are_deterministic_unless_timed() {
    let d = Dir::new();
    let k = d.file("kxx.json", KXX);
    let args = ["mf", "hom", "--a", &k, "--b", &k, "--trunc", "4"];
    assert_eq!(tftwb(&args), tftwb(&args));
    let timed: Value = serde_json::from_str(&tftwb(&["--timing", "mf", "check", &k]).stdout).unwrap();
    assert!(timed["timing_ms"].is_u64());
    let plain: Value = serde_json::from_str(&tftwb(&["mf", "check", &k]).stdout).unwrap();
    assert!(plain.get("timing_ms").is_none());
    assert_eq!(plain["inputs_digest"].as_str().unwrap().len(), 64);
}
