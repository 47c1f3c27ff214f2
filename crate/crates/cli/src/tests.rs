use std::ffi::OsString;
use std::path::PathBuf;

use serde_json::Value;

struct Output {
    code: i32,
    stdout: Vec<u8>,
    stderr: Vec<u8>,
}

impl Output {
    fn success(&self) -> bool {
        self.code == 0
    }
}

fn run(args: &[&str]) -> Output {
    let raw: Vec<OsString> = std::iter::once("grassvol").chain(args.iter().copied()).map(OsString::from).collect();
    let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
    let code = super::run(raw, &mut stdout, &mut stderr);
    Output { code, stdout, stderr }
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema").join(name);
    let value: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&value).unwrap()
}

fn assert_valid(validator: &jsonschema::Validator, value: &Value) {
    let errors: Vec<String> = validator.iter_errors(value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{value:#}");
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("grassvol-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn g42_closed_form_at_unit_radius() {
    let out = run(&["volume", "--n", "4", "--p", "2", "--q", "2", "--r", "1", "--method", "closed"]);
    assert!(out.success());
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows, vec![vec!["1", "1", "0.5", "closed", "0", ""]]);
}

#[test]
fn all_methods_are_monotone_and_consistent() {
    let out = run(&[
        "volume", "--n", "5", "--p", "2", "--q", "3", "--grid", "0:1.4142:15", "--method", "all", "--samples", "20000",
    ]);
    assert!(out.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "r,r_sq,mu,method,abs_err_est,stderr");
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 5 * 15);
    let order: Vec<&str> = rows.chunks(15).map(|c| c[0][3].as_str()).collect();
    assert_eq!(order, ["closed", "quadrature", "finite", "rmt", "mc"]);
    let mu = |row: &Vec<String>| row[2].parse::<f64>().unwrap();
    for block in rows.chunks(15) {
        assert!(block.windows(2).all(|w| mu(&w[0]) <= mu(&w[1])), "{}", block[0][3]);
    }
    for i in 0..15 {
        let exact = mu(&rows[i]);
        assert!((mu(&rows[15 + i]) - exact).abs() < 1e-8);
        assert!((mu(&rows[30 + i]) - exact).abs() < 0.05);
        assert!((mu(&rows[45 + i]) - exact).abs() < 0.1);
        let se: f64 = rows[60 + i][5].parse().unwrap();
        let se = se.max((exact * (1.0 - exact) / 20000.0).sqrt());
        assert!((mu(&rows[60 + i]) - exact).abs() <= 4.0 * se + 1e-12);
    }
}

#[test]
fn radius_beyond_range_is_invalid() {
    let out = run(&["volume", "--n", "4", "--p", "2", "--q", "2", "--r", "1.5", "--method", "quadrature"]);
    assert_eq!(out.code, 2);
    let out = run(&["volume", "--n", "4", "--p", "5", "--q", "2", "--r", "1"]);
    assert_eq!(out.code, 2);
    let out = run(&["volume", "--n", "4", "--p", "2", "--q", "2"]);
    assert_eq!(out.code, 2);
    let out = run(&["volume", "--n", "4", "--p", "2", "--q", "2", "--r", "1", "--method", "exact"]);
    assert_eq!(out.code, 2);
}

#[test]
fn unreachable_tolerance_exits_three_with_output() {
    let path = tmp("tight.csv");
    let out = run(&["volume", "--n", "4", "--p", "2", "--q", "2", "--r", "1", "--tol", "1e-30", "--out", path.to_str().unwrap()]);
    assert_eq!(out.code, 3);
    let rows = csv_rows(&std::fs::read_to_string(&path).unwrap());
    assert!((rows[0][2].parse::<f64>().unwrap() - 0.5).abs() < 1e-12);
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{}.manifest.json", path.display())).unwrap()).unwrap();
    assert_eq!(manifest["status"], "accuracy_not_achieved");
    assert_eq!(manifest["exit_code"], 3);
    assert!(manifest["achieved_tolerance"].as_f64().unwrap() > 0.0);
}

fn bound_row(args: &[&str]) -> Vec<String> {
    let out = run(args);
    assert!(out.success());
    csv_rows(&stdout(&out)).remove(0)
}

#[test]
fn packing_bounds() {
    let gv = bound_row(&["bounds", "--n", "8", "--p", "4", "--q", "4", "--delta", "1", "--bound", "gv"]);
    let bits: f64 = gv[6].parse().unwrap();
    assert!((bits - 24024f64.log2()).abs() < 1e-8);
    let gv = bound_row(&["bounds", "--n", "4", "--p", "2", "--q", "2", "--delta", "1", "--method", "closed"]);
    assert_eq!(gv[5], "2");
    let h = bound_row(&["bounds", "--n", "4", "--p", "2", "--q", "2", "--delta", "1", "--bound", "hamming"]);
    assert!((h[5].parse::<f64>().unwrap() - 512.0).abs() < 1e-4);
    let out = run(&["bounds", "--n", "5", "--p", "2", "--q", "3", "--delta", "1"]);
    assert_eq!(out.code, 2);
}

#[test]
fn distortion_rows() {
    let out = run(&["distortion", "--n", "8", "--p", "4", "--bits", "1:8", "--method", "bound"]);
    assert!(out.success());
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 8);
    let d: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(d.windows(2).all(|w| w[1] < w[0]));
    assert!(rows.iter().all(|r| r[5] == "true"));

    let out = run(&[
        "distortion", "--n", "8", "--p", "4", "--bits", "1:4", "--method", "all", "--samples", "4000", "--trials", "4",
    ]);
    assert!(out.success());
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 12);
    for i in 0..4 {
        let bound: f64 = rows[i][2].parse().unwrap();
        let random: f64 = rows[4 + i][2].parse().unwrap();
        assert_eq!(rows[4 + i][3], "random");
        assert!(random >= bound);
    }

    let out = run(&["distortion", "--n", "2", "--p", "1", "--bits", "1:2", "--method", "bound"]);
    assert!(csv_rows(&stdout(&out)).iter().all(|r| r[5] == "false"));
}

#[test]
fn hellinger_sweeps() {
    let h = |a: &str, b: &str| -> Vec<f64> {
        let out = run(&["hellinger", "--a", a, "--b", b, "--pmax", "30"]);
        assert!(out.success());
        csv_rows(&stdout(&out)).iter().map(|r| r[3].parse().unwrap()).collect()
    };
    let zero = h("0", "0");
    assert_eq!(zero.len(), 30);
    assert!(zero[29] < zero[0]);
    let three = h("3", "3");
    assert!(three[29] > zero[29]);
    assert_eq!(run(&["hellinger", "--a", "0", "--b", "0", "--pmax", "0"]).code, 2);
}

#[test]
fn json_matches_schema() {
    let output = schema("output.schema.json");
    let manifest = schema("manifest.schema.json");
    let cases: [&[&str]; 6] = [
        &["volume", "--n", "6", "--p", "3", "--q", "3", "--grid", "0:1.7:4", "--method", "all", "--samples", "2000"],
        &["volume", "--n", "9", "--p", "3", "--q", "4", "--r", "1", "--method", "all", "--samples", "100"],
        &["bounds", "--n", "6", "--p", "3", "--q", "3", "--delta", "0.8", "--bound", "hamming"],
        &["bounds", "--n", "4", "--p", "2", "--q", "2", "--delta", "0", "--method", "closed"],
        &["distortion", "--n", "4", "--p", "2", "--bits", "0:2", "--samples", "500", "--trials", "2", "--iters", "3"],
        &["hellinger", "--a", "1", "--b", "2", "--pmax", "4"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let path = tmp(&format!("schema{i}.json"));
        let mut full = args.to_vec();
        full.extend(["--json", "--out", path.to_str().unwrap()]);
        let out = run(&full);
        assert!(out.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let value: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_valid(&output, &value);
        let m: Value =
            serde_json::from_str(&std::fs::read_to_string(format!("{}.manifest.json", path.display())).unwrap()).unwrap();
        assert_valid(&manifest, &m);
    }
    // manifest on stderr when writing to stdout, also for failures
    let out = run(&["volume", "--n", "4", "--p", "2", "--q", "2", "--r", "3"]);
    let stderr = String::from_utf8(out.stderr.clone()).unwrap();
    let m: Value = serde_json::from_str(&stderr[stderr.find('{').unwrap()..]).unwrap();
    assert_valid(&manifest, &m);
    assert_eq!(m["status"], "invalid_input");
}

#[test]
fn skipped_methods_are_noted() {
    let path = tmp("skip.csv");
    let out = run(&["volume", "--n", "9", "--p", "3", "--q", "4", "--r", "1", "--method", "all", "--samples", "100", "--out", path.to_str().unwrap()]);
    assert!(out.success());
    let rows = csv_rows(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(rows.len(), 4);
    let m: Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{}.manifest.json", path.display())).unwrap()).unwrap();
    assert!(m["notes"][0].as_str().unwrap().starts_with("skipped closed"));
    let out = run(&["volume", "--n", "9", "--p", "3", "--q", "4", "--r", "1", "--method", "closed"]);
    assert_eq!(out.code, 2);
}

#[test]
fn replay_reproduces_output() {
    let first = tmp("first.csv");
    let args = [
        "distortion", "--n", "4", "--p", "2", "--bits", "1:3", "--samples", "800", "--trials", "3", "--iters", "5", "--seed", "9",
    ];
    let mut full = args.to_vec();
    full.extend(["--out", first.to_str().unwrap()]);
    assert!(run(&full).success());
    let manifest = format!("{}.manifest.json", first.display());
    let second = tmp("second.csv");
    let out = run(&["replay", &manifest, "--out", second.to_str().unwrap()]);
    assert!(out.success());
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
    let out = run(&["replay", &manifest]);
    assert_eq!(out.stdout, std::fs::read(&first).unwrap());
}

#[test]
fn threads_do_not_change_simulations() {
    let base = ["distortion", "--n", "4", "--p", "2", "--bits", "2:3", "--samples", "600", "--trials", "4", "--iters", "4"];
    let one = run(&base);
    let mut threaded = base.to_vec();
    threaded.extend(["--threads", "3"]);
    let three = run(&threaded);
    assert_eq!(one.stdout, three.stdout);
    assert_eq!(run(&["hellinger", "--a", "0", "--b", "0", "--pmax", "2", "--threads", "0"]).code, 2);
}

#[test]
fn codebooks_are_saved() {
    let path = tmp("codebooks.json");
    let out = run(&[
        "distortion", "--n", "4", "--p", "2", "--bits", "1:2", "--method", "lloyd", "--samples", "300", "--iters", "3",
        "--codebooks", path.to_str().unwrap(),
    ]);
    assert!(out.success());
    let books: Vec<grassvol::coding::Codebook> =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(books.iter().map(|b| b.len()).collect::<Vec<_>>(), [2, 4]);
    assert_eq!(books[0].seed(), Some(0));
}
