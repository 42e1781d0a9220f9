use std::path::Path;
use std::process::{Command, Output};

fn cosetcodes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cosetcodes"))
        .args(args)
        .env_remove("COSETCODES_MEMORY_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn field(json: &str, key: &str) -> String {
    let needle = format!("\"{key}\": ");
    let start = json.find(&needle).unwrap_or_else(|| panic!("no {key} in {json}")) + needle.len();
    json[start..]
        .split([',', '\n'])
        .next()
        .unwrap()
        .trim()
        .to_string()
}

#[test]
fn family_writes_matrix_and_generators() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("h3");
    let out = cosetcodes(&[
        "family", "--kind", "hs", "--s", "3", "--r", "4", "--out", prefix.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let matrix = std::fs::read_to_string(dir.path().join("h3.matrix.txt")).unwrap();
    assert!(matrix.starts_with("11 50\n"));
    assert_eq!(matrix.lines().count(), 12);
    let gens = std::fs::read_to_string(dir.path().join("h3.gens.txt")).unwrap();
    assert_eq!(gens.lines().count(), 50);
    assert!(gens.lines().all(|l| l.len() == 11));

    let hamming = cosetcodes(&["family", "--kind", "hamming", "--r", "3"]);
    assert_eq!(stdout(&hamming), "3 7\n0001111\n0110011\n1010101\n");
}

#[test]
fn small_order_needs_override() {
    let out = cosetcodes(&["family", "--kind", "h2", "--r", "3"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("below 4"));
    let out = cosetcodes(&["family", "--kind", "h2", "--r", "3", "--allow-small-r"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("5 10\n"));
}

#[test]
fn report_values() {
    let h2 = stdout(&cosetcodes(&["report", "--kind", "h2", "--r", "4"]));
    assert_eq!(field(&h2, "N"), "64");
    assert_eq!(field(&h2, "rank"), "18");
    assert_eq!((field(&h2, "rate_num"), field(&h2, "rate_den")), ("23".into(), "32".into()));
    assert_eq!(field(&h2, "bound_met"), "false");

    let zero = stdout(&cosetcodes(&["report", "--kind", "zero-code", "--r", "5"]));
    assert_eq!(field(&zero, "rank"), "16");
    assert_eq!(field(&zero, "s"), "null");
    let rep = stdout(&cosetcodes(&["report", "--kind", "repetition", "--r", "6"]));
    assert_eq!(field(&rep, "rank"), "28");
    assert_eq!(field(&rep, "bound_met"), "true");

    let csv = stdout(&cosetcodes(&["report", "--kind", "h3", "--r", "4", "--format", "csv"]));
    assert_eq!(csv.lines().nth(1).unwrap(), "h3,3,4,2048,380,1668,417,512,1668,true,true,25,32,true");
}

#[test]
fn sweep_default_grid_meets_the_bound() {
    let out = cosetcodes(&["sweep"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
    assert!(rows[0].starts_with("hs,2,4,64,"));
    assert!(rows[9].starts_with("hs,3,8,524288,"));
}

#[test]
fn empty_sweep_is_a_header() {
    let out = cosetcodes(&["sweep", "--r"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 1);
    let json = cosetcodes(&["sweep", "--s", "--format", "json"]);
    assert_eq!(stdout(&json).trim(), "[]");
}

#[test]
fn verify_passes_and_catches_a_mutant() {
    let out = cosetcodes(&["verify", "--cases", "40"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for suite in ["permring", "reassembly", "graph", "storage"] {
        assert!(text.lines().any(|l| l.starts_with(suite)), "{suite} missing in {text}");
    }
    assert!(!text.contains("FAIL"));

    let mutant = cosetcodes(&["verify", "--suite", "reassembly", "--mutant", "--cases", "5"]);
    assert_eq!(mutant.status.code(), Some(1));
    assert!(stdout(&mutant).contains("FAIL"));

    let perm = cosetcodes(&["verify", "--suite", "permring", "--r", "4", "--cases", "10"]);
    assert!(perm.status.success());
    let line = stdout(&perm);
    // 256 exhaustive products over F^4 plus five checks per random case.
    assert_eq!(line.trim(), "permring: 306/306 passed");
}

#[test]
fn guess_reports_exact_success_probability() {
    let out = cosetcodes(&["guess", "--kind", "zero-code", "--r", "3", "--trials", "5000"]);
    assert!(out.status.success());
    let json = stdout(&out);
    assert_eq!(field(&json, "mismatches"), "0");
    assert_eq!((field(&json, "p_s_num"), field(&json, "p_s_den")), ("1".into(), "16".into()));
    assert!(!cosetcodes(&["guess", "--kind", "zero-code", "--r", "3", "--trials", "0"]).status.success());
}

#[test]
fn memory_cap_is_enforced() {
    let out = cosetcodes(&[
        "--memory-cap", "1M", "report", "--kind", "h3", "--r", "5", "--method", "dense",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("capacity"));

    let env = Command::new(env!("CARGO_BIN_EXE_cosetcodes"))
        .args(["report", "--kind", "h3", "--r", "5", "--method", "dense"])
        .env("COSETCODES_MEMORY_CAP", "1M")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(2));

    // The block-reduced rank needs no dense matrix.
    let auto = cosetcodes(&["--memory-cap", "1M", "report", "--kind", "h3", "--r", "5"]);
    assert!(auto.status.success());
    assert_eq!(field(&stdout(&auto), "rank"), "1276");
    assert!(!cosetcodes(&["--memory-cap", "0", "sweep", "--r"]).status.success());
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let path = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let path_str = path.to_str().unwrap().to_string();
    full.extend(["--out", &path_str]);
    assert!(cosetcodes(&full).status.success());
    std::fs::read(path).unwrap()
}

#[test]
fn identical_configs_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let configs: [&[&str]; 3] = [
        &["sweep", "--s", "2,3", "--r", "4,5", "--format", "json"],
        &["report", "--kind", "hs", "--s", "3", "--r", "5", "--format", "csv"],
        &["guess", "--kind", "h2", "--r", "4", "--trials", "2000", "--seed", "9"],
    ];
    for (i, args) in configs.iter().enumerate() {
        let a = run_to(dir.path(), &format!("a{i}"), args);
        let b = run_to(dir.path(), &format!("b{i}"), args);
        assert!(!a.is_empty());
        assert_eq!(a, b, "config {args:?}");
    }
}
