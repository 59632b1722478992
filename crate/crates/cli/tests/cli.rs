use assert_cmd::Command;
use serde_json::Value;

fn hpfg() -> Command {
    let mut c = Command::cargo_bin("hpfg").unwrap();
    c.env_remove("HPFG_SEED");
    c
}

fn stdout_of(args: &[&str]) -> String {
    let out = hpfg().args(args).assert().success().get_output().stdout.clone();
    String::from_utf8(out).unwrap()
}

#[test]
fn solve_json_golden() {
    let out = stdout_of(&["solve", "--degree", "2", "--p", "5", "--x", "1,2", "--w", "0,4", "--format", "json"]);
    let doc: Value = serde_json::from_str(&out).unwrap();
    let row = &doc["results"][0];
    assert_eq!(row["eta"], 2);
    assert_eq!(row["solutions"], serde_json::json!([[1, 2], [4, 3]]));
    assert!(doc["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    assert_eq!(doc["config"]["seed"], 0);
}

#[test]
fn success_csv_golden() {
    let out = stdout_of(&["success", "--degree", "2", "--p", "5,7,11", "--mode", "paper_restricted", "--format", "csv"]);
    let expected = "\
p,n,k,mode,success,paper_bound,seed,version
5,2,2,paper_restricted,0.28141160159,0.1728,0,0.1.0
7,2,2,paper_restricted,0.343422924293,0.199916701374,0,0.1.0
11,2,2,paper_restricted,0.40043659628,0.221296359538,0,0.1.0
";
    assert_eq!(out, expected);
}

#[test]
fn verify_command_small() {
    let out = stdout_of(&["verify-appendix", "--p", "7"]);
    let mut lines = out.lines();
    let header: Vec<_> = lines.next().unwrap().split(',').collect();
    let row: Vec<_> = lines.next().unwrap().split(',').collect();
    let col = |name| row[header.iter().position(|h| *h == name).unwrap()];
    assert_eq!(col("instances"), "16807");
    assert_eq!(col("mismatches"), "0");
    assert_eq!(col("cap_violations"), "0");
}

#[test]
fn verify_eta_reports_small_maxima() {
    let out = stdout_of(&["verify-eta", "--p", "7,11"]);
    assert!(out.contains("\n7,3,3,full,10,6,"));
    assert!(out.contains("\n11,3,3,full,50,4,"));
}

#[test]
fn bounds_table() {
    let out = stdout_of(&["bounds", "--p", "17", "--degree", "2"]);
    let row = out.lines().nth(1).unwrap();
    assert!(row.starts_with("17,2,2,full,1,0.5,2,12,2,"), "{row}");
}

#[test]
fn seed_from_environment() {
    let out = hpfg()
        .env("HPFG_SEED", "41")
        .args(["collision", "--p", "5", "--exhaustive"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let text = String::from_utf8(out).unwrap();
    assert!(text.lines().nth(1).unwrap().ends_with(",41,0.1.0"));
}

#[test]
fn exhaustive_collision_is_one_fifth() {
    let out = stdout_of(&["collision", "--p", "5", "--exhaustive", "--format", "json"]);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["results"][0]["trials"], 500);
    assert_eq!(doc["results"][0]["collisions"], 100);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    hpfg()
        .args(["success", "--degree", "3", "--p", "7", "--output"])
        .arg(&path)
        .assert()
        .success()
        .stdout("");
    let file = std::fs::read_to_string(&path).unwrap();
    assert_eq!(file, stdout_of(&["success", "--degree", "3", "--p", "7"]));
}

#[test]
fn invalid_prime_is_config_error() {
    let out = hpfg()
        .args(["success", "--p", "9"])
        .assert()
        .code(2)
        .get_output()
        .stderr
        .clone();
    let err: Value = serde_json::from_str(String::from_utf8(out).unwrap().trim()).unwrap();
    assert_eq!(err["error"], "invalid_config");
    assert_eq!(err["exit_code"], 2);
}

#[test]
fn guard_exit_code() {
    hpfg()
        .args(["simulate", "--p", "11", "--degree", "2"])
        .assert()
        .code(4);
    hpfg()
        .args(["collision", "--p", "101", "--exhaustive"])
        .assert()
        .code(4);
}

#[test]
fn unwritable_output() {
    hpfg()
        .args(["bounds", "--p", "17", "--output", "/nonexistent-dir/out.csv"])
        .assert()
        .code(2);
}

#[test]
fn failed_check_exit_code() {
    // a single trial that happens to collide sits ten sigma above 1/p
    let out = hpfg()
        .args(["collision", "--p", "101", "--trials", "1", "--seed", "32"])
        .assert()
        .code(3)
        .get_output()
        .clone();
    assert!(String::from_utf8(out.stdout).unwrap().contains(",1,1,1,"));
    let err: Value = serde_json::from_str(String::from_utf8(out.stderr).unwrap().trim()).unwrap();
    assert_eq!(err["error"], "check_failed");
    assert_eq!(err["exit_code"], 3);
}

#[test]
fn simulate_passes_at_small_primes() {
    stdout_of(&["simulate", "--p", "3", "--degree", "2"]);
    stdout_of(&["simulate", "--p", "3", "--degree", "3", "--q", "1,2,0"]);
}

#[test]
fn fidelity_single_pair() {
    let out = stdout_of(&["fidelity", "--p", "5", "--q", "1,1", "--q-tilde", "2,1", "--format", "json"]);
    let doc: Value = serde_json::from_str(&out).unwrap();
    let f = doc["results"][0]["fidelity"].as_f64().unwrap();
    assert!((f - 0.2).abs() < 1e-12);
}

#[test]
fn transcript_rows() {
    let out = stdout_of(&["end-to-end", "--p", "7", "--repetitions", "20", "--transcript"]);
    assert_eq!(out.lines().count(), 21);
    assert!(out.starts_with("p,n,k,mode,repetition,x,q_hat,success,seed,version\n"));
}
