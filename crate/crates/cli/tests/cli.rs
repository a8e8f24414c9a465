use std::process::{Command, Output};

use pvsft_core::ftsolver::FTMatrix;
use serde_json::Value;

fn pvsft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pvsft"))
        .args(args)
        .env_remove("PVSFT_THREADS")
        .env_remove("PVSFT_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn oracle_json_for_binary_quadratics() {
    let o = pvsft(&[
        "ft", "--rep", "sym2-2", "--q", "3", "--method", "oracle", "--format", "json",
    ]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let want = [
        ["1", "8", "12", "6"],
        ["1", "-1", "3", "-3"],
        ["1", "2", "-3", "0"],
        ["1", "-4", "0", "3"],
    ];
    assert_eq!(v["matrix_scaled"], serde_json::json!(want));
    // the alias gives the same bytes
    let alias = pvsft(&["oracle", "--rep", "sym2-2", "--q", "3", "--format", "json"]);
    assert_eq!(alias.stdout, o.stdout);
}

#[test]
fn json_output_round_trips() {
    for method in ["subspace", "table"] {
        let o = pvsft(&[
            "ft", "--rep", "sym3-2", "--q", "7", "--method", method, "--format", "json",
        ]);
        assert!(o.status.success());
        let text = stdout(&o);
        let m = FTMatrix::from_json(&text).unwrap();
        assert_eq!(format!("{}\n", m.to_json()), text);
    }
}

#[test]
fn orbit_listing_sizes() {
    let o = pvsft(&["orbits", "--rep", "sym2-3", "--q", "5", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let sizes: Vec<u64> = v["orbits"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["size"].as_str().unwrap().parse().unwrap())
        .collect();
    // evaluated from the descriptor polynomials; they must fill F_5^6
    let d = pvsft_core::reps::RepKind::Sym23.descriptor();
    let want: Vec<u64> = d
        .sizes
        .iter()
        .map(|p| p.eval_int(5).to_string().parse().unwrap())
        .collect();
    assert_eq!(sizes, want);
    assert_eq!(sizes.iter().sum::<u64>(), 5u64.pow(6));
}

#[test]
fn bad_prime_is_an_error() {
    let o = pvsft(&["orbits", "--rep", "sym3-2", "--q", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let err: Value = serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).unwrap();
    assert_eq!(err["status"], "error");
    assert!(err["error"].as_str().unwrap().contains("bad prime"));
}

#[test]
fn quartic_census() {
    let o = pvsft(&["orbits", "--rep", "2sym2-3", "--q", "3", "--verify-census"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("census OK: 20 orbits matched, total 531441"));
}

#[test]
fn verify_battery_passes() {
    let o = pvsft(&["verify", "--rep", "2sym2-3", "--q", "3", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["status"] == "pass"));
    assert!(checks.iter().any(|c| c["name"] == "oracle character sums"));
    for (rep, q) in [("sym3-2", "5"), ("sym2-2", "7"), ("sym2-3", "3"), ("2sym2-2", "5")] {
        let o = pvsft(&["verify", "--rep", rep, "--q", q]);
        assert!(o.status.success(), "{rep} q={q}: {}", stdout(&o));
        assert!(!stdout(&o).contains("FAIL"));
    }
}

#[test]
fn symbolic_latex_has_both_classes() {
    let o = pvsft(&["symbolic", "--rep", "sym3-2", "--format", "latex"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.matches("\\begin{bmatrix}").count(), 2);
    assert!(text.contains("(q = 1 mod 3)"));
    assert!(text.contains("(q = 2 mod 3)"));
}

#[test]
fn symbolic_with_primes_from_one_class() {
    let o = pvsft(&[
        "symbolic",
        "--rep",
        "sym2-2",
        "--primes",
        "3,5,7,11,13",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
    let mixed = pvsft(&["symbolic", "--rep", "sym3-2", "--primes", "5,7,11,13,17,19"]);
    assert_eq!(mixed.status.code(), Some(2));
    // too few samples for the holdout
    let short = pvsft(&["symbolic", "--rep", "sym2-2", "--primes", "3,5,7"]);
    assert_eq!(short.status.code(), Some(2));
}

#[test]
fn counts_mask_against_closed_form() {
    let o = pvsft(&[
        "counts", "--rep", "2sym2-2", "--q", "5", "--mask", "001|011", "--format", "json",
    ]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["matches_formula"], true);
    assert_eq!(v["mask"], "00*|0**");
    assert_eq!(v["formula_entry"], "W12");
    let counts: u64 = v["counts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_u64().unwrap())
        .sum();
    assert_eq!(counts, 5u64.pow(3));
    let table = pvsft(&["counts", "--rep", "sym2-2", "--q", "9", "--format", "csv"]);
    assert!(table.status.success());
    assert!(stdout(&table).starts_with("subspace,orbit,polynomial,value"));
}

#[test]
fn budget_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_pvsft"))
        .args(["orbits", "--rep", "sym2-3", "--q", "5", "--verify-census"])
        .env("PVSFT_BUDGET", "1000")
        .env("PVSFT_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn writes_to_out_file() {
    let dir = std::env::temp_dir().join(format!("pvsft-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("m.csv");
    let o = pvsft(&[
        "ft",
        "--rep",
        "sym2-2",
        "--q",
        "5",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 17);
    std::fs::remove_dir_all(&dir).unwrap();
}
