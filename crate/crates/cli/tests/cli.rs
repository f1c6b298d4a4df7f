use std::fs;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kneser-sandpile"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const PETERSEN_JSON: &str = r#"[
  {
    "n": 5,
    "computed_factors": [
      2,
      10,
      10,
      10
    ],
    "predicted_factors": [
      2,
      10,
      10,
      10
    ],
    "order": 2000,
    "spanning_trees": 2000,
    "per_prime": [
      {
        "p": 2,
        "branch": "Case 3c, a=2",
        "computed_e": [
          5,
          4
        ],
        "predicted_e": [
          5,
          4
        ],
        "mdim_ok": true,
        "eigenbound_ok": true
      },
      {
        "p": 5,
        "branch": "Case 1a, a=1",
        "computed_e": [
          6,
          3
        ],
        "predicted_e": [
          6,
          3
        ],
        "mdim_ok": true,
        "eigenbound_ok": true
      }
    ],
    "status": "pass"
  }
]
"#;

#[test]
fn verify_petersen_golden() {
    let o = bin(&["verify", "5", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), PETERSEN_JSON);
}

#[test]
fn verify_range_passes_and_is_deterministic() {
    let a = bin(&["verify", "5", "10", "--format", "json", "--jobs", "1"]);
    let b = bin(&["verify", "5", "10", "--format", "json", "--jobs", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let reports: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 6);
    for (r, n) in reports.iter().zip(5..) {
        assert_eq!(r["n"], n);
        assert_eq!(r["status"], "pass");
        assert!(r.get("timings").is_none());
    }

    let c1 = bin(&["verify", "5", "7", "--format", "csv", "--jobs", "1"]);
    let c2 = bin(&["verify", "5", "7", "--format", "csv", "--jobs", "3"]);
    assert_eq!(c1.stdout, c2.stdout);
    let csv = stdout(&c1);
    assert!(csv
        .starts_with("n,status,order,spanning_trees,computed_factors,predicted_factors,p,branch,"));
    assert!(csv.contains("6,pass,7688671875,7688671875,5 5 5 15 45 45 45 45,5 5 5 15 45 45 45 45,3,Case 2f,9 1 4,9 1 4,true,true"));
}

#[test]
fn timings_are_opt_in() {
    let o = bin(&["verify", "5", "5", "--format", "json", "--timings"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v[0]["timings"]["snf_ms"].is_number());
}

#[test]
fn verify_rejects_small_n() {
    let o = bin(&["verify", "4", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert_eq!(bin(&["verify", "8", "6"]).status.code(), Some(2));
    assert_eq!(bin(&["verify", "five", "6"]).status.code(), Some(2));
}

#[test]
fn group_examples() {
    let o = bin(&["group", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("invariant factors: trivial"));
    assert!(s.contains("free rank: 3"));
    assert!(s.contains("spanning trees: 0"));

    let s = stdout(&bin(&["group", "5"]));
    assert!(s.contains("invariant factors: 2 10 10 10"));
    assert!(s.contains("spanning trees: 2000"));

    let v: serde_json::Value =
        serde_json::from_slice(&bin(&["group", "6", "--format", "json"]).stdout).unwrap();
    assert_eq!(
        v["invariant_factors"],
        serde_json::json!([5, 5, 5, 15, 45, 45, 45, 45])
    );
}

#[test]
fn big_orders_stay_exact_in_json() {
    let o = bin(&["group", "14", "--format", "json"]);
    let s = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    // The order exceeds u64; it must round-trip as the same digits.
    let order = v["order"].to_string();
    assert!(order.len() > 20, "{order}");
    assert!(s.contains(&format!("\"order\": {order}")));
    assert_eq!(v["order"], v["spanning_trees"]);
}

#[test]
fn snf_examples() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.mtx");
    fs::write(
        &m,
        "%%MatrixMarket matrix array integer general\n2 2\n2\n6\n4\n8\n",
    )
    .unwrap();
    let o = bin(&["snf", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2 4\n");

    let id = dir.path().join("id.mtx");
    fs::write(
        &id,
        "%%MatrixMarket matrix coordinate integer general\n3 3 3\n1 1 1\n2 2 1\n3 3 1\n",
    )
    .unwrap();
    assert_eq!(stdout(&bin(&["snf", id.to_str().unwrap()])), "1 1 1\n");

    let empty = dir.path().join("empty.mtx");
    fs::write(&empty, "").unwrap();
    assert_eq!(
        bin(&["snf", empty.to_str().unwrap()]).status.code(),
        Some(2)
    );
    let missing = dir.path().join("missing.mtx");
    assert_eq!(
        bin(&["snf", missing.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn snf_transforms_are_written_and_certify() {
    use kneser_sandpile::mtx::from_matrix_market_str;
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("a.mtx");
    let src = "%%MatrixMarket matrix coordinate integer general\n3 2 5\n1 1 4\n1 2 -6\n2 1 2\n3 1 10\n3 2 14\n";
    fs::write(&m, src).unwrap();
    let o = bin(&["snf", m.to_str().unwrap(), "--transforms"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).starts_with("2 2\n"));

    let read = |name: &str| {
        from_matrix_market_str(&fs::read_to_string(dir.path().join(name)).unwrap()).unwrap()
    };
    let (a, u, v) = (
        from_matrix_market_str(src).unwrap(),
        read("a.U.mtx"),
        read("a.V.mtx"),
    );
    let s = u.checked_mul(&a).unwrap().checked_mul(&v).unwrap();
    let snf = kneser_sandpile::smith_normal_form(&a, false);
    assert_eq!(s, snf.diagonal_matrix());
}

#[test]
fn profile_examples() {
    let o = bin(&["profile", "8", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("branch: Case 3 d-i"));
    assert!(s.trim_end().ends_with("match"));

    let v: serde_json::Value =
        serde_json::from_slice(&bin(&["profile", "8", "2", "--format", "json"]).stdout).unwrap();
    assert_eq!(v["computed_e"], serde_json::json!([7, 14, 0, 6]));
    assert_eq!(v["predicted_e"], v["computed_e"]);

    let v: serde_json::Value =
        serde_json::from_slice(&bin(&["profile", "7", "7", "--format", "json"]).stdout).unwrap();
    assert_eq!(v["branch"], "Case 1a, a=1");
    assert_eq!(v["computed_e"], serde_json::json!([15, 5]));

    let o = bin(&["profile", "10", "3"]);
    assert!(stdout(&o).contains("branch: Case 2a, a=2"));

    let o = bin(&["profile", "7", "11"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("does not divide the order"));

    assert_eq!(bin(&["profile", "7", "4"]).status.code(), Some(2));
    assert_eq!(bin(&["profile", "4", "2"]).status.code(), Some(2));
}
