use std::process::{Command, Output};

fn khintchine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_khintchine"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_lines(out: &Output) -> Vec<serde_json::Value> {
    stdout(out)
        .lines()
        .map(|l| serde_json::from_str(l).expect("ndjson line"))
        .collect()
}

#[test]
fn exact_emits_five_records() {
    let out = khintchine(&["exact", "--n", "4", "--m", "0", "--p", "1"]);
    assert!(out.status.success());
    let records = json_lines(&out);
    let kinds: Vec<_> = records
        .iter()
        .map(|r| r["kind"].as_str().unwrap())
        .collect();
    assert_eq!(
        kinds,
        [
            "best_constant_2p_power",
            "best_constant",
            "p_dif",
            "expectation_product",
            "prob_sum_equals"
        ]
    );
    assert_eq!(records[0]["exact"], "32/15");
    assert_eq!(records[0]["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn full_sum_exact_is_eight() {
    let out = khintchine(&[
        "exact", "--n", "2", "--m", "2", "--p", "1", "--format", "csv",
    ]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "kind,version,n,m,p,exact,decimal,sign,ln_magnitude"
    );
    assert!(lines
        .next()
        .unwrap()
        .starts_with("best_constant_2p_power,0.1.0,2,2,1,8,8e0,1,"));
}

#[test]
fn parity_mismatch_exits_2() {
    let out = khintchine(&["exact", "--n", "3", "--m", "0", "--p", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parity"));
}

#[test]
fn non_integer_flag_exits_2() {
    let out = khintchine(&["exact", "--n", "4.5", "--m", "0", "--p", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn negative_m_is_accepted() {
    let out = khintchine(&["exact", "--n", "3", "--m", "-1", "--p", "2"]);
    assert!(out.status.success());
    let pos = khintchine(&["exact", "--n", "3", "--m", "1", "--p", "2"]);
    assert_eq!(json_lines(&out)[0]["exact"], json_lines(&pos)[0]["exact"]);
}

#[test]
fn unit_m_estimate() {
    let out = khintchine(&["asymptotic", "--regime", "unit_m", "--n", "101", "--p", "2"]);
    let rec = &json_lines(&out)[0];
    let ln = rec["log_value"]["ln_magnitude"].as_f64().unwrap();
    assert!((ln.exp() - 37.05).abs() < 0.01);
    assert!(rec["extras"]["ratio"].as_f64().is_some());
}

#[test]
fn balanced_upper_reports_both_forms() {
    let out = khintchine(&[
        "asymptotic",
        "--regime",
        "balanced_upper",
        "--n",
        "4",
        "--p",
        "1",
    ]);
    let kinds: Vec<_> = json_lines(&out).iter().map(|r| r["kind"].clone()).collect();
    assert_eq!(kinds, ["asymptotic_estimate", "balanced_finite_bound"]);
}

#[test]
fn asymptotic_usage_errors() {
    let zero_m = khintchine(&[
        "asymptotic",
        "--regime",
        "fixed_m",
        "--n",
        "100",
        "--m",
        "0",
        "--p",
        "2",
    ]);
    assert_eq!(zero_m.status.code(), Some(2));
    let missing = khintchine(&[
        "asymptotic",
        "--regime",
        "proportional_beta",
        "--n",
        "100",
        "--p",
        "2",
    ]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("--beta"));
}

#[test]
fn verify_full_sum_corners_within_bound() {
    let out = khintchine(&[
        "verify", "--n", "2", "--m", "2", "--p", "1", "--trials", "0",
    ]);
    let records = json_lines(&out);
    let summary = records.last().unwrap();
    assert_eq!(summary["kind"], "probe_summary");
    assert_eq!(summary["extras"]["violation_count"], 0);
}

#[test]
fn verify_is_reproducible_per_seed() {
    let args = [
        "verify", "--n", "6", "--m", "2", "--p", "2", "--trials", "20", "--seed", "99",
    ];
    let a = khintchine(&args);
    let b = khintchine(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(json_lines(&a).iter().all(|r| r["seed"] == 99));
    let other = khintchine(&[
        "verify", "--n", "6", "--m", "2", "--p", "2", "--trials", "20", "--seed", "100",
    ]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn verify_cap_exits_3() {
    let out = khintchine(&["verify", "--n", "40", "--m", "0", "--p", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn tally_examples() {
    for (n, m, tally, closed) in [
        ("4", "0", [6, 4, 10], 2),
        ("2", "2", [3, 0, 3], 3),
        ("2", "0", [2, 1, 3], 1),
    ] {
        let out = khintchine(&["tally", "--n", n, "--m", m, "--p", "1"]);
        let x = &json_lines(&out)[0]["extras"];
        assert_eq!(
            [&x["t_even"], &x["t_odd"], &x["total"]],
            tally.map(serde_json::Value::from).each_ref()
        );
        assert_eq!(x["closed_form"], closed);
        assert_eq!(x["match"], true);
    }
}

#[test]
fn sweep_jobs_do_not_change_output() {
    let dir = std::env::temp_dir().join(format!("khintchine-sweep-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut files = Vec::new();
    for jobs in ["1", "8"] {
        let path = dir.join(format!("jobs{jobs}.csv"));
        let out = khintchine(&[
            "sweep",
            "--regime",
            "balanced_upper",
            "--grid",
            "n=20:2000:x10",
            "--p",
            "2",
            "--format",
            "csv",
            "--jobs",
            jobs,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        files.push(std::fs::read_to_string(&path).unwrap());
    }
    assert_eq!(files[0], files[1]);
    let rows: Vec<_> = files[0].lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    let ratios: Vec<f64> = rows
        .iter()
        .map(|r| r.split(',').nth(11).unwrap().parse().unwrap())
        .collect();
    assert!((ratios[2] - 1.0).abs() < (ratios[0] - 1.0).abs());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn sweep_marks_skipped_rows() {
    let out = khintchine(&[
        "sweep", "--regime", "fixed_m", "--m", "5", "--grid", "n=3,51", "--p", "2",
    ]);
    let records = json_lines(&out);
    assert!(records[0]["extras"]["skipped"].is_string());
    assert!(records[1]["extras"]["skipped"].is_null());
    assert_eq!(records.last().unwrap()["kind"], "sweep_summary");
}

#[test]
fn sweep_unwritable_path_exits_4() {
    let out = khintchine(&[
        "sweep",
        "--regime",
        "balanced_upper",
        "--grid",
        "n=20",
        "--p",
        "2",
        "--out",
        "/nonexistent-dir/sweep.csv",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn bad_grid_exits_2() {
    let out = khintchine(&[
        "sweep",
        "--regime",
        "balanced_upper",
        "--grid",
        "n=abc",
        "--p",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
