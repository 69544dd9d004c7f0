use std::path::Path;
use std::process::{Command, Output};

fn stickydisc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stickydisc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_then_energy() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s62.cfg");
    let o = stickydisc(&["construct", "--family", "spiral", "--n", "62", "--out", path(&file)]);
    assert!(o.status.success(), "{o:?}");
    let o = stickydisc(&["energy", path(&file)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "N=62 bonds=158 energy=-316");
}

#[test]
fn empty_file_has_zero_energy() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("empty.cfg");
    std::fs::write(&file, "# sticky-disc v1\n").unwrap();
    let o = stickydisc(&["energy", path(&file)]);
    assert_eq!(stdout(&o).trim(), "N=0 bonds=0 energy=0");
}

#[test]
fn oracle_at_seven() {
    let o = stickydisc(&["oracle", "--n", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "N=7 max_bonds=12 maximizers=1");
    let o = stickydisc(&["oracle", "--n", "4", "--list-maximizers"]);
    let text = stdout(&o);
    assert!(text.contains("# sticky-disc v1") && text.contains("# maximizer=1"));
}

#[test]
fn oracle_budget_exhaustion_exits_3() {
    let o = stickydisc(&["oracle", "--n", "11", "--budget", "5000"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("incomplete"));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(stickydisc(&["energy"]).status.code(), Some(2));
    assert_eq!(stickydisc(&["oracle", "--n", "7", "--bogus"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("dup.cfg");
    std::fs::write(&file, "# sticky-disc v1\n0 0\n0 0\n").unwrap();
    let o = stickydisc(&["energy", path(&file)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.contains("line 3"));
    assert_eq!(stickydisc(&["construct", "--family", "degenerate", "--k", "1", "--out", path(&file)]).status.code(), Some(2));
    assert_eq!(stickydisc(&["construct", "--family", "spiral", "--out", path(&file)]).status.code(), Some(2));
    assert_eq!(stickydisc(&["energy", path(&dir.path().join("missing.cfg"))]).status.code(), Some(2));
}

#[test]
fn constructed_files_validate() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["--family", "spiral", "--n", "200"],
        &["--family", "hexagon", "--k", "6"],
        &["--family", "degenerate", "--k", "9"],
        &["--family", "normalized", "--n", "137"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let file = dir.path().join(format!("c{i}.cfg"));
        let mut full = vec!["construct"];
        full.extend_from_slice(args);
        full.extend(["--out", path(&file)]);
        assert!(stickydisc(&full).status.success());
        let o = stickydisc(&["validate", path(&file)]);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
    }
}

#[test]
fn validate_reports_violations_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("pit.cfg");
    let mut text = String::from("# sticky-disc v1\n");
    for j in 0..4 {
        for m in j..=8 {
            text.push_str(&format!("{m} {}\n", -j));
        }
    }
    for m in [0, 1, 6, 7] {
        text.push_str(&format!("{m} 1\n"));
    }
    std::fs::write(&file, text).unwrap();
    let o = stickydisc(&["validate", path(&file), "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let angle_rules: Vec<_> = lines.iter().filter(|l| l["rule"].as_str().unwrap().starts_with("L2.2")).collect();
    assert_eq!(angle_rules.len(), 1);
    assert_eq!(lines[0]["rule"], "L2.2.i");
    // the gap also breaks the top hull side
    assert!(lines.iter().any(|l| l["rule"] == "L2.3.i"));
    assert_eq!(lines[0]["severity"], "violation");
    assert_eq!(lines[0]["witnesses"].as_array().unwrap().len(), 5);
    // raising the threshold demotes it to informational
    let o = stickydisc(&["validate", path(&file), "--threshold", "100"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn deviation_output() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s62.cfg");
    stickydisc(&["construct", "--family", "spiral", "--n", "62", "--out", path(&file)]);
    let o = stickydisc(&["deviation", path(&file)]);
    assert!(stdout(&o).starts_with("N=62 deviation_count=1 side=4 center=(0, 0)"), "{}", stdout(&o));
    let o = stickydisc(&["deviation", path(&file), "--csv"]);
    let text = stdout(&o);
    assert!(text.lines().nth(1).unwrap().starts_with("62,1,4,0,0,"));
}

#[test]
fn scaling_csv_is_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let run = |out: &Path, threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_stickydisc"))
            .args(["scaling", "--family", "degenerate", "--k-min", "4", "--k-max", "20", "--csv", path(out)])
            .env("STICKYDISC_THREADS", threads)
            .output()
            .unwrap()
    };
    let oa = run(&a, "1");
    let ob = run(&b, "4");
    assert!(oa.status.success() && ob.status.success());
    assert!(stdout(&oa).starts_with("exponent="));
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert!(text.starts_with("k,N,family,bonds,formula_bonds,deviation_count,flat_norm_proxy,wall_time_ms\n"));
    assert_eq!(text.lines().count(), 1 + 17 + 1);
}

#[test]
fn scaling_spiral_skips_the_fit() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = stickydisc(&["scaling", "--family", "spiral", "--k-min", "8", "--k-max", "64", "--doubling", "--csv", path(&out)]);
    assert_eq!(stdout(&o).trim(), "exponent=skipped (zero deviations)");
    assert_eq!(stickydisc(&["scaling", "--family", "spiral", "--k-min", "1", "--k-max", "4", "--csv", path(&out)]).status.code(), Some(2));
}

#[test]
fn bad_thread_variable_is_a_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_stickydisc")).args(["oracle", "--n", "3"]).env("STICKYDISC_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}
