//! End-to-end runs of the `qcat` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn qcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcat"))
        .args(args)
        .output()
        .expect("run qcat")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Rows of the named table in CSV output, header first.
fn csv_table(text: &str, name: &str) -> Vec<Vec<String>> {
    let mut lines = text
        .lines()
        .skip_while(|l| *l != format!("# table {name}"))
        .skip(1);
    let mut rows = Vec::new();
    for l in lines.by_ref() {
        if l.starts_with("# ") {
            break;
        }
        rows.push(l.split(',').map(str::to_string).collect());
    }
    rows
}

#[test]
fn exit_codes() {
    assert_eq!(qcat(&["--help"]).status.code(), Some(0));
    assert_eq!(qcat(&["--version"]).status.code(), Some(0));
    assert_eq!(qcat(&["nope"]).status.code(), Some(2));
    assert_eq!(
        qcat(&["landscape", "--gamma-range", "0:1"]).status.code(),
        Some(2)
    );
    assert_eq!(qcat(&["landscape", "--j", "2.3"]).status.code(), Some(2));
    assert_eq!(
        qcat(&["landscape", "--format", "xml"]).status.code(),
        Some(2)
    );
    // Gamma outside [0, 1] is an input error raised by the library
    let o = qcat(&[
        "landscape",
        "--j",
        "3",
        "--gamma-range",
        "0:1.5:3",
        "--kappa-range",
        "1:1:1",
    ]);
    assert_eq!(
        o.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let o = qcat(&["saddle", "--j", "3", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numerical_failure_exit_code() {
    // the gap minimum sits near Gamma = 0.6, outside this grid, so it is not bracketed
    let o = qcat(&[
        "saddle",
        "--j",
        "25",
        "--gamma-range",
        "0.1:0.3:3",
        "--kappa-range",
        "1:1:1",
    ]);
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn single_point_landscape() {
    let o = qcat(&[
        "landscape",
        "--j",
        "5",
        "--gamma-range",
        "1:1:1",
        "--kappa-range",
        "1:1:1",
    ]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with(&format!("# qcat {}\n", env!("CARGO_PKG_VERSION"))));
    assert!(s.contains("# config command=landscape\n"));
    let t = csv_table(&s, "landscape");
    assert_eq!(t[0], ["j", "gamma", "kappa", "e0", "delta01", "delta02"]);
    assert_eq!(t.len(), 2);
    // pure transverse field: levels spaced by 1/j
    let d01: f64 = t[1][4].parse().unwrap();
    assert!((d01 - 0.2).abs() < 1e-10);
}

#[test]
fn json_and_csv_carry_the_same_numbers() {
    let args = [
        "landscape",
        "--j",
        "4",
        "--gamma-range",
        "0.2:0.8:4",
        "--kappa-range",
        "0.5:1:3",
    ];
    let csv = stdout(&qcat(&args));
    let mut jargs = args.to_vec();
    jargs.extend(["--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&qcat(&jargs))).unwrap();
    assert_eq!(json["qcat"], env!("CARGO_PKG_VERSION"));
    assert_eq!(json["config"]["j"], "4");
    let t = csv_table(&csv, "landscape");
    let cols = &t[0];
    for (r, row) in t[1..].iter().enumerate() {
        for (c, name) in cols.iter().enumerate() {
            let from_csv: f64 = row[c].parse().unwrap();
            let from_json = json["tables"]["landscape"][name][r].as_f64().unwrap();
            assert_eq!(from_csv, from_json, "{name} row {r}");
        }
    }
}

#[test]
fn reruns_are_byte_identical() {
    let a = tmp("rerun_a.csv");
    let b = tmp("rerun_b.csv");
    for (out, threads) in [(&a, "1"), (&b, "2")] {
        let o = qcat(&[
            "isogap",
            "--xi-range",
            "2:3:3",
            "--beta-range",
            "0.5:3:8",
            "--threads",
            threads,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    // the thread count is part of the echoed config; everything else must agree
    let strip = |v: &[u8]| -> String {
        String::from_utf8(v.to_vec())
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("# config threads="))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&ta), strip(&tb));
    let o = qcat(&[
        "isogap",
        "--xi-range",
        "2:3:3",
        "--beta-range",
        "0.5:3:8",
        "--threads",
        "1",
        "--out",
        a.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(std::fs::read(&a).unwrap(), ta);
}

#[test]
fn config_file_and_flag_override() {
    let cfg = tmp("run.cfg");
    std::fs::write(
        &cfg,
        "# small run\nj = 6\ngamma_range = 0.1:0.9:3\nkappa_range = 1:1:1\n",
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    let s = stdout(&qcat(&["landscape", "--config", c]));
    assert!(s.contains("# config j=6\n"));
    let t = csv_table(&s, "landscape");
    assert_eq!(t.len(), 4);
    assert!(t[1..].iter().all(|r| r[0].parse::<f64>().unwrap() == 6.0));

    let s = stdout(&qcat(&["landscape", "--config", c, "--j", "7"]));
    assert!(s.contains("# config j=7\n"));
    assert!(csv_table(&s, "landscape")[1..]
        .iter()
        .all(|r| r[0].parse::<f64>().unwrap() == 7.0));

    std::fs::write(&cfg, "colour = red\n").unwrap();
    assert_eq!(qcat(&["landscape", "--config", c]).status.code(), Some(2));
    std::fs::write(&cfg, "command = saddle\n").unwrap();
    assert_eq!(qcat(&["landscape", "--config", c]).status.code(), Some(2));
}

#[test]
fn saddle_below_crossover_is_clamped() {
    let s = stdout(&qcat(&["saddle", "--j", "10"]));
    let t = csv_table(&s, "saddle");
    assert_eq!(t[0], ["j", "gamma_c", "kappa_c", "delta_c", "clamped"]);
    assert_eq!(t[1][4], "true");
    assert_eq!(t[1][2].parse::<f64>().unwrap(), 1.0);
}

#[test]
fn path_summary_matches_cumulative() {
    let s = stdout(&qcat(&["path", "--j", "6", "--raster", "11"]));
    let path = csv_table(&s, "path");
    let summary = csv_table(&s, "summary");
    let ci = path[0]
        .iter()
        .position(|c| c == "cumulative")
        .expect("cumulative column");
    let last: f64 = path.last().unwrap()[ci].parse().unwrap();
    let ti = summary[0]
        .iter()
        .position(|c| c == "total_time")
        .expect("total_time column");
    let total: f64 = summary[1][ti].parse().unwrap();
    assert_eq!(last, total);
}

#[test]
fn lmg_and_asymptotics_run() {
    let o = qcat(&[
        "lmg",
        "--j",
        "6",
        "--gamma-range",
        "0.1:0.9:5",
        "--gz-range",
        "-0.2:0.2:3",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(csv_table(&stdout(&o), "lmg").len(), 16);
    let o = qcat(&[
        "asymptotics",
        "--kappa-range",
        "0.01:0.1:3",
        "--alpha-range",
        "1:2:5",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    // 15 formulas per kappa, plus the header
    assert_eq!(csv_table(&s, "asymptotics").len(), 1 + 3 * 15);
    assert!(s.contains("# table rayleigh_optimum\n"));
}
