// SPDX-License-Identifier: Apache-2.0

use bernays::arith::Discriminant;
use bernays::cli::run;
use bernays::constants::{bernays_constant, ConstantOptions, ConstantReport};

fn bernays(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("bernays").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn constant_minus_8() {
    let (code, out, _) = bernays(&["constant", "-D", "-8"]);
    assert_eq!(code, 0);
    let line = out.lines().find(|l| l.starts_with("C ")).unwrap();
    assert!(line.contains("= 0.872887558 ± "), "{line}");
}

#[test]
fn classgroup_minus_56() {
    let (code, out, _) = bernays(&["classgroup", "-D", "-56"]);
    assert_eq!(code, 0);
    assert!(out.contains("h = 4, 2 genera"));
    assert!(out.contains("genus 0: [1,0,14] [2,0,7]"));
    assert!(out.contains("genus 1: [3,-2,5] [3,2,5]"));

    let (_, csv, _) = bernays(&["classgroup", "-D", "-56", "-o", "csv"]);
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn exit_statuses() {
    assert_eq!(bernays(&["constant", "-D", "-12"]).0, 3);
    assert_eq!(bernays(&["constant", "-D", "-7"]).0, 0);
    assert_eq!(bernays(&["constant", "-D", "5"]).0, 2);
    assert_eq!(bernays(&["constant", "-D", "-6"]).0, 2);
    assert_eq!(bernays(&["constant"]).0, 2);
    assert_eq!(
        bernays(&["constant", "-D", "-8", "--method", "sideways"]).0,
        2
    );
    assert_eq!(bernays(&["frobnicate"]).0, 2);
    assert_eq!(
        bernays(&["census", "-D", "-4", "--form", "1,0,2", "-x", "100"]).0,
        2
    );
    assert_eq!(bernays(&["census", "-D", "-4", "-x", "2000000000"]).0, 4);
    assert_eq!(bernays(&["gsum", "-D", "-4", "-M", "10000000"]).0, 4);
    assert_eq!(
        bernays(&[
            "search",
            "--mod",
            "4",
            "--res",
            "3",
            "--limit",
            "2000000000"
        ])
        .0,
        4
    );
    assert_eq!(
        bernays(&["search", "--mod", "4", "--res", "5", "--limit", "100"]).0,
        2
    );
    let (code, out, _) = bernays(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("classgroup"));
}

#[test]
fn json_round_trip_is_bit_identical() {
    let (code, out, _) = bernays(&[
        "constant",
        "-D",
        "-20",
        "--prime-bound",
        "1000000",
        "-o",
        "json",
    ]);
    assert_eq!(code, 0);
    let parsed: ConstantReport = serde_json::from_str(&out).unwrap();
    assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", out);

    let direct = bernays_constant(
        &Discriminant::fundamental(-20).unwrap(),
        &ConstantOptions::direct(1_000_000),
    )
    .unwrap();
    assert_eq!(parsed.c_d.value.to_bits(), direct.c_d.value.to_bits());
    assert_eq!(
        parsed.c_d.abs_error.to_bits(),
        direct.c_d.abs_error.to_bits()
    );
    assert_eq!(parsed.e_d, direct.e_d);
    assert_eq!(parsed.l_one, direct.l_one);
    assert_eq!(parsed.j_d.to_bits(), direct.j_d.to_bits());
}

#[test]
fn table_csv_is_reproducible() {
    let args = [
        "table",
        "--discs",
        "builtin60",
        "--prime-bound",
        "1000000",
        "-o",
        "csv",
    ];
    let (code, first, _) = bernays(&args);
    assert_eq!(code, 0);
    assert_eq!(first.lines().count(), 61);
    assert!(first.starts_with("D,h,omega,L1,E,C,err,method,prime_bound,runtime_ms\n"));
    let (_, second, _) = bernays(&args);
    assert_eq!(first, second);
}

#[test]
fn table_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("discs.txt");
    std::fs::write(&path, "# small ones\n-3\n-4\n\n-8  # comment\n").unwrap();
    let (code, out, _) = bernays(&[
        "table",
        "--discs",
        path.to_str().unwrap(),
        "--prime-bound",
        "100000",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 4);
    std::fs::write(&path, "-12\n").unwrap();
    assert_eq!(bernays(&["table", "--discs", path.to_str().unwrap()]).0, 3);
    assert_eq!(bernays(&["table", "--discs", "/nonexistent/discs"]).0, 1);
}

#[test]
fn census_compare_and_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("plot.csv");
    let (code, out, _) = bernays(&[
        "census",
        "-D",
        "-4",
        "-x",
        "1000",
        "--prime-bound",
        "100000",
        "--plot-data",
        plot.to_str().unwrap(),
        "--points",
        "20",
        "-o",
        "csv",
    ]);
    assert_eq!(code, 0);
    let row = out.lines().nth(1).unwrap();
    // 330 integers up to 1000 are sums of two squares
    assert!(row.starts_with("-4,1,0,1,1000,330,"), "{row}");
    let plot = std::fs::read_to_string(plot).unwrap();
    assert_eq!(plot.lines().next(), Some("y,ratio"));
    assert!(plot.lines().count() > 2);

    let (code, out, _) = bernays(&[
        "census",
        "-D",
        "-56",
        "--form",
        "3,-2,5",
        "-x",
        "10000",
        "--coprime",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("[3,-2,5]"));

    let (code, out, _) = bernays(&[
        "census",
        "-D",
        "-56",
        "-x",
        "100000",
        "--per-genus",
        "-o",
        "json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["genus_counts"].as_array().unwrap().len(), 2);

    let (code, out, _) = bernays(&[
        "compare",
        "-D",
        "-4",
        "-x",
        "1000,100000",
        "--prime-bound",
        "100000",
        "-o",
        "csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 3);
}

#[test]
fn search_with_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("scan.ckpt");
    let args = [
        "search",
        "--mod",
        "4",
        "--res",
        "3",
        "--limit",
        "300",
        "--top",
        "7",
        "--refine-bound",
        "1000000",
        "--resume",
        ckpt.to_str().unwrap(),
        "-o",
        "csv",
    ];
    let (code, out, _) = bernays(&args);
    assert_eq!(code, 0);
    assert!(ckpt.exists());
    let qs: Vec<&str> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(qs, ["239", "191", "167", "71", "263", "47", "271"]);
    // resuming a finished scan gives the same answer
    assert_eq!(bernays(&args).1, out);
}

#[test]
fn gsum_brackets() {
    let (code, out, _) = bernays(&["gsum", "-D", "-56", "-M", "100000", "-o", "csv"]);
    assert_eq!(code, 0);
    assert!(out.lines().nth(1).unwrap().ends_with(",true"));
}

#[test]
fn thread_override() {
    let (code, out, _) = bernays(&[
        "--threads",
        "1",
        "constant",
        "-D",
        "-3",
        "--prime-bound",
        "100000",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("h        = 1"));
}
