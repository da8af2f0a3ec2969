//! End-to-end runs of the binary: golden rows for the sequence tables,
//! value checks for densities and stopping distributions, exit codes, and
//! output determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_collatz-spectra"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// The (sequence, modulo, direction) columns of a families run.
fn family_columns(csv: &str) -> Vec<(String, String, String)> {
    csv.lines()
        .skip(1)
        .map(|line| {
            let cells: Vec<&str> = line.split(',').collect();
            (cells[1].to_string(), cells[2].to_string(), cells[3].to_string())
        })
        .collect()
}

const AUX_ROWS: &[(&str, u64, &str)] = &[
    ("3->1", 4, "PG"),
    ("2->3->1", 8, "PG"),
    ("9->7->2", 16, "PG"),
    ("12->18->27->7", 16, "PG"),
    ("6->9->7->2", 32, "PG"),
    ("13->10->15->4", 32, "PG"),
    ("33->25->19->5", 64, "PG"),
    ("8->12->18->27->7", 32, "PG"),
    ("4->6->9->7->2", 64, "PG"),
    ("30->45->34->51->13", 64, "PG"),
    ("37->28->42->63->16", 64, "PG"),
    ("17->13->10->15->4", 128, "PG"),
    ("22->33->25->19->5", 128, "PG"),
    ("93->70->105->79->20", 128, "PG"),
    ("129->97->73->55->14", 256, "PG"),
    ("48->72->108->162->243->61", 64, "PP"),
    ("20->30->45->34->51->13", 128, "PG"),
    ("53->40->60->90->135->34", 128, "PG"),
    ("88->132->198->297->223->56", 128, "PG"),
    ("110->165->124->186->279->70", 128, "PG"),
    ("5->4->6->9->7->2", 256, "PG"),
    ("49->37->28->42->63->16", 256, "PG"),
    ("62->93->70->105->79->20", 256, "PG"),
    ("100->150->225->169->127->32", 256, "PG"),
    ("125->94->141->106->159->40", 256, "PG"),
    ("182->273->205->154->231->58", 256, "PG"),
    ("29->22->33->25->19->5", 512, "PG"),
    ("86->129->97->73->55->14", 512, "PG"),
    ("193->145->109->82->123->31", 512, "PG"),
    ("465->349->262->393->295->74", 512, "PG"),
    ("513->385->289->217->163->41", 1024, "PG"),
];

const ACCEL_ROWS: &[(&str, u64, &str)] = &[
    ("5->2", 8, "PG"),
    ("3->5->2", 16, "PG"),
    ("17->13->5", 32, "PG"),
    ("23->35->53->20", 32, "PG"),
    ("11->17->13->5", 64, "PG"),
    ("25->19->29->11", 64, "PG"),
    ("65->49->37->14", 128, "PG"),
    ("15->23->35->53->20", 64, "PP"),
    ("7->11->17->13->5", 128, "PG"),
    ("59->89->67->101->38", 128, "PG"),
    ("73->55->83->125->47", 128, "PG"),
    ("33->25->19->29->11", 256, "PG"),
    ("43->65->49->37->14", 256, "PG"),
    ("185->139->209->157->59", 256, "PG"),
    ("257->193->145->109->41", 512, "PG"),
    ("95->143->215->323->485->182", 128, "PP"),
    ("39->59->89->67->101->38", 256, "PG"),
    ("105->79->119->179->269->101", 256, "PG"),
    ("175->263->395->593->445->167", 256, "PG"),
    ("219->329->247->371->557->209", 256, "PG"),
    ("9->7->11->17->13->5", 512, "PG"),
    ("97->73->55->83->125->47", 512, "PG"),
    ("123->185->139->209->157->59", 512, "PG"),
    ("199->299->449->337->253->95", 512, "PG"),
    ("249->187->281->211->317->119", 512, "PG"),
    ("363->545->409->307->461->173", 512, "PG"),
    ("57->43->65->49->37->14", 1024, "PG"),
    ("171->257->193->145->109->41", 1024, "PG"),
    ("385->289->217->163->245->92", 1024, "PG"),
    ("929->697->523->785->589->221", 1024, "PG"),
    ("1025->769->577->433->325->122", 2048, "PG"),
];

#[test]
fn families_golden_aux() {
    let csv = stdout(&["families", "--map", "fraku3", "--L", "2..6"]);
    let rows = family_columns(&csv);
    assert_eq!(rows.len(), 31);
    for (row, &(seq, modulo, dir)) in rows.iter().zip(AUX_ROWS) {
        assert_eq!(row.0, seq);
        assert_eq!(row.1, modulo.to_string());
        assert_eq!(row.2, dir);
    }
}

#[test]
fn families_golden_accelerated() {
    let csv = stdout(&["families", "--map", "u3g", "--L", "2..6"]);
    let rows = family_columns(&csv);
    assert_eq!(rows.len(), 31);
    for (row, &(seq, modulo, dir)) in rows.iter().zip(ACCEL_ROWS) {
        assert_eq!(row.0, seq);
        assert_eq!(row.1, modulo.to_string());
        assert_eq!(row.2, dir);
    }
}

#[test]
fn families_summary_and_single_length() {
    let csv = stdout(&["families", "--map", "fraku3", "--L", "2..7", "--summary"]);
    let s7: Vec<&str> = csv.lines().filter(|l| l.starts_with("7,")).collect();
    assert_eq!(s7.len(), 6);
    assert!(s7[0].contains("3367/4096"));
    assert!(s7[0].contains("82.20"));

    let csv = stdout(&["families", "--map", "fraku5", "--L", "2..2"]);
    let rows = family_columns(&csv);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].1, "16");
}

#[test]
fn density_values_and_exact_mode() {
    let csv = stdout(&["density", "--map", "fraku3", "--lmax", "30", "--levels", "3"]);
    let values: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(values, vec!["0.1236245", "0.05089683", "0.02404081"]);

    let csv = stdout(&["density", "--map", "fraku5", "--lmax", "40"]);
    assert!(csv.lines().nth(1).unwrap().contains("0.5184832"));

    let csv = stdout(&["density", "--map", "fraku3", "--lmax", "2"]);
    assert_eq!(csv.lines().nth(1).unwrap(), "1,0,0.00");

    // reduced form of 32181086/268435456
    let csv = stdout(&["density", "--map", "fraku3", "--lmax", "20", "--exact"]);
    assert!(csv.contains("16090543/134217728"));
}

#[test]
fn stopping_columns() {
    let csv = stdout(&["stopping", "--map", "t3", "--k", "0..10", "--flavor", "strict"]);
    let values: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(
        values,
        vec!["1", "0.5", "0.25", "0.25", "0.1875", "0.125", "0.125", "0.1015625", "0.07421875", "0.07421875", "0.0625"]
    );

    // extrapolating the triangle far past the printed rows
    let csv = stdout(&["stopping", "--map", "t5", "--k", "100", "--flavor", "strict"]);
    let v: f64 = csv.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((0.17..0.19).contains(&v), "got {v}");

    let csv = stdout(&["stopping", "--map", "t3", "--k", "1", "--empirical", "1000000"]);
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[2], "0.5");
    assert_eq!(row[3], "500000");
}

#[test]
fn chain_rows_and_budget_exit_code() {
    let csv = stdout(&["chain", "--map", "fraku5", "--start", "4", "--levels", "3"]);
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    let lengths: Vec<&str> = rows.iter().map(|r| r[3]).collect();
    assert_eq!(lengths, vec!["30", "22", "19"]);
    let ends: Vec<&str> = rows.iter().map(|r| r[2]).collect();
    assert_eq!(ends, vec!["248678", "5392358", "59867203"]);

    let csv = stdout(&["chain", "--map", "fraku3", "--start", "61", "--levels", "1"]);
    assert!(csv.contains("61->46->69->52->78->117->88->132->198->297->223->56"));

    // short budget: partial output, exit code 3
    let out = run(&["chain", "--map", "fraku5", "--start", "4", "--levels", "3", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("budget-exhausted"));
}

#[test]
fn slices_agree_with_density() {
    let csv = stdout(&[
        "slices", "--map", "fraku3", "--levels", "3", "--until", "10000", "--threads", "2",
    ]);
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    let expected = [0.1236, 0.0509, 0.0240];
    for (row, e) in rows.iter().zip(expected) {
        let f: f64 = row[3].parse().unwrap();
        assert!((f - e).abs() < 0.01, "got {f}, expected near {e}");
    }
    // the fixed point 1 is reported as a cycle, not dropped
    assert_eq!(rows[0][5], "1");
    assert_eq!(rows[0][6], "0");

    let csv = stdout(&[
        "slices", "--map", "u3g", "--levels", "1", "--until", "10001", "--domain", "odd",
    ]);
    let f: f64 = csv.lines().nth(1).unwrap().split(',').nth(3).unwrap().parse().unwrap();
    assert!((f - 0.2024).abs() < 0.01, "got {f}");
}

#[test]
fn tree_dot_golden() {
    let dot = stdout(&["tree", "--map", "fraku3", "--nodes", "4", "--format", "dot"]);
    let expect = "digraph aux3_tree {\n  \"1\";\n  \"2\";\n  \"3\";\n  \"11\";\n  \"2\" -> \"3\" [label=\"3n/2\"];\n  \"3\" -> \"1\" [label=\"(n+1)/4\", dir_class=\"PG\"];\n  \"11\" -> \"3\" [label=\"(n+1)/4\", dir_class=\"PG\"];\n}\n";
    assert_eq!(dot, expect);
}

#[test]
fn deterministic_output_and_formats() {
    let a = stdout(&["families", "--map", "fraku3", "--L", "2..6"]);
    let b = stdout(&["families", "--map", "fraku3", "--L", "2..6"]);
    assert_eq!(a, b);

    let tsv = stdout(&["families", "--map", "fraku3", "--L", "2..2", "--format", "tsv"]);
    assert!(tsv.starts_with("L\tsequence\tmodulo"));

    let md = stdout(&["density", "--map", "fraku3", "--lmax", "20", "--format", "markdown"]);
    assert!(md.starts_with("| level | fraction | percent |"));
    assert!(md.contains("| --- |"));
}

#[test]
fn out_file_and_env_threads() {
    let dir = std::env::temp_dir().join("collatz_spectra_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.csv");
    let _ = stdout(&[
        "density", "--map", "fraku3", "--lmax", "20", "--out", path.to_str().unwrap(),
    ]);
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.contains("0.1198839"));

    let out = Command::new(env!("CARGO_BIN_EXE_collatz-spectra"))
        .env("COLLATZ_SPECTRA_THREADS", "1")
        .args(["slices", "--map", "fraku3", "--levels", "1", "--until", "2000"])
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn usage_errors_exit_2() {
    let out = run(&["families", "--map", "nosuchmap", "--L", "2..6"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["families", "--map", "fraku3", "--L", "6..2"]);
    assert_eq!(out.status.code(), Some(2));

    // enumeration guard: too many words for explicit listing
    let out = run(&["families", "--map", "fraku3", "--L", "40"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("density DP"));
}
