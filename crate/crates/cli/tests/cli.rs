use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn graph(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/graphs").join(name)
}

fn prs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prs")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn temp_file(contents: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn sample_is_byte_identical_across_invocations() {
    let g = graph("worked.txt");
    let args = ["sample", "--encoding", "sink-free", "--graph", path(&g), "--n", "3", "--seed", "7"];
    let a = prs(&args);
    let b = prs(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let objects = stdout(&a).lines().filter(|l| l.starts_with('{')).count();
    assert_eq!(objects, 3);
}

#[test]
fn sample_output_does_not_depend_on_worker_count() {
    let g = graph("k4.txt");
    let run = |jobs: &str| {
        prs(&["sample", "--encoding", "arborescence", "--graph", path(&g), "--n", "200", "--jobs", jobs]).stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn hardcore_sample_is_an_independent_set_of_the_cycle() {
    let g = graph("c4.txt");
    let o = prs(&["sample", "--encoding", "hardcore", "--lambda", "1.0", "--graph", path(&g), "--n", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let first = stdout(&o).lines().next().unwrap().to_string();
    assert!(first.starts_with(r#"{"kind":"independent_set","value":["#), "{first}");
    let inner = first.split('[').nth(1).unwrap().split(']').next().unwrap();
    let set: Vec<usize> = inner.split(',').filter(|s| !s.is_empty()).map(|s| s.parse().unwrap()).collect();
    for w in [(0, 1), (1, 2), (2, 3), (3, 0)] {
        assert!(!(set.contains(&w.0) && set.contains(&w.1)), "{set:?}");
    }
}

#[test]
fn graph_without_sink_free_orientation_hits_the_cap() {
    let g = graph("k2.txt");
    let o = prs(&["sample", "--encoding", "sink-free", "--graph", path(&g)]);
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    let diagnostic: Vec<&str> = err.lines().filter(|l| l.starts_with("error:")).collect();
    assert_eq!(diagnostic.len(), 1);
    assert!(diagnostic[0].starts_with("error: IterationCapExceeded: "), "{err}");
    assert!(stdout(&o).is_empty());
}

#[test]
fn analyze_reports_exact_q_values_of_the_worked_example() {
    let g = graph("worked.txt");
    let o = prs(&["analyze", "--encoding", "sink-free", "--graph", path(&g)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    for line in [
        "q_empty: 5/16",
        "predicted iterations: 2",
        "p[0]: 1/4",
        "p[1]: 1/8",
        "expected resamples[0]: 3/5",
        "expected resamples[2]: 2/5",
        "predicted variable resamples: 24/5",
    ] {
        assert!(out.lines().any(|l| l == line), "missing {line:?} in\n{out}");
    }
}

#[test]
fn analyze_of_a_json_instance_matches_the_graph_encoding() {
    // The worked formula written as CNF over five fair coins.
    let f = temp_file(
        r#"{
  "variables": [
    {"values": [0, 1], "weights": ["1/2", "1/2"]},
    {"values": [0, 1], "weights": ["1/2", "1/2"]},
    {"values": [0, 1], "weights": ["1/2", "1/2"]},
    {"values": [0, 1], "weights": ["1/2", "1/2"]},
    {"values": [0, 1], "weights": ["1/2", "1/2"]}
  ],
  "clauses": [
    {"cnf": [1, 2]},
    {"cnf": [-1, 3, -4]},
    {"cnf": [-2, -3, 5]},
    {"cnf": [4, -5]}
  ]
}"#,
    );
    let p = f.path().to_path_buf();
    let o = prs(&["analyze", "--instance", path(&p)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("q_empty: 5/16\n"), "{out}");
    assert!(out.contains("predicted iterations: 2\n"), "{out}");
    let s = prs(&["sample", "--instance", path(&p), "--n", "2"]);
    assert!(s.status.success(), "{}", stderr(&s));
    assert!(stdout(&s).starts_with(r#"{"kind":"assignment","value":["#));
}

#[test]
fn unsatisfiable_analysis_exits_with_its_own_code() {
    let g = graph("k2.txt");
    let o = prs(&["analyze", "--encoding", "sink-free", "--graph", path(&g)]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("error: Unsatisfiable: "));
}

#[test]
fn check_certifies_hardcore_path_through_axioms() {
    let g = graph("p5.txt");
    let o = prs(&["check", "--encoding", "hardcore", "--graph", path(&g)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        stdout(&o).lines().next(),
        Some("extremal: no; axioms 1,3 verified on dependency relation")
    );
}

#[test]
fn check_reports_extremal_sink_free_encoding() {
    let g = graph("worked.txt");
    let o = prs(&["check", "--encoding", "sink-free", "--graph", path(&g)]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("extremal: yes"));
    assert!(out.contains("atomic clauses: 4 of 4\n"), "{out}");
}

#[test]
fn threshold_report_prints_the_computed_activity() {
    let o = prs(&["analyze", "--hardcore-threshold", "--delta", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("lambda_3: 0.0979691\n"), "{out}");
    assert!(out.contains("crude z_c: 0.1547005\n"), "{out}");
}

#[test]
fn unknown_encoding_lists_the_known_ones() {
    let g = graph("worked.txt");
    let o = prs(&["sample", "--encoding", "spanning-tree", "--graph", path(&g)]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error: Usage: unknown encoding `spanning-tree`"));
    for name in ["sink-free", "arborescence", "root-connected", "bicircular", "hardcore", "strong"] {
        assert!(err.contains(name));
    }
}

#[test]
fn validation_failures_exit_with_code_two() {
    let bad = temp_file("vertices: 3\n0 1\n1 7\n");
    let p = bad.path().to_path_buf();
    for args in [
        vec!["sample", "--encoding", "sink-free", "--graph", path(&p)],
        vec!["sample", "--encoding", "sink-free", "--graph", "/does/not/exist"],
        vec!["sample", "--no-such-flag"],
        vec!["sample", "--encoding", "sink-free", "--graph", "x", "--policy", "sideways"],
        vec!["sample", "--encoding", "sink-free", "--graph", "x", "--lambda", "2"],
    ] {
        let o = prs(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        let err = stderr(&o);
        assert_eq!(err.lines().filter(|l| l.starts_with("error: ")).count(), 1, "{err}");
    }
}

#[test]
fn bridged_graph_has_no_strong_orientation() {
    let g = graph("p5.txt");
    let o = prs(&["sample", "--encoding", "strong", "--graph", path(&g)]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).starts_with("error: Bridged: "));
}

#[test]
fn verify_passes_on_the_worked_example_and_fails_below_noise() {
    let g = graph("worked.txt");
    let ok = prs(&[
        "verify",
        "--encoding",
        "sink-free",
        "--graph",
        path(&g),
        "--n",
        "20000",
        "--policies",
        "lowest,highest,random,simultaneous",
        "--confluence-seeds",
        "200",
        "--runtime-runs",
        "20000",
    ]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    let out = stdout(&ok);
    assert!(out.contains("support: 10\n"));
    assert!(out.contains("confluence: pass\n"));
    assert!(out.contains("runtime: pass\n"));
    assert!(out.ends_with("verdict: pass\n"));

    let fail = prs(&["verify", "--encoding", "sink-free", "--graph", path(&g), "--n", "50", "--threshold", "0.001"]);
    assert_eq!(fail.status.code(), Some(1));
    assert!(stdout(&fail).ends_with("verdict: fail\n"));
}

#[test]
fn verify_covers_oracle_backed_encodings() {
    for (enc, file, extra) in [
        ("arborescence", "k4.txt", None),
        ("root-connected", "k3-bidirected.txt", None),
        ("bicircular", "k4.txt", None),
        ("hardcore", "c4.txt", Some("1/2")),
    ] {
        let g = graph(file);
        let mut args = vec!["verify", "--encoding", enc, "--graph", path(&g), "--n", "20000"];
        if let Some(l) = extra {
            args.extend(["--lambda", l]);
        }
        let o = prs(&args);
        assert_eq!(o.status.code(), Some(0), "{enc}: {}{}", stdout(&o), stderr(&o));
    }
}

#[test]
fn csv_format_quotes_decoded_objects() {
    let g = graph("worked.txt");
    let o = prs(&["sample", "--encoding", "sink-free", "--graph", path(&g), "--n", "2", "--format", "csv"]);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("sample,seed,iterations,variable_resamples,object"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("0,0,"));
    assert!(row.contains(r#""{""kind"":""orientation"""#), "{row}");
    let a = prs(&["analyze", "--encoding", "sink-free", "--graph", path(&g), "--format", "csv"]);
    let out = stdout(&a);
    assert!(out.starts_with("quantity,value\n"));
    assert!(out.contains("q_empty,5/16\n"));
}

#[test]
fn bench_emits_deterministic_csv() {
    let args = ["bench", "--encoding", "sink-free", "--sizes", "8,12", "--runs", "200", "--seed", "3"];
    let a = prs(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, prs(&args).stdout);
    let out = stdout(&a);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "encoding,family,vertices,edges,runs,mean_iterations,se_iterations,mean_variable_resamples,se_variable_resamples"
    );
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("sink-free,random,8,"));

    let timed = prs(&["bench", "--encoding", "strong", "--family", "ladder", "--sizes", "6", "--runs", "50", "--timing"]);
    assert!(timed.status.success(), "{}", stderr(&timed));
    assert!(stdout(&timed).lines().next().unwrap().ends_with(",seconds"));
}
