use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use listpart::meta::reduce_independent_set;
use listpart::text;
use tempfile::TempDir;

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Self {
        let f = Files {
            dir: tempfile::tempdir().unwrap(),
        };
        f.put("split.m", "i c\n0*\n*1\n");
        f.put("threecol.m", "a b c\n0**\n*0*\n**0\n");
        f.put("p3.g", "3 2\n0 1\n1 2\n");
        f.put("c5.g", "5 5\n0 1\n1 2\n2 3\n3 4\n0 4\n");
        f.put("empty_v0.l", "0\n");
        f
    }

    fn put(&self, name: &str, body: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, body).unwrap();
        p
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).display().to_string()
    }
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_listpart"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn counts_split_partitions_of_a_path() {
    let f = Files::new();
    let o = run(&[
        "count",
        "--matrix",
        &f.path("split.m"),
        "--graph",
        &f.path("p3.g"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "3\n");
}

#[test]
fn empty_list_counts_zero() {
    let f = Files::new();
    let o = run(&[
        "count",
        "--matrix",
        &f.path("split.m"),
        "--graph",
        &f.path("p3.g"),
        "--lists",
        &f.path("empty_v0.l"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn hard_matrix_is_classified_and_refused() {
    let f = Files::new();
    let o = run(&["classify", "--matrix", &f.path("threecol.m")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "HARD\n");
    assert!(stderr(&o).starts_with("certificate: {"), "{}", stderr(&o));

    let o = run(&[
        "count",
        "--matrix",
        &f.path("threecol.m"),
        "--graph",
        &f.path("p3.g"),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).contains("certificate"));

    let o = run(&[
        "count",
        "--unsafe",
        "--matrix",
        &f.path("threecol.m"),
        "--graph",
        &f.path("c5.g"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "30\n");
}

#[test]
fn malformed_input_reports_position() {
    let f = Files::new();
    f.put("bad.m", "i c\n0*\n*x\n");
    let o = run(&[
        "count",
        "--matrix",
        &f.path("bad.m"),
        "--graph",
        &f.path("p3.g"),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad.m:3:2:"), "{}", stderr(&o));

    f.put("bad.g", "3 1\n0 7\n");
    let o = run(&["hompairs", "--graph", &f.path("bad.g")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad.g:2:1:"), "{}", stderr(&o));
}

#[test]
fn budgets_and_limits_exit_with_three() {
    let f = Files::new();
    let o = run(&[
        "oracle",
        "count",
        "--budget",
        "2",
        "--matrix",
        &f.path("split.m"),
        "--graph",
        &f.path("p3.g"),
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&[
        "classify",
        "--max-states",
        "0",
        "--matrix",
        &f.path("threecol.m"),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout(&o), "INCONCLUSIVE\n");
}

#[test]
fn production_and_oracle_agree() {
    let f = Files::new();
    f.put("g.g", "6 7\n0 1\n1 2\n2 0\n3 4\n4 5\n0 3\n2 5\n");
    f.put("min.c", "i 2\nc 1\n");
    for args in [
        vec!["count", "--matrix", "split.m", "--graph", "g.g"],
        vec![
            "count",
            "--matrix",
            "split.m",
            "--graph",
            "g.g",
            "--cardinality",
            "min.c",
        ],
        vec!["hompairs", "--graph", "g.g"],
        vec!["hompairs", "--graph", "c5.g"],
    ] {
        let resolved: Vec<String> = args
            .iter()
            .map(|a| {
                if a.contains('.') {
                    f.path(a)
                } else {
                    a.to_string()
                }
            })
            .collect();
        let resolved: Vec<&str> = resolved.iter().map(String::as_str).collect();
        let prod = run(&resolved);
        let mut oracle_args = vec!["oracle"];
        oracle_args.extend(&resolved);
        let slow = run(&oracle_args);
        assert_eq!(prod.status.code(), Some(0), "{}", stderr(&prod));
        assert_eq!(slow.status.code(), Some(0), "{}", stderr(&slow));
        assert_eq!(stdout(&prod), stdout(&slow), "{args:?}");
    }
}

#[test]
fn reduce_is_output_round_trips() {
    let f = Files::new();
    let out = f.dir.path().join("gadget");
    let o = run(&[
        "reduce-is",
        "--graph",
        &f.path("p3.g"),
        "--k",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let expected =
        reduce_independent_set(&text::parse_graph("3 2\n0 1\n1 2\n").unwrap(), 2).unwrap();
    let m = text::parse_matrix(&fs::read_to_string(out.join("matrix.m")).unwrap()).unwrap();
    assert_eq!(m, expected.matrix);
    let fam = text::parse_family(
        &fs::read_to_string(out.join("family.f")).unwrap(),
        m.parts(),
    )
    .unwrap();
    assert_eq!(fam, expected.family);

    // P3 has the independent set {0, 2}
    let o = run(&[
        "classify",
        "--matrix",
        out.join("matrix.m").to_str().unwrap(),
        "--family",
        out.join("family.f").to_str().unwrap(),
    ]);
    assert_eq!(stdout(&o), "HARD\n");
}

#[test]
fn output_is_deterministic_across_runs_and_jobs() {
    let f = Files::new();
    f.put("k4.g", "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    let cases: Vec<Vec<String>> = vec![
        vec!["decompose-bicobip".into(), "--graph".into(), f.path("k4.g")],
        vec![
            "decompose-subcubes".into(),
            "--graph".into(),
            f.path("p3.g"),
            "--left".into(),
            "1".into(),
        ],
        vec![
            "purify".into(),
            "--matrix".into(),
            f.path("split.m"),
            "--graph".into(),
            f.path("c5.g"),
        ],
        vec![
            "count".into(),
            "--matrix".into(),
            f.path("split.m"),
            "--graph".into(),
            f.path("k4.g"),
        ],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = run(&args);
        let b = run(&args);
        let mut par = vec!["--jobs", "4"];
        par.extend(&args);
        let c = run(&par);
        assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.stdout, c.stdout);
    }
    let o = run(&["decompose-bicobip", "--graph", &f.path("k4.g")]);
    assert_eq!(stdout(&o).lines().count(), 11);
    let o = run(&[
        "decompose-subcubes",
        "--graph",
        &f.path("p3.g"),
        "--left",
        "1",
    ]);
    let mut lines: Vec<&str> = stdout(&o).leak().lines().collect();
    lines.sort();
    assert_eq!(lines, ["0 11", "1 0f", "1 10", "1 11"]);
}

#[test]
fn json_records_are_single_lines() {
    let f = Files::new();
    let o = run(&[
        "--format",
        "json",
        "count",
        "--matrix",
        &f.path("split.m"),
        "--graph",
        &f.path("p3.g"),
    ]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["count"], "3");
    assert_eq!(v["verdict"], "TRACTABLE");
    assert!(v["certificate"].is_null());
    assert!(v["elapsed_ms"].is_u64());

    let o = run(&[
        "--format",
        "json",
        "count",
        "--matrix",
        &f.path("threecol.m"),
        "--graph",
        &f.path("p3.g"),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "HARD");
    assert!(v["certificate"].as_str().unwrap().starts_with('{'));
}

#[test]
fn csp_dump_lists_constraints() {
    let f = Files::new();
    f.put("single.l", "0 i\n1 c\n2 i\n");
    let o = run(&[
        "csp-dump",
        "--matrix",
        &f.path("split.m"),
        "--graph",
        &f.path("p3.g"),
        "--lists",
        &f.path("single.l"),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(
        stdout(&o).starts_with("unary 0: i\nunary 1: c\nunary 2: i\n"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest", "--seed", "7", "--trials", "300"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("mismatches 0"));
}
