use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn commbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commbench"))
        .args(args)
        .env_remove("COMMBENCH_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn value<'a>(report: &'a str, key: &str) -> &'a str {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in {report}"))
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

fn generate(prefix: &str, extra: &[&str]) -> Output {
    let mut args = vec!["generate", "--nodes", "1000", "--communities", "10", "--pt", "0.5", "--mu", "0.4", "--m", "2", "--seed", "7", "--out", prefix];
    args.extend_from_slice(extra);
    commbench(&args)
}

#[test]
fn generate_is_byte_identical_on_rerun() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a"), path(&dir, "b"));
    stdout(&generate(&a, &[]));
    stdout(&generate(&b, &[]));
    for ext in ["edgelist", "partition", "config"] {
        let left = fs::read(format!("{a}.{ext}")).unwrap();
        let right = fs::read(format!("{b}.{ext}")).unwrap();
        assert!(!left.is_empty());
        assert_eq!(left, right, "{ext}");
    }
}

#[test]
fn seed_comes_from_environment() {
    let dir = TempDir::new().unwrap();
    let prefix = path(&dir, "g");
    let out = Command::new(env!("CARGO_BIN_EXE_commbench"))
        .args(["generate", "--nodes", "60", "--communities", "3", "--pt", "0.5", "--mu", "0.2", "--out", &prefix])
        .env("COMMBENCH_SEED", "99")
        .output()
        .unwrap();
    stdout(&out);
    let config = fs::read_to_string(format!("{prefix}.config")).unwrap();
    assert_eq!(value(&config, "seed"), "99");
}

#[test]
fn generate_rejects_too_few_nodes() {
    let dir = TempDir::new().unwrap();
    let out = commbench(&["generate", "--nodes", "25", "--communities", "10", "--pt", "0.5", "--mu", "0.4", "--out", &path(&dir, "x")]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least 3 x communities"));
    assert!(!Path::new(&format!("{}.edgelist", path(&dir, "x"))).exists());
}

#[test]
fn unmixed_partition_matches_components() {
    let dir = TempDir::new().unwrap();
    let prefix = path(&dir, "g");
    stdout(&commbench(&["generate", "--nodes", "500", "--communities", "8", "--pt", "0.5", "--mu", "0", "--m", "3", "--seed", "3", "--out", &prefix]));
    let report = stdout(&commbench(&[
        "analyze", "--graph", &format!("{prefix}.edgelist"), "--partition", &format!("{prefix}.partition"),
    ]));
    assert_eq!(value(&report, "communities"), "8");
    assert_eq!(value(&report, "mean_loyalty"), "1.00000");
    let gcc: f64 = value(&report, "gcc_fraction").parse().unwrap();
    assert!(gcc < 1.0);
    for c in 1..=8 {
        assert_eq!(value(&report, &format!("community.{c}.separability")), "inf");
    }
}

#[test]
fn analyze_triangle() {
    let dir = TempDir::new().unwrap();
    let graph = path(&dir, "t.edgelist");
    fs::write(&graph, "0 1\n1 2\n2 0\n").unwrap();
    let report = stdout(&commbench(&["analyze", "--graph", &graph]));
    assert_eq!(value(&report, "apl"), "1.00000");
    assert_eq!(value(&report, "cc_global"), "1.00000");
    assert_eq!(value(&report, "edges"), "3");
}

#[test]
fn analyze_compacts_sparse_ids_and_reports_parse_errors() {
    let dir = TempDir::new().unwrap();
    let graph = path(&dir, "s.edgelist");
    fs::write(&graph, "# sparse ids\n10 20\n20 30\n30 10\n").unwrap();
    let report = stdout(&commbench(&["analyze", "--graph", &graph, "--compact"]));
    assert_eq!(value(&report, "nodes"), "3");

    fs::write(&graph, "0 1\na b\n").unwrap();
    let out = commbench(&["analyze", "--graph", &graph]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn goodness_csv_written() {
    let dir = TempDir::new().unwrap();
    let prefix = path(&dir, "g");
    stdout(&generate(&prefix, &[]));
    let csv = path(&dir, "goodness.csv");
    stdout(&commbench(&[
        "analyze", "--graph", &format!("{prefix}.edgelist"), "--partition", &format!("{prefix}.partition"),
        "--goodness-out", &csv,
    ]));
    let text = fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("community,size,"));
    assert_eq!(text.lines().count(), 11);
}

fn bridged_triangles(dir: &TempDir) -> (String, String) {
    let graph = path(dir, "b.edgelist");
    fs::write(&graph, "0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n2 3\n").unwrap();
    let truth = path(dir, "b.partition");
    fs::write(&truth, "0 7\n1 7\n2 7\n3 9\n4 9\n5 9\n").unwrap();
    (graph, truth)
}

#[test]
fn detect_recovers_bridged_triangles() {
    let dir = TempDir::new().unwrap();
    let (graph, truth) = bridged_triangles(&dir);
    let out_file = path(&dir, "found.partition");
    let report = stdout(&commbench(&["detect", "--graph", &graph, "--algorithm", "louvain", "--truth", &truth, "--out", &out_file]));
    assert_eq!(value(&report, "nmi"), "1.00000");
    assert_eq!(value(&report, "modularity"), "0.357143");
    assert_eq!(fs::read_to_string(out_file).unwrap(), "0 1\n1 1\n2 1\n3 2\n4 2\n5 2\n");
}

#[test]
fn detect_against_own_output_and_single_cluster() {
    let dir = TempDir::new().unwrap();
    let prefix = path(&dir, "g");
    stdout(&generate(&prefix, &[]));
    let graph = format!("{prefix}.edgelist");
    let found = path(&dir, "found.partition");
    stdout(&commbench(&["detect", "--graph", &graph, "--algorithm", "labelprop", "--seed", "1", "--out", &found]));
    let same = stdout(&commbench(&["detect", "--graph", &graph, "--algorithm", "labelprop", "--seed", "1", "--truth", &found]));
    assert_eq!(value(&same, "nmi"), "1.00000");

    let single = path(&dir, "single.partition");
    let text: String = (0..1000).map(|u| format!("{u} 1\n")).collect();
    fs::write(&single, text).unwrap();
    let report = stdout(&commbench(&["detect", "--graph", &graph, "--algorithm", "louvain", "--truth", &single]));
    assert_eq!(value(&report, "nmi"), "0.00000");
}

#[test]
fn detect_rejects_unknown_algorithm() {
    let dir = TempDir::new().unwrap();
    let (graph, _) = bridged_triangles(&dir);
    let out = commbench(&["detect", "--graph", &graph, "--algorithm", "infomap"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_independent_of_jobs() {
    let dir = TempDir::new().unwrap();
    let run = |jobs: &str, name: &str| {
        let out = path(&dir, name);
        stdout(&commbench(&[
            "sweep", "--nodes", "300", "--communities", "5,10", "--pt", "0.5", "--mu", "0.2,0.8", "--instances", "2",
            "--seed", "4", "--jobs", jobs, "--out", &out,
        ]));
        fs::read_to_string(out).unwrap()
    };
    let one = run("1", "one.csv");
    let four = run("4", "four.csv");
    assert_eq!(one, four);
    // 4 cells x (2 instances + 1 aggregate) + header
    assert_eq!(one.lines().count(), 13);
}

#[test]
fn sweep_from_spec_file_rejects_unknown_keys() {
    let dir = TempDir::new().unwrap();
    let spec = path(&dir, "grid.toml");
    fs::write(&spec, "nodes = [200]\ncommunities = [4]\npt = [0.5]\nmu = [0.3]\ninstances = 2\nbase_seed = 5\n").unwrap();
    let csv = stdout(&commbench(&["sweep", "--spec", &spec]));
    assert_eq!(csv.lines().count(), 4);

    fs::write(&spec, "nodes = [200]\ncommunities = [4]\npt = [0.5]\nmu = [0.3]\ncolour = 1\n").unwrap();
    assert!(!commbench(&["sweep", "--spec", &spec]).status.success());
}

#[test]
fn table3_lists_every_dataset() {
    let out = stdout(&commbench(&["table3", "--seeds", "1"]));
    for name in ["Air Transport Network", "Political Books Network", "Co-author Geometry Network"] {
        assert_eq!(out.lines().filter(|l| l.starts_with(name)).count(), 2, "{name}");
    }
    assert!(out.contains("(3.98,"));
    assert!(out.contains("published as .021"));

    let csv = stdout(&commbench(&["table3", "--seeds", "1", "--csv"]));
    assert_eq!(csv.lines().count(), 7);
}
