use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn ksep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ksep"))
        .args(args)
        .env_remove("KSEP_DENSE_LIMIT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn field(report: &str, key: &str) -> String {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no {key} in {report}"))
        .to_string()
}

#[test]
fn norms_default_table() {
    let o = ksep(&["norms"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "family,n,norm_sq,norm");
    assert_eq!(lines.len(), 29);
    assert!(lines.contains(&"cg,6,33.0000000000,5.74456264654"));
    assert!(lines.contains(&"cluster,8,25.0000000000,5.00000000000"));
}

#[test]
fn norms_beyond_dense_limit_use_closed_path() {
    let o = ksep(&["norms", "--families", "cg", "--n-min", "9", "--n-max", "12"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let sq: Vec<String> = stdout(&o).lines().skip(1).map(|l| l.split(',').nth(2).unwrap().to_string()).collect();
    assert_eq!(sq, ["256.000000000", "513.000000000", "1024.00000000", "2049.00000000"]);
}

#[test]
fn dense_limit_env_override() {
    let o = Command::new(env!("CARGO_BIN_EXE_ksep"))
        .args(["norms", "--families", "w", "--n-min", "6", "--n-max", "6"])
        .env("KSEP_DENSE_LIMIT", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bounds_rows() {
    let o = ksep(&["bounds", "--n", "6"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("n,k,bound,partition\n"));
    assert!(text.contains("6,2,5.19615242271,2|4"));
    assert!(text.contains("6,3,3.46410161514,1|2|3"));
    assert!(text.contains("6,6,1.00000000000,1|1|1|1|1|1"));

    let unrestricted = stdout(&ksep(&["bounds", "--n", "8", "--k-min", "3", "--k-max", "3", "--unrestricted"]));
    assert!(unrestricted.contains("8,3,"), "{unrestricted}");
}

#[test]
fn sweep_writes_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("sweep.csv");
    let o = ksep(&["sweep", "--family", "cg", "--n", "6", "--k", "2", "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# family=cg n=6 k=2 partition=2|4");
    assert!(lines[1].starts_with("# p* = 0.0956"), "{}", lines[1]);
    assert_eq!(lines[2], "p,norm_sq,bound_sq,xi,verdict");
    assert_eq!(lines.len(), 3 + 101);
    assert!(lines[3].starts_with("0,33.0000000000,27.0000000000,"));
    assert!(lines[3].ends_with("NonKSeparable"));
    assert!(lines.last().unwrap().ends_with("Inconclusive"));
}

#[test]
fn sweep_unwritable_path_exits_two() {
    let o = ksep(&["sweep", "--family", "cg", "--n", "6", "--k", "2", "--out", "/nonexistent/dir/x.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cannot write"));
}

#[test]
fn detect_family_and_raw_files() {
    let dir = TempDir::new().unwrap();

    let cg = write(&dir, "cg.toml", "family = \"cg\"\nn = 5\n");
    let o = ksep(&["detect", "--state-file", &cg, "--k", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = stdout(&o);
    assert_eq!(field(&report, "verdict"), "NonKSeparable");
    assert_eq!(field(&report, "partition"), "2|3");

    let zero = write(&dir, "zero.toml", "n = 3\namplitudes = [[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]\n");
    let o = ksep(&["detect", "--state-file", &zero, "--k", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(field(&stdout(&o), "verdict"), "Inconclusive");

    let ghz = write(&dir, "ghz.toml", "family = \"ghz\"\nn = 6\np = 0.2\n");
    let o = ksep(&["detect", "--state-file", &ghz, "--k", "6", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let want = (32.0 * 0.64 + 1.0_f64).sqrt();
    assert!((v["norm"].as_f64().unwrap() - want).abs() < 1e-9);
    assert_eq!(v["verdict"], "NonKSeparable");
}

#[test]
fn detect_warns_on_unnormalized_amplitudes() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bell.toml", "n = 2\namplitudes = [[1,0],[0,0],[0,0],[1,0]]\n");
    let o = ksep(&["detect", "--state-file", &f, "--k", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("warning"));
    assert!(field(&stdout(&o), "norm").starts_with("1.73205080757"));
}

#[test]
fn malformed_files_exit_one() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("bad.toml", "n = \n"),
        ("unknown.toml", "n = 3\nfamily = \"cg\"\ncolour = 1\n"),
        ("short.toml", "n = 2\namplitudes = [[1,0]]\n"),
        ("zero.toml", "n = 1\namplitudes = [[0,0],[0,0]]\n"),
        ("family.toml", "family = \"tree\"\nn = 4\n"),
    ];
    for (name, text) in cases {
        let f = write(&dir, name, text);
        let o = ksep(&["detect", "--state-file", &f, "--k", "2"]);
        assert_eq!(o.status.code(), Some(1), "{name}: {}", stderr(&o));
    }
    let o = ksep(&["detect", "--state-file", "/nonexistent.toml", "--k", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn settings_counts() {
    for (n, want) in [(3usize, 4u64), (4, 9), (5, 16), (6, 33)] {
        let text = stdout(&ksep(&["settings", "--family", "cg", "--n", &n.to_string()]));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(*lines.last().unwrap(), format!("# count: {want}"));
        assert_eq!(lines.len() as u64, want + 1);
        assert!(lines[..lines.len() - 1].iter().all(|l| l.len() == n && !l.contains('I')));
    }
    let noisy = stdout(&ksep(&["settings", "--family", "cg", "--n", "6", "--noise"]));
    assert!(noisy.lines().any(|l| l == "ZZZZZZ"));
    assert!(noisy.ends_with("# count: 34\n"));
}

#[test]
fn appendix_output() {
    let o = ksep(&["appendix", "--n", "10"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("Y^N = 1"));
    assert!(text.contains("sum = 513"));
    assert!(text.contains("match: yes"));
}

#[test]
fn graph_dot_edges() {
    for n in [2usize, 5, 8] {
        let text = stdout(&ksep(&["graph", "--n", &n.to_string()]));
        assert_eq!(text.matches(" -- ").count(), n * (n - 1) / 2);
        assert!(text.trim_start().starts_with("graph"));
    }
}

#[test]
fn output_is_deterministic() {
    for args in [&["norms"][..], &["bounds", "--n", "9"], &["sweep", "--family", "ghz", "--n", "6", "--k", "3"]] {
        assert_eq!(ksep(args).stdout, ksep(args).stdout);
    }
}

#[test]
fn expand_round_trips_norms() {
    let dir = TempDir::new().unwrap();
    for (family, n, p) in [("cg", 5, None), ("w", 4, None), ("cluster", 6, None), ("ghz", 4, Some(0.3))] {
        let mut text = format!("family = \"{family}\"\nn = {n}\n");
        if let Some(p) = p {
            text.push_str(&format!("p = {p}\n"));
        }
        let src = write(&dir, &format!("{family}.toml"), &text);
        let raw = dir.path().join(format!("{family}-raw.toml"));
        let raw = raw.to_str().unwrap();
        let o = ksep(&["expand", "--state-file", &src, "--out", raw]);
        assert!(o.status.success(), "{}", stderr(&o));
        let expanded = std::fs::read_to_string(raw).unwrap();
        assert!(Path::new(raw).exists() && expanded.contains("amplitudes"));
        assert_eq!(expanded.contains("p = "), p.is_some());

        let json = |f: &str| -> f64 {
            let out = stdout(&ksep(&["detect", "--state-file", f, "--k", "2", "--format", "json"]));
            serde_json::from_str::<serde_json::Value>(out.trim()).unwrap()["norm"].as_f64().unwrap()
        };
        assert!((json(&src) - json(raw)).abs() < 1e-12, "{family}");
    }
}
