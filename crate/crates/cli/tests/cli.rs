//! End-to-end runs of the binary: exit codes, output files and headers.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("blochlab-cli-{tag}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        fs::create_dir_all(&dir).unwrap();
        Self(dir)
    }

    fn config(&self, body: &str) -> PathBuf {
        let p = self.0.join("run.toml");
        fs::write(&p, body).unwrap();
        p
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

fn run(exp: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blochlab"))
        .arg(exp)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

const CUTOFF_TOO_SMALL: &str = r#"
experiment = "cutoff"
candidates = [0.5]
samples = [1024, 2048]
whitney_depth = 12
[set]
cantor = "fat:0.125,0.125"
depth = 2
"#;

#[test]
fn writes_report_with_units_and_plot() {
    let s = Scratch::new("ok");
    let cfg = s.config("experiment = \"entropy\"\ncantor = \"fat:0.125,0.125\"\ndepths = [2, 4, 8]\n");
    let out = s.0.join("out");
    let o = run("entropy", &cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("report.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with("depth[dimensionless],"), "{header}");
    assert!(header.contains("total[turns]") && header.ends_with("collar_verdict"), "{header}");
    assert_eq!(csv.lines().count(), 4);
    let svg = fs::read_to_string(out.join("plot.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains(r#"width="800" height="600""#));
}

#[test]
fn plot_can_be_disabled() {
    let s = Scratch::new("noplot");
    let cfg = s.config("experiment = \"entropy\"\nplot = false\ncantor = \"fat:0.125,0.125\"\ndepths = [2, 4]\n");
    let out = s.0.join("out");
    assert_eq!(run("entropy", &cfg, &out, &[]).status.code(), Some(0));
    assert!(out.join("report.csv").exists() && !out.join("plot.svg").exists());
}

#[test]
fn invalid_inputs_exit_2_without_output() {
    let s = Scratch::new("invalid");
    let cases = [
        ("entropy", "experiment = \"entropy\"\ncantor = \"fat:0.125,0.125\"\ndepths = [2]\nbogus = 1\n"),
        ("entropy", "experiment = \"entropy\"\nmajorant = \"power:-3\"\ncantor = \"fat:0.125,0.125\"\ndepths = [2]\n"),
        ("content", "experiment = \"entropy\"\ncantor = \"fat:0.125,0.125\"\ndepths = [2]\n"),
        ("capacity", "experiment = \"capacity\"\narc = \"[0,0.5)\"\nresolutions = [100]\n"),
        ("entropy", "experiment = \"entropy\"\ncantor = \"fat:0.125,0.125\"\ndepths = [4, 2]\n"),
    ];
    for (i, (exp, body)) in cases.iter().enumerate() {
        let cfg = s.config(body);
        let out = s.0.join(format!("out{i}"));
        let o = run(exp, &cfg, &out, &[]);
        assert_eq!(o.status.code(), Some(2), "case {i}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!out.exists(), "case {i} left output behind");
    }
}

#[test]
fn bad_thread_count_is_invalid() {
    let s = Scratch::new("threads");
    let cfg = s.config("experiment = \"entropy\"\ncantor = \"fat:0.125,0.125\"\ndepths = [2]\n");
    let o = Command::new(env!("CARGO_BIN_EXE_blochlab"))
        .args(["entropy", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(s.0.join("out"))
        .env("BLOCHLAB_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numeric_flags_warn_or_fail_under_strict() {
    let s = Scratch::new("strict");
    let cfg = s.config(CUTOFF_TOO_SMALL);
    let out = s.0.join("strict");
    let o = run("cutoff", &cfg, &out, &["--strict"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!out.exists());

    let out = s.0.join("lenient");
    let o = run("cutoff", &cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert!(out.join("report.csv").exists());
}

#[test]
fn rerun_is_byte_identical() {
    let s = Scratch::new("rerun");
    let cfg = s.config("experiment = \"lp-check\"\nseed = 9\npairs = 5\n");
    let (a, b) = (s.0.join("a"), s.0.join("b"));
    assert_eq!(run("lp-check", &cfg, &a, &[]).status.code(), Some(0));
    assert_eq!(run("lp-check", &cfg, &b, &[]).status.code(), Some(0));
    assert_eq!(fs::read(a.join("report.csv")).unwrap(), fs::read(b.join("report.csv")).unwrap());
}
