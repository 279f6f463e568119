use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use bugvec::dataset::CLASS_METRICS;
use bugvec::eval::EvalReport;

const DEBUG_JAVA: &str = "public class Debug {
  public static boolean isDebugOn=true;
  public static void debug(String s) {
    if (isDebugOn) {
      System.out.println(s);
    }
  }
}
";

fn bugvec(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bugvec"))
        .args(args)
        .current_dir(dir)
        .env_remove("BUGVEC_SEED")
        .env_remove("BUGVEC_WORKERS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Corpus of `n` tiny classes, labels (every third buggy) and 60-column
/// metrics, written into `dir`.
fn write_dataset(dir: &Path, n: usize) {
    let mut java = String::new();
    for i in 0..n {
        let extra = if i % 3 == 0 { "int z = 1; if (z) { z = 2; }" } else { "" };
        java.push_str(&format!("class C{i:03} {{ void m() {{ f(); {extra} }} }}\n"));
    }
    fs::write(dir.join("all.java"), java).unwrap();
    let mut labels = String::from("doc_id,bug_count\n");
    let mut metrics = format!("doc_id,{}\n", CLASS_METRICS.join(","));
    for i in 0..n {
        labels.push_str(&format!("C{i:03},{}\n", u8::from(i % 3 == 0)));
        let row: Vec<String> = (0..60).map(|j| ((i * 7 + j * 3) % 11).to_string()).collect();
        metrics.push_str(&format!("C{i:03},{}\n", row.join(",")));
    }
    fs::write(dir.join("labels.csv"), labels).unwrap();
    fs::write(dir.join("metrics.csv"), metrics).unwrap();
}

#[test]
fn flatten_debug_class() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("Debug.java"), DEBUG_JAVA).unwrap();
    let o = bugvec(dir.path(), &["flatten", "Debug.java", "-o", "a.tsv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("1 documents"));
    let text = fs::read_to_string(dir.path().join("a.tsv")).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("Debug\t"));
    let o = bugvec(dir.path(), &["flatten", ".", "-o", "b.tsv"]);
    assert_eq!(code(&o), 0);
    assert_eq!(text, fs::read_to_string(dir.path().join("b.tsv")).unwrap());
}

#[test]
fn flatten_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir(dir.path().join("empty")).unwrap();
    assert_eq!(code(&bugvec(dir.path(), &["flatten", "empty", "-o", "x.tsv"])), 2);
    assert_eq!(code(&bugvec(dir.path(), &["flatten", "missing", "-o", "x.tsv"])), 1);
    fs::write(dir.path().join("Debug.java"), DEBUG_JAVA).unwrap();
    fs::write(dir.path().join("Bad.java"), "class Bad { while }").unwrap();
    let o = bugvec(dir.path(), &["flatten", ".", "-o", "x.tsv"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("Bad.java"));
}

#[test]
fn embed_usage_error_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    write_dataset(dir.path(), 12);
    assert_eq!(code(&bugvec(dir.path(), &["flatten", "all.java", "-o", "c.tsv"])), 0);
    let base = ["embed", "-c", "c.tsv", "--model", "m.bin", "--epochs", "5"];
    let o = bugvec(dir.path(), &[&base[..], &["--vectors", "v.csv", "--dim", "0"]].concat());
    assert_eq!(code(&o), 1);
    assert!(!dir.path().join("m.bin").exists());
    for out in ["v1.csv", "v2.csv"] {
        let o = bugvec(dir.path(), &[&base[..], &["--vectors", out, "--method", "pvdbow", "--seed", "4"]].concat());
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("\"method\":\"pvdbow\""));
    }
    assert_eq!(fs::read(dir.path().join("v1.csv")).unwrap(), fs::read(dir.path().join("v2.csv")).unwrap());
}

#[test]
fn eval_combined_declares_85_features_and_report_reads_back() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_dataset(d, 40);
    assert_eq!(code(&bugvec(d, &["flatten", "all.java", "-o", "c.tsv"])), 0);
    let o = bugvec(d, &["embed", "-c", "c.tsv", "--model", "m.bin", "--vectors", "v.csv", "--epochs", "5"]);
    assert_eq!(code(&o), 0);
    let o = bugvec(
        d,
        &[
            "eval", "--mode", "combined", "--vectors", "v.csv", "--metrics", "metrics.csv", "--labels", "labels.csv",
            "--classifier", "logistic", "--classifier", "tree", "--k", "5", "--out-dir", "r",
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let mut reports = 0;
    for e in fs::read_dir(d.join("r")).unwrap() {
        let p = e.unwrap().path();
        if p.extension().is_some_and(|x| x == "json") {
            let r = EvalReport::from_json(&fs::read_to_string(&p).unwrap()).unwrap();
            assert_eq!(r.descriptor.n_features, 85);
            assert!(r.is_consistent());
            reports += 1;
        }
    }
    assert_eq!(reports, 2);
    let summary = fs::read_to_string(d.join("r/summary.txt")).unwrap();
    let o = bugvec(d, &["report", "r"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), summary);

    let o = bugvec(d, &["featurize", "--mode", "metrics", "--metrics", "metrics.csv", "--labels", "labels.csv", "-o", "t.csv"]);
    assert_eq!(code(&o), 0);
    let header = fs::read_to_string(d.join("t.csv")).unwrap();
    assert_eq!(header.lines().next().unwrap().split(',').count(), 62);
    assert_eq!(header.lines().count(), 41);
}

#[test]
fn missing_source_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    write_dataset(dir.path(), 6);
    let o = bugvec(dir.path(), &["eval", "--mode", "combined", "--metrics", "metrics.csv", "--labels", "labels.csv", "--out-dir", "r"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn permute_writes_twenty_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_dataset(d, 60);
    let o = bugvec(
        d,
        &["permute", "--mode", "metrics", "--metrics", "metrics.csv", "--labels", "labels.csv", "--classifier", "naive_bayes", "--out-dir", "p"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let jsons = fs::read_dir(d.join("p"))
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "json"))
        .count();
    assert_eq!(jsons, 20);
    let summary = fs::read_to_string(d.join("p/summary.txt")).unwrap();
    assert!(summary.contains("median"));
    assert!(summary.contains("naive_bayes  metrics       20"));
}

#[test]
fn grid_plan_counts_full_defaults() {
    let dir = tempfile::tempdir().unwrap();
    write_dataset(dir.path(), 6);
    fs::write(dir.path().join("c.tsv"), "").unwrap();
    let o = bugvec(dir.path(), &["grid", "-c", "c.tsv", "--labels", "labels.csv", "--out-dir", "g", "--plan"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("168 embedding configurations x 8 classifier(s): 1344"), "{}", stdout(&o));
}

#[test]
fn seed_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    write_dataset(dir.path(), 6);
    assert_eq!(code(&bugvec(dir.path(), &["flatten", "all.java", "-o", "c.tsv"])), 0);
    let o = Command::new(env!("CARGO_BIN_EXE_bugvec"))
        .args(["embed", "-c", "c.tsv", "--model", "m.bin", "--vectors", "v.csv", "--epochs", "2"])
        .current_dir(dir.path())
        .env("BUGVEC_SEED", "77")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("\"seed\":77"));
}

#[test]
fn help_annotates_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let o = bugvec(dir.path(), &["eval", "--help"]);
    assert_eq!(code(&o), 0);
    let help = stdout(&o);
    for needle in ["[default: 10]", "[default: 0.5]", "[default: embedding]", "BUGVEC_SEED"] {
        assert!(help.contains(needle), "missing {needle}");
    }
    let help = stdout(&bugvec(dir.path(), &["embed", "--help"]));
    for needle in ["[default: 25]", "[default: 12]", "[default: 80]", "[default: pvdm]"] {
        assert!(help.contains(needle), "missing {needle}");
    }
    assert_eq!(code(&bugvec(dir.path(), &["eval", "--bogus"])), 1);
}
