use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures");
    root.join(format!("{name}.sub")).display().to_string()
}

fn cobham(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cobham"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn fixpoint_prints_the_fibonacci_prefix() {
    let o = cobham(&["fixpoint", &fixture("fibonacci"), "-n", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "01001010\n");
}

#[test]
fn analyze_reports_the_eigenvalue_gap() {
    let o = cobham(&["analyze", &fixture("not_good")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["good"], false);
    assert_eq!(v["goodness"]["verdict"], "eigenvalue_gap");
    assert_eq!(v["goodness"]["dominant"]["exact"], "3");
    assert_eq!(v["goodness"]["best_primitive"]["exact"], "2");
    assert_eq!(v["version"], concat!("cobham ", env!("CARGO_PKG_VERSION")));
}

#[test]
fn periodic_pair_is_consistent() {
    let o = cobham(&["cobham", &fixture("per2"), &fixture("per3"), "-n", "100000"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["conclusion"]["kind"], "ConsistentPeriodic");
    assert_eq!(v["independence"]["verdict"], "Independent");
}

#[test]
fn different_sequences_exit_inconclusive() {
    let o = cobham(&["cobham", &fixture("fibonacci"), &fixture("per3"), "-n", "1000"]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn exit_codes_for_bad_input() {
    assert_eq!(cobham(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(cobham(&["fixpoint"]).status.code(), Some(1));
    assert_eq!(cobham(&["fixpoint", "/nonexistent/file.sub"]).status.code(), Some(1));
    assert_eq!(cobham(&["--bits", "8", "fixtures"]).status.code(), Some(1));

    let dir = std::env::temp_dir().join(format!("cobham-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.sub");
    std::fs::write(&bad, "alphabet a b\nstart a\nrule a -> a q\nrule b -> b\n").unwrap();
    assert_eq!(cobham(&["analyze", bad.to_str().unwrap()]).status.code(), Some(2));
    // Parses, but `a` is not prolongable.
    let pre = dir.join("pre.sub");
    std::fs::write(&pre, "alphabet a b\nstart a\nrule a -> b a\nrule b -> b\n").unwrap();
    assert_eq!(cobham(&["analyze", pre.to_str().unwrap()]).status.code(), Some(3));
    let o = cobham(&["returns", &fixture("fibonacci"), "-u", "11", "-n", "1000"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        vec!["analyze".to_string(), fixture("erasing_image"), "-n".into(), "4000".into()],
        vec!["cobham".to_string(), fixture("per2"), fixture("per3"), "-n".into(), "5000".into()],
        vec!["fuzz".to_string(), "--seed".into(), "4".into(), "--count".into(), "5".into()],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(cobham(&args).stdout, cobham(&args).stdout);
    }
}

#[test]
fn every_fixture_passes_analyze() {
    let o = cobham(&["fixtures"]);
    for name in stdout(&o).lines() {
        let by_path = cobham(&["analyze", &fixture(name)]);
        assert_eq!(by_path.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&by_path.stderr));
        let bundled = cobham(&["analyze", &format!("fixture:{name}")]);
        assert_eq!(bundled.status.code(), Some(0), "{name}");
    }
}

#[test]
fn growth_csv() {
    let o = cobham(&["growth", &fixture("tau_aaab")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("letter,d,theta_approx,theta_charpoly,mortal,c_estimate,residual"));
    assert!(lines.next().unwrap().starts_with("a,0,3,x - 3,false,"));

    let dir = std::env::temp_dir().join(format!("cobham-growth-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("mortal.sub");
    std::fs::write(&f, "alphabet a b c\nstart a\nrule a -> a a b c\nrule b -> c\nrule c ->\n").unwrap();
    let text = stdout(&cobham(&["growth", f.to_str().unwrap()]));
    assert!(text.lines().any(|l| l == "b,,,,true,,") && text.lines().any(|l| l == "c,,,,true,,"), "{text}");
    assert!(text.lines().any(|l| l.starts_with("a,0,2,")), "{text}");
}

#[test]
fn normalize_writes_system_and_sidecar() {
    let dir = std::env::temp_dir().join(format!("cobham-norm-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("tm.sub");
    let o = cobham(&["normalize", &fixture("erasing_image"), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("rule a -> a b") && text.contains("rule b -> b a"));
    let car: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("tm.json")).unwrap()).unwrap();
    assert_eq!(car["k"], 1);
    assert_eq!(car["eigenvalue_before"]["exact"], "3");
    assert_eq!(car["eigenvalue_after"]["exact"], "2");
    // The written file is itself a valid input.
    let again = cobham(&["fixpoint", out.to_str().unwrap(), "-n", "8"]);
    assert_eq!(stdout(&again), "abbabaab\n");
}

#[test]
fn returns_csv_and_periodicity_json() {
    let o = cobham(&["returns", &fixture("fibonacci"), "-u", "00", "-n", "10000"]);
    assert_eq!(stdout(&o), "u,len,returns,min_len,max_len,max_gap\n00,2,2,3,5,5\n");
    let o = cobham(&["periodicity", &fixture("eventually_constant"), "-n", "1000"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "Periodic");
    assert_eq!(v["preperiod"], 2);
    assert_eq!(v["period"], 1);
}
