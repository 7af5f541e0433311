use std::process::{Command, Output};

use lorenz_renorm::scalar::{parse_rational, q, Exact};
use lorenz_renorm_cli::report::{AnalysisReport, ConjugacyReport};
use lorenz_renorm_cli::MODE_ENV;

fn run(args: &[&str]) -> Output {
    run_env(args, None)
}

fn run_env(args: &[&str], mode: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lorenz-renorm"));
    cmd.args(args).env_remove(MODE_ENV);
    if let Some(m) = mode {
        cmd.env(MODE_ENV, m);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn exact(s: &str) -> Exact {
    parse_rational(s).unwrap()
}

fn analyze(args: &[&str]) -> AnalysisReport {
    let o = run(&[&["analyze"], args].concat());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn analyze_symmetric_map_at_depth_one() {
    let r = analyze(&["--a", "13/10", "--b", "13/10", "--c", "1/2"]);
    assert_eq!(r.depth, 1);
    assert_eq!(r.terminal.map.a.value, "169/100");
    assert_eq!(r.terminal.map.b.value, "169/100");
    // A constant-slope map is T_{a, 1 - a c}.
    let (a, c) = (q(13, 10), q(1, 2));
    assert_eq!(exact(&r.conjugacy.beta.value), a);
    assert_eq!(exact(&r.conjugacy.alpha.value), q(1, 1) - a * c);
    assert_eq!(r.mode, "exact");
}

#[test]
fn analyze_records_the_trivial_chain() {
    let r = analyze(&["--a", "1/2", "--b", "8/5", "--c", "2/5"]);
    assert_eq!(r.kappa, 4);
    assert_eq!(r.trivial_chain.len(), 2);
    assert!(r.trivial_chain.iter().all(|s| s.kind.starts_with("trivial")));
    assert_eq!(r.membership, "L_only");
}

#[test]
fn analyze_rejects_maps_outside_the_class() {
    let o = run(&["analyze", "--a", "1", "--b", "1", "--c", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not expand-on-average"), "{}", stderr(&o));
    let o = run(&["analyze", "--a", "x", "--b", "1", "--c", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["analyze", "--a", "3/2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn analyze_reports_cap_exhaustion() {
    let o = run(&["analyze", "--a", "1/2", "--b", "8/5", "--c", "2/5", "--max-period", "1"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn reports_round_trip_and_are_deterministic() {
    let args = ["analyze", "--a", "1/2", "--b", "8/5", "--c", "2/5"];
    let first = stdout(&run(&args));
    assert_eq!(first, stdout(&run(&args)));
    let r: AnalysisReport = serde_json::from_str(&first).unwrap();
    assert_eq!(serde_json::to_string(&r).unwrap() + "\n", first);
    assert_eq!(exact(&r.input.a.value), q(1, 2));
    assert_eq!(exact(&r.input.b.value), q(8, 5));
    assert_eq!(exact(&r.input.c.value), q(2, 5));
    assert!(r.timing_ms.is_none());
    let timed = analyze(&["--a", "1/2", "--b", "8/5", "--c", "2/5", "--timing", "--pretty"]);
    assert!(timed.timing_ms.is_some());
}

/// The unique `m` with `a^(2^m) <= 2 < a^(2^(m+1))`.
fn parry_depth(a: &Exact) -> usize {
    let two = q(2, 1);
    let mut m = 0;
    let mut p = a.clone();
    while p.clone() * p.clone() <= two {
        p = p.clone() * p;
        m += 1;
    }
    m
}

#[test]
fn symmetric_scan_follows_the_parry_intervals() {
    let o = run(&["scan", "--symmetric", "--a-range", "1.05:2:64"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["a", "b", "c", "kappa", "depth", "terminal_slope", "beta", "prime"]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 64);
    for (k, row) in rows.iter().enumerate() {
        let a = exact(&row[0]);
        assert_eq!(a, q(105, 100) + q(95, 100) * q(k as i64 + 1, 64));
        let m = parry_depth(&a);
        assert_eq!(row[4].parse::<usize>().unwrap(), m, "a = {a}");
        let mut slope = a.clone();
        for _ in 0..m {
            slope = slope.clone() * slope;
        }
        assert_eq!(exact(&row[5]), slope);
        assert_eq!(&row[7] == "true", m == 0);
    }
}

#[test]
fn scan_order_ignores_thread_count() {
    let args = [
        "scan",
        "--a-range",
        "1.1:1.9:4",
        "--b-range",
        "1.1:1.9:4",
        "--c-range",
        "0.4:0.6:2",
    ];
    let one = stdout(&run(&[&args[..], &["--parallel", "1"]].concat()));
    let four = stdout(&run(&[&args[..], &["--parallel", "4"]].concat()));
    assert_eq!(one, four);
    assert_eq!(one.lines().count(), 1 + 32);
}

#[test]
fn scan_edge_cases() {
    let o = run(&["scan", "--a-range", "1:2:0", "--b-range", "3/2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "a,b,c,kappa,depth,terminal_slope,beta,prime\n");

    // Invalid points keep their row with empty fields.
    let o = run(&["scan", "--a-range", "0.5", "--b-range", "0.5"]);
    assert_eq!(stdout(&o).lines().nth(1), Some("1/2,1/2,1/2,,,,,"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let o = run(&[
        "scan",
        "--symmetric",
        "--a-range",
        "1.5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("a,b,c,"));

    let missing = dir.path().join("no/such/dir.csv");
    let o = run(&[
        "scan",
        "--symmetric",
        "--a-range",
        "1.5",
        "--out",
        missing.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn verify_suites_report_and_set_the_exit_code() {
    let o = run(&["verify", "--suite", "decomposition", "--samples", "100"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).starts_with("decomposition: 100/100 passed"),
        "{}",
        stdout(&o)
    );

    let o = run(&["verify", "--suite", "period-oracle", "--samples", "200"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).starts_with("period-oracle: 200/200 passed"),
        "{}",
        stdout(&o)
    );

    // Maps with ab <= 2 violate the expansion bound through the period-2 pair.
    let o = run(&["verify", "--suite", "expansion", "--samples", "100", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(5));
    let text = stdout(&o);
    assert!(text.contains("violating maps with only the period-2 pair"), "{text}");
    assert!(!text.contains("violating maps with a longer pair"), "{text}");

    let o = run(&["verify", "--suite", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

fn conjugate(args: &[&str], mode: Option<&str>) -> ConjugacyReport {
    let o = run_env(&[&["conjugate"], args].concat(), mode);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn conjugate_examples() {
    let r = conjugate(&["--a", "3/2", "--b", "3/2", "--c", "1/2"], None);
    assert_eq!((exact(&r.beta.value), exact(&r.alpha.value)), (q(3, 2), q(1, 4)));

    let r = conjugate(&["--a", "1/2", "--b", "8/5", "--c", "2/5", "--depth", "40"], None);
    assert!(r.certificate.kneading_match_length >= 40);
    assert_eq!(r.certificate.beta_source, "lap_growth");

    // T_{9/5, 3/10} sends 1 to 11/10, so it is not a map of the interval.
    let o = run(&["conjugate", "--a", "9/5", "--b", "9/5", "--c", "7/18"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn mode_flag_beats_environment() {
    let args = ["--a", "13/10", "--b", "13/10", "--c", "1/2"];
    assert_eq!(conjugate(&args, Some("float")).beta.value, "1.3");
    assert_eq!(
        conjugate(&[&args[..], &["--mode", "exact"]].concat(), Some("float"))
            .beta
            .value,
        "13/10"
    );
    assert_eq!(conjugate(&args, None).beta.value, "13/10");
    let o = run_env(&[&["conjugate"], &args[..]].concat(), Some("quad"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_exits_cleanly() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("analyze"));
}
