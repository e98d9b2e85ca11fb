use std::process::{Command, Output};

fn k3hilb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3hilb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const FAST: [&str; 6] = [
    "--scan-bound",
    "20",
    "--positivity-bound",
    "40",
    "--aux-bound",
    "200",
];

#[test]
fn classify_text() {
    let mut args = vec!["classify", "--degree", "4", "--points", "2"];
    args.extend(FAST);
    let o = k3hilb(&args);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("derived-natural involution"));
    assert!(out.contains("Beauville"));
    assert!(out.contains("(a, b) = (1, 1)"));
}

#[test]
fn classify_json() {
    let mut args = vec![
        "classify", "--degree", "10", "--points", "11", "--format", "json",
    ];
    args.extend(FAST);
    let o = k3hilb(&args);
    assert!(o.status.success());
    let report = k3hilb::report::parse_report(&stdout(&o)).unwrap();
    assert_eq!(report.verdict, k3hilb::Verdict::DerivedNaturalInvolution);
    assert_eq!(report.pell.unwrap().a, 7.into());
}

#[test]
fn no_involution_exits_zero() {
    let o = k3hilb(&["classify", "--degree", "4", "--points", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("perfect square"));
    let o = k3hilb(&["classify", "--degree", "2", "--points", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("natural covering involution"));
}

#[test]
fn usage_errors_exit_nonzero() {
    for args in [
        vec!["classify", "--degree", "5", "--points", "2"],
        vec!["classify", "--degree", "0", "--points", "2"],
        vec!["classify", "--degree", "4", "--points", "1"],
        vec![
            "classify", "--degree", "4", "--points", "2", "--format", "yaml",
        ],
        vec!["classify", "--degree", "4"],
        vec!["sweep", "--degree-range", "5:5", "--points-range", "2:3"],
        vec!["sweep", "--degree-range", "4:6", "--points-range", "3:2"],
        vec!["sweep", "--degree-range", "4-6", "--points-range", "2:3"],
        vec!["pell", "--d", "0"],
    ] {
        let o = k3hilb(&args);
        assert!(!o.status.success(), "{args:?} should fail");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn flop_profile_file() {
    let good = temp_path("good");
    std::fs::write(&good, "# profiles\n0 1\n-1 1\n").unwrap();
    let mut args = vec![
        "classify",
        "--degree",
        "10",
        "--points",
        "3",
        "--flop-profiles",
        &good,
    ];
    args.extend(FAST);
    let out = stdout(&k3hilb(&args));
    assert!(out.contains("(p, k) = (0, 1): discriminant 1, excluded on the path"));
    assert!(out.contains("(p, k) = (-1, 1): discriminant 9, inconclusive"));
    assert!(out.contains("requires an external list"));

    let bad = temp_path("bad");
    std::fs::write(&bad, "1 2 3\n").unwrap();
    let o = k3hilb(&[
        "classify",
        "--degree",
        "10",
        "--points",
        "3",
        "--flop-profiles",
        &bad,
    ]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));

    let o = k3hilb(&[
        "classify",
        "--degree",
        "10",
        "--points",
        "3",
        "--flop-profiles",
        "/nonexistent/profiles",
    ]);
    assert!(!o.status.success());
    std::fs::remove_file(&good).ok();
    std::fs::remove_file(&bad).ok();
}

fn temp_path(tag: &str) -> String {
    std::env::temp_dir()
        .join(format!("k3hilb-cli-{}-{tag}.txt", std::process::id()))
        .to_string_lossy()
        .into_owned()
}

#[test]
fn pell_subcommand() {
    let out = stdout(&k3hilb(&["pell", "--d", "61"]));
    assert!(out.contains("-1: (29718, 3805)"));
    assert!(out.contains("1: (1766319049, 226153980)"));
    let out = stdout(&k3hilb(&["pell", "--d", "3"]));
    assert!(out.contains("-1: no solution"));
    assert!(out.contains("1: (2, 1)"));
    let out = stdout(&k3hilb(&["pell", "--d", "9"]));
    assert!(out.contains("D is a square"));
}

#[test]
fn sweep_skips_odd_degrees() {
    let mut args = vec![
        "sweep",
        "--degree-range",
        "3:6",
        "--points-range",
        "2:3",
        "--format",
        "json",
    ];
    args.extend(FAST);
    let o = k3hilb(&args);
    assert!(o.status.success());
    let sweep = k3hilb::report::parse_sweep(&stdout(&o)).unwrap();
    let cells: Vec<_> = sweep.cells.iter().map(|c| (c.t, c.n)).collect();
    assert_eq!(cells, vec![(2, 2), (2, 3), (3, 2), (3, 3)]);
}
