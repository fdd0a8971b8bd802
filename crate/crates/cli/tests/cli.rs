use std::path::PathBuf;
use std::process::{Command, Output};

use pogline_cli::commands::{self, Failure, EXIT_INCONSISTENT};
use pogline_cli::report::CatalogSection;
use pogline_cli::Report;

fn data(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    root.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pogline"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Report {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let report = Report::from_json(&text).unwrap();
    assert_eq!(report.to_json() + "\n", text, "json round trip");
    report
}

#[test]
fn screen_five_general_lines() {
    let out = run(&["screen", "d=5;t2=10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("1 + 5t + 7t^2  irreducible over Q"));
    assert!(text.contains("non-POG screen: NotPOG"));
}

#[test]
fn screen_spec_and_file_agree() {
    let a = json(&["screen", "d=17;t2=16,t3=24,t4=8"]);
    let b = json(&["screen", &data("k17.weak")]);
    assert_eq!(a.screen, b.screen);
    let s = a.screen.unwrap();
    assert_eq!(s.h_range, Some((7, 15)));
    assert!(s.polynomials.iter().all(|p| p.quad_coeff == 88 - p.h && p.split.is_none()));
    assert!(s.verdict.is_not_pog());
}

#[test]
fn screen_mpog_candidate() {
    let r = json(&["screen", "d=14;t2=9,t3=16,t4=4,t5=1"]);
    let s = r.screen.unwrap();
    assert_eq!(s.mpog_roots, vec![6, 7]);
    assert_eq!(s.mpog_candidates, vec![vec![7, 7, 8], vec![6, 8, 9]]);
    assert_eq!(r.invariants.unwrap().tau, 125);
}

#[test]
fn analyze_reference_files() {
    let r = json(&["analyze", &data("triangle.arr")]);
    let p = r.profile.unwrap();
    assert_eq!((p.exponents, p.tau), (vec![1, 1], 3));

    let r = json(&["analyze", &data("dual_hesse.arr")]);
    let p = r.profile.unwrap();
    assert_eq!(p.classification.to_string(), "Free");
    assert_eq!((p.exponents, p.tau), (vec![4, 4], 48));
}

#[test]
fn delete_dual_hesse_line() {
    let r = json(&["delete", &data("dual_hesse.arr"), "--line", "0", "--confirm"]);
    assert_eq!(r.deletions.len(), 1);
    let g = &r.deletions[0];
    assert_eq!(g.analysis.classification.to_string(), "NearlyFree");
    assert_eq!(g.analysis.deletion_exponents, vec![4, 4, 4]);
    let p = g.profile.as_ref().unwrap();
    assert_eq!((p.tau, p.defect), (36, Some(1)));
}

#[test]
fn delete_klein_all_lines_is_one_orbit() {
    let r = json(&["delete", &data("klein.arr"), "--all-lines"]);
    assert_eq!(r.deletions.len(), 1);
    let g = &r.deletions[0];
    assert_eq!(g.lines, (0..21).collect::<Vec<_>>());
    assert_eq!(g.analysis.deletion_exponents, vec![9, 11, 12]);
    assert_eq!(g.analysis.classification.to_string(), "MPOG");
}

#[test]
fn klein_point_star_is_not_pog() {
    let r = json(&["--mode", "modular", "analyze", &data("klein.arr")]);
    let quadruple = r.points.iter().find(|p| p.lines.len() == 4).unwrap().index;
    let r = json(&["delete", &data("klein.arr"), "--point-star", &quadruple.to_string()]);
    let star = r.point_star.unwrap();
    assert_eq!(star.multiplicity, 4);
    assert_eq!(star.remaining.to_string(), "d=17;t2=16,t3=24,t4=8");
    assert!(star.screen.verdict.is_not_pog());
}

#[test]
fn catalog_commands() {
    let r = json(&["catalog", "list"]);
    let Some(CatalogSection::List(entries)) = r.catalog else { panic!() };
    assert!(entries.iter().any(|e| e.name == "Klein"));
    assert_eq!(entries.len(), 13);

    let text = stdout(&run(&["catalog", "show", "A(19,7)"]));
    assert!(text.contains("(19; 21, 15, 15, 0, 1)"));
    assert!(text.contains("MPOG [9, 10, 11]"));

    let r = json(&["catalog", "screen"]);
    let Some(CatalogSection::Screen(screen)) = r.catalog else { panic!() };
    assert_eq!(screen.positives().len(), 9);
    assert!(r.checks.iter().all(|c| c.pass));
}

#[test]
fn verify_passes_on_reference_files() {
    for f in ["triangle.arr", "dual_hesse.arr"] {
        let r = json(&["verify", &data(f)]);
        assert!(r.checks.iter().any(|c| c.name == "mode-agreement" && c.pass));
        assert!(r.all_pass());
    }
}

#[test]
fn large_primes_are_strings() {
    let out = run(&["--json", "--primes", "2305843009213693951", "analyze", &data("triangle.arr")]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\"2305843009213693951\""));
    assert_eq!(Report::from_json(&text).unwrap().to_json() + "\n", text);
}

#[test]
fn output_is_deterministic() {
    let args = ["--json", "catalog", "screen"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn validation_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.arr");
    std::fs::write(&bad, "field rational\nline 1 0\n").unwrap();
    let bad = bad.to_string_lossy().into_owned();
    for args in [
        vec!["screen", "d=5;t2=9"],
        vec!["analyze", bad.as_str()],
        vec!["analyze", "/nonexistent.arr"],
        vec!["--primes", "17", "analyze", &data("triangle.arr")],
        vec!["catalog", "show", "nope"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let out = run(&["delete", &data("dual_hesse.arr"), "--line", "9"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["delete", &data("dual_hesse.arr"), "--line", "0", "--parent", "3,5"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("differ"), "{err}");
}

#[test]
fn consistency_failures_map_to_three() {
    let evidence = pogline::syzygy::Evidence {
        profile: pogline::syzygy::assemble_profile(
            &"d=3;t2=3".parse().unwrap(),
            vec![1, 1],
            pogline::VerificationMode::Exact,
        ),
        stats: Vec::new(),
    };
    let f: Failure = pogline::syzygy::SyzygyError::Inconsistent(Box::new(evidence)).into();
    assert_eq!(f.code, EXIT_INCONSISTENT);
    let f: Failure = pogline::syzygy::SyzygyError::PrimeDisagreement("x".into()).into();
    assert_eq!(f.code, EXIT_INCONSISTENT);
    assert_eq!(commands::parse_pair("4, 4"), Ok((4, 4)));
    assert!(commands::parse_pair("4").is_err());
}
