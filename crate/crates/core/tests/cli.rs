//! The `nelson` binary: output formats, golden files and exit codes.

use std::path::Path;
use std::process::{Command, Output};

use nelson_core::kernel::{CORPUS, MUTANTS};
use nelson_core::semantics::{eval, parse_model, validate_model, Environment};
use nelson_core::syntax::{parse_formula_inferring, Language, Signature};

fn nelson(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nelson"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn check_prints_the_derived_sequent() {
    let o = nelson(&["check", "corpus/n4-negI-unfold-1.nd"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "⊢_N4I derived: forall x.(~F(x) | (exists y.(F(y) & ~y=x)) | ~G(x)) from {~I x[F(x),G(x)]}\n"
    );
}

#[test]
fn check_reports_the_failing_node() {
    let o = nelson(&["check", "corpus/mutants/discharge-twice.nd"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("at node root.1"), "{out}");
    assert!(out.contains("discharge error"), "{out}");
}

#[test]
fn logic_override() {
    // The same script is fine in Int and rejected in N4.
    let o = nelson(&["check", "--logic", "N4", "corpus/int-efq.nd"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("not available in N4"));
}

#[test]
fn mutants_golden() {
    let mut args = vec!["--format", "lines", "check"];
    let paths: Vec<String> = MUTANTS.iter().map(|(n, _)| format!("corpus/mutants/{n}.nd")).collect();
    args.extend(paths.iter().map(String::as_str));
    let o = nelson(&args);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), golden("mutants.lines"));
}

#[test]
fn exit_codes_across_the_corpus() {
    for (name, _) in CORPUS {
        let o = nelson(&["check", &format!("corpus/{name}.nd")]);
        assert_eq!(code(&o), 0, "{name}");
    }
    for (name, _) in MUTANTS {
        let o = nelson(&["check", &format!("corpus/mutants/{name}.nd")]);
        assert_eq!(code(&o), 1, "{name}");
    }
}

#[test]
fn translate() {
    let o = nelson(&["translate", "~(P(a) -> Q(a))"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "P(a) & Q'(a)\n");
    let o = nelson(&["--format", "lines", "translate", "~forall x.~E!(x)"]);
    assert_eq!(stdout(&o), "translate\t~forall x.~E!(x)\texists x.E!(x)\n");
    let o = nelson(&["translate", "~I x[P(x),Q(x)]"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn search_emits_a_countermodel_file() {
    let o = nelson(&["search", "N4", "tests/fixtures/explosion.seq", "--worlds", "1", "--objects", "1"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    let (head, file) = out.split_once('\n').unwrap();
    assert!(head.starts_with("countermodel found at world w0"), "{head}");
    let m = parse_model(file).unwrap();
    assert!(validate_model(&m).is_empty());
    let mut sig = Signature::new(Language::Negation);
    let glut = parse_formula_inferring("P(a) & ~P(a)", &mut sig).unwrap();
    let q = parse_formula_inferring("Q(a)", &mut sig).unwrap();
    let env = Environment::of(&m);
    assert!(eval(&m, 0, &glut, &env).unwrap());
    assert!(!eval(&m, 0, &q, &env).unwrap());
}

#[test]
fn search_lines() {
    let o = nelson(&["--format", "lines", "search", "INT", "tests/fixtures/excluded-middle.seq", "--worlds", "2", "--objects", "1"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), golden("excluded-middle.lines"));
    let o = nelson(&["--format", "lines", "search", "INT", "tests/fixtures/excluded-middle.seq", "--worlds", "1", "--objects", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "search\tINT\tnone\t2\n");
    let o = nelson(&["search", "N4", "tests/fixtures/identity.seq"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("no countermodel within bounds"));
}

#[test]
fn eval_and_validate() {
    let o = nelson(&["eval", "tests/fixtures/glut.km", "w0", "P(a) & ~P(a)"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "true\n"));
    let o = nelson(&["--format", "lines", "eval", "tests/fixtures/glut.km", "w0", "~~P(a) -> Q(a)"]);
    assert_eq!(code(&o), 2, "Q is not in the model");
    let o = nelson(&["validate-model", "tests/fixtures/glut.km"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "no violations\n"));
    let o = nelson(&["--format", "lines", "validate-model", "tests/fixtures/shrinking.km"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), golden("shrinking.lines"));
}

#[test]
fn usage_and_parse_errors() {
    let o = nelson(&["search", "N4", "tests/fixtures/broken.seq"]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("broken.seq:2:1"), "{err}");
    assert_eq!(code(&nelson(&["check", "no/such/file.nd"])), 2);
    assert_eq!(code(&nelson(&["frobnicate"])), 2);
    assert_eq!(code(&nelson(&["search", "N5", "tests/fixtures/identity.seq"])), 2);
    assert_eq!(code(&nelson(&["search", "N4", "tests/fixtures/identity.seq", "--worlds", "9"])), 2);
    assert_eq!(code(&nelson(&["eval", "tests/fixtures/glut.km", "w7", "P(a)"])), 2);
}

#[test]
fn corpus_golden_at_small_bounds() {
    let o = nelson(&["--format", "lines", "corpus", "--worlds", "1", "--objects", "1", "--depth", "0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), golden("corpus-small.lines"));
}
