//! The bundled operator corpus and the error-class fixtures.

use std::path::Path;

use cclab::corpus;
use cclab::criteria::analyze;
use cclab::opdsl::{parse, parse_file, pretty_print, ParseErrorKind};

fn error_fixture(kind: ParseErrorKind) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures/errors")
        .join(format!("{}.op", kind.code()));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn corpus_has_at_least_twenty_operators() {
    let specs = corpus::load().unwrap();
    assert!(specs.len() >= 20, "{} operators", specs.len());
    let mut names: Vec<_> = specs.iter().map(|s| s.name.clone()).collect();
    names.dedup();
    assert_eq!(names.len(), specs.len());
}

#[test]
fn parse_print_parse_is_the_identity() {
    for (file, text) in corpus::FILES {
        for spec in parse_file(text).unwrap() {
            let printed = pretty_print(&spec);
            let again = parse(&printed).unwrap_or_else(|e| panic!("{file}: reparse failed: {e}\n{printed}"));
            assert_eq!(again, spec, "{file}");
            // Printing is a fixed point after one round.
            assert_eq!(pretty_print(&again), printed, "{file}");
        }
    }
}

#[test]
fn recorded_expectations_hold() {
    for spec in corpus::load().unwrap() {
        let report = analyze(&spec).unwrap();
        assert!(
            report.inconsistencies().is_empty(),
            "{}: {:?}",
            spec.name,
            report.inconsistencies()
        );
    }
}

#[test]
fn error_fixtures_report_kind_and_position() {
    let expected = [
        (ParseErrorKind::Syntax, 4, 20),
        (ParseErrorKind::UndeclaredSymbol, 4, 21),
        (ParseErrorKind::ConstraintOnNonVector, 3, 22),
        (ParseErrorKind::DimensionMismatch, 4, 18),
        (ParseErrorKind::ComponentOutOfRange, 4, 26),
        (ParseErrorKind::ExponentSum, 4, 5),
        (ParseErrorKind::MissingDims, 3, 5),
        (ParseErrorKind::DuplicateSymbol, 3, 23),
    ];
    assert_eq!(expected.len(), ParseErrorKind::all().len());
    for (kind, line, col) in expected {
        let err = parse(&error_fixture(kind)).expect_err(kind.code());
        assert_eq!((err.kind, err.line, err.col), (kind, line, col), "{}", kind.code());
        let shown = err.to_string();
        assert!(shown.starts_with(&format!("{line}:{col}: {} error:", kind.code())), "{shown}");
    }
}

#[test]
fn comments_and_whitespace_do_not_matter() {
    let a = parse(r#"operator "j" { dims 2; functions u: R^2; expr = dx(u[1])*dy(u[2]) - dy(u[1])*dx(u[2]); }"#).unwrap();
    let b = parse(
        "# Jacobian\noperator \"j\" {\n  dims 2;   # plane\n  functions u: R^2;\n  expr =\n    dx(u[1]) * dy(u[2])\n  - dy(u[1]) * dx(u[2]);\n}\n",
    )
    .unwrap();
    assert_eq!(a.body, b.body);
    assert_eq!(a.functions, b.functions);
}
