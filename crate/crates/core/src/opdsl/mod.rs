//! The operator language: declarations of constrained function slots and a
//! polynomial body in their derivatives.
//!
//! ```text
//! operator "jac2" {
//!     dims 2;
//!     functions u: R^2;
//!     expr = dx(u[1])*dy(u[2]) - dy(u[1])*dx(u[2]);
//! }
//! ```
//!
//! Components are 1-based and `f` abbreviates `f[1]`. Derivatives are written
//! `dxy(f)` (letters `x`, `y`, `z`, only for dimension ≤ 3) or
//! `d[1,0,2](f)`; a bare `f` is the underived function.

mod lexer;
mod parser;
mod printer;
mod table;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::diffpoly::{DiffPolynomial, Rational, Symbol};

pub use printer::pretty_print;
pub use table::{CoefficientTable, Slot, SlotKind, TableError};

/// Linear constraint imposed on a vector-valued slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constraint {
    None,
    Div0,
    Curl0,
}

impl Constraint {
    pub fn keyword(self) -> &'static str {
        match self {
            Constraint::None => "none",
            Constraint::Div0 => "div0",
            Constraint::Curl0 => "curl0",
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionDecl {
    pub name: Symbol,
    pub arity: usize,
    pub constraint: Constraint,
}

/// A parsed and validated operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorSpec {
    pub name: String,
    pub dim: usize,
    pub functions: Vec<FunctionDecl>,
    pub exponents: Option<Vec<Rational>>,
    pub body: DiffPolynomial,
    /// `# expect: key=value` directives found inside or before the block.
    pub expectations: BTreeMap<String, String>,
}

impl OperatorSpec {
    pub fn function(&self, name: &Symbol) -> Option<&FunctionDecl> {
        self.functions.iter().find(|f| &f.name == name)
    }

    pub fn is_constrained(&self) -> bool {
        self.functions.iter().any(|f| f.constraint != Constraint::None)
    }

    /// Same declarations with a different body (used for graded pieces and
    /// substituted specs).
    pub fn with_body(&self, name: String, body: DiffPolynomial) -> OperatorSpec {
        OperatorSpec {
            name,
            body,
            expectations: BTreeMap::new(),
            ..self.clone()
        }
    }

    pub fn symbol_table(&self) -> BTreeMap<Symbol, usize> {
        self.functions.iter().map(|f| (f.name.clone(), f.arity)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParseErrorKind {
    Syntax,
    UndeclaredSymbol,
    ConstraintOnNonVector,
    DimensionMismatch,
    ComponentOutOfRange,
    ExponentSum,
    MissingDims,
    DuplicateSymbol,
}

impl ParseErrorKind {
    pub fn code(self) -> &'static str {
        match self {
            ParseErrorKind::Syntax => "syntax",
            ParseErrorKind::UndeclaredSymbol => "undeclared-symbol",
            ParseErrorKind::ConstraintOnNonVector => "constraint-on-non-vector",
            ParseErrorKind::DimensionMismatch => "dimension-mismatch",
            ParseErrorKind::ComponentOutOfRange => "component-out-of-range",
            ParseErrorKind::ExponentSum => "exponent-sum",
            ParseErrorKind::MissingDims => "missing-dims",
            ParseErrorKind::DuplicateSymbol => "duplicate-symbol",
        }
    }

    pub fn all() -> [ParseErrorKind; 8] {
        [
            ParseErrorKind::Syntax,
            ParseErrorKind::UndeclaredSymbol,
            ParseErrorKind::ConstraintOnNonVector,
            ParseErrorKind::DimensionMismatch,
            ParseErrorKind::ComponentOutOfRange,
            ParseErrorKind::ExponentSum,
            ParseErrorKind::MissingDims,
            ParseErrorKind::DuplicateSymbol,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {kind_code} error: {message}{}", expected_suffix(.expected))]
pub struct ParseError {
    pub kind: ParseErrorKind,
    kind_code: &'static str,
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub message: String,
}

fn expected_suffix(expected: &[String]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!(" (expected one of: {})", expected.join(", "))
    }
}

impl ParseError {
    pub fn new(
        kind: ParseErrorKind,
        line: usize,
        col: usize,
        expected: Vec<String>,
        message: impl Into<String>,
    ) -> Self {
        ParseError {
            kind,
            kind_code: kind.code(),
            line,
            col,
            expected,
            message: message.into(),
        }
    }
}

/// Parses text containing exactly one operator.
pub fn parse(text: &str) -> Result<OperatorSpec, ParseError> {
    let mut specs = parse_file(text)?;
    if specs.len() != 1 {
        return Err(ParseError::new(
            ParseErrorKind::Syntax,
            1,
            1,
            vec!["exactly one operator".into()],
            format!("found {} operators", specs.len()),
        ));
    }
    Ok(specs.remove(0))
}

/// Parses one or more operators.
pub fn parse_file(text: &str) -> Result<Vec<OperatorSpec>, ParseError> {
    let (tokens, directives) = lexer::tokenize(text)?;
    parser::Parser::new(tokens, directives).file()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffpoly::int;

    #[test]
    fn jacobian_and_monge_ampere() {
        let j = parse(r#"operator "jac2" { dims 2; functions u: R^2; expr = dx(u[1])*dy(u[2]) - dy(u[1])*dx(u[2]); }"#)
            .unwrap();
        assert_eq!(j.name, "jac2");
        assert_eq!(j.dim, 2);
        assert_eq!(j.body.num_terms(), 2);

        let ma = parse(
            r#"operator "ma" { dims 2; functions u: R^1, v: R^1; expr = dxx(u)*dyy(v) + dyy(u)*dxx(v) - 2*dxy(u)*dxy(v); }"#,
        )
        .unwrap();
        assert_eq!(ma.functions.len(), 2);
        let coeffs: Vec<_> = ma.body.terms().map(|(_, c)| c.clone()).collect();
        assert!(coeffs.contains(&int(-2)));
    }

    #[test]
    fn rejections() {
        let cases = [
            (r#"operator "a" { dims 2; functions u: R^1; expr = d[1,0,2](u); }"#, ParseErrorKind::DimensionMismatch),
            (r#"operator "a" { dims 2; functions u: R^1; expr = dz(u); }"#, ParseErrorKind::DimensionMismatch),
            (r#"operator "a" { dims 2; functions u: R^1; expr = dx(w); }"#, ParseErrorKind::UndeclaredSymbol),
            (r#"operator "a" { dims 3; functions u: R^2 constraint div0; expr = dx(u[1]); }"#, ParseErrorKind::ConstraintOnNonVector),
            (r#"operator "a" { dims 2; functions u: R^2; expr = dx(u[3]); }"#, ParseErrorKind::ComponentOutOfRange),
            (r#"operator "a" { dims 2; functions u: R^1, v: R^1; exponents [2, 3]; expr = u*v; }"#, ParseErrorKind::ExponentSum),
            (r#"operator "a" { functions u: R^1; expr = u; }"#, ParseErrorKind::MissingDims),
            (r#"operator "a" { dims 2; functions u: R^1, u: R^2; expr = u; }"#, ParseErrorKind::DuplicateSymbol),
            (r#"operator "a" { dims 2; functions u: R^1; expr = dx(u) +; }"#, ParseErrorKind::Syntax),
        ];
        for (text, kind) in cases {
            let e = parse(text).unwrap_err();
            assert_eq!(e.kind, kind, "{text}: {e}");
        }
    }

    #[test]
    fn error_positions_and_expectations() {
        let e = parse("operator \"a\" {\n  dims 2;\n  functions u: R^1;\n  expr = dx(u) * ;\n}").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        assert_eq!((e.line, e.col), (4, 18));
        assert!(!e.expected.is_empty());
    }
}
