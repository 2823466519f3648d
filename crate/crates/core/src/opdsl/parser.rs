//! Recursive-descent parser producing validated [`OperatorSpec`]s.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::lexer::{Directive, Tok, Token};
use super::{Constraint, FunctionDecl, OperatorSpec, ParseError, ParseErrorKind};
use crate::diffpoly::{DiffPolynomial, JetVar, Monomial, Rational, Symbol};
use crate::multiindex::{MultiIndex, MAX_DIM};

const KEYWORDS: [&str; 10] = [
    "operator",
    "dims",
    "functions",
    "exponents",
    "expr",
    "constraint",
    "none",
    "div0",
    "curl0",
    "R",
];

/// Names of the form `d`, `dx`, `dxyz`, ... are derivative operators.
fn is_derivative_name(name: &str) -> bool {
    name.strip_prefix('d')
        .is_some_and(|rest| rest.chars().all(|c| matches!(c, 'x' | 'y' | 'z')))
}

pub struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    directives: Vec<Directive>,
    // Per-operator state.
    dim: Option<usize>,
    symbols: BTreeMap<Symbol, usize>,
    /// Token to blame for each declared function's constraint.
    constraint_tokens: Vec<Token>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    pub fn new(tokens: Vec<Token>, directives: Vec<Directive>) -> Self {
        Parser {
            tokens,
            pos: 0,
            directives,
            dim: None,
            symbols: BTreeMap::new(),
            constraint_tokens: Vec::new(),
        }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.tokens[(self.pos + k).min(self.tokens.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn err_at(&self, t: &Token, kind: ParseErrorKind, expected: &[&str], msg: impl Into<String>) -> ParseError {
        ParseError::new(
            kind,
            t.line,
            t.col,
            expected.iter().map(|s| s.to_string()).collect(),
            msg,
        )
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        self.err_at(t, ParseErrorKind::Syntax, expected, format!("unexpected {}", t.tok.describe()))
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn expect_sym(&mut self, c: char) -> PResult<Token> {
        if self.at_sym(c) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&[&format!("`{c}`")]))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<Token> {
        if self.at_keyword(kw) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&[&format!("`{kw}`")]))
        }
    }

    fn expect_int(&mut self) -> PResult<(Token, BigInt)> {
        match &self.peek().tok {
            Tok::Int(s) => {
                let v: BigInt = s.parse().expect("lexer yields digits");
                Ok((self.bump(), v))
            }
            _ => Err(self.unexpected(&["integer"])),
        }
    }

    fn expect_small_int(&mut self) -> PResult<(Token, usize)> {
        let (t, v) = self.expect_int()?;
        let v = usize::try_from(v).map_err(|_| self.err_at(&t, ParseErrorKind::Syntax, &[], "integer too large"))?;
        Ok((t, v))
    }

    fn rational(&mut self) -> PResult<Rational> {
        let (_, n) = self.expect_int()?;
        if self.at_sym('/') {
            self.bump();
            let (t, d) = self.expect_int()?;
            if d.is_zero() {
                return Err(self.err_at(&t, ParseErrorKind::Syntax, &["nonzero denominator"], "division by zero"));
            }
            Ok(Rational::new(n, d))
        } else {
            Ok(Rational::from_integer(n))
        }
    }

    pub fn file(mut self) -> PResult<Vec<OperatorSpec>> {
        let mut out = Vec::new();
        let mut block_start = 0usize;
        loop {
            if self.peek().tok == Tok::Eof {
                if out.is_empty() {
                    return Err(self.unexpected(&["`operator`"]));
                }
                return Ok(out);
            }
            let (mut spec, end) = self.operator()?;
            for d in &self.directives {
                if d.offset >= block_start && d.offset < end {
                    spec.expectations.insert(d.key.clone(), d.value.clone());
                }
            }
            block_start = end;
            out.push(spec);
        }
    }

    fn operator(&mut self) -> PResult<(OperatorSpec, usize)> {
        self.dim = None;
        self.symbols.clear();
        self.constraint_tokens.clear();
        self.expect_keyword("operator")?;
        let name = match &self.peek().tok {
            Tok::Str(s) => {
                let s = s.clone();
                self.bump();
                s
            }
            _ => return Err(self.unexpected(&["operator name string"])),
        };
        self.expect_sym('{')?;

        let mut functions: Vec<FunctionDecl> = Vec::new();
        let mut exponents: Option<(Token, Vec<Rational>)> = None;
        loop {
            if self.at_keyword("dims") {
                let kw = self.bump();
                let (t, n) = self.expect_small_int()?;
                if n == 0 || n > MAX_DIM {
                    return Err(self.err_at(
                        &t,
                        ParseErrorKind::DimensionMismatch,
                        &[],
                        format!("dimension must be in 1..={MAX_DIM}"),
                    ));
                }
                if self.dim.is_some() {
                    return Err(self.err_at(&kw, ParseErrorKind::Syntax, &[], "dims declared twice"));
                }
                self.dim = Some(n);
                self.expect_sym(';')?;
            } else if self.at_keyword("functions") {
                self.bump();
                loop {
                    functions.push(self.fdecl()?);
                    if self.at_sym(',') {
                        self.bump();
                    } else {
                        break;
                    }
                }
                self.expect_sym(';')?;
            } else if self.at_keyword("exponents") {
                let kw = self.bump();
                self.expect_sym('[')?;
                let mut ps = vec![self.rational()?];
                while self.at_sym(',') {
                    self.bump();
                    ps.push(self.rational()?);
                }
                self.expect_sym(']')?;
                self.expect_sym(';')?;
                exponents = Some((kw, ps));
            } else if self.at_keyword("expr") {
                break;
            } else {
                return Err(self.unexpected(&["`dims`", "`functions`", "`exponents`", "`expr`"]));
            }
        }

        let expr_tok = self.expect_keyword("expr")?;
        let Some(dim) = self.dim else {
            return Err(self.err_at(&expr_tok, ParseErrorKind::MissingDims, &["`dims`"], "no `dims` declaration"));
        };
        for (f, t) in functions.iter().zip(&self.constraint_tokens) {
            if f.constraint != Constraint::None && f.arity != dim {
                return Err(self.err_at(
                    t,
                    ParseErrorKind::ConstraintOnNonVector,
                    &[],
                    format!("`{}` has {} components but {} requires {dim}", f.name, f.arity, f.constraint),
                ));
            }
        }
        self.constraint_tokens.clear();
        if let Some((t, ps)) = &exponents {
            if ps.len() != functions.len() {
                return Err(self.err_at(
                    t,
                    ParseErrorKind::ExponentSum,
                    &[],
                    format!("{} exponents for {} functions", ps.len(), functions.len()),
                ));
            }
            if ps.iter().any(|p| p <= &Rational::one()) {
                return Err(self.err_at(t, ParseErrorKind::ExponentSum, &[], "exponents must exceed 1"));
            }
            let sum: Rational = ps.iter().map(|p| p.recip()).sum();
            if !sum.is_one() {
                return Err(self.err_at(
                    t,
                    ParseErrorKind::ExponentSum,
                    &[],
                    format!("reciprocal exponents sum to {sum}, not 1"),
                ));
            }
        }

        self.expect_sym('=')?;
        let body = if self.at_sym(';') {
            // An empty expression denotes the zero operator.
            self.zero()
        } else {
            self.expr()?
        };
        self.expect_sym(';')?;
        let close = self.expect_sym('}')?;
        let spec = OperatorSpec {
            name,
            dim,
            functions,
            exponents: exponents.map(|(_, p)| p),
            body,
            expectations: BTreeMap::new(),
        };
        Ok((spec, close.offset + 1))
    }

    fn fdecl(&mut self) -> PResult<FunctionDecl> {
        let name_tok = self.peek().clone();
        let name = match &name_tok.tok {
            Tok::Ident(s) => s.clone(),
            _ => return Err(self.unexpected(&["function name"])),
        };
        if is_derivative_name(&name) || KEYWORDS.contains(&name.as_str()) {
            return Err(self.err_at(&name_tok, ParseErrorKind::Syntax, &["function name"], format!("`{name}` is reserved")));
        }
        self.bump();
        let sym = Symbol::new(&name);
        if self.symbols.contains_key(&sym) {
            return Err(self.err_at(
                &name_tok,
                ParseErrorKind::DuplicateSymbol,
                &[],
                format!("`{name}` declared twice"),
            ));
        }
        self.expect_sym(':')?;
        self.expect_keyword("R")?;
        self.expect_sym('^')?;
        let (t, arity) = self.expect_small_int()?;
        if arity == 0 || arity > u16::MAX as usize {
            return Err(self.err_at(&t, ParseErrorKind::Syntax, &["positive arity"], "invalid arity"));
        }
        let mut constraint = Constraint::None;
        let mut ctok = name_tok.clone();
        if self.at_keyword("constraint") {
            ctok = self.bump();
            constraint = match &self.peek().tok {
                Tok::Ident(s) if s == "none" => Constraint::None,
                Tok::Ident(s) if s == "div0" => Constraint::Div0,
                Tok::Ident(s) if s == "curl0" => Constraint::Curl0,
                _ => return Err(self.unexpected(&["`none`", "`div0`", "`curl0`"])),
            };
            self.bump();
        }
        self.constraint_tokens.push(ctok);
        self.symbols.insert(sym.clone(), arity);
        Ok(FunctionDecl {
            name: sym,
            arity,
            constraint,
        })
    }

    fn zero(&self) -> DiffPolynomial {
        DiffPolynomial::from_terms(self.dim.expect("dims checked"), self.symbols.clone(), std::iter::empty())
            .expect("empty polynomial is valid")
    }

    fn constant(&self, c: Rational) -> DiffPolynomial {
        DiffPolynomial::from_terms(self.dim.expect("dims checked"), self.symbols.clone(), [(Monomial::one(), c)])
            .expect("constant polynomial is valid")
    }

    fn expr(&mut self) -> PResult<DiffPolynomial> {
        let mut acc = self.term()?;
        loop {
            if self.at_sym('+') {
                self.bump();
                acc = acc.add(&self.term()?).expect("shared symbol table");
            } else if self.at_sym('-') {
                self.bump();
                acc = acc.sub(&self.term()?).expect("shared symbol table");
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> PResult<DiffPolynomial> {
        let mut acc = self.factor()?;
        while self.at_sym('*') {
            self.bump();
            acc = acc.mul(&self.factor()?).expect("shared symbol table");
        }
        Ok(acc)
    }

    fn factor(&mut self) -> PResult<DiffPolynomial> {
        if self.at_sym('-') {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        let mut base = self.primary()?;
        while self.at_sym('^') {
            self.bump();
            let (t, e) = self.expect_small_int()?;
            if e > 64 {
                return Err(self.err_at(&t, ParseErrorKind::Syntax, &[], "power too large"));
            }
            base = base.pow(e as u32).expect("shared symbol table");
        }
        Ok(base)
    }

    const FACTOR_START: [&'static str; 5] = ["number", "derivative", "function", "`(`", "`-`"];

    fn primary(&mut self) -> PResult<DiffPolynomial> {
        match self.peek().tok.clone() {
            Tok::Int(_) => {
                let c = self.rational()?;
                Ok(self.constant(c))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Ident(name) if is_derivative_name(&name) && name.len() > 1 && self.peek_at(1) == &Tok::Sym('(') => {
                let t = self.bump();
                let index = self.sugar_index(&t, &name[1..])?;
                self.deriv_arg(index)
            }
            Tok::Ident(name) if name == "d" && self.peek_at(1) == &Tok::Sym('[') => {
                self.bump();
                let index = self.general_index()?;
                self.deriv_arg(index)
            }
            Tok::Ident(name) if is_derivative_name(&name) => {
                self.bump();
                Err(self.unexpected(if name == "d" { &["`[`"] } else { &["`(`"] }))
            }
            Tok::Ident(_) => {
                let zero = MultiIndex::zero(self.dim.expect("dims checked")).expect("dim validated");
                let v = self.fref(zero)?;
                Ok(self.jet(v))
            }
            _ => Err(self.unexpected(&Self::FACTOR_START)),
        }
    }

    fn sugar_index(&self, t: &Token, letters: &str) -> PResult<MultiIndex> {
        let dim = self.dim.expect("dims checked");
        if dim > 3 {
            return Err(self.err_at(
                t,
                ParseErrorKind::DimensionMismatch,
                &["`d[...]`"],
                format!("letter derivatives need dimension ≤ 3, found {dim}"),
            ));
        }
        let mut exps = vec![0u32; dim];
        for c in letters.chars() {
            let axis = match c {
                'x' => 0,
                'y' => 1,
                _ => 2,
            };
            if axis >= dim {
                return Err(self.err_at(
                    t,
                    ParseErrorKind::DimensionMismatch,
                    &[],
                    format!("axis `{c}` does not exist in dimension {dim}"),
                ));
            }
            exps[axis] += 1;
        }
        MultiIndex::new(&exps).map_err(|e| self.err_at(t, ParseErrorKind::Syntax, &[], e.to_string()))
    }

    fn general_index(&mut self) -> PResult<MultiIndex> {
        let open = self.expect_sym('[')?;
        let mut exps = vec![self.expect_small_int()?.1];
        while self.at_sym(',') {
            self.bump();
            exps.push(self.expect_small_int()?.1);
        }
        self.expect_sym(']')?;
        let dim = self.dim.expect("dims checked");
        if exps.len() != dim {
            return Err(self.err_at(
                &open,
                ParseErrorKind::DimensionMismatch,
                &[],
                format!("multi-index has {} entries but dims is {dim}", exps.len()),
            ));
        }
        let exps: Vec<u32> = exps.into_iter().map(|e| e.min(u32::MAX as usize) as u32).collect();
        MultiIndex::new(&exps).map_err(|e| self.err_at(&open, ParseErrorKind::Syntax, &[], e.to_string()))
    }

    fn deriv_arg(&mut self, index: MultiIndex) -> PResult<DiffPolynomial> {
        self.expect_sym('(')?;
        let v = self.fref(index)?;
        self.expect_sym(')')?;
        Ok(self.jet(v))
    }

    fn fref(&mut self, index: MultiIndex) -> PResult<JetVar> {
        let t = self.peek().clone();
        let Tok::Ident(name) = &t.tok else {
            return Err(self.unexpected(&["function name"]));
        };
        let sym = Symbol::new(name);
        let Some(&arity) = self.symbols.get(&sym) else {
            return Err(self.err_at(&t, ParseErrorKind::UndeclaredSymbol, &[], format!("`{name}` is not declared")));
        };
        self.bump();
        let component = if self.at_sym('[') {
            self.bump();
            let (ct, c) = self.expect_small_int()?;
            self.expect_sym(']')?;
            if c == 0 || c > arity {
                return Err(self.err_at(
                    &ct,
                    ParseErrorKind::ComponentOutOfRange,
                    &[],
                    format!("component {c} of `{name}` outside 1..={arity}"),
                ));
            }
            c
        } else if arity == 1 {
            1
        } else {
            return Err(self.err_at(
                &t,
                ParseErrorKind::ComponentOutOfRange,
                &["`[`"],
                format!("`{name}` has {arity} components; write `{name}[i]`"),
            ));
        };
        Ok(JetVar::new(sym, component, index))
    }

    fn jet(&self, v: JetVar) -> DiffPolynomial {
        DiffPolynomial::from_terms(
            self.dim.expect("dims checked"),
            self.symbols.clone(),
            [(Monomial::var(v), Rational::one())],
        )
        .expect("validated jet variable")
    }
}
