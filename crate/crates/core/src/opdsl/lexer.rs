//! Tokenizer for the operator language. `#` starts a line comment; comments
//! of the form `# expect: key=value` are kept as directives.

use super::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(String),
    Str(String),
    Sym(char),
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(s) => format!("integer `{s}`"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
    /// Byte offset of the token start.
    pub offset: usize,
}

#[derive(Debug, Clone)]
pub struct Directive {
    pub offset: usize,
    pub key: String,
    pub value: String,
}

const PUNCT: &str = "{}()[];,:=+-*/^";

pub fn tokenize(text: &str) -> Result<(Vec<Token>, Vec<Directive>), ParseError> {
    let mut tokens = Vec::new();
    let mut directives = Vec::new();
    let mut chars = text.char_indices().peekable();
    let (mut line, mut col) = (1usize, 1usize);

    while let Some(&(off, c)) = chars.peek() {
        let (tline, tcol) = (line, col);
        let mut advance = |chars: &mut std::iter::Peekable<std::str::CharIndices>| {
            let (_, ch) = chars.next().expect("peeked");
            if ch == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            ch
        };
        if c.is_whitespace() {
            advance(&mut chars);
        } else if c == '#' {
            let mut comment = String::new();
            while let Some(&(_, ch)) = chars.peek() {
                if ch == '\n' {
                    break;
                }
                comment.push(advance(&mut chars));
            }
            let body = comment[1..].trim();
            if let Some(rest) = body.strip_prefix("expect:") {
                if let Some((k, v)) = rest.split_once('=') {
                    directives.push(Directive {
                        offset: off,
                        key: k.trim().to_string(),
                        value: v.trim().to_string(),
                    });
                }
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&(_, ch)) = chars.peek() {
                if ch.is_ascii_alphanumeric() || ch == '_' {
                    s.push(advance(&mut chars));
                } else {
                    break;
                }
            }
            tokens.push(Token {
                tok: Tok::Ident(s),
                line: tline,
                col: tcol,
                offset: off,
            });
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&(_, ch)) = chars.peek() {
                if ch.is_ascii_digit() {
                    s.push(advance(&mut chars));
                } else {
                    break;
                }
            }
            tokens.push(Token {
                tok: Tok::Int(s),
                line: tline,
                col: tcol,
                offset: off,
            });
        } else if c == '"' {
            advance(&mut chars);
            let mut s = String::new();
            loop {
                match chars.peek() {
                    Some(&(_, '"')) => {
                        advance(&mut chars);
                        break;
                    }
                    Some(&(_, '\n')) | None => {
                        return Err(ParseError::new(
                            ParseErrorKind::Syntax,
                            tline,
                            tcol,
                            vec!["closing `\"`".into()],
                            "unterminated string",
                        ))
                    }
                    Some(_) => s.push(advance(&mut chars)),
                }
            }
            tokens.push(Token {
                tok: Tok::Str(s),
                line: tline,
                col: tcol,
                offset: off,
            });
        } else if PUNCT.contains(c) {
            advance(&mut chars);
            tokens.push(Token {
                tok: Tok::Sym(c),
                line: tline,
                col: tcol,
                offset: off,
            });
        } else {
            return Err(ParseError::new(
                ParseErrorKind::Syntax,
                tline,
                tcol,
                Vec::new(),
                format!("unexpected character {c:?}"),
            ));
        }
    }
    tokens.push(Token {
        tok: Tok::Eof,
        line,
        col,
        offset: text.len(),
    });
    Ok((tokens, directives))
}
