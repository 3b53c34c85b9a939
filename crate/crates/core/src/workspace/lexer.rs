use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::Diagnostic;
use crate::scalar::GaussRat;

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, PartialOrd, Ord)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    /// Nonnegative rational, or `q·i` when `imaginary`.
    Number { value: BigRational, imaginary: bool },
    Newline,
    Semi,
    Comma,
    Colon,
    Bang,
    Eq,
    Arrow,
    Plus,
    Minus,
    Times,
    Caret,
    Pipe,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    LAngle,
    RAngle,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number { .. } => "number".into(),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Tok::Semi => ";",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Bang => "!",
            Tok::Eq => "=",
            Tok::Arrow => "->",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Times => "*",
            Tok::Caret => "^",
            Tok::Pipe => "|",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LAngle => "<",
            Tok::RAngle => ">",
            _ => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

impl Token {
    pub fn number_value(&self) -> Option<GaussRat> {
        match &self.tok {
            Tok::Number { value, imaginary: false } => Some(GaussRat::new(value.clone(), BigRational::zero())),
            Tok::Number { value, imaginary: true } => Some(GaussRat::new(BigRational::zero(), value.clone())),
            _ => None,
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Newlines inside `()`, `[]`, `{}` and `<>` are dropped; `#` starts a comment.
pub fn lex(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut pos, mut line, mut col) = (0, 1, 1);
    let mut depth = 0usize;
    while pos < chars.len() {
        let c = chars[pos];
        let span = Span { line, col };
        let mut advance = 1;
        match c {
            '\n' => {
                if depth == 0 {
                    out.push(Token { tok: Tok::Newline, span });
                }
                pos += 1;
                line += 1;
                col = 1;
                continue;
            }
            ' ' | '\t' | '\r' => {}
            '#' => {
                while pos + advance < chars.len() && chars[pos + advance] != '\n' {
                    advance += 1;
                }
            }
            c if c.is_ascii_digit() => {
                let mut end = pos;
                while end < chars.len() && chars[end].is_ascii_digit() {
                    end += 1;
                }
                let numer: String = chars[pos..end].iter().collect();
                let mut denom = String::from("1");
                if end + 1 < chars.len() && chars[end] == '/' && chars[end + 1].is_ascii_digit() {
                    let start = end + 1;
                    end = start;
                    while end < chars.len() && chars[end].is_ascii_digit() {
                        end += 1;
                    }
                    denom = chars[start..end].iter().collect();
                }
                let mut imaginary = false;
                if end < chars.len() && chars[end] == 'i' && !chars.get(end + 1).is_some_and(|&c| is_ident_char(c)) {
                    imaginary = true;
                    end += 1;
                }
                if chars.get(end).is_some_and(|&c| is_ident_char(c)) {
                    return Err(Diagnostic::new(span, "malformed number literal"));
                }
                let d: BigInt = denom.parse().expect("digits");
                if d.is_zero() {
                    return Err(Diagnostic::new(span, "zero denominator"));
                }
                let value = BigRational::new(numer.parse().expect("digits"), d);
                out.push(Token { tok: Tok::Number { value, imaginary }, span });
                advance = end - pos;
            }
            c if is_ident_start(c) => {
                let mut end = pos;
                while end < chars.len() && is_ident_char(chars[end]) {
                    end += 1;
                }
                out.push(Token { tok: Tok::Ident(chars[pos..end].iter().collect()), span });
                advance = end - pos;
            }
            _ => {
                let tok = match c {
                    ';' => Tok::Semi,
                    ',' => Tok::Comma,
                    ':' => Tok::Colon,
                    '!' => Tok::Bang,
                    '=' => Tok::Eq,
                    '-' if chars.get(pos + 1) == Some(&'>') => {
                        advance = 2;
                        Tok::Arrow
                    }
                    '-' => Tok::Minus,
                    '+' => Tok::Plus,
                    '*' => Tok::Times,
                    '^' => Tok::Caret,
                    '|' => Tok::Pipe,
                    '(' | '[' | '{' | '<' => {
                        depth += 1;
                        match c {
                            '(' => Tok::LParen,
                            '[' => Tok::LBracket,
                            '{' => Tok::LBrace,
                            _ => Tok::LAngle,
                        }
                    }
                    ')' | ']' | '}' | '>' => {
                        depth = depth.saturating_sub(1);
                        match c {
                            ')' => Tok::RParen,
                            ']' => Tok::RBracket,
                            '}' => Tok::RBrace,
                            _ => Tok::RAngle,
                        }
                    }
                    other => return Err(Diagnostic::new(span, format!("unexpected character `{other}`"))),
                };
                out.push(Token { tok, span });
            }
        }
        pos += advance;
        col += advance;
    }
    out.push(Token { tok: Tok::Eof, span: Span { line, col } });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn numbers_and_imaginary_literals() {
        let t = lex("3/2i 7 i x2").unwrap();
        assert_eq!(t[0].number_value(), Some(GaussRat::new(BigRational::zero(), BigRational::new(3.into(), 2.into()))));
        assert_eq!(t[1].number_value(), Some(GaussRat::from(7)));
        assert_eq!(t[2].tok, Tok::Ident("i".into()));
        assert_eq!(t[3].tok, Tok::Ident("x2".into()));
    }

    #[test]
    fn newlines_inside_delimiters_are_dropped() {
        let t = toks("a <\n b > \n c");
        assert_eq!(
            t,
            vec![
                Tok::Ident("a".into()),
                Tok::LAngle,
                Tok::Ident("b".into()),
                Tok::RAngle,
                Tok::Newline,
                Tok::Ident("c".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn positions_and_comments() {
        let t = lex("# note\n  x -> y").unwrap();
        assert_eq!(t[1].span, Span { line: 2, col: 3 });
        assert_eq!(t[2].tok, Tok::Arrow);
        assert_eq!(t[3].span, Span { line: 2, col: 8 });
    }

    #[test]
    fn bad_input() {
        assert_eq!(lex("x $").unwrap_err().span, Span { line: 1, col: 3 });
        assert!(lex("1/0").is_err());
        assert!(lex("2ix").is_err());
    }
}
