//! Recursive-descent parser.
//!
//! ```text
//! expr    := term { ("+" | "-") term }
//! term    := unary { ("*" | "/") unary }
//! unary   := "-" unary | power
//! power   := primary [ "^" unary ]
//! primary := number | "i" | "pi" | "e" | var | func "(" expr ")" | "(" expr ")"
//! ```
//!
//! `^` binds tighter than unary minus and is right-associative, so
//! `-2^2 = -4` and `2^3^2 = 512`.

use super::{BinOp, Constant, Func, Mode, Node, Var};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("variable `{var}` at offset {offset} is not allowed in {mode} mode")]
    IllegalVariable { var: Var, mode: Mode, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Empty => None,
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::IllegalVariable { offset, .. } => Some(*offset),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let lit = &text[start..i];
                let v: f64 = lit.parse().map_err(|_| ParseError::Syntax {
                    offset: start,
                    message: format!("malformed number `{lit}`"),
                })?;
                out.push((Tok::Num(v), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    offset: i,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    mode: Mode,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            message: format!("expected {wanted}, found {}", self.peek().describe()),
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Node::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Node::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.primary()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let exp = self.unary()?;
            return Ok(Node::binary(BinOp::Pow, base, exp));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node, ParseError> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Node::Num(v))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let (_, at) = self.bump();
                self.identifier(&name, at)
            }
            _ => Err(self.unexpected("a number, identifier or `(`")),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected("`)`"))
        }
    }

    fn identifier(&mut self, name: &str, at: usize) -> Result<Node, ParseError> {
        match name {
            "i" => return Ok(Node::Const(Constant::I)),
            "pi" => return Ok(Node::Const(Constant::Pi)),
            "e" => return Ok(Node::Const(Constant::E)),
            _ => {}
        }
        if let Some(func) = Func::from_name(name) {
            if *self.peek() != Tok::LParen {
                return Err(self.unexpected(&format!("`(` after `{name}`")));
            }
            self.bump();
            let arg = self.expr()?;
            self.expect_rparen()?;
            return Ok(Node::call(func, arg));
        }
        match Var::from_name(name) {
            Some(var) if self.mode.allows(var) => Ok(Node::Var(var)),
            Some(var) => Err(ParseError::IllegalVariable {
                var,
                mode: self.mode,
                offset: at,
            }),
            None => Err(ParseError::UnknownIdentifier {
                name: name.to_string(),
                offset: at,
            }),
        }
    }
}

pub(super) fn parse(text: &str, mode: Mode) -> Result<Node, ParseError> {
    let toks = lex(text)?;
    if toks.len() == 1 {
        return Err(ParseError::Empty);
    }
    let mut p = Parser { toks, pos: 0, mode };
    let node = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(node)
}

#[cfg(test)]
mod tests {
    use super::super::{EvalEnv, Expr};
    use super::*;
    use num_complex::Complex64;

    fn value(text: &str) -> Complex64 {
        Expr::parse(text, Mode::Complex)
            .unwrap()
            .eval(&EvalEnv::empty())
            .unwrap()
    }

    #[test]
    fn precedence() {
        assert_eq!(value("1+2*i^2"), Complex64::new(-1.0, 0.0));
        assert_eq!(value("2^3^2"), Complex64::new(512.0, 0.0));
        assert_eq!(value("-2^2"), Complex64::new(-4.0, 0.0));
        assert_eq!(value("(-2)^2"), Complex64::new(4.0, 0.0));
        assert_eq!(value("2*-3"), Complex64::new(-6.0, 0.0));
        assert_eq!(value("8/2/2"), Complex64::new(2.0, 0.0));
        assert_eq!(value("2^-1"), Complex64::new(0.5, 0.0));
        assert_eq!(value("1-2-3"), Complex64::new(-4.0, 0.0));
    }

    #[test]
    fn literals() {
        assert_eq!(value("1.5e2"), Complex64::new(150.0, 0.0));
        assert_eq!(value("2.5E-1"), Complex64::new(0.25, 0.0));
        assert_eq!(value("3.0"), Complex64::new(3.0, 0.0));
        assert_eq!(value(".5"), Complex64::new(0.5, 0.0));
    }

    #[test]
    fn dangling_operator_reports_offset() {
        let err = Expr::parse("z+", Mode::Complex).unwrap_err();
        assert_eq!(err.offset(), Some(2));
        assert!(matches!(err, ParseError::Syntax { .. }));
        let err = Expr::parse("exp(", Mode::Complex).unwrap_err();
        assert_eq!(err.offset(), Some(4));
    }

    #[test]
    fn mode_checks() {
        assert!(Expr::parse("x^2*y", Mode::Planar).is_ok());
        assert!(matches!(
            Expr::parse("x^2*y", Mode::Complex),
            Err(ParseError::IllegalVariable { var: Var::X, offset: 0, .. })
        ));
        assert!(matches!(
            Expr::parse("z", Mode::Planar),
            Err(ParseError::IllegalVariable { var: Var::Z, .. })
        ));
        assert!(Expr::parse("x*y*z", Mode::Spatial).is_ok());
        assert!(matches!(
            Expr::parse("2*foo", Mode::Complex),
            Err(ParseError::UnknownIdentifier { offset: 2, .. })
        ));
        assert_eq!(Expr::parse("   ", Mode::Complex), Err(ParseError::Empty));
    }

    #[test]
    fn malformed_inputs() {
        for bad in ["(z", "z)", "exp z", "2 3", "*z", "z#", "sin()"] {
            assert!(Expr::parse(bad, Mode::Complex).is_err(), "{bad}");
        }
    }

    #[test]
    fn identifiers_are_case_sensitive() {
        assert!(Expr::parse("Exp(z)", Mode::Complex).is_err());
        assert!(Expr::parse("PI", Mode::Complex).is_err());
    }
}
