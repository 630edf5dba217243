use std::collections::BTreeMap;

use super::ast::{BinOp, Func, Node, ProfileExpr};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    /// Next token and its starting byte offset.
    fn next(&mut self) -> Result<(Tok, usize)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return Ok((Tok::End, start));
        };
        if c.is_ascii_digit() || c == '.' {
            let bytes = rest.as_bytes();
            let mut i = 0;
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
            let text = &rest[..i];
            return match text.parse::<f64>() {
                Ok(v) if v.is_finite() => {
                    self.pos += i;
                    Ok((Tok::Num(v), start))
                }
                _ => Err(Error::Syntax { offset: start, expected: vec!["finite number".into()] }),
            };
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let len = rest
                .char_indices()
                .find(|&(_, ch)| !(ch.is_ascii_alphanumeric() || ch == '_'))
                .map_or(rest.len(), |(i, _)| i);
            self.pos += len;
            return Ok((Tok::Ident(rest[..len].to_string()), start));
        }
        if "+-*/^(),".contains(c) {
            self.pos += 1;
            return Ok((Tok::Op(c), start));
        }
        Err(Error::Syntax { offset: start, expected: vec!["number".into(), "identifier".into(), "operator".into()] })
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    offset: usize,
    params: BTreeMap<String, usize>,
}

const OPERAND: &[&str] = &["number", "identifier", "'('", "'-'"];

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<()> {
        let (tok, offset) = self.lexer.next()?;
        self.tok = tok;
        self.offset = offset;
        Ok(())
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T> {
        Err(Error::Syntax { offset: self.offset, expected: expected.iter().map(|s| s.to_string()).collect() })
    }

    fn expect(&mut self, op: char) -> Result<()> {
        if self.tok == Tok::Op(op) {
            self.bump()
        } else {
            self.error(&[&format!("'{op}'")])
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.term()?;
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.tok {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.unary()?;
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.tok == Tok::Op('-') {
            self.bump()?;
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.primary()?;
        if self.tok == Tok::Op('^') {
            self.bump()?;
            // Right-associative; the exponent may carry its own sign.
            let exponent = self.unary()?;
            return Ok(Node::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node> {
        match self.tok.clone() {
            Tok::Num(v) => {
                self.bump()?;
                Ok(Node::Const(v))
            }
            Tok::Op('(') => {
                self.bump()?;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let at = self.offset;
                self.bump()?;
                if self.tok == Tok::Op('(') {
                    let Some(func) = Func::from_name(&name) else {
                        return Err(Error::UnknownIdentifier { name, offset: at });
                    };
                    self.bump()?;
                    let mut args = vec![self.expr()?];
                    while self.tok == Tok::Op(',') {
                        self.bump()?;
                        args.push(self.expr()?);
                    }
                    if args.len() != func.arity() {
                        let want = if func.arity() == 1 { "')'" } else { "','" };
                        if args.len() < func.arity() {
                            return self.error(&[want]);
                        }
                        return Err(Error::Syntax { offset: self.offset, expected: vec!["')'".into()] });
                    }
                    self.expect(')')?;
                    return Ok(Node::Call(func, args));
                }
                match name.as_str() {
                    "r" => Ok(Node::Var),
                    "pi" => Ok(Node::Pi),
                    _ if Func::from_name(&name).is_some() => self.error(&["'('"]),
                    _ => {
                        self.params.entry(name.clone()).or_insert(at);
                        Ok(Node::Param(name))
                    }
                }
            }
            _ => self.error(OPERAND),
        }
    }
}

impl ProfileExpr {
    /// Parses a profile expression in the variable `r`.
    ///
    /// Precedence from tightest: `^` (right-associative), unary `-`, `* /`,
    /// `+ -`. Any identifier other than `r`, `pi` and the built-in function
    /// names is a parameter.
    pub fn parse(text: &str) -> Result<ProfileExpr> {
        if text.trim().is_empty() {
            return Err(Error::Syntax { offset: 0, expected: OPERAND.iter().map(|s| s.to_string()).collect() });
        }
        let mut parser =
            Parser { lexer: Lexer { src: text, pos: 0 }, tok: Tok::End, offset: 0, params: BTreeMap::new() };
        parser.bump()?;
        let ast = parser.expr()?;
        if parser.tok != Tok::End {
            return parser.error(&["operator", "end of input"]);
        }
        Ok(ProfileExpr { ast, param_offsets: parser.params })
    }
}
