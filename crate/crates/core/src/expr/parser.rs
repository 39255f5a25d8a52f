//! Lexer and recursive-descent parser for holomorphic expressions.
//!
//! Grammar (whitespace insignificant, positions are 0-based byte offsets):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | power
//! power    := atom ('^' ['-'] integer)*
//! atom     := number | 'i' | variable | func '(' expr ')' | '(' expr ')'
//! func     := 'exp' | 'log' | 'sqrt' | 'sin' | 'cos'
//! number   := digits ['.' digits] [('e'|'E') ['+'|'-'] digits]
//! ```
//!
//! `+ - * /` are left-associative; exponents are integer literals, so
//! iterated `^` is also read left to right. Unary minus binds looser than
//! `^` (`-z^2` is `-(z^2)`).

use super::{ExprError, FuncKind, Node};

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
    Eof,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Next token and its starting byte offset.
    fn next(&mut self) -> Result<(Tok, usize), ExprError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.src.len() {
            return Ok((Tok::Eof, start));
        }
        let b = self.src[self.pos];
        let single = match b {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            self.pos += 1;
            return Ok((tok, start));
        }
        if b.is_ascii_digit() {
            return self.lex_number(start);
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.src[start..self.pos])
                .expect("identifier bytes are ASCII")
                .to_string();
            return Ok((Tok::Ident(name), start));
        }
        Err(ExprError::Syntax {
            pos: start,
            msg: format!("unexpected character `{}`", b as char),
        })
    }

    fn lex_number(&mut self, start: usize) -> Result<(Tok, usize), ExprError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        if self.pos < self.src.len() && (self.src[self.pos] | 0x20) == b'e' {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && (self.src[self.pos] == b'+' || self.src[self.pos] == b'-')
            {
                self.pos += 1;
            }
            if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            } else {
                // `e` belonged to a following identifier, not the number.
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("digits are ASCII");
        let value: f64 = text.parse().map_err(|_| ExprError::Syntax {
            pos: start,
            msg: format!("malformed number `{text}`"),
        })?;
        Ok((Tok::Num(value), start))
    }
}

pub(super) struct Parser<'a> {
    lexer: Lexer<'a>,
    look: (Tok, usize),
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    pub(super) fn new(src: &'a str, vars: &'a [String]) -> Result<Self, ExprError> {
        let mut lexer = Lexer::new(src);
        let look = lexer.next()?;
        Ok(Parser { lexer, look, vars })
    }

    fn advance(&mut self) -> Result<(Tok, usize), ExprError> {
        let next = self.lexer.next()?;
        Ok(std::mem::replace(&mut self.look, next))
    }

    pub(super) fn parse_full(&mut self) -> Result<Node, ExprError> {
        let node = self.expr()?;
        match &self.look {
            (Tok::Eof, _) => Ok(node),
            (tok, pos) => Err(ExprError::Syntax {
                pos: *pos,
                msg: format!("unexpected token {}", describe(tok)),
            }),
        }
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut node = self.term()?;
        loop {
            match self.look.0 {
                Tok::Plus => {
                    self.advance()?;
                    node = Node::Add(Box::new(node), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.advance()?;
                    node = Node::Sub(Box::new(node), Box::new(self.term()?));
                }
                _ => return Ok(node),
            }
        }
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut node = self.unary()?;
        loop {
            match self.look.0 {
                Tok::Star => {
                    self.advance()?;
                    node = Node::Mul(Box::new(node), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.advance()?;
                    node = Node::Div(Box::new(node), Box::new(self.unary()?));
                }
                _ => return Ok(node),
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        if self.look.0 == Tok::Minus {
            self.advance()?;
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ExprError> {
        let mut node = self.atom()?;
        while self.look.0 == Tok::Caret {
            self.advance()?;
            let negative = if self.look.0 == Tok::Minus {
                self.advance()?;
                true
            } else {
                false
            };
            let (tok, pos) = self.advance()?;
            let exp = match tok {
                Tok::Num(x) if x.fract() == 0.0 && x.abs() <= i32::MAX as f64 => x as i32,
                Tok::Num(_) => {
                    return Err(ExprError::Syntax {
                        pos,
                        msg: "integer exponent expected".to_string(),
                    })
                }
                other => {
                    return Err(ExprError::Syntax {
                        pos,
                        msg: format!("integer exponent expected, found {}", describe(&other)),
                    })
                }
            };
            node = Node::Pow(Box::new(node), if negative { -exp } else { exp });
        }
        Ok(node)
    }

    fn atom(&mut self) -> Result<Node, ExprError> {
        let (tok, pos) = self.advance()?;
        match tok {
            Tok::Num(x) => Ok(Node::Num(x)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => self.ident(name, pos),
            other => Err(ExprError::Syntax {
                pos,
                msg: format!("expected operand, found {}", describe(&other)),
            }),
        }
    }

    fn ident(&mut self, name: String, pos: usize) -> Result<Node, ExprError> {
        if name == "i" {
            return Ok(Node::ImUnit);
        }
        if let Some(func) = FuncKind::from_name(&name) {
            let (open, open_pos) = self.advance()?;
            if open != Tok::LParen {
                return Err(ExprError::Syntax {
                    pos: open_pos,
                    msg: format!("expected `(` after `{name}`"),
                });
            }
            let arg = self.expr()?;
            self.expect_rparen()?;
            return Ok(Node::Func(func, Box::new(arg)));
        }
        if let Some(idx) = self.vars.iter().position(|v| v == &name) {
            return Ok(Node::Var(idx));
        }
        Err(ExprError::UnknownIdentifier { name, pos })
    }

    fn expect_rparen(&mut self) -> Result<(), ExprError> {
        let (tok, pos) = self.advance()?;
        if tok == Tok::RParen {
            Ok(())
        } else {
            Err(ExprError::Syntax {
                pos,
                msg: format!("expected `)`, found {}", describe(&tok)),
            })
        }
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Num(x) => format!("number `{x}`"),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Plus => "`+`".to_string(),
        Tok::Minus => "`-`".to_string(),
        Tok::Star => "`*`".to_string(),
        Tok::Slash => "`/`".to_string(),
        Tok::Caret => "`^`".to_string(),
        Tok::LParen => "`(`".to_string(),
        Tok::RParen => "`)`".to_string(),
        Tok::Eof => "end of input".to_string(),
    }
}
