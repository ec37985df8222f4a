use super::lexer::{tokenize, Spanned, Tok};
use super::{BinOp, Constant, Expr, Func, Node, ParseError, ParseErrorKind};

pub(super) struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    end: usize,
    n_vars: usize,
}

impl Parser {
    pub(super) fn new(src: &str, n_vars: usize) -> Result<Self, ParseError> {
        Ok(Self {
            tokens: tokenize(src)?,
            pos: 0,
            end: src.len(),
            n_vars,
        })
    }

    pub(super) fn parse(mut self) -> Result<Expr, ParseError> {
        let root = self.expr()?;
        if let Some((offset, tok)) = self.tokens.get(self.pos) {
            return Err(ParseError::new(
                *offset,
                ParseErrorKind::UnexpectedToken {
                    found: tok.describe(),
                    expected: "an operator or end of input",
                },
            ));
        }
        Ok(Expr {
            root,
            arity: self.n_vars,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, expected: &'static str) -> Result<(), ParseError> {
        match self.next() {
            Some((_, t)) if t == want => Ok(()),
            Some((offset, t)) => Err(ParseError::new(
                offset,
                ParseErrorKind::UnexpectedToken {
                    found: t.describe(),
                    expected,
                },
            )),
            None => Err(ParseError::new(
                self.end,
                ParseErrorKind::UnexpectedEnd { expected },
            )),
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Node::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => BinOp::Mul,
                Some(Tok::Slash) => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = Node::binary(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> Result<Node, ParseError> {
        let base = self.unary()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let exponent = self.factor()?;
            return Ok(Node::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(Node::negate(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Node, ParseError> {
        const EXPECTED: &str = "a number, variable, function or '('";
        let Some((offset, tok)) = self.next() else {
            return Err(ParseError::new(
                self.end,
                ParseErrorKind::UnexpectedEnd { expected: EXPECTED },
            ));
        };
        match tok {
            Tok::Number(text) => {
                Node::number(&text).ok_or(ParseError::new(offset, ParseErrorKind::BadNumber(text)))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(name) => self.identifier(offset, name),
            other => Err(ParseError::new(
                offset,
                ParseErrorKind::UnexpectedToken {
                    found: other.describe(),
                    expected: EXPECTED,
                },
            )),
        }
    }

    fn identifier(&mut self, offset: usize, name: String) -> Result<Node, ParseError> {
        let called = self.peek() == Some(&Tok::LParen);
        if let Some(func) = Func::from_name(&name) {
            if !called {
                return Err(ParseError::new(
                    offset,
                    ParseErrorKind::MissingArguments(name),
                ));
            }
            self.pos += 1;
            let mut args = vec![self.expr()?];
            while self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
                args.push(self.expr()?);
            }
            self.expect(Tok::RParen, "',' or ')'")?;
            if args.len() != func.arity() {
                return Err(ParseError::new(
                    offset,
                    ParseErrorKind::Arity {
                        func: func.name(),
                        expected: func.arity(),
                        found: args.len(),
                    },
                ));
            }
            return Ok(Node::Call(func, args));
        }

        let node = match name.as_str() {
            "pi" => Node::Const(Constant::Pi),
            "e" => Node::Const(Constant::E),
            _ => match variable_index(&name) {
                Some(k) if k >= 1 && k <= self.n_vars => Node::Var(k - 1),
                Some(_) => {
                    return Err(ParseError::new(
                        offset,
                        ParseErrorKind::UnknownVariable(name),
                    ))
                }
                None => {
                    return Err(ParseError::new(
                        offset,
                        ParseErrorKind::UnknownIdentifier(name),
                    ))
                }
            },
        };
        if called {
            return Err(ParseError::new(offset, ParseErrorKind::NotAFunction(name)));
        }
        Ok(node)
    }
}

/// `x<k>` with `k` a decimal integer without leading zeros (`x0` yields 0).
fn variable_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if digits.len() > 1 && digits.starts_with('0') {
        return None;
    }
    digits.parse().ok().or(Some(usize::MAX))
}
