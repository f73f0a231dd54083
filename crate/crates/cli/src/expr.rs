//! Infix expressions over upper numbers: `(+) (-) (*) (/)`, parentheses,
//! numeric literals and the `0p` / `one` neutral-element tokens.

use std::fmt;

use nondiophantine::{Bijection, UpperReal};

#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Literal(f64),
    Zero,
    One,
    Neg(Box<Expr>),
    Binary(Op, Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Number(f64),
    Zero,
    One,
    Op(Op),
    Open,
    Close,
}

fn tokenize(input: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '(' {
            let op = match (chars.get(i + 1), chars.get(i + 2)) {
                (Some('+'), Some(')')) => Some(Op::Add),
                (Some('-'), Some(')')) => Some(Op::Sub),
                (Some('*'), Some(')')) => Some(Op::Mul),
                (Some('/'), Some(')')) => Some(Op::Div),
                _ => None,
            };
            match op {
                Some(op) => {
                    tokens.push((column, Token::Op(op)));
                    i += 3;
                }
                None => {
                    tokens.push((column, Token::Open));
                    i += 1;
                }
            }
            continue;
        }
        if c == ')' {
            tokens.push((column, Token::Close));
            i += 1;
            continue;
        }
        if c.is_ascii_alphanumeric() || c == '.' || c == '-' || c == '+' {
            let start = i;
            i += 1;
            while i < chars.len() {
                let d = chars[i];
                let exponent_sign = (d == '-' || d == '+') && matches!(chars[i - 1], 'e' | 'E') && chars[start].is_ascii_digit();
                if d.is_ascii_alphanumeric() || d == '.' || exponent_sign {
                    i += 1;
                } else {
                    break;
                }
            }
            let word: String = chars[start..i].iter().collect();
            let token = match word.as_str() {
                "0p" => Token::Zero,
                "one" => Token::One,
                _ => match word.parse::<f64>() {
                    Ok(v) if v.is_finite() => Token::Number(v),
                    _ => {
                        return Err(ParseError { column, message: format!("unrecognised token `{word}`") });
                    }
                },
            };
            tokens.push((column, token));
            continue;
        }
        return Err(ParseError { column, message: format!("unexpected character `{c}`") });
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end_column: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|t| &t.1)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_column, |t| t.0)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { column: self.column(), message: message.into() }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Some(Token::Op(op @ (Op::Add | Op::Sub))) = self.peek() {
            let op = *op;
            self.pos += 1;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(Token::Op(op @ (Op::Mul | Op::Div))) = self.peek() {
            let op = *op;
            self.pos += 1;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if let Some(Token::Op(Op::Sub)) = self.peek() {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let token = self.peek().cloned();
        match token {
            Some(Token::Number(v)) => {
                self.pos += 1;
                Ok(Expr::Literal(v))
            }
            Some(Token::Zero) => {
                self.pos += 1;
                Ok(Expr::Zero)
            }
            Some(Token::One) => {
                self.pos += 1;
                Ok(Expr::One)
            }
            Some(Token::Open) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Token::Close) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.error("expected `)`")),
                }
            }
            Some(Token::Close) => Err(self.error("unexpected `)`")),
            Some(Token::Op(_)) => Err(self.error("expected a number, `0p`, `one` or `(`")),
            None => Err(self.error("unexpected end of expression")),
        }
    }
}

pub fn parse(input: &str) -> Result<Expr, ParseError> {
    let tokens = tokenize(input)?;
    let mut parser = Parser { tokens, pos: 0, end_column: input.chars().count() + 1 };
    let expr = parser.expr()?;
    if parser.pos < parser.tokens.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(expr)
}

impl Expr {
    pub fn eval(&self, ctx: &Bijection) -> nondiophantine::Result<UpperReal> {
        match self {
            Expr::Literal(v) => ctx.upper(*v),
            Expr::Zero => Ok(ctx.zero()),
            Expr::One => Ok(ctx.one()),
            Expr::Neg(inner) => ctx.neg(inner.eval(ctx)?),
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.eval(ctx)?, b.eval(ctx)?);
                match op {
                    Op::Add => ctx.add(a, b),
                    Op::Sub => ctx.sub(a, b),
                    Op::Mul => ctx.mul(a, b),
                    Op::Div => ctx.div(a, b),
                }
            }
        }
    }
}

/// A single upper value: `0p`, `one` or a literal.
pub fn parse_value(ctx: &Bijection, token: &str) -> Result<UpperReal, String> {
    match token.trim() {
        "0p" => Ok(ctx.zero()),
        "one" => Ok(ctx.one()),
        other => {
            let v: f64 = other.parse().map_err(|_| format!("`{other}` is not a number, `0p` or `one`"))?;
            ctx.upper(v).map_err(|e| e.to_string())
        }
    }
}
