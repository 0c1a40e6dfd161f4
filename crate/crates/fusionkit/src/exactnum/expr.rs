//! A small expression language for exact constants, used by fixture files.
//!
//! Grammar: integers, `+ - * / ^`, parentheses, implicit multiplication
//! (`12(2+sqrt(2))`), `sqrt(x)` or `√x`, `b` for β = 2cos(π/κ), and `[n]`
//! for the q-integer.

use num_bigint::BigInt;

use super::{qint, CycReal, ExactError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Op(char),
    Open,
    Close,
    Sqrt,
    Beta,
    QInt(u32),
}

fn lex(s: &str) -> Result<Vec<Tok>, ExactError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Tok::Num(text.parse().expect("digits")));
            }
            '+' | '-' | '*' | '/' | '^' => {
                out.push(Tok::Op(c));
                i += 1;
            }
            '·' | '×' => {
                out.push(Tok::Op('*'));
                i += 1;
            }
            '(' => {
                out.push(Tok::Open);
                i += 1;
            }
            ')' => {
                out.push(Tok::Close);
                i += 1;
            }
            '√' => {
                out.push(Tok::Sqrt);
                i += 1;
            }
            'b' | 'β' => {
                out.push(Tok::Beta);
                i += 1;
            }
            '[' => {
                let end = chars[i..]
                    .iter()
                    .position(|&c| c == ']')
                    .ok_or_else(|| ExactError::Parse("unclosed [".into()))?;
                let text: String = chars[i + 1..i + end].iter().collect();
                let n = text.trim().parse().map_err(|_| ExactError::Parse(format!("bad q-integer [{text}]")))?;
                out.push(Tok::QInt(n));
                i += end + 1;
            }
            's' if chars[i..].starts_with(&['s', 'q', 'r', 't']) => {
                out.push(Tok::Sqrt);
                i += 4;
            }
            _ => return Err(ExactError::Parse(format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    kappa: u32,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> Result<CycReal, ExactError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { acc.try_add(&rhs)? } else { acc.try_sub(&rhs)? };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<CycReal, ExactError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    acc = acc.try_mul(&self.unary()?)?;
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    acc = acc.try_div(&self.unary()?)?;
                }
                Some(Tok::Open | Tok::Sqrt | Tok::Beta | Tok::QInt(_) | Tok::Num(_)) => {
                    acc = acc.try_mul(&self.power()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<CycReal, ExactError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| ExactError::Parse("exponent too large".into()))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(ExactError::Parse("exponent must be a nonnegative integer".into())),
            }
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<CycReal, ExactError> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn atom(&mut self) -> Result<CycReal, ExactError> {
        let tok = self.peek().cloned().ok_or_else(|| ExactError::Parse("unexpected end of input".into()))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => CycReal::from_bigint(self.kappa, n),
            Tok::Beta => CycReal::beta(self.kappa),
            Tok::QInt(n) => qint(n, self.kappa),
            Tok::Open => {
                let v = self.expr()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(ExactError::Parse("expected )".into()));
                }
                self.pos += 1;
                Ok(v)
            }
            Tok::Sqrt => {
                let arg = self.atom()?;
                arg.sqrt().ok_or_else(|| {
                    ExactError::Domain(format!("{} has no square root in Q(2cos(π/{}))", arg, self.kappa))
                })
            }
            other => Err(ExactError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse an exact expression into Q(2cos(π/κ)).
pub fn parse_expr(s: &str, kappa: u32) -> Result<CycReal, ExactError> {
    CycReal::one(kappa)?;
    let toks = lex(s)?;
    let mut p = Parser { toks: &toks, pos: 0, kappa };
    let v = p.expr()?;
    if p.pos != toks.len() {
        return Err(ExactError::Parse(format!("trailing input in {s:?}")));
    }
    Ok(v)
}
