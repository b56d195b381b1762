//! Polynomial text grammar.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (['*'|'/'] factor)*      implicit '*' between factors
//! factor := atom ['^' integer]
//! atom   := rational | identifier | '(' expr ')'
//! ```
//! Division is only allowed by a nonzero constant.

use std::fmt;

use num_bigint::BigInt;

use super::multipoly::{MultiPoly, VarList};
use super::ring::Ring;
use super::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub input: String,
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} at position {}", self.message, self.position)?;
        writeln!(f, "  {}", self.input)?;
        write!(f, "  {}^", " ".repeat(self.position))
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    vars: VarList,
}

pub fn parse_multi<S: AsRef<str>>(text: &str, vars: &[S]) -> Result<MultiPoly, ParseError> {
    let mut p = Parser {
        src: text,
        bytes: text.as_bytes(),
        pos: 0,
        vars: super::multipoly::var_list(vars),
    };
    p.skip_ws();
    if p.pos == p.bytes.len() {
        return Err(p.error("empty polynomial"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.error(&format!("unexpected character '{}'", p.peek_char())));
    }
    Ok(e.with_vars(&p.vars))
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ParseError {
        ParseError {
            input: self.src.to_string(),
            position: self.pos,
            message: msg.to_string(),
        }
    }

    fn peek_char(&self) -> char {
        self.src[self.pos..].chars().next().unwrap_or(' ')
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg_poly()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == b'+' { acc.add_poly(&t) } else { acc.sub_poly(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul_poly(&self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.factor()?;
                    let q = match d.to_rational() {
                        Some(q) if !q.is_zero() => q,
                        _ => {
                            self.pos = at;
                            return Err(self.error("division only by a nonzero constant"));
                        }
                    };
                    acc = acc.scale_q(&q.recip());
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() || c == b'_' => {
                    acc = acc.mul_poly(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<MultiPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected a nonnegative integer exponent"));
            }
            let e: u32 = self.src[start..self.pos].parse().map_err(|_| {
                let mut err = self.error("exponent too large");
                err.position = start;
                err
            })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = self.src[start..self.pos].parse().expect("digits");
                Ok(MultiPoly::constant(Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                match MultiPoly::var_named(&self.vars, name) {
                    Some(v) => Ok(v),
                    None => {
                        self.pos = start;
                        Err(self.error(&format!(
                            "unknown variable '{name}' (expected one of: {})",
                            self.vars.join(", ")
                        )))
                    }
                }
            }
            Some(_) => Err(self.error(&format!("unexpected character '{}'", self.peek_char()))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Parses a polynomial in `x` with rational coefficients.
pub fn parse_qpoly(text: &str) -> Result<super::QPoly, ParseError> {
    super::QPoly::parse(text, "x")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_mixed_rational_sample() {
        let p = parse_qpoly("x^6 - 9*x^2 + 1/2").unwrap();
        assert_eq!(p.to_string(), "x^6 - 9*x^2 + 1/2");
    }

    #[test]
    fn implicit_products_and_parens() {
        let p = parse_qpoly("2x(x+1) - (x^2)").unwrap();
        assert_eq!(p.to_string(), "x^2 + 2*x");
    }

    #[test]
    fn multivariate() {
        let p = parse_multi("b0^2 + 4*a0", &["a0", "b0"]).unwrap();
        assert_eq!(p.to_text(), "b0^2 + 4*a0");
    }

    #[test]
    fn caret_position() {
        let e = parse_qpoly("x^2 + #").unwrap_err();
        assert_eq!(e.position, 6);
        let shown = e.to_string();
        assert!(shown.ends_with("        ^"), "{shown}");
        let e = parse_qpoly("x + y").unwrap_err();
        assert_eq!(e.position, 4);
        assert!(parse_qpoly("x/(x+1)").is_err());
        assert!(parse_qpoly("").is_err());
        assert!(parse_qpoly("x^").is_err());
    }
}
