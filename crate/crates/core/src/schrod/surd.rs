//! Elements `a + b√D` of a quadratic field ℚ(√D).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::exact::{parse_rational, rational_text, Field, Rational, Ring};

/// `a + b√D`. A value with `b = 0` is rational and combines with elements of
/// any quadratic field; `d` is then irrelevant. Mixing two different
/// nonrational radicands panics.
#[derive(Clone, Debug)]
pub struct QuadSurd {
    pub a: Rational,
    pub b: Rational,
    pub d: BigInt,
}

impl QuadSurd {
    pub fn rational(a: Rational) -> Self {
        QuadSurd {
            a,
            b: Rational::zero(),
            d: BigInt::from(0),
        }
    }

    /// `a + b√D`, with square factors of `D` moved into `b`.
    pub fn new(a: Rational, b: Rational, d: BigInt) -> Self {
        let (f, core) = square_free(&d);
        let b = b * Rational::from_integer(f);
        if core == BigInt::from(1) {
            return Self::rational(a + b);
        }
        if b.is_zero() || core == BigInt::from(0) {
            return Self::rational(a);
        }
        QuadSurd { a, b, d: core }
    }

    fn radicand(&self, other: &Self) -> BigInt {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, _) => other.d.clone(),
            (_, true) => self.d.clone(),
            _ => {
                assert_eq!(self.d, other.d, "mixed quadratic fields");
                self.d.clone()
            }
        }
    }

    fn make(a: Rational, b: Rational, d: BigInt) -> Self {
        if b.is_zero() {
            Self::rational(a)
        } else {
            QuadSurd { a, b, d }
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.b.is_zero() {
            return a;
        }
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * self.d.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    /// Parses `r`, `sqrt(D)`, `c*sqrt(D)`, `r + c*sqrt(D)` and sign variants.
    pub fn parse(text: &str) -> Option<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return None;
        }
        let mut terms = Vec::new();
        let mut depth = 0;
        let mut start = 0;
        for (i, c) in s.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                '+' | '-' if depth == 0 && i > 0 && !s[..i].ends_with(['*', '/', '(']) => {
                    terms.push(&s[start..i]);
                    start = i;
                }
                _ => {}
            }
        }
        terms.push(&s[start..]);
        let mut acc = Self::rational(Rational::zero());
        for t in terms {
            acc = acc.add(&parse_term(t)?);
        }
        Some(acc)
    }
}

fn parse_term(t: &str) -> Option<QuadSurd> {
    let (neg, body) = match t.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let value = match body.find("sqrt(") {
        Some(pos) => {
            let inner = body[pos + 5..].strip_suffix(')')?;
            let d: BigInt = inner.parse().ok()?;
            let coeff = match &body[..pos] {
                "" => Rational::one(),
                c => parse_rational(c.strip_suffix('*')?.trim_matches(|c| c == '(' || c == ')'))?,
            };
            QuadSurd::new(Rational::zero(), coeff, d)
        }
        None => QuadSurd::rational(parse_rational(body.trim_matches(|c| c == '(' || c == ')'))?),
    };
    Some(if neg { value.neg() } else { value })
}

/// `d = f² · core` with `core` free of small square factors.
pub fn square_free(d: &BigInt) -> (BigInt, BigInt) {
    if *d == BigInt::from(0) {
        return (BigInt::from(1), BigInt::from(0));
    }
    let mut core = d.clone();
    let mut f = BigInt::from(1);
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000);
    while &p * &p <= core.abs() && p < limit {
        let sq = &p * &p;
        while &core % &sq == BigInt::from(0) {
            core /= &sq;
            f *= &p;
        }
        p += 1;
    }
    (f, core)
}

impl PartialEq for QuadSurd {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.b.is_zero() || self.d == other.d)
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return f.write_str(&rational_text(&self.a));
        }
        let radical = if self.b.abs() == Rational::one() {
            format!("sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", rational_text(&self.b.abs()), self.d)
        };
        match (self.a.is_zero(), self.b.is_negative()) {
            (true, false) => f.write_str(&radical),
            (true, true) => write!(f, "-{radical}"),
            (false, neg) => write!(
                f,
                "{} {} {radical}",
                rational_text(&self.a),
                if neg { "-" } else { "+" }
            ),
        }
    }
}

impl Ring for QuadSurd {
    fn zero() -> Self {
        Self::rational(Rational::zero())
    }
    fn one() -> Self {
        Self::rational(Rational::one())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        Self::make(&self.a + &o.a, &self.b + &o.b, self.radicand(o))
    }
    fn sub(&self, o: &Self) -> Self {
        Self::make(&self.a - &o.a, &self.b - &o.b, self.radicand(o))
    }
    fn mul(&self, o: &Self) -> Self {
        let d = self.radicand(o);
        let dq = Rational::from_integer(d.clone());
        Self::make(
            &self.a * &o.a + &self.b * &o.b * dq,
            &self.a * &o.b + &self.b * &o.a,
            d,
        )
    }
    fn neg(&self) -> Self {
        Self::make(-&self.a, -&self.b, self.d.clone())
    }
    fn from_rational(q: &Rational) -> Self {
        Self::rational(q.clone())
    }
    fn to_rational(&self) -> Option<Rational> {
        self.b.is_zero().then(|| self.a.clone())
    }
}

impl Field for QuadSurd {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.a * &self.a - &self.b * &self.b * Rational::from_integer(self.d.clone());
        Some(Self::make(&self.a / &norm, -&self.b / &norm, self.d.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qf};

    #[test]
    fn arithmetic() {
        let s = QuadSurd::new(q(0), q(1), 24.into());
        assert_eq!(s.to_string(), "2*sqrt(6)");
        assert_eq!(s.mul(&s), QuadSurd::rational(q(24)));
        let t = QuadSurd::new(q(1), q(1), 2.into());
        assert_eq!(t.mul(&t.inv().unwrap()), QuadSurd::one());
        assert_eq!(QuadSurd::new(q(3), qf(1, 2), 16.into()), QuadSurd::rational(q(5)));
    }

    #[test]
    fn parsing() {
        assert_eq!(QuadSurd::parse("sqrt(24)").unwrap().to_string(), "2*sqrt(6)");
        assert_eq!(QuadSurd::parse("-2*sqrt(6)").unwrap().to_string(), "-2*sqrt(6)");
        assert_eq!(QuadSurd::parse("1/2 - 3*sqrt(5)").unwrap().to_string(), "1/2 - 3*sqrt(5)");
        assert_eq!(QuadSurd::parse("-7/3").unwrap(), QuadSurd::rational(qf(-7, 3)));
        assert!(QuadSurd::parse("cbrt(2)").is_none());
        assert!((QuadSurd::parse("sqrt(24)").unwrap().to_f64() - 4.898979485566356).abs() < 1e-15);
    }
}
