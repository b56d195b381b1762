use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::ring::{ExactDiv, Field, Ring};
use super::{ExactError, Rational};

/// Degree of a univariate polynomial. The zero polynomial has degree
/// `NegInfinity`, which orders below every finite degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Dense univariate polynomial, coefficients stored from degree 0 upward.
///
/// The coefficient vector never ends in a zero, so the zero polynomial is the
/// empty vector. Binary operations between polynomials in different variables
/// are only meaningful when one side is constant; [`poly_arith`] checks this
/// strictly, the operator impls adopt the variable of the non-constant side.
#[derive(Clone)]
pub struct UniPoly<C> {
    coeffs: Vec<C>,
    var: Arc<str>,
}

pub type QPoly = UniPoly<Rational>;

thread_local! {
    static X: Arc<str> = Arc::from("x");
}

fn default_var() -> Arc<str> {
    X.with(Arc::clone)
}

impl<C: Ring> PartialEq for UniPoly<C> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && (self.coeffs.len() <= 1 || self.var == other.var)
    }
}

impl<C: Ring> fmt::Debug for UniPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UniPoly")
            .field("var", &self.var)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl<C: Ring> UniPoly<C> {
    pub fn new(coeffs: Vec<C>) -> Self {
        Self::with_var(coeffs, default_var())
    }

    pub fn with_var(mut coeffs: Vec<C>, var: impl Into<Arc<str>>) -> Self {
        while coeffs.last().is_some_and(Ring::is_zero) {
            coeffs.pop();
        }
        UniPoly {
            coeffs,
            var: var.into(),
        }
    }

    pub fn zero_poly() -> Self {
        UniPoly {
            coeffs: Vec::new(),
            var: default_var(),
        }
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    /// `c * var^k`.
    pub fn monomial(c: C, k: usize) -> Self {
        let mut coeffs = vec![C::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(C::one(), 1)
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn var_arc(&self) -> &Arc<str> {
        &self.var
    }

    pub fn renamed(mut self, var: impl Into<Arc<str>>) -> Self {
        self.var = var.into();
        self
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of `var^k`; zero beyond the degree.
    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Ring::is_one)
    }

    fn merged_var(&self, other: &Self) -> Arc<str> {
        if self.is_constant() && !other.is_constant() {
            other.var.clone()
        } else {
            debug_assert!(
                other.is_constant() || self.var == other.var,
                "variable mismatch: {} vs {}",
                self.var,
                other.var
            );
            self.var.clone()
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = C::zero();
        let coeffs = (0..n)
            .map(|i| {
                f(
                    self.coeffs.get(i).unwrap_or(&zero),
                    other.coeffs.get(i).unwrap_or(&zero),
                )
            })
            .collect();
        Self::with_var(coeffs, self.merged_var(other))
    }

    pub fn add_poly(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.add(b))
    }

    pub fn sub_poly(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.sub(b))
    }

    pub fn mul_poly(&self, other: &Self) -> Self {
        let var = self.merged_var(other);
        if self.is_zero() || other.is_zero() {
            return Self::with_var(Vec::new(), var);
        }
        let mut out = vec![C::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::with_var(out, var)
    }

    pub fn neg_poly(&self) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(Ring::neg).collect(),
            var: self.var.clone(),
        }
    }

    pub fn scale_by(&self, c: &C) -> Self {
        Self::with_var(
            self.coeffs.iter().map(|a| a.mul(c)).collect(),
            self.var.clone(),
        )
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale_by(&C::from_rational(q))
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.mul(&C::from_i64(k as i64)))
            .collect();
        Self::with_var(coeffs, self.var.clone())
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(C::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.scale(&Rational::new(1.into(), (k as i64 + 1).into())));
        }
        Self::with_var(coeffs, self.var.clone())
    }

    /// Horner evaluation at a coefficient-ring value.
    pub fn eval(&self, at: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc.mul(at).add(c))
    }

    /// Composition `self(inner)`.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Self::with_var(Vec::new(), inner.var.clone());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_poly(inner).add_poly(&Self::constant(c.clone()));
        }
        acc.renamed(inner.var.clone())
    }

    /// Maps coefficients into another ring, keeping the variable.
    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> UniPoly<D> {
        UniPoly::with_var(self.coeffs.iter().map(f).collect(), self.var.clone())
    }

    pub fn pow_poly(&self, e: u32) -> Self {
        let mut acc = Self::constant(C::one()).renamed(self.var.clone());
        for _ in 0..e {
            acc = acc.mul_poly(self);
        }
        acc
    }

    /// Sum of the term counts of the coefficients.
    pub fn total_terms(&self) -> usize {
        self.coeffs.iter().map(Ring::term_count).sum()
    }
}

impl<C: Ring> UniPoly<C> {
    /// Coefficient vector as rationals, if every coefficient is a constant.
    pub fn to_rational_poly(&self) -> Option<QPoly> {
        let coeffs = self
            .coeffs
            .iter()
            .map(Ring::to_rational)
            .collect::<Option<Vec<_>>>()?;
        Some(UniPoly::with_var(coeffs, self.var.clone()))
    }
}

impl<C: Field> UniPoly<C> {
    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Option<(Self, Self)> {
        let lead = d.leading()?.inv()?;
        let dn = d.coeffs.len();
        let mut rem = self.coeffs.clone();
        if rem.len() < dn {
            return Some((Self::with_var(Vec::new(), self.var.clone()), self.clone()));
        }
        let mut quot = vec![C::zero(); rem.len() - dn + 1];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dn - 1].mul(&lead);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub(&c.mul(dc));
            }
            quot[k] = c;
        }
        rem.truncate(dn - 1);
        Some((
            Self::with_var(quot, self.merged_var(d)),
            Self::with_var(rem, self.merged_var(d)),
        ))
    }

    pub fn monic(&self) -> Self {
        match self.leading().and_then(Field::inv) {
            Some(inv) => self.scale_by(&inv),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl QPoly {
    /// Parses the text format with a single variable.
    pub fn parse(text: &str, var: &str) -> Result<Self, super::ParseError> {
        let mp = super::parse::parse_multi(text, &[var])?;
        Ok(mp.to_unipoly(0).renamed(var))
    }

    /// Least common multiple of denominators times the gcd-free integer
    /// content is removed; the result has integer coprime coefficients and
    /// positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        use num_integer::Integer;
        use num_traits::{One, Signed, Zero};
        if self.is_zero() {
            return self.clone();
        }
        let mut lcm = num_bigint::BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<num_bigint::BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut g = num_bigint::BigInt::zero();
        for i in &ints {
            g = g.gcd(i);
        }
        if self.leading().is_some_and(|l| l.is_negative()) {
            g = -g;
        }
        Self::with_var(
            ints.into_iter()
                .map(|i| Rational::new(i, g.clone()))
                .collect(),
            self.var.clone(),
        )
    }
}

impl<C: ExactDiv> UniPoly<C> {
    /// Exact polynomial division; `None` unless `d` divides `self`.
    pub fn exact_div_poly(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let dn = d.coeffs.len();
        if self.coeffs.len() < dn {
            return None;
        }
        let lead = d.leading().expect("nonzero");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![C::zero(); rem.len() - dn + 1];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dn - 1];
            if top.is_zero() {
                continue;
            }
            let c = top.exact_div(lead)?;
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub(&c.mul(dc));
            }
            quot[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::with_var(quot, self.merged_var(d)))
    }
}

/// Checked ring arithmetic: both operands must use the same variable.
pub fn poly_arith<C: Ring>(
    p: &UniPoly<C>,
    q: &UniPoly<C>,
    op: ArithOp,
) -> Result<UniPoly<C>, ExactError> {
    if p.var != q.var {
        return Err(ExactError::VariableMismatch {
            left: p.var.to_string(),
            right: q.var.to_string(),
        });
    }
    Ok(match op {
        ArithOp::Add => p.add_poly(q),
        ArithOp::Sub => p.sub_poly(q),
        ArithOp::Mul => p.mul_poly(q),
    })
}

impl<C: Ring> Ring for UniPoly<C> {
    fn zero() -> Self {
        Self::zero_poly()
    }
    fn one() -> Self {
        Self::constant(C::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        self.add_poly(other)
    }
    fn sub(&self, other: &Self) -> Self {
        self.sub_poly(other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_poly(other)
    }
    fn neg(&self) -> Self {
        self.neg_poly()
    }
    fn from_rational(q: &Rational) -> Self {
        Self::constant(C::from_rational(q))
    }
    fn to_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::from_integer(0.into())),
            1 => self.coeffs[0].to_rational(),
            _ => None,
        }
    }
    fn term_count(&self) -> usize {
        self.total_terms()
    }
}

impl<C: Field> ExactDiv for UniPoly<C> {
    fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor)?;
        r.is_zero().then_some(q)
    }

    fn pivot_weight(&self) -> usize {
        self.coeffs.len()
    }
}

/// Whether a rendered coefficient needs parentheses when multiplied.
pub(crate) fn is_compound(text: &str) -> bool {
    text.contains(" + ") || text.contains(" - ")
}

impl<C: Ring> fmt::Display for UniPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let text = c.to_string();
            let compound = is_compound(&text);
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) if !compound => (true, rest.to_string()),
                _ => (false, text),
            };
            let mono = match k {
                0 => String::new(),
                1 => self.var.to_string(),
                _ => format!("{}^{}", self.var, k),
            };
            let term = if mono.is_empty() {
                body
            } else if body == "1" {
                mono
            } else if compound {
                format!("({body})*{mono}")
            } else {
                format!("{body}*{mono}")
            };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            f.write_str(&term)?;
            first = false;
        }
        Ok(())
    }
}

macro_rules! forward_ops {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl<'a, C: Ring> $tr<&'a UniPoly<C>> for &'a UniPoly<C> {
            type Output = UniPoly<C>;
            fn $m(self, rhs: &'a UniPoly<C>) -> UniPoly<C> {
                self.$inner(rhs)
            }
        }
        impl<C: Ring> $tr for UniPoly<C> {
            type Output = UniPoly<C>;
            fn $m(self, rhs: UniPoly<C>) -> UniPoly<C> {
                self.$inner(&rhs)
            }
        }
    };
}

forward_ops!(Add, add, add_poly);
forward_ops!(Sub, sub, sub_poly);
forward_ops!(Mul, mul, mul_poly);

impl<C: Ring> Neg for &UniPoly<C> {
    type Output = UniPoly<C>;
    fn neg(self) -> UniPoly<C> {
        self.neg_poly()
    }
}

impl<C: Ring> Neg for UniPoly<C> {
    type Output = UniPoly<C>;
    fn neg(self) -> UniPoly<C> {
        self.neg_poly()
    }
}
