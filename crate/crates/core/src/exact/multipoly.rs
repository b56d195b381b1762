use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use serde_json::{json, Value};

use super::ring::{rational_text, ExactDiv, Ring};
use super::unipoly::UniPoly;
use super::Rational;

/// Exponent vector, ordered graded-lexicographically: total degree first,
/// then exponents compared left to right (first declared variable largest).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub type VarList = Arc<[String]>;

/// Sparse multivariate polynomial over ℚ in a declared, ordered list of
/// variables. A polynomial with an empty variable list is a context-free
/// constant and combines with polynomials over any variable list.
#[derive(Clone)]
pub struct MultiPoly {
    vars: VarList,
    terms: BTreeMap<Monomial, Rational>,
}

pub fn var_list<S: AsRef<str>>(names: &[S]) -> VarList {
    names.iter().map(|s| s.as_ref().to_string()).collect()
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        if self.is_constant() && other.is_constant() {
            return self.constant_term() == other.constant_term();
        }
        false
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.vars.join(","), self)
    }
}

impl MultiPoly {
    pub fn zero_in(vars: &VarList) -> Self {
        MultiPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant_in(vars: &VarList, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(vars.len()), c);
        }
        MultiPoly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::constant_in(&Arc::from(Vec::<String>::new()), c)
    }

    /// The `i`-th declared variable as a polynomial.
    pub fn var(vars: &VarList, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::from_terms(vars, [(Monomial(e), Rational::one())])
    }

    pub fn var_named(vars: &VarList, name: &str) -> Option<Self> {
        vars.iter().position(|v| v == name).map(|i| Self::var(vars, i))
    }

    pub fn from_terms(
        vars: &VarList,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut out = Self::zero_in(vars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), vars.len(), "exponent arity mismatch");
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.total_degree() == 0)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .iter()
            .find(|(m, _)| m.total_degree() == 0)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Leading term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    /// Degree in the subset of variables selected by `mask`.
    pub fn degree_in(&self, mask: impl Fn(usize) -> bool) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| {
                m.0.iter()
                    .enumerate()
                    .filter(|(i, _)| mask(*i))
                    .map(|(_, e)| *e)
                    .sum()
            })
            .max()
    }

    /// Re-expresses the polynomial over `vars`, which must contain every
    /// variable actually occurring here.
    pub fn with_vars(&self, vars: &VarList) -> Self {
        if Arc::ptr_eq(&self.vars, vars) || self.vars == *vars {
            return MultiPoly {
                vars: vars.clone(),
                terms: self.terms.clone(),
            };
        }
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v))
            .collect();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; vars.len()];
            for (i, &k) in m.0.iter().enumerate() {
                if k > 0 {
                    let j = map[i].unwrap_or_else(|| {
                        panic!("variable {} not present in target list", self.vars[i])
                    });
                    e[j] += k;
                }
            }
            (Monomial(e), c.clone())
        });
        Self::from_terms(vars, terms)
    }

    /// Re-expresses the polynomial over `vars`, of which the current variable
    /// list must be a prefix. Cheaper than [`with_vars`](Self::with_vars).
    pub fn extend_vars(&self, vars: &VarList) -> Self {
        if Arc::ptr_eq(&self.vars, vars) {
            return self.clone();
        }
        assert!(
            vars.len() >= self.vars.len() && vars[..self.vars.len()] == self.vars[..],
            "variable list is not an extension"
        );
        let pad = vars.len() - self.vars.len();
        MultiPoly {
            vars: vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e.extend(std::iter::repeat_n(0, pad));
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Evaluates with every variable replaced by an element of another ring.
    /// Powers of each value are computed once.
    pub fn eval_in<R: Ring>(&self, point: &[R]) -> R {
        assert_eq!(point.len(), self.vars.len());
        let mut powers: Vec<Vec<R>> = point.iter().map(|v| vec![R::one(), v.clone()]).collect();
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&point[i]);
                    powers[i].push(next);
                }
            }
        }
        let mut acc = R::zero();
        for (m, c) in &self.terms {
            let mut t = R::from_rational(c);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[i][e as usize]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    fn aligned<'a>(&'a self, other: &'a Self) -> (std::borrow::Cow<'a, Self>, std::borrow::Cow<'a, Self>) {
        use std::borrow::Cow;
        if Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars {
            (Cow::Borrowed(self), Cow::Borrowed(other))
        } else if self.vars.is_empty() {
            (Cow::Owned(self.with_vars(&other.vars)), Cow::Borrowed(other))
        } else if other.vars.is_empty() {
            (Cow::Borrowed(self), Cow::Owned(other.with_vars(&self.vars)))
        } else {
            panic!(
                "variable list mismatch: [{}] vs [{}]",
                self.vars.join(","),
                other.vars.join(",")
            );
        }
    }

    pub fn add_poly(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let (big, small) = if a.terms.len() >= b.terms.len() {
            (a, b)
        } else {
            (b, a)
        };
        let mut out = big.into_owned();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub_poly(&self, other: &Self) -> Self {
        self.add_poly(&other.neg_poly())
    }

    pub fn neg_poly(&self) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul_poly(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let mut out = Self::zero_in(&a.vars);
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale_q(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero_in(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.0[i] > 0).map(|(m, c)| {
            let mut e = m.0.clone();
            let k = e[i];
            e[i] -= 1;
            (Monomial(e), c * Rational::from_integer(k.into()))
        });
        Self::from_terms(&self.vars, terms)
    }

    /// Evaluates at a rational point (one value per declared variable).
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes a rational value for variable `i`, keeping the variable
    /// list.
    pub fn substitute(&self, i: usize, value: &Rational) -> Self {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = m.0.clone();
            let k = std::mem::replace(&mut e[i], 0);
            (Monomial(e), c * num_traits::pow(value.clone(), k as usize))
        });
        Self::from_terms(&self.vars, terms)
    }

    /// Views the polynomial as univariate in variable `i` (other variables
    /// must be absent).
    pub fn to_unipoly(&self, i: usize) -> UniPoly<Rational> {
        let deg = self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0) as usize;
        let mut coeffs = vec![Rational::zero(); deg + 1];
        for (m, c) in &self.terms {
            assert!(
                m.0.iter().enumerate().all(|(j, &e)| j == i || e == 0),
                "polynomial involves variables other than {}",
                self.vars[i]
            );
            coeffs[m.0[i] as usize] += c;
        }
        UniPoly::with_var(coeffs, self.vars[i].as_str())
    }

    /// Splits off variable `i`: returns coefficients (in the remaining
    /// variables, same variable list with exponent `i` zeroed) of each power.
    pub fn coefficients_in(&self, i: usize) -> Vec<MultiPoly> {
        let deg = self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0) as usize;
        let mut out = vec![Self::zero_in(&self.vars); deg + 1];
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = std::mem::replace(&mut e[i], 0) as usize;
            out[k].add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Integer primitive part with positive graded-lex leading coefficient.
    pub fn primitive_normalized(&self) -> Self {
        if self.terms.is_empty() {
            return self.clone();
        }
        let mut lcm = <BigInt as num_traits::One>::one();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.denom());
        }
        let mut g = <BigInt as num_traits::Zero>::zero();
        for c in self.terms.values() {
            g = g.gcd(&(c * Rational::from_integer(lcm.clone())).to_integer());
        }
        let mut scale = Rational::new(lcm, g);
        if self.leading_term().is_some_and(|(_, c)| c.is_negative()) {
            scale = -scale;
        }
        self.scale_q(&scale)
    }

    /// `Some(s)` with `self == s * other` for a nonzero rational `s`.
    pub fn scalar_ratio(&self, other: &Self) -> Option<Rational> {
        let (a, b) = self.aligned(other);
        if a.terms.len() != b.terms.len() || a.terms.is_empty() {
            return None;
        }
        let (ma, ca) = a.leading_term()?;
        let (mb, cb) = b.leading_term()?;
        if ma != mb {
            return None;
        }
        let s = ca / cb;
        (*a == b.scale_q(&s)).then_some(s)
    }

    /// Canonical text, terms in descending graded-lex order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            let mono = render_monomial(&self.vars, m);
            let neg = c.is_negative();
            let abs = c.abs();
            let body = match (mono.is_empty(), abs.is_one()) {
                (true, _) => rational_text(&abs),
                (false, true) => mono,
                (false, false) => format!("{}*{}", rational_text(&abs), mono),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// JSON rendering: `{"vars":[...], "terms":[{"exps","num","den"}]}` with
    /// terms in descending graded-lex order.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                json!({
                    "exps": m.0,
                    "num": c.numer().to_string(),
                    "den": c.denom().to_string(),
                })
            })
            .collect();
        json!({ "vars": self.vars.as_ref(), "terms": terms })
    }

    pub fn from_json(v: &Value) -> Option<Self> {
        let vars: Vec<String> = v
            .get("vars")?
            .as_array()?
            .iter()
            .map(|s| s.as_str().map(str::to_string))
            .collect::<Option<_>>()?;
        let vars: VarList = vars.into();
        let mut terms = Vec::new();
        for t in v.get("terms")?.as_array()? {
            let exps: Vec<u32> = t
                .get("exps")?
                .as_array()?
                .iter()
                .map(|e| e.as_u64().map(|e| e as u32))
                .collect::<Option<_>>()?;
            if exps.len() != vars.len() {
                return None;
            }
            let num: BigInt = t.get("num")?.as_str()?.parse().ok()?;
            let den: BigInt = t.get("den")?.as_str()?.parse().ok()?;
            if num_traits::Zero::is_zero(&den) {
                return None;
            }
            terms.push((Monomial(exps), Rational::new(num, den)));
        }
        Some(Self::from_terms(&vars, terms))
    }
}

fn render_monomial(vars: &[String], m: &Monomial) -> String {
    let parts: Vec<String> = m
        .0
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                vars[i].clone()
            } else {
                format!("{}^{}", vars[i], e)
            }
        })
        .collect();
    parts.join("*")
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Ring for MultiPoly {
    fn zero() -> Self {
        Self::constant(Rational::zero())
    }
    fn one() -> Self {
        Self::constant(Rational::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
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
        Self::constant(q.clone())
    }
    fn to_rational(&self) -> Option<Rational> {
        self.is_constant().then(|| self.constant_term())
    }
    fn scale(&self, q: &Rational) -> Self {
        self.scale_q(q)
    }
    fn term_count(&self) -> usize {
        self.terms.len()
    }
}

impl ExactDiv for MultiPoly {
    /// Multivariate division by leading terms in graded-lex order.
    fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (a, b) = self.aligned(divisor);
        let (lm, lc) = b.leading_term()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = a.into_owned();
        let mut quot = Self::zero_in(&rem.vars);
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return None;
            }
            let q = Self::from_terms(&rem.vars, [(m.div(&lm), c / &lc)]);
            rem = rem.sub_poly(&q.mul_poly(&b));
            quot = quot.add_poly(&q);
        }
        Some(quot)
    }

    fn pivot_weight(&self) -> usize {
        self.total_degree().unwrap_or(0) as usize * 1024 + self.terms.len()
    }
}

macro_rules! forward_ops {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl<'a> $tr<&'a MultiPoly> for &'a MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: &'a MultiPoly) -> MultiPoly {
                self.$inner(rhs)
            }
        }
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                self.$inner(&rhs)
            }
        }
    };
}

forward_ops!(Add, add, add_poly);
forward_ops!(Sub, sub, sub_poly);
forward_ops!(Mul, mul, mul_poly);

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.neg_poly()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars() -> VarList {
        var_list(&["a0", "b0"])
    }

    #[test]
    fn graded_lex_order() {
        let lo = Monomial(vec![1, 0]);
        let hi = Monomial(vec![0, 2]);
        assert!(lo < hi);
        assert!(Monomial(vec![1, 1]) > Monomial(vec![0, 2]));
    }

    #[test]
    fn text_rendering() {
        let v = vars();
        let a = MultiPoly::var(&v, 0);
        let b = MultiPoly::var(&v, 1);
        let p = &(&b * &b) + &a.scale_q(&Rational::from_integer(4.into()));
        assert_eq!(p.to_text(), "b0^2 + 4*a0");
        let q = &MultiPoly::constant(Rational::new((-1).into(), 2.into())) - &p;
        assert_eq!(q.to_text(), "-b0^2 - 4*a0 - 1/2");
    }

    #[test]
    fn constants_promote() {
        let v = vars();
        let a = MultiPoly::var(&v, 0);
        let s = &a + &MultiPoly::one();
        assert_eq!(s.num_terms(), 2);
        assert_eq!(s.vars(), &v);
        assert_eq!(MultiPoly::one(), MultiPoly::constant_in(&v, Rational::one()));
    }

    #[test]
    fn exact_division() {
        let v = vars();
        let a = MultiPoly::var(&v, 0);
        let b = MultiPoly::var(&v, 1);
        let f = &(&a + &b) * &(&a - &b);
        assert_eq!(f.exact_div(&(&a + &b)), Some(&a - &b));
        assert_eq!((&a * &a + b.clone()).exact_div(&(&a + &b)), None);
    }

    #[test]
    fn normalization() {
        let v = vars();
        let a = MultiPoly::var(&v, 0);
        let b = MultiPoly::var(&v, 1);
        let p = (&b * &b).scale_q(&Rational::new((-1).into(), 3.into()))
            - a.scale_q(&Rational::new(4.into(), 3.into()));
        let n = p.primitive_normalized();
        assert_eq!(n.to_text(), "b0^2 + 4*a0");
        assert_eq!(p.scalar_ratio(&n), Some(Rational::new((-1).into(), 3.into())));
    }

    #[test]
    fn json_shape() {
        let v = vars();
        let p = &MultiPoly::var(&v, 1) + &MultiPoly::constant(Rational::new(1.into(), 2.into()));
        assert_eq!(
            p.to_json().to_string(),
            r#"{"terms":[{"den":"1","exps":[0,1],"num":"1"},{"den":"2","exps":[0,0],"num":"1"}],"vars":["a0","b0"]}"#
        );
        assert_eq!(MultiPoly::from_json(&p.to_json()), Some(p));
    }
}
