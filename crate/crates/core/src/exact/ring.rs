use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Commutative ring with unit, as used for polynomial coefficients.
///
/// Methods take references so that big-number coefficients are never moved
/// implicitly. `zero()` and `one()` are context-free: coefficient rings that
/// carry variable lists (such as [`MultiPoly`](super::MultiPoly)) treat a
/// context-free constant as compatible with any variable list.
pub trait Ring: Clone + PartialEq + Debug + Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rational(q: &Rational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// The value as a rational number, when it is a constant.
    fn to_rational(&self) -> Option<Rational>;

    fn scale(&self, q: &Rational) -> Self {
        self.mul(&Self::from_rational(q))
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Number of stored terms; used for resource budgets.
    fn term_count(&self) -> usize {
        usize::from(!self.is_zero())
    }
}

/// Rings where exact division (when the quotient exists) is available.
/// Required by fraction-free elimination.
pub trait ExactDiv: Ring {
    /// Returns `Some(q)` with `q * divisor == self`, `None` if not divisible.
    fn exact_div(&self, divisor: &Self) -> Option<Self>;

    /// Size measure used for pivot choice: lower is preferred.
    fn pivot_weight(&self) -> usize;
}

/// Fields: every nonzero element has an inverse.
pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

impl ExactDiv for Rational {
    fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if Zero::is_zero(divisor) {
            None
        } else {
            Some(self / divisor)
        }
    }

    fn pivot_weight(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Parses an integer or a fraction `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Canonical text of a rational: `p` or `p/q`.
pub fn rational_text(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact `k`-th root of a rational, if one exists (positive root for even `k`).
pub fn rational_root(q: &Rational, k: u32) -> Option<Rational> {
    if k == 0 {
        return None;
    }
    if q.is_negative() && k.is_multiple_of(2) {
        return None;
    }
    let num = integer_root(&q.numer().abs(), k)?;
    let den = integer_root(q.denom(), k)?;
    let root = Rational::new(num, den);
    Some(if q.is_negative() { -root } else { root })
}

fn integer_root(n: &BigInt, k: u32) -> Option<BigInt> {
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}
