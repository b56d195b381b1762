//! Normal forms for `u'' + P u' + Q u = 0`: D'Alembert reduction to
//! `y'' = R y`, monic rescaling, completing the square `M = A² + B`, and the
//! arithmetic condition on `b_{n−1}`.

use std::fmt;

use crate::exact::{q, qf, rational_root, QPoly, Rational, Ring, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReduceError {
    #[error("degenerate equation: leading coefficient p_n^2/4 - q_2n of R vanishes (n = {n})")]
    Degenerate { n: usize },
    #[error("irrational rescale; supply scale or use --numeric")]
    IrrationalRescale,
    #[error("supplied scale k does not satisfy k^{exp} * r_{deg} = 1")]
    BadScale { exp: usize, deg: usize },
    #[error("odd degree {0}: expected an even-degree polynomial")]
    OddDegree(usize),
    #[error("polynomial must have degree at least 2 (got {0})")]
    DegreeTooSmall(String),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("coefficient {0} is symbolic; a rational value is required")]
    Symbolic(&'static str),
}

/// Sign selecting one of the two auxiliary equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn both() -> [Sign; 2] {
        [Sign::Plus, Sign::Minus]
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "+" | "plus" | "+1" | "1" => Some(Sign::Plus),
            "-" | "minus" | "-1" => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// `u'' + P(x) u' + Q(x) u = 0` with `deg P ≤ n`, `deg Q ≤ 2n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralEquation {
    pub p: QPoly,
    pub q: QPoly,
    pub n: usize,
}

impl GeneralEquation {
    /// Takes the smallest `n` compatible with the degrees of `P` and `Q`.
    pub fn new(p: QPoly, q: QPoly) -> Self {
        let dp = p.degree().finite().unwrap_or(0);
        let dq = q.degree().finite().unwrap_or(0);
        let n = dp.max(dq.div_ceil(2));
        GeneralEquation { p, q, n }
    }

    /// Coefficient of `x^{2n}` in `R`: `p_n²/4 − q_{2n}`.
    pub fn leading_r(&self) -> Rational {
        let pn = self.p.coeff(self.n);
        &pn * &pn / q(4) - self.q.coeff(2 * self.n)
    }
}

/// `y'' = R(x) y`, with the gauge factor relating `u` and `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceFreeEquation {
    pub r: QPoly,
    /// `u = y · gauge`, as a formal expression.
    pub gauge: String,
}

/// `R = P²/4 + P'/2 − Q`; `u = y·exp(−½∫P)`.
pub fn dalembert(eq: &GeneralEquation) -> Result<TraceFreeEquation, ReduceError> {
    if eq.n == 0 {
        return Err(ReduceError::DegreeTooSmall("0".into()));
    }
    if eq.leading_r() == q(0) {
        return Err(ReduceError::Degenerate { n: eq.n });
    }
    let p = &eq.p;
    let r = p.mul_poly(p).scale_rational(&qf(1, 4)) + p.derivative().scale_rational(&qf(1, 2))
        - eq.q.clone();
    debug_assert_eq!(r.degree().finite(), Some(2 * eq.n));
    let expo = p.integral().scale_rational(&qf(-1, 2));
    let gauge = if expo.is_zero() {
        "1".to_string()
    } else {
        format!("exp({expo})")
    };
    Ok(TraceFreeEquation { r, gauge })
}

/// Result of `x ↦ k x`: `M(x) = k² R(k x)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Rescaled {
    Exact { m: QPoly, scale: Rational },
    Numeric { coeffs: Vec<f64>, scale: f64 },
}

/// Rescales `y'' = R y` to a monic coefficient by `k = r_{2n}^{−1/(2n+2)}`.
///
/// A caller-supplied `scale` is verified instead of searched for. Without an
/// exact rational root, `numeric` selects a floating-point rescale.
pub fn monic_rescale(
    r: &QPoly,
    scale: Option<&Rational>,
    numeric: bool,
) -> Result<Rescaled, ReduceError> {
    let deg = r.degree().finite().unwrap_or(0);
    if deg % 2 == 1 {
        return Err(ReduceError::OddDegree(deg));
    }
    if deg == 0 {
        return Err(ReduceError::DegreeTooSmall(r.degree().to_string()));
    }
    let lead = r.leading().expect("nonzero").clone();
    let exp = deg + 2;
    let k = match scale {
        Some(k) => {
            if num_traits::pow(k.clone(), exp) * &lead != q(1) {
                return Err(ReduceError::BadScale { exp, deg });
            }
            Some(k.clone())
        }
        None => rational_root(&(q(1) / &lead), exp as u32),
    };
    match k {
        Some(k) => {
            let kx = QPoly::monomial(k.clone(), 1);
            let m = r.compose(&kx).scale_rational(&(&k * &k));
            Ok(Rescaled::Exact { m, scale: k })
        }
        None if numeric => {
            use num_traits::ToPrimitive;
            let l = lead.to_f64().unwrap_or(f64::NAN);
            if l <= 0.0 {
                return Err(ReduceError::IrrationalRescale);
            }
            let k = l.powf(-1.0 / exp as f64);
            let coeffs = r
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| c.to_f64().unwrap_or(f64::NAN) * k.powi(i as i32 + 2))
                .collect();
            Ok(Rescaled::Numeric { coeffs, scale: k })
        }
        None => Err(ReduceError::IrrationalRescale),
    }
}

/// `M = A² + B` with `A` monic of degree `n` and `deg B < n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicDecomposition<C: Ring> {
    pub a: UniPoly<C>,
    pub b: UniPoly<C>,
    pub n: usize,
}

impl<C: Ring> MonicDecomposition<C> {
    /// `b_{n−1}`, the coefficient carrying the arithmetic condition.
    pub fn b_top(&self) -> C {
        self.b.coeff(self.n - 1)
    }

    pub fn recompose(&self) -> UniPoly<C> {
        self.a.mul_poly(&self.a).add_poly(&self.b)
    }
}

/// Completes the square degree by degree, top coefficient first.
pub fn complete_square<C: Ring>(m: &UniPoly<C>) -> Result<MonicDecomposition<C>, ReduceError> {
    let deg = m.degree().finite().unwrap_or(0);
    if deg < 2 {
        return Err(ReduceError::DegreeTooSmall(m.degree().to_string()));
    }
    if deg % 2 == 1 {
        return Err(ReduceError::OddDegree(deg));
    }
    if !m.is_monic() {
        return Err(ReduceError::NotMonic);
    }
    let n = deg / 2;
    let half = qf(1, 2);
    let mut a = vec![C::zero(); n + 1];
    a[n] = C::one();
    for k in 1..=n {
        let target = 2 * n - k;
        // terms of A² at x^target not involving a_{n−k}
        let mut s = C::zero();
        for i in (n - k + 1)..n {
            let j = target - i;
            if j > n - k && j < n {
                s = s.add(&a[i].mul(&a[j]));
            }
        }
        a[n - k] = m.coeff(target).sub(&s).scale(&half);
    }
    let a = UniPoly::with_var(a, m.var_arc().clone());
    let b = m.sub_poly(&a.mul_poly(&a));
    debug_assert!(b.degree() < crate::exact::Degree::Finite(n));
    Ok(MonicDecomposition { a, b, n })
}

/// Pairs `(s, d)` with `s·b_{n−1} − n = 2d`, `d ≥ 0`.
pub fn arithmetic_condition<C: Ring>(
    dec: &MonicDecomposition<C>,
) -> Result<Vec<(Sign, usize)>, ReduceError> {
    let b = dec
        .b_top()
        .to_rational()
        .ok_or(ReduceError::Symbolic("b_{n-1}"))?;
    Ok(arithmetic_condition_value(&b, dec.n))
}

/// The arithmetic condition for a known value of `b_{n−1}`.
pub fn arithmetic_condition_value(b_top: &Rational, n: usize) -> Vec<(Sign, usize)> {
    use num_traits::ToPrimitive;
    let mut out = Vec::new();
    for s in Sign::both() {
        let twice_d = b_top * q(s.value()) - q(n as i64);
        if !twice_d.is_integer() {
            continue;
        }
        let t = twice_d.to_integer();
        if t < 0.into() || (&t % 2) != 0.into() {
            continue;
        }
        let half: num_bigint::BigInt = t / 2;
        if let Some(d) = half.to_usize() {
            out.push((s, d));
        }
    }
    out
}

/// Shifts `x ↦ x − h` so that the `x^{2n−1}` coefficient vanishes (that is,
/// `a_{n−1} = 0` after completing the square). Returns the shifted
/// polynomial and `h`.
pub fn translate_to_depressed<C: Ring>(m: &UniPoly<C>) -> Result<(UniPoly<C>, C), ReduceError> {
    let deg = m.degree().finite().unwrap_or(0);
    if deg < 2 {
        return Err(ReduceError::DegreeTooSmall(m.degree().to_string()));
    }
    let h = m.coeff(deg - 1).scale(&qf(1, deg as i64));
    let shift = UniPoly::with_var(vec![h.neg(), C::one()], m.var_arc().clone());
    Ok((m.compose(&shift), h))
}
