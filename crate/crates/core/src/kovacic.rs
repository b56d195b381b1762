//! Integrability of `y'' = M(x) y` for monic polynomial `M = A² + B`.
//!
//! A solution `y = P e^{s∫A}` with `P` monic of degree `d` exists exactly
//! when `P` solves the auxiliary equation
//!
//! ```text
//! P'' + 2sA P' − (B − sA') P = 0,      s = ±1,
//! ```
//!
//! which forces `s·b_{n−1} = 2d + n`. The coefficients of `P` form the
//! kernel of a banded `(d+n) × (d+1)` matrix.

use crate::exact::{
    det_exact, kernel_over_field, null_space_exact, ExactDiv, Field, Matrix, QPoly, Rational,
    Ring, UniPoly,
};
use crate::reduce::{arithmetic_condition, complete_square, MonicDecomposition, ReduceError, Sign};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KovacicError {
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error("degree bound exceeded: d = {d} > max-d = {max_d}")]
    DegreeLimit { d: usize, max_d: usize },
    #[error("canonical equation with n = {n}, d = {d} is not integrable (d mod (n+1) must be 0 or 1)")]
    NotIntegrable { n: usize, d: usize },
    #[error("A must be monic of degree n >= 1 and deg B < n")]
    BadShape,
    #[error("canonical solution violates the expected sparsity: {0}")]
    Sparsity(String),
}

/// `P'' + 2sA P' − (B − sA') P = 0`, i.e. `P'' = ℓ₀P' + r₀P` with
/// `ℓ₀ = −2sA`, `r₀ = B − sA'`.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliaryEquation<C: Ring> {
    pub sign: Sign,
    pub a: UniPoly<C>,
    pub b: UniPoly<C>,
}

impl<C: Ring> AuxiliaryEquation<C> {
    pub fn new(sign: Sign, a: UniPoly<C>, b: UniPoly<C>) -> Self {
        AuxiliaryEquation { sign, a, b }
    }

    fn s(&self) -> Rational {
        Rational::from_integer(self.sign.value().into())
    }

    pub fn l0(&self) -> UniPoly<C> {
        self.a.scale_rational(&(self.s() * Rational::from_integer((-2).into())))
    }

    pub fn r0(&self) -> UniPoly<C> {
        self.b.sub_poly(&self.a.derivative().scale_rational(&self.s()))
    }

    /// Left-hand side applied to `p`.
    pub fn apply(&self, p: &UniPoly<C>) -> UniPoly<C> {
        let d1 = p.derivative();
        let d2 = d1.derivative();
        d2.sub_poly(&self.l0().mul_poly(&d1))
            .sub_poly(&self.r0().mul_poly(p))
    }
}

fn check_shape<C: Ring>(a: &UniPoly<C>, b: &UniPoly<C>) -> Result<usize, KovacicError> {
    let n = a.degree().finite().filter(|&n| n >= 1).ok_or(KovacicError::BadShape)?;
    if !a.is_monic() || b.degree().finite().is_some_and(|k| k >= n) {
        return Err(KovacicError::BadShape);
    }
    Ok(n)
}

/// The `(d+n) × (d+1)` matrix whose kernel vectors `(p₀, …, p_d)` are the
/// coefficient vectors of polynomial solutions of degree ≤ `d`. Column `j`
/// holds the coefficients of the auxiliary operator applied to `x^j`; the
/// bottom-right entry is `s(2d+n) − b_{n−1}`.
pub fn build_band_matrix<C: Ring>(
    a: &UniPoly<C>,
    b: &UniPoly<C>,
    d: usize,
    sign: Sign,
) -> Result<Matrix<C>, KovacicError> {
    let n = check_shape(a, b)?;
    let aux = AuxiliaryEquation::new(sign, a.clone(), b.clone());
    let mut m = Matrix::zeros(d + n, d + 1);
    for j in 0..=d {
        let col = aux.apply(&UniPoly::monomial(C::one(), j).renamed(a.var_arc().clone()));
        for (k, c) in col.coeffs().iter().enumerate() {
            m.set(k, j, c.clone());
        }
    }
    Ok(m)
}

/// Kernel of the band system split into monic degree-exactly-`d` solutions
/// and lower-degree ("degenerate") kernel vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSolutions<F: Ring> {
    pub solutions: Vec<UniPoly<F>>,
    pub degenerate: Vec<UniPoly<F>>,
}

fn split_kernel<F: Field>(mut basis: Vec<Vec<F>>, d: usize, var: &UniPoly<F>) -> KernelSolutions<F> {
    let to_poly = |v: &[F]| UniPoly::with_var(v.to_vec(), var.var_arc().clone());
    let mut solutions = Vec::new();
    if let Some(i) = basis.iter().position(|v| !v[d].is_zero()) {
        let lead = basis.remove(i);
        let inv = lead[d].inv().expect("nonzero");
        let lead: Vec<F> = lead.iter().map(|c| c.mul(&inv)).collect();
        for v in &mut basis {
            if !v[d].is_zero() {
                let f = v[d].clone();
                for (x, l) in v.iter_mut().zip(&lead) {
                    *x = x.sub(&l.mul(&f));
                }
            }
        }
        solutions.push(to_poly(&lead));
    }
    let degenerate = basis.iter().map(|v| to_poly(v).monic()).collect();
    KernelSolutions {
        solutions,
        degenerate,
    }
}

/// Polynomial solutions of degree exactly `d` of the auxiliary equation,
/// over ℚ (fraction-free kernel).
pub fn polynomial_solutions(
    a: &QPoly,
    b: &QPoly,
    d: usize,
    sign: Sign,
) -> Result<KernelSolutions<Rational>, KovacicError> {
    let m = build_band_matrix(a, b, d, sign)?;
    Ok(split_kernel(null_space_exact(&m), d, a))
}

/// As [`polynomial_solutions`], over an arbitrary coefficient field.
pub fn polynomial_solutions_in<F: Field>(
    a: &UniPoly<F>,
    b: &UniPoly<F>,
    d: usize,
    sign: Sign,
) -> Result<KernelSolutions<F>, KovacicError> {
    let m = build_band_matrix(a, b, d, sign)?;
    Ok(split_kernel(kernel_over_field(&m), d, a))
}

/// Determinants of the `(d+1) × (d+1)` minors formed by the first `d` rows
/// of the band matrix and each of the rows `d, …, d+n−2` (the last row
/// carries the arithmetic condition and is omitted). When the leading
/// `d × d` block is nonsingular, a degree-`d` solution exists iff all of them
/// vanish; otherwise they are inconclusive.
pub fn band_minor_conditions<C: ExactDiv>(
    a: &UniPoly<C>,
    b: &UniPoly<C>,
    d: usize,
    sign: Sign,
) -> Result<Vec<C>, KovacicError> {
    let m = build_band_matrix(a, b, d, sign)?;
    let n = m.rows() - d;
    let head: Vec<usize> = (0..d).collect();
    (d..d + n - 1)
        .map(|r| {
            let mut rows = head.clone();
            rows.push(r);
            Ok(det_exact(&m.select_rows(&rows)).expect("square by construction"))
        })
        .collect()
}

/// `y₁ = P e^{s∫A}`, solution of `y'' = (A² + B) y`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiouvillianSolution<C: Ring> {
    pub p: UniPoly<C>,
    pub sign: Sign,
    pub a: UniPoly<C>,
    pub b: UniPoly<C>,
}

impl<C: Ring> LiouvillianSolution<C> {
    pub fn auxiliary(&self) -> AuxiliaryEquation<C> {
        AuxiliaryEquation::new(self.sign, self.a.clone(), self.b.clone())
    }

    /// Remainder of the auxiliary equation at `P`; zero for a valid solution.
    pub fn residual(&self) -> UniPoly<C> {
        self.auxiliary().apply(&self.p)
    }

    pub fn verify(&self) -> bool {
        self.residual().is_zero()
    }

    fn exponent(&self) -> UniPoly<C> {
        self.a
            .integral()
            .scale_rational(&Rational::from_integer(self.sign.value().into()))
    }

    pub fn y1(&self) -> String {
        let e = format!("exp({})", self.exponent());
        if self.p.is_one_poly() {
            e
        } else {
            format!("({})*{e}", self.p)
        }
    }

    /// The second solution `y₂ = y₁ ∫ e^{−2s∫A} / P² dx`, formally.
    pub fn y2(&self) -> String {
        let e = self.exponent().scale_rational(&Rational::from_integer((-2).into()));
        let body = if self.p.is_one_poly() {
            format!("exp({e})")
        } else {
            format!("exp({e})/({})^2", self.p)
        };
        format!("{}*Integral({body}, {})", self.y1(), self.p.var())
    }
}

trait IsOne {
    fn is_one_poly(&self) -> bool;
}

impl<C: Ring> IsOne for UniPoly<C> {
    fn is_one_poly(&self) -> bool {
        self.coeffs().len() == 1 && self.coeffs()[0].is_one()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// Galois group SL₂: no Liouvillian solution.
    Sl2 { reason: String },
    Solvable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub sign: Sign,
    pub d: usize,
    pub solutions: Vec<LiouvillianSolution<Rational>>,
    pub degenerate: Vec<QPoly>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KovacicReport {
    pub verdict: Verdict,
    pub decomposition: Option<MonicDecomposition<Rational>>,
    pub candidates: Vec<Candidate>,
}

impl KovacicReport {
    pub fn is_solvable(&self) -> bool {
        self.verdict == Verdict::Solvable
    }

    pub fn solutions(&self) -> impl Iterator<Item = &LiouvillianSolution<Rational>> {
        self.candidates.iter().flat_map(|c| &c.solutions)
    }
}

/// Decides `y'' = M y` for monic `M` with rational coefficients.
pub fn kovacic_solve(m: &QPoly, max_d: usize) -> Result<KovacicReport, KovacicError> {
    let deg = m.degree().finite().unwrap_or(0);
    if deg % 2 == 1 {
        return Ok(KovacicReport {
            verdict: Verdict::Sl2 {
                reason: "odd degree".into(),
            },
            decomposition: None,
            candidates: Vec::new(),
        });
    }
    let dec = complete_square(m)?;
    let admissible = arithmetic_condition(&dec)?;
    if admissible.is_empty() {
        return Ok(KovacicReport {
            verdict: Verdict::Sl2 {
                reason: "arithmetic condition fails".into(),
            },
            decomposition: Some(dec),
            candidates: Vec::new(),
        });
    }
    let mut candidates = Vec::new();
    for (sign, d) in admissible {
        if d > max_d {
            return Err(KovacicError::DegreeLimit { d, max_d });
        }
        let ks = polynomial_solutions(&dec.a, &dec.b, d, sign)?;
        candidates.push(Candidate {
            sign,
            d,
            solutions: ks
                .solutions
                .into_iter()
                .map(|p| LiouvillianSolution {
                    p,
                    sign,
                    a: dec.a.clone(),
                    b: dec.b.clone(),
                })
                .collect(),
            degenerate: ks.degenerate,
        });
    }
    let verdict = if candidates.iter().any(|c| !c.solutions.is_empty()) {
        Verdict::Solvable
    } else {
        Verdict::Sl2 {
            reason: "no polynomial solution of the admissible degree".into(),
        }
    };
    Ok(KovacicReport {
        verdict,
        decomposition: Some(dec),
        candidates,
    })
}

/// `y'' = (x^{2n} ± (2d+n) x^{n−1}) y` is integrable iff `d mod (n+1) ∈ {0, 1}`.
pub fn canonical_integrability(n: usize, d: usize) -> bool {
    n >= 1 && d % (n + 1) <= 1
}

/// Nonzero coefficients of `p` only at powers `≡ d (mod n+1)`.
pub fn has_canonical_sparsity<C: Ring>(p: &UniPoly<C>, n: usize, d: usize) -> bool {
    p.coeffs()
        .iter()
        .enumerate()
        .all(|(k, c)| c.is_zero() || k % (n + 1) == d % (n + 1))
}

/// `P_{d,n}` for `A = xⁿ`, `B = s(2d+n)x^{n−1}`.
pub fn canonical_solution(
    n: usize,
    d: usize,
    sign: Sign,
) -> Result<LiouvillianSolution<Rational>, KovacicError> {
    if !canonical_integrability(n, d) {
        return Err(KovacicError::NotIntegrable { n, d });
    }
    let a = QPoly::monomial(crate::exact::q(1), n);
    let b = QPoly::monomial(crate::exact::q(sign.value() * (2 * d + n) as i64), n - 1);
    let ks = polynomial_solutions(&a, &b, d, sign)?;
    let p = ks
        .solutions
        .into_iter()
        .next()
        .ok_or_else(|| KovacicError::Sparsity(format!("no solution of degree {d}")))?;
    if !has_canonical_sparsity(&p, n, d) {
        return Err(KovacicError::Sparsity(p.to_string()));
    }
    Ok(LiouvillianSolution { p, sign, a, b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_multi, parse_qpoly, q, MultiPoly};

    fn p(s: &str) -> QPoly {
        parse_qpoly(s).unwrap()
    }

    #[test]
    fn harmonic_band_system() {
        for b0 in [1, 2, 3, 4, 5] {
            let ks = polynomial_solutions(&p("x"), &QPoly::constant(q(b0)), 1, Sign::Plus).unwrap();
            assert_eq!(ks.solutions.len(), usize::from(b0 == 3), "b0 = {b0}");
        }
        let ks = polynomial_solutions(&p("x"), &p("3"), 1, Sign::Plus).unwrap();
        assert_eq!(ks.solutions, vec![p("x")]);
    }

    #[test]
    fn corner_entry() {
        let m = build_band_matrix(&p("x^2 + 5"), &p("4x - 1"), 3, Sign::Plus).unwrap();
        assert_eq!((m.rows(), m.cols()), (5, 4));
        assert_eq!(*m.get(4, 3), q(2 * 3 + 2 - 4));
        let m = build_band_matrix(&p("x^2 + 5"), &p("4x - 1"), 3, Sign::Minus).unwrap();
        assert_eq!(*m.get(4, 3), q(-(2 * 3 + 2) - 4));
        assert!(m.bandwidth() <= 2 + 2);
    }

    #[test]
    fn sextic_entries() {
        // A = x³ + a₁x² + a₂x + a₃, B = b₀x² + b₁x + b₂, sign −
        let names = ["a1", "a2", "a3", "b0", "b1", "b2"];
        let v = |s: &str| parse_multi(s, &names).unwrap();
        let a = UniPoly::new(vec![v("a3"), v("a2"), v("a1"), v("1")]);
        let b = UniPoly::new(vec![v("b2"), v("b1"), v("b0")]);
        let d = 4;
        let m = build_band_matrix(&a, &b, d, Sign::Minus).unwrap();
        let kq = |k: i64| MultiPoly::constant(q(k));
        for k in 0..=d {
            let ki = k as i64;
            let alpha = v("-a2").mul_poly(&kq(2 * ki + 1)).sub_poly(&v("b2"));
            assert_eq!(*m.get(k, k), alpha, "alpha_{k}");
            if k < d {
                assert_eq!(*m.get(k, k + 1), v("-2*a3").mul_poly(&kq(ki + 1)), "beta_{k}");
            }
            if k + 2 <= d {
                assert_eq!(*m.get(k, k + 2), kq((ki + 2) * (ki + 1)), "gamma_{k}");
            }
            if k >= 1 {
                let zeta = v("-2*a1").mul_poly(&kq(ki)).sub_poly(&v("b1"));
                assert_eq!(*m.get(k, k - 1), zeta, "zeta_{k}");
            }
            if k >= 2 {
                let eta = kq(1 - 2 * ki).sub_poly(&v("b0"));
                assert_eq!(*m.get(k, k - 2), eta, "eta_{k}");
            }
        }
    }

    #[test]
    fn quartic_first_degree_condition() {
        // kernel nontrivial iff b₀² + 4a₀ = 0
        for (a0, b0, expect) in [(-4, 4, true), (-1, 2, true), (1, 7, false), (0, 1, false)] {
            let ks = polynomial_solutions(
                &QPoly::new(vec![q(a0), q(0), q(1)]),
                &QPoly::new(vec![q(b0), q(4)]),
                1,
                Sign::Plus,
            )
            .unwrap();
            assert_eq!(!ks.solutions.is_empty(), expect, "a0={a0} b0={b0}");
        }
    }

    #[test]
    fn solver_examples() {
        let r = kovacic_solve(&p("x^2+3"), 64).unwrap();
        assert!(r.is_solvable());
        let s = r.solutions().next().unwrap();
        assert_eq!(s.p, p("x"));
        assert_eq!(s.y1(), "(x)*exp(1/2*x^2)");
        assert!(s.verify());

        let r = kovacic_solve(&p("x^4+8x"), 64).unwrap();
        let s = r.solutions().next().unwrap();
        assert_eq!(s.p, p("x^3+1"));
        assert_eq!(s.y1(), "(x^3 + 1)*exp(1/3*x^3)");

        let r = kovacic_solve(&p("x^2+2"), 64).unwrap();
        assert!(matches!(r.verdict, Verdict::Sl2 { .. }));
        let r = kovacic_solve(&p("x^3+2"), 64).unwrap();
        assert_eq!(r.verdict, Verdict::Sl2 { reason: "odd degree".into() });
        assert!(kovacic_solve(&p("x^2+41"), 10).is_err());
    }

    #[test]
    fn canonical_family() {
        assert!((0..10).all(|d| canonical_integrability(1, d)));
        assert!(!canonical_integrability(2, 2));
        assert!(canonical_integrability(2, 3));
        assert!(canonical_integrability(3, 5));
        let s = canonical_solution(2, 0, Sign::Plus).unwrap();
        assert_eq!(s.p, p("1"));
        assert_eq!(s.y1(), "exp(1/3*x^3)");
        assert_eq!(canonical_solution(2, 3, Sign::Plus).unwrap().p, p("x^3+1"));
        let h = canonical_solution(1, 2, Sign::Minus).unwrap();
        assert_eq!(h.p.degree().finite(), Some(2));
        assert!(has_canonical_sparsity(&h.p, 1, 2));
        assert!(matches!(
            canonical_solution(2, 2, Sign::Plus),
            Err(KovacicError::NotIntegrable { .. })
        ));
    }

    #[test]
    fn minors_for_cubic() {
        // P = x solves P'' − 2x³P' + 2x²P = 0, i.e. A = x³, B = −5x², sign −
        let a = p("x^3");
        let ok = band_minor_conditions(&a, &p("-5x^2"), 1, Sign::Minus).unwrap();
        assert_eq!(ok.len(), 2);
        assert!(ok.iter().all(Ring::is_zero));
        let bad = band_minor_conditions(&a, &p("-5x^2 + 1"), 1, Sign::Minus).unwrap();
        assert!(!bad.iter().all(Ring::is_zero));
        assert!(band_minor_conditions(&p("x"), &p("3"), 1, Sign::Plus).unwrap().is_empty());
    }
}
