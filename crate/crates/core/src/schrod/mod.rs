//! Quasi-exactly solvable Schrödinger operators `−ψ'' + U ψ = λ ψ` with even
//! polynomial potential `U`: spectral polynomials, algebraic energy levels
//! and closed-form eigenfunctions.
//!
//! Energies are handled in the convention `M = U − λ`. A non-monic `U` is
//! rescaled by `x ↦ kx`, which multiplies energies by `k²`.

mod roots;
mod surd;

pub use roots::{aberth, rational_roots, square_free_factors, to_f64_coeffs, NumericRoots};
pub use surd::{square_free, QuadSurd};

use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};

use crate::aim::AimError;
use crate::exact::{q, QPoly, Rational, Ring, UniPoly};
use crate::kovacic::{
    kovacic_solve, polynomial_solutions_in, KovacicError, LiouvillianSolution, Verdict,
};
use crate::reduce::{
    arithmetic_condition_value, complete_square, monic_rescale, ReduceError, Rescaled, Sign,
};
use crate::spectral::obstruction;

/// Variable of spectral polynomials.
pub const ENERGY_VAR: &str = "lam";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SchrodError {
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error(transparent)]
    Kovacic(#[from] KovacicError),
    #[error(transparent)]
    Budget(#[from] AimError),
    #[error("not quasi-exactly solvable: {0}")]
    NotCandidate(String),
    #[error("exactly solvable (n = 1): every level is algebraic, use the level formula")]
    ExactlySolvable,
    #[error("spectral polynomial vanishes identically")]
    Degenerate,
}

/// `U` brought to the form `k²U(kx) = A² + B₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialProblem {
    pub u: QPoly,
    pub scale: Rational,
    pub monic: QPoly,
    pub a: QPoly,
    pub b0: QPoly,
    pub n: usize,
}

impl PotentialProblem {
    pub fn new(u: &QPoly, scale: Option<&Rational>) -> Result<Self, SchrodError> {
        let (monic, scale) = match monic_rescale(u, scale, false)? {
            Rescaled::Exact { m, scale } => (m, scale),
            Rescaled::Numeric { .. } => return Err(ReduceError::IrrationalRescale.into()),
        };
        let dec = complete_square(&monic)?;
        Ok(PotentialProblem {
            u: u.clone(),
            scale,
            monic,
            a: dec.a,
            b0: dec.b,
            n: dec.n,
        })
    }

    fn k2(&self) -> Rational {
        &self.scale * &self.scale
    }

    /// `μ = k²λ`, the energy of the rescaled problem.
    pub fn scaled_energy(&self, lambda: &QuadSurd) -> QuadSurd {
        lambda.mul(&QuadSurd::rational(self.k2()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Analysis {
    /// Algebraic levels can exist only for this sign and degree.
    Candidate { sign: Sign, d: usize },
    /// `n = 1`: `λ = offset − s(2d+1)·spacing` for every `d` and sign `s`.
    ExactlySolvable { offset: Rational, spacing: Rational },
    NotCandidate { reason: String },
}

impl Analysis {
    /// Level `d` of sign `s` in the exactly solvable case.
    pub fn level(&self, d: usize, sign: Sign) -> Option<Rational> {
        match self {
            Analysis::ExactlySolvable { offset, spacing } => {
                Some(offset - q(sign.value() * (2 * d as i64 + 1)) * spacing)
            }
            _ => None,
        }
    }
}

/// The arithmetic condition on `b_{n−1}` of `U − λ`; `λ` only enters `b₀`, so
/// for `n ≥ 2` the verdict is independent of the energy.
pub fn arithmetic_condition_potential(problem: &PotentialProblem) -> Analysis {
    let k2 = problem.k2();
    if problem.n == 1 {
        return Analysis::ExactlySolvable {
            offset: problem.b0.coeff(0) / &k2,
            spacing: q(1) / &k2,
        };
    }
    let top = problem.b0.coeff(problem.n - 1);
    match arithmetic_condition_value(&top, problem.n).first() {
        Some(&(sign, d)) => Analysis::Candidate { sign, d },
        None => Analysis::NotCandidate {
            reason: format!(
                "b_{} = {} is not of the form ±(2d+{})",
                problem.n - 1,
                crate::exact::rational_text(&top),
                problem.n
            ),
        },
    }
}

fn candidate(problem: &PotentialProblem) -> Result<(Sign, usize), SchrodError> {
    match arithmetic_condition_potential(problem) {
        Analysis::Candidate { sign, d } => Ok((sign, d)),
        Analysis::ExactlySolvable { .. } => Err(SchrodError::ExactlySolvable),
        Analysis::NotCandidate { reason } => Err(SchrodError::NotCandidate(reason)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPolynomial {
    pub sign: Sign,
    pub d: usize,
    /// Monic, in the original energy `λ`.
    pub poly: QPoly,
}

/// Energies for which `U − λ` admits a solution `P e^{s∫A}` with
/// `deg P = d`: the monic gcd of the `x`-coefficients of `δ_d`.
pub fn spectral_polynomial(
    problem: &PotentialProblem,
    term_budget: usize,
) -> Result<SpectralPolynomial, SchrodError> {
    let (sign, d) = candidate(problem)?;
    let lift = |c: &Rational| UniPoly::with_var(vec![c.clone()], ENERGY_VAR);
    let a: UniPoly<QPoly> = problem.a.map_coeffs(lift);
    let mu = UniPoly::with_var(vec![q(0), q(1)], ENERGY_VAR);
    let mut b: UniPoly<QPoly> = problem.b0.map_coeffs(lift);
    b = b.sub_poly(&UniPoly::constant(mu));
    let delta = obstruction(&a, &b, d, sign, term_budget)?;
    let g = delta
        .coeffs()
        .iter()
        .fold(QPoly::zero_poly(), |g, c| g.gcd(c));
    if g.is_zero() {
        return Err(SchrodError::Degenerate);
    }
    let k2 = UniPoly::with_var(vec![q(0), problem.k2()], ENERGY_VAR);
    let poly = g.compose(&k2).monic().renamed(ENERGY_VAR);
    Ok(SpectralPolynomial { sign, d, poly })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    /// Closed form when the level is rational or quadratic.
    pub exact: Option<QuadSurd>,
    pub value: Complex64,
    pub multiplicity: usize,
}

impl Level {
    pub fn is_real(&self) -> bool {
        match &self.exact {
            Some(e) => !e.d.is_negative(),
            None => self.value.im == 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub polynomial: SpectralPolynomial,
    pub levels: Vec<Level>,
    pub converged: bool,
    /// At most `d + 1` distinct levels.
    pub within_bound: bool,
}

/// Roots of a quadratic `x² + px + c`, exactly.
fn quadratic_roots(f: &QPoly) -> [QuadSurd; 2] {
    let p = f.coeff(1);
    let c = f.coeff(0);
    let half = -&p / q(2);
    // disc/4 = p²/4 − c = num/den ⇒ √(disc/4) = √(num·den)/den
    let quarter = &half * &half - c;
    let num = quarter.numer() * quarter.denom();
    let inv_den = Rational::new(1.into(), quarter.denom().clone());
    [
        QuadSurd::new(half.clone(), -inv_den.clone(), num.clone()),
        QuadSurd::new(half, inv_den, num),
    ]
}

/// Algebraic energy levels: square-free parts of the spectral polynomial,
/// exact rational and quadratic roots, the rest by Aberth iteration.
pub fn eigenvalues(
    problem: &PotentialProblem,
    tol: f64,
    term_budget: usize,
) -> Result<Spectrum, SchrodError> {
    let polynomial = spectral_polynomial(problem, term_budget)?;
    let mut levels = Vec::new();
    let mut converged = true;
    for (factor, mult) in square_free_factors(&polynomial.poly) {
        let approx = aberth(&to_f64_coeffs(&factor), tol, 500);
        converged &= approx.converged;
        let mut rest = factor.clone();
        for r in rational_roots(&factor, &approx.roots) {
            rest = rest
                .exact_div_poly(&UniPoly::with_var(vec![-r.clone(), q(1)], ENERGY_VAR))
                .expect("exact root");
            let z = QuadSurd::rational(r);
            levels.push(Level {
                value: Complex64::new(z.to_f64(), 0.0),
                exact: Some(z),
                multiplicity: mult,
            });
        }
        match rest.degree().finite().unwrap_or(0) {
            0 => {}
            2 => {
                for z in quadratic_roots(&rest) {
                    let value = if z.d.is_negative() {
                        let re = z.a.to_f64().unwrap_or(f64::NAN);
                        let im = z.b.to_f64().unwrap_or(f64::NAN)
                            * z.d.abs().to_f64().unwrap_or(f64::NAN).sqrt();
                        Complex64::new(re, im)
                    } else {
                        Complex64::new(z.to_f64(), 0.0)
                    };
                    levels.push(Level {
                        exact: Some(z),
                        value,
                        multiplicity: mult,
                    });
                }
            }
            _ => {
                let approx = aberth(&to_f64_coeffs(&rest), tol, 500);
                converged &= approx.converged;
                levels.extend(approx.roots.into_iter().map(|value| Level {
                    exact: None,
                    value,
                    multiplicity: mult,
                }));
            }
        }
    }
    // conjugate-free real roots come back with rounding-level imaginary parts
    for l in &mut levels {
        if l.value.im.abs() <= 1e3 * tol * l.value.norm().max(1.0) {
            l.value.im = 0.0;
        }
    }
    levels.sort_by(|x, y| {
        x.value
            .re
            .total_cmp(&y.value.re)
            .then(x.value.im.total_cmp(&y.value.im))
    });
    let within_bound = levels.len() <= polynomial.d + 1;
    Ok(Spectrum {
        polynomial,
        levels,
        converged,
        within_bound,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub lambda: QuadSurd,
    pub verdict: Verdict,
    /// Solutions of the rescaled problem `y'' = (k²U(kx) − μ) y`.
    pub solutions: Vec<LiouvillianSolution<QuadSurd>>,
}

impl EnergyReport {
    pub fn is_solvable(&self) -> bool {
        self.verdict == Verdict::Solvable
    }
}

fn lift_solution(s: &LiouvillianSolution<Rational>) -> LiouvillianSolution<QuadSurd> {
    let f = |c: &Rational| QuadSurd::rational(c.clone());
    LiouvillianSolution {
        p: s.p.map_coeffs(f),
        sign: s.sign,
        a: s.a.map_coeffs(f),
        b: s.b.map_coeffs(f),
    }
}

/// Decides `y'' = (U − λ) y` at a fixed energy, rational or quadratic.
pub fn solve_at_energy(
    problem: &PotentialProblem,
    lambda: &QuadSurd,
    max_d: usize,
) -> Result<EnergyReport, SchrodError> {
    let mu = problem.scaled_energy(lambda);
    if let Some(mu) = mu.to_rational() {
        let m = problem.monic.sub_poly(&QPoly::constant(mu));
        let report = kovacic_solve(&m, max_d)?;
        return Ok(EnergyReport {
            lambda: lambda.clone(),
            solutions: report.solutions().map(lift_solution).collect(),
            verdict: report.verdict,
        });
    }
    let sl2 = |reason: &str| EnergyReport {
        lambda: lambda.clone(),
        verdict: Verdict::Sl2 {
            reason: reason.into(),
        },
        solutions: Vec::new(),
    };
    let (sign, d) = match arithmetic_condition_potential(problem) {
        Analysis::Candidate { sign, d } => (sign, d),
        Analysis::NotCandidate { .. } => return Ok(sl2("arithmetic condition fails")),
        // b₀ − μ irrational never meets ±1 + 2d
        Analysis::ExactlySolvable { .. } => return Ok(sl2("arithmetic condition fails")),
    };
    if d > max_d {
        return Err(KovacicError::DegreeLimit { d, max_d }.into());
    }
    let f = |c: &Rational| QuadSurd::rational(c.clone());
    let a = problem.a.map_coeffs(f);
    let b = problem.b0.map_coeffs(f).sub_poly(&UniPoly::constant(mu));
    let ks = polynomial_solutions_in(&a, &b, d, sign)?;
    if ks.solutions.is_empty() {
        return Ok(sl2("no polynomial solution of the admissible degree"));
    }
    Ok(EnergyReport {
        lambda: lambda.clone(),
        verdict: Verdict::Solvable,
        solutions: ks
            .solutions
            .into_iter()
            .map(|p| LiouvillianSolution {
                p,
                sign,
                a: a.clone(),
                b: b.clone(),
            })
            .collect(),
    })
}
