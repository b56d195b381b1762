//! The asymptotic iteration method for `y'' = ℓ₀ y' + r₀ y`.
//!
//! Differentiating the equation `j` times gives `y^{(j+2)} = ℓ_j y' + r_j y`
//! with
//!
//! ```text
//! ℓ_{j+1} = ℓ_j' + r_j + ℓ₀ ℓ_j,    r_{j+1} = r_j' + r₀ ℓ_j,
//! ```
//!
//! and the obstructions `δ_j = r_j ℓ_{j−1} − ℓ_j r_{j−1}` (with
//! `ℓ_{−1} = 1`, `r_{−1} = 0`).

use crate::exact::{QPoly, Ring, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AimError {
    #[error("term budget of {budget} exceeded at iteration {step} ({terms} terms)")]
    TermBudget {
        budget: usize,
        step: usize,
        terms: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AimState<C: Ring> {
    pub j: usize,
    pub l: UniPoly<C>,
    pub r: UniPoly<C>,
    pub l_prev: UniPoly<C>,
    pub r_prev: UniPoly<C>,
    pub l0: UniPoly<C>,
    pub r0: UniPoly<C>,
}

impl<C: Ring> AimState<C> {
    /// State at `j = 0`.
    pub fn new(l0: &UniPoly<C>, r0: &UniPoly<C>) -> Self {
        let var = l0.var_arc().clone();
        AimState {
            j: 0,
            l: l0.clone(),
            r: r0.clone(),
            l_prev: UniPoly::with_var(vec![C::one()], var.clone()),
            r_prev: UniPoly::with_var(Vec::new(), var),
            l0: l0.clone(),
            r0: r0.clone(),
        }
    }

    pub fn step(&self) -> Self {
        let l = self.l.derivative() + self.r.clone() + self.l0.mul_poly(&self.l);
        let r = self.r.derivative() + self.r0.mul_poly(&self.l);
        AimState {
            j: self.j + 1,
            l,
            r,
            l_prev: self.l.clone(),
            r_prev: self.r.clone(),
            l0: self.l0.clone(),
            r0: self.r0.clone(),
        }
    }

    /// `δ_j = r_j ℓ_{j−1} − ℓ_j r_{j−1}`.
    pub fn obstruction(&self) -> UniPoly<C> {
        self.r.mul_poly(&self.l_prev) - self.l.mul_poly(&self.r_prev)
    }

    pub fn total_terms(&self) -> usize {
        self.l.total_terms() + self.r.total_terms()
    }
}

/// State after `p` iterations.
pub fn aim_iterate<C: Ring>(l0: &UniPoly<C>, r0: &UniPoly<C>, p: usize) -> AimState<C> {
    let mut s = AimState::new(l0, r0);
    for _ in 0..p {
        s = s.step();
    }
    s
}

/// As [`aim_iterate`], failing once `ℓ_j` and `r_j` together hold more than
/// `budget` coefficient terms.
pub fn aim_iterate_budgeted<C: Ring>(
    l0: &UniPoly<C>,
    r0: &UniPoly<C>,
    p: usize,
    budget: usize,
) -> Result<AimState<C>, AimError> {
    let mut s = AimState::new(l0, r0);
    for _ in 0..p {
        s = s.step();
        let terms = s.total_terms();
        if terms > budget {
            return Err(AimError::TermBudget {
                budget,
                step: s.j,
                terms,
            });
        }
    }
    Ok(s)
}

pub fn aim_obstruction<C: Ring>(l0: &UniPoly<C>, r0: &UniPoly<C>, p: usize) -> UniPoly<C> {
    aim_iterate(l0, r0, p).obstruction()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolySolution {
    /// `δ_p = 0` and `ℓ_p ℓ_{p−1} ≠ 0`: a polynomial solution of degree ≤ p.
    YesDegreeAtMost(usize),
    /// `δ_p ≠ 0`: no polynomial solution of degree p.
    NoAtP(usize),
    /// `δ_p = 0` but `ℓ_p ℓ_{p−1} = 0`.
    Indeterminate(usize),
}

pub fn has_polynomial_solution<C: Ring>(
    l0: &UniPoly<C>,
    r0: &UniPoly<C>,
    p: usize,
) -> PolySolution {
    let s = aim_iterate(l0, r0, p);
    if !s.obstruction().is_zero() {
        PolySolution::NoAtP(p)
    } else if s.l.is_zero() || s.l_prev.is_zero() {
        PolySolution::Indeterminate(p)
    } else {
        PolySolution::YesDegreeAtMost(p)
    }
}

/// Outcome of searching for the first stabilization index.
#[derive(Debug, Clone, PartialEq)]
pub enum AimVerdict<C: Ring> {
    Stabilized {
        p: usize,
        /// `α = r_p / ℓ_p` as (numerator, denominator).
        alpha: (UniPoly<C>, UniPoly<C>),
        /// General solution `y = u⁻¹(c₂ + c₁β)`, `u' = αu`, `v' = ℓ₀v`,
        /// `β' = u²v`, as a formal expression.
        formal_solution: String,
    },
    BudgetExhausted {
        max_p: usize,
        /// `δ_{max_p}`.
        obstruction: UniPoly<C>,
    },
}

/// Iterates `p = 1..=max_p` and stops at the first `δ_p = 0` with
/// `ℓ_p ≠ 0`.
pub fn stabilize<C: Ring>(l0: &UniPoly<C>, r0: &UniPoly<C>, max_p: usize) -> AimVerdict<C> {
    let mut s = AimState::new(l0, r0);
    for _ in 0..max_p {
        s = s.step();
        if s.obstruction().is_zero() && !s.l.is_zero() {
            let alpha = (s.r.clone(), s.l.clone());
            let formal_solution = format!(
                "y = u^(-1)*(c2 + c1*beta), u' = alpha*u, v' = ({})*v, beta' = u^2*v, alpha = ({})/({})",
                l0, alpha.0, alpha.1
            );
            return AimVerdict::Stabilized {
                p: s.j,
                alpha,
                formal_solution,
            };
        }
    }
    AimVerdict::BudgetExhausted {
        max_p,
        obstruction: s.obstruction(),
    }
}

/// `α` in lowest terms (monic denominator), for rational coefficients.
pub fn reduce_ratio(num: &QPoly, den: &QPoly) -> (QPoly, QPoly) {
    let g = num.gcd(den);
    if g.is_zero() {
        return (num.clone(), den.clone());
    }
    let n = num.exact_div_poly(&g).expect("gcd divides");
    let d = den.exact_div_poly(&g).expect("gcd divides");
    let lead = d.leading().cloned().expect("nonzero denominator");
    let inv = crate::exact::Field::inv(&lead).expect("nonzero");
    (n.scale_by(&inv), d.scale_by(&inv))
}
