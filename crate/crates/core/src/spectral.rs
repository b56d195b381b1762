//! Equations of the reduced spectral varieties: the locus of `(A, B)` for
//! which `y'' = (A² + B) y` has a solution `P e^{s∫A}` with `deg P = d`.
//!
//! On the hyperplane `b_{n−1} = s(2d+n)` the variety is cut out by the
//! x-coefficients of `Δ_d(sA, B)`, evaluated here with the AIM recurrence
//! over symbolic coefficients.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aim::{aim_iterate_budgeted, AimError};
use crate::exact::{
    null_space_exact, q, rank_exact, var_list, Matrix, MultiPoly, QPoly, Rational, Ring, UniPoly,
    VarList,
};
use crate::kovacic::AuxiliaryEquation;
use crate::reduce::{complete_square, ReduceError, Sign};

pub const DEFAULT_TERM_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpectralError {
    #[error(transparent)]
    Budget(#[from] AimError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error("n must be at least 1")]
    BadDegree,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralIdeal {
    pub n: usize,
    pub d: usize,
    pub sign: Sign,
    pub depressed: bool,
    /// Value of `b_{n−1}` on the variety: `s(2d+n)`.
    pub b_top: Rational,
    pub vars: VarList,
    /// Normalized, pairwise distinct, nonzero generators in increasing
    /// x-power order.
    pub generators: Vec<MultiPoly>,
}

impl SpectralIdeal {
    pub fn linear_condition(&self) -> String {
        format!("b{} = {}", self.n - 1, self.b_top)
    }
}

/// Coordinate names: `a0..a_{n−1}` (without `a_{n−1}` when depressed) and
/// `b0..b_{n−2}`.
pub fn coordinate_vars(n: usize, depress: bool) -> VarList {
    let top_a = if depress { n - 1 } else { n };
    let names: Vec<String> = (0..top_a)
        .map(|i| format!("a{i}"))
        .chain((0..n - 1).map(|i| format!("b{i}")))
        .collect();
    var_list(&names)
}

/// Symbolic `A = xⁿ + Σ aᵢxⁱ` and `B = Σ bᵢxⁱ + s(2d+n)x^{n−1}`.
fn symbolic_pair(
    n: usize,
    d: usize,
    sign: Sign,
    vars: &VarList,
    depress: bool,
) -> (UniPoly<MultiPoly>, UniPoly<MultiPoly>) {
    let var = |name: String| MultiPoly::var_named(vars, &name).expect("declared");
    let mut a: Vec<MultiPoly> = (0..n)
        .map(|i| {
            if depress && i == n - 1 {
                MultiPoly::zero_in(vars)
            } else {
                var(format!("a{i}"))
            }
        })
        .collect();
    a.push(MultiPoly::constant_in(vars, q(1)));
    let mut b: Vec<MultiPoly> = (0..n - 1).map(|i| var(format!("b{i}"))).collect();
    b.push(MultiPoly::constant_in(vars, q(sign.value() * (2 * d + n) as i64)));
    (UniPoly::new(a), UniPoly::new(b))
}

/// `δ_d` for `ℓ₀ = −2sA`, `r₀ = B − sA'`, i.e. `Δ_d(sA, B)`.
pub fn obstruction<C: Ring>(
    a: &UniPoly<C>,
    b: &UniPoly<C>,
    d: usize,
    sign: Sign,
    budget: usize,
) -> Result<UniPoly<C>, AimError> {
    let aux = AuxiliaryEquation::new(sign, a.clone(), b.clone());
    Ok(aim_iterate_budgeted(&aux.l0(), &aux.r0(), d, budget)?.obstruction())
}

/// Normalizes and deduplicates x-coefficients into generators.
pub fn generators_from(coeffs: &[MultiPoly]) -> Vec<MultiPoly> {
    let mut out: Vec<MultiPoly> = Vec::new();
    for c in coeffs {
        if c.num_terms() == 0 {
            continue;
        }
        let g = c.primitive_normalized();
        if !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

pub fn spectral_ideal(
    n: usize,
    d: usize,
    sign: Sign,
    depress: bool,
    term_budget: usize,
) -> Result<SpectralIdeal, SpectralError> {
    if n == 0 {
        return Err(SpectralError::BadDegree);
    }
    let vars = coordinate_vars(n, depress);
    let (a, b) = symbolic_pair(n, d, sign, &vars, depress);
    let delta = obstruction(&a, &b, d, sign, term_budget)?;
    let coeffs: Vec<MultiPoly> = delta.coeffs().iter().map(|c| c.with_vars(&vars)).collect();
    Ok(SpectralIdeal {
        n,
        d,
        sign,
        depressed: depress,
        b_top: q(sign.value() * (2 * d + n) as i64),
        vars,
        generators: generators_from(&coeffs),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    InLPlus,
    InLMinus,
    Out,
}

/// Whether monic `M` lies on the degree-`d` spectral variety of either sign.
pub fn membership(m: &QPoly, d: usize) -> Result<Membership, SpectralError> {
    let dec = complete_square(m)?;
    let b_top = dec.b_top();
    for sign in Sign::both() {
        if b_top != q(sign.value() * (2 * d + dec.n) as i64) {
            continue;
        }
        let delta = obstruction(&dec.a, &dec.b, d, sign, usize::MAX)?;
        if delta.is_zero() {
            return Ok(match sign {
                Sign::Plus => Membership::InLPlus,
                Sign::Minus => Membership::InLMinus,
            });
        }
    }
    Ok(Membership::Out)
}

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorStatus {
    /// Equal to `scale ×` the computed generator at `index`.
    ScalarMatch { index: usize, scale: Rational },
    /// Vanishes at every sampled point of the variety.
    SampledAgree { points: usize },
    /// Nonzero at `failures` of `points` sampled points.
    SampledDisagree { points: usize, failures: usize },
    Unverified { reason: String },
}

impl GeneratorStatus {
    pub fn passed(&self) -> bool {
        matches!(
            self,
            GeneratorStatus::ScalarMatch { .. } | GeneratorStatus::SampledAgree { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub statuses: Vec<GeneratorStatus>,
    /// Computed generators found to vanish on every sampled point (when
    /// sampling ran).
    pub computed_vanish_on_samples: Option<bool>,
}

impl EquivalenceReport {
    pub fn all_match(&self) -> bool {
        self.statuses.iter().all(GeneratorStatus::passed)
            && self.computed_vanish_on_samples != Some(false)
    }
}

/// Compares reference generators (over `ideal.vars`) against the computed
/// ones: first up to a rational scalar, then, for unmatched generators, by
/// evaluating at `samples` random rational points of the variety.
pub fn ideal_equivalence_check(
    ideal: &SpectralIdeal,
    reference: &[MultiPoly],
    samples: usize,
    seed: u64,
) -> EquivalenceReport {
    let reference: Vec<MultiPoly> = reference.iter().map(|r| r.with_vars(&ideal.vars)).collect();
    let mut statuses: Vec<Option<GeneratorStatus>> = reference
        .iter()
        .map(|r| {
            ideal.generators.iter().enumerate().find_map(|(index, g)| {
                r.scalar_ratio(g)
                    .map(|scale| GeneratorStatus::ScalarMatch { index, scale })
            })
        })
        .collect();
    let mut computed_vanish = None;
    if statuses.iter().any(Option::is_none) && samples > 0 {
        match sample_points(ideal, samples, seed) {
            Ok(points) => {
                computed_vanish = Some(points.iter().all(|pt| {
                    ideal.generators.iter().all(|g| g.eval(pt) == q(0))
                }));
                for (st, r) in statuses.iter_mut().zip(&reference) {
                    if st.is_none() {
                        let failures = points.iter().filter(|pt| r.eval(pt) != q(0)).count();
                        *st = Some(if failures == 0 {
                            GeneratorStatus::SampledAgree {
                                points: points.len(),
                            }
                        } else {
                            GeneratorStatus::SampledDisagree {
                                points: points.len(),
                                failures,
                            }
                        });
                    }
                }
            }
            Err(reason) => {
                for st in statuses.iter_mut().filter(|s| s.is_none()) {
                    *st = Some(GeneratorStatus::Unverified {
                        reason: reason.clone(),
                    });
                }
            }
        }
    }
    EquivalenceReport {
        statuses: statuses
            .into_iter()
            .map(|s| {
                s.unwrap_or(GeneratorStatus::Unverified {
                    reason: "no scalar match and sampling disabled".into(),
                })
            })
            .collect(),
        computed_vanish_on_samples: computed_vanish,
    }
}

/// Random rational points of the variety.
///
/// A random monic `P` of degree `d` is fixed; the auxiliary equation is then
/// linear in the coordinates `aᵢ, bᵢ`, and any rational solution is a point
/// of the variety. This needs the `d + n − 1` coefficient equations not to
/// outnumber the unknowns, otherwise a generic `P` admits no solution.
pub fn sample_points(
    ideal: &SpectralIdeal,
    samples: usize,
    seed: u64,
) -> Result<Vec<Vec<Rational>>, String> {
    let (n, d) = (ideal.n, ideal.d);
    let unknowns = ideal.vars.len();
    let equations = d + n - 1;
    if equations > unknowns {
        return Err(format!(
            "sampling needs d + n - 1 <= {unknowns} coordinate unknowns (d = {d}, n = {n})"
        ));
    }
    let s = q(ideal.sign.value());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = |k: usize| QPoly::monomial(q(1), k);
    let mut points = Vec::with_capacity(samples);
    let mut attempts = 0;
    while points.len() < samples {
        attempts += 1;
        if attempts > 50 * samples + 50 {
            return Err("no consistent sample found".into());
        }
        let mut pc: Vec<Rational> = (0..d)
            .map(|_| Rational::new(rng.gen_range(-20i64..=20).into(), rng.gen_range(1i64..=5).into()))
            .collect();
        pc.push(q(1));
        let p = QPoly::new(pc);
        let dp = p.derivative();
        // columns: one per coordinate, then the constant part
        let mut cols: Vec<QPoly> = Vec::with_capacity(unknowns + 1);
        for name in ideal.vars.iter() {
            let i: usize = name[1..].parse().expect("indexed coordinate");
            let col = if name.starts_with('a') {
                let mut t = (x(i) * dp.clone()).scale_rational(&(q(2) * &s));
                if i > 0 {
                    t = t + (x(i - 1) * p.clone()).scale_rational(&(q(i as i64) * &s));
                }
                t
            } else {
                -(x(i) * p.clone())
            };
            cols.push(col);
        }
        let top = n - 1;
        let konst = dp.derivative()
            + (x(n) * dp.clone()).scale_rational(&(q(2) * &s))
            + (x(top) * p.clone()).scale_rational(&(q(n as i64) * &s))
            - (x(top) * p.clone()).scale_rational(&ideal.b_top);
        cols.push(konst);
        let rows = d + n;
        let mut m = Matrix::zeros(rows, unknowns + 1);
        for (j, c) in cols.iter().enumerate() {
            for (k, v) in c.coeffs().iter().enumerate() {
                m.set(k, j, v.clone());
            }
        }
        let kernel = null_space_exact(&m);
        let Some(base) = kernel.iter().find(|v| !v[unknowns].is_zero()) else {
            continue;
        };
        let mut point: Vec<Rational> = base[..unknowns].iter().map(|c| c / &base[unknowns]).collect();
        // move randomly inside the solution set
        for v in kernel.iter().filter(|v| v[unknowns].is_zero()) {
            let t = q(rng.gen_range(-5i64..=5));
            for (pt, c) in point.iter_mut().zip(v) {
                *pt += &t * c;
            }
        }
        points.push(point);
    }
    Ok(points)
}

/// Rank of the Jacobian of the generators at a point.
pub fn jacobian_rank(ideal: &SpectralIdeal, point: &[Rational]) -> usize {
    let rows: Vec<Vec<Rational>> = ideal
        .generators
        .iter()
        .map(|g| (0..ideal.vars.len()).map(|i| g.partial(i).eval(point)).collect())
        .collect();
    if rows.is_empty() {
        return 0;
    }
    rank_exact(&Matrix::from_rows(rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_multi, parse_qpoly};

    #[test]
    fn quartic_low_degrees() {
        let v0 = spectral_ideal(2, 0, Sign::Plus, true, DEFAULT_TERM_BUDGET).unwrap();
        assert_eq!(v0.linear_condition(), "b1 = 2");
        assert_eq!(v0.generators, vec![parse_multi("b0", &["a0", "b0"]).unwrap()]);
        let v1 = spectral_ideal(2, 1, Sign::Plus, true, DEFAULT_TERM_BUDGET).unwrap();
        assert_eq!(v1.generators.len(), 1);
        assert_eq!(v1.generators[0].to_text(), "b0^2 + 4*a0");
    }

    #[test]
    fn harmonic_has_empty_ideal() {
        for d in 0..6 {
            for s in Sign::both() {
                let v = spectral_ideal(1, d, s, true, DEFAULT_TERM_BUDGET).unwrap();
                assert!(v.generators.is_empty(), "d={d} s={s}");
            }
        }
    }

    #[test]
    fn membership_examples() {
        let p = |s: &str| parse_qpoly(s).unwrap();
        assert_eq!(membership(&p("x^2+3"), 1).unwrap(), Membership::InLPlus);
        assert_eq!(membership(&p("x^2-3"), 1).unwrap(), Membership::InLMinus);
        assert_eq!(membership(&p("x^4+8x"), 3).unwrap(), Membership::InLPlus);
        assert_eq!(membership(&p("x^4+8x"), 2).unwrap(), Membership::Out);
    }

    #[test]
    fn sampling_points_lie_on_variety() {
        let v = spectral_ideal(2, 1, Sign::Plus, true, DEFAULT_TERM_BUDGET).unwrap();
        let pts = sample_points(&v, 5, 7).unwrap();
        for pt in &pts {
            assert!(v.generators.iter().all(|g| g.eval(pt) == q(0)));
        }
        let reference = vec![parse_multi("3*b0^2 + 12*a0", &["a0", "b0"]).unwrap()];
        assert!(ideal_equivalence_check(&v, &reference, 0, 1).all_match());
        let wrong = vec![parse_multi("b0^2 - 4*a0", &["a0", "b0"]).unwrap()];
        let rep = ideal_equivalence_check(&v, &wrong, 5, 1);
        assert!(matches!(rep.statuses[0], GeneratorStatus::SampledDisagree { .. }));
    }
}
