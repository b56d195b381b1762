//! Square-free factorization and root isolation for rational polynomials.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

use crate::exact::{QPoly, Rational, Ring};

/// Yun's algorithm: `f = c · Π fᵢ^i` with each `fᵢ` monic and square-free.
/// Returns `(fᵢ, i)` for the nonconstant factors.
pub fn square_free_factors(f: &QPoly) -> Vec<(QPoly, usize)> {
    let mut out = Vec::new();
    if f.degree().finite().unwrap_or(0) == 0 {
        return out;
    }
    let f = f.monic();
    let df = f.derivative();
    let mut a = f.gcd(&df);
    let mut b = f.exact_div_poly(&a).expect("gcd divides");
    let mut c = df.exact_div_poly(&a).expect("gcd divides");
    let mut d = c.sub_poly(&b.derivative());
    let mut i = 1;
    while !b.is_constant() {
        a = b.gcd(&d);
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        b = b.exact_div_poly(&a).expect("gcd divides");
        c = d.exact_div_poly(&a).expect("gcd divides");
        d = c.sub_poly(&b.derivative());
        i += 1;
    }
    out
}

/// Result of the simultaneous iteration.
#[derive(Debug, Clone)]
pub struct NumericRoots {
    pub roots: Vec<Complex64>,
    pub converged: bool,
    pub iterations: usize,
}

/// Aberth–Ehrlich iteration on the `f64` image of `f` (coefficients low to
/// high). Stops when every correction is below `tol` relative to the root.
pub fn aberth(coeffs: &[f64], tol: f64, max_iter: usize) -> NumericRoots {
    let deg = coeffs.len().saturating_sub(1);
    if deg == 0 {
        return NumericRoots {
            roots: Vec::new(),
            converged: true,
            iterations: 0,
        };
    }
    let lead = coeffs[deg];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    // Cauchy bound
    let radius = 1.0 + monic[..deg].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + 0.4;
            Complex64::from_polar(radius * 0.5, t)
        })
        .collect();
    let eval = |x: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in monic.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    };
    for it in 1..=max_iter {
        let mut worst = 0.0f64;
        for k in 0..deg {
            let (p, dp) = eval(z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..deg)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if w.is_finite() {
                z[k] -= w;
                worst = worst.max(w.norm() / z[k].norm().max(1.0));
            }
        }
        if worst < tol {
            return NumericRoots {
                roots: z,
                converged: true,
                iterations: it,
            };
        }
    }
    NumericRoots {
        roots: z,
        converged: false,
        iterations: max_iter,
    }
}

pub fn to_f64_coeffs(f: &QPoly) -> Vec<f64> {
    f.coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::NAN))
        .collect()
}

/// Positive divisors of `|n|`, or `None` when `n` has a prime factor beyond
/// the trial-division range.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let mut n = n.abs();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000);
    while &p * &p <= n {
        if p > limit {
            return None;
        }
        let mut e = 0;
        while &n % &p == BigInt::from(0) {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            primes.push((p.clone(), e));
        }
        p += 1;
    }
    if n != BigInt::from(1) {
        primes.push((n, 1));
    }
    let mut out = vec![BigInt::from(1)];
    for (p, e) in primes {
        let mut next = Vec::new();
        for d in &out {
            let mut m = d.clone();
            for _ in 0..=e {
                next.push(m.clone());
                m *= &p;
            }
        }
        out = next;
    }
    Some(out)
}

/// Rational roots of `f`, found by rounding numerical real roots onto the
/// admissible denominators and checking exactly.
pub fn rational_roots(f: &QPoly, approx: &[Complex64]) -> Vec<Rational> {
    let prim = f.primitive_part();
    let lead = match prim.leading() {
        Some(l) => l.to_integer(),
        None => return Vec::new(),
    };
    let dens = divisors(&lead).unwrap_or_else(|| vec![BigInt::from(1), lead.abs()]);
    let mut out: Vec<Rational> = Vec::new();
    for z in approx {
        if z.im.abs() > 1e-6 * z.re.abs().max(1.0) {
            continue;
        }
        for q in &dens {
            let qf = q.to_f64().unwrap_or(f64::INFINITY);
            let Some(num) = BigInt::from_f64((z.re * qf).round()) else {
                continue;
            };
            let c = Rational::new(num, q.clone());
            if !out.contains(&c) && prim.eval(&c).is_zero() {
                out.push(c);
                break;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_qpoly, q};

    fn p(s: &str) -> QPoly {
        parse_qpoly(s).unwrap()
    }

    #[test]
    fn yun() {
        let f = p("(x - 1)^3*(x + 2)^2*(x^2 + 1)");
        let mut got = square_free_factors(&f);
        got.sort_by_key(|(_, i)| *i);
        assert_eq!(got, vec![(p("x^2 + 1"), 1), (p("x + 2"), 2), (p("x - 1"), 3)]);
        assert!(square_free_factors(&p("7")).is_empty());
    }

    #[test]
    fn numeric_and_rational() {
        let f = p("(2x - 3)*(x + 5)*(x^2 - 24)");
        let r = aberth(&to_f64_coeffs(&f), 1e-12, 500);
        assert!(r.converged);
        let mut roots = rational_roots(&f, &r.roots);
        roots.sort();
        assert_eq!(roots, vec![q(-5), Rational::new(3.into(), 2.into())]);
        let mut re: Vec<f64> = r.roots.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[3] - 24f64.sqrt()).abs() < 1e-12);
    }
}
