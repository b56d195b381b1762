use liouville_core::diffalg::delta_evaluate;
use liouville_core::exact::{q, qf, QPoly, Rational};
use liouville_core::kovacic::{
    canonical_integrability, canonical_solution, has_canonical_sparsity, kovacic_solve,
    polynomial_solutions, KovacicError,
};
use liouville_core::reduce::{complete_square, Sign};
use liouville_core::spectral::{sample_points, spectral_ideal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The three independent tests agree on `(A, B)` satisfying the arithmetic
/// condition for `(sign, d)`.
fn assert_consistent(a: &QPoly, b: &QPoly, d: usize, sign: Sign) -> bool {
    let sa = a.scale_rational(&q(sign.value()));
    let vanishes = delta_evaluate(d, &sa, b).is_zero();
    let ks = polynomial_solutions(a, b, d, sign).unwrap();
    let kernel = !ks.solutions.is_empty() || !ks.degenerate.is_empty();
    let m = a.clone() * a.clone() + b.clone();
    let report = kovacic_solve(&m, 64).unwrap();
    assert_eq!(vanishes, kernel, "A = {a}, B = {b}, d = {d}");
    assert_eq!(vanishes, report.is_solvable(), "A = {a}, B = {b}, d = {d}");
    assert!(report.solutions().all(|s| s.verify()));
    vanishes
}

fn point_to_pair(n: usize, b_top: &Rational, pt: &[Rational], depressed: bool) -> (QPoly, QPoly) {
    let na = if depressed { n - 1 } else { n };
    let mut a: Vec<Rational> = pt[..na].to_vec();
    a.resize(n, q(0));
    a.push(q(1));
    let mut b: Vec<Rational> = pt[na..].to_vec();
    b.push(b_top.clone());
    (QPoly::new(a), QPoly::new(b))
}

#[test]
fn random_instances_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..150 {
        let n = rng.gen_range(1..=3usize);
        let d = rng.gen_range(0..=5usize);
        let sign = if rng.gen() { Sign::Plus } else { Sign::Minus };
        let mut a: Vec<Rational> = (0..n).map(|_| qf(rng.gen_range(-20..=20), rng.gen_range(1..=20))).collect();
        a.push(q(1));
        let mut b: Vec<Rational> = (0..n - 1).map(|_| qf(rng.gen_range(-20..=20), rng.gen_range(1..=20))).collect();
        b.push(q(sign.value() * (2 * d + n) as i64));
        assert_consistent(&QPoly::new(a), &QPoly::new(b), d, sign);
    }
}

#[test]
fn points_of_varieties_are_solvable() {
    for (n, depressed, max_d) in [(1, false, 1), (2, false, 2), (3, true, 2)] {
        for d in 0..=max_d {
            for sign in Sign::both() {
                let ideal = spectral_ideal(n, d, sign, depressed, usize::MAX).unwrap();
                for pt in sample_points(&ideal, 4, (10 * n + d) as u64).unwrap() {
                    let (a, b) = point_to_pair(n, &ideal.b_top, &pt, depressed);
                    assert!(assert_consistent(&a, &b, d, sign), "n = {n}, d = {d}");
                }
            }
        }
    }
}

#[test]
fn canonical_family() {
    for n in 1..=4usize {
        for d in 0..=2 * (n + 1) + 1 {
            for sign in Sign::both() {
                let b = q(sign.value() * (2 * d + n) as i64);
                let m = QPoly::monomial(q(1), 2 * n) + QPoly::monomial(b, n - 1);
                let report = kovacic_solve(&m, 64).unwrap();
                assert_eq!(report.is_solvable(), canonical_integrability(n, d), "n = {n}, d = {d}");
                for s in report.solutions() {
                    assert!(s.verify());
                    assert_eq!(s.sign, sign);
                    assert!(has_canonical_sparsity(&s.p, n, d));
                }
                assert_eq!(canonical_solution(n, d, sign).is_ok(), canonical_integrability(n, d));
            }
        }
    }
}

#[test]
fn degree_limit() {
    let m = QPoly::monomial(q(1), 4) + QPoly::monomial(q(2 * 40 + 2), 1);
    assert_eq!(
        kovacic_solve(&m, 10).unwrap_err(),
        KovacicError::DegreeLimit { d: 40, max_d: 10 }
    );
    let report = kovacic_solve(&m, 64).unwrap();
    assert_eq!(report.candidates[0].d, 40);
    assert!(complete_square(&m).is_ok());
}
