use liouville_core::exact::{parse_multi, q, qf, MultiPoly, QPoly, Rational, UniPoly};
use liouville_core::reduce::{
    arithmetic_condition, complete_square, dalembert, monic_rescale, translate_to_depressed,
    GeneralEquation, ReduceError, Rescaled, Sign,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rat(rng: &mut ChaCha8Rng) -> Rational {
    qf(rng.gen_range(-20..=20), rng.gen_range(1..=20))
}

#[test]
fn completing_the_square_is_unique() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let n = rng.gen_range(1..=6);
        let mut a: Vec<Rational> = (0..n).map(|_| rat(&mut rng)).collect();
        a.push(q(1));
        let b: Vec<Rational> = (0..n).map(|_| rat(&mut rng)).collect();
        let (a, b) = (QPoly::new(a), QPoly::new(b));
        let m = a.clone() * a.clone() + b.clone();
        let dec = complete_square(&m).unwrap();
        assert_eq!((dec.a.clone(), dec.b.clone(), dec.n), (a, b, n));
        assert_eq!(dec.recompose(), m);
    }
}

#[test]
fn completing_the_square_symbolically() {
    let vars = ["m0", "m1", "m2", "m3", "m4", "m5"];
    let v = |s: &str| parse_multi(s, &vars).unwrap();
    let mut coeffs: Vec<MultiPoly> = vars.iter().map(|s| v(s)).collect();
    coeffs.push(v("1"));
    let m = UniPoly::new(coeffs);
    let dec = complete_square(&m).unwrap();
    assert_eq!(dec.n, 3);
    assert_eq!(dec.recompose(), m);
    assert_eq!(dec.a.coeff(2), v("1/2*m5"));
    assert_eq!(dec.a.coeff(1), v("1/2*m4 - 1/8*m5^2"));
    assert!(dec.b.degree().finite().unwrap() < 3);
    assert!(arithmetic_condition(&dec).is_err());
}

#[test]
fn rejections() {
    let p = |s: &str| QPoly::parse(s, "x").unwrap();
    assert_eq!(complete_square(&p("x^5 + 1")), Err(ReduceError::OddDegree(5)));
    assert_eq!(complete_square(&p("2x^4")), Err(ReduceError::NotMonic));
    assert!(matches!(complete_square(&p("x + 1")), Err(ReduceError::DegreeTooSmall(_))));
    assert_eq!(
        monic_rescale(&p("2x^2"), None, false),
        Err(ReduceError::IrrationalRescale)
    );
    assert!(matches!(
        monic_rescale(&p("2x^2"), None, true),
        Ok(Rescaled::Numeric { .. })
    ));
    assert!(matches!(
        monic_rescale(&p("16x^2"), Some(&q(1)), false),
        Err(ReduceError::BadScale { .. })
    ));
    // P = x, Q = x²/4: R has leading coefficient zero
    assert!(matches!(
        dalembert(&GeneralEquation::new(p("x"), p("1/4*x^2"))),
        Err(ReduceError::Degenerate { .. })
    ));
}

#[test]
fn rescale_and_translate() {
    let p = |s: &str| QPoly::parse(s, "x").unwrap();
    match monic_rescale(&p("16x^2 + 4"), None, false).unwrap() {
        Rescaled::Exact { m, scale } => {
            assert_eq!(scale, qf(1, 2));
            assert_eq!(m, p("x^2 + 1"));
        }
        other => panic!("{other:?}"),
    }
    let (m, h) = translate_to_depressed(&p("x^4 + 8x^3 + 5")).unwrap();
    assert_eq!(h, q(2));
    assert_eq!(m.coeff(3), q(0));
    assert_eq!(complete_square(&m).unwrap().a.coeff(1), q(0));
}

#[test]
fn at_most_one_admissible_pair() {
    for n in 1..=4usize {
        for twice in -30i64..=30 {
            let b = qf(twice, 2);
            let dec = complete_square(&(QPoly::monomial(q(1), 2 * n) + QPoly::monomial(b.clone(), n - 1))).unwrap();
            let pairs = arithmetic_condition(&dec).unwrap();
            assert!(pairs.len() <= 1, "n = {n}, b = {b}");
            for (s, d) in pairs {
                assert_eq!(&b * q(s.value()), q((2 * d + n) as i64));
            }
        }
    }
    let dec = complete_square(&QPoly::parse("x^4 - 2x", "x").unwrap()).unwrap();
    assert_eq!(arithmetic_condition(&dec).unwrap(), vec![(Sign::Minus, 0)]);
}
