use liouville_core::diffalg::{diff_derive, DiffPoly};
use liouville_core::exact::{
    det_exact, null_space_exact, parse_multi, parse_qpoly, q, qf, rank_exact, Matrix, MultiPoly,
    QPoly, Rational, Ring,
};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| qf(n, d))
}

fn qpoly() -> impl Strategy<Value = QPoly> {
    prop::collection::vec(rat(), 0..6).prop_map(QPoly::new)
}

fn matrix(n: usize, m: usize) -> impl Strategy<Value = Matrix<Rational>> {
    prop::collection::vec(prop::collection::vec((-3i64..=3).prop_map(q), m), n)
        .prop_map(Matrix::from_rows)
}

fn cofactor_det(m: &Matrix<Rational>) -> Rational {
    let n = m.rows();
    if n == 0 {
        return q(1);
    }
    let mut acc = q(0);
    for c in 0..n {
        let minor = Matrix::from_rows(
            (1..n)
                .map(|r| (0..n).filter(|&k| k != c).map(|k| m.get(r, k).clone()).collect())
                .collect(),
        );
        let term = m.get(0, c) * cofactor_det(&minor);
        acc = if c % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

fn diffpoly() -> impl Strategy<Value = DiffPoly> {
    let atom = (0usize..3, any::<bool>(), -3i64..=3).prop_map(|(k, is_a, c)| {
        let v = if is_a { DiffPoly::a(k) } else { DiffPoly::b(k) };
        v.scale(&q(c))
    });
    prop::collection::vec((atom.clone(), atom), 1..4).prop_map(|terms| {
        terms
            .into_iter()
            .fold(DiffPoly::constant(q(1)), |acc, (x, y)| acc.add(&x.mul(&y)))
    })
}

proptest! {
    #[test]
    fn ring_axioms(a in qpoly(), b in qpoly(), c in qpoly()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.sub(&a), QPoly::zero_poly());
        prop_assert_eq!(a.mul(&QPoly::one()), a.clone());
    }

    #[test]
    fn division_identity(a in qpoly(), b in qpoly()) {
        prop_assume!(!b.is_zero());
        let (quo, rem) = a.div_rem(&b).unwrap();
        prop_assert_eq!(quo.mul(&b).add(&rem), a);
        prop_assert!(rem.degree() < b.degree());
    }

    #[test]
    fn qpoly_text_round_trip(a in qpoly()) {
        prop_assert_eq!(parse_qpoly(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn multipoly_text_round_trip(cs in prop::collection::vec((rat(), 0u32..3, 0u32..3), 0..5)) {
        let vars = ["u", "v"];
        let p = cs.iter().fold(MultiPoly::zero_in(&liouville_core::exact::var_list(&vars)), |acc, (c, i, j)| {
            let m = parse_multi(&format!("u^{i}*v^{j}"), &vars).unwrap().scale_q(c);
            acc.add_poly(&m)
        });
        prop_assert_eq!(parse_multi(&p.to_text(), &vars).unwrap(), p.clone());
        prop_assert_eq!(MultiPoly::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn leibniz(p in diffpoly(), r in diffpoly()) {
        let lhs = diff_derive(&p.mul(&r));
        let rhs = diff_derive(&p).mul(&r).add(&p.mul(&diff_derive(&r)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn diffpoly_text_round_trip(p in diffpoly()) {
        prop_assert_eq!(DiffPoly::parse(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn det_matches_cofactor(n in 1usize..=6, seed in prop::collection::vec(-3i64..=3, 36)) {
        let m = Matrix::from_rows(
            (0..n).map(|r| (0..n).map(|c| q(seed[r * 6 + c])).collect()).collect(),
        );
        prop_assert_eq!(det_exact(&m).unwrap(), cofactor_det(&m));
    }

    #[test]
    fn kernel_dimension(m in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| matrix(r, c))) {
        let ker = null_space_exact(&m);
        prop_assert_eq!(ker.len(), m.cols() - rank_exact(&m));
        for v in &ker {
            prop_assert!(m.mul_vec(v).iter().all(Ring::is_zero));
        }
    }
}
