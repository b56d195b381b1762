use liouville_core::exact::{parse_multi, MultiPoly, Rational};
use liouville_core::reduce::Sign;
use liouville_core::spectral::{
    ideal_equivalence_check, jacobian_rank, sample_points, spectral_ideal, GeneratorStatus,
};

/// `b1 = 2d + 2`.
const QUARTIC: [&str; 7] = [
    "b0",
    "b0^2+4a0",
    "b0^3+16a0b0-16",
    "b0^4+40a0b0^2-96b0+144a0^2",
    "b0^5+80a0b0^3-336b0^2+1024a0^2b0-3072a0",
    "b0^6+140a0b0^4-896b0^3+4144a0^2b0^2-28160a0b0+14400a0^3+25600",
    "b0^7+224a0b0^5-2016b0^4+12544a0^2b0^3-142848a0b0^2+147456a0^3b0+288000b0-884736a0^2",
];

const QUARTIC_D5_FLIPPED: &str =
    "b0^6-140a0b0^4+896b0^3-4144a0^2b0^2+28160a0b0-14400a0^3-25600";

/// Depressed sextic, `b2 = 2d + 3`.
const SEXTIC: [&[&str]; 4] = [
    &["b1", "b0-a1"],
    &[
        "2a1b1-8a0-2b0b1",
        "-6a1-b1^2+2b0",
        "4a1b0-2a0b1-3a1^2-b0^2",
    ],
    &[
        "23a1^2b0-9a1b0^2-14a0a1b1+6a0b0b1-15a1^3-24a1+32a0^2+b0^3-2b1^2+8b0",
        "9a1^2b1-12a1b0b1+6a0b1^2+24a0b0-24a0a1+3b0^2b1-12b1",
        "-3a1b1^2+36a1b0+24a0b1-30a1^2-6b0^2+3b0b1^2-48",
        "22a1b1-32a0+b1^3-6b0b1",
    ],
    &[
        "176a1^3b0-86a1^2b0^2-116a0a1^2b1+16a1b0^3-20a1b1^2+264a1b0+80a0a1b0b1-12a0^2b1^2-144a0^2b0-12a0b0^2b1+120a0b1-105a1^4-372a1^2+432a0^2a1-b0^4-36b0^2+8b0b1^2-288",
        "60a1^3b1-92a1^2b0b1+56a0a1b1^2+192a0a1b0+36a1b0^2b1+96a1b1-48a0b0^2-24a0b0b1^2-288a0^2b1-144a0a1^2+576a0+8b1^3-4b0^3b1",
        "-18a1^2b1^2+372a1^2b0-132a1b0^2+24a1b0b1^2-72a0a1b1-12a0b1^3-72a0b0b1-252a1^3-288a1+12b0^3-6b0^2b1^2+48b1^2+288b0",
        "4a1b1^3-48a0b1^2+136a1^2b1-160a1b0b1+288a0b0-864a0a1-4b0b1^3+24b0^2b1+192b1",
        "-52a1b1^2+144a0b1+120a1b0-252a1^2-b1^4+12b0b1^2-12b0^2-288",
    ],
];

/// `23a1^2b0` → `23*a1^2*b0`.
fn explicit(text: &str) -> String {
    let mut out = String::new();
    let mut prev: Option<char> = None;
    for c in text.chars() {
        if (c == 'a' || c == 'b') && prev.is_some_and(|p| p.is_ascii_digit()) {
            out.push('*');
        }
        out.push(c);
        prev = Some(c);
    }
    out
}

fn parse(text: &str, vars: &[&str]) -> MultiPoly {
    parse_multi(&explicit(text), vars).unwrap()
}

#[test]
fn quartic_rows_match_up_to_scalar() {
    for (d, row) in QUARTIC.iter().enumerate() {
        let ideal = spectral_ideal(2, d, Sign::Plus, true, usize::MAX).unwrap();
        let reference = parse(row, &["a0", "b0"]).with_vars(&ideal.vars);
        assert_eq!(ideal.generators.len(), 1, "d = {d}");
        assert!(reference.scalar_ratio(&ideal.generators[0]).is_some(), "d = {d}: {}", ideal.generators[0].to_text());
    }
}

#[test]
fn sign_flipped_quartic_d5_row_is_not_a_generator() {
    let ideal = spectral_ideal(2, 5, Sign::Plus, true, usize::MAX).unwrap();
    let reference = parse(QUARTIC_D5_FLIPPED, &["a0", "b0"]).with_vars(&ideal.vars);
    assert!(reference.scalar_ratio(&ideal.generators[0]).is_none());
}

#[test]
fn sextic_rows_match_up_to_scalar() {
    let vars = ["a0", "a1", "b0", "b1"];
    for d in 0..=3 {
        let ideal = spectral_ideal(3, d, Sign::Plus, true, usize::MAX).unwrap();
        let reference: Vec<MultiPoly> = SEXTIC[d].iter().map(|r| parse(r, &vars)).collect();
        let report = ideal_equivalence_check(&ideal, &reference, 8, 11);
        assert!(report.all_match(), "d = {d}: {:?}", report.statuses);
        assert!(report
            .statuses
            .iter()
            .all(|s| matches!(s, GeneratorStatus::ScalarMatch { .. })));
    }
}

#[test]
fn quartic_points_have_small_jacobian_rank() {
    // full coordinates a0, a1, b0 allow sampling up to d = 2
    for d in 1..=2 {
        let ideal = spectral_ideal(2, d, Sign::Plus, false, usize::MAX).unwrap();
        for pt in sample_points(&ideal, 5, d as u64).unwrap() {
            assert!(ideal.generators.iter().all(|g| g.eval(&pt) == Rational::from_integer(0.into())));
            assert!(jacobian_rank(&ideal, &pt) <= 2);
        }
    }
}

#[test]
fn sextic_sampled_points_lie_on_reference() {
    let vars = ["a0", "a1", "b0", "b1"];
    for d in 0..=2 {
        let ideal = spectral_ideal(3, d, Sign::Plus, true, usize::MAX).unwrap();
        for pt in sample_points(&ideal, 6, 3 + d as u64).unwrap() {
            for r in SEXTIC[d] {
                assert_eq!(parse(r, &vars).with_vars(&ideal.vars).eval(&pt), Rational::from_integer(0.into()));
            }
            assert!(jacobian_rank(&ideal, &pt) <= 3);
        }
    }
}

