//! The differential polynomial ring ℚ{a, b} and the universal obstructions
//! `Δ_p = −det(φ^{p+1}(Id))`, where
//! `φ(C) = C' + [[−2a, 1], [b − a', 0]]·C`.
//!
//! A [`DiffPoly`] is a [`MultiPoly`] over the interleaved jet variables
//! `a, b, a', b', a'', b'', …`; raising the jet order only appends variables,
//! so promotion is cheap and preserves equality.

use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::exact::{
    parse_multi, q, var_list, Monomial, MultiPoly, ParseError, Rational, Ring, UniPoly, VarList,
};

/// Display name of the `k`-th derivative of `base`.
pub fn jet_name(base: char, k: usize) -> String {
    match k {
        0..=3 => format!("{base}{}", "'".repeat(k)),
        _ => format!("{base}^({k})"),
    }
}

/// Interleaved jet variables up to order `k`, shared per order so that
/// polynomials of equal order compare by pointer.
fn jet_vars(k: usize) -> VarList {
    static CACHE: OnceLock<RwLock<Vec<VarList>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(Vec::new()));
    if let Some(v) = cache.read().unwrap().get(k) {
        return v.clone();
    }
    let mut w = cache.write().unwrap();
    while w.len() <= k {
        let j = w.len();
        let names: Vec<String> = (0..=j)
            .flat_map(|i| [jet_name('a', i), jet_name('b', i)])
            .collect();
        w.push(var_list(&names));
    }
    w[k].clone()
}

#[derive(Clone)]
pub struct DiffPoly {
    poly: MultiPoly,
}

impl DiffPoly {
    fn capacity(&self) -> usize {
        self.poly.vars().len() / 2 - 1
    }

    fn lift(p: MultiPoly) -> Self {
        DiffPoly { poly: p }
    }

    pub fn constant(c: Rational) -> Self {
        Self::lift(MultiPoly::constant_in(&jet_vars(0), c))
    }

    pub fn zero() -> Self {
        Self::constant(q(0))
    }

    /// `a⁽ᵏ⁾`.
    pub fn a(k: usize) -> Self {
        Self::lift(MultiPoly::var(&jet_vars(k), 2 * k))
    }

    /// `b⁽ᵏ⁾`.
    pub fn b(k: usize) -> Self {
        Self::lift(MultiPoly::var(&jet_vars(k), 2 * k + 1))
    }

    /// Underlying polynomial over the interleaved jet variables.
    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    /// Highest derivative order actually occurring (`None` for constants).
    pub fn jet_order(&self) -> Option<usize> {
        self.poly
            .terms()
            .flat_map(|(m, _)| m.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i / 2))
            .max()
    }

    fn promoted(&self, k: usize) -> MultiPoly {
        if self.capacity() >= k {
            self.poly.clone()
        } else {
            self.poly.extend_vars(&jet_vars(k))
        }
    }

    fn binary(&self, other: &Self, f: impl Fn(&MultiPoly, &MultiPoly) -> MultiPoly) -> Self {
        let k = self.capacity().max(other.capacity());
        Self::lift(f(&self.promoted(k), &other.promoted(k)))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.binary(other, MultiPoly::add_poly)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.binary(other, MultiPoly::sub_poly)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.binary(other, MultiPoly::mul_poly)
    }

    pub fn neg(&self) -> Self {
        Self::lift(self.poly.neg_poly())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::lift(self.poly.scale_q(c))
    }

    pub fn is_zero(&self) -> bool {
        self.poly.num_terms() == 0
    }

    pub fn num_terms(&self) -> usize {
        self.poly.num_terms()
    }

    /// Total degree in the jets of `b`.
    pub fn degree_in_b(&self) -> Option<u32> {
        self.poly.degree_in(|i| i % 2 == 1)
    }

    /// Total degree in the jets of `a`.
    pub fn degree_in_a(&self) -> Option<u32> {
        self.poly.degree_in(|i| i % 2 == 0)
    }

    /// Canonical text: fully expanded, graded-lex with jets ordered
    /// `a < a' < … < b < b' < …`, highest terms first.
    pub fn to_text(&self) -> String {
        let k = self.jet_order().unwrap_or(0);
        let names: Vec<String> = (0..=k)
            .rev()
            .map(|i| jet_name('b', i))
            .chain((0..=k).rev().map(|i| jet_name('a', i)))
            .collect();
        self.promoted(k).with_vars(&var_list(&names)).to_text()
    }

    /// Parses text in the jet variables. Derivatives are written with primes
    /// (`a'''`) or as `a^(k)`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut out = String::with_capacity(text.len() * 2);
        let mut origin = Vec::new();
        let mut max_k = 0;
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (pos, c) = chars[i];
            if c == 'a' || c == 'b' {
                i += 1;
                let mut k = 0;
                while i < chars.len() && chars[i].1 == '\'' {
                    k += 1;
                    i += 1;
                }
                if k == 0 && text[chars.get(i).map_or(text.len(), |c| c.0)..].starts_with("^(") {
                    let start = chars[i].0 + 2;
                    let end = text[start..].find(')').map(|e| start + e);
                    match end.and_then(|e| text[start..e].trim().parse::<usize>().ok().map(|k| (e, k))) {
                        Some((e, kk)) => {
                            k = kk;
                            while i < chars.len() && chars[i].0 <= e {
                                i += 1;
                            }
                        }
                        None => {
                            return Err(ParseError {
                                input: text.to_string(),
                                position: chars[i].0,
                                message: "malformed derivative order".into(),
                            })
                        }
                    }
                }
                max_k = max_k.max(k);
                let token = format!(" {c}_d{k} ");
                origin.extend(std::iter::repeat_n(pos, token.len()));
                out.push_str(&token);
            } else {
                let mut buf = [0u8; 4];
                let s = c.encode_utf8(&mut buf);
                origin.extend(std::iter::repeat_n(pos, s.len()));
                out.push_str(s);
                i += 1;
            }
        }
        let internal: Vec<String> = (0..=max_k)
            .flat_map(|k| [format!("a_d{k}"), format!("b_d{k}")])
            .collect();
        let parsed = parse_multi(&out, &internal).map_err(|mut e| {
            e.position = origin.get(e.position).copied().unwrap_or(text.len());
            e.input = text.to_string();
            e
        })?;
        let vars = jet_vars(max_k);
        let terms: Vec<(Monomial, Rational)> =
            parsed.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        Ok(Self::lift(MultiPoly::from_terms(&vars, terms)))
    }

    /// Substitutes `a⁽ʲ⁾ ↦ A⁽ʲ⁾`, `b⁽ʲ⁾ ↦ B⁽ʲ⁾`.
    pub fn evaluate<C: Ring>(&self, a: &UniPoly<C>, b: &UniPoly<C>) -> UniPoly<C> {
        let k = self.capacity();
        let mut point = Vec::with_capacity(2 * k + 2);
        let (mut da, mut db) = (a.clone(), b.clone());
        for _ in 0..=k {
            point.push(da.clone());
            point.push(db.clone());
            da = da.derivative();
            db = db.derivative();
        }
        self.poly.eval_in(&point)
    }
}

impl PartialEq for DiffPoly {
    fn eq(&self, other: &Self) -> bool {
        let k = self.capacity().max(other.capacity());
        self.promoted(k) == other.promoted(k)
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffPoly({})", self.to_text())
    }
}

/// The total derivative: `v⁽ʲ⁾ ↦ v⁽ʲ⁺¹⁾`, extended by the Leibniz rule.
pub fn diff_derive(p: &DiffPoly) -> DiffPoly {
    let k = p.jet_order().unwrap_or(0) + 1;
    let vars = jet_vars(k);
    let width = vars.len();
    let mut terms = Vec::new();
    for (m, c) in p.poly.terms() {
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let mut ex = m.0.clone();
            ex.resize(width, 0);
            ex[i] -= 1;
            ex[i + 2] += 1;
            terms.push((Monomial(ex), c * Rational::from_integer(e.into())));
        }
    }
    DiffPoly::lift(MultiPoly::from_terms(&vars, terms))
}

/// `φ^{p+1}(Id) = [[ℓ_p, ℓ_{p−1}], [r_p, r_{p−1}]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiState {
    pub p: usize,
    pub l: DiffPoly,
    pub l_prev: DiffPoly,
    pub r: DiffPoly,
    pub r_prev: DiffPoly,
}

impl PhiState {
    /// First column of `Id`, i.e. `(ℓ_{−1}, r_{−1}) = (1, 0)`.
    pub fn identity() -> (DiffPoly, DiffPoly) {
        (DiffPoly::constant(q(1)), DiffPoly::zero())
    }

    /// `φ(Id)`.
    pub fn first() -> Self {
        let (one, zero) = Self::identity();
        let (l, r) = phi_column(&one, &zero);
        PhiState {
            p: 0,
            l,
            l_prev: one,
            r,
            r_prev: zero,
        }
    }

    /// `Δ_p = −det = r_p ℓ_{p−1} − ℓ_p r_{p−1}`.
    pub fn delta(&self) -> DiffPoly {
        self.r.mul(&self.l_prev).sub(&self.l.mul(&self.r_prev))
    }
}

/// One application of φ to a column `(ℓ, r)`:
/// `(ℓ' − 2aℓ + r, r' + (b − a')ℓ)`.
fn phi_column(l: &DiffPoly, r: &DiffPoly) -> (DiffPoly, DiffPoly) {
    let two_a = DiffPoly::a(0).scale(&q(2));
    let b_minus_da = DiffPoly::b(0).sub(&DiffPoly::a(1));
    let nl = diff_derive(l).sub(&two_a.mul(l)).add(r);
    let nr = diff_derive(r).add(&b_minus_da.mul(l));
    (nl, nr)
}

/// One application of φ. The second column of the result is the first
/// column of the input.
pub fn phi_step(s: &PhiState) -> PhiState {
    let (l, r) = phi_column(&s.l, &s.r);
    PhiState {
        p: s.p + 1,
        l,
        l_prev: s.l.clone(),
        r,
        r_prev: s.r.clone(),
    }
}

struct Memo {
    columns: Vec<(DiffPoly, DiffPoly)>,
    deltas: Vec<Arc<DiffPoly>>,
}

fn memo() -> &'static RwLock<Memo> {
    static MEMO: OnceLock<RwLock<Memo>> = OnceLock::new();
    MEMO.get_or_init(|| {
        let s = PhiState::first();
        RwLock::new(Memo {
            columns: vec![(s.l.clone(), s.r.clone())],
            deltas: vec![Arc::new(s.delta())],
        })
    })
}

/// The universal obstruction `Δ_p`. Results are cached; computing `Δ_p`
/// also caches `Δ_0 … Δ_{p−1}`.
pub fn delta_universal(p: usize) -> Arc<DiffPoly> {
    if let Some(d) = memo().read().unwrap().deltas.get(p) {
        return d.clone();
    }
    let mut m = memo().write().unwrap();
    while m.deltas.len() <= p {
        let (l, r) = m.columns.last().unwrap().clone();
        let (nl, nr) = phi_column(&l, &r);
        let delta = nr.mul(&l).sub(&nl.mul(&r));
        m.columns.push((nl, nr));
        m.deltas.push(Arc::new(delta));
    }
    m.deltas[p].clone()
}

/// `Δ_p(A, B)`, with every jet replaced by the true derivative.
pub fn delta_evaluate<C: Ring>(p: usize, a: &UniPoly<C>, b: &UniPoly<C>) -> UniPoly<C> {
    delta_universal(p).evaluate(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::QPoly;

    fn dp(s: &str) -> DiffPoly {
        DiffPoly::parse(s).unwrap()
    }

    #[test]
    fn derivation_rules() {
        assert_eq!(diff_derive(&dp("a")), dp("a'"));
        assert_eq!(diff_derive(&dp("a*b")), dp("a'*b + a*b'"));
        assert_eq!(diff_derive(&dp("a'^2")), dp("2*a'*a''"));
        assert_eq!(diff_derive(&dp("7")), DiffPoly::zero());
    }

    #[test]
    fn first_iterates() {
        let s = PhiState::first();
        assert_eq!(s.l, dp("-2a"));
        assert_eq!(s.r, dp("b - a'"));
        assert_eq!(s.l_prev, dp("1"));
        let s2 = phi_step(&s);
        assert_eq!(s2.l_prev, s.l);
        assert_eq!(s2.r_prev, s.r);
        assert_eq!(s2.l, dp("b - 3a' + 4a^2"));
    }

    #[test]
    fn jet_notation_round_trip() {
        let p = dp("a^(4)*b''' - a^(5) + 3");
        assert_eq!(p.jet_order(), Some(5));
        assert_eq!(dp(&p.to_text()), p);
        let e = DiffPoly::parse("a' + c").unwrap_err();
        assert_eq!(e.position, 5);
    }

    #[test]
    fn low_obstructions() {
        assert_eq!(*delta_universal(0), dp("b - a'"));
        assert_eq!(
            *delta_universal(1),
            dp("2a(a''-b') + 4b a' - 3(a')^2 - b^2")
        );
    }

    #[test]
    fn harmonic_values() {
        let x = QPoly::x();
        let b0 = QPoly::constant(q(5));
        // Δ_0(x, b₀) = b₀ − 1, Δ_1(x, b₀) = −(b₀ − 1)(b₀ − 3)
        assert_eq!(delta_evaluate(0, &x, &b0), QPoly::constant(q(4)));
        assert_eq!(delta_evaluate(1, &x, &b0), QPoly::constant(q(-8)));
        assert_eq!(delta_evaluate(1, &x.neg_poly(), &QPoly::constant(q(-3))), QPoly::zero_poly());
    }
}
