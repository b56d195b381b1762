use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use super::ring::{ExactDiv, Field, Ring};
use super::{ExactError, Rational};

/// Dense row-major matrix over a coefficient ring.
#[derive(Clone, PartialEq)]
pub struct Matrix<C> {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl<C: Ring> fmt::Debug for Matrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<C: Ring> Matrix<C> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![C::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &C {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: C) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[C] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Submatrix with the given rows and all columns.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_rows(rows.iter().map(|&r| self.row(r).to_vec()).collect())
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> Matrix<D> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[C]) -> Vec<C> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(C::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    /// Number of consecutive diagonals spanned by the nonzero entries.
    pub fn bandwidth(&self) -> usize {
        let mut lo = isize::MAX;
        let mut hi = isize::MIN;
        for r in 0..self.rows {
            for c in 0..self.cols {
                if !self.get(r, c).is_zero() {
                    let k = c as isize - r as isize;
                    lo = lo.min(k);
                    hi = hi.max(k);
                }
            }
        }
        if lo > hi {
            0
        } else {
            (hi - lo + 1) as usize
        }
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
///
/// Pivots are chosen among the nonzero entries of the current column with the
/// smallest [`ExactDiv::pivot_weight`] (lowest degree for polynomial entries).
pub fn det_exact<C: ExactDiv>(m: &Matrix<C>) -> Result<C, ExactError> {
    if m.rows != m.cols {
        return Err(ExactError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(C::one());
    }
    let mut a: Vec<Vec<C>> = (0..n).map(|r| m.row(r).to_vec()).collect();
    let mut negate = false;
    let mut prev = C::one();
    for k in 0..n {
        let pivot = (k..n)
            .filter(|&r| !a[r][k].is_zero())
            .min_by_key(|&r| a[r][k].pivot_weight());
        let Some(p) = pivot else {
            return Ok(C::zero());
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num
                    .exact_div(&prev)
                    .expect("Bareiss division is exact in an integral domain");
            }
            a[i][k] = C::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { d.neg() } else { d })
}

/// Right-kernel basis of a rational matrix, computed by fraction-free
/// elimination on the integer-scaled rows. Empty iff the kernel is trivial.
///
/// Each basis vector has a 1 in one free column and zeros in the other free
/// columns.
pub fn null_space_exact(m: &Matrix<Rational>) -> Vec<Vec<Rational>> {
    let (pivots, ech) = integer_echelon(m);
    let cols = m.cols;
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![Rational::zero(); cols];
        v[f] = Rational::one();
        for (i, &pc) in pivots.iter().enumerate().rev() {
            let row = &ech[i];
            let mut s = Rational::zero();
            for c in pc + 1..cols {
                if !num_traits::Zero::is_zero(&row[c]) && !Ring::is_zero(&v[c]) {
                    s += Rational::from_integer(row[c].clone()) * &v[c];
                }
            }
            v[pc] = -s / Rational::from_integer(row[pc].clone());
        }
        basis.push(v);
    }
    basis
}

/// Rank of a rational matrix.
pub fn rank_exact(m: &Matrix<Rational>) -> usize {
    integer_echelon(m).0.len()
}

/// Row echelon form over ℤ (fraction-free). Returns pivot columns and the
/// nonzero echelon rows.
fn integer_echelon(m: &Matrix<Rational>) -> (Vec<usize>, Vec<Vec<BigInt>>) {
    let mut rows: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|r| {
            let row = m.row(r);
            let lcm = row
                .iter()
                .fold(<BigInt as num_traits::One>::one(), |acc, q| acc.lcm(q.denom()));
            row.iter()
                .map(|q| (q * Rational::from_integer(lcm.clone())).to_integer())
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut prev = <BigInt as num_traits::One>::one();
    let mut r = 0;
    for c in 0..m.cols {
        if r == rows.len() {
            break;
        }
        let pivot = (r..rows.len())
            .filter(|&i| !num_traits::Zero::is_zero(&rows[i][c]))
            .min_by_key(|&i| rows[i][c].bits());
        let Some(p) = pivot else { continue };
        rows.swap(p, r);
        for i in r + 1..rows.len() {
            for j in c + 1..m.cols {
                let num = &rows[i][j] * &rows[r][c] - &rows[i][c] * &rows[r][j];
                rows[i][j] = num / &prev;
            }
            rows[i][c] = <BigInt as num_traits::Zero>::zero();
        }
        prev = rows[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    // Remove common content per row to keep back-substitution small.
    for row in &mut rows {
        let g = row.iter().fold(<BigInt as num_traits::Zero>::zero(), |g, x| g.gcd(x));
        if !num_traits::Zero::is_zero(&g) && !num_traits::One::is_one(&g) {
            for x in row.iter_mut() {
                *x = &*x / &g;
            }
        }
        if row.iter().find(|x| !num_traits::Zero::is_zero(*x)).is_some_and(|x| x.is_negative()) {
            for x in row.iter_mut() {
                *x = -&*x;
            }
        }
    }
    (pivots, rows)
}

/// Right-kernel basis over an arbitrary field by Gauss–Jordan elimination.
pub fn kernel_over_field<F: Field>(m: &Matrix<F>) -> Vec<Vec<F>> {
    let mut a: Vec<Vec<F>> = (0..m.rows).map(|r| m.row(r).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].inv().expect("nonzero pivot");
        for j in c..m.cols {
            a[r][j] = a[r][j].mul(&inv);
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..m.cols {
                    let t = a[r][j].mul(&f);
                    a[i][j] = a[i][j].sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); m.cols];
            v[f] = F::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = a[i][f].neg();
            }
            v
        })
        .collect()
}
