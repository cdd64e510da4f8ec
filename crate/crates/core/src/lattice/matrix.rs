use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ext_gcd, LatVec};

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<BigInt>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().cloned().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let v: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        IntMatrix::from_rows(&v)
    }

    /// The `2 x n` matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[LatVec]) -> Self {
        let mut m = IntMatrix::zeros(2, cols.len());
        for (j, v) in cols.iter().enumerate() {
            m[(0, j)] = v.x.clone();
            m[(1, j)] = v.y.clone();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Sub-matrix made of the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                m[(i, jj)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut m = IntMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    m[(i, j)] += a * &o[(k, j)];
                }
            }
        }
        m
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Fraction-free (Bareiss) determinant. The empty matrix has determinant 1.
pub fn bareiss_determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * &a[(n - 1, n - 1)]
}

/// Smith normal form `U * A * V = D` with unimodular `U`, `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries `d1 | d2 | ...`, all positive.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (r, c) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(r);
    let mut u_inv = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut v_inv = IntMatrix::identity(c);

    for t in 0..r.min(c) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return SnfResult {
                    u,
                    v,
                    d,
                    u_inv,
                    v_inv,
                };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            let mut clean = true;
            for i in t + 1..r {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&d[(i, t)] / &d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                u_inv.add_col_multiple(t, i, &-&q);
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&d[(t, j)] / &d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                v_inv.add_row_multiple(t, j, &-&q);
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row and retry
            let p = d[(t, t)].clone();
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !d[(i, j)].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                    u_inv.add_col_multiple(i, t, &-one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
    }
    SnfResult {
        u,
        v,
        d,
        u_inv,
        v_inv,
    }
}

/// Upper-triangular basis `(a, b), (0, c)` of the lattice spanned by
/// `vectors`, with `a, c > 0` and `0 <= b < c`. `None` if the span has rank < 2.
pub fn hermite_row_basis(vectors: &[LatVec]) -> Option<(LatVec, LatVec)> {
    let mut pivot = LatVec::zero();
    let mut ys = BigInt::zero();
    for v in vectors {
        if v.x.is_zero() {
            ys = ys.gcd(&v.y);
            continue;
        }
        if pivot.x.is_zero() {
            pivot = v.clone();
            continue;
        }
        let (g, s, t) = ext_gcd(&pivot.x, &v.x);
        let combined = &pivot.scale(&s) + &v.scale(&t);
        let residue = &pivot.scale(&(&v.x / &g)) - &v.scale(&(&pivot.x / &g));
        debug_assert!(residue.x.is_zero());
        ys = ys.gcd(&residue.y);
        pivot = combined;
    }
    if pivot.x.is_zero() || ys.is_zero() {
        return None;
    }
    if pivot.x.is_negative() {
        pivot = -&pivot;
    }
    let c = ys.abs();
    let b = pivot.y.mod_floor(&c);
    Some((LatVec::new(pivot.x, b), LatVec::new(0, c)))
}

/// Index of the sublattice of `Z^2` spanned by `vectors`, or 0 when the
/// span has rank < 2.
pub fn lattice_span_index(vectors: &[LatVec]) -> BigInt {
    let snf = smith_normal_form(&IntMatrix::from_columns(vectors));
    let f = snf.invariant_factors();
    if f.len() < 2 {
        BigInt::zero()
    } else {
        f.iter().product()
    }
}
