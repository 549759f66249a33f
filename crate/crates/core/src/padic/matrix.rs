use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{rat, PAdicContext, RatPolynomial};
use crate::error::{Error, Result};

/// Dense matrix of exact rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &BigRational::one())
    }

    pub fn scalar(n: usize, c: &BigRational) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn diagonal(entries: &[BigRational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Panics on ragged input; meant for literals in code and tests.
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
            .expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<BigRational> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn from_cols(rows: usize, cols: &[Vec<BigRational>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j) * &v[j])
                    .fold(BigRational::zero(), |a, b| a + b)
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sum shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "difference shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, e: usize) -> Matrix {
        assert!(self.is_square(), "power of non-square matrix");
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row count");
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Block diagonal sum.
    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        let mut out = Self::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_p_integral(&self, ctx: &PAdicContext) -> bool {
        self.data.iter().all(|x| ctx.is_p_integral(x))
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, c: &BigRational) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] *= c;
        }
    }

    pub(crate) fn scale_col(&mut self, j: usize, c: &BigRational) {
        for i in 0..self.rows {
            let idx = i * self.cols + j;
            self.data[idx] *= c;
        }
    }

    /// `row_target += f * row_src`.
    pub(crate) fn add_row_multiple(&mut self, target: usize, src: usize, f: &BigRational) {
        if f.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * f;
            self.data[target * self.cols + j] += v;
        }
    }

    /// `col_target += f * col_src`.
    pub(crate) fn add_col_multiple(&mut self, target: usize, src: usize, f: &BigRational) {
        if f.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * f;
            self.data[i * self.cols + target] += v;
        }
    }

    /// Row echelon form over Q, returning the pivot columns.
    fn echelon(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, piv);
            let inv = m.get(row, col).recip();
            m.scale_row(row, &inv);
            for i in 0..m.rows {
                if i != row && !m.get(i, col).is_zero() {
                    let f = -m.get(i, col).clone();
                    m.add_row_multiple(i, row, &f);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// Rank over Q.
    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Determinant by elimination over Q.
    pub fn det(&self) -> BigRational {
        assert!(self.is_square(), "determinant of non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&i| !m.get(i, col).is_zero()) else {
                return BigRational::zero();
            };
            if piv != col {
                m.swap_rows(piv, col);
                det = -det;
            }
            let pv = m.get(col, col).clone();
            det *= &pv;
            for i in col + 1..n {
                if !m.get(i, col).is_zero() {
                    let f = -(m.get(i, col) / &pv);
                    m.add_row_multiple(i, col, &f);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let (ech, pivots) = self.hstack(&Self::identity(n)).echelon();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(ech.submatrix(0, n, n, 2 * n))
    }

    /// `det(t I - A)` by Berkowitz's division-free recursion.
    pub fn charpoly(&self) -> RatPolynomial {
        assert!(self.is_square(), "characteristic polynomial of non-square matrix");
        let n = self.rows;
        // v holds the coefficients of the leading principal minor's
        // characteristic polynomial, highest degree first.
        let mut v = vec![BigRational::one()];
        for k in 0..n {
            let a = self.get(k, k).clone();
            let r: Vec<BigRational> = (0..k).map(|j| self.get(k, j).clone()).collect();
            let mut s: Vec<BigRational> = (0..k).map(|i| self.get(i, k).clone()).collect();
            let lead = self.submatrix(0, k, 0, k);
            // First column of the Toeplitz matrix: 1, -a, -R S, -R A S, ...
            let mut c = Vec::with_capacity(k + 2);
            c.push(BigRational::one());
            c.push(-a);
            for _ in 0..k {
                let rs = r
                    .iter()
                    .zip(&s)
                    .map(|(x, y)| x * y)
                    .fold(BigRational::zero(), |acc, z| acc + z);
                c.push(-rs);
                s = lead.mul_vec(&s);
            }
            let mut next = vec![BigRational::zero(); k + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, vj) in v.iter().enumerate() {
                    if i >= j {
                        *slot += &c[i - j] * vj;
                    }
                }
            }
            v = next;
        }
        v.reverse();
        RatPolynomial::new(v)
    }

    /// `det(1 - t A)`, the reversed characteristic polynomial.
    pub fn det_one_minus_t(&self) -> RatPolynomial {
        let chi = self.charpoly();
        let mut coeffs = chi.coeffs().to_vec();
        coeffs.resize(self.rows + 1, BigRational::zero());
        coeffs.reverse();
        RatPolynomial::new(coeffs)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
