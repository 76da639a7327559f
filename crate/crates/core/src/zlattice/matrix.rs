use std::fmt;
use std::ops::{Deref, Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A row vector in `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(Vec<BigInt>);

impl IntVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        IntVector(vec![BigInt::zero(); n])
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        IntVector(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    fn check(&self, other: &IntVector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::dim(format!("vectors of length {} and {}", self.dim(), other.dim())));
        }
        Ok(())
    }

    pub fn add(&self, other: &IntVector) -> Result<IntVector> {
        self.check(other)?;
        Ok(IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &IntVector) -> Result<IntVector> {
        self.check(other)?;
        Ok(IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn neg(&self) -> IntVector {
        IntVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: &BigInt) -> IntVector {
        IntVector(self.0.iter().map(|a| a * c).collect())
    }

    /// Exact division of every entry; `None` if some entry is not divisible.
    pub fn div_exact(&self, c: &BigInt) -> Option<IntVector> {
        if c.is_zero() {
            return None;
        }
        let mut out = Vec::with_capacity(self.dim());
        for a in &self.0 {
            let (q, r) = a.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(IntVector(out))
    }

    /// Entries reduced into `[0, m)`.
    pub fn modulo(&self, m: &BigInt) -> IntVector {
        IntVector(self.0.iter().map(|a| a.mod_floor(m)).collect())
    }

    /// The row vector `self · m`.
    pub fn mul_mat(&self, m: &IntMatrix) -> Result<IntVector> {
        if self.dim() != m.rows() {
            return Err(Error::dim(format!("vector of length {} times {}x{} matrix", self.dim(), m.rows(), m.cols())));
        }
        let mut out = vec![BigInt::zero(); m.cols()];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let e = &m[(i, j)];
                if !e.is_zero() {
                    *o += a * e;
                }
            }
        }
        Ok(IntVector(out))
    }
}

impl Deref for IntVector {
    type Target = [BigInt];

    fn deref(&self) -> &[BigInt] {
        &self.0
    }
}

impl From<Vec<BigInt>> for IntVector {
    fn from(v: Vec<BigInt>) -> Self {
        IntVector(v)
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Dense row-major integer matrix with arbitrary-precision entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds from rows of equal length. An empty row list gives a `0 x 0`
    /// matrix; use [`IntMatrix::from_rows_with_cols`] to fix the width.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(rows, cols)
    }

    pub fn from_rows_with_cols(rows: Vec<Vec<BigInt>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::dim(format!("row {i} has length {}, expected {cols}", r.len())));
            }
            data.extend(r);
        }
        Ok(IntMatrix { rows: n, cols, data })
    }

    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_rows(rows).expect("ragged matrix literal")
    }

    pub fn from_vectors(vs: &[IntVector], cols: usize) -> Result<Self> {
        Self::from_rows_with_cols(vs.iter().map(|v| v.entries().to_vec()).collect(), cols)
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

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> IntVector {
        IntVector(self.row(i).to_vec())
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::dim(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::dim("matrix shapes differ"));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    /// Vertical concatenation.
    pub fn stack(&self, below: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != below.cols {
            return Err(Error::dim("stacked matrices need equal widths"));
        }
        let mut data = self.data.clone();
        data.extend(below.data.iter().cloned());
        Ok(IntMatrix { rows: self.rows + below.rows, cols: self.cols, data })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += c * row[src]`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * c;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// `col[dst] += c * col[src]`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * c;
            self.data[i * self.cols + dst] += v;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::dim(format!("determinant of non-square {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
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
        Ok(sign * &a[(n - 1, n - 1)])
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().map(|d| d.abs().is_one()).unwrap_or(false)
    }

    pub fn require_unimodular(&self) -> Result<()> {
        let d = self.det()?;
        if !d.abs().is_one() {
            return Err(Error::NotUnimodular(d.to_string()));
        }
        Ok(())
    }

    /// Exact inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        self.require_unimodular()?;
        // The HNF of a unimodular matrix is the identity, so U = self⁻¹.
        let h = super::hnf(self);
        debug_assert_eq!(h.h, IntMatrix::identity(self.rows));
        Ok(h.u)
    }

    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero)
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

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "[{}]", rows.join(";"))
    }
}
