//! Dense integer matrices, row-major. Sized for the small exact kernels the
//! homology pipeline leaves behind after sparse reduction; no attempt is
//! made at cache cleverness.

use super::Coeff;
use num_traits::Zero;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix<C: Coeff> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<C>,
}

impl<C: Coeff> IntMatrix<C> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![C::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = C::one();
        }
        m
    }

    /// Build from nested rows; every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<C>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Convenience for literal fixtures.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| C::from(x)).collect()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn column(&self, c: usize) -> Vec<C> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Self::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let add = a.clone() * rhs[(k, j)].clone();
                    if !add.is_zero() {
                        let cur = out[(i, j)].clone();
                        out[(i, j)] = cur + add;
                    }
                }
            }
        }
        out
    }

    /// Matrix–vector product.
    pub fn apply(&self, v: &[C]) -> Vec<C> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = C::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc = acc + self[(i, j)].clone() * v[j].clone();
                    }
                }
                acc
            })
            .collect()
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hcat(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "dimension mismatch");
        let mut out = Self::zero(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..rhs.cols {
                out[(i, self.cols + j)] = rhs[(i, j)].clone();
            }
        }
        out
    }

    /// Keep the given columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zero(self.rows, cols.len());
        for (jj, &j) in cols.iter().enumerate() {
            for i in 0..self.rows {
                out[(i, jj)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] += f * row[b]
    pub fn add_row_multiple(&mut self, a: usize, b: usize, f: &C) {
        if f.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let add = f.clone() * self[(b, j)].clone();
            if !add.is_zero() {
                let cur = self[(a, j)].clone();
                self[(a, j)] = cur + add;
            }
        }
    }

    /// col[a] += f * col[b]
    pub fn add_col_multiple(&mut self, a: usize, b: usize, f: &C) {
        if f.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let add = f.clone() * self[(i, b)].clone();
            if !add.is_zero() {
                let cur = self[(i, a)].clone();
                self[(i, a)] = cur + add;
            }
        }
    }

    pub fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = self[(a, j)].clone();
            self[(a, j)] = -v;
        }
    }

    pub fn negate_col(&mut self, a: usize) {
        for i in 0..self.rows {
            let v = self[(i, a)].clone();
            self[(i, a)] = -v;
        }
    }
}

impl<C: Coeff> std::ops::Index<(usize, usize)> for IntMatrix<C> {
    type Output = C;
    fn index(&self, (r, c): (usize, usize)) -> &C {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<C: Coeff> std::ops::IndexMut<(usize, usize)> for IntMatrix<C> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}
