//! Dense exact matrices over a runtime-chosen ring.

use crate::error::{Error, Result};
use crate::ring::{Ring, Scalar};
use num_bigint::BigInt;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    pub ring: Ring,
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> Mat {
        let z = ring.zero();
        Mat {
            ring,
            rows,
            cols,
            data: vec![z; rows * cols],
        }
    }

    pub fn identity(ring: Ring, n: usize) -> Mat {
        let mut m = Mat::zeros(ring.clone(), n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_fn(ring: Ring, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { ring, rows, cols, data }
    }

    pub fn from_int_rows(ring: Ring, rows: &[Vec<i64>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Mat::from_fn(ring.clone(), r, c, |i, j| ring.from_i64(rows[i][j]))
    }

    /// Column-convention permutation matrix: basis vector j maps to basis
    /// vector `perm[j]`.
    pub fn permutation(ring: Ring, perm: &[usize]) -> Mat {
        let n = perm.len();
        let mut m = Mat::zeros(ring.clone(), n, n);
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, ring.one());
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_assign_at(&mut self, i: usize, j: usize, v: &Scalar) {
        let cur = self.get(i, j).clone();
        let ring = self.ring.clone();
        self.set(i, j, ring.add(&cur, v));
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.ring.is_zero(x))
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.ring, other.ring, "ring mismatch in matrix product");
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let ring = self.ring.clone();
        let mut out = Mat::zeros(ring.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if ring.is_zero(b) {
                        continue;
                    }
                    let prod = ring.mul(a, b);
                    out.add_assign_at(i, j, &prod);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        Mat::from_fn(self.ring.clone(), self.rows, self.cols, |i, j| {
            self.ring.add(self.get(i, j), other.get(i, j))
        })
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        Mat::from_fn(self.ring.clone(), self.rows, self.cols, |i, j| {
            self.ring.sub(self.get(i, j), other.get(i, j))
        })
    }

    pub fn neg(&self) -> Mat {
        Mat::from_fn(self.ring.clone(), self.rows, self.cols, |i, j| {
            self.ring.neg(self.get(i, j))
        })
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        Mat::from_fn(self.ring.clone(), self.rows, self.cols, |i, j| {
            self.ring.mul(self.get(i, j), s)
        })
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.ring.clone(), self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[Scalar]) {
        assert_eq!(col.len(), self.rows);
        for (i, v) in col.iter().enumerate() {
            self.set(i, j, v.clone());
        }
    }

    pub fn from_columns(ring: Ring, rows: usize, cols: &[Vec<Scalar>]) -> Mat {
        let mut m = Mat::zeros(ring, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            m.set_column(j, col);
        }
        m
    }

    /// Extract the block with the given row and column index sets.
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Mat {
        Mat::from_fn(self.ring.clone(), row_idx.len(), col_idx.len(), |i, j| {
            self.get(row_idx[i], col_idx[j]).clone()
        })
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        Mat::from_fn(self.ring.clone(), self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        Mat::from_fn(self.ring.clone(), self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                other.get(i - self.rows, j).clone()
            }
        })
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Mat) -> Mat {
        let ring = self.ring.clone();
        Mat::from_fn(
            ring.clone(),
            self.rows + other.rows,
            self.cols + other.cols,
            |i, j| {
                if i < self.rows && j < self.cols {
                    self.get(i, j).clone()
                } else if i >= self.rows && j >= self.cols {
                    other.get(i - self.rows, j - self.cols).clone()
                } else {
                    ring.zero()
                }
            },
        )
    }

    /// Flatten into one column vector, row-major.
    pub fn vectorize(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn lift_to_int(&self) -> Option<Vec<Vec<BigInt>>> {
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                row.push(self.ring.lift(self.get(i, j))?);
            }
            out.push(row);
        }
        Some(out)
    }

    pub fn from_bigint_rows(ring: Ring, rows: &[Vec<BigInt>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Mat::from_fn(ring.clone(), r, c, |i, j| ring.from_bigint(&rows[i][j]))
    }

    /// Reinterpret entries in another ring by lifting through the integers.
    pub fn cast(&self, ring: &Ring) -> Result<Mat> {
        if &self.ring == ring {
            return Ok(self.clone());
        }
        let lifted = self
            .lift_to_int()
            .ok_or_else(|| Error::RingMismatch(self.ring.name(), ring.name()))?;
        Ok(Mat::from_bigint_rows(ring.clone(), &lifted))
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.ring.format_scalar(self.get(i, j)))
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_identity() {
        let z = Ring::Integers;
        let a = Mat::from_int_rows(z.clone(), &[vec![1, 2], vec![3, 4]]);
        let id = Mat::identity(z.clone(), 2);
        assert_eq!(a.mul(&id), a);
        let b = Mat::from_int_rows(z.clone(), &[vec![0, 1], vec![1, 0]]);
        let ab = a.mul(&b);
        assert_eq!(ab, Mat::from_int_rows(z, &[vec![2, 1], vec![4, 3]]));
    }

    #[test]
    fn permutation_columns() {
        let z = Ring::Integers;
        // 0 -> 1, 1 -> 2, 2 -> 0
        let p = Mat::permutation(z.clone(), &[1, 2, 0]);
        let e0 = Mat::from_int_rows(z.clone(), &[vec![1], vec![0], vec![0]]);
        let img = p.mul(&e0);
        assert_eq!(img, Mat::from_int_rows(z, &[vec![0], vec![1], vec![0]]));
    }

    #[test]
    fn transpose_involution() {
        let q = Ring::Rationals;
        let a = Mat::from_int_rows(q, &[vec![1, 2, 3], vec![4, 5, 6]]);
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn direct_sum_shapes() {
        let f = Ring::PrimeField(3);
        let a = Mat::identity(f.clone(), 2);
        let b = Mat::zeros(f, 1, 3);
        let s = a.direct_sum(&b);
        assert_eq!((s.rows, s.cols), (3, 5));
    }
}
