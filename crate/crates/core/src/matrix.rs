//! Dense matrices over any [`Ring`].

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::quot::{QuotElem, QuotRing};
use crate::ring::Ring;

/// Below this size in every dimension the classical product is used.
pub const STRASSEN_CUTOFF: usize = 64;

/// A row-major `rows x cols` matrix. Entries carry no ring context; every
/// operation takes the ring explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<T> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Entrywise map, preserving the shape.
    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<U, E>(&self, f: impl FnMut(&T) -> std::result::Result<U, E>) -> std::result::Result<Matrix<U>, E> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<std::result::Result<_, _>>()?,
        })
    }

    pub fn transpose(&self) -> Self
    where
        T: Clone,
    {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Applies `f` to every entry (scalar extension along a ring morphism).
pub fn mat_entrywise<T, U, E>(
    m: &Matrix<T>,
    f: impl FnMut(&T) -> std::result::Result<U, E>,
) -> std::result::Result<Matrix<U>, E> {
    m.try_map(f)
}

pub fn zeros<R: Ring>(ring: &R, rows: usize, cols: usize) -> Matrix<R::Elem> {
    Matrix::from_fn(rows, cols, |_, _| ring.zero())
}

pub fn identity<R: Ring>(ring: &R, n: usize) -> Matrix<R::Elem> {
    Matrix::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
}

fn check_same<T, U>(a: &Matrix<T>, b: &Matrix<U>) -> Result<()> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(Error::DimensionMismatch(format!("{}x{} vs {}x{}", a.rows, a.cols, b.rows, b.cols)));
    }
    Ok(())
}

pub fn mat_add<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    check_same(a, b)?;
    Ok(Matrix { rows: a.rows, cols: a.cols, data: a.data.iter().zip(&b.data).map(|(x, y)| ring.add(x, y)).collect() })
}

pub fn mat_sub<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    check_same(a, b)?;
    Ok(Matrix { rows: a.rows, cols: a.cols, data: a.data.iter().zip(&b.data).map(|(x, y)| ring.sub(x, y)).collect() })
}

pub fn mat_neg<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    a.map(|x| ring.neg(x))
}

pub fn is_zero_matrix<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> bool {
    a.data.iter().all(|x| ring.is_zero(x))
}

/// Matrix product, dispatched to the ring's (possibly batched) kernel.
pub fn mat_mul<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(ring.matmul(a, b))
}

/// Strassen when every dimension reaches [`STRASSEN_CUTOFF`], classical otherwise.
pub fn auto_mul<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    if a.rows.min(a.cols).min(b.cols) >= STRASSEN_CUTOFF {
        strassen_mul(ring, a, b)
    } else {
        classical_mul(ring, a, b)
    }
}

pub fn classical_mul<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    assert_eq!(a.cols, b.rows);
    Matrix::from_fn(a.rows, b.cols, |i, j| {
        let mut acc = ring.zero();
        for k in 0..a.cols {
            let x = &a.data[i * a.cols + k];
            if ring.is_zero(x) {
                continue;
            }
            acc = ring.add(&acc, &ring.mul(x, &b.data[k * b.cols + j]));
        }
        acc
    })
}

fn block<R: Ring>(ring: &R, a: &Matrix<R::Elem>, r0: usize, c0: usize, h: usize, w: usize) -> Matrix<R::Elem> {
    Matrix::from_fn(h, w, |i, j| {
        if r0 + i < a.rows && c0 + j < a.cols {
            a.data[(r0 + i) * a.cols + c0 + j].clone()
        } else {
            ring.zero()
        }
    })
}

fn add_raw<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    Matrix { rows: a.rows, cols: a.cols, data: a.data.iter().zip(&b.data).map(|(x, y)| ring.add(x, y)).collect() }
}

fn sub_raw<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    Matrix { rows: a.rows, cols: a.cols, data: a.data.iter().zip(&b.data).map(|(x, y)| ring.sub(x, y)).collect() }
}

/// Strassen's seven-product recursion, padding odd dimensions with zeros.
pub fn strassen_mul<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    assert_eq!(a.cols, b.rows);
    strassen_rec(ring, a, b, STRASSEN_CUTOFF)
}

fn strassen_rec<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>, cutoff: usize) -> Matrix<R::Elem> {
    let (n, k, m) = (a.rows, a.cols, b.cols);
    if n.min(k).min(m) < cutoff || n.min(k).min(m) < 2 {
        return classical_mul(ring, a, b);
    }
    let (n2, k2, m2) = (n.div_ceil(2), k.div_ceil(2), m.div_ceil(2));
    let a11 = block(ring, a, 0, 0, n2, k2);
    let a12 = block(ring, a, 0, k2, n2, k2);
    let a21 = block(ring, a, n2, 0, n2, k2);
    let a22 = block(ring, a, n2, k2, n2, k2);
    let b11 = block(ring, b, 0, 0, k2, m2);
    let b12 = block(ring, b, 0, m2, k2, m2);
    let b21 = block(ring, b, k2, 0, k2, m2);
    let b22 = block(ring, b, k2, m2, k2, m2);
    let rec = |x: &Matrix<R::Elem>, y: &Matrix<R::Elem>| strassen_rec(ring, x, y, cutoff);
    let m1 = rec(&add_raw(ring, &a11, &a22), &add_raw(ring, &b11, &b22));
    let m2_ = rec(&add_raw(ring, &a21, &a22), &b11);
    let m3 = rec(&a11, &sub_raw(ring, &b12, &b22));
    let m4 = rec(&a22, &sub_raw(ring, &b21, &b11));
    let m5 = rec(&add_raw(ring, &a11, &a12), &b22);
    let m6 = rec(&sub_raw(ring, &a21, &a11), &add_raw(ring, &b11, &b12));
    let m7 = rec(&sub_raw(ring, &a12, &a22), &add_raw(ring, &b21, &b22));
    let c11 = add_raw(ring, &sub_raw(ring, &add_raw(ring, &m1, &m4), &m5), &m7);
    let c12 = add_raw(ring, &m3, &m5);
    let c21 = add_raw(ring, &m2_, &m4);
    let c22 = add_raw(ring, &add_raw(ring, &sub_raw(ring, &m1, &m2_), &m3), &m6);
    Matrix::from_fn(n, m, |i, j| {
        let (bi, bj) = (i / n2, j / m2);
        let (ii, jj) = (i % n2, j % m2);
        let c = match (bi, bj) {
            (0, 0) => &c11,
            (0, _) => &c12,
            (_, 0) => &c21,
            _ => &c22,
        };
        c.data[ii * m2 + jj].clone()
    })
}

/// Inverse of a square matrix over `ℓ` by Gauss–Jordan elimination.
///
/// Pivots must be units of `ℓ`; if a column has nonzero entries but none of
/// them is a unit, the gcd reported by the failed inversion is returned.
pub fn mat_inv_const(ring: &QuotRing, a: &Matrix<QuotElem>) -> Result<Matrix<QuotElem>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let n = a.rows;
    let mut m = a.clone();
    let mut inv = identity(ring, n);
    for col in 0..n {
        let mut pivot = None;
        let mut failure = None;
        for row in col..n {
            let x = &m.data[row * n + col];
            if x.is_zero() {
                continue;
            }
            match ring.inv(x) {
                Ok(v) => {
                    pivot = Some((row, v));
                    break;
                }
                Err(e) => {
                    failure.get_or_insert(e);
                }
            }
        }
        let (row, pinv) = match pivot {
            Some(p) => p,
            None => {
                return Err(failure.unwrap_or_else(|| Error::NotInvertible { gcd: ring.modulus().clone() }));
            }
        };
        if row != col {
            for j in 0..n {
                m.data.swap(row * n + j, col * n + j);
                inv.data.swap(row * n + j, col * n + j);
            }
        }
        for j in 0..n {
            m.data[col * n + j] = ring.mul(&m.data[col * n + j], &pinv);
            inv.data[col * n + j] = ring.mul(&inv.data[col * n + j], &pinv);
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = m.data[r * n + col].clone();
            if factor.is_zero() {
                continue;
            }
            for j in 0..n {
                let t = ring.mul(&factor, &m.data[col * n + j]);
                m.data[r * n + j] = ring.sub(&m.data[r * n + j], &t);
                let t = ring.mul(&factor, &inv.data[col * n + j]);
                inv.data[r * n + j] = ring.sub(&inv.data[r * n + j], &t);
            }
        }
    }
    Ok(inv)
}
