//! Truncated power series `ℓ[t]/t^N` in the monomial basis (`N <= p`).

use crate::arith;
use crate::error::{Error, Result};
use crate::matrix::{self, Matrix};
use crate::quot::{QuotElem, QuotRing};
use crate::ring::{Ring, SeriesAlgebra};

/// A series known modulo `t^prec`; `data` holds `prec` flat coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Series {
    pub(crate) prec: usize,
    pub(crate) data: Vec<u64>,
}

impl Series {
    pub fn prec(&self) -> usize {
        self.prec
    }
}

/// `ℓ[t]/t^N` for `1 <= N <= p`. Above `p` the monomial basis has no
/// integration operator; use [`DpRing`](crate::dp::DpRing) instead.
#[derive(Clone, Debug)]
pub struct SeriesRing {
    ell: QuotRing,
    prec: usize,
    inverses: std::sync::Arc<Vec<u64>>,
}

impl SeriesRing {
    pub fn new(ell: &QuotRing, prec: usize) -> Result<Self> {
        let p = ell.p() as usize;
        if prec == 0 || prec > p {
            return Err(Error::BadPrecision(format!("series precision {prec} outside [1, {p}]")));
        }
        let inverses = ell.field().inverses(p);
        Ok(Self { ell: ell.clone(), prec, inverses: std::sync::Arc::new(inverses) })
    }

    pub fn make(&self, data: Vec<u64>, prec: usize) -> Series {
        debug_assert_eq!(data.len(), prec * self.ell.degree());
        Series { prec, data }
    }

    /// Series from a flat polynomial, truncated or zero-padded to `prec`.
    pub fn from_flat(&self, mut data: Vec<u64>, prec: usize) -> Series {
        data.resize(prec * self.ell.degree(), 0);
        Series { prec, data }
    }

    pub fn data<'a>(&self, a: &'a Series) -> &'a [u64] {
        &a.data
    }

    /// `1/a`, provided the constant term is a unit of `ℓ`.
    pub fn inverse(&self, a: &Series) -> Result<Series> {
        let ell = &self.ell;
        let c0 = ell.inv(&ell.flat_get(&a.data, 0))?;
        let n = a.prec;
        let mut g = self.from_coeffs(&[c0], 1);
        let mut k = 1;
        while k < n {
            let k2 = (2 * k).min(n);
            let ak = self.truncate(a, k2);
            let gk = self.extend(&g, k2);
            let e = self.mul(&ak, &gk);
            let two = self.from_coeffs(&[ell.scalar(2)], k2);
            let corr = self.sub(&two, &e);
            g = self.mul(&gk, &corr);
            k = k2;
        }
        Ok(g)
    }
}

impl Ring for SeriesRing {
    type Elem = Series;

    fn zero(&self) -> Series {
        Series { prec: self.prec, data: vec![0; self.prec * self.ell.degree()] }
    }

    fn one(&self) -> Series {
        self.scalar(&self.ell.one())
    }

    fn add(&self, a: &Series, b: &Series) -> Series {
        let n = a.prec.min(b.prec);
        let mut data = a.data[..n * self.ell.degree()].to_vec();
        self.ell.flat_add_assign(&mut data, &b.data);
        Series { prec: n, data }
    }

    fn sub(&self, a: &Series, b: &Series) -> Series {
        let n = a.prec.min(b.prec);
        let mut data = a.data[..n * self.ell.degree()].to_vec();
        self.ell.flat_sub_assign(&mut data, &b.data);
        Series { prec: n, data }
    }

    fn neg(&self, a: &Series) -> Series {
        let f = self.ell.field();
        Series { prec: a.prec, data: a.data.iter().map(|&x| f.neg(x)).collect() }
    }

    fn mul(&self, a: &Series, b: &Series) -> Series {
        let n = a.prec.min(b.prec);
        Series { prec: n, data: self.ell.poly_mul_trunc(&a.data, &b.data, n) }
    }

    fn is_zero(&self, a: &Series) -> bool {
        a.data.iter().all(|&c| c == 0)
    }

    fn matmul(&self, a: &Matrix<Series>, b: &Matrix<Series>) -> Matrix<Series> {
        let n = a.entries().iter().chain(b.entries()).map(|s| s.prec).min().unwrap_or(self.prec);
        let data = flat_matmul(&self.ell, a.rows(), a.cols(), b.cols(), a.entries(), b.entries(), |s| &s.data, n);
        Matrix::from_vec(a.rows(), b.cols(), data.into_iter().map(|d| Series { prec: n, data: d }).collect())
            .expect("shape")
    }
}

/// Batched product of matrices whose entries are flat polynomials over `ℓ`,
/// truncated to `n` coefficients.
pub(crate) fn flat_matmul<T>(
    ell: &QuotRing,
    rows: usize,
    inner: usize,
    cols: usize,
    a: &[T],
    b: &[T],
    get: impl Fn(&T) -> &[u64],
    n: usize,
) -> Vec<Vec<u64>> {
    let m = ell.degree();
    let stride = if m == 1 { 1 } else { 2 * m - 1 };
    let pa: Vec<Vec<u64>> = a.iter().map(|x| ell.pack(get(x), n)).collect();
    let pb: Vec<Vec<u64>> = b.iter().map(|x| ell.pack(get(x), n)).collect();
    let prod = arith::poly_matrix_mul(ell.p(), rows, inner, cols, &pa, &pb, n * stride);
    prod.iter().map(|v| ell.unpack(v, n)).collect()
}

impl SeriesAlgebra for SeriesRing {
    fn base(&self) -> &QuotRing {
        &self.ell
    }

    fn prec(&self) -> usize {
        self.prec
    }

    fn with_prec(&self, prec: usize) -> Result<Self> {
        if prec == 0 || prec > self.ell.p() as usize {
            return Err(Error::BadPrecision(format!("series precision {prec} outside [1, {}]", self.ell.p())));
        }
        Ok(Self { ell: self.ell.clone(), prec, inverses: self.inverses.clone() })
    }

    fn prec_of(&self, a: &Series) -> usize {
        a.prec
    }

    fn coeff(&self, a: &Series, i: usize) -> QuotElem {
        if i < a.prec {
            self.ell.flat_get(&a.data, i)
        } else {
            self.ell.zero()
        }
    }

    fn from_coeffs(&self, coeffs: &[QuotElem], prec: usize) -> Series {
        let m = self.ell.degree();
        let mut data = vec![0; prec * m];
        for (i, c) in coeffs.iter().take(prec).enumerate() {
            data[i * m..(i + 1) * m].copy_from_slice(c.as_slice());
        }
        Series { prec, data }
    }

    fn mul_scalar(&self, a: &Series, c: &QuotElem) -> Series {
        Series { prec: a.prec, data: self.ell.flat_scale(&a.data, c) }
    }

    fn derive(&self, a: &Series) -> Series {
        let m = self.ell.degree();
        let f = self.ell.field();
        let n = a.prec.saturating_sub(1);
        let mut data = vec![0; n * m];
        for i in 0..n {
            let k = (i + 1) as u64;
            for j in 0..m {
                data[i * m + j] = f.mul(a.data[(i + 1) * m + j], k);
            }
        }
        Series { prec: n, data }
    }

    fn integrate(&self, a: &Series) -> Series {
        let m = self.ell.degree();
        let f = self.ell.field();
        let n = (a.prec + 1).min(self.ell.p() as usize);
        let mut data = vec![0; n * m];
        for i in 1..n {
            let inv = self.inverses[i];
            for j in 0..m {
                data[i * m + j] = f.mul(a.data[(i - 1) * m + j], inv);
            }
        }
        Series { prec: n, data }
    }

    fn truncate(&self, a: &Series, n: usize) -> Series {
        let n = n.min(a.prec);
        Series { prec: n, data: a.data[..n * self.ell.degree()].to_vec() }
    }

    fn extend(&self, a: &Series, n: usize) -> Series {
        let mut data = a.data.clone();
        data.resize(n.max(a.prec) * self.ell.degree(), 0);
        Series { prec: n.max(a.prec), data }
    }
}

/// Constant coefficient matrix `Y(0)`.
pub fn constant_term<R: SeriesAlgebra>(ring: &R, y: &Matrix<R::Elem>) -> Matrix<QuotElem> {
    y.map(|e| ring.coeff(e, 0))
}

/// Inverse of a matrix of series whose constant term is invertible over `ℓ`,
/// by Newton iteration `Z <- Z + Z (I - Y Z)` from `Z = Y(0)^-1`.
pub fn mat_inv_series<R: SeriesAlgebra>(ring: &R, y: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if !y.is_square() {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let n = y.entries().iter().map(|e| ring.prec_of(e)).min().unwrap_or(ring.prec());
    let z0 = matrix::mat_inv_const(ring.base(), &constant_term(ring, y))?;
    let mut z = z0.map(|c| ring.from_coeffs(std::slice::from_ref(c), 1));
    let mut k = 1;
    while k < n {
        let k2 = (2 * k).min(n);
        z = newton_inverse_step(ring, y, &z, k2);
        k = k2;
    }
    Ok(z)
}

/// One step `Z + Z (I - Y Z)` at precision `n`.
pub(crate) fn newton_inverse_step<R: SeriesAlgebra>(
    ring: &R,
    y: &Matrix<R::Elem>,
    z: &Matrix<R::Elem>,
    n: usize,
) -> Matrix<R::Elem> {
    let r = y.rows();
    let yn = y.map(|e| ring.truncate(e, n));
    let zn = z.map(|e| ring.extend(e, n));
    let yz = ring.matmul(&yn, &zn);
    let one = ring.from_coeffs(&[ring.base().one()], n);
    let zero = ring.from_coeffs(&[], n);
    let e = Matrix::from_fn(r, r, |i, j| {
        let id = if i == j { &one } else { &zero };
        ring.sub(id, yz.get(i, j))
    });
    let corr = ring.matmul(&zn, &e);
    Matrix::from_fn(r, r, |i, j| ring.add(zn.get(i, j), corr.get(i, j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{identity, mat_mul};
    use crate::poly::Poly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ell(p: u64, s: &[i64]) -> QuotRing {
        QuotRing::new(Poly::from_i64(p, s)).unwrap()
    }

    fn random_series(ring: &SeriesRing, rng: &mut ChaCha8Rng, prec: usize) -> Series {
        let m = ring.base().degree();
        let p = ring.base().p();
        ring.make((0..prec * m).map(|_| rng.gen_range(0..p)).collect(), prec)
    }

    #[test]
    fn identity_inverse() {
        let sr = SeriesRing::new(&ell(5, &[-1, 1]), 5).unwrap();
        let i3 = identity(&sr, 3);
        assert_eq!(mat_inv_series(&sr, &i3).unwrap(), i3);
    }

    #[test]
    fn nilpotent_geometric_series() {
        let l = ell(5, &[-1, 1]);
        let sr = SeriesRing::new(&l, 3).unwrap();
        let t = sr.from_coeffs(&[l.zero(), l.one()], 3);
        let y = Matrix::from_rows(vec![vec![sr.one(), t.clone()], vec![sr.zero(), sr.one()]]).unwrap();
        let z = mat_inv_series(&sr, &y).unwrap();
        let expected = Matrix::from_rows(vec![vec![sr.one(), sr.neg(&t)], vec![sr.zero(), sr.one()]]).unwrap();
        assert_eq!(z, expected);
    }

    #[test]
    fn random_inverse_both_sides() {
        let l = ell(5, &[-1, 1]);
        let sr = SeriesRing::new(&l, 5).unwrap();
        let dr = crate::dp::DpRing::new(&l, 7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        // ℓ[t]/t^5 and, above p, the divided-power truncation at 7.
        let y = Matrix::from_fn(3, 3, |i, j| {
            let mut s = random_series(&sr, &mut rng, 5);
            s.data[0] = u64::from(i == j);
            s
        });
        let z = mat_inv_series(&sr, &y).unwrap();
        assert_eq!(mat_mul(&sr, &y, &z).unwrap(), identity(&sr, 3));
        assert_eq!(mat_mul(&sr, &z, &y).unwrap(), identity(&sr, 3));

        let yd = Matrix::from_fn(3, 3, |i, j| {
            let mut c: Vec<QuotElem> = (0..7).map(|_| l.scalar(rng.gen_range(0..5))).collect();
            c[0] = l.scalar(u64::from(i == j));
            dr.from_coeffs(&c, 7)
        });
        let zd = mat_inv_series(&dr, &yd).unwrap();
        assert_eq!(mat_mul(&dr, &yd, &zd).unwrap(), identity(&dr, 3));
        assert_eq!(mat_mul(&dr, &zd, &yd).unwrap(), identity(&dr, 3));
    }

    #[test]
    fn batched_product_matches_entrywise() {
        let l = ell(7, &[3, 1, 1]);
        let sr = SeriesRing::new(&l, 7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = Matrix::from_fn(2, 3, |_, _| random_series(&sr, &mut rng, 7));
        let b = Matrix::from_fn(3, 2, |_, _| random_series(&sr, &mut rng, 7));
        assert_eq!(sr.matmul(&a, &b), matrix::classical_mul(&sr, &a, &b));
    }

    #[test]
    fn scalar_inverse() {
        let l = ell(101, &[5, 0, 1]);
        let sr = SeriesRing::new(&l, 90).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut a = random_series(&sr, &mut rng, 90);
        a.data[0] = 1;
        let inv = sr.inverse(&a).unwrap();
        assert_eq!(sr.mul(&a, &inv), sr.one());
    }

    #[test]
    fn derive_and_integrate() {
        let l = ell(7, &[0, 1]);
        let sr = SeriesRing::new(&l, 7).unwrap();
        let c: Vec<QuotElem> = (1..=6).map(|i| l.scalar(i)).collect();
        let f = sr.from_coeffs(&c, 6);
        assert_eq!(sr.derive(&sr.integrate(&f)), f);
        assert_eq!(sr.prec_of(&sr.integrate(&f)), 7);
    }
}
