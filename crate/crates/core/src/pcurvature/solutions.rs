//! Fundamental solutions of local systems and operators.

use crate::error::{Error, Result};
use crate::matrix::{identity, Matrix};
use crate::quot::{QuotElem, QuotRing};
use crate::ring::{Ring, SeriesAlgebra};
use crate::series::newton_inverse_step;
use crate::toolkit::{from_falling_factorial, multipoint_eval};

/// A fundamental matrix `Y` (with `Y(0) = I` and `Y' = A Y`) and its inverse
/// `Z`, both at precision `prec`.
#[derive(Clone, Debug)]
pub struct FundSolutions<E> {
    pub y: Matrix<E>,
    pub z: Matrix<E>,
    pub prec: usize,
}

fn matmul<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    ring.matmul(a, b)
}

/// Solves `Y' = A Y`, `Y(0) = I` to precision `n` by Newton iteration.
///
/// Each round doubles the precision of `Y` using the current inverse
/// approximation `Z`:
/// `Y <- Y - Y ∫ Z (Y' - A Y)`, `Z <- Z + Z (I - Y Z)`.
/// `A` must be known to precision at least `n - 1`.
pub fn fundamental_solutions<R: SeriesAlgebra>(
    ring: &R,
    a: &Matrix<R::Elem>,
    n: usize,
) -> Result<FundSolutions<R::Elem>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("the system matrix must be square".into()));
    }
    if n == 0 {
        return Err(Error::BadPrecision("precision must be positive".into()));
    }
    let known = a.entries().iter().map(|e| ring.prec_of(e)).min().unwrap_or(n);
    if known + 1 < n {
        return Err(Error::BadPrecision(format!("system known to precision {known}, need at least {}", n - 1)));
    }
    let r = a.rows();
    let ell = ring.base();
    let one = ell.one();
    let zero = ell.zero();
    let mut y = Matrix::from_fn(r, r, |i, j| {
        let c0 = if i == j { one.clone() } else { zero.clone() };
        let c1 = if n > 1 { ring.coeff(a.get(i, j), 0) } else { zero.clone() };
        ring.from_coeffs(&[c0, c1], n.min(2))
    });
    let mut z = identity(ell, r).map(|c| ring.from_coeffs(std::slice::from_ref(c), 1));
    let mut m = n.min(2);
    while m < n {
        z = newton_inverse_step(ring, &y, &z, m);
        let m2 = (2 * m).min(n);
        let ym = y.map(|e| ring.extend(e, m2));
        let am = a.map(|e| ring.truncate(e, m2 - 1));
        let ay = matmul(ring, &am, &ym);
        let resid = Matrix::from_fn(r, r, |i, j| ring.sub(&ring.derive(ym.get(i, j)), ay.get(i, j)));
        let zr = matmul(ring, &z.map(|e| ring.extend(e, m2 - 1)), &resid);
        let integ = zr.map(|e| ring.integrate(e));
        let corr = matmul(ring, &ym, &integ);
        y = Matrix::from_fn(r, r, |i, j| ring.sub(ym.get(i, j), corr.get(i, j)));
        m = m2;
    }
    z = newton_inverse_step(ring, &y, &z, n);
    Ok(FundSolutions { y, z, prec: n })
}

/// The `r` Cauchy solutions `f_0, …, f_{r-1}` of `Σ_i a_i ∂^i f = 0`,
/// `f_i^{(j)}(0) = δ_ij`, as γ-coefficient sequences of length `n`.
///
/// `alpha[i][j]` is the γ_j coefficient of `a_i`; all `a_i` are polynomials in
/// the γ basis of degree `d < p`, and `alpha[r][0]` must be a unit of `ℓ`.
/// The coefficients satisfy `ξ_{k+r} = Σ_{m=-d}^{r-1} A_m(k) ξ_{k+m}` where
/// `A_m(k) = -α_{r,0}^{-1} Σ_{i-j=m} α_{i,j} C(k, j)`.
pub fn solutions_operator(ell: &QuotRing, alpha: &[Vec<QuotElem>], n: usize) -> Result<Vec<Vec<QuotElem>>> {
    if alpha.len() < 2 {
        return Err(Error::InvalidInput("operator of order 0".into()));
    }
    let r = alpha.len() - 1;
    let p = ell.p() as usize;
    let d = alpha.iter().map(|c| c.len()).max().unwrap_or(1).saturating_sub(1);
    if d >= p {
        return Err(Error::UnsupportedDegree(format!("coefficient degree {d} is not below p = {p}")));
    }
    if n <= d {
        return Err(Error::BadPrecision(format!("precision {n} must exceed the degree {d}")));
    }
    let lead = alpha[r].first().cloned().unwrap_or_else(|| ell.zero());
    let inv_lead = ell.neg(&ell.inv(&lead)?);
    let ifact = ell.field().inverse_factorials(d + 1);
    let get = |i: usize, j: usize| alpha[i].get(j).cloned().unwrap_or_else(|| ell.zero());

    let npts = n.saturating_sub(r).min(p);
    let points: Vec<QuotElem> = (0..npts as u64).map(|k| ell.scalar(k)).collect();
    // recurrence coefficients, indexed by m + d
    let mut table: Vec<Vec<QuotElem>> = Vec::with_capacity(d + r);
    for m in -(d as i64)..r as i64 {
        let c: Vec<QuotElem> = (0..=d)
            .map(|j| {
                let i = j as i64 + m;
                if i < 0 || i > r as i64 || (i as usize == r && j == 0) {
                    return ell.zero();
                }
                let t = ell.scale(&get(i as usize, j), ifact[j]);
                ell.mul(&t, &inv_lead)
            })
            .collect();
        let poly = from_falling_factorial(ell, &c)?;
        table.push(multipoint_eval(&poly, &points));
    }

    let mut out = Vec::with_capacity(r);
    for i in 0..r {
        let mut xi = vec![ell.zero(); n];
        if i < n {
            xi[i] = ell.one();
        }
        for k in 0..n.saturating_sub(r) {
            let kp = k % p;
            let mut acc = ell.zero();
            for (mi, vals) in table.iter().enumerate() {
                let idx = k as i64 + mi as i64 - d as i64;
                if idx < 0 {
                    continue;
                }
                let x = &xi[idx as usize];
                if x.is_zero() {
                    continue;
                }
                acc = ell.add(&acc, &ell.mul(&vals[kp], x));
            }
            xi[k + r] = acc;
        }
        out.push(xi);
    }
    Ok(out)
}
