//! Local p-curvature modulo `S^p` through the isomorphism
//! `F_p[x]/S^p ≅ ℓ[t]/t^p`, `x ↦ t + a`, where `ℓ = F_p[x]/S` and `a` is the
//! class of `x`.

use crate::diff::{DiffOperator, DiffSystem};
use crate::dp::{DpRing, DpSeries};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::{mat_inv_const, Matrix};
use crate::pcurvature::solutions::{fundamental_solutions, solutions_operator};
use crate::poly::Poly;
use crate::quot::{QuotElem, QuotRing, RingPoly};
use crate::ring::{Ring, SeriesAlgebra};
use crate::series::{mat_inv_series, Series, SeriesRing};
use crate::toolkit::{frobenius_power, taylor_shift};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Shape {
    Generic,
    /// `S = x^m - c` with `p ∤ m`; `ζ_0 = c^q x^n` where `p n + q m = 1`.
    Cyclotomic {
        c: u64,
        n: u64,
        q: i64,
    },
}

/// Everything needed to move between `F_p[x]/S^p` and `ℓ[t]/t^p`.
#[derive(Clone, Debug)]
pub struct LocalContext {
    s: Poly,
    ell: QuotRing,
    a: QuotElem,
    nu: Poly,
    zeta0: Poly,
    /// `ζ_0^e mod S` for `e < m`.
    zeta_powers: Vec<Poly>,
    shape: Shape,
}

impl LocalContext {
    pub fn modulus(&self) -> &Poly {
        &self.s
    }

    /// `m = deg S`.
    pub fn degree(&self) -> usize {
        self.ell.degree()
    }

    pub fn ring(&self) -> &QuotRing {
        &self.ell
    }

    /// The class of `x` in `ℓ`.
    pub fn point(&self) -> &QuotElem {
        &self.a
    }

    /// `ν = x^p mod S`.
    pub fn nu(&self) -> &Poly {
        &self.nu
    }

    /// The polynomial of degree `< m` with `ζ_0(ν) ≡ x mod S`.
    pub fn zeta0(&self) -> &Poly {
        &self.zeta0
    }

    /// `T` with `T(x^p) = S(x)^p`; over `F_p` this is `S` itself.
    pub fn t(&self) -> &Poly {
        &self.s
    }

    pub fn p(&self) -> u64 {
        self.s.modulus()
    }

    pub fn is_cyclotomic(&self) -> bool {
        matches!(self.shape, Shape::Cyclotomic { .. })
    }

    fn series_ring(&self) -> SeriesRing {
        SeriesRing::new(&self.ell, self.p() as usize).expect("p is a valid precision")
    }
}

fn check_modulus(s: &Poly, f_a: &Poly) -> Result<()> {
    if s.degree().unwrap_or(0) == 0 || !s.is_monic() {
        return Err(Error::InvalidModulus(format!("{s} must be monic and nonconstant")));
    }
    if !s.gcd(&s.derivative()).is_one() {
        return Err(Error::InvalidModulus(format!("{s} is not separable")));
    }
    if !s.gcd(f_a).is_one() {
        return Err(Error::InvalidModulus(format!("{s} shares a factor with the denominator")));
    }
    Ok(())
}

fn zeta_powers(zeta0: &Poly, s: &Poly, m: usize) -> Vec<Poly> {
    let mut out = Vec::with_capacity(m);
    let mut cur = Poly::one(s.modulus());
    for _ in 0..m {
        out.push(cur.clone());
        cur = (&cur * zeta0).rem(s);
    }
    out
}

/// Solves `Σ_k z_k v_k = rhs` over `F_p`, the `v_k` given as columns.
fn solve_fp(f: PrimeField, cols: &[Vec<u64>], rhs: &[u64]) -> Option<Vec<u64>> {
    let n = rhs.len();
    let mut a: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut row: Vec<u64> = cols.iter().map(|c| c.get(i).copied().unwrap_or(0)).collect();
            row.push(rhs[i]);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| a[i][col] != 0)?;
        a.swap(col, piv);
        let inv = f.inv(a[col][col]);
        for v in &mut a[col] {
            *v = f.mul(*v, inv);
        }
        for i in 0..n {
            if i != col && a[i][col] != 0 {
                let c = a[i][col];
                for j in col..=n {
                    a[i][j] = f.sub(a[i][j], f.mul(c, a[col][j]));
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n]).collect())
}

/// Context for a monic separable `S` coprime to `f_A`; `ζ_0` comes from an
/// `m x m` linear solve in the basis `1, ν, …, ν^{m-1}`.
pub fn build_local_context(s: &Poly, f_a: &Poly) -> Result<LocalContext> {
    check_modulus(s, f_a)?;
    let p = s.modulus();
    let m = s.len() - 1;
    let ell = QuotRing::new(s.clone())?;
    let nu = frobenius_power(s);
    let mut cols = Vec::with_capacity(m);
    let mut cur = Poly::one(p);
    for _ in 0..m {
        cols.push(cur.coeffs().to_vec());
        cur = (&cur * &nu).rem(s);
    }
    let x = Poly::x(p).rem(s);
    let mut rhs = x.coeffs().to_vec();
    rhs.resize(m, 0);
    let z = solve_fp(s.field(), &cols, &rhs)
        .ok_or_else(|| Error::Internal(format!("Frobenius is singular modulo the separable {s}")))?;
    let zeta0 = Poly::from_coeffs(p, z);
    Ok(LocalContext {
        a: ell.gen(),
        zeta_powers: zeta_powers(&zeta0, s, m),
        s: s.clone(),
        ell,
        nu,
        zeta0,
        shape: Shape::Generic,
    })
}

/// Context for `S = x^m - c` (`p ∤ m`, `c ≠ 0`), where `ζ_0` is explicit.
pub fn build_cyclotomic_context(m: usize, c: u64, f_a: &Poly) -> Result<LocalContext> {
    let p = f_a.modulus();
    let f = PrimeField::new(p)?;
    let c = c % p;
    if m == 0 || (m as u64).is_multiple_of(p) {
        return Err(Error::UnsupportedDegree(format!("x^{m} - c needs p = {p} not dividing m")));
    }
    if c == 0 {
        return Err(Error::InvalidModulus("x^m - c needs c ≠ 0".into()));
    }
    let s = &Poly::monomial(p, 1, m) - &Poly::constant(p, c);
    check_modulus(&s, f_a)?;
    let (n, q) = bezout(p, m as u64);
    // ζ_0 = c^q x^n
    let cq = if q >= 0 { f.pow(c, q as u64) } else { f.inv(f.pow(c, q.unsigned_abs())) };
    let zeta0 = Poly::monomial(p, cq, n as usize);
    let ell = QuotRing::new(s.clone())?;
    Ok(LocalContext {
        a: ell.gen(),
        zeta_powers: zeta_powers(&zeta0, &s, m),
        nu: frobenius_power(&s),
        s,
        ell,
        zeta0,
        shape: Shape::Cyclotomic { c, n, q },
    })
}

/// `(n, q)` with `p n + q m = 1` and `0 <= n < m`.
fn bezout(p: u64, m: u64) -> (u64, i64) {
    if m == 1 {
        return (0, 1);
    }
    let n = (1..m).find(|&n| (p % m) * n % m == 1).expect("p is invertible mod m");
    let q = (1 - (p as i128) * (n as i128)) / m as i128;
    (n, q as i64)
}

/// `f(t + a) mod t^p`, after reducing `f` modulo `S^p`.
pub fn phi_s(f: &Poly, ctx: &LocalContext) -> Series {
    let p = ctx.p() as usize;
    let sp = ctx.s.inflate(p);
    let f = if f.len() > sp.len() - 1 { f.rem(&sp) } else { f.clone() };
    let sr = ctx.series_ring();
    let shifted = taylor_shift(&RingPoly::from_fp(&ctx.ell, &f), &ctx.a, p);
    sr.from_flat(shifted.into_flat(), p)
}

pub fn phi_s_matrix(m: &Matrix<Poly>, ctx: &LocalContext) -> Matrix<Series> {
    m.map(|f| phi_s(f, ctx))
}

/// Un-shifts `g` by `-a`: the coefficients `h_i ∈ ℓ` of `g(t - a)`.
fn unshift(g: &Series, ctx: &LocalContext) -> RingPoly {
    let p = ctx.p() as usize;
    let sr = ctx.series_ring();
    let g = RingPoly::from_flat(&ctx.ell, sr.extend(g, p).data.clone());
    taylor_shift(&g, &ctx.ell.neg(&ctx.a), p)
}

/// Assembles `Σ_i c_i(x^p) x^i` from the strands `c_i` (each of length `m`).
fn assemble(strands: &[Vec<u64>], p: usize, m: usize, modulus: u64) -> Poly {
    let mut out = vec![0u64; p * m];
    for (i, c) in strands.iter().enumerate() {
        for (k, &v) in c.iter().enumerate() {
            out[i + p * k] = v;
        }
    }
    Poly::from_coeffs(modulus, out)
}

/// The preimage in `F_p[x]/S^p` (degree `< m p`) of `g ∈ ℓ[t]/t^p`:
/// `Σ_i (h_i(ζ_0) mod S)(x^p) x^i` where `h(t) = g(t - a)`.
pub fn phi_s_inverse(g: &Series, ctx: &LocalContext) -> Poly {
    let p = ctx.p() as usize;
    let m = ctx.degree();
    let fld = ctx.ell.field();
    let h = unshift(g, ctx);
    let mut strands = Vec::with_capacity(p);
    for i in 0..p {
        let hi = h.coeff(i);
        let mut c = vec![0u64; m];
        for (e, &he) in hi.as_slice().iter().enumerate() {
            if he == 0 {
                continue;
            }
            for (k, &z) in ctx.zeta_powers[e].coeffs().iter().enumerate() {
                c[k] = fld.add(c[k], fld.mul(he, z));
            }
        }
        strands.push(c);
    }
    assemble(&strands, p, m, ctx.p())
}

/// Same contract as [`phi_s_inverse`] for `S = x^m - c`, where
/// `ζ_0^e = c^{q e + ⌊n e / m⌋} x^{n e mod m}` is a scaled monomial.
pub fn cyclotomic_phi_inverse(g: &Series, ctx: &LocalContext) -> Result<Poly> {
    let Shape::Cyclotomic { c, n, q } = ctx.shape else {
        return Err(Error::UnsupportedDegree("modulus is not of the form x^m - c".into()));
    };
    let p = ctx.p() as usize;
    let m = ctx.degree();
    let fld = ctx.ell.field();
    let cinv = fld.inv(c);
    let cq = if q >= 0 { fld.pow(c, q as u64) } else { fld.pow(cinv, q.unsigned_abs()) };
    let table: Vec<(usize, u64)> = (0..m as u64)
        .map(|e| {
            let ne = n * e;
            let scale = fld.mul(fld.pow(cq, e), fld.pow(c, ne / m as u64));
            ((ne % m as u64) as usize, scale)
        })
        .collect();
    let h = unshift(g, ctx);
    let mut strands = Vec::with_capacity(p);
    for i in 0..p {
        let hi = h.coeff(i);
        let mut out = vec![0u64; m];
        for (e, &he) in hi.as_slice().iter().enumerate() {
            let (k, s) = table[e];
            out[k] = fld.add(out[k], fld.mul(he, s));
        }
        strands.push(out);
    }
    Ok(assemble(&strands, p, m, ctx.p()))
}

fn inverse_for(ctx: &LocalContext, g: &Series) -> Poly {
    if ctx.is_cyclotomic() {
        cyclotomic_phi_inverse(g, ctx).expect("cyclotomic context")
    } else {
        phi_s_inverse(g, ctx)
    }
}

/// `φ_S(A) = φ_S(Ã) φ_S(f_A)^{-1}` in `ℓ[t]/t^p`.
pub fn local_system(ctx: &LocalContext, sys: &DiffSystem) -> Result<Matrix<Series>> {
    let sr = ctx.series_ring();
    let inv = sr.inverse(&phi_s(sys.denominator(), ctx))?;
    let num = phi_s_matrix(sys.numerator(), ctx);
    Ok(num.map(|e| sr.mul(e, &inv)))
}

/// `ψ_S(A)` in `ℓ[[t]]^dp` at precision `prec`: the image of the numerator
/// under `ε`, times the divided-power inverse of the image of `f_A`.
pub fn local_system_dp(ctx: &LocalContext, sys: &DiffSystem, prec: usize) -> Result<Matrix<DpSeries>> {
    let dr = DpRing::new(&ctx.ell, prec)?;
    let embed = |f: &Poly| {
        let s = phi_s(f, ctx);
        dr.embed(&RingPoly::from_flat(&ctx.ell, s.data.clone()), prec)
    };
    let den = Matrix::from_fn(1, 1, |_, _| embed(sys.denominator()));
    let inv = mat_inv_series(&dr, &den)?;
    let inv = inv.get(0, 0).clone();
    Ok(sys.numerator().map(|f| dr.mul(&embed(f), &inv)))
}

/// Intermediate data of the local computation.
#[derive(Clone, Debug)]
pub struct LocalData {
    /// `φ_S(A)` at precision `p`.
    pub a: Matrix<Series>,
    /// `Ȳ_S`, the fundamental matrix at precision `p`.
    pub y: Matrix<Series>,
    /// `Ȳ_S^{-1}`.
    pub z: Matrix<Series>,
    /// `Coeff(A Ȳ_S, p - 1)`, a constant matrix over `ℓ`.
    pub middle: Matrix<QuotElem>,
    /// `ψ_S(A_p) = Ȳ_S · middle · Ȳ_S^{-1}`.
    pub ap: Matrix<Series>,
}

/// `Coeff(A Y, k)` for matrices of series.
pub fn coeff_of_product(ell: &QuotRing, a: &Matrix<Series>, y: &Matrix<Series>, k: usize) -> Matrix<QuotElem> {
    let m = ell.degree();
    let r = a.rows();
    let c = y.cols();
    let fld = ell.field();
    Matrix::from_fn(r, c, |i, j| {
        let mut acc = ell.zero();
        let mut tmp = vec![0u64; m];
        for l in 0..a.cols() {
            let x = &a.get(i, l).data;
            let z = &y.get(l, j).data;
            if m == 1 {
                let mut s = 0u64;
                for t in 0..=k {
                    s = (s + x[t] * z[k - t]) % fld.p();
                }
                acc.0[0] = fld.add(acc.0[0], s);
            } else {
                for t in 0..=k {
                    ell.mul_into(&x[t * m..(t + 1) * m], &z[(k - t) * m..(k - t + 1) * m], &mut tmp);
                    ell.flat_add_assign(&mut acc.0, &tmp);
                }
            }
        }
        acc
    })
}

/// Series matrix times a constant matrix over `ℓ`.
pub fn mul_by_constant(ell: &QuotRing, y: &Matrix<Series>, c: &Matrix<QuotElem>) -> Matrix<Series> {
    let prec = y.entries().first().map_or(0, |e| e.prec);
    Matrix::from_fn(y.rows(), c.cols(), |i, j| {
        let mut data = vec![0u64; prec * ell.degree()];
        for l in 0..y.cols() {
            let s = ell.flat_scale(&y.get(i, l).data, c.get(l, j));
            ell.flat_add_assign(&mut data, &s);
        }
        Series { prec, data }
    })
}

/// All intermediate matrices for `ψ_S(A_p) = Ȳ Coeff(A Ȳ, p-1) Ȳ^{-1}`.
pub fn local_data(ctx: &LocalContext, sys: &DiffSystem) -> Result<LocalData> {
    let p = ctx.p() as usize;
    let sr = ctx.series_ring();
    let a = local_system(ctx, sys)?;
    let fs = fundamental_solutions(&sr, &a, p)?;
    let middle = coeff_of_product(&ctx.ell, &a, &fs.y, p - 1);
    let ym = mul_by_constant(&ctx.ell, &fs.y, &middle);
    let ap = sr.matmul(&ym, &fs.z);
    Ok(LocalData { a, y: fs.y, z: fs.z, middle, ap })
}

/// `A_p mod S^p`, each entry of degree `< m p`.
pub fn local_p_curvature(ctx: &LocalContext, sys: &DiffSystem) -> Result<Matrix<Poly>> {
    let data = local_data(ctx, sys)?;
    Ok(data.ap.map(|g| inverse_for(ctx, g)))
}

/// The γ-coefficients `α_{i,j} = j! [t^j] a_i(t + a)` of the localized operator.
pub fn localize_operator(ctx: &LocalContext, op: &DiffOperator) -> Vec<Vec<QuotElem>> {
    let d = op.degree();
    let fact = ctx.ell.field().factorials((d + 1).min(ctx.p() as usize));
    op.coeffs()
        .iter()
        .map(|a| {
            let sh = taylor_shift(&RingPoly::from_fp(&ctx.ell, a), &ctx.a, d + 1);
            (0..=d).map(|j| ctx.ell.scale(&sh.coeff(j), fact.get(j).copied().unwrap_or(0))).collect()
        })
        .collect()
}

/// First column of `A_p mod S^p` for an operator with `d < p`.
///
/// With `X̄` the Wronskian-type matrix `X̄[k][j] = f_j^{(k)} mod t^p` and
/// `P[k][j] = f_j^{(p+k)}(0)`, the first column of `ψ_S(A_p)` is the row
/// `X̄[0] · P · X̄^{-1}`, transposed.
pub fn local_operator_first_column(ctx: &LocalContext, op: &DiffOperator) -> Result<Vec<Poly>> {
    let p = ctx.p() as usize;
    let r = op.order();
    let ell = &ctx.ell;
    let alpha = localize_operator(ctx, op);
    let sols = solutions_operator(ell, &alpha, p + r)?;
    let sr = ctx.series_ring();
    let ifact = ell.field().inverse_factorials(p);
    let xbar = Matrix::from_fn(r, r, |k, j| {
        let c: Vec<QuotElem> = (0..p).map(|n| ell.scale(&sols[j][n + k], ifact[n])).collect();
        sr.from_coeffs(&c, p)
    });
    let pm = Matrix::from_fn(r, r, |k, j| sols[j][p + k].clone());
    let z = mat_inv_series(&sr, &xbar)?;
    let row0 = Matrix::from_fn(1, r, |_, j| xbar.get(0, j).clone());
    let w = sr.matmul(&mul_by_constant(ell, &row0, &pm), &z);
    Ok((0..r).map(|j| inverse_for(ctx, w.get(0, j))).collect())
}

/// Inverse of the constant term of `Y`, used as a consistency hook.
pub fn constant_inverse(ell: &QuotRing, y: &Matrix<Series>) -> Result<Matrix<QuotElem>> {
    mat_inv_const(ell, &y.map(|e| ell.flat_get(&e.data, 0)))
}
