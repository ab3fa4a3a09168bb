//! The quotient ring `ℓ = F_p[x]/S` and dense polynomials over it.
//!
//! `S` is only required to be monic; `ℓ` is a product of fields when `S` is
//! squarefree and may have zero divisors in general. Every inversion goes
//! through [`Poly::inv_mod`] and reports the offending gcd on failure.
//!
//! Elements are stored as dense coefficient vectors of length `m = deg S`.
//! Polynomials and series over `ℓ` are flat `Vec<u64>` of length `n * m`,
//! coefficient `i` occupying `[i*m, (i+1)*m)`.

use std::fmt;
use std::sync::Arc;

use crate::arith;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::poly::Poly;

/// An element of `ℓ`: the `m` coefficients of its reduced representative.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuotElem(pub(crate) Vec<u64>);

impl QuotElem {
    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    /// Coefficients of the representative, constant term first.
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for QuotElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

struct Inner {
    field: PrimeField,
    modulus: Poly,
    m: usize,
}

/// The ring `F_p[x]/S`. Cloning is cheap.
#[derive(Clone)]
pub struct QuotRing(Arc<Inner>);

impl fmt::Debug for QuotRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuotRing(F_{}[x]/({}))", self.p(), self.0.modulus)
    }
}

impl PartialEq for QuotRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.modulus == other.0.modulus
    }
}

impl Eq for QuotRing {}

impl QuotRing {
    /// `modulus` must be monic of degree at least one.
    pub fn new(modulus: Poly) -> Result<Self> {
        PrimeField::new(modulus.modulus())?;
        match modulus.degree() {
            None | Some(0) => {
                return Err(Error::InvalidModulus(format!("{modulus} has degree < 1")));
            }
            _ => {}
        }
        if !modulus.is_monic() {
            return Err(Error::InvalidModulus(format!("{modulus} is not monic")));
        }
        let m = modulus.len() - 1;
        Ok(Self(Arc::new(Inner { field: modulus.field(), modulus, m })))
    }

    /// `F_p` itself, presented as `F_p[x]/(x)`.
    pub fn prime_field(p: u64) -> Result<Self> {
        Self::new(Poly::x(p))
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.0.field.p()
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.0.field
    }

    pub fn modulus(&self) -> &Poly {
        &self.0.modulus
    }

    /// `deg S`.
    #[inline]
    pub fn degree(&self) -> usize {
        self.0.m
    }

    pub fn zero(&self) -> QuotElem {
        QuotElem(vec![0; self.0.m])
    }

    pub fn one(&self) -> QuotElem {
        self.scalar(1)
    }

    pub fn scalar(&self, c: u64) -> QuotElem {
        let mut v = vec![0; self.0.m];
        v[0] = c % self.p();
        QuotElem(v)
    }

    /// The class of `x`.
    pub fn gen(&self) -> QuotElem {
        self.from_poly(&Poly::x(self.p()))
    }

    pub fn from_poly(&self, f: &Poly) -> QuotElem {
        assert_eq!(f.modulus(), self.p(), "polynomial over a different prime field");
        let r = if f.len() > self.0.m { f.rem(&self.0.modulus) } else { f.clone() };
        let mut v = r.into_coeffs();
        v.resize(self.0.m, 0);
        QuotElem(v)
    }

    pub fn to_poly(&self, a: &QuotElem) -> Poly {
        Poly::from_reduced(self.p(), a.0.clone())
    }

    pub fn add(&self, a: &QuotElem, b: &QuotElem) -> QuotElem {
        let f = self.field();
        QuotElem(a.0.iter().zip(&b.0).map(|(&x, &y)| f.add(x, y)).collect())
    }

    pub fn sub(&self, a: &QuotElem, b: &QuotElem) -> QuotElem {
        let f = self.field();
        QuotElem(a.0.iter().zip(&b.0).map(|(&x, &y)| f.sub(x, y)).collect())
    }

    pub fn neg(&self, a: &QuotElem) -> QuotElem {
        let f = self.field();
        QuotElem(a.0.iter().map(|&x| f.neg(x)).collect())
    }

    pub fn scale(&self, a: &QuotElem, c: u64) -> QuotElem {
        let f = self.field();
        QuotElem(a.0.iter().map(|&x| f.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &QuotElem, b: &QuotElem) -> QuotElem {
        let mut out = vec![0; self.0.m];
        self.mul_into(&a.0, &b.0, &mut out);
        QuotElem(out)
    }

    pub fn pow(&self, a: &QuotElem, mut e: u64) -> QuotElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn inv(&self, a: &QuotElem) -> Result<QuotElem> {
        if self.0.m == 1 {
            return match self.field().try_inv(a.0[0]) {
                Some(v) => Ok(QuotElem(vec![v])),
                None => Err(Error::NotInvertible { gcd: self.0.modulus.clone() }),
            };
        }
        let g = self.to_poly(a).inv_mod(&self.0.modulus)?;
        Ok(self.from_poly(&g))
    }

    /// `out = a * b` for element slices of length `m`.
    pub(crate) fn mul_into(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let f = self.field();
        let m = self.0.m;
        if m == 1 {
            out[0] = f.mul(a[0], b[0]);
            return;
        }
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % f.p();
            }
        }
        self.reduce_chunk(&mut prod);
        out.copy_from_slice(&prod[..m]);
    }

    /// Reduces a coefficient vector (entries `< p`) modulo `S` in place; the
    /// first `m` entries then hold the result.
    pub(crate) fn reduce_chunk(&self, v: &mut [u64]) {
        let f = self.field();
        let m = self.0.m;
        let s = self.0.modulus.coeffs();
        if v.len() <= m {
            return;
        }
        for k in (m..v.len()).rev() {
            let c = v[k];
            if c == 0 {
                continue;
            }
            v[k] = 0;
            for j in 0..m {
                v[k - m + j] = f.sub(v[k - m + j], f.mul(c, s[j]));
            }
        }
    }

    // ---- flat polynomials over ℓ ----

    /// Number of coefficients stored in a flat vector.
    #[inline]
    pub(crate) fn flat_len(&self, a: &[u64]) -> usize {
        a.len() / self.0.m
    }

    pub(crate) fn flat_get(&self, a: &[u64], i: usize) -> QuotElem {
        let m = self.0.m;
        QuotElem(a[i * m..(i + 1) * m].to_vec())
    }

    /// Packs a flat polynomial over `ℓ` into one over `F_p` with stride `2m-1`.
    pub(crate) fn pack(&self, a: &[u64], n: usize) -> Vec<u64> {
        let m = self.0.m;
        if m == 1 {
            return a[..n.min(a.len())].to_vec();
        }
        let stride = 2 * m - 1;
        let n = n.min(a.len() / m);
        let mut out = vec![0u64; n * stride];
        for i in 0..n {
            out[i * stride..i * stride + m].copy_from_slice(&a[i * m..(i + 1) * m]);
        }
        out
    }

    /// Inverse of [`pack`](Self::pack) after a product: reduces every chunk
    /// modulo `S` and keeps `n` coefficients.
    pub(crate) fn unpack(&self, v: &[u64], n: usize) -> Vec<u64> {
        let m = self.0.m;
        if m == 1 {
            let mut out = v[..v.len().min(n)].to_vec();
            out.resize(n, 0);
            return out;
        }
        let stride = 2 * m - 1;
        let mut out = vec![0u64; n * m];
        let mut chunk = vec![0u64; stride];
        for i in 0..n {
            let lo = i * stride;
            if lo >= v.len() {
                break;
            }
            let hi = (lo + stride).min(v.len());
            chunk.fill(0);
            chunk[..hi - lo].copy_from_slice(&v[lo..hi]);
            self.reduce_chunk(&mut chunk);
            out[i * m..(i + 1) * m].copy_from_slice(&chunk[..m]);
        }
        out
    }

    /// Product of two flat polynomials over `ℓ`, truncated to `n` coefficients.
    pub(crate) fn poly_mul_trunc(&self, a: &[u64], b: &[u64], n: usize) -> Vec<u64> {
        let la = self.flat_len(a).min(n);
        let lb = self.flat_len(b).min(n);
        if la == 0 || lb == 0 || n == 0 {
            return vec![0; n * self.0.m];
        }
        let full = (la + lb - 1).min(n);
        let pa = self.pack(a, la);
        let pb = self.pack(b, lb);
        let prod = arith::mul(&pa, &pb, self.p());
        let mut out = self.unpack(&prod, full);
        out.resize(n * self.0.m, 0);
        out
    }

    /// Full product of two flat polynomials over `ℓ`.
    pub(crate) fn poly_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let la = self.flat_len(a);
        let lb = self.flat_len(b);
        if la == 0 || lb == 0 {
            return Vec::new();
        }
        self.poly_mul_trunc(a, b, la + lb - 1)
    }

    /// Multiplies every coefficient of a flat polynomial by `c`.
    pub(crate) fn flat_scale(&self, a: &[u64], c: &QuotElem) -> Vec<u64> {
        let m = self.0.m;
        let mut out = vec![0u64; a.len()];
        if m == 1 {
            let f = self.field();
            for (o, &x) in out.iter_mut().zip(a) {
                *o = f.mul(x, c.0[0]);
            }
        } else {
            for (o, x) in out.chunks_mut(m).zip(a.chunks(m)) {
                self.mul_into(x, &c.0, o);
            }
        }
        out
    }

    pub(crate) fn flat_add_assign(&self, a: &mut [u64], b: &[u64]) {
        let f = self.field();
        for (x, &y) in a.iter_mut().zip(b) {
            *x = f.add(*x, y);
        }
    }

    pub(crate) fn flat_sub_assign(&self, a: &mut [u64], b: &[u64]) {
        let f = self.field();
        for (x, &y) in a.iter_mut().zip(b) {
            *x = f.sub(*x, y);
        }
    }
}

/// A dense polynomial over `ℓ`, coefficient `i` being the `i`-th element.
#[derive(Clone, PartialEq, Eq)]
pub struct RingPoly {
    ring: QuotRing,
    data: Vec<u64>,
}

impl fmt::Debug for RingPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs()).finish()
    }
}

impl RingPoly {
    pub fn zero(ring: &QuotRing) -> Self {
        Self { ring: ring.clone(), data: Vec::new() }
    }

    pub fn from_elems(ring: &QuotRing, coeffs: &[QuotElem]) -> Self {
        let mut data = Vec::with_capacity(coeffs.len() * ring.degree());
        for c in coeffs {
            assert_eq!(c.0.len(), ring.degree(), "element of a different ring");
            data.extend_from_slice(&c.0);
        }
        Self { ring: ring.clone(), data }
    }

    /// Lifts a polynomial over `F_p` coefficientwise into `ℓ`.
    pub fn from_fp(ring: &QuotRing, f: &Poly) -> Self {
        let m = ring.degree();
        let mut data = vec![0u64; f.len() * m];
        for (i, &c) in f.coeffs().iter().enumerate() {
            data[i * m] = c;
        }
        Self { ring: ring.clone(), data }
    }

    pub(crate) fn from_flat(ring: &QuotRing, data: Vec<u64>) -> Self {
        debug_assert_eq!(data.len() % ring.degree(), 0);
        Self { ring: ring.clone(), data }
    }

    pub fn ring(&self) -> &QuotRing {
        &self.ring
    }

    pub(crate) fn flat(&self) -> &[u64] {
        &self.data
    }

    pub(crate) fn into_flat(self) -> Vec<u64> {
        self.data
    }

    /// Number of stored coefficients (trailing zeros included).
    pub fn len(&self) -> usize {
        self.data.len() / self.ring.degree()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn coeff(&self, i: usize) -> QuotElem {
        if i < self.len() {
            self.ring.flat_get(&self.data, i)
        } else {
            self.ring.zero()
        }
    }

    pub fn coeffs(&self) -> Vec<QuotElem> {
        (0..self.len()).map(|i| self.ring.flat_get(&self.data, i)).collect()
    }

    /// Drops trailing zero coefficients.
    pub fn trimmed(mut self) -> Self {
        let m = self.ring.degree();
        while self.data.len() >= m && self.data[self.data.len() - m..].iter().all(|&c| c == 0) {
            self.data.truncate(self.data.len() - m);
        }
        self
    }

    pub fn truncate(&self, n: usize) -> Self {
        let m = self.ring.degree();
        let k = self.data.len().min(n * m);
        Self { ring: self.ring.clone(), data: self.data[..k].to_vec() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.data.len() >= other.data.len() { (self, other) } else { (other, self) };
        let mut data = long.data.clone();
        self.ring.flat_add_assign(&mut data, &short.data);
        Self { ring: self.ring.clone(), data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut data = self.data.clone();
        if data.len() < other.data.len() {
            data.resize(other.data.len(), 0);
        }
        self.ring.flat_sub_assign(&mut data, &other.data);
        Self { ring: self.ring.clone(), data }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { ring: self.ring.clone(), data: self.ring.poly_mul(&self.data, &other.data) }
    }

    pub fn mul_trunc(&self, other: &Self, n: usize) -> Self {
        Self { ring: self.ring.clone(), data: self.ring.poly_mul_trunc(&self.data, &other.data, n) }
    }

    pub fn scale(&self, c: &QuotElem) -> Self {
        Self { ring: self.ring.clone(), data: self.ring.flat_scale(&self.data, c) }
    }

    /// Horner evaluation at a point of `ℓ`.
    pub fn eval(&self, x: &QuotElem) -> QuotElem {
        let r = &self.ring;
        let mut acc = r.zero();
        for i in (0..self.len()).rev() {
            acc = r.mul(&acc, x);
            let c = r.flat_get(&self.data, i);
            acc = r.add(&acc, &c);
        }
        acc
    }
}
