//! Dense univariate polynomials over `F_p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith;
use crate::error::{Error, Result};
use crate::field::PrimeField;

/// A polynomial over `F_p`, coefficients in ascending degree.
///
/// The coefficient vector never ends with a zero; the zero polynomial is the
/// empty vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    p: u64,
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn zero(p: u64) -> Self {
        Self { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::constant(p, 1)
    }

    /// The monomial `x`.
    pub fn x(p: u64) -> Self {
        Self::from_coeffs(p, vec![0, 1])
    }

    pub fn constant(p: u64, c: u64) -> Self {
        Self::from_coeffs(p, vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(p: u64, c: u64, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Self::from_coeffs(p, v)
    }

    /// Builds a polynomial, reducing every coefficient mod `p`.
    pub fn from_coeffs(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            if *c >= p {
                *c %= p;
            }
        }
        let mut out = Self { p, coeffs };
        out.trim();
        out
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        let f = PrimeField::new_unchecked(p);
        Self::from_coeffs(p, coeffs.iter().map(|&c| f.from_i64(c)).collect())
    }

    /// Wraps already-reduced coefficients.
    pub(crate) fn from_reduced(p: u64, coeffs: Vec<u64>) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < p));
        let mut out = Self { p, coeffs };
        out.trim();
        out
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new_unchecked(self.p)
    }

    #[inline]
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Number of stored coefficients (`deg + 1`, or 0 for zero).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    fn assert_same(&self, other: &Self) {
        assert_eq!(self.p, other.p, "polynomials over different prime fields");
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = self.field();
        let c = c % self.p;
        Self::from_reduced(self.p, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// `self * x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.coeffs);
        Self { p: self.p, coeffs: v }
    }

    /// `self mod x^n`.
    pub fn truncate(&self, n: usize) -> Self {
        Self::from_reduced(self.p, self.coeffs[..self.coeffs.len().min(n)].to_vec())
    }

    pub fn derivative(&self) -> Self {
        let f = self.field();
        Self::from_reduced(
            self.p,
            self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul(c, i as u64 % self.p)).collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = self.field();
        let x = x % self.p;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `self(x^k)`: spreads the coefficients `k` apart.
    pub fn inflate(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0; (self.coeffs.len() - 1) * k + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[i * k] = c;
        }
        Self { p: self.p, coeffs: v }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.p);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Scales to a monic polynomial; the zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(self.field().inv(self.lead()))
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        self.assert_same(divisor);
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let f = self.field();
        let n = self.coeffs.len();
        let m = divisor.coeffs.len();
        if n < m {
            return (Self::zero(self.p), self.clone());
        }
        if m > 64 && n - m > 64 {
            return self.div_rem_fast(divisor);
        }
        let inv_lead = f.inv(divisor.lead());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; n - m + 1];
        let d = &divisor.coeffs;
        for k in (0..=n - m).rev() {
            let c = rem[k + m - 1];
            if c == 0 {
                continue;
            }
            let q = f.mul(c, inv_lead);
            quot[k] = q;
            for (j, &dj) in d.iter().enumerate() {
                rem[k + j] = f.sub(rem[k + j], f.mul(q, dj));
            }
        }
        rem.truncate(m - 1);
        (Self::from_reduced(self.p, quot), Self::from_reduced(self.p, rem))
    }

    /// Division through a power series inverse of the reversed divisor.
    fn div_rem_fast(&self, divisor: &Self) -> (Self, Self) {
        let f = self.field();
        let n = self.coeffs.len();
        let m = divisor.coeffs.len();
        let k = n - m + 1;
        let inv_lead = f.inv(divisor.lead());
        let rev_d: Vec<u64> = divisor.coeffs.iter().rev().map(|&c| f.mul(c, inv_lead)).collect();
        let inv = series_inverse(&rev_d, k, self.p);
        let rev_f: Vec<u64> = self.coeffs.iter().rev().copied().collect();
        let mut q = arith::mul_trunc(&rev_f, &inv, k, self.p);
        q.resize(k, 0);
        q.reverse();
        let q: Vec<u64> = q.into_iter().map(|c| f.mul(c, inv_lead)).collect();
        let quot = Self::from_reduced(self.p, q);
        let rem = self - &(&quot * divisor);
        (quot, rem)
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Exact quotient, or `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        self.assert_same(other);
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g` and `g` monic.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        self.assert_same(other);
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(p), Self::zero(p));
        let (mut t0, mut t1) = (Self::zero(p), Self::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let c = self.field().inv(r0.lead());
        (r0.scale(c), s0.scale(c), t0.scale(c))
    }

    /// Inverse of `self` modulo `modulus`, or [`Error::NotInvertible`] carrying
    /// the nontrivial gcd.
    pub fn inv_mod(&self, modulus: &Self) -> Result<Self> {
        self.check(modulus)?;
        if modulus.is_zero() {
            return Err(Error::InvalidModulus("zero modulus".into()));
        }
        let a = self.rem(modulus);
        let (g, s, _) = a.xgcd(modulus);
        if !g.is_one() {
            return Err(Error::NotInvertible { gcd: if g.is_zero() { modulus.monic() } else { g } });
        }
        Ok(s.rem(modulus))
    }

    /// `self^e mod modulus` by repeated squaring.
    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Self {
        let mut acc = Self::one(self.p).rem(modulus);
        let mut base = self.rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).rem(modulus);
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).rem(modulus);
            }
        }
        acc
    }

    /// `self(g) mod modulus` by Horner's rule.
    pub fn compose_mod(&self, g: &Self, modulus: &Self) -> Self {
        let g = g.rem(modulus);
        let mut acc = Self::zero(self.p);
        for &c in self.coeffs.iter().rev() {
            acc = (&(&acc * &g) + &Self::constant(self.p, c)).rem(modulus);
        }
        acc
    }
}

/// First `n` coefficients of `1/f` for `f(0) != 0`, by Newton iteration.
pub(crate) fn series_inverse(f: &[u64], n: usize, p: u64) -> Vec<u64> {
    let field = PrimeField::new_unchecked(p);
    let mut g = vec![field.inv(f[0])];
    let mut k = 1;
    while k < n {
        let k2 = (2 * k).min(n);
        // g <- g (2 - f g)
        let fg = arith::mul_trunc(&f[..f.len().min(k2)], &g, k2, p);
        let mut e: Vec<u64> = fg.iter().map(|&c| field.neg(c)).collect();
        e.resize(k2, 0);
        e[0] = field.add(e[0], 2);
        g = arith::mul_trunc(&g, &e, k2, p);
        g.resize(k2, 0);
        k = k2;
    }
    g.truncate(n);
    g
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[p={}]{:?}", self.p, self.coeffs)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{c}*x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.assert_same(rhs);
        let f = self.field();
        let (long, short) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut v = long.coeffs.clone();
        for (a, &b) in v.iter_mut().zip(&short.coeffs) {
            *a = f.add(*a, b);
        }
        Poly::from_reduced(self.p, v)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.assert_same(rhs);
        let f = self.field();
        let n = self.len().max(rhs.len());
        let v = (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect();
        Poly::from_reduced(self.p, v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = self.field();
        Poly::from_reduced(self.p, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.assert_same(rhs);
        Poly::from_reduced(self.p, arith::mul(&self.coeffs, &rhs.coeffs, self.p))
    }
}
