//! Truncated divided power series `ℓ[[t]]^dp`.
//!
//! An element `Σ a_i γ_i(t)` is stored densely by its γ-coefficients, where
//! `γ_i γ_j = C(i+j, i) γ_{i+j}`. Multiplication goes through the
//! multivariate presentation
//!
//! ```text
//! ℓ[[t]]^dp / (≥ n p^s)  ≅  ℓ[t_0, …, t_s] / (t_0^p, …, t_{s-1}^p, t_s^n),
//! γ_i  ↦  Π_j t_j^{i_j} / i_j!      (i = Σ i_j p^j in base p)
//! ```
//!
//! followed by Kronecker substitution into one univariate product over `ℓ`.

use std::sync::Arc;

use crate::arith;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::quot::{QuotElem, QuotRing, RingPoly};
use crate::ring::{Ring, SeriesAlgebra};

/// `Σ_{i < prec} a_i γ_i(t)`, known modulo terms of order `>= prec`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DpSeries {
    pub(crate) prec: usize,
    pub(crate) data: Vec<u64>,
}

impl DpSeries {
    pub fn prec(&self) -> usize {
        self.prec
    }
}

/// Multivariate form: the coefficient of `t_0^{i_0} ⋯ t_s^{i_s}` is stored
/// at index `i = Σ i_j p^j`, for a precision `n p^s` with `1 <= n <= p`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DpMulti {
    pub(crate) n: usize,
    pub(crate) s: u32,
    pub(crate) data: Vec<u64>,
}

impl DpMulti {
    /// `(n, s)` with precision `n p^s`.
    pub fn shape(&self) -> (usize, u32) {
        (self.n, self.s)
    }

    /// Coefficient of the monomial with the given exponents (`s + 1` of them).
    pub fn coeff(&self, ring: &DpRing, exps: &[usize]) -> QuotElem {
        let p = ring.p();
        let mut idx = 0;
        let mut w = 1;
        for &e in exps {
            idx += e * w;
            w *= p;
        }
        ring.ell.flat_get(&self.data, idx)
    }
}

/// The ring `ℓ[[t]]^dp` truncated at a default precision.
#[derive(Clone, Debug)]
pub struct DpRing {
    ell: QuotRing,
    prec: usize,
    fact: Arc<Vec<u64>>,
    inv_fact: Arc<Vec<u64>>,
}

impl DpRing {
    pub fn new(ell: &QuotRing, prec: usize) -> Result<Self> {
        if prec == 0 {
            return Err(Error::BadPrecision("divided power precision must be positive".into()));
        }
        let p = ell.p() as usize;
        let f = ell.field();
        Ok(Self {
            ell: ell.clone(),
            prec,
            fact: Arc::new(f.factorials(p)),
            inv_fact: Arc::new(f.inverse_factorials(p)),
        })
    }

    fn p(&self) -> usize {
        self.ell.p() as usize
    }

    /// `i!` for `i < p`.
    pub fn factorial(&self, i: usize) -> u64 {
        self.fact[i]
    }

    pub fn inverse_factorial(&self, i: usize) -> u64 {
        self.inv_fact[i]
    }

    pub fn make(&self, data: Vec<u64>, prec: usize) -> DpSeries {
        assert_eq!(data.len(), prec * self.ell.degree());
        DpSeries { prec, data }
    }

    pub fn data<'a>(&self, a: &'a DpSeries) -> &'a [u64] {
        &a.data
    }

    /// `γ_k` at the ring's precision (zero if `k` is beyond it).
    pub fn gamma(&self, k: usize) -> DpSeries {
        let mut c = vec![self.ell.zero(); k + 1];
        c[k] = self.ell.one();
        self.from_coeffs(&c, self.prec)
    }

    /// Smallest admissible precision `n p^s >= prec`, as `(n, s)`.
    pub fn admissible(&self, prec: usize) -> (usize, u32) {
        let p = self.p();
        let mut s = 0;
        let mut w = 1usize;
        while w * p < prec {
            w *= p;
            s += 1;
        }
        (prec.div_ceil(w), s)
    }

    fn check_shape(&self, prec: usize) -> Result<(usize, u32)> {
        let (n, s) = self.admissible(prec);
        if n * self.p().pow(s) != prec {
            return Err(Error::BadPrecision(format!("precision {prec} is not of the form n*p^s with 1 <= n <= p")));
        }
        Ok((n, s))
    }

    /// Scales the coefficient at index `i` by the product of `table[digit]`
    /// over the base-`p` digits of `i`.
    fn digit_scale(&self, data: &mut [u64], len: usize, table: &[u64]) {
        let f = self.ell.field();
        let m = self.ell.degree();
        let p = self.p();
        for i in 0..len {
            let mut c = 1u64;
            let mut k = i;
            while k > 0 {
                c = f.mul(c, table[k % p]);
                k /= p;
            }
            if c != 1 {
                for v in &mut data[i * m..(i + 1) * m] {
                    *v = f.mul(*v, c);
                }
            }
        }
    }

    /// γ-basis to multivariate basis. The precision must be admissible.
    pub fn gamma_to_multi(&self, f: &DpSeries) -> Result<DpMulti> {
        let (n, s) = self.check_shape(f.prec)?;
        let mut data = f.data.clone();
        self.digit_scale(&mut data, f.prec, &self.inv_fact);
        Ok(DpMulti { n, s, data })
    }

    pub fn multi_to_gamma(&self, g: &DpMulti) -> DpSeries {
        let prec = g.n * self.p().pow(g.s);
        let mut data = g.data.clone();
        self.digit_scale(&mut data, prec, &self.fact);
        DpSeries { prec, data }
    }

    /// Kronecker index of the monomial stored at `i`: base-`p` digits read
    /// in base `2p - 1`.
    fn kron_index(&self, mut i: usize) -> usize {
        let p = self.p();
        let q = 2 * p - 1;
        let mut out = 0;
        let mut w = 1;
        while i > 0 {
            out += (i % p) * w;
            w *= q;
            i /= p;
        }
        out
    }

    fn kron_pack(&self, g: &DpMulti) -> Vec<u64> {
        let m = self.ell.degree();
        let len = g.data.len() / m;
        if len == 0 {
            return Vec::new();
        }
        let top = self.kron_index(len - 1);
        let mut out = vec![0u64; (top + 1) * m];
        for i in 0..len {
            let k = self.kron_index(i);
            out[k * m..(k + 1) * m].copy_from_slice(&g.data[i * m..(i + 1) * m]);
        }
        out
    }

    fn kron_unpack(&self, v: &[u64], n: usize, s: u32) -> DpMulti {
        let m = self.ell.degree();
        let len = n * self.p().pow(s);
        let mut data = vec![0u64; len * m];
        for i in 0..len {
            let k = self.kron_index(i);
            if (k + 1) * m <= v.len() {
                data[i * m..(i + 1) * m].copy_from_slice(&v[k * m..(k + 1) * m]);
            }
        }
        DpMulti { n, s, data }
    }

    /// Product in `ℓ[t_0, …, t_s]/(t_0^p, …, t_s^n)`.
    pub fn multi_mul(&self, a: &DpMulti, b: &DpMulti) -> Result<DpMulti> {
        if (a.n, a.s) != (b.n, b.s) {
            return Err(Error::BadPrecision("multivariate operands of different shapes".into()));
        }
        let pa = self.kron_pack(a);
        let pb = self.kron_pack(b);
        let prod = self.ell.poly_mul(&pa, &pb);
        Ok(self.kron_unpack(&prod, a.n, a.s))
    }

    /// Multiplication through the multivariate presentation, valid at any
    /// precision.
    pub fn mul_multivariate(&self, a: &DpSeries, b: &DpSeries) -> DpSeries {
        let n = a.prec.min(b.prec);
        let (k, s) = self.admissible(n);
        let full = k * self.p().pow(s);
        let ma = self.gamma_to_multi(&self.extend(&self.truncate(a, n), full)).expect("admissible");
        let mb = self.gamma_to_multi(&self.extend(&self.truncate(b, n), full)).expect("admissible");
        let prod = self.multi_mul(&ma, &mb).expect("same shape");
        self.truncate(&self.multi_to_gamma(&prod), n)
    }

    /// Multiplication through `ℓ[t]/t^N`, valid when `N <= p`.
    pub fn mul_direct(&self, a: &DpSeries, b: &DpSeries) -> Result<DpSeries> {
        let n = a.prec.min(b.prec);
        if n > self.p() {
            return Err(Error::BadPrecision(format!("direct product needs precision <= p, got {n}")));
        }
        let mut x = a.data[..n * self.ell.degree()].to_vec();
        let mut y = b.data[..n * self.ell.degree()].to_vec();
        self.digit_scale(&mut x, n, &self.inv_fact);
        self.digit_scale(&mut y, n, &self.inv_fact);
        let mut z = self.ell.poly_mul_trunc(&x, &y, n);
        self.digit_scale(&mut z, n, &self.fact);
        Ok(DpSeries { prec: n, data: z })
    }

    /// The map `ε`: `Σ f_i t^i ↦ Σ_{i<p} f_i i! γ_i`, at precision `prec`.
    pub fn embed(&self, f: &RingPoly, prec: usize) -> DpSeries {
        let m = self.ell.degree();
        let mut data = vec![0u64; prec * m];
        let k = f.len().min(prec).min(self.p());
        data[..k * m].copy_from_slice(&f.flat()[..k * m]);
        self.digit_scale(&mut data, k, &self.fact);
        DpSeries { prec, data }
    }

    /// `f(0)`, the γ_0 coefficient.
    pub fn eval0(&self, f: &DpSeries) -> QuotElem {
        self.coeff(f, 0)
    }

    fn to_multi_flat(&self, a: &DpSeries, n: usize, full: usize) -> Vec<u64> {
        let ext = self.extend(&self.truncate(a, n), full);
        let g = self.gamma_to_multi(&ext).expect("admissible");
        self.kron_pack(&g)
    }
}

impl Ring for DpRing {
    type Elem = DpSeries;

    fn zero(&self) -> DpSeries {
        DpSeries { prec: self.prec, data: vec![0; self.prec * self.ell.degree()] }
    }

    fn one(&self) -> DpSeries {
        self.scalar(&self.ell.one())
    }

    fn add(&self, a: &DpSeries, b: &DpSeries) -> DpSeries {
        let n = a.prec.min(b.prec);
        let mut data = a.data[..n * self.ell.degree()].to_vec();
        self.ell.flat_add_assign(&mut data, &b.data);
        DpSeries { prec: n, data }
    }

    fn sub(&self, a: &DpSeries, b: &DpSeries) -> DpSeries {
        let n = a.prec.min(b.prec);
        let mut data = a.data[..n * self.ell.degree()].to_vec();
        self.ell.flat_sub_assign(&mut data, &b.data);
        DpSeries { prec: n, data }
    }

    fn neg(&self, a: &DpSeries) -> DpSeries {
        let f = self.ell.field();
        DpSeries { prec: a.prec, data: a.data.iter().map(|&x| f.neg(x)).collect() }
    }

    fn mul(&self, a: &DpSeries, b: &DpSeries) -> DpSeries {
        self.mul_multivariate(a, b)
    }

    fn is_zero(&self, a: &DpSeries) -> bool {
        a.data.iter().all(|&c| c == 0)
    }

    fn matmul(&self, a: &Matrix<DpSeries>, b: &Matrix<DpSeries>) -> Matrix<DpSeries> {
        let n = a.entries().iter().chain(b.entries()).map(|s| s.prec).min().unwrap_or(self.prec);
        let (k, s) = self.admissible(n);
        let full = k * self.p().pow(s);
        let ell = &self.ell;
        let m = ell.degree();
        let stride = if m == 1 { 1 } else { 2 * m - 1 };
        let pa: Vec<Vec<u64>> = a.entries().iter().map(|x| self.to_multi_flat(x, n, full)).collect();
        let pb: Vec<Vec<u64>> = b.entries().iter().map(|x| self.to_multi_flat(x, n, full)).collect();
        let pa: Vec<Vec<u64>> = pa.iter().map(|v| ell.pack(v, v.len() / m)).collect();
        let pb: Vec<Vec<u64>> = pb.iter().map(|v| ell.pack(v, v.len() / m)).collect();
        let la = pa.iter().map(Vec::len).max().unwrap_or(0);
        let lb = pb.iter().map(Vec::len).max().unwrap_or(0);
        let out_len = (la + lb).saturating_sub(1);
        let prod = arith::poly_matrix_mul(ell.p(), a.rows(), a.cols(), b.cols(), &pa, &pb, out_len);
        let entries = prod
            .iter()
            .map(|v| {
                let flat = ell.unpack(v, v.len().div_ceil(stride));
                let multi = self.kron_unpack(&flat, k, s);
                self.truncate(&self.multi_to_gamma(&multi), n)
            })
            .collect();
        Matrix::from_vec(a.rows(), b.cols(), entries).expect("shape")
    }
}

impl SeriesAlgebra for DpRing {
    fn base(&self) -> &QuotRing {
        &self.ell
    }

    fn prec(&self) -> usize {
        self.prec
    }

    fn with_prec(&self, prec: usize) -> Result<Self> {
        if prec == 0 {
            return Err(Error::BadPrecision("divided power precision must be positive".into()));
        }
        Ok(Self { prec, ..self.clone() })
    }

    fn prec_of(&self, a: &DpSeries) -> usize {
        a.prec
    }

    fn coeff(&self, a: &DpSeries, i: usize) -> QuotElem {
        if i < a.prec {
            self.ell.flat_get(&a.data, i)
        } else {
            self.ell.zero()
        }
    }

    fn from_coeffs(&self, coeffs: &[QuotElem], prec: usize) -> DpSeries {
        let m = self.ell.degree();
        let mut data = vec![0; prec * m];
        for (i, c) in coeffs.iter().take(prec).enumerate() {
            data[i * m..(i + 1) * m].copy_from_slice(c.as_slice());
        }
        DpSeries { prec, data }
    }

    fn mul_scalar(&self, a: &DpSeries, c: &QuotElem) -> DpSeries {
        DpSeries { prec: a.prec, data: self.ell.flat_scale(&a.data, c) }
    }

    /// `(Σ a_i γ_i)' = Σ a_{i+1} γ_i`.
    fn derive(&self, a: &DpSeries) -> DpSeries {
        let m = self.ell.degree();
        let n = a.prec.saturating_sub(1);
        DpSeries { prec: n, data: a.data[m.min(a.data.len())..].to_vec() }
    }

    /// `∫ Σ a_i γ_i = Σ a_i γ_{i+1}`.
    fn integrate(&self, a: &DpSeries) -> DpSeries {
        let m = self.ell.degree();
        let mut data = vec![0; m];
        data.extend_from_slice(&a.data);
        DpSeries { prec: a.prec + 1, data }
    }

    fn truncate(&self, a: &DpSeries, n: usize) -> DpSeries {
        let n = n.min(a.prec);
        DpSeries { prec: n, data: a.data[..n * self.ell.degree()].to_vec() }
    }

    fn extend(&self, a: &DpSeries, n: usize) -> DpSeries {
        let n = n.max(a.prec);
        let mut data = a.data.clone();
        data.resize(n * self.ell.degree(), 0);
        DpSeries { prec: n, data }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use proptest::prelude::*;

    fn fp(p: u64) -> QuotRing {
        QuotRing::prime_field(p).unwrap()
    }

    /// `C(n, k) mod p` by Lucas' theorem.
    fn lucas(mut n: usize, mut k: usize, p: usize) -> u64 {
        let mut acc = 1u64;
        while n > 0 || k > 0 {
            let (a, b) = (n % p, k % p);
            if b > a {
                return 0;
            }
            let mut c = 1u64;
            for i in 0..b {
                c = c * ((a - i) as u64) % p as u64;
            }
            let mut d = 1u64;
            for i in 1..=b {
                d = d * i as u64 % p as u64;
            }
            let f = crate::field::PrimeField::new(p as u64).unwrap();
            acc = f.mul(acc, f.mul(c, f.inv(d)));
            n /= p;
            k /= p;
        }
        acc
    }

    /// Product straight from `γ_i γ_j = C(i+j, i) γ_{i+j}` over `F_p`.
    fn naive_mul(a: &[u64], b: &[u64], p: usize) -> Vec<u64> {
        let n = a.len().min(b.len());
        let mut out = vec![0u64; n];
        for i in 0..n {
            for j in 0..n - i {
                let c = lucas(i + j, i, p) * (a[i] * b[j] % p as u64) % p as u64;
                out[i + j] = (out[i + j] + c) % p as u64;
            }
        }
        out
    }

    fn series(ring: &DpRing, c: &[u64]) -> DpSeries {
        ring.make(c.to_vec(), c.len())
    }

    #[test]
    fn multiplication_rule() {
        for p in [3u64, 5, 7] {
            let r = DpRing::new(&fp(p), 4).unwrap();
            let g1 = r.gamma(1);
            assert_eq!(r.coeff(&r.mul(&g1, &g1), 2), r.base().scalar(2));
        }
        // C(3, 1) = 3 vanishes in characteristic 3.
        let r = DpRing::new(&fp(3), 4).unwrap();
        assert!(r.is_zero(&r.mul(&r.gamma(1), &r.gamma(2))));
        let f = series(&r, &[1, 2, 0, 1]);
        assert_eq!(r.mul(&r.one(), &f), f);
    }

    #[test]
    fn conversion_examples() {
        let r = DpRing::new(&fp(3), 9).unwrap();
        let g = r.gamma_to_multi(&r.gamma(1)).unwrap();
        assert_eq!(g.coeff(&r, &[1, 0]), r.base().one());
        // γ_5 = t_0^2 t_1 / (2! 1!) and 1/2 = 2 mod 3.
        let g = r.gamma_to_multi(&r.gamma(5)).unwrap();
        assert_eq!(g.coeff(&r, &[2, 1]), r.base().scalar(2));
        assert!(r.gamma_to_multi(&series(&r, &[1, 2, 3, 4])).is_err());
        assert_eq!(r.admissible(4), (2, 1));
        assert_eq!(r.admissible(9), (3, 1));
        assert_eq!(r.admissible(10), (2, 2));
    }

    #[test]
    fn derive_integrate_embed() {
        let r = DpRing::new(&fp(5), 6).unwrap();
        assert_eq!(r.truncate(&r.derive(&r.gamma(2)), 5), r.with_prec(5).unwrap().gamma(1));
        assert!(r.is_zero(&r.derive(&r.one())));
        let one = r.with_prec(5).unwrap().one();
        assert_eq!(r.integrate(&one), r.gamma(1));
        assert!(r.is_zero(&r.integrate(&r.with_prec(5).unwrap().zero())));
        let g4 = r.with_prec(5).unwrap().gamma(4);
        assert_eq!(r.integrate(&g4), r.gamma(5));

        let ell = fp(5);
        let t = RingPoly::from_fp(&ell, &Poly::x(5));
        assert_eq!(r.embed(&t, 6), r.gamma(1));
        let t5 = RingPoly::from_fp(&ell, &Poly::monomial(5, 1, 5));
        assert!(r.is_zero(&r.embed(&t5, 6)));
        let t2 = RingPoly::from_fp(&ell, &Poly::monomial(5, 1, 2));
        assert_eq!(r.embed(&t2, 6), r.mul_scalar(&r.gamma(2), &ell.scalar(2)));
        let g = series(&r, &[3, 1, 0, 0, 0, 2]);
        assert_eq!(r.eval0(&g), ell.scalar(3));
        assert_eq!(r.eval0(&r.gamma(1)), ell.zero());
    }

    #[test]
    fn t_i_is_nilpotent() {
        for p in [3usize, 5, 7] {
            let r = DpRing::new(&fp(p as u64), p * p).unwrap();
            for i in 0..2 {
                let ti = r.gamma(p.pow(i));
                let mut acc = r.one();
                for _ in 0..p {
                    acc = r.mul(&acc, &ti);
                }
                assert!(r.is_zero(&acc), "t_{i}^p != 0 for p = {p}");
            }
        }
    }

    #[test]
    fn matrix_product_over_extension() {
        let ell = QuotRing::new(Poly::from_i64(5, &[2, 0, 1])).unwrap();
        let r = DpRing::new(&ell, 12).unwrap();
        let mk = |seed: u64| {
            let c: Vec<QuotElem> = (0..12u64)
                .map(|i| ell.from_poly(&Poly::from_coeffs(5, vec![(i * seed) % 5, (i + seed) % 5])))
                .collect();
            r.from_coeffs(&c, 12)
        };
        let a = Matrix::from_fn(2, 2, |i, j| mk((i * 2 + j + 1) as u64));
        let b = Matrix::from_fn(2, 1, |i, _| mk((i + 7) as u64));
        assert_eq!(r.matmul(&a, &b), crate::matrix::classical_mul(&r, &a, &b));
    }

    fn arb(p: u64, n: usize) -> impl Strategy<Value = Vec<u64>> {
        prop::collection::vec(0..p, n)
    }

    fn prime_and_prec() -> impl Strategy<Value = (u64, usize)> {
        prop::sample::select(vec![3u64, 5, 7]).prop_flat_map(|p| (Just(p), 1..=(p * p) as usize))
    }

    proptest! {
        #[test]
        fn product_matches_binomial_rule(((p, n), seed) in (prime_and_prec(), any::<u64>())) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
            let b: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
            let r = DpRing::new(&fp(p), n).unwrap();
            let prod = r.mul(&series(&r, &a), &series(&r, &b));
            prop_assert_eq!(prod.data, naive_mul(&a, &b, p as usize));
        }

        #[test]
        fn ring_axioms((p, n) in prime_and_prec(), seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let r = DpRing::new(&fp(p), n).unwrap();
            let mut rand_series = || series(&r, &(0..n).map(|_| rng.gen_range(0..p)).collect::<Vec<_>>());
            let (a, b, c) = (rand_series(), rand_series(), rand_series());
            prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
            prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
            prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
        }

        #[test]
        fn multi_round_trip(c in arb(5, 25)) {
            let r = DpRing::new(&fp(5), 25).unwrap();
            let f = series(&r, &c);
            prop_assert_eq!(r.multi_to_gamma(&r.gamma_to_multi(&f).unwrap()), f);
        }

        #[test]
        fn conversion_is_multiplicative(a in arb(3, 9), b in arb(3, 9)) {
            let r = DpRing::new(&fp(3), 9).unwrap();
            let (fa, fb) = (series(&r, &a), series(&r, &b));
            let lhs = r.gamma_to_multi(&r.mul(&fa, &fb)).unwrap();
            let rhs = r.multi_mul(&r.gamma_to_multi(&fa).unwrap(), &r.gamma_to_multi(&fb).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn direct_and_multivariate_agree((p, n) in prime_and_prec(), seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            prop_assume!(n <= p as usize);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let r = DpRing::new(&fp(p), n).unwrap();
            let a = series(&r, &(0..n).map(|_| rng.gen_range(0..p)).collect::<Vec<_>>());
            let b = series(&r, &(0..n).map(|_| rng.gen_range(0..p)).collect::<Vec<_>>());
            prop_assert_eq!(r.mul_direct(&a, &b).unwrap(), r.mul_multivariate(&a, &b));
        }

        #[test]
        fn leibniz((p, n) in prime_and_prec(), seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            prop_assume!(n >= 2);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let r = DpRing::new(&fp(p), n).unwrap();
            let a = series(&r, &(0..n).map(|_| rng.gen_range(0..p)).collect::<Vec<_>>());
            let b = series(&r, &(0..n).map(|_| rng.gen_range(0..p)).collect::<Vec<_>>());
            let lhs = r.derive(&r.mul(&a, &b));
            let rhs = r.add(&r.mul(&r.derive(&a), &b), &r.mul(&a, &r.derive(&b)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn integral_inverts_derivative(c in arb(7, 30)) {
            let r = DpRing::new(&fp(7), 30).unwrap();
            let f = series(&r, &c);
            prop_assert_eq!(r.derive(&r.integrate(&f)), f);
        }

        #[test]
        fn embedding_kernel_is_generated_by_t_p(c in arb(5, 12), q in arb(5, 4)) {
            // ε(f + t^p q) = ε(f)
            let ell = fp(5);
            let r = DpRing::new(&ell, 12).unwrap();
            let f = Poly::from_coeffs(5, c);
            let g = &f + &(&Poly::from_coeffs(5, q) * &Poly::monomial(5, 1, 5));
            let ef = r.embed(&RingPoly::from_fp(&ell, &f), 12);
            let eg = r.embed(&RingPoly::from_fp(&ell, &g), 12);
            prop_assert_eq!(&ef, &eg);
            let low = f.truncate(5);
            prop_assert_eq!(r.embed(&RingPoly::from_fp(&ell, &low), 12), ef);
        }
    }
}
