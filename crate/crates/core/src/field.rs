//! Arithmetic in the prime field `F_p`.
//!
//! Scalars are plain `u64` values kept in `[0, p)`; the field value carries
//! only the modulus. Every prime used by the crate is below `2^31`, so a
//! product of two reduced scalars always fits in a `u64`.

use crate::error::{Error, Result};

/// Exclusive upper bound on supported characteristics.
pub const MAX_PRIME: u64 = 1 << 31;

/// Trial-division primality test (the inputs are below `2^31`).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MAX_PRIME || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    /// Skips the primality check; `p` must already be a validated prime.
    pub(crate) const fn new_unchecked(p: u64) -> Self {
        Self { p }
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, v: u64) -> u64 {
        v % self.p
    }

    #[inline]
    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn try_inv(&self, a: u64) -> Option<u64> {
        if a.is_multiple_of(self.p) {
            return None;
        }
        let (mut r0, mut r1) = (self.p as i64, (a % self.p) as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        Some(self.from_i64(s0))
    }

    /// Inverse of a nonzero scalar. Panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        self.try_inv(a).expect("inverse of zero in F_p")
    }

    /// `0!, 1!, ..., (n-1)!` reduced mod p.
    pub fn factorials(&self, n: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(n);
        let mut acc = 1 % self.p;
        for i in 0..n {
            if i > 0 {
                acc = self.mul(acc, i as u64 % self.p);
            }
            out.push(acc);
        }
        out
    }

    /// Inverses of `0!, ..., (n-1)!`; requires `n <= p`.
    pub fn inverse_factorials(&self, n: usize) -> Vec<u64> {
        assert!(n as u64 <= self.p, "factorials vanish from p! on");
        let fact = self.factorials(n);
        let mut out = vec![0; n];
        if n == 0 {
            return out;
        }
        let mut acc = self.inv(fact[n - 1]);
        for i in (0..n).rev() {
            out[i] = acc;
            acc = self.mul(acc, i as u64 % self.p);
        }
        out
    }

    /// `inv[i] = 1/i` for `1 <= i < n` (entry 0 is 0); requires `n <= p`.
    pub fn inverses(&self, n: usize) -> Vec<u64> {
        assert!(n as u64 <= self.p);
        let mut inv = vec![0u64; n];
        if n > 1 {
            inv[1] = 1;
        }
        for i in 2..n {
            let q = self.p / i as u64;
            let r = (self.p % i as u64) as usize;
            inv[i] = self.mul(self.p - q, inv[r]);
        }
        inv
    }
}

/// Number of products `< (p-1)^2` that can be added to a reduced `u64` accumulator
/// before it may overflow.
#[inline]
pub(crate) fn lazy_budget(p: u64) -> usize {
    let sq = (p - 1).saturating_mul(p - 1).max(1);
    (((u64::MAX - p) / sq) as usize).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(12007));
        assert!(PrimeField::new(2003).is_ok());
        assert_eq!(PrimeField::new(9), Err(Error::NotPrime(9)));
        assert_eq!(PrimeField::new(1), Err(Error::NotPrime(1)));
        assert!(PrimeField::new(2_147_483_647).is_ok());
        assert!(PrimeField::new((1 << 31) + 11).is_err());
    }

    #[test]
    fn inverses_and_factorials() {
        let f = PrimeField::new(13).unwrap();
        for a in 1..13 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        assert_eq!(f.try_inv(0), None);
        let inv = f.inverses(13);
        for i in 1..13 {
            assert_eq!(f.mul(i as u64, inv[i]), 1);
        }
        let fact = f.factorials(13);
        let ifact = f.inverse_factorials(13);
        for i in 0..13 {
            assert_eq!(f.mul(fact[i], ifact[i]), 1);
        }
        // Wilson
        assert_eq!(fact[12], 12);
    }

    #[test]
    fn budget_is_safe() {
        for p in [2u64, 3, 5, 12007, 2_147_483_629] {
            let b = lazy_budget(p) as u128;
            let worst = (p as u128 - 1) * (p as u128 - 1) * b + p as u128;
            assert!(worst <= u64::MAX as u128);
        }
    }
}
