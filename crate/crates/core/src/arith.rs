//! Multiplication kernels for dense coefficient vectors over `F_p`.
//!
//! Three strategies, selected by the length of the shorter operand:
//! schoolbook below [`KARATSUBA_THRESHOLD`], Karatsuba below
//! [`NTT_THRESHOLD`], and above that a number-theoretic transform over three
//! word-sized NTT primes followed by Garner reconstruction. The three-prime
//! route works for every `p < 2^31`, whether or not `F_p` has roots of unity.

use crate::field::lazy_budget;

pub const KARATSUBA_THRESHOLD: usize = 32;
pub const NTT_THRESHOLD: usize = 512;

const P1: u64 = 998_244_353;
const P2: u64 = 167_772_161;
const P3: u64 = 469_762_049;
const GEN: u64 = 3;

/// Longest supported transform (limited by the 2-adic valuation of `P1 - 1`).
const MAX_NTT_LEN: usize = 1 << 23;

#[inline]
fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % m;
        }
        a = a * a % m;
        e >>= 1;
    }
    acc
}

/// Product of `a` and `b` with coefficients reduced mod `p`.
pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let short = a.len().min(b.len());
    if short < KARATSUBA_THRESHOLD {
        mul_schoolbook(a, b, p)
    } else if short < NTT_THRESHOLD {
        mul_karatsuba(a, b, p)
    } else {
        mul_ntt(a, b, p)
    }
}

/// Product truncated to its first `n` coefficients.
pub fn mul_trunc(a: &[u64], b: &[u64], n: usize, p: u64) -> Vec<u64> {
    let a = &a[..a.len().min(n)];
    let b = &b[..b.len().min(n)];
    let mut out = mul(a, b, p);
    out.truncate(n);
    out
}

pub fn mul_schoolbook(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u64; a.len() + b.len() - 1];
    mul_acc_lazy(&mut acc, a, b, p);
    for v in acc.iter_mut() {
        *v %= p;
    }
    acc
}

/// `acc += a * b` where `acc` holds reduced values on entry and on exit
/// (except that the caller still has to apply a final `% p`).
fn mul_acc_lazy(acc: &mut [u64], a: &[u64], b: &[u64], p: u64) {
    let budget = lazy_budget(p);
    let mut pending = 0usize;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        if pending == budget {
            for v in acc[i..].iter_mut() {
                *v %= p;
            }
            pending = 0;
        }
        for (slot, &y) in acc[i..i + b.len()].iter_mut().zip(b) {
            *slot += x * y;
        }
        pending += 1;
    }
}

pub fn mul_karatsuba(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = karatsuba_rec(a, b, p);
    out.truncate(a.len() + b.len() - 1);
    out
}

fn karatsuba_rec(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (la, lb) = (a.len(), b.len());
    if la.min(lb) < KARATSUBA_THRESHOLD {
        return mul_schoolbook(a, b, p);
    }
    if la != lb {
        // Cut the longer operand into slices as long as the shorter one.
        let (long, short) = if la > lb { (a, b) } else { (b, a) };
        let mut out = vec![0u64; la + lb - 1];
        for (k, chunk) in long.chunks(short.len()).enumerate() {
            let part = karatsuba_rec(chunk, short, p);
            let off = k * short.len();
            for (i, v) in part.into_iter().enumerate() {
                out[off + i] = (out[off + i] + v) % p;
            }
        }
        return out;
    }
    let n = la;
    let h = n / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let z0 = karatsuba_rec(a0, b0, p);
    let z2 = karatsuba_rec(a1, b1, p);
    let sa = add_vec(a0, a1, p);
    let sb = add_vec(b0, b1, p);
    let z1 = karatsuba_rec(&sa, &sb, p);
    let mut out = vec![0u64; 2 * n - 1];
    for (i, &v) in z0.iter().enumerate() {
        out[i] = (out[i] + v) % p;
    }
    for (i, &v) in z2.iter().enumerate() {
        out[i + 2 * h] = (out[i + 2 * h] + v) % p;
    }
    for i in 0..z1.len() {
        let mid = z1[i] + 2 * p - z0.get(i).copied().unwrap_or(0) - z2.get(i).copied().unwrap_or(0);
        out[i + h] = (out[i + h] + mid) % p;
    }
    out
}

fn add_vec(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let s = a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0);
            if s >= p {
                s - p
            } else {
                s
            }
        })
        .collect()
}

fn ntt<const P: u64>(a: &mut [u64], invert: bool) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j ^= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut tw = Vec::with_capacity(n / 2);
    let mut len = 2;
    while len <= n {
        let mut w = pow_mod(GEN, (P - 1) / len as u64, P);
        if invert {
            w = pow_mod(w, P - 2, P);
        }
        let half = len / 2;
        tw.clear();
        let mut cur = 1u64;
        for _ in 0..half {
            tw.push(cur);
            cur = cur * w % P;
        }
        for block in a.chunks_exact_mut(len) {
            let (lo, hi) = block.split_at_mut(half);
            for ((u, v), &t) in lo.iter_mut().zip(hi.iter_mut()).zip(&tw) {
                let x = *u;
                let y = *v * t % P;
                let s = x + y;
                *u = if s >= P { s - P } else { s };
                *v = if x >= y { x - y } else { x + P - y };
            }
        }
        len <<= 1;
    }
    if invert {
        let inv_n = pow_mod(n as u64, P - 2, P);
        for v in a.iter_mut() {
            *v = *v * inv_n % P;
        }
    }
}

struct Garner {
    inv_p1_mod_p2: u64,
    inv_p1p2_mod_p3: u64,
    p1p2_mod_p: u64,
    p: u64,
}

impl Garner {
    fn new(p: u64) -> Self {
        Self {
            inv_p1_mod_p2: pow_mod(P1 % P2, P2 - 2, P2),
            inv_p1p2_mod_p3: pow_mod((P1 % P3) * (P2 % P3) % P3, P3 - 2, P3),
            p1p2_mod_p: ((P1 as u128 * P2 as u128) % p as u128) as u64,
            p,
        }
    }

    #[inline]
    fn combine(&self, r1: u64, r2: u64, r3: u64) -> u64 {
        let k1 = (r2 + P2 - r1 % P2) % P2 * self.inv_p1_mod_p2 % P2;
        // v < P1 * P2 < 2^58
        let v = r1 + P1 * k1;
        let k2 = (r3 + P3 - v % P3) % P3 * self.inv_p1p2_mod_p3 % P3;
        let p = self.p;
        ((v % p) + (self.p1p2_mod_p * (k2 % p)) % p) % p
    }
}

fn check_ntt_bounds(len: usize, terms: usize, p: u64) {
    assert!(len <= MAX_NTT_LEN, "transform length {len} exceeds 2^23");
    let bound = (terms as u128) * (p as u128 - 1) * (p as u128 - 1);
    assert!(bound < P1 as u128 * P2 as u128 * P3 as u128, "three-prime CRT range exceeded");
}

fn forward<const P: u64>(src: &[u64], size: usize) -> Vec<u64> {
    let mut buf = vec![0u64; size];
    for (d, &s) in buf.iter_mut().zip(src) {
        *d = s % P;
    }
    ntt::<P>(&mut buf, false);
    buf
}

fn convolve<const P: u64>(a: &[u64], b: &[u64], size: usize) -> Vec<u64> {
    let mut fa = forward::<P>(a, size);
    let fb = forward::<P>(b, size);
    for (x, &y) in fa.iter_mut().zip(&fb) {
        *x = *x * y % P;
    }
    ntt::<P>(&mut fa, true);
    fa
}

pub fn mul_ntt(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = a.len() + b.len() - 1;
    let size = n.next_power_of_two();
    check_ntt_bounds(size, a.len().min(b.len()), p);
    let c1 = convolve::<P1>(a, b, size);
    let c2 = convolve::<P2>(a, b, size);
    let c3 = convolve::<P3>(a, b, size);
    let g = Garner::new(p);
    (0..n).map(|i| g.combine(c1[i], c2[i], c3[i])).collect()
}

/// Matrix product `C = A * B` whose entries are polynomials over `F_p`,
/// every entry of `C` truncated to `out_len` coefficients.
///
/// `a` is `rows x inner` and `b` is `inner x cols`, both row-major. Large
/// entries are transformed once and multiplied pointwise in the transform
/// domain, so the cost is `O(r^2)` transforms plus `O(r^3)` pointwise work.
pub fn poly_matrix_mul(
    p: u64,
    rows: usize,
    inner: usize,
    cols: usize,
    a: &[Vec<u64>],
    b: &[Vec<u64>],
    out_len: usize,
) -> Vec<Vec<u64>> {
    assert_eq!(a.len(), rows * inner);
    assert_eq!(b.len(), inner * cols);
    let la = a.iter().map(|v| v.len().min(out_len)).max().unwrap_or(0);
    let lb = b.iter().map(|v| v.len().min(out_len)).max().unwrap_or(0);
    if la == 0 || lb == 0 || out_len == 0 {
        return vec![Vec::new(); rows * cols];
    }
    let need = (la + lb - 1).min(out_len);
    if la.min(lb) < 64 {
        let mut out = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let mut acc = vec![0u64; la + lb - 1];
                for l in 0..inner {
                    let x = &a[i * inner + l];
                    let y = &b[l * cols + j];
                    let x = &x[..x.len().min(need)];
                    let y = &y[..y.len().min(need)];
                    if x.is_empty() || y.is_empty() {
                        continue;
                    }
                    let prod = mul(x, y, p);
                    for (s, v) in acc.iter_mut().zip(prod) {
                        *s += v;
                        if *s >= p {
                            *s -= p;
                        }
                    }
                }
                acc.truncate(need);
                out.push(acc);
            }
        }
        return out;
    }
    let size = (la + lb - 1).next_power_of_two();
    check_ntt_bounds(size, la.min(lb) * inner, p);
    let r1 = matrix_convolve::<P1>(rows, inner, cols, a, b, size, need, out_len);
    let r2 = matrix_convolve::<P2>(rows, inner, cols, a, b, size, need, out_len);
    let r3 = matrix_convolve::<P3>(rows, inner, cols, a, b, size, need, out_len);
    let g = Garner::new(p);
    (0..rows * cols).map(|e| (0..need).map(|k| g.combine(r1[e][k], r2[e][k], r3[e][k])).collect()).collect()
}

#[allow(clippy::too_many_arguments)]
fn matrix_convolve<const P: u64>(
    rows: usize,
    inner: usize,
    cols: usize,
    a: &[Vec<u64>],
    b: &[Vec<u64>],
    size: usize,
    need: usize,
    out_len: usize,
) -> Vec<Vec<u64>> {
    let cut = |v: &Vec<u64>| -> Option<Vec<u64>> {
        let v = &v[..v.len().min(out_len)];
        if v.iter().all(|&c| c == 0) {
            None
        } else {
            Some(forward::<P>(v, size))
        }
    };
    let fa: Vec<Option<Vec<u64>>> = a.iter().map(cut).collect();
    let fb: Vec<Option<Vec<u64>>> = b.iter().map(cut).collect();
    let mut out = Vec::with_capacity(rows * cols);
    let mut acc = vec![0u64; size];
    for i in 0..rows {
        for j in 0..cols {
            acc.iter_mut().for_each(|v| *v = 0);
            let mut pending = 0;
            let mut any = false;
            for l in 0..inner {
                let (Some(x), Some(y)) = (&fa[i * inner + l], &fb[l * cols + j]) else {
                    continue;
                };
                any = true;
                // Residues are below 2^30, so sixteen products fit in a u64.
                if pending == 16 {
                    acc.iter_mut().for_each(|v| *v %= P);
                    pending = 0;
                }
                for ((s, &u), &v) in acc.iter_mut().zip(x).zip(y) {
                    *s += u * v;
                }
                pending += 1;
            }
            if !any {
                out.push(vec![0u64; need]);
                continue;
            }
            let mut res: Vec<u64> = acc.iter().map(|v| v % P).collect();
            ntt::<P>(&mut res, true);
            res.truncate(need);
            out.push(res);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
            }
        }
        out
    }

    fn random_vec(rng: &mut ChaCha8Rng, n: usize, p: u64) -> Vec<u64> {
        (0..n).map(|_| rng.gen_range(0..p)).collect()
    }

    #[test]
    fn strategies_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &p in &[2u64, 7, 12007, 2_147_483_629] {
            for &(la, lb) in &[(1, 1), (5, 40), (33, 33), (100, 77), (513, 600), (700, 3)] {
                let a = random_vec(&mut rng, la, p);
                let b = random_vec(&mut rng, lb, p);
                let want = naive(&a, &b, p);
                assert_eq!(mul_schoolbook(&a, &b, p), want, "schoolbook p={p} {la}x{lb}");
                assert_eq!(mul_karatsuba(&a, &b, p), want, "karatsuba p={p} {la}x{lb}");
                assert_eq!(mul_ntt(&a, &b, p), want, "ntt p={p} {la}x{lb}");
                assert_eq!(mul(&a, &b, p), want);
            }
        }
    }

    #[test]
    fn matrix_product_matches_entrywise() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = 12007;
        for &(len, out_len) in &[(10, 15), (200, 150), (300, 1000)] {
            let (r, k, c) = (2, 3, 2);
            let a: Vec<Vec<u64>> = (0..r * k).map(|_| random_vec(&mut rng, len, p)).collect();
            let mut b: Vec<Vec<u64>> = (0..k * c).map(|_| random_vec(&mut rng, len + 3, p)).collect();
            b[1] = vec![0; len];
            let got = poly_matrix_mul(p, r, k, c, &a, &b, out_len);
            for i in 0..r {
                for j in 0..c {
                    let mut want = vec![0u64; 2 * len + 2];
                    for l in 0..k {
                        for (t, v) in naive(&a[i * k + l], &b[l * c + j], p).into_iter().enumerate() {
                            want[t] = (want[t] + v) % p;
                        }
                    }
                    want.truncate(out_len);
                    assert_eq!(got[i * c + j], want);
                }
            }
        }
    }
}
