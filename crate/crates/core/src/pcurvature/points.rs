//! Choice of evaluation moduli: minimal polynomials of elements of `F_{p^m}`.

use std::collections::HashSet;

use crate::poly::Poly;
use crate::quot::{QuotElem, QuotRing, RingPoly};

/// Ben-Or irreducibility test.
pub fn is_irreducible(q: &Poly) -> bool {
    let Some(m) = q.degree() else { return false };
    if m == 0 {
        return false;
    }
    let p = q.modulus();
    let x = Poly::x(p).rem(q);
    let mut h = x.clone();
    for _ in 0..m / 2 {
        h = h.pow_mod(p, q);
        if !(&h - &x).gcd(q).is_one() {
            return false;
        }
    }
    true
}

fn digits(mut i: u64, p: u64, m: usize) -> Vec<u64> {
    (0..m)
        .map(|_| {
            let d = i % p;
            i /= p;
            d
        })
        .collect()
}

/// First monic irreducible polynomial of degree `m`, enumerating the lower
/// coefficients in base-`p` order.
pub fn first_irreducible(p: u64, m: usize) -> Poly {
    (0u64..)
        .map(|i| {
            let mut c = digits(i, p, m);
            c.push(1);
            Poly::from_coeffs(p, c)
        })
        .find(is_irreducible)
        .expect("irreducible polynomials exist in every degree")
}

/// Minimal polynomial over `F_p` of `e ∈ F_p[x]/Q`, from its Frobenius orbit.
fn minimal_polynomial(ring: &QuotRing, e: &QuotElem) -> Poly {
    let p = ring.p();
    let mut orbit = vec![e.clone()];
    loop {
        let next = ring.pow(orbit.last().unwrap(), p);
        if &next == e {
            break;
        }
        orbit.push(next);
    }
    let mut acc = RingPoly::from_elems(ring, &[ring.one()]);
    for r in &orbit {
        acc = acc.mul(&RingPoly::from_elems(ring, &[ring.neg(r), ring.one()]));
    }
    let coeffs = acc.coeffs().iter().map(|c| c.as_slice()[0]).collect();
    Poly::from_coeffs(p, coeffs)
}

/// Pairwise coprime separable moduli `S_i`, each coprime to `f`, with
/// `Σ deg S_i >= need`.
///
/// With `m` minimal such that `p^m >= need + deg f`, the elements of
/// `F_{p^m}` are visited in order and the minimal polynomial of each is kept
/// unless it was already produced or shares a factor with `f`.
pub fn generate_points(f: &Poly, need: usize) -> Vec<Poly> {
    assert!(!f.is_zero(), "the polynomial to avoid must be nonzero");
    let p = f.modulus();
    let target = (need + f.degree().unwrap_or(0)) as u128;
    let mut m = 1usize;
    while (p as u128).pow(m as u32) < target {
        m += 1;
    }
    let q = if m == 1 { Poly::x(p) } else { first_irreducible(p, m) };
    let ring = QuotRing::new(q).expect("monic nonconstant modulus");
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut total = 0;
    let mut i = 0u64;
    while total < need {
        let e = ring.from_poly(&Poly::from_coeffs(p, digits(i, p, m)));
        i += 1;
        let s = if m == 1 {
            Poly::from_coeffs(p, vec![(p - e.as_slice()[0]) % p, 1])
        } else {
            minimal_polynomial(&ring, &e)
        };
        if !s.gcd(f).is_one() || !seen.insert(s.coeffs().to_vec()) {
            continue;
        }
        total += s.len() - 1;
        out.push(s);
    }
    out
}
