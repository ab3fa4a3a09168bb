//! Polynomial routines over `ℓ`: Taylor shifts, falling-factorial
//! conversion, multipoint evaluation, and Chinese remaindering over `F_p[x]`.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::quot::{QuotElem, QuotRing, RingPoly};

const HORNER_SHIFT_CUTOFF: usize = 16;
const HORNER_EVAL_CUTOFF: usize = 16;
const SCHOOLBOOK_DIV_CUTOFF: usize = 32;

/// `f(t + a) mod t^trunc`.
pub fn taylor_shift(f: &RingPoly, a: &QuotElem, trunc: usize) -> RingPoly {
    let ring = f.ring();
    let f = f.truncate(f.len()).trimmed();
    if f.is_empty() || trunc == 0 {
        return RingPoly::from_flat(ring, vec![0; trunc * ring.degree()]);
    }
    let mut out = shift_rec(&f, a, trunc);
    let mut data = std::mem::replace(&mut out, RingPoly::zero(ring)).into_flat();
    data.resize(trunc * ring.degree(), 0);
    RingPoly::from_flat(ring, data)
}

fn shift_rec(f: &RingPoly, a: &QuotElem, trunc: usize) -> RingPoly {
    let ring = f.ring();
    let n = f.len();
    if n <= HORNER_SHIFT_CUTOFF {
        return shift_horner(f, a, trunc);
    }
    if n <= ring.p() as usize {
        return shift_convolution(f, a, trunc);
    }
    let h = n / 2;
    let lo = f.truncate(h);
    let hi = RingPoly::from_flat(ring, f.flat()[h * ring.degree()..].to_vec());
    let slo = shift_rec(&lo, a, trunc);
    let shi = shift_rec(&hi, a, trunc);
    let lin = RingPoly::from_elems(ring, &[a.clone(), ring.one()]);
    let pw = pow_trunc(&lin, h, trunc);
    slo.add(&pw.mul_trunc(&shi, trunc))
}

fn pow_trunc(f: &RingPoly, mut e: usize, trunc: usize) -> RingPoly {
    let ring = f.ring();
    let mut acc = RingPoly::from_elems(ring, &[ring.one()]);
    let mut base = f.truncate(trunc);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul_trunc(&base, trunc);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul_trunc(&base, trunc);
        }
    }
    acc
}

fn shift_horner(f: &RingPoly, a: &QuotElem, trunc: usize) -> RingPoly {
    let ring = f.ring();
    let m = ring.degree();
    let n = f.len();
    let len = n.min(trunc);
    let mut acc = vec![0u64; len * m];
    let mut tmp = vec![0u64; m];
    for i in (0..n).rev() {
        // acc <- acc * (t + a) + f_i, truncated to len
        for k in (0..len).rev() {
            ring.mul_into(&acc[k * m..(k + 1) * m], a.as_slice(), &mut tmp);
            if k > 0 {
                let (lo, hi) = acc.split_at_mut(k * m);
                let prev = &lo[(k - 1) * m..];
                for j in 0..m {
                    hi[j] = ring.field().add(tmp[j], prev[j]);
                }
            } else {
                acc[..m].copy_from_slice(&tmp);
            }
        }
        let fi = &f.flat()[i * m..(i + 1) * m];
        ring.flat_add_assign(&mut acc[..m], fi);
    }
    RingPoly::from_flat(ring, acc)
}

/// `g_k = (1/k!) Σ_i (f_i i!) a^{i-k}/(i-k)!`, one product of length `n <= p`.
fn shift_convolution(f: &RingPoly, a: &QuotElem, trunc: usize) -> RingPoly {
    let ring = f.ring();
    let fld = ring.field();
    let m = ring.degree();
    let n = f.len();
    let fact = fld.factorials(n);
    let ifact = fld.inverse_factorials(n);
    let mut u = vec![0u64; n * m];
    for i in 0..n {
        let src = &f.flat()[i * m..(i + 1) * m];
        let dst = &mut u[(n - 1 - i) * m..(n - i) * m];
        for j in 0..m {
            dst[j] = fld.mul(src[j], fact[i]);
        }
    }
    let mut v = vec![0u64; n * m];
    let mut pw = ring.one();
    for j in 0..n {
        let e = ring.scale(&pw, ifact[j]);
        v[j * m..(j + 1) * m].copy_from_slice(e.as_slice());
        pw = ring.mul(&pw, a);
    }
    let w = ring.poly_mul_trunc(&u, &v, n);
    let len = n.min(trunc);
    let mut out = vec![0u64; len * m];
    for k in 0..len {
        let src = &w[(n - 1 - k) * m..(n - k) * m];
        for j in 0..m {
            out[k * m + j] = fld.mul(src[j], ifact[k]);
        }
    }
    RingPoly::from_flat(ring, out)
}

/// Monomial expansion of `Σ c_j x(x-1)⋯(x-j+1)`, by divide and conquer.
pub fn from_falling_factorial(ring: &QuotRing, c: &[QuotElem]) -> Result<RingPoly> {
    if c.len() >= ring.p() as usize {
        return Err(Error::UnsupportedDegree(format!(
            "falling factorial expansion of length {} needs length < p = {}",
            c.len(),
            ring.p()
        )));
    }
    if c.is_empty() {
        return Ok(RingPoly::zero(ring));
    }
    Ok(ff_rec(ring, c, 0).0)
}

/// Returns `(Σ_{j} c_j Π_{i<j} (x - lo - i), Π_{i<len} (x - lo - i))`.
fn ff_rec(ring: &QuotRing, c: &[QuotElem], lo: usize) -> (RingPoly, RingPoly) {
    let p = ring.p();
    if c.len() == 1 {
        let root = ring.scalar((p - (lo as u64 % p)) % p);
        return (RingPoly::from_elems(ring, &[c[0].clone()]), RingPoly::from_elems(ring, &[root, ring.one()]));
    }
    let h = c.len() / 2;
    let (pl, ql) = ff_rec(ring, &c[..h], lo);
    let (pr, qr) = ff_rec(ring, &c[h..], lo + h);
    (pl.add(&ql.mul(&pr)), ql.mul(&qr))
}

/// Values of `f` at every point, by remainder trees over chunks of points.
pub fn multipoint_eval(f: &RingPoly, points: &[QuotElem]) -> Vec<QuotElem> {
    let ring = f.ring();
    let f = f.clone().trimmed();
    if f.len() <= HORNER_EVAL_CUTOFF || points.len() <= 4 {
        return points.iter().map(|x| f.eval(x)).collect();
    }
    let chunk = f.len().next_power_of_two();
    let mut out = Vec::with_capacity(points.len());
    for pts in points.chunks(chunk) {
        let tree = SubproductTree::new(ring, pts);
        let r = rem_monic(&f, tree.root());
        tree.descend(&r, &mut out);
    }
    out
}

struct SubproductTree {
    /// `levels[0]` holds the linear factors, the last level the root.
    levels: Vec<Vec<RingPoly>>,
}

impl SubproductTree {
    fn new(ring: &QuotRing, pts: &[QuotElem]) -> Self {
        let leaves: Vec<RingPoly> =
            pts.iter().map(|x| RingPoly::from_elems(ring, &[ring.neg(x), ring.one()])).collect();
        let mut levels = vec![leaves];
        while levels.last().unwrap().len() > 1 {
            let prev = levels.last().unwrap();
            let next = prev.chunks(2).map(|w| if w.len() == 2 { w[0].mul(&w[1]) } else { w[0].clone() }).collect();
            levels.push(next);
        }
        Self { levels }
    }

    fn root(&self) -> &RingPoly {
        &self.levels.last().unwrap()[0]
    }

    fn descend(&self, r: &RingPoly, out: &mut Vec<QuotElem>) {
        let mut rems = vec![r.clone()];
        for lvl in (0..self.levels.len() - 1).rev() {
            let nodes = &self.levels[lvl];
            let mut next = Vec::with_capacity(nodes.len());
            for (k, rem) in rems.iter().enumerate() {
                for node in nodes.iter().skip(2 * k).take(2) {
                    next.push(rem_monic(rem, node));
                }
            }
            rems = next;
        }
        out.extend(rems.iter().map(|r| r.coeff(0)));
    }
}

/// `f mod g` for a monic `g` over `ℓ`.
pub(crate) fn rem_monic(f: &RingPoly, g: &RingPoly) -> RingPoly {
    let ring = f.ring();
    let m = ring.degree();
    let g = g.clone().trimmed();
    let dg = g.len() - 1;
    let f = f.clone().trimmed();
    if f.len() <= dg {
        return f;
    }
    if dg < SCHOOLBOOK_DIV_CUTOFF || f.len() - dg < SCHOOLBOOK_DIV_CUTOFF {
        let mut r = f.into_flat();
        let gd = g.flat();
        let mut tmp = vec![0u64; m];
        let n = r.len() / m;
        for k in (dg..n).rev() {
            let c = r[k * m..(k + 1) * m].to_vec();
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            for j in 0..dg {
                ring.mul_into(&c, &gd[j * m..(j + 1) * m], &mut tmp);
                let idx = (k - dg + j) * m;
                ring.flat_sub_assign(&mut r[idx..idx + m], &tmp);
            }
            r[k * m..(k + 1) * m].fill(0);
        }
        r.truncate(dg * m);
        return RingPoly::from_flat(ring, r);
    }
    let k = f.len() - dg;
    let rev = |p: &RingPoly| -> Vec<u64> {
        let mut v = Vec::with_capacity(p.flat().len());
        for c in p.flat().chunks(m).rev() {
            v.extend_from_slice(c);
        }
        v
    };
    let inv = series_inverse_flat(ring, &rev(&g), k);
    let mut q = ring.poly_mul_trunc(&rev(&f), &inv, k);
    let mut qr = Vec::with_capacity(q.len());
    for c in q.chunks(m).rev() {
        qr.extend_from_slice(c);
    }
    q = qr;
    let prod = ring.poly_mul_trunc(&q, g.flat(), dg);
    let mut r = f.flat()[..dg * m].to_vec();
    ring.flat_sub_assign(&mut r, &prod);
    RingPoly::from_flat(ring, r)
}

/// First `n` coefficients of `1/h` where `h(0) = 1`.
fn series_inverse_flat(ring: &QuotRing, h: &[u64], n: usize) -> Vec<u64> {
    let m = ring.degree();
    let mut g = ring.one().as_slice().to_vec();
    let mut k = 1;
    while k < n {
        let k2 = (2 * k).min(n);
        let e = ring.poly_mul_trunc(h, &g, k2);
        let mut corr: Vec<u64> = e.iter().map(|&c| ring.field().neg(c)).collect();
        corr[0] = ring.field().add(corr[0], 2);
        g = ring.poly_mul_trunc(&g, &corr, k2);
        k = k2;
    }
    g.truncate(n * m);
    g
}

/// `x^p mod S`.
pub fn frobenius_power(s: &Poly) -> Poly {
    Poly::x(s.modulus()).pow_mod(s.modulus(), s)
}

/// Precomputed data for Chinese remaindering modulo pairwise coprime `S_i`.
#[derive(Clone, Debug)]
pub struct CrtBasis {
    moduli: Vec<Poly>,
    cofactors: Vec<Poly>,
    inverses: Vec<Poly>,
    product: Poly,
}

impl CrtBasis {
    pub fn new(moduli: &[Poly]) -> Result<Self> {
        let p = moduli.first().ok_or_else(|| Error::InvalidInput("no moduli".into()))?.modulus();
        if moduli.iter().any(|s| s.degree().unwrap_or(0) == 0 || s.modulus() != p) {
            return Err(Error::InvalidModulus("CRT moduli must be nonconstant and over one field".into()));
        }
        let product = moduli.iter().fold(Poly::one(p), |acc, s| &acc * s);
        let mut cofactors = Vec::with_capacity(moduli.len());
        let mut inverses = Vec::with_capacity(moduli.len());
        for s in moduli {
            let c = product.div_exact(s).expect("modulus divides the product");
            let u = c.inv_mod(s).map_err(|_| Error::NotCoprime)?;
            cofactors.push(c);
            inverses.push(u);
        }
        Ok(Self { moduli: moduli.to_vec(), cofactors, inverses, product })
    }

    pub fn moduli(&self) -> &[Poly] {
        &self.moduli
    }

    pub fn product(&self) -> &Poly {
        &self.product
    }

    /// The unique `R` with `deg R < Σ deg S_i` and `R ≡ residues[i] mod S_i`.
    pub fn combine(&self, residues: &[Poly]) -> Result<Poly> {
        if residues.len() != self.moduli.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} residues for {} moduli",
                residues.len(),
                self.moduli.len()
            )));
        }
        if self.moduli.len() == 1 {
            return Ok(residues[0].rem(&self.moduli[0]));
        }
        let p = self.product.modulus();
        let mut acc = Poly::zero(p);
        for ((r, s), (c, u)) in residues.iter().zip(&self.moduli).zip(self.cofactors.iter().zip(&self.inverses)) {
            let t = (r * u).rem(s);
            acc = &acc + &(&t * c);
        }
        Ok(acc)
    }
}

/// One-shot Chinese remaindering.
pub fn crt_combine(residues: &[Poly], moduli: &[Poly]) -> Result<Poly> {
    CrtBasis::new(moduli)?.combine(residues)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(p: u64) -> QuotRing {
        QuotRing::prime_field(p).unwrap()
    }

    fn rp(ring: &QuotRing, c: &[u64]) -> RingPoly {
        RingPoly::from_elems(ring, &c.iter().map(|&x| ring.scalar(x)).collect::<Vec<_>>())
    }

    #[test]
    fn shift_examples() {
        let r = fp(5);
        let f = rp(&r, &[0, 0, 1]);
        assert_eq!(taylor_shift(&f, &r.scalar(2), 5), rp(&r, &[4, 4, 1, 0, 0]));
        assert_eq!(taylor_shift(&f, &r.zero(), 2), rp(&r, &[0, 0]));
    }

    #[test]
    fn shift_paths_agree() {
        // long input (> p) over an extension ring exercises all three paths
        let ell = QuotRing::new(Poly::from_i64(7, &[3, 0, 1])).unwrap();
        let a = ell.from_poly(&Poly::from_i64(7, &[2, 5]));
        let c: Vec<QuotElem> =
            (0..40u64).map(|i| ell.from_poly(&Poly::from_coeffs(7, vec![i % 7, (i * 3 + 1) % 7]))).collect();
        let f = RingPoly::from_elems(&ell, &c);
        let naive = shift_horner(&f, &a, 30);
        assert_eq!(taylor_shift(&f, &a, 30), naive);
        let short = f.truncate(7);
        assert_eq!(shift_convolution(&short, &a, 5), shift_horner(&short, &a, 5));
    }

    #[test]
    fn falling_factorial_examples() {
        let r = fp(7);
        assert_eq!(from_falling_factorial(&r, &[r.zero(), r.zero(), r.one()]).unwrap().trimmed(), rp(&r, &[0, 6, 1]));
        assert_eq!(from_falling_factorial(&r, &[r.scalar(5)]).unwrap(), rp(&r, &[5]));
        assert!(from_falling_factorial(&r, &vec![r.one(); 7]).is_err());
    }

    #[test]
    fn falling_factorial_matches_naive_expansion() {
        use rand::{Rng, SeedableRng};
        let r = fp(13);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        let c: Vec<u64> = (0..6).map(|_| rng.gen_range(0..13)).collect();
        let mut expected = Poly::zero(13);
        let mut ff = Poly::one(13);
        for (j, &cj) in c.iter().enumerate() {
            expected = &expected + &ff.scale(cj);
            ff = &ff * &Poly::from_i64(13, &[-(j as i64), 1]);
        }
        let got = from_falling_factorial(&r, &c.iter().map(|&x| r.scalar(x)).collect::<Vec<_>>()).unwrap();
        assert_eq!(got.trimmed(), RingPoly::from_fp(&r, &expected));
    }

    #[test]
    fn multipoint_examples() {
        let r = fp(7);
        let pts: Vec<QuotElem> = (0..3).map(|i| r.scalar(i)).collect();
        let vals = multipoint_eval(&rp(&r, &[0, 0, 1]), &pts);
        assert_eq!(vals, vec![r.zero(), r.one(), r.scalar(4)]);
        assert_eq!(multipoint_eval(&rp(&r, &[3]), &pts), vec![r.scalar(3); 3]);
    }

    #[test]
    fn multipoint_matches_horner() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(50);
        let r = fp(101);
        let f = rp(&r, &(0..51).map(|_| rng.gen_range(0..101)).collect::<Vec<_>>());
        let pts: Vec<QuotElem> = (0..100).map(|_| r.scalar(rng.gen_range(0..101))).collect();
        let horner: Vec<QuotElem> = pts.iter().map(|x| f.eval(x)).collect();
        assert_eq!(multipoint_eval(&f, &pts), horner);

        let ell = QuotRing::new(Poly::from_i64(101, &[7, 3, 1])).unwrap();
        let c: Vec<QuotElem> = (0..80)
            .map(|_| ell.from_poly(&Poly::from_coeffs(101, vec![rng.gen_range(0..101), rng.gen_range(0..101)])))
            .collect();
        let f = RingPoly::from_elems(&ell, &c);
        let pts: Vec<QuotElem> = (0..200).map(|i| ell.scalar(i)).collect();
        let horner: Vec<QuotElem> = pts.iter().map(|x| f.eval(x)).collect();
        assert_eq!(multipoint_eval(&f, &pts), horner);
    }

    #[test]
    fn crt_examples() {
        let m = [Poly::x(5), Poly::from_i64(5, &[-1, 1])];
        let r = crt_combine(&[Poly::constant(5, 1), Poly::constant(5, 2)], &m).unwrap();
        assert_eq!(r, Poly::from_i64(5, &[1, 1]));
        let single = crt_combine(&[Poly::from_i64(5, &[3, 1])], &[Poly::from_i64(5, &[1, 0, 1])]).unwrap();
        assert_eq!(single, Poly::from_i64(5, &[3, 1]));
        let bad = [Poly::from_i64(5, &[-1, 0, 1]), Poly::from_i64(5, &[-1, 1])];
        assert_eq!(CrtBasis::new(&bad).unwrap_err(), Error::NotCoprime);
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(frobenius_power(&Poly::from_i64(5, &[-2, 1])), Poly::constant(5, 2));
        assert_eq!(frobenius_power(&Poly::from_i64(5, &[-2, 0, 1])), Poly::from_i64(5, &[0, 4]));
        let s = Poly::from_i64(13, &[3, 1, 4, 1, 5, 1]);
        assert_eq!(frobenius_power(&s), Poly::monomial(13, 1, 13).rem(&s));
    }

    fn arb_ring_poly(r: QuotRing, n: usize) -> impl Strategy<Value = RingPoly> {
        let p = r.p();
        prop::collection::vec(0..p, 1..n).prop_map(move |v| rp(&r, &v))
    }

    proptest! {
        #[test]
        fn shift_is_multiplicative(f in arb_ring_poly(fp(11), 30), g in arb_ring_poly(fp(11), 30), a in 0u64..11) {
            let r = fp(11);
            let a = r.scalar(a);
            let lhs = taylor_shift(&f.mul(&g), &a, 9);
            let rhs = taylor_shift(&f, &a, 9).mul_trunc(&taylor_shift(&g, &a, 9), 9);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn shift_round_trip(f in arb_ring_poly(fp(11), 10), a in 0u64..11) {
            let r = fp(11);
            let a = r.scalar(a);
            let back = taylor_shift(&taylor_shift(&f, &a, 10), &r.neg(&a), 10);
            prop_assert_eq!(back, taylor_shift(&f, &r.zero(), 10));
        }

        #[test]
        fn falling_factorial_inverts_naive_conversion(v in prop::collection::vec(0u64..13, 1..12)) {
            // monomial -> falling-factorial coefficients via Newton forward differences
            let r = fp(13);
            let f = Poly::from_coeffs(13, v);
            let n = f.len().max(1);
            let mut vals: Vec<u64> = (0..n as u64).map(|x| f.eval(x)).collect();
            let fld = r.field();
            let ifact = fld.inverse_factorials(n);
            let mut c = Vec::with_capacity(n);
            for j in 0..n {
                c.push(r.scalar(fld.mul(vals[0], ifact[j])));
                for k in 0..vals.len() - 1 {
                    vals[k] = fld.sub(vals[k + 1], vals[k]);
                }
                vals.pop();
            }
            let back = from_falling_factorial(&r, &c).unwrap().trimmed();
            prop_assert_eq!(back, RingPoly::from_fp(&r, &f));
        }

        #[test]
        fn crt_round_trip(seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let moduli = [Poly::from_i64(7, &[-1, 1]), Poly::from_i64(7, &[1, 0, 1]), Poly::from_i64(7, &[-3, 1])];
            let residues: Vec<Poly> = moduli
                .iter()
                .map(|s| Poly::from_coeffs(7, (0..s.len() - 1).map(|_| rng.gen_range(0..7)).collect()))
                .collect();
            let r = crt_combine(&residues, &moduli).unwrap();
            prop_assert!(r.len() <= 4);
            for (res, s) in residues.iter().zip(&moduli) {
                prop_assert_eq!(&r.rem(s), res);
            }
        }
    }
}
