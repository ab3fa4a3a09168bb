//! Reconstruction of `B = f^p A_p` from its residues modulo the `S_i^p`.
//!
//! Over `F_p`, `S(x)^p = S(x^p)` and `f^p = f(x^p)`, so writing a residue as
//! `R = Σ_j R_j(x^p) x^j` turns the reconstruction into `p` independent
//! Chinese remainder problems modulo the `S_i` themselves:
//! `B_j ≡ f R_{i,j} mod S_i`, then `B = Σ_j B_j(x^p) x^j`.

use rayon::prelude::*;

use crate::diff::{DiffSystem, PCurvature};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::toolkit::CrtBasis;

/// Precomputed reconstruction data for fixed moduli and multiplier `f`.
#[derive(Clone, Debug)]
pub struct StrandCrt {
    p: u64,
    moduli: Vec<Vec<u64>>,
    /// `u_i (f mod S_i) mod S_i`, with `u_i` the inverse of the cofactor.
    weights: Vec<Vec<u64>>,
    cofactors: Vec<Vec<u64>>,
    /// Strands of the result have degree at most `d`.
    d: usize,
}

fn mulmod_small(f: PrimeField, a: &[u64], b: &[u64], s: &[u64]) -> Vec<u64> {
    let m = s.len() - 1;
    if a.is_empty() || b.is_empty() {
        return vec![0; m];
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = f.add(prod[i + j], f.mul(x, y));
        }
    }
    // s is monic
    for k in (m..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        for t in 0..m {
            prod[k - m + t] = f.sub(prod[k - m + t], f.mul(c, s[t]));
        }
        prod[k] = 0;
    }
    prod.truncate(m);
    prod.resize(m, 0);
    prod
}

impl StrandCrt {
    /// Errors with `InsufficientModuli` when `Σ deg S_i < d + 1`.
    pub fn new(moduli: &[Poly], f: &Poly, d: usize) -> Result<Self> {
        let got: usize = moduli.iter().map(|s| s.degree().unwrap_or(0)).sum();
        if got < d + 1 {
            return Err(Error::InsufficientModuli { needed: d + 1, got });
        }
        let basis = CrtBasis::new(moduli)?;
        let mut weights = Vec::with_capacity(moduli.len());
        let mut cofactors = Vec::with_capacity(moduli.len());
        for s in moduli {
            let c = basis.product().div_exact(s).expect("modulus divides the product");
            let u = c.inv_mod(s).map_err(|_| Error::NotCoprime)?;
            weights.push((&u * &f.rem(s)).rem(s).coeffs().to_vec());
            cofactors.push(c.into_coeffs());
        }
        Ok(Self { p: f.modulus(), moduli: moduli.iter().map(|s| s.coeffs().to_vec()).collect(), weights, cofactors, d })
    }

    /// `B` with `B ≡ f^p R_i mod S_i^p`; `Internal` if some strand exceeds the
    /// degree bound, which means the residues are inconsistent.
    pub fn combine(&self, residues: &[&Poly]) -> Result<Poly> {
        let f = PrimeField::new_unchecked(self.p);
        let p = self.p as usize;
        let total: usize = self.moduli.iter().map(|s| s.len() - 1).sum();
        let mut out = vec![0u64; p * total];
        for j in 0..p {
            let mut acc = vec![0u64; total];
            for (i, r) in residues.iter().enumerate() {
                let m = self.moduli[i].len() - 1;
                let rc = r.coeffs();
                let strand: Vec<u64> = (0..m).map(|k| rc.get(j + p * k).copied().unwrap_or(0)).collect();
                let t = mulmod_small(f, &strand, &self.weights[i], &self.moduli[i]);
                for (a, &x) in t.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (b, &y) in self.cofactors[i].iter().enumerate() {
                        acc[a + b] = f.add(acc[a + b], f.mul(x, y));
                    }
                }
            }
            if let Some(k) = acc.iter().rposition(|&c| c != 0) {
                if k > self.d {
                    return Err(Error::Internal(format!(
                        "reconstructed strand {j} has degree {k} above the bound {}",
                        self.d
                    )));
                }
            }
            for (k, &c) in acc.iter().enumerate() {
                if c != 0 {
                    out[j + p * k] = c;
                }
            }
        }
        Ok(Poly::from_coeffs(self.p, out))
    }
}

/// Splits `g` into the strands `g_j` with `g = Σ_j g_j(x^p) x^j`.
pub fn split_strands(g: &Poly, p: usize) -> Vec<Poly> {
    (0..p).map(|j| Poly::from_coeffs(g.modulus(), g.coeffs().iter().skip(j).step_by(p).copied().collect())).collect()
}

/// Inverse of [`split_strands`].
pub fn join_strands(strands: &[Poly]) -> Poly {
    let p = strands.len();
    let modulus = strands.first().map_or(2, Poly::modulus);
    let len = strands.iter().map(|s| s.len()).max().unwrap_or(0) * p;
    let mut out = vec![0u64; len];
    for (j, s) in strands.iter().enumerate() {
        for (k, &c) in s.coeffs().iter().enumerate() {
            out[j + p * k] = c;
        }
    }
    Poly::from_coeffs(modulus, out)
}

/// Reconstructs each entry from its residues, in parallel on the current pool.
pub fn glue_entries(moduli: &[Poly], residues: &[Vec<Poly>], f: &Poly, d: usize) -> Result<Vec<Poly>> {
    if residues.len() != moduli.len() {
        return Err(Error::DimensionMismatch(format!("{} residue sets for {} moduli", residues.len(), moduli.len())));
    }
    let n = residues.first().map_or(0, Vec::len);
    if residues.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("residue sets differ in size".into()));
    }
    let crt = StrandCrt::new(moduli, f, d)?;
    (0..n)
        .into_par_iter()
        .map(|e| {
            let rs: Vec<&Poly> = residues.iter().map(|r| &r[e]).collect();
            crt.combine(&rs)
        })
        .collect()
}

/// `A_p` from the local p-curvatures `A_p mod S_i^p`.
pub fn glue(residues: &[(Poly, Matrix<Poly>)], sys: &DiffSystem) -> Result<PCurvature> {
    let r = sys.dim();
    let moduli: Vec<Poly> = residues.iter().map(|(s, _)| s.clone()).collect();
    if residues.iter().any(|(_, m)| m.rows() != r || m.cols() != r) {
        return Err(Error::DimensionMismatch("local p-curvature has the wrong shape".into()));
    }
    let flat: Vec<Vec<Poly>> = residues.iter().map(|(_, m)| m.entries().to_vec()).collect();
    let entries = glue_entries(&moduli, &flat, sys.denominator(), sys.degree())?;
    let p = sys.p();
    Ok(PCurvature { p, b: Matrix::from_vec(r, r, entries)?, denom: sys.denominator().inflate(p as usize) })
}
