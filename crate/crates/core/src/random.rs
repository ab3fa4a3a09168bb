//! Seeded random instances for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diff::{DiffOperator, DiffSystem};
use crate::error::Result;
use crate::field::PrimeField;
use crate::matrix::Matrix;
use crate::poly::Poly;

/// Dense polynomial of degree at most `d`.
pub fn random_poly(p: u64, d: usize, rng: &mut impl Rng) -> Poly {
    Poly::from_coeffs(p, (0..=d).map(|_| rng.gen_range(0..p)).collect())
}

/// Polynomial of degree exactly `d`.
pub fn random_poly_exact(p: u64, d: usize, rng: &mut impl Rng) -> Poly {
    let mut c: Vec<u64> = (0..=d).map(|_| rng.gen_range(0..p)).collect();
    c[d] = rng.gen_range(1..p);
    Poly::from_coeffs(p, c)
}

/// System with `deg f_A = d` and dense numerator entries of degree `<= d`.
pub fn random_system(p: u64, d: usize, r: usize, seed: u64) -> Result<DiffSystem> {
    PrimeField::new(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let den = random_poly_exact(p, d, &mut rng);
    let num = Matrix::from_fn(r, r, |_, _| random_poly(p, d, &mut rng));
    DiffSystem::new(den, num)
}

/// Operator of order `r` with `deg a_r = d` and the other `a_i` of degree `<= d`.
pub fn random_operator(p: u64, d: usize, r: usize, seed: u64) -> Result<DiffOperator> {
    PrimeField::new(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs: Vec<Poly> = (0..r).map(|_| random_poly(p, d, &mut rng)).collect();
    coeffs.push(random_poly_exact(p, d, &mut rng));
    DiffOperator::new(coeffs)
}
