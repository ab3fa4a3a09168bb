//! Differential systems `Y' = A Y` and operators `L = Σ a_i ∂^i` over
//! `F_p(x)`, the Katz recurrence, and helpers around the p-curvature matrix.

use crate::error::{Error, Result};
use crate::field::{lazy_budget, PrimeField};
use crate::matrix::Matrix;
use crate::poly::Poly;

/// `Y' = (1/f_A) Ã Y` with `Ã` an `r x r` polynomial matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffSystem {
    p: u64,
    denominator: Poly,
    numerator: Matrix<Poly>,
}

impl DiffSystem {
    pub fn new(denominator: Poly, numerator: Matrix<Poly>) -> Result<Self> {
        let p = denominator.modulus();
        PrimeField::new(p)?;
        if denominator.is_zero() {
            return Err(Error::InvalidInput("the denominator f_A is zero".into()));
        }
        if !numerator.is_square() || numerator.rows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "numerator must be square and nonempty, got {}x{}",
                numerator.rows(),
                numerator.cols()
            )));
        }
        if numerator.entries().iter().any(|e| e.modulus() != p) {
            return Err(Error::RingMismatch);
        }
        Ok(Self { p, denominator, numerator })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Dimension `r`.
    pub fn dim(&self) -> usize {
        self.numerator.rows()
    }

    /// `f_A`.
    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }

    /// `Ã`.
    pub fn numerator(&self) -> &Matrix<Poly> {
        &self.numerator
    }

    /// `max(deg f_A, deg Ã_ij)`.
    pub fn degree(&self) -> usize {
        self.numerator
            .entries()
            .iter()
            .chain(std::iter::once(&self.denominator))
            .filter_map(Poly::degree)
            .max()
            .unwrap_or(0)
    }
}

/// `L = a_r ∂^r + ⋯ + a_1 ∂ + a_0` with `a_r ≠ 0` and `r >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperator {
    p: u64,
    coeffs: Vec<Poly>,
}

impl DiffOperator {
    /// `coeffs[i]` is `a_i`.
    pub fn new(coeffs: Vec<Poly>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidInput("an operator needs order at least 1".into()));
        }
        let p = coeffs[0].modulus();
        PrimeField::new(p)?;
        if coeffs.iter().any(|c| c.modulus() != p) {
            return Err(Error::RingMismatch);
        }
        if coeffs.last().unwrap().is_zero() {
            return Err(Error::InvalidInput("leading coefficient a_r is zero".into()));
        }
        Ok(Self { p, coeffs })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn leading(&self) -> &Poly {
        self.coeffs.last().unwrap()
    }

    /// `max deg a_i`.
    pub fn degree(&self) -> usize {
        self.coeffs.iter().filter_map(Poly::degree).max().unwrap_or(0)
    }
}

/// The p-curvature matrix `A_p = B / denom` with `denom = f_A^p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PCurvature {
    pub p: u64,
    pub b: Matrix<Poly>,
    pub denom: Poly,
}

impl PCurvature {
    pub fn dim(&self) -> usize {
        self.b.rows()
    }

    /// Largest entry degree of `B` (`None` when `B = 0`).
    pub fn max_degree(&self) -> Option<usize> {
        self.b.entries().iter().filter_map(Poly::degree).max()
    }

    /// Whether every entry of `B` has degree at most `d p`.
    pub fn satisfies_degree_bound(&self, d: usize) -> bool {
        self.max_degree().is_none_or(|k| k <= d * self.p as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.b.entries().iter().all(Poly::is_zero)
    }

    /// `-ᵗA_p`, the p-curvature of the adjoint system.
    pub fn neg_transpose(&self) -> Self {
        Self { p: self.p, b: self.b.transpose().map(|e| -e), denom: self.denom.clone() }
    }
}

/// Companion matrix of `L` as `(numerators, a_r)`: ones (here `a_r`) on the
/// subdiagonal and `-a_i` in the last column.
pub fn companion_matrix(op: &DiffOperator) -> (Matrix<Poly>, Poly) {
    let r = op.order();
    let p = op.p;
    let ar = op.leading().clone();
    let m = Matrix::from_fn(r, r, |i, j| {
        if j == r - 1 {
            -&op.coeffs[i]
        } else if i == j + 1 {
            ar.clone()
        } else {
            Poly::zero(p)
        }
    });
    (m, ar)
}

/// The system `X' = ᵗC X` attached to `L`, with `f_A = a_r`.
pub fn operator_to_system(op: &DiffOperator) -> DiffSystem {
    let (c, ar) = companion_matrix(op);
    DiffSystem::new(ar, c.transpose()).expect("companion data is valid")
}

/// Accumulates sums of products of short and long coefficient vectors in
/// `u64`, reducing only when the overflow budget runs out.
struct LazyAcc {
    p: u64,
    acc: Vec<u64>,
    pending: usize,
    budget: usize,
}

impl LazyAcc {
    fn new(p: u64, len: usize) -> Self {
        Self { p, acc: vec![0; len], pending: 0, budget: lazy_budget(p) }
    }

    fn add_mul(&mut self, small: &[u64], big: &[u64]) {
        if small.is_empty() || big.is_empty() {
            return;
        }
        if self.pending + small.len() > self.budget {
            self.reduce();
        }
        self.pending += small.len();
        for (i, &s) in small.iter().enumerate() {
            if s == 0 {
                continue;
            }
            for (a, &b) in self.acc[i..].iter_mut().zip(big) {
                *a += s * b;
            }
        }
    }

    fn reduce(&mut self) {
        for a in &mut self.acc {
            *a %= self.p;
        }
        self.pending = 0;
    }

    fn finish(mut self) -> Vec<u64> {
        self.reduce();
        self.acc
    }
}

/// `A_p` by the fraction-free Katz recurrence on `N_i = f_A^i A_i`:
/// `N_1 = -Ã`, `N_{i+1} = f_A N_i' - i f_A' N_i - Ã N_i`.
pub fn katz_pcurvature(sys: &DiffSystem) -> PCurvature {
    let p = sys.p;
    let f = PrimeField::new_unchecked(p);
    let r = sys.dim();
    let d = sys.degree();
    let fa = sys.denominator.coeffs().to_vec();
    let dfa = sys.denominator.derivative();
    let neg_a: Vec<Vec<u64>> = sys.numerator.entries().iter().map(|e| (-e).into_coeffs()).collect();
    let mut n: Vec<Vec<u64>> = neg_a.clone();
    for i in 1..p {
        let len = (i as usize + 1) * d + 1;
        let ci = f.neg(i % p);
        let neg_i_dfa: Vec<u64> = dfa.coeffs().iter().map(|&c| f.mul(c, ci)).collect();
        let deriv: Vec<Vec<u64>> =
            n.iter().map(|v| v.iter().enumerate().skip(1).map(|(k, &c)| f.mul(c, k as u64 % p)).collect()).collect();
        let mut next = Vec::with_capacity(r * r);
        for a in 0..r {
            for b in 0..r {
                let mut acc = LazyAcc::new(p, len);
                acc.add_mul(&fa, &deriv[a * r + b]);
                acc.add_mul(&neg_i_dfa, &n[a * r + b]);
                for k in 0..r {
                    acc.add_mul(&neg_a[a * r + k], &n[k * r + b]);
                }
                let mut v = acc.finish();
                while v.last() == Some(&0) {
                    v.pop();
                }
                next.push(v);
            }
        }
        n = next;
    }
    let b = Matrix::from_vec(r, r, n.into_iter().map(|v| Poly::from_reduced(p, v)).collect()).expect("shape");
    PCurvature { p, b, denom: sys.denominator.pow(p) }
}

/// Rebuilds `A_p` from its first column for the operator `L`.
///
/// The first column is `c_0 = Σ_i (n_i / D) ∂^i`, with `D' = 0` (for example
/// `D = a_r^p`). Column `j + 1` is the remainder of `∂ c_j` by `L`:
/// `c_{j+1} = ∂ c_j - (lc(c_j)/a_r) L`.
pub fn first_column_expand(first_col: &[Poly], denom: &Poly, op: &DiffOperator) -> Result<PCurvature> {
    let r = op.order();
    let p = op.p;
    if first_col.len() != r {
        return Err(Error::DimensionMismatch(format!("first column has {} entries, order is {r}", first_col.len())));
    }
    if !denom.derivative().is_zero() {
        return Err(Error::InvalidInput("the common denominator must have zero derivative".into()));
    }
    let ar = op.leading();
    let mut cols: Vec<Vec<Poly>> = vec![first_col.to_vec()];
    for _ in 1..r {
        let c = cols.last().unwrap();
        let top = &c[r - 1];
        let mut next = Vec::with_capacity(r);
        for i in 0..r {
            let mut t = c[i].derivative();
            if i > 0 {
                t = &t + &c[i - 1];
            }
            let num = &(&t * ar) - &(top * &op.coeffs[i]);
            let q = num.div_exact(ar).ok_or_else(|| {
                Error::InvalidInput("column recurrence left a denominator beyond the given one".into())
            })?;
            next.push(q);
        }
        cols.push(next);
    }
    let b = Matrix::from_fn(r, r, |i, j| cols[j][i].clone());
    debug_assert!(b.entries().iter().all(|e| e.modulus() == p));
    Ok(PCurvature { p, b, denom: denom.clone() })
}

/// Rank of a polynomial matrix over `F_p(x)` by fraction-free (Bareiss)
/// elimination.
pub fn rank_over_fraction_field(m: &Matrix<Poly>) -> usize {
    let rows = m.rows();
    let cols = m.cols();
    if rows == 0 || cols == 0 {
        return 0;
    }
    let p = m.entries()[0].modulus();
    let mut a: Vec<Vec<Poly>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut prev = Poly::one(p);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let num = &(&a[rank][col] * &a[i][j]) - &(&a[i][col] * &a[rank][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][col] = Poly::zero(p);
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// `r - rank(A_p)`.
pub fn kernel_dimension(pc: &PCurvature) -> usize {
    pc.dim() - rank_over_fraction_field(&pc.b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::identity;

    fn poly(p: u64, c: &[i64]) -> Poly {
        Poly::from_i64(p, c)
    }

    fn sys(p: u64, den: &[i64], num: Vec<Vec<&[i64]>>) -> DiffSystem {
        let m = Matrix::from_rows(num.into_iter().map(|row| row.into_iter().map(|c| poly(p, c)).collect()).collect())
            .unwrap();
        DiffSystem::new(poly(p, den), m).unwrap()
    }

    /// A rational function kept in lowest terms with a monic denominator.
    #[derive(Clone, Debug, PartialEq)]
    struct Frac(Poly, Poly);

    impl Frac {
        fn new(n: Poly, d: Poly) -> Self {
            let g = n.gcd(&d);
            let (mut n, mut d) =
                if g.is_zero() { (n, d) } else { (n.div_exact(&g).unwrap(), d.div_exact(&g).unwrap()) };
            let c = d.lead();
            let inv = d.field().inv(c);
            n = n.scale(inv);
            d = d.scale(inv);
            Frac(n, d)
        }
        fn add(&self, o: &Self) -> Self {
            Frac::new(&(&self.0 * &o.1) + &(&o.0 * &self.1), &self.1 * &o.1)
        }
        fn mul(&self, o: &Self) -> Self {
            Frac::new(&self.0 * &o.0, &self.1 * &o.1)
        }
        fn neg(&self) -> Self {
            Frac(-&self.0, self.1.clone())
        }
        fn derive(&self) -> Self {
            let num = &(&self.0.derivative() * &self.1) - &(&self.0 * &self.1.derivative());
            Frac::new(num, &self.1 * &self.1)
        }
    }

    /// `A_1 = -A`, `A_{i+1} = A_i' - A A_i` on reduced fractions.
    fn rational_katz(s: &DiffSystem) -> Vec<Frac> {
        let r = s.dim();
        let a: Vec<Frac> =
            s.numerator().entries().iter().map(|e| Frac::new(e.clone(), s.denominator().clone())).collect();
        let mut cur: Vec<Frac> = a.iter().map(Frac::neg).collect();
        for _ in 1..s.p() {
            let mut next = Vec::new();
            for i in 0..r {
                for j in 0..r {
                    let mut acc = cur[i * r + j].derive();
                    for k in 0..r {
                        acc = acc.add(&a[i * r + k].mul(&cur[k * r + j]).neg());
                    }
                    next.push(acc);
                }
            }
            cur = next;
        }
        cur
    }

    fn random_system(p: u64, d: usize, r: usize, seed: u64) -> DiffSystem {
        crate::random::random_system(p, d, r, seed).unwrap()
    }

    #[test]
    fn fraction_free_matches_rational_katz() {
        let mut n = 0;
        for p in [2u64, 3, 5, 7] {
            for d in 0..=2 {
                for r in 1..=2 {
                    for seed in 0..3 {
                        let s = random_system(p, d, r, seed * 31 + p);
                        let pc = katz_pcurvature(&s);
                        let expected = rational_katz(&s);
                        for (b, e) in pc.b.entries().iter().zip(&expected) {
                            assert_eq!(Frac::new(b.clone(), pc.denom.clone()), *e);
                        }
                        assert!(pc.satisfies_degree_bound(s.degree()));
                        n += 1;
                    }
                }
            }
        }
        assert_eq!(n, 72);
    }

    #[test]
    fn katz_examples() {
        let zero = sys(5, &[1], vec![vec![&[], &[]], vec![&[], &[]]]);
        assert!(katz_pcurvature(&zero).is_zero());

        // constant M, f_A = 1: A_p = -M^p
        let f = PrimeField::new(7).unwrap();
        let m = Matrix::from_rows(vec![vec![1u64, 2], vec![3, 4]]).unwrap();
        let mut mp = identity(&f, 2);
        for _ in 0..7 {
            mp = crate::matrix::mat_mul(&f, &mp, &m).unwrap();
        }
        let s = sys(7, &[1], vec![vec![&[1], &[2]], vec![&[3], &[4]]]);
        let pc = katz_pcurvature(&s);
        assert_eq!(pc.b, mp.map(|&c| Poly::constant(7, f.neg(c))));
        assert!(pc.denom.is_one());

        // y' = y/x has A_p = 0
        let s = sys(5, &[0, 1], vec![vec![&[1]]]);
        assert!(katz_pcurvature(&s).is_zero());
    }

    #[test]
    fn kernel_examples() {
        let zero = PCurvature { p: 5, b: Matrix::from_fn(3, 3, |_, _| Poly::zero(5)), denom: Poly::one(5) };
        assert_eq!(kernel_dimension(&zero), 3);
        let exp = katz_pcurvature(&sys(7, &[1], vec![vec![&[1]]]));
        assert_eq!(exp.b[(0, 0)], Poly::constant(7, 6));
        assert_eq!(kernel_dimension(&exp), 0);
        let log = katz_pcurvature(&sys(5, &[0, 1], vec![vec![&[1]]]));
        assert_eq!(kernel_dimension(&log), 1);
        let m =
            Matrix::from_rows(vec![vec![poly(5, &[0, 1]), poly(5, &[1])], vec![poly(5, &[0, 0, 1]), poly(5, &[0, 1])]])
                .unwrap();
        assert_eq!(rank_over_fraction_field(&m), 1);
    }

    #[test]
    fn companion_examples() {
        let op = DiffOperator::new(vec![Poly::zero(5), Poly::zero(5), Poly::one(5)]).unwrap();
        let (c, den) = companion_matrix(&op);
        assert!(den.is_one());
        assert_eq!(
            c,
            Matrix::from_rows(vec![vec![Poly::zero(5), Poly::zero(5)], vec![Poly::one(5), Poly::zero(5)]]).unwrap()
        );

        let op = DiffOperator::new(vec![poly(7, &[-1]), poly(7, &[1])]).unwrap();
        assert_eq!(companion_matrix(&op).0[(0, 0)], Poly::one(7));

        let op = DiffOperator::new(vec![poly(5, &[0, 1]), poly(5, &[1]), poly(5, &[0, 1])]).unwrap();
        let (c, den) = companion_matrix(&op);
        assert_eq!(den, poly(5, &[0, 1]));
        assert_eq!(c[(0, 1)], poly(5, &[0, -1]));
        assert_eq!(c[(1, 1)], poly(5, &[-1]));
        assert_eq!(c[(1, 0)], den);
        assert!(DiffOperator::new(vec![poly(5, &[1]), Poly::zero(5)]).is_err());
    }

    #[test]
    fn adjoint_relation() {
        for seed in 0..10 {
            let op = crate::random::random_operator(7, 2, 2, seed).unwrap();
            let (c, ar) = companion_matrix(&op);
            let minus_c = DiffSystem::new(ar.clone(), c.map(|e| -e)).unwrap();
            let direct = katz_pcurvature(&minus_c);
            let adjoint = katz_pcurvature(&operator_to_system(&op)).neg_transpose();
            assert_eq!(direct, adjoint);
        }
    }

    #[test]
    fn vanishing_for_pure_derivatives() {
        for r in 1..5 {
            let mut coeffs = vec![Poly::zero(5); r];
            coeffs.push(Poly::one(5));
            let op = DiffOperator::new(coeffs).unwrap();
            let pc = katz_pcurvature(&operator_to_system(&op));
            assert!(pc.is_zero());
            assert_eq!(kernel_dimension(&pc), r);
        }
    }

    #[test]
    fn first_column_examples() {
        let op = DiffOperator::new(vec![Poly::zero(5), Poly::zero(5), Poly::one(5)]).unwrap();
        let pc = first_column_expand(&[Poly::zero(5), Poly::zero(5)], &Poly::one(5), &op).unwrap();
        assert!(pc.is_zero());

        // c_0 = g, c_1 = ∂g = g' + g ∂ for L = ∂^2
        let g = poly(5, &[1, 2, 3]);
        let pc = first_column_expand(&[g.clone(), Poly::zero(5)], &Poly::one(5), &op).unwrap();
        assert_eq!(pc.b[(0, 1)], g.derivative());
        assert_eq!(pc.b[(1, 1)], g);
    }

    #[test]
    fn first_column_reproduces_katz() {
        for seed in 0..20 {
            let op = crate::random::random_operator(5, 2, 2, seed).unwrap();
            let (c, ar) = companion_matrix(&op);
            let full = katz_pcurvature(&DiffSystem::new(ar, c.map(|e| -e)).unwrap());
            let first: Vec<Poly> = (0..2).map(|i| full.b[(i, 0)].clone()).collect();
            let rebuilt = first_column_expand(&first, &full.denom, &op).unwrap();
            assert_eq!(rebuilt, full);
        }
    }
}
