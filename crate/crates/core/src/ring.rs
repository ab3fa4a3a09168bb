//! Commutative ring contexts shared by the matrix and series layers.

use std::fmt::Debug;

use crate::error::Result;
use crate::field::PrimeField;
use crate::matrix::{self, Matrix};
use crate::quot::{QuotElem, QuotRing};

/// A commutative ring given by a context value; elements carry no context.
pub trait Ring: Clone + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Matrix product; rings with a faster batched product override this.
    /// Dimensions are checked by the caller.
    fn matmul(&self, a: &Matrix<Self::Elem>, b: &Matrix<Self::Elem>) -> Matrix<Self::Elem> {
        matrix::auto_mul(self, a, b)
    }
}

/// Truncated power series rings over `ℓ`, in either the monomial basis
/// `t^i` or the divided-power basis `γ_i(t)`.
///
/// Each element carries its own precision `N` (it is known modulo the ideal
/// of terms of order `>= N`); binary operations return the smaller one.
pub trait SeriesAlgebra: Ring {
    fn base(&self) -> &QuotRing;

    /// Precision of elements created by `zero`, `one` and `scalar`.
    fn prec(&self) -> usize;

    /// The same algebra with another default precision.
    fn with_prec(&self, prec: usize) -> Result<Self>;

    fn prec_of(&self, a: &Self::Elem) -> usize;

    /// Coefficient of the `i`-th basis element.
    fn coeff(&self, a: &Self::Elem, i: usize) -> QuotElem;

    /// Element with the given basis coefficients and precision (missing
    /// coefficients are zero, extra ones are dropped).
    fn from_coeffs(&self, coeffs: &[QuotElem], prec: usize) -> Self::Elem;

    fn scalar(&self, c: &QuotElem) -> Self::Elem {
        self.from_coeffs(std::slice::from_ref(c), self.prec())
    }

    fn mul_scalar(&self, a: &Self::Elem, c: &QuotElem) -> Self::Elem;

    /// Derivative; the precision drops by one.
    fn derive(&self, a: &Self::Elem) -> Self::Elem;

    /// Antiderivative with zero constant term; the precision grows by one
    /// where the basis allows it.
    fn integrate(&self, a: &Self::Elem) -> Self::Elem;

    /// Forgets all terms of order `>= n` (no-op if `n` exceeds the precision).
    fn truncate(&self, a: &Self::Elem, n: usize) -> Self::Elem;

    /// Raises the precision to `n` by padding with zero coefficients.
    fn extend(&self, a: &Self::Elem, n: usize) -> Self::Elem;
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p()
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        PrimeField::add(self, *a, *b)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        PrimeField::sub(self, *a, *b)
    }
    fn neg(&self, a: &u64) -> u64 {
        PrimeField::neg(self, *a)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        PrimeField::mul(self, *a, *b)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}

impl Ring for QuotRing {
    type Elem = QuotElem;

    fn zero(&self) -> QuotElem {
        QuotRing::zero(self)
    }
    fn one(&self) -> QuotElem {
        QuotRing::one(self)
    }
    fn add(&self, a: &QuotElem, b: &QuotElem) -> QuotElem {
        QuotRing::add(self, a, b)
    }
    fn sub(&self, a: &QuotElem, b: &QuotElem) -> QuotElem {
        QuotRing::sub(self, a, b)
    }
    fn neg(&self, a: &QuotElem) -> QuotElem {
        QuotRing::neg(self, a)
    }
    fn mul(&self, a: &QuotElem, b: &QuotElem) -> QuotElem {
        QuotRing::mul(self, a, b)
    }
    fn is_zero(&self, a: &QuotElem) -> bool {
        a.is_zero()
    }
}
