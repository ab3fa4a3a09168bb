//! Top-level p-curvature computations.

use rayon::prelude::*;

use crate::diff::{first_column_expand, katz_pcurvature, operator_to_system, DiffOperator, DiffSystem, PCurvature};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::pcurvature::glue::{glue, glue_entries};
use crate::pcurvature::local::{
    build_cyclotomic_context, build_local_context, local_operator_first_column, local_p_curvature, LocalContext,
};
use crate::pcurvature::points::generate_points;
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Local computations modulo several small moduli, glued by CRT.
    #[default]
    Fast,
    /// The recurrence `A_1 = -A`, `A_{i+1} = A_i' - A A_i`.
    Katz,
    /// One local computation modulo `x^m - c`.
    SingleModulus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub algorithm: Algorithm,
    /// Worker threads for the local computations; results do not depend on it.
    pub threads: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self { algorithm: Algorithm::Fast, threads: 1 }
    }
}

impl Options {
    pub fn new(algorithm: Algorithm) -> Self {
        Self { algorithm, ..Self::default() }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }
}

fn in_pool<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(job))
}

/// `S = x^m - c` coprime to `f`, with `m >= d + 1` minimal and `p ∤ m`.
pub fn choose_single_modulus(f: &Poly, d: usize) -> Result<LocalContext> {
    let p = f.modulus();
    let first = d + 1;
    // past this point only the roots of unity already tried reappear
    let last = first + 2 * p as usize + 8;
    for m in first..=last {
        if (m as u64).is_multiple_of(p) {
            continue;
        }
        for c in 1..p {
            if let Ok(ctx) = build_cyclotomic_context(m, c, f) {
                return Ok(ctx);
            }
        }
    }
    Err(Error::InvalidModulus(format!("no modulus x^m - c with {first} <= m <= {last} is coprime to {f}")))
}

/// The p-curvature of `Y' = A Y` by the default fast algorithm.
pub fn p_curvature(sys: &DiffSystem) -> Result<PCurvature> {
    p_curvature_with(sys, &Options::default())
}

pub fn p_curvature_with(sys: &DiffSystem, opts: &Options) -> Result<PCurvature> {
    match opts.algorithm {
        Algorithm::Katz => Ok(katz_pcurvature(sys)),
        Algorithm::Fast => in_pool(opts.threads, || fast_system(sys))?,
        Algorithm::SingleModulus => {
            let ctx = choose_single_modulus(sys.denominator(), sys.degree())?;
            let local = local_p_curvature(&ctx, sys)?;
            glue(&[(ctx.modulus().clone(), local)], sys)
        }
    }
}

fn fast_system(sys: &DiffSystem) -> Result<PCurvature> {
    let moduli = generate_points(sys.denominator(), sys.degree() + 1);
    let residues = moduli
        .par_iter()
        .map(|s| {
            let ctx = build_local_context(s, sys.denominator())?;
            Ok((s.clone(), local_p_curvature(&ctx, sys)?))
        })
        .collect::<Result<Vec<(Poly, Matrix<Poly>)>>>()?;
    glue(&residues, sys)
}

/// The p-curvature of the operator `L`, that is of `X ↦ X' + C X` on the
/// module `F_p(x)[∂]/F_p(x)[∂] L` in the basis `1, ∂, …, ∂^{r-1}`.
pub fn p_curvature_operator(op: &DiffOperator) -> Result<PCurvature> {
    p_curvature_operator_with(op, &Options::default())
}

pub fn p_curvature_operator_with(op: &DiffOperator, opts: &Options) -> Result<PCurvature> {
    let p = op.p();
    let d = op.degree();
    let as_system = |algorithm| {
        let sys = operator_to_system(op);
        p_curvature_with(&sys, &Options { algorithm, threads: opts.threads }).map(|pc| pc.neg_transpose())
    };
    match opts.algorithm {
        Algorithm::Katz => as_system(Algorithm::Katz),
        _ if p <= 3 => as_system(Algorithm::Katz),
        _ if d >= p as usize => as_system(opts.algorithm),
        Algorithm::Fast => in_pool(opts.threads, || fast_operator(op))?,
        Algorithm::SingleModulus => {
            let ctx = choose_single_modulus(op.leading(), d)?;
            let col = local_operator_first_column(&ctx, op)?;
            let glued = glue_entries(&[ctx.modulus().clone()], &[col], op.leading(), d)?;
            first_column_expand(&glued, &op.leading().inflate(p as usize), op)
        }
    }
}

fn fast_operator(op: &DiffOperator) -> Result<PCurvature> {
    let ar = op.leading();
    let d = op.degree();
    let moduli = generate_points(ar, d + 1);
    let cols = moduli
        .par_iter()
        .map(|s| local_operator_first_column(&build_local_context(s, ar)?, op))
        .collect::<Result<Vec<Vec<Poly>>>>()?;
    let glued = glue_entries(&moduli, &cols, ar, d)?;
    first_column_expand(&glued, &ar.inflate(op.p() as usize), op)
}
