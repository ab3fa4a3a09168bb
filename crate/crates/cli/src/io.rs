//! JSON input and output formats.
//!
//! Polynomials are integer arrays, constant term first; matrices are
//! row-major nested arrays. Integers are reduced modulo `p` on load.

use std::path::Path;

use anyhow::{bail, Context, Result};
use pcurv::{is_prime, DiffOperator, DiffSystem, Matrix, PCurvature, Poly};
use serde::{Deserialize, Serialize};

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum RawInput {
    System {
        p: u64,
        #[serde(default)]
        r: Option<usize>,
        denominator: Vec<i64>,
        numerator: Vec<Vec<Vec<i64>>>,
    },
    Operator {
        p: u64,
        coeffs: Vec<Vec<i64>>,
    },
}

#[derive(Clone, Debug)]
pub enum Input {
    System(DiffSystem),
    Operator(DiffOperator),
}

impl Input {
    pub fn p(&self) -> u64 {
        match self {
            Input::System(s) => s.p(),
            Input::Operator(o) => o.p(),
        }
    }

    /// `(d, r)`.
    pub fn shape(&self) -> (usize, usize) {
        match self {
            Input::System(s) => (s.degree(), s.dim()),
            Input::Operator(o) => (o.degree(), o.order()),
        }
    }
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        bail!("field \"p\": {p} is not a prime below 2^31");
    }
    Ok(())
}

pub fn parse_input(text: &str) -> Result<Input> {
    let raw: RawInput = serde_json::from_str(text)?;
    match raw {
        RawInput::System { p, r, denominator, numerator } => {
            check_prime(p)?;
            let dim = numerator.len();
            if dim == 0 {
                bail!("field \"numerator\": the matrix is empty");
            }
            if let Some(r) = r {
                if r != dim {
                    bail!("field \"r\": declared {r} but \"numerator\" has {dim} rows");
                }
            }
            for (i, row) in numerator.iter().enumerate() {
                if row.len() != dim {
                    bail!("field \"numerator\": row {i} has {} entries, expected {dim}", row.len());
                }
            }
            let den = Poly::from_i64(p, &denominator);
            if den.is_zero() {
                bail!("field \"denominator\": the denominator is zero modulo {p}");
            }
            let rows = numerator.iter().map(|row| row.iter().map(|c| Poly::from_i64(p, c)).collect()).collect();
            let num = Matrix::from_rows(rows).context("field \"numerator\"")?;
            Ok(Input::System(DiffSystem::new(den, num).context("invalid system")?))
        }
        RawInput::Operator { p, coeffs } => {
            check_prime(p)?;
            if coeffs.len() < 2 {
                bail!("field \"coeffs\": an operator needs at least two coefficients a_0, …, a_r");
            }
            let cs: Vec<Poly> = coeffs.iter().map(|c| Poly::from_i64(p, c)).collect();
            if cs.last().unwrap().is_zero() {
                bail!("field \"coeffs\": the leading coefficient is zero modulo {p}");
            }
            Ok(Input::Operator(DiffOperator::new(cs).context("invalid operator")?))
        }
    }
}

pub fn read_input(path: &Path) -> Result<Input> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_input(&text).with_context(|| format!("cannot parse {}", path.display()))
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ResultDoc {
    pub p: u64,
    pub d: usize,
    pub r: usize,
    pub numerator: Vec<Vec<Vec<u64>>>,
    pub denominator: Vec<u64>,
}

impl ResultDoc {
    pub fn new(pc: &PCurvature, d: usize) -> Self {
        let r = pc.dim();
        let numerator = (0..r).map(|i| (0..r).map(|j| pc.b.get(i, j).coeffs().to_vec()).collect()).collect();
        Self { p: pc.p, d, r, numerator, denominator: pc.denom.coeffs().to_vec() }
    }
}

#[derive(Debug, Serialize)]
pub struct Metadata<'a> {
    pub p: u64,
    pub d: usize,
    pub r: usize,
    pub algorithm: &'a str,
    pub wall_seconds: f64,
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
