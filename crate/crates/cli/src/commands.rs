use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use pcurv::diff::operator_to_system;
use pcurv::pcurvature::local::{build_local_context, local_system_dp, localize_operator};
use pcurv::pcurvature::solutions::{fundamental_solutions, solutions_operator};
use pcurv::random::random_system;
use pcurv::{
    is_prime, katz_pcurvature, p_curvature_operator_with, p_curvature_with, DpRing, Options, PCurvature, Poly,
    SeriesAlgebra,
};
use serde_json::json;

use crate::io::{emit, read_input, Input, Metadata, ResultDoc};
use crate::{AlgorithmArg, BenchArgs, ComputeArgs, SolutionsArgs, VerifyArgs};

fn run(input: &Input, opts: &Options) -> Result<PCurvature> {
    Ok(match input {
        Input::System(s) => p_curvature_with(s, opts)?,
        Input::Operator(o) => p_curvature_operator_with(o, opts)?,
    })
}

fn meta_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

pub fn compute(args: &ComputeArgs, operator: bool) -> Result<u8> {
    let input = read_input(&args.input)?;
    match (&input, operator) {
        (Input::Operator(_), false) => bail!("{} holds an operator; use compute-operator", args.input.display()),
        (Input::System(_), true) => bail!("{} holds a system; use compute", args.input.display()),
        _ => {}
    }
    let opts = Options { algorithm: args.algorithm.core(), threads: args.threads };
    let start = Instant::now();
    let pc = run(&input, &opts)?;
    let wall_seconds = start.elapsed().as_secs_f64();
    let (d, r) = input.shape();
    let doc = serde_json::to_string(&ResultDoc::new(&pc, d))?;
    let meta = serde_json::to_string(&Metadata { p: pc.p, d, r, algorithm: args.algorithm.name(), wall_seconds })?;
    emit(args.output.as_deref(), &doc)?;
    match &args.output {
        Some(path) => std::fs::write(meta_path(path), meta).context("cannot write metadata")?,
        None => eprintln!("{meta}"),
    }
    Ok(0)
}

pub fn solutions(args: &SolutionsArgs) -> Result<u8> {
    let input = read_input(&args.input)?;
    let n = args.precision;
    if n == 0 {
        bail!("--precision must be positive");
    }
    let p = input.p();
    let lead = match &input {
        Input::System(s) => s.denominator().clone(),
        Input::Operator(o) => o.leading().clone(),
    };
    let ctx = build_local_context(&Poly::x(p), &lead).context("x = 0 is a singular point")?;
    let ell = ctx.ring();
    let doc = match &input {
        Input::System(sys) => {
            let dr = DpRing::new(ell, n)?;
            let a = local_system_dp(&ctx, sys, n)?;
            let fs = fundamental_solutions(&dr, &a, n)?;
            let r = sys.dim();
            let coeffs: Vec<Vec<Vec<u64>>> = (0..n)
                .map(|k| (0..r).map(|i| (0..r).map(|j| dr.coeff(fs.y.get(i, j), k).as_slice()[0]).collect()).collect())
                .collect();
            json!({"p": p, "type": "system", "precision": n, "basis": "divided_powers", "coefficients": coeffs})
        }
        Input::Operator(op) => {
            if op.degree() >= p as usize {
                bail!("operator solutions need coefficient degree below p = {p}, got {}", op.degree());
            }
            let alpha = localize_operator(&ctx, op);
            let sols = solutions_operator(ell, &alpha, n.max(op.degree() + 1))?;
            let sols: Vec<Vec<u64>> =
                sols.iter().map(|f| f.iter().take(n).map(|c| c.as_slice()[0]).collect()).collect();
            json!({"p": p, "type": "operator", "precision": n, "basis": "divided_powers", "solutions": sols})
        }
    };
    emit(args.output.as_deref(), &serde_json::to_string(&doc)?)?;
    Ok(0)
}

fn first_difference(a: &PCurvature, b: &PCurvature) -> Option<String> {
    if a.denom != b.denom {
        return Some(format!("denominator: fast = {}, katz = {}", a.denom, b.denom));
    }
    let r = a.dim();
    for i in 0..r {
        for j in 0..r {
            if a.b.get(i, j) != b.b.get(i, j) {
                return Some(format!("entry ({i}, {j}): fast = {}, katz = {}", a.b.get(i, j), b.b.get(i, j)));
            }
        }
    }
    None
}

pub fn verify(args: &VerifyArgs) -> Result<u8> {
    let input = read_input(&args.input)?;
    let (d, r) = input.shape();
    let p = input.p();
    let work = p.saturating_mul(d.max(1) as u64).saturating_mul((r * r) as u64);
    if work > args.max_work {
        bail!("p * d * r^2 = {work} exceeds --max-work {}; the Katz recurrence would be too slow", args.max_work);
    }
    let opts = Options { algorithm: args.algorithm.core(), threads: args.threads };
    let mut fast = run(&input, &opts)?;
    let katz = match &input {
        Input::System(s) => katz_pcurvature(s),
        Input::Operator(o) => katz_pcurvature(&operator_to_system(o)).neg_transpose(),
    };
    if args.corrupt_fast {
        let e = fast.b.get(0, 0) + &Poly::one(p);
        fast.b =
            pcurv::Matrix::from_fn(r, r, |i, j| if (i, j) == (0, 0) { e.clone() } else { fast.b.get(i, j).clone() });
    }
    let (report, code) = match first_difference(&fast, &katz) {
        None => ("EQUAL".to_string(), 0),
        Some(diff) => (format!("DIFFER at {diff}"), 2),
    };
    emit(args.output.as_deref(), &report)?;
    Ok(code)
}

pub fn bench(args: &BenchArgs) -> Result<u8> {
    if let Some(&p) = args.p.iter().find(|&&p| !is_prime(p)) {
        bail!("--p: {p} is not a prime below 2^31");
    }
    if args.d.contains(&0) || args.r.contains(&0) {
        bail!("--d and --r entries must be at least 1");
    }
    let algorithms = match args.algorithm {
        Some(a) => vec![a],
        None => vec![AlgorithmArg::Fast, AlgorithmArg::Katz],
    };
    let sink: Box<dyn std::io::Write> = match &args.output {
        Some(path) => {
            Box::new(std::fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?)
        }
        None => Box::new(std::io::stdout()),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["p", "d", "r", "algorithm", "seconds"])?;
    for &p in &args.p {
        for &d in &args.d {
            for &r in &args.r {
                let sys = random_system(p, d, r, args.seed)?;
                for &alg in &algorithms {
                    let opts = Options { algorithm: alg.core(), threads: args.threads };
                    let start = Instant::now();
                    p_curvature_with(&sys, &opts)?;
                    let secs = start.elapsed().as_secs_f64();
                    w.write_record([
                        p.to_string(),
                        d.to_string(),
                        r.to_string(),
                        alg.name().into(),
                        format!("{secs:.6}"),
                    ])?;
                    w.flush()?;
                }
            }
        }
    }
    Ok(0)
}
