//! Command-line driver: argument model, parameter loading and the JSON
//! documents emitted by each subcommand.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hyperperiod::intersection::MatrixKind;
use hyperperiod::quadrature::{beta_product_check_at, euler_integral_check_at, DEFAULT_LEVEL};
use hyperperiod::series::DEFAULT_TOL;
use hyperperiod::{
    cohomology_matrix, corollary_residual, det_c_closed_form, fundamental_solution, ghf,
    homology_matrix, period_row, relative_residual, tpr_residual_00, x_max, CohomologyBasis,
    Complex64, Matrix, ParameterDocument, Params, Report, Row, Series, DEFAULT_DELTA,
};

/// Exit status when every report passes.
pub const EXIT_PASS: u8 = 0;
/// Exit status when at least one report fails.
pub const EXIT_FAIL: u8 = 1;
/// Exit status for usage and validation errors.
pub const EXIT_USAGE: u8 = 2;

const MAX_TOL: f64 = 1e-2;
const CANONICAL_MARGIN: f64 = 0.05;
const BETA_SHIFTS: [usize; 3] = [0, 1, 3];

#[derive(Debug, Parser)]
#[command(
    name = "hyperperiod",
    version,
    about = "Hypergeometric periods and intersection numbers"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate F(a; b; x) by its power series.
    Eval(Common),
    /// Evaluate the fundamental solutions f_0, ..., f_m.
    Solutions(Common),
    /// Cohomology and homology intersection matrices.
    Intersect {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Basis::Phi)]
        basis: Basis,
    },
    /// Period row of phi_0 and its dual.
    Periods(Common),
    /// Period relation at entry (0,0) and the quadratic identity.
    Verify(Common),
    /// Quadrature checks of the Euler integral and beta products.
    Quad {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_LEVEL)]
        level: u32,
    },
    /// Run verify over many seeded parameter sets.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Parameter sets per m.
        #[arg(long, default_value_t = 20)]
        count: u64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Parameter JSON, inline or as a file path.
    #[arg(long)]
    pub params: Option<String>,
    /// Number of variables, or an inclusive range `lo..hi` for sweep.
    #[arg(long)]
    pub m: Option<MRange>,
    /// Seed for drawing random generic parameters.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub x: Option<f64>,
    /// Series tail tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Write JSON here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    Phi,
    Psi,
    Mixed,
}

impl From<Basis> for CohomologyBasis {
    fn from(b: Basis) -> Self {
        match b {
            Basis::Phi => CohomologyBasis::Phi,
            Basis::Psi => CohomologyBasis::Psi,
            Basis::Mixed => CohomologyBasis::Mixed,
        }
    }
}

/// `m` or `lo..hi` (inclusive).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MRange {
    pub lo: usize,
    pub hi: usize,
}

impl MRange {
    pub fn single(self) -> Option<usize> {
        (self.lo == self.hi).then_some(self.lo)
    }
}

impl FromStr for MRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad m value {t:?}: {e}"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((lo, hi)) => (parse(lo)?, parse(hi.trim_start_matches('='))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo == 0 || lo > hi {
            return Err(format!("m range {s:?} must satisfy 1 <= lo <= hi"));
        }
        Ok(Self { lo, hi })
    }
}

impl fmt::Display for MRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

/// Failure of a run before any verdict exists.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

impl From<hyperperiod::Error> for UsageError {
    fn from(e: hyperperiod::Error) -> Self {
        UsageError(e.to_string())
    }
}

/// JSON document plus the exit status it implies.
#[derive(Debug)]
pub struct Outcome {
    pub json: String,
    pub all_pass: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.all_pass {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }
}

impl Common {
    fn validate(&self) -> Result<(), UsageError> {
        if !(self.tol > 0.0 && self.tol <= MAX_TOL) {
            return Err(UsageError(format!(
                "--tol {} outside (0, {MAX_TOL}]",
                self.tol
            )));
        }
        Ok(())
    }

    fn document(&self) -> Result<ParameterDocument, UsageError> {
        let src = self.params.as_deref().unwrap_or_default();
        let text = if src.trim_start().starts_with('{') {
            src.to_owned()
        } else {
            std::fs::read_to_string(src)
                .map_err(|e| UsageError(format!("cannot read parameter file {src}: {e}")))?
        };
        serde_json::from_str(&text).map_err(|e| UsageError(format!("bad parameter JSON: {e}")))
    }

    /// Parameters from exactly one source: `--params`, or `--m` with `--seed`.
    fn parameters(&self) -> Result<(Params, Option<ParameterDocument>), UsageError> {
        match (&self.params, self.m, self.seed) {
            (Some(_), None, None) => {
                let doc = self.document()?;
                Ok((doc.parameters()?, Some(doc)))
            }
            (None, Some(m), Some(seed)) => {
                let m = m
                    .single()
                    .ok_or_else(|| UsageError(format!("--m {m} must be a single value here")))?;
                Ok((Params::random_generic(m, seed, DEFAULT_DELTA)?, None))
            }
            (None, Some(_), None) => Err(UsageError("--m needs --seed".into())),
            (None, None, _) => Err(UsageError("give --params or --m with --seed".into())),
            _ => Err(UsageError("--params excludes --m and --seed".into())),
        }
    }

    fn point(&self, doc: Option<&ParameterDocument>) -> Result<Complex64, UsageError> {
        if let Some(x) = self.x {
            return Ok(Complex64::new(x, 0.0));
        }
        doc.and_then(|d| d.point::<f64>())
            .ok_or_else(|| UsageError("no evaluation point: give --x".into()))
    }

    fn real_point(&self, doc: Option<&ParameterDocument>) -> Result<f64, UsageError> {
        let z = self.point(doc)?;
        if z.im != 0.0 {
            return Err(UsageError(format!("x = {z} must be real here")));
        }
        Ok(z.re)
    }
}

#[derive(Serialize)]
struct SolutionEntry {
    k: usize,
    #[serde(flatten)]
    value: Series,
}

#[derive(Serialize)]
struct SolutionsDoc {
    m: usize,
    x: Complex64,
    solutions: Vec<SolutionEntry>,
}

#[derive(Serialize)]
struct DeterminantCheck {
    numeric: Complex64,
    closed_form: Complex64,
    rel_residual: f64,
}

#[derive(Serialize)]
struct IntersectDoc {
    m: usize,
    cohomology: Matrix,
    homology: Matrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    determinant: Option<DeterminantCheck>,
    homology_determinant: Complex64,
}

#[derive(Serialize)]
struct PeriodsDoc {
    m: usize,
    primal: Row,
    dual: Row,
}

#[derive(Serialize)]
struct SweepFailure {
    identity: &'static str,
    m: usize,
    seed: u64,
    x: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    rel_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct SweepDoc {
    runs: usize,
    max_rel_residual: f64,
    failures: Vec<SweepFailure>,
}

fn to_json<S: Serialize>(doc: &S) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

/// Executes one command and renders its document.
pub fn run(config: &RunConfig) -> Result<Outcome, UsageError> {
    match &config.command {
        Command::Eval(c) => eval(c),
        Command::Solutions(c) => solutions(c),
        Command::Intersect { common, basis } => intersect(common, *basis),
        Command::Periods(c) => periods(c),
        Command::Verify(c) => verify(c),
        Command::Quad { common, level } => quad(common, *level),
        Command::Sweep { common, count } => sweep(common, *count),
    }
}

/// Output path requested by the command, if any.
pub fn output_path(config: &RunConfig) -> Option<&PathBuf> {
    let common = match &config.command {
        Command::Eval(c) | Command::Solutions(c) | Command::Periods(c) | Command::Verify(c) => c,
        Command::Intersect { common, .. }
        | Command::Quad { common, .. }
        | Command::Sweep { common, .. } => common,
    };
    common.out.as_ref()
}

fn done<S: Serialize>(doc: &S) -> Result<Outcome, UsageError> {
    Ok(Outcome {
        json: to_json(doc),
        all_pass: true,
    })
}

fn reports(list: &[Report]) -> Result<Outcome, UsageError> {
    Ok(Outcome {
        json: to_json(&list),
        all_pass: list.iter().all(|r| r.pass),
    })
}

fn eval(c: &Common) -> Result<Outcome, UsageError> {
    c.validate()?;
    let (p, doc) = c.parameters()?;
    let x = c.point(doc.as_ref())?;
    let (upper, lower) = p.solution_parameters(0)?;
    done(&ghf(&upper, &lower, x, c.tol)?)
}

fn solutions(c: &Common) -> Result<Outcome, UsageError> {
    c.validate()?;
    let (p, doc) = c.parameters()?;
    let x = c.point(doc.as_ref())?;
    let solutions = (0..=p.m())
        .map(|k| fundamental_solution(k, &p, x, c.tol).map(|value| SolutionEntry { k, value }))
        .collect::<Result<Vec<_>, _>>()?;
    done(&SolutionsDoc {
        m: p.m(),
        x,
        solutions,
    })
}

fn intersect(c: &Common, basis: Basis) -> Result<Outcome, UsageError> {
    c.validate()?;
    let (p, _) = c.parameters()?;
    let cohomology = cohomology_matrix(&p, basis.into())?;
    let homology = homology_matrix(&p)?;
    let determinant = match cohomology.kind {
        MatrixKind::CohomologyPhi => {
            let numeric = cohomology.determinant();
            let closed_form = det_c_closed_form(&p)?;
            Some(DeterminantCheck {
                numeric,
                closed_form,
                rel_residual: relative_residual(numeric, closed_form),
            })
        }
        _ => None,
    };
    done(&IntersectDoc {
        m: p.m(),
        homology_determinant: homology.determinant(),
        cohomology,
        homology,
        determinant,
    })
}

fn periods(c: &Common) -> Result<Outcome, UsageError> {
    c.validate()?;
    let (p, doc) = c.parameters()?;
    let x = c.real_point(doc.as_ref())?;
    done(&PeriodsDoc {
        m: p.m(),
        primal: period_row(&p, x, c.tol, false)?,
        dual: period_row(&p, x, c.tol, true)?,
    })
}

fn verify(c: &Common) -> Result<Outcome, UsageError> {
    c.validate()?;
    let (p, doc) = c.parameters()?;
    let x = c.real_point(doc.as_ref())?;
    let mut tpr = tpr_residual_00(&p, x, c.tol)?;
    let mut cor = corollary_residual(&p, x, c.tol)?;
    if let Some(seed) = c.seed {
        tpr = tpr.with_seed(seed);
        cor = cor.with_seed(seed);
    }
    reports(&[tpr, cor])
}

fn quad(c: &Common, level: u32) -> Result<Outcome, UsageError> {
    c.validate()?;
    let (p, doc) = c.parameters()?;
    let x = c.real_point(doc.as_ref())?;
    let mut list = vec![euler_integral_check_at(&p, x, level)?];
    for n in BETA_SHIFTS {
        list.push(beta_product_check_at(&p, n, level)?);
    }
    reports(&list)
}

fn away_from_unit_integers(p: &Params) -> bool {
    p.b()[1..].iter().all(|&b| {
        [b, b - 1.0, b + 1.0]
            .iter()
            .all(|v| v.norm() >= CANONICAL_MARGIN)
    })
}

fn sweep(c: &Common, count: u64) -> Result<Outcome, UsageError> {
    c.validate()?;
    if c.params.is_some() {
        return Err(UsageError(
            "sweep draws its own parameters; drop --params".into(),
        ));
    }
    let range = c.m.unwrap_or(MRange { lo: 1, hi: 4 });
    let base = c.seed.unwrap_or(0);
    let mut runs = 0;
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for m in range.lo..=range.hi {
        let cap = x_max::<f64>(m);
        let points = match c.x {
            Some(x) => vec![x],
            None => vec![0.05, 0.1, 0.2f64.min(cap)],
        };
        for i in 0..count {
            let seed = base + i;
            let tpr_p = Params::random_generic(m, seed, DEFAULT_DELTA)?;
            let cor_p =
                Params::random_generic_where(m, seed, DEFAULT_DELTA, away_from_unit_integers)?;
            for &x in &points {
                let checks: [(&'static str, hyperperiod::Result<Report>); 2] = [
                    ("tpr_00", tpr_residual_00(&tpr_p, x, c.tol)),
                    ("corollary_52", corollary_residual(&cor_p, x, c.tol)),
                ];
                for (identity, result) in checks {
                    runs += 1;
                    match result {
                        Ok(r) => {
                            if r.rel_residual.is_nan() || r.rel_residual > worst {
                                worst = r.rel_residual;
                            }
                            if !r.pass {
                                failures.push(SweepFailure {
                                    identity,
                                    m,
                                    seed,
                                    x,
                                    rel_residual: Some(r.rel_residual),
                                    error: None,
                                });
                            }
                        }
                        Err(e) => failures.push(SweepFailure {
                            identity,
                            m,
                            seed,
                            x,
                            rel_residual: None,
                            error: Some(e.to_string()),
                        }),
                    }
                }
            }
        }
    }
    let all_pass = failures.is_empty();
    Ok(Outcome {
        json: to_json(&SweepDoc {
            runs,
            max_rel_residual: worst,
            failures,
        }),
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("hyperperiod").chain(args.iter().copied()))
            .unwrap()
    }

    #[test]
    fn m_range_forms() {
        assert_eq!("3".parse::<MRange>().unwrap(), MRange { lo: 3, hi: 3 });
        assert_eq!("1..4".parse::<MRange>().unwrap(), MRange { lo: 1, hi: 4 });
        assert_eq!("1..=4".parse::<MRange>().unwrap(), MRange { lo: 1, hi: 4 });
        assert!("0..2".parse::<MRange>().is_err());
        assert!("4..1".parse::<MRange>().is_err());
        assert!("x".parse::<MRange>().is_err());
    }

    #[test]
    fn tol_bounds() {
        let cfg = parse(&[
            "verify", "--m", "1", "--seed", "1", "--x", "0.1", "--tol", "0.5",
        ]);
        assert!(run(&cfg).is_err());
        let cfg = parse(&[
            "verify", "--m", "1", "--seed", "1", "--x", "0.1", "--tol", "0",
        ]);
        assert!(run(&cfg).is_err());
    }

    #[test]
    fn exactly_one_source() {
        let inline = r#"{"m":1,"a":[[0.3,0],[0.4,0]],"b":[[0,0],[0.7,0]]}"#;
        let cfg = parse(&["periods", "--params", inline, "--m", "1", "--x", "0.1"]);
        assert!(run(&cfg).is_err());
        let cfg = parse(&["periods", "--x", "0.1"]);
        assert!(run(&cfg).is_err());
        let cfg = parse(&["periods", "--m", "2", "--x", "0.1"]);
        assert!(run(&cfg).is_err());
        let cfg = parse(&["periods", "--params", inline, "--x", "0.1"]);
        assert!(run(&cfg).is_ok());
    }

    #[test]
    fn verify_reports() {
        let cfg = parse(&["verify", "--m", "2", "--seed", "7", "--x", "0.1"]);
        let out = run(&cfg).unwrap();
        assert!(out.all_pass);
        let v: serde_json::Value = serde_json::from_str(&out.json).unwrap();
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), 2);
        assert_eq!(arr[0]["identity"], "tpr_00");
        assert_eq!(arr[1]["identity"], "corollary_52");
    }

    #[test]
    fn intersect_psi_has_no_det_comparison() {
        let cfg = parse(&["intersect", "--m", "2", "--seed", "3", "--basis", "psi"]);
        let v: serde_json::Value = serde_json::from_str(&run(&cfg).unwrap().json).unwrap();
        assert!(v.get("determinant").is_none());
        assert_eq!(v["cohomology"]["kind"], "cohomology_psi");
    }
}
