//! Command-line front end.
//!
//! ```text
//! mvdecide --algebra farey --problem p4 --term "(X1&X1*)" --witness
//! mvdecide --reduce order-zero --term X1 --term X2
//! ```
//!
//! Exit codes: 0 yes, 1 no, 2 usage or parse error, 3 budget exceeded.
//! A batch run exits with the largest code of its instances.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cf::{cf_from_surd, CfError, CfNumber};
use crate::decide::{DecideError, Engine, ProblemId, Verdict, Witness};
use crate::gamma::{Assignment, Backend, GammaElement, GammaError};
use crate::term::{
    parse, reduce_central, reduce_eccentricity, reduce_order, reduce_rho, reduce_word, ParseError,
    ReduceError, Term,
};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    JsonLines,
}

#[derive(Debug, Parser)]
#[command(
    name = "mvdecide",
    version,
    about = "Decide word, order, eccentricity, zero and central-projection problems for MV-algebra terms"
)]
pub struct Args {
    /// free:<n> | farey | chain:<k> | effros-shen:{golden,sqrt2,inv-e,surd:P,D,Q,cf:<pre>;<per>,stream:<path>} | behncke-leptin:<m>,<n>
    #[arg(long)]
    pub algebra: Option<String>,

    /// p1 .. p7
    #[arg(long, value_parser = parse_problem)]
    pub problem: Option<ProblemId>,

    /// A term; repeat for two-term problems.
    #[arg(long = "term")]
    pub terms: Vec<String>,

    /// One instance per line, terms separated by ';', '#' starts a comment.
    #[arg(long)]
    pub terms_file: Option<PathBuf>,

    /// Assignment file with lines "X<i> = <literal>".
    #[arg(long)]
    pub assign: Option<PathBuf>,

    /// Print the witness behind each verdict.
    #[arg(long)]
    pub witness: bool,

    /// Decide through another problem instead (e.g. --problem p1 --via p4).
    #[arg(long, value_parser = parse_problem)]
    pub via: Option<ProblemId>,

    /// Print a reduced term instead of deciding: order-zero, word-zero,
    /// ecc-zero, central-zero, zero-central[:n].
    #[arg(long)]
    pub reduce: Option<String>,

    /// Most continued-fraction quotients a decision may read (inv-e and streams).
    #[arg(long, default_value_t = 10_000)]
    pub cf_budget: usize,

    /// Most cells any intermediate piecewise-linear function may have.
    #[arg(long, default_value_t = 1_000_000)]
    pub cell_budget: usize,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

fn parse_problem(s: &str) -> Result<ProblemId, String> {
    s.parse()
        .map_err(|e: crate::decide::UnknownProblem| e.to_string())
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("term {term:?}: {source}")]
    Parse { term: String, source: ParseError },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error(transparent)]
    Cf(#[from] CfError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error(transparent)]
    Decide(#[from] DecideError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Decide(e) if e.is_budget_exceeded() => EXIT_BUDGET,
            CliError::Gamma(GammaError::Cf(CfError::StreamExhausted { .. }))
            | CliError::Cf(CfError::StreamExhausted { .. }) => EXIT_BUDGET,
            _ => EXIT_USAGE,
        }
    }
}

/// Parses an algebra spec string.
pub fn parse_algebra(spec: &str, cf_budget: usize) -> Result<Backend, CliError> {
    let usage = || CliError::Usage(format!("unknown algebra {spec:?}"));
    let int = |s: &str| -> Result<u64, CliError> {
        s.trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad number {s:?} in algebra {spec:?}")))
    };
    if spec == "farey" {
        return Ok(Backend::farey());
    }
    let (kind, arg) = spec.split_once(':').ok_or_else(usage)?;
    Ok(match kind {
        "free" => Backend::free(int(arg)? as usize)?,
        "chain" => Backend::chain(int(arg)?)?,
        "behncke-leptin" => {
            let (m, n) = arg.split_once(',').ok_or_else(usage)?;
            Backend::behncke_leptin(int(m)?, int(n)?)?
        }
        "effros-shen" => {
            let (sub, rest) = arg.split_once(':').unwrap_or((arg, ""));
            let theta = match sub {
                "golden" => CfNumber::golden(),
                "sqrt2" | "sqrt2-1" => CfNumber::sqrt2_minus_1(),
                "inv-e" => CfNumber::inv_e().with_budget(cf_budget),
                "surd" => {
                    let parts: Vec<&str> = rest.split(',').collect();
                    let [p, d, q] = parts[..] else {
                        return Err(usage());
                    };
                    let big = |s: &str| -> Result<BigInt, CliError> {
                        s.trim().parse().map_err(|_| usage())
                    };
                    cf_from_surd(big(p)?, big(d)?, big(q)?)?
                }
                "cf" => {
                    let (pre, per) = rest.split_once(';').ok_or_else(usage)?;
                    CfNumber::periodic(quotient_list(pre)?, quotient_list(per)?)?
                }
                "stream" => {
                    let text = fs::read_to_string(rest).map_err(|source| CliError::Io {
                        path: rest.to_string(),
                        source,
                    })?;
                    CfNumber::from_quotients(quotient_list(&text)?).with_budget(cf_budget)
                }
                _ => return Err(usage()),
            };
            Backend::effros_shen(theta)
        }
        _ => return Err(usage()),
    })
}

fn quotient_list(s: &str) -> Result<Vec<u64>, CliError> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| CliError::Usage(format!("bad partial quotient {t:?}")))
        })
        .collect()
}

/// The term transformers exposed by `--reduce`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    OrderZero,
    WordZero,
    EccZero,
    CentralZero,
    /// `ρ` over `X1..Xn`; `None` means "the term's own variables".
    ZeroCentral(Option<u32>),
}

impl Reduction {
    pub fn parse(name: &str) -> Result<Reduction, CliError> {
        let norm = name.trim().replace('→', "-").replace("->", "-");
        let (head, n) = match norm.split_once(':') {
            Some((h, n)) => (h.to_string(), Some(n.to_string())),
            None => (norm.clone(), None),
        };
        let r = match head.as_str() {
            "order-zero" => Reduction::OrderZero,
            "word-zero" => Reduction::WordZero,
            "ecc-zero" | "eccentricity-zero" => Reduction::EccZero,
            "central-zero" => Reduction::CentralZero,
            "zero-central" | "rho" => Reduction::ZeroCentral(match &n {
                None => None,
                Some(n) => Some(n.trim_start_matches("n=").parse().map_err(|_| {
                    CliError::Usage(format!("bad variable count in reduction {name:?}"))
                })?),
            }),
            _ => return Err(CliError::Usage(format!("unknown reduction {name:?}"))),
        };
        if n.is_some() && !matches!(r, Reduction::ZeroCentral(_)) {
            return Err(CliError::Usage(format!("unknown reduction {name:?}")));
        }
        Ok(r)
    }

    pub fn arity(self) -> usize {
        match self {
            Reduction::OrderZero | Reduction::WordZero | Reduction::EccZero => 2,
            _ => 1,
        }
    }

    pub fn apply(self, terms: &[Term]) -> Result<Term, CliError> {
        if terms.len() != self.arity() {
            return Err(CliError::Usage(format!(
                "reduction takes {} term(s), got {}",
                self.arity(),
                terms.len()
            )));
        }
        Ok(match self {
            Reduction::OrderZero => reduce_order(&terms[0], &terms[1]),
            Reduction::WordZero => reduce_word(&terms[0], &terms[1]),
            Reduction::EccZero => reduce_eccentricity(&terms[0], &terms[1]),
            Reduction::CentralZero => reduce_central(&terms[0]),
            Reduction::ZeroCentral(n) => {
                reduce_rho(&terms[0], n.unwrap_or_else(|| terms[0].max_var().max(1)))?
            }
        })
    }
}

/// One line of `--format json-lines` output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub problem: String,
    pub algebra: String,
    /// "yes", "no" or "error".
    pub verdict: String,
    pub witness: Vec<WitnessRecord>,
    pub quotients_consumed: u64,
    pub cells_built: u64,
    /// Seconds.
    pub elapsed: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessRecord {
    Point { point: Vec<String>, value: String },
    Element { element: String },
}

impl From<&Witness> for WitnessRecord {
    fn from(w: &Witness) -> WitnessRecord {
        match w {
            Witness::Point { coords, value } => WitnessRecord::Point {
                point: coords.iter().map(|c| c.to_string()).collect(),
                value: value.to_string(),
            },
            Witness::Element(e) => WitnessRecord::Element {
                element: e.to_string(),
            },
        }
    }
}

impl VerdictRecord {
    pub fn exit_code(&self) -> i32 {
        match self.verdict.as_str() {
            "yes" => EXIT_YES,
            "no" => EXIT_NO,
            _ => EXIT_USAGE,
        }
    }
}

/// Runs the CLI on `args` (including the program name), writing verdicts to
/// `out` and diagnostics to `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_YES };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    match run_args(&args, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn parse_terms(raw: &[String]) -> Result<Vec<Term>, CliError> {
    raw.iter()
        .map(|s| {
            parse(s).map_err(|source| CliError::Parse {
                term: s.clone(),
                source,
            })
        })
        .collect()
}

/// The instances to run: each a list of term strings.
fn instances(args: &Args) -> Result<Vec<Vec<String>>, CliError> {
    match &args.terms_file {
        Some(path) => {
            if !args.terms.is_empty() {
                return Err(CliError::Usage(
                    "--term and --terms-file are mutually exclusive".into(),
                ));
            }
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            Ok(text
                .lines()
                .map(|l| l.split('#').next().unwrap_or("").trim())
                .filter(|l| !l.is_empty())
                .map(|l| l.split(';').map(|t| t.trim().to_string()).collect())
                .collect())
        }
        None if args.terms.is_empty() => Err(CliError::Usage("no terms given".into())),
        None => Ok(vec![args.terms.clone()]),
    }
}

fn run_args(args: &Args, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let io = |source: std::io::Error| CliError::Io {
        path: "<stdout>".into(),
        source,
    };
    if let Some(name) = &args.reduce {
        let reduction = Reduction::parse(name)?;
        for inst in instances(args)? {
            let t = reduction.apply(&parse_terms(&inst)?)?;
            writeln!(out, "{}", t.render()).map_err(io)?;
        }
        return Ok(EXIT_YES);
    }

    let algebra = args
        .algebra
        .as_deref()
        .ok_or_else(|| CliError::Usage("--algebra is required".into()))?;
    let problem = args
        .problem
        .ok_or_else(|| CliError::Usage("--problem is required".into()))?;
    let backend = parse_algebra(algebra, args.cf_budget)?;
    let assignment = match &args.assign {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            Assignment::parse(&text, &backend)?
        }
        None => default_assignment(&backend),
    };
    let engine = Engine::new(backend)
        .with_assignment(assignment)
        .with_cell_budget(args.cell_budget);

    let mut worst = EXIT_YES;
    for inst in instances(args)? {
        let started = Instant::now();
        let result = parse_terms(&inst).and_then(|terms| {
            Ok(match args.via {
                Some(path) => engine.decide_by_reduction_path(problem, &terms, path)?,
                None => engine.decide(problem, &terms)?,
            })
        });
        let elapsed = started.elapsed().as_secs_f64();
        let code = match &result {
            Ok(v) if v.answer => EXIT_YES,
            Ok(_) => EXIT_NO,
            Err(e) => e.exit_code(),
        };
        worst = worst.max(code);
        match args.format {
            Format::Text => match &result {
                Ok(v) => write_text(out, v, args.witness).map_err(io)?,
                Err(e) => writeln!(err, "error: {e}").map_err(io)?,
            },
            Format::JsonLines => {
                let record = match &result {
                    Ok(v) => record(v, algebra, elapsed, args.witness),
                    Err(e) => {
                        writeln!(err, "error: {e}").map_err(io)?;
                        VerdictRecord {
                            problem: problem.to_string(),
                            algebra: algebra.to_string(),
                            verdict: "error".into(),
                            witness: Vec::new(),
                            quotients_consumed: 0,
                            cells_built: 0,
                            elapsed,
                            error: Some(e.to_string()),
                        }
                    }
                };
                let line = serde_json::to_string(&record).expect("record serializes");
                writeln!(out, "{line}").map_err(io)?;
            }
        }
    }
    Ok(worst)
}

/// Behncke-Leptin preset: `X1 = (1,0)`, `X2 = (0,1)`.
pub fn default_assignment(backend: &Backend) -> Assignment {
    match backend {
        Backend::BehnckeLeptin { .. } => Assignment::new()
            .with(
                1,
                GammaElement::BehnckeLeptin {
                    a: 1.into(),
                    b: 0.into(),
                },
            )
            .with(
                2,
                GammaElement::BehnckeLeptin {
                    a: 0.into(),
                    b: 1.into(),
                },
            ),
        _ => Assignment::new(),
    }
}

fn write_text(out: &mut dyn Write, v: &Verdict, witness: bool) -> std::io::Result<()> {
    writeln!(out, "{}", if v.answer { "yes" } else { "no" })?;
    if witness {
        for w in &v.witnesses {
            writeln!(out, "witness: {w}")?;
        }
    }
    Ok(())
}

pub fn record(v: &Verdict, algebra: &str, elapsed: f64, witness: bool) -> VerdictRecord {
    VerdictRecord {
        problem: v.problem.to_string(),
        algebra: algebra.to_string(),
        verdict: if v.answer { "yes" } else { "no" }.into(),
        witness: if witness {
            v.witnesses.iter().map(WitnessRecord::from).collect()
        } else {
            Vec::new()
        },
        quotients_consumed: v.quotients_consumed,
        cells_built: v.cells_built,
        elapsed,
        error: None,
    }
}
