//! Deciding P1-P7 on any backend from a single zero test and the term
//! reductions.
//!
//! | problem | terms  | question                           |
//! |---------|--------|------------------------------------|
//! | P1      | φ, ψ   | φ = ψ                              |
//! | P2      | φ, ψ   | φ ≤ ψ                              |
//! | P3      | α, β   | α ⊑ β (eccentricity order)         |
//! | P4      | φ      | φ = 0                              |
//! | P5      | φ      | φ is Boolean (central projection)  |
//! | P6      | φ      | φ ∉ {0, 1}                         |
//! | P7      | φ      | φ Boolean and ∉ {0, 1}             |

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use thiserror::Error;

use crate::cf::CfError;
use crate::gamma::{Assignment, Backend, ChainEvaluator, GammaElement, GammaError};
use crate::pwl::{FreeInterpreter, PwlError, ZeroTest, DEFAULT_CELL_BUDGET};
use crate::term::{
    reduce_central, reduce_eccentricity, reduce_order, reduce_rho, reduce_word, ReduceError, Term,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemId {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7,
}

impl ProblemId {
    pub const ALL: [ProblemId; 7] = [
        ProblemId::P1,
        ProblemId::P2,
        ProblemId::P3,
        ProblemId::P4,
        ProblemId::P5,
        ProblemId::P6,
        ProblemId::P7,
    ];

    pub fn arity(self) -> usize {
        match self {
            ProblemId::P1 | ProblemId::P2 | ProblemId::P3 => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ProblemId::P1 => "word",
            ProblemId::P2 => "order",
            ProblemId::P3 => "eccentricity",
            ProblemId::P4 => "zero",
            ProblemId::P5 => "central",
            ProblemId::P6 => "nontrivial",
            ProblemId::P7 => "central nontrivial",
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", *self as u8 + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown problem {0:?} (expected p1..p7)")]
pub struct UnknownProblem(pub String);

impl FromStr for ProblemId {
    type Err = UnknownProblem;

    fn from_str(s: &str) -> Result<ProblemId, UnknownProblem> {
        let digit = s
            .strip_prefix(['p', 'P'])
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|d| (1..=7).contains(d))
            .ok_or_else(|| UnknownProblem(s.to_string()))?;
        Ok(ProblemId::ALL[digit - 1])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("{problem} takes {expected} term(s), got {found}")]
    ArityMismatch {
        problem: ProblemId,
        expected: usize,
        found: usize,
    },
    #[error("no known reduction from {from} to {to} on this backend")]
    NoKnownReduction { from: ProblemId, to: ProblemId },
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error(transparent)]
    Pwl(#[from] PwlError),
    #[error(transparent)]
    Gamma(#[from] GammaError),
}

impl DecideError {
    /// Cell budget or continued-fraction budget ran out.
    pub fn is_budget_exceeded(&self) -> bool {
        matches!(
            self,
            DecideError::Pwl(PwlError::CellBudgetExceeded { .. })
                | DecideError::Gamma(GammaError::Cf(CfError::StreamExhausted { .. }))
        )
    }
}

/// Evidence for a verdict: the value of the term whose zero test failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A point of `[0,1]^n` and the (nonzero) function value there.
    Point {
        coords: Vec<BigRational>,
        value: BigRational,
    },
    /// The (nonzero) value in a chain backend.
    Element(GammaElement),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Point { coords, value } => {
                if coords.len() == 1 {
                    write!(f, "x = {}", coords[0])?;
                } else {
                    let parts: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
                    write!(f, "x = ({})", parts.join(", "))?;
                }
                write!(f, ", value {value}")
            }
            Witness::Element(e) => write!(f, "value {e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub problem: ProblemId,
    pub answer: bool,
    pub witnesses: Vec<Witness>,
    pub quotients_consumed: u64,
    pub cells_built: u64,
}

impl Verdict {
    pub fn witness(&self) -> Option<&Witness> {
        self.witnesses.first()
    }
}

enum Evaluator<'a> {
    Free(FreeInterpreter),
    Chain(ChainEvaluator<'a>),
}

impl Evaluator<'_> {
    /// `Ok(None)` when `t` is zero, otherwise a witness of nonzeroness.
    fn nonzero(&mut self, t: &Term) -> Result<Option<Witness>, DecideError> {
        match self {
            Evaluator::Free(it) => match it.interpret(t)?.is_zero() {
                ZeroTest::Zero => Ok(None),
                ZeroTest::NonZero { point, value } => Ok(Some(Witness::Point {
                    coords: point,
                    value,
                })),
            },
            Evaluator::Chain(ev) => {
                let v = ev.eval(t)?;
                Ok(match &v {
                    GammaElement::Chain(0) => None,
                    GammaElement::EffrosShen { a, b } | GammaElement::BehnckeLeptin { a, b }
                        if a.sign() == num_bigint::Sign::NoSign
                            && b.sign() == num_bigint::Sign::NoSign =>
                    {
                        None
                    }
                    _ => Some(Witness::Element(v)),
                })
            }
        }
    }

    fn counters(&self) -> (u64, u64) {
        match self {
            Evaluator::Free(it) => (0, it.cells_built()),
            Evaluator::Chain(ev) => (ev.quotients_consumed(), 0),
        }
    }
}

/// A backend together with the assignment and budgets used to decide
/// instances on it.
#[derive(Clone, Debug)]
pub struct Engine {
    backend: Backend,
    assignment: Assignment,
    cell_budget: usize,
}

impl Engine {
    pub fn new(backend: Backend) -> Engine {
        Engine {
            backend,
            assignment: Assignment::new(),
            cell_budget: DEFAULT_CELL_BUDGET,
        }
    }

    pub fn with_assignment(mut self, assignment: Assignment) -> Engine {
        self.assignment = assignment;
        self
    }

    pub fn with_cell_budget(mut self, budget: usize) -> Engine {
        self.cell_budget = budget;
        self
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    fn evaluator(&self) -> Result<Evaluator<'_>, DecideError> {
        Ok(match &self.backend {
            Backend::Free(n) => Evaluator::Free(FreeInterpreter::new(*n, self.cell_budget)),
            b => Evaluator::Chain(ChainEvaluator::new(b, &self.assignment)?),
        })
    }

    pub fn decide(&self, problem: ProblemId, terms: &[Term]) -> Result<Verdict, DecideError> {
        if terms.len() != problem.arity() {
            return Err(DecideError::ArityMismatch {
                problem,
                expected: problem.arity(),
                found: terms.len(),
            });
        }
        let mut ev = self.evaluator()?;
        let (answer, witnesses) = match problem {
            ProblemId::P1 => zero_answer(ev.nonzero(&reduce_word(&terms[0], &terms[1]))?),
            ProblemId::P2 => zero_answer(ev.nonzero(&reduce_order(&terms[0], &terms[1]))?),
            ProblemId::P3 => zero_answer(ev.nonzero(&reduce_eccentricity(&terms[0], &terms[1]))?),
            ProblemId::P4 => zero_answer(ev.nonzero(&terms[0])?),
            ProblemId::P5 => zero_answer(ev.nonzero(&reduce_central(&terms[0]))?),
            ProblemId::P6 => nontrivial(&mut ev, &terms[0])?,
            ProblemId::P7 => match ev.nonzero(&reduce_central(&terms[0]))? {
                Some(w) => (false, vec![w]),
                None => (nontrivial(&mut ev, &terms[0])?.0, Vec::new()),
            },
        };
        let (quotients_consumed, cells_built) = ev.counters();
        Ok(Verdict {
            problem,
            answer,
            witnesses,
            quotients_consumed,
            cells_built,
        })
    }

    /// Decides `problem` by rewriting the instance into one of `path` and
    /// deciding that instead.
    ///
    /// Known pairs: P1, P2, P3, P5 to P4 by the reduction terms; P4 to P1, P2,
    /// P3 by comparing with 0; P4 to P5 through `ρ` on chain backends where
    /// some generator is not Boolean. Free algebras have Boolean quotients,
    /// which breaks the `ρ` equivalence, so P4 to P5 is refused there.
    pub fn decide_by_reduction_path(
        &self,
        problem: ProblemId,
        terms: &[Term],
        path: ProblemId,
    ) -> Result<Verdict, DecideError> {
        use ProblemId::*;
        if problem == path {
            return self.decide(problem, terms);
        }
        if terms.len() != problem.arity() {
            return Err(DecideError::ArityMismatch {
                problem,
                expected: problem.arity(),
                found: terms.len(),
            });
        }
        let refused = DecideError::NoKnownReduction {
            from: problem,
            to: path,
        };
        let target = match (problem, path) {
            (P1, P4) => vec![reduce_word(&terms[0], &terms[1])],
            (P2, P4) => vec![reduce_order(&terms[0], &terms[1])],
            (P3, P4) => vec![reduce_eccentricity(&terms[0], &terms[1])],
            (P5, P4) => vec![reduce_central(&terms[0])],
            (P4, P1) | (P4, P2) | (P4, P3) => vec![terms[0].clone(), Term::zero()],
            (P4, P5) => vec![self.rho_for(&terms[0]).ok_or(refused)??],
            _ => return Err(refused),
        };
        let mut v = self.decide(path, &target)?;
        v.problem = problem;
        Ok(v)
    }

    /// `ρ(φ)` over enough generators to include a non-Boolean one, or `None`
    /// when the equivalence would not hold.
    fn rho_for(&self, phi: &Term) -> Option<Result<Term, DecideError>> {
        if self.backend.is_free() {
            return None;
        }
        let asg = self.assignment.effective(&self.backend);
        let n = phi.max_var().max(asg.max_var());
        let mut nontrivial = false;
        for i in 1..=n {
            match asg.get(i) {
                None => return Some(Err(GammaError::UnassignedVariable(i).into())),
                Some(x) => match self.backend.is_boolean(x) {
                    Ok(b) => nontrivial |= !b,
                    Err(e) => return Some(Err(e.into())),
                },
            }
        }
        if !nontrivial {
            return None;
        }
        Some(reduce_rho(phi, n).map_err(DecideError::from))
    }
}

fn zero_answer(w: Option<Witness>) -> (bool, Vec<Witness>) {
    match w {
        None => (true, Vec::new()),
        Some(w) => (false, vec![w]),
    }
}

fn nontrivial(ev: &mut Evaluator<'_>, phi: &Term) -> Result<(bool, Vec<Witness>), DecideError> {
    let Some(w0) = ev.nonzero(phi)? else {
        return Ok((false, Vec::new()));
    };
    let Some(w1) = ev.nonzero(&phi.clone().neg())? else {
        return Ok((false, Vec::new()));
    };
    Ok((true, vec![w0, w1]))
}

/// One-shot form of [`Engine::decide`].
pub fn decide(
    problem: ProblemId,
    backend: &Backend,
    terms: &[Term],
    asg: &Assignment,
) -> Result<Verdict, DecideError> {
    Engine::new(backend.clone())
        .with_assignment(asg.clone())
        .decide(problem, terms)
}
