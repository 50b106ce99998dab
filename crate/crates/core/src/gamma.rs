//! MV-algebra backends.
//!
//! Besides the free algebras, every backend is the unit interval `[0, u]` of
//! a totally ordered abelian group with `x ⊕ y = min(u, x + y)` and
//! `x* = u - x`:
//!
//! * `Chain(k)`: `(1/k)Z` with unit 1, the finite Łukasiewicz chain `Ł_k`;
//! * `EffrosShen(θ)`: `Z + θZ ⊂ R` with unit 1, ordered through the
//!   continued fraction of `θ`;
//! * `BehnckeLeptin(m, n)`: `Z ×_lex Z` with unit `(m, n)`.
//!
//! The Behncke-Leptin identification of the Elliott monoid with
//! `Γ(Z ×_lex Z, (m, n))` is an assumption of this crate; the backend itself
//! is just a lexicographic unital chain, so a different unit drops in freely.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cf::{CfError, CfNumber, Sign};
use crate::term::Term;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GammaError {
    #[error("element does not belong to this backend")]
    BackendMismatch,
    #[error("element {0} lies outside [0, u]")]
    OutOfRange(String),
    #[error("variable X{0} has no assigned value")]
    UnassignedVariable(u32),
    #[error("invalid backend parameter: {0}")]
    InvalidParameter(String),
    #[error("cannot parse element literal {0:?}")]
    InvalidLiteral(String),
    #[error("invalid assignment line {line}: {reason}")]
    InvalidAssignment { line: usize, reason: String },
    #[error(transparent)]
    Cf(#[from] CfError),
}

/// Which algebra terms are interpreted in.
#[derive(Clone, Debug)]
pub enum Backend {
    /// The free MV-algebra on `n` generators (`n = 1` is the Farey algebra).
    Free(usize),
    EffrosShen(Arc<CfNumber>),
    BehnckeLeptin {
        m: BigInt,
        n: BigInt,
    },
    /// `Ł_k = {0, 1/k, ..., 1}`.
    Chain(u64),
}

impl Backend {
    pub fn free(n: usize) -> Result<Backend, GammaError> {
        if n == 0 {
            return Err(GammaError::InvalidParameter(
                "free algebras need at least one generator".into(),
            ));
        }
        Ok(Backend::Free(n))
    }

    pub fn farey() -> Backend {
        Backend::Free(1)
    }

    pub fn chain(k: u64) -> Result<Backend, GammaError> {
        if k == 0 || k > u64::MAX / 2 {
            return Err(GammaError::InvalidParameter(format!(
                "chain length {k} out of range"
            )));
        }
        Ok(Backend::Chain(k))
    }

    pub fn behncke_leptin(m: u64, n: u64) -> Result<Backend, GammaError> {
        if m == 0 || n == 0 {
            return Err(GammaError::InvalidParameter(
                "Behncke-Leptin parameters must be positive".into(),
            ));
        }
        Ok(Backend::BehnckeLeptin {
            m: m.into(),
            n: n.into(),
        })
    }

    pub fn effros_shen(theta: CfNumber) -> Backend {
        Backend::EffrosShen(Arc::new(theta))
    }

    pub fn is_free(&self) -> bool {
        matches!(self, Backend::Free(_))
    }

    pub fn zero(&self) -> Result<GammaElement, GammaError> {
        Ok(match self {
            Backend::Free(_) => return Err(GammaError::BackendMismatch),
            Backend::Chain(_) => GammaElement::Chain(0),
            Backend::EffrosShen(_) => GammaElement::EffrosShen {
                a: BigInt::zero(),
                b: BigInt::zero(),
            },
            Backend::BehnckeLeptin { .. } => GammaElement::BehnckeLeptin {
                a: BigInt::zero(),
                b: BigInt::zero(),
            },
        })
    }

    pub fn unit(&self) -> Result<GammaElement, GammaError> {
        Ok(match self {
            Backend::Free(_) => return Err(GammaError::BackendMismatch),
            Backend::Chain(k) => GammaElement::Chain(*k),
            Backend::EffrosShen(_) => GammaElement::EffrosShen {
                a: BigInt::one(),
                b: BigInt::zero(),
            },
            Backend::BehnckeLeptin { m, n } => GammaElement::BehnckeLeptin {
                a: m.clone(),
                b: n.clone(),
            },
        })
    }

    /// `θ` itself, the canonical generator of `Z + θZ`.
    pub fn theta(&self) -> Result<GammaElement, GammaError> {
        match self {
            Backend::EffrosShen(_) => Ok(GammaElement::EffrosShen {
                a: BigInt::zero(),
                b: BigInt::one(),
            }),
            _ => Err(GammaError::BackendMismatch),
        }
    }

    /// Validates `x` as an element of this backend's unit interval.
    pub fn element(&self, x: GammaElement) -> Result<GammaElement, GammaError> {
        let mut meter = 0;
        self.check_kind(&x)?;
        let lo = self.cmp_counted(&self.zero()?, &x, &mut meter)?;
        let hi = self.cmp_counted(&x, &self.unit()?, &mut meter)?;
        if lo == Ordering::Greater || hi == Ordering::Greater {
            return Err(GammaError::OutOfRange(x.to_string()));
        }
        Ok(x)
    }

    /// Parses an element literal: `j` for chains, `(a,b)` for
    /// Behncke-Leptin, `a+b*theta` for Effros-Shen.
    pub fn parse_element(&self, lit: &str) -> Result<GammaElement, GammaError> {
        let bad = || GammaError::InvalidLiteral(lit.to_string());
        let s: String = lit.chars().filter(|c| !c.is_whitespace()).collect();
        let x = match self {
            Backend::Free(_) => return Err(GammaError::BackendMismatch),
            Backend::Chain(_) => GammaElement::Chain(s.parse().map_err(|_| bad())?),
            Backend::BehnckeLeptin { .. } => {
                let inner = s
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(bad)?;
                let (a, b) = inner.split_once(',').ok_or_else(bad)?;
                GammaElement::BehnckeLeptin {
                    a: a.parse().map_err(|_| bad())?,
                    b: b.parse().map_err(|_| bad())?,
                }
            }
            Backend::EffrosShen(_) => {
                let (a, b) = parse_surd_literal(&s).ok_or_else(bad)?;
                GammaElement::EffrosShen { a, b }
            }
        };
        self.element(x)
    }

    fn check_kind(&self, x: &GammaElement) -> Result<(), GammaError> {
        match (self, x) {
            (Backend::Chain(k), GammaElement::Chain(j)) if j <= k => Ok(()),
            (Backend::Chain(_), GammaElement::Chain(_)) => {
                Err(GammaError::OutOfRange(x.to_string()))
            }
            (Backend::EffrosShen(_), GammaElement::EffrosShen { .. })
            | (Backend::BehnckeLeptin { .. }, GammaElement::BehnckeLeptin { .. }) => Ok(()),
            _ => Err(GammaError::BackendMismatch),
        }
    }

    /// Group-level comparison; `meter` accumulates continued-fraction
    /// quotients consulted.
    pub(crate) fn cmp_counted(
        &self,
        x: &GammaElement,
        y: &GammaElement,
        meter: &mut u64,
    ) -> Result<Ordering, GammaError> {
        match (self, x, y) {
            (Backend::Chain(_), GammaElement::Chain(i), GammaElement::Chain(j)) => Ok(i.cmp(j)),
            (
                Backend::BehnckeLeptin { .. },
                GammaElement::BehnckeLeptin { a: a1, b: b1 },
                GammaElement::BehnckeLeptin { a: a2, b: b2 },
            ) => Ok((a1, b1).cmp(&(a2, b2))),
            (
                Backend::EffrosShen(theta),
                GammaElement::EffrosShen { a: a1, b: b1 },
                GammaElement::EffrosShen { a: a2, b: b2 },
            ) => {
                let (sign, used) = theta.sign_a_plus_b_theta_counted(&(a1 - a2), &(b1 - b2))?;
                *meter += used as u64;
                Ok(match sign {
                    Sign::Negative => Ordering::Less,
                    Sign::Zero => Ordering::Equal,
                    Sign::Positive => Ordering::Greater,
                })
            }
            _ => Err(GammaError::BackendMismatch),
        }
    }

    pub(crate) fn neg_checked(&self, x: &GammaElement) -> Result<GammaElement, GammaError> {
        self.check_kind(x)?;
        Ok(match (self.unit()?, x) {
            (GammaElement::Chain(k), GammaElement::Chain(j)) => GammaElement::Chain(k - j),
            (GammaElement::EffrosShen { a: ua, b: ub }, GammaElement::EffrosShen { a, b }) => {
                GammaElement::EffrosShen {
                    a: ua - a,
                    b: ub - b,
                }
            }
            (
                GammaElement::BehnckeLeptin { a: ua, b: ub },
                GammaElement::BehnckeLeptin { a, b },
            ) => GammaElement::BehnckeLeptin {
                a: ua - a,
                b: ub - b,
            },
            _ => return Err(GammaError::BackendMismatch),
        })
    }

    pub(crate) fn oplus_counted(
        &self,
        x: &GammaElement,
        y: &GammaElement,
        meter: &mut u64,
    ) -> Result<GammaElement, GammaError> {
        self.check_kind(x)?;
        self.check_kind(y)?;
        let sum = match (x, y) {
            (GammaElement::Chain(i), GammaElement::Chain(j)) => GammaElement::Chain(i + j),
            (
                GammaElement::EffrosShen { a: a1, b: b1 },
                GammaElement::EffrosShen { a: a2, b: b2 },
            ) => GammaElement::EffrosShen {
                a: a1 + a2,
                b: b1 + b2,
            },
            (
                GammaElement::BehnckeLeptin { a: a1, b: b1 },
                GammaElement::BehnckeLeptin { a: a2, b: b2 },
            ) => GammaElement::BehnckeLeptin {
                a: a1 + a2,
                b: b1 + b2,
            },
            _ => return Err(GammaError::BackendMismatch),
        };
        let u = self.unit()?;
        Ok(if self.cmp_counted(&sum, &u, meter)? == Ordering::Greater {
            u
        } else {
            sum
        })
    }

    /// `min(u, x + y)`
    pub fn oplus(&self, x: &GammaElement, y: &GammaElement) -> Result<GammaElement, GammaError> {
        self.oplus_counted(x, y, &mut 0)
    }

    /// `u - x`
    pub fn neg(&self, x: &GammaElement) -> Result<GammaElement, GammaError> {
        self.neg_checked(x)
    }

    pub fn leq(&self, x: &GammaElement, y: &GammaElement) -> Result<bool, GammaError> {
        Ok(self.cmp_counted(x, y, &mut 0)? != Ordering::Greater)
    }

    pub fn cmp(&self, x: &GammaElement, y: &GammaElement) -> Result<Ordering, GammaError> {
        self.cmp_counted(x, y, &mut 0)
    }

    pub fn is_zero(&self, x: &GammaElement) -> Result<bool, GammaError> {
        self.check_kind(x)?;
        Ok(x.is_origin())
    }

    pub fn is_unit(&self, x: &GammaElement) -> Result<bool, GammaError> {
        self.check_kind(x)?;
        Ok(*x == self.unit()?)
    }

    /// `x ⊙ y = (x* ⊕ y*)*`
    pub fn times(&self, x: &GammaElement, y: &GammaElement) -> Result<GammaElement, GammaError> {
        self.neg(&self.oplus(&self.neg(x)?, &self.neg(y)?)?)
    }

    /// `x ⊖ y = (x* ⊕ y)*`
    pub fn minus(&self, x: &GammaElement, y: &GammaElement) -> Result<GammaElement, GammaError> {
        self.neg(&self.oplus(&self.neg(x)?, y)?)
    }

    /// `(x* ⊕ y)* ⊕ y`
    pub fn join(&self, x: &GammaElement, y: &GammaElement) -> Result<GammaElement, GammaError> {
        self.oplus(&self.minus(x, y)?, y)
    }

    /// `(x* ∨ y*)*`
    pub fn meet(&self, x: &GammaElement, y: &GammaElement) -> Result<GammaElement, GammaError> {
        self.neg(&self.join(&self.neg(x)?, &self.neg(y)?)?)
    }

    /// Idempotent: `x ⊕ x = x`.
    pub fn is_boolean(&self, x: &GammaElement) -> Result<bool, GammaError> {
        Ok(self.oplus(x, x)? == *x)
    }

    /// The eccentricity order on a chain, straight from its definition:
    /// `x ⊑ y` iff (`y < y*` implies `x <= y`) and (`y > y*` implies
    /// `x >= y`).
    pub fn eccentricity_leq(&self, x: &GammaElement, y: &GammaElement) -> Result<bool, GammaError> {
        let y_star = self.neg(y)?;
        Ok(match self.cmp(y, &y_star)? {
            Ordering::Less => self.leq(x, y)?,
            Ordering::Greater => self.leq(y, x)?,
            Ordering::Equal => true,
        })
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Free(n) => write!(f, "free:{n}"),
            Backend::Chain(k) => write!(f, "chain:{k}"),
            Backend::EffrosShen(theta) => match theta.period() {
                Some((pre, per)) => {
                    let join =
                        |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
                    write!(f, "effros-shen:cf:{};{}", join(pre), join(per))
                }
                None => f.write_str("effros-shen"),
            },
            Backend::BehnckeLeptin { m, n } => write!(f, "behncke-leptin:{m},{n}"),
        }
    }
}

fn parse_surd_literal(s: &str) -> Option<(BigInt, BigInt)> {
    // a | theta | b*theta | a+b*theta | a-b*theta | a+theta ...
    let theta_part = |t: &str| -> Option<BigInt> {
        if t == "theta" {
            return Some(BigInt::one());
        }
        if t == "-theta" {
            return Some(-BigInt::one());
        }
        t.strip_suffix("*theta")?.parse().ok()
    };
    if !s.contains("theta") {
        return Some((s.parse().ok()?, BigInt::zero()));
    }
    // split at the sign that starts the theta term (not a leading sign)
    let bytes = s.as_bytes();
    let split = (1..bytes.len())
        .filter(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'+' | b'-'))
        .last();
    match split {
        None => Some((BigInt::zero(), theta_part(s)?)),
        Some(i) => {
            let a: BigInt = s[..i].parse().ok()?;
            let rest = &s[i..];
            let rest = rest.strip_prefix('+').unwrap_or(rest);
            let rest = rest.replace("+-", "-").replace("--", "");
            let b = theta_part(&rest)?;
            Some((a, b))
        }
    }
}

/// An element of a chain backend.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GammaElement {
    /// `j/k` in `Ł_k`.
    Chain(u64),
    /// `a + bθ`.
    EffrosShen { a: BigInt, b: BigInt },
    /// `(a, b)` in `Z ×_lex Z`.
    BehnckeLeptin { a: BigInt, b: BigInt },
}

impl GammaElement {
    fn is_origin(&self) -> bool {
        match self {
            GammaElement::Chain(j) => *j == 0,
            GammaElement::EffrosShen { a, b } | GammaElement::BehnckeLeptin { a, b } => {
                a.is_zero() && b.is_zero()
            }
        }
    }
}

impl fmt::Display for GammaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaElement::Chain(j) => write!(f, "{j}"),
            GammaElement::BehnckeLeptin { a, b } => write!(f, "({a},{b})"),
            GammaElement::EffrosShen { a, b } => {
                if b.is_negative() {
                    write!(f, "{a}-{}*theta", b.abs())
                } else {
                    write!(f, "{a}+{b}*theta")
                }
            }
        }
    }
}

/// Values of the variables for a chain backend.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<u32, GammaElement>);

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn with(mut self, var: u32, value: GammaElement) -> Assignment {
        self.0.insert(var, value);
        self
    }

    pub fn insert(&mut self, var: u32, value: GammaElement) {
        self.0.insert(var, value);
    }

    pub fn get(&self, var: u32) -> Option<&GammaElement> {
        self.0.get(&var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &GammaElement)> {
        self.0.iter().map(|(k, v)| (*k, v))
    }

    pub fn max_var(&self) -> u32 {
        self.0.keys().next_back().copied().unwrap_or(0)
    }

    /// Parses the assignment file format: one `X<i> = <literal>` per line,
    /// `#` comments and blank lines ignored.
    pub fn parse(text: &str, backend: &Backend) -> Result<Assignment, GammaError> {
        let mut asg = Assignment::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fail = |reason: String| GammaError::InvalidAssignment {
                line: lineno + 1,
                reason,
            };
            let (lhs, rhs) = line
                .split_once('=')
                .ok_or_else(|| fail("expected X<i> = <value>".into()))?;
            let var: u32 = lhs
                .trim()
                .strip_prefix('X')
                .and_then(|d| d.parse().ok())
                .filter(|&i| i >= 1)
                .ok_or_else(|| fail(format!("bad variable {:?}", lhs.trim())))?;
            let value = backend
                .parse_element(rhs.trim())
                .map_err(|e| fail(e.to_string()))?;
            asg.insert(var, value);
        }
        Ok(asg)
    }

    /// The assignment actually used on `backend`: Effros-Shen sends `X1` to
    /// `θ` unless told otherwise.
    pub fn effective(&self, backend: &Backend) -> Assignment {
        let mut asg = self.clone();
        if matches!(backend, Backend::EffrosShen(_)) && asg.get(1).is_none() {
            asg.insert(1, backend.theta().expect("effros-shen"));
        }
        asg
    }
}

/// Evaluates terms in a chain backend under a fixed assignment, tallying
/// continued-fraction work.
pub struct ChainEvaluator<'a> {
    backend: &'a Backend,
    asg: Assignment,
    quotients: u64,
}

impl<'a> ChainEvaluator<'a> {
    pub fn new(backend: &'a Backend, asg: &Assignment) -> Result<ChainEvaluator<'a>, GammaError> {
        if backend.is_free() {
            return Err(GammaError::BackendMismatch);
        }
        let asg = asg.effective(backend);
        for (_, v) in asg.iter() {
            backend.element(v.clone())?;
        }
        Ok(ChainEvaluator {
            backend,
            asg,
            quotients: 0,
        })
    }

    pub fn assignment(&self) -> &Assignment {
        &self.asg
    }

    pub fn quotients_consumed(&self) -> u64 {
        self.quotients
    }

    pub fn eval(&mut self, term: &Term) -> Result<GammaElement, GammaError> {
        match term {
            Term::Zero => self.backend.zero(),
            Term::Var(i) => self
                .asg
                .get(*i)
                .cloned()
                .ok_or(GammaError::UnassignedVariable(*i)),
            Term::Neg(a) => {
                let x = self.eval(a)?;
                self.backend.neg_checked(&x)
            }
            Term::Oplus(a, b) => {
                let x = self.eval(a)?;
                let y = self.eval(b)?;
                self.backend.oplus_counted(&x, &y, &mut self.quotients)
            }
        }
    }
}
