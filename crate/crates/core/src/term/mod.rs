//! Łukasiewicz terms over the alphabet `{0, *, ⊕, X1, X2, …, (, )}`.
//!
//! Only the four primitive shapes are stored. Every derived connective
//! (`1`, `⊙`, `⊖`, `∨`, `∧`, Chang distance) is a constructor that expands
//! into primitives at build time, so a [`Term`] is always a plain
//! `{0, *, ⊕, X_i}` tree.

mod parse;
mod reduce;

use std::fmt;
use std::sync::Arc;

pub use parse::{parse, ParseError, ParseErrorKind};
pub use reduce::{
    reduce_central, reduce_eccentricity, reduce_order, reduce_rho, reduce_word, ReduceError,
};

/// A term in the primitive MV signature.
///
/// Children are reference counted so that the reduction transformers can
/// share subterms without copying them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Zero,
    /// Variable `X_i`, `i >= 1`.
    Var(u32),
    Neg(Arc<Term>),
    Oplus(Arc<Term>, Arc<Term>),
}

/// Number of symbol occurrences in the canonical rendering.
///
/// Each of `0`, `X_i`, `*`, `⊕`, `(`, `)` counts once; a variable counts once
/// regardless of how many digits its index has.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermSize(pub usize);

impl TermSize {
    pub fn value(self) -> usize {
        self.0
    }
}

impl fmt::Display for TermSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Term {
    pub fn zero() -> Term {
        Term::Zero
    }

    /// `X_i`. Panics if `i == 0`; use [`parse`] for untrusted input.
    pub fn var(i: u32) -> Term {
        assert!(i >= 1, "variable indices start at 1");
        Term::Var(i)
    }

    /// `0*`
    pub fn one() -> Term {
        Term::Zero.neg()
    }

    pub fn neg(self) -> Term {
        Term::Neg(Arc::new(self))
    }

    pub fn oplus(self, other: Term) -> Term {
        Term::Oplus(Arc::new(self), Arc::new(other))
    }

    /// `a ⊙ b = (a* ⊕ b*)*`
    pub fn times(self, other: Term) -> Term {
        self.neg().oplus(other.neg()).neg()
    }

    /// `a ⊖ b = a ⊙ b* = (a* ⊕ b)*`
    pub fn minus(self, other: Term) -> Term {
        self.neg().oplus(other).neg()
    }

    /// `a ∨ b = (a* ⊕ b)* ⊕ b`
    pub fn join(self, other: Term) -> Term {
        self.neg().oplus(other.clone()).neg().oplus(other)
    }

    /// `a ∧ b = (a* ∨ b*)*`
    pub fn meet(self, other: Term) -> Term {
        self.neg().join(other.neg()).neg()
    }

    /// Chang distance `(a ⊖ b) ⊕ (b ⊖ a)`.
    pub fn dist(self, other: Term) -> Term {
        self.clone().minus(other.clone()).oplus(other.minus(self))
    }

    pub fn size(&self) -> TermSize {
        TermSize(self.count_symbols())
    }

    fn count_symbols(&self) -> usize {
        match self {
            Term::Zero | Term::Var(_) => 1,
            Term::Neg(a) => a.count_symbols() + 1,
            Term::Oplus(a, b) => a.count_symbols() + b.count_symbols() + 3,
        }
    }

    /// Largest variable index occurring in the term, or 0 for ground terms.
    pub fn max_var(&self) -> u32 {
        match self {
            Term::Zero => 0,
            Term::Var(i) => *i,
            Term::Neg(a) => a.max_var(),
            Term::Oplus(a, b) => a.max_var().max(b.max_var()),
        }
    }

    /// Canonical fully parenthesized rendering, e.g. `(X1*+X2)*`.
    pub fn render(&self) -> String {
        self.to_string()
    }

    /// Substitutes `subst[i-1]` for `X_i`; variables beyond the slice stay put.
    pub fn substitute(&self, subst: &[Term]) -> Term {
        match self {
            Term::Zero => Term::Zero,
            Term::Var(i) => subst.get(*i as usize - 1).cloned().unwrap_or(Term::Var(*i)),
            Term::Neg(a) => a.substitute(subst).neg(),
            Term::Oplus(a, b) => a.substitute(subst).oplus(b.substitute(subst)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Zero => f.write_str("0"),
            Term::Var(i) => write!(f, "X{i}"),
            Term::Neg(a) => write!(f, "{a}*"),
            Term::Oplus(a, b) => write!(f, "({a}+{b})"),
        }
    }
}

impl std::str::FromStr for Term {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Left fold of `∨` over the terms; `0` for an empty iterator.
pub fn join_all<I: IntoIterator<Item = Term>>(terms: I) -> Term {
    let mut it = terms.into_iter();
    match it.next() {
        None => Term::Zero,
        Some(first) => it.fold(first, Term::join),
    }
}
