//! Polytime term transformers turning each decision problem into a zero test
//! (and the zero test into a central-element test).

use super::{join_all, Term};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("term mentions X{found} but the reduction was built for {n} variables")]
    VariableIndexExceedsN { found: u32, n: u32 },
    #[error("the central-element reduction needs at least one variable")]
    NoVariables,
}

/// `φ ⪯ ψ` iff `φ ⊖ ψ = 0`.
pub fn reduce_order(phi: &Term, psi: &Term) -> Term {
    phi.clone().minus(psi.clone())
}

/// `φ = ψ` iff `(φ ⊖ ψ) ⊕ (ψ ⊖ φ) = 0`.
pub fn reduce_word(phi: &Term, psi: &Term) -> Term {
    phi.clone().dist(psi.clone())
}

/// `α ⊑ β` iff `((β ⊖ β*) ∨ (α ⊖ β)) ∧ ((β* ⊖ β) ∨ (β ⊖ α)) = 0`.
pub fn reduce_eccentricity(alpha: &Term, beta: &Term) -> Term {
    let a = alpha.clone();
    let b = beta.clone();
    let b_star = beta.clone().neg();
    let left = b
        .clone()
        .minus(b_star.clone())
        .join(a.clone().minus(b.clone()));
    let right = b_star.minus(b.clone()).join(b.minus(a));
    left.meet(right)
}

/// `φ` is central iff `φ ∧ φ* = 0`.
pub fn reduce_central(phi: &Term) -> Term {
    phi.clone().meet(phi.clone().neg())
}

/// `ρ(φ) = φ ∧ ⋁_{i=1..n} (X_i ∧ X_i*)`.
///
/// On algebras without a two-element quotient, `φ = 0` iff `ρ(φ)` is
/// central.
pub fn reduce_rho(phi: &Term, n: u32) -> Result<Term, ReduceError> {
    if n == 0 {
        return Err(ReduceError::NoVariables);
    }
    let found = phi.max_var();
    if found > n {
        return Err(ReduceError::VariableIndexExceedsN { found, n });
    }
    let centre = join_all((1..=n).map(|i| Term::var(i).meet(Term::var(i).neg())));
    Ok(phi.clone().meet(centre))
}
