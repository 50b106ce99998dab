//! Free MV-algebras `McN_n` as exact McNaughton functions on `[0,1]^n`.

mod complex;
pub mod geometry;

use std::collections::HashMap;
use std::sync::Arc;

pub use complex::{
    AffineForm, Cell, PointwiseOrder, PwlComplex, PwlError, ZeroTest, DEFAULT_CELL_BUDGET,
};

use crate::term::Term;

/// Memoizing interpreter of terms in the free algebra on `n` generators.
///
/// Structurally equal subterms are interpreted once, which matters for the
/// reduction formulas where the same argument occurs several times.
#[derive(Debug)]
pub struct FreeInterpreter {
    n: usize,
    budget: usize,
    cache: HashMap<Term, Arc<PwlComplex>>,
    cells_built: u64,
}

impl FreeInterpreter {
    pub fn new(n: usize, budget: usize) -> FreeInterpreter {
        FreeInterpreter {
            n,
            budget,
            cache: HashMap::new(),
            cells_built: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Total cells over every complex built so far.
    pub fn cells_built(&self) -> u64 {
        self.cells_built
    }

    pub fn interpret(&mut self, term: &Term) -> Result<Arc<PwlComplex>, PwlError> {
        let found = term.max_var();
        if found as usize > self.n {
            return Err(PwlError::VariableIndexExceedsN { found, n: self.n });
        }
        self.go(term)
    }

    fn go(&mut self, term: &Term) -> Result<Arc<PwlComplex>, PwlError> {
        if let Some(c) = self.cache.get(term) {
            return Ok(c.clone());
        }
        let built = match term {
            Term::Zero => PwlComplex::constant(false, self.n),
            Term::Var(i) => PwlComplex::coordinate(*i as usize, self.n)?,
            Term::Neg(a) => self.go(a)?.neg(),
            Term::Oplus(a, b) => {
                let fa = self.go(a)?;
                let fb = self.go(b)?;
                fa.oplus(&fb, self.budget)?
            }
        };
        self.cells_built += built.cell_count() as u64;
        let built = Arc::new(built);
        self.cache.insert(term.clone(), built.clone());
        Ok(built)
    }
}

/// `φ^{M_n}` with the default cell budget.
pub fn interpret_free(term: &Term, n: usize) -> Result<PwlComplex, PwlError> {
    interpret_free_with_budget(term, n, DEFAULT_CELL_BUDGET)
}

pub fn interpret_free_with_budget(
    term: &Term,
    n: usize,
    budget: usize,
) -> Result<PwlComplex, PwlError> {
    let mut interp = FreeInterpreter::new(n, budget);
    interp.interpret(term).map(|c| (*c).clone())
}
