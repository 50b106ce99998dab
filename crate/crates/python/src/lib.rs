//! Python bindings: terms, reductions, the free-algebra interpreter,
//! continued fractions and the P1-P7 decision engine.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use pyo3::create_exception;
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;

use mvdecide::cf::{cf_from_surd, CfError, CfNumber, Sign};
use mvdecide::cli::parse_algebra;
use mvdecide::decide::{DecideError, Engine, ProblemId, Verdict, Witness};
use mvdecide::gamma::{Assignment, Backend, GammaError};
use mvdecide::pwl::{
    interpret_free_with_budget, PwlComplex, PwlError, ZeroTest, DEFAULT_CELL_BUDGET,
};
use mvdecide::term::{self, Term};

create_exception!(
    mvdecide_py,
    BudgetExceeded,
    pyo3::exceptions::PyRuntimeError
);
create_exception!(
    mvdecide_py,
    NoKnownReduction,
    pyo3::exceptions::PyValueError
);

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn cf_err(e: CfError) -> PyErr {
    match e {
        CfError::StreamExhausted { .. } => BudgetExceeded::new_err(e.to_string()),
        e => value_error(e),
    }
}

fn pwl_err(e: PwlError) -> PyErr {
    match e {
        PwlError::CellBudgetExceeded { .. } => BudgetExceeded::new_err(e.to_string()),
        e => value_error(e),
    }
}

fn decide_err(e: DecideError) -> PyErr {
    if e.is_budget_exceeded() {
        return BudgetExceeded::new_err(e.to_string());
    }
    match e {
        DecideError::NoKnownReduction { .. } => NoKnownReduction::new_err(e.to_string()),
        e => value_error(e),
    }
}

fn ordering_to_int(o: Ordering) -> i8 {
    o as i8
}

/// A Łukasiewicz term.
#[pyclass(
    name = "Term",
    module = "mvdecide_py",
    frozen,
    eq,
    hash,
    skip_from_py_object
)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyTerm {
    inner: Term,
}

impl PyTerm {
    fn wrap(inner: Term) -> PyTerm {
        PyTerm { inner }
    }
}

/// Accepts a `Term` or a string to parse.
fn to_term(obj: &Bound<'_, PyAny>) -> PyResult<Term> {
    if let Ok(t) = obj.cast::<PyTerm>() {
        return Ok(t.get().inner.clone());
    }
    let s: String = obj.extract()?;
    term::parse(&s).map_err(value_error)
}

fn to_terms(objs: &[Bound<'_, PyAny>]) -> PyResult<Vec<Term>> {
    objs.iter().map(to_term).collect()
}

#[pymethods]
impl PyTerm {
    #[new]
    fn new(source: &str) -> PyResult<PyTerm> {
        term::parse(source).map(PyTerm::wrap).map_err(value_error)
    }

    #[staticmethod]
    fn zero() -> PyTerm {
        PyTerm::wrap(Term::zero())
    }

    #[staticmethod]
    fn one() -> PyTerm {
        PyTerm::wrap(Term::one())
    }

    #[staticmethod]
    fn var(index: u32) -> PyResult<PyTerm> {
        if index == 0 {
            return Err(PyValueError::new_err("variable indices start at 1"));
        }
        Ok(PyTerm::wrap(Term::var(index)))
    }

    fn render(&self) -> String {
        self.inner.render()
    }

    fn size(&self) -> usize {
        self.inner.size().value()
    }

    fn max_var(&self) -> u32 {
        self.inner.max_var()
    }

    fn neg(&self) -> PyTerm {
        PyTerm::wrap(self.inner.clone().neg())
    }

    fn oplus(&self, other: &Bound<'_, PyAny>) -> PyResult<PyTerm> {
        Ok(PyTerm::wrap(self.inner.clone().oplus(to_term(other)?)))
    }

    fn times(&self, other: &Bound<'_, PyAny>) -> PyResult<PyTerm> {
        Ok(PyTerm::wrap(self.inner.clone().times(to_term(other)?)))
    }

    fn minus(&self, other: &Bound<'_, PyAny>) -> PyResult<PyTerm> {
        Ok(PyTerm::wrap(self.inner.clone().minus(to_term(other)?)))
    }

    fn join(&self, other: &Bound<'_, PyAny>) -> PyResult<PyTerm> {
        Ok(PyTerm::wrap(self.inner.clone().join(to_term(other)?)))
    }

    fn meet(&self, other: &Bound<'_, PyAny>) -> PyResult<PyTerm> {
        Ok(PyTerm::wrap(self.inner.clone().meet(to_term(other)?)))
    }

    fn dist(&self, other: &Bound<'_, PyAny>) -> PyResult<PyTerm> {
        Ok(PyTerm::wrap(self.inner.clone().dist(to_term(other)?)))
    }

    fn __str__(&self) -> String {
        self.inner.render()
    }

    fn __repr__(&self) -> String {
        format!("Term({:?})", self.inner.render())
    }
}

#[pyfunction]
fn reduce_order(phi: &Bound<'_, PyAny>, psi: &Bound<'_, PyAny>) -> PyResult<PyTerm> {
    Ok(PyTerm::wrap(term::reduce_order(
        &to_term(phi)?,
        &to_term(psi)?,
    )))
}

#[pyfunction]
fn reduce_word(phi: &Bound<'_, PyAny>, psi: &Bound<'_, PyAny>) -> PyResult<PyTerm> {
    Ok(PyTerm::wrap(term::reduce_word(
        &to_term(phi)?,
        &to_term(psi)?,
    )))
}

#[pyfunction]
fn reduce_eccentricity(alpha: &Bound<'_, PyAny>, beta: &Bound<'_, PyAny>) -> PyResult<PyTerm> {
    Ok(PyTerm::wrap(term::reduce_eccentricity(
        &to_term(alpha)?,
        &to_term(beta)?,
    )))
}

#[pyfunction]
fn reduce_central(phi: &Bound<'_, PyAny>) -> PyResult<PyTerm> {
    Ok(PyTerm::wrap(term::reduce_central(&to_term(phi)?)))
}

#[pyfunction]
fn reduce_rho(phi: &Bound<'_, PyAny>, n: u32) -> PyResult<PyTerm> {
    term::reduce_rho(&to_term(phi)?, n)
        .map(PyTerm::wrap)
        .map_err(value_error)
}

/// A McNaughton function on `[0,1]^n`, as returned by `interpret_free`.
#[pyclass(name = "PwlComplex", module = "mvdecide_py", frozen)]
struct PyPwlComplex {
    inner: PwlComplex,
}

#[pymethods]
impl PyPwlComplex {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn cell_count(&self) -> usize {
        self.inner.cell_count()
    }

    /// Exact value at a point given as `Fraction`s or ints.
    fn eval_at(&self, point: Vec<BigRational>) -> PyResult<BigRational> {
        self.inner.eval_at(&point).map_err(pwl_err)
    }

    /// `None` if the function vanishes, else `(point, value)` with the
    /// largest value found at a cell vertex.
    fn nonzero_witness(&self) -> Option<(Vec<BigRational>, BigRational)> {
        match self.inner.is_zero() {
            ZeroTest::Zero => None,
            ZeroTest::NonZero { point, value } => Some((point, value)),
        }
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero().is_zero()
    }

    fn is_one(&self) -> bool {
        self.inner.is_one()
    }

    fn max_vertex_denominator(&self) -> BigInt {
        self.inner.max_vertex_denominator()
    }

    /// One line per cell: its vertices and affine form.
    fn dump(&self) -> String {
        self.inner.to_string()
    }
}

#[pyfunction]
#[pyo3(signature = (term, n, cell_budget = DEFAULT_CELL_BUDGET))]
fn interpret_free(term: &Bound<'_, PyAny>, n: usize, cell_budget: usize) -> PyResult<PyPwlComplex> {
    let t = to_term(term)?;
    interpret_free_with_budget(&t, n, cell_budget)
        .map(|inner| PyPwlComplex { inner })
        .map_err(pwl_err)
}

/// An irrational `θ` in (0,1) given by its continued fraction.
#[pyclass(name = "CfNumber", module = "mvdecide_py", frozen)]
struct PyCfNumber {
    inner: Arc<CfNumber>,
}

impl PyCfNumber {
    fn wrap(cf: CfNumber) -> PyCfNumber {
        PyCfNumber {
            inner: Arc::new(cf),
        }
    }
}

fn sign_to_int(s: Sign) -> i8 {
    match s {
        Sign::Negative => -1,
        Sign::Zero => 0,
        Sign::Positive => 1,
    }
}

#[pymethods]
impl PyCfNumber {
    #[staticmethod]
    fn golden() -> PyCfNumber {
        PyCfNumber::wrap(CfNumber::golden())
    }

    #[staticmethod]
    fn sqrt2_minus_1() -> PyCfNumber {
        PyCfNumber::wrap(CfNumber::sqrt2_minus_1())
    }

    #[staticmethod]
    #[pyo3(signature = (budget = 10_000))]
    fn inv_e(budget: usize) -> PyCfNumber {
        PyCfNumber::wrap(CfNumber::inv_e().with_budget(budget))
    }

    #[staticmethod]
    fn periodic(preperiod: Vec<u64>, period: Vec<u64>) -> PyResult<PyCfNumber> {
        CfNumber::periodic(preperiod, period)
            .map(PyCfNumber::wrap)
            .map_err(cf_err)
    }

    /// `(P + √D) / Q`.
    #[staticmethod]
    fn surd(p: BigInt, d: BigInt, q: BigInt) -> PyResult<PyCfNumber> {
        cf_from_surd(p, d, q).map(PyCfNumber::wrap).map_err(cf_err)
    }

    /// A finite list of partial quotients `a1, a2, ...`; reading past the
    /// end raises `BudgetExceeded`.
    #[staticmethod]
    fn from_quotients(quotients: Vec<u64>) -> PyCfNumber {
        PyCfNumber::wrap(CfNumber::from_quotients(quotients))
    }

    fn partial_quotient(&self, k: usize) -> PyResult<u64> {
        self.inner.partial_quotient(k).map_err(cf_err)
    }

    /// `[(p, q), ...]` for indices `0..=k`.
    fn convergents(&self, k: usize) -> PyResult<Vec<(BigInt, BigInt)>> {
        Ok(self
            .inner
            .convergents(k)
            .map_err(cf_err)?
            .into_iter()
            .map(|c| (c.p, c.q))
            .collect())
    }

    /// -1, 0 or 1 as `θ` is below, equal to or above `r`.
    fn compare_rational(&self, r: BigRational) -> PyResult<i8> {
        self.inner
            .compare_rational(&r)
            .map(ordering_to_int)
            .map_err(cf_err)
    }

    /// Sign of `a + bθ` as -1, 0 or 1.
    fn sign_a_plus_b_theta(&self, a: BigInt, b: BigInt) -> PyResult<i8> {
        self.inner
            .sign_a_plus_b_theta(&a, &b)
            .map(sign_to_int)
            .map_err(cf_err)
    }

    fn quotients_read(&self) -> usize {
        self.inner.quotients_read()
    }
}

/// Accepts an algebra spec string or a `CfNumber` (an Effros-Shen algebra).
fn to_backend(obj: &Bound<'_, PyAny>, cf_budget: usize) -> PyResult<Backend> {
    if let Ok(cf) = obj.cast::<PyCfNumber>() {
        return Ok(Backend::EffrosShen(cf.get().inner.clone()));
    }
    let spec: String = obj.extract()?;
    parse_algebra(&spec, cf_budget).map_err(value_error)
}

fn to_assignment(backend: &Backend, asg: Option<Vec<(u32, String)>>) -> PyResult<Assignment> {
    let Some(pairs) = asg else {
        return Ok(mvdecide::cli::default_assignment(backend));
    };
    let mut out = Assignment::new();
    for (var, lit) in pairs {
        if var == 0 {
            return Err(PyValueError::new_err("variable indices start at 1"));
        }
        let x = backend
            .parse_element(&lit)
            .map_err(|e: GammaError| value_error(e))?;
        out.insert(var, x);
    }
    Ok(out)
}

fn to_problem(s: &str) -> PyResult<ProblemId> {
    s.parse().map_err(value_error)
}

/// Result of a decision.
#[pyclass(name = "Verdict", module = "mvdecide_py", frozen, get_all)]
struct PyVerdict {
    problem: String,
    answer: bool,
    /// `(point, value)` with `Fraction`s on free algebras, an element
    /// literal string on chain backends.
    witnesses: Vec<Py<PyAny>>,
    quotients_consumed: u64,
    cells_built: u64,
}

#[pymethods]
impl PyVerdict {
    fn __bool__(&self) -> bool {
        self.answer
    }

    fn __repr__(&self) -> String {
        format!(
            "Verdict(problem={}, answer={}, witnesses={})",
            self.problem,
            if self.answer { "yes" } else { "no" },
            self.witnesses.len()
        )
    }
}

fn verdict(py: Python<'_>, v: Verdict) -> PyResult<PyVerdict> {
    let mut witnesses = Vec::new();
    for w in v.witnesses {
        let obj = match w {
            Witness::Point { coords, value } => {
                (coords, value).into_pyobject(py)?.into_any().unbind()
            }
            Witness::Element(e) => e.to_string().into_pyobject(py)?.into_any().unbind(),
        };
        witnesses.push(obj);
    }
    Ok(PyVerdict {
        problem: v.problem.to_string(),
        answer: v.answer,
        witnesses,
        quotients_consumed: v.quotients_consumed,
        cells_built: v.cells_built,
    })
}

fn engine(
    algebra: &Bound<'_, PyAny>,
    assignment: Option<Vec<(u32, String)>>,
    cf_budget: usize,
    cell_budget: usize,
) -> PyResult<Engine> {
    let backend = to_backend(algebra, cf_budget)?;
    let asg = to_assignment(&backend, assignment)?;
    Ok(Engine::new(backend)
        .with_assignment(asg)
        .with_cell_budget(cell_budget))
}

/// Decide `problem` ("p1".."p7") for `terms` on `algebra`.
///
/// `assignment` is a list of `(index, literal)` pairs, e.g.
/// `[(1, "(1,0)")]` for Behncke-Leptin or `[(2, "1-theta")]`.
#[pyfunction]
#[pyo3(signature = (problem, algebra, terms, assignment = None, cf_budget = 10_000, cell_budget = DEFAULT_CELL_BUDGET))]
fn decide(
    py: Python<'_>,
    problem: &str,
    algebra: &Bound<'_, PyAny>,
    terms: Vec<Bound<'_, PyAny>>,
    assignment: Option<Vec<(u32, String)>>,
    cf_budget: usize,
    cell_budget: usize,
) -> PyResult<PyVerdict> {
    let e = engine(algebra, assignment, cf_budget, cell_budget)?;
    let v = e
        .decide(to_problem(problem)?, &to_terms(&terms)?)
        .map_err(decide_err)?;
    verdict(py, v)
}

/// Decide `problem` by rewriting it into an instance of `path`.
#[pyfunction]
#[pyo3(signature = (problem, algebra, terms, path, assignment = None, cf_budget = 10_000, cell_budget = DEFAULT_CELL_BUDGET))]
#[allow(clippy::too_many_arguments)]
fn decide_by_reduction_path(
    py: Python<'_>,
    problem: &str,
    algebra: &Bound<'_, PyAny>,
    terms: Vec<Bound<'_, PyAny>>,
    path: &str,
    assignment: Option<Vec<(u32, String)>>,
    cf_budget: usize,
    cell_budget: usize,
) -> PyResult<PyVerdict> {
    let e = engine(algebra, assignment, cf_budget, cell_budget)?;
    let v = e
        .decide_by_reduction_path(to_problem(problem)?, &to_terms(&terms)?, to_problem(path)?)
        .map_err(decide_err)?;
    verdict(py, v)
}

/// Value of a term in a chain backend, as an element literal.
#[pyfunction]
#[pyo3(signature = (term, algebra, assignment = None, cf_budget = 10_000))]
fn evaluate(
    term: &Bound<'_, PyAny>,
    algebra: &Bound<'_, PyAny>,
    assignment: Option<Vec<(u32, String)>>,
    cf_budget: usize,
) -> PyResult<String> {
    let backend = to_backend(algebra, cf_budget)?;
    if backend.is_free() {
        return Err(PyValueError::new_err(
            "use interpret_free for free algebras",
        ));
    }
    let asg = to_assignment(&backend, assignment)?;
    let mut ev = mvdecide::gamma::ChainEvaluator::new(&backend, &asg).map_err(value_error)?;
    match ev.eval(&to_term(term)?) {
        Ok(x) => Ok(x.to_string()),
        Err(GammaError::Cf(e)) => Err(cf_err(e)),
        Err(GammaError::UnassignedVariable(i)) => {
            Err(PyIndexError::new_err(format!("X{i} has no assigned value")))
        }
        Err(e) => Err(value_error(e)),
    }
}

#[pymodule]
fn mvdecide_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTerm>()?;
    m.add_class::<PyPwlComplex>()?;
    m.add_class::<PyCfNumber>()?;
    m.add_class::<PyVerdict>()?;
    m.add_function(wrap_pyfunction!(reduce_order, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_word, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_eccentricity, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_central, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_rho, m)?)?;
    m.add_function(wrap_pyfunction!(interpret_free, m)?)?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(decide_by_reduction_path, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    m.add("NoKnownReduction", m.py().get_type::<NoKnownReduction>())?;
    Ok(())
}
