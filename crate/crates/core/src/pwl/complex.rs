use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::geometry::{Clip, HPoint, HalfSpace, Polytope};

/// Default cap on the number of cells any single complex may hold.
pub const DEFAULT_CELL_BUDGET: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PwlError {
    #[error("coordinate index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("cell budget of {budget} exceeded")]
    CellBudgetExceeded { budget: usize },
    #[error("term mentions X{found} but the free algebra has {n} generators")]
    VariableIndexExceedsN { found: u32, n: usize },
    #[error("point lies outside the unit cube")]
    PointOutOfCube,
}

/// Integer affine function `constant + Σ coeffs[i] * x_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineForm {
    constant: BigInt,
    coeffs: Vec<BigInt>,
}

impl AffineForm {
    pub fn new(constant: BigInt, coeffs: Vec<BigInt>) -> AffineForm {
        AffineForm { constant, coeffs }
    }

    pub fn constant(value: i64, dim: usize) -> AffineForm {
        AffineForm {
            constant: BigInt::from(value),
            coeffs: vec![BigInt::zero(); dim],
        }
    }

    /// The projection `x_i` (1-based).
    pub fn coordinate(i: usize, dim: usize) -> AffineForm {
        let mut f = AffineForm::constant(0, dim);
        f.coeffs[i - 1] = BigInt::one();
        f
    }

    pub fn constant_term(&self) -> &BigInt {
        &self.constant
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    fn add(&self, other: &AffineForm) -> AffineForm {
        AffineForm {
            constant: &self.constant + &other.constant,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    fn one_minus(&self) -> AffineForm {
        AffineForm {
            constant: BigInt::one() - &self.constant,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Numerator of the value at `p`, over `p.denominator()`.
    fn eval_scaled(&self, p: &HPoint) -> BigInt {
        let lin: BigInt = self
            .coeffs
            .iter()
            .zip(p.numerators())
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, x)| a * x)
            .sum();
        lin + &self.constant * p.denominator()
    }

    fn eval_h(&self, p: &HPoint) -> BigRational {
        BigRational::new(self.eval_scaled(p), p.denominator().clone())
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        self.coeffs.iter().zip(point).fold(
            BigRational::from_integer(self.constant.clone()),
            |acc, (a, x)| acc + x * a,
        )
    }

    fn is_const(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        if !self.constant.is_zero() || self.is_const() {
            write!(f, "{}", self.constant)?;
            wrote = true;
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if wrote {
                write!(f, " {sign} ")?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "x{}", i + 1)?;
            wrote = true;
        }
        Ok(())
    }
}

/// One linear piece of a McNaughton function.
#[derive(Clone, Debug)]
pub struct Cell {
    polytope: Polytope,
    form: AffineForm,
}

impl Cell {
    pub fn form(&self) -> &AffineForm {
        &self.form
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn vertices(&self) -> Vec<Vec<BigRational>> {
        self.polytope
            .vertices()
            .iter()
            .map(HPoint::to_rationals)
            .collect()
    }
}

/// Result of a zero test: either the function vanishes on the whole cube, or
/// a cell vertex where it does not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroTest {
    Zero,
    NonZero {
        point: Vec<BigRational>,
        value: BigRational,
    },
}

impl ZeroTest {
    pub fn is_zero(&self) -> bool {
        matches!(self, ZeroTest::Zero)
    }
}

/// Pointwise comparison of two functions over the cube.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointwiseOrder {
    pub le: bool,
    pub ge: bool,
}

impl PointwiseOrder {
    pub fn equal(self) -> bool {
        self.le && self.ge
    }
}

/// A continuous piecewise-linear function `[0,1]^n -> [0,1]` with integer
/// affine pieces, stored as a list of full-dimensional convex cells covering
/// the cube.
#[derive(Clone, Debug)]
pub struct PwlComplex {
    dim: usize,
    cells: Vec<Cell>,
}

impl PwlComplex {
    pub fn constant(value: bool, dim: usize) -> PwlComplex {
        PwlComplex {
            dim,
            cells: vec![Cell {
                polytope: Polytope::unit_cube(dim),
                form: AffineForm::constant(value as i64, dim),
            }],
        }
    }

    /// The projection `π_i` on `[0,1]^dim`.
    pub fn coordinate(i: usize, dim: usize) -> Result<PwlComplex, PwlError> {
        if i == 0 || i > dim {
            return Err(PwlError::IndexOutOfRange { index: i, dim });
        }
        Ok(PwlComplex {
            dim,
            cells: vec![Cell {
                polytope: Polytope::unit_cube(dim),
                form: AffineForm::coordinate(i, dim),
            }],
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// `1 - f` on the same cells.
    pub fn neg(&self) -> PwlComplex {
        PwlComplex {
            dim: self.dim,
            cells: self
                .cells
                .iter()
                .map(|c| Cell {
                    polytope: c.polytope.clone(),
                    form: c.form.one_minus(),
                })
                .collect(),
        }
    }

    /// Truncated sum `min(1, f + g)` over the common refinement.
    pub fn oplus(&self, other: &PwlComplex, budget: usize) -> Result<PwlComplex, PwlError> {
        self.check_dim(other)?;
        let one = AffineForm::constant(1, self.dim);
        let mut cells = Vec::new();
        let mut err = None;
        overlay(self, other, |poly, fa, fb| {
            let sum = fa.add(fb);
            let mut below = false;
            let mut above = false;
            for v in poly.vertices() {
                let diff = sum.eval_scaled(v) - v.denominator();
                below |= diff.is_negative();
                above |= diff.is_positive();
            }
            if !above {
                cells.push(Cell {
                    polytope: poly,
                    form: sum,
                });
            } else if !below {
                cells.push(Cell {
                    polytope: poly,
                    form: one.clone(),
                });
            } else {
                // sum is not constant here, so the hyperplane sum = 1 exists
                let h = HalfSpace::new(sum.coeffs.clone(), BigInt::one() - &sum.constant)
                    .expect("nonconstant form");
                if let Clip::Cut(lo) = poly.clip(&h) {
                    cells.push(Cell {
                        polytope: lo,
                        form: sum,
                    });
                }
                if let Clip::Cut(hi) = poly.clip(&h.flipped()) {
                    cells.push(Cell {
                        polytope: hi,
                        form: one.clone(),
                    });
                }
            }
            if cells.len() > budget {
                err = Some(PwlError::CellBudgetExceeded { budget });
                return false;
            }
            true
        });
        if let Some(e) = err {
            return Err(e);
        }
        Ok(PwlComplex {
            dim: self.dim,
            cells: merge_cells(cells),
        })
    }

    /// Pointwise comparison of `self` against `other`.
    pub fn compare(&self, other: &PwlComplex) -> Result<PointwiseOrder, PwlError> {
        self.check_dim(other)?;
        let mut ord = PointwiseOrder { le: true, ge: true };
        overlay(self, other, |poly, fa, fb| {
            for v in poly.vertices() {
                let d = fa.eval_scaled(v) - fb.eval_scaled(v);
                ord.le &= !d.is_positive();
                ord.ge &= !d.is_negative();
            }
            ord.le || ord.ge
        });
        Ok(ord)
    }

    pub fn eval_at(&self, point: &[BigRational]) -> Result<BigRational, PwlError> {
        if point.len() != self.dim {
            return Err(PwlError::DimensionMismatch {
                left: self.dim,
                right: point.len(),
            });
        }
        let p = HPoint::from_rationals(point);
        if !p.in_unit_cube() {
            return Err(PwlError::PointOutOfCube);
        }
        let cell = self
            .cells
            .iter()
            .find(|c| c.polytope.contains(&p))
            .expect("cells cover the unit cube");
        Ok(cell.form.eval_h(&p))
    }

    /// Vertex-based zero test. When the function is not identically zero the
    /// witness is the first vertex attaining the largest value.
    pub fn is_zero(&self) -> ZeroTest {
        let mut best: Option<(&HPoint, BigRational)> = None;
        for c in &self.cells {
            for v in c.polytope.vertices() {
                let val = c.form.eval_h(v);
                if val.is_zero() {
                    continue;
                }
                if best.as_ref().is_none_or(|(_, b)| val > *b) {
                    best = Some((v, val));
                }
            }
        }
        match best {
            None => ZeroTest::Zero,
            Some((p, value)) => ZeroTest::NonZero {
                point: p.to_rationals(),
                value,
            },
        }
    }

    /// The function is identically 1.
    pub fn is_one(&self) -> bool {
        self.neg().is_zero().is_zero()
    }

    /// Checks vertex ranges and continuity across cells; returns a
    /// description of the first violation.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut seen: HashMap<&HPoint, BigRational> = HashMap::new();
        for (ci, c) in self.cells.iter().enumerate() {
            if c.form.dim() != self.dim || c.polytope.dim() != self.dim {
                return Err(format!("cell {ci} has the wrong dimension"));
            }
            for v in c.polytope.vertices() {
                if !v.in_unit_cube() {
                    return Err(format!("cell {ci} has a vertex outside the cube"));
                }
                let val = c.form.eval_h(v);
                if val.is_negative() || val > BigRational::one() {
                    return Err(format!("cell {ci} takes value {val} outside [0,1]"));
                }
                if let Some(prev) = seen.get(v) {
                    if *prev != val {
                        return Err(format!(
                            "discontinuity at {:?}: {prev} vs {val}",
                            v.to_rationals()
                        ));
                    }
                } else {
                    seen.insert(v, val);
                }
            }
        }
        Ok(())
    }

    /// Largest vertex denominator over all cells.
    pub fn max_vertex_denominator(&self) -> BigInt {
        self.cells
            .iter()
            .flat_map(|c| c.polytope.vertices())
            .map(|v| v.denominator().clone())
            .max()
            .unwrap_or_else(BigInt::one)
    }

    fn check_dim(&self, other: &PwlComplex) -> Result<(), PwlError> {
        if self.dim != other.dim {
            return Err(PwlError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }
}

/// Debug dump: one cell per line, vertices as fractions, then the form.
impl fmt::Display for PwlComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cells {
            let verts: Vec<String> = c
                .polytope
                .vertices()
                .iter()
                .map(|v| {
                    let cs: Vec<String> = v.to_rationals().iter().map(|q| q.to_string()).collect();
                    format!("({})", cs.join(", "))
                })
                .collect();
            writeln!(f, "{} : {}", verts.join(" "), c.form)?;
        }
        Ok(())
    }
}

/// Visits every full-dimensional intersection of a cell of `a` with a cell of
/// `b`, in a fixed order. The visitor returns `false` to stop early.
fn overlay<F>(a: &PwlComplex, b: &PwlComplex, mut visit: F)
where
    F: FnMut(Polytope, &AffineForm, &AffineForm) -> bool,
{
    const EPS: f64 = 1e-9;
    let boxes_a: Vec<_> = a.cells.iter().map(|c| c.polytope.bbox()).collect();
    let boxes_b: Vec<_> = b.cells.iter().map(|c| c.polytope.bbox()).collect();
    let mut order_b: Vec<usize> = (0..b.cells.len()).collect();
    order_b.sort_by(|&i, &j| boxes_b[i][0].0.total_cmp(&boxes_b[j][0].0));
    for (ca, ba) in a.cells.iter().zip(&boxes_a) {
        for &jb in &order_b {
            let bb = &boxes_b[jb];
            if bb[0].0 > ba[0].1 + EPS {
                break;
            }
            let disjoint = ba
                .iter()
                .zip(bb)
                .any(|(x, y)| x.1 + EPS < y.0 || y.1 + EPS < x.0);
            if disjoint {
                continue;
            }
            let cb = &b.cells[jb];
            let Some(poly) = ca.polytope.intersect(&cb.polytope) else {
                continue;
            };
            if !visit(poly, &ca.form, &cb.form) {
                return;
            }
        }
    }
}

/// Greedily merges cells carrying the same form whose union is convex.
fn merge_cells(cells: Vec<Cell>) -> Vec<Cell> {
    let mut index: HashMap<AffineForm, usize> = HashMap::new();
    let mut groups: Vec<(AffineForm, Vec<Polytope>)> = Vec::new();
    for c in cells {
        match index.get(&c.form) {
            Some(&g) => groups[g].1.push(c.polytope),
            None => {
                index.insert(c.form.clone(), groups.len());
                groups.push((c.form, vec![c.polytope]));
            }
        }
    }
    let mut out = Vec::new();
    for (form, mut polys) in groups {
        let mut changed = true;
        while changed {
            changed = false;
            let mut i = 0;
            while i < polys.len() {
                let mut j = i + 1;
                while j < polys.len() {
                    if let Some(m) = polys[i].try_merge(&polys[j]) {
                        polys[i] = m;
                        polys.remove(j);
                        changed = true;
                    } else {
                        j += 1;
                    }
                }
                i += 1;
            }
        }
        out.extend(polys.into_iter().map(|polytope| Cell {
            polytope,
            form: form.clone(),
        }));
    }
    out
}
