//! Exact convex polytopes inside the unit cube.
//!
//! A polytope carries both representations: integer half-spaces and the
//! vertex list. Each vertex remembers which constraints are tight at it, so
//! edges can be recovered combinatorially when the polytope is cut.
//! Vertices use homogeneous integer coordinates `num[i] / den`, which keeps
//! all sign tests and cuts gcd-free until a new vertex is normalized.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rational point stored as `num[i] / den` with `den > 0` and
/// `gcd(num..., den) = 1`, so equal points compare equal structurally.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HPoint {
    num: Vec<BigInt>,
    den: BigInt,
}

impl HPoint {
    pub fn new(mut num: Vec<BigInt>, mut den: BigInt) -> HPoint {
        assert!(!den.is_zero(), "zero denominator");
        if den.is_negative() {
            den = -den;
            for c in &mut num {
                *c = -&*c;
            }
        }
        let g = num.iter().fold(den.clone(), |g, c| g.gcd(c));
        if !g.is_one() {
            for c in &mut num {
                *c /= &g;
            }
            den /= &g;
        }
        HPoint { num, den }
    }

    pub fn from_rationals(coords: &[BigRational]) -> HPoint {
        let den = coords.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let num = coords
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        HPoint::new(num, den)
    }

    pub fn to_rationals(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn in_unit_cube(&self) -> bool {
        self.num.iter().all(|c| !c.is_negative() && c <= &self.den)
    }

    fn coord_f64(&self, i: usize) -> f64 {
        BigRational::new(self.num[i].clone(), self.den.clone())
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

/// The closed half-space `normal · x <= bound` with integer data divided by
/// its content, so that a hyperplane and its opposite side are recognizable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfSpace {
    normal: Vec<BigInt>,
    bound: BigInt,
}

impl HalfSpace {
    /// Returns `None` when the normal vanishes.
    pub fn new(mut normal: Vec<BigInt>, mut bound: BigInt) -> Option<HalfSpace> {
        if normal.iter().all(Zero::is_zero) {
            return None;
        }
        let g = normal.iter().fold(bound.clone(), |g, c| g.gcd(c));
        if !g.is_one() {
            for c in &mut normal {
                *c /= &g;
            }
            bound /= &g;
        }
        Some(HalfSpace { normal, bound })
    }

    pub fn normal(&self) -> &[BigInt] {
        &self.normal
    }

    pub fn bound(&self) -> &BigInt {
        &self.bound
    }

    pub fn flipped(&self) -> HalfSpace {
        HalfSpace {
            normal: self.normal.iter().map(|c| -c).collect(),
            bound: -&self.bound,
        }
    }

    /// `den * (normal · x - bound)`; its sign tells which side `p` is on.
    pub fn slack(&self, p: &HPoint) -> BigInt {
        let dot: BigInt = self
            .normal
            .iter()
            .zip(&p.num)
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, x)| a * x)
            .sum();
        dot - &self.bound * &p.den
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn insert(&mut self, i: usize) {
        let w = i / 64;
        if self.0.len() <= w {
            self.0.resize(w + 1, 0);
        }
        self.0[w] |= 1 << (i % 64);
    }

    fn contains(&self, i: usize) -> bool {
        self.0.get(i / 64).is_some_and(|w| w & (1 << (i % 64)) != 0)
    }

    fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_subset(&self, other: &BitSet) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, w)| w & !other.0.get(i).copied().unwrap_or(0) == 0)
    }

    fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64)
                .filter(move |b| w & (1 << b) != 0)
                .map(move |b| wi * 64 + b)
        })
    }
}

/// Outcome of cutting a polytope with a closed half-space.
#[derive(Clone, Debug)]
pub enum Clip {
    /// The polytope already lies inside the half-space.
    Unchanged,
    /// The intersection is empty or has no interior.
    Degenerate,
    Cut(Polytope),
}

/// Full-dimensional convex polytope in `R^dim`.
#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    constraints: Vec<HalfSpace>,
    vertices: Vec<HPoint>,
    tight: Vec<BitSet>,
}

impl Polytope {
    pub fn unit_cube(dim: usize) -> Polytope {
        assert!(dim >= 1, "the unit cube needs at least one dimension");
        let mut constraints = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            let mut lower = vec![BigInt::zero(); dim];
            lower[i] = -BigInt::one();
            constraints.push(HalfSpace::new(lower, BigInt::zero()).unwrap());
            let mut upper = vec![BigInt::zero(); dim];
            upper[i] = BigInt::one();
            constraints.push(HalfSpace::new(upper, BigInt::one()).unwrap());
        }
        let mut vertices = Vec::with_capacity(1 << dim);
        let mut tight = Vec::with_capacity(1 << dim);
        for mask in 0u64..(1u64 << dim) {
            let mut t = BitSet::default();
            let num = (0..dim)
                .map(|i| {
                    if mask & (1 << i) == 0 {
                        t.insert(2 * i);
                        BigInt::zero()
                    } else {
                        t.insert(2 * i + 1);
                        BigInt::one()
                    }
                })
                .collect();
            vertices.push(HPoint::new(num, BigInt::one()));
            tight.push(t);
        }
        Polytope {
            dim,
            constraints,
            vertices,
            tight,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[HPoint] {
        &self.vertices
    }

    pub fn constraints(&self) -> &[HalfSpace] {
        &self.constraints
    }

    pub fn contains(&self, p: &HPoint) -> bool {
        self.constraints.iter().all(|h| !h.slack(p).is_positive())
    }

    /// Axis-aligned bounding box, rounded to `f64` (only used as a prefilter).
    pub fn bbox(&self) -> Vec<(f64, f64)> {
        (0..self.dim)
            .map(|i| {
                self.vertices
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                        let c = v.coord_f64(i);
                        (lo.min(c), hi.max(c))
                    })
            })
            .collect()
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        let common = self.tight[u].intersection(&self.tight[v]);
        if common.len() + 1 < self.dim {
            return false;
        }
        !(0..self.vertices.len())
            .filter(|&w| w != u && w != v)
            .any(|w| common.is_subset(&self.tight[w]))
    }

    pub fn clip(&self, h: &HalfSpace) -> Clip {
        let slacks: Vec<BigInt> = self.vertices.iter().map(|v| h.slack(v)).collect();
        let any_out = slacks.iter().any(Signed::is_positive);
        let any_in = slacks.iter().any(Signed::is_negative);
        if !any_out {
            return Clip::Unchanged;
        }
        if !any_in {
            return Clip::Degenerate;
        }
        let k = self.constraints.len();
        let mut constraints = self.constraints.clone();
        constraints.push(h.clone());
        let mut vertices = Vec::new();
        let mut tight = Vec::new();
        for (i, s) in slacks.iter().enumerate() {
            if !s.is_positive() {
                let mut t = self.tight[i].clone();
                if s.is_zero() {
                    t.insert(k);
                }
                vertices.push(self.vertices[i].clone());
                tight.push(t);
            }
        }
        for (u, su) in slacks.iter().enumerate().filter(|(_, s)| s.is_negative()) {
            for (v, sv) in slacks.iter().enumerate().filter(|(_, s)| s.is_positive()) {
                if !self.adjacent(u, v) {
                    continue;
                }
                let (pu, pv) = (&self.vertices[u], &self.vertices[v]);
                // sv*u - su*v over sv*du - su*dv: the point of the edge where the slack vanishes.
                let num = pu
                    .num
                    .iter()
                    .zip(&pv.num)
                    .map(|(a, b)| sv * a - su * b)
                    .collect();
                let den = sv * &pu.den - su * &pv.den;
                let mut t = self.tight[u].intersection(&self.tight[v]);
                t.insert(k);
                vertices.push(HPoint::new(num, den));
                tight.push(t);
            }
        }
        let mut cut = Polytope {
            dim: self.dim,
            constraints,
            vertices,
            tight,
        };
        cut.prune();
        Clip::Cut(cut)
    }

    /// Drops constraints that cannot be facets (tight at fewer than `dim`
    /// vertices) and duplicates.
    fn prune(&mut self) {
        let mut keep = Vec::new();
        let mut remap = vec![usize::MAX; self.constraints.len()];
        for (ci, c) in self.constraints.iter().enumerate() {
            let count = self.tight.iter().filter(|t| t.contains(ci)).count();
            if count < self.dim {
                continue;
            }
            if let Some(prev) = keep
                .iter()
                .position(|&kj: &usize| self.constraints[kj] == *c)
            {
                remap[ci] = prev;
                continue;
            }
            remap[ci] = keep.len();
            keep.push(ci);
        }
        if keep.len() == self.constraints.len() {
            return;
        }
        for t in &mut self.tight {
            let mut nt = BitSet::default();
            for ci in t.iter() {
                if remap[ci] != usize::MAX {
                    nt.insert(remap[ci]);
                }
            }
            *t = nt;
        }
        self.constraints = keep
            .into_iter()
            .map(|ci| self.constraints[ci].clone())
            .collect();
    }

    /// Intersection with `other`, when it has nonempty interior.
    pub fn intersect(&self, other: &Polytope) -> Option<Polytope> {
        let mut acc: Option<Polytope> = None;
        for h in &other.constraints {
            let cur = acc.as_ref().unwrap_or(self);
            match cur.clip(h) {
                Clip::Unchanged => {}
                Clip::Degenerate => return None,
                Clip::Cut(p) => acc = Some(p),
            }
        }
        Some(acc.unwrap_or_else(|| self.clone()))
    }

    /// Merges two polytopes lying on opposite sides of a common facet
    /// hyperplane when their union is convex.
    pub fn try_merge(&self, other: &Polytope) -> Option<Polytope> {
        let (hi, hj) = self.constraints.iter().enumerate().find_map(|(i, h)| {
            let f = h.flipped();
            other
                .constraints
                .iter()
                .position(|g| *g == f)
                .map(|j| (i, j))
        })?;
        let mine_ok = self
            .constraints
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != hi)
            .all(|(_, h)| other.vertices.iter().all(|v| !h.slack(v).is_positive()));
        if !mine_ok {
            return None;
        }
        let theirs_ok = other
            .constraints
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != hj)
            .all(|(_, h)| self.vertices.iter().all(|v| !h.slack(v).is_positive()));
        if !theirs_ok {
            return None;
        }
        let mut constraints: Vec<HalfSpace> = Vec::new();
        for (i, h) in self.constraints.iter().enumerate() {
            if i != hi && !constraints.contains(h) {
                constraints.push(h.clone());
            }
        }
        for (j, h) in other.constraints.iter().enumerate() {
            if j != hj && !constraints.contains(h) {
                constraints.push(h.clone());
            }
        }
        let mut vertices: Vec<HPoint> = Vec::new();
        let mut tight = Vec::new();
        for v in self.vertices.iter().chain(&other.vertices) {
            if vertices.contains(v) {
                continue;
            }
            let mut t = BitSet::default();
            let mut rows = Vec::new();
            for (ci, h) in constraints.iter().enumerate() {
                if h.slack(v).is_zero() {
                    t.insert(ci);
                    rows.push(h.normal.clone());
                }
            }
            if rank(rows) == self.dim {
                vertices.push(v.clone());
                tight.push(t);
            }
        }
        let mut merged = Polytope {
            dim: self.dim,
            constraints,
            vertices,
            tight,
        };
        merged.prune();
        Some(merged)
    }
}

/// Rank of an integer matrix by fraction-free elimination.
fn rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for row in rows.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, pv) in row.iter_mut().zip(&pivot) {
                *x = &*x * &pivot[c] - &f * pv;
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}
