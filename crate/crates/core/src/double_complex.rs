//! Bounded double complexes over Q with anticommuting differentials
//! `d1` of bidegree (1,0) and `d2` of bidegree (0,1).
//!
//! Cohomology tables only list bidegrees (or degrees) with a nonzero value.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graded::{BigradedVectorSpace, GradingMode};
use crate::linalg::{kernel, Rational, SparseMatrix};
use crate::report::{Check, Report};

pub type Bidegree = (i32, i32);
pub type BidegreeTable = BTreeMap<Bidegree, usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDoubleComplex {
    dims: BTreeMap<Bidegree, usize>,
    d1: BTreeMap<Bidegree, SparseMatrix>,
    d2: BTreeMap<Bidegree, SparseMatrix>,
}

fn block_diag(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    let mut m = SparseMatrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
    for (r, c, x) in a.entries() {
        m.set(r, c, x.clone());
    }
    for (r, c, x) in b.entries() {
        m.set(a.rows() + r, a.cols() + c, x.clone());
    }
    m
}

fn nonzero(table: impl IntoIterator<Item = (Bidegree, usize)>) -> BidegreeTable {
    table.into_iter().filter(|&(_, n)| n > 0).collect()
}

impl FiniteDoubleComplex {
    /// Validates block shapes, `d1^2 = 0`, `d2^2 = 0` and `d1 d2 + d2 d1 = 0`.
    ///
    /// `d1[(p,q)]` maps the `(p,q)` component to `(p+1,q)`; `d2[(p,q)]` maps it
    /// to `(p,q+1)`. Missing blocks are zero.
    pub fn new(
        dims: BTreeMap<Bidegree, usize>,
        d1: BTreeMap<Bidegree, SparseMatrix>,
        d2: BTreeMap<Bidegree, SparseMatrix>,
    ) -> Result<Self> {
        let dims: BTreeMap<_, _> = dims.into_iter().filter(|&(_, n)| n > 0).collect();
        let dim = |b: Bidegree| dims.get(&b).copied().unwrap_or(0);
        for (name, blocks, step) in [("d1", &d1, (1, 0)), ("d2", &d2, (0, 1))] {
            for (&(p, q), m) in blocks {
                let to = (p + step.0, q + step.1);
                if m.rows() != dim(to) || m.cols() != dim((p, q)) {
                    return Err(Error::InvalidComplex(format!(
                        "{name} block at {:?} is {}x{}, expected {}x{}",
                        (p, q),
                        m.rows(),
                        m.cols(),
                        dim(to),
                        dim((p, q))
                    )));
                }
            }
        }
        let k = FiniteDoubleComplex {
            dims,
            d1: d1.into_iter().filter(|(_, m)| !m.is_zero()).collect(),
            d2: d2.into_iter().filter(|(_, m)| !m.is_zero()).collect(),
        };
        for &(p, q) in k.dims.keys() {
            if !k.d1_block(p + 1, q).mul(&k.d1_block(p, q)).is_zero() {
                return Err(Error::InvalidComplex(format!("d1 d1 != 0 on ({p},{q})")));
            }
            if !k.d2_block(p, q + 1).mul(&k.d2_block(p, q)).is_zero() {
                return Err(Error::InvalidComplex(format!("d2 d2 != 0 on ({p},{q})")));
            }
            let a = k.d1_block(p, q + 1).mul(&k.d2_block(p, q));
            let b = k.d2_block(p + 1, q).mul(&k.d1_block(p, q));
            if !a.add(&b).is_zero() {
                return Err(Error::InvalidComplex(format!("d1 d2 + d2 d1 != 0 on ({p},{q})")));
            }
        }
        Ok(k)
    }

    pub fn zero() -> Self {
        FiniteDoubleComplex {
            dims: BTreeMap::new(),
            d1: BTreeMap::new(),
            d2: BTreeMap::new(),
        }
    }

    /// Zero differentials on the given dimensions.
    pub fn dots(dims: impl IntoIterator<Item = (Bidegree, usize)>) -> Self {
        FiniteDoubleComplex {
            dims: nonzero(dims),
            d1: BTreeMap::new(),
            d2: BTreeMap::new(),
        }
    }

    /// The all-dot model of a Dolbeault-graded space: its Hodge numbers with zero differentials.
    pub fn hodge_model(space: &BigradedVectorSpace) -> Result<Self> {
        if space.mode() != GradingMode::Dolbeault {
            return Err(Error::ModeMismatch("Hodge models need Dolbeault grading".into()));
        }
        Ok(Self::dots(space.dims().into_iter().map(|(d, n)| ((d.p, d.q), n))))
    }

    /// A single square with corners at `(p,q)` and `(p+1,q+1)`.
    pub fn square(p: i32, q: i32) -> Self {
        let mut b = Builder::default();
        let a = b.gen((p, q));
        let x = b.gen((p + 1, q));
        let y = b.gen((p, q + 1));
        let t = b.gen((p + 1, q + 1));
        b.d1(a, x, 1);
        b.d2(a, y, 1);
        b.d1(y, t, 1);
        b.d2(x, t, -1);
        b.build()
    }

    pub fn dims(&self) -> &BTreeMap<Bidegree, usize> {
        &self.dims
    }

    pub fn dim(&self, p: i32, q: i32) -> usize {
        self.dims.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn d1_block(&self, p: i32, q: i32) -> SparseMatrix {
        self.d1
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(self.dim(p + 1, q), self.dim(p, q)))
    }

    pub fn d2_block(&self, p: i32, q: i32) -> SparseMatrix {
        self.d2
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(self.dim(p, q + 1), self.dim(p, q)))
    }

    pub fn d1_blocks(&self) -> &BTreeMap<Bidegree, SparseMatrix> {
        &self.d1
    }

    pub fn d2_blocks(&self) -> &BTreeMap<Bidegree, SparseMatrix> {
        &self.d2
    }

    fn cycles_and_boundaries(&self, kind: Kind, p: i32, q: i32) -> (SparseMatrix, SparseMatrix) {
        match kind {
            Kind::Row => (kernel(&self.d1_block(p, q)).matrix().clone(), self.d1_block(p - 1, q)),
            Kind::Column => (kernel(&self.d2_block(p, q)).matrix().clone(), self.d2_block(p, q - 1)),
            Kind::BottChern => {
                let z = kernel(&self.d1_block(p, q).vstack(&self.d2_block(p, q)));
                let b = self.d1_block(p - 1, q).mul(&self.d2_block(p - 1, q - 1));
                (z.matrix().clone(), b)
            }
            Kind::Aeppli => {
                let z = kernel(&self.d1_block(p, q + 1).mul(&self.d2_block(p, q)));
                let b = self.d1_block(p - 1, q).hstack(&self.d2_block(p, q - 1));
                (z.matrix().clone(), b)
            }
        }
    }

    fn cohomology(&self, kind: Kind) -> BidegreeTable {
        nonzero(self.dims.keys().map(|&(p, q)| {
            let (z, b) = self.cycles_and_boundaries(kind, p, q);
            ((p, q), z.cols() - b.rank())
        }))
    }

    /// `ker d1 / im d1` per bidegree.
    pub fn row_cohomology(&self) -> BidegreeTable {
        self.cohomology(Kind::Row)
    }

    /// `ker d2 / im d2` per bidegree.
    pub fn column_cohomology(&self) -> BidegreeTable {
        self.cohomology(Kind::Column)
    }

    /// `(ker d1 ∩ ker d2) / im d1 d2`.
    pub fn bott_chern(&self) -> BidegreeTable {
        self.cohomology(Kind::BottChern)
    }

    /// `ker d1 d2 / (im d1 + im d2)`.
    pub fn aeppli(&self) -> BidegreeTable {
        self.cohomology(Kind::Aeppli)
    }

    fn total_layout(&self, n: i32) -> Vec<(Bidegree, usize)> {
        let mut offset = 0;
        let mut out = Vec::new();
        for (&(p, q), &d) in &self.dims {
            if p + q == n {
                out.push(((p, q), offset));
                offset += d;
            }
        }
        out
    }

    /// The total differential `d1 + d2` from degree `n` to `n + 1`.
    pub fn total_differential(&self, n: i32) -> SparseMatrix {
        let src = self.total_layout(n);
        let tgt = self.total_layout(n + 1);
        let rows: usize = tgt.iter().map(|&(b, _)| self.dim(b.0, b.1)).sum();
        let cols: usize = src.iter().map(|&(b, _)| self.dim(b.0, b.1)).sum();
        let tgt_offset: BTreeMap<_, _> = tgt.into_iter().collect();
        let mut m = SparseMatrix::zeros(rows, cols);
        for ((p, q), c0) in src {
            for (block, to) in [(self.d1.get(&(p, q)), (p + 1, q)), (self.d2.get(&(p, q)), (p, q + 1))] {
                if let (Some(block), Some(&r0)) = (block, tgt_offset.get(&to)) {
                    for (r, c, x) in block.entries() {
                        m.add_to(r0 + r, c0 + c, x);
                    }
                }
            }
        }
        m
    }

    /// Cohomology of the total complex with differential `d1 + d2`.
    pub fn total_cohomology(&self) -> BTreeMap<i32, usize> {
        let degrees: BTreeSet<i32> = self.dims.keys().map(|&(p, q)| p + q).collect();
        let mut out = BTreeMap::new();
        for n in degrees {
            let dim: usize = self.total_layout(n).iter().map(|&(b, _)| self.dim(b.0, b.1)).sum();
            let h = dim - self.total_differential(n).rank() - self.total_differential(n - 1).rank();
            if h > 0 {
                out.insert(n, h);
            }
        }
        out
    }

    /// Keeps the columns `s <= p <= t`; `s > t` gives the zero complex.
    pub fn truncate_columns(&self, s: i32, t: i32) -> Self {
        if s > t {
            return Self::zero();
        }
        let keep = |p: i32| s <= p && p <= t;
        FiniteDoubleComplex {
            dims: self
                .dims
                .iter()
                .filter(|(b, _)| keep(b.0))
                .map(|(&b, &n)| (b, n))
                .collect(),
            d1: self
                .d1
                .iter()
                .filter(|(b, _)| keep(b.0) && keep(b.0 + 1))
                .map(|(&b, m)| (b, m.clone()))
                .collect(),
            d2: self
                .d2
                .iter()
                .filter(|(b, _)| keep(b.0))
                .map(|(&b, m)| (b, m.clone()))
                .collect(),
        }
    }

    /// Moves every component from `(p,q)` to `(p+a, q+b)`.
    pub fn shifted(&self, a: i32, b: i32) -> Self {
        let mv = |(p, q): Bidegree| (p + a, q + b);
        FiniteDoubleComplex {
            dims: self.dims.iter().map(|(&k, &n)| (mv(k), n)).collect(),
            d1: self.d1.iter().map(|(&k, m)| (mv(k), m.clone())).collect(),
            d2: self.d2.iter().map(|(&k, m)| (mv(k), m.clone())).collect(),
        }
    }

    /// `self (+) other`, with `self`'s basis first in every bidegree.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let keys: BTreeSet<Bidegree> = self.dims.keys().chain(other.dims.keys()).copied().collect();
        let dims = keys
            .iter()
            .map(|&(p, q)| ((p, q), self.dim(p, q) + other.dim(p, q)))
            .collect();
        let blocks = |mine: &BTreeMap<Bidegree, SparseMatrix>,
                      theirs: &BTreeMap<Bidegree, SparseMatrix>,
                      a: &dyn Fn(Bidegree) -> SparseMatrix,
                      b: &dyn Fn(Bidegree) -> SparseMatrix| {
            let ks: BTreeSet<Bidegree> = mine.keys().chain(theirs.keys()).copied().collect();
            ks.into_iter().map(|k| (k, block_diag(&a(k), &b(k)))).collect()
        };
        let d1 = blocks(&self.d1, &other.d1, &|(p, q)| self.d1_block(p, q), &|(p, q)| {
            other.d1_block(p, q)
        });
        let d2 = blocks(&self.d2, &other.d2, &|(p, q)| self.d2_block(p, q), &|(p, q)| {
            other.d2_block(p, q)
        });
        FiniteDoubleComplex { dims, d1, d2 }
    }

    /// The complex `g K g^{-1}` together with the isomorphism `g: K -> gK`.
    /// Every `g[(p,q)]` must be invertible of size `dim(p,q)`.
    pub fn change_basis(&self, g: &BTreeMap<Bidegree, SparseMatrix>) -> Result<DoubleComplexMorphism> {
        let mut inv = BTreeMap::new();
        for (&(p, q), &n) in &self.dims {
            let m = g
                .get(&(p, q))
                .ok_or_else(|| Error::InvalidComplex(format!("no basis change at ({p},{q})")))?;
            if m.rows() != n || m.cols() != n {
                return Err(Error::InvalidComplex(format!(
                    "basis change at ({p},{q}) has the wrong size"
                )));
            }
            let i = crate::linalg::inverse(m)
                .ok_or_else(|| Error::InvalidComplex(format!("basis change at ({p},{q}) is singular")))?;
            inv.insert((p, q), i);
        }
        let conj = |blocks: &BTreeMap<Bidegree, SparseMatrix>, step: Bidegree| -> BTreeMap<Bidegree, SparseMatrix> {
            blocks
                .iter()
                .map(|(&(p, q), m)| ((p, q), g[&(p + step.0, q + step.1)].mul(m).mul(&inv[&(p, q)])))
                .collect()
        };
        let target = FiniteDoubleComplex::new(self.dims.clone(), conj(&self.d1, (1, 0)), conj(&self.d2, (0, 1)))?;
        let blocks = self.dims.keys().map(|&k| (k, g[&k].clone())).collect();
        DoubleComplexMorphism::new(self.clone(), target, blocks)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Row,
    Column,
    BottChern,
    Aeppli,
}

/// Incremental construction of a complex from generators and arrows.
#[derive(Default)]
struct Builder {
    dims: BTreeMap<Bidegree, usize>,
    d1: Vec<((Bidegree, usize), usize, i64)>,
    d2: Vec<((Bidegree, usize), usize, i64)>,
}

impl Builder {
    fn gen(&mut self, at: Bidegree) -> (Bidegree, usize) {
        let n = self.dims.entry(at).or_insert(0);
        *n += 1;
        (at, *n - 1)
    }

    fn d1(&mut self, from: (Bidegree, usize), to: (Bidegree, usize), c: i64) {
        debug_assert_eq!(to.0, (from.0 .0 + 1, from.0 .1));
        self.d1.push((from, to.1, c));
    }

    fn d2(&mut self, from: (Bidegree, usize), to: (Bidegree, usize), c: i64) {
        debug_assert_eq!(to.0, (from.0 .0, from.0 .1 + 1));
        self.d2.push((from, to.1, c));
    }

    fn build(self) -> FiniteDoubleComplex {
        let dim = |b: Bidegree| self.dims.get(&b).copied().unwrap_or(0);
        let mut d1: BTreeMap<Bidegree, SparseMatrix> = BTreeMap::new();
        let mut d2: BTreeMap<Bidegree, SparseMatrix> = BTreeMap::new();
        for ((b, i), j, c) in &self.d1 {
            d1.entry(*b)
                .or_insert_with(|| SparseMatrix::zeros(dim((b.0 + 1, b.1)), dim(*b)))
                .set(*j, *i, Rational::from_integer((*c).into()));
        }
        for ((b, i), j, c) in &self.d2 {
            d2.entry(*b)
                .or_insert_with(|| SparseMatrix::zeros(dim((b.0, b.1 + 1)), dim(*b)))
                .set(*j, *i, Rational::from_integer((*c).into()));
        }
        FiniteDoubleComplex::new(self.dims, d1, d2).expect("shapes built from valid arrows")
    }
}

/// A morphism of double complexes, given by one block per source bidegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleComplexMorphism {
    source: FiniteDoubleComplex,
    target: FiniteDoubleComplex,
    blocks: BTreeMap<Bidegree, SparseMatrix>,
}

impl DoubleComplexMorphism {
    /// Validates block shapes and `f d1 = d1 f`, `f d2 = d2 f`.
    pub fn new(
        source: FiniteDoubleComplex,
        target: FiniteDoubleComplex,
        blocks: BTreeMap<Bidegree, SparseMatrix>,
    ) -> Result<Self> {
        for (&(p, q), m) in &blocks {
            if m.rows() != target.dim(p, q) || m.cols() != source.dim(p, q) {
                return Err(Error::InvalidComplex(format!(
                    "morphism block at ({p},{q}) has the wrong shape"
                )));
            }
        }
        let f = DoubleComplexMorphism { source, target, blocks };
        for &(p, q) in f.source.dims.keys() {
            let a = f.block(p + 1, q).mul(&f.source.d1_block(p, q));
            let b = f.target.d1_block(p, q).mul(&f.block(p, q));
            if a != b {
                return Err(Error::InvalidComplex(format!(
                    "morphism does not commute with d1 at ({p},{q})"
                )));
            }
            let a = f.block(p, q + 1).mul(&f.source.d2_block(p, q));
            let b = f.target.d2_block(p, q).mul(&f.block(p, q));
            if a != b {
                return Err(Error::InvalidComplex(format!(
                    "morphism does not commute with d2 at ({p},{q})"
                )));
            }
        }
        Ok(f)
    }

    pub fn identity(k: &FiniteDoubleComplex) -> Self {
        let blocks = k.dims.iter().map(|(&b, &n)| (b, SparseMatrix::identity(n))).collect();
        DoubleComplexMorphism {
            source: k.clone(),
            target: k.clone(),
            blocks,
        }
    }

    /// `K -> K (+) other`.
    pub fn inclusion(k: &FiniteDoubleComplex, other: &FiniteDoubleComplex) -> Self {
        let target = k.direct_sum(other);
        let blocks = k
            .dims
            .iter()
            .map(|(&(p, q), &n)| {
                let mut m = SparseMatrix::zeros(target.dim(p, q), n);
                for i in 0..n {
                    m.set(i, i, Rational::from_integer(1.into()));
                }
                ((p, q), m)
            })
            .collect();
        DoubleComplexMorphism {
            source: k.clone(),
            target,
            blocks,
        }
    }

    /// `K (+) other -> K`.
    pub fn projection(k: &FiniteDoubleComplex, other: &FiniteDoubleComplex) -> Self {
        let source = k.direct_sum(other);
        let blocks = source
            .dims
            .iter()
            .map(|(&(p, q), &n)| {
                let mut m = SparseMatrix::zeros(k.dim(p, q), n);
                for i in 0..k.dim(p, q) {
                    m.set(i, i, Rational::from_integer(1.into()));
                }
                ((p, q), m)
            })
            .collect();
        DoubleComplexMorphism {
            source,
            target: k.clone(),
            blocks,
        }
    }

    pub fn source(&self) -> &FiniteDoubleComplex {
        &self.source
    }

    pub fn target(&self) -> &FiniteDoubleComplex {
        &self.target
    }

    pub fn block(&self, p: i32, q: i32) -> SparseMatrix {
        self.blocks
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(self.target.dim(p, q), self.source.dim(p, q)))
    }

    /// `self o g`.
    pub fn compose(&self, g: &DoubleComplexMorphism) -> Result<Self> {
        if g.target != self.source {
            return Err(Error::SpaceMismatch("morphisms are not composable".into()));
        }
        let blocks = g
            .source
            .dims
            .keys()
            .map(|&(p, q)| ((p, q), self.block(p, q).mul(&g.block(p, q))))
            .collect();
        DoubleComplexMorphism::new(g.source.clone(), self.target.clone(), blocks)
    }

    /// Rank of the induced map on one cohomology at `(p,q)`:
    /// `dim(f(Z_s) + B_t) - dim B_t`.
    fn induced_rank(&self, kind: Kind, p: i32, q: i32) -> usize {
        let (zs, _) = self.source.cycles_and_boundaries(kind, p, q);
        let (_, bt) = self.target.cycles_and_boundaries(kind, p, q);
        let fz = self.block(p, q).mul(&zs);
        fz.hstack(&bt).rank() - bt.rank()
    }

    fn induces_isomorphism(&self, kind: Kind) -> Result<(), String> {
        let (hs, ht) = (self.source.cohomology(kind), self.target.cohomology(kind));
        let keys: BTreeSet<Bidegree> = hs.keys().chain(ht.keys()).copied().collect();
        for (p, q) in keys {
            let (a, b) = (
                hs.get(&(p, q)).copied().unwrap_or(0),
                ht.get(&(p, q)).copied().unwrap_or(0),
            );
            if a != b {
                return Err(format!("{kind:?} dimensions differ at ({p},{q}): {a} vs {b}"));
            }
            let rank = self.induced_rank(kind, p, q);
            if rank != a {
                return Err(format!(
                    "induced {kind:?} map at ({p},{q}) has rank {rank}, expected {a}"
                ));
            }
        }
        Ok(())
    }

    /// Whether the induced maps on row and column cohomology are isomorphisms.
    pub fn is_e1_isomorphism(&self) -> bool {
        self.induces_isomorphism(Kind::Row).is_ok() && self.induces_isomorphism(Kind::Column).is_ok()
    }
}

/// For an `E_1`-isomorphism, checks that Bott-Chern and Aeppli dimensions agree
/// and that the induced maps on both are isomorphisms.
pub fn stelzig_check(f: &DoubleComplexMorphism) -> Result<Report> {
    if !f.is_e1_isomorphism() {
        return Err(Error::Precondition("morphism is not an E1-isomorphism".into()));
    }
    let mut report = Report::default();
    for (name, kind) in [("bott-chern", Kind::BottChern), ("aeppli", Kind::Aeppli)] {
        report.push(Check::from_result(
            format!("{name} isomorphism"),
            f.induces_isomorphism(kind),
        ));
    }
    Ok(report)
}

/// Random complexes and `E_1`-isomorphisms built from dots, squares and short zigzags.
pub mod generate {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::linalg::frac;

    #[derive(Clone, Copy, Debug, PartialEq, Eq)]
    pub enum Shape {
        Dot,
        Square,
        /// `x -> d1 x`.
        Horizontal,
        /// `x -> d2 x`.
        Vertical,
        /// `x` with both `d1 x` and `d2 x` nonzero.
        Source,
        /// `d1 y = d2 z`.
        Sink,
    }

    pub const SHAPES: [Shape; 6] = [
        Shape::Dot,
        Shape::Square,
        Shape::Horizontal,
        Shape::Vertical,
        Shape::Source,
        Shape::Sink,
    ];

    /// Direct sum of the given shapes, each anchored at its lower-left corner.
    pub fn from_shapes(shapes: &[(Shape, Bidegree)]) -> FiniteDoubleComplex {
        let mut b = Builder::default();
        for &(shape, (p, q)) in shapes {
            match shape {
                Shape::Dot => {
                    b.gen((p, q));
                }
                Shape::Square => {
                    let a = b.gen((p, q));
                    let x = b.gen((p + 1, q));
                    let y = b.gen((p, q + 1));
                    let t = b.gen((p + 1, q + 1));
                    b.d1(a, x, 1);
                    b.d2(a, y, 1);
                    b.d1(y, t, 1);
                    b.d2(x, t, -1);
                }
                Shape::Horizontal => {
                    let a = b.gen((p, q));
                    let x = b.gen((p + 1, q));
                    b.d1(a, x, 1);
                }
                Shape::Vertical => {
                    let a = b.gen((p, q));
                    let y = b.gen((p, q + 1));
                    b.d2(a, y, 1);
                }
                Shape::Source => {
                    let a = b.gen((p, q));
                    let x = b.gen((p + 1, q));
                    let y = b.gen((p, q + 1));
                    b.d1(a, x, 1);
                    b.d2(a, y, 1);
                }
                Shape::Sink => {
                    let y = b.gen((p, q + 1));
                    let x = b.gen((p + 1, q));
                    let t = b.gen((p + 1, q + 1));
                    b.d1(y, t, 1);
                    b.d2(x, t, 1);
                }
            }
        }
        b.build()
    }

    fn small_rational(rng: &mut impl Rng) -> Rational {
        frac(rng.gen_range(-3..=3), rng.gen_range(1..=3))
    }

    fn nonzero_rational(rng: &mut impl Rng) -> Rational {
        let n = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
        frac(n, rng.gen_range(1..=3))
    }

    /// A random invertible `n x n` matrix, as a product of unitriangular and
    /// invertible upper-triangular factors.
    pub fn random_invertible(rng: &mut impl Rng, n: usize) -> SparseMatrix {
        let mut l = SparseMatrix::identity(n);
        let mut u = SparseMatrix::zeros(n, n);
        for i in 0..n {
            u.set(i, i, nonzero_rational(rng));
            for j in 0..n {
                if j < i {
                    l.set(i, j, small_rational(rng));
                } else if j > i {
                    u.set(i, j, small_rational(rng));
                }
            }
        }
        l.mul(&u)
    }

    pub fn random_basis_change(rng: &mut impl Rng, k: &FiniteDoubleComplex) -> BTreeMap<Bidegree, SparseMatrix> {
        k.dims().iter().map(|(&b, &n)| (b, random_invertible(rng, n))).collect()
    }

    pub fn random_shapes(rng: &mut impl Rng, count: usize, span: i32) -> Vec<(Shape, Bidegree)> {
        (0..count)
            .map(|_| {
                let s = SHAPES[rng.gen_range(0..SHAPES.len())];
                (s, (rng.gen_range(0..span), rng.gen_range(0..span)))
            })
            .collect()
    }

    pub fn random_complex(seed: u64) -> FiniteDoubleComplex {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=5);
        from_shapes(&random_shapes(&mut rng, n, 3))
    }

    /// `g_t o (K (+) S1 -> K (+) S2) o g_s^{-1}`, where `S1`, `S2` are sums of
    /// squares and the middle map is the identity on `K`. Always an `E_1`-isomorphism.
    pub fn random_e1_isomorphism(seed: u64) -> Result<DoubleComplexMorphism> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=5);
        let k = from_shapes(&random_shapes(&mut rng, n, 3));
        let mut squares = |min: usize| {
            let m = rng.gen_range(min..=2);
            let shapes: Vec<_> = (0..m)
                .map(|_| (Shape::Square, (rng.gen_range(0..3), rng.gen_range(0..3))))
                .collect();
            from_shapes(&shapes)
        };
        let (s1, s2) = (squares(0), squares(1));
        let incl = DoubleComplexMorphism::inclusion(&k, &s2);
        let proj = DoubleComplexMorphism::projection(&k, &s1);
        let core = incl.compose(&proj)?;

        let gs = core
            .source()
            .change_basis(&random_basis_change(&mut rng, core.source()))?;
        let gt = core
            .target()
            .change_basis(&random_basis_change(&mut rng, core.target()))?;
        // g_s^{-1}: the inverse basis change, read backwards.
        let inv_blocks = gs
            .source()
            .dims()
            .keys()
            .map(|&(p, q)| ((p, q), crate::linalg::inverse(&gs.block(p, q)).expect("invertible")))
            .collect();
        let gs_inv = DoubleComplexMorphism::new(gs.target().clone(), gs.source().clone(), inv_blocks)?;
        gt.compose(&core)?.compose(&gs_inv)
    }
}

#[cfg(test)]
mod tests {
    use super::generate::*;
    use super::*;

    fn table(entries: &[((i32, i32), usize)]) -> BidegreeTable {
        entries.iter().copied().collect()
    }

    #[test]
    fn dot_cohomologies() {
        let k = FiniteDoubleComplex::dots([((0, 0), 1)]);
        let t = table(&[((0, 0), 1)]);
        assert_eq!(k.row_cohomology(), t);
        assert_eq!(k.column_cohomology(), t);
        assert_eq!(k.bott_chern(), t);
        assert_eq!(k.aeppli(), t);
        assert_eq!(k.total_cohomology(), BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn square_is_acyclic() {
        let k = FiniteDoubleComplex::square(0, 0);
        assert!(k.row_cohomology().is_empty());
        assert!(k.column_cohomology().is_empty());
        assert!(k.bott_chern().is_empty());
        assert!(k.aeppli().is_empty());
        assert!(k.total_cohomology().is_empty());
    }

    #[test]
    fn dot_plus_square() {
        let k = FiniteDoubleComplex::dots([((0, 0), 1)]).direct_sum(&FiniteDoubleComplex::square(0, 0));
        let t = table(&[((0, 0), 1)]);
        assert_eq!(k.row_cohomology(), t);
        assert_eq!(k.column_cohomology(), t);
        assert_eq!(k.bott_chern(), t);
        assert_eq!(k.aeppli(), t);
    }

    #[test]
    fn projective_plane_model() {
        let k = FiniteDoubleComplex::dots([((0, 0), 1), ((1, 1), 1), ((2, 2), 1)]);
        assert_eq!(k.bott_chern(), table(&[((0, 0), 1), ((1, 1), 1), ((2, 2), 1)]));
        assert_eq!(k.total_cohomology(), BTreeMap::from([(0, 1), (2, 1), (4, 1)]));
    }

    #[test]
    fn zigzags() {
        // x -> d1 x: BC sees the target, Aeppli sees the source.
        let h = from_shapes(&[(Shape::Horizontal, (0, 0))]);
        assert!(h.row_cohomology().is_empty());
        assert_eq!(h.column_cohomology(), table(&[((0, 0), 1), ((1, 0), 1)]));
        assert_eq!(h.bott_chern(), table(&[((1, 0), 1)]));
        assert_eq!(h.aeppli(), table(&[((0, 0), 1)]));
        assert!(h.total_cohomology().is_empty());

        // source a with d1 a = x, d2 a = y: BC = x, y; A = a; total H^1 = 1.
        let s = from_shapes(&[(Shape::Source, (0, 0))]);
        assert_eq!(s.bott_chern(), table(&[((0, 1), 1), ((1, 0), 1)]));
        assert_eq!(s.aeppli(), table(&[((0, 0), 1)]));
        assert_eq!(s.total_cohomology(), BTreeMap::from([(1, 1)]));

        let t = from_shapes(&[(Shape::Sink, (0, 0))]);
        assert_eq!(t.bott_chern(), table(&[((1, 1), 1)]));
        assert_eq!(t.aeppli(), table(&[((0, 1), 1), ((1, 0), 1)]));
        assert_eq!(t.total_cohomology(), BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn invalid_differentials_rejected() {
        let dims = BTreeMap::from([((0, 0), 1), ((1, 0), 1), ((0, 1), 1), ((1, 1), 1)]);
        let one = SparseMatrix::from_i64(&[&[1]]);
        let d1 = BTreeMap::from([((0, 0), one.clone()), ((0, 1), one.clone())]);
        let d2 = BTreeMap::from([((0, 0), one.clone()), ((1, 0), one.clone())]);
        let err = FiniteDoubleComplex::new(dims, d1, d2).unwrap_err();
        assert!(err.to_string().contains("d1 d2 + d2 d1"));

        let dims = BTreeMap::from([((0, 0), 1), ((1, 0), 1)]);
        let d1 = BTreeMap::from([((0, 0), SparseMatrix::from_i64(&[&[1, 1]]))]);
        assert!(FiniteDoubleComplex::new(dims, d1, BTreeMap::new()).is_err());
    }

    #[test]
    fn truncation() {
        let k = FiniteDoubleComplex::square(0, 0).direct_sum(&FiniteDoubleComplex::dots([((2, 0), 1)]));
        assert_eq!(k.truncate_columns(0, 5), k);
        assert_eq!(k.truncate_columns(3, 1), FiniteDoubleComplex::zero());
        // A single column: total cohomology is its column cohomology, shifted by p.
        let col = k.truncate_columns(1, 1);
        assert_eq!(col.total_cohomology(), BTreeMap::new());
        let col0 = k.truncate_columns(0, 0);
        assert!(col0.total_cohomology().is_empty());
        let col2 = k.truncate_columns(2, 2);
        assert_eq!(col2.total_cohomology(), BTreeMap::from([(2, 1)]));
        // Cutting a square in half leaves a vertical zigzag in each column.
        let h = FiniteDoubleComplex::square(0, 0).truncate_columns(1, 1);
        assert!(h.total_cohomology().is_empty());
        let v = FiniteDoubleComplex::square(0, 0).truncate_columns(0, 0);
        assert_eq!(v.column_cohomology(), BTreeMap::new());
    }

    #[test]
    fn e1_isomorphisms() {
        let k = from_shapes(&[
            (Shape::Dot, (0, 0)),
            (Shape::Horizontal, (0, 1)),
            (Shape::Source, (1, 1)),
        ]);
        assert!(DoubleComplexMorphism::identity(&k).is_e1_isomorphism());
        let sq = FiniteDoubleComplex::square(0, 0);
        let incl = DoubleComplexMorphism::inclusion(&k, &sq);
        assert!(incl.is_e1_isomorphism());
        assert!(stelzig_check(&incl).unwrap().all_passed());
        let proj = DoubleComplexMorphism::projection(&k, &sq);
        assert!(stelzig_check(&proj).unwrap().all_passed());

        let dot = FiniteDoubleComplex::dots([((0, 0), 1)]);
        let bad = DoubleComplexMorphism::inclusion(&k, &dot);
        assert!(!bad.is_e1_isomorphism());
        assert!(matches!(stelzig_check(&bad), Err(Error::Precondition(_))));
    }

    #[test]
    fn non_commuting_morphism_rejected() {
        let h = from_shapes(&[(Shape::Horizontal, (0, 0))]);
        let blocks = BTreeMap::from([((0, 0), SparseMatrix::from_i64(&[&[1]]))]);
        assert!(DoubleComplexMorphism::new(h.clone(), h, blocks).is_err());
    }

    #[test]
    fn random_e1_isomorphisms_pass() {
        for seed in 0..10 {
            let f = random_e1_isomorphism(seed).unwrap();
            assert!(f.is_e1_isomorphism(), "seed {seed}");
            assert!(stelzig_check(&f).unwrap().all_passed(), "seed {seed}");
        }
    }

    #[test]
    fn basis_change_preserves_everything() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let k = random_complex(3);
        let g = k.change_basis(&random_basis_change(&mut rng, &k)).unwrap();
        let t = g.target();
        assert_eq!(k.bott_chern(), t.bott_chern());
        assert_eq!(k.aeppli(), t.aeppli());
        assert_eq!(k.total_cohomology(), t.total_cohomology());
    }
}
