use std::fmt;
use std::sync::Arc;

use super::{koszul_sign, BigradedVectorSpace, Degree, Element};
use crate::error::{Error, Result};
use crate::linalg::rat;

/// Structure constants of a bilinear map `L x R -> O` on basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearTable {
    left_dim: usize,
    right_dim: usize,
    entries: Vec<Element>,
}

impl BilinearTable {
    pub fn zero(left_dim: usize, right_dim: usize) -> Self {
        BilinearTable {
            left_dim,
            right_dim,
            entries: vec![Element::zero(); left_dim * right_dim],
        }
    }

    pub fn from_fn(left_dim: usize, right_dim: usize, mut f: impl FnMut(usize, usize) -> Element) -> Self {
        let mut entries = Vec::with_capacity(left_dim * right_dim);
        for a in 0..left_dim {
            for b in 0..right_dim {
                entries.push(f(a, b));
            }
        }
        BilinearTable {
            left_dim,
            right_dim,
            entries,
        }
    }

    pub fn try_from_fn(
        left_dim: usize,
        right_dim: usize,
        mut f: impl FnMut(usize, usize) -> Result<Element>,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(left_dim * right_dim);
        for a in 0..left_dim {
            for b in 0..right_dim {
                entries.push(f(a, b)?);
            }
        }
        Ok(BilinearTable {
            left_dim,
            right_dim,
            entries,
        })
    }

    pub fn left_dim(&self) -> usize {
        self.left_dim
    }

    pub fn right_dim(&self) -> usize {
        self.right_dim
    }

    pub fn get(&self, a: usize, b: usize) -> &Element {
        &self.entries[a * self.right_dim + b]
    }

    pub fn set(&mut self, a: usize, b: usize, value: Element) {
        self.entries[a * self.right_dim + b] = value;
    }

    pub fn apply(&self, a: &Element, b: &Element) -> Element {
        let mut out = Element::zero();
        for (i, x) in a.terms() {
            for (j, y) in b.terms() {
                out.add_scaled(&(x * y), self.get(i, j));
            }
        }
        out
    }
}

/// A graded-commutative ring given by structure constants on a based space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedRing {
    space: Arc<BigradedVectorSpace>,
    unit: usize,
    product: BilinearTable,
}

impl BigradedRing {
    pub fn new(space: Arc<BigradedVectorSpace>, unit: usize, product: BilinearTable) -> Result<Self> {
        let n = space.dim();
        if product.left_dim != n || product.right_dim != n {
            return Err(Error::InvalidSpace(format!(
                "product table is {}x{} but the ring has dimension {n}",
                product.left_dim, product.right_dim
            )));
        }
        if unit >= n || space.degree(unit) != Degree::ZERO {
            return Err(Error::InvalidSpace("unit must be a basis vector of degree 0".into()));
        }
        Ok(BigradedRing { space, unit, product })
    }

    pub fn space(&self) -> &Arc<BigradedVectorSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn one(&self) -> Element {
        Element::basis(self.unit)
    }

    pub fn product(&self) -> &BilinearTable {
        &self.product
    }

    pub fn cup(&self, a: &Element, b: &Element) -> Element {
        self.product.apply(a, b)
    }

    pub fn pow(&self, a: &Element, n: u32) -> Element {
        let mut out = self.one();
        for _ in 0..n {
            out = self.cup(&out, a);
        }
        out
    }

    /// The regular module: the ring acting on itself.
    pub fn regular_module(&self) -> GradedModule {
        GradedModule {
            space: self.space.clone(),
            action: self.product.clone(),
        }
    }
}

/// A graded module over a ring, given by action constants `ring basis x module basis`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule {
    space: Arc<BigradedVectorSpace>,
    action: BilinearTable,
}

impl GradedModule {
    pub fn new(ring: &BigradedRing, space: Arc<BigradedVectorSpace>, action: BilinearTable) -> Result<Self> {
        if action.left_dim != ring.dim() || action.right_dim != space.dim() {
            return Err(Error::InvalidSpace(format!(
                "action table is {}x{}, expected {}x{}",
                action.left_dim,
                action.right_dim,
                ring.dim(),
                space.dim()
            )));
        }
        if space.mode() != ring.space().mode() {
            return Err(Error::ModeMismatch(
                "module and ring use different grading modes".into(),
            ));
        }
        Ok(GradedModule { space, action })
    }

    pub fn space(&self) -> &Arc<BigradedVectorSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn action(&self) -> &BilinearTable {
        &self.action
    }

    pub fn act(&self, r: &Element, m: &Element) -> Element {
        self.action.apply(r, m)
    }
}

/// The first failure found by [`check_ring_axioms`] or [`check_module_axioms`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    DegreeAdditivity { a: String, b: String, term: String },
    Unit { a: String },
    Commutativity { a: String, b: String },
    Associativity { a: String, b: String, c: String },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::DegreeAdditivity { a, b, term } => {
                write!(
                    f,
                    "degree additivity fails: {a} * {b} has a term {term} in the wrong degree"
                )
            }
            AxiomViolation::Unit { a } => write!(f, "unit law fails on {a}"),
            AxiomViolation::Commutativity { a, b } => {
                write!(f, "graded commutativity fails on ({a}, {b})")
            }
            AxiomViolation::Associativity { a, b, c } => {
                write!(f, "associativity fails on ({a}, {b}, {c})")
            }
        }
    }
}

/// Checks degree additivity, the unit law, graded commutativity and
/// associativity on all basis pairs and triples.
pub fn check_ring_axioms(ring: &BigradedRing) -> Result<(), AxiomViolation> {
    let sp = ring.space();
    let n = sp.dim();
    let label = |i: usize| sp.label(i).to_string();

    for a in 0..n {
        for b in 0..n {
            let expected = sp.degree(a) + sp.degree(b);
            if let Some((t, _)) = ring.product.get(a, b).terms().find(|&(t, _)| sp.degree(t) != expected) {
                return Err(AxiomViolation::DegreeAdditivity {
                    a: label(a),
                    b: label(b),
                    term: label(t),
                });
            }
        }
    }

    let one = ring.one();
    for a in 0..n {
        let e = Element::basis(a);
        if ring.cup(&one, &e) != e || ring.cup(&e, &one) != e {
            return Err(AxiomViolation::Unit { a: label(a) });
        }
    }

    for a in 0..n {
        for b in a..n {
            let sign = koszul_sign(sp.degree(a), sp.degree(b));
            if *ring.product.get(a, b) != ring.product.get(b, a).scale(&rat(sign)) {
                return Err(AxiomViolation::Commutativity {
                    a: label(a),
                    b: label(b),
                });
            }
        }
    }

    for a in 0..n {
        for b in 0..n {
            let ab = ring.product.get(a, b);
            for c in 0..n {
                let left = ring.cup(ab, &Element::basis(c));
                let right = ring.cup(&Element::basis(a), ring.product.get(b, c));
                if left != right {
                    return Err(AxiomViolation::Associativity {
                        a: label(a),
                        b: label(b),
                        c: label(c),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Checks degree additivity, unit action and `(r s) m = r (s m)` on basis triples.
pub fn check_module_axioms(ring: &BigradedRing, module: &GradedModule) -> Result<(), AxiomViolation> {
    let rs = ring.space();
    let ms = module.space();
    for a in 0..rs.dim() {
        for m in 0..ms.dim() {
            let expected = rs.degree(a) + ms.degree(m);
            if let Some((t, _)) = module.action.get(a, m).terms().find(|&(t, _)| ms.degree(t) != expected) {
                return Err(AxiomViolation::DegreeAdditivity {
                    a: rs.label(a).to_string(),
                    b: ms.label(m).to_string(),
                    term: ms.label(t).to_string(),
                });
            }
        }
    }
    let one = ring.one();
    for m in 0..ms.dim() {
        let e = Element::basis(m);
        if module.act(&one, &e) != e {
            return Err(AxiomViolation::Unit {
                a: ms.label(m).to_string(),
            });
        }
    }
    for a in 0..rs.dim() {
        for b in 0..rs.dim() {
            let ab = ring.product.get(a, b);
            for m in 0..ms.dim() {
                let left = module.act(ab, &Element::basis(m));
                let right = module.act(&Element::basis(a), module.action.get(b, m));
                if left != right {
                    return Err(AxiomViolation::Associativity {
                        a: rs.label(a).to_string(),
                        b: rs.label(b).to_string(),
                        c: ms.label(m).to_string(),
                    });
                }
            }
        }
    }
    Ok(())
}
