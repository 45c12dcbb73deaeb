use std::collections::BTreeMap;
use std::sync::Arc;

use super::{BigradedVectorSpace, Degree, Element};
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;

/// A linear map between based graded spaces that shifts degrees by a fixed amount.
///
/// The matrix is `target.dim() x source.dim()`; an entry at `(r, c)` is only
/// allowed when `deg(r) = deg(c) + shift`, so the matrix is block diagonal
/// with respect to the degree decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedLinearMap {
    source: Arc<BigradedVectorSpace>,
    target: Arc<BigradedVectorSpace>,
    shift: Degree,
    matrix: SparseMatrix,
}

impl GradedLinearMap {
    pub fn new(
        source: Arc<BigradedVectorSpace>,
        target: Arc<BigradedVectorSpace>,
        shift: Degree,
        matrix: SparseMatrix,
    ) -> Result<Self> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::SpaceMismatch(format!(
                "matrix is {}x{}, spaces need {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim(),
                source.dim()
            )));
        }
        if source.mode() != target.mode() {
            return Err(Error::ModeMismatch(
                "source and target use different grading modes".into(),
            ));
        }
        for (r, c, _) in matrix.entries() {
            let expected = source.degree(c) + shift;
            if target.degree(r) != expected {
                return Err(Error::DegreeMismatch {
                    what: format!("image of {} in {}", source.label(c), target.label(r)),
                    found: target.degree(r),
                    expected,
                });
            }
        }
        Ok(GradedLinearMap {
            source,
            target,
            shift,
            matrix,
        })
    }

    /// Builds the map column by column from the images of basis vectors.
    pub fn from_fn(
        source: Arc<BigradedVectorSpace>,
        target: Arc<BigradedVectorSpace>,
        shift: Degree,
        mut image_of: impl FnMut(usize) -> Result<Element>,
    ) -> Result<Self> {
        let mut m = SparseMatrix::zeros(target.dim(), source.dim());
        for c in 0..source.dim() {
            for (r, x) in image_of(c)?.terms() {
                m.set(r, c, x.clone());
            }
        }
        Self::new(source, target, shift, m)
    }

    pub fn identity(space: Arc<BigradedVectorSpace>) -> Self {
        let n = space.dim();
        GradedLinearMap {
            source: space.clone(),
            target: space,
            shift: Degree::ZERO,
            matrix: SparseMatrix::identity(n),
        }
    }

    pub fn zero(source: Arc<BigradedVectorSpace>, target: Arc<BigradedVectorSpace>, shift: Degree) -> Self {
        let m = SparseMatrix::zeros(target.dim(), source.dim());
        GradedLinearMap {
            source,
            target,
            shift,
            matrix: m,
        }
    }

    pub fn source(&self) -> &Arc<BigradedVectorSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<BigradedVectorSpace> {
        &self.target
    }

    pub fn shift(&self) -> Degree {
        self.shift
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn apply(&self, e: &Element) -> Element {
        let mut out = Element::zero();
        debug_assert!(e.terms().all(|(c, _)| c < self.source.dim()));
        for (r, c, m) in self.matrix.entries() {
            let x = e.coeff(c);
            if !num_traits::Zero::is_zero(&x) {
                out.add_term(r, m * x);
            }
        }
        out
    }

    pub fn image_of_basis(&self, c: usize) -> Element {
        self.apply(&Element::basis(c))
    }

    /// The block sending the degree-`d` component of the source to degree `d + shift`.
    pub fn block(&self, d: Degree) -> SparseMatrix {
        self.matrix
            .submatrix(self.target.component(d + self.shift), self.source.component(d))
    }

    pub fn blocks(&self) -> BTreeMap<Degree, SparseMatrix> {
        self.source.degrees().map(|d| (d, self.block(d))).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.shift == Degree::ZERO && self.matrix.is_identity()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// `self - other`, for maps with identical source, target and shift.
    pub fn difference(&self, other: &GradedLinearMap) -> Result<GradedLinearMap> {
        self.check_parallel(other)?;
        Ok(GradedLinearMap {
            matrix: self.matrix.sub(&other.matrix),
            ..self.clone()
        })
    }

    pub fn sum(&self, other: &GradedLinearMap) -> Result<GradedLinearMap> {
        self.check_parallel(other)?;
        Ok(GradedLinearMap {
            matrix: self.matrix.add(&other.matrix),
            ..self.clone()
        })
    }

    fn check_parallel(&self, other: &GradedLinearMap) -> Result<()> {
        if self.source != other.source || self.target != other.target || self.shift != other.shift {
            return Err(Error::SpaceMismatch("maps are not parallel".into()));
        }
        Ok(())
    }

    /// `self o g`.
    pub fn compose(&self, g: &GradedLinearMap) -> Result<GradedLinearMap> {
        compose(self, g)
    }
}

/// `f o g`; requires `target(g) = source(f)`.
pub fn compose(f: &GradedLinearMap, g: &GradedLinearMap) -> Result<GradedLinearMap> {
    if g.target != f.source {
        return Err(Error::SpaceMismatch(
            "target of the inner map is not the source of the outer map".into(),
        ));
    }
    Ok(GradedLinearMap {
        source: g.source.clone(),
        target: f.target.clone(),
        shift: f.shift + g.shift,
        matrix: f.matrix.mul(&g.matrix),
    })
}

/// Direct sum of spaces, the `k`-th summand raised in degree by `raise_k`.
///
/// Summand `k` occupies a contiguous index range following the earlier
/// summands, and its labels are prefixed with `s{k}.`.
pub fn direct_sum_with_shifts(summands: &[(&BigradedVectorSpace, Degree)]) -> Result<BigradedVectorSpace> {
    let Some(first) = summands.first() else {
        return Err(Error::InvalidSpace("direct sum of no spaces".into()));
    };
    let mode = first.0.mode();
    let mut basis = Vec::new();
    for (k, (space, raise)) in summands.iter().enumerate() {
        if space.mode() != mode {
            return Err(Error::ModeMismatch(format!(
                "summand {k} uses a different grading mode"
            )));
        }
        for b in space.basis() {
            basis.push((format!("s{k}.{}", b.label), b.degree + *raise));
        }
    }
    BigradedVectorSpace::new(mode, basis)
}
