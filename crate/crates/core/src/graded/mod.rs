//! Graded carriers: degrees, based graded vector spaces and their elements.
//!
//! Degrees are stored as pairs `(p, q)`. In de Rham mode only `p` is used and
//! `q` stays zero, so degree arithmetic is the same in both modes.

mod element;
mod map;
mod ring;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use element::Element;
pub use map::{direct_sum_with_shifts, GradedLinearMap};
pub use ring::{check_module_axioms, check_ring_axioms, AxiomViolation, BigradedRing, BilinearTable, GradedModule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradingMode {
    Dolbeault,
    #[serde(rename = "derham")]
    DeRham,
}

impl GradingMode {
    /// Degree of `h`, i.e. the shift contributed by one blow-up summand.
    pub fn blowup_shift(self) -> Degree {
        match self {
            GradingMode::Dolbeault => Degree::new(1, 1),
            GradingMode::DeRham => Degree::new(2, 0),
        }
    }

    /// Degree of a class of complex degree `(p, q)`; in de Rham mode this is `p + q`.
    pub fn complex_degree(self, p: i32, q: i32) -> Degree {
        match self {
            GradingMode::Dolbeault => Degree::new(p, q),
            GradingMode::DeRham => Degree::new(p + q, 0),
        }
    }

    pub fn is_valid(self, d: Degree) -> bool {
        match self {
            GradingMode::Dolbeault => d.p >= 0 && d.q >= 0,
            GradingMode::DeRham => d.p >= 0 && d.q == 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GradingMode::Dolbeault => "dolbeault",
            GradingMode::DeRham => "derham",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Degree {
    pub p: i32,
    pub q: i32,
}

impl Degree {
    pub const ZERO: Degree = Degree { p: 0, q: 0 };

    pub const fn new(p: i32, q: i32) -> Self {
        Degree { p, q }
    }

    pub fn total(self) -> i32 {
        self.p + self.q
    }

    /// Koszul parity: `p + q` mod 2 (in de Rham mode `q == 0`).
    pub fn parity(self) -> u8 {
        (self.total().rem_euclid(2)) as u8
    }

    pub fn times(self, k: i32) -> Degree {
        Degree::new(self.p * k, self.q * k)
    }
}

impl std::ops::Add for Degree {
    type Output = Degree;
    fn add(self, o: Degree) -> Degree {
        Degree::new(self.p + o.p, self.q + o.q)
    }
}

impl std::ops::Sub for Degree {
    type Output = Degree;
    fn sub(self, o: Degree) -> Degree {
        Degree::new(self.p - o.p, self.q - o.q)
    }
}

impl std::ops::Neg for Degree {
    type Output = Degree;
    fn neg(self) -> Degree {
        Degree::new(-self.p, -self.q)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// `(-1)^(parity(a) * parity(b))`.
pub fn koszul_sign(a: Degree, b: Degree) -> i64 {
    if a.parity() == 1 && b.parity() == 1 {
        -1
    } else {
        1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisVector {
    pub label: String,
    pub degree: Degree,
}

/// A finite dimensional graded rational vector space with a labeled basis.
#[derive(Clone)]
pub struct BigradedVectorSpace {
    mode: GradingMode,
    basis: Vec<BasisVector>,
    components: BTreeMap<Degree, Vec<usize>>,
    by_label: HashMap<String, usize>,
}

impl PartialEq for BigradedVectorSpace {
    fn eq(&self, other: &Self) -> bool {
        self.mode == other.mode && self.basis == other.basis
    }
}

impl Eq for BigradedVectorSpace {}

impl fmt::Debug for BigradedVectorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BigradedVectorSpace")
            .field("mode", &self.mode)
            .field("dims", &self.dims())
            .finish()
    }
}

impl BigradedVectorSpace {
    pub fn new<S: Into<String>>(mode: GradingMode, basis: impl IntoIterator<Item = (S, Degree)>) -> Result<Self> {
        let basis: Vec<BasisVector> = basis
            .into_iter()
            .map(|(label, degree)| BasisVector {
                label: label.into(),
                degree,
            })
            .collect();
        let mut components: BTreeMap<Degree, Vec<usize>> = BTreeMap::new();
        let mut by_label = HashMap::new();
        for (i, b) in basis.iter().enumerate() {
            if !mode.is_valid(b.degree) {
                return Err(Error::InvalidSpace(format!(
                    "basis vector {:?} has degree {} which is not a {} degree",
                    b.label,
                    b.degree,
                    mode.name()
                )));
            }
            if by_label.insert(b.label.clone(), i).is_some() {
                return Err(Error::InvalidSpace(format!("duplicate basis label {:?}", b.label)));
            }
            components.entry(b.degree).or_default().push(i);
        }
        Ok(BigradedVectorSpace {
            mode,
            basis,
            components,
            by_label,
        })
    }

    pub fn zero(mode: GradingMode) -> Self {
        Self::new::<String>(mode, []).expect("empty space is valid")
    }

    pub fn mode(&self) -> GradingMode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisVector] {
        &self.basis
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].label
    }

    pub fn degree(&self, i: usize) -> Degree {
        self.basis[i].degree
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.by_label.get(label).copied()
    }

    /// Basis indices in the given degree (empty if the component is zero).
    pub fn component(&self, d: Degree) -> &[usize] {
        self.components.get(&d).map_or(&[], Vec::as_slice)
    }

    pub fn degrees(&self) -> impl Iterator<Item = Degree> + '_ {
        self.components.keys().copied()
    }

    pub fn dim_at(&self, d: Degree) -> usize {
        self.component(d).len()
    }

    pub fn dims(&self) -> BTreeMap<Degree, usize> {
        self.components.iter().map(|(&d, v)| (d, v.len())).collect()
    }

    /// Dimensions by total degree (Betti numbers in de Rham terms).
    pub fn total_dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for (d, v) in &self.components {
            *out.entry(d.total()).or_default() += v.len();
        }
        out
    }

    pub fn max_total_degree(&self) -> i32 {
        self.components.keys().map(|d| d.total()).max().unwrap_or(0)
    }

    /// The basis element with this label. Panics if absent; use `index_of` to probe.
    pub fn element(&self, label: &str) -> Element {
        let i = self
            .index_of(label)
            .unwrap_or_else(|| panic!("no basis element labeled {label:?}"));
        Element::basis(i)
    }

    /// Whether every term of `e` lies in degree `d`.
    pub fn is_homogeneous_of(&self, e: &Element, d: Degree) -> bool {
        e.terms().all(|(i, _)| self.degree(i) == d)
    }

    /// Splits an element into its homogeneous components.
    pub fn homogeneous_parts(&self, e: &Element) -> BTreeMap<Degree, Element> {
        let mut out: BTreeMap<Degree, Element> = BTreeMap::new();
        for (i, x) in e.terms() {
            out.entry(self.degree(i)).or_default().add_term(i, x);
        }
        out
    }

    /// Renders an element using basis labels, e.g. `2*H - 1/2*e`.
    pub fn format(&self, e: &Element) -> String {
        e.format_with(|i| self.label(i).to_string())
    }

    pub fn into_arc(self) -> Arc<Self> {
        Arc::new(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_labels_rejected() {
        let r = BigradedVectorSpace::new(GradingMode::Dolbeault, [("a", Degree::ZERO), ("a", Degree::new(1, 1))]);
        assert!(matches!(r, Err(Error::InvalidSpace(_))));
    }

    #[test]
    fn derham_degrees_have_no_q() {
        let r = BigradedVectorSpace::new(GradingMode::DeRham, [("a", Degree::new(1, 1))]);
        assert!(r.is_err());
    }

    #[test]
    fn parity_and_shift() {
        assert_eq!(Degree::new(1, 0).parity(), 1);
        assert_eq!(Degree::new(1, 1).parity(), 0);
        assert_eq!(GradingMode::DeRham.blowup_shift(), Degree::new(2, 0));
        assert_eq!(koszul_sign(Degree::new(1, 0), Degree::new(0, 1)), -1);
    }
}
