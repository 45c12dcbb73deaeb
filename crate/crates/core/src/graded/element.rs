use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_traits::{One, Zero};

use crate::linalg::{rat, rational_to_string, Rational};

/// A formal linear combination of basis vectors, keyed by basis index.
///
/// Elements carry no reference to their space; the caller is responsible for
/// pairing them with the right one.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Element(BTreeMap<usize, Rational>);

impl Element {
    pub fn zero() -> Self {
        Element(BTreeMap::new())
    }

    pub fn basis(i: usize) -> Self {
        Self::term(i, Rational::one())
    }

    pub fn term(i: usize, x: Rational) -> Self {
        let mut e = Self::zero();
        e.add_term(i, x);
        e
    }

    pub fn from_dense(v: &[Rational]) -> Self {
        let mut e = Self::zero();
        for (i, x) in v.iter().enumerate() {
            e.add_term(i, x.clone());
        }
        e
    }

    pub fn to_dense(&self, dim: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); dim];
        for (&i, x) in &self.0 {
            assert!(i < dim, "element index {i} outside dimension {dim}");
            v[i] = x.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.0.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.0.iter().map(|(&i, x)| (i, x))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, i: usize, x: impl std::borrow::Borrow<Rational>) {
        let x = x.borrow();
        if x.is_zero() {
            return;
        }
        let slot = self.0.entry(i).or_insert_with(Rational::zero);
        *slot += x;
        if slot.is_zero() {
            self.0.remove(&i);
        }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, s: &Rational, other: &Element) {
        if s.is_zero() {
            return;
        }
        for (&i, x) in &other.0 {
            self.add_term(i, s * x);
        }
    }

    pub fn scale(&self, s: &Rational) -> Element {
        let mut out = Element::zero();
        out.add_scaled(s, self);
        out
    }

    pub fn scale_i64(&self, s: i64) -> Element {
        self.scale(&rat(s))
    }

    /// Maps every basis index through `f`, keeping coefficients.
    pub fn reindex(&self, mut f: impl FnMut(usize) -> usize) -> Element {
        let mut out = Element::zero();
        for (&i, x) in &self.0 {
            out.add_term(f(i), x);
        }
        out
    }

    pub fn format_with(&self, label: impl Fn(usize) -> String) -> String {
        if self.0.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (&i, x)) in self.0.iter().enumerate() {
            let neg = x < &Rational::zero();
            let abs = if neg { -x.clone() } else { x.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !abs.is_one() {
                out.push_str(&rational_to_string(&abs));
                out.push('*');
            }
            out.push_str(&label(i));
        }
        out
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, o: &Element) -> Element {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl Add for Element {
    type Output = Element;
    fn add(mut self, o: Element) -> Element {
        self += &o;
        self
    }
}

impl AddAssign<&Element> for Element {
    fn add_assign(&mut self, o: &Element) {
        for (&i, x) in &o.0 {
            self.add_term(i, x);
        }
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, o: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(&-Rational::one(), o);
        out
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, o: Element) -> Element {
        &self - &o
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&-Rational::one())
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

impl FromIterator<(usize, Rational)> for Element {
    fn from_iter<I: IntoIterator<Item = (usize, Rational)>>(iter: I) -> Self {
        let mut e = Element::zero();
        for (i, x) in iter {
            e.add_term(i, x);
        }
        e
    }
}
