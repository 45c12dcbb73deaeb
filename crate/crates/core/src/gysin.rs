//! The integer polynomials `P_0, ..., P_{r-1}` in `T_1, ..., T_{r-1}` that
//! invert the projective bundle map, and the correction operators `G^{-i}`
//! built from them.
//!
//! The family is defined top-down:
//!
//! ```text
//! P_{r-1} = (-1)^{r-1}
//! P_i     = (-1)^r * sum_{k=1}^{r-1-i} T_k * P_{k+i}     (0 <= i < r-1)
//! ```
//!
//! Substituting `T_k = pi_* h^{r-1+k}` gives `G^{-i}(s) = sum_j P_{i+j} * pi_*(h^j s)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{BigradedRing, Degree, Element, GradedLinearMap, GradedModule};
use crate::linalg::Rational;

/// A polynomial with integer coefficients in `T_1, ..., T_n`.
///
/// Exponent vectors have length `n`; `exponents[k-1]` is the power of `T_k`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct IntPolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IntPolynomial {
    pub fn zero(nvars: usize) -> Self {
        IntPolynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c.into());
        p
    }

    /// The variable `T_k`, `1 <= k <= nvars`.
    pub fn var(nvars: usize, k: usize) -> Self {
        assert!(k >= 1 && k <= nvars, "T_{k} is not among T_1..T_{nvars}");
        let mut e = vec![0; nvars];
        e[k - 1] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, BigInt::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self, c: i64) -> bool {
        let c = BigInt::from(c);
        if c.is_zero() {
            return self.is_zero();
        }
        self.terms.len() == 1 && self.terms.iter().all(|(e, x)| e.iter().all(|&d| d == 0) && *x == c)
    }

    pub fn coefficient(&self, exponents: &[u32]) -> BigInt {
        self.terms.get(exponents).cloned().unwrap_or_else(BigInt::zero)
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &IntPolynomial) -> IntPolynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &BigInt) -> IntPolynomial {
        let mut out = IntPolynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut out = IntPolynomial::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// `sum_k k * d_k` for the monomial `T_1^{d_1} ... T_n^{d_n}`.
    pub fn weighted_degree(exponents: &[u32]) -> u32 {
        exponents.iter().enumerate().map(|(i, &d)| (i as u32 + 1) * d).sum()
    }

    /// Evaluates in a ring, with `values[k-1]` substituted for `T_k`.
    pub fn eval_in(&self, ring: &BigradedRing, values: &[Element]) -> Element {
        assert_eq!(values.len(), self.nvars, "wrong number of substituted values");
        let mut powers: Vec<Vec<Element>> = values.iter().map(|v| vec![ring.one(), v.clone()]).collect();
        let mut out = Element::zero();
        for (e, c) in &self.terms {
            let mut mono = ring.one();
            for (k, &d) in e.iter().enumerate() {
                while powers[k].len() <= d as usize {
                    let next = ring.cup(powers[k].last().unwrap(), &values[k]);
                    powers[k].push(next);
                }
                if d > 0 {
                    mono = ring.cup(&mono, &powers[k][d as usize]);
                }
            }
            out.add_scaled(&Rational::from_integer(c.clone()), &mono);
        }
        out
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest total degree first reads more naturally.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (n, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &d)| d > 0)
                .map(|(k, &d)| {
                    if d == 1 {
                        format!("T{}", k + 1)
                    } else {
                        format!("T{}^{}", k + 1, d)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

fn sign(n: usize) -> BigInt {
    if n % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// `P_0, ..., P_{r-1}` for one codimension `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GysinFamily {
    r: usize,
    polys: Vec<IntPolynomial>,
}

impl GysinFamily {
    pub fn r(&self) -> usize {
        self.r
    }

    /// `P_i`.
    pub fn poly(&self, i: usize) -> &IntPolynomial {
        &self.polys[i]
    }

    pub fn polys(&self) -> &[IntPolynomial] {
        &self.polys
    }
}

/// Runs the recursion for codimension `r >= 1`.
pub fn compute_family(r: usize) -> GysinFamily {
    assert!(r >= 1, "codimension must be at least 1");
    let n = r - 1;
    let mut polys = vec![IntPolynomial::zero(n); r];
    polys[r - 1] = IntPolynomial::constant(n, sign(r - 1));
    for i in (0..r - 1).rev() {
        let mut acc = IntPolynomial::zero(n);
        for k in 1..=(r - 1 - i) {
            acc = acc.add(&IntPolynomial::var(n, k).mul(&polys[k + i]));
        }
        polys[i] = acc.scale(&sign(r));
    }
    GysinFamily { r, polys }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyCheckReport {
    pub check: &'static str,
    pub r: usize,
    pub passed: bool,
    pub failures: Vec<String>,
}

/// Every monomial of `P_i` has weighted degree `r - 1 - i`.
pub fn weighted_degree_check(fam: &GysinFamily) -> PolyCheckReport {
    let r = fam.r;
    let mut failures = Vec::new();
    for (i, p) in fam.polys.iter().enumerate() {
        let expected = (r - 1 - i) as u32;
        for (e, _) in p.terms() {
            let w = IntPolynomial::weighted_degree(e);
            if w != expected {
                failures.push(format!("P_{i} has a monomial {e:?} of weight {w}, expected {expected}"));
            }
        }
    }
    PolyCheckReport {
        check: "weighted-degree",
        r,
        passed: failures.is_empty(),
        failures,
    }
}

/// `H_k = sum_{i=r-1}^{r-1+k} T_{i-(r-1)} P_{i-k}` with `T_0 = (-1)^{r-1}`.
pub fn kronecker_sum(fam: &GysinFamily, k: usize) -> IntPolynomial {
    let r = fam.r;
    assert!(k < r, "H_k is only defined for k <= r - 1");
    let n = r - 1;
    let mut acc = IntPolynomial::zero(n);
    for i in (r - 1)..=(r - 1 + k) {
        let t = i - (r - 1);
        let coefficient = if t == 0 {
            IntPolynomial::constant(n, sign(r - 1))
        } else {
            IntPolynomial::var(n, t)
        };
        acc = acc.add(&coefficient.mul(&fam.polys[i - k]));
    }
    acc
}

/// `H_0 = 1` and `H_k = 0` for `1 <= k <= r-1`, as exact polynomial identities.
pub fn kronecker_check(fam: &GysinFamily) -> PolyCheckReport {
    let mut failures = Vec::new();
    for k in 0..fam.r {
        let h = kronecker_sum(fam, k);
        let expected = if k == 0 { 1 } else { 0 };
        if !h.is_constant(expected) {
            failures.push(format!("H_{k} = {h}, expected {expected}"));
        }
    }
    PolyCheckReport {
        check: "kronecker",
        r: fam.r,
        passed: failures.is_empty(),
        failures,
    }
}

/// Multiplication by a fixed ring element on a module, as a graded map.
pub fn multiplication_map(ring: &BigradedRing, module: &GradedModule, c: &Element) -> Result<GradedLinearMap> {
    let parts = ring.space().homogeneous_parts(c);
    let shift = match parts.len() {
        0 => Degree::ZERO,
        1 => *parts.keys().next().unwrap(),
        _ => return Err(Error::Precondition("multiplier is not homogeneous".into())),
    };
    GradedLinearMap::from_fn(module.space().clone(), module.space().clone(), shift, |m| {
        Ok(module.act(c, &Element::basis(m)))
    })
}

/// Builds `G^0, ..., G^{-(r-1)}`.
///
/// `segre[k-1]` must be `pi_* h^{r-1+k}` (degree `k * shift`) for
/// `k = 1..r-1`, and `pushforwards[j]` must be `pi_*(h^j . -)` from the total
/// flavor to the base flavor for `j = 0..r-1`.
pub fn assemble_g(
    fam: &GysinFamily,
    base: &BigradedRing,
    base_module: &GradedModule,
    segre: &[Element],
    pushforwards: &[GradedLinearMap],
) -> Result<Vec<GradedLinearMap>> {
    let r = fam.r;
    let shift = base.space().mode().blowup_shift();
    if segre.len() != r - 1 || pushforwards.len() != r {
        return Err(Error::Precondition(format!(
            "expected {} segre values and {r} pushforwards, got {} and {}",
            r - 1,
            segre.len(),
            pushforwards.len()
        )));
    }
    for (k0, s) in segre.iter().enumerate() {
        let expected = shift.times(k0 as i32 + 1);
        if let Some((i, _)) = s.terms().find(|&(i, _)| base.space().degree(i) != expected) {
            return Err(Error::DegreeMismatch {
                what: format!("segre value T_{}", k0 + 1),
                found: base.space().degree(i),
                expected,
            });
        }
    }

    let coeffs: Vec<Element> = fam.polys.iter().map(|p| p.eval_in(base, segre)).collect();
    let mut out = Vec::with_capacity(r);
    for i in 0..r {
        let target_shift = -shift.times(i as i32);
        let mut g = GradedLinearMap::zero(
            pushforwards[0].source().clone(),
            base_module.space().clone(),
            target_shift,
        );
        for j in 0..(r - i) {
            let mult = multiplication_map(base, base_module, &coeffs[i + j])?;
            let term = mult.compose(&pushforwards[j])?;
            // A vanishing coefficient carries no degree information.
            if term.is_zero() {
                continue;
            }
            if term.shift() != target_shift {
                return Err(Error::DegreeMismatch {
                    what: format!("term j={j} of G^-{i}"),
                    found: term.shift(),
                    expected: target_shift,
                });
            }
            g = g.sum(&term)?;
        }
        out.push(g);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(nvars: usize, terms: &[(&[u32], i64)]) -> IntPolynomial {
        let mut p = IntPolynomial::zero(nvars);
        for (e, c) in terms {
            p.add_term(e.to_vec(), BigInt::from(*c));
        }
        p
    }

    #[test]
    fn family_small_r() {
        let f1 = compute_family(1);
        assert_eq!(f1.polys().len(), 1);
        assert!(f1.poly(0).is_constant(1));

        let f2 = compute_family(2);
        assert!(f2.poly(1).is_constant(-1));
        assert_eq!(*f2.poly(0), poly(1, &[(&[1], -1)]));

        let f3 = compute_family(3);
        assert!(f3.poly(2).is_constant(1));
        assert_eq!(*f3.poly(1), poly(2, &[(&[1, 0], -1)]));
        assert_eq!(*f3.poly(0), poly(2, &[(&[2, 0], 1), (&[0, 1], -1)]));
        assert_eq!(f3.poly(0).to_string(), "T1^2 - T2");
    }

    #[test]
    fn general_r_leading_terms() {
        // P_{r-2} = -T_1 and P_{r-3} = (-1)^{r-1} T_1^2 - T_2 for every r.
        for r in 3..=8usize {
            let f = compute_family(r);
            let n = r - 1;
            let mut t1 = vec![0; n];
            t1[0] = 1;
            assert_eq!(*f.poly(r - 2), poly(n, &[(&t1, -1)]));
            let mut t1sq = vec![0; n];
            t1sq[0] = 2;
            let mut t2 = vec![0; n];
            t2[1] = 1;
            let s = if (r - 1) % 2 == 0 { 1 } else { -1 };
            assert_eq!(*f.poly(r - 3), poly(n, &[(&t1sq, s), (&t2, -1)]));
        }
    }

    #[test]
    fn weighted_degrees_hold() {
        for r in 1..=8 {
            let rep = weighted_degree_check(&compute_family(r));
            assert!(rep.passed, "{rep:?}");
        }
    }

    #[test]
    fn kronecker_r3() {
        let f = compute_family(3);
        assert!(kronecker_sum(&f, 0).is_constant(1));
        assert!(kronecker_sum(&f, 1).is_zero());
        assert!(kronecker_sum(&f, 2).is_zero());
    }

    #[test]
    fn kronecker_holds_up_to_8() {
        for r in 1..=8 {
            let rep = kronecker_check(&compute_family(r));
            assert!(rep.passed, "{rep:?}");
        }
    }

    #[test]
    fn checks_catch_a_corrupted_family() {
        let mut f = compute_family(3);
        f.polys[0] = poly(2, &[(&[2, 0], 1), (&[0, 1], 1)]);
        assert!(!kronecker_check(&f).passed);
        f.polys[0] = poly(2, &[(&[1, 0], 1)]);
        assert!(!weighted_degree_check(&f).passed);
    }
}
