//! Projectivized vector bundles `P(E) -> X`.
//!
//! Every flavor of the total space is the free module over the matching base
//! flavor on `1, h, ..., h^{r-1}`, where `h` is the first Chern class of the
//! tautological line `O(-1)`. Higher powers of `h` are rewritten with
//!
//! ```text
//! h^r = c_1 h^{r-1} - c_2 h^{r-2} + ... + (-1)^{r+1} c_r
//! ```
//!
//! which is `c_r(Q) = 0` for `Q = pi^*E / O(-1)`. Push-forward integrates
//! over the fiber: `pi_*(h^i pi^*x)` is `0` for `i <= r-2` and
//! `(-1)^{r-1} x` for `i = r-1`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::{
    direct_sum_with_shifts, BigradedRing, BigradedVectorSpace, BilinearTable, Degree, Element, GradedLinearMap,
    GradedModule,
};
use crate::gysin::{assemble_g, compute_family};
use crate::linalg::rat;
use crate::report::{is_identity, same_map, Check, Report};
use crate::spaces::{Flavor, SpaceModel, CLOSED};

#[derive(Clone, Debug)]
pub struct BundleMaps {
    pub rank: usize,
    /// `c_1, ..., c_r` in the base ring.
    pub chern: Vec<Element>,
    /// The class `h` in the total ring.
    pub h: Element,
    /// `pi^*`, per flavor.
    pub pullback: BTreeMap<String, GradedLinearMap>,
    /// `pi_*`, per flavor; shifts degrees down by `(r-1)` times the blow-up shift.
    pub pushforward: BTreeMap<String, GradedLinearMap>,
}

#[derive(Clone, Debug)]
pub struct ProjectiveBundle {
    pub base: SpaceModel,
    pub total: SpaceModel,
    pub maps: BundleMaps,
}

fn h_label(i: usize, label: &str) -> String {
    let h = match i {
        0 => return label.to_string(),
        1 => "h".to_string(),
        _ => format!("h^{i}"),
    };
    if label == "1" {
        h
    } else {
        format!("{h}·{label}")
    }
}

fn free_space(base: &BigradedVectorSpace, r: usize) -> Result<BigradedVectorSpace> {
    let shift = base.mode().blowup_shift();
    let mut basis = Vec::with_capacity(r * base.dim());
    for i in 0..r {
        for b in base.basis() {
            basis.push((h_label(i, &b.label), b.degree + shift.times(i as i32)));
        }
    }
    BigradedVectorSpace::new(base.mode(), basis)
}

/// Rewrites `sum_p h^p pi^*(coeffs[p])` into the basis `h^i pi^*m`, `i < r`.
///
/// `coeffs` live in a base flavor module; the Chern classes act on it.
fn reduce_in(r: usize, chern: &[Element], module: &GradedModule, coeffs: &[Element]) -> Element {
    let mut coeffs = coeffs.to_vec();
    for p in (r..coeffs.len()).rev() {
        let top = std::mem::take(&mut coeffs[p]);
        if top.is_zero() {
            continue;
        }
        for k in 1..=r {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let term = module.act(&chern[k - 1], &top);
            coeffs[p - k].add_scaled(&rat(sign), &term);
        }
    }
    let dim = module.dim();
    let mut out = Element::zero();
    for (i, c) in coeffs.iter().take(r).enumerate() {
        for (m, x) in c.terms() {
            out.add_term(i * dim + m, x);
        }
    }
    out
}

/// The structure table of the total space for a base pairing `A x B -> C`.
fn bundle_table(r: usize, chern: &[Element], table: &BilinearTable, out_module: &GradedModule) -> BilinearTable {
    let (da, db) = (table.left_dim(), table.right_dim());
    BilinearTable::from_fn(r * da, r * db, |x, y| {
        let (i, a) = (x / da, x % da);
        let (j, b) = (y / db, y % db);
        let mut coeffs = vec![Element::zero(); i + j + 1];
        coeffs[i + j] = table.get(a, b).clone();
        reduce_in(r, chern, out_module, &coeffs)
    })
}

/// Builds `P(E)` over `base` for a bundle of rank `r` with Chern classes `chern = [c_1, ..., c_r]`.
pub fn projective_bundle(base: &SpaceModel, chern: &[Element], r: usize) -> Result<ProjectiveBundle> {
    if r == 0 {
        return Err(Error::Precondition("bundle rank must be at least 1".into()));
    }
    if chern.len() != r {
        return Err(Error::Precondition(format!(
            "expected {r} Chern classes, got {}",
            chern.len()
        )));
    }
    let mode = base.mode();
    let shift = mode.blowup_shift();
    let bs = base.space();
    for (k0, c) in chern.iter().enumerate() {
        let expected = shift.times(k0 as i32 + 1);
        if let Some((i, _)) = c.terms().find(|&(i, _)| i >= bs.dim() || bs.degree(i) != expected) {
            return Err(Error::DegreeMismatch {
                what: format!("c_{}", k0 + 1),
                found: if i < bs.dim() { bs.degree(i) } else { Degree::ZERO },
                expected,
            });
        }
    }

    let base_ring = base.ring();
    let closed_module = base_ring.regular_module();
    let space = Arc::new(free_space(bs, r)?);
    let product = bundle_table(r, chern, base_ring.product(), &closed_module);
    let ring = BigradedRing::new(space, base_ring.unit_index(), product)?;
    let mut total = SpaceModel::new(format!("P({})", base.name()), ring);

    for (name, f) in base.flavors() {
        if name == CLOSED {
            continue;
        }
        let space = Arc::new(free_space(f.space(), r)?);
        let action = bundle_table(r, chern, f.module.action(), &f.module);
        let module = GradedModule::new(total.ring(), space, action)?;
        let self_product = f.self_product.as_ref().map(|t| bundle_table(r, chern, t, &f.module));
        total = total.with_flavor(
            name.clone(),
            Flavor {
                support: f.support,
                module,
                self_product,
            },
        )?;
    }

    let mut pullback = BTreeMap::new();
    let mut pushforward = BTreeMap::new();
    let sign = if (r - 1) % 2 == 0 { 1 } else { -1 };
    for name in base.flavor_names() {
        let bsp = base.flavor_space(&name)?.clone();
        let tsp = total.flavor_space(&name)?.clone();
        let dim = bsp.dim();
        let up = GradedLinearMap::from_fn(bsp.clone(), tsp.clone(), Degree::ZERO, |m| Ok(Element::basis(m)))?;
        let down = GradedLinearMap::from_fn(tsp, bsp, -shift.times(r as i32 - 1), |x| {
            Ok(if x / dim == r - 1 {
                Element::term(x % dim, rat(sign))
            } else {
                Element::zero()
            })
        })?;
        pullback.insert(name.clone(), up);
        pushforward.insert(name, down);
    }

    let h = if r >= 2 {
        Element::basis(bs.dim() + base_ring.unit_index())
    } else {
        // P(line bundle) = base; h = c_1(O(-1)) = c_1(E) there.
        chern[0].clone()
    };

    Ok(ProjectiveBundle {
        base: base.clone(),
        total,
        maps: BundleMaps {
            rank: r,
            chern: chern.to_vec(),
            h,
            pullback,
            pushforward,
        },
    })
}

impl ProjectiveBundle {
    pub fn rank(&self) -> usize {
        self.maps.rank
    }

    pub fn pullback(&self, flavor: &str) -> Result<&GradedLinearMap> {
        self.maps
            .pullback
            .get(flavor)
            .ok_or_else(|| Error::Flavor(format!("bundle has no flavor {flavor:?}")))
    }

    pub fn pushforward(&self, flavor: &str) -> Result<&GradedLinearMap> {
        self.maps
            .pushforward
            .get(flavor)
            .ok_or_else(|| Error::Flavor(format!("bundle has no flavor {flavor:?}")))
    }

    /// Index of `h^i pi^*m` in the total flavor space.
    pub fn index(&self, flavor: &str, i: usize, m: usize) -> Result<usize> {
        Ok(i * self.base.flavor_space(flavor)?.dim() + m)
    }

    /// `sum_p h^p pi^*(coeffs[p])` reduced to the standard basis; `coeffs`
    /// are elements of the base flavor and may have any length.
    pub fn reduce(&self, flavor: &str, coeffs: &[Element]) -> Result<Element> {
        let f = self.base.flavor(flavor)?;
        Ok(reduce_in(self.rank(), &self.maps.chern, &f.module, coeffs))
    }

    /// `h^m` in the total ring.
    pub fn h_power(&self, m: usize) -> Element {
        let mut coeffs = vec![Element::zero(); m + 1];
        coeffs[m] = self.base.ring().one();
        self.reduce(CLOSED, &coeffs).expect("closed flavor exists")
    }

    /// `pi_* h^{r-1+k}` for `k = 1, ..., r-1`, by reducing and pushing forward.
    pub fn segre_values(&self) -> Vec<Element> {
        let r = self.rank();
        let push = &self.maps.pushforward[CLOSED];
        (1..r).map(|k| push.apply(&self.h_power(r - 1 + k))).collect()
    }

    /// `h^j . -` on a total flavor.
    pub fn h_multiplication(&self, flavor: &str, j: usize) -> Result<GradedLinearMap> {
        let f = self.total.flavor(flavor)?;
        let hj = self.h_power(j);
        let shift = self.base.mode().blowup_shift().times(j as i32);
        GradedLinearMap::from_fn(f.space().clone(), f.space().clone(), shift, |x| {
            Ok(f.module.act(&hj, &Element::basis(x)))
        })
    }

    /// `G^0, G^{-1}, ..., G^{-(r-1)}` on a flavor.
    pub fn correction_maps(&self, flavor: &str) -> Result<Vec<GradedLinearMap>> {
        let r = self.rank();
        let push = self.pushforward(flavor)?;
        let pushes = (0..r)
            .map(|j| push.compose(&self.h_multiplication(flavor, j)?))
            .collect::<Result<Vec<_>>>()?;
        let base_module = &self.base.flavor(flavor)?.module;
        assemble_g(
            &compute_family(r),
            self.base.ring(),
            base_module,
            &self.segre_values(),
            &pushes,
        )
    }

    /// `base flavor (+) base flavor[1] (+) ... (+) base flavor[r-1]`, the `i`-th
    /// summand raised by `i` times the blow-up shift.
    pub fn decomposition(&self, flavor: &str) -> Result<Arc<BigradedVectorSpace>> {
        let sp = self.base.flavor_space(flavor)?;
        let shift = self.base.mode().blowup_shift();
        let summands: Vec<_> = (0..self.rank()).map(|i| (sp.as_ref(), shift.times(i as i32))).collect();
        Ok(Arc::new(direct_sum_with_shifts(&summands)?))
    }

    /// `mu(s_0, ..., s_{r-1}) = sum_i pi^*s_i h^i` and `tau = (G^0, ..., G^{-(r-1)})`.
    pub fn mu_tau_pair(&self, flavor: &str) -> Result<(GradedLinearMap, GradedLinearMap)> {
        let decomposition = self.decomposition(flavor)?;
        let f = self.total.flavor(flavor)?;
        let dim = self.base.flavor_space(flavor)?.dim();
        let r = self.rank();
        let h_powers: Vec<Element> = (0..r).map(|i| self.h_power(i)).collect();
        let pullback = self.pullback(flavor)?;

        let mu = GradedLinearMap::from_fn(decomposition.clone(), f.space().clone(), Degree::ZERO, |x| {
            let (i, m) = (x / dim, x % dim);
            Ok(f.module.act(&h_powers[i], &pullback.image_of_basis(m)))
        })?;

        let gs = self.correction_maps(flavor)?;
        let tau = GradedLinearMap::from_fn(f.space().clone(), decomposition, Degree::ZERO, |x| {
            let mut out = Element::zero();
            for (i, g) in gs.iter().enumerate() {
                out += &g.image_of_basis(x).reindex(|m| i * dim + m);
            }
            Ok(out)
        })?;
        Ok((mu, tau))
    }

    /// The projection from the decomposition onto its `i`-th summand.
    pub fn projection(&self, flavor: &str, i: usize) -> Result<GradedLinearMap> {
        let decomposition = self.decomposition(flavor)?;
        let sp = self.base.flavor_space(flavor)?.clone();
        let dim = sp.dim();
        let shift = -self.base.mode().blowup_shift().times(i as i32);
        GradedLinearMap::from_fn(decomposition, sp, shift, |x| {
            Ok(if x / dim == i {
                Element::basis(x % dim)
            } else {
                Element::zero()
            })
        })
    }
}

/// Axioms, `tau mu = id`, `mu tau = id`, `G^{-i} mu = pr_i`, the fiber
/// normalization `pi_*(h^{r-1} pi^* x) = (-1)^{r-1} x` and the projection formula for `(pi_*, pi^*)`, on every flavor.
pub fn verify_bundle(bundle: &ProjectiveBundle) -> Result<Report> {
    let mut report = Report::default();
    report.push(Check::from_result(
        "ring and module axioms",
        bundle.total.check_axioms(),
    ));
    for name in bundle.base.flavor_names() {
        let tag = format!("[{name}]");
        let (mu, tau) = bundle.mu_tau_pair(&name)?;
        report.push(Check::from_result(
            format!("tau o mu = id {tag}"),
            is_identity(&tau.compose(&mu)?),
        ));
        report.push(Check::from_result(
            format!("mu o tau = id {tag}"),
            is_identity(&mu.compose(&tau)?),
        ));
        let gs = bundle.correction_maps(&name)?;
        let mut projections = Ok(());
        for (i, g) in gs.iter().enumerate() {
            if let Err(e) = same_map(&g.compose(&mu)?, &bundle.projection(&name, i)?) {
                projections = Err(format!("G^-{i}: {e}"));
                break;
            }
        }
        report.push(Check::from_result(format!("G^-i o mu = pr_i {tag}"), projections));
        let push = bundle.pushforward(&name)?;
        let pull = bundle.pullback(&name)?;
        let r = bundle.rank();
        let top = push.compose(&bundle.h_multiplication(&name, r - 1)?)?.compose(pull)?;
        let base = pull.source().clone();
        let sign = if r % 2 == 1 { 1 } else { -1 };
        let expected = GradedLinearMap::from_fn(base.clone(), base, Degree::ZERO, |i| Ok(Element::term(i, rat(sign))))?;
        report.push(Check::from_result(
            format!("pi_*(h^(r-1) pi^*x) = (-1)^(r-1) x {tag}"),
            same_map(&top, &expected),
        ));
    }
    for (a, b, c) in bundle.total.pairings() {
        let Some((_, tb)) = bundle.base.table(&a, &b) else {
            continue;
        };
        let (_, tt) = bundle.total.table(&a, &b).expect("pairing");
        let (pa, pb, pc) = (bundle.pushforward(&a)?, bundle.pullback(&b)?, bundle.pushforward(&c)?);
        let (ta, xb) = (bundle.total.flavor_space(&a)?, bundle.base.flavor_space(&b)?);
        let mut result = Ok(());
        'pairs: for i in 0..ta.dim() {
            for j in 0..xb.dim() {
                let lhs = pc.apply(&tt.apply(&Element::basis(i), &pb.image_of_basis(j)));
                let rhs = tb.apply(&pa.image_of_basis(i), &Element::basis(j));
                if lhs != rhs {
                    result = Err(format!("fails on ({}, {})", ta.label(i), xb.label(j)));
                    break 'pairs;
                }
            }
        }
        report.push(Check::from_result(
            format!("projection formula pi_*(a pi^*b) = pi_*a b [{a} x {b}]"),
            result,
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::GradingMode;
    use crate::linalg::{frac, Rational};
    use crate::spaces::{affine_space, curve, point, projective_space, COMPACT};

    const DOL: GradingMode = GradingMode::Dolbeault;

    #[test]
    fn bundle_over_point_is_projective_space() {
        for r in 1..=4 {
            let b = projective_bundle(&point(DOL), &vec![Element::zero(); r], r).unwrap();
            let pr = projective_space(r - 1, DOL);
            assert_eq!(b.total.space().dims(), pr.space().dims());
            assert!(b.total.check_axioms().is_ok());
            let sign = if (r - 1) % 2 == 0 { 1 } else { -1 };
            let push = b.pushforward(CLOSED).unwrap();
            assert_eq!(push.apply(&b.h_power(r - 1)), Element::term(0, rat(sign)));
            for i in 0..r.saturating_sub(1) {
                assert!(push.apply(&b.h_power(i)).is_zero());
            }
        }
    }

    #[test]
    fn line_base_relation_and_pushforward() {
        // P(E) over P^1, rank 2, c_1 = d H, c_2 = 0: h^2 = d H h, pi_* h^2 = -d H.
        let p1 = projective_space(1, DOL);
        let d = 3;
        let h = p1.space().element("H");
        let b = projective_bundle(&p1, &[h.scale_i64(d), Element::zero()], 2).unwrap();
        let total = b.total.space();
        let hh = b.h_power(2);
        assert_eq!(hh, total.element("h·H").scale_i64(d));
        let push = b.pushforward(CLOSED).unwrap();
        assert_eq!(push.apply(&hh), h.scale_i64(-d));
        assert_eq!(b.segre_values(), vec![h.scale_i64(-d)]);
        assert!(b.total.check_axioms().is_ok());
    }

    #[test]
    fn relation_is_confluent() {
        // h^{r+1} computed as h^r * h and as h * h^r and directly agree.
        let p2 = projective_space(2, DOL);
        let sp = p2.space();
        let c = vec![
            sp.element("H").scale_i64(2),
            sp.element("H^2").scale(&frac(-1, 3)),
            Element::zero(),
        ];
        let b = projective_bundle(&p2, &c, 3).unwrap();
        let ring = b.total.ring();
        let h = &b.maps.h;
        let direct = b.h_power(4);
        assert_eq!(ring.cup(&b.h_power(3), h), direct);
        assert_eq!(ring.cup(h, &b.h_power(3)), direct);
        assert_eq!(ring.pow(h, 4), direct);
    }

    #[test]
    fn tau_inverts_mu_over_a_line() {
        let p1 = projective_space(1, DOL);
        let h = p1.space().element("H");
        let b = projective_bundle(&p1, &[h, Element::zero()], 2).unwrap();
        let (mu, tau) = b.mu_tau_pair(CLOSED).unwrap();
        assert!(tau.compose(&mu).unwrap().is_identity());
        assert!(mu.compose(&tau).unwrap().is_identity());
        let gs = b.correction_maps(CLOSED).unwrap();
        for (i, g) in gs.iter().enumerate() {
            assert_eq!(g.compose(&mu).unwrap(), b.projection(CLOSED, i).unwrap());
        }
    }

    #[test]
    fn point_base_g_maps_pick_out_powers() {
        for r in 2..=4 {
            let b = projective_bundle(&point(DOL), &vec![Element::zero(); r], r).unwrap();
            assert!(b.segre_values().iter().all(Element::is_zero));
            let gs = b.correction_maps(CLOSED).unwrap();
            for (i, g) in gs.iter().enumerate() {
                for j in 0..r {
                    let expected = if i == j { Element::basis(0) } else { Element::zero() };
                    assert_eq!(g.apply(&b.h_power(j)), expected, "r={r} G^-{i}(h^{j})");
                }
            }
            let (mu, tau) = b.mu_tau_pair(CLOSED).unwrap();
            assert!(mu.matrix().is_identity());
            assert!(tau.matrix().is_identity());
        }
    }

    #[test]
    fn g_minus_one_of_h_over_line() {
        // r = 2 over P^1 with c_1 = dH: G^{-1}(h) = P_1 * pi_*(h) = (-1)(-1) = 1.
        let p1 = projective_space(1, DOL);
        let h = p1.space().element("H");
        let b = projective_bundle(&p1, &[h.scale_i64(5), Element::zero()], 2).unwrap();
        let g = &b.correction_maps(CLOSED).unwrap()[1];
        assert_eq!(g.apply(&b.maps.h), p1.ring().one());
    }

    #[test]
    fn compact_flavor_is_transported() {
        let c2 = affine_space(2, DOL).unwrap();
        let b = projective_bundle(&c2, &[Element::zero(), Element::zero()], 2).unwrap();
        let compact = b.total.flavor(COMPACT).unwrap();
        let dims: Vec<_> = compact.space().dims().into_iter().collect();
        assert_eq!(dims, vec![(Degree::new(2, 2), 1), (Degree::new(3, 3), 1)]);
        assert!(b.total.check_axioms().is_ok());
        let (mu, tau) = b.mu_tau_pair(COMPACT).unwrap();
        assert!(tau.compose(&mu).unwrap().is_identity());
    }

    #[test]
    fn full_suite_on_a_twisted_base() {
        let p2 = projective_space(2, DOL);
        let sp = p2.space();
        let c = vec![
            sp.element("H").scale_i64(-1),
            sp.element("H^2").scale_i64(4),
            Element::zero(),
        ];
        let b = projective_bundle(&crate::spaces::with_trivial_twist(&p2, "L").unwrap(), &c, 3).unwrap();
        let report = verify_bundle(&b).unwrap();
        assert!(report.all_passed(), "{:?}", report.failures().collect::<Vec<_>>());
    }

    #[test]
    fn chern_degree_checked() {
        let p1 = projective_space(1, DOL);
        let err = projective_bundle(&p1, &[p1.ring().one(), Element::zero()], 2).unwrap_err();
        assert!(matches!(err, Error::DegreeMismatch { .. }));
    }

    #[test]
    fn odd_classes_in_base() {
        let c = curve(2);
        let w = c.space().element("w").scale(&Rational::from_integer(7.into()));
        let b = projective_bundle(&c, &[w, Element::zero()], 2).unwrap();
        assert!(b.total.check_axioms().is_ok());
        let (mu, tau) = b.mu_tau_pair(CLOSED).unwrap();
        assert!(tau.compose(&mu).unwrap().is_identity());
        assert!(mu.compose(&tau).unwrap().is_identity());
    }
}
