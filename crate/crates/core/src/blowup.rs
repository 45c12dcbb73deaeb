//! Blow-ups along model centers.
//!
//! For `Y ⊂ X` of codimension `r` with normal Chern classes `c_1..c_r`, the
//! blow-up `X~` has, in every flavor, the basis `pi^*x` followed by
//! `E_k(y) = i_E*(h^{k-1} pi_E^* y)` for `k = 1..r-1`. Products follow from
//! the projection formula and the self-intersection `i_E^* i_E* = h`; the
//! class `i_E*(h^{r-1} pi_E^* y)` is rewritten with the excess intersection
//! formula
//!
//! ```text
//! pi^* i_Y* y = i_E*(c_{r-1}(Q) pi_E^* y),   c_{r-1}(Q) = sum_i (-1)^i h^i c_{r-1-i}.
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::bundle::{projective_bundle, ProjectiveBundle};
use crate::double_complex::FiniteDoubleComplex;
use crate::error::{Error, Result};
use crate::graded::{
    direct_sum_with_shifts, BigradedVectorSpace, BilinearTable, Degree, Element, GradedLinearMap, GradedModule,
    GradingMode,
};
use crate::linalg::rat;
use crate::report::{is_identity, same_map, Check, Report};
use crate::spaces::{Flavor, SpaceModel, CLOSED};

/// Restriction to and push-forward from the center, on one flavor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterMaps {
    pub restriction: GradedLinearMap,
    pub gysin: GradedLinearMap,
}

#[derive(Clone, Debug)]
pub struct BlowupDatum {
    pub ambient: SpaceModel,
    pub center: SpaceModel,
    pub codim: usize,
    /// `c_1(N), ..., c_r(N)` in the center's ring.
    pub normal_chern: Vec<Element>,
    /// Per flavor. The closed entry is always present.
    pub maps: BTreeMap<String, CenterMaps>,
}

fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

impl BlowupDatum {
    /// A datum with the closed maps. Every other flavor whose module is the
    /// regular module on both sides (compact flavor of a compact space,
    /// trivial twists) reuses the closed maps; other flavors need
    /// [`BlowupDatum::with_flavor_maps`] or are left out of the blow-up.
    pub fn new(
        ambient: SpaceModel,
        center: SpaceModel,
        codim: usize,
        normal_chern: Vec<Element>,
        restriction: GradedLinearMap,
        gysin: GradedLinearMap,
    ) -> Result<Self> {
        if ambient.mode() != center.mode() {
            return Err(Error::ModeMismatch(
                "ambient and center use different grading modes".into(),
            ));
        }
        if codim == 0 {
            return Err(Error::InvalidDatum("codimension must be at least 1".into()));
        }
        let closed = CenterMaps { restriction, gysin };
        let mut maps = BTreeMap::new();
        for (name, f) in ambient.flavors() {
            if name == CLOSED {
                continue;
            }
            let Some(g) = center.flavors().get(name) else { continue };
            if f.module == ambient.ring().regular_module() && g.module == center.ring().regular_module() {
                maps.insert(name.clone(), closed.clone());
            }
        }
        maps.insert(CLOSED.to_string(), closed);
        Ok(BlowupDatum {
            ambient,
            center,
            codim,
            normal_chern,
            maps,
        })
    }

    pub fn with_flavor_maps(
        mut self,
        name: impl Into<String>,
        restriction: GradedLinearMap,
        gysin: GradedLinearMap,
    ) -> Self {
        self.maps.insert(name.into(), CenterMaps { restriction, gysin });
        self
    }

    pub fn shift(&self) -> Degree {
        self.ambient.mode().blowup_shift()
    }

    /// Shapes and shifts of every map, the unital ring map property of the
    /// closed restriction, multiplicativity and both projection formulas on
    /// every pairing, and the self-intersection formula `i^* i_* = c_r`.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidDatum(msg));
        let (x, y) = (&self.ambient, &self.center);
        if self.normal_chern.len() != self.codim {
            return bad(format!(
                "expected {} normal Chern classes, got {}",
                self.codim,
                self.normal_chern.len()
            ));
        }
        let gysin_shift = self.shift().times(self.codim as i32);
        for (name, m) in &self.maps {
            let (xs, ys) = (x.flavor_space(name)?, y.flavor_space(name)?);
            if m.restriction.source() != xs || m.restriction.target() != ys || m.restriction.shift() != Degree::ZERO {
                return bad(format!(
                    "restriction on flavor {name} must map the ambient flavor to the center's, preserving degree"
                ));
            }
            if m.gysin.source() != ys || m.gysin.target() != xs || m.gysin.shift() != gysin_shift {
                return bad(format!("gysin map on flavor {name} must map the center's flavor to the ambient's, raising degree by {gysin_shift}"));
            }
        }
        let closed = &self.maps[CLOSED];
        if closed.restriction.apply(&x.ring().one()) != y.ring().one() {
            return bad("restriction does not send 1 to 1".into());
        }

        for (a, b, c) in x.pairings() {
            let (Some(ma), Some(mb), Some(mc)) = (self.maps.get(&a), self.maps.get(&b), self.maps.get(&c)) else {
                continue;
            };
            let Some((out, ty)) = y.table(&a, &b) else { continue };
            if out != c {
                continue;
            }
            let (_, tx) = x.table(&a, &b).expect("listed pairing");
            let (xa, xb) = (x.flavor_space(&a)?, x.flavor_space(&b)?);
            let (ya, yb) = (y.flavor_space(&a)?, y.flavor_space(&b)?);
            for i in 0..xa.dim() {
                let ri = ma.restriction.image_of_basis(i);
                for j in 0..xb.dim() {
                    let lhs = mc.restriction.apply(tx.get(i, j));
                    let rhs = ty.apply(&ri, &mb.restriction.image_of_basis(j));
                    if lhs != rhs {
                        return bad(format!(
                            "restriction is not multiplicative on ({}, {}) [{a} x {b}]",
                            xa.label(i),
                            xb.label(j)
                        ));
                    }
                }
                for j in 0..yb.dim() {
                    let lhs = mc.gysin.apply(&ty.apply(&ri, &Element::basis(j)));
                    let rhs = tx.apply(&Element::basis(i), &mb.gysin.image_of_basis(j));
                    if lhs != rhs {
                        return bad(format!(
                            "projection formula i_*(i^*a b) = a i_*b fails on ({}, {}) [{a} x {b}]",
                            xa.label(i),
                            yb.label(j)
                        ));
                    }
                }
            }
            for i in 0..ya.dim() {
                let gi = ma.gysin.image_of_basis(i);
                for j in 0..xb.dim() {
                    let lhs = mc
                        .gysin
                        .apply(&ty.apply(&Element::basis(i), &mb.restriction.image_of_basis(j)));
                    let rhs = tx.apply(&gi, &Element::basis(j));
                    if lhs != rhs {
                        return bad(format!(
                            "projection formula i_*(a i^*b) = i_*a b fails on ({}, {}) [{a} x {b}]",
                            ya.label(i),
                            xb.label(j)
                        ));
                    }
                }
            }
        }

        let top = &self.normal_chern[self.codim - 1];
        for (name, m) in &self.maps {
            let f = y.flavor(name)?;
            for i in 0..f.space().dim() {
                let lhs = m.restriction.apply(&m.gysin.image_of_basis(i));
                let rhs = f.module.act(top, &Element::basis(i));
                if lhs != rhs {
                    return bad(format!(
                        "self-intersection i^* i_* = c_{} fails on {} [{name}]",
                        self.codim,
                        f.space().label(i)
                    ));
                }
            }
        }
        Ok(())
    }
}

/// The maps attached to one flavor of a blow-up.
#[derive(Clone, Debug)]
pub struct FlavorMaps {
    pub pi_pullback: GradedLinearMap,
    pub pi_pushforward: GradedLinearMap,
    pub ie_pullback: GradedLinearMap,
    pub ie_pushforward: GradedLinearMap,
    /// `X (+) Y[1] (+) ... (+) Y[r-1] -> X~`.
    pub psi: GradedLinearMap,
    /// `X~ -> X (+) Y[1] (+) ... (+) Y[r-1]`.
    pub phi: GradedLinearMap,
}

#[derive(Clone, Debug)]
pub struct BlowupResult {
    pub datum: BlowupDatum,
    pub total: SpaceModel,
    pub exceptional: ProjectiveBundle,
    pub maps: BTreeMap<String, FlavorMaps>,
}

/// Index bookkeeping for one flavor: `pi^*x` first, then the blocks `E_1, ..., E_{r-1}`.
#[derive(Clone, Copy)]
struct Layout {
    nx: usize,
    ny: usize,
}

impl Layout {
    fn e(&self, k: usize, y: usize) -> usize {
        self.nx + (k - 1) * self.ny + y
    }
}

struct Ctx<'a> {
    datum: &'a BlowupDatum,
    bundle: &'a ProjectiveBundle,
}

impl Ctx<'_> {
    fn layout(&self, flavor: &str) -> Layout {
        Layout {
            nx: self.datum.ambient.flavor_space(flavor).expect("validated").dim(),
            ny: self.datum.center.flavor_space(flavor).expect("validated").dim(),
        }
    }

    /// `E_k(y)` for an element `y` of the center's flavor.
    fn e_class(&self, flavor: &str, k: usize, y: &Element) -> Element {
        let l = self.layout(flavor);
        y.reindex(|m| l.e(k, m))
    }

    /// `i_E*` of an element of `E` written in the basis `h^i pi_E^* y`, `i < r`.
    fn push(&self, flavor: &str, e: &Element) -> Element {
        let r = self.datum.codim;
        let l = self.layout(flavor);
        let y_module = &self.datum.center.flavor(flavor).expect("validated").module;
        let gysin = &self.datum.maps[flavor].gysin;
        let mut out = Element::zero();
        for (idx, x) in e.terms() {
            let (i, m) = (idx / l.ny, idx % l.ny);
            if i + 1 < r {
                out.add_term(l.e(i + 1, m), x);
                continue;
            }
            // i = r - 1: (-1)^{r-1} [pi^* i_Y* y - sum_l (-1)^l E_{l+1}(c_{r-1-l} y)]
            let y = Element::basis(m);
            let mut term = gysin.apply(&y);
            for j in 0..r - 1 {
                let cy = y_module.act(&self.datum.normal_chern[r - 2 - j], &y);
                term.add_scaled(&rat(-sign(j)), &self.e_class(flavor, j + 1, &cy));
            }
            out.add_scaled(&(x * rat(sign(r - 1))), &term);
        }
        out
    }

    /// Structure constants on `X~_a x X~_b` for an ambient pairing with tables `tx`, `ty`.
    fn table(&self, a: &str, b: &str, c: &str, tx: &BilinearTable, ty: &BilinearTable) -> BilinearTable {
        let (la, lb) = (self.layout(a), self.layout(b));
        let r = self.datum.codim;
        let (ra, rb) = (&self.datum.maps[a].restriction, &self.datum.maps[b].restriction);
        let split = |l: Layout, i: usize| -> Option<(usize, usize)> {
            (i >= l.nx).then(|| ((i - l.nx) / l.ny + 1, (i - l.nx) % l.ny))
        };
        let dim = |l: Layout| l.nx + (r - 1) * l.ny;
        BilinearTable::from_fn(dim(la), dim(lb), |i, j| match (split(la, i), split(lb, j)) {
            (None, None) => tx.get(i, j).clone(),
            (None, Some((k, y))) => self.e_class(c, k, &ty.apply(&ra.image_of_basis(i), &Element::basis(y))),
            (Some((k, y)), None) => self.e_class(c, k, &ty.apply(&Element::basis(y), &rb.image_of_basis(j))),
            (Some((k1, y1)), Some((k2, y2))) => {
                let mut coeffs = vec![Element::zero(); k1 + k2];
                coeffs[k1 + k2 - 1] = ty.get(y1, y2).clone();
                let reduced = self.bundle.reduce(c, &coeffs).expect("validated flavor");
                self.push(c, &reduced)
            }
        })
    }

    fn total_space(&self, flavor: &str) -> Result<BigradedVectorSpace> {
        let xs = self.datum.ambient.flavor_space(flavor)?;
        let ys = self.datum.center.flavor_space(flavor)?;
        let s = self.datum.shift();
        let mut basis: Vec<(String, Degree)> = xs.basis().iter().map(|b| (b.label.clone(), b.degree)).collect();
        for k in 1..self.datum.codim {
            for b in ys.basis() {
                basis.push((format!("E{k}({})", b.label), b.degree + s.times(k as i32)));
            }
        }
        BigradedVectorSpace::new(xs.mode(), basis)
    }
}

/// Builds the blow-up after validating the datum.
///
/// Codimension 1 is allowed and returns the ambient ring unchanged (same
/// labels), with `psi` and `phi` identities up to relabeling of the
/// one-summand decomposition.
pub fn blow_up(datum: BlowupDatum) -> Result<BlowupResult> {
    let bundle = projective_bundle(&datum.center, &datum.normal_chern, datum.codim)?;
    datum.validate()?;
    let ctx = Ctx {
        datum: &datum,
        bundle: &bundle,
    };
    let (x, y) = (&datum.ambient, &datum.center);

    let mut spaces: BTreeMap<String, Arc<BigradedVectorSpace>> = BTreeMap::new();
    for name in datum.maps.keys() {
        spaces.insert(name.clone(), Arc::new(ctx.total_space(name)?));
    }
    let table_for = |a: &str, b: &str| -> Option<BilinearTable> {
        let (c, tx) = x.table(a, b)?;
        let (c2, ty) = y.table(a, b)?;
        (c == c2 && datum.maps.contains_key(c)).then(|| ctx.table(a, b, c, tx, ty))
    };

    let closed_table = table_for(CLOSED, CLOSED).expect("closed pairing");
    let ring = crate::graded::BigradedRing::new(spaces[CLOSED].clone(), x.ring().unit_index(), closed_table)?;
    let name = format!("Bl_{}({})", y.name(), x.name());
    let mut total = SpaceModel::new(name, ring);
    for (fname, f) in x.flavors() {
        if fname == CLOSED || !datum.maps.contains_key(fname) {
            continue;
        }
        let action = table_for(CLOSED, fname).expect("module action");
        let module = GradedModule::new(total.ring(), spaces[fname].clone(), action)?;
        let self_product = if f.self_product.is_some() {
            table_for(fname, fname)
        } else {
            None
        };
        total = total.with_flavor(
            fname.clone(),
            Flavor {
                support: f.support,
                module,
                self_product,
            },
        )?;
    }

    let s = datum.shift();
    let r = datum.codim;
    let mut maps = BTreeMap::new();
    for (fname, cm) in &datum.maps {
        let l = ctx.layout(fname);
        let xs = x.flavor_space(fname)?.clone();
        let ys = y.flavor_space(fname)?.clone();
        let ts = spaces[fname].clone();
        let es = bundle.total.flavor_space(fname)?.clone();

        let pi_pullback = GradedLinearMap::from_fn(xs.clone(), ts.clone(), Degree::ZERO, |i| Ok(Element::basis(i)))?;
        let pi_pushforward = GradedLinearMap::from_fn(ts.clone(), xs.clone(), Degree::ZERO, |i| {
            Ok(if i < l.nx { Element::basis(i) } else { Element::zero() })
        })?;
        let ie_pullback = GradedLinearMap::from_fn(ts.clone(), es.clone(), Degree::ZERO, |i| {
            Ok(if i < l.nx {
                cm.restriction.image_of_basis(i)
            } else {
                let (k, m) = ((i - l.nx) / l.ny + 1, (i - l.nx) % l.ny);
                Element::basis(k * l.ny + m)
            })
        })?;
        let ie_pushforward =
            GradedLinearMap::from_fn(es.clone(), ts.clone(), s, |i| Ok(ctx.push(fname, &Element::basis(i))))?;

        let mut summands = vec![(xs.as_ref(), Degree::ZERO)];
        summands.extend((1..r).map(|k| (ys.as_ref(), s.times(k as i32))));
        let decomposition = Arc::new(direct_sum_with_shifts(&summands)?);
        let psi = GradedLinearMap::from_fn(decomposition.clone(), ts.clone(), Degree::ZERO, |i| {
            Ok(Element::basis(i))
        })?;
        let gs = bundle.correction_maps(fname)?;
        let g_after: Vec<GradedLinearMap> = gs
            .iter()
            .skip(1)
            .map(|g| g.compose(&ie_pullback))
            .collect::<Result<_>>()?;
        let phi = GradedLinearMap::from_fn(ts.clone(), decomposition, Degree::ZERO, |i| {
            let mut out = pi_pushforward.image_of_basis(i);
            for (k0, g) in g_after.iter().enumerate() {
                out += &g.image_of_basis(i).reindex(|m| l.e(k0 + 1, m));
            }
            Ok(out)
        })?;
        maps.insert(
            fname.clone(),
            FlavorMaps {
                pi_pullback,
                pi_pushforward,
                ie_pullback,
                ie_pushforward,
                psi,
                phi,
            },
        );
    }

    Ok(BlowupResult {
        datum,
        total,
        exceptional: bundle,
        maps,
    })
}

impl BlowupResult {
    pub fn flavor_maps(&self, flavor: &str) -> Result<&FlavorMaps> {
        self.maps
            .get(flavor)
            .ok_or_else(|| Error::Flavor(format!("blow-up has no flavor {flavor:?}")))
    }

    /// The class `E_k(y)` in the closed flavor, by the center label of `y`.
    pub fn e_class(&self, k: usize, center_label: &str) -> Element {
        self.total.space().element(&format!("E{k}({center_label})"))
    }
}

/// `phi psi = id` and `psi phi = id` in every flavor.
pub fn verify_inverse_pair(res: &BlowupResult) -> Report {
    let mut report = Report::default();
    for (name, m) in &res.maps {
        let check = |f: &GradedLinearMap, g: &GradedLinearMap| {
            f.compose(g).map_err(|e| e.to_string()).and_then(|c| is_identity(&c))
        };
        report.push(Check::from_result(
            format!("phi o psi = id [{name}]"),
            check(&m.phi, &m.psi),
        ));
        report.push(Check::from_result(
            format!("psi o phi = id [{name}]"),
            check(&m.psi, &m.phi),
        ));
    }
    report
}

/// `dim X~ + dim Y = dim X + dim E` in every degree and flavor.
pub fn dimension_identity_check(res: &BlowupResult) -> Report {
    let mut report = Report::default();
    for name in res.maps.keys() {
        let dims = |m: &SpaceModel| m.flavor_space(name).map(|s| s.dims()).unwrap_or_default();
        let (t, x, y, e) = (
            dims(&res.total),
            dims(&res.datum.ambient),
            dims(&res.datum.center),
            dims(&res.exceptional.total),
        );
        let mut degrees: Vec<Degree> = t
            .keys()
            .chain(x.keys())
            .chain(y.keys())
            .chain(e.keys())
            .copied()
            .collect();
        degrees.sort();
        degrees.dedup();
        let get = |m: &BTreeMap<Degree, usize>, d: Degree| m.get(&d).copied().unwrap_or(0);
        let result = degrees
            .into_iter()
            .find(|&d| get(&t, d) + get(&y, d) != get(&x, d) + get(&e, d))
            .map_or(Ok(()), |d| {
                Err(format!(
                    "degree {d}: {} + {} != {} + {}",
                    get(&t, d),
                    get(&y, d),
                    get(&x, d),
                    get(&e, d)
                ))
            });
        report.push(Check::from_result(format!("dimension identity [{name}]"), result));
    }
    report
}

/// One window of the truncated hypercohomology comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedDims {
    pub s: i32,
    pub t: i32,
    /// `dim H^k(X~, Omega^[s,t])`, nonzero entries only.
    pub blowup: BTreeMap<i32, usize>,
    /// `dim H^k(X, Omega^[s,t]) + sum_i dim H^{k-2i}(Y, Omega^[s-i,t-i])`.
    pub expected: BTreeMap<i32, usize>,
}

impl TruncatedDims {
    pub fn matches(&self) -> bool {
        self.blowup == self.expected
    }
}

/// Truncated hypercohomology of the Hodge models (all-dot double complexes)
/// of one flavor. Requires Dolbeault grading; `s > t` gives zeros.
pub fn truncated_hypercohomology_dims(res: &BlowupResult, flavor: &str, s: i32, t: i32) -> Result<TruncatedDims> {
    if res.total.mode() != GradingMode::Dolbeault {
        return Err(Error::ModeMismatch(
            "truncated hypercohomology needs Dolbeault grading".into(),
        ));
    }
    let model =
        |m: &SpaceModel| -> Result<FiniteDoubleComplex> { FiniteDoubleComplex::hodge_model(m.flavor_space(flavor)?) };
    let blowup = model(&res.total)?.truncate_columns(s, t).total_cohomology();
    let mut expected = model(&res.datum.ambient)?.truncate_columns(s, t).total_cohomology();
    let y = model(&res.datum.center)?;
    for i in 1..res.datum.codim as i32 {
        for (k, n) in y.truncate_columns(s - i, t - i).total_cohomology() {
            *expected.entry(k + 2 * i).or_insert(0) += n;
        }
    }
    Ok(TruncatedDims { s, t, blowup, expected })
}

/// Every window `0 <= s <= t <= n`, with `n` the largest column of the blow-up, per flavor.
pub fn truncated_hypercohomology_check(res: &BlowupResult) -> Result<Report> {
    let mut report = Report::default();
    for name in res.maps.keys() {
        let n = res.total.flavor_space(name)?.degrees().map(|d| d.p).max().unwrap_or(0);
        let mut failure = None;
        'windows: for s in 0..=n {
            for t in s..=n {
                let w = truncated_hypercohomology_dims(res, name, s, t)?;
                if !w.matches() {
                    failure = Some(format!("window [{s},{t}]: {:?} vs {:?}", w.blowup, w.expected));
                    break 'windows;
                }
            }
        }
        report.push(Check::from_result(
            format!("truncated hypercohomology [{name}]"),
            failure.map_or(Ok(()), Err),
        ));
    }
    Ok(report)
}

/// Bott-Chern and Aeppli dimensions of the Hodge models add up like the
/// decomposition `X (+) Y[1] (+) ... (+) Y[r-1]`.
pub fn bott_chern_bookkeeping(res: &BlowupResult) -> Result<Report> {
    let mut report = Report::default();
    for name in res.maps.keys() {
        let model =
            |m: &SpaceModel| -> Result<FiniteDoubleComplex> { FiniteDoubleComplex::hodge_model(m.flavor_space(name)?) };
        let y = model(&res.datum.center)?;
        let mut sum = model(&res.datum.ambient)?;
        for i in 1..res.datum.codim as i32 {
            sum = sum.direct_sum(&y.shifted(i, i));
        }
        let t = model(&res.total)?;
        let ok = t.bott_chern() == sum.bott_chern() && t.aeppli() == sum.aeppli();
        report.push(Check::from_result(
            format!("bott-chern/aeppli bookkeeping [{name}]"),
            if ok {
                Ok(())
            } else {
                Err("dimension tables differ".into())
            },
        ));
    }
    Ok(report)
}

/// Checks `f(T(a, b)) = T'(g(a), h(b))`-style identities on all basis pairs.
fn on_pairs(
    left: &BigradedVectorSpace,
    right: &BigradedVectorSpace,
    mut f: impl FnMut(usize, usize) -> (Element, Element),
) -> Result<(), String> {
    for i in 0..left.dim() {
        for j in 0..right.dim() {
            let (a, b) = f(i, j);
            if a != b {
                return Err(format!("fails on ({}, {})", left.label(i), right.label(j)));
            }
        }
    }
    Ok(())
}

/// The full identity suite: ring and module axioms, inverse pair, ring-map
/// properties of `pi^*` and `i_E^*`, projection formulas for `(pi_*, pi^*)`
/// and `(i_E*, i_E^*)`, self-intersection, excess intersection,
/// `pi_* i_E* = i_Y* pi_E*`, the dimension identity and, in Dolbeault mode,
/// truncated hypercohomology and Bott-Chern bookkeeping.
pub fn verify_blowup(res: &BlowupResult) -> Result<Report> {
    let mut report = Report::default();
    let (x, t, e) = (&res.datum.ambient, &res.total, &res.exceptional.total);
    report.push(Check::from_result("ring and module axioms", t.check_axioms()));
    report.extend(verify_inverse_pair(res));

    let closed = &res.maps[CLOSED];
    report.push(Check::from_result(
        "pi^* and i_E^* are unital",
        if closed.pi_pullback.apply(&x.ring().one()) == t.ring().one()
            && closed.ie_pullback.apply(&t.ring().one()) == e.ring().one()
        {
            Ok(())
        } else {
            Err("1 is not sent to 1".into())
        },
    ));

    for (a, b, c) in t.pairings() {
        let tag = format!("[{a} x {b}]");
        let (_, tt) = t.table(&a, &b).expect("pairing");
        let (ma, mb, mc) = (&res.maps[&a], &res.maps[&b], &res.maps[&c]);
        let (ta, tb) = (t.flavor_space(&a)?, t.flavor_space(&b)?);
        let (xa, xb) = (x.flavor_space(&a)?, x.flavor_space(&b)?);
        if let Some((_, tx)) = x.table(&a, &b) {
            report.push(Check::from_result(
                format!("pi^* multiplicative {tag}"),
                on_pairs(xa, xb, |i, j| {
                    (
                        mc.pi_pullback.apply(tx.get(i, j)),
                        tt.apply(&ma.pi_pullback.image_of_basis(i), &mb.pi_pullback.image_of_basis(j)),
                    )
                }),
            ));
            report.push(Check::from_result(
                format!("projection formula pi_*(a pi^*b) = pi_*a b {tag}"),
                on_pairs(ta, xb, |i, j| {
                    (
                        mc.pi_pushforward
                            .apply(&tt.apply(&Element::basis(i), &mb.pi_pullback.image_of_basis(j))),
                        tx.apply(&ma.pi_pushforward.image_of_basis(i), &Element::basis(j)),
                    )
                }),
            ));
            report.push(Check::from_result(
                format!("projection formula pi_*(pi^*a b) = a pi_*b {tag}"),
                on_pairs(xa, tb, |i, j| {
                    (
                        mc.pi_pushforward
                            .apply(&tt.apply(&ma.pi_pullback.image_of_basis(i), &Element::basis(j))),
                        tx.apply(&Element::basis(i), &mb.pi_pushforward.image_of_basis(j)),
                    )
                }),
            ));
        }
        if let Some((_, te)) = e.table(&a, &b) {
            let (ea, eb) = (e.flavor_space(&a)?, e.flavor_space(&b)?);
            report.push(Check::from_result(
                format!("i_E^* multiplicative {tag}"),
                on_pairs(ta, tb, |i, j| {
                    (
                        mc.ie_pullback.apply(tt.get(i, j)),
                        te.apply(&ma.ie_pullback.image_of_basis(i), &mb.ie_pullback.image_of_basis(j)),
                    )
                }),
            ));
            report.push(Check::from_result(
                format!("projection formula i_E*(i_E^*a b) = a i_E*b {tag}"),
                on_pairs(ta, eb, |i, j| {
                    (
                        mc.ie_pushforward
                            .apply(&te.apply(&ma.ie_pullback.image_of_basis(i), &Element::basis(j))),
                        tt.apply(&Element::basis(i), &mb.ie_pushforward.image_of_basis(j)),
                    )
                }),
            ));
            report.push(Check::from_result(
                format!("projection formula i_E*(a i_E^*b) = i_E*a b {tag}"),
                on_pairs(ea, tb, |i, j| {
                    (
                        mc.ie_pushforward
                            .apply(&te.apply(&Element::basis(i), &mb.ie_pullback.image_of_basis(j))),
                        tt.apply(&ma.ie_pushforward.image_of_basis(i), &Element::basis(j)),
                    )
                }),
            ));
        }
    }

    let bundle = &res.exceptional;
    let r = res.datum.codim;
    // c_{r-1}(Q) = sum_i (-1)^i h^i c_{r-1-i}, with c_0 = 1.
    let mut c_q = Element::zero();
    for i in 0..r {
        let c = if i == r - 1 {
            res.datum.center.ring().one()
        } else {
            res.datum.normal_chern[r - 2 - i].clone()
        };
        let pulled = bundle.pullback(CLOSED)?.apply(&c);
        c_q.add_scaled(&rat(sign(i)), &e.ring().cup(&bundle.h_power(i), &pulled));
    }

    for (name, m) in &res.maps {
        let tag = format!("[{name}]");
        let cm = &res.datum.maps[name];
        let ef = e.flavor(name)?;
        let composite = |f: &GradedLinearMap, g: &GradedLinearMap| f.compose(g).map_err(|e| e.to_string());

        report.push(Check::from_result(
            format!("pi_* pi^* = id {tag}"),
            composite(&m.pi_pushforward, &m.pi_pullback).and_then(|c| is_identity(&c)),
        ));
        report.push(Check::from_result(
            format!("i_E^* i_E* = h {tag}"),
            composite(&m.ie_pullback, &m.ie_pushforward).and_then(|c| {
                let h = bundle.h_multiplication(name, 1).map_err(|e| e.to_string())?;
                same_map(&c, &h)
            }),
        ));
        let excess = (|| -> Result<(), String> {
            let lhs = composite(&m.pi_pullback, &cm.gysin)?;
            let pull = bundle.pullback(name).map_err(|e| e.to_string())?;
            let rhs = GradedLinearMap::from_fn(lhs.source().clone(), lhs.target().clone(), lhs.shift(), |i| {
                Ok(m.ie_pushforward.apply(&ef.module.act(&c_q, &pull.image_of_basis(i))))
            })
            .map_err(|e| e.to_string())?;
            same_map(&lhs, &rhs)
        })();
        report.push(Check::from_result(
            format!("excess intersection pi^* i_Y* = i_E*(c_(r-1)(Q) pi_E^*) {tag}"),
            excess,
        ));
        let push_square = (|| -> Result<(), String> {
            let lhs = composite(&m.pi_pushforward, &m.ie_pushforward)?;
            let rhs = composite(&cm.gysin, bundle.pushforward(name).map_err(|e| e.to_string())?)?;
            same_map(&lhs, &rhs)
        })();
        report.push(Check::from_result(format!("pi_* i_E* = i_Y* pi_E* {tag}"), push_square));
    }

    report.extend(dimension_identity_check(res));
    if t.mode() == GradingMode::Dolbeault {
        report.extend(truncated_hypercohomology_check(res)?);
        report.extend(bott_chern_bookkeeping(res)?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::Rational;
    use crate::spaces::COMPACT;

    fn assert_all_pass(report: &Report) {
        let failures: Vec<_> = report.failures().collect();
        assert!(failures.is_empty(), "{failures:#?}");
    }

    #[test]
    fn point_in_projective_plane() {
        let res = blow_up(catalog::point_in_projective_space(2, GradingMode::Dolbeault)).unwrap();
        let t = &res.total;
        let sp = t.space();
        assert_eq!(sp.total_dims().into_values().collect::<Vec<_>>(), vec![1, 2, 1]);
        let e = res.e_class(1, "1");
        let h = sp.element("H");
        let ring = t.ring();
        assert_eq!(ring.cup(&e, &e), -sp.element("H^2"));
        assert!(ring.cup(&h, &e).is_zero());
        assert_all_pass(&verify_blowup(&res).unwrap());

        // phi(e) = (pi_* e, G^{-1}(i_E^* e)) = (0, 1)
        let phi = &res.maps[CLOSED].phi;
        let target = phi.target();
        assert_eq!(phi.apply(&e), target.element("s1.1"));
    }

    #[test]
    fn point_in_projective_three_space() {
        let res = blow_up(catalog::point_in_projective_space(3, GradingMode::Dolbeault)).unwrap();
        assert_eq!(
            res.total.space().total_dims().into_values().collect::<Vec<_>>(),
            vec![1, 2, 2, 1]
        );
        let e = res.e_class(1, "1");
        let ring = res.total.ring();
        // E^3 = (-1)^{r-1} pt = pt for r = 3
        assert_eq!(ring.pow(&e, 3), res.total.space().element("H^3"));
        assert_eq!(ring.cup(&e, &e), res.e_class(2, "1"));
        assert_all_pass(&verify_blowup(&res).unwrap());
    }

    #[test]
    fn line_in_projective_three_space() {
        for c1 in [1, 2] {
            let res = blow_up(catalog::line_in_p3(c1, GradingMode::Dolbeault)).unwrap();
            let dims = res.total.space().dims();
            assert_eq!(dims[&Degree::new(1, 1)], 2);
            assert_eq!(dims[&Degree::new(2, 2)], 2);
            assert_all_pass(&verify_blowup(&res).unwrap());
            let e = res.e_class(1, "1");
            assert_eq!(
                res.total.ring().pow(&e, 3),
                res.total.space().element("H^3").scale_i64(-c1)
            );
        }
    }

    #[test]
    fn point_in_quadric() {
        let res = blow_up(catalog::point_in_p1xp1(GradingMode::Dolbeault)).unwrap();
        assert_eq!(
            res.total.space().total_dims().into_values().collect::<Vec<_>>(),
            vec![1, 3, 1]
        );
        assert_all_pass(&verify_blowup(&res).unwrap());
    }

    #[test]
    fn curve_center() {
        for mode in [GradingMode::DeRham, GradingMode::Dolbeault] {
            let res = blow_up(catalog::curve_in_curve_times_p2(1, mode)).unwrap();
            assert_all_pass(&verify_blowup(&res).unwrap());
            let totals: Vec<usize> = res.total.space().total_dims().into_values().collect();
            // X = C x P2: 1,2,2,2,2,2,1 ; plus Y[2]: 0,0,1,2,1
            assert_eq!(totals, vec![1, 2, 3, 4, 3, 2, 1]);
        }
    }

    #[test]
    fn compact_supports_of_affine_blowup() {
        let res = blow_up(catalog::origin_in_affine_space(2, GradingMode::Dolbeault)).unwrap();
        let compact: Vec<_> = res.total.flavor_space(COMPACT).unwrap().dims().into_iter().collect();
        assert_eq!(compact, vec![(Degree::new(1, 1), 1), (Degree::new(2, 2), 1)]);
        let closed: Vec<_> = res.total.space().dims().into_iter().collect();
        assert_eq!(closed, vec![(Degree::new(0, 0), 1), (Degree::new(1, 1), 1)]);
        assert_all_pass(&verify_blowup(&res).unwrap());
        let e = Element::basis(1);
        assert!(res.total.ring().cup(&e, &e).is_zero());
        let (_, ee) = res
            .total
            .cup(COMPACT, &Element::basis(1), COMPACT, &Element::basis(1))
            .unwrap();
        assert_eq!(ee, -Element::basis(0));
    }

    #[test]
    fn codimension_one_is_the_identity() {
        // A point on P^1 is a divisor; the point's ring forces c_1 = 0.
        let res = blow_up(catalog::point_in_projective_space(1, GradingMode::Dolbeault)).unwrap();
        assert_eq!(res.total.ring(), res.datum.ambient.ring());
        assert_all_pass(&verify_blowup(&res).unwrap());
    }

    #[test]
    fn invalid_data_are_named() {
        // i_*(H_Y) = 0 while i_*(1) = H^2 breaks i_*(i^*H . 1) = H . i_*1.
        let mut datum = catalog::line_in_p3(2, GradingMode::Dolbeault);
        let (x, y) = (datum.ambient.space().clone(), datum.center.space().clone());
        let gysin = catalog::map_by_label(&y, &x, Degree::new(2, 2), |l| {
            if l == "1" {
                x.element("H^2")
            } else {
                Element::zero()
            }
        })
        .unwrap();
        datum.maps.get_mut(CLOSED).unwrap().gysin = gysin.clone();
        datum.maps.get_mut(COMPACT).unwrap().gysin = gysin;
        let err = blow_up(datum).unwrap_err().to_string();
        assert!(err.contains("projection formula") && err.contains("(H, 1)"), "{err}");

        let datum = catalog::line_in_p3(1, GradingMode::Dolbeault);
        let x = datum.ambient.space().clone();
        let y = datum.center.space().clone();
        // i^*(H) = 2 H_Y is not compatible with i_*(1) = H^2, i_*(H_Y) = H^3.
        let restriction = GradedLinearMap::from_fn(x.clone(), y.clone(), Degree::ZERO, |i| {
            Ok(match i {
                0 => Element::basis(0),
                1 => Element::term(1, Rational::from_integer(2.into())),
                _ => Element::zero(),
            })
        })
        .unwrap();
        let gysin = datum.maps[CLOSED].gysin.clone();
        let bad = BlowupDatum::new(datum.ambient, datum.center, 2, datum.normal_chern, restriction, gysin).unwrap();
        let err = blow_up(bad).unwrap_err().to_string();
        assert!(err.contains("projection formula") && err.contains("(H, 1)"), "{err}");
    }

    #[test]
    fn trivial_twist_matches_untwisted() {
        let datum = catalog::point_in_projective_space(2, GradingMode::Dolbeault);
        let twisted = catalog::with_twist(&datum, "L").unwrap();
        let res = blow_up(twisted).unwrap();
        let l = &res.maps["L"];
        let c = &res.maps[CLOSED];
        assert_eq!(l.phi.matrix(), c.phi.matrix());
        assert_eq!(l.ie_pushforward.matrix(), c.ie_pushforward.matrix());
        assert_eq!(res.total.flavor_space("L").unwrap().dims(), res.total.space().dims());
        assert_all_pass(&verify_blowup(&res).unwrap());
    }

    #[test]
    fn truncated_examples() {
        let res = blow_up(catalog::point_in_projective_space(2, GradingMode::Dolbeault)).unwrap();
        let w = truncated_hypercohomology_dims(&res, CLOSED, 1, 2).unwrap();
        assert_eq!(w.blowup.get(&2), Some(&2));
        assert!(w.matches());
        let full = truncated_hypercohomology_dims(&res, CLOSED, 0, 2).unwrap();
        assert_eq!(
            full.blowup,
            res.total
                .space()
                .total_dims()
                .into_iter()
                .filter(|&(_, n)| n > 0)
                .collect()
        );
        let empty = truncated_hypercohomology_dims(&res, CLOSED, 2, 1).unwrap();
        assert!(empty.blowup.is_empty() && empty.expected.is_empty());
        let de_rham = blow_up(catalog::point_in_projective_space(2, GradingMode::DeRham)).unwrap();
        assert!(truncated_hypercohomology_dims(&de_rham, CLOSED, 0, 1).is_err());
    }

    #[test]
    fn dimension_identity_examples() {
        let res = blow_up(catalog::point_in_projective_space(2, GradingMode::Dolbeault)).unwrap();
        assert!(dimension_identity_check(&res).all_passed());
        let e = res.exceptional.total.space().dims();
        assert_eq!(e[&Degree::new(1, 1)], 1);
    }
}
