//! Space models: a cohomology ring (closed supports) together with named
//! flavors, each a module over that ring.
//!
//! Every model carries a `"closed"` flavor, which is the ring acting on
//! itself. Other flavors are compact supports (`"compact"`) and twisted
//! coefficient systems (any other name, closed supports). A flavor may also
//! carry a product with itself; compact supports do, twisted flavors do not.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{
    check_module_axioms, check_ring_axioms, koszul_sign, BigradedRing, BigradedVectorSpace, BilinearTable, Degree,
    Element, GradedModule, GradingMode,
};
use crate::linalg::rat;

pub const CLOSED: &str = "closed";
pub const COMPACT: &str = "compact";

/// A family of supports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SupportFlavor {
    Closed,
    Compact,
}

impl SupportFlavor {
    /// Supports of a cup product: the intersection of the two families.
    pub fn meet(self, other: SupportFlavor) -> SupportFlavor {
        match (self, other) {
            (SupportFlavor::Closed, SupportFlavor::Closed) => SupportFlavor::Closed,
            _ => SupportFlavor::Compact,
        }
    }
}

impl fmt::Display for SupportFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SupportFlavor::Closed => "closed",
            SupportFlavor::Compact => "compact",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flavor {
    pub support: SupportFlavor,
    pub module: GradedModule,
    pub self_product: Option<BilinearTable>,
}

impl Flavor {
    pub fn space(&self) -> &Arc<BigradedVectorSpace> {
        self.module.space()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceModel {
    name: String,
    ring: BigradedRing,
    flavors: BTreeMap<String, Flavor>,
}

impl SpaceModel {
    /// A model with only the closed flavor.
    pub fn new(name: impl Into<String>, ring: BigradedRing) -> Self {
        let closed = Flavor {
            support: SupportFlavor::Closed,
            module: ring.regular_module(),
            self_product: Some(ring.product().clone()),
        };
        let mut flavors = BTreeMap::new();
        flavors.insert(CLOSED.to_string(), closed);
        SpaceModel {
            name: name.into(),
            ring,
            flavors,
        }
    }

    /// Adds (or replaces) a non-closed flavor.
    pub fn with_flavor(mut self, name: impl Into<String>, flavor: Flavor) -> Result<Self> {
        let name = name.into();
        if name == CLOSED {
            return Err(Error::Flavor("the closed flavor is always the ring itself".into()));
        }
        if flavor.module.action().left_dim() != self.ring.dim() {
            return Err(Error::Flavor(format!("flavor {name:?} is not a module over this ring")));
        }
        if name == COMPACT && flavor.support != SupportFlavor::Compact {
            return Err(Error::Flavor("the compact flavor must have compact supports".into()));
        }
        self.flavors.insert(name, flavor);
        Ok(self)
    }

    /// The compact flavor equal to the closed one, for compact spaces.
    pub fn with_compact_equal_closed(self) -> Self {
        let flavor = Flavor {
            support: SupportFlavor::Compact,
            module: self.ring.regular_module(),
            self_product: Some(self.ring.product().clone()),
        };
        self.with_flavor(COMPACT, flavor).expect("regular module is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn mode(&self) -> GradingMode {
        self.ring.space().mode()
    }

    pub fn ring(&self) -> &BigradedRing {
        &self.ring
    }

    pub fn space(&self) -> &Arc<BigradedVectorSpace> {
        self.ring.space()
    }

    pub fn flavors(&self) -> &BTreeMap<String, Flavor> {
        &self.flavors
    }

    pub fn flavor_names(&self) -> Vec<String> {
        self.flavors.keys().cloned().collect()
    }

    pub fn has_flavor(&self, name: &str) -> bool {
        self.flavors.contains_key(name)
    }

    pub fn flavor(&self, name: &str) -> Result<&Flavor> {
        self.flavors.get(name).ok_or_else(|| {
            if name == COMPACT {
                Error::Flavor(format!("compact flavor is not defined for {:?}", self.name))
            } else {
                Error::Flavor(format!("{:?} has no flavor {name:?}", self.name))
            }
        })
    }

    pub fn flavor_space(&self, name: &str) -> Result<&Arc<BigradedVectorSpace>> {
        Ok(self.flavor(name)?.space())
    }

    /// Whether the compact flavor is literally the closed one.
    pub fn compact_is_closed(&self) -> bool {
        self.flavors
            .get(COMPACT)
            .is_some_and(|f| f.module == self.ring.regular_module())
    }

    /// Top degree of the compact flavor when that component is one dimensional.
    pub fn fundamental_degree(&self) -> Option<Degree> {
        let space = self.flavors.get(COMPACT)?.space();
        let top = space.degrees().max_by_key(|d| (d.total(), d.p))?;
        (space.dim_at(top) == 1).then_some(top)
    }

    /// The structure table for `a x b`, with the name of the flavor it lands in.
    ///
    /// Defined for `(closed, F)` (module action) and `(F, F)` when `F` has a
    /// self product.
    pub fn table(&self, a: &str, b: &str) -> Option<(&str, &BilinearTable)> {
        if a == CLOSED {
            let (name, f) = self.flavors.get_key_value(b)?;
            return Some((name.as_str(), f.module.action()));
        }
        if a == b {
            let (name, f) = self.flavors.get_key_value(a)?;
            return f.self_product.as_ref().map(|t| (name.as_str(), t));
        }
        None
    }

    /// Pairings `(left, right, out)` realized by this model's tables.
    pub fn pairings(&self) -> Vec<(String, String, String)> {
        let mut out = Vec::new();
        for (name, f) in &self.flavors {
            out.push((CLOSED.to_string(), name.clone(), name.clone()));
            if name != CLOSED && f.self_product.is_some() {
                out.push((name.clone(), name.clone(), name.clone()));
            }
        }
        out
    }

    /// Cup product of a class in flavor `fa` with a class in flavor `fb`.
    /// Returns the flavor the product lives in.
    pub fn cup(&self, fa: &str, a: &Element, fb: &str, b: &Element) -> Result<(String, Element)> {
        let sa = self.flavor(fa)?;
        let sb = self.flavor(fb)?;
        if let Some((out, t)) = self.table(fa, fb) {
            return Ok((out.to_string(), t.apply(a, b)));
        }
        if fb == CLOSED {
            // a * b = (-1)^{|a||b|} b * a, applied termwise.
            let t = sa.module.action();
            let mut out = Element::zero();
            for (i, x) in a.terms() {
                for (j, y) in b.terms() {
                    let s = koszul_sign(sa.space().degree(i), sb.space().degree(j));
                    out.add_scaled(&(x * y * rat(s)), t.get(j, i));
                }
            }
            return Ok((fa.to_string(), out));
        }
        Err(Error::Flavor(format!(
            "no cup product from flavors {fa:?} ({}) and {fb:?} ({}) into their meet ({})",
            sa.support,
            sb.support,
            sa.support.meet(sb.support)
        )))
    }

    /// Ring axioms, module axioms for every flavor, and for self products:
    /// degree additivity, associativity, graded commutativity and
    /// compatibility with the ring action.
    pub fn check_axioms(&self) -> Result<(), String> {
        check_ring_axioms(&self.ring).map_err(|v| format!("ring: {v}"))?;
        for (name, f) in &self.flavors {
            check_module_axioms(&self.ring, &f.module).map_err(|v| format!("flavor {name}: {v}"))?;
            if name == CLOSED {
                continue;
            }
            if let Some(t) = &f.self_product {
                check_self_product(&self.ring, &f.module, t).map_err(|e| format!("flavor {name}: {e}"))?;
            }
        }
        Ok(())
    }
}

fn check_self_product(ring: &BigradedRing, module: &GradedModule, t: &BilinearTable) -> Result<(), String> {
    let sp = module.space();
    let n = sp.dim();
    for a in 0..n {
        for b in 0..n {
            let expected = sp.degree(a) + sp.degree(b);
            if t.get(a, b).terms().any(|(i, _)| sp.degree(i) != expected) {
                return Err(format!(
                    "product {} * {} breaks degree additivity",
                    sp.label(a),
                    sp.label(b)
                ));
            }
            let sign = rat(koszul_sign(sp.degree(a), sp.degree(b)));
            if *t.get(a, b) != t.get(b, a).scale(&sign) {
                return Err(format!(
                    "product {} * {} is not graded commutative",
                    sp.label(a),
                    sp.label(b)
                ));
            }
            for c in 0..n {
                let left = t.apply(t.get(a, b), &Element::basis(c));
                let right = t.apply(&Element::basis(a), t.get(b, c));
                if left != right {
                    return Err(format!(
                        "product not associative on ({}, {}, {})",
                        sp.label(a),
                        sp.label(b),
                        sp.label(c)
                    ));
                }
            }
        }
    }
    for x in 0..ring.dim() {
        for a in 0..n {
            let xa = module.action().get(x, a);
            for b in 0..n {
                let left = t.apply(xa, &Element::basis(b));
                let right = module.act(&Element::basis(x), t.get(a, b));
                if left != right {
                    return Err(format!(
                        "(x m) n != x (m n) for x = {}, m = {}, n = {}",
                        ring.space().label(x),
                        sp.label(a),
                        sp.label(b)
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Builds a ring from labeled basis vectors and a product rule on basis indices.
pub fn ring_from_rule(
    mode: GradingMode,
    basis: Vec<(String, Degree)>,
    unit: usize,
    rule: impl FnMut(usize, usize) -> Element,
) -> Result<BigradedRing> {
    let space = Arc::new(BigradedVectorSpace::new(mode, basis)?);
    let n = space.dim();
    BigradedRing::new(space, unit, BilinearTable::from_fn(n, n, rule))
}

pub fn point(mode: GradingMode) -> SpaceModel {
    let ring = ring_from_rule(mode, vec![("1".into(), Degree::ZERO)], 0, |_, _| Element::basis(0)).expect("point ring");
    SpaceModel::new("pt", ring).with_compact_equal_closed()
}

fn power_label(var: &str, k: usize) -> String {
    match k {
        0 => "1".to_string(),
        1 => var.to_string(),
        _ => format!("{var}^{k}"),
    }
}

/// `Q[H]/(H^{n+1})` with `H` of complex degree `(1,1)`.
pub fn projective_space(n: usize, mode: GradingMode) -> SpaceModel {
    let basis = (0..=n)
        .map(|k| (power_label("H", k), mode.complex_degree(k as i32, k as i32)))
        .collect();
    let ring = ring_from_rule(mode, basis, 0, |a, b| {
        if a + b <= n {
            Element::basis(a + b)
        } else {
            Element::zero()
        }
    })
    .expect("projective space ring");
    SpaceModel::new(format!("P{n}"), ring).with_compact_equal_closed()
}

/// `C^n`: closed cohomology `Q` in degree 0, compact cohomology `Q` in the top degree.
pub fn affine_space(n: usize, mode: GradingMode) -> Result<SpaceModel> {
    if n == 0 {
        return Err(Error::InvalidSpace(
            "affine space needs n >= 1 (use point for n = 0)".into(),
        ));
    }
    let ring = ring_from_rule(mode, vec![("1".into(), Degree::ZERO)], 0, |_, _| Element::basis(0))?;
    let top = mode.complex_degree(n as i32, n as i32);
    let compact_space = Arc::new(BigradedVectorSpace::new(mode, [("u", top)])?);
    let action = BilinearTable::from_fn(1, 1, |_, _| Element::basis(0));
    let module = GradedModule::new(&ring, compact_space, action)?;
    let compact = Flavor {
        support: SupportFlavor::Compact,
        module,
        self_product: Some(BilinearTable::zero(1, 1)),
    };
    SpaceModel::new(format!("C{n}"), ring).with_flavor(COMPACT, compact)
}

/// A closed oriented surface of genus `g`, de Rham graded.
pub fn curve(g: usize) -> SpaceModel {
    curve_in(g, GradingMode::DeRham)
}

/// A genus-`g` curve in either grading. In Dolbeault mode `a_i` has type
/// (1,0), `b_i` type (0,1) and `w` type (1,1): the Hodge model of a compact
/// Riemann surface.
pub fn curve_in(g: usize, mode: GradingMode) -> SpaceModel {
    let (da, db) = match mode {
        GradingMode::DeRham => (Degree::new(1, 0), Degree::new(1, 0)),
        GradingMode::Dolbeault => (Degree::new(1, 0), Degree::new(0, 1)),
    };
    let mut basis = vec![("1".to_string(), Degree::ZERO)];
    for i in 1..=g {
        basis.push((format!("a{i}"), da));
    }
    for i in 1..=g {
        basis.push((format!("b{i}"), db));
    }
    basis.push(("w".to_string(), mode.complex_degree(1, 1)));
    let top = 2 * g + 1;
    let is_a = |k: usize| (1..=g).contains(&k);
    let is_b = |k: usize| (g + 1..=2 * g).contains(&k);
    let ring = ring_from_rule(mode, basis, 0, |x, y| {
        if x == 0 {
            return Element::basis(y);
        }
        if y == 0 {
            return Element::basis(x);
        }
        if is_a(x) && is_b(y) && y - g == x {
            return Element::basis(top);
        }
        if is_b(x) && is_a(y) && x - g == y {
            return Element::term(top, rat(-1));
        }
        Element::zero()
    })
    .expect("curve ring");
    SpaceModel::new(format!("C_g{g}"), ring).with_compact_equal_closed()
}

/// Structure constants of `(a1 x a2) * (b1 x b2) = (-1)^{|a2||b1|} (a1 b1) x (a2 b2)`.
fn tensor_table(
    x_table: &BilinearTable,
    y_table: &BilinearTable,
    x_right: &BigradedVectorSpace,
    y_left: &BigradedVectorSpace,
    y_out_dim: usize,
) -> BilinearTable {
    let (xl, xr) = (x_table.left_dim(), x_table.right_dim());
    let (yl, yr) = (y_table.left_dim(), y_table.right_dim());
    BilinearTable::from_fn(xl * yl, xr * yr, |a, b| {
        let (a1, a2) = (a / yl, a % yl);
        let (b1, b2) = (b / yr, b % yr);
        let sign = koszul_sign(y_left.degree(a2), x_right.degree(b1));
        let mut out = Element::zero();
        for (c1, u) in x_table.get(a1, b1).terms() {
            for (c2, v) in y_table.get(a2, b2).terms() {
                out.add_term(c1 * y_out_dim + c2, u * v * rat(sign));
            }
        }
        out
    })
}

fn tensor_space(x: &BigradedVectorSpace, y: &BigradedVectorSpace) -> Result<BigradedVectorSpace> {
    let mut basis = Vec::with_capacity(x.dim() * y.dim());
    for a in x.basis() {
        for b in y.basis() {
            basis.push((format!("{}×{}", a.label, b.label), a.degree + b.degree));
        }
    }
    BigradedVectorSpace::new(x.mode(), basis)
}

/// Kunneth product. Flavors present in both factors are tensored; in
/// particular the compact flavor exists only when both factors have one.
pub fn product(x: &SpaceModel, y: &SpaceModel) -> Result<SpaceModel> {
    if x.mode() != y.mode() {
        return Err(Error::ModeMismatch(format!(
            "cannot multiply {} ({}) by {} ({})",
            x.name,
            x.mode().name(),
            y.name,
            y.mode().name()
        )));
    }
    let xs = x.space();
    let ys = y.space();
    let space = Arc::new(tensor_space(xs, ys)?);
    let product = tensor_table(x.ring.product(), y.ring.product(), xs, ys, ys.dim());
    let unit = x.ring.unit_index() * ys.dim() + y.ring.unit_index();
    let ring = BigradedRing::new(space, unit, product)?;
    let mut model = SpaceModel::new(format!("{}x{}", x.name, y.name), ring);

    for (name, fx) in &x.flavors {
        if name == CLOSED {
            continue;
        }
        let Some(fy) = y.flavors.get(name) else {
            continue;
        };
        if fx.support != fy.support {
            continue;
        }
        let (mx, my) = (fx.space(), fy.space());
        let space = Arc::new(tensor_space(mx, my)?);
        let action = tensor_table(fx.module.action(), fy.module.action(), mx, ys, my.dim());
        let module = GradedModule::new(&model.ring, space, action)?;
        let self_product = match (&fx.self_product, &fy.self_product) {
            (Some(tx), Some(ty)) => Some(tensor_table(tx, ty, mx, my, my.dim())),
            _ => None,
        };
        model = model.with_flavor(
            name.clone(),
            Flavor {
                support: fx.support,
                module,
                self_product,
            },
        )?;
    }
    Ok(model)
}

/// Adds a rank-one trivial local system under `name`: a copy of the closed
/// flavor without a self product.
pub fn with_trivial_twist(model: &SpaceModel, name: &str) -> Result<SpaceModel> {
    let flavor = Flavor {
        support: SupportFlavor::Closed,
        module: model.ring.regular_module(),
        self_product: None,
    };
    model.clone().with_flavor(name, flavor)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(m: &SpaceModel, label: &str) -> Element {
        m.space().element(label)
    }

    #[test]
    fn meet_table() {
        use SupportFlavor::*;
        assert_eq!(Closed.meet(Closed), Closed);
        assert_eq!(Closed.meet(Compact), Compact);
        assert_eq!(Compact.meet(Closed), Compact);
        assert_eq!(Compact.meet(Compact), Compact);
    }

    #[test]
    fn point_model() {
        let p = point(GradingMode::Dolbeault);
        assert_eq!(
            p.space().dims().into_iter().collect::<Vec<_>>(),
            vec![(Degree::ZERO, 1)]
        );
        assert_eq!(p.ring().cup(&p.ring().one(), &p.ring().one()), p.ring().one());
        assert!(p.compact_is_closed());
        assert!(p.check_axioms().is_ok());
    }

    #[test]
    fn projective_plane() {
        let p2 = projective_space(2, GradingMode::Dolbeault);
        let dims: Vec<_> = p2.space().dims().into_iter().collect();
        assert_eq!(
            dims,
            vec![(Degree::new(0, 0), 1), (Degree::new(1, 1), 1), (Degree::new(2, 2), 1)]
        );
        let h = el(&p2, "H");
        let r = p2.ring();
        assert_eq!(r.cup(&r.one(), &h), h);
        assert_eq!(r.cup(&h, &h), el(&p2, "H^2"));
        assert!(r.pow(&h, 3).is_zero());
        assert!(p2.check_axioms().is_ok());
        assert_eq!(p2.fundamental_degree(), Some(Degree::new(2, 2)));
    }

    #[test]
    fn affine_plane() {
        let c2 = affine_space(2, GradingMode::Dolbeault).unwrap();
        assert_eq!(
            c2.space().dims().into_iter().collect::<Vec<_>>(),
            vec![(Degree::ZERO, 1)]
        );
        let compact = c2.flavor(COMPACT).unwrap();
        let dims: Vec<_> = compact.space().dims().into_iter().collect();
        assert_eq!(dims, vec![(Degree::new(2, 2), 1)]);
        let u = Element::basis(0);
        let (f, unit_u) = c2.cup(CLOSED, &c2.ring().one(), COMPACT, &u).unwrap();
        assert_eq!((f.as_str(), unit_u), (COMPACT, u.clone()));
        let (f, uu) = c2.cup(COMPACT, &u, COMPACT, &u).unwrap();
        assert_eq!(f, COMPACT);
        assert!(uu.is_zero());
        assert!(c2.check_axioms().is_ok());
        assert!(!c2.compact_is_closed());
        assert_eq!(c2.fundamental_degree(), Some(Degree::new(2, 2)));
        assert!(affine_space(0, GradingMode::Dolbeault).is_err());
    }

    #[test]
    fn genus_two_curve() {
        let c = curve(2);
        assert_eq!(c.space().total_dims().into_values().collect::<Vec<_>>(), vec![1, 4, 1]);
        let r = c.ring();
        let (a1, b1, w) = (el(&c, "a1"), el(&c, "b1"), el(&c, "w"));
        assert_eq!(r.cup(&a1, &b1), w);
        assert_eq!(r.cup(&b1, &a1), -&w);
        assert!(r.cup(&a1, &a1).is_zero());
        assert!(r.cup(&a1, &el(&c, "b2")).is_zero());
        assert!(c.check_axioms().is_ok());

        let e = curve_in(1, GradingMode::Dolbeault);
        let dims: Vec<_> = e.space().dims().into_iter().collect();
        assert_eq!(
            dims,
            vec![
                (Degree::new(0, 0), 1),
                (Degree::new(0, 1), 1),
                (Degree::new(1, 0), 1),
                (Degree::new(1, 1), 1)
            ]
        );
        assert!(e.check_axioms().is_ok());

        let c0 = curve(0);
        let p1 = projective_space(1, GradingMode::DeRham);
        assert_eq!(c0.space().dims(), p1.space().dims());
    }

    #[test]
    fn product_of_lines() {
        let p1 = projective_space(1, GradingMode::Dolbeault);
        let q = product(&p1, &p1).unwrap();
        let dims: Vec<_> = q.space().dims().into_iter().collect();
        assert_eq!(
            dims,
            vec![(Degree::new(0, 0), 1), (Degree::new(1, 1), 2), (Degree::new(2, 2), 1)]
        );
        let r = q.ring();
        let (h1, h2, hh) = (el(&q, "H×1"), el(&q, "1×H"), el(&q, "H×H"));
        assert_eq!(r.cup(&h1, &h2), hh);
        assert!(r.cup(&h1, &h1).is_zero());
        assert!(q.check_axioms().is_ok());
        assert!(q.compact_is_closed());
    }

    #[test]
    fn product_koszul_sign() {
        let t = product(&curve(1), &curve(1)).unwrap();
        let r = t.ring();
        let (a_1, _1_a) = (el(&t, "a1×1"), el(&t, "1×a1"));
        assert_eq!(r.cup(&a_1, &_1_a), el(&t, "a1×a1"));
        assert_eq!(r.cup(&_1_a, &a_1), -el(&t, "a1×a1"));
        assert!(t.check_axioms().is_ok());
    }

    #[test]
    fn product_mode_mismatch() {
        let a = projective_space(1, GradingMode::Dolbeault);
        assert!(matches!(product(&a, &curve(1)), Err(Error::ModeMismatch(_))));
    }

    #[test]
    fn product_compact_flavors() {
        let c1 = affine_space(1, GradingMode::Dolbeault).unwrap();
        let p1 = projective_space(1, GradingMode::Dolbeault);
        let m = product(&c1, &p1).unwrap();
        let compact = m.flavor(COMPACT).unwrap();
        let dims: Vec<_> = compact.space().dims().into_iter().collect();
        assert_eq!(dims, vec![(Degree::new(1, 1), 1), (Degree::new(2, 2), 1)]);
        assert!(m.check_axioms().is_ok());

        let bare = SpaceModel::new("bare", p1.ring().clone());
        let no_compact = product(&c1, &bare).unwrap();
        let err = no_compact.flavor(COMPACT).unwrap_err();
        assert!(err.to_string().contains("compact flavor is not defined"));
    }

    #[test]
    fn twisted_flavor_has_no_self_product() {
        let p1 = with_trivial_twist(&projective_space(1, GradingMode::Dolbeault), "L").unwrap();
        let h = el(&p1, "H");
        let (f, x) = p1.cup(CLOSED, &h, "L", &p1.ring().one()).unwrap();
        assert_eq!((f.as_str(), x), ("L", h.clone()));
        assert!(p1.cup("L", &h, "L", &h).is_err());
        assert!(p1.cup("L", &h, COMPACT, &h).is_err());
        assert!(p1.check_axioms().is_ok());
    }

    #[test]
    fn bad_degree_is_reported() {
        // H*H landing in degree 0: a degree additivity violation.
        let ring = ring_from_rule(
            GradingMode::Dolbeault,
            vec![("1".into(), Degree::ZERO), ("H".into(), Degree::new(1, 1))],
            0,
            |a, b| match (a, b) {
                (0, x) | (x, 0) => Element::basis(x),
                _ => Element::basis(0),
            },
        )
        .unwrap();
        let err = check_ring_axioms(&ring).unwrap_err();
        assert!(matches!(err, crate::graded::AxiomViolation::DegreeAdditivity { .. }));
    }
}
