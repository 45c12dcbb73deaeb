use std::collections::BTreeMap;

use hodgecalc::blowup::{blow_up, dimension_identity_check, verify_blowup, verify_inverse_pair};
use hodgecalc::bundle::{projective_bundle, verify_bundle};
use hodgecalc::catalog;
use hodgecalc::double_complex::{generate, FiniteDoubleComplex};
use hodgecalc::graded::{koszul_sign, Element, GradingMode};
use hodgecalc::linalg::frac;
use hodgecalc::report::Report;
use hodgecalc::spaces::{self, SpaceModel};
use proptest::prelude::*;

fn mode() -> impl Strategy<Value = GradingMode> {
    prop_oneof![Just(GradingMode::Dolbeault), Just(GradingMode::DeRham)]
}

fn model(mode: GradingMode, kind: u8, n: usize) -> SpaceModel {
    match kind % 4 {
        0 => spaces::point(mode),
        1 => spaces::projective_space(1 + n % 3, mode),
        2 => spaces::curve_in(n % 3, mode),
        _ => spaces::affine_space(1 + n % 2, mode).unwrap(),
    }
}

fn any_model() -> impl Strategy<Value = SpaceModel> {
    (mode(), any::<u8>(), 0usize..6).prop_map(|(m, k, n)| model(m, k, n))
}

/// A compact model: anything but affine space.
fn compact_model() -> impl Strategy<Value = SpaceModel> {
    (mode(), 0u8..3, 0usize..6).prop_map(|(m, k, n)| model(m, k, n))
}

fn assert_report(r: &Report) -> Result<(), TestCaseError> {
    let failures: Vec<_> = r.failures().collect();
    prop_assert!(failures.is_empty(), "{:?}", failures);
    Ok(())
}

fn chern_classes(base: &SpaceModel, r: usize, coeffs: &[(i64, i64)]) -> Vec<Element> {
    let shift = base.mode().blowup_shift();
    let mut it = coeffs.iter().cycle();
    (1..=r)
        .map(|k| {
            let mut c = Element::zero();
            for &i in base.space().component(shift.times(k as i32)) {
                let &(n, d) = it.next().unwrap();
                c.add_term(i, frac(n, d));
            }
            c
        })
        .collect()
}

fn totals(m: &SpaceModel, flavor: &str) -> BTreeMap<i32, usize> {
    m.flavor_space(flavor)
        .unwrap()
        .total_dims()
        .into_iter()
        .filter(|&(_, n)| n > 0)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cup_is_graded_commutative(x in any_model(), y in any_model()) {
        prop_assume!(x.mode() == y.mode());
        let p = spaces::product(&x, &y).unwrap();
        let s = p.space();
        for a in 0..s.dim() {
            for b in 0..s.dim() {
                let (ea, eb) = (Element::basis(a), Element::basis(b));
                let sign = koszul_sign(s.degree(a), s.degree(b));
                prop_assert_eq!(p.ring().cup(&ea, &eb), p.ring().cup(&eb, &ea).scale_i64(sign));
            }
        }
    }

    #[test]
    fn constructed_rings_satisfy_the_axioms(x in any_model(), y in any_model()) {
        prop_assume!(x.mode() == y.mode());
        prop_assert!(x.check_axioms().is_ok());
        let p = spaces::product(&x, &y).unwrap();
        prop_assert!(p.check_axioms().is_ok(), "{:?}", p.check_axioms());
    }

    #[test]
    fn kunneth_dimension_law(x in any_model(), y in any_model()) {
        prop_assume!(x.mode() == y.mode());
        let p = spaces::product(&x, &y).unwrap();
        for flavor in p.flavor_names() {
            let mut expected: BTreeMap<i32, usize> = BTreeMap::new();
            for (a, na) in totals(&x, &flavor) {
                for (b, nb) in totals(&y, &flavor) {
                    *expected.entry(a + b).or_insert(0) += na * nb;
                }
            }
            prop_assert_eq!(totals(&p, &flavor), expected);
        }
    }

    #[test]
    fn bundles_satisfy_leray_hirsch_and_the_inverse_pair(
        base in compact_model(),
        r in 1usize..=4,
        coeffs in proptest::collection::vec((-4i64..=4, 1i64..=3), 1..8),
    ) {
        let chern = chern_classes(&base, r, &coeffs);
        let b = projective_bundle(&base, &chern, r).unwrap();
        let shift = base.mode().blowup_shift();
        for flavor in base.flavor_names() {
            let bs = base.flavor_space(&flavor).unwrap();
            let ts = b.total.flavor_space(&flavor).unwrap();
            for d in ts.degrees().chain(bs.degrees()) {
                let expected: usize = (0..r as i32).map(|i| bs.dim_at(d - shift.times(i))).sum();
                prop_assert_eq!(ts.dim_at(d), expected);
            }
        }
        assert_report(&verify_bundle(&b).unwrap())?;
    }

    /// A point in `P^n` or in `P^a x P^b`; any line in `P^3` with any
    /// first Chern class of the normal bundle.
    #[test]
    fn blowups_are_consistent(which in 0u8..3, n in 2usize..=4, c1 in -3i64..=3, m in mode()) {
        let datum = match which {
            0 => catalog::point_in_projective_space(n, m),
            1 => catalog::line_in_p3(c1, m),
            _ => catalog::point_in_p1xp1(m),
        };
        let res = blow_up(datum).unwrap();
        assert_report(&verify_inverse_pair(&res))?;
        assert_report(&dimension_identity_check(&res))?;
        assert_report(&verify_blowup(&res).unwrap())?;
    }

    /// A curve in `C x P^2` with normal bundle `c_1 = k w`: the datum stays
    /// valid for every `k`, and the blow-up ring must stay associative.
    #[test]
    fn curve_blowups_with_twisted_normal_bundle(g in 0usize..=2, k in -3i64..=3, m in mode()) {
        let mut datum = catalog::curve_in_curve_times_p2(g, m);
        let w = datum.center.space().element("w");
        datum.normal_chern[0] = w.scale_i64(k);
        let res = blow_up(datum).unwrap();
        assert_report(&verify_blowup(&res).unwrap())?;
    }

    #[test]
    fn direct_sums_add_all_four_cohomologies(a in 0u64..500, b in 0u64..500) {
        let (x, y) = (generate::random_complex(a), generate::random_complex(b));
        let s = x.direct_sum(&y);
        let add = |p: BTreeMap<(i32, i32), usize>, q: BTreeMap<(i32, i32), usize>| {
            let mut out = p;
            for (k, n) in q {
                *out.entry(k).or_insert(0) += n;
            }
            out
        };
        prop_assert_eq!(s.row_cohomology(), add(x.row_cohomology(), y.row_cohomology()));
        prop_assert_eq!(s.column_cohomology(), add(x.column_cohomology(), y.column_cohomology()));
        prop_assert_eq!(s.bott_chern(), add(x.bott_chern(), y.bott_chern()));
        prop_assert_eq!(s.aeppli(), add(x.aeppli(), y.aeppli()));
    }

    #[test]
    fn dots_have_every_cohomology_equal_to_their_components(
        dims in proptest::collection::btree_map((-2i32..3, -2i32..3), 1usize..3, 0..6),
    ) {
        let k = FiniteDoubleComplex::dots(dims.clone());
        prop_assert_eq!(&k.row_cohomology(), &dims);
        prop_assert_eq!(&k.column_cohomology(), &dims);
        prop_assert_eq!(&k.bott_chern(), &dims);
        prop_assert_eq!(&k.aeppli(), &dims);
    }

    /// Truncating to all columns changes nothing; the truncated total
    /// cohomology of a dot complex counts the components in the window.
    #[test]
    fn truncation_of_dots(
        dims in proptest::collection::btree_map((0i32..4, 0i32..4), 1usize..3, 0..6),
        s in 0i32..4,
        t in 0i32..4,
    ) {
        let k = FiniteDoubleComplex::dots(dims.clone());
        prop_assert_eq!(k.truncate_columns(0, 3).total_cohomology(), k.total_cohomology());
        let mut expected: BTreeMap<i32, usize> = BTreeMap::new();
        for (&(p, q), &n) in &dims {
            if s <= p && p <= t {
                *expected.entry(p + q).or_insert(0) += n;
            }
        }
        prop_assert_eq!(k.truncate_columns(s, t).total_cohomology(), expected);
    }

    #[test]
    fn e1_isomorphisms_preserve_bott_chern_and_aeppli(seed in 1000u64..5000) {
        let f = generate::random_e1_isomorphism(seed).unwrap();
        prop_assert!(f.is_e1_isomorphism());
        prop_assert_eq!(f.source().bott_chern(), f.target().bott_chern());
        prop_assert_eq!(f.source().aeppli(), f.target().aeppli());
        assert_report(&hodgecalc::double_complex::stelzig_check(&f).unwrap())?;
    }
}
