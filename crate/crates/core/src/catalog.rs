//! Ready-made blow-up data for the standard examples.

use crate::blowup::{blow_up, BlowupDatum};
use crate::error::Result;
use crate::graded::{BigradedVectorSpace, Degree, Element, GradedLinearMap, GradingMode};
use crate::report::{Check, Report};
use crate::spaces::{
    affine_space, curve_in, point, product, projective_space, with_trivial_twist, SpaceModel, CLOSED, COMPACT,
};
use std::sync::Arc;

/// A linear map given by the image of each source label.
pub fn map_by_label(
    source: &Arc<BigradedVectorSpace>,
    target: &Arc<BigradedVectorSpace>,
    shift: Degree,
    mut image: impl FnMut(&str) -> Element,
) -> Result<GradedLinearMap> {
    GradedLinearMap::from_fn(source.clone(), target.clone(), shift, |i| Ok(image(source.label(i))))
}

fn zeros(n: usize) -> Vec<Element> {
    vec![Element::zero(); n]
}

/// A point in `P^n`: `i^*H = 0`, `i_*1 = H^n`, trivial normal bundle.
pub fn point_in_projective_space(n: usize, mode: GradingMode) -> BlowupDatum {
    let x = projective_space(n, mode);
    let y = point(mode);
    let s = mode.blowup_shift();
    let top = if n == 1 { "H".to_string() } else { format!("H^{n}") };
    let restriction = map_by_label(x.space(), y.space(), Degree::ZERO, |l| {
        if l == "1" {
            Element::basis(0)
        } else {
            Element::zero()
        }
    })
    .expect("degree-preserving");
    let gysin = map_by_label(y.space(), x.space(), s.times(n as i32), |_| x.space().element(&top)).expect("gysin");
    BlowupDatum::new(x, y, n, zeros(n), restriction, gysin).expect("same mode")
}

/// A line `P^1 ⊂ P^3` with `c_1(N) = c1 H_Y`, `c_2(N) = 0`. The geometric
/// normal bundle `O(1) + O(1)` has `c1 = 2`.
pub fn line_in_p3(c1: i64, mode: GradingMode) -> BlowupDatum {
    let x = projective_space(3, mode);
    let y = projective_space(1, mode);
    let s = mode.blowup_shift();
    let restriction = map_by_label(x.space(), y.space(), Degree::ZERO, |l| match l {
        "1" | "H" => y.space().element(l),
        _ => Element::zero(),
    })
    .expect("degree-preserving");
    let gysin = map_by_label(y.space(), x.space(), s.times(2), |l| {
        x.space().element(if l == "1" { "H^2" } else { "H^3" })
    })
    .expect("gysin");
    let chern = vec![y.space().element("H").scale_i64(c1), Element::zero()];
    BlowupDatum::new(x, y, 2, chern, restriction, gysin).expect("same mode")
}

/// A point in `P^1 x P^1`.
pub fn point_in_p1xp1(mode: GradingMode) -> BlowupDatum {
    let p1 = projective_space(1, mode);
    let x = product(&p1, &p1).expect("same mode");
    let y = point(mode);
    let restriction = map_by_label(x.space(), y.space(), Degree::ZERO, |l| {
        if l == "1×1" {
            Element::basis(0)
        } else {
            Element::zero()
        }
    })
    .expect("degree-preserving");
    let gysin = map_by_label(y.space(), x.space(), mode.blowup_shift().times(2), |_| {
        x.space().element("H×H")
    })
    .expect("gysin");
    BlowupDatum::new(x, y, 2, zeros(2), restriction, gysin).expect("same mode")
}

/// `C ⊂ C x P^2` as `C x {pt}`, for a genus-`g` curve `C`: `i^*(x × 1) = x`,
/// `i_*(y) = y × H^2`, trivial normal bundle.
pub fn curve_in_curve_times_p2(g: usize, mode: GradingMode) -> BlowupDatum {
    let c = curve_in(g, mode);
    let x = product(&c, &projective_space(2, mode)).expect("same mode");
    let restriction = map_by_label(x.space(), c.space(), Degree::ZERO, |l| match l.strip_suffix("×1") {
        Some(base) => c.space().element(base),
        None => Element::zero(),
    })
    .expect("degree-preserving");
    let gysin = map_by_label(c.space(), x.space(), mode.blowup_shift().times(2), |l| {
        x.space().element(&format!("{l}×H^2"))
    })
    .expect("gysin");
    BlowupDatum::new(x, c, 2, zeros(2), restriction, gysin).expect("same mode")
}

/// The origin in `C^n` with closed and compact flavors. Closed: `i_* = 0`
/// (nothing in degree `n`); compact: `i^* = 0`, `i_*1 = u`.
pub fn origin_in_affine_space(n: usize, mode: GradingMode) -> BlowupDatum {
    let x = affine_space(n.max(1), mode).expect("n >= 1");
    let y = point(mode);
    let shift = mode.blowup_shift().times(n as i32);
    let restriction = map_by_label(x.space(), y.space(), Degree::ZERO, |_| Element::basis(0)).expect("restriction");
    let gysin = GradedLinearMap::zero(y.space().clone(), x.space().clone(), shift);
    let xc = x.flavor_space(COMPACT).expect("compact").clone();
    let yc = y.flavor_space(COMPACT).expect("compact").clone();
    let rc = GradedLinearMap::zero(xc.clone(), yc.clone(), Degree::ZERO);
    let gc = map_by_label(&yc, &xc, shift, |_| Element::basis(0)).expect("compact gysin");
    BlowupDatum::new(x, y, n, zeros(n), restriction, gysin)
        .expect("same mode")
        .with_flavor_maps(COMPACT, rc, gc)
}

/// Adds a rank-one trivial local system `name` to both spaces, with the closed maps.
pub fn with_twist(datum: &BlowupDatum, name: &str) -> Result<BlowupDatum> {
    let mut out = datum.clone();
    out.ambient = with_trivial_twist(&datum.ambient, name)?;
    out.center = with_trivial_twist(&datum.center, name)?;
    out.maps.insert(name.to_string(), datum.maps[CLOSED].clone());
    Ok(out)
}

/// Blows up `datum` with and without a trivial twist `name` and compares:
/// the twisted flavor must reproduce the closed dimensions, labels and every
/// map matrix of the untwisted blow-up, and adding the twist must not change
/// the closed flavor. The same comparison runs for the exceptional divisor's
/// bundle maps.
pub fn twist_regression_check(datum: &BlowupDatum, name: &str) -> Result<Report> {
    let plain = blow_up(datum.clone())?;
    let twisted = blow_up(with_twist(datum, name)?)?;
    let mut report = Report::default();
    let base = &plain.maps[CLOSED];
    for (flavor, maps) in [(name, twisted.flavor_maps(name)?), (CLOSED, &twisted.maps[CLOSED])] {
        let pairs = [
            ("pi^*", &maps.pi_pullback, &base.pi_pullback),
            ("pi_*", &maps.pi_pushforward, &base.pi_pushforward),
            ("i_E^*", &maps.ie_pullback, &base.ie_pullback),
            ("i_E*", &maps.ie_pushforward, &base.ie_pushforward),
            ("psi", &maps.psi, &base.psi),
            ("phi", &maps.phi, &base.phi),
        ];
        for (map, a, b) in pairs {
            report.push(Check::from_result(
                format!("{map} [{flavor}] matches untwisted"),
                if a.matrix() == b.matrix() && a.shift() == b.shift() {
                    Ok(())
                } else {
                    Err("matrices differ".into())
                },
            ));
        }
    }
    let (ts, ps) = (twisted.total.flavor_space(name)?, plain.total.space());
    let labels = |s: &BigradedVectorSpace| {
        (0..s.dim())
            .map(|i| (s.label(i).to_string(), s.degree(i)))
            .collect::<Vec<_>>()
    };
    report.push(Check::from_result(
        format!("[{name}] basis matches untwisted"),
        if labels(ts) == labels(ps) {
            Ok(())
        } else {
            Err(format!("{:?} vs {:?}", ts.dims(), ps.dims()))
        },
    ));
    let (tb, pb) = (&twisted.exceptional, &plain.exceptional);
    for (map, a, b) in [
        ("bundle pullback", tb.pullback(name)?, pb.pullback(CLOSED)?),
        ("bundle pushforward", tb.pushforward(name)?, pb.pushforward(CLOSED)?),
    ] {
        report.push(Check::from_result(
            format!("{map} [{name}] matches untwisted"),
            if a.matrix() == b.matrix() {
                Ok(())
            } else {
                Err("matrices differ".into())
            },
        ));
    }
    Ok(report)
}

/// Renames a model, for scripts that name their spaces.
pub fn named(model: SpaceModel, name: &str) -> SpaceModel {
    model.renamed(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_example_is_a_valid_datum() {
        for mode in [GradingMode::Dolbeault, GradingMode::DeRham] {
            for d in [
                point_in_projective_space(2, mode),
                point_in_projective_space(3, mode),
                line_in_p3(2, mode),
                point_in_p1xp1(mode),
                curve_in_curve_times_p2(1, mode),
                origin_in_affine_space(2, mode),
            ] {
                d.validate().unwrap();
            }
        }
    }

    #[test]
    fn twist_regression_on_examples() {
        for d in [
            point_in_projective_space(2, GradingMode::Dolbeault),
            line_in_p3(1, GradingMode::Dolbeault),
            curve_in_curve_times_p2(2, GradingMode::DeRham),
        ] {
            let r = twist_regression_check(&d, "L").unwrap();
            assert!(r.all_passed(), "{:?}", r.failures().collect::<Vec<_>>());
            assert_eq!(r.len(), 15);
        }
    }
}
