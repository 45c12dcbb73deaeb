//! The built-in acceptance suite: needs no files and exits 0 on a good build.

use std::time::Instant;

use hodgecalc::blowup::{blow_up, dimension_identity_check, truncated_hypercohomology_check, verify_blowup};
use hodgecalc::bundle::{projective_bundle, verify_bundle};
use hodgecalc::catalog;
use hodgecalc::double_complex::{generate, stelzig_check, FiniteDoubleComplex};
use hodgecalc::graded::{Element, GradingMode};
use hodgecalc::gysin::{compute_family, kronecker_check, weighted_degree_check};
use hodgecalc::linalg::{frac, rat, SparseMatrix};
use hodgecalc::report::Report;
use hodgecalc::spaces::{self, COMPACT};
use serde::Serialize;

use crate::run::{diamond_rows, diamond_text};

const DOL: GradingMode = GradingMode::Dolbeault;
const DR: GradingMode = GradingMode::DeRham;

#[derive(Debug, Clone, Serialize)]
pub struct SelftestEntry {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub elapsed_us: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub passed: bool,
    pub checks: Vec<SelftestEntry>,
}

type Outcome = Result<(), String>;
type CheckFn = fn() -> Outcome;

fn all(r: hodgecalc::Result<Report>) -> Outcome {
    let r = r.map_err(|e| e.to_string())?;
    let first = r
        .failures()
        .next()
        .map(|c| format!("{}: {}", c.name, c.detail.clone().unwrap_or_default()));
    first.map_or(Ok(()), Err)
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, found: T, expected: T) -> Outcome {
    if found == expected {
        Ok(())
    } else {
        Err(format!("{what}: found {found:?}, expected {expected:?}"))
    }
}

fn exact_linear_algebra() -> Outcome {
    // Determinant 2: rank 3 over Q, rank 2 mod 2.
    let m = SparseMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
    expect("rank", m.rank(), 3)?;
    let half = SparseMatrix::from_dense(&[vec![frac(1, 2), frac(1, 3)], vec![frac(3, 2), rat(1)]]);
    expect("rank of a singular rational matrix", half.rank(), 1)
}

fn gysin_polynomials() -> Outcome {
    for r in 1..=8 {
        let fam = compute_family(r);
        for c in [kronecker_check(&fam), weighted_degree_check(&fam)] {
            if !c.passed {
                return Err(format!("{} r={r}: {}", c.check, c.failures.join("; ")));
            }
        }
    }
    Ok(())
}

fn ring_axioms() -> Outcome {
    let x = spaces::product(&spaces::projective_space(2, DOL), &spaces::curve_in(2, DOL)).map_err(|e| e.to_string())?;
    x.check_axioms()?;
    spaces::affine_space(3, DR).map_err(|e| e.to_string())?.check_axioms()
}

fn bundle_inverse_pair() -> Outcome {
    let base = spaces::projective_space(2, DOL);
    let h = base.space().element("H");
    let h2 = base.space().element("H^2");
    let chern = vec![h.scale(&frac(3, 2)), h2.scale(&rat(-2)), Element::zero()];
    all(projective_bundle(&base, &chern, 3).and_then(|b| verify_bundle(&b)))
}

fn blowup_point_in_p2() -> Outcome {
    let res = blow_up(catalog::point_in_projective_space(2, DOL)).map_err(|e| e.to_string())?;
    expect(
        "diamond",
        diamond_text(&diamond_rows(res.total.space())).as_str(),
        "1 / 0 0 / 0 2 0 / 0 0 / 1",
    )?;
    let (h, e) = (res.total.space().element("H"), res.e_class(1, "1"));
    let ring = res.total.ring();
    expect("e^2", ring.cup(&e, &e), -res.total.space().element("H^2"))?;
    expect("H e", ring.cup(&h, &e), Element::zero())?;
    all(verify_blowup(&res))
}

fn blowup_point_in_p3() -> Outcome {
    let res = blow_up(catalog::point_in_projective_space(3, DOL)).map_err(|e| e.to_string())?;
    let e = res.e_class(1, "1");
    expect("e^3", res.total.ring().pow(&e, 3), res.total.space().element("H^3"))?;
    all(verify_blowup(&res))
}

fn blowup_line_in_p3() -> Outcome {
    for c1 in [1, 2] {
        all(blow_up(catalog::line_in_p3(c1, DOL)).and_then(|r| verify_blowup(&r)))?;
    }
    Ok(())
}

fn blowup_point_in_quadric() -> Outcome {
    let res = blow_up(catalog::point_in_p1xp1(DOL)).map_err(|e| e.to_string())?;
    let t = res.total.space().total_dims();
    expect("betti", t.values().copied().collect::<Vec<_>>(), vec![1, 3, 1])?;
    all(verify_blowup(&res))
}

fn blowup_curve_center() -> Outcome {
    for mode in [DOL, DR] {
        all(blow_up(catalog::curve_in_curve_times_p2(1, mode)).and_then(|r| verify_blowup(&r)))?;
    }
    Ok(())
}

fn compact_support_flavor() -> Outcome {
    let res = blow_up(catalog::origin_in_affine_space(2, DOL)).map_err(|e| e.to_string())?;
    let dims = |f| {
        res.total
            .flavor_space(f)
            .map(|s| s.dims().into_iter().map(|(d, n)| ((d.p, d.q), n)).collect::<Vec<_>>())
            .map_err(|e| e.to_string())
    };
    expect("compact", dims(COMPACT)?, vec![((1, 1), 1), ((2, 2), 1)])?;
    expect(
        "closed",
        dims(hodgecalc::spaces::CLOSED)?,
        vec![((0, 0), 1), ((1, 1), 1)],
    )?;
    all(verify_blowup(&res))
}

fn dimension_identity() -> Outcome {
    for d in [
        catalog::point_in_projective_space(2, DR),
        catalog::line_in_p3(2, DR),
        catalog::origin_in_affine_space(3, DR),
        catalog::curve_in_curve_times_p2(2, DR),
    ] {
        all(blow_up(d).map(|r| dimension_identity_check(&r)))?;
    }
    Ok(())
}

fn truncated_hypercohomology() -> Outcome {
    for d in [catalog::point_in_projective_space(3, DOL), catalog::line_in_p3(2, DOL)] {
        all(blow_up(d).and_then(|r| truncated_hypercohomology_check(&r)))?;
    }
    Ok(())
}

fn twist_regression() -> Outcome {
    all(catalog::twist_regression_check(&catalog::line_in_p3(2, DOL), "L"))
}

fn kunneth() -> Outcome {
    let models = [
        spaces::projective_space(2, DR),
        spaces::curve_in(2, DR),
        spaces::projective_space(1, DR),
    ];
    for x in &models {
        for y in &models {
            let p = spaces::product(x, y).map_err(|e| e.to_string())?;
            for k in 0..=p.space().max_total_degree() {
                let lhs = p.space().total_dims().get(&k).copied().unwrap_or(0);
                let rhs: usize = (0..=k)
                    .map(|a| {
                        x.space().total_dims().get(&a).copied().unwrap_or(0)
                            * y.space().total_dims().get(&(k - a)).copied().unwrap_or(0)
                    })
                    .sum();
                expect(&format!("{} x {} degree {k}", x.name(), y.name()), lhs, rhs)?;
            }
        }
    }
    Ok(())
}

fn squares_are_acyclic() -> Outcome {
    let sq = FiniteDoubleComplex::square(0, 0);
    for (name, t) in [
        ("row", sq.row_cohomology()),
        ("column", sq.column_cohomology()),
        ("bott-chern", sq.bott_chern()),
        ("aeppli", sq.aeppli()),
    ] {
        expect(name, t.len(), 0)?;
    }
    Ok(())
}

fn random_e1_isomorphisms() -> Outcome {
    for seed in 0..10 {
        let f = generate::random_e1_isomorphism(seed).map_err(|e| format!("seed {seed}: {e}"))?;
        all(stelzig_check(&f)).map_err(|e| format!("seed {seed}: {e}"))?;
    }
    Ok(())
}

fn script_round_trip() -> Outcome {
    let report = crate::run_text("selftest", EXAMPLE_SCRIPT).map_err(|e| e.to_string())?;
    expect("passed", report.passed, true)?;
    expect(
        "diamond",
        report.results[0].data["text"].as_str(),
        Some("1 / 0 0 / 0 2 0 / 0 0 / 1"),
    )
}

/// Blow-up of a point in the projective plane.
pub const EXAMPLE_SCRIPT: &str = r#"{
  "version": 1,
  "spaces": {
    "P2": {"op": "projective_space", "n": 2},
    "pt": {"op": "point"},
    "X": {
      "op": "blow_up", "ambient": "P2", "center": "pt", "codim": 2,
      "normal_chern": [{}, {}],
      "restriction": {"1": {"1": 1}},
      "gysin": {"1": {"H^2": 1}}
    }
  },
  "queries": [
    {"kind": "diamond", "space": "X"},
    {"kind": "verify", "target": "X"}
  ]
}"#;

pub const CHECKS: &[(&str, CheckFn)] = &[
    ("exact linear algebra", exact_linear_algebra),
    ("gysin polynomials r <= 8", gysin_polynomials),
    ("ring and module axioms", ring_axioms),
    ("projective bundle inverse pair", bundle_inverse_pair),
    ("blow-up of a point in P2", blowup_point_in_p2),
    ("blow-up of a point in P3", blowup_point_in_p3),
    ("blow-up of a line in P3", blowup_line_in_p3),
    ("blow-up of a point in P1 x P1", blowup_point_in_quadric),
    ("blow-up along a curve", blowup_curve_center),
    ("compact support flavor", compact_support_flavor),
    ("dimension identity", dimension_identity),
    ("truncated hypercohomology", truncated_hypercohomology),
    ("trivial twist regression", twist_regression),
    ("kunneth dimensions", kunneth),
    ("squares are acyclic", squares_are_acyclic),
    ("random E1-isomorphisms", random_e1_isomorphisms),
    ("script round trip", script_round_trip),
];

pub fn run() -> SelftestReport {
    let checks: Vec<SelftestEntry> = CHECKS
        .iter()
        .map(|&(name, f)| {
            let start = Instant::now();
            let outcome = f();
            SelftestEntry {
                name,
                passed: outcome.is_ok(),
                detail: outcome.err(),
                elapsed_us: start.elapsed().as_micros().to_string(),
            }
        })
        .collect();
    SelftestReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

pub fn text(report: &SelftestReport) -> String {
    let mut out = String::new();
    for c in &report.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("[{status}] {:<34} {:>10} us\n", c.name, c.elapsed_us));
        if let Some(d) = &c.detail {
            out.push_str(&format!("       {d}\n"));
        }
    }
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    out.push_str(&format!("{} checks, {} failed\n", report.checks.len(), failed));
    out
}
