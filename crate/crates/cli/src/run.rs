//! Executes a script: builds every named object in dependency order, then
//! answers the queries.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use hodgecalc::blowup::{blow_up, truncated_hypercohomology_dims, verify_blowup, BlowupDatum, BlowupResult};
use hodgecalc::bundle::{projective_bundle, verify_bundle, ProjectiveBundle};
use hodgecalc::double_complex::{BidegreeTable, DoubleComplexMorphism, FiniteDoubleComplex};
use hodgecalc::graded::{BigradedVectorSpace, Degree, Element, GradedLinearMap, GradingMode};
use hodgecalc::gysin::{compute_family, kronecker_check, weighted_degree_check};
use hodgecalc::linalg::{parse_rational, Rational, SparseMatrix};
use hodgecalc::report::{Check, Report};
use hodgecalc::spaces::{self, SpaceModel};
use serde::Serialize;
use serde_json::{json, Value};

use crate::script::{build_order, BlockSpec, ComponentSpec, ElementSpec, InputError, MapSpec, Num, Op, Query, Script};

pub const REPORT_VERSION: u32 = 1;

pub enum Entity {
    Space(SpaceModel),
    Bundle(Box<ProjectiveBundle>),
    Blowup(Box<BlowupResult>),
    Complex(FiniteDoubleComplex),
}

impl Entity {
    /// The cohomology model carried by the entity; complexes have none.
    pub fn model(&self) -> Option<&SpaceModel> {
        match self {
            Entity::Space(m) => Some(m),
            Entity::Bundle(b) => Some(&b.total),
            Entity::Blowup(b) => Some(&b.total),
            Entity::Complex(_) => None,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Entity::Space(_) => "space",
            Entity::Bundle(_) => "projective bundle",
            Entity::Blowup(_) => "blow-up",
            Entity::Complex(_) => "double complex",
        }
    }
}

struct Built {
    entity: Entity,
    /// Factors of a product, for the Künneth check.
    factors: Option<(String, String)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct QueryResult {
    pub kind: String,
    pub target: String,
    pub passed: bool,
    pub data: Value,
    pub checks: Vec<Check>,
    /// Microseconds, as an integer string. The only nondeterministic field.
    pub elapsed_us: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub version: u32,
    pub passed: bool,
    pub results: Vec<QueryResult>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Degree keys: `(p,q)` in Dolbeault mode, `k` in de Rham mode.
pub fn degree_key(mode: GradingMode, d: Degree) -> String {
    match mode {
        GradingMode::Dolbeault => format!("({},{})", d.p, d.q),
        GradingMode::DeRham => d.p.to_string(),
    }
}

fn bidegree_table(t: &BidegreeTable) -> Value {
    Value::Object(
        t.iter()
            .map(|(&(p, q), n)| (format!("({p},{q})"), json!(n.to_string())))
            .collect(),
    )
}

fn int_table(t: &BTreeMap<i32, usize>) -> Value {
    Value::Object(t.iter().map(|(k, n)| (k.to_string(), json!(n.to_string()))).collect())
}

fn num(path: &str, x: &Num) -> Result<Rational, InputError> {
    match x {
        Num::Int(n) => Ok(Rational::from_integer((*n).into())),
        Num::Str(s) => parse_rational(s).map_err(|e| InputError::at(path, e)),
    }
}

fn element(path: &str, space: &BigradedVectorSpace, spec: &ElementSpec) -> Result<Element, InputError> {
    let mut e = Element::zero();
    for (label, x) in spec {
        let i = space
            .index_of(label)
            .ok_or_else(|| InputError::at(path, format!("unknown basis label {label:?} in {}", basis_list(space))))?;
        e.add_term(i, num(&format!("{path}.{label}"), x)?);
    }
    Ok(e)
}

fn basis_list(space: &BigradedVectorSpace) -> String {
    let labels: Vec<&str> = (0..space.dim()).map(|i| space.label(i)).collect();
    format!("[{}]", labels.join(", "))
}

fn linear_map(
    path: &str,
    source: &Arc<BigradedVectorSpace>,
    target: &Arc<BigradedVectorSpace>,
    shift: Degree,
    spec: &MapSpec,
) -> Result<GradedLinearMap, InputError> {
    let mut images = vec![Element::zero(); source.dim()];
    for (label, image) in spec {
        let i = source.index_of(label).ok_or_else(|| {
            InputError::at(
                path,
                format!("unknown source label {label:?} in {}", basis_list(source)),
            )
        })?;
        images[i] = element(&format!("{path}.{label}"), target, image)?;
    }
    GradedLinearMap::from_fn(source.clone(), target.clone(), shift, |i| Ok(images[i].clone()))
        .map_err(|e| InputError::at(path, e))
}

fn complex(
    path: &str,
    components: &[ComponentSpec],
    d1: &[BlockSpec],
    d2: &[BlockSpec],
) -> Result<FiniteDoubleComplex, InputError> {
    let mut dims = BTreeMap::new();
    for (i, c) in components.iter().enumerate() {
        if dims.insert((c.p, c.q), c.dim).is_some() {
            return Err(InputError::at(
                format!("{path}.components[{i}]"),
                format!("duplicate component ({},{})", c.p, c.q),
            ));
        }
    }
    let blocks =
        |name: &str, specs: &[BlockSpec], step: (i32, i32)| -> Result<BTreeMap<(i32, i32), SparseMatrix>, InputError> {
            let mut out = BTreeMap::new();
            for (i, b) in specs.iter().enumerate() {
                let at = format!("{path}.{name}[{i}]");
                let rows = dims.get(&(b.p + step.0, b.q + step.1)).copied().unwrap_or(0);
                let cols = dims.get(&(b.p, b.q)).copied().unwrap_or(0);
                if b.matrix.len() != rows || b.matrix.iter().any(|r| r.len() != cols) {
                    return Err(InputError::at(&at, format!("matrix must be {rows}x{cols} (row-major)")));
                }
                let mut m = SparseMatrix::zeros(rows, cols);
                for (r, row) in b.matrix.iter().enumerate() {
                    for (c, x) in row.iter().enumerate() {
                        m.set(r, c, num(&format!("{at}.matrix[{r}][{c}]"), x)?);
                    }
                }
                if out.insert((b.p, b.q), m).is_some() {
                    return Err(InputError::at(&at, format!("duplicate block ({},{})", b.p, b.q)));
                }
            }
            Ok(out)
        };
    let d1 = blocks("d1", d1, (1, 0))?;
    let d2 = blocks("d2", d2, (0, 1))?;
    FiniteDoubleComplex::new(dims, d1, d2).map_err(|e| InputError::at(path, e))
}

/// Parses a standalone double-complex document.
pub fn parse_complex(source: &str, text: &str) -> Result<FiniteDoubleComplex, InputError> {
    let spec: crate::script::ComplexSpec = crate::script::parse_json(source, text)?;
    if let Some(v) = spec.version {
        if v != crate::script::SCRIPT_VERSION {
            return Err(InputError::at(
                format!("{source} at version"),
                format!("unsupported version {v}"),
            ));
        }
    }
    complex(source, &spec.components, &spec.d1, &spec.d2)
}

fn build(name: &str, op: &Op, default_mode: GradingMode, built: &BTreeMap<String, Built>) -> Result<Built, InputError> {
    let path = format!("spaces.{name}");
    let err = |e: hodgecalc::Error| InputError::at(&path, e);
    let model = |field: &str, r: &str| -> Result<&SpaceModel, InputError> {
        let b = &built[r];
        b.entity.model().ok_or_else(|| {
            InputError::at(
                format!("{path}.{field}"),
                format!("{r:?} is a {}, not a space", b.entity.kind()),
            )
        })
    };
    let space = |m: SpaceModel| Built {
        entity: Entity::Space(m.renamed(name)),
        factors: None,
    };
    Ok(match op {
        Op::Point { mode } => space(spaces::point(mode.unwrap_or(default_mode))),
        Op::ProjectiveSpace { n, mode } => space(spaces::projective_space(*n, mode.unwrap_or(default_mode))),
        Op::AffineSpace { n, mode } => space(spaces::affine_space(*n, mode.unwrap_or(default_mode)).map_err(err)?),
        Op::Curve { genus, mode } => space(spaces::curve_in(*genus, mode.unwrap_or(default_mode))),
        Op::Product { left, right } => Built {
            entity: Entity::Space(
                spaces::product(model("left", left)?, model("right", right)?)
                    .map_err(err)?
                    .renamed(name),
            ),
            factors: Some((left.clone(), right.clone())),
        },
        Op::Twist { base, name: flavor } => {
            space(spaces::with_trivial_twist(model("base", base)?, flavor).map_err(err)?)
        }
        Op::ProjectiveBundle { base, rank, chern } => {
            let b = model("base", base)?;
            let chern = chern
                .iter()
                .enumerate()
                .map(|(i, c)| element(&format!("{path}.chern[{i}]"), b.space(), c))
                .collect::<Result<Vec<_>, _>>()?;
            let mut bundle = projective_bundle(b, &chern, *rank).map_err(err)?;
            bundle.total = bundle.total.renamed(name);
            Built {
                entity: Entity::Bundle(Box::new(bundle)),
                factors: None,
            }
        }
        Op::BlowUp {
            ambient,
            center,
            codim,
            normal_chern,
            restriction,
            gysin,
            flavors,
        } => {
            let (x, y) = (model("ambient", ambient)?.clone(), model("center", center)?.clone());
            if x.mode() != y.mode() {
                return Err(InputError::at(&path, "ambient and center use different grading modes"));
            }
            let shift = x.mode().blowup_shift().times(*codim as i32);
            let chern = normal_chern
                .iter()
                .enumerate()
                .map(|(i, c)| element(&format!("{path}.normal_chern[{i}]"), y.space(), c))
                .collect::<Result<Vec<_>, _>>()?;
            let res = linear_map(
                &format!("{path}.restriction"),
                x.space(),
                y.space(),
                Degree::ZERO,
                restriction,
            )?;
            let gys = linear_map(&format!("{path}.gysin"), y.space(), x.space(), shift, gysin)?;
            let mut datum = BlowupDatum::new(x.clone(), y.clone(), *codim, chern, res, gys).map_err(err)?;
            for (flavor, maps) in flavors {
                let at = format!("{path}.flavors.{flavor}");
                let (xs, ys) = (
                    x.flavor_space(flavor).map_err(|e| InputError::at(&at, e))?,
                    y.flavor_space(flavor).map_err(|e| InputError::at(&at, e))?,
                );
                let r = linear_map(&format!("{at}.restriction"), xs, ys, Degree::ZERO, &maps.restriction)?;
                let g = linear_map(&format!("{at}.gysin"), ys, xs, shift, &maps.gysin)?;
                datum = datum.with_flavor_maps(flavor.clone(), r, g);
            }
            let mut result = blow_up(datum).map_err(err)?;
            result.total = result.total.renamed(name);
            Built {
                entity: Entity::Blowup(Box::new(result)),
                factors: None,
            }
        }
        Op::DoubleComplex { components, d1, d2 } => Built {
            entity: Entity::Complex(complex(&path, components, d1, d2)?),
            factors: None,
        },
    })
}

/// Builds every object of the script. Each object is built once, after its
/// dependencies.
fn build_all(script: &Script) -> Result<BTreeMap<String, Built>, InputError> {
    let mode = script.mode.unwrap_or(GradingMode::Dolbeault);
    let mut built = BTreeMap::new();
    for name in build_order(script)? {
        let b = build(&name, &script.spaces[&name], mode, &built)?;
        built.insert(name, b);
    }
    Ok(built)
}

/// Runs a parsed script. `Err` is an input problem (exit 2); a report with
/// `passed == false` is a verification failure (exit 1).
pub fn run_script(script: &Script) -> Result<RunReport, InputError> {
    let built = build_all(script)?;
    let mut results = Vec::with_capacity(script.queries.len());
    for (i, q) in script.queries.iter().enumerate() {
        let start = Instant::now();
        let (data, checks) =
            answer(q, &built).map_err(|e| InputError::at(format!("queries[{i}] ({})", q.kind()), e))?;
        let elapsed = start.elapsed().as_micros();
        results.push(QueryResult {
            kind: q.kind().to_string(),
            target: q.target().unwrap_or("").to_string(),
            passed: checks.iter().all(|c| c.passed),
            data,
            checks,
            elapsed_us: elapsed.to_string(),
        });
    }
    Ok(RunReport {
        version: REPORT_VERSION,
        passed: results.iter().all(|r| r.passed),
        results,
    })
}

pub fn run_text(source: &str, text: &str) -> Result<RunReport, InputError> {
    run_script(&crate::script::parse_script(source, text)?)
}

fn space_of<'a>(built: &'a BTreeMap<String, Built>, name: &str) -> Result<&'a SpaceModel, String> {
    let e = &built[name].entity;
    e.model()
        .ok_or_else(|| format!("{name:?} is a {}, not a space", e.kind()))
}

type Answer = Result<(Value, Vec<Check>), String>;

fn answer(q: &Query, built: &BTreeMap<String, Built>) -> Answer {
    match q {
        Query::Diamond { space, flavor } => diamond(space_of(built, space)?, flavor),
        Query::Betti { space, flavor } => betti(space_of(built, space)?, flavor),
        Query::Ring { space } => ring(space_of(built, space)?),
        Query::Verify { target } => verify(target, built),
        Query::BcAeppli { target } => {
            let k = match &built[target].entity {
                Entity::Complex(k) => k.clone(),
                e => FiniteDoubleComplex::hodge_model(e.model().expect("non-complex entities have a model").space())
                    .map_err(|e| e.to_string())?,
            };
            Ok((bc_aeppli_data(&k), vec![]))
        }
        Query::Truncated { target, flavor, s, t } => {
            let Entity::Blowup(res) = &built[target].entity else {
                return Err(format!("{target:?} is not a blow-up"));
            };
            truncated(res, flavor, *s, *t)
        }
        Query::PolyCheck { max_r } => poly_check(*max_r),
    }
}

/// Hodge numbers of a Dolbeault-graded flavor as rows of constant total
/// degree, each row listed from `h^{n,0}` down to `h^{0,n}`.
pub fn diamond_rows(space: &BigradedVectorSpace) -> Vec<Vec<usize>> {
    let n = space.degrees().flat_map(|d| [d.p, d.q]).max().unwrap_or(0);
    (0..=2 * n)
        .map(|k| {
            (0..=n)
                .rev()
                .filter(|&p| k - p >= 0 && k - p <= n)
                .map(|p| space.dim_at(Degree { p, q: k - p }))
                .collect()
        })
        .collect()
}

pub fn diamond_text(rows: &[Vec<usize>]) -> String {
    rows.iter()
        .map(|r| r.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join(" / ")
}

fn diamond(m: &SpaceModel, flavor: &str) -> Answer {
    let space = m.flavor_space(flavor).map_err(|e| e.to_string())?;
    if space.mode() != GradingMode::Dolbeault {
        return Err(format!(
            "{} is de Rham graded; Hodge diamonds need Dolbeault grading (use betti)",
            m.name()
        ));
    }
    let rows = diamond_rows(space);
    let hodge: BTreeMap<String, Value> = space
        .dims()
        .into_iter()
        .map(|(d, n)| (degree_key(space.mode(), d), json!(n.to_string())))
        .collect();
    let data = json!({
        "flavor": flavor,
        "rows": rows.iter().map(|r| r.iter().map(|n| n.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "text": diamond_text(&rows),
        "hodge": hodge,
    });
    Ok((data, vec![]))
}

fn betti(m: &SpaceModel, flavor: &str) -> Answer {
    let space = m.flavor_space(flavor).map_err(|e| e.to_string())?;
    let totals = space.total_dims();
    let top = space.max_total_degree().max(0);
    let numbers: Vec<String> = (0..=top)
        .map(|k| totals.get(&k).copied().unwrap_or(0).to_string())
        .collect();
    Ok((json!({ "flavor": flavor, "betti": numbers }), vec![]))
}

fn ring(m: &SpaceModel) -> Answer {
    let space = m.space();
    let basis: Vec<Value> = (0..space.dim())
        .map(|i| json!({ "label": space.label(i), "degree": degree_key(space.mode(), space.degree(i)) }))
        .collect();
    let table = m.ring().product();
    let mut products = Vec::new();
    for a in 0..space.dim() {
        for b in a..space.dim() {
            let c = table.get(a, b);
            if !c.is_zero() {
                products.push(json!({ "left": space.label(a), "right": space.label(b), "product": space.format(c) }));
            }
        }
    }
    let data = json!({
        "name": m.name(),
        "mode": space.mode().name(),
        "unit": space.label(m.ring().unit_index()),
        "flavors": m.flavor_names(),
        "basis": basis,
        "products": products,
    });
    let check = Check::from_result("ring and module axioms", m.check_axioms());
    Ok((data, vec![check]))
}

fn kunneth(m: &SpaceModel, x: &SpaceModel, y: &SpaceModel) -> Check {
    let (tx, ty, tm) = (x.space().total_dims(), y.space().total_dims(), m.space().total_dims());
    let mut expected: BTreeMap<i32, usize> = BTreeMap::new();
    for (a, na) in &tx {
        for (b, nb) in &ty {
            *expected.entry(a + b).or_insert(0) += na * nb;
        }
    }
    expected.retain(|_, n| *n > 0);
    if expected == tm {
        Check::pass("kunneth dimensions")
    } else {
        Check::fail("kunneth dimensions", format!("{tm:?} vs {expected:?}"))
    }
}

/// Bott-Chern plus Aeppli dimension is at least twice the total cohomology
/// in every total degree, for any bounded double complex.
pub fn bc_aeppli_inequality(k: &FiniteDoubleComplex) -> Check {
    let sum = |t: BidegreeTable| {
        let mut out: BTreeMap<i32, usize> = BTreeMap::new();
        for ((p, q), n) in t {
            *out.entry(p + q).or_insert(0) += n;
        }
        out
    };
    let (bc, a, h) = (sum(k.bott_chern()), sum(k.aeppli()), k.total_cohomology());
    let bad = h
        .iter()
        .find(|&(d, &n)| bc.get(d).copied().unwrap_or(0) + a.get(d).copied().unwrap_or(0) < 2 * n);
    match bad {
        None => Check::pass("h_BC + h_A >= 2 b in every total degree"),
        Some((d, n)) => Check::fail(
            "h_BC + h_A >= 2 b in every total degree",
            format!("fails in degree {d} (b = {n})"),
        ),
    }
}

fn verify(target: &str, built: &BTreeMap<String, Built>) -> Answer {
    let b = &built[target];
    let mut report = Report::default();
    let data = match &b.entity {
        Entity::Space(m) => {
            report.push(Check::from_result("ring and module axioms", m.check_axioms()));
            if let Some((l, r)) = &b.factors {
                report.push(kunneth(m, space_of(built, l)?, space_of(built, r)?));
            }
            json!({ "name": m.name() })
        }
        Entity::Bundle(bundle) => {
            report.extend(verify_bundle(bundle).map_err(|e| e.to_string())?);
            json!({ "name": bundle.total.name(), "rank": bundle.rank().to_string() })
        }
        Entity::Blowup(res) => {
            report.extend(verify_blowup(res).map_err(|e| e.to_string())?);
            json!({
                "name": res.total.name(),
                "codim": res.datum.codim.to_string(),
                "flavors": res.maps.keys().collect::<Vec<_>>(),
            })
        }
        Entity::Complex(k) => {
            report.push(bc_aeppli_inequality(k));
            // Adding a square changes no E_1 data, so the inclusion must pass.
            let (p, q) = k.dims().keys().next().copied().unwrap_or((0, 0));
            let inc = DoubleComplexMorphism::inclusion(k, &FiniteDoubleComplex::square(p, q));
            match hodgecalc::double_complex::stelzig_check(&inc) {
                Ok(r) => report.extend(r),
                Err(e) => report.push(Check::fail(
                    "inclusion of K into K + square is an E1-isomorphism",
                    e.to_string(),
                )),
            }
            json!({ "total_dim": k.total_dim().to_string() })
        }
    };
    Ok((data, report.checks))
}

pub fn bc_aeppli_data(k: &FiniteDoubleComplex) -> Value {
    json!({
        "dims": bidegree_table(k.dims()),
        "row": bidegree_table(&k.row_cohomology()),
        "column": bidegree_table(&k.column_cohomology()),
        "bott_chern": bidegree_table(&k.bott_chern()),
        "aeppli": bidegree_table(&k.aeppli()),
        "total": int_table(&k.total_cohomology()),
    })
}

fn truncated(res: &BlowupResult, flavor: &str, s: Option<i32>, t: Option<i32>) -> Answer {
    let space = res.total.flavor_space(flavor).map_err(|e| e.to_string())?;
    let n = space.degrees().map(|d| d.p).max().unwrap_or(0);
    let windows: Vec<(i32, i32)> = match (s, t) {
        (Some(s), Some(t)) => vec![(s, t)],
        (Some(s), None) => (s..=n).map(|t| (s, t)).collect(),
        (None, Some(t)) => (0..=t).map(|s| (s, t)).collect(),
        (None, None) => (0..=n).flat_map(|s| (s..=n).map(move |t| (s, t))).collect(),
    };
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for (s, t) in windows {
        let w = truncated_hypercohomology_dims(res, flavor, s, t).map_err(|e| e.to_string())?;
        let name = format!("window [{s},{t}]");
        checks.push(if w.matches() {
            Check::pass(name)
        } else {
            Check::fail(name, format!("{:?} vs {:?}", w.blowup, w.expected))
        });
        rows.push(json!({
            "s": s.to_string(),
            "t": t.to_string(),
            "blowup": int_table(&w.blowup),
            "expected": int_table(&w.expected),
        }));
    }
    Ok((json!({ "flavor": flavor, "windows": rows }), checks))
}

/// One row per `r`: the Kronecker identity and the weighted-degree property.
pub fn poly_check(max_r: usize) -> Answer {
    if max_r == 0 {
        return Err("max_r must be at least 1".into());
    }
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for r in 1..=max_r {
        let fam = compute_family(r);
        let (k, w) = (kronecker_check(&fam), weighted_degree_check(&fam));
        for c in [&k, &w] {
            let name = format!("{} r={r}", c.check);
            checks.push(if c.passed {
                Check::pass(name)
            } else {
                Check::fail(name, c.failures.join("; "))
            });
        }
        rows.push(json!({ "r": r.to_string(), "kronecker": k.passed, "weighted_degree": w.passed }));
    }
    Ok((json!({ "rows": rows }), checks))
}
