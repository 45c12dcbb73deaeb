//! The construction script: a versioned JSON document naming spaces built
//! from constructor invocations, plus a list of queries against them.

use std::collections::BTreeMap;
use std::fmt;

use hodgecalc::graded::GradingMode;
use serde::Deserialize;

pub const SCRIPT_VERSION: u32 = 1;

/// Problems with the input itself: malformed JSON, unknown names, cycles,
/// inconsistent data. Always exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

impl InputError {
    pub fn at(path: impl fmt::Display, msg: impl fmt::Display) -> Self {
        InputError(format!("{path}: {msg}"))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Script {
    pub version: u32,
    /// Default grading mode for leaf constructors.
    #[serde(default)]
    pub mode: Option<GradingMode>,
    #[serde(default)]
    pub spaces: BTreeMap<String, Op>,
    #[serde(default)]
    pub queries: Vec<Query>,
}

/// A coefficient: a JSON integer or a string `"a"` / `"a/b"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Str(String),
}

/// A class as `{basis label: coefficient}`.
pub type ElementSpec = BTreeMap<String, Num>;

/// A linear map as `{source label: image}`; omitted labels map to zero.
pub type MapSpec = BTreeMap<String, ElementSpec>;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CenterMapsSpec {
    pub restriction: MapSpec,
    pub gysin: MapSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub p: i32,
    pub q: i32,
    pub dim: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    pub p: i32,
    pub q: i32,
    /// Row-major.
    pub matrix: Vec<Vec<Num>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    #[serde(default)]
    pub version: Option<u32>,
    pub components: Vec<ComponentSpec>,
    #[serde(default)]
    pub d1: Vec<BlockSpec>,
    #[serde(default)]
    pub d2: Vec<BlockSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Op {
    Point {
        #[serde(default)]
        mode: Option<GradingMode>,
    },
    ProjectiveSpace {
        n: usize,
        #[serde(default)]
        mode: Option<GradingMode>,
    },
    AffineSpace {
        n: usize,
        #[serde(default)]
        mode: Option<GradingMode>,
    },
    Curve {
        genus: usize,
        #[serde(default)]
        mode: Option<GradingMode>,
    },
    Product {
        left: String,
        right: String,
    },
    ProjectiveBundle {
        base: String,
        rank: usize,
        chern: Vec<ElementSpec>,
    },
    BlowUp {
        ambient: String,
        center: String,
        codim: usize,
        normal_chern: Vec<ElementSpec>,
        restriction: MapSpec,
        gysin: MapSpec,
        /// Maps for flavors other than the closed one.
        #[serde(default)]
        flavors: BTreeMap<String, CenterMapsSpec>,
    },
    Twist {
        base: String,
        name: String,
    },
    DoubleComplex {
        components: Vec<ComponentSpec>,
        #[serde(default)]
        d1: Vec<BlockSpec>,
        #[serde(default)]
        d2: Vec<BlockSpec>,
    },
}

impl Op {
    /// Names this constructor reads, with the field each comes from.
    pub fn references(&self) -> Vec<(&'static str, &str)> {
        match self {
            Op::Product { left, right } => vec![("left", left), ("right", right)],
            Op::ProjectiveBundle { base, .. } | Op::Twist { base, .. } => vec![("base", base)],
            Op::BlowUp { ambient, center, .. } => vec![("ambient", ambient), ("center", center)],
            _ => vec![],
        }
    }
}

fn closed() -> String {
    hodgecalc::spaces::CLOSED.to_string()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Query {
    Diamond {
        space: String,
        #[serde(default = "closed")]
        flavor: String,
    },
    Betti {
        space: String,
        #[serde(default = "closed")]
        flavor: String,
    },
    Ring {
        space: String,
    },
    Verify {
        target: String,
    },
    BcAeppli {
        target: String,
    },
    Truncated {
        target: String,
        #[serde(default = "closed")]
        flavor: String,
        #[serde(default)]
        s: Option<i32>,
        #[serde(default)]
        t: Option<i32>,
    },
    PolyCheck {
        max_r: usize,
    },
}

impl Query {
    pub fn kind(&self) -> &'static str {
        match self {
            Query::Diamond { .. } => "diamond",
            Query::Betti { .. } => "betti",
            Query::Ring { .. } => "ring",
            Query::Verify { .. } => "verify",
            Query::BcAeppli { .. } => "bc-aeppli",
            Query::Truncated { .. } => "truncated",
            Query::PolyCheck { .. } => "poly-check",
        }
    }

    /// The space the query reads, if any.
    pub fn target(&self) -> Option<&str> {
        match self {
            Query::Diamond { space, .. } | Query::Betti { space, .. } | Query::Ring { space } => Some(space),
            Query::Verify { target } | Query::BcAeppli { target } | Query::Truncated { target, .. } => Some(target),
            Query::PolyCheck { .. } => None,
        }
    }
}

/// Deserializes with the JSON path and line/column of the first problem.
pub fn parse_json<T: for<'de> Deserialize<'de>>(source: &str, text: &str) -> Result<T, InputError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let at = if path == "." {
            String::new()
        } else {
            format!(" at {path}")
        };
        InputError(format!("{source}{at}: {inner}"))
    })
}

pub fn parse_script(source: &str, text: &str) -> Result<Script, InputError> {
    let script: Script = parse_json(source, text)?;
    if script.version != SCRIPT_VERSION {
        return Err(InputError::at(
            format!("{source} at version"),
            format!("unsupported version {}, expected {SCRIPT_VERSION}", script.version),
        ));
    }
    Ok(script)
}

/// Every name a constructor depends on, in an order where dependencies come
/// first. Undefined references and cycles are reported with their path.
pub fn build_order(script: &Script) -> Result<Vec<String>, InputError> {
    for (name, op) in &script.spaces {
        for (field, r) in op.references() {
            if !script.spaces.contains_key(r) {
                return Err(InputError::at(
                    format!("spaces.{name}.{field}"),
                    format!("undefined reference {r:?}"),
                ));
            }
        }
    }
    for (i, q) in script.queries.iter().enumerate() {
        if let Some(t) = q.target() {
            if !script.spaces.contains_key(t) {
                return Err(InputError::at(
                    format!("queries[{i}]"),
                    format!("undefined reference {t:?}"),
                ));
            }
        }
    }

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let mut marks: BTreeMap<&str, Mark> = script.spaces.keys().map(|k| (k.as_str(), Mark::New)).collect();
    let mut order = Vec::new();
    // Iterative DFS so deep chains cannot overflow the stack.
    for root in script.spaces.keys() {
        if marks[root.as_str()] != Mark::New {
            continue;
        }
        let mut stack: Vec<(&str, usize)> = vec![(root, 0)];
        marks.insert(root, Mark::Active);
        while let Some(top) = stack.last_mut() {
            let node = top.0;
            let refs = script.spaces[node].references();
            if let Some(&(_, child)) = refs.get(top.1) {
                top.1 += 1;
                match marks[child] {
                    Mark::New => {
                        marks.insert(child, Mark::Active);
                        stack.push((child, 0));
                    }
                    Mark::Active => {
                        let start = stack.iter().position(|&(n, _)| n == child).expect("on stack");
                        let mut cycle: Vec<&str> = stack[start..].iter().map(|&(n, _)| n).collect();
                        cycle.push(child);
                        return Err(InputError::at("spaces", format!("cycle {}", cycle.join(" -> "))));
                    }
                    Mark::Done => {}
                }
            } else {
                marks.insert(node, Mark::Done);
                order.push(node.to_string());
                stack.pop();
            }
        }
    }
    Ok(order)
}
