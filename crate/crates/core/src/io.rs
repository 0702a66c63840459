//! JSON encodings of forests, mass functions, problems and results.
//! Rationals are written `"n/d"` in lowest terms.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::belief::{BeliefAssessment, BeliefError, MassFunction};
use crate::forest::{Forest, ForestError, NodeId, Tree};
use crate::proof::Reasoner;
use crate::ratlp::Relation;
use crate::solver::{
    Constraints, NormalizedConstraint, Problem, RawConstraint, SolveResult, Status, Witness,
};
use crate::syntax::{parse_root, parse_sentence_with, ParseError, ParseOptions, Root, Sentence};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("in `{text}`: {error}")]
    Syntax { text: String, error: ParseError },
    #[error("`{0}` is not a rational")]
    Rational(String),
    #[error("`{0}` is not a natural number")]
    Natural(String),
    #[error(transparent)]
    Forest(#[from] ForestError),
    #[error(transparent)]
    Belief(#[from] BeliefError),
    #[error("{0}")]
    Invalid(String),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json(e.to_string())
    }
}

/// Accepts `"n/d"` or an integer.
pub fn parse_rational(text: &str) -> Result<BigRational, IoError> {
    let bad = || IoError::Rational(text.to_string());
    let t = text.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Always `"n/d"`, so `1` prints as `"1/1"`.
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn parse_natural(text: &str) -> Result<BigUint, IoError> {
    text.trim().parse().map_err(|_| IoError::Natural(text.to_string()))
}

pub fn sentence(text: &str, opts: ParseOptions) -> Result<Sentence, IoError> {
    parse_sentence_with(text, opts).map_err(|error| IoError::Syntax {
        text: text.to_string(),
        error,
    })
}

pub fn root(text: &str, opts: ParseOptions) -> Result<Root, IoError> {
    parse_root(text, opts).map_err(|error| IoError::Syntax {
        text: text.to_string(),
        error,
    })
}

#[derive(Deserialize)]
struct NodeFile {
    id: NodeId,
    parent: Option<NodeId>,
    branch: Option<String>,
}

#[derive(Deserialize)]
struct TreeFile {
    root: String,
    nodes: Vec<NodeFile>,
}

#[derive(Deserialize)]
struct ForestFile {
    supp: Vec<String>,
    trees: Vec<TreeFile>,
    #[serde(default)]
    stage: Option<usize>,
}

pub fn forest_from_json(text: &str, opts: ParseOptions) -> Result<Forest, IoError> {
    let file: ForestFile = serde_json::from_str(text)?;
    let supp: Vec<Root> = file.supp.iter().map(|s| root(s, opts)).collect::<Result<_, _>>()?;
    let mut trees = Vec::new();
    for t in &file.trees {
        let records = t
            .nodes
            .iter()
            .map(|n| {
                let branch = n.branch.as_deref().map(|b| sentence(b, opts)).transpose()?;
                Ok((n.id, n.parent, branch))
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        trees.push(Tree::from_records(root(&t.root, opts)?, &records)?);
    }
    let forest = Forest::from_trees(trees, file.stage)?;
    if forest.supp() != supp.as_slice() {
        return Err(IoError::Invalid("`supp` must list the tree roots in order".into()));
    }
    Ok(forest)
}

pub fn forest_to_json(forest: &Forest) -> Value {
    let trees: Vec<Value> = forest
        .trees()
        .iter()
        .map(|t| {
            let nodes: Vec<Value> = t
                .nodes()
                .map(|n| {
                    json!({
                        "id": n.id,
                        "parent": n.parent,
                        "branch": n.branch.as_ref().map(Sentence::to_string),
                        "info": n.information().to_string(),
                    })
                })
                .collect();
            json!({"root": t.root().to_string(), "nodes": nodes})
        })
        .collect();
    json!({
        "supp": forest.supp().iter().map(Root::to_string).collect::<Vec<_>>(),
        "trees": trees,
        "stage": forest.stage(),
    })
}

#[derive(Deserialize)]
struct MassFile {
    mass: BTreeMap<String, String>,
}

pub fn mass_from_json(text: &str, forest: &Forest, reasoner: &Reasoner) -> Result<MassFunction, IoError> {
    let file: MassFile = serde_json::from_str(text)?;
    let mut weights = BTreeMap::new();
    for (id, w) in &file.mass {
        let id: NodeId = id
            .trim()
            .parse()
            .map_err(|_| IoError::Invalid(format!("`{id}` is not a node id")))?;
        weights.insert(id, parse_rational(w)?);
    }
    Ok(MassFunction::new(forest, weights, reasoner)?)
}

pub fn mass_to_json(mass: &MassFunction) -> Value {
    let map: Map<String, Value> = mass
        .weights()
        .iter()
        .map(|(id, w)| (id.to_string(), Value::String(format_rational(w))))
        .collect();
    json!({ "mass": map })
}

pub fn assessment_to_json(a: &BeliefAssessment) -> Value {
    json!({
        "query": a.query.to_string(),
        "belief": format_rational(&a.belief),
        "plausibility": format_rational(&a.plausibility),
        "belief_witnesses": a.belief_witnesses,
        "plausibility_witnesses": a.plausibility_witnesses,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Gensat,
    Binf,
}

#[derive(Deserialize)]
struct RawFile {
    terms: Vec<(String, String)>,
    rel: String,
    bound: String,
}

#[derive(Deserialize)]
struct NormalizedFile {
    #[serde(default)]
    bel: Vec<(String, String)>,
    w: String,
    #[serde(default)]
    pl: Vec<(String, String)>,
    v: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    depth: usize,
    mode: Mode,
    #[serde(default)]
    query: Option<String>,
    #[serde(default)]
    raw_constraints: Option<Vec<RawFile>>,
    #[serde(default)]
    constraints: Option<Vec<NormalizedFile>>,
    #[serde(default)]
    supp: Option<Vec<String>>,
    #[serde(default)]
    normalize: bool,
}

/// A problem read from JSON, with its mode and whether raw constraints
/// should go through the two-sided rewrite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemSpec {
    pub problem: Problem,
    pub mode: Mode,
    pub normalize: bool,
}

fn relation(text: &str) -> Result<Relation, IoError> {
    match text.trim() {
        "<=" => Ok(Relation::Le),
        "=" => Ok(Relation::Eq),
        ">=" => Ok(Relation::Ge),
        other => Err(IoError::Invalid(format!("unknown relation `{other}`"))),
    }
}

fn relation_str(rel: Relation) -> &'static str {
    match rel {
        Relation::Le => "<=",
        Relation::Eq => "=",
        Relation::Ge => ">=",
    }
}

pub fn problem_from_json(text: &str, opts: ParseOptions) -> Result<ProblemSpec, IoError> {
    let file: ProblemFile = serde_json::from_str(text)?;
    let constraints = match (file.raw_constraints, file.constraints) {
        (Some(raw), None) => Constraints::Raw(
            raw.iter()
                .map(|c| {
                    Ok(RawConstraint {
                        terms: c
                            .terms
                            .iter()
                            .map(|(d, s)| Ok((parse_rational(d)?, sentence(s, opts)?)))
                            .collect::<Result<_, IoError>>()?,
                        rel: relation(&c.rel)?,
                        bound: parse_rational(&c.bound)?,
                    })
                })
                .collect::<Result<_, IoError>>()?,
        ),
        (None, Some(cs)) => {
            let side = |terms: &[(String, String)]| {
                terms
                    .iter()
                    .map(|(a, s)| Ok((parse_natural(a)?, sentence(s, opts)?)))
                    .collect::<Result<Vec<_>, IoError>>()
            };
            Constraints::Normalized(
                cs.iter()
                    .map(|c| {
                        Ok(NormalizedConstraint {
                            bel: side(&c.bel)?,
                            w: parse_natural(&c.w)?,
                            pl: side(&c.pl)?,
                            v: parse_natural(&c.v)?,
                        })
                    })
                    .collect::<Result<_, IoError>>()?,
            )
        }
        _ => {
            return Err(IoError::Invalid(
                "exactly one of `raw_constraints` and `constraints` is required".into(),
            ))
        }
    };
    let query = file.query.as_deref().map(|q| sentence(q, opts)).transpose()?;
    if file.mode == Mode::Binf && query.is_none() {
        return Err(IoError::Invalid("mode `binf` needs a `query`".into()));
    }
    let supp = file
        .supp
        .map(|s| s.iter().map(|t| sentence(t, opts)).collect::<Result<Vec<_>, _>>())
        .transpose()?;
    Ok(ProblemSpec {
        problem: Problem {
            constraints,
            depth: file.depth,
            query,
            supp,
        },
        mode: file.mode,
        normalize: file.normalize,
    })
}

fn terms_json<C: ToString>(terms: &[(C, Sentence)]) -> Vec<Value> {
    terms
        .iter()
        .map(|(c, s)| json!([c.to_string(), s.to_string()]))
        .collect()
}

pub fn constraints_to_json(constraints: &Constraints) -> Value {
    match constraints {
        Constraints::Raw(cs) => Value::Array(
            cs.iter()
                .map(|c| {
                    let terms: Vec<Value> = c
                        .terms
                        .iter()
                        .map(|(d, s)| json!([format_rational(d), s.to_string()]))
                        .collect();
                    json!({
                        "terms": terms,
                        "rel": relation_str(c.rel),
                        "bound": format_rational(&c.bound),
                    })
                })
                .collect(),
        ),
        Constraints::Normalized(cs) => Value::Array(
            cs.iter()
                .map(|c| {
                    json!({
                        "bel": terms_json(&c.bel),
                        "w": c.w.to_string(),
                        "pl": terms_json(&c.pl),
                        "v": c.v.to_string(),
                    })
                })
                .collect(),
        ),
    }
}

fn witness_json(w: &Witness) -> Value {
    json!({
        "forest": forest_to_json(&w.forest),
        "mass": mass_to_json(&w.mass)["mass"],
    })
}

pub fn result_to_json(result: &SolveResult) -> Value {
    let mut out = Map::new();
    let status = match result.status {
        Status::Sat => "SAT",
        Status::Unsat => "UNSAT",
    };
    out.insert("status".into(), json!(status));
    out.insert(
        "stats".into(),
        json!({
            "enumerated": result.stats.enumerated,
            "admissible": result.stats.admissible,
            "forests_checked": result.stats.checked,
        }),
    );
    if let Some(w) = &result.witness {
        out.insert("witness".into(), witness_json(w));
    }
    if let Some(b) = &result.bounds {
        out.insert("lower".into(), json!(format_rational(&b.lower)));
        out.insert("upper".into(), json!(format_rational(&b.upper)));
        out.insert("lower_witness".into(), witness_json(&b.lower_witness));
        out.insert("upper_witness".into(), witness_json(&b.upper_witness));
    }
    Value::Object(out)
}
