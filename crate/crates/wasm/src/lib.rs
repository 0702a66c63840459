//! Browser bindings. Every export takes plain strings and returns a JSON
//! document; failures come back as `{"error": "..."}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use dbbel::belief::assess;
use dbbel::io::{
    assessment_to_json, forest_from_json, mass_from_json, problem_from_json, result_to_json,
};
use dbbel::proof::{least_depth, witness_tree, DepthSearch, Reasoner};
use dbbel::solver::{b_k_inf, gensat, Constraints, SolverConfig};
use dbbel::syntax::{ParseOptions, Root, Sentence};

fn options(desugar: bool) -> ParseOptions {
    ParseOptions {
        desugar_implication: desugar,
    }
}

fn lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn finish(result: Result<Value, String>) -> String {
    let doc = result.unwrap_or_else(|e| json!({ "error": e }));
    serde_json::to_string_pretty(&doc).expect("values serialize")
}

/// Decides `Γ ⊢ⱼ φ` for every `j ≤ k`, with a witness tree at the least
/// depth that works. Premises are one per line.
#[wasm_bindgen]
pub fn prove(premises: &str, goal: &str, k: usize, desugar: bool) -> String {
    finish(prove_doc(premises, goal, k.min(4), desugar))
}

fn prove_doc(premises: &str, goal: &str, k: usize, desugar: bool) -> Result<Value, String> {
    let opts = options(desugar);
    let roots: Vec<Root> = lines(premises)
        .map(|l| dbbel::io::root(l, opts))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let goal = dbbel::io::sentence(goal, opts).map_err(|e| e.to_string())?;
    let mut search = DepthSearch::new(&roots, &goal);
    let by_depth: Vec<Value> = (0..=k).map(|j| json!({ "k": j, "derivable": search.derives(j) })).collect();
    let least = least_depth(&roots, &goal, k);
    let mut doc = json!({ "results": by_depth, "least_depth": least });
    if let Some(depth) = least {
        let sentences: Vec<Sentence> = roots.iter().filter_map(Root::sentence).cloned().collect();
        let root = Sentence::conj_all(sentences).map_or(Root::Star, Root::Info);
        let tree = witness_tree(&root, &goal, depth).expect("derivable at this depth");
        let nodes: Vec<Value> = tree
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
        doc["tree"] = json!({ "root": root.to_string(), "nodes": nodes });
    }
    Ok(doc)
}

/// `Bₖ` and `Plₖ` of each query (one per line) under a forest and mass
/// function in the CLI's JSON formats.
#[wasm_bindgen]
pub fn belief(forest: &str, mass: &str, queries: &str, desugar: bool) -> String {
    finish(belief_doc(forest, mass, queries, desugar))
}

fn belief_doc(forest: &str, mass: &str, queries: &str, desugar: bool) -> Result<Value, String> {
    let opts = options(desugar);
    let forest = forest_from_json(forest, opts).map_err(|e| e.to_string())?;
    let reasoner = Reasoner::new();
    let mass = mass_from_json(mass, &forest, &reasoner).map_err(|e| e.to_string())?;
    let results = lines(queries)
        .map(|q| {
            let q = dbbel::io::sentence(q, opts).map_err(|e| e.to_string())?;
            Ok(assessment_to_json(&assess(&forest, &mass, &q, &reasoner)))
        })
        .collect::<Result<Vec<Value>, String>>()?;
    Ok(json!({ "stage": forest.stage(), "results": results }))
}

/// Runs a problem document: `gensat` or `binf` according to its mode.
#[wasm_bindgen]
pub fn solve(problem: &str, normalize: bool, desugar: bool) -> String {
    finish(solve_doc(problem, normalize, desugar))
}

fn solve_doc(problem: &str, normalize: bool, desugar: bool) -> Result<Value, String> {
    let spec = problem_from_json(problem, options(desugar)).map_err(|e| e.to_string())?;
    let mut problem = spec.problem;
    if (normalize || spec.normalize) && matches!(problem.constraints, Constraints::Raw(_)) {
        problem = problem.normalized().map_err(|e| e.to_string())?;
    }
    let config = SolverConfig::default();
    let result = match spec.mode {
        dbbel::io::Mode::Gensat => gensat(&problem, &config),
        dbbel::io::Mode::Binf => b_k_inf(&problem, &config),
    }
    .map_err(|e| e.to_string())?;
    let mut doc = result_to_json(&result);
    doc["depth"] = json!(problem.depth);
    Ok(doc)
}
