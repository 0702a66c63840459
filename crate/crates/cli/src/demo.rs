use std::collections::BTreeMap;

use clap::ValueEnum;
use num_rational::BigRational;
use serde_json::{json, Value};

use dbbel::belief::{belief_and_plausibility, refine, DbmStage, MassFunction, Split};
use dbbel::forest::new_forest;
use dbbel::io::{format_rational, result_to_json};
use dbbel::proof::{derives_k, witness_tree, Reasoner};
use dbbel::ratlp::Relation;
use dbbel::solver::{gensat, Constraints, Problem, RawConstraint, SolverConfig};
use dbbel::syntax::{parse_sentence_with, BruteForceLimit, ParseOptions, Root, Sentence};

use crate::{Failure, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Name {
    Ellsberg,
    EllsbergVariant,
    Levesque,
    Hierarchy,
}

fn s(text: &str) -> Sentence {
    let opts = ParseOptions {
        desugar_implication: true,
    };
    parse_sentence_with(text, opts).expect("fixture sentences parse")
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn run(name: Name) -> Result<Report, Failure> {
    match name {
        Name::Ellsberg => urn(
            "ellsberg",
            "(Y -> !G & !R) & (R -> !G & !Y) & (G -> !R & !Y) & (Y | G | R)",
            [("Y | G", q(2, 3), "Y"), ("R", q(1, 3), "")],
            &["Y | G", "R", "Y", "G"],
        ),
        Name::EllsbergVariant => urn(
            "ellsberg-variant",
            "(Y -> !G & !R & !W) & (G -> !Y & !R & !W) & (R -> !Y & !G & !W) & (W -> !Y & !G & !R) & (Y | G | R | W)",
            [("Y | G", q(1, 2), "Y"), ("W | R", q(1, 2), "W")],
            &["Y | G", "W | R", "Y", "G", "R", "W"],
        ),
        Name::Levesque => levesque(),
        Name::Hierarchy => hierarchy(),
    }
}

/// Two support sentences conjoined with a background, their stage-0
/// masses, and the colour each is split on at depth 1 (empty: kept).
fn urn(
    name: &str,
    background: &str,
    supp: [(&str, BigRational, &str); 2],
    queries: &[&str],
) -> Result<Report, Failure> {
    let r = Reasoner::new();
    let lim = BruteForceLimit::default();
    let gamma = s(background);
    let roots: Vec<Root> = supp
        .iter()
        .map(|(t, _, _)| Root::Info(Sentence::conj(s(t), gamma.clone())))
        .collect();
    let forest = new_forest(&roots).map_err(|e| Failure::Input(e.to_string()))?;
    let weights = supp.iter().enumerate().map(|(i, (_, m, _))| (i, m.clone())).collect();
    let internal = |e: dbbel::belief::BeliefError| Failure::Input(e.to_string());
    let mass = MassFunction::new(&forest, weights, &r).map_err(internal)?;
    let s0 = DbmStage::new(forest, mass, lim, &r).map_err(internal)?;
    let choices: BTreeMap<usize, Sentence> = supp
        .iter()
        .enumerate()
        .filter(|(_, (_, _, c))| !c.is_empty())
        .map(|(i, (_, _, c))| (i, s(c)))
        .collect();
    let colours: Vec<Sentence> = queries.iter().map(|t| s(t)).collect();
    let s1 = refine(&s0, &choices, &Split::Symmetric, &colours, lim, &r).map_err(internal)?;

    let mut queries: Vec<(String, Sentence)> = queries.iter().map(|t| (t.to_string(), s(t))).collect();
    queries.push(("background".into(), gamma.clone()));
    let mut rows = Vec::new();
    let mut table = Vec::new();
    for stage in [&s0, &s1] {
        for (label, query) in &queries {
            let a = belief_and_plausibility(stage, query, &r);
            let (b, pl) = (format_rational(&a.belief), format_rational(&a.plausibility));
            rows.push(json!({ "k": stage.stage(), "query": label, "belief": b, "plausibility": pl }));
            table.push([stage.stage().to_string(), label.clone(), b, pl]);
        }
    }
    Ok(Report {
        json: json!({ "demo": name, "background": gamma.to_string(), "rows": rows }),
        table: Some(table),
    })
}

fn levesque() -> Result<Report, Failure> {
    let premises: Vec<Root> = ["l_ja", "l_ag", "m_j", "!m_g"].iter().map(|t| Root::Info(s(t))).collect();
    let goal = s("l_ja & m_j & !m_a | l_ag & m_a & !m_g");
    let root = Root::Info(
        Sentence::conj_all(premises.iter().filter_map(Root::sentence).cloned()).expect("nonempty"),
    );
    let derivable: Vec<Value> = (0..=1)
        .map(|k| json!({ "k": k, "derivable": derives_k(&premises, &goal, k) }))
        .collect();
    let tree = witness_tree(&root, &goal, 1).ok_or_else(|| Failure::Input("no witness".into()))?;
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
    Ok(Report::json(json!({
        "demo": "levesque",
        "premises": premises.iter().map(Root::to_string).collect::<Vec<_>>(),
        "goal": goal.to_string(),
        "results": derivable,
        "witness_tree": { "root": root.to_string(), "nodes": nodes },
    })))
}

fn hierarchy() -> Result<Report, Failure> {
    let constraints = vec![
        RawConstraint {
            terms: vec![(q(1, 1), s("p"))],
            rel: Relation::Ge,
            bound: q(1, 2),
        },
        RawConstraint {
            terms: vec![(q(1, 1), s("q"))],
            rel: Relation::Ge,
            bound: q(2, 3),
        },
    ];
    let mut results = Vec::new();
    for depth in 0..=1 {
        let problem = Problem::new(Constraints::Raw(constraints.clone()), depth);
        let mut doc = result_to_json(&gensat(&problem, &SolverConfig::default())?);
        doc["depth"] = json!(depth);
        results.push(doc);
    }
    Ok(Report::json(json!({
        "demo": "hierarchy",
        "constraints": ["B(p) >= 1/2", "B(q) >= 2/3"],
        "results": results,
    })))
}
