//! Depth-bounded consequence: `⊢₀` by saturation and `⊢ₖ` by nested case
//! splits on subsentences.

mod depth;
mod saturation;
mod trace;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

pub use depth::{derives_k, least_depth, witness_tree, DepthSearch};
pub use saturation::Saturation;
pub use trace::{verify_trace, DerivationTrace, TraceError, TraceStep};

use crate::syntax::{Root, Sentence};

/// Introduction and elimination rules for `¬`, `∧`, `∨`, `⊥`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "premise")]
    Premise,
    #[serde(rename = "&I")]
    AndI,
    #[serde(rename = "!&I1")]
    NegAndI1,
    #[serde(rename = "!&I2")]
    NegAndI2,
    #[serde(rename = "!|I")]
    NegOrI,
    #[serde(rename = "|I1")]
    OrI1,
    #[serde(rename = "|I2")]
    OrI2,
    #[serde(rename = "_|_I")]
    BotI,
    #[serde(rename = "!!I")]
    NegNegI,
    #[serde(rename = "|E1")]
    OrE1,
    #[serde(rename = "|E2")]
    OrE2,
    #[serde(rename = "!|E1")]
    NegOrE1,
    #[serde(rename = "!|E2")]
    NegOrE2,
    #[serde(rename = "&E1")]
    AndE1,
    #[serde(rename = "&E2")]
    AndE2,
    #[serde(rename = "!&E1")]
    NegAndE1,
    #[serde(rename = "!&E2")]
    NegAndE2,
    #[serde(rename = "!!E")]
    NegNegE,
    #[serde(rename = "_|_E")]
    BotE,
}

fn premise_sentences(premises: &[Root]) -> Vec<Sentence> {
    let mut out: Vec<Sentence> = Vec::new();
    for s in premises.iter().filter_map(Root::sentence) {
        if !out.contains(s) {
            out.push(s.clone());
        }
    }
    out
}

/// `Γ ⊢₀ goal`. `*` premises contribute nothing.
pub fn derives0(premises: &[Root], goal: &Sentence) -> bool {
    let prem = premise_sentences(premises);
    Saturation::new(&prem, std::slice::from_ref(goal)).derives(goal)
}

/// `Γ ⊢₀ goal` together with a derivation when it holds.
pub fn derives0_traced(premises: &[Root], goal: &Sentence) -> Option<DerivationTrace> {
    let prem = premise_sentences(premises);
    Saturation::new(&prem, std::slice::from_ref(goal)).trace(goal)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Positive,
    Negative,
    Undecided,
}

impl Decision {
    pub fn is_decided(self) -> bool {
        self != Decision::Undecided
    }
}

pub fn decides0(info: &Root, target: &Sentence) -> Decision {
    Reasoner::new().decides(info, target)
}

/// `dec(Γ, φ)`: the candidates that decide `target`.
pub fn decided_subset(candidates: &[Sentence], target: &Sentence) -> Vec<Sentence> {
    let r = Reasoner::new();
    candidates
        .iter()
        .filter(|c| r.decides(&Root::Info((*c).clone()), target).is_decided())
        .cloned()
        .collect()
}

/// `inc(Γ)`: the candidates that 0-derive `⊥`.
pub fn inc_subset(candidates: &[Sentence]) -> Vec<Sentence> {
    candidates
        .iter()
        .filter(|c| Saturation::new(std::slice::from_ref(*c), &[]).is_inconsistent())
        .cloned()
        .collect()
}

/// Past this many registered goals, a saturation is rebuilt from the
/// base goals instead of growing further.
const MAX_GOALS_PER_SATURATION: usize = 24;

/// Caches one saturation per premise sentence, so repeated queries against
/// the same forest leaf reuse work. Safe to share between threads.
#[derive(Debug, Default)]
pub struct Reasoner {
    base_goals: Vec<Sentence>,
    cache: Mutex<HashMap<Sentence, Arc<Saturation>>>,
}

impl Reasoner {
    pub fn new() -> Self {
        Self::default()
    }

    /// A reasoner whose saturations cover `goals` from the start.
    pub fn with_goals(goals: &[Sentence]) -> Self {
        let mut base_goals: Vec<Sentence> = Vec::new();
        for g in goals {
            if !base_goals.contains(g) {
                base_goals.push(g.clone());
            }
        }
        Reasoner {
            base_goals,
            cache: Mutex::default(),
        }
    }

    fn saturation(&self, premise: &Sentence, goal: Option<&Sentence>) -> Arc<Saturation> {
        let cached = self.cache.lock().unwrap().get(premise).cloned();
        if let Some(sat) = &cached {
            if goal.is_none_or(|g| sat.covers(g)) {
                return sat.clone();
            }
        }
        let mut goals = match &cached {
            Some(sat) if sat.goals().len() < MAX_GOALS_PER_SATURATION => sat.goals().to_vec(),
            _ => self.base_goals.clone(),
        };
        goals.extend(goal.cloned());
        let sat = Arc::new(Saturation::new(std::slice::from_ref(premise), &goals));
        self.cache
            .lock()
            .unwrap()
            .insert(premise.clone(), sat.clone());
        sat
    }

    /// `info ⊢₀ goal`; `*` derives nothing.
    pub fn derives(&self, info: &Root, goal: &Sentence) -> bool {
        match info {
            Root::Star => false,
            Root::Info(s) => self.saturation(s, Some(goal)).derives(goal),
        }
    }

    /// `info ⊢₀ ⊥`.
    pub fn inconsistent(&self, info: &Root) -> bool {
        match info {
            Root::Star => false,
            Root::Info(s) => self.saturation(s, None).is_inconsistent(),
        }
    }

    /// Positive if `info ⊢₀ target`, else Negative if `info ⊢₀ ¬target`.
    pub fn decides(&self, info: &Root, target: &Sentence) -> Decision {
        let Root::Info(s) = info else {
            return Decision::Undecided;
        };
        let neg = target.negated();
        let sat = self.saturation(s, Some(&neg));
        if sat.derives(target) {
            Decision::Positive
        } else if sat.derives(&neg) {
            Decision::Negative
        } else {
            Decision::Undecided
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{classical_entails, parse_sentence, parse_sentence_with, BruteForceLimit, ParseOptions};

    fn p(text: &str) -> Sentence {
        parse_sentence(text).unwrap()
    }

    fn info(text: &str) -> Root {
        Root::Info(p(text))
    }

    pub(crate) fn ellsberg_background() -> Sentence {
        parse_sentence_with(
            "(Y -> !G & !R) & (R -> !G & !Y) & (G -> !R & !Y) & (Y | G | R)",
            ParseOptions {
                desugar_implication: true,
            },
        )
        .unwrap()
    }

    #[test]
    fn derives0_examples() {
        assert!(derives0(&[info("p & q")], &p("p")));
        assert!(!derives0(&[Root::Star], &p("p | !p")));
        assert!(derives0(&[info("!p"), info("p | q")], &p("q")));
        assert!(derives0(&[info("p"), info("!p")], &p("q")));
    }

    #[test]
    fn traces_verify() {
        let cases: &[(&[&str], &str)] = &[
            (&["p & q"], "p"),
            (&["!p", "p | q"], "q"),
            (&["p", "!p"], "q"),
            (&["!(p | q) & r"], "!q & r"),
            (&["!(a & b)", "a", "b | c"], "c | d"),
        ];
        for (prem, goal) in cases {
            let roots: Vec<Root> = prem.iter().map(|s| info(s)).collect();
            let sents: Vec<Sentence> = prem.iter().map(|s| p(s)).collect();
            let trace = derives0_traced(&roots, &p(goal)).expect("derivable");
            verify_trace(&sents, &trace, &p(goal)).unwrap();
        }
        assert!(derives0_traced(&[info("p | q")], &p("p")).is_none());
    }

    #[test]
    fn decides0_examples() {
        let target = p("(p | !p) | q");
        assert_eq!(decides0(&info("p"), &target), Decision::Positive);
        assert_eq!(decides0(&info("!q"), &target), Decision::Undecided);
        let gamma = ellsberg_background();
        let red = Root::Info(Sentence::conj(p("R"), gamma));
        assert_eq!(decides0(&red, &p("Y")), Decision::Negative);
        assert_eq!(decides0(&info("p & !p"), &p("q")), Decision::Positive);
        assert_eq!(decides0(&Root::Star, &p("q")), Decision::Undecided);
    }

    #[test]
    fn decided_and_inconsistent_subsets() {
        let target = p("(p | !p) | q");
        assert_eq!(decided_subset(&[p("p"), p("!q")], &target), vec![p("p")]);
        assert_eq!(decided_subset(&[p("p"), p("!p")], &p("p")), vec![p("p"), p("!p")]);
        assert!(decided_subset(&[], &target).is_empty());

        assert_eq!(inc_subset(&[p("p & !p"), p("q")]), vec![p("p & !p")]);
        assert!(inc_subset(&[p("p")]).is_empty());
        let hidden = p("(p | q) & (!p | q) & (p | !q) & (!p | !q)");
        assert!(inc_subset(std::slice::from_ref(&hidden)).is_empty());
        assert!(classical_entails(&[hidden], &Sentence::Bot, BruteForceLimit::default()).unwrap());
    }

    #[test]
    fn reasoner_grows_its_universe_on_demand() {
        let r = Reasoner::with_goals(&[p("p")]);
        let leaf = info("p & (q | r) & !q");
        assert!(r.derives(&leaf, &p("p")));
        assert!(r.derives(&leaf, &p("r | s")));
        assert!(!r.derives(&leaf, &p("s")));
        assert_eq!(r.decides(&leaf, &p("q & p")), Decision::Negative);
        assert!(!r.inconsistent(&leaf));
    }
}
