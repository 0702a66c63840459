use serde::{Deserialize, Serialize};

use super::Rule;
use crate::syntax::Sentence;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub sentence: Sentence,
    pub rule: Rule,
    /// Indices of earlier steps used as premises, in the rule's order.
    pub premises: Vec<usize>,
}

/// A linear derivation; the last step is the derived sentence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DerivationTrace {
    pub steps: Vec<TraceStep>,
}

impl DerivationTrace {
    pub fn conclusion(&self) -> Option<&Sentence> {
        self.steps.last().map(|s| &s.sentence)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("step {0}: premise index does not refer to an earlier step")]
    ForwardReference(usize),
    #[error("step {0}: `{1}` is not among the premises")]
    NotAPremise(usize, String),
    #[error("step {0}: {1:?} does not license `{2}`")]
    BadApplication(usize, Rule, String),
    #[error("the trace ends in `{found}`, expected `{expected}`")]
    WrongConclusion { expected: String, found: String },
    #[error("the trace is empty")]
    Empty,
}

/// Checks every step of `trace` against the rule it cites. Written
/// independently of the saturation engine: it only pattern-matches
/// sentences.
pub fn verify_trace(
    premises: &[Sentence],
    trace: &DerivationTrace,
    goal: &Sentence,
) -> Result<(), TraceError> {
    use Sentence::*;
    for (i, step) in trace.steps.iter().enumerate() {
        if step.premises.iter().any(|&p| p >= i) {
            return Err(TraceError::ForwardReference(i));
        }
        let prem: Vec<&Sentence> = step.premises.iter().map(|&p| &trace.steps[p].sentence).collect();
        let c = &step.sentence;
        let neg_of = |a: &Sentence, b: &Sentence| matches!(b, Neg(x) if **x == *a);
        let ok = match (step.rule, prem.as_slice()) {
            (Rule::Premise, []) => {
                if !premises.contains(c) {
                    return Err(TraceError::NotAPremise(i, c.to_string()));
                }
                true
            }
            (Rule::AndI, [a, b]) => matches!(c, Conj(l, r) if **l == **a && **r == **b),
            (Rule::NegAndI1, [na]) => {
                matches!((c, na), (Neg(x), Neg(a)) if matches!(&**x, Conj(l, _) if **l == **a))
            }
            (Rule::NegAndI2, [nb]) => {
                matches!((c, nb), (Neg(x), Neg(b)) if matches!(&**x, Conj(_, r) if **r == **b))
            }
            (Rule::NegOrI, [na, nb]) => match (c, na, nb) {
                (Neg(x), Neg(a), Neg(b)) => matches!(&**x, Disj(l, r) if **l == **a && **r == **b),
                _ => false,
            },
            (Rule::OrI1, [a]) => matches!(c, Disj(l, _) if **l == **a),
            (Rule::OrI2, [b]) => matches!(c, Disj(_, r) if **r == **b),
            (Rule::BotI, [a, na]) => *c == Bot && neg_of(a, na),
            (Rule::NegNegI, [a]) => matches!(c, Neg(x) if neg_of(a, x)),
            (Rule::OrE1, [d, na]) => matches!(d, Disj(l, r) if neg_of(l, na) && **r == *c),
            (Rule::OrE2, [d, nb]) => matches!(d, Disj(l, r) if neg_of(r, nb) && **l == *c),
            (Rule::NegOrE1, [nd]) => {
                matches!(nd, Neg(x) if matches!(&**x, Disj(l, _) if neg_of(l, c)))
            }
            (Rule::NegOrE2, [nd]) => {
                matches!(nd, Neg(x) if matches!(&**x, Disj(_, r) if neg_of(r, c)))
            }
            (Rule::AndE1, [d]) => matches!(d, Conj(l, _) if **l == *c),
            (Rule::AndE2, [d]) => matches!(d, Conj(_, r) if **r == *c),
            (Rule::NegAndE1, [nd, a]) => {
                matches!(nd, Neg(x) if matches!(&**x, Conj(l, r) if **l == **a && neg_of(r, c)))
            }
            (Rule::NegAndE2, [nd, b]) => {
                matches!(nd, Neg(x) if matches!(&**x, Conj(l, r) if **r == **b && neg_of(l, c)))
            }
            (Rule::NegNegE, [nn]) => matches!(nn, Neg(x) if neg_of(c, x)),
            (Rule::BotE, [b]) => **b == Bot,
            _ => false,
        };
        if !ok {
            return Err(TraceError::BadApplication(i, step.rule, c.to_string()));
        }
    }
    match trace.conclusion() {
        None => Err(TraceError::Empty),
        Some(found) if found == goal => Ok(()),
        Some(found) => Err(TraceError::WrongConclusion {
            expected: goal.to_string(),
            found: found.to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_sentence;

    fn p(text: &str) -> Sentence {
        parse_sentence(text).unwrap()
    }

    fn step(s: &str, rule: Rule, premises: &[usize]) -> TraceStep {
        TraceStep {
            sentence: p(s),
            rule,
            premises: premises.to_vec(),
        }
    }

    #[test]
    fn accepts_valid_and_rejects_forged_steps() {
        let trace = DerivationTrace {
            steps: vec![
                step("p | q", Rule::Premise, &[]),
                step("!p", Rule::Premise, &[]),
                step("q", Rule::OrE1, &[0, 1]),
            ],
        };
        let prem = [p("p | q"), p("!p")];
        assert_eq!(verify_trace(&prem, &trace, &p("q")), Ok(()));

        let mut forged = trace.clone();
        forged.steps[2].sentence = p("p");
        assert!(matches!(
            verify_trace(&prem, &forged, &p("p")),
            Err(TraceError::BadApplication(2, Rule::OrE1, _))
        ));

        let mut forward = trace.clone();
        forward.steps[2].premises = vec![0, 2];
        assert_eq!(
            verify_trace(&prem, &forward, &p("q")),
            Err(TraceError::ForwardReference(2))
        );

        assert!(matches!(
            verify_trace(&[p("p | q")], &trace, &p("q")),
            Err(TraceError::NotAPremise(1, _))
        ));
    }
}
