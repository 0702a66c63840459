//! Truth-table semantics. Desk-scale oracle for classical consequence.

use std::collections::{BTreeMap, BTreeSet};

use super::Sentence;

/// Environment variable overriding [`BruteForceLimit::default`].
pub const BRUTE_FORCE_ENV: &str = "DBBEL_BRUTE_FORCE_VARS";

/// Maximum number of variables the truth-table oracle will enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteForceLimit(pub usize);

impl Default for BruteForceLimit {
    fn default() -> Self {
        BruteForceLimit(20)
    }
}

impl BruteForceLimit {
    /// The default, unless `DBBEL_BRUTE_FORCE_VARS` holds a number.
    pub fn from_env() -> Self {
        std::env::var(BRUTE_FORCE_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(BruteForceLimit)
            .unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("valuation does not assign atom `{0}`")]
    MissingAtom(String),
    #[error("{found} variables exceed the truth-table limit of {limit}")]
    TooManyVariables { found: usize, limit: usize },
}

/// A truth assignment to variable names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Valuation(BTreeMap<String, bool>);

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, var: &str, value: bool) -> &mut Self {
        self.0.insert(var.to_string(), value);
        self
    }

    pub fn get(&self, var: &str) -> Option<bool> {
        self.0.get(var).copied()
    }
}

impl<S: Into<String>> FromIterator<(S, bool)> for Valuation {
    fn from_iter<T: IntoIterator<Item = (S, bool)>>(iter: T) -> Self {
        Valuation(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

pub fn eval_classical(s: &Sentence, v: &Valuation) -> Result<bool, OracleError> {
    Ok(match s {
        Sentence::Atom(name) => v
            .get(name)
            .ok_or_else(|| OracleError::MissingAtom(name.to_string()))?,
        Sentence::Bot => false,
        Sentence::Neg(c) => !eval_classical(c, v)?,
        Sentence::Conj(l, r) => eval_classical(l, v)? && eval_classical(r, v)?,
        Sentence::Disj(l, r) => eval_classical(l, v)? || eval_classical(r, v)?,
    })
}

/// Calls `visit` with every valuation of `vars`; stops early when it
/// returns `false`. Returns whether enumeration ran to completion.
fn for_each_valuation(vars: &[String], mut visit: impl FnMut(&Valuation) -> bool) -> bool {
    let n = vars.len();
    let mut v = Valuation::new();
    for mask in 0u64..(1u64 << n) {
        for (i, name) in vars.iter().enumerate() {
            v.set(name, (mask >> i) & 1 == 1);
        }
        if !visit(&v) {
            return false;
        }
    }
    true
}

fn collect_vars<'a>(
    sentences: impl IntoIterator<Item = &'a Sentence>,
    limit: BruteForceLimit,
) -> Result<Vec<String>, OracleError> {
    let mut vars = BTreeSet::new();
    for s in sentences {
        vars.extend(s.variables());
    }
    if vars.len() > limit.0 {
        return Err(OracleError::TooManyVariables {
            found: vars.len(),
            limit: limit.0,
        });
    }
    Ok(vars.into_iter().collect())
}

/// `premises ⊨ goal`, by enumerating every valuation of the variables involved.
pub fn classical_entails(
    premises: &[Sentence],
    goal: &Sentence,
    limit: BruteForceLimit,
) -> Result<bool, OracleError> {
    let vars = collect_vars(premises.iter().chain([goal]), limit)?;
    let eval = |s: &Sentence, v: &Valuation| eval_classical(s, v).expect("all variables assigned");
    Ok(for_each_valuation(&vars, |v| {
        !premises.iter().all(|p| eval(p, v)) || eval(goal, v)
    }))
}

/// `s ⊨ ⊥`.
pub fn is_classically_inconsistent(s: &Sentence, limit: BruteForceLimit) -> Result<bool, OracleError> {
    classical_entails(std::slice::from_ref(s), &Sentence::Bot, limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_sentence;

    fn p(text: &str) -> Sentence {
        parse_sentence(text).unwrap()
    }

    #[test]
    fn evaluation() {
        let v: Valuation = [("p", true), ("q", false)].into_iter().collect();
        assert!(!eval_classical(&p("p & q"), &v).unwrap());
        assert!(eval_classical(&p("p | !p"), &v).unwrap());
        assert!(eval_classical(&p("q | !q"), &v).unwrap());
        assert!(!eval_classical(&Sentence::Bot, &v).unwrap());
        assert_eq!(
            eval_classical(&p("r"), &v),
            Err(OracleError::MissingAtom("r".into()))
        );
    }

    #[test]
    fn entailment() {
        let lim = BruteForceLimit::default();
        assert!(classical_entails(&[p("p & q")], &p("p"), lim).unwrap());
        assert!(classical_entails(&[], &p("p | !p"), lim).unwrap());
        assert!(!classical_entails(&[p("p")], &p("q"), lim).unwrap());
        assert!(classical_entails(&[p("p"), p("!p")], &p("q"), lim).unwrap());
        assert!(is_classically_inconsistent(
            &p("(p | q) & (!p | q) & (p | !q) & (!p | !q)"),
            lim
        )
        .unwrap());
    }

    #[test]
    fn variable_limit() {
        let big = Sentence::conj_all((0..5).map(|i| Sentence::atom(&format!("x{i}")))).unwrap();
        assert_eq!(
            classical_entails(&[big], &Sentence::Bot, BruteForceLimit(4)),
            Err(OracleError::TooManyVariables { found: 5, limit: 4 })
        );
    }
}
