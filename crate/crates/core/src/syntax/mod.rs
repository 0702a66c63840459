//! Propositional sentences over `!`, `&`, `|`, `_|_` and named atoms.

mod classical;
mod parser;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

pub use classical::{
    classical_entails, eval_classical, is_classically_inconsistent, BruteForceLimit, OracleError,
    Valuation,
};
pub use parser::{parse_root, parse_sentence, parse_sentence_with, ParseError, ParseOptions};

/// A propositional sentence with binary connectives.
///
/// Children are reference counted so that building conjunctions of long
/// paths (forest leaves) shares structure instead of copying it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Sentence {
    Atom(Arc<str>),
    Neg(Arc<Sentence>),
    Conj(Arc<Sentence>, Arc<Sentence>),
    Disj(Arc<Sentence>, Arc<Sentence>),
    Bot,
}

impl Sentence {
    pub fn atom(name: &str) -> Sentence {
        Sentence::Atom(Arc::from(name))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(child: Sentence) -> Sentence {
        Sentence::Neg(Arc::new(child))
    }

    pub fn conj(left: Sentence, right: Sentence) -> Sentence {
        Sentence::Conj(Arc::new(left), Arc::new(right))
    }

    pub fn disj(left: Sentence, right: Sentence) -> Sentence {
        Sentence::Disj(Arc::new(left), Arc::new(right))
    }

    /// Left-associated conjunction of a non-empty list.
    pub fn conj_all<I: IntoIterator<Item = Sentence>>(items: I) -> Option<Sentence> {
        items.into_iter().reduce(Sentence::conj)
    }

    /// Left-associated disjunction of a non-empty list.
    pub fn disj_all<I: IntoIterator<Item = Sentence>>(items: I) -> Option<Sentence> {
        items.into_iter().reduce(Sentence::disj)
    }

    /// `¬self`.
    pub fn negated(&self) -> Sentence {
        Sentence::neg(self.clone())
    }

    /// Immediate subsentences, left to right.
    pub fn children(&self) -> Vec<&Sentence> {
        match self {
            Sentence::Atom(_) | Sentence::Bot => Vec::new(),
            Sentence::Neg(c) => vec![c],
            Sentence::Conj(l, r) | Sentence::Disj(l, r) => vec![l, r],
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Sentence::Atom(_) | Sentence::Bot => 1,
            Sentence::Neg(c) => 1 + c.size(),
            Sentence::Conj(l, r) | Sentence::Disj(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Sentence::Atom(_) | Sentence::Bot => 0,
            Sentence::Neg(c) => 1 + c.depth(),
            Sentence::Conj(l, r) | Sentence::Disj(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Variable names occurring in the sentence, sorted.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut BTreeSet<String>) {
        match self {
            Sentence::Atom(name) => {
                out.insert(name.to_string());
            }
            Sentence::Bot => {}
            Sentence::Neg(c) => c.collect_variables(out),
            Sentence::Conj(l, r) | Sentence::Disj(l, r) => {
                l.collect_variables(out);
                r.collect_variables(out);
            }
        }
    }

    /// Binding strength used by the printer: `|` = 1, `&` = 2, unary = 3.
    fn precedence(&self) -> u8 {
        match self {
            Sentence::Disj(..) => 1,
            Sentence::Conj(..) => 2,
            Sentence::Neg(_) | Sentence::Atom(_) | Sentence::Bot => 3,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let paren = self.precedence() < min_prec;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Sentence::Atom(name) => f.write_str(name)?,
            Sentence::Bot => f.write_str("_|_")?,
            Sentence::Neg(c) => {
                f.write_str("!")?;
                c.write_at(f, 3)?;
            }
            // Left-associative: the left operand may share the operator's
            // precedence, the right operand must bind tighter.
            Sentence::Conj(l, r) => {
                l.write_at(f, 2)?;
                f.write_str(" & ")?;
                r.write_at(f, 3)?;
            }
            Sentence::Disj(l, r) => {
                l.write_at(f, 1)?;
                f.write_str(" | ")?;
                r.write_at(f, 2)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Prints with minimal parentheses; `parse_sentence` inverts it.
pub fn print_sentence(s: &Sentence) -> String {
    s.to_string()
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl fmt::Debug for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl serde::Serialize for Sentence {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Sentence {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_sentence(&text).map_err(serde::de::Error::custom)
    }
}

/// Canonical order: AST size first, then the printed form.
impl Ord for Sentence {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.size()
            .cmp(&other.size())
            .then_with(|| self.to_string().cmp(&other.to_string()))
    }
}

impl PartialOrd for Sentence {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The information labelling a tree root: a sentence, or `*` for none.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Root {
    Star,
    Info(Sentence),
}

impl Root {
    pub fn sentence(&self) -> Option<&Sentence> {
        match self {
            Root::Star => None,
            Root::Info(s) => Some(s),
        }
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Root::Star => f.write_str("*"),
            Root::Info(s) => s.fmt(f),
        }
    }
}

impl fmt::Debug for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl From<Sentence> for Root {
    fn from(s: Sentence) -> Self {
        Root::Info(s)
    }
}

/// The closure `S(Γ)` of a set of sentences under immediate subsentences,
/// in canonical order.
pub fn subsentences<'a, I>(set: I) -> Vec<Sentence>
where
    I: IntoIterator<Item = &'a Sentence>,
{
    let mut seen = BTreeSet::new();
    let mut stack: Vec<&Sentence> = set.into_iter().collect();
    while let Some(s) = stack.pop() {
        if seen.insert(s.clone()) {
            stack.extend(s.children());
        }
    }
    seen.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LanguageError {
    #[error("the variable list is empty")]
    Empty,
    #[error("variable `{0}` is listed twice")]
    Duplicate(String),
    #[error("`{0}` is not a valid variable name")]
    InvalidName(String),
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "_|_"
}

/// The `2^n` atoms of the language: conjunctions of literals in variable
/// order, positive literal first (`[p, q]` gives `p & q, p & !q, !p & q, !p & !q`).
pub fn atoms_of_language(vars: &[&str]) -> Result<Vec<Sentence>, LanguageError> {
    if vars.is_empty() {
        return Err(LanguageError::Empty);
    }
    let mut seen = BTreeSet::new();
    for v in vars {
        if !is_identifier(v) {
            return Err(LanguageError::InvalidName(v.to_string()));
        }
        if !seen.insert(*v) {
            return Err(LanguageError::Duplicate(v.to_string()));
        }
    }
    let n = vars.len();
    let atoms = (0..1usize << n)
        .map(|mask| {
            let literals = vars.iter().enumerate().map(|(i, v)| {
                let negative = (mask >> (n - 1 - i)) & 1 == 1;
                let a = Sentence::atom(v);
                if negative {
                    Sentence::neg(a)
                } else {
                    a
                }
            });
            Sentence::conj_all(literals).expect("non-empty variable list")
        })
        .collect();
    Ok(atoms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> Sentence {
        parse_sentence(text).unwrap()
    }

    #[test]
    fn printing_uses_minimal_parentheses() {
        assert_eq!(Sentence::conj(p("p"), p("q")).to_string(), "p & q");
        assert_eq!(Sentence::neg(Sentence::Bot).to_string(), "!_|_");
        assert_eq!(
            Sentence::disj(Sentence::conj(p("p"), p("q")), p("r")).to_string(),
            "p & q | r"
        );
        assert_eq!(p("p & (q | r)").to_string(), "p & (q | r)");
        assert_eq!(p("p | (q | r)").to_string(), "p | (q | r)");
        assert_eq!(p("(p | q) | r").to_string(), "p | q | r");
        assert_eq!(p("!(p & q)").to_string(), "!(p & q)");
        assert_eq!(p("!!p").to_string(), "!!p");
    }

    #[test]
    fn subsentence_closure() {
        let conj = p("p & q");
        assert_eq!(subsentences([&conj]), vec![p("p"), p("q"), conj.clone()]);
        let n = p("!(p | q)");
        assert_eq!(
            subsentences([&n]),
            vec![p("p"), p("q"), p("p | q"), n.clone()]
        );
        let a = p("p");
        assert_eq!(subsentences([&a, &conj]), vec![p("p"), p("q"), conj]);
        assert!(subsentences([&Sentence::Bot]) == vec![Sentence::Bot]);
    }

    #[test]
    fn atoms_in_fixed_order() {
        assert_eq!(atoms_of_language(&["p"]).unwrap(), vec![p("p"), p("!p")]);
        assert_eq!(
            atoms_of_language(&["p", "q"]).unwrap(),
            vec![p("p & q"), p("p & !q"), p("!p & q"), p("!p & !q")]
        );
        assert_eq!(atoms_of_language(&["p", "q", "r"]).unwrap().len(), 8);
        assert_eq!(atoms_of_language(&[]), Err(LanguageError::Empty));
        assert_eq!(
            atoms_of_language(&["p", "p"]),
            Err(LanguageError::Duplicate("p".into()))
        );
    }

    #[test]
    fn canonical_order_is_size_then_text() {
        let mut v = vec![p("q & r"), p("q"), p("!p"), p("p")];
        v.sort();
        assert_eq!(v, vec![p("p"), p("q"), p("!p"), p("q & r")]);
    }
}
