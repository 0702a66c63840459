//! Mass functions over forest leaves, depth-bounded mass sequences, and
//! the belief and plausibility they induce.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::forest::{new_forest, deep_contradictions, Forest, ForestError, NodeId};
use crate::proof::Reasoner;
use crate::syntax::{atoms_of_language, BruteForceLimit, LanguageError, OracleError, Root, Sentence};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BeliefError {
    #[error(transparent)]
    Forest(#[from] ForestError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Language(#[from] LanguageError),
    #[error("node {0} is not a leaf of the forest")]
    UnknownLeaf(NodeId),
    #[error("leaf {0} has negative mass")]
    Negative(NodeId),
    #[error("masses sum to {0}, not 1")]
    SumNotOne(BigRational),
    #[error("leaf {0} is 0-inconsistent but has nonzero mass")]
    MassOnInconsistent(NodeId),
    #[error("leaf {0} is classically but not 0-depth inconsistent")]
    DeepContradiction(NodeId),
    #[error("no split given for branched leaf {0}")]
    MissingSplit(NodeId),
    #[error("split of leaf {0} does not sum to its mass")]
    SplitMismatch(NodeId),
    #[error("both children of leaf {0} are 0-inconsistent but it carries mass")]
    BothChildrenInconsistent(NodeId),
    #[error("not a distribution over atoms: {0}")]
    NotADistribution(String),
}

/// Exact nonnegative weights on the leaves of one forest, summing to 1 and
/// vanishing on 0-inconsistent leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MassFunction {
    weights: BTreeMap<NodeId, BigRational>,
}

impl MassFunction {
    /// Leaves absent from `weights` get mass 0.
    pub fn new(
        forest: &Forest,
        weights: BTreeMap<NodeId, BigRational>,
        reasoner: &Reasoner,
    ) -> Result<MassFunction, BeliefError> {
        let leaves: BTreeMap<NodeId, Root> =
            forest.leaves().into_iter().map(|l| (l.id, l.info)).collect();
        let mut sum = BigRational::zero();
        for (id, w) in &weights {
            let info = leaves.get(id).ok_or(BeliefError::UnknownLeaf(*id))?;
            if w < &BigRational::zero() {
                return Err(BeliefError::Negative(*id));
            }
            if !w.is_zero() && reasoner.inconsistent(info) {
                return Err(BeliefError::MassOnInconsistent(*id));
            }
            sum += w;
        }
        if !sum.is_one() {
            return Err(BeliefError::SumNotOne(sum));
        }
        let weights = leaves
            .keys()
            .map(|id| (*id, weights.get(id).cloned().unwrap_or_else(BigRational::zero)))
            .collect();
        Ok(MassFunction { weights })
    }

    pub fn weight(&self, id: NodeId) -> BigRational {
        self.weights.get(&id).cloned().unwrap_or_else(BigRational::zero)
    }

    /// One entry per leaf, in id order.
    pub fn weights(&self) -> &BTreeMap<NodeId, BigRational> {
        &self.weights
    }

    /// Total mass of the given leaves.
    pub fn total<'a>(&self, ids: impl IntoIterator<Item = &'a NodeId>) -> BigRational {
        ids.into_iter().map(|id| self.weight(*id)).sum()
    }
}

/// A forest free of deep contradictions together with a mass function on
/// its leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DbmStage {
    forest: Forest,
    mass: MassFunction,
}

impl DbmStage {
    pub fn new(
        forest: Forest,
        mass: MassFunction,
        limit: BruteForceLimit,
        reasoner: &Reasoner,
    ) -> Result<DbmStage, BeliefError> {
        if let Some(&id) = deep_contradictions(&forest, limit, reasoner)?.first() {
            return Err(BeliefError::DeepContradiction(id));
        }
        Ok(DbmStage { forest, mass })
    }

    pub fn forest(&self) -> &Forest {
        &self.forest
    }

    pub fn mass(&self) -> &MassFunction {
        &self.mass
    }

    pub fn stage(&self) -> usize {
        self.forest.stage()
    }
}

/// `Bₖ(φ)` and `Plₖ(φ)` with the leaves that witness them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeliefAssessment {
    pub query: Sentence,
    pub belief: BigRational,
    pub plausibility: BigRational,
    pub belief_witnesses: Vec<NodeId>,
    pub plausibility_witnesses: Vec<NodeId>,
}

/// `bₖ(φ)`: consistent leaves that 0-derive `query`.
pub fn b_set(forest: &Forest, query: &Sentence, reasoner: &Reasoner) -> Vec<NodeId> {
    forest
        .leaves()
        .into_iter()
        .filter(|l| reasoner.derives(&l.info, query) && !reasoner.inconsistent(&l.info))
        .map(|l| l.id)
        .collect()
}

/// `plₖ(φ)`: leaves that do not 0-derive `¬query`.
pub fn pl_set(forest: &Forest, query: &Sentence, reasoner: &Reasoner) -> Vec<NodeId> {
    let neg = query.negated();
    forest
        .leaves()
        .into_iter()
        .filter(|l| !reasoner.derives(&l.info, &neg))
        .map(|l| l.id)
        .collect()
}

/// Belief and plausibility of `query` under `mass`, with no screening for
/// deep contradictions.
pub fn assess(
    forest: &Forest,
    mass: &MassFunction,
    query: &Sentence,
    reasoner: &Reasoner,
) -> BeliefAssessment {
    let belief_witnesses = b_set(forest, query, reasoner);
    let plausibility_witnesses = pl_set(forest, query, reasoner);
    BeliefAssessment {
        query: query.clone(),
        belief: mass.total(&belief_witnesses),
        plausibility: mass.total(&plausibility_witnesses),
        belief_witnesses,
        plausibility_witnesses,
    }
}

pub fn belief_and_plausibility(
    stage: &DbmStage,
    query: &Sentence,
    reasoner: &Reasoner,
) -> BeliefAssessment {
    assess(&stage.forest, &stage.mass, query, reasoner)
}

/// How a branched leaf's mass passes to its `β` and `¬β` children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Split {
    /// Halves, except that a 0-inconsistent child gets nothing and its
    /// sibling everything.
    Symmetric,
    /// Per branched leaf: mass of the `β` child, then of the `¬β` child.
    Explicit(BTreeMap<NodeId, (BigRational, BigRational)>),
}

/// The next stage of a mass sequence: branches the chosen leaves and
/// passes each parent's mass to its children; other leaves keep theirs.
pub fn refine(
    stage: &DbmStage,
    choices: &BTreeMap<NodeId, Sentence>,
    split: &Split,
    agenda: &[Sentence],
    limit: BruteForceLimit,
    reasoner: &Reasoner,
) -> Result<DbmStage, BeliefError> {
    let next = stage.forest.expand(choices, agenda, reasoner)?;
    let mut weights = BTreeMap::new();
    for leaf in stage.forest.leaves() {
        let m = stage.mass.weight(leaf.id);
        let Some((_, node)) = next.node(leaf.id) else {
            unreachable!("nodes persist across stages");
        };
        let Some((pos, neg)) = node.children else {
            weights.insert(leaf.id, m);
            continue;
        };
        let info = |id| next.node(id).unwrap().1.information().clone();
        let (pos_inc, neg_inc) = (reasoner.inconsistent(&info(pos)), reasoner.inconsistent(&info(neg)));
        let (a, b) = match split {
            Split::Symmetric => match (pos_inc, neg_inc) {
                (true, true) if !m.is_zero() => {
                    return Err(BeliefError::BothChildrenInconsistent(leaf.id))
                }
                (true, _) => (BigRational::zero(), m),
                (false, true) => (m, BigRational::zero()),
                (false, false) => {
                    let half = &m / BigRational::from_integer(2.into());
                    (half.clone(), half)
                }
            },
            Split::Explicit(parts) => {
                let (a, b) = parts.get(&leaf.id).ok_or(BeliefError::MissingSplit(leaf.id))?;
                if a + b != m {
                    return Err(BeliefError::SplitMismatch(leaf.id));
                }
                (a.clone(), b.clone())
            }
        };
        weights.insert(pos, a);
        weights.insert(neg, b);
    }
    let mass = MassFunction::new(&next, weights, reasoner)?;
    DbmStage::new(next, mass, limit, reasoner)
}

/// The `*`-rooted forest branching on each variable in turn, whose leaves
/// are exactly the atoms of the language, weighted by `distribution`.
pub fn atom_forest_embedding(
    distribution: &BTreeMap<Sentence, BigRational>,
    vars: &[&str],
    reasoner: &Reasoner,
) -> Result<DbmStage, BeliefError> {
    let atoms = atoms_of_language(vars)?;
    if let Some(extra) = distribution.keys().find(|s| !atoms.contains(s)) {
        return Err(BeliefError::NotADistribution(format!("`{extra}` is not an atom")));
    }
    let mut forest = new_forest(&[Root::Star])?;
    for var in vars {
        let beta = Sentence::atom(var);
        let choices = forest.leaves().into_iter().map(|l| (l.id, beta.clone())).collect();
        forest = forest.expand(&choices, &[], reasoner)?;
    }
    let mut weights = BTreeMap::new();
    for leaf in forest.leaves() {
        let atom = leaf.info.sentence().expect("branched at least once");
        let w = distribution.get(atom).cloned().unwrap_or_else(BigRational::zero);
        if w < BigRational::zero() {
            return Err(BeliefError::NotADistribution(format!("`{atom}` has negative mass")));
        }
        weights.insert(leaf.id, w);
    }
    let mass = MassFunction::new(&forest, weights, reasoner).map_err(|e| match e {
        BeliefError::SumNotOne(s) => BeliefError::NotADistribution(format!("masses sum to {s}")),
        other => other,
    })?;
    Ok(DbmStage { forest, mass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_sentence, parse_sentence_with, ParseOptions};

    fn p(text: &str) -> Sentence {
        parse_sentence(text).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn background(text: &str) -> Sentence {
        let opts = ParseOptions {
            desugar_implication: true,
        };
        parse_sentence_with(text, opts).unwrap()
    }

    fn ellsberg_gamma() -> Sentence {
        background("(Y -> !G & !R) & (R -> !G & !Y) & (G -> !R & !Y) & (Y | G | R)")
    }

    fn ellsberg(r: &Reasoner) -> DbmStage {
        let g = ellsberg_gamma();
        let supp = [
            Root::Info(Sentence::conj(p("Y | G"), g.clone())),
            Root::Info(Sentence::conj(p("R"), g)),
        ];
        let forest = new_forest(&supp).unwrap();
        let mass = MassFunction::new(&forest, BTreeMap::from([(0, q(2, 3)), (1, q(1, 3))]), r).unwrap();
        DbmStage::new(forest, mass, BruteForceLimit::default(), r).unwrap()
    }

    #[test]
    fn ellsberg_stage_zero() {
        let r = Reasoner::new();
        let s0 = ellsberg(&r);
        let bel = |t: &str| belief_and_plausibility(&s0, &p(t), &r).belief;
        assert_eq!(bel("Y | G"), q(2, 3));
        assert_eq!(bel("R"), q(1, 3));
        assert_eq!(belief_and_plausibility(&s0, &ellsberg_gamma(), &r).belief, q(1, 1));
        assert_eq!(bel("Y"), q(0, 1));
        assert_eq!(bel("G"), q(0, 1));
        assert_eq!(b_set(s0.forest(), &p("Y | G"), &r), vec![0]);
        assert!(b_set(s0.forest(), &p("Y"), &r).is_empty());
        assert_eq!(pl_set(s0.forest(), &p("Y"), &r), vec![0]);
        assert!(b_set(s0.forest(), &Sentence::Bot, &r).is_empty());
    }

    #[test]
    fn ellsberg_symmetric_split() {
        let r = Reasoner::new();
        let s0 = ellsberg(&r);
        let choices = BTreeMap::from([(0, p("Y"))]);
        let agenda = [p("Y"), p("G"), p("R")];
        let s1 = refine(&s0, &choices, &Split::Symmetric, &agenda, BruteForceLimit::default(), &r).unwrap();
        assert_eq!(s1.forest().leaves().len(), 3);
        for c in ["Y", "G", "R"] {
            let a = belief_and_plausibility(&s1, &p(c), &r);
            assert_eq!(a.belief, q(1, 3), "B1({c})");
            assert_eq!(a.plausibility, q(1, 3), "Pl1({c})");
        }
        assert_eq!(s1.mass().weight(1), q(1, 3));
    }

    #[test]
    fn variant_quarters() {
        let r = Reasoner::new();
        let g = background(
            "(Y -> !G & !R & !W) & (G -> !Y & !R & !W) & (R -> !Y & !G & !W) & (W -> !Y & !G & !R) & (Y | G | R | W)",
        );
        let supp = [
            Root::Info(Sentence::conj(p("Y | G"), g.clone())),
            Root::Info(Sentence::conj(p("W | R"), g)),
        ];
        let forest = new_forest(&supp).unwrap();
        let mass = MassFunction::new(&forest, BTreeMap::from([(0, q(1, 2)), (1, q(1, 2))]), &r).unwrap();
        let s0 = DbmStage::new(forest, mass, BruteForceLimit::default(), &r).unwrap();
        assert_eq!(belief_and_plausibility(&s0, &p("Y | G"), &r).belief, q(1, 2));
        assert_eq!(belief_and_plausibility(&s0, &p("W | R"), &r).belief, q(1, 2));
        let choices = BTreeMap::from([(0, p("Y")), (1, p("W"))]);
        let s1 = refine(&s0, &choices, &Split::Symmetric, &[], BruteForceLimit::default(), &r).unwrap();
        for c in ["Y", "G", "R", "W"] {
            assert_eq!(belief_and_plausibility(&s1, &p(c), &r).belief, q(1, 4), "B1({c})");
        }
    }

    #[test]
    fn explicit_and_forced_splits() {
        let r = Reasoner::new();
        let lim = BruteForceLimit::default();
        let forest = new_forest(&[Root::Info(p("p"))]).unwrap();
        let mass = MassFunction::new(&forest, BTreeMap::from([(0, q(1, 1))]), &r).unwrap();
        let s0 = DbmStage::new(forest, mass, lim, &r).unwrap();

        let on_q = BTreeMap::from([(0, p("q"))]);
        let edge = Split::Explicit(BTreeMap::from([(0, (q(1, 1), q(0, 1)))]));
        let s1 = refine(&s0, &on_q, &edge, &[], lim, &r).unwrap();
        assert_eq!(s1.mass().weight(1), q(1, 1));
        let bad = Split::Explicit(BTreeMap::from([(0, (q(1, 2), q(1, 3)))]));
        assert_eq!(refine(&s0, &on_q, &bad, &[], lim, &r), Err(BeliefError::SplitMismatch(0)));
        assert_eq!(
            refine(&s0, &on_q, &Split::Explicit(BTreeMap::new()), &[], lim, &r),
            Err(BeliefError::MissingSplit(0))
        );

        // Branching `p` on itself leaves `p & !p` with nothing.
        let on_p = BTreeMap::from([(0, p("p"))]);
        let s1 = refine(&s0, &on_p, &Split::Symmetric, &[], lim, &r).unwrap();
        assert_eq!((s1.mass().weight(1), s1.mass().weight(2)), (q(1, 1), q(0, 1)));
        let wrong = Split::Explicit(BTreeMap::from([(0, (q(1, 2), q(1, 2)))]));
        assert_eq!(
            refine(&s0, &on_p, &wrong, &[], lim, &r),
            Err(BeliefError::MassOnInconsistent(2))
        );
    }

    #[test]
    fn mass_validation() {
        let r = Reasoner::new();
        let forest = new_forest(&[Root::Info(p("p")), Root::Info(p("q & !q"))]).unwrap();
        let bad_sum = MassFunction::new(&forest, BTreeMap::from([(0, q(1, 2))]), &r);
        assert_eq!(bad_sum, Err(BeliefError::SumNotOne(q(1, 2))));
        let on_inc = MassFunction::new(&forest, BTreeMap::from([(0, q(1, 2)), (1, q(1, 2))]), &r);
        assert_eq!(on_inc, Err(BeliefError::MassOnInconsistent(1)));
        let neg = MassFunction::new(&forest, BTreeMap::from([(0, q(3, 2)), (1, q(-1, 2))]), &r);
        assert_eq!(neg, Err(BeliefError::Negative(1)));
        let unknown = MassFunction::new(&forest, BTreeMap::from([(7, q(1, 1))]), &r);
        assert_eq!(unknown, Err(BeliefError::UnknownLeaf(7)));

        let deep = new_forest(&[Root::Info(p("(p | q) & (!p | q) & (p | !q) & (!p | !q)")), Root::Info(p("r"))]).unwrap();
        let mass = MassFunction::new(&deep, BTreeMap::from([(1, q(1, 1))]), &r).unwrap();
        assert_eq!(
            DbmStage::new(deep, mass, BruteForceLimit::default(), &r),
            Err(BeliefError::DeepContradiction(0))
        );
    }

    #[test]
    fn atom_embedding() {
        let r = Reasoner::new();
        let dist = BTreeMap::from([(p("p"), q(1, 2)), (p("!p"), q(1, 2))]);
        let s = atom_forest_embedding(&dist, &["p"], &r).unwrap();
        assert_eq!(belief_and_plausibility(&s, &p("p"), &r).belief, q(1, 2));

        let atoms = atoms_of_language(&["p", "q"]).unwrap();
        let uniform: BTreeMap<_, _> = atoms.iter().map(|a| (a.clone(), q(1, 4))).collect();
        let s = atom_forest_embedding(&uniform, &["p", "q"], &r).unwrap();
        let leaves: Vec<Sentence> = s.forest().leaves().iter().map(|l| l.info.sentence().unwrap().clone()).collect();
        assert_eq!(leaves, atoms);
        assert_eq!(s.stage(), 2);
        assert_eq!(belief_and_plausibility(&s, &p("p | q"), &r).belief, q(3, 4));

        let not_atom = BTreeMap::from([(p("p | q"), q(1, 1))]);
        assert!(matches!(
            atom_forest_embedding(&not_atom, &["p", "q"], &r),
            Err(BeliefError::NotADistribution(_))
        ));
        let short = BTreeMap::from([(p("p & q"), q(1, 2))]);
        assert!(matches!(
            atom_forest_embedding(&short, &["p", "q"], &r),
            Err(BeliefError::NotADistribution(_))
        ));
    }

    #[test]
    fn duality_on_a_split_stage() {
        let r = Reasoner::new();
        let s0 = ellsberg(&r);
        let s1 = refine(&s0, &BTreeMap::from([(0, p("G"))]), &Split::Symmetric, &[], BruteForceLimit::default(), &r).unwrap();
        for t in ["Y", "G | R", "!Y & !R", "Y | !G"] {
            let a = belief_and_plausibility(&s1, &p(t), &r);
            let n = belief_and_plausibility(&s1, &p(t).negated(), &r);
            assert_eq!(a.plausibility, q(1, 1) - n.belief);
            assert!(a.belief <= a.plausibility);
        }
    }
}
