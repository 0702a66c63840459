//! Depth-bounded trees and forests of hypothetical information, their
//! closure and maximality, and the uniform analytic candidates the solver
//! searches over.

mod tree;

use std::collections::{BTreeMap, HashMap};

pub use tree::{NodeId, Tree, TreeNode};

use crate::proof::{Reasoner, Saturation};
use crate::syntax::{
    is_classically_inconsistent, subsentences, BruteForceLimit, OracleError, Root, Sentence,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ForestError {
    #[error("the support is empty")]
    EmptySupport,
    #[error("every support sentence is 0-inconsistent")]
    AllInconsistent,
    #[error("`*` must be the only support element")]
    StarNotAlone,
    #[error("node {0} does not exist")]
    UnknownNode(NodeId),
    #[error("node {0} is not a leaf")]
    NotALeaf(NodeId),
    #[error("tree {0} is not closed and must branch at least one leaf")]
    TreeMustGrow(usize),
    #[error("tree {tree} must branch at least one leaf of depth {stage}")]
    MissingDeepest { tree: usize, stage: usize },
    #[error("tree {0} stopped growing at an earlier stage")]
    StoppedTree(usize),
    #[error("forests differ in support or stage")]
    Mismatch,
    #[error("malformed forest: {0}")]
    Malformed(String),
}

/// A leaf of a forest together with its information.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leaf {
    pub id: NodeId,
    pub tree: usize,
    pub depth: usize,
    pub info: Root,
}

/// One tree per support element, all at the same stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest {
    supp: Vec<Root>,
    trees: Vec<Tree>,
    stage: usize,
    next_id: NodeId,
}

fn zero_inconsistent(root: &Root) -> bool {
    match root {
        Root::Star => false,
        Root::Info(s) => Saturation::new(std::slice::from_ref(s), &[]).is_inconsistent(),
    }
}

fn dedup_support(supp: &[Root]) -> Result<Vec<Root>, ForestError> {
    let mut out: Vec<Root> = Vec::new();
    for r in supp {
        if !out.contains(r) {
            out.push(r.clone());
        }
    }
    if out.is_empty() {
        return Err(ForestError::EmptySupport);
    }
    if out.len() > 1 && out.contains(&Root::Star) {
        return Err(ForestError::StarNotAlone);
    }
    if out.iter().all(zero_inconsistent) {
        return Err(ForestError::AllInconsistent);
    }
    Ok(out)
}

/// The stage-0 forest: one single-node tree per distinct support element.
pub fn new_forest(supp: &[Root]) -> Result<Forest, ForestError> {
    let supp = dedup_support(supp)?;
    let trees = supp
        .iter()
        .enumerate()
        .map(|(i, r)| Tree::with_root_id(r.clone(), i))
        .collect();
    Ok(Forest {
        next_id: supp.len(),
        supp,
        trees,
        stage: 0,
    })
}

impl Forest {
    /// Assembles a forest from trees, e.g. after deserialization. Node ids
    /// must be distinct across trees and `stage` at least the deepest tree.
    pub fn from_trees(trees: Vec<Tree>, stage: Option<usize>) -> Result<Forest, ForestError> {
        let roots: Vec<Root> = trees.iter().map(|t| t.root().clone()).collect();
        let supp = dedup_support(&roots)?;
        if supp.len() != roots.len() {
            return Err(ForestError::Malformed("duplicate tree roots".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for t in &trees {
            for n in t.nodes() {
                if !seen.insert(n.id) {
                    return Err(ForestError::Malformed(format!("node id {} is reused", n.id)));
                }
            }
        }
        let depth = trees.iter().map(Tree::depth).max().unwrap_or(0);
        let stage = stage.unwrap_or(depth);
        if stage < depth {
            return Err(ForestError::Malformed(format!(
                "stage {stage} is below the tree depth {depth}"
            )));
        }
        Ok(Forest {
            next_id: seen.last().map_or(0, |m| m + 1),
            supp,
            trees,
            stage,
        })
    }

    pub fn supp(&self) -> &[Root] {
        &self.supp
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    /// The tree index and node for `id`.
    pub fn node(&self, id: NodeId) -> Option<(usize, &TreeNode)> {
        self.trees
            .iter()
            .enumerate()
            .find_map(|(i, t)| t.node(id).map(|n| (i, n)))
    }

    /// `Le(F)` in canonical order: tree index, then node id.
    pub fn leaves(&self) -> Vec<Leaf> {
        self.trees
            .iter()
            .enumerate()
            .flat_map(|(i, t)| {
                t.leaves().map(move |n| Leaf {
                    id: n.id,
                    tree: i,
                    depth: n.depth,
                    info: n.information().clone(),
                })
            })
            .collect()
    }

    /// Branches the chosen leaves, producing the next stage. Every tree
    /// must either branch a leaf at the current stage's depth or already be
    /// closed for `agenda`; closed trees may stop growing.
    pub fn expand(
        &self,
        choices: &BTreeMap<NodeId, Sentence>,
        agenda: &[Sentence],
        reasoner: &Reasoner,
    ) -> Result<Forest, ForestError> {
        let mut per_tree: Vec<Vec<(NodeId, &Sentence)>> = vec![Vec::new(); self.trees.len()];
        for (&id, beta) in choices {
            let (t, node) = self.node(id).ok_or(ForestError::UnknownNode(id))?;
            if !node.is_leaf() {
                return Err(ForestError::NotALeaf(id));
            }
            per_tree[t].push((id, beta));
        }
        for (t, chosen) in per_tree.iter().enumerate() {
            let tree = &self.trees[t];
            let stopped = tree.depth() < self.stage;
            if chosen.is_empty() {
                if !stopped && !tree_is_closed(tree, agenda, reasoner) {
                    return Err(ForestError::TreeMustGrow(t));
                }
            } else if stopped {
                return Err(ForestError::StoppedTree(t));
            } else if !chosen
                .iter()
                .any(|(id, _)| tree.node(*id).unwrap().depth == self.stage)
            {
                return Err(ForestError::MissingDeepest {
                    tree: t,
                    stage: self.stage,
                });
            }
        }
        let mut next = self.clone();
        for (t, chosen) in per_tree.into_iter().enumerate() {
            for (id, beta) in chosen {
                next.trees[t].branch(id, beta, &mut next.next_id)?;
            }
        }
        next.stage += 1;
        Ok(next)
    }
}

/// Every leaf of `tree` decides every agenda formula.
pub fn tree_is_closed(tree: &Tree, agenda: &[Sentence], reasoner: &Reasoner) -> bool {
    tree.leaves().all(|n| {
        agenda
            .iter()
            .all(|phi| reasoner.decides(n.information(), phi).is_decided())
    })
}

/// `{target}`-closure of every tree.
pub fn is_closed(forest: &Forest, target: &Sentence, reasoner: &Reasoner) -> bool {
    forest
        .trees()
        .iter()
        .all(|t| tree_is_closed(t, std::slice::from_ref(target), reasoner))
}

fn deciding_leaves(tree: &Tree, target: &Sentence, reasoner: &Reasoner) -> usize {
    tree.leaves()
        .filter(|n| reasoner.decides(n.information(), target).is_decided())
        .count()
}

/// No candidate has a same-root tree with strictly more leaves deciding
/// `target`.
pub fn is_maximal(
    forest: &Forest,
    target: &Sentence,
    candidates: &[Forest],
    reasoner: &Reasoner,
) -> Result<bool, ForestError> {
    if candidates
        .iter()
        .any(|c| c.supp() != forest.supp() || c.stage() != forest.stage())
    {
        return Err(ForestError::Mismatch);
    }
    for (i, tree) in forest.trees().iter().enumerate() {
        let own = deciding_leaves(tree, target, reasoner);
        if candidates
            .iter()
            .any(|c| deciding_leaves(&c.trees()[i], target, reasoner) > own)
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Maximality for each agenda formula separately.
pub fn is_strictly_maximal(
    forest: &Forest,
    agenda: &[Sentence],
    candidates: &[Forest],
    reasoner: &Reasoner,
) -> Result<bool, ForestError> {
    for phi in agenda {
        if !is_maximal(forest, phi, candidates, reasoner)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Leaves that are classically inconsistent yet not 0-inconsistent.
pub fn deep_contradictions(
    forest: &Forest,
    limit: BruteForceLimit,
    reasoner: &Reasoner,
) -> Result<Vec<NodeId>, OracleError> {
    let mut out = Vec::new();
    for leaf in forest.leaves() {
        if let Root::Info(s) = &leaf.info {
            if is_classically_inconsistent(s, limit)? && !reasoner.inconsistent(&leaf.info) {
                out.push(leaf.id);
            }
        }
    }
    Ok(out)
}

pub fn free_of_deep_contradictions(
    forest: &Forest,
    limit: BruteForceLimit,
    reasoner: &Reasoner,
) -> Result<bool, OracleError> {
    Ok(deep_contradictions(forest, limit, reasoner)?.is_empty())
}

/// Counts of deciding leaves per (tree, agenda formula), tree-major.
pub fn decision_profile(forest: &Forest, agenda: &[Sentence], reasoner: &Reasoner) -> Vec<usize> {
    forest
        .trees()
        .iter()
        .flat_map(|t| agenda.iter().map(move |phi| deciding_leaves(t, phi, reasoner)))
        .collect()
}

/// Subsentences of the support's sentences, canonically ordered.
pub fn analytic_pool(supp: &[Root]) -> Vec<Sentence> {
    subsentences(supp.iter().filter_map(Root::sentence))
}

/// Every uniform analytic forest of depth `k` over `supp`, in canonical
/// order. A skeleton of `2^k - 1` heap-ordered positions, each holding a
/// formula from the analytic pool, is replicated under every root; trees
/// closed for `agenda` stop growing and the positions they would have used
/// are not enumerated.
pub fn enumerate_uniform_analytic(
    supp: &[Root],
    k: usize,
    agenda: Option<&[Sentence]>,
    reasoner: &Reasoner,
) -> Result<Vec<Forest>, ForestError> {
    let pool = analytic_pool(supp);
    let agenda = agenda.map_or_else(|| pool.clone(), <[Sentence]>::to_vec);
    let start = new_forest(supp)?;
    let positions: HashMap<NodeId, usize> = start.trees.iter().map(|t| (t.root_id(), 0)).collect();
    let mut out = Vec::new();
    let ctx = Enumeration {
        pool: &pool,
        agenda: &agenda,
        k,
        reasoner,
    };
    ctx.descend(start, positions, &mut out);
    Ok(out)
}

struct Enumeration<'a> {
    pool: &'a [Sentence],
    agenda: &'a [Sentence],
    k: usize,
    reasoner: &'a Reasoner,
}

impl Enumeration<'_> {
    fn descend(&self, forest: Forest, positions: HashMap<NodeId, usize>, out: &mut Vec<Forest>) {
        if forest.stage == self.k {
            out.push(forest);
            return;
        }
        let stage = forest.stage;
        let growing: Vec<usize> = (0..forest.trees.len())
            .filter(|&t| {
                let tree = &forest.trees[t];
                tree.depth() == stage && !tree_is_closed(tree, self.agenda, self.reasoner)
            })
            .collect();
        if growing.is_empty() || self.pool.is_empty() {
            let mut done = forest;
            done.stage = self.k;
            out.push(done);
            return;
        }
        // Skeleton positions on this level, and the leaves sitting on them.
        let first = (1usize << stage) - 1;
        let width = 1usize << stage;
        let mut slots: Vec<Vec<NodeId>> = vec![Vec::new(); width];
        for &t in &growing {
            for n in forest.trees[t].leaves().filter(|n| n.depth == stage) {
                slots[positions[&n.id] - first].push(n.id);
            }
        }
        let mut digits = vec![0usize; width];
        loop {
            let mut next = forest.clone();
            let mut next_pos = positions.clone();
            // Allocate in node-id order so equal forests get equal ids.
            let mut order: Vec<(NodeId, usize)> = slots
                .iter()
                .enumerate()
                .flat_map(|(slot, ids)| ids.iter().map(move |&id| (id, slot)))
                .collect();
            order.sort_unstable();
            for (id, slot) in order {
                let t = next.node(id).unwrap().0;
                let beta = &self.pool[digits[slot]];
                let (pos, neg) = next.trees[t].branch(id, beta, &mut next.next_id).unwrap();
                let p = first + slot;
                next_pos.insert(pos, 2 * p + 1);
                next_pos.insert(neg, 2 * p + 2);
            }
            next.stage += 1;
            self.descend(next, next_pos, out);

            // Odometer with the first slot most significant.
            let mut i = width;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < self.pool.len() {
                    break;
                }
                digits[i] = 0;
            }
        }
    }
}

/// Candidates not Pareto-dominated on their decision profiles, in input
/// order. Never empty for a nonempty input.
pub fn select_pareto_maximal<'a>(
    candidates: &'a [Forest],
    agenda: &[Sentence],
    reasoner: &Reasoner,
) -> Vec<&'a Forest> {
    let profiles: Vec<Vec<usize>> = candidates
        .iter()
        .map(|f| decision_profile(f, agenda, reasoner))
        .collect();
    let mut distinct: Vec<&Vec<usize>> = profiles.iter().collect();
    distinct.sort();
    distinct.dedup();
    let dominated = |p: &Vec<usize>| {
        distinct
            .iter()
            .any(|q| *q != p && q.iter().zip(p).all(|(a, b)| a >= b))
    };
    let keep: Vec<&Vec<usize>> = distinct.iter().copied().filter(|p| !dominated(p)).collect();
    candidates
        .iter()
        .zip(&profiles)
        .filter(|(_, p)| keep.contains(p))
        .map(|(f, _)| f)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_sentence;

    fn p(text: &str) -> Sentence {
        parse_sentence(text).unwrap()
    }

    fn info(text: &str) -> Root {
        Root::Info(p(text))
    }

    fn choose(pairs: &[(NodeId, &str)]) -> BTreeMap<NodeId, Sentence> {
        pairs.iter().map(|(id, s)| (*id, p(s))).collect()
    }

    fn leaf_texts(f: &Forest) -> Vec<String> {
        f.leaves().iter().map(|l| l.info.to_string()).collect()
    }

    #[test]
    fn support_validation() {
        assert_eq!(new_forest(&[]), Err(ForestError::EmptySupport));
        assert_eq!(new_forest(&[info("p & !p")]), Err(ForestError::AllInconsistent));
        assert_eq!(new_forest(&[Root::Star, info("p")]), Err(ForestError::StarNotAlone));
        let f = new_forest(&[Root::Star, Root::Star]).unwrap();
        assert_eq!(f.trees().len(), 1);
        let f = new_forest(&[info("p"), info("p & !p")]).unwrap();
        assert_eq!(leaf_texts(&f), ["p", "p & !p"]);
    }

    #[test]
    fn example_trees_of_depth_two() {
        let r = Reasoner::new();
        let f = new_forest(&[Root::Star]).unwrap();
        let f1 = f.expand(&choose(&[(0, "p")]), &[], &r).unwrap();
        assert_eq!(leaf_texts(&f1), ["p", "!p"]);

        let full = f1.expand(&choose(&[(1, "q"), (2, "q")]), &[], &r).unwrap();
        assert_eq!(leaf_texts(&full), ["p & q", "p & !q", "!p & q", "!p & !q"]);

        let partial = f1.expand(&choose(&[(1, "q")]), &[], &r).unwrap();
        assert_eq!(leaf_texts(&partial), ["!p", "p & q", "p & !q"]);
        assert_eq!(partial.stage(), 2);

        // Depth 3 now requires branching one of the depth-2 nodes.
        assert_eq!(
            partial.expand(&choose(&[(2, "r")]), &[], &r),
            Err(ForestError::MissingDeepest { tree: 0, stage: 2 })
        );
        assert_eq!(
            f1.expand(&choose(&[(0, "q")]), &[], &r),
            Err(ForestError::NotALeaf(0))
        );
        assert_eq!(
            f1.expand(&choose(&[(9, "q")]), &[], &r),
            Err(ForestError::UnknownNode(9))
        );
    }

    #[test]
    fn closed_trees_may_stop_growing() {
        let r = Reasoner::new();
        let target = p("(p | !p) | q");
        let f = new_forest(&[info("p"), info("q | r")]).unwrap();
        assert_eq!(
            f.expand(&BTreeMap::new(), std::slice::from_ref(&target), &r),
            Err(ForestError::TreeMustGrow(1))
        );
        let f1 = f
            .expand(&choose(&[(1, "p")]), std::slice::from_ref(&target), &r)
            .unwrap();
        assert_eq!(leaf_texts(&f1), ["p", "(q | r) & p", "(q | r) & !p"]);
        assert_eq!(
            f1.expand(&choose(&[(0, "q")]), &[], &r),
            Err(ForestError::StoppedTree(0))
        );
    }

    #[test]
    fn closure_and_maximality() {
        let r = Reasoner::new();
        let target = p("(p | !p) | q");
        let star = new_forest(&[Root::Star]).unwrap();
        let on_p = star.expand(&choose(&[(0, "p")]), &[], &r).unwrap();
        let on_q = star.expand(&choose(&[(0, "q")]), &[], &r).unwrap();
        assert!(is_closed(&on_p, &target, &r));
        assert!(!is_closed(&on_q, &target, &r));
        let both = [on_p.clone(), on_q.clone()];
        assert!(is_maximal(&on_p, &target, &both, &r).unwrap());
        assert!(!is_maximal(&on_q, &target, &both, &r).unwrap());
        assert!(is_maximal(&on_q, &target, std::slice::from_ref(&on_q), &r).unwrap());
        assert_eq!(
            is_maximal(&on_q, &target, std::slice::from_ref(&star), &r),
            Err(ForestError::Mismatch)
        );
        assert!(is_strictly_maximal(&on_p, &[target, p("p")], &both, &r).unwrap());
    }

    #[test]
    fn deep_contradiction_screening() {
        let r = Reasoner::new();
        let lim = BruteForceLimit::default();
        let shallow = new_forest(&[info("(p | q) & !p & !q"), info("p")]).unwrap();
        assert!(free_of_deep_contradictions(&shallow, lim, &r).unwrap());
        let deep = new_forest(&[info("(p | q) & (!p | q) & (p | !q) & (!p | !q)")]).unwrap();
        assert!(!free_of_deep_contradictions(&deep, lim, &r).unwrap());
        let literals = new_forest(&[info("p & !q"), info("!p & q")]).unwrap();
        assert!(free_of_deep_contradictions(&literals, lim, &r).unwrap());
    }

    #[test]
    fn uniform_enumeration() {
        let r = Reasoner::new();
        let supp = [info("p | q"), info("s | r")];
        let pool = analytic_pool(&supp);
        let forests = enumerate_uniform_analytic(&supp, 1, None, &r).unwrap();
        assert_eq!(forests.len(), pool.len());
        let uniform_p = forests
            .iter()
            .find(|f| leaf_texts(f) == ["(p | q) & p", "(p | q) & !p", "(s | r) & p", "(s | r) & !p"])
            .expect("both roots branch on p");
        assert_eq!(uniform_p.stage(), 1);
        let mixed = ["(p | q) & p", "(p | q) & !p", "(s | r) & s", "(s | r) & !s"];
        assert!(forests.iter().all(|f| leaf_texts(f) != mixed));

        let deeper = enumerate_uniform_analytic(&supp, 2, None, &r).unwrap();
        assert!(deeper.len() <= pool.len().pow(3));
        assert!(deeper.iter().all(|f| f.stage() == 2));
        let mut distinct = deeper.clone();
        distinct.dedup();
        assert_eq!(distinct.len(), deeper.len());
    }

    #[test]
    fn closed_roots_do_not_branch() {
        let r = Reasoner::new();
        let forests = enumerate_uniform_analytic(&[info("p")], 2, None, &r).unwrap();
        assert_eq!(forests.len(), 1);
        assert_eq!(leaf_texts(&forests[0]), ["p"]);
        assert_eq!(forests[0].stage(), 2);
    }

    #[test]
    fn pareto_selection() {
        let r = Reasoner::new();
        let supp = [info("p"), info("q")];
        let agenda = [p("p"), p("q")];
        let forests = enumerate_uniform_analytic(&supp, 1, Some(&agenda), &r).unwrap();
        assert_eq!(forests.len(), 2);
        let kept = select_pareto_maximal(&forests, &agenda, &r);
        assert_eq!(kept.len(), 2);

        let target = [p("(p | !p) | q")];
        let star = new_forest(&[Root::Star]).unwrap();
        let on_p = star.expand(&choose(&[(0, "p")]), &[], &r).unwrap();
        let on_q = star.expand(&choose(&[(0, "q")]), &[], &r).unwrap();
        let cands = [on_q, on_p.clone()];
        assert_eq!(select_pareto_maximal(&cands, &target, &r), vec![&on_p]);
        assert_eq!(select_pareto_maximal(&cands[..1], &target, &r).len(), 1);
    }

    #[test]
    fn records_round_trip() {
        let r = Reasoner::new();
        let f = new_forest(&[info("a"), info("b")]).unwrap();
        let f = f.expand(&choose(&[(0, "c"), (1, "c")]), &[], &r).unwrap();
        let rebuilt: Vec<Tree> = f
            .trees()
            .iter()
            .map(|t| {
                let recs: Vec<_> = t.nodes().map(|n| (n.id, n.parent, n.branch.clone())).collect();
                Tree::from_records(t.root().clone(), &recs).unwrap()
            })
            .collect();
        assert_eq!(Forest::from_trees(rebuilt, Some(1)).unwrap(), f);
    }
}
