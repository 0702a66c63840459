use std::collections::{BTreeSet, HashMap};

use super::Saturation;
use crate::forest::{NodeId, Tree};
use crate::syntax::{subsentences, Root, Sentence};

#[derive(Debug, Clone)]
enum Outcome {
    Fails,
    /// Holds without a split at this level.
    Holds,
    /// Holds by splitting on the given sentence.
    Split(Sentence),
}

/// `Γ ⊢ₖ φ` for one `Γ` and `φ`, memoized across depths and premise sets.
/// Case splits draw on the subsentences of the original `Γ ∪ {φ}`.
#[derive(Debug)]
pub struct DepthSearch {
    base: Vec<Sentence>,
    goal: Sentence,
    pool: Vec<Sentence>,
    memo: HashMap<(Vec<Sentence>, usize), Outcome>,
    saturations: HashMap<Vec<Sentence>, Saturation>,
}

impl DepthSearch {
    pub fn new(premises: &[Root], goal: &Sentence) -> DepthSearch {
        let base: BTreeSet<Sentence> = premises.iter().filter_map(Root::sentence).cloned().collect();
        let pool = subsentences(base.iter().chain([goal]));
        DepthSearch {
            base: base.into_iter().collect(),
            goal: goal.clone(),
            pool,
            memo: HashMap::new(),
            saturations: HashMap::new(),
        }
    }

    /// The sentences case splits may branch on.
    pub fn pool(&self) -> &[Sentence] {
        &self.pool
    }

    pub fn derives(&mut self, k: usize) -> bool {
        let base = self.base.clone();
        self.holds(&base, k)
    }

    fn saturation(&mut self, set: &[Sentence]) -> &Saturation {
        if !self.saturations.contains_key(set) {
            let sat = Saturation::new(set, std::slice::from_ref(&self.goal));
            self.saturations.insert(set.to_vec(), sat);
        }
        &self.saturations[set]
    }

    fn holds(&mut self, set: &[Sentence], k: usize) -> bool {
        !matches!(self.outcome(set, k), Outcome::Fails)
    }

    fn outcome(&mut self, set: &[Sentence], k: usize) -> Outcome {
        let key = (set.to_vec(), k);
        if let Some(o) = self.memo.get(&key) {
            return o.clone();
        }
        let out = if k == 0 {
            let goal = self.goal.clone();
            if self.saturation(set).derives(&goal) {
                Outcome::Holds
            } else {
                Outcome::Fails
            }
        } else if self.holds(set, k - 1) {
            Outcome::Holds
        } else {
            self.split(set, k)
        };
        self.memo.insert(key, out.clone());
        out
    }

    fn split(&mut self, set: &[Sentence], k: usize) -> Outcome {
        for beta in self.pool.clone() {
            let neg = beta.negated();
            let sat = self.saturation(set);
            // Either side would collapse to `set` itself or to an
            // inconsistent extension of it.
            let settled = |s: &Sentence| set.contains(s) || (sat.covers(s) && sat.derives(s));
            if settled(&beta) || settled(&neg) {
                continue;
            }
            if self.holds(&extend(set, &beta), k - 1) && self.holds(&extend(set, &neg), k - 1) {
                return Outcome::Split(beta);
            }
        }
        Outcome::Fails
    }

    /// A tree rooted at `root` (one of the premises, or `*`) whose leaves
    /// each 0-derive the goal, built from the successful splits.
    fn build(&mut self, tree: &mut Tree, node: NodeId, set: Vec<Sentence>, k: usize, next: &mut NodeId) {
        let mut k = k;
        loop {
            match self.outcome(&set, k) {
                Outcome::Fails => unreachable!("only derivable sets are expanded"),
                Outcome::Holds if k == 0 => return,
                Outcome::Holds => k -= 1,
                Outcome::Split(beta) => {
                    let (pos, neg) = tree.branch(node, &beta, next).expect("fresh leaf");
                    let pos_set = extend(&set, &beta);
                    let neg_set = extend(&set, &beta.negated());
                    self.build(tree, pos, pos_set, k - 1, next);
                    self.build(tree, neg, neg_set, k - 1, next);
                    return;
                }
            }
        }
    }
}

fn extend(set: &[Sentence], s: &Sentence) -> Vec<Sentence> {
    let mut out = set.to_vec();
    if let Err(at) = out.binary_search(s) {
        out.insert(at, s.clone());
    }
    out
}

/// `Γ ⊢ₖ goal`.
pub fn derives_k(premises: &[Root], goal: &Sentence, k: usize) -> bool {
    DepthSearch::new(premises, goal).derives(k)
}

/// The least `k ≤ max_k` with `Γ ⊢ₖ goal`.
pub fn least_depth(premises: &[Root], goal: &Sentence, max_k: usize) -> Option<usize> {
    let mut search = DepthSearch::new(premises, goal);
    (0..=max_k).find(|&k| search.derives(k))
}

/// A tree of depth at most `k` rooted at `root` whose every leaf 0-derives
/// `goal`, when `root ⊢ₖ goal`.
pub fn witness_tree(root: &Root, goal: &Sentence, k: usize) -> Option<Tree> {
    let mut search = DepthSearch::new(std::slice::from_ref(root), goal);
    if !search.derives(k) {
        return None;
    }
    let mut tree = Tree::new(root.clone());
    let mut next = 1;
    let base = search.base.clone();
    search.build(&mut tree, 0, base, k, &mut next);
    Some(tree)
}
