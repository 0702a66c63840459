use std::collections::BTreeMap;

use super::ForestError;
use crate::syntax::{Root, Sentence};

/// Node identifier, unique within a forest and assigned in allocation order.
pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub id: NodeId,
    pub parent: Option<NodeId>,
    /// `β` or `¬β` for a child; `None` at the root.
    pub branch: Option<Sentence>,
    /// The `β` child, then the `¬β` child.
    pub children: Option<(NodeId, NodeId)>,
    pub depth: usize,
    info: Root,
}

impl TreeNode {
    /// The root information conjoined with every branch label on the path
    /// to this node, left-associated. Under a `*` root the first label
    /// stands alone.
    pub fn information(&self) -> &Root {
        &self.info
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }
}

/// One tree of hypothetical information grown from a root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    root: Root,
    root_id: NodeId,
    nodes: BTreeMap<NodeId, TreeNode>,
}

impl Tree {
    /// A single-node tree whose root has id 0.
    pub fn new(root: Root) -> Tree {
        Tree::with_root_id(root, 0)
    }

    pub(crate) fn with_root_id(root: Root, root_id: NodeId) -> Tree {
        let node = TreeNode {
            id: root_id,
            parent: None,
            branch: None,
            children: None,
            depth: 0,
            info: root.clone(),
        };
        Tree {
            root,
            root_id,
            nodes: BTreeMap::from([(root_id, node)]),
        }
    }

    pub fn root(&self) -> &Root {
        &self.root
    }

    pub fn root_id(&self) -> NodeId {
        self.root_id
    }

    pub fn node(&self, id: NodeId) -> Option<&TreeNode> {
        self.nodes.get(&id)
    }

    /// All nodes in id order.
    pub fn nodes(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes.values()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.nodes.contains_key(&id)
    }

    pub fn max_id(&self) -> NodeId {
        *self.nodes.keys().next_back().expect("a tree has a root")
    }

    /// Depth of the deepest node.
    pub fn depth(&self) -> usize {
        self.nodes.values().map(|n| n.depth).max().unwrap_or(0)
    }

    /// `Le(T)`, in id order.
    pub fn leaves(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes.values().filter(|n| n.is_leaf())
    }

    pub fn information(&self, id: NodeId) -> Option<&Root> {
        self.nodes.get(&id).map(|n| &n.info)
    }

    /// Replaces leaf `α` by children `α ∧ β` and `α ∧ ¬β`, allocating
    /// their ids from `next_id`.
    pub fn branch(
        &mut self,
        leaf: NodeId,
        beta: &Sentence,
        next_id: &mut NodeId,
    ) -> Result<(NodeId, NodeId), ForestError> {
        let parent = self.nodes.get(&leaf).ok_or(ForestError::UnknownNode(leaf))?;
        if !parent.is_leaf() {
            return Err(ForestError::NotALeaf(leaf));
        }
        let depth = parent.depth + 1;
        let extend = |label: &Sentence| match &parent.info {
            Root::Star => Root::Info(label.clone()),
            Root::Info(alpha) => Root::Info(Sentence::conj(alpha.clone(), label.clone())),
        };
        let neg = beta.negated();
        let (pos_info, neg_info) = (extend(beta), extend(&neg));
        let (pos_id, neg_id) = (*next_id, *next_id + 1);
        *next_id += 2;
        self.nodes.insert(
            pos_id,
            TreeNode {
                id: pos_id,
                parent: Some(leaf),
                branch: Some(beta.clone()),
                children: None,
                depth,
                info: pos_info,
            },
        );
        self.nodes.insert(
            neg_id,
            TreeNode {
                id: neg_id,
                parent: Some(leaf),
                branch: Some(neg),
                children: None,
                depth,
                info: neg_info,
            },
        );
        self.nodes.get_mut(&leaf).unwrap().children = Some((pos_id, neg_id));
        Ok((pos_id, neg_id))
    }

    /// Path labels from the root to `id`, root first.
    pub fn path(&self, id: NodeId) -> Vec<&Sentence> {
        let mut labels = Vec::new();
        let mut cur = self.nodes.get(&id);
        while let Some(node) = cur {
            labels.extend(node.branch.as_ref());
            cur = node.parent.and_then(|p| self.nodes.get(&p));
        }
        labels.reverse();
        labels
    }

    /// Rebuilds a tree from `(id, parent, branch)` records, checking that
    /// siblings are labelled `β` then `¬β`. Information is recomputed.
    pub fn from_records(
        root: Root,
        records: &[(NodeId, Option<NodeId>, Option<Sentence>)],
    ) -> Result<Tree, ForestError> {
        let roots: Vec<_> = records.iter().filter(|r| r.1.is_none()).collect();
        let [root_rec] = roots.as_slice() else {
            return Err(ForestError::Malformed("a tree needs exactly one root node".into()));
        };
        if root_rec.2.is_some() {
            return Err(ForestError::Malformed("the root node has no branch label".into()));
        }
        let mut children: BTreeMap<NodeId, Vec<(NodeId, &Sentence)>> = BTreeMap::new();
        let mut ids = std::collections::BTreeSet::new();
        for (id, parent, branch) in records {
            if !ids.insert(*id) {
                return Err(ForestError::Malformed(format!("node id {id} appears twice")));
            }
            if let Some(parent) = parent {
                let branch = branch.as_ref().ok_or_else(|| {
                    ForestError::Malformed(format!("node {id} lacks a branch label"))
                })?;
                children.entry(*parent).or_default().push((*id, branch));
            }
        }
        let mut tree = Tree::with_root_id(root, root_rec.0);
        let mut stack = vec![root_rec.0];
        let mut seen = 1;
        while let Some(id) = stack.pop() {
            let Some(kids) = children.get(&id) else {
                continue;
            };
            let mut kids = kids.clone();
            kids.sort_by_key(|k| k.0);
            let [(pos_id, beta), (neg_id, neg)] = kids.as_slice() else {
                return Err(ForestError::Malformed(format!(
                    "node {id} must have exactly two children"
                )));
            };
            if **neg != beta.negated() {
                return Err(ForestError::Malformed(format!(
                    "children of node {id} must be labelled `β` and `!β`"
                )));
            }
            let mut next = *pos_id;
            tree.branch(id, beta, &mut next)?;
            // `branch` allocates consecutive ids; re-key to the recorded ones.
            if *neg_id != *pos_id + 1 {
                tree.rekey(*pos_id + 1, *neg_id);
            }
            seen += 2;
            stack.push(*pos_id);
            stack.push(*neg_id);
        }
        if seen != records.len() {
            return Err(ForestError::Malformed(
                "some nodes are not reachable from the root".into(),
            ));
        }
        Ok(tree)
    }

    fn rekey(&mut self, from: NodeId, to: NodeId) {
        let mut node = self.nodes.remove(&from).expect("node exists");
        node.id = to;
        let parent = node.parent;
        self.nodes.insert(to, node);
        if let Some(p) = parent.and_then(|p| self.nodes.get_mut(&p)) {
            if let Some((pos, neg)) = p.children.as_mut() {
                if *pos == from {
                    *pos = to;
                }
                if *neg == from {
                    *neg = to;
                }
            }
        }
    }
}
