//! Rules that prune a signed tree down to an increasing subsequence.

use super::{Node, NodeId, Sign, SignedBinaryTree};
use crate::error::{Error, Result};

/// What a `Minus` node does with its two children.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Discard {
    KeepLeft,
    KeepRight,
    /// The node already lies inside a discarded subtree.
    Diamond,
}

/// One assignment per `Minus` node of a specific tree, indexed by node id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscardingRule {
    assignments: Vec<Option<Discard>>,
}

impl DiscardingRule {
    /// Validates that `assignments` fits `tree`: one entry per node, `Some`
    /// exactly on `Minus` nodes, and `Diamond` exactly on the `Minus` nodes
    /// lying in a subtree thrown away by a non-diamond ancestor.
    pub fn new(tree: &SignedBinaryTree, assignments: Vec<Option<Discard>>) -> Result<Self> {
        let rule = DiscardingRule { assignments };
        rule.check(tree)?;
        Ok(rule)
    }

    pub fn assignment(&self, id: NodeId) -> Option<Discard> {
        self.assignments.get(id.index()).copied().flatten()
    }

    pub fn assignments(&self) -> &[Option<Discard>] {
        &self.assignments
    }

    fn check(&self, tree: &SignedBinaryTree) -> Result<()> {
        if self.assignments.len() != tree.len_nodes() {
            return Err(Error::Structure(format!(
                "rule has {} entries for a tree with {} nodes",
                self.assignments.len(),
                tree.len_nodes()
            )));
        }
        let dead = discarded_mask(tree, &self.assignments);
        for (i, node) in tree.nodes().iter().enumerate() {
            let a = self.assignments[i];
            let ok = match (node, a) {
                (Node::Internal { sign: Sign::Minus, .. }, Some(Discard::Diamond)) => dead[i],
                (Node::Internal { sign: Sign::Minus, .. }, Some(_)) => !dead[i],
                (Node::Internal { sign: Sign::Minus, .. }, None) => false,
                (_, None) => true,
                (_, Some(_)) => false,
            };
            if !ok {
                return Err(Error::Structure(format!("assignment {a:?} does not fit node {i}")));
            }
        }
        Ok(())
    }
}

/// `dead[i]` iff node `i` sits inside a subtree discarded by an ancestor.
fn discarded_mask(tree: &SignedBinaryTree, assignments: &[Option<Discard>]) -> Vec<bool> {
    let mut dead = vec![false; tree.len_nodes()];
    for i in 0..tree.len_nodes() {
        if let Node::Internal { left, right, .. } = tree.nodes()[i] {
            let (l, r) = (left.index(), right.index());
            dead[l] = dead[i];
            dead[r] = dead[i];
            if !dead[i] {
                match assignments.get(i).copied().flatten() {
                    Some(Discard::KeepLeft) => dead[r] = true,
                    Some(Discard::KeepRight) => dead[l] = true,
                    _ => {}
                }
            }
        }
    }
    dead
}

fn live_leaves(tree: &SignedBinaryTree, dead: &[bool]) -> Vec<u32> {
    tree.nodes()
        .iter()
        .zip(dead)
        .filter_map(|(node, &d)| match node {
            Node::Leaf { rank } if !d => Some(*rank),
            _ => None,
        })
        .collect()
}

/// Leaves kept by the rule "at a `Minus` node keep the child with more
/// leaves, the left one on a tie", in increasing rank order.
pub fn selection_rule_tree(tree: &SignedBinaryTree) -> Vec<u32> {
    let nodes = tree.nodes();
    let mut dead = vec![false; nodes.len()];
    for i in 0..nodes.len() {
        if let Node::Internal { left, right, sign } = nodes[i] {
            let (l, r) = (left.index(), right.index());
            dead[l] = dead[i];
            dead[r] = dead[i];
            if sign == Sign::Minus {
                if tree.leaf_count(right) > tree.leaf_count(left) {
                    dead[l] = true;
                } else {
                    dead[r] = true;
                }
            }
        }
    }
    live_leaves(tree, &dead)
}

/// Builds the discarding rule that protects the `marked` leaves (1-based
/// ranks). A `Minus` node keeps the side holding marked leaves and keeps the
/// right side when neither does.
pub fn discarding_rule_from_marked(tree: &SignedBinaryTree, marked: &[u32]) -> Result<DiscardingRule> {
    let n = tree.n();
    let nodes = tree.nodes();
    let mut count = vec![0u32; nodes.len()];
    let mut is_marked = vec![false; n + 1];
    for &m in marked {
        if m == 0 || m as usize > n {
            return Err(Error::param("marked", format!("rank {m} outside 1..={n}")));
        }
        is_marked[m as usize] = true;
    }
    for i in (0..nodes.len()).rev() {
        count[i] = match nodes[i] {
            Node::Leaf { rank } => is_marked[rank as usize] as u32,
            Node::Internal { left, right, sign } => {
                let (a, b) = (count[left.index()], count[right.index()]);
                if sign == Sign::Minus && a > 0 && b > 0 {
                    return Err(Error::Contract(format!(
                        "marked leaves on both sides of the minus node {i}; they are not increasing"
                    )));
                }
                a + b
            }
        };
    }
    let mut assignments = vec![None; nodes.len()];
    let mut dead = vec![false; nodes.len()];
    for i in 0..nodes.len() {
        if let Node::Internal { left, right, sign } = nodes[i] {
            let (l, r) = (left.index(), right.index());
            dead[l] = dead[i];
            dead[r] = dead[i];
            if sign != Sign::Minus {
                continue;
            }
            let a = if dead[i] {
                Discard::Diamond
            } else if count[l] > 0 {
                dead[r] = true;
                Discard::KeepLeft
            } else {
                dead[l] = true;
                Discard::KeepRight
            };
            assignments[i] = Some(a);
        }
    }
    Ok(DiscardingRule { assignments })
}

/// Leaves outside every discarded subtree, in increasing rank order.
pub fn survivors(tree: &SignedBinaryTree, rule: &DiscardingRule) -> Result<Vec<u32>> {
    rule.check(tree)?;
    Ok(live_leaves(tree, &discarded_mask(tree, &rule.assignments)))
}
