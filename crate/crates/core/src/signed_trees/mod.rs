//! Signed binary trees: the finite-`n` shadow of a signed excursion seen
//! through `n` uniform sample points.
//!
//! Leaves are the sample points in left-to-right order. An internal node is
//! the lowest local minimum between two consecutive groups of points and
//! carries that minimum's sign. Reading the tree as a substitution
//! decomposition gives the permutation; reading it as a cotree (`Plus` =
//! join, `Minus` = disjoint union) gives the cograph.

mod enumerate;
mod permutation;
mod rules;
mod sampling;
mod text;

pub use enumerate::all_signed_trees;
pub use permutation::Permutation;
pub use rules::{discarding_rule_from_marked, selection_rule_tree, survivors, Discard, DiscardingRule};
pub use sampling::{sample_tree, RemySampler};

use crate::error::{Error, Result};

/// Default cap on the number of leaves for [`cograph_edges`].
pub const DEFAULT_EDGE_CAP: usize = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Node {
    /// `rank` is the 1-based left-to-right position of the leaf.
    Leaf {
        rank: u32,
    },
    Internal {
        left: NodeId,
        right: NodeId,
        sign: Sign,
    },
}

/// A plane binary tree with `n` ordered leaves and a sign on each of its
/// `n - 1` internal nodes.
///
/// Nodes live in an arena laid out in preorder: the root is node 0 and every
/// child has a larger id than its parent. Dynamic programs therefore run as
/// one reverse sweep (children before parents) and top-down passes as one
/// forward sweep, with no recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedBinaryTree {
    nodes: Vec<Node>,
    leaf_counts: Vec<u32>,
}

impl SignedBinaryTree {
    pub fn leaf() -> Self {
        SignedBinaryTree {
            nodes: vec![Node::Leaf { rank: 1 }],
            leaf_counts: vec![1],
        }
    }

    /// Joins two trees under a new root; the leaves of `right` are ranked
    /// after those of `left`.
    pub fn join(left: &SignedBinaryTree, right: &SignedBinaryTree, sign: Sign) -> Self {
        let total = 1 + left.nodes.len() + right.nodes.len();
        let mut nodes = Vec::with_capacity(total);
        let mut leaf_counts = Vec::with_capacity(total);
        let left_root = 1u32;
        let right_root = 1 + left.nodes.len() as u32;
        nodes.push(Node::Internal {
            left: NodeId(left_root),
            right: NodeId(right_root),
            sign,
        });
        leaf_counts.push((left.n() + right.n()) as u32);
        for (offset, rank_shift, tree) in [(left_root, 0, left), (right_root, left.n() as u32, right)] {
            for node in &tree.nodes {
                nodes.push(match *node {
                    Node::Leaf { rank } => Node::Leaf {
                        rank: rank + rank_shift,
                    },
                    Node::Internal { left, right, sign } => Node::Internal {
                        left: NodeId(left.0 + offset),
                        right: NodeId(right.0 + offset),
                        sign,
                    },
                });
            }
            leaf_counts.extend_from_slice(&tree.leaf_counts);
        }
        SignedBinaryTree { nodes, leaf_counts }
    }

    /// Builds a tree from an arbitrary arena (any node order) rooted at
    /// `root`, validating the structure and renumbering into preorder.
    pub fn from_nodes(nodes: &[Node], root: NodeId) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Structure("empty node arena".into()));
        }
        if root.index() >= nodes.len() {
            return Err(Error::Structure(format!("root {} out of range", root.0)));
        }
        let mut seen = vec![false; nodes.len()];
        let mut out = Vec::with_capacity(nodes.len());
        // (old id, slot in `out` of the parent's child pointer to patch)
        let mut stack = vec![(root, None::<(usize, bool)>)];
        while let Some((id, patch)) = stack.pop() {
            let idx = id.index();
            if idx >= nodes.len() {
                return Err(Error::Structure(format!("child {} out of range", id.0)));
            }
            if std::mem::replace(&mut seen[idx], true) {
                return Err(Error::Structure(format!("node {} reached twice", id.0)));
            }
            let new_id = NodeId(out.len() as u32);
            if let Some((parent, is_left)) = patch {
                if let Node::Internal { left, right, .. } = &mut out[parent] {
                    if is_left {
                        *left = new_id;
                    } else {
                        *right = new_id;
                    }
                }
            }
            out.push(nodes[idx]);
            if let Node::Internal { left, right, .. } = nodes[idx] {
                let slot = out.len() - 1;
                stack.push((right, Some((slot, false))));
                stack.push((left, Some((slot, true))));
            }
        }
        if out.len() != nodes.len() {
            return Err(Error::Structure(format!(
                "{} of {} nodes unreachable from the root",
                nodes.len() - out.len(),
                nodes.len()
            )));
        }
        let mut tree = SignedBinaryTree {
            leaf_counts: vec![0; out.len()],
            nodes: out,
        };
        tree.recount();
        tree.validate()?;
        Ok(tree)
    }

    /// Trusted constructor for arenas already in preorder.
    pub(crate) fn from_preorder_unchecked(nodes: Vec<Node>) -> Self {
        let mut tree = SignedBinaryTree {
            leaf_counts: vec![0; nodes.len()],
            nodes,
        };
        tree.recount();
        debug_assert!(tree.validate().is_ok());
        tree
    }

    fn recount(&mut self) {
        for i in (0..self.nodes.len()).rev() {
            self.leaf_counts[i] = match self.nodes[i] {
                Node::Leaf { .. } => 1,
                Node::Internal { left, right, .. } => self.leaf_counts[left.index()] + self.leaf_counts[right.index()],
            };
        }
    }

    /// Checks every structural invariant: preorder layout, `n` leaves with
    /// ranks `1..=n` in order, `n - 1` binary internal nodes, consistent
    /// cached leaf counts.
    pub fn validate(&self) -> Result<()> {
        let len = self.nodes.len();
        if len == 0 || len.is_multiple_of(2) {
            return Err(Error::Structure(format!("{len} nodes cannot form a full binary tree")));
        }
        let mut next_rank = 1u32;
        let mut expected = vec![0usize];
        for (i, node) in self.nodes.iter().enumerate() {
            match expected.pop() {
                Some(e) if e == i => {}
                _ => return Err(Error::Structure(format!("node {i} breaks preorder layout"))),
            }
            match *node {
                Node::Leaf { rank } => {
                    if rank != next_rank {
                        return Err(Error::Structure(format!(
                            "leaf {i} has rank {rank}, expected {next_rank}"
                        )));
                    }
                    next_rank += 1;
                    if self.leaf_counts[i] != 1 {
                        return Err(Error::Structure(format!("leaf {i} has leaf count != 1")));
                    }
                }
                Node::Internal { left, right, .. } => {
                    if left.index() != i + 1 {
                        return Err(Error::Structure(format!("node {i}: left child not adjacent")));
                    }
                    let l = left.index();
                    let r = right.index();
                    if r >= len || l >= len {
                        return Err(Error::Structure(format!("node {i}: child out of range")));
                    }
                    if self.leaf_counts[i] != self.leaf_counts[l] + self.leaf_counts[r] {
                        return Err(Error::Structure(format!("node {i}: stale leaf count")));
                    }
                    expected.push(r);
                    expected.push(l);
                }
            }
        }
        if !expected.is_empty() {
            return Err(Error::Structure("dangling children".into()));
        }
        let n = (next_rank - 1) as usize;
        if self.leaf_counts[0] as usize != n || len != 2 * n - 1 {
            return Err(Error::Structure("leaf count mismatch at root".into()));
        }
        Ok(())
    }

    /// Number of leaves.
    pub fn n(&self) -> usize {
        self.leaf_counts[0] as usize
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn node(&self, id: NodeId) -> Node {
        self.nodes[id.index()]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn leaf_count(&self, id: NodeId) -> usize {
        self.leaf_counts[id.index()] as usize
    }

    pub fn sign(&self, id: NodeId) -> Option<Sign> {
        match self.nodes[id.index()] {
            Node::Internal { sign, .. } => Some(sign),
            Node::Leaf { .. } => None,
        }
    }

    /// Rank of the leftmost leaf below each node.
    pub fn first_ranks(&self) -> Vec<u32> {
        let mut first = vec![0u32; self.nodes.len()];
        first[0] = 1;
        for i in 0..self.nodes.len() {
            if let Node::Internal { left, right, .. } = self.nodes[i] {
                first[left.index()] = first[i];
                first[right.index()] = first[i] + self.leaf_counts[left.index()];
            }
        }
        first
    }

    /// The same shape with every sign flipped.
    pub fn flipped(&self) -> SignedBinaryTree {
        let nodes = self
            .nodes
            .iter()
            .map(|node| match *node {
                Node::Internal { left, right, sign } => Node::Internal {
                    left,
                    right,
                    sign: sign.flip(),
                },
                leaf => leaf,
            })
            .collect();
        SignedBinaryTree {
            nodes,
            leaf_counts: self.leaf_counts.clone(),
        }
    }

    /// Shape with signs erased, as a preorder bit string (`true` = internal).
    pub fn shape_code(&self) -> Vec<bool> {
        self.nodes.iter().map(|n| matches!(n, Node::Internal { .. })).collect()
    }

    fn sum_max_dp(&self, sum_on: Sign) -> usize {
        let mut value = vec![0u32; self.nodes.len()];
        for i in (0..self.nodes.len()).rev() {
            value[i] = match self.nodes[i] {
                Node::Leaf { .. } => 1,
                Node::Internal { left, right, sign } => {
                    let (a, b) = (value[left.index()], value[right.index()]);
                    if sign == sum_on {
                        a + b
                    } else {
                        a.max(b)
                    }
                }
            };
        }
        value[0] as usize
    }
}

/// Permutation induced by the tree: at a `Plus` node the left block of
/// values sits below the right block, at a `Minus` node above it.
pub fn to_permutation(tree: &SignedBinaryTree) -> Permutation {
    let len = tree.nodes.len();
    // offset[i]: number of values below the block assigned to node i
    let mut offset = vec![0u32; len];
    let mut values = vec![0u32; tree.n()];
    for i in 0..len {
        match tree.nodes[i] {
            Node::Leaf { rank } => values[rank as usize - 1] = offset[i] + 1,
            Node::Internal { left, right, sign } => {
                let (l, r) = (left.index(), right.index());
                match sign {
                    Sign::Plus => {
                        offset[l] = offset[i];
                        offset[r] = offset[i] + tree.leaf_counts[l];
                    }
                    Sign::Minus => {
                        offset[r] = offset[i];
                        offset[l] = offset[i] + tree.leaf_counts[r];
                    }
                }
            }
        }
    }
    Permutation::from_vec_unchecked(values)
}

/// Longest increasing subsequence of `to_permutation(tree)`: runs concatenate
/// across a `Plus` node and cannot cross a `Minus` node.
pub fn lis_tree(tree: &SignedBinaryTree) -> usize {
    tree.sum_max_dp(Sign::Plus)
}

/// Longest decreasing subsequence of `to_permutation(tree)`.
pub fn lds_tree(tree: &SignedBinaryTree) -> usize {
    tree.sum_max_dp(Sign::Minus)
}

/// Largest clique of the cograph whose cotree is `tree` (`Plus` = join).
///
/// This is the same recursion as [`lis_tree`]; it is kept as its own
/// function because it reads the tree as a cotree, not as a substitution
/// decomposition.
pub fn clique_tree(tree: &SignedBinaryTree) -> usize {
    let mut clique = vec![0u32; tree.nodes.len()];
    for i in (0..tree.nodes.len()).rev() {
        clique[i] = match tree.nodes[i] {
            Node::Leaf { .. } => 1,
            // a join merges cliques from both sides
            Node::Internal {
                left,
                right,
                sign: Sign::Plus,
            } => clique[left.index()] + clique[right.index()],
            Node::Internal {
                left,
                right,
                sign: Sign::Minus,
            } => clique[left.index()].max(clique[right.index()]),
        };
    }
    clique[0] as usize
}

/// Largest independent set of the cograph whose cotree is `tree`.
pub fn independent_tree(tree: &SignedBinaryTree) -> usize {
    let mut indep = vec![0u32; tree.nodes.len()];
    for i in (0..tree.nodes.len()).rev() {
        indep[i] = match tree.nodes[i] {
            Node::Leaf { .. } => 1,
            Node::Internal {
                left,
                right,
                sign: Sign::Minus,
            } => indep[left.index()] + indep[right.index()],
            Node::Internal {
                left,
                right,
                sign: Sign::Plus,
            } => indep[left.index()].max(indep[right.index()]),
        };
    }
    indep[0] as usize
}

/// Edges `(i, j)`, `i < j`, of the cograph: vertices are leaf ranks and
/// `i ~ j` iff their lowest common ancestor is a `Plus` node. Every `Plus`
/// node contributes the complete bipartite graph between its two leaf
/// blocks, so one sweep suffices. Sorted lexicographically.
pub fn cograph_edges(tree: &SignedBinaryTree, cap: usize) -> Result<Vec<(u32, u32)>> {
    if tree.n() > cap {
        return Err(Error::SizeCap { size: tree.n(), cap });
    }
    let first = tree.first_ranks();
    let mut edges = Vec::new();
    for i in 0..tree.nodes.len() {
        if let Node::Internal {
            left,
            right,
            sign: Sign::Plus,
        } = tree.nodes[i]
        {
            let (l, r) = (left.index(), right.index());
            for a in first[l]..first[l] + tree.leaf_counts[l] {
                for b in first[r]..first[r] + tree.leaf_counts[r] {
                    edges.push((a, b));
                }
            }
        }
    }
    edges.sort_unstable();
    Ok(edges)
}
