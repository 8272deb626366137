use rand::Rng;

use super::{Node, NodeId, Sign, SignedBinaryTree};
use crate::error::{check_probability, Error, Result};

const NONE: u32 = u32::MAX;

/// Uniform plane binary tree with `n` leaves by Rémy's leaf insertion, with
/// i.i.d. signs that are `Plus` with probability `p`.
pub fn sample_tree<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<SignedBinaryTree> {
    RemySampler::default().sample(n, p, rng)
}

/// Rémy sampler that keeps its scratch buffers between draws.
#[derive(Default, Debug, Clone)]
pub struct RemySampler {
    left: Vec<u32>,
    right: Vec<u32>,
    parent: Vec<u32>,
    stack: Vec<(u32, u32)>,
}

impl RemySampler {
    pub fn sample<R: Rng + ?Sized>(&mut self, n: usize, p: f64, rng: &mut R) -> Result<SignedBinaryTree> {
        if n == 0 {
            return Err(Error::param("n", "need at least one leaf"));
        }
        if n > (u32::MAX / 2) as usize {
            return Err(Error::SizeCap {
                size: n,
                cap: (u32::MAX / 2) as usize,
            });
        }
        check_probability(p)?;
        let total = 2 * n - 1;
        for buf in [&mut self.left, &mut self.right, &mut self.parent] {
            buf.clear();
            buf.resize(total, NONE);
        }
        let mut root = 0u32;
        for k in 1..n as u32 {
            // one draw picks both the edge to subdivide and the side of the new leaf
            let pick = rng.random_range(0..2 * (2 * k - 1));
            let x = pick >> 1;
            let leaf_goes_left = pick & 1 == 1;
            let internal = 2 * k - 1;
            let leaf = 2 * k;
            let up = self.parent[x as usize];
            if up == NONE {
                root = internal;
            } else if self.left[up as usize] == x {
                self.left[up as usize] = internal;
            } else {
                self.right[up as usize] = internal;
            }
            self.parent[internal as usize] = up;
            let (l, r) = if leaf_goes_left { (leaf, x) } else { (x, leaf) };
            self.left[internal as usize] = l;
            self.right[internal as usize] = r;
            self.parent[l as usize] = internal;
            self.parent[r as usize] = internal;
        }

        // relabel into preorder; signs are drawn in preorder. Each stack entry
        // carries the new id of the parent whose right pointer awaits it.
        let mut nodes = Vec::with_capacity(total);
        self.stack.clear();
        self.stack.push((root, NONE));
        let mut rank = 0u32;
        while let Some((old, owner)) = self.stack.pop() {
            let new_id = nodes.len() as u32;
            if owner != NONE {
                if let Node::Internal { right, .. } = &mut nodes[owner as usize] {
                    *right = NodeId(new_id);
                }
            }
            if self.left[old as usize] == NONE {
                rank += 1;
                nodes.push(Node::Leaf { rank });
            } else {
                let sign = if rng.random_bool(p) { Sign::Plus } else { Sign::Minus };
                nodes.push(Node::Internal {
                    left: NodeId(new_id + 1),
                    right: NodeId(NONE),
                    sign,
                });
                self.stack.push((self.right[old as usize], new_id));
                self.stack.push((self.left[old as usize], NONE));
            }
        }
        Ok(SignedBinaryTree::from_preorder_unchecked(nodes))
    }
}
