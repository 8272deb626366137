use super::{Sign, SignedBinaryTree};

/// Every signed binary tree with `n` leaves: `Catalan(n-1) * 2^(n-1)` trees.
/// Intended for exhaustive tests at small `n`.
pub fn all_signed_trees(n: usize) -> Vec<SignedBinaryTree> {
    let mut by_size: Vec<Vec<SignedBinaryTree>> = vec![Vec::new(), vec![SignedBinaryTree::leaf()]];
    for m in 2..=n {
        let mut trees = Vec::new();
        for k in 1..m {
            for l in &by_size[k] {
                for r in &by_size[m - k] {
                    for sign in [Sign::Plus, Sign::Minus] {
                        trees.push(SignedBinaryTree::join(l, r, sign));
                    }
                }
            }
        }
        by_size.push(trees);
    }
    by_size
        .swap_remove(n.min(by_size.len() - 1))
        .into_iter()
        .filter(|t| t.n() == n)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let catalan = [1usize, 1, 2, 5, 14, 42];
        assert!(all_signed_trees(0).is_empty());
        for n in 1..=6 {
            let trees = all_signed_trees(n);
            assert_eq!(trees.len(), catalan[n - 1] << (n - 1));
            for t in &trees {
                t.validate().unwrap();
            }
        }
    }
}
