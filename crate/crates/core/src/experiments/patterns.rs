//! Small-pattern laws: cell indexing of permutations of size 3 and 4 and
//! their exact probabilities under the tree sampler.

use crate::signed_trees::{all_signed_trees, to_permutation, Permutation, Sign};

/// Lexicographic rank of a permutation of `{1..k}` (Lehmer code).
pub fn pattern_index(values: &[u32]) -> usize {
    let k = values.len();
    let mut index = 0;
    for i in 0..k {
        let smaller_after = values[i + 1..].iter().filter(|&&v| v < values[i]).count();
        index = index * (k - i) + smaller_after;
    }
    index
}

/// Inverse of [`pattern_index`].
pub fn pattern_at_index(k: usize, mut index: usize) -> Permutation {
    let mut digits = vec![0; k];
    for i in (0..k).rev() {
        let base = k - i;
        digits[i] = index % base;
        index /= base;
    }
    let mut pool: Vec<u32> = (1..=k as u32).collect();
    let values = digits.into_iter().map(|d| pool.remove(d)).collect();
    Permutation::new(values).expect("Lehmer decoding yields a permutation")
}

pub fn factorial(k: usize) -> usize {
    (1..=k).product()
}

/// Exact law of the permutation of a uniform signed tree with `k` leaves:
/// every shape has probability `1 / Catalan(k - 1)` and each sign is `Plus`
/// with probability `p`. Indexed by [`pattern_index`].
pub fn exact_pattern_law(k: usize, p: f64) -> Vec<f64> {
    let trees = all_signed_trees(k);
    let signs_per_shape = 1usize << (k - 1);
    let shapes = trees.len() / signs_per_shape;
    let mut law = vec![0.0; factorial(k)];
    for t in &trees {
        let plus = t
            .nodes()
            .iter()
            .filter(|n| matches!(n, crate::signed_trees::Node::Internal { sign: Sign::Plus, .. }))
            .count() as i32;
        let weight = p.powi(plus) * (1.0 - p).powi(k as i32 - 1 - plus) / shapes as f64;
        law[pattern_index(to_permutation(t).values())] += weight;
    }
    law
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lehmer_round_trip() {
        for k in 1..=5 {
            for i in 0..factorial(k) {
                assert_eq!(pattern_index(pattern_at_index(k, i).values()), i);
            }
        }
        assert_eq!(pattern_index(&[1, 2, 3]), 0);
        assert_eq!(pattern_index(&[3, 2, 1]), 5);
    }

    #[test]
    fn size_three_law() {
        let p: f64 = 0.3;
        let law = exact_pattern_law(3, p);
        let q = 1.0 - p;
        let expect = [p * p, p * q / 2.0, p * q / 2.0, p * q / 2.0, p * q / 2.0, q * q];
        for (a, b) in law.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn size_four_law() {
        let law = exact_pattern_law(4, 0.5);
        assert!((law.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert_eq!(law[pattern_index(&[2, 4, 1, 3])], 0.0);
        assert_eq!(law[pattern_index(&[3, 1, 4, 2])], 0.0);
        assert_eq!(law.iter().filter(|&&x| x > 0.0).count(), 22);
    }
}
