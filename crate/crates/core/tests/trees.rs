use permuton_core::signed_trees::*;
use permuton_core::subsequence::{is_increasing, lds_patience, lis_bruteforce, lis_patience};
use permuton_core::{Permutation, Sign, SignedBinaryTree};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Pairs `i < j` (1-based) with `values[i] < values[j]`.
fn increasing_pairs(perm: &Permutation) -> Vec<(u32, u32)> {
    let v = perm.values();
    let mut out = Vec::new();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] < v[j] {
                out.push((i as u32 + 1, j as u32 + 1));
            }
        }
    }
    out
}

fn check_tree(tree: &SignedBinaryTree) {
    let perm = to_permutation(tree);
    let (lis, _) = lis_patience(&perm);
    assert_eq!(lis_tree(tree), lis, "{tree}");
    assert_eq!(lds_tree(tree), lds_patience(&perm), "{tree}");
    assert_eq!(lds_tree(tree), lis_patience(&perm.reverse()).0, "{tree}");
    assert_eq!(lis_patience(&perm.reverse_complement()).0, lis);
    assert_eq!(clique_tree(tree), lis_tree(tree));
    assert_eq!(independent_tree(tree), lds_tree(tree));
    if perm.len() <= 20 {
        assert_eq!(lis_bruteforce(&perm).unwrap(), lis);
    }
    assert!(lis * lds_tree(tree) >= perm.len());
}

#[test]
fn exhaustive_small_trees() {
    for n in 1..=6 {
        let trees = all_signed_trees(n);
        for tree in &trees {
            tree.validate().unwrap();
            check_tree(tree);
            let perm = to_permutation(tree);
            assert!(perm.is_separable());
            assert_eq!(cograph_edges(tree, DEFAULT_EDGE_CAP).unwrap(), increasing_pairs(&perm));
        }
    }
}

#[test]
fn every_separable_permutation_arises() {
    // separable permutations of size 1..=6 are counted by the large Schroeder numbers
    let expected = [1usize, 2, 6, 22, 90, 394];
    for n in 1..=6 {
        let mut perms: Vec<Vec<u32>> = all_signed_trees(n)
            .iter()
            .map(|t| to_permutation(t).values().to_vec())
            .collect();
        perms.sort();
        perms.dedup();
        assert_eq!(perms.len(), expected[n - 1]);
    }
}

#[test]
fn random_trees_up_to_512() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut sampler = RemySampler::default();
    for k in 0..1000 {
        let n = 1 + (k * 37) % 512;
        let p = (k % 11) as f64 / 10.0;
        let tree = sampler.sample(n, p.min(1.0), &mut rng).unwrap();
        check_tree(&tree);
    }
}

#[test]
fn shapes_of_three_and_five_leaves_are_uniform() {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (n, shapes) in [(3usize, 2usize), (5, 14)] {
        let draws = 100_000;
        let mut counts = std::collections::HashMap::new();
        for _ in 0..draws {
            let t = sample_tree(n, 0.5, &mut rng).unwrap();
            *counts.entry(t.shape_code()).or_insert(0u64) += 1;
        }
        assert_eq!(counts.len(), shapes);
        let e = draws as f64 / shapes as f64;
        let stat: f64 = counts.values().map(|&c| (c as f64 - e).powi(2) / e).sum();
        let pv = ChiSquared::new((shapes - 1) as f64).unwrap().sf(stat);
        assert!(pv > 1e-3, "n={n} p-value {pv}");
    }
}

#[test]
fn two_leaf_sign_frequency() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let p = 0.3;
    let draws = 100_000;
    let plus = (0..draws)
        .filter(|_| sample_tree(2, p, &mut rng).unwrap().sign(NodeId(0)) == Some(Sign::Plus))
        .count() as f64;
    let sd = (p * (1.0 - p) / draws as f64).sqrt();
    assert!((plus / draws as f64 - p).abs() < 4.0 * sd);
}

#[test]
fn selection_ratio_at_4096() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut sampler = RemySampler::default();
    let (mut sel, mut lis) = (0usize, 0usize);
    for _ in 0..2000 {
        let t = sampler.sample(4096, 0.5, &mut rng).unwrap();
        sel += selection_rule_tree(&t).len();
        lis += lis_tree(&t);
    }
    let ratio = sel as f64 / lis as f64;
    assert!(ratio > 0.9 && ratio < 1.0, "{ratio}");
}

#[test]
fn comb_examples() {
    let leaf = SignedBinaryTree::leaf();
    let comb = SignedBinaryTree::join(&SignedBinaryTree::join(&leaf, &leaf, Sign::Minus), &leaf, Sign::Minus);
    let rule = discarding_rule_from_marked(&comb, &[]).unwrap();
    assert_eq!(survivors(&comb, &rule).unwrap(), vec![3]);
    let kept = selection_rule_tree(&comb);
    assert_eq!(kept.len(), 1);
}

fn positions(ranks: &[u32]) -> Vec<usize> {
    ranks.iter().map(|&r| r as usize - 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn sampled_tree_invariants(n in 1usize..300, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let tree = sample_tree(n, p, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert!(tree.validate().is_ok());
        prop_assert_eq!(tree.n(), n);
        prop_assert_eq!(tree.leaf_count(tree.root()), n);
        let again = sample_tree(n, p, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(&tree, &again);
        let text = tree.to_text();
        prop_assert_eq!(&SignedBinaryTree::parse(&text).unwrap(), &tree);
        let perm = to_permutation(&tree);
        let flipped = to_permutation(&tree.flipped());
        let complement: Vec<u32> = perm.values().iter().map(|&v| n as u32 + 1 - v).collect();
        prop_assert_eq!(flipped.values(), &complement[..]);
        prop_assert_eq!(lis_tree(&tree.flipped()), lds_tree(&tree));
    }

    #[test]
    fn separable_up_to_64(n in 4usize..=64, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let perm = to_permutation(&sample_tree(n, p, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap());
        prop_assert!(!perm.contains_pattern(&[2, 4, 1, 3]));
        prop_assert!(!perm.contains_pattern(&[3, 1, 4, 2]));
    }

    #[test]
    fn selection_and_discarding(n in 1usize..1024, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let tree = sample_tree(n, p, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let perm = to_permutation(&tree);
        let lis = lis_tree(&tree);

        let kept = selection_rule_tree(&tree);
        prop_assert!(!kept.is_empty() && kept.len() <= lis);
        prop_assert!(kept.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(is_increasing(&perm, &positions(&kept)).unwrap());
        let rule = discarding_rule_from_marked(&tree, &kept).unwrap();
        let alive = survivors(&tree, &rule).unwrap();
        prop_assert!(kept.iter().all(|k| alive.contains(k)));

        let (_, witness) = lis_patience(&perm);
        let marked: Vec<u32> = witness.iter().map(|&i| i as u32 + 1).collect();
        let rule = discarding_rule_from_marked(&tree, &marked).unwrap();
        let alive = survivors(&tree, &rule).unwrap();
        prop_assert!(marked.iter().all(|k| alive.contains(k)));
        prop_assert_eq!(alive.len(), lis);
        prop_assert!(is_increasing(&perm, &positions(&alive)).unwrap());

        let rule = discarding_rule_from_marked(&tree, &[]).unwrap();
        let alive = survivors(&tree, &rule).unwrap();
        prop_assert!(is_increasing(&perm, &positions(&alive)).unwrap());
    }

    #[test]
    fn decreasing_pair_cannot_be_marked(n in 2usize..200, seed in any::<u64>()) {
        let tree = sample_tree(n, 0.5, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let v = to_permutation(&tree).values().to_vec();
        if let Some(i) = (0..n - 1).find(|&i| v[i] > v[i + 1]) {
            let marked = [i as u32 + 1, i as u32 + 2];
            prop_assert!(discarding_rule_from_marked(&tree, &marked).is_err());
        }
    }
}
