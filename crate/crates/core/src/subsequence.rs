//! Longest increasing subsequences of plain permutations.
//!
//! Indices are 0-based positions into [`Permutation::values`].

use crate::error::{Error, Result};
use crate::signed_trees::Permutation;

/// Largest `n` accepted by [`lis_bruteforce`].
pub const BRUTEFORCE_CAP: usize = 20;

/// Patience sorting with predecessor links. Returns the LIS length and one
/// witness, increasing in both position and value.
pub fn lis_patience(perm: &Permutation) -> (usize, Vec<usize>) {
    let values = perm.values();
    // tops[k]: position of the smallest tail of an increasing run of length k+1
    let mut tops: Vec<usize> = Vec::new();
    let mut prev = vec![usize::MAX; values.len()];
    for (i, &v) in values.iter().enumerate() {
        let k = tops.partition_point(|&j| values[j] < v);
        if k > 0 {
            prev[i] = tops[k - 1];
        }
        if k == tops.len() {
            tops.push(i);
        } else {
            tops[k] = i;
        }
    }
    let mut witness = Vec::with_capacity(tops.len());
    let mut cur = tops.last().copied().unwrap_or(usize::MAX);
    while cur != usize::MAX {
        witness.push(cur);
        cur = prev[cur];
    }
    witness.reverse();
    (tops.len(), witness)
}

/// LIS by the quadratic longest-chain recursion; a slow reference for tests.
pub fn lis_bruteforce(perm: &Permutation) -> Result<usize> {
    let values = perm.values();
    if values.len() > BRUTEFORCE_CAP {
        return Err(Error::SizeCap {
            size: values.len(),
            cap: BRUTEFORCE_CAP,
        });
    }
    let mut best = vec![1usize; values.len()];
    for j in 0..values.len() {
        for i in 0..j {
            if values[i] < values[j] {
                best[j] = best[j].max(best[i] + 1);
            }
        }
    }
    Ok(best.into_iter().max().unwrap_or(0))
}

/// Whether the values at the strictly increasing `indices` strictly increase.
pub fn is_increasing(perm: &Permutation, indices: &[usize]) -> Result<bool> {
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("indices", "must be strictly increasing"));
    }
    if let Some(&last) = indices.last() {
        if last >= perm.len() {
            return Err(Error::param("indices", format!("index {last} out of range")));
        }
    }
    let values = perm.values();
    Ok(indices.windows(2).all(|w| values[w[0]] < values[w[1]]))
}

/// Longest decreasing subsequence length.
pub fn lds_patience(perm: &Permutation) -> usize {
    lis_patience(&perm.complement()).0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[u32]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn small_examples() {
        let id = Permutation::identity(8);
        assert_eq!(lis_patience(&id), (8, (0..8).collect()));
        assert_eq!(lis_patience(&perm(&[2, 1, 3])).0, 2);
        assert_eq!(lis_bruteforce(&perm(&[2, 1, 3])).unwrap(), 2);
        assert_eq!(lis_bruteforce(&perm(&[4, 3, 2, 1])).unwrap(), 1);
        assert_eq!(lis_bruteforce(&id).unwrap(), 8);
        assert_eq!(lis_patience(&Permutation::identity(0)), (0, vec![]));
        assert_eq!(lds_patience(&perm(&[3, 1, 2])), 2);
        assert_eq!(lds_patience(&perm(&[1, 2, 3])), 1);
        assert_eq!(lds_patience(&perm(&[2, 4, 1, 3])), 2);
    }

    #[test]
    fn witness_is_increasing() {
        let p = perm(&[5, 1, 6, 2, 7, 3, 8, 4]);
        let (len, w) = lis_patience(&p);
        assert_eq!(len, 4);
        assert_eq!(w.len(), 4);
        assert!(is_increasing(&p, &w).unwrap());
    }

    #[test]
    fn bruteforce_cap() {
        assert!(lis_bruteforce(&Permutation::identity(21)).is_err());
        assert!(lis_bruteforce(&Permutation::identity(20)).is_ok());
    }

    #[test]
    fn is_increasing_checks() {
        let p = perm(&[2, 1, 3]);
        assert!(is_increasing(&p, &[1]).unwrap());
        assert!(is_increasing(&p, &[]).unwrap());
        assert!(is_increasing(&Permutation::identity(5), &[0, 1, 2, 3, 4]).unwrap());
        assert!(!is_increasing(&p, &[0, 1]).unwrap());
        assert!(is_increasing(&p, &[1, 0]).is_err());
        assert!(is_increasing(&p, &[1, 1]).is_err());
        assert!(is_increasing(&p, &[5]).is_err());
    }
}
