use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `{1..n}` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct Permutation {
    values: Vec<u32>,
}

impl Permutation {
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n];
        for (i, &v) in values.iter().enumerate() {
            if v == 0 || v as usize > n {
                return Err(Error::Structure(format!(
                    "value {v} at position {} outside 1..={n}",
                    i + 1
                )));
            }
            if std::mem::replace(&mut seen[v as usize - 1], true) {
                return Err(Error::Structure(format!("value {v} repeated")));
            }
        }
        Ok(Permutation { values })
    }

    pub(crate) fn from_vec_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(values.clone()).is_ok());
        Permutation { values }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            values: (1..=n as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// `i -> n + 1 - σ(i)`. Increasing subsequences of the result are the
    /// decreasing subsequences of `self`.
    pub fn complement(&self) -> Permutation {
        let n = self.values.len() as u32;
        Permutation {
            values: self.values.iter().map(|&v| n + 1 - v).collect(),
        }
    }

    pub fn reverse(&self) -> Permutation {
        Permutation {
            values: self.values.iter().rev().copied().collect(),
        }
    }

    /// `i -> n + 1 - σ(n + 1 - i)`, the half-turn of the diagram. Keeps both
    /// LIS and LDS.
    pub fn reverse_complement(&self) -> Permutation {
        let n = self.values.len() as u32;
        Permutation {
            values: self.values.iter().rev().map(|&v| n + 1 - v).collect(),
        }
    }

    /// Reduces the values at `indices` (0-based) to a permutation of
    /// `{1..k}` preserving relative order.
    pub fn pattern_at(&self, indices: &[usize]) -> Permutation {
        let picked: Vec<u32> = indices.iter().map(|&i| self.values[i]).collect();
        let mut order: Vec<usize> = (0..picked.len()).collect();
        order.sort_unstable_by_key(|&k| picked[k]);
        let mut values = vec![0; picked.len()];
        for (rank, k) in order.into_iter().enumerate() {
            values[k] = rank as u32 + 1;
        }
        Permutation { values }
    }

    /// Whether `pattern` occurs as a subsequence, by exhaustive scan over
    /// position tuples. Meant for short patterns and small `n`.
    pub fn contains_pattern(&self, pattern: &[u32]) -> bool {
        let k = pattern.len();
        let n = self.values.len();
        if k == 0 {
            return true;
        }
        if k > n {
            return false;
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            if self.pattern_at(&idx).values == pattern {
                return true;
            }
            // next k-combination in lexicographic order
            let mut i = k;
            loop {
                if i == 0 {
                    return false;
                }
                i -= 1;
                if idx[i] < n - k + i {
                    break;
                }
                if i == 0 {
                    return false;
                }
            }
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    /// Separable permutations are exactly those avoiding 2413 and 3142.
    pub fn is_separable(&self) -> bool {
        !self.contains_pattern(&[2, 4, 1, 3]) && !self.contains_pattern(&[3, 1, 4, 2])
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Permutation::new(vec![1, 3]).is_err());
        assert!(Permutation::new(vec![2, 3, 1]).is_ok());
        assert!(Permutation::new(vec![]).is_ok());
    }

    #[test]
    fn reverse_complement_is_involution() {
        let p = Permutation::new(vec![2, 4, 1, 3]).unwrap();
        assert_eq!(p.reverse_complement().values(), &[2, 4, 1, 3]);
        let q = Permutation::new(vec![1, 3, 2]).unwrap();
        assert_eq!(q.reverse_complement().values(), &[2, 1, 3]);
        assert_eq!(q.reverse_complement().reverse_complement(), q);
        assert_eq!(q.complement().values(), &[3, 1, 2]);
        assert_eq!(q.reverse().values(), &[2, 3, 1]);
        assert_eq!(q.reverse().complement(), q.reverse_complement());
    }

    #[test]
    fn pattern_scan() {
        let p = Permutation::new(vec![3, 5, 1, 4, 2]).unwrap();
        assert!(p.contains_pattern(&[2, 4, 1, 3]));
        assert!(!p.is_separable());
        assert!(Permutation::identity(6).is_separable());
        assert!(!Permutation::identity(3).contains_pattern(&[2, 1]));
        assert_eq!(p.pattern_at(&[0, 2, 4]).values(), &[3, 1, 2]);
    }

    #[test]
    fn display() {
        assert_eq!(Permutation::new(vec![2, 1, 3]).unwrap().to_string(), "2 1 3");
    }
}
