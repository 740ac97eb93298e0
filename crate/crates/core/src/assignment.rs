use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QapError, Result};

/// A facility-to-location assignment: `perm[i] = j` places facility `i` at
/// location `j`. Always a bijection on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Assignment {
    perm: Vec<usize>,
}

/// Exchange of the locations of facilities `i` and `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SwapMove {
    pub i: usize,
    pub j: usize,
}

impl SwapMove {
    pub fn new(i: usize, j: usize) -> Self {
        Self { i, j }
    }

    pub fn check(self, n: usize) -> Result<()> {
        for index in [self.i, self.j] {
            if index >= n {
                return Err(QapError::IndexOutOfRange { index, n });
            }
        }
        Ok(())
    }

    /// All `n(n-1)/2` distinct swaps in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = SwapMove> {
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| SwapMove { i, j }))
    }

    /// Draws a swap of two distinct facilities, uniform over the
    /// `n(n-1)/2` unordered pairs. Requires `n >= 2`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SwapMove {
        debug_assert!(n >= 2);
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        SwapMove { i, j }
    }
}

impl Assignment {
    /// Validates that `perm` is a bijection on `0..perm.len()`.
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for (facility, &loc) in perm.iter().enumerate() {
            if loc >= n {
                return Err(QapError::NotAPermutation(format!(
                    "facility {facility} assigned to location {loc}, outside 0..{n}"
                )));
            }
            if std::mem::replace(&mut seen[loc], true) {
                return Err(QapError::NotAPermutation(format!("location {loc} used more than once")));
            }
        }
        Ok(Self { perm })
    }

    pub fn identity(n: usize) -> Self {
        Self { perm: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Location of facility `facility`.
    #[inline]
    pub fn location(&self, facility: usize) -> usize {
        self.perm[facility]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.perm
    }

    /// `inv[j] = i` iff `perm[i] = j`.
    pub fn inverse(&self) -> Assignment {
        let mut inv = vec![0; self.perm.len()];
        for (i, &j) in self.perm.iter().enumerate() {
            inv[j] = i;
        }
        Assignment { perm: inv }
    }

    /// Returns a copy with the locations of `m.i` and `m.j` exchanged.
    pub fn apply_swap(&self, m: SwapMove) -> Result<Assignment> {
        let mut out = self.clone();
        out.swap_in_place(m)?;
        Ok(out)
    }

    /// In-place version of [`Assignment::apply_swap`]; applying the same move
    /// twice restores the original.
    pub fn swap_in_place(&mut self, m: SwapMove) -> Result<()> {
        m.check(self.perm.len())?;
        self.perm.swap(m.i, m.j);
        Ok(())
    }

    pub(crate) fn swap_unchecked(&mut self, m: SwapMove) {
        self.perm.swap(m.i, m.j);
    }

    pub(crate) fn from_vec_unchecked(perm: Vec<usize>) -> Self {
        debug_assert!(Assignment::new(perm.clone()).is_ok());
        Self { perm }
    }
}

/// Uniformly random permutation of `0..n` (Fisher–Yates).
pub fn random_assignment<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Assignment {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    Assignment { perm }
}

impl TryFrom<Vec<usize>> for Assignment {
    type Error = QapError;

    fn try_from(perm: Vec<usize>) -> Result<Self> {
        Assignment::new(perm)
    }
}

impl From<Assignment> for Vec<usize> {
    fn from(a: Assignment) -> Self {
        a.perm
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, loc) in self.perm.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{loc}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_rng;
    use proptest::prelude::*;
    use std::collections::HashMap;

    #[test]
    fn rejects_non_bijections() {
        assert!(Assignment::new(vec![0, 0, 1]).is_err());
        assert!(Assignment::new(vec![0, 3, 1]).is_err());
        assert!(Assignment::new(vec![2, 0, 1]).is_ok());
    }

    #[test]
    fn swap_examples() {
        let a = Assignment::new(vec![0, 1, 2]).unwrap();
        assert_eq!(a.apply_swap(SwapMove::new(0, 2)).unwrap().as_slice(), &[2, 1, 0]);
        assert_eq!(a.apply_swap(SwapMove::new(1, 1)).unwrap(), a);
        assert_eq!(
            a.apply_swap(SwapMove::new(0, 3)),
            Err(QapError::IndexOutOfRange { index: 3, n: 3 })
        );
    }

    #[test]
    fn random_assignment_n1_and_determinism() {
        let mut rng = seeded_rng(99);
        assert_eq!(random_assignment(1, &mut rng).as_slice(), &[0]);
        let a = random_assignment(20, &mut seeded_rng(42));
        let b = random_assignment(20, &mut seeded_rng(42));
        assert_eq!(a, b);
    }

    #[test]
    fn random_assignment_is_uniform_for_n3() {
        let mut rng = seeded_rng(2024);
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        let draws = 6000;
        for _ in 0..draws {
            *counts.entry(random_assignment(3, &mut rng).into_vec()).or_default() += 1;
        }
        assert_eq!(counts.len(), 6);
        for (perm, c) in counts {
            let freq = c as f64 / draws as f64;
            assert!((freq - 1.0 / 6.0).abs() <= 0.05, "{perm:?} frequency {freq}");
        }
    }

    #[test]
    fn random_move_covers_pairs_uniformly() {
        let mut rng = seeded_rng(5);
        let mut counts = HashMap::new();
        for _ in 0..3000 {
            let m = SwapMove::random(3, &mut rng);
            assert_ne!(m.i, m.j);
            *counts.entry((m.i.min(m.j), m.i.max(m.j))).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 3);
        for c in counts.values() {
            assert!((*c as f64 / 3000.0 - 1.0 / 3.0).abs() <= 0.05);
        }
    }

    #[test]
    fn serde_validates() {
        assert!(serde_json::from_str::<Assignment>("[1,0]").is_ok());
        assert!(serde_json::from_str::<Assignment>("[1,1]").is_err());
    }

    proptest! {
        #[test]
        fn swap_is_an_involution(seed in any::<u64>(), n in 1usize..12, i in 0usize..12, j in 0usize..12) {
            let (i, j) = (i % n, j % n);
            let a = random_assignment(n, &mut seeded_rng(seed));
            let m = SwapMove::new(i, j);
            let twice = a.apply_swap(m).unwrap().apply_swap(m).unwrap();
            prop_assert_eq!(twice, a.clone());
            prop_assert!(Assignment::new(a.apply_swap(m).unwrap().into_vec()).is_ok());
        }
    }
}
