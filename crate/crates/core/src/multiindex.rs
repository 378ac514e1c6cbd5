//! Symmetric multi-indices and the generalized Kronecker delta.
//!
//! A [`SymIndex`] `(α₁ ≤ … ≤ α_k)` labels the monomial `e_{α₁}⋯e_{α_k}` of
//! `S^kE` and the monomial `W_{α₁}⋯W_{α_k}` on `P^{r−1}`. Entries are
//! 1-based.
//!
//! The generalized delta `δ_{AB}` is the permanent of the `k×k` matrix
//! `M[s][t] = δ_{α_s β_t}`, i.e. `Σ_{σ∈S_k} Π_j δ_{α_j β_{σ(j)}}`. Permuting
//! both index lists with the same `σ` would instead give `k!·Π_j δ_{α_j β_j}`;
//! only the permanent reproduces the `k = 2` integral `δ_{αβ}δ_{γδ} + δ_{αδ}δ_{βγ}`. For weakly increasing lists the
//! permanent is `Π_m (mult_m)!` when `A = B` and zero otherwise, which is what
//! [`generalized_delta`] evaluates; [`permanent_by_permutations`] is the
//! literal permutation sum.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Weakly increasing multi-index over `1..=rank`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymIndex(Vec<usize>);

impl SymIndex {
    pub fn new(entries: Vec<usize>, rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        if let Some(&entry) = entries.iter().find(|&&e| e == 0 || e > rank) {
            return Err(Error::IndexOutOfRange { entry, rank });
        }
        if entries.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::NotWeaklyIncreasing);
        }
        Ok(Self(entries))
    }

    /// Sorts arbitrary 1-based entries into a multi-index.
    pub fn from_unsorted(mut entries: Vec<usize>, rank: usize) -> Result<Self> {
        entries.sort_unstable();
        Self::new(entries, rank)
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// The index with its `s`-th entry (0-based position) removed.
    pub fn without(&self, s: usize) -> SymIndex {
        let mut e = self.0.clone();
        e.remove(s);
        SymIndex(e)
    }

    /// Number of occurrences of `value` (1-based fiber index).
    pub fn multiplicity(&self, value: usize) -> usize {
        self.0.iter().filter(|&&e| e == value).count()
    }
}

impl fmt::Display for SymIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (t, e) in self.0.iter().enumerate() {
            if t > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

pub fn factorial(k: u64) -> u64 {
    (1..=k).product()
}

/// All weakly increasing `k`-tuples over `1..=r` in lexicographic order.
pub fn enumerate_sym_indices(r: usize, k: usize) -> Result<Vec<SymIndex>> {
    if r == 0 {
        return Err(Error::ZeroRank);
    }
    let mut out = Vec::with_capacity(binomial((r + k - 1) as u64, k as u64) as usize);
    let mut cur = alloc::vec![1usize; k];
    loop {
        out.push(SymIndex(cur.clone()));
        // Advance the rightmost entry that can still grow, then reset the
        // tail to it.
        let Some(pos) = (0..k).rev().find(|&t| cur[t] < r) else {
            break;
        };
        let v = cur[pos] + 1;
        for e in &mut cur[pos..] {
            *e = v;
        }
    }
    Ok(out)
}

/// Position of `idx` in a basis produced by [`enumerate_sym_indices`].
pub fn position(basis: &[SymIndex], idx: &SymIndex) -> Option<usize> {
    basis.binary_search(idx).ok()
}

/// Generalized Kronecker delta of two multi-indices of equal length.
pub fn generalized_delta(a: &SymIndex, b: &SymIndex) -> Result<u64> {
    if a.degree() != b.degree() {
        return Err(Error::LengthMismatch { left: a.degree(), right: b.degree() });
    }
    Ok(delta_unchecked(a.entries(), b.entries()))
}

/// Generalized delta on sorted slices of equal length.
pub(crate) fn delta_unchecked(a: &[usize], b: &[usize]) -> u64 {
    if a != b {
        return 0;
    }
    let mut prod = 1u64;
    let mut run = 0u64;
    for (t, &e) in a.iter().enumerate() {
        if t > 0 && a[t - 1] == e {
            run += 1;
        } else {
            run = 1;
        }
        prod *= run;
    }
    prod
}

/// Permanent of `M[s][t] = δ_{a_s b_t}` by the explicit sum over `S_k`.
///
/// Accepts unsorted lists. Cost is `k!·k`, intended for `k ≤ 8`.
pub fn permanent_by_permutations(a: &[usize], b: &[usize]) -> Result<u64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    let mut total = 0u64;
    for_each_permutation(a.len(), |sigma| {
        if a.iter().zip(sigma).all(|(&x, &s)| x == b[s]) {
            total += 1;
        }
    });
    Ok(total)
}

/// Calls `f` with every permutation of `0..k` (Heap's algorithm).
pub fn for_each_permutation(k: usize, mut f: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..k).collect();
    let mut c = alloc::vec![0usize; k];
    f(&p);
    let mut i = 1;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            f(&p);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}
