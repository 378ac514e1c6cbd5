//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls the optimized paths it is compared against.

#![allow(dead_code)]

use curvpos_core::multiindex::{enumerate_sym_indices, SymIndex};
use curvpos_core::{CMatrix, CurvatureTensor, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<C64> {
    (0..len).map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect()
}

pub fn kd(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// Permanent of `[δ(a_s, b_t)]` by recursive row expansion.
pub fn brute_permanent(a: &[usize], b: &[usize]) -> u64 {
    fn go(a: &[usize], b: &[usize], used: &mut Vec<bool>) -> u64 {
        let Some((&first, rest)) = a.split_first() else {
            return 1;
        };
        let mut total = 0;
        for t in 0..b.len() {
            if !used[t] && b[t] == first {
                used[t] = true;
                total += go(rest, b, used);
                used[t] = false;
            }
        }
        total
    }
    assert_eq!(a.len(), b.len());
    go(a, b, &mut vec![false; b.len()])
}

/// k = 2 symmetric-power curvature written out term by term:
/// `R_{αβ}δ_{γδ} + R_{γδ}δ_{αβ} + R_{γβ}δ_{αδ} + R_{αδ}δ_{γβ}` for the
/// basis elements `e_α e_γ` (α ≤ γ) and `e_β e_δ` (β ≤ δ), 0-based.
pub fn curv2_entry(t: &CurvatureTensor, i: usize, j: usize, (a, g): (usize, usize), (b, d): (usize, usize)) -> C64 {
    t.get(i, j, a, b) * kd(g, d) + t.get(i, j, g, d) * kd(a, b) + t.get(i, j, g, b) * kd(a, d)
        + t.get(i, j, a, d) * kd(g, b)
}

/// All permutations of `0..k` by recursive swapping.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, left: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for t in 0..left.len() {
            let x = left.remove(t);
            prefix.push(x);
            go(prefix, left, out);
            prefix.pop();
            left.insert(t, x);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (0..k).collect(), &mut out);
    out
}

/// Grouped form of the `S^kE` Nakano form:
///
/// `Σ_{α₁≤…≤α_{k−1}} Σ_{σ∈S_{k−1}} Σ R[i][j][α][β] V_{iα α_σ} conj(V_{jβ α_σ})`
///
/// with `V_{iα c₁…c_{k−1}} = Σ_s u_{i(c₁…c_{s−1} α c_s…)}` and `u` zero on
/// unsorted tuples. `u[i·D + p]` is the coefficient of `∂_i ⊗ e_{basis[p]}`.
pub fn dd_form(t: &CurvatureTensor, k: usize, u: &[C64]) -> f64 {
    let (n, r) = (t.base_dim(), t.rank());
    let basis = enumerate_sym_indices(r, k).unwrap();
    let d = basis.len();
    assert_eq!(u.len(), n * d);
    let coeff = |i: usize, tuple: &[usize]| -> C64 {
        if tuple.windows(2).any(|w| w[0] > w[1]) {
            return C64::new(0.0, 0.0);
        }
        let idx = SymIndex::new(tuple.to_vec(), r).unwrap();
        let p = basis.iter().position(|b| *b == idx).unwrap();
        u[i * d + p]
    };
    let v = |i: usize, alpha: usize, rest: &[usize]| -> C64 {
        (0..k)
            .map(|s| {
                let mut tuple = rest[..s].to_vec();
                tuple.push(alpha);
                tuple.extend_from_slice(&rest[s..]);
                coeff(i, &tuple)
            })
            .sum()
    };
    let mut total = C64::new(0.0, 0.0);
    for outer in enumerate_sym_indices(r, k - 1).unwrap() {
        for sigma in permutations(k - 1) {
            let rest: Vec<usize> = sigma.iter().map(|&s| outer.entries()[s]).collect();
            for i in 0..n {
                for j in 0..n {
                    for a in 0..r {
                        for b in 0..r {
                            total += t.get(i, j, a, b) * v(i, a + 1, &rest) * v(j, b + 1, &rest).conj();
                        }
                    }
                }
            }
        }
    }
    total.re
}

/// `Σ M[p][q] u_p conj(u_q)` straight from the Nakano index layout.
pub fn nakano_form_literal(t: &CurvatureTensor, u: &[C64]) -> f64 {
    let (n, r) = (t.base_dim(), t.rank());
    let mut total = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            for a in 0..r {
                for b in 0..r {
                    total += t.get(i, j, a, b) * u[i * r + a] * u[j * r + b].conj();
                }
            }
        }
    }
    total.re
}

/// Random Hermitian positive definite `m×m` matrix `X*X/m + shift·I`.
pub fn random_hpd(rng: &mut ChaCha8Rng, m: usize, shift: f64) -> CMatrix {
    let x = CMatrix::from_fn(m, m, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let g = x.adjoint().mul(&x).unwrap().scale(C64::new(1.0 / m as f64, 0.0));
    let sym = CMatrix::from_fn(m, m, |i, j| (g[(i, j)] + g[(j, i)].conj()) * 0.5);
    sym.add(&CMatrix::identity(m).scale(C64::new(shift, 0.0))).unwrap()
}
