//! The index of a Lie algebra: randomized rank of `B_phi`, symbolic
//! certification for small dimensions, and the combinatorial formula for
//! posets of height at most two.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{RationalMatrix, Q};
use crate::poly::{symbolic_pfaffian, Poly};
use crate::poset::Poset;

/// Random functionals take integer values in `[-SAMPLE_BOUND, SAMPLE_BOUND]`.
pub const SAMPLE_BOUND: i64 = 1_000_000;
pub const DEFAULT_TRIALS: usize = 3;
/// Largest dimension accepted by the symbolic routines.
pub const SYMBOLIC_DIM_BOUND: usize = 9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexReport {
    /// `dim - max rank`; always an upper bound on the true index.
    pub index: usize,
    pub dim: usize,
    pub max_rank: usize,
    pub trials: usize,
    pub sample_bound: i64,
    /// Schwartz–Zippel bound on the probability that a single trial misses
    /// the generic rank.
    pub per_trial_failure: f64,
    /// Bound on the probability that every trial missed it.
    pub failure_bound: f64,
    /// Whether the value was proven exactly (symbolically).
    pub certified: bool,
}

/// A uniformly random integer functional, as basis values.
pub fn random_dual(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Q> {
    (0..dim)
        .map(|_| Q::from_integer(BigInt::from(rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND))))
        .collect()
}

/// Failure probability of one trial: a nonzero Pfaffian minor of degree at
/// most `dim / 2` vanishes at a random point of a grid of side `2B + 1` with
/// probability at most `(dim / 2) / (2B + 1)`.
pub fn per_trial_failure(dim: usize) -> f64 {
    ((dim / 2) as f64 / (2 * SAMPLE_BOUND + 1) as f64).min(1.0)
}

/// Randomized index: the maximum rank of `B_phi` over `trials` random
/// functionals. The result never underestimates the index.
pub fn index(g: &LieAlgebra, trials: usize, seed: u64) -> IndexReport {
    let dim = g.dim();
    let trials = trials.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_rank = 0;
    for _ in 0..trials {
        let v = random_dual(dim, &mut rng);
        max_rank = max_rank.max(g.kirillov_from_dual(&v).rank());
        if max_rank + 1 >= dim {
            // rank of a skew matrix is even; dim or dim - 1 is the maximum
            break;
        }
    }
    let p = per_trial_failure(dim);
    let certified = max_rank + 1 >= dim;
    IndexReport {
        index: dim - max_rank,
        dim,
        max_rank,
        trials,
        sample_bound: SAMPLE_BOUND,
        per_trial_failure: p,
        failure_bound: if certified { 0.0 } else { p.powi(trials as i32) },
        certified,
    }
}

/// `B_phi` with entries given as linear forms in the values of `phi` on the
/// basis (variable `k` is `phi(b_k)`); upper triangle only is meaningful.
pub fn symbolic_kirillov(g: &LieAlgebra) -> Vec<Vec<Poly>> {
    let dim = g.dim();
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    let mut coeffs = vec![Q::from_integer(0.into()); dim];
                    for (k, c) in g.bracket_basis(i, j) {
                        coeffs[*k] += c;
                    }
                    Poly::linear(&coeffs)
                })
                .collect()
        })
        .collect()
}

/// Symbolic `B^_phi` in the same variables.
pub fn symbolic_extended(g: &LieAlgebra) -> Vec<Vec<Poly>> {
    let dim = g.dim();
    let b = symbolic_kirillov(g);
    let mut out = vec![vec![Poly::zero(); dim + 1]; dim + 1];
    for j in 0..dim {
        let mut coeffs = vec![Q::from_integer(0.into()); dim];
        coeffs[j] = Q::from_integer(1.into());
        let v = Poly::linear(&coeffs);
        out[j + 1][0] = -&v;
        out[0][j + 1] = v;
    }
    for i in 0..dim {
        for j in 0..dim {
            out[i + 1][j + 1] = b[i][j].clone();
        }
    }
    out
}

/// Exact generic rank of `B_phi`. A random evaluation gives a lower bound
/// `r`; it is exact once every principal Pfaffian of size `r + 2` vanishes
/// identically (a skew matrix of rank `2m` has nonzero principal Pfaffians
/// of every even size up to `2m`).
pub fn symbolic_generic_rank(g: &LieAlgebra, seed: u64) -> Result<usize> {
    let dim = g.dim();
    if dim > SYMBOLIC_DIM_BOUND {
        return Err(Error::SizeBound {
            size: dim,
            bound: SYMBOLIC_DIM_BOUND,
        });
    }
    let mut r = index(g, 1, seed).max_rank;
    let sym = symbolic_kirillov(g);
    loop {
        let size = r + 2;
        if size > dim {
            return Ok(r);
        }
        if subsets(dim, size).all(|idx| symbolic_pfaffian(&restrict(&sym, &idx)).is_zero()) {
            return Ok(r);
        }
        r += 2;
    }
}

/// Exact index for algebras of dimension at most [`SYMBOLIC_DIM_BOUND`].
pub fn symbolic_index(g: &LieAlgebra, seed: u64) -> Result<usize> {
    Ok(g.dim() - symbolic_generic_rank(g, seed)?)
}

/// The Pfaffian of `B^_phi` as a polynomial in the values of `phi`; the
/// algebra admits a contact form iff this polynomial is nonzero.
pub fn symbolic_contact_pfaffian(g: &LieAlgebra) -> Result<Poly> {
    let dim = g.dim();
    if dim.is_multiple_of(2) {
        return Err(Error::EvenDimension(dim));
    }
    if dim > SYMBOLIC_DIM_BOUND {
        return Err(Error::SizeBound {
            size: dim,
            bound: SYMBOLIC_DIM_BOUND,
        });
    }
    Ok(symbolic_pfaffian(&symbolic_extended(g)))
}

fn restrict(m: &[Vec<Poly>], idx: &[usize]) -> Vec<Vec<Poly>> {
    idx.iter().map(|&i| idx.iter().map(|&j| m[i][j].clone()).collect()).collect()
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for t in i + 1..k {
                    next[t] = next[t - 1] + 1;
                }
                cur = Some(next);
                break;
            }
        }
        Some(out)
    })
}

/// `|Rel_E(P)| - |P| + 2 C_P - 1 + sum_{j interior} UD(P, j)`.
pub fn index_formula_h2(p: &Poset) -> Result<usize> {
    check_height(p)?;
    let ext = p.extremal_data();
    let ud: usize = ext.interior.iter().map(|&j| p.up_down(j).ud).sum();
    let c = p.components().len();
    let value = ext.rel_e.len() as i64 - p.n() as i64 + 2 * c as i64 - 1 + ud as i64;
    Ok(usize::try_from(value).expect("index formula is nonnegative"))
}

/// Every interior element sees exactly three extremal elements and the
/// extremal Hasse diagram is a tree.
pub fn is_frobenius_h2(p: &Poset) -> Result<bool> {
    check_height(p)?;
    let ext = p.extremal_data();
    for &i in &ext.interior {
        let nb = p.interior_neighborhood(i)?;
        if nb.poset.extremal_data().ext.len() != 3 {
            return Ok(false);
        }
    }
    let (forest, _) = p.is_forest(true);
    Ok(forest && p.is_connected())
}

fn check_height(p: &Poset) -> Result<()> {
    if p.height() > 2 {
        return Err(Error::HeightBound {
            height: p.height(),
            bound: 2,
        });
    }
    Ok(())
}

/// Rank of `B_phi` for an explicit functional; convenience for reports.
pub fn kirillov_rank(g: &LieAlgebra, dual: &[Q]) -> usize {
    let m: RationalMatrix = g.kirillov_from_dual(dual);
    m.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::index_one_noncontact_example;

    #[test]
    fn formula_examples() {
        let ex1 = Poset::new(4, &[(1, 2), (2, 3), (2, 4)]).unwrap();
        assert_eq!(index_formula_h2(&ex1).unwrap(), 0);
        assert_eq!(index_formula_h2(&Poset::chain(3)).unwrap(), 1);
        assert_eq!(index_formula_h2(&Poset::antichain(2)).unwrap(), 1);
        assert!(matches!(
            index_formula_h2(&Poset::chain(4)),
            Err(Error::HeightBound { height: 3, bound: 2 })
        ));
    }

    #[test]
    fn frobenius_examples() {
        assert!(is_frobenius_h2(&Poset::complete(&[1, 1, 2]).unwrap()).unwrap());
        assert!(!is_frobenius_h2(&Poset::chain(3)).unwrap());
        assert!(is_frobenius_h2(&Poset::chain(2)).unwrap());
    }

    #[test]
    fn randomized_and_symbolic() {
        let g = LieAlgebra::type_a(&Poset::chain(3)).unwrap();
        assert_eq!(index(&g, 3, 7).index, 1);
        assert_eq!(symbolic_index(&g, 7).unwrap(), 1);
        let fn2 = index_one_noncontact_example();
        assert_eq!(index(&fn2, 3, 7).index, 1);
        assert_eq!(symbolic_index(&fn2, 7).unwrap(), 1);
        assert!(symbolic_contact_pfaffian(&fn2).unwrap().is_zero());
        let ab = LieAlgebra::from_structure_constants(3, &[]).unwrap();
        let r = index(&ab, 3, 1);
        assert_eq!(r.index, 3);
        assert!(r.failure_bound > 0.0 && r.failure_bound < 1e-15);
        assert_eq!(symbolic_index(&ab, 1).unwrap(), 3);
    }

    #[test]
    fn contact_pfaffian_nonzero_for_chain() {
        let g = LieAlgebra::type_a(&Poset::chain(3)).unwrap();
        assert!(!symbolic_contact_pfaffian(&g).unwrap().is_zero());
    }

    #[test]
    fn subset_enumeration() {
        let all: Vec<_> = subsets(4, 2).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[5], vec![2, 3]);
        assert_eq!(subsets(3, 0).count(), 1);
        assert_eq!(subsets(2, 3).count(), 0);
    }
}
