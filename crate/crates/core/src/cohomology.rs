//! Chevalley–Eilenberg cohomology with adjoint coefficients in degrees 0..=2.
//!
//! Cochains `C^k = Hom(Lambda^k g, g)` are spanned by `(I, m)`: the map sending
//! the sorted basis wedge `b_I` to `b_m`. For poset algebras the differentials
//! preserve the weight `wt(b_m) - sum wt(b_I)` under the diagonal torus, so the
//! ranks are computed block by block.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::index::subsets;
use crate::linalg::{sparse_rank, Q};

/// Largest algebra dimension accepted by [`ce_cohomology_dims`].
pub const CE_DIM_BOUND: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CeDims {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
}

pub fn ce_cohomology_dims(g: &LieAlgebra) -> Result<CeDims> {
    let dim = g.dim();
    if dim > CE_DIM_BOUND {
        return Err(Error::SizeBound {
            size: dim,
            bound: CE_DIM_BOUND,
        });
    }
    let r0 = differential_rank(g, 0);
    let r1 = differential_rank(g, 1);
    let r2 = differential_rank(g, 2);
    let c1 = dim * dim;
    let c2 = dim * (dim * dim.saturating_sub(1) / 2);
    Ok(CeDims {
        h0: dim - r0,
        h1: c1 - r1 - r0,
        h2: c2 - r2 - r1,
    })
}

/// Rank of `d^k: C^k -> C^{k+1}`.
pub fn differential_rank(g: &LieAlgebra, k: usize) -> usize {
    let blocks = differential_rows(g, k);
    blocks.into_par_iter().map(|(_, rows)| sparse_rank(rows)).sum()
}

/// Rows of the matrix of `d^k`, grouped into weight blocks. Columns index
/// cochain basis elements `(I, m)`; rows are the components `(J, o)` of the
/// coboundary.
pub fn differential_rows(g: &LieAlgebra, k: usize) -> Vec<(Vec<i32>, Vec<Vec<(usize, Q)>>)> {
    let mut blocks: BTreeMap<Vec<i32>, Vec<Vec<(usize, Q)>>> = BTreeMap::new();
    for (weight, _, row) in differential_entries(g, k) {
        blocks.entry(weight).or_default().push(row);
    }
    blocks.into_iter().collect()
}

/// Nonzero rows of `d^k` as `(weight, row index, entries)`; the row index of
/// component `o` on the `t`-th `(k+1)`-subset is `t * dim + o`.
fn differential_entries(g: &LieAlgebra, k: usize) -> Vec<(Vec<i32>, usize, Vec<(usize, Q)>)> {
    let dim = g.dim();
    let col_subsets: Vec<Vec<usize>> = subsets(dim, k).collect();
    let col_index: HashMap<Vec<usize>, usize> =
        col_subsets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let col = |set: &[usize], m: usize| col_index[set] * dim + m;
    let weights = g.weights();
    let wt_sum = |set: &[usize], out: usize| -> Vec<i32> {
        match &weights {
            None => Vec::new(),
            Some(w) => {
                let mut acc = w[out].clone();
                for &s in set {
                    for (a, b) in acc.iter_mut().zip(&w[s]) {
                        *a -= b;
                    }
                }
                acc
            }
        }
    };
    let mut out = Vec::new();
    for (t, j) in subsets(dim, k + 1).enumerate() {
        // rows[o] accumulates the coefficient vector of (d omega)(b_J)_o
        let mut rows: Vec<BTreeMap<usize, Q>> = vec![BTreeMap::new(); dim];
        for (pos, &x) in j.iter().enumerate() {
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            let rest: Vec<usize> = j.iter().copied().filter(|&t| t != x).collect();
            // (-1)^pos [b_x, omega(rest)]
            for m in 0..dim {
                for (o, c) in g.bracket_basis(x, m) {
                    let e = rows[*o].entry(col(&rest, m)).or_insert_with(Q::zero);
                    *e += c * Q::from_integer(sign.into());
                }
            }
        }
        for a in 0..j.len() {
            for b in (a + 1)..j.len() {
                let sign: i64 = if (a + b) % 2 == 0 { 1 } else { -1 };
                let rest: Vec<usize> = j
                    .iter()
                    .enumerate()
                    .filter(|&(t, _)| t != a && t != b)
                    .map(|(_, &v)| v)
                    .collect();
                for (l, c) in g.bracket_basis(j[a], j[b]) {
                    if rest.contains(l) {
                        continue;
                    }
                    // omega(b_l, rest) = (-1)^{#rest < l} omega(sorted)
                    let before = rest.iter().filter(|&&t| t < *l).count();
                    let s = if before % 2 == 0 { sign } else { -sign };
                    let mut set = rest.clone();
                    set.insert(before, *l);
                    for (o, row) in rows.iter_mut().enumerate() {
                        let e = row.entry(col(&set, o)).or_insert_with(Q::zero);
                        *e += c * Q::from_integer(s.into());
                    }
                }
            }
        }
        for (o, row) in rows.into_iter().enumerate() {
            let row: Vec<(usize, Q)> = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            if !row.is_empty() {
                out.push((wt_sum(&j, o), t * dim + o, row));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;
    use crate::poset::Poset;

    #[test]
    fn abelian_line() {
        let g = LieAlgebra::from_structure_constants(1, &[]).unwrap();
        assert_eq!(ce_cohomology_dims(&g).unwrap(), CeDims { h0: 1, h1: 1, h2: 0 });
    }

    #[test]
    fn chain_three_is_rigid() {
        let g = LieAlgebra::type_a(&Poset::chain(3)).unwrap();
        let d = ce_cohomology_dims(&g).unwrap();
        assert_eq!(d.h0, 0);
        assert_eq!(d.h2, 0);
    }

    #[test]
    fn d_squared_is_zero() {
        let p = Poset::new(4, &[(1, 2), (2, 3), (2, 4)]).unwrap();
        let g = LieAlgebra::type_a(&p).unwrap();
        let raw = LieAlgebra::from_structure_constants(
            3,
            &[(1, 2, vec![(2, q(1))]), (1, 3, vec![(3, q(-1))]), (2, 3, vec![(1, q(1))])],
        );
        // sl2-like triple with [h,e]=e, [h,f]=-f, [e,f]=h is a Lie algebra
        let raw = raw.unwrap();
        for alg in [&g, &raw] {
            let dim = alg.dim();
            for k in 0..2 {
                let first = differential_entries(alg, k);
                let second = differential_entries(alg, k + 1);
                let ncols = subsets(dim, k).count() * dim;
                for c in 0..ncols {
                    // image of the c-th basis cochain under d^k
                    let mut image: BTreeMap<usize, Q> = BTreeMap::new();
                    for (_, r, row) in &first {
                        if let Some((_, v)) = row.iter().find(|(col, _)| *col == c) {
                            image.insert(*r, v.clone());
                        }
                    }
                    for (_, _, row) in &second {
                        let s: Q = row
                            .iter()
                            .filter_map(|(col, v)| image.get(col).map(|x| x * v))
                            .sum();
                        assert!(s.is_zero(), "d^{} d^{} nonzero", k + 1, k);
                    }
                }
            }
        }
    }
}
