//! Isomorphism-free enumeration of small posets.
//!
//! Posets on `n` elements are grown from the representatives on `n - 1`
//! elements by adjoining a new maximal element above a down-set. Every poset
//! arises this way (delete any maximal element), and deleting a maximal element
//! never raises the height, so the height filter can be applied at every level.

use std::collections::BTreeMap;

use crate::canon::{canonical_labeling, CanonicalForm, DEFAULT_ENUMERATION_BOUND};
use crate::error::{Error, Result};
use crate::poset::Poset;

/// One representative per isomorphism class of posets on `n` elements with
/// height at most `max_height`, ordered by canonical form.
pub fn enumerate_posets(n: usize, max_height: usize, connected_only: bool) -> Result<Vec<Poset>> {
    if n > DEFAULT_ENUMERATION_BOUND {
        return Err(Error::SizeBound {
            size: n,
            bound: DEFAULT_ENUMERATION_BOUND,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut level = vec![Poset::antichain(1)];
    for m in 2..=n {
        level = extend_level(&level, m, max_height);
    }
    Ok(level
        .into_iter()
        .filter(|p| !connected_only || p.is_connected())
        .collect())
}

/// All classes for every size `1..=max_n`, smallest first.
pub fn enumerate_up_to(max_n: usize, max_height: usize, connected_only: bool) -> Result<Vec<Poset>> {
    if max_n > DEFAULT_ENUMERATION_BOUND {
        return Err(Error::SizeBound {
            size: max_n,
            bound: DEFAULT_ENUMERATION_BOUND,
        });
    }
    let mut out = Vec::new();
    if max_n == 0 {
        return Ok(out);
    }
    let mut level = vec![Poset::antichain(1)];
    out.extend(level.iter().filter(|p| !connected_only || p.is_connected()).cloned());
    for m in 2..=max_n {
        level = extend_level(&level, m, max_height);
        out.extend(level.iter().filter(|p| !connected_only || p.is_connected()).cloned());
    }
    Ok(out)
}

fn extend_level(prev: &[Poset], m: usize, max_height: usize) -> Vec<Poset> {
    let mut seen: BTreeMap<CanonicalForm, Poset> = BTreeMap::new();
    for q in prev {
        let k = q.n();
        let depths = q.depths();
        for mask in 0u32..(1 << k) {
            if !is_down_set(q, mask) {
                continue;
            }
            let mut less = vec![false; m * m];
            for i in 1..=k {
                for j in 1..=k {
                    less[(i - 1) * m + (j - 1)] = q.less(i, j);
                }
                if mask & (1 << (i - 1)) != 0 {
                    less[(i - 1) * m + (m - 1)] = true;
                }
            }
            let depth_new = (1..=k)
                .filter(|&i| mask & (1 << (i - 1)) != 0)
                .map(|i| depths[i - 1] + 1)
                .max()
                .unwrap_or(0);
            if depth_new > max_height {
                continue;
            }
            let canon = canonical_labeling(m, &less, None);
            if seen.contains_key(&canon.form) {
                continue;
            }
            let rep = raw_relabel(&less, m, &canon.order);
            seen.insert(canon.form, rep);
        }
    }
    seen.into_values().collect()
}

fn raw_relabel(less: &[bool], m: usize, order: &[usize]) -> Poset {
    let mut gens = Vec::new();
    for a in 0..m {
        for b in 0..m {
            if less[order[a] * m + order[b]] {
                gens.push((a + 1, b + 1));
            }
        }
    }
    Poset::new(m, &gens).expect("canonical labelings are natural")
}

fn is_down_set(q: &Poset, mask: u32) -> bool {
    for j in 1..=q.n() {
        if mask & (1 << (j - 1)) != 0 {
            for i in q.down_set(j) {
                if mask & (1 << (i - 1)) == 0 {
                    return false;
                }
            }
        }
    }
    true
}
