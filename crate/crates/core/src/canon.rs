//! Canonical forms for posets (optionally decorated with an extra integer
//! matrix), used to deduplicate enumerations up to isomorphism.
//!
//! Elements are first colored by an isomorphism-invariant refinement that
//! starts from (depth, down-degree, up-degree). Candidate labelings list the
//! color classes in increasing order, so every candidate is automatically a
//! natural labeling; the canonical code is the lexicographically least
//! relation encoding over all of them.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::{depths_of, Poset};

pub const DEFAULT_ENUMERATION_BOUND: usize = 9;

/// A complete isomorphism invariant of a (decorated) poset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub n: usize,
    pub code: Vec<u8>,
}

/// Result of a canonical labeling search.
#[derive(Debug, Clone)]
pub struct Canonical {
    pub form: CanonicalForm,
    /// `order[k]` is the 0-based original element placed at label `k + 1`.
    pub order: Vec<usize>,
}

impl Canonical {
    /// `new_label[old - 1]`, 1-based.
    pub fn new_labels(&self) -> Vec<usize> {
        let mut out = vec![0; self.order.len()];
        for (pos, &old) in self.order.iter().enumerate() {
            out[old] = pos + 1;
        }
        out
    }
}

pub fn canonical_form(p: &Poset) -> Result<CanonicalForm> {
    canonical_form_bounded(p, DEFAULT_ENUMERATION_BOUND)
}

pub fn canonical_form_bounded(p: &Poset, bound: usize) -> Result<CanonicalForm> {
    if p.n() > bound {
        return Err(Error::SizeBound {
            size: p.n(),
            bound,
        });
    }
    Ok(canonical_labeling(p.n(), p.table(), None).form)
}

/// The canonical representative of the isomorphism class of `p`.
pub fn canonical_poset(p: &Poset) -> Result<Poset> {
    if p.n() > DEFAULT_ENUMERATION_BOUND {
        return Err(Error::SizeBound {
            size: p.n(),
            bound: DEFAULT_ENUMERATION_BOUND,
        });
    }
    let c = canonical_labeling(p.n(), p.table(), None);
    p.relabel(&c.new_labels())
}

pub fn are_isomorphic(p: &Poset, q: &Poset) -> Result<bool> {
    if p.n() != q.n() || p.relation_count() != q.relation_count() {
        // still enforce the bound for consistent error behaviour
        canonical_form(p)?;
        canonical_form(q)?;
        return Ok(false);
    }
    Ok(canonical_form(p)? == canonical_form(q)?)
}

/// Canonical labeling of an order table (0-based, `less[i * n + j]`) with an
/// optional decoration matrix of the same shape.
pub fn canonical_labeling(n: usize, less: &[bool], deco: Option<&[u8]>) -> Canonical {
    let colors = refine_colors(n, less, deco);
    let mut classes: Vec<usize> = colors.clone();
    classes.sort_unstable();
    let ncolors = classes.last().map_or(0, |c| c + 1);
    let mut members = vec![Vec::new(); ncolors];
    for (e, &c) in colors.iter().enumerate() {
        members[c].push(e);
    }
    let mut search = Search {
        n,
        less,
        deco,
        class_of_pos: classes,
        members,
        used: vec![false; n],
        order: Vec::with_capacity(n),
        code: Vec::new(),
        best: None,
        best_order: Vec::new(),
    };
    search.dfs(0);
    Canonical {
        form: CanonicalForm {
            n,
            code: search.best.unwrap_or_default(),
        },
        order: search.best_order,
    }
}

struct Search<'a> {
    n: usize,
    less: &'a [bool],
    deco: Option<&'a [u8]>,
    class_of_pos: Vec<usize>,
    members: Vec<Vec<usize>>,
    used: Vec<bool>,
    order: Vec<usize>,
    code: Vec<u8>,
    best: Option<Vec<u8>>,
    best_order: Vec<usize>,
}

impl Search<'_> {
    fn push_column(&mut self, e: usize) {
        let n = self.n;
        for &o in &self.order {
            self.code.push(self.less[o * n + e] as u8);
        }
        if let Some(d) = self.deco {
            for &o in &self.order {
                self.code.push(d[o * n + e]);
                self.code.push(d[e * n + o]);
            }
            self.code.push(d[e * n + e]);
        }
    }

    fn prefix_cmp(&self) -> Ordering {
        match &self.best {
            None => Ordering::Less,
            Some(best) => self.code[..].cmp(&best[..self.code.len()]),
        }
    }

    fn dfs(&mut self, k: usize) {
        if k == self.n {
            if self.prefix_cmp() == Ordering::Less {
                self.best = Some(self.code.clone());
                self.best_order = self.order.clone();
            }
            return;
        }
        let class = self.class_of_pos[k];
        for idx in 0..self.members[class].len() {
            let e = self.members[class][idx];
            if self.used[e] {
                continue;
            }
            let start = self.code.len();
            self.push_column(e);
            if self.prefix_cmp() != Ordering::Greater {
                self.used[e] = true;
                self.order.push(e);
                self.dfs(k + 1);
                self.order.pop();
                self.used[e] = false;
            }
            self.code.truncate(start);
        }
    }
}

/// Iterated color refinement; colors are ranks of sorted signatures, so they
/// depend only on the isomorphism type.
fn refine_colors(n: usize, less: &[bool], deco: Option<&[u8]>) -> Vec<usize> {
    let depth = depths_of(n, less);
    let initial: Vec<Vec<u32>> = (0..n)
        .map(|e| {
            let down = (0..n).filter(|&o| less[o * n + e]).count() as u32;
            let up = (0..n).filter(|&o| less[e * n + o]).count() as u32;
            let mut sig = vec![depth[e] as u32, down, up];
            if let Some(d) = deco {
                sig.push(d[e * n + e] as u32);
                let mut out: Vec<u32> = (0..n).filter(|&o| o != e).map(|o| d[e * n + o] as u32).collect();
                let mut inn: Vec<u32> = (0..n).filter(|&o| o != e).map(|o| d[o * n + e] as u32).collect();
                out.sort_unstable();
                inn.sort_unstable();
                sig.extend(out);
                sig.push(u32::MAX);
                sig.extend(inn);
            }
            sig
        })
        .collect();
    let mut colors = rank_signatures(&initial);
    loop {
        let count = colors.iter().max().map_or(0, |c| c + 1);
        let sigs: Vec<Vec<u32>> = (0..n)
            .map(|e| {
                let mut sig = vec![colors[e] as u32];
                let mut below: Vec<u32> = (0..n).filter(|&o| less[o * n + e]).map(|o| colors[o] as u32).collect();
                let mut above: Vec<u32> = (0..n).filter(|&o| less[e * n + o]).map(|o| colors[o] as u32).collect();
                below.sort_unstable();
                above.sort_unstable();
                sig.extend(below);
                sig.push(u32::MAX);
                sig.extend(above);
                if let Some(d) = deco {
                    let mut out: Vec<(u32, u32)> = (0..n)
                        .filter(|&o| o != e && d[e * n + o] != 0)
                        .map(|o| (d[e * n + o] as u32, colors[o] as u32))
                        .collect();
                    let mut inn: Vec<(u32, u32)> = (0..n)
                        .filter(|&o| o != e && d[o * n + e] != 0)
                        .map(|o| (d[o * n + e] as u32, colors[o] as u32))
                        .collect();
                    out.sort_unstable();
                    inn.sort_unstable();
                    sig.push(u32::MAX);
                    sig.extend(out.into_iter().flat_map(|(a, b)| [a, b]));
                    sig.push(u32::MAX);
                    sig.extend(inn.into_iter().flat_map(|(a, b)| [a, b]));
                }
                sig
            })
            .collect();
        let next = rank_signatures(&sigs);
        let next_count = next.iter().max().map_or(0, |c| c + 1);
        colors = next;
        if next_count == count {
            return colors;
        }
    }
}

fn rank_signatures(sigs: &[Vec<u32>]) -> Vec<usize> {
    let mut distinct: Vec<&Vec<u32>> = sigs.iter().collect();
    distinct.sort();
    distinct.dedup();
    sigs.iter()
        .map(|s| distinct.binary_search(&s).expect("signature present"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_one_is_p112() {
        let ex1 = Poset::new(4, &[(1, 2), (2, 3), (2, 4)]).unwrap();
        let p112 = Poset::complete(&[1, 1, 2]).unwrap();
        assert!(are_isomorphic(&ex1, &p112).unwrap());
    }

    #[test]
    fn chain_vs_antichain() {
        assert!(!are_isomorphic(&Poset::chain(3), &Poset::antichain(3)).unwrap());
    }

    #[test]
    fn v_shapes_differ() {
        let v_up = Poset::new(3, &[(1, 2), (1, 3)]).unwrap();
        let v_down = Poset::new(3, &[(1, 3), (2, 3)]).unwrap();
        assert!(!are_isomorphic(&v_up, &v_down).unwrap());
    }

    #[test]
    fn size_bound() {
        let big = Poset::antichain(10);
        assert_eq!(
            canonical_form(&big),
            Err(Error::SizeBound { size: 10, bound: 9 })
        );
    }

    #[test]
    fn canonical_poset_is_isomorphic_and_natural() {
        let p = Poset::new(5, &[(1, 4), (2, 4), (3, 5), (2, 5)]).unwrap();
        let c = canonical_poset(&p).unwrap();
        assert!(are_isomorphic(&p, &c).unwrap());
        assert_eq!(canonical_poset(&c).unwrap(), c);
    }
}
