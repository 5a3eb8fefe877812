//! Finite naturally labeled posets.
//!
//! Elements are the integers `1..=n`. The strict order is stored transitively
//! closed as a boolean `n x n` table, and `i < j` as integers whenever `i`
//! precedes `j`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone)]
pub struct Poset {
    n: usize,
    less: Vec<bool>,
    covers: OnceLock<Vec<(usize, usize)>>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.less == other.less
    }
}

impl Eq for Poset {}

impl std::hash::Hash for Poset {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.less.hash(state);
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("n", &self.n)
            .field("relations", &self.relations())
            .finish()
    }
}

/// Cover relations, component count and per-element depth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HasseData {
    pub covers: Vec<(usize, usize)>,
    pub components: usize,
    /// `heights[i - 1]` is the number of elements in the longest chain ending
    /// at `i`, minus one.
    pub heights: Vec<usize>,
}

/// Minimal and maximal elements together with the relations among them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalData {
    pub ext: Vec<usize>,
    pub rel_e: Vec<(usize, usize)>,
    pub interior: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpDown {
    pub down: usize,
    pub up: usize,
    pub ud: usize,
}

/// The subposet `{j : i <= j or j <= i}` around an interior element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighborhood {
    pub poset: Poset,
    /// Original labels, in the order of the new natural labels.
    pub elements: Vec<usize>,
    /// `(D(P, i), 1, U(P, i))`.
    pub shape: (usize, usize, usize),
}

impl Poset {
    /// Builds the poset generated by `generators` (closure implied).
    pub fn new(n: usize, generators: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyPoset);
        }
        let mut less = vec![false; n * n];
        for &(i, j) in generators {
            for e in [i, j] {
                if e == 0 || e > n {
                    return Err(Error::OutOfRange { element: e, n });
                }
            }
            if i >= j {
                return Err(Error::LabelOrderViolation(i, j));
            }
            less[(i - 1) * n + (j - 1)] = true;
        }
        close_transitively(n, &mut less);
        Ok(Self::from_closed(n, less))
    }

    fn from_closed(n: usize, less: Vec<bool>) -> Self {
        Self {
            n,
            less,
            covers: OnceLock::new(),
        }
    }

    /// Builds a poset from an acyclic relation table (closure implied),
    /// relabeling naturally by the linear extension that always takes the
    /// smallest available old index. Old labels that were already natural keep
    /// their relative order. Returns the poset and `new_label[old - 1]`.
    pub(crate) fn from_table_relabeled(n: usize, less: &[bool]) -> (Self, Vec<usize>) {
        let mut table = less.to_vec();
        close_transitively(n, &mut table);
        let mut placed = vec![false; n];
        let mut new_label = vec![0; n];
        for pos in 0..n {
            let next = (0..n)
                .find(|&e| !placed[e] && (0..n).all(|o| placed[o] || !table[o * n + e]))
                .expect("relation table is acyclic");
            placed[next] = true;
            new_label[next] = pos + 1;
        }
        let mut out = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] {
                    out[(new_label[a] - 1) * n + (new_label[b] - 1)] = true;
                }
            }
        }
        (Self::from_closed(n, out), new_label)
    }

    pub fn antichain(n: usize) -> Self {
        assert!(n > 0, "antichain needs at least one element");
        Self::from_closed(n, vec![false; n * n])
    }

    pub fn chain(n: usize) -> Self {
        let gens: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        Self::new(n, &gens).expect("chain generators are valid")
    }

    /// The complete pure poset with `ranks[k]` elements at rank `k`.
    pub fn complete(ranks: &[usize]) -> Result<Self> {
        if ranks.is_empty() || ranks.contains(&0) {
            return Err(Error::EmptyPoset);
        }
        let n: usize = ranks.iter().sum();
        let mut level = Vec::with_capacity(n);
        for (k, &r) in ranks.iter().enumerate() {
            level.extend(std::iter::repeat_n(k, r));
        }
        let mut less = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                less[a * n + b] = level[a] < level[b];
            }
        }
        Ok(Self::from_closed(n, less))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.n
    }

    /// `i < j` in the poset (strict).
    pub fn less(&self, i: usize, j: usize) -> bool {
        self.less[(i - 1) * self.n + (j - 1)]
    }

    pub fn related(&self, i: usize, j: usize) -> bool {
        i == j || self.less(i, j) || self.less(j, i)
    }

    pub(crate) fn table(&self) -> &[bool] {
        &self.less
    }

    /// All strict relations, lexicographically ordered.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 1..=self.n {
            for j in (i + 1)..=self.n {
                if self.less(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn relation_count(&self) -> usize {
        self.less.iter().filter(|&&b| b).count()
    }

    pub fn down_set(&self, j: usize) -> Vec<usize> {
        (1..j).filter(|&i| self.less(i, j)).collect()
    }

    pub fn up_set(&self, j: usize) -> Vec<usize> {
        ((j + 1)..=self.n).filter(|&i| self.less(j, i)).collect()
    }

    pub fn up_down(&self, j: usize) -> UpDown {
        let down = self.down_set(j).len();
        let up = self.up_set(j).len();
        let ud = if up != down { up.abs_diff(down) } else { 2 };
        UpDown { down, up, ud }
    }

    pub fn is_minimal(&self, i: usize) -> bool {
        (1..i).all(|k| !self.less(k, i))
    }

    pub fn is_maximal(&self, i: usize) -> bool {
        ((i + 1)..=self.n).all(|k| !self.less(i, k))
    }

    pub fn is_extremal(&self, i: usize) -> bool {
        self.is_minimal(i) || self.is_maximal(i)
    }

    pub fn extremal_data(&self) -> ExtremalData {
        let (ext, interior): (Vec<usize>, Vec<usize>) =
            self.elements().partition(|&i| self.is_extremal(i));
        let rel_e = self
            .relations()
            .into_iter()
            .filter(|&(i, j)| self.is_extremal(i) && self.is_extremal(j))
            .collect();
        ExtremalData {
            ext,
            rel_e,
            interior,
        }
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        self.covers.get_or_init(|| {
            self.relations()
                .into_iter()
                .filter(|&(i, j)| !((i + 1)..j).any(|k| self.less(i, k) && self.less(k, j)))
                .collect()
        })
    }

    pub fn is_cover(&self, i: usize, j: usize) -> bool {
        self.covers().binary_search(&(i, j)).is_ok()
    }

    /// Per-element depth: length of the longest chain ending at the element.
    pub fn depths(&self) -> Vec<usize> {
        depths_of(self.n, &self.less)
    }

    /// One less than the largest cardinality of a chain.
    pub fn height(&self) -> usize {
        self.depths().into_iter().max().unwrap_or(0)
    }

    /// Connected components of the Hasse diagram, each sorted, ordered by
    /// smallest element.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..=self.n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let next = p[c];
                p[c] = r;
                c = next;
            }
            r
        }
        for &(i, j) in self.covers() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in self.elements() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        groups.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    pub fn hasse(&self) -> HasseData {
        HasseData {
            covers: self.covers().to_vec(),
            components: self.components().len(),
            heights: self.depths(),
        }
    }

    /// The induced subposet on `subset`, relabeled `1..` in increasing order of
    /// the original labels (which keeps the labeling natural).
    pub fn induced(&self, subset: &[usize]) -> (Poset, Vec<usize>) {
        let elems: Vec<usize> = subset.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let m = elems.len();
        let mut less = vec![false; m * m];
        for (a, &i) in elems.iter().enumerate() {
            for (b, &j) in elems.iter().enumerate() {
                less[a * m + b] = self.less(i, j);
            }
        }
        (Self::from_closed(m, less), elems)
    }

    /// `P^i`, defined for interior elements of height-at-most-two posets.
    pub fn interior_neighborhood(&self, i: usize) -> Result<Neighborhood> {
        self.check_element(i)?;
        if self.is_extremal(i) {
            return Err(Error::NotInterior(i));
        }
        let h = self.height();
        if h > 2 {
            return Err(Error::HeightBound { height: h, bound: 2 });
        }
        let members: Vec<usize> = self.elements().filter(|&j| self.related(i, j)).collect();
        let (poset, elements) = self.induced(&members);
        let ud = self.up_down(i);
        Ok(Neighborhood {
            poset,
            elements,
            shape: (ud.down, 1, ud.up),
        })
    }

    /// `P + Q`: elements of `other` are shifted by `self.n()`.
    pub fn disjoint_sum(&self, other: &Poset) -> Poset {
        let n = self.n + other.n;
        let mut less = vec![false; n * n];
        for i in 1..=self.n {
            for j in 1..=self.n {
                less[(i - 1) * n + (j - 1)] = self.less(i, j);
            }
        }
        for i in 1..=other.n {
            for j in 1..=other.n {
                less[(self.n + i - 1) * n + (self.n + j - 1)] = other.less(i, j);
            }
        }
        Self::from_closed(n, less)
    }

    /// Applies a bijection `new_label[old - 1]`; fails if the image is not
    /// naturally labeled.
    pub fn relabel(&self, new_label: &[usize]) -> Result<Poset> {
        if new_label.len() != self.n {
            return Err(Error::OutOfRange {
                element: new_label.len(),
                n: self.n,
            });
        }
        let mut gens = Vec::new();
        for (i, j) in self.relations() {
            gens.push((new_label[i - 1], new_label[j - 1]));
        }
        let p = Poset::new(self.n, &gens)?;
        if p.relation_count() != self.relation_count() {
            return Err(Error::Parse("relabeling is not a bijection".into()));
        }
        Ok(p)
    }

    /// Whether the undirected Hasse diagram (of `P` or of `P_Ext(P)`) is a
    /// forest. Returns `(is_forest, witness_cycle)`.
    pub fn is_forest(&self, restrict_to_ext: bool) -> (bool, Option<Vec<usize>>) {
        let cycle = if restrict_to_ext {
            let ext = self.extremal_data().ext;
            let (sub, labels) = self.induced(&ext);
            find_cycle(sub.n, sub.covers())
                .map(|c| canonical_cycle(c.into_iter().map(|v| labels[v - 1]).collect()))
        } else {
            find_cycle(self.n, self.covers())
        };
        (cycle.is_none(), cycle)
    }

    pub(crate) fn check_element(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            Err(Error::OutOfRange {
                element: i,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }
}

pub(crate) fn close_transitively(n: usize, less: &mut [bool]) {
    for k in 0..n {
        for i in 0..n {
            if less[i * n + k] {
                for j in 0..n {
                    if less[k * n + j] {
                        less[i * n + j] = true;
                    }
                }
            }
        }
    }
}

pub(crate) fn depths_of(n: usize, less: &[bool]) -> Vec<usize> {
    // Relations only go from lower to higher labels for natural posets, but
    // this is also used for unlabeled tables, so iterate to a fixed point.
    let mut depth = vec![0usize; n];
    loop {
        let mut changed = false;
        for j in 0..n {
            for i in 0..n {
                if less[i * n + j] && depth[i] + 1 > depth[j] {
                    depth[j] = depth[i] + 1;
                    changed = true;
                }
            }
        }
        if !changed {
            return depth;
        }
    }
}

/// Finds a simple cycle (length >= 3) in an undirected graph on `1..=n`.
fn find_cycle(n: usize, edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut adj = vec![Vec::new(); n + 1];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
    }
    let mut parent = vec![0usize; n + 1];
    let mut visited = vec![false; n + 1];
    for root in 1..=n {
        if visited[root] {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        visited[root] = true;
        while let Some(top) = stack.len().checked_sub(1) {
            let (v, next) = stack[top];
            if next < adj[v].len() {
                let w = adj[v][next];
                stack[top].1 += 1;
                if w == parent[v] {
                    continue;
                }
                if visited[w] {
                    // back edge v -> w; w is an ancestor on the stack
                    let mut cycle = vec![v];
                    let mut u = v;
                    while u != w {
                        u = parent[u];
                        cycle.push(u);
                    }
                    return Some(canonical_cycle(cycle));
                }
                visited[w] = true;
                parent[w] = v;
                stack.push((w, 0));
            } else {
                stack.pop();
            }
        }
    }
    None
}

/// Rotates a cycle to start at its smallest vertex, walking towards the
/// smaller of the two neighbours.
pub fn canonical_cycle(mut cycle: Vec<usize>) -> Vec<usize> {
    let pos = cycle
        .iter()
        .enumerate()
        .min_by_key(|&(_, v)| *v)
        .map(|(i, _)| i)
        .unwrap_or(0);
    cycle.rotate_left(pos);
    if cycle.len() > 2 && cycle[cycle.len() - 1] < cycle[1] {
        cycle[1..].reverse();
    }
    cycle
}

/// Two vertex sequences describe the same undirected cycle.
pub fn same_cycle(a: &[usize], b: &[usize]) -> bool {
    canonical_cycle(a.to_vec()) == canonical_cycle(b.to_vec())
}

impl fmt::Display for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self
            .covers()
            .iter()
            .map(|(i, j)| format!("{i}<{j}"))
            .collect();
        write!(f, "P[n={}; {}]", self.n, rels.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_one() -> Poset {
        Poset::new(4, &[(1, 2), (2, 3), (2, 4)]).unwrap()
    }

    fn six_with_cycle() -> Poset {
        Poset::new(6, &[(1, 3), (1, 4), (3, 5), (4, 5), (2, 4), (4, 6)]).unwrap()
    }

    #[test]
    fn closure_of_example_one() {
        let p = example_one();
        assert_eq!(p.relations(), vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)]);
        assert_eq!(Poset::new(3, &[]).unwrap().relations(), vec![]);
        let h1 = Poset::new(4, &[(1, 3), (1, 4), (2, 3), (2, 4)]).unwrap();
        assert_eq!(h1.relations().len(), 4);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Poset::new(3, &[(2, 1)]), Err(Error::LabelOrderViolation(2, 1)));
        assert_eq!(Poset::new(3, &[(2, 2)]), Err(Error::LabelOrderViolation(2, 2)));
        assert_eq!(
            Poset::new(3, &[(1, 4)]),
            Err(Error::OutOfRange { element: 4, n: 3 })
        );
        assert_eq!(Poset::new(0, &[]), Err(Error::EmptyPoset));
    }

    #[test]
    fn extremal_data_examples() {
        let e = example_one().extremal_data();
        assert_eq!(e.ext, vec![1, 3, 4]);
        assert_eq!(e.rel_e, vec![(1, 3), (1, 4)]);
        assert_eq!(e.interior, vec![2]);

        let e = Poset::antichain(3).extremal_data();
        assert_eq!(e.ext, vec![1, 2, 3]);
        assert!(e.rel_e.is_empty());

        let e = Poset::chain(3).extremal_data();
        assert_eq!(e.ext, vec![1, 3]);
        assert_eq!(e.rel_e, vec![(1, 3)]);
        assert_eq!(e.interior, vec![2]);
    }

    #[test]
    fn up_down_counts() {
        assert_eq!(example_one().up_down(2), UpDown { down: 1, up: 2, ud: 1 });
        assert_eq!(Poset::chain(3).up_down(2), UpDown { down: 1, up: 1, ud: 2 });
        assert_eq!(Poset::antichain(3).up_down(2), UpDown { down: 0, up: 0, ud: 2 });
    }

    #[test]
    fn neighborhoods() {
        let nb = example_one().interior_neighborhood(2).unwrap();
        assert_eq!(nb.shape, (1, 1, 2));
        assert_eq!(nb.poset, Poset::complete(&[1, 1, 2]).unwrap());

        let nb = Poset::chain(3).interior_neighborhood(2).unwrap();
        assert_eq!(nb.shape, (1, 1, 1));
        assert_eq!(nb.poset, Poset::chain(3));

        let nb = six_with_cycle().interior_neighborhood(4).unwrap();
        assert_eq!(nb.shape, (2, 1, 2));
        assert_eq!(nb.elements, vec![1, 2, 4, 5, 6]);

        assert_eq!(
            example_one().interior_neighborhood(1),
            Err(Error::NotInterior(1))
        );
        assert!(matches!(
            Poset::chain(4).interior_neighborhood(2),
            Err(Error::HeightBound { .. })
        ));
    }

    #[test]
    fn complete_posets() {
        assert_eq!(Poset::complete(&[1, 1]).unwrap(), Poset::chain(2));
        let p = Poset::complete(&[2, 1, 1]).unwrap();
        assert_eq!(p.relations(), vec![(1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        assert_eq!(p.covers(), &[(1, 3), (2, 3), (3, 4)]);
        assert_eq!(Poset::complete(&[]), Err(Error::EmptyPoset));
    }

    #[test]
    fn disjoint_sums() {
        let s = Poset::chain(2).disjoint_sum(&Poset::chain(2));
        assert_eq!(s.relations(), vec![(1, 2), (3, 4)]);
        assert_eq!(s.components().len(), 2);
        let t = example_one().disjoint_sum(&Poset::antichain(1));
        assert_eq!(t.n(), 5);
        assert_eq!(t.components().len(), 2);
        assert!(t.is_minimal(5) && t.is_maximal(5));
    }

    #[test]
    fn hasse_data() {
        let h = example_one().hasse();
        assert_eq!(h.covers, vec![(1, 2), (2, 3), (2, 4)]);
        assert_eq!(h.components, 1);
        assert_eq!(example_one().height(), 2);
        let a = Poset::antichain(3);
        assert_eq!(a.hasse().components, 3);
        assert!(a.covers().is_empty());
        assert_eq!(a.height(), 0);
    }

    #[test]
    fn forests_and_cycles() {
        let right = Poset::new(4, &[(1, 3), (1, 4), (2, 3), (2, 4)]).unwrap();
        let (ok, cyc) = right.is_forest(false);
        assert!(!ok);
        assert!(same_cycle(&cyc.unwrap(), &[1, 4, 2, 3]));

        let (ok, _) = Poset::chain(3).is_forest(true);
        assert!(ok);

        let (ok, cyc) = six_with_cycle().is_forest(false);
        assert!(!ok);
        assert_eq!(cyc.unwrap(), vec![1, 3, 5, 4]);

        let (ok, cyc) = six_with_cycle().is_forest(true);
        assert!(!ok);
        let cyc = cyc.unwrap();
        assert_eq!(cyc.len(), 4);
        assert!(same_cycle(&cyc, &[1, 5, 2, 6]));
    }

    #[test]
    fn relabel_rejects_unnatural() {
        let p = Poset::chain(2);
        assert!(p.relabel(&[2, 1]).is_err());
        assert_eq!(p.relabel(&[1, 2]).unwrap(), p);
    }
}
