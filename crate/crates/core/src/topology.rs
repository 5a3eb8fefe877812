//! Order complexes, rational simplicial homology and discrete Morse checks.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{q, sparse_rank, Q};
use crate::poset::Poset;

/// Homology is computed only for complexes up to this dimension.
pub const HOMOLOGY_DIM_BOUND: usize = 8;

/// A finite simplicial complex; `faces[d]` lists the `d`-faces as sorted
/// vertex tuples in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialComplex {
    faces: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    /// Builds a complex from its faces; every nonempty subset of a face must be
    /// listed too.
    pub fn from_faces(faces: &[Vec<usize>]) -> Result<Self> {
        let set: BTreeSet<Vec<usize>> = faces
            .iter()
            .map(|f| {
                let mut f = f.clone();
                f.sort_unstable();
                f.dedup();
                f
            })
            .filter(|f| !f.is_empty())
            .collect();
        for f in &set {
            if f.len() > 1 {
                for skip in 0..f.len() {
                    let mut sub = f.clone();
                    sub.remove(skip);
                    if !set.contains(&sub) {
                        return Err(Error::MissingFace(sub));
                    }
                }
            }
        }
        Ok(Self::from_sorted_set(set))
    }

    fn from_sorted_set(set: BTreeSet<Vec<usize>>) -> Self {
        let top = set.iter().map(Vec::len).max().unwrap_or(0);
        let mut faces = vec![Vec::new(); top];
        for f in set {
            faces[f.len() - 1].push(f);
        }
        Self { faces }
    }

    /// `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.faces.len().checked_sub(1)
    }

    pub fn faces(&self, d: usize) -> &[Vec<usize>] {
        self.faces.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn all_faces(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.faces.iter().flatten()
    }

    pub fn face_counts(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .enumerate()
            .map(|(d, f)| if d % 2 == 0 { f.len() as i64 } else { -(f.len() as i64) })
            .sum()
    }

    /// Rank over the rationals of the boundary map from `d`-faces to
    /// `(d-1)`-faces (`d >= 1`).
    pub fn boundary_rank(&self, d: usize) -> usize {
        if d == 0 || d >= self.faces.len() {
            return 0;
        }
        let index: HashMap<&Vec<usize>, usize> =
            self.faces[d - 1].iter().enumerate().map(|(i, f)| (f, i)).collect();
        let rows = self.faces[d].iter().map(|f| {
            (0..f.len())
                .map(|skip| {
                    let mut sub = f.clone();
                    sub.remove(skip);
                    let sign = if skip % 2 == 0 { 1 } else { -1 };
                    (index[&sub], q(sign))
                })
                .collect::<Vec<(usize, Q)>>()
        });
        sparse_rank(rows)
    }
}

/// All nonempty chains of `P`.
pub fn order_complex(p: &Poset) -> SimplicialComplex {
    let mut set = BTreeSet::new();
    let mut stack: Vec<Vec<usize>> = p.elements().map(|i| vec![i]).collect();
    while let Some(chain) = stack.pop() {
        let last = *chain.last().expect("chains are nonempty");
        for j in (last + 1)..=p.n() {
            if p.less(last, j) {
                let mut next = chain.clone();
                next.push(j);
                stack.push(next);
            }
        }
        set.insert(chain);
    }
    SimplicialComplex::from_sorted_set(set)
}

/// Rational Betti numbers `b_0..b_dim`; the reduced variant lowers `b_0` by
/// one for nonempty complexes.
pub fn betti_numbers(k: &SimplicialComplex, reduced: bool) -> Result<Vec<usize>> {
    let Some(dim) = k.dimension() else {
        return Ok(Vec::new());
    };
    if dim > HOMOLOGY_DIM_BOUND {
        return Err(Error::SizeBound {
            size: dim,
            bound: HOMOLOGY_DIM_BOUND,
        });
    }
    let ranks: Vec<usize> = (0..=dim + 1).map(|d| k.boundary_rank(d)).collect();
    let mut b: Vec<usize> = (0..=dim)
        .map(|d| k.faces(d).len() - ranks[d] - ranks[d + 1])
        .collect();
    if reduced {
        b[0] -= 1;
    }
    Ok(b)
}

/// Reduced rational homology of the order complex vanishes (which includes
/// connectedness).
pub fn verify_acyclic(p: &Poset) -> Result<bool> {
    if p.height() > 2 {
        return Err(Error::HeightBound {
            height: p.height(),
            bound: 2,
        });
    }
    Ok(betti_numbers(&order_complex(p), true)?.iter().all(|&b| b == 0))
}

/// A real-valued (here rational) function on the faces of a complex.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MorseAssignment {
    pub values: BTreeMap<Vec<usize>, Q>,
}

impl MorseAssignment {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Vec<usize>, Q)>) -> Self {
        Self {
            values: pairs
                .into_iter()
                .map(|(mut f, v)| {
                    f.sort_unstable();
                    (f, v)
                })
                .collect(),
        }
    }
}

/// Validates the discrete Morse condition and returns the critical faces in
/// dimension-then-lexicographic order.
pub fn check_morse(k: &SimplicialComplex, f: &MorseAssignment) -> Result<Vec<Vec<usize>>> {
    let value = |face: &Vec<usize>| f.values.get(face).ok_or_else(|| Error::MissingFace(face.clone()));
    for face in k.all_faces() {
        value(face)?;
    }
    let mut critical = Vec::new();
    for d in 0..k.faces.len() {
        for sigma in k.faces(d) {
            let fs = value(sigma)?;
            let mut up = 0;
            for tau in k.faces(d + 1) {
                if is_facet(sigma, tau) && value(tau)? <= fs {
                    up += 1;
                }
            }
            let mut down = 0;
            if d > 0 {
                for skip in 0..sigma.len() {
                    let mut nu = sigma.clone();
                    nu.remove(skip);
                    if value(&nu)? >= fs {
                        down += 1;
                    }
                }
            }
            if up > 1 || down > 1 || (up == 1 && down == 1) {
                return Err(Error::MorseConditionViolated {
                    face: sigma.clone(),
                    detail: format!("{up} non-increasing cofaces, {down} non-decreasing faces"),
                });
            }
            if up == 0 && down == 0 {
                critical.push(sigma.clone());
            }
        }
    }
    Ok(critical)
}

/// `a` is a codimension-one face of `b` (both sorted).
fn is_facet(a: &[usize], b: &[usize]) -> bool {
    b.len() == a.len() + 1 && a.iter().all(|x| b.binary_search(x).is_ok())
}

/// The discrete Morse function on the solid triangle `{1, 2, 3}` pairing
/// `{2}` with `{1,2}`, `{3}` with `{1,3}` and `{2,3}` with `{1,2,3}`, leaving
/// the vertex `{1}` as the only critical cell.
pub fn triangle_morse_assignment() -> MorseAssignment {
    MorseAssignment::from_pairs([
        (vec![1], q(0)),
        (vec![1, 2], q(1)),
        (vec![2], q(2)),
        (vec![1, 3], q(3)),
        (vec![3], q(4)),
        (vec![2, 3], q(6)),
        (vec![1, 2, 3], q(5)),
    ])
}
