//! Matrix Lie algebras over the rationals: type-A Lie poset algebras and
//! algebras given by raw structure constants, with the Kirillov matrices
//! `B_phi`, `B^_phi` and the center.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{q, RationalMatrix, Q};
use crate::poset::Poset;

/// Jacobi identity is checked on construction only up to this dimension.
pub const JACOBI_CHECK_BOUND: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisLabel {
    /// `E_{1,1} - E_{p,p}`, `p > 1`.
    DiagDiff(usize),
    /// `E_{p,q}` with `p < q` in the poset.
    Elem(usize, usize),
    /// Basis vector `e_i` of a raw algebra (1-based).
    Opaque(usize),
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::DiagDiff(p) => write!(f, "E11-E{p}{p}"),
            BasisLabel::Elem(a, b) => write!(f, "E{a},{b}"),
            BasisLabel::Opaque(i) => write!(f, "e{i}"),
        }
    }
}

/// Sparse coordinate vector over a basis: `(index, coefficient)` pairs with
/// increasing indices and no zeros.
pub type SparseVec = Vec<(usize, Q)>;

/// A one-form on a Lie algebra.
#[derive(Debug, Clone, PartialEq)]
pub enum Functional {
    /// `sum c_{ij} E*_{ij}` over matrix positions (1-based, `i <= j`).
    Matrix(BTreeMap<(usize, usize), Q>),
    /// Values on the basis, in basis order.
    Dual(Vec<Q>),
}

impl Functional {
    pub fn zero_matrix() -> Self {
        Functional::Matrix(BTreeMap::new())
    }

    /// Builds a matrix functional from `(i, j, coefficient)` terms, summing
    /// repeated positions.
    pub fn from_terms(terms: impl IntoIterator<Item = (usize, usize, Q)>) -> Self {
        let mut map = BTreeMap::new();
        for (i, j, c) in terms {
            *map.entry((i, j)).or_insert_with(Q::zero) += c;
        }
        map.retain(|_, c: &mut Q| !c.is_zero());
        Functional::Matrix(map)
    }

    /// Nonzero matrix terms, ordered by position. Empty for dual functionals.
    pub fn terms(&self) -> Vec<(usize, usize, Q)> {
        match self {
            Functional::Matrix(m) => m
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(&(i, j), c)| (i, j, c.clone()))
                .collect(),
            Functional::Dual(_) => Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LieAlgebra {
    basis: Vec<BasisLabel>,
    /// `brackets[i * dim + j]` = coordinates of `[b_i, b_j]`.
    brackets: Vec<SparseVec>,
    origin: Option<Poset>,
}

impl LieAlgebra {
    /// The type-A Lie poset algebra `g_A(P)`: trace-zero matrices supported on
    /// the diagonal and the strict relations of `P`.
    pub fn type_a(p: &Poset) -> Result<Self> {
        let n = p.n();
        if n < 2 {
            return Err(Error::TooSmall);
        }
        let mut basis: Vec<BasisLabel> = (2..=n).map(BasisLabel::DiagDiff).collect();
        basis.extend(p.relations().into_iter().map(|(a, b)| BasisLabel::Elem(a, b)));
        let index: BTreeMap<BasisLabel, usize> = basis.iter().enumerate().map(|(k, &b)| (b, k)).collect();
        let dim = basis.len();
        let mut brackets = vec![Vec::new(); dim * dim];
        for (i, &x) in basis.iter().enumerate() {
            for (j, &y) in basis.iter().enumerate() {
                let v = match (x, y) {
                    (BasisLabel::DiagDiff(_), BasisLabel::DiagDiff(_)) => Vec::new(),
                    (BasisLabel::DiagDiff(s), BasisLabel::Elem(a, b)) => {
                        let w = diag_weight(s, a, b);
                        if w == 0 {
                            Vec::new()
                        } else {
                            vec![(index[&y], q(w))]
                        }
                    }
                    (BasisLabel::Elem(a, b), BasisLabel::DiagDiff(s)) => {
                        let w = diag_weight(s, a, b);
                        if w == 0 {
                            Vec::new()
                        } else {
                            vec![(index[&x], q(-w))]
                        }
                    }
                    (BasisLabel::Elem(a, b), BasisLabel::Elem(c, d)) => {
                        let mut v = Vec::new();
                        if b == c {
                            v.push((index[&BasisLabel::Elem(a, d)], q(1)));
                        }
                        if d == a {
                            v.push((index[&BasisLabel::Elem(c, b)], q(-1)));
                        }
                        v.sort_by_key(|t| t.0);
                        v
                    }
                    _ => unreachable!("poset algebras have no opaque labels"),
                };
                brackets[i * dim + j] = v;
            }
        }
        Ok(Self {
            basis,
            brackets,
            origin: Some(p.clone()),
        })
    }

    /// An algebra on `e_1..e_dim` from 1-based bracket triples `[e_i, e_j] =
    /// sum c_k e_k`. Pairs not listed bracket to zero; listing both `(i,j)` and
    /// `(j,i)` is allowed if they agree up to sign.
    pub fn from_structure_constants(dim: usize, brackets: &[(usize, usize, Vec<(usize, Q)>)]) -> Result<Self> {
        let mut table: Vec<Option<SparseVec>> = vec![None; dim * dim];
        for (i, j, coords) in brackets {
            let (i, j) = (*i, *j);
            for &idx in [i, j].iter().chain(coords.iter().map(|(k, _)| k)) {
                if idx == 0 || idx > dim {
                    return Err(Error::BasisOutOfRange { index: idx, dim });
                }
            }
            let v = normalize(coords.iter().map(|(k, c)| (k - 1, c.clone())));
            if i == j {
                if !v.is_empty() {
                    return Err(Error::AntisymmetryViolation(i, j));
                }
                continue;
            }
            let neg = scale(&v, &q(-1));
            let (a, b) = (i - 1, j - 1);
            for (slot, val) in [(a * dim + b, &v), (b * dim + a, &neg)] {
                match &table[slot] {
                    Some(existing) if existing != val => {
                        return Err(Error::AntisymmetryViolation(i, j));
                    }
                    _ => table[slot] = Some(val.clone()),
                }
            }
        }
        let alg = Self {
            basis: (1..=dim).map(BasisLabel::Opaque).collect(),
            brackets: table.into_iter().map(Option::unwrap_or_default).collect(),
            origin: None,
        };
        if dim <= JACOBI_CHECK_BOUND {
            alg.check_jacobi()?;
        }
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisLabel] {
        &self.basis
    }

    pub fn origin(&self) -> Option<&Poset> {
        self.origin.as_ref()
    }

    /// Coordinates of `[b_i, b_j]` (0-based indices).
    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.brackets[i * self.dim() + j]
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let dim = self.dim();
        let mut out = vec![Q::zero(); dim];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let f = xi * yj;
                for (k, c) in self.bracket_basis(i, j) {
                    out[*k] += &f * c;
                }
            }
        }
        out
    }

    /// Index of a basis label.
    pub fn position(&self, label: BasisLabel) -> Option<usize> {
        self.basis.iter().position(|&b| b == label)
    }

    pub fn check_jacobi(&self) -> Result<()> {
        let dim = self.dim();
        for i in 0..dim {
            for j in (i + 1)..dim {
                for k in (j + 1)..dim {
                    let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        // [b_a, [b_b, b_c]]
                        for (m, cm) in self.bracket_basis(b, c) {
                            for (t, ct) in self.bracket_basis(a, *m) {
                                *acc.entry(*t).or_insert_with(Q::zero) += cm * ct;
                            }
                        }
                    }
                    if acc.values().any(|v| !v.is_zero()) {
                        return Err(Error::JacobiViolation(i + 1, j + 1, k + 1));
                    }
                }
            }
        }
        Ok(())
    }

    /// Values of `phi` on the basis.
    pub fn dual_vector(&self, phi: &Functional) -> Result<Vec<Q>> {
        match phi {
            Functional::Dual(v) => {
                if v.len() != self.dim() {
                    return Err(Error::FunctionalMismatch(format!(
                        "expected {} dual coordinates, got {}",
                        self.dim(),
                        v.len()
                    )));
                }
                Ok(v.clone())
            }
            Functional::Matrix(map) => {
                let Some(p) = &self.origin else {
                    return Err(Error::FunctionalMismatch(
                        "matrix-position functional on an algebra without a poset".into(),
                    ));
                };
                for &(i, j) in map.keys() {
                    let ok = i >= 1 && j <= p.n() && (i == j || p.less(i, j));
                    if !ok {
                        return Err(Error::FunctionalMismatch(format!(
                            "position ({i}, {j}) is not in the incidence algebra"
                        )));
                    }
                }
                let c = |i: usize, j: usize| map.get(&(i, j)).cloned().unwrap_or_else(Q::zero);
                Ok(self
                    .basis
                    .iter()
                    .map(|b| match *b {
                        BasisLabel::DiagDiff(s) => c(1, 1) - c(s, s),
                        BasisLabel::Elem(a, b) => c(a, b),
                        BasisLabel::Opaque(_) => unreachable!(),
                    })
                    .collect())
            }
        }
    }

    pub fn evaluate(&self, phi: &Functional, x: &[Q]) -> Result<Q> {
        let v = self.dual_vector(phi)?;
        Ok(v.iter().zip(x).map(|(a, b)| a * b).sum())
    }

    /// `[B_phi]`, the matrix of `(x, y) -> phi([x, y])` on the basis.
    pub fn kirillov_matrix(&self, phi: &Functional) -> Result<RationalMatrix> {
        Ok(self.kirillov_from_dual(&self.dual_vector(phi)?))
    }

    pub fn kirillov_from_dual(&self, v: &[Q]) -> RationalMatrix {
        let dim = self.dim();
        RationalMatrix::from_fn(dim, dim, |i, j| {
            self.bracket_basis(i, j).iter().map(|(k, c)| c * &v[*k]).sum()
        })
    }

    /// `[B^_phi]`: `[B_phi]` bordered by the values of `phi`.
    pub fn extended_matrix(&self, phi: &Functional) -> Result<RationalMatrix> {
        if self.dim().is_multiple_of(2) {
            return Err(Error::EvenDimension(self.dim()));
        }
        Ok(self.extended_from_dual(&self.dual_vector(phi)?))
    }

    pub fn extended_from_dual(&self, v: &[Q]) -> RationalMatrix {
        let b = self.kirillov_from_dual(v);
        let dim = self.dim();
        RationalMatrix::from_fn(dim + 1, dim + 1, |i, j| match (i, j) {
            (0, 0) => Q::zero(),
            (0, j) => v[j - 1].clone(),
            (i, 0) => -v[i - 1].clone(),
            (i, j) => b.get(i - 1, j - 1).clone(),
        })
    }

    /// A basis of the center, in basis coordinates.
    pub fn center(&self) -> Vec<Vec<Q>> {
        let dim = self.dim();
        // row (i, k): sum_j z_j [b_j, b_i]_k = 0
        let mut rows = vec![vec![Q::zero(); dim]; dim * dim];
        for j in 0..dim {
            for i in 0..dim {
                for (k, c) in self.bracket_basis(j, i) {
                    rows[i * dim + k][j] += c;
                }
            }
        }
        rows.retain(|r| r.iter().any(|v| !v.is_zero()));
        if rows.is_empty() {
            return (0..dim)
                .map(|i| (0..dim).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
                .collect();
        }
        RationalMatrix::from_rows(rows)
            .expect("rows have equal length")
            .kernel()
    }

    /// Grading by the diagonal torus: `E_{ab}` has weight `e_a - e_b`, the
    /// diagonal has weight zero. `None` for raw algebras.
    pub fn weights(&self) -> Option<Vec<Vec<i32>>> {
        let p = self.origin.as_ref()?;
        let n = p.n();
        Some(
            self.basis
                .iter()
                .map(|b| {
                    let mut w = vec![0; n];
                    if let BasisLabel::Elem(a, c) = *b {
                        w[a - 1] += 1;
                        w[c - 1] -= 1;
                    }
                    w
                })
                .collect(),
        )
    }

    /// Coordinates of a trace-zero incidence-algebra matrix, given as
    /// `(i, j, value)` entries.
    pub fn coords_from_gl(&self, entries: &[(usize, usize, Q)]) -> Result<Vec<Q>> {
        let Some(p) = &self.origin else {
            return Err(Error::FunctionalMismatch("algebra has no poset".into()));
        };
        let n = p.n();
        let mut diag = vec![Q::zero(); n + 1];
        let mut off: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        for (i, j, v) in entries {
            if *i == 0 || *j > n || *i > n || *j == 0 {
                return Err(Error::OutOfRange {
                    element: (*i).max(*j),
                    n,
                });
            }
            if i == j {
                diag[*i] += v;
            } else if p.less(*i, *j) {
                *off.entry((*i, *j)).or_insert_with(Q::zero) += v;
            } else {
                return Err(Error::ShapeMismatch(format!("entry ({i}, {j}) is outside the incidence algebra")));
            }
        }
        let trace: Q = diag.iter().sum();
        if !trace.is_zero() {
            return Err(Error::ShapeMismatch("matrix is not trace-zero".into()));
        }
        Ok(self
            .basis
            .iter()
            .map(|b| match *b {
                BasisLabel::DiagDiff(s) => -diag[s].clone(),
                BasisLabel::Elem(a, c) => off.get(&(a, c)).cloned().unwrap_or_else(Q::zero),
                BasisLabel::Opaque(_) => unreachable!(),
            })
            .collect())
    }

    /// Inverse of [`coords_from_gl`](Self::coords_from_gl): nonzero matrix
    /// entries, ordered by position.
    pub fn coords_to_gl(&self, x: &[Q]) -> Vec<(usize, usize, Q)> {
        let mut m: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        for (b, c) in self.basis.iter().zip(x) {
            if c.is_zero() {
                continue;
            }
            match *b {
                BasisLabel::DiagDiff(s) => {
                    *m.entry((1, 1)).or_insert_with(Q::zero) += c;
                    *m.entry((s, s)).or_insert_with(Q::zero) -= c;
                }
                BasisLabel::Elem(a, d) => *m.entry((a, d)).or_insert_with(Q::zero) += c,
                BasisLabel::Opaque(i) => *m.entry((i, i)).or_insert_with(Q::zero) += c,
            }
        }
        m.into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|((i, j), v)| (i, j, v))
            .collect()
    }
}

/// `[E_11 - E_ss, E_ab] = w E_ab`.
fn diag_weight(s: usize, a: usize, b: usize) -> i64 {
    let d = |i: usize| -> i64 { (i == 1) as i64 - (i == s) as i64 };
    d(a) - d(b)
}

fn normalize(it: impl IntoIterator<Item = (usize, Q)>) -> SparseVec {
    let mut m: BTreeMap<usize, Q> = BTreeMap::new();
    for (k, c) in it {
        *m.entry(k).or_insert_with(Q::zero) += c;
    }
    m.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn scale(v: &SparseVec, f: &Q) -> SparseVec {
    v.iter().map(|(k, c)| (*k, c * f)).collect()
}

/// The seven-dimensional algebra with index one that admits no contact form.
pub fn index_one_noncontact_example() -> LieAlgebra {
    let b = |i, j, k, c| (i, j, vec![(k, q(c))]);
    LieAlgebra::from_structure_constants(
        7,
        &[
            b(1, 4, 4, 2),
            b(2, 4, 4, 1),
            b(1, 5, 5, 1),
            b(2, 5, 5, 2),
            b(3, 5, 5, 1),
            b(1, 6, 6, 1),
            b(3, 6, 6, 1),
            b(2, 7, 7, 1),
            b(3, 7, 7, 2),
        ],
    )
    .expect("valid structure constants")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p111() -> Poset {
        Poset::chain(3)
    }

    #[test]
    fn chain_two() {
        let g = LieAlgebra::type_a(&Poset::chain(2)).unwrap();
        assert_eq!(g.basis(), &[BasisLabel::DiagDiff(2), BasisLabel::Elem(1, 2)]);
        assert_eq!(g.bracket_basis(0, 1), &vec![(1, q(2))]);
        let phi = Functional::from_terms([(1, 2, q(1))]);
        let b = g.kirillov_matrix(&phi).unwrap();
        assert_eq!(b, RationalMatrix::from_i64(&[&[0, 2], &[-2, 0]]).unwrap());
    }

    #[test]
    fn dimensions() {
        let ex1 = Poset::new(4, &[(1, 2), (2, 3), (2, 4)]).unwrap();
        assert_eq!(LieAlgebra::type_a(&ex1).unwrap().dim(), 8);
        assert_eq!(LieAlgebra::type_a(&p111()).unwrap().dim(), 5);
        assert_eq!(LieAlgebra::type_a(&Poset::antichain(1)).unwrap_err(), Error::TooSmall);
    }

    #[test]
    fn poset_algebra_satisfies_jacobi_and_matches_matrices() {
        let p = Poset::new(5, &[(1, 3), (2, 3), (3, 4), (3, 5), (1, 5)]).unwrap();
        let g = LieAlgebra::type_a(&p).unwrap();
        g.check_jacobi().unwrap();
        // compare against explicit matrix commutators
        let n = p.n();
        let to_mat = |x: &[Q]| {
            let mut m = vec![vec![Q::zero(); n]; n];
            for (i, j, v) in g.coords_to_gl(x) {
                m[i - 1][j - 1] = v;
            }
            m
        };
        let mul = |a: &Vec<Vec<Q>>, b: &Vec<Vec<Q>>| {
            (0..n)
                .map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
                .collect::<Vec<Vec<Q>>>()
        };
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                let ei: Vec<Q> = (0..g.dim()).map(|k| q((k == i) as i64)).collect();
                let ej: Vec<Q> = (0..g.dim()).map(|k| q((k == j) as i64)).collect();
                let (a, b) = (to_mat(&ei), to_mat(&ej));
                let ab = mul(&a, &b);
                let ba = mul(&b, &a);
                let comm: Vec<Vec<Q>> = (0..n)
                    .map(|r| (0..n).map(|c| &ab[r][c] - &ba[r][c]).collect())
                    .collect();
                assert_eq!(to_mat(&g.bracket(&ei, &ej)), comm);
            }
        }
    }

    #[test]
    fn raw_algebras() {
        let h = LieAlgebra::from_structure_constants(3, &[(1, 2, vec![(3, q(1))])]).unwrap();
        assert_eq!(h.bracket_basis(1, 0), &vec![(2, q(-1))]);
        let ab = LieAlgebra::from_structure_constants(2, &[]).unwrap();
        assert!(ab.brackets.iter().all(Vec::is_empty));
        assert_eq!(index_one_noncontact_example().dim(), 7);
        // [e1,e2]=e2, [e1,e3]=e1 is not a Lie algebra
        let bad = LieAlgebra::from_structure_constants(
            3,
            &[(1, 2, vec![(2, q(1))]), (2, 3, vec![(1, q(1))])],
        );
        assert!(matches!(bad, Err(Error::JacobiViolation(..))));
        let asym = LieAlgebra::from_structure_constants(
            2,
            &[(1, 2, vec![(1, q(1))]), (2, 1, vec![(1, q(1))])],
        );
        assert_eq!(asym.unwrap_err(), Error::AntisymmetryViolation(2, 1));
    }

    #[test]
    fn centers() {
        let ex1 = Poset::new(4, &[(1, 2), (2, 3), (2, 4)]).unwrap();
        assert!(LieAlgebra::type_a(&ex1).unwrap().center().is_empty());
        let two = Poset::chain(2).disjoint_sum(&Poset::chain(2));
        let g = LieAlgebra::type_a(&two).unwrap();
        let z = g.center();
        assert_eq!(z.len(), 1);
        let expected = g
            .coords_from_gl(&[(1, 1, q(2)), (2, 2, q(2)), (3, 3, q(-2)), (4, 4, q(-2))])
            .unwrap();
        // z is a multiple of the expected element
        let k = z[0].iter().zip(&expected).find(|(_, e)| !e.is_zero()).map(|(a, e)| a / e).unwrap();
        assert!(z[0].iter().zip(&expected).all(|(a, e)| *a == e * &k));
        let abelian = LieAlgebra::from_structure_constants(3, &[]).unwrap();
        assert_eq!(abelian.center().len(), 3);
    }

    #[test]
    fn functional_checks() {
        let g = LieAlgebra::type_a(&p111()).unwrap();
        let bad = Functional::from_terms([(2, 1, q(1))]);
        assert!(matches!(g.dual_vector(&bad), Err(Error::FunctionalMismatch(_))));
        let phi0 = Functional::from_terms([(2, 2, q(1)), (1, 3, q(1)), (2, 3, q(1))]);
        let b = g.kirillov_matrix(&phi0).unwrap();
        assert!(b.is_skew());
        assert_eq!(b.rank(), 4);
        assert!(g.extended_matrix(&phi0).unwrap().determinant().unwrap() != q(0));
        let even = LieAlgebra::type_a(&Poset::chain(2)).unwrap();
        assert_eq!(
            even.extended_matrix(&Functional::zero_matrix()).unwrap_err(),
            Error::EvenDimension(2)
        );
    }

    #[test]
    fn gl_round_trip() {
        let g = LieAlgebra::type_a(&p111()).unwrap();
        let entries = vec![(1, 1, q(1)), (1, 2, q(3)), (2, 2, q(-2)), (3, 3, q(1))];
        let x = g.coords_from_gl(&entries).unwrap();
        assert_eq!(g.coords_to_gl(&x), entries);
    }
}
