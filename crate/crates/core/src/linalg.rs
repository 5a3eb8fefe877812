//! Exact rational linear algebra: fraction-free (Bareiss) rank and
//! determinant, rational kernels, and Pfaffians of skew matrices.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_skew(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| *self.get(i, j) == -self.get(j, i).clone())
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul_vec(&self, v: &[Q]) -> Result<Vec<Q>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Q::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// Principal submatrix on the given (sorted) index set.
    pub fn principal(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), idx.len(), |a, b| self.get(idx[a], idx[b]).clone())
    }

    /// Rows scaled to integers; returns the integer rows and the product of
    /// the scale factors.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut scale = BigInt::one();
        let rows = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row
                    .iter()
                    .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                scale *= &l;
                row.iter()
                    .map(|x| x.numer() * (&l / x.denom()))
                    .collect()
            })
            .collect();
        (rows, scale)
    }

    /// Rank of the matrix reduced modulo a 31-bit prime, or `None` when some
    /// denominator vanishes there. It never exceeds the rank over `Q`, so a
    /// full value certifies full rank.
    pub fn rank_mod_prime(&self) -> Option<usize> {
        let p = BigInt::from(MODULUS);
        let reduce = |x: &BigInt| -> u64 {
            x.mod_floor(&p).to_u64().expect("residue fits")
        };
        let mut a = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for x in self.row(i) {
                let d = reduce(x.denom());
                if d == 0 {
                    return None;
                }
                row.push(mul_mod(reduce(x.numer()), pow_mod(d, MODULUS - 2)));
            }
            a.push(row);
        }
        let mut r = 0;
        for c in 0..self.cols {
            let Some(k) = (r..self.rows).find(|&k| a[k][c] != 0) else {
                continue;
            };
            a.swap(r, k);
            let inv = pow_mod(a[r][c], MODULUS - 2);
            for k in (r + 1)..self.rows {
                if a[k][c] == 0 {
                    continue;
                }
                let f = mul_mod(a[k][c], inv);
                for j in c..self.cols {
                    let t = mul_mod(f, a[r][j]);
                    a[k][j] = if a[k][j] >= t { a[k][j] - t } else { a[k][j] + (MODULUS - t) };
                }
            }
            r += 1;
            if r == self.rows {
                break;
            }
        }
        Some(r)
    }

    /// Nonzero determinant; decided modulo a prime when possible, exactly
    /// otherwise.
    pub fn is_nonsingular(&self) -> bool {
        self.is_square() && (self.rank_mod_prime() == Some(self.rows) || self.rank() == self.rows)
    }

    pub fn rank(&self) -> usize {
        let (mut a, _) = self.integer_rows();
        bareiss_echelon(&mut a, self.cols).0
    }

    pub fn determinant(&self) -> Result<Q> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        if self.rows == 0 {
            return Ok(Q::one());
        }
        let (mut a, scale) = self.integer_rows();
        let (rank, sign) = bareiss_echelon(&mut a, self.cols);
        if rank < self.rows {
            return Ok(Q::zero());
        }
        let det = a[self.rows - 1][self.cols - 1].clone() * BigInt::from(sign);
        Ok(Q::new(det, scale))
    }

    /// A basis of the right kernel `{v : M v = 0}`, from the reduced row
    /// echelon form (one vector per free column, with a 1 in that column).
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let mut m: Vec<Vec<Q>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][c].recip();
            for x in m[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..self.rows {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    let (pivot_row, other) = if i < r {
                        let (lo, hi) = m.split_at_mut(r);
                        (&hi[0], &mut lo[i])
                    } else {
                        let (lo, hi) = m.split_at_mut(i);
                        (&lo[r], &mut hi[0])
                    };
                    for (x, y) in other.iter_mut().zip(pivot_row) {
                        if !y.is_zero() {
                            *x -= &f * y;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m[row][f].clone();
                }
                v
            })
            .collect()
    }

    /// Pfaffian of an even skew matrix by skew Gaussian elimination.
    pub fn pfaffian(&self) -> Result<Q> {
        if !self.is_skew() {
            return Err(Error::ShapeMismatch("pfaffian needs a skew matrix".into()));
        }
        if self.rows % 2 == 1 {
            return Err(Error::ShapeMismatch("pfaffian needs even size".into()));
        }
        let mut a: Vec<Vec<Q>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut result = Q::one();
        while !a.is_empty() {
            let n = a.len();
            let Some(j) = (1..n).find(|&j| !a[0][j].is_zero()) else {
                return Ok(Q::zero());
            };
            if j != 1 {
                // symmetric swap of indices 1 and j flips the sign
                a.swap(1, j);
                for row in a.iter_mut() {
                    row.swap(1, j);
                }
                result = -result;
            }
            let pivot = a[0][1].clone();
            result *= &pivot;
            let u: Vec<Q> = a[0][2..].to_vec();
            let v: Vec<Q> = a[1][2..].to_vec();
            let next: Vec<Vec<Q>> = (2..n)
                .map(|r| {
                    (2..n)
                        .map(|c| {
                            let corr = &v[r - 2] * &u[c - 2] - &u[r - 2] * &v[c - 2];
                            if corr.is_zero() {
                                a[r][c].clone()
                            } else {
                                &a[r][c] + corr / &pivot
                            }
                        })
                        .collect()
                })
                .collect();
            a = next;
        }
        Ok(result)
    }

    /// Row-major text dump, one row per line, entries `p/q` separated by
    /// spaces.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_q).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.split_whitespace().map(parse_q).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMatrix {}x{}\n{}", self.rows, self.cols, self.to_text())
    }
}

/// Fraction-free row echelon form in place. Returns `(rank, permutation sign)`.
fn bareiss_echelon(a: &mut [Vec<BigInt>], cols: usize) -> (usize, i32) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut sign = 1;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            sign = -sign;
        }
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = pivot_row[c].clone();
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for j in (c + 1)..cols {
                let val = &pivot * &row[j] - &factor * &pivot_row[j];
                row[j] = if prev.is_one() { val } else { val / &prev };
            }
            row[c] = BigInt::zero();
        }
        prev = pivot;
        r += 1;
    }
    (r, sign)
}

/// Rank of a sparse rational matrix given as rows of `(column, value)`.
pub fn sparse_rank(rows: impl IntoIterator<Item = Vec<(usize, Q)>>) -> usize {
    let mut pivots: BTreeMap<usize, BTreeMap<usize, Q>> = BTreeMap::new();
    for row in rows {
        let mut r: BTreeMap<usize, Q> = BTreeMap::new();
        for (c, v) in row {
            if !v.is_zero() {
                let e = r.entry(c).or_insert_with(Q::zero);
                *e += v;
            }
        }
        r.retain(|_, v| !v.is_zero());
        while let Some((&lead, lead_val)) = r.iter().next() {
            match pivots.get(&lead) {
                Some(prow) => {
                    let f = lead_val.clone();
                    for (c, v) in prow {
                        let e = r.entry(*c).or_insert_with(Q::zero);
                        *e -= &f * v;
                        if e.is_zero() {
                            r.remove(c);
                        }
                    }
                }
                None => {
                    let inv = lead_val.recip();
                    for v in r.values_mut() {
                        *v *= &inv;
                    }
                    pivots.insert(lead, r);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// The Mersenne prime `2^31 - 1`; products of residues fit in a `u64`.
const MODULUS: u64 = (1 << 31) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    a * b % MODULUS
}

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b);
        }
        b = mul_mod(b, b);
        e >>= 1;
    }
    acc
}

/// Always `p/q`, also for integers.
pub fn format_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `p/q` or an integer.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_by_two_skew() {
        let m = RationalMatrix::from_i64(&[&[0, 2], &[-2, 0]]).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.determinant().unwrap(), q(4));
        assert_eq!(m.pfaffian().unwrap(), q(2));
        assert!(m.kernel().is_empty());
    }

    #[test]
    fn zero_matrix() {
        let z = RationalMatrix::zeros(3, 3);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.kernel().len(), 3);
        assert_eq!(z.determinant().unwrap(), q(0));
    }

    #[test]
    fn shape_errors() {
        let m = RationalMatrix::zeros(2, 3);
        assert!(matches!(m.determinant(), Err(Error::ShapeMismatch(_))));
        assert!(matches!(m.pfaffian(), Err(Error::ShapeMismatch(_))));
        let odd = RationalMatrix::zeros(3, 3);
        assert!(matches!(odd.pfaffian(), Err(Error::ShapeMismatch(_))));
        let not_skew = RationalMatrix::from_i64(&[&[0, 1], &[1, 0]]).unwrap();
        assert!(matches!(not_skew.pfaffian(), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn rational_determinant() {
        let m = RationalMatrix::from_rows(vec![
            vec![Q::new(1.into(), 2.into()), q(1)],
            vec![q(3), Q::new(1.into(), 3.into())],
        ])
        .unwrap();
        // 1/6 - 3
        assert_eq!(m.determinant().unwrap(), Q::new((-17).into(), 6.into()));
    }

    #[test]
    fn four_by_four_pfaffian() {
        // Pf = a12 a34 - a13 a24 + a14 a23
        let m = RationalMatrix::from_i64(&[
            &[0, 1, 2, 3],
            &[-1, 0, 4, 5],
            &[-2, -4, 0, 6],
            &[-3, -5, -6, 0],
        ])
        .unwrap();
        assert_eq!(m.pfaffian().unwrap(), q(6 - 2 * 5 + 3 * 4));
    }

    #[test]
    fn text_round_trip() {
        let m = RationalMatrix::from_rows(vec![vec![Q::new(1.into(), 2.into()), q(-3)]]).unwrap();
        assert_eq!(m.to_text(), "1/2 -3/1\n");
        assert_eq!(RationalMatrix::from_text(&m.to_text()).unwrap(), m);
        assert!(parse_q("1/0").is_err());
    }

    fn det_by_permutations(m: &RationalMatrix) -> Q {
        // Leibniz expansion, independent of elimination.
        let n = m.rows();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = Q::zero();
        permute(&mut perm, 0, m, &mut total);
        total
    }

    fn permute(perm: &mut Vec<usize>, k: usize, m: &RationalMatrix, total: &mut Q) {
        let n = perm.len();
        if k == n {
            let mut inv = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if perm[i] > perm[j] {
                        inv += 1;
                    }
                }
            }
            let mut prod = if inv % 2 == 0 { q(1) } else { q(-1) };
            for (i, &p) in perm.iter().enumerate() {
                prod *= m.get(i, p);
            }
            *total += prod;
            return;
        }
        for i in k..n {
            perm.swap(k, i);
            permute(perm, k + 1, m, total);
            perm.swap(k, i);
        }
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = RationalMatrix> {
        proptest::collection::vec(-3i64..=3, n * n).prop_map(move |v| {
            RationalMatrix::from_fn(n, n, |i, j| q(v[i * n + j]))
        })
    }

    fn small_skew(n: usize) -> impl Strategy<Value = RationalMatrix> {
        proptest::collection::vec(-3i64..=3, n * n).prop_map(move |v| {
            RationalMatrix::from_fn(n, n, |i, j| {
                use std::cmp::Ordering::*;
                match i.cmp(&j) {
                    Less => q(v[i * n + j]),
                    Greater => -q(v[j * n + i]),
                    Equal => q(0),
                }
            })
        })
    }

    proptest! {
        #[test]
        fn determinant_matches_leibniz(m in (1usize..=5).prop_flat_map(small_matrix)) {
            prop_assert_eq!(m.determinant().unwrap(), det_by_permutations(&m));
        }

        #[test]
        fn pfaffian_squared_is_determinant(m in (1usize..=3).prop_flat_map(|k| small_skew(2 * k))) {
            let pf = m.pfaffian().unwrap();
            prop_assert_eq!(&pf * &pf, m.determinant().unwrap());
        }

        #[test]
        fn modular_rank_bounds_exact_rank(m in (1usize..=5).prop_flat_map(small_matrix)) {
            let r = m.rank_mod_prime().unwrap();
            prop_assert!(r <= m.rank());
            prop_assert_eq!(m.is_nonsingular(), !m.determinant().unwrap().is_zero());
        }

        #[test]
        fn rank_nullity(rows in 1usize..5, cols in 1usize..6, seed in proptest::collection::vec(-2i64..=2, 30)) {
            let m = RationalMatrix::from_fn(rows, cols, |i, j| q(seed[i * cols + j]));
            let ker = m.kernel();
            prop_assert_eq!(ker.len() + m.rank(), cols);
            for v in &ker {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
            }
            let sparse: Vec<Vec<(usize, Q)>> = (0..rows)
                .map(|i| (0..cols).map(|j| (j, m.get(i, j).clone())).collect())
                .collect();
            prop_assert_eq!(sparse_rank(sparse), m.rank());
        }
    }
}
