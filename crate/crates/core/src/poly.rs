//! Sparse multivariate polynomials over the rationals, just enough to expand
//! Pfaffians of skew matrices whose entries are linear forms.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::linalg::Q;

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u8>;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    /// `sum_k coeffs[k] * x_k`.
    pub fn linear(coeffs: &[Q]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut m = vec![0; n];
                m[k] = 1;
                p.terms.insert(m, c.clone());
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&e| e as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        self.terms.iter().fold(Q::zero(), |acc, (m, c)| {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc + t
        })
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut acc: HashMap<Monomial, Q> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                let e = acc.entry(m).or_insert_with(Q::zero);
                *e += ca * cb;
            }
        }
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

/// Pfaffian of a skew matrix of polynomials (upper triangle is read), by
/// expansion along the first row with memoisation over index subsets.
/// Intended for sizes up to about 12.
pub fn symbolic_pfaffian(upper: &[Vec<Poly>]) -> Poly {
    let n = upper.len();
    assert!(n <= 32, "symbolic pfaffian limited to 32 indices");
    if n % 2 == 1 {
        return Poly::zero();
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut memo: HashMap<u32, Poly> = HashMap::new();
    pf_rec(upper, full, &mut memo)
}

fn pf_rec(a: &[Vec<Poly>], set: u32, memo: &mut HashMap<u32, Poly>) -> Poly {
    if set == 0 {
        let nvars = a
            .iter()
            .flatten()
            .find_map(|p| p.terms.keys().next().map(Vec::len))
            .unwrap_or(0);
        return Poly::constant(nvars, Q::from_integer(1.into()));
    }
    if let Some(p) = memo.get(&set) {
        return p.clone();
    }
    let first = set.trailing_zeros() as usize;
    let rest = set & !(1 << first);
    let mut total = Poly::zero();
    let mut sign_positive = true;
    let mut bits = rest;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let entry = &a[first][j];
        if !entry.is_zero() {
            let minor = pf_rec(a, rest & !(1 << j), memo);
            if !minor.is_zero() {
                let term = entry * &minor;
                total = if sign_positive { &total + &term } else { &total - &term };
            }
        }
        sign_positive = !sign_positive;
    }
    memo.insert(set, total.clone());
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn var(n: usize, k: usize) -> Poly {
        let mut c = vec![q(0); n];
        c[k] = q(1);
        Poly::linear(&c)
    }

    #[test]
    fn arithmetic() {
        let x = var(2, 0);
        let y = var(2, 1);
        let s = &x + &y;
        let d = &x - &y;
        let p = &s * &d; // x^2 - y^2
        assert_eq!(p.term_count(), 2);
        assert_eq!(p.degree(), 2);
        assert_eq!(p.eval(&[q(3), q(2)]), q(5));
        assert!((&p - &p).is_zero());
        assert!((&(-&p) + &p).is_zero());
    }

    #[test]
    fn four_by_four() {
        // Pf = a b' - c d' + e f' in generic entries x0..x5
        let n = 6;
        let z = Poly::zero();
        let m = vec![
            vec![z.clone(), var(n, 0), var(n, 1), var(n, 2)],
            vec![z.clone(), z.clone(), var(n, 3), var(n, 4)],
            vec![z.clone(), z.clone(), z.clone(), var(n, 5)],
            vec![z.clone(), z.clone(), z.clone(), z.clone()],
        ];
        let pf = symbolic_pfaffian(&m);
        let expect = &(&(&var(n, 0) * &var(n, 5)) - &(&var(n, 1) * &var(n, 4))) + &(&var(n, 2) * &var(n, 3));
        assert_eq!(pf, expect);
    }
}
