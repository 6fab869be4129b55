//! Brute-force symmetric function arithmetic over explicit roots.

use num_bigint::BigInt;
use num_rational::BigRational as Q;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Polynomial in `N` root variables, exponent vectors of length `N`.
#[derive(Clone, Debug, Default)]
pub struct RootPoly {
    pub n: usize,
    pub terms: BTreeMap<Vec<u32>, Q>,
}

impl RootPoly {
    pub fn constant(n: usize, c: Q) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(vec![0; n], c);
        }
        RootPoly { n, terms: t }
    }

    fn add_term(&mut self, e: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.entry(e.clone()).or_insert_with(Q::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn mul_truncated(&self, o: &Self, max_deg: u32) -> Self {
        let mut r = RootPoly { n: self.n, terms: BTreeMap::new() };
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let e: Vec<u32> = a.iter().zip(b).map(|(u, v)| u + v).collect();
                if e.iter().sum::<u32>() <= max_deg {
                    r.add_term(e, x * y);
                }
            }
        }
        r
    }

    pub fn sub_scaled(&mut self, o: &Self, c: &Q) {
        for (e, v) in &o.terms {
            self.add_term(e.clone(), -(v * c));
        }
    }

    /// Homogeneous part of degree `d`, where root `i` has degree `deg`.
    pub fn part(&self, d: u32) -> Self {
        let mut r = RootPoly { n: self.n, terms: BTreeMap::new() };
        for (e, v) in &self.terms {
            if e.iter().sum::<u32>() == d {
                r.add_term(e.clone(), v.clone());
            }
        }
        r
    }
}

/// Univariate series `Σ b_k y_i^k` in root `i`.
pub fn series_in_root(n: usize, i: usize, b: &[Q]) -> RootPoly {
    let mut r = RootPoly { n, terms: BTreeMap::new() };
    for (k, c) in b.iter().enumerate() {
        let mut e = vec![0; n];
        e[i] = k as u32;
        r.add_term(e, c.clone());
    }
    r
}

pub fn elementary(n: usize, k: usize) -> RootPoly {
    let mut r = RootPoly { n, terms: BTreeMap::new() };
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == k {
            r.add_term((0..n).map(|i| (mask >> i) & 1).collect(), Q::one());
        }
    }
    r
}

/// Rewrites a symmetric polynomial in elementary symmetric functions.
/// Keys of the result: exponent of `e_k` at index `k − 1`, trailing zeros trimmed.
pub fn to_elementary(mut p: RootPoly) -> BTreeMap<Vec<u32>, Q> {
    let n = p.n;
    let es: Vec<RootPoly> = (1..=n).map(|k| elementary(n, k)).collect();
    let mut out = BTreeMap::new();
    while let Some((lead, c)) = p.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
        let mut ex: Vec<u32> = (0..n).map(|k| lead[k] - if k + 1 < n { lead[k + 1] } else { 0 }).collect();
        let mut prod = RootPoly::constant(n, Q::one());
        for (k, &m) in ex.iter().enumerate() {
            for _ in 0..m {
                prod = prod.mul_truncated(&es[k], u32::MAX);
            }
        }
        p.sub_scaled(&prod, &c);
        while ex.last() == Some(&0) {
            ex.pop();
        }
        out.insert(ex, c);
    }
    out
}

/// Weight-`w` component of `Π_j Q(y_j)` in elementary symmetric functions of the `y_j`.
pub fn multiplicative_by_roots(b: &[Q], w: usize) -> BTreeMap<Vec<u32>, Q> {
    let n = w.max(1);
    let mut prod = RootPoly::constant(n, Q::one());
    for i in 0..n {
        prod = prod.mul_truncated(&series_in_root(n, i, &b[..=w]), w as u32);
    }
    to_elementary(prod.part(w as u32))
}

/// `e_k(x_1², …, x_N²)` in the `e_i(x)`.
pub fn squares_elementary(k: usize) -> BTreeMap<Vec<u32>, Q> {
    let n = 2 * k;
    let mut r = RootPoly { n, terms: BTreeMap::new() };
    for (e, c) in &elementary(n, k).terms {
        r.add_term(e.iter().map(|x| 2 * x).collect(), c.clone());
    }
    to_elementary(r)
}

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}
