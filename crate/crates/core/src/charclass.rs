//! Exact multiplicative-sequence arithmetic for the Â-genus.
//!
//! `Q(z) = (√z/2) / sinh(√z/2)`, evaluated on Pontryagin roots `z = x_j²`.
//! `Σ_j log Q(z_j) = Σ_k a_k P_k` where `P_k` are power sums of the `z_j`,
//! written in `p_i = e_i(z)` by Newton's identities; `Â = exp` of that, graded.

use crate::error::{CurvError, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

pub type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Exponent vector: entry `i` is the power of the class with index `i + 1`.
/// Trailing zeros are trimmed so equal monomials compare equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn new(mut e: Vec<u32>) -> Self {
        while e.last() == Some(&0) {
            e.pop();
        }
        Monomial(e)
    }

    pub fn one() -> Self {
        Monomial(vec![])
    }

    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i];
        e[i - 1] = 1;
        Monomial(e)
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().enumerate().map(|(i, e)| (i as u32 + 1) * e).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let len = self.0.len().max(o.0.len());
        Monomial::new((0..len).map(|i| self.0.get(i).unwrap_or(&0) + o.0.get(i).unwrap_or(&0)).collect())
    }

    pub fn display(&self, letter: char) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("{letter}{}", i + 1) } else { format!("{letter}{}^{e}", i + 1) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    /// Parses `c1^2 c2`, `c1^2*c2` or `c1c3`; returns the letter and the monomial.
    pub fn parse(s: &str) -> Result<(char, Monomial)> {
        let bad = || CurvError::Config(format!("bad monomial '{s}'"));
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        let mut letter = None;
        let mut e: Vec<u32> = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let l = chars[i];
            if !(l == 'c' || l == 'p') {
                return Err(bad());
            }
            if letter.is_some_and(|x| x != l) {
                return Err(bad());
            }
            letter = Some(l);
            i += 1;
            let st = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let idx: usize = chars[st..i].iter().collect::<String>().parse().map_err(|_| bad())?;
            let mut pw = 1u32;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let st = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                pw = chars[st..i].iter().collect::<String>().parse().map_err(|_| bad())?;
            }
            if idx == 0 {
                return Err(bad());
            }
            if e.len() < idx {
                e.resize(idx, 0);
            }
            e[idx - 1] += pw;
        }
        Ok((letter.ok_or_else(bad)?, Monomial::new(e)))
    }
}

/// Polynomial with exact rational coefficients in graded variables.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RationalPolynomial {
    pub terms: BTreeMap<Monomial, Q>,
}

impl RationalPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(i: usize) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::var(i), Q::one());
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut r = Self::zero();
        for (m, c) in &self.terms {
            r.add_term(m.clone(), c * s);
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(Q::one()), |acc, _| acc.mul(self))
    }

    pub fn is_homogeneous(&self, w: u32) -> bool {
        self.terms.keys().all(|m| m.weight() == w)
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// Substitutes each variable `x_i` by a polynomial.
    pub fn substitute(&self, vars: &[RationalPolynomial]) -> Self {
        let mut r = Self::zero();
        for (m, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&vars[i].pow(e));
                }
            }
            r = r.add(&t);
        }
        r
    }

    /// Evaluates monomial-by-monomial against a table of numbers.
    pub fn evaluate(&self, numbers: &BTreeMap<Monomial, Q>, letter: char) -> Result<Q> {
        let mut s = Q::zero();
        for (m, c) in &self.terms {
            let v = numbers.get(m).ok_or_else(|| CurvError::MissingMonomial(m.display(letter)))?;
            s += c * v;
        }
        Ok(s)
    }

    pub fn display(&self, letter: char) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms.iter().map(|(m, c)| format!("({c}) {}", m.display(letter))).collect::<Vec<_>>().join(" + ")
    }
}

/// Coefficients of `(√z/2)/sinh(√z/2)` up to `z^m`.
pub fn ahat_series(m: usize) -> Vec<Q> {
    // sinh(x)/x with x = √z/2: Σ z^k / (4^k (2k+1)!)
    let mut s = Vec::with_capacity(m + 1);
    let mut fact = BigInt::one();
    let mut four = BigInt::one();
    for k in 0..=m {
        if k > 0 {
            fact *= BigInt::from((2 * k) * (2 * k + 1));
            four *= 4;
        }
        s.push(Q::new(BigInt::one(), &four * &fact));
    }
    let mut b = vec![Q::one()];
    for k in 1..=m {
        let mut acc = Q::zero();
        for j in 1..=k {
            acc += &s[j] * &b[k - j];
        }
        b.push(-acc);
    }
    b
}

/// `log` of a power series with constant term 1.
fn log_series(b: &[Q]) -> Vec<Q> {
    let m = b.len() - 1;
    let mut a = vec![Q::zero(); m + 1];
    for k in 1..=m {
        let mut acc = q(k as i64) * &b[k];
        for j in 1..k {
            acc -= q(j as i64) * &a[j] * &b[k - j];
        }
        a[k] = acc / q(k as i64);
    }
    a
}

/// Power sums `P_1..P_m` in the elementary symmetric functions `e_i` (here `p_i`).
pub fn power_sums(m: usize) -> Vec<RationalPolynomial> {
    let mut ps: Vec<RationalPolynomial> = vec![RationalPolynomial::zero()];
    for k in 1..=m {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let mut pk = RationalPolynomial::var(k).scale(&q(sign * k as i64));
        for i in 1..k {
            let s = if i % 2 == 1 { 1 } else { -1 };
            pk = pk.add(&RationalPolynomial::var(i).mul(&ps[k - i]).scale(&q(s)));
        }
        ps.push(pk);
    }
    ps
}

/// Multiplicative sequence `K_1..K_m` of a power series `Q` with `Q(0) = 1`.
pub fn multiplicative_sequence(series: &[Q], m: usize) -> Vec<RationalPolynomial> {
    let a = log_series(&series[..=m]);
    let ps = power_sums(m);
    let s: Vec<RationalPolynomial> = (0..=m).map(|k| ps[k].scale(&a[k])).collect();
    let mut e = vec![RationalPolynomial::constant(Q::one())];
    for w in 1..=m {
        let mut acc = RationalPolynomial::zero();
        for k in 1..=w {
            acc = acc.add(&s[k].mul(&e[w - k]).scale(&q(k as i64)));
        }
        e.push(acc.scale(&Q::new(BigInt::one(), BigInt::from(w))));
    }
    e.into_iter().skip(1).collect()
}

/// `Â_1..Â_m` in the Pontryagin classes.
pub fn ahat_polynomials(m: usize) -> Vec<RationalPolynomial> {
    multiplicative_sequence(&ahat_series(m), m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Numbers {
    Pontryagin(BTreeMap<Monomial, Q>),
    Chern(BTreeMap<Monomial, Q>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicData {
    pub real_dim: u32,
    pub numbers: Numbers,
    pub spin: bool,
}

pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || CurvError::Config(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((a, b)) => {
            let d: BigInt = b.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(a.trim().parse().map_err(|_| bad())?, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl CharacteristicData {
    /// Parses `"c1^2=0,c2=24"` or `"p1=-48"`; values may be `p/q`.
    pub fn parse(list: &str, real_dim: u32, spin: bool) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut letter = None;
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| CurvError::Config(format!("expected monomial=value in '{item}'")))?;
            let (l, m) = Monomial::parse(k)?;
            if letter.is_some_and(|x| x != l) {
                return Err(CurvError::Config("cannot mix Chern and Pontryagin numbers".into()));
            }
            letter = Some(l);
            let w = if l == 'c' { m.weight() * 2 } else { m.weight() * 4 };
            if w != real_dim {
                return Err(CurvError::Config(format!("{k} has degree {w}, manifold has dimension {real_dim}")));
            }
            map.insert(m, parse_rational(v)?);
        }
        let numbers = if letter == Some('c') { Numbers::Chern(map) } else { Numbers::Pontryagin(map) };
        Ok(CharacteristicData { real_dim, numbers, spin })
    }
}

/// `p_k = (−1)^k Σ_{i+j=2k} (−1)^j c_i c_j`.
pub fn pontryagin_in_chern(k: usize) -> RationalPolynomial {
    let c = |i: usize| if i == 0 { RationalPolynomial::constant(Q::one()) } else { RationalPolynomial::var(i) };
    let mut p = RationalPolynomial::zero();
    for i in 0..=2 * k {
        let j = 2 * k - i;
        let s = if (k + j) % 2 == 0 { 1 } else { -1 };
        p = p.add(&c(i).mul(&c(j)).scale(&q(s)));
    }
    p
}

/// All monomials of the given weight with parts at most `max_part`.
pub fn monomials_of_weight(w: u32, max_part: usize) -> Vec<Monomial> {
    fn rec(w: u32, part: usize, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if w == 0 {
            out.push(Monomial::new(cur.clone()));
            return;
        }
        if part == 0 {
            return;
        }
        let p = part as u32;
        for e in (0..=w / p).rev() {
            cur[part - 1] = e;
            rec(w - e * p, part - 1, cur, out);
        }
        cur[part - 1] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0; max_part.max(1)];
    rec(w, max_part, &mut cur, &mut out);
    out
}

pub fn pontryagin_from_chern(data: &CharacteristicData) -> Result<CharacteristicData> {
    let chern = match &data.numbers {
        Numbers::Pontryagin(_) => return Ok(data.clone()),
        Numbers::Chern(c) => c,
    };
    let mut out = BTreeMap::new();
    if data.real_dim % 4 == 0 {
        let w = data.real_dim / 4;
        let pk: Vec<RationalPolynomial> = (1..=w as usize).map(pontryagin_in_chern).collect();
        for m in monomials_of_weight(w, w as usize) {
            let expr = monomial_poly(&m).substitute(&pk);
            out.insert(m, expr.evaluate(chern, 'c')?);
        }
    }
    Ok(CharacteristicData { real_dim: data.real_dim, numbers: Numbers::Pontryagin(out), spin: data.spin })
}

fn monomial_poly(m: &Monomial) -> RationalPolynomial {
    let mut p = RationalPolynomial::zero();
    p.add_term(m.clone(), Q::one());
    p
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AhatResult {
    pub value: Q,
    pub non_integer_spin: bool,
    pub notes: Vec<String>,
}

pub fn ahat_genus(data: &CharacteristicData) -> Result<AhatResult> {
    let mut notes = Vec::new();
    if data.real_dim % 4 != 0 {
        notes.push(format!("dimension {} is not divisible by 4", data.real_dim));
        return Ok(AhatResult { value: Q::zero(), non_integer_spin: false, notes });
    }
    let p = pontryagin_from_chern(data)?;
    let Numbers::Pontryagin(nums) = &p.numbers else { unreachable!() };
    let w = (data.real_dim / 4) as usize;
    let value = if w == 0 { Q::one() } else { ahat_polynomials(w)[w - 1].evaluate(nums, 'p')? };
    let non_integer_spin = data.spin && !value.is_integer();
    if non_integer_spin {
        notes.push("NonIntegerSpin: spin manifolds have integral Â".into());
    }
    Ok(AhatResult { value, non_integer_spin, notes })
}

/// Pontryagin numbers of `X × Y` from `p(X × Y) = p(X) p(Y)`.
pub fn product(x: &CharacteristicData, y: &CharacteristicData) -> Result<CharacteristicData> {
    let (px, py) = (pontryagin_from_chern(x)?, pontryagin_from_chern(y)?);
    let (Numbers::Pontryagin(nx), Numbers::Pontryagin(ny)) = (&px.numbers, &py.numbers) else { unreachable!() };
    let real_dim = x.real_dim + y.real_dim;
    let mut out = BTreeMap::new();
    if x.real_dim % 4 == 0 && y.real_dim % 4 == 0 {
        let (wx, wy) = (x.real_dim / 4, y.real_dim / 4);
        let w = wx + wy;
        // variables: p_i(X) as index i, p_j(Y) as index w + j
        let total: Vec<RationalPolynomial> = (1..=w as usize)
            .map(|k| {
                let mut s = RationalPolynomial::zero();
                for i in 0..=k {
                    let a = if i == 0 { RationalPolynomial::constant(Q::one()) } else { RationalPolynomial::var(i) };
                    let b = if k == i { RationalPolynomial::constant(Q::one()) } else { RationalPolynomial::var(w as usize + k - i) };
                    s = s.add(&a.mul(&b));
                }
                s
            })
            .collect();
        for m in monomials_of_weight(w, w as usize) {
            let expr = monomial_poly(&m).substitute(&total);
            let mut v = Q::zero();
            for (mm, c) in &expr.terms {
                let e = &mm.0;
                let xm = Monomial::new(e.iter().take(w as usize).cloned().collect());
                let ym = Monomial::new(e.iter().skip(w as usize).cloned().collect());
                if xm.weight() != wx || ym.weight() != wy {
                    continue;
                }
                let a = if wx == 0 { Q::one() } else { nx.get(&xm).cloned().ok_or_else(|| CurvError::MissingMonomial(xm.display('p')))? };
                let b = if wy == 0 { Q::one() } else { ny.get(&ym).cloned().ok_or_else(|| CurvError::MissingMonomial(ym.display('p')))? };
                v += c * a * b;
            }
            out.insert(m, v);
        }
    }
    Ok(CharacteristicData { real_dim, numbers: Numbers::Pontryagin(out), spin: x.spin && y.spin })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum LichnerowiczVerdict {
    Consistent,
    InconsistentInput,
    NoConclusion,
}

/// A spin manifold with a quasi-positive scalar curvature metric has `Â = 0`.
pub fn lichnerowicz_verdict(data: &CharacteristicData, has_qpos_scalar_metric: bool) -> Result<LichnerowiczVerdict> {
    if !(data.spin && has_qpos_scalar_metric) {
        return Ok(LichnerowiczVerdict::NoConclusion);
    }
    Ok(if ahat_genus(data)?.value.is_zero() { LichnerowiczVerdict::Consistent } else { LichnerowiczVerdict::InconsistentInput })
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display('p'))
    }
}

/// Floating view of an exact value, for reports.
pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
