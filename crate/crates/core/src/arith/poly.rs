use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::Rational;

/// Variables that may appear in a polynomial. The derived order puts λ first,
/// which makes it the smallest variable of the monomial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Symbol {
    Lambda,
    X(u16),
    Mu(u16),
    W(u16),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Lambda => write!(f, "λ"),
            Symbol::X(i) => write!(f, "x{i}"),
            Symbol::Mu(i) => write!(f, "μ{i}"),
            Symbol::W(i) => write!(f, "w{i}"),
        }
    }
}

/// A monomial as a sorted list of (symbol, positive exponent).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Symbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(s: Symbol, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(s, e)])
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Symbol, u32)>) -> Self {
        let mut map: BTreeMap<Symbol, u32> = BTreeMap::new();
        for (s, e) in pairs {
            *map.entry(s).or_default() += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, s: Symbol) -> u32 {
        self.0.iter().find(|&&(t, _)| t == s).map(|&(_, e)| e).unwrap_or(0)
    }

    pub fn pairs(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = self.0[i];
            let (b, eb) = other.0[j];
            match a.cmp(&b) {
                Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(s, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < s {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == s {
                let f = other.0[j].1;
                if f > e {
                    return None;
                }
                if e > f {
                    out.push((s, e - f));
                }
                j += 1;
            } else {
                out.push((s, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    fn without(&self, s: Symbol) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&(t, _)| t != s).collect())
    }
}

/// Degree-lexicographic order; ties are broken by comparing exponents of the
/// largest symbols first, so λ is the smallest variable.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (da, db) = (self.degree(), other.degree());
        if da != db {
            return da.cmp(&db);
        }
        let (mut i, mut j) = (self.0.len(), other.0.len());
        loop {
            match (i, j) {
                (0, 0) => return Ordering::Equal,
                (0, _) => return Ordering::Less,
                (_, 0) => return Ordering::Greater,
                _ => {
                    let (sa, ea) = self.0[i - 1];
                    let (sb, eb) = other.0[j - 1];
                    if sa != sb {
                        return sa.cmp(&sb);
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    i -= 1;
                    j -= 1;
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.0.iter().map(|&(s, e)| if e == 1 { s.to_string() } else { format!("{s}^{e}") }).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Sparse polynomial with rational coefficients. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(s: Symbol) -> Self {
        Self::term(Monomial::var(s, 1), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    /// `λ + c`
    pub fn lambda_plus(c: Rational) -> Self {
        MultiPoly::var(Symbol::Lambda) + MultiPoly::constant(c)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The constant value, if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.leading().map(|(m, _)| m.degree()).unwrap_or(0)
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|&(s, _)| s)).collect()
    }

    pub fn degree_in(&self, s: Symbol) -> u32 {
        self.terms.keys().map(|m| m.exponent(s)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        MultiPoly { terms: self.terms.iter().map(|(n, a)| (n.mul(m), a.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = MultiPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Coefficients with respect to `s`, indexed by the power of `s`.
    pub fn coeffs_in(&self, s: Symbol) -> Vec<MultiPoly> {
        let mut out = vec![MultiPoly::zero(); self.degree_in(s) as usize + 1];
        for (m, c) in &self.terms {
            out[m.exponent(s) as usize].add_term(m.without(s), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(s: Symbol, coeffs: &[MultiPoly]) -> Self {
        let mut p = MultiPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let m = Monomial::var(s, k as u32);
            for (n, a) in &c.terms {
                p.add_term(n.mul(&m), a.clone());
            }
        }
        p
    }

    /// Substitute the assigned symbols; unassigned symbols stay.
    pub fn substitute(&self, assignment: &BTreeMap<Symbol, Rational>) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for &(s, e) in &m.0 {
                match assignment.get(&s) {
                    Some(v) => coeff *= num_traits::pow(v.clone(), e as usize),
                    None => rest.push((s, e)),
                }
            }
            p.add_term(Monomial(rest), coeff);
        }
        p
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        let (lm_d, lc_d) = d.leading()?;
        let (lm_d, lc_d) = (lm_d.clone(), lc_d.clone());
        let mut r = self.clone();
        let mut q = MultiPoly::zero();
        while let Some((lm, lc)) = r.leading() {
            let m = lm.div(&lm_d)?;
            let c = lc / &lc_d;
            r = &r - &d.mul_monomial(&m).scale(&c);
            q.add_term(m, c);
        }
        Some(q)
    }

    /// Least common multiple of all coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Gcd of the numerators, assuming integral coefficients.
    pub fn numerator_gcd(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
    }

    /// Integral primitive associate with positive leading coefficient.
    pub fn primitive_associate(&self) -> MultiPoly {
        if self.is_zero() {
            return MultiPoly::zero();
        }
        let scaled = self.scale(&Rational::from_integer(self.denominator_lcm()));
        let mut g = scaled.numerator_gcd();
        if scaled.leading_coefficient().is_negative() {
            g = -g;
        }
        scaled.scale(&Rational::new(BigInt::one(), g))
    }

    /// Greatest common divisor, normalized by [`MultiPoly::primitive_associate`].
    pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        if a.is_zero() {
            return b.primitive_associate();
        }
        if b.is_zero() {
            return a.primitive_associate();
        }
        if a.as_constant().is_some() || b.as_constant().is_some() {
            return MultiPoly::one();
        }
        let sa = a.symbols();
        let sb = b.symbols();
        let common: Vec<Symbol> = sa.intersection(&sb).copied().collect();
        if common.is_empty() {
            return MultiPoly::one();
        }
        // Main variable: the largest symbol present in either polynomial.
        let v = *sa.iter().chain(sb.iter()).max().unwrap();
        if !sa.contains(&v) {
            // `a` is free of v: gcd(a, b) = gcd(a, content_v(b)).
            return MultiPoly::gcd(a, &content_in(b, v));
        }
        if !sb.contains(&v) {
            return MultiPoly::gcd(&content_in(a, v), b);
        }
        let ca = content_in(a, v);
        let cb = content_in(b, v);
        let c = MultiPoly::gcd(&ca, &cb);
        if coprime_in(a, b, v) {
            return c.primitive_associate();
        }
        let pa = a.div_exact(&ca).expect("content divides");
        let pb = b.div_exact(&cb).expect("content divides");
        let g = subresultant_gcd(&pa, &pb, v);
        (&c * &g).primitive_associate()
    }
}

/// True when some specialization of the other variables keeps both leading
/// coefficients in `v` and leaves coprime univariate images. The degree in `v`
/// of the gcd can only grow under such a specialization, so this proves the
/// gcd is free of `v`.
fn coprime_in(a: &MultiPoly, b: &MultiPoly, v: Symbol) -> bool {
    let others: BTreeSet<Symbol> = a.symbols().union(&b.symbols()).copied().filter(|&s| s != v).collect();
    for attempt in 0..3i64 {
        let assignment: BTreeMap<Symbol, Rational> = others
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                (s, Rational::from_integer(BigInt::from(3 + 7 * i as i64 + 13 * attempt + (i as i64 * i as i64) % 5)))
            })
            .collect();
        let ua = univariate(a, v, &assignment);
        let ub = univariate(b, v, &assignment);
        if ua.len() != a.degree_in(v) as usize + 1 || ub.len() != b.degree_in(v) as usize + 1 {
            continue;
        }
        return univariate_gcd_degree(ua, ub) == 0;
    }
    false
}

/// Coefficients (low to high) of `p` in `v` after substituting the rest,
/// with trailing zeros dropped.
fn univariate(p: &MultiPoly, v: Symbol, assignment: &BTreeMap<Symbol, Rational>) -> Vec<Rational> {
    let mut out: Vec<Rational> =
        p.coeffs_in(v).iter().map(|c| c.substitute(assignment).as_constant().unwrap_or_else(Rational::zero)).collect();
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

fn univariate_gcd_degree(mut a: Vec<Rational>, mut b: Vec<Rational>) -> usize {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        // a mod b
        let lb = b.last().unwrap().clone();
        while a.len() >= b.len() {
            let f = a.last().unwrap() / &lb;
            let off = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                a[off + i] -= &f * c;
            }
            a.pop();
            while a.last().is_some_and(|c| c.is_zero()) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// Content with respect to `v`: the gcd of the coefficients in `v`.
fn content_in(p: &MultiPoly, v: Symbol) -> MultiPoly {
    let coeffs = p.coeffs_in(v);
    let mut g = MultiPoly::zero();
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        g = MultiPoly::gcd(&g, c);
        if g.as_constant().is_some() {
            return MultiPoly::one();
        }
    }
    g
}

fn primitive_part_in(p: &MultiPoly, v: Symbol) -> MultiPoly {
    if p.is_zero() {
        return MultiPoly::zero();
    }
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").primitive_associate()
}

/// Pseudo-remainder of `p` by `q` in `v`: the remainder of `lc(q)^(deg p - deg q + 1) * p`.
fn pseudo_remainder(p: &MultiPoly, q: &MultiPoly, v: Symbol) -> MultiPoly {
    let dq = q.degree_in(v);
    let lcq = q.coeffs_in(v).pop().unwrap();
    let mut r = p.clone();
    let mut steps = (p.degree_in(v) + 1).saturating_sub(dq);
    while !r.is_zero() && r.degree_in(v) >= dq {
        let dr = r.degree_in(v);
        let lcr = r.coeffs_in(v).pop().unwrap();
        let shift = Monomial::var(v, dr - dq);
        r = &(&r * &lcq) - &(&lcr * &q.mul_monomial(&shift));
        steps -= 1;
    }
    &r * &lcq.pow(steps)
}

/// Gcd of two polynomials primitive in `v`, by the subresultant remainder sequence.
fn subresultant_gcd(a: &MultiPoly, b: &MultiPoly, v: Symbol) -> MultiPoly {
    let (mut p, mut q) = if a.degree_in(v) >= b.degree_in(v) { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    let mut g = MultiPoly::one();
    let mut h = MultiPoly::one();
    loop {
        if q.degree_in(v) == 0 {
            // q is free of v and primitive in v, so it is a unit for this purpose.
            return MultiPoly::one();
        }
        let delta = p.degree_in(v) - q.degree_in(v);
        let r = pseudo_remainder(&p, &q, v);
        if r.is_zero() {
            return primitive_part_in(&q, v);
        }
        let divisor = &g * &h.pow(delta);
        p = q;
        q = r.div_exact(&divisor).expect("subresultant division is exact");
        g = p.coeffs_in(v).pop().unwrap();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g.pow(delta).div_exact(&h.pow(delta - 1)).expect("subresultant division is exact"),
        };
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (m.is_one(), a.is_one()) {
                (true, _) => write!(f, "{a}")?,
                (false, true) => write!(f, "{m}")?,
                (false, false) => write!(f, "{a}*{m}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, a) in &self.terms {
            for (n, b) in &rhs.terms {
                out.add_term(m.mul(n), a * b);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}
