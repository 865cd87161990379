//! Cohomology of Pᵐ and of split projective bundles P(⊕O(aₖ)) over Pᵐ,
//! with coefficients that are rational functions of λ.
//!
//! The bundle ring has basis H^a h^b with a ≤ m and b < r, subject to
//! H^{m+1} = 0 and Σᵢ cᵢ(V) h^{r−i} = 0, where h = c₁(O(1)) and O(−1) is the
//! tautological line subbundle.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{int, Rational, RationalFunction};
use crate::error::{Error, Result};

/// V = ⊕ₖ O(aₖ) on Pᵐ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BundleSpec {
    pub base_dim: u32,
    pub twists: Vec<i64>,
}

impl BundleSpec {
    pub fn new(base_dim: u32, twists: Vec<i64>) -> Result<Self> {
        if twists.is_empty() {
            return Err(Error::InvalidInput("bundle needs at least one summand".into()));
        }
        Ok(BundleSpec { base_dim, twists })
    }

    pub fn rank(&self) -> u32 {
        self.twists.len() as u32
    }

    pub fn globally_generated(&self) -> bool {
        self.twists.iter().all(|&a| a >= 0)
    }

    /// Elementary symmetric function eᵢ of the twists, so cᵢ(V) = eᵢ·Hⁱ.
    pub fn chern_number(&self, i: u32) -> i64 {
        let mut e = vec![0i64; self.twists.len() + 1];
        e[0] = 1;
        for &a in &self.twists {
            for j in (1..e.len()).rev() {
                e[j] += e[j - 1] * a;
            }
        }
        e.get(i as usize).copied().unwrap_or(0)
    }

    /// Coefficient of Hʲ in the total Segre class 1/c(V).
    pub fn segre_number(&self, j: u32) -> Rational {
        let mut s: Vec<Rational> = vec![Rational::one()];
        for k in 1..=j {
            let mut acc = Rational::zero();
            for i in 1..=k {
                acc -= int(self.chern_number(i)) * &s[(k - i) as usize];
            }
            s.push(acc);
        }
        s[j as usize].clone()
    }

    pub fn c1(&self) -> i64 {
        self.twists.iter().sum()
    }
}

/// Which ring a class lives in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    /// H*(Pᵐ); the point is m = 0.
    Base { dim: u32 },
    /// H*(P(V)) for a split V over Pᵐ.
    Bundle(BundleSpec),
}

impl Ring {
    pub fn base_dim(&self) -> u32 {
        match self {
            Ring::Base { dim } => *dim,
            Ring::Bundle(s) => s.base_dim,
        }
    }

    /// Exponent bound on h in the reduced basis.
    pub fn fiber_rank(&self) -> u32 {
        match self {
            Ring::Base { .. } => 1,
            Ring::Bundle(s) => s.rank(),
        }
    }

    pub fn dim(&self) -> u32 {
        self.base_dim() + self.fiber_rank() - 1
    }

    /// Express H^a h^b in the reduced basis.
    pub fn reduce_monomial(&self, a: u32, b: u32) -> BTreeMap<(u32, u32), Rational> {
        let mut out = BTreeMap::new();
        self.reduce_into(a, b, Rational::one(), &mut out);
        out
    }

    fn reduce_into(&self, a: u32, b: u32, c: Rational, out: &mut BTreeMap<(u32, u32), Rational>) {
        let m = self.base_dim();
        if a > m || c.is_zero() {
            return;
        }
        match self {
            Ring::Base { .. } => {
                if b == 0 {
                    add_coeff(out, (a, 0), c);
                }
            }
            Ring::Bundle(spec) => {
                let r = spec.rank();
                if b < r {
                    add_coeff(out, (a, b), c);
                    return;
                }
                // h^r = −Σ_{i≥1} eᵢ Hⁱ h^{r−i}
                for i in 1..=r {
                    let e = spec.chern_number(i);
                    if e != 0 {
                        self.reduce_into(a + i, b - i, -&c * int(e), out);
                    }
                }
            }
        }
    }
}

fn add_coeff(out: &mut BTreeMap<(u32, u32), Rational>, k: (u32, u32), c: Rational) {
    let e = out.entry(k).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        out.remove(&k);
    }
}

/// A reduced cohomology class with λ-dependent coefficients, keyed by
/// (power of H, power of h).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohClass {
    ring: Ring,
    terms: BTreeMap<(u32, u32), RationalFunction>,
}

impl CohClass {
    pub fn zero(ring: &Ring) -> Self {
        CohClass { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::monomial(ring, 0, 0, RationalFunction::one())
    }

    pub fn scalar(ring: &Ring, c: RationalFunction) -> Self {
        Self::monomial(ring, 0, 0, c)
    }

    /// c·H^a h^b, reduced.
    pub fn monomial(ring: &Ring, a: u32, b: u32, c: RationalFunction) -> Self {
        let mut out = Self::zero(ring);
        for (k, v) in ring.reduce_monomial(a, b) {
            out.add_term(k, &c.scale(&v));
        }
        out
    }

    pub fn hyperplane(ring: &Ring) -> Self {
        Self::monomial(ring, 1, 0, RationalFunction::one())
    }

    pub fn tautological(ring: &Ring) -> Self {
        Self::monomial(ring, 0, 1, RationalFunction::one())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &RationalFunction)> {
        self.terms.iter().map(|(&k, v)| (k, v))
    }

    pub fn coefficient(&self, a: u32, b: u32) -> RationalFunction {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(RationalFunction::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, k: (u32, u32), c: &RationalFunction) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(RationalFunction::zero);
        *e = &*e + c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, other: &CohClass) -> CohClass {
        debug_assert_eq!(self.ring, other.ring);
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.add_term(k, c);
        }
        out
    }

    pub fn sub(&self, other: &CohClass) -> CohClass {
        self.add(&other.scale(&RationalFunction::constant(int(-1))))
    }

    pub fn scale(&self, c: &RationalFunction) -> CohClass {
        let mut out = Self::zero(&self.ring);
        for (&k, v) in &self.terms {
            out.add_term(k, &(v * c));
        }
        out
    }

    pub fn mul(&self, other: &CohClass) -> CohClass {
        debug_assert_eq!(self.ring, other.ring);
        let mut out = Self::zero(&self.ring);
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &other.terms {
                let c = c1 * c2;
                for (k, v) in self.ring.reduce_monomial(a1 + a2, b1 + b2) {
                    out.add_term(k, &c.scale(&v));
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> CohClass {
        (0..e).fold(Self::one(&self.ring), |acc, _| acc.mul(self))
    }

    /// Coefficient of the unit class.
    pub fn constant_term(&self) -> RationalFunction {
        self.coefficient(0, 0)
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(&(a, b), c)| format!("({c})*H^{a}*h^{b}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Total Chern class ∏(1 + aₖH) in the base ring.
pub fn chern_total(spec: &BundleSpec) -> CohClass {
    let ring = Ring::Base { dim: spec.base_dim };
    let mut out = CohClass::zero(&ring);
    for i in 0..=spec.rank() {
        let c = RationalFunction::constant(int(spec.chern_number(i)));
        out = out.add(&CohClass::monomial(&ring, i, 0, c));
    }
    out
}

/// Segre class sⱼ(V) in the base ring, with s(V) = 1/c(V).
pub fn segre(spec: &BundleSpec, j: u32) -> CohClass {
    let ring = Ring::Base { dim: spec.base_dim };
    CohClass::monomial(&ring, j, 0, RationalFunction::constant(spec.segre_number(j)))
}

/// π^* from the base ring to the bundle ring.
pub fn pullback(spec: &BundleSpec, c: &CohClass) -> CohClass {
    let ring = Ring::Bundle(spec.clone());
    let mut out = CohClass::zero(&ring);
    for ((a, _), v) in c.terms() {
        out = out.add(&CohClass::monomial(&ring, a, 0, v.clone()));
    }
    out
}

/// π_* from the bundle ring to the base ring. On the reduced basis only the
/// h^{r−1} coefficients survive.
pub fn pushforward(c: &CohClass) -> Result<CohClass> {
    let Ring::Bundle(spec) = c.ring() else {
        return Err(Error::InvalidInput("pushforward needs a bundle-ring class".into()));
    };
    let r = spec.rank();
    let base = Ring::Base { dim: spec.base_dim };
    let mut out = CohClass::zero(&base);
    for ((a, b), v) in c.terms() {
        if b == r - 1 {
            out = out.add(&CohClass::monomial(&base, a, 0, v.clone()));
        }
    }
    Ok(out)
}

/// π_*(H^a h^b) straight from the Segre classes, without reducing first.
pub fn pushforward_monomial(spec: &BundleSpec, a: u32, b: u32) -> CohClass {
    let base = Ring::Base { dim: spec.base_dim };
    let r = spec.rank();
    if b + 1 < r {
        return CohClass::zero(&base);
    }
    let j = b + 1 - r;
    CohClass::monomial(&base, a + j, 0, RationalFunction::constant(spec.segre_number(j)))
}

/// c₁(det T_π) = r·h + π^*c₁(V).
pub fn det_relative_tangent(spec: &BundleSpec) -> CohClass {
    let ring = Ring::Bundle(spec.clone());
    let r = RationalFunction::constant(int(spec.rank() as i64));
    let c1 = RationalFunction::constant(int(spec.c1()));
    CohClass::monomial(&ring, 0, 1, r).add(&CohClass::monomial(&ring, 1, 0, c1))
}

/// Σᵢ cᵢ(V)·t^{r−i} in the bundle ring.
pub fn chern_polynomial(spec: &BundleSpec, t: &CohClass) -> CohClass {
    let ring = Ring::Bundle(spec.clone());
    let r = spec.rank();
    let mut out = CohClass::zero(&ring);
    for i in 0..=r {
        let ci = CohClass::monomial(&ring, i, 0, RationalFunction::constant(int(spec.chern_number(i))));
        out = out.add(&ci.mul(&t.pow(r - i)));
    }
    out
}

/// Σᵢ cᵢ(Q)·t^{r−1−i} for the universal quotient Q = π^*V/O(−1), with
/// c(Q) = c(V)/(1 − h).
pub fn quotient_chern_polynomial(spec: &BundleSpec, t: &CohClass) -> CohClass {
    let ring = Ring::Bundle(spec.clone());
    let r = spec.rank();
    let h = CohClass::tautological(&ring);
    // cᵢ(Q) = Σ_{j ≤ i} cⱼ(V) h^{i−j}
    let mut out = CohClass::zero(&ring);
    for i in 0..r {
        let mut ci = CohClass::zero(&ring);
        for j in 0..=i {
            let cj = CohClass::monomial(&ring, j, 0, RationalFunction::constant(int(spec.chern_number(j))));
            ci = ci.add(&cj.mul(&h.pow(i - j)));
        }
        out = out.add(&ci.mul(&t.pow(r - 1 - i)));
    }
    out
}

/// Formal insertion expression over H, h, ψ, λ and rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rational),
    BaseHyperplane,
    Tautological,
    Psi,
    Lambda,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

// Builders named after the node they create; Expr is a syntax tree, not a ring.
#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn num(n: i64) -> Expr {
        Expr::Num(int(n))
    }
    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }
    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }
    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }
    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }
    pub fn pow(a: Expr, e: i64) -> Expr {
        Expr::Pow(Box::new(a), e)
    }
}

/// A finite ψ-series Σₖ ψᵏ·cₖ of classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescendantInsertion {
    ring: Ring,
    terms: BTreeMap<u32, CohClass>,
}

impl DescendantInsertion {
    pub fn zero(ring: &Ring) -> Self {
        DescendantInsertion { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn primary(c: CohClass) -> Self {
        Self::descendant(0, c)
    }

    pub fn descendant(k: u32, c: CohClass) -> Self {
        let mut out = Self::zero(c.ring());
        out.add_term(k, &c);
        out
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn psi_terms(&self) -> impl Iterator<Item = (u32, &CohClass)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn psi_coefficient(&self, k: u32) -> CohClass {
        self.terms.get(&k).cloned().unwrap_or_else(|| CohClass::zero(&self.ring))
    }

    fn add_term(&mut self, k: u32, c: &CohClass) {
        let e = self.terms.entry(k).or_insert_with(|| CohClass::zero(&self.ring));
        *e = e.add(c);
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn max_psi(&self) -> u32 {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    /// Flat list of (ψ power, H power, h power, coefficient).
    pub fn flat_terms(&self) -> Vec<(u32, u32, u32, RationalFunction)> {
        let mut out = Vec::new();
        for (&k, c) in &self.terms {
            for ((a, b), v) in c.terms() {
                out.push((k, a, b, v.clone()));
            }
        }
        out
    }

    /// Apply π_* to every ψ-coefficient.
    pub fn pushforward(&self) -> Result<DescendantInsertion> {
        let Ring::Bundle(spec) = &self.ring else {
            return Err(Error::InvalidInput("pushforward needs a bundle-ring insertion".into()));
        };
        let mut out = Self::zero(&Ring::Base { dim: spec.base_dim });
        for (&k, c) in &self.terms {
            out.add_term(k, &pushforward(c)?);
        }
        Ok(out)
    }
}

/// Truncated algebra ring ⊗ Q(λ)[ψ]/(ψ^{bound+1}) used to expand insertions.
#[derive(Clone, Debug)]
struct Series {
    ring: Ring,
    bound: u32,
    terms: BTreeMap<(u32, u32, u32), RationalFunction>,
}

impl Series {
    fn zero(ring: &Ring, bound: u32) -> Self {
        Series { ring: ring.clone(), bound, terms: BTreeMap::new() }
    }

    fn scalar(ring: &Ring, bound: u32, c: RationalFunction) -> Self {
        let mut s = Self::zero(ring, bound);
        s.add_term((0, 0, 0), c);
        s
    }

    fn generator(ring: &Ring, bound: u32, k: u32, a: u32, b: u32) -> Self {
        let mut s = Self::zero(ring, bound);
        if k <= bound {
            for ((a, b), v) in ring.reduce_monomial(a, b) {
                s.add_term((k, a, b), RationalFunction::constant(v));
            }
        }
        s
    }

    fn add_term(&mut self, key: (u32, u32, u32), c: RationalFunction) {
        if c.is_zero() || key.0 > self.bound {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(RationalFunction::zero);
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn add(&self, o: &Series) -> Series {
        let mut out = self.clone();
        for (&k, c) in &o.terms {
            out.add_term(k, c.clone());
        }
        out
    }

    fn scale(&self, c: &RationalFunction) -> Series {
        let mut out = Self::zero(&self.ring, self.bound);
        for (&k, v) in &self.terms {
            out.add_term(k, v * c);
        }
        out
    }

    fn mul(&self, o: &Series) -> Series {
        let mut out = Self::zero(&self.ring, self.bound);
        for (&(k1, a1, b1), c1) in &self.terms {
            for (&(k2, a2, b2), c2) in &o.terms {
                if k1 + k2 > self.bound {
                    continue;
                }
                let c = c1 * c2;
                for ((a, b), v) in self.ring.reduce_monomial(a1 + a2, b1 + b2) {
                    out.add_term((k1 + k2, a, b), c.scale(&v));
                }
            }
        }
        out
    }

    fn inv(&self) -> Result<Series> {
        let c0 = self.terms.get(&(0, 0, 0)).cloned().unwrap_or_else(RationalFunction::zero);
        if c0.is_zero() {
            return Err(Error::NonInvertibleInsertion);
        }
        let c0inv = c0.inv()?;
        // self = c0(1 + n) with n nilpotent; 1/self = c0⁻¹ Σ (−n)ʲ.
        let mut n = self.scale(&c0inv);
        n.terms.remove(&(0, 0, 0));
        let neg_n = n.scale(&RationalFunction::constant(int(-1)));
        let one = Series::scalar(&self.ring, self.bound, RationalFunction::one());
        let mut acc = one.clone();
        let mut p = one;
        loop {
            p = p.mul(&neg_n);
            if p.terms.is_empty() {
                break;
            }
            acc = acc.add(&p);
        }
        Ok(acc.scale(&c0inv))
    }

    fn pow(&self, e: i64) -> Result<Series> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Series::scalar(&self.ring, self.bound, RationalFunction::one());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }
}

fn eval_series(e: &Expr, ring: &Ring, bound: u32) -> Result<Series> {
    Ok(match e {
        Expr::Num(r) => Series::scalar(ring, bound, RationalFunction::constant(r.clone())),
        Expr::Lambda => Series::scalar(ring, bound, RationalFunction::lambda()),
        Expr::BaseHyperplane => Series::generator(ring, bound, 0, 1, 0),
        Expr::Tautological => {
            if !matches!(ring, Ring::Bundle(_)) {
                return Err(Error::InvalidInput("h is only defined on a projective bundle".into()));
            }
            Series::generator(ring, bound, 0, 0, 1)
        }
        Expr::Psi => Series::generator(ring, bound, 1, 0, 0),
        Expr::Neg(a) => eval_series(a, ring, bound)?.scale(&RationalFunction::constant(int(-1))),
        Expr::Add(a, b) => eval_series(a, ring, bound)?.add(&eval_series(b, ring, bound)?),
        Expr::Sub(a, b) => {
            eval_series(a, ring, bound)?.add(&eval_series(b, ring, bound)?.scale(&RationalFunction::constant(int(-1))))
        }
        Expr::Mul(a, b) => eval_series(a, ring, bound)?.mul(&eval_series(b, ring, bound)?),
        Expr::Div(a, b) => eval_series(a, ring, bound)?.mul(&eval_series(b, ring, bound)?.inv()?),
        Expr::Pow(a, k) => eval_series(a, ring, bound)?.pow(*k)?,
    })
}

/// Expand a formal insertion into a finite ψ-series, treating H, h and ψ as
/// nilpotent and truncating ψ above `dim_bound`.
pub fn expand_insertion(expr: &Expr, ring: &Ring, dim_bound: u32) -> Result<DescendantInsertion> {
    let s = eval_series(expr, ring, dim_bound)?;
    let mut out = DescendantInsertion::zero(ring);
    for ((k, a, b), c) in s.terms {
        out.add_term(k, &CohClass::monomial(ring, a, b, c));
    }
    Ok(out)
}
