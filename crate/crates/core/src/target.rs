//! Torus-fixed geometry of the supported targets.
//!
//! Conventions: on Pᵐ the hyperplane class restricts to xᵢ at the fixed point
//! qᵢ and the tangent weight of the line qᵢqⱼ at qᵢ is xᵢ − xⱼ. On P(⊕O(aₖ))
//! the tautological line O(−1) has weight ωₖ(i) = aₖxᵢ + μₖ at (i, k), so h
//! restricts to −ωₖ(i). Every equivariant line bundle L satisfies
//! L|_p − L|_q = (L·line)·w_p on each invariant line.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{int, MultiPoly, Symbol};
use crate::cohomology::{BundleSpec, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetKind {
    Point,
    ProjectiveSpace { dim: u32 },
    ProjBundle { base_dim: u32, twists: Vec<i64> },
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetKind::Point => write!(f, "pt"),
            TargetKind::ProjectiveSpace { dim } => write!(f, "P^{dim}"),
            TargetKind::ProjBundle { base_dim, twists } => {
                write!(f, "P(")?;
                for (i, a) in twists.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "O({a})")?;
                }
                write!(f, ") over P^{base_dim}")
            }
        }
    }
}

/// A fixed point: base fixed point `base`, and for bundles the summand
/// `summand` (1-based; 0 when there is no fiber direction).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FixedPoint {
    pub base: u32,
    pub summand: u32,
}

impl fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summand == 0 {
            write!(f, "q{}", self.base)
        } else {
            write!(f, "({},{})", self.base, self.summand)
        }
    }
}

/// Curve class: base degree and, for bundles, the h-degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct CurveClass {
    pub d: i64,
    #[serde(default)]
    pub e: i64,
}

impl CurveClass {
    pub fn new(d: i64, e: i64) -> Self {
        CurveClass { d, e }
    }

    pub fn is_zero(&self) -> bool {
        self.d == 0 && self.e == 0
    }

    pub fn scaled(&self, k: i64) -> CurveClass {
        CurveClass::new(self.d * k, self.e * k)
    }

    pub fn plus(&self, o: &CurveClass) -> CurveClass {
        CurveClass::new(self.d + o.d, self.e + o.e)
    }

    pub fn minus(&self, o: &CurveClass) -> CurveClass {
        CurveClass::new(self.d - o.d, self.e - o.e)
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.d, self.e)
    }
}

/// The line bundle π^*O(a) ⊗ O(−1)^{t}; on Pᵐ only `t = 0` is meaningful.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LineBundle {
    pub base_twist: i64,
    pub taut_power: i64,
}

impl LineBundle {
    pub fn pullback(a: i64) -> Self {
        LineBundle { base_twist: a, taut_power: 0 }
    }

    pub fn tautological() -> Self {
        LineBundle { base_twist: 0, taut_power: 1 }
    }

    pub fn degree(&self, c: &CurveClass) -> i64 {
        self.base_twist * c.d - self.taut_power * c.e
    }
}

/// A torus-invariant line joining two fixed points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantLine {
    pub p: usize,
    pub q: usize,
    /// Tangent weight of the line at `p`; the weight at `q` is its negative.
    pub weight: MultiPoly,
    pub class: CurveClass,
    /// T(target) restricted to the line as (degree, weight at p).
    pub tangent_splitting: Vec<(i64, MultiPoly)>,
}

impl InvariantLine {
    /// Tangent weight at the given endpoint.
    pub fn weight_at(&self, v: usize) -> MultiPoly {
        if v == self.p {
            self.weight.clone()
        } else {
            -&self.weight
        }
    }

    pub fn other(&self, v: usize) -> usize {
        if v == self.p {
            self.q
        } else {
            self.p
        }
    }
}

#[derive(Clone, Debug)]
pub struct TargetModel {
    kind: TargetKind,
    fixed_points: Vec<FixedPoint>,
    lines: Vec<InvariantLine>,
    line_index: BTreeMap<(usize, usize), usize>,
    /// Tangent weights at each fixed point, as (neighbor, weight).
    tangent: Vec<Vec<(usize, MultiPoly)>>,
}

impl TargetModel {
    pub fn build(kind: TargetKind) -> Result<TargetModel> {
        match &kind {
            TargetKind::Point => Ok(Self::projective(kind.clone(), 0)),
            TargetKind::ProjectiveSpace { dim } => Ok(Self::projective(kind.clone(), *dim)),
            TargetKind::ProjBundle { base_dim, twists } => {
                let spec = BundleSpec::new(*base_dim, twists.clone())?;
                Self::bundle(kind.clone(), &spec)
            }
        }
    }

    pub fn point() -> TargetModel {
        Self::build(TargetKind::Point).unwrap()
    }

    pub fn projective_space(m: u32) -> TargetModel {
        Self::build(TargetKind::ProjectiveSpace { dim: m }).unwrap()
    }

    pub fn proj_bundle(base_dim: u32, twists: &[i64]) -> Result<TargetModel> {
        Self::build(TargetKind::ProjBundle { base_dim, twists: twists.to_vec() })
    }

    fn x(i: u32) -> MultiPoly {
        MultiPoly::var(Symbol::X(i as u16))
    }

    fn projective(kind: TargetKind, m: u32) -> TargetModel {
        let fixed_points = (0..=m).map(|i| FixedPoint { base: i, summand: 0 }).collect();
        let tangent = (0..=m)
            .map(|i| (0..=m).filter(|&j| j != i).map(|j| (j as usize, &Self::x(i) - &Self::x(j))).collect())
            .collect();
        let mut model = TargetModel { kind, fixed_points, lines: Vec::new(), line_index: BTreeMap::new(), tangent };
        for i in 0..=m as usize {
            for j in i + 1..=m as usize {
                model.add_line(i, j, CurveClass::new(1, 0));
            }
        }
        model
    }

    /// O(−1) weight ωₖ(i) = aₖxᵢ + μₖ.
    fn omega(spec: &BundleSpec, i: u32, k: u32) -> MultiPoly {
        let a = spec.twists[(k - 1) as usize];
        &Self::x(i).scale(&int(a)) + &MultiPoly::var(Symbol::Mu(k as u16))
    }

    fn bundle(kind: TargetKind, spec: &BundleSpec) -> Result<TargetModel> {
        let m = spec.base_dim;
        let r = spec.rank();
        let mut fixed_points = Vec::new();
        for i in 0..=m {
            for k in 1..=r {
                fixed_points.push(FixedPoint { base: i, summand: k });
            }
        }
        let idx = |i: u32, k: u32| (i * r + (k - 1)) as usize;
        let mut tangent = Vec::new();
        for fp in &fixed_points {
            let (i, k) = (fp.base, fp.summand);
            let mut t = Vec::new();
            for j in (0..=m).filter(|&j| j != i) {
                t.push((idx(j, k), &Self::x(i) - &Self::x(j)));
            }
            for k2 in (1..=r).filter(|&k2| k2 != k) {
                t.push((idx(i, k2), &Self::omega(spec, i, k2) - &Self::omega(spec, i, k)));
            }
            tangent.push(t);
        }
        let mut model = TargetModel { kind, fixed_points, lines: Vec::new(), line_index: BTreeMap::new(), tangent };
        for i in 0..=m {
            for k in 1..=r {
                for k2 in k + 1..=r {
                    model.add_line(idx(i, k), idx(i, k2), CurveClass::new(0, 1));
                }
                for j in i + 1..=m {
                    let a = spec.twists[(k - 1) as usize];
                    model.add_line(idx(i, k), idx(j, k), CurveClass::new(1, -a));
                }
            }
        }
        Ok(model)
    }

    fn add_line(&mut self, p: usize, q: usize, class: CurveClass) {
        let weight = self.tangent_weight(p, q).expect("neighbors share a line");
        let tangent_splitting = self.split_tangent(p, q, &weight);
        let id = self.lines.len();
        self.lines.push(InvariantLine { p, q, weight, class, tangent_splitting });
        self.line_index.insert((p, q), id);
        self.line_index.insert((q, p), id);
    }

    fn tangent_weight(&self, p: usize, q: usize) -> Option<MultiPoly> {
        self.tangent[p].iter().find(|(n, _)| *n == q).map(|(_, w)| w.clone())
    }

    /// Pair tangent directions at p with those at q so that u_p − u_q = b·w;
    /// b is then the degree of that summand on the line.
    fn split_tangent(&self, p: usize, q: usize, w: &MultiPoly) -> Vec<(i64, MultiPoly)> {
        let mut out = vec![(2, w.clone())];
        let mut used = BTreeSet::new();
        for (np, up) in self.tangent[p].iter().filter(|(n, _)| *n != q) {
            let mut found = None;
            for (j, (nq, uq)) in self.tangent[q].iter().enumerate() {
                if *nq == p || used.contains(&j) {
                    continue;
                }
                if let Some(b) = integer_ratio(&(up - uq), w) {
                    found = Some((j, b));
                    break;
                }
            }
            let (j, b) = found.unwrap_or_else(|| panic!("no tangent partner for direction {np}"));
            used.insert(j);
            out.push((b, up.clone()));
        }
        out
    }

    pub fn kind(&self) -> &TargetKind {
        &self.kind
    }

    pub fn base_dim(&self) -> u32 {
        match &self.kind {
            TargetKind::Point => 0,
            TargetKind::ProjectiveSpace { dim } => *dim,
            TargetKind::ProjBundle { base_dim, .. } => *base_dim,
        }
    }

    pub fn bundle_spec(&self) -> Option<BundleSpec> {
        match &self.kind {
            TargetKind::ProjBundle { base_dim, twists } => {
                Some(BundleSpec { base_dim: *base_dim, twists: twists.clone() })
            }
            _ => None,
        }
    }

    pub fn is_bundle(&self) -> bool {
        matches!(self.kind, TargetKind::ProjBundle { .. })
    }

    pub fn ring(&self) -> Ring {
        match self.bundle_spec() {
            Some(s) => Ring::Bundle(s),
            None => Ring::Base { dim: self.base_dim() },
        }
    }

    pub fn dim(&self) -> u32 {
        self.ring().dim()
    }

    pub fn fixed_points(&self) -> &[FixedPoint] {
        &self.fixed_points
    }

    pub fn lines(&self) -> &[InvariantLine] {
        &self.lines
    }

    pub fn line_between(&self, p: usize, q: usize) -> Option<usize> {
        self.line_index.get(&(p, q)).copied()
    }

    /// (neighbor, weight) pairs of the tangent space at a fixed point.
    pub fn tangent_weights(&self, p: usize) -> &[(usize, MultiPoly)] {
        &self.tangent[p]
    }

    /// Weight symbols used by the model.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut s: Vec<Symbol> = (0..=self.base_dim()).map(|i| Symbol::X(i as u16)).collect();
        if let Some(spec) = self.bundle_spec() {
            s.extend((1..=spec.rank()).map(|k| Symbol::Mu(k as u16)));
        }
        s
    }

    /// c₁(T target)·β.
    pub fn c1_degree(&self, c: &CurveClass) -> i64 {
        let m = self.base_dim() as i64;
        match self.bundle_spec() {
            None => (m + 1) * c.d,
            Some(s) => s.rank() as i64 * c.e + (s.c1() + m + 1) * c.d,
        }
    }

    /// Virtual dimension of the genus-0 moduli space with n markings.
    pub fn virtual_dim(&self, c: &CurveClass, n: usize) -> i64 {
        self.dim() as i64 + self.c1_degree(c) + n as i64 - 3
    }

    /// A linear function positive on every invariant line class; it bounds
    /// the total edge degree of a fixed locus.
    pub fn ample_bound(&self, c: &CurveClass) -> i64 {
        match self.bundle_spec() {
            None => c.d,
            Some(s) => {
                let amax = s.twists.iter().copied().max().unwrap_or(0).max(0);
                (1 + amax) * c.d + c.e
            }
        }
    }

    pub fn ample_degree_of_line(&self, line: usize) -> i64 {
        self.ample_bound(&self.lines[line].class)
    }

    pub fn is_effective(&self, c: &CurveClass) -> bool {
        match self.bundle_spec() {
            None => c.d >= 0 && (c.e == 0) && (self.base_dim() > 0 || c.d == 0),
            Some(s) => {
                if c.d < 0 {
                    return false;
                }
                if s.base_dim == 0 {
                    return c.d == 0 && c.e >= 0;
                }
                let amax = s.twists.iter().copied().max().unwrap();
                c.e >= -c.d * amax
            }
        }
    }

    /// The lift β̃ of a base class with (β̃, h) = 0.
    pub fn lift_class(&self, base_degree: i64) -> Result<CurveClass> {
        if !self.is_bundle() {
            return Err(Error::InvalidInput("lift_class needs a projective bundle".into()));
        }
        Ok(CurveClass::new(base_degree, 0))
    }

    /// Restriction weight of a line bundle at a fixed point.
    pub fn bundle_weight(&self, l: &LineBundle, p: usize) -> MultiPoly {
        let fp = self.fixed_points[p];
        let mut w = Self::x(fp.base).scale(&int(l.base_twist));
        if l.taut_power != 0 {
            let spec = self.bundle_spec().expect("O(-1) needs a projective bundle");
            w = &w + &Self::omega(&spec, fp.base, fp.summand).scale(&int(l.taut_power));
        }
        w
    }

    /// Restriction of H^a h^b to a fixed point.
    pub fn restrict_monomial(&self, a: u32, b: u32, p: usize) -> MultiPoly {
        let fp = self.fixed_points[p];
        let hv = match self.bundle_spec() {
            Some(spec) => -&Self::omega(&spec, fp.base, fp.summand),
            None => MultiPoly::zero(),
        };
        &Self::x(fp.base).pow(a) * &hv.pow(b)
    }

    /// Restrict a class with λ-dependent coefficients at a fixed point.
    pub fn restrict_class(&self, c: &crate::cohomology::CohClass, p: usize) -> crate::arith::RationalFunction {
        use crate::arith::RationalFunction;
        let mut acc = RationalFunction::zero();
        for ((a, b), coeff) in c.terms() {
            let m = RationalFunction::from_poly(self.restrict_monomial(a, b, p));
            acc = &acc + &(&m * coeff);
        }
        acc
    }

    /// Find a fixed point by its label.
    pub fn fixed_point_index(&self, fp: FixedPoint) -> Option<usize> {
        self.fixed_points.iter().position(|&x| x == fp)
    }
}

/// b with a = b·w for an integer b, if one exists.
fn integer_ratio(a: &MultiPoly, w: &MultiPoly) -> Option<i64> {
    if a.is_zero() {
        return Some(0);
    }
    let (lm, lc) = w.leading()?;
    let ac = a.terms().find(|(m, _)| *m == lm).map(|(_, c)| c.clone())?;
    let b = ac / lc;
    if !b.is_integer() {
        return None;
    }
    if &w.scale(&b) != a {
        return None;
    }
    use num_traits::ToPrimitive;
    b.to_integer().to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::RationalFunction;
    use crate::cohomology::CohClass;

    fn x(i: u16) -> MultiPoly {
        MultiPoly::var(Symbol::X(i))
    }
    fn mu(k: u16) -> MultiPoly {
        MultiPoly::var(Symbol::Mu(k))
    }

    #[test]
    fn p1_model() {
        let m = TargetModel::projective_space(1);
        assert_eq!(m.fixed_points().len(), 2);
        assert_eq!(m.lines().len(), 1);
        let l = &m.lines()[0];
        assert_eq!(l.weight_at(l.p), &x(0) - &x(1));
        assert_eq!(l.weight_at(l.q), &x(1) - &x(0));
        assert_eq!(l.tangent_splitting, vec![(2, &x(0) - &x(1))]);
    }

    #[test]
    fn p2_tangent_splitting() {
        let m = TargetModel::projective_space(2);
        assert_eq!(m.lines().len(), 3);
        for l in m.lines() {
            let mut degs: Vec<i64> = l.tangent_splitting.iter().map(|t| t.0).collect();
            degs.sort();
            assert_eq!(degs, vec![1, 2]);
        }
    }

    #[test]
    fn trivial_bundle_over_p1_is_p1_cross_p1() {
        let m = TargetModel::proj_bundle(1, &[0, 0]).unwrap();
        assert_eq!(m.fixed_points().len(), 4);
        let vertical = m.lines().iter().filter(|l| l.class == CurveClass::new(0, 1)).count();
        let horizontal = m.lines().iter().filter(|l| l.class == CurveClass::new(1, 0)).count();
        assert_eq!((vertical, horizontal), (2, 2));
    }

    #[test]
    fn horizontal_class_of_twisted_bundle() {
        let m = TargetModel::proj_bundle(1, &[1, 1]).unwrap();
        for l in m.lines() {
            let a = m.fixed_points()[l.p];
            let b = m.fixed_points()[l.q];
            if a.summand == b.summand {
                assert_eq!(l.class, CurveClass::new(1, -1));
            } else {
                assert_eq!(l.class, CurveClass::new(0, 1));
            }
        }
    }

    #[test]
    fn lift_examples() {
        let m = TargetModel::proj_bundle(1, &[1, 1]).unwrap();
        assert_eq!(m.lift_class(0).unwrap(), CurveClass::new(0, 0));
        let lifted = m.lift_class(1).unwrap();
        assert_eq!(lifted, CurveClass::new(1, -1).plus(&CurveClass::new(0, 1)));
        let m = TargetModel::proj_bundle(1, &[0, 2]).unwrap();
        assert_eq!(m.lift_class(1).unwrap(), CurveClass::new(1, 0));
        assert!(m.is_effective(&CurveClass::new(1, 0)));
    }

    #[test]
    fn restriction_examples() {
        let p2 = TargetModel::projective_space(2);
        let ring = p2.ring();
        let h = CohClass::hyperplane(&ring);
        assert_eq!(p2.restrict_class(&h, 2), RationalFunction::from_poly(x(2)));

        let m = TargetModel::proj_bundle(1, &[0, 0]).unwrap();
        let p = m.fixed_point_index(FixedPoint { base: 0, summand: 1 }).unwrap();
        let ring = m.ring();
        let t = CohClass::tautological(&ring);
        assert_eq!(m.restrict_class(&t, p), RationalFunction::from_poly(-&mu(1)));

        let m = TargetModel::proj_bundle(1, &[1, 1]).unwrap();
        let p = m.fixed_point_index(FixedPoint { base: 1, summand: 2 }).unwrap();
        let ring = m.ring();
        let c = CohClass::tautological(&ring).add(&CohClass::scalar(&ring, RationalFunction::lambda()));
        let expect = &(&MultiPoly::var(Symbol::Lambda) - &x(1)) - &mu(2);
        assert_eq!(m.restrict_class(&c, p), RationalFunction::from_poly(expect));
    }

    #[test]
    fn line_bundle_weights_are_consistent_on_lines() {
        for model in [
            TargetModel::projective_space(2),
            TargetModel::proj_bundle(1, &[0, 2]).unwrap(),
            TargetModel::proj_bundle(2, &[1, 0, 3]).unwrap(),
        ] {
            let bundles = [LineBundle::pullback(3), LineBundle::pullback(-1)];
            let taut = [LineBundle::tautological(), LineBundle { base_twist: 2, taut_power: -1 }];
            let all: Vec<LineBundle> =
                if model.is_bundle() { bundles.iter().chain(taut.iter()).copied().collect() } else { bundles.to_vec() };
            for l in model.lines() {
                for b in &all {
                    let diff = &model.bundle_weight(b, l.p) - &model.bundle_weight(b, l.q);
                    assert_eq!(diff, l.weight.scale(&int(b.degree(&l.class))));
                }
            }
        }
    }

    #[test]
    fn tangent_sum_matches_first_chern_class() {
        // Σ of tangent weights at p is the restriction of an equivariant lift
        // of c₁(T); its degree along any line is c₁·line.
        for model in [
            TargetModel::projective_space(2),
            TargetModel::proj_bundle(1, &[1, 1]).unwrap(),
            TargetModel::proj_bundle(2, &[0, 1, 2]).unwrap(),
        ] {
            let sum = |p: usize| model.tangent_weights(p).iter().fold(MultiPoly::zero(), |acc, (_, w)| &acc + w);
            for l in model.lines() {
                let diff = &sum(l.p) - &sum(l.q);
                assert_eq!(diff, l.weight.scale(&int(model.c1_degree(&l.class))));
                let total: i64 = l.tangent_splitting.iter().map(|t| t.0).sum();
                assert_eq!(total, model.c1_degree(&l.class));
            }
        }
    }
}
