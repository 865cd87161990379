//! Localization graph sums for genus-0 (twisted) invariants.
//!
//! Each skeleton contributes
//!
//! ```text
//!   1/(|Aut| ∏ d_e) · ∏_edges E(e) · ∏_vertices e(T_p)^{val−1} · Twist(v) · Ψ(v)
//! ```
//!
//! where E(e) = e(H¹)/e(H⁰) of f^*T over the edge with the zero weight of the
//! infinitesimal reparametrization dropped, the twist uses λ + L|_p as the
//! equivariant Euler class of each summand, and Ψ(v) is the ψ-integral over
//! the contracted component with flag weights ω_F = w_F/d_e. Unstable
//! vertices use: ω_F for an unmarked leaf, (−ω_F)^k for a leaf carrying one
//! marking with ψ^k, and 1/(ω₁ + ω₂) for an unmarked vertex joining two edges.
//!
//! Torus weights are replaced by random integers while λ stays symbolic. For
//! insertions of pure degree the non-equivariant answer is c·λ^D with D fixed
//! by dimension counting; c is read off the expansion at λ = ∞ and checked
//! across independent weight draws.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, int, LambdaProduct, LaurentPoly, MultiPoly, Rational, RationalFunction, Symbol};
use crate::cohomology::DescendantInsertion;
use crate::error::{Error, Result};
use crate::graphs::{skeletons, Skeleton};
use crate::psi::vertex_integral;
use crate::target::{CurveClass, LineBundle, TargetModel};

/// Bumped whenever a change could alter computed values.
pub const ENGINE_VERSION: &str = "1";

/// How a twisting summand enters the integrand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwistKind {
    /// 1/e(E), the convention of the twisted invariants.
    Inverse,
    /// e(E), i.e. the inverse convention applied to −E.
    Euler,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistSummand {
    pub bundle: LineBundle,
    pub kind: TwistKind,
}

/// Direct sum of equivariant line bundles, each scaled by λ.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistSpec {
    pub summands: Vec<TwistSummand>,
}

impl TwistSpec {
    pub fn inverse(bundles: impl IntoIterator<Item = LineBundle>) -> Self {
        TwistSpec {
            summands: bundles.into_iter().map(|bundle| TwistSummand { bundle, kind: TwistKind::Inverse }).collect(),
        }
    }

    pub fn euler(bundles: impl IntoIterator<Item = LineBundle>) -> Self {
        TwistSpec {
            summands: bundles.into_iter().map(|bundle| TwistSummand { bundle, kind: TwistKind::Euler }).collect(),
        }
    }

    /// λ-degree shift caused by the twist on a class: Σ ±(L·β + 1).
    pub fn lambda_shift(&self, class: &CurveClass) -> i64 {
        self.summands
            .iter()
            .map(|s| {
                let rk = s.bundle.degree(class) + 1;
                match s.kind {
                    TwistKind::Inverse => -rk,
                    TwistKind::Euler => rk,
                }
            })
            .sum()
    }
}

/// Rational values for the torus weight symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Specialization {
    pub seed: u64,
    pub values: BTreeMap<Symbol, Rational>,
}

impl Specialization {
    const RANGE: i64 = 1 << 20;

    pub fn draw(model: &TargetModel, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values = BTreeMap::new();
        for s in model.symbols() {
            let mut v = 0i64;
            while v == 0 {
                v = rng.random_range(-Self::RANGE..=Self::RANGE);
            }
            values.insert(s, int(v));
        }
        Specialization { seed, values }
    }

    pub fn eval(&self, p: &MultiPoly) -> Rational {
        p.substitute(&self.values).as_constant().expect("every weight symbol is assigned")
    }
}

/// Engine tuning.
#[derive(Clone, Debug)]
pub struct EngineOptions {
    /// One weight draw per seed; all must agree.
    pub seeds: Vec<u64>,
    /// Re-draws allowed per seed when a draw hits a vanishing weight.
    pub max_redraws: u32,
    /// Weights held fixed across all draws.
    pub pinned: BTreeMap<Symbol, Rational>,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { seeds: vec![0x5eed_0001, 0x5eed_0002], max_redraws: 8, pinned: BTreeMap::new() }
    }
}

/// Outcome of an invariant computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantResult {
    pub value: LaurentPoly,
    pub class: CurveClass,
    pub markings: usize,
    /// Seeds of the weight draws that were actually used.
    pub seeds: Vec<u64>,
    /// Number of unmarked fixed-locus skeletons summed over.
    pub skeletons: usize,
    /// Number of distinct pure insertion tuples evaluated.
    pub tuples: usize,
    pub millis: u128,
}

/// λ⁰ coefficient of a result without negative powers of λ.
pub fn nonequivariant_limit(res: &InvariantResult) -> Result<Rational> {
    match res.value.min_exponent() {
        Some(k) if k < 0 => Err(Error::NoNonequivariantLimit),
        _ => Ok(res.value.coefficient(0)),
    }
}

/// A monomial insertion ψ^k H^a h^b.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PureInsertion {
    pub psi: u32,
    pub a: u32,
    pub b: u32,
}

impl PureInsertion {
    pub fn degree(&self) -> i64 {
        (self.psi + self.a + self.b) as i64
    }
}

/// Per-draw data of a target: restrictions and tangent weights as rationals.
struct Weights {
    x: Vec<Rational>,
    h: Vec<Rational>,
    tangent_euler: Vec<Rational>,
    line_weight: Vec<Rational>,
    splitting: Vec<Vec<(i64, Rational)>>,
    /// bundle weight per twist summand and fixed point
    twist: Vec<Vec<Rational>>,
}

impl Weights {
    fn new(model: &TargetModel, twist: &TwistSpec, s: &Specialization) -> Result<Self> {
        let n = model.fixed_points().len();
        let mut x = Vec::with_capacity(n);
        let mut h = Vec::with_capacity(n);
        let mut tangent_euler = Vec::with_capacity(n);
        for p in 0..n {
            x.push(s.eval(&model.restrict_monomial(1, 0, p)));
            h.push(s.eval(&model.restrict_monomial(0, 1, p)));
            let mut e = Rational::one();
            for (_, w) in model.tangent_weights(p) {
                let v = s.eval(w);
                if v.is_zero() {
                    return Err(Error::DegenerateSpecialization);
                }
                e *= v;
            }
            tangent_euler.push(e);
        }
        let line_weight = model.lines().iter().map(|l| s.eval(&l.weight)).collect();
        let splitting =
            model.lines().iter().map(|l| l.tangent_splitting.iter().map(|(b, u)| (*b, s.eval(u))).collect()).collect();
        let twist = twist
            .summands
            .iter()
            .map(|t| (0..n).map(|p| s.eval(&model.bundle_weight(&t.bundle, p))).collect())
            .collect();
        Ok(Weights { x, h, tangent_euler, line_weight, splitting, twist })
    }

    fn restrict(&self, ins: &PureInsertion, p: usize) -> Rational {
        num_traits::pow(self.x[p].clone(), ins.a as usize) * num_traits::pow(self.h[p].clone(), ins.b as usize)
    }
}

/// Edge contribution as scalar · ∏(λ + c)^e: the deformation part of f^*T and
/// the twist part.
pub fn edge_factor(
    model: &TargetModel,
    line: usize,
    degree: u32,
    twist: &TwistSpec,
    spec: &Specialization,
) -> Result<LambdaProduct> {
    let w = Weights::new(model, twist, spec)?;
    edge_factor_with(model, &w, line, degree, twist)
}

fn edge_factor_with(
    model: &TargetModel,
    w: &Weights,
    line: usize,
    degree: u32,
    twist: &TwistSpec,
) -> Result<LambdaProduct> {
    let d = degree as i64;
    let wl = &w.line_weight[line];
    let step = wl / int(d);
    let mut out = LambdaProduct::one();
    let mut num = Rational::one();
    let mut den = Rational::one();
    for (idx, (b, u)) in w.splitting[line].iter().enumerate() {
        let db = d * b;
        if db >= 0 {
            for j in 0..=db {
                if idx == 0 && j == d {
                    // reparametrizations of the cover
                    continue;
                }
                let v = u - &step * int(j);
                if v.is_zero() {
                    return Err(Error::DegenerateSpecialization);
                }
                den *= v;
            }
        } else {
            for j in 1..(-db) {
                num *= u + &step * int(j);
            }
        }
    }
    out.scale(&(num / den));
    let p = model.lines()[line].p;
    let class = model.lines()[line].class;
    for (s, t) in twist.summands.iter().enumerate() {
        let c = t.bundle.degree(&class) * d;
        let lp = &w.twist[s][p];
        let sign = match t.kind {
            TwistKind::Inverse => 1,
            TwistKind::Euler => -1,
        };
        if c >= 0 {
            for j in 0..=c {
                out.mul_linear(lp - &step * int(j), -sign);
            }
        } else {
            for j in 1..(-c) {
                out.mul_linear(lp + &step * int(j), sign);
            }
        }
    }
    Ok(out)
}

/// λ-dependent and tangent parts of a vertex: e(T_p)^{val−1} and the twist
/// node corrections (λ + L|_p)^{±(val−1)}.
fn vertex_base_factor(w: &Weights, twist: &TwistSpec, p: usize, val: i32) -> LambdaProduct {
    let mut out = LambdaProduct::constant(w.tangent_euler[p].pow(val - 1));
    for (s, t) in twist.summands.iter().enumerate() {
        let e = match t.kind {
            TwistKind::Inverse => val - 1,
            TwistKind::Euler => 1 - val,
        };
        out.mul_linear(w.twist[s][p].clone(), e);
    }
    out
}

/// ψ and restriction part of a vertex with the given markings.
fn vertex_marking_factor(w: &Weights, p: usize, flags: &[Rational], marks: &[PureInsertion]) -> Result<Rational> {
    let mut restrict = Rational::one();
    for m in marks {
        restrict *= w.restrict(m, p);
    }
    if restrict.is_zero() {
        return Ok(restrict);
    }
    let val = flags.len();
    let ks: Vec<u32> = marks.iter().map(|m| m.psi).collect();
    let psi_part = match (val, marks.len()) {
        (1, 0) => flags[0].clone(),
        (1, 1) => (-flags[0].clone()).pow(ks[0] as i32),
        (2, 0) => {
            let s = &flags[0] + &flags[1];
            if s.is_zero() {
                return Err(Error::DegenerateSpecialization);
            }
            s.recip()
        }
        _ => vertex_integral(flags, &ks).map_err(|e| match e {
            Error::VanishingFlagWeight => Error::DegenerateSpecialization,
            other => other,
        })?,
    };
    Ok(restrict * psi_part)
}

/// Full vertex contribution for a vertex at `p` with the given flag weights
/// and marking insertions.
pub fn vertex_factor(
    model: &TargetModel,
    p: usize,
    flags: &[Rational],
    marks: &[PureInsertion],
    twist: &TwistSpec,
    spec: &Specialization,
) -> Result<LambdaProduct> {
    let w = Weights::new(model, twist, spec)?;
    let mut out = vertex_base_factor(&w, twist, p, flags.len() as i32);
    out.scale(&vertex_marking_factor(&w, p, flags, marks)?);
    Ok(out)
}

struct PreparedSkeleton {
    /// Marking-independent part, including 1/(|Aut| ∏ d_e).
    base: LambdaProduct,
    /// (fixed point, flag weights) per vertex.
    vertices: Vec<(usize, Vec<Rational>)>,
}

fn prepare(model: &TargetModel, w: &Weights, sk: &Skeleton, twist: &TwistSpec) -> Result<PreparedSkeleton> {
    let inc = sk.incidence();
    let mut base = LambdaProduct::constant(Rational::new(
        num_bigint::BigInt::one(),
        num_bigint::BigInt::from(sk.automorphisms * sk.degree_product()),
    ));
    for e in &sk.edges {
        base = base.mul(&edge_factor_with(model, w, e.line, e.degree, twist)?);
    }
    let mut vertices = Vec::with_capacity(sk.num_vertices());
    for (v, &p) in sk.labels.iter().enumerate() {
        let flags: Vec<Rational> = inc[v]
            .iter()
            .map(|&ei| {
                let e = &sk.edges[ei];
                let line = &model.lines()[e.line];
                let wl = &w.line_weight[e.line];
                let wp = if line.p == p { wl.clone() } else { -wl.clone() };
                wp / int(e.degree as i64)
            })
            .collect();
        base = base.mul(&vertex_base_factor(w, twist, p, flags.len() as i32));
        vertices.push((p, flags));
    }
    Ok(PreparedSkeleton { base, vertices })
}

/// Σ over all maps markings → vertices of ∏_v (marking part of v), grouped by
/// insertion type. `types[t]` occurs `counts[t]` times.
fn marking_sum(w: &Weights, prep: &PreparedSkeleton, types: &[PureInsertion], counts: &[u32]) -> Result<Rational> {
    let mut states: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    states.insert(counts.to_vec(), Rational::one());
    for (p, flags) in &prep.vertices {
        let mut memo: HashMap<Vec<u32>, Rational> = HashMap::new();
        let mut next: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (rem, acc) in &states {
            let mut take = vec![0u32; rem.len()];
            loop {
                let f = match memo.get(&take) {
                    Some(f) => f.clone(),
                    None => {
                        let marks: Vec<PureInsertion> =
                            take.iter().zip(types).flat_map(|(&c, t)| std::iter::repeat_n(*t, c as usize)).collect();
                        let f = if flags.is_empty() && marks.len() < 3 {
                            Rational::zero()
                        } else {
                            vertex_marking_factor(w, *p, flags, &marks)?
                        };
                        memo.insert(take.clone(), f.clone());
                        f
                    }
                };
                if !f.is_zero() {
                    let mut mult = Rational::one();
                    for (r, t) in rem.iter().zip(&take) {
                        mult *= Rational::from_integer(binomial(*r, *t));
                    }
                    let left: Vec<u32> = rem.iter().zip(&take).map(|(r, t)| r - t).collect();
                    let e = next.entry(left).or_insert_with(Rational::zero);
                    *e += acc * f * mult;
                }
                // next sub-vector of rem
                let mut i = 0;
                while i < take.len() {
                    if take[i] < rem[i] {
                        take[i] += 1;
                        break;
                    }
                    take[i] = 0;
                    i += 1;
                }
                if i == take.len() {
                    break;
                }
            }
        }
        states = next;
    }
    Ok(states.get(&vec![0u32; counts.len()]).cloned().unwrap_or_else(Rational::zero))
}

/// The λ^D coefficient of one pure tuple under one draw.
struct Evaluator {
    weights: Weights,
    prepared: Vec<PreparedSkeleton>,
    expansions: Vec<BTreeMap<i32, Rational>>,
}

impl Evaluator {
    fn new(
        model: &TargetModel,
        sks: &[Skeleton],
        twist: &TwistSpec,
        spec: &Specialization,
        lowest: i32,
    ) -> Result<Self> {
        let weights = Weights::new(model, twist, spec)?;
        let prepared: Vec<PreparedSkeleton> =
            sks.par_iter().map(|sk| prepare(model, &weights, sk, twist)).collect::<Result<_>>()?;
        let expansions = prepared.par_iter().map(|p| p.base.expand_at_infinity(lowest)).collect();
        Ok(Evaluator { weights, prepared, expansions })
    }

    fn coefficient(&self, tuple: &[PureInsertion], d: i32) -> Result<Rational> {
        let mut types: Vec<PureInsertion> = tuple.to_vec();
        types.sort();
        types.dedup();
        let counts: Vec<u32> = types.iter().map(|t| tuple.iter().filter(|x| *x == t).count() as u32).collect();
        let parts: Vec<Rational> =
            self.prepared.par_iter().map(|p| marking_sum(&self.weights, p, &types, &counts)).collect::<Result<_>>()?;
        let mut total: BTreeMap<i32, Rational> = BTreeMap::new();
        for (r, exp) in parts.iter().zip(&self.expansions) {
            if r.is_zero() {
                continue;
            }
            for (&k, c) in exp.range(d..) {
                let e = total.entry(k).or_insert_with(Rational::zero);
                *e += r * c;
            }
        }
        for (&k, c) in total.range(d + 1..) {
            if !c.is_zero() {
                return Err(Error::WeightDependence(format!(
                    "nonzero coefficient {c} of λ^{k} above the expected power λ^{d}"
                )));
            }
        }
        Ok(total.get(&d).cloned().unwrap_or_else(Rational::zero))
    }
}

/// A single-draw evaluation: coefficient c for each pure tuple.
fn evaluate_draw(
    model: &TargetModel,
    sks: &[Skeleton],
    twist: &TwistSpec,
    seed: u64,
    opts: &EngineOptions,
    tuples: &[(Vec<PureInsertion>, i32)],
) -> Result<(u64, Vec<Rational>)> {
    let lowest = tuples.iter().map(|t| t.1).min().unwrap_or(0);
    let mut attempt = 0;
    loop {
        let s = seed.wrapping_add(attempt as u64 * 0x9e37_79b9);
        let mut spec = Specialization::draw(model, s);
        for (sym, v) in &opts.pinned {
            if let Some(slot) = spec.values.get_mut(sym) {
                *slot = v.clone();
            }
        }
        let res = Evaluator::new(model, sks, twist, &spec, lowest)
            .and_then(|ev| tuples.iter().map(|(t, d)| ev.coefficient(t, *d)).collect::<Result<Vec<_>>>());
        match res {
            Err(Error::DegenerateSpecialization) if attempt < opts.max_redraws => attempt += 1,
            Ok(v) => return Ok((s, v)),
            Err(e) => return Err(e),
        }
    }
}

/// Genus-0 invariant ⟨insertions⟩_{0,n,class} of the target, twisted if a
/// twist is given. Insertions may have λ-dependent coefficients.
pub fn compute_invariant(
    model: &TargetModel,
    class: &CurveClass,
    insertions: &[DescendantInsertion],
    twist: Option<&TwistSpec>,
) -> Result<InvariantResult> {
    compute_invariant_with(model, class, insertions, twist, &EngineOptions::default())
}

pub fn compute_invariant_with(
    model: &TargetModel,
    class: &CurveClass,
    insertions: &[DescendantInsertion],
    twist: Option<&TwistSpec>,
    opts: &EngineOptions,
) -> Result<InvariantResult> {
    let start = Instant::now();
    let n = insertions.len();
    if class.is_zero() && n < 3 {
        return Err(Error::UnstableModuli);
    }
    if opts.seeds.is_empty() {
        return Err(Error::InvalidInput("at least one weight seed is required".into()));
    }
    let ring = model.ring();
    let empty = TwistSpec::default();
    let twist = twist.unwrap_or(&empty);
    for t in &twist.summands {
        if t.bundle.taut_power != 0 && !model.is_bundle() {
            return Err(Error::InvalidInput("O(-1) twist needs a projective bundle target".into()));
        }
    }

    // Split every insertion into λ-coefficients times pure monomials.
    let mut slots: Vec<Vec<(PureInsertion, RationalFunction)>> = Vec::with_capacity(n);
    for ins in insertions {
        if ins.ring() != &ring {
            return Err(Error::InvalidInput("insertion lives in a different ring".into()));
        }
        let mut terms = Vec::new();
        for (psi, a, b, c) in ins.flat_terms() {
            if c.symbols().iter().any(|&s| s != Symbol::Lambda) {
                return Err(Error::InvalidInput("insertion coefficients may only involve λ".into()));
            }
            terms.push((PureInsertion { psi, a, b }, c));
        }
        slots.push(terms);
    }

    let vdim = model.virtual_dim(class, n);
    let shift = twist.lambda_shift(class);
    let sks = skeletons(model, class)?;

    // Distinct pure tuples up to permutation.
    let mut tuple_index: BTreeMap<Vec<PureInsertion>, usize> = BTreeMap::new();
    let mut tuples: Vec<(Vec<PureInsertion>, i32)> = Vec::new();
    let mut combos: Vec<(usize, RationalFunction)> = Vec::new();
    if slots.iter().all(|s| !s.is_empty()) {
        let mut idx = vec![0usize; n];
        loop {
            let mut key: Vec<PureInsertion> = (0..n).map(|i| slots[i][idx[i]].0).collect();
            let coeff = (0..n).fold(RationalFunction::one(), |acc, i| &acc * &slots[i][idx[i]].1);
            key.sort();
            let deg: i64 = key.iter().map(|p| p.degree()).sum();
            let d = deg - vdim + shift;
            let t = *tuple_index.entry(key.clone()).or_insert_with(|| {
                tuples.push((key, d as i32));
                tuples.len() - 1
            });
            combos.push((t, coeff));
            let mut i = 0;
            while i < n {
                idx[i] += 1;
                if idx[i] < slots[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }

    let mut used_seeds = Vec::new();
    let mut reference: Option<Vec<Rational>> = None;
    for &seed in &opts.seeds {
        let (s, coeffs) = evaluate_draw(model, &sks, twist, seed, opts, &tuples)?;
        used_seeds.push(s);
        match &reference {
            None => reference = Some(coeffs),
            Some(r) => {
                if let Some(i) = (0..r.len()).find(|&i| r[i] != coeffs[i]) {
                    return Err(Error::WeightDependence(format!("tuple {:?}: {} vs {}", tuples[i].0, r[i], coeffs[i])));
                }
            }
        }
    }
    let coeffs = reference.unwrap_or_default();

    let mut total = RationalFunction::zero();
    for (t, rcoeff) in &combos {
        let c = &coeffs[*t];
        if c.is_zero() {
            continue;
        }
        let d = tuples[*t].1;
        let lam = RationalFunction::lambda().powi(d)?;
        total = &total + &(&(rcoeff * &lam) * &RationalFunction::constant(c.clone()));
    }
    let value = total.to_laurent()?;
    Ok(InvariantResult {
        value,
        class: *class,
        markings: n,
        seeds: used_seeds,
        skeletons: sks.len(),
        tuples: tuples.len(),
        millis: start.elapsed().as_millis(),
    })
}

/// Convenience: a monomial insertion ψ^k H^a h^b with coefficient 1.
pub fn pure(model: &TargetModel, psi: u32, a: u32, b: u32) -> DescendantInsertion {
    use crate::cohomology::CohClass;
    DescendantInsertion::descendant(psi, CohClass::monomial(&model.ring(), a, b, RationalFunction::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn point_ins(m: &TargetModel, codim: u32) -> DescendantInsertion {
        pure(m, 0, codim, 0)
    }

    #[test]
    fn p1_degree_one_unmarked() {
        let m = TargetModel::projective_space(1);
        let r = compute_invariant(&m, &CurveClass::new(1, 0), &[], None).unwrap();
        assert_eq!(r.value, LaurentPoly::constant(int(1)));
    }

    #[test]
    fn p1_two_points() {
        let m = TargetModel::projective_space(1);
        let ins = vec![point_ins(&m, 1), point_ins(&m, 1)];
        let r = compute_invariant(&m, &CurveClass::new(1, 0), &ins, None).unwrap();
        assert_eq!(r.value, LaurentPoly::constant(int(1)));
    }

    #[test]
    fn p1_descendant_and_divisor() {
        let m = TargetModel::projective_space(1);
        let r = compute_invariant(&m, &CurveClass::new(1, 0), &[pure(&m, 1, 0, 0)], None).unwrap();
        assert_eq!(r.value, LaurentPoly::constant(int(-2)));
        let r = compute_invariant(&m, &CurveClass::new(1, 0), &[pure(&m, 0, 1, 0)], None).unwrap();
        assert_eq!(r.value, LaurentPoly::constant(int(1)));
    }

    #[test]
    fn p2_lines_through_two_points() {
        let m = TargetModel::projective_space(2);
        let ins = vec![point_ins(&m, 2), point_ins(&m, 2)];
        let r = compute_invariant(&m, &CurveClass::new(1, 0), &ins, None).unwrap();
        assert_eq!(r.value, LaurentPoly::constant(int(1)));
    }

    #[test]
    fn point_with_trivial_rank_two_twist() {
        let m = TargetModel::point();
        let ins = vec![point_ins(&m, 0); 3];
        let t = TwistSpec::inverse([LineBundle::pullback(0), LineBundle::pullback(0)]);
        let r = compute_invariant(&m, &CurveClass::default(), &ins, Some(&t)).unwrap();
        assert_eq!(r.value, LaurentPoly::monomial(-2, int(1)));
    }

    #[test]
    fn p1_tautological_twist_in_degree_zero() {
        // P(C²) over a point is P¹; ∫_{P¹} 1/(λ − h) = 1/λ².
        let m = TargetModel::proj_bundle(0, &[0, 0]).unwrap();
        let ins = vec![pure(&m, 0, 0, 0); 3];
        let t = TwistSpec::inverse([LineBundle::tautological()]);
        let r = compute_invariant(&m, &CurveClass::default(), &ins, Some(&t)).unwrap();
        assert_eq!(r.value, LaurentPoly::monomial(-2, int(1)));
    }

    #[test]
    fn local_p1_degree_one_and_two() {
        let m = TargetModel::projective_space(1);
        let t = TwistSpec::inverse([LineBundle::pullback(-1), LineBundle::pullback(-1)]);
        for (d, v) in [(1, int(1)), (2, rat(1, 8))] {
            let r = compute_invariant(&m, &CurveClass::new(d, 0), &[], Some(&t)).unwrap();
            assert_eq!(r.value, LaurentPoly::constant(v));
        }
    }

    #[test]
    fn limit_requires_no_negative_powers() {
        let mk = |v: LaurentPoly| InvariantResult {
            value: v,
            class: CurveClass::default(),
            markings: 0,
            seeds: vec![],
            skeletons: 0,
            tuples: 0,
            millis: 0,
        };
        assert_eq!(nonequivariant_limit(&mk(LaurentPoly::constant(int(12)))).unwrap(), int(12));
        assert_eq!(nonequivariant_limit(&mk(LaurentPoly::monomial(-2, int(1)))), Err(Error::NoNonequivariantLimit));
    }

    #[test]
    fn degree_one_edge_factor_on_p1() {
        let m = TargetModel::projective_space(1);
        let s = Specialization::draw(&m, 7);
        let w = s.eval(&m.lines()[0].weight);
        let f = edge_factor(&m, 0, 1, &TwistSpec::default(), &s).unwrap();
        assert_eq!(f.scalar(), &(-(w.clone() * w)).recip());
        assert_eq!(f.top_degree(), 0);
    }

    #[test]
    fn trivial_twist_summand_on_an_edge() {
        // Degree 0 on the edge: one section of constant weight.
        let m = TargetModel::projective_space(1);
        let s = Specialization::draw(&m, 11);
        let t = TwistSpec::inverse([LineBundle::pullback(0)]);
        let f = edge_factor(&m, 0, 1, &t, &s).unwrap();
        let factors: Vec<(Rational, i32)> = f.factors().map(|(c, e)| (c.clone(), e)).collect();
        assert_eq!(factors, vec![(int(0), -1)]);
    }
}
