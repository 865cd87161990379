//! Exact checks of the projective-bundle identities: each compares an
//! O(−1)-twisted invariant of P(V) with a V-twisted invariant of the base.

use serde::{Deserialize, Serialize};

use crate::arith::{LaurentPoly, Rational};
use crate::cohomology::{det_relative_tangent, expand_insertion, DescendantInsertion, Expr, Ring};
use crate::engine::{compute_invariant_with, pure, EngineOptions, InvariantResult, TwistSpec};
use crate::error::{Error, Result};
use crate::target::{CurveClass, LineBundle, TargetModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityId {
    Rel1,
    CorMain,
    Rel2,
    Rel3,
    Rel4,
    PnFibrationDemo,
}

impl IdentityId {
    pub const ALL: [IdentityId; 6] = [
        IdentityId::Rel1,
        IdentityId::CorMain,
        IdentityId::Rel2,
        IdentityId::Rel3,
        IdentityId::Rel4,
        IdentityId::PnFibrationDemo,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            IdentityId::Rel1 => "rel1",
            IdentityId::CorMain => "cor_main",
            IdentityId::Rel2 => "rel2",
            IdentityId::Rel3 => "rel3",
            IdentityId::Rel4 => "rel4",
            IdentityId::PnFibrationDemo => "pn_fibration_demo",
        }
    }

    pub fn parse(s: &str) -> Option<IdentityId> {
        IdentityId::ALL.into_iter().find(|i| i.name() == s)
    }
}

/// How c_V(t) is read in the k-fold fiber-cover identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChernReading {
    /// Σ cᵢ(V) t^{r−i}.
    #[default]
    ChernPolynomial,
    /// Σ cᵢ(Q) t^{r−1−i} for Q = π^*V/O(−1).
    QuotientBundle,
}

impl ChernReading {
    pub const ALL: [ChernReading; 2] = [ChernReading::ChernPolynomial, ChernReading::QuotientBundle];

    pub fn name(&self) -> &'static str {
        match self {
            ChernReading::ChernPolynomial => "chern_polynomial",
            ChernReading::QuotientBundle => "quotient_bundle",
        }
    }
}

/// One instance of an identity over X = P^m (a point when m = 0) and
/// V = ⊕ O(aₖ).
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCase {
    pub identity: IdentityId,
    pub base_dim: u32,
    pub twists: Vec<i64>,
    /// Degree of the base class β.
    pub degree: i64,
    /// Classes σᵢ on the base, written in H.
    pub sigmas: Vec<Expr>,
    /// Classes αⱼ of the distinguished insertions.
    pub alphas: Vec<Expr>,
    /// Power of h in the distinguished insertions.
    pub e: u32,
    /// Number of fiber lines (or the cover degree for rel4).
    pub k: u32,
    pub reading: ChernReading,
}

impl IdentityCase {
    pub fn new(identity: IdentityId, base_dim: u32, twists: Vec<i64>, degree: i64) -> Result<Self> {
        if twists.is_empty() {
            return Err(Error::InvalidInput("V needs rank at least one".into()));
        }
        if twists.iter().any(|&a| a < 0) {
            return Err(Error::NotGloballyGenerated(twists));
        }
        if degree < 0 || (base_dim == 0 && degree != 0) {
            return Err(Error::InvalidInput(format!("no effective base class of degree {degree}")));
        }
        Ok(IdentityCase {
            identity,
            base_dim,
            twists,
            degree,
            sigmas: Vec::new(),
            alphas: Vec::new(),
            e: 0,
            k: 1,
            reading: ChernReading::default(),
        })
    }

    pub fn with_sigmas(mut self, sigmas: Vec<Expr>) -> Self {
        self.sigmas = sigmas;
        self
    }

    pub fn with_alphas(mut self, alphas: Vec<Expr>) -> Self {
        self.alphas = alphas;
        self
    }

    pub fn with_e(mut self, e: u32) -> Self {
        self.e = e;
        self
    }

    pub fn with_k(mut self, k: u32) -> Self {
        self.k = k;
        self
    }

    pub fn with_reading(mut self, reading: ChernReading) -> Self {
        self.reading = reading;
        self
    }

    pub fn rank(&self) -> u32 {
        self.twists.len() as u32
    }

    pub fn base_model(&self) -> TargetModel {
        if self.base_dim == 0 {
            TargetModel::point()
        } else {
            TargetModel::projective_space(self.base_dim)
        }
    }

    pub fn bundle_model(&self) -> Result<TargetModel> {
        TargetModel::proj_bundle(self.base_dim, &self.twists)
    }

    /// ⊕ O(aₖ) on the base.
    pub fn base_twist(&self) -> TwistSpec {
        TwistSpec::inverse(self.twists.iter().map(|&a| LineBundle::pullback(a)))
    }

    /// O(−1) on P(V).
    pub fn bundle_twist(&self) -> TwistSpec {
        TwistSpec::inverse([LineBundle::tautological()])
    }

    pub fn label(&self) -> String {
        let sig: Vec<String> = self.sigmas.iter().map(expr_string).collect();
        let alp: Vec<String> = self.alphas.iter().map(expr_string).collect();
        format!(
            "{} X=P^{} a={:?} d={} sigmas=[{}] alphas=[{}] e={} k={}",
            self.identity.name(),
            self.base_dim,
            self.twists,
            self.degree,
            sig.join(", "),
            alp.join(", "),
            self.e,
            self.k
        )
    }
}

/// A single side-by-side comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub label: String,
    pub lhs: LaurentPoly,
    pub rhs: LaurentPoly,
}

impl Comparison {
    pub fn agrees(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn diff(&self) -> LaurentPoly {
        &self.lhs - &self.rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub identity: IdentityId,
    pub label: String,
    pub comparisons: Vec<Comparison>,
    pub pass: bool,
    pub reading: Option<ChernReading>,
    pub note: Option<String>,
    pub seeds: Vec<u64>,
}

impl VerificationReport {
    fn new(identity: IdentityId, label: String, comparisons: Vec<Comparison>, seeds: Vec<u64>) -> Self {
        let pass = comparisons.iter().all(Comparison::agrees);
        VerificationReport { identity, label, comparisons, pass, reading: None, note: None, seeds }
    }

    pub fn lhs(&self) -> &LaurentPoly {
        &self.comparisons[0].lhs
    }

    pub fn rhs(&self) -> &LaurentPoly {
        &self.comparisons[0].rhs
    }

    pub fn diff(&self) -> LaurentPoly {
        self.comparisons[0].diff()
    }
}

fn expr_string(e: &Expr) -> String {
    match e {
        Expr::Num(r) => r.to_string(),
        Expr::BaseHyperplane => "H".into(),
        Expr::Tautological => "h".into(),
        Expr::Psi => "psi".into(),
        Expr::Lambda => "lambda".into(),
        Expr::Neg(a) => format!("-({})", expr_string(a)),
        Expr::Add(a, b) => format!("({} + {})", expr_string(a), expr_string(b)),
        Expr::Sub(a, b) => format!("({} - {})", expr_string(a), expr_string(b)),
        Expr::Mul(a, b) => format!("{}*{}", expr_string(a), expr_string(b)),
        Expr::Div(a, b) => format!("{}/{}", expr_string(a), expr_string(b)),
        Expr::Pow(a, k) => format!("{}^{}", expr_string(a), k),
    }
}

fn mentions(e: &Expr, pred: &dyn Fn(&Expr) -> bool) -> bool {
    if pred(e) {
        return true;
    }
    match e {
        Expr::Neg(a) | Expr::Pow(a, _) => mentions(a, pred),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => mentions(a, pred) || mentions(b, pred),
        _ => false,
    }
}

/// Base classes may only involve H, λ and numbers.
fn check_base_expr(e: &Expr) -> Result<()> {
    if mentions(e, &|x| matches!(x, Expr::Psi | Expr::Tautological)) {
        return Err(Error::InvalidInput(format!("{} is not a class pulled back from the base", expr_string(e))));
    }
    Ok(())
}

fn vdim_bound(model: &TargetModel, class: &CurveClass, n: usize) -> u32 {
    model.virtual_dim(class, n).max(0) as u32
}

fn expand_all(exprs: &[Expr], ring: &Ring, bound: u32) -> Result<Vec<DescendantInsertion>> {
    exprs.iter().map(|e| expand_insertion(e, ring, bound)).collect()
}

fn run(
    model: &TargetModel,
    class: &CurveClass,
    ins: &[DescendantInsertion],
    twist: Option<&TwistSpec>,
    opts: &EngineOptions,
    seeds: &mut Vec<u64>,
) -> Result<InvariantResult> {
    let r = compute_invariant_with(model, class, ins, twist, opts)?;
    for s in &r.seeds {
        if !seeds.contains(s) {
            seeds.push(*s);
        }
    }
    Ok(r)
}

/// Run the check named by `case.identity`.
pub fn check(case: &IdentityCase, opts: &EngineOptions) -> Result<VerificationReport> {
    match case.identity {
        IdentityId::Rel1 => check_rel1(case, opts),
        IdentityId::CorMain => check_cor_main(case, opts),
        IdentityId::Rel2 => check_rel2(case, opts),
        IdentityId::Rel3 => check_rel3(case, opts),
        IdentityId::Rel4 => check_rel4(case, opts),
        IdentityId::PnFibrationDemo => check_pn_fibration_demo(opts),
    }
}

/// Both sides of the lift identity, before comparison.
fn rel1_sides(case: &IdentityCase, opts: &EngineOptions, seeds: &mut Vec<u64>) -> Result<(LaurentPoly, LaurentPoly)> {
    for s in &case.sigmas {
        check_base_expr(s)?;
    }
    let n = case.sigmas.len();
    let big = case.bundle_model()?;
    let small = case.base_model();
    let lift = big.lift_class(case.degree)?;
    let beta = CurveClass::new(case.degree, 0);
    let bound = vdim_bound(&big, &lift, n);
    let lhs_ins = expand_all(&case.sigmas, &big.ring(), bound)?;
    let rhs_ins = expand_all(&case.sigmas, &small.ring(), bound)?;
    let lhs = run(&big, &lift, &lhs_ins, Some(&case.bundle_twist()), opts, seeds)?;
    let rhs = run(&small, &beta, &rhs_ins, Some(&case.base_twist()), opts, seeds)?;
    Ok((lhs.value, rhs.value))
}

pub fn check_rel1(case: &IdentityCase, opts: &EngineOptions) -> Result<VerificationReport> {
    let mut seeds = Vec::new();
    let (lhs, rhs) = rel1_sides(case, opts, &mut seeds)?;
    let cmp = Comparison { label: case.label(), lhs, rhs };
    Ok(VerificationReport::new(IdentityId::Rel1, case.label(), vec![cmp], seeds))
}

/// N = rank V + (β̃, c₁(T_π)).
pub fn cor_main_exponent(case: &IdentityCase) -> Result<i64> {
    let big = case.bundle_model()?;
    let spec = big.bundle_spec().expect("bundle target");
    let lift = big.lift_class(case.degree)?;
    let det = det_relative_tangent(&spec);
    let coeff = |a, b| -> Result<i64> {
        let c = det.coefficient(a, b).as_constant().ok_or_else(|| Error::Assembly("non-constant c1".into()))?;
        if !c.is_integer() {
            return Err(Error::Assembly("fractional c1".into()));
        }
        Ok(i64::try_from(c.to_integer()).expect("small integer"))
    };
    let pairing = coeff(1, 0)? * lift.d + coeff(0, 1)? * lift.e;
    Ok(case.rank() as i64 + pairing)
}

pub fn check_cor_main(case: &IdentityCase, opts: &EngineOptions) -> Result<VerificationReport> {
    let mut seeds = Vec::new();
    let n_exp = cor_main_exponent(case)?;
    let big = case.bundle_model()?;
    let small = case.base_model();
    let lift = big.lift_class(case.degree)?;
    let beta = CurveClass::new(case.degree, 0);
    for s in &case.sigmas {
        check_base_expr(s)?;
    }
    let n = case.sigmas.len();
    let bound = vdim_bound(&big, &lift, n);
    let lhs_ins = expand_all(&case.sigmas, &big.ring(), bound)?;
    let rhs_ins = expand_all(&case.sigmas, &small.ring(), bound)?;
    let twisted = run(&big, &lift, &lhs_ins, Some(&case.bundle_twist()), opts, &mut seeds)?;
    let plain = run(&small, &beta, &rhs_ins, None, opts, &mut seeds)?;
    let extracted = twisted.value.coefficient(-(n_exp as i32));
    let cmp = Comparison { label: case.label(), lhs: LaurentPoly::constant(extracted), rhs: plain.value };
    let mut rep = VerificationReport::new(IdentityId::CorMain, case.label(), vec![cmp], seeds);
    rep.note = Some(format!("N = {n_exp}"));
    Ok(rep)
}

fn lam() -> Expr {
    Expr::Lambda
}

fn h() -> Expr {
    Expr::Tautological
}

/// h^e α / ((h − λ)(λ − h − ψ)).
pub fn fiber_insertion(alpha: &Expr, e: u32) -> Expr {
    let num = Expr::mul(Expr::pow(h(), e as i64), alpha.clone());
    let den = Expr::mul(Expr::sub(h(), lam()), Expr::sub(Expr::sub(lam(), h()), Expr::Psi));
    Expr::div(num, den)
}

/// Shared driver for identities whose two sides differ by pushing the
/// distinguished insertions forward along π.
fn compare_pushforward(
    case: &IdentityCase,
    id: IdentityId,
    lhs_special: &[Expr],
    rhs_special: &[Expr],
    fiber_degree: i64,
    opts: &EngineOptions,
) -> Result<VerificationReport> {
    for s in case.sigmas.iter().chain(&case.alphas) {
        check_base_expr(s)?;
    }
    let big = case.bundle_model()?;
    let small = case.base_model();
    let lift = big.lift_class(case.degree)?;
    let class = CurveClass::new(lift.d, lift.e + fiber_degree);
    let beta = CurveClass::new(case.degree, 0);
    let n = lhs_special.len() + case.sigmas.len();
    if beta.is_zero() && n < 3 {
        return Err(Error::UnstableModuli);
    }
    let bound = vdim_bound(&big, &class, n).max(vdim_bound(&small, &beta, n));

    let mut lhs_ins = expand_all(lhs_special, &big.ring(), bound)?;
    lhs_ins.extend(expand_all(&case.sigmas, &big.ring(), bound)?);
    let mut rhs_ins = Vec::new();
    for e in rhs_special {
        rhs_ins.push(expand_insertion(e, &big.ring(), bound)?.pushforward()?);
    }
    rhs_ins.extend(expand_all(&case.sigmas, &small.ring(), bound)?);

    let mut seeds = Vec::new();
    let lhs = run(&big, &class, &lhs_ins, Some(&case.bundle_twist()), opts, &mut seeds)?;
    let rhs = run(&small, &beta, &rhs_ins, Some(&case.base_twist()), opts, &mut seeds)?;
    let cmp = Comparison { label: case.label(), lhs: lhs.value, rhs: rhs.value };
    Ok(VerificationReport::new(id, case.label(), vec![cmp], seeds))
}

fn single_alpha(case: &IdentityCase) -> Result<Expr> {
    match case.alphas.len() {
        0 => Ok(Expr::num(1)),
        1 => Ok(case.alphas[0].clone()),
        k => Err(Error::InvalidInput(format!("expected one distinguished class, got {k}"))),
    }
}

/// One fiber line attached to the base curve.
pub fn check_rel2(case: &IdentityCase, opts: &EngineOptions) -> Result<VerificationReport> {
    let ins = fiber_insertion(&single_alpha(case)?, case.e);
    compare_pushforward(case, IdentityId::Rel2, std::slice::from_ref(&ins), std::slice::from_ref(&ins), 1, opts)
}

/// k fiber lines, each carrying one distinguished marking.
pub fn check_rel3(case: &IdentityCase, opts: &EngineOptions) -> Result<VerificationReport> {
    let alphas: Vec<Expr> =
        if case.alphas.is_empty() { vec![Expr::num(1); case.k as usize] } else { case.alphas.clone() };
    if alphas.len() != case.k as usize || case.k == 0 {
        return Err(Error::InvalidInput(format!(
            "{} distinguished insertions for {} fiber lines; each line carries exactly one",
            alphas.len(),
            case.k
        )));
    }
    let ins: Vec<Expr> = alphas.iter().map(|a| fiber_insertion(a, case.e)).collect();
    compare_pushforward(case, IdentityId::Rel3, &ins, &ins, case.k as i64, opts)
}

/// c_V(t) in the chosen reading, as an expression.
pub fn chern_expr(case: &IdentityCase, reading: ChernReading, t: &Expr) -> Result<Expr> {
    let spec = case.bundle_model()?.bundle_spec().expect("bundle target");
    let r = spec.rank();
    let c = |i: u32| Expr::mul(Expr::num(spec.chern_number(i)), Expr::pow(Expr::BaseHyperplane, i as i64));
    let mut out = Expr::num(0);
    match reading {
        ChernReading::ChernPolynomial => {
            for i in 0..=r {
                out = Expr::add(out, Expr::mul(c(i), Expr::pow(t.clone(), (r - i) as i64)));
            }
        }
        ChernReading::QuotientBundle => {
            for i in 0..r {
                let mut ci = Expr::num(0);
                for j in 0..=i {
                    ci = Expr::add(ci, Expr::mul(c(j), Expr::pow(h(), (i - j) as i64)));
                }
                out = Expr::add(out, Expr::mul(ci, Expr::pow(t.clone(), (r - 1 - i) as i64)));
            }
        }
    }
    Ok(out)
}

/// The two distinguished insertions of the k-fold cover identity.
pub fn cover_insertions(case: &IdentityCase, reading: ChernReading) -> Result<(Expr, Expr)> {
    let k = case.k as i64;
    if k < 1 {
        return Err(Error::InvalidInput("cover degree must be positive".into()));
    }
    let alpha = single_alpha(case)?;
    let frac = |m: i64| Expr::Num(Rational::new(m.into(), k.into()));
    let lam_minus_h = Expr::sub(lam(), h());
    let h_minus_lam = Expr::sub(h(), lam());
    let num = Expr::mul(Expr::pow(h(), case.e as i64), alpha);
    let flag = Expr::sub(Expr::div(lam_minus_h.clone(), Expr::num(k)), Expr::Psi);
    let mut common = flag;
    for m in 1..=k {
        common = Expr::mul(common, Expr::mul(frac(m), h_minus_lam.clone()));
    }
    let mut lhs_den = common.clone();
    let mut rhs_den = common;
    for m in 1..k {
        lhs_den = Expr::mul(lhs_den, Expr::mul(frac(m), lam_minus_h.clone()));
        let t = Expr::add(h(), Expr::mul(frac(m), lam_minus_h.clone()));
        rhs_den = Expr::mul(rhs_den, chern_expr(case, reading, &t)?);
    }
    Ok((Expr::div(num.clone(), lhs_den), Expr::div(num, rhs_den)))
}

/// One k-fold fiber cover; c_V is read according to `case.reading`.
pub fn check_rel4(case: &IdentityCase, opts: &EngineOptions) -> Result<VerificationReport> {
    let (lhs, rhs) = cover_insertions(case, case.reading)?;
    let mut rep = compare_pushforward(case, IdentityId::Rel4, &[lhs], &[rhs], case.k as i64, opts)?;
    rep.reading = Some(case.reading);
    if !rep.pass {
        rep.note = Some(format!(
            "convention mismatch candidate: reading {} does not reproduce the identity",
            case.reading.name()
        ));
    }
    Ok(rep)
}

/// rel4 under every reading.
pub fn check_rel4_readings(case: &IdentityCase, opts: &EngineOptions) -> Result<Vec<VerificationReport>> {
    ChernReading::ALL.iter().map(|&r| check_rel4(&case.clone().with_reading(r), opts)).collect()
}

/// Classes (d, e) and insertion multisets of the F₀/F₂ comparison.
pub fn demo_cases() -> Vec<(CurveClass, Vec<(u32, u32)>)> {
    let basis = [(0u32, 0u32), (1, 0), (0, 1), (1, 1)];
    let c1 = |c: &CurveClass| 2 * c.e + 4 * c.d;
    let mut out = Vec::new();
    for d in 0..=2i64 {
        for e in -2 * d..=2 {
            let class = CurveClass::new(d, e);
            let mut mismatched = 0;
            for n in 0..=4usize {
                if class.is_zero() && n < 3 {
                    continue;
                }
                let vdim = 2 + c1(&class) + n as i64 - 3;
                for combo in multisets(basis.len(), n) {
                    let ins: Vec<(u32, u32)> = combo.iter().map(|&i| basis[i]).collect();
                    let deg: i64 = ins.iter().map(|(a, b)| (a + b) as i64).sum();
                    if deg == vdim {
                        out.push((class, ins));
                    } else if mismatched < 2 && n >= 2 && deg + 1 == vdim {
                        mismatched += 1;
                        out.push((class, ins));
                    }
                }
            }
        }
    }
    out
}

fn multisets(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            rec(k, n, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, n, 0, &mut Vec::new(), &mut out);
    out
}

/// Untwisted invariants of P(O(1)⊕O(1)) and P(O⊕O(2)) over P¹ under
/// H ↦ H, h ↦ h and the induced identification of curve classes.
pub fn check_pn_fibration_demo(opts: &EngineOptions) -> Result<VerificationReport> {
    let f0 = TargetModel::proj_bundle(1, &[1, 1])?;
    let f2 = TargetModel::proj_bundle(1, &[0, 2])?;
    let mut seeds = Vec::new();
    let mut comparisons = Vec::new();
    for (class, ins) in demo_cases() {
        let i0: Vec<DescendantInsertion> = ins.iter().map(|&(a, b)| pure(&f0, 0, a, b)).collect();
        let i2: Vec<DescendantInsertion> = ins.iter().map(|&(a, b)| pure(&f2, 0, a, b)).collect();
        let l = run(&f0, &class, &i0, None, opts, &mut seeds)?;
        let r = run(&f2, &class, &i2, None, opts, &mut seeds)?;
        let names: Vec<String> = ins
            .iter()
            .map(|&(a, b)| match (a, b) {
                (0, 0) => "1".to_string(),
                (1, 0) => "H".to_string(),
                (0, 1) => "h".to_string(),
                _ => "Hh".to_string(),
            })
            .collect();
        comparisons.push(Comparison {
            label: format!("({}, {}) <{}>", class.d, class.e, names.join(", ")),
            lhs: l.value,
            rhs: r.value,
        });
    }
    let n = comparisons.len();
    let mut rep = VerificationReport::new(
        IdentityId::PnFibrationDemo,
        "P(O(1)+O(1)) vs P(O+O(2)) over P^1".into(),
        comparisons,
        seeds,
    );
    rep.note = Some(format!("{n} comparisons"));
    Ok(rep)
}

/// Whether any reading reproduces the k = 1 case, where the cover identity
/// must coincide with the single-line one.
pub fn rel4_degenerate_consistent(case: &IdentityCase, opts: &EngineOptions) -> Result<bool> {
    let one = case.clone().with_k(1);
    let rel2 = check_rel2(&one.clone().with_alphas(one.alphas.clone()), opts)?;
    for reading in ChernReading::ALL {
        let r = check_rel4(&one.clone().with_reading(reading), opts)?;
        if r.pass && r.lhs() == rel2.lhs() && r.rhs() == rel2.rhs() {
            return Ok(true);
        }
    }
    Ok(false)
}
