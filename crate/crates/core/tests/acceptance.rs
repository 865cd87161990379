//! End-to-end acceptance run. Every computation goes through three weight
//! draws (the two defaults plus a third one used only here), so any weight
//! dependence surfaces as an engine error.

use std::cell::RefCell;
use std::io::Write;
use std::time::{Duration, Instant};

use gwloc_core::arith::{int, LaurentPoly, Rational};
use gwloc_core::cohomology::{DescendantInsertion, Expr};
use gwloc_core::engine::{compute_invariant_with, nonequivariant_limit, pure, EngineOptions, TwistSpec};
use gwloc_core::graphs::enumerate;
use gwloc_core::identities::{
    check_cor_main, check_pn_fibration_demo, check_rel1, check_rel2, check_rel3, check_rel4, check_rel4_readings,
    rel4_degenerate_consistent, ChernReading, IdentityCase, IdentityId, VerificationReport,
};
use gwloc_core::oracles::{aspinwall_morrison, lines_on_hypersurface, qh_pn_checks, wdvv_p2};
use gwloc_core::psi::{psi_integral, string_oracle};
use gwloc_core::target::{CurveClass, LineBundle, TargetModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const THIRD_SEED: u64 = 0x5eed_0003;

#[derive(Default)]
struct Tally {
    computations: usize,
    twisted: usize,
}

thread_local! {
    static TALLY: RefCell<Tally> = RefCell::new(Tally::default());
}

fn opts() -> EngineOptions {
    let mut o = EngineOptions::default();
    o.seeds.push(THIRD_SEED);
    o
}

fn invariant(
    model: &TargetModel,
    class: CurveClass,
    ins: &[DescendantInsertion],
    twist: Option<&TwistSpec>,
) -> Result<LaurentPoly, String> {
    let r = compute_invariant_with(model, &class, ins, twist, &opts()).map_err(|e| e.to_string())?;
    TALLY.with(|t| {
        let mut t = t.borrow_mut();
        t.computations += 1;
        t.twisted += twist.is_some() as usize;
    });
    Ok(r.value)
}

fn identity(rep: Result<VerificationReport, gwloc_core::error::Error>) -> Result<VerificationReport, String> {
    let rep = rep.map_err(|e| e.to_string())?;
    TALLY.with(|t| {
        let mut t = t.borrow_mut();
        t.computations += 2 * rep.comparisons.len();
        t.twisted += 2 * rep.comparisons.len();
    });
    Ok(rep)
}

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn expect_pass(rep: &VerificationReport) -> Result<(), String> {
    require(rep.pass, || format!("{}: lhs {:?} rhs {:?}", rep.label, rep.lhs(), rep.rhs()))
}

fn constant(v: &LaurentPoly) -> Result<Rational, String> {
    require(v.terms().all(|(k, _)| k == 0), || format!("λ-dependent result {v:?}"))?;
    Ok(v.coefficient(0))
}

fn criterion_1() -> Result<String, String> {
    let p2 = TargetModel::projective_space(2);
    let mut got = Vec::new();
    for d in 1..=4u32 {
        let ins = vec![pure(&p2, 0, 2, 0); (3 * d - 1) as usize];
        let v = constant(&invariant(&p2, CurveClass::new(d as i64, 0), &ins, None)?)?;
        let oracle = wdvv_p2(d);
        require(v == oracle, || format!("d = {d}: engine {v}, oracle {oracle}"))?;
        got.push(v.to_string());
    }
    require(got == ["1", "1", "12", "620"], || format!("{got:?}"))?;
    Ok(format!("N_d = {}", got.join(", ")))
}

fn criterion_2() -> Result<String, String> {
    for (label, oracle, expected) in qh_pn_checks() {
        require(oracle == expected, || format!("{label}: {oracle} != {expected}"))?;
    }
    let p3 = TargetModel::projective_space(3);
    let pts = invariant(&p3, CurveClass::new(1, 0), &[pure(&p3, 0, 3, 0), pure(&p3, 0, 3, 0)], None)?;
    let lines = invariant(&p3, CurveClass::new(1, 0), &vec![pure(&p3, 0, 2, 0); 4], None)?;
    require(constant(&pts)? == int(1), || format!("<H^3,H^3>_1 = {pts:?}"))?;
    require(constant(&lines)? == int(2), || format!("<H^2 x4>_1 = {lines:?}"))?;
    Ok("<H^3,H^3>_1 = 1, <H^2,H^2,H^2,H^2>_1 = 2".into())
}

fn criterion_3() -> Result<String, String> {
    let p4 = TargetModel::projective_space(4);
    let twist = TwistSpec::euler([LineBundle::pullback(5)]);
    let r =
        compute_invariant_with(&p4, &CurveClass::new(1, 0), &[], Some(&twist), &opts()).map_err(|e| e.to_string())?;
    TALLY.with(|t| {
        let mut t = t.borrow_mut();
        t.computations += 1;
        t.twisted += 1;
    });
    let v = nonequivariant_limit(&r).map_err(|e| e.to_string())?;
    let oracle = Rational::from_integer(lines_on_hypersurface(5));
    require(v == oracle, || format!("{v} != {oracle}"))?;
    Ok(format!("lines on the quintic = {v}"))
}

fn criterion_4() -> Result<String, String> {
    let p1 = TargetModel::projective_space(1);
    let twist = TwistSpec::inverse([LineBundle::pullback(-1), LineBundle::pullback(-1)]);
    let mut got = Vec::new();
    for d in 1..=3u32 {
        let v = constant(&invariant(&p1, CurveClass::new(d as i64, 0), &[], Some(&twist))?)?;
        let expected = Rational::new(1.into(), (d * d * d).into());
        require(v == expected && v == aspinwall_morrison(d), || format!("d = {d}: {v}"))?;
        got.push(v.to_string());
    }
    Ok(format!("1/d^3: {}", got.join(", ")))
}

fn h(k: i64) -> Expr {
    Expr::pow(Expr::BaseHyperplane, k)
}

fn rel1_cases(id: IdentityId) -> Vec<IdentityCase> {
    let mk = |m, a: Vec<i64>, d, s: Vec<Expr>| IdentityCase::new(id, m, a, d).unwrap().with_sigmas(s);
    vec![
        mk(0, vec![0, 0], 0, vec![Expr::num(1); 3]),
        mk(1, vec![0, 0], 0, vec![h(1), Expr::num(1), Expr::num(1)]),
        mk(1, vec![0, 0], 1, vec![h(1), h(1)]),
        mk(1, vec![0, 0], 2, vec![h(1), h(1)]),
        mk(1, vec![0, 1], 0, vec![h(1), Expr::num(1), Expr::num(1)]),
        mk(1, vec![0, 1], 1, vec![h(1), h(1)]),
        mk(2, vec![0, 0], 1, vec![h(2), h(2)]),
    ]
}

fn criterion_5() -> Result<String, String> {
    let cases = rel1_cases(IdentityId::Rel1);
    for c in &cases {
        expect_pass(&identity(check_rel1(c, &opts()))?)?;
    }
    Ok(format!("{} cases", cases.len()))
}

fn criterion_6() -> Result<String, String> {
    let cases = rel1_cases(IdentityId::CorMain);
    let mut notes = Vec::new();
    for c in &cases {
        let rep = identity(check_cor_main(c, &opts()))?;
        expect_pass(&rep)?;
        notes.push(rep.note.unwrap_or_default());
    }
    Ok(format!("{} cases ({})", cases.len(), notes.join("; ")))
}

fn criterion_7() -> Result<String, String> {
    let mut count = 0;
    for e in 0..=1u32 {
        // One fiber line: two plain markings keep the point-base side stable.
        let rel2 =
            IdentityCase::new(IdentityId::Rel2, 0, vec![0, 0], 0).unwrap().with_e(e).with_sigmas(vec![Expr::num(1); 2]);
        expect_pass(&identity(check_rel2(&rel2, &opts()))?)?;
        count += 1;
        for k in 1..=2u32 {
            let plain = if k == 1 { 2 } else { 1 };
            let rel3 = IdentityCase::new(IdentityId::Rel3, 0, vec![0, 0], 0)
                .unwrap()
                .with_k(k)
                .with_e(e)
                .with_alphas(vec![Expr::num(1); k as usize])
                .with_sigmas(vec![Expr::num(1); plain]);
            expect_pass(&identity(check_rel3(&rel3, &opts()))?)?;
            count += 1;
        }
    }
    let rel2 = IdentityCase::new(IdentityId::Rel2, 1, vec![0, 0], 1).unwrap().with_sigmas(vec![h(1)]);
    expect_pass(&identity(check_rel2(&rel2, &opts()))?)?;
    let rel3 = IdentityCase::new(IdentityId::Rel3, 1, vec![0, 0], 1).unwrap().with_k(1).with_sigmas(vec![h(1)]);
    expect_pass(&identity(check_rel3(&rel3, &opts()))?)?;
    Ok(format!("{} cases", count + 2))
}

fn criterion_8() -> Result<String, String> {
    let case =
        IdentityCase::new(IdentityId::Rel4, 0, vec![0, 0], 0).unwrap().with_k(2).with_sigmas(vec![Expr::num(1); 2]);
    let declared = identity(check_rel4(&case, &opts()))?;
    let readings = identity(check_rel4_readings(&case, &opts()).map(|v| {
        let mut all = v[0].clone();
        all.comparisons = v.iter().flat_map(|r| r.comparisons.clone()).collect();
        all.note = Some(
            v.iter()
                .map(|r| format!("{}={}", r.reading.unwrap().name(), if r.pass { "pass" } else { "fail" }))
                .collect::<Vec<_>>()
                .join(", "),
        );
        all
    }))?;
    let degenerate = rel4_degenerate_consistent(&case, &opts()).map_err(|e| e.to_string())?;
    require(degenerate, || "no reading reproduces k = 1".into())?;
    require(declared.reading == Some(ChernReading::ChernPolynomial), || "unexpected default reading".into())?;
    expect_pass(&declared)?;
    Ok(format!(
        "k = 2 under {}; readings: {}; k = 1 matches rel2",
        ChernReading::ChernPolynomial.name(),
        readings.note.unwrap()
    ))
}

fn criterion_9() -> Result<String, String> {
    let rep = identity(check_pn_fibration_demo(&opts()))?;
    if let Some(bad) = rep.comparisons.iter().find(|c| !c.agrees()) {
        return Err(format!("{}: {:?} vs {:?}", bad.label, bad.lhs, bad.rhs));
    }
    Ok(format!("{} comparisons agree", rep.comparisons.len()))
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn criterion_10() -> Result<String, String> {
    // Laurent structure: a pure twisted tuple is c·λ^D with D from dimension counting.
    let p1 = TargetModel::projective_space(1);
    let twist = TwistSpec::inverse([LineBundle::pullback(-1), LineBundle::pullback(0)]);
    for (d, ins) in [(1i64, vec![(1u32, 0u32)]), (2, vec![(0, 1), (2, 1)]), (1, vec![(0, 0), (0, 0), (1, 1)])] {
        let class = CurveClass::new(d, 0);
        let pure_ins: Vec<_> = ins.iter().map(|&(k, a)| pure(&p1, k, a, 0)).collect();
        let v = invariant(&p1, class, &pure_ins, Some(&twist))?;
        let deg: i64 = ins.iter().map(|&(k, a)| (k + a) as i64).sum();
        let expected = deg - p1.virtual_dim(&class, ins.len()) + twist.lambda_shift(&class);
        require(v.terms().all(|(k, _)| k as i64 == expected), || format!("{v:?} is not a multiple of λ^{expected}"))?;
    }

    // Randomized dimension mismatches.
    let p2 = TargetModel::projective_space(2);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut mismatched = 0;
    while mismatched < 10 {
        let d = rng.random_range(1..=2i64);
        let n = rng.random_range(1..=4usize);
        let ins: Vec<(u32, u32)> = (0..n).map(|_| (rng.random_range(0..=2), rng.random_range(0..=2))).collect();
        let deg: i64 = ins.iter().map(|&(k, a)| (k + a) as i64).sum();
        if deg == p2.virtual_dim(&CurveClass::new(d, 0), n) {
            continue;
        }
        let pure_ins: Vec<_> = ins.iter().map(|&(k, a)| pure(&p2, k, a, 0)).collect();
        let v = invariant(&p2, CurveClass::new(d, 0), &pure_ins, None)?;
        require(v.is_zero(), || format!("d = {d}, {ins:?}: {v:?}"))?;
        mismatched += 1;
    }

    let mut psi_checked = 0;
    for n in 3..=9usize {
        for exps in compositions(n as u32 - 3, n) {
            require(psi_integral(&exps) == string_oracle(&exps), || format!("{exps:?}"))?;
            psi_checked += 1;
        }
    }

    let graphs = enumerate(&p1, &CurveClass::new(2, 0), 0).map_err(|e| e.to_string())?.len();
    require(graphs == 3, || format!("{graphs} graphs for P^1, d = 2, n = 0"))?;

    let (computations, twisted) = TALLY.with(|t| (t.borrow().computations, t.borrow().twisted));
    Ok(format!(
        "{computations} computations agree on 3 draws ({twisted} twisted, all Laurent); \
         {mismatched} mismatched cases vanish; {psi_checked} psi integrals; {graphs} graphs"
    ))
}

#[test]
fn acceptance() {
    type Criterion = fn() -> Result<String, String>;
    let criteria: [(u32, &str, Criterion, u64); 10] = [
        (1, "P^2 plane curves vs associativity", criterion_1, 120),
        (2, "P^3 quantum cohomology checks", criterion_2, 30),
        (3, "quintic lines via Euler twist", criterion_3, 120),
        (4, "local P^1 multiple covers", criterion_4, 300),
        (5, "lift identity", criterion_5, 600),
        (6, "untwisted extraction from the lift", criterion_6, 60),
        (7, "single and multiple fiber lines", criterion_7, 600),
        (8, "fiber cover identity", criterion_8, 600),
        (9, "P^1 bundles with equal Chern class", criterion_9, 600),
        (10, "property summaries", criterion_10, 600),
    ];
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for (n, name, run, limit) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let result = result.and_then(|msg| {
            if elapsed > Duration::from_secs(limit) {
                Err(format!("took {:.1}s, limit {limit}s", elapsed.as_secs_f64()))
            } else {
                Ok(msg)
            }
        });
        let (tag, msg) = match &result {
            Ok(m) => ("PASS", m.clone()),
            Err(m) => ("FAIL", m.clone()),
        };
        writeln!(out, "criterion {n:>2} {tag} [{:>7.2}s] {name}: {msg}", elapsed.as_secs_f64()).unwrap();
        if result.is_err() {
            failed.push(n);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
