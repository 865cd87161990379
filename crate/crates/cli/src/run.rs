//! Command execution. Every command produces a JSON document and an exit
//! code; nothing here prints.

use std::time::Instant;

use gwloc_core::arith::{LaurentPoly, Rational};
use gwloc_core::engine::{compute_invariant_with, ENGINE_VERSION};
use gwloc_core::error::Error as CoreError;
use gwloc_core::graphs::enumerate;
use gwloc_core::identities::{check, IdentityId, VerificationReport};
use gwloc_core::oracles::{aspinwall_morrison, kontsevich_table, lines_on_hypersurface, qh_pn_checks};
use serde_json::{json, Map, Value};

use crate::cache::{self, Cache, Lookup};
use crate::cases::BUNDLED;
use crate::config::{CaseFile, ConfigError, RunConfig};
use crate::parse::{parse_insertion, InsertionError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub struct Outcome {
    pub json: Value,
    pub code: i32,
    /// Non-fatal problems, reported on stderr by the binary.
    pub warnings: Vec<String>,
}

impl Outcome {
    fn ok(json: Value) -> Self {
        Outcome { json, code: EXIT_OK, warnings: Vec::new() }
    }
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Compute(CoreError),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure::Compute(e)
    }
}

impl From<InsertionError> for Failure {
    fn from(e: InsertionError) -> Self {
        match e {
            InsertionError::Syntax(p) => Failure::Usage(p.to_string()),
            InsertionError::Engine(c) => Failure::Compute(c),
        }
    }
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Compute(_) => EXIT_FAILURE,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Failure::Usage(msg) => json!({ "error": { "kind": "usage", "message": msg } }),
            Failure::Compute(e) => error_json(e),
        }
    }
}

fn error_kind(e: &CoreError) -> String {
    let dbg = format!("{e:?}");
    dbg.split(['(', ' ']).next().unwrap_or_default().to_string()
}

pub fn error_json(e: &CoreError) -> Value {
    json!({ "error": { "kind": error_kind(e), "message": e.to_string() } })
}

pub fn rational_string(r: &Rational) -> String {
    r.to_string()
}

/// {"laurent": {"-2": "1", ...}} with exact rational strings.
pub fn laurent_json(v: &LaurentPoly) -> Value {
    let terms: Map<String, Value> =
        v.terms().map(|(k, c)| (k.to_string(), Value::String(rational_string(c)))).collect();
    json!({ "laurent": terms })
}

fn nonequivariant(v: &LaurentPoly) -> Value {
    match v.min_exponent() {
        Some(k) if k < 0 => Value::Null,
        _ => Value::String(rational_string(&v.coefficient(0))),
    }
}

/// Evaluate a compute config, consulting the cache if one is configured.
pub fn compute(config: &RunConfig) -> Result<Outcome, Failure> {
    let start = Instant::now();
    let mut warnings = Vec::new();
    let cache = Cache::for_config(config);
    let key = cache::key(config);

    let mut cached = None;
    if let Some(c) = &cache {
        match c.get(&key) {
            Lookup::Hit(v) => cached = Some(v),
            Lookup::Miss => {}
            Lookup::Corrupt(msg) => warnings.push(format!("ignoring cache entry {msg}")),
        }
    }
    let (result, status) = match cached {
        Some(v) => (v, "hit"),
        None => {
            let result = evaluate(config)?;
            if let Some(c) = &cache {
                if let Err(e) = c.put(&key, &result) {
                    warnings.push(format!("cannot write cache entry in {}: {e}", c.dir().display()));
                }
            }
            (result, if cache.is_some() { "miss" } else { "off" })
        }
    };

    let mut doc = json!({
        "command": "compute",
        "config": config,
        "cache": status,
        "cache_key": key,
        "millis": start.elapsed().as_millis() as u64,
    });
    let obj = doc.as_object_mut().expect("object");
    for (k, v) in result.as_object().expect("result object") {
        obj.insert(k.clone(), v.clone());
    }
    Ok(Outcome { json: doc, code: EXIT_OK, warnings })
}

/// The seed-independent part of a compute report; this is what gets cached.
fn evaluate(config: &RunConfig) -> Result<Value, Failure> {
    let model = config.model()?;
    let n = config.insertions.len();
    let bound = model.virtual_dim(&config.class, n).max(0) as u32;
    let ring = model.ring();
    let insertions =
        config.insertions.iter().map(|s| parse_insertion(s, &ring, bound)).collect::<Result<Vec<_>, _>>()?;
    let twist = config.twist_spec();
    let r = compute_invariant_with(&model, &config.class, &insertions, twist.as_ref(), &config.engine_options())?;
    let mut out = laurent_json(&r.value);
    let obj = out.as_object_mut().expect("object");
    obj.insert("nonequivariant".into(), nonequivariant(&r.value));
    obj.insert("graphs".into(), json!(r.skeletons));
    obj.insert("tuples".into(), json!(r.tuples));
    obj.insert("seeds".into(), json!(r.seeds));
    obj.insert("engine_version".into(), json!(ENGINE_VERSION));
    Ok(out)
}

/// One JSON object per fixed-locus graph, in enumeration order.
pub fn dump_graphs(config: &RunConfig) -> Result<Vec<Value>, Failure> {
    let model = config.model()?;
    let graphs = enumerate(&model, &config.class, config.insertions.len())?;
    let points = model.fixed_points();
    Ok(graphs
        .iter()
        .map(|g| {
            let edges: Vec<Value> = g
                .skeleton
                .edges
                .iter()
                .map(|e| json!({ "a": e.a, "b": e.b, "degree": e.degree, "line": e.line }))
                .collect();
            json!({
                "vertices": g.skeleton.num_vertices(),
                "labels": g.skeleton.labels.iter().map(|&p| points[p].to_string()).collect::<Vec<_>>(),
                "edges": edges,
                "degrees": g.skeleton.edges.iter().map(|e| e.degree).collect::<Vec<_>>(),
                "markings": g.markings,
                "automorphisms": g.automorphisms,
                "aut_factor": g.aut_factor,
            })
        })
        .collect())
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

pub fn report_json(rep: &VerificationReport, millis: u128) -> Value {
    let mut doc = json!({
        "identity": rep.identity.name(),
        "label": rep.label,
        "verdict": verdict(rep.pass),
        "lhs": laurent_json(rep.lhs())["laurent"],
        "rhs": laurent_json(rep.rhs())["laurent"],
        "seeds": rep.seeds,
        "millis": millis as u64,
    });
    let obj = doc.as_object_mut().expect("object");
    if rep.comparisons.len() > 1 {
        let cmps: Vec<Value> = rep
            .comparisons
            .iter()
            .map(|c| {
                json!({
                    "label": c.label,
                    "verdict": verdict(c.agrees()),
                    "lhs": laurent_json(&c.lhs)["laurent"],
                    "rhs": laurent_json(&c.rhs)["laurent"],
                })
            })
            .collect();
        obj.insert("comparisons".into(), Value::Array(cmps));
    }
    if let Some(r) = rep.reading {
        obj.insert("reading".into(), json!(r.name()));
    }
    if let Some(n) = &rep.note {
        obj.insert("note".into(), json!(n));
    }
    doc
}

/// Verify one case; engine errors are reported inside the document.
fn verify_case(name: Option<&str>, case: &CaseFile) -> Result<(Value, bool), Failure> {
    let start = Instant::now();
    let built = case.to_case()?;
    let mut doc = match built.and_then(|c| check(&c, &case.engine_options())) {
        Ok(rep) => report_json(&rep, start.elapsed().as_millis()),
        Err(e) => {
            let mut v = error_json(&e);
            v["identity"] = json!(case.identity);
            v["verdict"] = json!("error");
            v
        }
    };
    if let Some(n) = name {
        doc["case"] = json!(n);
    }
    let pass = doc["verdict"] == "pass";
    Ok((doc, pass))
}

/// `verify`: a single case file, the built-in demo, or every bundled case.
pub fn verify(identity: Option<IdentityId>, case: Option<&CaseFile>, all: bool) -> Result<Outcome, Failure> {
    let code = |pass: bool| if pass { EXIT_OK } else { EXIT_FAILURE };
    if all {
        if case.is_some() {
            return Err(Failure::Usage("--all and --case are mutually exclusive".into()));
        }
        let mut results = Vec::new();
        let mut passed = 0;
        for (name, text) in BUNDLED {
            let c = CaseFile::from_json(text)?;
            if identity.is_some_and(|id| id != c.identity_id()) {
                continue;
            }
            let (doc, ok) = verify_case(Some(name), &c)?;
            passed += ok as usize;
            results.push(doc);
        }
        let total = results.len();
        let json = json!({
            "command": "verify",
            "verdict": verdict(passed == total),
            "passed": passed,
            "failed": total - passed,
            "results": results,
        });
        return Ok(Outcome { json, code: code(passed == total), warnings: Vec::new() });
    }
    let owned;
    let case = match (case, identity) {
        (Some(c), Some(id)) if c.identity_id() != id => {
            return Err(Failure::Usage(format!("case file is for {}, not {}", c.identity, id.name())))
        }
        (Some(c), _) => c,
        (None, Some(IdentityId::PnFibrationDemo)) => {
            owned = CaseFile::from_json(r#"{"identity": "pn_fibration_demo"}"#)?;
            &owned
        }
        (None, _) => return Err(Failure::Usage("verify needs --case <file> or --all".into())),
    };
    let (mut doc, pass) = verify_case(None, case)?;
    doc["command"] = json!("verify");
    Ok(Outcome { json: doc, code: code(pass), warnings: Vec::new() })
}

const MAX_D: u32 = 500;

pub const ORACLES: [&str; 4] = ["wdvv_p2", "quintic_lines", "aspinwall_morrison", "qh_pn_checks"];

/// `oracle <name>`: the table as a JSON object of exact strings.
pub fn oracle(name: &str, d_max: Option<u32>) -> Result<Outcome, Failure> {
    let d_max = d_max.unwrap_or(4);
    if !(1..=MAX_D).contains(&d_max) {
        return Err(Failure::Usage(format!("--d-max must be between 1 and {MAX_D}")));
    }
    let mut table = Map::new();
    match name {
        "wdvv_p2" => {
            for (d, n) in kontsevich_table(d_max).iter().enumerate().skip(1) {
                table.insert(d.to_string(), json!(n.to_string()));
            }
        }
        "quintic_lines" => {
            table.insert("P4 O(5)".into(), json!(lines_on_hypersurface(5).to_string()));
        }
        "aspinwall_morrison" => {
            for d in 1..=d_max {
                table.insert(d.to_string(), json!(rational_string(&aspinwall_morrison(d))));
            }
        }
        "qh_pn_checks" => {
            for (label, value, _) in qh_pn_checks() {
                table.insert(label, json!(rational_string(&value)));
            }
        }
        _ => {
            return Err(Failure::Usage(format!("unknown oracle {name:?}; available: {}", ORACLES.join(", "))));
        }
    }
    Ok(Outcome::ok(Value::Object(table)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use gwloc_core::arith::{int, rat};

    #[test]
    fn laurent_serialization() {
        let v = LaurentPoly::from_terms([(-2, int(1)), (0, rat(-3, 4))]);
        assert_eq!(laurent_json(&v), json!({"laurent": {"-2": "1", "0": "-3/4"}}));
        assert_eq!(laurent_json(&LaurentPoly::zero()), json!({"laurent": {}}));
    }

    #[test]
    fn error_kinds() {
        assert_eq!(error_kind(&CoreError::UnstableModuli), "UnstableModuli");
        assert_eq!(error_kind(&CoreError::InvalidInput("x".into())), "InvalidInput");
    }

    #[test]
    fn wdvv_table() {
        let out = oracle("wdvv_p2", Some(4)).unwrap();
        assert_eq!(out.json, json!({"1": "1", "2": "1", "3": "12", "4": "620"}));
        assert!(matches!(oracle("nope", None), Err(Failure::Usage(_))));
    }
}
