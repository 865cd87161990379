//! Replays the checked-in fuzz corpus through the same entry points as the
//! fuzz targets.

use std::fs;
use std::path::PathBuf;

use gwloc::config::{CaseFile, RunConfig};
use gwloc::parse::{parse_expr, parse_insertion, render};
use gwloc_core::cohomology::{BundleSpec, Ring};

fn corpus(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            let text = fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "empty corpus for {target}");
    out
}

#[test]
fn insertion_seeds_parse_and_expand() {
    let rings = [Ring::Base { dim: 2 }, Ring::Bundle(BundleSpec::new(1, vec![0, 1]).unwrap())];
    for (path, text) in corpus("parse_insertion") {
        let e = parse_expr(&text).unwrap_or_else(|err| panic!("{}: {err}", path.display()));
        assert_eq!(parse_expr(&render(&e)).unwrap(), e);
        let expanded = rings.iter().filter(|r| parse_insertion(&text, r, 3).is_ok()).count();
        assert!(expanded > 0, "{} expands in no ring", path.display());
    }
}

#[test]
fn config_seeds_load() {
    for (path, text) in corpus("parse_config") {
        let c = RunConfig::from_json(&text).unwrap_or_else(|err| panic!("{}: {err}", path.display()));
        assert!(c.model().is_ok());
    }
}

#[test]
fn case_seeds_load() {
    for (path, text) in corpus("parse_case") {
        let c = CaseFile::from_json(&text).unwrap_or_else(|err| panic!("{}: {err}", path.display()));
        assert!(c.to_case().unwrap().is_ok(), "{}", path.display());
    }
}
