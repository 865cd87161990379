#![no_main]

use gwloc::parse::{parse_expr, parse_insertion, render};
use gwloc_core::cohomology::{BundleSpec, Ring};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(e) = parse_expr(data) else {
        return;
    };
    assert_eq!(parse_expr(&render(&e)).as_ref(), Ok(&e));

    // Expansion may reject the input but must not panic.
    let rings = [Ring::Base { dim: 2 }, Ring::Bundle(BundleSpec::new(1, vec![0, 1]).unwrap())];
    for ring in &rings {
        let _ = parse_insertion(data, ring, 3);
    }
});
