#![no_main]

use gwloc::config::CaseFile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(c) = CaseFile::from_json(s) {
        // Building the case validates twists and degrees; it must not panic.
        let _ = c.to_case();
    }
});
