#![no_main]

use gwloc::config::RunConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(c) = RunConfig::from_json(s) {
        // Anything accepted must survive a serialization roundtrip.
        let again = serde_json_roundtrip(&c);
        assert_eq!(again, c);
        let _ = c.model();
    }
});

fn serde_json_roundtrip(c: &RunConfig) -> RunConfig {
    let text = serde_json::to_string(c).expect("serializable");
    RunConfig::from_json(&text).expect("re-parse")
}
