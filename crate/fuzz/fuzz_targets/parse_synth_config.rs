#![no_main]

use lambda_holonomy::cli::{parse_synth_config, run_synth};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = parse_synth_config(text) {
            let again = parse_synth_config(&serde_json::to_string(&cfg).unwrap()).unwrap();
            assert_eq!(cfg, again);
            // Unreachable transitions are reported as errors, never panics.
            let _ = run_synth(&cfg);
        }
    }
});
