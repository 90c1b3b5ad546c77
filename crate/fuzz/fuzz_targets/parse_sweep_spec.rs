#![no_main]

use lambda_holonomy::cli::parse_sweep_spec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(spec) = parse_sweep_spec(text) {
            let again = parse_sweep_spec(&serde_json::to_string(&spec).unwrap()).unwrap();
            assert_eq!(spec, again);
            let points = spec.range.points();
            assert_eq!(points.len(), spec.range.count);
            assert_eq!(*points.last().unwrap(), spec.range.stop);
        }
    }
});
