#![no_main]

use lambda_holonomy::gate::AxisLabel;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(label) = text.parse::<AxisLabel>() {
            let canonical = format!("{label:?}");
            assert_eq!(canonical.parse::<AxisLabel>().unwrap(), label);
        }
    }
});
