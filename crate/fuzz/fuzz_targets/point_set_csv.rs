#![no_main]

use aeq_core::io::{parse_point_set_csv, point_set_to_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(set) = parse_point_set_csv(text) {
        let back = parse_point_set_csv(&point_set_to_csv(&set)).expect("round trip");
        assert_eq!(back, set);
    }
});
