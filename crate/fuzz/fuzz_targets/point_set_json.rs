#![no_main]

use aeq_core::geometry::{is_almost_equidistant, Tolerance};
use aeq_core::io::{parse_point_set_json, AnyPointSet};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(set) = parse_point_set_json(text) else {
        return;
    };
    assert!(!set.is_empty());
    // a parsed set re-serializes to something that parses to the same set
    let again = parse_point_set_json(&set.to_json().to_string()).expect("round trip");
    assert_eq!(again.len(), set.len());
    assert_eq!(again.dim(), set.dim());
    if set.len() <= 64 {
        match &set {
            AnyPointSet::Float(s) => {
                let _ = is_almost_equidistant(s, &Tolerance::default());
            }
            AnyPointSet::Exact(s) => {
                let _ = is_almost_equidistant(s, &Tolerance::exact());
            }
        }
    }
});
