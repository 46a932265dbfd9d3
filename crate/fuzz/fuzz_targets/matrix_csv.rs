#![no_main]

use aeq_core::io::parse_matrix_csv;
use aeq_core::spectral::{eigenvalues, gershgorin_bound};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(m) = parse_matrix_csv(text) else {
        return;
    };
    if m.size() <= 12 && m.max_abs() < 1e6 {
        let bound = gershgorin_bound(&m);
        if let Ok(spec) = eigenvalues(&m, 1e-8) {
            assert!(spec.spectral_radius() <= bound * (1.0 + 1e-6) + 1e-6);
        }
    }
});
