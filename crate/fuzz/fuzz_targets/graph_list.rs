#![no_main]

use aeq_core::io::{graph_to_line, parse_graph_list};
use aeq_core::tdgraph::is_triangle_free;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(graphs) = parse_graph_list(text) else {
        return;
    };
    let lines: String = graphs.iter().map(|g| graph_to_line(g) + "\n").collect();
    assert_eq!(parse_graph_list(&lines).expect("round trip"), graphs);
    for g in graphs.iter().filter(|g| g.n() <= 256) {
        let check = is_triangle_free(g);
        assert_eq!(check.triangle_free, check.witness.is_none());
    }
});
