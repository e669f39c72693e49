#![no_main]
use libfuzzer_sys::fuzz_target;
use mdshift::graph::{contracting_forest, validate_graph, DirectedMultigraph};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(g) = DirectedMultigraph::from_json_str(text) else {
        return;
    };
    let again = DirectedMultigraph::from_json_str(&g.to_json_string()).unwrap();
    assert_eq!(g.to_spec(), again.to_spec());
    let _ = validate_graph(&g);
    if g.edge_count() <= 64 {
        let _ = contracting_forest(&g);
    }
});
