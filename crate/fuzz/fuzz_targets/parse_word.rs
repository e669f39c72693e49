#![no_main]
use libfuzzer_sys::fuzz_target;
use mdshift::graph::DirectedMultigraph;
use mdshift::semigroup::{reduce, Word};

// Words are parsed against a fixed two-vertex graph; the first line of the
// input may replace it.
const DEFAULT: &str = r#"{"vertices":["V0","V1"],"edges":[
  {"id":"e1","src":"V0","tgt":"V0"},{"id":"f","src":"V0","tgt":"V1"},
  {"id":"e2","src":"V1","tgt":"V0"}]}"#;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let g = DirectedMultigraph::from_json_str(DEFAULT).unwrap();
    let Ok(w) = Word::parse(text, &g) else {
        return;
    };
    let shown = w.display(&g);
    assert_eq!(Word::parse(&shown, &g).unwrap(), w);
    let x = reduce(&w, &g).unwrap();
    if let Some(nf) = x.to_word() {
        assert!(nf.len() <= w.len());
    }
});
