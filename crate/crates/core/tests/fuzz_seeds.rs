//! Replays the checked-in fuzz seeds through the parsers.

use std::fs;
use std::path::PathBuf;

use mdshift::families::{parse_count_map, CanonicalParams};
use mdshift::graph::DirectedMultigraph;
use mdshift::semigroup::Word;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.display().to_string(), fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

#[test]
fn graph_seeds_parse_and_round_trip() {
    for (name, text) in seeds("parse_graph") {
        let g = DirectedMultigraph::from_json_str(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let again = DirectedMultigraph::from_json_str(&g.to_json_string()).unwrap();
        assert_eq!(g.to_spec(), again.to_spec(), "{name}");
    }
}

#[test]
fn word_seeds_parse_and_round_trip() {
    let g = DirectedMultigraph::from_json_str(
        &fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/fibonacci.json"))
            .unwrap(),
    )
    .unwrap();
    let d2 = DirectedMultigraph::from_json_str(
        &fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/d2.json"))
            .unwrap(),
    )
    .unwrap();
    for (name, text) in seeds("parse_word") {
        let graph = if text.contains('a') { &d2 } else { &g };
        let w = Word::parse(&text, graph).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(Word::parse(&w.display(graph), graph).unwrap(), w, "{name}");
    }
}

#[test]
fn param_seeds_parse() {
    for (name, text) in seeds("parse_params") {
        if name.ends_with("count_map") {
            assert!(parse_count_map(&text).is_ok(), "{name}");
            continue;
        }
        let p: CanonicalParams = text.parse().unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(p.to_string().parse::<CanonicalParams>().unwrap(), p);
        p.build().unwrap();
    }
}
