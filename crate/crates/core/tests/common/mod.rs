#![allow(dead_code)]

use std::path::PathBuf;

use mdshift::families::{build_family_ii, build_family_iii, FamilyIIIParams, FamilyIIParams};
use mdshift::graph::DirectedMultigraph;
use mdshift::semigroup::{Element, Letter, Word};
use rand::Rng;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

pub fn load(name: &str) -> DirectedMultigraph {
    let text = std::fs::read_to_string(data_path(name)).unwrap();
    DirectedMultigraph::from_json_str(&text).unwrap()
}

pub fn g(ell: usize, m: usize) -> DirectedMultigraph {
    build_family_iii(&FamilyIIIParams::new(ell, m).unwrap()).unwrap()
}

pub fn family_ii(r: usize, q: &[(usize, usize)]) -> DirectedMultigraph {
    build_family_ii(&FamilyIIParams::new(r, q.iter().copied()).unwrap()).unwrap()
}

/// D₂, D₃, Fibonacci-Dyck, G[2,1], G[2,2], G[3,2] and the family II model
/// with one root loop and one leaf carrying two returns.
pub fn corpus() -> Vec<(&'static str, DirectedMultigraph)> {
    vec![
        ("D2", load("d2.json")),
        ("D3", load("d3.json")),
        ("Fibonacci", load("fibonacci.json")),
        ("G[2,1]", g(2, 1)),
        ("G[2,2]", g(2, 2)),
        ("G[3,2]", g(3, 2)),
        ("II(r=1,q2=1)", family_ii(1, &[(2, 1)])),
    ]
}

/// A random word that stays admissible with probability `bias` at every step
/// (when an admissible continuation exists).
pub fn random_word<R: Rng>(g: &DirectedMultigraph, len: usize, bias: f64, rng: &mut R) -> Word {
    let alphabet = Letter::alphabet(g);
    let mut acc = Element::Identity;
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let l = if rng.gen_bool(bias) {
            let ok: Vec<Letter> = alphabet
                .iter()
                .copied()
                .filter(|&l| !acc.push(l, g).is_zero())
                .collect();
            if ok.is_empty() {
                alphabet[rng.gen_range(0..alphabet.len())]
            } else {
                ok[rng.gen_range(0..ok.len())]
            }
        } else {
            alphabet[rng.gen_range(0..alphabet.len())]
        };
        acc = acc.push(l, g);
        out.push(l);
    }
    Word::new(out)
}

/// Every word of length exactly `n` over the full alphabet.
pub fn all_words(g: &DirectedMultigraph, n: usize) -> Vec<Word> {
    let alphabet = Letter::alphabet(g);
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w: Vec<Letter>| {
                alphabet.iter().map(move |&l| {
                    let mut w = w.clone();
                    w.push(l);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(Word::new).collect()
}

/// Same graph with every vertex and edge renamed and the listing order
/// reversed.
pub fn relabeled(g: &DirectedMultigraph) -> DirectedMultigraph {
    let mut spec = g.to_spec();
    spec.vertices.reverse();
    spec.edges.reverse();
    for v in &mut spec.vertices {
        *v = format!("w_{v}");
    }
    for e in &mut spec.edges {
        e.id = format!("x_{}", e.id);
        e.src = format!("w_{}", e.src);
        e.tgt = format!("w_{}", e.tgt);
    }
    DirectedMultigraph::from_spec(&spec).unwrap()
}
