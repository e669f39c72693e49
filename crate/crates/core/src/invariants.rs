//! Conjugacy invariants of a Markov-Dyck shift, bundled for comparison.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dynamics::{count_tables_dp, multiplier_lambda, CountTable};
use crate::error::{Error, Result};
use crate::graph::{contracting_forest, ContractionData, DirectedMultigraph, VertexId};
use crate::series::zeta_series;

pub const DEFAULT_TRUNCATION: usize = 10;

/// Upper bound on vertex orderings tried when canonicalising the weighted
/// contracted graph.
const MAX_ORDERINGS: usize = 1_000_000;

/// Equal fingerprints are necessary for conjugacy, never sufficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantFingerprint {
    pub schema: &'static str,
    pub truncation: usize,
    pub nu: usize,
    /// Sorted multiplier thresholds; `None` for edges that never carry one.
    pub lambda_spectrum: Vec<Option<usize>>,
    pub m_ell_sizes: BTreeMap<usize, usize>,
    /// Neutral points fixed by `Sⁿ`, `n = 1..=N`.
    pub neutral_fixed_vector: Vec<String>,
    /// Sorted per-edge vectors of multiplier orbit counts, `n = 1..=N`.
    pub xi_profile: Vec<Vec<String>>,
    pub weighted_contracted: WeightedContracted,
}

/// Contracted graph in canonical vertex order with each root weighted by
/// the truncated zeta function of its neutral points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightedContracted {
    pub weights: Vec<Vec<String>>,
    pub adjacency: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Distinguished {
        field: &'static str,
        left: String,
        right: String,
    },
    /// Agreement up to the truncation; not a proof of conjugacy.
    InvariantsAgree,
}

pub fn fingerprint(g: &DirectedMultigraph, n: usize) -> Result<InvariantFingerprint> {
    let cd = contracting_forest(g)?;
    let ct = count_tables_dp(g, &cd, n)?;
    fingerprint_from(g, &cd, &ct)
}

pub fn fingerprint_from(
    g: &DirectedMultigraph,
    cd: &ContractionData,
    ct: &CountTable,
) -> Result<InvariantFingerprint> {
    let n = ct.n_max;
    let dec = |v: &[num_bigint::BigUint]| {
        v[1..]
            .iter()
            .map(|c| c.to_str_radix(10))
            .collect::<Vec<_>>()
    };
    let lam = multiplier_lambda(g, cd);
    let mut lambda_spectrum: Vec<Option<usize>> = lam.values().copied().collect();
    lambda_spectrum.sort();
    let mut m_ell_sizes = BTreeMap::new();
    for l in lam.values().flatten() {
        *m_ell_sizes.entry(*l).or_default() += 1;
    }
    let mut xi_profile: Vec<Vec<String>> =
        ct.orbits_by_multiplier.values().map(|v| dec(v)).collect();
    xi_profile.sort();

    let mut weights = Vec::with_capacity(cd.roots.len());
    for r in &cd.roots {
        let z = zeta_series(&ct.neutral_by_root[r][1..], n)?;
        weights.push(
            z.integer_coefficients()?
                .iter()
                .map(|c| c.to_str_radix(10))
                .collect::<Vec<_>>(),
        );
    }
    Ok(InvariantFingerprint {
        schema: "mdshift.fingerprint/1",
        truncation: n,
        nu: lam.len(),
        lambda_spectrum,
        m_ell_sizes,
        neutral_fixed_vector: dec(&ct.neutral_fixed),
        xi_profile,
        weighted_contracted: canonical_weighted(&cd.contracted, &weights)?,
    })
}

/// Lexicographically smallest adjacency matrix over all vertex orderings
/// that sort vertices by (weight, in-degree, out-degree, loops).
pub fn canonical_weighted(
    g: &DirectedMultigraph,
    weights: &[Vec<String>],
) -> Result<WeightedContracted> {
    type Key<'a> = (&'a Vec<String>, usize, usize, usize);
    let key = |v: VertexId| -> Key<'_> {
        (
            &weights[v.index()],
            g.in_degree(v),
            g.out_degree(v),
            g.multiplicity(v, v),
        )
    };
    let mut order: Vec<VertexId> = g.vertices().collect();
    order.sort_by(|&a, &b| key(a).cmp(&key(b)));
    let mut classes: Vec<Vec<VertexId>> = Vec::new();
    for &v in &order {
        match classes.last_mut() {
            Some(c) if key(c[0]) == key(v) => c.push(v),
            _ => classes.push(vec![v]),
        }
    }
    let orderings = classes.iter().try_fold(1usize, |acc, c| {
        (1..=c.len()).try_fold(acc, |a, k| a.checked_mul(k))
    });
    if orderings.is_none_or(|o| o > MAX_ORDERINGS) {
        return Err(Error::InvalidParams(
            "contracted graph has too many symmetric vertices to canonicalise".into(),
        ));
    }

    let mut best: Option<Vec<Vec<usize>>> = None;
    let mut current: Vec<VertexId> = Vec::with_capacity(order.len());
    let mut used = vec![false; g.vertex_count()];
    search(g, &classes, 0, &mut current, &mut used, &mut best);
    let adjacency = best.unwrap_or_default();
    Ok(WeightedContracted {
        weights: order.iter().map(|&v| weights[v.index()].clone()).collect(),
        adjacency,
    })
}

fn search(
    g: &DirectedMultigraph,
    classes: &[Vec<VertexId>],
    class: usize,
    current: &mut Vec<VertexId>,
    used: &mut [bool],
    best: &mut Option<Vec<Vec<usize>>>,
) {
    let Some(members) = classes.get(class) else {
        let m: Vec<Vec<usize>> = current
            .iter()
            .map(|&a| current.iter().map(|&b| g.multiplicity(a, b)).collect())
            .collect();
        if best.as_ref().is_none_or(|b| m < *b) {
            *best = Some(m);
        }
        return;
    };
    let placed = current.len() - classes[..class].iter().map(Vec::len).sum::<usize>();
    if placed == members.len() {
        search(g, classes, class + 1, current, used, best);
        return;
    }
    for &v in members {
        if used[v.index()] {
            continue;
        }
        used[v.index()] = true;
        current.push(v);
        search(g, classes, class, current, used, best);
        current.pop();
        used[v.index()] = false;
    }
}

/// First differing field, in the order nu, lambda_spectrum, m_ell_sizes,
/// neutral_fixed_vector, xi_profile, weighted_contracted.
pub fn compare(f1: &InvariantFingerprint, f2: &InvariantFingerprint) -> Result<Verdict> {
    if f1.truncation != f2.truncation {
        return Err(Error::TruncationMismatch(f1.truncation, f2.truncation));
    }
    fn json<T: Serialize>(x: &T) -> String {
        serde_json::to_string(x).expect("fingerprint fields serialise")
    }
    let fields: [(&'static str, String, String); 6] = [
        ("nu", json(&f1.nu), json(&f2.nu)),
        (
            "lambda_spectrum",
            json(&f1.lambda_spectrum),
            json(&f2.lambda_spectrum),
        ),
        ("m_ell_sizes", json(&f1.m_ell_sizes), json(&f2.m_ell_sizes)),
        (
            "neutral_fixed_vector",
            json(&f1.neutral_fixed_vector),
            json(&f2.neutral_fixed_vector),
        ),
        ("xi_profile", json(&f1.xi_profile), json(&f2.xi_profile)),
        (
            "weighted_contracted",
            json(&f1.weighted_contracted),
            json(&f2.weighted_contracted),
        ),
    ];
    for (field, left, right) in fields {
        if left != right {
            return Ok(Verdict::Distinguished { field, left, right });
        }
    }
    Ok(Verdict::InvariantsAgree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::graph;

    fn d(n: usize) -> DirectedMultigraph {
        let names: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
        let edges: Vec<(&str, &str, &str)> = names.iter().map(|s| (s.as_str(), "V", "V")).collect();
        graph(&["V"], &edges)
    }

    fn fib() -> DirectedMultigraph {
        graph(
            &["V0", "V1"],
            &[("e1", "V0", "V0"), ("f", "V0", "V1"), ("e2", "V1", "V0")],
        )
    }

    #[test]
    fn dyck_two_fingerprint() {
        let f = fingerprint(&d(2), 6).unwrap();
        assert_eq!(f.nu, 2);
        assert_eq!(f.lambda_spectrum, vec![Some(1), Some(1)]);
        assert_eq!(f.weighted_contracted.adjacency, vec![vec![2]]);
    }

    #[test]
    fn fibonacci_spectrum() {
        let f = fingerprint(&fib(), 6).unwrap();
        assert_eq!(f.lambda_spectrum, vec![Some(1), Some(2)]);
    }

    #[test]
    fn compare_order() {
        let v = compare(
            &fingerprint(&d(2), 6).unwrap(),
            &fingerprint(&d(3), 6).unwrap(),
        )
        .unwrap();
        assert!(matches!(v, Verdict::Distinguished { field: "nu", .. }));
        let v = compare(
            &fingerprint(&d(2), 6).unwrap(),
            &fingerprint(&fib(), 6).unwrap(),
        )
        .unwrap();
        match v {
            Verdict::Distinguished { field, left, right } => {
                assert_eq!(field, "lambda_spectrum");
                assert_eq!((left.as_str(), right.as_str()), ("[1,1]", "[1,2]"));
            }
            v => panic!("{v:?}"),
        }
        let f = fingerprint(&fib(), 6).unwrap();
        assert_eq!(compare(&f, &f).unwrap(), Verdict::InvariantsAgree);
        let g = fingerprint(&fib(), 5).unwrap();
        assert!(matches!(
            compare(&f, &g),
            Err(Error::TruncationMismatch(6, 5))
        ));
    }

    #[test]
    fn renaming_and_reordering_do_not_matter() {
        let g = graph(
            &["A", "B"],
            &[
                ("x", "A", "B"),
                ("y", "A", "B"),
                ("u", "B", "A"),
                ("v", "B", "A"),
                ("l", "A", "A"),
            ],
        );
        let h = graph(
            &["q", "p"],
            &[
                ("l", "p", "p"),
                ("v", "q", "p"),
                ("u", "q", "p"),
                ("y", "p", "q"),
                ("x", "p", "q"),
            ],
        );
        assert_eq!(fingerprint(&g, 6).unwrap(), fingerprint(&h, 6).unwrap());
    }
}
