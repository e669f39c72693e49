use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::graph::{DirectedMultigraph, EdgeId, VertexId};
use crate::series::FormalPowerSeries;

/// Words with product `1_V` never have a nonempty up path in any prefix, so
/// the reachable prefixes are exactly the down paths from `V`.
fn return_walk(
    v: VertexId,
    g: &DirectedMultigraph,
    n_max: usize,
    first_return: bool,
) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); n_max + 1];
    out[0] = BigUint::one();
    let mut layer: HashMap<Vec<EdgeId>, BigUint> = HashMap::new();
    layer.insert(Vec::new(), BigUint::one());
    for n in 1..=n_max {
        let mut next: HashMap<Vec<EdgeId>, BigUint> = HashMap::new();
        for (down, c) in &layer {
            let end = down.last().map_or(v, |&e| g.tgt(e));
            for &e in g.out_edges(end) {
                let mut d = down.clone();
                d.push(e);
                *next.entry(d).or_insert_with(BigUint::zero) += c;
            }
            if let Some((_, rest)) = down.split_last() {
                *next.entry(rest.to_vec()).or_insert_with(BigUint::zero) += c;
            }
        }
        if let Some(c) = next.get(&Vec::new()) {
            out[n] = c.clone();
            if first_return {
                next.remove(&Vec::new());
            }
        }
        // prune paths too long to be cancelled in the remaining letters
        next.retain(|d, _| d.len() <= n_max - n);
        layer = next;
    }
    out
}

/// `φ_V`: the generating function of the circular code at `V`, the words
/// whose product is `1_V` while no proper prefix product is.
pub fn circular_code_coefficients(
    v: VertexId,
    g: &DirectedMultigraph,
    n_max: usize,
) -> FormalPowerSeries {
    let mut c = return_walk(v, g, n_max, true);
    c[0] = BigUint::zero();
    FormalPowerSeries::from_integers(c, n_max)
}

/// Number of words of each length with product exactly `1_V` (the empty word
/// counts once).
pub fn idempotent_return_counts(v: VertexId, g: &DirectedMultigraph, n_max: usize) -> Vec<BigUint> {
    return_walk(v, g, n_max, false)
}

/// `∏_V 1/(1 − φ_V)` truncated at `n_max`.
pub fn neutral_zeta_product(g: &DirectedMultigraph, n_max: usize) -> Result<FormalPowerSeries> {
    let one = FormalPowerSeries::one(n_max);
    let mut acc = one.clone();
    for v in g.vertices() {
        let phi = circular_code_coefficients(v, g, n_max);
        acc = acc.mul(&one.sub(&phi)?.reciprocal()?)?;
    }
    Ok(acc)
}
