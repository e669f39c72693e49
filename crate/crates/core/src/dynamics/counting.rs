use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::analyze_periodic_word;
use crate::error::{Error, Result};
use crate::graph::{ContractionData, DirectedMultigraph, EdgeId, VertexId};
use crate::semigroup::{classify_powers, Element, Letter, PowerClass};

/// Default bound on the number of distinct elements per word length.
pub const DEFAULT_STATE_CAP: usize = 4_000_000;

/// Periodic point statistics up to `n_max`. Every vector is indexed by the
/// period `n` and has length `n_max + 1`; entry 0 is unused.
///
/// `*_fixed` entries count points fixed by `Sⁿ`, `*_least` entries count
/// points of least period `n`, `orbits_*` entries count orbits of least
/// period `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub n_max: usize,
    pub fixed_points: Vec<BigUint>,
    pub orbits_least: Vec<BigUint>,
    pub neutral_fixed: Vec<BigUint>,
    pub neutral_least: Vec<BigUint>,
    pub neutral_by_root: BTreeMap<VertexId, Vec<BigUint>>,
    pub multiplier_fixed: BTreeMap<EdgeId, Vec<BigUint>>,
    pub orbits_by_multiplier: BTreeMap<EdgeId, Vec<BigUint>>,
    /// Smallest `n ≤ n_max` with a multiplier orbit, `None` if there is none
    /// up to `n_max`.
    pub lambda_min: BTreeMap<EdgeId, Option<usize>>,
    pub m_ell: BTreeMap<usize, Vec<EdgeId>>,
}

impl CountTable {
    /// `½·I⁰_n` style helper: neutral orbits of least period `n`.
    pub fn neutral_orbits(&self, n: usize) -> BigUint {
        &self.neutral_least[n] / BigUint::from(n)
    }

    pub fn xi(&self, e: EdgeId, n: usize) -> BigUint {
        self.orbits_by_multiplier
            .get(&e)
            .map_or_else(BigUint::zero, |v| v[n].clone())
    }

    pub fn to_json(&self, g: &DirectedMultigraph) -> CountTableJson {
        let dec = |v: &[BigUint]| v.iter().map(|c| c.to_str_radix(10)).collect::<Vec<_>>();
        CountTableJson {
            schema: "mdshift.count_table/1",
            n_max: self.n_max,
            fixed_points: dec(&self.fixed_points),
            orbits_least: dec(&self.orbits_least),
            neutral_fixed: dec(&self.neutral_fixed),
            neutral_least: dec(&self.neutral_least),
            neutral_by_root: self
                .neutral_by_root
                .iter()
                .map(|(&r, v)| (g.vertex_name(r).to_string(), dec(v)))
                .collect(),
            multiplier_fixed: self
                .multiplier_fixed
                .iter()
                .map(|(&e, v)| (g.edge_name(e).to_string(), dec(v)))
                .collect(),
            orbits_by_multiplier: self
                .orbits_by_multiplier
                .iter()
                .map(|(&e, v)| (g.edge_name(e).to_string(), dec(v)))
                .collect(),
            lambda_min: self
                .lambda_min
                .iter()
                .map(|(&e, &l)| (g.edge_name(e).to_string(), l))
                .collect(),
            m_ell: self
                .m_ell
                .iter()
                .map(|(&l, es)| (l, es.iter().map(|&e| g.edge_name(e).to_string()).collect()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CountTableJson {
    pub schema: &'static str,
    pub n_max: usize,
    pub fixed_points: Vec<String>,
    pub orbits_least: Vec<String>,
    pub neutral_fixed: Vec<String>,
    pub neutral_least: Vec<String>,
    pub neutral_by_root: BTreeMap<String, Vec<String>>,
    pub multiplier_fixed: BTreeMap<String, Vec<String>>,
    pub orbits_by_multiplier: BTreeMap<String, Vec<String>>,
    pub lambda_min: BTreeMap<String, Option<usize>>,
    pub m_ell: BTreeMap<usize, Vec<String>>,
}

/// The multiplier threshold of every kept edge read off the contracting
/// forest: a kept edge returning to the root of its own tree closes a cycle
/// of length `level(s(e)) + 1`; any other kept edge never carries a pure
/// multiplier.
pub fn multiplier_lambda(
    g: &DirectedMultigraph,
    cd: &ContractionData,
) -> BTreeMap<EdgeId, Option<usize>> {
    cd.kept_edges()
        .map(|e| {
            let s = g.src(e);
            let lam = (cd.tree_of[s.index()] == g.tgt(e)).then(|| cd.level(s) + 1);
            (e, lam)
        })
        .collect()
}

fn mobius(n: usize) -> i32 {
    let mut m = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if m > 1 {
        result = -result;
    }
    result
}

fn least_from_fixed(fixed: &[BigUint]) -> Result<Vec<BigUint>> {
    let mut out = vec![BigUint::zero(); fixed.len()];
    for n in 1..fixed.len() {
        let mut acc = BigInt::zero();
        for d in (1..=n).filter(|d| n % d == 0) {
            match mobius(n / d) {
                1 => acc += BigInt::from(fixed[d].clone()),
                -1 => acc -= BigInt::from(fixed[d].clone()),
                _ => {}
            }
        }
        if acc.is_negative() {
            return Err(Error::Internal(format!(
                "negative least-period count at n = {n}"
            )));
        }
        out[n] = acc.to_biguint().expect("nonnegative");
    }
    Ok(out)
}

fn orbits_from_least(least: &[BigUint]) -> Result<Vec<BigUint>> {
    let mut out = vec![BigUint::zero(); least.len()];
    for n in 1..least.len() {
        let nn = BigUint::from(n);
        if !(&least[n] % &nn).is_zero() {
            return Err(Error::Internal(format!(
                "{} points of least period {n} do not split into orbits",
                least[n]
            )));
        }
        out[n] = &least[n] / nn;
    }
    Ok(out)
}

/// Raw per-length totals, before the derived fields are filled in.
struct Raw {
    n_max: usize,
    fixed: Vec<BigUint>,
    neutral_fixed: Vec<BigUint>,
    by_root: BTreeMap<VertexId, Vec<BigUint>>,
    mult_fixed: BTreeMap<EdgeId, Vec<BigUint>>,
    /// Least-period counts when they were observed directly.
    least: Option<LeastRaw>,
}

struct LeastRaw {
    points: Vec<BigUint>,
    neutral: Vec<BigUint>,
    mult: BTreeMap<EdgeId, Vec<BigUint>>,
}

impl Raw {
    fn new(cd: &ContractionData, n_max: usize, with_least: bool) -> Self {
        let zeros = vec![BigUint::zero(); n_max + 1];
        let mult: BTreeMap<EdgeId, Vec<BigUint>> =
            cd.kept_edges().map(|e| (e, zeros.clone())).collect();
        Raw {
            n_max,
            fixed: zeros.clone(),
            neutral_fixed: zeros.clone(),
            by_root: cd.roots.iter().map(|&r| (r, zeros.clone())).collect(),
            mult_fixed: mult.clone(),
            least: with_least.then(|| LeastRaw {
                points: zeros.clone(),
                neutral: zeros.clone(),
                mult,
            }),
        }
    }

    fn merge(&mut self, other: Raw) {
        fn add(a: &mut [BigUint], b: &[BigUint]) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        fn add_map<K: Ord>(a: &mut BTreeMap<K, Vec<BigUint>>, b: &BTreeMap<K, Vec<BigUint>>) {
            for (k, v) in b {
                add(a.get_mut(k).expect("same keys"), v);
            }
        }
        add(&mut self.fixed, &other.fixed);
        add(&mut self.neutral_fixed, &other.neutral_fixed);
        add_map(&mut self.by_root, &other.by_root);
        add_map(&mut self.mult_fixed, &other.mult_fixed);
        if let (Some(a), Some(b)) = (self.least.as_mut(), other.least.as_ref()) {
            add(&mut a.points, &b.points);
            add(&mut a.neutral, &b.neutral);
            add_map(&mut a.mult, &b.mult);
        }
    }

    fn finish(self) -> Result<CountTable> {
        let (least_points, neutral_least, mult_least) = match self.least {
            Some(l) => (l.points, l.neutral, l.mult),
            None => {
                let mut mult = BTreeMap::new();
                for (&e, v) in &self.mult_fixed {
                    mult.insert(e, least_from_fixed(v)?);
                }
                (
                    least_from_fixed(&self.fixed)?,
                    least_from_fixed(&self.neutral_fixed)?,
                    mult,
                )
            }
        };
        let total: BigUint = self
            .by_root
            .values()
            .map(|v| v.iter().sum::<BigUint>())
            .sum();
        if total != self.neutral_fixed.iter().sum::<BigUint>() {
            return Err(Error::Internal(
                "per-root neutral counts do not add up".into(),
            ));
        }
        let orbits_least = orbits_from_least(&least_points)?;
        let mut orbits_by_multiplier = BTreeMap::new();
        let mut lambda_min = BTreeMap::new();
        let mut m_ell: BTreeMap<usize, Vec<EdgeId>> = BTreeMap::new();
        for (&e, v) in &mult_least {
            let orbits = orbits_from_least(v)?;
            let lam = (1..=self.n_max).find(|&n| !orbits[n].is_zero());
            if let Some(l) = lam {
                m_ell.entry(l).or_default().push(e);
            }
            lambda_min.insert(e, lam);
            orbits_by_multiplier.insert(e, orbits);
        }
        Ok(CountTable {
            n_max: self.n_max,
            fixed_points: self.fixed,
            orbits_least,
            neutral_fixed: self.neutral_fixed,
            neutral_least,
            neutral_by_root: self.by_root,
            multiplier_fixed: self.mult_fixed,
            orbits_by_multiplier,
            lambda_min,
            m_ell,
        })
    }
}

pub fn count_tables_dp(
    g: &DirectedMultigraph,
    cd: &ContractionData,
    n_max: usize,
) -> Result<CountTable> {
    count_tables_dp_with_cap(g, cd, n_max, DEFAULT_STATE_CAP)
}

/// Counts words by their product: the state after `n` letters is the map
/// element → number of words of length `n` with that product.
pub fn count_tables_dp_with_cap(
    g: &DirectedMultigraph,
    cd: &ContractionData,
    n_max: usize,
    cap: usize,
) -> Result<CountTable> {
    let alphabet = Letter::alphabet(g);
    let mut raw = Raw::new(cd, n_max, false);
    let mut layer: Vec<(Element, BigUint)> = vec![(Element::Identity, BigUint::from(1u8))];
    for n in 1..=n_max {
        let next: HashMap<Element, BigUint> = layer
            .par_iter()
            .fold(HashMap::new, |mut m, (x, c)| {
                for &l in &alphabet {
                    let y = x.push(l, g);
                    if !y.is_zero() {
                        *m.entry(y).or_insert_with(BigUint::zero) += c;
                    }
                }
                m
            })
            .reduce(HashMap::new, |mut a, b| {
                if a.len() < b.len() {
                    return merge_into(b, a);
                }
                for (k, v) in b {
                    *a.entry(k).or_insert_with(BigUint::zero) += v;
                }
                a
            });
        if next.len() > cap {
            return Err(Error::StateCap { n, cap });
        }
        layer = next.into_iter().collect();
        for (x, c) in &layer {
            match classify_powers(x, g) {
                PowerClass::Nilpotent => {}
                PowerClass::UpExcess(_) => raw.fixed[n] += c,
                PowerClass::Idempotent => {
                    raw.fixed[n] += c;
                    raw.neutral_fixed[n] += c;
                    let base = x.as_nf().expect("nonempty word").base;
                    raw.by_root.get_mut(&cd.tree_of[base.index()]).unwrap()[n] += c;
                }
                PowerClass::DownExcess(cycle) => {
                    raw.fixed[n] += c;
                    let mut kept = cycle.iter().filter(|&&e| !cd.is_tree_edge(e));
                    let first = *kept.next().expect("a cycle leaves its tree");
                    if kept.all(|&e| e == first) {
                        raw.mult_fixed.get_mut(&first).unwrap()[n] += c;
                    }
                }
            }
        }
    }
    raw.finish()
}

fn merge_into(
    mut big: HashMap<Element, BigUint>,
    small: HashMap<Element, BigUint>,
) -> HashMap<Element, BigUint> {
    for (k, v) in small {
        *big.entry(k).or_insert_with(BigUint::zero) += v;
    }
    big
}

/// Exhaustive oracle: enumerates every admissible word and analyses each
/// periodic point through its rotations.
pub fn count_tables_naive(
    g: &DirectedMultigraph,
    cd: &ContractionData,
    n_max: usize,
) -> Result<CountTable> {
    let alphabet = Letter::alphabet(g);
    let parts: Vec<Result<Raw>> = alphabet
        .par_iter()
        .map(|&first| {
            let mut raw = Raw::new(cd, n_max, true);
            let mut err = None;
            for n in 1..=n_max {
                super::for_each_admissible_word(g, n, Some(first), |letters| {
                    if err.is_some() {
                        return;
                    }
                    let w = crate::semigroup::Word::new(letters.to_vec());
                    let info = match analyze_periodic_word(&w, g, cd) {
                        Ok(i) => i,
                        Err(e) => {
                            err = Some(e);
                            return;
                        }
                    };
                    if !info.is_point {
                        return;
                    }
                    let least = info.least_period == n;
                    let one = BigUint::from(1u8);
                    let lr = raw.least.as_mut().unwrap();
                    raw.fixed[n] += &one;
                    if least {
                        lr.points[n] += &one;
                    }
                    if let Some(r) = info.neutral_root {
                        raw.neutral_fixed[n] += &one;
                        raw.by_root.get_mut(&r).unwrap()[n] += &one;
                        if least {
                            lr.neutral[n] += &one;
                        }
                    }
                    if let Some((e, _)) = info.negative_multiplier {
                        raw.mult_fixed.get_mut(&e).unwrap()[n] += &one;
                        if least {
                            lr.mult.get_mut(&e).unwrap()[n] += &one;
                        }
                    }
                });
                if let Some(e) = err.take() {
                    return Err(e);
                }
            }
            Ok(raw)
        })
        .collect();
    let mut total = Raw::new(cd, n_max, true);
    for part in parts {
        total.merge(part?);
    }
    total.finish()
}
