use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

use super::{build_family_iii, CanonicalParams, FamilyIIIParams, FamilyIIParams, FamilyIParams};
use crate::dynamics::{count_tables_dp, multiplier_lambda, CountTable};
use crate::error::{Error, Result};
use crate::graph::{
    contracting_forest, is_isomorphic, ContractionData, DirectedMultigraph, EdgeId,
};
use crate::invariants::{compare, fingerprint, Verdict, DEFAULT_TRUNCATION};

/// A single contracting tree (or a single vertex) gives a Dyck inverse monoid.
pub fn is_dyck_monoid(cd: &ContractionData) -> bool {
    cd.roots.len() == 1
}

/// Table horizon that lets every classifier run on `g`.
pub fn horizon_for_classification(g: &DirectedMultigraph, cd: &ContractionData) -> usize {
    let lam = multiplier_lambda(g, cd);
    let max = lam.values().map(|l| l.unwrap_or(0)).max().unwrap_or(0);
    (max + 4).max(4)
}

/// Multiplier thresholds read from the table, checked against the forest.
fn table_lambda(
    g: &DirectedMultigraph,
    cd: &ContractionData,
    ct: &CountTable,
) -> Result<BTreeMap<EdgeId, usize>> {
    let structural = multiplier_lambda(g, cd);
    let mut out = BTreeMap::new();
    for (&e, &lam) in &structural {
        let lam = lam.ok_or_else(|| {
            Error::Internal(format!(
                "edge `{}` has no multiplier in a single-tree graph",
                g.edge_name(e)
            ))
        })?;
        if ct.n_max < lam {
            return Err(Error::Horizon {
                have: ct.n_max,
                need: lam,
            });
        }
        if ct.lambda_min[&e] != Some(lam) {
            return Err(Error::Internal(format!(
                "edge `{}`: counted multiplier threshold {:?}, forest gives {lam}",
                g.edge_name(e),
                ct.lambda_min[&e]
            )));
        }
        out.insert(e, lam);
    }
    Ok(out)
}

/// Half the number of neutral points of least period 2.
fn half_neutral_two(ct: &CountTable) -> Result<BigUint> {
    let two = &ct.neutral_least[2];
    if two.bit(0) {
        return Err(Error::Internal(format!(
            "odd count {two} of neutral 2-points"
        )));
    }
    Ok(two >> 1)
}

pub fn classify_i(
    g: &DirectedMultigraph,
    cd: &ContractionData,
    ct: &CountTable,
) -> Result<Option<FamilyIParams>> {
    if ct.n_max < 2 {
        return Err(Error::Horizon {
            have: ct.n_max,
            need: 2,
        });
    }
    if !is_dyck_monoid(cd) {
        return Ok(None);
    }
    let lam = table_lambda(g, cd, ct)?;
    let mut s: BTreeMap<usize, usize> = BTreeMap::new();
    for &l in lam.values() {
        *s.entry(l).or_default() += 1;
    }
    let nu = lam.len();
    let rhs = nu + s.iter().map(|(&l, &c)| (l - 1) * c).sum::<usize>();
    if half_neutral_two(ct)? != BigUint::from(rhs) {
        return Ok(None);
    }
    FamilyIParams::new(s).map(Some)
}

pub fn classify_ii(
    g: &DirectedMultigraph,
    cd: &ContractionData,
    ct: &CountTable,
) -> Result<Option<FamilyIIParams>> {
    if !is_dyck_monoid(cd) {
        return Ok(None);
    }
    let structural = multiplier_lambda(g, cd);
    if structural.values().any(|l| l.is_none_or(|l| l > 2)) {
        return Ok(None);
    }
    if ct.n_max < 4 {
        return Err(Error::Horizon {
            have: ct.n_max,
            need: 4,
        });
    }
    let lam = table_lambda(g, cd, ct)?;
    let r = lam.values().filter(|&&l| l == 1).count();
    let nu = lam.len();
    // The root degree term balances with orbit counts of neutral 2-points.
    let d = BigUint::from(r) + half_neutral_two(ct)? - BigUint::from(nu);
    let mut census: BTreeMap<usize, usize> = BTreeMap::new();
    for (&e, _) in lam.iter().filter(|(_, &l)| l == 2) {
        let xi = ct.xi(e, 4);
        if xi <= d {
            return Err(Error::Internal(format!(
                "edge `{}`: Ξ₄ = {xi} does not exceed the root term {d}",
                g.edge_name(e)
            )));
        }
        let m: usize = (xi - &d)
            .try_into()
            .map_err(|_| Error::Internal("return count overflow".into()))?;
        *census.entry(m).or_default() += 1;
    }
    let mut q = BTreeMap::new();
    for (m, count) in census {
        if count % m != 0 {
            return Err(Error::Internal(format!(
                "{count} edges report {m} returns per leaf, not a multiple of {m}"
            )));
        }
        q.insert(m, count / m);
    }
    FamilyIIParams::new(r, q).map(Some)
}

/// Statistics compared against the model: neutral 2- and 4-points, and the
/// per-edge multiplier orbit counts at `Λ + 2` and `Λ + 4`.
#[derive(Debug, PartialEq, Eq)]
struct ModelStats {
    neutral_two: BigUint,
    neutral_four: BigUint,
    xi_plus_two: Vec<BigUint>,
    xi_plus_four: Vec<BigUint>,
}

fn model_stats(ct: &CountTable, lam: usize) -> ModelStats {
    let sorted = |n: usize| {
        let mut v: Vec<BigUint> = ct
            .orbits_by_multiplier
            .values()
            .map(|x| x[n].clone())
            .collect();
        v.sort();
        v
    };
    ModelStats {
        neutral_two: ct.neutral_least[2].clone(),
        neutral_four: ct.neutral_least[4].clone(),
        xi_plus_two: sorted(lam + 2),
        xi_plus_four: sorted(lam + 4),
    }
}

/// Requires a single tree, a common threshold `Λ > 4` and even `ν`, then
/// matches the four statistics against the enumerated model `G[Λ, ν/2]`.
pub fn classify_iii(
    g: &DirectedMultigraph,
    cd: &ContractionData,
    ct: &CountTable,
) -> Result<Option<FamilyIIIParams>> {
    if !is_dyck_monoid(cd) {
        return Ok(None);
    }
    let structural = multiplier_lambda(g, cd);
    let mut values = structural.values();
    let first = match values.next() {
        Some(Some(l)) => *l,
        _ => return Ok(None),
    };
    if values.any(|&l| l != Some(first)) || first <= 4 {
        return Ok(None);
    }
    let nu = structural.len();
    if !nu.is_multiple_of(2) {
        return Ok(None);
    }
    if ct.n_max < first + 4 {
        return Err(Error::Horizon {
            have: ct.n_max,
            need: first + 4,
        });
    }
    table_lambda(g, cd, ct)?;
    let params = FamilyIIIParams::new(first, nu / 2)?;
    let model = build_family_iii(&params)?;
    let model_cd = contracting_forest(&model)?;
    let model_ct = count_tables_dp(&model, &model_cd, first + 4)?;
    if model_stats(ct, first) == model_stats(&model_ct, first) {
        Ok(Some(params))
    } else {
        Ok(None)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub family_i: Option<FamilyIParams>,
    pub family_ii: Option<FamilyIIParams>,
    pub family_iii: Option<FamilyIIIParams>,
}

impl Classification {
    pub fn matches(&self) -> Vec<CanonicalParams> {
        let mut out = Vec::new();
        if let Some(p) = &self.family_i {
            out.push(CanonicalParams::I(p.clone()));
        }
        if let Some(p) = &self.family_ii {
            out.push(CanonicalParams::II(p.clone()));
        }
        if let Some(p) = self.family_iii {
            out.push(CanonicalParams::III(p));
        }
        out
    }
}

/// Runs all three classifiers with a sufficient table horizon.
pub fn classify(g: &DirectedMultigraph) -> Result<Classification> {
    let cd = contracting_forest(g)?;
    if !is_dyck_monoid(&cd) {
        return Ok(Classification::default());
    }
    let ct = count_tables_dp(g, &cd, horizon_for_classification(g, &cd))?;
    Ok(Classification {
        family_i: classify_i(g, &cd, &ct)?,
        family_ii: classify_ii(g, &cd, &ct)?,
        family_iii: classify_iii(g, &cd, &ct)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ConjugacyVerdict {
    Conjugate {
        params: CanonicalParams,
        /// Vertex bijection as `(vertex of g1, vertex of g2)` pairs.
        isomorphism: Vec<(String, String)>,
    },
    NotConjugate {
        reason: String,
    },
    Undecided {
        reason: String,
    },
}

pub fn decide_conjugacy_in_family(
    g1: &DirectedMultigraph,
    g2: &DirectedMultigraph,
) -> Result<ConjugacyVerdict> {
    let c1 = classify(g1)?;
    let c2 = classify(g2)?;
    let pairs = [
        (
            "I",
            c1.family_i.clone().map(CanonicalParams::I),
            c2.family_i.clone().map(CanonicalParams::I),
        ),
        (
            "II",
            c1.family_ii.clone().map(CanonicalParams::II),
            c2.family_ii.clone().map(CanonicalParams::II),
        ),
        (
            "III",
            c1.family_iii.map(CanonicalParams::III),
            c2.family_iii.map(CanonicalParams::III),
        ),
    ];
    for (tag, p1, p2) in &pairs {
        if let (Some(p1), Some(p2)) = (p1, p2) {
            if p1 != p2 {
                return Ok(ConjugacyVerdict::NotConjugate {
                    reason: format!("family {tag} parameters differ: `{p1}` vs `{p2}`"),
                });
            }
            return Ok(match is_isomorphic(g1, g2) {
                Some(map) => ConjugacyVerdict::Conjugate {
                    params: p1.clone(),
                    isomorphism: g1
                        .vertices()
                        .map(|v| {
                            (
                                g1.vertex_name(v).to_string(),
                                g2.vertex_name(map[v.index()]).to_string(),
                            )
                        })
                        .collect(),
                },
                None => ConjugacyVerdict::Undecided {
                    reason: format!("both classify as `{p1}` but the graphs are not isomorphic"),
                },
            });
        }
    }
    for (tag, p1, p2) in &pairs {
        if p1.is_some() != p2.is_some() {
            return Ok(ConjugacyVerdict::NotConjugate {
                reason: format!(
                    "only the {} graph satisfies the family {tag} conditions",
                    if p1.is_some() { "first" } else { "second" }
                ),
            });
        }
    }
    let f1 = fingerprint(g1, DEFAULT_TRUNCATION)?;
    let f2 = fingerprint(g2, DEFAULT_TRUNCATION)?;
    Ok(match compare(&f1, &f2)? {
        Verdict::Distinguished { field, left, right } => ConjugacyVerdict::NotConjugate {
            reason: format!("invariant `{field}` differs: {left} vs {right}"),
        },
        Verdict::InvariantsAgree => ConjugacyVerdict::Undecided {
            reason: "invariants agree up to the truncation; agreement is not a proof".into(),
        },
    })
}
