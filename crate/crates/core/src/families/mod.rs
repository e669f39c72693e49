//! Canonical graph families, their classifiers and the formula verifier.

mod classify;
mod verify;

pub use classify::{
    classify, classify_i, classify_ii, classify_iii, decide_conjugacy_in_family,
    horizon_for_classification, is_dyck_monoid, Classification, ConjugacyVerdict,
};
pub use verify::{verify_lemma_formulas, Convention, ConventionRow, FormulaCheck, LemmaReport};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DirectedMultigraph, GraphBuilder};

/// Largest graph a builder will produce.
pub const MAX_MODEL_EDGES: usize = 100_000;

/// Return-path counts: `s[ℓ]` returns of length `ℓ` to the single root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct FamilyIParams {
    pub s: BTreeMap<usize, usize>,
}

/// `r` root loops, and `q[M]` level-one leaves with `M` return edges each.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct FamilyIIParams {
    pub r: usize,
    pub q: BTreeMap<usize, usize>,
}

/// Two chains of length `ell − 1` from the root with `m` returns per leaf.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FamilyIIIParams {
    pub ell: usize,
    pub m: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuxVariant {
    /// Stem of length `L`, split in two, each branch fanning out to `M` chains.
    TwoThenM,
    /// Stem of length `L`, fanning out to `M` branches that each split in two.
    MThenTwo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AuxParams {
    pub variant: AuxVariant,
    pub ell: usize,
    pub l: usize,
    pub m: usize,
}

impl FamilyIParams {
    pub fn new(s: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let p = FamilyIParams {
            s: s.into_iter().filter(|&(_, c)| c > 0).collect(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.s.keys().any(|&l| l == 0) {
            return Err(Error::InvalidParams("return lengths start at 1".into()));
        }
        let total: usize = self.s.values().sum();
        if total < 2 {
            return Err(Error::InvalidParams(format!(
                "need at least two return paths, got {total}"
            )));
        }
        let edges = self
            .s
            .iter()
            .try_fold(0usize, |acc, (&l, &c)| acc.checked_add(l.checked_mul(c)?));
        check_size(edges)
    }
}

impl FamilyIIParams {
    pub fn new(r: usize, q: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let p = FamilyIIParams {
            r,
            q: q.into_iter().filter(|&(_, c)| c > 0).collect(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.q.keys().any(|&m| m == 0) {
            return Err(Error::InvalidParams(
                "leaves need at least one return edge".into(),
            ));
        }
        let total = self.q.values().fold(self.r, |a, &b| a.saturating_add(b));
        if total < 2 {
            return Err(Error::InvalidParams(format!(
                "need r + Σ q > 1, got {total}"
            )));
        }
        let edges = self.q.iter().try_fold(self.r, |acc, (&m, &c)| {
            acc.checked_add(c.checked_mul(m.checked_add(1)?)?)
        });
        check_size(edges)
    }
}

impl FamilyIIIParams {
    pub fn new(ell: usize, m: usize) -> Result<Self> {
        let p = FamilyIIIParams { ell, m };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ell < 2 || self.m < 1 {
            return Err(Error::InvalidParams(format!(
                "need ell ≥ 2 and m ≥ 1, got ell = {}, m = {}",
                self.ell, self.m
            )));
        }
        check_size(
            self.ell
                .checked_mul(2)
                .and_then(|x| x.checked_add(self.m.checked_mul(2)?)),
        )
    }
}

impl AuxParams {
    pub fn new(variant: AuxVariant, ell: usize, l: usize, m: usize) -> Result<Self> {
        let p = AuxParams { variant, ell, l, m };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ell < 4 || self.l + 2 >= self.ell || self.m < 1 {
            return Err(Error::InvalidParams(format!(
                "need ell ≥ 4, l < ell − 2 and m ≥ 1, got ell = {}, l = {}, m = {}",
                self.ell, self.l, self.m
            )));
        }
        check_size(self.ell.checked_mul(self.m).and_then(|x| x.checked_mul(2)))
    }
}

fn check_size(edges: Option<usize>) -> Result<()> {
    match edges {
        Some(e) if e <= MAX_MODEL_EDGES => Ok(()),
        _ => Err(Error::InvalidParams(format!(
            "model would exceed {MAX_MODEL_EDGES} edges"
        ))),
    }
}

pub fn build_family_i(p: &FamilyIParams) -> Result<DirectedMultigraph> {
    p.validate()?;
    let mut b = GraphBuilder::new();
    b.vertex("V0");
    for (&l, &count) in &p.s {
        for s in 1..=count {
            if l == 1 {
                b.edge(format!("e_1.{s}"), "V0", "V0");
                continue;
            }
            let mut prev = "V0".to_string();
            for t in 1..l {
                let v = format!("V_{l}.{s}.{t}");
                b.vertex(v.clone());
                b.edge(format!("f_{l}.{s}.{t}"), prev, v.clone());
                prev = v;
            }
            b.edge(format!("e_{l}.{s}"), prev, "V0");
        }
    }
    b.build()
}

pub fn build_family_ii(p: &FamilyIIParams) -> Result<DirectedMultigraph> {
    p.validate()?;
    let mut b = GraphBuilder::new();
    b.vertex("V(0)");
    for r in 1..=p.r {
        b.edge(format!("e_{r}"), "V(0)", "V(0)");
    }
    for (&m, &count) in &p.q {
        for q in 1..=count {
            let leaf = format!("V_{m}.{q}(1)");
            b.vertex(leaf.clone());
            b.edge(format!("f_{m}.{q}"), "V(0)", leaf.clone());
            for k in 1..=m {
                b.edge(format!("e_{m}.{q}.{k}"), leaf.clone(), "V(0)");
            }
        }
    }
    b.build()
}

pub fn build_family_iii(p: &FamilyIIIParams) -> Result<DirectedMultigraph> {
    p.validate()?;
    let mut b = GraphBuilder::new();
    b.vertex("V(0)");
    for side in 0..2 {
        let mut prev = "V(0)".to_string();
        for l in 1..p.ell {
            let v = format!("V{side}({l})");
            b.vertex(v.clone());
            b.edge(format!("f{side}({l})"), prev, v.clone());
            prev = v;
        }
        for m in 1..=p.m {
            b.edge(format!("e{side}({m})"), prev.clone(), "V(0)");
        }
    }
    b.build()
}

pub fn build_aux(p: &AuxParams) -> Result<DirectedMultigraph> {
    p.validate()?;
    let (ell, big_l, big_m) = (p.ell, p.l, p.m);
    let mut b = GraphBuilder::new();
    b.vertex("V(0)");
    for l in 1..=big_l {
        b.vertex(format!("V({l})"));
        b.edge(
            format!("f({l})"),
            format!("V({})", l - 1),
            format!("V({l})"),
        );
    }
    let stem = format!("V({big_l})");
    // start vertex of chain (side, m) at level L + 1
    let mut starts: Vec<(usize, usize, String)> = Vec::new();
    match p.variant {
        AuxVariant::TwoThenM => {
            for side in 0..2 {
                let v = format!("V{side}({})", big_l + 1);
                b.vertex(v.clone());
                b.edge(format!("f{side}({})", big_l + 1), stem.clone(), v.clone());
                for m in 1..=big_m {
                    starts.push((side, m, v.clone()));
                }
            }
        }
        AuxVariant::MThenTwo => {
            for m in 1..=big_m {
                let v = format!("V({},{m})", big_l + 1);
                b.vertex(v.clone());
                b.edge(format!("f({},{m})", big_l + 1), stem.clone(), v.clone());
                for side in 0..2 {
                    starts.push((side, m, v.clone()));
                }
            }
        }
    }
    for (side, m, start) in starts {
        let mut prev = start;
        for l in big_l + 2..ell {
            let v = format!("V{side}({l},{m})");
            b.vertex(v.clone());
            b.edge(format!("f{side}({l},{m})"), prev, v.clone());
            prev = v;
        }
        b.edge(format!("e{side}({m})"), prev, "V(0)");
    }
    b.build()
}

/// Parameters of any canonical model, with a one-line text form such as
/// `I s1=2 s2=1`, `II r=1 q2=1`, `III ell=5 m=1` or `aux2m ell=7 l=2 m=1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "family", content = "params")]
pub enum CanonicalParams {
    I(FamilyIParams),
    II(FamilyIIParams),
    III(FamilyIIIParams),
    Aux(AuxParams),
}

impl CanonicalParams {
    pub fn build(&self) -> Result<DirectedMultigraph> {
        match self {
            CanonicalParams::I(p) => build_family_i(p),
            CanonicalParams::II(p) => build_family_ii(p),
            CanonicalParams::III(p) => build_family_iii(p),
            CanonicalParams::Aux(p) => build_aux(p),
        }
    }
}

fn parse_kv(tok: &str) -> Result<(&str, usize)> {
    let (k, v) = tok
        .split_once('=')
        .ok_or_else(|| Error::InvalidParams(format!("expected key=value, got `{tok}`")))?;
    let v = v
        .parse::<usize>()
        .map_err(|_| Error::InvalidParams(format!("bad number in `{tok}`")))?;
    Ok((k, v))
}

/// Parses `"1=2,2=1"` into `{1: 2, 2: 1}`.
pub fn parse_count_map(text: &str) -> Result<BTreeMap<usize, usize>> {
    let mut out = BTreeMap::new();
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (k, v) = parse_kv(tok)?;
        let k = k
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidParams(format!("bad key in `{tok}`")))?;
        if out.insert(k, v).is_some() {
            return Err(Error::InvalidParams(format!("key {k} given twice")));
        }
    }
    Ok(out)
}

impl FromStr for CanonicalParams {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut toks = text.split_whitespace();
        let family = toks
            .next()
            .ok_or_else(|| Error::InvalidParams("empty parameter string".into()))?;
        let mut fields: BTreeMap<&str, usize> = BTreeMap::new();
        for tok in toks {
            let (k, v) = parse_kv(tok)?;
            if fields.insert(k, v).is_some() {
                return Err(Error::InvalidParams(format!("key `{k}` given twice")));
            }
        }
        let indexed =
            |prefix: char, fields: &BTreeMap<&str, usize>| -> Result<Vec<(usize, usize)>> {
                fields
                    .iter()
                    .filter(|(k, _)| k.starts_with(prefix))
                    .map(|(k, &v)| {
                        k[1..]
                            .parse::<usize>()
                            .map(|i| (i, v))
                            .map_err(|_| Error::InvalidParams(format!("bad key `{k}`")))
                    })
                    .collect()
            };
        let take = |key: &str, fields: &BTreeMap<&str, usize>| {
            fields
                .get(key)
                .copied()
                .ok_or_else(|| Error::InvalidParams(format!("missing `{key}`")))
        };
        let reject_unknown = |allowed: &dyn Fn(&str) -> bool| -> Result<()> {
            match fields.keys().find(|k| !allowed(k)) {
                Some(k) => Err(Error::InvalidParams(format!("unknown key `{k}`"))),
                None => Ok(()),
            }
        };
        match family {
            "I" => {
                reject_unknown(&|k| k.starts_with('s'))?;
                Ok(CanonicalParams::I(FamilyIParams::new(indexed(
                    's', &fields,
                )?)?))
            }
            "II" => {
                reject_unknown(&|k| k == "r" || k.starts_with('q'))?;
                let r = fields.get("r").copied().unwrap_or(0);
                Ok(CanonicalParams::II(FamilyIIParams::new(
                    r,
                    indexed('q', &fields)?,
                )?))
            }
            "III" => {
                reject_unknown(&|k| k == "ell" || k == "m")?;
                Ok(CanonicalParams::III(FamilyIIIParams::new(
                    take("ell", &fields)?,
                    take("m", &fields)?,
                )?))
            }
            "aux2m" | "auxm2" => {
                reject_unknown(&|k| k == "ell" || k == "l" || k == "m")?;
                let variant = if family == "aux2m" {
                    AuxVariant::TwoThenM
                } else {
                    AuxVariant::MThenTwo
                };
                Ok(CanonicalParams::Aux(AuxParams::new(
                    variant,
                    take("ell", &fields)?,
                    take("l", &fields)?,
                    take("m", &fields)?,
                )?))
            }
            other => Err(Error::InvalidParams(format!("unknown family `{other}`"))),
        }
    }
}

impl fmt::Display for CanonicalParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalParams::I(p) => {
                f.write_str("I")?;
                for (l, c) in &p.s {
                    write!(f, " s{l}={c}")?;
                }
                Ok(())
            }
            CanonicalParams::II(p) => {
                write!(f, "II r={}", p.r)?;
                for (m, c) in &p.q {
                    write!(f, " q{m}={c}")?;
                }
                Ok(())
            }
            CanonicalParams::III(p) => write!(f, "III ell={} m={}", p.ell, p.m),
            CanonicalParams::Aux(p) => {
                let tag = match p.variant {
                    AuxVariant::TwoThenM => "aux2m",
                    AuxVariant::MThenTwo => "auxm2",
                };
                write!(f, "{tag} ell={} l={} m={}", p.ell, p.l, p.m)
            }
        }
    }
}

/// Family I grid: all `(S₁, S₂, S₃)` with `2 ≤ S₁ + S₂ + S₃ ≤ 4`.
pub fn family_i_grid() -> Vec<FamilyIParams> {
    let mut out = Vec::new();
    for s1 in 0..=4 {
        for s2 in 0..=4 {
            for s3 in 0..=4 {
                let t = s1 + s2 + s3;
                if (2..=4).contains(&t) {
                    out.push(FamilyIParams::new([(1, s1), (2, s2), (3, s3)]).unwrap());
                }
            }
        }
    }
    out
}

/// Family II grid: `R, Q₁, Q₂ ∈ {0, 1, 2}` with `R + Q₁ + Q₂ > 1`.
pub fn family_ii_grid() -> Vec<FamilyIIParams> {
    let mut out = Vec::new();
    for r in 0..=2 {
        for q1 in 0..=2 {
            for q2 in 0..=2 {
                if r + q1 + q2 > 1 {
                    out.push(FamilyIIParams::new(r, [(1, q1), (2, q2)]).unwrap());
                }
            }
        }
    }
    out
}

pub fn family_iii_grid() -> Vec<FamilyIIIParams> {
    [(5, 1), (5, 2), (6, 1), (6, 2)]
        .into_iter()
        .map(|(l, m)| FamilyIIIParams::new(l, m).unwrap())
        .collect()
}

/// Auxiliary grid: `ℓ ∈ {5, 6, 7}`, `1 ≤ L < ℓ − 2`, `M ∈ {1, 2}`, both variants.
pub fn aux_grid() -> Vec<AuxParams> {
    let mut out = Vec::new();
    for variant in [AuxVariant::TwoThenM, AuxVariant::MThenTwo] {
        for ell in 5..=7 {
            for l in 1..ell - 2 {
                for m in 1..=2 {
                    out.push(AuxParams::new(variant, ell, l, m).unwrap());
                }
            }
        }
    }
    out
}
