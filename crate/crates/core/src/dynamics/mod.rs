//! Admissible words, periodic points and their neutral / multiplier data.

mod codes;
mod counting;
mod neutrality;

pub use codes::{circular_code_coefficients, idempotent_return_counts, neutral_zeta_product};
pub use counting::{
    count_tables_dp, count_tables_dp_with_cap, count_tables_naive, multiplier_lambda, CountTable,
    CountTableJson, DEFAULT_STATE_CAP,
};
pub use neutrality::{bounded_neutrality_test, NeutralityVerdict, Witness, WitnessSide};

use crate::error::{Error, Result};
use crate::graph::{ContractionData, DirectedMultigraph, EdgeId, VertexId};
use crate::semigroup::{
    classify_powers, lambda_image, reduce_letters, Element, Letter, PowerClass, Word,
};

/// A word is admissible iff its product is nonzero.
pub fn is_admissible(w: &Word, g: &DirectedMultigraph) -> bool {
    !reduce_letters(w.letters(), g).is_zero()
}

/// Everything the counters need to know about the periodic point `w^∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicWordInfo {
    pub word: Word,
    pub is_point: bool,
    pub least_period: usize,
    pub neutral_vertex: Option<VertexId>,
    pub neutral_root: Option<VertexId>,
    /// `(e, M)` when one period maps under λ to `(ê⁻)^M`.
    pub negative_multiplier: Option<(EdgeId, usize)>,
}

impl PeriodicWordInfo {
    pub fn is_neutral(&self) -> bool {
        self.neutral_vertex.is_some()
    }
}

pub fn least_period(w: &Word) -> usize {
    let l = w.letters();
    let n = l.len();
    (1..=n)
        .find(|&d| n.is_multiple_of(d) && (0..n).all(|i| l[i] == l[(i + d) % n]))
        .unwrap_or(n)
}

/// Classifies the periodic point with period word `w` by looking at all of
/// its rotations.
pub fn analyze_periodic_word(
    w: &Word,
    g: &DirectedMultigraph,
    cd: &ContractionData,
) -> Result<PeriodicWordInfo> {
    let n = w.len();
    if n == 0 {
        return Err(Error::InvalidParams(
            "periodic word must be nonempty".into(),
        ));
    }
    let x = reduce_letters(w.letters(), g);
    let class = classify_powers(&x, g);
    let mut info = PeriodicWordInfo {
        word: w.clone(),
        is_point: !x.is_zero() && class.is_power_stable(),
        least_period: least_period(w),
        neutral_vertex: None,
        neutral_root: None,
        negative_multiplier: None,
    };
    if !info.is_point {
        return Ok(info);
    }
    if class == PowerClass::Idempotent {
        let base = x.as_nf().map(|nf| nf.base);
        let mut found: Option<VertexId> = None;
        for k in 0..n {
            let r = reduce_letters(w.rotation(k).letters(), g);
            if let Some(v) = r.vertex_idempotent() {
                match found {
                    Some(u) if u != v => {
                        return Err(Error::Internal(format!(
                            "rotations of `{}` reduce to idempotents at `{}` and `{}`",
                            w.display(g),
                            g.vertex_name(u),
                            g.vertex_name(v)
                        )))
                    }
                    _ => found = Some(v),
                }
            }
        }
        let v = found.ok_or_else(|| {
            Error::Internal(format!(
                "idempotent word `{}` has no rotation equal to a vertex idempotent",
                w.display(g)
            ))
        })?;
        if base != Some(v) {
            return Err(Error::Internal(format!(
                "neutral vertex of `{}` differs from the base of its product",
                w.display(g)
            )));
        }
        info.neutral_vertex = Some(v);
        info.neutral_root = Some(cd.tree_of[v.index()]);
        return Ok(info);
    }
    for k in 0..n {
        let img = lambda_image(&w.rotation(k), cd);
        if let Element::Nf(nf) = &img {
            if nf.up.is_empty() && !nf.down.is_empty() && nf.down.iter().all(|&e| e == nf.down[0]) {
                info.negative_multiplier = Some((cd.kept_origin(nf.down[0]), nf.down.len()));
                break;
            }
        }
    }
    Ok(info)
}

/// Calls `f` on every admissible word of length `n` whose first letter is
/// `first` (or on every admissible word if `first` is `None`), in
/// lexicographic letter order.
pub fn for_each_admissible_word<F: FnMut(&[Letter])>(
    g: &DirectedMultigraph,
    n: usize,
    first: Option<Letter>,
    mut f: F,
) {
    let alphabet = Letter::alphabet(g);
    let mut letters: Vec<Letter> = Vec::with_capacity(n);
    if n == 0 {
        f(&letters);
        return;
    }
    fn dfs<F: FnMut(&[Letter])>(
        g: &DirectedMultigraph,
        alphabet: &[Letter],
        n: usize,
        acc: &Element,
        letters: &mut Vec<Letter>,
        f: &mut F,
    ) {
        if letters.len() == n {
            f(letters);
            return;
        }
        for &l in alphabet {
            let next = acc.push(l, g);
            if next.is_zero() {
                continue;
            }
            letters.push(l);
            dfs(g, alphabet, n, &next, letters, f);
            letters.pop();
        }
    }
    match first {
        Some(l) => {
            let acc = Element::Identity.push(l, g);
            letters.push(l);
            dfs(g, &alphabet, n, &acc, &mut letters, &mut f);
        }
        None => dfs(g, &alphabet, n, &Element::Identity, &mut letters, &mut f),
    }
}

pub fn admissible_words(g: &DirectedMultigraph, n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for_each_admissible_word(g, n, None, |l| out.push(Word::new(l.to_vec())));
    out
}

/// Period words of length `n` that define periodic points.
pub fn periodic_points(g: &DirectedMultigraph, n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for_each_admissible_word(g, n, None, |l| {
        let x = reduce_letters(l, g);
        if classify_powers(&x, g).is_power_stable() {
            out.push(Word::new(l.to_vec()));
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::contracting_forest;
    use crate::graph::tests::graph;

    fn d2() -> DirectedMultigraph {
        graph(&["V0"], &[("a", "V0", "V0"), ("b", "V0", "V0")])
    }

    fn g21() -> DirectedMultigraph {
        graph(
            &["V(0)", "V0(1)", "V1(1)"],
            &[
                ("f0", "V(0)", "V0(1)"),
                ("f1", "V(0)", "V1(1)"),
                ("e0", "V0(1)", "V(0)"),
                ("e1", "V1(1)", "V(0)"),
            ],
        )
    }

    fn info(text: &str, g: &DirectedMultigraph) -> PeriodicWordInfo {
        let cd = contracting_forest(g).unwrap();
        analyze_periodic_word(&Word::parse(text, g).unwrap(), g, &cd).unwrap()
    }

    #[test]
    fn admissibility_in_d2() {
        let g = d2();
        assert!(is_admissible(&Word::parse("a- a+", &g).unwrap(), &g));
        assert!(!is_admissible(&Word::parse("a- b+", &g).unwrap(), &g));
        // 16 words, only a-b+ and b-a+ vanish
        assert_eq!(admissible_words(&g, 2).len(), 14);
        assert_eq!(admissible_words(&g, 1).len(), 4);
    }

    #[test]
    fn d2_points() {
        let g = d2();
        let i = info("a- a+", &g);
        assert!(i.is_point && i.is_neutral());
        assert_eq!(i.neutral_vertex, Some(VertexId(0)));
        assert_eq!(i.least_period, 2);

        let i = info("a-", &g);
        assert!(i.is_point && !i.is_neutral());
        assert_eq!(i.negative_multiplier, Some((EdgeId(0), 1)));

        let i = info("b+ a- b-", &g);
        assert_eq!(i.negative_multiplier, Some((EdgeId(0), 1)));

        let i = info("a- b-", &g);
        assert!(i.is_point);
        assert_eq!(i.negative_multiplier, None);

        let i = info("a+", &g);
        assert!(i.is_point && i.negative_multiplier.is_none() && !i.is_neutral());
    }

    #[test]
    fn g21_points() {
        let g = g21();
        let i = info("f0- e0-", &g);
        assert_eq!(
            i.negative_multiplier,
            Some((g.edge_by_name("e0").unwrap(), 1))
        );
        assert_eq!(i.least_period, 2);

        let i = info("f0- f0+ f1- f1+", &g);
        assert_eq!(i.neutral_vertex, Some(g.vertex_by_name("V(0)").unwrap()));
        assert_eq!(i.least_period, 4);

        let i = info("e0- e0+", &g);
        assert_eq!(i.neutral_vertex, Some(g.vertex_by_name("V0(1)").unwrap()));
        assert_eq!(i.neutral_root, Some(g.vertex_by_name("V(0)").unwrap()));

        assert!(!info("f0-", &g).is_point);
    }

    #[test]
    fn least_periods() {
        let g = d2();
        let w = Word::parse("a- b- a- b-", &g).unwrap();
        assert_eq!(least_period(&w), 2);
        let w = Word::parse("a- a- a-", &g).unwrap();
        assert_eq!(least_period(&w), 1);
    }

    #[test]
    fn rotation_invariance() {
        let g = g21();
        let cd = contracting_forest(&g).unwrap();
        for w in periodic_points(&g, 6) {
            let base = analyze_periodic_word(&w, &g, &cd).unwrap();
            for k in 1..w.len() {
                let r = analyze_periodic_word(&w.rotation(k), &g, &cd).unwrap();
                assert_eq!(r.is_point, base.is_point);
                assert_eq!(r.neutral_vertex, base.neutral_vertex);
                assert_eq!(r.negative_multiplier, base.negative_multiplier);
            }
        }
    }
}
