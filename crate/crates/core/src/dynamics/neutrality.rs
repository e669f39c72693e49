//! Finite witnesses that a periodic point is not neutral.
//!
//! A witness on the right is a block `r` of the point, its own past `f`
//! and a continuation `v` such that `r·v` is admissible but `f·r·v` is not:
//! the future `r·v` is compatible with some past but not with the point's.
//! Left witnesses are the mirror image and are found by searching the
//! inverted point.

use crate::error::{Error, Result};
use crate::graph::DirectedMultigraph;
use crate::semigroup::{classify_powers, invert, reduce_letters, Element, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessSide {
    /// `block·context ≠ 0` and `own·block·context = 0`.
    Right,
    /// `context·block ≠ 0` and `context·block·own = 0`.
    Left,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub side: WitnessSide,
    /// Letters of the point adjacent to `block` (past for `Right`, future
    /// for `Left`).
    pub own: Word,
    /// Two periods of the point, starting at some rotation.
    pub block: Word,
    pub context: Word,
}

impl Witness {
    /// Rechecks the two admissibility conditions.
    pub fn holds(&self, g: &DirectedMultigraph) -> bool {
        let (with_context, full) = match self.side {
            WitnessSide::Right => (
                self.block.concat(&self.context),
                self.own.concat(&self.block).concat(&self.context),
            ),
            WitnessSide::Left => (
                self.context.concat(&self.block),
                self.context.concat(&self.block).concat(&self.own),
            ),
        };
        !reduce_letters(with_context.letters(), g).is_zero()
            && reduce_letters(full.letters(), g).is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NeutralityVerdict {
    ConfirmedNonNeutral(Witness),
    /// No witness within the bounds; not a proof of neutrality.
    ConsistentWithNeutral,
}

/// Searches both sides for a witness using `extension_len` letters of the
/// point itself and free contexts of at most `context_len` letters beyond
/// the part that cancels the block.
pub fn bounded_neutrality_test(
    w: &Word,
    g: &DirectedMultigraph,
    context_len: usize,
    extension_len: usize,
) -> Result<NeutralityVerdict> {
    let x = reduce_letters(w.letters(), g);
    if w.is_empty() || x.is_zero() || !classify_powers(&x, g).is_power_stable() {
        return Err(Error::InvalidParams(format!(
            "`{}` is not the period of a periodic point",
            w.display(g)
        )));
    }
    if let Some(wit) = search_right(w, g, context_len, extension_len) {
        return Ok(NeutralityVerdict::ConfirmedNonNeutral(wit));
    }
    if let Some(wit) = search_right(&invert(w), g, context_len, extension_len) {
        return Ok(NeutralityVerdict::ConfirmedNonNeutral(Witness {
            side: WitnessSide::Left,
            own: invert(&wit.own),
            block: invert(&wit.block),
            context: invert(&wit.context),
        }));
    }
    Ok(NeutralityVerdict::ConsistentWithNeutral)
}

fn search_right(w: &Word, g: &DirectedMultigraph, l_max: usize, k: usize) -> Option<Witness> {
    let n = w.len();
    let at = |i: usize| w.letters()[i % n];
    for i in 0..n {
        let block: Vec<Letter> = (i..i + 2 * n).map(at).collect();
        // past of length k, ending just before position i
        let past: Vec<Letter> = (0..k).map(|j| at(i + (k / n + 1) * n - k + j)).collect();
        let xr = reduce_letters(&block, g);
        let down = xr.as_nf().map(|nf| nf.down.clone()).unwrap_or_default();
        let cancel: Vec<Letter> = down.iter().rev().map(|&e| Letter::plus(e)).collect();
        let mut rc = xr;
        for &l in &cancel {
            rc = rc.push(l, g);
        }
        let mut full: Vec<Letter> = past.clone();
        full.extend_from_slice(&block);
        full.extend_from_slice(&cancel);
        let frc = reduce_letters(&full, g);
        let mut context = cancel.clone();
        if dfs(&rc, &frc, g, l_max, &mut context).is_some() {
            return Some(Witness {
                side: WitnessSide::Right,
                own: Word::new(past),
                block: Word::new(block),
                context: Word::new(context),
            });
        }
    }
    None
}

/// Extends `context` by plus letters until `own` dies while `rc` survives.
fn dfs(
    rc: &Element,
    frc: &Element,
    g: &DirectedMultigraph,
    budget: usize,
    context: &mut Vec<Letter>,
) -> Option<()> {
    if frc.is_zero() {
        return Some(());
    }
    if budget == 0 {
        return None;
    }
    let end = rc.as_nf().map(|nf| nf.end(g))?;
    for &e in g.in_edges(end) {
        let l = Letter::plus(e);
        let next = rc.push(l, g);
        if next.is_zero() {
            continue;
        }
        context.push(l);
        if dfs(&next, &frc.push(l, g), g, budget - 1, context).is_some() {
            return Some(());
        }
        context.pop();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{analyze_periodic_word, periodic_points};
    use crate::graph::contracting_forest;
    use crate::graph::tests::graph;

    fn d2() -> DirectedMultigraph {
        graph(&["V0"], &[("a", "V0", "V0"), ("b", "V0", "V0")])
    }

    #[test]
    fn d2_negative_point_has_witness() {
        let g = d2();
        let w = Word::parse("a-", &g).unwrap();
        match bounded_neutrality_test(&w, &g, 6, 6).unwrap() {
            NeutralityVerdict::ConfirmedNonNeutral(wit) => assert!(wit.holds(&g)),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn d2_positive_point_has_left_witness() {
        let g = d2();
        let w = Word::parse("a+", &g).unwrap();
        match bounded_neutrality_test(&w, &g, 6, 6).unwrap() {
            NeutralityVerdict::ConfirmedNonNeutral(wit) => {
                assert_eq!(wit.side, WitnessSide::Left);
                assert!(wit.holds(&g));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn d2_neutral_point_has_none() {
        let g = d2();
        for text in ["a- a+", "a+ a-", "a- b- b+ a+"] {
            let w = Word::parse(text, &g).unwrap();
            assert_eq!(
                bounded_neutrality_test(&w, &g, 6, 6).unwrap(),
                NeutralityVerdict::ConsistentWithNeutral,
                "{text}"
            );
        }
    }

    #[test]
    fn non_points_are_rejected() {
        let g = d2();
        let w = Word::parse("a- b+", &g).unwrap();
        assert!(bounded_neutrality_test(&w, &g, 2, 2).is_err());
    }

    #[test]
    fn agrees_with_idempotent_criterion() {
        let g = graph(
            &["V0", "V1"],
            &[("e1", "V0", "V0"), ("f", "V0", "V1"), ("e2", "V1", "V0")],
        );
        let cd = contracting_forest(&g).unwrap();
        for n in 1..=4 {
            for w in periodic_points(&g, n) {
                let neutral = analyze_periodic_word(&w, &g, &cd).unwrap().is_neutral();
                let verdict = bounded_neutrality_test(&w, &g, 6, 6).unwrap();
                if let NeutralityVerdict::ConfirmedNonNeutral(wit) = &verdict {
                    assert!(wit.holds(&g));
                }
                assert_eq!(
                    neutral,
                    verdict == NeutralityVerdict::ConsistentWithNeutral,
                    "{}",
                    w.display(&g)
                );
            }
        }
    }
}
