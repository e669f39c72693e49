use super::{DirectedMultigraph, VertexId};

/// Searches for a vertex bijection `g1 -> g2` that preserves edge
/// multiplicities between every ordered vertex pair. Returns the first one in
/// lexicographic order of `g1`'s vertex ordering, as `map[v1] = v2`.
pub fn is_isomorphic(g1: &DirectedMultigraph, g2: &DirectedMultigraph) -> Option<Vec<VertexId>> {
    search::<()>(g1, g2, None)
}

/// As [`is_isomorphic`], additionally requiring `w1[v] == w2[map[v]]`.
pub fn is_isomorphic_weighted<W: PartialEq>(
    g1: &DirectedMultigraph,
    g2: &DirectedMultigraph,
    w1: &[W],
    w2: &[W],
) -> Option<Vec<VertexId>> {
    assert_eq!(w1.len(), g1.vertex_count());
    assert_eq!(w2.len(), g2.vertex_count());
    search(g1, g2, Some((w1, w2)))
}

fn profile(g: &DirectedMultigraph, v: VertexId) -> (usize, usize, usize) {
    (g.in_degree(v), g.out_degree(v), g.multiplicity(v, v))
}

fn matrix(g: &DirectedMultigraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut m = vec![vec![0; n]; n];
    for e in g.edge_ids() {
        m[g.src(e).index()][g.tgt(e).index()] += 1;
    }
    m
}

fn search<W: PartialEq>(
    g1: &DirectedMultigraph,
    g2: &DirectedMultigraph,
    weights: Option<(&[W], &[W])>,
) -> Option<Vec<VertexId>> {
    let n = g1.vertex_count();
    if n != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    let p1: Vec<_> = g1.vertices().map(|v| profile(g1, v)).collect();
    let p2: Vec<_> = g2.vertices().map(|v| profile(g2, v)).collect();
    let mut s1 = p1.clone();
    let mut s2 = p2.clone();
    s1.sort_unstable();
    s2.sort_unstable();
    if s1 != s2 {
        return None;
    }
    let compatible =
        |a: usize, b: usize| p1[a] == p2[b] && weights.is_none_or(|(w1, w2)| w1[a] == w2[b]);
    let m1 = matrix(g1);
    let m2 = matrix(g2);
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(0, &mut map, &mut used, &m1, &m2, &compatible) {
        Some(map.into_iter().map(|i| VertexId(i as u32)).collect())
    } else {
        None
    }
}

fn extend(
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
    m1: &[Vec<usize>],
    m2: &[Vec<usize>],
    compatible: &dyn Fn(usize, usize) -> bool,
) -> bool {
    let n = map.len();
    if depth == n {
        return true;
    }
    for cand in 0..n {
        if used[cand] || !compatible(depth, cand) {
            continue;
        }
        let consistent = (0..depth).all(|prev| {
            m1[depth][prev] == m2[cand][map[prev]] && m1[prev][depth] == m2[map[prev]][cand]
        }) && m1[depth][depth] == m2[cand][cand];
        if !consistent {
            continue;
        }
        map[depth] = cand;
        used[cand] = true;
        if extend(depth + 1, map, used, m1, m2, compatible) {
            return true;
        }
        used[cand] = false;
        map[depth] = usize::MAX;
    }
    false
}
