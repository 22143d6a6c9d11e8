//! Immutable simple graphs with the predicate vocabulary used throughout the
//! crate: stable sets, anticomplete sets, induced paths, and budgeted searches
//! for induced cliques and bicliques.
//!
//! Vertex ids are dense integers `0..n`; external formats are mapped onto
//! these on load so subset enumeration can run over bitmask rows.

use crate::error::{Error, Result};
use crate::search::{Budget, SearchOutcome};
use serde::{Deserialize, Serialize};

const WORD_BITS: usize = 64;

/// Hard cap on the vertex count; keeps the adjacency matrix small enough to
/// hold in memory without a sparse representation.
pub const MAX_VERTICES: usize = 4096;

/// An immutable simple undirected graph: no loops, no parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    edges: Vec<(u32, u32)>,
}

impl Graph {
    /// Builds a graph on `n` vertices from an edge list. Duplicate edges are
    /// collapsed; loops and out-of-range endpoints are rejected.
    pub fn new(n: usize, edge_list: &[(u32, u32)]) -> Result<Graph> {
        if n > MAX_VERTICES {
            return Err(Error::TooLarge(format!(
                "graph on {n} vertices exceeds the {MAX_VERTICES}-vertex cap"
            )));
        }
        let words = n.div_ceil(WORD_BITS).max(1);
        let mut rows = vec![0u64; n * words];
        let mut edges = Vec::new();
        for &(u, v) in edge_list {
            if u as usize >= n {
                return Err(Error::UnknownVertex(u));
            }
            if v as usize >= n {
                return Err(Error::UnknownVertex(v));
            }
            if u == v {
                return Err(Error::LoopEdge(u));
            }
            let (a, b) = (u.min(v), u.max(v));
            let bit = rows[a as usize * words + b as usize / WORD_BITS] >> (b as usize % WORD_BITS)
                & 1;
            if bit == 0 {
                rows[a as usize * words + b as usize / WORD_BITS] |= 1 << (b as usize % WORD_BITS);
                rows[b as usize * words + a as usize / WORD_BITS] |= 1 << (a as usize % WORD_BITS);
                edges.push((a, b));
            }
        }
        edges.sort_unstable();
        Ok(Graph {
            n,
            words,
            rows,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn contains_vertex(&self, v: u32) -> bool {
        (v as usize) < self.n
    }

    fn check_vertex(&self, v: u32) -> Result<()> {
        if self.contains_vertex(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        debug_assert!((u as usize) < self.n && (v as usize) < self.n);
        self.rows[u as usize * self.words + v as usize / WORD_BITS] >> (v as usize % WORD_BITS) & 1
            == 1
    }

    fn row(&self, v: u32) -> &[u64] {
        &self.rows[v as usize * self.words..(v as usize + 1) * self.words]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        let row = self.row(v);
        (0..self.n as u32).filter(move |&u| {
            row[u as usize / WORD_BITS] >> (u as usize % WORD_BITS) & 1 == 1
        })
    }

    fn mask_of(&self, vs: &[u32]) -> Vec<u64> {
        let mut mask = vec![0u64; self.words];
        for &v in vs {
            mask[v as usize / WORD_BITS] |= 1 << (v as usize % WORD_BITS);
        }
        mask
    }

    fn row_hits(&self, v: u32, mask: &[u64]) -> bool {
        self.row(v).iter().zip(mask).any(|(r, m)| r & m != 0)
    }
}

/// A finite set of vertices of one graph, kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<u32>);

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<VertexSet, D::Error> {
        Ok(VertexSet::new(Vec::<u32>::deserialize(d)?))
    }
}

impl VertexSet {
    pub fn new(mut members: Vec<u32>) -> VertexSet {
        members.sort_unstable();
        members.dedup();
        VertexSet(members)
    }

    pub fn empty() -> VertexSet {
        VertexSet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn is_disjoint_from(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| !other.contains(v))
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut v: Vec<u32> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl From<Vec<u32>> for VertexSet {
    fn from(v: Vec<u32>) -> VertexSet {
        VertexSet::new(v)
    }
}

impl FromIterator<u32> for VertexSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> VertexSet {
        VertexSet::new(iter.into_iter().collect())
    }
}

/// A sequence of distinct vertices intended to be an induced path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PathSeq(Vec<u32>);

impl PathSeq {
    pub fn new(order: Vec<u32>) -> PathSeq {
        PathSeq(order)
    }

    /// Number of edges.
    pub fn length(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn ends(&self) -> Option<(u32, u32)> {
        match self.0.as_slice() {
            [] => None,
            [only] => Some((*only, *only)),
            [first, .., last] => Some((*first, *last)),
        }
    }

    /// Vertices other than the two ends.
    pub fn interior(&self) -> &[u32] {
        if self.0.len() <= 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.contains(&v)
    }
}

fn check_set(g: &Graph, s: &VertexSet) -> Result<()> {
    for v in s.iter() {
        g.check_vertex(v)?;
    }
    Ok(())
}

/// True iff no two members of `s` are adjacent.
pub fn is_stable_set(g: &Graph, s: &VertexSet) -> Result<bool> {
    check_set(g, s)?;
    let vs = s.as_slice();
    for (i, &u) in vs.iter().enumerate() {
        for &v in &vs[i + 1..] {
            if g.has_edge(u, v) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True iff no edge joins a member of `x` to a member of `y`. The two sets
/// need not be disjoint; a shared vertex is not an edge.
pub fn are_anticomplete(g: &Graph, x: &VertexSet, y: &VertexSet) -> Result<bool> {
    check_set(g, x)?;
    check_set(g, y)?;
    if x.is_empty() || y.is_empty() {
        return Ok(true);
    }
    let mask = g.mask_of(y.as_slice());
    for u in x.iter() {
        if g.row_hits(u, &mask) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff consecutive entries are adjacent and all other pairs are not.
pub fn is_induced_path(g: &Graph, p: &PathSeq) -> Result<bool> {
    let vs = p.vertices();
    for &v in vs {
        g.check_vertex(v)?;
    }
    for (i, &u) in vs.iter().enumerate() {
        if vs[i + 1..].contains(&u) {
            return Err(Error::RepeatedVertex(u));
        }
    }
    for (i, &u) in vs.iter().enumerate() {
        for (j, &v) in vs.iter().enumerate().skip(i + 1) {
            let adjacent = g.has_edge(u, v);
            if j == i + 1 && !adjacent {
                return Ok(false);
            }
            if j > i + 1 && adjacent {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Searches for `t` pairwise-adjacent vertices. A clique is automatically an
/// induced complete subgraph. Returns the lexicographically first witness;
/// `Absent` only after exhausting the search tree.
pub fn find_induced_clique(g: &Graph, t: usize, budget: u64) -> Result<SearchOutcome<VertexSet>> {
    let mut budget = Budget::new(budget);
    find_induced_clique_with(g, t, &mut budget)
}

pub fn find_induced_clique_with(
    g: &Graph,
    t: usize,
    budget: &mut Budget,
) -> Result<SearchOutcome<VertexSet>> {
    if t == 0 {
        return Err(Error::BadParameter("clique size must be at least 1".into()));
    }
    let mut current = Vec::with_capacity(t);
    match clique_dfs(g, t, &mut current, &g.mask_of(&[]), true, budget) {
        DfsResult::Found(w) => Ok(SearchOutcome::Found(VertexSet::new(w))),
        DfsResult::Exhausted => Ok(SearchOutcome::Absent),
        DfsResult::OutOfBudget => Ok(SearchOutcome::Inconclusive {
            steps: budget.used(),
        }),
    }
}

enum DfsResult {
    Found(Vec<u32>),
    Exhausted,
    OutOfBudget,
}

fn clique_dfs(
    g: &Graph,
    t: usize,
    current: &mut Vec<u32>,
    cand_mask: &[u64],
    unrestricted: bool,
    budget: &mut Budget,
) -> DfsResult {
    if current.len() == t {
        return DfsResult::Found(current.clone());
    }
    let start = current.last().map_or(0, |&v| v + 1);
    for v in start..g.vertex_count() as u32 {
        let in_cand = unrestricted
            || cand_mask[v as usize / WORD_BITS] >> (v as usize % WORD_BITS) & 1 == 1;
        if !in_cand {
            continue;
        }
        if !budget.step() {
            return DfsResult::OutOfBudget;
        }
        // Remaining candidates must stay numerous enough to finish.
        let mut next_mask: Vec<u64> = if unrestricted {
            g.row(v).to_vec()
        } else {
            g.row(v).iter().zip(cand_mask).map(|(r, m)| r & m).collect()
        };
        // Only vertices above v keep the enumeration lexicographic.
        for (w, word) in next_mask.iter_mut().enumerate() {
            let lo = w * WORD_BITS;
            if lo + WORD_BITS <= v as usize + 1 {
                *word = 0;
            } else if lo <= v as usize {
                *word &= !((1u64 << (v as usize + 1 - lo)) - 1);
            }
        }
        let remaining: usize = next_mask.iter().map(|w| w.count_ones() as usize).sum();
        current.push(v);
        if current.len() + remaining >= t {
            match clique_dfs(g, t, current, &next_mask, false, budget) {
                DfsResult::Exhausted => {}
                other => return other,
            }
        }
        current.pop();
    }
    DfsResult::Exhausted
}

/// Searches for an induced complete bipartite subgraph with `t` vertices a
/// side: two disjoint stable sets with every cross pair an edge.
pub fn find_induced_biclique(
    g: &Graph,
    t: usize,
    budget: u64,
) -> Result<SearchOutcome<(VertexSet, VertexSet)>> {
    let mut budget = Budget::new(budget);
    find_induced_biclique_with(g, t, &mut budget)
}

pub fn find_induced_biclique_with(
    g: &Graph,
    t: usize,
    budget: &mut Budget,
) -> Result<SearchOutcome<(VertexSet, VertexSet)>> {
    if t == 0 {
        return Err(Error::BadParameter(
            "biclique side size must be at least 1".into(),
        ));
    }
    let mut left = Vec::with_capacity(t);
    match biclique_left_dfs(g, t, &mut left, None, budget) {
        DfsResult::Found(pair_vec) => {
            let (l, r) = pair_vec.split_at(t);
            Ok(SearchOutcome::Found((
                VertexSet::new(l.to_vec()),
                VertexSet::new(r.to_vec()),
            )))
        }
        DfsResult::Exhausted => Ok(SearchOutcome::Absent),
        DfsResult::OutOfBudget => Ok(SearchOutcome::Inconclusive {
            steps: budget.used(),
        }),
    }
}

fn biclique_left_dfs(
    g: &Graph,
    t: usize,
    left: &mut Vec<u32>,
    common: Option<Vec<u64>>,
    budget: &mut Budget,
) -> DfsResult {
    if left.len() == t {
        // Common neighbors of the whole left side; pick a stable t-subset.
        let cand = common.expect("nonempty left side has a candidate mask");
        let cands: Vec<u32> = (0..g.vertex_count() as u32)
            .filter(|&v| cand[v as usize / WORD_BITS] >> (v as usize % WORD_BITS) & 1 == 1)
            .collect();
        if cands.len() < t {
            return DfsResult::Exhausted;
        }
        let mut right = Vec::with_capacity(t);
        return stable_subset_dfs(g, t, &cands, 0, &mut right, left, budget);
    }
    let start = left.last().map_or(0, |&v| v + 1);
    for v in start..g.vertex_count() as u32 {
        if left.iter().any(|&u| g.has_edge(u, v)) {
            continue; // left side must stay stable
        }
        if !budget.step() {
            return DfsResult::OutOfBudget;
        }
        let next_common: Vec<u64> = match &common {
            None => g.row(v).to_vec(),
            Some(c) => g.row(v).iter().zip(c).map(|(r, m)| r & m).collect(),
        };
        let room: usize = next_common.iter().map(|w| w.count_ones() as usize).sum();
        if room < t {
            continue;
        }
        left.push(v);
        match biclique_left_dfs(g, t, left, Some(next_common), budget) {
            DfsResult::Exhausted => {}
            other => return other,
        }
        left.pop();
    }
    DfsResult::Exhausted
}

fn stable_subset_dfs(
    g: &Graph,
    t: usize,
    cands: &[u32],
    from: usize,
    right: &mut Vec<u32>,
    left: &[u32],
    budget: &mut Budget,
) -> DfsResult {
    if right.len() == t {
        let mut both = left.to_vec();
        both.extend_from_slice(right);
        return DfsResult::Found(both);
    }
    for i in from..cands.len() {
        if cands.len() - i < t - right.len() {
            break;
        }
        let v = cands[i];
        if right.iter().any(|&u| g.has_edge(u, v)) {
            continue;
        }
        if !budget.step() {
            return DfsResult::OutOfBudget;
        }
        right.push(v);
        match stable_subset_dfs(g, t, cands, i + 1, right, left, budget) {
            DfsResult::Exhausted => {}
            other => return other,
        }
        right.pop();
    }
    DfsResult::Exhausted
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                edges.push((u, v));
            }
        }
        Graph::new(n, &edges).unwrap()
    }

    fn path_graph(n: usize) -> Graph {
        let edges: Vec<(u32, u32)> = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
        Graph::new(n, &edges).unwrap()
    }

    #[test]
    fn rejects_loops_and_unknown_vertices() {
        assert!(matches!(
            Graph::new(3, &[(0, 0)]),
            Err(Error::LoopEdge(0))
        ));
        assert!(matches!(
            Graph::new(3, &[(0, 5)]),
            Err(Error::UnknownVertex(5))
        ));
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = Graph::new(3, &[(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn stable_set_basics() {
        let g = path_graph(3);
        assert!(is_stable_set(&g, &VertexSet::empty()).unwrap());
        assert!(!is_stable_set(&g, &VertexSet::new(vec![0, 1])).unwrap());
        assert!(is_stable_set(&g, &VertexSet::new(vec![0, 2])).unwrap());
        assert!(matches!(
            is_stable_set(&g, &VertexSet::new(vec![0, 9])),
            Err(Error::UnknownVertex(9))
        ));
    }

    #[test]
    fn anticomplete_basics() {
        let g = path_graph(3);
        assert!(are_anticomplete(&g, &VertexSet::empty(), &VertexSet::new(vec![0, 1])).unwrap());
        assert!(!are_anticomplete(
            &g,
            &VertexSet::new(vec![0]),
            &VertexSet::new(vec![1])
        )
        .unwrap());
        // Ends of a 2-edge path.
        assert!(are_anticomplete(&g, &VertexSet::new(vec![0]), &VertexSet::new(vec![2])).unwrap());
    }

    #[test]
    fn induced_path_basics() {
        let triangle = complete(3);
        assert!(is_induced_path(&triangle, &PathSeq::new(vec![0])).unwrap());
        assert!(!is_induced_path(&triangle, &PathSeq::new(vec![0, 1, 2])).unwrap());
        let g = path_graph(3);
        assert!(is_induced_path(&g, &PathSeq::new(vec![0, 1, 2])).unwrap());
        assert!(matches!(
            is_induced_path(&g, &PathSeq::new(vec![0, 1, 0])),
            Err(Error::RepeatedVertex(0))
        ));
    }

    #[test]
    fn clique_search_finds_triangle() {
        let g = complete(3);
        match find_induced_clique(&g, 3, 10_000).unwrap() {
            SearchOutcome::Found(s) => assert_eq!(s.as_slice(), &[0, 1, 2]),
            other => panic!("expected triangle, got {other:?}"),
        }
    }

    #[test]
    fn clique_search_k6_t4_lex_first() {
        let g = complete(6);
        match find_induced_clique(&g, 4, 10_000).unwrap() {
            SearchOutcome::Found(s) => assert_eq!(s.as_slice(), &[0, 1, 2, 3]),
            other => panic!("expected clique, got {other:?}"),
        }
    }

    #[test]
    fn clique_search_budget_inconclusive() {
        let g = complete(6);
        match find_induced_clique(&g, 4, 1).unwrap() {
            SearchOutcome::Inconclusive { steps } => assert_eq!(steps, 1),
            other => panic!("expected inconclusive, got {other:?}"),
        }
    }

    #[test]
    fn biclique_search_on_c4() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        match find_induced_biclique(&g, 2, 10_000).unwrap() {
            SearchOutcome::Found((l, r)) => {
                assert_eq!(l.as_slice(), &[0, 2]);
                assert_eq!(r.as_slice(), &[1, 3]);
            }
            other => panic!("expected C4 halves, got {other:?}"),
        }
    }

    #[test]
    fn biclique_single_edge_t1() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        match find_induced_biclique(&g, 1, 1000).unwrap() {
            SearchOutcome::Found((l, r)) => {
                assert_eq!(l.as_slice(), &[0]);
                assert_eq!(r.as_slice(), &[1]);
            }
            other => panic!("expected edge, got {other:?}"),
        }
    }

    #[test]
    fn returned_clique_is_complete_and_biclique_halves_stable() {
        let g = complete(5);
        if let SearchOutcome::Found(s) = find_induced_clique(&g, 3, 10_000).unwrap() {
            assert!(!is_stable_set(&g, &s).unwrap());
            let vs = s.as_slice();
            for (i, &u) in vs.iter().enumerate() {
                for &v in &vs[i + 1..] {
                    assert!(g.has_edge(u, v));
                }
            }
        } else {
            panic!("clique expected");
        }
        let c4 = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        if let SearchOutcome::Found((l, r)) = find_induced_biclique(&c4, 2, 10_000).unwrap() {
            assert!(is_stable_set(&c4, &l).unwrap());
            assert!(is_stable_set(&c4, &r).unwrap());
            for u in l.iter() {
                for v in r.iter() {
                    assert!(c4.has_edge(u, v));
                }
            }
        } else {
            panic!("biclique expected");
        }
    }

    #[test]
    fn branch_vertices_of_a_proper_subdivision_are_stable() {
        let (g, web) = crate::web::plant_subdivision(4, &crate::web::uniform_lengths(4, 2), 0.0, 0)
            .unwrap();
        assert!(is_stable_set(&g, web.branch()).unwrap());
    }

    #[test]
    fn proper_subdivision_of_k5_has_neither_shape() {
        // Subdividing every edge kills triangles, and any two vertices have
        // at most one common neighbor, so there is no induced 2-by-2
        // biclique either. Both searches prove absence exhaustively.
        let (g, _) = crate::web::plant_subdivision(5, &crate::web::uniform_lengths(5, 2), 0.0, 0)
            .unwrap();
        assert_eq!(
            find_induced_clique(&g, 3, u64::MAX).unwrap(),
            SearchOutcome::Absent
        );
        assert_eq!(
            find_induced_biclique(&g, 2, u64::MAX).unwrap(),
            SearchOutcome::Absent
        );
    }

    #[test]
    fn anticomplete_symmetric_and_monotone() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        let x = VertexSet::new(vec![0, 2]);
        let y = VertexSet::new(vec![3, 4]);
        assert_eq!(
            are_anticomplete(&g, &x, &y).unwrap(),
            are_anticomplete(&g, &y, &x).unwrap()
        );
        let x_sub = VertexSet::new(vec![0]);
        if are_anticomplete(&g, &x, &y).unwrap() {
            assert!(are_anticomplete(&g, &x_sub, &y).unwrap());
        }
    }
}
