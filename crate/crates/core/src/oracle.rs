//! Brute-force ground truth for small instances. Every search here is a
//! plain enumeration filtered through the certify checkers, kept obviously
//! correct; hard guards refuse oversized inputs rather than truncating, so a
//! refusal can never be mistaken for proven absence.

use crate::cert::CleanSetClaims;
use crate::certify;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::search::LexCombinations;
use crate::web::Web;

const MAX_BRANCH: usize = 20;
const MAX_BRANCH_PAIRS: usize = 12;
const MAX_INDUCED_VERTICES: usize = 16;

fn branch_vec(web: &Web) -> Vec<u32> {
    web.branch().iter().collect()
}

fn guard_branch(web: &Web, cap: usize, what: &str) -> Result<()> {
    if web.branch_size() > cap {
        return Err(Error::GuardExceeded(format!(
            "{what} enumerates branch subsets; {} branch vertices exceed the cap of {cap}",
            web.branch_size()
        )));
    }
    Ok(())
}

/// Lexicographically least branch subset of size `s` passing the full
/// clean-set check, or proven absence.
pub fn brute_clean_set(g: &Graph, web: &Web, s: usize) -> Result<Option<VertexSet>> {
    brute_clean_set_with_claims(g, web, s, CleanSetClaims::Full)
}

/// Same search against a chosen clause subset.
pub fn brute_clean_set_with_claims(
    g: &Graph,
    web: &Web,
    s: usize,
    claims: CleanSetClaims,
) -> Result<Option<VertexSet>> {
    guard_branch(web, MAX_BRANCH, "clean-set oracle")?;
    let branch = branch_vec(web);
    if s > branch.len() {
        return Ok(None);
    }
    for idx in LexCombinations::new(branch.len(), s) {
        let set = VertexSet::new(idx.iter().map(|&i| branch[i]).collect());
        if certify::check_clean_set(g, web, &set, s, claims).is_none() {
            return Ok(Some(set));
        }
    }
    Ok(None)
}

/// First (anchors, pairs) witness in lexicographic order, or proven absence.
pub fn brute_pinned_pair(
    g: &Graph,
    web: &Web,
    anchor_count: usize,
    pair_count: usize,
) -> Result<Option<(VertexSet, Vec<(u32, u32)>)>> {
    guard_branch(web, MAX_BRANCH_PAIRS, "pinned-pair oracle")?;
    if anchor_count > 4 || pair_count > 4 {
        return Err(Error::GuardExceeded(
            "pinned-pair oracle caps both sizes at 4".into(),
        ));
    }
    let branch = branch_vec(web);
    if anchor_count + 2 * pair_count > branch.len() {
        return Ok(None);
    }
    for idx in LexCombinations::new(branch.len(), anchor_count) {
        let anchors = VertexSet::new(idx.iter().map(|&i| branch[i]).collect());
        let rest: Vec<u32> = branch
            .iter()
            .copied()
            .filter(|v| !anchors.contains(*v))
            .collect();
        let mut pairs = Vec::new();
        if let Some(found) = pinned_pairs_dfs(
            g,
            web,
            &anchors,
            &rest,
            0,
            &mut vec![false; rest.len()],
            &mut pairs,
            pair_count,
            anchor_count,
        ) {
            return Ok(Some((anchors, found)));
        }
    }
    Ok(None)
}

/// Enumerates disjoint pair families in the canonical order where first
/// components strictly increase; elements may be left out of every pair.
#[allow(clippy::too_many_arguments)]
fn pinned_pairs_dfs(
    g: &Graph,
    web: &Web,
    anchors: &VertexSet,
    rest: &[u32],
    start: usize,
    taken: &mut Vec<bool>,
    pairs: &mut Vec<(u32, u32)>,
    want: usize,
    anchor_count: usize,
) -> Option<Vec<(u32, u32)>> {
    if pairs.len() == want {
        return if certify::check_pinned_pair(g, web, anchors, pairs, anchor_count, want).is_none()
        {
            Some(pairs.clone())
        } else {
            None
        };
    }
    for first in start..rest.len() {
        if taken[first] {
            continue;
        }
        for second in first + 1..rest.len() {
            if taken[second] {
                continue;
            }
            taken[first] = true;
            taken[second] = true;
            pairs.push((rest[first], rest[second]));
            if let Some(found) = pinned_pairs_dfs(
                g,
                web,
                anchors,
                rest,
                first + 1,
                taken,
                pairs,
                want,
                anchor_count,
            ) {
                return Some(found);
            }
            pairs.pop();
            taken[first] = false;
            taken[second] = false;
        }
    }
    None
}

/// First pair of disjoint touching families in lexicographic order, or
/// proven absence.
pub fn brute_touching_families(
    g: &Graph,
    web: &Web,
    family_size: usize,
) -> Result<Option<(Vec<(u32, u32)>, Vec<(u32, u32)>)>> {
    guard_branch(web, MAX_BRANCH_PAIRS, "touching-families oracle")?;
    if family_size > 3 {
        return Err(Error::GuardExceeded(
            "touching-families oracle caps the family size at 3".into(),
        ));
    }
    let branch = branch_vec(web);
    let mut all_pairs: Vec<(u32, u32)> = Vec::new();
    for (i, &x) in branch.iter().enumerate() {
        for &y in &branch[i + 1..] {
            all_pairs.push((x, y));
        }
    }
    if 2 * family_size > all_pairs.len() {
        return Ok(None);
    }
    for left_idx in LexCombinations::new(all_pairs.len(), family_size) {
        let left: Vec<(u32, u32)> = left_idx.iter().map(|&i| all_pairs[i]).collect();
        let remaining: Vec<(u32, u32)> = all_pairs
            .iter()
            .copied()
            .filter(|p| !left.contains(p))
            .collect();
        for right_idx in LexCombinations::new(remaining.len(), family_size) {
            let right: Vec<(u32, u32)> = right_idx.iter().map(|&i| remaining[i]).collect();
            if certify::check_touching_families(g, web, &left, &right, family_size).is_none() {
                return Ok(Some((left, right)));
            }
        }
    }
    Ok(None)
}

/// Exhaustive induced-subgraph report for one size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedReport {
    pub clique: Option<VertexSet>,
    pub biclique: Option<(VertexSet, VertexSet)>,
}

/// Exhaustive search for induced complete and complete-bipartite subgraphs
/// with `t` vertices (per side).
pub fn brute_induced(g: &Graph, t: usize) -> Result<InducedReport> {
    if g.vertex_count() > MAX_INDUCED_VERTICES {
        return Err(Error::GuardExceeded(format!(
            "induced oracle caps the host at {MAX_INDUCED_VERTICES} vertices, got {}",
            g.vertex_count()
        )));
    }
    if t == 0 {
        return Err(Error::BadParameter("size must be at least 1".into()));
    }
    let n = g.vertex_count();
    let mut clique = None;
    for idx in LexCombinations::new(n, t) {
        let set = VertexSet::new(idx.iter().map(|&i| i as u32).collect());
        if certify::check_clique(g, &set, t).is_none() {
            clique = Some(set);
            break;
        }
    }
    let mut biclique = None;
    'outer: for left_idx in LexCombinations::new(n, t) {
        let left = VertexSet::new(left_idx.iter().map(|&i| i as u32).collect());
        let others: Vec<u32> = (0..n as u32).filter(|v| !left.contains(*v)).collect();
        for right_idx in LexCombinations::new(others.len(), t) {
            let right = VertexSet::new(right_idx.iter().map(|&i| others[i]).collect());
            if certify::check_biclique(g, &left, &right, t).is_none() {
                biclique = Some((left, right));
                break 'outer;
            }
        }
    }
    Ok(InducedReport { clique, biclique })
}

/// Least ground size at which every coloring of `arity`-subsets with
/// `colors` colors forces a monochromatic `target`-subset, searched up to
/// `max_ground`. Backtracks over partial colorings, pruning as soon as some
/// `target`-subset is forced monochromatic, with the first subset's color
/// fixed to break the color-permutation symmetry.
///
/// The enumeration must stay exhaustive to mean anything, so the coloring
/// space of every ground size scanned is capped; a range that would exceed
/// the cap is refused outright rather than partially searched.
pub fn brute_ramsey_min(
    colors: u64,
    arity: usize,
    target: usize,
    max_ground: usize,
) -> Result<Option<usize>> {
    if colors == 0 || arity == 0 || target == 0 {
        return Err(Error::BadParameter("all parameters must be positive".into()));
    }
    if max_ground > 10 || colors > 6 || arity > 3 {
        return Err(Error::GuardExceeded(
            "ramsey oracle guards: ground <= 10, colors <= 6, arity <= 3".into(),
        ));
    }
    if target <= arity {
        // Any target-subset is monochromatic by itself.
        return Ok(if target <= max_ground { Some(target) } else { None });
    }
    if colors == 1 {
        return Ok(if target <= max_ground { Some(target) } else { None });
    }
    const SPACE_BITS_CAP: f64 = 22.0;
    for ground in target..=max_ground {
        let positions = saturating_binomial(ground as u64, arity as u64);
        let space_bits = (positions.saturating_sub(1)) as f64 * (colors as f64).log2();
        if space_bits > SPACE_BITS_CAP {
            return Err(Error::GuardExceeded(format!(
                "ground size {ground} spans about 2^{space_bits:.0} colorings; the \
                 exhaustive scan is capped at 2^{SPACE_BITS_CAP}"
            )));
        }
        if !free_coloring_exists(colors, arity, target, ground) {
            return Ok(Some(ground));
        }
    }
    Ok(None)
}

/// Whether some coloring of the `arity`-subsets of `0..ground` avoids every
/// monochromatic `target`-subset.
fn free_coloring_exists(colors: u64, arity: usize, target: usize, ground: usize) -> bool {
    let subsets: Vec<Vec<usize>> = LexCombinations::new(ground, arity).collect();
    let index_of = |s: &[usize]| -> usize {
        subsets
            .binary_search_by(|probe| probe.as_slice().cmp(s))
            .expect("every sorted subset is listed")
    };
    // For each target-subset, the indices of the arity-subsets inside it.
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for big in LexCombinations::new(ground, target) {
        let mut ids = Vec::new();
        for small in LexCombinations::new(target, arity) {
            let subset: Vec<usize> = small.iter().map(|&i| big[i]).collect();
            ids.push(index_of(&subset));
        }
        groups.push(ids);
    }
    // member_of[i]: which groups contain subset i.
    let mut member_of: Vec<Vec<usize>> = vec![Vec::new(); subsets.len()];
    for (gi, ids) in groups.iter().enumerate() {
        for &i in ids {
            member_of[i].push(gi);
        }
    }
    let mut assignment: Vec<Option<u64>> = vec![None; subsets.len()];
    fn assign(
        pos: usize,
        colors: u64,
        assignment: &mut Vec<Option<u64>>,
        groups: &[Vec<usize>],
        member_of: &[Vec<usize>],
        symmetry_fixed: bool,
    ) -> bool {
        if pos == assignment.len() {
            return true;
        }
        let palette = if pos == 0 && symmetry_fixed { 1 } else { colors };
        for color in 0..palette {
            assignment[pos] = Some(color);
            let forced = member_of[pos].iter().any(|&gi| {
                groups[gi]
                    .iter()
                    .all(|&i| assignment[i] == Some(color))
            });
            if !forced
                && assign(pos + 1, colors, assignment, groups, member_of, symmetry_fixed)
            {
                return true;
            }
            assignment[pos] = None;
        }
        false
    }
    assign(0, colors, &mut assignment, &groups, &member_of, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PathSeq;
    use crate::web::{plant_subdivision, uniform_lengths, Web};

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                edges.push((u, v));
            }
        }
        Graph::new(n, &edges).unwrap()
    }

    fn trivial_web(n: u32) -> Web {
        let mut paths = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                paths.push(PathSeq::new(vec![i, j]));
            }
        }
        Web::new((0..n).collect(), paths).unwrap()
    }

    #[test]
    fn clean_set_oracle_on_clean_instance() {
        let (g, web) = plant_subdivision(6, &uniform_lengths(6, 2), 0.0, 1).unwrap();
        let s = brute_clean_set(&g, &web, 3).unwrap().unwrap();
        assert_eq!(s.as_slice(), &[0, 1, 2]);
        assert!(brute_clean_set(&g, &web, 7).unwrap().is_none());
    }

    #[test]
    fn clean_set_oracle_absence_on_complete_graph() {
        let g = complete(6);
        let web = trivial_web(6);
        // No stable pair exists.
        assert!(brute_clean_set(&g, &web, 2).unwrap().is_none());
    }

    #[test]
    fn ramsey_min_classical_values() {
        assert_eq!(brute_ramsey_min(2, 2, 3, 8).unwrap(), Some(6));
        assert_eq!(brute_ramsey_min(1, 2, 5, 8).unwrap(), Some(5));
        assert_eq!(brute_ramsey_min(4, 3, 3, 8).unwrap(), Some(3));
        // Three colors need seventeen vertices to force a triangle, far out
        // of range; within a feasible range the scan reports absence.
        assert_eq!(brute_ramsey_min(3, 2, 3, 5).unwrap(), None);
    }

    #[test]
    fn upper_bound_dominates_every_computable_minimum() {
        for colors in 1..=4u64 {
            for arity in 1..=3usize {
                for target in 1..=4usize {
                    let Ok(found) = brute_ramsey_min(colors, arity, target, 10) else {
                        continue;
                    };
                    let Some(min) = found else { continue };
                    let bound =
                        crate::bounds::ramsey_upper_bound_u64(colors, arity as u64, target as u64)
                            .unwrap();
                    assert!(
                        bound.min_bits() >= 64 || bound.as_u64().unwrap() as usize >= min,
                        "bound {bound:?} below brute minimum {min} for \
                         ({colors}, {arity}, {target})"
                    );
                }
            }
        }
    }

    #[test]
    fn ramsey_oracle_refuses_oversized_inputs() {
        assert!(matches!(
            brute_ramsey_min(2, 2, 3, 11),
            Err(Error::GuardExceeded(_))
        ));
        assert!(matches!(
            brute_ramsey_min(7, 2, 3, 8),
            Err(Error::GuardExceeded(_))
        ));
    }

    #[test]
    fn induced_oracle_basics() {
        let k4 = complete(4);
        let rep = brute_induced(&k4, 3).unwrap();
        assert_eq!(rep.clique.unwrap().as_slice(), &[0, 1, 2]);

        let c4 = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let rep = brute_induced(&c4, 2).unwrap();
        assert!(rep.biclique.is_some());

        // A proper 1-subdivision of the complete graph on five vertices has
        // neither a triangle nor an induced 2-by-2 biclique.
        let (g, _) = plant_subdivision(5, &uniform_lengths(5, 2), 0.0, 1).unwrap();
        let rep3 = brute_induced(&g, 3).unwrap();
        assert!(rep3.clique.is_none());
        let rep2 = brute_induced(&g, 2).unwrap();
        assert!(rep2.biclique.is_none());
    }

    #[test]
    fn induced_oracle_guard() {
        let g = Graph::new(17, &[]).unwrap();
        assert!(matches!(brute_induced(&g, 2), Err(Error::GuardExceeded(_))));
    }

    #[test]
    fn pinned_oracle_on_trivial_and_clean_webs() {
        let g = complete(7);
        let web = trivial_web(7);
        let (anchors, pairs) = brute_pinned_pair(&g, &web, 1, 1).unwrap().unwrap();
        assert!(certify::check_pinned_pair(&g, &web, &anchors, &pairs, 1, 1).is_none());

        let (g2, web2) = plant_subdivision(7, &uniform_lengths(7, 2), 0.0, 2).unwrap();
        assert!(brute_pinned_pair(&g2, &web2, 1, 1).unwrap().is_none());
    }

    #[test]
    fn touching_oracle_on_joined_and_clean_webs() {
        let (g, web) = plant_subdivision(4, &uniform_lengths(4, 2), 0.0, 3).unwrap();
        assert!(brute_touching_families(&g, &web, 1).unwrap().is_none());

        let a = web.path(0, 1).unwrap().interior()[0];
        let b = web.path(2, 3).unwrap().interior()[0];
        let mut edges = g.edges().to_vec();
        edges.push((a, b));
        let g2 = Graph::new(g.vertex_count(), &edges).unwrap();
        let (l, r) = brute_touching_families(&g2, &web, 1).unwrap().unwrap();
        assert!(certify::check_touching_families(&g2, &web, &l, &r, 1).is_none());
    }

    #[test]
    fn oracle_outputs_pass_certify() {
        let (g, web) = plant_subdivision(6, &uniform_lengths(6, 2), 0.05, 9).unwrap();
        if let Some(s) = brute_clean_set(&g, &web, 3).unwrap() {
            assert!(certify::check_clean_set(&g, &web, &s, 3, CleanSetClaims::Full).is_none());
        }
        let (small, _) = plant_subdivision(4, &uniform_lengths(4, 2), 0.1, 9).unwrap();
        if let Some(rep) = brute_induced(&small, 2).unwrap().biclique {
            assert!(certify::check_biclique(&small, &rep.0, &rep.1, 2).is_none());
        }
    }
}
