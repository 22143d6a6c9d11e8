//! Independent verifiers for every certificate kind. These share no search
//! code with the extraction pipeline and recompute every adjacency claim
//! directly from the graph, so a corrupted web cannot launder a bad
//! certificate. Each checker reports the first violated clause.

use crate::cert::{Certificate, CleanSetClaims, Outcome};
use crate::graph::{Graph, VertexSet};
use crate::web::Web;

fn edge_between(g: &Graph, xs: &[u32], ys: &[u32]) -> bool {
    xs.iter()
        .any(|&x| ys.iter().any(|&y| x != y && g.has_edge(x, y)))
}

fn in_graph(g: &Graph, vs: &[u32]) -> Option<u32> {
    vs.iter().copied().find(|&v| !g.contains_vertex(v))
}

/// `size` distinct vertices, all pairs adjacent.
pub fn check_clique(g: &Graph, vertices: &VertexSet, size: usize) -> Option<String> {
    if vertices.len() != size {
        return Some(format!(
            "clique lists {} distinct vertices, claims {size}",
            vertices.len()
        ));
    }
    if let Some(v) = in_graph(g, vertices.as_slice()) {
        return Some(format!("clique vertex {v} is not in the graph"));
    }
    let vs = vertices.as_slice();
    for (i, &u) in vs.iter().enumerate() {
        for &v in &vs[i + 1..] {
            if !g.has_edge(u, v) {
                return Some(format!("clique pair {u}, {v} is not an edge"));
            }
        }
    }
    None
}

/// Disjoint halves of `size` vertices each, both stable, cross pairs all
/// edges.
pub fn check_biclique(
    g: &Graph,
    left: &VertexSet,
    right: &VertexSet,
    size: usize,
) -> Option<String> {
    if left.len() != size || right.len() != size {
        return Some(format!(
            "biclique halves have {} and {} distinct vertices, claim {size} each",
            left.len(),
            right.len()
        ));
    }
    if !left.is_disjoint_from(right) {
        return Some("biclique halves intersect".into());
    }
    if let Some(v) = in_graph(g, left.as_slice()).or(in_graph(g, right.as_slice())) {
        return Some(format!("biclique vertex {v} is not in the graph"));
    }
    for side in [left, right] {
        let vs = side.as_slice();
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                if g.has_edge(u, v) {
                    return Some(format!("biclique side has internal edge {u}, {v}"));
                }
            }
        }
    }
    for u in left.iter() {
        for v in right.iter() {
            if !g.has_edge(u, v) {
                return Some(format!("biclique cross pair {u}, {v} is not an edge"));
            }
        }
    }
    None
}

fn interior_of(web: &Web, x: u32, y: u32) -> Result<Vec<u32>, String> {
    match web.path(x, y) {
        Some(p) => Ok(p.interior().to_vec()),
        None => Err(format!("web has no path for pair {{{x}, {y}}}")),
    }
}

/// Clean branch subset: membership and size always; stability, the
/// triple condition, and pairwise interior anticompleteness per the claims.
pub fn check_clean_set(
    g: &Graph,
    web: &Web,
    set: &VertexSet,
    size: usize,
    claims: CleanSetClaims,
) -> Option<String> {
    if set.len() != size {
        return Some(format!(
            "clean set lists {} distinct vertices, claims {size}",
            set.len()
        ));
    }
    if !set.is_subset_of(web.branch()) {
        return Some("clean set is not a subset of the branch set".into());
    }
    if let Some(v) = in_graph(g, set.as_slice()) {
        return Some(format!("clean-set vertex {v} is not in the graph"));
    }
    let vs: Vec<u32> = set.iter().collect();
    if claims.stable() {
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                if g.has_edge(u, v) {
                    return Some(format!("clean set is not stable: edge {u}, {v}"));
                }
            }
        }
    }
    if claims.triple() {
        for &x in &vs {
            for (i, &y) in vs.iter().enumerate() {
                if y == x {
                    continue;
                }
                for &z in &vs[i + 1..] {
                    if z == x {
                        continue;
                    }
                    let int = match interior_of(web, y, z) {
                        Ok(i) => i,
                        Err(e) => return Some(e),
                    };
                    if edge_between(g, &[x], &int) {
                        return Some(format!(
                            "{x} has a neighbor in the interior of the {y}-{z} path"
                        ));
                    }
                }
            }
        }
    }
    if claims.interior_pairs() {
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for (i, &x) in vs.iter().enumerate() {
            for &y in &vs[i + 1..] {
                pairs.push((x, y));
            }
        }
        for (i, &(x, y)) in pairs.iter().enumerate() {
            let int_a = match interior_of(web, x, y) {
                Ok(v) => v,
                Err(e) => return Some(e),
            };
            for &(x2, y2) in &pairs[i + 1..] {
                let int_b = match interior_of(web, x2, y2) {
                    Ok(v) => v,
                    Err(e) => return Some(e),
                };
                if edge_between(g, &int_a, &int_b) {
                    return Some(format!(
                        "interiors of {x}-{y} and {x2}-{y2} are not anticomplete"
                    ));
                }
            }
        }
    }
    None
}

fn normalize_pairs(pairs: &[(u32, u32)]) -> Result<Vec<(u32, u32)>, String> {
    let mut out = Vec::with_capacity(pairs.len());
    for &(x, y) in pairs {
        if x == y {
            return Err(format!("pair {{{x}, {y}}} is degenerate"));
        }
        out.push((x.min(y), x.max(y)));
    }
    Ok(out)
}

/// Every anchor has a neighbor on the path of every listed pair; pairs are
/// pairwise disjoint 2-subsets of the branch set avoiding the anchors.
pub fn check_pinned_pair(
    g: &Graph,
    web: &Web,
    anchors: &VertexSet,
    pairs: &[(u32, u32)],
    anchor_count: usize,
    pair_count: usize,
) -> Option<String> {
    if anchors.len() != anchor_count {
        return Some(format!(
            "{} distinct anchors listed, claims {anchor_count}",
            anchors.len()
        ));
    }
    if pairs.len() != pair_count {
        return Some(format!("{} pairs listed, claims {pair_count}", pairs.len()));
    }
    if !anchors.is_subset_of(web.branch()) {
        return Some("anchors are not a subset of the branch set".into());
    }
    let pairs = match normalize_pairs(pairs) {
        Ok(p) => p,
        Err(e) => return Some(e),
    };
    for (i, &(y, z)) in pairs.iter().enumerate() {
        if !web.branch().contains(y) || !web.branch().contains(z) {
            return Some(format!("pair {{{y}, {z}}} is not within the branch set"));
        }
        if anchors.contains(y) || anchors.contains(z) {
            return Some(format!("pair {{{y}, {z}}} meets the anchor set"));
        }
        for &(y2, z2) in &pairs[i + 1..] {
            if y == y2 || y == z2 || z == y2 || z == z2 {
                return Some(format!(
                    "pairs {{{y}, {z}}} and {{{y2}, {z2}}} are not disjoint"
                ));
            }
        }
    }
    for x in anchors.iter() {
        for &(y, z) in &pairs {
            let path = match web.path(y, z) {
                Some(p) => p.vertices().to_vec(),
                None => return Some(format!("web has no path for pair {{{y}, {z}}}")),
            };
            if let Some(v) = in_graph(g, &path) {
                return Some(format!("path vertex {v} is not in the graph"));
            }
            if !edge_between(g, &[x], &path) {
                return Some(format!("anchor {x} has no neighbor on the {y}-{z} path"));
            }
        }
    }
    None
}

/// Two disjoint pair families of the claimed size whose interiors all touch
/// across the families.
pub fn check_touching_families(
    g: &Graph,
    web: &Web,
    left: &[(u32, u32)],
    right: &[(u32, u32)],
    family_size: usize,
) -> Option<String> {
    let left = match normalize_pairs(left) {
        Ok(p) => p,
        Err(e) => return Some(e),
    };
    let right = match normalize_pairs(right) {
        Ok(p) => p,
        Err(e) => return Some(e),
    };
    let mut l_dedup = left.clone();
    l_dedup.sort_unstable();
    l_dedup.dedup();
    let mut r_dedup = right.clone();
    r_dedup.sort_unstable();
    r_dedup.dedup();
    if l_dedup.len() != family_size || r_dedup.len() != family_size {
        return Some(format!(
            "families have {} and {} distinct pairs, claim {family_size} each",
            l_dedup.len(),
            r_dedup.len()
        ));
    }
    if l_dedup.iter().any(|p| r_dedup.contains(p)) {
        return Some("the two families share a pair".into());
    }
    for &(x, y) in left.iter().chain(right.iter()) {
        if !web.branch().contains(x) || !web.branch().contains(y) {
            return Some(format!("pair {{{x}, {y}}} is not within the branch set"));
        }
    }
    for &(x, y) in &left {
        let int_a = match interior_of(web, x, y) {
            Ok(v) => v,
            Err(e) => return Some(e),
        };
        for &(x2, y2) in &right {
            let int_b = match interior_of(web, x2, y2) {
                Ok(v) => v,
                Err(e) => return Some(e),
            };
            if let Some(v) = in_graph(g, &int_a).or(in_graph(g, &int_b)) {
                return Some(format!("interior vertex {v} is not in the graph"));
            }
            if !edge_between(g, &int_a, &int_b) {
                return Some(format!(
                    "interiors of {x}-{y} and {x2}-{y2} are anticomplete"
                ));
            }
        }
    }
    None
}

/// Dispatches on the certificate kind using its recorded sizes. An
/// inconclusive certificate claims nothing and passes vacuously.
pub fn verify_certificate(g: &Graph, web: &Web, cert: &Certificate) -> Result<(), String> {
    let violation = match &cert.outcome {
        Outcome::Clique { size, vertices } => check_clique(g, vertices, *size),
        Outcome::Biclique { size, left, right } => check_biclique(g, left, right, *size),
        Outcome::CleanSet { size, set, claims } => check_clean_set(g, web, set, *size, *claims),
        Outcome::PinnedPair {
            anchor_count,
            pair_count,
            anchors,
            pairs,
        } => check_pinned_pair(g, web, anchors, pairs, *anchor_count, *pair_count),
        Outcome::TouchingFamilies {
            family_size,
            left,
            right,
        } => check_touching_families(g, web, left, right, *family_size),
        Outcome::Inconclusive { .. } => None,
    };
    match violation {
        None => Ok(()),
        Some(v) => Err(v),
    }
}

/// Boolean front for clique certificates.
pub fn verify_clique(g: &Graph, cert: &Certificate) -> bool {
    matches!(&cert.outcome, Outcome::Clique { size, vertices }
        if check_clique(g, vertices, *size).is_none())
}

pub fn verify_biclique(g: &Graph, cert: &Certificate) -> bool {
    matches!(&cert.outcome, Outcome::Biclique { size, left, right }
        if check_biclique(g, left, right, *size).is_none())
}

pub fn verify_clean_set(g: &Graph, web: &Web, cert: &Certificate, size: usize) -> bool {
    matches!(&cert.outcome, Outcome::CleanSet { size: recorded, set, claims }
        if *recorded == size && check_clean_set(g, web, set, size, *claims).is_none())
}

pub fn verify_pinned_pair(
    g: &Graph,
    web: &Web,
    cert: &Certificate,
    anchor_count: usize,
    pair_count: usize,
) -> bool {
    matches!(&cert.outcome, Outcome::PinnedPair { anchor_count: a, pair_count: b, anchors, pairs }
        if *a == anchor_count
            && *b == pair_count
            && check_pinned_pair(g, web, anchors, pairs, anchor_count, pair_count).is_none())
}

pub fn verify_touching_families(
    g: &Graph,
    web: &Web,
    cert: &Certificate,
    family_size: usize,
) -> bool {
    matches!(&cert.outcome, Outcome::TouchingFamilies { family_size: c, left, right }
        if *c == family_size
            && check_touching_families(g, web, left, right, family_size).is_none())
}
