//! The extraction pipeline: colorings over branch indices feed the
//! monochromatic search, whose witness is either split into the structured
//! outcome (pinned pair, touching families) or handed back as a clean set.
//! The composed bounds sit astronomically beyond desk scale, so whenever the
//! bound-driven route cannot run on the actual web, exact mode falls back to
//! direct exhaustive search at the requested output sizes. Which route
//! produced a certificate is recorded on the certificate, and every
//! certificate is re-verified before it is returned.

use crate::bounds::{self, BigBound};
use crate::cert::{Certificate, CleanSetClaims, Outcome, ParamsEcho, Route};
use crate::certify;
use crate::error::{Error, Result};
use crate::graph::{
    find_induced_biclique_with, find_induced_clique_with, Graph, VertexSet,
};
use crate::ramsey::{find_monochromatic_with, ColorId, ColoringTable, SearchMode};
use crate::search::{Budget, LexCombinations, SearchOutcome};
use crate::web::{profile, restrict, validate_web, Web};
use std::collections::HashMap;
use std::sync::Mutex;

/// Parameters for the full extraction. The stage multiplicities `a`, `b`,
/// `c` are normally derived from the touching-count bound (clamped to what
/// the web can carry) and can be pinned explicitly for experiments.
#[derive(Debug, Clone)]
pub struct ExtractionParams {
    pub r: usize,
    pub s: usize,
    pub t: usize,
    pub a: Option<usize>,
    pub b: Option<usize>,
    pub c: Option<usize>,
    pub mode: SearchMode,
    pub budget: u64,
}

impl ExtractionParams {
    pub fn new(r: usize, s: usize, t: usize, mode: SearchMode, budget: u64) -> Self {
        ExtractionParams {
            r,
            s,
            t,
            a: None,
            b: None,
            c: None,
            mode,
            budget,
        }
    }
}

/// Which of the three sorted positions of a branch triple have a neighbor on
/// the path joining the other two. Bit `p` set means position `p` does.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PinProfile(pub u8);

impl PinProfile {
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, position: usize) -> bool {
        self.0 >> position & 1 == 1
    }

    pub fn min_position(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }
}

/// The six position pairs of a sorted quadruple, in colex order.
pub const QUAD_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)];

/// Which pairs of position pairs of a branch quadruple have touching path
/// interiors. Bit `q*(q-1)/2 + p` (for `p < q` indices into [`QUAD_PAIRS`])
/// set means the interiors of those two paths see an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TouchProfile(pub u16);

impl TouchProfile {
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Decodes the lowest set bit into its two position pairs.
    pub fn min_pair(self) -> Option<((usize, usize), (usize, usize))> {
        if self.0 == 0 {
            return None;
        }
        let bit = self.0.trailing_zeros() as usize;
        let mut idx = 0;
        for q in 1..6 {
            for p in 0..q {
                if idx == bit {
                    return Some((QUAD_PAIRS[p], QUAD_PAIRS[q]));
                }
                idx += 1;
            }
        }
        unreachable!("bit index below 15 decodes")
    }
}

fn edge_between(g: &Graph, xs: &[u32], ys: &[u32]) -> bool {
    xs.iter()
        .any(|&x| ys.iter().any(|&y| x != y && g.has_edge(x, y)))
}

/// Profile of a branch triple: position `p` is set iff that vertex has a
/// neighbor anywhere on the path joining the other two.
pub fn pin_profile(g: &Graph, web: &Web, order: &[u32], triple: [usize; 3]) -> Result<PinProfile> {
    let mut idx = triple;
    idx.sort_unstable();
    let mut bits = 0u8;
    for p in 0..3 {
        let x = order[idx[p]];
        let others: Vec<u32> = (0..3).filter(|&q| q != p).map(|q| order[idx[q]]).collect();
        let path = web
            .path(others[0], others[1])
            .ok_or(Error::PairNotInWeb(
                others[0].min(others[1]),
                others[0].max(others[1]),
            ))?;
        if edge_between(g, &[x], path.vertices()) {
            bits |= 1 << p;
        }
    }
    Ok(PinProfile(bits))
}

/// Profile of a branch quadruple: which pairs of its six paths have
/// interiors joined by an edge.
pub fn touch_profile(
    g: &Graph,
    web: &Web,
    order: &[u32],
    quad: [usize; 4],
) -> Result<TouchProfile> {
    let mut idx = quad;
    idx.sort_unstable();
    let mut interiors: Vec<Vec<u32>> = Vec::with_capacity(6);
    for &(p, q) in &QUAD_PAIRS {
        let x = order[idx[p]];
        let y = order[idx[q]];
        let path = web
            .path(x, y)
            .ok_or(Error::PairNotInWeb(x.min(y), x.max(y)))?;
        interiors.push(path.interior().to_vec());
    }
    let mut bits = 0u16;
    let mut bit = 0;
    for q in 1..6 {
        for p in 0..q {
            if edge_between(g, &interiors[p], &interiors[q]) {
                bits |= 1 << bit;
            }
            bit += 1;
        }
    }
    Ok(TouchProfile(bits))
}

fn pin_table<'a>(g: &'a Graph, web: &'a Web, order: Vec<u32>) -> ColoringTable<'a> {
    ColoringTable::new(order.len(), 3, move |s: &[usize]| {
        pin_profile(g, web, &order, [s[0], s[1], s[2]])
            .expect("validated web has a path for every branch pair")
            .0 as ColorId
    })
}

fn touch_table<'a>(g: &'a Graph, web: &'a Web, order: Vec<u32>) -> ColoringTable<'a> {
    ColoringTable::new(order.len(), 4, move |s: &[usize]| {
        touch_profile(g, web, &order, [s[0], s[1], s[2], s[3]])
            .expect("validated web has a path for every branch pair")
            .0 as ColorId
    })
}

fn ensure_valid(g: &Graph, web: &Web) -> Result<()> {
    let report = validate_web(g, web);
    if report.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidWeb(report.to_string()))
    }
}

fn positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        Err(Error::BadParameter(format!("{name} must be at least 1")))
    } else {
        Ok(())
    }
}

fn norm_pair(x: u32, y: u32) -> (u32, u32) {
    (x.min(y), x.max(y))
}

// ---------------------------------------------------------------------------
// Direct searches (exact-mode fallbacks). These run at the requested output
// sizes instead of the composed bound sizes and are exhaustive under budget.
// ---------------------------------------------------------------------------

fn search_pinned_direct(
    g: &Graph,
    web: &Web,
    branch: &[u32],
    anchor_count: usize,
    pair_count: usize,
    budget: &mut Budget,
) -> SearchOutcome<(VertexSet, Vec<(u32, u32)>)> {
    if anchor_count + 2 * pair_count > branch.len() {
        return SearchOutcome::Absent;
    }
    for idx in LexCombinations::new(branch.len(), anchor_count) {
        if !budget.step() {
            return SearchOutcome::Inconclusive { steps: budget.used() };
        }
        let anchors: Vec<u32> = idx.iter().map(|&i| branch[i]).collect();
        let rest: Vec<u32> = branch
            .iter()
            .copied()
            .filter(|v| !anchors.contains(v))
            .collect();
        let mut taken = vec![false; rest.len()];
        let mut pairs = Vec::new();
        match pinned_pairs_dfs(g, web, &anchors, &rest, 0, &mut taken, &mut pairs, pair_count, budget)
        {
            PairsDfs::Found(found) => {
                return SearchOutcome::Found((VertexSet::new(anchors), found));
            }
            PairsDfs::Exhausted => {}
            PairsDfs::OutOfBudget => {
                return SearchOutcome::Inconclusive { steps: budget.used() };
            }
        }
    }
    SearchOutcome::Absent
}

enum PairsDfs {
    Found(Vec<(u32, u32)>),
    Exhausted,
    OutOfBudget,
}

#[allow(clippy::too_many_arguments)]
fn pinned_pairs_dfs(
    g: &Graph,
    web: &Web,
    anchors: &[u32],
    rest: &[u32],
    start: usize,
    taken: &mut [bool],
    pairs: &mut Vec<(u32, u32)>,
    want: usize,
    budget: &mut Budget,
) -> PairsDfs {
    if pairs.len() == want {
        return PairsDfs::Found(pairs.clone());
    }
    for first in start..rest.len() {
        if taken[first] {
            continue;
        }
        for second in first + 1..rest.len() {
            if taken[second] {
                continue;
            }
            if !budget.step() {
                return PairsDfs::OutOfBudget;
            }
            let (y, z) = (rest[first], rest[second]);
            let path = web.path(y, z).expect("validated web has all branch paths");
            if !anchors
                .iter()
                .all(|&x| edge_between(g, &[x], path.vertices()))
            {
                continue;
            }
            taken[first] = true;
            taken[second] = true;
            pairs.push(norm_pair(y, z));
            match pinned_pairs_dfs(g, web, anchors, rest, first + 1, taken, pairs, want, budget) {
                PairsDfs::Exhausted => {}
                other => return other,
            }
            pairs.pop();
            taken[first] = false;
            taken[second] = false;
        }
    }
    PairsDfs::Exhausted
}

fn search_clean_direct(
    g: &Graph,
    web: &Web,
    branch: &[u32],
    size: usize,
    claims: CleanSetClaims,
    budget: &mut Budget,
) -> SearchOutcome<VertexSet> {
    if size > branch.len() {
        return SearchOutcome::Absent;
    }
    for idx in LexCombinations::new(branch.len(), size) {
        if !budget.step() {
            return SearchOutcome::Inconclusive { steps: budget.used() };
        }
        let set = VertexSet::new(idx.iter().map(|&i| branch[i]).collect());
        if certify::check_clean_set(g, web, &set, size, claims).is_none() {
            return SearchOutcome::Found(set);
        }
    }
    SearchOutcome::Absent
}

type PairFamilies = (Vec<(u32, u32)>, Vec<(u32, u32)>);

/// Touching families are a biclique in the "interiors touch" relation over
/// branch pairs: every left pair's interior must see every right pair's.
fn search_touching_direct(
    g: &Graph,
    web: &Web,
    branch: &[u32],
    family_size: usize,
    budget: &mut Budget,
) -> SearchOutcome<PairFamilies> {
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    for (i, &x) in branch.iter().enumerate() {
        for &y in &branch[i + 1..] {
            pairs.push((x, y));
        }
    }
    if pairs.len() < 2 * family_size {
        return SearchOutcome::Absent;
    }
    let interiors: Vec<Vec<u32>> = pairs
        .iter()
        .map(|&(x, y)| {
            web.path(x, y)
                .expect("validated web has all branch paths")
                .interior()
                .to_vec()
        })
        .collect();
    let m = pairs.len();
    let mut touch = vec![vec![false; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            if edge_between(g, &interiors[i], &interiors[j]) {
                touch[i][j] = true;
                touch[j][i] = true;
            }
        }
    }
    let mut left = Vec::new();
    let common = vec![true; m];
    match touching_left_dfs(&touch, 0, &mut left, &common, family_size, budget) {
        Some(Ok((l_idx, r_idx))) => SearchOutcome::Found((
            l_idx.iter().map(|&i| pairs[i]).collect(),
            r_idx.iter().map(|&i| pairs[i]).collect(),
        )),
        Some(Err(())) => SearchOutcome::Inconclusive { steps: budget.used() },
        None => SearchOutcome::Absent,
    }
}

type FamilyIdx = (Vec<usize>, Vec<usize>);

fn touching_left_dfs(
    touch: &[Vec<bool>],
    start: usize,
    left: &mut Vec<usize>,
    common: &[bool],
    family_size: usize,
    budget: &mut Budget,
) -> Option<std::result::Result<FamilyIdx, ()>> {
    if left.len() == family_size {
        let right: Vec<usize> = (0..touch.len())
            .filter(|i| common[*i] && !left.contains(i))
            .take(family_size)
            .collect();
        if right.len() == family_size {
            return Some(Ok((left.clone(), right)));
        }
        return None;
    }
    for i in start..touch.len() {
        if !budget.step() {
            return Some(Err(()));
        }
        let next: Vec<bool> = common
            .iter()
            .zip(&touch[i])
            .map(|(&c, &t)| c && t)
            .collect();
        if next.iter().filter(|&&b| b).count() < family_size {
            continue;
        }
        left.push(i);
        if let Some(out) = touching_left_dfs(touch, i + 1, left, &next, family_size, budget) {
            return Some(out);
        }
        left.pop();
    }
    None
}

// ---------------------------------------------------------------------------
// Stage one: pinned pair or a stable clean set.
// ---------------------------------------------------------------------------

fn internal(e: Option<String>, what: &str) -> Result<()> {
    match e {
        None => Ok(()),
        Some(v) => Err(Error::Internal(format!("{what}: {v}"))),
    }
}

#[allow(clippy::too_many_arguments)]
fn pinned_or_clean_inner(
    g: &Graph,
    web: &Web,
    branch: &[u32],
    anchor_count: usize,
    pair_count: usize,
    clean_size: usize,
    mode: SearchMode,
    budget: &mut Budget,
    trace: &mut Vec<String>,
) -> Result<(Outcome, Route)> {
    let split_need = 3 * anchor_count + 2 * pair_count;
    let target = split_need.max(clean_size);
    if target <= branch.len() {
        let table = pin_table(g, web, branch.to_vec());
        match find_monochromatic_with(&table, target, mode, budget)? {
            SearchOutcome::Found(w) => {
                let color = PinProfile(w.color as u8);
                if let Some(f_pos) = color.min_position() {
                    assert!(w.members.len() >= split_need);
                    let (a, b) = (anchor_count, pair_count);
                    let block_j = &w.members[a..a + b];
                    let block_k = &w.members[2 * a + b..2 * a + 2 * b];
                    let anchor_block = match f_pos {
                        0 => &w.members[0..a],
                        1 => &w.members[a + b..2 * a + b],
                        _ => &w.members[2 * a + 2 * b..3 * a + 2 * b],
                    };
                    let anchors =
                        VertexSet::new(anchor_block.iter().map(|&i| branch[i]).collect());
                    let pairs: Vec<(u32, u32)> = block_j
                        .iter()
                        .zip(block_k)
                        .map(|(&j, &k)| norm_pair(branch[j], branch[k]))
                        .collect();
                    internal(
                        certify::check_pinned_pair(g, web, &anchors, &pairs, a, b),
                        "pinned pair built from a monochromatic block split",
                    )?;
                    trace.push(format!(
                        "pinned stage: monochromatic target {target} met, profile {:#05b}, \
                         anchors at position {f_pos}",
                        color.0
                    ));
                    return Ok((
                        Outcome::PinnedPair {
                            anchor_count: a,
                            pair_count: b,
                            anchors,
                            pairs,
                        },
                        Route::BoundDriven,
                    ));
                }
                let set =
                    VertexSet::new(w.members[..clean_size].iter().map(|&i| branch[i]).collect());
                internal(
                    certify::check_clean_set(g, web, &set, clean_size, CleanSetClaims::StableTriple),
                    "clean set from an all-empty pin profile",
                )?;
                trace.push(format!(
                    "pinned stage: monochromatic target {target} met with empty profile"
                ));
                return Ok((
                    Outcome::CleanSet {
                        size: clean_size,
                        set,
                        claims: CleanSetClaims::StableTriple,
                    },
                    Route::BoundDriven,
                ));
            }
            SearchOutcome::Absent | SearchOutcome::Inconclusive { .. } => {}
        }
    }
    if mode != SearchMode::Exact {
        return Ok((
            Outcome::Inconclusive {
                reason: format!(
                    "monochromatic step needs {target} branch vertices ({} available) and \
                     constructive mode has no direct fallback",
                    branch.len()
                ),
                steps: budget.used(),
            },
            Route::BoundDriven,
        ));
    }
    match search_pinned_direct(g, web, branch, anchor_count, pair_count, budget) {
        SearchOutcome::Found((anchors, pairs)) => {
            internal(
                certify::check_pinned_pair(g, web, &anchors, &pairs, anchor_count, pair_count),
                "pinned pair from direct search",
            )?;
            trace.push("pinned stage: direct search found a pinned pair".into());
            return Ok((
                Outcome::PinnedPair {
                    anchor_count,
                    pair_count,
                    anchors,
                    pairs,
                },
                Route::DirectSearch,
            ));
        }
        SearchOutcome::Inconclusive { steps } => {
            return Ok((
                Outcome::Inconclusive {
                    reason: "budget exhausted during the direct pinned-pair search".into(),
                    steps,
                },
                Route::DirectSearch,
            ));
        }
        SearchOutcome::Absent => {}
    }
    match search_clean_direct(g, web, branch, clean_size, CleanSetClaims::StableTriple, budget) {
        SearchOutcome::Found(set) => {
            trace.push("pinned stage: direct search found a stable clean set".into());
            Ok((
                Outcome::CleanSet {
                    size: clean_size,
                    set,
                    claims: CleanSetClaims::StableTriple,
                },
                Route::DirectSearch,
            ))
        }
        SearchOutcome::Inconclusive { steps } => Ok((
            Outcome::Inconclusive {
                reason: "budget exhausted during the direct clean-set search".into(),
                steps,
            },
            Route::DirectSearch,
        )),
        SearchOutcome::Absent => Ok((
            Outcome::Inconclusive {
                reason: format!(
                    "exhausted: no pinned pair ({anchor_count}, {pair_count}) and no stable \
                     clean set of size {clean_size} in this web"
                ),
                steps: budget.used(),
            },
            Route::DirectSearch,
        )),
    }
}

/// Finds either a pinned pair (every anchor has a neighbor on every listed
/// path) or a clean set that is stable with all triples avoiding interiors.
pub fn extract_pinned_or_clean(
    g: &Graph,
    web: &Web,
    anchor_count: usize,
    pair_count: usize,
    clean_size: usize,
    mode: SearchMode,
    budget: u64,
) -> Result<Certificate> {
    positive("anchor count", anchor_count)?;
    positive("pair count", pair_count)?;
    positive("clean size", clean_size)?;
    ensure_valid(g, web)?;
    let branch: Vec<u32> = web.branch().iter().collect();
    let mut b = Budget::new(budget);
    let mut trace = Vec::new();
    let (outcome, route) = pinned_or_clean_inner(
        g,
        web,
        &branch,
        anchor_count,
        pair_count,
        clean_size,
        mode,
        &mut b,
        &mut trace,
    )?;
    Ok(Certificate {
        outcome,
        route,
        params: ParamsEcho {
            a: Some(anchor_count as u64),
            b: Some(pair_count as u64),
            s: Some(clean_size as u64),
            mode: Some(mode),
            budget: Some(budget),
            ..Default::default()
        },
        trace,
    })
}

// ---------------------------------------------------------------------------
// Stage two: touching families or an interior-clean set.
// ---------------------------------------------------------------------------

#[allow(clippy::too_many_arguments)]
fn touching_or_clean_inner(
    g: &Graph,
    web: &Web,
    branch: &[u32],
    family_size: usize,
    clean_size: usize,
    mode: SearchMode,
    budget: &mut Budget,
    trace: &mut Vec<String>,
) -> Result<(Outcome, Route)> {
    let split_need = 4 * family_size;
    let target = split_need.max(clean_size);
    if target <= branch.len() {
        let table = touch_table(g, web, branch.to_vec());
        match find_monochromatic_with(&table, target, mode, budget)? {
            SearchOutcome::Found(w) => {
                let color = TouchProfile(w.color as u16);
                if let Some((pair_a, pair_b)) = color.min_pair() {
                    assert!(w.members.len() >= split_need);
                    let c = family_size;
                    let block = |pos: usize| &w.members[pos * c..(pos + 1) * c];
                    // Orient so that the second position of each pair avoids
                    // the other pair; the first positions may coincide.
                    let (i1, j1, i2, j2) = orient_pairs(pair_a, pair_b);
                    let t1 = block(i1)[0];
                    let t2 = block(i2)[0];
                    let left: Vec<(u32, u32)> = block(j1)
                        .iter()
                        .map(|&u| norm_pair(branch[t1], branch[u]))
                        .collect();
                    let right: Vec<(u32, u32)> = block(j2)
                        .iter()
                        .map(|&u| norm_pair(branch[t2], branch[u]))
                        .collect();
                    internal(
                        certify::check_touching_families(g, web, &left, &right, c),
                        "touching families built from a monochromatic block split",
                    )?;
                    trace.push(format!(
                        "interior stage: monochromatic target {target} met, touching profile \
                         {:#017b}",
                        color.0
                    ));
                    return Ok((
                        Outcome::TouchingFamilies {
                            family_size: c,
                            left,
                            right,
                        },
                        Route::BoundDriven,
                    ));
                }
                let set =
                    VertexSet::new(w.members[..clean_size].iter().map(|&i| branch[i]).collect());
                internal(
                    certify::check_clean_set(g, web, &set, clean_size, CleanSetClaims::InteriorPairs),
                    "clean set from an all-empty touch profile",
                )?;
                trace.push(format!(
                    "interior stage: monochromatic target {target} met with empty profile"
                ));
                return Ok((
                    Outcome::CleanSet {
                        size: clean_size,
                        set,
                        claims: CleanSetClaims::InteriorPairs,
                    },
                    Route::BoundDriven,
                ));
            }
            SearchOutcome::Absent | SearchOutcome::Inconclusive { .. } => {}
        }
    }
    if mode != SearchMode::Exact {
        return Ok((
            Outcome::Inconclusive {
                reason: format!(
                    "monochromatic step needs {target} branch vertices ({} available) and \
                     constructive mode has no direct fallback",
                    branch.len()
                ),
                steps: budget.used(),
            },
            Route::BoundDriven,
        ));
    }
    match search_touching_direct(g, web, branch, family_size, budget) {
        SearchOutcome::Found((left, right)) => {
            internal(
                certify::check_touching_families(g, web, &left, &right, family_size),
                "touching families from direct search",
            )?;
            trace.push("interior stage: direct search found touching families".into());
            return Ok((
                Outcome::TouchingFamilies {
                    family_size,
                    left,
                    right,
                },
                Route::DirectSearch,
            ));
        }
        SearchOutcome::Inconclusive { steps } => {
            return Ok((
                Outcome::Inconclusive {
                    reason: "budget exhausted during the direct touching-families search".into(),
                    steps,
                },
                Route::DirectSearch,
            ));
        }
        SearchOutcome::Absent => {}
    }
    match search_clean_direct(g, web, branch, clean_size, CleanSetClaims::InteriorPairs, budget) {
        SearchOutcome::Found(set) => {
            trace.push("interior stage: direct search found an interior-clean set".into());
            Ok((
                Outcome::CleanSet {
                    size: clean_size,
                    set,
                    claims: CleanSetClaims::InteriorPairs,
                },
                Route::DirectSearch,
            ))
        }
        SearchOutcome::Inconclusive { steps } => Ok((
            Outcome::Inconclusive {
                reason: "budget exhausted during the direct clean-set search".into(),
                steps,
            },
            Route::DirectSearch,
        )),
        SearchOutcome::Absent => Ok((
            Outcome::Inconclusive {
                reason: format!(
                    "exhausted: no touching families of size {family_size} and no \
                     interior-clean set of size {clean_size} in this web"
                ),
                steps: budget.used(),
            },
            Route::DirectSearch,
        )),
    }
}

/// Writes both pairs as (first, second) with each second position outside
/// the other pair. When the pairs share a position it becomes both firsts.
fn orient_pairs(
    a: (usize, usize),
    b: (usize, usize),
) -> (usize, usize, usize, usize) {
    let shared = [a.0, a.1].iter().copied().find(|x| *x == b.0 || *x == b.1);
    match shared {
        Some(x) => {
            let j1 = if a.0 == x { a.1 } else { a.0 };
            let j2 = if b.0 == x { b.1 } else { b.0 };
            (x, j1, x, j2)
        }
        None => (a.0, a.1, b.0, b.1),
    }
}

/// Finds either two touching pair families or a clean set whose path
/// interiors are pairwise anticomplete.
pub fn extract_touching_or_clean(
    g: &Graph,
    web: &Web,
    family_size: usize,
    clean_size: usize,
    mode: SearchMode,
    budget: u64,
) -> Result<Certificate> {
    positive("family size", family_size)?;
    positive("clean size", clean_size)?;
    ensure_valid(g, web)?;
    let branch: Vec<u32> = web.branch().iter().collect();
    let mut b = Budget::new(budget);
    let mut trace = Vec::new();
    let (outcome, route) = touching_or_clean_inner(
        g,
        web,
        &branch,
        family_size,
        clean_size,
        mode,
        &mut b,
        &mut trace,
    )?;
    Ok(Certificate {
        outcome,
        route,
        params: ParamsEcho {
            c: Some(family_size as u64),
            s: Some(clean_size as u64),
            mode: Some(mode),
            budget: Some(budget),
            ..Default::default()
        },
        trace,
    })
}

// ---------------------------------------------------------------------------
// Both stages composed.
// ---------------------------------------------------------------------------

struct CombinedResult {
    outcome: Outcome,
    route: Route,
    clean_target_used: Option<u64>,
}

#[allow(clippy::too_many_arguments)]
fn combined_inner(
    g: &Graph,
    web: &Web,
    branch: &[u32],
    anchor_count: usize,
    pair_count: usize,
    family_size: usize,
    clean_size: usize,
    mode: SearchMode,
    budget: &mut Budget,
    trace: &mut Vec<String>,
) -> Result<CombinedResult> {
    let sigma = bounds::interior_stage_bound(
        &BigBound::from_u64(family_size as u64),
        &BigBound::from_u64(clean_size as u64),
    )?;
    let sigma_small = sigma.as_u64().and_then(|v| {
        let v = v as usize;
        (v <= branch.len()).then_some(v)
    });
    if let Some(stage_one_target) = sigma_small {
        trace.push(format!(
            "combined: interior-stage web size {stage_one_target} fits this web"
        ));
        let (out1, route1) = pinned_or_clean_inner(
            g,
            web,
            branch,
            anchor_count,
            pair_count,
            stage_one_target,
            mode,
            budget,
            trace,
        )?;
        match out1 {
            Outcome::PinnedPair { .. } => {
                return Ok(CombinedResult {
                    outcome: out1,
                    route: route1,
                    clean_target_used: Some(stage_one_target as u64),
                });
            }
            Outcome::CleanSet { ref set, .. } => {
                let sub = restrict(web, set)?;
                let sub_branch: Vec<u32> = sub.branch().iter().collect();
                let (out2, route2) = touching_or_clean_inner(
                    g,
                    &sub,
                    &sub_branch,
                    family_size,
                    clean_size,
                    mode,
                    budget,
                    trace,
                )?;
                let route = if route1 == Route::BoundDriven && route2 == Route::BoundDriven {
                    Route::BoundDriven
                } else {
                    Route::DirectSearch
                };
                match out2 {
                    Outcome::TouchingFamilies { .. } => {
                        return Ok(CombinedResult {
                            outcome: out2,
                            route,
                            clean_target_used: Some(stage_one_target as u64),
                        });
                    }
                    Outcome::CleanSet { size, set, .. } => {
                        internal(
                            certify::check_clean_set(g, web, &set, size, CleanSetClaims::Full),
                            "combined clean set inherits stability from stage one",
                        )?;
                        return Ok(CombinedResult {
                            outcome: Outcome::CleanSet {
                                size,
                                set,
                                claims: CleanSetClaims::Full,
                            },
                            route,
                            clean_target_used: Some(stage_one_target as u64),
                        });
                    }
                    Outcome::Inconclusive { reason, steps } if mode != SearchMode::Exact => {
                        return Ok(CombinedResult {
                            outcome: Outcome::Inconclusive { reason, steps },
                            route,
                            clean_target_used: Some(stage_one_target as u64),
                        });
                    }
                    _ => {} // exact mode continues with the ladder below
                }
            }
            Outcome::Inconclusive { reason, steps } if mode != SearchMode::Exact => {
                return Ok(CombinedResult {
                    outcome: Outcome::Inconclusive { reason, steps },
                    route: route1,
                    clean_target_used: Some(stage_one_target as u64),
                });
            }
            _ => {}
        }
    } else if mode != SearchMode::Exact {
        return Ok(CombinedResult {
            outcome: Outcome::Inconclusive {
                reason: format!(
                    "interior-stage web size {sigma} exceeds this web and constructive mode \
                     has no direct fallback"
                ),
                steps: budget.used(),
            },
            route: Route::BoundDriven,
            clean_target_used: None,
        });
    }

    // Exact-mode ladder at the requested output sizes.
    match search_pinned_direct(g, web, branch, anchor_count, pair_count, budget) {
        SearchOutcome::Found((anchors, pairs)) => {
            internal(
                certify::check_pinned_pair(g, web, &anchors, &pairs, anchor_count, pair_count),
                "pinned pair from the combined ladder",
            )?;
            trace.push("combined ladder: direct pinned pair".into());
            return Ok(CombinedResult {
                outcome: Outcome::PinnedPair {
                    anchor_count,
                    pair_count,
                    anchors,
                    pairs,
                },
                route: Route::DirectSearch,
                clean_target_used: None,
            });
        }
        SearchOutcome::Inconclusive { steps } => {
            return Ok(CombinedResult {
                outcome: Outcome::Inconclusive {
                    reason: "budget exhausted during the combined pinned search".into(),
                    steps,
                },
                route: Route::DirectSearch,
                clean_target_used: None,
            });
        }
        SearchOutcome::Absent => {}
    }
    // Largest stable clean subset that stage two can restrict to.
    let mut sigma_set: Option<VertexSet> = None;
    for size in (clean_size..=branch.len()).rev() {
        match search_clean_direct(g, web, branch, size, CleanSetClaims::StableTriple, budget) {
            SearchOutcome::Found(set) => {
                sigma_set = Some(set);
                break;
            }
            SearchOutcome::Inconclusive { steps } => {
                return Ok(CombinedResult {
                    outcome: Outcome::Inconclusive {
                        reason: "budget exhausted while sizing the stable clean subset".into(),
                        steps,
                    },
                    route: Route::DirectSearch,
                    clean_target_used: None,
                });
            }
            SearchOutcome::Absent => {}
        }
    }
    let mut clean_target_used = None;
    if let Some(sigma_set) = sigma_set {
        clean_target_used = Some(sigma_set.len() as u64);
        trace.push(format!(
            "combined ladder: largest stable clean subset has {} vertices",
            sigma_set.len()
        ));
        let sub = restrict(web, &sigma_set)?;
        let sub_branch: Vec<u32> = sub.branch().iter().collect();
        let (out2, _) = touching_or_clean_inner(
            g,
            &sub,
            &sub_branch,
            family_size,
            clean_size,
            mode,
            budget,
            trace,
        )?;
        match out2 {
            Outcome::TouchingFamilies { .. } => {
                return Ok(CombinedResult {
                    outcome: out2,
                    route: Route::DirectSearch,
                    clean_target_used,
                });
            }
            Outcome::CleanSet { size, set, .. } => {
                internal(
                    certify::check_clean_set(g, web, &set, size, CleanSetClaims::Full),
                    "combined clean set inherits stability from the ladder",
                )?;
                return Ok(CombinedResult {
                    outcome: Outcome::CleanSet {
                        size,
                        set,
                        claims: CleanSetClaims::Full,
                    },
                    route: Route::DirectSearch,
                    clean_target_used,
                });
            }
            _ => {}
        }
    }
    // Last resort: the full three-clause clean set directly.
    match search_clean_direct(g, web, branch, clean_size, CleanSetClaims::Full, budget) {
        SearchOutcome::Found(set) => {
            trace.push("combined ladder: direct full clean set".into());
            Ok(CombinedResult {
                outcome: Outcome::CleanSet {
                    size: clean_size,
                    set,
                    claims: CleanSetClaims::Full,
                },
                route: Route::DirectSearch,
                clean_target_used,
            })
        }
        SearchOutcome::Inconclusive { steps } => Ok(CombinedResult {
            outcome: Outcome::Inconclusive {
                reason: "budget exhausted during the final clean-set search".into(),
                steps,
            },
            route: Route::DirectSearch,
            clean_target_used,
        }),
        SearchOutcome::Absent => Ok(CombinedResult {
            outcome: Outcome::Inconclusive {
                reason: format!(
                    "exhausted: no pinned pair, touching families, or full clean set at \
                     sizes ({anchor_count}, {pair_count}, {family_size}, {clean_size})"
                ),
                steps: budget.used(),
            },
            route: Route::DirectSearch,
            clean_target_used,
        }),
    }
}

/// Runs the pinned stage, restricts the web to its clean set, and runs the
/// interior stage there; a final clean set satisfies all three clauses.
#[allow(clippy::too_many_arguments)]
pub fn extract_combined(
    g: &Graph,
    web: &Web,
    anchor_count: usize,
    pair_count: usize,
    family_size: usize,
    clean_size: usize,
    mode: SearchMode,
    budget: u64,
) -> Result<Certificate> {
    positive("anchor count", anchor_count)?;
    positive("pair count", pair_count)?;
    positive("family size", family_size)?;
    positive("clean size", clean_size)?;
    ensure_valid(g, web)?;
    let branch: Vec<u32> = web.branch().iter().collect();
    let mut b = Budget::new(budget);
    let mut trace = Vec::new();
    let result = combined_inner(
        g,
        web,
        &branch,
        anchor_count,
        pair_count,
        family_size,
        clean_size,
        mode,
        &mut b,
        &mut trace,
    )?;
    Ok(Certificate {
        outcome: result.outcome,
        route: result.route,
        params: ParamsEcho {
            a: Some(anchor_count as u64),
            b: Some(pair_count as u64),
            c: Some(family_size as u64),
            s: Some(clean_size as u64),
            mode: Some(mode),
            budget: Some(budget),
            clean_target_used: result.clean_target_used,
            ..Default::default()
        },
        trace,
    })
}

// ---------------------------------------------------------------------------
// Touching sets to an induced clique or biclique.
// ---------------------------------------------------------------------------

fn touching_inner(
    g: &Graph,
    sets: &[VertexSet],
    t: usize,
    mode: SearchMode,
    budget: &mut Budget,
    trace: &mut Vec<String>,
) -> Result<(Outcome, Route)> {
    for (i, x) in sets.iter().enumerate() {
        for (j, y) in sets.iter().enumerate().skip(i + 1) {
            if !x.is_disjoint_from(y) {
                return Err(Error::BadParameter(format!(
                    "sets {i} and {j} are not disjoint"
                )));
            }
            if !edge_between(g, x.as_slice(), y.as_slice()) {
                return Err(Error::ContractViolation(format!(
                    "sets {i} and {j} are anticomplete"
                )));
            }
        }
    }
    if sets.iter().any(|x| x.len() > u8::MAX as usize) {
        return Err(Error::TooLarge("touching sets cap out at 255 vertices".into()));
    }
    let members: Vec<Vec<u32>> = sets.iter().map(|x| x.iter().collect()).collect();
    type Intern = (HashMap<Vec<(u8, u8)>, ColorId>, Vec<Vec<(u8, u8)>>);
    let intern: Mutex<Intern> = Mutex::new((HashMap::new(), Vec::new()));
    let members_ref = &members;
    let intern_ref = &intern;
    let table = ColoringTable::new(sets.len(), 2, move |s: &[usize]| {
        let (i, j) = (s[0], s[1]);
        let mut prof: Vec<(u8, u8)> = Vec::new();
        for (fi, &x) in members_ref[i].iter().enumerate() {
            for (fj, &y) in members_ref[j].iter().enumerate() {
                if g.has_edge(x, y) {
                    prof.push((fi as u8, fj as u8));
                }
            }
        }
        prof.sort_unstable();
        let mut guard = intern_ref.lock().expect("profile intern lock");
        if let Some(&id) = guard.0.get(&prof) {
            return id;
        }
        let id = guard.1.len() as ColorId;
        guard.0.insert(prof.clone(), id);
        guard.1.push(prof);
        id
    });
    match find_monochromatic_with(&table, 2 * t, mode, budget)? {
        SearchOutcome::Found(w) => {
            let prof = {
                let guard = intern.lock().expect("profile intern lock");
                guard.1[w.color as usize].clone()
            };
            if prof.is_empty() {
                return Err(Error::Internal(
                    "empty adjacency profile survived the touching pre-check".into(),
                ));
            }
            let diagonal = prof.iter().copied().find(|&(f, f2)| f == f2);
            if let Some((f, _)) = diagonal {
                let vertices = VertexSet::new(
                    w.members[..t]
                        .iter()
                        .map(|&i| members[i][f as usize])
                        .collect(),
                );
                internal(
                    certify::check_clique(g, &vertices, t),
                    "clique from a diagonal adjacency profile",
                )?;
                trace.push(format!(
                    "touching stage: monochromatic profile has diagonal position {f}"
                ));
                return Ok((
                    Outcome::Clique { size: t, vertices },
                    Route::BoundDriven,
                ));
            }
            let (f, f2) = prof[0];
            let left = VertexSet::new(
                w.members[..t]
                    .iter()
                    .map(|&i| members[i][f as usize])
                    .collect(),
            );
            let right = VertexSet::new(
                w.members[t..2 * t]
                    .iter()
                    .map(|&i| members[i][f2 as usize])
                    .collect(),
            );
            internal(
                certify::check_biclique(g, &left, &right, t),
                "biclique from an off-diagonal adjacency profile",
            )?;
            trace.push(format!(
                "touching stage: monochromatic profile is stable with cross positions ({f}, {f2})"
            ));
            return Ok((
                Outcome::Biclique { size: t, left, right },
                Route::BoundDriven,
            ));
        }
        SearchOutcome::Absent | SearchOutcome::Inconclusive { .. } => {}
    }
    if mode != SearchMode::Exact {
        return Ok((
            Outcome::Inconclusive {
                reason: format!(
                    "monochromatic step needs {} touching sets ({} available) and \
                     constructive mode has no direct fallback",
                    2 * t,
                    sets.len()
                ),
                steps: budget.used(),
            },
            Route::BoundDriven,
        ));
    }
    // Direct search within the union of the sets.
    let union: Vec<u32> = {
        let mut all: Vec<u32> = sets.iter().flat_map(|x| x.iter()).collect();
        all.sort_unstable();
        all.dedup();
        all
    };
    let local_of: HashMap<u32, u32> = union
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i as u32))
        .collect();
    let mut local_edges = Vec::new();
    for (i, &u) in union.iter().enumerate() {
        for &v in &union[i + 1..] {
            if g.has_edge(u, v) {
                local_edges.push((local_of[&u], local_of[&v]));
            }
        }
    }
    let local = Graph::new(union.len(), &local_edges)?;
    match find_induced_clique_with(&local, t, budget)? {
        SearchOutcome::Found(set) => {
            let vertices = VertexSet::new(set.iter().map(|i| union[i as usize]).collect());
            internal(
                certify::check_clique(g, &vertices, t),
                "clique from the union search",
            )?;
            trace.push("touching stage: direct clique search within the union".into());
            return Ok((Outcome::Clique { size: t, vertices }, Route::DirectSearch));
        }
        SearchOutcome::Inconclusive { steps } => {
            return Ok((
                Outcome::Inconclusive {
                    reason: "budget exhausted during the union clique search".into(),
                    steps,
                },
                Route::DirectSearch,
            ));
        }
        SearchOutcome::Absent => {}
    }
    match find_induced_biclique_with(&local, t, budget)? {
        SearchOutcome::Found((l, r)) => {
            let left = VertexSet::new(l.iter().map(|i| union[i as usize]).collect());
            let right = VertexSet::new(r.iter().map(|i| union[i as usize]).collect());
            internal(
                certify::check_biclique(g, &left, &right, t),
                "biclique from the union search",
            )?;
            trace.push("touching stage: direct biclique search within the union".into());
            Ok((
                Outcome::Biclique { size: t, left, right },
                Route::DirectSearch,
            ))
        }
        SearchOutcome::Inconclusive { steps } => Ok((
            Outcome::Inconclusive {
                reason: "budget exhausted during the union biclique search".into(),
                steps,
            },
            Route::DirectSearch,
        )),
        SearchOutcome::Absent => Ok((
            Outcome::Inconclusive {
                reason: format!(
                    "{} touching sets are too few to force the outcome and the union \
                     contains neither shape at size {t}",
                    sets.len()
                ),
                steps: budget.used(),
            },
            Route::DirectSearch,
        )),
    }
}

/// From pairwise touching, pairwise disjoint vertex sets, extracts an
/// induced clique or biclique. Errors if some pair of sets is anticomplete:
/// that violates the operation's hypothesis.
pub fn induced_from_touching(
    g: &Graph,
    sets: &[VertexSet],
    t: usize,
    mode: SearchMode,
    budget: u64,
) -> Result<Certificate> {
    positive("induced size", t)?;
    if sets.is_empty() {
        return Err(Error::BadParameter("need at least one touching set".into()));
    }
    if sets.iter().any(|x| x.is_empty()) {
        return Err(Error::ContractViolation(
            "an empty set is anticomplete to everything".into(),
        ));
    }
    let mut b = Budget::new(budget);
    let mut trace = Vec::new();
    let (outcome, route) = touching_inner(g, sets, t, mode, &mut b, &mut trace)?;
    Ok(Certificate {
        outcome,
        route,
        params: ParamsEcho {
            t: Some(t as u64),
            mode: Some(mode),
            budget: Some(budget),
            ..Default::default()
        },
        trace,
    })
}

// ---------------------------------------------------------------------------
// The full pipeline.
// ---------------------------------------------------------------------------

/// Runs the whole extraction: the combined stage at multiplicities derived
/// from the touching-count bound, then, on a pinned pair or touching
/// families, the touching stage on the assembled vertex sets. A clean set is
/// final as soon as the combined stage produces one.
pub fn extract(g: &Graph, web: &Web, params: &ExtractionParams) -> Result<Certificate> {
    positive("clean size", params.s)?;
    positive("induced size", params.t)?;
    ensure_valid(g, web)?;
    let prof = profile(web);
    if prof.r_value > params.r {
        return Err(Error::BadParameter(format!(
            "web has paths of length {}, exceeding the declared shortness {}",
            prof.r_value + 1,
            params.r + 1
        )));
    }
    let branch: Vec<u32> = web.branch().iter().collect();
    let touch_cap = (params.r + 3).max(2 * params.r);
    let xi = bounds::touching_count_bound(touch_cap as u64, params.t as u64)?;
    let feasible_xi = xi.as_u64().and_then(|v| {
        let v = v as usize;
        (v >= 1 && 3 * v <= branch.len()).then_some(v)
    });
    let mut trace = Vec::new();
    let derived = match feasible_xi {
        Some(v) => {
            trace.push(format!(
                "touching-count bound {v} fits this web (set cap {touch_cap})"
            ));
            v
        }
        None if params.mode == SearchMode::Exact => {
            let v = (branch.len() / 3).max(1);
            trace.push(format!(
                "touching-count bound {xi} is out of reach; using the largest feasible \
                 count {v} (set cap {touch_cap})"
            ));
            v
        }
        None => {
            return finish(
                g,
                web,
                params,
                Certificate {
                    outcome: Outcome::Inconclusive {
                        reason: format!(
                            "touching-count bound {xi} is out of reach for a web on {} branch \
                             vertices and constructive mode has no direct fallback",
                            branch.len()
                        ),
                        steps: 0,
                    },
                    route: Route::BoundDriven,
                    params: ParamsEcho::default(),
                    trace,
                },
                None,
            );
        }
    };
    let a = params.a.unwrap_or(derived);
    let b = params.b.unwrap_or(derived);
    let c = params.c.unwrap_or(derived);
    let mut budget = Budget::new(params.budget);
    let combined = combined_inner(
        g,
        web,
        &branch,
        a,
        b,
        c,
        params.s,
        params.mode,
        &mut budget,
        &mut trace,
    )?;
    let (outcome, route) = match combined.outcome {
        out @ (Outcome::CleanSet { .. } | Outcome::Inconclusive { .. }) => (out, combined.route),
        Outcome::PinnedPair { anchors, pairs, .. } => {
            let sets = assemble_pinned_sets(web, &anchors, &pairs, touch_cap)?;
            trace.push(format!(
                "assembled {} anchored path sets (cap {touch_cap})",
                sets.len()
            ));
            let (out, route2) = touching_inner(g, &sets, params.t, params.mode, &mut budget, &mut trace)?;
            (out, combine_route(combined.route, route2))
        }
        Outcome::TouchingFamilies { left, right, .. } => {
            let sets = assemble_interior_sets(web, &left, &right, touch_cap)?;
            trace.push(format!(
                "assembled {} joined interior sets (cap {touch_cap})",
                sets.len()
            ));
            let (out, route2) = touching_inner(g, &sets, params.t, params.mode, &mut budget, &mut trace)?;
            (out, combine_route(combined.route, route2))
        }
        out @ (Outcome::Clique { .. } | Outcome::Biclique { .. }) => {
            return Err(Error::Internal(format!(
                "combined stage cannot produce a {}",
                out.kind()
            )));
        }
    };
    finish(
        g,
        web,
        params,
        Certificate {
            outcome,
            route,
            params: ParamsEcho::default(),
            trace,
        },
        Some((a, b, c, derived, combined.clean_target_used)),
    )
}

fn combine_route(a: Route, b: Route) -> Route {
    if a == Route::BoundDriven && b == Route::BoundDriven {
        Route::BoundDriven
    } else {
        Route::DirectSearch
    }
}

/// One set per anchor: the anchor plus the whole path of its paired branch
/// pair. Sizes stay within `touch_cap` because path lengths are bounded.
fn assemble_pinned_sets(
    web: &Web,
    anchors: &VertexSet,
    pairs: &[(u32, u32)],
    touch_cap: usize,
) -> Result<Vec<VertexSet>> {
    let mut sets = Vec::new();
    for (x, &(y, z)) in anchors.iter().zip(pairs) {
        let path = web
            .path(y, z)
            .ok_or(Error::PairNotInWeb(y, z))?;
        let mut members = vec![x];
        members.extend_from_slice(path.vertices());
        let set = VertexSet::new(members);
        if set.len() != path.vertices().len() + 1 {
            return Err(Error::Internal(
                "anchor landed on its paired path while assembling touching sets".into(),
            ));
        }
        if set.len() > touch_cap {
            return Err(Error::Internal(format!(
                "anchored path set has {} vertices, exceeding the cap {touch_cap}",
                set.len()
            )));
        }
        sets.push(set);
    }
    check_pairwise_disjoint(&sets)?;
    Ok(sets)
}

/// One set per family position: the two path interiors joined by the
/// touching condition.
fn assemble_interior_sets(
    web: &Web,
    left: &[(u32, u32)],
    right: &[(u32, u32)],
    touch_cap: usize,
) -> Result<Vec<VertexSet>> {
    let mut sets = Vec::new();
    for (&(x, y), &(x2, y2)) in left.iter().zip(right) {
        let a = web.path(x, y).ok_or(Error::PairNotInWeb(x, y))?;
        let b = web.path(x2, y2).ok_or(Error::PairNotInWeb(x2, y2))?;
        let mut members = a.interior().to_vec();
        members.extend_from_slice(b.interior());
        let set = VertexSet::new(members);
        if set.len() > touch_cap {
            return Err(Error::Internal(format!(
                "joined interior set has {} vertices, exceeding the cap {touch_cap}",
                set.len()
            )));
        }
        sets.push(set);
    }
    check_pairwise_disjoint(&sets)?;
    Ok(sets)
}

fn check_pairwise_disjoint(sets: &[VertexSet]) -> Result<()> {
    for (i, x) in sets.iter().enumerate() {
        for y in &sets[i + 1..] {
            if !x.is_disjoint_from(y) {
                return Err(Error::Internal(
                    "assembled touching sets are not pairwise disjoint".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Final gate: stamp the parameter echo and re-verify before returning.
fn finish(
    g: &Graph,
    web: &Web,
    params: &ExtractionParams,
    mut cert: Certificate,
    used: Option<(usize, usize, usize, usize, Option<u64>)>,
) -> Result<Certificate> {
    cert.params = ParamsEcho {
        r: Some(params.r as u64),
        s: Some(params.s as u64),
        t: Some(params.t as u64),
        mode: Some(params.mode),
        budget: Some(params.budget),
        ..Default::default()
    };
    if let Some((a, b, c, derived, clean_target_used)) = used {
        cert.params.a = Some(a as u64);
        cert.params.b = Some(b as u64);
        cert.params.c = Some(c as u64);
        cert.params.touching_count_used = Some(derived as u64);
        cert.params.clean_target_used = clean_target_used;
    }
    if !cert.outcome.is_inconclusive() {
        if let Err(v) = certify::verify_certificate(g, web, &cert) {
            return Err(Error::Internal(format!(
                "final certificate failed verification: {v}"
            )));
        }
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PathSeq;
    use crate::web::{plant_subdivision, random_lengths, uniform_lengths};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const BIG: u64 = 50_000_000;

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

    fn order_of(web: &Web) -> Vec<u32> {
        web.branch().iter().collect()
    }

    #[test]
    fn pin_profile_cases() {
        let (g, web) = plant_subdivision(5, &uniform_lengths(5, 2), 0.0, 1).unwrap();
        let order = order_of(&web);
        assert!(pin_profile(&g, &web, &order, [0, 1, 2]).unwrap().is_empty());

        let k3 = complete(3);
        let tw = trivial_web(3);
        let p = pin_profile(&k3, &tw, &order_of(&tw), [0, 1, 2]).unwrap();
        assert_eq!(p.0, 0b111);

        // Edge from branch 0 into the interior of the 1-2 path.
        let (g2, web2) = plant_subdivision(5, &uniform_lengths(5, 2), 0.0, 1).unwrap();
        let mid = web2.path(1, 2).unwrap().interior()[0];
        let mut edges = g2.edges().to_vec();
        edges.push((0, mid));
        let g3 = Graph::new(g2.vertex_count(), &edges).unwrap();
        let p = pin_profile(&g3, &web2, &order_of(&web2), [0, 1, 2]).unwrap();
        assert!(p.contains(0));
    }

    #[test]
    fn touch_profile_cases() {
        let k5 = complete(5);
        let tw = trivial_web(5);
        assert!(touch_profile(&k5, &tw, &order_of(&tw), [0, 1, 2, 3])
            .unwrap()
            .is_empty());

        let (g, web) = plant_subdivision(5, &uniform_lengths(5, 2), 0.0, 1).unwrap();
        let order = order_of(&web);
        assert!(touch_profile(&g, &web, &order, [0, 1, 2, 3]).unwrap().is_empty());

        // Join the interiors of the 0-1 and 2-3 paths.
        let a = web.path(0, 1).unwrap().interior()[0];
        let b = web.path(2, 3).unwrap().interior()[0];
        let mut edges = g.edges().to_vec();
        edges.push((a, b));
        let g2 = Graph::new(g.vertex_count(), &edges).unwrap();
        let p = touch_profile(&g2, &web, &order, [0, 1, 2, 3]).unwrap();
        let (pa, pb) = p.min_pair().unwrap();
        assert_eq!((pa, pb), ((0, 1), (2, 3)));
    }

    #[test]
    fn pinned_or_clean_on_clean_instance() {
        let (g, web) = plant_subdivision(7, &uniform_lengths(7, 2), 0.0, 1).unwrap();
        let cert =
            extract_pinned_or_clean(&g, &web, 1, 1, 3, SearchMode::Exact, BIG).unwrap();
        match &cert.outcome {
            Outcome::CleanSet { size, claims, .. } => {
                assert_eq!(*size, 3);
                assert_eq!(*claims, CleanSetClaims::StableTriple);
            }
            other => panic!("expected clean set, got {other:?}"),
        }
        assert_eq!(cert.route, Route::BoundDriven);
        assert!(certify::verify_certificate(&g, &web, &cert).is_ok());
    }

    #[test]
    fn pinned_or_clean_on_trivial_web() {
        let g = complete(7);
        let web = trivial_web(7);
        let cert =
            extract_pinned_or_clean(&g, &web, 1, 1, 3, SearchMode::Exact, BIG).unwrap();
        match &cert.outcome {
            Outcome::PinnedPair { anchor_count, pair_count, .. } => {
                assert_eq!((*anchor_count, *pair_count), (1, 1));
            }
            other => panic!("expected pinned pair, got {other:?}"),
        }
        assert!(certify::verify_certificate(&g, &web, &cert).is_ok());
    }

    #[test]
    fn pinned_or_clean_too_small_is_inconclusive() {
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let web = Web::new(
            VertexSet::new(vec![0, 2]),
            vec![PathSeq::new(vec![0, 1, 2])],
        )
        .unwrap();
        let cert =
            extract_pinned_or_clean(&g, &web, 1, 1, 3, SearchMode::Exact, BIG).unwrap();
        assert!(cert.outcome.is_inconclusive());
    }

    #[test]
    fn touching_or_clean_on_clean_instance() {
        let (g, web) = plant_subdivision(8, &uniform_lengths(8, 2), 0.0, 2).unwrap();
        let cert =
            extract_touching_or_clean(&g, &web, 1, 4, SearchMode::Exact, BIG).unwrap();
        match &cert.outcome {
            Outcome::CleanSet { size, claims, .. } => {
                assert_eq!(*size, 4);
                assert_eq!(*claims, CleanSetClaims::InteriorPairs);
            }
            other => panic!("expected clean set, got {other:?}"),
        }
    }

    #[test]
    fn touching_or_clean_finds_joined_interiors() {
        let (g, web) = plant_subdivision(4, &uniform_lengths(4, 2), 0.0, 3).unwrap();
        let a = web.path(0, 1).unwrap().interior()[0];
        let b = web.path(2, 3).unwrap().interior()[0];
        let mut edges = g.edges().to_vec();
        edges.push((a, b));
        let g2 = Graph::new(g.vertex_count(), &edges).unwrap();
        let cert =
            extract_touching_or_clean(&g2, &web, 1, 4, SearchMode::Exact, BIG).unwrap();
        match &cert.outcome {
            Outcome::TouchingFamilies { family_size, .. } => assert_eq!(*family_size, 1),
            other => panic!("expected touching families, got {other:?}"),
        }
        assert!(certify::verify_certificate(&g2, &web, &cert).is_ok());
    }

    #[test]
    fn touching_or_clean_trivial_lengths_gives_clean_set() {
        let g = complete(5);
        let web = trivial_web(5);
        let cert =
            extract_touching_or_clean(&g, &web, 1, 3, SearchMode::Exact, BIG).unwrap();
        match &cert.outcome {
            Outcome::CleanSet { size, .. } => assert_eq!(*size, 3),
            other => panic!("expected clean set, got {other:?}"),
        }
    }

    #[test]
    fn combined_on_clean_instance_is_fully_bound_driven() {
        let (g, web) = plant_subdivision(9, &uniform_lengths(9, 2), 0.0, 4).unwrap();
        let cert = extract_combined(&g, &web, 1, 1, 1, 4, SearchMode::Exact, BIG).unwrap();
        match &cert.outcome {
            Outcome::CleanSet { size, claims, .. } => {
                assert_eq!(*size, 4);
                assert_eq!(*claims, CleanSetClaims::Full);
            }
            other => panic!("expected clean set, got {other:?}"),
        }
        assert_eq!(cert.route, Route::BoundDriven);
        assert!(cert.trace.len() >= 2, "both stages recorded: {:?}", cert.trace);
    }

    #[test]
    fn combined_on_trivial_web_gives_pinned_pair() {
        let g = complete(9);
        let web = trivial_web(9);
        let cert = extract_combined(&g, &web, 1, 1, 1, 4, SearchMode::Exact, BIG).unwrap();
        assert!(matches!(cert.outcome, Outcome::PinnedPair { .. }));
    }

    #[test]
    fn combined_too_small_is_inconclusive() {
        let (g, web) = plant_subdivision(2, &uniform_lengths(2, 2), 0.0, 5).unwrap();
        let cert = extract_combined(&g, &web, 1, 1, 1, 3, SearchMode::Exact, BIG).unwrap();
        assert!(cert.outcome.is_inconclusive());
    }

    #[test]
    fn touching_sets_clique_route() {
        let g = complete(6);
        let sets: Vec<VertexSet> = (0..6).map(|i| VertexSet::new(vec![i])).collect();
        let cert = induced_from_touching(&g, &sets, 3, SearchMode::Exact, BIG).unwrap();
        match &cert.outcome {
            Outcome::Clique { size, vertices } => {
                assert_eq!(*size, 3);
                assert_eq!(vertices.as_slice(), &[0, 1, 2]);
            }
            other => panic!("expected clique, got {other:?}"),
        }
        assert_eq!(cert.route, Route::BoundDriven);
    }

    #[test]
    fn touching_sets_biclique_route() {
        // Sets {2i, 2i+1}; vertex 2i is adjacent to 2j+1 exactly when i != j.
        // Both diagonal profiles are empty, the off-diagonal ones are full.
        let mut edges = Vec::new();
        for i in 0..4u32 {
            for j in 0..4u32 {
                if i != j {
                    edges.push((2 * i, 2 * j + 1));
                }
            }
        }
        let g = Graph::new(8, &edges).unwrap();
        let sets: Vec<VertexSet> = (0..4).map(|i| VertexSet::new(vec![2 * i, 2 * i + 1])).collect();
        let cert = induced_from_touching(&g, &sets, 2, SearchMode::Exact, BIG).unwrap();
        match &cert.outcome {
            Outcome::Biclique { size, left, right } => {
                assert_eq!(*size, 2);
                assert!(certify::check_biclique(&g, left, right, 2).is_none());
            }
            other => panic!("expected biclique, got {other:?}"),
        }
        assert_eq!(cert.route, Route::BoundDriven);
    }

    #[test]
    fn touching_sets_hypothesis_violation_errors() {
        let g = Graph::new(4, &[(0, 1)]).unwrap();
        let sets: Vec<VertexSet> = (0..4).map(|i| VertexSet::new(vec![i])).collect();
        match induced_from_touching(&g, &sets, 2, SearchMode::Exact, BIG) {
            Err(Error::ContractViolation(_)) => {}
            other => panic!("expected contract violation, got {other:?}"),
        }
    }

    #[test]
    fn extract_clean_route_on_planted_k10() {
        let (g, web) = plant_subdivision(10, &uniform_lengths(10, 2), 0.0, 6).unwrap();
        let params = ExtractionParams::new(1, 4, 3, SearchMode::Exact, BIG);
        let cert = extract(&g, &web, &params).unwrap();
        match &cert.outcome {
            Outcome::CleanSet { size, set, claims } => {
                assert_eq!(*size, 4);
                assert_eq!(*claims, CleanSetClaims::Full);
                let sub = restrict(&web, set).unwrap();
                assert!(crate::web::induced_union_is_proper_subdivision(&g, &sub).unwrap());
            }
            other => panic!("expected clean set, got {other:?}"),
        }
    }

    #[test]
    fn extract_clique_route_on_complete_host() {
        let g = complete(10);
        let web = trivial_web(10);
        let params = ExtractionParams::new(0, 4, 3, SearchMode::Exact, BIG);
        let cert = extract(&g, &web, &params).unwrap();
        match &cert.outcome {
            Outcome::Clique { size, vertices } => {
                assert_eq!(*size, 3);
                assert!(certify::check_clique(&g, vertices, 3).is_none());
            }
            other => panic!("expected clique, got {other:?}"),
        }
    }

    #[test]
    fn extract_rejects_web_longer_than_declared() {
        let (g, web) = plant_subdivision(4, &uniform_lengths(4, 3), 0.0, 6).unwrap();
        let params = ExtractionParams::new(1, 3, 3, SearchMode::Exact, BIG);
        assert!(matches!(
            extract(&g, &web, &params),
            Err(Error::BadParameter(_))
        ));
    }

    #[test]
    fn extract_small_web_is_inconclusive() {
        let (g, web) = plant_subdivision(2, &uniform_lengths(2, 2), 0.0, 7).unwrap();
        let params = ExtractionParams::new(1, 3, 3, SearchMode::Exact, BIG);
        let cert = extract(&g, &web, &params).unwrap();
        assert!(cert.outcome.is_inconclusive());
    }

    #[test]
    fn extract_is_deterministic() {
        let (g, web) = plant_subdivision(7, &uniform_lengths(7, 2), 0.15, 21).unwrap();
        let params = ExtractionParams::new(1, 3, 3, SearchMode::Exact, BIG);
        let a = extract(&g, &web, &params).unwrap();
        let b = extract(&g, &web, &params).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn extract_fuzz_certificates_always_verify() {
        let mut checked = 0;
        for seed in 0..60u64 {
            let k = 4 + (seed % 5) as u32;
            let mut rng = ChaCha8Rng::seed_from_u64(seed * 31 + 5);
            let lengths = random_lengths(k, 1, 3, &mut rng);
            let noise = [0.0, 0.05, 0.15][(seed % 3) as usize];
            let (g, web) = plant_subdivision(k, &lengths, noise, seed).unwrap();
            let params = ExtractionParams::new(2, 3, 3, SearchMode::Exact, BIG);
            let cert = extract(&g, &web, &params).unwrap();
            if !cert.outcome.is_inconclusive() {
                assert!(
                    certify::verify_certificate(&g, &web, &cert).is_ok(),
                    "seed {seed}: {cert:?}"
                );
                checked += 1;
            }
        }
        assert!(checked >= 10, "only {checked} conclusive runs");
    }

    #[test]
    fn combined_never_misses_an_oracle_clean_set() {
        for seed in 0..40u64 {
            let k = 3 + (seed % 5) as u32;
            let mut rng = ChaCha8Rng::seed_from_u64(seed + 99);
            let lengths = random_lengths(k, 1, 3, &mut rng);
            let noise = [0.0, 0.1][(seed % 2) as usize];
            let (g, web) = plant_subdivision(k, &lengths, noise, seed).unwrap();
            if crate::oracle::brute_clean_set(&g, &web, 3).unwrap().is_some() {
                let cert =
                    extract_combined(&g, &web, 1, 1, 1, 3, SearchMode::Exact, BIG).unwrap();
                assert!(
                    !cert.outcome.is_inconclusive(),
                    "seed {seed}: oracle found a clean set, combined stage returned none"
                );
            }
        }
    }

    #[test]
    fn constructive_mode_works_on_uniform_instances() {
        let (g, web) = plant_subdivision(9, &uniform_lengths(9, 2), 0.0, 4).unwrap();
        let cert =
            extract_combined(&g, &web, 1, 1, 1, 4, SearchMode::Constructive, BIG).unwrap();
        match &cert.outcome {
            Outcome::CleanSet { size, claims, .. } => {
                assert_eq!(*size, 4);
                assert_eq!(*claims, CleanSetClaims::Full);
            }
            // Constructive refinement may legitimately come up short.
            Outcome::Inconclusive { .. } => {}
            other => panic!("unexpected outcome {other:?}"),
        }
    }
}
