//! Webs: a branch set `W` together with pairwise internally disjoint induced
//! paths between every two branch vertices. A web with all path lengths at
//! most `r + 1` witnesses a short subdivision of the complete graph on `|W|`
//! vertices occurring as a subgraph.

use crate::error::{Error, Result};
use crate::graph::{is_induced_path, Graph, PathSeq, VertexSet};
use crate::search::{Budget, SearchOutcome};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Branch set plus one path per branch pair, keyed by `(min, max)` ends.
///
/// Construction enforces only local shape (ends are distinct branch vertices,
/// one path per pair); the graph-dependent axioms are checked by
/// [`validate_web`], which reports violations as data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Web {
    branch: VertexSet,
    paths: BTreeMap<(u32, u32), PathSeq>,
}

impl Web {
    pub fn new(branch: VertexSet, paths: Vec<PathSeq>) -> Result<Web> {
        let mut map = BTreeMap::new();
        for p in paths {
            let (a, b) = p
                .ends()
                .ok_or_else(|| Error::BadParameter("empty path sequence".into()))?;
            if a == b {
                return Err(Error::BadParameter(format!(
                    "path must join two distinct branch vertices, got ends {a} and {b}"
                )));
            }
            if !branch.contains(a) || !branch.contains(b) {
                return Err(Error::NotBranchSubset(format!("path ends {a}, {b}")));
            }
            let key = (a.min(b), a.max(b));
            if map.insert(key, p).is_some() {
                return Err(Error::BadParameter(format!(
                    "duplicate path for pair {{{}, {}}}",
                    key.0, key.1
                )));
            }
        }
        Ok(Web { branch, paths: map })
    }

    pub fn branch(&self) -> &VertexSet {
        &self.branch
    }

    pub fn branch_size(&self) -> usize {
        self.branch.len()
    }

    /// Path between two branch vertices, order-insensitive.
    pub fn path(&self, x: u32, y: u32) -> Option<&PathSeq> {
        self.paths.get(&(x.min(y), x.max(y)))
    }

    pub fn pairs(&self) -> impl Iterator<Item = ((u32, u32), &PathSeq)> {
        self.paths.iter().map(|(&k, p)| (k, p))
    }

    pub fn path_count(&self) -> usize {
        self.paths.len()
    }
}

#[derive(Serialize, Deserialize)]
struct PathDto {
    ends: [u32; 2],
    seq: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct WebDto {
    branch: Vec<u32>,
    paths: Vec<PathDto>,
}

impl Serialize for Web {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let dto = WebDto {
            branch: self.branch.iter().collect(),
            paths: self
                .paths
                .iter()
                .map(|(&(a, b), p)| PathDto {
                    ends: [a, b],
                    seq: p.vertices().to_vec(),
                })
                .collect(),
        };
        dto.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Web {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Web, D::Error> {
        let dto = WebDto::deserialize(deserializer)?;
        let paths: Vec<PathSeq> = dto
            .paths
            .iter()
            .map(|p| PathSeq::new(p.seq.clone()))
            .collect();
        for p in &dto.paths {
            let seq_ends = match p.seq.as_slice() {
                [first, .., last] => (*first.min(last), *first.max(last)),
                _ => return Err(D::Error::custom("path seq needs at least two vertices")),
            };
            let declared = (p.ends[0].min(p.ends[1]), p.ends[0].max(p.ends[1]));
            if seq_ends != declared {
                return Err(D::Error::custom(format!(
                    "declared ends {:?} do not match path sequence ends {:?}",
                    declared, seq_ends
                )));
            }
        }
        Web::new(VertexSet::new(dto.branch), paths).map_err(D::Error::custom)
    }
}

/// A web's shape summary: the smallest `r` it qualifies for, its branch
/// count, and how many vertices the whole structure covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WebProfile {
    pub r_value: usize,
    pub w_value: usize,
    pub total_vertices: usize,
}

pub fn profile(web: &Web) -> WebProfile {
    let max_len = web.pairs().map(|(_, p)| p.length()).max().unwrap_or(0);
    let mut union: BTreeSet<u32> = web.branch.iter().collect();
    for (_, p) in web.pairs() {
        union.extend(p.vertices().iter().copied());
    }
    WebProfile {
        r_value: max_len.saturating_sub(1),
        w_value: web.branch_size(),
        total_vertices: union.len(),
    }
}

/// One violated web axiom, with the offending pair(s).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WebViolation {
    EmptyBranchSet,
    BranchVertexMissing { vertex: u32 },
    PathMissing { pair: (u32, u32) },
    PathVertexMissing { pair: (u32, u32), vertex: u32 },
    PathNotInduced { pair: (u32, u32) },
    PathsOverlap { pair_a: (u32, u32), pair_b: (u32, u32), shared: Vec<u32> },
    InteriorMeetsBranch { pair: (u32, u32), vertex: u32 },
}

impl fmt::Display for WebViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WebViolation::EmptyBranchSet => write!(f, "(W1) branch set is empty"),
            WebViolation::BranchVertexMissing { vertex } => {
                write!(f, "(W1) branch vertex {vertex} is not in the graph")
            }
            WebViolation::PathMissing { pair } => {
                write!(f, "(W2) no path for pair {{{}, {}}}", pair.0, pair.1)
            }
            WebViolation::PathVertexMissing { pair, vertex } => write!(
                f,
                "(W2) path for {{{}, {}}} uses vertex {vertex} not in the graph",
                pair.0, pair.1
            ),
            WebViolation::PathNotInduced { pair } => write!(
                f,
                "(W2) sequence for {{{}, {}}} is not an induced path",
                pair.0, pair.1
            ),
            WebViolation::PathsOverlap { pair_a, pair_b, shared } => write!(
                f,
                "(W3) paths for {{{}, {}}} and {{{}, {}}} share extra vertices {:?}",
                pair_a.0, pair_a.1, pair_b.0, pair_b.1, shared
            ),
            WebViolation::InteriorMeetsBranch { pair, vertex } => write!(
                f,
                "interior of {{{}, {}}} contains branch vertex {vertex}",
                pair.0, pair.1
            ),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct WebReport {
    pub violations: Vec<WebViolation>,
}

impl WebReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for WebReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            write!(f, "web is valid")
        } else {
            for v in &self.violations {
                writeln!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

/// Checks the web axioms against the host graph. An empty report means the
/// web is valid in `g`.
pub fn validate_web(g: &Graph, web: &Web) -> WebReport {
    let mut report = WebReport::default();
    if web.branch.is_empty() {
        report.violations.push(WebViolation::EmptyBranchSet);
    }
    for v in web.branch.iter() {
        if !g.contains_vertex(v) {
            report
                .violations
                .push(WebViolation::BranchVertexMissing { vertex: v });
        }
    }
    let branch: Vec<u32> = web.branch.iter().collect();
    for (i, &x) in branch.iter().enumerate() {
        for &y in &branch[i + 1..] {
            if web.path(x, y).is_none() {
                report
                    .violations
                    .push(WebViolation::PathMissing { pair: (x, y) });
            }
        }
    }
    for (pair, p) in web.pairs() {
        let mut vertices_ok = true;
        for &v in p.vertices() {
            if !g.contains_vertex(v) {
                report
                    .violations
                    .push(WebViolation::PathVertexMissing { pair, vertex: v });
                vertices_ok = false;
            }
        }
        if vertices_ok {
            match is_induced_path(g, p) {
                Ok(true) => {}
                _ => report.violations.push(WebViolation::PathNotInduced { pair }),
            }
        }
        for &v in p.interior() {
            if web.branch.contains(v) {
                report
                    .violations
                    .push(WebViolation::InteriorMeetsBranch { pair, vertex: v });
            }
        }
    }
    let entries: Vec<((u32, u32), &PathSeq)> = web.pairs().collect();
    for (i, &(pa, a)) in entries.iter().enumerate() {
        let set_a: BTreeSet<u32> = a.vertices().iter().copied().collect();
        for &(pb, b) in &entries[i + 1..] {
            let allowed: BTreeSet<u32> = [pa.0, pa.1]
                .iter()
                .filter(|v| [pb.0, pb.1].contains(v))
                .copied()
                .collect();
            let shared: Vec<u32> = b
                .vertices()
                .iter()
                .copied()
                .filter(|v| set_a.contains(v) && !allowed.contains(v))
                .collect();
            if !shared.is_empty() {
                report.violations.push(WebViolation::PathsOverlap {
                    pair_a: pa,
                    pair_b: pb,
                    shared,
                });
            }
        }
    }
    report
}

/// The path's vertices minus its two ends; empty for lengths at most one.
pub fn interior(web: &Web, x: u32, y: u32) -> Result<VertexSet> {
    let p = web
        .path(x, y)
        .ok_or(Error::PairNotInWeb(x.min(y), x.max(y)))?;
    Ok(VertexSet::new(p.interior().to_vec()))
}

/// Web on branch subset `s`, keeping exactly the paths between members of `s`.
pub fn restrict(web: &Web, s: &VertexSet) -> Result<Web> {
    if s.is_empty() {
        return Err(Error::BadParameter("restriction to empty branch set".into()));
    }
    if !s.is_subset_of(&web.branch) {
        return Err(Error::NotBranchSubset(format!("{:?}", s.as_slice())));
    }
    let paths = web
        .pairs()
        .filter(|&((a, b), _)| s.contains(a) && s.contains(b))
        .map(|(_, p)| p.clone())
        .collect();
    Web::new(s.clone(), paths)
}

/// True iff every path has length at least two and the subgraph induced by
/// the union of all path vertices contains no edge beyond the path edges —
/// exactly what an induced proper subdivision requires.
pub fn induced_union_is_proper_subdivision(g: &Graph, web: &Web) -> Result<bool> {
    let report = validate_web(g, web);
    if !report.is_valid() {
        return Err(Error::InvalidWeb(report.to_string()));
    }
    let mut union: BTreeSet<u32> = web.branch.iter().collect();
    let mut path_edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    for (_, p) in web.pairs() {
        if p.length() < 2 {
            return Ok(false);
        }
        union.extend(p.vertices().iter().copied());
        for pair in p.vertices().windows(2) {
            path_edges.insert((pair[0].min(pair[1]), pair[0].max(pair[1])));
        }
    }
    let members: Vec<u32> = union.iter().copied().collect();
    for (i, &u) in members.iter().enumerate() {
        for &v in &members[i + 1..] {
            if g.has_edge(u, v) && !path_edges.contains(&(u, v)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All `(i, j)` pairs of `0..k` mapped to one length. Convenience for
/// [`plant_subdivision`].
pub fn uniform_lengths(k: u32, len: usize) -> BTreeMap<(u32, u32), usize> {
    let mut m = BTreeMap::new();
    for i in 0..k {
        for j in i + 1..k {
            m.insert((i, j), len);
        }
    }
    m
}

/// Seeded per-pair lengths drawn uniformly from `min..=max`.
pub fn random_lengths(
    k: u32,
    min: usize,
    max: usize,
    rng: &mut impl Rng,
) -> BTreeMap<(u32, u32), usize> {
    let mut m = BTreeMap::new();
    for i in 0..k {
        for j in i + 1..k {
            m.insert((i, j), rng.random_range(min..=max));
        }
    }
    m
}

/// Builds a host graph containing the requested subdivision of the complete
/// graph on `k` vertices, plus seeded noise edges. A drawn noise edge that
/// would break the inducedness of a planted path is rejected rather than
/// failing the generation, so the returned web always validates in the
/// returned graph.
pub fn plant_subdivision(
    k: u32,
    lengths: &BTreeMap<(u32, u32), usize>,
    noise: f64,
    seed: u64,
) -> Result<(Graph, Web)> {
    if k == 0 {
        return Err(Error::BadParameter("need at least one branch vertex".into()));
    }
    if !(0.0..=1.0).contains(&noise) {
        return Err(Error::BadParameter(format!(
            "noise probability {noise} outside [0, 1]"
        )));
    }
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut paths: Vec<PathSeq> = Vec::new();
    let mut next = k;
    // position of each vertex on each planted path, for the chord test
    let mut on_path: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..k {
        for j in i + 1..k {
            let len = *lengths
                .get(&(i, j))
                .ok_or_else(|| Error::BadParameter(format!("no length for pair ({i}, {j})")))?;
            if len == 0 {
                return Err(Error::BadParameter(format!(
                    "length for pair ({i}, {j}) must be at least 1"
                )));
            }
            let mut seq = vec![i];
            for _ in 0..len - 1 {
                seq.push(next);
                next += 1;
            }
            seq.push(j);
            let path_id = paths.len();
            for (pos, &v) in seq.iter().enumerate() {
                on_path.entry(v).or_default().push((path_id, pos));
            }
            for w in seq.windows(2) {
                edges.push((w[0], w[1]));
            }
            paths.push(PathSeq::new(seq));
        }
    }
    let n = next as usize;
    let planted: BTreeSet<(u32, u32)> = edges
        .iter()
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .collect();
    let chord_of_some_path = |u: u32, v: u32| -> bool {
        let (Some(pu), Some(pv)) = (on_path.get(&u), on_path.get(&v)) else {
            return false;
        };
        for &(pid, pos_u) in pu {
            for &(qid, pos_v) in pv {
                if pid == qid && pos_u.abs_diff(pos_v) != 1 {
                    return true;
                }
            }
        }
        false
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if noise > 0.0 {
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                if planted.contains(&(u, v)) {
                    continue;
                }
                if rng.random_bool(noise) && !chord_of_some_path(u, v) {
                    edges.push((u, v));
                }
            }
        }
    }
    let graph = Graph::new(n, &edges)?;
    let branch: VertexSet = (0..k).collect();
    let web = Web::new(branch, paths)?;
    Ok((graph, web))
}

/// Backtracking search for a web with `w` branch vertices and all path
/// lengths at most `r + 1`. Branch candidates are tried in order of
/// decreasing degree (ties by id); paths are routed by bounded-depth search
/// with the disjointness axiom enforced incrementally.
pub fn find_web(g: &Graph, r: usize, w: usize, budget: u64) -> Result<SearchOutcome<Web>> {
    if w == 0 {
        return Err(Error::BadParameter("web size must be at least 1".into()));
    }
    let mut cands: Vec<u32> = (0..g.vertex_count() as u32)
        .filter(|&v| g.degree(v) + 1 >= w)
        .collect();
    cands.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut state = WebSearch {
        g,
        max_len: r + 1,
        w,
        cands,
        branch: Vec::new(),
        used: vec![false; g.vertex_count()],
        paths: Vec::new(),
        budget: Budget::new(budget),
    };
    match state.choose_branch(0) {
        DfsVerdict::Found => {
            let branch = VertexSet::new(state.branch.clone());
            let web = Web::new(branch, state.paths.clone())?;
            Ok(SearchOutcome::Found(web))
        }
        DfsVerdict::Exhausted => Ok(SearchOutcome::Absent),
        DfsVerdict::OutOfBudget => Ok(SearchOutcome::Inconclusive {
            steps: state.budget.used(),
        }),
    }
}

enum DfsVerdict {
    Found,
    Exhausted,
    OutOfBudget,
}

struct WebSearch<'a> {
    g: &'a Graph,
    max_len: usize,
    w: usize,
    cands: Vec<u32>,
    branch: Vec<u32>,
    used: Vec<bool>,
    paths: Vec<PathSeq>,
    budget: Budget,
}

impl WebSearch<'_> {
    fn choose_branch(&mut self, from: usize) -> DfsVerdict {
        if self.branch.len() == self.w {
            return DfsVerdict::Found;
        }
        for idx in from..self.cands.len() {
            if self.cands.len() - idx < self.w - self.branch.len() {
                break;
            }
            let v = self.cands[idx];
            if self.used[v as usize] {
                continue;
            }
            if !self.budget.step() {
                return DfsVerdict::OutOfBudget;
            }
            self.branch.push(v);
            self.used[v as usize] = true;
            match self.route_pair(0, idx) {
                DfsVerdict::Exhausted => {}
                other => return other,
            }
            self.used[v as usize] = false;
            self.branch.pop();
        }
        DfsVerdict::Exhausted
    }

    /// Routes the path between the newest branch vertex and `branch[i]`,
    /// then continues with the next pair or the next branch choice.
    fn route_pair(&mut self, i: usize, cand_idx: usize) -> DfsVerdict {
        let newest = self.branch.len() - 1;
        if i == newest {
            return self.choose_branch(cand_idx + 1);
        }
        let x = self.branch[newest];
        let y = self.branch[i];
        let mut seq = vec![x];
        self.extend_path(&mut seq, y, i, cand_idx)
    }

    fn extend_path(
        &mut self,
        seq: &mut Vec<u32>,
        target: u32,
        pair_i: usize,
        cand_idx: usize,
    ) -> DfsVerdict {
        let last = *seq.last().expect("path under construction is nonempty");
        if seq.len() > self.max_len {
            return DfsVerdict::Exhausted;
        }
        for v in self.g.neighbors(last) {
            if !self.budget.step() {
                return DfsVerdict::OutOfBudget;
            }
            if v == target {
                // Closing the path: target may touch only the current last.
                if seq[..seq.len() - 1].iter().any(|&u| self.g.has_edge(u, v)) {
                    continue;
                }
                seq.push(v);
                let path = PathSeq::new(seq.clone());
                self.paths.push(path);
                for &u in &seq[1..seq.len() - 1] {
                    self.used[u as usize] = true;
                }
                let keep: Vec<u32> = seq[1..seq.len() - 1].to_vec();
                match self.route_pair(pair_i + 1, cand_idx) {
                    DfsVerdict::Exhausted => {}
                    other => return other,
                }
                for &u in &keep {
                    self.used[u as usize] = false;
                }
                self.paths.pop();
                seq.pop();
                continue;
            }
            if self.used[v as usize] || seq.len() == self.max_len {
                continue;
            }
            // Interior extension must keep the path induced so far.
            if seq[..seq.len() - 1].iter().any(|&u| self.g.has_edge(u, v)) {
                continue;
            }
            seq.push(v);
            self.used[v as usize] = true;
            match self.extend_path(seq, target, pair_i, cand_idx) {
                DfsVerdict::Exhausted => {}
                other => return other,
            }
            self.used[v as usize] = false;
            seq.pop();
        }
        DfsVerdict::Exhausted
    }
}
