//! Cycle and quasi-cycle search. A path runs from a source sense s through
//! a candidate sense s' back to s. The first edge (s, s') is the implicit
//! prefix and is always traversed forward. A cycle traverses every edge
//! forward; a quasi-cycle contains exactly one consecutive run of reversed
//! edges, never touching the first two edge positions. The run may be
//! required to end at the final edge (terminal_only).

use crate::graph::{NodeId, NoisyGraph};
use std::collections::{BTreeMap, BTreeSet, HashSet};
use thiserror::Error;

/// Hard engine bound for the search depth.
pub const MAX_DEPTH_BOUND: usize = 8;

/// Node-count limit for exhaustive enumeration.
pub const BRUTEFORCE_NODE_LIMIT: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Forward,
    Reversed,
}

/// A closed path. `nodes` starts and ends at the source sense; `dirs[i]`
/// tells how the edge between nodes[i] and nodes[i+1] is traversed, so
/// `dirs.len()` is the path length (edge count).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub nodes: Vec<NodeId>,
    pub dirs: Vec<Direction>,
}

impl Path {
    pub fn new(nodes: Vec<NodeId>, dirs: Vec<Direction>) -> Path {
        assert_eq!(nodes.len(), dirs.len() + 1, "one direction per edge");
        Path { nodes, dirs }
    }

    /// Edge count.
    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn is_cycle(&self) -> bool {
        self.dirs.iter().all(|d| *d == Direction::Forward)
    }

    /// Render as `lemma#pos#sense` tokens joined by `->` / `<-`.
    pub fn render(&self, g: &NoisyGraph) -> String {
        let mut s = g.token(self.nodes[0]);
        for (i, d) in self.dirs.iter().enumerate() {
            s.push_str(match d {
                Direction::Forward => "->",
                Direction::Reversed => "<-",
            });
            s.push_str(&g.token(self.nodes[i + 1]));
        }
        s
    }
}

/// A collection of paths sharing endpoints.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PathSet {
    paths: Vec<Path>,
}

impl PathSet {
    pub fn new(paths: Vec<Path>) -> PathSet {
        PathSet { paths }
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Paths in canonical (sorted) order, for set comparison.
    pub fn sorted_paths(&self) -> Vec<Path> {
        let mut v = self.paths.clone();
        v.sort();
        v
    }

    /// Count of paths per length.
    pub fn histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for p in &self.paths {
            *h.entry(p.len()).or_insert(0) += 1;
        }
        h
    }
}

/// Search knobs. `include_meta` is consumed at graph build time and carried
/// here so one value describes a full run configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum path length (edge count), 1..=MAX_DEPTH_BOUND.
    pub max_depth: usize,
    pub allow_quasi: bool,
    /// Longest permitted reversed run.
    pub max_reversed: usize,
    /// Require the reversed run to end at the final edge.
    pub terminal_only: bool,
    pub include_meta: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_depth: 4,
            allow_quasi: true,
            max_reversed: 2,
            terminal_only: true,
            include_meta: true,
        }
    }
}

impl SearchConfig {
    pub fn cycles_only(max_depth: usize) -> SearchConfig {
        SearchConfig {
            max_depth,
            allow_quasi: false,
            max_reversed: 0,
            ..SearchConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), PathError> {
        if self.max_depth == 0 || self.max_depth > MAX_DEPTH_BOUND {
            return Err(PathError::IllegalConfig(format!(
                "max_depth {} outside 1..={}",
                self.max_depth, MAX_DEPTH_BOUND
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum PathError {
    #[error("illegal search configuration: {0}")]
    IllegalConfig(String),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("endpoints must be senses of distinct entries")]
    InvalidEndpoints,
    #[error("graph too large for exhaustive enumeration: {nodes} nodes (limit {limit})")]
    GraphTooLarge { nodes: usize, limit: usize },
}

/// Violated path rule, in checking order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LegalityRule {
    /// First and last node differ.
    Closed,
    /// Length outside 2..=max_depth.
    Length,
    /// An interior node repeats or revisits the source.
    Simplicity,
    /// Two distinct path nodes are senses of the same entry.
    SameLemma,
    /// Reversed edges present with allow_quasi off.
    QuasiDisabled,
    /// One of the first two edges is reversed.
    LeadingEdges,
    /// More than one reversed run.
    RunNotConsecutive,
    /// Reversed run longer than max_reversed.
    MaxReversed,
    /// Reversed run does not end at the final edge.
    TerminalOnly,
}

/// Declarative shape check. Does not consult edge existence; callers
/// constructing paths from the graph guarantee that separately.
pub fn is_legal_path(p: &Path, cfg: &SearchConfig) -> Result<(), LegalityRule> {
    let n = p.dirs.len();
    if p.nodes.first() != p.nodes.last() {
        return Err(LegalityRule::Closed);
    }
    if n < 2 || n > cfg.max_depth {
        return Err(LegalityRule::Length);
    }
    let mut seen = HashSet::new();
    for &v in &p.nodes[..n] {
        if !seen.insert(v) {
            return Err(LegalityRule::Simplicity);
        }
    }
    let reversed: Vec<usize> = (0..n)
        .filter(|&i| p.dirs[i] == Direction::Reversed)
        .collect();
    if reversed.is_empty() {
        return Ok(());
    }
    if !cfg.allow_quasi {
        return Err(LegalityRule::QuasiDisabled);
    }
    if reversed[0] < 2 {
        return Err(LegalityRule::LeadingEdges);
    }
    if reversed.windows(2).any(|w| w[1] != w[0] + 1) {
        return Err(LegalityRule::RunNotConsecutive);
    }
    if reversed.len() > cfg.max_reversed {
        return Err(LegalityRule::MaxReversed);
    }
    if cfg.terminal_only && *reversed.last().unwrap() != n - 1 {
        return Err(LegalityRule::TerminalOnly);
    }
    Ok(())
}

/// Shape check plus the same-lemma exclusion, which needs the graph.
pub fn is_legal_path_in(p: &Path, cfg: &SearchConfig, g: &NoisyGraph) -> Result<(), LegalityRule> {
    is_legal_path(p, cfg)?;
    let n = p.dirs.len();
    let mut entries = HashSet::new();
    for &v in &p.nodes[..n] {
        if !entries.insert(g.node(v).sense.entry) {
            return Err(LegalityRule::SameLemma);
        }
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Phase {
    AllForward,
    InRun(usize),
    AfterRun,
}

struct Dfs<'g> {
    g: &'g NoisyGraph,
    cfg: SearchConfig,
    source: NodeId,
    nodes: Vec<NodeId>,
    dirs: Vec<Direction>,
    on_path: HashSet<NodeId>,
    entries_used: HashSet<usize>,
    out: Vec<Path>,
}

impl<'g> Dfs<'g> {
    fn close(&mut self, dir: Direction) {
        let mut nodes = self.nodes.clone();
        nodes.push(self.source);
        let mut dirs = self.dirs.clone();
        dirs.push(dir);
        self.out.push(Path::new(nodes, dirs));
    }

    fn recurse(&mut self, current: NodeId, phase: Phase) {
        let edges = self.dirs.len();
        let can_close = edges < self.cfg.max_depth;
        let can_extend = edges + 2 <= self.cfg.max_depth;

        for e in self.g.out_edges(current) {
            let v = e.node;
            if v == self.source {
                if !can_close {
                    continue;
                }
                // forward close: legal unless it strands a reversed run
                // before the final edge under terminal_only
                match phase {
                    Phase::AllForward => self.close(Direction::Forward),
                    Phase::InRun(_) | Phase::AfterRun => {
                        if !self.cfg.terminal_only {
                            self.close(Direction::Forward);
                        }
                    }
                }
                continue;
            }
            if !can_extend
                || self.on_path.contains(&v)
                || self.entries_used.contains(&self.g.node(v).sense.entry)
            {
                continue;
            }
            let next_phase = match phase {
                Phase::AllForward => Phase::AllForward,
                Phase::InRun(_) | Phase::AfterRun => {
                    if self.cfg.terminal_only {
                        continue;
                    }
                    Phase::AfterRun
                }
            };
            self.step(current, v, Direction::Forward, next_phase);
        }

        if !self.cfg.allow_quasi || self.cfg.max_reversed == 0 {
            return;
        }
        for e in self.g.in_edges(current) {
            let v = e.node;
            if v == self.source {
                if !can_close {
                    continue;
                }
                // reversed close: the run ends at the final edge
                match phase {
                    // run is the single final edge; it must not occupy the
                    // first two edge positions
                    Phase::AllForward if edges >= 2 => self.close(Direction::Reversed),
                    Phase::InRun(r) if r < self.cfg.max_reversed => self.close(Direction::Reversed),
                    _ => {}
                }
                continue;
            }
            if !can_extend
                || self.on_path.contains(&v)
                || self.entries_used.contains(&self.g.node(v).sense.entry)
            {
                continue;
            }
            let next_phase = match phase {
                Phase::AllForward if edges >= 2 => Phase::InRun(1),
                Phase::InRun(r) if r < self.cfg.max_reversed => Phase::InRun(r + 1),
                _ => continue,
            };
            self.step(current, v, Direction::Reversed, next_phase);
        }
    }

    fn step(&mut self, _from: NodeId, v: NodeId, dir: Direction, phase: Phase) {
        self.nodes.push(v);
        self.dirs.push(dir);
        self.on_path.insert(v);
        self.entries_used.insert(self.g.node(v).sense.entry);
        self.recurse(v, phase);
        self.entries_used.remove(&self.g.node(v).sense.entry);
        self.on_path.remove(&v);
        self.dirs.pop();
        self.nodes.pop();
    }
}

fn check_endpoints(g: &NoisyGraph, candidate: NodeId, source: NodeId) -> Result<(), PathError> {
    if candidate >= g.node_count() {
        return Err(PathError::UnknownNode(candidate));
    }
    if source >= g.node_count() {
        return Err(PathError::UnknownNode(source));
    }
    if candidate == source || g.node(candidate).sense.entry == g.node(source).sense.entry {
        return Err(PathError::InvalidEndpoints);
    }
    Ok(())
}

/// All legal cycles and quasi-cycles from `source` through `candidate` back
/// to `source`. The prefix edge (source, candidate) is taken as given and
/// not re-checked against the graph. Paths come out in depth-first order.
pub fn find_cqc_paths(
    g: &NoisyGraph,
    candidate: NodeId,
    source: NodeId,
    cfg: &SearchConfig,
) -> Result<PathSet, PathError> {
    cfg.validate()?;
    check_endpoints(g, candidate, source)?;
    let mut dfs = Dfs {
        g,
        cfg: *cfg,
        source,
        nodes: vec![source, candidate],
        dirs: vec![Direction::Forward],
        on_path: HashSet::from([source, candidate]),
        entries_used: HashSet::from([g.node(source).sense.entry, g.node(candidate).sense.entry]),
        out: Vec::new(),
    };
    dfs.recurse(candidate, Phase::AllForward);
    let paths = std::mem::take(&mut dfs.out);
    Ok(PathSet::new(paths))
}

/// Forward-only paths candidate -> ... -> source of up to max_depth - 1
/// edges, returned with the implicit prefix prepended. With the prefix a
/// closed forward walk is exactly a cycle, so this coincides with a
/// cycles-only search; it exists as the open-path rival's collector.
pub fn find_open_paths(
    g: &NoisyGraph,
    candidate: NodeId,
    source: NodeId,
    max_depth: usize,
) -> Result<PathSet, PathError> {
    let cfg = SearchConfig::cycles_only(max_depth);
    find_cqc_paths(g, candidate, source, &cfg)
}

/// Cycles of the symmetrized graph through source and candidate, minimum
/// length 3 (a 2-cycle would retrace the prefix edge). Directions are
/// reported Forward as an orientation convention.
pub fn find_undirected_cycles(
    g: &NoisyGraph,
    candidate: NodeId,
    source: NodeId,
    max_depth: usize,
) -> Result<PathSet, PathError> {
    let cfg = SearchConfig::cycles_only(max_depth);
    cfg.validate()?;
    check_endpoints(g, candidate, source)?;

    let neighbors = |v: NodeId| -> Vec<NodeId> {
        let mut set = BTreeSet::new();
        for e in g.out_edges(v) {
            set.insert(e.node);
        }
        for e in g.in_edges(v) {
            set.insert(e.node);
        }
        set.into_iter().collect()
    };

    let mut out = Vec::new();
    let mut nodes = vec![source, candidate];
    let mut on_path: HashSet<NodeId> = nodes.iter().copied().collect();
    let mut entries: HashSet<usize> = nodes.iter().map(|&v| g.node(v).sense.entry).collect();

    // explicit state keeps the reference enumerator trivially auditable
    #[allow(clippy::too_many_arguments)]
    fn rec(
        g: &NoisyGraph,
        neighbors: &dyn Fn(NodeId) -> Vec<NodeId>,
        source: NodeId,
        max_depth: usize,
        nodes: &mut Vec<NodeId>,
        on_path: &mut HashSet<NodeId>,
        entries: &mut HashSet<usize>,
        out: &mut Vec<Path>,
    ) {
        let current = *nodes.last().unwrap();
        let edges = nodes.len() - 1;
        for v in neighbors(current) {
            if v == source {
                if edges >= 2 && edges < max_depth {
                    let mut ns = nodes.clone();
                    ns.push(source);
                    let dirs = vec![Direction::Forward; ns.len() - 1];
                    out.push(Path::new(ns, dirs));
                }
                continue;
            }
            if edges + 2 > max_depth
                || on_path.contains(&v)
                || entries.contains(&g.node(v).sense.entry)
            {
                continue;
            }
            nodes.push(v);
            on_path.insert(v);
            entries.insert(g.node(v).sense.entry);
            rec(
                g, neighbors, source, max_depth, nodes, on_path, entries, out,
            );
            entries.remove(&g.node(v).sense.entry);
            on_path.remove(&v);
            nodes.pop();
        }
    }

    rec(
        g,
        &neighbors,
        source,
        max_depth,
        &mut nodes,
        &mut on_path,
        &mut entries,
        &mut out,
    );
    Ok(PathSet::new(out))
}

/// Exhaustive reference enumeration for small graphs: every node sequence
/// of legal length, every direction assignment supported by the edge set
/// (the prefix edge excepted), filtered through the declarative checker.
/// Shares no traversal logic with find_cqc_paths.
pub fn enumerate_paths_bruteforce(
    g: &NoisyGraph,
    candidate: NodeId,
    source: NodeId,
    cfg: &SearchConfig,
) -> Result<PathSet, PathError> {
    cfg.validate()?;
    check_endpoints(g, candidate, source)?;
    if g.node_count() > BRUTEFORCE_NODE_LIMIT {
        return Err(PathError::GraphTooLarge {
            nodes: g.node_count(),
            limit: BRUTEFORCE_NODE_LIMIT,
        });
    }

    let pool: Vec<NodeId> = (0..g.node_count())
        .filter(|&v| v != candidate && v != source)
        .collect();
    let max_interior = cfg.max_depth.saturating_sub(2);

    let mut out = Vec::new();
    let mut interior: Vec<NodeId> = Vec::new();
    let mut used = vec![false; g.node_count()];

    fn expand_dirs(
        g: &NoisyGraph,
        cfg: &SearchConfig,
        seq: &[NodeId],
        dirs: &mut Vec<Direction>,
        out: &mut Vec<Path>,
    ) {
        let i = dirs.len();
        if i == seq.len() - 1 {
            let p = Path::new(seq.to_vec(), dirs.clone());
            if is_legal_path_in(&p, cfg, g).is_ok() {
                out.push(p);
            }
            return;
        }
        let (a, b) = (seq[i], seq[i + 1]);
        if g.has_edge(a, b) {
            dirs.push(Direction::Forward);
            expand_dirs(g, cfg, seq, dirs, out);
            dirs.pop();
        }
        if g.has_edge(b, a) {
            dirs.push(Direction::Reversed);
            expand_dirs(g, cfg, seq, dirs, out);
            dirs.pop();
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn expand_interior(
        g: &NoisyGraph,
        cfg: &SearchConfig,
        pool: &[NodeId],
        max_interior: usize,
        candidate: NodeId,
        source: NodeId,
        interior: &mut Vec<NodeId>,
        used: &mut [bool],
        out: &mut Vec<Path>,
    ) {
        let mut seq = Vec::with_capacity(interior.len() + 3);
        seq.push(source);
        seq.push(candidate);
        seq.extend_from_slice(interior);
        seq.push(source);
        let mut dirs = vec![Direction::Forward];
        expand_dirs(g, cfg, &seq, &mut dirs, out);

        if interior.len() == max_interior {
            return;
        }
        for &v in pool {
            if used[v] {
                continue;
            }
            used[v] = true;
            interior.push(v);
            expand_interior(
                g,
                cfg,
                pool,
                max_interior,
                candidate,
                source,
                interior,
                used,
                out,
            );
            interior.pop();
            used[v] = false;
        }
    }

    expand_interior(
        g,
        cfg,
        &pool,
        max_interior,
        candidate,
        source,
        &mut interior,
        &mut used,
        &mut out,
    );
    out.sort();
    out.dedup();
    Ok(PathSet::new(out))
}
