//! Rival disambiguators and baselines. All emit the same SenseMapping
//! contract as the cycle search so the evaluation harness treats them
//! uniformly.

use crate::dict::Dictionary;
use crate::graph::{lexicalizations, NodeId, NoisyGraph};
use crate::path::{
    find_open_paths, find_undirected_cycles, Direction, Path, PathError, PathSet, SearchConfig,
    MAX_DEPTH_BOUND,
};
use crate::score::{
    disambiguate_entry, map_with_choice, map_with_path_collector, map_with_scores, PathWeight,
    SenseMapping, WeightKind,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

pub const PPR_DAMPING: f64 = 0.85;
pub const PPR_ITERATIONS: usize = 30;

#[derive(Debug, Error)]
pub enum RivalError {
    #[error("word {0} has no candidate senses")]
    UnresolvableWord(String),
    #[error(transparent)]
    Path(#[from] PathError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgorithmId {
    Cqc,
    CyclesOnly,
    OpenDfs,
    RandomWalks,
    Markov,
    Ppr,
    Lesk,
    FirstSense,
    Random,
    Degree,
    UndirectedCycles,
}

impl AlgorithmId {
    pub fn code(self) -> &'static str {
        match self {
            AlgorithmId::Cqc => "cqc",
            AlgorithmId::CyclesOnly => "cycles",
            AlgorithmId::OpenDfs => "dfs",
            AlgorithmId::RandomWalks => "random_walks",
            AlgorithmId::Markov => "markov",
            AlgorithmId::Ppr => "ppr",
            AlgorithmId::Lesk => "lesk",
            AlgorithmId::FirstSense => "fs",
            AlgorithmId::Random => "random",
            AlgorithmId::Degree => "degree",
            AlgorithmId::UndirectedCycles => "undirected_cycles",
        }
    }

    pub fn all() -> &'static [AlgorithmId] {
        &[
            AlgorithmId::Cqc,
            AlgorithmId::CyclesOnly,
            AlgorithmId::OpenDfs,
            AlgorithmId::RandomWalks,
            AlgorithmId::Markov,
            AlgorithmId::Ppr,
            AlgorithmId::Lesk,
            AlgorithmId::FirstSense,
            AlgorithmId::Random,
            AlgorithmId::Degree,
            AlgorithmId::UndirectedCycles,
        ]
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for AlgorithmId {
    type Err = String;

    fn from_str(s: &str) -> Result<AlgorithmId, String> {
        AlgorithmId::all()
            .iter()
            .copied()
            .find(|a| a.code() == s)
            .ok_or_else(|| format!("unknown algorithm {s}"))
    }
}

/// Full parameterization of one disambiguation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgoParams {
    pub algorithm: AlgorithmId,
    pub search: SearchConfig,
    pub weight: WeightKind,
    /// random_walks only.
    pub walk_count: usize,
    /// random_walks and the random baseline.
    pub seed: u64,
}

impl Default for AlgoParams {
    fn default() -> Self {
        AlgoParams {
            algorithm: AlgorithmId::Cqc,
            search: SearchConfig::default(),
            weight: WeightKind::Exponential,
            walk_count: 400,
            seed: 0,
        }
    }
}

/// Dispatch one source sense through the selected algorithm.
pub fn run_algorithm(
    dict: &Dictionary,
    g: &NoisyGraph,
    source_node: NodeId,
    params: &AlgoParams,
) -> Result<SenseMapping, PathError> {
    match params.algorithm {
        AlgorithmId::Cqc => disambiguate_entry(g, source_node, &params.search, &params.weight),
        AlgorithmId::CyclesOnly => {
            run_cycles_only(g, source_node, params.search.max_depth, &params.weight)
        }
        AlgorithmId::OpenDfs => {
            run_open_dfs(g, source_node, params.search.max_depth, &params.weight)
        }
        AlgorithmId::RandomWalks => run_random_walks(
            g,
            source_node,
            &RandomWalkConfig {
                walk_count: params.walk_count,
                max_depth: params.search.max_depth,
                seed: params.seed,
            },
            &params.weight,
        ),
        AlgorithmId::Markov => run_markov(g, source_node, params.search.max_depth),
        AlgorithmId::Ppr => run_ppr(g, source_node),
        AlgorithmId::Lesk => Ok(run_lesk(dict, g, source_node)),
        AlgorithmId::FirstSense => Ok(run_baseline(
            g,
            source_node,
            BaselineKind::FirstSense,
            params.seed,
        )),
        AlgorithmId::Random => Ok(run_baseline(
            g,
            source_node,
            BaselineKind::Random,
            params.seed,
        )),
        AlgorithmId::Degree => Ok(run_baseline(
            g,
            source_node,
            BaselineKind::Degree,
            params.seed,
        )),
        AlgorithmId::UndirectedCycles => {
            run_undirected_cycles(g, source_node, params.search.max_depth, &params.weight)
        }
    }
}

/// Cycle search with quasi-cycles disabled.
pub fn run_cycles_only<W: PathWeight>(
    g: &NoisyGraph,
    source_node: NodeId,
    max_depth: usize,
    omega: &W,
) -> Result<SenseMapping, PathError> {
    disambiguate_entry(g, source_node, &SearchConfig::cycles_only(max_depth), omega)
}

/// Open forward paths candidate -> ... -> source, prefix prepended.
pub fn run_open_dfs<W: PathWeight>(
    g: &NoisyGraph,
    source_node: NodeId,
    max_depth: usize,
    omega: &W,
) -> Result<SenseMapping, PathError> {
    SearchConfig::cycles_only(max_depth).validate()?;
    map_with_path_collector(g, source_node, omega, |cand, _| {
        find_open_paths(g, cand, source_node, max_depth)
    })
}

#[derive(Debug, Clone, Copy)]
pub struct RandomWalkConfig {
    pub walk_count: usize,
    pub max_depth: usize,
    pub seed: u64,
}

impl Default for RandomWalkConfig {
    fn default() -> Self {
        RandomWalkConfig {
            walk_count: 400,
            max_depth: SearchConfig::default().max_depth,
            seed: 0,
        }
    }
}

fn splitmix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic per-use-site stream seed. Independent of how many streams
/// a run draws, so enlarging walk_count never perturbs earlier walks.
pub(crate) fn stream_seed(seed: u64, tag: u64, a: u64, b: u64) -> u64 {
    splitmix(splitmix(splitmix(splitmix(seed) ^ tag) ^ a) ^ b)
}

const TAG_WALK: u64 = 0x57414c4b;
const TAG_RANDOM: u64 = 0x52414e44;

/// Equiprobable forward walks from the candidate, prefix included as step
/// one. A walk dies on a dead end, a revisit, or a same-lemma violation;
/// reaching the source within max_depth edges collects the walk as a cycle.
/// Distinct collected paths are scored like any other path set.
fn sample_walk_paths(
    g: &NoisyGraph,
    candidate: NodeId,
    source: NodeId,
    cfg: &RandomWalkConfig,
) -> PathSet {
    let mut collected: BTreeSet<Path> = BTreeSet::new();
    for w in 0..cfg.walk_count {
        let mut rng =
            ChaCha8Rng::seed_from_u64(stream_seed(cfg.seed, TAG_WALK, candidate as u64, w as u64));
        let mut nodes = vec![source, candidate];
        let mut visited: HashSet<NodeId> = nodes.iter().copied().collect();
        let mut entries: HashSet<usize> = nodes.iter().map(|&v| g.node(v).sense.entry).collect();
        let mut cur = candidate;
        loop {
            let edges = nodes.len() - 1;
            if edges >= cfg.max_depth {
                break;
            }
            let outs = g.out_edges(cur);
            if outs.is_empty() {
                break;
            }
            let pick = outs[rng.gen_range(0..outs.len())].node;
            if pick == source {
                let mut ns = nodes.clone();
                ns.push(source);
                let len = ns.len() - 1;
                collected.insert(Path::new(ns, vec![Direction::Forward; len]));
                break;
            }
            if visited.contains(&pick) || entries.contains(&g.node(pick).sense.entry) {
                break;
            }
            visited.insert(pick);
            entries.insert(g.node(pick).sense.entry);
            nodes.push(pick);
            cur = pick;
        }
    }
    PathSet::new(collected.into_iter().collect())
}

pub fn run_random_walks<W: PathWeight>(
    g: &NoisyGraph,
    source_node: NodeId,
    cfg: &RandomWalkConfig,
    omega: &W,
) -> Result<SenseMapping, PathError> {
    if cfg.walk_count == 0 {
        return Err(PathError::IllegalConfig("walk_count must be >= 1".into()));
    }
    if cfg.max_depth == 0 || cfg.max_depth > MAX_DEPTH_BOUND {
        return Err(PathError::IllegalConfig(format!(
            "max_depth {} outside 1..={}",
            cfg.max_depth, MAX_DEPTH_BOUND
        )));
    }
    map_with_path_collector(g, source_node, omega, |cand, _| {
        Ok(sample_walk_paths(g, cand, source_node, cfg))
    })
}

/// Collected walk paths for one candidate, exposed for coverage tests.
pub fn collect_walk_paths(
    g: &NoisyGraph,
    candidate: NodeId,
    source: NodeId,
    cfg: &RandomWalkConfig,
) -> PathSet {
    sample_walk_paths(g, candidate, source, cfg)
}

/// Row-stochastic transition matrix; dangling rows stay all-zero.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    rows: Vec<Vec<(NodeId, f64)>>,
}

pub fn transition_matrix(g: &NoisyGraph) -> TransitionMatrix {
    let rows = (0..g.node_count())
        .map(|v| {
            let outs = g.out_edges(v);
            let p = if outs.is_empty() {
                0.0
            } else {
                1.0 / outs.len() as f64
            };
            outs.iter().map(|e| (e.node, p)).collect()
        })
        .collect();
    TransitionMatrix { rows }
}

impl TransitionMatrix {
    pub fn node_count(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, v: NodeId) -> &[(NodeId, f64)] {
        &self.rows[v]
    }
}

/// Average of the m-step arrival probabilities from `from` to `to`,
/// m = 1..=steps, by iterated vector-matrix products.
pub fn markov_arrival_score(tm: &TransitionMatrix, from: NodeId, to: NodeId, steps: usize) -> f64 {
    let n = tm.node_count();
    let mut v = vec![0.0f64; n];
    v[from] = 1.0;
    let mut acc = 0.0;
    for _ in 1..=steps {
        let mut next = vec![0.0f64; n];
        for (i, &mass) in v.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            for &(j, p) in &tm.rows[i] {
                next[j] += mass * p;
            }
        }
        v = next;
        acc += v[to];
    }
    acc / steps as f64
}

/// Markov-chain rival: candidates ranked by averaged arrival probability at
/// the source over 1..=steps transitions.
pub fn run_markov(
    g: &NoisyGraph,
    source_node: NodeId,
    steps: usize,
) -> Result<SenseMapping, PathError> {
    if steps == 0 || steps > MAX_DEPTH_BOUND {
        return Err(PathError::IllegalConfig(format!(
            "step bound {steps} outside 1..={MAX_DEPTH_BOUND}"
        )));
    }
    let tm = transition_matrix(g);
    map_with_scores(g, source_node, |cand, _| {
        Ok(markov_arrival_score(&tm, cand, source_node, steps))
    })
}

/// Power iteration with the teleport vector concentrated on one node.
/// Dangling mass is redistributed to the teleport vector, so the ranks stay
/// a probability distribution after every iteration.
pub fn personalized_pagerank(
    g: &NoisyGraph,
    teleport: NodeId,
    damping: f64,
    iterations: usize,
) -> Vec<f64> {
    let n = g.node_count();
    let mut r = vec![0.0f64; n];
    r[teleport] = 1.0;
    for _ in 0..iterations {
        let mut next = vec![0.0f64; n];
        let mut dangling = 0.0f64;
        for (v, &mass) in r.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            let outs = g.out_edges(v);
            if outs.is_empty() {
                dangling += mass;
                continue;
            }
            let share = mass / outs.len() as f64;
            for e in outs {
                next[e.node] += share;
            }
        }
        for (v, slot) in next.iter_mut().enumerate() {
            let tele = if v == teleport { 1.0 } else { 0.0 };
            *slot = (1.0 - damping) * tele + damping * (*slot + dangling * tele);
        }
        r = next;
    }
    r
}

/// Personalized-PageRank rival: each candidate seeds its own teleport
/// vector; candidates ranked by the resulting rank of the source sense.
pub fn run_ppr(g: &NoisyGraph, source_node: NodeId) -> Result<SenseMapping, PathError> {
    map_with_scores(g, source_node, |cand, _| {
        Ok(personalized_pagerank(g, cand, PPR_DAMPING, PPR_ITERATIONS)[source_node])
    })
}

/// Lesk-style overlap between the source sense and a candidate:
/// (shared lexicalizations + shared out-neighbors) normalized by the larger
/// neighborhood size.
pub fn lesk_overlap(dict: &Dictionary, g: &NoisyGraph, a: NodeId, b: NodeId) -> f64 {
    let syn = |v: NodeId| -> HashSet<&str> {
        lexicalizations(dict.entry(g.node(v).sense.entry))
            .into_iter()
            .collect()
    };
    let next = |v: NodeId| -> HashSet<NodeId> { g.out_edges(v).iter().map(|e| e.node).collect() };
    let (syn_a, syn_b) = (syn(a), syn(b));
    let (next_a, next_b) = (next(a), next(b));
    let shared = syn_a.intersection(&syn_b).count() + next_a.intersection(&next_b).count();
    let denom = (syn_a.len() + next_a.len()).max(syn_b.len() + next_b.len());
    if denom == 0 {
        return 0.0;
    }
    shared as f64 / denom as f64
}

pub fn run_lesk(dict: &Dictionary, g: &NoisyGraph, source_node: NodeId) -> SenseMapping {
    map_with_scores(g, source_node, |cand, _| {
        Ok(lesk_overlap(dict, g, source_node, cand))
    })
    .expect("lesk scorer is infallible")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    FirstSense,
    Random,
    Degree,
}

/// Baseline choice for one resolvable word. Baselines never abstain.
pub fn baseline_choice(
    g: &NoisyGraph,
    source_node: NodeId,
    word_index: usize,
    kind: BaselineKind,
    seed: u64,
) -> Result<usize, RivalError> {
    let wc = &g.word_candidates(source_node)[word_index];
    if wc.nodes.is_empty() {
        return Err(RivalError::UnresolvableWord(wc.word.clone()));
    }
    Ok(match kind {
        BaselineKind::FirstSense => 0,
        BaselineKind::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(
                seed,
                TAG_RANDOM,
                source_node as u64,
                word_index as u64,
            ));
            rng.gen_range(0..wc.nodes.len())
        }
        BaselineKind::Degree => {
            let mut best = 0;
            for (i, &n) in wc.nodes.iter().enumerate().skip(1) {
                if g.out_edges(n).len() > g.out_edges(wc.nodes[best]).len() {
                    best = i;
                }
            }
            best
        }
    })
}

pub fn run_baseline(
    g: &NoisyGraph,
    source_node: NodeId,
    kind: BaselineKind,
    seed: u64,
) -> SenseMapping {
    let mut word_index = 0usize;
    map_with_choice(g, source_node, |_wc| {
        let i = word_index;
        word_index += 1;
        baseline_choice(g, source_node, i, kind, seed).ok()
    })
}

/// Undirected variant: cycles of the symmetrized graph, minimum length 3.
pub fn run_undirected_cycles<W: PathWeight>(
    g: &NoisyGraph,
    source_node: NodeId,
    max_depth: usize,
    omega: &W,
) -> Result<SenseMapping, PathError> {
    SearchConfig::cycles_only(max_depth).validate()?;
    map_with_path_collector(g, source_node, omega, |cand, _| {
        find_undirected_cycles(g, cand, source_node, max_depth)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dict::parse_dictionary;
    use crate::graph::build_noisy_graph;

    fn graph(json: &str) -> (Dictionary, NoisyGraph) {
        let d = parse_dictionary(json).unwrap();
        let g = build_noisy_graph(&d, true);
        (d, g)
    }

    fn two_node() -> (Dictionary, NoisyGraph) {
        graph(
            r#"{"source_lang":"en","target_lang":"it","entries":[
          {"lemma":"a","pos":"n","lang":"en","senses":[{"id":"1","translations":["b"],"ref":null}]},
          {"lemma":"b","pos":"n","lang":"it","senses":[{"id":"1","translations":["a"],"ref":null}]}
        ]}"#,
        )
    }

    #[test]
    fn cycles_only_abstains_where_quasi_evidence_exists() {
        // only evidence for word "b" is the terminal quasi-cycle
        // [a, b, c2, c, a]; cycles-only must abstain, cqc answers
        let (_, g) = graph(
            r#"{"source_lang":"en","target_lang":"it","entries":[
          {"lemma":"a","pos":"n","lang":"en","senses":[{"id":"1","translations":["b","c"],"ref":null}]},
          {"lemma":"b","pos":"n","lang":"it","senses":[{"id":"1","translations":["c2"],"ref":null}]},
          {"lemma":"c","pos":"n","lang":"it","senses":[{"id":"1","translations":["zzz"],"ref":null}]},
          {"lemma":"c2","pos":"n","lang":"en","senses":[{"id":"1","translations":["c"],"ref":null}]}
        ]}"#,
        );
        let cqc =
            disambiguate_entry(&g, 0, &SearchConfig::default(), &WeightKind::Exponential).unwrap();
        let cyc = run_cycles_only(&g, 0, 4, &WeightKind::Exponential).unwrap();
        assert!(cqc.words[0].chosen.is_some());
        assert!(cyc.words[0].chosen.is_none());
        // answered set of cycles-only is a subset of cqc's
        for (c, q) in cyc.words.iter().zip(cqc.words.iter()) {
            if c.chosen.is_some() {
                assert!(q.chosen.is_some());
            }
        }
    }

    #[test]
    fn open_dfs_answers_two_node_and_discards_direct_path() {
        let (_, g) = two_node();
        let m = run_open_dfs(&g, 0, 4, &WeightKind::Exponential).unwrap();
        assert_eq!(m.words[0].chosen_candidate().unwrap().label, "1");

        // direct edge only, no return: abstain
        let (_, g) = graph(
            r#"{"source_lang":"en","target_lang":"it","entries":[
          {"lemma":"a","pos":"n","lang":"en","senses":[{"id":"1","translations":["b"],"ref":null}]},
          {"lemma":"b","pos":"n","lang":"it","senses":[{"id":"1","translations":["zzz"],"ref":null}]}
        ]}"#,
        );
        let m = run_open_dfs(&g, 0, 4, &WeightKind::Exponential).unwrap();
        assert!(m.words[0].chosen.is_none());
    }

    #[test]
    fn random_walks_find_the_only_cycle_and_repeat_deterministically() {
        let (_, g) = two_node();
        for seed in [0u64, 1, 42] {
            let cfg = RandomWalkConfig {
                walk_count: 5,
                max_depth: 4,
                seed,
            };
            let m1 = run_random_walks(&g, 0, &cfg, &WeightKind::Exponential).unwrap();
            let m2 = run_random_walks(&g, 0, &cfg, &WeightKind::Exponential).unwrap();
            assert_eq!(m1.words[0].chosen, m2.words[0].chosen);
            assert_eq!(m1.words[0].chosen_candidate().unwrap().label, "1");
        }
    }

    #[test]
    fn walk_path_sets_grow_monotonically_with_walk_count() {
        // star: b returns to a with 10 distractor dead ends
        let mut entries = vec![
            r#"{"lemma":"a","pos":"n","lang":"en","senses":[{"id":"1","translations":["b"],"ref":null}]}"#.to_string(),
        ];
        let dis: Vec<String> = (0..10).map(|i| format!("d{i}")).collect();
        entries.push(format!(
            r#"{{"lemma":"b","pos":"n","lang":"it","senses":[{{"id":"1","translations":["a","{}"],"ref":null}}]}}"#,
            dis.join("\",\"")
        ));
        for d in &dis {
            entries.push(format!(
                r#"{{"lemma":"{d}","pos":"n","lang":"en","senses":[{{"id":"1","translations":["zzz"],"ref":null}}]}}"#
            ));
        }
        let json = format!(
            r#"{{"source_lang":"en","target_lang":"it","entries":[{}]}}"#,
            entries.join(",")
        );
        let (_, g) = graph(&json);
        let small = collect_walk_paths(
            &g,
            1,
            0,
            &RandomWalkConfig {
                walk_count: 50,
                max_depth: 4,
                seed: 7,
            },
        );
        let large = collect_walk_paths(
            &g,
            1,
            0,
            &RandomWalkConfig {
                walk_count: 2000,
                max_depth: 4,
                seed: 7,
            },
        );
        let large_set: std::collections::HashSet<_> = large.paths().iter().collect();
        for p in small.paths() {
            assert!(large_set.contains(p));
        }
        assert!(large.len() >= small.len());
    }

    #[test]
    fn markov_two_node_scores_half() {
        let (_, g) = two_node();
        let tm = transition_matrix(&g);
        let s = markov_arrival_score(&tm, 1, 0, 2);
        assert_eq!(s, 0.5);
        let m = run_markov(&g, 0, 2).unwrap();
        assert_eq!(m.words[0].chosen_candidate().unwrap().score, 0.5);
    }

    #[test]
    fn markov_single_step_and_unreachable() {
        let (_, g) = graph(
            r#"{"source_lang":"en","target_lang":"it","entries":[
          {"lemma":"a","pos":"n","lang":"en","senses":[{"id":"1","translations":["b"],"ref":null}]},
          {"lemma":"b","pos":"n","lang":"it","senses":[
            {"id":"1","translations":["a"],"ref":null},
            {"id":"2","translations":["zzz"],"ref":null}]}
        ]}"#,
        );
        let tm = transition_matrix(&g);
        // b#1 has the single out-edge to a
        assert_eq!(markov_arrival_score(&tm, 1, 0, 1), 1.0);
        // b#2 never reaches a
        assert_eq!(markov_arrival_score(&tm, 2, 0, 4), 0.0);
        let m = run_markov(&g, 0, 2).unwrap();
        assert_eq!(m.words[0].chosen_candidate().unwrap().label, "1");
        assert!(matches!(
            run_markov(&g, 0, 0),
            Err(PathError::IllegalConfig(_))
        ));
    }

    #[test]
    fn ppr_prefers_candidates_that_reach_the_source() {
        let (_, g) = graph(
            r#"{"source_lang":"en","target_lang":"it","entries":[
          {"lemma":"a","pos":"n","lang":"en","senses":[{"id":"1","translations":["b"],"ref":null}]},
          {"lemma":"b","pos":"n","lang":"it","senses":[
            {"id":"1","translations":["a"],"ref":null},
            {"id":"2","translations":["zzz"],"ref":null}]}
        ]}"#,
        );
        let m = run_ppr(&g, 0).unwrap();
        assert_eq!(m.words[0].chosen_candidate().unwrap().label, "1");
        // ranks stay a distribution
        let r = personalized_pagerank(&g, 1, PPR_DAMPING, PPR_ITERATIONS);
        let sum: f64 = r.iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ppr_symmetric_candidates_tie_to_lower_order_index() {
        let (_, g) = graph(
            r#"{"source_lang":"en","target_lang":"it","entries":[
          {"lemma":"a","pos":"n","lang":"en","senses":[{"id":"1","translations":["b"],"ref":null}]},
          {"lemma":"b","pos":"n","lang":"it","senses":[
            {"id":"1","translations":["a"],"ref":null},
            {"id":"2","translations":["a"],"ref":null}]}
        ]}"#,
        );
        let r1 = personalized_pagerank(&g, 1, PPR_DAMPING, PPR_ITERATIONS)[0];
        let r2 = personalized_pagerank(&g, 2, PPR_DAMPING, PPR_ITERATIONS)[0];
        assert!((r1 - r2).abs() < 1e-12);
        let m = run_ppr(&g, 0).unwrap();
        assert_eq!(m.words[0].chosen_candidate().unwrap().label, "1");
    }

    #[test]
    fn lesk_hand_counted_overlap() {
        // next*(alpha#1) = {alpha} + {beta#1, beta#2, ix#1}, size 4
        // next*(beta#1) = {beta} + {gamma#1, ix#1}, size 3
        // shared: the ix#1 node -> overlap 1/4; beta#2 shares nothing
        let (d, g) = graph(
            r#"{"source_lang":"en","target_lang":"it","entries":[
          {"lemma":"alpha","pos":"n","lang":"en","senses":[
            {"id":"1","translations":["beta"],"meta":["ix"],"ref":null}]},
          {"lemma":"beta","pos":"n","lang":"it","senses":[
            {"id":"1","translations":["gamma"],"meta":["ix"],"ref":null},
            {"id":"2","translations":["gamma2"],"ref":null}]},
          {"lemma":"gamma","pos":"n","lang":"en","senses":[{"id":"1","translations":["zz1"],"ref":null}]},
          {"lemma":"gamma2","pos":"n","lang":"en","senses":[{"id":"1","translations":["zz2"],"ref":null}]},
          {"lemma":"ix","pos":"n","lang":"it","senses":[{"id":"1","translations":["zz3"],"ref":null}]}
        ]}"#,
        );
        assert!((lesk_overlap(&d, &g, 0, 1) - 0.25).abs() < 1e-12);
        assert_eq!(lesk_overlap(&d, &g, 0, 2), 0.0);
        let m = run_lesk(&d, &g, 0);
        assert_eq!(m.words[0].chosen_candidate().unwrap().label, "1");
        assert!((m.confidence("beta").unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn lesk_abstains_on_disjoint_neighborhoods() {
        let (d, g) = graph(
            r#"{"source_lang":"en","target_lang":"it","entries":[
          {"lemma":"a","pos":"n","lang":"en","senses":[{"id":"1","translations":["b"],"ref":null}]},
          {"lemma":"b","pos":"n","lang":"it","senses":[{"id":"1","translations":["a"],"ref":null}]}
        ]}"#,
        );
        // next(a)={b}, next(b)={a}: no shared node, no shared string
        let m = run_lesk(&d, &g, 0);
        assert!(m.words[0].chosen.is_none());
    }

    #[test]
    fn baselines_choose_and_never_abstain_on_resolvable_words() {
        let (_, g) = graph(
            r#"{"source_lang":"en","target_lang":"it","entries":[
          {"lemma":"a","pos":"n","lang":"en","senses":[{"id":"1","translations":["b","ghost"],"ref":null}]},
          {"lemma":"b","pos":"n","lang":"it","senses":[
            {"id":"1","translations":["x1"],"ref":null},
            {"id":"2","translations":["x1","x2","x3","x4","x5"],"ref":null}]},
          {"lemma":"x1","pos":"n","lang":"en","senses":[{"id":"1","translations":["zz"],"ref":null}]},
          {"lemma":"x2","pos":"n","lang":"en","senses":[{"id":"1","translations":["zz"],"ref":null}]},
          {"lemma":"x3","pos":"n","lang":"en","senses":[{"id":"1","translations":["zz"],"ref":null}]},
          {"lemma":"x4","pos":"n","lang":"en","senses":[{"id":"1","translations":["zz"],"ref":null}]},
          {"lemma":"x5","pos":"n","lang":"en","senses":[{"id":"1","translations":["zz"],"ref":null}]}
        ]}"#,
        );
        let fs = run_baseline(&g, 0, BaselineKind::FirstSense, 0);
        assert_eq!(fs.words[0].chosen_candidate().unwrap().label, "1");
        // unresolvable word still abstains
        assert!(fs.words[1].chosen.is_none());

        let deg = run_baseline(&g, 0, BaselineKind::Degree, 0);
        assert_eq!(deg.words[0].chosen_candidate().unwrap().label, "2");

        let r1 = run_baseline(&g, 0, BaselineKind::Random, 9);
        let r2 = run_baseline(&g, 0, BaselineKind::Random, 9);
        assert_eq!(r1.words[0].chosen, r2.words[0].chosen);
        assert!(r1.words[0].chosen.is_some());

        assert!(matches!(
            baseline_choice(&g, 0, 1, BaselineKind::FirstSense, 0),
            Err(RivalError::UnresolvableWord(_))
        ));
    }

    #[test]
    fn undirected_variant_abstains_on_two_node_but_answers_triangles() {
        let (_, g) = two_node();
        let m = run_undirected_cycles(&g, 0, 4, &WeightKind::Exponential).unwrap();
        assert!(m.words[0].chosen.is_none());

        // a->b, a->c, c->b: undirected triangle a-b-c-a supports word "b"
        let (_, g) = graph(
            r#"{"source_lang":"en","target_lang":"it","entries":[
          {"lemma":"a","pos":"n","lang":"en","senses":[{"id":"1","translations":["b","c"],"ref":null}]},
          {"lemma":"b","pos":"n","lang":"it","senses":[{"id":"1","translations":["zzz"],"ref":null}]},
          {"lemma":"c","pos":"n","lang":"it","senses":[{"id":"1","translations":["zzz2"],"meta":["b"],"ref":null}]}
        ]}"#,
        );
        let m = run_undirected_cycles(&g, 0, 4, &WeightKind::Exponential).unwrap();
        assert!(m.words[0].chosen.is_some());
        // directed cycles variant has nothing to offer here
        let c = run_cycles_only(&g, 0, 4, &WeightKind::Exponential).unwrap();
        assert!(c.words[0].chosen.is_none());
    }

    #[test]
    fn algorithm_ids_round_trip() {
        for a in AlgorithmId::all() {
            assert_eq!(AlgorithmId::from_str(a.code()).unwrap(), *a);
        }
        assert!(AlgorithmId::from_str("nope").is_err());
    }

    #[test]
    fn run_algorithm_dispatches_every_id() {
        let (d, g) = two_node();
        for a in AlgorithmId::all() {
            let params = AlgoParams {
                algorithm: *a,
                ..AlgoParams::default()
            };
            let m = run_algorithm(&d, &g, 0, &params).unwrap();
            assert_eq!(m.words.len(), 1);
        }
    }
}
