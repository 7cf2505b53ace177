//! Randomized invariants over seeded dictionaries: every path the search
//! returns must re-validate edge by edge, deeper searches only add paths,
//! and the JSON form must survive a round trip.

mod common;

use cqc::{
    build_noisy_graph, find_cqc_paths, is_legal_path_in, parse_dictionary, serialize_dictionary,
    Direction, NodeId, NoisyGraph, Path, SearchConfig,
};
use proptest::prelude::*;
use std::collections::BTreeSet;

fn search_configs() -> impl Strategy<Value = SearchConfig> {
    (
        1usize..=6,
        any::<bool>(),
        0usize..=3,
        any::<bool>(),
        any::<bool>(),
    )
        .prop_map(
            |(max_depth, allow_quasi, max_reversed, terminal_only, include_meta)| SearchConfig {
                max_depth,
                allow_quasi,
                max_reversed,
                terminal_only,
                include_meta,
            },
        )
}

/// Checks that each hop uses an edge that really exists in the stated
/// direction. Meta edges are excluded at graph build time, so presence in
/// the adjacency list is the whole question.
fn edges_exist(g: &NoisyGraph, p: &Path) -> bool {
    p.dirs.iter().enumerate().all(|(i, dir)| {
        let (from, to) = match dir {
            Direction::Forward => (p.nodes[i], p.nodes[i + 1]),
            Direction::Reversed => (p.nodes[i + 1], p.nodes[i]),
        };
        g.out_edges(from).iter().any(|e| e.node == to)
    })
}

/// Picks a source and one of its real out-neighbors in another entry; the
/// search treats that first edge as the given premise of the question.
fn cross_entry_pair(g: &NoisyGraph, pick: usize) -> Option<(NodeId, NodeId)> {
    let n = g.node_count();
    for i in 0..n {
        let source = (i + pick % n.max(1)) % n;
        let eligible: Vec<NodeId> = g
            .out_edges(source)
            .iter()
            .map(|e| e.node)
            .filter(|&c| g.node(c).sense.entry != g.node(source).sense.entry)
            .collect();
        if let Some(&candidate) = eligible.get((pick / n.max(1)) % eligible.len().max(1)) {
            return Some((source, candidate));
        }
    }
    None
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn returned_paths_revalidate(seed in any::<u64>(), pick in any::<usize>(), cfg in search_configs()) {
        let dict = common::random_dict(seed, 3, 0.25);
        let g = build_noisy_graph(&dict, cfg.include_meta);
        let Some((source, candidate)) = cross_entry_pair(&g, pick) else { return Ok(()) };
        let set = find_cqc_paths(&g, candidate, source, &cfg).unwrap();
        for p in set.sorted_paths() {
            prop_assert!(is_legal_path_in(&p, &cfg, &g).is_ok(), "illegal: {}", p.render(&g));
            prop_assert_eq!(*p.nodes.first().unwrap(), source);
            prop_assert_eq!(p.nodes[1], candidate);
            prop_assert_eq!(*p.nodes.last().unwrap(), source);
            prop_assert_eq!(p.dirs[0], Direction::Forward);
            prop_assert!(p.dirs.len() <= cfg.max_depth);
            prop_assert!(edges_exist(&g, &p));
        }
    }

    #[test]
    fn deeper_search_only_adds_paths(seed in any::<u64>(), pick in any::<usize>(), cfg in search_configs()) {
        let dict = common::random_dict(seed, 3, 0.25);
        let g = build_noisy_graph(&dict, cfg.include_meta);
        let Some((source, candidate)) = cross_entry_pair(&g, pick) else { return Ok(()) };
        let mut shallower: Option<BTreeSet<String>> = None;
        for max_depth in 1..=6 {
            let step = SearchConfig { max_depth, ..cfg };
            let paths: BTreeSet<String> = find_cqc_paths(&g, candidate, source, &step)
                .unwrap()
                .sorted_paths()
                .iter()
                .map(|p| p.render(&g))
                .collect();
            if let Some(prev) = &shallower {
                prop_assert!(prev.is_subset(&paths), "depth {} lost paths", max_depth);
            }
            shallower = Some(paths);
        }
    }

    #[test]
    fn dictionary_round_trips_through_json(seed in any::<u64>(), per_side in 1usize..=4) {
        let dict = common::random_dict(seed, per_side, 0.3);
        let text = serialize_dictionary(&dict);
        let back = parse_dictionary(&text).unwrap();
        prop_assert_eq!(serialize_dictionary(&back), text);
        prop_assert_eq!(back.entries().len(), dict.entries().len());
    }
}
