//! Bilingual machine-readable dictionaries as directed sense graphs:
//! translation disambiguation by cycle and quasi-cycle search, a set of
//! rival algorithms and baselines, dictionary defect detection, and ranked
//! synonym extraction.

#![forbid(unsafe_code)]

pub mod dict;
pub mod enhance;
pub mod eval;
pub mod graph;
pub mod path;
pub mod rivals;
pub mod score;
pub mod synonyms;

pub use dict::{
    parse_dictionary, serialize_dictionary, DictEntry, DictError, Dictionary, LanguageTag, Lemma,
    Pos, Reference, SenseEntry, SenseId, SenseRef,
};
pub use enhance::{
    count_by_type, detect_issues, issues_tsv, last_token, normalize_spelling, rank_issues,
    verify_issue, Issue, IssueType, Participant, CONFIDENCE_CEILING, CONFIDENCE_CEILING_NOTE,
};
pub use eval::{
    apply_backoff, cmp_tune_points, evaluate, metrics_json, parse_gold_tsv, tune, tune_table_tsv,
    Counts, EvalError, GoldItem, Metrics, TunePoint, TuningGrid, NO_SENSE,
};
pub use graph::{
    build_noisy_graph, prune, Edge, EdgeKind, GraphError, NodeId, NoisyGraph, PrunedGraph,
    SenseNode, WordCandidates,
};
pub use path::{
    enumerate_paths_bruteforce, find_cqc_paths, find_open_paths, find_undirected_cycles,
    is_legal_path, is_legal_path_in, Direction, LegalityRule, Path, PathError, PathSet,
    SearchConfig, BRUTEFORCE_NODE_LIMIT, MAX_DEPTH_BOUND,
};
pub use rivals::{
    baseline_choice, collect_walk_paths, lesk_overlap, markov_arrival_score, personalized_pagerank,
    run_algorithm, run_baseline, run_cycles_only, run_lesk, run_markov, run_open_dfs, run_ppr,
    run_random_walks, run_undirected_cycles, transition_matrix, AlgoParams, AlgorithmId,
    BaselineKind, RandomWalkConfig, RivalError, TransitionMatrix, PPR_DAMPING, PPR_ITERATIONS,
};
pub use score::{
    disambiguate_dictionary, disambiguate_entry, mapping_json, mapping_rows, mapping_tsv,
    score_senses, Candidate, DictionaryRun, MappingRow, PathHistogram, PathWeight, ScoreError,
    SenseMapping, WeightKind, WordDecision,
};
pub use synonyms::{
    extract_synonyms_sense, extract_synonyms_word, parse_toefl_tsv, precision_at_k,
    sense_ranking_tsv, solve_toefl, toefl_report, word_ranking_tsv, PrecisionAtK, SenseSynonym,
    SynonymError, ToeflOutcome, ToeflQuestion, ToeflReport, WordSynonym, SYNONYM_DEPTH_DEFAULT,
};
