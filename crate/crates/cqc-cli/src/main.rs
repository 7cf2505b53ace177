//! Batch driver for the sense-graph toolkit. Every command is a pure
//! function of (input files, flags, seed): reruns are byte-identical.
//! Exit codes: 0 success, 1 input error, 2 configuration error.

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use cqc::{
    apply_backoff, build_noisy_graph, detect_issues, extract_synonyms_sense, extract_synonyms_word,
    issues_tsv, mapping_json, mapping_rows, mapping_tsv, metrics_json, parse_dictionary,
    parse_gold_tsv, parse_toefl_tsv, precision_at_k, rank_issues, run_algorithm, sense_ranking_tsv,
    solve_toefl, toefl_report, tune, tune_table_tsv, word_ranking_tsv, AlgoParams, AlgorithmId,
    Dictionary, EvalError, IssueType, LanguageTag, NoisyGraph, Pos, SearchConfig, SenseMapping,
    SenseRef, TuningGrid, WeightKind, CONFIDENCE_CEILING_NOTE, SYNONYM_DEPTH_DEFAULT,
};
use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "cqc",
    version,
    about = "Bilingual sense-graph disambiguation toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Map every translation of every sense to a target sense.
    Disambiguate(RunArgs),
    /// Score a disambiguation run against a gold standard.
    Evaluate(GoldArgs),
    /// Grid-search one algorithm's parameters against a gold standard.
    Tune(GoldArgs),
    /// Detect dictionary defects and rank them by confidence.
    Enhance(EnhanceArgs),
    /// Rank synonym candidates for one sense or one word.
    Synonyms(SynonymArgs),
    /// Answer multiple-choice synonym questions.
    Toefl(ToeflArgs),
    /// Dump the sense graph edge list.
    GraphDump(RunArgs),
}

#[derive(Args)]
struct Shared {
    /// Dictionary JSON file.
    #[arg(long)]
    dict: PathBuf,
    /// cqc, cycles, dfs, random_walks, markov, ppr, lesk, fs, random,
    /// degree or undirected_cycles.
    #[arg(long, default_value = "cqc")]
    algorithm: AlgorithmId,
    /// Maximum path length in edges (synonyms and toefl default to 6).
    #[arg(long)]
    max_depth: Option<usize>,
    /// Path weight: const, linear or exp.
    #[arg(long, default_value = "exp", value_parser = parse_weight)]
    weight: WeightKind,
    /// Longest permitted reversed run in a quasi-cycle.
    #[arg(long, default_value_t = 2)]
    max_reversed: usize,
    /// Keep quasi-cycles only when the reversed run ends the path.
    #[arg(long, default_value_t = true, action = ArgAction::Set, value_name = "BOOL")]
    terminal_only: bool,
    /// Add undirected surface-text edges to the graph.
    #[arg(long, default_value_t = true, action = ArgAction::Set, value_name = "BOOL")]
    include_meta: bool,
    /// Fill abstentions with the first listed sense.
    #[arg(long, value_enum, default_value_t = Backoff::None)]
    backoff: Backoff,
    /// Root seed for every randomized consumer.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Samples per start node for random walks.
    #[arg(long, default_value_t = 400)]
    walks: usize,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct GoldArgs {
    #[command(flatten)]
    shared: Shared,
    /// Gold standard TSV: lang, lemma, pos, sense, word, gold sense|NONE.
    #[arg(long)]
    gold: PathBuf,
}

#[derive(Args)]
struct EnhanceArgs {
    #[command(flatten)]
    shared: Shared,
    /// Keep only issues of this type.
    #[arg(long = "type")]
    type_filter: Option<String>,
}

#[derive(Args)]
struct SynonymArgs {
    #[command(flatten)]
    shared: Shared,
    /// Query lemma text.
    #[arg(long)]
    lemma: String,
    /// Part of speech code: n, v, a or r.
    #[arg(long)]
    pos: String,
    /// Language tag of the query lemma.
    #[arg(long)]
    lang: String,
    #[arg(long, value_enum, default_value_t = Level::Word)]
    level: Level,
    /// Sense label, required at sense level.
    #[arg(long)]
    sense: Option<String>,
    /// Cutoffs for precision@K against --gold-synonyms.
    #[arg(long, value_delimiter = ',')]
    k: Vec<usize>,
    /// Accepted synonym tokens, one per line.
    #[arg(long)]
    gold_synonyms: Option<PathBuf>,
}

#[derive(Args)]
struct ToeflArgs {
    #[command(flatten)]
    shared: Shared,
    /// Question TSV: target, four choices, answer index.
    #[arg(long)]
    questions: PathBuf,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Backoff {
    None,
    Fs,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Level {
    Sense,
    Word,
}

fn parse_weight(s: &str) -> Result<WeightKind, String> {
    WeightKind::parse(s).ok_or_else(|| format!("unknown weight {s}, expected const|linear|exp"))
}

enum CliError {
    Input(String),
    Config(String),
}

impl CliError {
    fn report(&self) -> ExitCode {
        let (msg, code) = match self {
            CliError::Input(m) => (m, 1),
            CliError::Config(m) => (m, 2),
        };
        eprintln!("error: {msg}");
        ExitCode::from(code)
    }
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn eval_err(e: EvalError) -> CliError {
    match e {
        EvalError::EmptyGold => CliError::Config(e.to_string()),
        EvalError::Path(p) => CliError::Config(p.to_string()),
        other => CliError::Input(other.to_string()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.report(),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Disambiguate(a) => cmd_disambiguate(a.shared),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Tune(a) => cmd_tune(a),
        Command::Enhance(a) => cmd_enhance(a),
        Command::Synonyms(a) => cmd_synonyms(a),
        Command::Toefl(a) => cmd_toefl(a),
        Command::GraphDump(a) => cmd_graph_dump(a.shared),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_dict(path: &Path) -> Result<Dictionary, CliError> {
    parse_dictionary(&read_file(path)?).map_err(input_err)
}

fn search_config(s: &Shared, default_depth: usize) -> Result<SearchConfig, CliError> {
    let cfg = SearchConfig {
        max_depth: s.max_depth.unwrap_or(default_depth),
        allow_quasi: true,
        max_reversed: s.max_reversed,
        terminal_only: s.terminal_only,
        include_meta: s.include_meta,
    };
    cfg.validate()
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(cfg)
}

fn params(s: &Shared, cfg: SearchConfig) -> AlgoParams {
    AlgoParams {
        algorithm: s.algorithm,
        search: cfg,
        weight: s.weight,
        walk_count: s.walks,
        seed: s.seed,
    }
}

/// Runs the selected algorithm over every sense node, in node order.
fn run_all(
    dict: &Dictionary,
    g: &NoisyGraph,
    s: &Shared,
    cfg: SearchConfig,
) -> Result<Vec<SenseMapping>, CliError> {
    let p = params(s, cfg);
    let mut mappings = (0..g.node_count())
        .map(|node| run_algorithm(dict, g, node, &p))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Config(e.to_string()))?;
    if s.backoff == Backoff::Fs {
        apply_backoff(&mut mappings);
    }
    Ok(mappings)
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn print_json(value: serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(&value).expect("value serializes")
    );
}

fn cmd_disambiguate(s: Shared) -> Result<(), CliError> {
    let dict = load_dict(&s.dict)?;
    let g = build_noisy_graph(&dict, s.include_meta);
    let cfg = search_config(&s, 4)?;
    let mappings = run_all(&dict, &g, &s, cfg)?;
    let rows = mapping_rows(&dict, &mappings);
    let content = match s.format {
        Format::Tsv => mapping_tsv(&rows),
        Format::Json => mapping_json(&rows),
    };
    emit(&s.out, &content)?;
    let answered: usize = mappings
        .iter()
        .flat_map(|m| &m.words)
        .filter(|d| d.chosen.is_some())
        .count();
    let total: usize = mappings.iter().map(|m| m.words.len()).sum();
    print_json(serde_json::json!({
        "answered": answered,
        "abstained": total - answered,
        "entries": dict.entries().len(),
        "senses": g.node_count(),
    }));
    Ok(())
}

fn cmd_evaluate(a: GoldArgs) -> Result<(), CliError> {
    let s = a.shared;
    let dict = load_dict(&s.dict)?;
    let gold = parse_gold_tsv(&read_file(&a.gold)?).map_err(eval_err)?;
    let g = build_noisy_graph(&dict, s.include_meta);
    let cfg = search_config(&s, 4)?;
    let mappings = run_all(&dict, &g, &s, cfg)?;
    let metrics = cqc::evaluate(&dict, &mappings, &gold).map_err(eval_err)?;
    emit(&s.out, &metrics_json(&metrics))
}

fn cmd_tune(a: GoldArgs) -> Result<(), CliError> {
    let s = a.shared;
    let dict = load_dict(&s.dict)?;
    let gold = parse_gold_tsv(&read_file(&a.gold)?).map_err(eval_err)?;
    let g = build_noisy_graph(&dict, s.include_meta);
    let grid = TuningGrid::default();
    let (best, table) = tune(&dict, &g, s.algorithm, &grid, &gold, s.seed).map_err(eval_err)?;
    emit(&s.out, &tune_table_tsv(&table))?;
    print_json(serde_json::json!({
        "algorithm": best.params.algorithm.code(),
        "max_depth": best.params.search.max_depth,
        "weight": best.params.weight.code(),
        "max_reversed": best.params.search.max_reversed,
        "terminal_only": best.params.search.terminal_only,
        "walks": best.params.walk_count,
        "precision": best.metrics.precision,
        "recall": best.metrics.recall,
        "f1": best.metrics.f1,
        "accuracy": best.metrics.accuracy,
    }));
    Ok(())
}

fn cmd_enhance(a: EnhanceArgs) -> Result<(), CliError> {
    let s = a.shared;
    let filter = a
        .type_filter
        .as_deref()
        .map(|t| {
            IssueType::parse(t).ok_or_else(|| CliError::Config(format!("unknown issue type {t}")))
        })
        .transpose()?;
    let dict = load_dict(&s.dict)?;
    let g = build_noisy_graph(&dict, s.include_meta);
    let cfg = search_config(&s, 4)?;
    let mappings = run_all(&dict, &g, &s, cfg)?;
    let mut issues = rank_issues(detect_issues(&dict, &g, &mappings));
    if let Some(t) = filter {
        issues.retain(|i| i.issue_type == t);
    }
    eprintln!("note: {CONFIDENCE_CEILING_NOTE}");
    emit(&s.out, &issues_tsv(&issues))
}

fn cmd_synonyms(a: SynonymArgs) -> Result<(), CliError> {
    let s = a.shared;
    let dict = load_dict(&s.dict)?;
    let g = build_noisy_graph(&dict, s.include_meta);
    let cfg = search_config(&s, SYNONYM_DEPTH_DEFAULT)?;
    let pos = Pos::parse(&a.pos)
        .ok_or_else(|| CliError::Config(format!("unknown part of speech {}", a.pos)))?;
    let lang = LanguageTag::new(&a.lang);

    let (content, tokens): (String, Vec<String>) = match a.level {
        Level::Word => {
            let ranking =
                extract_synonyms_word(&g, &dict, &a.lemma, pos, &lang, &cfg).map_err(input_err)?;
            (
                word_ranking_tsv(&ranking),
                ranking.iter().map(|c| c.token()).collect(),
            )
        }
        Level::Sense => {
            let label = a.sense.as_deref().ok_or_else(|| {
                CliError::Config("--sense is required at sense level".to_string())
            })?;
            let entry = dict
                .lookup(&a.lemma, pos, &lang)
                .ok_or_else(|| CliError::Input(format!("unknown lemma {}", a.lemma)))?;
            let sense = dict
                .entry(entry)
                .senses
                .iter()
                .position(|x| x.id.label == label)
                .ok_or_else(|| CliError::Input(format!("{} has no sense {label}", a.lemma)))?;
            let node = g
                .node_id(SenseRef { entry, sense })
                .ok_or_else(|| CliError::Input(format!("sense {label} carries no node")))?;
            let ranking = extract_synonyms_sense(&g, node, &cfg).map_err(input_err)?;
            (
                sense_ranking_tsv(&ranking),
                ranking.iter().map(|c| c.token()).collect(),
            )
        }
    };
    emit(&s.out, &content)?;

    if !a.k.is_empty() {
        let path = a
            .gold_synonyms
            .as_ref()
            .ok_or_else(|| CliError::Config("--k needs --gold-synonyms".to_string()))?;
        let accepted: HashSet<String> = read_file(path)?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::to_string)
            .collect();
        let report: Vec<serde_json::Value> = precision_at_k(&[tokens], &[accepted], &a.k)
            .iter()
            .map(|p| {
                serde_json::json!({
                    "k": p.k,
                    "correct": p.correct,
                    "given": p.given,
                    "precision": p.precision,
                })
            })
            .collect();
        print_json(serde_json::Value::Array(report));
    }
    Ok(())
}

fn cmd_toefl(a: ToeflArgs) -> Result<(), CliError> {
    let s = a.shared;
    let dict = load_dict(&s.dict)?;
    let g = build_noisy_graph(&dict, s.include_meta);
    let cfg = search_config(&s, SYNONYM_DEPTH_DEFAULT)?;
    let questions = parse_toefl_tsv(&read_file(&a.questions)?).map_err(input_err)?;
    let outcomes = questions
        .iter()
        .map(|q| solve_toefl(&g, &dict, q, &cfg))
        .collect::<Result<Vec<_>, _>>()
        .map_err(input_err)?;
    let mut tsv = String::new();
    for (q, o) in questions.iter().zip(&outcomes) {
        let (answer, score) = match o.chosen {
            Some(i) => (q.choices[i].as_str(), o.scores[i]),
            None => ("ABSTAIN", 0.0),
        };
        tsv.push_str(&format!("{}\t{}\t{:.2}\n", q.target, answer, score));
    }
    emit(&s.out, &tsv)?;
    let report = toefl_report(&questions, &outcomes);
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    Ok(())
}

fn cmd_graph_dump(s: Shared) -> Result<(), CliError> {
    let dict = load_dict(&s.dict)?;
    let g = build_noisy_graph(&dict, s.include_meta);
    emit(&s.out, &g.dump_tsv())
}
