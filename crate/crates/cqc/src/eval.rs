//! Gold-standard evaluation, the first-sense backoff, and exhaustive
//! parameter tuning. Precision and recall are computed over gold items
//! carrying a real sense; accuracy is over all items, counting a NO_SENSE
//! item correct iff the system abstained.

use crate::dict::{Dictionary, LanguageTag, Pos};
use crate::graph::NoisyGraph;
use crate::path::{PathError, SearchConfig};
use crate::rivals::{run_algorithm, AlgoParams, AlgorithmId};
use crate::score::{SenseMapping, WeightKind};
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::HashMap;
use thiserror::Error;

/// Gold-column marker for items where no listed sense is appropriate.
pub const NO_SENSE: &str = "NONE";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldItem {
    pub lang: LanguageTag,
    pub lemma: String,
    pub pos: Pos,
    pub sense_label: String,
    pub word: String,
    /// None encodes NO_SENSE.
    pub gold: Option<String>,
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("malformed gold line {line}: {detail}")]
    MalformedGold { line: usize, detail: String },
    #[error("gold file has no items")]
    EmptyGold,
    #[error("gold item not covered by the run: {item}")]
    GoldMismatch { item: String },
    #[error(transparent)]
    Path(#[from] PathError),
}

/// Parse headerless gold TSV:
/// src_lang, lemma, pos, sense_id, target_word, gold_sense_id|NONE.
pub fn parse_gold_tsv(text: &str) -> Result<Vec<GoldItem>, EvalError> {
    let mut items = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 6 {
            return Err(EvalError::MalformedGold {
                line: i + 1,
                detail: format!("expected 6 tab-separated fields, got {}", fields.len()),
            });
        }
        let pos = Pos::parse(fields[2]).ok_or_else(|| EvalError::MalformedGold {
            line: i + 1,
            detail: format!("unknown part of speech {}", fields[2]),
        })?;
        if fields.iter().any(|f| f.is_empty()) {
            return Err(EvalError::MalformedGold {
                line: i + 1,
                detail: "empty field".into(),
            });
        }
        items.push(GoldItem {
            lang: LanguageTag::new(fields[0]),
            lemma: fields[1].to_string(),
            pos,
            sense_label: fields[3].to_string(),
            word: fields[4].to_string(),
            gold: if fields[5] == NO_SENSE {
                None
            } else {
                Some(fields[5].to_string())
            },
        });
    }
    Ok(items)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub answered: usize,
    pub correct: usize,
    pub gold_total: usize,
    pub all_total: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub accuracy: f64,
    pub counts: Counts,
}

pub fn metrics_json(m: &Metrics) -> String {
    let mut s = serde_json::to_string_pretty(m).expect("metrics serialize");
    s.push('\n');
    s
}

/// Score mappings against gold items. Every item must address a
/// (source sense, word) present in the mappings.
pub fn evaluate(
    dict: &Dictionary,
    mappings: &[SenseMapping],
    gold: &[GoldItem],
) -> Result<Metrics, EvalError> {
    if gold.is_empty() {
        return Err(EvalError::EmptyGold);
    }
    let by_sense: HashMap<(usize, usize), &SenseMapping> = mappings
        .iter()
        .map(|m| ((m.source.entry, m.source.sense), m))
        .collect();

    let mut answered = 0usize;
    let mut correct = 0usize;
    let mut gold_total = 0usize;
    let mut correct_all = 0usize;

    for item in gold {
        let locus = format!(
            "{} {} ({}) sense {} word {}",
            item.lang, item.lemma, item.pos, item.sense_label, item.word
        );
        let mismatch = || EvalError::GoldMismatch {
            item: locus.clone(),
        };
        let entry_idx = dict
            .lookup(&item.lemma, item.pos, &item.lang)
            .ok_or_else(mismatch)?;
        let sense_idx = dict
            .entry(entry_idx)
            .senses
            .iter()
            .position(|s| s.id.label == item.sense_label)
            .ok_or_else(mismatch)?;
        let mapping = by_sense.get(&(entry_idx, sense_idx)).ok_or_else(mismatch)?;
        let decision = mapping
            .words
            .iter()
            .find(|d| d.word == item.word)
            .ok_or_else(mismatch)?;
        let chosen = decision.chosen_candidate().map(|c| c.label.as_str());

        match (&item.gold, chosen) {
            (Some(g), Some(c)) => {
                gold_total += 1;
                answered += 1;
                if g == c {
                    correct += 1;
                    correct_all += 1;
                }
            }
            (Some(_), None) => gold_total += 1,
            (None, None) => correct_all += 1,
            (None, Some(_)) => {}
        }
    }

    let ratio = |num: usize, den: usize| {
        if den == 0 {
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    let precision = ratio(correct, answered);
    let recall = ratio(correct, gold_total);
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    let accuracy = ratio(correct_all, gold.len());
    Ok(Metrics {
        precision,
        recall,
        f1,
        accuracy,
        counts: Counts {
            answered,
            correct,
            gold_total,
            all_total: gold.len(),
        },
    })
}

/// First-sense backoff: every abstention on a resolvable word is filled
/// with the first-listed candidate sense. Unresolvable words stay
/// unanswered.
pub fn apply_backoff(mappings: &mut [SenseMapping]) {
    for m in mappings {
        for d in &mut m.words {
            if d.chosen.is_none() && !d.candidates.is_empty() {
                d.chosen = Some(0);
            }
        }
    }
}

/// Exhaustive grid axes. Only the axes relevant to the tuned algorithm are
/// expanded.
#[derive(Debug, Clone)]
pub struct TuningGrid {
    pub depths: Vec<usize>,
    pub weights: Vec<WeightKind>,
    pub max_reversed: Vec<usize>,
    pub terminal_only: Vec<bool>,
    pub walk_counts: Vec<usize>,
}

impl Default for TuningGrid {
    fn default() -> Self {
        TuningGrid {
            depths: (1..=6).collect(),
            weights: vec![
                WeightKind::Exponential,
                WeightKind::Linear,
                WeightKind::Constant,
            ],
            max_reversed: vec![0, 1, 2, 3],
            terminal_only: vec![true, false],
            walk_counts: vec![50, 100, 200, 400, 800, 1600, 2000],
        }
    }
}

impl TuningGrid {
    /// Expand to concrete parameter points for one algorithm.
    pub fn points(&self, algorithm: AlgorithmId, seed: u64) -> Vec<AlgoParams> {
        let base = AlgoParams {
            algorithm,
            seed,
            ..AlgoParams::default()
        };
        let with = |max_depth: usize, weight: WeightKind| AlgoParams {
            search: SearchConfig {
                max_depth,
                ..base.search
            },
            weight,
            ..base
        };
        let mut out = Vec::new();
        match algorithm {
            AlgorithmId::Cqc => {
                for &d in &self.depths {
                    for &w in &self.weights {
                        for &mr in &self.max_reversed {
                            for &t in &self.terminal_only {
                                let mut p = with(d, w);
                                p.search.max_reversed = mr;
                                p.search.terminal_only = t;
                                out.push(p);
                            }
                        }
                    }
                }
            }
            AlgorithmId::CyclesOnly | AlgorithmId::OpenDfs | AlgorithmId::UndirectedCycles => {
                for &d in &self.depths {
                    for &w in &self.weights {
                        out.push(with(d, w));
                    }
                }
            }
            AlgorithmId::RandomWalks => {
                for &d in &self.depths {
                    for &w in &self.weights {
                        for &wc in &self.walk_counts {
                            let mut p = with(d, w);
                            p.walk_count = wc;
                            out.push(p);
                        }
                    }
                }
            }
            AlgorithmId::Markov => {
                for &d in &self.depths {
                    out.push(with(d, base.weight));
                }
            }
            AlgorithmId::Ppr
            | AlgorithmId::Lesk
            | AlgorithmId::FirstSense
            | AlgorithmId::Random
            | AlgorithmId::Degree => out.push(base),
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct TunePoint {
    pub params: AlgoParams,
    pub metrics: Metrics,
}

fn weight_rank(w: WeightKind) -> u8 {
    match w {
        WeightKind::Exponential => 0,
        WeightKind::Linear => 1,
        WeightKind::Constant => 2,
    }
}

/// Total tie-break order: F1 descending, then smaller depth, exponential
/// before linear before constant weight, smaller max_reversed, terminal-only
/// first, smaller walk count.
pub fn cmp_tune_points(a: &TunePoint, b: &TunePoint) -> Ordering {
    b.metrics
        .f1
        .total_cmp(&a.metrics.f1)
        .then(a.params.search.max_depth.cmp(&b.params.search.max_depth))
        .then(weight_rank(a.params.weight).cmp(&weight_rank(b.params.weight)))
        .then(
            a.params
                .search
                .max_reversed
                .cmp(&b.params.search.max_reversed),
        )
        .then(
            b.params
                .search
                .terminal_only
                .cmp(&a.params.search.terminal_only),
        )
        .then(a.params.walk_count.cmp(&b.params.walk_count))
}

/// Run the exhaustive grid for one algorithm over the gold items' source
/// senses. Returns the winning point and the full table in grid order.
pub fn tune(
    dict: &Dictionary,
    g: &NoisyGraph,
    algorithm: AlgorithmId,
    grid: &TuningGrid,
    gold: &[GoldItem],
    seed: u64,
) -> Result<(TunePoint, Vec<TunePoint>), EvalError> {
    if gold.is_empty() {
        return Err(EvalError::EmptyGold);
    }
    // distinct gold source senses in first-appearance order
    let mut nodes = Vec::new();
    for item in gold {
        let locus = format!("{} {} ({})", item.lang, item.lemma, item.pos);
        let entry_idx = dict
            .lookup(&item.lemma, item.pos, &item.lang)
            .ok_or_else(|| EvalError::GoldMismatch {
                item: locus.clone(),
            })?;
        let sense_idx = dict
            .entry(entry_idx)
            .senses
            .iter()
            .position(|s| s.id.label == item.sense_label)
            .ok_or(EvalError::GoldMismatch { item: locus })?;
        let node = g
            .node_id(crate::dict::SenseRef {
                entry: entry_idx,
                sense: sense_idx,
            })
            .expect("validated sense has a node");
        if !nodes.contains(&node) {
            nodes.push(node);
        }
    }

    let mut table = Vec::new();
    for params in grid.points(algorithm, seed) {
        let mut mappings = Vec::with_capacity(nodes.len());
        for &n in &nodes {
            mappings.push(run_algorithm(dict, g, n, &params)?);
        }
        let metrics = evaluate(dict, &mappings, gold)?;
        table.push(TunePoint { params, metrics });
    }
    let best = table
        .iter()
        .min_by(|a, b| cmp_tune_points(a, b))
        .expect("grid is non-empty")
        .clone();
    Ok((best, table))
}

/// Headerless TSV of the full tuning table.
pub fn tune_table_tsv(table: &[TunePoint]) -> String {
    let mut s = String::new();
    for p in table {
        s.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\n",
            p.params.algorithm,
            p.params.search.max_depth,
            p.params.weight,
            p.params.search.max_reversed,
            if p.params.search.terminal_only {
                "on"
            } else {
                "off"
            },
            p.params.walk_count,
            p.metrics.precision,
            p.metrics.recall,
            p.metrics.f1,
            p.metrics.accuracy
        ));
    }
    s
}
