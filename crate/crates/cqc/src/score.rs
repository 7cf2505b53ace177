//! Path-histogram scoring and disambiguation. For one translation word with
//! candidate senses s', each path length l with pooled count n contributes
//! weight(l) * N(s', l) / n to candidate s'. The chosen sense is the
//! positive-score maximum; scoreless words are abstained.

use crate::dict::{Dictionary, SenseRef};
use crate::graph::{prune, NodeId, NoisyGraph, PrunedGraph, WordCandidates};
use crate::path::{find_cqc_paths, PathError, PathSet, SearchConfig};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Per-length path weight.
pub trait PathWeight {
    fn weight(&self, len: usize) -> f64;
}

/// The three stock weight functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum WeightKind {
    Exponential,
    Linear,
    Constant,
}

impl WeightKind {
    pub fn parse(s: &str) -> Option<WeightKind> {
        match s {
            "exp" => Some(WeightKind::Exponential),
            "linear" => Some(WeightKind::Linear),
            "const" => Some(WeightKind::Constant),
            _ => None,
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            WeightKind::Exponential => "exp",
            WeightKind::Linear => "linear",
            WeightKind::Constant => "const",
        }
    }
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl PathWeight for WeightKind {
    fn weight(&self, len: usize) -> f64 {
        match self {
            WeightKind::Constant => 1.0,
            WeightKind::Linear => 1.0 / len as f64,
            WeightKind::Exponential => (-(len as f64)).exp(),
        }
    }
}

/// Path-length counts per candidate sense plus the pooled counts over all
/// candidates of the same word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathHistogram {
    pub per_sense: Vec<BTreeMap<usize, usize>>,
    pub pooled: BTreeMap<usize, usize>,
}

impl PathHistogram {
    pub fn from_path_sets(sets: &[PathSet]) -> PathHistogram {
        Self::from_counts(sets.iter().map(|s| s.histogram()).collect())
    }

    pub fn from_counts(per_sense: Vec<BTreeMap<usize, usize>>) -> PathHistogram {
        let mut pooled = BTreeMap::new();
        for h in &per_sense {
            for (&l, &c) in h {
                *pooled.entry(l).or_insert(0) += c;
            }
        }
        PathHistogram { per_sense, pooled }
    }
}

/// Score every candidate. Summed over candidates the scores add up to
/// sum of weight(l) over the lengths with a pooled count, independent of
/// how paths distribute.
pub fn score_senses<W: PathWeight>(h: &PathHistogram, omega: &W) -> Vec<f64> {
    let mut scores = vec![0.0; h.per_sense.len()];
    for (&l, &n) in &h.pooled {
        if n == 0 {
            continue;
        }
        let w = omega.weight(l);
        for (i, counts) in h.per_sense.iter().enumerate() {
            if let Some(&c) = counts.get(&l) {
                scores[i] += w * c as f64 / n as f64;
            }
        }
    }
    scores
}

#[derive(Debug, Error)]
pub enum ScoreError {
    #[error("word {0} is not a translation of this sense")]
    UnknownWord(String),
}

/// One candidate sense of a translation word.
#[derive(Debug, Clone, Serialize)]
pub struct Candidate {
    pub node: NodeId,
    #[serde(skip)]
    pub sense: SenseRef,
    pub label: String,
    pub score: f64,
}

/// Decision for one translation word. `chosen` indexes `candidates`; None
/// means abstention (also used for unresolvable words, which keep an empty
/// candidate list).
#[derive(Debug, Clone)]
pub struct WordDecision {
    pub word: String,
    pub candidates: Vec<Candidate>,
    pub chosen: Option<usize>,
}

impl WordDecision {
    pub fn chosen_candidate(&self) -> Option<&Candidate> {
        self.chosen.map(|i| &self.candidates[i])
    }
}

/// Disambiguation result for one source sense.
#[derive(Debug, Clone)]
pub struct SenseMapping {
    pub source: SenseRef,
    pub source_node: NodeId,
    pub words: Vec<WordDecision>,
}

impl SenseMapping {
    /// Confidence in the mapping of one translation word: the chosen
    /// candidate's score, 0.0 on abstention.
    pub fn confidence(&self, word: &str) -> Result<f64, ScoreError> {
        let d = self
            .words
            .iter()
            .find(|d| d.word == word)
            .ok_or_else(|| ScoreError::UnknownWord(word.to_string()))?;
        Ok(d.chosen_candidate().map(|c| c.score).unwrap_or(0.0))
    }
}

fn decide(candidates: &mut [Candidate]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, c) in candidates.iter().enumerate() {
        if c.score > 0.0 && best.is_none_or(|b| c.score > candidates[b].score) {
            best = Some(i);
        }
    }
    best
}

/// Shared driver for path-collecting algorithms: the collector produces the
/// path set for one candidate sense, scoring and argmax are common. Ties
/// keep the lowest sense order index; words whose candidates all score zero
/// are abstained.
pub fn map_with_path_collector<W, F>(
    g: &NoisyGraph,
    source_node: NodeId,
    omega: &W,
    mut collect: F,
) -> Result<SenseMapping, PathError>
where
    W: PathWeight,
    F: FnMut(NodeId, &WordCandidates) -> Result<PathSet, PathError>,
{
    let mut words = Vec::new();
    for wc in g.word_candidates(source_node) {
        let mut sets = Vec::with_capacity(wc.nodes.len());
        for &cand in &wc.nodes {
            sets.push(collect(cand, wc)?);
        }
        let hist = PathHistogram::from_path_sets(&sets);
        let scores = score_senses(&hist, omega);
        let mut candidates: Vec<Candidate> = wc
            .nodes
            .iter()
            .zip(scores)
            .map(|(&node, score)| Candidate {
                node,
                sense: g.node(node).sense,
                label: g.node(node).label.clone(),
                score,
            })
            .collect();
        let chosen = decide(&mut candidates);
        words.push(WordDecision {
            word: wc.word.clone(),
            candidates,
            chosen,
        });
    }
    Ok(SenseMapping {
        source: g.node(source_node).sense,
        source_node,
        words,
    })
}

/// Shared driver for algorithms that score candidates directly. Abstains
/// when every candidate scores exactly zero.
pub fn map_with_scores<F>(
    g: &NoisyGraph,
    source_node: NodeId,
    mut score: F,
) -> Result<SenseMapping, PathError>
where
    F: FnMut(NodeId, &WordCandidates) -> Result<f64, PathError>,
{
    let mut words = Vec::new();
    for wc in g.word_candidates(source_node) {
        let mut candidates = Vec::with_capacity(wc.nodes.len());
        for &cand in &wc.nodes {
            candidates.push(Candidate {
                node: cand,
                sense: g.node(cand).sense,
                label: g.node(cand).label.clone(),
                score: score(cand, wc)?,
            });
        }
        let chosen = decide(&mut candidates);
        words.push(WordDecision {
            word: wc.word.clone(),
            candidates,
            chosen,
        });
    }
    Ok(SenseMapping {
        source: g.node(source_node).sense,
        source_node,
        words,
    })
}

/// Shared driver for baselines that pick a candidate index outright.
/// Candidates carry no scores.
pub fn map_with_choice<F>(g: &NoisyGraph, source_node: NodeId, mut choose: F) -> SenseMapping
where
    F: FnMut(&WordCandidates) -> Option<usize>,
{
    let mut words = Vec::new();
    for wc in g.word_candidates(source_node) {
        let candidates: Vec<Candidate> = wc
            .nodes
            .iter()
            .map(|&node| Candidate {
                node,
                sense: g.node(node).sense,
                label: g.node(node).label.clone(),
                score: 0.0,
            })
            .collect();
        let chosen = if candidates.is_empty() {
            None
        } else {
            choose(wc).map(|i| i.min(candidates.len() - 1))
        };
        words.push(WordDecision {
            word: wc.word.clone(),
            candidates,
            chosen,
        });
    }
    SenseMapping {
        source: g.node(source_node).sense,
        source_node,
        words,
    }
}

/// Disambiguate every translation word of one source sense with the cycle
/// and quasi-cycle search.
pub fn disambiguate_entry<W: PathWeight>(
    g: &NoisyGraph,
    source_node: NodeId,
    cfg: &SearchConfig,
    omega: &W,
) -> Result<SenseMapping, PathError> {
    cfg.validate()?;
    if source_node >= g.node_count() {
        return Err(PathError::UnknownNode(source_node));
    }
    map_with_path_collector(g, source_node, omega, |cand, _| {
        find_cqc_paths(g, cand, source_node, cfg)
    })
}

/// Full-dictionary disambiguation: one mapping per sense, the pruned graph,
/// and abstention statistics over (sense, word) pairs.
#[derive(Debug)]
pub struct DictionaryRun {
    pub mappings: Vec<SenseMapping>,
    pub pruned: PrunedGraph,
    pub answered: usize,
    pub abstained: usize,
}

pub fn disambiguate_dictionary<W: PathWeight>(
    g: &NoisyGraph,
    cfg: &SearchConfig,
    omega: &W,
) -> Result<DictionaryRun, PathError> {
    cfg.validate()?;
    let mut mappings = Vec::with_capacity(g.node_count());
    for node in 0..g.node_count() {
        mappings.push(disambiguate_entry(g, node, cfg, omega)?);
    }
    let pruned = prune(g, &mappings).expect("fresh mappings are consistent");
    let (mut answered, mut abstained) = (0usize, 0usize);
    for m in &mappings {
        for d in &m.words {
            if d.chosen.is_some() {
                answered += 1;
            } else {
                abstained += 1;
            }
        }
    }
    Ok(DictionaryRun {
        mappings,
        pruned,
        answered,
        abstained,
    })
}

/// Flat mapping row for rendering.
#[derive(Debug, Clone, Serialize)]
pub struct MappingRow {
    pub src_lemma: String,
    pub src_pos: String,
    pub src_sense: String,
    pub tgt_word: String,
    pub chosen_sense: Option<String>,
    pub score: f64,
}

pub fn mapping_rows(dict: &Dictionary, mappings: &[SenseMapping]) -> Vec<MappingRow> {
    let mut rows = Vec::new();
    for m in mappings {
        let entry = dict.entry(m.source.entry);
        let sense = &entry.senses[m.source.sense];
        for d in &m.words {
            let chosen = d.chosen_candidate();
            rows.push(MappingRow {
                src_lemma: entry.lemma.text.clone(),
                src_pos: entry.lemma.pos.code().to_string(),
                src_sense: sense.id.label.clone(),
                tgt_word: d.word.clone(),
                chosen_sense: chosen.map(|c| c.label.clone()),
                score: chosen.map(|c| c.score).unwrap_or(0.0),
            });
        }
    }
    rows
}

/// Headerless TSV: src_lemma, src_pos, src_sense, tgt_word,
/// chosen_sense|ABSTAIN, score to six decimals.
pub fn mapping_tsv(rows: &[MappingRow]) -> String {
    let mut s = String::new();
    for r in rows {
        s.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{:.6}\n",
            r.src_lemma,
            r.src_pos,
            r.src_sense,
            r.tgt_word,
            r.chosen_sense.as_deref().unwrap_or("ABSTAIN"),
            r.score
        ));
    }
    s
}

pub fn mapping_json(rows: &[MappingRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}
