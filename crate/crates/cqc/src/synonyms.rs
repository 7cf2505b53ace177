//! Ranked synonym extraction from the sense graph and TOEFL-style synonym
//! question solving. A candidate's score sums 1/e^length over every closed
//! path it lies on; the weight is fixed to the exponential here.

use crate::dict::{Dictionary, LanguageTag, Pos};
use crate::graph::{NodeId, NoisyGraph};
use crate::path::{find_cqc_paths, Path, PathError, SearchConfig};
use serde::Serialize;
use std::collections::{BTreeMap, HashSet};
use thiserror::Error;

/// Depth used by the synonym tasks unless overridden.
pub const SYNONYM_DEPTH_DEFAULT: usize = 6;

#[derive(Debug, Error)]
pub enum SynonymError {
    #[error("unknown sense node {0}")]
    UnknownSense(NodeId),
    #[error("no entry for {0}")]
    UnknownLemma(String),
    #[error("malformed question line {line}: {detail}")]
    MalformedToefl { line: usize, detail: String },
    #[error(transparent)]
    Path(#[from] PathError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SenseSynonym {
    pub node: NodeId,
    pub text: String,
    pub pos: Pos,
    pub lang: LanguageTag,
    pub label: String,
    pub score: f64,
}

impl SenseSynonym {
    pub fn token(&self) -> String {
        format!("{}#{}#{}", self.text, self.pos, self.label)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WordSynonym {
    pub text: String,
    pub pos: Pos,
    pub lang: LanguageTag,
    pub score: f64,
}

impl WordSynonym {
    pub fn token(&self) -> String {
        format!("{}#{}", self.text, self.pos)
    }
}

/// All legal closed paths from `source`: the union of searches toward each
/// distinct out-neighbor (every path leads with a forward edge, and parallel
/// edges are collapsed at build time, so the union is disjoint).
fn pooled_paths(
    g: &NoisyGraph,
    source: NodeId,
    cfg: &SearchConfig,
) -> Result<Vec<Path>, PathError> {
    let src_entry = g.node(source).sense.entry;
    let mut all = Vec::new();
    for e in g.out_edges(source) {
        if g.node(e.node).sense.entry == src_entry {
            continue;
        }
        all.extend(
            find_cqc_paths(g, e.node, source, cfg)?
                .paths()
                .iter()
                .cloned(),
        );
    }
    Ok(all)
}

/// Rank every sense occurring on a closed path through `source`, from both
/// languages, excluding senses of the query's own entry. Descending score;
/// ties fall back to lemma text, then language, part of speech, and label.
pub fn extract_synonyms_sense(
    g: &NoisyGraph,
    source: NodeId,
    cfg: &SearchConfig,
) -> Result<Vec<SenseSynonym>, SynonymError> {
    if source >= g.node_count() {
        return Err(SynonymError::UnknownSense(source));
    }
    let mut acc: BTreeMap<NodeId, f64> = BTreeMap::new();
    for p in pooled_paths(g, source, cfg)? {
        let w = (-(p.len() as f64)).exp();
        // interior nodes are pairwise distinct, so each path supports a
        // sense at most once
        for &n in &p.nodes[1..p.nodes.len() - 1] {
            *acc.entry(n).or_insert(0.0) += w;
        }
    }
    let mut out: Vec<SenseSynonym> = acc
        .into_iter()
        .map(|(n, score)| {
            let sn = g.node(n);
            SenseSynonym {
                node: n,
                text: sn.lemma.text.clone(),
                pos: sn.lemma.pos,
                lang: sn.lemma.lang.clone(),
                label: sn.label.clone(),
                score,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.text.cmp(&b.text))
            .then_with(|| a.lang.cmp(&b.lang))
            .then_with(|| a.pos.cmp(&b.pos))
            .then_with(|| a.label.cmp(&b.label))
    });
    Ok(out)
}

/// Pool the sense-level rankings of every sense of the queried entry and
/// aggregate per candidate entry.
pub fn extract_synonyms_word(
    g: &NoisyGraph,
    dict: &Dictionary,
    text: &str,
    pos: Pos,
    lang: &LanguageTag,
    cfg: &SearchConfig,
) -> Result<Vec<WordSynonym>, SynonymError> {
    let entry = dict
        .lookup(text, pos, lang)
        .ok_or_else(|| SynonymError::UnknownLemma(format!("{text}#{pos}#{lang}")))?;
    let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
    for sense in 0..dict.entry(entry).senses.len() {
        let node = g
            .node_id(crate::dict::SenseRef { entry, sense })
            .expect("every sense has a node");
        for cand in extract_synonyms_sense(g, node, cfg)? {
            let cand_entry = g.node(cand.node).sense.entry;
            *acc.entry(cand_entry).or_insert(0.0) += cand.score;
        }
    }
    let mut out: Vec<WordSynonym> = acc
        .into_iter()
        .map(|(e, score)| {
            let lemma = &dict.entry(e).lemma;
            WordSynonym {
                text: lemma.text.clone(),
                pos: lemma.pos,
                lang: lemma.lang.clone(),
                score,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.text.cmp(&b.text))
            .then_with(|| a.lang.cmp(&b.lang))
            .then_with(|| a.pos.cmp(&b.pos))
    });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToeflQuestion {
    pub target: String,
    pub choices: [String; 4],
    /// 0-based index of the correct choice.
    pub answer_index: usize,
}

/// Headerless TSV: target, four choices, 0-based answer index.
pub fn parse_toefl_tsv(text: &str) -> Result<Vec<ToeflQuestion>, SynonymError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let bad = |detail: String| SynonymError::MalformedToefl {
            line: i + 1,
            detail,
        };
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 6 {
            return Err(bad(format!("expected 6 fields, got {}", f.len())));
        }
        let answer_index: usize = f[5]
            .parse()
            .ok()
            .filter(|i| *i < 4)
            .ok_or_else(|| bad(format!("answer index {} not in 0..=3", f[5])))?;
        let choices = [
            f[1].to_string(),
            f[2].to_string(),
            f[3].to_string(),
            f[4].to_string(),
        ];
        let distinct: HashSet<&String> = choices.iter().collect();
        if distinct.len() != 4 {
            return Err(bad("choices are not pairwise distinct".into()));
        }
        if choices.iter().any(|c| *c == f[0]) {
            return Err(bad("target repeated among choices".into()));
        }
        out.push(ToeflQuestion {
            target: f[0].to_string(),
            choices,
            answer_index,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToeflOutcome {
    /// None is an abstention: no choice had any supporting path.
    pub chosen: Option<usize>,
    pub scores: [f64; 4],
}

/// Score each choice by the aggregated word-level evidence from every sense
/// of every entry written like the target, then take the argmax. Targets
/// absent from the lexicon abstain.
pub fn solve_toefl(
    g: &NoisyGraph,
    dict: &Dictionary,
    q: &ToeflQuestion,
    cfg: &SearchConfig,
) -> Result<ToeflOutcome, SynonymError> {
    let mut scores = [0.0f64; 4];
    for (entry, e) in dict.entries().iter().enumerate() {
        if e.lemma.text != q.target {
            continue;
        }
        for sense in 0..e.senses.len() {
            let node = g
                .node_id(crate::dict::SenseRef { entry, sense })
                .expect("every sense has a node");
            for cand in extract_synonyms_sense(g, node, cfg)? {
                if let Some(ci) = q.choices.iter().position(|c| *c == cand.text) {
                    scores[ci] += cand.score;
                }
            }
        }
    }
    let mut chosen = None;
    for (i, s) in scores.iter().enumerate() {
        if *s > 0.0 && chosen.is_none_or(|c: usize| *s > scores[c]) {
            chosen = Some(i);
        }
    }
    Ok(ToeflOutcome { chosen, scores })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ToeflReport {
    pub answered: usize,
    pub correct: usize,
    pub total: usize,
    pub precision: f64,
    pub recall: f64,
}

pub fn toefl_report(questions: &[ToeflQuestion], outcomes: &[ToeflOutcome]) -> ToeflReport {
    assert_eq!(questions.len(), outcomes.len());
    let answered = outcomes.iter().filter(|o| o.chosen.is_some()).count();
    let correct = questions
        .iter()
        .zip(outcomes)
        .filter(|(q, o)| o.chosen == Some(q.answer_index))
        .count();
    let ratio = |n: usize, d: usize| if d == 0 { 0.0 } else { n as f64 / d as f64 };
    ToeflReport {
        answered,
        correct,
        total: questions.len(),
        precision: ratio(correct, answered),
        recall: ratio(correct, questions.len()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionAtK {
    pub k: usize,
    pub correct: usize,
    pub given: usize,
    pub precision: f64,
}

/// Pooled precision at each K: correct-in-top-K summed over queries divided
/// by items actually given (rankings shorter than K contribute what they
/// have).
pub fn precision_at_k(
    rankings: &[Vec<String>],
    gold: &[HashSet<String>],
    ks: &[usize],
) -> Vec<PrecisionAtK> {
    assert_eq!(rankings.len(), gold.len(), "one gold set per query");
    ks.iter()
        .map(|&k| {
            let mut correct = 0;
            let mut given = 0;
            for (r, gs) in rankings.iter().zip(gold) {
                let top = &r[..r.len().min(k)];
                given += top.len();
                correct += top.iter().filter(|t| gs.contains(*t)).count();
            }
            PrecisionAtK {
                k,
                correct,
                given,
                precision: if given == 0 {
                    0.0
                } else {
                    correct as f64 / given as f64
                },
            }
        })
        .collect()
}

/// Ranking TSV: lang, token, score to 2 decimals.
pub fn sense_ranking_tsv(ranking: &[SenseSynonym]) -> String {
    ranking
        .iter()
        .map(|c| format!("{}\t{}\t{:.2}\n", c.lang, c.token(), c.score))
        .collect()
}

pub fn word_ranking_tsv(ranking: &[WordSynonym]) -> String {
    ranking
        .iter()
        .map(|c| format!("{}\t{}\t{:.2}\n", c.lang, c.token(), c.score))
        .collect()
}
