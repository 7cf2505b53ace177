//! Directed noisy sense graph. Nodes are senses; a translation edge
//! (s, s') exists when s' is a sense of an opposite-language entry whose
//! lemma or spelling variant equals a translation word of s; a meta edge
//! exists when s' is a sense of any entry (either language, any part of
//! speech) whose lemma equals a meta word of s.

use crate::dict::{DictEntry, Dictionary, Lemma, SenseRef};
use crate::score::SenseMapping;
use std::collections::{HashMap, HashSet};
use thiserror::Error;

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    Translation,
    Meta,
}

impl EdgeKind {
    pub fn label(self) -> &'static str {
        match self {
            EdgeKind::Translation => "translation",
            EdgeKind::Meta => "meta",
        }
    }
}

/// Graph node: one sense of one entry. Lemma and label are denormalized for
/// rendering and for lemma-identity checks during path search.
#[derive(Debug, Clone)]
pub struct SenseNode {
    pub sense: SenseRef,
    pub lemma: Lemma,
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    /// Neighbor node: the head for out-edges, the tail for in-edges.
    pub node: NodeId,
    pub kind: EdgeKind,
}

/// One translation word of a sense with the candidate senses it resolves to.
/// `exact_entry` is the opposite-language entry matched by lemma text;
/// `variant_entries` are entries matched through a spelling variant.
/// `nodes` lists every candidate sense in entry-then-sense order, exact
/// match first. Unresolvable words keep an empty candidate list.
#[derive(Debug, Clone)]
pub struct WordCandidates {
    pub word: String,
    pub nodes: Vec<NodeId>,
    pub exact_entry: Option<usize>,
    pub variant_entries: Vec<usize>,
}

impl WordCandidates {
    pub fn is_resolvable(&self) -> bool {
        !self.nodes.is_empty()
    }

    /// True when the word only matched through spelling variants.
    pub fn via_variant_only(&self) -> bool {
        self.exact_entry.is_none() && !self.variant_entries.is_empty()
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("graph has no translation edges")]
    EmptyGraph,
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("inconsistent mapping at {lemma} word {word}: {detail}")]
    InconsistentMapping {
        lemma: Lemma,
        word: String,
        detail: String,
    },
}

#[derive(Debug, Clone)]
pub struct NoisyGraph {
    nodes: Vec<SenseNode>,
    out: Vec<Vec<Edge>>,
    rev: Vec<Vec<Edge>>,
    node_of: HashMap<(usize, usize), NodeId>,
    /// Per node, one entry per translation word in listing order.
    words: Vec<Vec<WordCandidates>>,
    translation_edge_count: usize,
    include_meta: bool,
}

/// Build the noisy graph. `include_meta` toggles meta edges; translation
/// edges are always present. Parallel edges collapse, keeping the earliest
/// kind added (translation before meta).
pub fn build_noisy_graph(dict: &Dictionary, include_meta: bool) -> NoisyGraph {
    let mut nodes = Vec::new();
    let mut node_of = HashMap::new();
    for (ei, entry) in dict.entries().iter().enumerate() {
        for (si, sense) in entry.senses.iter().enumerate() {
            let id = nodes.len();
            node_of.insert((ei, si), id);
            nodes.push(SenseNode {
                sense: SenseRef {
                    entry: ei,
                    sense: si,
                },
                lemma: entry.lemma.clone(),
                label: sense.id.label.clone(),
            });
        }
    }

    // variant surface -> entries listing it, in entry order
    let mut variant_index: HashMap<(&str, crate::dict::Pos, &str), Vec<usize>> = HashMap::new();
    // bare text -> entries, any pos and language, for meta matching
    let mut text_index: HashMap<&str, Vec<usize>> = HashMap::new();
    for (ei, entry) in dict.entries().iter().enumerate() {
        for v in &entry.variants {
            variant_index
                .entry((v.as_str(), entry.lemma.pos, entry.lemma.lang.as_str()))
                .or_default()
                .push(ei);
        }
        text_index
            .entry(entry.lemma.text.as_str())
            .or_default()
            .push(ei);
    }

    let entry_nodes = |ei: usize, node_of: &HashMap<(usize, usize), NodeId>| -> Vec<NodeId> {
        (0..dict.entry(ei).senses.len())
            .map(|si| node_of[&(ei, si)])
            .collect()
    };

    let n = nodes.len();
    let mut out: Vec<Vec<Edge>> = vec![Vec::new(); n];
    let mut words: Vec<Vec<WordCandidates>> = vec![Vec::new(); n];
    let mut translation_edge_count = 0usize;

    for id in 0..n {
        let sr = nodes[id].sense;
        let entry = dict.entry(sr.entry);
        let sense = &entry.senses[sr.sense];
        let opposite = dict.opposite(&entry.lemma.lang);
        let mut seen_heads: HashSet<NodeId> = HashSet::new();

        for word in &sense.translations {
            let exact_entry = dict.lookup(word, entry.lemma.pos, opposite);
            let mut variant_entries: Vec<usize> = variant_index
                .get(&(word.as_str(), entry.lemma.pos, opposite.as_str()))
                .cloned()
                .unwrap_or_default();
            variant_entries.retain(|ei| Some(*ei) != exact_entry);

            let mut cand_nodes = Vec::new();
            for ei in exact_entry.iter().chain(variant_entries.iter()) {
                cand_nodes.extend(entry_nodes(*ei, &node_of));
            }
            for &head in &cand_nodes {
                if seen_heads.insert(head) {
                    out[id].push(Edge {
                        node: head,
                        kind: EdgeKind::Translation,
                    });
                    translation_edge_count += 1;
                }
            }
            words[id].push(WordCandidates {
                word: word.clone(),
                nodes: cand_nodes,
                exact_entry,
                variant_entries,
            });
        }

        if include_meta {
            for m in &sense.meta {
                if let Some(eis) = text_index.get(m.as_str()) {
                    for &ei in eis {
                        for head in entry_nodes(ei, &node_of) {
                            if seen_heads.insert(head) {
                                out[id].push(Edge {
                                    node: head,
                                    kind: EdgeKind::Meta,
                                });
                            }
                        }
                    }
                }
            }
        }
    }

    let mut rev: Vec<Vec<Edge>> = vec![Vec::new(); n];
    for (tail, tail_out) in out.iter().enumerate() {
        for e in tail_out {
            rev[e.node].push(Edge {
                node: tail,
                kind: e.kind,
            });
        }
    }

    NoisyGraph {
        nodes,
        out,
        rev,
        node_of,
        words,
        translation_edge_count,
        include_meta,
    }
}

impl NoisyGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[SenseNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &SenseNode {
        &self.nodes[id]
    }

    pub fn node_id(&self, sr: SenseRef) -> Option<NodeId> {
        self.node_of.get(&(sr.entry, sr.sense)).copied()
    }

    pub fn out_edges(&self, id: NodeId) -> &[Edge] {
        &self.out[id]
    }

    pub fn in_edges(&self, id: NodeId) -> &[Edge] {
        &self.rev[id]
    }

    pub fn out_degree(&self, id: NodeId) -> Result<usize, GraphError> {
        self.out
            .get(id)
            .map(Vec::len)
            .ok_or(GraphError::UnknownNode(id))
    }

    pub fn has_edge(&self, tail: NodeId, head: NodeId) -> bool {
        self.out[tail].iter().any(|e| e.node == head)
    }

    /// Translation words of a node's sense with their resolved candidates.
    pub fn word_candidates(&self, id: NodeId) -> &[WordCandidates] {
        &self.words[id]
    }

    pub fn translation_edge_count(&self) -> usize {
        self.translation_edge_count
    }

    pub fn include_meta(&self) -> bool {
        self.include_meta
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// Ratio of resolvable (sense, word) pairs to translation edges. Every
    /// resolvable pair contributes at least one edge, so the value lies in
    /// (0, 1] for dictionaries without overlapping surface matches.
    pub fn correctness_ratio(&self) -> Result<f64, GraphError> {
        if self.translation_edge_count == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let resolvable: usize = self
            .words
            .iter()
            .flatten()
            .filter(|w| w.is_resolvable())
            .count();
        Ok(resolvable as f64 / self.translation_edge_count as f64)
    }

    /// Render node `id` as `lemma#pos#label`.
    pub fn token(&self, id: NodeId) -> String {
        let n = &self.nodes[id];
        format!("{}#{}#{}", n.lemma.text, n.lemma.pos, n.label)
    }

    /// Headerless TSV dump: one row per edge, node order then edge order.
    pub fn dump_tsv(&self) -> String {
        let mut s = String::new();
        for tail in 0..self.nodes.len() {
            let t = &self.nodes[tail];
            for e in &self.out[tail] {
                let h = &self.nodes[e.node];
                s.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                    t.lemma.text,
                    t.lemma.pos,
                    t.label,
                    h.lemma.text,
                    h.lemma.pos,
                    h.label,
                    e.kind.label()
                ));
            }
        }
        s
    }
}

/// Graph after disambiguation: per (sense, word) only the chosen candidate's
/// edge survives. Abstained and unresolvable words contribute no edges; meta
/// edges are dropped.
#[derive(Debug, Clone)]
pub struct PrunedGraph {
    nodes: Vec<SenseNode>,
    out: Vec<Vec<NodeId>>,
}

impl PrunedGraph {
    pub fn nodes(&self) -> &[SenseNode] {
        &self.nodes
    }

    pub fn out_neighbors(&self, id: NodeId) -> &[NodeId] {
        &self.out[id]
    }

    pub fn out_degree(&self, id: NodeId) -> Result<usize, GraphError> {
        self.out
            .get(id)
            .map(Vec::len)
            .ok_or(GraphError::UnknownNode(id))
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }
}

/// Prune the graph down to chosen translation edges. Every mapping decision
/// is validated against the graph; a chosen candidate that is not among the
/// word's resolved senses raises InconsistentMapping.
pub fn prune(g: &NoisyGraph, mappings: &[SenseMapping]) -> Result<PrunedGraph, GraphError> {
    let mut out: Vec<Vec<NodeId>> = vec![Vec::new(); g.node_count()];
    for m in mappings {
        let tail = m.source_node;
        if tail >= g.node_count() {
            return Err(GraphError::UnknownNode(tail));
        }
        let lemma = g.node(tail).lemma.clone();
        for d in &m.words {
            let Some(chosen) = d.chosen_candidate() else {
                continue;
            };
            let wc = g
                .word_candidates(tail)
                .iter()
                .find(|w| w.word == d.word)
                .ok_or_else(|| GraphError::InconsistentMapping {
                    lemma: lemma.clone(),
                    word: d.word.clone(),
                    detail: "word is not a translation of this sense".into(),
                })?;
            if !wc.nodes.contains(&chosen.node) {
                return Err(GraphError::InconsistentMapping {
                    lemma: lemma.clone(),
                    word: d.word.clone(),
                    detail: format!(
                        "chosen sense {} is not a candidate for this word",
                        chosen.label
                    ),
                });
            }
            if !out[tail].contains(&chosen.node) {
                out[tail].push(chosen.node);
            }
        }
    }
    Ok(PrunedGraph {
        nodes: g.nodes.to_vec(),
        out,
    })
}

/// Entry lexicalizations: lemma text plus spelling variants.
pub fn lexicalizations(entry: &DictEntry) -> Vec<&str> {
    let mut v = Vec::with_capacity(1 + entry.variants.len());
    v.push(entry.lemma.text.as_str());
    v.extend(entry.variants.iter().map(String::as_str));
    v
}
