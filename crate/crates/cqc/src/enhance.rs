//! Defect detection over the noisy graph: six structural patterns, each
//! instance ranked by the disambiguation confidence of its anchoring
//! translation. Detection reads the unpruned graph plus the mappings, so
//! abstentions still surface as zero-confidence issues.

use crate::dict::{DictEntry, Dictionary, LanguageTag, Pos, SenseRef};
use crate::graph::{NodeId, NoisyGraph, WordCandidates};
use crate::score::SenseMapping;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

/// Printed alongside rankings: observed confidences rarely exceed this.
pub const CONFIDENCE_CEILING: f64 = 0.3;
pub const CONFIDENCE_CEILING_NOTE: &str = "confidence values greater than 0.3 are very unlikely";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IssueType {
    Misalignment,
    PartialAlignment,
    MissingLemma,
    UseOfReference,
    UseOfVariant,
    InconsistentSpelling,
}

impl IssueType {
    pub fn all() -> [IssueType; 6] {
        [
            IssueType::Misalignment,
            IssueType::PartialAlignment,
            IssueType::MissingLemma,
            IssueType::UseOfReference,
            IssueType::UseOfVariant,
            IssueType::InconsistentSpelling,
        ]
    }

    pub fn code(self) -> &'static str {
        match self {
            IssueType::Misalignment => "misalignment",
            IssueType::PartialAlignment => "partial_alignment",
            IssueType::MissingLemma => "missing_lemma",
            IssueType::UseOfReference => "use_of_reference",
            IssueType::UseOfVariant => "use_of_variant",
            IssueType::InconsistentSpelling => "inconsistent_spelling",
        }
    }

    pub fn parse(s: &str) -> Option<IssueType> {
        IssueType::all().into_iter().find(|t| t.code() == s)
    }
}

impl fmt::Display for IssueType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// A pattern participant: either a specific sense or a bare written form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Participant {
    Sense {
        text: String,
        pos: Pos,
        lang: LanguageTag,
        label: String,
    },
    Word(String),
}

impl Participant {
    pub fn token(&self) -> String {
        match self {
            Participant::Sense {
                text, pos, label, ..
            } => format!("{text}#{pos}#{label}"),
            Participant::Word(w) => w.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Issue {
    pub issue_type: IssueType,
    /// Ordered participants realizing the pattern; 2 or 3 entries.
    pub participants: Vec<Participant>,
    pub confidence: f64,
    pub explanation: String,
}

/// Strip separators ({hyphen, space}) and case-fold. Two written forms
/// "differ only by spelling convention" when they normalize equal.
pub fn normalize_spelling(s: &str) -> String {
    s.chars()
        .filter(|c| *c != '-' && *c != ' ')
        .flat_map(char::to_lowercase)
        .collect()
}

/// Final whitespace-separated token, the head of a compound.
pub fn last_token(s: &str) -> &str {
    s.split_whitespace().last().unwrap_or(s)
}

fn is_compound_of(compound: &str, head: &str) -> bool {
    compound != head && compound.contains(char::is_whitespace) && last_token(compound) == head
}

/// Word-level back-translation acceptance: a written form counts as hitting
/// an entry through its lemma, a variant, spelling-convention equality, or
/// as a compound sharing the head token.
fn word_matches_entry(word: &str, e: &DictEntry) -> bool {
    word == e.lemma.text
        || e.variants.iter().any(|v| v == word)
        || normalize_spelling(word) == normalize_spelling(&e.lemma.text)
        || last_token(word) == e.lemma.text
        || last_token(&e.lemma.text) == word
}

/// First sense of `from_entry` whose (reference-resolved) translations reach
/// any written form of `to`. Returns the scanned sense, not the resolution
/// target.
fn back_translation_sense(
    dict: &Dictionary,
    from_entry: usize,
    to: &DictEntry,
) -> Option<SenseRef> {
    for si in 0..dict.entry(from_entry).senses.len() {
        let sr = SenseRef {
            entry: from_entry,
            sense: si,
        };
        let Ok((fin, _)) = dict.resolve_reference(sr) else {
            continue;
        };
        let Ok(words) = dict.translations(fin) else {
            continue;
        };
        if words.iter().any(|t| word_matches_entry(t, to)) {
            return Some(sr);
        }
    }
    None
}

fn candidate_entries(wc: &WordCandidates) -> Vec<usize> {
    let mut v: Vec<usize> = wc.exact_entry.into_iter().collect();
    v.extend(wc.variant_entries.iter().copied());
    v
}

fn sense_participant(dict: &Dictionary, g: &NoisyGraph, node: NodeId) -> Participant {
    let sr = g.node(node).sense;
    let e = dict.entry(sr.entry);
    Participant::Sense {
        text: e.lemma.text.clone(),
        pos: e.lemma.pos,
        lang: e.lemma.lang.clone(),
        label: e.senses[sr.sense].id.label.clone(),
    }
}

struct Detector<'a> {
    dict: &'a Dictionary,
    g: &'a NoisyGraph,
    by_node: HashMap<NodeId, &'a SenseMapping>,
    seen: HashSet<(IssueType, Vec<Participant>)>,
    out: Vec<Issue>,
}

impl<'a> Detector<'a> {
    fn confidence(&self, node: NodeId, word: &str) -> f64 {
        self.by_node
            .get(&node)
            .and_then(|m| m.confidence(word).ok())
            .unwrap_or(0.0)
    }

    fn chosen_node(&self, node: NodeId, word: &str) -> Option<NodeId> {
        self.by_node
            .get(&node)
            .and_then(|m| m.words.iter().find(|d| d.word == word))
            .and_then(|d| d.chosen_candidate())
            .map(|c| c.node)
    }

    fn sense(&self, node: NodeId) -> Participant {
        sense_participant(self.dict, self.g, node)
    }

    fn push(
        &mut self,
        issue_type: IssueType,
        participants: Vec<Participant>,
        confidence: f64,
        explanation: String,
    ) {
        if self.seen.insert((issue_type, participants.clone())) {
            self.out.push(Issue {
                issue_type,
                participants,
                confidence,
                explanation,
            });
        }
    }

    fn misalignment(&mut self) {
        for s in 0..self.g.node_count() {
            let entry = self.dict.entry(self.g.node(s).sense.entry);
            for wc in self.g.word_candidates(s) {
                if !wc.is_resolvable() {
                    continue;
                }
                let targets = candidate_entries(wc);
                if targets
                    .iter()
                    .any(|&t| back_translation_sense(self.dict, t, entry).is_some())
                {
                    continue;
                }
                let repr = self.chosen_node(s, &wc.word).unwrap_or(wc.nodes[0]);
                let conf = self.confidence(s, &wc.word);
                let src = self.sense(s);
                let dst = self.sense(repr);
                let explanation = format!(
                    "{} translates as {} but no sense of {} translates back to {}",
                    src.token(),
                    wc.word,
                    wc.word,
                    entry.lemma.text
                );
                self.push(IssueType::Misalignment, vec![src, dst], conf, explanation);
            }
        }
    }

    fn partial_alignment(&mut self) {
        for u in 0..self.g.node_count() {
            let eu = self.dict.entry(self.g.node(u).sense.entry);
            for e1 in self.g.out_edges(u) {
                if e1.kind != crate::graph::EdgeKind::Translation {
                    continue;
                }
                let m = e1.node;
                for e2 in self.g.out_edges(m) {
                    if e2.kind != crate::graph::EdgeKind::Translation {
                        continue;
                    }
                    let x = e2.node;
                    let ex = self.dict.entry(self.g.node(x).sense.entry);
                    if ex.lemma.lang != eu.lemma.lang
                        || self.g.node(x).sense.entry == self.g.node(u).sense.entry
                    {
                        continue;
                    }
                    let parts = vec![self.sense(u), self.sense(m), self.sense(x)];
                    if is_compound_of(&ex.lemma.text, &eu.lemma.text) {
                        let explanation = format!(
                            "{} maps to {} which also translates the compound {} (head-to-compound)",
                            parts[0].token(),
                            parts[1].token(),
                            ex.lemma.text
                        );
                        self.push(IssueType::PartialAlignment, parts.clone(), 0.0, explanation);
                    }
                    if is_compound_of(&eu.lemma.text, &ex.lemma.text) {
                        let explanation = format!(
                            "compound {} maps to {} which also translates the head {} (compound-to-head)",
                            parts[0].token(),
                            parts[1].token(),
                            ex.lemma.text
                        );
                        self.push(IssueType::PartialAlignment, parts, 0.0, explanation);
                    }
                }
            }
        }
    }

    fn missing_lemma(&mut self, spelling_claims: &HashSet<(NodeId, String)>) {
        for s in 0..self.g.node_count() {
            let lang = self
                .dict
                .opposite(&self.dict.entry(self.g.node(s).sense.entry).lemma.lang)
                .clone();
            for wc in self.g.word_candidates(s) {
                if wc.is_resolvable() || spelling_claims.contains(&(s, wc.word.clone())) {
                    continue;
                }
                let src = self.sense(s);
                let explanation = format!(
                    "translation {} of {} has no entry on the {} side",
                    wc.word,
                    src.token(),
                    lang
                );
                self.push(
                    IssueType::MissingLemma,
                    vec![src, Participant::Word(wc.word.clone())],
                    0.0,
                    explanation,
                );
            }
        }
    }

    fn use_of_reference(&mut self) {
        for s in 0..self.g.node_count() {
            let entry = self.dict.entry(self.g.node(s).sense.entry);
            for wc in self.g.word_candidates(s) {
                for &c in &wc.nodes {
                    let csr = self.g.node(c).sense;
                    if self.dict.entry(csr.entry).senses[csr.sense]
                        .reference
                        .is_none()
                    {
                        continue;
                    }
                    let Ok((fin, hops)) = self.dict.resolve_reference(csr) else {
                        continue;
                    };
                    if hops == 0 {
                        continue;
                    }
                    let back = self
                        .dict
                        .translations(fin)
                        .map(|ws| ws.iter().any(|t| word_matches_entry(t, entry)))
                        .unwrap_or(false);
                    if !back {
                        continue;
                    }
                    let fin_node = self.g.node_id(fin).expect("resolved sense has a node");
                    let conf = self.confidence(s, &wc.word);
                    let parts = vec![self.sense(s), self.sense(c), self.sense(fin_node)];
                    let explanation = format!(
                        "{} translates as {}, which defers to {}, and that sense translates back to {}",
                        parts[0].token(),
                        parts[1].token(),
                        parts[2].token(),
                        entry.lemma.text
                    );
                    self.push(IssueType::UseOfReference, parts, conf, explanation);
                }
            }
        }
    }

    fn use_of_variant(&mut self) {
        for s in 0..self.g.node_count() {
            let entry = self.dict.entry(self.g.node(s).sense.entry);
            for wc in self.g.word_candidates(s) {
                if !wc.via_variant_only() {
                    continue;
                }
                for &ve in &wc.variant_entries {
                    let Some(back) = back_translation_sense(self.dict, ve, entry) else {
                        continue;
                    };
                    let back_node = self.g.node_id(back).expect("sense has a node");
                    let conf = self.confidence(s, &wc.word);
                    let src = self.sense(s);
                    let dst = self.sense(back_node);
                    let explanation = format!(
                        "{} writes variant {} while {} translates back to {} using the main form {}",
                        src.token(),
                        wc.word,
                        dst.token(),
                        entry.lemma.text,
                        self.dict.entry(ve).lemma.text
                    );
                    self.push(
                        IssueType::UseOfVariant,
                        vec![src, Participant::Word(wc.word.clone()), dst],
                        conf,
                        explanation,
                    );
                    break;
                }
            }
        }
    }

    /// Returns the (node, word) pairs claimed, so missing_lemma skips them.
    fn inconsistent_spelling(&mut self) -> HashSet<(NodeId, String)> {
        let mut norm_index: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, e) in self.dict.entries().iter().enumerate() {
            norm_index
                .entry(normalize_spelling(&e.lemma.text))
                .or_default()
                .push(i);
        }
        let mut claims = HashSet::new();
        let mut found = Vec::new();
        for s in 0..self.g.node_count() {
            let entry = self.dict.entry(self.g.node(s).sense.entry);
            let opposite = self.dict.opposite(&entry.lemma.lang).clone();
            for wc in self.g.word_candidates(s) {
                let Some(hits) = norm_index.get(&normalize_spelling(&wc.word)) else {
                    continue;
                };
                for &e2 in hits {
                    let cand = self.dict.entry(e2);
                    if cand.lemma.text == wc.word
                        || cand.lemma.lang != opposite
                        || cand.lemma.pos != entry.lemma.pos
                    {
                        continue;
                    }
                    let Some(back) = back_translation_sense(self.dict, e2, entry) else {
                        continue;
                    };
                    let back_node = self.g.node_id(back).expect("sense has a node");
                    let src = self.sense(s);
                    let dst = self.sense(back_node);
                    let explanation = format!(
                        "{} writes {} while the reciprocal entry spells it {}",
                        src.token(),
                        wc.word,
                        cand.lemma.text
                    );
                    found.push(Issue {
                        issue_type: IssueType::InconsistentSpelling,
                        participants: vec![src, Participant::Word(wc.word.clone()), dst],
                        confidence: 0.0,
                        explanation,
                    });
                    claims.insert((s, wc.word.clone()));
                    break;
                }
            }
        }
        for i in found {
            self.push(i.issue_type, i.participants, i.confidence, i.explanation);
        }
        claims
    }
}

/// Detect every instance of the six patterns, in type order and graph order
/// within a type, deduplicated by (type, participants).
pub fn detect_issues(dict: &Dictionary, g: &NoisyGraph, mappings: &[SenseMapping]) -> Vec<Issue> {
    let mut det = Detector {
        dict,
        g,
        by_node: mappings.iter().map(|m| (m.source_node, m)).collect(),
        seen: HashSet::new(),
        out: Vec::new(),
    };
    // spelling runs first: its claims mask missing_lemma, but its issues
    // are reported last in type order
    let mut spelling = Detector {
        dict,
        g,
        by_node: det.by_node.clone(),
        seen: HashSet::new(),
        out: Vec::new(),
    };
    let claims = spelling.inconsistent_spelling();
    det.misalignment();
    det.partial_alignment();
    det.missing_lemma(&claims);
    det.use_of_reference();
    det.use_of_variant();
    det.out.extend(spelling.out);
    det.out
}

/// Stable sort by descending confidence; detection order breaks ties.
pub fn rank_issues(mut issues: Vec<Issue>) -> Vec<Issue> {
    issues.sort_by(|a, b| b.confidence.total_cmp(&a.confidence));
    issues
}

/// Re-check one issue's pattern predicate against the dictionary.
pub fn verify_issue(dict: &Dictionary, g: &NoisyGraph, issue: &Issue) -> bool {
    let node_of = |p: &Participant| -> Option<NodeId> {
        let Participant::Sense {
            text,
            pos,
            lang,
            label,
        } = p
        else {
            return None;
        };
        let entry = dict.lookup(text, *pos, lang)?;
        let sense = dict
            .entry(entry)
            .senses
            .iter()
            .position(|s| s.id.label == *label)?;
        g.node_id(SenseRef { entry, sense })
    };
    let word_of = |p: &Participant| -> Option<String> {
        match p {
            Participant::Word(w) => Some(w.clone()),
            Participant::Sense { .. } => None,
        }
    };
    let p = &issue.participants;
    match issue.issue_type {
        IssueType::Misalignment => {
            let (Some(s), Some(c)) = (node_of(&p[0]), node_of(&p[1])) else {
                return false;
            };
            let entry = dict.entry(g.node(s).sense.entry);
            let c_entry = g.node(c).sense.entry;
            g.word_candidates(s).iter().any(|wc| {
                let targets = candidate_entries(wc);
                wc.is_resolvable()
                    && targets.contains(&c_entry)
                    && !targets
                        .iter()
                        .any(|&t| back_translation_sense(dict, t, entry).is_some())
            })
        }
        IssueType::PartialAlignment => {
            let (Some(u), Some(m), Some(x)) = (node_of(&p[0]), node_of(&p[1]), node_of(&p[2]))
            else {
                return false;
            };
            let translation_edge = |a: NodeId, b: NodeId| {
                g.out_edges(a)
                    .iter()
                    .any(|e| e.node == b && e.kind == crate::graph::EdgeKind::Translation)
            };
            let eu = dict.entry(g.node(u).sense.entry);
            let ex = dict.entry(g.node(x).sense.entry);
            translation_edge(u, m)
                && translation_edge(m, x)
                && eu.lemma.lang == ex.lemma.lang
                && g.node(u).sense.entry != g.node(x).sense.entry
                && (is_compound_of(&ex.lemma.text, &eu.lemma.text)
                    || is_compound_of(&eu.lemma.text, &ex.lemma.text))
        }
        IssueType::MissingLemma => {
            let (Some(s), Some(w)) = (node_of(&p[0]), word_of(&p[1])) else {
                return false;
            };
            g.word_candidates(s)
                .iter()
                .any(|wc| wc.word == w && !wc.is_resolvable())
        }
        IssueType::UseOfReference => {
            let (Some(s), Some(c), Some(f)) = (node_of(&p[0]), node_of(&p[1]), node_of(&p[2]))
            else {
                return false;
            };
            let entry = dict.entry(g.node(s).sense.entry);
            let csr = g.node(c).sense;
            if dict.entry(csr.entry).senses[csr.sense].reference.is_none() {
                return false;
            }
            let Ok((fin, hops)) = dict.resolve_reference(csr) else {
                return false;
            };
            hops >= 1
                && g.node_id(fin) == Some(f)
                && g.word_candidates(s).iter().any(|wc| wc.nodes.contains(&c))
                && dict
                    .translations(fin)
                    .map(|ws| ws.iter().any(|t| word_matches_entry(t, entry)))
                    .unwrap_or(false)
        }
        IssueType::UseOfVariant => {
            let (Some(s), Some(w), Some(b)) = (node_of(&p[0]), word_of(&p[1]), node_of(&p[2]))
            else {
                return false;
            };
            let entry = dict.entry(g.node(s).sense.entry);
            let bsr = g.node(b).sense;
            g.word_candidates(s).iter().any(|wc| {
                wc.word == w && wc.via_variant_only() && wc.variant_entries.contains(&bsr.entry)
            }) && back_sense_translates(dict, bsr, entry)
        }
        IssueType::InconsistentSpelling => {
            let (Some(s), Some(w), Some(b)) = (node_of(&p[0]), word_of(&p[1]), node_of(&p[2]))
            else {
                return false;
            };
            let entry = dict.entry(g.node(s).sense.entry);
            let bsr = g.node(b).sense;
            let cand = dict.entry(bsr.entry);
            g.word_candidates(s).iter().any(|wc| wc.word == w)
                && cand.lemma.text != w
                && normalize_spelling(&cand.lemma.text) == normalize_spelling(&w)
                && cand.lemma.lang == *dict.opposite(&entry.lemma.lang)
                && cand.lemma.pos == entry.lemma.pos
                && back_sense_translates(dict, bsr, entry)
        }
    }
}

fn back_sense_translates(dict: &Dictionary, sr: SenseRef, to: &DictEntry) -> bool {
    dict.resolve_reference(sr)
        .ok()
        .and_then(|(fin, _)| dict.translations(fin).ok())
        .map(|ws| ws.iter().any(|t| word_matches_entry(t, to)))
        .unwrap_or(false)
}

/// Headerless TSV: type, confidence (4 decimals), src, via, dst,
/// explanation. Two-participant patterns print "-" for via.
pub fn issues_tsv(issues: &[Issue]) -> String {
    let mut s = String::new();
    for i in issues {
        let (src, via, dst) = match i.participants.len() {
            2 => (
                i.participants[0].token(),
                "-".to_string(),
                i.participants[1].token(),
            ),
            3 => (
                i.participants[0].token(),
                i.participants[1].token(),
                i.participants[2].token(),
            ),
            n => panic!("issue with {n} participants"),
        };
        s.push_str(&format!(
            "{}\t{:.4}\t{}\t{}\t{}\t{}\n",
            i.issue_type, i.confidence, src, via, dst, i.explanation
        ));
    }
    s
}

pub fn count_by_type(issues: &[Issue]) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for i in issues {
        *m.entry(i.issue_type.to_string()).or_insert(0) += 1;
    }
    m
}
