//! Bilingual dictionary model: entries keyed by (lemma, pos, lang), ordered
//! senses carrying translations, meta words and cross-references, plus the
//! JSON interchange format.

use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};
use std::fmt;
use thiserror::Error;

/// Part of speech. The interchange format uses the codes `n`, `v`, `a`, `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    Adverb,
}

impl Pos {
    pub fn code(self) -> &'static str {
        match self {
            Pos::Noun => "n",
            Pos::Verb => "v",
            Pos::Adjective => "a",
            Pos::Adverb => "r",
        }
    }

    pub fn parse(code: &str) -> Option<Pos> {
        match code {
            "n" => Some(Pos::Noun),
            "v" => Some(Pos::Verb),
            "a" => Some(Pos::Adjective),
            "r" => Some(Pos::Adverb),
            _ => None,
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Language tag such as `en` or `it`. Compared case-sensitively.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LanguageTag(String);

impl LanguageTag {
    pub fn new(tag: impl Into<String>) -> Self {
        LanguageTag(tag.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for LanguageTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Lemma key: surface text, part of speech and language. Text is kept
/// exactly as supplied; multiword lemmas are legal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lemma {
    pub text: String,
    pub pos: Pos,
    pub lang: LanguageTag,
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}, {})", self.text, self.pos, self.lang)
    }
}

/// Sense identifier: the label printed by the dictionary plus the position
/// of the sense within its entry. Labels are opaque strings ("1", "A.2").
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SenseId {
    pub label: String,
    pub order_index: usize,
}

/// Cross-reference to another entry in the same language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reference {
    pub lemma: String,
    pub pos: Pos,
}

/// One sense of an entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SenseEntry {
    pub id: SenseId,
    /// Opposite-language surface words, in listing order, no duplicates.
    pub translations: Vec<String>,
    /// Meta words: topic or gloss words matched against any entry of either
    /// language and any part of speech.
    pub meta: Vec<String>,
    pub reference: Option<Reference>,
}

/// A dictionary entry: lemma key, spelling variants and ordered senses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DictEntry {
    pub lemma: Lemma,
    pub variants: Vec<String>,
    pub senses: Vec<SenseEntry>,
}

/// Index of a sense inside a `Dictionary`: (entry index, sense index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SenseRef {
    pub entry: usize,
    pub sense: usize,
}

#[derive(Debug, Error)]
pub enum DictError {
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("source and target language must differ, both are {0}")]
    LanguagesNotDistinct(LanguageTag),
    #[error("unknown language tag {lang} at entry {text}")]
    UnknownLanguageTag { text: String, lang: String },
    #[error("unknown part of speech code {pos} at entry {text}")]
    UnknownPos { text: String, pos: String },
    #[error("duplicate lemma key {0}")]
    DuplicateLemmaKey(Lemma),
    #[error("duplicate sense label {label} in entry {lemma}")]
    DuplicateSenseLabel { lemma: Lemma, label: String },
    #[error("duplicate translation {word} in sense {label} of {lemma}")]
    DuplicateTranslation {
        lemma: Lemma,
        label: String,
        word: String,
    },
    #[error("sense {label} of {lemma} has neither translations nor a reference")]
    EmptySense { lemma: Lemma, label: String },
    #[error("variant {variant} of {lemma} repeats the lemma text")]
    VariantIsLemma { lemma: Lemma, variant: String },
    #[error("unknown sense: entry index {entry}, sense index {sense}")]
    UnknownSense { entry: usize, sense: usize },
    #[error("dangling reference from {from} to missing entry {to}")]
    DanglingReference { from: Lemma, to: String },
    #[error("reference cycle starting at {0}")]
    ReferenceCycle(Lemma),
    #[error("unknown lemma {text} ({pos}, {lang})")]
    UnknownLemma {
        text: String,
        pos: Pos,
        lang: LanguageTag,
    },
}

/// Validated bilingual dictionary. Entry order is the listing order of the
/// input and is preserved everywhere downstream.
#[derive(Debug, Clone)]
pub struct Dictionary {
    source_lang: LanguageTag,
    target_lang: LanguageTag,
    entries: Vec<DictEntry>,
    by_key: HashMap<(String, Pos, LanguageTag), usize>,
}

#[derive(Serialize, Deserialize)]
struct RawDictionary {
    source_lang: String,
    target_lang: String,
    entries: Vec<RawEntry>,
}

#[derive(Serialize, Deserialize)]
struct RawEntry {
    lemma: String,
    pos: String,
    lang: String,
    #[serde(default)]
    variants: Vec<String>,
    senses: Vec<RawSense>,
}

#[derive(Serialize, Deserialize)]
struct RawSense {
    id: String,
    #[serde(default)]
    translations: Vec<String>,
    #[serde(default)]
    meta: Vec<String>,
    #[serde(rename = "ref")]
    reference: Option<RawRef>,
}

#[derive(Serialize, Deserialize)]
struct RawRef {
    lemma: String,
    pos: String,
}

/// Parse and validate a dictionary from its JSON interchange form.
pub fn parse_dictionary(input: &str) -> Result<Dictionary, DictError> {
    let raw: RawDictionary =
        serde_json::from_str(input).map_err(|e| DictError::MalformedInput(e.to_string()))?;
    Dictionary::from_raw(raw)
}

/// Serialize a dictionary back to its JSON interchange form. Parsing the
/// output yields a structurally equal dictionary.
pub fn serialize_dictionary(dict: &Dictionary) -> String {
    let raw = RawDictionary {
        source_lang: dict.source_lang.as_str().to_string(),
        target_lang: dict.target_lang.as_str().to_string(),
        entries: dict
            .entries
            .iter()
            .map(|e| RawEntry {
                lemma: e.lemma.text.clone(),
                pos: e.lemma.pos.code().to_string(),
                lang: e.lemma.lang.as_str().to_string(),
                variants: e.variants.clone(),
                senses: e
                    .senses
                    .iter()
                    .map(|s| RawSense {
                        id: s.id.label.clone(),
                        translations: s.translations.clone(),
                        meta: s.meta.clone(),
                        reference: s.reference.as_ref().map(|r| RawRef {
                            lemma: r.lemma.clone(),
                            pos: r.pos.code().to_string(),
                        }),
                    })
                    .collect(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&raw).expect("dictionary serializes");
    out.push('\n');
    out
}

impl Dictionary {
    fn from_raw(raw: RawDictionary) -> Result<Dictionary, DictError> {
        if raw.source_lang == raw.target_lang {
            return Err(DictError::LanguagesNotDistinct(LanguageTag::new(
                raw.source_lang,
            )));
        }
        if raw.source_lang.is_empty() || raw.target_lang.is_empty() {
            return Err(DictError::MalformedInput(
                "language tags must be non-empty".into(),
            ));
        }
        let source_lang = LanguageTag::new(raw.source_lang);
        let target_lang = LanguageTag::new(raw.target_lang);

        let mut entries = Vec::with_capacity(raw.entries.len());
        let mut by_key = HashMap::new();
        for re in raw.entries {
            let pos = Pos::parse(&re.pos).ok_or_else(|| DictError::UnknownPos {
                text: re.lemma.clone(),
                pos: re.pos.clone(),
            })?;
            let lang = LanguageTag::new(re.lang.clone());
            if lang != source_lang && lang != target_lang {
                return Err(DictError::UnknownLanguageTag {
                    text: re.lemma.clone(),
                    lang: re.lang.clone(),
                });
            }
            if re.lemma.is_empty() {
                return Err(DictError::MalformedInput("empty lemma text".into()));
            }
            let lemma = Lemma {
                text: re.lemma,
                pos,
                lang,
            };

            let mut variants = Vec::new();
            for v in re.variants {
                if v == lemma.text {
                    return Err(DictError::VariantIsLemma {
                        lemma: lemma.clone(),
                        variant: v,
                    });
                }
                if !variants.contains(&v) {
                    variants.push(v);
                }
            }

            let mut senses = Vec::with_capacity(re.senses.len());
            let mut labels = HashSet::new();
            for (order_index, rs) in re.senses.into_iter().enumerate() {
                if !labels.insert(rs.id.clone()) {
                    return Err(DictError::DuplicateSenseLabel {
                        lemma: lemma.clone(),
                        label: rs.id,
                    });
                }
                let mut translations = Vec::with_capacity(rs.translations.len());
                for t in rs.translations {
                    if translations.contains(&t) {
                        return Err(DictError::DuplicateTranslation {
                            lemma: lemma.clone(),
                            label: rs.id,
                            word: t,
                        });
                    }
                    translations.push(t);
                }
                let mut meta = Vec::new();
                for m in rs.meta {
                    if !meta.contains(&m) {
                        meta.push(m);
                    }
                }
                let reference = match rs.reference {
                    None => None,
                    Some(rr) => {
                        let rpos = Pos::parse(&rr.pos).ok_or_else(|| DictError::UnknownPos {
                            text: rr.lemma.clone(),
                            pos: rr.pos.clone(),
                        })?;
                        Some(Reference {
                            lemma: rr.lemma,
                            pos: rpos,
                        })
                    }
                };
                if translations.is_empty() && reference.is_none() {
                    return Err(DictError::EmptySense {
                        lemma: lemma.clone(),
                        label: rs.id,
                    });
                }
                senses.push(SenseEntry {
                    id: SenseId {
                        label: rs.id,
                        order_index,
                    },
                    translations,
                    meta,
                    reference,
                });
            }

            let key = (lemma.text.clone(), lemma.pos, lemma.lang.clone());
            let idx = entries.len();
            if by_key.insert(key, idx).is_some() {
                return Err(DictError::DuplicateLemmaKey(lemma));
            }
            entries.push(DictEntry {
                lemma,
                variants,
                senses,
            });
        }

        Ok(Dictionary {
            source_lang,
            target_lang,
            entries,
            by_key,
        })
    }

    pub fn source_lang(&self) -> &LanguageTag {
        &self.source_lang
    }

    pub fn target_lang(&self) -> &LanguageTag {
        &self.target_lang
    }

    /// The other language of the pair.
    pub fn opposite(&self, lang: &LanguageTag) -> &LanguageTag {
        if lang == &self.source_lang {
            &self.target_lang
        } else {
            &self.source_lang
        }
    }

    pub fn entries(&self) -> &[DictEntry] {
        &self.entries
    }

    pub fn entry(&self, idx: usize) -> &DictEntry {
        &self.entries[idx]
    }

    pub fn lookup(&self, text: &str, pos: Pos, lang: &LanguageTag) -> Option<usize> {
        self.by_key
            .get(&(text.to_string(), pos, lang.clone()))
            .copied()
    }

    /// Senses of a lemma key; empty when the key is absent.
    pub fn senses(&self, text: &str, pos: Pos, lang: &LanguageTag) -> &[SenseEntry] {
        match self.lookup(text, pos, lang) {
            Some(idx) => &self.entries[idx].senses,
            None => &[],
        }
    }

    pub fn sense(&self, sr: SenseRef) -> Result<&SenseEntry, DictError> {
        self.entries
            .get(sr.entry)
            .and_then(|e| e.senses.get(sr.sense))
            .ok_or(DictError::UnknownSense {
                entry: sr.entry,
                sense: sr.sense,
            })
    }

    pub fn translations(&self, sr: SenseRef) -> Result<&[String], DictError> {
        Ok(&self.sense(sr)?.translations)
    }

    pub fn meta_words(&self, sr: SenseRef) -> Result<&[String], DictError> {
        Ok(&self.sense(sr)?.meta)
    }

    /// Follow a sense's cross-reference chain to a sense with no reference.
    /// Each hop lands on the target entry's first sense. Returns the final
    /// sense and the number of hops taken (0 when the sense has no ref).
    pub fn resolve_reference(&self, sr: SenseRef) -> Result<(SenseRef, usize), DictError> {
        let mut cur = sr;
        let mut hops = 0usize;
        let mut seen: HashSet<usize> = HashSet::new();
        seen.insert(sr.entry);
        loop {
            let sense = self.sense(cur)?;
            let Some(r) = &sense.reference else {
                return Ok((cur, hops));
            };
            let from = self.entries[cur.entry].lemma.clone();
            let lang = from.lang.clone();
            let Some(target) = self.lookup(&r.lemma, r.pos, &lang) else {
                return Err(DictError::DanglingReference {
                    from,
                    to: r.lemma.clone(),
                });
            };
            if !seen.insert(target) {
                return Err(DictError::ReferenceCycle(
                    self.entries[sr.entry].lemma.clone(),
                ));
            }
            if self.entries[target].senses.is_empty() {
                return Err(DictError::DanglingReference {
                    from,
                    to: r.lemma.clone(),
                });
            }
            cur = SenseRef {
                entry: target,
                sense: 0,
            };
            hops += 1;
        }
    }

    /// Render a sense as `lemma#pos#label`.
    pub fn sense_token(&self, sr: SenseRef) -> String {
        let e = &self.entries[sr.entry];
        let s = &e.senses[sr.sense];
        format!("{}#{}#{}", e.lemma.text, e.lemma.pos, s.id.label)
    }
}
