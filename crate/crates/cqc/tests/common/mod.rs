//! Shared fixtures and seeded generators for the integration suites.
// not every target uses every helper
#![allow(dead_code)]

use cqc::{parse_dictionary, Dictionary, GoldItem, LanguageTag, Pos};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::fs;
use std::path::PathBuf;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn load_fixture(name: &str) -> Dictionary {
    let text = fs::read_to_string(fixture_path(name)).expect("fixture readable");
    parse_dictionary(&text).expect("fixture parses")
}

fn dict_json(entries: Vec<serde_json::Value>) -> Dictionary {
    let doc = json!({
        "source_lang": "en",
        "target_lang": "it",
        "entries": entries,
    });
    parse_dictionary(&doc.to_string()).expect("generated dictionary is valid")
}

/// Seeded random bilingual dictionary. `per_side` entries per language with
/// 1..=2 senses each, so the graph has at most `4 * per_side` nodes.
/// `density` is the probability of each possible translation; senses that
/// end up empty get an unresolvable filler word. Meta words appear with a
/// quarter of the translation density.
pub fn random_dict(seed: u64, per_side: usize, density: f64) -> Dictionary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let en: Vec<String> = (0..per_side).map(|i| format!("a{i}")).collect();
    let it: Vec<String> = (0..per_side).map(|i| format!("b{i}")).collect();
    let mut filler = 0usize;
    let mut entries = Vec::new();
    for (names, lang, others) in [(&en, "en", &it), (&it, "it", &en)] {
        for name in names.iter() {
            let mut senses = Vec::new();
            for label in 1..=rng.gen_range(1..=2usize) {
                let mut translations: Vec<String> = others
                    .iter()
                    .filter(|_| rng.gen_bool(density))
                    .cloned()
                    .collect();
                if translations.is_empty() {
                    translations.push(format!("x{filler}"));
                    filler += 1;
                }
                let meta: Vec<String> = en
                    .iter()
                    .chain(it.iter())
                    .filter(|m| *m != name && rng.gen_bool(density / 4.0))
                    .cloned()
                    .collect();
                senses.push(json!({
                    "id": label.to_string(),
                    "translations": translations,
                    "meta": meta,
                    "ref": null,
                }));
            }
            entries.push(json!({
                "lemma": name, "pos": "n", "lang": lang, "senses": senses,
            }));
        }
    }
    dict_json(entries)
}

/// Planted-truth dictionary: every English `a{i}` translates `b{i}` and the
/// Italian side plants the correct back-translation in sense "1" with two
/// noise senses of two random targets each. `break_ratio` of the
/// back-translations are replaced by an unresolvable word so the planted
/// evidence disappears and the item can only be recovered by backoff.
pub struct Planted {
    pub dict: Dictionary,
    pub gold: Vec<GoldItem>,
}

pub fn planted_dict(seed: u64, n: usize, break_ratio: f64) -> Planted {
    assert!(n >= 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::new();
    for i in 0..n {
        entries.push(json!({
            "lemma": format!("a{i}"), "pos": "n", "lang": "en",
            "senses": [{"id": "1", "translations": [format!("b{i}")], "ref": null}],
        }));
    }
    for i in 0..n {
        let planted = if rng.gen_bool(break_ratio) {
            format!("broken{i}")
        } else {
            format!("a{i}")
        };
        let mut noise = || {
            let r1 = loop {
                let r = rng.gen_range(0..n);
                if r != i {
                    break r;
                }
            };
            let r2 = loop {
                let r = rng.gen_range(0..n);
                if r != i && r != r1 {
                    break r;
                }
            };
            vec![format!("a{r1}"), format!("a{r2}")]
        };
        let n2 = noise();
        let n3 = noise();
        entries.push(json!({
            "lemma": format!("b{i}"), "pos": "n", "lang": "it",
            "senses": [
                {"id": "1", "translations": [planted], "ref": null},
                {"id": "2", "translations": n2, "ref": null},
                {"id": "3", "translations": n3, "ref": null},
            ],
        }));
    }
    let gold = (0..n)
        .map(|i| GoldItem {
            lang: LanguageTag::new("en"),
            lemma: format!("a{i}"),
            pos: Pos::Noun,
            sense_label: "1".into(),
            word: format!("b{i}"),
            gold: Some("1".into()),
        })
        .collect();
    Planted {
        dict: dict_json(entries),
        gold,
    }
}
