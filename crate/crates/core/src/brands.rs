//! Lexicon-based brand mention detection and campaign qualification.
//!
//! Detection is plain substring search over the lower-cased answer text,
//! with no word-boundary requirement. A brand's rank is the smallest byte
//! offset at which any of its patterns occurs; equal offsets fall back to
//! the canonical name.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::FilteredDataset;
use crate::model::{CampaignId, ItemSet, RankedList, RecordKey, ResponseRecord};

pub const DEFAULT_QUALIFICATION_THRESHOLD: f64 = 0.70;

/// Campaign-scoped map from lower-case search patterns to canonical brands.
#[derive(Debug, Clone, PartialEq)]
pub struct BrandLexicon {
    pub campaign: CampaignId,
    // canonical -> patterns, in canonical order
    brands: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub canonical: String,
    #[serde(default)]
    pub patterns: Vec<String>,
}

impl BrandLexicon {
    /// Builds a lexicon; an entry without patterns matches its lower-cased
    /// canonical name. Patterns are lower-cased on the way in.
    pub fn new(campaign: CampaignId, entries: Vec<LexiconEntry>) -> Result<Self> {
        let mut brands: BTreeMap<String, Vec<String>> = BTreeMap::new();
        let mut folded: HashMap<String, String> = HashMap::new();
        for entry in entries {
            let canonical = entry.canonical.trim().to_string();
            if canonical.is_empty() {
                return Err(Error::Lexicon(format!("{campaign}: empty canonical name")));
            }
            if let Some(prev) = folded.insert(canonical.to_lowercase(), canonical.clone()) {
                if prev != canonical {
                    return Err(Error::Lexicon(format!(
                        "{campaign}: canonical names {prev:?} and {canonical:?} collide after case-folding"
                    )));
                }
            }
            let patterns = if entry.patterns.is_empty() {
                vec![canonical.to_lowercase()]
            } else {
                entry.patterns
            };
            let slot = brands.entry(canonical.clone()).or_default();
            for p in patterns {
                let p = p.to_lowercase();
                if p.trim().is_empty() {
                    return Err(Error::Lexicon(format!(
                        "{campaign}: empty pattern for {canonical:?}"
                    )));
                }
                if !slot.contains(&p) {
                    slot.push(p);
                }
            }
        }
        Ok(BrandLexicon { campaign, brands })
    }

    /// One pattern per brand: its lower-cased name.
    pub fn from_names<I, S>(campaign: CampaignId, names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let entries = names
            .into_iter()
            .map(|n| LexiconEntry {
                canonical: n.into(),
                patterns: Vec::new(),
            })
            .collect();
        Self::new(campaign, entries)
    }

    pub fn len(&self) -> usize {
        self.brands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.brands.is_empty()
    }

    pub fn canonical_names(&self) -> impl Iterator<Item = &str> {
        self.brands.keys().map(String::as_str)
    }

    pub fn patterns(&self, canonical: &str) -> Option<&[String]> {
        self.brands.get(canonical).map(Vec::as_slice)
    }

    pub fn add_pattern(&mut self, canonical: &str, pattern: &str) -> Result<()> {
        let pattern = pattern.to_lowercase();
        if pattern.trim().is_empty() {
            return Err(Error::Lexicon("empty pattern".into()));
        }
        let slot = self
            .brands
            .get_mut(canonical)
            .ok_or_else(|| Error::Lexicon(format!("unknown brand {canonical:?}")))?;
        if !slot.contains(&pattern) {
            slot.push(pattern);
        }
        Ok(())
    }
}

/// Lexicons for every campaign of a dataset, keyed by campaign.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LexiconSet {
    pub lexicons: BTreeMap<CampaignId, BrandLexicon>,
}

impl LexiconSet {
    /// Parses `{ "<campaign>": [ {"canonical": .., "patterns": [..]}, .. ], .. }`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: BTreeMap<String, Vec<LexiconEntry>> =
            serde_json::from_str(text).map_err(|e| Error::Lexicon(e.to_string()))?;
        let mut lexicons = BTreeMap::new();
        for (name, entries) in raw {
            let campaign = CampaignId::new(&name);
            let lexicon = BrandLexicon::new(campaign.clone(), entries)?;
            if lexicons.insert(campaign, lexicon).is_some() {
                return Err(Error::Lexicon(format!("campaign {name:?} listed twice")));
            }
        }
        Ok(LexiconSet { lexicons })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let raw: BTreeMap<&str, Vec<LexiconEntry>> = self
            .lexicons
            .values()
            .map(|lex| {
                let entries = lex
                    .brands
                    .iter()
                    .map(|(c, p)| LexiconEntry {
                        canonical: c.clone(),
                        patterns: p.clone(),
                    })
                    .collect();
                (lex.campaign.display_name(), entries)
            })
            .collect();
        serde_json::to_string_pretty(&raw).expect("lexicon serializes")
    }

    pub fn insert(&mut self, lexicon: BrandLexicon) {
        self.lexicons.insert(lexicon.campaign.clone(), lexicon);
    }

    pub fn get(&self, campaign: &CampaignId) -> Option<&BrandLexicon> {
        self.lexicons.get(campaign)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DetectionResult {
    pub record_ref: Option<RecordKey>,
    /// Canonical brands by first-mention offset.
    pub brands_ordered: RankedList,
    pub brands_set: ItemSet,
    /// Byte offsets into the lower-cased text, parallel to `brands_ordered`.
    pub offsets: Vec<usize>,
}

impl DetectionResult {
    pub fn is_empty(&self) -> bool {
        self.brands_ordered.is_empty()
    }
}

pub fn detect_brands(text: &str, lexicon: &BrandLexicon) -> DetectionResult {
    if text.is_empty() {
        return DetectionResult::default();
    }
    let lowered = text.to_lowercase();
    let mut hits: Vec<(usize, &str)> = lexicon
        .brands
        .iter()
        .filter_map(|(canonical, patterns)| {
            patterns
                .iter()
                .filter_map(|p| lowered.find(p.as_str()))
                .min()
                .map(|offset| (offset, canonical.as_str()))
        })
        .collect();
    hits.sort_unstable();
    DetectionResult {
        record_ref: None,
        brands_ordered: RankedList::from_items(hits.iter().map(|(_, c)| *c)),
        brands_set: ItemSet::from_items(hits.iter().map(|(_, c)| *c)),
        offsets: hits.iter().map(|(o, _)| *o).collect(),
    }
}

pub fn detect_record(record: &ResponseRecord, lexicon: &BrandLexicon) -> DetectionResult {
    DetectionResult {
        record_ref: Some(record.key()),
        ..detect_brands(&record.answer_text, lexicon)
    }
}

/// Fraction of results with at least one detected brand.
pub fn detection_rate(results: &[DetectionResult]) -> Result<f64> {
    if results.is_empty() {
        return Err(Error::NoRecords);
    }
    let hits = results.iter().filter(|r| !r.is_empty()).count();
    Ok(hits as f64 / results.len() as f64)
}

/// Per-brand fraction of results mentioning that brand, for every brand of
/// the lexicon (undetected brands report 0).
pub fn brand_detection_rates(
    results: &[DetectionResult],
    lexicon: &BrandLexicon,
) -> Result<BTreeMap<String, f64>> {
    if results.is_empty() {
        return Err(Error::NoRecords);
    }
    let mut counts: BTreeMap<String, usize> = lexicon
        .canonical_names()
        .map(|c| (c.to_string(), 0))
        .collect();
    for r in results {
        for b in r.brands_set.iter() {
            *counts.entry(b.to_string()).or_default() += 1;
        }
    }
    let n = results.len() as f64;
    Ok(counts.into_iter().map(|(b, c)| (b, c as f64 / n)).collect())
}

/// Mean detection rate over all runs of each campaign that has a lexicon.
pub fn campaign_detection_rates(
    dataset: &FilteredDataset,
    lexicons: &LexiconSet,
) -> BTreeMap<CampaignId, f64> {
    let mut per_campaign: BTreeMap<CampaignId, (usize, usize)> = BTreeMap::new();
    for r in &dataset.records {
        let Some(lexicon) = lexicons.get(&r.prompt.campaign) else {
            continue;
        };
        let slot = per_campaign.entry(r.prompt.campaign.clone()).or_default();
        slot.1 += 1;
        if !detect_brands(&r.answer_text, lexicon).is_empty() {
            slot.0 += 1;
        }
    }
    per_campaign
        .into_iter()
        .map(|(c, (hits, n))| (c, hits as f64 / n as f64))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignQualification {
    pub campaign: String,
    pub rate: f64,
    pub qualified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QualificationReport {
    pub threshold: f64,
    pub campaigns: Vec<CampaignQualification>,
}

impl QualificationReport {
    pub fn is_qualified(&self, campaign: &CampaignId) -> bool {
        self.campaigns
            .iter()
            .any(|c| c.qualified && CampaignId::new(&c.campaign) == *campaign)
    }

    pub fn disqualified(&self) -> impl Iterator<Item = &CampaignQualification> {
        self.campaigns.iter().filter(|c| !c.qualified)
    }
}

/// A campaign qualifies when its rate is at least the threshold.
pub fn qualify_campaigns(
    rates: &BTreeMap<CampaignId, f64>,
    threshold: f64,
) -> Result<QualificationReport> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::InvalidThreshold(threshold));
    }
    Ok(QualificationReport {
        threshold,
        campaigns: rates
            .iter()
            .map(|(c, &rate)| CampaignQualification {
                campaign: c.display_name().to_string(),
                rate,
                qualified: rate >= threshold,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn telecom() -> BrandLexicon {
        BrandLexicon::new(
            CampaignId::new("Telecommunications"),
            vec![
                LexiconEntry {
                    canonical: "Migros".into(),
                    patterns: vec!["m-budget".into(), "migros".into()],
                },
                LexiconEntry {
                    canonical: "Salt".into(),
                    patterns: vec!["salt".into()],
                },
                LexiconEntry {
                    canonical: "Sunrise".into(),
                    patterns: vec![],
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn two_patterns_one_brand() {
        let r = detect_brands("Ich empfehle M-Budget von Migros", &telecom());
        assert_eq!(r.brands_ordered.as_slice(), &["Migros"]);
        assert_eq!(r.offsets, vec![13]);
    }

    #[test]
    fn empty_text_detects_nothing() {
        assert_eq!(detect_brands("", &telecom()), DetectionResult::default());
    }

    #[test]
    fn first_mention_order() {
        let r = detect_brands("salt und sunrise, dann nochmals Salt", &telecom());
        assert_eq!(r.brands_ordered.as_slice(), &["Salt", "Sunrise"]);
        assert_eq!(r.offsets, vec![0, 9]);
    }

    #[test]
    fn equal_offsets_break_on_name() {
        let lex = BrandLexicon::new(
            CampaignId::new("x"),
            vec![
                LexiconEntry {
                    canonical: "Zeta".into(),
                    patterns: vec!["net".into()],
                },
                LexiconEntry {
                    canonical: "Alpha".into(),
                    patterns: vec!["netplus".into()],
                },
            ],
        )
        .unwrap();
        let r = detect_brands("netplus", &lex);
        assert_eq!(r.brands_ordered.as_slice(), &["Alpha", "Zeta"]);
    }

    #[test]
    fn lexicon_rejects_casefold_collision_and_empty_pattern() {
        let dup = BrandLexicon::from_names(CampaignId::new("x"), ["Salt", "SALT"]);
        assert!(dup.is_err());
        let empty = BrandLexicon::new(
            CampaignId::new("x"),
            vec![LexiconEntry {
                canonical: "A".into(),
                patterns: vec![" ".into()],
            }],
        );
        assert!(empty.is_err());
    }

    fn results(hits: usize, total: usize) -> Vec<DetectionResult> {
        let lex = telecom();
        (0..total)
            .map(|i| detect_brands(if i < hits { "salt" } else { "nothing" }, &lex))
            .collect()
    }

    #[test]
    fn detection_rate_examples() {
        assert_eq!(detection_rate(&results(7, 10)).unwrap(), 0.7);
        assert_eq!(detection_rate(&results(0, 10)).unwrap(), 0.0);
        assert!(matches!(detection_rate(&[]), Err(Error::NoRecords)));
    }

    #[test]
    fn qualification_threshold_is_inclusive() {
        let rates = BTreeMap::from([
            (CampaignId::new("Real Estate Sales"), 0.536),
            (CampaignId::new("X"), 0.70),
            (CampaignId::new("Y"), 1.0),
        ]);
        let report = qualify_campaigns(&rates, DEFAULT_QUALIFICATION_THRESHOLD).unwrap();
        assert!(!report.is_qualified(&CampaignId::new("real estate sales")));
        assert!(report.is_qualified(&CampaignId::new("X")));
        assert!(report.is_qualified(&CampaignId::new("Y")));
        let dis: Vec<_> = report.disqualified().map(|c| c.campaign.as_str()).collect();
        assert_eq!(dis, vec!["Real Estate Sales"]);
        assert!(qualify_campaigns(&rates, 0.0).is_err());
        assert!(qualify_campaigns(&rates, 1.5).is_err());
    }

    #[test]
    fn shipped_lexicons_load() {
        let set = LexiconSet::from_json(include_str!("../fixtures/lexicons.json")).unwrap();
        let sizes: BTreeMap<&str, usize> = set
            .lexicons
            .iter()
            .map(|(c, l)| (c.display_name(), l.len()))
            .collect();
        assert_eq!(sizes["Telecommunications"], 51);
        assert_eq!(sizes["Sporting Goods"], 43);
        assert_eq!(sizes["Consumer Electronics"], 47);
        assert_eq!(sizes["Real Estate Sales"], 32);
        let telecom = set.get(&CampaignId::new("telecommunications")).unwrap();
        let r = detect_brands("Das M-Budget Abo", telecom);
        assert_eq!(r.brands_ordered.as_slice(), &["Migros"]);
        let again = LexiconSet::from_json(&set.to_json()).unwrap();
        assert_eq!(again, set);
    }

    proptest! {
        #[test]
        fn case_insensitive(text in "[a-zA-Z ,.]{0,60}") {
            let lex = telecom();
            let a = detect_brands(&text, &lex);
            let b = detect_brands(&text.to_uppercase(), &lex);
            prop_assert_eq!(a.brands_ordered, b.brands_ordered);
        }

        #[test]
        fn extra_pattern_never_demotes(text in "(salt|sunrise|migros|abc| )*", pat in "[a-z]{1,4}") {
            let lex = telecom();
            let before = detect_brands(&text, &lex);
            for brand in before.brands_ordered.as_slice() {
                let mut more = lex.clone();
                more.add_pattern(brand, &pat).unwrap();
                let after = detect_brands(&text, &more);
                let pos = |r: &DetectionResult| r.brands_ordered.as_slice().iter().position(|b2| b2 == brand).unwrap();
                let off = |r: &DetectionResult| r.offsets[pos(r)];
                prop_assert!(off(&after) <= off(&before));
                prop_assert_eq!(&after.brands_set, &before.brands_set);
            }
        }

        #[test]
        fn rate_permutation_invariant(mask in prop::collection::vec(any::<bool>(), 1..40), seed in any::<u64>()) {
            let lex = telecom();
            let mut rs: Vec<DetectionResult> = mask.iter().map(|&m| detect_brands(if m { "salt" } else { "" }, &lex)).collect();
            let a = detection_rate(&rs).unwrap();
            let len = rs.len();
            rs.rotate_left((seed as usize) % len);
            rs.reverse();
            prop_assert_eq!(a, detection_rate(&rs).unwrap());
        }
    }
}
