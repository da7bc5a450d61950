//! Domain types shared by every stage of the pipeline.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use chrono::{DateTime, NaiveDate, Timelike, Utc};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::similarity::SimilarityValue;

/// An AI search product.
///
/// Labels compare case-insensitively; unknown products are kept as
/// lower-cased `Other` labels. Google AI Overviews only exists as
/// `Other("google-aio")`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EngineId {
    ChatGpt,
    Gemini,
    GoogleAiMode,
    Perplexity,
    Simulated,
    Other(String),
}

pub const GOOGLE_AIO_LABEL: &str = "google-aio";

impl EngineId {
    pub fn parse(label: &str) -> Self {
        let folded: String = label
            .trim()
            .to_lowercase()
            .chars()
            .map(|c| if c == '_' || c == ' ' { '-' } else { c })
            .collect();
        match folded.as_str() {
            "chatgpt" | "chat-gpt" | "openai" => EngineId::ChatGpt,
            "gemini" => EngineId::Gemini,
            "google-ai-mode" | "googleaimode" | "ai-mode" | "aimode" => EngineId::GoogleAiMode,
            "perplexity" => EngineId::Perplexity,
            "simulated" => EngineId::Simulated,
            "google-aio" | "googleaio" | "google-ai-overviews" | "aio" => {
                EngineId::Other(GOOGLE_AIO_LABEL.to_string())
            }
            _ => EngineId::Other(folded),
        }
    }

    pub fn label(&self) -> &str {
        match self {
            EngineId::ChatGpt => "ChatGPT",
            EngineId::Gemini => "Gemini",
            EngineId::GoogleAiMode => "Google AI Mode",
            EngineId::Perplexity => "Perplexity",
            EngineId::Simulated => "Simulated",
            EngineId::Other(label) => label,
        }
    }

    pub fn is_google_aio(&self) -> bool {
        matches!(self, EngineId::Other(l) if l == GOOGLE_AIO_LABEL)
    }
}

impl fmt::Display for EngineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for EngineId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for EngineId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        Ok(EngineId::parse(&raw))
    }
}

/// A market vertical. Identity is the case-folded key; the display name is
/// whatever the input spelled.
#[derive(Debug, Clone)]
pub struct CampaignId {
    key: String,
    display_name: String,
}

impl CampaignId {
    pub fn new(name: &str) -> Self {
        let display_name = name.trim().to_string();
        CampaignId {
            key: display_name.to_lowercase(),
            display_name,
        }
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn display_name(&self) -> &str {
        &self.display_name
    }
}

impl PartialEq for CampaignId {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}
impl Eq for CampaignId {}
impl Hash for CampaignId {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state)
    }
}
impl PartialOrd for CampaignId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for CampaignId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl fmt::Display for CampaignId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_name)
    }
}

/// One prompt of a campaign. Identity is `(campaign, index)`.
#[derive(Debug, Clone)]
pub struct PromptId {
    pub campaign: CampaignId,
    pub index: u32,
    pub text: String,
}

impl PromptId {
    pub fn new(campaign: CampaignId, index: u32, text: impl Into<String>) -> Self {
        PromptId {
            campaign,
            index,
            text: text.into(),
        }
    }
}

impl PartialEq for PromptId {
    fn eq(&self, other: &Self) -> bool {
        self.campaign == other.campaign && self.index == other.index
    }
}
impl Eq for PromptId {}
impl Hash for PromptId {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.campaign.hash(state);
        self.index.hash(state);
    }
}
impl PartialOrd for PromptId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for PromptId {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.campaign, self.index).cmp(&(&other.campaign, other.index))
    }
}

impl fmt::Display for PromptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.campaign, self.index)
    }
}

/// One engine answer to one prompt at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseRecord {
    pub engine: EngineId,
    pub prompt: PromptId,
    pub timestamp: DateTime<Utc>,
    pub run_index: u32,
    pub answer_text: String,
    /// Cited URLs in emission order; position 0 is rank 1.
    pub citations: Vec<String>,
}

impl ResponseRecord {
    pub fn key(&self) -> RecordKey {
        RecordKey {
            engine: self.engine.clone(),
            campaign: self.prompt.campaign.key().to_string(),
            prompt_index: self.prompt.index,
            timestamp: self.timestamp,
            run_index: self.run_index,
        }
    }

    pub fn day(&self) -> NaiveDate {
        self.timestamp.date_naive()
    }

    /// Canonical ordering used for every deterministic output.
    pub fn sort_key(&self) -> (&CampaignId, &EngineId, u32, DateTime<Utc>, u32) {
        (
            &self.prompt.campaign,
            &self.engine,
            self.prompt.index,
            self.timestamp,
            self.run_index,
        )
    }

    /// Normalized cited domains in rank order, first occurrence kept.
    pub fn source_list(&self) -> RankedList {
        RankedList::from_items(
            self.citations
                .iter()
                .filter_map(|u| crate::ingest::normalize_url(u).ok())
                .map(NormalizedDomain::into_string),
        )
    }

    pub fn source_set(&self) -> ItemSet {
        self.source_list().to_set()
    }
}

/// Stable identity of a record: `(engine, campaign, prompt, timestamp, run)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RecordKey {
    pub engine: EngineId,
    pub campaign: String,
    pub prompt_index: u32,
    pub timestamp: DateTime<Utc>,
    pub run_index: u32,
}

impl fmt::Display for RecordKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}#{}@{}/run{}",
            self.engine,
            self.campaign,
            self.prompt_index,
            self.timestamp
                .to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            self.run_index
        )
    }
}

/// Lower-case host without scheme, port, path or a leading `www.`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NormalizedDomain(String);

impl NormalizedDomain {
    /// Accepts an already-normalized host; anything else goes through
    /// [`crate::ingest::normalize_url`].
    pub fn new(value: &str) -> Option<Self> {
        crate::ingest::normalize_url(value).ok()
    }

    pub(crate) fn from_normalized(value: String) -> Self {
        NormalizedDomain(value)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for NormalizedDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Unordered, duplicate-free item collection (domains or brand names).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ItemSet(BTreeSet<String>);

impl ItemSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_items<I, S>(items: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        ItemSet(
            items
                .into_iter()
                .map(Into::into)
                .filter(|s: &String| !s.is_empty())
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, item: &str) -> bool {
        self.0.contains(item)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn intersection_len(&self, other: &ItemSet) -> usize {
        self.0.intersection(&other.0).count()
    }

    pub fn union_with(&mut self, other: &ItemSet) {
        self.0.extend(other.0.iter().cloned());
    }
}

/// Ordered, duplicate-free list; the first occurrence keeps its rank.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RankedList(Vec<String>);

impl RankedList {
    pub fn from_items<I, S>(items: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for item in items {
            let item: String = item.into();
            if !item.is_empty() && seen.insert(item.clone()) {
                out.push(item);
            }
        }
        RankedList(out)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[String] {
        &self.0
    }

    pub fn to_set(&self) -> ItemSet {
        ItemSet::from_items(self.0.iter().cloned())
    }
}

/// Variant of the truncated RBO sum. Only the minimum bound is implemented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[non_exhaustive]
pub enum RboVariant {
    #[default]
    MinBound,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RboParams {
    p: f64,
    pub variant: RboVariant,
}

pub const DEFAULT_PERSISTENCE: f64 = 0.9;

impl RboParams {
    pub fn new(p: f64) -> Result<Self> {
        if p > 0.0 && p < 1.0 {
            Ok(RboParams {
                p,
                variant: RboVariant::MinBound,
            })
        } else {
            Err(Error::InvalidPersistence(p))
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

impl Default for RboParams {
    fn default() -> Self {
        RboParams {
            p: DEFAULT_PERSISTENCE,
            variant: RboVariant::MinBound,
        }
    }
}

/// Whether a similarity compares cited domains or detected brands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ItemKind {
    Source,
    Brand,
}

impl ItemKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ItemKind::Source => "source",
            ItemKind::Brand => "brand",
        }
    }
}

impl fmt::Display for ItemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Similarity of one record pair. Both metrics are excluded together.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairOutcome {
    Scored { jaccard: f64, rbo: f64 },
    Excluded,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairScore {
    pub outcome: PairOutcome,
    pub delta_t: chrono::Duration,
}

impl PairScore {
    pub fn jaccard(&self) -> SimilarityValue {
        match self.outcome {
            PairOutcome::Scored { jaccard, .. } => SimilarityValue::Value(jaccard),
            PairOutcome::Excluded => SimilarityValue::Excluded,
        }
    }

    pub fn rbo(&self) -> SimilarityValue {
        match self.outcome {
            PairOutcome::Scored { rbo, .. } => SimilarityValue::Value(rbo),
            PairOutcome::Excluded => SimilarityValue::Excluded,
        }
    }

    pub fn is_excluded(&self) -> bool {
        self.outcome == PairOutcome::Excluded
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupKey {
    pub campaign: CampaignId,
    pub engine: EngineId,
    pub prompt: PromptId,
    pub kind: ItemKind,
}

impl GroupKey {
    pub fn of(record: &ResponseRecord, kind: ItemKind) -> Self {
        GroupKey {
            campaign: record.prompt.campaign.clone(),
            engine: record.engine.clone(),
            prompt: record.prompt.clone(),
            kind,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    RunIndexBelowOne,
    PromptIndexBelowOne,
    EmptyEngineLabel,
    EmptyCampaign,
    EmptyPromptText,
    SubSecondTimestamp,
    Duplicate { first: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RunIndexBelowOne => f.write_str("run_index < 1"),
            Violation::PromptIndexBelowOne => f.write_str("prompt_index < 1"),
            Violation::EmptyEngineLabel => f.write_str("empty engine label"),
            Violation::EmptyCampaign => f.write_str("empty campaign"),
            Violation::EmptyPromptText => f.write_str("empty prompt text"),
            Violation::SubSecondTimestamp => f.write_str("timestamp has sub-second precision"),
            Violation::Duplicate { first } => write!(
                f,
                "duplicate (engine, prompt, timestamp, run_index) of record {first}"
            ),
        }
    }
}

/// Violations found for one record; empty means valid.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the per-record invariants. Never fails; it reports.
pub fn validate_record(record: &ResponseRecord) -> ValidationReport {
    let mut violations = Vec::new();
    if record.engine.label().trim().is_empty() {
        violations.push(Violation::EmptyEngineLabel);
    }
    if record.prompt.campaign.key().is_empty() {
        violations.push(Violation::EmptyCampaign);
    }
    if record.prompt.index < 1 {
        violations.push(Violation::PromptIndexBelowOne);
    }
    if record.prompt.text.trim().is_empty() {
        violations.push(Violation::EmptyPromptText);
    }
    if record.run_index < 1 {
        violations.push(Violation::RunIndexBelowOne);
    }
    if record.timestamp.nanosecond() != 0 {
        violations.push(Violation::SubSecondTimestamp);
    }
    ValidationReport { violations }
}

/// Validates a batch, additionally flagging later duplicates of a
/// `(engine, prompt, timestamp, run_index)` key.
pub fn validate_records(records: &[ResponseRecord]) -> Vec<ValidationReport> {
    let mut first_seen: HashMap<RecordKey, usize> = HashMap::new();
    records
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut report = validate_record(r);
            match first_seen.get(&r.key()) {
                Some(&first) => report.violations.push(Violation::Duplicate { first }),
                None => {
                    first_seen.insert(r.key(), i);
                }
            }
            report
        })
        .collect()
}
