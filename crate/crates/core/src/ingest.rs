//! Line-delimited log parsing, URL normalization and data-quality filters.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;

use chrono::{DateTime, NaiveDate, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    CampaignId, EngineId, NormalizedDomain, PromptId, ResponseRecord, GOOGLE_AIO_LABEL,
};

pub const CDN_ARTIFACT_DOMAIN: &str = "images.openai.com";

/// Wire shape of one log line.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireRecord {
    engine: String,
    campaign: String,
    prompt_index: u32,
    prompt_text: String,
    timestamp: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    run_index: Option<u32>,
    #[serde(default)]
    answer_text: String,
    #[serde(default)]
    citations: Vec<String>,
}

/// One line that could not be turned into a record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineError {
    /// 1-based line number in the stream.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for LineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, Default)]
pub struct ParsedLog {
    pub records: Vec<ResponseRecord>,
    pub errors: Vec<LineError>,
}

impl ParsedLog {
    pub fn extend(&mut self, other: ParsedLog) {
        self.records.extend(other.records);
        self.errors.extend(other.errors);
    }
}

/// Parses one record per non-blank line. Malformed lines are reported, not
/// dropped silently; only a failing reader is fatal.
///
/// Records without `run_index` are numbered by timestamp order within their
/// `(engine, prompt, calendar day)`, after any explicit indices present in
/// that bucket.
pub fn parse_log<R: BufRead>(mut reader: R) -> Result<ParsedLog> {
    let mut out = ParsedLog::default();
    let mut pending: Vec<bool> = Vec::new();
    let mut buf = Vec::new();
    let mut line_no = 0;
    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        line_no += 1;
        let line = match std::str::from_utf8(&buf) {
            Ok(s) => s.trim(),
            Err(e) => {
                out.errors.push(LineError {
                    line: line_no,
                    message: format!("invalid UTF-8: {e}"),
                });
                continue;
            }
        };
        if line.is_empty() {
            continue;
        }
        match parse_line(line) {
            Ok((record, explicit_run)) => {
                out.records.push(record);
                pending.push(!explicit_run);
            }
            Err(message) => out.errors.push(LineError {
                line: line_no,
                message,
            }),
        }
    }
    assign_run_indices(&mut out.records, &pending);
    Ok(out)
}

pub fn parse_log_file(path: &Path) -> Result<ParsedLog> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_log(std::io::BufReader::new(file)).map_err(|e| match e {
        Error::Stream(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

fn parse_line(line: &str) -> std::result::Result<(ResponseRecord, bool), String> {
    let wire: WireRecord = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let timestamp = DateTime::parse_from_rfc3339(&wire.timestamp)
        .map_err(|e| format!("bad timestamp {:?}: {e}", wire.timestamp))?
        .with_timezone(&Utc);
    if wire.engine.trim().is_empty() {
        return Err("empty engine label".to_string());
    }
    let record = ResponseRecord {
        engine: EngineId::parse(&wire.engine),
        prompt: PromptId::new(
            CampaignId::new(&wire.campaign),
            wire.prompt_index,
            wire.prompt_text,
        ),
        timestamp,
        run_index: wire.run_index.unwrap_or(0),
        answer_text: wire.answer_text,
        citations: wire.citations,
    };
    Ok((record, wire.run_index.is_some()))
}

fn assign_run_indices(records: &mut [ResponseRecord], pending: &[bool]) {
    type Bucket = (EngineId, PromptId, NaiveDate);
    let mut taken: HashMap<Bucket, BTreeSet<u32>> = HashMap::new();
    let mut waiting: BTreeMap<Bucket, Vec<usize>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        let bucket = (r.engine.clone(), r.prompt.clone(), r.day());
        if pending[i] {
            waiting.entry(bucket).or_default().push(i);
        } else {
            taken.entry(bucket).or_default().insert(r.run_index);
        }
    }
    for (bucket, mut idx) in waiting {
        idx.sort_by_key(|&i| (records[i].timestamp, i));
        let used = taken.remove(&bucket).unwrap_or_default();
        let mut next = 1u32;
        for i in idx {
            while used.contains(&next) {
                next += 1;
            }
            records[i].run_index = next;
            next += 1;
        }
    }
}

/// Serializes one record as a log line (without the trailing newline).
pub fn record_to_line(record: &ResponseRecord) -> String {
    let wire = WireRecord {
        engine: record.engine.label().to_string(),
        campaign: record.prompt.campaign.display_name().to_string(),
        prompt_index: record.prompt.index,
        prompt_text: record.prompt.text.clone(),
        timestamp: record.timestamp.to_rfc3339_opts(SecondsFormat::Secs, true),
        run_index: Some(record.run_index),
        answer_text: record.answer_text.clone(),
        citations: record.citations.clone(),
    };
    serde_json::to_string(&wire).expect("wire record serializes")
}

pub fn write_records<W: Write>(mut w: W, records: &[ResponseRecord]) -> std::io::Result<()> {
    for r in records {
        writeln!(w, "{}", record_to_line(r))?;
    }
    w.flush()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rejected;

impl fmt::Display for Rejected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("no parsable host")
    }
}

/// Reduces a URL to its lower-case host, without scheme, port, path, query
/// and leading `www.` labels. Strings without a parsable domain host are
/// rejected; scheme-less inputs like `example.com/x` are accepted.
pub fn normalize_url(raw: &str) -> std::result::Result<NormalizedDomain, Rejected> {
    let raw = raw.trim();
    if raw.is_empty() {
        return Err(Rejected);
    }
    let parsed = if raw.contains("://") {
        url::Url::parse(raw)
    } else {
        url::Url::parse(&format!("http://{raw}"))
    }
    .map_err(|_| Rejected)?;
    let host = match parsed.host() {
        Some(url::Host::Domain(d)) => d.to_lowercase(),
        Some(url::Host::Ipv4(ip)) => ip.to_string(),
        _ => return Err(Rejected),
    };
    let host = host.trim_end_matches('.');
    let mut host = host;
    while let Some(rest) = host.strip_prefix("www.") {
        host = rest;
    }
    if host.is_empty() || !host.contains('.') || host.starts_with('.') {
        return Err(Rejected);
    }
    Ok(NormalizedDomain::from_normalized(host.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DateWindow {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl DateWindow {
    pub fn contains(&self, day: NaiveDate) -> bool {
        self.start <= day && day <= self.end
    }
}

/// Record- and citation-level filters applied before any analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IngestConfig {
    #[serde(default)]
    pub date_window: Option<DateWindow>,
    #[serde(default)]
    pub excluded_dates: BTreeSet<NaiveDate>,
    #[serde(default = "default_blocked_domains")]
    pub blocked_domains: BTreeSet<String>,
    #[serde(default = "default_excluded_engines")]
    pub excluded_engines: BTreeSet<String>,
    /// Campaign names dropped entirely (case-insensitive).
    #[serde(default)]
    pub excluded_campaigns: BTreeSet<String>,
}

fn default_blocked_domains() -> BTreeSet<String> {
    BTreeSet::from([CDN_ARTIFACT_DOMAIN.to_string()])
}

fn default_excluded_engines() -> BTreeSet<String> {
    BTreeSet::from([GOOGLE_AIO_LABEL.to_string()])
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            date_window: None,
            excluded_dates: BTreeSet::new(),
            blocked_domains: default_blocked_domains(),
            excluded_engines: default_excluded_engines(),
            excluded_campaigns: BTreeSet::new(),
        }
    }
}

impl IngestConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: IngestConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(w) = self.date_window {
            if w.start > w.end {
                return Err(Error::Config(format!(
                    "date_window.start {} is after date_window.end {}",
                    w.start, w.end
                )));
            }
        }
        for d in &self.blocked_domains {
            if normalize_url(d).is_err() {
                return Err(Error::Config(format!("blocked domain {d:?} is not a host")));
            }
        }
        Ok(())
    }

    fn blocked(&self) -> BTreeSet<NormalizedDomain> {
        self.blocked_domains
            .iter()
            .filter_map(|d| normalize_url(d).ok())
            .collect()
    }

    fn engine_excluded(&self, engine: &EngineId) -> bool {
        self.excluded_engines
            .iter()
            .any(|label| EngineId::parse(label) == *engine)
    }

    fn campaign_excluded(&self, campaign: &CampaignId) -> bool {
        self.excluded_campaigns
            .iter()
            .any(|c| CampaignId::new(c) == *campaign)
    }
}

/// Per-filter drop counters. Record-level counters plus the surviving count
/// always add up to the input count.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct DropCounts {
    pub excluded_engines: usize,
    pub excluded_campaigns: usize,
    pub outside_window: usize,
    pub excluded_dates: usize,
    /// Citations removed because their domain is blocked (records kept).
    pub blocked_citations: usize,
    /// Citations removed because they have no parsable host (records kept).
    pub malformed_citations: usize,
}

impl DropCounts {
    pub fn dropped_records(&self) -> usize {
        self.excluded_engines + self.excluded_campaigns + self.outside_window + self.excluded_dates
    }
}

/// Records that survived [`apply_filters`], in canonical order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FilteredDataset {
    pub records: Vec<ResponseRecord>,
    pub drops: DropCounts,
}

impl FilteredDataset {
    /// Wraps already-clean records without filtering them.
    pub fn from_records(mut records: Vec<ResponseRecord>) -> Self {
        sort_canonical(&mut records);
        FilteredDataset {
            records,
            drops: DropCounts::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn campaigns(&self) -> BTreeSet<CampaignId> {
        self.records
            .iter()
            .map(|r| r.prompt.campaign.clone())
            .collect()
    }
}

fn sort_canonical(records: &mut [ResponseRecord]) {
    records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

pub fn apply_filters(records: Vec<ResponseRecord>, cfg: &IngestConfig) -> FilteredDataset {
    let blocked = cfg.blocked();
    let mut drops = DropCounts::default();
    let mut kept = Vec::with_capacity(records.len());
    for mut r in records {
        if cfg.engine_excluded(&r.engine) {
            drops.excluded_engines += 1;
            continue;
        }
        if cfg.campaign_excluded(&r.prompt.campaign) {
            drops.excluded_campaigns += 1;
            continue;
        }
        let day = r.day();
        if cfg.date_window.is_some_and(|w| !w.contains(day)) {
            drops.outside_window += 1;
            continue;
        }
        if cfg.excluded_dates.contains(&day) {
            drops.excluded_dates += 1;
            continue;
        }
        r.citations.retain(|url| match normalize_url(url) {
            Ok(domain) if blocked.contains(&domain) => {
                drops.blocked_citations += 1;
                false
            }
            Ok(_) => true,
            Err(Rejected) => {
                drops.malformed_citations += 1;
                false
            }
        });
        kept.push(r);
    }
    sort_canonical(&mut kept);
    FilteredDataset {
        records: kept,
        drops,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CampaignCoverage {
    /// Distinct prompt indices observed.
    pub queries: usize,
    /// Distinct calendar days with at least one record, any engine.
    pub days: usize,
    pub days_by_engine: BTreeMap<EngineId, usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoverageTable {
    pub campaigns: BTreeMap<CampaignId, CampaignCoverage>,
}

impl CoverageTable {
    pub fn is_empty(&self) -> bool {
        self.campaigns.is_empty()
    }

    pub fn engines(&self) -> BTreeSet<EngineId> {
        self.campaigns
            .values()
            .flat_map(|c| c.days_by_engine.keys().cloned())
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let engines: Vec<EngineId> = self.engines().into_iter().collect();
        let mut out = String::from("campaign,queries,days");
        for e in &engines {
            out.push(',');
            out.push_str(e.label());
        }
        out.push('\n');
        for (campaign, cov) in &self.campaigns {
            out.push_str(&format!("{},{},{}", campaign, cov.queries, cov.days));
            for e in &engines {
                out.push_str(&format!(
                    ",{}",
                    cov.days_by_engine.get(e).copied().unwrap_or(0)
                ));
            }
            out.push('\n');
        }
        out
    }
}

/// Distinct collection days per campaign×engine.
pub fn coverage_table(dataset: &FilteredDataset) -> CoverageTable {
    let mut queries: BTreeMap<CampaignId, BTreeSet<u32>> = BTreeMap::new();
    let mut days: BTreeMap<CampaignId, BTreeSet<NaiveDate>> = BTreeMap::new();
    let mut cells: BTreeMap<(CampaignId, EngineId), BTreeSet<NaiveDate>> = BTreeMap::new();
    for r in &dataset.records {
        let c = r.prompt.campaign.clone();
        queries.entry(c.clone()).or_default().insert(r.prompt.index);
        days.entry(c.clone()).or_default().insert(r.day());
        cells
            .entry((c, r.engine.clone()))
            .or_default()
            .insert(r.day());
    }
    let mut table = CoverageTable::default();
    for (campaign, q) in queries {
        let cov = table.campaigns.entry(campaign.clone()).or_default();
        cov.queries = q.len();
        cov.days = days[&campaign].len();
    }
    for ((campaign, engine), d) in cells {
        table
            .campaigns
            .get_mut(&campaign)
            .expect("campaign present")
            .days_by_engine
            .insert(engine, d.len());
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::record;
    use proptest::prelude::*;

    const LINE: &str = r#"{"engine":"ChatGPT","campaign":"Telecom","prompt_index":1,"prompt_text":"Welcher Anbieter?","timestamp":"2026-01-24T08:00:00+01:00","answer_text":"Swisscom","citations":["https://www.swisscom.ch/de"]}"#;

    #[test]
    fn parses_three_valid_lines() {
        let input = format!("{LINE}\n{LINE}\n\n{LINE}\n");
        let parsed = parse_log(input.as_bytes()).unwrap();
        assert_eq!(parsed.records.len(), 3);
        assert!(parsed.errors.is_empty());
        // converted to UTC on ingest
        assert_eq!(
            parsed.records[0]
                .timestamp
                .to_rfc3339_opts(SecondsFormat::Secs, true),
            "2026-01-24T07:00:00Z"
        );
        // same bucket, no explicit run index: numbered 1..=3
        let runs: Vec<u32> = parsed.records.iter().map(|r| r.run_index).collect();
        assert_eq!(runs, vec![1, 2, 3]);
    }

    #[test]
    fn truncated_line_reported_with_number() {
        let truncated = &LINE[..LINE.len() - 10];
        let input = format!("{LINE}\n{truncated}\n{LINE}");
        let parsed = parse_log(input.as_bytes()).unwrap();
        assert_eq!(parsed.records.len(), 2);
        assert_eq!(parsed.errors.len(), 1);
        assert_eq!(parsed.errors[0].line, 2);
    }

    #[test]
    fn empty_stream() {
        let parsed = parse_log(&b""[..]).unwrap();
        assert!(parsed.records.is_empty() && parsed.errors.is_empty());
    }

    #[test]
    fn bad_timestamp_is_line_error() {
        let bad = LINE.replace("2026-01-24T08:00:00+01:00", "yesterday");
        let parsed = parse_log(bad.as_bytes()).unwrap();
        assert_eq!(parsed.errors.len(), 1);
        assert!(parsed.errors[0].message.contains("bad timestamp"));
    }

    #[test]
    fn explicit_run_indices_are_kept_and_skipped() {
        let with_run = LINE.replace("\"answer_text\"", "\"run_index\":1,\"answer_text\"");
        let later = LINE.replace("08:00:00", "09:00:00");
        let input = format!("{later}\n{with_run}\n");
        let parsed = parse_log(input.as_bytes()).unwrap();
        assert_eq!(parsed.records[0].run_index, 2);
        assert_eq!(parsed.records[1].run_index, 1);
    }

    #[test]
    fn line_round_trip() {
        let parsed = parse_log(LINE.as_bytes()).unwrap();
        let line = record_to_line(&parsed.records[0]);
        let again = parse_log(line.as_bytes()).unwrap();
        assert_eq!(again.records, parsed.records);
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(
            normalize_url("https://www.swisscom.ch/de/privatkunden")
                .unwrap()
                .as_str(),
            "swisscom.ch"
        );
        assert_eq!(
            normalize_url("HTTP://Example.COM:8080/a?b=1")
                .unwrap()
                .as_str(),
            "example.com"
        );
        assert_eq!(normalize_url("not a url"), Err(Rejected));
        assert_eq!(normalize_url(""), Err(Rejected));
        assert_eq!(normalize_url("https://[::1]/x"), Err(Rejected));
        assert_eq!(
            normalize_url("sub.example.com/x").unwrap().as_str(),
            "sub.example.com"
        );
        assert_eq!(
            normalize_url("https://www.www.a.ch").unwrap().as_str(),
            "a.ch"
        );
    }

    fn day_record(engine: &str, ts: &str, citations: &[&str]) -> ResponseRecord {
        record(engine, "Telecom", 1, ts, 1, citations)
    }

    #[test]
    fn filters_excluded_date_cdn_and_aio() {
        let cfg = IngestConfig {
            excluded_dates: BTreeSet::from([NaiveDate::from_ymd_opt(2026, 1, 30).unwrap()]),
            ..IngestConfig::default()
        };
        let records = vec![
            day_record("chatgpt", "2026-01-30T10:00:00Z", &["https://a.ch"]),
            day_record(
                "chatgpt",
                "2026-01-31T10:00:00Z",
                &["https://images.openai.com/x.png"],
            ),
            day_record("google-aio", "2026-01-31T10:00:00Z", &["https://a.ch"]),
        ];
        let out = apply_filters(records, &cfg);
        assert_eq!(out.drops.excluded_dates, 1);
        assert_eq!(out.drops.excluded_engines, 1);
        assert_eq!(out.drops.blocked_citations, 1);
        assert_eq!(out.records.len(), 1);
        assert!(out.records[0].citations.is_empty());
    }

    #[test]
    fn window_is_inclusive() {
        let cfg = IngestConfig {
            date_window: Some(DateWindow {
                start: NaiveDate::from_ymd_opt(2026, 1, 24).unwrap(),
                end: NaiveDate::from_ymd_opt(2026, 3, 20).unwrap(),
            }),
            ..IngestConfig::default()
        };
        let records = vec![
            day_record("gemini", "2026-01-23T23:59:59Z", &[]),
            day_record("gemini", "2026-01-24T00:00:00Z", &[]),
            day_record("gemini", "2026-03-20T23:59:59Z", &[]),
            day_record("gemini", "2026-03-21T00:00:00Z", &[]),
        ];
        let out = apply_filters(records, &cfg);
        assert_eq!(out.records.len(), 2);
        assert_eq!(out.drops.outside_window, 2);
    }

    #[test]
    fn config_from_toml_keys() {
        let cfg = IngestConfig::from_toml(
            r#"
            excluded_dates = ["2026-01-30"]
            excluded_engines = ["google-aio", "bing"]
            [date_window]
            start = "2026-01-24"
            end = "2026-03-20"
            "#,
        )
        .unwrap();
        assert!(cfg.blocked_domains.contains(CDN_ARTIFACT_DOMAIN));
        assert_eq!(cfg.excluded_engines.len(), 2);
        assert!(IngestConfig::from_toml(
            "[date_window]\nstart = \"2026-02-01\"\nend = \"2026-01-01\""
        )
        .is_err());
        assert!(IngestConfig::from_toml("bogus = 1").is_err());
    }

    #[test]
    fn coverage_counts_distinct_days() {
        assert!(coverage_table(&FilteredDataset::default()).is_empty());
        let one =
            FilteredDataset::from_records(vec![day_record("gemini", "2026-01-24T08:00:00Z", &[])]);
        let t = coverage_table(&one);
        assert_eq!(
            t.campaigns[&CampaignId::new("Telecom")].days_by_engine[&EngineId::Gemini],
            1
        );
        let two = FilteredDataset::from_records(vec![
            day_record("gemini", "2026-01-24T08:00:00Z", &[]),
            day_record("gemini", "2026-01-24T18:00:00Z", &[]),
        ]);
        let t = coverage_table(&two);
        let cov = &t.campaigns[&CampaignId::new("Telecom")];
        assert_eq!(cov.days_by_engine[&EngineId::Gemini], 1);
        assert_eq!(cov.days, 1);
        assert_eq!(cov.queries, 1);
        assert_eq!(t.to_csv(), "campaign,queries,days,Gemini\nTelecom,1,1,1\n");
    }

    fn arb_records() -> impl Strategy<Value = Vec<ResponseRecord>> {
        let engines = prop::sample::select(vec!["chatgpt", "gemini", "google-aio", "perplexity"]);
        let domains = prop::sample::select(vec![
            "https://images.openai.com/a",
            "https://www.a.ch/x",
            "b.ch",
            "garbage url",
            "https://c.com:443/",
        ]);
        prop::collection::vec(
            (
                engines,
                1u32..4,
                0u32..10,
                prop::collection::vec(domains, 0..5),
            ),
            0..30,
        )
        .prop_map(|rows| {
            rows.into_iter()
                .map(|(e, p, day, cites)| {
                    let date = NaiveDate::from_ymd_opt(2026, 1, 24).unwrap()
                        + chrono::Days::new(day.into());
                    let ts = format!("{date}T10:00:00Z");
                    record(e, "Telecom", p, &ts, 1, &cites)
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn filtering_invariants(records in arb_records()) {
            let cfg = IngestConfig {
                excluded_dates: BTreeSet::from([NaiveDate::from_ymd_opt(2026, 1, 30).unwrap()]),
                ..IngestConfig::default()
            };
            let n = records.len();
            let once = apply_filters(records, &cfg);
            prop_assert_eq!(once.drops.dropped_records() + once.records.len(), n);
            for r in &once.records {
                for c in &r.citations {
                    let host = normalize_url(c).unwrap();
                    prop_assert_ne!(host.as_str(), CDN_ARTIFACT_DOMAIN);
                }
            }
            let twice = apply_filters(once.records.clone(), &cfg);
            prop_assert_eq!(&twice.records, &once.records);
        }

        #[test]
        fn normalized_hosts_are_clean(s in "[a-zA-Z0-9:/._?=-]{0,30}") {
            if let Ok(d) = normalize_url(&s) {
                let v = d.as_str();
                prop_assert!(!v.contains('/') && !v.contains(':'));
                prop_assert_eq!(v.to_lowercase(), v);
                prop_assert!(!v.starts_with("www."));
                prop_assert!(!v.is_empty());
            }
        }
    }
}
