//! The two pair populations: consecutive-day pairs for drift over time and
//! within-24h pairs for run-to-run variation on the same prompt.

use std::collections::BTreeMap;
use std::io::Write;

use chrono::{Duration, NaiveDate, SecondsFormat};

use crate::ingest::FilteredDataset;
use crate::model::{CampaignId, EngineId, GroupKey, ItemKind, PromptId, ResponseRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TemporalPairingConfig {
    /// Largest calendar-day gap that still forms a pair. 1 = adjacent days.
    pub max_gap_days: u32,
}

impl Default for TemporalPairingConfig {
    fn default() -> Self {
        TemporalPairingConfig { max_gap_days: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimultaneousPairingConfig {
    pub max_delta: Duration,
    /// Drop runs without any usable citation before pairing (source kind).
    pub require_citation: bool,
    /// Drop runs with blank answer text before pairing (brand kind).
    pub require_nonempty_text: bool,
}

impl SimultaneousPairingConfig {
    pub fn for_kind(kind: ItemKind) -> Self {
        SimultaneousPairingConfig {
            max_delta: Duration::hours(24),
            require_citation: kind == ItemKind::Source,
            require_nonempty_text: kind == ItemKind::Brand,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RecordPair<'a> {
    pub key: &'a GroupKey,
    pub first: &'a ResponseRecord,
    pub second: &'a ResponseRecord,
}

/// Pairs plus the group keys they point into, in deterministic order
/// (group key, then timestamps).
#[derive(Debug, Clone, Default)]
pub struct PairSet<'a> {
    groups: Vec<(GroupKey, Vec<(&'a ResponseRecord, &'a ResponseRecord)>)>,
}

impl<'a> PairSet<'a> {
    pub fn iter(&self) -> impl Iterator<Item = RecordPair<'_>> {
        self.groups.iter().flat_map(|(key, pairs)| {
            pairs
                .iter()
                .map(move |&(first, second)| RecordPair { key, first, second })
        })
    }

    pub fn len(&self) -> usize {
        self.groups.iter().map(|(_, p)| p.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn pairs_in(&self, key: &GroupKey) -> usize {
        self.groups
            .iter()
            .find(|(k, _)| k == key)
            .map_or(0, |(_, p)| p.len())
    }

    /// One CSV line per pair: group, both timestamps, Δt in seconds, runs.
    pub fn write_manifest<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(
            w,
            "campaign,engine,prompt_index,kind,first_timestamp,second_timestamp,delta_t_secs,first_run,second_run"
        )?;
        for p in self.iter() {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{}",
                csv_field(p.key.campaign.display_name()),
                csv_field(p.key.engine.label()),
                p.key.prompt.index,
                p.key.kind,
                p.first.timestamp.to_rfc3339_opts(SecondsFormat::Secs, true),
                p.second
                    .timestamp
                    .to_rfc3339_opts(SecondsFormat::Secs, true),
                (p.second.timestamp - p.first.timestamp).num_seconds().abs(),
                p.first.run_index,
                p.second.run_index
            )?;
        }
        Ok(())
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

type Bucket<'a> = BTreeMap<(CampaignId, EngineId, PromptId), Vec<&'a ResponseRecord>>;

fn group_records(dataset: &FilteredDataset) -> Bucket<'_> {
    let mut groups: Bucket<'_> = BTreeMap::new();
    for r in &dataset.records {
        groups
            .entry((
                r.prompt.campaign.clone(),
                r.engine.clone(),
                r.prompt.clone(),
            ))
            .or_default()
            .push(r);
    }
    for records in groups.values_mut() {
        records.sort_by_key(|r| (r.timestamp, r.run_index));
    }
    groups
}

/// Earliest record (then lowest run index) per calendar day of one group.
pub fn daily_representatives<'a>(
    records: &[&'a ResponseRecord],
) -> BTreeMap<NaiveDate, &'a ResponseRecord> {
    let mut by_day: BTreeMap<NaiveDate, &'a ResponseRecord> = BTreeMap::new();
    for &r in records {
        by_day
            .entry(r.day())
            .and_modify(|cur| {
                if (r.timestamp, r.run_index) < (cur.timestamp, cur.run_index) {
                    *cur = r;
                }
            })
            .or_insert(r);
    }
    by_day
}

/// Within each (campaign, engine, prompt): one record per day, paired with
/// the next observed day when it lies at most `max_gap_days` later.
pub fn consecutive_day_pairs(
    dataset: &FilteredDataset,
    cfg: TemporalPairingConfig,
    kind: ItemKind,
) -> PairSet<'_> {
    let max_gap = i64::from(cfg.max_gap_days.max(1));
    let mut out = PairSet::default();
    for ((campaign, engine, prompt), records) in group_records(dataset) {
        let days: Vec<_> = daily_representatives(&records).into_iter().collect();
        let pairs: Vec<_> = days
            .windows(2)
            .filter(|w| (w[1].0 - w[0].0).num_days() <= max_gap)
            .map(|w| (w[0].1, w[1].1))
            .collect();
        if !pairs.is_empty() {
            out.groups.push((
                GroupKey {
                    campaign,
                    engine,
                    prompt,
                    kind,
                },
                pairs,
            ));
        }
    }
    out
}

fn qualifies(r: &ResponseRecord, cfg: &SimultaneousPairingConfig) -> bool {
    if cfg.require_citation && r.source_list().is_empty() {
        return false;
    }
    if cfg.require_nonempty_text && r.answer_text.trim().is_empty() {
        return false;
    }
    true
}

/// Within each (campaign, engine, prompt): every unordered pair of
/// qualifying runs at most `max_delta` apart. Run-level filters apply to
/// each record before pairing.
pub fn simultaneous_pairs(
    dataset: &FilteredDataset,
    cfg: SimultaneousPairingConfig,
    kind: ItemKind,
) -> PairSet<'_> {
    let mut out = PairSet::default();
    for ((campaign, engine, prompt), records) in group_records(dataset) {
        let runs: Vec<&ResponseRecord> =
            records.into_iter().filter(|r| qualifies(r, &cfg)).collect();
        let mut pairs = Vec::new();
        for (i, a) in runs.iter().enumerate() {
            for b in &runs[i + 1..] {
                if (b.timestamp - a.timestamp).abs() <= cfg.max_delta {
                    pairs.push((*a, *b));
                }
            }
        }
        if !pairs.is_empty() {
            out.groups.push((
                GroupKey {
                    campaign,
                    engine,
                    prompt,
                    kind,
                },
                pairs,
            ));
        }
    }
    out
}

/// Fraction of runs that keep at least one usable citation.
pub fn cited_run_share(dataset: &FilteredDataset) -> Option<f64> {
    if dataset.is_empty() {
        return None;
    }
    let cited = dataset
        .records
        .iter()
        .filter(|r| !r.source_list().is_empty())
        .count();
    Some(cited as f64 / dataset.len() as f64)
}
