//! Config file loading and flag merging. Every flag has a config-file key
//! of the same name (dashes become underscores); flags win.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use chrono::NaiveDate;
use geo_stability::ingest::{DateWindow, IngestConfig};
use serde::Deserialize;

use crate::FilterArgs;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub lexicon: Option<PathBuf>,
    pub threshold: Option<f64>,
    pub persistence: Option<f64>,
    pub max_gap_days: Option<u32>,
    pub resamples: Option<usize>,
    pub runs_per_group: Option<usize>,
    pub strict_calendar: Option<bool>,
    pub windows: Option<String>,
    pub qualify_on: Option<Vec<PathBuf>>,
    pub formats: Option<Vec<String>>,
    pub filters: Option<IngestConfig>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let mut cfg: FileConfig = toml::from_str(&text)
            .with_context(|| format!("invalid config file {}", path.display()))?;
        // relative paths are relative to the config file
        let base = path.parent().unwrap_or(Path::new("."));
        let listed = cfg.qualify_on.iter_mut().flatten();
        for p in [&mut cfg.out, &mut cfg.lexicon]
            .into_iter()
            .flatten()
            .chain(listed)
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}

/// Filter flags override the file's `[filters]` table key by key.
pub fn merge_filters(file: Option<&IngestConfig>, flags: &FilterArgs) -> Result<IngestConfig> {
    let mut cfg = file.cloned().unwrap_or_default();
    match (flags.start, flags.end, cfg.date_window) {
        (None, None, _) => {}
        (Some(start), Some(end), _) => cfg.date_window = Some(DateWindow { start, end }),
        (Some(start), None, Some(w)) => cfg.date_window = Some(DateWindow { start, ..w }),
        (None, Some(end), Some(w)) => cfg.date_window = Some(DateWindow { end, ..w }),
        (Some(start), None, None) => {
            cfg.date_window = Some(DateWindow {
                start,
                end: NaiveDate::MAX,
            })
        }
        (None, Some(end), None) => {
            cfg.date_window = Some(DateWindow {
                start: NaiveDate::MIN,
                end,
            })
        }
    }
    if !flags.exclude_date.is_empty() {
        cfg.excluded_dates = flags.exclude_date.iter().copied().collect();
    }
    if !flags.block_domain.is_empty() {
        cfg.blocked_domains = flags.block_domain.iter().cloned().collect();
    }
    if !flags.exclude_engine.is_empty() {
        cfg.excluded_engines = flags.exclude_engine.iter().cloned().collect();
    }
    if flags.keep_all_engines {
        cfg.excluded_engines.clear();
    }
    if !flags.exclude_campaign.is_empty() {
        cfg.excluded_campaigns = flags.exclude_campaign.iter().cloned().collect();
    }
    cfg.validate()?;
    Ok(cfg)
}
