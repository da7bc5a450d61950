//! Citation concentration per campaign×engine.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ingest::{normalize_url, FilteredDataset};
use crate::model::{CampaignId, EngineId, NormalizedDomain};

/// Citation occurrences per observed domain (zero-count domains never
/// appear).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CitationCounts {
    pub counts: BTreeMap<NormalizedDomain, u64>,
}

impl CitationCounts {
    pub fn values(&self) -> Vec<u64> {
        self.counts.values().copied().collect()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

/// Every citation occurrence of one campaign×engine across the dataset.
pub fn tally_citations(
    dataset: &FilteredDataset,
    campaign: &CampaignId,
    engine: &EngineId,
) -> CitationCounts {
    let mut counts = CitationCounts::default();
    for r in dataset
        .records
        .iter()
        .filter(|r| r.prompt.campaign == *campaign && r.engine == *engine)
    {
        for domain in r.citations.iter().filter_map(|u| normalize_url(u).ok()) {
            *counts.counts.entry(domain).or_default() += 1;
        }
    }
    counts
}

/// Rank-weighted Gini over ascending counts:
/// `G = 2 Σ i·y_i / (n Σ y) − (n + 1) / n`.
///
/// Evaluated as one integer numerator over one integer denominator, so the
/// result is the correctly rounded value of the exact rational.
pub fn gini(values: &[u64]) -> Result<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let n = sorted.len() as u128;
    let total: u128 = sorted.iter().map(|&y| u128::from(y)).sum();
    if total == 0 {
        return Err(Error::UndefinedGini);
    }
    let weighted: u128 = sorted
        .iter()
        .enumerate()
        .map(|(i, &y)| (i as u128 + 1) * u128::from(y))
        .sum();
    // 2Σiy/(nΣy) − (n+1)/n = (2Σiy − (n+1)Σy) / (nΣy); numerator is ≥ 0
    let numerator = 2 * weighted - (n + 1) * total;
    Ok(numerator as f64 / (n * total) as f64)
}

impl CitationCounts {
    pub fn gini(&self) -> Result<f64> {
        gini(&self.values())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GiniMatrix {
    pub cells: BTreeMap<(CampaignId, EngineId), f64>,
    /// Groups whose counts sum to zero.
    pub undefined: Vec<(CampaignId, EngineId)>,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let v: Vec<f64> = values.collect();
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

impl GiniMatrix {
    pub fn campaigns(&self) -> Vec<CampaignId> {
        let mut c: Vec<_> = self.cells.keys().map(|(c, _)| c.clone()).collect();
        c.dedup();
        c
    }

    pub fn engines(&self) -> Vec<EngineId> {
        let mut e: Vec<_> = self.cells.keys().map(|(_, e)| e.clone()).collect();
        e.sort();
        e.dedup();
        e
    }

    /// Unweighted mean across engines for each campaign.
    pub fn campaign_means(&self) -> BTreeMap<CampaignId, f64> {
        self.campaigns()
            .into_iter()
            .filter_map(|c| {
                mean(
                    self.cells
                        .iter()
                        .filter(|((cc, _), _)| *cc == c)
                        .map(|(_, &g)| g),
                )
                .map(|m| (c, m))
            })
            .collect()
    }

    /// Unweighted mean across campaigns for each engine.
    pub fn engine_means(&self) -> BTreeMap<EngineId, f64> {
        self.engines()
            .into_iter()
            .filter_map(|e| {
                mean(
                    self.cells
                        .iter()
                        .filter(|((_, ee), _)| *ee == e)
                        .map(|(_, &g)| g),
                )
                .map(|m| (e, m))
            })
            .collect()
    }

    pub fn global_mean(&self) -> Option<f64> {
        mean(self.cells.values().copied())
    }

    /// Campaign rows, engine columns, empty cells left blank.
    pub fn to_csv(&self) -> String {
        let engines = self.engines();
        let mut out = String::from("campaign");
        for e in &engines {
            out.push(',');
            out.push_str(e.label());
        }
        out.push_str(",mean\n");
        let campaign_means = self.campaign_means();
        for c in self.campaigns() {
            out.push_str(c.display_name());
            for e in &engines {
                out.push(',');
                if let Some(g) = self.cells.get(&(c.clone(), e.clone())) {
                    out.push_str(&format!("{g:.6}"));
                }
            }
            out.push_str(&format!(",{:.6}\n", campaign_means[&c]));
        }
        out.push_str("mean");
        let engine_means = self.engine_means();
        for e in &engines {
            out.push_str(&format!(",{:.6}", engine_means[e]));
        }
        match self.global_mean() {
            Some(g) => out.push_str(&format!(",{g:.6}\n")),
            None => out.push_str(",\n"),
        }
        out
    }
}

pub fn gini_matrix(dataset: &FilteredDataset) -> GiniMatrix {
    let mut tallies: BTreeMap<(CampaignId, EngineId), CitationCounts> = BTreeMap::new();
    for r in &dataset.records {
        let slot = tallies
            .entry((r.prompt.campaign.clone(), r.engine.clone()))
            .or_default();
        for domain in r.citations.iter().filter_map(|u| normalize_url(u).ok()) {
            *slot.counts.entry(domain).or_default() += 1;
        }
    }
    let mut matrix = GiniMatrix::default();
    for (key, counts) in tallies {
        match counts.gini() {
            Ok(g) => {
                matrix.cells.insert(key, g);
            }
            Err(_) => matrix.undefined.push(key),
        }
    }
    matrix
}
