//! How many runs, and how many observation days, a per-brand detection rate
//! needs before its standard error settles.
//!
//! Run-count curves subsample the `N` runs of a group without replacement
//! and take the population standard deviation of the subsample statistic.
//! Window curves slide a length-`d` window over a daily series and take the
//! population standard deviation of the window means. Both report the mean
//! SE over all series per sample size.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::Serialize;

use crate::brands::{detect_brands, LexiconSet, QualificationReport};
use crate::error::{Error, Result};
use crate::ingest::FilteredDataset;
use crate::model::{CampaignId, EngineId, ItemSet, PromptId, ResponseRecord};
use crate::pairing::daily_representatives;
use crate::rng::{derive_seed, SplitMix64};
use crate::similarity::jaccard;

/// Normal quantile used for 95% half-widths.
pub const Z_95: f64 = 1.96;
pub const DEFAULT_RESAMPLES: usize = 2000;
pub const DEFAULT_RUNS_PER_GROUP: usize = 10;

/// Printed under every run-count table.
pub const FPC_NOTE: &str = "SE at the largest n is subject to finite population correction (FPC) and underestimates the SE of truly independent runs.";

pub fn ci_half_width(se: f64) -> f64 {
    Z_95 * se
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SeriesKey {
    pub campaign: CampaignId,
    pub engine: EngineId,
    pub prompt: PromptId,
    /// Canonical brand, or empty for group-level (source coverage) series.
    pub brand: String,
}

impl SeriesKey {
    fn seed(&self, master: u64) -> u64 {
        derive_seed(
            master,
            &[
                self.campaign.key(),
                self.engine.label(),
                &self.prompt.index.to_string(),
                &self.brand,
            ],
        )
    }
}

/// Binary detection indicators of one brand in one group, per run or day.
#[derive(Debug, Clone, PartialEq)]
pub struct BrandSeries {
    pub key: SeriesKey,
    pub observations: Vec<bool>,
}

fn population_sd(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    var.sqrt()
}

/// Population SD of `statistic` over `resamples` uniform `n`-subsets of
/// `0..population`, drawn by partial Fisher-Yates from `seed`. The index
/// buffer is reset to `0..population` before every draw.
pub fn subsample_statistic_se<F>(
    population: usize,
    n: usize,
    resamples: usize,
    seed: u64,
    mut statistic: F,
) -> Result<f64>
where
    F: FnMut(&[usize]) -> f64,
{
    if n == 0 || n > population {
        return Err(Error::SubsampleSize { n, len: population });
    }
    if resamples == 0 {
        return Err(Error::NoResamples);
    }
    if n == population {
        return Ok(0.0);
    }
    let mut rng = SplitMix64::new(seed);
    let mut idx: Vec<usize> = (0..population).collect();
    let mut stats = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        for (i, slot) in idx.iter_mut().enumerate() {
            *slot = i;
        }
        rng.partial_shuffle(&mut idx, n);
        stats.push(statistic(&idx[..n]));
    }
    Ok(population_sd(&stats))
}

/// SE of the `n`-run detection rate of one series.
pub fn subsample_se(series: &BrandSeries, n: usize, resamples: usize, seed: u64) -> Result<f64> {
    let obs = &series.observations;
    subsample_statistic_se(obs.len(), n, resamples, seed, |idx| {
        idx.iter().filter(|&&i| obs[i]).count() as f64 / idx.len() as f64
    })
}

/// Finite-population SE of a subsample mean of a 0/1 population with
/// `k` ones out of `population`: `sqrt(p(1-p)/n * (N-n)/(N-1))`.
pub fn hypergeometric_se(population: usize, k: usize, n: usize) -> f64 {
    let big_n = population as f64;
    let p = k as f64 / big_n;
    let n = n as f64;
    (p * (1.0 - p) / n * (big_n - n) / (big_n - 1.0)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveMode {
    RunsBrand,
    RunsSource,
    Window,
}

impl CurveMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            CurveMode::RunsBrand => "runs_brand",
            CurveMode::RunsSource => "runs_source",
            CurveMode::Window => "window",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    /// Subsample size `n` or window length `d`.
    pub size: usize,
    pub mean_se: f64,
    pub ci_half_width: f64,
    pub series_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceCurve {
    pub mode: CurveMode,
    pub points: Vec<CurvePoint>,
    pub resamples: Option<usize>,
    pub seed: Option<u64>,
}

impl ConvergenceCurve {
    /// First size whose mean SE is strictly below each threshold.
    pub fn thresholds(&self, levels: &[f64]) -> Vec<(f64, Option<usize>)> {
        levels
            .iter()
            .map(|&t| {
                (
                    t,
                    self.points.iter().find(|p| p.mean_se < t).map(|p| p.size),
                )
            })
            .collect()
    }

    pub fn point(&self, size: usize) -> Option<&CurvePoint> {
        self.points.iter().find(|p| p.size == size)
    }

    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("# schema_version=1\nmode,n_or_d,mean_se,ci_half_width,series_count\n");
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                self.mode.as_str(),
                p.size,
                p.mean_se,
                p.ci_half_width,
                p.series_count
            );
        }
        out
    }

    /// Markdown table of SE and half-widths plus threshold lines.
    pub fn to_markdown(&self, levels: &[f64]) -> String {
        let label = match self.mode {
            CurveMode::Window => "Window (d days)",
            _ => "Runs (n)",
        };
        let mut out = format!("| {label} | SE | 95% CI (±) | Series |\n|---:|---:|---:|---:|\n");
        for p in &self.points {
            let _ = writeln!(
                out,
                "| {} | {:.3} | {:.3} | {} |",
                p.size, p.mean_se, p.ci_half_width, p.series_count
            );
        }
        out.push('\n');
        for (t, first) in self.thresholds(levels) {
            match first {
                Some(s) => {
                    let _ = writeln!(out, "- SE < {t}: first reached at {s}");
                }
                None => {
                    let _ = writeln!(out, "- SE < {t}: not reached");
                }
            }
        }
        if self.mode != CurveMode::Window {
            let _ = writeln!(out, "\n_Note:_ {FPC_NOTE}");
        }
        out
    }
}

fn mean_point(size: usize, ses: &[f64]) -> CurvePoint {
    let mean_se = ses.iter().sum::<f64>() / ses.len() as f64;
    CurvePoint {
        size,
        mean_se,
        ci_half_width: ci_half_width(mean_se),
        series_count: ses.len(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConvergenceConfig {
    pub runs_per_group: usize,
    /// Subsample sizes; empty means `1..runs_per_group`.
    pub sizes: Vec<usize>,
    pub resamples: usize,
    pub seed: u64,
}

impl Default for RunConvergenceConfig {
    fn default() -> Self {
        RunConvergenceConfig {
            runs_per_group: DEFAULT_RUNS_PER_GROUP,
            sizes: Vec::new(),
            resamples: DEFAULT_RESAMPLES,
            seed: 0,
        }
    }
}

impl RunConvergenceConfig {
    fn sizes(&self) -> Vec<usize> {
        if self.sizes.is_empty() {
            (1..self.runs_per_group).collect()
        } else {
            self.sizes.clone()
        }
    }
}

type Groups<'a> = BTreeMap<(CampaignId, EngineId, PromptId), Vec<&'a ResponseRecord>>;

fn groups(dataset: &FilteredDataset) -> Groups<'_> {
    let mut g: Groups<'_> = BTreeMap::new();
    for r in &dataset.records {
        g.entry((
            r.prompt.campaign.clone(),
            r.engine.clone(),
            r.prompt.clone(),
        ))
        .or_default()
        .push(r);
    }
    for runs in g.values_mut() {
        runs.sort_by_key(|r| (r.timestamp, r.run_index));
    }
    g
}

fn campaign_allowed(campaign: &CampaignId, qualified: Option<&QualificationReport>) -> bool {
    qualified.is_none_or(|q| q.is_qualified(campaign))
}

/// Per-brand run series from groups holding at least `runs_per_group` runs
/// (the earliest ones are used). Brands never detected are left out.
pub fn brand_run_series(
    dataset: &FilteredDataset,
    lexicons: &LexiconSet,
    qualified: Option<&QualificationReport>,
    runs_per_group: usize,
) -> Vec<BrandSeries> {
    let mut out = Vec::new();
    for ((campaign, engine, prompt), runs) in groups(dataset) {
        let Some(lexicon) = lexicons.get(&campaign) else {
            continue;
        };
        if !campaign_allowed(&campaign, qualified) || runs.len() < runs_per_group {
            continue;
        }
        let detections: Vec<ItemSet> = runs[..runs_per_group]
            .iter()
            .map(|r| detect_brands(&r.answer_text, lexicon).brands_set)
            .collect();
        for brand in lexicon.canonical_names() {
            let observations: Vec<bool> = detections.iter().map(|d| d.contains(brand)).collect();
            if observations.iter().any(|&o| o) {
                out.push(BrandSeries {
                    key: SeriesKey {
                        campaign: campaign.clone(),
                        engine: engine.clone(),
                        prompt: prompt.clone(),
                        brand: brand.to_string(),
                    },
                    observations,
                });
            }
        }
    }
    out
}

/// Cited-domain sets of the first `runs_per_group` runs of one group.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceRunGroup {
    pub key: SeriesKey,
    pub runs: Vec<ItemSet>,
}

pub fn source_run_groups(dataset: &FilteredDataset, runs_per_group: usize) -> Vec<SourceRunGroup> {
    groups(dataset)
        .into_iter()
        .filter(|(_, runs)| runs.len() >= runs_per_group)
        .map(|((campaign, engine, prompt), runs)| SourceRunGroup {
            key: SeriesKey {
                campaign,
                engine,
                prompt,
                brand: String::new(),
            },
            runs: runs[..runs_per_group]
                .iter()
                .map(|r| r.source_set())
                .collect(),
        })
        .collect()
}

/// Mean per-brand subsampling SE for each subsample size.
pub fn brand_run_curve(
    series: &[BrandSeries],
    cfg: &RunConvergenceConfig,
) -> Result<ConvergenceCurve> {
    if series.is_empty() {
        return Err(Error::NoQualifyingGroups);
    }
    let sizes = cfg.sizes();
    let per_series: Vec<Vec<f64>> = series
        .par_iter()
        .map(|s| {
            let base = s.key.seed(cfg.seed);
            sizes
                .iter()
                .map(|&n| subsample_se(s, n, cfg.resamples, derive_seed(base, &[n.to_string()])))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    Ok(assemble(CurveMode::RunsBrand, &sizes, &per_series, cfg))
}

/// Mean SE, across groups, of the Jaccard between an `n`-run union of cited
/// domains and the full-run union. Groups that never cite anything are
/// skipped.
pub fn source_run_curve(
    groups: &[SourceRunGroup],
    cfg: &RunConvergenceConfig,
) -> Result<ConvergenceCurve> {
    let usable: Vec<&SourceRunGroup> = groups
        .iter()
        .filter(|g| g.runs.iter().any(|r| !r.is_empty()))
        .collect();
    if usable.is_empty() {
        return Err(Error::NoQualifyingGroups);
    }
    let sizes = cfg.sizes();
    let per_group: Vec<Vec<f64>> = usable
        .par_iter()
        .map(|g| {
            let mut reference = ItemSet::new();
            for r in &g.runs {
                reference.union_with(r);
            }
            let base = g.key.seed(cfg.seed);
            sizes
                .iter()
                .map(|&n| {
                    subsample_statistic_se(
                        g.runs.len(),
                        n,
                        cfg.resamples,
                        derive_seed(base, &[n.to_string()]),
                        |idx| {
                            let mut union = ItemSet::new();
                            for &i in idx {
                                union.union_with(&g.runs[i]);
                            }
                            jaccard(&union, &reference).value().unwrap_or(0.0)
                        },
                    )
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    Ok(assemble(CurveMode::RunsSource, &sizes, &per_group, cfg))
}

fn assemble(
    mode: CurveMode,
    sizes: &[usize],
    per_series: &[Vec<f64>],
    cfg: &RunConvergenceConfig,
) -> ConvergenceCurve {
    let points = sizes
        .iter()
        .enumerate()
        .map(|(j, &size)| {
            let ses: Vec<f64> = per_series.iter().map(|s| s[j]).collect();
            mean_point(size, &ses)
        })
        .collect();
    ConvergenceCurve {
        mode,
        points,
        resamples: Some(cfg.resamples),
        seed: Some(cfg.seed),
    }
}

/// Population SD of the means of every length-`d` window of `obs`.
///
/// With window hit counts `c_w` over `W` windows the variance is
/// `(W Σc² − (Σc)²) / (W² d²)`, evaluated on integers.
pub fn rolling_window_se(obs: &[bool], d: usize) -> Result<f64> {
    if d == 0 || d > obs.len() {
        return Err(Error::WindowLength { d, len: obs.len() });
    }
    Ok(window_se_over_segments(&[obs], d).expect("at least one window"))
}

fn window_counts(segment: &[bool], d: usize) -> impl Iterator<Item = u128> + '_ {
    let mut prefix = Vec::with_capacity(segment.len() + 1);
    prefix.push(0u128);
    for &o in segment {
        prefix.push(prefix.last().unwrap() + u128::from(o));
    }
    let windows = (segment.len() + 1).saturating_sub(d);
    (0..windows).map(move |i| prefix[i + d] - prefix[i])
}

/// Windows never span two segments. `None` when no segment is long enough.
fn window_se_over_segments(segments: &[&[bool]], d: usize) -> Option<f64> {
    let (mut w, mut s1, mut s2) = (0u128, 0u128, 0u128);
    for seg in segments {
        for c in window_counts(seg, d) {
            w += 1;
            s1 += c;
            s2 += c * c;
        }
    }
    if w == 0 {
        return None;
    }
    let numerator = w * s2 - s1 * s1;
    let d = d as u128;
    Some((numerator as f64 / (w * w * d * d) as f64).sqrt())
}

/// How missing collection days are treated by rolling windows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WindowMode {
    /// Windows run over observed days; gaps are closed up.
    #[default]
    Compressed,
    /// Windows must cover consecutive calendar days; gaps break them.
    StrictCalendar,
}

/// Daily binary indicators for one brand in one group.
#[derive(Debug, Clone, PartialEq)]
pub struct DailySeries {
    pub key: SeriesKey,
    pub days: Vec<(NaiveDate, bool)>,
}

impl DailySeries {
    fn segments(&self, mode: WindowMode) -> Vec<Vec<bool>> {
        match mode {
            WindowMode::Compressed => vec![self.days.iter().map(|&(_, o)| o).collect()],
            WindowMode::StrictCalendar => {
                let mut out: Vec<Vec<bool>> = Vec::new();
                let mut prev: Option<NaiveDate> = None;
                for &(day, o) in &self.days {
                    match (prev, out.last_mut()) {
                        (Some(p), Some(cur)) if (day - p).num_days() == 1 => cur.push(o),
                        _ => out.push(vec![o]),
                    }
                    prev = Some(day);
                }
                out
            }
        }
    }
}

/// Per-brand daily series: each day of a group is represented by its
/// earliest run. Brands never detected are left out.
pub fn brand_daily_series(
    dataset: &FilteredDataset,
    lexicons: &LexiconSet,
    qualified: Option<&QualificationReport>,
) -> Vec<DailySeries> {
    let mut out = Vec::new();
    for ((campaign, engine, prompt), runs) in groups(dataset) {
        let Some(lexicon) = lexicons.get(&campaign) else {
            continue;
        };
        if !campaign_allowed(&campaign, qualified) {
            continue;
        }
        let daily: Vec<(NaiveDate, ItemSet)> = daily_representatives(&runs)
            .into_iter()
            .map(|(day, r)| (day, detect_brands(&r.answer_text, lexicon).brands_set))
            .collect();
        for brand in lexicon.canonical_names() {
            let days: Vec<(NaiveDate, bool)> = daily
                .iter()
                .map(|(day, set)| (*day, set.contains(brand)))
                .collect();
            if days.iter().any(|&(_, o)| o) {
                out.push(DailySeries {
                    key: SeriesKey {
                        campaign: campaign.clone(),
                        engine: engine.clone(),
                        prompt: prompt.clone(),
                        brand: brand.to_string(),
                    },
                    days,
                });
            }
        }
    }
    out
}

/// Mean rolling-window SE over all series long enough for each `d`.
/// Window lengths no series can fill are omitted from the curve.
pub fn window_convergence_curve(
    series: &[DailySeries],
    windows: &[usize],
    mode: WindowMode,
) -> Result<ConvergenceCurve> {
    if series.is_empty() {
        return Err(Error::NoQualifyingGroups);
    }
    let segmented: Vec<Vec<Vec<bool>>> = series.iter().map(|s| s.segments(mode)).collect();
    let points = windows
        .par_iter()
        .filter(|&&d| d > 0)
        .filter_map(|&d| {
            let ses: Vec<f64> = segmented
                .iter()
                .filter_map(|segs| {
                    let refs: Vec<&[bool]> = segs.iter().map(Vec::as_slice).collect();
                    window_se_over_segments(&refs, d)
                })
                .collect();
            (!ses.is_empty()).then(|| mean_point(d, &ses))
        })
        .collect();
    Ok(ConvergenceCurve {
        mode: CurveMode::Window,
        points,
        resamples: None,
        seed: None,
    })
}

/// `1..=longest series` in days.
pub fn full_window_range(series: &[DailySeries]) -> Vec<usize> {
    let longest = series.iter().map(|s| s.days.len()).max().unwrap_or(0);
    (1..=longest).collect()
}
