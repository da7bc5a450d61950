//! Pair-score aggregation into summary tables, per-prompt breakdowns, and
//! their CSV, JSON, markdown and SVG renderings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::brands::LexiconSet;
use crate::concentration::GiniMatrix;
use crate::convergence::ConvergenceCurve;
use crate::error::{Error, Result};
use crate::model::{GroupKey, ItemKind, PairScore, RboParams, RecordKey};
use crate::pairing::PairSet;
use crate::similarity::{score_pair, SimilarityValue};
use crate::svg::{self, BarRow, BoxGroup, BoxStats, Series};

pub const SCHEMA_LINE: &str = "# schema_version=1";
/// Mean Jaccard at or above which a prompt counts as stable.
pub const REFERENCE_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Population {
    Temporal,
    Simultaneous,
}

impl Population {
    pub fn as_str(&self) -> &'static str {
        match self {
            Population::Temporal => "temporal",
            Population::Simultaneous => "simultaneous",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Campaign,
    Engine,
    Prompt,
    All,
}

impl Scope {
    fn heading(&self) -> &'static str {
        match self {
            Scope::Campaign => "Campaign",
            Scope::Engine => "Engine",
            Scope::Prompt => "Prompt",
            Scope::All => "Scope",
        }
    }
}

/// One scored record pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredPair {
    pub key: GroupKey,
    pub first: RecordKey,
    pub second: RecordKey,
    pub score: PairScore,
}

/// Scores every pair. Brand pairs need a lexicon for their campaign.
pub fn score_pairs(
    pairs: &PairSet<'_>,
    params: RboParams,
    lexicons: Option<&LexiconSet>,
) -> Result<Vec<ScoredPair>> {
    let all: Vec<_> = pairs.iter().collect();
    all.par_iter()
        .map(|p| {
            let lexicon = match p.key.kind {
                ItemKind::Source => None,
                ItemKind::Brand => Some(
                    lexicons
                        .and_then(|l| l.get(&p.key.campaign))
                        .ok_or_else(|| Error::MissingLexicon(p.key.campaign.to_string()))?,
                ),
            };
            Ok(ScoredPair {
                key: p.key.clone(),
                first: p.first.key(),
                second: p.second.key(),
                score: score_pair(p.first, p.second, p.key.kind, params, lexicon)?,
            })
        })
        .collect()
}

/// Mean, sample SD and linear-interpolation quartiles of one metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Quantile of sorted data with linear interpolation between order
/// statistics at position `(n - 1) q`.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

impl Summary {
    /// `None` for empty input. Values are sorted first so the result does
    /// not depend on input order.
    pub fn of(values: &[f64]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let sd = if v.len() < 2 {
            0.0
        } else {
            (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Some(Summary {
            mean,
            sd,
            min: v[0],
            q1: quantile(&v, 0.25),
            median: quantile(&v, 0.5),
            q3: quantile(&v, 0.75),
            max: v[v.len() - 1],
        })
    }

    pub fn box_stats(&self) -> BoxStats {
        BoxStats {
            min: self.min,
            q1: self.q1,
            median: self.median,
            q3: self.q3,
            max: self.max,
        }
    }
}

/// Summary statistics of one scope, kind and population. Metric fields are
/// `Excluded` when every pair in the scope was excluded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub scope: Scope,
    pub label: String,
    pub kind: ItemKind,
    pub population: Population,
    pub pair_count: usize,
    pub excluded_count: usize,
    /// Largest number of distinct runs paired within one engine-prompt group.
    pub max_runs: usize,
    pub jaccard_mean: SimilarityValue,
    pub jaccard_sd: SimilarityValue,
    pub jaccard_min: SimilarityValue,
    pub jaccard_q1: SimilarityValue,
    pub jaccard_median: SimilarityValue,
    pub jaccard_q3: SimilarityValue,
    pub jaccard_max: SimilarityValue,
    pub rbo_mean: SimilarityValue,
    pub rbo_sd: SimilarityValue,
    pub rbo_min: SimilarityValue,
    pub rbo_q1: SimilarityValue,
    pub rbo_median: SimilarityValue,
    pub rbo_q3: SimilarityValue,
    pub rbo_max: SimilarityValue,
    /// A single scored pair; the SD of 0 carries no information.
    pub degenerate: bool,
}

fn summary_fields(s: Option<Summary>) -> [SimilarityValue; 7] {
    match s {
        Some(s) => [s.mean, s.sd, s.min, s.q1, s.median, s.q3, s.max].map(SimilarityValue::Value),
        None => [SimilarityValue::Excluded; 7],
    }
}

impl AggregateRow {
    fn jaccard_box(&self) -> Option<BoxStats> {
        Some(BoxStats {
            min: self.jaccard_min.value()?,
            q1: self.jaccard_q1.value()?,
            median: self.jaccard_median.value()?,
            q3: self.jaccard_q3.value()?,
            max: self.jaccard_max.value()?,
        })
    }

    fn rbo_box(&self) -> Option<BoxStats> {
        Some(BoxStats {
            min: self.rbo_min.value()?,
            q1: self.rbo_q1.value()?,
            median: self.rbo_median.value()?,
            q3: self.rbo_q3.value()?,
            max: self.rbo_max.value()?,
        })
    }
}

fn scope_label(key: &GroupKey, scope: Scope) -> (String, u32, String) {
    match scope {
        Scope::Campaign => (
            key.campaign.key().to_string(),
            0,
            key.campaign.display_name().to_string(),
        ),
        Scope::Engine => (
            key.engine.label().to_string(),
            0,
            key.engine.label().to_string(),
        ),
        Scope::Prompt => (
            key.campaign.key().to_string(),
            key.prompt.index,
            key.prompt.to_string(),
        ),
        Scope::All => (String::new(), 0, "all".to_string()),
    }
}

/// Groups pairs by scope and kind. Excluded pairs are counted but never
/// enter the statistics.
pub fn aggregate(scores: &[ScoredPair], population: Population, scope: Scope) -> Vec<AggregateRow> {
    type Bucket<'a> = (String, Vec<&'a ScoredPair>);
    let mut buckets: BTreeMap<((String, u32), ItemKind), Bucket<'_>> = BTreeMap::new();
    for s in scores {
        let (sort, index, label) = scope_label(&s.key, scope);
        buckets
            .entry(((sort, index), s.key.kind))
            .or_insert_with(|| (label, Vec::new()))
            .1
            .push(s);
    }
    buckets
        .into_iter()
        .map(|((_, kind), (label, pairs))| {
            let mut runs: BTreeMap<&GroupKey, BTreeSet<&RecordKey>> = BTreeMap::new();
            let (mut jac, mut rbo) = (Vec::new(), Vec::new());
            for p in &pairs {
                let r = runs.entry(&p.key).or_default();
                r.insert(&p.first);
                r.insert(&p.second);
                if let (Some(j), Some(b)) = (p.score.jaccard().value(), p.score.rbo().value()) {
                    jac.push(j);
                    rbo.push(b);
                }
            }
            let [jaccard_mean, jaccard_sd, jaccard_min, jaccard_q1, jaccard_median, jaccard_q3, jaccard_max] =
                summary_fields(Summary::of(&jac));
            let [rbo_mean, rbo_sd, rbo_min, rbo_q1, rbo_median, rbo_q3, rbo_max] = summary_fields(Summary::of(&rbo));
            AggregateRow {
                scope,
                label,
                kind,
                population,
                pair_count: jac.len(),
                excluded_count: pairs.len() - jac.len(),
                max_runs: runs.values().map(BTreeSet::len).max().unwrap_or(0),
                jaccard_mean,
                jaccard_sd,
                jaccard_min,
                jaccard_q1,
                jaccard_median,
                jaccard_q3,
                jaccard_max,
                rbo_mean,
                rbo_sd,
                rbo_min,
                rbo_q1,
                rbo_median,
                rbo_q3,
                rbo_max,
                degenerate: jac.len() == 1,
            }
        })
        .collect()
}

/// Mean similarity of one prompt across engines and pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptRow {
    pub campaign: String,
    pub prompt_index: u32,
    pub prompt_text: String,
    pub kind: ItemKind,
    pub pair_count: usize,
    pub jaccard_mean: f64,
    pub rbo_mean: f64,
    pub above_reference: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PromptBreakdown {
    /// Ascending by mean Jaccard.
    pub rows: Vec<PromptRow>,
    /// Prompts left out because every pair was excluded.
    pub warnings: Vec<String>,
}

pub fn per_prompt_breakdown(scores: &[ScoredPair]) -> PromptBreakdown {
    type Slot<'a> = (&'a ScoredPair, Vec<(f64, f64)>);
    let mut groups: BTreeMap<(String, u32, ItemKind), Slot<'_>> = BTreeMap::new();
    for s in scores {
        let slot = groups
            .entry((
                s.key.campaign.key().to_string(),
                s.key.prompt.index,
                s.key.kind,
            ))
            .or_insert_with(|| (s, Vec::new()));
        if let (Some(j), Some(r)) = (s.score.jaccard().value(), s.score.rbo().value()) {
            slot.1.push((j, r));
        }
    }
    let mut out = PromptBreakdown::default();
    for ((_, _, kind), (first, values)) in groups {
        let prompt = &first.key.prompt;
        if values.is_empty() {
            out.warnings.push(format!(
                "{prompt} ({kind}): every pair excluded; prompt omitted"
            ));
            continue;
        }
        let mut j: Vec<f64> = values.iter().map(|v| v.0).collect();
        let mut r: Vec<f64> = values.iter().map(|v| v.1).collect();
        j.sort_by(f64::total_cmp);
        r.sort_by(f64::total_cmp);
        let jaccard_mean = j.iter().sum::<f64>() / j.len() as f64;
        out.rows.push(PromptRow {
            campaign: prompt.campaign.display_name().to_string(),
            prompt_index: prompt.index,
            prompt_text: prompt.text.clone(),
            kind,
            pair_count: values.len(),
            jaccard_mean,
            rbo_mean: r.iter().sum::<f64>() / r.len() as f64,
            above_reference: jaccard_mean >= REFERENCE_THRESHOLD,
        });
    }
    // stable sort keeps the (campaign, prompt, kind) order among ties
    out.rows
        .sort_by(|a, b| a.jaccard_mean.total_cmp(&b.jaccard_mean));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    Markdown,
    Svg,
}

impl ReportFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
            ReportFormat::Markdown => "md",
            ReportFormat::Svg => "svg",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            "svg" => Ok(ReportFormat::Svg),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

pub fn render_report(rows: &[AggregateRow], format: ReportFormat) -> Result<Vec<u8>> {
    match format {
        ReportFormat::Csv => rows_to_csv(rows),
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(rows)?;
            out.push(b'\n');
            Ok(out)
        }
        ReportFormat::Markdown => Ok(rows_to_markdown(rows).into_bytes()),
        ReportFormat::Svg => {
            if rows.is_empty() {
                return Err(Error::EmptyReport("box plot"));
            }
            Ok(rows_to_box_plot(rows).into_bytes())
        }
    }
}

fn with_schema_line<S: Serialize>(rows: &[S]) -> Result<Vec<u8>> {
    let mut out = format!("{SCHEMA_LINE}\n").into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut out);
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
    }
    Ok(out)
}

fn rows_to_csv(rows: &[AggregateRow]) -> Result<Vec<u8>> {
    if rows.is_empty() {
        // the csv writer only emits headers alongside a first record
        let mut out = format!("{SCHEMA_LINE}\n").into_bytes();
        out.extend_from_slice(CSV_HEADER.as_bytes());
        out.push(b'\n');
        return Ok(out);
    }
    with_schema_line(rows)
}

const CSV_HEADER: &str = "scope,label,kind,population,pair_count,excluded_count,max_runs,jaccard_mean,jaccard_sd,jaccard_min,jaccard_q1,jaccard_median,jaccard_q3,jaccard_max,rbo_mean,rbo_sd,rbo_min,rbo_q1,rbo_median,rbo_q3,rbo_max,degenerate";

/// Reads rows written by [`render_report`] in CSV form.
pub fn parse_csv(text: &[u8]) -> Result<Vec<AggregateRow>> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text);
    r.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

fn fmt3(v: SimilarityValue) -> String {
    match v {
        SimilarityValue::Value(x) => format!("{x:.3}"),
        SimilarityValue::Excluded => "excluded".to_string(),
    }
}

fn rows_to_markdown(rows: &[AggregateRow]) -> String {
    let mut out = String::new();
    let mut sections: BTreeMap<(Population, ItemKind), Vec<&AggregateRow>> = BTreeMap::new();
    for r in rows {
        sections.entry((r.population, r.kind)).or_default().push(r);
    }
    for ((population, kind), rows) in sections {
        let heading = rows[0].scope.heading();
        let _ = writeln!(
            out,
            "### {} {} similarity\n",
            capitalize(population.as_str()),
            kind
        );
        match population {
            Population::Temporal => {
                let _ = writeln!(
                    out,
                    "| {heading} | Jac. Mean | Jac. SD | RBO Mean | RBO SD |"
                );
                out.push_str("|---|---:|---:|---:|---:|\n");
                for r in &rows {
                    let _ = writeln!(
                        out,
                        "| {} | {} | {} | {} | {} |",
                        r.label,
                        fmt3(r.jaccard_mean),
                        fmt3(r.jaccard_sd),
                        fmt3(r.rbo_mean),
                        fmt3(r.rbo_sd)
                    );
                }
            }
            Population::Simultaneous => {
                let _ = writeln!(
                    out,
                    "| {heading} | Pairs | Max Runs | Jaccard Mean | Jaccard SD | RBO Mean |"
                );
                out.push_str("|---|---:|---:|---:|---:|---:|\n");
                for r in &rows {
                    let _ = writeln!(
                        out,
                        "| {} | {} | {} | {} | {} | {} |",
                        r.label,
                        r.pair_count,
                        r.max_runs,
                        fmt3(r.jaccard_mean),
                        fmt3(r.jaccard_sd),
                        fmt3(r.rbo_mean)
                    );
                }
            }
        }
        let pairs: usize = rows.iter().map(|r| r.pair_count).sum();
        let excluded: usize = rows.iter().map(|r| r.excluded_count).sum();
        let _ = writeln!(
            out,
            "\n_Note:_ {pairs} scored pairs; {excluded} pairs excluded (both sides empty). SD is the sample SD.\n"
        );
    }
    out
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    c.next()
        .map(|f| f.to_uppercase().chain(c).collect())
        .unwrap_or_default()
}

fn rows_to_box_plot(rows: &[AggregateRow]) -> String {
    let groups: Vec<BoxGroup> = rows
        .iter()
        .map(|r| BoxGroup {
            label: format!("{} ({})", r.label, r.kind),
            boxes: vec![r.jaccard_box(), r.rbo_box()],
        })
        .collect();
    let title = format!("{} similarity", capitalize(rows[0].population.as_str()));
    svg::box_plot(&title, &["Jaccard", "RBO"], &groups)
}

/// Engine rows with source and brand side by side.
pub fn engine_comparison_markdown(rows: &[AggregateRow]) -> String {
    let mut by_engine: BTreeMap<&str, [Option<&AggregateRow>; 2]> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.scope == Scope::Engine) {
        let slot = by_engine.entry(r.label.as_str()).or_default();
        slot[usize::from(r.kind == ItemKind::Brand)] = Some(r);
    }
    let mut out = String::from(
        "| Engine | Source Jac. Mean | Source RBO Mean | Brand Jac. Mean | Brand RBO Mean |\n|---|---:|---:|---:|---:|\n",
    );
    let cell = |r: Option<&AggregateRow>, f: fn(&AggregateRow) -> SimilarityValue| {
        r.map_or_else(|| "n/a".to_string(), |r| fmt3(f(r)))
    };
    for (engine, [source, brand]) in by_engine {
        let _ = writeln!(
            out,
            "| {engine} | {} | {} | {} | {} |",
            cell(source, |r| r.jaccard_mean),
            cell(source, |r| r.rbo_mean),
            cell(brand, |r| r.jaccard_mean),
            cell(brand, |r| r.rbo_mean)
        );
    }
    out
}

pub fn prompt_breakdown_csv(b: &PromptBreakdown) -> Result<Vec<u8>> {
    if b.rows.is_empty() {
        let mut out = format!("{SCHEMA_LINE}\n").into_bytes();
        out.extend_from_slice(
            b"campaign,prompt_index,prompt_text,kind,pair_count,jaccard_mean,rbo_mean,above_reference\n",
        );
        return Ok(out);
    }
    with_schema_line(&b.rows)
}

pub fn prompt_breakdown_svg(b: &PromptBreakdown) -> Result<String> {
    if b.rows.is_empty() {
        return Err(Error::EmptyReport("prompt breakdown"));
    }
    let rows: Vec<BarRow> = b
        .rows
        .iter()
        .map(|r| BarRow {
            label: format!("{} #{} ({})", r.campaign, r.prompt_index, r.kind),
            values: vec![r.jaccard_mean, r.rbo_mean],
        })
        .collect();
    Ok(svg::bar_chart(
        "Per-prompt similarity (ascending Jaccard)",
        &["Jaccard", "RBO"],
        &rows,
        Some(REFERENCE_THRESHOLD),
    ))
}

pub fn gini_heatmap_svg(m: &GiniMatrix) -> Result<String> {
    if m.cells.is_empty() {
        return Err(Error::EmptyReport("gini heatmap"));
    }
    let campaigns = m.campaigns();
    let engines = m.engines();
    let cells: Vec<Vec<Option<f64>>> = campaigns
        .iter()
        .map(|c| {
            engines
                .iter()
                .map(|e| m.cells.get(&(c.clone(), e.clone())).copied())
                .collect()
        })
        .collect();
    Ok(svg::heatmap(
        "Source citation Gini coefficient by campaign and engine",
        &campaigns
            .iter()
            .map(|c| c.display_name().to_string())
            .collect::<Vec<_>>(),
        &engines
            .iter()
            .map(|e| e.label().to_string())
            .collect::<Vec<_>>(),
        &cells,
    ))
}

pub fn curve_svg(curve: &ConvergenceCurve, reference: &[f64]) -> String {
    let x_label = match curve.mode {
        crate::convergence::CurveMode::Window => "window length d (days)",
        _ => "runs n",
    };
    let series = Series {
        name: "mean SE".to_string(),
        points: curve
            .points
            .iter()
            .map(|p| (p.size as f64, p.mean_se))
            .collect(),
    };
    svg::line_chart(
        &format!("Convergence ({})", curve.mode.as_str()),
        x_label,
        "standard error",
        &[series],
        reference,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CampaignId, EngineId, PairOutcome, PromptId};
    use chrono::{Duration, TimeZone, Utc};

    fn pair(
        campaign: &str,
        engine: &str,
        prompt: u32,
        run: u32,
        outcome: PairOutcome,
    ) -> ScoredPair {
        let c = CampaignId::new(campaign);
        let rk = |r: u32| RecordKey {
            engine: EngineId::parse(engine),
            campaign: c.key().to_string(),
            prompt_index: prompt,
            timestamp: Utc.with_ymd_and_hms(2026, 3, 21, 10, 0, r).unwrap(),
            run_index: r,
        };
        ScoredPair {
            key: GroupKey {
                campaign: c.clone(),
                engine: EngineId::parse(engine),
                prompt: PromptId::new(c.clone(), prompt, format!("prompt {prompt}")),
                kind: ItemKind::Source,
            },
            first: rk(run),
            second: rk(run + 1),
            score: PairScore {
                outcome,
                delta_t: Duration::seconds(1),
            },
        }
    }

    fn scored(j: f64, r: f64) -> PairOutcome {
        PairOutcome::Scored { jaccard: j, rbo: r }
    }

    #[test]
    fn excluded_pairs_are_counted_not_averaged() {
        let s = vec![
            pair("Telecom", "gemini", 1, 1, scored(0.2, 0.1)),
            pair("Telecom", "gemini", 1, 2, scored(0.4, 0.3)),
            pair("Telecom", "gemini", 1, 3, PairOutcome::Excluded),
        ];
        let rows = aggregate(&s, Population::Temporal, Scope::Campaign);
        assert_eq!(rows.len(), 1);
        let r = &rows[0];
        assert!((r.jaccard_mean.value().unwrap() - 0.3).abs() < 1e-15);
        assert_eq!((r.pair_count, r.excluded_count), (2, 1));
        assert_eq!(r.max_runs, 4);
        // sample SD of {0.2, 0.4}
        assert!((r.jaccard_sd.value().unwrap() - 0.02f64.sqrt()).abs() < 1e-15);
        assert!(!r.degenerate);
    }

    #[test]
    fn single_pair_is_degenerate() {
        let rows = aggregate(
            &[pair("A", "gemini", 1, 1, scored(0.5, 0.2))],
            Population::Temporal,
            Scope::All,
        );
        assert!(rows[0].degenerate);
        assert_eq!(rows[0].jaccard_sd, SimilarityValue::Value(0.0));
    }

    #[test]
    fn all_excluded_scope_reports_excluded() {
        let rows = aggregate(
            &[pair("A", "gemini", 1, 1, PairOutcome::Excluded)],
            Population::Temporal,
            Scope::All,
        );
        assert_eq!(rows[0].pair_count, 0);
        assert!(rows[0].jaccard_mean.is_excluded());
        let csv = String::from_utf8(render_report(&rows, ReportFormat::Csv).unwrap()).unwrap();
        assert!(csv.contains(",excluded,"));
    }

    #[test]
    fn quartiles_interpolate() {
        let s = Summary::of(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(
            (s.min, s.q1, s.median, s.q3, s.max),
            (1.0, 1.75, 2.5, 3.25, 4.0)
        );
    }

    #[test]
    fn scopes_group_separately() {
        let s = vec![
            pair("A", "gemini", 1, 1, scored(0.2, 0.1)),
            pair("A", "chatgpt", 2, 1, scored(0.6, 0.1)),
            pair("B", "gemini", 1, 1, scored(1.0, 0.1)),
        ];
        let by_engine = aggregate(&s, Population::Simultaneous, Scope::Engine);
        let labels: Vec<_> = by_engine.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels, ["ChatGPT", "Gemini"]);
        assert_eq!(by_engine[1].pair_count, 2);
        let by_prompt = aggregate(&s, Population::Simultaneous, Scope::Prompt);
        assert_eq!(by_prompt.len(), 3);
        assert_eq!(by_prompt[0].label, "A#1");
    }

    #[test]
    fn csv_has_header_and_one_line_and_round_trips() {
        let rows = aggregate(
            &[pair("A", "gemini", 1, 1, scored(0.5, 0.2))],
            Population::Temporal,
            Scope::Campaign,
        );
        let csv = render_report(&rows, ReportFormat::Csv).unwrap();
        let text = String::from_utf8(csv.clone()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], SCHEMA_LINE);
        assert_eq!(lines[1], CSV_HEADER);
        let back = parse_csv(&csv).unwrap();
        assert_eq!(back, rows);
        assert_eq!(render_report(&back, ReportFormat::Csv).unwrap(), csv);
    }

    #[test]
    fn json_reports_excluded_count() {
        let s = vec![
            pair("A", "gemini", 1, 1, scored(0.5, 0.2)),
            pair("A", "gemini", 1, 2, PairOutcome::Excluded),
            pair("A", "gemini", 1, 3, PairOutcome::Excluded),
            pair("A", "gemini", 1, 4, PairOutcome::Excluded),
        ];
        let rows = aggregate(&s, Population::Temporal, Scope::Campaign);
        let json: serde_json::Value =
            serde_json::from_slice(&render_report(&rows, ReportFormat::Json).unwrap()).unwrap();
        assert_eq!(json[0]["excluded_count"], 3);
    }

    #[test]
    fn unknown_format_and_empty_svg_fail() {
        assert!(matches!(
            "pdf".parse::<ReportFormat>(),
            Err(Error::UnknownFormat(_))
        ));
        assert!(matches!(
            render_report(&[], ReportFormat::Svg),
            Err(Error::EmptyReport(_))
        ));
        let empty = String::from_utf8(render_report(&[], ReportFormat::Csv).unwrap()).unwrap();
        assert_eq!(empty.lines().nth(1), Some(CSV_HEADER));
    }

    #[test]
    fn markdown_layouts() {
        let s = vec![pair("Telecom", "gemini", 1, 1, scored(0.5, 0.25))];
        let t = String::from_utf8(
            render_report(
                &aggregate(&s, Population::Temporal, Scope::Campaign),
                ReportFormat::Markdown,
            )
            .unwrap(),
        )
        .unwrap();
        assert!(t.contains("| Campaign | Jac. Mean | Jac. SD | RBO Mean | RBO SD |"));
        assert!(t.contains("| Telecom | 0.500 | 0.000 | 0.250 | 0.000 |"));
        let m = String::from_utf8(
            render_report(
                &aggregate(&s, Population::Simultaneous, Scope::Campaign),
                ReportFormat::Markdown,
            )
            .unwrap(),
        )
        .unwrap();
        assert!(m.contains("| Telecom | 1 | 2 | 0.500 | 0.000 | 0.250 |"));
    }

    #[test]
    fn prompts_sorted_ascending_with_flag() {
        let s = vec![
            pair("A", "gemini", 1, 1, scored(0.7, 0.5)),
            pair("A", "gemini", 2, 1, scored(0.3, 0.1)),
            pair("A", "gemini", 3, 1, PairOutcome::Excluded),
        ];
        let b = per_prompt_breakdown(&s);
        let order: Vec<u32> = b.rows.iter().map(|r| r.prompt_index).collect();
        assert_eq!(order, [2, 1]);
        assert!(!b.rows[0].above_reference && b.rows[1].above_reference);
        assert_eq!(b.warnings.len(), 1);
        assert!(b.warnings[0].contains("A#3"));
        assert!(prompt_breakdown_svg(&b)
            .unwrap()
            .contains("stroke-dasharray"));
    }

    #[test]
    fn box_plot_from_rows() {
        let s = vec![
            pair("A", "gemini", 1, 1, scored(0.2, 0.1)),
            pair("A", "gemini", 1, 2, scored(0.4, 0.3)),
        ];
        let rows = aggregate(&s, Population::Temporal, Scope::Campaign);
        let svg = String::from_utf8(render_report(&rows, ReportFormat::Svg).unwrap()).unwrap();
        assert!(svg.contains(">0.30<"));
    }
}
