use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use geo_stability::brands::{
    brand_detection_rates, campaign_detection_rates, detect_record, qualify_campaigns,
    DetectionResult, LexiconSet, QualificationReport, DEFAULT_QUALIFICATION_THRESHOLD,
};
use geo_stability::collector::{run_plan, EngineAdapter, HttpAdapter, SimulatedEngine};
use geo_stability::concentration::gini_matrix;
use geo_stability::convergence::{
    brand_daily_series, brand_run_curve, brand_run_series, full_window_range, source_run_curve,
    source_run_groups, window_convergence_curve, ConvergenceCurve, RunConvergenceConfig,
    WindowMode, DEFAULT_RESAMPLES, DEFAULT_RUNS_PER_GROUP,
};
use geo_stability::ingest::{
    apply_filters, coverage_table, parse_log_file, FilteredDataset, IngestConfig,
};
use geo_stability::model::{CampaignId, EngineId, ItemKind, RboParams};
use geo_stability::pairing::{
    cited_run_share, consecutive_day_pairs, simultaneous_pairs, SimultaneousPairingConfig,
    TemporalPairingConfig,
};
use geo_stability::report::{
    aggregate, curve_svg, engine_comparison_markdown, gini_heatmap_svg, per_prompt_breakdown,
    prompt_breakdown_csv, prompt_breakdown_svg, render_report, AggregateRow, Population,
    ReportFormat, Scope, SCHEMA_LINE,
};
use geo_stability::Error;

use crate::config::{merge_filters, FileConfig};
use crate::plan::{load_collect_plan, load_simulation};
use crate::{
    Cli, Command, ConvergeMode, ConvergenceArgs, DataArgs, FilterArgs, KindArg, LexiconArgs,
    MetricArgs, PairMode,
};

const RUN_THRESHOLDS: [f64; 2] = [0.10, 0.08];
const WINDOW_THRESHOLDS: [f64; 3] = [0.10, 0.05, 0.02];

struct Ctx {
    out: PathBuf,
    seed: u64,
    file: FileConfig,
    warnings: Vec<String>,
}

pub fn run(cli: Cli) -> Result<Vec<String>> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let mut ctx = Ctx {
        out: cli
            .out
            .clone()
            .or_else(|| file.out.clone())
            .unwrap_or_else(|| PathBuf::from("out")),
        seed: cli.seed.or(file.seed).unwrap_or(0),
        file,
        warnings: Vec::new(),
    };
    match &cli.command {
        Command::Ingest(a) => ingest(&mut ctx, a)?,
        Command::Similarity(a) => {
            let ds = ctx.load(&a.data.inputs, &a.data.filters)?;
            let kind = match a.kind {
                KindArg::Source => ItemKind::Source,
                KindArg::Brand => ItemKind::Brand,
            };
            let (ds, lexicons) = if kind == ItemKind::Brand {
                let lexicons = ctx.require_lexicon(&a.lexicon)?;
                let q = ctx.qualification(&a.lexicon, &lexicons, &ds, &a.data.filters)?;
                (qualified_subset(&ds, &q), Some(lexicons))
            } else {
                (ds, None)
            };
            let section = similarity(&mut ctx, &ds, a.mode, kind, lexicons.as_ref(), &a.metric)?;
            print!("{}", section.0);
        }
        Command::Gini(a) => {
            let ds = ctx.load(&a.inputs, &a.filters)?;
            print!("{}", gini(&mut ctx, &ds)?);
        }
        Command::Converge(a) => {
            let ds = ctx.load(&a.data.inputs, &a.data.filters)?;
            let lexicons = ctx.require_lexicon(&a.lexicon)?;
            let q = ctx.qualification(&a.lexicon, &lexicons, &ds, &a.data.filters)?;
            let md = match a.mode {
                ConvergeMode::Runs => converge_runs(&mut ctx, &ds, &lexicons, &q, &a.convergence)?,
                ConvergeMode::Window => {
                    converge_window(&mut ctx, &ds, &lexicons, &q, &a.convergence)?
                }
            };
            print!("{md}");
        }
        Command::Detect(a) => {
            let ds = ctx.load(&a.data.inputs, &a.data.filters)?;
            let lexicons = ctx.require_lexicon(&a.lexicon)?;
            detect(&mut ctx, &ds, &lexicons)?;
        }
        Command::Qualify(a) => {
            let ds = ctx.load(&a.data.inputs, &a.data.filters)?;
            let lexicons = ctx.require_lexicon(&a.lexicon)?;
            let q = ctx.qualification(&a.lexicon, &lexicons, &ds, &a.data.filters)?;
            write_qualification(&ctx, &q)?;
            print!("{}", qualification_markdown(&q));
        }
        Command::Collect(a) => collect(&mut ctx, &a.plan, &a.output)?,
        Command::Simulate(a) => simulate(&mut ctx, &a.spec, &a.output)?,
        Command::Report(a) => report(&mut ctx, a)?,
    }
    Ok(ctx.warnings)
}

impl Ctx {
    fn write(&self, name: &str, bytes: impl AsRef<[u8]>) -> Result<()> {
        std::fs::create_dir_all(&self.out)
            .with_context(|| format!("cannot create output directory {}", self.out.display()))?;
        let path = self.out.join(name);
        let bytes = bytes.as_ref();
        let versioned;
        let bytes = if name.ends_with(".csv") && !bytes.starts_with(b"#") {
            versioned = [format!("{SCHEMA_LINE}\n").as_bytes(), bytes].concat();
            &versioned[..]
        } else {
            bytes
        };
        std::fs::write(&path, bytes).with_context(|| format!("cannot write {}", path.display()))?;
        eprintln!("wrote {}", path.display());
        Ok(())
    }

    fn filters(&self, flags: &FilterArgs) -> Result<IngestConfig> {
        merge_filters(self.file.filters.as_ref(), flags)
    }

    fn load(&mut self, inputs: &[PathBuf], flags: &FilterArgs) -> Result<FilteredDataset> {
        let cfg = self.filters(flags)?;
        let mut records = Vec::new();
        for path in inputs {
            let log = parse_log_file(path)?;
            for e in &log.errors {
                self.warnings.push(format!("{}: {e}", path.display()));
            }
            records.extend(log.records);
        }
        Ok(apply_filters(records, &cfg))
    }

    fn lexicon_path(&self, a: &LexiconArgs) -> Option<PathBuf> {
        a.lexicon.clone().or_else(|| self.file.lexicon.clone())
    }

    fn require_lexicon(&self, a: &LexiconArgs) -> Result<LexiconSet> {
        let path = self
            .lexicon_path(a)
            .ok_or_else(|| anyhow!("brand analysis requires a lexicon (--lexicon FILE)"))?;
        Ok(LexiconSet::load(&path)?)
    }

    fn threshold(&self, a: &LexiconArgs) -> f64 {
        a.threshold
            .or(self.file.threshold)
            .unwrap_or(DEFAULT_QUALIFICATION_THRESHOLD)
    }

    /// Detection-rate qualification, computed on `--qualify-on` logs when
    /// given and on `dataset` otherwise. Every campaign of `dataset` needs a
    /// lexicon.
    fn qualification(
        &mut self,
        a: &LexiconArgs,
        lexicons: &LexiconSet,
        dataset: &FilteredDataset,
        filters: &FilterArgs,
    ) -> Result<QualificationReport> {
        for c in dataset.campaigns() {
            if lexicons.get(&c).is_none() {
                return Err(Error::MissingLexicon(c.display_name().to_string()).into());
            }
        }
        let qualify_on = match (&a.qualify_on, &self.file.qualify_on) {
            (flag, _) if !flag.is_empty() => flag.clone(),
            (_, Some(file)) => file.clone(),
            _ => Vec::new(),
        };
        let basis = if qualify_on.is_empty() {
            None
        } else {
            Some(self.load(&qualify_on, filters)?)
        };
        let rates = campaign_detection_rates(basis.as_ref().unwrap_or(dataset), lexicons);
        let report = qualify_campaigns(&rates, self.threshold(a))?;
        for c in dataset.campaigns() {
            if !rates.contains_key(&c) {
                self.warnings.push(format!(
                    "campaign {c} has no records to qualify on; excluded from brand analysis"
                ));
            }
        }
        for c in report.disqualified() {
            self.warnings.push(format!(
                "campaign {} excluded from brand analysis: detection rate {:.3} below threshold {:.2}",
                c.campaign, c.rate, report.threshold
            ));
        }
        Ok(report)
    }

    fn formats(&self, m: &MetricArgs) -> Result<Vec<ReportFormat>> {
        let names: Vec<String> = if !m.formats.is_empty() {
            m.formats.clone()
        } else if let Some(f) = &self.file.formats {
            f.clone()
        } else {
            vec!["csv".into(), "md".into(), "svg".into()]
        };
        names
            .iter()
            .map(|n| Ok(n.parse::<ReportFormat>()?))
            .collect()
    }

    fn rbo_params(&self, m: &MetricArgs) -> Result<RboParams> {
        match m.persistence.or(self.file.persistence) {
            Some(p) => Ok(RboParams::new(p)?),
            None => Ok(RboParams::default()),
        }
    }

    fn run_config(&self, c: &ConvergenceArgs) -> RunConvergenceConfig {
        RunConvergenceConfig {
            runs_per_group: c
                .runs_per_group
                .or(self.file.runs_per_group)
                .unwrap_or(DEFAULT_RUNS_PER_GROUP),
            sizes: Vec::new(),
            resamples: c
                .resamples
                .or(self.file.resamples)
                .unwrap_or(DEFAULT_RESAMPLES),
            seed: self.seed,
        }
    }
}

fn qualified_subset(ds: &FilteredDataset, q: &QualificationReport) -> FilteredDataset {
    FilteredDataset::from_records(
        ds.records
            .iter()
            .filter(|r| q.is_qualified(&r.prompt.campaign))
            .cloned()
            .collect(),
    )
}

fn ingest(ctx: &mut Ctx, a: &DataArgs) -> Result<()> {
    let ds = ctx.load(&a.inputs, &a.filters)?;
    let d = &ds.drops;
    println!("records kept: {}", ds.len());
    println!("records dropped: {}", d.dropped_records());
    println!("  excluded engines: {}", d.excluded_engines);
    println!("  excluded campaigns: {}", d.excluded_campaigns);
    println!("  outside date window: {}", d.outside_window);
    println!("  excluded dates: {}", d.excluded_dates);
    println!("citations dropped:");
    println!("  blocked domains: {}", d.blocked_citations);
    println!("  malformed URLs: {}", d.malformed_citations);
    println!("malformed lines: {}", ctx.warnings.len());
    if let Some(share) = cited_run_share(&ds) {
        println!("runs with at least one citation: {:.1}%", share * 100.0);
    }
    let coverage = coverage_table(&ds);
    let mut lines = Vec::new();
    geo_stability::ingest::write_records(&mut lines, &ds.records)?;
    ctx.write("filtered.jsonl", lines)?;
    ctx.write("coverage.csv", coverage.to_csv())?;
    print!("\n{}", coverage.to_csv());
    Ok(())
}

fn table_name(mode: PairMode, kind: ItemKind) -> &'static str {
    match (mode, kind) {
        (PairMode::Temporal, ItemKind::Source) => "table2_source_temporal",
        (PairMode::Temporal, ItemKind::Brand) => "table3_brand_temporal",
        (PairMode::Simultaneous, ItemKind::Source) => "table4_source_simultaneous",
        (PairMode::Simultaneous, ItemKind::Brand) => "table5_brand_simultaneous",
    }
}

fn population(mode: PairMode) -> Population {
    match mode {
        PairMode::Temporal => Population::Temporal,
        PairMode::Simultaneous => Population::Simultaneous,
    }
}

/// Markdown for the console and the report, plus the engine-scope rows.
struct SimilarityOutput(String, Vec<AggregateRow>);

fn similarity(
    ctx: &mut Ctx,
    ds: &FilteredDataset,
    mode: PairMode,
    kind: ItemKind,
    lexicons: Option<&LexiconSet>,
    metric: &MetricArgs,
) -> Result<SimilarityOutput> {
    let params = ctx.rbo_params(metric)?;
    let formats = ctx.formats(metric)?;
    let pairs = match mode {
        PairMode::Temporal => {
            let cfg = TemporalPairingConfig {
                max_gap_days: metric.max_gap_days.or(ctx.file.max_gap_days).unwrap_or(1),
            };
            consecutive_day_pairs(ds, cfg, kind)
        }
        PairMode::Simultaneous => {
            simultaneous_pairs(ds, SimultaneousPairingConfig::for_kind(kind), kind)
        }
    };
    let scores = geo_stability::report::score_pairs(&pairs, params, lexicons)?;
    let pop = population(mode);
    let name = table_name(mode, kind);
    let suffix = format!("{kind}_{}", pop.as_str());

    let mut manifest = Vec::new();
    pairs.write_manifest(&mut manifest)?;
    ctx.write(&format!("pairs_{suffix}.csv"), manifest)?;

    let rows = aggregate(&scores, pop, Scope::Campaign);
    if rows.is_empty() {
        ctx.warnings
            .push(format!("no {kind} pairs in {} mode", pop.as_str()));
    }
    for f in &formats {
        match f {
            ReportFormat::Svg if rows.is_empty() => {}
            ReportFormat::Svg => ctx.write(
                &format!("fig_boxplot_{suffix}.svg"),
                render_report(&rows, *f)?,
            )?,
            _ => ctx.write(
                &format!("{name}.{}", f.extension()),
                render_report(&rows, *f)?,
            )?,
        }
    }
    let engine_rows = aggregate(&scores, pop, Scope::Engine);
    let engine_name = match mode {
        PairMode::Simultaneous => format!("table6_{suffix}_by_engine"),
        PairMode::Temporal => format!("{suffix}_by_engine"),
    };
    ctx.write(
        &format!("{engine_name}.csv"),
        render_report(&engine_rows, ReportFormat::Csv)?,
    )?;

    let prompts = per_prompt_breakdown(&scores);
    ctx.warnings.extend(prompts.warnings.iter().cloned());
    ctx.write(
        &format!("fig5_prompts_{suffix}.csv"),
        prompt_breakdown_csv(&prompts)?,
    )?;
    if !prompts.rows.is_empty() {
        ctx.write(
            &format!("fig5_prompts_{suffix}.svg"),
            prompt_breakdown_svg(&prompts)?,
        )?;
    }
    let stable = prompts.rows.iter().filter(|r| r.above_reference).count();
    let mut md = String::from_utf8(render_report(&rows, ReportFormat::Markdown)?)?;
    let _ = writeln!(
        md,
        "{} pairs in {} groups; {stable} of {} prompts at or above mean Jaccard 0.5.\n",
        pairs.len(),
        pairs.group_count(),
        prompts.rows.len()
    );
    Ok(SimilarityOutput(md, engine_rows))
}

fn gini(ctx: &mut Ctx, ds: &FilteredDataset) -> Result<String> {
    let m = gini_matrix(ds);
    for (c, e) in &m.undefined {
        ctx.warnings.push(format!(
            "no citations for {c} on {e}; Gini undefined and left out"
        ));
    }
    ctx.write("gini_matrix.csv", m.to_csv())?;
    let mut by_campaign = String::from("campaign,gini_mean\n");
    for (c, g) in m.campaign_means() {
        let _ = writeln!(by_campaign, "{},{g:.6}", c.display_name());
    }
    let mut by_engine = String::from("engine,gini_mean\n");
    for (e, g) in m.engine_means() {
        let _ = writeln!(by_engine, "{e},{g:.6}");
    }
    ctx.write("table8_gini_by_campaign.csv", &by_campaign)?;
    ctx.write("table9_gini_by_engine.csv", &by_engine)?;
    if m.cells.is_empty() {
        ctx.warnings
            .push("no campaign-engine group has citations".into());
    } else {
        ctx.write("fig3_gini_heatmap.svg", gini_heatmap_svg(&m)?)?;
    }
    let mut md =
        String::from("### Citation concentration (Gini)\n\n| Campaign | Mean Gini |\n|---|---:|\n");
    for (c, g) in m.campaign_means() {
        let _ = writeln!(md, "| {} | {g:.3} |", c.display_name());
    }
    md.push_str("\n| Engine | Mean Gini |\n|---|---:|\n");
    for (e, g) in m.engine_means() {
        let _ = writeln!(md, "| {e} | {g:.3} |");
    }
    if let Some(g) = m.global_mean() {
        let _ = writeln!(md, "\nOverall mean Gini: {g:.3}");
    }
    md.push('\n');
    Ok(md)
}

fn write_curve(ctx: &Ctx, stem: &str, curve: &ConvergenceCurve, levels: &[f64]) -> Result<String> {
    ctx.write(&format!("{stem}.csv"), curve.to_csv())?;
    let md = curve.to_markdown(levels);
    ctx.write(&format!("{stem}.md"), &md)?;
    Ok(md)
}

fn converge_runs(
    ctx: &mut Ctx,
    ds: &FilteredDataset,
    lexicons: &LexiconSet,
    q: &QualificationReport,
    args: &ConvergenceArgs,
) -> Result<String> {
    let cfg = ctx.run_config(args);
    let mut md = String::new();
    let series = brand_run_series(ds, lexicons, Some(q), cfg.runs_per_group);
    match brand_run_curve(&series, &cfg) {
        Ok(curve) => {
            let _ = writeln!(md, "### Per-brand detection SE by number of runs\n");
            md.push_str(&write_curve(
                ctx,
                "table10_runs_convergence",
                &curve,
                &RUN_THRESHOLDS,
            )?);
            ctx.write(
                "fig_runs_convergence.svg",
                curve_svg(&curve, &RUN_THRESHOLDS),
            )?;
        }
        Err(Error::NoQualifyingGroups) => ctx.warnings.push(format!(
            "no brand series: no qualified engine-prompt group has {} runs with a detected brand",
            cfg.runs_per_group
        )),
        Err(e) => return Err(e.into()),
    }
    match source_run_curve(&source_run_groups(ds, cfg.runs_per_group), &cfg) {
        Ok(curve) => {
            let _ = writeln!(md, "\n### Source coverage SE by number of runs\n");
            md.push_str(&write_curve(
                ctx,
                "runs_source_convergence",
                &curve,
                &RUN_THRESHOLDS,
            )?);
        }
        Err(Error::NoQualifyingGroups) => ctx.warnings.push(format!(
            "no source series: no engine-prompt group has {} runs with citations",
            cfg.runs_per_group
        )),
        Err(e) => return Err(e.into()),
    }
    md.push('\n');
    Ok(md)
}

fn parse_windows(spec: &str) -> Result<Vec<usize>> {
    let mut out = BTreeSet::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once('-') {
            let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().parse()?);
            if a == 0 || a > b {
                bail!("invalid window range {part:?}");
            }
            out.extend(a..=b);
        } else {
            let d: usize = part
                .parse()
                .with_context(|| format!("invalid window length {part:?}"))?;
            if d == 0 {
                bail!("window length must be at least 1");
            }
            out.insert(d);
        }
    }
    Ok(out.into_iter().collect())
}

fn converge_window(
    ctx: &mut Ctx,
    ds: &FilteredDataset,
    lexicons: &LexiconSet,
    q: &QualificationReport,
    args: &ConvergenceArgs,
) -> Result<String> {
    let series = brand_daily_series(ds, lexicons, Some(q));
    let windows = match args.windows.as_ref().or(ctx.file.windows.as_ref()) {
        Some(spec) => parse_windows(spec)?,
        None => full_window_range(&series),
    };
    let strict = args.strict_calendar || ctx.file.strict_calendar.unwrap_or(false);
    let mode = if strict {
        WindowMode::StrictCalendar
    } else {
        WindowMode::Compressed
    };
    match window_convergence_curve(&series, &windows, mode) {
        Ok(curve) => {
            let mut md = String::from("### Per-brand detection SE by window length\n\n");
            md.push_str(&write_curve(
                ctx,
                "table11_window_convergence",
                &curve,
                &WINDOW_THRESHOLDS,
            )?);
            ctx.write(
                "fig_window_convergence.svg",
                curve_svg(&curve, &WINDOW_THRESHOLDS),
            )?;
            md.push('\n');
            Ok(md)
        }
        Err(Error::NoQualifyingGroups) => {
            ctx.warnings
                .push("no brand series for window convergence".into());
            Ok(String::new())
        }
        Err(e) => Err(e.into()),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', ';']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn detect(ctx: &mut Ctx, ds: &FilteredDataset, lexicons: &LexiconSet) -> Result<()> {
    let mut per_record = String::from("engine,campaign,prompt_index,timestamp,run_index,brands\n");
    let mut by_campaign: BTreeMap<CampaignId, Vec<DetectionResult>> = BTreeMap::new();
    let mut missing = BTreeSet::new();
    for r in &ds.records {
        let Some(lexicon) = lexicons.get(&r.prompt.campaign) else {
            missing.insert(r.prompt.campaign.clone());
            continue;
        };
        let d = detect_record(r, lexicon);
        let k = r.key();
        let _ = writeln!(
            per_record,
            "{},{},{},{},{},{}",
            csv_field(k.engine.label()),
            csv_field(r.prompt.campaign.display_name()),
            k.prompt_index,
            k.timestamp
                .to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            k.run_index,
            csv_field(&d.brands_ordered.as_slice().join(";"))
        );
        by_campaign
            .entry(r.prompt.campaign.clone())
            .or_default()
            .push(d);
    }
    for c in missing {
        ctx.warnings.push(format!(
            "no lexicon for campaign {c}; its records were skipped"
        ));
    }
    let mut rates = String::from("campaign,records,detection_rate\n");
    let mut brand_rates = String::from("campaign,brand,rate\n");
    println!("| Campaign | Records | Detection rate |\n|---|---:|---:|");
    for (c, results) in &by_campaign {
        let rate = geo_stability::brands::detection_rate(results)?;
        let _ = writeln!(
            rates,
            "{},{},{rate}",
            csv_field(c.display_name()),
            results.len()
        );
        println!("| {c} | {} | {rate:.3} |", results.len());
        let lexicon = lexicons.get(c).expect("checked above");
        for (brand, r) in brand_detection_rates(results, lexicon)? {
            let _ = writeln!(
                brand_rates,
                "{},{},{r}",
                csv_field(c.display_name()),
                csv_field(&brand)
            );
        }
    }
    ctx.write("detections.csv", per_record)?;
    ctx.write("detection_rates.csv", rates)?;
    ctx.write("brand_rates.csv", brand_rates)?;
    Ok(())
}

fn qualification_markdown(q: &QualificationReport) -> String {
    let mut md = format!(
        "### Brand-detection qualification (threshold {:.2})\n\n| Campaign | Detection rate | Qualified |\n|---|---:|---|\n",
        q.threshold
    );
    for c in &q.campaigns {
        let _ = writeln!(
            md,
            "| {} | {:.3} | {} |",
            c.campaign,
            c.rate,
            if c.qualified { "yes" } else { "no" }
        );
    }
    md.push('\n');
    md
}

fn write_qualification(ctx: &Ctx, q: &QualificationReport) -> Result<()> {
    let mut csv = String::from("campaign,detection_rate,threshold,qualified\n");
    for c in &q.campaigns {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            csv_field(&c.campaign),
            c.rate,
            q.threshold,
            c.qualified
        );
    }
    ctx.write("qualification.csv", csv)
}

fn collection_output(ctx: &mut Ctx, output: &str) -> Result<(PathBuf, BufWriter<File>)> {
    std::fs::create_dir_all(&ctx.out)
        .with_context(|| format!("cannot create output directory {}", ctx.out.display()))?;
    let path = ctx.out.join(output);
    let file = File::create(&path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok((path, BufWriter::new(file)))
}

fn finish_collection(
    ctx: &mut Ctx,
    path: &Path,
    summary: &geo_stability::collector::CollectionSummary,
    summary_name: &str,
) -> Result<()> {
    eprintln!("wrote {}", path.display());
    for f in &summary.failures {
        ctx.warnings.push(format!(
            "{} {} day {} rep {}: failed after {} attempts: {}",
            f.engine, f.prompt, f.day, f.rep, f.attempts, f.reason
        ));
    }
    let mut json = serde_json::to_string_pretty(summary)?;
    json.push('\n');
    ctx.write(summary_name, json)?;
    println!("| Engine | Successes | Failures |\n|---|---:|---:|");
    for (e, t) in &summary.per_engine {
        println!("| {e} | {} | {} |", t.successes, t.failures);
    }
    Ok(())
}

fn collect(ctx: &mut Ctx, plan_path: &Path, output: &str) -> Result<()> {
    let (plan, endpoints) = load_collect_plan(plan_path)?;
    let adapters: BTreeMap<EngineId, Box<dyn EngineAdapter>> = endpoints
        .into_iter()
        .map(|(e, ep)| {
            (
                e,
                Box::new(HttpAdapter::new(ep.url, ep.timeout)) as Box<dyn EngineAdapter>,
            )
        })
        .collect();
    let (path, sink) = collection_output(ctx, output)?;
    let summary = run_plan(&plan, &adapters, sink)?;
    finish_collection(ctx, &path, &summary, "collection_summary.json")
}

fn simulate(ctx: &mut Ctx, spec: &Path, output: &str) -> Result<()> {
    let (plan, sim) = load_simulation(spec, ctx.seed)?;
    let mut adapters: BTreeMap<EngineId, Box<dyn EngineAdapter>> = BTreeMap::new();
    for e in &plan.engines {
        adapters.insert(e.clone(), Box::new(SimulatedEngine::new(sim.clone(), e)?));
    }
    let (path, sink) = collection_output(ctx, output)?;
    let summary = run_plan(&plan, &adapters, sink)?;
    finish_collection(ctx, &path, &summary, "simulation_summary.json")
}

fn report(ctx: &mut Ctx, a: &crate::ReportArgs) -> Result<()> {
    let temporal = ctx.load(&a.temporal, &a.filters)?;
    let mut md = String::from("# Stability report\n\n## Coverage\n\n");
    let coverage = coverage_table(&temporal);
    ctx.write("coverage.csv", coverage.to_csv())?;
    let _ = writeln!(md, "```\n{}```\n", coverage.to_csv());

    let lexicons = match ctx.lexicon_path(&a.lexicon) {
        Some(p) => Some(LexiconSet::load(&p)?),
        None => {
            ctx.warnings
                .push("no lexicon given; brand analyses skipped".to_string());
            None
        }
    };
    let qualification = match &lexicons {
        Some(l) => {
            let q = ctx.qualification(&a.lexicon, l, &temporal, &a.filters)?;
            write_qualification(ctx, &q)?;
            md.push_str("## Qualification\n\n");
            md.push_str(&qualification_markdown(&q));
            Some(q)
        }
        None => None,
    };

    md.push_str("## Consecutive-day similarity\n\n");
    let out = similarity(
        ctx,
        &temporal,
        PairMode::Temporal,
        ItemKind::Source,
        None,
        &a.metric,
    )?;
    md.push_str(&out.0);
    if let (Some(l), Some(q)) = (&lexicons, &qualification) {
        let subset = qualified_subset(&temporal, q);
        md.push_str(
            &similarity(
                ctx,
                &subset,
                PairMode::Temporal,
                ItemKind::Brand,
                Some(l),
                &a.metric,
            )?
            .0,
        );
    }

    md.push_str("## Concentration\n\n");
    md.push_str(&gini(ctx, &temporal)?);

    if let (Some(l), Some(q)) = (&lexicons, &qualification) {
        md.push_str("## Observation window\n\n");
        md.push_str(&converge_window(ctx, &temporal, l, q, &a.convergence)?);
    }

    if !a.simultaneous.is_empty() {
        let simul = ctx.load(&a.simultaneous, &a.filters)?;
        md.push_str("## Within-24h similarity\n\n");
        let source = similarity(
            ctx,
            &simul,
            PairMode::Simultaneous,
            ItemKind::Source,
            None,
            &a.metric,
        )?;
        md.push_str(&source.0);
        let mut engine_rows = source.1;
        if let (Some(l), Some(q)) = (&lexicons, &qualification) {
            for c in simul.campaigns() {
                if l.get(&c).is_none() {
                    return Err(Error::MissingLexicon(c.display_name().to_string()).into());
                }
            }
            let subset = qualified_subset(&simul, q);
            let brand = similarity(
                ctx,
                &subset,
                PairMode::Simultaneous,
                ItemKind::Brand,
                Some(l),
                &a.metric,
            )?;
            md.push_str(&brand.0);
            engine_rows.extend(brand.1);
        }
        let by_engine = engine_comparison_markdown(&engine_rows);
        ctx.write("table6_engine_comparison.md", &by_engine)?;
        md.push_str("### By engine\n\n");
        md.push_str(&by_engine);
        md.push('\n');
        if let (Some(l), Some(q)) = (&lexicons, &qualification) {
            md.push_str("## Number of runs\n\n");
            md.push_str(&converge_runs(ctx, &simul, l, q, &a.convergence)?);
        }
    }
    ctx.write("report.md", &md)?;
    println!("{md}");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_lists() {
        assert_eq!(parse_windows("1-3,7").unwrap(), vec![1, 2, 3, 7]);
        assert_eq!(parse_windows("5, 2").unwrap(), vec![2, 5]);
        assert!(parse_windows("0").is_err());
        assert!(parse_windows("4-2").is_err());
        assert!(parse_windows("x").is_err());
    }

    #[test]
    fn table_names_are_stable() {
        assert_eq!(
            table_name(PairMode::Temporal, ItemKind::Source),
            "table2_source_temporal"
        );
        assert_eq!(
            table_name(PairMode::Simultaneous, ItemKind::Brand),
            "table5_brand_simultaneous"
        );
    }
}
