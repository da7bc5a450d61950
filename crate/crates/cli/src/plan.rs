//! Prompt lists and collection / simulation plan files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use chrono::{DateTime, TimeZone, Utc};
use geo_stability::collector::{CollectionPlan, Schedule, SimulatedEngineConfig};
use geo_stability::model::{CampaignId, EngineId, PromptId};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PromptFile {
    campaigns: Vec<PromptCampaign>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PromptCampaign {
    name: String,
    prompts: Vec<String>,
}

/// Prompts numbered from 1 within each campaign, in file order.
pub fn load_prompts(path: &Path, only: &[String]) -> Result<Vec<PromptId>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read prompt file {}", path.display()))?;
    let file: PromptFile =
        toml::from_str(&text).with_context(|| format!("invalid prompt file {}", path.display()))?;
    let wanted: Vec<CampaignId> = only.iter().map(|c| CampaignId::new(c)).collect();
    let mut out = Vec::new();
    for c in file.campaigns {
        let id = CampaignId::new(&c.name);
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        for (i, text) in c.prompts.into_iter().enumerate() {
            out.push(PromptId::new(id.clone(), i as u32 + 1, text));
        }
    }
    if out.is_empty() {
        bail!("no prompts selected from {}", path.display());
    }
    Ok(out)
}

fn default_reps() -> u32 {
    10
}

fn default_days() -> u32 {
    1
}

fn default_retries() -> u32 {
    2
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanSection {
    pub prompts_file: PathBuf,
    #[serde(default)]
    pub campaigns: Vec<String>,
    #[serde(default = "default_reps")]
    pub reps_per_prompt: u32,
    #[serde(default = "default_days")]
    pub days: u32,
    #[serde(default)]
    pub inter_call_delay_secs: f64,
    #[serde(default = "default_retries")]
    pub max_retries: u32,
    pub locale: Option<String>,
    #[serde(default)]
    pub parallel: bool,
    /// First virtual timestamp of a simulation.
    pub start: Option<DateTime<Utc>>,
}

impl PlanSection {
    fn to_plan(
        &self,
        base: &Path,
        engines: Vec<EngineId>,
        schedule: Schedule,
        parallel: bool,
    ) -> Result<CollectionPlan> {
        if !(self.inter_call_delay_secs >= 0.0 && self.inter_call_delay_secs.is_finite()) {
            bail!("inter_call_delay_secs must be a non-negative number");
        }
        if self.reps_per_prompt == 0 || self.days == 0 {
            bail!("reps_per_prompt and days must be at least 1");
        }
        let prompts_file = if self.prompts_file.is_relative() {
            base.join(&self.prompts_file)
        } else {
            self.prompts_file.clone()
        };
        Ok(CollectionPlan {
            prompts: load_prompts(&prompts_file, &self.campaigns)?,
            engines,
            reps_per_prompt: self.reps_per_prompt,
            days: self.days,
            inter_call_delay: Duration::from_secs_f64(self.inter_call_delay_secs),
            max_retries: self.max_retries,
            locale: self.locale.clone(),
            schedule,
            parallel,
        })
    }
}

fn read_toml<T: for<'de> Deserialize<'de>>(path: &Path, what: &str) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {what} {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("invalid {what} {}", path.display()))
}

fn base_dir(path: &Path) -> &Path {
    path.parent().unwrap_or(Path::new("."))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HttpEngineSpec {
    name: String,
    url: String,
    #[serde(default = "default_timeout")]
    timeout_secs: u64,
}

fn default_timeout() -> u64 {
    120
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CollectFile {
    plan: PlanSection,
    engines: Vec<HttpEngineSpec>,
}

pub struct HttpEndpoint {
    pub url: String,
    pub timeout: Duration,
}

pub fn load_collect_plan(
    path: &Path,
) -> Result<(CollectionPlan, BTreeMap<EngineId, HttpEndpoint>)> {
    let file: CollectFile = read_toml(path, "collection plan")?;
    let mut endpoints = BTreeMap::new();
    for e in &file.engines {
        let id = EngineId::parse(&e.name);
        let endpoint = HttpEndpoint {
            url: e.url.clone(),
            timeout: Duration::from_secs(e.timeout_secs),
        };
        if endpoints.insert(id, endpoint).is_some() {
            bail!("engine {} listed twice", e.name);
        }
    }
    let engines = endpoints.keys().cloned().collect();
    let plan = file.plan.to_plan(
        base_dir(path),
        engines,
        Schedule::RealTime,
        file.plan.parallel,
    )?;
    Ok((plan, endpoints))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulateFile {
    plan: PlanSection,
    engines: Vec<String>,
    simulator: SimulatedEngineConfig,
}

pub fn default_start() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2026, 1, 24, 8, 0, 0).unwrap()
}

/// Simulation runs engines one after another on a virtual clock, so the
/// output file depends only on the simulation file and the seed.
pub fn load_simulation(path: &Path, seed: u64) -> Result<(CollectionPlan, SimulatedEngineConfig)> {
    let file: SimulateFile = read_toml(path, "simulation spec")?;
    let mut engines: Vec<EngineId> = file.engines.iter().map(|e| EngineId::parse(e)).collect();
    engines.dedup();
    if engines.is_empty() {
        bail!("simulation spec lists no engines");
    }
    let schedule = Schedule::Virtual {
        start: file.plan.start.unwrap_or_else(default_start),
    };
    let plan = file
        .plan
        .to_plan(base_dir(path), engines, schedule, false)?;
    let mut sim = file.simulator;
    sim.seed = seed;
    sim.validate()?;
    Ok((plan, sim))
}
