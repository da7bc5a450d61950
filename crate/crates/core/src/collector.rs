//! Prompt-batch collection against pluggable engine adapters, and a seeded
//! simulated engine with known per-brand inclusion probabilities.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use chrono::{DateTime, SubsecRound, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::record_to_line;
use crate::model::{EngineId, PromptId, ResponseRecord};
use crate::rng::{derive_seed, SplitMix64};

/// What an adapter returns for one prompt.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineResponse {
    pub answer_text: String,
    /// Citation URLs in the order the engine emitted them.
    #[serde(default)]
    pub citations: Vec<String>,
}

/// One call to an adapter.
#[derive(Debug, Clone, Copy)]
pub struct EngineRequest<'a> {
    pub prompt: &'a PromptId,
    pub locale: Option<&'a str>,
    /// Position of this call among all calls for the prompt on this engine.
    pub draw_index: u64,
}

/// A source of engine answers. Implementations hold no per-call state.
pub trait EngineAdapter: Send + Sync {
    fn query(&self, request: EngineRequest<'_>) -> std::result::Result<EngineResponse, String>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedDomain {
    pub domain: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BrandProbability {
    pub name: String,
    pub p: f64,
}

pub const DEFAULT_TEMPLATE: &str = "Answer to \"{prompt}\": {brands}.";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulatedEngineConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub domains: Vec<WeightedDomain>,
    #[serde(default)]
    pub brands: Vec<BrandProbability>,
    pub citations_min: usize,
    pub citations_max: usize,
    /// `{prompt}` becomes the prompt text, `{brands}` the included brand
    /// names joined by ", ".
    #[serde(default = "default_template")]
    pub answer_template: String,
}

fn default_template() -> String {
    DEFAULT_TEMPLATE.to_string()
}

impl SimulatedEngineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: SimulatedEngineConfig =
            toml::from_str(text).map_err(|e| Error::Simulator(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.citations_min > self.citations_max {
            return Err(Error::Simulator(format!(
                "empty citation range {}..={}",
                self.citations_min, self.citations_max
            )));
        }
        if self.citations_max > 0 && self.domains.is_empty() {
            return Err(Error::Simulator(
                "citations requested but the domain pool is empty".into(),
            ));
        }
        if let Some(d) = self
            .domains
            .iter()
            .find(|d| !(d.weight > 0.0 && d.weight.is_finite()))
        {
            return Err(Error::Simulator(format!(
                "weight of {} must be positive",
                d.domain
            )));
        }
        if let Some(b) = self.brands.iter().find(|b| !(0.0..=1.0).contains(&b.p)) {
            return Err(Error::Simulator(format!(
                "probability of {} must lie in [0, 1]",
                b.name
            )));
        }
        Ok(())
    }
}

/// Deterministic answer for `(cfg.seed, prompt, draw_index)`.
///
/// The citation count is uniform over the configured range (capped at the
/// pool size); domains are drawn by weight without replacement; each brand
/// is included independently with its probability and the included brands
/// appear in shuffled order.
pub fn simulate_response(
    cfg: &SimulatedEngineConfig,
    prompt: &PromptId,
    draw_index: u64,
) -> EngineResponse {
    let seed = derive_seed(
        cfg.seed,
        &[
            prompt.campaign.key(),
            &prompt.index.to_string(),
            &draw_index.to_string(),
        ],
    );
    let mut rng = SplitMix64::new(seed);
    let span = (cfg.citations_max - cfg.citations_min + 1) as u64;
    let count = (cfg.citations_min + rng.below(span) as usize).min(cfg.domains.len());

    let mut pool: Vec<&WeightedDomain> = cfg.domains.iter().collect();
    let mut citations = Vec::with_capacity(count);
    for _ in 0..count {
        let total: f64 = pool.iter().map(|d| d.weight).sum();
        let mut u = rng.unit() * total;
        let mut pick = pool.len() - 1;
        for (i, d) in pool.iter().enumerate() {
            if u < d.weight {
                pick = i;
                break;
            }
            u -= d.weight;
        }
        let d = pool.remove(pick);
        citations.push(format!("https://{}/", d.domain));
    }

    let mut included: Vec<&str> = cfg
        .brands
        .iter()
        .filter(|b| rng.unit() < b.p)
        .map(|b| b.name.as_str())
        .collect();
    rng.shuffle(&mut included);
    let answer_text = cfg
        .answer_template
        .replace("{prompt}", &prompt.text)
        .replace("{brands}", &included.join(", "));
    EngineResponse {
        answer_text,
        citations,
    }
}

/// Adapter wrapping [`simulate_response`]. Each engine gets its own seed
/// stream derived from the configured seed and the engine label.
#[derive(Debug, Clone)]
pub struct SimulatedEngine {
    cfg: SimulatedEngineConfig,
}

impl SimulatedEngine {
    pub fn new(mut cfg: SimulatedEngineConfig, engine: &EngineId) -> Result<Self> {
        cfg.validate()?;
        cfg.seed = derive_seed(cfg.seed, &[engine.label()]);
        Ok(SimulatedEngine { cfg })
    }
}

impl EngineAdapter for SimulatedEngine {
    fn query(&self, request: EngineRequest<'_>) -> std::result::Result<EngineResponse, String> {
        Ok(simulate_response(
            &self.cfg,
            request.prompt,
            request.draw_index,
        ))
    }
}

/// Plain HTTP/1.1 JSON adapter: POSTs `{"prompt": ...}` and expects
/// `{"answer_text": ..., "citations": [...]}` back.
#[derive(Debug)]
pub struct HttpAdapter {
    url: String,
    agent: ureq::Agent,
}

#[derive(Serialize)]
struct HttpRequestBody<'a> {
    prompt: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    locale: Option<&'a str>,
}

impl HttpAdapter {
    pub fn new(url: impl Into<String>, timeout: Duration) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .build()
            .into();
        HttpAdapter {
            url: url.into(),
            agent,
        }
    }
}

impl EngineAdapter for HttpAdapter {
    fn query(&self, request: EngineRequest<'_>) -> std::result::Result<EngineResponse, String> {
        let body = HttpRequestBody {
            prompt: &request.prompt.text,
            locale: request.locale,
        };
        let mut response = self
            .agent
            .post(&self.url)
            .send_json(&body)
            .map_err(|e| e.to_string())?;
        response
            .body_mut()
            .read_json::<EngineResponse>()
            .map_err(|e| e.to_string())
    }
}

/// Where record timestamps come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schedule {
    /// Wall clock; delays really sleep.
    RealTime,
    /// Virtual clock: day `d` starts at `start + d days`, and every call or
    /// delay advances time without sleeping.
    Virtual { start: DateTime<Utc> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollectionPlan {
    pub prompts: Vec<PromptId>,
    pub engines: Vec<EngineId>,
    pub reps_per_prompt: u32,
    pub days: u32,
    pub inter_call_delay: Duration,
    pub max_retries: u32,
    pub locale: Option<String>,
    pub schedule: Schedule,
    /// Run distinct engines on separate threads. Sink order then follows
    /// completion order.
    pub parallel: bool,
}

impl Default for CollectionPlan {
    fn default() -> Self {
        CollectionPlan {
            prompts: Vec::new(),
            engines: Vec::new(),
            reps_per_prompt: 10,
            days: 1,
            inter_call_delay: Duration::ZERO,
            max_retries: 2,
            locale: None,
            schedule: Schedule::RealTime,
            parallel: false,
        }
    }
}

impl CollectionPlan {
    pub fn size(&self) -> usize {
        self.prompts.len() * self.engines.len() * self.reps_per_prompt as usize * self.days as usize
    }
}

/// A call that still failed after every retry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CallFailure {
    pub engine: EngineId,
    pub prompt: String,
    pub day: u32,
    pub rep: u32,
    pub attempts: u32,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct EngineTally {
    pub successes: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CollectionSummary {
    pub per_engine: BTreeMap<EngineId, EngineTally>,
    pub failures: Vec<CallFailure>,
}

impl CollectionSummary {
    pub fn successes(&self) -> usize {
        self.per_engine.values().map(|t| t.successes).sum()
    }

    pub fn failure_count(&self) -> usize {
        self.per_engine.values().map(|t| t.failures).sum()
    }
}

struct Timeline {
    schedule: Schedule,
    virtual_now: DateTime<Utc>,
}

impl Timeline {
    fn new(schedule: Schedule) -> Self {
        let virtual_now = match schedule {
            Schedule::Virtual { start } => start,
            Schedule::RealTime => DateTime::<Utc>::MIN_UTC,
        };
        Timeline {
            schedule,
            virtual_now,
        }
    }

    fn start_day(&mut self, day: u32) {
        if let Schedule::Virtual { start } = self.schedule {
            let begin = start + chrono::Duration::days(i64::from(day));
            self.virtual_now = self.virtual_now.max(begin);
        }
    }

    /// Receipt time of a call, at second precision.
    fn receive(&mut self) -> DateTime<Utc> {
        match self.schedule {
            Schedule::RealTime => Utc::now().trunc_subsecs(0),
            Schedule::Virtual { .. } => {
                let t = self.virtual_now;
                self.virtual_now += chrono::Duration::seconds(1);
                t
            }
        }
    }

    fn wait(&mut self, d: Duration) {
        match self.schedule {
            Schedule::RealTime => std::thread::sleep(d),
            Schedule::Virtual { .. } => {
                self.virtual_now += chrono::Duration::from_std(d).unwrap_or(chrono::Duration::MAX);
            }
        }
    }
}

/// Executes `prompts × engines × reps × days`, appending each successful
/// response to `sink` as one log line. Calls to one engine are serialized
/// and spaced by the plan's delay; failing calls are retried up to
/// `max_retries` times and then recorded in the summary.
pub fn run_plan<W: Write + Send>(
    plan: &CollectionPlan,
    adapters: &BTreeMap<EngineId, Box<dyn EngineAdapter>>,
    sink: W,
) -> Result<CollectionSummary> {
    if let Some(e) = plan.engines.iter().find(|e| !adapters.contains_key(*e)) {
        return Err(Error::MissingAdapter(e.label().to_string()));
    }
    if plan.reps_per_prompt == 0 {
        return Err(Error::Config("reps_per_prompt must be at least 1".into()));
    }
    let sink = Mutex::new(sink);
    let abort = AtomicBool::new(false);
    let run_engine = |engine: &EngineId| -> Result<(EngineTally, Vec<CallFailure>)> {
        collect_engine(plan, engine, adapters[engine].as_ref(), &sink, &abort)
    };
    let results: Vec<Result<(EngineTally, Vec<CallFailure>)>> = if plan.parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = plan
                .engines
                .iter()
                .map(|e| s.spawn(|| run_engine(e)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("collector thread panicked"))
                .collect()
        })
    } else {
        plan.engines.iter().map(run_engine).collect()
    };
    let mut summary = CollectionSummary::default();
    for (engine, result) in plan.engines.iter().zip(results) {
        let (tally, failures) = result?;
        let slot = summary.per_engine.entry(engine.clone()).or_default();
        slot.successes += tally.successes;
        slot.failures += tally.failures;
        summary.failures.extend(failures);
    }
    sink.into_inner()
        .map_err(|_| Error::Sink(std::io::Error::other("sink lock poisoned")))?
        .flush()
        .map_err(Error::Sink)?;
    Ok(summary)
}

fn collect_engine<W: Write>(
    plan: &CollectionPlan,
    engine: &EngineId,
    adapter: &dyn EngineAdapter,
    sink: &Mutex<W>,
    abort: &AtomicBool,
) -> Result<(EngineTally, Vec<CallFailure>)> {
    let mut timeline = Timeline::new(plan.schedule);
    let mut tally = EngineTally::default();
    let mut failures = Vec::new();
    let mut first_call = true;
    for day in 0..plan.days {
        timeline.start_day(day);
        for prompt in &plan.prompts {
            for rep in 0..plan.reps_per_prompt {
                if abort.load(Ordering::Relaxed) {
                    return Ok((tally, failures));
                }
                let request = EngineRequest {
                    prompt,
                    locale: plan.locale.as_deref(),
                    draw_index: u64::from(day) * u64::from(plan.reps_per_prompt) + u64::from(rep),
                };
                let mut attempts = 0;
                let outcome = loop {
                    if !first_call {
                        timeline.wait(plan.inter_call_delay);
                    }
                    first_call = false;
                    attempts += 1;
                    match adapter.query(request) {
                        Ok(response) => break Ok((timeline.receive(), response)),
                        Err(reason) if attempts > plan.max_retries => break Err(reason),
                        Err(_) => {}
                    }
                };
                match outcome {
                    Ok((timestamp, response)) => {
                        let record = ResponseRecord {
                            engine: engine.clone(),
                            prompt: prompt.clone(),
                            timestamp,
                            run_index: rep + 1,
                            answer_text: response.answer_text,
                            citations: response.citations,
                        };
                        let mut w = sink.lock().map_err(|_| {
                            Error::Sink(std::io::Error::other("sink lock poisoned"))
                        })?;
                        if let Err(e) = writeln!(w, "{}", record_to_line(&record)) {
                            abort.store(true, Ordering::Relaxed);
                            return Err(Error::Sink(e));
                        }
                        tally.successes += 1;
                    }
                    Err(reason) => {
                        tally.failures += 1;
                        failures.push(CallFailure {
                            engine: engine.clone(),
                            prompt: prompt.to_string(),
                            day,
                            rep: rep + 1,
                            attempts,
                            reason,
                        });
                    }
                }
            }
        }
    }
    Ok((tally, failures))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::parse_log;
    use crate::model::{validate_records, CampaignId};
    use chrono::TimeZone;
    use std::io::{BufRead, BufReader, Read};
    use std::net::TcpListener;

    fn cfg(brands: &[(&str, f64)]) -> SimulatedEngineConfig {
        SimulatedEngineConfig {
            seed: 7,
            domains: [("a.ch", 5.0), ("b.ch", 3.0), ("c.ch", 2.0)]
                .iter()
                .map(|&(d, w)| WeightedDomain {
                    domain: d.into(),
                    weight: w,
                })
                .collect(),
            brands: brands
                .iter()
                .map(|&(n, p)| BrandProbability { name: n.into(), p })
                .collect(),
            citations_min: 1,
            citations_max: 1,
            answer_template: DEFAULT_TEMPLATE.into(),
        }
    }

    fn prompts(n: u32) -> Vec<PromptId> {
        (1..=n)
            .map(|i| PromptId::new(CampaignId::new("Telecom"), i, format!("question {i}")))
            .collect()
    }

    fn sim_plan(prompts: Vec<PromptId>, reps: u32) -> CollectionPlan {
        CollectionPlan {
            prompts,
            engines: vec![EngineId::Simulated],
            reps_per_prompt: reps,
            schedule: Schedule::Virtual {
                start: Utc.with_ymd_and_hms(2026, 1, 24, 8, 0, 0).unwrap(),
            },
            ..CollectionPlan::default()
        }
    }

    fn adapters(a: Box<dyn EngineAdapter>) -> BTreeMap<EngineId, Box<dyn EngineAdapter>> {
        BTreeMap::from([(EngineId::Simulated, a)])
    }

    #[test]
    fn simulation_is_deterministic() {
        let c = cfg(&[("Swisscom", 0.5), ("Salt", 0.5)]);
        let p = &prompts(1)[0];
        assert_eq!(simulate_response(&c, p, 3), simulate_response(&c, p, 3));
        let differ = (0..20).any(|i| simulate_response(&c, p, i) != simulate_response(&c, p, 0));
        assert!(differ);
    }

    #[test]
    fn certain_and_impossible_brands() {
        let c = cfg(&[("Always", 1.0), ("Never", 0.0)]);
        let p = &prompts(1)[0];
        for i in 0..200 {
            let r = simulate_response(&c, p, i);
            assert!(r.answer_text.contains("Always"));
            assert!(!r.answer_text.contains("Never"));
        }
    }

    #[test]
    fn domain_frequencies_follow_weights() {
        let c = cfg(&[]);
        let p = &prompts(1)[0];
        let n = 1000.0;
        let mut counts: BTreeMap<String, f64> = BTreeMap::new();
        for i in 0..1000 {
            for url in simulate_response(&c, p, i).citations {
                *counts.entry(url).or_default() += 1.0;
            }
        }
        for (domain, w) in [("a.ch", 0.5), ("b.ch", 0.3), ("c.ch", 0.2)] {
            let observed = counts[&format!("https://{domain}/")] / n;
            let sigma = (w * (1.0 - w) / n).sqrt();
            assert!(
                (observed - w).abs() <= 3.0 * sigma,
                "{domain}: {observed} vs {w}"
            );
        }
    }

    #[test]
    fn citations_are_distinct_and_within_range() {
        let mut c = cfg(&[]);
        c.citations_min = 0;
        c.citations_max = 5;
        for i in 0..100 {
            let r = simulate_response(&c, &prompts(1)[0], i);
            assert!(r.citations.len() <= 3);
            let mut d = r.citations.clone();
            d.sort();
            d.dedup();
            assert_eq!(d.len(), r.citations.len());
        }
    }

    #[test]
    fn invalid_configs_rejected() {
        let mut c = cfg(&[("X", 1.5)]);
        assert!(c.validate().is_err());
        c = cfg(&[]);
        c.domains[0].weight = 0.0;
        assert!(c.validate().is_err());
        c = cfg(&[]);
        c.citations_min = 3;
        assert!(c.validate().is_err());
    }

    #[test]
    fn toml_config() {
        let c = SimulatedEngineConfig::from_toml(
            "seed = 3\ncitations_min = 1\ncitations_max = 2\n[[domains]]\ndomain = \"a.ch\"\nweight = 1.0\n[[brands]]\nname = \"Salt\"\np = 0.6\n",
        )
        .unwrap();
        assert_eq!(c.brands[0].p, 0.6);
        assert_eq!(c.answer_template, DEFAULT_TEMPLATE);
    }

    #[test]
    fn plan_yields_one_valid_record_per_call() {
        let plan = sim_plan(prompts(2), 3);
        let mut out = Vec::new();
        let engine = SimulatedEngine::new(cfg(&[("Salt", 0.5)]), &EngineId::Simulated).unwrap();
        let summary = run_plan(&plan, &adapters(Box::new(engine)), &mut out).unwrap();
        assert_eq!(summary.successes(), 6);
        let parsed = parse_log(out.as_slice()).unwrap();
        assert!(parsed.errors.is_empty());
        assert_eq!(parsed.records.len(), 6);
        assert!(validate_records(&parsed.records)
            .iter()
            .all(|r| r.is_valid()));
        let runs: Vec<u32> = parsed.records.iter().map(|r| r.run_index).collect();
        assert_eq!(runs, [1, 2, 3, 1, 2, 3]);
    }

    #[test]
    fn virtual_days_are_one_day_apart() {
        let mut plan = sim_plan(prompts(1), 1);
        plan.days = 3;
        let mut out = Vec::new();
        let engine = SimulatedEngine::new(cfg(&[]), &EngineId::Simulated).unwrap();
        run_plan(&plan, &adapters(Box::new(engine)), &mut out).unwrap();
        let days: Vec<_> = parse_log(out.as_slice())
            .unwrap()
            .records
            .iter()
            .map(|r| r.day())
            .collect();
        assert_eq!(days.len(), 3);
        assert_eq!((days[2] - days[0]).num_days(), 2);
    }

    struct AlwaysFails;

    impl EngineAdapter for AlwaysFails {
        fn query(&self, _: EngineRequest<'_>) -> std::result::Result<EngineResponse, String> {
            Err("connection refused".into())
        }
    }

    #[test]
    fn failures_are_retried_then_logged() {
        let mut plan = sim_plan(prompts(2), 3);
        plan.max_retries = 2;
        let mut out = Vec::new();
        let summary = run_plan(&plan, &adapters(Box::new(AlwaysFails)), &mut out).unwrap();
        assert!(out.is_empty());
        assert_eq!(summary.failure_count(), plan.size());
        assert!(summary
            .failures
            .iter()
            .all(|f| f.attempts == 3 && f.reason == "connection refused"));
    }

    #[test]
    fn missing_adapter_is_fatal() {
        let mut plan = sim_plan(prompts(1), 1);
        plan.engines.push(EngineId::Gemini);
        let engine = SimulatedEngine::new(cfg(&[]), &EngineId::Simulated).unwrap();
        assert!(matches!(
            run_plan(&plan, &adapters(Box::new(engine)), Vec::new()),
            Err(Error::MissingAdapter(_))
        ));
    }

    struct BrokenSink;

    impl Write for BrokenSink {
        fn write(&mut self, _: &[u8]) -> std::io::Result<usize> {
            Err(std::io::Error::other("disk full"))
        }
        fn flush(&mut self) -> std::io::Result<()> {
            Ok(())
        }
    }

    #[test]
    fn unwritable_sink_is_fatal() {
        let engine = SimulatedEngine::new(cfg(&[]), &EngineId::Simulated).unwrap();
        let r = run_plan(
            &sim_plan(prompts(1), 2),
            &adapters(Box::new(engine)),
            BrokenSink,
        );
        assert!(matches!(r, Err(Error::Sink(_))));
    }

    /// Serves `n` requests, echoing the prompt back with one citation.
    fn echo_server(n: usize) -> String {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        std::thread::spawn(move || {
            for stream in listener.incoming().take(n) {
                let stream = stream.unwrap();
                let mut reader = BufReader::new(stream.try_clone().unwrap());
                let mut length = 0;
                loop {
                    let mut line = String::new();
                    reader.read_line(&mut line).unwrap();
                    if line == "\r\n" || line.is_empty() {
                        break;
                    }
                    if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                        length = v.trim().parse().unwrap();
                    }
                }
                let mut body = vec![0; length];
                reader.read_exact(&mut body).unwrap();
                let req: serde_json::Value = serde_json::from_slice(&body).unwrap();
                let reply = serde_json::json!({
                    "answer_text": format!("echo: {}", req["prompt"].as_str().unwrap()),
                    "citations": ["https://www.example.com/page"],
                })
                .to_string();
                let mut stream = stream;
                write!(
                    stream,
                    "HTTP/1.1 200 OK\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{}",
                    reply.len(),
                    reply
                )
                .unwrap();
            }
        });
        format!("http://{addr}/answer")
    }

    #[test]
    fn http_adapter_round_trip() {
        let url = echo_server(2);
        let adapter = HttpAdapter::new(url, Duration::from_secs(5));
        let mut plan = sim_plan(prompts(1), 2);
        plan.max_retries = 0;
        let mut out = Vec::new();
        let summary = run_plan(&plan, &adapters(Box::new(adapter)), &mut out).unwrap();
        assert_eq!(summary.successes(), 2);
        let records = parse_log(out.as_slice()).unwrap().records;
        assert_eq!(records[0].answer_text, "echo: question 1");
        assert_eq!(records[0].citations, ["https://www.example.com/page"]);
    }

    #[test]
    fn http_adapter_reports_transport_errors() {
        // bind then drop to get a port nobody listens on
        let port = TcpListener::bind("127.0.0.1:0")
            .unwrap()
            .local_addr()
            .unwrap()
            .port();
        let adapter = HttpAdapter::new(format!("http://127.0.0.1:{port}/"), Duration::from_secs(2));
        let p = &prompts(1)[0];
        assert!(adapter
            .query(EngineRequest {
                prompt: p,
                locale: None,
                draw_index: 0
            })
            .is_err());
    }
}
