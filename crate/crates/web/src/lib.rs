//! wasm-bindgen bindings for the browser demo. Everything crosses the
//! boundary as JSON strings, drawn in the frame where C(R) is the unit
//! circle at the origin.

use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

use pf_core::algorithm::Algorithm;
use pf_core::format::{emit_scenario, parse_scenario};
use pf_core::generate::generate;
use pf_core::pattern::{embed_pattern, modified_pattern, parking_circles};
use pf_core::simulator::{run, SchedulerKind};
use pf_core::verifier::{check_trace, CheckOptions, TransitionGraph};
use pf_core::{Configuration, Pattern, Point, TaskId, Trajectory};

/// Most frames a simulation sends back; longer runs are thinned evenly.
const MAX_FRAMES: usize = 300;

#[derive(Serialize)]
pub struct Frame {
    pub event: usize,
    pub task: Option<TaskId>,
    pub robots: Vec<Point>,
    pub top: Option<f64>,
    pub bottom: Option<f64>,
    pub targets: Vec<Point>,
    /// Pending or planned paths, sampled as polylines.
    pub paths: Vec<Vec<Point>>,
}

fn sample(t: &Trajectory) -> Vec<Point> {
    let steps = 24;
    (0..=steps).map(|k| t.point_at(t.length() * k as f64 / steps as f64)).collect()
}

fn frame(event: usize, task: Option<TaskId>, pos: &[Point], f: &Pattern, paths: &[Trajectory]) -> Result<Frame, String> {
    let raw = Configuration::new(pos.to_vec(), *f.tol()).map_err(|e| e.to_string())?;
    let map = raw.normalizing_map();
    let r = raw.transformed(&map);
    let park = parking_circles(&r, f).ok();
    let targets = match embed_pattern(&r, f) {
        Ok(e) => modified_pattern(f, &e),
        Err(_) => Vec::new(),
    };
    Ok(Frame {
        event,
        task,
        robots: r.points().to_vec(),
        top: park.map(|p| p.top.radius),
        bottom: park.map(|p| p.bottom.radius),
        targets,
        paths: paths.iter().map(|t| sample(&t.transformed(&map))).collect(),
    })
}

fn to_json(v: &impl Serialize) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

/// A random solvable scenario as scenario-file JSON.
#[wasm_bindgen]
pub fn generate_scenario(n: usize, rho: usize, seed: u32) -> Result<String, String> {
    generate(n, rho, seed as u64, false).map(|s| emit_scenario(&s)).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Simulation {
    outcome: String,
    events: usize,
    violations: usize,
    edges: Vec<(TaskId, TaskId)>,
    frames: Vec<Frame>,
}

/// Runs a scenario and returns thinned Look frames, the observed class
/// transitions and the verifier's violation count.
#[wasm_bindgen]
pub fn simulate(scenario: &str, scheduler: &str, seed: u32, rigid: bool) -> Result<String, String> {
    let mut s = parse_scenario(scenario).map_err(|e| e.to_string())?;
    s.scheduler.kind = SchedulerKind::parse(scheduler).ok_or_else(|| format!("unknown scheduler {scheduler}"))?;
    s.scheduler.seed = seed as u64;
    s.scheduler.rigid = rigid;
    let (r, f) = s.prepare().map_err(|e| e.to_string())?;
    let result = run(&s).map_err(|e| e.to_string())?;
    let report = check_trace(&result.trace, &f, &TransitionGraph::expected(), CheckOptions::for_run(r.len(), s.scheduler.nu))
        .map_err(|e| e.to_string())?;
    let looks: Vec<_> = result.trace.looks().collect();
    let stride = looks.len().div_ceil(MAX_FRAMES).max(1);
    let mut frames = Vec::new();
    for (i, rec) in looks.iter().enumerate() {
        if i % stride != 0 && i + 1 != looks.len() {
            continue;
        }
        let pend: Vec<Trajectory> = rec.pend.iter().flatten().flatten().cloned().collect();
        frames.push(frame(rec.e, rec.task, rec.pos.as_deref().unwrap_or_default(), &f, &pend)?);
    }
    if frames.is_empty() {
        frames.push(frame(0, None, r.points(), &f, &[])?);
    }
    Ok(to_json(&Simulation {
        outcome: serde_json::to_value(result.outcome).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
        events: result.trace.records.len(),
        violations: report.violations.len(),
        edges: report.observed.edges.iter().filter(|(a, b)| a != b).copied().collect(),
        frames,
    }))
}

/// Classifies robots (JSON `[[x, y], ...]`) against the scenario's pattern
/// and returns the frame with every planned path.
#[wasm_bindgen]
pub fn classify(scenario: &str, robots: &str) -> Result<String, String> {
    let s = parse_scenario(scenario).map_err(|e| e.to_string())?;
    let (_, f) = s.prepare().map_err(|e| e.to_string())?;
    let pos: Vec<Point> = serde_json::from_str(robots).map_err(|e| e.to_string())?;
    if pos.len() != f.len() {
        return Err(format!("{} robots for a pattern of {}", pos.len(), f.len()));
    }
    let cfg = Configuration::new(pos.clone(), *f.tol()).map_err(|e| e.to_string())?;
    let (task, paths) = match Algorithm::default().compute(&cfg, &f) {
        Ok(plan) => (plan.task, plan.directives.into_iter().map(|d| d.trajectory).collect()),
        Err(pf_core::Error::DelegatedUnsupported) => (TaskId::T10, Vec::new()),
        Err(e) => return Err(e.to_string()),
    };
    frame(0, Some(task), &pos, &f, &paths).map(|fr| to_json(&fr))
}
