//! Look–Compute–Move execution under a seeded adversary.
//!
//! Every scheduler runs on one event queue: each robot carries the time of
//! its next phase change and the earliest one fires. The kinds differ only
//! in how those times are drawn. Positions change at move-progress and
//! move-end events, so an asynchronous Look may see a robot part-way along
//! its trajectory.

mod trace;

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algorithm::{Algorithm, Plan, TaskId};
use crate::configuration::{similar, symmetricity, views_well_separated, Configuration};
use crate::geometry::{Point, Similarity, Tolerance, Trajectory};
use crate::pattern::Pattern;
use crate::Error;

pub use trace::{EventKind, ExecutionTrace, TraceRecord};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchedulerKind {
    Fsync,
    Ssync,
    Sasync,
    #[default]
    Async,
}

impl SchedulerKind {
    pub fn parse(s: &str) -> Option<SchedulerKind> {
        match s {
            "fsync" => Some(SchedulerKind::Fsync),
            "ssync" => Some(SchedulerKind::Ssync),
            "sasync" => Some(SchedulerKind::Sasync),
            "async" => Some(SchedulerKind::Async),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdversaryParams {
    pub kind: SchedulerKind,
    pub seed: u64,
    /// Minimum distance a robot covers before the adversary may stop it.
    pub nu: f64,
    /// Most events that may pass between two events of the same robot.
    pub fairness: usize,
    pub rigid: bool,
}

impl Default for AdversaryParams {
    fn default() -> Self {
        AdversaryParams { kind: SchedulerKind::Async, seed: 0, nu: 0.05, fairness: 256, rigid: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Limits {
    pub max_events: usize,
    /// Consecutive idle Looks (nobody wants to move, not formed) before giving up.
    pub stall: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_events: 100_000, stall: 5_000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub robots: Vec<Point>,
    pub pattern: Vec<(Point, usize)>,
    pub scheduler: AdversaryParams,
    pub limits: Limits,
    pub tolerance: Tolerance,
}

impl Scenario {
    pub fn new(robots: Vec<Point>, pattern: Vec<(Point, usize)>) -> Self {
        Scenario {
            robots,
            pattern,
            scheduler: AdversaryParams::default(),
            limits: Limits::default(),
            tolerance: Tolerance::default(),
        }
    }

    /// Checks the ingestion invariants and returns the robots (normalized to
    /// c(R) = origin, δ(C(R)) = 1) and the pattern.
    pub fn prepare(&self) -> Result<(Configuration, Pattern), Error> {
        let n = self.robots.len();
        let m: usize = self.pattern.iter().map(|p| p.1).sum();
        if n < 3 {
            return Err(Error::InvalidScenario(format!("need at least 3 robots, got {n}")));
        }
        if m != n {
            return Err(Error::CardinalityMismatch { robots: n, pattern: m });
        }
        if !(self.scheduler.nu > 0.0 && self.scheduler.nu.is_finite()) || self.scheduler.fairness == 0 {
            return Err(Error::InvalidScenario("ν must be positive and fairness at least 1".into()));
        }
        Tolerance::new(self.tolerance.length, self.tolerance.angle)?;
        let raw = Configuration::new(self.robots.clone(), self.tolerance)?;
        if raw.max_multiplicity() > 1 {
            return Err(Error::InvalidScenario("initial robots contain a multiplicity".into()));
        }
        if raw.radius() == 0.0 {
            return Err(Error::InvalidScenario("robots are all at one point".into()));
        }
        let r = raw.transformed(&raw.normalizing_map());
        if !views_well_separated(&r, 10.0) {
            return Err(Error::InvalidScenario("robot views are too close to tell apart".into()));
        }
        let f = Pattern::from_weighted(&self.pattern, self.tolerance)?;
        Ok((r, f))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Formed,
    UnsolvableInput,
    DelegatedUnsupported,
    EventLimit,
    /// Nobody moved for `limits.stall` Looks although F was not formed.
    Stalled,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Formed => 0,
            Outcome::UnsolvableInput => 2,
            Outcome::DelegatedUnsupported => 3,
            Outcome::EventLimit | Outcome::Stalled => 4,
        }
    }
}

/// ρ(R) divides ρ(F), or F is a single point (gathering).
pub fn solvable(r: &Configuration, f: &Pattern) -> bool {
    f.is_single_point() || f.symmetricity() % symmetricity(r) == 0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    Idle,
    Looked,
    Ready,
    Moving,
}

#[derive(Clone, Debug)]
struct Robot {
    pos: Point,
    phase: Phase,
    plan: Trajectory,
    stop: f64,
    traversed: f64,
    next_time: f64,
    // Start of the robot's rounds under the lockstep schedulers.
    offset: f64,
    last_event: usize,
}

impl Robot {
    fn remaining(&self) -> Option<Trajectory> {
        match self.phase {
            Phase::Idle => None,
            _ if self.plan.is_nil() => None,
            _ => Some(self.plan.remainder(self.traversed)),
        }
    }
}

/// Result of [`run`].
#[derive(Clone, Debug)]
pub struct Run {
    pub trace: ExecutionTrace,
    pub outcome: Outcome,
    pub final_positions: Vec<Point>,
}

/// Draws a chirality-preserving frame that puts `at` on the origin.
pub fn random_lcs(rng: &mut impl Rng, at: Point) -> Similarity {
    let rotation = rng.gen_range(0.0..TAU);
    let scale = rng.gen_range(0.5f64.ln()..2.0f64.ln()).exp();
    let s = Similarity { rotation, scale, translation: Point::ORIGIN };
    Similarity { translation: -s.apply(at), ..s }
}

/// Runs Compute on `robots` as seen through `lcs` and maps every trajectory
/// back to world coordinates.
pub fn compute_in_frame(
    algorithm: &Algorithm,
    robots: &[Point],
    f: &Pattern,
    lcs: &Similarity,
    tol: Tolerance,
) -> Result<Plan, Error> {
    let local = Configuration::new(robots.iter().map(|&p| lcs.apply(p)).collect(), tol)?;
    let mut plan = algorithm.compute(&local, f)?;
    let back = lcs.inverse();
    for d in &mut plan.directives {
        d.robot = robots[d.index];
        d.trajectory = d.trajectory.transformed(&back);
        d.trajectory.start = robots[d.index];
    }
    Ok(plan)
}

/// Executes `scenario` with the stock algorithm.
pub fn run(scenario: &Scenario) -> Result<Run, Error> {
    run_with(scenario, &Algorithm::default())
}

pub fn run_with(scenario: &Scenario, algorithm: &Algorithm) -> Result<Run, Error> {
    let (r0, f) = scenario.prepare()?;
    let sim = Sim::new(scenario, r0.points(), algorithm, &f);
    if !solvable(&r0, &f) {
        return Ok(sim.finish(Outcome::UnsolvableInput));
    }
    sim.execute()
}

struct Sim<'a> {
    params: AdversaryParams,
    limits: Limits,
    tol: Tolerance,
    algorithm: &'a Algorithm,
    f: &'a Pattern,
    rng: ChaCha8Rng,
    robots: Vec<Robot>,
    records: Vec<TraceRecord>,
    now: f64,
    // Last world snapshot and the plan computed for it.
    memo: Option<(Vec<Point>, Plan)>,
}

const ROUND: f64 = 4.0;

impl<'a> Sim<'a> {
    fn new(s: &Scenario, start: &[Point], algorithm: &'a Algorithm, f: &'a Pattern) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(s.scheduler.seed);
        let robots = start
            .iter()
            .map(|&pos| {
                let (offset, next_time) = match s.scheduler.kind {
                    SchedulerKind::Fsync => (0.0, 0.0),
                    SchedulerKind::Ssync => (0.0, ROUND * rng.gen_range(0..2) as f64),
                    SchedulerKind::Sasync => {
                        let o = rng.gen_range(0.0..ROUND);
                        (o, o)
                    }
                    SchedulerKind::Async => (0.0, rng.gen_range(0.0..2.0)),
                };
                Robot {
                    pos,
                    phase: Phase::Idle,
                    plan: Trajectory::nil(pos),
                    stop: 0.0,
                    traversed: 0.0,
                    next_time,
                    offset,
                    last_event: 0,
                }
            })
            .collect();
        Sim {
            params: s.scheduler,
            limits: s.limits,
            tol: s.tolerance,
            algorithm,
            f,
            rng,
            robots,
            records: Vec::new(),
            now: 0.0,
            memo: None,
        }
    }

    fn positions(&self) -> Vec<Point> {
        self.robots.iter().map(|r| r.pos).collect()
    }

    fn finish(self, outcome: Outcome) -> Run {
        let final_positions = self.positions();
        Run { trace: ExecutionTrace { records: self.records, outcome: Some(outcome) }, outcome, final_positions }
    }

    fn pick(&self) -> usize {
        let e = self.records.len();
        if let Some(i) = (0..self.robots.len())
            .filter(|&i| e - self.robots[i].last_event >= self.params.fairness)
            .min_by_key(|&i| self.robots[i].last_event)
        {
            return i;
        }
        (0..self.robots.len())
            .min_by(|&a, &b| self.robots[a].next_time.total_cmp(&self.robots[b].next_time).then(a.cmp(&b)))
            .expect("at least three robots")
    }

    // Time until the robot's next phase change, given the phase it just entered.
    fn delay(&mut self, phase: Phase, id: usize) -> f64 {
        let t = self.now;
        match self.params.kind {
            SchedulerKind::Fsync | SchedulerKind::Ssync | SchedulerKind::Sasync => match phase {
                Phase::Idle => {
                    let offset = self.robots[id].offset;
                    let k = ((t - offset) / ROUND).floor() + 1.0;
                    let skip = self.params.kind == SchedulerKind::Ssync && self.rng.gen_bool(0.4);
                    offset + ROUND * (k + skip as u8 as f64) - t
                }
                _ => 1.0,
            },
            SchedulerKind::Async => match phase {
                Phase::Idle => self.rng.gen_range(0.0..2.0),
                _ => self.rng.gen_range(0.05..1.0),
            },
        }
    }

    fn push(&mut self, id: usize, kind: EventKind) -> &mut TraceRecord {
        let e = self.records.len();
        self.robots[id].last_event = e + 1;
        self.records.push(TraceRecord::new(e, self.now, id, kind));
        self.records.last_mut().expect("just pushed")
    }

    fn plan_for(&mut self, snapshot: &[Point], lcs: &Similarity) -> Result<Plan, Error> {
        if let Some((pts, plan)) = &self.memo {
            if pts.as_slice() == snapshot {
                return Ok(plan.clone());
            }
        }
        let plan = compute_in_frame(self.algorithm, snapshot, self.f, lcs, self.tol)?;
        self.memo = Some((snapshot.to_vec(), plan.clone()));
        Ok(plan)
    }

    fn formed(&self) -> bool {
        self.robots.iter().all(|r| match r.phase {
            Phase::Idle => true,
            Phase::Looked => r.plan.is_nil(),
            _ => false,
        })
    }

    fn execute(mut self) -> Result<Run, Error> {
        let mut stall = 0;
        loop {
            if self.records.len() >= self.limits.max_events {
                return Ok(self.finish(Outcome::EventLimit));
            }
            let id = self.pick();
            self.now = self.now.max(self.robots[id].next_time);
            let phase = self.robots[id].phase;
            let entered = match phase {
                Phase::Idle => {
                    let snapshot = self.positions();
                    let lcs = random_lcs(&mut self.rng, snapshot[id]);
                    let pend: Vec<Option<Trajectory>> = self.robots.iter().map(Robot::remaining).collect();
                    let plan = match self.plan_for(&snapshot, &lcs) {
                        Ok(p) => p,
                        Err(Error::DelegatedUnsupported) => {
                            let rec = self.push(id, EventKind::Look);
                            rec.task = Some(TaskId::T10);
                            rec.pos = Some(snapshot);
                            rec.pend = Some(pend);
                            return Ok(self.finish(Outcome::DelegatedUnsupported));
                        }
                        Err(e) => return Err(e),
                    };
                    let mine = plan.trajectory_for(id, snapshot[id]);
                    let rec = self.push(id, EventKind::Look);
                    rec.task = Some(plan.task);
                    rec.pos = Some(snapshot);
                    rec.pend = Some(pend);
                    let robot = &mut self.robots[id];
                    robot.plan = mine;
                    robot.traversed = 0.0;
                    robot.phase = Phase::Looked;
                    if plan.task == TaskId::T11 && self.formed() {
                        let n = self.robots.len();
                        let world = Configuration::new(self.positions(), self.tol)?;
                        debug_assert!(similar(&world, self.f.config(), true) || n == 0);
                        return Ok(self.finish(Outcome::Formed));
                    }
                    let anyone = !plan.directives.is_empty() || self.robots.iter().any(|r| r.remaining().is_some());
                    stall = if anyone || plan.task == TaskId::T11 { 0 } else { stall + 1 };
                    if stall >= self.limits.stall {
                        return Ok(self.finish(Outcome::Stalled));
                    }
                    Phase::Looked
                }
                Phase::Looked => {
                    let plan = self.robots[id].plan.clone();
                    let rec = self.push(id, EventKind::Compute);
                    if plan.is_nil() {
                        self.robots[id].phase = Phase::Idle;
                        Phase::Idle
                    } else {
                        rec.traj = Some(plan.clone());
                        let len = plan.length();
                        let stop = if self.params.rigid {
                            len
                        } else {
                            let frac: f64 = self.rng.gen_range(0.0..=1.0);
                            (frac * len).max(self.params.nu.min(len))
                        };
                        let robot = &mut self.robots[id];
                        robot.stop = stop;
                        robot.phase = Phase::Ready;
                        Phase::Ready
                    }
                }
                Phase::Ready => {
                    self.push(id, EventKind::MoveStart);
                    self.robots[id].phase = Phase::Moving;
                    Phase::Moving
                }
                Phase::Moving => {
                    let (trav, stop) = (self.robots[id].traversed, self.robots[id].stop);
                    let rest = stop - trav;
                    let step = if self.params.kind == SchedulerKind::Async {
                        let u: f64 = self.rng.gen_range(0.0..=1.0);
                        (u * rest).max(self.params.nu)
                    } else {
                        rest
                    };
                    let done = step >= rest;
                    let s = if done { stop } else { trav + step };
                    let robot = &mut self.robots[id];
                    robot.traversed = s;
                    robot.pos = if done && stop >= robot.plan.length() { robot.plan.end() } else { robot.plan.point_at(s) };
                    let at = robot.pos;
                    let rec = self.push(id, if done { EventKind::MoveEnd } else { EventKind::MoveProgress });
                    rec.s = Some(s);
                    rec.at = Some(at);
                    if done {
                        let robot = &mut self.robots[id];
                        robot.phase = Phase::Idle;
                        robot.plan = Trajectory::nil(at);
                        Phase::Idle
                    } else {
                        Phase::Moving
                    }
                }
            };
            let d = self.delay(entered, id);
            self.robots[id].next_time = self.now + d;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: usize, r: f64, phase: f64) -> Vec<Point> {
        (0..n).map(|k| Point::polar(Point::ORIGIN, r, phase + TAU * k as f64 / n as f64)).collect()
    }

    #[test]
    fn already_formed_stops_at_first_look() {
        let s = Scenario::new(ring(5, 1.0, 0.2), ring(5, 3.0, 0.0).into_iter().map(|p| (p, 1)).collect());
        let run = run(&s).unwrap();
        assert_eq!(run.outcome, Outcome::Formed);
        assert_eq!(run.trace.records.len(), 1);
        assert_eq!(run.trace.records[0].task, Some(TaskId::T11));
    }

    #[test]
    fn symmetry_mismatch_is_unsolvable() {
        let s = Scenario::new(ring(12, 1.0, 0.0), ring(12, 1.0, 0.1).into_iter().enumerate().map(|(i, p)| (p * (1.0 + 0.1 * (i % 4 == 0) as u8 as f64), 1)).collect());
        let run = run(&s).unwrap();
        assert_eq!(run.outcome, Outcome::UnsolvableInput);
        assert!(run.trace.records.is_empty());
    }

    #[test]
    fn lcs_puts_robot_on_origin() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = Point::new(0.3, -0.7);
        let l = random_lcs(&mut rng, p);
        assert!(l.apply(p).norm() < 1e-15);
        assert!(l.scale >= 0.5 && l.scale <= 2.0);
        let back = l.inverse().apply(l.apply(Point::new(2.0, 1.0)));
        assert!(back.dist(Point::new(2.0, 1.0)) < 1e-12);
    }

    #[test]
    fn rejects_multiplicity_and_mismatch() {
        let mut pts = ring(4, 1.0, 0.0);
        pts.push(pts[0]);
        let s = Scenario::new(pts, ring(5, 1.0, 0.0).into_iter().map(|p| (p, 1)).collect());
        assert!(matches!(s.prepare(), Err(Error::InvalidScenario(_))));
        let s = Scenario::new(ring(4, 1.0, 0.0), ring(5, 1.0, 0.0).into_iter().map(|p| (p, 1)).collect());
        assert!(matches!(s.prepare(), Err(Error::CardinalityMismatch { .. })));
    }
}
