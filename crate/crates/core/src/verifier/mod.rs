//! Trace checking against the class transition graph, plus a bounded
//! explorer over a discretized adversary.

mod explore;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algorithm::{basic_variables, Algorithm, PredicateVector, TaskId};
use crate::configuration::{similar, symmetricity, Configuration};
use crate::geometry::{Point, Tolerance, Trajectory};
use crate::pattern::{embed_pattern, modified_pattern, Pattern};
use crate::simulator::{EventKind, ExecutionTrace, Outcome};
use crate::Error;

pub use explore::{explore, Exploration, ExploreOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Property {
    /// Not exactly one predicate holds.
    H1,
    /// A snapshot became unsolvable (symmetricity or multiplicity).
    H2,
    /// A class change outside the expected graph, or a recorded class that
    /// disagrees with the predicates.
    H3,
    /// A transition into T11 that is not stationary.
    H3p,
    /// Cycle or self-loop budget exceeded, or the run hit its event limit.
    H4,
    #[serde(rename = "collision")]
    Collision,
    #[serde(rename = "stall")]
    Stall,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub property: Property,
    pub event: usize,
    pub details: String,
}

/// Directed graph over task classes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionGraph {
    pub edges: BTreeSet<(TaskId, TaskId)>,
}

impl TransitionGraph {
    /// The transitions the algorithm is proved to make.
    pub fn expected() -> Self {
        use TaskId::*;
        let rows: [(TaskId, &[TaskId]); 11] = [
            (T1, &[T1, T2, T3, T4, T5, T6]),
            (T2, &[T2, T3, T4, T6, T7, T8]),
            (T3, &[T2, T3, T8]),
            (T4, &[T2, T4, T6, T7]),
            (T5, &[T2, T5, T7]),
            (T6, &[T3, T6, T9]),
            (T7, &[T7, T8, T9, T11]),
            (T8, &[T8, T9, T11]),
            (T9, &[T9, T11]),
            (T10, &[T10, T11]),
            (T11, &[T11]),
        ];
        let mut g = TransitionGraph::default();
        for (from, tos) in rows {
            for &to in tos {
                g.edges.insert((from, to));
            }
        }
        g
    }

    pub fn contains(&self, from: TaskId, to: TaskId) -> bool {
        self.edges.contains(&(from, to))
    }

    pub fn insert(&mut self, from: TaskId, to: TaskId) {
        self.edges.insert((from, to));
    }

    pub fn is_subgraph_of(&self, other: &TransitionGraph) -> bool {
        self.edges.is_subset(&other.edges)
    }

    pub fn merge(&mut self, other: &TransitionGraph) {
        self.edges.extend(other.edges.iter().copied());
    }

    /// Graphviz rendering; edges missing from `expected` are drawn red.
    pub fn to_dot(&self, expected: Option<&TransitionGraph>) -> String {
        let mut s = String::from("digraph transitions {\n  rankdir=LR;\n  node [shape=circle];\n");
        let nodes: BTreeSet<TaskId> = self.edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        for t in nodes {
            let shape = if t == TaskId::T11 { " [shape=doublecircle]" } else { "" };
            let _ = writeln!(s, "  {t}{shape};");
        }
        for &(a, b) in &self.edges {
            let bad = expected.is_some_and(|g| !g.contains(a, b));
            let _ = writeln!(s, "  {a} -> {b}{};", if bad { " [color=red]" } else { "" });
        }
        s.push_str("}\n");
        s
    }
}

/// The four simple cycles of the expected graph that avoid self-loops.
pub const SIMPLE_CYCLES: [&[TaskId]; 4] = [
    &[TaskId::T2, TaskId::T3],
    &[TaskId::T2, TaskId::T4],
    &[TaskId::T2, TaskId::T6, TaskId::T3],
    &[TaskId::T2, TaskId::T4, TaskId::T6, TaskId::T3],
];

/// How many times each simple cycle is fully traversed in a class sequence
/// without repeats.
pub fn cycle_counts(classes: &[TaskId]) -> [usize; 4] {
    let mut out = [0; 4];
    for (c, cycle) in SIMPLE_CYCLES.iter().enumerate() {
        let k = cycle.len();
        for w in classes.windows(k + 1) {
            if w[..k] == **cycle && w[k] == cycle[0] {
                out[c] += 1;
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransitionKind {
    Stationary,
    AlmostStationary,
    Robust,
    Unclassified,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub from: TaskId,
    pub to: TaskId,
    /// Index of the Look that first saw the new class.
    pub event: usize,
    pub kind: TransitionKind,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckOptions {
    /// Most move-ends allowed while the class stays the same.
    pub self_loop_budget: usize,
}

impl CheckOptions {
    /// Ten rounds of ν-sized steps per robot.
    pub fn for_run(n: usize, nu: f64) -> Self {
        CheckOptions { self_loop_budget: 10 * n * (1.0 / nu).ceil() as usize }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub violations: Vec<Violation>,
    pub observed: TransitionGraph,
    pub transitions: Vec<Transition>,
    pub looks: usize,
}

impl Report {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Whether `k` robots may share the point `q` of `world`: at the center as
/// far as F's center allows, on a target of F′ with enough multiplicity, or
/// anywhere from C^T out to C(R) where the radial projection of the outer
/// robots is F and demands that many robots at the end of the ray.
pub fn coincidence_allowed(world: &Configuration, f: &Pattern, q: Point, k: usize) -> bool {
    let tol = *world.tol();
    let map = world.normalizing_map();
    let r = world.transformed(&map);
    let q = map.apply(q);
    let count = |pts: &[Point]| pts.iter().filter(|p| p.approx_eq(q, &tol)).count();
    if q.norm() <= tol.length {
        return k <= f.center_multiplicity();
    }
    if let Ok(e) = embed_pattern(&r, f) {
        if count(&modified_pattern(f, &e)) >= k {
            return true;
        }
    }
    // Robots heading radially for C(R) in T9 may meet anywhere on their
    // shared ray, provided F wants that many robots where the ray ends.
    let top = f.top_radius();
    if !f.is_single_point() && q.norm() >= top - tol.length {
        let projected: Vec<Point> = (0..r.len())
            .map(|i| if !r.on_sec(i) && r.dist(i) >= top - tol.length { Point::polar(Point::ORIGIN, 1.0, r.angle(i)) } else { r.points()[i] })
            .collect();
        let end = Point::polar(Point::ORIGIN, 1.0, q.angle_from(Point::ORIGIN));
        if let Ok(p) = Configuration::new(projected.clone(), tol) {
            return similar(&p, f.config(), true) && projected.iter().filter(|p| p.approx_eq(end, &tol)).count() >= k;
        }
    }
    false
}

/// ρ(R) divides ρ(F) and no multiplicity exceeds F's largest.
pub fn solvability_issue(cfg: &Configuration, f: &Pattern) -> Option<String> {
    let rho = symmetricity(cfg);
    if !f.is_single_point() && f.symmetricity() % rho != 0 {
        return Some(format!("ρ(R) = {rho} does not divide ρ(F) = {}", f.symmetricity()));
    }
    if cfg.max_multiplicity() > f.max_multiplicity() {
        return Some(format!("multiplicity {} exceeds the pattern's {}", cfg.max_multiplicity(), f.max_multiplicity()));
    }
    None
}

/// Checks H1, H2, H3, H3′, collisions and the H4 budgets along a trace.
pub fn check_trace(trace: &ExecutionTrace, f: &Pattern, expected: &TransitionGraph, opts: CheckOptions) -> Result<Report, Error> {
    let tol = *f.tol();
    let n = f.len();
    let mut report = Report::default();
    let mut world: Option<Vec<Point>> = None;
    let mut last: Option<(Vec<Point>, TaskId)> = None;
    let mut label: Option<TaskId> = None;
    let mut classes: Vec<TaskId> = Vec::new();
    let mut moves_in_class = 0usize;
    let mut over_budget = false;
    let bad = |line: usize, message: String| Error::MalformedTrace { line, message };
    let mut transitions_at: Vec<usize> = Vec::new();

    for (idx, rec) in trace.records.iter().enumerate() {
        if rec.r >= n {
            return Err(bad(idx + 1, format!("robot {} out of range", rec.r)));
        }
        match rec.k {
            EventKind::Look => {
                report.looks += 1;
                let pos = rec.pos.as_ref().ok_or_else(|| bad(idx + 1, "look without snapshot".into()))?;
                if pos.len() != n {
                    return Err(bad(idx + 1, format!("snapshot has {} robots, pattern {}", pos.len(), n)));
                }
                if let Some(w) = &world {
                    if w.iter().zip(pos).any(|(a, b)| !a.approx_eq(*b, &tol)) {
                        return Err(bad(idx + 1, "snapshot disagrees with the replayed positions".into()));
                    }
                }
                world = Some(pos.clone());
                let recorded = rec.task.ok_or_else(|| bad(idx + 1, "look without task".into()))?;
                let fresh = last.as_ref().is_none_or(|(p, _)| p != pos);
                let stock = if fresh {
                    let cfg = Configuration::new(pos.clone(), tol)?;
                    let pv = PredicateVector::new(&basic_variables(&cfg, f)?);
                    if pv.true_count() != 1 {
                        report.violations.push(Violation {
                            property: Property::H1,
                            event: rec.e,
                            details: format!("{} predicates hold", pv.true_count()),
                        });
                    }
                    if let Some(why) = solvability_issue(&cfg, f) {
                        report.violations.push(Violation { property: Property::H2, event: rec.e, details: why });
                    }
                    let t = pv.task().unwrap_or(TaskId::T1);
                    last = Some((pos.clone(), t));
                    t
                } else {
                    last.as_ref().expect("cached").1
                };
                if stock != recorded {
                    report.violations.push(Violation {
                        property: Property::H3,
                        event: rec.e,
                        details: format!("recorded {recorded} but the predicates give {stock}"),
                    });
                }
                if let Some(prev) = label {
                    if prev != recorded {
                        report.observed.insert(prev, recorded);
                        if !expected.contains(prev, recorded) {
                            report.violations.push(Violation {
                                property: Property::H3,
                                event: rec.e,
                                details: format!("unexpected transition {prev} -> {recorded}"),
                            });
                        }
                        transitions_at.push(idx);
                        report.transitions.push(Transition { from: prev, to: recorded, event: rec.e, kind: TransitionKind::Unclassified });
                        moves_in_class = 0;
                        over_budget = false;
                    }
                } else {
                    report.observed.insert(recorded, recorded);
                }
                if classes.last() != Some(&recorded) {
                    classes.push(recorded);
                }
                label = Some(recorded);
            }
            EventKind::MoveProgress | EventKind::MoveEnd => {
                let at = rec.at.ok_or_else(|| bad(idx + 1, "move without position".into()))?;
                let w = world.as_mut().ok_or_else(|| bad(idx + 1, "move before the first look".into()))?;
                w[rec.r] = at;
                let k = w.iter().filter(|p| p.approx_eq(at, &tol)).count();
                if k > 1 {
                    let cfg = Configuration::new(w.clone(), tol)?;
                    if !coincidence_allowed(&cfg, f, at, k) {
                        report.violations.push(Violation {
                            property: Property::Collision,
                            event: rec.e,
                            details: format!("{k} robots meet at ({:.6}, {:.6})", at.x, at.y),
                        });
                    }
                }
                if rec.k == EventKind::MoveEnd {
                    moves_in_class += 1;
                    if moves_in_class > opts.self_loop_budget && !over_budget {
                        over_budget = true;
                        report.violations.push(Violation {
                            property: Property::H4,
                            event: rec.e,
                            details: format!("class {} persisted past {} moves", label.map_or("?".into(), |t| t.to_string()), opts.self_loop_budget),
                        });
                    }
                }
            }
            EventKind::Compute | EventKind::MoveStart => {}
        }
    }

    for (t, &idx) in report.transitions.iter_mut().zip(&transitions_at) {
        t.kind = classify_transition(trace, f, idx)?;
        if t.to == TaskId::T11 && t.kind != TransitionKind::Stationary {
            report.violations.push(Violation {
                property: Property::H3p,
                event: t.event,
                details: format!("{} -> T11 is {:?}", t.from, t.kind),
            });
        }
    }
    for (c, k) in cycle_counts(&classes).into_iter().enumerate() {
        if k > n {
            let names: Vec<String> = SIMPLE_CYCLES[c].iter().map(|t| t.to_string()).collect();
            report.violations.push(Violation {
                property: Property::H4,
                event: trace.records.last().map_or(0, |r| r.e),
                details: format!("cycle ({}) traversed {k} times, budget {n}", names.join(",")),
            });
        }
    }
    let end = trace.records.last().map_or(0, |r| r.e);
    match trace.outcome {
        Some(Outcome::EventLimit) => report.violations.push(Violation { property: Property::H4, event: end, details: "event limit reached before formation".into() }),
        Some(Outcome::Stalled) => report.violations.push(Violation { property: Property::Stall, event: end, details: "no robot wanted to move".into() }),
        _ => {}
    }
    Ok(report)
}

fn same_path(pending: &Trajectory, fresh: &Trajectory, tol: &Tolerance) -> bool {
    !fresh.is_nil() && pending.end().approx_eq(fresh.end(), &tol.scaled(1e3)) && pending.length() <= fresh.length() + 1e3 * tol.length
}

/// Kind of the transition first seen by the Look at `records[idx]`.
///
/// Robustness is judged only along the future the trace actually took.
pub fn classify_transition(trace: &ExecutionTrace, f: &Pattern, idx: usize) -> Result<TransitionKind, Error> {
    let missing = |m: &str| Error::MalformedTrace { line: idx + 1, message: m.into() };
    let rec = trace.records.get(idx).ok_or_else(|| missing("no such record"))?;
    let pend = rec.pend.as_ref().ok_or_else(|| missing("look without pending metadata"))?;
    let pos = rec.pos.as_ref().ok_or_else(|| missing("look without snapshot"))?;
    let task = rec.task.ok_or_else(|| missing("look without task"))?;
    if pend.iter().all(Option::is_none) {
        return Ok(TransitionKind::Stationary);
    }
    let cfg = Configuration::new(pos.clone(), *f.tol())?;
    if let Ok(plan) = Algorithm::default().compute(&cfg, f) {
        let all = pend.iter().enumerate().all(|(i, p)| match p {
            None => true,
            Some(p) => same_path(p, &plan.trajectory_for(i, pos[i]), f.tol()),
        });
        if all {
            return Ok(TransitionKind::AlmostStationary);
        }
    }
    let mut waiting: BTreeSet<usize> = pend.iter().enumerate().filter(|(_, p)| p.is_some()).map(|(i, _)| i).collect();
    for later in &trace.records[idx + 1..] {
        if waiting.is_empty() {
            break;
        }
        match later.k {
            EventKind::Look if later.task != Some(task) => return Ok(TransitionKind::Unclassified),
            EventKind::MoveEnd => {
                waiting.remove(&later.r);
            }
            EventKind::Compute if later.traj.is_none() => {
                waiting.remove(&later.r);
            }
            _ => {}
        }
    }
    Ok(if waiting.is_empty() { TransitionKind::Robust } else { TransitionKind::Unclassified })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::TraceRecord;
    use std::f64::consts::TAU;

    fn ring(n: usize, r: f64, phase: f64) -> Vec<Point> {
        (0..n).map(|k| Point::polar(Point::ORIGIN, r, phase + TAU * k as f64 / n as f64)).collect()
    }

    fn look(e: usize, pos: Vec<Point>, task: TaskId) -> TraceRecord {
        let mut r = TraceRecord::new(e, e as f64, 0, EventKind::Look);
        r.pend = Some(vec![None; pos.len()]);
        r.pos = Some(pos);
        r.task = Some(task);
        r
    }

    fn square_pattern() -> Pattern {
        Pattern::new(ring(4, 1.0, 0.0), Tolerance::default()).unwrap()
    }

    #[test]
    fn graph_has_unique_sink() {
        let g = TransitionGraph::expected();
        assert_eq!(g.edges.len(), 6 + 6 + 3 + 4 + 3 + 3 + 4 + 3 + 2 + 2 + 1);
        for t in TaskId::ALL {
            let out: Vec<_> = g.edges.iter().filter(|e| e.0 == t && e.1 != t).collect();
            assert_eq!(out.is_empty(), t == TaskId::T11, "{t}");
        }
        assert!(g.to_dot(None).contains("T9 -> T11;"));
    }

    #[test]
    fn cycles_are_counted() {
        use TaskId::*;
        assert_eq!(cycle_counts(&[T1, T2, T3, T2, T3, T2, T8]), [2, 0, 0, 0]);
        assert_eq!(cycle_counts(&[T2, T4, T6, T3, T2]), [0, 0, 0, 1]);
    }

    #[test]
    fn clean_formed_trace() {
        let f = square_pattern();
        let formed = ring(4, 2.0, 0.3);
        let trace = ExecutionTrace { records: vec![look(0, formed, TaskId::T11)], outcome: Some(Outcome::Formed) };
        let rep = check_trace(&trace, &f, &TransitionGraph::expected(), CheckOptions::for_run(4, 0.05)).unwrap();
        assert!(rep.is_clean(), "{:?}", rep.violations);
    }

    #[test]
    fn unexpected_edge_and_label_flip() {
        let f = square_pattern();
        let formed = ring(4, 1.0, 0.0);
        let trace = ExecutionTrace {
            records: vec![look(0, formed.clone(), TaskId::T9), look(1, formed, TaskId::T8)],
            outcome: None,
        };
        let rep = check_trace(&trace, &f, &TransitionGraph::expected(), CheckOptions::for_run(4, 0.05)).unwrap();
        assert!(rep.violations.iter().any(|v| v.property == Property::H3 && v.details.contains("T9 -> T8")));
    }

    #[test]
    fn symmetric_snapshot_breaks_solvability() {
        let f6 = Pattern::new([ring(2, 1.0, 0.0), ring(2, 0.5, 0.3), ring(2, 0.7, 1.0)].concat(), Tolerance::default()).unwrap();
        let sym = Configuration::new([ring(3, 1.0, 0.0), ring(3, 0.5, 0.4)].concat(), Tolerance::default()).unwrap();
        assert_eq!(symmetricity(&sym), 3);
        assert!(solvability_issue(&sym, &f6).unwrap().contains("does not divide"));
        let mut skew = [ring(3, 1.0, 0.0), ring(3, 0.5, 0.4)].concat();
        skew[4] = Point::new(0.1, 0.2);
        let skew = Configuration::new(skew, Tolerance::default()).unwrap();
        assert_eq!(symmetricity(&skew), 1);
        assert!(solvability_issue(&skew, &f6).is_none());
    }

    #[test]
    fn coincidence_off_target_is_flagged() {
        let f = square_pattern();
        let mut pos = vec![Point::new(1.0, 0.0), Point::new(-1.0, 0.0), Point::new(0.2, 0.3), Point::new(-0.3, 0.1)];
        let mut records = vec![look(0, pos.clone(), TaskId::T1)];
        let e = basic_variables(&Configuration::new(pos.clone(), Tolerance::default()).unwrap(), &f).unwrap();
        records[0].task = PredicateVector::new(&e).task();
        let mut mv = TraceRecord::new(1, 1.0, 3, EventKind::MoveEnd);
        pos[3] = pos[2];
        mv.at = Some(pos[2]);
        mv.s = Some(0.5);
        records.push(mv);
        let trace = ExecutionTrace { records, outcome: None };
        let rep = check_trace(&trace, &f, &TransitionGraph::expected(), CheckOptions::for_run(4, 0.05)).unwrap();
        assert!(rep.violations.iter().any(|v| v.property == Property::Collision));
    }
}
