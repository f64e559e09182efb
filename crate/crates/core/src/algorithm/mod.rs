//! The Compute phase: basic variables, task predicates and the moves.
//!
//! Everything is evaluated in a normalized frame (c(R) at the origin,
//! δ(C(R)) = 1); [`Algorithm::compute`] maps the resulting trajectories back
//! to the frame of the snapshot it was given.

mod distmin;
mod gotoc;
mod moves;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::configuration::{is_regular_polygon, max_regular_gons, similar, Configuration};
use crate::geometry::{Point, Similarity, Trajectory};
use crate::pattern::{parking_circles, ParkingGeometry, Pattern};
use crate::Error;

use gotoc::go_to_ct;

/// The eleven task classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TaskId {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
    T9,
    T10,
    T11,
}

impl TaskId {
    pub const ALL: [TaskId; 11] = [
        TaskId::T1,
        TaskId::T2,
        TaskId::T3,
        TaskId::T4,
        TaskId::T5,
        TaskId::T6,
        TaskId::T7,
        TaskId::T8,
        TaskId::T9,
        TaskId::T10,
        TaskId::T11,
    ];

    /// 1-based task number.
    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn from_number(k: usize) -> Option<TaskId> {
        k.checked_sub(1).and_then(|i| TaskId::ALL.get(i).copied())
    }

    pub fn parse(s: &str) -> Option<TaskId> {
        s.strip_prefix('T').and_then(|k| k.parse().ok()).and_then(TaskId::from_number)
    }
}

impl fmt::Display for TaskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.number())
    }
}

/// The Boolean variables every precondition is built from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasicVariables {
    pub d1: bool,
    pub d2: bool,
    pub f: bool,
    pub t: bool,
    pub u: bool,
    pub c: bool,
    pub a: bool,
    pub m: bool,
    pub p: bool,
    pub g: bool,
    pub w: bool,
}

impl BasicVariables {
    /// pre₁ … pre₁₁, indexed from 0.
    pub fn preconditions(&self) -> [bool; 11] {
        let v = self;
        [
            true,
            !v.c,
            v.a && !v.c,
            v.a && !v.c && v.m,
            !v.c && v.f,
            v.a && !v.c && v.m && v.t,
            v.a && !v.d2 && !v.u,
            v.a && !v.d1 && v.u,
            !v.m && v.p,
            v.g,
            v.w,
        ]
    }
}

/// Preconditions and the derived predicates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PredicateVector {
    pub pre: [bool; 11],
    pub predicate: [bool; 11],
}

impl PredicateVector {
    /// Pᵢ = preᵢ ∧ ¬(preⱼ for every j after i in `priority`), where
    /// `priority` lists the tasks from weakest to strongest.
    pub fn with_priority(pre: [bool; 11], priority: &[TaskId; 11]) -> Self {
        let mut predicate = [false; 11];
        let mut later = false;
        for &t in priority.iter().rev() {
            let i = t as usize;
            predicate[i] = pre[i] && !later;
            later |= pre[i];
        }
        PredicateVector { pre, predicate }
    }

    pub fn new(vars: &BasicVariables) -> Self {
        PredicateVector::with_priority(vars.preconditions(), &TaskId::ALL)
    }

    pub fn true_count(&self) -> usize {
        self.predicate.iter().filter(|&&b| b).count()
    }

    /// The task whose predicate holds (the first one if, impossibly, several do).
    pub fn task(&self) -> Option<TaskId> {
        self.predicate.iter().position(|&b| b).and_then(|i| TaskId::from_number(i + 1))
    }
}

/// Deliberate faults, used to check that the verifier notices them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    #[default]
    None,
    /// m₉ pushes robots sideways instead of radially.
    TangentialFinish,
    /// GoToC heads for a_r even when it is forbidden.
    IgnoreForbidden,
    /// T₃ outranks T₄.
    SwappedPriority,
}

impl Mutation {
    pub fn priority(self) -> [TaskId; 11] {
        let mut order = TaskId::ALL;
        if self == Mutation::SwappedPriority {
            order.swap(2, 3);
        }
        order
    }
}

/// Plug-in slot for the external algorithms task T₁₀ relies on.
pub trait DelegatedSolver: Send + Sync {
    fn gathering(&self, r: &Configuration) -> Result<Vec<MoveDirective>, Error>;
    fn leader(&self, r: &Configuration, f: &Pattern) -> Result<Vec<MoveDirective>, Error>;
}

/// The default slot: neither algorithm is available.
#[derive(Clone, Copy, Debug, Default)]
pub struct Unsupported;

impl DelegatedSolver for Unsupported {
    fn gathering(&self, _: &Configuration) -> Result<Vec<MoveDirective>, Error> {
        Err(Error::DelegatedUnsupported)
    }

    fn leader(&self, _: &Configuration, _: &Pattern) -> Result<Vec<MoveDirective>, Error> {
        Err(Error::DelegatedUnsupported)
    }
}

/// A trajectory for one robot of the snapshot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoveDirective {
    /// Index into the snapshot the plan was computed from.
    pub index: usize,
    pub robot: Point,
    pub trajectory: Trajectory,
}

/// Output of one Compute: the class of the snapshot and every non-nil move.
#[derive(Clone, Debug, PartialEq)]
pub struct Plan {
    pub task: TaskId,
    pub vars: BasicVariables,
    pub directives: Vec<MoveDirective>,
}

impl Plan {
    pub fn trajectory_for(&self, index: usize, position: Point) -> Trajectory {
        self.directives
            .iter()
            .find(|d| d.index == index)
            .map_or_else(|| Trajectory::nil(position), |d| d.trajectory.clone())
    }

    pub fn movers(&self) -> Vec<usize> {
        self.directives.iter().map(|d| d.index).collect()
    }
}

/// The configuration in the normalized frame plus everything derived from it
/// that more than one move needs.
pub(crate) struct Scene<'a> {
    pub r: Configuration,
    pub f: &'a Pattern,
    pub park: Option<ParkingGeometry>,
    pub n: usize,
}

impl<'a> Scene<'a> {
    fn new(r: &Configuration, f: &'a Pattern) -> Result<(Self, Similarity), Error> {
        if r.len() != f.len() {
            return Err(Error::CardinalityMismatch { robots: r.len(), pattern: f.len() });
        }
        let map = r.normalizing_map();
        let rn = r.transformed(&map);
        let park = if f.is_single_point() || rn.radius() == 0.0 { None } else { Some(parking_circles(&rn, f)?) };
        let n = rn.len();
        Ok((Scene { r: rn, f, park, n }, map))
    }

    pub fn top(&self) -> f64 {
        self.park.map_or(0.5, |p| p.top.radius)
    }

    pub fn bottom(&self) -> f64 {
        self.park.map_or(0.0, |p| p.bottom.radius)
    }

    pub fn in_ann(&self, i: usize) -> bool {
        let tol = self.r.tol();
        let d = self.r.dist(i);
        self.park.is_some() && d > self.top() + tol.length && d < 1.0 - tol.length
    }

    pub fn on_top(&self, i: usize) -> bool {
        self.park.is_some() && self.r.tol().eq_len(self.r.dist(i), self.top())
    }

    fn variables(&self) -> BasicVariables {
        let r = &self.r;
        let f = self.f;
        let tol = r.tol();
        let rho_f = f.symmetricity();
        let boundary = r.boundary();
        let b = boundary.len();
        let mp = f.min_prime();
        let g = f.needs_delegation();
        let w = similar(r, f.config(), true);
        if r.radius() == 0.0 {
            return BasicVariables { d1: rho_f % b != 0, d2: b != mp, f: b < mp, a: true, m: true, g, w, ..Default::default() };
        }
        let levels = r.levels();
        let c = match levels.up(1) {
            Some(l) if l.members.len() == 1 => self.park.is_some() && l.radius < self.bottom() - tol.length,
            _ => false,
        };
        let a = !(0..self.n).any(|i| self.in_ann(i));
        let p = self.park.is_some() && {
            let projected: Vec<Point> = (0..self.n)
                .map(|i| {
                    let q = r.points()[i];
                    if !r.on_sec(i) && r.dist(i) >= self.top() - tol.length {
                        Point::polar(Point::ORIGIN, 1.0, r.angle(i))
                    } else {
                        q
                    }
                })
                .collect();
            Configuration::new(projected, *tol).is_ok_and(|pc| similar(&pc, f.config(), true))
        };
        BasicVariables {
            d1: rho_f % b != 0,
            d2: b != mp,
            f: b < mp,
            t: b == 3 && rho_f % 2 == 0,
            u: is_regular_polygon(&boundary, r),
            c,
            a,
            m: max_regular_gons(&r.sec(), r, rho_f).is_empty(),
            p,
            g,
            w,
        }
    }
}

/// The basic variables of `r` against `f`.
pub fn basic_variables(r: &Configuration, f: &Pattern) -> Result<BasicVariables, Error> {
    let (scene, _) = Scene::new(r, f)?;
    Ok(scene.variables())
}

/// The task class of `r` against `f`.
pub fn classify(r: &Configuration, f: &Pattern) -> Result<TaskId, Error> {
    let vars = basic_variables(r, f)?;
    Ok(PredicateVector::new(&vars).task().expect("pre₁ always holds"))
}

/// The Compute function with its optional fault and T₁₀ plug-ins.
#[derive(Clone)]
pub struct Algorithm {
    pub mutation: Mutation,
    solver: Arc<dyn DelegatedSolver>,
}

impl fmt::Debug for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algorithm").field("mutation", &self.mutation).finish_non_exhaustive()
    }
}

impl Default for Algorithm {
    fn default() -> Self {
        Algorithm { mutation: Mutation::None, solver: Arc::new(Unsupported) }
    }
}

impl Algorithm {
    pub fn new(mutation: Mutation) -> Self {
        Algorithm { mutation, ..Default::default() }
    }

    pub fn with_solver(mut self, solver: Arc<dyn DelegatedSolver>) -> Self {
        self.solver = solver;
        self
    }

    pub fn classify(&self, r: &Configuration, f: &Pattern) -> Result<(TaskId, BasicVariables), Error> {
        let vars = basic_variables(r, f)?;
        let pv = PredicateVector::with_priority(vars.preconditions(), &self.mutation.priority());
        Ok((pv.task().expect("pre₁ always holds"), vars))
    }

    /// Classifies `r` and returns the trajectories of every robot that moves,
    /// in the frame of `r`.
    pub fn compute(&self, r: &Configuration, f: &Pattern) -> Result<Plan, Error> {
        let (scene, map) = Scene::new(r, f)?;
        let vars = scene.variables();
        let pv = PredicateVector::with_priority(vars.preconditions(), &self.mutation.priority());
        let task = pv.task().expect("pre₁ always holds");
        let moves: Vec<(usize, Trajectory)> = match task {
            TaskId::T1 => moves::m1(&scene)?,
            TaskId::T2 => moves::m2(&scene, self.mutation)?,
            TaskId::T3 => moves::m3(&scene, self.mutation)?,
            TaskId::T4 => moves::m4(&scene, self.mutation)?,
            TaskId::T5 => moves::m5(&scene)?,
            TaskId::T6 => moves::m6(&scene)?,
            TaskId::T7 => moves::m7(&scene)?,
            TaskId::T8 => distmin::distmin(&scene)?,
            TaskId::T9 => moves::m9(&scene, self.mutation),
            TaskId::T10 => {
                let ds = if f.is_single_point() { self.solver.gathering(r)? } else { self.solver.leader(r, f)? };
                return Ok(Plan { task, vars, directives: ds });
            }
            TaskId::T11 => Vec::new(),
        };
        let back = map.inverse();
        let directives = moves
            .into_iter()
            .filter(|(_, t)| !t.is_nil())
            .map(|(i, t)| {
                let mut trajectory = t.transformed(&back);
                trajectory.start = r.points()[i];
                MoveDirective { index: i, robot: r.points()[i], trajectory }
            })
            .collect();
        Ok(Plan { task, vars, directives })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Tolerance;
    use std::f64::consts::TAU;

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    fn ring(n: usize, r: f64, phase: f64) -> Vec<Point> {
        (0..n).map(|k| Point::polar(Point::ORIGIN, r, phase + TAU * k as f64 / n as f64)).collect()
    }

    #[test]
    fn predicates_follow_priority() {
        let all = BasicVariables { w: true, ..Default::default() };
        assert_eq!(PredicateVector::new(&all).task(), Some(TaskId::T11));
        let none = BasicVariables { c: true, d1: true, d2: true, u: true, m: true, ..Default::default() };
        assert_eq!(PredicateVector::new(&none).task(), Some(TaskId::T1));
        let pv = PredicateVector::new(&BasicVariables { a: true, m: true, d1: true, d2: true, ..Default::default() });
        assert_eq!(pv.true_count(), 1);
        assert_eq!(pv.task(), Some(TaskId::T4));
        let swapped = PredicateVector::with_priority(pv.pre, &Mutation::SwappedPriority.priority());
        assert_eq!(swapped.task(), Some(TaskId::T3));
    }

    #[test]
    fn task_names() {
        assert_eq!(TaskId::T7.to_string(), "T7");
        assert_eq!(TaskId::parse("T11"), Some(TaskId::T11));
        assert_eq!(TaskId::parse("T0"), None);
        assert_eq!(serde_json::to_string(&TaskId::T3).unwrap(), "\"T3\"");
    }

    #[test]
    fn square_on_boundary_for_four() {
        let mut r = ring(4, 1.0, 0.0);
        r.extend([Point::new(0.2, 0.1), Point::new(-0.3, 0.05), Point::new(0.1, -0.35), Point::new(-0.05, -0.15)]);
        let mut f = ring(4, 1.0, 0.3);
        f.extend(ring(4, 0.5, 0.0));
        let f = Pattern::new(f, Tolerance::default()).unwrap();
        let r = Configuration::new(r, Tolerance::default()).unwrap();
        let v = basic_variables(&r, &f).unwrap();
        assert!(!v.d1 && v.d2 && v.u && !v.m && v.a && !v.g && !v.w);
        assert_eq!(classify(&r, &f).unwrap(), TaskId::T8);
    }

    #[test]
    fn single_point_pattern_delegates() {
        let f = Pattern::new(vec![Point::new(3.0, 3.0); 4], Tolerance::default()).unwrap();
        let r = Configuration::new(pts(&[(1.0, 0.0), (-1.0, 0.0), (0.0, 0.3), (0.2, 0.1)]), Tolerance::default()).unwrap();
        assert!(basic_variables(&r, &f).unwrap().g);
        assert_eq!(classify(&r, &f).unwrap(), TaskId::T10);
        assert!(matches!(Algorithm::default().compute(&r, &f), Err(Error::DelegatedUnsupported)));
    }

    #[test]
    fn formed_is_nil() {
        let f = Pattern::new(ring(5, 2.0, 0.1), Tolerance::default()).unwrap();
        let r = Configuration::new(ring(5, 1.0, 0.7), Tolerance::default()).unwrap();
        let plan = Algorithm::default().compute(&r, &f).unwrap();
        assert_eq!(plan.task, TaskId::T11);
        assert!(plan.directives.is_empty());
    }

    #[test]
    fn cardinality_is_checked() {
        let f = Pattern::new(ring(5, 1.0, 0.0), Tolerance::default()).unwrap();
        let r = Configuration::new(ring(4, 1.0, 0.0), Tolerance::default()).unwrap();
        assert!(matches!(classify(&r, &f), Err(Error::CardinalityMismatch { robots: 4, pattern: 5 })));
    }
}
