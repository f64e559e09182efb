use std::collections::{HashMap, HashSet, VecDeque};

use super::{coincidence_allowed, solvability_issue, Property, TransitionGraph, Violation, SIMPLE_CYCLES};
use crate::algorithm::{basic_variables, Algorithm, PredicateVector, TaskId};
use crate::configuration::Configuration;
use crate::geometry::{Point, Trajectory};
use crate::pattern::Pattern;
use crate::Error;

/// Shape of the discretized adversary.
#[derive(Clone, Debug, PartialEq)]
pub struct ExploreOptions {
    /// Only the `k` least recently activated robots may act next.
    pub k: usize,
    /// Fractions of the remaining path a move may cover (at least ν).
    pub fractions: Vec<f64>,
    pub nu: f64,
    /// Most configuration-changing moves along one branch.
    pub depth: usize,
    pub max_states: usize,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions { k: 2, fractions: vec![1.0, 0.5], nu: 0.05, depth: 40, max_states: 400_000 }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Exploration {
    pub states: usize,
    /// Branches that ended with the pattern formed and every robot still.
    pub formed: usize,
    /// Branches cut by the depth bound.
    pub unterminated: usize,
    /// Fair schedules that cycle forever without forming the pattern.
    pub livelocks: usize,
    pub deepest: usize,
    pub observed: TransitionGraph,
    pub violations: Vec<Violation>,
}

impl Exploration {
    pub fn all_terminate(&self) -> bool {
        self.unterminated == 0 && self.livelocks == 0 && self.formed > 0
    }
}

#[derive(Clone)]
struct Node {
    pos: Vec<Point>,
    plan: Vec<Option<Trajectory>>,
    order: Vec<usize>,
    label: Option<TaskId>,
    // Compressed class history, long enough to close any simple cycle.
    tail: Vec<TaskId>,
    cycles: [u8; 4],
    depth: usize,
    idle: usize,
}

const Q: f64 = 1e7;

fn q(p: Point) -> (i64, i64) {
    ((p.x * Q).round() as i64, (p.y * Q).round() as i64)
}

type Key = (Vec<(i64, i64)>, Vec<Option<((i64, i64), i64)>>, Vec<usize>, Option<TaskId>, Vec<TaskId>, [u8; 4], usize);

fn key(n: &Node) -> Key {
    (
        n.pos.iter().map(|&p| q(p)).collect(),
        n.plan.iter().map(|t| t.as_ref().map(|t| (q(t.end()), (t.length() * Q).round() as i64))).collect(),
        n.order.clone(),
        n.label,
        n.tail.clone(),
        n.cycles,
        n.idle,
    )
}

struct Snapshot {
    label: TaskId,
    plan: Vec<Trajectory>,
    issues: Vec<(Property, String)>,
}

struct Explorer<'a> {
    f: &'a Pattern,
    algorithm: &'a Algorithm,
    opts: &'a ExploreOptions,
    expected: TransitionGraph,
    cache: HashMap<Vec<(i64, i64)>, Snapshot>,
    out: Exploration,
    seen_violations: HashSet<(Property, String)>,
}

impl Explorer<'_> {
    fn flag(&mut self, property: Property, event: usize, details: String) {
        if self.seen_violations.insert((property, details.clone())) {
            self.out.violations.push(Violation { property, event, details });
        }
    }

    fn snapshot(&mut self, pos: &[Point]) -> Result<&Snapshot, Error> {
        let k: Vec<(i64, i64)> = pos.iter().map(|&p| q(p)).collect();
        if !self.cache.contains_key(&k) {
            let cfg = Configuration::new(pos.to_vec(), *self.f.tol())?;
            let mut issues = Vec::new();
            let pv = PredicateVector::new(&basic_variables(&cfg, self.f)?);
            if pv.true_count() != 1 {
                issues.push((Property::H1, format!("{} predicates hold", pv.true_count())));
            }
            if let Some(why) = solvability_issue(&cfg, self.f) {
                issues.push((Property::H2, why));
            }
            let plan = self.algorithm.compute(&cfg, self.f)?;
            let stock = pv.task().unwrap_or(TaskId::T1);
            if stock != plan.task {
                issues.push((Property::H3, format!("computed {} where the predicates give {stock}", plan.task)));
            }
            let trajectories = (0..pos.len()).map(|i| plan.trajectory_for(i, pos[i])).collect();
            self.cache.insert(k.clone(), Snapshot { label: plan.task, plan: trajectories, issues });
        }
        Ok(&self.cache[&k])
    }

    fn successors(&mut self, node: &Node, id: usize) -> Result<Vec<(usize, Node)>, Error> {
        let n = node.pos.len();
        let mut out = Vec::new();
        for &r in node.order.iter().take(self.opts.k) {
            let mut next = node.clone();
            next.order.retain(|&x| x != r);
            next.order.push(r);
            match &node.plan[r] {
                None => {
                    let snap = self.snapshot(&node.pos)?;
                    let (label, traj, issues) = (snap.label, snap.plan[r].clone(), snap.issues.clone());
                    for (p, d) in issues {
                        self.flag(p, id, d);
                    }
                    if let Some(prev) = node.label {
                        if prev != label {
                            self.out.observed.insert(prev, label);
                            if !self.expected.contains(prev, label) {
                                self.flag(Property::H3, id, format!("unexpected transition {prev} -> {label}"));
                            }
                        }
                    }
                    if next.tail.last() != Some(&label) {
                        next.tail.push(label);
                        for (c, cycle) in SIMPLE_CYCLES.iter().enumerate() {
                            let k = cycle.len();
                            let t = &next.tail;
                            if t.len() > k && t[t.len() - k - 1..t.len() - 1] == **cycle && t[t.len() - 1] == cycle[0] {
                                next.cycles[c] += 1;
                                if next.cycles[c] as usize > n {
                                    self.flag(Property::H4, id, format!("cycle {c} traversed more than {n} times"));
                                }
                            }
                        }
                        if next.tail.len() > 5 {
                            next.tail.remove(0);
                        }
                    }
                    next.label = Some(label);
                    if traj.is_nil() {
                        next.idle += 1;
                    } else {
                        next.plan[r] = Some(traj);
                    }
                    out.push((r, next));
                }
                Some(t) => {
                    let len = t.length();
                    let mut stops: Vec<f64> = self.opts.fractions.iter().map(|&fr| (fr * len).max(self.opts.nu.min(len))).collect();
                    stops.sort_by(f64::total_cmp);
                    stops.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
                    for s in stops {
                        let mut m = next.clone();
                        let at = t.point_at(s);
                        m.pos[r] = at;
                        m.plan[r] = None;
                        m.depth += 1;
                        m.idle = 0;
                        let tol = *self.f.tol();
                        let k = m.pos.iter().filter(|p| p.approx_eq(at, &tol)).count();
                        if k > 1 {
                            let cfg = Configuration::new(m.pos.clone(), tol)?;
                            if !coincidence_allowed(&cfg, self.f, at, k) {
                                self.flag(Property::Collision, id, format!("{k} robots meet at ({:.6}, {:.6})", at.x, at.y));
                            }
                        }
                        out.push((r, m));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Breadth-first search over every schedule of the discretized adversary,
/// merging states that agree on positions, pending moves, activation order
/// and class history. Fails with [`Error::StateExplosion`] past the cap.
///
/// Merging turns the schedule tree into a graph; a strongly connected part
/// in which every robot acts is a fair schedule that never forms the
/// pattern, and is reported as a livelock.
pub fn explore(robots: &[Point], f: &Pattern, algorithm: &Algorithm, opts: &ExploreOptions) -> Result<Exploration, Error> {
    let n = robots.len();
    let mut ex = Explorer {
        f,
        algorithm,
        opts,
        expected: TransitionGraph::expected(),
        cache: HashMap::new(),
        out: Exploration::default(),
        seen_violations: HashSet::new(),
    };
    let root = Node {
        pos: robots.to_vec(),
        plan: vec![None; n],
        order: (0..n).collect(),
        label: None,
        tail: Vec::new(),
        cycles: [0; 4],
        depth: 0,
        idle: 0,
    };
    let mut seen: HashMap<Key, u32> = HashMap::new();
    seen.insert(key(&root), 0);
    let mut edges: Vec<Vec<(u32, u8)>> = vec![Vec::new()];
    let mut queue = VecDeque::from([(0u32, root)]);
    while let Some((id, node)) = queue.pop_front() {
        let id = id as usize;
        ex.out.states += 1;
        ex.out.deepest = ex.out.deepest.max(node.depth);
        if node.label == Some(TaskId::T11) && node.plan.iter().all(Option::is_none) {
            ex.out.formed += 1;
            continue;
        }
        if node.depth >= opts.depth {
            ex.out.unterminated += 1;
            ex.flag(Property::H4, id, format!("not formed within {} moves", opts.depth));
            continue;
        }
        if node.idle > 2 * n {
            // Unless nobody would move, this schedule merely starves someone.
            let still = node.plan.iter().all(Option::is_none) && ex.snapshot(&node.pos)?.plan.iter().all(Trajectory::is_nil);
            if still {
                ex.flag(Property::Stall, id, "every robot looked twice without moving".into());
            }
            continue;
        }
        for (r, child) in ex.successors(&node, id)? {
            let next = seen.len() as u32;
            let to = *seen.entry(key(&child)).or_insert(next);
            if to == next {
                if seen.len() > opts.max_states {
                    return Err(Error::StateExplosion(opts.max_states));
                }
                edges.push(Vec::new());
                queue.push_back((to, child));
            }
            edges[id].push((to, r as u8));
        }
    }
    ex.out.livelocks = fair_cycles(&edges, n);
    if ex.out.livelocks > 0 {
        let k = ex.out.livelocks;
        ex.flag(Property::H4, 0, format!("{k} fair cycles never form the pattern"));
    }
    Ok(ex.out)
}

// Strongly connected components (iterative Tarjan) with an internal edge
// for every robot.
fn fair_cycles(edges: &[Vec<(u32, u8)>], n: usize) -> usize {
    const UNSEEN: u32 = u32::MAX;
    let len = edges.len();
    let mut index = vec![UNSEEN; len];
    let mut low = vec![0u32; len];
    let mut on_stack = vec![false; len];
    let mut comp = vec![UNSEEN; len];
    let mut stack: Vec<u32> = Vec::new();
    let mut counter = 0u32;
    let mut comps = 0u32;
    for root in 0..len {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root as u32);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if let Some(&(w, _)) = edges[v].get(*i) {
                *i += 1;
                let w = w as usize;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w as u32);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(u, _)) = call.last() {
                low[u] = low[u].min(low[v]);
            }
            if low[v] == index[v] {
                while let Some(w) = stack.pop() {
                    on_stack[w as usize] = false;
                    comp[w as usize] = comps;
                    if w as usize == v {
                        break;
                    }
                }
                comps += 1;
            }
        }
    }
    let mut acting: HashMap<u32, HashSet<u8>> = HashMap::new();
    for (v, out) in edges.iter().enumerate() {
        for &(w, r) in out {
            if comp[v] == comp[w as usize] {
                acting.entry(comp[v]).or_default().insert(r);
            }
        }
    }
    acting.values().filter(|rs| rs.len() == n).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Tolerance;
    use std::f64::consts::TAU;

    #[test]
    fn formed_start_terminates_immediately() {
        let sq: Vec<Point> = (0..4).map(|k| Point::polar(Point::ORIGIN, 1.0, TAU * k as f64 / 4.0)).collect();
        let f = Pattern::new(sq.clone(), Tolerance::default()).unwrap();
        let ex = explore(&sq, &f, &Algorithm::default(), &ExploreOptions::default()).unwrap();
        assert!(ex.all_terminate());
        assert!(ex.violations.is_empty(), "{:?}", ex.violations);
    }

    #[test]
    fn fair_cycle_detection() {
        // 0 -> 1 -> 0 with both robots acting, and a one-robot loop 2 -> 3 -> 2.
        let edges = vec![vec![(1, 0)], vec![(0, 1), (2, 0)], vec![(3, 0)], vec![(2, 0)]];
        assert_eq!(fair_cycles(&edges, 2), 1);
        assert_eq!(fair_cycles(&[vec![(1, 0)], vec![]], 1), 0);
    }

    #[test]
    fn state_cap_is_enforced() {
        let f = Pattern::new(
            vec![Point::new(1.0, 0.0), Point::new(-1.0, 0.0), Point::new(0.3, 0.2), Point::new(-0.3, -0.2)],
            Tolerance::default(),
        )
        .unwrap();
        let r = vec![Point::new(0.9, 0.1), Point::new(-0.7, 0.4), Point::new(0.1, -0.8), Point::new(0.2, 0.3)];
        let opts = ExploreOptions { max_states: 10, ..Default::default() };
        assert!(matches!(explore(&r, &f, &Algorithm::default(), &opts), Err(Error::StateExplosion(10))));
    }
}
