//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails. Runs without the libtest harness so
//! the lines are never captured.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pf_core::algorithm::basic_variables;
use pf_core::configuration::symmetricity;
use pf_core::generate::generate;
use pf_core::geometry::{annulus_sector, sectorial_distance, smallest_enclosing_circle};
use pf_core::simulator::{compute_in_frame, random_lcs, run, run_with, EventKind, Outcome, Scenario, SchedulerKind};
use pf_core::verifier::{check_trace, explore, CheckOptions, ExploreOptions, Property, TransitionGraph, TransitionKind};
use pf_core::{Algorithm, Configuration, Mutation, Pattern, Point, PredicateVector, TaskId, Tolerance, Trajectory};

const GEOMETRY_TOL: f64 = 1e-9;
const LCS_TOL: f64 = 1e-9;
const MAX_EVENTS: usize = 100_000;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn in_disk(rng: &mut impl Rng, radius: f64) -> Point {
    let r = radius * rng.gen::<f64>().sqrt();
    Point::polar(Point::ORIGIN, r, rng.gen_range(0.0..TAU))
}

fn random_similarity(rng: &mut impl Rng, pts: &[Point]) -> Vec<Point> {
    let (rot, scale) = (rng.gen_range(0.0..TAU), rng.gen_range(0.2..5.0));
    let shift = Point::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
    pts.iter().map(|&p| p.rotate(rot) * scale + shift).collect()
}

// ---------------------------------------------------------------- oracles

/// Smallest of the pair-diameter and triple-circumscribed circles that
/// contains every point.
fn sec_oracle(pts: &[Point]) -> (Point, f64) {
    let mut cands: Vec<(Point, f64)> = pts.iter().map(|&p| (p, 0.0)).collect();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (a, b) = (pts[i], pts[j]);
            cands.push((Point::new((a.x + b.x) / 2.0, (a.y + b.y) / 2.0), a.dist(b) / 2.0));
            for &c in &pts[j + 1..] {
                let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
                if d.abs() < 1e-12 {
                    continue;
                }
                let (a2, b2, c2) = (a.x * a.x + a.y * a.y, b.x * b.x + b.y * b.y, c.x * c.x + c.y * c.y);
                let ux = (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d;
                let uy = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d;
                let o = Point::new(ux, uy);
                cands.push((o, o.dist(a)));
            }
        }
    }
    cands
        .into_iter()
        .filter(|&(o, r)| pts.iter().all(|p| p.dist(o) <= r + 1e-10 * (1.0 + r)))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("the diameter of the farthest pair always qualifies")
}

/// Largest divisor m of n such that rotating by 2π/m about `center` maps
/// the multiset onto itself and the robots at the center split into m.
fn symmetricity_oracle(pts: &[Point], center: Point) -> usize {
    let n = pts.len();
    let eps = 1e-7;
    let at_center = pts.iter().filter(|p| p.dist(center) <= eps).count();
    if at_center == n {
        return n;
    }
    (1..=n)
        .rev()
        .filter(|m| n % m == 0 && at_center % m == 0)
        .find(|&m| {
            let mut used = vec![false; n];
            pts.iter().all(|&p| {
                let q = (p - center).rotate(TAU / m as f64) + center;
                match (0..n).find(|&j| !used[j] && pts[j].dist(q) <= eps) {
                    Some(j) => {
                        used[j] = true;
                        true
                    }
                    None => false,
                }
            })
        })
        .unwrap_or(1)
}

/// `orbits` regular m-gons with random radii and phases, plus `center`
/// robots at the middle.
fn orbit_points(rng: &mut impl Rng, m: usize, orbits: usize, center: usize) -> Vec<Point> {
    let mut pts = vec![Point::ORIGIN; center];
    for k in 0..orbits {
        let radius = if k == 0 { 1.0 } else { rng.gen_range(0.15..0.95) };
        let phase = rng.gen_range(0.0..TAU);
        pts.extend((0..m).map(|j| Point::polar(Point::ORIGIN, radius, phase + TAU * j as f64 / m as f64)));
    }
    pts
}

// ------------------------------------------------------------- criteria

fn geometry_oracles() -> Verdict {
    let mut r = rng(1);
    let mut worst_sec = 0.0f64;
    for case in 0..1000 {
        let n = r.gen_range(1..=12);
        let mut pts: Vec<Point> = match case % 4 {
            0 => (0..n).map(|_| Point::new(r.gen_range(-5.0..5.0), r.gen_range(-5.0..5.0))).collect(),
            // Several points on one circle, the rest inside.
            1 => (0..n)
                .map(|_| if r.gen_bool(0.5) { Point::polar(Point::ORIGIN, 2.0, r.gen_range(0.0..TAU)) } else { in_disk(&mut r, 1.9) })
                .collect(),
            2 => {
                let (a, b) = (in_disk(&mut r, 3.0), in_disk(&mut r, 3.0));
                (0..n).map(|_| a.lerp(b, r.gen_range(0.0..1.0))).collect()
            }
            _ => (0..n).map(|_| Point::new(r.gen_range(0..4) as f64, r.gen_range(0..4) as f64)).collect(),
        };
        // Multisets: repeat a few points.
        for _ in 0..r.gen_range(0..3) {
            let p = pts[r.gen_range(0..pts.len())];
            pts.push(p);
        }
        pts.truncate(12);
        let c = smallest_enclosing_circle(&pts).expect("non-empty");
        let (o, rad) = sec_oracle(&pts);
        worst_sec = worst_sec.max(c.center.dist(o)).max((c.radius - rad).abs());
    }

    let mut worst_axiom = 0.0f64;
    let mut worst_split = 0.0f64;
    let tol = Tolerance::default();
    for _ in 0..10_000 {
        let center = Point::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
        let radius = r.gen_range(0.5..3.0);
        let pick = |r: &mut ChaCha8Rng| in_disk(r, radius) + center;
        let (p, q, s) = (pick(&mut r), pick(&mut r), pick(&mut r));
        let d = |a: Point, b: Point| sectorial_distance(a, b, center, radius);
        let (pq, qp, ps, sq) = (d(p, q), d(q, p), d(p, s), d(s, q));
        worst_axiom = worst_axiom
            .max(-pq.min(0.0))
            .max(d(p, p))
            .max((pq - qp).abs())
            .max(pq - (ps + sq))
            // Identity of indiscernibles on distinct points.
            .max(if p.dist(q) > 1e-6 && pq <= 0.0 { 1.0 } else { 0.0 });

        let Ok(sector) = annulus_sector(p, q, center, &tol) else { continue };
        let rad = r.gen_range(sector.inner..=sector.outer);
        let theta = sector.start.radians() - r.gen_range(0.0..=sector.span);
        let inside = Point::polar(center, rad, theta);
        worst_split = worst_split.max((pq - (d(p, inside) + d(inside, q))).abs());
    }
    let pass = worst_sec <= GEOMETRY_TOL && worst_axiom <= GEOMETRY_TOL && worst_split <= GEOMETRY_TOL;
    verdict(pass, format!("SEC dev {worst_sec:.1e}, metric axioms {worst_axiom:.1e}, split {worst_split:.1e} (tol {GEOMETRY_TOL:.0e})"))
}

fn symmetricity_oracle_check() -> Verdict {
    let mut r = rng(2);
    let tol = Tolerance::default();
    let (mut mismatches, mut center_lone, mut not_dividing) = (0, 0, 0);
    let mut seen = BTreeSet::new();
    for case in 0..1000 {
        let m = r.gen_range(1..=6);
        let orbits = r.gen_range(1..=(12 / m).max(1));
        let center = match case % 4 {
            0 => 1,
            1 if m > 1 && orbits * m + m <= 12 => m,
            _ => 0,
        };
        let mut pts = orbit_points(&mut r, m, orbits, center);
        if pts.len() < 2 {
            pts.push(Point::polar(Point::ORIGIN, 0.5, 0.3));
        }
        if case % 5 == 4 {
            let k = r.gen_range(0..pts.len());
            pts[k] = pts[k] * 0.97 + Point::new(0.0, 0.003);
        }
        let world = random_similarity(&mut r, &pts);
        let cfg = Configuration::new(world.clone(), tol).unwrap();
        let got = symmetricity(&cfg);
        let (o, _) = sec_oracle(&world);
        let want = symmetricity_oracle(&world, o);
        mismatches += usize::from(got != want);
        not_dividing += usize::from(world.len() % got != 0);
        if center == 1 && m > 1 && case % 5 != 4 {
            center_lone += 1;
            mismatches += usize::from(got != 1);
        }
        seen.insert(want);
    }
    verdict(
        mismatches == 0 && not_dividing == 0 && center_lone > 0,
        format!("{mismatches} mismatches in 1000, {center_lone} lone-center gons gave 1, orders seen {seen:?}"),
    )
}

fn random_pattern(r: &mut ChaCha8Rng, n: usize, seed: u64) -> Vec<Point> {
    if r.gen_bool(0.85) {
        let rhos: Vec<usize> = (2..=6).filter(|d| n % d == 0).collect();
        if !rhos.is_empty() {
            let rho = rhos[r.gen_range(0..rhos.len())];
            if let Ok(s) = generate(n, rho, seed, true) {
                return s.pattern.iter().flat_map(|&(p, k)| std::iter::repeat_n(p, k)).collect();
            }
        }
    }
    let mut pts: Vec<Point> = (0..n).map(|_| in_disk(r, 1.0)).collect();
    if r.gen_bool(0.3) {
        pts[n - 1] = pts[0];
    }
    pts
}

fn exclusivity() -> Verdict {
    let mut r = rng(3);
    let tol = Tolerance::default();
    let mut classes: BTreeMap<TaskId, usize> = BTreeMap::new();
    let (mut bad, mut errors, mut first_error) = (0, 0, None);
    for case in 0..10_000u64 {
        let n = r.gen_range(3..=20);
        let fpts = random_pattern(&mut r, n, case);
        let Ok(f) = Pattern::new(fpts.clone(), tol) else { continue };
        let robots: Vec<Point> = match case % 7 {
            0 => (0..n).map(|_| in_disk(&mut r, 1.0)).collect(),
            1 => {
                let ms: Vec<usize> = (2..=n).filter(|m| n % m == 0).collect();
                let m = ms[r.gen_range(0..ms.len())];
                orbit_points(&mut r, m, n / m, 0)
            }
            2 => random_similarity(&mut r, &fpts),
            3 => {
                let mut pts = random_similarity(&mut r, &fpts);
                for _ in 0..r.gen_range(1..=3) {
                    let k = r.gen_range(0..n);
                    pts[k] = pts[k] + in_disk(&mut r, 0.2);
                }
                pts
            }
            4 => {
                let mut pts: Vec<Point> = (0..n).map(|_| in_disk(&mut r, 1.0)).collect();
                pts[0] = Point::ORIGIN;
                pts[1] = pts[2];
                pts
            }
            // Part of ∂C(F) pulled in to C^T: the finishing stage.
            5 => f
                .points()
                .iter()
                .map(|&p| if (p.norm() - 1.0).abs() < 1e-9 && r.gen_bool(0.5) { p * f.top_radius() } else { p })
                .collect(),
            _ => match generate(n, 1, case, true) {
                Ok(s) => s.robots,
                Err(_) => (0..n).map(|_| in_disk(&mut r, 1.0)).collect(),
            },
        };
        let Ok(cfg) = Configuration::new(robots, tol) else { continue };
        match basic_variables(&cfg, &f) {
            Ok(vars) => {
                let pv = PredicateVector::new(&vars);
                // The class is the last task whose precondition holds.
                let last = vars.preconditions().iter().rposition(|&b| b).map(|i| TaskId::ALL[i]);
                if pv.true_count() != 1 || pv.task() != last {
                    bad += 1;
                }
                *classes.entry(pv.task().unwrap_or(TaskId::T1)).or_default() += 1;
            }
            Err(e) => {
                errors += 1;
                first_error.get_or_insert(e.to_string());
            }
        }
    }
    let total: usize = classes.values().sum();
    verdict(
        bad == 0 && errors == 0 && total == 10_000,
        format!(
            "{total} pairs classified, {bad} without exactly one predicate, {errors} errors{}; classes {classes:?}",
            first_error.map(|e| format!(" (first: {e})")).unwrap_or_default()
        ),
    )
}

/// The solvable (n, ρ(F)) grid with n in [3, 20] and ρ(F) in 2..=6.
fn grid() -> Vec<(usize, usize)> {
    (2..=6).flat_map(|rho| (3..=20).filter(move |n| n % rho == 0).map(move |n| (n, rho))).collect()
}

fn formation_scenario(i: usize, sched_seed: u64) -> Scenario {
    let cells = grid();
    let (n, rho) = cells[i % cells.len()];
    let mut s = generate(n, rho, i as u64, false).expect("grid cells are feasible");
    s.scheduler.kind = SchedulerKind::Async;
    s.scheduler.rigid = false;
    s.scheduler.seed = sched_seed;
    s.limits.max_events = MAX_EVENTS;
    s
}

struct FormationStats {
    runs: usize,
    formed: usize,
    worst_events: usize,
    violations: BTreeMap<Property, usize>,
    first_failure: Option<String>,
    observed: TransitionGraph,
    into_formed: usize,
    into_formed_nonstationary: usize,
}

fn end_to_end() -> FormationStats {
    let expected = TransitionGraph::expected();
    let mut st = FormationStats {
        runs: 0,
        formed: 0,
        worst_events: 0,
        violations: BTreeMap::new(),
        first_failure: None,
        observed: TransitionGraph::default(),
        into_formed: 0,
        into_formed_nonstationary: 0,
    };
    for i in 0..200 {
        for seed in 0..5 {
            let s = formation_scenario(i, seed);
            let (r0, f) = s.prepare().expect("generated scenarios load");
            st.runs += 1;
            let result = match run(&s) {
                Ok(res) => res,
                Err(e) => {
                    st.first_failure.get_or_insert(format!("scenario {i} seed {seed}: {e}"));
                    continue;
                }
            };
            if result.outcome == Outcome::Formed {
                st.formed += 1;
            } else {
                st.first_failure.get_or_insert(format!("scenario {i} seed {seed}: {:?}", result.outcome));
            }
            st.worst_events = st.worst_events.max(result.trace.records.len());
            let report = check_trace(&result.trace, &f, &expected, CheckOptions::for_run(r0.len(), s.scheduler.nu)).expect("own traces replay");
            for v in &report.violations {
                *st.violations.entry(v.property).or_default() += 1;
            }
            st.observed.merge(&report.observed);
            for t in report.transitions.iter().filter(|t| t.to == TaskId::T11 && t.from != TaskId::T11) {
                st.into_formed += 1;
                st.into_formed_nonstationary += usize::from(t.kind != TransitionKind::Stationary);
            }
        }
    }
    st
}

fn formation_verdict(st: &FormationStats, elapsed: Duration) -> Verdict {
    let critical: usize = [Property::H1, Property::H2, Property::H3, Property::Collision]
        .iter()
        .map(|p| st.violations.get(p).copied().unwrap_or(0))
        .sum();
    let pass = st.formed == st.runs && critical == 0 && elapsed < Duration::from_secs(300);
    verdict(
        pass,
        format!(
            "{}/{} formed (max {} events), {critical} H1/H2/H3/collision violations, all violations {:?}{}",
            st.formed,
            st.runs,
            st.worst_events,
            st.violations,
            st.first_failure.as_ref().map(|f| format!("; first failure {f}")).unwrap_or_default()
        ),
    )
}

fn conformance_verdict(st: &FormationStats) -> Verdict {
    let expected = TransitionGraph::expected();
    let extra: Vec<_> = st.observed.edges.difference(&expected.edges).collect();
    let distinct = st.observed.edges.iter().filter(|(a, b)| a != b).count();
    verdict(
        extra.is_empty() && st.into_formed_nonstationary == 0 && st.into_formed > 0,
        format!(
            "{distinct} distinct class changes observed, unexpected {extra:?}; {} transitions into T11, {} not stationary",
            st.into_formed, st.into_formed_nonstationary
        ),
    )
}

fn unsolvability_gate() -> Verdict {
    let mut r = rng(6);
    let (mut built, mut gated, mut moved) = (0, 0, 0);
    let mut failures = Vec::new();
    while built < 100 {
        let a = r.gen_range(2..=6);
        let n = a * r.gen_range(1..=4);
        if n < 3 {
            continue;
        }
        let choices: Vec<usize> = (1..=n).filter(|b| n % b == 0 && b % a != 0).collect();
        let b = choices[r.gen_range(0..choices.len())];
        let gons = orbit_points(&mut r, a, n / a, 0);
        let robots = random_similarity(&mut r, &gons);
        let pattern = if b == 1 {
            (0..n).map(|_| in_disk(&mut r, 1.0)).collect()
        } else {
            orbit_points(&mut r, b, n / b, 0)
        };
        let (ro, _) = sec_oracle(&robots);
        let (fo, _) = sec_oracle(&pattern);
        if symmetricity_oracle(&robots, ro) != a || symmetricity_oracle(&pattern, fo) != b {
            continue;
        }
        let s = Scenario::new(robots, pattern.into_iter().map(|p| (p, 1)).collect());
        if s.prepare().is_err() {
            continue;
        }
        built += 1;
        match run(&s) {
            Ok(res) => {
                gated += usize::from(res.outcome == Outcome::UnsolvableInput);
                moved += usize::from(res.trace.records.iter().any(|e| e.k != EventKind::Look));
                if res.outcome != Outcome::UnsolvableInput {
                    failures.push(format!("ρ(R)={a} ρ(F)={b}: {:?}", res.outcome));
                }
            }
            Err(e) => failures.push(format!("ρ(R)={a} ρ(F)={b}: {e}")),
        }
    }
    verdict(
        gated == 100 && moved == 0,
        format!("{gated}/100 unsolvable-input, {moved} with movement{}", failures.first().map(|f| format!("; first {f}")).unwrap_or_default()),
    )
}

fn trajectories_match(a: &Trajectory, b: &Trajectory) -> f64 {
    let mut worst = (a.length() - b.length()).abs().max(a.start.dist(b.start));
    for k in 0..=8 {
        let t = k as f64 / 8.0;
        worst = worst.max(a.point_at(a.length() * t).dist(b.point_at(b.length() * t)));
    }
    worst
}

fn lcs_invariance() -> Verdict {
    let mut r = rng(7);
    let tol = Tolerance::default();
    let alg = Algorithm::default();
    // Look snapshots from short runs, picked round-robin over classes.
    let mut pool: BTreeMap<TaskId, Vec<(Vec<Point>, Pattern)>> = BTreeMap::new();
    for i in 0..40 {
        let mut s = formation_scenario(i * 7 + 3, i as u64);
        s.limits.max_events = 20_000;
        let (_, f) = s.prepare().unwrap();
        let Ok(res) = run(&s) else { continue };
        for look in res.trace.looks().step_by(5) {
            if let (Some(pos), Some(task)) = (&look.pos, look.task) {
                pool.entry(task).or_default().push((pos.clone(), f.clone()));
            }
        }
    }
    let mut snapshots = Vec::new();
    let mut cursor = 0;
    while snapshots.len() < 100 {
        let before = snapshots.len();
        for list in pool.values() {
            if let Some(s) = list.get(cursor * 7 % list.len().max(1)).filter(|_| cursor < list.len()) {
                snapshots.push(s.clone());
            }
        }
        cursor += 1;
        if snapshots.len() == before && cursor > 1000 {
            break;
        }
    }
    snapshots.truncate(100);
    let classes: BTreeSet<TaskId> = pool.keys().copied().collect();

    let (mut worst, mut mismatched) = (0.0f64, 0);
    for (pos, f) in &snapshots {
        let world = alg.compute(&Configuration::new(pos.clone(), tol).unwrap(), f).expect("stock compute");
        for _ in 0..10 {
            let at = pos[r.gen_range(0..pos.len())];
            let lcs = random_lcs(&mut r, at);
            let local = compute_in_frame(&alg, pos, f, &lcs, tol).expect("stock compute");
            let sorted = |mut v: Vec<usize>| {
                v.sort_unstable();
                v
            };
            if local.task != world.task || sorted(local.movers()) != sorted(world.movers()) {
                mismatched += 1;
                continue;
            }
            for a in &local.directives {
                let b = world.directives.iter().find(|d| d.index == a.index).expect("same movers");
                worst = worst.max(trajectories_match(&a.trajectory, &b.trajectory));
            }
        }
    }
    verdict(
        snapshots.len() == 100 && mismatched == 0 && worst <= LCS_TOL,
        format!(
            "{} snapshots × 10 frames over classes {classes:?}: {mismatched} class/mover mismatches, worst path deviation {worst:.1e} (tol {LCS_TOL:.0e})",
            snapshots.len()
        ),
    )
}

fn rectangle() -> Pattern {
    let pts = [0.0, 1.0, PI, PI + 1.0].iter().map(|&a| Point::polar(Point::ORIGIN, 1.0, a)).collect();
    Pattern::new(pts, Tolerance::default()).unwrap()
}

/// n = 4, ρ(F) = 2 instances: generated scenarios and a rectangle pattern.
fn small_instances() -> Vec<(String, Vec<Point>, Pattern)> {
    let mut out = Vec::new();
    for seed in 0..8 {
        let s = generate(4, 2, seed, false).unwrap();
        let (_, f) = s.prepare().unwrap();
        out.push((format!("generated seed {seed}"), s.robots.clone(), f));
        if seed < 4 {
            out.push((format!("rectangle seed {seed}"), s.robots, rectangle()));
        }
    }
    out
}

fn exhaustive() -> Verdict {
    let opts = ExploreOptions::default();
    let expected = TransitionGraph::expected();
    let (mut states, mut formed, mut deepest) = (0, 0, 0);
    let mut failures = Vec::new();
    let mut observed = TransitionGraph::default();
    for (name, robots, f) in small_instances() {
        match explore(&robots, &f, &Algorithm::default(), &opts) {
            Ok(ex) => {
                states += ex.states;
                formed += ex.formed;
                deepest = deepest.max(ex.deepest);
                observed.merge(&ex.observed);
                if !ex.all_terminate() || !ex.violations.is_empty() || !ex.observed.is_subgraph_of(&expected) {
                    failures.push(format!("{name}: {} unterminated, {} livelocks, {} violations", ex.unterminated, ex.livelocks, ex.violations.len()));
                }
            }
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    verdict(
        failures.is_empty(),
        format!(
            "k={} fractions {:?} depth {}: {states} states, {formed} formed leaves, deepest {deepest}, {} class changes{}",
            opts.k,
            opts.fractions,
            opts.depth,
            observed.edges.iter().filter(|(a, b)| a != b).count(),
            failures.first().map(|f| format!("; {f}")).unwrap_or_default()
        ),
    )
}

/// First violation a mutation causes, searching formation runs and then
/// the small-instance explorer.
fn first_violation(m: Mutation) -> Option<String> {
    let alg = Algorithm::new(m);
    let expected = TransitionGraph::expected();
    for i in 0..200 {
        for seed in 0..5 {
            let s = formation_scenario(i, seed);
            let (r0, f) = s.prepare().unwrap();
            let Ok(res) = run_with(&s, &alg) else { continue };
            let report = check_trace(&res.trace, &f, &expected, CheckOptions::for_run(r0.len(), s.scheduler.nu)).ok()?;
            if let Some(v) = report.violations.first() {
                return Some(format!("{:?} in formation run {i} seed {seed}", v.property));
            }
        }
    }
    for (name, robots, f) in small_instances() {
        if let Ok(ex) = explore(&robots, &f, &alg, &ExploreOptions::default()) {
            if let Some(v) = ex.violations.first() {
                return Some(format!("{:?} exploring {name}", v.property));
            }
        }
    }
    None
}

fn mutation_sensitivity() -> Verdict {
    let found: Vec<(Mutation, Option<String>)> =
        [Mutation::TangentialFinish, Mutation::IgnoreForbidden, Mutation::SwappedPriority].into_iter().map(|m| (m, first_violation(m))).collect();
    let detail: Vec<String> = found.iter().map(|(m, v)| format!("{m:?}: {}", v.as_deref().unwrap_or("undetected"))).collect();
    verdict(found.iter().all(|(_, v)| v.is_some()), detail.join("; "))
}

fn timed(budget: Duration, f: impl FnOnce() -> Verdict) -> (Verdict, Duration) {
    let t0 = Instant::now();
    let mut v = f();
    let elapsed = t0.elapsed();
    if elapsed > budget {
        v.pass = false;
        v.detail += &format!("; over the {budget:?} budget");
    }
    (v, elapsed)
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let mut lines: Vec<(&str, Verdict, Duration)> = Vec::new();
    let mut record = |name, (v, d): (Verdict, Duration)| {
        println!("{} {name} ({:.1}s): {}", if v.pass { "PASS" } else { "FAIL" }, d.as_secs_f64(), v.detail);
        lines.push((name, v, d));
    };
    record("C1 geometry oracles", timed(secs(10), geometry_oracles));
    record("C2 symmetricity oracle", timed(secs(10), symmetricity_oracle_check));
    record("C3 predicate exclusivity", timed(secs(30), exclusivity));

    let t0 = Instant::now();
    let stats = end_to_end();
    let elapsed = t0.elapsed();
    record("C4 end-to-end formation", (formation_verdict(&stats, elapsed), elapsed));
    record("C5 transition-graph conformance", (conformance_verdict(&stats), Duration::ZERO));

    record("C6 unsolvability gate", timed(secs(5), unsolvability_gate));
    record("C7 LCS invariance", timed(secs(30), lcs_invariance));
    record("C8 exhaustive exploration", timed(secs(120), exhaustive));
    record("C9 mutation sensitivity", timed(secs(120), mutation_sensitivity));

    let failed = lines.iter().filter(|(_, v, _)| !v.pass).count();
    println!("acceptance: {} passed, {failed} failed", lines.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
