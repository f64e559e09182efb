//! Random solvable scenarios.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::configuration::{symmetricity, views_well_separated, Configuration};
use crate::geometry::{Point, Tolerance};
use crate::pattern::Pattern;
use crate::simulator::{solvable, Scenario};
use crate::Error;

/// Smallest distance allowed between two generated points.
const SPACING: f64 = 0.06;
const ATTEMPTS: usize = 2_000;

fn spaced(pts: &[Point], p: Point) -> bool {
    pts.iter().all(|q| q.dist(p) >= SPACING)
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

// Adds uniform points of the disk of `radius` until there are `n`, on the
// rays 2πk/`lattice` when given.
fn fill(rng: &mut ChaCha8Rng, mut pts: Vec<Point>, n: usize, radius: f64, lattice: Option<usize>) -> Vec<Point> {
    while pts.len() < n {
        let theta = match lattice {
            Some(m) => TAU * rng.gen_range(0..m) as f64 / m as f64,
            None => rng.gen_range(0.0..TAU),
        };
        let p = Point::polar(Point::ORIGIN, radius * rng.gen_range(0.0f64..1.0).sqrt(), theta);
        if spaced(&pts, p) {
            pts.push(p);
        }
    }
    pts
}

// Three to six robots on the unit circle, holding it as the enclosing circle.
fn rim_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point> {
    let k = rng.gen_range(3..=n.min(6));
    let mut rim: Vec<Point> = Vec::new();
    while rim.len() < k {
        let p = Point::polar(Point::ORIGIN, 1.0, rng.gen_range(0.0..TAU));
        if spaced(&rim, p) {
            rim.push(p);
        }
    }
    fill(rng, rim, n, 0.95, None)
}

// Every robot on a ray 2πk/n, so radial moves keep landing on forbidden
// points and rays are shared; three of them pin the unit enclosing circle.
fn spoke_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point> {
    let mut ks: Vec<usize>;
    loop {
        ks = (0..3).map(|_| rng.gen_range(0..n)).collect();
        ks.sort_unstable();
        ks.dedup();
        if ks.len() == 3 && [ks[1] - ks[0], ks[2] - ks[1], n + ks[0] - ks[2]].iter().all(|&g| 2 * g <= n) {
            break;
        }
    }
    let rim = ks.iter().map(|&k| Point::polar(Point::ORIGIN, 1.0, TAU * k as f64 / n as f64)).collect();
    fill(rng, rim, n, 0.95, Some(n))
}

/// One orbit of size `rho` per entry of `mults` (each point repeated that
/// many times), plus `center` copies of the origin.
fn symmetric_points(rng: &mut ChaCha8Rng, rho: usize, mults: &[usize], center: usize) -> Option<Vec<Point>> {
    let mut pts: Vec<Point> = vec![Point::ORIGIN; center.min(1)];
    let mut out: Vec<Point> = vec![Point::ORIGIN; center];
    for (k, &mult) in mults.iter().enumerate() {
        let mut placed = false;
        for _ in 0..ATTEMPTS {
            let radius = if k == 0 { 1.0 } else { rng.gen_range(0.15f64..1.0).sqrt() };
            let theta = rng.gen_range(0.0..TAU);
            let orbit: Vec<Point> = (0..rho).map(|j| Point::polar(Point::ORIGIN, radius, theta + TAU * j as f64 / rho as f64)).collect();
            if orbit.iter().all(|&p| spaced(&pts, p)) && orbit.windows(2).all(|w| w[0].dist(w[1]) >= SPACING) {
                pts.extend(&orbit);
                for p in orbit {
                    out.extend(std::iter::repeat(p).take(mult));
                }
                placed = true;
                break;
            }
        }
        if !placed {
            return None;
        }
    }
    Some(out)
}

/// A scenario with `n` robots and a pattern of symmetricity exactly `rho_f`.
///
/// Robots are asymmetric most of the time; otherwise their symmetricity is a
/// proper divisor of `rho_f`. A pattern sometimes stacks `rho_f` points on
/// its center or doubles one orbit. Points on the center form a regular
/// gon of their own, so `n` must be a multiple of `rho_f`.
/// `rho_f = 1` (delegated to other algorithms) is refused unless
/// `allow_delegated` is set.
pub fn generate(n: usize, rho_f: usize, seed: u64, allow_delegated: bool) -> Result<Scenario, Error> {
    if n < 3 {
        return Err(Error::Infeasible(format!("need at least 3 robots, got {n}")));
    }
    if rho_f == 0 {
        return Err(Error::Infeasible("ρ(F) must be at least 1".into()));
    }
    if rho_f == 1 && !allow_delegated {
        return Err(Error::Infeasible("ρ(F) = 1 needs a delegated solver; pass --allow-delegated".into()));
    }
    if n % rho_f != 0 {
        return Err(Error::Infeasible(format!("{n} robots cannot form a pattern with ρ(F) = {rho_f}")));
    }
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        let mut orbits = n / rho_f;
        let center = if rho_f > 1 && orbits >= 3 && rng.gen_bool(0.25) { rho_f } else { 0 };
        orbits -= center / rho_f;
        let mut mults = vec![1; orbits];
        if rho_f > 1 && orbits >= 3 && rng.gen_bool(0.2) {
            mults.pop();
            let k = rng.gen_range(0..mults.len());
            mults[k] = 2;
        }
        let Some(f) = symmetric_points(&mut rng, rho_f, &mults, center) else { continue };
        let pattern = Pattern::new(f.clone(), tol)?;
        if pattern.symmetricity() != rho_f || !views_well_separated(pattern.config(), 10.0) {
            continue;
        }
        let choices: Vec<usize> = divisors(rho_f).into_iter().filter(|&d| d > 1 && n % d == 0).collect();
        let rho_r = if !choices.is_empty() && rng.gen_bool(0.3) { choices[rng.gen_range(0..choices.len())] } else { 1 };
        let robots = if rho_r == 1 {
            match rng.gen_range(0..4) {
                0 => rim_points(&mut rng, n),
                1 => spoke_points(&mut rng, n),
                _ => fill(&mut rng, Vec::new(), n, 1.0, None),
            }
        } else {
            match symmetric_points(&mut rng, rho_r, &vec![1; n / rho_r], 0) {
                Some(p) => p,
                None => continue,
            }
        };
        let r = Configuration::new(robots.clone(), tol)?;
        let rn = r.transformed(&r.normalizing_map());
        if r.max_multiplicity() > 1 || symmetricity(&r) != rho_r || !views_well_separated(&rn, 10.0) || !solvable(&r, &pattern) {
            continue;
        }
        let mut weighted: Vec<(Point, usize)> = Vec::new();
        for p in f {
            match weighted.iter_mut().find(|(q, _)| *q == p) {
                Some(w) => w.1 += 1,
                None => weighted.push((p, 1)),
            }
        }
        let mut s = Scenario::new(rn.points().to_vec(), weighted);
        s.scheduler.seed = seed;
        s.prepare()?;
        return Ok(s);
    }
    Err(Error::Infeasible(format!("no well-conditioned scenario for n = {n}, ρ(F) = {rho_f}")))
}
