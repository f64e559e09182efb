use std::f64::consts::TAU;

use super::{divisors_desc, Configuration};
use crate::geometry::{Point, Tolerance};

/// Greedy tolerance matching of two equal-size point lists.
fn same_multiset(a: &[Point], b: &[Point], tol: &Tolerance) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    'outer: for p in a {
        for (j, q) in b.iter().enumerate() {
            if !used[j] && p.approx_eq(*q, tol) {
                used[j] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn off_center(cfg: &Configuration) -> Vec<Point> {
    (0..cfg.len())
        .filter(|&i| !cfg.at_center(i))
        .map(|i| cfg.points()[i] - cfg.center())
        .collect()
}

fn invariant_under(pts: &[Point], theta: f64, tol: &Tolerance) -> bool {
    let rotated: Vec<Point> = pts.iter().map(|p| p.rotate(theta)).collect();
    same_multiset(&rotated, pts, tol)
}

/// Every p such that rotating by 2π/p about the center maps the multiset
/// onto itself, always including 1. Capped at |P| when all points coincide.
pub fn rotation_orders(cfg: &Configuration) -> Vec<usize> {
    let pts = off_center(cfg);
    let mut out = vec![1];
    for p in 2..=cfg.len() {
        if pts.len() % p == 0 && invariant_under(&pts, TAU / p as f64, cfg.tol()) {
            out.push(p);
        }
    }
    out
}

/// Largest m such that the multiset splits into regular m-gons centered at
/// c(P). Points at the center count as radius-zero gons, so a lone robot at
/// the center forces 1.
pub fn symmetricity(cfg: &Configuration) -> usize {
    let n = cfg.len();
    let at_center = cfg.center_multiplicity();
    if at_center == n {
        return n;
    }
    let pts = off_center(cfg);
    for m in divisors_desc(n) {
        if m == 1 {
            break;
        }
        if at_center % m != 0 || pts.len() % m != 0 {
            continue;
        }
        if invariant_under(&pts, TAU / m as f64, cfg.tol()) {
            return m;
        }
    }
    1
}

fn normalized(cfg: &Configuration) -> Vec<Point> {
    let k = if cfg.radius() > 0.0 { 1.0 / cfg.radius() } else { 1.0 };
    cfg.points().iter().map(|&p| (p - cfg.center()) * k).collect()
}

/// Whether `a` can be mapped onto `b` by translation, rotation and uniform
/// scaling (and a reflection when `allow_reflection`).
pub fn similar(a: &Configuration, b: &Configuration, allow_reflection: bool) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let tol = a.tol();
    if a.radius() == 0.0 || b.radius() == 0.0 {
        return a.radius() == 0.0 && b.radius() == 0.0;
    }
    let mut ra: Vec<f64> = (0..a.len()).map(|i| a.dist(i) / a.radius()).collect();
    let mut rb: Vec<f64> = (0..b.len()).map(|i| b.dist(i) / b.radius()).collect();
    ra.sort_by(f64::total_cmp);
    rb.sort_by(f64::total_cmp);
    if ra.iter().zip(&rb).any(|(x, y)| !tol.eq_len(*x, *y)) {
        return false;
    }
    let ua = normalized(a);
    let ub = normalized(b);
    let anchor = ub.iter().copied().max_by(|p, q| p.norm().total_cmp(&q.norm())).unwrap();
    let try_rotations = |pts: &[Point]| {
        pts.iter().any(|p| {
            if !tol.eq_len(p.norm(), anchor.norm()) {
                return false;
            }
            let phi = anchor.angle_from(Point::ORIGIN) - p.angle_from(Point::ORIGIN);
            let rotated: Vec<Point> = pts.iter().map(|q| q.rotate(phi)).collect();
            same_multiset(&rotated, &ub, tol)
        })
    };
    if try_rotations(&ua) {
        return true;
    }
    if allow_reflection {
        let mirrored: Vec<Point> = ua.iter().map(|p| Point::new(p.x, -p.y)).collect();
        return try_rotations(&mirrored);
    }
    false
}
