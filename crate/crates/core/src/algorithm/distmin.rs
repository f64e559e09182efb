use std::f64::consts::TAU;

use super::moves::Moves;
use super::Scene;
use crate::configuration::min_view_robots;
use crate::geometry::{cw_between, sectorial_distance, Point, Trajectory};
use crate::pattern::{embed_pattern, modified_pattern, safe_sectorial_path, sector_bookkeeping, SectorBook, Sectors};
use crate::Error;

const O: Point = Point::ORIGIN;

/// Distmin: fill the center first, then match robots to F′ targets sector by
/// sector, then push leftovers clockwise into the next sector, and finally
/// release a surplus center robot towards the last free target.
pub(crate) fn distmin(scene: &Scene) -> Result<Moves, Error> {
    let r = &scene.r;
    let tol = r.tol();
    let embedding = embed_pattern(r, scene.f)?;
    let targets = modified_pattern(scene.f, &embedding);
    let sectors = Sectors::new(r, scene.top())?;
    let books = sector_bookkeeping(&sectors, r, &targets);
    let center_goal = targets.iter().filter(|t| t.norm() <= tol.length).count();
    let center_now = r.center_multiplicity();

    if center_now < center_goal {
        let cand: Vec<usize> = (0..scene.n).filter(|&i| !r.at_center(i) && !r.on_sec(i)).collect();
        let Some(near) = cand.iter().map(|&i| r.dist(i)).min_by(f64::total_cmp) else { return Ok(Vec::new()) };
        let closest: Vec<usize> = cand.into_iter().filter(|&i| tol.eq_len(r.dist(i), near)).collect();
        return Ok(min_view_robots(&closest, r)?
            .into_iter()
            .map(|i| (i, Trajectory::nil(r.points()[i]).then_segment(O)))
            .collect());
    }

    let active: Vec<&SectorBook> =
        books.iter().filter(|b| !b.unmatched_robots.is_empty() && !b.unmatched_targets.is_empty()).collect();
    if !active.is_empty() {
        let mut out = Vec::new();
        for book in active {
            out.extend(within_sector(scene, &sectors, book)?);
        }
        return Ok(out);
    }

    let crowded: Vec<usize> = (0..books.len()).filter(|&s| !books[s].unmatched_robots.is_empty()).collect();
    if !crowded.is_empty() {
        let mut out = Vec::new();
        for s in crowded {
            out.extend(to_next_sector(scene, &sectors, s, &books[s])?);
        }
        return Ok(out);
    }

    if center_now > center_goal {
        let left: Vec<Point> = books.iter().flat_map(|b| b.unmatched_targets.iter().copied()).collect();
        let boundary = r.boundary();
        let anchor = r.angle(min_view_robots(&boundary, r)?[0]);
        let Some(t) = left.into_iter().min_by(|a, b| {
            a.norm().total_cmp(&b.norm()).then(cw_between(anchor, a.angle_from(O)).total_cmp(&cw_between(anchor, b.angle_from(O))))
        }) else {
            return Ok(Vec::new());
        };
        let reach = t.norm().min(scene.bottom());
        let stop = O + t * (reach / t.norm());
        return Ok((0..scene.n).filter(|&i| r.at_center(i)).map(|i| (i, Trajectory::nil(r.points()[i]).then_segment(stop))).collect());
    }
    Ok(Vec::new())
}

// Lines 5–12: one robot of the sector moves to its nearest reachable target,
// or sidesteps when every path is blocked.
fn within_sector(scene: &Scene, sectors: &Sectors, book: &SectorBook) -> Result<Moves, Error> {
    let r = &scene.r;
    let tol = r.tol();
    let mut targets = book.unmatched_targets.clone();
    targets.dedup_by(|a, b| a.approx_eq(*b, tol));
    let tie = |a: &Point, b: &Point| {
        sectors.offset(*a).total_cmp(&sectors.offset(*b)).then(a.norm().total_cmp(&b.norm()))
    };

    let mut safe: Vec<(f64, usize, Point, Trajectory)> = Vec::new();
    for &i in &book.unmatched_robots {
        let p = r.points()[i];
        let blockers: Vec<Point> = (0..scene.n).filter(|&j| j != i).map(|j| r.points()[j]).collect();
        for &t in &targets {
            if let Some(path) = safe_sectorial_path(p, t, O, &blockers, tol) {
                safe.push((sectorial_distance(p, t, O, 1.0), i, t, path));
            }
        }
    }
    if let Some(best) = safe.iter().map(|s| s.0).min_by(f64::total_cmp) {
        let near: Vec<&(f64, usize, Point, Trajectory)> = safe.iter().filter(|s| s.0 <= best + tol.length).collect();
        let mut robots: Vec<usize> = near.iter().map(|s| s.1).collect();
        robots.sort_unstable();
        robots.dedup();
        let star = min_view_robots(&robots, r)?[0];
        let pick = near.iter().filter(|s| s.1 == star).min_by(|a, b| tie(&a.2, &b.2)).expect("star has a path");
        return Ok(vec![(star, pick.3.clone())]);
    }

    let star = min_view_robots(&book.unmatched_robots, r)?[0];
    let p = r.points()[star];
    let goal = targets
        .iter()
        .min_by(|a, b| sectorial_distance(p, **a, O, 1.0).total_cmp(&sectorial_distance(p, **b, O, 1.0)).then(tie(a, b)))
        .expect("active sector has targets");
    if tol.eq_len(p.norm(), goal.norm()) {
        return Ok(vec![(star, inward_half_step(scene, star))]);
    }
    // Same ray: turn clockwise halfway to the next robot-ray or neighbour on the circle.
    let theta = r.angle(star);
    let to_ray = sectors.width() - sectors.offset(p);
    let to_peer = (0..scene.n)
        .filter(|&j| j != star && !r.at_center(j) && tol.eq_len(r.dist(j), r.dist(star)))
        .map(|j| cw_between(theta, r.angle(j)))
        .filter(|&d| d > tol.angle)
        .fold(TAU, f64::min);
    let turn = to_ray.min(to_peer) / 2.0;
    Ok(vec![(star, Trajectory::nil(p).then_arc(O, -turn))])
}

// Lines 13–20: a surplus robot rotates clockwise onto the leading ray of the
// next sector, or steps inward when its arc is blocked.
fn to_next_sector(scene: &Scene, sectors: &Sectors, s: usize, book: &SectorBook) -> Result<Moves, Error> {
    let r = &scene.r;
    let tol = r.tol();
    let lead = sectors.leading_angle((s + 1) % sectors.count());
    let mut free: Vec<(f64, usize, f64)> = Vec::new();
    for &i in &book.unmatched_robots {
        let (theta, d) = (r.angle(i), r.dist(i));
        let rot = cw_between(theta, lead);
        let blocked = (0..scene.n).any(|j| {
            j != i && !r.at_center(j) && tol.eq_len(r.dist(j), d) && {
                let off = cw_between(theta, r.angle(j));
                off > tol.angle && off <= rot + tol.angle
            }
        });
        if !blocked {
            free.push((rot * d, i, rot));
        }
    }
    if let Some(best) = free.iter().map(|f| f.0).min_by(f64::total_cmp) {
        let near: Vec<usize> = free.iter().filter(|f| f.0 <= best + tol.length).map(|f| f.1).collect();
        let star = min_view_robots(&near, r)?[0];
        let rot = free.iter().find(|f| f.1 == star).expect("star is free").2;
        return Ok(vec![(star, Trajectory::nil(r.points()[star]).then_arc(O, -rot))]);
    }
    let star = min_view_robots(&book.unmatched_robots, r)?[0];
    Ok(vec![(star, inward_half_step(scene, star))])
}

// Radially inward to halfway between the robot's circle and the next
// occupied circle below it (or the center).
fn inward_half_step(scene: &Scene, i: usize) -> Trajectory {
    let r = &scene.r;
    let tol = r.tol();
    let d = r.dist(i);
    let below = (0..scene.n).map(|j| r.dist(j)).filter(|&x| x < d - tol.length).fold(0.0, f64::max);
    Trajectory::nil(r.points()[i]).then_segment(Point::polar(O, (d + below) / 2.0, r.angle(i)))
}
