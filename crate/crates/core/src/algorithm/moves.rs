use std::f64::consts::{PI, TAU};

use super::{go_to_ct, Mutation, Scene};
use crate::configuration::{compare_views, max_regular_gons, min_view_robots, view};
use crate::geometry::{cw_between, is_critical, Circle, Point, Trajectory};
use crate::pattern::forbidden_points;
use crate::Error;

pub(crate) type Moves = Vec<(usize, Trajectory)>;

fn robots_on(scene: &Scene, radius: f64) -> Vec<usize> {
    let r = &scene.r;
    (0..scene.n).filter(|&i| !r.at_center(i) && r.tol().eq_len(r.dist(i), radius)).collect()
}

/// m₁: the lone innermost robot goes out to C^B along its ray, or, from the
/// center, along the bisector of the first gap clockwise of the min-view robot.
pub(crate) fn m1(scene: &Scene) -> Result<Moves, Error> {
    let r = &scene.r;
    let levels = r.levels();
    let Some(level) = levels.up(1) else { return Ok(Vec::new()) };
    let i = level.members[0];
    let p = r.points()[i];
    let b = scene.bottom();
    if !r.at_center(i) {
        return Ok(vec![(i, Trajectory::nil(p).then_segment(Point::polar(Point::ORIGIN, b, r.angle(i))))]);
    }
    let others: Vec<usize> = (0..scene.n).filter(|&j| !r.at_center(j)).collect();
    if others.is_empty() {
        return Ok(Vec::new());
    }
    let anchor = r.angle(min_view_robots(&others, r)?[0]);
    let mut offs: Vec<f64> = others.iter().map(|&j| cw_between(anchor, r.angle(j))).collect();
    offs.sort_by(f64::total_cmp);
    offs.dedup_by(|a, b| (*a - *b).abs() <= r.tol().angle);
    let next = offs.iter().copied().find(|&o| o > r.tol().angle).unwrap_or(TAU);
    let dir = anchor - next / 2.0;
    Ok(vec![(i, Trajectory::nil(p).then_segment(Point::polar(Point::ORIGIN, b, dir)))])
}

// Min-view robots on the circle of `radius`, preferring those outside every
// maximal regular gon.
fn gon_free_leaders(scene: &Scene, radius: f64) -> Result<Vec<usize>, Error> {
    let r = &scene.r;
    let members = robots_on(scene, radius);
    if members.is_empty() {
        return Ok(Vec::new());
    }
    let gons = max_regular_gons(&Circle::new(Point::ORIGIN, radius), r, scene.f.symmetricity()).union();
    let free: Vec<usize> = members.iter().copied().filter(|i| !gons.contains(i)).collect();
    min_view_robots(if free.is_empty() { &members } else { &free }, r)
}

/// m₂: leaders of the innermost circle inside Ann head for C^T.
pub(crate) fn m2(scene: &Scene, mutation: Mutation) -> Result<Moves, Error> {
    let inner = (0..scene.n).filter(|&i| scene.in_ann(i)).map(|i| scene.r.dist(i)).min_by(f64::total_cmp);
    match inner {
        Some(radius) => go_to_ct(scene, &gon_free_leaders(scene, radius)?, mutation),
        None => Ok(Vec::new()),
    }
}

/// m₃: as m₂ for the robots on C(R).
pub(crate) fn m3(scene: &Scene, mutation: Mutation) -> Result<Moves, Error> {
    go_to_ct(scene, &gon_free_leaders(scene, 1.0)?, mutation)
}

/// m₄: the min-view non-critical robot on C(R) heads for C^T.
pub(crate) fn m4(scene: &Scene, mutation: Mutation) -> Result<Moves, Error> {
    let r = &scene.r;
    let mut free = Vec::new();
    for i in r.boundary() {
        if !is_critical(r.points()[i], r.points(), r.tol())? {
            free.push(i);
        }
    }
    if free.is_empty() {
        return Ok(Vec::new());
    }
    go_to_ct(scene, &min_view_robots(&free, r)?, mutation)
}

/// m₅: the leader of C↓²(R) climbs onto C(R), sliding clockwise to the middle
/// of the next free stretch when its own projection is forbidden.
pub(crate) fn m5(scene: &Scene) -> Result<Moves, Error> {
    let r = &scene.r;
    let levels = r.levels();
    let Some(level) = levels.down(2) else { return Ok(Vec::new()) };
    if level.radius <= r.tol().length {
        return Ok(Vec::new());
    }
    let boundary: Vec<Point> = r.boundary().iter().map(|&j| r.points()[j]).collect();
    let forb = forbidden_points(&r.sec(), &boundary, scene.n, r.tol());
    let mut out = Vec::new();
    for i in min_view_robots(&level.members, r)? {
        let (p, theta, d) = (r.points()[i], r.angle(i), r.dist(i));
        let t = Trajectory::nil(p);
        let t = if !forb.is_forbidden_angle(theta) {
            t.then_segment(Point::polar(Point::ORIGIN, 1.0, theta))
        } else {
            let shift = forb.next_clockwise(theta).unwrap_or(TAU) / 2.0;
            let mid = (d + 1.0) / 2.0;
            t.then_segment(Point::polar(Point::ORIGIN, mid, theta))
                .then_arc(Point::ORIGIN, -shift)
                .then_segment(Point::polar(Point::ORIGIN, 1.0, theta - shift))
        };
        out.push((i, t));
    }
    Ok(out)
}

/// m₆: with three robots on C(R), the one with the middle angle slides away
/// from the smallest-angle one until it sits opposite it.
pub(crate) fn m6(scene: &Scene) -> Result<Moves, Error> {
    let r = &scene.r;
    let tol = r.tol();
    let b = r.boundary();
    if b.len() != 3 {
        return Ok(Vec::new());
    }
    // Interior angle at a vertex is half the arc between the other two.
    let interior = |k: usize| {
        let (u, v) = (b[(k + 1) % 3], b[(k + 2) % 3]);
        let arc = cw_between(r.angle(u), r.angle(v));
        let other = cw_between(r.angle(u), r.angle(b[k]));
        0.5 * if other < arc { TAU - arc } else { arc }
    };
    let mut verts: Vec<(usize, f64, _)> =
        (0..3).map(|k| Ok((b[k], interior(k), view(b[k], r)?))).collect::<Result<_, Error>>()?;
    verts.sort_by(|x, y| {
        if tol.eq_angle(x.1, y.1) {
            compare_views(&x.2, &y.2, tol)
        } else {
            y.1.total_cmp(&x.1)
        }
    });
    if verts[0].1 >= PI / 2.0 - tol.angle {
        return Ok(Vec::new());
    }
    let (r2, r3) = (verts[1].0, verts[2].0);
    let cw = cw_between(r.angle(r2), r.angle(r3));
    let sweep = if cw <= PI { PI - cw } else { -(PI - (TAU - cw)) };
    Ok(vec![(r2, Trajectory::nil(r.points()[r2]).then_arc(Point::ORIGIN, sweep))])
}

/// m₇: CircleForm with angle 2π/|∂C(R)|.
pub(crate) fn m7(scene: &Scene) -> Result<Moves, Error> {
    let r = &scene.r;
    let tol = r.tol();
    let mut b = r.boundary();
    if b.len() < 2 {
        return Ok(Vec::new());
    }
    let alpha = TAU / b.len() as f64;
    // Clockwise order.
    b.sort_by(|&x, &y| r.angle(y).total_cmp(&r.angle(x)));
    let k = b.len();
    let mut out = Vec::new();
    for j in 0..k {
        let (prev, me, next) = (b[(j + k - 1) % k], b[j], b[(j + 1) % k]);
        let gap = cw_between(r.angle(me), r.angle(next));
        if gap <= alpha + tol.angle {
            continue;
        }
        let back = cw_between(r.angle(prev), r.angle(me));
        let rot = (PI - back).min(gap - alpha);
        if rot > tol.angle {
            out.push((me, Trajectory::nil(r.points()[me]).then_arc(Point::ORIGIN, -rot)));
        }
    }
    Ok(out)
}

/// m₉: everything in Ann ∪ C^T moves radially onto C(R).
pub(crate) fn m9(scene: &Scene, mutation: Mutation) -> Moves {
    let r = &scene.r;
    let tol = r.tol();
    let top = scene.top();
    (0..scene.n)
        .filter(|&i| !r.on_sec(i) && r.dist(i) >= top - tol.length)
        .map(|i| {
            let (p, theta, d) = (r.points()[i], r.angle(i), r.dist(i));
            let target = if mutation == Mutation::TangentialFinish {
                p + Point::new(theta.sin(), -theta.cos()) * (1.0 - d)
            } else {
                Point::polar(Point::ORIGIN, 1.0, theta)
            };
            (i, Trajectory::nil(p).then_segment(target))
        })
        .collect()
}
