use std::f64::consts::TAU;

use super::moves::Moves;
use super::{Mutation, Scene};
use crate::geometry::{cw_between, Circle, Point, Trajectory};
use crate::pattern::forbidden_points;
use crate::Error;

/// GoToC: each robot in `movers` (all in Ann ∪ C(R)) heads for C^T inside
/// the empty wedge clockwise of its ray.
///
/// The wedge ends at the next robot of Ann ∪ C(R) or at the ray where the
/// boundary robot behind it would sit after turning by a gap of ∂C(F),
/// whichever comes first. A free radial projection is used directly;
/// otherwise the robot aims at the middle of the free part of the wedge on
/// C^T and stops where its segment first meets C^T.
pub(crate) fn go_to_ct(scene: &Scene, movers: &[usize], mutation: Mutation) -> Result<Moves, Error> {
    let r = &scene.r;
    let tol = r.tol();
    let top = scene.top();
    if scene.park.is_none() {
        return Ok(Vec::new());
    }
    let boundary = r.boundary();
    let outer: Vec<usize> = (0..scene.n).filter(|&j| r.on_sec(j) || scene.in_ann(j)).collect();
    let parked: Vec<Point> = (0..scene.n).filter(|&j| scene.on_top(j)).map(|j| r.points()[j]).collect();
    let forb = forbidden_points(&Circle::new(Point::ORIGIN, top), &parked, scene.n, tol);
    let offsets = scene.f.boundary_offsets();

    let mut out = Vec::new();
    for &i in movers {
        let (p, theta) = (r.points()[i], r.angle(i));
        let behind = boundary.iter().map(|&j| cw_between(r.angle(j), theta)).fold(TAU, f64::min);
        let behind = if behind >= TAU - tol.angle { 0.0 } else { behind };
        let mut span = outer
            .iter()
            .filter(|&&j| j != i)
            .map(|&j| cw_between(theta, r.angle(j)))
            .filter(|&d| d > tol.angle)
            .fold(TAU, f64::min);
        if let Some(&alpha) = offsets.iter().find(|&&o| o > behind + tol.angle) {
            span = span.min(alpha - behind);
        }
        let t = Trajectory::nil(p);
        if mutation == Mutation::IgnoreForbidden || !forb.is_forbidden_angle(theta) {
            out.push((i, t.then_segment(Point::polar(Point::ORIGIN, top, theta))));
            continue;
        }
        let free = span.min(forb.next_clockwise(theta).unwrap_or(TAU));
        let q = Point::polar(Point::ORIGIN, top, theta - free / 2.0);
        out.push((i, t.then_segment(first_hit(p, q, top))));
    }
    Ok(out)
}

// First point of segment p→q on the circle of `radius` about the origin,
// given q lies on it.
fn first_hit(p: Point, q: Point, radius: f64) -> Point {
    let v = q - p;
    let a = v.dot(v);
    if a == 0.0 {
        return q;
    }
    // s = 1 is one root of |p + s·v|² = radius²; the product of roots is c/a.
    let s0 = (p.dot(p) - radius * radius) / a;
    if s0 > 0.0 && s0 < 1.0 {
        p + v * s0
    } else {
        q
    }
}
