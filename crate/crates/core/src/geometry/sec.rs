use super::{Circle, Point, Tolerance};
use crate::Error;

// Containment slack used while building the circle. Much tighter than the
// user tolerance so the result is accurate to rounding error.
fn inside(c: &Circle, p: Point) -> bool {
    p.dist(c.center) <= c.radius + 1e-13 * (1.0 + c.radius)
}

fn diameter(a: Point, b: Point) -> Circle {
    Circle::new(a.lerp(b, 0.5), a.dist(b) * 0.5)
}

fn circumcircle(a: Point, b: Point, c: Point) -> Circle {
    let ab = b - a;
    let ac = c - a;
    let d = 2.0 * ab.cross(ac);
    let scale = ab.dot(ab).max(ac.dot(ac));
    if d.abs() <= 1e-14 * scale {
        // Collinear: the two farthest points span the circle.
        let cands = [diameter(a, b), diameter(a, c), diameter(b, c)];
        return cands
            .into_iter()
            .max_by(|x, y| x.radius.total_cmp(&y.radius))
            .unwrap();
    }
    let ux = (ac.y * ab.dot(ab) - ab.y * ac.dot(ac)) / d;
    let uy = (ab.x * ac.dot(ac) - ac.x * ab.dot(ab)) / d;
    let center = Point::new(a.x + ux, a.y + uy);
    let radius = center.dist(a).max(center.dist(b)).max(center.dist(c));
    Circle::new(center, radius)
}

/// Smallest circle enclosing every point (Welzl, move-to-front, index order).
pub fn smallest_enclosing_circle(points: &[Point]) -> Result<Circle, Error> {
    let first = *points.first().ok_or(Error::EmptyInput)?;
    let mut c = Circle::new(first, 0.0);
    for i in 1..points.len() {
        if inside(&c, points[i]) {
            continue;
        }
        c = Circle::new(points[i], 0.0);
        for j in 0..i {
            if inside(&c, points[j]) {
                continue;
            }
            c = diameter(points[i], points[j]);
            for k in 0..j {
                if !inside(&c, points[k]) {
                    c = circumcircle(points[i], points[j], points[k]);
                }
            }
        }
    }
    Ok(c)
}

/// Whether removing one occurrence of `p` changes the enclosing circle.
pub fn is_critical(p: Point, points: &[Point], tol: &Tolerance) -> Result<bool, Error> {
    let idx = points
        .iter()
        .position(|q| q.approx_eq(p, tol))
        .ok_or(Error::NotAMember)?;
    let full = smallest_enclosing_circle(points)?;
    let rest: Vec<Point> = points
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != idx)
        .map(|(_, q)| *q)
        .collect();
    if rest.is_empty() {
        return Ok(true);
    }
    let reduced = smallest_enclosing_circle(&rest)?;
    Ok(!full.approx_eq(&reduced, tol))
}
