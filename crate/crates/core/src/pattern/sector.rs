use std::f64::consts::{PI, TAU};

use crate::configuration::Configuration;
use crate::geometry::{canonical, cw_between, Point, Tolerance, Trajectory};
use crate::Error;

/// The sectors cut by consecutive robot-rays of a regular gon on C(R).
/// Sector `i + 1` follows sector `i` clockwise; each contains its leading
/// ray but not its trailing one, contains C^T and excludes the center.
#[derive(Clone, Debug)]
pub struct Sectors {
    center: Point,
    reference: f64,
    width: f64,
    count: usize,
    top: f64,
    tol: Tolerance,
}

impl Sectors {
    /// `top` is the absolute radius of C^T.
    pub fn new(r: &Configuration, top: f64) -> Result<Self, Error> {
        let boundary = r.boundary();
        if boundary.len() < 2 {
            return Err(Error::PreconditionViolation("sectors need at least two robots on C(R)".into()));
        }
        Ok(Sectors {
            center: r.center(),
            reference: r.angle(boundary[0]),
            width: TAU / boundary.len() as f64,
            count: boundary.len(),
            top,
            tol: *r.tol(),
        })
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn center(&self) -> Point {
        self.center
    }

    /// Polar angle of the leading ray of sector `i`.
    pub fn leading_angle(&self, i: usize) -> f64 {
        canonical(self.reference - self.width * i as f64)
    }

    /// Clockwise offset of `p` from the leading ray of its sector.
    pub fn offset(&self, p: Point) -> f64 {
        let off = cw_between(self.reference, p.angle_from(self.center));
        let k = ((off + self.tol.angle) / self.width).floor();
        (off - k * self.width).max(0.0)
    }

    pub fn sector_of(&self, p: Point) -> Option<usize> {
        let d = p.dist(self.center);
        if d <= self.tol.length || d > self.top + self.tol.length {
            return None;
        }
        let off = cw_between(self.reference, p.angle_from(self.center));
        Some(((off + self.tol.angle) / self.width).floor() as usize % self.count)
    }
}

/// Per-sector matching of robots against F′ targets.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SectorBook {
    pub robots: Vec<usize>,
    pub matched_robots: Vec<usize>,
    pub unmatched_robots: Vec<usize>,
    pub matched_targets: Vec<Point>,
    pub unmatched_targets: Vec<Point>,
}

/// Sector-by-sector matched and unmatched robots and targets. A target with
/// multiplicity k absorbs at most k robots sitting on it.
pub fn sector_bookkeeping(sectors: &Sectors, r: &Configuration, targets: &[Point]) -> Vec<SectorBook> {
    let tol = r.tol();
    let mut books = vec![SectorBook::default(); sectors.count()];
    let mut slots: Vec<(Point, usize)> = Vec::new();
    for &t in targets {
        match slots.iter_mut().find(|(q, _)| q.approx_eq(t, tol)) {
            Some(s) => s.1 += 1,
            None => slots.push((t, 1)),
        }
    }
    for i in 0..r.len() {
        let p = r.points()[i];
        if r.on_sec(i) {
            continue;
        }
        let Some(s) = sectors.sector_of(p) else { continue };
        books[s].robots.push(i);
        match slots.iter_mut().find(|(q, k)| *k > 0 && q.approx_eq(p, tol)) {
            Some(slot) => {
                slot.1 -= 1;
                books[s].matched_robots.push(i);
                books[s].matched_targets.push(slot.0);
            }
            None => books[s].unmatched_robots.push(i),
        }
    }
    for (t, k) in slots {
        if let Some(s) = sectors.sector_of(t) {
            books[s].unmatched_targets.extend(std::iter::repeat(t).take(k));
        }
    }
    books
}

// Blocker in polar form relative to the path: radius and angular offset
// from the start ray along the sweep direction.
struct Blocker {
    radius: f64,
    offset: f64,
}

/// A shortest path for the sectorial distance from `from` to `to` (radial
/// segments and arcs about `center`, monotone in radius and angle) that
/// touches none of `blockers` except possibly at `to`.
///
/// Tries the two boundary paths of the annulus sector first, then a
/// staircase search on a grid whose lines avoid every blocker radius and
/// angle.
pub fn safe_sectorial_path(from: Point, to: Point, center: Point, blockers: &[Point], tol: &Tolerance) -> Option<Trajectory> {
    let (r0, r1) = (from.dist(center), to.dist(center));
    if r0 <= tol.length || r1 <= tol.length {
        return None;
    }
    let (a0, a1) = (from.angle_from(center), to.angle_from(center));
    let cw = cw_between(a0, a1);
    let (dir, span) = if cw <= PI + tol.angle { (-1.0, cw) } else { (1.0, TAU - cw) };
    let span = if span <= tol.angle || span >= TAU - tol.angle { 0.0 } else { span };
    let (lo, hi) = (r0.min(r1), r0.max(r1));

    let mut inside: Vec<Blocker> = Vec::new();
    for &b in blockers {
        if b.approx_eq(from, tol) || b.approx_eq(to, tol) {
            continue;
        }
        let d = b.dist(center);
        if d < lo - tol.length || d > hi + tol.length || d <= tol.length {
            continue;
        }
        let raw = if dir < 0.0 { cw_between(a0, b.angle_from(center)) } else { cw_between(b.angle_from(center), a0) };
        let ang_tol = tol.angle.max(tol.length / d);
        let off = if raw >= TAU - ang_tol { 0.0 } else { raw };
        if off <= span + ang_tol {
            inside.push(Blocker { radius: d, offset: off.min(span) });
        }
    }

    let grid = |ends: (f64, f64), vals: Vec<f64>| -> Vec<f64> {
        let (s, e) = ends;
        let mut all = vals;
        all.push(s);
        all.push(e);
        all.sort_by(f64::total_cmp);
        all.dedup_by(|a, b| (*a - *b).abs() <= tol.length);
        let mut out = vec![s];
        for w in all.windows(2) {
            out.push(0.5 * (w[0] + w[1]));
        }
        out.push(e);
        out.dedup_by(|a, b| (*a - *b).abs() <= tol.length);
        if s > e {
            out.sort_by(|a, b| b.total_cmp(a));
        } else {
            out.sort_by(f64::total_cmp);
        }
        out
    };
    let radii = grid((r0, r1), inside.iter().map(|b| b.radius).collect());
    let angles = grid((0.0, span), inside.iter().map(|b| b.offset).collect());
    let (ni, nj) = (radii.len(), angles.len());

    let radial_free = |j: usize, i: usize| {
        let (x, y) = (radii[i].min(radii[i + 1]), radii[i].max(radii[i + 1]));
        !inside.iter().any(|b| {
            let ang_tol = tol.angle.max(tol.length / b.radius);
            (b.offset - angles[j]).abs() <= ang_tol && b.radius >= x - tol.length && b.radius <= y + tol.length
        })
    };
    let arc_free = |i: usize, j: usize| {
        !inside.iter().any(|b| {
            let ang_tol = tol.angle.max(tol.length / b.radius);
            (b.radius - radii[i]).abs() <= tol.length && b.offset >= angles[j] - ang_tol && b.offset <= angles[j + 1] + ang_tol
        })
    };

    // Monotone staircase search; each node records its predecessor step.
    // Steps: 0 = start, 1 = came radially, 2 = came along an arc.
    let mut came = vec![vec![u8::MAX; nj]; ni];
    came[0][0] = 0;
    for i in 0..ni {
        for j in 0..nj {
            if came[i][j] == u8::MAX {
                continue;
            }
            if i + 1 < ni && came[i + 1][j] == u8::MAX && radial_free(j, i) {
                came[i + 1][j] = 1;
            }
            if j + 1 < nj && came[i][j + 1] == u8::MAX && arc_free(i, j) {
                came[i][j + 1] = 2;
            }
        }
    }
    if came[ni - 1][nj - 1] == u8::MAX {
        return None;
    }
    let mut steps = Vec::new();
    let (mut i, mut j) = (ni - 1, nj - 1);
    while i > 0 || j > 0 {
        let s = came[i][j];
        steps.push((s, i, j));
        if s == 1 {
            i -= 1;
        } else {
            j -= 1;
        }
    }
    steps.reverse();
    let mut t = Trajectory::nil(from);
    let mut k = 0;
    while k < steps.len() {
        let kind = steps[k].0;
        let mut end = k;
        while end + 1 < steps.len() && steps[end + 1].0 == kind {
            end += 1;
        }
        let (_, i, j) = steps[end];
        t = if kind == 1 {
            let target = if i == ni - 1 && j == nj - 1 { to } else { Point::polar(center, radii[i], a0 + dir * angles[j]) };
            t.then_segment(target)
        } else {
            let (_, _, j0) = steps[k];
            t.then_arc(center, dir * (angles[j] - angles[j0 - 1]))
        };
        k = end + 1;
    }
    Some(t)
}
