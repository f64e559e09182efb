//! Robot configurations: multisets of points with cached enclosing circle,
//! concentric levels, symmetricity, views and regular-gon detection.

mod gons;
mod symmetry;
mod view;

pub use gons::{is_regular_polygon, max_regular_gons, RegularGonSet};
pub use symmetry::{rotation_orders, similar, symmetricity};
pub use view::{compare_views, min_view_robots, view, views_well_separated, ViewSequence};

use crate::geometry::{smallest_enclosing_circle, Circle, Point, Similarity, Tolerance};
use crate::Error;

/// A multiset of robot positions. Points closer than the length tolerance
/// are snapped onto one representative, so multiplicities are exact.
#[derive(Clone, Debug)]
pub struct Configuration {
    points: Vec<Point>,
    polar: Vec<(f64, f64)>,
    sec: Circle,
    tol: Tolerance,
}

impl Configuration {
    pub fn new(points: Vec<Point>, tol: Tolerance) -> Result<Self, Error> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::DegenerateInput("non-finite coordinate"));
        }
        let mut snapped: Vec<Point> = Vec::with_capacity(points.len());
        for p in points {
            let rep = snapped.iter().copied().find(|q| q.approx_eq(p, &tol)).unwrap_or(p);
            snapped.push(rep);
        }
        let sec = smallest_enclosing_circle(&snapped)?;
        let polar = snapped
            .iter()
            .map(|p| {
                let d = p.dist(sec.center);
                if d <= tol.length {
                    (0.0, 0.0)
                } else {
                    (d, p.angle_from(sec.center))
                }
            })
            .collect();
        Ok(Configuration { points: snapped, polar, sec, tol })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn tol(&self) -> &Tolerance {
        &self.tol
    }

    pub fn sec(&self) -> Circle {
        self.sec
    }

    pub fn center(&self) -> Point {
        self.sec.center
    }

    pub fn radius(&self) -> f64 {
        self.sec.radius
    }

    /// Distance from the center (0 for points snapped onto it).
    pub fn dist(&self, i: usize) -> f64 {
        self.polar[i].0
    }

    /// Counterclockwise polar angle about the center (0 for central points).
    pub fn angle(&self, i: usize) -> f64 {
        self.polar[i].1
    }

    pub fn at_center(&self, i: usize) -> bool {
        self.polar[i].0 == 0.0
    }

    pub fn on_sec(&self, i: usize) -> bool {
        self.tol.eq_len(self.polar[i].0, self.sec.radius)
    }

    pub fn multiplicity(&self, p: Point) -> usize {
        self.points.iter().filter(|q| q.approx_eq(p, &self.tol)).count()
    }

    pub fn center_multiplicity(&self) -> usize {
        (0..self.len()).filter(|&i| self.at_center(i)).count()
    }

    pub fn max_multiplicity(&self) -> usize {
        self.distinct().iter().map(|&(_, k)| k).max().unwrap_or(0)
    }

    /// Distinct positions with their multiplicities, in first-occurrence order.
    pub fn distinct(&self) -> Vec<(Point, usize)> {
        let mut out: Vec<(Point, usize)> = Vec::new();
        for &p in &self.points {
            match out.iter_mut().find(|(q, _)| *q == p) {
                Some(e) => e.1 += 1,
                None => out.push((p, 1)),
            }
        }
        out
    }

    /// Indices of the points lying on the enclosing circle.
    pub fn boundary(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.on_sec(i)).collect()
    }

    pub fn levels(&self) -> ConcentricLevels {
        ConcentricLevels::new(self)
    }

    pub fn transformed(&self, s: &Similarity) -> Configuration {
        let pts = self.points.iter().map(|&p| s.apply(p)).collect();
        Configuration::new(pts, self.tol).expect("similarity keeps points finite")
    }

    /// The map sending the enclosing circle onto the unit circle at the origin
    /// (a pure translation when every point coincides).
    pub fn normalizing_map(&self) -> Similarity {
        let scale = if self.sec.radius > 0.0 { 1.0 / self.sec.radius } else { 1.0 };
        Similarity { rotation: 0.0, scale, translation: -self.sec.center * scale }
    }
}

/// One circle centered at c(P) with the indices of the points on it.
#[derive(Clone, Debug, PartialEq)]
pub struct Level {
    pub radius: f64,
    pub members: Vec<usize>,
}

/// All circles centered at c(P) holding at least one point, innermost first.
/// The first level has radius 0 exactly when the center is occupied.
#[derive(Clone, Debug, PartialEq)]
pub struct ConcentricLevels {
    pub center: Point,
    pub levels: Vec<Level>,
}

impl ConcentricLevels {
    fn new(cfg: &Configuration) -> Self {
        let mut idx: Vec<usize> = (0..cfg.len()).collect();
        idx.sort_by(|&a, &b| cfg.dist(a).total_cmp(&cfg.dist(b)));
        let mut levels: Vec<Level> = Vec::new();
        for i in idx {
            let d = cfg.dist(i);
            match levels.last_mut() {
                Some(l) if cfg.tol.eq_len(l.radius, d) => l.members.push(i),
                _ => levels.push(Level { radius: d, members: vec![i] }),
            }
        }
        // The outermost level is C(P) itself; pin its radius.
        if let Some(l) = levels.last_mut() {
            if cfg.tol.eq_len(l.radius, cfg.radius()) {
                l.radius = cfg.radius();
            }
        }
        ConcentricLevels { center: cfg.center(), levels }
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// C↑ⁱ, counting from the innermost level (1-based).
    pub fn up(&self, i: usize) -> Option<&Level> {
        i.checked_sub(1).and_then(|k| self.levels.get(k))
    }

    /// C↓ⁱ, counting from the outermost level (1-based).
    pub fn down(&self, i: usize) -> Option<&Level> {
        i.checked_sub(1).and_then(|k| self.levels.len().checked_sub(k + 1)).map(|k| &self.levels[k])
    }

    pub fn center_occupied(&self) -> bool {
        self.levels.first().is_some_and(|l| l.radius == 0.0)
    }
}

pub(crate) fn divisors_desc(n: usize) -> Vec<usize> {
    let mut d: Vec<usize> = (1..=n).filter(|k| n % k == 0).collect();
    d.reverse();
    d
}

/// Smallest prime factor; 1 for n ≤ 1.
pub fn min_prime_factor(n: usize) -> usize {
    if n <= 1 {
        return 1;
    }
    (2..=n).find(|k| n % k == 0).unwrap_or(n)
}
