//! The target side: the pattern F, parking circles, forbidden points, the
//! embedding of F on the robots' enclosing circle, the modified pattern F′
//! and sectors.

mod sector;

pub use sector::{safe_sectorial_path, sector_bookkeeping, SectorBook, Sectors};

use std::f64::consts::TAU;

use crate::configuration::{max_regular_gons, min_prime_factor, symmetricity, view, compare_views, Configuration};
use crate::geometry::{canonical, cw_between, Circle, Point, Tolerance};
use crate::Error;

/// The target multiset, stored normalized (center at the origin, unit radius).
#[derive(Clone, Debug)]
pub struct Pattern {
    cfg: Configuration,
    rho: usize,
    top_radius: f64,
    boundary_offsets: Vec<f64>,
}

impl Pattern {
    pub fn new(points: Vec<Point>, tol: Tolerance) -> Result<Self, Error> {
        let raw = Configuration::new(points, tol)?;
        let cfg = raw.transformed(&raw.normalizing_map());
        let rho = symmetricity(&cfg);
        let levels = cfg.levels();
        let top_radius = if levels.len() >= 2 && cfg.radius() > 0.0 {
            // C↓²(F) exists whenever the disk interior holds a point.
            (1.0 + levels.down(2).unwrap().radius) / 2.0
        } else {
            0.5
        };
        let mut angles: Vec<f64> = cfg.boundary().iter().map(|&i| cfg.angle(i)).collect();
        angles.sort_by(f64::total_cmp);
        angles.dedup_by(|a, b| tol.eq_angle(*a, *b));
        let mut boundary_offsets: Vec<f64> = Vec::new();
        for &a in &angles {
            for &b in &angles {
                let d = cw_between(a, b);
                if d > tol.angle && d < TAU - tol.angle {
                    boundary_offsets.push(d);
                }
            }
        }
        boundary_offsets.sort_by(f64::total_cmp);
        boundary_offsets.dedup_by(|a, b| (*a - *b).abs() <= tol.angle);
        Ok(Pattern { cfg, rho, top_radius, boundary_offsets })
    }

    /// Builds the pattern from `(point, multiplicity)` pairs.
    pub fn from_weighted(points: &[(Point, usize)], tol: Tolerance) -> Result<Self, Error> {
        let flat: Vec<Point> = points.iter().flat_map(|&(p, k)| std::iter::repeat(p).take(k)).collect();
        Pattern::new(flat, tol)
    }

    pub fn len(&self) -> usize {
        self.cfg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cfg.is_empty()
    }

    /// The normalized pattern as a configuration.
    pub fn config(&self) -> &Configuration {
        &self.cfg
    }

    pub fn points(&self) -> &[Point] {
        self.cfg.points()
    }

    pub fn tol(&self) -> &Tolerance {
        self.cfg.tol()
    }

    /// ρ(F).
    pub fn symmetricity(&self) -> usize {
        self.rho
    }

    pub fn min_prime(&self) -> usize {
        min_prime_factor(self.rho)
    }

    pub fn is_single_point(&self) -> bool {
        self.cfg.radius() == 0.0
    }

    /// The gate variable g: ρ(F) = 1 or F is a single point.
    pub fn needs_delegation(&self) -> bool {
        self.rho == 1 || self.is_single_point()
    }

    /// Radius of C^T relative to the enclosing radius.
    pub fn top_radius(&self) -> f64 {
        self.top_radius
    }

    /// δ(C↑¹(F)) when the center is free, δ(C↑²(F)) otherwise.
    pub fn inner_radius(&self) -> f64 {
        let levels = self.cfg.levels();
        let k = if levels.center_occupied() { 2 } else { 1 };
        levels.up(k).map_or(1.0, |l| l.radius)
    }

    pub fn center_multiplicity(&self) -> usize {
        self.cfg.center_multiplicity()
    }

    pub fn max_multiplicity(&self) -> usize {
        self.cfg.max_multiplicity()
    }

    /// Every clockwise angle between two distinct points of ∂C(F), sorted.
    pub fn boundary_offsets(&self) -> &[f64] {
        &self.boundary_offsets
    }
}

/// The two parking circles C^T and C^B, both centered at c(R).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParkingGeometry {
    pub outer: Circle,
    pub top: Circle,
    pub bottom: Circle,
}

impl ParkingGeometry {
    /// Strictly between C^T and C(R).
    pub fn in_ann(&self, p: Point, tol: &Tolerance) -> bool {
        let d = p.dist(self.outer.center);
        d > self.top.radius + tol.length && d < self.outer.radius - tol.length
    }

    pub fn on_top(&self, p: Point, tol: &Tolerance) -> bool {
        self.top.on_boundary(p, tol)
    }
}

/// C^T and C^B for the robots `r` and the pattern `f` scaled onto C(R).
pub fn parking_circles(r: &Configuration, f: &Pattern) -> Result<ParkingGeometry, Error> {
    if f.is_single_point() {
        return Err(Error::DegeneratePattern);
    }
    let delta = r.radius();
    let levels = r.levels();
    let mut low = f.inner_radius();
    if let Some(l) = levels.up(2) {
        low = low.min(l.radius / delta);
    }
    // Only bites when F lies entirely on C(F): C^T is then the radius-1/2
    // circle, and C^B must stay inside it and ignore robots of Ann leaving
    // for C(R).
    low = low.min(f.top_radius());
    let c = r.center();
    Ok(ParkingGeometry {
        outer: r.sec(),
        top: Circle::new(c, f.top_radius() * delta),
        bottom: Circle::new(c, 0.5 * low * delta),
    })
}

/// Points of a circle lying at an angle 2πk/n from some occupied point of it.
#[derive(Clone, Debug)]
pub struct ForbiddenSet {
    center: Point,
    angles: Vec<f64>,
    tol: Tolerance,
}

/// The forbidden points of `circle` with respect to the `occupied` points on it.
pub fn forbidden_points(circle: &Circle, occupied: &[Point], n: usize, tol: &Tolerance) -> ForbiddenSet {
    let mut angles = Vec::with_capacity(occupied.len() * n);
    for p in occupied {
        let a = p.angle_from(circle.center);
        for k in 0..n.max(1) {
            angles.push(canonical(a - TAU * k as f64 / n.max(1) as f64));
        }
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() <= tol.angle);
    ForbiddenSet { center: circle.center, angles, tol: *tol }
}

impl ForbiddenSet {
    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn is_forbidden_angle(&self, theta: f64) -> bool {
        self.angles.iter().any(|&a| self.tol.eq_angle(a, theta))
    }

    pub fn is_forbidden(&self, q: Point) -> bool {
        self.is_forbidden_angle(q.angle_from(self.center))
    }

    /// Clockwise rotation from `theta` to the next forbidden direction
    /// strictly past it; `None` when nothing is forbidden.
    pub fn next_clockwise(&self, theta: f64) -> Option<f64> {
        self.angles
            .iter()
            .map(|&a| cw_between(theta, a))
            .filter(|&d| d > self.tol.angle)
            .min_by(f64::total_cmp)
            .or(if self.angles.is_empty() { None } else { Some(TAU) })
    }
}

/// How F sits on R: `p ↦ center + radius·rot(p)` for normalized pattern points.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    pub rotation: f64,
    pub scale: f64,
    pub center: Point,
    /// Boundary robots and the pattern point each one covers.
    pub matched: Vec<(usize, Point)>,
}

impl Embedding {
    pub fn place(&self, p: Point) -> Point {
        self.center + p.rotate(self.rotation) * self.scale
    }
}

/// Aligns the minimum-view boundary points of F with the regular m-gon of
/// robots on C(R).
pub fn embed_pattern(r: &Configuration, f: &Pattern) -> Result<Embedding, Error> {
    let boundary = r.boundary();
    let m = boundary.len();
    let rho = f.symmetricity();
    if m < 2 || rho % m != 0 {
        return Err(Error::PreconditionViolation(format!("{m} robots on C(R) do not divide ρ(F) = {rho}")));
    }
    if !crate::configuration::max_regular_gons(&r.sec(), r, rho).gons.iter().any(|g| g.len() == m) {
        return Err(Error::PreconditionViolation("robots on C(R) are not a regular polygon".into()));
    }
    let fc = f.config();
    let fb = fc.boundary();
    let mut best = fb[0];
    let mut best_view = view(best, fc)?;
    for &j in &fb[1..] {
        let v = view(j, fc)?;
        if compare_views(&v, &best_view, fc.tol()) == std::cmp::Ordering::Less {
            best = j;
            best_view = v;
        }
    }
    let rotation = canonical(r.angle(boundary[0]) - fc.angle(best));
    Ok(Embedding {
        rotation,
        scale: r.radius(),
        center: r.center(),
        matched: boundary.iter().map(|&i| (i, r.points()[i])).collect(),
    })
}

/// F′ in R's frame: the embedded F where every boundary point not covered by
/// a boundary robot is pulled radially onto C^T.
pub fn modified_pattern(f: &Pattern, e: &Embedding) -> Vec<Point> {
    let tol = *f.tol();
    let scaled_tol = tol.scaled(e.scale.max(1.0));
    let mut free: Vec<Point> = e.matched.iter().map(|&(_, p)| p).collect();
    let fc = f.config();
    let mut out = Vec::with_capacity(f.len());
    for (i, &p) in fc.points().iter().enumerate() {
        let q = e.place(p);
        if fc.on_sec(i) {
            if let Some(k) = free.iter().position(|t| t.approx_eq(q, &scaled_tol)) {
                out.push(free.swap_remove(k));
            } else {
                out.push(e.center + (q - e.center) * f.top_radius());
            }
        } else {
            out.push(q);
        }
    }
    out
}

/// Convenience: M(C(R)) is empty.
pub fn boundary_has_no_gon(r: &Configuration, rho_f: usize) -> bool {
    max_regular_gons(&r.sec(), r, rho_f).is_empty()
}
