use std::f64::consts::PI;

use super::{canonical, cw_between, Angle, Point, Tolerance};
use crate::Error;

/// Radial gap normalized by the enclosing radius plus the smaller angular gap over π.
///
/// A point at the center has no direction; its angular term is zero.
pub fn sectorial_distance(p: Point, q: Point, center: Point, enclosing_radius: f64) -> f64 {
    if enclosing_radius <= 0.0 {
        return 0.0;
    }
    let dp = p.dist(center);
    let dq = q.dist(center);
    let radial = (dp - dq).abs() / enclosing_radius;
    if dp == 0.0 || dq == 0.0 {
        return radial;
    }
    let cw = cw_between(p.angle_from(center), q.angle_from(center));
    radial + cw.min(canonical(-cw)) / PI
}

/// Region between two concentric circles and two rays, swept clockwise
/// from `start` by `span`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnnulusSector {
    pub center: Point,
    pub inner: f64,
    pub outer: f64,
    pub start: Angle,
    pub span: f64,
}

impl AnnulusSector {
    pub fn end(&self) -> Angle {
        Angle::new(self.start.radians() - self.span)
    }

    pub fn is_degenerate(&self, tol: &Tolerance) -> bool {
        self.span <= tol.angle || (self.outer - self.inner) <= tol.length
    }

    pub fn contains(&self, s: Point, tol: &Tolerance) -> bool {
        let d = s.dist(self.center);
        if d < self.inner - tol.length || d > self.outer + tol.length {
            return false;
        }
        if d <= tol.length {
            return self.inner <= tol.length;
        }
        let off = cw_between(self.start.radians(), s.angle_from(self.center));
        off <= self.span + tol.angle || off >= std::f64::consts::TAU - tol.angle
    }
}

/// The annulus sector spanned by `p` and `q`, using the smaller angular side.
/// A straight angle is swept clockwise from `p`.
pub fn annulus_sector(p: Point, q: Point, center: Point, tol: &Tolerance) -> Result<AnnulusSector, Error> {
    if p.approx_eq(center, tol) || q.approx_eq(center, tol) {
        return Err(Error::DegenerateInput("annulus sector endpoint at the center"));
    }
    let (tp, tq) = (p.angle_from(center), q.angle_from(center));
    let cw = cw_between(tp, tq);
    let (start, span) = if cw <= PI + tol.angle {
        (tp, cw)
    } else {
        (tq, cw_between(tq, tp))
    };
    let (dp, dq) = (p.dist(center), q.dist(center));
    Ok(AnnulusSector {
        center,
        inner: dp.min(dq),
        outer: dp.max(dq),
        start: Angle::new(start),
        span,
    })
}
