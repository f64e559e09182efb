use serde::{Deserialize, Serialize};

use super::{canonical, Point, Tolerance};
use crate::Error;

/// One piece of a trajectory: a straight segment or an arc about a center.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Leg {
    Seg { from: Point, to: Point },
    /// `sweep` is signed: negative is clockwise.
    Arc { center: Point, radius: f64, start: f64, sweep: f64 },
}

impl Leg {
    pub fn length(&self) -> f64 {
        match *self {
            Leg::Seg { from, to } => from.dist(to),
            Leg::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    pub fn start(&self) -> Point {
        self.point_at(0.0)
    }

    pub fn end(&self) -> Point {
        match *self {
            Leg::Seg { to, .. } => to,
            Leg::Arc { center, radius, start, sweep } => Point::polar(center, radius, start + sweep),
        }
    }

    /// Point after travelling `s` along the leg (clamped to the leg).
    pub fn point_at(&self, s: f64) -> Point {
        let len = self.length();
        let t = if len > 0.0 { (s / len).clamp(0.0, 1.0) } else { 0.0 };
        match *self {
            Leg::Seg { from, to } => {
                if t >= 1.0 {
                    to
                } else {
                    from.lerp(to, t)
                }
            }
            Leg::Arc { center, radius, start, sweep } => Point::polar(center, radius, start + sweep * t),
        }
    }

    /// Whether `p` lies on the leg.
    pub fn passes_through(&self, p: Point, tol: &Tolerance) -> bool {
        match *self {
            Leg::Seg { from, to } => {
                let d = to - from;
                let l2 = d.dot(d);
                if l2 == 0.0 {
                    return p.approx_eq(from, tol);
                }
                let t = ((p - from).dot(d) / l2).clamp(0.0, 1.0);
                p.approx_eq(from + d * t, tol)
            }
            Leg::Arc { center, radius, start, sweep } => {
                if !tol.eq_len(p.dist(center), radius) {
                    return false;
                }
                if p.approx_eq(self.start(), tol) || p.approx_eq(self.end(), tol) {
                    return true;
                }
                if radius <= tol.length {
                    return true;
                }
                let theta = p.angle_from(center);
                let off = if sweep >= 0.0 {
                    canonical(theta - start)
                } else {
                    canonical(start - theta)
                };
                off <= sweep.abs() + tol.angle
            }
        }
    }

    fn transformed(&self, s: &Similarity) -> Leg {
        match *self {
            Leg::Seg { from, to } => Leg::Seg { from: s.apply(from), to: s.apply(to) },
            Leg::Arc { center, radius, start, sweep } => Leg::Arc {
                center: s.apply(center),
                radius: radius * s.scale,
                start: canonical(start + s.rotation),
                sweep,
            },
        }
    }

    /// The part of the leg after travelling `s`.
    fn suffix(&self, s: f64) -> Leg {
        match *self {
            Leg::Seg { to, .. } => Leg::Seg { from: self.point_at(s), to },
            Leg::Arc { center, radius, start, sweep } => {
                let done = if radius > 0.0 { (s / radius).min(sweep.abs()) } else { 0.0 };
                let signed = done * sweep.signum();
                Leg::Arc { center, radius, start: canonical(start + signed), sweep: sweep - signed }
            }
        }
    }
}

/// A contiguous chain of legs. No legs means the nil movement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub start: Point,
    pub legs: Vec<Leg>,
}

impl Trajectory {
    pub fn nil(start: Point) -> Self {
        Trajectory { start, legs: Vec::new() }
    }

    pub fn is_nil(&self) -> bool {
        self.legs.is_empty()
    }

    pub fn end(&self) -> Point {
        self.legs.last().map_or(self.start, Leg::end)
    }

    pub fn length(&self) -> f64 {
        self.legs.iter().map(Leg::length).sum()
    }

    /// Appends a straight segment from the current end to `to`.
    pub fn then_segment(mut self, to: Point) -> Self {
        let from = self.end();
        if from != to {
            self.legs.push(Leg::Seg { from, to });
        }
        self
    }

    /// Appends an arc about `center` sweeping `sweep` radians (negative = clockwise).
    pub fn then_arc(mut self, center: Point, sweep: f64) -> Self {
        let from = self.end();
        let radius = from.dist(center);
        if sweep != 0.0 && radius > 0.0 {
            self.legs.push(Leg::Arc { center, radius, start: from.angle_from(center), sweep });
        }
        self
    }

    pub fn point_at(&self, s: f64) -> Point {
        let mut left = s.max(0.0);
        for leg in &self.legs {
            let l = leg.length();
            if left <= l {
                return leg.point_at(left);
            }
            left -= l;
        }
        self.end()
    }

    /// The rest of the trajectory once `s` has been travelled.
    pub fn remainder(&self, s: f64) -> Trajectory {
        let mut left = s.max(0.0);
        for (i, leg) in self.legs.iter().enumerate() {
            let l = leg.length();
            if left < l {
                let mut legs = vec![leg.suffix(left)];
                legs.extend_from_slice(&self.legs[i + 1..]);
                return Trajectory { start: legs[0].start(), legs };
            }
            left -= l;
        }
        Trajectory::nil(self.end())
    }

    pub fn passes_through(&self, p: Point, tol: &Tolerance) -> bool {
        if self.legs.is_empty() {
            return p.approx_eq(self.start, tol);
        }
        self.legs.iter().any(|l| l.passes_through(p, tol))
    }

    pub fn transformed(&self, s: &Similarity) -> Trajectory {
        Trajectory {
            start: s.apply(self.start),
            legs: self.legs.iter().map(|l| l.transformed(s)).collect(),
        }
    }

    /// Checks that every leg starts where the previous one ended.
    pub fn is_contiguous(&self, tol: &Tolerance) -> bool {
        let mut at = self.start;
        for leg in &self.legs {
            if !leg.start().approx_eq(at, tol) {
                return false;
            }
            at = leg.end();
        }
        true
    }
}

/// Rotation, positive uniform scaling and translation: `p ↦ scale·rot(p) + translation`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    pub rotation: f64,
    pub scale: f64,
    pub translation: Point,
}

impl Default for Similarity {
    fn default() -> Self {
        Similarity::IDENTITY
    }
}

impl Similarity {
    pub const IDENTITY: Similarity = Similarity { rotation: 0.0, scale: 1.0, translation: Point::ORIGIN };

    pub fn new(rotation: f64, scale: f64, translation: Point) -> Result<Self, Error> {
        if !(scale > 0.0 && scale.is_finite() && rotation.is_finite() && translation.is_finite()) {
            return Err(Error::DegenerateInput("similarity needs a finite positive scale"));
        }
        Ok(Similarity { rotation, scale, translation })
    }

    /// Builds the map from a linear part `[[a, b], [c, d]]` and a translation.
    /// Orientation-reversing maps are refused.
    pub fn from_matrix(m: [[f64; 2]; 2], translation: Point) -> Result<Self, Error> {
        let [[a, b], [c, d]] = m;
        let det = a * d - b * c;
        if det < 0.0 {
            return Err(Error::ReflectionLcs);
        }
        let scale = det.sqrt();
        if scale <= 0.0 || (a - d).abs() > 1e-12 * scale || (b + c).abs() > 1e-12 * scale {
            return Err(Error::DegenerateInput("linear part is not a similarity"));
        }
        Similarity::new(c.atan2(a), scale, translation)
    }

    pub fn apply(&self, p: Point) -> Point {
        p.rotate(self.rotation) * self.scale + self.translation
    }

    pub fn inverse(&self) -> Similarity {
        Similarity {
            rotation: -self.rotation,
            scale: 1.0 / self.scale,
            translation: (-self.translation).rotate(-self.rotation) * (1.0 / self.scale),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Similarity) -> Similarity {
        Similarity {
            rotation: self.rotation + other.rotation,
            scale: self.scale * other.scale,
            translation: self.apply(other.translation),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn chained_legs_are_contiguous() {
        let t = Trajectory::nil(Point::new(2.0, 0.0))
            .then_segment(Point::new(1.0, 0.0))
            .then_arc(Point::ORIGIN, -FRAC_PI_2)
            .then_segment(Point::new(0.0, -0.5));
        assert!(t.is_contiguous(&tol()));
        let expect = 1.0 + FRAC_PI_2 + 0.5;
        assert!((t.length() - expect).abs() < 1e-12);
        assert!(t.end().approx_eq(Point::new(0.0, -0.5), &tol()));
        assert!(t.point_at(1.0 + FRAC_PI_2 / 2.0).approx_eq(Point::polar(Point::ORIGIN, 1.0, -PI / 4.0), &tol()));
    }

    #[test]
    fn remainder_is_a_suffix() {
        let t = Trajectory::nil(Point::new(1.0, 0.0)).then_arc(Point::ORIGIN, PI).then_segment(Point::new(-3.0, 0.0));
        let r = t.remainder(FRAC_PI_2);
        assert!(r.start.approx_eq(Point::new(0.0, 1.0), &tol()));
        assert!((r.length() - (FRAC_PI_2 + 2.0)).abs() < 1e-12);
        assert!(r.end().approx_eq(t.end(), &tol()));
        assert!(t.remainder(100.0).is_nil());
    }

    #[test]
    fn passes_through_points_on_legs() {
        let t = Trajectory::nil(Point::new(1.0, 0.0)).then_arc(Point::ORIGIN, -FRAC_PI_2);
        assert!(t.passes_through(Point::polar(Point::ORIGIN, 1.0, -0.3), &tol()));
        assert!(!t.passes_through(Point::polar(Point::ORIGIN, 1.0, 0.3), &tol()));
        let s = Trajectory::nil(Point::ORIGIN).then_segment(Point::new(2.0, 0.0));
        assert!(s.passes_through(Point::new(1.0, 0.0), &tol()));
        assert!(!s.passes_through(Point::new(3.0, 0.0), &tol()));
    }

    #[test]
    fn similarity_round_trip() {
        let s = Similarity::new(FRAC_PI_3, 2.0, Point::new(0.5, -1.0)).unwrap();
        let p = Point::new(0.3, 0.7);
        assert!(s.inverse().apply(s.apply(p)).approx_eq(p, &tol()));
        assert!(s.compose(&s.inverse()).apply(p).approx_eq(p, &tol()));
        let t = Trajectory::nil(p).then_arc(Point::ORIGIN, -1.0).then_segment(Point::new(2.0, 2.0));
        let back = t.transformed(&s).transformed(&s.inverse());
        assert!(back.end().approx_eq(t.end(), &tol()));
        assert!((back.length() - t.length()).abs() < 1e-12);
    }

    #[test]
    fn reflections_are_refused() {
        let r = Similarity::from_matrix([[1.0, 0.0], [0.0, -1.0]], Point::ORIGIN);
        assert!(matches!(r, Err(Error::ReflectionLcs)));
        let ok = Similarity::from_matrix([[0.0, -2.0], [2.0, 0.0]], Point::ORIGIN).unwrap();
        assert!((ok.rotation - FRAC_PI_2).abs() < 1e-12 && (ok.scale - 2.0).abs() < 1e-12);
    }
}
