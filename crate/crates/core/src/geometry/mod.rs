//! Planar geometry kernel: points, angles, circles, smallest enclosing
//! circles, sectorial distance and trajectories.
//!
//! Clockwise means decreasing standard polar angle everywhere in the crate.

mod sec;
mod sectorial;
mod trajectory;

pub use sec::{is_critical, smallest_enclosing_circle};
pub use sectorial::{annulus_sector, sectorial_distance, AnnulusSector};
pub use trajectory::{Leg, Similarity, Trajectory};

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point {
    fn from(a: [f64; 2]) -> Self {
        Point::new(a[0], a[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Point at `radius` from `center` in direction `theta` (counterclockwise polar angle).
    pub fn polar(center: Point, radius: f64, theta: f64) -> Self {
        Point::new(center.x + radius * theta.cos(), center.y + radius * theta.sin())
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    /// Counterclockwise polar angle of `self` seen from `center`, in [0, 2π).
    pub fn angle_from(self, center: Point) -> f64 {
        let d = self - center;
        canonical(d.y.atan2(d.x))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn approx_eq(self, other: Point, tol: &Tolerance) -> bool {
        self.dist(other) <= tol.length
    }

    pub fn rotate(self, theta: f64) -> Point {
        let (s, c) = theta.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        self + (other - self) * t
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Maps any real to [0, 2π).
pub fn canonical(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// An angle in [0, 2π).
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(from = "f64", into = "f64")]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    pub fn new(radians: f64) -> Self {
        Angle(canonical(radians))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// True when the angle is within `eps` of 0 modulo 2π.
    pub fn is_zero(self, eps: f64) -> bool {
        self.0 <= eps || self.0 >= TAU - eps
    }
}

impl From<f64> for Angle {
    fn from(r: f64) -> Self {
        Angle::new(r)
    }
}

impl From<Angle> for f64 {
    fn from(a: Angle) -> Self {
        a.0
    }
}

/// Absolute tolerances used for every equality and membership test.
///
/// The values are meant for unit-normalized scenes (`δ(C(R)) = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerance {
    pub length: f64,
    pub angle: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            length: 1e-9,
            angle: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(length: f64, angle: f64) -> Result<Self, Error> {
        if !(length > 0.0 && angle > 0.0 && length.is_finite() && angle.is_finite()) {
            return Err(Error::InvalidTolerance { length, angle });
        }
        Ok(Tolerance { length, angle })
    }

    pub fn eq_len(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.length
    }

    /// Equality of directions modulo 2π.
    pub fn eq_angle(&self, a: f64, b: f64) -> bool {
        Angle::new(a - b).is_zero(self.angle)
    }

    pub fn scaled(&self, k: f64) -> Tolerance {
        Tolerance {
            length: self.length * k,
            angle: self.angle * k,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Self {
        Circle { center, radius }
    }

    pub fn contains(&self, p: Point, tol: &Tolerance) -> bool {
        p.dist(self.center) <= self.radius + tol.length
    }

    pub fn on_boundary(&self, p: Point, tol: &Tolerance) -> bool {
        tol.eq_len(p.dist(self.center), self.radius)
    }

    pub fn approx_eq(&self, other: &Circle, tol: &Tolerance) -> bool {
        self.center.approx_eq(other.center, tol) && tol.eq_len(self.radius, other.radius)
    }

    /// Point of the circle at polar angle `theta`.
    pub fn at(&self, theta: f64) -> Point {
        Point::polar(self.center, self.radius, theta)
    }
}

/// Clockwise angle from the ray `c→u` to the ray `c→v`, in [0, 2π).
pub fn clockwise_angle(u: Point, c: Point, v: Point, tol: &Tolerance) -> Result<Angle, Error> {
    if u.approx_eq(c, tol) || v.approx_eq(c, tol) {
        return Err(Error::DegenerateInput("angle vertex coincides with an endpoint"));
    }
    Ok(Angle::new(u.angle_from(c) - v.angle_from(c)))
}

/// Clockwise rotation from direction `from` to direction `to` (polar angles), in [0, 2π).
pub fn cw_between(from: f64, to: f64) -> f64 {
    canonical(from - to)
}
