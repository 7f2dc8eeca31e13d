/*
Copyright 2026 The inhand Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
//! Strictly convex polygons in a plane, stored counterclockwise.

use serde::{Deserialize, Serialize};

use super::vector::{Point2, Vec2};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Counterclockwise, strictly convex polygon with collinear and duplicate
/// vertices removed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "Vec<Point2<T>>",
    into = "Vec<Point2<T>>",
    bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>")
)]
pub struct ConvexPolygon2<T> {
    vertices: Vec<Point2<T>>,
}

impl<T: Scalar> TryFrom<Vec<Point2<T>>> for ConvexPolygon2<T> {
    type Error = Error;
    fn try_from(v: Vec<Point2<T>>) -> Result<Self> {
        ConvexPolygon2::new(v)
    }
}

impl<T> From<ConvexPolygon2<T>> for Vec<Point2<T>> {
    fn from(p: ConvexPolygon2<T>) -> Self {
        p.vertices
    }
}

fn signed_area<T: Scalar>(v: &[Point2<T>]) -> T {
    let n = v.len();
    let twice = (0..n).fold(T::zero(), |acc, i| acc + v[i].cross(v[(i + 1) % n]));
    twice * T::half()
}

impl<T: Scalar> ConvexPolygon2<T> {
    /// Canonicalise and validate. Clockwise input is reversed.
    pub fn new(vertices: Vec<Point2<T>>) -> Result<Self> {
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidGeometry("non-finite vertex".into()));
        }
        let mut v = dedup(vertices, T::geom_eps());
        if v.len() < 3 {
            return Err(Error::InvalidGeometry(format!(
                "polygon needs at least 3 distinct vertices, got {}",
                v.len()
            )));
        }
        if signed_area(&v) < T::zero() {
            v.reverse();
        }
        let v = drop_collinear(v, T::geom_eps());
        if v.len() < 3 {
            return Err(Error::InvalidGeometry("polygon is degenerate (collinear)".into()));
        }
        let n = v.len();
        for i in 0..n {
            let a = v[i];
            let e = v[(i + 1) % n] - a;
            for (j, p) in v.iter().enumerate() {
                if j == i || j == (i + 1) % n {
                    continue;
                }
                if e.cross(*p - a) <= T::zero() {
                    return Err(Error::InvalidGeometry(format!(
                        "polygon is not strictly convex at vertex {}",
                        (i + 1) % n
                    )));
                }
            }
        }
        let area = signed_area(&v);
        if area <= T::zero() {
            return Err(Error::InvalidGeometry("polygon has zero area".into()));
        }
        Ok(ConvexPolygon2 { vertices: v })
    }

    /// Rectangle of the given size centred at `center`, its width axis at
    /// angle `orientation`.
    pub fn rectangle(center: Point2<T>, width: T, height: T, orientation: T) -> Result<Self> {
        ConvexPolygon2::new(rectangle_corners(center, width, height, orientation).to_vec())
    }

    pub fn vertices(&self) -> &[Point2<T>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges as `(start, end)` in counterclockwise order.
    pub fn edges(&self) -> impl Iterator<Item = (Point2<T>, Point2<T>)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> T {
        signed_area(&self.vertices)
    }

    pub fn centroid(&self) -> Point2<T> {
        let n = self.vertices.len();
        let mut c = Vec2::zero();
        let mut a2 = T::zero();
        for i in 0..n {
            let (p, q) = (self.vertices[i], self.vertices[(i + 1) % n]);
            let w = p.cross(q);
            c += (p + q) * w;
            a2 = a2 + w;
        }
        c * (T::one() / (T::of(3.0) * a2))
    }

    /// True if `p` is inside or within `tol` outside of the boundary.
    pub fn contains(&self, p: Point2<T>, tol: T) -> bool {
        self.edges().all(|(a, b)| {
            let e = b - a;
            e.cross(p - a) >= -tol * e.norm()
        })
    }

    pub fn contains_polygon(&self, other: &Self, tol: T) -> bool {
        other.vertices.iter().all(|&p| self.contains(p, tol))
    }

    /// Euclidean distance to the closed polygon; zero inside.
    pub fn distance_to(&self, p: Point2<T>) -> T {
        if self.contains(p, T::zero()) {
            return T::zero();
        }
        self.edges()
            .map(|(a, b)| point_segment_distance(p, a, b))
            .fold(T::infinity(), T::min)
    }

    /// Intersection by clipping `self` against each half-plane of `clip`.
    /// `None` when the overlap has no area.
    pub fn intersection(&self, clip: &Self) -> Option<Self> {
        let mut out = self.vertices.clone();
        for (a, b) in clip.edges() {
            if out.is_empty() {
                return None;
            }
            let e = b - a;
            let side = |p: Point2<T>| e.cross(p - a);
            let input = std::mem::take(&mut out);
            let n = input.len();
            for i in 0..n {
                let cur = input[i];
                let prev = input[(i + n - 1) % n];
                let (sc, sp) = (side(cur), side(prev));
                if sc >= T::zero() {
                    if sp < T::zero() {
                        out.push(crossing(prev, cur, sp, sc));
                    }
                    out.push(cur);
                } else if sp >= T::zero() {
                    out.push(crossing(prev, cur, sp, sc));
                }
            }
        }
        if out.len() < 3 || signed_area(&out) <= T::geom_eps() * T::geom_eps() {
            return None;
        }
        ConvexPolygon2::new(out).ok()
    }

    /// Image under the planar isometry `p -> rot(angle) p + t`.
    pub fn transformed(&self, angle: T, t: Vec2<T>) -> Self {
        ConvexPolygon2 {
            vertices: self.vertices.iter().map(|p| p.rotate(angle) + t).collect(),
        }
    }

    pub fn translated(&self, t: Vec2<T>) -> Self {
        self.transformed(T::zero(), t)
    }

    pub fn cast<U: Scalar>(&self) -> ConvexPolygon2<U> {
        ConvexPolygon2 {
            vertices: self.vertices.iter().map(|p| p.cast()).collect(),
        }
    }
}

pub fn rectangle_corners<T: Scalar>(
    center: Point2<T>,
    width: T,
    height: T,
    orientation: T,
) -> [Point2<T>; 4] {
    let u = Vec2::from_angle(orientation) * (width * T::half());
    let v = u.perp() * (height / width);
    [center - u - v, center + u - v, center + u + v, center - u + v]
}

fn crossing<T: Scalar>(p: Point2<T>, q: Point2<T>, sp: T, sq: T) -> Point2<T> {
    let t = sp / (sp - sq);
    p + (q - p) * t
}

fn dedup<T: Scalar>(v: Vec<Point2<T>>, tol: T) -> Vec<Point2<T>> {
    let mut out: Vec<Point2<T>> = Vec::with_capacity(v.len());
    for p in v {
        if out.last().is_none_or(|q| q.dist(p) > tol) {
            out.push(p);
        }
    }
    while out.len() > 1 && out[0].dist(out[out.len() - 1]) <= tol {
        out.pop();
    }
    out
}

fn drop_collinear<T: Scalar>(mut v: Vec<Point2<T>>, tol: T) -> Vec<Point2<T>> {
    loop {
        let n = v.len();
        if n < 3 {
            return v;
        }
        let hit = (0..n).find(|&i| {
            let prev = v[(i + n - 1) % n];
            let next = v[(i + 1) % n];
            let (e1, e2) = (v[i] - prev, next - v[i]);
            e1.cross(e2).abs() <= tol * e1.norm() * e2.norm()
        });
        match hit {
            Some(i) => {
                v.remove(i);
            }
            None => return v,
        }
    }
}

pub fn point_segment_distance<T: Scalar>(p: Point2<T>, a: Point2<T>, b: Point2<T>) -> T {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 <= T::zero() {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).max(T::zero()).min(T::one());
    p.dist(a + ab * t)
}

/// Shoelace area of a valid polygon.
pub fn polygon_area<T: Scalar>(p: &ConvexPolygon2<T>) -> T {
    p.area()
}

pub fn point_to_polygon_distance<T: Scalar>(c: Point2<T>, p: &ConvexPolygon2<T>) -> T {
    p.distance_to(c)
}

pub fn convex_intersection<T: Scalar>(
    a: &ConvexPolygon2<T>,
    b: &ConvexPolygon2<T>,
) -> Option<ConvexPolygon2<T>> {
    a.intersection(b)
}
