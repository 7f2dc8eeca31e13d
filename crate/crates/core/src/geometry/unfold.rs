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
//! Unfolding of object faces into the plane of a base face.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write;

use super::polygon::ConvexPolygon2;
use super::prism::{FaceId, ObjectModel};
use super::vector::{Point2, Vec2};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Planar isometry `p -> rot(angle) p + translation`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement<T> {
    pub angle: T,
    pub translation: Vec2<T>,
}

impl<T: Scalar> Placement<T> {
    pub fn identity() -> Self {
        Placement {
            angle: T::zero(),
            translation: Vec2::zero(),
        }
    }

    pub fn apply(&self, p: Point2<T>) -> Point2<T> {
        p.rotate(self.angle) + self.translation
    }
}

#[derive(Debug, Clone)]
pub struct UnfoldedMap<T> {
    pub base_face: FaceId,
    pub placements: BTreeMap<FaceId, Placement<T>>,
    pub unfolded_polygons: BTreeMap<FaceId, ConvexPolygon2<T>>,
    /// BFS tree parent of every non-base face.
    pub parents: BTreeMap<FaceId, FaceId>,
}

impl<T: Scalar> UnfoldedMap<T> {
    /// Position of face-local point `p` of `face` in the base plane.
    pub fn map_point(&self, face: FaceId, p: Point2<T>) -> Option<Point2<T>> {
        self.placements.get(&face).map(|pl| pl.apply(p))
    }

    pub fn map_polygon(&self, face: FaceId, poly: &ConvexPolygon2<T>) -> Option<ConvexPolygon2<T>> {
        self.placements
            .get(&face)
            .map(|pl| poly.transformed(pl.angle, pl.translation))
    }

    /// Debug rendering of the layout plus optional goal images.
    pub fn to_svg(&self, goals: &[ConvexPolygon2<T>]) -> String {
        let all = self
            .unfolded_polygons
            .values()
            .chain(goals.iter())
            .flat_map(|p| p.vertices().iter().copied());
        let (mut lo, mut hi) = (Vec2::new(T::infinity(), T::infinity()), Vec2::new(T::neg_infinity(), T::neg_infinity()));
        for p in all {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).to_f64_lossy();
        let scale = if span > 0.0 { 800.0 / span } else { 1.0 };
        let (lx, hy) = (lo.x.to_f64_lossy(), hi.y.to_f64_lossy());
        let w = (hi.x - lo.x).to_f64_lossy() * scale + 40.0;
        let h = (hi.y - lo.y).to_f64_lossy() * scale + 40.0;
        let pts = |p: &ConvexPolygon2<T>| {
            p.vertices()
                .iter()
                .map(|v| {
                    format!(
                        "{:.3},{:.3}",
                        (v.x.to_f64_lossy() - lx) * scale + 20.0,
                        (hy - v.y.to_f64_lossy()) * scale + 20.0
                    )
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}">"#
        );
        for (id, poly) in &self.unfolded_polygons {
            let fill = if *id == self.base_face { "#cfe3ff" } else { "#eeeeee" };
            let _ = writeln!(
                s,
                r#"  <polygon data-face="{id}" points="{}" fill="{fill}" stroke="black" stroke-width="1"/>"#,
                pts(poly)
            );
            let c = poly.centroid();
            let _ = writeln!(
                s,
                r#"  <text x="{:.3}" y="{:.3}" font-size="12">{id}</text>"#,
                (c.x.to_f64_lossy() - lx) * scale + 20.0,
                (hy - c.y.to_f64_lossy()) * scale + 20.0
            );
        }
        for (i, g) in goals.iter().enumerate() {
            let _ = writeln!(
                s,
                r##"  <polygon data-goal="{i}" points="{}" fill="#3070ff" fill-opacity="0.5" stroke="#1040c0"/>"##,
                pts(g)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Breadth-first unfolding from `base`. Each face is hinged flat about the
/// edge it shares with its BFS parent; neighbours are visited in ascending
/// id order.
pub fn unfold<T: Scalar>(obj: &ObjectModel<T>, base: FaceId) -> Result<UnfoldedMap<T>> {
    obj.face(base)?;
    let mut placements = BTreeMap::new();
    let mut parents = BTreeMap::new();
    placements.insert(base, Placement::identity());
    let mut queue = VecDeque::from([base]);
    while let Some(parent) = queue.pop_front() {
        let pp = placements[&parent];
        let children: Vec<FaceId> = obj.neighbors(parent).collect();
        for child in children {
            if placements.contains_key(&child) {
                continue;
            }
            let edge = obj.shared_edge(parent, child).expect("neighbour has a shared edge");
            let (ps, cs) = (
                edge.endpoints_in(parent).expect("parent on edge"),
                edge.endpoints_in(child).expect("child on edge"),
            );
            let (a, b) = (pp.apply(ps[0]), pp.apply(ps[1]));
            let angle = (b - a).angle() - (cs[1] - cs[0]).angle();
            let translation = a - cs[0].rotate(angle);
            placements.insert(child, Placement { angle, translation });
            parents.insert(child, parent);
            queue.push_back(child);
        }
    }
    if placements.len() != obj.faces.len() {
        return Err(Error::InvalidModel(format!(
            "face adjacency graph is disconnected: {} of {} faces reachable from face {base}",
            placements.len(),
            obj.faces.len()
        )));
    }
    let unfolded_polygons = placements
        .iter()
        .map(|(&id, pl)| (id, obj.faces[id].polygon.transformed(pl.angle, pl.translation)))
        .collect();
    Ok(UnfoldedMap {
        base_face: base,
        placements,
        unfolded_polygons,
        parents,
    })
}
