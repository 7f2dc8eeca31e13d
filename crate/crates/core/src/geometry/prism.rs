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
//! Faceted object models: faces with local frames, shared edges and
//! parallel face pairs.

use std::collections::BTreeMap;

use super::polygon::ConvexPolygon2;
use super::vector::{Mat3, Point2, Point3, RigidTransform3, Vec2, Vec3};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type FaceId = usize;

/// A planar convex face. `frame` maps face-local `(u, v, 0)` to object
/// coordinates; its z-axis is the outward normal.
#[derive(Debug, Clone, PartialEq)]
pub struct Face<T> {
    pub id: FaceId,
    pub polygon: ConvexPolygon2<T>,
    pub frame: RigidTransform3<T>,
    pub outward_normal: Vec3<T>,
}

impl<T: Scalar> Face<T> {
    pub fn u_axis(&self) -> Vec3<T> {
        self.frame.rotation.col(0)
    }

    pub fn v_axis(&self) -> Vec3<T> {
        self.frame.rotation.col(1)
    }

    pub fn origin(&self) -> Point3<T> {
        self.frame.translation
    }

    pub fn to_object(&self, p: Point2<T>) -> Point3<T> {
        self.frame.apply(Vec3::new(p.x, p.y, T::zero()))
    }

    /// Orthogonal projection of an object-frame point into face coordinates.
    pub fn to_local(&self, p: Point3<T>) -> Point2<T> {
        let d = p - self.origin();
        Vec2::new(d.dot(self.u_axis()), d.dot(self.v_axis()))
    }

    /// An object-frame direction lying in the face, in face coordinates.
    pub fn direction_to_local(&self, d: Vec3<T>) -> Vec2<T> {
        Vec2::new(d.dot(self.u_axis()), d.dot(self.v_axis()))
    }

    pub fn direction_to_object(&self, d: Vec2<T>) -> Vec3<T> {
        self.u_axis() * d.x + self.v_axis() * d.y
    }

    pub fn vertices_3d(&self) -> Vec<Point3<T>> {
        self.polygon.vertices().iter().map(|&p| self.to_object(p)).collect()
    }

    /// Signed distance of an object-frame point from the face plane.
    pub fn plane_offset(&self, p: Point3<T>) -> T {
        (p - self.origin()).dot(self.outward_normal)
    }
}

/// Edge shared by two faces. `in_a[k]`, `in_b[k]` and `object[k]` all name
/// the same endpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct SharedEdge<T> {
    pub faces: (FaceId, FaceId),
    pub in_a: [Point2<T>; 2],
    pub in_b: [Point2<T>; 2],
    pub object: [Point3<T>; 2],
}

impl<T: Scalar> SharedEdge<T> {
    /// Endpoints in the local frame of `face`.
    pub fn endpoints_in(&self, face: FaceId) -> Option<[Point2<T>; 2]> {
        if face == self.faces.0 {
            Some(self.in_a)
        } else if face == self.faces.1 {
            Some(self.in_b)
        } else {
            None
        }
    }

    pub fn other(&self, face: FaceId) -> Option<FaceId> {
        if face == self.faces.0 {
            Some(self.faces.1)
        } else if face == self.faces.1 {
            Some(self.faces.0)
        } else {
            None
        }
    }

    pub fn direction(&self) -> Vec3<T> {
        (self.object[1] - self.object[0]).normalized()
    }

    pub fn length(&self) -> T {
        self.object[0].dist(self.object[1])
    }
}

#[derive(Debug, Clone)]
pub struct ObjectModel<T> {
    pub name: String,
    pub faces: Vec<Face<T>>,
    /// Keyed by `(a, b)` with `a < b`.
    pub adjacency: BTreeMap<(FaceId, FaceId), SharedEdge<T>>,
    /// Face pairs with opposing normals, `(a, b)` with `a < b`.
    pub parallel_pairs: Vec<(FaceId, FaceId)>,
    pub cross_section: ConvexPolygon2<T>,
    pub height: T,
}

impl<T: Scalar> ObjectModel<T> {
    /// Assemble a model from faces, discovering shared edges and parallel
    /// pairs geometrically.
    pub fn from_faces(
        name: impl Into<String>,
        faces: Vec<Face<T>>,
        cross_section: ConvexPolygon2<T>,
        height: T,
    ) -> Result<Self> {
        let tol = T::feas_eps();
        for (i, f) in faces.iter().enumerate() {
            if f.id != i {
                return Err(Error::InvalidModel(format!("face at index {i} has id {}", f.id)));
            }
            if !f.frame.is_valid() {
                return Err(Error::InvalidModel(format!("face {i} frame is not a rigid motion")));
            }
            if f.frame.rotation.col(2).dist(f.outward_normal) > T::geom_eps() {
                return Err(Error::InvalidModel(format!(
                    "face {i} normal differs from its frame z-axis"
                )));
            }
        }
        let corners: Vec<Vec<Point3<T>>> = faces.iter().map(|f| f.vertices_3d()).collect();
        let mut adjacency = BTreeMap::new();
        for a in 0..faces.len() {
            for b in a + 1..faces.len() {
                if let Some(e) = find_shared_edge(&faces[a], &corners[a], &faces[b], &corners[b], tol)
                {
                    adjacency.insert((a, b), e);
                }
            }
        }
        let mut parallel_pairs = Vec::new();
        for a in 0..faces.len() {
            for b in a + 1..faces.len() {
                let d = faces[a].outward_normal.dot(faces[b].outward_normal);
                if (d + T::one()).abs() <= T::geom_eps() {
                    parallel_pairs.push((a, b));
                }
            }
        }
        Ok(ObjectModel {
            name: name.into(),
            faces,
            adjacency,
            parallel_pairs,
            cross_section,
            height,
        })
    }

    pub fn face(&self, id: FaceId) -> Result<&Face<T>> {
        self.faces
            .get(id)
            .ok_or_else(|| Error::InvalidInput(format!("no face with id {id}")))
    }

    pub fn shared_edge(&self, a: FaceId, b: FaceId) -> Option<&SharedEdge<T>> {
        self.adjacency.get(&(a.min(b), a.max(b)))
    }

    /// Neighbours of `id` in ascending id order.
    pub fn neighbors(&self, id: FaceId) -> impl Iterator<Item = FaceId> + '_ {
        self.adjacency.values().filter_map(move |e| e.other(id))
    }

    pub fn pair_index(&self, a: FaceId, b: FaceId) -> Option<usize> {
        let key = (a.min(b), a.max(b));
        self.parallel_pairs.iter().position(|&p| p == key)
    }

    /// Distance between the planes of a parallel pair.
    pub fn pair_width(&self, pair: usize) -> T {
        let (a, b) = self.parallel_pairs[pair];
        let (fa, fb) = (&self.faces[a], &self.faces[b]);
        -fa.plane_offset(fb.origin())
    }

    /// Number of faces sharing the lateral ring of a prism.
    pub fn lateral_count(&self) -> usize {
        self.cross_section.len()
    }

    /// Every face edge is shared with exactly one other face, shared-edge
    /// lengths agree in both local frames, and parallel normals oppose.
    pub fn validate(&self) -> Result<()> {
        let tol = T::geom_eps();
        for f in &self.faces {
            let shared = self
                .adjacency
                .values()
                .filter(|e| e.faces.0 == f.id || e.faces.1 == f.id)
                .count();
            if shared != f.polygon.len() {
                return Err(Error::InvalidModel(format!(
                    "face {} has {} edges but shares {}",
                    f.id,
                    f.polygon.len(),
                    shared
                )));
            }
        }
        for e in self.adjacency.values() {
            let la = e.in_a[0].dist(e.in_a[1]);
            let lb = e.in_b[0].dist(e.in_b[1]);
            if (la - lb).abs() > tol {
                return Err(Error::InvalidModel(format!(
                    "shared edge {:?} has lengths {la} and {lb}",
                    e.faces
                )));
            }
        }
        for &(a, b) in &self.parallel_pairs {
            let d = self.faces[a].outward_normal.dot(self.faces[b].outward_normal);
            if (d + T::one()).abs() > tol {
                return Err(Error::InvalidModel(format!("pair ({a}, {b}) is not antiparallel")));
            }
        }
        Ok(())
    }
}

fn find_shared_edge<T: Scalar>(
    fa: &Face<T>,
    ca: &[Point3<T>],
    fb: &Face<T>,
    cb: &[Point3<T>],
    tol: T,
) -> Option<SharedEdge<T>> {
    let (na, nb) = (ca.len(), cb.len());
    for i in 0..na {
        let (p, q) = (ca[i], ca[(i + 1) % na]);
        for j in 0..nb {
            let (r, s) = (cb[j], cb[(j + 1) % nb]);
            let (ia, ib) = if p.dist(s) <= tol && q.dist(r) <= tol {
                ((i, (i + 1) % na), ((j + 1) % nb, j))
            } else if p.dist(r) <= tol && q.dist(s) <= tol {
                ((i, (i + 1) % na), (j, (j + 1) % nb))
            } else {
                continue;
            };
            let va = fa.polygon.vertices();
            let vb = fb.polygon.vertices();
            return Some(SharedEdge {
                faces: (fa.id, fb.id),
                in_a: [va[ia.0], va[ia.1]],
                in_b: [vb[ib.0], vb[ib.1]],
                object: [p, q],
            });
        }
    }
    None
}

/// Right prism over `cross_section` (in the object xy-plane) extruded from
/// `z = 0` to `z = height`. Faces `0..k` are lateral, face `k` is the bottom
/// cap and `k + 1` the top cap.
pub fn build_prism<T: Scalar>(
    name: impl Into<String>,
    cross_section: &ConvexPolygon2<T>,
    height: T,
) -> Result<ObjectModel<T>> {
    if !(height > T::zero()) || !height.is_finite() {
        return Err(Error::InvalidGeometry(format!("prism height must be positive, got {height}")));
    }
    let verts = cross_section.vertices();
    let k = verts.len();
    let half_h = height * T::half();
    let z = Vec3::z_axis();
    let mut faces = Vec::with_capacity(k + 2);
    for i in 0..k {
        let (p, q) = (verts[i], verts[(i + 1) % k]);
        let len = p.dist(q);
        let e = (q - p) * (T::one() / len);
        let u = Vec3::new(e.x, e.y, T::zero());
        let n = u.cross(z);
        let mid = (p + q) * T::half();
        let frame =
            RigidTransform3::new(Mat3::from_cols(u, z, n), Vec3::new(mid.x, mid.y, half_h));
        let hl = len * T::half();
        let polygon = ConvexPolygon2::new(vec![
            Vec2::new(-hl, -half_h),
            Vec2::new(hl, -half_h),
            Vec2::new(hl, half_h),
            Vec2::new(-hl, half_h),
        ])?;
        faces.push(Face {
            id: i,
            polygon,
            frame,
            outward_normal: n,
        });
    }
    let c = cross_section.centroid();
    let bottom_rot = Mat3::from_cols(Vec3::x_axis(), -Vec3::y_axis(), -z);
    let bottom = ConvexPolygon2::new(verts.iter().map(|p| Vec2::new(p.x - c.x, c.y - p.y)).collect())?;
    faces.push(Face {
        id: k,
        polygon: bottom,
        frame: RigidTransform3::new(bottom_rot, Vec3::new(c.x, c.y, T::zero())),
        outward_normal: -z,
    });
    let top = ConvexPolygon2::new(verts.iter().map(|&p| p - c).collect())?;
    faces.push(Face {
        id: k + 1,
        polygon: top,
        frame: RigidTransform3::new(Mat3::identity(), Vec3::new(c.x, c.y, height)),
        outward_normal: z,
    });
    let model = ObjectModel::from_faces(name, faces, cross_section.clone(), height)?;
    model.validate()?;
    if !model.parallel_pairs.iter().any(|&(a, b)| a < k && b < k) {
        return Err(Error::UngraspableObject(
            "cross-section has no pair of parallel edges".into(),
        ));
    }
    Ok(model)
}
