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
//! Grasp-contact state: one pad rectangle per finger plus the object's
//! resting orientation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{rectangle_corners, ConvexPolygon2, FaceId, ObjectModel, Point2, Vec2, Vec3};
use crate::scalar::{wrap_angle, Scalar};

/// Finger pad rectangle on one face, in face-local coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct ContactRegion<T> {
    pub face: FaceId,
    pub center: Point2<T>,
    /// Angle of the pad's width axis from the face u-axis.
    pub orientation: T,
    pub pad_width: T,
    pub pad_height: T,
}

impl<T: Scalar> ContactRegion<T> {
    pub fn corners(&self) -> [Point2<T>; 4] {
        rectangle_corners(self.center, self.pad_width, self.pad_height, self.orientation)
    }

    pub fn polygon(&self) -> Result<ConvexPolygon2<T>> {
        ConvexPolygon2::rectangle(self.center, self.pad_width, self.pad_height, self.orientation)
    }

    pub fn area(&self) -> T {
        self.pad_width * self.pad_height
    }

    /// All four corners lie in the face polygon (feasibility tolerance).
    pub fn fits(&self, obj: &ObjectModel<T>) -> bool {
        obj.faces.get(self.face).is_some_and(|f| {
            self.corners()
                .iter()
                .all(|&c| f.polygon.contains(c, T::feas_eps()))
        })
    }

    pub(crate) fn snapped(mut self) -> Self {
        self.center = self.center.snap();
        self.orientation = wrap_angle(self.orientation).snap();
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Finger {
    Left,
    Right,
}

/// The search state: both contacts, which parallel pair they grip, and which
/// face rests on the table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct GraspState<T> {
    pub left: ContactRegion<T>,
    pub right: ContactRegion<T>,
    /// Index into `ObjectModel::parallel_pairs`.
    pub grasp_pair: usize,
    pub support_face: FaceId,
    /// Slide direction of each finger in its own face frame, `[left, right]`.
    pub horizontal_axis: [Vec2<T>; 2],
}

/// Hand directions expressed in the object frame.
#[derive(Debug, Clone, Copy)]
pub(crate) struct HandFrame<T> {
    /// World up (against gravity).
    pub up: Vec3<T>,
    /// From the left finger towards the right finger.
    pub grasp: Vec3<T>,
}

impl<T: Scalar> HandFrame<T> {
    pub fn new(obj: &ObjectModel<T>, support: FaceId, left_face: FaceId) -> Self {
        HandFrame {
            up: -obj.faces[support].outward_normal,
            grasp: -obj.faces[left_face].outward_normal,
        }
    }

    /// Slide direction on `face`, in face coordinates.
    pub fn slide_axis(&self, obj: &ObjectModel<T>, face: FaceId) -> Vec2<T> {
        let f = &obj.faces[face];
        f.direction_to_local(self.up.cross(f.outward_normal))
    }

    /// Up direction on `face`, in face coordinates.
    pub fn up_axis(&self, obj: &ObjectModel<T>, face: FaceId) -> Vec2<T> {
        obj.faces[face].direction_to_local(self.up)
    }
}

impl<T: Scalar> GraspState<T> {
    /// Build a state, deriving the grasp pair and slide axes from the faces.
    pub fn new(
        obj: &ObjectModel<T>,
        left: ContactRegion<T>,
        right: ContactRegion<T>,
        support_face: FaceId,
    ) -> Result<Self> {
        for (name, c) in [("left", &left), ("right", &right)] {
            obj.face(c.face)
                .map_err(|_| Error::InvalidState(format!("{name} contact names unknown face {}", c.face)))?;
            if !(c.pad_width > T::zero() && c.pad_height > T::zero()) {
                return Err(Error::InvalidState(format!("{name} pad dimensions must be positive")));
            }
            if !c.center.is_finite() || !c.orientation.is_finite() {
                return Err(Error::InvalidState(format!("{name} contact is not finite")));
            }
        }
        obj.face(support_face)
            .map_err(|_| Error::InvalidState(format!("unknown support face {support_face}")))?;
        let grasp_pair = obj.pair_index(left.face, right.face).ok_or_else(|| {
            Error::InvalidState(format!(
                "faces {} and {} are not a parallel pair",
                left.face, right.face
            ))
        })?;
        if support_face == left.face || support_face == right.face {
            return Err(Error::InvalidState("support face is one of the grasped faces".into()));
        }
        let hand = HandFrame::new(obj, support_face, left.face);
        if hand.up.dot(hand.grasp).abs() > T::geom_eps() {
            return Err(Error::InvalidState(format!(
                "support face {support_face} is not perpendicular to the grasped faces"
            )));
        }
        let s = GraspState {
            left: left.snapped(),
            right: right.snapped(),
            grasp_pair,
            support_face,
            horizontal_axis: [
                hand.slide_axis(obj, left.face),
                hand.slide_axis(obj, right.face),
            ],
        };
        for (name, c) in [("left", &s.left), ("right", &s.right)] {
            if !c.fits(obj) {
                return Err(Error::InvalidState(format!(
                    "{name} contact rectangle leaves face {}",
                    c.face
                )));
            }
        }
        Ok(s)
    }

    pub fn contact(&self, f: Finger) -> &ContactRegion<T> {
        match f {
            Finger::Left => &self.left,
            Finger::Right => &self.right,
        }
    }

    pub(crate) fn hand(&self, obj: &ObjectModel<T>) -> HandFrame<T> {
        HandFrame::new(obj, self.support_face, self.left.face)
    }

    /// Check every invariant against `obj`, including derived fields.
    pub fn validate(&self, obj: &ObjectModel<T>) -> Result<()> {
        let fresh = GraspState::new(obj, self.left, self.right, self.support_face)?;
        if fresh.grasp_pair != self.grasp_pair {
            return Err(Error::InvalidState(format!(
                "grasp_pair {} does not match faces ({}, {})",
                self.grasp_pair, self.left.face, self.right.face
            )));
        }
        for k in 0..2 {
            if fresh.horizontal_axis[k].dist(self.horizontal_axis[k]) > T::feas_eps() {
                return Err(Error::InvalidState("horizontal_axis inconsistent with support face".into()));
            }
        }
        Ok(())
    }
}
