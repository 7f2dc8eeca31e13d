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
//! Goal regions and the contact-outside-goal metrics.

use serde::{Deserialize, Serialize};

use super::state::{ContactRegion, GraspState};
use crate::error::{Error, Result};
use crate::geometry::{ConvexPolygon2, FaceId};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct GoalRegion<T> {
    pub face: FaceId,
    pub polygon: ConvexPolygon2<T>,
}

/// Set of goal regions, each tied to a face.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(
    transparent,
    bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>")
)]
pub struct GoalSet<T> {
    pub regions: Vec<GoalRegion<T>>,
}

impl<T: Scalar> GoalSet<T> {
    pub fn new(regions: Vec<GoalRegion<T>>) -> Self {
        GoalSet { regions }
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn on_face(&self, face: FaceId) -> impl Iterator<Item = &ConvexPolygon2<T>> {
        self.regions
            .iter()
            .filter(move |g| g.face == face)
            .map(|g| &g.polygon)
    }
}

/// Area of `c` covered by the union of `goals`, by inclusion-exclusion over
/// intersections (which stay convex).
pub fn covered_area<T: Scalar>(c: &ConvexPolygon2<T>, goals: &[&ConvexPolygon2<T>]) -> T {
    fn rec<T: Scalar>(cur: &ConvexPolygon2<T>, goals: &[&ConvexPolygon2<T>], from: usize, sign: T) -> T {
        let mut acc = T::zero();
        for i in from..goals.len() {
            if let Some(next) = cur.intersection(goals[i]) {
                acc = acc + sign * next.area() + rec(&next, goals, i + 1, -sign);
            }
        }
        acc
    }
    rec(c, goals, 0, T::one()).max(T::zero()).min(c.area())
}

fn finger_covered<T: Scalar>(c: &ContactRegion<T>, goals: &GoalSet<T>) -> Result<(T, T)> {
    let poly = c.polygon()?;
    let on_face: Vec<_> = goals.on_face(c.face).collect();
    Ok((poly.area(), covered_area(&poly, &on_face)))
}

/// Contact area left outside the goal regions, summed over both fingers.
pub fn region_outside_goal<T: Scalar>(s: &GraspState<T>, goals: &GoalSet<T>) -> Result<T> {
    let mut total = T::zero();
    for c in [&s.left, &s.right] {
        let (area, covered) = finger_covered(c, goals)?;
        total = total + (area - covered).max(T::zero());
    }
    Ok(total)
}

/// Per-finger fraction of the contact lying inside goals, `(left, right)`.
pub fn overlap_ratio<T: Scalar>(s: &GraspState<T>, goals: &GoalSet<T>) -> Result<(T, T)> {
    let ratio = |c: &ContactRegion<T>| -> Result<T> {
        if !(c.area() > T::zero()) {
            return Err(Error::InvalidState(format!("contact on face {} has zero area", c.face)));
        }
        let (area, covered) = finger_covered(c, goals)?;
        Ok((covered / area).max(T::zero()).min(T::one()))
    };
    Ok((ratio(&s.left)?, ratio(&s.right)?))
}
