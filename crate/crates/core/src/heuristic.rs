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
//! Region heuristic: summed corner-to-goal distances measured on the
//! unfolded object surface.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::geometry::{unfold, ConvexPolygon2, FaceId, ObjectModel, UnfoldedMap};
use crate::transition::{ContactRegion, GoalSet, GraspState};
use crate::scalar::Scalar;

struct Unfolded<T> {
    map: UnfoldedMap<T>,
    goal_images: Vec<ConvexPolygon2<T>>,
}

/// Per-base-face unfoldings and goal images, each computed at most once.
/// Safe to share between threads.
pub struct HeuristicCache<T> {
    obj: ObjectModel<T>,
    goals: GoalSet<T>,
    entries: Vec<OnceLock<Result<Unfolded<T>, String>>>,
}

impl<T: Scalar> HeuristicCache<T> {
    pub fn new(obj: &ObjectModel<T>, goals: &GoalSet<T>) -> Self {
        HeuristicCache {
            obj: obj.clone(),
            goals: goals.clone(),
            entries: (0..obj.faces.len()).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn goals(&self) -> &GoalSet<T> {
        &self.goals
    }

    fn entry(&self, base: FaceId) -> Result<&Unfolded<T>> {
        let slot = self
            .entries
            .get(base)
            .ok_or_else(|| Error::InvalidInput(format!("no face with id {base}")))?;
        slot.get_or_init(|| {
            let map = unfold(&self.obj, base).map_err(|e| e.to_string())?;
            let goal_images = self
                .goals
                .regions
                .iter()
                .map(|g| map.map_polygon(g.face, &g.polygon).ok_or("goal face not unfolded"))
                .collect::<Result<_, _>>()?;
            Ok(Unfolded { map, goal_images })
        })
        .as_ref()
        .map_err(|e| Error::InvalidModel(e.clone()))
    }

    /// Unfolding about `base`.
    pub fn unfolded(&self, base: FaceId) -> Result<&UnfoldedMap<T>> {
        Ok(&self.entry(base)?.map)
    }

    /// Goal `m` laid out in the plane of `base`.
    pub fn goal_image(&self, base: FaceId, m: usize) -> Result<&ConvexPolygon2<T>> {
        self.entry(base)?
            .goal_images
            .get(m)
            .ok_or_else(|| Error::InvalidInput(format!("no goal with index {m}")))
    }
}

/// Sum over the pad's four corners of the distance to goal `m`.
pub fn corner_sum<T: Scalar>(region: &ContactRegion<T>, m: usize, cache: &HeuristicCache<T>) -> Result<T> {
    let goal = cache.goal_image(region.face, m)?;
    Ok(region
        .corners()
        .iter()
        .fold(T::zero(), |acc, &c| acc + goal.distance_to(c)))
}

/// Smallest corner sum over all goals.
pub fn finger_heuristic<T: Scalar>(region: &ContactRegion<T>, cache: &HeuristicCache<T>) -> Result<T> {
    if cache.goals.is_empty() {
        return Err(Error::InvalidInput("goal set is empty".into()));
    }
    let mut best = T::infinity();
    for m in 0..cache.goals.len() {
        best = best.min(corner_sum(region, m, cache)?);
    }
    Ok(best)
}

/// Left plus right finger heuristic.
pub fn total_heuristic<T: Scalar>(s: &GraspState<T>, cache: &HeuristicCache<T>) -> Result<T> {
    Ok(finger_heuristic(&s.left, cache)? + finger_heuristic(&s.right, cache)?)
}
