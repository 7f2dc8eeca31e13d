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
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ObjectModel;
use crate::scalar::Scalar;

/// Action discretisation and workspace limits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ResolutionConfig<T> {
    pub slide_step: T,
    pub z_step: T,
    pub rotation_step: T,
    pub pivot_step: T,
    pub min_grasp_width: T,
    pub max_grasp_width: T,
    /// In-hand rotation needs `max(w0, w1) / min(w0, w1)` at most this.
    pub max_width_ratio: T,
    pub pad_width: T,
    pub pad_height: T,
    /// Optional cap on the contact centre's height above the table.
    pub max_contact_height: Option<T>,
}

impl<T: Scalar> Default for ResolutionConfig<T> {
    fn default() -> Self {
        ResolutionConfig {
            slide_step: T::of(0.005),
            z_step: T::of(0.005),
            rotation_step: T::FRAC_PI_2(),
            pivot_step: T::FRAC_PI_2(),
            min_grasp_width: T::of(0.005),
            max_grasp_width: T::of(0.15),
            max_width_ratio: T::of(3.0),
            pad_width: T::of(0.012),
            pad_height: T::of(0.012),
            max_contact_height: None,
        }
    }
}

impl<T: Scalar> ResolutionConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("slide_step", self.slide_step),
            ("z_step", self.z_step),
            ("rotation_step", self.rotation_step),
            ("pivot_step", self.pivot_step),
            ("min_grasp_width", self.min_grasp_width),
            ("max_grasp_width", self.max_grasp_width),
            ("max_width_ratio", self.max_width_ratio),
            ("pad_width", self.pad_width),
            ("pad_height", self.pad_height),
        ];
        for (name, v) in named {
            if !(v > T::zero() && v.is_finite()) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        if self.min_grasp_width > self.max_grasp_width {
            return Err(Error::InvalidInput("min_grasp_width exceeds max_grasp_width".into()));
        }
        Ok(())
    }
}

/// Fill in the geometry-derived rotation and pivot steps.
pub fn derive_resolutions<T: Scalar>(
    obj: &ObjectModel<T>,
    base: &ResolutionConfig<T>,
) -> ResolutionConfig<T> {
    let mut cfg = base.clone();

    let k = obj.lateral_count();
    let mut dirs: Vec<T> = obj
        .parallel_pairs
        .iter()
        .filter(|&&(a, b)| a < k && b < k)
        .map(|&(a, _)| {
            let n = obj.faces[a].outward_normal;
            let t = n.y.atan2(n.x) % T::PI();
            if t < T::zero() {
                t + T::PI()
            } else {
                t
            }
        })
        .collect();
    dirs.sort_by(|a, b| a.partial_cmp(b).expect("finite angles"));
    if let (Some(&first), Some(&last)) = (dirs.first(), dirs.last()) {
        let mut step = first + T::PI() - last;
        for w in dirs.windows(2) {
            step = step.min(w[1] - w[0]);
        }
        cfg.rotation_step = step;
    }

    let pivot = obj
        .adjacency
        .values()
        .filter(|e| (e.faces.0 < k) != (e.faces.1 < k))
        .map(|e| {
            let d = obj.faces[e.faces.0]
                .outward_normal
                .dot(obj.faces[e.faces.1].outward_normal);
            d.max(-T::one()).min(T::one()).acos()
        })
        .fold(T::infinity(), T::min);
    if pivot.is_finite() {
        cfg.pivot_step = pivot;
    }
    cfg
}
