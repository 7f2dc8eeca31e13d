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
//! Grasp-contact states, the nine-primitive action space and the
//! transition model.

pub mod action;
pub mod config;
pub mod goals;
pub mod model;
pub mod state;

pub use action::{Action, ActionKind};
pub use config::{derive_resolutions, ResolutionConfig};
pub use goals::{covered_area, overlap_ratio, region_outside_goal, GoalRegion, GoalSet};
pub use model::{
    candidate_action, contact_height, successors, transition, valid_actions, Constraints,
    ForbidActions, MaxContactHeight, WorkspaceConstraint,
};
pub use state::{ContactRegion, Finger, GraspState};
