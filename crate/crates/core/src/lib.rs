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
#![allow(clippy::neg_cmp_op_on_partial_ord)]
//! Region-based within-hand manipulation planning.
//!
//! Given a convex prism, an initial pair of finger contacts and goal regions
//! on the object's faces, [`planner::plan`] searches the nine manipulation
//! primitives (slides, in-hand rotations, contact moves against the table,
//! and pivots) for a sequence that brings both pads into goal regions.
//! [`kinematics`] turns pivots and contact moves into end-effector waypoints
//! and [`bench`] replays plans and scores them.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! at the crate root fix it to `f64`.

pub mod bench;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod heuristic;
pub mod io;
pub mod kinematics;
pub mod planner;
pub mod scalar;
pub mod transition;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Vec2 = geometry::Vec2<f64>;
pub type Vec3 = geometry::Vec3<f64>;
pub type RigidTransform3 = geometry::RigidTransform3<f64>;
pub type ConvexPolygon2 = geometry::ConvexPolygon2<f64>;
pub type Face = geometry::Face<f64>;
pub type ObjectModel = geometry::ObjectModel<f64>;
pub type UnfoldedMap = geometry::UnfoldedMap<f64>;
pub type ContactRegion = transition::ContactRegion<f64>;
pub type GraspState = transition::GraspState<f64>;
pub type Action = transition::Action<f64>;
pub type ResolutionConfig = transition::ResolutionConfig<f64>;
pub type GoalRegion = transition::GoalRegion<f64>;
pub type GoalSet = transition::GoalSet<f64>;
pub type HeuristicCache = heuristic::HeuristicCache<f64>;
pub type CostConfig = planner::CostConfig<f64>;
pub type PlannerConfig = planner::PlannerConfig<f64>;
pub type Plan = planner::Plan<f64>;
pub type DhRow = kinematics::DhRow<f64>;
pub type PivotChain = kinematics::PivotChain<f64>;
pub type Waypoint = kinematics::Waypoint<f64>;

pub type ConvexPolygon2F32 = geometry::ConvexPolygon2<f32>;
pub type ObjectModelF32 = geometry::ObjectModel<f32>;
pub type GraspStateF32 = transition::GraspState<f32>;
pub type PivotChainF32 = kinematics::PivotChain<f32>;
