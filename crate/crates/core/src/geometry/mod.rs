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
//! Convex-polygon primitives, prismatic object models and surface unfolding.

pub mod polygon;
pub mod prism;
pub mod unfold;
pub mod vector;

pub use polygon::{
    convex_intersection, point_to_polygon_distance, polygon_area, rectangle_corners,
    ConvexPolygon2,
};
pub use prism::{build_prism, Face, FaceId, ObjectModel, SharedEdge};
pub use unfold::{unfold, Placement, UnfoldedMap};
pub use vector::{Mat3, Point2, Point3, RigidTransform3, Vec2, Vec3};
