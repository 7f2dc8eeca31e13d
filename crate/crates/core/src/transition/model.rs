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
//! The transition model and action feasibility.
//!
//! Pads are fixed to the palm. Slides and contact moves translate pads in
//! their faces. An in-hand rotation turns the hand about the vertical line
//! through the grasp centroid until the next parallel pair faces the
//! fingers, which then close onto it. A pivot tips the object about a
//! support edge parallel to the grasp axis, turning each pad about its own
//! centre.

use std::sync::Arc;

use super::action::{Action, ActionKind};
use super::config::ResolutionConfig;
use super::state::{ContactRegion, GraspState, HandFrame};
use crate::error::{Error, Result};
use crate::geometry::{FaceId, Mat3, ObjectModel, Vec2, Vec3};
use crate::scalar::Scalar;

/// An extra feasibility inequality layered over the built-in predicates.
pub trait WorkspaceConstraint<T: Scalar>: Send + Sync {
    fn name(&self) -> &str;
    fn admits(
        &self,
        obj: &ObjectModel<T>,
        from: &GraspState<T>,
        action: &Action<T>,
        to: &GraspState<T>,
    ) -> bool;
}

/// Keeps contact centres below a height above the table.
#[derive(Debug, Clone, Copy)]
pub struct MaxContactHeight<T>(pub T);

impl<T: Scalar> WorkspaceConstraint<T> for MaxContactHeight<T> {
    fn name(&self) -> &str {
        "max_contact_height"
    }

    fn admits(&self, obj: &ObjectModel<T>, _: &GraspState<T>, _: &Action<T>, to: &GraspState<T>) -> bool {
        [&to.left, &to.right]
            .iter()
            .all(|c| contact_height(obj, to, c) <= self.0 + T::feas_eps())
    }
}

/// Disallows a fixed set of primitives, e.g. pivoting on objects the arm
/// cannot tip.
#[derive(Debug, Clone)]
pub struct ForbidActions(pub Vec<ActionKind>);

impl<T: Scalar> WorkspaceConstraint<T> for ForbidActions {
    fn name(&self) -> &str {
        "forbid_actions"
    }

    fn admits(&self, _: &ObjectModel<T>, _: &GraspState<T>, a: &Action<T>, _: &GraspState<T>) -> bool {
        !self.0.contains(&a.kind)
    }
}

pub type Constraints<T> = Vec<Arc<dyn WorkspaceConstraint<T>>>;

/// Height of a contact centre above the support plane.
pub fn contact_height<T: Scalar>(obj: &ObjectModel<T>, s: &GraspState<T>, c: &ContactRegion<T>) -> T {
    let support = &obj.faces[s.support_face];
    -support.plane_offset(obj.faces[c.face].to_object(c.center))
}

/// Angle from `from` to `to` about `axis`, in `(-pi, pi]`.
fn signed_angle<T: Scalar>(from: Vec3<T>, to: Vec3<T>, axis: Vec3<T>) -> T {
    from.cross(to).dot(axis).atan2(from.dot(to))
}

/// New `(left, right, angle)` for an in-hand rotation.
pub(crate) fn rotation_target<T: Scalar>(
    obj: &ObjectModel<T>,
    s: &GraspState<T>,
    ccw: bool,
) -> Option<(FaceId, FaceId, T)> {
    let hand = s.hand(obj);
    let n_left = obj.faces[s.left.face].outward_normal;
    let eps = T::geom_eps();
    let mut best: Option<(FaceId, FaceId, T)> = None;
    for f in &obj.faces {
        if f.id == s.left.face || f.outward_normal.dot(hand.up).abs() > eps {
            continue;
        }
        let Some(&(a, b)) = obj
            .parallel_pairs
            .iter()
            .find(|&&(a, b)| a == f.id || b == f.id)
        else {
            continue;
        };
        let partner = if a == f.id { b } else { a };
        let mut phi = signed_angle(n_left, f.outward_normal, hand.up);
        if !ccw {
            phi = -phi;
            if phi <= -T::PI() + eps {
                phi = T::PI();
            }
        }
        if phi > eps && best.is_none_or(|(_, _, t)| phi < t) {
            best = Some((f.id, partner, phi));
        }
    }
    best
}

/// Face to tip onto and the tipping angle.
pub(crate) fn pivot_target<T: Scalar>(obj: &ObjectModel<T>, s: &GraspState<T>) -> Option<(FaceId, T)> {
    let hand = s.hand(obj);
    let n_support = obj.faces[s.support_face].outward_normal;
    let eps = T::geom_eps();
    let mut found = None;
    for nb in obj.neighbors(s.support_face) {
        if nb == s.left.face || nb == s.right.face {
            continue;
        }
        let Some(edge) = obj.shared_edge(s.support_face, nb) else {
            continue;
        };
        if (edge.direction().dot(hand.grasp).abs() - T::one()).abs() > eps {
            continue;
        }
        let n_nb = obj.faces[nb].outward_normal;
        let theta = n_support.dot(n_nb).max(-T::one()).min(T::one()).acos();
        // tipping turns the object by +theta about the grasp axis
        let turned = Mat3::axis_angle(hand.grasp, theta).mul_vec(n_nb);
        if turned.dist(n_support) <= T::feas_eps() {
            found = Some((nb, theta));
            break;
        }
    }
    found
}

fn check_fits<T: Scalar>(obj: &ObjectModel<T>, a: &Action<T>, s: &GraspState<T>) -> Result<()> {
    for (name, c) in [("left", &s.left), ("right", &s.right)] {
        if !c.fits(obj) {
            return Err(Error::infeasible(
                a,
                format!("{name} contact would leave face {}", c.face),
            ));
        }
    }
    Ok(())
}

fn with_support<T: Scalar>(
    obj: &ObjectModel<T>,
    left: ContactRegion<T>,
    right: ContactRegion<T>,
    support_face: FaceId,
) -> GraspState<T> {
    let hand = HandFrame::new(obj, support_face, left.face);
    GraspState {
        grasp_pair: obj
            .pair_index(left.face, right.face)
            .expect("grasped faces are a parallel pair"),
        support_face,
        horizontal_axis: [
            hand.slide_axis(obj, left.face),
            hand.slide_axis(obj, right.face),
        ],
        left: left.snapped(),
        right: right.snapped(),
    }
}

/// Apply `a` to `s`. Fails when the pads would leave their faces or the
/// primitive has no geometric realisation in this state.
pub fn transition<T: Scalar>(
    s: &GraspState<T>,
    a: &Action<T>,
    obj: &ObjectModel<T>,
) -> Result<GraspState<T>> {
    use ActionKind::*;
    if !(a.magnitude > T::zero()) || !a.magnitude.is_finite() {
        return Err(Error::infeasible(a, "magnitude must be positive"));
    }
    let hand = s.hand(obj);
    let (mut left, mut right) = (s.left, s.right);
    let next = match a.kind {
        SlideLeftUp | SlideLeftDown | SlideRightUp | SlideRightDown => {
            let sign = if matches!(a.kind, SlideLeftUp | SlideRightUp) {
                T::one()
            } else {
                -T::one()
            };
            let (c, k) = if matches!(a.kind, SlideLeftUp | SlideLeftDown) {
                (&mut left, 0)
            } else {
                (&mut right, 1)
            };
            c.center += s.horizontal_axis[k] * (sign * a.magnitude);
            with_support(obj, left, right, s.support_face)
        }
        MoveContactUp | MoveContactDown => {
            let sign = if a.kind == MoveContactUp { T::one() } else { -T::one() };
            for c in [&mut left, &mut right] {
                c.center += hand.up_axis(obj, c.face) * (sign * a.magnitude);
            }
            with_support(obj, left, right, s.support_face)
        }
        RotateCW | RotateCCW => {
            let ccw = a.kind == RotateCCW;
            let (new_left, new_right, theta) = rotation_target(obj, s, ccw)
                .ok_or_else(|| Error::infeasible(a, "no other parallel pair around the vertical"))?;
            if (theta - a.magnitude).abs() > T::feas_eps() {
                return Err(Error::infeasible(
                    a,
                    format!("rotation step must be {theta} here"),
                ));
            }
            let angle = if ccw { theta } else { -theta };
            let (l, r) = rotate_contacts(obj, s, &hand, angle, new_left, new_right);
            with_support(obj, l, r, s.support_face)
        }
        Pivot => {
            let (nb, theta) =
                pivot_target(obj, s).ok_or_else(|| Error::infeasible(a, "no pivot edge parallel to the grasp axis"))?;
            if (theta - a.magnitude).abs() > T::feas_eps() {
                return Err(Error::infeasible(a, format!("pivot step must be {theta} here")));
            }
            left.orientation = left.orientation + theta;
            right.orientation = right.orientation - theta;
            with_support(obj, left, right, nb)
        }
    };
    check_fits(obj, a, &next)?;
    Ok(next)
}

/// Carry both pads through a hand rotation of `angle` about the vertical
/// line through the grasp centroid, then close them onto the new faces.
/// Works in the horizontal plane spanned by the old left normal and
/// `up x normal`.
fn rotate_contacts<T: Scalar>(
    obj: &ObjectModel<T>,
    s: &GraspState<T>,
    hand: &HandFrame<T>,
    angle: T,
    new_left: FaceId,
    new_right: FaceId,
) -> (ContactRegion<T>, ContactRegion<T>) {
    let e1 = obj.faces[s.left.face].outward_normal;
    let e2 = hand.up.cross(e1);
    let flat = |v: Vec3<T>| Vec2::new(v.dot(e1), v.dot(e2));

    // (horizontal position, height, pad angle relative to the slide axis)
    let lift = |c: &ContactRegion<T>| {
        let f = &obj.faces[c.face];
        let h = hand.slide_axis(obj, c.face);
        let w = hand.up_axis(obj, c.face);
        let pos = flat(f.origin()) + flat(hand.up.cross(f.outward_normal)) * c.center.dot(h);
        let height = f.origin().dot(hand.up) + c.center.dot(w);
        (pos, height, c.orientation - h.angle())
    };
    let place = |c: &ContactRegion<T>, face: FaceId, pos: Vec2<T>, height: T, rel: T| {
        let f = &obj.faces[face];
        let h = hand.slide_axis(obj, face);
        let w = hand.up_axis(obj, face);
        let s_new = (pos - flat(f.origin())).dot(flat(hand.up.cross(f.outward_normal)));
        let z_new = height - f.origin().dot(hand.up);
        ContactRegion {
            face,
            center: h * s_new + w * z_new,
            orientation: rel + h.angle(),
            ..*c
        }
    };

    let (pl, hl, rl) = lift(&s.left);
    let (pr, hr, rr) = lift(&s.right);
    let g = (pl + pr) * T::half();
    let turn = |p: Vec2<T>| g + (p - g).rotate(angle);
    (
        place(&s.left, new_left, turn(pl), hl, rl),
        place(&s.right, new_right, turn(pr), hr, rr),
    )
}

/// Candidate primitive of `kind` in state `s`, with geometry-derived
/// magnitude, or `None` when it has no realisation here.
pub fn candidate_action<T: Scalar>(
    s: &GraspState<T>,
    kind: ActionKind,
    obj: &ObjectModel<T>,
    cfg: &ResolutionConfig<T>,
) -> Option<Action<T>> {
    let lever = obj.pair_width(s.grasp_pair) * T::half();
    let zero = T::zero();
    match kind {
        k if k.is_slide() => Some(Action::new(k, cfg.slide_step, zero)),
        k if k.is_move() => Some(Action::new(k, cfg.z_step, zero)),
        k if k.is_rotate() => rotation_target(obj, s, k == ActionKind::RotateCCW)
            .map(|(_, _, theta)| Action::new(k, theta, lever)),
        _ => pivot_target(obj, s).map(|(_, theta)| Action::new(kind, theta, lever)),
    }
}

/// Built-in feasibility predicates for a computed successor.
fn admissible<T: Scalar>(
    obj: &ObjectModel<T>,
    s: &GraspState<T>,
    a: &Action<T>,
    next: &GraspState<T>,
    cfg: &ResolutionConfig<T>,
) -> bool {
    let eps = T::feas_eps();
    let w_new = obj.pair_width(next.grasp_pair);
    if w_new < cfg.min_grasp_width - eps || w_new > cfg.max_grasp_width + eps {
        return false;
    }
    if a.kind.is_rotate() {
        let w_old = obj.pair_width(s.grasp_pair);
        if w_old.max(w_new) > cfg.max_width_ratio * w_old.min(w_new) + eps {
            return false;
        }
    }
    if a.kind.is_move() || a.kind == ActionKind::Pivot {
        // the object must rest on a face perpendicular to the grip
        let hand = s.hand(obj);
        if hand.up.dot(hand.grasp).abs() > T::geom_eps() {
            return false;
        }
    }
    if let Some(limit) = cfg.max_contact_height {
        if !MaxContactHeight(limit).admits(obj, s, a, next) {
            return false;
        }
    }
    true
}

/// Feasible successors in `ActionKind::ALL` order.
pub fn successors<T: Scalar>(
    s: &GraspState<T>,
    obj: &ObjectModel<T>,
    cfg: &ResolutionConfig<T>,
    extra: &[Arc<dyn WorkspaceConstraint<T>>],
) -> Vec<(Action<T>, GraspState<T>)> {
    ActionKind::ALL
        .iter()
        .filter_map(|&kind| {
            let a = candidate_action(s, kind, obj, cfg)?;
            let next = transition(s, &a, obj).ok()?;
            (admissible(obj, s, &a, &next, cfg) && extra.iter().all(|c| c.admits(obj, s, &a, &next)))
                .then_some((a, next))
        })
        .collect()
}

/// Feasible primitives in state `s`.
pub fn valid_actions<T: Scalar>(
    s: &GraspState<T>,
    obj: &ObjectModel<T>,
    cfg: &ResolutionConfig<T>,
) -> Vec<Action<T>> {
    successors(s, obj, cfg, &[]).into_iter().map(|(a, _)| a).collect()
}
