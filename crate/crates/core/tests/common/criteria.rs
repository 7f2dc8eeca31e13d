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
//! Measurement routines behind the geometry, heuristic and kinematics
//! checks. Each returns worst-case figures; callers apply the thresholds.

use std::time::Instant;

use inhand::geometry::{convex_intersection, point_to_polygon_distance, FaceId};
use inhand::heuristic::{corner_sum, finger_heuristic, total_heuristic, HeuristicCache};
use inhand::kinematics::{chain_forward, pivot_trajectory, stage_chain, PivotStage};
use inhand::{ConvexPolygon2, ContactRegion, GoalRegion, GoalSet, GraspState, PivotChain, RigidTransform3};

use super::transition::face_outline;
use super::*;

#[derive(Debug, Default)]
pub struct GeometryStats {
    pub polygons: usize,
    pub max_commute_err: f64,
    pub lipschitz_violations: usize,
    pub max_isometry_err: f64,
    pub max_hinge_err: f64,
    pub improper_placements: usize,
    pub seconds: f64,
}

fn signed_area(p: &[[f64; 2]]) -> f64 {
    (0..p.len())
        .map(|i| {
            let (a, b) = (p[i], p[(i + 1) % p.len()]);
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
        / 2.0
}

pub fn geometry_suite(n: usize, seed: u64) -> GeometryStats {
    let t0 = Instant::now();
    let mut st = GeometryStats { polygons: n, ..Default::default() };
    let mut r = rng(seed);
    let polys: Vec<ConvexPolygon2> = (0..n).map(|_| random_convex(&mut r)).collect();
    for i in 0..n {
        let (a, b) = (&polys[i], &polys[(i * 7 + 1) % n]);
        let ab = convex_intersection(a, b).map_or(0.0, |p| p.area());
        let ba = convex_intersection(b, a).map_or(0.0, |p| p.area());
        st.max_commute_err = st.max_commute_err.max((ab - ba).abs());
        let p = Vec2::new(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
        let q = Vec2::new(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
        let (dp, dq) = (point_to_polygon_distance(p, a), point_to_polygon_distance(q, a));
        if (dp - dq).abs() > p.dist(q) + 1e-12 {
            st.lipschitz_violations += 1;
        }
    }
    for name in OBJECTS {
        let obj = object(name);
        for base in 0..obj.faces.len() {
            let map = unfold(&obj, base);
            for (&f, img) in &map.unfolded_polygons {
                let (orig, img) = (raw(&obj.faces[f].polygon), raw(img));
                for i in 0..orig.len() {
                    for j in 0..orig.len() {
                        let d0 = ((orig[i][0] - orig[j][0]).powi(2) + (orig[i][1] - orig[j][1]).powi(2)).sqrt();
                        let d1 = ((img[i][0] - img[j][0]).powi(2) + (img[i][1] - img[j][1]).powi(2)).sqrt();
                        st.max_isometry_err = st.max_isometry_err.max((d0 - d1).abs());
                    }
                }
                if (signed_area(&orig) - signed_area(&img)).abs() > 1e-12 {
                    st.improper_placements += 1;
                }
            }
            for (&child, &parent) in &map.parents {
                let e = obj.shared_edge(child, parent).expect("tree edges are shared edges");
                let (pc, pp) = (e.endpoints_in(child).unwrap(), e.endpoints_in(parent).unwrap());
                for k in 0..2 {
                    let a = map.map_point(child, pc[k]).unwrap();
                    let b = map.map_point(parent, pp[k]).unwrap();
                    st.max_hinge_err = st.max_hinge_err.max(a.dist(b));
                }
            }
        }
    }
    st.seconds = t0.elapsed().as_secs_f64();
    st
}

// ---- heuristic --------------------------------------------------------

/// Goal polygon of face `g` laid into the plane of face `base` by turning
/// it about their common edge. `None` unless the faces share an edge.
pub fn hinge_image(frames: &[Frame], outlines: &[Vec<[f64; 2]>], base: FaceId, g: FaceId, poly: &[[f64; 2]]) -> Option<Vec<[f64; 2]>> {
    if base == g {
        return Some(poly.to_vec());
    }
    let wb: Vec<[f64; 3]> = outlines[base].iter().map(|&p| frames[base].to_world(p)).collect();
    let wg: Vec<[f64; 3]> = outlines[g].iter().map(|&p| frames[g].to_world(p)).collect();
    let common: Vec<[f64; 3]> = wb.iter().copied().filter(|p| wg.iter().any(|q| norm(sub(*p, *q)) < 1e-9)).collect();
    if common.len() != 2 {
        return None;
    }
    let axis = sub(common[1], common[0]);
    let axis = scale(axis, 1.0 / norm(axis));
    let (ng, nb) = (frames[g].n, frames[base].n);
    let phi = dot(cross(ng, nb), axis).atan2(dot(ng, nb));
    Some(
        poly.iter()
            .map(|&p| {
                let w = frames[g].to_world(p);
                frames[base].to_local(add(common[0], rotate(sub(w, common[0]), axis, phi)))
            })
            .collect(),
    )
}

#[derive(Debug, Default)]
pub struct HeuristicStats {
    pub states: usize,
    pub max_err: f64,
    pub max_image_err: f64,
    pub hinge_compared: usize,
    pub zero_cases: usize,
    pub iff_violations: usize,
    pub additivity_err: f64,
}

fn random_goal(obj: &ObjectModel, s: &GraspState, r: &mut ChaCha8Rng) -> GoalRegion {
    let faces: Vec<FaceId> = {
        let mut v = vec![s.left.face, s.right.face];
        v.extend(obj.neighbors(s.left.face));
        v.push(r.gen_range(0..obj.faces.len()));
        v
    };
    loop {
        let f = faces[r.gen_range(0..faces.len())];
        let verts = obj.faces[f].polygon.vertices();
        let lo = verts.iter().fold(Vec2::new(f64::INFINITY, f64::INFINITY), |a, v| Vec2::new(a.x.min(v.x), a.y.min(v.y)));
        let hi = verts.iter().fold(Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY), |a, v| Vec2::new(a.x.max(v.x), a.y.max(v.y)));
        let c = Vec2::new(r.gen_range(lo.x..hi.x), r.gen_range(lo.y..hi.y));
        let (w, h) = (r.gen_range(0.004..0.03), r.gen_range(0.004..0.03));
        let poly = ConvexPolygon2::rectangle(c, w, h, r.gen_range(0.0..3.2)).unwrap();
        if obj.faces[f].polygon.contains_polygon(&poly, 0.0) {
            return GoalRegion { face: f, polygon: poly };
        }
    }
}

fn oracle_finger(
    c: &ContactRegion,
    images: &[(FaceId, Vec<[f64; 2]>)],
) -> f64 {
    let corners = pad_corners(c);
    images
        .iter()
        .map(|(_, img)| corners.iter().map(|&p| point_poly_dist(p, img)).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

pub fn heuristic_suite(n: usize, seed: u64) -> HeuristicStats {
    let mut st = HeuristicStats { states: n, ..Default::default() };
    let mut r = rng(seed);
    for k in 0..n {
        let name = OBJECTS[k % OBJECTS.len()];
        let obj = object(name);
        let file = object_file(name);
        let frames = prism_frames(&file.cross_section, file.height);
        let outlines: Vec<_> = (0..frames.len())
            .map(|f| face_outline(&file.cross_section, file.height, &frames, f))
            .collect();
        let s = random_state(&obj, &mut r, false);
        let mut regions: Vec<GoalRegion> = (0..r.gen_range(1..=3)).map(|_| random_goal(&obj, &s, &mut r)).collect();
        if r.gen_bool(0.4) {
            let m = if r.gen_bool(0.5) { r.gen_range(0.0..0.003) } else { -r.gen_range(0.0..0.002) };
            let around = goals_around(&s, m);
            if r.gen_bool(0.7) {
                regions.extend(around.regions);
            } else {
                regions.push(around.regions[0].clone());
            }
        }
        let goals = GoalSet::new(regions);
        let cache = HeuristicCache::new(&obj, &goals);
        let mut fingers = [0.0; 2];
        for (fi, c) in [&s.left, &s.right].into_iter().enumerate() {
            let mut images = Vec::new();
            for (m, g) in goals.regions.iter().enumerate() {
                let lib = raw(cache.goal_image(c.face, m).unwrap());
                match hinge_image(&frames, &outlines, c.face, g.face, &raw(&g.polygon)) {
                    Some(img) => {
                        st.hinge_compared += 1;
                        for (a, b) in img.iter().zip(&lib) {
                            st.max_image_err = st.max_image_err.max(((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt());
                        }
                        images.push((g.face, img));
                    }
                    None => images.push((g.face, lib)),
                }
                let want = {
                    let corners = pad_corners(c);
                    corners.iter().map(|&p| point_poly_dist(p, &images[m].1)).sum::<f64>()
                };
                st.max_err = st.max_err.max((corner_sum(c, m, &cache).unwrap() - want).abs());
            }
            let want = oracle_finger(c, &images);
            let got = finger_heuristic(c, &cache).unwrap();
            st.max_err = st.max_err.max((got - want).abs());
            fingers[fi] = got;
        }
        let h = total_heuristic(&s, &cache).unwrap();
        st.additivity_err = st.additivity_err.max((h - fingers[0] - fingers[1]).abs());
        let contained = super::admissibility::contained(&s, &goals);
        if contained {
            st.zero_cases += 1;
        }
        if (h <= 1e-9) != contained {
            st.iff_violations += 1;
        }
    }
    st
}

// ---- kinematics -------------------------------------------------------

pub type M4 = [[f64; 4]; 4];

/// Classic DH matrix written out entry by entry.
pub fn dh_matrix(theta: f64, d: f64, a: f64, alpha: f64) -> M4 {
    let (st, ct) = theta.sin_cos();
    let (sa, ca) = alpha.sin_cos();
    [
        [ct, -st * ca, st * sa, a * ct],
        [st, ct * ca, -ct * sa, a * st],
        [0.0, sa, ca, d],
        [0.0, 0.0, 0.0, 1.0],
    ]
}

pub fn mul(a: &M4, b: &M4) -> M4 {
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    m
}

/// Product of the first `rows` joints, accumulated right to left.
pub fn oracle_forward(c: &PivotChain, rows: usize) -> M4 {
    use std::f64::consts::{FRAC_PI_2, PI};
    let table = [
        dh_matrix(0.75 * PI, c.d1, 0.0, FRAC_PI_2),
        dh_matrix(c.theta_finger, 0.0, c.d2, FRAC_PI_2),
        dh_matrix(c.theta_contact - FRAC_PI_2, 0.0, c.d3, 0.0),
        dh_matrix(-FRAC_PI_2, 0.0, c.d4, PI),
        dh_matrix(c.theta_pivot, 0.0, 0.0, 0.0),
    ];
    let mut m = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]];
    for t in table[..rows].iter().rev() {
        m = mul(t, &m);
    }
    m
}

pub fn to_m4(t: &RigidTransform3) -> M4 {
    let r = t.rotation.m;
    let p = t.translation;
    [
        [r[0][0], r[0][1], r[0][2], p.x],
        [r[1][0], r[1][1], r[1][2], p.y],
        [r[2][0], r[2][1], r[2][2], p.z],
        [0.0, 0.0, 0.0, 1.0],
    ]
}

pub fn max_diff(a: &M4, b: &M4) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            d = d.max((a[i][j] - b[i][j]).abs());
        }
    }
    d
}

fn rot_angle(a: &M4, b: &M4) -> f64 {
    // angle of a^T b
    let tr: f64 = (0..3).map(|i| (0..3).map(|k| a[k][i] * b[k][i]).sum::<f64>()).sum();
    ((tr - 1.0) / 2.0).clamp(-1.0, 1.0).acos()
}

pub fn random_chain(r: &mut ChaCha8Rng) -> PivotChain {
    use std::f64::consts::PI;
    PivotChain {
        d1: r.gen_range(0.0..0.2),
        theta_finger: r.gen_range(-PI..PI),
        d2: r.gen_range(0.0..0.1),
        d3: r.gen_range(0.0..0.1),
        d4: r.gen_range(0.0..0.1),
        theta_contact: r.gen_range(-PI..PI),
        theta_pivot: r.gen_range(-0.3..0.3),
    }
}

#[derive(Debug, Default)]
pub struct KinematicsStats {
    pub chains: usize,
    pub max_forward_err: f64,
    pub max_support_drift: f64,
    pub max_support_turn: f64,
    pub max_pivot_drift: f64,
    pub max_step_turn_excess: f64,
    pub non_rotations: usize,
}

pub fn kinematics_suite(chains: usize, steps: usize, seed: u64) -> KinematicsStats {
    let mut st = KinematicsStats { chains, ..Default::default() };
    let mut r = rng(seed);
    for _ in 0..chains {
        let c = random_chain(&mut r);
        st.max_forward_err = st.max_forward_err.max(max_diff(&to_m4(&chain_forward(&c)), &oracle_forward(&c, 5)));
        let sweep = r.gen_range(0.1..std::f64::consts::FRAC_PI_2);
        for stage in [PivotStage::Tilt, PivotStage::Settle] {
            let start = if stage == PivotStage::Settle { PivotChain { theta_pivot: sweep, ..c } } else { c };
            let wps = pivot_trajectory(&start, stage, sweep, steps).unwrap();
            let mut first: Option<(M4, M4)> = None;
            let mut prev: Option<M4> = None;
            for (k, w) in wps.iter().enumerate() {
                let ck = stage_chain(&start, stage, sweep, k, steps);
                let pose = to_m4(&w.pose);
                if !w.pose.rotation.is_rotation(1e-9) {
                    st.non_rotations += 1;
                }
                let support = mul(&pose, &oracle_forward(&ck, 5));
                let pivot = mul(&pose, &oracle_forward(&ck, 4));
                if let Some((s0, p0)) = &first {
                    let drift = ((0..3).map(|i| (support[i][3] - s0[i][3]).powi(2)).sum::<f64>()).sqrt();
                    st.max_support_drift = st.max_support_drift.max(drift);
                    st.max_support_turn = st.max_support_turn.max(rot_angle(&support, s0));
                    let pd = ((0..3).map(|i| (pivot[i][3] - p0[i][3]).powi(2)).sum::<f64>()).sqrt();
                    st.max_pivot_drift = st.max_pivot_drift.max(pd);
                } else {
                    first = Some((support, pivot));
                }
                if let Some(p) = &prev {
                    st.max_step_turn_excess = st.max_step_turn_excess.max(rot_angle(p, &pose) - sweep / steps as f64);
                }
                prev = Some(pose);
            }
        }
    }
    st
}

// ---- bench and cli ----------------------------------------------------

pub fn suite_path() -> std::path::PathBuf {
    fixtures().join("suite.json")
}

pub fn fixture_tasks() -> (inhand::io::SuiteFile, Vec<inhand::io::LoadedTask>) {
    let (suite, paths) = inhand::io::load_suite(&suite_path()).unwrap();
    let tasks = paths.iter().map(|p| inhand::io::load_task(p).unwrap()).collect();
    (suite, tasks)
}

pub fn task(name: &str) -> inhand::io::LoadedTask {
    inhand::io::load_task(&fixtures().join("tasks").join(format!("{name}.json"))).unwrap()
}

/// Run the `inhand` binary; returns the exit code and stderr.
pub fn run_cli(args: &[&std::ffi::OsStr]) -> (i32, String) {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_inhand")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stderr).into_owned())
}

#[derive(Debug)]
pub struct PivotCheck {
    pub exact: bool,
    pub pivots: usize,
    pub plan_length: usize,
    /// States within `depth` steps of the start using no pivot.
    pub explored: usize,
    pub reachable_without_pivot: bool,
}

/// Plan the pivot fixture and search every pivot-free action sequence up
/// to `depth` steps for a state inside the goals.
pub fn pivot_check(depth: usize) -> PivotCheck {
    use inhand::transition::{successors, ForbidActions};
    use inhand::transition::ActionKind;
    let t = task("square_pivot");
    let inp = &t.inputs;
    let p = inhand::planner::plan(&inp.object, &inp.start, &inp.goals, &inp.config).unwrap();
    let res = inhand::transition::derive_resolutions(&inp.object, &inp.config.resolution);
    let forbid: inhand::transition::Constraints<f64> = vec![std::sync::Arc::new(ForbidActions(vec![ActionKind::Pivot]))];
    let mut seen = std::collections::HashSet::from([key(&inp.start)]);
    let mut layer = vec![inp.start];
    let mut found = super::admissibility::contained(&inp.start, &inp.goals);
    for _ in 0..depth {
        let mut next = Vec::new();
        for s in &layer {
            for (_, t) in successors(s, &inp.object, &res, &forbid) {
                if seen.insert(key(&t)) {
                    found |= super::admissibility::contained(&t, &inp.goals);
                    next.push(t);
                }
            }
        }
        layer = next;
    }
    PivotCheck {
        exact: p.status == inhand::planner::PlanStatus::ExactGoal,
        pivots: p.actions.iter().filter(|a| a.kind == ActionKind::Pivot).count(),
        plan_length: p.len(),
        explored: seen.len(),
        reachable_without_pivot: found,
    }
}
