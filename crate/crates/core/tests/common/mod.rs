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
//! Fixtures, random generators and oracles shared by the integration tests.
//! Oracles here avoid the library's own geometry helpers where possible.
#![allow(dead_code)]

pub mod admissibility;
pub mod criteria;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::path::{Path, PathBuf};

use inhand::geometry::{self, FaceId};
use inhand::io::{load_object, read_json, ObjectFile};
use inhand::transition::successors;
use inhand::{ContactRegion, GoalRegion, GoalSet, GraspState};
use inhand::{ConvexPolygon2, ObjectModel, ResolutionConfig, Vec2, Vec3};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const OBJECTS: [&str; 6] = [
    "square_prism",
    "curved_rectangle",
    "large_rectangle",
    "tall_hexagon",
    "small_rectangle",
    "short_hexagon",
];

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn object(name: &str) -> ObjectModel {
    load_object(&fixtures().join("objects").join(format!("{name}.json"))).unwrap()
}

pub fn object_file(name: &str) -> ObjectFile {
    read_json(&fixtures().join("objects").join(format!("{name}.json"))).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Convex polygon with 3..=10 vertices on a jittered ellipse.
pub fn random_convex(r: &mut ChaCha8Rng) -> ConvexPolygon2 {
    loop {
        let n = r.gen_range(3..=10);
        let c = Vec2::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
        let (ax, ay) = (r.gen_range(0.2..1.5), r.gen_range(0.2..1.5));
        let rot = r.gen_range(0.0..std::f64::consts::TAU);
        let mut angles: Vec<f64> = (0..n).map(|_| r.gen_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let pts = angles
            .iter()
            .map(|&t| c + Vec2::new(ax * t.cos(), ay * t.sin()).rotate(rot))
            .collect();
        if let Ok(p) = ConvexPolygon2::new(pts) {
            return p;
        }
    }
}

// ---- 2D oracles -------------------------------------------------------

pub fn seg_dist(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 { 0.0 } else { (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0) };
    let (qx, qy) = (a[0] + t * dx, a[1] + t * dy);
    ((p[0] - qx).powi(2) + (p[1] - qy).powi(2)).sqrt()
}

/// Inside test for a CCW convex polygon given as raw points.
pub fn inside(p: [f64; 2], poly: &[[f64; 2]], tol: f64) -> bool {
    (0..poly.len()).all(|i| {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) >= -tol
    })
}

pub fn point_poly_dist(p: [f64; 2], poly: &[[f64; 2]]) -> f64 {
    if inside(p, poly, 0.0) {
        return 0.0;
    }
    (0..poly.len())
        .map(|i| seg_dist(p, poly[i], poly[(i + 1) % poly.len()]))
        .fold(f64::INFINITY, f64::min)
}

pub fn raw(p: &ConvexPolygon2) -> Vec<[f64; 2]> {
    p.vertices().iter().map(|v| [v.x, v.y]).collect()
}

/// Corners of a pad rectangle, computed directly from its pose.
pub fn pad_corners(c: &ContactRegion) -> [[f64; 2]; 4] {
    let (s, co) = c.orientation.sin_cos();
    let (hw, hh) = (c.pad_width / 2.0, c.pad_height / 2.0);
    let pt = |a: f64, b: f64| [c.center.x + a * co - b * s, c.center.y + a * s + b * co];
    [pt(-hw, -hh), pt(hw, -hh), pt(hw, hh), pt(-hw, hh)]
}

// ---- 3D face frames from the cross-section ----------------------------

#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub origin: [f64; 3],
    pub u: [f64; 3],
    pub v: [f64; 3],
    pub n: [f64; 3],
}

pub fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}
pub fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}
pub fn scale(a: [f64; 3], k: f64) -> [f64; 3] {
    [a[0] * k, a[1] * k, a[2] * k]
}
pub fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}
pub fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}
pub fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Rodrigues rotation of `p` about unit `axis`.
pub fn rotate(p: [f64; 3], axis: [f64; 3], angle: f64) -> [f64; 3] {
    let (s, c) = angle.sin_cos();
    add(
        add(scale(p, c), scale(cross(axis, p), s)),
        scale(axis, dot(axis, p) * (1.0 - c)),
    )
}

fn centroid(cs: &[[f64; 2]]) -> [f64; 2] {
    let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for i in 0..cs.len() {
        let (p, q) = (cs[i], cs[(i + 1) % cs.len()]);
        let k = p[0] * q[1] - q[0] * p[1];
        a += k;
        cx += (p[0] + q[0]) * k;
        cy += (p[1] + q[1]) * k;
    }
    [cx / (3.0 * a), cy / (3.0 * a)]
}

/// Face frames of a right prism: lateral face i spans edge i -> i+1 with u
/// along the edge and v up; then the bottom and top caps.
pub fn prism_frames(cs: &[[f64; 2]], h: f64) -> Vec<Frame> {
    let k = cs.len();
    let mut out: Vec<Frame> = (0..k)
        .map(|i| {
            let (p, q) = (cs[i], cs[(i + 1) % k]);
            let d = [q[0] - p[0], q[1] - p[1], 0.0];
            let u = scale(d, 1.0 / norm(d));
            let v = [0.0, 0.0, 1.0];
            Frame { origin: [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0, h / 2.0], u, v, n: cross(u, v) }
        })
        .collect();
    let c = centroid(cs);
    out.push(Frame { origin: [c[0], c[1], 0.0], u: [1.0, 0.0, 0.0], v: [0.0, -1.0, 0.0], n: [0.0, 0.0, -1.0] });
    out.push(Frame { origin: [c[0], c[1], h], u: [1.0, 0.0, 0.0], v: [0.0, 1.0, 0.0], n: [0.0, 0.0, 1.0] });
    out
}

impl Frame {
    pub fn to_world(self, p: [f64; 2]) -> [f64; 3] {
        add(self.origin, add(scale(self.u, p[0]), scale(self.v, p[1])))
    }
    pub fn to_local(self, w: [f64; 3]) -> [f64; 2] {
        let d = sub(w, self.origin);
        [dot(d, self.u), dot(d, self.v)]
    }
}

pub fn frames_of(name: &str) -> Vec<Frame> {
    let f = object_file(name);
    prism_frames(&f.cross_section, f.height)
}

// ---- random states ----------------------------------------------------

/// A random valid grasp: a lateral parallel pair, a perpendicular support,
/// and pads placed uniformly where they fit.
pub fn random_state(obj: &ObjectModel, r: &mut ChaCha8Rng, square_pads: bool) -> GraspState {
    let k = obj.lateral_count();
    let pairs: Vec<(FaceId, FaceId)> =
        obj.parallel_pairs.iter().copied().filter(|&(a, b)| a < k && b < k).collect();
    loop {
        let (mut a, mut b) = pairs[r.gen_range(0..pairs.len())];
        if r.gen_bool(0.5) {
            std::mem::swap(&mut a, &mut b);
        }
        let na = obj.faces[a].outward_normal;
        let supports: Vec<FaceId> = (0..obj.faces.len())
            .filter(|&f| f != a && f != b && obj.faces[f].outward_normal.dot(na).abs() < 1e-9)
            .collect();
        if supports.is_empty() {
            continue;
        }
        let support = supports[r.gen_range(0..supports.len())];
        let (pw, ph) = if square_pads {
            (0.012, 0.012)
        } else {
            (r.gen_range(0.004..0.014), r.gen_range(0.004..0.014))
        };
        let pad = |f: FaceId, r: &mut ChaCha8Rng| {
            let verts = obj.faces[f].polygon.vertices();
            let (lo, hi) = verts.iter().fold(
                (Vec2::new(f64::INFINITY, f64::INFINITY), Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY)),
                |(lo, hi), v| (Vec2::new(lo.x.min(v.x), lo.y.min(v.y)), Vec2::new(hi.x.max(v.x), hi.y.max(v.y))),
            );
            ContactRegion {
                face: f,
                center: Vec2::new(r.gen_range(lo.x..hi.x), r.gen_range(lo.y..hi.y)),
                orientation: r.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
                pad_width: pw,
                pad_height: ph,
            }
        };
        let (l, rr) = (pad(a, r), pad(b, r));
        if let Ok(s) = GraspState::new(obj, l, rr, support) {
            return s;
        }
    }
}

// ---- exhaustive search oracles ----------------------------------------

/// Exact identity of a snapped state, with orientation reduced modulo the
/// pad's symmetry.
pub type Key = (FaceId, FaceId, FaceId, [u64; 4], [i64; 2]);

pub fn key(s: &GraspState) -> Key {
    let orient = |c: &ContactRegion| {
        let period = if (c.pad_width - c.pad_height).abs() < 1e-12 {
            std::f64::consts::FRAC_PI_2
        } else {
            std::f64::consts::PI
        };
        let n = (period * 1e7).round() as i64;
        ((c.orientation * 1e7).round() as i64).rem_euclid(n)
    };
    let z = |x: f64| (x + 0.0).to_bits();
    (
        s.left.face,
        s.right.face,
        s.support_face,
        [z(s.left.center.x), z(s.left.center.y), z(s.right.center.x), z(s.right.center.y)],
        [orient(&s.left), orient(&s.right)],
    )
}

pub struct StateGraph {
    pub states: Vec<GraspState>,
    pub index: HashMap<Key, usize>,
    /// (from, to, action cost)
    pub edges: Vec<(usize, usize, f64)>,
}

/// Breadth-first enumeration of every state reachable from `s0`; `None`
/// if more than `cap` states are found.
pub fn enumerate(
    obj: &ObjectModel,
    s0: &GraspState,
    res: &ResolutionConfig,
    cost: &inhand::CostConfig,
    cap: usize,
) -> Option<StateGraph> {
    let mut g = StateGraph { states: vec![*s0], index: HashMap::new(), edges: Vec::new() };
    g.index.insert(key(s0), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let s = g.states[i];
        for (a, t) in successors(&s, obj, res, &Vec::new()) {
            let k = key(&t);
            let j = match g.index.get(&k) {
                Some(&j) => j,
                None => {
                    if g.states.len() >= cap {
                        return None;
                    }
                    g.states.push(t);
                    g.index.insert(k, g.states.len() - 1);
                    queue.push_back(g.states.len() - 1);
                    g.states.len() - 1
                }
            };
            g.edges.push((i, j, inhand::planner::action_cost(&a, cost)));
        }
    }
    Some(g)
}

/// Dijkstra over `g` from `sources` following edges forward (or backward
/// when `reverse`).
pub fn dijkstra(g: &StateGraph, sources: &[usize], reverse: bool) -> Vec<f64> {
    let n = g.states.len();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(a, b, c) in &g.edges {
        if reverse {
            adj[b].push((a, c));
        } else {
            adj[a].push((b, c));
        }
    }
    let mut dist = vec![f64::INFINITY; n];
    let mut heap: BTreeMap<(u64, usize), ()> = BTreeMap::new();
    for &s in sources {
        dist[s] = 0.0;
        heap.insert((0f64.to_bits(), s), ());
    }
    while let Some(((db, u), ())) = heap.pop_first() {
        let d = f64::from_bits(db);
        if d > dist[u] {
            continue;
        }
        for &(v, c) in &adj[u] {
            let nd = d + c;
            if nd < dist[v] {
                dist[v] = nd;
                heap.insert((nd.to_bits(), v), ());
            }
        }
    }
    dist
}

/// Goal rectangles slightly larger than the pads of `s`, so `s` is a goal.
pub fn goals_around(s: &GraspState, margin: f64) -> GoalSet {
    let g = |c: &ContactRegion| GoalRegion {
        face: c.face,
        polygon: ConvexPolygon2::rectangle(
            c.center,
            c.pad_width + 2.0 * margin,
            c.pad_height + 2.0 * margin,
            c.orientation,
        )
        .unwrap(),
    };
    GoalSet::new(vec![g(&s.left), g(&s.right)])
}

pub fn vec3(a: [f64; 3]) -> Vec3 {
    Vec3::new(a[0], a[1], a[2])
}

pub fn unfold(obj: &ObjectModel, base: FaceId) -> inhand::UnfoldedMap {
    geometry::unfold(obj, base).unwrap()
}
