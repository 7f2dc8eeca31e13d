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
//! Best-first search over grasp states.

use std::cmp::Ordering;
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{FaceId, ObjectModel};
use crate::heuristic::{total_heuristic, HeuristicCache};
use crate::scalar::Scalar;
use crate::transition::{
    derive_resolutions, region_outside_goal, successors, transition, Action, ActionKind,
    Constraints, ContactRegion, GoalSet, GraspState, ResolutionConfig,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(deserialize = "T: Scalar + Deserialize<'de>", serialize = "T: Serialize"))]
pub struct CostConfig<T> {
    /// Cost per metre of sliding, so one slide step costs one step length
    /// when this is 1.
    pub slide_scale: T,
    pub scale_z: T,
    pub scale_rot: T,
    pub scale_pivot: T,
    /// Weight of accumulated action cost against the area left outside goals.
    pub w: T,
    /// Heuristic scale.
    pub lambda: T,
    /// Node expansions before falling back to the best state seen.
    pub budget: usize,
    /// Goal tolerance on the summed corner distance. Never below a few
    /// lattice quanta, since pads drift by up to half a quantum per step.
    pub epsilon: T,
}

impl<T: Scalar> Default for CostConfig<T> {
    fn default() -> Self {
        CostConfig {
            slide_scale: T::one(),
            scale_z: T::of(2.0),
            scale_rot: T::of(3.0),
            scale_pivot: T::of(5.0),
            w: T::of(1e-3),
            lambda: T::of(0.125),
            budget: 5_000_000,
            epsilon: T::of(1e-9).max(T::of(64.0) * T::snap_quantum()),
        }
    }
}

impl<T: Scalar> CostConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let bad = |name: &str, v: T| Error::InvalidInput(format!("cost.{name} = {v:?} is out of range"));
        if !(self.slide_scale > T::zero()) {
            return Err(bad("slide_scale", self.slide_scale));
        }
        for (name, v) in [
            ("scale_z", self.scale_z),
            ("scale_rot", self.scale_rot),
            ("scale_pivot", self.scale_pivot),
        ] {
            if !(v >= self.slide_scale) || !v.is_finite() {
                return Err(bad(name, v));
            }
        }
        if !(self.w >= T::zero()) || !self.w.is_finite() {
            return Err(bad("w", self.w));
        }
        if !(self.lambda >= T::zero()) || !self.lambda.is_finite() {
            return Err(bad("lambda", self.lambda));
        }
        if !(self.epsilon >= T::zero()) {
            return Err(bad("epsilon", self.epsilon));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(deserialize = "T: Scalar + Deserialize<'de>", serialize = "T: Serialize"))]
pub struct PlannerConfig<T> {
    pub resolution: ResolutionConfig<T>,
    pub cost: CostConfig<T>,
}

impl<T: Scalar> Default for PlannerConfig<T> {
    fn default() -> Self {
        PlannerConfig { resolution: ResolutionConfig::default(), cost: CostConfig::default() }
    }
}

impl<T: Scalar> PlannerConfig<T> {
    pub fn validate(&self) -> Result<()> {
        self.resolution.validate()?;
        self.cost.validate()
    }
}

pub fn action_cost<T: Scalar>(a: &Action<T>, cfg: &CostConfig<T>) -> T {
    match a.kind {
        k if k.is_slide() => cfg.slide_scale * a.magnitude,
        k if k.is_move() => cfg.scale_z * a.magnitude,
        k if k.is_rotate() => cfg.scale_rot * a.magnitude * a.lever_arm,
        _ => cfg.scale_pivot * a.magnitude * a.lever_arm,
    }
}

#[derive(Debug, Clone)]
pub struct SearchNode<T> {
    pub state: GraspState<T>,
    pub g: T,
    pub h: T,
    pub parent: Option<usize>,
    pub action: Option<Action<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlanStatus {
    ExactGoal,
    BestEffort,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar + Deserialize<'de>", serialize = "T: Scalar + Serialize"))]
pub struct Plan<T> {
    pub status: PlanStatus,
    pub actions: Vec<Action<T>>,
    pub states: Vec<GraspState<T>>,
    pub step_costs: Vec<T>,
    pub total_action_cost: T,
    pub terminal_objective: T,
    pub objective: T,
    pub expansions: usize,
    /// Expanded edges along which `g + lambda * h` decreased.
    pub inconsistent_edges: usize,
}

impl<T: Scalar> Plan<T> {
    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn final_state(&self) -> &GraspState<T> {
        self.states.last().expect("a plan always holds its start state")
    }
}

/// Hashable identity of a state. Centres are exact lattice indices;
/// orientations are reduced modulo the pad's rotational symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct StateKey {
    faces: (FaceId, FaceId),
    support: FaceId,
    pair: usize,
    centers: [i64; 4],
    orientation: [i64; 2],
}

const ORIENTATION_BITS: f64 = (1u64 << 24) as f64;

fn orientation_key<T: Scalar>(c: &ContactRegion<T>) -> i64 {
    let square = (c.pad_width - c.pad_height).abs() <= T::geom_eps();
    let period = if square { std::f64::consts::FRAC_PI_2 } else { std::f64::consts::PI };
    let n = (period * ORIENTATION_BITS).round() as i64;
    let k = (c.orientation.to_f64_lossy() * ORIENTATION_BITS).round() as i64;
    k.rem_euclid(n)
}

fn state_key<T: Scalar>(s: &GraspState<T>) -> StateKey {
    let q = T::snap_quantum().to_f64_lossy();
    let idx = |v: T| (v.to_f64_lossy() / q).round() as i64;
    StateKey {
        faces: (s.left.face, s.right.face),
        support: s.support_face,
        pair: s.grasp_pair,
        centers: [
            idx(s.left.center.x),
            idx(s.left.center.y),
            idx(s.right.center.x),
            idx(s.right.center.y),
        ],
        orientation: [orientation_key(&s.left), orientation_key(&s.right)],
    }
}

struct Open<T> {
    f: T,
    seq: u64,
    node: usize,
}

impl<T: Scalar> PartialEq for Open<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for Open<T> {}

impl<T: Scalar> PartialOrd for Open<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for Open<T> {
    // reversed: BinaryHeap pops the smallest f, then the earliest push
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .partial_cmp(&self.f)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn cost_tol<T: Scalar>(g: T) -> T {
    T::epsilon() * T::of(64.0) * g.abs().max(T::one())
}

fn validate_start<T: Scalar>(obj: &ObjectModel<T>, s0: &GraspState<T>) -> Result<()> {
    s0.validate(obj).map_err(|e| match e {
        Error::InvalidStart(_) => e,
        other => Error::InvalidStart(other.to_string()),
    })
}

/// Search for a primitive sequence taking both pads into `goals`.
pub fn plan<T: Scalar>(
    obj: &ObjectModel<T>,
    s0: &GraspState<T>,
    goals: &GoalSet<T>,
    cfg: &PlannerConfig<T>,
) -> Result<Plan<T>> {
    plan_with_constraints(obj, s0, goals, cfg, &Vec::new())
}

/// [`plan`] with additional workspace constraints.
pub fn plan_with_constraints<T: Scalar>(
    obj: &ObjectModel<T>,
    s0: &GraspState<T>,
    goals: &GoalSet<T>,
    cfg: &PlannerConfig<T>,
    constraints: &Constraints<T>,
) -> Result<Plan<T>> {
    if goals.is_empty() {
        return Err(Error::InvalidInput("goal set is empty".into()));
    }
    cfg.validate()?;
    validate_start(obj, s0)?;
    let res = derive_resolutions(obj, &cfg.resolution);
    let cache = HeuristicCache::new(obj, goals);
    search(obj, s0, goals, &res, &cfg.cost, constraints, &cache)
}

fn search<T: Scalar>(
    obj: &ObjectModel<T>,
    s0: &GraspState<T>,
    goals: &GoalSet<T>,
    res: &ResolutionConfig<T>,
    cost: &CostConfig<T>,
    constraints: &Constraints<T>,
    cache: &HeuristicCache<T>,
) -> Result<Plan<T>> {
    let mut nodes = vec![SearchNode {
        state: *s0,
        g: T::zero(),
        h: total_heuristic(s0, cache)?,
        parent: None,
        action: None,
    }];
    let mut best_g: HashMap<StateKey, T> = HashMap::new();
    best_g.insert(state_key(s0), T::zero());
    let mut open = BinaryHeap::new();
    let mut seq = 0u64;
    open.push(Open { f: cost.lambda * nodes[0].h, seq, node: 0 });

    let mut expansions = 0usize;
    let mut inconsistent = 0usize;
    let mut fallback: Option<(T, usize)> = None;

    while let Some(Open { node: id, .. }) = open.pop() {
        let (state, g, h) = (nodes[id].state, nodes[id].g, nodes[id].h);
        if g > best_g[&state_key(&state)] + cost_tol(g) {
            continue;
        }
        if h <= cost.epsilon {
            return finish(obj, goals, cost, &nodes, id, PlanStatus::ExactGoal, expansions, inconsistent);
        }
        if expansions >= cost.budget {
            break;
        }
        expansions += 1;

        let score = region_outside_goal(&state, goals)? + cost.w * g;
        if fallback.is_none_or(|(best, _)| score < best) {
            fallback = Some((score, id));
        }

        let f = g + cost.lambda * h;
        for (a, next) in successors(&state, obj, res, constraints) {
            let g2 = g + action_cost(&a, cost);
            let key = state_key(&next);
            match best_g.entry(key) {
                Entry::Occupied(mut e) => {
                    if !(g2 < *e.get() - cost_tol(g2)) {
                        continue;
                    }
                    e.insert(g2);
                }
                Entry::Vacant(e) => {
                    e.insert(g2);
                }
            }
            let h2 = total_heuristic(&next, cache)?;
            let f2 = g2 + cost.lambda * h2;
            if f2 + cost_tol(f2) < f {
                inconsistent += 1;
            }
            nodes.push(SearchNode { state: next, g: g2, h: h2, parent: Some(id), action: Some(a) });
            seq += 1;
            open.push(Open { f: f2, seq, node: nodes.len() - 1 });
        }
    }

    let best = fallback.map_or(0, |(_, id)| id);
    let status = if best == 0 { PlanStatus::Failed } else { PlanStatus::BestEffort };
    finish(obj, goals, cost, &nodes, best, status, expansions, inconsistent)
}

#[allow(clippy::too_many_arguments)]
fn finish<T: Scalar>(
    obj: &ObjectModel<T>,
    goals: &GoalSet<T>,
    cost: &CostConfig<T>,
    nodes: &[SearchNode<T>],
    last: usize,
    status: PlanStatus,
    expansions: usize,
    inconsistent_edges: usize,
) -> Result<Plan<T>> {
    let mut chain = vec![last];
    while let Some(p) = nodes[*chain.last().expect("non-empty")].parent {
        chain.push(p);
    }
    chain.reverse();
    let states: Vec<_> = chain.iter().map(|&i| nodes[i].state).collect();
    let actions: Vec<_> = chain.iter().filter_map(|&i| nodes[i].action).collect();
    let step_costs: Vec<_> = actions.iter().map(|a| action_cost(a, cost)).collect();
    let total = step_costs.iter().fold(T::zero(), |acc, &c| acc + c);
    let terminal = region_outside_goal(states.last().expect("non-empty"), goals)?;
    debug_assert!(states.iter().all(|s| s.validate(obj).is_ok()));
    Ok(Plan {
        status,
        actions,
        states,
        step_costs,
        total_action_cost: total,
        terminal_objective: terminal,
        objective: terminal + cost.w * total,
        expansions,
        inconsistent_edges,
    })
}

/// Replay `plan` and return the area left outside goals plus `w` times the
/// summed action cost.
pub fn evaluate<T: Scalar>(
    plan: &Plan<T>,
    obj: &ObjectModel<T>,
    goals: &GoalSet<T>,
    cost: &CostConfig<T>,
) -> Result<T> {
    let corrupted = |msg: String| Error::CorruptedPlan(msg);
    let first = plan
        .states
        .first()
        .ok_or_else(|| corrupted("plan has no start state".into()))?;
    if plan.states.len() != plan.actions.len() + 1 {
        return Err(corrupted(format!(
            "{} actions but {} states",
            plan.actions.len(),
            plan.states.len()
        )));
    }
    first
        .validate(obj)
        .map_err(|e| corrupted(format!("start state: {e}")))?;
    let mut s = *first;
    let mut total = T::zero();
    for (t, a) in plan.actions.iter().enumerate() {
        s = transition(&s, a, obj).map_err(|e| corrupted(format!("step {}: {e}", t + 1)))?;
        if s != plan.states[t + 1] {
            return Err(corrupted(format!("step {} does not reproduce the recorded state", t + 1)));
        }
        total = total + action_cost(a, cost);
    }
    Ok(region_outside_goal(&s, goals)? + cost.w * total)
}

/// Kinds in a plan, in order.
pub fn action_kinds<T: Scalar>(plan: &Plan<T>) -> Vec<ActionKind> {
    plan.actions.iter().map(|a| a.kind).collect()
}
