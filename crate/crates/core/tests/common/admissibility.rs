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
//! Small exhaustively enumerable instances for optimality checks.

use inhand::heuristic::{total_heuristic, HeuristicCache};
use inhand::planner::{plan, PlanStatus};
use inhand::transition::derive_resolutions;
use inhand::{ContactRegion, GoalSet, GraspState, PlannerConfig, Vec2};

use super::*;

pub struct Instance {
    pub name: String,
    pub obj: ObjectModel,
    pub start: GraspState,
    pub goals: GoalSet,
    pub config: PlannerConfig,
}

/// Every pad corner inside one goal on the pad's face.
pub fn contained(s: &GraspState, goals: &GoalSet) -> bool {
    [&s.left, &s.right].iter().all(|c| {
        let corners = pad_corners(c);
        goals
            .regions
            .iter()
            .filter(|g| g.face == c.face)
            .any(|g| corners.iter().all(|&p| inside(p, &raw(&g.polygon), 1e-9)))
    })
}

pub fn coarse_config(step: f64) -> PlannerConfig {
    let mut cfg = PlannerConfig::default();
    cfg.resolution.slide_step = step;
    cfg.resolution.z_step = step;
    cfg
}

/// Centred start on a parallel pair, standing on a face perpendicular to it.
fn aligned_start(obj: &ObjectModel, pair: usize, pad: (f64, f64), flip: bool) -> Option<GraspState> {
    let (mut a, mut b) = obj.parallel_pairs[pair];
    if flip {
        std::mem::swap(&mut a, &mut b);
    }
    let c = |f| ContactRegion { face: f, center: Vec2::new(0.0, 0.0), orientation: 0.0, pad_width: pad.0, pad_height: pad.1 };
    (0..obj.faces.len()).find_map(|sup| GraspState::new(obj, c(a), c(b), sup).ok())
}

/// Four instances per fixture object. Each uses the finest step and pad
/// whose reachable set stays under `cap`; the goal is built around a state
/// found by a seeded random walk, so every instance is solvable.
pub fn small_instances(cap: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    for (i, name) in OBJECTS.iter().enumerate() {
        let obj = object(name);
        for j in 0..4u64 {
            let mut r = rng(1000 + 10 * i as u64 + j);
            let pair = (j as usize) % obj.lateral_count().min(obj.parallel_pairs.len());
            let choice = [0.005, 0.01, 0.02, 0.03, 0.04].iter().find_map(|&step| {
                [(0.012, 0.012), (0.012, 0.02), (0.012, 0.024)].iter().find_map(|&pad| {
                    let start = aligned_start(&obj, pair, pad, j >= 2)?;
                    let config = coarse_config(step);
                    let res = derive_resolutions(&obj, &config.resolution);
                    enumerate(&obj, &start, &res, &config.cost, cap).map(|_| (start, config, res))
                })
            });
            let Some((start, config, res)) = choice else { continue };
            let mut s = start;
            let mut steps = 0;
            // keep walking until the start no longer satisfies the goal
            while steps < 4 + j * 2 || (contained(&start, &goals_around(&s, 0.0005)) && steps < 100) {
                let next = successors(&s, &obj, &res, &Vec::new());
                s = next[r.gen_range(0..next.len())].1;
                steps += 1;
            }
            let goals = goals_around(&s, 0.0005);
            if contained(&start, &goals) {
                continue;
            }
            out.push(Instance { name: format!("{name}#{j}"), obj: obj.clone(), start, goals, config });
        }
    }
    out
}

#[derive(Debug)]
pub struct AdmissibilityResult {
    pub name: String,
    pub states: usize,
    pub violations: usize,
    pub worst_ratio: f64,
    pub optimum: f64,
    pub astar: f64,
    pub astar_exact: bool,
    pub goal_test_agrees: bool,
}

impl AdmissibilityResult {
    pub fn ok(&self) -> bool {
        self.violations == 0
            && self.astar_exact
            && self.goal_test_agrees
            && (self.astar - self.optimum).abs() <= 1e-12
    }
}

pub fn check(inst: &Instance, cap: usize) -> Option<AdmissibilityResult> {
    let res = derive_resolutions(&inst.obj, &inst.config.resolution);
    let cost = &inst.config.cost;
    let g = enumerate(&inst.obj, &inst.start, &res, cost, cap)?;
    let cache = HeuristicCache::new(&inst.obj, &inst.goals);
    let h: Vec<f64> = g.states.iter().map(|s| total_heuristic(s, &cache).unwrap()).collect();
    let goal_idx: Vec<usize> = (0..g.states.len()).filter(|&i| contained(&g.states[i], &inst.goals)).collect();
    let goal_test_agrees = (0..g.states.len()).all(|i| (h[i] <= cost.epsilon) == goal_idx.contains(&i));
    let to_go = dijkstra(&g, &goal_idx, true);
    let mut violations = 0;
    let mut worst_ratio: f64 = 0.0;
    for i in 0..g.states.len() {
        if to_go[i].is_finite() {
            let lhs = cost.lambda * h[i];
            if lhs > to_go[i] + 1e-12 {
                violations += 1;
            }
            if to_go[i] > 0.0 {
                worst_ratio = worst_ratio.max(lhs / to_go[i]);
            }
        }
    }
    let p = plan(&inst.obj, &inst.start, &inst.goals, &inst.config).unwrap();
    Some(AdmissibilityResult {
        name: inst.name.clone(),
        states: g.states.len(),
        violations,
        worst_ratio,
        optimum: to_go[0],
        astar: p.total_action_cost,
        astar_exact: p.status == PlanStatus::ExactGoal,
        goal_test_agrees,
    })
}
