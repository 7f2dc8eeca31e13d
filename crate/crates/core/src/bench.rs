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
//! Plan replay, perturbed execution and the benchmark suite runner.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ObjectModel;
use crate::io::{LoadedTask, NoiseSpec};
use crate::planner::{plan, Plan, PlanStatus};
use crate::scalar::Scalar;
use crate::transition::{overlap_ratio, transition, Action, GoalSet, GraspState};

/// Uniform `±eta` perturbation of slide and move magnitudes.
pub struct Noise {
    pub eta: f64,
    rng: ChaCha8Rng,
}

impl Noise {
    pub fn new(eta: f64, seed: u64) -> Self {
        Noise { eta, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn perturb<T: Scalar>(&mut self, a: &Action<T>) -> Action<T> {
        if !(a.kind.is_slide() || a.kind.is_move()) || self.eta <= 0.0 {
            return *a;
        }
        let d: f64 = self.rng.gen_range(-self.eta..=self.eta);
        Action { magnitude: a.magnitude + T::of(d), ..*a }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Execution<T> {
    pub trace: Vec<GraspState<T>>,
    /// Index of the first action that could not be executed.
    pub failed_at: Option<usize>,
}

impl<T: Scalar> Execution<T> {
    pub fn final_state(&self) -> &GraspState<T> {
        self.trace.last().expect("trace holds the start state")
    }

    pub fn succeeded(&self) -> bool {
        self.failed_at.is_none()
    }
}

/// Execute `plan` from `s0`. Without noise the trace must reproduce the
/// plan's states exactly; with noise an infeasible step ends the trial.
pub fn simulate<T: Scalar>(
    plan: &Plan<T>,
    obj: &ObjectModel<T>,
    s0: &GraspState<T>,
    mut noise: Option<&mut Noise>,
) -> Result<Execution<T>> {
    let mut trace = vec![*s0];
    let noiseless = noise.is_none();
    if noiseless && plan.states.first() != Some(s0) {
        return Err(Error::CorruptedPlan("start state differs from the plan's".into()));
    }
    for (t, a) in plan.actions.iter().enumerate() {
        let s = trace.last().expect("non-empty");
        let a = match noise.as_deref_mut() {
            Some(n) => n.perturb(a),
            None => *a,
        };
        match transition(s, &a, obj) {
            Ok(next) => {
                if noiseless && plan.states.get(t + 1) != Some(&next) {
                    return Err(Error::CorruptedPlan(format!("replay diverges at step {}", t + 1)));
                }
                trace.push(next);
            }
            Err(e) if noiseless => {
                return Err(Error::CorruptedPlan(format!("step {} cannot be replayed: {e}", t + 1)));
            }
            Err(_) => return Ok(Execution { trace, failed_at: Some(t) }),
        }
    }
    Ok(Execution { trace, failed_at: None })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Robustness {
    pub trials: usize,
    pub failures: usize,
    pub failure_fraction: f64,
    /// Mean overlap of completed trials; 0 when none completed.
    pub mean_overlap: f64,
}

/// Run `trials` perturbed executions; trial `i` uses seed `seed + i`.
pub fn robustness(
    plan: &Plan<f64>,
    obj: &ObjectModel<f64>,
    goals: &GoalSet<f64>,
    eta: f64,
    trials: usize,
    seed: u64,
) -> Result<Robustness> {
    if trials == 0 {
        return Err(Error::InvalidInput("at least one trial is needed".into()));
    }
    let s0 = plan.states[0];
    let mut failures = 0;
    let mut overlap_sum = 0.0;
    for i in 0..trials {
        let mut noise = Noise::new(eta, seed.wrapping_add(i as u64));
        let run = simulate(plan, obj, &s0, Some(&mut noise))?;
        if run.succeeded() {
            let (l, r) = overlap_ratio(run.final_state(), goals)?;
            overlap_sum += 0.5 * (l + r);
        } else {
            failures += 1;
        }
    }
    let done = trials - failures;
    Ok(Robustness {
        trials,
        failures,
        failure_fraction: failures as f64 / trials as f64,
        mean_overlap: if done > 0 { overlap_sum / done as f64 } else { 0.0 },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskRow {
    pub task: String,
    pub object: String,
    /// `exact-goal`, `best-effort`, `failed` or `error`.
    pub status: String,
    pub planning_time_s: f64,
    pub plan_length: usize,
    pub execution_steps: usize,
    pub overlap_left: f64,
    pub overlap_right: f64,
    pub overlap_mean: f64,
    pub objective: Option<f64>,
    pub noise_trials: usize,
    pub noise_failure_fraction: Option<f64>,
    pub error: Option<String>,
}

impl TaskRow {
    pub fn solved(&self) -> bool {
        self.status == "exact-goal"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub tasks: usize,
    pub solved: usize,
    pub mean_overlap: f64,
    pub mean_planning_time_s: f64,
    pub max_planning_time_s: f64,
    pub mean_plan_length: f64,
    pub mean_noise_failure_fraction: Option<f64>,
}

impl Aggregate {
    pub fn of(rows: &[&TaskRow]) -> Self {
        let n = rows.len() as f64;
        let mean = |f: &dyn Fn(&TaskRow) -> f64| rows.iter().map(|r| f(r)).sum::<f64>() / n;
        let noisy: Vec<f64> = rows.iter().filter_map(|r| r.noise_failure_fraction).collect();
        Aggregate {
            tasks: rows.len(),
            solved: rows.iter().filter(|r| r.solved()).count(),
            mean_overlap: mean(&|r| r.overlap_mean),
            mean_planning_time_s: mean(&|r| r.planning_time_s),
            max_planning_time_s: rows.iter().map(|r| r.planning_time_s).fold(0.0, f64::max),
            mean_plan_length: mean(&|r| r.plan_length as f64),
            mean_noise_failure_fraction: (!noisy.is_empty())
                .then(|| noisy.iter().sum::<f64>() / noisy.len() as f64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<TaskRow>,
    pub per_object: BTreeMap<String, Aggregate>,
    pub overall: Aggregate,
}

impl BenchReport {
    /// Build a report, computing aggregates from `rows`.
    pub fn from_rows(rows: Vec<TaskRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidInput("report has no tasks".into()));
        }
        let mut groups: BTreeMap<String, Vec<&TaskRow>> = BTreeMap::new();
        for r in &rows {
            groups.entry(r.object.clone()).or_default().push(r);
        }
        let per_object = groups.iter().map(|(k, v)| (k.clone(), Aggregate::of(v))).collect();
        let overall = Aggregate::of(&rows.iter().collect::<Vec<_>>());
        Ok(BenchReport { rows, per_object, overall })
    }
}

/// Plan, replay and score one task. Never fails; errors become the row's
/// status.
pub fn run_task(task: &LoadedTask, noise: Option<&NoiseSpec>) -> (TaskRow, Option<Plan<f64>>) {
    let inp = &task.inputs;
    let mut row = TaskRow {
        task: task.name.clone(),
        object: task.object_name.clone(),
        status: "error".into(),
        planning_time_s: 0.0,
        plan_length: 0,
        execution_steps: 0,
        overlap_left: 0.0,
        overlap_right: 0.0,
        overlap_mean: 0.0,
        objective: None,
        noise_trials: 0,
        noise_failure_fraction: None,
        error: None,
    };
    let started = Instant::now();
    let planned = plan(&inp.object, &inp.start, &inp.goals, &inp.config);
    row.planning_time_s = started.elapsed().as_secs_f64();
    let p = match planned {
        Ok(p) => p,
        Err(e) => {
            row.error = Some(e.to_string());
            return (row, None);
        }
    };
    row.plan_length = p.len();
    row.objective = Some(p.objective.to_f64_lossy());
    row.status = status_name(p.status).into();
    let scored = simulate(&p, &inp.object, &inp.start, None).and_then(|run| {
        let (l, r) = overlap_ratio(run.final_state(), &inp.goals)?;
        Ok((run.trace.len() - 1, l, r))
    });
    match scored {
        Ok((steps, l, r)) => {
            row.execution_steps = steps;
            row.overlap_left = l;
            row.overlap_right = r;
            row.overlap_mean = 0.5 * (l + r);
        }
        Err(e) => {
            row.status = "error".into();
            row.error = Some(e.to_string());
            return (row, Some(p));
        }
    }
    if let Some(n) = noise {
        match robustness(&p, &inp.object, &inp.goals, n.eta, task.trials, n.seed) {
            Ok(r) => {
                row.noise_trials = r.trials;
                row.noise_failure_fraction = Some(r.failure_fraction);
            }
            Err(e) => row.error = Some(e.to_string()),
        }
    }
    (row, Some(p))
}

pub fn status_name(s: PlanStatus) -> &'static str {
    match s {
        PlanStatus::ExactGoal => "exact-goal",
        PlanStatus::BestEffort => "best-effort",
        PlanStatus::Failed => "failed",
    }
}

/// Run every task in order.
pub fn run_benchmark(tasks: &[LoadedTask], noise: Option<&NoiseSpec>) -> Result<BenchReport> {
    if tasks.is_empty() {
        return Err(Error::InvalidInput("benchmark suite is empty".into()));
    }
    BenchReport::from_rows(tasks.iter().map(|t| run_task(t, noise).0).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl ReportFormat {
    /// Pick by file extension; anything but `.json` is CSV.
    pub fn from_path(p: &Path) -> Self {
        match p.extension().and_then(|e| e.to_str()) {
            Some("json") => ReportFormat::Json,
            _ => ReportFormat::Csv,
        }
    }
}

pub fn render_report(report: &BenchReport, format: ReportFormat) -> Result<String> {
    if report.rows.is_empty() {
        return Err(Error::InvalidInput("report has no tasks".into()));
    }
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report)
                .map_err(|e| Error::Json { path: "<report>".into(), source: e })?;
            s.push('\n');
            Ok(s)
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &report.rows {
                w.serialize(r)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}

pub fn emit_report(report: &BenchReport, path: &Path, format: ReportFormat) -> Result<()> {
    let text = render_report(report, format)?;
    fs::write(path, text).map_err(|e| Error::Io { path: path.into(), source: e })
}

/// Parse the rows back out of a CSV report.
pub fn read_csv_rows(text: &str) -> Result<Vec<TaskRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}
