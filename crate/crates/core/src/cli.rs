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
//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bench::{emit_report, robustness, run_benchmark, simulate, ReportFormat, Robustness};
use crate::error::{Error, Result};
use crate::geometry::unfold;
use crate::io::{
    load_and_validate, load_chain, load_goals, load_object, load_suite, load_task, read_json, write_json,
    InputPaths, NoiseSpec,
};
use crate::kinematics::{contact_shift_displacement, pivot_execution, write_trajectory_csv, ShiftDirection, Waypoint};
use crate::planner::{evaluate, plan, Plan, PlanStatus};
use crate::transition::{overlap_ratio, ActionKind, GraspState};
use crate::geometry::RigidTransform3;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ACCEPTANCE: i32 = 3;
pub const EXIT_PLANNING: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "inhand", version, about = "Region-based within-hand manipulation planner")]
pub struct Cli {
    /// Print progress to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plan a primitive sequence into the goal regions.
    Plan(PlanArgs),
    /// Replay a plan, optionally with perturbed slide/move magnitudes.
    Simulate(SimulateArgs),
    /// Run a benchmark suite and write a CSV or JSON report.
    Benchmark(BenchmarkArgs),
    /// End-effector waypoints for every pivot and contact move of a plan.
    Trajectory(TrajectoryArgs),
    /// Unfolded surface around one face as SVG.
    Unfold(UnfoldArgs),
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long)]
    pub object: PathBuf,
    #[arg(long)]
    pub goals: PathBuf,
    #[arg(long)]
    pub start: PathBuf,
    #[arg(long, env = "INHAND_CONFIG")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub plan: PathBuf,
    #[arg(long)]
    pub object: PathBuf,
    #[arg(long)]
    pub goals: PathBuf,
    #[arg(long, env = "INHAND_CONFIG")]
    pub config: Option<PathBuf>,
    /// Seed for perturbed execution; omit for exact replay.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Perturbation half-width in metres.
    #[arg(long, default_value_t = 0.002)]
    pub eta: f64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    #[arg(long)]
    pub suite: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Overrides the suite's noise seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct TrajectoryArgs {
    #[arg(long)]
    pub plan: PathBuf,
    #[arg(long)]
    pub chain: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct UnfoldArgs {
    #[arg(long)]
    pub object: PathBuf,
    #[arg(long)]
    pub face: usize,
    #[arg(long)]
    pub goals: Option<PathBuf>,
    /// Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.root() {
            Error::Io { .. } | Error::Csv(_) => EXIT_ERROR,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

/// Parse `argv` and run the subcommand. Returns the process exit code.
pub fn dispatch<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Plan(a) => cmd_plan(a, cli.verbose),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Benchmark(a) => cmd_benchmark(a, cli.verbose),
        Command::Trajectory(a) => cmd_trajectory(a),
        Command::Unfold(a) => cmd_unfold(a),
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io { path: path.into(), source: e })
}

fn cmd_plan(a: &PlanArgs, verbose: bool) -> Result<(), Failure> {
    let inp = load_and_validate(&InputPaths {
        object: &a.object,
        goals: &a.goals,
        start: &a.start,
        config: a.config.as_deref(),
    })?;
    let p = plan(&inp.object, &inp.start, &inp.goals, &inp.config)?;
    write_json(&a.out, &p)?;
    if verbose {
        eprintln!(
            "{}: {} actions, cost {:.6}, {} expansions",
            crate::bench::status_name(p.status),
            p.len(),
            p.total_action_cost,
            p.expansions
        );
    }
    if p.status == PlanStatus::Failed {
        return Err(Failure { code: EXIT_PLANNING, message: "no progress towards the goal regions".into() });
    }
    Ok(())
}

#[derive(Serialize)]
struct Replay {
    completed: bool,
    overlap: [f64; 2],
    objective: f64,
    final_state: GraspState<f64>,
    trace: Vec<GraspState<f64>>,
}

#[derive(Serialize)]
struct NoisyReplay {
    eta: f64,
    seed: u64,
    robustness: Robustness,
}

fn cmd_simulate(a: &SimulateArgs) -> Result<(), Failure> {
    let obj = load_object(&a.object)?;
    let goals = load_goals(&a.goals, &obj)?;
    let cfg = crate::io::load_config(a.config.as_deref())?;
    let p: Plan<f64> = read_json(&a.plan)?;
    let s0 = *p.states.first().ok_or_else(|| Error::CorruptedPlan("plan has no states".into()))?;
    match a.seed {
        None => {
            let run = simulate(&p, &obj, &s0, None)?;
            let (l, r) = overlap_ratio(run.final_state(), &goals)?;
            let objective = evaluate(&p, &obj, &goals, &cfg.cost)?;
            write_json(
                &a.out,
                &Replay {
                    completed: run.succeeded(),
                    overlap: [l, r],
                    objective,
                    final_state: *run.final_state(),
                    trace: run.trace,
                },
            )?;
        }
        Some(seed) => {
            let r = robustness(&p, &obj, &goals, a.eta, a.trials, seed)?;
            write_json(&a.out, &NoisyReplay { eta: a.eta, seed, robustness: r })?;
        }
    }
    Ok(())
}

fn cmd_benchmark(a: &BenchmarkArgs, verbose: bool) -> Result<(), Failure> {
    let (suite, paths) = load_suite(&a.suite)?;
    let tasks = paths.iter().map(|p| load_task(p)).collect::<Result<Vec<_>>>()?;
    let noise = suite.noise.clone().map(|n| NoiseSpec { seed: a.seed.unwrap_or(n.seed), ..n });
    let report = run_benchmark(&tasks, noise.as_ref())?;
    emit_report(&report, &a.out, ReportFormat::from_path(&a.out))?;
    if verbose {
        for r in &report.rows {
            eprintln!("{}: {} overlap {:.3} in {:.2}s", r.task, r.status, r.overlap_mean, r.planning_time_s);
        }
    }
    let mut violations = Vec::new();
    if let Some(t) = &suite.thresholds {
        let o = &report.overall;
        if let Some(min) = t.min_mean_overlap {
            if o.mean_overlap < min {
                violations.push(format!("mean overlap {:.4} below {min}", o.mean_overlap));
            }
        }
        if let Some(max) = t.max_planning_time_s {
            if o.max_planning_time_s > max {
                violations.push(format!("planning time {:.2}s above {max}s", o.max_planning_time_s));
            }
        }
        if t.require_all_solved && o.solved < o.tasks {
            violations.push(format!("{} of {} tasks reached their goals", o.solved, o.tasks));
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure { code: EXIT_ACCEPTANCE, message: violations.join("; ") })
    }
}

/// Waypoints for every pivot and contact move in `plan`, starting with the
/// end effector at the world origin.
pub fn plan_trajectory(plan: &Plan<f64>, chain: &crate::io::ChainFile) -> Result<Vec<Waypoint<f64>>> {
    let mut pose = RigidTransform3::identity();
    let mut out = vec![Waypoint { step: 0, pose }];
    for a in &plan.actions {
        match a.kind {
            ActionKind::Pivot => {
                let wps = pivot_execution(&pose, &chain.chain, a.magnitude, chain.steps)?;
                for w in wps.into_iter().skip(1) {
                    pose = w.pose;
                    out.push(Waypoint { step: out.len(), pose });
                }
            }
            ActionKind::MoveContactUp | ActionKind::MoveContactDown => {
                let dir = if a.kind == ActionKind::MoveContactUp { ShiftDirection::Up } else { ShiftDirection::Down };
                pose = contact_shift_displacement(dir, a.magnitude)?.compose(&pose);
                out.push(Waypoint { step: out.len(), pose });
            }
            _ => {}
        }
    }
    Ok(out)
}

fn cmd_trajectory(a: &TrajectoryArgs) -> Result<(), Failure> {
    let p: Plan<f64> = read_json(&a.plan)?;
    let chain = load_chain(&a.chain)?;
    let wps = plan_trajectory(&p, &chain)?;
    let mut buf = Vec::new();
    write_trajectory_csv(&wps, &mut buf)?;
    write_text(&a.out, &String::from_utf8(buf).expect("csv output is utf-8"))?;
    Ok(())
}

fn cmd_unfold(a: &UnfoldArgs) -> Result<(), Failure> {
    let obj = load_object(&a.object)?;
    let goals = match &a.goals {
        Some(g) => load_goals(g, &obj)?,
        None => crate::transition::GoalSet::default(),
    };
    let map = unfold(&obj, a.face)?;
    let images: Vec<_> = goals
        .regions
        .iter()
        .filter_map(|g| map.map_polygon(g.face, &g.polygon))
        .collect();
    let svg = map.to_svg(&images);
    match &a.out {
        Some(p) => write_text(p, &svg)?,
        None => print!("{svg}"),
    }
    Ok(())
}
