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
//! JSON file formats and loading with file/field context on every error.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::{build_prism, ConvexPolygon2, FaceId, ObjectModel, Vec2};
use crate::kinematics::PivotChain;
use crate::planner::PlannerConfig;
use crate::transition::{ContactRegion, GoalRegion, GoalSet, GraspState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectFile {
    pub name: String,
    pub cross_section: Vec<[f64; 2]>,
    pub height: f64,
    #[serde(default = "metres")]
    pub units: String,
}

fn metres() -> String {
    "m".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoalEntry {
    pub face: FaceId,
    pub polygon: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContactEntry {
    pub face: FaceId,
    pub center: [f64; 2],
    #[serde(default)]
    pub orientation: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pad_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pad_height: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartFile {
    pub left: ContactEntry,
    pub right: ContactEntry,
    pub support_face: FaceId,
    /// Checked against the value derived from the faces when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grasp_pair: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizontal_axis: Option<[[f64; 2]; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainFile {
    #[serde(flatten)]
    pub chain: PivotChain<f64>,
    /// Waypoints per pivot stage.
    #[serde(default = "default_steps")]
    pub steps: usize,
}

fn default_steps() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskFile {
    pub name: String,
    pub object: PathBuf,
    pub goals: PathBuf,
    pub start: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<PathBuf>,
    /// Merged over the config, key by key.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overrides: Option<Value>,
    #[serde(default = "one")]
    pub trials: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    #[serde(default)]
    pub min_mean_overlap: Option<f64>,
    #[serde(default)]
    pub max_planning_time_s: Option<f64>,
    #[serde(default)]
    pub require_all_solved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Half-width of the uniform perturbation on slide and move magnitudes.
    pub eta: f64,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteFile {
    pub tasks: Vec<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<Thresholds>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseSpec>,
}

/// Read and parse a JSON file.
pub fn read_json<D: DeserializeOwned>(path: &Path) -> Result<D> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io { path: path.into(), source: e })?;
    serde_json::from_str(&text).map_err(|e| Error::Json { path: path.into(), source: e })
}

/// Write pretty JSON with a trailing newline.
pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Json { path: path.into(), source: e })?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::Io { path: path.into(), source: e })
}

fn points(raw: &[[f64; 2]]) -> Vec<Vec2<f64>> {
    raw.iter().map(|&[x, y]| Vec2::new(x, y)).collect()
}

pub fn object_from_file(f: &ObjectFile, path: &Path) -> Result<ObjectModel<f64>> {
    if f.units != "m" {
        return Err(Error::InvalidInput(format!("unsupported units {:?}, expected \"m\"", f.units)).in_file(path, "units"));
    }
    let cs = ConvexPolygon2::new(points(&f.cross_section)).map_err(|e| e.in_file(path, "cross_section"))?;
    build_prism(&f.name, &cs, f.height).map_err(|e| {
        let field = if matches!(e, Error::InvalidGeometry(_)) { "height" } else { "cross_section" };
        e.in_file(path, field)
    })
}

pub fn load_object(path: &Path) -> Result<ObjectModel<f64>> {
    object_from_file(&read_json(path)?, path)
}

pub fn goals_from_file(entries: &[GoalEntry], obj: &ObjectModel<f64>, path: &Path) -> Result<GoalSet<f64>> {
    if entries.is_empty() {
        return Err(Error::InvalidInput("goal set is empty".into()).in_file(path, "goals"));
    }
    let mut regions = Vec::with_capacity(entries.len());
    for (i, g) in entries.iter().enumerate() {
        let face = obj
            .face(g.face)
            .map_err(|e| e.in_file(path, format!("goals[{i}].face")))?;
        let polygon = ConvexPolygon2::new(points(&g.polygon))
            .map_err(|e| e.in_file(path, format!("goals[{i}].polygon")))?;
        if !face.polygon.contains_polygon(&polygon, 1e-9) {
            return Err(Error::InvalidGeometry(format!("goal polygon {i} extends past face {}", g.face))
                .in_file(path, format!("goals[{i}].polygon")));
        }
        regions.push(GoalRegion { face: g.face, polygon });
    }
    Ok(GoalSet::new(regions))
}

pub fn load_goals(path: &Path, obj: &ObjectModel<f64>) -> Result<GoalSet<f64>> {
    let entries: Vec<GoalEntry> = read_json(path)?;
    goals_from_file(&entries, obj, path)
}

pub fn start_from_file(
    f: &StartFile,
    obj: &ObjectModel<f64>,
    cfg: &PlannerConfig<f64>,
    path: &Path,
) -> Result<GraspState<f64>> {
    let contact = |c: &ContactEntry| ContactRegion {
        face: c.face,
        center: Vec2::new(c.center[0], c.center[1]),
        orientation: c.orientation,
        pad_width: c.pad_width.unwrap_or(cfg.resolution.pad_width),
        pad_height: c.pad_height.unwrap_or(cfg.resolution.pad_height),
    };
    let invalid = |field: &str, msg: String| Error::InvalidStart(msg).in_file(path, field);
    let s = GraspState::new(obj, contact(&f.left), contact(&f.right), f.support_face).map_err(|e| {
        let msg = e.to_string();
        let field = if msg.contains("left") {
            "left"
        } else if msg.contains("right") {
            "right"
        } else {
            "support_face"
        };
        invalid(field, msg)
    })?;
    if let Some(p) = f.grasp_pair {
        if p != s.grasp_pair {
            return Err(invalid("grasp_pair", format!("{p} does not match the grasped faces (pair {})", s.grasp_pair)));
        }
    }
    if let Some(axes) = f.horizontal_axis {
        for (k, ax) in axes.iter().enumerate() {
            let a = Vec2::new(ax[0], ax[1]);
            if a.dist(s.horizontal_axis[k]) > 1e-6 {
                return Err(invalid(
                    "horizontal_axis",
                    format!("axis {k} does not match the support face"),
                ));
            }
        }
    }
    Ok(s)
}

pub fn load_start(path: &Path, obj: &ObjectModel<f64>, cfg: &PlannerConfig<f64>) -> Result<GraspState<f64>> {
    start_from_file(&read_json(path)?, obj, cfg, path)
}

/// Recursively overlay `patch` onto `base`.
pub fn merge_json(base: &mut Value, patch: &Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                merge_json(b.entry(k.clone()).or_insert(Value::Null), v);
            }
        }
        (b, p) => *b = p.clone(),
    }
}

pub fn config_from_value(v: Value, path: &Path) -> Result<PlannerConfig<f64>> {
    let cfg: PlannerConfig<f64> =
        serde_json::from_value(v).map_err(|e| Error::Json { path: path.into(), source: e })?;
    cfg.resolution.validate().map_err(|e| e.in_file(path, "resolution"))?;
    cfg.cost.validate().map_err(|e| e.in_file(path, "cost"))?;
    Ok(cfg)
}

/// Load a planner config, or the defaults when `path` is `None`.
pub fn load_config(path: Option<&Path>) -> Result<PlannerConfig<f64>> {
    match path {
        Some(p) => config_from_value(read_json(p)?, p),
        None => Ok(PlannerConfig::default()),
    }
}

pub fn load_chain(path: &Path) -> Result<ChainFile> {
    let f: ChainFile = read_json(path)?;
    f.chain.validate().map_err(|e| e.in_file(path, "chain"))?;
    if f.steps == 0 {
        return Err(Error::InvalidInput("must be at least 1".into()).in_file(path, "steps"));
    }
    Ok(f)
}

#[derive(Debug, Clone, Copy)]
pub struct InputPaths<'a> {
    pub object: &'a Path,
    pub goals: &'a Path,
    pub start: &'a Path,
    pub config: Option<&'a Path>,
}

#[derive(Debug, Clone)]
pub struct Inputs {
    pub object: ObjectModel<f64>,
    pub start: GraspState<f64>,
    pub goals: GoalSet<f64>,
    pub config: PlannerConfig<f64>,
}

/// Load the object, start, goals and config, checking every invariant.
pub fn load_and_validate(paths: &InputPaths) -> Result<Inputs> {
    let config = load_config(paths.config)?;
    load_with_config(paths, config)
}

fn load_with_config(paths: &InputPaths, config: PlannerConfig<f64>) -> Result<Inputs> {
    let object = load_object(paths.object)?;
    let goals = load_goals(paths.goals, &object)?;
    let start = load_start(paths.start, &object, &config)?;
    Ok(Inputs { object, start, goals, config })
}

/// A task with its files resolved and loaded.
#[derive(Debug, Clone)]
pub struct LoadedTask {
    pub name: String,
    pub object_name: String,
    pub inputs: Inputs,
    pub trials: usize,
}

fn resolve(dir: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        dir.join(p)
    }
}

/// Load a task file; relative paths are taken from the task file's directory.
pub fn load_task(path: &Path) -> Result<LoadedTask> {
    let t: TaskFile = read_json(path)?;
    if t.trials == 0 {
        return Err(Error::InvalidInput("must be at least 1".into()).in_file(path, "trials"));
    }
    let dir = path.parent().unwrap_or(Path::new("."));
    let config_path = t.config.as_ref().map(|c| resolve(dir, c));
    let mut cfg_value = match &config_path {
        Some(p) => read_json::<Value>(p)?,
        None => Value::Object(Default::default()),
    };
    if let Some(o) = &t.overrides {
        merge_json(&mut cfg_value, o);
    }
    let config = config_from_value(cfg_value, config_path.as_deref().unwrap_or(path))?;
    let (object, goals, start) = (resolve(dir, &t.object), resolve(dir, &t.goals), resolve(dir, &t.start));
    let inputs = load_with_config(
        &InputPaths { object: &object, goals: &goals, start: &start, config: None },
        config,
    )?;
    Ok(LoadedTask { name: t.name, object_name: inputs.object.name.clone(), inputs, trials: t.trials })
}

/// Suite file plus the resolved task paths.
pub fn load_suite(path: &Path) -> Result<(SuiteFile, Vec<PathBuf>)> {
    let s: SuiteFile = read_json(path)?;
    if s.tasks.is_empty() {
        return Err(Error::InvalidInput("suite lists no tasks".into()).in_file(path, "tasks"));
    }
    let dir = path.parent().unwrap_or(Path::new("."));
    let tasks = s.tasks.iter().map(|t| resolve(dir, t)).collect();
    Ok((s, tasks))
}
