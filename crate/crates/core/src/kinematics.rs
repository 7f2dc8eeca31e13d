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
//! Arm–hand–object chain and end-effector waypoints for pivots and
//! contact moves.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Mat3, RigidTransform3, Vec3};
use crate::scalar::Scalar;

/// Classic Denavit–Hartenberg parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DhRow<T> {
    pub theta: T,
    pub d: T,
    pub a: T,
    pub alpha: T,
}

impl<T: Scalar> DhRow<T> {
    pub fn new(theta: T, d: T, a: T, alpha: T) -> Self {
        DhRow { theta, d, a, alpha }
    }

    pub fn is_finite(&self) -> bool {
        [self.theta, self.d, self.a, self.alpha].iter().all(|v| v.is_finite())
    }
}

/// `RotZ(theta) * TransZ(d) * TransX(a) * RotX(alpha)`.
pub fn dh_transform<T: Scalar>(row: &DhRow<T>) -> RigidTransform3<T> {
    let rz = Mat3::rot_z(row.theta);
    let translation = rz.mul_vec(Vec3::new(row.a, T::zero(), row.d));
    RigidTransform3::new(rz.mul_mat(&Mat3::rot_x(row.alpha)), translation)
}

/// End effector → hand → finger → contact → pivot → support.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PivotChain<T> {
    pub d1: T,
    pub theta_finger: T,
    pub d2: T,
    pub d3: T,
    pub d4: T,
    pub theta_contact: T,
    pub theta_pivot: T,
}

impl<T: Scalar> PivotChain<T> {
    pub fn rows(&self) -> [DhRow<T>; 5] {
        let z = T::zero();
        let h = T::FRAC_PI_2();
        [
            DhRow::new(T::of(0.75) * T::PI(), self.d1, z, h),
            DhRow::new(self.theta_finger, z, self.d2, h),
            DhRow::new(self.theta_contact - h, z, self.d3, z),
            DhRow::new(-h, z, self.d4, T::PI()),
            DhRow::new(self.theta_pivot, z, z, z),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        let vals = [
            self.d1,
            self.theta_finger,
            self.d2,
            self.d3,
            self.d4,
            self.theta_contact,
            self.theta_pivot,
        ];
        if !vals.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput("chain parameters must be finite".into()));
        }
        if [self.d1, self.d2, self.d3, self.d4].iter().any(|&d| d < T::zero()) {
            return Err(Error::InvalidInput("chain lengths d1..d4 must be non-negative".into()));
        }
        Ok(())
    }
}

/// Pose of the support frame seen from the end effector.
pub fn chain_forward<T: Scalar>(chain: &PivotChain<T>) -> RigidTransform3<T> {
    chain
        .rows()
        .iter()
        .fold(RigidTransform3::identity(), |acc, r| acc.compose(&dh_transform(r)))
}

/// Pose of the pivot frame (before the last joint) seen from the end effector.
pub fn pivot_frame<T: Scalar>(chain: &PivotChain<T>) -> RigidTransform3<T> {
    chain.rows()[..4]
        .iter()
        .fold(RigidTransform3::identity(), |acc, r| acc.compose(&dh_transform(r)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar + Deserialize<'de>", serialize = "T: Scalar + Serialize"))]
pub struct Waypoint<T> {
    pub step: usize,
    pub pose: RigidTransform3<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PivotStage {
    /// Tip the object about the support edge by driving the end effector.
    Tilt,
    /// Lay the object down on its new face while turning about the contact.
    Settle,
}

/// Chain configuration `k` of `n` through `stage`.
pub fn stage_chain<T: Scalar>(chain: &PivotChain<T>, stage: PivotStage, sweep: T, k: usize, n: usize) -> PivotChain<T> {
    let t = sweep * T::of(k as f64) / T::of(n as f64);
    let mut c = *chain;
    match stage {
        PivotStage::Tilt => c.theta_pivot = chain.theta_pivot + t,
        PivotStage::Settle => {
            c.theta_pivot = chain.theta_pivot - t;
            c.theta_contact = chain.theta_contact - t;
        }
    }
    c
}

/// `n + 1` end-effector poses for one pivot stage, with the support frame
/// fixed at `support` in the world.
pub fn pivot_trajectory_at<T: Scalar>(
    support: &RigidTransform3<T>,
    chain: &PivotChain<T>,
    stage: PivotStage,
    sweep: T,
    n: usize,
) -> Result<Vec<Waypoint<T>>> {
    chain.validate()?;
    if n == 0 {
        return Err(Error::InvalidInput("trajectory needs at least one step".into()));
    }
    if !sweep.is_finite() {
        return Err(Error::InvalidInput("sweep must be finite".into()));
    }
    Ok((0..=n)
        .map(|k| Waypoint {
            step: k,
            pose: support.compose(&chain_forward(&stage_chain(chain, stage, sweep, k, n)).inverse()),
        })
        .collect())
}

/// [`pivot_trajectory_at`] with the support frame as the world frame.
pub fn pivot_trajectory<T: Scalar>(
    chain: &PivotChain<T>,
    stage: PivotStage,
    sweep: T,
    n: usize,
) -> Result<Vec<Waypoint<T>>> {
    pivot_trajectory_at(&RigidTransform3::identity(), chain, stage, sweep, n)
}

/// Both stages of a pivot by `sweep`, starting from the end-effector pose
/// `start`. The second stage begins where the first ends and its first
/// waypoint is not repeated.
pub fn pivot_execution<T: Scalar>(
    start: &RigidTransform3<T>,
    chain: &PivotChain<T>,
    sweep: T,
    n: usize,
) -> Result<Vec<Waypoint<T>>> {
    let support = start.compose(&chain_forward(chain));
    let mut out = pivot_trajectory_at(&support, chain, PivotStage::Tilt, sweep, n)?;
    let tilted = stage_chain(chain, PivotStage::Tilt, sweep, n, n);
    let settle = pivot_trajectory_at(&support, &tilted, PivotStage::Settle, sweep, n)?;
    out.extend(settle.into_iter().skip(1).map(|w| Waypoint { step: w.step + n, ..w }));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShiftDirection {
    Up,
    Down,
}

/// End-effector displacement for a contact move: `+dz` along world z for
/// `Up`, `-dz` for `Down`.
pub fn contact_shift_displacement<T: Scalar>(direction: ShiftDirection, dz: T) -> Result<RigidTransform3<T>> {
    if !(dz > T::zero()) || !dz.is_finite() {
        return Err(Error::InvalidInput(format!("contact shift must be positive, got {dz:?}")));
    }
    let z = match direction {
        ShiftDirection::Up => dz,
        ShiftDirection::Down => -dz,
    };
    Ok(RigidTransform3::from_translation(Vec3::new(T::zero(), T::zero(), z)))
}

#[derive(Serialize)]
struct CsvRow {
    step: usize,
    x: f64,
    y: f64,
    z: f64,
    qw: f64,
    qx: f64,
    qy: f64,
    qz: f64,
}

/// Write `step,x,y,z,qw,qx,qy,qz` rows.
pub fn write_trajectory_csv<T: Scalar, W: Write>(waypoints: &[Waypoint<T>], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for wp in waypoints {
        let t = wp.pose.translation;
        let [qw, qx, qy, qz] = wp.pose.rotation.to_quaternion();
        w.serialize(CsvRow {
            step: wp.step,
            x: t.x.to_f64_lossy(),
            y: t.y.to_f64_lossy(),
            z: t.z.to_f64_lossy(),
            qw: qw.to_f64_lossy(),
            qx: qx.to_f64_lossy(),
            qy: qy.to_f64_lossy(),
            qz: qz.to_f64_lossy(),
        })?;
    }
    w.flush().map_err(|e| Error::Io { path: "<trajectory>".into(), source: e })?;
    Ok(())
}
