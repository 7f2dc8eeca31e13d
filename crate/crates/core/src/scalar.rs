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
//! Scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// floating point: f32 or f64
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Tolerance for internal invariant checks.
    fn geom_eps() -> Self;
    /// Tolerance for user-facing feasibility checks (containment, widths).
    fn feas_eps() -> Self;
    /// Lattice quantum that state coordinates are snapped to. A power of two,
    /// so snapping is exact.
    fn snap_quantum() -> Self;

    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::of(0.5)
    }

    /// Round to the nearest multiple of [`Scalar::snap_quantum`].
    #[inline]
    fn snap(self) -> Self {
        let q = Self::snap_quantum();
        let s = (self / q).round() * q;
        // normalise -0.0 so equal states hash equally
        if s == Self::zero() {
            Self::zero()
        } else {
            s
        }
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn geom_eps() -> Self {
        1e-9
    }
    fn feas_eps() -> Self {
        1e-6
    }
    fn snap_quantum() -> Self {
        // 2^-40, about 0.9 pm
        1.0 / 1_099_511_627_776.0
    }
}

impl Scalar for f32 {
    fn geom_eps() -> Self {
        2e-5
    }
    fn feas_eps() -> Self {
        5e-5
    }
    fn snap_quantum() -> Self {
        // 2^-16 m
        1.0 / 65_536.0
    }
}

/// Wrap an angle into `(-pi, pi]`.
pub fn wrap_angle<T: Scalar>(a: T) -> T {
    let two_pi = T::TAU();
    let mut r = a % two_pi;
    if r > T::PI() {
        r = r - two_pi;
    } else if r <= -T::PI() {
        r = r + two_pi;
    }
    r
}
