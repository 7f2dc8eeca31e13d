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
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ActionKind {
    SlideLeftUp,
    SlideLeftDown,
    SlideRightUp,
    SlideRightDown,
    RotateCW,
    RotateCCW,
    MoveContactUp,
    MoveContactDown,
    Pivot,
}

impl ActionKind {
    /// Every primitive, in tie-breaking order.
    pub const ALL: [ActionKind; 9] = [
        ActionKind::SlideLeftUp,
        ActionKind::SlideLeftDown,
        ActionKind::SlideRightUp,
        ActionKind::SlideRightDown,
        ActionKind::RotateCW,
        ActionKind::RotateCCW,
        ActionKind::MoveContactUp,
        ActionKind::MoveContactDown,
        ActionKind::Pivot,
    ];

    pub fn is_slide(self) -> bool {
        matches!(
            self,
            ActionKind::SlideLeftUp
                | ActionKind::SlideLeftDown
                | ActionKind::SlideRightUp
                | ActionKind::SlideRightDown
        )
    }

    pub fn is_move(self) -> bool {
        matches!(self, ActionKind::MoveContactUp | ActionKind::MoveContactDown)
    }

    pub fn is_rotate(self) -> bool {
        matches!(self, ActionKind::RotateCW | ActionKind::RotateCCW)
    }

    /// Primitive that undoes this one, if any.
    pub fn inverse(self) -> Option<ActionKind> {
        use ActionKind::*;
        Some(match self {
            SlideLeftUp => SlideLeftDown,
            SlideLeftDown => SlideLeftUp,
            SlideRightUp => SlideRightDown,
            SlideRightDown => SlideRightUp,
            RotateCW => RotateCCW,
            RotateCCW => RotateCW,
            MoveContactUp => MoveContactDown,
            MoveContactDown => MoveContactUp,
            Pivot => return None,
        })
    }
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A primitive with its step size: meters for slides and moves, radians for
/// rotations and pivots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Action<T> {
    pub kind: ActionKind,
    pub magnitude: T,
    /// Effective radius turning an angular step into arc length; zero for
    /// translations.
    #[serde(default)]
    pub lever_arm: T,
}

impl<T> Action<T> {
    pub fn new(kind: ActionKind, magnitude: T, lever_arm: T) -> Self {
        Action {
            kind,
            magnitude,
            lever_arm,
        }
    }
}

impl<T: fmt::Display> fmt::Display for Action<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind, self.magnitude)
    }
}
