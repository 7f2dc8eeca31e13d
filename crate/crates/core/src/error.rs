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
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("ungraspable object: {0}")]
    UngraspableObject(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid start state: {0}")]
    InvalidStart(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("infeasible action {action}: {reason}")]
    InfeasibleAction { action: String, reason: String },
    #[error("corrupted plan: {0}")]
    CorruptedPlan(String),
    #[error("{}: field `{field}`: {source}", file.display())]
    Load {
        file: PathBuf,
        field: String,
        #[source]
        source: Box<Error>,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: malformed JSON: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn infeasible(action: impl std::fmt::Display, reason: impl Into<String>) -> Self {
        Error::InfeasibleAction {
            action: action.to_string(),
            reason: reason.into(),
        }
    }

    /// Attach file and field context.
    pub fn in_file(self, file: impl Into<PathBuf>, field: impl Into<String>) -> Self {
        Error::Load {
            file: file.into(),
            field: field.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, skipping load context.
    pub fn root(&self) -> &Error {
        match self {
            Error::Load { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
