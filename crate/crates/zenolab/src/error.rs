// Copyright 2026 The zenolab Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ZenoError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("matrix is not Hermitian within tolerance {0:e}")]
    NotHermitian(f64),
    #[error("matrix is not a projector within tolerance {0:e}")]
    NotProjector(f64),
    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),
    #[error("unsupported range: {0}")]
    UnsupportedRange(String),
    #[error("solver failed: {0}")]
    SolverFailure(String),
    #[error("fit failed: {0}")]
    FitFailure(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, ZenoError>;
