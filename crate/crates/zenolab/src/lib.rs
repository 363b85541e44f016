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

//! zenolab: a numerical laboratory for higher-order quantum Zeno sequences.
//!
//! The crate builds and simulates Zeno sequences based on projective
//! measurements, unitary kicks (reflections), higher-order Trotter product
//! formulas, compact short sequences, UDD pulse timings, exactly-averaged
//! randomized protocols, and continuous sinusoidal control; it measures
//! their errors against the ideal Zeno dynamics, evaluates the analytic
//! error bounds, and fits log-log scaling slopes.

pub mod error;
pub mod experiment;
pub mod metrics;
pub mod operator;
pub mod sequences;
pub mod system;
pub mod trotter;

pub use error::{Result, ZenoError};
pub use operator::{
    commutator, expm, jacobi_eigh, kron, time_ordered_propagator, OperatorMatrix, StateVector,
};
pub use system::{build_system, example_zz_x, random_system, SplitMix64, SystemModel};
pub use trotter::{
    alpha_commutator_sum, build_trotter_step, reflection_count, suzuki_stage_plan, GeneratorTag,
    StagePlan,
};
