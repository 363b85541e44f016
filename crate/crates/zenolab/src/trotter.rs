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

//! Higher-order Suzuki-Trotter stage plans for the two-generator problem
//! `{H, RHR}`, their compilation to matrices, reflection counting, and the
//! nested-commutator sum that controls the step error constant.

use crate::error::{Result, ZenoError};
use crate::operator::{commutator, expm, OperatorMatrix, I};
use crate::system::SystemModel;

/// Largest supported formula half-order for stage plans.
pub const MAX_PLAN_ORDER: usize = 4;
/// Largest supported half-order for the commutator sum (2^(2k+1) terms).
pub const MAX_ALPHA_ORDER: usize = 3;

/// Which of the two generators a stage evolves under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorTag {
    /// The bare Hamiltonian `H`.
    First,
    /// The reflected Hamiltonian `RHR`.
    Second,
}

/// An ordered list of `(generator, coefficient)` stages realizing a
/// symmetric product formula of order `2k`. Coefficients per generator sum
/// to one, so a plan executed with step `τ` evolves each generator for a
/// total time `τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct StagePlan {
    pub order_k: usize,
    pub stages: Vec<(GeneratorTag, f64)>,
}

impl StagePlan {
    /// Sum of coefficients carrying the given tag.
    pub fn coefficient_sum(&self, tag: GeneratorTag) -> f64 {
        self.stages
            .iter()
            .filter(|(t, _)| *t == tag)
            .map(|(_, c)| c)
            .sum()
    }

    /// Plain-text export, one `tag,coefficient` row per stage.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for (tag, c) in &self.stages {
            let name = match tag {
                GeneratorTag::First => "FIRST",
                GeneratorTag::Second => "SECOND",
            };
            out.push_str(&format!("{name},{c:.17e}\n"));
        }
        out
    }
}

/// Suzuki recursion constant `p_k = 1/(4 - 4^{1/(2k-1)})`.
pub fn suzuki_p(k: usize) -> f64 {
    1.0 / (4.0 - 4.0f64.powf(1.0 / (2.0 * k as f64 - 1.0)))
}

/// Builds the order-`2k` Suzuki stage plan.
///
/// `k = 1` is the symmetric splitting `(FIRST, 1/2) (SECOND, 1) (FIRST, 1/2)`;
/// higher orders apply the fractal recursion
/// `S_{2k}(τ) = S_{2k-2}(p_k τ)² S_{2k-2}((1-4p_k)τ) S_{2k-2}(p_k τ)²`
/// with adjacent equal-tag stages merged.
pub fn suzuki_stage_plan(k: usize) -> Result<StagePlan> {
    if k == 0 || k > MAX_PLAN_ORDER {
        return Err(ZenoError::UnsupportedRange(format!(
            "suzuki_stage_plan supports 1 <= k <= {MAX_PLAN_ORDER}, got {k}"
        )));
    }
    let mut stages = vec![
        (GeneratorTag::First, 0.5),
        (GeneratorTag::Second, 1.0),
        (GeneratorTag::First, 0.5),
    ];
    for order in 2..=k {
        let p = suzuki_p(order);
        let mut next: Vec<(GeneratorTag, f64)> = Vec::new();
        for factor in [p, p, 1.0 - 4.0 * p, p, p] {
            for (tag, c) in &stages {
                push_merged(&mut next, *tag, c * factor);
            }
        }
        stages = next;
    }
    Ok(StagePlan { order_k: k, stages })
}

fn push_merged(stages: &mut Vec<(GeneratorTag, f64)>, tag: GeneratorTag, c: f64) {
    if let Some(last) = stages.last_mut() {
        if last.0 == tag {
            last.1 += c;
            return;
        }
    }
    stages.push((tag, c));
}

/// Compiles the order-`2k` Trotter step `S_{2k}` for the pair `{H, RHR}`
/// with step size `dt/2`: stage `(tag, c)` contributes
/// `exp(-i H c dt/2)` or `exp(-i RHR c dt/2)`. The product approximates
/// `exp(-i H_Z dt)` with a single-step error `O(dt^{2k+1})`.
pub fn build_trotter_step(sys: &SystemModel, k: usize, dt: f64) -> Result<OperatorMatrix> {
    if !(dt > 0.0) {
        return Err(ZenoError::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    let plan = suzuki_stage_plan(k)?;
    compile_plan(sys, &plan, dt)
}

/// Compiles an arbitrary stage plan with step `dt` (stages applied in list
/// order, earliest stage rightmost in the matrix product).
pub fn compile_plan(sys: &SystemModel, plan: &StagePlan, dt: f64) -> Result<OperatorMatrix> {
    let rhr = sys.rhr();
    let mut u = OperatorMatrix::identity(sys.dim);
    for (tag, c) in &plan.stages {
        let gen = match tag {
            GeneratorTag::First => &sys.h,
            GeneratorTag::Second => &rhr,
        };
        let step = expm(&gen.scale(-I * (c * dt / 2.0)))?;
        u = step.matmul(&u);
    }
    Ok(u)
}

/// Number of reflection operators needed to realize `S_{2k}` when every
/// `RHR` stage is implemented by conjugation `R e^{-iH·} R` and back-to-back
/// `R·R` pairs cancel. Equals `2·5^{k-1}`.
pub fn reflection_count(k: usize) -> Result<usize> {
    let plan = suzuki_stage_plan(k)?;
    // Expand symbolically: SECOND stages become R, evolve, R; adjacent
    // stages always differ in tag after merging, so the only cancellations
    // are within back-to-back SECOND realizations (which merging removed).
    let mut symbols: Vec<bool> = Vec::new(); // true = reflection, false = evolve
    for (tag, _) in &plan.stages {
        match tag {
            GeneratorTag::First => symbols.push(false),
            GeneratorTag::Second => {
                symbols.push(true);
                symbols.push(false);
                symbols.push(true);
            }
        }
    }
    // cancel adjacent R·R pairs
    let mut reduced: Vec<bool> = Vec::new();
    for s in symbols {
        if s && reduced.last() == Some(&true) {
            reduced.pop();
        } else {
            reduced.push(s);
        }
    }
    Ok(reduced.iter().filter(|&&s| s).count())
}

/// The nested-commutator sum
/// `α = Σ_{γ₁..γ_{2k+1}∈{1,2}} ‖[H_{γ_{2k+1}}, …, [H_{γ₂}, H_{γ₁}]]‖`
/// with `H₁ = H` and `H₂ = RHR`.
pub fn alpha_commutator_sum(sys: &SystemModel, k: usize) -> Result<f64> {
    if k == 0 || k > MAX_ALPHA_ORDER {
        return Err(ZenoError::UnsupportedRange(format!(
            "alpha_commutator_sum supports 1 <= k <= {MAX_ALPHA_ORDER}, got {k}"
        )));
    }
    let rhr = sys.rhr();
    let generators = [&sys.h, &rhr];
    let depth = 2 * k + 1;
    let mut total = 0.0;
    for mask in 0..(1u32 << depth) {
        let pick = |level: usize| generators[((mask >> level) & 1) as usize];
        let mut nested = pick(0).clone();
        for level in 1..depth {
            nested = commutator(pick(level), &nested)?;
        }
        total += nested.spectral_norm();
    }
    Ok(total)
}
