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

//! Builders and evaluators for every Zeno sequence family: frequent
//! projective measurements, unitary kicks, higher-order Trotter-derived
//! sequences, compact short sequences with solved coefficients, UDD-timed
//! sequences, the exactly-averaged randomized channel, and continuous
//! sinusoidal control.

use num_complex::Complex64;

use crate::error::{Result, ZenoError};
use crate::operator::{expm, jacobi_eigh, time_ordered_propagator, OperatorMatrix, I};
use crate::system::SystemModel;
use crate::trotter::{build_trotter_step, suzuki_stage_plan, GeneratorTag};

/// Residual tolerance the compact coefficient solver must reach.
pub const COEFF_RESIDUAL_TOL: f64 = 1e-12;
/// Default quadrature points for [`phase_integral`].
pub const DEFAULT_QUAD_POINTS: usize = 1024;
/// Default integrator slices per drive period.
pub const DEFAULT_SLICES_PER_PERIOD: usize = 64;
/// Tolerance for density-matrix validation.
pub const DENSITY_TOL: f64 = 1e-10;

/// One element of a sequence, in time order (first applied first).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Primitive {
    /// Evolve under the tagged generator for the given duration.
    Evolve(GeneratorTag, f64),
    /// Apply the reflection `R`.
    Reflect,
    /// Apply the projector `P` (a completed measurement).
    Measure,
}

/// An ordered primitive list plus a repetition count; the compile target of
/// every builder. Compiling `N` repetitions equals the `N`-th matrix power
/// of a single compiled repetition.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceSpec {
    pub family: String,
    pub primitives: Vec<Primitive>,
    pub repetitions: usize,
}

impl SequenceSpec {
    pub fn new(family: &str, primitives: Vec<Primitive>, repetitions: usize) -> Self {
        Self { family: family.to_string(), primitives, repetitions }
    }

    pub fn reflect_count(&self) -> usize {
        self.primitives.iter().filter(|p| matches!(p, Primitive::Reflect)).count()
    }

    pub fn measure_count(&self) -> usize {
        self.primitives.iter().filter(|p| matches!(p, Primitive::Measure)).count()
    }

    /// Compiles one repetition to a matrix.
    pub fn compile_single(&self, sys: &SystemModel) -> Result<OperatorMatrix> {
        let rhr = sys.rhr();
        let mut u = OperatorMatrix::identity(sys.dim);
        for prim in &self.primitives {
            let m = match prim {
                Primitive::Evolve(tag, dur) => {
                    if !dur.is_finite() {
                        return Err(ZenoError::InvalidArgument("non-finite duration".into()));
                    }
                    let gen = match tag {
                        GeneratorTag::First => &sys.h,
                        GeneratorTag::Second => &rhr,
                    };
                    expm(&gen.scale(-I * *dur))?
                }
                Primitive::Reflect => sys.r.clone(),
                Primitive::Measure => sys.p.clone(),
            };
            u = m.matmul(&u);
        }
        Ok(u)
    }

    /// Compiles all `repetitions` repetitions.
    pub fn compile(&self, sys: &SystemModel) -> Result<OperatorMatrix> {
        Ok(self.compile_single(sys)?.pow(self.repetitions))
    }

    /// Plain-text export: one row per primitive,
    /// `EVOLVE,<tag>,<duration>` / `REFLECT` / `MEASURE`.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for prim in &self.primitives {
            match prim {
                Primitive::Evolve(tag, dur) => {
                    let name = match tag {
                        GeneratorTag::First => "H",
                        GeneratorTag::Second => "RHR",
                    };
                    out.push_str(&format!("EVOLVE,{name},{dur:.17e}\n"));
                }
                Primitive::Reflect => out.push_str("REFLECT\n"),
                Primitive::Measure => out.push_str("MEASURE\n"),
            }
        }
        out
    }
}

/// First-order measurement sequence `(P e^{-iH t/N} P)^N`.
pub fn measurement_zeno_spec(n: usize, t: f64) -> SequenceSpec {
    let dt = t / n as f64;
    SequenceSpec::new(
        "measurement",
        vec![
            Primitive::Measure,
            Primitive::Evolve(GeneratorTag::First, dt),
            Primitive::Measure,
        ],
        n,
    )
}

pub fn measurement_zeno(sys: &SystemModel, n: usize, t: f64) -> Result<OperatorMatrix> {
    measurement_zeno_spec(n, t).compile(sys)
}

/// Second-order measurement sequence
/// `(P e^{-iHΔt/2} R e^{-iHΔt/2} P)^N` with `Δt = t/N`.
pub fn second_order_measurement_spec(n: usize, t: f64) -> SequenceSpec {
    let dt = t / n as f64;
    SequenceSpec::new(
        "measurement2",
        vec![
            Primitive::Measure,
            Primitive::Evolve(GeneratorTag::First, dt / 2.0),
            Primitive::Reflect,
            Primitive::Evolve(GeneratorTag::First, dt / 2.0),
            Primitive::Measure,
        ],
        n,
    )
}

pub fn second_order_measurement(sys: &SystemModel, n: usize, t: f64) -> Result<OperatorMatrix> {
    second_order_measurement_spec(n, t).compile(sys)
}

/// Order-`2k` measurement sequence `(P S_{2k} P)^N` with step `t/N`.
pub fn higher_order_measurement_spec(k: usize, n: usize, t: f64) -> Result<SequenceSpec> {
    let dt = t / n as f64;
    let plan = suzuki_stage_plan(k)?;
    let mut prims = vec![Primitive::Measure];
    for (tag, c) in &plan.stages {
        prims.push(Primitive::Evolve(*tag, c * dt / 2.0));
    }
    prims.push(Primitive::Measure);
    Ok(SequenceSpec::new("measurement2k", prims, n))
}

pub fn higher_order_measurement(
    sys: &SystemModel,
    k: usize,
    n: usize,
    t: f64,
) -> Result<OperatorMatrix> {
    higher_order_measurement_spec(k, n, t)?.compile(sys)
}

/// Kick sequence `(R e^{-iH t/N})^N`.
pub fn kick_zeno_spec(n: usize, t: f64) -> SequenceSpec {
    let dt = t / n as f64;
    SequenceSpec::new(
        "kick",
        vec![Primitive::Evolve(GeneratorTag::First, dt), Primitive::Reflect],
        n,
    )
}

pub fn kick_zeno(sys: &SystemModel, n: usize, t: f64) -> Result<OperatorMatrix> {
    kick_zeno_spec(n, t).compile(sys)
}

/// Order-`2k` kick sequence `S_{2k}^N` with step `t/N`.
pub fn higher_order_kick_spec(k: usize, n: usize, t: f64) -> Result<SequenceSpec> {
    let dt = t / n as f64;
    let plan = suzuki_stage_plan(k)?;
    let prims = plan
        .stages
        .iter()
        .map(|(tag, c)| Primitive::Evolve(*tag, c * dt / 2.0))
        .collect();
    Ok(SequenceSpec::new("kick2k", prims, n))
}

pub fn higher_order_kick(sys: &SystemModel, k: usize, n: usize, t: f64) -> Result<OperatorMatrix> {
    higher_order_kick_spec(k, n, t)?.compile(sys)
}

/// Coefficients of the compact three- or five-reflection sequences, with the
/// per-equation residuals of their defining systems.
#[derive(Debug, Clone, PartialEq)]
pub struct CompactCoefficients {
    pub order: usize,
    pub values: Vec<f64>,
    pub residuals: Vec<f64>,
}

impl CompactCoefficients {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }
}

fn order3_residuals(alpha: f64, beta: f64) -> Vec<f64> {
    vec![(alpha + beta - 0.5).abs(), (8.0 * alpha * beta * beta - 1.0 / 6.0).abs()]
}

fn order4_system(v: [f64; 3]) -> [f64; 3] {
    let [a, b, g] = v;
    [
        a + b + g - 0.5,
        8.0 * b * (a * b + 2.0 * a * g + g * g) - 1.0 / 6.0,
        8.0 * b * (a * a * b + 2.0 * a * a * g + 2.0 * a * g * g + b * g * g) - 1.0 / 24.0,
    ]
}

fn order4_jacobian(v: [f64; 3]) -> [[f64; 3]; 3] {
    let [a, b, g] = v;
    [
        [1.0, 1.0, 1.0],
        [
            8.0 * b * (b + 2.0 * g),
            8.0 * (a * b + 2.0 * a * g + g * g) + 8.0 * b * a,
            8.0 * b * (2.0 * a + 2.0 * g),
        ],
        [
            8.0 * b * (2.0 * a * b + 4.0 * a * g + 2.0 * g * g),
            8.0 * (a * a * b + 2.0 * a * a * g + 2.0 * a * g * g + b * g * g)
                + 8.0 * b * (a * a + g * g),
            8.0 * b * (2.0 * a * a + 4.0 * a * g + 2.0 * b * g),
        ],
    ]
}

fn solve3x3(m: [[f64; 3]; 3], rhs: [f64; 3]) -> Option<[f64; 3]> {
    // Gaussian elimination with partial pivoting
    let mut a = [[0.0f64; 4]; 3];
    for i in 0..3 {
        a[i][..3].copy_from_slice(&m[i]);
        a[i][3] = rhs[i];
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[piv][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, piv);
        for row in (col + 1)..3 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    let mut x = [0.0f64; 3];
    for i in (0..3).rev() {
        let mut acc = a[i][3];
        for j in (i + 1)..3 {
            acc -= a[i][j] * x[j];
        }
        x[i] = acc / a[i][i];
    }
    Some(x)
}

/// Solves the compact-sequence coefficient systems.
///
/// Order 3: substitutes `β = 1/2 - α` into `8αβ² = 1/6` and runs damped
/// Newton from the starts `{0.1, 0.7, 1.3}`, selecting the real root with
/// `α ∈ (0.5, 1)`. Order 4: damped Newton on the three-equation system from
/// a grid of starts in `[-1, 1]³`, selecting among converged solutions the
/// one minimizing `max(|α|, |β|, |γ|)`.
pub fn solve_compact_coefficients(order: usize) -> Result<CompactCoefficients> {
    match order {
        3 => {
            let f = |a: f64| 8.0 * a * (0.5 - a) * (0.5 - a) - 1.0 / 6.0;
            let df = |a: f64| 8.0 * (0.5 - a) * (0.5 - a) - 16.0 * a * (0.5 - a);
            let mut roots: Vec<f64> = Vec::new();
            for start in [0.1, 0.7, 1.3] {
                let mut a = start;
                for _ in 0..200 {
                    let r = f(a);
                    if r.abs() < 1e-15 {
                        break;
                    }
                    let d = df(a);
                    if d.abs() < 1e-14 {
                        a += 1e-3;
                        continue;
                    }
                    let mut step = r / d;
                    // damp: halve until the residual does not grow
                    let mut lambda = 1.0;
                    while lambda > 1e-6 && f(a - lambda * step).abs() > r.abs() {
                        lambda *= 0.5;
                    }
                    step *= lambda;
                    a -= step;
                    if step.abs() < 1e-16 {
                        break;
                    }
                }
                if f(a).abs() < COEFF_RESIDUAL_TOL
                    && !roots.iter().any(|&r| (r - a).abs() < 1e-8)
                {
                    roots.push(a);
                }
            }
            let alpha = roots
                .iter()
                .cloned()
                .find(|&a| a > 0.5 && a < 1.0)
                .ok_or_else(|| {
                    ZenoError::SolverFailure("no order-3 root with alpha in (0.5, 1)".into())
                })?;
            let beta = 0.5 - alpha;
            Ok(CompactCoefficients {
                order: 3,
                values: vec![alpha, beta],
                residuals: order3_residuals(alpha, beta),
            })
        }
        4 => {
            let mut solutions: Vec<[f64; 3]> = Vec::new();
            let grid: Vec<f64> = (0..9).map(|i| -1.0 + 0.25 * i as f64).collect();
            for &a0 in &grid {
                for &b0 in &grid {
                    for &g0 in &grid {
                        let mut v = [a0, b0, g0];
                        for _ in 0..200 {
                            let r = order4_system(v);
                            let rn = r.iter().map(|x| x.abs()).fold(0.0, f64::max);
                            if rn < 1e-14 {
                                break;
                            }
                            let Some(dv) = solve3x3(order4_jacobian(v), r) else { break };
                            let mut lambda = 1.0;
                            let mut next;
                            loop {
                                next = [
                                    v[0] - lambda * dv[0],
                                    v[1] - lambda * dv[1],
                                    v[2] - lambda * dv[2],
                                ];
                                let nn = order4_system(next)
                                    .iter()
                                    .map(|x| x.abs())
                                    .fold(0.0, f64::max);
                                if nn <= rn || lambda < 1e-6 {
                                    break;
                                }
                                lambda *= 0.5;
                            }
                            v = next;
                        }
                        let rn = order4_system(v).iter().map(|x| x.abs()).fold(0.0, f64::max);
                        if rn < COEFF_RESIDUAL_TOL
                            && v.iter().all(|x| x.is_finite())
                            && !solutions
                                .iter()
                                .any(|s| s.iter().zip(&v).all(|(a, b)| (a - b).abs() < 1e-8))
                        {
                            solutions.push(v);
                        }
                    }
                }
            }
            let best = solutions
                .into_iter()
                .min_by(|a, b| {
                    let ma = a.iter().map(|x| x.abs()).fold(0.0, f64::max);
                    let mb = b.iter().map(|x| x.abs()).fold(0.0, f64::max);
                    ma.partial_cmp(&mb).unwrap()
                })
                .ok_or_else(|| ZenoError::SolverFailure("no order-4 solution found".into()))?;
            let res = order4_system(best);
            Ok(CompactCoefficients {
                order: 4,
                values: best.to_vec(),
                residuals: res.iter().map(|x| x.abs()).collect(),
            })
        }
        other => Err(ZenoError::UnsupportedRange(format!(
            "compact order must be 3 or 4, got {other}"
        ))),
    }
}

/// Builds the compact sequence spec for a single step of size `dt`.
///
/// With measurements, order 3 is
/// `P e^{-iαHΔt} R e^{-iβHΔt} R e^{-iβHΔt} R e^{-iαHΔt} P` (3 reflections)
/// and order 4 the analogous 5-reflection palindrome. Without measurements
/// the same reflection pattern is applied as unitary kicks only: one pass has
/// odd reflection parity, so the kick realization applies two half-step
/// passes back to back. The dangling reflections cancel against each other
/// and the combined generator string is a palindrome, so the step converges
/// to `e^{-iH_Z dt}` at third order.
pub fn compact_sequence_spec(
    coeffs: &CompactCoefficients,
    dt: f64,
    with_measurements: bool,
) -> Result<SequenceSpec> {
    if coeffs.max_residual() >= COEFF_RESIDUAL_TOL {
        return Err(ZenoError::InvalidArgument(format!(
            "compact coefficients have residual {:.3e} >= {COEFF_RESIDUAL_TOL:.0e}",
            coeffs.max_residual()
        )));
    }
    let segs: Vec<f64> = match (coeffs.order, coeffs.values.as_slice()) {
        (3, [a, b]) => vec![*a, *b, *b, *a],
        (4, [a, b, g]) => vec![*a, *b, *g, *g, *b, *a],
        _ => {
            return Err(ZenoError::InvalidArgument(
                "mismatched compact order/values".into(),
            ))
        }
    };
    let body = |step: f64| {
        let mut prims = Vec::new();
        for (idx, c) in segs.iter().enumerate() {
            if idx > 0 {
                prims.push(Primitive::Reflect);
            }
            prims.push(Primitive::Evolve(GeneratorTag::First, c * step));
        }
        prims
    };
    if with_measurements {
        let mut prims = vec![Primitive::Measure];
        prims.extend(body(dt));
        prims.push(Primitive::Measure);
        Ok(SequenceSpec::new(&format!("compact{}", coeffs.order), prims, 1))
    } else {
        // two half-step passes; the odd reflection parity of each pass
        // cancels against the next, leaving a time-symmetric product
        let mut prims = body(dt / 2.0);
        prims.extend(body(dt / 2.0));
        Ok(SequenceSpec::new(&format!("compact{}_kick", coeffs.order), prims, 1))
    }
}

pub fn compact_sequence(
    sys: &SystemModel,
    coeffs: &CompactCoefficients,
    dt: f64,
    with_measurements: bool,
) -> Result<OperatorMatrix> {
    compact_sequence_spec(coeffs, dt, with_measurements)?.compile(sys)
}

/// UDD switching times `t_j = Δt sin²(jπ / (2(k+1)))`.
pub fn udd_times(k: usize, dt: f64) -> Vec<f64> {
    (0..=k + 1)
        .map(|j| {
            let s = (j as f64 * std::f64::consts::PI / (2.0 * (k + 1) as f64)).sin();
            dt * s * s
        })
        .collect()
}

/// UDD-timed Zeno sequence over one step of size `dt`.
///
/// Realizes the piecewise-constant alternation between `H` and `RHR` on the
/// UDD intervals: `e^{-iH t₁}` then reflections around each subsequent
/// interval. For odd `k` an extra trailing reflection restores even
/// reflection parity so the sequence converges to `e^{-iH_Z dt}`.
pub fn udd_sequence_spec(k: usize, dt: f64) -> Result<SequenceSpec> {
    if k == 0 {
        return Err(ZenoError::UnsupportedRange("udd requires k >= 1".into()));
    }
    let times = udd_times(k, dt);
    let mut prims = Vec::new();
    for j in 0..=k {
        if j > 0 {
            prims.push(Primitive::Reflect);
        }
        prims.push(Primitive::Evolve(GeneratorTag::First, times[j + 1] - times[j]));
    }
    if k % 2 == 1 {
        prims.push(Primitive::Reflect);
    }
    Ok(SequenceSpec::new("udd", prims, 1))
}

pub fn udd_sequence(sys: &SystemModel, k: usize, dt: f64) -> Result<OperatorMatrix> {
    udd_sequence_spec(k, dt)?.compile(sys)
}

/// Validates a density matrix: Hermitian, positive semidefinite, unit trace,
/// all to [`DENSITY_TOL`].
pub fn validate_density_matrix(rho: &OperatorMatrix) -> Result<()> {
    if !rho.is_hermitian(DENSITY_TOL) {
        return Err(ZenoError::NotDensityMatrix("not Hermitian".into()));
    }
    if (rho.trace().re - 1.0).abs() > DENSITY_TOL || rho.trace().im.abs() > DENSITY_TOL {
        return Err(ZenoError::NotDensityMatrix("trace != 1".into()));
    }
    let (evals, _) = jacobi_eigh(rho);
    if evals.iter().any(|&l| l < -DENSITY_TOL) {
        return Err(ZenoError::NotDensityMatrix("negative eigenvalue".into()));
    }
    Ok(())
}

/// Applies the exactly-averaged randomized channel
/// `E(ρ) = ½ S ρ S† + ½ (RSR) ρ (RSR)†` with `S = S_{2k}^N`, step `t/N`.
pub fn randomized_channel_apply(
    sys: &SystemModel,
    k: usize,
    n: usize,
    t: f64,
    rho: &OperatorMatrix,
) -> Result<OperatorMatrix> {
    validate_density_matrix(rho)?;
    if rho.dim() != sys.dim {
        return Err(ZenoError::DimMismatch(rho.dim(), sys.dim));
    }
    let s = build_trotter_step(sys, k, t / n as f64)?.pow(n);
    let rsr = sys.r.matmul(&s).matmul(&sys.r);
    let half = Complex64::new(0.5, 0.0);
    let branch_a = s.matmul(rho).matmul(&s.adjoint());
    let branch_b = rsr.matmul(rho).matmul(&rsr.adjoint());
    Ok(branch_a.scale(half).add(&branch_b.scale(half)))
}

/// Sinusoidal control field `φ(t) = α (2π/T) sin(2πt/T)`.
pub fn control_field(alpha_f: f64, period: f64, t: f64) -> f64 {
    let w = 2.0 * std::f64::consts::PI / period;
    alpha_f * w * (w * t).sin()
}

/// Propagates `H_tot(t) = H + φ(t) P` over `periods` full drive periods with
/// the midpoint exponential rule (`slices_per_period` slices per period).
pub fn continuous_control_propagator(
    h: &OperatorMatrix,
    p: &OperatorMatrix,
    alpha_f: f64,
    period: f64,
    periods: usize,
    slices_per_period: usize,
) -> Result<OperatorMatrix> {
    if h.dim() != p.dim() {
        return Err(ZenoError::DimMismatch(h.dim(), p.dim()));
    }
    if periods == 0 || slices_per_period == 0 {
        return Err(ZenoError::InvalidArgument(
            "periods and slices_per_period must be >= 1".into(),
        ));
    }
    let total = period * periods as f64;
    time_ordered_propagator(
        |t| {
            let phi = control_field(alpha_f, period, t);
            h.add(&p.scale(Complex64::new(phi, 0.0)))
        },
        0.0,
        total,
        periods * slices_per_period,
    )
}

/// Bessel function `J₀` evaluated by the (spectrally convergent) trapezoid
/// rule on its full-period integral representation
/// `J₀(x) = (1/2π) ∫₀^{2π} cos(x sin θ) dθ`.
pub fn bessel_j0(x: f64) -> f64 {
    const POINTS: usize = 256;
    let mut acc = 0.0;
    for j in 0..POINTS {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / POINTS as f64;
        acc += (x * theta.sin()).cos();
    }
    acc / POINTS as f64
}

/// The `n`-th positive zero of `J₀`, by bisection. Supports `n ≤ 5`.
pub fn bessel_j0_zero(n: usize) -> Result<f64> {
    if n == 0 || n > 5 {
        return Err(ZenoError::UnsupportedRange(format!(
            "bessel_j0_zero supports 1 <= n <= 5, got {n}"
        )));
    }
    // asymptotically the n-th zero sits near (n - 1/4)π; a ±0.6 bracket
    // isolates it for n <= 5
    let center = (n as f64 - 0.25) * std::f64::consts::PI;
    let mut lo = center - 0.6;
    let mut hi = center + 0.6;
    let flo = bessel_j0(lo);
    if flo * bessel_j0(hi) > 0.0 {
        return Err(ZenoError::SolverFailure("bisection bracket failed".into()));
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        let fm = bessel_j0(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if flo.signum() == fm.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The first-order Magnus integral `∫₀ᵀ e^{iΦ(t)} dt` for the sinusoidal
/// field, with `Φ(t) = α(1 - cos(2πt/T))`, by composite Simpson quadrature.
/// Equals `T e^{iα} J₀(α)` in closed form.
pub fn phase_integral(alpha_f: f64, period: f64, quad_points: usize) -> Result<Complex64> {
    if quad_points < 64 {
        return Err(ZenoError::InvalidArgument(
            "phase_integral needs quad_points >= 64".into(),
        ));
    }
    let n = if quad_points % 2 == 0 { quad_points } else { quad_points + 1 };
    let h = period / n as f64;
    let f = |t: f64| {
        let phi = alpha_f * (1.0 - (2.0 * std::f64::consts::PI * t / period).cos());
        Complex64::new(phi.cos(), phi.sin())
    };
    let mut acc = f(0.0) + f(period);
    for j in 1..n {
        let w = if j % 2 == 1 { 4.0 } else { 2.0 };
        acc += f(j as f64 * h).scale(w);
    }
    Ok(acc.scale(h / 3.0))
}
