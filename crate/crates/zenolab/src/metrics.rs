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

//! Error metrics against the ideal Zeno targets, the analytic bound
//! evaluators, success probabilities, trace distance, and log-log slope
//! fitting with automatic regime windowing.

use num_complex::Complex64;

use crate::error::{Result, ZenoError};
use crate::operator::{commutator, expm, jacobi_eigh, OperatorMatrix, StateVector, I};
use crate::sequences::{
    higher_order_measurement_spec, measurement_zeno_spec, second_order_measurement_spec,
    validate_density_matrix,
};
use crate::system::SystemModel;

/// Points with y below this are excluded from fits as round-off noise.
pub const NOISE_FLOOR: f64 = 1e-14;
/// Relative local-slope consistency required inside an AUTO fit window.
pub const SLOPE_CONSISTENCY: f64 = 0.1;
/// Unit-circle eigenvalue clustering tolerance for [`bound_kick_general`].
pub const CLUSTER_TOL: f64 = 1e-8;
/// Tolerance on `psi0` normalization and `P psi0 = psi0`.
pub const STATE_TOL: f64 = 1e-10;

/// `‖U_seq - e^{-iPHPt}P‖`.
pub fn zeno_error_measurement(sys: &SystemModel, u_seq: &OperatorMatrix, t: f64) -> Result<f64> {
    if u_seq.dim() != sys.dim {
        return Err(ZenoError::DimMismatch(u_seq.dim(), sys.dim));
    }
    let target = expm(&sys.php().scale(-I * t))?.matmul(&sys.p);
    Ok(u_seq.sub(&target).spectral_norm())
}

/// Distance to the unitary Zeno target: `R^N e^{-iH_Z t}` when
/// `include_kick_phase` (with `n` the kick count), else `e^{-iH_Z t}`.
pub fn zeno_error_unitary(
    sys: &SystemModel,
    u_seq: &OperatorMatrix,
    t: f64,
    include_kick_phase: bool,
    n: usize,
) -> Result<f64> {
    if u_seq.dim() != sys.dim {
        return Err(ZenoError::DimMismatch(u_seq.dim(), sys.dim));
    }
    let mut target = expm(&sys.h_z.scale(-I * t))?;
    if include_kick_phase && n % 2 == 1 {
        target = sys.r.matmul(&target);
    }
    Ok(u_seq.sub(&target).spectral_norm())
}

/// First-order measurement bound `t²‖H‖²/N`.
pub fn bound_first_order(sys: &SystemModel, t: f64, n: usize) -> f64 {
    let h = sys.h.spectral_norm();
    t * t * h * h / n as f64
}

/// Second-order measurement bound `t³‖H‖³/(3N²)`.
pub fn bound_second_order(sys: &SystemModel, t: f64, n: usize) -> f64 {
    let h = sys.h.spectral_norm();
    t * t * t * h * h * h / (3.0 * (n * n) as f64)
}

/// Improved kick bound `t²‖[H, RHR]‖/(8N)`.
pub fn bound_kick_commutator(sys: &SystemModel, t: f64, n: usize) -> Result<f64> {
    let c = commutator(&sys.h, &sys.rhr())?;
    Ok(t * t * c.spectral_norm() / (8.0 * n as f64))
}

/// General kick bound `(2/N)(√m/η + 1) t‖H‖(1 + 2‖H‖t)` with `m` the number
/// of distinct eigenvalue clusters of `U_Z` on the unit circle and `η` the
/// minimum pairwise chordal gap between clusters.
pub fn bound_kick_general(
    u_z: &OperatorMatrix,
    h: &OperatorMatrix,
    t: f64,
    n: usize,
) -> Result<f64> {
    if u_z.dim() != h.dim() {
        return Err(ZenoError::DimMismatch(u_z.dim(), h.dim()));
    }
    if !u_z.is_unitary(1e-10) {
        return Err(ZenoError::InvalidArgument("U_Z is not unitary".into()));
    }
    if !h.is_hermitian(1e-10) {
        return Err(ZenoError::NotHermitian(1e-10));
    }
    let eigenvalues = unitary_eigenvalues(u_z);
    let mut clusters: Vec<Complex64> = Vec::new();
    for ev in eigenvalues {
        if !clusters.iter().any(|c| (c - ev).norm() < CLUSTER_TOL) {
            clusters.push(ev);
        }
    }
    let m = clusters.len();
    if m < 2 {
        return Err(ZenoError::InvalidArgument(
            "U_Z has a single eigenvalue cluster; no decoupling".into(),
        ));
    }
    let mut eta = f64::INFINITY;
    for i in 0..m {
        for j in (i + 1)..m {
            eta = eta.min((clusters[i] - clusters[j]).norm());
        }
    }
    let hn = h.spectral_norm();
    Ok((2.0 / n as f64) * ((m as f64).sqrt() / eta + 1.0) * t * hn * (1.0 + 2.0 * hn * t))
}

/// Eigenvalues of a unitary matrix via the Hermitian part `(U + U†)/2`,
/// refined per degenerate-cosine eigenspace with the anti-Hermitian part.
fn unitary_eigenvalues(u: &OperatorMatrix) -> Vec<Complex64> {
    let dim = u.dim();
    let half = Complex64::new(0.5, 0.0);
    let herm = u.add(&u.adjoint()).scale(half);
    let (cos_evals, mut vecs) = jacobi_eigh(&herm);
    let anti = u.sub(&u.adjoint()).scale(half * (-I));

    // group columns whose cosines coincide, then rotate each group to
    // diagonalize the sine part within it
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for idx in 0..dim {
        match groups.last_mut() {
            Some(g) if (cos_evals[idx] - cos_evals[g[0]]).abs() < CLUSTER_TOL => g.push(idx),
            _ => groups.push(vec![idx]),
        }
    }
    for g in &groups {
        if g.len() < 2 {
            continue;
        }
        let gsz = g.len();
        let mut sub = OperatorMatrix::zeros(gsz);
        for (a, &ca) in g.iter().enumerate() {
            for (b, &cb) in g.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..dim {
                    for jj in 0..dim {
                        acc += vecs[(i, ca)].conj() * anti[(i, jj)] * vecs[(jj, cb)];
                    }
                }
                sub[(a, b)] = acc;
            }
        }
        let (_, w) = jacobi_eigh(&sub);
        let old: Vec<Vec<Complex64>> = g
            .iter()
            .map(|&c| (0..dim).map(|i| vecs[(i, c)]).collect())
            .collect();
        for (b, &cb) in g.iter().enumerate() {
            for i in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for (a, col) in old.iter().enumerate() {
                    acc += col[i] * w[(a, b)];
                }
                vecs[(i, cb)] = acc;
            }
        }
    }

    (0..dim)
        .map(|c| {
            // Rayleigh quotient v† U v on the refined eigenvector
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..dim {
                for j in 0..dim {
                    acc += vecs[(i, c)].conj() * u[(i, j)] * vecs[(j, c)];
                }
            }
            // snap to the unit circle
            acc / acc.norm()
        })
        .collect()
}

/// Probability of all measurements succeeding over the full
/// measurement-family sequence, as the squared norm of the unnormalized
/// post-sequence state.
///
/// Families: `"first"`, `"second"`, `"higher"` (the last uses `k`).
pub fn success_probability(
    sys: &SystemModel,
    family: &str,
    k: usize,
    n: usize,
    t: f64,
    psi0: &StateVector,
) -> Result<f64> {
    if psi0.dim() != sys.dim {
        return Err(ZenoError::DimMismatch(psi0.dim(), sys.dim));
    }
    if !psi0.normalized(STATE_TOL) {
        return Err(ZenoError::InvalidArgument("psi0 is not normalized".into()));
    }
    let projected = psi0.apply(&sys.p);
    let leak: f64 = projected
        .amplitudes()
        .iter()
        .zip(psi0.amplitudes())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if leak > STATE_TOL {
        return Err(ZenoError::InvalidArgument(
            "psi0 is not in the range of P".into(),
        ));
    }
    let spec = match family {
        "first" => measurement_zeno_spec(n, t),
        "second" => second_order_measurement_spec(n, t),
        "higher" => higher_order_measurement_spec(k, n, t)?,
        other => {
            return Err(ZenoError::InvalidArgument(format!(
                "unknown measurement family '{other}'"
            )))
        }
    };
    let m = spec.compile(sys)?;
    let out = psi0.apply(&m);
    Ok(out.norm_sqr())
}

/// Trace distance `½‖ρ - σ‖₁`.
pub fn trace_distance(rho: &OperatorMatrix, sigma: &OperatorMatrix) -> Result<f64> {
    validate_density_matrix(rho)?;
    validate_density_matrix(sigma)?;
    if rho.dim() != sigma.dim() {
        return Err(ZenoError::DimMismatch(rho.dim(), sigma.dim()));
    }
    Ok(0.5 * rho.sub(sigma).trace_norm())
}

/// Window selection policy for [`fit_loglog`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WindowPolicy {
    /// Fit all usable points.
    Full,
    /// Largest contiguous window whose local slopes all sit within
    /// [`SLOPE_CONSISTENCY`] of the window's median local slope.
    AutoLargestConsistent,
    /// Explicit index range into the usable (above-floor) points.
    Explicit(std::ops::Range<usize>),
}

/// A log-log least-squares fit over a point window.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    /// The usable points the fit considered (noise-floored input order).
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    /// RMS residual in log space over the window.
    pub rms_residual: f64,
    /// Index range into `points` actually fitted.
    pub window: std::ops::Range<usize>,
}

/// Least-squares power-law fit in log space.
pub fn fit_loglog(points: &[(f64, f64)], policy: WindowPolicy) -> Result<ScalingFit> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .cloned()
        .filter(|&(x, y)| x > 0.0 && y > NOISE_FLOOR && x.is_finite() && y.is_finite())
        .collect();
    if usable.len() < 3 {
        return Err(ZenoError::FitFailure(format!(
            "need at least 3 usable points, have {}",
            usable.len()
        )));
    }
    let logs: Vec<(f64, f64)> = usable.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let window = match policy {
        WindowPolicy::Full => 0..usable.len(),
        WindowPolicy::Explicit(r) => {
            if r.start >= r.end || r.end > usable.len() || r.end - r.start < 2 {
                return Err(ZenoError::FitFailure(format!(
                    "explicit window {r:?} invalid for {} usable points",
                    usable.len()
                )));
            }
            r
        }
        WindowPolicy::AutoLargestConsistent => auto_window(&logs),
    };
    let seg = &logs[window.clone()];
    let n = seg.len() as f64;
    let sx: f64 = seg.iter().map(|p| p.0).sum();
    let sy: f64 = seg.iter().map(|p| p.1).sum();
    let sxx: f64 = seg.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = seg.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return Err(ZenoError::FitFailure("degenerate x values".into()));
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let rms = (seg
        .iter()
        .map(|&(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(ScalingFit {
        points: usable,
        slope,
        intercept,
        rms_residual: rms,
        window,
    })
}

fn auto_window(logs: &[(f64, f64)]) -> std::ops::Range<usize> {
    let n = logs.len();
    let local: Vec<f64> = (0..n - 1)
        .map(|i| (logs[i + 1].1 - logs[i].1) / (logs[i + 1].0 - logs[i].0))
        .collect();
    let consistent = |lo: usize, hi: usize| -> bool {
        // slopes local[lo..=hi]
        let mut seg: Vec<f64> = local[lo..=hi].to_vec();
        seg.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let med = if seg.len() % 2 == 1 {
            seg[seg.len() / 2]
        } else {
            0.5 * (seg[seg.len() / 2 - 1] + seg[seg.len() / 2])
        };
        local[lo..=hi]
            .iter()
            .all(|s| (s - med).abs() <= SLOPE_CONSISTENCY * med.abs())
    };
    let mut best = 0..2; // at minimum a two-point window exists
    let mut best_len = 0usize;
    for lo in 0..local.len() {
        for hi in lo..local.len() {
            if consistent(lo, hi) {
                let len = hi - lo + 2;
                // prefer longer windows, then later ones
                if len > best_len || (len == best_len && hi + 1 >= best.end) {
                    best = lo..hi + 2;
                    best_len = len;
                }
            }
        }
    }
    best
}
