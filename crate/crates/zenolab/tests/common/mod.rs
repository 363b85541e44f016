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

//! Independent numerical oracles shared by the test suites. These
//! deliberately use different algorithms than the library routines they
//! check.

#![allow(dead_code)]

use num_complex::Complex64;
use zenolab::operator::{jacobi_eigh, OperatorMatrix};
use zenolab::system::SplitMix64;

/// Singular values by one-sided (Hestenes) Jacobi: rotate column pairs of
/// `M` until all columns are mutually orthogonal; the singular values are
/// the final column norms. Returned in descending order.
pub fn jacobi_svd_values(m: &OperatorMatrix) -> Vec<f64> {
    let d = m.dim();
    let mut cols: Vec<Vec<Complex64>> = (0..d)
        .map(|c| (0..d).map(|r| m[(r, c)]).collect())
        .collect();
    let scale: f64 = cols
        .iter()
        .flat_map(|c| c.iter())
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
        .max(1e-300);
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..d {
            for q in (p + 1)..d {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[p]
                    .iter()
                    .zip(&cols[q])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                if gamma.norm() <= 1e-14 * scale * scale {
                    continue;
                }
                rotated = true;
                let abs = gamma.norm();
                let phase = gamma / abs;
                let theta = 0.5 * (2.0 * abs).atan2(beta - alpha);
                let c = theta.cos();
                let sp = phase * theta.sin();
                for i in 0..d {
                    let ap = cols[p][i];
                    let aq = cols[q][i];
                    cols[p][i] = ap * c - aq * sp.conj();
                    cols[q][i] = ap * sp + aq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// `e^{factor · H}` for Hermitian `H` through its eigendecomposition.
pub fn expm_eig_oracle(h: &OperatorMatrix, factor: Complex64) -> OperatorMatrix {
    let d = h.dim();
    let (evals, v) = jacobi_eigh(h);
    let mut out = OperatorMatrix::zeros(d);
    for k in 0..d {
        let phase = (factor * evals[k]).exp();
        for i in 0..d {
            for j in 0..d {
                out[(i, j)] += phase * v[(i, k)] * v[(j, k)].conj();
            }
        }
    }
    out
}

/// Seeded random dense matrix with standard complex normal entries.
pub fn random_matrix(dim: usize, seed: u64) -> OperatorMatrix {
    let mut rng = SplitMix64::new(seed);
    let mut m = OperatorMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            m[(i, j)] = rng.next_complex_normal();
        }
    }
    m
}

/// Seeded random Hermitian matrix.
pub fn random_hermitian(dim: usize, seed: u64) -> OperatorMatrix {
    let g = random_matrix(dim, seed);
    g.add(&g.adjoint()).scale(Complex64::new(0.5, 0.0))
}

/// Seeded random density matrix (normalized Gram matrix).
pub fn random_density(dim: usize, seed: u64) -> OperatorMatrix {
    let g = random_matrix(dim, seed);
    let rho = g.matmul(&g.adjoint());
    let tr = rho.trace().re;
    rho.scale(Complex64::new(1.0 / tr, 0.0))
}

pub fn logspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    let (l0, l1) = (start.ln(), stop.ln());
    (0..count)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let sx: f64 = logs.iter().map(|p| p.0).sum();
    let sy: f64 = logs.iter().map(|p| p.1).sum();
    let sxx: f64 = logs.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = logs.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
