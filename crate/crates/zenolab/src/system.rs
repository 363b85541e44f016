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

//! Hamiltonian/projector structure: the complement `Q`, the reflection
//! `R = P - Q`, the block decomposition `H = H_Z + H_PQ`, and the norms
//! `β = ‖H_Z‖` and `J = ‖H_PQ‖`, together with the two-qubit worked example
//! and seeded random instances for the property suites.

use num_complex::Complex64;

use crate::error::{Result, ZenoError};
use crate::operator::{kron, pauli_x, pauli_z, OperatorMatrix};

/// Hermiticity / idempotency tolerance for inputs to [`build_system`].
pub const STRUCTURE_TOL: f64 = 1e-10;

/// A Hamiltonian/projector pair with its derived Zeno structure.
#[derive(Debug, Clone)]
pub struct SystemModel {
    pub dim: usize,
    /// The Hamiltonian.
    pub h: OperatorMatrix,
    /// The measurement projector.
    pub p: OperatorMatrix,
    /// Complement projector `1 - P`.
    pub q: OperatorMatrix,
    /// Reflection `P - Q = 2P - 1`.
    pub r: OperatorMatrix,
    /// Zeno Hamiltonian `PHP + QHQ`.
    pub h_z: OperatorMatrix,
    /// Coupling block `PHQ + QHP`.
    pub h_pq: OperatorMatrix,
    /// `‖H_Z‖`.
    pub beta: f64,
    /// `‖H_PQ‖`.
    pub j: f64,
}

impl SystemModel {
    /// `RHR = H_Z - H_PQ`.
    pub fn rhr(&self) -> OperatorMatrix {
        self.r.matmul(&self.h).matmul(&self.r)
    }

    /// `PHP`, the generator of the in-block Zeno dynamics.
    pub fn php(&self) -> OperatorMatrix {
        self.p.matmul(&self.h).matmul(&self.p)
    }
}

/// Derives `Q`, `R`, `H_Z`, `H_PQ`, `β`, `J` from a Hamiltonian and a
/// projector, validating the structural preconditions.
pub fn build_system(h: &OperatorMatrix, p: &OperatorMatrix) -> Result<SystemModel> {
    if h.dim() != p.dim() {
        return Err(ZenoError::DimMismatch(h.dim(), p.dim()));
    }
    if !h.is_finite() || !p.is_finite() {
        return Err(ZenoError::InvalidArgument("non-finite entries".into()));
    }
    if !h.is_hermitian(STRUCTURE_TOL) {
        return Err(ZenoError::NotHermitian(STRUCTURE_TOL));
    }
    if !p.is_projector(STRUCTURE_TOL) {
        return Err(ZenoError::NotProjector(STRUCTURE_TOL));
    }
    let dim = h.dim();
    let q = OperatorMatrix::identity(dim).sub(p);
    let r = p.sub(&q);
    let h_z = p.matmul(h).matmul(p).add(&q.matmul(h).matmul(&q));
    let h_pq = p.matmul(h).matmul(&q).add(&q.matmul(h).matmul(p));
    let beta = h_z.spectral_norm();
    let j = h_pq.spectral_norm();
    Ok(SystemModel {
        dim,
        h: h.clone(),
        p: p.clone(),
        q,
        r,
        h_z,
        h_pq,
        beta,
        j,
    })
}

/// The two-qubit example `H = β Z⊗Z + (J/2)(X⊗1 + 1⊗X)` with
/// `P = (1 + Z⊗Z)/2`, so that `R = Z⊗Z`.
pub fn example_zz_x(beta: f64, j: f64) -> SystemModel {
    let i2 = OperatorMatrix::identity(2);
    let zz = kron(&pauli_z(), &pauli_z());
    let coupling = kron(&pauli_x(), &i2).add(&kron(&i2, &pauli_x()));
    let h = zz
        .scale(Complex64::new(beta, 0.0))
        .add(&coupling.scale(Complex64::new(j / 2.0, 0.0)));
    let p = OperatorMatrix::identity(4).add(&zz).scale(Complex64::new(0.5, 0.0));
    build_system(&h, &p).expect("example system is always valid")
}

/// Deterministic counter-based generator: SplitMix64.
///
/// Every call to [`SplitMix64::next_u64`] advances a 64-bit counter by the
/// golden-ratio increment and scrambles it; the stream for a given seed is
/// identical across platforms and implementations.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in `(0, 1]` (open at zero so logs are safe).
    pub fn next_f64(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 1.0) / (1u64 << 53) as f64
    }

    /// Standard normal via Box-Muller.
    pub fn next_normal(&mut self) -> f64 {
        let u1 = self.next_f64();
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Standard complex normal (independent real and imaginary parts).
    pub fn next_complex_normal(&mut self) -> Complex64 {
        Complex64::new(self.next_normal(), self.next_normal())
    }
}

/// Draws a random system: `H = (G + G†)/2` normalized to `‖H‖ = 1` with `G`
/// standard complex normal, and `P` a rank-`rank` projector from a seeded
/// orthonormal frame (modified Gram-Schmidt). Deterministic for fixed seed.
pub fn random_system(dim: usize, rank: usize, seed: u64) -> Result<SystemModel> {
    if rank == 0 || rank >= dim {
        return Err(ZenoError::UnsupportedRange(format!(
            "rank must satisfy 1 <= rank < dim, got rank {rank} dim {dim}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let mut g = OperatorMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            g[(i, j)] = rng.next_complex_normal();
        }
    }
    let mut h = g.add(&g.adjoint()).scale(Complex64::new(0.5, 0.0));
    let norm = h.spectral_norm();
    if norm > 0.0 {
        h = h.scale(Complex64::new(1.0 / norm, 0.0));
    }

    // rank orthonormal vectors by modified Gram-Schmidt
    let mut frame: Vec<Vec<Complex64>> = Vec::with_capacity(rank);
    while frame.len() < rank {
        let mut v: Vec<Complex64> = (0..dim).map(|_| rng.next_complex_normal()).collect();
        for u in &frame {
            let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= proj * ui;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n < 1e-8 {
            continue; // degenerate draw; take the next one
        }
        for z in v.iter_mut() {
            *z /= n;
        }
        frame.push(v);
    }
    let mut p = OperatorMatrix::zeros(dim);
    for u in &frame {
        for i in 0..dim {
            for j in 0..dim {
                p[(i, j)] += u[i] * u[j].conj();
            }
        }
    }
    build_system(&h, &p)
}

/// Parses a plain-text system descriptor.
///
/// Two forms are accepted:
///  - a preset `zz_x:beta=<b>,J=<j>`;
///  - a descriptor body with lines `dim = <d>`, `H = re,im re,im ...`,
///    `P = re,im re,im ...` (row-major, `dim²` pairs each).
pub fn parse_system_descriptor(text: &str) -> Result<SystemModel> {
    let trimmed = text.trim();
    if let Some(rest) = trimmed.strip_prefix("zz_x:") {
        let mut beta = None;
        let mut j = None;
        for part in rest.split(',') {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| ZenoError::Config(format!("bad preset parameter '{part}'")))?;
            let parsed: f64 = val
                .trim()
                .parse()
                .map_err(|_| ZenoError::Config(format!("bad number '{val}'")))?;
            match key.trim() {
                "beta" => beta = Some(parsed),
                "J" | "j" => j = Some(parsed),
                other => return Err(ZenoError::Config(format!("unknown preset key '{other}'"))),
            }
        }
        let beta = beta.ok_or_else(|| ZenoError::Config("preset missing beta".into()))?;
        let j = j.ok_or_else(|| ZenoError::Config("preset missing J".into()))?;
        return Ok(example_zz_x(beta, j));
    }

    let mut dim: Option<usize> = None;
    let mut h: Option<OperatorMatrix> = None;
    let mut p: Option<OperatorMatrix> = None;
    for line in trimmed.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, val) = line
            .split_once('=')
            .ok_or_else(|| ZenoError::Config(format!("bad descriptor line '{line}'")))?;
        match key.trim() {
            "dim" => {
                dim = Some(
                    val.trim()
                        .parse()
                        .map_err(|_| ZenoError::Config(format!("bad dim '{val}'")))?,
                )
            }
            "H" | "P" => {
                let d = dim.ok_or_else(|| ZenoError::Config("dim must come first".into()))?;
                let entries = parse_complex_list(val)?;
                let m = OperatorMatrix::from_entries(d, entries)
                    .map_err(|e| ZenoError::Config(e.to_string()))?;
                if key.trim() == "H" {
                    h = Some(m);
                } else {
                    p = Some(m);
                }
            }
            other => return Err(ZenoError::Config(format!("unknown descriptor key '{other}'"))),
        }
    }
    let h = h.ok_or_else(|| ZenoError::Config("descriptor missing H".into()))?;
    let p = p.ok_or_else(|| ZenoError::Config("descriptor missing P".into()))?;
    build_system(&h, &p)
}

/// Serializes a system to the descriptor format parsed above.
pub fn format_system_descriptor(sys: &SystemModel) -> String {
    let fmt = |m: &OperatorMatrix| {
        m.entries()
            .iter()
            .map(|z| format!("{:.17e},{:.17e}", z.re, z.im))
            .collect::<Vec<_>>()
            .join(" ")
    };
    format!("dim = {}\nH = {}\nP = {}\n", sys.dim, fmt(&sys.h), fmt(&sys.p))
}

fn parse_complex_list(val: &str) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for tok in val.split_whitespace() {
        let (re, im) = tok
            .split_once(',')
            .ok_or_else(|| ZenoError::Config(format!("expected 're,im', got '{tok}'")))?;
        let re: f64 = re
            .parse()
            .map_err(|_| ZenoError::Config(format!("bad number '{re}'")))?;
        let im: f64 = im
            .parse()
            .map_err(|_| ZenoError::Config(format!("bad number '{im}'")))?;
        out.push(Complex64::new(re, im));
    }
    Ok(out)
}
