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

//! Dense complex matrix arithmetic and the numerical primitives the rest of
//! the crate is built on: matrix exponential, spectral and trace norms,
//! commutators, tensor products, and a time-ordered propagator for
//! time-dependent generators.
//!
//! Everything here operates on small dense matrices (dimensions up to a few
//! tens) stored row-major. All functions are pure.

use num_complex::Complex64;

use crate::error::{Result, ZenoError};

/// Local truncation target for the exponential series after scaling.
pub const EXPM_SERIES_TOL: f64 = 1e-16;
/// Norm threshold below which the exponential series is summed directly.
pub const EXPM_SCALE_LIMIT: f64 = 0.5;
/// Convergence tolerance for the power iteration behind [`OperatorMatrix::spectral_norm`].
pub const POWER_ITER_TOL: f64 = 1e-13;
/// Off-diagonal tolerance for the Jacobi eigensolver.
pub const JACOBI_TOL: f64 = 1e-13;
/// Hermiticity tolerance enforced by [`time_ordered_propagator`] on each slice.
pub const SLICE_HERMITICITY_TOL: f64 = 1e-10;

pub const I: Complex64 = Complex64::new(0.0, 1.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A square complex matrix with a fixed row-major entry layout.
///
/// The universal carrier for Hamiltonians, projectors, reflections,
/// propagators, and density matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Self { dim, entries: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries; the length must be a perfect
    /// square.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(ZenoError::InvalidArgument(format!(
                "expected {} entries for dim {}, got {}",
                dim * dim,
                dim,
                entries.len()
            )));
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for r in rows {
            assert_eq!(r.len(), dim, "rows must form a square matrix");
            entries.extend_from_slice(r);
        }
        Self { dim, entries }
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(*v, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..d {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Matrix power by repeated squaring.
    pub fn pow(&self, n: usize) -> Self {
        let mut result = Self::identity(self.dim);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.matmul(&base);
            }
            base = base.matmul(&base);
            n >>= 1;
        }
        result
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        let d = self.dim;
        let mut out = vec![ZERO; d];
        for i in 0..d {
            let mut acc = ZERO;
            for j in 0..d {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest absolute entry; a cheap bound used for convergence checks.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let d = self.dim;
        for i in 0..d {
            for j in i..d {
                if (self[(i, j)] - self[(j, i)].conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let d = self.dim;
        let g = self.adjoint().matmul(self);
        g.sub(&Self::identity(d)).max_abs() <= tol
    }

    pub fn is_projector(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && self.matmul(self).sub(self).max_abs() <= tol
    }

    /// Spectral norm (largest singular value) by power iteration on `M†M`.
    ///
    /// The start vector is the normalized all-ones vector; if the iteration
    /// stalls in a null direction, a fixed basis perturbation is applied so
    /// the result is deterministic across runs. A few squaring steps on
    /// `M†M` sharpen the eigenvalue gap before iterating.
    pub fn spectral_norm(&self) -> f64 {
        let d = self.dim;
        let a = self.adjoint().matmul(self); // Hermitian PSD
        let scale = a.frobenius_norm();
        if scale == 0.0 {
            return 0.0;
        }
        // Power-iterate on (A/s)^(2^6); the Rayleigh quotient at the end is
        // taken with the original A so the scaling drops out.
        let mut b = a.scale(Complex64::new(1.0 / scale, 0.0));
        for _ in 0..6 {
            b = b.matmul(&b);
            let f = b.frobenius_norm();
            if f == 0.0 {
                break;
            }
            b = b.scale(Complex64::new(1.0 / f, 0.0));
        }
        let mut v: Vec<Complex64> = vec![Complex64::new(1.0 / (d as f64).sqrt(), 0.0); d];
        let mut last = f64::INFINITY;
        for iter in 0..10_000 {
            let mut w = b.apply(&v);
            let n = vec_norm(&w);
            if n < 1e-300 {
                // start vector fell in a null space; perturb deterministically
                let k = iter % d;
                v[k] += Complex64::new(1.0, 0.0);
                let n2 = vec_norm(&v);
                for z in v.iter_mut() {
                    *z /= n2;
                }
                continue;
            }
            for z in w.iter_mut() {
                *z /= n;
            }
            let av = a.apply(&w);
            let rq = w
                .iter()
                .zip(&av)
                .map(|(x, y)| (x.conj() * y).re)
                .sum::<f64>()
                .max(0.0);
            if (rq - last).abs() <= POWER_ITER_TOL * rq.max(1e-300) {
                return rq.sqrt();
            }
            last = rq;
            v = w;
        }
        last.max(0.0).sqrt()
    }

    /// Trace norm: sum of singular values, via the eigenvalues of `M†M`.
    pub fn trace_norm(&self) -> f64 {
        let a = self.adjoint().matmul(self);
        let (evals, _) = jacobi_eigh(&a);
        evals.iter().map(|&l| l.max(0.0).sqrt()).sum()
    }
}

impl std::ops::Index<(usize, usize)> for OperatorMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for OperatorMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// A complex state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dim: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(ZenoError::InvalidArgument("empty state vector".into()));
        }
        if !amplitudes.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(ZenoError::InvalidArgument("non-finite amplitude".into()));
        }
        Ok(Self { dim: amplitudes.len(), amplitudes })
    }

    /// Computational basis state `|i⟩`.
    pub fn basis(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[i] = ONE;
        Self { dim, amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amplitudes)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Normalized copy; errors on the zero vector.
    pub fn normalized_copy(&self) -> Result<Self> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(ZenoError::InvalidArgument("cannot normalize zero vector".into()));
        }
        Ok(Self {
            dim: self.dim,
            amplitudes: self.amplitudes.iter().map(|z| z / n).collect(),
        })
    }

    pub fn normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn apply(&self, m: &OperatorMatrix) -> Self {
        Self { dim: self.dim, amplitudes: m.apply(&self.amplitudes) }
    }

    /// Outer product `|ψ⟩⟨ψ|`.
    pub fn density_matrix(&self) -> OperatorMatrix {
        let d = self.dim;
        let mut out = OperatorMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out[(i, j)] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        out
    }
}

/// Matrix exponential `e^M` by scaling-and-squaring with a truncated series.
///
/// The matrix is halved until its Frobenius norm drops below
/// [`EXPM_SCALE_LIMIT`]; the series is then summed until the next term falls
/// below [`EXPM_SERIES_TOL`], and the result squared back up.
pub fn expm(m: &OperatorMatrix) -> Result<OperatorMatrix> {
    if !m.is_finite() {
        return Err(ZenoError::InvalidArgument("non-finite entries in expm".into()));
    }
    let norm = m.frobenius_norm();
    let mut squarings = 0u32;
    let mut scaled = m.clone();
    if norm > EXPM_SCALE_LIMIT {
        squarings = (norm / EXPM_SCALE_LIMIT).log2().ceil() as u32;
        let factor = 0.5f64.powi(squarings as i32);
        scaled = m.scale(Complex64::new(factor, 0.0));
    }
    let mut result = OperatorMatrix::identity(m.dim());
    let mut term = OperatorMatrix::identity(m.dim());
    for k in 1..=40 {
        term = term.matmul(&scaled).scale(Complex64::new(1.0 / k as f64, 0.0));
        result = result.add(&term);
        if term.max_abs() < EXPM_SERIES_TOL {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    Ok(result)
}

/// `AB - BA`.
pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    if a.dim() != b.dim() {
        return Err(ZenoError::DimMismatch(a.dim(), b.dim()));
    }
    Ok(a.matmul(b).sub(&b.matmul(a)))
}

/// Tensor product with big-endian index convention: the first factor is the
/// most significant index.
pub fn kron(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    let da = a.dim();
    let db = b.dim();
    let d = da * db;
    let mut out = OperatorMatrix::zeros(d);
    for ia in 0..da {
        for ja in 0..da {
            let x = a[(ia, ja)];
            if x == ZERO {
                continue;
            }
            for ib in 0..db {
                for jb in 0..db {
                    out[(ia * db + ib, ja * db + jb)] = x * b[(ib, jb)];
                }
            }
        }
    }
    out
}

/// Time-ordered propagator for a time-dependent Hermitian generator.
///
/// Uses the midpoint exponential rule: uniform slices of width
/// `(t_end - t_start)/steps`, each contributing `exp(-i h gen(midpoint))`.
/// Each slice is exactly unitary; the global error is `O(h²)` for smooth
/// generators.
pub fn time_ordered_propagator<F>(
    gen: F,
    t_start: f64,
    t_end: f64,
    steps: usize,
) -> Result<OperatorMatrix>
where
    F: Fn(f64) -> OperatorMatrix,
{
    if steps == 0 {
        return Err(ZenoError::InvalidArgument("steps must be >= 1".into()));
    }
    let h = (t_end - t_start) / steps as f64;
    let mut u: Option<OperatorMatrix> = None;
    for s in 0..steps {
        let tm = t_start + (s as f64 + 0.5) * h;
        let g = gen(tm);
        if !g.is_hermitian(SLICE_HERMITICITY_TOL) {
            return Err(ZenoError::NotHermitian(SLICE_HERMITICITY_TOL));
        }
        let step = expm(&g.scale(-I * h))?;
        u = Some(match u {
            None => step,
            Some(prev) => step.matmul(&prev),
        });
    }
    Ok(u.expect("steps >= 1"))
}

/// Eigendecomposition of a Hermitian matrix by cyclic two-sided Jacobi
/// rotations. Returns `(eigenvalues, eigenvectors)` with eigenvalues in
/// ascending order; eigenvector `k` is column `k` of the returned matrix.
pub fn jacobi_eigh(m: &OperatorMatrix) -> (Vec<f64>, OperatorMatrix) {
    let d = m.dim();
    let mut a = m.clone();
    let mut v = OperatorMatrix::identity(d);
    let scale = a.frobenius_norm().max(1e-300);
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..d {
            for q in (p + 1)..d {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = a[(p, q)];
                if apq.norm() <= 1e-300 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let abs = apq.norm();
                let phase = apq / abs;
                // rotation J = [[c, σ], [-σ̄, c]] with σ = sinθ·e^{iφ};
                // A <- J†AJ zeroes a_pq when tan(2θ) = 2|a_pq| / (a_qq - a_pp)
                let theta = 0.5 * (2.0 * abs).atan2(aqq - app);
                let c = theta.cos();
                let sp = phase * theta.sin();
                // A <- A J (columns)
                for i in 0..d {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * c - aiq * sp.conj();
                    a[(i, q)] = aip * sp + aiq * c;
                }
                // A <- J† A (rows)
                for i in 0..d {
                    let api = a[(p, i)];
                    let aqi = a[(q, i)];
                    a[(p, i)] = api * c - aqi * sp;
                    a[(q, i)] = api * sp.conj() + aqi * c;
                }
                // V <- V J
                for i in 0..d {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c - viq * sp.conj();
                    v[(i, q)] = vip * sp + viq * c;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..d).collect();
    let evals: Vec<f64> = (0..d).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| evals[i].partial_cmp(&evals[j]).unwrap());
    let sorted: Vec<f64> = order.iter().map(|&i| evals[i]).collect();
    let mut vs = OperatorMatrix::zeros(d);
    for (newcol, &oldcol) in order.iter().enumerate() {
        for i in 0..d {
            vs[(i, newcol)] = v[(i, oldcol)];
        }
    }
    (sorted, vs)
}

/// Pauli X on one qubit.
pub fn pauli_x() -> OperatorMatrix {
    OperatorMatrix::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]])
}

/// Pauli Y on one qubit.
pub fn pauli_y() -> OperatorMatrix {
    OperatorMatrix::from_rows(&[&[ZERO, -I], &[I, ZERO]])
}

/// Pauli Z on one qubit.
pub fn pauli_z() -> OperatorMatrix {
    OperatorMatrix::diag(&[1.0, -1.0])
}
