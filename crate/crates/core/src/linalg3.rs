//! Exact, fixed-size complex linear algebra for 3-vectors and 3×3 matrices.
//!
//! Everything is hard-wired to dimension 3: the inverse goes through the
//! adjugate/determinant closed form, eigenvalue oracles through the cubic
//! characteristic polynomial. No general-n machinery, no iterative solvers.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Relative cutoff for declaring a matrix singular: `|det| <= REL * max_abs³`.
pub const SINGULARITY_TOL_REL: f64 = 1e-12;

/// Relative residual bound for the cubic solver: `|p(λ)| <= REL * max(1, |c_i|)`.
pub const CUBIC_RESIDUAL_TOL_REL: f64 = 1e-10;

/// Errors from the 3×3 kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Linalg3Error {
    /// Determinant magnitude at or below the scale-invariant cutoff. In this
    /// crate that usually means an exceptional-point or otherwise degenerate
    /// configuration upstream.
    #[error("singular matrix: |det| = {det_mag:.3e} <= tolerance {tol:.3e}")]
    SingularMatrix { det_mag: f64, tol: f64 },
    /// Cubic root polishing left a residual above the scaled tolerance.
    #[error("cubic solver did not converge: residual {residual:.3e} > tolerance {tol:.3e}")]
    NoConvergence { residual: f64, tol: f64 },
    /// Positive-definiteness was asked of a matrix that fails the Hermiticity
    /// precheck.
    #[error("matrix is not Hermitian: max |A - A†| = {deviation:.3e} > tolerance {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },
}

pub(crate) fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A 3-component complex vector (amplitude triple).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CVec3(pub [C64; 3]);

impl CVec3 {
    pub fn new(a: C64, b: C64, c: C64) -> Self {
        Self([a, b, c])
    }

    pub fn zeros() -> Self {
        Self([C64::new(0.0, 0.0); 3])
    }

    /// Standard basis vector `e_k`, `k` in `0..3`.
    pub fn basis(k: usize) -> Self {
        let mut v = Self::zeros();
        v[k] = c64(1.0, 0.0);
        v
    }

    /// Squared Euclidean norm `Σ |v_i|²`.
    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Largest component magnitude.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    /// Hermitian inner product `⟨self|rhs⟩ = Σ conj(self_i) rhs_i`.
    pub fn hermitian_dot(&self, rhs: &Self) -> C64 {
        self.0
            .iter()
            .zip(rhs.0.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Per-component magnitudes squared `(|v_1|², |v_2|², |v_3|²)`.
    pub fn abs_sq(&self) -> [f64; 3] {
        [
            self.0[0].norm_sqr(),
            self.0[1].norm_sqr(),
            self.0[2].norm_sqr(),
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<usize> for CVec3 {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for CVec3 {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.0[i]
    }
}

impl Add for CVec3 {
    type Output = CVec3;
    fn add(self, rhs: CVec3) -> CVec3 {
        CVec3([self[0] + rhs[0], self[1] + rhs[1], self[2] + rhs[2]])
    }
}

impl Sub for CVec3 {
    type Output = CVec3;
    fn sub(self, rhs: CVec3) -> CVec3 {
        CVec3([self[0] - rhs[0], self[1] - rhs[1], self[2] - rhs[2]])
    }
}

impl Neg for CVec3 {
    type Output = CVec3;
    fn neg(self) -> CVec3 {
        CVec3(self.0.map(|z| -z))
    }
}

impl Mul<C64> for CVec3 {
    type Output = CVec3;
    fn mul(self, s: C64) -> CVec3 {
        CVec3(self.0.map(|z| z * s))
    }
}

impl Mul<f64> for CVec3 {
    type Output = CVec3;
    fn mul(self, s: f64) -> CVec3 {
        CVec3(self.0.map(|z| z * s))
    }
}

/// A dense 3×3 complex matrix, row-major; index `(row, col)` follows the
/// level ordering |1⟩, |2⟩, |3⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMat3(pub [[C64; 3]; 3]);

impl CMat3 {
    pub fn zeros() -> Self {
        Self([[C64::new(0.0, 0.0); 3]; 3])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for k in 0..3 {
            m[(k, k)] = c64(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: [[C64; 3]; 3]) -> Self {
        Self(rows)
    }

    pub fn from_diag(a: C64, b: C64, c: C64) -> Self {
        let mut m = Self::zeros();
        m[(0, 0)] = a;
        m[(1, 1)] = b;
        m[(2, 2)] = c;
        m
    }

    pub fn from_columns(cols: [CVec3; 3]) -> Self {
        let mut m = Self::zeros();
        for (j, col) in cols.iter().enumerate() {
            for i in 0..3 {
                m[(i, j)] = col[i];
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> CVec3 {
        CVec3([self[(0, j)], self[(1, j)], self[(2, j)]])
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m[(i, j)] = self[(j, i)];
            }
        }
        m
    }

    /// Entry-wise complex conjugate.
    pub fn conj(&self) -> Self {
        Self(self.0.map(|row| row.map(|z| z.conj())))
    }

    /// Conjugate transpose `A†`.
    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn trace(&self) -> C64 {
        self[(0, 0)] + self[(1, 1)] + self[(2, 2)]
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Sum of the three principal 2×2 minors — the quadratic coefficient of
    /// the characteristic polynomial (up to sign).
    pub fn second_invariant(&self) -> C64 {
        let m = &self.0;
        (m[0][0] * m[1][1] - m[0][1] * m[1][0])
            + (m[0][0] * m[2][2] - m[0][2] * m[2][0])
            + (m[1][1] * m[2][2] - m[1][2] * m[2][1])
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &CVec3) -> CVec3 {
        let mut out = CVec3::zeros();
        for i in 0..3 {
            out[i] = self[(i, 0)] * v[0] + self[(i, 1)] * v[1] + self[(i, 2)] * v[2];
        }
        out
    }

    /// Inverse through the adjugate closed form.
    ///
    /// Fails with [`Linalg3Error::SingularMatrix`] when
    /// `|det| <= SINGULARITY_TOL_REL * max_abs³` (scale-invariant cutoff).
    pub fn inverse(&self) -> Result<Self, Linalg3Error> {
        let det = self.det();
        let tol = SINGULARITY_TOL_REL * self.max_abs().powi(3);
        if !det.norm().is_finite() || det.norm() <= tol {
            return Err(Linalg3Error::SingularMatrix {
                det_mag: det.norm(),
                tol,
            });
        }
        let m = &self.0;
        let cof = |r1: usize, r2: usize, c1: usize, c2: usize| {
            m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]
        };
        // adjugate = transposed cofactor matrix
        let adj = [
            [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
            [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
            [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
        ];
        let mut out = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                out[(i, j)] = adj[i][j] / det;
            }
        }
        Ok(out)
    }

    /// Max-entry deviation from Hermiticity, `max |A - A†|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        (*self - self.adjoint()).max_abs()
    }

    /// `max |A - A†| <= tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// Sylvester test: all three leading principal minors must have real part
    /// exceeding `tol`. Requires the Hermiticity precheck (same `tol`) to
    /// pass first; minors of a Hermitian matrix are real up to roundoff.
    pub fn is_positive_definite(&self, tol: f64) -> Result<bool, Linalg3Error> {
        let dev = self.hermiticity_deviation();
        if dev > tol {
            return Err(Linalg3Error::NotHermitian {
                deviation: dev,
                tol,
            });
        }
        let m = &self.0;
        let m1 = m[0][0].re;
        let m2 = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).re;
        let m3 = self.det().re;
        Ok(m1 > tol && m2 > tol && m3 > tol)
    }
}

impl Index<(usize, usize)> for CMat3 {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for CMat3 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl Add for CMat3 {
    type Output = CMat3;
    fn add(self, rhs: CMat3) -> CMat3 {
        let mut out = CMat3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                out[(i, j)] = self[(i, j)] + rhs[(i, j)];
            }
        }
        out
    }
}

impl Sub for CMat3 {
    type Output = CMat3;
    fn sub(self, rhs: CMat3) -> CMat3 {
        let mut out = CMat3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                out[(i, j)] = self[(i, j)] - rhs[(i, j)];
            }
        }
        out
    }
}

impl Neg for CMat3 {
    type Output = CMat3;
    fn neg(self) -> CMat3 {
        CMat3(self.0.map(|row| row.map(|z| -z)))
    }
}

impl Mul for CMat3 {
    type Output = CMat3;
    fn mul(self, rhs: CMat3) -> CMat3 {
        let mut out = CMat3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                out[(i, j)] = self[(i, 0)] * rhs[(0, j)]
                    + self[(i, 1)] * rhs[(1, j)]
                    + self[(i, 2)] * rhs[(2, j)];
            }
        }
        out
    }
}

impl Mul<C64> for CMat3 {
    type Output = CMat3;
    fn mul(self, s: C64) -> CMat3 {
        CMat3(self.0.map(|row| row.map(|z| z * s)))
    }
}

impl Mul<f64> for CMat3 {
    type Output = CMat3;
    fn mul(self, s: f64) -> CMat3 {
        CMat3(self.0.map(|row| row.map(|z| z * s)))
    }
}

/// All three roots (with multiplicity) of `λ³ + c2·λ² + c1·λ + c0 = 0`.
///
/// Closed-form Cardano evaluation followed by two Newton polishing steps per
/// root; Cardano alone loses digits near repeated roots, which is exactly the
/// exceptional-point region this crate has to probe. The returned roots
/// satisfy `|p(λ)| <= CUBIC_RESIDUAL_TOL_REL * max(1, |c0|, |c1|, |c2|)` or
/// the call fails with [`Linalg3Error::NoConvergence`].
pub fn cubic_roots(c2: C64, c1: C64, c0: C64) -> Result<[C64; 3], Linalg3Error> {
    let scale = 1.0_f64.max(c0.norm()).max(c1.norm()).max(c2.norm());
    let tol = CUBIC_RESIDUAL_TOL_REL * scale;

    // depressed form t³ + p t + q via λ = t - c2/3
    let shift = c2 / 3.0;
    let p = c1 - c2 * c2 / 3.0;
    let q = c2 * c2 * c2 * (2.0 / 27.0) - c2 * c1 / 3.0 + c0;

    let mut roots = if p.norm() == 0.0 && q.norm() == 0.0 {
        [-shift; 3]
    } else {
        let s = (q * q / 4.0 + p * p * p / 27.0).sqrt();
        // pick the branch that avoids cancellation in -q/2 ± s
        let w3_plus = -q / 2.0 + s;
        let w3_minus = -q / 2.0 - s;
        let w3 = if w3_plus.norm() >= w3_minus.norm() {
            w3_plus
        } else {
            w3_minus
        };
        if w3.norm() == 0.0 {
            // only reachable when p = q = 0 up to roundoff: triple root
            [-shift; 3]
        } else {
            let w = w3.cbrt();
            let omega = c64(-0.5, 0.75_f64.sqrt());
            let mut out = [C64::new(0.0, 0.0); 3];
            let mut wk = w;
            for slot in out.iter_mut() {
                *slot = wk - p / (wk * 3.0) - shift;
                wk *= omega;
            }
            out
        }
    };

    let eval = |x: C64| ((x + c2) * x + c1) * x + c0;
    let deriv = |x: C64| (x * 3.0 + c2 * 2.0) * x + c1;
    for r in roots.iter_mut() {
        for _ in 0..2 {
            let f = eval(*r);
            let d = deriv(*r);
            if d.norm() <= f.norm() * 1e-3 {
                break; // near-stationary point (multiple root): Newton unusable
            }
            let candidate = *r - f / d;
            if eval(candidate).norm() <= f.norm() {
                *r = candidate;
            } else {
                break;
            }
        }
    }

    let residual = roots.iter().map(|r| eval(*r).norm()).fold(0.0, f64::max);
    if !residual.is_finite() || residual > tol {
        return Err(Linalg3Error::NoConvergence { residual, tol });
    }
    Ok(roots)
}
