//! Analytic kernels: polynomial-times-Gaussian mollifiers and the dyadic
//! band-pass family used by the Littlewood–Paley oracle.
//!
//! Every kernel here is of the form q(x)·g(x) with g the standard Gaussian
//! density, so derivatives of any order, moments, and Fourier magnitudes all
//! have closed forms. Sup-norm sweeps therefore see no differentiation noise:
//! derivatives land on the kernel, never on sampled data.
//!
//! Conventions:
//! - g(x) = exp(-x²/2)/√(2π), so ∫g = 1 and ĝ(u) = exp(-u²/2).
//! - Scaling: φ_n(x) = n·φ(nx), hence ∂ᵐφ_n(x) = n^{1+m}·φ⁽ᵐ⁾(nx).
//! - Differentiation acts on the polynomial part as q ↦ q' − x·q.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SQRT_2PI: f64 = 2.506628274631000502415765284811;

/// Highest total derivative order supported on a kernel. Polynomial degrees
/// stay small enough that coefficient arithmetic remains well-conditioned.
pub const MAX_DERIV_ORDER: usize = 32;

/// Standard Gaussian density.
#[inline]
pub fn gaussian_density(x: f64) -> f64 {
    (-x * x / 2.0).exp() / SQRT_2PI
}

/// A function q(x)·g(x) with q a real polynomial (coefficients ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct PolyGauss {
    coeffs: Vec<f64>,
}

impl PolyGauss {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut pg = PolyGauss { coeffs };
        pg.trim();
        pg
    }

    /// The plain Gaussian density (q ≡ 1).
    pub fn gaussian() -> Self {
        PolyGauss { coeffs: vec![1.0] }
    }

    /// m-th derivative of the Gaussian density.
    pub fn gaussian_derivative(m: usize) -> Self {
        Self::gaussian().derivative(m)
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && *self.coeffs.last().unwrap() == 0.0 {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Evaluate q(x)·g(x) by Horner plus the Gaussian factor.
    pub fn eval(&self, x: f64) -> f64 {
        let mut q = 0.0;
        for &c in self.coeffs.iter().rev() {
            q = q * x + c;
        }
        q * gaussian_density(x)
    }

    /// One derivative: (q·g)' = (q' − x·q)·g.
    pub fn derivative_once(&self) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![0.0; n + 1];
        for (j, &c) in self.coeffs.iter().enumerate() {
            if j >= 1 {
                out[j - 1] += j as f64 * c;
            }
            out[j + 1] -= c;
        }
        PolyGauss::new(out)
    }

    /// m-th derivative.
    pub fn derivative(&self, m: usize) -> Self {
        let mut pg = self.clone();
        for _ in 0..m {
            pg = pg.derivative_once();
        }
        pg
    }

    /// Exact moment ∫xᵐ·q(x)·g(x)dx via Gaussian double-factorial moments.
    pub fn moment(&self, m: usize) -> f64 {
        let mut acc = 0.0;
        for (j, &c) in self.coeffs.iter().enumerate() {
            acc += c * gaussian_moment(m + j);
        }
        acc
    }

    /// |FT[q·g](u)| where FT[xʲg](u) = (−i)ʲ·He_j(u)·exp(−u²/2).
    pub fn fourier_magnitude(&self, u: f64) -> f64 {
        let mut re = 0.0;
        let mut im = 0.0;
        let mut he_prev = 0.0; // He_{-1}, unused at j = 0
        let mut he = 1.0; // He_0(u)
        for (j, &c) in self.coeffs.iter().enumerate() {
            if j > 0 {
                let he_next = u * he - (j as f64 - 1.0) * he_prev;
                he_prev = he;
                he = he_next;
            }
            match j % 4 {
                0 => re += c * he,
                1 => im -= c * he,
                2 => re -= c * he,
                _ => im += c * he,
            }
        }
        (re * re + im * im).sqrt() * (-u * u / 2.0).exp()
    }
}

/// Gaussian moment E[xᵐ]: 0 for odd m, (m−1)!! for even m.
pub fn gaussian_moment(m: usize) -> f64 {
    if m % 2 == 1 {
        return 0.0;
    }
    let mut acc = 1.0;
    let mut k = m as i64 - 1;
    while k > 1 {
        acc *= k as f64;
        k -= 2;
    }
    acc
}

/// JSON descriptor recorded in every report for provenance.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct KernelDescriptor {
    pub family: String,
    pub coeffs: Vec<f64>,
    pub vanish_order: usize,
}

/// A unit-mass smoothing kernel φ(x) = P(x)·g(x) whose moments 1..=vanish_order
/// are zero. Immutable after construction; safe to share across sweep workers.
#[derive(Debug, Clone)]
pub struct MollifierKernel {
    base: PolyGauss,
    vanish_order: usize,
}

impl MollifierKernel {
    /// The standard Gaussian density. Odd moments vanish by symmetry, so the
    /// vanishing order is 1.
    pub fn gaussian() -> Self {
        MollifierKernel {
            base: PolyGauss::gaussian(),
            vanish_order: 1,
        }
    }

    /// Kernel with vanishing moments 1..=k, built as an even polynomial times
    /// the Gaussian. The polynomial coefficients solve the linear system given
    /// by the Gaussian even moments E[x^{2p}] = (2p−1)!!.
    pub fn moment_vanishing(k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::Validation(
                "moment-vanishing order must be at least 1".into(),
            ));
        }
        if k > 12 {
            return Err(Error::Validation(format!(
                "moment-vanishing order {k} exceeds the supported cap 12 \
                 (the moment system becomes ill-conditioned)"
            )));
        }
        // Unknowns: even coefficients c_0, c_2, .., c_{2q}. Constraints: unit
        // mass plus zero even moments 2, 4, .., 2q. Odd moments vanish by
        // parity.
        let q = k / 2;
        let dim = q + 1;
        let mut a = vec![vec![0.0; dim]; dim];
        let mut b = vec![0.0; dim];
        b[0] = 1.0;
        for (r, row) in a.iter_mut().enumerate() {
            for (p, entry) in row.iter_mut().enumerate() {
                *entry = gaussian_moment(2 * r + 2 * p);
            }
        }
        let sol = solve_dense(a.clone(), b.clone()).ok_or(Error::Conditioning {
            residual: f64::INFINITY,
            limit: 1e-8,
        })?;
        let mut residual: f64 = 0.0;
        for r in 0..dim {
            let mut lhs = 0.0;
            for p in 0..dim {
                lhs += a[r][p] * sol[p];
            }
            residual = residual.max((lhs - b[r]).abs());
        }
        if residual > 1e-8 {
            return Err(Error::Conditioning {
                residual,
                limit: 1e-8,
            });
        }
        let mut coeffs = vec![0.0; 2 * q + 1];
        for (p, &c) in sol.iter().enumerate() {
            coeffs[2 * p] = c;
        }
        Ok(MollifierKernel {
            base: PolyGauss::new(coeffs),
            vanish_order: k,
        })
    }

    pub fn base(&self) -> &PolyGauss {
        &self.base
    }

    pub fn vanish_order(&self) -> usize {
        self.vanish_order
    }

    /// φ⁽ᵐ⁾ as a polynomial-times-Gaussian.
    pub fn derivative(&self, m: usize) -> PolyGauss {
        self.base.derivative(m)
    }

    /// Exact value of ∂ᵐφ_n(x) = n^{1+m}·φ⁽ᵐ⁾(nx).
    pub fn eval_scaled(&self, scale: f64, m: usize, x: f64) -> f64 {
        scale.powi(1 + m as i32) * self.base.derivative(m).eval(scale * x)
    }

    /// Exact moment ∫xᵐφ(x)dx (double-factorial algebra, no quadrature).
    pub fn moment(&self, m: usize) -> f64 {
        self.base.moment(m)
    }

    /// Smallest radius r (on a 0.01 grid) with ∫_{|x|>r}(1+|x|^k)|φ| < tol,
    /// k the vanishing order. Convolution windows pad by this radius at the
    /// coarsest scale.
    pub fn effective_radius(&self, tol: f64) -> f64 {
        let k = self.vanish_order as i32;
        let step = 0.01;
        let r_max = 45.0;
        let steps = (r_max / step) as usize;
        // Cumulative tail of the weighted mass, integrated inward by trapezoid.
        let f = |x: f64| (1.0 + x.abs().powi(k)) * self.base.eval(x).abs() * 2.0;
        let mut tail = vec![0.0; steps + 1];
        let mut prev = f(r_max);
        for i in (0..steps).rev() {
            let x = i as f64 * step;
            let cur = f(x);
            tail[i] = tail[i + 1] + 0.5 * (cur + prev) * step;
            prev = cur;
        }
        for (i, &t) in tail.iter().enumerate() {
            if t < tol {
                return i as f64 * step;
            }
        }
        r_max
    }

    pub fn descriptor(&self) -> KernelDescriptor {
        KernelDescriptor {
            family: "gauss_poly".into(),
            coeffs: self.base.coeffs().to_vec(),
            vanish_order: self.vanish_order,
        }
    }
}

/// Dense solve with partial pivoting; systems here are at most 7×7.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Descriptor for the band-pass family, recorded in oracle reports.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LpFamilyDescriptor {
    pub family: String,
    pub m_order: usize,
    pub epsilon: f64,
    pub theta1_scale: f64,
}

/// Dyadic analysis family: a low-pass kernel θ₁ and a band-pass kernel θ with
/// m_order vanishing moments. Level 0 uses θ₁ unscaled; level j ≥ 1 uses
/// θ at scale 2ʲ. Valid for exponent estimation below m_order.
#[derive(Debug, Clone)]
pub struct LpFamily {
    theta1: PolyGauss,
    theta1_scale: f64,
    theta: PolyGauss,
    m_order: usize,
    epsilon: f64,
}

/// Number of grid points used for the frequency positivity checks.
const FREQ_GRID: usize = 4096;

impl LpFamily {
    /// Build the family with θ₁ the Gaussian and θ its m_order-th derivative,
    /// so |θ̂(u)| = |u|^m_order·exp(−u²/2) which is positive on every annulus.
    /// The frequency-grid checks are kept as guards for future kernels.
    pub fn new(m_order: usize, epsilon: f64) -> Result<Self> {
        if m_order < 1 {
            return Err(Error::Validation("band-pass order must be >= 1".into()));
        }
        if !(epsilon > 0.0) {
            return Err(Error::Validation("epsilon must be positive".into()));
        }
        let family = LpFamily {
            theta1: PolyGauss::gaussian(),
            theta1_scale: 1.0,
            theta: PolyGauss::gaussian_derivative(m_order),
            m_order,
            epsilon,
        };
        family.validate()?;
        Ok(family)
    }

    /// Replace the low-pass kernel by a Gaussian of width `sigma` (level 0
    /// only). The estimated exponent must not depend on this choice.
    pub fn with_lowpass_width(mut self, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::Validation("low-pass width must be positive".into()));
        }
        self.theta1 = PolyGauss::gaussian();
        self.theta1_scale = 1.0 / sigma;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let eps = self.epsilon;
        let mut min_lowpass = f64::INFINITY;
        for i in 0..FREQ_GRID {
            let u = -2.0 * eps + 4.0 * eps * (i as f64) / (FREQ_GRID - 1) as f64;
            // Scaled low-pass: FT of s·θ₁(s·x) is θ̂₁(u/s).
            let mag = self.theta1.fourier_magnitude(u / self.theta1_scale);
            min_lowpass = min_lowpass.min(mag);
        }
        if !(min_lowpass > 0.0) {
            return Err(Error::Validation(format!(
                "low-pass transform vanishes on [-2e, 2e] (min {min_lowpass:e})"
            )));
        }
        let mut min_bandpass = f64::INFINITY;
        for i in 0..FREQ_GRID {
            let u = eps / 2.0 + 1.5 * eps * (i as f64) / (FREQ_GRID - 1) as f64;
            let mag = self.theta.fourier_magnitude(u);
            min_bandpass = min_bandpass.min(mag);
        }
        if !(min_bandpass > 0.0) {
            return Err(Error::Validation(format!(
                "band-pass transform vanishes on the annulus (min {min_bandpass:e})"
            )));
        }
        Ok(())
    }

    pub fn m_order(&self) -> usize {
        self.m_order
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn theta(&self) -> &PolyGauss {
        &self.theta
    }

    pub fn theta1(&self) -> &PolyGauss {
        &self.theta1
    }

    /// Kernel and scale for decomposition level j.
    pub fn level_kernel(&self, j: usize) -> (&PolyGauss, f64) {
        if j == 0 {
            (&self.theta1, self.theta1_scale)
        } else {
            (&self.theta, (2.0f64).powi(j as i32))
        }
    }

    pub fn descriptor(&self) -> LpFamilyDescriptor {
        LpFamilyDescriptor {
            family: "gauss_lp".into(),
            m_order: self.m_order,
            epsilon: self.epsilon,
            theta1_scale: self.theta1_scale,
        }
    }
}
