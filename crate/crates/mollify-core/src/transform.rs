//! Smoothing transforms: ∂ᵐ(T∗φ_n) on the periodic grid, window sup-norms,
//! distributional pairings, and scale sweeps.
//!
//! Grid parts are convolved circularly with the exactly sampled kernel
//! derivative (length-N discrete Fourier transform); atomic parts are
//! evaluated in closed form: (δ^{(p)}_{x₀} ∗ ∂ᵐφ_n)(x) = ∂^{m+p}φ_n(x−x₀).
//! Derivatives always land on the kernel, never on sampled data.

use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::kernels::{KernelDescriptor, MollifierKernel, PolyGauss, MAX_DERIV_ORDER};
use crate::signals::{DistributionRep, GridSignal, GridSpec, Window};

/// Oversampling factor q: scales must satisfy n·h ≤ 1/q so the kernel is
/// resolved on the grid. Below this the discrete sup underestimates the
/// continuum sup by up to ~π²/(2q²) relative for band-limited signals.
pub const OVERSAMPLING: f64 = 8.0;

/// Kernel mass tolerance defining the effective radius used for window
/// padding at the coarsest scale.
pub const RADIUS_TOL: f64 = 1e-12;

fn plan_pair(n: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    let mut planner = FftPlanner::new();
    (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
}

fn fft_of(samples: &[f64], fft: &Arc<dyn Fft<f64>>) -> Vec<Complex<f64>> {
    let mut buf: Vec<Complex<f64>> = samples.iter().map(|&s| Complex::new(s, 0.0)).collect();
    fft.process(&mut buf);
    buf
}

/// Compensated (Kahan) summation; pairings need absolute accuracy near 1e-14.
fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

fn check_resolution(spec: GridSpec, scale: f64) -> Result<()> {
    if !(scale > 0.0) {
        return Err(Error::Validation(format!("scale {scale} must be positive")));
    }
    let product = scale * spec.spacing();
    if product > 1.0 / OVERSAMPLING * (1.0 + 1e-12) {
        return Err(Error::Resolution {
            scale,
            product,
            oversampling: OVERSAMPLING,
        });
    }
    Ok(())
}

/// Sample n^{1+m}·pg⁽ᵐ⁾(n·d) at circular grid offsets d (pg already
/// differentiated m times before the call; `power` carries 1+m).
fn sample_scaled(pg_m: &PolyGauss, scale: f64, power: i32, spec: GridSpec) -> Vec<f64> {
    let n = spec.n;
    let h = spec.spacing();
    let amp = scale.powi(power);
    (0..n)
        .map(|i| {
            let d = if i <= n / 2 {
                i as f64 * h
            } else {
                (i as f64 - n as f64) * h
            };
            amp * pg_m.eval(scale * d)
        })
        .collect()
}

/// T ∗ (∂ᵐ base_scale) where base_scale(x) = scale·base(scale·x): circular
/// convolution for the grid part, closed form for atoms. `spectrum` may carry
/// a precomputed FFT of the grid part.
fn convolve_impl(
    rep: &DistributionRep,
    base: &PolyGauss,
    scale: f64,
    m: usize,
    spectrum: Option<&[Complex<f64>]>,
) -> Result<GridSignal> {
    let spec = rep.spec();
    if m > MAX_DERIV_ORDER {
        return Err(Error::Validation(format!(
            "derivative order {m} exceeds cap {MAX_DERIV_ORDER}"
        )));
    }
    let n = spec.n;
    let h = spec.spacing();
    let mut out = vec![0.0; n];

    if let Some(grid) = rep.grid() {
        let (fwd, inv) = plan_pair(n);
        let pg_m = base.derivative(m);
        let kernel = sample_scaled(&pg_m, scale, 1 + m as i32, spec);
        let mut kspec = fft_of(&kernel, &fwd);
        let owned;
        let sig_spec = match spectrum {
            Some(s) => s,
            None => {
                owned = fft_of(grid.samples(), &fwd);
                &owned
            }
        };
        for (k, s) in kspec.iter_mut().zip(sig_spec) {
            *k *= s;
        }
        inv.process(&mut kspec);
        let norm = h / n as f64;
        for (o, c) in out.iter_mut().zip(&kspec) {
            *o = c.re * norm;
        }
    }

    for atom in rep.atoms() {
        let total = m + atom.order;
        if total > MAX_DERIV_ORDER {
            return Err(Error::Validation(format!(
                "derivative order {total} (kernel {m} + atom {}) exceeds cap {MAX_DERIV_ORDER}",
                atom.order
            )));
        }
        let pg_mp = base.derivative(total);
        let amp = atom.weight * scale.powi(1 + total as i32);
        for (i, o) in out.iter_mut().enumerate() {
            *o += amp * pg_mp.eval(scale * (spec.x(i) - atom.location));
        }
    }

    GridSignal::new(spec, out)
}

pub(crate) fn convolve(
    rep: &DistributionRep,
    base: &PolyGauss,
    scale: f64,
    m: usize,
) -> Result<GridSignal> {
    check_resolution(rep.spec(), scale)?;
    convolve_impl(rep, base, scale, m, None)
}

/// Grid samples of ∂ᵐ(T∗φ_n) = T ∗ ∂ᵐφ_n.
pub fn mollify(
    rep: &DistributionRep,
    kernel: &MollifierKernel,
    scale: f64,
    m: usize,
) -> Result<GridSignal> {
    convolve(rep, kernel.base(), scale, m)
}

/// Max of |samples| restricted to the window.
pub fn sup_norm(sig: &GridSignal, window: Window) -> Result<f64> {
    let spec = sig.spec();
    let mut best: Option<f64> = None;
    let h = spec.spacing();
    let lo = ((window.a - spec.x_min) / h).ceil().max(0.0) as usize;
    for i in lo..spec.n {
        let x = spec.x(i);
        if x > window.b {
            break;
        }
        if x >= window.a {
            let v = sig.samples()[i].abs();
            best = Some(best.map_or(v, |b: f64| b.max(v)));
        }
    }
    best.ok_or(Error::EmptyWindow {
        a: window.a,
        b: window.b,
    })
}

/// Spectral derivative of a grid signal: multiply the spectrum by (ik)ᵐ.
/// The Nyquist mode is zeroed for odd orders.
pub fn spectral_derivative(sig: &GridSignal, m: usize) -> Result<GridSignal> {
    let spec = sig.spec();
    let n = spec.n;
    let (fwd, inv) = plan_pair(n);
    let mut buf = fft_of(sig.samples(), &fwd);
    let two_pi = 2.0 * std::f64::consts::PI;
    for (i, c) in buf.iter_mut().enumerate() {
        let freq = if i <= n / 2 {
            i as f64
        } else {
            i as f64 - n as f64
        };
        if i == n / 2 && m % 2 == 1 {
            *c = Complex::new(0.0, 0.0);
            continue;
        }
        let k = two_pi * freq / spec.length();
        let km = k.powi(m as i32);
        let factor = match m % 4 {
            0 => Complex::new(km, 0.0),
            1 => Complex::new(0.0, km),
            2 => Complex::new(-km, 0.0),
            _ => Complex::new(0.0, -km),
        };
        *c *= factor;
    }
    inv.process(&mut buf);
    let norm = 1.0 / n as f64;
    GridSignal::new(spec, buf.iter().map(|c| c.re * norm).collect())
}

/// Evaluate a grid signal at an off-grid point by 8-point Lagrange
/// interpolation (indices are wrapped periodically).
fn interp_periodic(sig: &GridSignal, x: f64) -> f64 {
    let spec = sig.spec();
    let n = spec.n as isize;
    let h = spec.spacing();
    let t = (x - spec.x_min) / h;
    let i0 = t.floor() as isize;
    let frac = t - i0 as f64;
    if frac.abs() < 1e-12 {
        let idx = i0.rem_euclid(n) as usize;
        return sig.samples()[idx];
    }
    // nodes i0-3 .. i0+4, barycentric weights (-1)^j * C(7, j)
    const W: [f64; 8] = [-1.0, 7.0, -21.0, 35.0, -35.0, 21.0, -7.0, 1.0];
    let mut num = 0.0;
    let mut den = 0.0;
    for (j, w) in W.iter().enumerate() {
        let node = i0 - 3 + j as isize;
        let dist = frac - (j as f64 - 3.0);
        let idx = node.rem_euclid(n) as usize;
        let c = w / dist;
        num += c * sig.samples()[idx];
        den += c;
    }
    num / den
}

/// Distributional pairing ⟨T, ρ⟩: trapezoid quadrature of the grid part
/// against ρ plus Σ (−1)^p·w·ρ^{(p)}(x₀) over atoms, ρ^{(p)} by spectral
/// differentiation.
pub fn pair(rep: &DistributionRep, rho: &GridSignal) -> Result<f64> {
    let spec = rep.spec();
    if rho.spec() != spec {
        return Err(Error::Validation(
            "test function grid does not match the distribution's box".into(),
        ));
    }
    if rho.margin() <= 0.0 {
        return Err(Error::Support(
            "test function support reaches the box edge".into(),
        ));
    }
    let mut total = 0.0;
    if let Some(grid) = rep.grid() {
        let h = spec.spacing();
        total += h * kahan_sum(
            grid.samples()
                .iter()
                .zip(rho.samples())
                .map(|(f, r)| f * r),
        );
    }
    for atom in rep.atoms() {
        let rho_p = if atom.order == 0 {
            rho.clone()
        } else {
            spectral_derivative(rho, atom.order)?
        };
        let sign = if atom.order % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * atom.weight * interp_periodic(&rho_p, atom.location);
    }
    Ok(total)
}

/// Matrix of window sup-norms sup|∂ᵐ(T∗φ_n)| over derivative orders m ≤ k
/// and an ascending scale ladder.
#[derive(Debug, Clone)]
pub struct ScaleSweep {
    pub k: usize,
    pub scales: Vec<f64>,
    /// sup_norms[m][j] for derivative order m at scale scales[j].
    pub sup_norms: Vec<Vec<f64>>,
    pub window: Window,
    pub kernel: KernelDescriptor,
}

impl ScaleSweep {
    /// Largest sup-norm over all orders at scale index j.
    pub fn max_over_orders(&self, j: usize) -> f64 {
        self.sup_norms
            .iter()
            .map(|row| row[j])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// CSV export: header `m,n,sup_norm`, one row per cell, full precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,n,sup_norm\n");
        for (m, row) in self.sup_norms.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                out.push_str(&format!("{m},{:.16e},{v:.16e}\n", self.scales[j]));
            }
        }
        out
    }
}

fn validate_ladder(spec: GridSpec, scales: &[f64]) -> Result<()> {
    if scales.is_empty() {
        return Err(Error::Validation("empty scale ladder".into()));
    }
    for pair in scales.windows(2) {
        if !(pair[0] < pair[1]) {
            return Err(Error::Validation(
                "scales must be strictly increasing".into(),
            ));
        }
    }
    check_resolution(spec, *scales.last().unwrap())
}

fn validate_window(
    spec: GridSpec,
    window: Window,
    kernel: &MollifierKernel,
    coarsest: f64,
) -> Result<()> {
    let radius = kernel.effective_radius(RADIUS_TOL) / coarsest;
    if window.a - radius < spec.x_min || window.b + radius > spec.x_max {
        return Err(Error::Validation(format!(
            "window [{}, {}] plus kernel radius {radius:.3} at the coarsest scale \
             leaves the box [{}, {})",
            window.a, window.b, spec.x_min, spec.x_max
        )));
    }
    Ok(())
}

/// Fill the sup-norm matrix for 0 ≤ m ≤ k over the ladder. Cells are pure
/// functions of immutable inputs and may run in parallel; assembly is by
/// index, so the result does not depend on the execution order.
pub fn scale_sweep(
    rep: &DistributionRep,
    kernel: &MollifierKernel,
    k: usize,
    scales: &[f64],
    window: Window,
) -> Result<ScaleSweep> {
    let spec = rep.spec();
    validate_ladder(spec, scales)?;
    validate_window(spec, window, kernel, scales[0])?;
    let (fwd, _) = plan_pair(spec.n);
    let spectrum = rep.grid().map(|g| fft_of(g.samples(), &fwd));

    let cells: Vec<(usize, usize)> = (0..=k)
        .flat_map(|m| (0..scales.len()).map(move |j| (m, j)))
        .collect();
    let sups: Result<Vec<((usize, usize), f64)>> = cells
        .par_iter()
        .map(|&(m, j)| {
            let sig = convolve_impl(rep, kernel.base(), scales[j], m, spectrum.as_deref())?;
            Ok(((m, j), sup_norm(&sig, window)?))
        })
        .collect();
    let mut sup_norms = vec![vec![0.0; scales.len()]; k + 1];
    for ((m, j), v) in sups? {
        sup_norms[m][j] = v;
    }
    Ok(ScaleSweep {
        k,
        scales: scales.to_vec(),
        sup_norms,
        window,
        kernel: kernel.descriptor(),
    })
}

/// A sequence of smooth functions approximating a distribution, indexed by n.
#[derive(Debug, Clone)]
pub enum ApproxSequence<'a> {
    /// The regularization sequence f_n = T∗φ_n.
    Regularization {
        target: &'a DistributionRep,
        kernel: &'a MollifierKernel,
    },
    /// The slow sequence f_n = φ_{ln n} centered at `location` (associated to
    /// the point mass there); its growth is logarithmic but its convergence
    /// rate is slower than every power of n.
    LogMollifiedDelta {
        kernel: &'a MollifierKernel,
        location: f64,
        spec: GridSpec,
    },
}

impl<'a> ApproxSequence<'a> {
    pub fn spec(&self) -> GridSpec {
        match self {
            ApproxSequence::Regularization { target, .. } => target.spec(),
            ApproxSequence::LogMollifiedDelta { spec, .. } => *spec,
        }
    }

    pub fn kernel(&self) -> &MollifierKernel {
        match self {
            ApproxSequence::Regularization { kernel, .. } => kernel,
            ApproxSequence::LogMollifiedDelta { kernel, .. } => kernel,
        }
    }

    pub fn label(&self) -> String {
        match self {
            ApproxSequence::Regularization { target, .. } => {
                format!("regularization of {}", target.label())
            }
            ApproxSequence::LogMollifiedDelta { location, .. } => {
                format!("log-scale mollifier at {location}")
            }
        }
    }

    /// The distribution the sequence approximates.
    pub fn target(&self) -> Result<DistributionRep> {
        match self {
            ApproxSequence::Regularization { target, .. } => Ok((*target).clone()),
            ApproxSequence::LogMollifiedDelta {
                location, spec, ..
            } => crate::signals::gen_delta(0, *location, *spec),
        }
    }

    /// Grid samples of ∂ᵐf_n.
    pub fn term(&self, n: f64, m: usize) -> Result<GridSignal> {
        match self {
            ApproxSequence::Regularization { target, kernel } => mollify(target, kernel, n, m),
            ApproxSequence::LogMollifiedDelta {
                kernel,
                location,
                spec,
            } => {
                if !(n > 1.0) {
                    return Err(Error::Validation(format!(
                        "log-scale sequence needs n > 1, got {n}"
                    )));
                }
                let scale = n.ln();
                check_resolution(*spec, scale)?;
                let pg_m = kernel.base().derivative(m);
                let amp = scale.powi(1 + m as i32);
                GridSignal::new(
                    *spec,
                    spec.positions()
                        .map(|x| amp * pg_m.eval(scale * (x - location)))
                        .collect(),
                )
            }
        }
    }
}

/// Sweep an arbitrary approximation sequence (indices need not satisfy the
/// mollifier resolution bound; only the effective kernel scale must).
pub fn sweep_sequence(
    seq: &ApproxSequence,
    k: usize,
    indices: &[f64],
    window: Window,
) -> Result<ScaleSweep> {
    match seq {
        ApproxSequence::Regularization { target, kernel } => {
            scale_sweep(target, kernel, k, indices, window)
        }
        ApproxSequence::LogMollifiedDelta { kernel, .. } => {
            if indices.is_empty() {
                return Err(Error::Validation("empty index ladder".into()));
            }
            for pair in indices.windows(2) {
                if !(pair[0] < pair[1]) {
                    return Err(Error::Validation(
                        "indices must be strictly increasing".into(),
                    ));
                }
            }
            let mut sup_norms = vec![vec![0.0; indices.len()]; k + 1];
            for (m, row) in sup_norms.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    let sig = seq.term(indices[j], m)?;
                    *v = sup_norm(&sig, window)?;
                }
            }
            Ok(ScaleSweep {
                k,
                scales: indices.to_vec(),
                sup_norms,
                window,
                kernel: kernel.descriptor(),
            })
        }
    }
}

/// Geometric scale ladder from `n_min` to `n_max` with `per_octave` points
/// per doubling.
pub fn geometric_ladder(n_min: f64, n_max: f64, per_octave: usize) -> Result<Vec<f64>> {
    if !(n_min > 0.0) || !(n_max > n_min) || per_octave == 0 {
        return Err(Error::Validation(format!(
            "bad ladder parameters ({n_min}, {n_max}, {per_octave}/octave)"
        )));
    }
    let mut out = Vec::new();
    let mut j = 0usize;
    loop {
        let n = n_min * (2.0f64).powf(j as f64 / per_octave as f64);
        if n > n_max * (1.0 + 1e-9) {
            break;
        }
        out.push(n);
        j += 1;
    }
    Ok(out)
}
