//! Independent regularity measurements used to cross-validate the mollifier
//! estimator: the dyadic band-pass (Littlewood–Paley) norm and the direct
//! difference-quotient seminorm.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{ols, GrowthFit, Method, RegularityEstimate, SUP_FLOOR};
use crate::kernels::{LpFamily, LpFamilyDescriptor};
use crate::signals::{DistributionRep, GridSignal, Window};
use crate::transform::{convolve, sup_norm};

/// Per-level window sup-norms S_j = sup|T∗θ_{2^j}|; level 0 carries the
/// low-pass kernel, level j ≥ 1 the band-pass kernel at scale 2ʲ.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LpDecomposition {
    pub levels: Vec<f64>,
    pub family: LpFamilyDescriptor,
    pub window: Window,
}

impl LpDecomposition {
    pub fn j_max(&self) -> usize {
        self.levels.len() - 1
    }

    /// CSV export: header `j,sup_norm`, one row per level, full precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,sup_norm\n");
        for (j, s) in self.levels.iter().enumerate() {
            out.push_str(&format!("{j},{s:.16e}\n"));
        }
        out
    }
}

/// Compute the per-level sup-norms up to level `j_max`. Levels are
/// independent and evaluated in parallel; assembly is by index.
///
/// No window padding is enforced here: the unscaled low levels necessarily
/// overhang any window on the default box, and the wraparound they incur is
/// exponentially small while the exponent fit uses only high levels.
pub fn lp_decompose(
    rep: &DistributionRep,
    family: &LpFamily,
    j_max: usize,
    window: Window,
) -> Result<LpDecomposition> {
    let levels: Result<Vec<f64>> = (0..=j_max)
        .into_par_iter()
        .map(|j| {
            let (base, scale) = family.level_kernel(j);
            let sig = convolve(rep, base, scale, 0)?;
            sup_norm(&sig, window)
        })
        .collect();
    Ok(LpDecomposition {
        levels: levels?,
        family: family.descriptor(),
        window,
    })
}

/// Finite-level proxy for the weighted norm: max over j of 2^{αj}·S_j.
/// Meaningful for alpha below the family's vanishing order; nondecreasing in
/// alpha by construction.
pub fn lp_norm(decomp: &LpDecomposition, alpha: f64) -> f64 {
    decomp
        .levels
        .iter()
        .enumerate()
        .map(|(j, s)| (2.0f64).powf(alpha * j as f64) * s)
        .fold(0.0f64, f64::max)
}

/// Estimate the exponent from the level decay: OLS slope of log2 S_j against
/// j over the tail levels, alpha = −slope.
///
/// The tail always uses an odd number of consecutive levels: lacunary spectra
/// produce a period-two ripple in log2 S_j whose alternating component is
/// orthogonal to a linear trend only for an odd count.
pub fn lp_estimate_alpha(decomp: &LpDecomposition, tail_fraction: f64) -> Result<RegularityEstimate> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::Validation(format!(
            "tail fraction {tail_fraction} must lie in (0, 1]"
        )));
    }
    let len = decomp.levels.len();
    let usable = decomp.levels.iter().filter(|&&s| s >= SUP_FLOOR).count();
    if usable < 5 {
        return Err(Error::DegenerateFit(format!(
            "only {usable} levels above the floor; need at least 5"
        )));
    }
    let mut count = ((tail_fraction * len as f64).ceil() as usize).clamp(5, len);
    if count % 2 == 0 {
        count -= 1;
    }
    let mut xs = Vec::with_capacity(count);
    let mut ys = Vec::with_capacity(count);
    for j in len - count..len {
        let s = decomp.levels[j];
        if s >= SUP_FLOOR {
            xs.push(j as f64);
            ys.push(s.log2());
        }
    }
    if xs.len() < 4 {
        return Err(Error::DegenerateFit(format!(
            "only {} tail levels above the floor",
            xs.len()
        )));
    }
    let (slope, intercept, stderr, r_squared) = ols(&xs, &ys);
    let alpha = -slope;
    Ok(RegularityEstimate {
        alpha,
        k_used: 0,
        growth: GrowthFit {
            // level-decay fit; sign preserved (alpha = 0 − slope)
            slope,
            intercept,
            stderr,
            r_squared,
            points_used: xs.len(),
            tail_fraction,
        },
        saturated: false,
        method: Method::LittlewoodPaley,
    })
}

/// Direct difference-quotient seminorm sup |f(x+δ)−f(x)|/δ^α over the window,
/// reduced to dyadic gaps δ = h·2ⁱ to keep the cost near-linear. The dyadic
/// restriction changes the sup by at most a factor 2^α.
pub fn holder_seminorm(sig: &GridSignal, alpha: f64, window: Window) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Validation(format!(
            "seminorm exponent {alpha} must lie in (0, 1)"
        )));
    }
    let spec = sig.spec();
    let h = spec.spacing();
    let lo = ((window.a - spec.x_min) / h).ceil().max(0.0) as usize;
    let mut hi = lo;
    for i in lo..spec.n {
        if spec.x(i) > window.b {
            break;
        }
        hi = i;
    }
    if hi <= lo {
        return Err(Error::EmptyWindow {
            a: window.a,
            b: window.b,
        });
    }
    let samples = sig.samples();
    let mut best = 0.0f64;
    let mut gap = 1usize;
    while gap <= hi - lo {
        let denom = (gap as f64 * h).powf(alpha);
        let mut m = 0.0f64;
        for i in lo..=hi - gap {
            m = m.max((samples[i + gap] - samples[i]).abs());
        }
        best = best.max(m / denom);
        gap *= 2;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{LpFamily, PolyGauss};
    use crate::signals::{
        gen_bump, gen_constant, gen_delta, gen_heaviside, gen_power_cusp, GridSpec,
    };

    fn spec14() -> GridSpec {
        GridSpec::new(1 << 14, -4.0, 4.0).unwrap()
    }

    fn window() -> Window {
        Window::new(-0.25, 0.25).unwrap()
    }

    #[test]
    fn delta_levels_are_scaled_kernel_sups() {
        let fam = LpFamily::new(8, 1.0).unwrap();
        let d = gen_delta(0, 0.0, spec14()).unwrap();
        let dec = lp_decompose(&d, &fam, 8, window()).unwrap();
        // sup over the grid of |theta|; the band-pass kernel peaks at 0
        let theta = PolyGauss::gaussian_derivative(8);
        let sup_theta = theta.eval(0.0).abs();
        for j in 1..=8 {
            let expect = (2.0f64).powi(j as i32) * sup_theta;
            assert!(
                (dec.levels[j] / expect - 1.0).abs() < 1e-10,
                "level {j}: {} vs {expect}",
                dec.levels[j]
            );
        }
    }

    #[test]
    fn constants_die_in_every_band() {
        let fam = LpFamily::new(8, 1.0).unwrap();
        let c = gen_constant(1.0, spec14()).unwrap();
        let dec = lp_decompose(&c, &fam, 8, window()).unwrap();
        // low levels see the plateau edge through the kernel tails; once the
        // edge sits many scaled widths away the bands are empty
        for j in 4..=8 {
            assert!(dec.levels[j] < 1e-8, "level {j}: {}", dec.levels[j]);
        }
        assert!(dec.levels[8] < dec.levels[1].max(1e-12));
    }

    #[test]
    fn smooth_bump_levels_collapse_fast() {
        let fam = LpFamily::new(8, 1.0).unwrap();
        let b = gen_bump(spec14()).unwrap();
        let dec = lp_decompose(&b, &fam, 6, window()).unwrap();
        // eight vanishing moments against a smooth function: decay far
        // faster than 2^{-7} per level
        assert!(dec.levels[5] / dec.levels[2] < (2.0f64).powi(-21));
    }

    #[test]
    fn norm_proxy_examples_for_delta() {
        let fam = LpFamily::new(8, 1.0).unwrap();
        let d = gen_delta(0, 0.0, spec14()).unwrap();
        let dec = lp_decompose(&d, &fam, 8, window()).unwrap();
        let theta_sup = PolyGauss::gaussian_derivative(8).eval(0.0).abs();
        // at alpha = -1 the weights cancel the level growth
        assert!((lp_norm(&dec, -1.0) / theta_sup - 1.0).abs() < 1e-9);
        // at alpha = -1/2 the proxy diverges with the level count
        let expect = (2.0f64).powf(8.0 / 2.0) * theta_sup;
        assert!((lp_norm(&dec, -0.5) / expect - 1.0).abs() < 1e-9);
        // zero distribution
        let zero = LpDecomposition {
            levels: vec![0.0; 9],
            family: fam.descriptor(),
            window: window(),
        };
        assert_eq!(lp_norm(&zero, 0.3), 0.0);
    }

    #[test]
    fn norm_proxy_is_monotone_in_alpha() {
        let fam = LpFamily::new(8, 1.0).unwrap();
        let h = gen_heaviside(spec14()).unwrap();
        let dec = lp_decompose(&h, &fam, 8, window()).unwrap();
        let mut alphas = [-2.0, -1.0, -0.3, 0.0, 0.4, 1.1, 2.5];
        alphas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let norms: Vec<f64> = alphas.iter().map(|&a| lp_norm(&dec, a)).collect();
        for w in norms.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn level_decay_recovers_exponents() {
        let fam = LpFamily::new(8, 1.0).unwrap();
        let cases: Vec<(DistributionRep, f64, f64)> = vec![
            (gen_delta(0, 0.0, spec14()).unwrap(), -1.0, 0.05),
            (gen_heaviside(spec14()).unwrap(), 0.0, 0.05),
            (gen_power_cusp(0.5, spec14()).unwrap(), 0.5, 0.1),
        ];
        for (rep, expect, tol) in cases {
            let dec = lp_decompose(&rep, &fam, 8, window()).unwrap();
            let est = lp_estimate_alpha(&dec, 0.5).unwrap();
            assert!(
                (est.alpha - expect).abs() < tol,
                "{}: alpha {} vs {expect}",
                rep.label(),
                est.alpha
            );
            assert_eq!(est.method, Method::LittlewoodPaley);
            assert!(!est.saturated);
        }
    }

    #[test]
    fn lowpass_choice_does_not_move_the_estimate() {
        let d = gen_delta(0, 0.0, spec14()).unwrap();
        let narrow = LpFamily::new(8, 1.0).unwrap();
        let wide = LpFamily::new(8, 1.0)
            .unwrap()
            .with_lowpass_width(2.0)
            .unwrap();
        let a = lp_estimate_alpha(&lp_decompose(&d, &narrow, 8, window()).unwrap(), 0.5).unwrap();
        let b = lp_estimate_alpha(&lp_decompose(&d, &wide, 8, window()).unwrap(), 0.5).unwrap();
        assert!((a.alpha - b.alpha).abs() < 0.02);
    }

    #[test]
    fn estimate_needs_enough_live_levels() {
        let fam = LpFamily::new(8, 1.0).unwrap();
        let dec = LpDecomposition {
            levels: vec![0.0, 0.0, 1.0, 2.0, 4.0],
            family: fam.descriptor(),
            window: window(),
        };
        assert!(matches!(
            lp_estimate_alpha(&dec, 0.5),
            Err(Error::DegenerateFit(_))
        ));
    }

    #[test]
    fn seminorm_of_constant_vanishes() {
        let c = gen_constant(1.0, spec14()).unwrap();
        let s = holder_seminorm(c.grid().unwrap(), 0.5, window()).unwrap();
        assert_eq!(s, 0.0);
    }

    #[test]
    fn seminorm_of_cusp_at_matching_exponent_is_unit() {
        let cusp = gen_power_cusp(0.5, spec14()).unwrap();
        let s = holder_seminorm(cusp.grid().unwrap(), 0.5, window()).unwrap();
        assert!((s - 1.0).abs() < 0.05, "seminorm {s}");
    }

    #[test]
    fn seminorm_diverges_beyond_the_true_exponent() {
        let coarse = gen_power_cusp(0.5, spec14()).unwrap();
        let fine = gen_power_cusp(0.5, GridSpec::new(1 << 15, -4.0, 4.0).unwrap()).unwrap();
        let s_c = holder_seminorm(coarse.grid().unwrap(), 0.75, window()).unwrap();
        let s_f = holder_seminorm(fine.grid().unwrap(), 0.75, window()).unwrap();
        assert!(s_f / s_c > 1.15, "ratio {}", s_f / s_c);
        // at the true exponent refinement changes nothing
        let t_c = holder_seminorm(coarse.grid().unwrap(), 0.5, window()).unwrap();
        let t_f = holder_seminorm(fine.grid().unwrap(), 0.5, window()).unwrap();
        assert!((t_f / t_c - 1.0).abs() < 0.02);
    }

    #[test]
    fn seminorm_validates_inputs() {
        let c = gen_constant(1.0, spec14()).unwrap();
        assert!(holder_seminorm(c.grid().unwrap(), 1.5, window()).is_err());
        let w = Window::new(100.0, 101.0);
        assert!(w.is_ok());
        assert!(matches!(
            holder_seminorm(c.grid().unwrap(), 0.5, w.unwrap()),
            Err(Error::EmptyWindow { .. })
        ));
    }
}
