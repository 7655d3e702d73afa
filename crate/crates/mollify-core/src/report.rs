//! Machine-readable report schema. Every report embeds the full run
//! configuration and the kernel descriptor so results can be reproduced
//! byte-for-byte from the report alone.

use serde::{Deserialize, Serialize};

use crate::estimator::{Method, RegularityEstimate};
use crate::kernels::KernelDescriptor;
use crate::transform::ScaleSweep;

/// Complete parameter set of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub fixture: String,
    pub n: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub window_a: f64,
    pub window_b: f64,
    pub kernel: String,
    pub n_min: f64,
    pub n_max: f64,
    pub per_octave: usize,
    pub tail_fraction: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_list: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_cap: Option<f64>,
}

/// One exponent estimate with its fit diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimateReport {
    pub fixture: String,
    pub method: Method,
    pub k: usize,
    pub alpha: f64,
    pub slope: f64,
    pub stderr: f64,
    pub r2: f64,
    pub saturated: bool,
    pub scales: Vec<f64>,
    pub config: RunConfig,
    pub kernel: KernelDescriptor,
}

impl EstimateReport {
    pub fn new(
        fixture: impl Into<String>,
        estimate: &RegularityEstimate,
        scales: Vec<f64>,
        config: RunConfig,
        kernel: KernelDescriptor,
    ) -> Self {
        EstimateReport {
            fixture: fixture.into(),
            method: estimate.method,
            k: estimate.k_used,
            alpha: estimate.alpha,
            slope: estimate.growth.slope,
            stderr: estimate.growth.stderr,
            r2: estimate.growth.r_squared,
            saturated: estimate.saturated,
            scales,
            config,
            kernel,
        }
    }
}

/// Plot data for one growth fit: (log n, log sup) pairs at full precision.
pub fn loglog_csv(sweep: &ScaleSweep) -> String {
    let mut out = String::from("log_n,log_sup\n");
    for (j, &n) in sweep.scales.iter().enumerate() {
        let sup = sweep.max_over_orders(j);
        out.push_str(&format!("{:.16e},{:.16e}\n", n.ln(), sup.ln()));
    }
    out
}
