//! The synthetic validation corpus: fixtures with known exponents, the
//! analysis configuration each one needs, and the tolerances the suite
//! checks. Shared by the library's acceptance tests and the CLI suite.

use crate::error::Result;
use crate::signals::{
    gen_bump, gen_constant, gen_delta, gen_heaviside, gen_power_cusp, gen_weierstrass,
    DistributionRep, GridSpec, Window,
};
use crate::transform::{geometric_ladder, OVERSAMPLING};

/// Fixture constructors by kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FixtureKind {
    Cusp(f64),
    Weierstrass { a: f64, b: f64 },
    Heaviside,
    Delta { order: usize },
    Bump,
    Constant(f64),
}

/// One corpus entry: what to build, what it should measure as, and how.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub kind: FixtureKind,
    /// Known exponent; `None` marks a smooth fixture (saturates every probe).
    pub true_alpha: Option<f64>,
    /// Probe orders for the consistency check (first entry is the primary k).
    pub k_list: &'static [usize],
    /// log2 of the grid size.
    pub grid_pow: u32,
    pub n_min: f64,
    pub n_max: f64,
    /// Tolerance on |alpha_hat − true_alpha| for the primary estimate.
    pub alpha_tolerance: f64,
}

/// Analysis window used throughout the corpus. It sits inside the plateau of
/// the fixed windowing bump, so sup-norms see only the fixture's own
/// singularity and not the smooth cutoff transition.
pub fn analysis_window() -> Window {
    Window::new(-0.25, 0.25).unwrap()
}

/// Standard box at the given resolution.
pub fn corpus_spec(grid_pow: u32) -> GridSpec {
    GridSpec::new(1usize << grid_pow, -4.0, 4.0).unwrap()
}

/// Highest dyadic level resolved on the grid.
pub fn lp_levels_for(spec: GridSpec) -> usize {
    let n_max = spec.n as f64 / (OVERSAMPLING * spec.length());
    n_max.log2().floor() as usize
}

pub fn build_fixture(kind: FixtureKind, spec: GridSpec) -> Result<DistributionRep> {
    match kind {
        FixtureKind::Cusp(alpha) => gen_power_cusp(alpha, spec),
        FixtureKind::Weierstrass { a, b } => gen_weierstrass(a, b, None, spec),
        FixtureKind::Heaviside => gen_heaviside(spec),
        FixtureKind::Delta { order } => gen_delta(order, 0.0, spec),
        FixtureKind::Bump => gen_bump(spec),
        FixtureKind::Constant(c) => gen_constant(c, spec),
    }
}

impl CorpusEntry {
    pub fn spec(&self) -> GridSpec {
        corpus_spec(self.grid_pow)
    }

    pub fn build(&self) -> Result<DistributionRep> {
        build_fixture(self.kind, self.spec())
    }

    pub fn scales(&self) -> Result<Vec<f64>> {
        geometric_ladder(self.n_min, self.n_max, 2)
    }

    /// Primary probe order.
    pub fn k(&self) -> usize {
        self.k_list[0]
    }
}

/// The whole validation corpus.
///
/// The lacunary fixture runs at twice the default resolution with the ladder
/// extended to 2048: its sup-norm law carries a finite-scale transient
/// decaying like n^{-1/2}, and the extended range brings the fitted exponent
/// well inside tolerance.
pub fn standard_corpus() -> Vec<CorpusEntry> {
    vec![
        CorpusEntry {
            name: "cusp(0.3)",
            kind: FixtureKind::Cusp(0.3),
            true_alpha: Some(0.3),
            k_list: &[1, 2],
            grid_pow: 16,
            n_min: 4.0,
            n_max: 512.0,
            alpha_tolerance: 0.1,
        },
        CorpusEntry {
            name: "cusp(0.5)",
            kind: FixtureKind::Cusp(0.5),
            true_alpha: Some(0.5),
            k_list: &[1, 2],
            grid_pow: 16,
            n_min: 4.0,
            n_max: 512.0,
            alpha_tolerance: 0.05,
        },
        CorpusEntry {
            name: "cusp(0.7)",
            kind: FixtureKind::Cusp(0.7),
            true_alpha: Some(0.7),
            k_list: &[1, 2],
            grid_pow: 16,
            n_min: 4.0,
            n_max: 512.0,
            alpha_tolerance: 0.1,
        },
        CorpusEntry {
            name: "cusp(1.5)",
            kind: FixtureKind::Cusp(1.5),
            true_alpha: Some(1.5),
            k_list: &[2, 3],
            grid_pow: 16,
            n_min: 4.0,
            n_max: 512.0,
            alpha_tolerance: 0.07,
        },
        CorpusEntry {
            name: "weierstrass(0.5,4)",
            kind: FixtureKind::Weierstrass { a: 0.5, b: 4.0 },
            true_alpha: Some(0.5),
            k_list: &[1, 2],
            grid_pow: 17,
            n_min: 4.0,
            n_max: 2048.0,
            alpha_tolerance: 0.07,
        },
        CorpusEntry {
            name: "heaviside",
            kind: FixtureKind::Heaviside,
            true_alpha: Some(0.0),
            k_list: &[1, 2],
            grid_pow: 16,
            n_min: 4.0,
            n_max: 512.0,
            alpha_tolerance: 0.05,
        },
        CorpusEntry {
            name: "delta",
            kind: FixtureKind::Delta { order: 0 },
            true_alpha: Some(-1.0),
            k_list: &[0, 1, 2],
            grid_pow: 16,
            n_min: 4.0,
            n_max: 512.0,
            alpha_tolerance: 0.05,
        },
        CorpusEntry {
            name: "delta'",
            kind: FixtureKind::Delta { order: 1 },
            true_alpha: Some(-2.0),
            k_list: &[0, 1],
            grid_pow: 16,
            n_min: 4.0,
            n_max: 512.0,
            alpha_tolerance: 0.07,
        },
        CorpusEntry {
            name: "bump",
            kind: FixtureKind::Bump,
            true_alpha: None,
            k_list: &[2, 3],
            grid_pow: 16,
            n_min: 4.0,
            n_max: 512.0,
            alpha_tolerance: f64::INFINITY,
        },
        CorpusEntry {
            name: "constant(1)",
            kind: FixtureKind::Constant(1.0),
            true_alpha: None,
            k_list: &[1, 2],
            grid_pow: 16,
            n_min: 4.0,
            n_max: 512.0,
            alpha_tolerance: f64::INFINITY,
        },
    ]
}

/// Cross-method agreement tolerance |alpha_mollifier − alpha_bandpass|.
pub const CROSS_METHOD_TOLERANCE: f64 = 0.1;

/// Maximum allowed spread of alpha over the probe orders of one fixture.
pub const K_SPREAD_TOLERANCE: f64 = 0.1;
