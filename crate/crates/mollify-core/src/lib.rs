//! Numerical measurement of Hölder–Zygmund regularity for functions and
//! compactly supported distributions.
//!
//! The central estimator convolves a distribution T with an analytic
//! mollifier family φ_n(x) = n·φ(nx), measures window sup-norms of the
//! derivatives ∂ᵐ(T∗φ_n) across a geometric scale ladder, fits the growth
//! exponent s of the dominant order, and reports the regularity exponent
//! alpha = k − s. Two independent oracles cross-check the result: the decay
//! of a dyadic band-pass (Littlewood–Paley) decomposition and, for continuous
//! signals, a direct difference-quotient seminorm.
//!
//! Modules:
//! - [`kernels`]: polynomial-times-Gaussian mollifiers with closed-form
//!   derivatives, moments, and Fourier magnitudes; the band-pass family.
//! - [`signals`]: distributions as grid densities plus atomic terms, fixture
//!   generators with known exponents, signal file I/O.
//! - [`transform`]: FFT convolution on the periodic box, pairings, sup-norms,
//!   scale sweeps.
//! - [`estimator`]: growth fits, alpha = k − s, probe-order consistency,
//!   smoothness verdicts, convergence-rate fits, hypothesis classification.
//! - [`oracles`]: band-pass exponent estimation and the Hölder seminorm.
//! - [`corpus`]: the validation fixtures and their tolerances.
//! - [`report`]: JSON report schema embedding the full run configuration.

pub mod corpus;
pub mod error;
pub mod estimator;
pub mod kernels;
pub mod oracles;
pub mod report;
pub mod signals;
pub mod transform;

pub use error::{Error, Result};
pub use estimator::{
    classify_sequence, estimate_from_sweep, estimate_rate, estimate_regularity, fit_growth,
    fit_growth_order, k_consistency, smoothness_test, Conclusion, ConclusionRoute,
    ConsistencyReport, GrowthFit, Method, RateFit, RateTestFit, RegularityEstimate,
    SequenceClassification, SmoothnessReport, SmoothnessVerdict,
};
pub use kernels::{KernelDescriptor, LpFamily, LpFamilyDescriptor, MollifierKernel, PolyGauss};
pub use oracles::{holder_seminorm, lp_decompose, lp_estimate_alpha, lp_norm, LpDecomposition};
pub use report::{loglog_csv, EstimateReport, RunConfig};
pub use signals::{
    bump_test_function, gen_bump, gen_constant, gen_delta, gen_heaviside, gen_power_cusp,
    gen_weierstrass, load_signal, store_signal, AtomicTerm, DistributionRep, GridSignal,
    GridSpec, SampleFormat, Window,
};
pub use transform::{
    geometric_ladder, mollify, pair, scale_sweep, spectral_derivative, sup_norm, sweep_sequence,
    ApproxSequence, ScaleSweep, OVERSAMPLING,
};
