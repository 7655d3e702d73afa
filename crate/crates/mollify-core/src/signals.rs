//! Compactly supported distributions on a periodic computational box:
//! grid-sampled densities plus atomic terms (derivatives of point masses),
//! the synthetic fixture generators, and the signal file format.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Geometry of the periodic computational box: `n` samples on [x_min, x_max).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub x_min: f64,
    pub x_max: f64,
}

impl GridSpec {
    pub fn new(n: usize, x_min: f64, x_max: f64) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::Validation(format!(
                "grid size {n} must be a power of two and at least 16"
            )));
        }
        if !(x_min < x_max) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::Validation(format!(
                "invalid box [{x_min}, {x_max})"
            )));
        }
        Ok(GridSpec { n, x_min, x_max })
    }

    /// Default box: 2^16 samples on [-4, 4).
    pub fn default_box() -> Self {
        GridSpec {
            n: 1 << 16,
            x_min: -4.0,
            x_max: 4.0,
        }
    }

    /// Same box at a given power-of-two resolution.
    pub fn with_n(self, n: usize) -> Result<Self> {
        GridSpec::new(n, self.x_min, self.x_max)
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn spacing(&self) -> f64 {
        self.length() / self.n as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + self.spacing() * i as f64
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.x_min && x < self.x_max
    }

    /// Sample positions, ascending.
    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.x(i))
    }
}

/// Samples of a function on a `GridSpec`. The recorded margin is the distance
/// from the support (nonzero samples) to the nearest box edge.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSignal {
    spec: GridSpec,
    samples: Vec<f64>,
    margin: f64,
}

impl GridSignal {
    pub fn new(spec: GridSpec, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != spec.n {
            return Err(Error::Validation(format!(
                "sample count {} does not match grid size {}",
                samples.len(),
                spec.n
            )));
        }
        if let Some(bad) = samples.iter().find(|s| !s.is_finite()) {
            return Err(Error::Validation(format!("non-finite sample {bad}")));
        }
        let margin = support_margin(&spec, &samples);
        Ok(GridSignal {
            spec,
            samples,
            margin,
        })
    }

    pub fn from_fn(spec: GridSpec, f: impl Fn(f64) -> f64) -> Result<Self> {
        let samples = spec.positions().map(f).collect();
        GridSignal::new(spec, samples)
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// Multiply every sample by a constant.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        GridSignal::new(
            self.spec,
            self.samples.iter().map(|s| s * factor).collect(),
        )
    }

    /// Value at the grid point nearest to x (within half a spacing).
    pub fn value_near(&self, x: f64) -> Option<f64> {
        let h = self.spec.spacing();
        let idx = ((x - self.spec.x_min) / h).round();
        if idx < 0.0 || idx >= self.spec.n as f64 {
            return None;
        }
        let i = idx as usize;
        ((self.spec.x(i) - x).abs() <= 0.5 * h).then(|| self.samples[i])
    }
}

fn support_margin(spec: &GridSpec, samples: &[f64]) -> f64 {
    let mut lo = None;
    let mut hi = None;
    for (i, &s) in samples.iter().enumerate() {
        if s != 0.0 {
            if lo.is_none() {
                lo = Some(i);
            }
            hi = Some(i);
        }
    }
    match (lo, hi) {
        (Some(lo), Some(hi)) => {
            let left = spec.x(lo) - spec.x_min;
            let right = spec.x_max - spec.x(hi);
            left.min(right)
        }
        _ => spec.length() / 2.0,
    }
}

/// Weighted derivative of a point mass: weight · δ^{(order)} at `location`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomicTerm {
    pub location: f64,
    pub weight: f64,
    pub order: usize,
}

/// Highest point-mass derivative order supported.
pub const MAX_ATOM_ORDER: usize = 8;

/// A compactly supported distribution: optional grid density plus atoms.
/// The grid geometry is carried even when the representation is purely atomic.
#[derive(Debug, Clone)]
pub struct DistributionRep {
    spec: GridSpec,
    grid: Option<GridSignal>,
    atoms: Vec<AtomicTerm>,
    label: String,
}

impl DistributionRep {
    pub fn new(
        spec: GridSpec,
        grid: Option<GridSignal>,
        atoms: Vec<AtomicTerm>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if grid.is_none() && atoms.is_empty() {
            return Err(Error::Validation(
                "distribution needs a grid part or at least one atom".into(),
            ));
        }
        if let Some(g) = &grid {
            if g.spec() != spec {
                return Err(Error::Validation(
                    "grid geometry does not match the declared spec".into(),
                ));
            }
        }
        for atom in &atoms {
            if !(atom.location > spec.x_min && atom.location < spec.x_max) {
                return Err(Error::Support(format!(
                    "atom at {} lies outside the open box ({}, {})",
                    atom.location, spec.x_min, spec.x_max
                )));
            }
            if atom.order > MAX_ATOM_ORDER {
                return Err(Error::Validation(format!(
                    "atom order {} exceeds cap {MAX_ATOM_ORDER}",
                    atom.order
                )));
            }
            if !atom.weight.is_finite() || !atom.location.is_finite() {
                return Err(Error::Validation("non-finite atom".into()));
            }
        }
        Ok(DistributionRep {
            spec,
            grid,
            atoms,
            label: label.into(),
        })
    }

    pub fn from_grid(grid: GridSignal, label: impl Into<String>) -> Self {
        let spec = grid.spec();
        DistributionRep {
            spec,
            grid: Some(grid),
            atoms: Vec::new(),
            label: label.into(),
        }
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn grid(&self) -> Option<&GridSignal> {
        self.grid.as_ref()
    }

    pub fn atoms(&self) -> &[AtomicTerm] {
        &self.atoms
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Multiply the whole distribution by a constant.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let grid = match &self.grid {
            Some(g) => Some(g.scaled(factor)?),
            None => None,
        };
        let atoms = self
            .atoms
            .iter()
            .map(|a| AtomicTerm {
                weight: a.weight * factor,
                ..*a
            })
            .collect();
        DistributionRep::new(self.spec, grid, atoms, self.label.clone())
    }

    /// Distributional derivative: atoms gain one order; the grid part is
    /// differentiated spectrally.
    pub fn derivative(&self) -> Result<Self> {
        let grid = match &self.grid {
            Some(g) => Some(crate::transform::spectral_derivative(g, 1)?),
            None => None,
        };
        let atoms = self
            .atoms
            .iter()
            .map(|a| AtomicTerm {
                order: a.order + 1,
                ..*a
            })
            .collect();
        DistributionRep::new(
            self.spec,
            grid,
            atoms,
            format!("d/dx {}", self.label),
        )
    }
}

/// Closed analysis window [a, b]; sup-norms are taken over it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub a: f64,
    pub b: f64,
}

impl Window {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::Validation(format!("invalid window [{a}, {b}]")));
        }
        Ok(Window { a, b })
    }
}

// ---------------------------------------------------------------------------
// smooth cutoffs

/// C^∞ ramp: 0 for t ≤ 0, 1 for t ≥ 1.
fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        a / (a + b)
    }
}

/// C^∞ plateau window: 1 on [-flat, flat], 0 outside [-support, support].
pub fn plateau_window(x: f64, flat: f64, support: f64) -> f64 {
    let ax = x.abs();
    if ax <= flat {
        1.0
    } else if ax >= support {
        0.0
    } else {
        smooth_step((support - ax) / (support - flat))
    }
}

/// The fixed windowing bump w: 1 on [-1/2, 1/2], 0 outside [-1, 1].
pub fn cutoff_window(x: f64) -> f64 {
    plateau_window(x, 0.5, 1.0)
}

/// The standard smooth bump exp(-1/(1-x²)) on (-1, 1), 0 outside.
pub fn standard_bump(x: f64) -> f64 {
    let x2 = x * x;
    if x2 < 1.0 {
        (-1.0 / (1.0 - x2)).exp()
    } else {
        0.0
    }
}

// ---------------------------------------------------------------------------
// generators

/// Minimum resolution for singular fixtures.
const MIN_CUSP_N: usize = 1 << 10;

/// Windowed power cusp |x|^alpha·w(x): exact Hölder exponent alpha at 0.
pub fn gen_power_cusp(alpha: f64, spec: GridSpec) -> Result<DistributionRep> {
    if !(alpha > 0.0 && alpha < 2.0) || alpha == 1.0 {
        return Err(Error::Validation(format!(
            "cusp exponent {alpha} must lie in (0,2) and not be an integer"
        )));
    }
    if spec.n < MIN_CUSP_N {
        return Err(Error::Resolution {
            scale: spec.n as f64,
            product: spec.n as f64,
            oversampling: MIN_CUSP_N as f64,
        });
    }
    let grid = GridSignal::from_fn(spec, |x| x.abs().powf(alpha) * cutoff_window(x))?;
    DistributionRep::new(spec, Some(grid), vec![], format!("cusp({alpha})"))
}

/// Number of series terms needed so the truncation is below 1e-12.
pub fn weierstrass_terms(a: f64) -> usize {
    ((-12.0 * std::f64::consts::LN_10) / a.ln()).ceil() as usize
}

/// Windowed lacunary cosine series Σ aʲ·cos(bʲπx)·w(x); for ab > 1 the exact
/// Hölder exponent is ln(1/a)/ln(b) at every point.
pub fn gen_weierstrass(
    a: f64,
    b: f64,
    terms: Option<usize>,
    spec: GridSpec,
) -> Result<DistributionRep> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Validation(format!("need 0 < a < 1, got {a}")));
    }
    if !(b > 1.0) || !(a * b > 1.0) {
        return Err(Error::Validation(format!(
            "need b > 1 and a*b > 1, got a={a} b={b}"
        )));
    }
    let terms = terms.unwrap_or_else(|| weierstrass_terms(a));
    if a.powi(terms as i32) >= 1e-12 {
        return Err(Error::Validation(format!(
            "{terms} terms leave truncation a^terms = {:e} >= 1e-12",
            a.powi(terms as i32)
        )));
    }
    let mut samples = vec![0.0; spec.n];
    let mut amp = 1.0;
    let mut freq = std::f64::consts::PI;
    for _ in 0..terms {
        for (i, s) in samples.iter_mut().enumerate() {
            *s += amp * (freq * spec.x(i)).cos();
        }
        amp *= a;
        freq *= b;
    }
    for (i, s) in samples.iter_mut().enumerate() {
        *s *= cutoff_window(spec.x(i));
    }
    let grid = GridSignal::new(spec, samples)?;
    DistributionRep::new(spec, Some(grid), vec![], format!("weierstrass({a},{b})"))
}

/// Windowed unit step with the jump at 0. The jump sample takes the midpoint
/// value 1/2 so the discrete convolution is the exact trapezoid rule there.
pub fn gen_heaviside(spec: GridSpec) -> Result<DistributionRep> {
    let grid = GridSignal::from_fn(spec, |x| {
        let step = if x > 0.0 {
            1.0
        } else if x == 0.0 {
            0.5
        } else {
            0.0
        };
        step * cutoff_window(x)
    })?;
    DistributionRep::new(spec, Some(grid), vec![], "heaviside")
}

/// The standard smooth bump fixture.
pub fn gen_bump(spec: GridSpec) -> Result<DistributionRep> {
    let grid = GridSignal::from_fn(spec, standard_bump)?;
    DistributionRep::new(spec, Some(grid), vec![], "bump")
}

/// Constant c on a wide plateau ([-2, 2], fading to 0 by |x| = 3) so smooth
/// test functions of width up to 2 see a pure constant.
pub fn gen_constant(c: f64, spec: GridSpec) -> Result<DistributionRep> {
    if spec.x_max - 3.0 < spec.x_min + 0.5 {
        return Err(Error::Support(
            "box too small for the constant plateau".into(),
        ));
    }
    let grid = GridSignal::from_fn(spec, |x| c * plateau_window(x, 2.0, 3.0))?;
    DistributionRep::new(spec, Some(grid), vec![], format!("constant({c})"))
}

/// Purely atomic δ^{(order)} at `location`.
pub fn gen_delta(order: usize, location: f64, spec: GridSpec) -> Result<DistributionRep> {
    let label = if order == 0 {
        format!("delta(x={location})")
    } else {
        format!("delta^({order})(x={location})")
    };
    DistributionRep::new(
        spec,
        None,
        vec![AtomicTerm {
            location,
            weight: 1.0,
            order,
        }],
        label,
    )
}

/// Smooth test function for pairings: a bump of the given center and width.
pub fn bump_test_function(center: f64, width: f64, spec: GridSpec) -> Result<GridSignal> {
    if !(width > 0.0) {
        return Err(Error::Validation("bump width must be positive".into()));
    }
    if center - width <= spec.x_min || center + width >= spec.x_max {
        return Err(Error::Support(format!(
            "bump [{}, {}] leaves the box",
            center - width,
            center + width
        )));
    }
    GridSignal::from_fn(spec, |x| standard_bump((x - center) / width))
}

// ---------------------------------------------------------------------------
// file format: one-line JSON header, then samples (sidecar .bin or inline CSV)

/// Sample payload encoding for stored signals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleFormat {
    Bin,
    Csv,
    None,
}

#[derive(Debug, Serialize, Deserialize)]
struct AtomJson {
    x: f64,
    w: f64,
    p: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct SignalHeader {
    n: usize,
    x_min: f64,
    x_max: f64,
    label: String,
    #[serde(default)]
    atoms: Vec<AtomJson>,
    #[serde(default)]
    format: Option<SampleFormat>,
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut os = path.as_os_str().to_owned();
    os.push(".bin");
    PathBuf::from(os)
}

/// Write a distribution to `path`. Grid samples go to a `.bin` sidecar
/// (little-endian f64) or inline as CSV lines after the header.
pub fn store_signal(rep: &DistributionRep, path: &Path, format: SampleFormat) -> Result<()> {
    let spec = rep.spec();
    let format = if rep.grid().is_none() {
        SampleFormat::None
    } else {
        format
    };
    let header = SignalHeader {
        n: spec.n,
        x_min: spec.x_min,
        x_max: spec.x_max,
        label: rep.label().to_string(),
        atoms: rep
            .atoms()
            .iter()
            .map(|a| AtomJson {
                x: a.location,
                w: a.weight,
                p: a.order,
            })
            .collect(),
        format: Some(format),
    };
    let mut out = serde_json::to_string(&header)?;
    out.push('\n');
    if let Some(grid) = rep.grid() {
        match format {
            SampleFormat::Bin => {
                let mut bytes = Vec::with_capacity(grid.samples().len() * 8);
                for s in grid.samples() {
                    bytes.extend_from_slice(&s.to_le_bytes());
                }
                fs::write(sidecar_path(path), bytes)?;
            }
            SampleFormat::Csv => {
                for s in grid.samples() {
                    out.push_str(&format!("{s:.16e}\n"));
                }
            }
            SampleFormat::None => {}
        }
    }
    let mut file = fs::File::create(path)?;
    file.write_all(out.as_bytes())?;
    Ok(())
}

/// Read a distribution written by `store_signal`.
pub fn load_signal(path: &Path) -> Result<DistributionRep> {
    let text = fs::read_to_string(path)?;
    let (first, rest) = match text.split_once('\n') {
        Some(pair) => pair,
        None => (text.as_str(), ""),
    };
    let header: SignalHeader = serde_json::from_str(first).map_err(|e| Error::Format {
        location: format!("{}:1", path.display()),
        message: e.to_string(),
    })?;
    let spec = GridSpec::new(header.n, header.x_min, header.x_max)?;
    let format = header.format.unwrap_or({
        if sidecar_path(path).exists() {
            SampleFormat::Bin
        } else if rest.trim().is_empty() {
            SampleFormat::None
        } else {
            SampleFormat::Csv
        }
    });
    let grid = match format {
        SampleFormat::Bin => {
            let bytes = fs::read(sidecar_path(path))?;
            if bytes.len() != 8 * spec.n {
                return Err(Error::Format {
                    location: sidecar_path(path).display().to_string(),
                    message: format!(
                        "expected {} bytes of samples, found {}",
                        8 * spec.n,
                        bytes.len()
                    ),
                });
            }
            let samples = bytes
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                .collect();
            Some(GridSignal::new(spec, samples)?)
        }
        SampleFormat::Csv => {
            let mut samples = Vec::with_capacity(spec.n);
            for (lineno, line) in rest.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let v: f64 = line.trim().parse().map_err(|e| Error::Format {
                    location: format!("{}:{}", path.display(), lineno + 2),
                    message: format!("bad sample: {e}"),
                })?;
                samples.push(v);
            }
            if samples.len() != spec.n {
                return Err(Error::Format {
                    location: path.display().to_string(),
                    message: format!("expected {} samples, found {}", spec.n, samples.len()),
                });
            }
            Some(GridSignal::new(spec, samples)?)
        }
        SampleFormat::None => None,
    };
    let atoms = header
        .atoms
        .iter()
        .map(|a| AtomicTerm {
            location: a.x,
            weight: a.w,
            order: a.p,
        })
        .collect();
    DistributionRep::new(spec, grid, atoms, header.label)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cusp_values_and_evenness() {
        let spec = GridSpec::default_box();
        let rep = gen_power_cusp(0.5, spec).unwrap();
        let g = rep.grid().unwrap();
        assert_eq!(g.value_near(0.25).unwrap(), 0.5);
        assert_eq!(g.value_near(0.0).unwrap(), 0.0);
        let s = g.samples();
        for i in 1..spec.n {
            assert!(
                (s[i] - s[spec.n - i]).abs() <= 1e-14,
                "evenness broken at {i}"
            );
        }
    }

    #[test]
    fn cusp_rejects_integer_exponent_and_low_resolution() {
        let spec = GridSpec::default_box();
        assert!(gen_power_cusp(1.0, spec).is_err());
        let tiny = GridSpec::new(256, -4.0, 4.0).unwrap();
        assert!(matches!(
            gen_power_cusp(0.5, tiny),
            Err(Error::Resolution { .. })
        ));
    }

    #[test]
    fn weierstrass_value_at_origin_is_geometric_sum() {
        let spec = GridSpec::default_box();
        let rep = gen_weierstrass(0.5, 4.0, None, spec).unwrap();
        let v = rep.grid().unwrap().value_near(0.0).unwrap();
        let expect = (1.0 - 0.5f64.powi(weierstrass_terms(0.5) as i32)) / (1.0 - 0.5);
        assert!((v - expect).abs() < 1e-12);
    }

    #[test]
    fn weierstrass_rejects_boundary_product() {
        let spec = GridSpec::default_box();
        assert!(gen_weierstrass(0.5, 2.0, None, spec).is_err());
    }

    #[test]
    fn weierstrass_partial_sums_converge() {
        let spec = GridSpec::new(1 << 12, -4.0, 4.0).unwrap();
        let t = weierstrass_terms(0.5);
        let a = gen_weierstrass(0.5, 4.0, Some(t), spec).unwrap();
        let b = gen_weierstrass(0.5, 4.0, Some(2 * t), spec).unwrap();
        let bound = 0.5f64.powi(t as i32) / 0.5;
        let max_diff = a
            .grid()
            .unwrap()
            .samples()
            .iter()
            .zip(b.grid().unwrap().samples())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max);
        // the bound is attained (up to rounding) at x = 0 where every term
        // contributes cos(0) = 1
        assert!(
            max_diff <= bound * (1.0 + 1e-9) + 1e-15,
            "{max_diff} vs {bound}"
        );
    }

    #[test]
    fn heaviside_and_bump_and_constant_values() {
        let spec = GridSpec::default_box();
        let h = gen_heaviside(spec).unwrap();
        assert_eq!(h.grid().unwrap().value_near(0.5).unwrap(), 1.0);
        let b = gen_bump(spec).unwrap();
        assert!((b.grid().unwrap().value_near(0.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        let c = gen_constant(1.0, spec).unwrap();
        for x in [-1.5, -0.3, 0.0, 0.9, 1.5] {
            assert_eq!(c.grid().unwrap().value_near(x).unwrap(), 1.0);
        }
    }

    #[test]
    fn generators_record_positive_support_margin() {
        let spec = GridSpec::default_box();
        for rep in [
            gen_power_cusp(0.5, spec).unwrap(),
            gen_weierstrass(0.5, 4.0, None, spec).unwrap(),
            gen_heaviside(spec).unwrap(),
            gen_bump(spec).unwrap(),
            gen_constant(2.0, spec).unwrap(),
        ] {
            assert!(rep.grid().unwrap().margin() >= 1.0 - 1e-9, "{}", rep.label());
        }
    }

    #[test]
    fn delta_is_single_atom() {
        let spec = GridSpec::default_box();
        let d = gen_delta(0, 0.0, spec).unwrap();
        assert!(d.grid().is_none());
        assert_eq!(d.atoms().len(), 1);
        assert_eq!(d.atoms()[0].weight, 1.0);
        assert!(gen_delta(9, 0.0, spec).is_err());
        assert!(gen_delta(0, 4.0, spec).is_err());
    }

    #[test]
    fn store_load_round_trip_bin_and_csv() {
        let dir = tempfile::tempdir().unwrap();
        let spec = GridSpec::new(1 << 10, -4.0, 4.0).unwrap();
        let rep = gen_bump(spec).unwrap();
        for format in [SampleFormat::Bin, SampleFormat::Csv] {
            let path = dir.path().join(format!("sig_{format:?}.sig"));
            store_signal(&rep, &path, format).unwrap();
            let back = load_signal(&path).unwrap();
            assert_eq!(back.label(), "bump");
            assert_eq!(back.spec(), spec);
            assert_eq!(back.grid().unwrap().samples(), rep.grid().unwrap().samples());
        }
    }

    #[test]
    fn load_reports_malformed_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.sig");
        fs::write(&path, "not json\n").unwrap();
        match load_signal(&path) {
            Err(Error::Format { location, .. }) => assert!(location.ends_with(":1")),
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn load_defaults_missing_atoms_to_empty() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("noatoms.sig");
        let spec = GridSpec::new(1 << 10, -4.0, 4.0).unwrap();
        let rep = gen_bump(spec).unwrap();
        store_signal(&rep, &path, SampleFormat::Csv).unwrap();
        // strip the atoms field from the header line
        let text = fs::read_to_string(&path).unwrap();
        let (first, rest) = text.split_once('\n').unwrap();
        let mut v: serde_json::Value = serde_json::from_str(first).unwrap();
        v.as_object_mut().unwrap().remove("atoms");
        fs::write(&path, format!("{v}\n{rest}")).unwrap();
        let back = load_signal(&path).unwrap();
        assert!(back.atoms().is_empty());
    }

    #[test]
    fn atomic_store_has_no_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("delta.sig");
        let rep = gen_delta(1, 0.25, GridSpec::default_box()).unwrap();
        store_signal(&rep, &path, SampleFormat::Bin).unwrap();
        assert!(!sidecar_path(&path).exists());
        let back = load_signal(&path).unwrap();
        assert_eq!(back.atoms()[0].order, 1);
        assert_eq!(back.atoms()[0].location, 0.25);
    }
}
