//! Channel and state representation, validation, Haar sampling and direct
//! fidelity evaluation.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};

/// Entrywise tolerance on `sum_j K_j^dag K_j - I` for trace preservation.
pub const TRACE_PRESERVATION_TOL: f64 = 1e-10;
/// Tolerance for Hermiticity and state-normalization checks.
pub const EXACT_TOL: f64 = 1e-12;

/// A validated set of `m` complex `d x d` Kraus operators defining a
/// trace-preserving map.
#[derive(Debug, Clone)]
pub struct ChannelSpec {
    dim: usize,
    kraus: Vec<CMatrix>,
}

impl ChannelSpec {
    /// Validates a Kraus set: non-empty, square matrices of equal size, and
    /// `sum_j K_j^dag K_j = I` within [`TRACE_PRESERVATION_TOL`].
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::InvalidDimension("empty Kraus list".into()));
        }
        let dim = kraus[0].nrows();
        if dim == 0 {
            return Err(Error::InvalidDimension("zero-dimensional Kraus operator".into()));
        }
        for (j, k) in kraus.iter().enumerate() {
            if k.nrows() != dim || k.ncols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator {} is {}x{}, expected {}x{}",
                    j,
                    k.nrows(),
                    k.ncols(),
                    dim,
                    dim
                )));
            }
        }
        let mut sum = CMatrix::zeros(dim, dim);
        for k in &kraus {
            sum += k.adjoint() * k;
        }
        let max_dev = linalg::max_abs_diff(&sum, &linalg::identity(dim));
        if max_dev > TRACE_PRESERVATION_TOL {
            return Err(Error::NotTracePreserving {
                max_dev,
                tol: TRACE_PRESERVATION_TOL,
            });
        }
        Ok(ChannelSpec { dim, kraus })
    }

    /// Single-Kraus channel `rho -> U rho U^dag` from a unitary matrix.
    pub fn from_unitary(u: CMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn num_kraus(&self) -> usize {
        self.kraus.len()
    }

    /// Hermitian/anti-Hermitian split of every Kraus operator.
    pub fn hermitian_pairs(&self) -> Vec<HermitianPair> {
        self.kraus.iter().map(hermitian_split).collect()
    }

    /// The `2m` Hermitian operators `(H_1..H_m, A_1..A_m)` obtained by
    /// splitting each Kraus operator. Fidelity statistics of the channel
    /// depend on the Kraus set only through this collection.
    pub fn split_collection(&self) -> Vec<CMatrix> {
        let pairs = self.hermitian_pairs();
        let mut ops = Vec::with_capacity(2 * pairs.len());
        for p in &pairs {
            ops.push(p.h.clone());
        }
        for p in &pairs {
            ops.push(p.a.clone());
        }
        ops
    }

    /// Operation fidelity `F = sum_j |<psi|K_j|psi>|^2`, clamped to [0, 1]
    /// against rounding.
    pub fn fidelity(&self, state: &PureState) -> Result<f64> {
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "state dimension {} does not match channel dimension {}",
                state.dim(),
                self.dim
            )));
        }
        let psi = state.amplitudes();
        let mut f = 0.0;
        for k in &self.kraus {
            let amp = psi.dotc(&(k * psi));
            f += amp.norm_sqr();
        }
        Ok(f.clamp(0.0, 1.0))
    }

    /// Fidelity through the Hermitian-split form
    /// `sum_j <psi|H_j|psi>^2 + <psi|A_j|psi>^2`.
    pub fn fidelity_via_split(&self, state: &PureState) -> Result<f64> {
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "state dimension {} does not match channel dimension {}",
                state.dim(),
                self.dim
            )));
        }
        let psi = state.amplitudes();
        let mut f = 0.0;
        for p in self.hermitian_pairs() {
            f += linalg::expectation(&p.h, psi).powi(2);
            f += linalg::expectation(&p.a, psi).powi(2);
        }
        Ok(f.clamp(0.0, 1.0))
    }
}

/// Validates a list of Kraus matrices into a [`ChannelSpec`].
pub fn validate_channel(kraus: Vec<CMatrix>) -> Result<ChannelSpec> {
    ChannelSpec::new(kraus)
}

/// Hermitian and anti-Hermitian parts of an operator `K = h + i*a`.
#[derive(Debug, Clone)]
pub struct HermitianPair {
    pub h: CMatrix,
    pub a: CMatrix,
}

impl HermitianPair {
    /// Reassembles the source operator `h + i*a`.
    pub fn reconstruct(&self) -> CMatrix {
        &self.h + self.a.map(|z| z * Complex64::new(0.0, 1.0))
    }
}

/// Splits a square matrix into `h = (K + K^dag)/2` and `a = (K - K^dag)/(2i)`.
pub fn hermitian_split(k: &CMatrix) -> HermitianPair {
    let kd = k.adjoint();
    let h = (k + &kd).scale(0.5);
    let a = (k - &kd).map(|z| z * Complex64::new(0.0, -0.5));
    HermitianPair { h, a }
}

/// Unit vector in `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
}

impl PureState {
    /// Wraps an amplitude vector, checking unit norm within [`EXACT_TOL`].
    pub fn new(amplitudes: CVector) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidDimension("empty state vector".into()));
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > EXACT_TOL {
            return Err(Error::InvalidParameter(format!(
                "state norm^2 = {norm_sq} is not 1 within {EXACT_TOL:.0e}"
            )));
        }
        Ok(PureState { amplitudes })
    }

    /// Normalizes an arbitrary non-zero vector into a state.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidParameter("cannot normalize the zero vector".into()));
        }
        Ok(PureState {
            amplitudes: amplitudes.map(|z| z / norm),
        })
    }

    /// Computational basis state `|k>`.
    pub fn basis(d: usize, k: usize) -> Self {
        PureState {
            amplitudes: linalg::basis_vector(d, k),
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// Occupation probability `|psi_i|^2`.
    pub fn probability(&self, i: usize) -> f64 {
        self.amplitudes[i].norm_sqr()
    }
}

/// Haar-random pure state: `2d` independent standard normals form `d`
/// complex amplitudes which are then normalized.
pub fn haar_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<PureState> {
    if d == 0 {
        return Err(Error::InvalidDimension("state dimension must be positive".into()));
    }
    loop {
        let v = CVector::from_fn(d, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        });
        if let Ok(state) = PureState::normalized(v) {
            return Ok(state);
        }
    }
}

/// Haar-random unitary via QR of a complex Ginibre matrix with the phase
/// convention that makes the factorization unique.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..d {
            q[(i, j)] /= phase;
        }
    }
    q
}

/// Random orthogonal matrix via QR of a real Gaussian matrix.
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

/// Random channel with `m` Kraus operators on dimension `d`, drawn from the
/// Stinespring construction: the Kraus operators are the `d x d` blocks of
/// the first `d` columns of a Haar unitary of size `m*d`.
pub fn random_channel<R: Rng + ?Sized>(d: usize, m: usize, rng: &mut R) -> ChannelSpec {
    let u = haar_unitary(m * d, rng);
    let kraus: Vec<CMatrix> = (0..m)
        .map(|j| CMatrix::from_fn(d, d, |r, c| u[(j * d + r, c)]))
        .collect();
    ChannelSpec::new(kraus).expect("Stinespring blocks form a trace-preserving channel")
}

/// Derives an independent stream seed from a base seed and a stream index
/// (splitmix64 over the combined word).
pub fn derive_stream_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seeded sample set of fidelity values with histogram/CDF accessors.
///
/// Samples are kept raw and sorted so Kolmogorov-Smirnov statistics are
/// exact rather than bin-limited.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmpiricalDistribution {
    samples: Vec<f64>,
    seed: u64,
    count: usize,
    workers: usize,
}

impl EmpiricalDistribution {
    /// Wraps raw fidelity samples; sorts them and checks the [0, 1] range.
    pub fn new(mut samples: Vec<f64>, seed: u64, workers: usize) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySample);
        }
        if samples.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
            return Err(Error::InvalidParameter("fidelity sample outside [0, 1]".into()));
        }
        samples.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        let count = samples.len();
        Ok(EmpiricalDistribution {
            samples,
            seed,
            count,
            workers,
        })
    }

    /// Sorted samples, ascending.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn min(&self) -> f64 {
        self.samples[0]
    }

    pub fn max(&self) -> f64 {
        self.samples[self.count - 1]
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.count as f64
    }

    /// Population standard deviation.
    pub fn std(&self) -> f64 {
        let mean = self.mean();
        let var = self.samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / self.count as f64;
        var.sqrt()
    }

    /// Empirical CDF, right-continuous: fraction of samples `<= x`.
    pub fn cdf(&self, x: f64) -> f64 {
        let idx = self.samples.partition_point(|&s| s <= x);
        idx as f64 / self.count as f64
    }

    /// Histogram over `bins` equal-width bins spanning `[lo, hi]`, returned
    /// as `(edges, densities)` with densities normalized to unit integral.
    pub fn histogram(&self, bins: usize, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
        let bins = bins.max(1);
        let width = (hi - lo) / bins as f64;
        let edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * width).collect();
        let mut counts = vec![0usize; bins];
        for &s in &self.samples {
            if s < lo || s > hi {
                continue;
            }
            let mut b = ((s - lo) / width) as usize;
            if b >= bins {
                b = bins - 1;
            }
            counts[b] += 1;
        }
        let norm = self.count as f64 * width;
        let densities = counts.iter().map(|&c| c as f64 / norm).collect();
        (edges, densities)
    }
}

/// Draws `n` i.i.d. operation fidelities of Haar-random states.
///
/// Work is split into `workers` contiguous chunks; chunk `i` consumes the
/// stream seeded by `derive_stream_seed(seed, i)`, so results are
/// reproducible for a fixed worker count regardless of scheduling.
pub fn sample_fidelities_with_workers(
    channel: &ChannelSpec,
    n: usize,
    seed: u64,
    workers: usize,
) -> Result<EmpiricalDistribution> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample count must be at least 1".into()));
    }
    let workers = workers.max(1);
    let base = n / workers;
    let rem = n % workers;
    let chunk_sizes: Vec<usize> = (0..workers)
        .map(|i| base + usize::from(i < rem))
        .collect();
    let chunks: Vec<Result<Vec<f64>>> = chunk_sizes
        .par_iter()
        .enumerate()
        .map(|(i, &size)| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_stream_seed(seed, i as u64));
            let mut out = Vec::with_capacity(size);
            for _ in 0..size {
                let state = haar_state(channel.dim(), &mut rng)?;
                out.push(channel.fidelity(&state)?);
            }
            Ok(out)
        })
        .collect();
    let mut samples = Vec::with_capacity(n);
    for chunk in chunks {
        samples.extend(chunk?);
    }
    EmpiricalDistribution::new(samples, seed, workers)
}

/// Single-worker variant of [`sample_fidelities_with_workers`].
pub fn sample_fidelities(channel: &ChannelSpec, n: usize, seed: u64) -> Result<EmpiricalDistribution> {
    sample_fidelities_with_workers(channel, n, seed, 1)
}

// ---------------------------------------------------------------------------
// Channel-spec JSON wire format:
// { "dim": d, "kraus": [ [[ [re,im], ... ] per row ] per matrix ] }
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct ChannelJson {
    dim: usize,
    kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

impl ChannelSpec {
    /// Serializes to the channel-spec JSON wire format.
    pub fn to_json(&self) -> String {
        let kraus = self
            .kraus
            .iter()
            .map(|k| {
                (0..self.dim)
                    .map(|r| (0..self.dim).map(|c| [k[(r, c)].re, k[(r, c)].im]).collect())
                    .collect()
            })
            .collect();
        serde_json::to_string_pretty(&ChannelJson { dim: self.dim, kraus })
            .expect("channel JSON serialization cannot fail")
    }

    /// Parses the channel-spec JSON wire format and validates the channel.
    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: ChannelJson = serde_json::from_str(text)
            .map_err(|e| Error::InvalidParameter(format!("channel JSON: {e}")))?;
        let mut kraus = Vec::with_capacity(parsed.kraus.len());
        for (j, rows) in parsed.kraus.iter().enumerate() {
            if rows.len() != parsed.dim || rows.iter().any(|r| r.len() != parsed.dim) {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator {} does not match declared dim {}",
                    j, parsed.dim
                )));
            }
            kraus.push(CMatrix::from_fn(parsed.dim, parsed.dim, |r, c| {
                Complex64::new(rows[r][c][0], rows[r][c][1])
            }));
        }
        ChannelSpec::new(kraus)
    }
}
