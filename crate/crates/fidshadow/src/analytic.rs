//! Closed-form fidelity densities: qubit unitary channels, mixed-unitary
//! qubit channels, Pauli channels, and qutrit unitary channels with cusp
//! analysis.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::channel::ChannelSpec;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::quadrature;

/// Absolute snap distance for recognizing a declared singular point.
const SINGULARITY_SNAP: f64 = 1e-12;
/// Tolerance for eigenvalue coincidence / degeneracy decisions.
const DEGENERACY_TOL: f64 = 1e-12;

/// Density value at a point; singular points carry an explicit marker
/// instead of an overflowing float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Density {
    Finite(f64),
    Infinite,
}

impl Density {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Density::Infinite)
    }

    /// Plain float view; infinities map to `f64::INFINITY`.
    pub fn value(&self) -> f64 {
        match self {
            Density::Finite(v) => *v,
            Density::Infinite => f64::INFINITY,
        }
    }
}

enum PdfKind {
    Closed,
    Histogram { edges: Vec<f64>, densities: Vec<f64> },
}

/// Piecewise-smooth probability density on a sub-interval of [0, 1] with
/// declared support, cusp points and singular points.
pub struct AnalyticPdf {
    support: (f64, f64),
    cusps: Vec<f64>,
    singularities: Vec<f64>,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    kind: PdfKind,
}

impl std::fmt::Debug for AnalyticPdf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AnalyticPdf")
            .field("support", &self.support)
            .field("cusps", &self.cusps)
            .field("singularities", &self.singularities)
            .finish()
    }
}

impl AnalyticPdf {
    fn closed(
        support: (f64, f64),
        cusps: Vec<f64>,
        singularities: Vec<f64>,
        eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    ) -> Self {
        AnalyticPdf {
            support,
            cusps,
            singularities,
            eval,
            kind: PdfKind::Closed,
        }
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn cusps(&self) -> &[f64] {
        &self.cusps
    }

    pub fn singularities(&self) -> &[f64] {
        &self.singularities
    }

    /// Density at `f`: zero outside the support, an [`Density::Infinite`]
    /// marker at declared singular points.
    pub fn density(&self, f: f64) -> Density {
        if f < self.support.0 || f > self.support.1 {
            return Density::Finite(0.0);
        }
        if self.singularities.iter().any(|&s| (f - s).abs() <= SINGULARITY_SNAP) {
            return Density::Infinite;
        }
        let v = (self.eval)(f);
        if v.is_finite() {
            Density::Finite(v.max(0.0))
        } else {
            Density::Infinite
        }
    }

    /// Float shortcut for [`Self::density`].
    pub fn density_value(&self, f: f64) -> f64 {
        self.density(f).value()
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut pts = self.cusps.clone();
        pts.extend_from_slice(&self.singularities);
        if let PdfKind::Histogram { edges, .. } = &self.kind {
            pts.extend_from_slice(edges);
        }
        pts
    }

    fn is_singular_point(&self, x: f64) -> bool {
        self.singularities.iter().any(|&s| (x - s).abs() <= SINGULARITY_SNAP)
    }

    /// Integrates `weight(f) * density(f)` over a gap between consecutive
    /// critical points, switching to the square-root substitution whenever a
    /// gap endpoint is a declared singular point.
    fn integrate_gap<G: Fn(f64) -> f64 + Copy>(&self, a: f64, b: f64, weight: G, abs_tol: f64, rel_tol: f64) -> f64 {
        let eval = Arc::clone(&self.eval);
        let g = move |f: f64| weight(f) * eval(f);
        match (self.is_singular_point(a), self.is_singular_point(b)) {
            (false, false) => quadrature::integrate(g, a, b, abs_tol, rel_tol).value,
            (true, false) => quadrature::integrate_singular_left(g, a, b, abs_tol, rel_tol).value,
            (false, true) => quadrature::integrate_singular_right(g, a, b, abs_tol, rel_tol).value,
            (true, true) => {
                let mid = 0.5 * (a + b);
                let eval2 = Arc::clone(&self.eval);
                let g2 = move |f: f64| weight(f) * eval2(f);
                quadrature::integrate_singular_left(g, a, mid, abs_tol, rel_tol).value
                    + quadrature::integrate_singular_right(g2, mid, b, abs_tol, rel_tol).value
            }
        }
    }

    fn weighted_integral<G: Fn(f64) -> f64 + Copy>(&self, weight: G) -> f64 {
        match &self.kind {
            PdfKind::Histogram { edges, densities } => {
                // exact for the piecewise-constant density, with the weight
                // integrated by Simpson (exact through cubics)
                let mut acc = 0.0;
                for (i, dens) in densities.iter().enumerate() {
                    let (a, b) = (edges[i], edges[i + 1]);
                    let mid = 0.5 * (a + b);
                    acc += dens * (b - a) * (weight(a) + 4.0 * weight(mid) + weight(b)) / 6.0;
                }
                acc
            }
            PdfKind::Closed => {
                let (lo, hi) = self.support;
                let mut nodes = self.breakpoints();
                nodes.retain(|&x| x > lo && x < hi);
                nodes.push(lo);
                nodes.push(hi);
                nodes.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
                nodes.dedup();
                nodes
                    .windows(2)
                    .map(|w| self.integrate_gap(w[0], w[1], weight, 1e-10, 1e-9))
                    .sum()
            }
        }
    }

    /// Total mass; 1 within quadrature error for a proper density.
    pub fn integral(&self) -> f64 {
        self.weighted_integral(|_| 1.0)
    }

    pub fn mean(&self) -> f64 {
        self.weighted_integral(|f| f)
    }

    pub fn std(&self) -> f64 {
        let mean = self.weighted_integral(|f| f);
        let m2 = self.weighted_integral(|f| f * f);
        (m2 - mean * mean).max(0.0).sqrt()
    }

    /// Precomputed monotone CDF interpolant over a grid of `base_nodes`
    /// points refined geometrically toward singular points.
    pub fn cdf_interpolant(&self, base_nodes: usize) -> CdfInterpolant {
        let (lo, hi) = self.support;
        let span = (hi - lo).max(f64::MIN_POSITIVE);
        let base = base_nodes.max(16);
        let mut nodes: Vec<f64> = (0..=base)
            .map(|i| lo + span * i as f64 / base as f64)
            .collect();
        nodes.extend(self.breakpoints());
        for &s in &self.singularities {
            // geometric refinement toward the singular point; the mass below
            // span*1e-8 is negligible for integrable singularities and the
            // adjacent gaps are integrated with the square-root substitution
            for k in 1..=8 {
                let off = span * 10f64.powi(-k);
                nodes.push(s - off);
                nodes.push(s + off);
            }
        }
        nodes.retain(|&x| (lo..=hi).contains(&x));
        nodes.push(lo);
        nodes.push(hi);
        nodes.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        nodes.dedup();

        match &self.kind {
            PdfKind::Histogram { edges, densities } => {
                // exact piecewise-linear CDF at the bin edges
                let mut cum = Vec::with_capacity(edges.len());
                cum.push(0.0);
                let mut acc = 0.0;
                for (i, dens) in densities.iter().enumerate() {
                    acc += dens * (edges[i + 1] - edges[i]);
                    cum.push(acc);
                }
                CdfInterpolant {
                    nodes: edges.clone(),
                    cum,
                    total: acc,
                }
            }
            PdfKind::Closed => {
                let mut cum = Vec::with_capacity(nodes.len());
                cum.push(0.0);
                let mut acc = 0.0;
                for w in nodes.windows(2) {
                    acc += self.integrate_gap(w[0], w[1], |_| 1.0, 1e-13, 1e-8).max(0.0);
                    cum.push(acc);
                }
                CdfInterpolant {
                    nodes,
                    cum,
                    total: acc,
                }
            }
        }
    }

    /// Histogram-backed density from sorted samples.
    ///
    /// Bin count defaults to the Freedman-Diaconis rule; `pins` are inserted
    /// as extra edges so user-supplied critical values align with bin
    /// boundaries. Samples are clamped into the declared support.
    pub fn from_histogram(samples: &[f64], support: (f64, f64), bins: Option<usize>, pins: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySample);
        }
        let (lo, hi) = support;
        if !(hi > lo) {
            return Err(Error::InvalidParameter(format!("empty support [{lo}, {hi}]")));
        }
        let n = samples.len();
        let nbins = match bins {
            Some(b) => b.max(2),
            None => {
                let q25 = samples[n / 4];
                let q75 = samples[(3 * n) / 4];
                let iqr = (q75 - q25).max(0.0);
                if iqr == 0.0 {
                    64
                } else {
                    let width = 2.0 * iqr / (n as f64).powf(1.0 / 3.0);
                    (((hi - lo) / width).ceil() as usize).clamp(16, 2048)
                }
            }
        };
        let mut edges: Vec<f64> = (0..=nbins).map(|i| lo + (hi - lo) * i as f64 / nbins as f64).collect();
        edges.extend(pins.iter().copied().filter(|&p| p > lo && p < hi));
        edges.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        edges.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        let nb = edges.len() - 1;
        let mut counts = vec![0usize; nb];
        for &s in samples {
            let x = s.clamp(lo, hi);
            let mut idx = edges.partition_point(|&e| e <= x);
            idx = idx.saturating_sub(1).min(nb - 1);
            counts[idx] += 1;
        }
        let densities: Vec<f64> = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| c as f64 / (n as f64 * (edges[i + 1] - edges[i])))
            .collect();
        let eval_edges = edges.clone();
        let eval_dens = densities.clone();
        let eval = Arc::new(move |f: f64| -> f64 {
            if f < eval_edges[0] || f > eval_edges[eval_edges.len() - 1] {
                return 0.0;
            }
            let idx = eval_edges
                .partition_point(|&e| e <= f)
                .saturating_sub(1)
                .min(eval_dens.len() - 1);
            eval_dens[idx]
        });
        Ok(AnalyticPdf {
            support,
            cusps: pins.to_vec(),
            singularities: Vec::new(),
            eval,
            kind: PdfKind::Histogram { edges, densities },
        })
    }
}

/// Monotone piecewise-linear CDF interpolant.
#[derive(Debug, Clone)]
pub struct CdfInterpolant {
    nodes: Vec<f64>,
    cum: Vec<f64>,
    total: f64,
}

impl CdfInterpolant {
    /// Total probability mass accumulated by the underlying quadrature.
    pub fn total_mass(&self) -> f64 {
        self.total
    }

    /// Normalized CDF value in [0, 1].
    pub fn eval(&self, f: f64) -> f64 {
        if self.total <= 0.0 {
            return 0.0;
        }
        let n = self.nodes.len();
        if f <= self.nodes[0] {
            return 0.0;
        }
        if f >= self.nodes[n - 1] {
            return 1.0;
        }
        let idx = self.nodes.partition_point(|&x| x <= f) - 1;
        let (a, b) = (self.nodes[idx], self.nodes[idx + 1]);
        let t = if b > a { (f - a) / (b - a) } else { 0.0 };
        let raw = self.cum[idx] + t * (self.cum[idx + 1] - self.cum[idx]);
        (raw / self.total).clamp(0.0, 1.0)
    }
}

/// Real part of the principal complex arccosine for a real argument.
fn re_acos(x: f64) -> f64 {
    if x >= 1.0 {
        0.0
    } else if x <= -1.0 {
        PI
    } else {
        x.acos()
    }
}

/// Fidelity density of the qubit unitary `diag(1, e^{i alpha})`:
/// `[(1 - cos a)(2F - 1 - cos a)]^{-1/2}` on `[(1 + cos a)/2, 1]`, with an
/// integrable singularity at the left endpoint.
pub fn pdf_qubit_unitary(alpha: f64) -> Result<AnalyticPdf> {
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter("alpha must be finite".into()));
    }
    let a = alpha.rem_euclid(2.0 * PI);
    if a.abs() < DEGENERACY_TOL || (2.0 * PI - a).abs() < DEGENERACY_TOL {
        return Err(Error::DegenerateChannel(
            "alpha = 0: identity channel, fidelity is a point mass at 1".into(),
        ));
    }
    let c = a.cos();
    let lo = (1.0 + c) / 2.0;
    let eval = Arc::new(move |f: f64| -> f64 {
        let arg = (1.0 - c) * (2.0 * f - 1.0 - c);
        if arg <= 0.0 {
            f64::INFINITY
        } else {
            1.0 / arg.sqrt()
        }
    });
    Ok(AnalyticPdf::closed((lo, 1.0), vec![], vec![lo], eval))
}

/// Convex mixture of qubit rotations: probabilities, unit rotation axes and
/// rotation angles, one entry per unitary term.
#[derive(Debug, Clone)]
pub struct MixedUnitaryQubitSpec {
    probs: Vec<f64>,
    axes: Vec<[f64; 3]>,
    angles: Vec<f64>,
}

impl MixedUnitaryQubitSpec {
    pub fn new(probs: Vec<f64>, axes: Vec<[f64; 3]>, angles: Vec<f64>) -> Result<Self> {
        if probs.is_empty() || probs.len() != axes.len() || probs.len() != angles.len() {
            return Err(Error::DimensionMismatch(
                "probs, axes and angles must have equal non-zero lengths".into(),
            ));
        }
        if probs.iter().any(|&p| p < -DEGENERACY_TOL) {
            return Err(Error::InvalidParameter("negative probability".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        for n in &axes {
            let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParameter(format!("axis norm {norm} is not 1")));
            }
        }
        let angles = angles.iter().map(|t| t.rem_euclid(2.0 * PI)).collect();
        Ok(MixedUnitaryQubitSpec { probs, axes, angles })
    }

    /// Single rotation by `angle` around `axis`.
    pub fn single_unitary(axis: [f64; 3], angle: f64) -> Result<Self> {
        Self::new(vec![1.0], vec![axis], vec![angle])
    }

    /// Pauli channel `p0 rho + sum_j p_j sigma_j rho sigma_j` as identity
    /// weight plus pi-rotations about the coordinate axes.
    pub fn pauli(p: [f64; 4]) -> Result<Self> {
        Self::new(
            vec![p[0], p[1], p[2], p[3]],
            vec![[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            vec![0.0, PI, PI, PI],
        )
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn axes(&self) -> &[[f64; 3]] {
        &self.axes
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// The rotation matrices `cos(t/2) I + i sin(t/2) n.sigma`.
    pub fn unitaries(&self) -> Vec<CMatrix> {
        self.axes
            .iter()
            .zip(&self.angles)
            .map(|(n, &t)| {
                let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
                let i = Complex64::new(0.0, 1.0);
                // n.sigma = [[nz, nx - i ny], [nx + i ny, -nz]]
                let nsig = linalg::cmatrix_from_rows(&[
                    vec![Complex64::new(n[2], 0.0), Complex64::new(n[0], -n[1])],
                    vec![Complex64::new(n[0], n[1]), Complex64::new(-n[2], 0.0)],
                ]);
                linalg::identity(2).scale(c) + nsig.map(|z| z * i * s)
            })
            .collect()
    }

    /// Kraus form `{sqrt(p_j) U_j}`, dropping zero-probability terms.
    pub fn to_channel(&self) -> Result<ChannelSpec> {
        let kraus: Vec<CMatrix> = self
            .unitaries()
            .into_iter()
            .zip(&self.probs)
            .filter(|(_, &p)| p > 0.0)
            .map(|(u, &p)| u.scale(p.sqrt()))
            .collect();
        ChannelSpec::new(kraus)
    }

    /// Recognizes a mixed-unitary qubit channel from raw Kraus operators:
    /// every `K_j^dag K_j` must be proportional to the identity. Returns the
    /// recovered mixture, including zero-weight terms dropped.
    pub fn from_channel(channel: &ChannelSpec) -> Result<Self> {
        if channel.dim() != 2 {
            return Err(Error::InvalidDimension(format!(
                "mixed-unitary decomposition targets qubits, got d = {}",
                channel.dim()
            )));
        }
        let mut probs = Vec::new();
        let mut axes = Vec::new();
        let mut angles = Vec::new();
        for k in channel.kraus() {
            let ktk = k.adjoint() * k;
            let p = 0.5 * (ktk[(0, 0)].re + ktk[(1, 1)].re);
            if linalg::max_abs_diff(&ktk, &linalg::identity(2).scale(p)) > 1e-10 {
                return Err(Error::InvalidParameter(
                    "Kraus operator is not proportional to a unitary".into(),
                ));
            }
            if p <= 1e-14 {
                continue;
            }
            let u = k.scale(1.0 / p.sqrt());
            // factor out det^{1/2} to land in SU(2): U = e^{ig} (a I + i b.sigma)
            let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
            let gamma = det.arg() / 2.0;
            let v = u.map(|z| z * Complex64::from_polar(1.0, -gamma));
            // V = a I + i b.sigma has V01 = b_y + i b_x, V10 = -b_y + i b_x
            let a = 0.5 * (v[(0, 0)].re + v[(1, 1)].re);
            let bx = 0.5 * (v[(0, 1)].im + v[(1, 0)].im);
            let by = 0.5 * (v[(0, 1)].re - v[(1, 0)].re);
            let bz = 0.5 * (v[(0, 0)].im - v[(1, 1)].im);
            let bnorm = (bx * bx + by * by + bz * bz).sqrt();
            let theta = 2.0 * bnorm.atan2(a);
            let axis = if bnorm > 1e-12 {
                [bx / bnorm, by / bnorm, bz / bnorm]
            } else {
                [0.0, 0.0, 1.0]
            };
            probs.push(p);
            axes.push(axis);
            angles.push(theta);
        }
        // re-normalize against accumulated rounding
        let total: f64 = probs.iter().sum();
        for p in &mut probs {
            *p /= total;
        }
        Self::new(probs, axes, angles)
    }
}

/// Real symmetric 3x3 matrix whose quadratic form on the Bloch sphere is the
/// operation fidelity, with its sorted eigenvalues.
#[derive(Debug, Clone)]
pub struct SMatrix {
    s: Matrix3<f64>,
    eigenvalues: [f64; 3],
}

impl SMatrix {
    pub fn new(s: Matrix3<f64>) -> Result<Self> {
        if (s - s.transpose()).amax() > 1e-12 {
            return Err(Error::InvalidParameter("S matrix is not symmetric".into()));
        }
        let mut vals: Vec<f64> = s.symmetric_eigen().eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if vals[0] < -1e-10 || vals[2] > 1.0 + 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "S eigenvalues [{}, {}] outside [0, 1]",
                vals[0], vals[2]
            )));
        }
        Ok(SMatrix {
            s,
            eigenvalues: [
                vals[0].clamp(0.0, 1.0),
                vals[1].clamp(0.0, 1.0),
                vals[2].clamp(0.0, 1.0),
            ],
        })
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.s
    }

    /// Eigenvalues sorted ascending.
    pub fn eigenvalues(&self) -> [f64; 3] {
        self.eigenvalues
    }

    /// Fidelity of the pure state with Bloch vector `b`: `b^T S b`.
    pub fn fidelity_of_bloch(&self, b: &Vector3<f64>) -> f64 {
        (b.transpose() * self.s * b)[(0, 0)]
    }
}

/// `S_kl = sum_j p_j (cos^2(t_j/2) delta_kl + sin^2(t_j/2) n_k n_l)`.
pub fn build_s_matrix(spec: &MixedUnitaryQubitSpec) -> SMatrix {
    let mut s = Matrix3::zeros();
    for ((&p, n), &t) in spec.probs().iter().zip(spec.axes()).zip(spec.angles()) {
        let c2 = (t / 2.0).cos().powi(2);
        let s2 = (t / 2.0).sin().powi(2);
        for k in 0..3 {
            for l in 0..3 {
                s[(k, l)] += p * (if k == l { c2 } else { 0.0 } + s2 * n[k] * n[l]);
            }
        }
    }
    SMatrix::new(s).expect("constructed S matrix is symmetric with eigenvalues in [0,1]")
}

/// Extreme fidelities of a mixed-unitary qubit channel: the extreme
/// eigenvalues of S.
pub fn extremes_mixed_unitary(s: &SMatrix) -> (f64, f64) {
    let [l1, _, l3] = s.eigenvalues();
    (l1, l3)
}

/// Mean fidelity `sum_k p_k (2 cos^2(t_k/2) + 1) / 3`.
pub fn mean_mixed_unitary(spec: &MixedUnitaryQubitSpec) -> f64 {
    spec.probs()
        .iter()
        .zip(spec.angles())
        .map(|(&p, &t)| p * (2.0 * (t / 2.0).cos().powi(2) + 1.0) / 3.0)
        .sum()
}

/// Angular-quadrature density for eigenvalues `l1 <= l2 <= l3` of S.
fn pdf_from_lambdas(l1: f64, l2: f64, l3: f64) -> Result<AnalyticPdf> {
    if l3 - l1 < DEGENERACY_TOL {
        return Err(Error::DegenerateChannel(
            "S has a single eigenvalue: fidelity is a point mass".into(),
        ));
    }
    let eval = Arc::new(move |f: f64| -> f64 {
        if (f - l2).abs() <= SINGULARITY_SNAP {
            return f64::INFINITY;
        }
        if f > l2 {
            // quarter-period symmetry: (1/4pi) \int_0^{2pi} = (1/pi) \int_0^{pi/2}
            let integrand = move |phi: f64| {
                let g = l1 * phi.cos().powi(2) + l2 * phi.sin().powi(2);
                let arg = (f - g) * (l3 - g);
                if arg <= 0.0 {
                    0.0
                } else {
                    1.0 / arg.sqrt()
                }
            };
            quadrature::integrate(integrand, 0.0, PI / 2.0, 1e-12, 1e-8).value / PI
        } else {
            // lower branch: the same formula with l1 and l3 interchanged
            let integrand = move |phi: f64| {
                let g = l3 * phi.cos().powi(2) + l2 * phi.sin().powi(2);
                let arg = (g - f) * (g - l1);
                if arg <= 0.0 {
                    0.0
                } else {
                    1.0 / arg.sqrt()
                }
            };
            quadrature::integrate(integrand, 0.0, PI / 2.0, 1e-12, 1e-8).value / PI
        }
    });
    Ok(AnalyticPdf::closed((l1, l3), vec![], vec![l2], eval))
}

/// Fidelity density of a mixed-unitary qubit channel by angular quadrature,
/// with the interior singularity at the middle eigenvalue of S declared.
pub fn pdf_mixed_unitary(spec: &MixedUnitaryQubitSpec) -> Result<AnalyticPdf> {
    let [l1, l2, l3] = build_s_matrix(spec).eigenvalues();
    pdf_from_lambdas(l1, l2, l3)
}

/// Fidelity density of a Pauli channel. Uses the closed form
/// `1/(2 sqrt((F - l_eq)(l_other - l_eq)))` whenever two eigenvalues of S
/// coincide; otherwise falls back to the angular quadrature.
pub fn pdf_pauli(p0: f64, p1: f64, p2: f64, p3: f64) -> Result<AnalyticPdf> {
    let spec = MixedUnitaryQubitSpec::pauli([p0, p1, p2, p3])?;
    let [l1, l2, l3] = build_s_matrix(&spec).eigenvalues();
    if l3 - l1 < DEGENERACY_TOL {
        return Err(Error::DegenerateChannel(
            "all S eigenvalues equal: fidelity is a point mass".into(),
        ));
    }
    if l2 - l1 < DEGENERACY_TOL {
        let span = l3 - l1;
        let eval = Arc::new(move |f: f64| -> f64 {
            let arg = (f - l1) * span;
            if arg <= 0.0 {
                f64::INFINITY
            } else {
                0.5 / arg.sqrt()
            }
        });
        return Ok(AnalyticPdf::closed((l1, l3), vec![], vec![l1], eval));
    }
    if l3 - l2 < DEGENERACY_TOL {
        let span = l3 - l1;
        let eval = Arc::new(move |f: f64| -> f64 {
            let arg = (l3 - f) * span;
            if arg <= 0.0 {
                f64::INFINITY
            } else {
                0.5 / arg.sqrt()
            }
        });
        return Ok(AnalyticPdf::closed((l1, l3), vec![], vec![l3], eval));
    }
    pdf_from_lambdas(l1, l2, l3)
}

/// Which chord of the spectral triangle produced a critical fidelity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CuspOrigin {
    /// `cos^2(alpha/2)`: chord between eigenvalues 1 and `e^{i alpha}`.
    HalfAlpha,
    /// `cos^2(beta/2)`: chord between eigenvalues 1 and `e^{i beta}`.
    HalfBeta,
    /// `cos^2((beta - alpha)/2)`: chord between `e^{i alpha}` and `e^{i beta}`.
    HalfBetaMinusAlpha,
}

/// A critical fidelity together with the chord it comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CuspPoint {
    pub value: f64,
    pub origin: CuspOrigin,
}

/// The three critical fidelities of the qutrit unitary
/// `diag(1, e^{i alpha}, e^{i beta})`, sorted ascending. Each is the squared
/// radius at which the circle `|z| = r` becomes tangent to a side of the
/// spectral triangle.
pub fn cusp_points(alpha: f64, beta: f64) -> Result<[CuspPoint; 3]> {
    if !(0.0..2.0 * PI).contains(&alpha) || !(0.0..2.0 * PI).contains(&beta) || alpha > beta {
        return Err(Error::InvalidParameter(format!(
            "require 0 <= alpha <= beta < 2*pi, got alpha={alpha}, beta={beta}"
        )));
    }
    if alpha < DEGENERACY_TOL || beta - alpha < DEGENERACY_TOL || 2.0 * PI - beta < DEGENERACY_TOL {
        return Err(Error::DegenerateSpectrum(format!(
            "eigenphases (0, {alpha}, {beta}) are not distinct"
        )));
    }
    let mut pts = [
        CuspPoint {
            value: (alpha / 2.0).cos().powi(2),
            origin: CuspOrigin::HalfAlpha,
        },
        CuspPoint {
            value: (beta / 2.0).cos().powi(2),
            origin: CuspOrigin::HalfBeta,
        },
        CuspPoint {
            value: ((beta - alpha) / 2.0).cos().powi(2),
            origin: CuspOrigin::HalfBetaMinusAlpha,
        },
    ];
    pts.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap());
    Ok(pts)
}

/// Eigenphases `(alpha, beta)` of a 3x3 unitary after rotating the global
/// phase so one eigenvalue is 1.
pub fn qutrit_unitary_phases(u: &CMatrix) -> Result<(f64, f64)> {
    if u.nrows() != 3 || u.ncols() != 3 {
        return Err(Error::InvalidDimension(format!(
            "expected a 3x3 unitary, got {}x{}",
            u.nrows(),
            u.ncols()
        )));
    }
    let dev = linalg::max_abs_diff(&(u.adjoint() * u), &linalg::identity(3));
    if dev > 1e-10 {
        return Err(Error::NotUnitary { max_dev: dev });
    }
    // eigenphases of a unitary: diagonalize the Hermitian/anti-Hermitian pair
    // simultaneously through U's normality: eigenvalues of (U + U^dag)/2 and
    // (U - U^dag)/2i share eigenvectors; recover phases from U's action.
    let (_, vecs) = linalg::hermitian_eigen(&((u + u.adjoint()).scale(0.5)));
    let mut phases: Vec<f64> = (0..3)
        .map(|k| {
            let v = vecs.column(k).into_owned();
            let w = u * &v;
            let lam = v.dotc(&w);
            lam.arg()
        })
        .collect();
    // rotate so the first phase is zero, then sort the remaining two
    let anchor = phases[0];
    for p in phases.iter_mut() {
        *p = (*p - anchor).rem_euclid(2.0 * PI);
    }
    phases.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok((phases[1], phases[2]))
}

/// Fidelity density of the qutrit unitary `diag(1, e^{i alpha}, e^{i beta})`.
///
/// The numerical shadow of the unitary is uniform on the spectral triangle,
/// so the density is the in-triangle angular measure of the circle of radius
/// `sqrt(F)` divided by twice the triangle area. The real-part arccosine
/// keeps the expression valid across all tangency regimes.
pub fn pdf_qutrit_unitary(alpha: f64, beta: f64) -> Result<AnalyticPdf> {
    let cusps = cusp_points(alpha, beta)?;
    if alpha >= beta {
        return Err(Error::DegenerateSpectrum(format!(
            "require alpha < beta, got alpha={alpha}, beta={beta}"
        )));
    }
    let den = alpha.sin() + (beta - alpha).sin() - beta.sin();
    if den.abs() < 1e-12 {
        return Err(Error::DegenerateTriangle(format!(
            "sin(a) + sin(b-a) - sin(b) = {den}"
        )));
    }
    let ca = (alpha / 2.0).cos();
    let cb = (beta / 2.0).cos();
    let cba = ((beta - alpha) / 2.0).cos();
    // signed origin-to-chord distances; at most one can be negative, and a
    // negative one puts the origin outside the triangle
    let h_min = ca.min(cba).min(-cb);
    let c_low = (-h_min).max(0.0);
    let support = (c_low * c_low, 1.0);
    let eval = Arc::new(move |f: f64| -> f64 {
        if f < 0.0 {
            return 0.0;
        }
        // r -> 0 saturates every arccosine argument, reproducing the flat
        // plateau when the origin lies inside the triangle
        let r = f.max(1e-300).sqrt();
        let p = 2.0 * (re_acos(cb / r) - re_acos(ca / r) - re_acos(cba / r)) / den;
        p.max(0.0)
    });
    let mut cusp_values: Vec<f64> = cusps.iter().map(|c| c.value).collect();
    cusp_values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cusp_values.dedup_by(|a, b| (*a - *b).abs() < DEGENERACY_TOL);
    Ok(AnalyticPdf::closed(support, cusp_values, vec![], eval))
}
