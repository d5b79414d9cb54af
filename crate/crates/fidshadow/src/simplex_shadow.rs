//! Uniform simplex shadows of commuting Hermitian collections and the
//! sampling route to fidelity densities.
//!
//! A spanning set of commuting Hermitian operators has a joint numerical
//! range equal to the simplex spanned by its joint eigen-tuples, and the
//! joint numerical shadow of Haar-random states is uniform on that simplex.
//! The fidelity of a channel with such Kraus operators is `|r|^2` for `r`
//! uniform on the simplex, which turns density estimation into plain simplex
//! sampling. A one-parameter Kraus family `{sqrt(1-eps) U, sqrt(eps) H_i}`
//! extends the construction to arbitrary unitary channels as `eps -> 0`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::AnalyticPdf;
use crate::channel::{self, hermitian_split, ChannelSpec, EmpiricalDistribution};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::numrange::{shadow_sample_with_workers, HermitianCollection};
use crate::schur;
use crate::stats::{self, EnergyTestReport};

/// Max-norm tolerance for pairwise commutators and residual off-diagonals.
pub const COMMUTATOR_TOL: f64 = 1e-10;

/// Commuting Hermitian operators with a shared eigenbasis and their real
/// eigenvalue table (`ops.len()` rows, one column per joint eigenvector).
#[derive(Debug, Clone)]
pub struct CommutingCollection {
    ops: Vec<CMatrix>,
    diagonalizer: CMatrix,
    eigs: DMatrix<f64>,
}

impl CommutingCollection {
    /// Validates Hermiticity and pairwise commutation, then computes the
    /// simultaneous eigenbasis by block-refined eigendecomposition: each
    /// operator is diagonalized on every eigenspace block left degenerate by
    /// its predecessors.
    pub fn new(ops: Vec<CMatrix>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::InvalidDimension("empty operator collection".into()));
        }
        let d = ops[0].nrows();
        for (i, op) in ops.iter().enumerate() {
            if op.nrows() != d || op.ncols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "operator {i} has size {}x{}, expected {d}x{d}",
                    op.nrows(),
                    op.ncols()
                )));
            }
            let dev = linalg::hermiticity_deviation(op);
            if dev > 1e-12 {
                return Err(Error::NotHermitian { max_dev: dev, tol: 1e-12 });
            }
        }
        let mut max_comm: f64 = 0.0;
        for i in 0..ops.len() {
            for j in (i + 1)..ops.len() {
                max_comm = max_comm.max(linalg::commutator_norm(&ops[i], &ops[j]));
            }
        }
        if max_comm > COMMUTATOR_TOL {
            return Err(Error::NotCommuting {
                max_comm,
                tol: COMMUTATOR_TOL,
            });
        }

        let mut u = linalg::identity(d);
        let mut blocks: Vec<Vec<usize>> = vec![(0..d).collect()];
        for h in &ops {
            let mut next_blocks = Vec::new();
            for block in &blocks {
                if block.len() == 1 {
                    next_blocks.push(block.clone());
                    continue;
                }
                let k = block.len();
                let ub = CMatrix::from_fn(d, k, |r, c| u[(r, block[c])]);
                let hb = ub.adjoint() * h * &ub;
                let (vals, vecs) = linalg::hermitian_eigen(&hb);
                let rotated = ub * vecs;
                for (c, &col) in block.iter().enumerate() {
                    for r in 0..d {
                        u[(r, col)] = rotated[(r, c)];
                    }
                }
                // split the block wherever consecutive eigenvalues separate
                let scale = 1.0 + vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let group_tol = 1e-11 * scale;
                let mut group = vec![block[0]];
                for c in 1..k {
                    if vals[c] - vals[c - 1] > group_tol {
                        next_blocks.push(std::mem::take(&mut group));
                    }
                    group.push(block[c]);
                }
                next_blocks.push(group);
            }
            blocks = next_blocks;
        }

        let m = ops.len();
        let mut eigs = DMatrix::zeros(m, d);
        for (i, h) in ops.iter().enumerate() {
            let diag = u.adjoint() * h * &u;
            let mut off: f64 = 0.0;
            for r in 0..d {
                for c in 0..d {
                    if r != c {
                        off = off.max(diag[(r, c)].norm());
                    }
                }
            }
            if off > COMMUTATOR_TOL {
                return Err(Error::NotCommuting {
                    max_comm: off,
                    tol: COMMUTATOR_TOL,
                });
            }
            for cidx in 0..d {
                eigs[(i, cidx)] = diag[(cidx, cidx)].re;
            }
        }
        Ok(CommutingCollection {
            ops,
            diagonalizer: u,
            eigs,
        })
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn dim(&self) -> usize {
        self.ops[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// The common eigenbasis.
    pub fn diagonalizer(&self) -> &CMatrix {
        &self.diagonalizer
    }

    /// Eigenvalue table: row per operator, column per joint eigenvector.
    pub fn eigs(&self) -> &DMatrix<f64> {
        &self.eigs
    }

    /// Rank of the diagonalized operators together with the identity row.
    pub fn spanning_rank(&self) -> usize {
        let (m, d) = (self.eigs.nrows(), self.eigs.ncols());
        let mut bordered = DMatrix::zeros(m + 1, d);
        bordered.view_mut((0, 0), (m, d)).copy_from(&self.eigs);
        for c in 0..d {
            bordered[(m, c)] = 1.0;
        }
        linalg::rank(&bordered, 1e-10)
    }

    /// Errors with the rank deficit when the diagonals together with the
    /// identity do not span all `d` diagonal dimensions.
    pub fn verify_spanning(&self) -> Result<()> {
        let rank = self.spanning_rank();
        if rank < self.dim() {
            return Err(Error::NotSpanning {
                rank,
                dim: self.dim(),
            });
        }
        Ok(())
    }
}

/// Validates a list of Hermitian matrices into a spanning
/// [`CommutingCollection`].
pub fn commuting_collection(ops: Vec<CMatrix>) -> Result<CommutingCollection> {
    let coll = CommutingCollection::new(ops)?;
    coll.verify_spanning()?;
    Ok(coll)
}

/// `(d-1)`-volume of the simplex spanned by `d` vertex points in `R^m`:
/// the product of the QR diagonal of the edge matrix over `(d-1)!` (QR keeps
/// full precision where the Gram determinant would square the conditioning).
pub fn simplex_volume(vertices: &[Vec<f64>]) -> f64 {
    let d = vertices.len();
    if d <= 1 {
        return 1.0;
    }
    let m = vertices[0].len();
    if m < d - 1 {
        return 0.0;
    }
    let edges = DMatrix::from_fn(m, d - 1, |r, c| vertices[c + 1][r] - vertices[0][r]);
    let r = edges.qr().r();
    let prod: f64 = (0..d - 1).map(|i| r[(i, i)].abs()).product();
    let factorial: f64 = (1..d).map(|k| k as f64).product();
    prod / factorial
}

/// Joint numerical range of a spanning commuting collection: the simplex of
/// its eigen-tuples, with volume and an orthonormal affine frame.
#[derive(Debug, Clone)]
pub struct SimplexEmbedding {
    vertices: Vec<Vec<f64>>,
    affine_frame: DMatrix<f64>,
    volume: f64,
}

impl SimplexEmbedding {
    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// Dimension of the ambient space (one coordinate per operator).
    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Orthonormal basis of the affine hull (columns; `d - 1` of them).
    pub fn affine_frame(&self) -> &DMatrix<f64> {
        &self.affine_frame
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn centroid(&self) -> Vec<f64> {
        let m = self.ambient_dim();
        let d = self.num_vertices() as f64;
        (0..m)
            .map(|r| self.vertices.iter().map(|v| v[r]).sum::<f64>() / d)
            .collect()
    }

    /// Barycentric coordinates of an ambient point (least squares through
    /// the stacked vertex/ones system).
    pub fn barycentric(&self, point: &[f64]) -> Vec<f64> {
        let m = self.ambient_dim();
        let d = self.num_vertices();
        let mut a = DMatrix::zeros(m + 1, d);
        for c in 0..d {
            for r in 0..m {
                a[(r, c)] = self.vertices[c][r];
            }
            a[(m, c)] = 1.0;
        }
        let mut b = nalgebra::DVector::zeros(m + 1);
        for r in 0..m {
            b[r] = point[r];
        }
        b[m] = 1.0;
        let svd = a.svd(true, true);
        let x = svd.solve(&b, 1e-12).expect("least-squares solve");
        x.iter().copied().collect()
    }
}

/// Builds the eigen-tuple simplex of a spanning collection.
pub fn simplex_embedding(coll: &CommutingCollection) -> Result<SimplexEmbedding> {
    coll.verify_spanning()?;
    let (m, d) = (coll.eigs.nrows(), coll.eigs.ncols());
    let vertices: Vec<Vec<f64>> = (0..d).map(|c| (0..m).map(|r| coll.eigs[(r, c)]).collect()).collect();
    let volume = simplex_volume(&vertices);
    let frame = if d > 1 {
        let edges = DMatrix::from_fn(m, d - 1, |r, c| vertices[c + 1][r] - vertices[0][r]);
        let qr = edges.qr();
        qr.q()
    } else {
        DMatrix::zeros(m, 0)
    };
    Ok(SimplexEmbedding {
        vertices,
        affine_frame: frame,
        volume,
    })
}

/// Barycentric weights uniform on the probability simplex, by normalized
/// unit-rate exponential draws.
fn uniform_barycentric<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let mut draws: Vec<f64> = Vec::with_capacity(d);
        for _ in 0..d {
            let u: f64 = rng.gen::<f64>();
            draws.push(-u.max(f64::MIN_POSITIVE).ln());
        }
        let total: f64 = draws.iter().sum();
        if total > 0.0 && total.is_finite() {
            return draws.into_iter().map(|x| x / total).collect();
        }
    }
}

/// Uniform samples on the embedded simplex, chunked across workers with the
/// usual derived-seed contract.
pub fn uniform_simplex_sample_with_workers(
    s: &SimplexEmbedding,
    n: usize,
    seed: u64,
    workers: usize,
) -> Result<Vec<Vec<f64>>> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample count must be at least 1".into()));
    }
    let workers = workers.max(1);
    let base = n / workers;
    let rem = n % workers;
    let sizes: Vec<usize> = (0..workers).map(|i| base + usize::from(i < rem)).collect();
    let d = s.num_vertices();
    let m = s.ambient_dim();
    let chunks: Vec<Vec<Vec<f64>>> = sizes
        .par_iter()
        .enumerate()
        .map(|(i, &size)| {
            let mut rng = ChaCha8Rng::seed_from_u64(channel::derive_stream_seed(seed, i as u64));
            (0..size)
                .map(|_| {
                    let x = uniform_barycentric(d, &mut rng);
                    (0..m)
                        .map(|r| x.iter().zip(s.vertices()).map(|(&xi, v)| xi * v[r]).sum())
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut points = Vec::with_capacity(n);
    for c in chunks {
        points.extend(c);
    }
    Ok(points)
}

/// Single-worker variant of [`uniform_simplex_sample_with_workers`].
pub fn uniform_simplex_sample(s: &SimplexEmbedding, n: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    uniform_simplex_sample_with_workers(s, n, seed, 1)
}

/// Controls for the shadow-uniformity energy test.
#[derive(Debug, Clone)]
pub struct UniformityOptions {
    /// Points per group entering the pooled distance matrix.
    pub subsample: usize,
    pub permutations: usize,
    /// Rejection level on the permutation p-value.
    pub level: f64,
}

impl Default for UniformityOptions {
    fn default() -> Self {
        UniformityOptions {
            subsample: 1000,
            permutations: 1999,
            level: 0.001,
        }
    }
}

/// Comparison of the Haar-state shadow against the uniform simplex law.
#[derive(Debug, Clone)]
pub struct UniformityReport {
    pub energy: EnergyTestReport,
    pub level: f64,
    pub passes: bool,
    pub n: usize,
    pub seed: u64,
}

/// Samples the joint numerical shadow with Haar states and uniform points on
/// the eigen-tuple simplex, then compares the two clouds with the two-sample
/// energy statistic.
pub fn shadow_uniformity_check(
    coll: &CommutingCollection,
    n: usize,
    seed: u64,
    options: &UniformityOptions,
) -> Result<UniformityReport> {
    let embedding = simplex_embedding(coll)?;
    let herm = HermitianCollection::new(coll.ops().to_vec())?;
    let shadow = shadow_sample_with_workers(&herm, n, channel::derive_stream_seed(seed, 0), 1)?;
    let uniform = uniform_simplex_sample(&embedding, n, channel::derive_stream_seed(seed, 1))?;
    let energy = stats::energy_two_sample(
        shadow.points(),
        &uniform,
        options.subsample,
        options.permutations,
        channel::derive_stream_seed(seed, 2),
    )?;
    let passes = energy.p_value > options.level;
    Ok(UniformityReport {
        energy,
        level: options.level,
        passes,
        n,
        seed,
    })
}

/// A histogram density together with the raw sample set it came from.
#[derive(Debug)]
pub struct SampledPdf {
    pub distribution: EmpiricalDistribution,
    pub pdf: AnalyticPdf,
}

/// Exact support of `|r|^2` over the eigen-tuple simplex: the minimum is the
/// Gram-quadratic minimum over barycentric weights, the maximum sits at a
/// vertex (all vertices have unit norm for a trace-preserving collection).
fn exact_support(vertices: &[Vec<f64>]) -> Result<(f64, f64)> {
    let d = vertices.len();
    let mut g = DMatrix::zeros(d, d);
    for i in 0..d {
        for l in 0..d {
            g[(i, l)] = vertices[i].iter().zip(&vertices[l]).map(|(a, b)| a * b).sum();
        }
    }
    let g = (&g + g.transpose()).scale(0.5);
    let gram = schur::GramMatrix::new(g)?;
    let min = schur::schur_min_fidelity(&gram)?;
    Ok((min.f_min, 1.0))
}

fn sampled_pdf_from_collection(
    coll: &CommutingCollection,
    n: usize,
    seed: u64,
    bins: Option<usize>,
    workers: usize,
) -> Result<SampledPdf> {
    coll.verify_spanning()?;
    let embedding = simplex_embedding(coll)?;
    let support = exact_support(embedding.vertices())?;
    let points = uniform_simplex_sample_with_workers(&embedding, n, seed, workers)?;
    let samples: Vec<f64> = points
        .iter()
        .map(|r| r.iter().map(|x| x * x).sum::<f64>().clamp(0.0, 1.0))
        .collect();
    let distribution = EmpiricalDistribution::new(samples, seed, workers)?;
    let pdf = AnalyticPdf::from_histogram(distribution.samples(), support, bins, &[])?;
    Ok(SampledPdf { distribution, pdf })
}

/// Fidelity density of a channel whose Kraus operators are commuting
/// Hermitian matrices spanning the diagonal space (with the identity): the
/// density of `|r|^2` under the uniform simplex law, as a histogram with the
/// exact support attached.
pub fn pdf_commuting_channel(
    channel: &ChannelSpec,
    n: usize,
    seed: u64,
    bins: Option<usize>,
) -> Result<SampledPdf> {
    let coll = CommutingCollection::new(channel.kraus().to_vec())?;
    sampled_pdf_from_collection(&coll, n, seed, bins, 1)
}

/// Monte Carlo estimate of a relative region volume within a simplex.
#[derive(Debug, Clone, Copy)]
pub struct RegionMeasure {
    pub value: f64,
    pub std_error: f64,
    pub n: usize,
    pub seed: u64,
}

/// Order-zero B-spline measure: `vol(simplex ∩ region) / vol(simplex)`,
/// estimated by uniform sampling.
pub fn bspline_measure<F: Fn(&[f64]) -> bool>(
    s: &SimplexEmbedding,
    region: F,
    n: usize,
    seed: u64,
) -> Result<RegionMeasure> {
    let points = uniform_simplex_sample(s, n, seed)?;
    let hits = points.iter().filter(|p| region(p)).count();
    let value = hits as f64 / n as f64;
    let std_error = (value * (1.0 - value) / n as f64).sqrt();
    Ok(RegionMeasure {
        value,
        std_error,
        n,
        seed,
    })
}

/// Fidelity density of the channel family
/// `(1-eps) U rho U^dag + eps sum_i H_i rho H_i` for a unitary `U` and
/// commuting Hermitian `H_i` with `sum_i H_i^2 = I`.
///
/// The Kraus set `{sqrt(1-eps) U, sqrt(eps) H_i}` splits into commuting
/// Hermitian parts whose eigen-tuple simplex carries a uniform shadow for
/// every `eps > 0`; the resulting density approaches the unitary channel's
/// as `eps -> 0`. `eps = 0` is accepted when the split of `U` alone spans.
pub fn pdf_unitary_epsilon(
    u: &CMatrix,
    aux: &[CMatrix],
    epsilon: f64,
    n: usize,
    seed: u64,
    bins: Option<usize>,
) -> Result<SampledPdf> {
    let d = u.nrows();
    if u.ncols() != d || d == 0 {
        return Err(Error::InvalidDimension("unitary must be square".into()));
    }
    let unitary_dev = linalg::max_abs_diff(&(u.adjoint() * u), &linalg::identity(d));
    if unitary_dev > 1e-10 {
        return Err(Error::NotUnitary { max_dev: unitary_dev });
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!("epsilon = {epsilon} outside [0, 1]")));
    }
    if epsilon > 0.0 {
        if aux.is_empty() {
            return Err(Error::InvalidParameter(
                "epsilon > 0 requires auxiliary Hermitian operators with sum H_i^2 = I".into(),
            ));
        }
        let mut sq = CMatrix::zeros(d, d);
        for h in aux {
            sq += h * h;
        }
        let dev = linalg::max_abs_diff(&sq, &linalg::identity(d));
        if dev > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "sum of squared auxiliary operators deviates from identity by {dev:.3e}"
            )));
        }
    }

    let pair = hermitian_split(u);
    let mut ops: Vec<CMatrix> = Vec::with_capacity(2 + aux.len());
    if epsilon < 1.0 {
        ops.push(pair.h.scale((1.0 - epsilon).sqrt()));
        ops.push(pair.a.scale((1.0 - epsilon).sqrt()));
    }
    if epsilon > 0.0 {
        for h in aux {
            ops.push(h.scale(epsilon.sqrt()));
        }
    }
    ops.retain(|op| linalg::max_abs(op) > 1e-14);
    if ops.is_empty() {
        return Err(Error::InvalidParameter("all Kraus parts vanished".into()));
    }
    let coll = CommutingCollection::new(ops)?;
    sampled_pdf_from_collection(&coll, n, seed, bins, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sigma_z() -> CMatrix {
        linalg::cdiag(&[c(1.0, 0.0), c(-1.0, 0.0)])
    }

    fn rdiag(vals: &[f64]) -> CMatrix {
        let entries: Vec<Complex64> = vals.iter().map(|&v| c(v, 0.0)).collect();
        linalg::cdiag(&entries)
    }

    /// Commuting triple on a four-level system with unit column norms.
    fn four_level_triple() -> Vec<CMatrix> {
        let s2 = 2.0f64.sqrt();
        let k1 = rdiag(&[1.0 / s2, 0.5 / s2, -0.5 / s2, -1.0 / s2]);
        let a = 3.0f64.sqrt() / (2.0 * s2);
        let k2 = rdiag(&[0.0, a, a, 0.0]);
        let k3 = rdiag(&[1.0 / s2, -1.0 / s2, 1.0 / s2, -1.0 / s2]);
        vec![k1, k2, k3]
    }

    #[test]
    fn sigma_z_alone_spans_for_qubits() {
        let coll = commuting_collection(vec![sigma_z()]).unwrap();
        assert_eq!(coll.spanning_rank(), 2);
    }

    #[test]
    fn scaled_identity_is_not_spanning() {
        let err = commuting_collection(vec![rdiag(&[1.0, 1.0])]).unwrap_err();
        assert!(matches!(err, Error::NotSpanning { rank: 1, dim: 2 }));
    }

    #[test]
    fn four_level_triple_spans() {
        let coll = commuting_collection(four_level_triple()).unwrap();
        assert_eq!(coll.spanning_rank(), 4);
    }

    #[test]
    fn non_commuting_pair_is_rejected() {
        let sx = linalg::cmatrix_from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]);
        let err = CommutingCollection::new(vec![sx, sigma_z()]).unwrap_err();
        assert!(matches!(err, Error::NotCommuting { .. }));
    }

    #[test]
    fn diagonalization_handles_rotated_basis() {
        // conjugate a commuting diagonal pair by a fixed unitary
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = channel::haar_unitary(3, &mut rng);
        let h1 = &u * rdiag(&[1.0, 1.0, -1.0]) * u.adjoint();
        let h2 = &u * rdiag(&[0.5, -0.5, 0.5]) * u.adjoint();
        let h1 = (&h1 + h1.adjoint()).scale(0.5);
        let h2 = (&h2 + h2.adjoint()).scale(0.5);
        let coll = CommutingCollection::new(vec![h1, h2]).unwrap();
        // recovered eigenvalue columns match the constructed pairs up to
        // permutation
        let mut cols: Vec<(i64, i64)> = (0..3)
            .map(|i| {
                (
                    (coll.eigs()[(0, i)] * 1e6).round() as i64,
                    (coll.eigs()[(1, i)] * 1e6).round() as i64,
                )
            })
            .collect();
        cols.sort_unstable();
        assert_eq!(
            cols,
            vec![(-1_000_000, 500_000), (1_000_000, -500_000), (1_000_000, 500_000)]
        );
    }

    #[test]
    fn standard_simplex_embedding() {
        let ops = vec![rdiag(&[1.0, 0.0, 0.0]), rdiag(&[0.0, 1.0, 0.0])];
        let coll = commuting_collection(ops).unwrap();
        let s = simplex_embedding(&coll).unwrap();
        assert_eq!(s.num_vertices(), 3);
        assert_relative_eq!(s.volume(), 0.5, epsilon = 1e-12);
        let mut verts = s.vertices().to_vec();
        verts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(verts, vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn segment_embedding_for_sigma_z() {
        let coll = commuting_collection(vec![sigma_z()]).unwrap();
        let s = simplex_embedding(&coll).unwrap();
        assert_relative_eq!(s.volume(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn simplex_volume_vanishes_iff_not_spanning() {
        // rank-deficient engineered collection: second op is an affine
        // combination of the first and the identity
        let h1 = rdiag(&[0.3, -0.2, 0.9]);
        let h2 = rdiag(&[0.3 * 2.0 + 0.1, -0.2 * 2.0 + 0.1, 0.9 * 2.0 + 0.1]);
        let coll = CommutingCollection::new(vec![h1, h2]).unwrap();
        assert!(coll.verify_spanning().is_err());
        let verts: Vec<Vec<f64>> = (0..3)
            .map(|i| vec![coll.eigs()[(0, i)], coll.eigs()[(1, i)]])
            .collect();
        assert!(simplex_volume(&verts) < 1e-12);
    }

    #[test]
    fn uniform_samples_have_centroid_at_simplex_centroid() {
        let coll = commuting_collection(four_level_triple()).unwrap();
        let s = simplex_embedding(&coll).unwrap();
        let n = 200_000;
        let pts = uniform_simplex_sample(&s, n, 9).unwrap();
        let centroid = s.centroid();
        for r in 0..s.ambient_dim() {
            let mean = pts.iter().map(|p| p[r]).sum::<f64>() / n as f64;
            assert!((mean - centroid[r]).abs() < 3.0 / (n as f64).sqrt() + 1e-3);
        }
    }

    #[test]
    fn uniform_segment_samples_are_uniform() {
        let coll = commuting_collection(vec![sigma_z()]).unwrap();
        let s = simplex_embedding(&coll).unwrap();
        let pts = uniform_simplex_sample(&s, 100_000, 4).unwrap();
        let mut xs: Vec<f64> = pts.iter().map(|p| p[0]).collect();
        xs.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        let d = stats::ks_one_sample_sorted(&xs, |x| ((x + 1.0) / 2.0).clamp(0.0, 1.0)).unwrap();
        assert!(d < 0.01, "KS = {d}");
    }

    #[test]
    fn worker_chunking_is_deterministic() {
        let coll = commuting_collection(four_level_triple()).unwrap();
        let s = simplex_embedding(&coll).unwrap();
        let a = uniform_simplex_sample_with_workers(&s, 1001, 7, 3).unwrap();
        let b = uniform_simplex_sample_with_workers(&s, 1001, 7, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn shadow_uniformity_passes_for_sigma_z() {
        let coll = commuting_collection(vec![sigma_z()]).unwrap();
        let opts = UniformityOptions {
            subsample: 600,
            permutations: 399,
            level: 0.001,
        };
        let report = shadow_uniformity_check(&coll, 20_000, 11, &opts).unwrap();
        assert!(report.passes, "p = {}", report.energy.p_value);
    }

    #[test]
    fn commuting_pdf_of_qubit_projectors_matches_closed_form() {
        let k1 = rdiag(&[1.0, 0.0]);
        let k2 = rdiag(&[0.0, 1.0]);
        let ch = ChannelSpec::new(vec![k1, k2]).unwrap();
        let sampled = pdf_commuting_channel(&ch, 200_000, 3, None).unwrap();
        assert_relative_eq!(sampled.pdf.support().0, 0.5, epsilon = 1e-12);
        // KS against the closed-form CDF sqrt(2F - 1)
        let d = stats::ks_one_sample_sorted(sampled.distribution.samples(), |f| {
            (2.0 * f - 1.0).max(0.0).sqrt().min(1.0)
        })
        .unwrap();
        assert!(d < 0.01, "KS = {d}");
    }

    #[test]
    fn commuting_pdf_rejects_non_hermitian_kraus() {
        let u = linalg::cdiag(&[c(1.0, 0.0), c(0.0, 1.0)]);
        let ch = ChannelSpec::from_unitary(u).unwrap();
        assert!(matches!(
            pdf_commuting_channel(&ch, 100, 0, None),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn four_level_support_reaches_one() {
        let ch = ChannelSpec::new(four_level_triple()).unwrap();
        let sampled = pdf_commuting_channel(&ch, 100_000, 5, None).unwrap();
        assert_relative_eq!(sampled.pdf.support().1, 1.0);
        assert!(sampled.distribution.max() <= 1.0 + 1e-12);
        assert!(sampled.distribution.min() >= sampled.pdf.support().0 - 1e-6);
    }

    #[test]
    fn bspline_measure_trivial_regions() {
        let coll = commuting_collection(four_level_triple()).unwrap();
        let s = simplex_embedding(&coll).unwrap();
        let all = bspline_measure(&s, |_| true, 10_000, 1).unwrap();
        assert_relative_eq!(all.value, 1.0);
        let none = bspline_measure(&s, |_| false, 10_000, 1).unwrap();
        assert_relative_eq!(none.value, 0.0);
    }

    #[test]
    fn bspline_measure_halfspace_cut() {
        // regular 2-simplex in R^3: qutrit projectors
        let ops = vec![rdiag(&[1.0, 0.0, 0.0]), rdiag(&[0.0, 1.0, 0.0]), rdiag(&[0.0, 0.0, 1.0])];
        let coll = commuting_collection(ops).unwrap();
        let s = simplex_embedding(&coll).unwrap();
        // in barycentric terms the first coordinate is Beta(1, 2), so
        // P(x_0 <= 1/3) = 1 - (2/3)^2 = 5/9
        let est = bspline_measure(&s, |p| p[0] <= 1.0 / 3.0, 200_000, 2).unwrap();
        let exact = 5.0 / 9.0;
        assert!(
            (est.value - exact).abs() < 3.0 * est.std_error + 1e-3,
            "estimate {} vs exact {exact}",
            est.value
        );
    }

    #[test]
    fn epsilon_family_validates_inputs() {
        let u = linalg::cdiag(&[c(1.0, 0.0), Complex64::from_polar(1.0, 1.0)]);
        // epsilon > 0 without aux operators
        assert!(pdf_unitary_epsilon(&u, &[], 0.1, 100, 0, None).is_err());
        // aux with wrong normalization
        let bad = vec![rdiag(&[0.5, 0.5])];
        assert!(pdf_unitary_epsilon(&u, &bad, 0.1, 100, 0, None).is_err());
        // aux not commuting with U
        let sx = linalg::cmatrix_from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]);
        let u2 = linalg::cdiag(&[c(1.0, 0.0), c(0.0, 1.0)]);
        assert!(matches!(
            pdf_unitary_epsilon(&u2, &[sx], 0.1, 100, 0, None),
            Err(Error::NotCommuting { .. })
        ));
    }

    #[test]
    fn epsilon_zero_matches_qubit_unitary_closed_form() {
        let alpha = 1.2f64;
        let u = linalg::cdiag(&[c(1.0, 0.0), Complex64::from_polar(1.0, alpha)]);
        let sampled = pdf_unitary_epsilon(&u, &[], 0.0, 200_000, 6, None).unwrap();
        let lo = (1.0 + alpha.cos()) / 2.0;
        assert_relative_eq!(sampled.pdf.support().0, lo, epsilon = 1e-9);
        // closed-form CDF: sqrt((2F - 1 - cos a)/(1 - cos a))
        let ca = alpha.cos();
        let d = stats::ks_one_sample_sorted(sampled.distribution.samples(), |f| {
            ((2.0 * f - 1.0 - ca) / (1.0 - ca)).max(0.0).sqrt().min(1.0)
        })
        .unwrap();
        assert!(d < 0.01, "KS = {d}");
    }

    #[test]
    fn epsilon_one_is_pure_aux_channel() {
        let u = linalg::cdiag(&[c(1.0, 0.0), Complex64::from_polar(1.0, 0.7)]);
        let aux = vec![rdiag(&[1.0, -1.0])];
        // eps = 1 drops the unitary part; {sigma_z} spans for d = 2
        let sampled = pdf_unitary_epsilon(&u, &aux, 1.0, 50_000, 8, None).unwrap();
        // F = <sigma_z>^2 with <sigma_z> uniform on [-1, 1]: CDF sqrt(F)
        let d = stats::ks_one_sample_sorted(sampled.distribution.samples(), |f| f.max(0.0).sqrt().min(1.0)).unwrap();
        assert!(d < 0.01, "KS = {d}");
    }
}
