//! Schur (diagonal-Kraus) channels: Gram-matrix construction, exact minimum
//! of the fidelity quadratic form over the probability simplex, and the
//! trivial maximum.
//!
//! For diagonal Kraus operators with eigenvalue rows `lambda_{j*}`, the
//! fidelity of a state with populations `p_i = |psi_i|^2` is the quadratic
//! form `p^T G p` with `G_il = Re(sum_j conj(lambda_{ji}) lambda_{jl})`. The
//! interior stationary point has the closed form of an inverse-Gram row sum;
//! when it leaves the simplex the minimum moves to a face and is found by
//! exhaustive face enumeration.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::channel::{ChannelSpec, PureState};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};

/// Column-normalization tolerance (trace preservation of the diagonal map).
pub const COLUMN_NORM_TOL: f64 = 1e-10;
/// Face enumeration is exponential in `d`; reject beyond this.
pub const MAX_FACE_DIM: usize = 20;
/// Smallest Gram eigenvalue treated as invertible.
const GRAM_RANK_TOL: f64 = 1e-12;

/// Channel whose Kraus operators are all diagonal, stored as the `m x d`
/// matrix of eigenvalues (row `j` holds the diagonal of the j-th operator).
#[derive(Debug, Clone)]
pub struct SchurChannel {
    dim: usize,
    eigs: CMatrix,
}

impl SchurChannel {
    /// Validates the eigenvalue matrix: every column must satisfy
    /// `sum_j |lambda_{ji}|^2 = 1`.
    pub fn new(eigs: CMatrix) -> Result<Self> {
        let (m, d) = (eigs.nrows(), eigs.ncols());
        if m == 0 || d == 0 {
            return Err(Error::InvalidDimension("empty eigenvalue matrix".into()));
        }
        for i in 0..d {
            let norm: f64 = (0..m).map(|j| eigs[(j, i)].norm_sqr()).sum();
            if (norm - 1.0).abs() > COLUMN_NORM_TOL {
                return Err(Error::NotTracePreserving {
                    max_dev: (norm - 1.0).abs(),
                    tol: COLUMN_NORM_TOL,
                });
            }
        }
        Ok(SchurChannel { dim: d, eigs })
    }

    /// Extracts the diagonals of a channel whose Kraus operators are all
    /// diagonal (off-diagonal magnitude below 1e-12).
    pub fn from_channel(channel: &ChannelSpec) -> Result<Self> {
        let d = channel.dim();
        let m = channel.num_kraus();
        let mut eigs = CMatrix::zeros(m, d);
        for (j, k) in channel.kraus().iter().enumerate() {
            for r in 0..d {
                for c in 0..d {
                    if r != c && k[(r, c)].norm() > 1e-12 {
                        return Err(Error::InvalidParameter(format!(
                            "Kraus operator {j} is not diagonal"
                        )));
                    }
                }
                eigs[(j, r)] = k[(r, r)];
            }
        }
        SchurChannel::new(eigs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_kraus(&self) -> usize {
        self.eigs.nrows()
    }

    pub fn eigs(&self) -> &CMatrix {
        &self.eigs
    }

    /// Expands back into a full [`ChannelSpec`] of diagonal matrices.
    pub fn to_channel(&self) -> Result<ChannelSpec> {
        let kraus: Vec<CMatrix> = (0..self.eigs.nrows())
            .map(|j| {
                let diag: Vec<Complex64> = (0..self.dim).map(|i| self.eigs[(j, i)]).collect();
                linalg::cdiag(&diag)
            })
            .collect();
        ChannelSpec::new(kraus)
    }
}

/// Real Gram matrix of the eigenvalue columns; positive semidefinite with a
/// unit diagonal for any trace-preserving Schur channel.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    g: DMatrix<f64>,
}

impl GramMatrix {
    pub fn new(g: DMatrix<f64>) -> Result<Self> {
        let d = g.nrows();
        if d == 0 || g.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "Gram matrix must be square, got {}x{}",
                g.nrows(),
                g.ncols()
            )));
        }
        if (&g - g.transpose()).amax() > 1e-12 {
            return Err(Error::InvalidParameter("Gram matrix is not symmetric".into()));
        }
        for i in 0..d {
            if (g[(i, i)] - 1.0).abs() > COLUMN_NORM_TOL {
                return Err(Error::InvalidParameter(format!(
                    "Gram diagonal entry {i} = {} is not 1",
                    g[(i, i)]
                )));
            }
        }
        let (vals, _) = linalg::symmetric_eigen(&g);
        if vals[0] < -COLUMN_NORM_TOL {
            return Err(Error::InvalidParameter(format!(
                "Gram matrix has negative eigenvalue {}",
                vals[0]
            )));
        }
        Ok(GramMatrix { g })
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.g
    }
}

/// `G_il = Re(sum_j conj(lambda_{ji}) lambda_{jl})`.
pub fn gram_matrix(ch: &SchurChannel) -> GramMatrix {
    let d = ch.dim();
    let m = ch.num_kraus();
    let mut g = DMatrix::zeros(d, d);
    for i in 0..d {
        for l in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..m {
                acc += ch.eigs()[(j, i)].conj() * ch.eigs()[(j, l)];
            }
            g[(i, l)] = acc.re;
        }
    }
    // exact symmetrization against rounding
    let g = (&g + g.transpose()).scale(0.5);
    GramMatrix::new(g).expect("Gram of a valid Schur channel is PSD with unit diagonal")
}

/// Point of the probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint {
    p: Vec<f64>,
}

impl SimplexPoint {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidDimension("empty simplex point".into()));
        }
        if p.iter().any(|&x| x < -1e-12) {
            return Err(Error::InvalidParameter("negative simplex coordinate".into()));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "simplex coordinates sum to {total}"
            )));
        }
        Ok(SimplexPoint {
            p: p.into_iter().map(|x| x.max(0.0)).collect(),
        })
    }

    pub fn vertex(d: usize, i: usize) -> Self {
        let mut p = vec![0.0; d];
        p[i] = 1.0;
        SimplexPoint { p }
    }

    pub fn uniform(d: usize) -> Self {
        SimplexPoint {
            p: vec![1.0 / d as f64; d],
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.p
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }
}

/// The fidelity quadratic form `sum_il G_il p_i p_l`.
pub fn fidelity_quadratic(g: &GramMatrix, p: &SimplexPoint) -> Result<f64> {
    if p.dim() != g.dim() {
        return Err(Error::DimensionMismatch(format!(
            "point dimension {} does not match Gram dimension {}",
            p.dim(),
            g.dim()
        )));
    }
    let mut acc = 0.0;
    for i in 0..g.dim() {
        for l in 0..g.dim() {
            acc += g.matrix()[(i, l)] * p.coords()[i] * p.coords()[l];
        }
    }
    Ok(acc)
}

/// Where the minimizer of the quadratic form sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinimumLocation {
    Interior,
    Boundary,
}

/// Exact minimum of the fidelity quadratic form over the simplex.
#[derive(Debug, Clone)]
pub struct SchurMinimum {
    pub f_min: f64,
    pub p_star: SimplexPoint,
    pub location: MinimumLocation,
    /// Indices of the supporting face (all of `0..d` for an interior
    /// minimum).
    pub face: Vec<usize>,
}

/// Stationary point of the form restricted to the coordinates in `face`,
/// from the bordered system `2 G_S p = mu 1`, `sum p = 1`. For an invertible
/// sub-Gram this reproduces the inverse-row-sum closed form
/// `p_i ~ sum_j (G_S^{-1})_{ij}`, `F = 1/sum_{ij}(G_S^{-1})_{ij}`; a
/// singular sub-Gram stays solvable whenever its null space is transverse to
/// the simplex, which is exactly when the restricted minimum is still
/// unique. Returns `None` (deferring to sub-faces) when the system is
/// numerically singular or the weights leave the face.
fn face_candidate(g: &DMatrix<f64>, face: &[usize]) -> Option<(f64, Vec<f64>)> {
    let k = face.len();
    if k == 1 {
        return Some((g[(face[0], face[0])], vec![1.0]));
    }
    let mut kkt = DMatrix::zeros(k + 1, k + 1);
    for r in 0..k {
        for c in 0..k {
            kkt[(r, c)] = 2.0 * g[(face[r], face[c])];
        }
        kkt[(r, k)] = -1.0;
        kkt[(k, r)] = 1.0;
    }
    let mut rhs = nalgebra::DVector::zeros(k + 1);
    rhs[k] = 1.0;
    let sol = kkt.clone().lu().solve(&rhs)?;
    let resid = (&kkt * &sol - &rhs).amax();
    if !resid.is_finite() || resid > GRAM_RANK_TOL.sqrt() {
        return None;
    }
    let p: Vec<f64> = (0..k).map(|i| sol[i]).collect();
    if p.iter().any(|&v| v < -1e-12) {
        return None;
    }
    let mut f = 0.0;
    for r in 0..k {
        for c in 0..k {
            f += g[(face[r], face[c])] * p[r] * p[c];
        }
    }
    Some((f, p.into_iter().map(|v| v.max(0.0)).collect()))
}

/// Depth-first enumeration of index subsets in lexicographic order of their
/// sorted index sequences, so ties resolve to the lexicographically smallest
/// supporting face.
fn for_each_face<F: FnMut(&[usize])>(d: usize, visit: &mut F) {
    fn recurse<F: FnMut(&[usize])>(d: usize, prefix: &mut Vec<usize>, visit: &mut F) {
        let start = prefix.last().map_or(0, |&l| l + 1);
        for next in start..d {
            prefix.push(next);
            visit(prefix);
            recurse(d, prefix, visit);
            prefix.pop();
        }
    }
    let mut prefix = Vec::with_capacity(d);
    recurse(d, &mut prefix, visit);
}

fn embed(face: &[usize], weights: &[f64], d: usize) -> SimplexPoint {
    let mut p = vec![0.0; d];
    for (slot, &idx) in face.iter().enumerate() {
        p[idx] = weights[slot];
    }
    SimplexPoint::new(p).expect("face candidate weights form a simplex point")
}

/// Global minimum of the fidelity quadratic form over the probability
/// simplex.
///
/// If the full interior candidate `p_i = sum_j (G^{-1})_{ij} / sum_{kl}
/// (G^{-1})_{kl}` is nonnegative it is the convex global minimum with value
/// `1 / sum_{ij} (G^{-1})_{ij}`. Otherwise every proper face is solved the
/// same way (plus the vertices, where `F = G_ii = 1`) and the best value is
/// returned.
pub fn schur_min_fidelity(g: &GramMatrix) -> Result<SchurMinimum> {
    let d = g.dim();
    if d > MAX_FACE_DIM {
        return Err(Error::DimensionTooLarge { dim: d, max: MAX_FACE_DIM });
    }
    let full: Vec<usize> = (0..d).collect();
    if let Some((f, weights)) = face_candidate(g.matrix(), &full) {
        return Ok(SchurMinimum {
            f_min: f,
            p_star: embed(&full, &weights, d),
            location: MinimumLocation::Interior,
            face: full,
        });
    }
    let mut best: Option<SchurMinimum> = None;
    for_each_face(d, &mut |face: &[usize]| {
        if face.len() == d {
            return; // full face already handled
        }
        if let Some((f, weights)) = face_candidate(g.matrix(), face) {
            let better = best.as_ref().map_or(true, |b| f < b.f_min - 1e-15);
            if better {
                best = Some(SchurMinimum {
                    f_min: f,
                    p_star: embed(face, &weights, d),
                    location: MinimumLocation::Boundary,
                    face: face.to_vec(),
                });
            }
        }
    });
    best.ok_or_else(|| Error::InvalidParameter("no feasible face candidate found".into()))
}

/// Maximum of the quadratic form over the simplex: the form is convex, so
/// the maximum sits at a vertex, and every vertex has `F = G_ii = 1`.
pub fn schur_max_fidelity(g: &GramMatrix) -> (f64, SimplexPoint) {
    (1.0, SimplexPoint::vertex(g.dim(), 0))
}

/// State attaining the minimum: amplitudes `sqrt(p_i)` with zero phases
/// (the quadratic form depends on populations only).
pub fn min_fidelity_state(p_star: &SimplexPoint) -> PureState {
    let amps = CVector::from_fn(p_star.dim(), |i, _| Complex64::new(p_star.coords()[i].sqrt(), 0.0));
    PureState::normalized(amps).expect("simplex point has unit mass")
}

/// Qubit Schur channel `K1 = diag(sqrt(p), sqrt(1-p))`,
/// `K2 = diag(sqrt(1-p), sqrt(p))`: identity at `p = 1/2`, orthogonal
/// projectors at `p = 0` or `1`.
pub fn weight_swap_qubit_channel(p: f64) -> Result<SchurChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
    }
    let c = |x: f64| Complex64::new(x, 0.0);
    let eigs = CMatrix::from_fn(2, 2, |j, i| match (j, i) {
        (0, 0) => c(p.sqrt()),
        (0, 1) => c((1.0 - p).sqrt()),
        (1, 0) => c((1.0 - p).sqrt()),
        (1, 1) => c(p.sqrt()),
        _ => unreachable!(),
    });
    SchurChannel::new(eigs)
}

/// Qutrit extension with a third level split between the first and third
/// Kraus operators: `K1 = diag(sqrt(p), sqrt(1-p), sqrt(q))`,
/// `K2 = diag(sqrt(1-p), sqrt(p), 0)`, `K3 = diag(0, 0, sqrt(1-q))`.
pub fn weight_swap_qutrit_channel(p: f64, q: f64) -> Result<SchurChannel> {
    if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidParameter(format!(
            "parameters p = {p}, q = {q} outside [0, 1]"
        )));
    }
    let c = |x: f64| Complex64::new(x, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let rows = [
        [c(p.sqrt()), c((1.0 - p).sqrt()), c(q.sqrt())],
        [c((1.0 - p).sqrt()), c(p.sqrt()), zero],
        [zero, zero, c((1.0 - q).sqrt())],
    ];
    let eigs = CMatrix::from_fn(3, 3, |j, i| rows[j][i]);
    SchurChannel::new(eigs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{haar_state, sample_fidelities};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Random Schur channel via Haar-unitary columns of an m*? construction:
    /// each column of the eigenvalue matrix is an independent unit vector.
    fn random_schur(d: usize, m: usize, rng: &mut ChaCha8Rng) -> SchurChannel {
        let mut eigs = CMatrix::zeros(m, d);
        for i in 0..d {
            let col = haar_state(m, rng).unwrap();
            for j in 0..m {
                eigs[(j, i)] = col.amplitudes()[j];
            }
        }
        SchurChannel::new(eigs).unwrap()
    }

    #[test]
    fn gram_of_identity_channel_is_all_ones() {
        let ch = SchurChannel::new(CMatrix::from_fn(1, 2, |_, _| c(1.0, 0.0))).unwrap();
        let g = gram_matrix(&ch);
        assert_relative_eq!(g.matrix()[(0, 0)], 1.0);
        assert_relative_eq!(g.matrix()[(0, 1)], 1.0);
        assert_relative_eq!(g.matrix()[(1, 1)], 1.0);
    }

    #[test]
    fn gram_of_weight_swap_family() {
        let p = 0.3f64;
        let ch = weight_swap_qubit_channel(p).unwrap();
        let g = gram_matrix(&ch);
        let s = 2.0 * (p * (1.0 - p)).sqrt();
        assert_relative_eq!(g.matrix()[(0, 1)], s, epsilon = 1e-14);
        assert_relative_eq!(g.matrix()[(0, 0)], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn gram_of_projector_channel_is_identity() {
        let eigs = CMatrix::from_fn(3, 3, |j, i| if j == i { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let ch = SchurChannel::new(eigs).unwrap();
        let g = gram_matrix(&ch);
        assert!((g.matrix() - DMatrix::identity(3, 3)).amax() < 1e-14);
    }

    #[test]
    fn quadratic_form_examples() {
        let eigs = CMatrix::from_fn(3, 3, |j, i| if j == i { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let g = gram_matrix(&SchurChannel::new(eigs).unwrap());
        let f = fidelity_quadratic(&g, &SimplexPoint::uniform(3)).unwrap();
        assert_relative_eq!(f, 1.0 / 3.0, epsilon = 1e-14);
        let f = fidelity_quadratic(&g, &SimplexPoint::vertex(3, 1)).unwrap();
        assert_relative_eq!(f, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn quadratic_form_matches_channel_fidelity_with_phases() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let ch = random_schur(3, 2, &mut rng);
            let g = gram_matrix(&ch);
            // random populations and random phases
            let raw: Vec<f64> = (0..3).map(|_| rng.gen::<f64>() + 1e-3).collect();
            let total: f64 = raw.iter().sum();
            let p: Vec<f64> = raw.iter().map(|x| x / total).collect();
            let point = SimplexPoint::new(p.clone()).unwrap();
            let amps = CVector::from_fn(3, |i, _| {
                Complex64::from_polar(p[i].sqrt(), rng.gen::<f64>() * 6.28)
            });
            let state = PureState::normalized(amps).unwrap();
            let f_quad = fidelity_quadratic(&g, &point).unwrap();
            let f_chan = ch.to_channel().unwrap().fidelity(&state).unwrap();
            assert!((f_quad - f_chan).abs() < 1e-12, "{f_quad} vs {f_chan}");
        }
    }

    #[test]
    fn weight_swap_qubit_minimum_closed_form() {
        for i in 0..=10 {
            let p = i as f64 / 10.0;
            let g = gram_matrix(&weight_swap_qubit_channel(p).unwrap());
            let min = schur_min_fidelity(&g).unwrap();
            let expected = (1.0 + 2.0 * (p * (1.0 - p)).sqrt()) / 2.0;
            assert!((min.f_min - expected).abs() < 1e-9, "p={p}: {} vs {expected}", min.f_min);
        }
    }

    #[test]
    fn weight_swap_identity_point_has_unit_minimum() {
        let g = gram_matrix(&weight_swap_qubit_channel(0.5).unwrap());
        let min = schur_min_fidelity(&g).unwrap();
        assert_relative_eq!(min.f_min, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn projector_channel_minimum_is_uniform_point() {
        let eigs = CMatrix::from_fn(2, 2, |j, i| if j == i { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let g = gram_matrix(&SchurChannel::new(eigs).unwrap());
        let min = schur_min_fidelity(&g).unwrap();
        assert_relative_eq!(min.f_min, 0.5, epsilon = 1e-14);
        assert_eq!(min.location, MinimumLocation::Interior);
        assert_relative_eq!(min.p_star.coords()[0], 0.5, epsilon = 1e-12);
        let state = min_fidelity_state(&min.p_star);
        assert_relative_eq!(state.amplitudes()[0].re, 0.5f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn minimum_is_lower_bound_of_sampled_fidelities() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for &(d, m) in &[(2usize, 2usize), (3, 2), (3, 3), (4, 3)] {
            let ch = random_schur(d, m, &mut rng);
            let g = gram_matrix(&ch);
            let min = schur_min_fidelity(&g).unwrap();
            let dist = sample_fidelities(&ch.to_channel().unwrap(), 20_000, 7).unwrap();
            assert!(
                min.f_min <= dist.min() + 1e-9,
                "exact {} above sampled minimum {}",
                min.f_min,
                dist.min()
            );
            // the state promised by the minimizer attains the value
            let state = min_fidelity_state(&min.p_star);
            let f = ch.to_channel().unwrap().fidelity(&state).unwrap();
            assert!((f - min.f_min).abs() < 1e-10, "state fidelity {f} vs {}", min.f_min);
        }
    }

    #[test]
    fn lagrange_multiplier_consistency_at_interior_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut seen_interior = 0;
        for _ in 0..40 {
            let ch = random_schur(3, 3, &mut rng);
            let g = gram_matrix(&ch);
            let min = schur_min_fidelity(&g).unwrap();
            if min.location != MinimumLocation::Interior {
                continue;
            }
            seen_interior += 1;
            let mu = 2.0 * min.f_min;
            for i in 0..3 {
                let gp: f64 = (0..3).map(|j| g.matrix()[(i, j)] * min.p_star.coords()[j]).sum();
                assert!((2.0 * gp - mu).abs() < 1e-8, "row {i}: {} vs {mu}", 2.0 * gp);
            }
        }
        assert!(seen_interior > 0, "no interior case sampled");
    }

    #[test]
    fn face_enumeration_is_permutation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let ch = random_schur(4, 2, &mut rng);
        let g = gram_matrix(&ch);
        let min = schur_min_fidelity(&g).unwrap();
        // reverse-permute rows/columns
        let d = 4;
        let perm: Vec<usize> = (0..d).rev().collect();
        let gp = DMatrix::from_fn(d, d, |r, c| g.matrix()[(perm[r], perm[c])]);
        let min_p = schur_min_fidelity(&GramMatrix::new(gp).unwrap()).unwrap();
        assert!((min.f_min - min_p.f_min).abs() < 1e-12);
    }

    #[test]
    fn max_fidelity_is_always_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let ch = random_schur(3, 2, &mut rng);
            let g = gram_matrix(&ch);
            let (fmax, p) = schur_max_fidelity(&g);
            assert_relative_eq!(fmax, 1.0);
            assert_relative_eq!(fidelity_quadratic(&g, &p).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn dimension_guard_rejects_large_gram() {
        let g = GramMatrix::new(DMatrix::identity(21, 21)).unwrap();
        assert!(matches!(
            schur_min_fidelity(&g),
            Err(Error::DimensionTooLarge { .. })
        ));
    }

    #[test]
    fn schur_from_channel_requires_diagonal_kraus() {
        let k = linalg::cmatrix_from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]);
        let ch = ChannelSpec::new(vec![k]).unwrap();
        assert!(SchurChannel::from_channel(&ch).is_err());
    }

    #[test]
    fn qutrit_weight_swap_is_trace_preserving() {
        for &(p, q) in &[(0.0, 0.0), (0.3, 0.3), (0.7, 1.0), (1.0, 0.5)] {
            let ch = weight_swap_qutrit_channel(p, q).unwrap();
            ch.to_channel().unwrap();
        }
    }
}
