//! Joint numerical range machinery: expectation vectors, numerical radius,
//! Crawford number and shadow sampling.
//!
//! For a collection of Hermitian operators `H_1..H_n`, the joint numerical
//! range is the set of vectors `v(psi) = (<psi|H_1|psi>, ..., <psi|H_n|psi>)`
//! over unit states. The numerical radius `w` and Crawford number `c` are the
//! supremum and infimum of `|v|`. Squares of `w` and `c` over the
//! Hermitian/anti-Hermitian split of a channel's Kraus operators are the
//! extreme operation fidelities.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{self, haar_state, ChannelSpec, PureState};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};

/// Hermiticity tolerance for collection members.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Ordered list of equally sized Hermitian operators.
#[derive(Debug, Clone)]
pub struct HermitianCollection {
    ops: Vec<CMatrix>,
}

impl HermitianCollection {
    pub fn new(ops: Vec<CMatrix>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::InvalidDimension("empty operator collection".into()));
        }
        let dim = ops[0].nrows();
        for (i, op) in ops.iter().enumerate() {
            if op.nrows() != dim || op.ncols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "operator {} is {}x{}, expected {}x{}",
                    i,
                    op.nrows(),
                    op.ncols(),
                    dim,
                    dim
                )));
            }
            let dev = linalg::hermiticity_deviation(op);
            if dev > HERMITIAN_TOL {
                return Err(Error::NotHermitian {
                    max_dev: dev,
                    tol: HERMITIAN_TOL,
                });
            }
        }
        Ok(HermitianCollection { ops })
    }

    /// Collection of the `2m` Hermitian/anti-Hermitian parts of a channel's
    /// Kraus operators, with numerically zero parts dropped (they contribute
    /// nothing to any expectation vector).
    pub fn from_channel_split(channel: &ChannelSpec) -> Self {
        let ops: Vec<CMatrix> = channel
            .split_collection()
            .into_iter()
            .filter(|op| linalg::max_abs(op) > 1e-14)
            .collect();
        if ops.is_empty() {
            // all-zero split cannot happen for a trace-preserving channel,
            // but keep the type total
            return HermitianCollection {
                ops: vec![CMatrix::zeros(channel.dim(), channel.dim())],
            };
        }
        HermitianCollection { ops }
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.ops[0].nrows()
    }
}

/// Joint expectation vector `(<psi|H_1|psi>, ..., <psi|H_n|psi>)`.
pub fn joint_expectation(coll: &HermitianCollection, state: &PureState) -> Result<Vec<f64>> {
    if state.dim() != coll.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state dimension {} does not match operator dimension {}",
            state.dim(),
            coll.dim()
        )));
    }
    Ok(coll
        .ops
        .iter()
        .map(|h| linalg::expectation(h, state.amplitudes()))
        .collect())
}

/// Controls for the multi-start optimizer on the state sphere.
#[derive(Debug, Clone)]
pub struct OptimizerOptions {
    /// Number of random restarts.
    pub restarts: usize,
    /// Convergence tolerance on the change of the squared-norm objective.
    pub tol: f64,
    /// Iteration cap per restart.
    pub max_iters: usize,
    /// Seed for the restart starting points.
    pub seed: u64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        OptimizerOptions {
            restarts: 32,
            tol: 1e-10,
            max_iters: 2000,
            seed: 0x5eed_0f1d,
        }
    }
}

/// Best value found by the optimizer together with convergence diagnostics.
#[derive(Debug, Clone)]
pub struct ExtremumOutcome {
    /// The extremal value of `|v(psi)|` (not squared).
    pub value: f64,
    /// State attaining the reported value.
    pub state: PureState,
    /// False when restarts failed to corroborate the best value within 1e-6.
    pub converged: bool,
    /// Number of restarts landing within 1e-6 of the best value.
    pub agreeing_restarts: usize,
    /// Spread of the restart values (best to worst).
    pub spread: f64,
}

#[derive(Clone, Copy, PartialEq)]
enum Goal {
    Maximize,
    Minimize,
}

/// Squared-norm objective `g(psi) = |v(psi)|^2` and its expectation vector.
fn objective(ops: &[CMatrix], psi: &CVector) -> (f64, Vec<f64>) {
    let v: Vec<f64> = ops.iter().map(|h| psi.dotc(&(h * psi)).re).collect();
    (v.iter().map(|q| q * q).sum(), v)
}

/// Projected gradient ascent/descent of `g` on the unit sphere with Armijo
/// backtracking. The Riemannian gradient at a unit state is
/// `2 (M psi - g psi)` with `M = sum_i v_i H_i`.
fn optimize_from(
    ops: &[CMatrix],
    start: CVector,
    goal: Goal,
    tol: f64,
    max_iters: usize,
) -> (f64, CVector) {
    let sign = match goal {
        Goal::Maximize => 1.0,
        Goal::Minimize => -1.0,
    };
    let mut psi = start.normalize();
    let (mut g, mut v) = objective(ops, &psi);
    let mut step = 0.5;
    for _ in 0..max_iters {
        let mut m_psi = CVector::zeros(psi.len());
        for (h, &q) in ops.iter().zip(&v) {
            m_psi += (h * &psi).scale(q);
        }
        let grad = (m_psi - psi.scale(g)).scale(2.0);
        let grad_norm_sq: f64 = grad.iter().map(|z| z.norm_sqr()).sum();
        if grad_norm_sq < 1e-24 {
            break;
        }
        let mut improved = false;
        while step > 1e-18 {
            let cand = (&psi + grad.scale(sign * step)).normalize();
            let (g_new, v_new) = objective(ops, &cand);
            if sign * (g_new - g) >= 1e-4 * step * grad_norm_sq {
                let delta = (g_new - g).abs();
                psi = cand;
                g = g_new;
                v = v_new;
                step = (step * 1.5).min(1e3);
                improved = true;
                // relative stop keeps resolving minima that approach zero,
                // where the square root back to |v| amplifies any residual
                if delta < tol * g.max(1e-14) {
                    return polish(ops, psi, g, goal);
                }
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    polish(ops, psi, g, goal)
}

/// Eigenvector polish: stationary points satisfy `M(psi) psi = g psi`, so
/// re-solving the eigenproblem of `M(psi)` sharpens the optimizer output to
/// machine precision. Steps are only accepted when they improve the goal.
fn polish(ops: &[CMatrix], mut psi: CVector, mut g: f64, goal: Goal) -> (f64, CVector) {
    for _ in 0..60 {
        let (_, v) = objective(ops, &psi);
        let mut m = CMatrix::zeros(psi.len(), psi.len());
        for (h, &q) in ops.iter().zip(&v) {
            m += h.scale(q);
        }
        let (vals, vecs) = linalg::hermitian_eigen(&m);
        let cand = match goal {
            Goal::Maximize => vecs.column(vals.len() - 1).into_owned(),
            Goal::Minimize => {
                // stay in the basin: take the eigenvector with the largest
                // overlap with the current state
                let mut best = 0;
                let mut best_overlap = 0.0;
                for k in 0..vals.len() {
                    let overlap = vecs.column(k).dotc(&psi).norm();
                    if overlap > best_overlap {
                        best_overlap = overlap;
                        best = k;
                    }
                }
                vecs.column(best).into_owned()
            }
        };
        let (g_new, _) = objective(ops, &cand);
        let better = match goal {
            Goal::Maximize => g_new > g,
            Goal::Minimize => g_new < g,
        };
        if !better || (g_new - g).abs() < 1e-15 {
            if better {
                psi = cand;
                g = g_new;
            }
            break;
        }
        psi = cand;
        g = g_new;
    }
    (g, psi)
}

fn multistart(coll: &HermitianCollection, goal: Goal, options: &OptimizerOptions) -> ExtremumOutcome {
    let d = coll.dim();
    let restarts = options.restarts.max(1);
    let results: Vec<(f64, CVector)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(channel::derive_stream_seed(options.seed, r as u64));
            let start = haar_state(d, &mut rng)
                .expect("positive dimension")
                .amplitudes()
                .clone();
            optimize_from(coll.ops(), start, goal, options.tol, options.max_iters)
        })
        .collect();
    let better = |a: f64, b: f64| match goal {
        Goal::Maximize => a > b,
        Goal::Minimize => a < b,
    };
    let mut best = results[0].clone();
    let mut worst = results[0].0;
    for r in &results[1..] {
        if better(r.0, best.0) {
            best = r.clone();
        }
        if better(worst, r.0) {
            worst = r.0;
        }
    }
    let agreeing = results.iter().filter(|r| (r.0 - best.0).abs() <= 1e-6).count();
    ExtremumOutcome {
        value: best.0.max(0.0).sqrt(),
        state: PureState::normalized(best.1).expect("optimizer state is non-zero"),
        converged: restarts == 1 || agreeing >= 2,
        agreeing_restarts: agreeing,
        spread: (best.0 - worst).abs(),
    }
}

/// Exact single-operator shortcut: extreme expectation values are extreme
/// eigenvalues, so `w = max |eig|` and `c` is the distance of the spectrum
/// from zero.
fn single_operator_outcome(h: &CMatrix, goal: Goal) -> ExtremumOutcome {
    let (vals, vecs) = linalg::hermitian_eigen(h);
    let n = vals.len();
    let (value, col) = match goal {
        Goal::Maximize => {
            if vals[n - 1].abs() >= vals[0].abs() {
                (vals[n - 1].abs(), n - 1)
            } else {
                (vals[0].abs(), 0)
            }
        }
        Goal::Minimize => {
            if vals[0] > 0.0 {
                (vals[0], 0)
            } else if vals[n - 1] < 0.0 {
                (vals[n - 1].abs(), n - 1)
            } else {
                // spectrum straddles zero: c = 0, attained by mixing the
                // outermost eigenvectors
                let lo = vals[0];
                let hi = vals[n - 1];
                let t = hi / (hi - lo);
                let mix = vecs.column(0).scale(t.sqrt()) + vecs.column(n - 1).scale((1.0 - t).sqrt());
                let state = PureState::normalized(mix).expect("non-zero mix");
                return ExtremumOutcome {
                    value: 0.0,
                    state,
                    converged: true,
                    agreeing_restarts: 0,
                    spread: 0.0,
                };
            }
        }
    };
    ExtremumOutcome {
        value,
        state: PureState::normalized(vecs.column(col).into_owned()).expect("eigenvector"),
        converged: true,
        agreeing_restarts: 0,
        spread: 0.0,
    }
}

/// Joint numerical radius `w = sup |v(psi)|` by multi-start projected ascent
/// (exact eigenvalue shortcut for a single operator).
pub fn numerical_radius(coll: &HermitianCollection, options: &OptimizerOptions) -> ExtremumOutcome {
    if coll.len() == 1 {
        return single_operator_outcome(&coll.ops()[0], Goal::Maximize);
    }
    multistart(coll, Goal::Maximize, options)
}

/// Crawford number `c = inf |v(psi)|` by multi-start projected descent
/// (exact eigenvalue shortcut for a single operator).
pub fn crawford_number(coll: &HermitianCollection, options: &OptimizerOptions) -> ExtremumOutcome {
    if coll.len() == 1 {
        return single_operator_outcome(&coll.ops()[0], Goal::Minimize);
    }
    multistart(coll, Goal::Minimize, options)
}

/// Extreme operation fidelities of a channel.
#[derive(Debug, Clone)]
pub struct ExtremalFidelity {
    pub f_min: f64,
    pub f_max: f64,
    /// State attaining the minimum / maximum fidelity.
    pub min_state: PureState,
    pub max_state: PureState,
    pub converged: bool,
}

/// `F_min = c^2` and `F_max = w^2` of the channel's split Kraus collection.
pub fn extremal_fidelity(channel: &ChannelSpec, options: &OptimizerOptions) -> ExtremalFidelity {
    let coll = HermitianCollection::from_channel_split(channel);
    let radius = numerical_radius(&coll, options);
    let crawford = crawford_number(&coll, options);
    ExtremalFidelity {
        f_min: (crawford.value * crawford.value).clamp(0.0, 1.0),
        f_max: (radius.value * radius.value).clamp(0.0, 1.0),
        min_state: crawford.state,
        max_state: radius.state,
        converged: radius.converged && crawford.converged,
    }
}

/// Joint-expectation vectors of `n` Haar-random states.
#[derive(Debug, Clone)]
pub struct ShadowCloud {
    points: Vec<Vec<f64>>,
    seed: u64,
    count: usize,
    workers: usize,
}

impl ShadowCloud {
    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    /// Dimension of the embedding space (number of operators).
    pub fn arity(&self) -> usize {
        self.points.first().map_or(0, |p| p.len())
    }

    /// CSV export: header `r_1,..,r_n`, one row per point, 17 significant
    /// digits.
    pub fn to_csv(&self) -> String {
        let n = self.arity();
        let mut out = String::new();
        let header: Vec<String> = (1..=n).map(|i| format!("r_{i}")).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for p in &self.points {
            let row: Vec<String> = p.iter().map(|x| format!("{x:.16e}")).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Samples the joint numerical shadow: expectation vectors of Haar states,
/// chunked across workers under the usual seed-derivation contract.
pub fn shadow_sample_with_workers(
    coll: &HermitianCollection,
    n: usize,
    seed: u64,
    workers: usize,
) -> Result<ShadowCloud> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample count must be at least 1".into()));
    }
    let workers = workers.max(1);
    let base = n / workers;
    let rem = n % workers;
    let sizes: Vec<usize> = (0..workers).map(|i| base + usize::from(i < rem)).collect();
    let chunks: Vec<Vec<Vec<f64>>> = sizes
        .par_iter()
        .enumerate()
        .map(|(i, &size)| {
            let mut rng = ChaCha8Rng::seed_from_u64(channel::derive_stream_seed(seed, i as u64));
            (0..size)
                .map(|_| {
                    let state = haar_state(coll.dim(), &mut rng).expect("positive dimension");
                    coll.ops
                        .iter()
                        .map(|h| linalg::expectation(h, state.amplitudes()))
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut points = Vec::with_capacity(n);
    for c in chunks {
        points.extend(c);
    }
    Ok(ShadowCloud {
        points,
        seed,
        count: n,
        workers,
    })
}

/// Single-worker variant of [`shadow_sample_with_workers`].
pub fn shadow_sample(coll: &HermitianCollection, n: usize, seed: u64) -> Result<ShadowCloud> {
    shadow_sample_with_workers(coll, n, seed, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::sample_fidelities;
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sigma_x() -> CMatrix {
        linalg::cmatrix_from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]])
    }

    fn sigma_z() -> CMatrix {
        linalg::cdiag(&[c(1.0, 0.0), c(-1.0, 0.0)])
    }

    fn plus_state() -> PureState {
        PureState::normalized(CVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)])).unwrap()
    }

    #[test]
    fn joint_expectation_of_identity() {
        let coll = HermitianCollection::new(vec![linalg::identity(2)]).unwrap();
        let v = joint_expectation(&coll, &plus_state()).unwrap();
        assert_relative_eq!(v[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn joint_expectation_of_pauli_z_on_basis_state() {
        let coll = HermitianCollection::new(vec![sigma_z()]).unwrap();
        let v = joint_expectation(&coll, &PureState::basis(2, 0)).unwrap();
        assert_relative_eq!(v[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn joint_expectation_of_pauli_pair_on_plus() {
        let coll = HermitianCollection::new(vec![sigma_x(), sigma_z()]).unwrap();
        let v = joint_expectation(&coll, &plus_state()).unwrap();
        assert_relative_eq!(v[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(v[1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn collection_rejects_non_hermitian() {
        let m = linalg::cmatrix_from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]]);
        assert!(matches!(
            HermitianCollection::new(vec![m]),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn radius_of_sigma_z_is_one() {
        let coll = HermitianCollection::new(vec![sigma_z()]).unwrap();
        let out = numerical_radius(&coll, &OptimizerOptions::default());
        assert_relative_eq!(out.value, 1.0, epsilon = 1e-12);
        assert!(out.converged);
    }

    #[test]
    fn crawford_of_sigma_z_is_zero() {
        let coll = HermitianCollection::new(vec![sigma_z()]).unwrap();
        let out = crawford_number(&coll, &OptimizerOptions::default());
        assert_relative_eq!(out.value, 0.0, epsilon = 1e-12);
        // the reported state must attain the value
        let v = joint_expectation(&coll, &out.state).unwrap();
        assert_relative_eq!(v[0], 0.0, epsilon = 1e-10);
    }

    #[test]
    fn crawford_of_positive_spectrum() {
        let coll = HermitianCollection::new(vec![linalg::cdiag(&[c(1.0, 0.0), c(2.0, 0.0)])]).unwrap();
        let out = crawford_number(&coll, &OptimizerOptions::default());
        assert_relative_eq!(out.value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn phase_gate_split_has_unit_radius_and_cos_crawford() {
        for &alpha in &[0.4, 1.3, 2.0, std::f64::consts::FRAC_PI_2, 3.0] {
            let u = linalg::cdiag(&[c(1.0, 0.0), Complex64::from_polar(1.0, alpha)]);
            let ch = ChannelSpec::from_unitary(u).unwrap();
            let coll = HermitianCollection::from_channel_split(&ch);
            let opts = OptimizerOptions::default();
            let w = numerical_radius(&coll, &opts);
            let cnum = crawford_number(&coll, &opts);
            assert_relative_eq!(w.value, 1.0, epsilon = 1e-9);
            assert_relative_eq!(cnum.value, (alpha / 2.0).cos().abs(), epsilon = 1e-9);
        }
    }

    #[test]
    fn optimizer_matches_eigen_shortcut_for_single_operator() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..5 {
            // random 3x3 Hermitian
            let g = CMatrix::from_fn(3, 3, |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
            let h = (&g + g.adjoint()).scale(0.5);
            let coll_multi = HermitianCollection::new(vec![h.clone(), CMatrix::zeros(3, 3)]).unwrap();
            let coll_single = HermitianCollection::new(vec![h]).unwrap();
            let opts = OptimizerOptions::default();
            let exact_w = numerical_radius(&coll_single, &opts).value;
            let exact_c = crawford_number(&coll_single, &opts).value;
            // the two-member collection takes the iterative path
            let iter_w = numerical_radius(&coll_multi, &opts).value;
            let iter_c = crawford_number(&coll_multi, &opts).value;
            assert_relative_eq!(iter_w, exact_w, epsilon = 1e-9);
            assert_relative_eq!(iter_c, exact_c, epsilon = 1e-9);
        }
    }

    #[test]
    fn random_pair_radius_matches_grid_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let g1 = CMatrix::from_fn(3, 3, |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
        let g2 = CMatrix::from_fn(3, 3, |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
        let h1 = (&g1 + g1.adjoint()).scale(0.5);
        let h2 = (&g2 + g2.adjoint()).scale(0.5);
        let coll = HermitianCollection::new(vec![h1, h2]).unwrap();
        let opts = OptimizerOptions::default();
        let w = numerical_radius(&coll, &opts);
        let cnum = crawford_number(&coll, &opts);
        // brute-force oracle over Haar states
        let mut grid_max = 0.0f64;
        let mut grid_min = f64::INFINITY;
        for _ in 0..1_000_000 {
            let s = haar_state(3, &mut rng).unwrap();
            let v = joint_expectation(&coll, &s).unwrap();
            let norm = (v[0] * v[0] + v[1] * v[1]).sqrt();
            grid_max = grid_max.max(norm);
            grid_min = grid_min.min(norm);
        }
        assert!(w.value >= grid_max - 1e-12, "optimizer below grid: {} < {}", w.value, grid_max);
        assert!((w.value - grid_max).abs() < 1e-3, "w {} vs grid {}", w.value, grid_max);
        assert!(cnum.value <= grid_min + 1e-12);
        assert!((cnum.value - grid_min).abs() < 1e-3, "c {} vs grid {}", cnum.value, grid_min);
    }

    #[test]
    fn extremal_fidelity_identity_channel() {
        let ch = ChannelSpec::new(vec![linalg::identity(2)]).unwrap();
        let ext = extremal_fidelity(&ch, &OptimizerOptions::default());
        assert_relative_eq!(ext.f_min, 1.0, epsilon = 1e-12);
        assert_relative_eq!(ext.f_max, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn extremal_fidelity_bit_flip_channel() {
        let k1 = linalg::cmatrix_from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]]);
        let k2 = linalg::cmatrix_from_rows(&[vec![c(0.0, 0.0), c(0.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]);
        let ch = ChannelSpec::new(vec![k1, k2]).unwrap();
        let ext = extremal_fidelity(&ch, &OptimizerOptions::default());
        assert_relative_eq!(ext.f_min, 0.0, epsilon = 1e-9);
        assert_relative_eq!(ext.f_max, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn extremal_fidelity_projection_channel() {
        let k1 = linalg::cdiag(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let k2 = linalg::cdiag(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let ch = ChannelSpec::new(vec![k1, k2]).unwrap();
        let ext = extremal_fidelity(&ch, &OptimizerOptions::default());
        assert_relative_eq!(ext.f_min, 0.5, epsilon = 1e-9);
        assert_relative_eq!(ext.f_max, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn sampled_norms_stay_between_crawford_and_radius() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let ch = channel::random_channel(3, 2, &mut rng);
        let coll = HermitianCollection::from_channel_split(&ch);
        let opts = OptimizerOptions::default();
        let w = numerical_radius(&coll, &opts).value;
        let cnum = crawford_number(&coll, &opts).value;
        for _ in 0..10_000 {
            let s = haar_state(3, &mut rng).unwrap();
            let v = joint_expectation(&coll, &s).unwrap();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(norm <= w + 1e-9, "norm {norm} exceeds radius {w}");
            assert!(norm >= cnum - 1e-9, "norm {norm} below crawford {cnum}");
        }
    }

    #[test]
    fn sampled_fidelities_stay_within_extremal_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let ch = channel::random_channel(3, 3, &mut rng);
        let ext = extremal_fidelity(&ch, &OptimizerOptions::default());
        let dist = sample_fidelities(&ch, 10_000, 123).unwrap();
        assert!(dist.min() >= ext.f_min - 1e-9);
        assert!(dist.max() <= ext.f_max + 1e-9);
    }

    #[test]
    fn shadow_of_identity_collapses_to_a_point() {
        let coll = HermitianCollection::new(vec![linalg::identity(3)]).unwrap();
        let cloud = shadow_sample(&coll, 100, 3).unwrap();
        for p in cloud.points() {
            assert_relative_eq!(p[0], 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn shadow_of_sigma_z_is_uniform_on_segment() {
        let coll = HermitianCollection::new(vec![sigma_z()]).unwrap();
        let cloud = shadow_sample(&coll, 100_000, 21).unwrap();
        let mut xs: Vec<f64> = cloud.points().iter().map(|p| p[0]).collect();
        xs.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        let d = crate::stats::ks_one_sample_sorted(&xs, |x| ((x + 1.0) / 2.0).clamp(0.0, 1.0)).unwrap();
        assert!(d < 0.01, "KS to uniform on [-1,1]: {d}");
    }

    #[test]
    fn shadow_of_qutrit_phase_split_fills_triangle() {
        let (alpha, beta) = (1.0, 4.0);
        let u = linalg::cdiag(&[
            c(1.0, 0.0),
            Complex64::from_polar(1.0, alpha),
            Complex64::from_polar(1.0, beta),
        ]);
        let ch = ChannelSpec::from_unitary(u).unwrap();
        let coll = HermitianCollection::from_channel_split(&ch);
        assert_eq!(coll.len(), 2);
        let cloud = shadow_sample(&coll, 20_000, 5).unwrap();
        // all points inside the triangle hull of (1, e^{ia}, e^{ib}), and the
        // corners are approached
        let verts = [(1.0, 0.0), (alpha.cos(), alpha.sin()), (beta.cos(), beta.sin())];
        let sign = |p: (f64, f64), a: (f64, f64), b: (f64, f64)| -> f64 {
            (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0)
        };
        let mut max_vertex_proximity = [f64::INFINITY; 3];
        for p in cloud.points() {
            let pt = (p[0], p[1]);
            let d1 = sign(pt, verts[0], verts[1]);
            let d2 = sign(pt, verts[1], verts[2]);
            let d3 = sign(pt, verts[2], verts[0]);
            let has_neg = d1 < -1e-9 || d2 < -1e-9 || d3 < -1e-9;
            let has_pos = d1 > 1e-9 || d2 > 1e-9 || d3 > 1e-9;
            assert!(!(has_neg && has_pos), "point outside the spectral triangle");
            for (k, v) in verts.iter().enumerate() {
                let dist = ((pt.0 - v.0).powi(2) + (pt.1 - v.1).powi(2)).sqrt();
                max_vertex_proximity[k] = max_vertex_proximity[k].min(dist);
            }
        }
        for d in max_vertex_proximity {
            assert!(d < 0.15, "a vertex of the triangle is never approached: {d}");
        }
    }

    #[test]
    fn shadow_cloud_is_unitarily_covariant_in_distribution() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let g1 = CMatrix::from_fn(3, 3, |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
        let h1 = (&g1 + g1.adjoint()).scale(0.5);
        let u = channel::haar_unitary(3, &mut rng);
        let rotated = u.adjoint() * &h1 * &u;
        let coll = HermitianCollection::new(vec![h1]).unwrap();
        let coll_rot = HermitianCollection::new(vec![rotated]).unwrap();
        let a = shadow_sample(&coll, 50_000, 1).unwrap();
        let b = shadow_sample(&coll_rot, 50_000, 2).unwrap();
        let xs: Vec<f64> = a.points().iter().map(|p| p[0]).collect();
        let ys: Vec<f64> = b.points().iter().map(|p| p[0]).collect();
        let d = crate::stats::ks_two_sample(&xs, &ys).unwrap();
        assert!(d < 0.02, "shadow changed under unitary conjugation: KS = {d}");
    }

    #[test]
    fn shadow_csv_has_header_and_rows() {
        let coll = HermitianCollection::new(vec![sigma_x(), sigma_z()]).unwrap();
        let cloud = shadow_sample(&coll, 3, 0).unwrap();
        let csv = cloud.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "r_1,r_2");
        assert_eq!(lines.count(), 3);
    }
}
