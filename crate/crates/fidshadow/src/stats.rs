//! Statistical helpers: Kolmogorov-Smirnov distances, the two-sample energy
//! test with permutation p-values, and the order-statistics transform that
//! maps uniform simplex points to i.i.d. uniforms.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact two-sample Kolmogorov-Smirnov statistic from sorted samples.
pub fn ks_two_sample_sorted(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::EmptySample);
    }
    let (n, m) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        let xv = xs[i];
        let yv = ys[j];
        let t = xv.min(yv);
        while i < xs.len() && xs[i] <= t {
            i += 1;
        }
        while j < ys.len() && ys[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok(d)
}

/// Two-sample KS with internal sorting.
pub fn ks_two_sample(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let mut a = xs.to_vec();
    let mut b = ys.to_vec();
    a.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
    ks_two_sample_sorted(&a, &b)
}

/// One-sample KS statistic of sorted samples against a CDF.
pub fn ks_one_sample_sorted<F: Fn(f64) -> f64>(xs: &[f64], cdf: F) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let c = cdf(x);
        d = d.max((c - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - c).abs());
    }
    Ok(d)
}

/// Asymptotic two-sample KS critical value at level `alpha`:
/// `c(alpha) * sqrt((n + m) / (n m))` with `c = sqrt(-ln(alpha/2)/2)`.
pub fn ks_critical_value(n: usize, m: usize, alpha: f64) -> f64 {
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Outcome of the two-sample energy test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnergyTestReport {
    /// Energy statistic `n_eff * E` on the (sub)samples actually compared.
    pub statistic: f64,
    /// Permutation p-value with add-one smoothing.
    pub p_value: f64,
    /// Points per group entering the distance matrix.
    pub subsample: usize,
    pub permutations: usize,
    pub seed: u64,
}

impl EnergyTestReport {
    pub fn passes(&self, level: f64) -> bool {
        self.p_value > level
    }
}

/// Two-sample energy test between point clouds in `R^k`.
///
/// The energy distance `E = 2 E|X-Y| - E|X-X'| - E|Y-Y'|` vanishes iff the
/// distributions agree; the null is calibrated by permuting group labels over
/// a precomputed pooled distance matrix. Groups larger than `subsample` are
/// truncated (points are i.i.d., so heads are unbiased subsamples).
pub fn energy_two_sample(
    xs: &[Vec<f64>],
    ys: &[Vec<f64>],
    subsample: usize,
    permutations: usize,
    seed: u64,
) -> Result<EnergyTestReport> {
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::EmptySample);
    }
    let nx = xs.len().min(subsample);
    let ny = ys.len().min(subsample);
    let pooled: Vec<&[f64]> = xs[..nx].iter().chain(ys[..ny].iter()).map(|p| p.as_slice()).collect();
    let total = nx + ny;
    let mut dist = vec![0.0f64; total * total];
    for i in 0..total {
        for j in (i + 1)..total {
            let d = euclidean(pooled[i], pooled[j]);
            dist[i * total + j] = d;
            dist[j * total + i] = d;
        }
    }

    let total_sum: f64 = {
        let mut acc = 0.0;
        for i in 0..total {
            for j in (i + 1)..total {
                acc += dist[i * total + j];
            }
        }
        acc
    };

    // within-group sums determine the statistic: s_xy = total - s_xx - s_yy
    let stat_for = |x_sorted: &[usize], y_sorted: &[usize]| -> f64 {
        let mut sxx = 0.0;
        for (a, &i) in x_sorted.iter().enumerate() {
            let row = &dist[i * total..(i + 1) * total];
            for &j in &x_sorted[a + 1..] {
                sxx += row[j];
            }
        }
        let mut syy = 0.0;
        for (a, &i) in y_sorted.iter().enumerate() {
            let row = &dist[i * total..(i + 1) * total];
            for &j in &y_sorted[a + 1..] {
                syy += row[j];
            }
        }
        let sxy = total_sum - sxx - syy;
        let (nxf, nyf) = (nx as f64, ny as f64);
        let e = 2.0 * sxy / (nxf * nyf) - 2.0 * sxx / (nxf * nxf) - 2.0 * syy / (nyf * nyf);
        (nxf * nyf / (nxf + nyf)) * e
    };

    let xs_idx: Vec<usize> = (0..nx).collect();
    let ys_idx: Vec<usize> = (nx..total).collect();
    let observed = stat_for(&xs_idx, &ys_idx);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indices: Vec<usize> = (0..total).collect();
    let mut exceed = 0usize;
    for _ in 0..permutations {
        indices.shuffle(&mut rng);
        let mut x_lab = indices[..nx].to_vec();
        let mut y_lab = indices[nx..].to_vec();
        x_lab.sort_unstable();
        y_lab.sort_unstable();
        if stat_for(&x_lab, &y_lab) >= observed {
            exceed += 1;
        }
    }
    let p_value = (exceed + 1) as f64 / (permutations + 1) as f64;
    Ok(EnergyTestReport {
        statistic: observed,
        p_value,
        subsample: nx.min(ny),
        permutations,
        seed,
    })
}

/// Maps a point of the probability simplex (d nonnegative coordinates
/// summing to 1) to `d - 1` i.i.d. uniforms on [0, 1].
///
/// The partial sums of a uniform simplex point are distributed as the order
/// statistics `u_(1) <= ... <= u_(d-1)` of d-1 independent uniforms, and
/// `(u_(k)/u_(k+1))^k` are i.i.d. uniform. Useful for chi-square uniformity
/// checks in equal-volume cells.
pub fn simplex_to_iid_uniform(x: &[f64]) -> Vec<f64> {
    let d = x.len();
    if d <= 1 {
        return Vec::new();
    }
    let mut partial = Vec::with_capacity(d - 1);
    let mut acc = 0.0;
    for &xi in &x[..d - 1] {
        acc += xi;
        partial.push(acc);
    }
    let mut out = Vec::with_capacity(d - 1);
    for k in 0..d - 1 {
        let hi = if k + 1 < d - 1 { partial[k + 1] } else { 1.0 };
        let ratio = if hi > 0.0 { (partial[k] / hi).clamp(0.0, 1.0) } else { 0.0 };
        out.push(ratio.powi(k as i32 + 1));
    }
    out
}

/// Pearson chi-square statistic for observed counts against equal expected
/// counts. Returns `(statistic, degrees_of_freedom)`.
pub fn chi_square_uniform(counts: &[usize]) -> (f64, usize) {
    let k = counts.len();
    let n: usize = counts.iter().sum();
    let expected = n as f64 / k as f64;
    let stat = counts
        .iter()
        .map(|&c| {
            let diff = c as f64 - expected;
            diff * diff / expected
        })
        .sum();
    (stat, k.saturating_sub(1))
}
