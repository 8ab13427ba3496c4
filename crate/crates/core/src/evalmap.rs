//! Partition-of-unity evaluation map on the local model: `C^n` with its
//! coordinate hyperplanes, moment maps `mu_i = |z_i|^2 / 2`, cutoffs
//! `f` (decreasing) and `g` (increasing), and the map
//! `chi_i = f(mu_i) / sum_j f(mu_j)` taking the link of the hyperplane
//! arrangement onto the standard simplex.
//!
//! Numerical checks: the simplex coordinates sum to one by construction,
//! samples from each open plumbing piece land in the right open cell,
//! finite-difference Poisson brackets of the `chi_i` vanish, and the
//! evaluation map covers the open simplex (fullness).

use crate::par;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EvalMapError {
    #[error("cutoff scale must satisfy 0 < epsilon <= 1, got {0}")]
    BadEpsilon(f64),
    #[error("link level must be negative, got {0}")]
    BadLinkLevel(f64),
    #[error("dimension must be at least 1")]
    BadDimension,
    #[error("point is outside the plumbing neighbourhood (all cutoffs vanish)")]
    OutsideNeighbourhood,
    #[error("direction has a vanishing coordinate; the ray misses the link")]
    RayMissesLink,
    #[error("subset J = {0:?} is not a valid subset of 1..={1}")]
    BadSubset(Vec<usize>, usize),
}

/// The local model `C^n` with cutoff scale `epsilon` and link level
/// `epsilon_prime < 0`: the link is the level set
/// `sum_i log g(mu_i) = epsilon_prime`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LocalModel {
    pub n: usize,
    pub epsilon: f64,
    pub epsilon_prime: f64,
}

impl LocalModel {
    pub fn new(n: usize, epsilon: f64, epsilon_prime: f64) -> Result<Self, EvalMapError> {
        if n == 0 {
            return Err(EvalMapError::BadDimension);
        }
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(EvalMapError::BadEpsilon(epsilon));
        }
        if epsilon_prime >= 0.0 {
            return Err(EvalMapError::BadLinkLevel(epsilon_prime));
        }
        Ok(LocalModel {
            n,
            epsilon,
            epsilon_prime,
        })
    }

    /// Defaults: `epsilon = 1`, `epsilon_prime = -n`.
    pub fn with_dimension(n: usize) -> Result<Self, EvalMapError> {
        LocalModel::new(n, 1.0, -(n as f64))
    }

    pub fn moment(&self, z: &[Complex]) -> Vec<f64> {
        z.iter().map(|c| 0.5 * c.norm_sq()).collect()
    }
}

/// Complex number as a plain pair; enough for the sampling done here.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub fn new(re: f64, im: f64) -> Self {
        Complex { re, im }
    }

    pub fn norm_sq(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn scale(&self, t: f64) -> Complex {
        Complex::new(self.re * t, self.im * t)
    }
}

/// `C^infinity` step: 0 for `t <= 0`, 1 for `t >= 1`, strictly increasing
/// in between, with all derivatives vanishing at both ends.
fn smooth_step(t: f64) -> f64 {
    let sigma = |s: f64| if s <= 0.0 { 0.0 } else { (-1.0 / s).exp() };
    let a = sigma(t);
    let b = sigma(1.0 - t);
    a / (a + b)
}

/// Increasing cutoff: `g(x) = x` on `[0, epsilon/3]`, `g = 1` for
/// `x >= epsilon`, smooth and strictly increasing on `[0, epsilon]`
/// (a smoothstep-blended bridge between the identity and the plateau).
pub fn cutoff_g(x: f64, epsilon: f64) -> f64 {
    if x <= epsilon / 3.0 {
        return x;
    }
    if x >= epsilon {
        return 1.0;
    }
    let t = (x - epsilon / 3.0) / (2.0 * epsilon / 3.0);
    let s = smooth_step(t);
    (1.0 - s) * x + s
}

/// Decreasing cutoff: `f = 1` for `x <= 0`, `f = 0` for `x >= epsilon`,
/// smooth and strictly decreasing on `[0, epsilon)`.
pub fn cutoff_f(x: f64, epsilon: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x >= epsilon {
        return 0.0;
    }
    1.0 - smooth_step(x / epsilon)
}

/// Simplex-valued coordinates: barycentric coordinates summing to one
/// exactly (the last entry is defined by the complement).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplexPoint {
    pub coords: Vec<f64>,
}

impl SimplexPoint {
    fn from_weights(weights: &[f64]) -> Result<Self, EvalMapError> {
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(EvalMapError::OutsideNeighbourhood);
        }
        let mut coords: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let head: f64 = coords[..coords.len() - 1].iter().sum();
        let last = coords.len() - 1;
        coords[last] = 1.0 - head;
        Ok(SimplexPoint { coords })
    }

    pub fn sum(&self) -> f64 {
        self.coords.iter().sum()
    }

    /// Indices with strictly positive coordinate (the open cell).
    pub fn support(&self) -> Vec<usize> {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0.0)
            .map(|(i, _)| i)
            .collect()
    }
}

/// The evaluation map `chi_i(z) = f(mu_i) / sum_j f(mu_j)`.
pub fn chi(m: &LocalModel, z: &[Complex]) -> Result<SimplexPoint, EvalMapError> {
    let mu = m.moment(z);
    let weights: Vec<f64> = mu.iter().map(|&x| cutoff_f(x, m.epsilon)).collect();
    SimplexPoint::from_weights(&weights)
}

/// Value of the link-defining function `sum_i log g(mu_i)`.
pub fn link_function(m: &LocalModel, z: &[Complex]) -> f64 {
    m.moment(z)
        .iter()
        .map(|&x| cutoff_g(x, m.epsilon).ln())
        .sum()
}

/// Scale a direction onto the link by a radial root solve; the returned
/// point satisfies the level equation to (better than) 1e-10.
pub fn project_to_link(m: &LocalModel, direction: &[Complex]) -> Result<Vec<Complex>, EvalMapError> {
    if direction.iter().any(|c| c.norm_sq() == 0.0) {
        return Err(EvalMapError::RayMissesLink);
    }
    let value = |t: f64| -> f64 {
        let z: Vec<Complex> = direction.iter().map(|c| c.scale(t)).collect();
        link_function(m, &z) - m.epsilon_prime
    };
    let mut lo = 1e-12;
    let mut hi = 1.0;
    while value(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(EvalMapError::RayMissesLink);
        }
    }
    while value(lo) > 0.0 {
        lo *= 0.5;
        if lo < 1e-300 {
            return Err(EvalMapError::RayMissesLink);
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if value(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    Ok(direction.iter().map(|c| c.scale(t)).collect())
}

fn random_direction(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex> {
    (0..n)
        .map(|_| {
            // Box-Muller; rejection keeps coordinates away from zero
            loop {
                let u: f64 = rng.random_range(1e-12..1.0);
                let v: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                let r = (-2.0 * u.ln()).sqrt();
                let c = Complex::new(r * v.cos(), r * v.sin());
                if c.norm_sq() > 1e-6 {
                    return c;
                }
            }
        })
        .collect()
}

/// Seeded samples on the link.
pub fn link_sample(m: &LocalModel, count: usize, seed: u64) -> Result<Vec<Vec<Complex>>, EvalMapError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dirs: Vec<Vec<Complex>> = (0..count).map(|_| random_direction(&mut rng, m.n)).collect();
    let projected = par::map(&dirs, |d| project_to_link(m, d));
    projected.into_iter().collect()
}

/// Inverse of the increasing cutoff on `[0, epsilon]` by bisection.
fn cutoff_g_inverse(target: f64, epsilon: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, epsilon);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cutoff_g(mid, epsilon) > target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Samples on the link lying in the open piece of the subset `J` of
/// 0-based coordinate indices: every `mu_i` with `i` in `J` sits strictly
/// below the cutoff scale and the rest strictly above, so exactly the
/// `chi_i` with `i` in `J` are nonzero.
///
/// The level `epsilon_prime` is split over the `J` coordinates as
/// `y_i = epsilon_prime * w_i` with `w` a random point of the open
/// simplex (boundary-biased so that the image covers corner regions of
/// the cell), and `mu_i = g^{-1}(e^{y_i})`.
pub fn link_sample_in_piece(
    m: &LocalModel,
    j: &[usize],
    count: usize,
    seed: u64,
) -> Result<Vec<Vec<Complex>>, EvalMapError> {
    if j.is_empty() || j.iter().any(|&i| i >= m.n) {
        return Err(EvalMapError::BadSubset(j.to_vec(), m.n));
    }
    let jset: BTreeSet<usize> = j.iter().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weight_sets: Vec<Vec<f64>> = Vec::with_capacity(count);
    let mut phase_sets: Vec<Vec<f64>> = Vec::with_capacity(count);
    let mut outside_mus: Vec<Vec<f64>> = Vec::with_capacity(count);
    for _ in 0..count {
        // exponentials raised to a random power: power 1 is uniform on the
        // simplex, higher powers concentrate near its boundary
        let power = [1.0, 2.0, 4.0, 8.0][rng.random_range(0..4)];
        let raw: Vec<f64> = (0..jset.len())
            .map(|_| {
                let u: f64 = rng.random_range(1e-12..1.0);
                (-u.ln()).powf(power)
            })
            .collect();
        let total: f64 = raw.iter().sum();
        weight_sets.push(raw.iter().map(|e| (e / total).max(1e-300)).collect());
        phase_sets.push(
            (0..m.n)
                .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
                .collect(),
        );
        outside_mus.push(
            (0..m.n)
                .map(|_| m.epsilon * rng.random_range(1.01..2.0))
                .collect(),
        );
    }
    let indices: Vec<usize> = (0..count).collect();
    let jvec: Vec<usize> = jset.iter().copied().collect();
    let build = |&k: &usize| -> Vec<Complex> {
        let w = &weight_sets[k];
        (0..m.n)
            .map(|i| {
                let mu = match jvec.iter().position(|&ji| ji == i) {
                    Some(pos) => cutoff_g_inverse((m.epsilon_prime * w[pos]).exp(), m.epsilon),
                    None => outside_mus[k][i],
                };
                let r = (2.0 * mu).sqrt();
                let phase = phase_sets[k][i];
                Complex::new(r * phase.cos(), r * phase.sin())
            })
            .collect()
    };
    Ok(par::map(&indices, build))
}

/// Finite-difference estimate of the Poisson bracket `{a, b}` with the
/// standard symplectic structure (`q_k = Re z_k`, `p_k = Im z_k`).
pub fn poisson_bracket<F, G>(a: F, b: G, z: &[Complex], h: f64) -> f64
where
    F: Fn(&[Complex]) -> f64,
    G: Fn(&[Complex]) -> f64,
{
    let n = z.len();
    let mut acc = 0.0;
    for k in 0..n {
        let mut zq_p = z.to_vec();
        zq_p[k].re += h;
        let mut zq_m = z.to_vec();
        zq_m[k].re -= h;
        let mut zp_p = z.to_vec();
        zp_p[k].im += h;
        let mut zp_m = z.to_vec();
        zp_m[k].im -= h;
        let da_dq = (a(&zq_p) - a(&zq_m)) / (2.0 * h);
        let da_dp = (a(&zp_p) - a(&zp_m)) / (2.0 * h);
        let db_dq = (b(&zq_p) - b(&zq_m)) / (2.0 * h);
        let db_dp = (b(&zp_p) - b(&zp_m)) / (2.0 * h);
        acc += da_dq * db_dp - da_dp * db_dq;
    }
    acc
}

/// Maximum over distinct pairs `(i, j)` of the bracket `{chi_i, chi_j}`
/// at `z`, plus the brackets of each `chi_i` against `prod_k g(mu_k)`.
/// All the functions involved depend only on the moment values, so the
/// analytic value is zero.
pub fn poisson_check(m: &LocalModel, z: &[Complex]) -> Result<f64, EvalMapError> {
    chi(m, z)?; // point must be in the neighbourhood
    let h = 1e-5;
    let chi_i = |i: usize| {
        let model = *m;
        move |w: &[Complex]| -> f64 {
            let mu = model.moment(w);
            let weights: Vec<f64> = mu.iter().map(|&x| cutoff_f(x, model.epsilon)).collect();
            let total: f64 = weights.iter().sum();
            weights[i] / total
        }
    };
    let product_g = |w: &[Complex]| -> f64 {
        m.moment(w)
            .iter()
            .map(|&x| cutoff_g(x, m.epsilon))
            .product()
    };
    let mut worst: f64 = 0.0;
    for i in 0..m.n {
        for j in i + 1..m.n {
            worst = worst.max(poisson_bracket(chi_i(i), chi_i(j), z, h).abs());
        }
        worst = worst.max(poisson_bracket(chi_i(i), product_g, z, h).abs());
    }
    Ok(worst)
}

/// Control for the bracket estimator: `{Re z_1, Im z_1} = 1`.
pub fn poisson_control(z: &[Complex]) -> f64 {
    poisson_bracket(|w| w[0].re, |w| w[0].im, z, 1e-5)
}

/// Batch Poisson check over seeded link samples; returns the worst bracket.
pub fn poisson_batch(m: &LocalModel, count: usize, seed: u64) -> Result<f64, EvalMapError> {
    let samples = link_sample(m, count, seed)?;
    let worsts = par::map(&samples, |z| poisson_check(m, z));
    let mut worst: f64 = 0.0;
    for w in worsts {
        worst = worst.max(w?);
    }
    Ok(worst)
}

/// Sequential variant of [`poisson_batch`].
pub fn poisson_batch_seq(m: &LocalModel, count: usize, seed: u64) -> Result<f64, EvalMapError> {
    let samples = link_sample(m, count, seed)?;
    let worsts = par::map_seq(&samples, |z| poisson_check(m, z));
    let mut worst: f64 = 0.0;
    for w in worsts {
        worst = worst.max(w?);
    }
    Ok(worst)
}

/// Coverage of the open cell of `J` by evaluation-map images of samples
/// from the corresponding open piece of the link: the fraction of cells
/// of a barycentric grid that are hit. `grid` is the subdivision count
/// per barycentric coordinate, so a 1-cell gets `grid` cells and a
/// 2-cell gets `grid^2`.
pub fn fullness_check(
    m: &LocalModel,
    j: &[usize],
    grid: usize,
    samples: usize,
    seed: u64,
) -> Result<f64, EvalMapError> {
    if j.is_empty() || j.iter().any(|&i| i >= m.n) {
        return Err(EvalMapError::BadSubset(j.to_vec(), m.n));
    }
    if j.len() == 1 {
        // the cell is a single point; it is hit by any sample
        return Ok(1.0);
    }
    let points = link_sample_in_piece(m, j, samples, seed)?;
    let jvec: Vec<usize> = j.to_vec();
    let keys = par::map(&points, |z| {
        let sp = chi(m, z).expect("sample lies in the neighbourhood");
        // barycentric cell key over the first |J| - 1 coordinates
        let key: Vec<usize> = jvec[..jvec.len() - 1]
            .iter()
            .map(|&i| {
                let c = sp.coords[i].clamp(0.0, 1.0 - 1e-15);
                (c * grid as f64).floor() as usize
            })
            .collect();
        key
    });
    let hit: BTreeSet<Vec<usize>> = keys.into_iter().collect();
    let total = count_simplex_cells(grid, jvec.len() - 1);
    Ok(hit.len() as f64 / total as f64)
}

/// Number of admissible barycentric grid keys for a `dim`-dimensional
/// cell: tuples in `{0..grid-1}^dim` with coordinate sum < grid.
fn count_simplex_cells(grid: usize, dim: usize) -> usize {
    fn rec(grid: usize, dim: usize, budget: usize) -> usize {
        if dim == 0 {
            return 1;
        }
        (0..budget).map(|v| rec(grid, dim - 1, budget - v)).sum()
    }
    rec(grid, dim, grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn cutoff_g_cases() {
        let eps = 0.9;
        assert_eq!(cutoff_g(eps / 4.0, eps), eps / 4.0);
        assert_eq!(cutoff_g(2.0 * eps, eps), 1.0);
        assert!(cutoff_g(0.4 * eps, eps) < cutoff_g(0.6 * eps, eps));
        // strictly increasing on [0, eps]
        let mut prev = -1.0;
        for i in 0..=100 {
            let x = eps * i as f64 / 100.0;
            let v = cutoff_g(x, eps);
            assert!(v > prev, "x = {x}");
            prev = v;
        }
        // C^1 across the joins, by symmetric differences
        for x0 in [eps / 3.0, eps] {
            let h = 1e-6;
            let left = (cutoff_g(x0, eps) - cutoff_g(x0 - h, eps)) / h;
            let right = (cutoff_g(x0 + h, eps) - cutoff_g(x0, eps)) / h;
            assert!((left - right).abs() < 1e-3, "kink at {x0}: {left} vs {right}");
        }
    }

    #[test]
    fn cutoff_f_cases() {
        let eps = 0.8;
        assert_eq!(cutoff_f(-1.0, eps), 1.0);
        assert_eq!(cutoff_f(2.0 * eps, eps), 0.0);
        assert!(cutoff_f(0.3 * eps, eps) > cutoff_f(0.7 * eps, eps));
        let mut prev = 2.0;
        for i in 0..=100 {
            let x = eps * i as f64 / 100.0 * 0.999;
            let v = cutoff_f(x, eps);
            assert!(v < prev || i == 0, "x = {x}");
            prev = v;
        }
    }

    #[test]
    fn chi_vertex_and_midpoint() {
        let m = LocalModel::with_dimension(3).unwrap();
        // mu_1 = 0, others above the cutoff: vertex e_1
        let z = vec![c(0.0, 0.0), c(2.0, 0.0), c(0.0, 2.0)];
        let sp = chi(&m, &z).unwrap();
        assert_eq!(sp.coords, vec![1.0, 0.0, 0.0]);
        // mu_1 = mu_2 below cutoff, mu_3 above: midpoint of the edge
        let z = vec![c(0.5, 0.0), c(0.0, 0.5), c(2.0, 0.0)];
        let sp = chi(&m, &z).unwrap();
        assert!((sp.coords[0] - 0.5).abs() < 1e-15);
        assert!((sp.coords[1] - 0.5).abs() < 1e-15);
        assert_eq!(sp.coords[2], 0.0);
        assert_eq!(sp.sum(), 1.0);
    }

    #[test]
    fn chi_outside_neighbourhood_errors() {
        let m = LocalModel::with_dimension(2).unwrap();
        let z = vec![c(3.0, 0.0), c(0.0, 3.0)];
        assert_eq!(chi(&m, &z), Err(EvalMapError::OutsideNeighbourhood));
    }

    #[test]
    fn simplex_sum_is_exact() {
        let m = LocalModel::with_dimension(4).unwrap();
        let samples = link_sample(&m, 200, 3).unwrap();
        for z in &samples {
            let sp = chi(&m, z).unwrap();
            assert_eq!(sp.sum(), 1.0, "representation-level exact sum");
            for &v in &sp.coords {
                assert!((-1e-12..=1.0 + 1e-12).contains(&v));
            }
        }
    }

    #[test]
    fn link_samples_satisfy_level_equation() {
        let m = LocalModel::with_dimension(3).unwrap();
        for z in link_sample(&m, 100, 7).unwrap() {
            assert!((link_function(&m, &z) - m.epsilon_prime).abs() < 1e-10);
        }
    }

    #[test]
    fn one_dimensional_link_is_a_circle() {
        let m = LocalModel::new(1, 1.0, -1.0).unwrap();
        // solve g(mu) = e^{eps'} by bisection, independently
        let target = m.epsilon_prime.exp();
        let (mut lo, mut hi) = (0.0, m.epsilon);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if cutoff_g(mid, m.epsilon) > target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mu_expected = 0.5 * (lo + hi);
        for z in link_sample(&m, 20, 1).unwrap() {
            let mu = 0.5 * z[0].norm_sq();
            assert!((mu - mu_expected).abs() < 1e-9);
        }
    }

    #[test]
    fn symmetric_two_dim_direction() {
        let m = LocalModel::with_dimension(2).unwrap();
        // mu_1 = mu_2 solves 2 log g(mu) = eps'
        let target = (m.epsilon_prime / 2.0).exp();
        let (mut lo, mut hi) = (0.0, m.epsilon);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if cutoff_g(mid, m.epsilon) > target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mu_expected = 0.5 * (lo + hi);
        let z = project_to_link(&m, &[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!((0.5 * z[0].norm_sq() - mu_expected).abs() < 1e-9);
        assert!((0.5 * z[1].norm_sq() - mu_expected).abs() < 1e-9);
    }

    #[test]
    fn open_cell_membership() {
        let m = LocalModel::with_dimension(3).unwrap();
        let j = vec![0, 2];
        for z in link_sample_in_piece(&m, &j, 300, 11).unwrap() {
            let sp = chi(&m, &z).unwrap();
            assert_eq!(sp.support(), j, "support must be exactly J");
            for &i in &j {
                assert!(sp.coords[i] > 0.0);
            }
        }
    }

    #[test]
    fn poisson_brackets_vanish() {
        let m = LocalModel::with_dimension(3).unwrap();
        let worst = poisson_batch(&m, 50, 0).unwrap();
        assert!(worst < 1e-6, "worst bracket {worst}");
        let seq = poisson_batch_seq(&m, 50, 0).unwrap();
        assert_eq!(worst, seq);
    }

    #[test]
    fn poisson_control_is_unit() {
        let z = vec![c(0.3, 0.4), c(0.5, -0.2)];
        let control = poisson_control(&z);
        assert!((control - 1.0).abs() < 0.01, "control {control}");
    }

    #[test]
    fn torus_invariance_of_chi() {
        let m = LocalModel::with_dimension(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for z in link_sample(&m, 50, 9).unwrap() {
            let sp = chi(&m, &z).unwrap();
            let rotated: Vec<Complex> = z
                .iter()
                .map(|w| {
                    let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                    Complex::new(
                        w.re * phase.cos() - w.im * phase.sin(),
                        w.re * phase.sin() + w.im * phase.cos(),
                    )
                })
                .collect();
            let sp_rot = chi(&m, &rotated).unwrap();
            for (a, b) in sp.coords.iter().zip(sp_rot.coords.iter()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fullness_on_edge_and_triangle() {
        let m = LocalModel::with_dimension(2).unwrap();
        let coverage = fullness_check(&m, &[0, 1], 20, 10_000, 0).unwrap();
        assert!(coverage >= 0.95, "edge coverage {coverage}");

        let m3 = LocalModel::with_dimension(3).unwrap();
        let coverage = fullness_check(&m3, &[0, 1, 2], 4, 10_000, 0).unwrap();
        assert!(coverage >= 0.95, "triangle coverage {coverage}");

        // singleton: the cell is a point
        assert_eq!(fullness_check(&m3, &[1], 20, 10, 0).unwrap(), 1.0);
    }

    #[test]
    fn vertex_neighbourhoods_are_hit() {
        let m = LocalModel::with_dimension(2).unwrap();
        let points = link_sample_in_piece(&m, &[0, 1], 4000, 0).unwrap();
        let high = points
            .iter()
            .filter(|z| chi(&m, z).unwrap().coords[0] > 0.99)
            .count();
        assert!(high > 0, "no samples near the vertex");
    }

    #[test]
    fn simplex_cell_counts() {
        assert_eq!(count_simplex_cells(20, 1), 20);
        assert_eq!(count_simplex_cells(4, 2), 10);
        assert_eq!(count_simplex_cells(3, 2), 6);
    }

    #[test]
    fn model_validation() {
        assert!(LocalModel::new(0, 1.0, -1.0).is_err());
        assert!(LocalModel::new(2, 0.0, -1.0).is_err());
        assert!(LocalModel::new(2, 1.5, -1.0).is_err());
        assert!(LocalModel::new(2, 1.0, 0.5).is_err());
    }
}
