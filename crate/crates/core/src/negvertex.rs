//! Critical-point analysis of the plurisubharmonic potential on the
//! negative vertex `{ xy = u1 + u2 + 1 }` in `C^2 x (C*)^2`.
//!
//! Coordinates: `x = X e^{i alpha}`, `y = Y e^{i beta}`, `Phi = alpha +
//! beta`, `u_j = e^{R_j + i theta_j}`. For a constant `c` in
//! `(-1, -ln 2)` the potential is
//!
//! `psi = (X^2 + Y^2 + sum_j (R_j - c)^2) / 2`,
//!
//! constrained to the variety. Its critical locus consists of three
//! isolated points with `x = y = 0` and a circle of points with
//! `X = Y = sqrt(2 e^{R(c)} + 1)`, `R(c) = c - W(e^c)` with `W` the
//! Lambert function. Everything here is verified numerically: the five
//! critical-point equations, the constraint, Hessian positivity transverse
//! to the curve `{x = y = 0}`, and the gradient flow on that curve.

use crate::par;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NegVertexError {
    #[error("lambert_w requires a nonnegative argument, got {0}")]
    NegativeArgument(f64),
    #[error("c = {0} is outside the admissible interval (-1, -ln 2)")]
    BadConstant(f64),
    #[error("root finding did not converge: {0}")]
    NoConvergence(String),
    #[error("starting point ({0}, {1}) is not in the amoeba")]
    NotInAmoeba(f64, f64),
    #[error("gradient-flow step size collapsed at ({0}, {1})")]
    StepSizeCollapse(f64, f64),
}

/// Configuration: the constant `c` and the numerical tolerances.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct NegVertexConfig {
    pub c: f64,
    pub residual_tol: f64,
    pub lambert_tol: f64,
    pub flow_tol: f64,
}

impl Default for NegVertexConfig {
    fn default() -> Self {
        NegVertexConfig {
            c: -0.8,
            residual_tol: 1e-9,
            lambert_tol: 1e-12,
            flow_tol: 1e-6,
        }
    }
}

impl NegVertexConfig {
    pub fn with_c(c: f64) -> Result<Self, NegVertexError> {
        let cfg = NegVertexConfig {
            c,
            ..NegVertexConfig::default()
        };
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<(), NegVertexError> {
        if !(self.c > -1.0 && self.c < -std::f64::consts::LN_2) {
            return Err(NegVertexError::BadConstant(self.c));
        }
        Ok(())
    }
}

/// A point of the variety in the polar coordinates used throughout.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct WPoint {
    pub big_x: f64,
    pub big_y: f64,
    pub alpha: f64,
    pub beta: f64,
    pub r1: f64,
    pub theta1: f64,
    pub r2: f64,
    pub theta2: f64,
}

impl WPoint {
    pub fn phi(&self) -> f64 {
        self.alpha + self.beta
    }

    /// Complex constraint defect `x y - u1 - u2 - 1` as (re, im).
    pub fn constraint_defect(&self) -> (f64, f64) {
        let phi = self.phi();
        let xy = self.big_x * self.big_y;
        let re = xy * phi.cos()
            - 1.0
            - self.r1.exp() * self.theta1.cos()
            - self.r2.exp() * self.theta2.cos();
        let im = xy * phi.sin()
            - self.r1.exp() * self.theta1.sin()
            - self.r2.exp() * self.theta2.sin();
        (re, im)
    }

    /// Swap the two torus coordinates `(R1, theta1) <-> (R2, theta2)`.
    pub fn swapped(&self) -> WPoint {
        WPoint {
            r1: self.r2,
            theta1: self.theta2,
            r2: self.r1,
            theta2: self.theta1,
            ..*self
        }
    }

    pub fn psi(&self, c: f64) -> f64 {
        0.5 * (self.big_x * self.big_x
            + self.big_y * self.big_y
            + (self.r1 - c).powi(2)
            + (self.r2 - c).powi(2))
    }
}

/// Principal-branch Lambert W on `[0, inf)`: the inverse of `w e^w`.
/// Halley iteration from a log-based initial guess; the returned value
/// satisfies `|w e^w - x| <= tol * max(1, x)`.
pub fn lambert_w(x: f64) -> Result<f64, NegVertexError> {
    lambert_w_tol(x, 1e-12)
}

pub fn lambert_w_tol(x: f64, tol: f64) -> Result<f64, NegVertexError> {
    if x < 0.0 {
        return Err(NegVertexError::NegativeArgument(x));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let mut w = if x < std::f64::consts::E {
        x / (1.0 + x)
    } else {
        let l = x.ln();
        l - l.ln().max(0.0)
    };
    for _ in 0..50 {
        let ew = w.exp();
        let f = w * ew - x;
        if f.abs() <= tol * x.max(1.0) {
            return Ok(w);
        }
        let fp = ew * (w + 1.0);
        let fpp = ew * (w + 2.0);
        let step = f / (fp - f * fpp / (2.0 * fp));
        w -= step;
        if w < -1.0 {
            w = -0.999; // stay on the principal branch
        }
    }
    let f = w * w.exp() - x;
    if f.abs() <= tol * x.max(1.0) {
        Ok(w)
    } else {
        Err(NegVertexError::NoConvergence(format!(
            "lambert_w({x}) residual {f}"
        )))
    }
}

/// `R(c) = c - W(e^c)`: the common logarithm of `|u_j|` on the circle of
/// critical points. Solves `(R - c) e^{-(R - c)} = -e^c`.
pub fn big_r(c: f64) -> Result<f64, NegVertexError> {
    Ok(c - lambert_w(c.exp())?)
}

/// Solve `g(r1) = 0` where `r2 = ln(e^{r1} + 1)` and
/// `g(r1) = (r1 - c) e^{-(r1 - c)} + (r2 - c) e^{-(r2 - c)}`:
/// the saddle parameters `(a(c), b(c))`. Newton with a bisection
/// safeguard on a sign-change bracket.
pub fn saddle_parameters(c: f64) -> Result<(f64, f64), NegVertexError> {
    let g = |r1: f64| -> f64 {
        let r2 = (r1.exp() + 1.0).ln();
        (r1 - c) * (-(r1 - c)).exp() + (r2 - c) * (-(r2 - c)).exp()
    };
    // g(c) > 0; g decreases to -inf as r1 -> -inf
    let mut hi = c;
    let mut lo = c - 1.0;
    let mut tries = 0;
    while g(lo) > 0.0 {
        lo -= 1.0;
        tries += 1;
        if tries > 60 {
            return Err(NegVertexError::NoConvergence(
                "no sign change for the saddle equation".into(),
            ));
        }
    }
    if g(hi) <= 0.0 {
        return Err(NegVertexError::NoConvergence(
            "saddle bracket is invalid at r1 = c".into(),
        ));
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let gx = g(x);
        if gx.abs() < 1e-14 {
            break;
        }
        if gx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let h = 1e-7;
        let slope = (g(x + h) - g(x - h)) / (2.0 * h);
        let newton = x - gx / slope;
        x = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    let a = x;
    let b = (a.exp() + 1.0).ln();
    Ok((a, b))
}

/// Residuals of the five critical-point equations and the constraint at a
/// point with multipliers `(lambda, mu)`.
///
/// The equations come from differentiating the constrained functional:
/// `X = Y (lambda cos Phi + mu sin Phi)`, the symmetric equation for `Y`,
/// `0 = X Y (lambda sin Phi - mu cos Phi)`,
/// `R_j - c = -e^{R_j} (lambda cos theta_j + mu sin theta_j)` and
/// `lambda sin theta_j = mu cos theta_j`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Residuals {
    pub cp1: f64,
    pub cp2: f64,
    pub cp3: f64,
    pub cp4: [f64; 2],
    pub cp5: [f64; 2],
    pub constraint_re: f64,
    pub constraint_im: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        [
            self.cp1,
            self.cp2,
            self.cp3,
            self.cp4[0],
            self.cp4[1],
            self.cp5[0],
            self.cp5[1],
            self.constraint_re,
            self.constraint_im,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn to_vec(&self) -> Vec<f64> {
        vec![
            self.cp1,
            self.cp2,
            self.cp3,
            self.cp4[0],
            self.cp4[1],
            self.cp5[0],
            self.cp5[1],
            self.constraint_re,
            self.constraint_im,
        ]
    }
}

pub fn residuals(p: &WPoint, lambda: f64, mu: f64, cfg: &NegVertexConfig) -> Residuals {
    let phi = p.phi();
    let trig = lambda * phi.cos() + mu * phi.sin();
    let (c_re, c_im) = p.constraint_defect();
    let cp4 = |r: f64, th: f64| (r - cfg.c + r.exp() * (lambda * th.cos() + mu * th.sin())).abs();
    let cp5 = |th: f64| (lambda * th.sin() - mu * th.cos()).abs();
    Residuals {
        cp1: (p.big_x - p.big_y * trig).abs(),
        cp2: (p.big_y - p.big_x * trig).abs(),
        cp3: (p.big_x * p.big_y * (lambda * phi.sin() - mu * phi.cos())).abs(),
        cp4: [cp4(p.r1, p.theta1), cp4(p.r2, p.theta2)],
        cp5: [cp5(p.theta1), cp5(p.theta2)],
        constraint_re: c_re.abs(),
        constraint_im: c_im.abs(),
    }
}

/// Least-squares recovery of the multipliers from the equations that are
/// linear in `(lambda, mu)` (cp1, cp2 and both cp4). Minimum-norm solution
/// when the system is rank-deficient.
pub fn recover_multipliers(p: &WPoint, cfg: &NegVertexConfig) -> (f64, f64) {
    let phi = p.phi();
    let mut rows: Vec<([f64; 2], f64)> = Vec::new();
    rows.push(([p.big_y * phi.cos(), p.big_y * phi.sin()], p.big_x));
    rows.push(([p.big_x * phi.cos(), p.big_x * phi.sin()], p.big_y));
    for (r, th) in [(p.r1, p.theta1), (p.r2, p.theta2)] {
        rows.push(([-r.exp() * th.cos(), -r.exp() * th.sin()], r - cfg.c));
    }
    let a = nalgebra::DMatrix::from_fn(rows.len(), 2, |i, j| rows[i].0[j]);
    let b = nalgebra::DVector::from_fn(rows.len(), |i, _| rows[i].1);
    let svd = a.svd(true, true);
    let sol = svd.solve(&b, 1e-12).expect("svd solve");
    (sol[0], sol[1])
}

/// One point on the circle of critical points at phase `alpha`
/// (`beta = -alpha`, so `Phi = 0`).
pub fn circle_point(cfg: &NegVertexConfig, alpha: f64) -> Result<WPoint, NegVertexError> {
    let r = big_r(cfg.c)?;
    let radius = (2.0 * r.exp() + 1.0).sqrt();
    Ok(WPoint {
        big_x: radius,
        big_y: radius,
        alpha,
        beta: -alpha,
        r1: r,
        theta1: 0.0,
        r2: r,
        theta2: 0.0,
    })
}

/// The full critical-point report: the three isolated points, the circle
/// data, recovered multipliers and residuals.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriticalPointReport {
    pub c: f64,
    pub p1: WPoint,
    pub p2: WPoint,
    pub p3: WPoint,
    pub a: f64,
    pub b: f64,
    pub big_r: f64,
    pub circle_radius: f64,
    /// No critical circle with `Phi = pi` exists when this is true
    /// (`2 e^{R(c)} - 1 < 0`, which holds for all admissible `c`).
    pub phi_pi_excluded: bool,
    pub multipliers: Vec<(f64, f64)>,
    pub residuals: Vec<Residuals>,
    pub psi_values: Vec<f64>,
}

impl CriticalPointReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.max()).fold(0.0, f64::max)
    }
}

/// Compute and verify all critical points for the given configuration.
/// The report carries residuals for `P1`, `P2`, `P3` and a circle point at
/// `alpha = 0`.
pub fn critical_points(cfg: &NegVertexConfig) -> Result<CriticalPointReport, NegVertexError> {
    cfg.check()?;
    let ln2 = std::f64::consts::LN_2;
    let p1 = WPoint {
        big_x: 0.0,
        big_y: 0.0,
        alpha: 0.0,
        beta: 0.0,
        r1: -ln2,
        theta1: std::f64::consts::PI,
        r2: -ln2,
        theta2: std::f64::consts::PI,
    };
    let (a, b) = saddle_parameters(cfg.c)?;
    let p2 = WPoint {
        big_x: 0.0,
        big_y: 0.0,
        alpha: 0.0,
        beta: 0.0,
        r1: a,
        theta1: 0.0,
        r2: b,
        theta2: std::f64::consts::PI,
    };
    let p3 = p2.swapped();
    let r = big_r(cfg.c)?;
    let radius = (2.0 * r.exp() + 1.0).sqrt();
    let circle = circle_point(cfg, 0.0)?;

    let points = [p1, p2, p3, circle];
    let mut multipliers = Vec::new();
    let mut residual_list = Vec::new();
    let mut psi_values = Vec::new();
    for p in &points {
        let (lambda, mu) = recover_multipliers(p, cfg);
        residual_list.push(residuals(p, lambda, mu, cfg));
        multipliers.push((lambda, mu));
        psi_values.push(p.psi(cfg.c));
    }

    Ok(CriticalPointReport {
        c: cfg.c,
        p1,
        p2,
        p3,
        a,
        b,
        big_r: r,
        circle_radius: radius,
        phi_pi_excluded: 2.0 * r.exp() - 1.0 < 0.0,
        multipliers,
        residuals: residual_list,
        psi_values,
    })
}

/// Sweep `critical_points` over a grid of constants; returns the maximal
/// residual over the sweep and fails if any run misbehaves.
pub fn sweep_c(values: &[f64]) -> Result<f64, NegVertexError> {
    let reports = par::map(values, |&c| {
        NegVertexConfig::with_c(c).and_then(|cfg| critical_points(&cfg))
    });
    collect_sweep(reports)
}

/// Sequential variant of [`sweep_c`].
pub fn sweep_c_seq(values: &[f64]) -> Result<f64, NegVertexError> {
    let reports = par::map_seq(values, |&c| {
        NegVertexConfig::with_c(c).and_then(|cfg| critical_points(&cfg))
    });
    collect_sweep(reports)
}

fn collect_sweep(
    reports: Vec<Result<CriticalPointReport, NegVertexError>>,
) -> Result<f64, NegVertexError> {
    let mut worst: f64 = 0.0;
    for r in reports {
        let r = r?;
        worst = worst.max(r.max_residual());
        if !r.phi_pi_excluded {
            return Err(NegVertexError::NoConvergence(format!(
                "Phi = pi not excluded at c = {}",
                r.c
            )));
        }
    }
    Ok(worst)
}

/// Image of `u1` under the amoeba map of the line `u1 + u2 + 1 = 0`:
/// `(log |u1|, log |u2|)` with `u2 = -1 - u1`. `None` when `u1` is `0` or
/// `-1` (off the curve).
pub fn amoeba_image(u1_re: f64, u1_im: f64) -> Option<(f64, f64)> {
    let norm1 = (u1_re * u1_re + u1_im * u1_im).sqrt();
    if norm1 == 0.0 {
        return None;
    }
    let u2_re = -1.0 - u1_re;
    let u2_im = -u1_im;
    let norm2 = (u2_re * u2_re + u2_im * u2_im).sqrt();
    if norm2 == 0.0 {
        return None;
    }
    Some((norm1.ln(), norm2.ln()))
}

/// Sample the amoeba on a log-polar grid in `u1`: `resolution` values of
/// `R1` in `[-range, range]` times `2 * resolution` angles.
pub fn amoeba_sample(resolution: usize, range: f64) -> Vec<(f64, f64)> {
    let grid: Vec<(usize, usize)> = (0..resolution)
        .flat_map(|i| (0..2 * resolution).map(move |j| (i, j)))
        .collect();
    let points = par::map(&grid, |&(i, j)| {
        let r = -range + 2.0 * range * (i as f64 + 0.5) / resolution as f64;
        let th = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / (2.0 * resolution as f64);
        let u1 = (r.exp() * th.cos(), r.exp() * th.sin());
        amoeba_image(u1.0, u1.1)
    });
    points.into_iter().flatten().collect()
}

/// Sequential variant of [`amoeba_sample`].
pub fn amoeba_sample_seq(resolution: usize, range: f64) -> Vec<(f64, f64)> {
    let grid: Vec<(usize, usize)> = (0..resolution)
        .flat_map(|i| (0..2 * resolution).map(move |j| (i, j)))
        .collect();
    let points = par::map_seq(&grid, |&(i, j)| {
        let r = -range + 2.0 * range * (i as f64 + 0.5) / resolution as f64;
        let th = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / (2.0 * resolution as f64);
        let u1 = (r.exp() * th.cos(), r.exp() * th.sin());
        amoeba_image(u1.0, u1.1)
    });
    points.into_iter().flatten().collect()
}

/// Membership test for the amoeba of the line: the three triangle
/// inequalities on `(1, e^{R1}, e^{R2})`, with slack `tol`.
pub fn in_amoeba(r1: f64, r2: f64, tol: f64) -> bool {
    let (e1, e2) = (r1.exp(), r2.exp());
    e1 <= 1.0 + e2 + tol && e2 <= 1.0 + e1 + tol && 1.0 <= e1 + e2 + tol
}

/// Gradient-flow trace of `psi` restricted to the curve `{x = y = 0}`,
/// parametrized by `(R1, theta1)` through `u1 = e^{R1 + i theta1}`.
/// Starts from an amoeba point `(R1, R2)` (taking the upper lift) and
/// integrates downhill with adaptive step-doubling Runge-Kutta until the
/// gradient vanishes; records the `(R1, R2)` polyline.
pub fn flow_trace(
    start: (f64, f64),
    cfg: &NegVertexConfig,
) -> Result<Vec<(f64, f64)>, NegVertexError> {
    let (r1, r2) = start;
    if !in_amoeba(r1, r2, 1e-9) {
        return Err(NegVertexError::NotInAmoeba(r1, r2));
    }
    // lift: cos(theta1) from |1 + u1| = e^{R2}
    let cos_th = ((2.0 * r2).exp() - 1.0 - (2.0 * r1).exp()) / (2.0 * r1.exp());
    let cos_th = cos_th.clamp(-1.0, 1.0);
    let mut state = (r1, cos_th.acos());
    let c = cfg.c;

    let h_of = |r: f64, th: f64| -> f64 {
        // log |1 + e^{r + i th}|
        0.5 * (1.0 + 2.0 * r.exp() * th.cos() + (2.0 * r).exp()).ln()
    };
    let grad = |r: f64, th: f64| -> (f64, f64) {
        let d = 1.0 + 2.0 * r.exp() * th.cos() + (2.0 * r).exp();
        let h = 0.5 * d.ln();
        let dh_dr = (r.exp() * th.cos() + (2.0 * r).exp()) / d;
        let dh_dth = -r.exp() * th.sin() / d;
        let g_r = (r - c) + (h - c) * dh_dr;
        let g_th = (h - c) * dh_dth;
        (g_r, g_th)
    };
    let psi_of = |r: f64, th: f64| -> f64 {
        let h = h_of(r, th);
        0.5 * ((r - c).powi(2) + (h - c).powi(2))
    };

    let rk4 = |s: (f64, f64), dt: f64| -> (f64, f64) {
        let f = |p: (f64, f64)| {
            let g = grad(p.0, p.1);
            (-g.0, -g.1)
        };
        let k1 = f(s);
        let k2 = f((s.0 + 0.5 * dt * k1.0, s.1 + 0.5 * dt * k1.1));
        let k3 = f((s.0 + 0.5 * dt * k2.0, s.1 + 0.5 * dt * k2.1));
        let k4 = f((s.0 + dt * k3.0, s.1 + dt * k3.1));
        (
            s.0 + dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
            s.1 + dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
        )
    };

    let mut dt = 0.05;
    let mut trace = vec![(state.0, h_of(state.0, state.1))];
    for _ in 0..200_000 {
        let g = grad(state.0, state.1);
        let gnorm = (g.0 * g.0 + g.1 * g.1).sqrt();
        if gnorm < 1e-10 {
            break;
        }
        // step doubling: accept when one full step matches two half steps
        let full = rk4(state, dt);
        let half = rk4(rk4(state, 0.5 * dt), 0.5 * dt);
        let err = ((full.0 - half.0).powi(2) + (full.1 - half.1).powi(2)).sqrt();
        if err > 1e-8 {
            dt *= 0.5;
            if dt < 1e-14 {
                return Err(NegVertexError::StepSizeCollapse(state.0, state.1));
            }
            continue;
        }
        if psi_of(half.0, half.1) > psi_of(state.0, state.1) + 1e-12 {
            dt *= 0.5;
            if dt < 1e-14 {
                return Err(NegVertexError::StepSizeCollapse(state.0, state.1));
            }
            continue;
        }
        state = half;
        trace.push((state.0, h_of(state.0, state.1)));
        if err < 1e-10 {
            dt = (dt * 2.0).min(0.25);
        }
    }
    Ok(trace)
}

/// Critical points of `psi` restricted to the curve, in `(R1, theta1)`
/// coordinates: the minimum, then the two saddles.
pub fn curve_critical_points(cfg: &NegVertexConfig) -> Result<[(f64, f64); 3], NegVertexError> {
    let ln2 = std::f64::consts::LN_2;
    let pi = std::f64::consts::PI;
    let (a, b) = saddle_parameters(cfg.c)?;
    Ok([(-ln2, pi), (a, 0.0), (b, pi)])
}

/// Verdict of the Hessian checks at one of the isolated critical points.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct HessianVerdict {
    /// Smallest eigenvalue of the constrained Hessian restricted to the
    /// normal complement of the curve inside the tangent space of the
    /// variety (positive = the picture-proof restriction is justified).
    pub min_normal_eigenvalue: f64,
    /// Smallest eigenvalue along the curve itself.
    pub min_curve_eigenvalue: f64,
}

/// Finite-difference Hessian of the Lagrangian at the isolated critical
/// points, restricted (a) to the normal complement of the curve in the
/// tangent space of the variety and (b) to the curve directions.
///
/// Real coordinates: `(x_re, x_im, y_re, y_im, R1, theta1, R2, theta2)`;
/// Cartesian in `x, y` so the analysis is smooth at `x = y = 0`.
pub fn hessian_check(cfg: &NegVertexConfig) -> Result<Vec<HessianVerdict>, NegVertexError> {
    cfg.check()?;
    let report = critical_points(cfg)?;
    let mut out = Vec::new();
    for (idx, p) in [report.p1, report.p2, report.p3].iter().enumerate() {
        let (lambda, mu) = report.multipliers[idx];
        let c = cfg.c;
        let lagrangian = move |q: &[f64; 8]| -> f64 {
            let [xr, xi, yr, yi, r1, t1, r2, t2] = *q;
            let psi = 0.5
                * (xr * xr + xi * xi + yr * yr + yi * yi + (r1 - c).powi(2) + (r2 - c).powi(2));
            let xy_re = xr * yr - xi * yi;
            let xy_im = xr * yi + xi * yr;
            let g_re = xy_re - 1.0 - r1.exp() * t1.cos() - r2.exp() * t2.cos();
            let g_im = xy_im - r1.exp() * t1.sin() - r2.exp() * t2.sin();
            psi - lambda * g_re - mu * g_im
        };
        let q0 = [0.0, 0.0, 0.0, 0.0, p.r1, p.theta1, p.r2, p.theta2];
        let h = 1e-4;
        let mut hess = [[0.0f64; 8]; 8];
        for i in 0..8 {
            for j in i..8 {
                let mut qpp = q0;
                qpp[i] += h;
                qpp[j] += h;
                let mut qpm = q0;
                qpm[i] += h;
                qpm[j] -= h;
                let mut qmp = q0;
                qmp[i] -= h;
                qmp[j] += h;
                let mut qmm = q0;
                qmm[i] -= h;
                qmm[j] -= h;
                let val = (lagrangian(&qpp) - lagrangian(&qpm) - lagrangian(&qmp)
                    + lagrangian(&qmm))
                    / (4.0 * h * h);
                hess[i][j] = val;
                hess[j][i] = val;
            }
        }
        let hess_mat = nalgebra::DMatrix::from_fn(8, 8, |i, j| hess[i][j]);

        // constraint Jacobian at the point (x = y = 0): the xy terms
        // vanish, so dg only sees the u coordinates
        let (e1, s1, c1) = (p.r1.exp(), p.theta1.sin(), p.theta1.cos());
        let (e2, s2, c2) = (p.r2.exp(), p.theta2.sin(), p.theta2.cos());
        let dg = nalgebra::DMatrix::from_row_slice(
            2,
            8,
            &[
                0.0, 0.0, 0.0, 0.0, -e1 * c1, e1 * s1, -e2 * c2, e2 * s2, //
                0.0, 0.0, 0.0, 0.0, -e1 * s1, -e1 * c1, -e2 * s2, -e2 * c2,
            ],
        );
        // tangent of the curve {x = y = 0, u1 + u2 + 1 = 0}: du1 = -du2,
        // i.e. (dr2 + i dt2) = -(u1/u2) (dr1 + i dt1)
        let ratio = e1 / e2;
        let (cd, sd) = (
            (p.theta1 - p.theta2).cos(),
            (p.theta1 - p.theta2).sin(),
        );
        let curve = nalgebra::DMatrix::from_row_slice(
            8,
            2,
            &[
                0.0, 0.0, //
                0.0, 0.0, //
                0.0, 0.0, //
                0.0, 0.0, //
                1.0, 0.0, //
                0.0, 1.0, //
                -ratio * cd, ratio * sd, //
                -ratio * sd, -ratio * cd,
            ],
        );
        debug_assert!((&dg * &curve).amax() < 1e-9);

        // the kernel of dg splits as the four x, y directions plus the
        // curve directions, so the normal complement of the curve inside
        // the variety tangent space is exactly the x, y block
        let normal = nalgebra::DMatrix::from_fn(8, 4, |i, j| if i == j { 1.0 } else { 0.0 });
        debug_assert!((&dg * &normal).amax() < 1e-12);
        let restricted = normal.transpose() * &hess_mat * &normal;
        let sym = 0.5 * (&restricted + restricted.transpose());
        let min_normal = sym
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);

        let curve_restricted = curve.transpose() * &hess_mat * &curve;
        let sym_curve = 0.5 * (&curve_restricted + curve_restricted.transpose());
        let min_curve = sym_curve
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);

        out.push(HessianVerdict {
            min_normal_eigenvalue: min_normal,
            min_curve_eigenvalue: min_curve,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LN2: f64 = std::f64::consts::LN_2;
    const PI: f64 = std::f64::consts::PI;

    /// Bisection oracle for W, independent of the Halley path.
    fn lambert_bisect(x: f64) -> f64 {
        let (mut lo, mut hi) = (0.0f64, x.max(1.0) + 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid.exp() > x {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn lambert_w_values() {
        assert_eq!(lambert_w(0.0).unwrap(), 0.0);
        assert!((lambert_w(std::f64::consts::E).unwrap() - 1.0).abs() < 1e-12);
        // frozen from the bisection oracle
        let w1 = lambert_w(1.0).unwrap();
        assert!((w1 - 0.567_143_290_409_783_8).abs() < 1e-12);
        assert!((w1 - lambert_bisect(1.0)).abs() < 1e-10);
        assert!(lambert_w(-0.5).is_err());
    }

    #[test]
    fn lambert_w_identity_and_monotone_on_grid() {
        let mut prev = -1.0;
        for i in 0..=100 {
            let x = i as f64 * 0.37;
            let w = lambert_w(x).unwrap();
            assert!((w * w.exp() - x).abs() <= 1e-12 * x.max(1.0), "x = {x}");
            assert!(w > prev, "strictly increasing at x = {x}");
            prev = w;
        }
    }

    #[test]
    fn p1_is_exactly_critical() {
        let cfg = NegVertexConfig::default();
        let report = critical_points(&cfg).unwrap();
        let p1 = report.p1;
        assert_eq!(p1.big_x, 0.0);
        assert_eq!(p1.big_y, 0.0);
        assert!((p1.r1 + LN2).abs() < 1e-15);
        // constraint holds exactly: -1/2 - 1/2 + 1 = 0
        let (re, im) = p1.constraint_defect();
        assert!(re.abs() < 1e-15 && im.abs() < 1e-15);
        // recovered multipliers: lambda = -2(ln 2 + c), mu = 0
        let (lambda, mu) = report.multipliers[0];
        assert!((lambda - (-2.0 * (LN2 + cfg.c))).abs() < 1e-9);
        assert!(mu.abs() < 1e-9);
        assert!(report.residuals[0].max() < 1e-9);
    }

    #[test]
    fn saddle_points_solve_both_curve_equations() {
        let cfg = NegVertexConfig::default();
        let report = critical_points(&cfg).unwrap();
        let (a, b) = (report.a, report.b);
        assert!((a.exp() + 1.0 - b.exp()).abs() < 1e-9);
        let lhs = (a - cfg.c) * (-(a - cfg.c)).exp();
        let rhs = -(b - cfg.c) * (-(b - cfg.c)).exp();
        assert!((lhs - rhs).abs() < 1e-9);
        // P3 is P2 with the torus coordinates exchanged
        assert_eq!(report.p3.r1, report.p2.r2);
        assert_eq!(report.p3.theta1, report.p2.theta2);
        assert!(report.residuals[1].max() < 1e-9);
        assert!(report.residuals[2].max() < 1e-9);
        // a < c and b > 0 for admissible c
        assert!(a < cfg.c && b > 0.0);
    }

    #[test]
    fn circle_of_critical_points() {
        let cfg = NegVertexConfig::default();
        let report = critical_points(&cfg).unwrap();
        // radius formula sqrt(2 e^R + 1)
        assert!((report.circle_radius.powi(2) - (2.0 * report.big_r.exp() + 1.0)).abs() < 1e-12);
        // residuals at 16 phases with the proof's multipliers (1, 0)
        for k in 0..16 {
            let alpha = 2.0 * PI * k as f64 / 16.0;
            let p = circle_point(&cfg, alpha).unwrap();
            let res = residuals(&p, 1.0, 0.0, &cfg);
            assert!(res.max() < 1e-9, "phase {k}: {res:?}");
        }
        assert!(report.phi_pi_excluded, "no Phi = pi solutions");
    }

    #[test]
    fn psi_ordering_and_symmetry() {
        let cfg = NegVertexConfig::default();
        let report = critical_points(&cfg).unwrap();
        let psi1 = report.psi_values[0];
        let psi2 = report.psi_values[1];
        let psi3 = report.psi_values[2];
        assert!((psi2 - psi3).abs() < 1e-12, "swap symmetry");
        assert!(psi1 < psi2, "P1 is the minimum");
    }

    #[test]
    fn generic_point_is_not_critical() {
        let cfg = NegVertexConfig::default();
        let p = WPoint {
            big_x: 1.3,
            big_y: 0.4,
            alpha: 0.3,
            beta: 0.1,
            r1: 0.2,
            theta1: 0.5,
            r2: -0.1,
            theta2: 1.0,
        };
        let (lambda, mu) = recover_multipliers(&p, &cfg);
        assert!(residuals(&p, lambda, mu, &cfg).max() > 0.01);
    }

    #[test]
    fn amoeba_map_and_membership() {
        let (r1, r2) = amoeba_image(-0.5, 0.0).unwrap();
        assert!((r1 + LN2).abs() < 1e-15);
        assert!((r2 + LN2).abs() < 1e-15);
        // u1 -> 0 along the reals: R2 -> 0
        let (_, r2) = amoeba_image(-1e-9, 0.0).unwrap();
        assert!(r2.abs() < 1e-8);
        assert!(amoeba_image(0.0, 0.0).is_none());
        assert!(amoeba_image(-1.0, 0.0).is_none());
        for (r1, r2) in amoeba_sample(60, 4.0) {
            assert!(in_amoeba(r1, r2, 1e-9), "sampled point off the amoeba");
        }
        assert_eq!(amoeba_sample(40, 4.0), amoeba_sample_seq(40, 4.0));
    }

    #[test]
    fn flow_from_saddle_reaches_minimum() {
        let cfg = NegVertexConfig::default();
        let report = critical_points(&cfg).unwrap();
        // start near P2, nudged off the real axis (its downhill direction)
        let delta: f64 = 1e-3;
        let u1 = (report.a.exp() * delta.cos(), report.a.exp() * delta.sin());
        let start = amoeba_image(u1.0, u1.1).unwrap();
        let trace = flow_trace(start, &cfg).unwrap();
        let end = *trace.last().unwrap();
        assert!(
            (end.0 + LN2).abs() < 1e-6 && (end.1 + LN2).abs() < 1e-6,
            "flow ended at {end:?}"
        );
        // psi decreases monotonically along the trace
        let psi = |p: &(f64, f64)| 0.5 * ((p.0 - cfg.c).powi(2) + (p.1 - cfg.c).powi(2));
        for w in trace.windows(2) {
            assert!(psi(&w[1]) <= psi(&w[0]) + 1e-9);
        }
    }

    #[test]
    fn flow_from_minimum_is_constant() {
        let cfg = NegVertexConfig::default();
        let trace = flow_trace((-LN2, -LN2), &cfg).unwrap();
        assert!(trace.len() <= 2);
        let end = *trace.last().unwrap();
        assert!((end.0 + LN2).abs() < 1e-9 && (end.1 + LN2).abs() < 1e-9);
    }

    #[test]
    fn flow_from_far_tentacle_decreases_psi() {
        let cfg = NegVertexConfig::default();
        // on the diagonal tentacle: u1 large
        let start = amoeba_image(5.0, 0.2).unwrap();
        let trace = flow_trace(start, &cfg).unwrap();
        let psi = |p: &(f64, f64)| 0.5 * ((p.0 - cfg.c).powi(2) + (p.1 - cfg.c).powi(2));
        for w in trace.windows(2) {
            assert!(psi(&w[1]) <= psi(&w[0]) + 1e-9);
        }
    }

    #[test]
    fn off_amoeba_start_rejected() {
        let cfg = NegVertexConfig::default();
        assert!(matches!(
            flow_trace((3.0, -3.0), &cfg),
            Err(NegVertexError::NotInAmoeba(..))
        ));
    }

    #[test]
    fn hessian_positive_transverse_to_curve() {
        for c in [-0.8, -0.75] {
            let cfg = NegVertexConfig::with_c(c).unwrap();
            let verdicts = hessian_check(&cfg).unwrap();
            for (i, v) in verdicts.iter().enumerate() {
                assert!(v.min_normal_eigenvalue > 0.0, "point {i} at c = {c}: {v:?}");
            }
            // P2 is a saddle along the curve, P1 a minimum
            assert!(verdicts[1].min_curve_eigenvalue < 0.0);
            assert!(verdicts[0].min_curve_eigenvalue > 0.0);
        }
    }

    #[test]
    fn sweep_converges_on_the_admissible_interval() {
        let values: Vec<f64> = (0..30).map(|i| -0.99 + 0.29 * i as f64 / 29.0).collect();
        let worst = sweep_c(&values).unwrap();
        assert!(worst < 1e-9, "worst residual {worst}");
        let worst_seq = sweep_c_seq(&values).unwrap();
        assert_eq!(worst, worst_seq);
    }

    #[test]
    fn bad_constants_rejected() {
        assert!(NegVertexConfig::with_c(-0.5).is_err());
        assert!(NegVertexConfig::with_c(-1.0).is_err());
        assert!(NegVertexConfig::with_c(-0.6932).is_ok());
    }
}
