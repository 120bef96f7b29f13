//! Adaptive integration of the per-mode linear system.
//!
//! The integrator propagates the real 2x3 block `[Phi | w]` where `Phi` is the
//! fundamental matrix (`Phi' = L Phi`, `Phi(0) = I`) and `w` is the response to
//! unit forcing (`w' = L w + M`, `w(0) = 0`). Any solution with initial state
//! `c0` and forcing `f` is then `Phi c0 + w f`, so a single integration serves
//! every initial datum and forcing amplitude of the mode.
//!
//! Two one-step schemes are available, both fourth order with step-doubling
//! error control (error per unit step):
//! - `Magnus4`: two-point Gauss Magnus exponential integrator; the trace-free
//!   2x2 exponential is evaluated in closed form so `det Phi = 1` to rounding.
//! - `Rk4`: classical Runge-Kutta with the additional cap
//!   `dt <= c / (1 + |L|_inf)`.

use num_complex::Complex64;
use serde::Serialize;

use super::{build_forcing, build_generator, coeffs, energy, SymPair};
use crate::error::{Error, Result};
use crate::linalg::{expm_traceless_affine, Mat2};
use crate::params::{ModeCoord, PlasmaParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Magnus4,
    Rk4,
}

impl Scheme {
    pub fn parse(s: &str) -> Option<Scheme> {
        match s.trim().to_ascii_lowercase().as_str() {
            "magnus4" | "magnus" => Some(Scheme::Magnus4),
            "rk4" => Some(Scheme::Rk4),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Magnus4 => "magnus4",
            Scheme::Rk4 => "rk4",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub scheme: Scheme,
    /// Local error per unit time, relative to `1 + max|[Phi | w]|`.
    pub tol: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    /// `c` in the RK4 cap `dt <= c / (1 + |L|_inf)`.
    pub stiffness_factor: f64,
}

impl IntegratorOptions {
    pub fn new(tol: f64) -> Self {
        Self {
            scheme: Scheme::Magnus4,
            tol,
            dt_min: 1e-9,
            dt_max: 0.05,
            stiffness_factor: 0.1,
        }
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self::new(1e-8)
    }
}

/// Block `[Phi | w]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Propagator {
    pub phi: Mat2,
    pub w: [f64; 2],
}

impl Propagator {
    const START: Propagator = Propagator {
        phi: Mat2::IDENTITY,
        w: [0.0, 0.0],
    };

    fn max_abs(&self) -> f64 {
        self.phi.max_abs().max(self.w[0].abs()).max(self.w[1].abs())
    }

    fn max_diff(&self, other: &Propagator) -> f64 {
        (self.phi - other.phi)
            .max_abs()
            .max((self.w[0] - other.w[0]).abs())
            .max((self.w[1] - other.w[1]).abs())
    }

    pub fn apply(&self, initial: &SymPair, forcing: Complex64) -> SymPair {
        let h = self.phi.apply_c(initial.to_array());
        SymPair::new(h[0] + forcing * self.w[0], h[1] + forcing * self.w[1])
    }
}

const GAUSS_OFFSET: f64 = 0.288_675_134_594_812_9; // sqrt(3)/6
const MAGNUS_COMM: f64 = 0.144_337_567_297_406_43; // sqrt(3)/12

fn magnus_step(
    t: f64,
    h: f64,
    y: &Propagator,
    mode: &ModeCoord,
    params: &PlasmaParams,
) -> Propagator {
    let t1 = t + h * (0.5 - GAUSS_OFFSET);
    let t2 = t + h * (0.5 + GAUSS_OFFSET);
    let l1 = build_generator(t1, mode, params);
    let l2 = build_generator(t2, mode, params);
    let m1 = build_forcing(t1, mode);
    let m2 = build_forcing(t2, mode);
    let c = MAGNUS_COMM * h * h;
    let omega = (l1 + l2).scale(0.5 * h) + l2.commutator(&l1).scale(c);
    let l2m1 = l2.apply(m1);
    let l1m2 = l1.apply(m2);
    let b = [
        0.5 * h * (m1[0] + m2[0]) + c * (l2m1[0] - l1m2[0]),
        0.5 * h * (m1[1] + m2[1]) + c * (l2m1[1] - l1m2[1]),
    ];
    let (e, v) = expm_traceless_affine(&omega, b);
    let ew = e.apply(y.w);
    Propagator {
        phi: e * y.phi,
        w: [ew[0] + v[0], ew[1] + v[1]],
    }
}

fn rhs(t: f64, y: &Propagator, mode: &ModeCoord, params: &PlasmaParams) -> Propagator {
    let l = build_generator(t, mode, params);
    let m = build_forcing(t, mode);
    let lw = l.apply(y.w);
    Propagator {
        phi: l * y.phi,
        w: [lw[0] + m[0], lw[1] + m[1]],
    }
}

fn axpy(y: &Propagator, a: f64, d: &Propagator) -> Propagator {
    Propagator {
        phi: y.phi + d.phi.scale(a),
        w: [y.w[0] + a * d.w[0], y.w[1] + a * d.w[1]],
    }
}

fn rk4_step(t: f64, h: f64, y: &Propagator, mode: &ModeCoord, params: &PlasmaParams) -> Propagator {
    let k1 = rhs(t, y, mode, params);
    let k2 = rhs(t + 0.5 * h, &axpy(y, 0.5 * h, &k1), mode, params);
    let k3 = rhs(t + 0.5 * h, &axpy(y, 0.5 * h, &k2), mode, params);
    let k4 = rhs(t + h, &axpy(y, h, &k3), mode, params);
    let mut out = axpy(y, h / 6.0, &k1);
    out = axpy(&out, h / 3.0, &k2);
    out = axpy(&out, h / 3.0, &k3);
    axpy(&out, h / 6.0, &k4)
}

/// Running total variations of `h/gamma` and `log lambda`.
#[derive(Debug, Clone, Copy)]
struct TvTracker {
    last_hg: f64,
    last_ll: f64,
    tv_hg: f64,
    tv_ll: f64,
    max_hg: f64,
}

impl TvTracker {
    fn new(mode: &ModeCoord, params: &PlasmaParams) -> Self {
        let c = coeffs(0.0, mode, params);
        Self {
            last_hg: c.h_over_gamma(),
            last_ll: c.lambda.ln(),
            tv_hg: 0.0,
            tv_ll: 0.0,
            max_hg: c.h_over_gamma().abs(),
        }
    }

    fn sample(&mut self, t: f64, mode: &ModeCoord, params: &PlasmaParams) {
        let c = coeffs(t, mode, params);
        let hg = c.h_over_gamma();
        let ll = c.lambda.ln();
        self.tv_hg += (hg - self.last_hg).abs();
        self.tv_ll += (ll - self.last_ll).abs();
        self.max_hg = self.max_hg.max(hg.abs());
        self.last_hg = hg;
        self.last_ll = ll;
    }
}

/// Data handed to the visitor at each requested output time.
#[derive(Debug, Clone, Copy)]
pub(crate) struct OutputPoint {
    pub index: usize,
    pub t: f64,
    pub prop: Propagator,
    pub tv_h_gamma: f64,
    pub tv_log_lambda: f64,
    pub max_h_gamma: f64,
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

pub(crate) fn validate_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::InvalidTimeGrid("empty".into()));
    }
    if t_grid[0] != 0.0 {
        return Err(Error::InvalidTimeGrid(format!(
            "starts at {} instead of 0",
            t_grid[0]
        )));
    }
    for w in t_grid.windows(2) {
        if !(w[1] > w[0]) || !w[1].is_finite() {
            return Err(Error::InvalidTimeGrid(format!(
                "not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// Integrates `[Phi | w]` across `t_grid`, calling `visit` at every grid time
/// (including `t = 0`). The critical time `xi/k` is always hit exactly.
pub(crate) fn propagate<F>(
    mode: &ModeCoord,
    params: &PlasmaParams,
    t_grid: &[f64],
    opts: &IntegratorOptions,
    mut visit: F,
) -> Result<StepStats>
where
    F: FnMut(&OutputPoint),
{
    validate_grid(t_grid)?;
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidTimeGrid(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    let step: fn(f64, f64, &Propagator, &ModeCoord, &PlasmaParams) -> Propagator = match opts.scheme
    {
        Scheme::Magnus4 => magnus_step,
        Scheme::Rk4 => rk4_step,
    };

    let mut y = Propagator::START;
    let mut tv = TvTracker::new(mode, params);
    let mut stats = StepStats::default();
    let t_end = *t_grid.last().unwrap();
    let tc = mode.critical_time();
    let has_critical = tc > 0.0 && tc < t_end && !t_grid.contains(&tc);

    let mut t = 0.0;
    let l0 = build_generator(0.0, mode, params).norm_inf();
    let mut h = (0.01 / (1.0 + l0)).min(opts.dt_max);

    visit(&OutputPoint {
        index: 0,
        t: 0.0,
        prop: y,
        tv_h_gamma: 0.0,
        tv_log_lambda: 0.0,
        max_h_gamma: tv.max_hg,
    });

    let mut stops: Vec<(f64, Option<usize>)> = t_grid
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &t)| (t, Some(i)))
        .collect();
    if has_critical {
        let pos = stops.partition_point(|&(s, _)| s < tc);
        stops.insert(pos, (tc, None));
    }
    for (target, output) in stops {
        while t < target {
            let remaining = target - t;
            let mut h_try = h.min(opts.dt_max);
            if opts.scheme == Scheme::Rk4 {
                let cap =
                    opts.stiffness_factor / (1.0 + build_generator(t, mode, params).norm_inf());
                h_try = h_try.min(cap);
            }
            // absorb slivers so no step is much shorter than its neighbour
            let clipped = h_try >= remaining * (1.0 - 1e-3);
            if clipped {
                h_try = remaining;
            }

            let full = step(t, h_try, &y, mode, params);
            let half = step(t, 0.5 * h_try, &y, mode, params);
            let two_half = step(t + 0.5 * h_try, 0.5 * h_try, &half, mode, params);
            let err = two_half.max_diff(&full) / 15.0;
            let scale = 1.0 + two_half.max_abs();
            let allowed = (opts.tol * h_try).max(64.0 * f64::EPSILON) * scale;
            let factor = if err > 0.0 {
                (0.9 * (allowed / err).powf(0.25)).clamp(0.2, 4.0)
            } else {
                4.0
            };

            if err <= allowed && two_half.phi.max_abs().is_finite() {
                tv.sample(t + 0.5 * h_try, mode, params);
                t = if clipped { target } else { t + h_try };
                tv.sample(t, mode, params);
                y = two_half;
                stats.accepted += 1;
                h = if clipped {
                    h.max(h_try * factor)
                } else {
                    h_try * factor
                };
            } else {
                stats.rejected += 1;
                h = h_try * factor.min(0.9);
                if h < opts.dt_min {
                    return Err(Error::StepSizeUnderflow {
                        k: mode.k(),
                        xi: mode.xi(),
                        t,
                        dt: h,
                    });
                }
            }
        }
        let Some(index) = output else { continue };
        visit(&OutputPoint {
            index,
            t: target,
            prop: y,
            tv_h_gamma: tv.tv_hg,
            tv_log_lambda: tv.tv_ll,
            max_h_gamma: tv.max_hg,
        });
    }
    Ok(stats)
}

/// Solution of one mode sampled on an output grid.
#[derive(Debug, Clone)]
pub struct ModeTrajectory {
    pub mode: ModeCoord,
    pub initial: SymPair,
    /// Conserved forcing amplitude `F_in(k, xi)`.
    pub forcing: Complex64,
    pub times: Vec<f64>,
    pub states: Vec<SymPair>,
    /// `Phi(t) = S_L(t, 0)`.
    pub fundamental: Vec<Mat2>,
    /// Response to unit forcing from a zero state.
    pub forcing_response: Vec<[f64; 2]>,
    pub energies: Vec<f64>,
    pub tv_h_gamma: Vec<f64>,
    pub tv_log_lambda: Vec<f64>,
    /// Largest `|h|/gamma` sampled up to each output time.
    pub max_h_gamma: Vec<f64>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl ModeTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn index_of(&self, t: f64) -> Option<usize> {
        let tol = 1e-12 * (1.0 + t.abs());
        self.times.iter().position(|&s| (s - t).abs() <= tol)
    }

    pub fn max_det_error(&self) -> f64 {
        self.fundamental
            .iter()
            .fold(0.0f64, |m, p| m.max((p.det() - 1.0).abs()))
    }
}

pub fn integrate_mode(
    initial: SymPair,
    forcing: Complex64,
    mode: &ModeCoord,
    params: &PlasmaParams,
    t_grid: &[f64],
    tol: f64,
) -> Result<ModeTrajectory> {
    integrate_mode_with(
        initial,
        forcing,
        mode,
        params,
        t_grid,
        &IntegratorOptions::new(tol),
    )
}

pub fn integrate_mode_with(
    initial: SymPair,
    forcing: Complex64,
    mode: &ModeCoord,
    params: &PlasmaParams,
    t_grid: &[f64],
    opts: &IntegratorOptions,
) -> Result<ModeTrajectory> {
    let n = t_grid.len();
    let mut traj = ModeTrajectory {
        mode: *mode,
        initial,
        forcing,
        times: Vec::with_capacity(n),
        states: Vec::with_capacity(n),
        fundamental: Vec::with_capacity(n),
        forcing_response: Vec::with_capacity(n),
        energies: Vec::with_capacity(n),
        tv_h_gamma: Vec::with_capacity(n),
        tv_log_lambda: Vec::with_capacity(n),
        max_h_gamma: Vec::with_capacity(n),
        accepted_steps: 0,
        rejected_steps: 0,
    };
    let stats = propagate(mode, params, t_grid, opts, |p| {
        let state = if p.index == 0 {
            initial
        } else {
            p.prop.apply(&initial, forcing)
        };
        traj.times.push(p.t);
        traj.states.push(state);
        traj.fundamental.push(p.prop.phi);
        traj.forcing_response.push(p.prop.w);
        traj.energies.push(energy(&state, p.t, mode, params));
        traj.tv_h_gamma.push(p.tv_h_gamma);
        traj.tv_log_lambda.push(p.tv_log_lambda);
        traj.max_h_gamma.push(p.max_h_gamma);
    })?;
    traj.accepted_steps = stats.accepted;
    traj.rejected_steps = stats.rejected;
    Ok(traj)
}

/// Solution at time `t` assembled from the fundamental matrix alone:
/// `Phi(t) (c0 + f int_0^t adj(Phi(s)) M(s) ds)`, with the integral evaluated
/// by composite Simpson on successively doubled uniform grids.
pub fn duhamel_solution(
    initial: SymPair,
    forcing: Complex64,
    mode: &ModeCoord,
    params: &PlasmaParams,
    t: f64,
    tol: f64,
) -> Result<SymPair> {
    if t == 0.0 {
        return Ok(initial);
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidTimeGrid(format!(
            "duhamel time must be positive, got {t}"
        )));
    }
    let opts = IntegratorOptions::new(tol);
    let mut panels = 2 * (((t * 32.0).ceil() as usize).max(16));
    let mut previous: Option<[f64; 2]> = None;
    loop {
        let dt = t / panels as f64;
        let grid: Vec<f64> = (0..=panels)
            .map(|i| if i == panels { t } else { i as f64 * dt })
            .collect();
        let mut integral = [0.0f64; 2];
        let mut phi_end = Mat2::IDENTITY;
        propagate(mode, params, &grid, &opts, |p| {
            let w = if p.index == 0 || p.index == panels {
                1.0
            } else if p.index % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let v = p.prop.phi.adjugate().apply(build_forcing(p.t, mode));
            integral[0] += w * v[0];
            integral[1] += w * v[1];
            if p.index == panels {
                phi_end = p.prop.phi;
            }
        })?;
        integral[0] *= dt / 3.0;
        integral[1] *= dt / 3.0;

        let converged = previous.is_some_and(|prev| {
            let d = (prev[0] - integral[0])
                .abs()
                .max((prev[1] - integral[1]).abs());
            d <= 1e-3 * tol * (1.0 + integral[0].abs().max(integral[1].abs()))
        });
        if converged || panels >= (1 << 21) {
            let r = SymPair::new(
                initial.c1 + forcing * integral[0],
                initial.c2 + forcing * integral[1],
            );
            return Ok(r.transform(&phi_end));
        }
        previous = Some(integral);
        panels *= 2;
    }
}

/// `R(t) = c0 + int_0^t S_L(0, s) M(s) f ds` at each output time of a
/// trajectory, using `S_L(0, s) = adj(Phi(s))`.
///
/// Since `c(t) = Phi(t) R(t)`, this is `adj(Phi(t)) c(t)` and needs no extra
/// quadrature.
pub fn lower_bound_functional(traj: &ModeTrajectory) -> Vec<SymPair> {
    traj.fundamental
        .iter()
        .zip(&traj.states)
        .map(|(phi, s)| s.transform(&phi.adjugate()))
        .collect()
}
