//! Whole-grid runs: every mode of an [`InitialSpec`] is propagated and the
//! per-time norms are accumulated without storing full trajectories.
//!
//! Modes are processed in fixed-size chunks. Inside a chunk the work is
//! spread over the current rayon pool; the per-mode contributions are then
//! summed in grid order, so results do not depend on the thread count.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{energy, propagate, unsymmetrize, IntegratorOptions, SymPair};
use crate::error::{Error, Result};
use crate::params::{alpha, bracket, PlasmaParams};
use crate::spectral::{gamma_by_quadrature, norm_integrands, InitialSpec};

const CHUNK: usize = 64;
// pux, puy, qu, eta, phi, sym_weighted, r_norm
const NTERMS: usize = 7;

/// Time series of grid norms. Entries are norms, not squares, except
/// `sym_weighted`, which is the weighted sum `sum alpha^{1/2} |c|^2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormSeries {
    pub times: Vec<f64>,
    pub pux: Vec<f64>,
    pub puy: Vec<f64>,
    pub qu: Vec<f64>,
    pub eta: Vec<f64>,
    pub phi: Vec<f64>,
    pub sym_weighted: Vec<f64>,
    /// Grid surrogate of `|R(t)|_{L^2_x H^{-1/2}_y}` (weight `<xi>^{-1}`).
    pub r_norm: Vec<f64>,
    /// Extremes over modes of `E(t)/E(0)`; 1 when no mode carries energy.
    pub energy_ratio_min: Vec<f64>,
    pub energy_ratio_max: Vec<f64>,
}

impl NormSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t_max(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    /// `pux + phi`.
    pub fn px_phi(&self) -> Vec<f64> {
        self.pux.iter().zip(&self.phi).map(|(a, b)| a + b).collect()
    }

    /// `qu + w eta` with the species density weight `w`.
    pub fn growth(&self, params: &PlasmaParams) -> Vec<f64> {
        let w = params.density_weight();
        self.qu
            .iter()
            .zip(&self.eta)
            .map(|(q, e)| q + w * e)
            .collect()
    }

    /// Relative defect of `sym_weighted = qu^2 + w^2 eta^2` at each time.
    pub fn identity_defect(&self, params: &PlasmaParams) -> Vec<f64> {
        let w2 = params.density_weight_sq();
        (0..self.len())
            .map(|i| {
                let rhs = self.qu[i] * self.qu[i] + w2 * self.eta[i] * self.eta[i];
                let lhs = self.sym_weighted[i];
                let scale = lhs.abs().max(rhs.abs());
                if scale == 0.0 {
                    0.0
                } else {
                    (lhs - rhs).abs() / scale
                }
            })
            .collect()
    }
}

/// Per-mode samples written to `modes.csv`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeSample {
    pub k: i32,
    pub xi: f64,
    pub t: f64,
    pub abs_c1: f64,
    pub abs_c2: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleStride {
    /// Every `xi_stride`-th node of each `k` row; 0 disables sampling.
    pub xi_stride: usize,
    /// Every `t_stride`-th output time (the last one is always kept).
    pub t_stride: usize,
}

impl SampleStride {
    pub const NONE: SampleStride = SampleStride {
        xi_stride: 0,
        t_stride: 1,
    };
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationOutput {
    pub series: NormSeries,
    /// `max |Pi + Gamma - F_in|` over modes.
    pub conservation_residual: Vec<f64>,
    /// `max |Gamma_trap - Gamma|` over modes, where `Gamma_trap` integrates
    /// `d/dt Gamma = Psi` by the trapezoidal rule on the output times.
    pub quadrature_residual: Vec<f64>,
    #[serde(skip)]
    pub samples: Vec<ModeSample>,
    pub active_modes: usize,
    pub accepted_steps: u64,
    pub rejected_steps: u64,
    pub max_det_error: f64,
}

struct ModeRecord {
    terms: Vec<f64>,
    ratio: Vec<f64>,
    cons: Vec<f64>,
    quad: Vec<f64>,
    samples: Vec<ModeSample>,
    accepted: usize,
    rejected: usize,
    det_err: f64,
}

fn run_mode(
    idx: usize,
    spec: &InitialSpec,
    f_hat: &[Complex64],
    params: &PlasmaParams,
    times: &[f64],
    opts: &IntegratorOptions,
    stride: SampleStride,
) -> Result<Option<ModeRecord>> {
    let grid = &spec.grid;
    let zero = Complex64::new(0.0, 0.0);
    if spec.eta_hat[idx] == zero && spec.psi_hat[idx] == zero && spec.omega_hat[idx] == zero {
        return Ok(None);
    }
    let mode = grid.mode(idx);
    let (_, j) = grid.split(idx);
    let sampled = stride.xi_stride > 0 && j % stride.xi_stride == 0;
    let nt = times.len();
    let initial = spec.initial_state(idx, params);
    let forcing = f_hat[idx];
    let e0 = energy(&initial, 0.0, &mode, params);
    let r_weight = 1.0 / bracket(mode.xi());

    let mut rec = ModeRecord {
        terms: vec![0.0; nt * NTERMS],
        ratio: vec![f64::NAN; nt],
        cons: vec![0.0; nt],
        quad: vec![0.0; nt],
        samples: Vec::new(),
        accepted: 0,
        rejected: 0,
        det_err: 0.0,
    };
    let mut psi_series = vec![zero; nt];
    let mut gamma_series = vec![zero; nt];

    let stats = propagate(&mode, params, times, opts, |p| {
        let i = p.index;
        let state = if i == 0 {
            initial
        } else {
            p.prop.apply(&initial, forcing)
        };
        let (pi, psi) = if i == 0 {
            (spec.eta_hat[idx], spec.psi_hat[idx])
        } else {
            unsymmetrize(&state, p.t, &mode, params)
        };
        let gamma = if i == 0 {
            spec.omega_hat[idx]
        } else {
            forcing - pi
        };
        let t5 = norm_integrands(pi, psi, gamma, p.t, &mode, params);
        let r = state.transform(&p.prop.phi.adjugate());
        let row = &mut rec.terms[i * NTERMS..(i + 1) * NTERMS];
        row[..5].copy_from_slice(&t5);
        row[5] = alpha(p.t, &mode).sqrt() * state.norm_sqr();
        row[6] = r_weight * r.norm_sqr();
        let e = energy(&state, p.t, &mode, params);
        if e0 > 0.0 {
            rec.ratio[i] = e / e0;
        }
        rec.cons[i] = (pi + gamma - forcing).norm();
        rec.det_err = rec.det_err.max((p.prop.phi.det() - 1.0).abs());
        psi_series[i] = psi;
        gamma_series[i] = gamma;
        if sampled && (i % stride.t_stride.max(1) == 0 || i + 1 == nt) {
            rec.samples.push(ModeSample {
                k: mode.k(),
                xi: mode.xi(),
                t: p.t,
                abs_c1: state.c1.norm(),
                abs_c2: state.c2.norm(),
                energy: e,
            });
        }
    })?;
    let trap = gamma_by_quadrature(spec.omega_hat[idx], times, &psi_series);
    for i in 0..nt {
        rec.quad[i] = (trap[i] - gamma_series[i]).norm();
    }
    rec.accepted = stats.accepted;
    rec.rejected = stats.rejected;
    Ok(Some(rec))
}

/// Propagates every grid mode of `spec` over `times` and returns the norm
/// series. Uses the ambient rayon pool.
pub fn simulate(
    spec: &InitialSpec,
    params: &PlasmaParams,
    times: &[f64],
    opts: &IntegratorOptions,
    stride: SampleStride,
) -> Result<SimulationOutput> {
    crate::dynamics::validate_grid(times)?;
    if spec.eta_hat.len() != spec.grid.len()
        || spec.psi_hat.len() != spec.grid.len()
        || spec.omega_hat.len() != spec.grid.len()
    {
        return Err(Error::InvalidGrid(
            "initial data does not match the grid".into(),
        ));
    }
    let grid = &spec.grid;
    let f_hat = spec.f_hat();
    let nt = times.len();
    let mut sums = vec![0.0f64; nt * NTERMS];
    let mut rmin = vec![f64::INFINITY; nt];
    let mut rmax = vec![f64::NEG_INFINITY; nt];
    let mut cons = vec![0.0f64; nt];
    let mut quad = vec![0.0f64; nt];
    let mut out = SimulationOutput {
        series: NormSeries {
            times: times.to_vec(),
            pux: Vec::new(),
            puy: Vec::new(),
            qu: Vec::new(),
            eta: Vec::new(),
            phi: Vec::new(),
            sym_weighted: Vec::new(),
            r_norm: Vec::new(),
            energy_ratio_min: Vec::new(),
            energy_ratio_max: Vec::new(),
        },
        conservation_residual: Vec::new(),
        quadrature_residual: Vec::new(),
        samples: Vec::new(),
        active_modes: 0,
        accepted_steps: 0,
        rejected_steps: 0,
        max_det_error: 0.0,
    };

    let indices: Vec<usize> = (0..grid.len()).collect();
    for chunk in indices.chunks(CHUNK) {
        let records: Vec<Result<Option<ModeRecord>>> = chunk
            .par_iter()
            .map(|&idx| run_mode(idx, spec, &f_hat, params, times, opts, stride))
            .collect();
        for (&idx, rec) in chunk.iter().zip(records) {
            let Some(rec) = rec? else { continue };
            let w = grid.weight_at(idx);
            for (acc, v) in sums.iter_mut().zip(&rec.terms) {
                *acc += w * v;
            }
            for i in 0..nt {
                let r = rec.ratio[i];
                if !r.is_nan() {
                    rmin[i] = rmin[i].min(r);
                    rmax[i] = rmax[i].max(r);
                }
                cons[i] = cons[i].max(rec.cons[i]);
                quad[i] = quad[i].max(rec.quad[i]);
            }
            out.samples.extend(rec.samples);
            out.active_modes += 1;
            out.accepted_steps += rec.accepted as u64;
            out.rejected_steps += rec.rejected as u64;
            out.max_det_error = out.max_det_error.max(rec.det_err);
        }
    }

    let s = &mut out.series;
    for i in 0..nt {
        let row = &sums[i * NTERMS..(i + 1) * NTERMS];
        s.pux.push(row[0].sqrt());
        s.puy.push(row[1].sqrt());
        s.qu.push(row[2].sqrt());
        s.eta.push(row[3].sqrt());
        s.phi.push(row[4].sqrt());
        s.sym_weighted.push(row[5]);
        s.r_norm.push(row[6].sqrt());
        let (lo, hi) = if rmin[i].is_finite() {
            (rmin[i], rmax[i])
        } else {
            (1.0, 1.0)
        };
        s.energy_ratio_min.push(lo);
        s.energy_ratio_max.push(hi);
    }
    out.conservation_residual = cons;
    out.quadrature_residual = quad;
    Ok(out)
}

/// `n_outputs` equally spaced times on `[0, t_max]`.
pub fn uniform_times(t_max: f64, n_outputs: usize) -> Result<Vec<f64>> {
    if !(t_max > 0.0) || !t_max.is_finite() || n_outputs < 2 {
        return Err(Error::InvalidTimeGrid(format!(
            "need t_max > 0 and n_outputs >= 2, got t_max = {t_max}, n_outputs = {n_outputs}"
        )));
    }
    let n = n_outputs - 1;
    Ok((0..=n)
        .map(|i| {
            if i == n {
                t_max
            } else {
                t_max * i as f64 / n as f64
            }
        })
        .collect())
}

/// Grid states at one time, for callers that want full snapshots.
pub fn states_at(
    spec: &InitialSpec,
    params: &PlasmaParams,
    t: f64,
    opts: &IntegratorOptions,
) -> Result<Vec<SymPair>> {
    let f_hat = spec.f_hat();
    let grid = &spec.grid;
    (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let initial = spec.initial_state(idx, params);
            if t == 0.0 {
                return Ok(initial);
            }
            let mut last = initial;
            propagate(&grid.mode(idx), params, &[0.0, t], opts, |p| {
                if p.index == 1 {
                    last = p.prop.apply(&initial, f_hat[idx]);
                }
            })?;
            Ok(last)
        })
        .collect()
}
