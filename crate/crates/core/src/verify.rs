//! Numerical checks of the decay, growth and energy statements.
//!
//! Upper-bound checks report `K_check = sup_t observed(t) / RHS(t)`, where
//! `RHS(t)` is built from Sobolev norms of the initial data, and fit the
//! power law of the observed quantity on dyadic windows: each window
//! `[a 2^i, a 2^{i+1}]` contributes its maximum and the time where it is
//! attained, and the slope is the least-squares fit of `log max` against
//! `log t`. Pass/fail is decided by the slope; `K_check` is reported.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{integrate_mode_with, IntegratorOptions, ModeTrajectory, SymPair};
use crate::error::{Error, Result};
use crate::params::{bracket, ModeCoord, PlasmaParams, Species};
use crate::simulation::uniform_times;
pub use crate::simulation::NormSeries;
use crate::spectral::{isotropic_sobolev_norm, sobolev_norm, FrequencyGrid, InitialSpec};

/// Shortest series the rate checks accept.
pub const MIN_T_MAX: f64 = 10.0;
/// Default start of the slope-fit window.
pub const DEFAULT_FIT_START: f64 = 20.0;
/// `|R|` below this makes the lower-bound check degenerate.
pub const DEGENERATE_R: f64 = 1e-12;
/// Slack allowed in the pointwise Gronwall comparison.
pub const GRONWALL_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    UpperPxPhi,
    UpperPy,
    UpperGrowth,
    LowerGrowth,
    LemmaEnergy,
}

impl Check {
    pub const ALL: [Check; 5] = [
        Check::UpperPxPhi,
        Check::UpperPy,
        Check::UpperGrowth,
        Check::LowerGrowth,
        Check::LemmaEnergy,
    ];

    pub fn parse(s: &str) -> Option<Check> {
        Check::ALL.into_iter().find(|c| c.as_str() == s.trim())
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Check::UpperPxPhi => "upper_px_phi",
            Check::UpperPy => "upper_py",
            Check::UpperGrowth => "upper_growth",
            Check::LowerGrowth => "lower_growth",
            Check::LemmaEnergy => "lemma_energy",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridMeta {
    pub k_max: i32,
    pub xi_min: f64,
    pub xi_max: f64,
    pub n_xi: usize,
    pub d_xi: f64,
}

impl GridMeta {
    pub fn of(grid: &FrequencyGrid) -> Self {
        GridMeta {
            k_max: grid.k_list().iter().map(|k| k.abs()).max().unwrap_or(0),
            xi_min: grid.xi_min(),
            xi_max: grid.xi_max(),
            n_xi: grid.n_xi(),
            d_xi: grid.d_xi(),
        }
    }
}

/// One check outcome. `pass` holds exactly when `margin >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub species: Species,
    /// Right-hand side of the estimate being checked (see `note`).
    pub bound: f64,
    /// Observed supremum or infimum.
    pub observed: f64,
    pub margin: f64,
    pub pass: bool,
    pub degenerate: bool,
    pub k_check: Option<f64>,
    pub slope: Option<f64>,
    pub expected_slope: Option<f64>,
    pub slope_tol: Option<f64>,
    pub window: [f64; 2],
    pub t_max: f64,
    pub grid: Option<GridMeta>,
    pub note: String,
}

impl VerificationReport {
    fn new(name: &str, species: Species, t_max: f64) -> Self {
        VerificationReport {
            name: name.to_string(),
            species,
            bound: 0.0,
            observed: 0.0,
            margin: 0.0,
            pass: true,
            degenerate: false,
            k_check: None,
            slope: None,
            expected_slope: None,
            slope_tol: None,
            window: [0.0, t_max],
            t_max,
            grid: None,
            note: String::new(),
        }
    }

    fn set_margin(&mut self, margin: f64) {
        self.margin = margin;
        self.pass = margin >= 0.0;
    }

    /// Failing record for a check that could not run.
    pub fn from_error(name: &str, species: Species, t_max: f64, err: &Error) -> Self {
        let mut r = VerificationReport::new(name, species, t_max);
        r.degenerate = matches!(err, Error::DegenerateData { .. });
        r.set_margin(-1.0);
        r.note = err.to_string();
        r
    }
}

/// Sobolev norms of the initial data entering the right-hand sides.
/// Density norms already carry the species weight `w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InitialDataNorms {
    pub w_eta_hm12_l2: f64,
    pub f_hm12_h12: f64,
    pub f_hm1_h1: f64,
    pub psi_hm12_hm1: f64,
    pub w_eta_hm12_h1: f64,
    pub f_hm12_h32: f64,
    pub f_hm1_h2: f64,
    pub psi_hm12_l2: f64,
    pub w_eta_l2: f64,
    pub psi_iso_hm1: f64,
    pub f_iso_h1: f64,
    /// `1/w`: `sqrt(m+/T+)` or `sqrt(m-)`.
    pub inv_weight: f64,
}

impl InitialDataNorms {
    pub fn compute(spec: &InitialSpec, params: &PlasmaParams) -> Self {
        let g = &spec.grid;
        let w = params.density_weight();
        let f = spec.f_hat();
        let eta = &spec.eta_hat;
        let psi = &spec.psi_hat;
        InitialDataNorms {
            w_eta_hm12_l2: w * sobolev_norm(g, eta, -0.5, 0.0),
            f_hm12_h12: sobolev_norm(g, &f, -0.5, 0.5),
            f_hm1_h1: sobolev_norm(g, &f, -1.0, 1.0),
            psi_hm12_hm1: sobolev_norm(g, psi, -0.5, -1.0),
            w_eta_hm12_h1: w * sobolev_norm(g, eta, -0.5, 1.0),
            f_hm12_h32: sobolev_norm(g, &f, -0.5, 1.5),
            f_hm1_h2: sobolev_norm(g, &f, -1.0, 2.0),
            psi_hm12_l2: sobolev_norm(g, psi, -0.5, 0.0),
            w_eta_l2: w * sobolev_norm(g, eta, 0.0, 0.0),
            psi_iso_hm1: isotropic_sobolev_norm(g, psi, -1.0),
            f_iso_h1: isotropic_sobolev_norm(g, &f, 1.0),
            inv_weight: 1.0 / w,
        }
    }

    pub fn rhs_px_phi(&self, t: f64) -> f64 {
        let bt = bracket(t);
        self.inv_weight * bt.powf(-0.5) * (self.w_eta_hm12_l2 + self.f_hm12_h12 + self.psi_hm12_hm1)
            + self.f_hm1_h1 / bt
    }

    pub fn rhs_py(&self, t: f64) -> f64 {
        let bt = bracket(t);
        self.inv_weight * bt.powf(-1.5) * (self.w_eta_hm12_h1 + self.f_hm12_h32 + self.psi_hm12_l2)
            + self.f_hm1_h2 / (bt * bt)
    }

    pub fn rhs_growth(&self, t: f64) -> f64 {
        bracket(t).sqrt() * (self.w_eta_l2 + self.psi_iso_hm1 + self.f_iso_h1)
    }
}

/// Points `(t*, max)` of the window maxima on `[start, 2 start]`,
/// `[2 start, 4 start]`, ..., clipped to `t_max`. Windows with fewer than two
/// samples are skipped.
pub fn dyadic_window_maxima(times: &[f64], values: &[f64], start: f64) -> Vec<(f64, f64)> {
    let t_max = times.last().copied().unwrap_or(0.0);
    let mut out = Vec::new();
    let mut a = start;
    while a < t_max {
        let b = (2.0 * a).min(t_max);
        let last = b >= t_max;
        let mut best: Option<(f64, f64)> = None;
        let mut count = 0;
        for (&t, &v) in times.iter().zip(values) {
            let inside = t >= a && (t < b || (last && t <= b));
            if inside {
                count += 1;
                if best.is_none_or(|(_, m)| v > m) {
                    best = Some((t, v));
                }
            }
        }
        if let Some(p) = best.filter(|_| count >= 2) {
            out.push(p);
        }
        a *= 2.0;
    }
    out
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Window-maxima slope on `[start, t_max]`; falls back to `t >= 10` when the
/// series is too short for two windows from `start`.
pub fn fit_slope(times: &[f64], values: &[f64], start: f64) -> (Option<f64>, f64) {
    let mut pts = dyadic_window_maxima(times, values, start);
    let mut used = start;
    if pts.len() < 2 && start > MIN_T_MAX {
        used = MIN_T_MAX;
        pts = dyadic_window_maxima(times, values, used);
    }
    if pts.len() < 2 {
        let all: Vec<(f64, f64)> = times
            .iter()
            .zip(values)
            .filter(|(t, _)| **t >= used)
            .map(|(t, v)| (*t, *v))
            .collect();
        return (loglog_slope(&all), used);
    }
    (loglog_slope(&pts), used)
}

fn ensure_long_enough(series: &NormSeries) -> Result<()> {
    let t_max = series.t_max();
    if t_max < MIN_T_MAX {
        return Err(Error::SeriesTooShort {
            t_max,
            required: MIN_T_MAX,
        });
    }
    Ok(())
}

struct UpperSpec<'a> {
    name: &'a str,
    values: Vec<f64>,
    rhs: &'a dyn Fn(f64) -> f64,
    expected: f64,
    tol: f64,
}

fn upper_check(
    u: UpperSpec<'_>,
    series: &NormSeries,
    spec: &InitialSpec,
    params: &PlasmaParams,
    fit_start: f64,
) -> Result<VerificationReport> {
    ensure_long_enough(series)?;
    let t_max = series.t_max();
    let mut r = VerificationReport::new(u.name, params.species(), t_max);
    r.grid = Some(GridMeta::of(&spec.grid));
    r.expected_slope = Some(u.expected);
    r.slope_tol = Some(u.tol);
    r.bound = (u.rhs)(0.0);
    let observed_max = u.values.iter().copied().fold(0.0f64, f64::max);
    if r.bound == 0.0 || observed_max == 0.0 {
        r.window = [fit_start.min(t_max), t_max];
        r.k_check = Some(0.0);
        r.note = "vacuous: zero data".into();
        r.set_margin(0.0);
        return Ok(r);
    }
    let k_check = series
        .times
        .iter()
        .zip(&u.values)
        .map(|(&t, &v)| v / (u.rhs)(t))
        .fold(0.0f64, f64::max);
    r.k_check = Some(k_check);
    r.observed = k_check;
    let (slope, start) = fit_slope(&series.times, &u.values, fit_start);
    r.window = [start, t_max];
    r.slope = slope;
    r.note =
        "observed = sup_t value/RHS(t); bound = RHS(0); pass decided by the fitted slope".into();
    let margin = match slope {
        Some(s) if k_check.is_finite() => u.tol - (s - u.expected).abs(),
        _ => -1.0,
    };
    r.set_margin(margin);
    Ok(r)
}

/// `|P[u]^x| + |phi|` against `<t>^{-1/2}` decay.
pub fn check_upper_px_phi(
    series: &NormSeries,
    spec: &InitialSpec,
    params: &PlasmaParams,
    fit_start: f64,
) -> Result<VerificationReport> {
    let n = InitialDataNorms::compute(spec, params);
    let rhs = |t| n.rhs_px_phi(t);
    upper_check(
        UpperSpec {
            name: Check::UpperPxPhi.as_str(),
            values: series.px_phi(),
            rhs: &rhs,
            expected: -0.5,
            tol: 0.15,
        },
        series,
        spec,
        params,
        fit_start,
    )
}

/// `|P[u]^y|` against `<t>^{-3/2}` decay.
pub fn check_upper_py(
    series: &NormSeries,
    spec: &InitialSpec,
    params: &PlasmaParams,
    fit_start: f64,
) -> Result<VerificationReport> {
    let n = InitialDataNorms::compute(spec, params);
    let rhs = |t| n.rhs_py(t);
    upper_check(
        UpperSpec {
            name: Check::UpperPy.as_str(),
            values: series.puy.clone(),
            rhs: &rhs,
            expected: -1.5,
            tol: 0.2,
        },
        series,
        spec,
        params,
        fit_start,
    )
}

/// `|Q[u]| + w |eta|` against `<t>^{1/2}` growth.
pub fn check_upper_growth(
    series: &NormSeries,
    spec: &InitialSpec,
    params: &PlasmaParams,
    fit_start: f64,
) -> Result<VerificationReport> {
    let n = InitialDataNorms::compute(spec, params);
    let rhs = |t| n.rhs_growth(t);
    upper_check(
        UpperSpec {
            name: Check::UpperGrowth.as_str(),
            values: series.growth(params),
            rhs: &rhs,
            expected: 0.5,
            tol: 0.1,
        },
        series,
        spec,
        params,
        fit_start,
    )
}

/// `inf_{t in [1, T]} (|Q[u]| + w |eta|) / (<t>^{1/2} |R(t)|)`, which must
/// stay positive.
pub fn check_lower_growth(
    series: &NormSeries,
    spec: &InitialSpec,
    params: &PlasmaParams,
) -> Result<VerificationReport> {
    ensure_long_enough(series)?;
    let t_max = series.t_max();
    let growth = series.growth(params);
    let mut c_check = f64::INFINITY;
    let mut r_min = f64::INFINITY;
    for (i, &t) in series.times.iter().enumerate() {
        if t < 1.0 {
            continue;
        }
        let rn = series.r_norm[i];
        if !(rn >= DEGENERATE_R) {
            return Err(Error::DegenerateData { t, norm: rn });
        }
        r_min = r_min.min(rn);
        c_check = c_check.min(growth[i] / (bracket(t).sqrt() * rn));
    }
    let mut r = VerificationReport::new(Check::LowerGrowth.as_str(), params.species(), t_max);
    r.grid = Some(GridMeta::of(&spec.grid));
    r.window = [1.0, t_max];
    r.bound = r_min;
    r.observed = c_check;
    r.k_check = Some(c_check);
    r.note = "observed = c_check = inf_t (qu + w eta)/(<t>^{1/2} |R(t)|), |R| with grid weight <xi>^{-1}; bound = min_t |R(t)|".into();
    r.set_margin(c_check - DEGENERATE_R);
    Ok(r)
}

/// Modes and homogeneous initial states for the energy lemma.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaSample {
    pub modes: Vec<ModeCoord>,
    pub states: Vec<SymPair>,
    pub t_max: f64,
    pub n_outputs: usize,
}

impl LemmaSample {
    /// `n` modes with `1 <= |k| <= k_max`, `|xi| <= xi_max` and unit-box
    /// complex initial states.
    pub fn random(n: usize, k_max: i32, xi_max: f64, t_max: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut modes = Vec::with_capacity(n);
        let mut states = Vec::with_capacity(n);
        for _ in 0..n {
            let k = rng.gen_range(1..=k_max) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let xi = rng.gen_range(-xi_max..=xi_max);
            modes.push(ModeCoord::new(k, xi).expect("k is nonzero"));
            let mut c =
                || num_complex::Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            states.push(SymPair::new(c(), c()));
        }
        LemmaSample {
            modes,
            states,
            t_max,
            n_outputs: (10.0 * t_max).ceil() as usize + 1,
        }
    }

    pub fn integrate(
        &self,
        params: &PlasmaParams,
        opts: &IntegratorOptions,
    ) -> Result<Vec<ModeTrajectory>> {
        let times = uniform_times(self.t_max, self.n_outputs.max(2))?;
        self.modes
            .par_iter()
            .zip(&self.states)
            .map(|(m, s)| {
                integrate_mode_with(
                    *s,
                    num_complex::Complex64::new(0.0, 0.0),
                    m,
                    params,
                    &times,
                    opts,
                )
            })
            .collect()
    }
}

/// Largest `|log(E(t)/E(0))| - prefactor (TV_hg(t) + TV_loglambda(t))` over
/// the output times `t > 0` of all trajectories (0 if there are none).
pub fn gronwall_excess(trajectories: &[ModeTrajectory], prefactor: f64) -> f64 {
    let m = trajectories
        .iter()
        .flat_map(|tr| {
            let e0 = tr.energies[0];
            (1..tr.len()).map(move |i| {
                (tr.energies[i] / e0).ln().abs()
                    - prefactor * (tr.tv_h_gamma[i] + tr.tv_log_lambda[i])
            })
        })
        .fold(f64::NEG_INFINITY, f64::max);
    if m.is_finite() {
        m
    } else {
        0.0
    }
}

/// The four sub-checks of the energy lemma on homogeneous trajectories:
/// the pointwise Gronwall envelope, both total-variation bounds and the
/// coercivity bound on `|h|/gamma`.
pub fn check_lemma_energy(
    sample: &LemmaSample,
    params: &PlasmaParams,
    opts: &IntegratorOptions,
) -> Result<Vec<VerificationReport>> {
    let trajs = sample.integrate(params, opts)?;
    Ok(lemma_reports(&trajs, params, sample.t_max))
}

pub fn lemma_reports(
    trajs: &[ModeTrajectory],
    params: &PlasmaParams,
    t_max: f64,
) -> Vec<VerificationReport> {
    let sp = params.species();
    let last = |v: &Vec<f64>| v.last().copied().unwrap_or(0.0);
    let fold = |f: &dyn Fn(&ModeTrajectory) -> f64| trajs.iter().map(f).fold(0.0f64, f64::max);

    let n = trajs.len();
    let mut g = VerificationReport::new("lemma_energy_gronwall", sp, t_max);
    g.bound = GRONWALL_SLACK;
    g.observed = if n == 0 {
        0.0
    } else {
        gronwall_excess(trajs, params.gronwall_prefactor())
    };
    g.note = format!(
        "observed = max |log E(t)/E(0)| - {:.6} (TV_hg + TV_loglambda) over {n} modes",
        params.gronwall_prefactor()
    );
    g.set_margin(g.bound - g.observed);

    let mut tv_hg = VerificationReport::new("lemma_energy_tv_h_gamma", sp, t_max);
    tv_hg.bound = params.tv_h_gamma_bound();
    tv_hg.observed = fold(&|tr| last(&tr.tv_h_gamma));
    tv_hg.note = format!("max over {n} modes of TV of h/gamma on [0, t_max]");
    tv_hg.set_margin(tv_hg.bound - tv_hg.observed);

    let mut tv_ll = VerificationReport::new("lemma_energy_tv_log_lambda", sp, t_max);
    tv_ll.bound = params.tv_log_lambda_bound();
    tv_ll.observed = fold(&|tr| last(&tr.tv_log_lambda));
    tv_ll.note = format!("max over {n} modes of TV of log lambda on [0, t_max]");
    tv_ll.set_margin(tv_ll.bound - tv_ll.observed);

    let mut hg = VerificationReport::new("lemma_energy_h_gamma", sp, t_max);
    hg.bound = params.h_gamma_bound();
    hg.observed = fold(&|tr| last(&tr.max_h_gamma));
    hg.note = format!("max |h|/gamma sampled at every step over {n} modes");
    hg.set_margin(hg.bound + 1e-12 - hg.observed);

    vec![g, tv_hg, tv_ll, hg]
}
