//! Frequency grids, initial data and Plancherel-type norms.
//!
//! Fields are stored on a tensor grid `k_list x xi` as flat vectors indexed
//! `ki * n_xi + j`, with `k_list` ascending, so iteration order is the sorted
//! mode order `(k, xi)`. Integrals in `xi` use the trapezoidal rule; sums in
//! `k` are exact.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::{symmetrize, unsymmetrize, ModeTrajectory, SymPair};
use crate::error::{Error, Result};
use crate::params::{alpha, bracket, bracket2, tilt, ModeCoord, PlasmaParams, Species};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyGrid {
    k_list: Vec<i32>,
    xi: Vec<f64>,
    d_xi: f64,
}

impl FrequencyGrid {
    /// `k in {-k_max..-1, 1..k_max}` and `n_xi` uniform nodes on `[xi_min, xi_max]`.
    pub fn new(k_max: u32, xi_min: f64, xi_max: f64, n_xi: usize) -> Result<Self> {
        if k_max == 0 {
            return Err(Error::InvalidGrid("k_max must be at least 1".into()));
        }
        let k_max = k_max as i32;
        let k_list: Vec<i32> = (-k_max..=k_max).filter(|&k| k != 0).collect();
        Self::with_k_list(k_list, xi_min, xi_max, n_xi)
    }

    pub fn with_k_list(
        mut k_list: Vec<i32>,
        xi_min: f64,
        xi_max: f64,
        n_xi: usize,
    ) -> Result<Self> {
        if k_list.is_empty() || k_list.contains(&0) {
            return Err(Error::InvalidGrid(
                "k list must be nonempty and exclude 0".into(),
            ));
        }
        k_list.sort_unstable();
        k_list.dedup();
        if n_xi < 2 || !(xi_max > xi_min) || !xi_min.is_finite() || !xi_max.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "need n_xi >= 2 and xi_min < xi_max, got n_xi = {n_xi}, [{xi_min}, {xi_max}]"
            )));
        }
        let d_xi = (xi_max - xi_min) / (n_xi - 1) as f64;
        let xi = (0..n_xi)
            .map(|j| {
                if j == n_xi - 1 {
                    xi_max
                } else {
                    xi_min + j as f64 * d_xi
                }
            })
            .collect();
        Ok(Self { k_list, xi, d_xi })
    }

    pub fn default_grid() -> Self {
        Self::new(8, -32.0, 32.0, 513).expect("default grid is valid")
    }

    /// Same extent with `2 n_xi - 1` nodes (every old node is kept).
    pub fn refined(&self) -> Self {
        Self::with_k_list(
            self.k_list.clone(),
            self.xi_min(),
            self.xi_max(),
            2 * self.n_xi() - 1,
        )
        .expect("refinement of a valid grid is valid")
    }

    pub fn k_list(&self) -> &[i32] {
        &self.k_list
    }
    pub fn xi(&self) -> &[f64] {
        &self.xi
    }
    pub fn n_xi(&self) -> usize {
        self.xi.len()
    }
    pub fn d_xi(&self) -> f64 {
        self.d_xi
    }
    pub fn xi_min(&self) -> f64 {
        self.xi[0]
    }
    pub fn xi_max(&self) -> f64 {
        *self.xi.last().unwrap()
    }
    pub fn len(&self) -> usize {
        self.k_list.len() * self.xi.len()
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, ki: usize, j: usize) -> usize {
        ki * self.n_xi() + j
    }

    pub fn split(&self, idx: usize) -> (usize, usize) {
        (idx / self.n_xi(), idx % self.n_xi())
    }

    pub fn mode(&self, idx: usize) -> ModeCoord {
        let (ki, j) = self.split(idx);
        ModeCoord::new(self.k_list[ki], self.xi[j]).expect("grid modes are valid")
    }

    pub fn modes(&self) -> impl Iterator<Item = ModeCoord> + '_ {
        (0..self.len()).map(move |i| self.mode(i))
    }

    /// Trapezoid weight of `xi` node `j`.
    pub fn weight(&self, j: usize) -> f64 {
        if j == 0 || j + 1 == self.n_xi() {
            0.5 * self.d_xi
        } else {
            self.d_xi
        }
    }

    pub fn weight_at(&self, idx: usize) -> f64 {
        self.weight(idx % self.n_xi())
    }

    /// Grid index of the node nearest to `(k, xi)`, if `k` is on the grid.
    pub fn nearest(&self, k: i32, xi: f64) -> Option<usize> {
        let ki = self.k_list.iter().position(|&x| x == k)?;
        let j = ((xi - self.xi_min()) / self.d_xi).round();
        let j = j.clamp(0.0, (self.n_xi() - 1) as f64) as usize;
        Some(self.index(ki, j))
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.n_xi();
        let xi_sym = (0..n)
            .all(|j| (self.xi[j] + self.xi[n - 1 - j]).abs() <= 1e-12 * (1.0 + self.xi[j].abs()));
        let k_sym = self.k_list.iter().all(|k| self.k_list.contains(&-k));
        xi_sym && k_sym
    }

    /// Index of `(-k, -xi)` on a symmetric grid.
    pub fn mirror(&self, idx: usize) -> Option<usize> {
        let (ki, j) = self.split(idx);
        let k = self.k_list[ki];
        let mki = self.k_list.iter().position(|&x| x == -k)?;
        Some(self.index(mki, self.n_xi() - 1 - j))
    }

    /// `sum_k sum_j w_j weight(k, xi_j) |f|^2`.
    pub fn quadrature<F>(&self, field: &[Complex64], mut weight: F) -> f64
    where
        F: FnMut(i32, f64) -> f64,
    {
        debug_assert_eq!(field.len(), self.len());
        let mut total = 0.0;
        for (idx, v) in field.iter().enumerate() {
            let (ki, j) = self.split(idx);
            total += self.weight(j) * weight(self.k_list[ki], self.xi[j]) * v.norm_sqr();
        }
        total
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Eta,
    Psi,
    Omega,
}

impl Field {
    pub fn parse(s: &str) -> Option<Field> {
        match s.trim().to_ascii_lowercase().as_str() {
            "eta" | "density" => Some(Field::Eta),
            "psi" | "divergence" => Some(Field::Psi),
            "omega" | "vorticity" => Some(Field::Omega),
            _ => None,
        }
    }
}

/// Named families of initial data.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "profile", rename_all = "snake_case")]
pub enum Profile {
    /// `amplitude * decay^|k| * exp(-(xi - sign(k) center)^2 / (2 width^2))`
    /// in each field, scaled per field, and set to zero beyond `cutoff`
    /// widths from the center.
    GaussianBump {
        amplitude: f64,
        width: f64,
        center: f64,
        decay: f64,
        cutoff: f64,
        field_scale: [f64; 3],
    },
    /// One nonzero sample in one field at the node nearest to `(k, xi0)`.
    SingleMode {
        k: i32,
        xi0: f64,
        amplitude: f64,
        field: Field,
    },
    /// Uniformly random complex amplitudes for `|xi| <= band`, scaled by
    /// `decay^|k|`. With `real` set, `f(-k, -xi) = conj f(k, xi)`.
    RandomBand {
        amplitude: f64,
        band: f64,
        decay: f64,
        real: bool,
    },
}

impl Profile {
    pub const NAMES: [&'static str; 3] = ["gaussian_bump", "single_mode", "random_band"];

    /// Profile with default parameters.
    pub fn by_name(name: &str) -> Result<Profile> {
        match name.trim() {
            "gaussian_bump" | "gaussian" => Ok(Profile::GaussianBump {
                amplitude: 1.0,
                width: 1.0,
                center: 0.0,
                decay: 0.5,
                cutoff: 12.0,
                field_scale: [1.0, 1.0, 1.0],
            }),
            "single_mode" => Ok(Profile::SingleMode {
                k: 1,
                xi0: 0.0,
                amplitude: 1.0,
                field: Field::Eta,
            }),
            "random_band" => Ok(Profile::RandomBand {
                amplitude: 1.0,
                band: 4.0,
                decay: 0.5,
                real: true,
            }),
            other => Err(Error::UnknownProfile(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Profile::GaussianBump { .. } => "gaussian_bump",
            Profile::SingleMode { .. } => "single_mode",
            Profile::RandomBand { .. } => "random_band",
        }
    }
}

/// Initial density, divergence and vorticity on a grid. The `k = 0` column
/// is absent from every grid, which encodes the zero x-average reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialSpec {
    pub grid: FrequencyGrid,
    pub eta_hat: Vec<Complex64>,
    pub psi_hat: Vec<Complex64>,
    pub omega_hat: Vec<Complex64>,
}

impl InitialSpec {
    pub fn zeros(grid: FrequencyGrid) -> Self {
        let n = grid.len();
        Self {
            grid,
            eta_hat: vec![ZERO; n],
            psi_hat: vec![ZERO; n],
            omega_hat: vec![ZERO; n],
        }
    }

    /// `F_in = eta_in + omega_in`, the conserved combination.
    pub fn f_hat(&self) -> Vec<Complex64> {
        self.eta_hat
            .iter()
            .zip(&self.omega_hat)
            .map(|(a, b)| a + b)
            .collect()
    }

    pub fn field(&self, f: Field) -> &[Complex64] {
        match f {
            Field::Eta => &self.eta_hat,
            Field::Psi => &self.psi_hat,
            Field::Omega => &self.omega_hat,
        }
    }

    pub fn is_zero(&self) -> bool {
        [&self.eta_hat, &self.psi_hat, &self.omega_hat]
            .iter()
            .all(|f| f.iter().all(|v| *v == ZERO))
    }

    /// Symmetrized initial state of grid node `idx`.
    pub fn initial_state(&self, idx: usize, params: &PlasmaParams) -> SymPair {
        let mode = self.grid.mode(idx);
        symmetrize(self.eta_hat[idx], self.psi_hat[idx], 0.0, &mode, params)
    }

    /// Whether `f(-k, -xi) = conj f(k, xi)` holds in every field.
    pub fn satisfies_reality(&self, tol: f64) -> bool {
        if !self.grid.is_symmetric() {
            return false;
        }
        (0..self.grid.len()).all(|i| {
            let m = self.grid.mirror(i).unwrap();
            [&self.eta_hat, &self.psi_hat, &self.omega_hat]
                .iter()
                .all(|f| (f[m] - f[i].conj()).norm() <= tol)
        })
    }
}

pub fn make_initial(grid: &FrequencyGrid, profile: &Profile, seed: u64) -> Result<InitialSpec> {
    let mut spec = InitialSpec::zeros(grid.clone());
    match *profile {
        Profile::GaussianBump {
            amplitude,
            width,
            center,
            decay,
            cutoff,
            field_scale,
        } => {
            if !(width > 0.0) {
                return Err(Error::InvalidGrid(format!(
                    "gaussian width must be positive, got {width}"
                )));
            }
            for idx in 0..grid.len() {
                let m = grid.mode(idx);
                let c = center * f64::from(m.k().signum());
                let d = (m.xi() - c) / width;
                if d.abs() > cutoff {
                    continue;
                }
                let v = amplitude * decay.powi(m.k().abs()) * (-0.5 * d * d).exp();
                spec.eta_hat[idx] = Complex64::new(field_scale[0] * v, 0.0);
                spec.psi_hat[idx] = Complex64::new(field_scale[1] * v, 0.0);
                spec.omega_hat[idx] = Complex64::new(field_scale[2] * v, 0.0);
            }
        }
        Profile::SingleMode {
            k,
            xi0,
            amplitude,
            field,
        } => {
            let idx = grid
                .nearest(k, xi0)
                .ok_or_else(|| Error::InvalidGrid(format!("k = {k} is not on the grid")))?;
            let v = Complex64::new(amplitude, 0.0);
            match field {
                Field::Eta => spec.eta_hat[idx] = v,
                Field::Psi => spec.psi_hat[idx] = v,
                Field::Omega => spec.omega_hat[idx] = v,
            }
        }
        Profile::RandomBand {
            amplitude,
            band,
            decay,
            real,
        } => {
            if real && !grid.is_symmetric() {
                return Err(Error::InvalidGrid(
                    "reality constraint needs a symmetric grid".into(),
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let draw = |rng: &mut ChaCha8Rng| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            };
            for idx in 0..grid.len() {
                let m = grid.mode(idx);
                if m.xi().abs() > band || (real && m.k() < 0) {
                    continue;
                }
                let s = amplitude * decay.powi(m.k().abs());
                let values = [draw(&mut rng) * s, draw(&mut rng) * s, draw(&mut rng) * s];
                spec.eta_hat[idx] = values[0];
                spec.psi_hat[idx] = values[1];
                spec.omega_hat[idx] = values[2];
                if real {
                    let mi = grid.mirror(idx).expect("symmetric grid");
                    spec.eta_hat[mi] = values[0].conj();
                    spec.psi_hat[mi] = values[1].conj();
                    spec.omega_hat[mi] = values[2].conj();
                }
            }
        }
    }
    Ok(spec)
}

/// Moving-frame density, divergence and vorticity amplitudes at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSnapshot {
    pub t: f64,
    pub pi_hat: Vec<Complex64>,
    pub psi_hat: Vec<Complex64>,
    pub gamma_hat: Vec<Complex64>,
}

impl SpectralSnapshot {
    /// `max |pi + gamma - f_in|`.
    pub fn conservation_residual(&self, f_hat: &[Complex64]) -> f64 {
        self.pi_hat
            .iter()
            .zip(&self.gamma_hat)
            .zip(f_hat)
            .fold(0.0f64, |m, ((p, g), f)| m.max((p + g - f).norm()))
    }
}

pub fn evolve_snapshot(
    spec: &InitialSpec,
    params: &PlasmaParams,
    trajectories: &[ModeTrajectory],
    t: f64,
) -> Result<SpectralSnapshot> {
    let grid = &spec.grid;
    let aligned = trajectories.len() == grid.len()
        && trajectories
            .iter()
            .enumerate()
            .all(|(i, tr)| tr.mode == grid.mode(i));
    let lookup: HashMap<(i32, u64), &ModeTrajectory> = if aligned {
        HashMap::new()
    } else {
        trajectories
            .iter()
            .map(|tr| ((tr.mode.k(), tr.mode.xi().to_bits()), tr))
            .collect()
    };
    let f_hat = spec.f_hat();
    let n = grid.len();
    let mut snap = SpectralSnapshot {
        t,
        pi_hat: Vec::with_capacity(n),
        psi_hat: Vec::with_capacity(n),
        gamma_hat: Vec::with_capacity(n),
    };
    for idx in 0..n {
        let mode = grid.mode(idx);
        let missing = Error::MissingMode {
            k: mode.k(),
            xi: mode.xi(),
            t,
        };
        let tr = if aligned {
            &trajectories[idx]
        } else {
            match lookup.get(&(mode.k(), mode.xi().to_bits())) {
                Some(tr) => *tr,
                None => return Err(missing),
            }
        };
        let i = tr.index_of(t).ok_or(missing)?;
        let (pi, psi) = unsymmetrize(&tr.states[i], t, &mode, params);
        snap.pi_hat.push(pi);
        snap.psi_hat.push(psi);
        snap.gamma_hat.push(f_hat[idx] - pi);
    }
    Ok(snap)
}

/// Per-node (unquadratured) squared integrands of the five reported norms,
/// in the order `pux, puy, qu, eta, phi`.
pub fn norm_integrands(
    pi: Complex64,
    psi: Complex64,
    gamma: Complex64,
    t: f64,
    mode: &ModeCoord,
    params: &PlasmaParams,
) -> [f64; 5] {
    let a = alpha(t, mode);
    let a2 = a * a;
    let k2 = mode.kf() * mode.kf();
    let d = tilt(t, mode);
    let g2 = gamma.norm_sqr();
    let p2 = pi.norm_sqr();
    // (4 pi e)^2 = 4 pi q
    let four_pi_e_sq = 4.0 * PI * params.coupling();
    let screen = match params.species() {
        Species::Ion => {
            let s = a + params.coupling() / params.t_minus();
            s * s
        }
        Species::Electron => a2,
    };
    [
        d * d / a2 * g2,
        k2 / a2 * g2,
        psi.norm_sqr() / a,
        p2,
        four_pi_e_sq / screen * p2,
    ]
}

/// `L^2` norms of the solenoidal velocity components, the gradient velocity,
/// the density and the electric potential.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct NormSet {
    pub pux: f64,
    pub puy: f64,
    pub qu: f64,
    pub eta: f64,
    pub phi: f64,
}

impl NormSet {
    pub fn from_squares(sq: [f64; 5]) -> Self {
        NormSet {
            pux: sq[0].sqrt(),
            puy: sq[1].sqrt(),
            qu: sq[2].sqrt(),
            eta: sq[3].sqrt(),
            phi: sq[4].sqrt(),
        }
    }

    /// `|Q[u]| + w |eta|` with `w = sqrt(T+/m+)` or `1/sqrt(m-)`.
    pub fn growth_combination(&self, params: &PlasmaParams) -> f64 {
        self.qu + params.density_weight() * self.eta
    }

    /// `|Q[u]|^2 + w^2 |eta|^2`.
    pub fn growth_square(&self, params: &PlasmaParams) -> f64 {
        self.qu * self.qu + params.density_weight_sq() * self.eta * self.eta
    }
}

pub fn helmholtz_norms(
    snapshot: &SpectralSnapshot,
    grid: &FrequencyGrid,
    params: &PlasmaParams,
) -> NormSet {
    let mut sq = [0.0f64; 5];
    for idx in 0..grid.len() {
        let mode = grid.mode(idx);
        let w = grid.weight_at(idx);
        let terms = norm_integrands(
            snapshot.pi_hat[idx],
            snapshot.psi_hat[idx],
            snapshot.gamma_hat[idx],
            snapshot.t,
            &mode,
            params,
        );
        for (acc, v) in sq.iter_mut().zip(terms) {
            *acc += w * v;
        }
    }
    NormSet::from_squares(sq)
}

/// `sum_k int alpha^{1/2} |c(t)|^2 dxi` over the symmetrized states.
pub fn sym_weighted_norm(states: &[SymPair], grid: &FrequencyGrid, t: f64) -> f64 {
    debug_assert_eq!(states.len(), grid.len());
    states
        .iter()
        .enumerate()
        .map(|(idx, s)| grid.weight_at(idx) * alpha(t, &grid.mode(idx)).sqrt() * s.norm_sqr())
        .sum()
}

/// Symmetrized states of a snapshot.
pub fn snapshot_states(
    snapshot: &SpectralSnapshot,
    grid: &FrequencyGrid,
    params: &PlasmaParams,
) -> Vec<SymPair> {
    (0..grid.len())
        .map(|i| {
            symmetrize(
                snapshot.pi_hat[i],
                snapshot.psi_hat[i],
                snapshot.t,
                &grid.mode(i),
                params,
            )
        })
        .collect()
}

/// Anisotropic `H^r_x H^s_y` norm.
pub fn sobolev_norm(grid: &FrequencyGrid, field: &[Complex64], r: f64, s: f64) -> f64 {
    grid.quadrature(field, |k, xi| {
        bracket(f64::from(k)).powf(2.0 * r) * bracket(xi).powf(2.0 * s)
    })
    .sqrt()
}

/// Isotropic `H^s` norm with weight `<k, xi>^{2s}`.
pub fn isotropic_sobolev_norm(grid: &FrequencyGrid, field: &[Complex64], s: f64) -> f64 {
    grid.quadrature(field, |k, xi| bracket2(f64::from(k), xi).powf(2.0 * s))
        .sqrt()
}

/// `Gamma(t_n) = omega_in + int_0^{t_n} Psi dt` by the trapezoidal rule on
/// the sample times.
pub fn gamma_by_quadrature(
    omega_in: Complex64,
    times: &[f64],
    psi: &[Complex64],
) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(times.len());
    let mut acc = omega_in;
    out.push(acc);
    for i in 1..times.len() {
        acc += (psi[i] + psi[i - 1]) * (0.5 * (times[i] - times[i - 1]));
        out.push(acc);
    }
    out
}
