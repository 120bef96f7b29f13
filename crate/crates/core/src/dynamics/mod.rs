//! Per-mode symmetrized dynamics.
//!
//! In the sheared frame each Fourier mode `(k, xi)` of the density and
//! divergence evolves independently. After rescaling by powers of `alpha`
//! the pair `(c1, c2)` solves
//!
//! ```text
//! d/dt c = L(t) c + M(t) f,      L = [[-h, -m], [p, h]],   M = (0, -2k^2 alpha^{-7/4})
//! ```
//!
//! with `h = alpha'/(4 alpha)` and species-dependent `m`, `p`. The energy
//! `E = lambda |c1|^2 + 2 (h/gamma) Re(c1 conj(c2)) + |c2|^2 / lambda` with
//! `lambda = sqrt(p/m)`, `gamma = sqrt(m p)` is conserved up to factors
//! controlled by the total variation of `h/gamma` and `log lambda`.

mod integrator;

pub use integrator::{
    duhamel_solution, integrate_mode, integrate_mode_with, lower_bound_functional,
    IntegratorOptions, ModeTrajectory, Scheme,
};
pub(crate) use integrator::{propagate, validate_grid};

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::Mat2;
use crate::params::{alpha, dt_alpha, ModeCoord, PlasmaParams, Species};

/// Symmetrized per-mode state: density-like `c1` and divergence-like `c2`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SymPair {
    pub c1: Complex64,
    pub c2: Complex64,
}

impl SymPair {
    pub const ZERO: SymPair = SymPair {
        c1: Complex64::new(0.0, 0.0),
        c2: Complex64::new(0.0, 0.0),
    };

    pub fn new(c1: Complex64, c2: Complex64) -> Self {
        Self { c1, c2 }
    }

    pub fn real(c1: f64, c2: f64) -> Self {
        Self::new(Complex64::new(c1, 0.0), Complex64::new(c2, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c1.norm_sqr() + self.c2.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.c1.is_finite() && self.c2.is_finite()
    }

    pub fn to_array(self) -> [Complex64; 2] {
        [self.c1, self.c2]
    }

    pub fn from_array(a: [Complex64; 2]) -> Self {
        Self::new(a[0], a[1])
    }

    pub fn transform(&self, m: &Mat2) -> SymPair {
        SymPair::from_array(m.apply_c(self.to_array()))
    }

    pub fn scale(&self, s: f64) -> SymPair {
        SymPair::new(self.c1 * s, self.c2 * s)
    }
}

impl Add for SymPair {
    type Output = SymPair;
    fn add(self, rhs: SymPair) -> SymPair {
        SymPair::new(self.c1 + rhs.c1, self.c2 + rhs.c2)
    }
}

impl Sub for SymPair {
    type Output = SymPair;
    fn sub(self, rhs: SymPair) -> SymPair {
        SymPair::new(self.c1 - rhs.c1, self.c2 - rhs.c2)
    }
}

impl Mul<Complex64> for SymPair {
    type Output = SymPair;
    fn mul(self, rhs: Complex64) -> SymPair {
        SymPair::new(self.c1 * rhs, self.c2 * rhs)
    }
}

/// Coefficients of the symmetrized generator at one `(t, k, xi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffBundle {
    pub lambda: f64,
    pub gamma: f64,
    pub h: f64,
    pub m_coef: f64,
    pub p_coef: f64,
}

impl CoeffBundle {
    pub fn h_over_gamma(&self) -> f64 {
        self.h / self.gamma
    }
}

pub fn coeffs(t: f64, mode: &ModeCoord, params: &PlasmaParams) -> CoeffBundle {
    let a = alpha(t, mode);
    let sa = a.sqrt();
    let a32 = a * sa;
    let k2 = mode.kf() * mode.kf();
    let q = params.coupling();
    let (m_coef, p_coef) = match params.species() {
        Species::Ion => {
            let (tp, tm, mp) = (params.t_plus(), params.t_minus(), params.m_plus());
            let c = (tp / mp).sqrt();
            let m1 = c * sa;
            let p1 = q / (mp * tp).sqrt() * sa / (a + q / tm)
                + (mp / tp).sqrt() * 2.0 * k2 / a32
                + c * sa;
            (m1, p1)
        }
        Species::Electron => {
            let sm = params.m_minus().sqrt();
            let m2 = sa / sm;
            let p2 = q / (sm * sa) + 2.0 * k2 * sm / a32 + sa / sm;
            (m2, p2)
        }
    };
    CoeffBundle {
        lambda: (p_coef / m_coef).sqrt(),
        gamma: (m_coef * p_coef).sqrt(),
        h: 0.25 * dt_alpha(t, mode) / a,
        m_coef,
        p_coef,
    }
}

/// `lambda^2` written directly in terms of `alpha`.
pub fn lambda_sq(t: f64, mode: &ModeCoord, params: &PlasmaParams) -> f64 {
    let a = alpha(t, mode);
    let k2 = mode.kf() * mode.kf();
    let q = params.coupling();
    match params.species() {
        Species::Ion => {
            let (tp, tm, mp) = (params.t_plus(), params.t_minus(), params.m_plus());
            1.0 + 2.0 * mp * k2 / (tp * a * a) + (q / tp) / (a + q / tm)
        }
        Species::Electron => 1.0 + q / a + 2.0 * params.m_minus() * k2 / (a * a),
    }
}

/// `gamma^2` written directly in terms of `alpha`.
pub fn gamma_sq(t: f64, mode: &ModeCoord, params: &PlasmaParams) -> f64 {
    let a = alpha(t, mode);
    let k2 = mode.kf() * mode.kf();
    let q = params.coupling();
    match params.species() {
        Species::Ion => {
            let (tp, tm, mp) = (params.t_plus(), params.t_minus(), params.m_plus());
            q / mp * a / (a + q / tm) + 2.0 * k2 / a + tp * a / mp
        }
        Species::Electron => {
            let mm = params.m_minus();
            q / mm + 2.0 * k2 / a + a / mm
        }
    }
}

/// Generator `L(t)`; trace-free by construction.
pub fn build_generator(t: f64, mode: &ModeCoord, params: &PlasmaParams) -> Mat2 {
    let c = coeffs(t, mode, params);
    Mat2::new(-c.h, -c.m_coef, c.p_coef, c.h)
}

/// Coupling vector `M(t)` multiplying the conserved forcing `F_in`.
pub fn build_forcing(t: f64, mode: &ModeCoord) -> [f64; 2] {
    let a = alpha(t, mode);
    let k2 = mode.kf() * mode.kf();
    [0.0, -2.0 * k2 * a.powf(-1.75)]
}

/// Rescales moving-frame density and divergence amplitudes into the
/// symmetrized state.
pub fn symmetrize(
    pi_hat: Complex64,
    psi_hat: Complex64,
    t: f64,
    mode: &ModeCoord,
    params: &PlasmaParams,
) -> SymPair {
    let a = alpha(t, mode);
    let w = params.density_weight();
    SymPair::new(pi_hat * (w * a.powf(-0.25)), psi_hat * a.powf(-0.75))
}

pub fn unsymmetrize(
    state: &SymPair,
    t: f64,
    mode: &ModeCoord,
    params: &PlasmaParams,
) -> (Complex64, Complex64) {
    let a = alpha(t, mode);
    let w = params.density_weight();
    (state.c1 * (a.powf(0.25) / w), state.c2 * a.powf(0.75))
}

fn energy_from(c: &CoeffBundle, state: &SymPair) -> f64 {
    let cross = (state.c1 * state.c2.conj()).re;
    c.lambda * state.c1.norm_sqr() + 2.0 * c.h_over_gamma() * cross + state.c2.norm_sqr() / c.lambda
}

/// Symmetrized energy `E(t)`.
pub fn energy(state: &SymPair, t: f64, mode: &ModeCoord, params: &PlasmaParams) -> f64 {
    energy_from(&coeffs(t, mode, params), state)
}

/// Diagonal part `lambda |c1|^2 + |c2|^2 / lambda` of the energy.
pub fn energy_tilde(state: &SymPair, t: f64, mode: &ModeCoord, params: &PlasmaParams) -> f64 {
    let c = coeffs(t, mode, params);
    c.lambda * state.c1.norm_sqr() + state.c2.norm_sqr() / c.lambda
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::charge_for_coupling;
    use proptest::prelude::*;
    use std::f64::consts::SQRT_2;

    fn mode(k: i32, xi: f64) -> ModeCoord {
        ModeCoord::new(k, xi).unwrap()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn ion_coefficients_at_unit_alpha() {
        let p = PlasmaParams::all_ones(Species::Ion);
        let c = coeffs(0.0, &mode(1, 0.0), &p);
        assert!(close(c.lambda * c.lambda, 3.5, 1e-14));
        assert!(close(c.gamma, 3.5f64.sqrt(), 1e-14));
        assert!(close(c.gamma, 1.870_828_693_386_970_7, 1e-14));
        assert_eq!(c.h, 0.0);
        assert!(close(c.m_coef, 1.0, 1e-15));
        assert!(close(c.p_coef, 3.5, 1e-15));
    }

    #[test]
    fn electron_coefficients_at_unit_alpha() {
        let p = PlasmaParams::all_ones(Species::Electron);
        let c = coeffs(0.0, &mode(1, 0.0), &p);
        assert!(close(c.lambda * c.lambda, 4.0, 1e-14));
        assert!(close(c.lambda, 2.0, 1e-14));
    }

    #[test]
    fn h_vanishes_at_critical_time() {
        for s in [Species::Ion, Species::Electron] {
            let p = PlasmaParams::all_ones(s);
            let m = mode(-3, 4.5);
            assert_eq!(coeffs(m.critical_time(), &m, &p).h, 0.0);
        }
    }

    #[test]
    fn generator_examples() {
        let p = PlasmaParams::all_ones(Species::Ion);
        let l = build_generator(0.0, &mode(1, 0.0), &p);
        assert!((l - Mat2::new(0.0, -1.0, 3.5, 0.0)).max_abs() < 1e-14);
        let l = build_generator(0.0, &mode(1, 2.0), &p);
        assert!((l.0[0][0] - 0.2).abs() < 1e-15);
        assert_eq!(l.trace(), 0.0);
    }

    #[test]
    fn forcing_examples() {
        assert_eq!(build_forcing(0.0, &mode(1, 0.0)), [0.0, -2.0]);
        let m = mode(2, 3.0);
        let f = build_forcing(m.critical_time(), &m);
        assert_eq!(f[0], 0.0);
        assert!((f[1] + 8.0 / 4f64.powf(1.75)).abs() < 1e-15);
        assert!((f[1] + SQRT_2 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn forcing_integrable() {
        // |M| integrated by trapezoid over [0, 400] stays below the closed
        // bound 2 |k|^{-3/2} int (1 + s^2)^{-7/4} ds over the real line.
        for (k, xi) in [(1, 0.0), (1, 30.0), (4, -12.0), (8, 31.0)] {
            let m = mode(k, xi);
            let n = 400_000;
            let dt = 400.0 / n as f64;
            let mut total = 0.0;
            for i in 0..=n {
                let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                total += w * build_forcing(i as f64 * dt, &m)[1].abs() * dt;
            }
            let whole_line = 2.0 * (f64::from(k.abs())).powf(-1.5) * 1.748_038_369_528_08;
            assert!(
                total.is_finite() && total <= whole_line,
                "{total} {whole_line}"
            );
        }
    }

    #[test]
    fn symmetrize_examples() {
        let p = PlasmaParams::all_ones(Species::Ion);
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(
            symmetrize(zero, zero, 0.7, &mode(2, 1.0), &p),
            SymPair::ZERO
        );
        let s = symmetrize(one, one, 0.0, &mode(1, 0.0), &p);
        assert!((s - SymPair::real(1.0, 1.0)).norm() < 1e-15);
        let s = symmetrize(one, zero, 0.0, &mode(1, 1.0), &p);
        assert!((s.c1.re - 0.840_896_415_253_714_6).abs() < 1e-15);
        assert_eq!(s.c2, zero);

        let back = unsymmetrize(
            &SymPair::real(2f64.powf(-0.25), 0.0),
            0.0,
            &mode(1, 1.0),
            &p,
        );
        assert!((back.0 - one).norm() < 1e-15 && back.1 == zero);
        assert_eq!(
            unsymmetrize(&SymPair::ZERO, 1.0, &mode(1, 1.0), &p),
            (zero, zero)
        );
    }

    #[test]
    fn electron_symmetrize_weight() {
        let p = PlasmaParams::new(Species::Electron, 1.0, 1.0, 1.0, 4.0, 0.5).unwrap();
        let s = symmetrize(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            0.0,
            &mode(1, 0.0),
            &p,
        );
        assert!((s.c1.re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn symmetrize_round_trip_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let p = PlasmaParams::new(Species::Ion, 1.3, 0.8, 2.1, 0.4, 0.9).unwrap();
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let m = mode(
                rng.gen_range(1..=8) * if rng.gen() { 1 } else { -1 },
                rng.gen_range(-32.0..32.0),
            );
            let t = rng.gen_range(0.0..100.0);
            let pi = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let psi = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            for sp in [Species::Ion, Species::Electron] {
                let pp = p.with_species(sp);
                let s = symmetrize(pi, psi, t, &m, &pp);
                let (a, b) = unsymmetrize(&s, t, &m, &pp);
                worst = worst
                    .max((a - pi).norm() / pi.norm())
                    .max((b - psi).norm() / psi.norm());
            }
        }
        assert!(worst <= 1e-12, "{worst}");
    }

    #[test]
    fn energy_examples() {
        let p = PlasmaParams::all_ones(Species::Ion);
        assert_eq!(energy(&SymPair::ZERO, 1.0, &mode(1, 0.0), &p), 0.0);
        let e = energy(&SymPair::real(1.0, 1.0), 0.0, &mode(1, 0.0), &p);
        assert!((e - 2.405_351_177_211_819_5).abs() < 1e-12, "{e}");
        let m = mode(2, 3.0);
        let tc = m.critical_time();
        let e = energy(&SymPair::real(1.0, 0.0), tc, &m, &p);
        assert!((e - lambda_sq(tc, &m, &p).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn energy_tilde_examples() {
        let p = PlasmaParams::all_ones(Species::Electron);
        assert_eq!(energy_tilde(&SymPair::ZERO, 0.0, &mode(1, 0.0), &p), 0.0);
        // lambda = 2 at alpha = 1 for all-ones electrons
        let e = energy_tilde(&SymPair::real(1.0, 0.0), 0.0, &mode(1, 0.0), &p);
        assert!((e - 2.0).abs() < 1e-14);
    }

    #[test]
    fn lambda_monotone_on_each_side_of_critical_time() {
        for sp in [Species::Ion, Species::Electron] {
            let p = PlasmaParams::all_ones(sp);
            for m in [mode(1, 5.0), mode(3, 10.0), mode(-2, -7.0), mode(5, 2.0)] {
                let tc = m.critical_time();
                let n = 4000;
                let mut prev = lambda_sq(0.0, &m, &p);
                for i in 1..=n {
                    let t = 2.0 * tc * i as f64 / n as f64;
                    let cur = lambda_sq(t, &m, &p);
                    if t <= tc {
                        assert!(cur >= prev, "{sp} {m:?} not increasing at {t}");
                    } else {
                        assert!(cur <= prev, "{sp} {m:?} not decreasing at {t}");
                    }
                    prev = cur;
                }
            }
        }
    }

    #[test]
    fn electron_h_gamma_limit_approaches_bound() {
        // With m- large and the tilt large, |h|/gamma tends to sqrt(2)/4.
        let p = PlasmaParams::new(
            Species::Electron,
            1.0,
            1.0,
            1.0,
            1e12,
            charge_for_coupling(1.0),
        )
        .unwrap();
        let m = mode(1, 0.0);
        let mut best = 0.0f64;
        for i in 0..2000 {
            let t = 1.0 + i as f64 * 5.0;
            best = best.max(coeffs(t, &m, &p).h_over_gamma().abs());
        }
        assert!(best <= SQRT_2 / 4.0);
        assert!(best > SQRT_2 / 4.0 - 1e-3, "{best}");
        // all-ones electrons stay well inside the bound at large k
        let ones = PlasmaParams::all_ones(Species::Electron);
        for k in [1, 10, 100, 1000] {
            let m = mode(k, 0.0);
            for i in 0..200 {
                let r = coeffs(0.01 * i as f64, &m, &ones).h_over_gamma().abs();
                assert!(r <= SQRT_2 / 4.0);
            }
        }
    }

    fn arb_params() -> impl Strategy<Value = (f64, f64, f64, f64, f64)> {
        (
            0.1f64..10.0,
            0.1f64..10.0,
            0.1f64..10.0,
            0.1f64..10.0,
            0.05f64..2.0,
        )
    }

    proptest! {
        #[test]
        fn coefficient_invariants(
            t in 0.0f64..100.0, k in 1i32..=8, neg in any::<bool>(), xi in -32.0f64..32.0,
            (tp, tm, mp, mm, e) in arb_params(), electron in any::<bool>()
        ) {
            let sp = if electron { Species::Electron } else { Species::Ion };
            let p = PlasmaParams::new(sp, tp, tm, mp, mm, e).unwrap();
            let m = mode(if neg { -k } else { k }, xi);
            let c = coeffs(t, &m, &p);
            prop_assert!(close(c.lambda * c.lambda, c.p_coef / c.m_coef, 1e-12));
            prop_assert!(close(c.gamma * c.gamma, c.m_coef * c.p_coef, 1e-12));
            let l2 = lambda_sq(t, &m, &p);
            prop_assert!(close(c.lambda * c.lambda, l2, 1e-12));
            prop_assert!(close(c.gamma * c.gamma, gamma_sq(t, &m, &p), 1e-12));
            prop_assert!(l2 >= 1.0 && l2 <= p.lambda_sq_max() * (1.0 + 1e-14));
            prop_assert!(c.h_over_gamma().abs() <= p.h_gamma_bound() + 1e-12);
            prop_assert_eq!(build_generator(t, &m, &p).trace(), 0.0);
        }

        #[test]
        fn energy_sandwich(
            t in 0.0f64..60.0, k in 1i32..=8, xi in -32.0f64..32.0,
            a in -1.0f64..1.0, b in -1.0f64..1.0, c in -1.0f64..1.0, d in -1.0f64..1.0,
            electron in any::<bool>()
        ) {
            let sp = if electron { Species::Electron } else { Species::Ion };
            let p = PlasmaParams::all_ones(sp);
            let m = mode(k, xi);
            let s = SymPair::new(Complex64::new(a, b), Complex64::new(c, d));
            let e = energy(&s, t, &m, &p);
            let et = energy_tilde(&s, t, &m, &p);
            let r = p.h_gamma_bound();
            prop_assert!(e >= (1.0 - r) * et - 1e-14);
            prop_assert!(e <= (1.0 + r) * et + 1e-14);
        }
    }
}
