//! Independent reference solvers shared by the integration tests.

#![allow(dead_code)]

use num_complex::Complex64;

use couette_ep::params::{PlasmaParams, Species};

/// Moving-frame density/divergence pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fourier {
    pub pi: Complex64,
    pub psi: Complex64,
}

fn restoring(params: &PlasmaParams, k: f64, a: f64) -> f64 {
    let q = params.coupling();
    match params.species() {
        Species::Ion => {
            2.0 * k * k / a
                + params.t_plus() * a / params.m_plus()
                + (q / params.m_plus()) * a / (a + q / params.t_minus())
        }
        Species::Electron => 2.0 * k * k / a + a / params.m_minus() + q / params.m_minus(),
    }
}

/// Right-hand side of the unsymmetrized mode equations
/// `Pi' = -Psi`, `Psi' = -(2k^2/alpha) F + (alpha'/alpha) Psi + S Pi`.
pub fn fourier_rhs(
    params: &PlasmaParams,
    k: f64,
    xi: f64,
    f: Complex64,
    t: f64,
    y: Fourier,
) -> Fourier {
    let d = xi - k * t;
    let a = k * k + d * d;
    let da = -2.0 * k * d;
    Fourier {
        pi: -y.psi,
        psi: f * (-2.0 * k * k / a) + y.psi * (da / a) + y.pi * restoring(params, k, a),
    }
}

fn axpy(y: Fourier, h: f64, k: Fourier) -> Fourier {
    Fourier {
        pi: y.pi + k.pi * h,
        psi: y.psi + k.psi * h,
    }
}

/// Classical RK4 with `n` equal steps on `[0, t_end]`.
pub fn fourier_rk4(
    params: &PlasmaParams,
    k: f64,
    xi: f64,
    f: Complex64,
    y0: Fourier,
    t_end: f64,
    n: usize,
) -> Fourier {
    let h = t_end / n as f64;
    let mut y = y0;
    for i in 0..n {
        let t = i as f64 * h;
        let k1 = fourier_rhs(params, k, xi, f, t, y);
        let k2 = fourier_rhs(params, k, xi, f, t + 0.5 * h, axpy(y, 0.5 * h, k1));
        let k3 = fourier_rhs(params, k, xi, f, t + 0.5 * h, axpy(y, 0.5 * h, k2));
        let k4 = fourier_rhs(params, k, xi, f, t + h, axpy(y, h, k3));
        y = Fourier {
            pi: y.pi + (k1.pi + k2.pi * 2.0 + k3.pi * 2.0 + k4.pi) * (h / 6.0),
            psi: y.psi + (k1.psi + k2.psi * 2.0 + k3.psi * 2.0 + k4.psi) * (h / 6.0),
        };
    }
    y
}

/// Richardson extrapolation of two RK4 runs with steps `dt` and `2 dt`.
pub fn fourier_richardson(
    params: &PlasmaParams,
    k: f64,
    xi: f64,
    f: Complex64,
    y0: Fourier,
    t_end: f64,
    dt: f64,
) -> Fourier {
    let n = (t_end / dt).round() as usize;
    let fine = fourier_rk4(params, k, xi, f, y0, t_end, n);
    let coarse = fourier_rk4(params, k, xi, f, y0, t_end, n / 2);
    Fourier {
        pi: (fine.pi * 16.0 - coarse.pi) / 15.0,
        psi: (fine.psi * 16.0 - coarse.psi) / 15.0,
    }
}

pub fn rel_err(a: Fourier, b: Fourier) -> f64 {
    let num = ((a.pi - b.pi).norm_sqr() + (a.psi - b.psi).norm_sqr()).sqrt();
    let den = (b.pi.norm_sqr() + b.psi.norm_sqr()).sqrt();
    num / den
}
