//! Fixed-size 2x2 real matrices acting on complex 2-vectors.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);
    pub const ZERO: Mat2 = Mat2([[0.0, 0.0], [0.0, 0.0]]);

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> f64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Adjugate; equals the inverse when `det == 1`.
    pub fn adjugate(&self) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        Mat2([[d, -b], [-c, a]])
    }

    pub fn scale(&self, s: f64) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        Mat2([[s * a, s * b], [s * c, s * d]])
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let [[a, b], [c, d]] = self.0;
        (a.abs() + b.abs()).max(c.abs() + d.abs())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn commutator(&self, other: &Mat2) -> Mat2 {
        *self * *other - *other * *self
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        let [[a, b], [c, d]] = self.0;
        [a * v[0] + b * v[1], c * v[0] + d * v[1]]
    }

    pub fn apply_c(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let [[a, b], [c, d]] = self.0;
        [v[0] * a + v[1] * b, v[0] * c + v[1] * d]
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        let [[e, f], [g, h]] = rhs.0;
        Mat2([
            [a * e + b * g, a * f + b * h],
            [c * e + d * g, c * f + d * h],
        ])
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        let [[e, f], [g, h]] = rhs.0;
        Mat2([[a + e, b + f], [c + g, d + h]])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + rhs.scale(-1.0)
    }
}

/// `sin(x)/x` and `(1 - cos x)/x^2` for `det > 0`, or their hyperbolic
/// counterparts for `det < 0`, where `x^2 = |det|`.
fn traceless_series(det: f64) -> (f64, f64, f64) {
    // returns (c0, c1, c2) with exp(X) = c0 I + c1 X and phi1(X) = c1 I + c2 X
    if det.abs() < 1e-8 {
        // Taylor in z = -det (X^2 = z I)
        let z = -det;
        let c0 = 1.0 + z / 2.0 + z * z / 24.0;
        let c1 = 1.0 + z / 6.0 + z * z / 120.0;
        let c2 = 0.5 + z / 24.0 + z * z / 720.0;
        return (c0, c1, c2);
    }
    if det > 0.0 {
        let w = det.sqrt();
        let s = (0.5 * w).sin();
        (w.cos(), w.sin() / w, 2.0 * s * s / det)
    } else {
        let w = (-det).sqrt();
        let s = (0.5 * w).sinh();
        (w.cosh(), w.sinh() / w, 2.0 * s * s / (-det))
    }
}

/// Exponential of a trace-free 2x2 matrix, in closed form (`X^2 = -det(X) I`).
pub fn expm_traceless(x: &Mat2) -> Mat2 {
    let (c0, c1, _) = traceless_series(x.det());
    Mat2::IDENTITY.scale(c0) + x.scale(c1)
}

/// `exp(X)` together with `phi1(X) b`, where `phi1(X) = sum X^n / (n+1)!`.
/// This is the exponential of the augmented matrix `[[X, b], [0, 0]]`.
pub fn expm_traceless_affine(x: &Mat2, b: [f64; 2]) -> (Mat2, [f64; 2]) {
    let (c0, c1, c2) = traceless_series(x.det());
    let e = Mat2::IDENTITY.scale(c0) + x.scale(c1);
    let xb = x.apply(b);
    (e, [c1 * b[0] + c2 * xb[0], c1 * b[1] + c2 * xb[1]])
}
