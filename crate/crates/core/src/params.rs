//! Physical constants, Fourier mode coordinates and the shear symbols
//! `alpha(t, k, xi) = k^2 + (xi - k t)^2` and its time derivative.
//!
//! All constants are nondimensional. The electron system only sees `m_minus`
//! and the charge; the species-dispatched accessors below are the single
//! place where the two systems differ in their constants.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Species {
    Ion,
    Electron,
}

impl Species {
    pub fn parse(s: &str) -> Option<Species> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ion" | "ions" | "+" => Some(Species::Ion),
            "electron" | "electrons" | "-" => Some(Species::Electron),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Species::Ion => "ion",
            Species::Electron => "electron",
        }
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Species-tagged plasma constants.
///
/// `q = 4 pi e^2` is cached because every formula uses the grouped constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlasmaParams {
    species: Species,
    t_plus: f64,
    t_minus: f64,
    m_plus: f64,
    m_minus: f64,
    e_charge: f64,
    q: f64,
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}

impl PlasmaParams {
    pub fn new(
        species: Species,
        t_plus: f64,
        t_minus: f64,
        m_plus: f64,
        m_minus: f64,
        e_charge: f64,
    ) -> Result<Self> {
        check_positive("t_plus", t_plus)?;
        check_positive("t_minus", t_minus)?;
        check_positive("m_plus", m_plus)?;
        check_positive("m_minus", m_minus)?;
        check_positive("e_charge", e_charge)?;
        let q = 4.0 * PI * e_charge * e_charge;
        check_positive("q", q)?;
        Ok(Self {
            species,
            t_plus,
            t_minus,
            m_plus,
            m_minus,
            e_charge,
            q,
        })
    }

    /// Unit temperatures and masses with `4 pi e^2 = 1`.
    pub fn all_ones(species: Species) -> Self {
        Self::new(species, 1.0, 1.0, 1.0, 1.0, charge_for_coupling(1.0))
            .expect("unit constants are valid")
    }

    pub fn with_species(mut self, species: Species) -> Self {
        self.species = species;
        self
    }

    pub fn species(&self) -> Species {
        self.species
    }
    pub fn t_plus(&self) -> f64 {
        self.t_plus
    }
    pub fn t_minus(&self) -> f64 {
        self.t_minus
    }
    pub fn m_plus(&self) -> f64 {
        self.m_plus
    }
    pub fn m_minus(&self) -> f64 {
        self.m_minus
    }
    pub fn e_charge(&self) -> f64 {
        self.e_charge
    }
    /// `4 pi e^2`.
    pub fn coupling(&self) -> f64 {
        self.q
    }

    /// Squared weight on the density in the symmetrized state:
    /// `T+/m+` for ions, `1/m-` for electrons.
    pub fn density_weight_sq(&self) -> f64 {
        match self.species {
            Species::Ion => self.t_plus / self.m_plus,
            Species::Electron => 1.0 / self.m_minus,
        }
    }

    pub fn density_weight(&self) -> f64 {
        self.density_weight_sq().sqrt()
    }

    /// Upper bound of `lambda^2` over all times and modes.
    pub fn lambda_sq_max(&self) -> f64 {
        match self.species {
            Species::Ion => 1.0 + self.q / self.t_plus + 2.0 * self.m_plus / self.t_plus,
            Species::Electron => 1.0 + self.q + 2.0 * self.m_minus,
        }
    }

    /// Bound on `|h| / gamma` used for coercivity of the energy.
    pub fn h_gamma_bound(&self) -> f64 {
        match self.species {
            Species::Ion => SQRT_2 / 2.0,
            Species::Electron => SQRT_2 / 4.0,
        }
    }

    /// Constant in front of the total variations in the Gronwall estimate.
    pub fn gronwall_prefactor(&self) -> f64 {
        match self.species {
            Species::Ion => 2.0 + SQRT_2,
            Species::Electron => 2.0 + SQRT_2 / 2.0,
        }
    }

    /// Bound on the total variation of `h / gamma` over `[0, inf)`.
    pub fn tv_h_gamma_bound(&self) -> f64 {
        match self.species {
            Species::Ion => 14.0 * SQRT_2,
            Species::Electron => 4.0 * SQRT_2,
        }
    }

    /// Bound on the total variation of `log lambda` over `[0, inf)`.
    pub fn tv_log_lambda_bound(&self) -> f64 {
        self.lambda_sq_max().ln()
    }
}

/// Elementary charge giving `4 pi e^2 = q`.
pub fn charge_for_coupling(q: f64) -> f64 {
    (q / (4.0 * PI)).sqrt()
}

/// A Fourier mode `(k, xi)` with `k != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeCoord {
    k: i32,
    xi: f64,
}

impl ModeCoord {
    pub fn new(k: i32, xi: f64) -> Result<Self> {
        if k == 0 || !xi.is_finite() {
            return Err(Error::InvalidMode { k, xi });
        }
        Ok(Self { k, xi })
    }

    pub fn k(&self) -> i32 {
        self.k
    }

    pub fn kf(&self) -> f64 {
        f64::from(self.k)
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// Time at which the vertical tilt `xi - k t` vanishes.
    pub fn critical_time(&self) -> f64 {
        self.xi / self.kf()
    }

    /// Lexicographic order on `(k, xi)`.
    pub fn sort_key(&self) -> (i32, f64) {
        (self.k, self.xi)
    }
}

/// `xi - k t`.
#[inline]
pub fn tilt(t: f64, mode: &ModeCoord) -> f64 {
    mode.xi - mode.kf() * t
}

/// Symbol of `-Delta` in the sheared frame.
#[inline]
pub fn alpha(t: f64, mode: &ModeCoord) -> f64 {
    let k = mode.kf();
    let d = tilt(t, mode);
    k * k + d * d
}

/// Time derivative of [`alpha`].
#[inline]
pub fn dt_alpha(t: f64, mode: &ModeCoord) -> f64 {
    -2.0 * mode.kf() * tilt(t, mode)
}

/// Japanese bracket `<a> = (1 + a^2)^{1/2}`.
#[inline]
pub fn bracket(a: f64) -> f64 {
    (1.0 + a * a).sqrt()
}

/// `<a, b> = (1 + a^2 + b^2)^{1/2}`.
#[inline]
pub fn bracket2(a: f64, b: f64) -> f64 {
    (1.0 + a * a + b * b).sqrt()
}
