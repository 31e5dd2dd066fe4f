//! Ideal-gas closure: internal energy `e = c_v p / rho`, entropy
//! `s = log(p^c_v / rho^(c_v + 1))` and the characteristic speeds of the
//! one-dimensional system in the `y` direction.
//!
//! All quantities are dimensionless.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest density or pressure accepted as strictly positive.
pub const POSITIVITY_FLOOR: f64 = 1e-300;

/// Thermodynamic model, parameterised by the specific heat at constant volume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GasModel {
    c_v: f64,
}

impl GasModel {
    /// Rejects `c_v <= 1/2` (strictly, no epsilon) and non-finite values.
    pub fn new(c_v: f64) -> Result<Self> {
        if !c_v.is_finite() || c_v <= 0.5 {
            return Err(Error::domain(format!("c_v must be finite and > 1/2, got {c_v}")));
        }
        Ok(GasModel { c_v })
    }

    pub fn c_v(&self) -> f64 {
        self.c_v
    }

    /// Adiabatic exponent `(c_v + 1) / c_v`.
    pub fn gamma(&self) -> f64 {
        (self.c_v + 1.0) / self.c_v
    }

    pub fn internal_energy(&self, s: &PrimState) -> Result<f64> {
        s.validate()?;
        Ok(self.c_v * s.p / s.rho)
    }

    /// Physical entropy `c_v log p - (c_v + 1) log rho`.
    pub fn entropy(&self, s: &PrimState) -> Result<f64> {
        s.validate()?;
        Ok(self.entropy_unchecked(s.rho, s.p))
    }

    pub(crate) fn entropy_unchecked(&self, rho: f64, p: f64) -> f64 {
        self.c_v * p.ln() - (self.c_v + 1.0) * rho.ln()
    }

    pub fn sound_speed(&self, s: &PrimState) -> Result<f64> {
        s.validate()?;
        Ok(self.sound_speed_unchecked(s.rho, s.p))
    }

    pub(crate) fn sound_speed_unchecked(&self, rho: f64, p: f64) -> f64 {
        (self.gamma() * p / rho).sqrt()
    }

    /// `(v - c, v, v + c)`, strictly increasing on valid states.
    pub fn eigenvalues(&self, s: &PrimState) -> Result<[f64; 3]> {
        let c = self.sound_speed(s)?;
        Ok([s.v - c, s.v, s.v + c])
    }

    /// Total energy density `rho |v|^2 / 2 + c_v p`.
    pub fn total_energy(&self, s: &PrimState) -> f64 {
        0.5 * s.rho * (s.u * s.u + s.v * s.v) + self.c_v * s.p
    }
}

impl<'de> Deserialize<'de> for GasModel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            c_v: f64,
        }
        let raw = Raw::deserialize(d)?;
        GasModel::new(raw.c_v).map_err(serde::de::Error::custom)
    }
}

/// Primitive state `(rho, u, v, p)`; `u` is the x-velocity, `v` the y-velocity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimState {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
}

impl PrimState {
    pub fn new(rho: f64, u: f64, v: f64, p: f64) -> Result<Self> {
        let s = PrimState { rho, u, v, p };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho.is_finite() && self.u.is_finite() && self.v.is_finite() && self.p.is_finite()) {
            return Err(Error::domain(format!("non-finite state {self:?}")));
        }
        if self.rho <= POSITIVITY_FLOOR {
            return Err(Error::domain(format!("density must be positive, got {}", self.rho)));
        }
        if self.p <= POSITIVITY_FLOOR {
            return Err(Error::domain(format!("pressure must be positive, got {}", self.p)));
        }
        Ok(())
    }

    pub fn velocity(&self) -> [f64; 2] {
        [self.u, self.v]
    }
}

/// Temperature `p / rho`.
pub fn temperature(s: &PrimState) -> Result<f64> {
    s.validate()?;
    Ok(s.p / s.rho)
}
