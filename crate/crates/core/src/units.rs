//! Bridge between the dimensionless model and laboratory quantities.
//!
//! The slab potential is magnetic: V0 = mu b0 / 2 per channel, so the
//! energy ratio epsilon = V0/E ties the field strength b0 to the
//! particle speed. Default constants describe the neutron.

use crate::error::{Error, Result};

/// Particle constants entering the conversions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitsBridge {
    /// Particle mass in kg.
    pub mass: f64,
    /// Magnetic moment magnitude in J/T.
    pub moment: f64,
    /// Reduced Planck constant in J s.
    pub hbar: f64,
}

/// Neutron values: mass 1.675e-27 kg, moment 9.662e-27 J/T.
pub const NEUTRON: UnitsBridge = UnitsBridge {
    mass: 1.675e-27,
    moment: 9.662e-27,
    hbar: 1.054571817e-34,
};

/// Bohr magneton in J/T, the moment scale of electronic magnetism.
pub const BOHR_MAGNETON: f64 = 9.27e-24;

impl Default for UnitsBridge {
    fn default() -> Self {
        NEUTRON
    }
}

impl UnitsBridge {
    /// Field strength b0 (tesla) that places a particle of speed `v`
    /// (m/s) on the resonance family with channel-mode ratio `q` > 1:
    ///
    ///   b0 = ((q^2 - 1)/(q^2 + 1)) (m / mu) v^2.
    ///
    /// The mass-to-moment prefactor is about 0.1734 kg T / J for the
    /// neutron, so metre-per-second speeds need sub-tesla fields.
    pub fn field_for_speed(&self, q: f64, v: f64) -> Result<f64> {
        if !q.is_finite() || q <= 1.0 {
            return Err(Error::invalid(format!("q must be finite and > 1, got {q}")));
        }
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::invalid(format!(
                "speed must be finite and > 0, got {v}"
            )));
        }
        let shape = (q * q - 1.0) / (q * q + 1.0);
        Ok(shape * self.mass / self.moment * v * v)
    }

    /// Energy ratio epsilon = V0/E = mu b0 / (m v^2) for a field `b0`
    /// (tesla, >= 0) and speed `v` (m/s, > 0).
    pub fn epsilon_for_physical(&self, b0: f64, v: f64) -> Result<f64> {
        if !b0.is_finite() || b0 < 0.0 {
            return Err(Error::invalid(format!(
                "field must be finite and >= 0, got {b0}"
            )));
        }
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::invalid(format!(
                "speed must be finite and > 0, got {v}"
            )));
        }
        Ok(self.moment * b0 / (self.mass * v * v))
    }

    /// Speed (m/s) of a particle with wavenumber `k` in 1/m: v = hbar k / m.
    pub fn speed_for_wavenumber(&self, k: f64) -> Result<f64> {
        if !k.is_finite() || k <= 0.0 {
            return Err(Error::invalid(format!(
                "wavenumber must be finite and > 0, got {k}"
            )));
        }
        Ok(self.hbar * k / self.mass)
    }

    /// Factor by which admissible speeds grow when the moment is
    /// `moment_prime` instead: sqrt(moment'/moment). About 31 for the
    /// Bohr magneton relative to the neutron moment.
    pub fn speed_scale_for_moment(&self, moment_prime: f64) -> Result<f64> {
        if !moment_prime.is_finite() || moment_prime <= 0.0 {
            return Err(Error::invalid(format!(
                "moment must be finite and > 0, got {moment_prime}"
            )));
        }
        Ok((moment_prime / self.moment).sqrt())
    }
}
