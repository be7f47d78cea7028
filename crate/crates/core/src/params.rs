//! Dimensionless problem parameters.
//!
//! A plane wave with wavenumber k crosses a slab of width L carrying a
//! uniform field along z. The two spin channels see opposite potential
//! shifts of magnitude V0, so everything is fixed by two numbers: the
//! potential-to-energy ratio epsilon = V0/E and the product kL.

use crate::error::{Error, Result};

/// Spin channel along the field axis. `Plus` sees the barrier +V0,
/// `Minus` the well -V0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Plus,
    Minus,
}

impl Channel {
    pub const BOTH: [Channel; 2] = [Channel::Plus, Channel::Minus];

    /// +1 for `Plus`, -1 for `Minus`; the sign of the potential shift.
    pub fn sign(self) -> f64 {
        match self {
            Channel::Plus => 1.0,
            Channel::Minus => -1.0,
        }
    }

    /// Index 0 for `Plus`, 1 for `Minus`, matching the `[plus, minus]`
    /// array layout used throughout the crate.
    pub fn index(self) -> usize {
        match self {
            Channel::Plus => 0,
            Channel::Minus => 1,
        }
    }
}

/// Dimensionless scattering parameters for one (epsilon, kL) point.
///
/// Derived quantities are stored eagerly; all are simple functions of
/// the two inputs. `kplus_sq_l2` is kept in squared form because it
/// changes sign at epsilon = 1, where the barrier channel turns
/// evanescent, and the interior kernels consume the squared value
/// directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterParams {
    /// Potential-to-energy ratio V0/E (>= 0).
    pub epsilon: f64,
    /// Incident wavenumber times slab width (> 0).
    pub kl: f64,
    /// Zeeman wavenumber scale: kappa0 L = kL sqrt(epsilon).
    pub kappa0_l: f64,
    /// Signed squared barrier-channel wavenumber: kappa+^2 L^2 = (kL)^2 (1 - epsilon).
    pub kplus_sq_l2: f64,
    /// Well-channel wavenumber: kappa- L = kL sqrt(1 + epsilon).
    pub kminus_l: f64,
}

impl ScatterParams {
    /// Builds parameters from the energy ratio and kL.
    ///
    /// Requires `epsilon >= 0` and `kl > 0`, both finite.
    pub fn new(epsilon: f64, kl: f64) -> Result<Self> {
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(Error::invalid(format!(
                "epsilon must be finite and >= 0, got {epsilon}"
            )));
        }
        if !kl.is_finite() || kl <= 0.0 {
            return Err(Error::invalid(format!("kL must be finite and > 0, got {kl}")));
        }
        let kl_sq = kl * kl;
        Ok(ScatterParams {
            epsilon,
            kl,
            kappa0_l: kl * epsilon.sqrt(),
            kplus_sq_l2: kl_sq * (1.0 - epsilon),
            kminus_l: kl * (1.0 + epsilon).sqrt(),
        })
    }

    /// Builds parameters from the energy ratio and the well-channel
    /// product kappa- L, the natural handle in the tunneling regime
    /// where kappa- stays real for any epsilon.
    pub fn from_kminus(epsilon: f64, kminus_l: f64) -> Result<Self> {
        if !kminus_l.is_finite() || kminus_l <= 0.0 {
            return Err(Error::invalid(format!(
                "kappa- L must be finite and > 0, got {kminus_l}"
            )));
        }
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(Error::invalid(format!(
                "epsilon must be finite and >= 0, got {epsilon}"
            )));
        }
        Self::new(epsilon, kminus_l / (1.0 + epsilon).sqrt())
    }

    /// Signed squared wavenumber kappa^2 L^2 for the given channel.
    pub fn channel_kappa_sq_l2(&self, channel: Channel) -> f64 {
        match channel {
            Channel::Plus => self.kplus_sq_l2,
            Channel::Minus => self.kminus_l * self.kminus_l,
        }
    }

    /// (kL)^2, the squared incident wavenumber.
    pub fn kl_sq(&self) -> f64 {
        self.kl * self.kl
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn resonant_point_splits_into_integer_modes() {
        let p = ScatterParams::new(0.6, 10.0_f64.sqrt() * PI).unwrap();
        // kappa+ L = 2 pi, kappa- L = 4 pi
        assert_relative_eq!(p.kplus_sq_l2, 4.0 * PI * PI, max_relative = 1e-14);
        assert_relative_eq!(p.kminus_l, 4.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(p.kappa0_l, PI * 6.0_f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn barrier_channel_crosses_zero_at_unit_ratio() {
        let p = ScatterParams::new(1.0, 7.3).unwrap();
        assert_eq!(p.kplus_sq_l2, 0.0);
        let p = ScatterParams::new(2.0, 7.3).unwrap();
        assert_relative_eq!(p.kplus_sq_l2, -7.3 * 7.3, max_relative = 1e-15);
    }

    #[test]
    fn kminus_round_trip() {
        for &eps in &[0.0, 0.3, 1.0, 2.0, 5.0] {
            for &kl in &[0.5, 1.0, 9.93] {
                let p = ScatterParams::new(eps, kl).unwrap();
                let q = ScatterParams::from_kminus(eps, p.kminus_l).unwrap();
                assert_relative_eq!(q.kl, kl, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn channel_ordering() {
        let p = ScatterParams::new(0.4, 3.0).unwrap();
        assert!(p.kminus_l > p.kl);
        assert!(p.kl * p.kl >= p.kplus_sq_l2);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(ScatterParams::new(-0.1, 1.0).is_err());
        assert!(ScatterParams::new(0.1, 0.0).is_err());
        assert!(ScatterParams::new(f64::NAN, 1.0).is_err());
        assert!(ScatterParams::from_kminus(0.1, -1.0).is_err());
    }
}
