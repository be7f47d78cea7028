//! Simultaneous-resonance lattice: parameter points where both spin
//! channels cross the slab without reflection.
//!
//! A channel is transparent when kappa_l L is an integer multiple of
//! pi. Demanding this for both channels at once fixes the dimensionless
//! inputs completely in terms of two integers of equal parity:
//!
//!   kL = pi sqrt((n+^2 + n-^2)/2),   epsilon = (n-^2 - n+^2)/(n-^2 + n+^2).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::params::ScatterParams;
use crate::units::UnitsBridge;

/// One point of the simultaneous-resonance lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceSpec {
    pub n_plus: u32,
    pub n_minus: u32,
    /// Winding count (n- - n+)/2; zero only for trivial pairs.
    pub xi: u32,
    /// Mode ratio n-/n+.
    pub q: f64,
    /// Barrier-to-energy ratio at the lattice point, always < 1.
    pub epsilon: f64,
    /// Dimensionless wavenumber kL.
    pub kl: f64,
    /// Zeeman scale kappa0 L = kL sqrt(epsilon).
    pub kappa0_l: f64,
}

impl ResonanceSpec {
    fn from_integers(n_plus: u32, n_minus: u32) -> Self {
        let (np, nm) = (n_plus as f64, n_minus as f64);
        let sum = np * np + nm * nm;
        ResonanceSpec {
            n_plus,
            n_minus,
            xi: (n_minus - n_plus) / 2,
            q: nm / np,
            epsilon: (nm * nm - np * np) / sum,
            kl: PI * (0.5 * sum).sqrt(),
            kappa0_l: PI * (0.5 * (nm * nm - np * np)).sqrt(),
        }
    }

    /// The scattering parameters this lattice point pins down.
    pub fn params(&self) -> Result<ScatterParams> {
        ScatterParams::new(self.epsilon, self.kl)
    }
}

/// Builds the lattice point for mode counts (n+, n-).
///
/// Requires n- > n+ >= 1 and equal parity; an odd/even mixture cannot
/// close the spin evolution and is rejected as `ParityMismatch`.
pub fn spec_from_pair(n_plus: u32, n_minus: u32) -> Result<ResonanceSpec> {
    if n_plus < 1 || n_minus <= n_plus {
        return Err(Error::invalid(format!(
            "mode counts must satisfy 1 <= n+ < n-, got ({n_plus}, {n_minus})"
        )));
    }
    if n_plus % 2 != n_minus % 2 {
        return Err(Error::ParityMismatch { n_plus, n_minus });
    }
    Ok(ResonanceSpec::from_integers(n_plus, n_minus))
}

/// All lattice points at the given kL: integer pairs n- >= n+ >= 1 of
/// equal parity with n+^2 + n-^2 = 2 (kL/pi)^2 within 1e-9.
///
/// Pairs with n- = n+ mean zero field and carry no winding; they are
/// emitted only when `include_trivial` is set. The result is sorted by
/// ascending n+, and empty when kL misses the lattice.
pub fn resonances_for_kl(kl: f64, include_trivial: bool) -> Result<Vec<ResonanceSpec>> {
    if !(kl > 0.0) || !kl.is_finite() {
        return Err(Error::invalid(format!(
            "dimensionless wavenumber must be finite and > 0, got {kl}"
        )));
    }
    let target = 2.0 * (kl / PI) * (kl / PI);
    let mut found = Vec::new();
    // n+ <= n- forces 2 n+^2 <= target
    let np_max = (target / 2.0).sqrt().round() as u32 + 1;
    for n_plus in 1..=np_max {
        let np_sq = (n_plus * n_plus) as f64;
        let rem = target - np_sq;
        if rem < np_sq - 1e-9 {
            continue;
        }
        let n_minus = rem.sqrt().round() as u32;
        if n_minus < n_plus || n_minus % 2 != n_plus % 2 {
            continue;
        }
        let sum = np_sq + (n_minus * n_minus) as f64;
        if (sum - target).abs() > 1e-9 {
            continue;
        }
        if n_minus == n_plus {
            if include_trivial {
                found.push(ResonanceSpec::from_integers(n_plus, n_minus));
            }
        } else {
            found.push(spec_from_pair(n_plus, n_minus)?);
        }
    }
    Ok(found)
}

/// Physical realization of a lattice point for slab thickness `length`
/// in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalPoint {
    /// Particle speed in m/s.
    pub speed: f64,
    /// Field strength inside the slab in Tesla.
    pub field: f64,
}

/// Maps a lattice point to beam speed and field strength for a slab of
/// the given thickness, using the particle constants in `bridge`.
///
/// Speed comes from the wavenumber, v = hbar (kL/L) / m; the field from
/// the mode ratio at that speed. Trivial points (q = 1) need no field.
pub fn physical_point(
    spec: &ResonanceSpec,
    length: f64,
    bridge: &UnitsBridge,
) -> Result<PhysicalPoint> {
    if !(length > 0.0) || !length.is_finite() {
        return Err(Error::invalid(format!(
            "slab thickness must be finite and > 0, got {length}"
        )));
    }
    let speed = bridge.speed_for_wavenumber(spec.kl / length)?;
    let field = if spec.xi == 0 {
        0.0
    } else {
        bridge.field_for_speed(spec.q, speed)?
    };
    Ok(PhysicalPoint { speed, field })
}
