//! Incident spin state.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Normalized spinor (c+, c-) in the field-axis basis.
///
/// The two components weight the barrier and well channels; everything
/// downstream is linear in them, so unit norm is enforced once here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinState {
    pub c_plus: Complex64,
    pub c_minus: Complex64,
}

impl SpinState {
    /// Builds a state from explicit components, requiring
    /// |c+|^2 + |c-|^2 = 1 within 1e-12.
    pub fn new(c_plus: Complex64, c_minus: Complex64) -> Result<Self> {
        let norm = c_plus.norm_sqr() + c_minus.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "spinor must have unit norm, got |c|^2 = {norm}"
            )));
        }
        Ok(SpinState { c_plus, c_minus })
    }

    /// Spin direction from polar angle `theta` in [0, pi] measured from
    /// the field axis and azimuth `phi`:
    /// c+ = cos(theta/2), c- = e^{i phi} sin(theta/2).
    pub fn from_angles(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::invalid(format!(
                "theta must lie in [0, pi], got {theta}"
            )));
        }
        if !phi.is_finite() {
            return Err(Error::invalid(format!("phi must be finite, got {phi}")));
        }
        let half = 0.5 * theta;
        Ok(SpinState {
            c_plus: Complex64::new(half.cos(), 0.0),
            c_minus: Complex64::from_polar(half.sin(), phi),
        })
    }

    /// Components as a `[plus, minus]` array.
    pub fn components(&self) -> [Complex64; 2] {
        [self.c_plus, self.c_minus]
    }

    /// Channel occupation probabilities |c+|^2, |c-|^2.
    pub fn weights(&self) -> [f64; 2] {
        [self.c_plus.norm_sqr(), self.c_minus.norm_sqr()]
    }
}
