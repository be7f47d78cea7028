//! Spin-dependent scattering of a plane wave on a uniform magnetic
//! slab, and the open-path geometric phase of the resulting spinor
//! amplitude curves.
//!
//! A spin-1/2 particle of energy E crosses a slab of thickness L with
//! a uniform field inside. The two spin channels along the field see
//! potentials of opposite sign, so each scatters with its own
//! reflection and transmission amplitude; superpositions of the
//! channels trace out curves of spinor amplitudes in every spatial
//! region. This crate computes those amplitudes ([`scattering`]),
//! exposes the curves as paths ([`field`]), and evaluates their
//! geometric phase by several independent routes ([`geophase`]):
//! direct quadrature of the connection, a finite-overlap chain, and
//! closed forms available at slab resonances ([`resonance`]) and in
//! the ideal fast-passage limit.
//!
//! Everything is dimensionless: inputs are the barrier-to-energy ratio
//! epsilon and the reduced wavenumber kL ([`params`]), plus a spinor
//! orientation ([`spin`]). The [`units`] module converts between this
//! parametrization and laboratory field strengths and beam speeds.
//!
//! ```
//! use spinslab::{resonant_gp, SpinState};
//! use std::f64::consts::PI;
//!
//! // one precession turn, spin opposed to the field: a full -2 pi
//! let spin = SpinState::from_angles(PI, 0.0).unwrap();
//! let gp = resonant_gp(2, 4, &spin, 1e-10).unwrap();
//! assert!((gp.value.raw + 2.0 * PI).abs() < 1e-8);
//! ```

pub mod error;
pub mod field;
pub mod geophase;
pub mod kernels;
pub mod params;
pub mod quadrature;
pub mod resonance;
pub mod scattering;
pub mod spin;
pub mod units;

pub use error::{Error, Result};
pub use field::{bloch_trajectory, AmplitudeField, BlochSample, PathSample, SpinorPath};
pub use geophase::{
    circle_distance, highspeed_gp, open_path_gp, pancharatnam_oracle, prebarrier_gp,
    prebarrier_gp_from_reflections, resonant_gp, tunnel_gp, GpValue, ResonantGp,
};
pub use kernels::slab_kernels;
pub use params::{Channel, ScatterParams};
pub use quadrature::{integrate, QuadOptions, QuadResult};
pub use resonance::{physical_point, resonances_for_kl, spec_from_pair, PhysicalPoint, ResonanceSpec};
pub use scattering::{
    channel_scattering, continuity_check, interior_ratio, region_waveform, ChannelScattering,
    Region,
};
pub use spin::SpinState;
pub use units::{UnitsBridge, BOHR_MAGNETON, NEUTRON};
