//! Stationary scattering of one spin channel on the slab.
//!
//! Everything here is per channel: the channel fixes the signed squared
//! interior wavenumber kappa^2 L^2 and the rest is textbook matching of
//! plane waves across two junctions, written so that only entire
//! functions of kappa^2 appear. The oscillatory, marginal (kappa = 0)
//! and evanescent regimes share one code path.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::slab_kernels;
use crate::params::{Channel, ScatterParams};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Spatial region of the piecewise solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// x <= 0: incident plus reflected wave.
    Incident,
    /// 0 <= x <= L: interior of the slab.
    Interior,
    /// x >= L: transmitted wave.
    Transmitted,
}

/// Scattering data for one channel at one parameter point.
///
/// `t_amp` is the flux-normalized transmission amplitude (incident and
/// transmitted media are identical, so r + |t_amp|^2 = 1 with no
/// wavenumber weighting). `passage` is a different object: the factor by
/// which the channel amplitude changes between the slab faces when the
/// solution is rescaled to equal the spin component at x = 0, which is
/// the normalization the phase analysis uses. The two agree exactly at
/// transparency, where the reflected wave is absent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelScattering {
    /// Reflection probability |rho|^2.
    pub r: f64,
    /// Reflection phase arg(rho) in (-pi, pi]; 0 when r = 0.
    pub delta: f64,
    /// Complex reflection amplitude rho = sqrt(r) e^{i delta}.
    pub rho: Complex64,
    /// Flux-normalized transmission amplitude.
    pub t_amp: Complex64,
    /// Face-to-face amplitude map of the value-normalized solution.
    pub passage: Complex64,
    /// Coefficient of e^{i kappa x} inside the slab for unit incident
    /// amplitude. `None` at kappa^2 = 0 exactly, where the exponential
    /// basis degenerates and the coefficients individually diverge even
    /// though the solution itself stays finite.
    pub a_coef: Option<Complex64>,
    /// Coefficient of e^{-i kappa x} inside the slab; `None` as above.
    pub b_coef: Option<Complex64>,
}

/// Scattering amplitudes for a known interior squared wavenumber.
///
/// `kl` is the outside product kL > 0 and `kappa_sq_l2` the signed
/// interior kappa^2 L^2. Exposed separately from [`channel_scattering`]
/// because the formulas depend on the channel only through this one
/// signed number.
pub fn scattering_for_kappa_sq(kl: f64, kappa_sq_l2: f64) -> ChannelScattering {
    let (c, s) = slab_kernels(kappa_sq_l2, 1.0);
    let kl_sq = kl * kl;
    // n = (k^2 + kappa^2) sin(kappa L)/kappa + 2 i k cos(kappa L), scaled by L
    let n = Complex64::new((kl_sq + kappa_sq_l2) * s, 2.0 * kl * c);
    let rho = Complex64::new((kl_sq - kappa_sq_l2) * s, 0.0) / n;
    let t_amp = 2.0 * kl * I / n;
    let passage = Complex64::new(1.0, 0.0) / Complex64::new(c, -kl * s);

    let (a_coef, b_coef) = if kappa_sq_l2 == 0.0 {
        (None, None)
    } else {
        let kappa_l = Complex64::new(kappa_sq_l2, 0.0).sqrt();
        let one = Complex64::new(1.0, 0.0);
        let sum = one + rho;
        let diff = (kl / kappa_l) * (one - rho);
        (Some(0.5 * (sum + diff)), Some(0.5 * (sum - diff)))
    };

    ChannelScattering {
        r: rho.norm_sqr(),
        delta: rho.arg(),
        rho,
        t_amp,
        passage,
        a_coef,
        b_coef,
    }
}

/// Scattering amplitudes for the given spin channel.
pub fn channel_scattering(params: &ScatterParams, channel: Channel) -> ChannelScattering {
    scattering_for_kappa_sq(params.kl, params.channel_kappa_sq_l2(channel))
}

/// Value and d/dx~ derivative of one channel's scattering solution,
/// with x~ = x/L and unit incident amplitude.
///
/// The requested region's closed form is evaluated even slightly outside
/// its physical domain; that is what makes junction mismatch measurable.
pub fn region_waveform(
    params: &ScatterParams,
    channel: Channel,
    region: Region,
    x_over_l: f64,
) -> (Complex64, Complex64) {
    let kl = params.kl;
    let w = params.channel_kappa_sq_l2(channel);
    let sc = scattering_for_kappa_sq(kl, w);
    match region {
        Region::Incident => {
            let fwd = Complex64::from_polar(1.0, kl * x_over_l);
            let bwd = sc.rho * fwd.conj();
            (fwd + bwd, I * kl * (fwd - bwd))
        }
        Region::Interior => {
            let (c, s) = slab_kernels(w, x_over_l - 1.0);
            let value = sc.t_amp * Complex64::new(c, kl * s);
            let deriv = sc.t_amp * Complex64::new(-w * s, kl * c);
            (value, deriv)
        }
        Region::Transmitted => {
            let value = sc.t_amp * Complex64::from_polar(1.0, kl * (x_over_l - 1.0));
            (value, I * kl * value)
        }
    }
}

/// Maximum junction mismatch |delta psi| + |delta psi'| over both
/// channels and both slab faces, for unit incident amplitude.
///
/// An exact solution gives zero; floating-point evaluation should stay
/// below 1e-10 over the physical parameter range, so this is a cheap
/// whole-pipeline self-test.
pub fn continuity_check(params: &ScatterParams) -> f64 {
    let mut worst = 0.0_f64;
    for channel in Channel::BOTH {
        let pairs = [
            (Region::Incident, Region::Interior, 0.0),
            (Region::Interior, Region::Transmitted, 1.0),
        ];
        for (left, right, x) in pairs {
            let (lv, ld) = region_waveform(params, channel, left, x);
            let (rv, rd) = region_waveform(params, channel, right, x);
            worst = worst.max((lv - rv).norm() + (ld - rd).norm());
        }
    }
    worst
}

/// Interior-basis ratio B/A predicted by direct matching at the far
/// face: e^{2 i kappa L} (kappa - k)/(kappa + k). Test hook for the
/// coefficient pair stored in [`ChannelScattering`].
pub fn interior_ratio(params: &ScatterParams, channel: Channel) -> Result<Complex64> {
    let w = params.channel_kappa_sq_l2(channel);
    if w == 0.0 {
        return Err(Error::invalid(
            "interior exponential basis degenerates at kappa^2 = 0",
        ));
    }
    let kappa_l = Complex64::new(w, 0.0).sqrt();
    let kl = params.kl;
    Ok((2.0 * I * kappa_l).exp() * (kappa_l - kl) / (kappa_l + kl))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::PI;

    fn params(eps: f64, kl: f64) -> ScatterParams {
        ScatterParams::new(eps, kl).unwrap()
    }

    #[test]
    fn transparent_at_resonance() {
        // kappa+ L = 2 pi, kappa- L = 4 pi
        let p = params(0.6, 10.0_f64.sqrt() * PI);
        for (channel, n) in [(Channel::Plus, 2), (Channel::Minus, 4)] {
            let sc = channel_scattering(&p, channel);
            assert!(sc.r < 1e-24, "r = {:e}", sc.r);
            assert_eq!(sc.delta, sc.rho.arg());
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert_relative_eq!(sc.t_amp.re, sign, max_relative = 1e-12);
            assert_abs_diff_eq!(sc.t_amp.im, 0.0, epsilon = 1e-12);
            // at transparency the two transmission notions coincide
            assert_abs_diff_eq!((sc.t_amp - sc.passage).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn free_propagation_at_zero_ratio() {
        let p = params(0.0, 2.3);
        for channel in Channel::BOTH {
            let sc = channel_scattering(&p, channel);
            assert!(sc.r < 1e-30);
            assert_eq!(sc.delta, 0.0);
            // t = e^{i k L}
            assert_relative_eq!(sc.t_amp.arg(), 2.3, max_relative = 1e-12);
            assert_relative_eq!(sc.t_amp.norm(), 1.0, max_relative = 1e-13);
        }
    }

    #[test]
    fn flux_is_conserved_across_regimes() {
        for &eps in &[0.0, 0.3, 0.99, 1.0, 1.01, 2.0, 5.0, 10.0] {
            for &kl in &[0.3, 1.0, 4.0, 9.93, 20.0] {
                let p = params(eps, kl);
                for channel in Channel::BOTH {
                    let sc = channel_scattering(&p, channel);
                    assert_abs_diff_eq!(sc.r + sc.t_amp.norm_sqr(), 1.0, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn channel_enters_only_through_kappa_sq() {
        // the well channel at ratio eps equals the barrier channel at -eps:
        // both reduce to the same signed kappa^2 L^2 argument
        for &eps in &[0.2, 0.7, 1.5] {
            let p = params(eps, 3.1);
            // rounding differs between (kl sqrt(1+eps))^2 and kl^2 (1+eps)
            let pairs = [
                (Channel::Minus, p.kl_sq() * (1.0 + eps)),
                (Channel::Plus, p.kl_sq() * (1.0 - eps)),
            ];
            for (channel, kappa_sq) in pairs {
                let via_channel = channel_scattering(&p, channel);
                let direct = scattering_for_kappa_sq(p.kl, kappa_sq);
                assert_relative_eq!(via_channel.r, direct.r, max_relative = 1e-12);
                assert_abs_diff_eq!(via_channel.delta, direct.delta, epsilon = 1e-12);
                assert_abs_diff_eq!(
                    (via_channel.t_amp - direct.t_amp).norm(),
                    0.0,
                    epsilon = 1e-12
                );
                assert_abs_diff_eq!(
                    (via_channel.passage - direct.passage).norm(),
                    0.0,
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn marginal_channel_is_finite_with_degenerate_basis() {
        let p = params(1.0, 5.0);
        let sc = channel_scattering(&p, Channel::Plus);
        assert!(sc.r.is_finite() && sc.t_amp.is_finite());
        assert!(sc.a_coef.is_none() && sc.b_coef.is_none());
        assert!(interior_ratio(&p, Channel::Plus).is_err());
        assert_abs_diff_eq!(sc.r + sc.t_amp.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn interior_coefficients_match_far_face_ratio() {
        for &eps in &[0.3, 0.9, 1.2, 3.0] {
            for &kl in &[1.1, 4.0, 12.4] {
                let p = params(eps, kl);
                for channel in Channel::BOTH {
                    let sc = channel_scattering(&p, channel);
                    let (a, b) = (sc.a_coef.unwrap(), sc.b_coef.unwrap());
                    let expected = interior_ratio(&p, channel).unwrap();
                    assert!((b / a - expected).norm() < 1e-10,
                        "eps={eps} kl={kl} {channel:?}: {:?} vs {expected:?}", b / a);
                }
            }
        }
    }

    #[test]
    fn deep_barrier_attenuation_is_monotone() {
        for &eps in &[2.0, 5.0] {
            let mut prev = f64::INFINITY;
            for i in 1..=16 {
                let kl = 0.5 * i as f64;
                let sc = channel_scattering(&params(eps, kl), Channel::Plus);
                let t = sc.t_amp.norm();
                assert!(t < prev, "eps={eps}: |t|({kl}) = {t} did not decrease");
                prev = t;
            }
        }
    }

    #[test]
    fn junctions_close_everywhere() {
        for &eps in &[0.0, 0.5, 1.0, 1.0 + 1e-12, 2.0, 5.0] {
            for &kl in &[0.4, 2.0, 9.934, 25.0] {
                let m = continuity_check(&params(eps, kl));
                assert!(m < 1e-10, "eps={eps} kl={kl}: mismatch {m:e}");
            }
        }
    }

    #[test]
    fn incident_region_interferes_with_reflection() {
        let p = params(0.8, 2.0);
        let sc = channel_scattering(&p, Channel::Plus);
        let (v, _) = region_waveform(&p, Channel::Plus, Region::Incident, 0.0);
        assert_abs_diff_eq!((v - (1.0 + sc.rho)).norm(), 0.0, epsilon = 1e-14);
    }
}
