//! Two-channel amplitude fields per spatial region.
//!
//! For phase analysis the piecewise solution is rescaled channel by
//! channel so the spinor at x = 0 equals the incident spin state; the
//! rescaling constants are fixed by the scattering amplitudes. Path
//! parameter conventions:
//!
//! * incident region: s = k x <= 0,
//! * interior:        s = pi x / L in [0, pi],
//! * transmitted:     s = k (x - L) >= 0.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::slab_kernels;
use crate::params::{Channel, ScatterParams};
use crate::scattering::{channel_scattering, Region};
use crate::spin::SpinState;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Amplitude pair and its parameter derivative at one point of a path.
#[derive(Debug, Clone, Copy)]
pub struct PathSample {
    /// (f+, f-) at s.
    pub f: [Complex64; 2],
    /// (df+/ds, df-/ds) at s.
    pub df: [Complex64; 2],
}

impl PathSample {
    /// Total squared norm |f+|^2 + |f-|^2.
    pub fn norm_sqr(&self) -> f64 {
        self.f[0].norm_sqr() + self.f[1].norm_sqr()
    }
}

/// A differentiable curve of two-channel amplitudes. Implemented by
/// [`AmplitudeField`]; tests wrap implementations to apply gauge twists.
pub trait SpinorPath {
    fn sample(&self, s: f64) -> PathSample;

    /// Closed parameter interval on which the curve is defined
    /// (infinite endpoints allowed).
    fn span(&self) -> (f64, f64);

    /// Hint for quadrature seeding: uniform panels needed so each holds
    /// at most about half an oscillation of the integrand.
    fn suggested_panels(&self, s0: f64, s1: f64) -> usize {
        let _ = (s0, s1);
        8
    }
}

#[derive(Debug, Clone, Copy)]
enum FieldKind {
    /// f_l(s) = scale_l (e^{is} + rho_l e^{-is})
    Incident {
        rho: [Complex64; 2],
        scale: [Complex64; 2],
    },
    /// f_l(s) = scale_l (C(w_l, u) + i kL S(w_l, u)), u = s/pi - 1
    Interior {
        w: [f64; 2],
        kl: f64,
        scale: [Complex64; 2],
    },
    /// f_l(s) = amp_l e^{is}
    Transmitted { amp: [Complex64; 2] },
}

/// Spin-resolved amplitude field of one region, normalized so that the
/// spinor at the region's reference point (x = 0 for the incident and
/// interior regions, x = L for the transmitted one) equals the incident
/// spin state mapped there.
#[derive(Debug, Clone, Copy)]
pub struct AmplitudeField {
    region: Region,
    kind: FieldKind,
}

impl AmplitudeField {
    /// Builds the field for `region`.
    ///
    /// Fails with `DegenerateNormalization` when an occupied incident
    /// channel reflects perfectly out of phase, making the value at
    /// x = 0 vanish; no other input is rejected.
    pub fn new(params: &ScatterParams, spin: &SpinState, region: Region) -> Result<Self> {
        let c = spin.components();
        let kind = match region {
            Region::Incident => {
                let mut rho = [Complex64::default(); 2];
                let mut scale = [Complex64::default(); 2];
                for channel in Channel::BOTH {
                    let i = channel.index();
                    let sc = channel_scattering(params, channel);
                    rho[i] = sc.rho;
                    let den = Complex64::new(1.0, 0.0) + sc.rho;
                    if c[i].norm_sqr() == 0.0 {
                        scale[i] = Complex64::default();
                    } else if den.norm() < 1e-14 {
                        return Err(Error::DegenerateNormalization);
                    } else {
                        scale[i] = c[i] / den;
                    }
                }
                FieldKind::Incident { rho, scale }
            }
            Region::Interior => {
                let mut w = [0.0; 2];
                let mut scale = [Complex64::default(); 2];
                for channel in Channel::BOTH {
                    let i = channel.index();
                    w[i] = params.channel_kappa_sq_l2(channel);
                    let (ck, sk) = slab_kernels(w[i], 1.0);
                    // |C - i kL S|^2 = C^2 + (kL)^2 S^2 >= 1/(1 + epsilon) > 0
                    let den = Complex64::new(ck, -params.kl * sk);
                    scale[i] = c[i] / den;
                }
                FieldKind::Interior {
                    w,
                    kl: params.kl,
                    scale,
                }
            }
            Region::Transmitted => {
                let mut amp = [Complex64::default(); 2];
                for channel in Channel::BOTH {
                    let i = channel.index();
                    amp[i] = channel_scattering(params, channel).passage * c[i];
                }
                FieldKind::Transmitted { amp }
            }
        };
        Ok(AmplitudeField { region, kind })
    }

    pub fn region(&self) -> Region {
        self.region
    }
}

impl SpinorPath for AmplitudeField {
    fn sample(&self, s: f64) -> PathSample {
        match self.kind {
            FieldKind::Incident { rho, scale } => {
                let fwd = Complex64::from_polar(1.0, s);
                let bwd = fwd.conj();
                let mut f = [Complex64::default(); 2];
                let mut df = [Complex64::default(); 2];
                for i in 0..2 {
                    f[i] = scale[i] * (fwd + rho[i] * bwd);
                    df[i] = scale[i] * I * (fwd - rho[i] * bwd);
                }
                PathSample { f, df }
            }
            FieldKind::Interior { w, kl, scale } => {
                let u = s / std::f64::consts::PI - 1.0;
                let mut f = [Complex64::default(); 2];
                let mut df = [Complex64::default(); 2];
                for i in 0..2 {
                    let (ck, sk) = slab_kernels(w[i], u);
                    f[i] = scale[i] * Complex64::new(ck, kl * sk);
                    df[i] =
                        scale[i] * Complex64::new(-w[i] * sk, kl * ck) / std::f64::consts::PI;
                }
                PathSample { f, df }
            }
            FieldKind::Transmitted { amp } => {
                let phase = Complex64::from_polar(1.0, s);
                let f = [amp[0] * phase, amp[1] * phase];
                PathSample {
                    f,
                    df: [I * f[0], I * f[1]],
                }
            }
        }
    }

    fn span(&self) -> (f64, f64) {
        match self.region {
            Region::Incident => (f64::NEG_INFINITY, 0.0),
            Region::Interior => (0.0, std::f64::consts::PI),
            Region::Transmitted => (0.0, f64::INFINITY),
        }
    }

    fn suggested_panels(&self, s0: f64, s1: f64) -> usize {
        let pi = std::f64::consts::PI;
        let span = (s1 - s0).abs();
        let per_unit = match self.kind {
            // |f|^2 carries cos(delta - 2s): half-period pi/2
            FieldKind::Incident { .. } => 4.0 / pi,
            // fastest phase rate is sqrt(w-)/pi per unit s
            FieldKind::Interior { w, .. } => {
                let wmax = w[0].max(w[1]).max(0.0);
                2.0 * wmax.sqrt() / (pi * pi)
            }
            FieldKind::Transmitted { .. } => 1.0 / pi,
        };
        ((span * per_unit).ceil() as usize + 4).max(8)
    }
}

/// One point of a Bloch-sphere trace.
#[derive(Debug, Clone, Copy)]
pub struct BlochSample {
    /// Path parameter.
    pub s: f64,
    /// Unit polarization vector (n_x, n_y, n_z), or `None` when the
    /// norm at this sample is too small to define a direction.
    pub n: Option<[f64; 3]>,
    /// Total squared amplitude |f+|^2 + |f-|^2 in the field's
    /// normalization; decaying inside a tunneling slab.
    pub norm: f64,
}

/// Polarization trace on a uniform grid over one period of the region
/// ([-pi, 0] incident, [0, pi] interior and transmitted).
///
/// `samples` grid points, at least 2.
pub fn bloch_trajectory(
    params: &ScatterParams,
    spin: &SpinState,
    region: Region,
    samples: usize,
) -> Result<Vec<BlochSample>> {
    if samples < 2 {
        return Err(Error::invalid(format!(
            "trajectory needs at least 2 samples, got {samples}"
        )));
    }
    let field = AmplitudeField::new(params, spin, region)?;
    let pi = std::f64::consts::PI;
    let (lo, hi) = match region {
        Region::Incident => (-pi, 0.0),
        _ => (0.0, pi),
    };
    let mut out = Vec::with_capacity(samples);
    for j in 0..samples {
        let s = lo + (hi - lo) * j as f64 / (samples - 1) as f64;
        let PathSample { f, .. } = field.sample(s);
        let norm = f[0].norm_sqr() + f[1].norm_sqr();
        let n = if norm < 1e-280 {
            None
        } else {
            let cross = f[0].conj() * f[1];
            Some([
                2.0 * cross.re / norm,
                2.0 * cross.im / norm,
                (f[0].norm_sqr() - f[1].norm_sqr()) / norm,
            ])
        };
        out.push(BlochSample { s, n, norm });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::PI;

    fn resonant_24() -> ScatterParams {
        ScatterParams::new(0.6, 10.0_f64.sqrt() * PI).unwrap()
    }

    #[test]
    fn fields_start_at_the_spin_state() {
        let spin = SpinState::from_angles(1.1, 0.4).unwrap();
        for &eps in &[0.3, 1.0, 2.5] {
            let p = ScatterParams::new(eps, 4.2).unwrap();
            for region in [Region::Incident, Region::Interior] {
                let field = AmplitudeField::new(&p, &spin, region).unwrap();
                let PathSample { f, .. } = field.sample(0.0);
                assert_abs_diff_eq!((f[0] - spin.c_plus).norm(), 0.0, epsilon = 1e-12);
                assert_abs_diff_eq!((f[1] - spin.c_minus).norm(), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn incident_and_interior_agree_at_the_junction() {
        let spin = SpinState::from_angles(2.0, 1.0).unwrap();
        let p = ScatterParams::new(0.8, 3.7).unwrap();
        let a = AmplitudeField::new(&p, &spin, Region::Incident).unwrap();
        let b = AmplitudeField::new(&p, &spin, Region::Interior).unwrap();
        let (fa, fb) = (a.sample(0.0), b.sample(0.0));
        for i in 0..2 {
            assert_abs_diff_eq!((fa.f[i] - fb.f[i]).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn resonant_interior_is_cyclic_up_to_mode_sign() {
        let spin = SpinState::from_angles(1.9, 0.0).unwrap();
        let field = AmplitudeField::new(&resonant_24(), &spin, Region::Interior).unwrap();
        let start = field.sample(0.0);
        let end = field.sample(PI);
        // n+ = 2 even: strictly periodic
        for i in 0..2 {
            assert!((end.f[i] - start.f[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn transmitted_field_only_rotates_a_global_phase() {
        let spin = SpinState::from_angles(0.9, 0.2).unwrap();
        let p = ScatterParams::new(0.5, 2.0).unwrap();
        let field = AmplitudeField::new(&p, &spin, Region::Transmitted).unwrap();
        let a = field.sample(0.3);
        let b = field.sample(1.7);
        let rot = Complex64::from_polar(1.0, 1.4);
        for i in 0..2 {
            assert!((b.f[i] - rot * a.f[i]).norm() < 1e-13);
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let spin = SpinState::from_angles(1.3, 0.7).unwrap();
        for &eps in &[0.4, 1.0, 3.0] {
            let p = ScatterParams::new(eps, 5.1).unwrap();
            for region in [Region::Incident, Region::Interior, Region::Transmitted] {
                let field = AmplitudeField::new(&p, &spin, region).unwrap();
                let s = match region {
                    Region::Incident => -0.8,
                    _ => 1.9,
                };
                let h = 1e-6;
                let a = field.sample(s - h);
                let b = field.sample(s + h);
                let mid = field.sample(s);
                for i in 0..2 {
                    let fd = (b.f[i] - a.f[i]) / (2.0 * h);
                    assert!(
                        (fd - mid.df[i]).norm() < 1e-8 * (1.0 + mid.df[i].norm()),
                        "{region:?} channel {i}: fd {fd:?} vs {:?}",
                        mid.df[i]
                    );
                }
            }
        }
    }

    #[test]
    fn aligned_spin_stays_on_the_pole() {
        let spin = SpinState::from_angles(0.0, 0.0).unwrap();
        let p = ScatterParams::new(0.7, 2.9).unwrap();
        let traj = bloch_trajectory(&p, &spin, Region::Interior, 33).unwrap();
        for sample in traj {
            let n = sample.n.unwrap();
            assert_abs_diff_eq!(n[0], 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(n[1], 0.0, epsilon = 1e-14);
            assert_relative_eq!(n[2], 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn polarization_is_unit_whenever_defined() {
        let spin = SpinState::from_angles(PI / 3.0, 0.0).unwrap();
        for &eps in &[0.5, 1.01, 2.0] {
            let p = ScatterParams::from_kminus(eps, 5.0 * PI).unwrap();
            for region in [Region::Incident, Region::Interior] {
                let traj = bloch_trajectory(&p, &spin, region, 65).unwrap();
                for sample in &traj {
                    let n = sample.n.unwrap();
                    let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
                    assert_relative_eq!(len, 1.0, max_relative = 1e-10);
                    assert!(sample.norm > 0.0);
                }
            }
        }
    }

    #[test]
    fn tunneling_trace_decays_and_flips_south() {
        // kappa- L = 5 pi, spin (sqrt(3)/2, 1/2)
        let spin = SpinState::from_angles(PI / 3.0, 0.0).unwrap();
        let p = ScatterParams::from_kminus(2.0, 5.0 * PI).unwrap();
        let traj = bloch_trajectory(&p, &spin, Region::Interior, 129).unwrap();
        let first = &traj[0];
        let last = &traj[traj.len() - 1];
        assert_relative_eq!(first.norm, 1.0, max_relative = 1e-12);
        assert!(last.norm < first.norm);
        assert!(last.n.unwrap()[2] < -0.9, "n_z = {}", last.n.unwrap()[2]);
    }

    #[test]
    fn trajectory_needs_two_samples() {
        let spin = SpinState::from_angles(1.0, 0.0).unwrap();
        let p = ScatterParams::new(0.5, 2.0).unwrap();
        assert!(bloch_trajectory(&p, &spin, Region::Interior, 1).is_err());
    }
}
