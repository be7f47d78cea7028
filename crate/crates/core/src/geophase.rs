//! Open-path geometric phase of the spinor amplitude curves.
//!
//! The phase of a curve |phi(s)>, s in [s0, s1], splits into a total
//! part arg<phi(s0)|phi(s1)> and a dynamical-connection part
//! integral of Im<phi|phi'> / <phi|phi>; their difference is invariant
//! under s-dependent phase redefinitions and under positive rescaling,
//! which is what makes it a property of the ray trajectory alone.
//!
//! Two independent evaluators are kept side by side: direct quadrature
//! of the connection with analytic derivatives, and a Pancharatnam
//! chain of finite overlaps that needs no derivatives at all. They are
//! compared in tests and never share intermediate results.

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::field::{AmplitudeField, SpinorPath};
use crate::params::{Channel, ScatterParams};
use crate::quadrature::{integrate, QuadOptions};
use crate::scattering::{channel_scattering, Region};
use crate::spin::SpinState;

/// A phase with explicit branch bookkeeping.
///
/// `raw` is the value the evaluator produced, which may wind through
/// several turns; `principal` is the representative in (-2 pi, 0],
/// obtained by subtracting `fold_turns` full turns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpValue {
    pub raw: f64,
    pub principal: f64,
    pub fold_turns: i64,
}

impl GpValue {
    pub fn from_raw(raw: f64) -> Self {
        let turns = (raw / TAU).ceil();
        let principal = raw - TAU * turns;
        // ceil guarantees principal <= 0; nudge open-boundary undershoot
        let (principal, turns) = if principal <= -TAU {
            (principal + TAU, turns - 1.0)
        } else {
            (principal, turns)
        };
        GpValue {
            raw,
            principal,
            fold_turns: turns as i64,
        }
    }

    /// Human-readable record of the applied folding.
    pub fn branch_note(&self) -> String {
        match self.fold_turns {
            0 => "principal = raw".to_string(),
            n => format!("principal = raw - ({n}) * 2 pi"),
        }
    }
}

/// Smallest absolute distance between two phases on the circle.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn endpoint_overlap<P: SpinorPath + ?Sized>(path: &P, s0: f64, s1: f64) -> Result<Complex64> {
    let p0 = path.sample(s0);
    let p1 = path.sample(s1);
    let overlap = p0.f[0].conj() * p1.f[0] + p0.f[1].conj() * p1.f[1];
    if overlap.norm() < 1e-12 {
        return Err(Error::OrthogonalEndpoints {
            overlap: overlap.norm(),
        });
    }
    Ok(overlap)
}

fn check_window<P: SpinorPath + ?Sized>(path: &P, s0: f64, s1: f64, quad_tol: f64) -> Result<()> {
    if !(quad_tol > 0.0) || !quad_tol.is_finite() {
        return Err(Error::invalid(format!(
            "quadrature tolerance must be finite and > 0, got {quad_tol}"
        )));
    }
    if !(s0 < s1) {
        return Err(Error::invalid(format!(
            "path window needs s0 < s1, got [{s0}, {s1}]"
        )));
    }
    let (lo, hi) = path.span();
    // tiny slack so windows built from rounded endpoints still pass
    if s0 < lo - 1e-9 || s1 > hi + 1e-9 {
        return Err(Error::invalid(format!(
            "window [{s0}, {s1}] leaves the path's domain [{lo}, {hi}]"
        )));
    }
    Ok(())
}

/// Open-path geometric phase of `path` between s0 and s1 by direct
/// quadrature of the connection, with analytic path derivatives.
///
/// `quad_tol` is the relative tolerance handed to the integrator.
/// Fails when the endpoint states are orthogonal, when the norm
/// vanishes at a quadrature node, or when the integral does not
/// converge.
pub fn open_path_gp<P: SpinorPath + ?Sized>(
    path: &P,
    s0: f64,
    s1: f64,
    quad_tol: f64,
) -> Result<GpValue> {
    check_window(path, s0, s1, quad_tol)?;
    let overlap = endpoint_overlap(path, s0, s1)?;

    let opts = QuadOptions {
        rel_tol: quad_tol,
        initial_panels: path.suggested_panels(s0, s1),
        ..QuadOptions::default()
    };
    let connection = integrate(
        |s| {
            let p = path.sample(s);
            let norm = p.norm_sqr();
            if norm < 1e-14 {
                return Err(Error::VanishingNorm { s });
            }
            let num = (p.f[0].conj() * p.df[0] + p.f[1].conj() * p.df[1]).im;
            Ok(num / norm)
        },
        s0,
        s1,
        &opts,
    )?;

    Ok(GpValue::from_raw(overlap.arg() - connection.value))
}

/// Pancharatnam-chain estimate of the same phase on a uniform mesh:
/// the total phase minus the accumulated phase of consecutive overlaps,
///
///   arg<phi(s0)|phi(s1)> - sum_j arg<phi(s_j)|phi(s_{j+1})>.
///
/// Needs only field values. Error decays as mesh^-2, which tests verify
/// by Richardson comparison. Returns the unfolded phase in radians.
pub fn pancharatnam_oracle<P: SpinorPath + ?Sized>(
    path: &P,
    s0: f64,
    s1: f64,
    mesh: usize,
) -> Result<f64> {
    check_window(path, s0, s1, 1.0)?;
    if mesh < 2 {
        return Err(Error::invalid(format!("mesh must be >= 2, got {mesh}")));
    }
    let total = endpoint_overlap(path, s0, s1)?.arg();

    let mut chained = 0.0;
    let mut prev = path.sample(s0).f;
    for j in 1..=mesh {
        let s = s0 + (s1 - s0) * j as f64 / mesh as f64;
        let cur = path.sample(s).f;
        if cur[0].norm_sqr() + cur[1].norm_sqr() < 1e-14 {
            return Err(Error::VanishingNorm { s });
        }
        let link = prev[0].conj() * cur[0] + prev[1].conj() * cur[1];
        if link.norm() < 1e-12 {
            return Err(Error::OrthogonalEndpoints {
                overlap: link.norm(),
            });
        }
        chained += link.arg();
        prev = cur;
    }
    Ok(total - chained)
}

/// Closed-form interior phase at a slab resonance, plus its winding.
#[derive(Debug, Clone, Copy)]
pub struct ResonantGp {
    pub value: GpValue,
    /// Solid-angle winding count xi = (n- - n+)/2.
    pub xi: u32,
    /// Phase per winding turn, raw / xi.
    pub per_turn: f64,
}

/// Interior geometric phase of one slab traversal at the resonance with
/// mode counts (n+, n-), both channels transparent:
///
///   gamma = pi n+ - a * integral_0^pi ds /
///           (sum_l (cos^2 n_l s + (a/n_l)^2 sin^2 n_l s) |c_l|^2),
///
/// with a = sqrt((n+^2 + n-^2)/2) = kL/pi. The leading term keeps the
/// branch that a continuous traversal accumulates, so `raw` runs from 0
/// (spin along the field) to -2 pi xi (spin opposed).
pub fn resonant_gp(
    n_plus: u32,
    n_minus: u32,
    spin: &SpinState,
    quad_tol: f64,
) -> Result<ResonantGp> {
    if n_plus < 1 || n_minus <= n_plus {
        return Err(Error::invalid(format!(
            "mode counts must satisfy 1 <= n+ < n-, got ({n_plus}, {n_minus})"
        )));
    }
    if n_plus % 2 != n_minus % 2 {
        return Err(Error::ParityMismatch {
            n_plus,
            n_minus,
        });
    }
    if !(quad_tol > 0.0) || !quad_tol.is_finite() {
        return Err(Error::invalid(format!(
            "quadrature tolerance must be finite and > 0, got {quad_tol}"
        )));
    }

    let np = n_plus as f64;
    let nm = n_minus as f64;
    let a_sq = 0.5 * (np * np + nm * nm);
    let a = a_sq.sqrt();
    let [wp, wm] = spin.weights();
    let (qp, qm) = (a_sq / (np * np), a_sq / (nm * nm));

    let opts = QuadOptions {
        rel_tol: quad_tol,
        // one panel per half-oscillation of the faster channel keeps the
        // error estimator honest for large mode counts
        initial_panels: (2 * n_minus as usize).clamp(8, 25_000),
        ..QuadOptions::default()
    };
    let integral = integrate(
        |s| {
            let (sp, cp) = (np * s).sin_cos();
            let (sm, cm) = (nm * s).sin_cos();
            let den = wp * (cp * cp + qp * sp * sp) + wm * (cm * cm + qm * sm * sm);
            Ok(1.0 / den)
        },
        0.0,
        PI,
        &opts,
    )?;

    let xi = (n_minus - n_plus) / 2;
    let raw = PI * np - a * integral.value;
    Ok(ResonantGp {
        value: GpValue::from_raw(raw),
        xi,
        per_turn: raw / xi as f64,
    })
}

/// Ideal-limit phase per cycle for winding `xi` and cone angle `theta`:
/// minus the solid angle of the spin cone, xi pi (1 - cos theta), the
/// n-/n+ -> 1 limit of [`resonant_gp`].
pub fn highspeed_gp(xi: u32, theta: f64) -> Result<GpValue> {
    if xi < 1 {
        return Err(Error::invalid("winding count must be >= 1"));
    }
    if !theta.is_finite() || !(0.0..=PI).contains(&theta) {
        return Err(Error::invalid(format!(
            "theta must lie in [0, pi], got {theta}"
        )));
    }
    Ok(GpValue::from_raw(-(xi as f64) * PI * (1.0 - theta.cos())))
}

/// Per-cycle geometric phase in front of the slab from the reflection
/// data (r_l, delta_l) of the two channels.
///
/// One cycle is a half-period of the standing-wave pattern, s in
/// [s0, s0 + pi] with s = k x; the result is independent of s0, which
/// tests check against the general evaluator on shifted windows.
pub fn prebarrier_gp_from_reflections(
    reflections: [(f64, f64); 2],
    spin: &SpinState,
    quad_tol: f64,
) -> Result<GpValue> {
    if !(quad_tol > 0.0) || !quad_tol.is_finite() {
        return Err(Error::invalid(format!(
            "quadrature tolerance must be finite and > 0, got {quad_tol}"
        )));
    }
    let weights = spin.weights();
    let mut face = [0.0; 2]; // |1 + rho_l|^2
    let mut sqrt_r = [0.0; 2];
    for i in 0..2 {
        let (r, delta) = reflections[i];
        if !(0.0..=1.0).contains(&r) || !delta.is_finite() {
            return Err(Error::invalid(format!(
                "reflection data must have 0 <= r <= 1 and finite delta, got ({r}, {delta})"
            )));
        }
        sqrt_r[i] = r.sqrt();
        face[i] = 1.0 + r + 2.0 * sqrt_r[i] * delta.cos();
        if weights[i] > 0.0 && face[i] < 1e-28 {
            return Err(Error::DegenerateNormalization);
        }
    }

    // occupied channels only; empty ones would divide 0 by face = 0
    let mut prefactor = 0.0;
    for i in 0..2 {
        if weights[i] > 0.0 {
            prefactor += weights[i] * (1.0 - reflections[i].0) / face[i];
        }
    }

    let opts = QuadOptions {
        rel_tol: quad_tol,
        initial_panels: 8,
        ..QuadOptions::default()
    };
    let integral = integrate(
        |s| {
            let mut den = 0.0;
            for i in 0..2 {
                if weights[i] > 0.0 {
                    let (r, delta) = reflections[i];
                    den += weights[i] * (1.0 + r + 2.0 * sqrt_r[i] * (delta - 2.0 * s).cos())
                        / face[i];
                }
            }
            if den < 1e-14 {
                return Err(Error::VanishingNorm { s });
            }
            Ok(1.0 / den)
        },
        0.0,
        PI,
        &opts,
    )?;

    Ok(GpValue::from_raw(PI - prefactor * integral.value))
}

/// Per-cycle geometric phase in front of the slab at the given
/// parameter point. Multi-cycle windows scale linearly: zeta cycles
/// accumulate zeta times this value.
pub fn prebarrier_gp(params: &ScatterParams, spin: &SpinState, quad_tol: f64) -> Result<GpValue> {
    let mut reflections = [(0.0, 0.0); 2];
    for channel in Channel::BOTH {
        let sc = channel_scattering(params, channel);
        reflections[channel.index()] = (sc.r.min(1.0), sc.delta);
    }
    prebarrier_gp_from_reflections(reflections, spin, quad_tol)
}

/// Interior geometric phase of one traversal in the tunneling regime
/// (epsilon > 1), where the barrier channel decays and the phase is
/// quenched below the resonant value.
pub fn tunnel_gp(params: &ScatterParams, spin: &SpinState, quad_tol: f64) -> Result<GpValue> {
    if !(params.epsilon > 1.0) {
        return Err(Error::invalid(format!(
            "tunneling phase needs epsilon > 1, got {}",
            params.epsilon
        )));
    }
    let field = AmplitudeField::new(params, spin, Region::Interior)?;
    open_path_gp(&field, 0.0, PI, quad_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn folding_lands_in_the_half_open_turn() {
        for &raw in &[0.0, 1e-17, -1e-17, 0.5, -0.5, -TAU, TAU, -3.0 * PI, 12.7, -12.7] {
            let v = GpValue::from_raw(raw);
            assert!(v.principal > -TAU && v.principal <= 0.0, "raw {raw} -> {v:?}");
            assert_abs_diff_eq!(
                (v.raw - v.principal) / TAU,
                v.fold_turns as f64,
                epsilon = 1e-9
            );
        }
        assert_eq!(GpValue::from_raw(0.0).principal, 0.0);
        assert_eq!(GpValue::from_raw(-TAU).principal, 0.0);
        assert_eq!(GpValue::from_raw(-PI).principal, -PI);
    }

    #[test]
    fn branch_note_reports_turns() {
        assert_eq!(GpValue::from_raw(-0.5).branch_note(), "principal = raw");
        assert!(GpValue::from_raw(7.0).branch_note().contains("(2)"));
    }

    #[test]
    fn circle_distance_is_symmetric_and_wraps() {
        assert_abs_diff_eq!(circle_distance(0.1, -0.1), 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(circle_distance(-TAU + 0.05, 0.0), 0.05, epsilon = 1e-12);
        assert_abs_diff_eq!(circle_distance(3.0, 3.0 + 4.0 * TAU), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn transmitted_region_has_no_geometric_phase() {
        let spin = SpinState::from_angles(1.2, 0.3).unwrap();
        let p = ScatterParams::new(0.7, 3.3).unwrap();
        let field = AmplitudeField::new(&p, &spin, Region::Transmitted).unwrap();
        let gp = open_path_gp(&field, 0.0, 2.0, 1e-10).unwrap();
        assert_abs_diff_eq!(gp.raw, 0.0, epsilon = 1e-9);
        // windows longer than a half-turn only wrap the total-phase arg
        let gp = open_path_gp(&field, 0.0, 9.0, 1e-10).unwrap();
        assert!(circle_distance(gp.raw, 0.0) < 1e-9);
        let oracle = pancharatnam_oracle(&field, 0.0, 2.0, 2).unwrap();
        assert_abs_diff_eq!(oracle, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn ideal_limit_values() {
        assert_abs_diff_eq!(highspeed_gp(1, 0.0).unwrap().raw, 0.0);
        assert_abs_diff_eq!(
            highspeed_gp(1, PI / 2.0).unwrap().raw,
            -PI,
            epsilon = 1e-15
        );
        let down = highspeed_gp(3, PI).unwrap();
        assert_abs_diff_eq!(down.raw, -6.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(down.principal, 0.0, epsilon = 1e-12);
        assert!(highspeed_gp(0, 1.0).is_err());
        assert!(highspeed_gp(1, -0.1).is_err());
    }

    #[test]
    fn resonant_poles_in_closed_form() {
        // spin along the field: the integral cancels pi n+ exactly
        let up = SpinState::from_angles(0.0, 0.0).unwrap();
        let g = resonant_gp(2, 4, &up, 1e-12).unwrap();
        assert_abs_diff_eq!(g.value.raw, 0.0, epsilon = 1e-10);

        // spin against the field: one full turn per winding
        let down = SpinState::from_angles(PI, 0.0).unwrap();
        for (np, nm) in [(2u32, 4u32), (3, 9), (2, 20)] {
            let g = resonant_gp(np, nm, &down, 1e-12).unwrap();
            let xi = (nm - np) as f64 / 2.0;
            assert_abs_diff_eq!(g.value.raw, -TAU * xi, epsilon = 1e-9);
            // raw sits a rounding error above -2 pi xi, so the principal
            // value may fold to either branch end; compare on the circle
            assert!(circle_distance(g.value.principal, 0.0) < 1e-9);
            assert_eq!(g.xi as f64, xi);
        }
    }

    #[test]
    fn resonant_rejects_bad_mode_pairs() {
        let spin = SpinState::from_angles(1.0, 0.0).unwrap();
        assert!(matches!(
            resonant_gp(1, 2, &spin, 1e-9),
            Err(Error::ParityMismatch { .. })
        ));
        assert!(resonant_gp(3, 3, &spin, 1e-9).is_err());
        assert!(resonant_gp(0, 2, &spin, 1e-9).is_err());
    }

    #[test]
    fn doubled_mode_counts_share_the_per_turn_phase() {
        let spin = SpinState::from_angles(1.9, 0.0).unwrap();
        let a = resonant_gp(1, 3, &spin, 1e-11).unwrap();
        let b = resonant_gp(2, 6, &spin, 1e-11).unwrap();
        assert_relative_eq!(a.per_turn, b.per_turn, max_relative = 1e-8);
        assert_eq!(b.xi, 2 * a.xi);
    }

    #[test]
    fn transparent_channels_leave_no_prebarrier_phase() {
        let spin = SpinState::from_angles(PI / 2.0, 0.0).unwrap();
        // free propagation: r = 0 in both channels
        let p = ScatterParams::new(0.0, 2.0).unwrap();
        let gp = prebarrier_gp(&p, &spin, 1e-11).unwrap();
        assert_abs_diff_eq!(gp.raw, 0.0, epsilon = 1e-10);

        // both channels resonant: r vanishes again
        let p = ScatterParams::new(0.6, 10.0_f64.sqrt() * PI).unwrap();
        let gp = prebarrier_gp(&p, &spin, 1e-11).unwrap();
        assert_abs_diff_eq!(gp.raw, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn equal_reflection_channels_cancel() {
        let spin = SpinState::from_angles(1.1, 0.0).unwrap();
        for &(r, delta) in &[(0.3, 0.7), (0.9, -2.0), (0.99, 3.0)] {
            let gp =
                prebarrier_gp_from_reflections([(r, delta), (r, delta)], &spin, 1e-11).unwrap();
            assert_abs_diff_eq!(gp.raw, 0.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn tunnel_requires_supercritical_ratio() {
        let spin = SpinState::from_angles(1.0, 0.0).unwrap();
        let p = ScatterParams::new(0.9, 2.0).unwrap();
        assert!(tunnel_gp(&p, &spin, 1e-9).is_err());
    }

    #[test]
    fn tunnel_pole_states_give_trivial_phase() {
        let p = ScatterParams::from_kminus(2.0, PI).unwrap();
        let up = SpinState::from_angles(0.0, 0.0).unwrap();
        let g = tunnel_gp(&p, &up, 1e-10).unwrap();
        assert!(circle_distance(g.raw, 0.0) < 1e-8, "raw = {}", g.raw);
        let down = SpinState::from_angles(PI, 0.0).unwrap();
        let g = tunnel_gp(&p, &down, 1e-10).unwrap();
        assert!(circle_distance(g.raw, 0.0) < 1e-8, "raw = {}", g.raw);
    }

    #[test]
    fn window_validation() {
        let spin = SpinState::from_angles(1.0, 0.0).unwrap();
        let p = ScatterParams::new(0.5, 2.0).unwrap();
        let field = AmplitudeField::new(&p, &spin, Region::Interior).unwrap();
        assert!(open_path_gp(&field, 1.0, 1.0, 1e-9).is_err());
        assert!(open_path_gp(&field, 0.0, 4.0, 1e-9).is_err());
        assert!(open_path_gp(&field, 0.0, 1.0, 0.0).is_err());
        assert!(pancharatnam_oracle(&field, 0.0, 1.0, 1).is_err());
    }
}
