//! Interior slab kernels evaluated as entire functions of the squared
//! wavenumber.
//!
//! Inside the slab a channel obeys f'' + kappa^2 f = 0, where kappa^2 may be
//! positive (oscillatory), negative (evanescent) or zero. Writing the two
//! fundamental solutions as cos(kappa x) and sin(kappa x)/kappa makes both
//! entire in kappa^2, so a single real-valued code path covers all three
//! regimes with no square-root branch to choose.

/// Cosine-like and scaled-sine-like kernels at a fraction `u` of the slab.
///
/// `kappa_sq_l2` is the signed dimensionless squared wavenumber
/// kappa^2 L^2; `u` is position in units of the slab width L (any real,
/// negative values included). Returns `(c, s)` with
///
/// * `c` = cos(kappa L u), continued as cosh for negative argument,
/// * `s` = sin(kappa L u)/(kappa L), continued as sinh(|kappa| L u)/(|kappa| L),
///   with the limit `u` at kappa^2 = 0.
///
/// Both components are jointly continuous (indeed analytic) in
/// `kappa_sq_l2` across zero; a short Taylor series bridges the
/// crossover so neither side loses precision to cancellation.
pub fn slab_kernels(kappa_sq_l2: f64, u: f64) -> (f64, f64) {
    let z2 = kappa_sq_l2 * u * u;
    if z2.abs() < 1e-4 {
        // cos z = 1 - z^2/2 + z^4/24 - z^6/720, sin z / z = 1 - z^2/6 + ...
        // in the variable z^2 = kappa^2 L^2 u^2; the truncation error is
        // below 1e-20 relative inside the window.
        let c = 1.0 + z2 * (-0.5 + z2 * (1.0 / 24.0 - z2 / 720.0));
        let s = 1.0 + z2 * (-1.0 / 6.0 + z2 * (1.0 / 120.0 - z2 / 5040.0));
        (c, u * s)
    } else if kappa_sq_l2 > 0.0 {
        let kl = kappa_sq_l2.sqrt();
        let z = kl * u;
        (z.cos(), z.sin() / kl)
    } else {
        let hl = (-kappa_sq_l2).sqrt();
        let h = hl * u;
        (h.cosh(), h.sinh() / hl)
    }
}
