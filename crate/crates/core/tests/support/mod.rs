//! Shared helpers for integration tests.
//!
//! The transfer-matrix slab solver below was written and frozen before
//! the library's scattering code and shares nothing with it: interface
//! matching in matrix form with complex propagation, against the
//! library's closed-form amplitudes.

use num_complex::Complex64;

type C = Complex64;

fn mat_mul(a: [[C; 2]; 2], b: [[C; 2]; 2]) -> [[C; 2]; 2] {
    let mut out = [[C::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

// matching matrix from wavenumber b to wavenumber a
fn interface(a: C, b: C) -> [[C; 2]; 2] {
    let half = C::new(0.5, 0.0);
    let one = C::new(1.0, 0.0);
    let ratio = b / a;
    let p = half * (one + ratio);
    let m = half * (one - ratio);
    [[p, m], [m, p]]
}

/// Reflection and transmission amplitudes of a unit-width slab with
/// interior kappa^2 L^2 = `kappa_sq_l2` at reduced wavenumber `kl`,
/// by a 2x2 transfer matrix over both interfaces. Transmission is
/// referenced at the exit face.
pub fn tm_slab(kl: f64, kappa_sq_l2: f64) -> (C, C) {
    let k = C::new(kl, 0.0);
    let q = C::new(kappa_sq_l2, 0.0).sqrt();
    let prop = [
        [(-C::i() * q).exp(), C::new(0.0, 0.0)],
        [C::new(0.0, 0.0), (C::i() * q).exp()],
    ];
    let t_mat = mat_mul(mat_mul(interface(k, q), prop), interface(q, k));
    let t = C::new(1.0, 0.0) / t_mat[0][0];
    let rho = t_mat[1][0] * t;
    (rho, t)
}

#[allow(dead_code)]
pub fn complex_close(a: C, b: C, tol: f64) -> bool {
    (a - b).norm() <= tol
}
