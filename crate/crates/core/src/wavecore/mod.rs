//! Solutions of the constant-speed wave equation used as transform input.

mod fd;
mod profile;
mod source;

pub use fd::{fd_wave_oracle, leapfrog, FdData, FdGrid, FdProblem};
pub use profile::{Profile, ProfileKind, ScalarFn, SingularPoint};
pub use source::SourceFamily;

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Solution of w_tt = w_xx with w(x,0) = φ(x), w_t(x,0) = 0, at time s.
pub fn dalembert_first_datum(phi: &Profile, x: f64, s: f64) -> Result<f64> {
    Ok(0.5 * (phi.value(x + s)? + phi.value(x - s)?))
}

/// Solution w(x, r; b) of w_rr = Δw, w(x,0;b) = f(x,b), w_r(x,0;b) = 0.
///
/// Dimension 1 uses d'Alembert; dimension 3 uses w = ∂_r (r M_r f), with the
/// spherical mean M_r by a product rule checked for convergence.
pub fn wave_source_family(src: &SourceFamily, x: &[f64], r: f64, b: f64) -> Result<f64> {
    if x.len() != src.dim {
        return Err(Error::domain(format!("point has dimension {} but source has {}", x.len(), src.dim)));
    }
    match src.dim {
        1 => Ok(0.5 * (src.eval(&[x[0] + r], b) + src.eval(&[x[0] - r], b))),
        3 => kirchhoff_first_datum(|y| src.eval(y, b), [x[0], x[1], x[2]], r),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

const SPHERE_TOL: f64 = 1e-13;
const SPHERE_ORDERS: [usize; 5] = [8, 16, 32, 64, 128];

/// ∂_r (r M_r g)(x) by a fourth-order central difference of the odd
/// function ρ ↦ ρ M_|ρ| g.
pub fn kirchhoff_first_datum(g: impl Fn(&[f64]) -> f64, x: [f64; 3], r: f64) -> Result<f64> {
    let r = r.abs();
    let h = 1e-3 * r.max(1.0);
    let n = sphere_order(&g, x, r + 2.0 * h)?;
    let rm = |rho: f64| rho * spherical_mean_with(&g, x, rho.abs(), n);
    Ok((-rm(r + 2.0 * h) + 8.0 * rm(r + h) - 8.0 * rm(r - h) + rm(r - 2.0 * h)) / (12.0 * h))
}

/// Mean of g over the sphere of radius r about x.
pub fn spherical_mean(g: impl Fn(&[f64]) -> f64, x: [f64; 3], r: f64) -> Result<f64> {
    let n = sphere_order(&g, x, r)?;
    Ok(spherical_mean_with(&g, x, r, n))
}

fn sphere_order(g: &impl Fn(&[f64]) -> f64, x: [f64; 3], r: f64) -> Result<usize> {
    let mut prev = spherical_mean_with(g, x, r, SPHERE_ORDERS[0]);
    for &n in &SPHERE_ORDERS[1..] {
        let cur = spherical_mean_with(g, x, r, n);
        if (cur - prev).abs() <= SPHERE_TOL * cur.abs().max(1.0) {
            return Ok(n);
        }
        prev = cur;
    }
    Err(Error::QuadratureFailure {
        value: prev,
        est_error: f64::NAN,
        tol: SPHERE_TOL,
    })
}

/// Gauss–Legendre in cos θ (n nodes) times the trapezoid rule in φ (2n nodes).
fn spherical_mean_with(g: &impl Fn(&[f64]) -> f64, x: [f64; 3], r: f64, n: usize) -> f64 {
    if r == 0.0 {
        return g(&x);
    }
    let (mu, w) = gauss_legendre(n);
    let m = 2 * n;
    let mut sum = 0.0;
    for (&c, &wc) in mu.iter().zip(&w) {
        let s = (1.0 - c * c).max(0.0).sqrt();
        let mut ring = 0.0;
        for k in 0..m {
            let ph = 2.0 * PI * k as f64 / m as f64;
            let y = [x[0] + r * s * ph.cos(), x[1] + r * s * ph.sin(), x[2] + r * c];
            ring += g(&y);
        }
        sum += wc * ring / m as f64;
    }
    0.5 * sum
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(z), p0 = P_{n-1}(z)
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}
