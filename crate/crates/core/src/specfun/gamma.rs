use num_complex::Complex64;

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// B_{2k} / (2k (2k-1)), k = 1..
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// Arguments are shifted up to this real part before the asymptotic series.
const SHIFT_TO: f64 = 10.0;

pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

fn stirling(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut corr = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        corr += p * c;
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + corr
}

/// Principal branch of ln Γ(s), continuous off the non-positive real axis.
///
/// The imaginary part is the branch obtained by analytic continuation from
/// the positive real axis; on the negative real axis it equals `-π` times the
/// number of negative factors removed by the recurrence.
pub fn ln_gamma_complex(s: Complex64) -> Result<Complex64> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::domain(format!("ln_gamma of non-finite {s}")));
    }
    if s.im == 0.0 && is_nonpositive_integer(s.re) {
        return Err(Error::PoleError { re: s.re, im: s.im });
    }
    let mut w = s;
    let mut log_prod = Complex64::new(0.0, 0.0);
    while w.re < SHIFT_TO {
        log_prod += w.ln();
        w += 1.0;
    }
    Ok(stirling(w) - log_prod)
}

/// ln|Γ(x)| and the sign of Γ(x) for real x.
pub fn ln_gamma_real(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return Err(Error::domain(format!("ln_gamma of non-finite {x}")));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::PoleError { re: x, im: 0.0 });
    }
    let mut w = x;
    let mut log_prod = 0.0;
    let mut sign = 1.0;
    while w < SHIFT_TO {
        if w < 0.0 {
            sign = -sign;
        }
        log_prod += w.abs().ln();
        w += 1.0;
    }
    Ok((stirling(Complex64::new(w, 0.0)).re - log_prod, sign))
}

pub fn gamma_real(x: f64) -> Result<f64> {
    let (l, s) = ln_gamma_real(x)?;
    Ok(s * l.exp())
}

/// 1/Γ(x); zero at the poles of Γ.
pub fn rgamma_real(x: f64) -> f64 {
    match ln_gamma_real(x) {
        Ok((l, s)) => s * (-l).exp(),
        Err(_) => 0.0,
    }
}

/// 1/Γ(s); zero at the poles of Γ.
pub fn rgamma_complex(s: Complex64) -> Result<Complex64> {
    match ln_gamma_complex(s) {
        Ok(l) => Ok((-l).exp()),
        Err(Error::PoleError { .. }) => Ok(Complex64::new(0.0, 0.0)),
        Err(e) => Err(e),
    }
}

/// ψ(x) = Γ'(x)/Γ(x) for real x.
pub fn digamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("digamma of non-finite {x}")));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::PoleError { re: x, im: 0.0 });
    }
    let mut w = x;
    let mut acc = 0.0;
    while w < SHIFT_TO {
        acc -= 1.0 / w;
        w += 1.0;
    }
    let i2 = 1.0 / (w * w);
    let series = i2
        * (1.0 / 12.0
            - i2 * (1.0 / 120.0
                - i2 * (1.0 / 252.0
                    - i2 * (1.0 / 240.0
                        - i2 * (1.0 / 132.0 - i2 * (691.0 / 32760.0 - i2 / 12.0))))));
    Ok(acc + w.ln() - 0.5 / w - series)
}
