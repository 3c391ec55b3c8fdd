//! Gauss hypergeometric function 2F1(a, b; c; z) on 0 <= z <= 1.
//!
//! Routes: direct series for z <= 1/2 and for terminating series; the
//! z -> 1-z connection (Gamma form for non-integer c-a-b, logarithmic form
//! for integer c-a-b with real parameters); Taylor-series continuation of the
//! hypergeometric ODE when c-a-b is close to, but not at, an integer.

use num_complex::{Complex64, ComplexFloat};
use serde::{Deserialize, Serialize};

use super::gamma::{digamma, gamma_real, is_nonpositive_integer, ln_gamma_complex, rgamma_complex, rgamma_real};
use crate::error::{Error, Result};

const MAX_TERMS: usize = 10_000;
const EPS: f64 = f64::EPSILON;
/// Below this distance of c-a-b to an integer the Gamma connection loses digits.
const NEAR_INTEGER: f64 = 0.05;
/// c-a-b closer than this to an integer is treated as that integer.
const EXACT_INTEGER: f64 = 1e-13;
/// Series stop after this many consecutive negligible terms.
const QUIET_TERMS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypergeometricParams {
    pub a: Complex64,
    pub b: Complex64,
    pub c: f64,
    pub z: f64,
}

impl HypergeometricParams {
    pub fn real(a: f64, b: f64, c: f64, z: f64) -> Self {
        Self {
            a: Complex64::new(a, 0.0),
            b: Complex64::new(b, 0.0),
            c,
            z,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: Complex64,
    pub est_error: f64,
}

/// Evaluation route, exposed so the routes can be cross-checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    Auto,
    /// Power series in z.
    Series,
    /// Connection to 1-z (Gamma or logarithmic form as appropriate).
    Connection,
    /// ODE continuation from z = 1/2.
    Continuation,
}

/// 2F1(a, b; c; z) for 0 <= z < 1 and c > 0.
///
/// `tol` bounds the estimated error relative to max(1, |F|); a result that
/// cannot meet it is reported as [`Error::NonConvergence`].
pub fn gauss_2f1(p: HypergeometricParams, tol: f64) -> Result<EvalResult> {
    gauss_2f1_with(p, tol, Route::Auto)
}

pub fn gauss_2f1_with(p: HypergeometricParams, tol: f64, route: Route) -> Result<EvalResult> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    if !(p.c > 0.0) {
        return Err(Error::domain(format!("c must be positive, got {}", p.c)));
    }
    if !(0.0..1.0).contains(&p.z) {
        return Err(Error::domain(format!("z must lie in [0, 1), got {}", p.z)));
    }
    if ![p.a.re, p.a.im, p.b.re, p.b.im].iter().all(|v| v.is_finite()) {
        return Err(Error::domain("non-finite parameter"));
    }
    let omz = 1.0 - p.z;
    let r = match route {
        Route::Auto => hyp2f1(p.a, p.b, p.c, p.z, omz, tol)?,
        Route::Series => series_any(p.a, p.b, p.c, p.z, tol)?,
        Route::Connection => connection_any(p.a, p.b, p.c, p.z, omz, tol)?,
        Route::Continuation => continuation_any(p.a, p.b, p.c, omz, tol)?,
    };
    if r.est_error > tol * r.value.norm().max(1.0) {
        return Err(Error::NonConvergence {
            terms: MAX_TERMS,
            est_error: r.est_error,
        });
    }
    Ok(r)
}

fn is_real(a: Complex64, b: Complex64) -> bool {
    a.im == 0.0 && b.im == 0.0
}

fn lift(v: f64, err: f64) -> EvalResult {
    EvalResult {
        value: Complex64::new(v, 0.0),
        est_error: err,
    }
}

/// Internal entry: z and 1-z are both supplied so callers with an analytic
/// complement keep full precision near z = 1. Accepts z = 1 when Re(c-a-b) > 0.
pub(crate) fn hyp2f1(a: Complex64, b: Complex64, c: f64, z: f64, omz: f64, tol: f64) -> Result<EvalResult> {
    if is_real(a, b) {
        let (v, e) = hyp2f1_real(a.re, b.re, c, z, omz, tol)?;
        return Ok(lift(v, e));
    }
    hyp2f1_generic(a, b, Complex64::new(c, 0.0), z, omz, tol)
}

pub(crate) fn hyp2f1_real(a: f64, b: f64, c: f64, z: f64, omz: f64, tol: f64) -> Result<(f64, f64)> {
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) || z <= 0.5 {
        return series(a, b, c, z, tol);
    }
    let d = c - a - b;
    if omz == 0.0 {
        return gauss_sum_real(a, b, c);
    }
    let m = d.round();
    if (d - m).abs() < EXACT_INTEGER {
        if m >= 0.0 {
            return log_connection(a, b, m as usize, omz, tol);
        }
        // Euler: F(a,b;c;z) = (1-z)^{c-a-b} F(c-a,c-b;c;z)
        let (v, e) = hyp2f1_real(c - a, c - b, c, z, omz, tol)?;
        let s = omz.powf(d);
        return Ok((s * v, s * e));
    }
    if (d - m).abs() < NEAR_INTEGER {
        let r = continuation(a, b, c, omz, tol)?;
        return Ok((r.0, r.1));
    }
    let r = gamma_connection_real(a, b, c, omz, tol)?;
    if r.1 <= tol * r.0.abs().max(1.0) {
        return Ok(r);
    }
    // the two connection terms cancel; the ODE route does not suffer from it
    match continuation(a, b, c, omz, tol) {
        Ok(q) if q.1 < r.1 => Ok(q),
        _ => Ok(r),
    }
}

fn hyp2f1_generic(a: Complex64, b: Complex64, c: Complex64, z: f64, omz: f64, tol: f64) -> Result<EvalResult> {
    let terminating = |x: Complex64| x.im == 0.0 && is_nonpositive_integer(x.re);
    if terminating(a) || terminating(b) || z <= 0.5 {
        return series_c(a, b, c, z, tol);
    }
    let d = c - a - b;
    if omz == 0.0 {
        if d.re <= 0.0 {
            return Err(Error::domain("2F1 diverges at z = 1 when Re(c-a-b) <= 0"));
        }
        let l = ln_gamma_complex(c)? + ln_gamma_complex(d)?;
        let v = l.exp() * rgamma_complex(c - a)? * rgamma_complex(c - b)?;
        return Ok(EvalResult {
            value: v,
            est_error: 64.0 * EPS * v.norm(),
        });
    }
    let dist = (d.re - d.re.round()).hypot(d.im);
    if dist < NEAR_INTEGER {
        let r = continuation(a, b, c, omz, tol)?;
        return Ok(EvalResult {
            value: r.0,
            est_error: r.1,
        });
    }
    let r = gamma_connection_c(a, b, c, omz, tol)?;
    if r.est_error <= tol * r.value.norm().max(1.0) {
        return Ok(r);
    }
    match continuation(a, b, c, omz, tol) {
        Ok(q) if q.1 < r.est_error => Ok(EvalResult {
            value: q.0,
            est_error: q.1,
        }),
        _ => Ok(r),
    }
}

fn series_any(a: Complex64, b: Complex64, c: f64, z: f64, tol: f64) -> Result<EvalResult> {
    if is_real(a, b) {
        let (v, e) = series(a.re, b.re, c, z, tol)?;
        Ok(lift(v, e))
    } else {
        series_c(a, b, Complex64::new(c, 0.0), z, tol)
    }
}

fn connection_any(a: Complex64, b: Complex64, c: f64, z: f64, omz: f64, tol: f64) -> Result<EvalResult> {
    if z <= 0.0 {
        return Ok(lift(1.0, 0.0));
    }
    if is_real(a, b) {
        let (a, b) = (a.re, b.re);
        let d = c - a - b;
        let m = d.round();
        let (v, e) = if (d - m).abs() < EXACT_INTEGER {
            if m >= 0.0 {
                log_connection(a, b, m as usize, omz, tol)?
            } else {
                let (v, e) = hyp2f1_real(c - a, c - b, c, z, omz, tol)?;
                let s = omz.powf(d);
                (s * v, s * e)
            }
        } else {
            gamma_connection_real(a, b, c, omz, tol)?
        };
        Ok(lift(v, e))
    } else {
        gamma_connection_c(a, b, Complex64::new(c, 0.0), omz, tol)
    }
}

fn continuation_any(a: Complex64, b: Complex64, c: f64, omz: f64, tol: f64) -> Result<EvalResult> {
    if is_real(a, b) {
        let (v, e) = continuation(a.re, b.re, c, omz, tol)?;
        Ok(lift(v, e))
    } else {
        let (v, e) = continuation(a, b, Complex64::new(c, 0.0), omz, tol)?;
        Ok(EvalResult { value: v, est_error: e })
    }
}

fn cst<T: From<f64>>(x: f64) -> T {
    <T as From<f64>>::from(x)
}

/// Σ (a)_n (b)_n / ((c)_n n!) z^n, real arithmetic.
pub(crate) fn series(a: f64, b: f64, c: f64, z: f64, tol: f64) -> Result<(f64, f64)> {
    let (v, e) = series_generic(a, b, c, z, tol, 0)?;
    Ok((v, e))
}

fn series_c(a: Complex64, b: Complex64, c: Complex64, z: f64, tol: f64) -> Result<EvalResult> {
    let (v, e) = series_generic(a, b, c, z, tol, 0)?;
    Ok(EvalResult { value: v, est_error: e })
}

/// (F - 1)/z for 0 < z <= 1, computed without cancellation for small z.
pub(crate) fn reduced_2f1_real(a: f64, b: f64, c: f64, z: f64, omz: f64, tol: f64) -> Result<(f64, f64)> {
    if z <= 0.5 {
        // Σ_{n>=1} t_n z^{n-1}
        let (v, e) = series_generic(a, b, c, z, tol, 1)?;
        return Ok((v, e));
    }
    let (f, e) = hyp2f1_real(a, b, c, z, omz, tol)?;
    Ok(((f - 1.0) / z, e / z))
}

/// Series with the first `skip` terms dropped and the rest divided by z^skip.
fn series_generic<T>(a: T, b: T, c: T, z: f64, tol: f64, skip: usize) -> Result<(T, f64)>
where
    T: ComplexFloat<Real = f64> + From<f64>,
{
    let zero = cst::<T>(0.0);
    let mut term = cst::<T>(1.0);
    let mut sum = if skip == 0 { term } else { zero };
    let mut abs_sum = sum.abs();
    let mut quiet = 0;
    let mut last = f64::INFINITY;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let num = (a + cst::<T>(nf)) * (b + cst::<T>(nf));
        if num == zero {
            // terminating series
            return Ok((sum, 4.0 * EPS * abs_sum));
        }
        let factor = num / ((c + cst::<T>(nf)) * cst::<T>(nf + 1.0));
        // divide by z once per skipped power instead of multiplying
        term = if n < skip { term * factor } else { term * factor * cst::<T>(z) };
        if n + 1 < skip {
            continue;
        }
        sum = sum + term;
        let at = term.abs();
        abs_sum += at;
        // geometric bound on the remainder once terms decrease
        let ratio = at / last;
        let tail = if ratio < 1.0 { at * ratio / (1.0 - ratio) } else { f64::INFINITY };
        last = at;
        if (at <= tol * 0.1 * sum.abs() && tail <= tol * 0.1 * sum.abs()) || at == 0.0 {
            quiet += 1;
            if quiet >= QUIET_TERMS {
                return Ok((sum, tail.min(at * 1e3) + 4.0 * EPS * abs_sum));
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence {
        terms: MAX_TERMS,
        est_error: last,
    })
}

fn gauss_sum_real(a: f64, b: f64, c: f64) -> Result<(f64, f64)> {
    let d = c - a - b;
    if d <= 0.0 {
        return Err(Error::domain("2F1 diverges at z = 1 when c-a-b <= 0"));
    }
    let v = gamma_real(c)? * gamma_real(d)? * rgamma_real(c - a) * rgamma_real(c - b);
    Ok((v, 64.0 * EPS * v.abs()))
}

/// F = A1 F(a,b;1-d;w) + A2 w^d F(c-a,c-b;1+d;w), w = 1-z, d = c-a-b.
fn gamma_connection_real(a: f64, b: f64, c: f64, w: f64, tol: f64) -> Result<(f64, f64)> {
    let d = c - a - b;
    let gc = gamma_real(c)?;
    let a1 = gc * gamma_real(d)? * rgamma_real(c - a) * rgamma_real(c - b);
    let a2 = gc * gamma_real(-d)? * rgamma_real(a) * rgamma_real(b);
    let (s1, e1) = if a1 != 0.0 { series(a, b, 1.0 - d, w, tol)? } else { (0.0, 0.0) };
    let (s2, e2) = if a2 != 0.0 { series(c - a, c - b, 1.0 + d, w, tol)? } else { (0.0, 0.0) };
    let wd = w.powf(d);
    let t1 = a1 * s1;
    let t2 = a2 * wd * s2;
    let err = a1.abs() * e1 + (a2 * wd).abs() * e2 + 32.0 * EPS * (t1.abs() + t2.abs());
    Ok((t1 + t2, err))
}

fn gamma_connection_c(a: Complex64, b: Complex64, c: Complex64, w: f64, tol: f64) -> Result<EvalResult> {
    let d = c - a - b;
    let lc = ln_gamma_complex(c)?;
    let a1 = (lc + ln_gamma_complex(d)?).exp() * rgamma_complex(c - a)? * rgamma_complex(c - b)?;
    let a2 = (lc + ln_gamma_complex(-d)?).exp() * rgamma_complex(a)? * rgamma_complex(b)?;
    let one = Complex64::new(1.0, 0.0);
    let s1 = series_c(a, b, one - d, w, tol)?;
    let s2 = series_c(c - a, c - b, one + d, w, tol)?;
    let wd = (d * w.ln()).exp();
    let t1 = a1 * s1.value;
    let t2 = a2 * wd * s2.value;
    let err = a1.norm() * s1.est_error + (a2 * wd).norm() * s2.est_error + 64.0 * EPS * (t1.norm() + t2.norm());
    Ok(EvalResult {
        value: t1 + t2,
        est_error: err,
    })
}

/// Logarithmic connection for c = a + b + m, m >= 0 an integer, real a, b.
fn log_connection(a: f64, b: f64, m: usize, w: f64, tol: f64) -> Result<(f64, f64)> {
    let c = a + b + m as f64;
    let mf = m as f64;
    let gc = gamma_real(c)?;
    let mut finite = 0.0;
    let mut abs_acc = 0.0;
    if m > 0 {
        // Γ(m)Γ(c)/(Γ(a+m)Γ(b+m)) Σ_{n<m} (a)_n (b)_n / (n! (1-m)_n) w^n
        let pre = gamma_real(mf)? * gc * rgamma_real(a + mf) * rgamma_real(b + mf);
        let mut t = 1.0;
        let mut s = 1.0;
        for n in 0..m.saturating_sub(1) {
            let nf = n as f64;
            t *= (a + nf) * (b + nf) / ((nf + 1.0) * (1.0 - mf + nf)) * w;
            s += t;
        }
        finite = pre * s;
        abs_acc += finite.abs();
    }
    // -(-w)^m Γ(c)/(Γ(a)Γ(b)) Σ (a+m)_n (b+m)_n / (n! (n+m)!) w^n
    //      [ln w - ψ(n+1) - ψ(n+m+1) + ψ(a+n+m) + ψ(b+n+m)]
    let sign_m = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let pre = -sign_m * w.powi(m as i32) * gc * rgamma_real(a) * rgamma_real(b);
    if pre == 0.0 {
        return Ok((finite, 16.0 * EPS * abs_acc));
    }
    let lw = w.ln();
    let mut fact_m = 1.0;
    for k in 1..=m {
        fact_m *= k as f64;
    }
    let mut coef = 1.0 / fact_m;
    let mut psi_n1 = digamma(1.0)?;
    let mut psi_nm1 = digamma(mf + 1.0)?;
    // ψ at a+m+n, b+m+n; a+m or b+m at a pole means that factor vanishes in
    // the coefficient, handled by the polynomial route before reaching here.
    let mut psi_a = digamma(a + mf)?;
    let mut psi_b = digamma(b + mf)?;
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let mut quiet = 0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let term = coef * (lw - psi_n1 - psi_nm1 + psi_a + psi_b);
        sum += term;
        abs_sum += term.abs();
        if term.abs() <= 0.1 * tol * sum.abs() || term == 0.0 {
            quiet += 1;
            if quiet >= QUIET_TERMS {
                let total = finite + pre * sum;
                let err = pre.abs() * (term.abs() + 16.0 * EPS * abs_sum) + 16.0 * EPS * abs_acc;
                return Ok((total, err + 8.0 * EPS * total.abs()));
            }
        } else {
            quiet = 0;
        }
        coef *= (a + mf + nf) * (b + mf + nf) / ((nf + 1.0) * (nf + mf + 1.0)) * w;
        psi_n1 += 1.0 / (nf + 1.0);
        psi_nm1 += 1.0 / (nf + mf + 1.0);
        psi_a += 1.0 / (a + mf + nf);
        psi_b += 1.0 / (b + mf + nf);
    }
    Err(Error::NonConvergence {
        terms: MAX_TERMS,
        est_error: f64::NAN,
    })
}

/// Steps the hypergeometric ODE from z = 1/2 towards z = 1 - omz by
/// Taylor series; each step stays within 45% of the distance to z = 1.
fn continuation<T>(a: T, b: T, c: T, omz: f64, tol: f64) -> Result<(T, f64)>
where
    T: ComplexFloat<Real = f64> + From<f64>,
{
    if omz >= 0.5 {
        let (v, e) = series_generic(a, b, c, 1.0 - omz, tol, 0)?;
        return Ok((v, e));
    }
    if omz <= 0.0 {
        return Err(Error::domain("continuation cannot reach z = 1"));
    }
    let one = cst::<T>(1.0);
    let (mut f, e0) = series_generic(a, b, c, 0.5, tol * 1e-2, 0)?;
    let (g, e1) = series_generic(a + one, b + one, c + one, 0.5, tol * 1e-2, 0)?;
    let mut fp = a * b / c * g;
    // initial errors are carried by the flow with at most logarithmic growth
    let mut err = (e0 + (a * b / c).abs() * e1) * (1.0 - omz.ln());
    let mut s = 0.5;
    let apb1 = a + b + one;
    let ab = a * b;
    while s > omz {
        let s_next = (0.55 * s).max(omz);
        let h = s - s_next;
        let z = 1.0 - s;
        let p0 = z * s;
        let p1 = 1.0 - 2.0 * z;
        let q0 = c - apb1 * cst::<T>(z);
        // Taylor coefficients f_n at z; f_0 = F, f_1 = F'
        let mut fn0 = f;
        let mut fn1 = fp;
        let mut val = fn0 + fn1 * cst::<T>(h);
        let mut der = fn1;
        let mut hp = h; // h^{n+1} for n = 0
        let mut quiet = 0;
        let mut abs_sum = fn0.abs() + (fn1 * cst::<T>(h)).abs();
        let mut converged = false;
        for n in 0..2000usize {
            let nf = n as f64;
            // p0 (n+2)(n+1) f_{n+2} = -[(p1 n(n+1) + q0 (n+1)) f_{n+1} + (-n(n-1) - (a+b+1) n - ab) f_n]
            let lhs1 = (cst::<T>(p1 * nf * (nf + 1.0)) + q0 * cst::<T>(nf + 1.0)) * fn1;
            let lhs0 = (cst::<T>(-nf * (nf - 1.0)) - apb1 * cst::<T>(nf) - ab) * fn0;
            let fn2 = -(lhs1 + lhs0) / cst::<T>(p0 * (nf + 2.0) * (nf + 1.0));
            // der += (n+2) f_{n+2} h^{n+1}; val += f_{n+2} h^{n+2}
            let dterm = fn2 * cst::<T>((nf + 2.0) * hp);
            hp *= h;
            let vterm = fn2 * cst::<T>(hp);
            val = val + vterm;
            der = der + dterm;
            abs_sum += vterm.abs();
            if vterm.abs() <= 1e-3 * tol * val.abs() && dterm.abs() * s <= 1e-3 * tol * (der.abs() * s).max(val.abs()) {
                quiet += 1;
                if quiet >= QUIET_TERMS {
                    converged = true;
                    break;
                }
            } else {
                quiet = 0;
            }
            fn0 = fn1;
            fn1 = fn2;
        }
        if !converged {
            return Err(Error::NonConvergence {
                terms: 2000,
                est_error: f64::NAN,
            });
        }
        err += 8.0 * EPS * abs_sum;
        f = val;
        fp = der;
        s = s_next;
    }
    Ok((f, err))
}
