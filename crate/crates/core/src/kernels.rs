//! Operator families and the kernels K(t; r, b) of the integral transform
//!
//!   u(x,t) = mult · ∫_{t0}^{t} db ∫_0^{|φ(t)-φ(b)|} K(t; r, b) w(x, r; b) dr.
//!
//! Hypergeometric kernels are written in terms of S = φ(t)+φ(b),
//! Q = S² - r², δ = (φ(t)-φ(b))² - r² and ζ = δ/Q; the complement 1 - ζ
//! = 4 φ(t) φ(b) / Q is formed directly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{bessel_i0, bessel_j0, hyp2f1, hyp2f1_real, reduced_2f1_real};

/// Internal accuracy target of hypergeometric evaluations inside kernels.
const KERNEL_TOL: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MassRegime {
    /// Oscillatory regime, ODE v'' + M² v = 0.
    Large,
    /// Exponential regime, ODE v'' - M² v = 0.
    Small,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum OperatorFamily {
    /// u_tt - u_xx + m² u.
    KleinGordonReal { m: f64 },
    /// u_tt - u_xx - m² u.
    KleinGordonImag { m: f64 },
    /// u_tt - t^{2k} u_xx, t >= 0.
    Tricomi { k: f64 },
    /// u_tt - e^{-2t} u_xx.
    DeSitterWave,
    /// u_tt - e^{2t} u_xx.
    AntiDeSitterWave,
    /// u_tt - t^{-4m/(2m+1)} u_xx, t > 0.
    EinsteinDeSitter { m: u32 },
    /// u_tt - e^{-2t} u_xx ± M² u.
    DeSitterKg { mass: f64, regime: MassRegime },
}

impl OperatorFamily {
    pub fn validate(&self) -> Result<()> {
        let nonneg = |v: f64, field: &str| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::config(field, format!("must be finite and non-negative, got {v}")))
            }
        };
        match *self {
            OperatorFamily::KleinGordonReal { m } | OperatorFamily::KleinGordonImag { m } => nonneg(m, "m"),
            OperatorFamily::Tricomi { k } => {
                if k.is_finite() && k > 0.0 {
                    Ok(())
                } else {
                    Err(Error::config("k", format!("must be positive, got {k}")))
                }
            }
            OperatorFamily::EinsteinDeSitter { m } => {
                if (1..=20).contains(&m) {
                    Ok(())
                } else {
                    Err(Error::config("m", format!("must lie in 1..=20, got {m}")))
                }
            }
            OperatorFamily::DeSitterKg { mass, .. } => nonneg(mass, "mass"),
            OperatorFamily::DeSitterWave | OperatorFamily::AntiDeSitterWave => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            OperatorFamily::KleinGordonReal { .. } => "klein-gordon",
            OperatorFamily::KleinGordonImag { .. } => "klein-gordon-imag",
            OperatorFamily::Tricomi { .. } => "tricomi",
            OperatorFamily::DeSitterWave => "desitter",
            OperatorFamily::AntiDeSitterWave => "anti-desitter",
            OperatorFamily::EinsteinDeSitter { .. } => "edes",
            OperatorFamily::DeSitterKg { .. } => "desitter-kg",
        }
    }

    /// Name with parameters, stable across runs.
    pub fn label(&self) -> String {
        match *self {
            OperatorFamily::KleinGordonReal { m } | OperatorFamily::KleinGordonImag { m } => format!("{}(m={m})", self.name()),
            OperatorFamily::Tricomi { k } => format!("tricomi(k={k})"),
            OperatorFamily::EinsteinDeSitter { m } => format!("edes(m={m})"),
            OperatorFamily::DeSitterKg { mass, regime } => {
                let r = match regime {
                    MassRegime::Large => "large",
                    MassRegime::Small => "small",
                };
                format!("desitter-kg(M={mass},{r})")
            }
            _ => self.name().to_string(),
        }
    }

    /// Families whose time domain is t >= 0.
    pub fn degenerate(&self) -> bool {
        matches!(self, OperatorFamily::Tricomi { .. } | OperatorFamily::EinsteinDeSitter { .. })
    }

    /// Constant in front of the double integral.
    pub fn multiplier(&self) -> f64 {
        match self {
            OperatorFamily::KleinGordonReal { .. } | OperatorFamily::KleinGordonImag { .. } | OperatorFamily::EinsteinDeSitter { .. } => 1.0,
            _ => 2.0,
        }
    }

    /// Whether the kernel is evaluated in complex arithmetic.
    pub fn is_complex(&self) -> bool {
        matches!(self, OperatorFamily::DeSitterKg { mass, regime: MassRegime::Large } if *mass > 0.0)
    }

    /// a(t)² in u_tt - a(t)² u_xx + c u.
    pub fn speed_squared(&self, t: f64) -> f64 {
        match *self {
            OperatorFamily::KleinGordonReal { .. } | OperatorFamily::KleinGordonImag { .. } => 1.0,
            OperatorFamily::Tricomi { k } => t.abs().powf(2.0 * k),
            OperatorFamily::DeSitterWave | OperatorFamily::DeSitterKg { .. } => (-2.0 * t).exp(),
            OperatorFamily::AntiDeSitterWave => (2.0 * t).exp(),
            OperatorFamily::EinsteinDeSitter { m } => t.powf(-4.0 * m as f64 / (2.0 * m as f64 + 1.0)),
        }
    }

    /// c in u_tt - a(t)² u_xx + c u.
    pub fn potential(&self) -> f64 {
        match *self {
            OperatorFamily::KleinGordonReal { m } => m * m,
            OperatorFamily::KleinGordonImag { m } => -m * m,
            OperatorFamily::DeSitterKg { mass, regime: MassRegime::Large } => mass * mass,
            OperatorFamily::DeSitterKg { mass, regime: MassRegime::Small } => -mass * mass,
            _ => 0.0,
        }
    }

    /// Distance function with φ' = a.
    pub fn phi(&self, t: f64) -> Result<f64> {
        if self.degenerate() && t < 0.0 {
            return Err(Error::domain(format!("{} is defined for t >= 0, got t = {t}", self.name())));
        }
        Ok(match *self {
            OperatorFamily::KleinGordonReal { .. } | OperatorFamily::KleinGordonImag { .. } => t,
            OperatorFamily::Tricomi { k } => t.powf(k + 1.0) / (k + 1.0),
            OperatorFamily::DeSitterWave | OperatorFamily::DeSitterKg { .. } => (-t).exp(),
            OperatorFamily::AntiDeSitterWave => t.exp(),
            OperatorFamily::EinsteinDeSitter { m } => {
                let p = 2.0 * m as f64 + 1.0;
                p * t.powf(1.0 / p)
            }
        })
    }

    /// |φ(t) - φ(b)|, with the exponential cases formed without cancellation.
    pub fn cone_radius(&self, t: f64, b: f64) -> Result<f64> {
        Ok(match self {
            OperatorFamily::KleinGordonReal { .. } | OperatorFamily::KleinGordonImag { .. } => (t - b).abs(),
            OperatorFamily::DeSitterWave | OperatorFamily::DeSitterKg { .. } => {
                let lo = t.min(b);
                ((-lo).exp() * -(-(t - b).abs()).exp_m1()).abs()
            }
            OperatorFamily::AntiDeSitterWave => {
                let lo = t.min(b);
                (lo.exp() * (t - b).abs().exp_m1()).abs()
            }
            _ => (self.phi(t)? - self.phi(b)?).abs(),
        })
    }
}

/// Tricomi normalisation c_k = (k+1)^{-k/(k+1)} 2^{-1/(k+1)} and exponent γ = k/(2k+2).
fn tricomi_constants(k: f64) -> (f64, f64) {
    let c = (k + 1.0).powf(-k / (k + 1.0)) * 2f64.powf(-1.0 / (k + 1.0));
    (c, k / (2.0 * k + 2.0))
}

/// K(t; r, b) for 0 <= r <= |φ(t) - φ(b)|.
pub fn kernel(family: &OperatorFamily, t: f64, r: f64, b: f64) -> Result<Complex64> {
    let radius = family.cone_radius(t, b)?;
    if !(r >= 0.0) || r > radius * (1.0 + 4.0 * f64::EPSILON) {
        return Err(Error::ConeBoundary { r, radius });
    }
    let r = r.min(radius);
    kernel_gap(family, t, b, r, radius - r, radius)
}

/// Kernel with the distance `gap` = radius - r supplied exactly.
pub(crate) fn kernel_gap(family: &OperatorFamily, t: f64, b: f64, r: f64, gap: f64, radius: f64) -> Result<Complex64> {
    let gap = gap.max(0.0);
    // δ = (radius - r)(radius + r); s - r is formed as (s - radius) + gap
    // below so the b = 0 endpoint, where s = radius, keeps full precision
    let delta = gap * (2.0 * radius - gap);
    let real = |v: f64| Ok(Complex64::new(v, 0.0));
    match *family {
        OperatorFamily::KleinGordonReal { m } => real(bessel_j0(m * delta.sqrt())),
        OperatorFamily::KleinGordonImag { m } => real(bessel_i0(m * delta.sqrt())),
        OperatorFamily::EinsteinDeSitter { m } => {
            let (pa, pb) = (family.phi(t)?, family.phi(b)?);
            let q = (pa + pb - r) * (pa + pb + r);
            let p = 2.0 * m as f64 + 1.0;
            let c = p.powf(-2.0 * m as f64) * 2f64.powf(-p);
            let mut sum = 0.0;
            let mut binom = 1.0;
            for n in 0..=m {
                if n > 0 {
                    binom *= (m - n + 1) as f64 / n as f64;
                }
                sum += binom * binom * q.powi((m - n) as i32) * delta.powi(n as i32);
            }
            real(2.0 * c * sum)
        }
        OperatorFamily::Tricomi { k } => {
            let (pt, pb) = (family.phi(t)?, family.phi(b)?);
            let s = pt + pb;
            let q = (s - radius + gap) * (s + r);
            let (c, g) = tricomi_constants(k);
            if q == 0.0 {
                return Err(Error::domain("Tricomi kernel at t = b = 0"));
            }
            let (zeta, omz) = (delta / q, 4.0 * pt * pb / q);
            let (f, _) = hyp2f1_real(g, g, 1.0, zeta.min(1.0), omz, KERNEL_TOL)?;
            real(c * q.powf(-g) * f)
        }
        OperatorFamily::DeSitterWave | OperatorFamily::AntiDeSitterWave => {
            let (pt, pb) = (family.phi(t)?, family.phi(b)?);
            let s = pt + pb;
            let q = (s - radius + gap) * (s + r);
            let (zeta, omz) = (delta / q, 4.0 * pt * pb / q);
            let (f, _) = hyp2f1_real(0.5, 0.5, 1.0, zeta.min(1.0), omz, KERNEL_TOL)?;
            real(f / q.sqrt())
        }
        OperatorFamily::DeSitterKg { mass, regime } => {
            let (pt, pb) = ((-t).exp(), (-b).exp());
            let s = pt + pb;
            let q = (s - radius + gap) * (s + r);
            let zeta = (delta / q).min(1.0);
            // ln(1 - ζ) = ln 4 - t - b - ln Q
            let ln_omz = 4f64.ln() - t - b - q.ln();
            let omz = ln_omz.exp();
            match regime {
                MassRegime::Large => {
                    let a = Complex64::new(0.5, mass);
                    let f = hyp2f1(a, a, 1.0, zeta, omz, KERNEL_TOL)?.value;
                    let phase = Complex64::new(0.0, mass * ln_omz).exp();
                    Ok(phase * f / q.sqrt())
                }
                MassRegime::Small => {
                    let a = 0.5 - mass;
                    let (f, _) = hyp2f1_real(a, a, 1.0, zeta, omz, KERNEL_TOL)?;
                    real((-mass * ln_omz).exp() * f / q.sqrt())
                }
            }
        }
    }
}

fn check_cone(z: f64, d: f64) -> Result<()> {
    if !(z >= 0.0) || z > d * (1.0 + 4.0 * f64::EPSILON) {
        return Err(Error::ConeBoundary { r: z, radius: d });
    }
    Ok(())
}

/// Tail kernel of the first datum for the de Sitter wave operator,
/// 0 <= z <= 1 - e^{-t}. Non-positive, finite at the cone boundary.
pub fn kernel_k0_desitter(z: f64, t: f64) -> Result<f64> {
    let d = -(-t).exp_m1();
    check_cone(z, d)?;
    let z = z.min(d);
    k0_gap(z, d - z, t)
}

pub(crate) fn k0_gap(z: f64, gap: f64, t: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::domain(format!("tail kernels need t >= 0, got {t}")));
    }
    let et = (-t).exp();
    let d = -(-t).exp_m1();
    let sp = 1.0 + et;
    let q = (sp - z) * (sp + z);
    let gap = gap.max(0.0);
    let delta = gap * (2.0 * d - gap);
    let zeta = (delta / q).min(1.0);
    let omz = 4.0 * et / q;
    // G_i = (F_i(ζ) - 1)/ζ for F_1 = F(1/2,1/2;1), F_2 = F(-1/2,1/2;1)
    let (g1, _) = reduced_2f1_real(0.5, 0.5, 1.0, zeta, omz, KERNEL_TOL)?;
    let (g2, _) = reduced_2f1_real(-0.5, 0.5, 1.0, zeta, omz, KERNEL_TOL)?;
    let one_minus_e2t = -(-2.0 * t).exp_m1();
    let inner = (-d * g1 + 0.5 * (one_minus_e2t + z * z) * g2) / q;
    Ok((-0.5 + inner) / q.sqrt())
}

/// Tail kernel of the second datum for the de Sitter wave operator,
/// 0 <= z <= 1 - e^{-t}; 2 ∫ K₁ dz = t.
pub fn kernel_k1_desitter(z: f64, t: f64) -> Result<f64> {
    let d = -(-t).exp_m1();
    check_cone(z, d)?;
    let z = z.min(d);
    k1_gap(z, d - z, t)
}

pub(crate) fn k1_gap(z: f64, gap: f64, t: f64) -> Result<f64> {
    let f = OperatorFamily::DeSitterWave;
    let d = -(-t).exp_m1();
    Ok(kernel_gap(&f, t, 0.0, z, gap, d)?.re)
}
