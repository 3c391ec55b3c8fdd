use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Scalar function of one variable.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum ProfileKind {
    Zero,
    /// Unit step, 1/2 at the jump.
    Heaviside,
    /// coeff |y|^{-exponent}, 0 <= exponent < 1.
    PowerLaw { exponent: f64, coeff: f64 },
    /// Coefficients in increasing degree.
    Polynomial(Vec<f64>),
    /// exp(-(y/width)^2).
    Gaussian { width: f64 },
    Smooth(ScalarFn),
}

/// Initial datum φ(x) = kind(x - shift).
#[derive(Clone)]
pub struct Profile {
    pub kind: ProfileKind,
    pub shift: f64,
    /// Extra breakpoints for `Smooth` profiles (kinks, steep fronts).
    pub declared: Vec<f64>,
}

/// Location of a non-smooth point and the strength of its singularity:
/// near `x`, φ(x + o) = |o|^{-exponent} · regular(o).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularPoint {
    pub x: f64,
    pub exponent: f64,
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            ProfileKind::Zero => "zero".to_string(),
            ProfileKind::Heaviside => "heaviside".to_string(),
            ProfileKind::PowerLaw { exponent, coeff } => format!("powerlaw(a={exponent}, C={coeff})"),
            ProfileKind::Polynomial(c) => format!("polynomial({c:?})"),
            ProfileKind::Gaussian { width } => format!("gaussian(width={width})"),
            ProfileKind::Smooth(_) => "smooth".to_string(),
        };
        write!(f, "Profile({kind}, shift={})", self.shift)
    }
}

impl Profile {
    fn of(kind: ProfileKind) -> Self {
        Self {
            kind,
            shift: 0.0,
            declared: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        Self::of(ProfileKind::Zero)
    }

    pub fn heaviside() -> Self {
        Self::of(ProfileKind::Heaviside)
    }

    pub fn power_law(exponent: f64, coeff: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&exponent) {
            return Err(Error::config("profile.exponent", format!("must lie in [0, 1), got {exponent}")));
        }
        if !coeff.is_finite() {
            return Err(Error::config("profile.coeff", "must be finite"));
        }
        Ok(Self::of(ProfileKind::PowerLaw { exponent, coeff }))
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        Self::of(ProfileKind::Polynomial(coeffs))
    }

    pub fn gaussian(center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::config("profile.width", format!("must be positive, got {width}")));
        }
        Ok(Self::of(ProfileKind::Gaussian { width }).shifted(center))
    }

    pub fn smooth(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::of(ProfileKind::Smooth(Arc::new(f)))
    }

    pub fn with_breakpoints(mut self, points: Vec<f64>) -> Self {
        self.declared = points;
        self
    }

    /// φ(x - h).
    pub fn shifted(mut self, h: f64) -> Self {
        self.shift += h;
        for p in &mut self.declared {
            *p += h;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        match &self.kind {
            ProfileKind::Zero => true,
            ProfileKind::Polynomial(c) => c.iter().all(|&v| v == 0.0),
            ProfileKind::PowerLaw { coeff, .. } => *coeff == 0.0,
            _ => false,
        }
    }

    /// Value of the unshifted kind at y.
    fn raw(&self, y: f64) -> Result<f64> {
        Ok(match &self.kind {
            ProfileKind::Zero => 0.0,
            ProfileKind::Heaviside => {
                if y > 0.0 {
                    1.0
                } else if y < 0.0 {
                    0.0
                } else {
                    0.5
                }
            }
            ProfileKind::PowerLaw { exponent, coeff } => {
                if y == 0.0 {
                    return Err(Error::SingularEvaluation(y + self.shift));
                }
                coeff * y.abs().powf(-exponent)
            }
            ProfileKind::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &v| acc * y + v),
            ProfileKind::Gaussian { width } => (-(y / width).powi(2)).exp(),
            ProfileKind::Smooth(f) => f(y),
        })
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        self.raw(x - self.shift)
    }

    pub fn singular_points(&self) -> Vec<SingularPoint> {
        match &self.kind {
            ProfileKind::Heaviside => vec![SingularPoint { x: self.shift, exponent: 0.0 }],
            ProfileKind::PowerLaw { exponent, coeff } if *coeff != 0.0 => {
                vec![SingularPoint {
                    x: self.shift,
                    exponent: *exponent,
                }]
            }
            _ => self
                .declared
                .iter()
                .map(|&x| SingularPoint { x, exponent: 0.0 })
                .collect(),
        }
    }

    /// |o|^{exponent} φ(p.x + o) for o != 0, evaluated from the exact offset.
    pub fn regular_part(&self, p: &SingularPoint, offset: f64) -> Result<f64> {
        match &self.kind {
            ProfileKind::Heaviside if p.x == self.shift => Ok(if offset > 0.0 { 1.0 } else { 0.0 }),
            ProfileKind::PowerLaw { coeff, .. } if p.x == self.shift => Ok(*coeff),
            // declared breakpoints of smooth kinds carry no weight
            _ => self.value(p.x + offset),
        }
    }
}
