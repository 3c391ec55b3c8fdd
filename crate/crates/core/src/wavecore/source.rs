use std::fmt;
use std::sync::Arc;

type SourceFn = dyn Fn(&[f64], f64) -> f64 + Send + Sync;

/// Source term f(x, t) of the forced problem, x in R^dim.
#[derive(Clone)]
pub struct SourceFamily {
    pub name: String,
    pub dim: usize,
    f: Arc<SourceFn>,
}

impl fmt::Debug for SourceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SourceFamily({}, dim={})", self.name, self.dim)
    }
}

impl SourceFamily {
    pub fn new(name: impl Into<String>, dim: usize, f: impl Fn(&[f64], f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            dim,
            f: Arc::new(f),
        }
    }

    pub fn constant(c: f64, dim: usize) -> Self {
        Self::new(format!("const({c})"), dim, move |_, _| c)
    }

    /// f = t^p, independent of x.
    pub fn time_power(p: i32, dim: usize) -> Self {
        Self::new(format!("t^{p}"), dim, move |_, t| t.powi(p))
    }

    pub fn sin_t(dim: usize) -> Self {
        Self::new("sin(t)", dim, |_, t| t.sin())
    }

    /// exp(-|x - center|^2 / width^2) g(t), with g(t) = 1.
    pub fn gaussian(center: Vec<f64>, width: f64) -> Self {
        let dim = center.len();
        Self::new(format!("gaussian(width={width})"), dim, move |x, _| {
            let r2: f64 = x.iter().zip(&center).map(|(a, b)| (a - b) * (a - b)).sum();
            (-r2 / (width * width)).exp()
        })
    }

    pub fn eval(&self, x: &[f64], t: f64) -> f64 {
        (self.f)(x, t)
    }
}
