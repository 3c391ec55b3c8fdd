//! The integral transform from wave-equation solutions to solutions of the
//! variable-coefficient problems, and grid drivers around it.

mod cauchy;
mod edes;

pub use cauchy::{desitter_cauchy_parts, profile_line_integral, solve_desitter_cauchy, CauchyParts};
pub use edes::{edes_weighted_limits, edes_weighted_value, small_t_growth_ok, solve_edes_weighted, WeightedLimits};

pub use crate::field::{Grid, Provenance, SolutionField};
pub use crate::quadrature::QuadratureSpec;

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::kernels::{kernel_gap, OperatorFamily};
use crate::quadrature::{integrate_nodes, EndpointMode, Node, QuadValue};
use crate::wavecore::{wave_source_family, SourceFamily};

/// Imaginary parts above this (relative to 1 + |Re|) reject a complex transform.
pub const IMAG_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformValue {
    pub value: f64,
    /// Imaginary part discarded from a complex-kernel transform.
    pub imag: f64,
    pub est_error: f64,
}

/// Complex value carrying the integrated inner-quadrature error.
#[derive(Clone, Copy, Debug)]
struct Tracked {
    value: Complex64,
    err: f64,
}

impl Add for Tracked {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Tracked {
            value: self.value + o.value,
            err: self.err + o.err,
        }
    }
}

impl Sub for Tracked {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Tracked {
            value: self.value - o.value,
            err: self.err - o.err,
        }
    }
}

impl Mul<f64> for Tracked {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Tracked {
            value: self.value * s,
            err: self.err * s,
        }
    }
}

impl QuadValue for Tracked {
    fn zero() -> Self {
        Tracked {
            value: Complex64::new(0.0, 0.0),
            err: 0.0,
        }
    }
    fn norm(&self) -> f64 {
        self.value.norm()
    }
}

/// Hypergeometric kernels near the light cone carry ~1e-13 relative noise.
const INNER_REL_FLOOR: f64 = 1e-12;

/// Rule for the r-integral. The Tricomi kernel blows up like
/// (radius - r)^{-k/(2k+2)} at b = 0 and is sharply peaked there for small b.
pub(crate) fn inner_endpoint_mode(family: &OperatorFamily) -> EndpointMode {
    match family {
        OperatorFamily::Tricomi { .. } => EndpointMode::SingularEndpointSubstitution,
        _ => EndpointMode::Plain,
    }
}

/// mult · ∫_{t0}^{t} db ∫_0^{|φ(t)-φ(b)|} K(t; r, b) w(r, b) dr.
///
/// `w(r, b)` is the wave-equation solution at the fixed spatial point.
pub fn apply_transform<W>(family: &OperatorFamily, w: W, t: f64, t0: f64, quad: &QuadratureSpec) -> Result<TransformValue>
where
    W: Fn(f64, f64) -> Result<f64>,
{
    family.validate()?;
    quad.validate()?;
    if !(t.is_finite() && t0.is_finite()) {
        return Err(Error::domain("non-finite time"));
    }
    if family.degenerate() && t0 < 0.0 {
        return Err(Error::domain(format!("{} needs t0 >= 0, got {t0}", family.name())));
    }
    if t < t0 {
        return Err(Error::domain(format!("t = {t} precedes t0 = {t0}")));
    }
    if t == t0 {
        return Ok(TransformValue {
            value: 0.0,
            imag: 0.0,
            est_error: 0.0,
        });
    }
    if family.cone_radius(t, t0)? == 0.0 {
        return Err(Error::ConeDegenerate { t0, t });
    }
    let span = t - t0;
    let inner = QuadratureSpec {
        rel_tol: (quad.rel_tol * 0.1).max(INNER_REL_FLOOR),
        abs_tol: quad.abs_tol * 0.1 / span,
        endpoint_mode: inner_endpoint_mode(family),
        ..*quad
    };
    let outer = integrate_nodes(
        |nb: Node| {
            let b = nb.x;
            // radius from the exact offset t - b
            let radius = family.cone_radius(t, t - nb.to_b)?;
            if radius == 0.0 {
                return Ok(Tracked::zero());
            }
            let r = integrate_nodes(
                |nr: Node| {
                    let k = kernel_gap(family, t, b, nr.x, nr.to_b, radius)?;
                    Ok(k * w(nr.x, b)?)
                },
                0.0,
                radius,
                &inner,
            )?;
            Ok(Tracked {
                value: r.value,
                err: r.est_error,
            })
        },
        t0,
        t,
        quad,
    )?;
    let mult = family.multiplier();
    let v = outer.value.value * mult;
    let est = mult * (outer.est_error + outer.value.err.abs());
    if family.is_complex() && v.im.abs() > IMAG_TOL * (1.0 + v.re.abs()) {
        return Err(Error::NonRealSolution { real: v.re, imag: v.im });
    }
    Ok(TransformValue {
        value: v.re,
        imag: v.im,
        est_error: est,
    })
}

/// Default initial time of the forced problem.
pub const T0: f64 = 0.0;

/// Solution of u_tt - a(t)² Δu + c u = f with zero data at t = 0, on a
/// grid of x values (sources of dimension 3 are evaluated at (x, 0, 0)).
pub fn solve_source_problem(family: &OperatorFamily, src: &SourceFamily, grid: &Grid, quad: &QuadratureSpec, exec: Exec) -> Result<SolutionField> {
    family.validate()?;
    quad.validate()?;
    if src.dim != 1 && src.dim != 3 {
        return Err(Error::UnsupportedDimension(src.dim));
    }
    if let Some(&t) = grid.t.iter().find(|&&t| t < T0) {
        return Err(Error::config("grid.t", format!("times must be >= {T0}, got {t}")));
    }
    let nodes = grid.nodes();
    let results = exec::map(exec, &nodes, |&(x, t)| {
        let point = if src.dim == 1 { vec![x] } else { vec![x, 0.0, 0.0] };
        apply_transform(family, |r, b| wave_source_family(src, &point, r, b), t, T0, quad)
    });
    let mut field = SolutionField::new(
        family.label(),
        "source",
        grid,
        Provenance {
            method: "transform".into(),
            quadrature: Some(*quad),
        },
    );
    fill(&mut field, &nodes, results)?;
    Ok(field)
}

/// Writes node results into a field; data singular at a node excludes it.
pub(crate) fn fill(field: &mut SolutionField, nodes: &[(f64, f64)], results: Vec<Result<TransformValue>>) -> Result<()> {
    let nx = field.nx();
    for (k, (res, &(x, t))) in results.into_iter().zip(nodes).enumerate() {
        let (it, ix) = (k / nx, k % nx);
        match res {
            Ok(v) => {
                field.set(it, ix, v.value, v.est_error);
                field.max_imag = field.max_imag.max(v.imag.abs());
            }
            Err(e) if matches!(e.root(), Error::SingularEvaluation(_)) => {
                field.set(it, ix, f64::NAN, f64::NAN);
                field.excluded.push((it, ix));
            }
            Err(e) => return Err(e.at_node(x, t)),
        }
    }
    Ok(())
}
