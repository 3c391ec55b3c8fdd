//! Cauchy problem for u_tt - e^{-2t} u_xx = 0 with u(x,0) = φ0, u_t(x,0) = φ1:
//!
//!   u = e^{t/2} v_φ0(x, D) + 2∫_0^1 v_φ0(x, Ds) K₀(Ds, t) D ds
//!                          + 2∫_0^1 v_φ1(x, Ds) K₁(Ds, t) D ds,
//!
//! with D = 1 - e^{-t} and v_φ the d'Alembert solution with datum φ. In one
//! dimension 2 v_φ(x, z) = φ(x+z) + φ(x-z), so each tail is a sum of two line
//! integrals of the profile against the kernel.

use serde::{Deserialize, Serialize};

use super::{fill, TransformValue};
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::field::{Grid, Provenance, SolutionField};
use crate::kernels::{k0_gap, k1_gap};
use crate::quadrature::{integrate_nodes, integrate_power_endpoint, Integral, Node, QuadratureSpec};
use crate::wavecore::{dalembert_first_datum, Profile, SingularPoint};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CauchyParts {
    /// e^{t/2} v_φ0(x, D): the part carried by the light cone.
    pub huygensian: f64,
    pub tail0: f64,
    pub tail1: f64,
    pub est_error: f64,
}

impl CauchyParts {
    pub fn total(&self) -> f64 {
        self.huygensian + self.tail0 + self.tail1
    }

    pub fn tail(&self) -> f64 {
        self.tail0 + self.tail1
    }
}

/// ∫_0^len φ(x + σz) k(z, len - z) dz with σ = ±1.
///
/// The interval is split at the singular points of φ; next to each one the
/// profile is evaluated from the exact offset and a power-law weight is
/// integrated by substitution. `k` receives z and the exact distance to len.
pub fn profile_line_integral(
    phi: &Profile,
    x: f64,
    sigma: f64,
    len: f64,
    k: &dyn Fn(f64, f64) -> Result<f64>,
    quad: &QuadratureSpec,
) -> Result<Integral<f64>> {
    let mut total = Integral {
        value: 0.0,
        est_error: 0.0,
        evaluations: 0,
    };
    if phi.is_zero() || len == 0.0 {
        return Ok(total);
    }
    // breakpoints in z with the singular point they come from
    let mut cuts: Vec<(f64, Option<SingularPoint>)> = vec![(0.0, None), (len, None)];
    for sp in phi.singular_points() {
        let z = sigma * (sp.x - x);
        if (0.0..=len).contains(&z) {
            cuts.push((z, Some(sp)));
        }
    }
    cuts.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.is_some().cmp(&a.1.is_some())));
    cuts.dedup_by(|later, first| later.0 == first.0);
    let pieces = cuts.len() - 1;
    let spec = QuadratureSpec {
        abs_tol: quad.abs_tol / pieces as f64,
        ..*quad
    };
    let mut add = |r: Integral<f64>| {
        total.value += r.value;
        total.est_error += r.est_error;
        total.evaluations += r.evaluations;
    };
    for w in cuts.windows(2) {
        let ((zl, sl), (zr, sr)) = (w[0], w[1]);
        let width = zr - zl;
        if width == 0.0 {
            continue;
        }
        // φ(p + σw) from the left cut, φ(p - σw) from the right one
        let from_left = |p: SingularPoint, span: f64| {
            integrate_power_endpoint(
                |o: f64| Ok(phi.regular_part(&p, sigma * o)? * k(zl + o, (len - zl) - o)?),
                span,
                p.exponent,
                &spec,
            )
        };
        let from_right = |p: SingularPoint, span: f64| {
            integrate_power_endpoint(
                |o: f64| Ok(phi.regular_part(&p, -sigma * o)? * k(zr - o, (len - zr) + o)?),
                span,
                p.exponent,
                &spec,
            )
        };
        match (sl, sr) {
            (None, None) => add(integrate_nodes(
                |n: Node| Ok(phi.value(x + sigma * n.x)? * k(n.x, (len - zr) + n.to_b)?),
                zl,
                zr,
                &spec,
            )?),
            (Some(p), None) => add(from_left(p, width)?),
            (None, Some(p)) => add(from_right(p, width)?),
            (Some(p), Some(q)) => {
                add(from_left(p, 0.5 * width)?);
                add(from_right(q, 0.5 * width)?);
            }
        }
    }
    Ok(total)
}

/// The three parts of the de Sitter Cauchy solution at (x, t).
pub fn desitter_cauchy_parts(phi0: &Profile, phi1: &Profile, x: f64, t: f64, quad: &QuadratureSpec) -> Result<CauchyParts> {
    quad.validate()?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("Cauchy problem needs finite t >= 0, got {t}")));
    }
    let d = -(-t).exp_m1();
    let huygensian = (0.5 * t).exp() * dalembert_first_datum(phi0, x, d)?;
    if t == 0.0 {
        return Ok(CauchyParts {
            huygensian,
            tail0: 0.0,
            tail1: 0.0,
            est_error: 0.0,
        });
    }
    let k0 = |z: f64, gap: f64| k0_gap(z, gap, t);
    let k1 = |z: f64, gap: f64| k1_gap(z, gap, t);
    let spec = QuadratureSpec {
        abs_tol: quad.abs_tol / 4.0,
        ..*quad
    };
    let mut err = 0.0;
    let mut tail = |phi: &Profile, k: &dyn Fn(f64, f64) -> Result<f64>| -> Result<f64> {
        let mut s = 0.0;
        for sigma in [1.0, -1.0] {
            let r = profile_line_integral(phi, x, sigma, d, k, &spec)?;
            s += r.value;
            err += r.est_error;
        }
        Ok(s)
    };
    let tail0 = tail(phi0, &k0)?;
    let tail1 = tail(phi1, &k1)?;
    Ok(CauchyParts {
        huygensian,
        tail0,
        tail1,
        est_error: err,
    })
}

/// Grid driver; nodes where the data are singular on the cone are excluded.
pub fn solve_desitter_cauchy(phi0: &Profile, phi1: &Profile, grid: &Grid, quad: &QuadratureSpec, exec: Exec) -> Result<SolutionField> {
    quad.validate()?;
    if let Some(&t) = grid.t.iter().find(|&&t| t < 0.0) {
        return Err(Error::config("grid.t", format!("times must be >= 0, got {t}")));
    }
    let nodes = grid.nodes();
    let results = exec::map(exec, &nodes, |&(x, t)| {
        desitter_cauchy_parts(phi0, phi1, x, t, quad).map(|p| TransformValue {
            value: p.total(),
            imag: 0.0,
            est_error: p.est_error,
        })
    });
    let mut field = SolutionField::new(
        "de_sitter",
        "cauchy",
        grid,
        Provenance {
            method: "transform".into(),
            quadrature: Some(*quad),
        },
    );
    fill(&mut field, &nodes, results)?;
    Ok(field)
}
