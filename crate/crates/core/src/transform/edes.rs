//! Weighted problem for the Einstein–de Sitter operator with m = 1:
//!
//!   ψ_tt + (2/t) ψ_t - t^{-4/3} ψ_xx = f,   t ψ → 0,  t ψ_t + ψ → 0 as t → 0,
//!
//! solved by ψ = (1/t) ∫_0^t db ∫_0^{A-B} b K(t; r, b) w(x, r; b) dr, with
//! A = 3t^{1/3}, B = 3b^{1/3} and K the m = 1 kernel (A² + B² - r²)/18.

use serde::{Deserialize, Serialize};

use super::{apply_transform, fill, TransformValue, T0};
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::field::{Grid, Provenance, SolutionField};
use crate::kernels::OperatorFamily;
use crate::quadrature::QuadratureSpec;
use crate::wavecore::{wave_source_family, SourceFamily};

const FAMILY: OperatorFamily = OperatorFamily::EinsteinDeSitter { m: 1 };

/// Exponent margin of the small-time growth condition |f| <= C t^{ε-2}.
pub const GROWTH_EPS: f64 = 0.1;
/// Time at which the weighted initial conditions are reported.
pub const LIMIT_T: f64 = 1e-3;

fn point(src: &SourceFamily, x: f64) -> Result<Vec<f64>> {
    match src.dim {
        1 => Ok(vec![x]),
        3 => Ok(vec![x, 0.0, 0.0]),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// ψ(x, t); ψ(x, 0) = 0.
pub fn edes_weighted_value(src: &SourceFamily, x: f64, t: f64, quad: &QuadratureSpec) -> Result<TransformValue> {
    let p = point(src, x)?;
    if !(t >= 0.0) {
        return Err(Error::domain(format!("weighted problem needs t >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(TransformValue {
            value: 0.0,
            imag: 0.0,
            est_error: 0.0,
        });
    }
    let v = apply_transform(&FAMILY, |r, b| Ok(b * wave_source_family(src, &p, r, b)?), t, T0, quad)?;
    Ok(TransformValue {
        value: v.value / t,
        imag: 0.0,
        est_error: v.est_error / t,
    })
}

/// The weighted initial quantities t ψ and t ψ_t + ψ at a small time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedLimits {
    pub t: f64,
    pub t_psi: f64,
    pub t_dpsi_plus_psi: f64,
}

pub fn edes_weighted_limits(src: &SourceFamily, x: f64, t: f64, quad: &QuadratureSpec) -> Result<WeightedLimits> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("limit time must be positive, got {t}")));
    }
    let h = 0.25 * t;
    let psi = edes_weighted_value(src, x, t, quad)?.value;
    let dpsi = (edes_weighted_value(src, x, t + h, quad)?.value - edes_weighted_value(src, x, t - h, quad)?.value) / (2.0 * h);
    Ok(WeightedLimits {
        t,
        t_psi: t * psi,
        t_dpsi_plus_psi: t * dpsi + psi,
    })
}

/// Heuristic check of |f| + |t f_t| <= C t^{ε-2} near t = 0: the weighted
/// size g(t) = (|f| + |t f_t|) t^{2-ε} sampled at t = 10^{-j}, j = 1..10,
/// must not exceed twice its largest value over j <= 5.
pub fn small_t_growth_ok(src: &SourceFamily, x: f64) -> Result<bool> {
    let p = point(src, x)?;
    let g = |t: f64| {
        let h = 1e-3 * t;
        let ft = (src.eval(&p, t + h) - src.eval(&p, t - h)) / (2.0 * h);
        (src.eval(&p, t).abs() + (t * ft).abs()) * t.powf(2.0 - GROWTH_EPS)
    };
    let vals: Vec<f64> = (1..=10).map(|j| g(10f64.powi(-j))).collect();
    if vals.iter().any(|v| !v.is_finite()) {
        return Ok(false);
    }
    let early = vals[..5].iter().fold(0.0f64, |m, &v| m.max(v));
    let late = vals[5..].iter().fold(0.0f64, |m, &v| m.max(v));
    Ok(late <= 2.0 * early)
}

/// Grid driver. The growth check and the weighted limits at x = grid.x[0]
/// are recorded as warnings and diagnostics of the returned field.
pub fn solve_edes_weighted(src: &SourceFamily, grid: &Grid, quad: &QuadratureSpec, exec: Exec) -> Result<SolutionField> {
    quad.validate()?;
    point(src, 0.0)?;
    if let Some(&t) = grid.t.iter().find(|&&t| t < 0.0) {
        return Err(Error::config("grid.t", format!("times must be >= 0, got {t}")));
    }
    let nodes = grid.nodes();
    let results = exec::map(exec, &nodes, |&(x, t)| edes_weighted_value(src, x, t, quad));
    let mut field = SolutionField::new(
        "einstein_de_sitter(m=1)",
        "weighted",
        grid,
        Provenance {
            method: "transform".into(),
            quadrature: Some(*quad),
        },
    );
    fill(&mut field, &nodes, results)?;
    let mut grows = false;
    for &x in &grid.x {
        grows |= !small_t_growth_ok(src, x)?;
    }
    if grows {
        field.warnings.push(format!(
            "source may violate |f| <= C t^(eps-2) near t = 0 (eps = {GROWTH_EPS}); weighted initial conditions are not guaranteed"
        ));
    }
    let x0 = grid.x[0];
    let lim = edes_weighted_limits(src, x0, LIMIT_T, quad)?;
    field.diagnostics.insert("limit_t".into(), lim.t);
    field.diagnostics.insert("t_psi".into(), lim.t_psi);
    field.diagnostics.insert("t_dpsi_plus_psi".into(), lim.t_dpsi_plus_psi);
    Ok(field)
}
