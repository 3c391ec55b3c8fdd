//! Residual of the defining equation u_tt + β(t) u_t - a(t)² u_xx + c u - f,
//! by centered second differences of a solution re-evaluated on the stencil.

use serde::{Deserialize, Serialize};

use super::report::{PointResidual, ResidualReport};
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::field::SolutionField;
use crate::kernels::OperatorFamily;
use crate::wavecore::SourceFamily;

/// Degenerate or singular families are probed only at t - h >= this.
pub const DEGENERATE_T_MIN: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Equation {
    Family(OperatorFamily),
    /// ψ_tt + (2/t) ψ_t - t^{-4/3} ψ_xx.
    EdesWeighted,
}

impl Equation {
    pub fn damping(&self, t: f64) -> f64 {
        match self {
            Equation::EdesWeighted => 2.0 / t,
            Equation::Family(_) => 0.0,
        }
    }

    pub fn speed_squared(&self, t: f64) -> f64 {
        match self {
            Equation::EdesWeighted => t.powf(-4.0 / 3.0),
            Equation::Family(f) => f.speed_squared(t),
        }
    }

    pub fn potential(&self) -> f64 {
        match self {
            Equation::EdesWeighted => 0.0,
            Equation::Family(f) => f.potential(),
        }
    }

    /// Smallest admissible stencil time.
    pub fn t_min(&self) -> f64 {
        match self {
            Equation::EdesWeighted => DEGENERATE_T_MIN,
            Equation::Family(f) if f.degenerate() => DEGENERATE_T_MIN,
            Equation::Family(_) => f64::NEG_INFINITY,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Equation::EdesWeighted => "einstein_de_sitter_weighted".into(),
            Equation::Family(f) => f.label(),
        }
    }
}

/// Residual at a single node with stencil half-width h.
pub fn pde_residual_at<U>(eq: &Equation, u: &U, src: &SourceFamily, x: f64, t: f64, h: f64) -> Result<f64>
where
    U: Fn(f64, f64) -> Result<f64>,
{
    if src.dim != 1 {
        return Err(Error::UnsupportedDimension(src.dim));
    }
    if t - h < eq.t_min() {
        return Err(Error::InsufficientGrid(format!("stencil at t = {t} with h = {h} reaches below t = {}", eq.t_min())));
    }
    let c = u(x, t)?;
    let (tp, tm) = (u(x, t + h)?, u(x, t - h)?);
    let (xp, xm) = (u(x + h, t)?, u(x - h, t)?);
    let h2 = h * h;
    let utt = (tp - 2.0 * c + tm) / h2;
    let ut = (tp - tm) / (2.0 * h);
    let uxx = (xp - 2.0 * c + xm) / h2;
    Ok(utt + eq.damping(t) * ut - eq.speed_squared(t) * uxx + eq.potential() * c - src.eval(&[x], t))
}

/// Residuals at the admissible, non-excluded nodes of `field`, with u
/// re-evaluated on each stencil.
pub fn pde_residual<U>(
    field: &SolutionField,
    eq: &Equation,
    src: &SourceFamily,
    h: f64,
    tolerance: f64,
    u: U,
    exec: Exec,
) -> Result<ResidualReport>
where
    U: Fn(f64, f64) -> Result<f64> + Sync + Send,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::config("stencil_h", format!("must be positive, got {h}")));
    }
    let mut probes = Vec::new();
    for (it, &t) in field.grid_t.iter().enumerate() {
        if t - h < eq.t_min() {
            continue;
        }
        for (ix, &x) in field.grid_x.iter().enumerate() {
            if !field.excluded.contains(&(it, ix)) && field.value(it, ix).is_finite() {
                probes.push((x, t));
            }
        }
    }
    if probes.is_empty() {
        return Err(Error::InsufficientGrid(format!("no node admits a stencil of half-width {h}")));
    }
    let res = exec::map(exec, &probes, |&(x, t)| pde_residual_at(eq, &u, src, x, t, h).map_err(|e| e.at_node(x, t)));
    let mut points = Vec::with_capacity(probes.len());
    for (r, &(x, t)) in res.into_iter().zip(&probes) {
        points.push(PointResidual { x, t, residual: r? });
    }
    Ok(ResidualReport::from_points(eq.label(), format!("pde_residual(h={h})"), points, tolerance))
}
