//! mult · ∫_0^{|φ(t)-φ(b)|} K(t; r, b) dr = (V1(b) V2(t) - V1(t) V2(b)) / W(b)
//! for the time ODE V'' + c V = 0 of each family.

use super::ode::OdePair;
use super::report::{PointResidual, ResidualReport};
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::kernels::{kernel_gap, OperatorFamily};
use crate::quadrature::{integrate_nodes, Integral, Node, QuadratureSpec};
use crate::transform::inner_endpoint_mode;

/// mult · ∫_0^{radius} Re K(t; r, b) dr.
pub fn kernel_integral(family: &OperatorFamily, t: f64, b: f64, quad: &QuadratureSpec) -> Result<Integral<f64>> {
    family.validate()?;
    if !(t > b) {
        return Err(Error::domain(format!("identity needs t > b, got t = {t}, b = {b}")));
    }
    if family.degenerate() && b < 0.0 {
        return Err(Error::domain(format!("{} needs b >= 0", family.name())));
    }
    let radius = family.cone_radius(t, b)?;
    let spec = quad.with_endpoint_mode(inner_endpoint_mode(family));
    let r = integrate_nodes(|n: Node| Ok(kernel_gap(family, t, b, n.x, n.to_b, radius)?.re), 0.0, radius, &spec)?;
    let m = family.multiplier();
    Ok(Integral {
        value: m * r.value,
        est_error: m * r.est_error,
        evaluations: r.evaluations,
    })
}

/// Identity residual at one (t, b).
pub fn identity_residual(family: &OperatorFamily, pair: &OdePair, t: f64, b: f64, quad: &QuadratureSpec) -> Result<f64> {
    let lhs = kernel_integral(family, t, b, quad)?.value;
    Ok(lhs - pair.ratio(t, b)?)
}

/// n x n pairs (b, t) with t_j = t_max (j+1)/n and b = t_j i/n, so 0 <= b < t <= t_max.
pub fn identity_grid(t_max: f64, n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        let t = t_max * (j + 1) as f64 / n as f64;
        for i in 0..n {
            out.push((t * i as f64 / n as f64, t));
        }
    }
    out
}

/// Identity residuals over (b, t) pairs; in the report x holds b.
pub fn identity_check(
    family: &OperatorFamily,
    pair: &OdePair,
    pairs: &[(f64, f64)],
    quad: &QuadratureSpec,
    tolerance: f64,
    exec: Exec,
) -> Result<ResidualReport> {
    let res = exec::map(exec, pairs, |&(b, t)| identity_residual(family, pair, t, b, quad).map_err(|e| e.at_node(b, t)));
    let mut points = Vec::with_capacity(pairs.len());
    for (r, &(b, t)) in res.into_iter().zip(pairs) {
        points.push(PointResidual { x: b, t, residual: r? });
    }
    Ok(ResidualReport::from_points(family.label(), "wronskian_identity", points, tolerance))
}
