//! Tails of de Sitter waves: the part of the Cauchy solution behind the
//! light-cone front, the step-datum ratio limit, and a fitted pointwise bound
//! for power-law data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::quadrature::QuadratureSpec;
use crate::transform::desitter_cauchy_parts;
use crate::verify::{PointResidual, ResidualReport, Verdict};
use crate::wavecore::Profile;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailDecomposition {
    pub x: f64,
    pub t: f64,
    pub u: f64,
    pub huygensian: f64,
    pub tail: f64,
    /// |tail| / |huygensian|; infinite when the front term vanishes.
    pub ratio: f64,
    pub est_error: f64,
}

pub fn tail_eval(phi0: &Profile, phi1: &Profile, x: f64, t: f64, quad: &QuadratureSpec) -> Result<TailDecomposition> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("tail needs t > 0, got {t}")));
    }
    let p = desitter_cauchy_parts(phi0, phi1, x, t, quad)?;
    let tail = p.tail();
    let ratio = if tail == 0.0 { 0.0 } else { tail.abs() / p.huygensian.abs() };
    Ok(TailDecomposition {
        x,
        t,
        u: p.total(),
        huygensian: p.huygensian,
        tail,
        ratio,
        est_error: p.est_error,
    })
}

/// 2(1 - e^{-t/2}): supremum of |T| / |u - T| for the unit step at time t.
pub fn heaviside_ratio_bound(t: f64) -> f64 {
    -2.0 * (-0.5 * t).exp_m1()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioSample {
    pub t: f64,
    pub eps: f64,
    pub x: f64,
    pub ratio: f64,
    pub bound: f64,
}


#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioLimit {
    pub samples: Vec<RatioSample>,
    /// Limit in ε at each t, by linear extrapolation of the two smallest ε.
    pub inner: Vec<(f64, f64)>,
    /// Outer limit t → ∞ by Aitken's Δ² on the last three inner limits.
    pub limit: f64,
    /// Every sample satisfies ratio <= bound (up to 1e-9 relative).
    pub bound_holds: bool,
}

/// How the offsets from the cone are measured.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OffsetScale {
    /// x = 1 - e^{-t} - ε.
    Absolute,
    /// x = 1 - e^{-t} - ε e^{-t}. The boundary layer of the tail has width
    /// e^{-t}, so fixed offsets stop resolving it as t grows.
    #[default]
    ConeScaled,
}

/// |T| / |u - T| for the unit step datum at offsets ε from the cone.
pub fn example_ratio_limit(t_list: &[f64], eps_list: &[f64], scale: OffsetScale, quad: &QuadratureSpec, exec: Exec) -> Result<RatioLimit> {
    if t_list.len() < 3 || t_list.windows(2).any(|w| !(w[1] > w[0])) || t_list[0] <= 0.0 {
        return Err(Error::config("t_list", "need at least three positive increasing times"));
    }
    if eps_list.len() < 2 || eps_list.windows(2).any(|w| !(w[1] < w[0])) || eps_list.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::config("eps_list", "need at least two positive decreasing offsets"));
    }
    let h = Profile::heaviside();
    let z = Profile::zero();
    let mut jobs = Vec::new();
    for &t in t_list {
        for &eps in eps_list {
            let off = match scale {
                OffsetScale::Absolute => eps,
                OffsetScale::ConeScaled => eps * (-t).exp(),
            };
            let x = -(-t).exp_m1() - off;
            if x < 0.0 {
                return Err(Error::config("eps_list", format!("ε = {eps} leaves the cone at t = {t}")));
            }
            jobs.push((t, eps, x));
        }
    }
    let res = exec::map(exec, &jobs, |&(t, _, x)| tail_eval(&h, &z, x, t, quad).map_err(|e| e.at_node(x, t)));
    let mut samples = Vec::with_capacity(jobs.len());
    for (r, &(t, eps, x)) in res.into_iter().zip(&jobs) {
        samples.push(RatioSample {
            t,
            eps,
            x,
            ratio: r?.ratio,
            bound: heaviside_ratio_bound(t),
        });
    }
    let bound_holds = samples.iter().all(|s| s.ratio <= s.bound * (1.0 + 1e-9));
    let ne = eps_list.len();
    let inner: Vec<(f64, f64)> = samples
        .chunks(ne)
        .map(|c| {
            let (a, b) = (&c[ne - 2], &c[ne - 1]);
            (a.t, (b.ratio * a.eps - a.ratio * b.eps) / (a.eps - b.eps))
        })
        .collect();
    let n = inner.len();
    let (l1, l2, l3) = (inner[n - 3].1, inner[n - 2].1, inner[n - 1].1);
    let den = (l3 - l2) - (l2 - l1);
    let limit = if den.abs() > 1e-300 && (l3 - l2).abs() < (l2 - l1).abs() {
        l3 - (l3 - l2).powi(2) / den
    } else {
        l3
    };
    Ok(RatioLimit {
        samples,
        inner,
        limit,
        bound_holds,
    })
}

/// Power-law data φ0 = C0 |x|^{-a}, φ1 = C1 |x|^{-b}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TLinConfig {
    pub a: f64,
    pub b: f64,
    pub c0: f64,
    pub c1: f64,
}

impl TLinConfig {
    pub fn validate(&self) -> Result<()> {
        for (v, name) in [(self.a, "tlin.a"), (self.b, "tlin.b")] {
            if !(v > 0.5 && v < 1.0) {
                return Err(Error::config(name, format!("exponent must lie in (1/2, 1), got {v}")));
            }
        }
        for (v, name) in [(self.c0, "tlin.c0"), (self.c1, "tlin.c1")] {
            if !v.is_finite() {
                return Err(Error::config(name, "must be finite"));
            }
        }
        Ok(())
    }

    pub fn profiles(&self) -> Result<(Profile, Profile)> {
        Ok((Profile::power_law(self.a, self.c0)?, Profile::power_law(self.b, self.c1)?))
    }

    /// Envelope of |T| with the unknown constant set to 1.
    pub fn envelope(&self, x: f64, t: f64) -> f64 {
        let w = 1.0 + t.exp() * (1.0 - x.abs());
        let front = (1.0 + t) * (0.5 * t + self.a * t).exp() * w.powf(0.5 - self.a);
        let back = (1.0 + t) * (-0.5 * t + self.b * t).exp() * w.powf(0.5 - self.b);
        self.c0.abs() * front + self.c1.abs() * back
    }
}

/// Sampling plan of the bound check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TLinOptions {
    pub t_min: f64,
    /// Calibration window end of the short fit.
    pub t_short: f64,
    /// Calibration window end of the long fit and the held-out grid.
    pub t_long: f64,
    pub nt: usize,
    pub nx: usize,
    /// Closest approach to the cone, |x| <= 1 - e^{-t} - margin.
    pub margin: f64,
    /// Held-out quotients may exceed the fitted constant by this factor.
    pub heldout_slack: f64,
    /// Allowed relative growth of the fitted constant from the short to the long window.
    pub max_growth: f64,
}

impl Default for TLinOptions {
    fn default() -> Self {
        Self {
            t_min: 0.5,
            t_short: 2.0,
            t_long: 4.0,
            nt: 8,
            nx: 8,
            margin: 1e-3,
            heldout_slack: 1.05,
            max_growth: 0.10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailSample {
    pub x: f64,
    pub t: f64,
    pub u: f64,
    pub huygensian: f64,
    pub tail: f64,
    pub ratio: f64,
    /// Fitted constant times the envelope.
    pub bound: f64,
    pub quotient: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TlinReport {
    pub config: TLinConfig,
    pub c_short: f64,
    pub c_long: f64,
    pub growth: f64,
    pub heldout_max_quotient: f64,
    pub verdict: Verdict,
    pub calibration: Vec<TailSample>,
    pub heldout: Vec<TailSample>,
}

impl TlinReport {
    /// Held-out quotients relative to the fitted constant, as a residual report
    /// whose tolerance is the allowed slack.
    pub fn residual_report(&self, opts: &TLinOptions) -> ResidualReport {
        let c = self.c_long;
        let pts = self
            .heldout
            .iter()
            .map(|s| PointResidual {
                x: s.x,
                t: s.t,
                residual: if c > 0.0 { s.quotient / c } else { s.quotient },
            })
            .collect();
        let mut r = ResidualReport::from_points("de_sitter", "tlin_bound", pts, opts.heldout_slack);
        r.verdict = self.verdict;
        r
    }
}

/// Nodes (x, t) with t in [t0, t1] (nt levels, offset by `shift` in units of
/// a level spacing) and nx values of x >= 0 graded toward the cone.
fn tlin_nodes(t0: f64, t1: f64, nt: usize, nx: usize, margin: f64, shift: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let dt = (t1 - t0) / (nt.max(2) - 1) as f64;
    for j in 0..nt {
        let t = t0 + dt * (j as f64 + shift);
        if t > t1 {
            continue;
        }
        let reach = -(-t).exp_m1() - margin;
        if reach <= 0.0 {
            continue;
        }
        for i in 0..nx {
            let s = (i as f64 + shift) / (nx - 1).max(1) as f64;
            let s = s.min(1.0);
            out.push((reach * (1.0 - (1.0 - s) * (1.0 - s)), t));
        }
    }
    out
}

/// Fits C = max |T| / envelope on t <= t_short and on t <= t_long, and
/// checks the long fit on a held-out grid of interleaved nodes.
pub fn tlin_bound_check(cfg: &TLinConfig, opts: &TLinOptions, quad: &QuadratureSpec, exec: Exec) -> Result<TlinReport> {
    cfg.validate()?;
    if !(opts.t_min > 0.0 && opts.t_short > opts.t_min && opts.t_long > opts.t_short && opts.nt >= 2 && opts.nx >= 2 && opts.margin > 0.0) {
        return Err(Error::config("tlin_options", "need 0 < t_min < t_short < t_long, nt, nx >= 2, margin > 0"));
    }
    let (phi0, phi1) = cfg.profiles()?;
    let eval = |nodes: &[(f64, f64)]| -> Result<Vec<TailSample>> {
        let res = exec::map(exec, nodes, |&(x, t)| tail_eval(&phi0, &phi1, x, t, quad).map_err(|e| e.at_node(x, t)));
        let mut out = Vec::with_capacity(nodes.len());
        for r in res {
            let d = r?;
            let env = cfg.envelope(d.x, d.t);
            let quotient = if d.tail == 0.0 { 0.0 } else { d.tail.abs() / env };
            out.push(TailSample {
                x: d.x,
                t: d.t,
                u: d.u,
                huygensian: d.huygensian,
                tail: d.tail,
                ratio: d.ratio,
                bound: env,
                quotient,
            });
        }
        Ok(out)
    };
    let step = (opts.t_long - opts.t_min) / (2 * opts.nt - 1) as f64;
    // the short window gets the same level spacing as the long one
    let nt_short = ((opts.t_short - opts.t_min) / step).round() as usize + 1;
    let mut calibration = eval(&tlin_nodes(opts.t_min, opts.t_short, nt_short, opts.nx, opts.margin, 0.0))?;
    let mut tail_long = eval(&tlin_nodes(opts.t_short + step, opts.t_long, 2 * opts.nt - nt_short, opts.nx, opts.margin, 0.0))?;
    let fit = |s: &[TailSample]| s.iter().fold(0.0f64, |m, v| m.max(v.quotient));
    let c_short = fit(&calibration);
    calibration.append(&mut tail_long);
    let c_long = fit(&calibration);
    let mut heldout = eval(&tlin_nodes(opts.t_min, opts.t_long, 2 * opts.nt - 1, opts.nx, opts.margin, 0.5))?;
    let heldout_max_quotient = fit(&heldout);
    for s in calibration.iter_mut().chain(heldout.iter_mut()) {
        s.bound *= c_long;
    }
    let growth = if c_short > 0.0 { c_long / c_short - 1.0 } else { 0.0 };
    let ok = c_long.is_finite() && growth < opts.max_growth && heldout_max_quotient <= opts.heldout_slack * c_long;
    Ok(TlinReport {
        config: *cfg,
        c_short,
        c_long,
        growth,
        heldout_max_quotient,
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        calibration,
        heldout,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::kernel_k0_desitter;
    use crate::quadrature::integrate;

    fn quad() -> QuadratureSpec {
        QuadratureSpec::with_tolerances(1e-11, 1e-13)
    }

    #[test]
    fn heaviside_tail_inside_and_outside_the_cone() {
        let (h, z) = (Profile::heaviside(), Profile::zero());
        let t = 1.3;
        let x0 = 0.4;
        let d = tail_eval(&h, &z, x0, t, &quad()).unwrap();
        let k = integrate(|s| kernel_k0_desitter(s, t), 0.0, x0, &quad()).unwrap().value;
        let e = 0.5 - 0.5 * (0.5 * t).exp() + k;
        assert!((d.tail - e).abs() < 1e-10, "{} vs {e}", d.tail);
        assert!((d.u - 0.5 - k).abs() < 1e-10);
        let out = tail_eval(&h, &z, 1.5, t, &quad()).unwrap();
        assert!((out.u - 1.0).abs() < 1e-10);
        assert!((out.tail - (1.0 - (0.5 * t).exp())).abs() < 1e-10);
    }

    #[test]
    fn zero_data_has_no_tail() {
        let z = Profile::zero();
        let d = tail_eval(&z, &z, 0.1, 2.0, &quad()).unwrap();
        assert_eq!((d.tail, d.ratio), (0.0, 0.0));
    }

    #[test]
    fn ratio_is_small_early_and_bounded() {
        let r = example_ratio_limit(&[0.01, 0.02, 0.03], &[1e-3, 1e-4], OffsetScale::Absolute, &quad(), Exec::Sequential).unwrap();
        assert!(r.bound_holds);
        assert!(r.samples.iter().all(|s| s.ratio < 0.03));
    }

    #[test]
    fn envelope_and_config_validation() {
        let c = TLinConfig { a: 0.75, b: 0.6, c0: 1.0, c1: 0.0 };
        assert!(c.validate().is_ok());
        assert!(TLinConfig { a: 0.5, ..c }.validate().is_err());
        let t: f64 = 1.0;
        let e = 2.0 * 1.25f64.exp() * (1.0 + t.exp()).powf(-0.25);
        assert!((c.envelope(0.0, t) - e).abs() < 1e-14 * e);
    }

    #[test]
    fn node_plan_stays_inside_the_cone() {
        let n = tlin_nodes(0.5, 4.0, 8, 8, 1e-3, 0.5);
        assert!(!n.is_empty());
        assert!(n.iter().all(|&(x, t)| x >= 0.0 && x <= -(-t).exp_m1() - 1e-3 && t <= 4.0));
    }
}
