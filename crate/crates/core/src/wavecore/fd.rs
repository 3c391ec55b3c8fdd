//! Explicit three-level leapfrog for u_tt - a(t)^2 u_xx + c u = f in one
//! space dimension. Serves as an independent oracle; the computational
//! domain is padded by the cone reach so boundary values never reach the
//! requested window.

use super::{Profile, SourceFamily};
use crate::error::{Error, Result};
use crate::field::{Grid, Provenance, SolutionField};

/// Upper bound on grid cells times time steps.
const MAX_WORK: f64 = 4e8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub t_end: f64,
    pub steps: usize,
    /// Store every `save_every`-th level, starting with the initial one.
    pub save_every: usize,
}

impl FdGrid {
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }
}

#[derive(Clone, Copy)]
pub enum FdData<'a> {
    Cauchy { phi0: &'a Profile, phi1: &'a Profile },
    Source(&'a SourceFamily),
}

pub struct FdProblem<'a> {
    pub speed2: &'a dyn Fn(f64) -> f64,
    pub potential: f64,
    pub t0: f64,
    pub data: FdData<'a>,
}

pub fn leapfrog(p: &FdProblem<'_>, g: &FdGrid, label: &str) -> Result<SolutionField> {
    if g.nx < 2 || g.steps == 0 || g.save_every == 0 {
        return Err(Error::config("fd_grid", "need nx >= 2, steps >= 1, save_every >= 1"));
    }
    if !(g.x_max > g.x_min && g.t_end > p.t0) {
        return Err(Error::config("fd_grid", "empty space or time window"));
    }
    let dx = g.dx();
    let dt = (g.t_end - p.t0) / g.steps as f64;
    let times: Vec<f64> = (0..=g.steps).map(|n| p.t0 + dt * n as f64).collect();
    let a2: Vec<f64> = times.iter().map(|&t| (p.speed2)(t)).collect();
    let max_speed = a2.iter().fold(0.0f64, |m, &v| m.max(v.sqrt()));
    let courant = dt * max_speed;
    if courant > dx || (p.potential > 0.0 && dt * dt * (4.0 * max_speed * max_speed / (dx * dx) + p.potential) > 4.0) {
        return Err(Error::CflViolation { courant, dx });
    }
    let reach: f64 = a2.iter().map(|v| v.sqrt() * dt).sum();
    // numerical dependence spreads diffusively beyond the physical cone
    let pad = (reach / dx).ceil() as usize + 8 + (6.0 * (g.steps as f64).sqrt()).ceil() as usize;
    let n = g.nx + 2 * pad;
    if (n as f64) * (g.steps as f64) > MAX_WORK {
        return Err(Error::WindowTooLarge(format!("{n} cells x {} steps", g.steps)));
    }
    let xs: Vec<f64> = (0..n).map(|i| g.x_min + dx * (i as f64 - pad as f64)).collect();
    let forcing = |t: f64, out: &mut Vec<f64>| {
        out.clear();
        match p.data {
            FdData::Source(src) => out.extend(xs.iter().map(|&x| src.eval(&[x], t))),
            FdData::Cauchy { .. } => out.resize(n, 0.0),
        }
    };
    let mut u0 = vec![0.0; n];
    let mut v0 = vec![0.0; n];
    if let FdData::Cauchy { phi0, phi1 } = p.data {
        for i in 0..n {
            u0[i] = phi0.value(xs[i])?;
            v0[i] = phi1.value(xs[i])?;
        }
    }
    let lap = |u: &[f64], i: usize| (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (dx * dx);
    let mut f = Vec::with_capacity(n);
    forcing(times[0], &mut f);
    // Taylor start: u1 = u0 + dt v0 + dt²/2 u_tt(0)
    let mut u1 = u0.clone();
    for i in 0..n {
        let l = if i == 0 || i == n - 1 { 0.0 } else { lap(&u0, i) };
        let utt = a2[0] * l - p.potential * u0[i] + f[i];
        u1[i] = u0[i] + dt * v0[i] + 0.5 * dt * dt * utt;
    }

    let nsave = g.steps / g.save_every + 1;
    let grid = Grid {
        x: (0..g.nx).map(|i| xs[pad + i]).collect(),
        t: (0..nsave).map(|k| times[k * g.save_every]).collect(),
    };
    let mut field = SolutionField::new(
        label,
        match p.data {
            FdData::Cauchy { .. } => "cauchy",
            FdData::Source(_) => "source",
        },
        &grid,
        Provenance {
            method: "leapfrog".into(),
            quadrature: None,
        },
    );
    let store = |field: &mut SolutionField, level: usize, u: &[f64]| {
        if level.is_multiple_of(g.save_every) {
            let k = level / g.save_every;
            for ix in 0..g.nx {
                field.set(k, ix, u[pad + ix], f64::NAN);
            }
        }
    };
    store(&mut field, 0, &u0);
    if g.steps >= 1 {
        store(&mut field, 1, &u1);
    }
    let mut prev = u0;
    let mut cur = u1;
    let mut next = vec![0.0; n];
    for level in 1..g.steps {
        forcing(times[level], &mut f);
        let a = a2[level];
        for i in 1..n - 1 {
            next[i] = 2.0 * cur[i] - prev[i] + dt * dt * (a * lap(&cur, i) - p.potential * cur[i] + f[i]);
        }
        // edges: drop the Laplacian, keeping spatially uniform states exact
        for i in [0, n - 1] {
            next[i] = 2.0 * cur[i] - prev[i] + dt * dt * (f[i] - p.potential * cur[i]);
        }
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
        store(&mut field, level + 1, &cur);
    }
    Ok(field)
}

/// Finite-difference solution of the constant-speed wave equation
/// u_tt = u_xx with the given data, on a padded domain.
pub fn fd_wave_oracle(data: FdData<'_>, grid: &FdGrid) -> Result<SolutionField> {
    let one = |_: f64| 1.0;
    leapfrog(
        &FdProblem {
            speed2: &one,
            potential: 0.0,
            t0: 0.0,
            data,
        },
        grid,
        "wave",
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_pulse_matches_dalembert() {
        let phi0 = Profile::gaussian(0.0, 0.3).unwrap();
        let zero = Profile::zero();
        let g = FdGrid {
            x_min: -1.0,
            x_max: 1.0,
            nx: 801,
            t_end: 0.8,
            steps: 1600,
            save_every: 400,
        };
        let f = fd_wave_oracle(FdData::Cauchy { phi0: &phi0, phi1: &zero }, &g).unwrap();
        let it = f.nt() - 1;
        let t = f.grid_t[it];
        for ix in (0..f.nx()).step_by(40) {
            let x = f.grid_x[ix];
            let exact = super::super::dalembert_first_datum(&phi0, x, t).unwrap();
            assert!((f.value(it, ix) - exact).abs() < 1e-4, "x={x}");
        }
    }

    #[test]
    fn constant_source_gives_half_t_squared() {
        let src = SourceFamily::constant(1.0, 1);
        let g = FdGrid {
            x_min: 0.0,
            x_max: 1.0,
            nx: 11,
            t_end: 1.0,
            steps: 100,
            save_every: 100,
        };
        let f = fd_wave_oracle(FdData::Source(&src), &g).unwrap();
        for ix in 0..f.nx() {
            assert!((f.value(1, ix) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn cfl_violation_detected() {
        let src = SourceFamily::constant(1.0, 1);
        let g = FdGrid {
            x_min: 0.0,
            x_max: 1.0,
            nx: 101,
            t_end: 1.0,
            steps: 50,
            save_every: 10,
        };
        assert!(matches!(fd_wave_oracle(FdData::Source(&src), &g), Err(Error::CflViolation { .. })));
    }
}
