//! Dormand–Prince 5(4) with continuous output for the scalar linear ODE
//! V'' + b(t) V' + c(t) V = f(t), used as an oracle for kernel identities
//! and x-independent sources.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernels::OperatorFamily;

type Coef = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// b(t) and c(t) of V'' + b V' + c V = f.
#[derive(Clone)]
pub struct OdeCoefficients {
    pub b_coef: Coef,
    pub c_coef: Coef,
}

impl std::fmt::Debug for OdeCoefficients {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("OdeCoefficients(..)")
    }
}

impl OdeCoefficients {
    pub fn new(b: impl Fn(f64) -> f64 + Send + Sync + 'static, c: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            b_coef: Arc::new(b),
            c_coef: Arc::new(c),
        }
    }

    pub fn constant(b: f64, c: f64) -> Self {
        Self::new(move |_| b, move |_| c)
    }

    /// Time ODE of an operator family: no damping, c = its potential.
    pub fn for_family(family: &OperatorFamily) -> Self {
        Self::constant(0.0, family.potential())
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const MAX_STEPS: usize = 1_000_000;

type State = [f64; 2];

/// One accepted step with its quartic interpolant.
#[derive(Clone, Debug)]
struct Step {
    t: f64,
    h: f64,
    rcont: [State; 5],
}

/// Continuous solution (V, V') on a window.
#[derive(Clone, Debug)]
pub struct DenseSolution {
    t_start: f64,
    t_end: f64,
    steps: Vec<Step>,
}

impl DenseSolution {
    pub fn window(&self) -> (f64, f64) {
        (self.t_start, self.t_end)
    }

    /// (V(t), V'(t)).
    pub fn eval(&self, t: f64) -> Result<(f64, f64)> {
        let tol = 1e-12 * (self.t_end - self.t_start).abs().max(1.0);
        if !(t >= self.t_start - tol && t <= self.t_end + tol) {
            return Err(Error::domain(format!("t = {t} outside the solved window [{}, {}]", self.t_start, self.t_end)));
        }
        let k = self.steps.partition_point(|s| s.t + s.h < t).min(self.steps.len() - 1);
        let s = &self.steps[k];
        let th = ((t - s.t) / s.h).clamp(0.0, 1.0);
        let th1 = 1.0 - th;
        let r = &s.rcont;
        let y = |i: usize| r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
        Ok((y(0), y(1)))
    }

    pub fn steps(&self) -> usize {
        self.steps.len()
    }
}

/// Solves V'' + b V' + c V = f on [t0, t1] from (V, V')(t0) = y0, with mixed
/// absolute/relative local tolerance `tol`.
pub fn ode_solve(coefs: &OdeCoefficients, f: &dyn Fn(f64) -> f64, t0: f64, t1: f64, y0: (f64, f64), tol: f64) -> Result<DenseSolution> {
    if !(t1 > t0 && t0.is_finite() && t1.is_finite()) {
        return Err(Error::config("window", format!("need finite t0 < t1, got [{t0}, {t1}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::config("tol", "must be positive"));
    }
    let fail = |t: f64, reason: &str| Error::IntegrationFailure { t, reason: reason.into() };
    let rhs = |t: f64, y: &State| -> [f64; 2] { [y[1], f(t) - (coefs.b_coef)(t) * y[1] - (coefs.c_coef)(t) * y[0]] };
    let lin = |y: &State, h: f64, ks: &[(&[f64; 2], f64)]| -> State {
        let mut out = *y;
        for (k, a) in ks {
            out[0] += h * a * k[0];
            out[1] += h * a * k[1];
        }
        out
    };
    let mut steps = Vec::new();
    let mut t = t0;
    let mut y: State = [y0.0, y0.1];
    let mut k1 = rhs(t, &y);
    if !(k1[0].is_finite() && k1[1].is_finite()) {
        return Err(fail(t, "non-finite right-hand side"));
    }
    let mut h = (1e-2 * (t1 - t0)).min(0.01);
    for _ in 0..MAX_STEPS {
        if t >= t1 {
            return Ok(DenseSolution {
                t_start: t0,
                t_end: t1,
                steps,
            });
        }
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        let k2 = rhs(t + C2 * h, &lin(&y, h, &[(&k1, A21)]));
        let k3 = rhs(t + C3 * h, &lin(&y, h, &[(&k1, A31), (&k2, A32)]));
        let k4 = rhs(t + C4 * h, &lin(&y, h, &[(&k1, A41), (&k2, A42), (&k3, A43)]));
        let k5 = rhs(t + C5 * h, &lin(&y, h, &[(&k1, A51), (&k2, A52), (&k3, A53), (&k4, A54)]));
        let k6 = rhs(t + h, &lin(&y, h, &[(&k1, A61), (&k2, A62), (&k3, A63), (&k4, A64), (&k5, A65)]));
        let y1 = lin(&y, h, &[(&k1, A71), (&k3, A73), (&k4, A74), (&k5, A75), (&k6, A76)]);
        let k7 = rhs(t + h, &y1);
        let mut err = 0.0;
        for i in 0..2 {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = tol * (1.0 + y[i].abs().max(y1[i].abs()));
            err += (e / sc).powi(2);
        }
        let err = (0.5 * err).sqrt();
        if !err.is_finite() {
            return Err(fail(t, "non-finite error estimate"));
        }
        if err <= 1.0 {
            let mut rc = [[0.0; 2]; 5];
            for i in 0..2 {
                let ydiff = y1[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                rc[0][i] = y[i];
                rc[1][i] = ydiff;
                rc[2][i] = bspl;
                rc[3][i] = ydiff - h * k7[i] - bspl;
                rc[4][i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            steps.push(Step { t, h, rcont: rc });
            t = if last { t1 } else { t + h };
            y = y1;
            k1 = k7;
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
        if h < 1e-14 * (1.0 + t.abs()) {
            return Err(fail(t, "step size underflow"));
        }
    }
    Err(fail(t, "step limit exceeded"))
}

/// Two solutions of the homogeneous ODE with V1(t0) = 1, V1'(t0) = 0,
/// V2(t0) = 0, V2'(t0) = 1.
#[derive(Clone, Debug)]
pub struct OdePair {
    pub v1: DenseSolution,
    pub v2: DenseSolution,
}

impl OdePair {
    pub fn wronskian(&self, s: f64) -> Result<f64> {
        let (a, da) = self.v1.eval(s)?;
        let (b, db) = self.v2.eval(s)?;
        Ok(a * db - da * b)
    }

    /// (V1(b) V2(t) - V1(t) V2(b)) / W(b).
    pub fn ratio(&self, t: f64, b: f64) -> Result<f64> {
        let (v1b, _) = self.v1.eval(b)?;
        let (v2b, _) = self.v2.eval(b)?;
        let (v1t, _) = self.v1.eval(t)?;
        let (v2t, _) = self.v2.eval(t)?;
        let w = self.wronskian(b)?;
        if w == 0.0 {
            return Err(Error::IntegrationFailure {
                t: b,
                reason: "vanishing Wronskian".into(),
            });
        }
        Ok((v1b * v2t - v1t * v2b) / w)
    }
}

pub fn ode_pair_solve(coefs: &OdeCoefficients, window: (f64, f64), tol: f64) -> Result<OdePair> {
    let zero = |_: f64| 0.0;
    Ok(OdePair {
        v1: ode_solve(coefs, &zero, window.0, window.1, (1.0, 0.0), tol)?,
        v2: ode_solve(coefs, &zero, window.0, window.1, (0.0, 1.0), tol)?,
    })
}
