//! Oracles shared by integration tests: power series summed in
//! double-double arithmetic, independent of the library's evaluation paths.
#![allow(dead_code)]

use num_complex::Complex64;
use twofloat::TwoFloat;

#[derive(Clone, Copy)]
pub struct Dd {
    re: TwoFloat,
    im: TwoFloat,
}

impl Dd {
    pub fn new(re: f64, im: f64) -> Self {
        Dd {
            re: TwoFloat::from(re),
            im: TwoFloat::from(im),
        }
    }
    pub fn add(self, o: Dd) -> Dd {
        Dd {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
    pub fn mul(self, o: Dd) -> Dd {
        Dd {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
    pub fn div(self, o: Dd) -> Dd {
        let inv = recip(o.re * o.re + o.im * o.im);
        Dd {
            re: (self.re * o.re + self.im * o.im) * inv,
            im: (self.im * o.re - self.re * o.im) * inv,
        }
    }
    pub fn norm(self) -> f64 {
        self.re.hi().hypot(self.im.hi())
    }
}

/// 1/x to double-double accuracy by one Newton step. The crate's own
/// TwoFloat / TwoFloat forms its residual without a fused multiply-add and
/// is only accurate to double precision.
pub fn recip(x: TwoFloat) -> TwoFloat {
    let th = TwoFloat::from(1.0 / x.hi());
    let e = TwoFloat::from(1.0) - x * th;
    th + th * e
}

/// Direct series in double-double arithmetic.
pub fn dd_series(a: Complex64, b: Complex64, c: f64, z: f64) -> Complex64 {
    let (a, b, c, z) = (Dd::new(a.re, a.im), Dd::new(b.re, b.im), Dd::new(c, 0.0), Dd::new(z, 0.0));
    let mut term = Dd::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..20_000 {
        let nf = Dd::new(n as f64, 0.0);
        let num = a.add(nf).mul(b.add(nf));
        let den = c.add(nf).mul(Dd::new(n as f64 + 1.0, 0.0));
        term = term.mul(num).div(den).mul(z);
        sum = sum.add(term);
        if term.norm() < 1e-33 * sum.norm().max(1e-300) {
            break;
        }
    }
    Complex64::new(sum.re.hi(), sum.im.hi())
}


/// Σ (±1)^k (x²/4)^k / (k!)² in double-double: J0 for sign -1, I0 for +1.
fn dd_bessel(x: f64, sign: f64) -> f64 {
    let q = TwoFloat::from(x) * TwoFloat::from(x) / TwoFloat::from(4.0);
    let mut term = TwoFloat::from(1.0);
    let mut sum = term;
    for k in 1..2000 {
        let kf = TwoFloat::from(k as f64);
        term = term * q * recip(kf * kf) * TwoFloat::from(sign);
        sum += term;
        if term.hi().abs() < 1e-34 * sum.hi().abs().max(1e-300) {
            break;
        }
    }
    sum.hi()
}

pub fn dd_j0(x: f64) -> f64 {
    dd_bessel(x, -1.0)
}

pub fn dd_i0(x: f64) -> f64 {
    dd_bessel(x, 1.0)
}
