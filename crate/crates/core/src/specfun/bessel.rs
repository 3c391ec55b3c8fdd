use std::f64::consts::{FRAC_PI_4, PI};

/// Bessel function of the first kind of order zero.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x < 2.0 {
        j0_series(x)
    } else if x < 30.0 {
        j0_miller(x)
    } else {
        j0_hankel(x)
    }
}

fn j0_series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= q / (kf * kf);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Backward recurrence normalised by 1 = J0 + 2 Σ J_{2k}.
fn j0_miller(x: f64) -> f64 {
    let mut n = x.ceil() as usize + 40;
    n += n % 2;
    let mut jp1 = 0.0;
    let mut j = 1e-300;
    let mut norm = 0.0;
    for k in (1..=n).rev() {
        let jm1 = (2.0 * k as f64 / x) * j - jp1;
        jp1 = j;
        j = jm1;
        if (k - 1) % 2 == 0 && k > 1 {
            norm += 2.0 * j;
        }
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
        }
    }
    j / (norm + j)
}

fn j0_hankel(x: f64) -> f64 {
    // a_k = Π_{j≤k} (-(2j-1)^2) / (k! 8^k); P, Q alternate over even/odd k
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut xp = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..80 {
        let kf = k as f64;
        let odd = (2.0 * kf - 1.0) * (2.0 * kf - 1.0);
        a *= -odd / (8.0 * kf);
        xp /= x;
        let term = a * xp;
        if term.abs() > prev || term.abs() < 1e-18 {
            break;
        }
        prev = term.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
    }
    let chi = x - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Modified Bessel function of the first kind of order zero.
pub fn bessel_i0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1usize;
    loop {
        let kf = k as f64;
        term *= q / (kf * kf);
        sum += term;
        if (term < 1e-17 * sum && kf > 0.5 * x.abs()) || k > 5000 || !sum.is_finite() {
            break;
        }
        k += 1;
    }
    sum
}
