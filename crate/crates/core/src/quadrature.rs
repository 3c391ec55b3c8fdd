//! Adaptive Gauss–Kronrod (10/21) quadrature with optional endpoint
//! clustering and an exact substitution for power-law endpoint singularities.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndpointMode {
    #[default]
    Plain,
    /// Clusters nodes at both ends, x = a + (b-a) u^4 / (u^4 + (1-u)^4);
    /// removes endpoint singularities up to |x - a|^{-1/2}.
    SingularEndpointSubstitution,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
    pub endpoint_mode: EndpointMode,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_depth: 40,
            endpoint_mode: EndpointMode::Plain,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    pub fn with_endpoint_mode(mut self, mode: EndpointMode) -> Self {
        self.endpoint_mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol >= 0.0 && self.abs_tol >= 0.0) || (self.rel_tol == 0.0 && self.abs_tol == 0.0) {
            return Err(Error::config("quadrature", "tolerances must be non-negative and not both zero"));
        }
        if self.max_depth == 0 || self.max_depth > 60 {
            return Err(Error::config("quadrature.max_depth", "must lie in 1..=60"));
        }
        Ok(())
    }
}

/// Values that can be integrated: reals and complex numbers.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn norm(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn norm(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn norm(&self) -> f64 {
        Complex64::norm(*self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral<V> {
    pub value: V,
    pub est_error: f64,
    pub evaluations: usize,
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_600_525_335,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

/// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// Cap on integrand evaluations per call.
const MAX_EVALS: usize = 21 * 20_000;

struct Rule<V> {
    value: V,
    err: f64,
    resabs: f64,
}

fn gk21<V: QuadValue, F: FnMut(f64) -> Result<V>>(f: &mut F, a: f64, b: f64) -> Result<Rule<V>> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = fc * WGK[10];
    let mut gauss = V::zero();
    let mut resabs = WGK[10] * fc.norm();
    let mut fv = [(V::zero(), V::zero()); 10];
    for (j, &x) in XGK[..10].iter().enumerate() {
        let dx = h * x;
        let f1 = f(c - dx)?;
        let f2 = f(c + dx)?;
        kron = kron + (f1 + f2) * WGK[j];
        resabs += WGK[j] * (f1.norm() + f2.norm());
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
        fv[j] = (f1, f2);
    }
    let mean = kron * 0.5;
    let mut resasc = WGK[10] * (fc - mean).norm();
    for (j, &(f1, f2)) in fv.iter().enumerate() {
        resasc += WGK[j] * ((f1 - mean).norm() + (f2 - mean).norm());
    }
    let habs = h.abs();
    let value = kron * h;
    let resabs = resabs * habs;
    let resasc = resasc * habs;
    let mut err = ((kron - gauss) * h).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    if !(err.is_finite() && value.norm().is_finite()) {
        return Err(Error::QuadratureFailure {
            value: f64::NAN,
            est_error: f64::INFINITY,
            tol: 0.0,
        });
    }
    Ok(Rule { value, err, resabs })
}

struct Segment<V> {
    a: f64,
    b: f64,
    depth: u32,
    rule: Rule<V>,
}

impl<V> PartialEq for Segment<V> {
    fn eq(&self, other: &Self) -> bool {
        self.rule.err == other.rule.err
    }
}
impl<V> Eq for Segment<V> {}
impl<V> PartialOrd for Segment<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Segment<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rule.err.total_cmp(&other.rule.err)
    }
}

fn adaptive<V: QuadValue, F: FnMut(f64) -> Result<V>>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral<V>> {
    let mut evals = 21;
    let first = gk21(&mut f, a, b)?;
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Segment<V>> = Vec::new();
    let mut value = first.value;
    let mut err = first.err;
    heap.push(Segment { a, b, depth: 0, rule: first });
    loop {
        let target = spec.abs_tol.max(spec.rel_tol * value.norm());
        if err <= target || heap.is_empty() || evals >= MAX_EVALS {
            break;
        }
        let seg = heap.pop().expect("heap is non-empty");
        if seg.depth >= spec.max_depth {
            done.push(seg);
            continue;
        }
        let m = 0.5 * (seg.a + seg.b);
        if m <= seg.a || m >= seg.b {
            done.push(seg);
            continue;
        }
        let left = gk21(&mut f, seg.a, m)?;
        let right = gk21(&mut f, m, seg.b)?;
        evals += 42;
        value = value + (left.value + right.value - seg.rule.value);
        err += left.err + right.err - seg.rule.err;
        heap.push(Segment { a: seg.a, b: m, depth: seg.depth + 1, rule: left });
        heap.push(Segment { a: m, b: seg.b, depth: seg.depth + 1, rule: right });
    }
    let (value, err, resabs) = totals(&heap, &done);
    let target = spec.abs_tol.max(spec.rel_tol * value.norm());
    // an error dominated by rounding in the sum is as good as it gets
    let floor = 100.0 * f64::EPSILON * resabs;
    if err > target && err > floor {
        return Err(Error::QuadratureFailure {
            value: value.norm(),
            est_error: err,
            tol: target,
        });
    }
    Ok(Integral {
        value,
        est_error: err,
        evaluations: evals,
    })
}

fn totals<V: QuadValue>(heap: &BinaryHeap<Segment<V>>, done: &[Segment<V>]) -> (V, f64, f64) {
    let mut v = V::zero();
    let mut e = 0.0;
    let mut r = 0.0;
    for s in heap.iter().chain(done.iter()) {
        v = v + s.rule.value;
        e += s.rule.err;
        r += s.rule.resabs;
    }
    (v, e, r)
}

/// Integration node with its distances to both ends, exact under the
/// endpoint substitution (x itself may round onto an endpoint).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Node {
    pub x: f64,
    pub from_a: f64,
    pub to_b: f64,
}

/// ∫_a^b f(x) dx.
pub fn integrate<V, F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> Result<V>,
{
    let (lo, hi) = (a.min(b), a.max(b));
    integrate_nodes(|n: Node| f(n.x.clamp(lo.next_up(), hi.next_down()).clamp(lo, hi)), a, b, spec)
}

/// ∫_a^b f dx with the integrand receiving [`Node`]s.
pub fn integrate_nodes<V, F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral<V>>
where
    V: QuadValue,
    F: FnMut(Node) -> Result<V>,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain(format!("integration limits must be finite, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(Integral {
            value: V::zero(),
            est_error: 0.0,
            evaluations: 0,
        });
    }
    let len = b - a;
    match spec.endpoint_mode {
        EndpointMode::Plain => adaptive(
            |x: f64| {
                f(Node {
                    x,
                    from_a: x - a,
                    to_b: b - x,
                })
            },
            a,
            b,
            spec,
        ),
        EndpointMode::SingularEndpointSubstitution => {
            let g = move |u: f64| {
                let v = 1.0 - u;
                let (u3, v3) = (u * u * u, v * v * v);
                let (u4, v4) = (u3 * u, v3 * v);
                let den = u4 + v4;
                let jac = 4.0 * u3 * v3 / (den * den);
                if jac == 0.0 {
                    return Ok(V::zero());
                }
                let (from_a, to_b) = (len * (u4 / den), len * (v4 / den));
                let x = if u < 0.5 { a + from_a } else { b - to_b };
                Ok(f(Node { x, from_a, to_b })? * (len * jac))
            };
            adaptive(g, 0.0, 1.0, spec)
        }
    }
}

/// ∫_0^len w^{-alpha} g(w) dw for 0 <= alpha < 1, by w = len u^{1/(1-alpha)},
/// which turns the weight into a constant. `g` receives the exact offset w.
pub fn integrate_power_endpoint<V, F>(mut g: F, len: f64, alpha: f64, spec: &QuadratureSpec) -> Result<Integral<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> Result<V>,
{
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::domain(format!("endpoint exponent must lie in [0, 1), got {alpha}")));
    }
    if !(len >= 0.0 && len.is_finite()) {
        return Err(Error::domain(format!("interval length must be finite and non-negative, got {len}")));
    }
    if len == 0.0 {
        return Ok(Integral {
            value: V::zero(),
            est_error: 0.0,
            evaluations: 0,
        });
    }
    if alpha == 0.0 {
        let plain = QuadratureSpec {
            endpoint_mode: EndpointMode::Plain,
            ..*spec
        };
        return adaptive(g, 0.0, len, &plain);
    }
    let p = 1.0 / (1.0 - alpha);
    let scale = len.powf(1.0 - alpha) * p;
    let inner_spec = QuadratureSpec {
        abs_tol: spec.abs_tol / scale,
        endpoint_mode: EndpointMode::Plain,
        ..*spec
    };
    let r = adaptive(|u: f64| g(len * u.powf(p)), 0.0, 1.0, &inner_spec)?;
    Ok(Integral {
        value: r.value * scale,
        est_error: r.est_error * scale,
        evaluations: r.evaluations,
    })
}
