//! Adaptive Gauss-Kronrod integration and central finite differences.
//!
//! The integrator is the classic globally adaptive scheme: a 10-point Gauss /
//! 21-point Kronrod pair on every subinterval, with the interval of largest
//! estimated error bisected until the total estimate meets the tolerance.
//! Error estimates follow QUADPACK's heuristic scaling, which makes them
//! pessimistic for smooth integrands. Everything is deterministic: the same
//! integrand and configuration always take the same subdivision path.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// How [`integrate_semi_infinite`] reaches infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TailTransform {
    /// No transform; semi-infinite integration is rejected.
    None,
    /// `[a, a + 1]` as is, then `x = a + 1/t` maps `[a + 1, inf)` onto
    /// `(0, 1]`. Both the lower end and infinity land where floats are dense,
    /// so integrable singularities at `a` and slow `x^-3/2` tails are resolved.
    #[default]
    Rational,
}

/// Tolerances and budget for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Relative tolerance on the integral.
    pub rel_tol: f64,
    /// Absolute tolerance on the integral.
    pub abs_tol: f64,
    /// Maximum number of subintervals.
    pub max_subdivisions: usize,
    /// Change of variables for semi-infinite ranges.
    pub tail_transform: TailTransform,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 0.0, max_subdivisions: 2000, tail_transform: TailTransform::Rational }
    }
}

impl QuadratureConfig {
    /// Default configuration with the given relative tolerance.
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self { rel_tol, ..Self::default() }
    }

    /// Checks `rel_tol > 0 or abs_tol > 0`, both non-negative, and a non-zero
    /// subdivision budget.
    pub fn validate(&self) -> Result<()> {
        let tol_ok = |t: f64| t.is_finite() && t >= 0.0;
        if !tol_ok(self.rel_tol) || !tol_ok(self.abs_tol) {
            return Err(Error::InvalidConfig("tolerances must be finite and non-negative"));
        }
        if self.rel_tol == 0.0 && self.abs_tol == 0.0 {
            return Err(Error::InvalidConfig("one of rel_tol, abs_tol must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidConfig("max_subdivisions must be at least 1"));
        }
        Ok(())
    }
}

/// Integral value with its absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    /// Integral estimate.
    pub value: f64,
    /// Estimated absolute error.
    pub error: f64,
    /// Subintervals in the final partition.
    pub subdivisions: usize,
}

impl Estimate {
    /// `error / |value|`, or the absolute error when the value is zero.
    pub fn relative_error(&self) -> f64 {
        if self.value != 0.0 {
            self.error / libm::fabs(self.value)
        } else {
            self.error
        }
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gauss_kronrod_21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut res_gauss = 0.0;
    let mut res_kronrod = WGK[10] * f_center;
    let mut res_abs = libm::fabs(res_kronrod);
    let mut lower = [0.0; 10];
    let mut upper = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let (f1, f2) = (f(center - dx), f(center + dx));
        lower[j] = f1;
        upper[j] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (libm::fabs(f1) + libm::fabs(f2));
        // Gauss nodes are the odd Kronrod abscissae
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[10] * libm::fabs(f_center - mean);
    for j in 0..10 {
        res_asc += WGK[j] * (libm::fabs(lower[j] - mean) + libm::fabs(upper[j] - mean));
    }
    let width = libm::fabs(half);
    let value = res_kronrod * half;
    res_abs *= width;
    res_asc *= width;
    let mut error = libm::fabs((res_kronrod - res_gauss) * half);
    if res_asc != 0.0 && error != 0.0 {
        let scaled = libm::pow(200.0 * error / res_asc, 1.5);
        error = res_asc * scaled.min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Segment { a, b, value, error }
}

fn totals(segments: &[Segment]) -> (f64, f64) {
    segments.iter().fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error))
}

/// Integrates `f` over the finite interval `[a, b]`.
///
/// Succeeds once the summed error estimate is at most
/// `max(abs_tol, rel_tol |value|)`. Running out of subdivisions yields
/// [`Error::NoConvergence`] carrying the best estimate reached.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    cfg.validate()?;
    if !a.is_finite() {
        return Err(Error::Domain { name: "a", value: a, reason: "integration bound must be finite" });
    }
    if !b.is_finite() || b < a {
        return Err(Error::Domain { name: "b", value: b, reason: "upper bound must be finite and >= lower bound" });
    }
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0, subdivisions: 1 });
    }

    let mut segments: Vec<Segment> = Vec::with_capacity(cfg.max_subdivisions.min(4096));
    segments.push(gauss_kronrod_21(&f, a, b));
    loop {
        let (value, error) = totals(&segments);
        if !value.is_finite() {
            return Err(Error::Domain { name: "integrand", value, reason: "integrand is not finite on the interval" });
        }
        let target = cfg.abs_tol.max(cfg.rel_tol * libm::fabs(value));
        if error <= target {
            return Ok(Estimate { value, error, subdivisions: segments.len() });
        }
        let worst = segments
            .iter()
            .enumerate()
            .fold(0, |best, (i, s)| if s.error > segments[best].error { i } else { best });
        let seg = segments[worst];
        let mid = 0.5 * (seg.a + seg.b);
        if segments.len() >= cfg.max_subdivisions || !(seg.a < mid && mid < seg.b) {
            return Err(Error::NoConvergence { value, error, subdivisions: segments.len() });
        }
        segments[worst] = gauss_kronrod_21(&f, seg.a, mid);
        segments.push(gauss_kronrod_21(&f, mid, seg.b));
    }
}

/// Integrates `f` over `[a, inf)` by mapping it to a finite interval.
///
/// Callers must supply an integrand that decays at least like `x^-2`; with
/// the rational map that keeps the transformed integrand bounded.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, a: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    match cfg.tail_transform {
        TailTransform::None => Err(Error::InvalidConfig("semi-infinite integration needs a tail transform")),
        TailTransform::Rational => {
            if !a.is_finite() {
                return Err(Error::Domain { name: "a", value: a, reason: "integration bound must be finite" });
            }
            let head = integrate(&f, a, a + 1.0, cfg)?;
            let mapped = |t: f64| {
                let x = a + 1.0 / t;
                if x.is_finite() {
                    f(x) / (t * t)
                } else {
                    0.0
                }
            };
            let tail = integrate(mapped, 0.0, 1.0, cfg)?;
            Ok(Estimate {
                value: head.value + tail.value,
                error: head.error + tail.error,
                subdivisions: head.subdivisions + tail.subdivisions,
            })
        }
    }
}

/// Five-point central first derivative, truncation error `O(h^4)`.
pub fn first_derivative<F: Fn(f64) -> f64>(f: F, x0: f64, h: f64) -> f64 {
    (f(x0 - 2.0 * h) - 8.0 * f(x0 - h) + 8.0 * f(x0 + h) - f(x0 + 2.0 * h)) / (12.0 * h)
}

/// Five-point central second derivative, truncation error `O(h^4)`.
pub fn second_derivative<F: Fn(f64) -> f64>(f: F, x0: f64, h: f64) -> f64 {
    let outer = f(x0 - 2.0 * h) + f(x0 + 2.0 * h);
    let inner = f(x0 - h) + f(x0 + h);
    (16.0 * inner - outer - 30.0 * f(x0)) / (12.0 * h * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use core::f64::consts::PI;

    fn tight() -> QuadratureConfig {
        QuadratureConfig::with_rel_tol(1e-12)
    }

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| x * x, 0.0, 1.0, &tight()).unwrap();
        assert_relative_eq!(r.value, 1.0 / 3.0, max_relative = 1e-15);
        assert_eq!(r.subdivisions, 1);
    }

    #[test]
    fn rate_integrand_at_unit_parameters() {
        // int_0^1.5 p^3 / eps(p) dp with eps = (p/2) sqrt(p^2 + 4), mpmath
        let f = |p: f64| p * p * p / (0.5 * p * (p * p + 4.0).sqrt());
        let r = integrate(f, 0.0, 1.5, &tight()).unwrap();
        assert_relative_eq!(r.value, 0.977_411_277_760_218_8, max_relative = 1e-13);
    }

    #[test]
    fn additivity() {
        let f = |x: f64| (3.0 * x).sin() * (-x).exp();
        let cfg = tight();
        let left = integrate(f, 0.0, 1.0, &cfg).unwrap();
        let right = integrate(f, 1.0, 2.0, &cfg).unwrap();
        let whole = integrate(f, 0.0, 2.0, &cfg).unwrap();
        let slack = left.error + right.error + whole.error;
        assert!((left.value + right.value - whole.value).abs() <= slack.max(1e-15));
    }

    #[test]
    fn semi_infinite_examples() {
        let cfg = tight();
        let r = integrate_semi_infinite(|x| (-x).exp(), 0.0, &cfg).unwrap();
        assert_relative_eq!(r.value, 1.0, max_relative = 1e-12);
        let r = integrate_semi_infinite(|x| 1.0 / (1.0 + x * x), 0.0, &cfg).unwrap();
        assert_relative_eq!(r.value, PI / 2.0, max_relative = 1e-12);
        let none = QuadratureConfig { tail_transform: TailTransform::None, ..cfg };
        assert!(matches!(integrate_semi_infinite(|x| (-x).exp(), 0.0, &none), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn budget_exhaustion_reports_best_estimate() {
        let cfg = QuadratureConfig { rel_tol: 1e-14, abs_tol: 0.0, max_subdivisions: 3, ..Default::default() };
        match integrate(|x: f64| x.sqrt(), 0.0, 1.0, &cfg) {
            Err(Error::NoConvergence { value, subdivisions, .. }) => {
                assert_eq!(subdivisions, 3);
                assert!((value - 2.0 / 3.0).abs() < 1e-3);
            }
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        let bad = [
            QuadratureConfig { rel_tol: 0.0, abs_tol: 0.0, ..Default::default() },
            QuadratureConfig { rel_tol: -1e-3, ..Default::default() },
            QuadratureConfig { max_subdivisions: 0, ..Default::default() },
        ];
        for cfg in bad {
            assert!(integrate(|x| x, 0.0, 1.0, &cfg).is_err());
        }
        assert!(integrate(|x| x, 1.0, 0.0, &QuadratureConfig::default()).is_err());
        assert_eq!(integrate(|x| x, 1.0, 1.0, &QuadratureConfig::default()).unwrap().value, 0.0);
    }

    #[test]
    fn non_finite_integrand_is_rejected() {
        assert!(matches!(
            integrate(|x| 1.0 / (x - 0.5) / 0.0, 0.0, 1.0, &QuadratureConfig::default()),
            Err(Error::Domain { name: "integrand", .. })
        ));
    }

    #[test]
    fn deterministic() {
        let f = |x: f64| (x * 7.0).cos() / (1.0 + x * x);
        let a = integrate(f, -3.0, 4.0, &tight()).unwrap();
        let b = integrate(f, -3.0, 4.0, &tight()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn error_estimates_are_honest() {
        type Case = (fn(f64) -> f64, f64, Option<f64>, f64);
        let cases: [Case; 10] = [
            (|x| x.powi(5), 0.0, Some(2.0), 64.0 / 6.0),
            (|x| x.exp(), 0.0, Some(1.0), core::f64::consts::E - 1.0),
            (|x| x.sqrt(), 0.0, Some(1.0), 2.0 / 3.0),
            (|x| 1.0 / (1.0 + 25.0 * x * x), -1.0, Some(1.0), 0.4 * 5f64.atan()),
            (|x| x.sin(), 0.0, Some(PI), 2.0),
            (|x| x.ln(), 0.0, Some(1.0), -1.0),
            (|x| (-x * x).exp(), 0.0, None, PI.sqrt() / 2.0),
            (|x| 1.0 / (1.0 + x * x), 0.0, None, PI / 2.0),
            (|x| x * (-x).exp(), 0.0, None, 1.0),
            (|x| 1.0 / ((1.0 + x) * x.sqrt()), 0.0, None, PI),
        ];
        for cfg in [QuadratureConfig::with_rel_tol(1e-6), QuadratureConfig::with_rel_tol(1e-10)] {
            for (i, (f, a, b, exact)) in cases.iter().enumerate() {
                let r = match b {
                    Some(b) => integrate(f, *a, *b, &cfg),
                    None => integrate_semi_infinite(f, *a, &cfg),
                }
                .unwrap();
                let true_error = (r.value - exact).abs();
                assert!(
                    true_error <= 10.0 * r.error,
                    "case {i}: true error {true_error:e} vs estimate {:e}",
                    r.error
                );
                assert!(r.error <= cfg.rel_tol * r.value.abs());
            }
        }
    }

    #[test]
    fn second_derivative_examples() {
        assert!((second_derivative(|x| x.powi(4), 1.0, 1e-2) - 12.0).abs() < 1e-8);
        assert_eq!(second_derivative(f64::sin, 0.0, 1e-2), 0.0);
        assert_eq!(second_derivative(|_| 3.5, 0.7, 1e-2), 0.0);
        assert!((first_derivative(|x| x.powi(3), 2.0, 1e-2) - 12.0).abs() < 1e-9);
    }
}
