//! Shared numerical engine: adaptive Gauss-Kronrod integration on finite and
//! semi-infinite intervals, nested 2D/3D box integration, trapezoid contour
//! integration on circles, and Richardson-extrapolated differentiation.
//!
//! Infinite tails are never guessed: semi-infinite integrals require a caller
//! supplied decay certificate, and every result carries an error estimate that
//! includes the certified truncation bound.

use crate::{Error, Result, C64};

/// Tolerances and budget for one adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { abs_tol: 1e-10, rel_tol: 1e-8, max_subdivisions: 10_000 }
    }
}

impl QuadConfig {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        QuadConfig { abs_tol, ..Default::default() }
    }
    pub fn tight() -> Self {
        QuadConfig { abs_tol: 1e-12, rel_tol: 1e-10, max_subdivisions: 20_000 }
    }
}

/// Integration result; `error` is the achieved estimate including any
/// certified tail contribution.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult<V> {
    pub value: V,
    pub error: f64,
    pub subdivisions: usize,
}

/// Tail certificate for a semi-infinite integrand.
#[derive(Debug, Clone, Copy)]
pub enum Decay {
    /// |f(u)| <= coeff * exp(-rate u)
    Exponential { coeff: f64, rate: f64 },
    /// |f(u)| <= coeff * (1+u)^{-power}, power > 1
    Algebraic { coeff: f64, power: f64 },
    /// f vanishes identically beyond `upper`
    Compact { upper: f64 },
}

impl Decay {
    /// Bound on the integral of |f| over [u, infinity).
    pub fn tail_beyond(&self, u: f64) -> Result<f64> {
        match *self {
            Decay::Exponential { coeff, rate } => {
                if rate <= 0.0 {
                    return Err(Error::DecayUncertified(format!("exponential rate {rate} <= 0")));
                }
                Ok(coeff * (-rate * u).exp() / rate)
            }
            Decay::Algebraic { coeff, power } => {
                if power <= 1.0 {
                    return Err(Error::DecayUncertified(format!("algebraic power {power} <= 1")));
                }
                Ok(coeff * (1.0 + u).powf(1.0 - power) / (power - 1.0))
            }
            Decay::Compact { upper } => Ok(if u >= upper { 0.0 } else { f64::INFINITY }),
        }
    }

    /// Smallest cutoff U >= lo with tail bound below `tol`.
    pub fn cutoff_for(&self, lo: f64, tol: f64) -> Result<f64> {
        match *self {
            Decay::Compact { upper } => Ok(upper.max(lo)),
            Decay::Exponential { coeff, rate } => {
                if rate <= 0.0 {
                    return Err(Error::DecayUncertified(format!("exponential rate {rate} <= 0")));
                }
                let u = (coeff / (rate * tol)).max(1.0).ln() / rate;
                Ok(u.max(lo))
            }
            Decay::Algebraic { coeff, power } => {
                if power <= 1.0 {
                    return Err(Error::DecayUncertified(format!("algebraic power {power} <= 1")));
                }
                let u = (coeff / ((power - 1.0) * tol)).powf(1.0 / (power - 1.0)) - 1.0;
                Ok(u.max(lo))
            }
        }
    }
}

/// Integration domain for [`integrate_1d`].
#[derive(Debug, Clone, Copy)]
pub enum Interval {
    Finite { a: f64, b: f64 },
    /// Integrand behaves like (x-a)^{-1/2} at the left endpoint; removed by
    /// the substitution x = a + w^2.
    SqrtSingularLeft { a: f64, b: f64 },
    /// [a, infinity) with a certified decay of |f|.
    SemiInfinite { a: f64, decay: Decay },
}

/// Value types the panel kernel can accumulate (real and complex integrands).
pub trait QuadValue:
    Copy
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<f64, Output = Self>
{
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

impl QuadValue for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn norm(&self) -> f64 {
        num_complex::Complex::norm(*self)
    }
}

// 15-point Gauss-Kronrod abscissae and weights (QUADPACK).
#[rustfmt::skip]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
#[rustfmt::skip]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
#[rustfmt::skip]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One 15-point Gauss-Kronrod panel on [a, b].
fn gk15<V: QuadValue>(f: &mut (impl FnMut(f64) -> V + ?Sized), a: f64, b: f64) -> (V, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.norm();
    let mut fv = [V::zero(); 14];

    for j in 0..7 {
        let abscissa = half * XGK[j];
        let f1 = f(center - abscissa);
        let f2 = f(center + abscissa);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        let fsum = f1 + f2;
        if j % 2 != 0 {
            res_gauss = res_gauss + fsum * WG[j / 2];
        }
        res_kronrod = res_kronrod + fsum * WGK[j];
        res_abs += WGK[j] * (f1.norm() + f2.norm());
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).norm();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[2 * j] - mean).norm() + (fv[2 * j + 1] - mean).norm());
    }

    let err = ((res_kronrod - res_gauss) * half).norm();
    (res_kronrod * half, rescale_error(err, res_abs * half.abs(), res_asc * half.abs()))
}

struct Adapt<'f, V> {
    f: &'f mut dyn FnMut(f64) -> V,
    used: usize,
    budget: usize,
}

impl<V: QuadValue> Adapt<'_, V> {
    fn run(&mut self, a: f64, b: f64, tol: f64, depth: u32) -> (V, f64) {
        let (v, e) = gk15(self.f, a, b);
        if e <= tol || depth >= 52 || self.used >= self.budget {
            return (v, e);
        }
        self.used += 1;
        let mid = 0.5 * (a + b);
        let (v1, e1) = self.run(a, mid, 0.5 * tol, depth + 1);
        let (v2, e2) = self.run(mid, b, 0.5 * tol, depth + 1);
        (v1 + v2, e1 + e2)
    }
}

fn adaptive_finite<V: QuadValue>(
    f: &mut dyn FnMut(f64) -> V,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult<V>> {
    if a == b {
        return Ok(QuadResult { value: V::zero(), error: 0.0, subdivisions: 0 });
    }
    let (first, _) = gk15(f, a, b);
    let tol = cfg.abs_tol.max(cfg.rel_tol * first.norm());
    let mut ad = Adapt { f, used: 0, budget: cfg.max_subdivisions };
    let (value, error) = ad.run(a, b, tol, 0);
    let subdivisions = ad.used;
    if subdivisions >= cfg.max_subdivisions && error > cfg.abs_tol.max(cfg.rel_tol * value.norm())
    {
        return Err(Error::MaxSubdivisions(cfg.max_subdivisions));
    }
    Ok(QuadResult { value, error, subdivisions })
}

/// Adaptive integration of a real or complex integrand over `interval`.
pub fn integrate_1d<V: QuadValue>(
    mut f: impl FnMut(f64) -> V,
    interval: Interval,
    cfg: &QuadConfig,
) -> Result<QuadResult<V>> {
    match interval {
        Interval::Finite { a, b } => adaptive_finite(&mut f, a, b, cfg),
        Interval::SqrtSingularLeft { a, b } => {
            if b < a {
                return Err(Error::DomainError(format!("reversed interval [{a}, {b}]")));
            }
            // x = a + w^2 turns (x-a)^{-1/2} dx into 2 dw.
            let mut g = |w: f64| f(a + w * w) * (2.0 * w);
            adaptive_finite(&mut g, 0.0, (b - a).sqrt(), cfg)
        }
        Interval::SemiInfinite { a, decay } => {
            // Map u = a + t/(1-t); truncate at the certified cutoff.
            let tail_tol = 0.25 * cfg.abs_tol;
            let upper = decay.cutoff_for(a, tail_tol)?;
            let tail = decay.tail_beyond(upper)?;
            let t_max = if upper <= a { 0.0 } else { (upper - a) / (1.0 + upper - a) };
            let mut g = |t: f64| {
                let om = 1.0 - t;
                f(a + t / om) * (1.0 / (om * om))
            };
            let mut res = adaptive_finite(&mut g, 0.0, t_max, cfg)?;
            res.error += tail;
            Ok(res)
        }
    }
}

/// Piecewise variant: integrates over consecutive finite panels
/// [pts[0],pts[1]], [pts[1],pts[2]], ... summing values and error estimates.
pub fn integrate_segments<V: QuadValue>(
    mut f: impl FnMut(f64) -> V,
    pts: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult<V>> {
    let mut value = V::zero();
    let mut error = 0.0;
    let mut subdivisions = 0;
    for w in pts.windows(2) {
        let r = adaptive_finite(&mut f, w[0], w[1], cfg)?;
        value = value + r.value;
        error += r.error;
        subdivisions += r.subdivisions;
    }
    Ok(QuadResult { value, error, subdivisions })
}

/// Nested adaptive integration over an axis-aligned 2D box.
pub fn integrate_2d(
    f: impl Fn(f64, f64) -> f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
    cfg: &QuadConfig,
) -> Result<QuadResult<f64>> {
    let width = (x_range.1 - x_range.0).abs().max(1e-300);
    let inner_cfg = QuadConfig {
        abs_tol: cfg.abs_tol / (4.0 * width),
        rel_tol: cfg.rel_tol,
        max_subdivisions: cfg.max_subdivisions,
    };
    let inner_err = std::cell::Cell::new(0.0f64);
    let outer = integrate_1d(
        |x| {
            let r = integrate_1d(
                |y| f(x, y),
                Interval::Finite { a: y_range.0, b: y_range.1 },
                &inner_cfg,
            )
            .map(|r| {
                inner_err.set(inner_err.get().max(r.error));
                r.value
            })
            .unwrap_or(f64::NAN);
            r
        },
        Interval::Finite { a: x_range.0, b: x_range.1 },
        cfg,
    )?;
    if outer.value.is_nan() {
        return Err(Error::QuadratureFailure {
            value: f64::NAN,
            requested: cfg.abs_tol,
            achieved: f64::INFINITY,
        });
    }
    Ok(QuadResult {
        value: outer.value,
        error: outer.error + inner_err.get() * width,
        subdivisions: outer.subdivisions,
    })
}

/// Nested adaptive integration over an axis-aligned 3D box.
pub fn integrate_3d(
    f: impl Fn(f64, f64, f64) -> f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
    z_range: (f64, f64),
    cfg: &QuadConfig,
) -> Result<QuadResult<f64>> {
    let width = (x_range.1 - x_range.0).abs().max(1e-300);
    let inner_cfg = QuadConfig {
        abs_tol: cfg.abs_tol / (4.0 * width),
        rel_tol: cfg.rel_tol,
        max_subdivisions: cfg.max_subdivisions,
    };
    let inner_err = std::cell::Cell::new(0.0f64);
    let outer = integrate_1d(
        |x| {
            integrate_2d(|y, z| f(x, y, z), y_range, z_range, &inner_cfg)
                .map(|r| {
                    inner_err.set(inner_err.get().max(r.error));
                    r.value
                })
                .unwrap_or(f64::NAN)
        },
        Interval::Finite { a: x_range.0, b: x_range.1 },
        cfg,
    )?;
    if outer.value.is_nan() {
        return Err(Error::QuadratureFailure {
            value: f64::NAN,
            requested: cfg.abs_tol,
            achieved: f64::INFINITY,
        });
    }
    Ok(QuadResult {
        value: outer.value,
        error: outer.error + inner_err.get() * width,
        subdivisions: outer.subdivisions,
    })
}

/// Fixed composite Gauss-Legendre rule (10 nodes per panel) on [a, b].
/// Deterministic node set; used where the integrand is smooth and each
/// evaluation is expensive (e.g. transform inversions).
pub fn gauss_composite<V: QuadValue>(
    mut f: impl FnMut(f64) -> V,
    a: f64,
    b: f64,
    panels: usize,
) -> V {
    // 10-point Gauss-Legendre nodes/weights on [-1, 1].
    #[rustfmt::skip]
    const X: [f64; 5] = [
        0.148_874_338_981_631_210_884_826_001_129_720,
        0.433_395_394_129_247_190_799_265_943_165_784,
        0.679_409_568_299_024_406_234_327_365_114_874,
        0.865_063_366_688_984_510_732_096_688_423_493,
        0.973_906_528_517_171_720_077_964_012_084_452,
    ];
    #[rustfmt::skip]
    const W: [f64; 5] = [
        0.295_524_224_714_752_870_173_892_994_651_338,
        0.269_266_719_309_996_355_091_226_921_569_469,
        0.219_086_362_515_982_043_995_534_934_228_163,
        0.149_451_349_150_580_593_145_776_339_657_697,
        0.066_671_344_308_688_137_593_568_809_893_332,
    ];
    let h = (b - a) / panels as f64;
    let mut total = V::zero();
    for p in 0..panels {
        let c = a + (p as f64 + 0.5) * h;
        let half = 0.5 * h;
        for i in 0..5 {
            let dx = half * X[i];
            total = total + (f(c - dx) + f(c + dx)) * (W[i] * half);
        }
    }
    total
}

/// Circle contour specification for [`contour_integral`].
#[derive(Debug, Clone, Copy)]
pub struct ContourSpec {
    pub center: C64,
    pub radius: f64,
    pub nodes: usize,
}

impl ContourSpec {
    pub fn new(center: C64, radius: f64, nodes: usize) -> Result<Self> {
        if radius <= 0.0 {
            return Err(Error::DomainError(format!("contour radius {radius} <= 0")));
        }
        if nodes < 64 || !nodes.is_power_of_two() {
            return Err(Error::DomainError(format!("contour nodes {nodes} not a power of two >= 64")));
        }
        Ok(ContourSpec { center, radius, nodes })
    }
}

/// (1/2*pi*i) times the contour integral of `f` over the circle, by the
/// trapezoid rule (spectrally accurate for integrands analytic on an annulus).
pub fn contour_integral(f: impl Fn(C64) -> C64, spec: &ContourSpec) -> C64 {
    let n = spec.nodes;
    let mut total = C64::new(0.0, 0.0);
    for j in 0..n {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
        let e = C64::new(0.0, theta).exp();
        total += f(spec.center + e * spec.radius) * e;
    }
    total * (spec.radius / n as f64)
}

/// Derivative of `f` at `x` of the given order (1 or 2) by central differences
/// with two-level Richardson extrapolation. Returns (value, error estimate).
pub fn differentiate(
    f: impl Fn(f64) -> f64,
    x: f64,
    order: u8,
    h0: f64,
) -> Result<(f64, f64)> {
    if h0 < 1e-6 {
        return Err(Error::StepUnderflow(h0));
    }
    let d = |h: f64| -> f64 {
        match order {
            1 => (f(x + h) - f(x - h)) / (2.0 * h),
            2 => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
            _ => f64::NAN,
        }
    };
    if order == 0 || order > 2 {
        return Err(Error::DomainError(format!("differentiate order {order} not in 1..=2")));
    }
    let d1 = d(h0);
    let d2 = d(0.5 * h0);
    let d4 = d(0.25 * h0);
    let r1 = (4.0 * d2 - d1) / 3.0;
    let r2 = (4.0 * d4 - d2) / 3.0;
    let value = (16.0 * r2 - r1) / 15.0;
    Ok((value, (r2 - r1).abs().max(f64::EPSILON * value.abs())))
}

/// Like [`derivs_12`] but with one Richardson level on top of the
/// fourth-order stencils (sixth-order truncation).
pub fn derivs_12_richardson(
    f: &mut impl FnMut(f64) -> C64,
    x: f64,
    h: f64,
    lower_bound: Option<f64>,
) -> (C64, C64) {
    let (a1, a2) = derivs_12(f, x, h, lower_bound);
    let (b1, b2) = derivs_12(f, x, 0.5 * h, lower_bound);
    ((b1 * 16.0 - a1) / 15.0, (b2 * 16.0 - a2) / 15.0)
}

/// First and second derivatives of a complex-valued function of a real
/// variable from one five-point stencil (fourth-order central differences).
/// Falls back to a one-sided stencil when `x < 2h` and `lower_bound` is 0.
pub fn derivs_12(
    f: &mut impl FnMut(f64) -> C64,
    x: f64,
    h: f64,
    lower_bound: Option<f64>,
) -> (C64, C64) {
    let one_sided = lower_bound.is_some_and(|lo| x - 2.0 * h < lo);
    if one_sided {
        // six-point forward stencils (fourth-order truncation for both orders)
        let f0 = f(x);
        let f1 = f(x + h);
        let f2 = f(x + 2.0 * h);
        let f3 = f(x + 3.0 * h);
        let f4 = f(x + 4.0 * h);
        let f5 = f(x + 5.0 * h);
        let d1 = (f0 * (-137.0 / 60.0) + f1 * 5.0 - f2 * 5.0 + f3 * (10.0 / 3.0)
            - f4 * 1.25
            + f5 * 0.2)
            / h;
        let d2 = (f0 * 45.0 - f1 * 154.0 + f2 * 214.0 - f3 * 156.0 + f4 * 61.0 - f5 * 10.0)
            / (12.0 * h * h);
        (d1, d2)
    } else {
        let fm2 = f(x - 2.0 * h);
        let fm1 = f(x - h);
        let f0 = f(x);
        let fp1 = f(x + h);
        let fp2 = f(x + 2.0 * h);
        let d1 = ((fp1 - fm1) * 8.0 - (fp2 - fm2)) / (12.0 * h);
        let d2 = ((fp1 + fm1) * 16.0 - (fp2 + fm2) - f0 * 30.0) / (12.0 * h * h);
        (d1, d2)
    }
}
