//! The weight-k transform chains Phi <-> P_k (or Q_0) <-> g_k <-> h_k, their
//! inversions, the rational closed-form test family, the Lambda_k eigenvalue
//! chain, and the horospherical integral identity.
//!
//! Forward transforms (with u = v + w^2 substitutions that remove the
//! square-root endpoint behavior):
//!   k = 0:   P(v)   = 4 int_0^inf w arctan(w/sqrt(v+1)) Phi(v+w^2) dw
//!   k = 1:   P_1(v) = 4 sqrt(v+1) int_0^inf w^2 Phi(v+w^2)/(v+1+w^2) dw
//!   k = 1/2: Q_0(v) = 4 int_0^inf w^2 Phi(v+w^2)/sqrt(v+1+w^2) dw
//! then g_k(eta) = P_k(sinh^2(eta/2)) and h_k(r) = 2 pi int g_k e^{i r eta}.
//!
//! Inversions recover Phi from P by an Abel-type integral of the derivative
//! of a weight-dependent auxiliary function; the Stieltjes differential is
//! realized by numerical differentiation (Richardson stencils) and the
//! (v - u)^{-1/2} endpoint is removed by v = u + w^2.

use crate::geometry::{point_pair, rho_pair, unipotent, SiegelPoint};
use crate::operators::Weight;
use crate::quadrature::{
    derivs_12, gauss_composite, integrate_1d, integrate_segments, Interval, QuadConfig,
};
use crate::{Error, Result, C64};
use std::sync::Arc;

/// Shared real-valued callable.
pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Admissibility certificate for a radial kernel Phi.
#[derive(Debug, Clone, Copy)]
pub enum KernelDecay {
    /// Phi vanishes identically for u >= u_max.
    Compact { u_max: f64 },
    /// |Phi^{(j)}(u)| <= coeff (1+u)^{-3-eps} for j <= 2.
    Algebraic { coeff: f64, eps: f64 },
}

impl KernelDecay {
    /// Bound on int_v^inf |Phi(u)| du.
    pub fn phi_tail(&self, v: f64) -> f64 {
        match *self {
            KernelDecay::Compact { u_max } => {
                if v >= u_max {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            KernelDecay::Algebraic { coeff, eps } => {
                coeff * (1.0 + v.max(0.0)).powf(-2.0 - eps) / (2.0 + eps)
            }
        }
    }

    /// Upper limit for the w-integrals of the forward transforms at height v:
    /// beyond the cutoff the integrand contribution is below `tol`.
    fn w_cutoff(&self, v: f64, tol: f64) -> f64 {
        match *self {
            KernelDecay::Compact { u_max } => (u_max - v).max(0.0).sqrt(),
            KernelDecay::Algebraic { coeff, eps } => {
                // tail of int w Phi(v+w^2) dw ~ coeff (1+v+W^2)^{-2-eps}/(2(2+eps))
                let target = (coeff / ((2.0 + eps) * tol)).powf(1.0 / (2.0 + eps));
                (target - 1.0 - v).max(0.0).sqrt().max(1.0)
            }
        }
    }
}

/// Radial kernel Phi with its admissibility certificate.
#[derive(Clone)]
pub struct RadialKernel {
    pub phi: RealFn,
    pub decay: KernelDecay,
}

impl RadialKernel {
    pub fn new(phi: RealFn, decay: KernelDecay) -> Self {
        RadialKernel { phi, decay }
    }

    /// Phi(u) = e^{-u}; certificate e^{-u} <= e^{-5} 6^6 (1+u)^{-6}.
    pub fn exponential() -> Self {
        RadialKernel {
            phi: Arc::new(|u: f64| (-u).exp()),
            decay: KernelDecay::Algebraic { coeff: 314.3, eps: 3.0 },
        }
    }

    /// Phi(u) = e^{-u^2}; generous algebraic certificate for Phi and Phi''.
    pub fn gaussian() -> Self {
        RadialKernel {
            phi: Arc::new(|u: f64| (-u * u).exp()),
            decay: KernelDecay::Algebraic { coeff: 40.0, eps: 3.0 },
        }
    }

    /// C^2 compactly supported bump (1 - (u/u_max)^2)^3 on [0, u_max).
    pub fn bump(u_max: f64) -> Self {
        RadialKernel {
            phi: Arc::new(move |u: f64| {
                if u < 0.0 || u >= u_max {
                    0.0
                } else {
                    let t = u / u_max;
                    (1.0 - t * t).powi(3)
                }
            }),
            decay: KernelDecay::Compact { u_max },
        }
    }
}

/// Decay description of the forward transform itself, used to size the
/// inversion's w-integrals.
#[derive(Debug, Clone, Copy)]
pub enum PDecay {
    /// P inherits |P(v)| <= pi * phi_tail(v) from the kernel certificate.
    FromKernel(KernelDecay),
    /// |P(v)| <= coeff (1 + 4v)^{-rate}; the chains built from the
    /// exponential-in-eta g family land here (rate = Re alpha1 < 3).
    AlgebraicP { coeff: f64, rate: f64 },
}

impl PDecay {
    /// Upper limit W for int_0^W S'(u + w^2) dw with the dropped tail below
    /// ~1e-8 (S' assembled from first and second derivatives of P).
    fn inversion_w_cutoff(&self, u: f64) -> f64 {
        match *self {
            PDecay::FromKernel(KernelDecay::Compact { u_max }) => (u_max - u).max(0.0).sqrt(),
            PDecay::FromKernel(KernelDecay::Algebraic { coeff, eps }) => {
                // S'(v) of order (1+v)^{-5/2-eps} with constant ~ pi coeff
                let c = std::f64::consts::PI * coeff;
                let p = 4.0 + 2.0 * eps;
                (c / (1e-8 * p)).powf(1.0 / p).max(4.0)
            }
            PDecay::AlgebraicP { coeff, rate } => {
                // S'(v) of order (1+v)^{-rate-3/2} with a generous constant
                let c = 10.0 * coeff;
                let p = 2.0 * rate + 2.0;
                (c / (1e-8 * p)).powf(1.0 / p).max(4.0)
            }
        }
    }
}

/// A forward-transformed kernel: the evaluator for P_k (integer k) or Q_0
/// (k = 1/2) plus the decay data it inherits.
#[derive(Clone)]
pub struct ForwardTransform {
    pub weight: Weight,
    pub eval: RealFn,
    pub kernel_decay: KernelDecay,
    pub p_decay: PDecay,
}

impl ForwardTransform {
    /// Bound on |P(v)|: each named transform satisfies |P_k(v)| <= pi * tail(v).
    pub fn p_tail(&self, v: f64) -> f64 {
        std::f64::consts::PI * self.kernel_decay.phi_tail(v)
    }
}

fn forward_quad_cfg() -> QuadConfig {
    QuadConfig { abs_tol: 1e-12, rel_tol: 1e-11, max_subdivisions: 4_000 }
}

/// Forward transform for the weights with named formulas (k = 0, 1/2, 1).
/// The evaluator performs adaptive quadrature at every call; P(v) is exactly 0
/// when a compactly supported Phi lies entirely below v.
pub fn forward_transform(k: Weight, kernel: &RadialKernel) -> Result<ForwardTransform> {
    if !k.explicit_inversion() {
        return Err(Error::DomainError(format!(
            "no named forward transform for weight {}",
            k.label()
        )));
    }
    let phi = kernel.phi.clone();
    let decay = kernel.decay;
    let two_k = k.two_k();
    let eval: RealFn = Arc::new(move |v: f64| {
        let upper = decay.w_cutoff(v, 1e-14);
        if upper <= 0.0 {
            return 0.0;
        }
        let sq = (v + 1.0).sqrt();
        let integrand: Box<dyn Fn(f64) -> f64> = match two_k {
            0 => Box::new(|w: f64| 4.0 * w * (w / sq).atan() * phi(v + w * w)),
            1 => Box::new(|w: f64| 4.0 * w * w * phi(v + w * w) / (v + 1.0 + w * w).sqrt()),
            _ => Box::new(|w: f64| 4.0 * sq * w * w * phi(v + w * w) / (v + 1.0 + w * w)),
        };
        integrate_1d(|w| integrand(w), Interval::Finite { a: 0.0, b: upper }, &forward_quad_cfg())
            .map(|r| r.value)
            .unwrap_or(f64::NAN)
    });
    Ok(ForwardTransform {
        weight: k,
        eval,
        kernel_decay: kernel.decay,
        p_decay: PDecay::FromKernel(kernel.decay),
    })
}

/// General integer-weight forward transform P_k (k <= 2) as the double
/// integral with binomial weights; the inner (u - v)^{m - 1/2} singularity is
/// removed by v = u - y^2 and the outer endpoint by u = w0 + x^2.
pub fn forward_general_integer(k: Weight, kernel: &RadialKernel) -> Result<ForwardTransform> {
    let two_k = k.two_k();
    if two_k % 2 != 0 || two_k > 4 {
        return Err(Error::DomainError(format!(
            "general double-integral transform implemented for integer k <= 2, got {}",
            k.label()
        )));
    }
    let kk = (two_k / 2) as u32;
    // (-1)^m C(2k, 2m) for m = 0..=k
    let binom = |n: u32, r: u32| -> f64 {
        let mut v = 1.0;
        for i in 0..r {
            v = v * (n - i) as f64 / (i + 1) as f64;
        }
        v
    };
    let coeffs: Vec<f64> =
        (0..=kk).map(|m| if m % 2 == 0 { 1.0 } else { -1.0 } * binom(2 * kk, 2 * m)).collect();
    let phi = kernel.phi.clone();
    let decay = kernel.decay;
    let inner_cfg = QuadConfig { abs_tol: 1e-13, rel_tol: 1e-11, max_subdivisions: 2_000 };
    let eval: RealFn = Arc::new(move |w0: f64| {
        let x_upper = decay.w_cutoff(w0, 1e-14);
        if x_upper <= 0.0 {
            return 0.0;
        }
        let coeffs = coeffs.clone();
        let phi = phi.clone();
        let outer = |x: f64| -> f64 {
            let u = w0 + x * x;
            let y_max = (u - w0).sqrt();
            let inner = integrate_1d(
                |y: f64| {
                    let vv = u - y * y;
                    let mut s = 0.0;
                    for (m, c) in coeffs.iter().enumerate() {
                        s += c
                            * y.powi(2 * m as i32)
                            * (vv + 1.0).powf(kk as f64 - m as f64 - 0.5);
                    }
                    2.0 * s
                },
                Interval::Finite { a: 0.0, b: y_max },
                &inner_cfg,
            )
            .map(|r| r.value)
            .unwrap_or(f64::NAN);
            phi(u) * (u + 1.0).powi(-(kk as i32)) * inner * 2.0 * x
        };
        integrate_1d(outer, Interval::Finite { a: 0.0, b: x_upper }, &forward_quad_cfg())
            .map(|r| r.value)
            .unwrap_or(f64::NAN)
    });
    Ok(ForwardTransform {
        weight: k,
        eval,
        kernel_decay: kernel.decay,
        p_decay: PDecay::FromKernel(kernel.decay),
    })
}

/// g(eta) = P(v) with v = (e^eta + e^{-eta} - 2)/4 = sinh^2(eta/2);
/// even in eta by construction.
pub fn change_variable_to_g(p: RealFn) -> RealFn {
    Arc::new(move |eta: f64| {
        let s = (0.5 * eta).sinh();
        p(s * s)
    })
}

/// Map eta = ln N(gamma) to the transform argument v = ((sqrt N - 1/sqrt N)/2)^2.
pub fn v_of_eta(eta: f64) -> f64 {
    let s = (0.5 * eta).sinh();
    s * s
}

/// Decay certificate for g(eta).
#[derive(Debug, Clone, Copy)]
pub enum GDecay {
    /// g vanishes for |eta| >= eta_max.
    CompactEta { eta_max: f64 },
    /// |g(eta)| <= coeff e^{-rate |eta|}, rate > 1.
    Exponential { coeff: f64, rate: f64 },
}

impl GDecay {
    pub fn eta_cutoff(&self, tol: f64) -> Result<f64> {
        match *self {
            GDecay::CompactEta { eta_max } => Ok(eta_max),
            GDecay::Exponential { coeff, rate } => {
                if rate <= 1.0 {
                    return Err(Error::DecayUncertified(format!(
                        "g decay rate {rate} does not exceed 1"
                    )));
                }
                Ok((coeff / (rate * tol)).max(1.0).ln() / rate)
            }
        }
    }

    /// g-certificate inherited from a kernel certificate through the forward
    /// transform bound |P_k(v)| <= pi tail(v) and v = sinh^2(eta/2).
    pub fn from_kernel(decay: &KernelDecay) -> GDecay {
        match *decay {
            KernelDecay::Compact { u_max } => {
                GDecay::CompactEta { eta_max: 2.0 * u_max.sqrt().asinh() }
            }
            KernelDecay::Algebraic { coeff, eps } => {
                // sinh^2(eta/2) >= e^{|eta|}/4 - 1/2, so
                // pi C (1 + v)^{-2-eps}/(2+eps) <= pi C (4 e^{-|eta|})^{2+eps}/(2+eps)·2^..
                let rate = 2.0 + eps;
                let c = std::f64::consts::PI * coeff * 4.0_f64.powf(rate) / rate;
                GDecay::Exponential { coeff: c, rate }
            }
        }
    }
}

/// h(r) = 2 pi int g(eta) e^{i r eta} d eta, reduced to a cosine integral for
/// even g. The closure reports NaN if its internal quadrature fails.
pub fn fourier_g_to_h(g: RealFn, decay: GDecay) -> Result<RealFn> {
    let eta_max = decay.eta_cutoff(1e-13)?;
    Ok(Arc::new(move |r: f64| {
        let pts: Vec<f64> = split_points(eta_max, 1.0 + r.abs());
        integrate_segments(
            |eta: f64| g(eta) * (r * eta).cos(),
            &pts,
            &QuadConfig { abs_tol: 1e-12, rel_tol: 1e-10, max_subdivisions: 8_000 },
        )
        .map(|q| 4.0 * std::f64::consts::PI * q.value)
        .unwrap_or(f64::NAN)
    }))
}

/// Algebraic decay certificate for h: |h(r)| <= coeff (1+|r|)^{-power}.
#[derive(Debug, Clone, Copy)]
pub struct HDecay {
    pub coeff: f64,
    pub power: f64,
}

/// g(eta) = (1/4 pi^2) int h(r) e^{-i r eta} dr for even h.
pub fn fourier_h_to_g(h: RealFn, decay: HDecay) -> Result<RealFn> {
    if decay.power <= 1.0 {
        return Err(Error::DecayUncertified(format!(
            "h decay power {} does not exceed 1",
            decay.power
        )));
    }
    let tail_tol = 1e-12;
    let upper = (decay.coeff / ((decay.power - 1.0) * tail_tol)).powf(1.0 / (decay.power - 1.0));
    Ok(Arc::new(move |eta: f64| {
        let pts = split_points(upper, 1.0 + eta.abs());
        integrate_segments(
            |r: f64| h(r) * (r * eta).cos(),
            &pts,
            &QuadConfig { abs_tol: 1e-11, rel_tol: 1e-9, max_subdivisions: 8_000 },
        )
        .map(|q| q.value / (2.0 * std::f64::consts::PI * std::f64::consts::PI))
        .unwrap_or(f64::NAN)
    }))
}

/// Breakpoints for oscillatory cosine integrals: panel length shrinks with
/// the oscillation frequency.
fn split_points(upper: f64, freq: f64) -> Vec<f64> {
    let step = (2.0 / freq).min(upper.max(1e-6));
    let n = (upper / step).ceil() as usize;
    let mut pts: Vec<f64> = (0..=n).map(|i| upper * i as f64 / n as f64).collect();
    if pts.len() < 2 {
        pts = vec![0.0, upper];
    }
    pts
}

/// Inverse transform: recovers Phi(u) from the forward transform of weight
/// k in {0, 1/2, 1}. The Stieltjes integrals are realized as
///   Phi(u) = c_k(u) (2/pi) int_0^inf S_k'(u + w^2) dw
/// with S_0 = sqrt(v+1) P', S_{1/2} = Q_0', S_1 = (P_1/sqrt(v+1))', and
/// c_k(u) = 1, sqrt(u+1), (u+1) respectively; derivatives of the (black box)
/// forward evaluator come from five-point stencils.
pub fn invert_to_phi(k: Weight, forward: &ForwardTransform) -> Result<RealFn> {
    if !k.explicit_inversion() {
        return Err(Error::DomainError(format!("no inversion formula for weight {}", k.label())));
    }
    if forward.weight != k {
        return Err(Error::DomainError(format!(
            "forward transform has weight {}, inversion asked for {}",
            forward.weight.label(),
            k.label()
        )));
    }
    let p = forward.eval.clone();
    let decay = forward.p_decay;
    let two_k = k.two_k();
    let h_step = 0.01;
    Ok(Arc::new(move |u: f64| {
        // cutoff where the dropped tail of the S' integral is negligible
        let w_max = match decay {
            PDecay::FromKernel(KernelDecay::Compact { u_max }) => {
                if u >= u_max {
                    return 0.0;
                }
                (u_max - u).sqrt() + 2.5 * h_step
            }
            other => other.inversion_w_cutoff(u),
        };
        let p = &p;
        // S_k'(v) assembled from P, P', P'' at v
        let mut sprime = |v: f64| -> f64 {
            let mut pc = |x: f64| C64::new(p(x), 0.0);
            let (d1, d2) = derivs_12(&mut pc, v, h_step, Some(0.0));
            let (p1, p2) = (d1.re, d2.re);
            let sq = (v + 1.0).sqrt();
            match two_k {
                0 => 0.5 * p1 / sq + sq * p2,
                1 => p2,
                _ => {
                    let p0 = p(v);
                    p2 / sq - p1 / sq.powi(3) + 0.75 * p0 / sq.powi(5)
                }
            }
        };
        let panels = ((w_max / 0.2).ceil() as usize).clamp(8, 220);
        let integral = gauss_composite(|w| sprime(u + w * w), 0.0, w_max, panels);
        let prefactor = match two_k {
            0 => 1.0,
            1 => (u + 1.0).sqrt(),
            _ => u + 1.0,
        };
        prefactor * 2.0 / std::f64::consts::PI * integral
    }))
}

/// Closed-form rational test family:
///   h(r) = 1/((r^2+a1^2)(r^2+a2^2)) - 1/((r^2+b1^2)(r^2+b2^2))
/// with the matching two-block exponential g; requires
/// 1 < Re a1 < Re a2 < Re b1 < Re b2.
#[derive(Debug, Clone, Copy)]
pub struct RationalTestFunction {
    pub alpha1: C64,
    pub alpha2: C64,
    pub beta1: C64,
    pub beta2: C64,
}

impl RationalTestFunction {
    pub fn new(alpha1: C64, alpha2: C64, beta1: C64, beta2: C64) -> Result<Self> {
        let ok = 1.0 < alpha1.re && alpha1.re < alpha2.re && alpha2.re < beta1.re && beta1.re < beta2.re;
        if !ok {
            return Err(Error::ParameterOrdering);
        }
        Ok(RationalTestFunction { alpha1, alpha2, beta1, beta2 })
    }

    pub fn real(a1: f64, a2: f64, b1: f64, b2: f64) -> Result<Self> {
        Self::new(C64::new(a1, 0.0), C64::new(a2, 0.0), C64::new(b1, 0.0), C64::new(b2, 0.0))
    }

    pub fn is_real(&self) -> bool {
        self.alpha1.im == 0.0 && self.alpha2.im == 0.0 && self.beta1.im == 0.0 && self.beta2.im == 0.0
    }

    pub fn h_c64(&self, r: C64) -> C64 {
        let r2 = r * r;
        ((r2 + self.alpha1 * self.alpha1) * (r2 + self.alpha2 * self.alpha2)).finv()
            - ((r2 + self.beta1 * self.beta1) * (r2 + self.beta2 * self.beta2)).finv()
    }

    pub fn g_c64(&self, eta: f64) -> C64 {
        let e = eta.abs();
        let term = |x1: C64, x2: C64| -> C64 {
            ((-x2 * e).exp() / x2 - (-x1 * e).exp() / x1) / (x1 * x1 - x2 * x2)
        };
        (term(self.alpha1, self.alpha2) - term(self.beta1, self.beta2))
            / (4.0 * std::f64::consts::PI)
    }

    /// Decay margin delta = Re alpha1 - 1 - 1e-6.
    pub fn delta(&self) -> f64 {
        self.alpha1.re - 1.0 - 1e-6
    }

    /// Certified |g(eta)| <= coeff e^{-Re(alpha1) |eta|}.
    pub fn g_decay(&self) -> GDecay {
        let c = |x1: C64, x2: C64| {
            (1.0 / x2.norm() + 1.0 / x1.norm()) / (x1 * x1 - x2 * x2).norm()
        };
        let coeff = (c(self.alpha1, self.alpha2) + c(self.beta1, self.beta2))
            / (4.0 * std::f64::consts::PI);
        GDecay::Exponential { coeff, rate: self.alpha1.re }
    }

    /// Certified |h(r)| <= coeff (1+|r|)^{-6} on the real axis.
    pub fn h_decay(&self) -> HDecay {
        // |h| <= (A + B r^2) / r^8-ish; a coarse grid max over r in [0, 50]
        // times a safety factor certifies the constant.
        let mut coeff: f64 = 0.0;
        for i in 0..=2000 {
            let r = 50.0 * i as f64 / 2000.0;
            let v = self.h_c64(C64::new(r, 0.0)).norm() * (1.0 + r).powi(6);
            coeff = coeff.max(v);
        }
        HDecay { coeff: 1.2 * coeff, power: 6.0 }
    }

    /// Strip bound M = sup_x |h(x + i(1+delta))| (1+|x|)^{4+delta}, estimated
    /// on a grid with a safety margin; feeds the |g| <= (M/2pi^2) e^{-(1+d)|eta|}
    /// decay inequality.
    pub fn strip_bound_m(&self) -> f64 {
        let d = self.delta();
        let mut m: f64 = 0.0;
        for i in 0..=4000 {
            let x = 80.0 * i as f64 / 4000.0;
            let v = self.h_c64(C64::new(x, 1.0 + d)).norm() * (1.0 + x).powf(4.0 + d);
            m = m.max(v);
        }
        1.05 * m
    }
}

/// Provenance of a chain member.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    Numeric,
}

/// A complete weight-k transform chain (Phi, P_k or Q_0, g_k, h_k).
#[derive(Clone)]
pub struct TransformChain {
    pub weight: Weight,
    pub phi: RealFn,
    pub p: RealFn,
    pub g: RealFn,
    pub h: RealFn,
    /// provenance of (phi, p, g, h)
    pub provenance: [Provenance; 4],
    pub g_decay: GDecay,
    pub kernel_decay: Option<KernelDecay>,
    /// set when the chain was built from the rational closed-form family
    pub rational: Option<RationalTestFunction>,
}

impl TransformChain {
    /// Builds the chain starting from an explicit kernel Phi: the P, g, h
    /// members are produced by quadrature.
    pub fn from_kernel(k: Weight, kernel: &RadialKernel) -> Result<Self> {
        let fwd = forward_transform(k, kernel)?;
        let p = fwd.eval.clone();
        let g = change_variable_to_g(p.clone());
        let g_decay = GDecay::from_kernel(&kernel.decay);
        let h = fourier_g_to_h(g.clone(), g_decay)?;
        Ok(TransformChain {
            weight: k,
            phi: kernel.phi.clone(),
            p,
            g,
            h,
            provenance: [
                Provenance::Analytic,
                Provenance::Numeric,
                Provenance::Numeric,
                Provenance::Numeric,
            ],
            g_decay,
            kernel_decay: Some(kernel.decay),
            rational: None,
        })
    }

    /// Builds the chain from the closed-form rational family: g, h, and P are
    /// analytic, Phi comes from the weight-k inversion machinery.
    pub fn rational(params: &RationalTestFunction, k: Weight) -> Result<Self> {
        if !params.is_real() {
            return Err(Error::DomainError(
                "rational chains require real parameters (complex h has no radial kernel here)"
                    .into(),
            ));
        }
        let pr = *params;
        let g: RealFn = Arc::new(move |eta: f64| pr.g_c64(eta).re);
        let h: RealFn = Arc::new(move |r: f64| pr.h_c64(C64::new(r, 0.0)).re);
        // P(v) = g(eta(v)) with eta = 2 asinh sqrt(v)
        let p: RealFn = Arc::new(move |v: f64| pr.g_c64(2.0 * v.max(0.0).sqrt().asinh()).re);
        // P(v) = g(2 asinh sqrt v) and e^{eta(v)} >= 1 + 4v turn the
        // exponential g-certificate into |P(v)| <= coeff (1+4v)^{-rate}
        let (g_coeff, g_rate) = match params.g_decay() {
            GDecay::Exponential { coeff, rate } => (coeff, rate),
            GDecay::CompactEta { .. } => unreachable!("rational g is exponential"),
        };
        let fwd = ForwardTransform {
            weight: k,
            eval: p.clone(),
            kernel_decay: KernelDecay::Algebraic { coeff: g_coeff, eps: (g_rate - 3.0).max(0.25) },
            p_decay: PDecay::AlgebraicP { coeff: g_coeff, rate: g_rate },
        };
        let phi = invert_to_phi(k, &fwd)?;
        Ok(TransformChain {
            weight: k,
            phi,
            p,
            g,
            h,
            provenance: [
                Provenance::Numeric,
                Provenance::Analytic,
                Provenance::Analytic,
                Provenance::Analytic,
            ],
            g_decay: params.g_decay(),
            kernel_decay: None,
            rational: Some(pr),
        })
    }
}

/// Lambda_k(s(s-2)) = 2 pi int_0^inf rho^{s-2} P_k((rho-1)^2 / 4 rho) d rho,
/// evaluated directly in the rho variable (the Fourier route through g is the
/// independent cross-check).
pub fn lambda_chain(k: Weight, forward: &ForwardTransform, s: C64) -> Result<C64> {
    if !(0.0 < s.re && s.re < 2.0) {
        return Err(Error::DomainError(format!(
            "lambda chain needs 0 < Re(s) < 2 for absolute convergence, got {s}"
        )));
    }
    if forward.weight != k {
        return Err(Error::DomainError("forward transform weight mismatch".into()));
    }
    // effective support in v, translated to a rho window [1/rho_max, rho_max]
    let v_stop = match forward.kernel_decay {
        KernelDecay::Compact { u_max } => u_max,
        KernelDecay::Algebraic { coeff, eps } => {
            (std::f64::consts::PI * coeff / ((2.0 + eps) * 1e-14)).powf(1.0 / (2.0 + eps))
        }
    };
    let rho_max = (v_stop.sqrt() + (v_stop + 1.0).sqrt()).powi(2);
    let p = forward.eval.clone();
    let integrand = move |rho: f64| -> C64 {
        let v = (rho - 1.0) * (rho - 1.0) / (4.0 * rho);
        ((s - 2.0) * rho.ln()).exp() * p(v)
    };
    let pts = [1.0 / rho_max, 0.25, 1.0, 4.0_f64.min(rho_max), rho_max];
    let mut uniq: Vec<f64> = pts.iter().copied().filter(|&x| x <= rho_max).collect();
    uniq.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let q = integrate_segments(
        integrand,
        &uniq,
        &QuadConfig { abs_tol: 1e-11, rel_tol: 1e-9, max_subdivisions: 8_000 },
    )?;
    Ok(q.value * (2.0 * std::f64::consts::PI))
}

/// Result of the horospherical identity comparison: the 3D unipotent-orbit
/// integral of the kernel against 2 pi rho rho' g(log rho' - log rho).
pub struct HorosphericalComparison {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
}

/// Integrates k(Z, n(a,b) Z') over the unipotent group (da dabar db = 2 dx dy db)
/// and compares with the closed form of the horospherical integral.
pub fn horospherical_check(
    kernel: &RadialKernel,
    z: &SiegelPoint,
    zp: &SiegelPoint,
    cfg: &QuadConfig,
) -> Result<HorosphericalComparison> {
    let u_max = match kernel.decay {
        KernelDecay::Compact { u_max } => u_max,
        _ => {
            return Err(Error::DomainError(
                "horospherical check needs a compactly supported kernel".into(),
            ))
        }
    };
    let (r1, r2) = (z.rho(), zp.rho());
    // box bounds: Re rho(Z, nZ') = c0 + linear(a) + |a|^2/2 must stay <= A
    let a_big = (r1 * r2 * (u_max + 1.0)).sqrt();
    let c0 = rho_pair(z, zp);
    let l = z.z2.norm() + zp.z2.norm();
    let a_max = l + (l * l + 2.0 * (a_big + c0.re.abs())).sqrt() + 0.25;
    let b_max = a_big + c0.im.abs() + l * a_max + 0.25;

    let phi = kernel.phi.clone();
    let f = move |x: f64, y: f64, b: f64| -> f64 {
        let n = unipotent(C64::new(x, y), b);
        let moved = n.apply(zp);
        match point_pair(z, &moved) {
            Ok(pp) => 2.0 * phi(pp.u),
            Err(_) => 0.0,
        }
    };
    let lhs = crate::quadrature::integrate_3d(
        |x, y, b| f(x, y, b),
        (-a_max, a_max),
        (-a_max, a_max),
        (-b_max, b_max),
        cfg,
    )?
    .value;

    let fwd = forward_transform(Weight::ZERO, kernel)?;
    let eta = r2.ln() - r1.ln();
    let rhs = 2.0 * std::f64::consts::PI * r1 * r2 * (fwd.eval)(v_of_eta(eta));
    let rel_err = (lhs - rhs).abs() / rhs.abs().max(1e-300);
    Ok(HorosphericalComparison { lhs, rhs, rel_err })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_1d;

    fn p_of(k: Weight, kernel: &RadialKernel) -> RealFn {
        forward_transform(k, kernel).unwrap().eval
    }

    #[test]
    fn forward_vanishes_beyond_compact_support() {
        let kernel = RadialKernel::bump(1.0);
        for k in [Weight::ZERO, Weight::HALF, Weight::ONE] {
            assert_eq!(p_of(k, &kernel)(2.0), 0.0);
        }
    }

    #[test]
    fn forward_k0_at_origin_matches_oracle() {
        // P(0) for Phi = e^{-u}: oracle = direct arccos-form quadrature
        // (frozen from an independent high-precision evaluation).
        let p = p_of(Weight::ZERO, &RadialKernel::exponential());
        let direct = integrate_1d(
            |u: f64| (-u).exp() * ((1.0 - u) / (1.0 + u)).clamp(-1.0, 1.0).acos(),
            Interval::Finite { a: 0.0, b: 40.0 },
            &QuadConfig::tight(),
        )
        .unwrap()
        .value;
        assert!((p(0.0) - direct).abs() < 1e-10, "{} vs {}", p(0.0), direct);
        assert!((p(0.0) - 1.343_293_421_646_74).abs() < 1e-9);
    }

    #[test]
    fn forward_k1_matches_second_quadrature() {
        // P_1(0.5) for Phi = e^{-u} against the raw sqrt-form integrand at a
        // 1e-12 tolerance, plus the frozen independent value.
        let p1 = p_of(Weight::ONE, &RadialKernel::exponential());
        let v = 0.5;
        let direct = integrate_1d(
            |u: f64| 2.0 * (-u).exp() / (u + 1.0) * ((v + 1.0) * (u - v)).max(0.0).sqrt(),
            Interval::SqrtSingularLeft { a: v, b: v + 40.0 },
            &QuadConfig::tight(),
        )
        .unwrap()
        .value;
        assert!((p1(v) - direct).abs() < 1e-10, "{} vs {direct}", p1(v));
        assert!((p1(v) - 0.500_147_550_318_407).abs() < 1e-9);
    }

    #[test]
    fn general_integer_form_specializes() {
        let kernel = RadialKernel::exponential();
        let gen0 = forward_general_integer(Weight::ZERO, &kernel).unwrap();
        let named0 = p_of(Weight::ZERO, &kernel);
        for v in [0.0, 0.3, 1.0] {
            assert!(
                ((gen0.eval)(v) - named0(v)).abs() <= 1e-9,
                "k=0 mismatch at v={v}: {} vs {}",
                (gen0.eval)(v),
                named0(v)
            );
        }
        let gen1 = forward_general_integer(Weight::ONE, &kernel).unwrap();
        let named1 = p_of(Weight::ONE, &kernel);
        for v in [0.3, 1.2] {
            assert!(((gen1.eval)(v) - named1(v)).abs() <= 1e-9);
        }
        // k = 2 runs and is finite
        let k2 = Weight::try_new(4).unwrap();
        let gen2 = forward_general_integer(k2, &kernel).unwrap();
        assert!((gen2.eval)(0.4).is_finite());
    }

    #[test]
    fn change_variable_is_even_and_maps_norms() {
        let p = p_of(Weight::ZERO, &RadialKernel::exponential());
        let g = change_variable_to_g(p.clone());
        assert_eq!(g(0.7), g(-0.7));
        assert_eq!(g(0.0), p(0.0));
        // eta = ln N -> v = ((sqrt N - 1/sqrt N)/2)^2
        let n: f64 = 3.7;
        let v = v_of_eta(n.ln());
        let expect = (n.sqrt() - 1.0 / n.sqrt()).powi(2) / 4.0;
        assert!((v - expect).abs() < 1e-14);
    }

    #[test]
    fn rational_family_values() {
        let p = RationalTestFunction::real(1.5, 2.0, 2.5, 3.0).unwrap();
        let h0 = p.h_c64(C64::new(0.0, 0.0)).re;
        assert!((h0 - (1.0 / 9.0 - 1.0 / 56.25)).abs() < 1e-15);
        // even in r exactly
        assert_eq!(p.h_c64(C64::new(1.3, 0.0)), p.h_c64(C64::new(-1.3, 0.0)));
        assert!(RationalTestFunction::real(2.0, 1.5, 2.5, 3.0).is_err());
    }

    #[test]
    fn rational_g_fourier_reproduces_h() {
        let pr = RationalTestFunction::real(1.5, 2.0, 2.5, 3.0).unwrap();
        let g: RealFn = Arc::new(move |eta| pr.g_c64(eta).re);
        let h = fourier_g_to_h(g, pr.g_decay()).unwrap();
        for r in [0.0, 1.0, 2.5] {
            let closed = pr.h_c64(C64::new(r, 0.0)).re;
            assert!((h(r) - closed).abs() <= 1e-8, "r={r}: {} vs {closed}", h(r));
        }
    }

    #[test]
    fn fourier_round_trip_h_g_h() {
        let pr = RationalTestFunction::real(1.5, 2.0, 2.5, 3.0).unwrap();
        let h_fn: RealFn = Arc::new(move |r| pr.h_c64(C64::new(r, 0.0)).re);
        let g = fourier_h_to_g(h_fn.clone(), pr.h_decay()).unwrap();
        let h_back = fourier_g_to_h(g, pr.g_decay()).unwrap();
        for r in [0.0, 1.0, 3.0] {
            assert!((h_back(r) - h_fn(r)).abs() <= 1e-8, "r={r}: {} vs {}", h_back(r), h_fn(r));
        }
    }

    #[test]
    fn rational_g_decay_bound_holds() {
        let pr = RationalTestFunction::real(1.5, 2.0, 2.5, 3.0).unwrap();
        let m = pr.strip_bound_m();
        let d = pr.delta();
        let bound = m / (2.0 * std::f64::consts::PI * std::f64::consts::PI);
        for i in 0..50 {
            let eta = -6.0 + 12.0 * i as f64 / 49.0;
            let g = pr.g_c64(eta).norm();
            assert!(
                g <= bound * (-(1.0 + d) * eta.abs()).exp(),
                "eta={eta}: {g} vs bound"
            );
        }
    }

    #[test]
    fn inversion_round_trip_exponential_k0() {
        let kernel = RadialKernel::exponential();
        let fwd = forward_transform(Weight::ZERO, &kernel).unwrap();
        let phi_back = invert_to_phi(Weight::ZERO, &fwd).unwrap();
        let mut worst = 0.0f64;
        for i in 0..=12 {
            let u = 3.0 * i as f64 / 12.0;
            worst = worst.max((phi_back(u) - (-u).exp()).abs());
        }
        assert!(worst <= 1e-6, "sup error {worst}");
    }

    #[test]
    fn inversion_round_trip_bump_half() {
        let kernel = RadialKernel::bump(2.0);
        let fwd = forward_transform(Weight::HALF, &kernel).unwrap();
        let phi_back = invert_to_phi(Weight::HALF, &fwd).unwrap();
        let mut worst = 0.0f64;
        for i in 0..=10 {
            let u = 1.9 * i as f64 / 10.0;
            worst = worst.max((phi_back(u) - (kernel.phi)(u)).abs());
        }
        assert!(worst <= 1e-6, "sup error {worst}");
        // Phi == 0 -> P == 0 -> inversion returns 0
        let zero = RadialKernel::new(Arc::new(|_| 0.0), KernelDecay::Compact { u_max: 1.0 });
        let fz = forward_transform(Weight::HALF, &zero).unwrap();
        assert_eq!((invert_to_phi(Weight::HALF, &fz).unwrap())(0.3), 0.0);
    }

    #[test]
    fn lambda_matches_fourier_path() {
        let kernel = RadialKernel::exponential();
        for (k, r) in [(Weight::ZERO, 1.0), (Weight::HALF, 0.5)] {
            let fwd = forward_transform(k, &kernel).unwrap();
            let s = C64::new(1.0, r);
            let lam = lambda_chain(k, &fwd, s).unwrap();
            let g = change_variable_to_g(fwd.eval.clone());
            let h = fourier_g_to_h(g, GDecay::from_kernel(&kernel.decay)).unwrap();
            let hr = h(r);
            assert!(
                (lam.re - hr).abs() <= 1e-6 * hr.abs() && lam.im.abs() <= 1e-6 * hr.abs(),
                "k={} r={r}: {lam} vs {hr}",
                k.label()
            );
        }
    }

    #[test]
    fn lambda_symmetric_split_at_r_zero() {
        // s = 1: the rho-integrand is symmetric under rho -> 1/rho; the two
        // half-line contributions agree.
        let kernel = RadialKernel::bump(3.0);
        let fwd = forward_transform(Weight::ZERO, &kernel).unwrap();
        let p = fwd.eval.clone();
        let f = |rho: f64| -> f64 { p((rho - 1.0).powi(2) / (4.0 * rho)) / rho };
        let cfg = QuadConfig::tight();
        let hi =
            integrate_1d(f, Interval::Finite { a: 1.0, b: 14.0 }, &cfg).unwrap().value;
        let lo =
            integrate_1d(f, Interval::Finite { a: 1.0 / 14.0, b: 1.0 }, &cfg).unwrap().value;
        assert!((hi - lo).abs() < 1e-9, "{hi} vs {lo}");
    }

    #[test]
    fn horospherical_trivial_equal_heights() {
        // rho = rho': the right side is 2 pi rho rho' g(0)
        let kernel = RadialKernel::bump(4.0);
        let z = SiegelPoint::try_new(C64::new(0.5, 0.0), C64::new(0.0, 0.0)).unwrap();
        let fwd = forward_transform(Weight::ZERO, &kernel).unwrap();
        let g = change_variable_to_g(fwd.eval.clone());
        let rhs = 2.0 * std::f64::consts::PI * z.rho() * z.rho() * g(0.0);
        assert!(rhs > 0.0);
    }
}
