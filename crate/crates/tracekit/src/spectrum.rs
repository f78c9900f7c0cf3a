//! Synthetic geometric data (primitive pairs), hyperbolic orbital terms,
//! Poincare-map determinants, and assembly of the geometric side of the
//! weight-k trace formula in both of its formulations.
//!
//! Each primitive pair carries a norm N = N(gamma_1) > 1 and the order of the
//! finite rotation factor; a conjugacy class is (pair, m >= 1, 1 <= q <= ord2)
//! with class norm N^m and rotation angle q theta_2, theta_2 = 2 pi / ord2.

use crate::operators::Weight;
use crate::plancherel::{identity_term, SpectralH};
use crate::quadrature::{integrate_2d, QuadConfig};
use crate::transforms::{GDecay, KernelDecay, RadialKernel, TransformChain};
use crate::{Error, Result, C64};
use serde::{Deserialize, Serialize};

/// A primitive conjugacy pair: the dilation norm N(gamma_1) and the order of
/// the finite cyclic factor gamma_2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimitivePair {
    pub norm: f64,
    pub ord2: u32,
}

impl PrimitivePair {
    pub fn try_new(norm: f64, ord2: u32) -> Result<Self> {
        if !(norm >= 1.0 + 1e-6) {
            return Err(Error::Data(format!("primitive norm {norm} must be >= 1 + 1e-6")));
        }
        if ord2 < 1 {
            return Err(Error::Data("ord2 must be a positive integer".into()));
        }
        Ok(PrimitivePair { norm, ord2 })
    }

    /// theta_2 = 2 pi / ord(gamma_2).
    pub fn theta2(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.ord2 as f64
    }
}

/// One conjugacy class gamma_1^m gamma_2^q.
#[derive(Debug, Clone, Copy)]
pub struct ConjugacyClassTerm {
    pub pair: PrimitivePair,
    pub m: u32,
    pub q: u32,
}

impl ConjugacyClassTerm {
    pub fn try_new(pair: PrimitivePair, m: u32, q: u32) -> Result<Self> {
        if m < 1 {
            return Err(Error::Data("class power m must be >= 1".into()));
        }
        if q < 1 || q > pair.ord2 {
            return Err(Error::Data(format!("q = {q} outside 1..=ord2 = {}", pair.ord2)));
        }
        Ok(ConjugacyClassTerm { pair, m, q })
    }

    /// Class norm N(gamma) = N^m.
    pub fn class_norm(&self) -> f64 {
        self.pair.norm.powi(self.m as i32)
    }
}

/// Synthetic length-spectrum model: Euler number parameter plus a finite list
/// of primitive pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumModel {
    pub c2: u32,
    pub pairs: Vec<PrimitivePair>,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

impl SpectrumModel {
    pub fn new(c2: i64, pairs: Vec<PrimitivePair>) -> Result<Self> {
        let c2 = crate::plancherel::validate_c2(c2)?;
        let mut seen: Vec<(u64, u32)> = Vec::new();
        let mut out = Vec::new();
        let mut warnings = Vec::new();
        for p in pairs {
            PrimitivePair::try_new(p.norm, p.ord2)?;
            let key = (p.norm.to_bits(), p.ord2);
            if seen.contains(&key) {
                warnings.push(format!(
                    "duplicate primitive pair (norm {}, ord2 {}) dropped",
                    p.norm, p.ord2
                ));
                continue;
            }
            seen.push(key);
            out.push(p);
        }
        Ok(SpectrumModel { c2, pairs: out, warnings })
    }

    /// Parses the spectrum JSON schema
    /// `{"c2": <int>, "pairs": [{"norm": <float>, "ord2": <int>}, ...]}`.
    pub fn from_json_str(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            c2: i64,
            pairs: Vec<PrimitivePair>,
        }
        let raw: Raw =
            serde_json::from_str(text).map_err(|e| Error::Data(format!("bad spectrum JSON: {e}")))?;
        SpectrumModel::new(raw.c2, raw.pairs)
    }

    pub fn min_norm(&self) -> Option<f64> {
        self.pairs.iter().map(|p| p.norm).fold(None, |acc, n| match acc {
            None => Some(n),
            Some(a) => Some(a.min(n)),
        })
    }
}

/// |det(I - P_gamma)|^{1/2} for the class of norm N and angle theta:
/// (N^{1/2} - N^{-1/2}) |N^{1/4} e^{3 i theta/2} - N^{-1/4} e^{-3 i theta/2}|^2.
pub fn poincare_halfdet(n: f64, theta: f64) -> f64 {
    let q4 = n.powf(0.25);
    let phase = C64::new(0.0, 1.5 * theta).exp();
    let inner = (phase * q4 - phase.conj() / q4).norm_sqr();
    (q4 * q4 - 1.0 / (q4 * q4)) * inner
}

/// Equivalent parameterization through u = (ln N)/2: (e^u - e^{-u}) |...|^2.
pub fn poincare_halfdet_exp(u: f64, theta: f64) -> f64 {
    poincare_halfdet((2.0 * u).exp(), theta)
}

/// One hyperbolic orbital term of the trace formula (the full summand,
/// including the 6 pi / ord2 prefactor):
///   (6 pi / ord2) ln N e^{2 k i q theta2} g_k(m ln N) /
///     [(N^{m/2} - N^{-m/2}) |N^{m/4} e^{3 i q theta2 / 2} - ...|^2].
pub fn hyperbolic_term(
    k: Weight,
    term: &ConjugacyClassTerm,
    g_k: &dyn Fn(f64) -> f64,
) -> Result<C64> {
    let n = term.pair.norm;
    if n <= 1.0 + 1e-6 {
        return Err(Error::DegenerateDenominator(n));
    }
    let theta = term.q as f64 * term.pair.theta2();
    let ln_n = n.ln();
    let nm = term.class_norm();
    let denom = poincare_halfdet(nm, theta);
    let phase = C64::new(0.0, k.k() * 2.0 * term.q as f64 * term.pair.theta2()).exp();
    let pre = 6.0 * std::f64::consts::PI / term.pair.ord2 as f64;
    Ok(phase * (pre * ln_n * g_k(term.m as f64 * ln_n) / denom))
}

/// Direct 2D quadrature of the orbital integral in the (u, v) variables, with
/// the H_k phase when k > 0; the independent oracle for [`hyperbolic_term`].
/// The kernel must be compactly supported.
pub fn oracle_orbital_integral(
    k: Weight,
    pair: &PrimitivePair,
    m: u32,
    q: u32,
    kernel: &RadialKernel,
) -> Result<C64> {
    let u_max = match kernel.decay {
        KernelDecay::Compact { u_max } => u_max,
        _ => {
            return Err(Error::DomainError(
                "orbital oracle needs a compactly supported kernel".into(),
            ))
        }
    };
    let term = ConjugacyClassTerm::try_new(*pair, m, q)?;
    let mu = term.class_norm().sqrt();
    let theta = q as f64 * pair.theta2();
    let (c3, s3) = ((3.0 * theta).cos(), (3.0 * theta).sin());
    let half_sum = 0.5 * (mu + 1.0 / mu);
    let half_diff = 0.5 * (mu - 1.0 / mu);
    let a_lim = (u_max + 1.0).sqrt();
    if half_sum >= a_lim {
        // kernel support lies below the minimal displacement; both routes vanish
        return Ok(C64::new(0.0, 0.0));
    }
    let u_hi = (a_lim - half_sum) / (half_sum - c3);
    let v_hi = (a_lim + u_hi * s3.abs()) / half_diff + 1.0;
    let phi = kernel.phi.clone();
    let two_k = k.two_k();
    let f = move |u: f64, v: f64| -> (f64, f64) {
        let a = half_sum * (u + 1.0) - u * c3;
        let b = half_diff * v + u * s3;
        let arg = a * a + b * b - 1.0;
        let w = phi(arg);
        if w == 0.0 {
            return (0.0, 0.0);
        }
        if two_k == 0 {
            (w, 0.0)
        } else {
            let z = C64::new(a, b);
            let phase = (z / z.norm()).powi(two_k);
            (w * phase.re, w * phase.im)
        }
    };
    let cfg = QuadConfig { abs_tol: 1e-10, rel_tol: 1e-9, max_subdivisions: 20_000 };
    let re = integrate_2d(|u, v| f(u, v).0, (0.0, u_hi), (-v_hi, v_hi), &cfg)?.value;
    let im = if two_k == 0 {
        0.0
    } else {
        integrate_2d(|u, v| f(u, v).1, (0.0, u_hi), (-v_hi, v_hi), &cfg)?.value
    };
    let pre = 3.0 * std::f64::consts::PI / pair.ord2 as f64 * pair.norm.ln();
    let phase = C64::new(0.0, k.k() * 2.0 * q as f64 * pair.theta2()).exp();
    Ok(phase * C64::new(re, im) * pre)
}

/// Which printed form of the orbital denominators to use; the two agree
/// through the Poincare-map determinant identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formulation {
    /// explicit N^{m/2}, N^{m/4} exponentials
    Direct,
    /// |det(I - P_gamma)|^{1/2} via [`poincare_halfdet_exp`]
    PoincareMap,
}

/// Assembled geometric side with its certified truncation data.
#[derive(Debug, Clone)]
pub struct GeometricSide {
    pub identity: f64,
    /// hyperbolic sum in the direct formulation
    pub hyperbolic_direct: C64,
    /// hyperbolic sum through the Poincare-map determinant
    pub hyperbolic_poincare: C64,
    pub m_max: u32,
    pub tail_bound: f64,
}

impl GeometricSide {
    pub fn total(&self, f: Formulation) -> C64 {
        let hyp = match f {
            Formulation::Direct => self.hyperbolic_direct,
            Formulation::PoincareMap => self.hyperbolic_poincare,
        };
        hyp + self.identity
    }
}

/// Certified bound on a single m-slice of the hyperbolic sum (summed over q),
/// from |g(eta)| <= coeff e^{-rate eta} and the determinant lower bound
/// (N^{m/2}-N^{-m/2})(N^{m/4}-N^{-m/4})^2 >= N^m (1-1/N)(1-N^{-1/2})^2.
fn m_slice_bound(n: f64, g_coeff: f64, g_rate: f64, m: f64) -> f64 {
    let denom_floor = n.powf(m) * (1.0 - 1.0 / n) * (1.0 - n.powf(-0.5)).powi(2);
    6.0 * std::f64::consts::PI * n.ln() * g_coeff * n.powf(-g_rate * m) / denom_floor
}

/// Full geometric side of the trace formula for a chain and spectrum model:
/// identity term plus the hyperbolic double sum, in both formulations, with
/// the m-truncation chosen from the chain's decay certificate so the dropped
/// tail is certified below 1e-12 absolute per pair.
pub fn geometric_side(
    k: Weight,
    chain: &TransformChain,
    model: &SpectrumModel,
) -> Result<GeometricSide> {
    if chain.weight != k {
        return Err(Error::DomainError("chain weight mismatch".into()));
    }
    let identity = identity_term(k, &SpectralH::from_chain(chain)?, model.c2 as i64)?;

    let (g_coeff, g_rate) = match chain.g_decay {
        GDecay::Exponential { coeff, rate } => (coeff, rate),
        GDecay::CompactEta { eta_max } => (0.0, eta_max),
    };

    // collect terms sorted by m ln N ascending for deterministic compensated
    // summation with minimized cancellation
    let mut terms: Vec<(f64, C64, C64)> = Vec::new();
    let mut tail_bound = 0.0;
    let mut m_max_used = 0u32;
    for pair in &model.pairs {
        let n = pair.norm;
        let m_cap: u32 = match chain.g_decay {
            GDecay::CompactEta { eta_max } => (eta_max / n.ln()).ceil() as u32,
            GDecay::Exponential { .. } => {
                let mut m = 1u32;
                loop {
                    let b = m_slice_bound(n, g_coeff, g_rate, m as f64);
                    if b < 1e-12 || m > 4_000 {
                        break m;
                    }
                    m += 1;
                }
            }
        };
        if m_cap > 4_000 {
            return Err(Error::TailUnbounded(format!(
                "m cutoff for norm {n} exceeded 4000 terms"
            )));
        }
        m_max_used = m_max_used.max(m_cap);
        if let GDecay::Exponential { .. } = chain.g_decay {
            // geometric tail beyond the cap
            let ratio = n.powf(-(1.0 + g_rate));
            tail_bound += m_slice_bound(n, g_coeff, g_rate, (m_cap + 1) as f64) / (1.0 - ratio);
        }
        for m in 1..=m_cap {
            for q in 1..=pair.ord2 {
                let term = ConjugacyClassTerm::try_new(*pair, m, q)?;
                let direct = hyperbolic_term(k, &term, chain.g.as_ref())?;
                // same summand with the denominator routed through the
                // Poincare-map half determinant in the e^u parameterization
                let theta = q as f64 * pair.theta2();
                let u = 0.5 * (m as f64) * n.ln();
                let denom = poincare_halfdet_exp(u, theta);
                let phase = C64::new(0.0, k.k() * 2.0 * q as f64 * pair.theta2()).exp();
                let pre = 6.0 * std::f64::consts::PI / pair.ord2 as f64;
                let poincare = phase * (pre * n.ln() * (chain.g)(m as f64 * n.ln()) / denom);
                terms.push((m as f64 * n.ln(), direct, poincare));
            }
        }
    }
    terms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    // compensated (Kahan) summation in the fixed order
    let mut sum_d = C64::new(0.0, 0.0);
    let mut c_d = C64::new(0.0, 0.0);
    let mut sum_p = C64::new(0.0, 0.0);
    let mut c_p = C64::new(0.0, 0.0);
    for (_, d, p) in &terms {
        let y = *d - c_d;
        let t = sum_d + y;
        c_d = (t - sum_d) - y;
        sum_d = t;
        let y = *p - c_p;
        let t = sum_p + y;
        c_p = (t - sum_p) - y;
        sum_p = t;
    }

    Ok(GeometricSide {
        identity,
        hyperbolic_direct: sum_d,
        hyperbolic_poincare: sum_p,
        m_max: m_max_used,
        tail_bound,
    })
}
