//! The differential operator Delta_k, its radial eigenfunctions via the Gauss
//! hypergeometric series, and residual checks of the radial ODEs they satisfy.
//!
//! Eigenfunctions are parameterized by s with eigenvalue lambda = s(s-2); on
//! the critical axis s = 1 + i r this is -1 - r^2.

use crate::geometry::SiegelPoint;
use crate::quadrature::derivs_12_richardson;
use crate::{Error, Result, C64};

/// Spectral weight; `two_k` = 2k is a non-negative integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Weight {
    two_k: i32,
}

impl Weight {
    pub const ZERO: Weight = Weight { two_k: 0 };
    pub const HALF: Weight = Weight { two_k: 1 };
    pub const ONE: Weight = Weight { two_k: 2 };

    pub fn try_new(two_k: i32) -> Result<Self> {
        if two_k < 0 {
            return Err(Error::DomainError(format!("negative weight 2k = {two_k} rejected")));
        }
        Ok(Weight { two_k })
    }

    pub fn two_k(&self) -> i32 {
        self.two_k
    }

    pub fn k(&self) -> f64 {
        self.two_k as f64 / 2.0
    }

    /// True for the weights with an explicit inversion formula (k = 0, 1/2, 1).
    pub fn explicit_inversion(&self) -> bool {
        matches!(self.two_k, 0 | 1 | 2)
    }

    pub fn is_half_integer(&self) -> bool {
        self.two_k % 2 != 0
    }

    /// Short label used in reports ("0", "1/2", "1", "3/2", ...).
    pub fn label(&self) -> String {
        if self.two_k % 2 == 0 {
            format!("{}", self.two_k / 2)
        } else {
            format!("{}/2", self.two_k)
        }
    }
}

/// Eigenvalue parameterization s = 1 + i r, lambda = s(s-2) = -1 - r^2.
#[derive(Debug, Clone, Copy)]
pub struct EigenParameter {
    pub s: C64,
}

impl EigenParameter {
    pub fn from_s(s: C64) -> Self {
        EigenParameter { s }
    }

    pub fn from_r(r: C64) -> Self {
        EigenParameter { s: C64::new(1.0, 0.0) + C64::new(0.0, 1.0) * r }
    }

    pub fn r(&self) -> C64 {
        (self.s - 1.0) / C64::new(0.0, 1.0)
    }

    pub fn lambda(&self) -> C64 {
        self.s * (self.s - 2.0)
    }

    /// |s(s-2) - (-1 - r^2)|; the two routes agree to 1e-14.
    pub fn lambda_consistency(&self) -> f64 {
        let r = self.r();
        (self.lambda() - (-C64::new(1.0, 0.0) - r * r)).norm()
    }
}

/// Series convergence boundary for [`hyp2f1`].
pub const HYP2F1_Z_LIMIT: f64 = 0.95;

/// Gauss hypergeometric series F(a, b; c; z) for |z| < 0.95, with a certified
/// term-ratio tail below 1e-13 relative.
pub fn hyp2f1(a: C64, b: C64, c: C64, z: C64) -> Result<C64> {
    if c.im.abs() < 1e-12 {
        let n = c.re.round();
        if n <= 0.0 && (c.re - n).abs() < 1e-12 {
            return Err(Error::PoleAtC { c });
        }
    }
    if z.norm() >= HYP2F1_Z_LIMIT {
        return Err(Error::NonConvergent { z, limit: HYP2F1_Z_LIMIT });
    }
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..2000u32 {
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        term *= ratio;
        sum += term;
        if n > 8 {
            // geometric tail bound with a margin for the ratio still drifting
            // toward |z| from below
            let q = (ratio.norm() * 1.02).min(0.99);
            if q < 0.99 {
                let tail = term.norm() * q / (1.0 - q);
                if tail <= 1e-13 * sum.norm().max(1.0) {
                    return Ok(sum);
                }
            }
        }
    }
    Err(Error::NonConvergent { z, limit: HYP2F1_Z_LIMIT })
}

/// Radial eigenfunction phi_{s,k}(sigma) on sigma > 1. Defined by
/// sigma^{-|k|}(sigma-1)^{|k|-s} F(s-|k|, s-1-|k|; 2s-1; -1/(sigma-1)); a
/// Pfaff transformation turns this into the numerically stable
/// sigma^{-s} F(s-|k|, s+|k|; 2s-1; 1/sigma) used here. Real positive bases
/// throughout, so the k = 0 case reduces to u^{-s} F(s, s-1; 2s-1; -1/u)
/// pointwise.
pub fn phi_sk(k: Weight, s: C64, sigma: f64) -> Result<C64> {
    if sigma <= 1.0 {
        return Err(Error::DomainError(format!("sigma = {sigma} must exceed 1")));
    }
    let kk = k.k();
    let f = hyp2f1(s - kk, s + kk, 2.0 * s - 1.0, C64::new(1.0 / sigma, 0.0))?;
    Ok((-s * sigma.ln()).exp() * f)
}

/// phi_{s,k} evaluated from the defining series (converges only for
/// sigma - 1 > 1/0.95); retained as an internal consistency route.
pub fn phi_sk_raw(k: Weight, s: C64, sigma: f64) -> Result<C64> {
    let u = sigma - 1.0;
    let kk = k.k();
    let f = hyp2f1(s - kk, s - 1.0 - kk, 2.0 * s - 1.0, C64::new(-1.0 / u, 0.0))?;
    // sigma^{-|k|} (sigma-1)^{|k|-s} with the real-base convention
    let power = ((C64::new(kk, 0.0) - s) * u.ln()).exp();
    Ok(power * sigma.powf(-kk) * f)
}

/// Ball-model radial eigenfunction as a function of v = r^2:
/// f_k = (r^2-1)^s F(s+|k|, s-|k|; 2s-1; 1-r^2) with the branch
/// (r^2-1)^s := e^{i pi s} (1-r^2)^s.
pub fn f_k_of_v(k: Weight, s: C64, v: f64) -> Result<C64> {
    if !(0.0 < v && v < 1.0) {
        return Err(Error::DomainError(format!("v = {v} must lie in (0, 1)")));
    }
    let kk = k.k();
    let f = hyp2f1(s + kk, s - kk, 2.0 * s - 1.0, C64::new(1.0 - v, 0.0))?;
    let branch = (C64::new(0.0, std::f64::consts::PI) * s).exp();
    Ok(branch * (s * (1.0 - v).ln()).exp() * f)
}

/// Residual of the sigma-form radial ODE
///   phi'' + (1/sigma + 2/(sigma-1)) phi' + (k^2/sigma + s(2-s))/(sigma(sigma-1)) phi = 0
/// for an arbitrary evaluator, scaled by max(1, |phi|).
pub fn sigma_ode_residual_of(
    f: &mut impl FnMut(f64) -> C64,
    k: Weight,
    s: C64,
    sigma: f64,
) -> f64 {
    // the eigenfunction grows like (sigma-1)^{-1} toward the singular point,
    // so the step scales with the distance to it
    let h = (0.02 * (sigma - 1.0)).min(0.05);
    let (d1, d2) = derivs_12_richardson(f, sigma, h, None);
    let phi = f(sigma);
    let kk = k.k();
    let coeff1 = 1.0 / sigma + 2.0 / (sigma - 1.0);
    let coeff0 = (C64::new(kk * kk / sigma, 0.0) + s * (2.0 - s)) / (sigma * (sigma - 1.0));
    (d2 + d1 * coeff1 + phi * coeff0).norm() / phi.norm().max(1.0)
}

/// ODE residual of phi_{s,k} at a point sigma > 1.05.
pub fn ode_residual_sigma(k: Weight, s: C64, sigma: f64) -> Result<f64> {
    if sigma <= 1.05 {
        return Err(Error::DomainError(format!(
            "sigma = {sigma} too close to the singular point 1"
        )));
    }
    phi_sk(k, s, sigma)?; // propagate convergence errors before differencing
    let mut f = |x: f64| phi_sk(k, s, x).unwrap_or(C64::new(f64::NAN, 0.0));
    Ok(sigma_ode_residual_of(&mut f, k, s, sigma))
}

/// Residual of the ball-model radial ODE in v = r^2:
///   f'' + (2/v - 1/(v-1)) f' + [s(2-s)/(v-1) - k^2]/(v(v-1)) f = 0
/// evaluated on [`f_k_of_v`], scaled by max(1, |f|).
pub fn ode_residual_ball(k: Weight, s: C64, r: f64) -> Result<f64> {
    if !(0.05..=0.95).contains(&r) {
        return Err(Error::DomainError(format!("r = {r} outside (0.05, 0.95)")));
    }
    let v = r * r;
    f_k_of_v(k, s, v)?;
    let mut f = |x: f64| f_k_of_v(k, s, x).unwrap_or(C64::new(f64::NAN, 0.0));
    // f behaves like v^{-1} near 0; keep the stencil well inside (0, v)
    let h = (0.02 * v).min(0.01);
    let (d1, d2) = derivs_12_richardson(&mut f, v, h, None);
    let fv = f(v);
    let kk = k.k();
    let coeff1 = 2.0 / v - 1.0 / (v - 1.0);
    let coeff0 = (s * (2.0 - s) / (v - 1.0) - kk * kk) / (v * (v - 1.0));
    Ok((d2 + d1 * coeff1 + fv * coeff0).norm() / fv.norm().max(1.0))
}

/// Applies Delta_k to a scalar field on the Siegel domain via central finite
/// differences in the four real coordinates with two-level Richardson
/// extrapolation (base step 1e-3).
pub fn apply_delta_k_fd(
    k: Weight,
    f: &dyn Fn(&SiegelPoint) -> C64,
    z: &SiegelPoint,
) -> Result<C64> {
    let h0 = 1e-3;
    if h0 < 1e-6 {
        return Err(Error::StepUnderflow(h0));
    }
    let at = |d: [f64; 4]| -> C64 {
        f(&SiegelPoint { z1: z.z1 + C64::new(d[0], d[1]), z2: z.z2 + C64::new(d[2], d[3]) })
    };
    // Wirtinger derivatives assembled from real-coordinate differences:
    //   f_{z1 zbar1} = (F_x1x1 + F_y1y1)/4
    //   f_{zbar1 z2} = (F_x1x2 - i F_x1y2 + i F_y1x2 + F_y1y2)/4
    //   f_{z1 zbar2} = (F_x1x2 + i F_x1y2 - i F_y1x2 + F_y1y2)/4
    //   f_{z1} - f_{zbar1} = -i F_y1
    let delta_at = |h: f64| -> C64 {
        let f0 = at([0.0; 4]);
        let unit = |axis: usize, s: f64| -> [f64; 4] {
            let mut d = [0.0; 4];
            d[axis] = s;
            d
        };
        let dxx = |axis: usize| -> C64 { (at(unit(axis, h)) + at(unit(axis, -h)) - f0 * 2.0) / (h * h) };
        let dmix = |i: usize, j: usize| -> C64 {
            let two = |si: f64, sj: f64| -> [f64; 4] {
                let mut d = [0.0; 4];
                d[i] = si;
                d[j] = sj;
                d
            };
            (at(two(h, h)) - at(two(h, -h)) - at(two(-h, h)) + at(two(-h, -h))) / (4.0 * h * h)
        };
        let f_y1 = (at(unit(1, h)) - at(unit(1, -h))) / (2.0 * h);

        let i = C64::new(0.0, 1.0);
        let fz1z1b = (dxx(0) + dxx(1)) * 0.25;
        let fz2z2b = (dxx(2) + dxx(3)) * 0.25;
        let f_x1x2 = dmix(0, 2);
        let f_x1y2 = dmix(0, 3);
        let f_y1x2 = dmix(1, 2);
        let f_y1y2 = dmix(1, 3);
        let fz1b_z2 = (f_x1x2 - i * f_x1y2 + i * f_y1x2 + f_y1y2) * 0.25;
        let fz1_z2b = (f_x1x2 + i * f_x1y2 - i * f_y1x2 + f_y1y2) * 0.25;
        let first_order = -i * f_y1;

        let z1pz1b = C64::new(2.0 * z.z1.re, 0.0);
        (z1pz1b * fz1z1b + fz2z2b + z.z2 * fz1b_z2 + z.z2.conj() * fz1_z2b
            - first_order * k.k())
            * z.rho()
    };
    let d1 = delta_at(h0);
    let d2 = delta_at(0.5 * h0);
    Ok((d2 * 4.0 - d1) / 3.0)
}
