//! Linear algebra and point geometry for SU(2,1) acting on the Siegel domain
//! S2 = {(z1, z2): z1 + conj(z1) - |z2|^2 > 0} and on the unit ball B2.
//!
//! The group is SU(2,1) = {g in SL(3,C): g* J g = J} with J the anti-diagonal
//! form diag-flip(-1, 1, -1). Points carry the invariants
//!   rho(Z, Z') = conj(z1) + z1' - conj(z2) z2',
//!   sigma = |rho(Z,Z')|^2 / (rho(Z) rho(Z')),   u = sigma - 1,
//! and the unit phase H_k = (rho(Z,Z')/|rho(Z,Z')|)^{2k}.

use crate::{Error, Result, C64};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Group-membership tolerance on matrix entries (|g* J g - J| and |det g - 1|).
pub const SU21_TOL: f64 = 1e-10;

/// The Cayley constant: omega = e^{2 pi i / 3} = (-1 + i sqrt 3)/2.
pub fn omega() -> C64 {
    C64::new(-0.5, 0.5 * 3.0_f64.sqrt())
}

/// Dense 3x3 complex matrix in row-major order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix3(pub [[C64; 3]; 3]);

impl Matrix3 {
    pub fn zero() -> Self {
        Matrix3([[C64::new(0.0, 0.0); 3]; 3])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            m.0[i][i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn diag(a: C64, b: C64, c: C64) -> Self {
        let mut m = Self::zero();
        m.0[0][0] = a;
        m.0[1][1] = b;
        m.0[2][2] = c;
        m
    }

    /// The Hermitian form J: anti-diagonal (-1, 1, -1).
    pub fn form_j() -> Self {
        let mut m = Self::zero();
        m.0[0][2] = C64::new(-1.0, 0.0);
        m.0[1][1] = C64::new(1.0, 0.0);
        m.0[2][0] = C64::new(-1.0, 0.0);
        m
    }

    pub fn mul(&self, other: &Matrix3) -> Matrix3 {
        let mut out = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = C64::new(0.0, 0.0);
                for k in 0..3 {
                    s += self.0[i][k] * other.0[k][j];
                }
                out.0[i][j] = s;
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix3 {
        let mut out = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = self.0[j][i].conj();
            }
        }
        out
    }

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn add(&self, other: &Matrix3) -> Matrix3 {
        let mut out = *self;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] += other.0[i][j];
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix3) -> Matrix3 {
        let mut out = *self;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] -= other.0[i][j];
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Matrix3 {
        let mut out = *self;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] *= s;
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for row in &self.0 {
            for e in row {
                m = m.max(e.norm());
            }
        }
        m
    }

    /// Matrix exponential by scaling-and-squaring with a Taylor series on the
    /// scaled matrix (entries here are O(1), so ~25 terms reach roundoff).
    pub fn exp(&self) -> Matrix3 {
        let norm = self.max_abs() * 3.0;
        let s = if norm > 0.25 { (norm / 0.25).log2().ceil() as u32 } else { 0 };
        let x = self.scale(C64::new((0.5f64).powi(s as i32), 0.0));
        let mut term = Matrix3::identity();
        let mut sum = Matrix3::identity();
        for n in 1..=25 {
            term = term.mul(&x).scale(C64::new(1.0 / n as f64, 0.0));
            sum = sum.add(&term);
        }
        let mut out = sum;
        for _ in 0..s {
            out = out.mul(&out);
        }
        out
    }
}

/// Deviation report for the SU(2,1) membership predicate.
#[derive(Debug, Clone, Copy)]
pub struct Su21Deviations {
    /// max-entry norm of g* J g - J
    pub form_dev: f64,
    /// |det g - 1|
    pub det_dev: f64,
    pub ok: bool,
}

/// Pure membership predicate: g* J g = J and det g = 1 within [`SU21_TOL`].
pub fn su21_check(m: &Matrix3) -> Su21Deviations {
    let j = Matrix3::form_j();
    let form_dev = m.adjoint().mul(&j).mul(m).sub(&j).max_abs();
    let det_dev = (m.det() - C64::new(1.0, 0.0)).norm();
    Su21Deviations { form_dev, det_dev, ok: form_dev <= SU21_TOL && det_dev <= SU21_TOL }
}

/// A matrix verified to lie in SU(2,1) (within [`SU21_TOL`]).
#[derive(Debug, Clone, Copy)]
pub struct GroupElement {
    m: Matrix3,
}

impl GroupElement {
    pub fn try_new(m: Matrix3) -> Result<Self> {
        let dev = su21_check(&m);
        if !dev.ok {
            return Err(Error::InvariantBreach(format!(
                "matrix is not in SU(2,1): form deviation {:.3e}, det deviation {:.3e}",
                dev.form_dev, dev.det_dev
            )));
        }
        Ok(GroupElement { m })
    }

    pub fn identity() -> Self {
        GroupElement { m: Matrix3::identity() }
    }

    pub fn matrix(&self) -> &Matrix3 {
        &self.m
    }

    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement { m: self.m.mul(&other.m) }
    }

    /// Automorphy denominator j(g, Z) = c1 z1 + c2 z2 + c3 (bottom row).
    pub fn j_factor(&self, z: &SiegelPoint) -> C64 {
        self.m.0[2][0] * z.z1 + self.m.0[2][1] * z.z2 + self.m.0[2][2]
    }

    /// Fractional-linear action on the Siegel domain.
    pub fn apply(&self, z: &SiegelPoint) -> SiegelPoint {
        let d = self.j_factor(z);
        let n1 = self.m.0[0][0] * z.z1 + self.m.0[0][1] * z.z2 + self.m.0[0][2];
        let n2 = self.m.0[1][0] * z.z1 + self.m.0[1][1] * z.z2 + self.m.0[1][2];
        SiegelPoint { z1: n1 / d, z2: n2 / d }
    }
}

/// Point of the Siegel domain; rho(Z) = z1 + conj(z1) - |z2|^2 > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiegelPoint {
    pub z1: C64,
    pub z2: C64,
}

impl SiegelPoint {
    pub fn try_new(z1: C64, z2: C64) -> Result<Self> {
        let p = SiegelPoint { z1, z2 };
        if p.rho() <= 0.0 {
            return Err(Error::DomainError(format!(
                "point ({z1}, {z2}) is outside the Siegel domain (rho = {})",
                p.rho()
            )));
        }
        Ok(p)
    }

    pub fn rho(&self) -> f64 {
        2.0 * self.z1.re - self.z2.norm_sqr()
    }
}

/// Point of the unit ball |w1|^2 + |w2|^2 < 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallPoint {
    pub w1: C64,
    pub w2: C64,
}

impl BallPoint {
    pub fn try_new(w1: C64, w2: C64) -> Result<Self> {
        if w1.norm_sqr() + w2.norm_sqr() >= 1.0 {
            return Err(Error::DomainError(format!("point ({w1}, {w2}) is outside the unit ball")));
        }
        Ok(BallPoint { w1, w2 })
    }

    pub fn norm_sq(&self) -> f64 {
        self.w1.norm_sqr() + self.w2.norm_sqr()
    }
}

/// Two-point kernel rho(Z, Z') = conj(z1) + z1' - conj(z2) z2'.
pub fn rho_pair(z: &SiegelPoint, zp: &SiegelPoint) -> C64 {
    z.z1.conj() + zp.z1 - z.z2.conj() * zp.z2
}

/// Point-pair invariants of a pair of Siegel-domain points.
#[derive(Debug, Clone, Copy)]
pub struct PointPair {
    /// sigma = |rho(Z,Z')|^2 / (rho(Z) rho(Z')) >= 1
    pub sigma: f64,
    /// u = sigma - 1 >= 0
    pub u: f64,
    /// delta = (sigma + 1)/2
    pub delta: f64,
    /// rho(Z, Z') itself (for phase factors)
    pub rho_zz: C64,
}

impl PointPair {
    /// Unit phase H_k = (rho/|rho|)^{2k}, with 2k an integer.
    pub fn hk_phase(&self, two_k: i32) -> C64 {
        let phase = self.rho_zz / self.rho_zz.norm();
        phase.powi(two_k)
    }
}

/// Computes (sigma, u, delta, rho(Z,Z')) for two domain points.
pub fn point_pair(z: &SiegelPoint, zp: &SiegelPoint) -> Result<PointPair> {
    let r1 = z.rho();
    let r2 = zp.rho();
    if r1 <= 0.0 || r2 <= 0.0 {
        return Err(Error::DomainError(format!("rho values ({r1}, {r2}) must be positive")));
    }
    let rho_zz = rho_pair(z, zp);
    let sigma = rho_zz.norm_sqr() / (r1 * r2);
    Ok(PointPair { sigma, u: sigma - 1.0, delta: 0.5 * (sigma + 1.0), rho_zz })
}

/// Automorphy pair (j, J = j/|j|) for a group element at a point.
pub fn automorphy(g: &GroupElement, z: &SiegelPoint) -> Result<(C64, C64)> {
    let j = g.j_factor(z);
    let n = j.norm();
    if n == 0.0 {
        return Err(Error::InvariantBreach(
            "automorphy factor j(g, Z) vanished for a domain point".into(),
        ));
    }
    Ok((j, j / n))
}

/// Cayley transform B2 -> S2, w -> ((-conj(omega) w1 - omega)/(1 - w1), w2/(1 - w1)).
pub fn cayley(w: &BallPoint) -> SiegelPoint {
    let om = omega();
    let d = C64::new(1.0, 0.0) - w.w1;
    SiegelPoint { z1: (-om.conj() * w.w1 - om) / d, z2: w.w2 / d }
}

/// Inverse Cayley transform S2 -> B2, z -> ((z1 + omega)/(z1 - conj(omega)), z2/(z1 - conj(omega))).
pub fn cayley_inv(z: &SiegelPoint) -> BallPoint {
    let om = omega();
    let d = z.z1 - om.conj();
    BallPoint { w1: (z.z1 + om) / d, w2: z.z2 / d }
}

/// Unipotent element n(a, b) = [[1, a, |a|^2/2 + i b], [0, 1, conj(a)], [0, 0, 1]].
pub fn unipotent(a: C64, b: f64) -> GroupElement {
    let mut m = Matrix3::identity();
    m.0[0][1] = a;
    m.0[0][2] = C64::new(0.5 * a.norm_sqr(), b);
    m.0[1][2] = a.conj();
    GroupElement { m }
}

/// Hyperbolic normal form diag(mu e^{i theta}, e^{-2 i theta}, mu^{-1} e^{i theta}).
#[derive(Debug, Clone, Copy)]
pub struct HyperbolicElement {
    pub mu: f64,
    pub theta: f64,
}

impl HyperbolicElement {
    pub fn try_new(mu: f64, theta: f64) -> Result<Self> {
        if mu <= 1.0 {
            return Err(Error::DomainError(format!("hyperbolic dilation mu = {mu} must exceed 1")));
        }
        Ok(HyperbolicElement { mu, theta })
    }

    /// Norm N = mu^2.
    pub fn norm(&self) -> f64 {
        self.mu * self.mu
    }

    pub fn group_element(&self) -> GroupElement {
        let e = C64::new(0.0, self.theta).exp();
        let e2 = C64::new(0.0, -2.0 * self.theta).exp();
        GroupElement { m: Matrix3::diag(e * self.mu, e2, e / self.mu) }
    }
}

/// Projects a matrix onto the Lie algebra su(2,1): J X* J = -X and tr X = 0.
fn project_algebra(x: &Matrix3) -> Matrix3 {
    let j = Matrix3::form_j();
    // J^{-1} = J, so the J-skew projection is (X - J X* J)/2.
    let mut p = x.sub(&j.mul(&x.adjoint()).mul(&j)).scale(C64::new(0.5, 0.0));
    let t = p.trace() / 3.0;
    for i in 0..3 {
        p.0[i][i] -= t;
    }
    p
}

/// Seeded pseudo-random group element, exact up to roundoff: a random algebra
/// element (entries uniform in [-1,1], projected onto the constraint) pushed
/// through the matrix exponential.
pub fn random_group_element(rng: &mut ChaCha8Rng) -> GroupElement {
    let mut x = Matrix3::zero();
    for i in 0..3 {
        for j in 0..3 {
            x.0[i][j] = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    GroupElement { m: project_algebra(&x).exp() }
}

/// Convenience seeded RNG for the randomized geometry checks.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random interior point of the Siegel domain.
pub fn random_siegel_point(rng: &mut ChaCha8Rng) -> SiegelPoint {
    let z2 = C64::new(rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7));
    let rho: f64 = rng.gen_range(0.2..2.0);
    let t: f64 = rng.gen_range(-1.0..1.0);
    SiegelPoint { z1: C64::new(0.5 * (rho + z2.norm_sqr()), t), z2 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn su21_check_identity_and_diag() {
        let id = su21_check(&Matrix3::identity());
        assert!(id.ok && id.form_dev == 0.0 && id.det_dev == 0.0);

        // diag(2 e^{i pi/3}, e^{-2 i pi/3}, 1/2 e^{i pi/3})
        let g = HyperbolicElement::try_new(2.0, std::f64::consts::PI / 3.0)
            .unwrap()
            .group_element();
        let dev = su21_check(g.matrix());
        assert!(dev.ok, "form {:e} det {:e}", dev.form_dev, dev.det_dev);

        let bad = su21_check(&Matrix3::diag(
            C64::new(2.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
        ));
        assert!(!bad.ok && bad.form_dev >= 0.99 && bad.det_dev >= 0.99);
    }

    #[test]
    fn rho_pair_values() {
        let z0 = SiegelPoint::try_new(C64::new(0.5, 0.0), C64::new(0.0, 0.0)).unwrap();
        assert!(close(rho_pair(&z0, &z0), C64::new(1.0, 0.0), 1e-15));
        assert!((z0.rho() - 1.0).abs() < 1e-15);

        let a = SiegelPoint::try_new(C64::new(1.0, 0.0), C64::new(0.0, 0.0)).unwrap();
        assert!(close(rho_pair(&a, &z0), C64::new(1.5, 0.0), 1e-15));

        let c = SiegelPoint::try_new(C64::new(1.0, 0.0), C64::new(1.0, 0.0)).unwrap();
        assert!(close(rho_pair(&c, &c), C64::new(1.0, 0.0), 1e-15));
    }

    #[test]
    fn point_pair_values() {
        let z0 = SiegelPoint::try_new(C64::new(0.5, 0.0), C64::new(0.0, 0.0)).unwrap();
        let pp = point_pair(&z0, &z0).unwrap();
        assert!((pp.sigma - 1.0).abs() < 1e-15 && pp.u.abs() < 1e-15);
        assert!((pp.delta - 1.0).abs() < 1e-15);
        assert!(close(pp.hk_phase(2), C64::new(1.0, 0.0), 1e-15));

        let a = SiegelPoint::try_new(C64::new(1.0, 0.0), C64::new(0.0, 0.0)).unwrap();
        let pp = point_pair(&a, &z0).unwrap();
        assert!((pp.sigma - 1.125).abs() < 1e-15, "sigma = {}", pp.sigma);
        assert!((pp.u - 0.125).abs() < 1e-15);
    }

    #[test]
    fn point_pair_invariance_under_group() {
        let mut rng = seeded_rng(7);
        let z = SiegelPoint::try_new(C64::new(1.0, 0.2), C64::new(0.3, -0.1)).unwrap();
        let zp = SiegelPoint::try_new(C64::new(0.8, -0.4), C64::new(-0.2, 0.5)).unwrap();
        let u0 = point_pair(&z, &zp).unwrap().u;
        for _ in 0..100 {
            let g = random_group_element(&mut rng);
            let u1 = point_pair(&g.apply(&z), &g.apply(&zp)).unwrap().u;
            assert!((u0 - u1).abs() <= 1e-10, "invariance broken: {u0} vs {u1}");
        }
    }

    #[test]
    fn sigma_one_iff_equal() {
        let mut rng = seeded_rng(11);
        for _ in 0..50 {
            let z = random_siegel_point(&mut rng);
            assert!((point_pair(&z, &z).unwrap().sigma - 1.0).abs() < 1e-14);
            let zp = random_siegel_point(&mut rng);
            if z != zp {
                assert!(point_pair(&z, &zp).unwrap().sigma > 1.0);
            }
        }
    }

    #[test]
    fn automorphy_identity_and_cocycle() {
        let z = SiegelPoint::try_new(C64::new(1.0, 0.3), C64::new(0.2, 0.1)).unwrap();
        let (j, jj) = automorphy(&GroupElement::identity(), &z).unwrap();
        assert!(close(j, C64::new(1.0, 0.0), 1e-15) && close(jj, C64::new(1.0, 0.0), 1e-15));

        let mut rng = seeded_rng(23);
        for _ in 0..40 {
            let g1 = random_group_element(&mut rng);
            let g2 = random_group_element(&mut rng);
            let z = random_siegel_point(&mut rng);
            let (_, lhs) = automorphy(&g1.compose(&g2), &z).unwrap();
            let (_, a) = automorphy(&g1, &g2.apply(&z)).unwrap();
            let (_, b) = automorphy(&g2, &z).unwrap();
            assert!(close(lhs, a * b, 1e-12), "cocycle broke: {lhs} vs {}", a * b);
        }
    }

    #[test]
    fn automorphy_of_rotation_fixing_base_point() {
        // gamma(theta) = C diag(e^{-i theta/2} U, e^{i theta}) C^{-1} fixes
        // (-omega, 0) and has J(gamma, (-omega, 0)) = e^{i theta}.
        let om = omega();
        let c = {
            let mut m = Matrix3::zero();
            m.0[0][0] = -om.conj();
            m.0[0][2] = -om;
            m.0[1][1] = C64::new(1.0, 0.0);
            m.0[2][0] = C64::new(-1.0, 0.0);
            m.0[2][2] = C64::new(1.0, 0.0);
            m
        };
        let c_inv = {
            let mut m = Matrix3::zero();
            m.0[0][0] = C64::new(1.0, 0.0);
            m.0[0][2] = om;
            m.0[1][1] = C64::new(1.0, 0.0);
            m.0[2][0] = C64::new(1.0, 0.0);
            m.0[2][2] = -om.conj();
            m
        };
        assert!(c.mul(&c_inv).sub(&Matrix3::identity()).max_abs() < 1e-15);

        let theta = 0.8;
        // U = identity scaled so the block determinant times e^{i theta} is 1.
        let s = C64::new(0.0, -theta / 2.0).exp();
        let block = Matrix3::diag(s, s, C64::new(0.0, theta).exp());
        let gamma = GroupElement::try_new(c.mul(&block).mul(&c_inv)).unwrap();

        let base = SiegelPoint::try_new(-om, C64::new(0.0, 0.0)).unwrap();
        let moved = gamma.apply(&base);
        assert!(close(moved.z1, base.z1, 1e-13) && close(moved.z2, base.z2, 1e-13));
        let (_, jj) = automorphy(&gamma, &base).unwrap();
        assert!(close(jj, C64::new(0.0, theta).exp(), 1e-13), "J = {jj}");
    }

    #[test]
    fn cayley_base_point_and_boundary() {
        let origin = BallPoint::try_new(C64::new(0.0, 0.0), C64::new(0.0, 0.0)).unwrap();
        let z = cayley(&origin);
        assert!(close(z.z1, -omega(), 1e-15));
        assert!(close(z.z1, C64::new(0.5, -0.5 * 3.0_f64.sqrt()), 1e-12));
        assert!((z.rho() - 1.0).abs() < 1e-14);

        // rho(C(w)) = (1 - |w|^2)/|1 - w1|^2, so |W| -> 1 forces rho -> 0
        // away from the distinguished boundary point w1 = 1.
        use rand::Rng as _;
        let mut rng = seeded_rng(31);
        for _ in 0..30 {
            let w1 = C64::new(rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6));
            let w2 = C64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
            if w1.norm_sqr() + w2.norm_sqr() >= 0.98 {
                continue;
            }
            let w = BallPoint::try_new(w1, w2).unwrap();
            let expect = (1.0 - w.norm_sq()) / (C64::new(1.0, 0.0) - w1).norm_sqr();
            assert!((cayley(&w).rho() - expect).abs() < 1e-13);
        }
        for t in [0.9, 0.99, 0.999] {
            let w = BallPoint::try_new(C64::new(0.0, 0.0), C64::new(t, 0.0)).unwrap();
            let r = cayley(&w).rho();
            assert!(r > 0.0 && (r - (1.0 - t * t)).abs() < 1e-14);
        }
    }

    #[test]
    fn unipotent_action_and_membership() {
        let n00 = unipotent(C64::new(0.0, 0.0), 0.0);
        assert!(n00.matrix().sub(&Matrix3::identity()).max_abs() == 0.0);

        // n(1,0)(Z') = (z1' + z2' + 1/2, z2' + 1)
        let n = unipotent(C64::new(1.0, 0.0), 0.0);
        let zp = SiegelPoint::try_new(C64::new(0.7, 0.1), C64::new(0.2, -0.3)).unwrap();
        let out = n.apply(&zp);
        assert!(close(out.z1, zp.z1 + zp.z2 + 0.5, 1e-15));
        assert!(close(out.z2, zp.z2 + 1.0, 1e-15));

        let dev = su21_check(unipotent(C64::new(1.0, 1.0), 2.0).matrix());
        assert!(dev.ok);

        // products keep the upper-triangular shape
        let prod = n.compose(&unipotent(C64::new(0.3, -0.4), 1.5));
        for i in 1..3 {
            for j in 0..i {
                assert_eq!(prod.matrix().0[i][j], C64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn random_group_elements_are_members() {
        let mut rng = seeded_rng(1);
        for _ in 0..20 {
            let g = random_group_element(&mut rng);
            let dev = su21_check(g.matrix());
            assert!(
                dev.form_dev <= 1e-12 && dev.det_dev <= 1e-12,
                "deviations {:e} {:e}",
                dev.form_dev,
                dev.det_dev
            );
        }
        // zero algebra element -> identity
        assert!(project_algebra(&Matrix3::zero()).exp().sub(&Matrix3::identity()).max_abs() == 0.0);
        // distinct seeds give distinct elements
        let a = random_group_element(&mut seeded_rng(2));
        let b = random_group_element(&mut seeded_rng(3));
        assert!(a.matrix().sub(b.matrix()).max_abs() > 1e-3);
    }

    #[test]
    fn rho_transforms_by_j_factor() {
        let mut rng = seeded_rng(5);
        for _ in 0..20 {
            let g = random_group_element(&mut rng);
            let z = random_siegel_point(&mut rng);
            let (j, _) = automorphy(&g, &z).unwrap();
            let lhs = g.apply(&z).rho();
            let rhs = z.rho() / j.norm_sqr();
            assert!((lhs - rhs).abs() < 1e-10 * rhs.max(1.0));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn cayley_round_trip(x1 in -0.6f64..0.6, y1 in -0.6f64..0.6,
                             x2 in -0.5f64..0.5, y2 in -0.5f64..0.5) {
            let w1 = C64::new(x1, y1);
            let w2 = C64::new(x2, y2);
            prop_assume!(w1.norm_sqr() + w2.norm_sqr() < 0.95);
            let w = BallPoint::try_new(w1, w2).unwrap();
            let z = cayley(&w);
            prop_assert!(z.rho() > 0.0);
            let back = cayley_inv(&z);
            prop_assert!((back.w1 - w.w1).norm() < 1e-12);
            prop_assert!((back.w2 - w.w2).norm() < 1e-12);
        }

        #[test]
        fn hyperbolic_normal_forms_are_exact_members(mu in 1.01f64..6.0, theta in 0.0f64..6.28) {
            let g = HyperbolicElement::try_new(mu, theta).unwrap().group_element();
            let dev = su21_check(g.matrix());
            prop_assert!(dev.form_dev <= 1e-14 && dev.det_dev <= 1e-14);
        }
    }
}
