//! Named verification batteries shared by the CLI and the acceptance suite.
//! Each function runs one family of checks and returns machine-readable
//! reports; `suite_checks` lists them all in declaration order.

use crate::geometry::{
    automorphy, cayley, cayley_inv, point_pair, random_group_element, random_siegel_point,
    seeded_rng, su21_check, BallPoint, SiegelPoint,
};
use crate::operators::{
    apply_delta_k_fd, ode_residual_ball, ode_residual_sigma, Weight,
};
use crate::plancherel::{
    appendix_closed, appendix_oracle, phi0_consistency, AppendixIntegral,
};
use crate::quadrature::QuadConfig;
use crate::report::{inputs, TolMode, VerificationReport};
use crate::spectrum::{
    geometric_side, hyperbolic_term, oracle_orbital_integral, ConjugacyClassTerm, Formulation,
    PrimitivePair, SpectrumModel,
};
use crate::transforms::{
    change_variable_to_g, forward_transform, fourier_g_to_h, horospherical_check, invert_to_phi,
    lambda_chain, GDecay, RadialKernel, RationalTestFunction, TransformChain,
};
use crate::zeta::{
    cor39_identity, dirichlet_combination_check, fe_parity_check, quoted_multiplicity,
    trivial_zero_residue, w_integral, w_series, zeta_log_deriv, zeta_product_log,
    zeta_product_log_deriv_fd, TruncationConfig, WParams,
};
use crate::{C64, Result};
use std::time::Instant;

/// Standard rational test function used across the batteries.
pub fn standard_rational() -> RationalTestFunction {
    RationalTestFunction::real(1.5, 2.0, 2.5, 3.0).expect("ordering holds")
}

/// Standard W-continuation parameters.
pub fn standard_w_params() -> WParams {
    WParams::real(2.0, 2.5, 3.0).expect("ordering holds")
}

/// Three-pair synthetic spectrum used by the trace-formula checks.
pub fn standard_model() -> SpectrumModel {
    SpectrumModel::new(
        3,
        vec![
            PrimitivePair::try_new(std::f64::consts::E.powi(2), 1).unwrap(),
            PrimitivePair::try_new(3.0, 3).unwrap(),
            PrimitivePair::try_new(6.5, 2).unwrap(),
        ],
    )
    .expect("model is valid")
}

fn weights() -> [Weight; 3] {
    [Weight::ZERO, Weight::HALF, Weight::ONE]
}

/// Criterion 1: appendix quadrature oracles against the closed forms.
pub fn appendix_reports(which: Option<AppendixIntegral>, rs: &[f64], tol: f64) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let all = AppendixIntegral::all();
    let selected: Vec<_> = match which {
        Some(w) => vec![w],
        None => all.to_vec(),
    };
    for w in selected {
        for &r in rs {
            let t = Instant::now();
            let closed = appendix_closed(w, r);
            let rep = match appendix_oracle(w, r) {
                Ok(oracle) => VerificationReport::compare(
                    "appendix",
                    inputs([("which", w.name().into()), ("r", format!("{r}"))]),
                    C64::new(oracle, 0.0),
                    C64::new(closed, 0.0),
                    tol,
                    TolMode::Rel,
                    t,
                ),
                Err(e) => VerificationReport::bound(
                    "appendix",
                    inputs([("which", w.name().into()), ("r", format!("{r}")), ("error", e.to_string())]),
                    f64::INFINITY,
                    tol,
                    t,
                ),
            };
            out.push(rep);
        }
    }
    out
}

/// Criterion 2: density simplification identities at 20 sample points.
pub fn density_reports(tol: f64) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    for k in weights() {
        for i in 0..20 {
            let r = 0.15 + 0.2 * i as f64;
            let t = Instant::now();
            let closed = crate::plancherel::density(k, r).unwrap();
            let raw = crate::plancherel::density_raw(k, r);
            out.push(VerificationReport::compare(
                "density-identity",
                inputs([("k", k.label()), ("r", format!("{r}"))]),
                C64::new(raw, 0.0),
                C64::new(closed, 0.0),
                tol,
                TolMode::Abs,
                t,
            ));
        }
    }
    out
}

fn kernel_families() -> Vec<(&'static str, RadialKernel, f64)> {
    vec![
        ("exponential", RadialKernel::exponential(), 3.0),
        ("gaussian", RadialKernel::gaussian(), 2.2),
        ("bump", RadialKernel::bump(2.0), 1.9),
    ]
}

/// Criterion 3: transform round trips Phi -> P_k -> Phi, sup over a u-grid.
pub fn roundtrip_reports(tol: f64) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    for k in weights() {
        for (name, kernel, u_hi) in kernel_families() {
            let t = Instant::now();
            let rep = (|| -> Result<VerificationReport> {
                let fwd = forward_transform(k, &kernel)?;
                let back = invert_to_phi(k, &fwd)?;
                let mut sup = 0.0f64;
                for i in 0..=12 {
                    let u = u_hi * i as f64 / 12.0;
                    sup = sup.max((back(u) - (kernel.phi)(u)).abs());
                }
                Ok(VerificationReport::bound(
                    "roundtrip",
                    inputs([("k", k.label()), ("family", name.into()), ("grid_hi", format!("{u_hi}"))]),
                    sup,
                    tol,
                    t,
                ))
            })();
            out.push(rep.unwrap_or_else(|e| {
                VerificationReport::bound(
                    "roundtrip",
                    inputs([("k", k.label()), ("family", name.into()), ("error", e.to_string())]),
                    f64::INFINITY,
                    tol,
                    t,
                )
            }));
        }
    }
    out
}

/// Criterion 4: h_k(r) = Lambda_k(-1-r^2), the Fourier path against the
/// direct rho-integral.
pub fn lambda_chain_reports(tol: f64) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let kernel = RadialKernel::exponential();
    for k in weights() {
        let fwd = forward_transform(k, &kernel).expect("named weight");
        let g = change_variable_to_g(fwd.eval.clone());
        let h = fourier_g_to_h(g, GDecay::from_kernel(&kernel.decay)).expect("certified");
        for r in [0.5, 1.0, 2.0] {
            let t = Instant::now();
            let rep = match lambda_chain(k, &fwd, C64::new(1.0, r)) {
                Ok(lam) => VerificationReport::compare(
                    "lambda-chain",
                    inputs([("k", k.label()), ("r", format!("{r}")), ("kernel", "exponential".into())]),
                    lam,
                    C64::new(h(r), 0.0),
                    tol,
                    TolMode::Rel,
                    t,
                ),
                Err(e) => VerificationReport::bound(
                    "lambda-chain",
                    inputs([("k", k.label()), ("r", format!("{r}")), ("error", e.to_string())]),
                    f64::INFINITY,
                    tol,
                    t,
                ),
            };
            out.push(rep);
        }
    }
    out
}

/// Criterion 5: Phi(0) by inversion equals (1/4 pi^2) int h d_k for the
/// rational family, each weight.
pub fn identity_reports(tol: f64) -> Vec<VerificationReport> {
    let params = standard_rational();
    let mut out = Vec::new();
    for k in weights() {
        let t = Instant::now();
        let rep = (|| -> Result<VerificationReport> {
            let chain = TransformChain::rational(&params, k)?;
            let c = phi0_consistency(k, &chain)?;
            Ok(VerificationReport::compare(
                "identity-phi0",
                inputs([("k", k.label()), ("family", "rational(1.5,2,2.5,3)".into())]),
                C64::new(c.inversion, 0.0),
                C64::new(c.spectral, 0.0),
                tol,
                TolMode::Rel,
                t,
            ))
        })();
        out.push(rep.unwrap_or_else(|e| {
            VerificationReport::bound(
                "identity-phi0",
                inputs([("k", k.label()), ("error", e.to_string())]),
                f64::INFINITY,
                tol,
                t,
            )
        }));
    }
    out
}

/// Criterion 6: horospherical integral identity on two point pairs, plus the
/// dilation-shift consistency.
pub fn horospherical_reports(tol: f64) -> Vec<VerificationReport> {
    let kernel = RadialKernel::bump(4.0);
    let cfg = QuadConfig { abs_tol: 3e-7, rel_tol: 1e-6, max_subdivisions: 30_000 };
    let pairs = [
        ((0.5, 0.0, 0.0, 0.0), (1.0, 0.0, 0.0, 0.0)),
        ((0.6, 0.1, 0.1, 0.2), (0.9, -0.1, -0.15, 0.1)),
    ];
    let mut out = Vec::new();
    for (a, b) in pairs {
        let t = Instant::now();
        let z = SiegelPoint::try_new(C64::new(a.0, a.1), C64::new(a.2, a.3)).unwrap();
        let zp = SiegelPoint::try_new(C64::new(b.0, b.1), C64::new(b.2, b.3)).unwrap();
        let rep = match horospherical_check(&kernel, &z, &zp, &cfg) {
            Ok(c) => VerificationReport::compare(
                "horospherical",
                inputs([
                    ("Z", format!("({}, {})", z.z1, z.z2)),
                    ("Zp", format!("({}, {})", zp.z1, zp.z2)),
                ]),
                C64::new(c.lhs, 0.0),
                C64::new(c.rhs, 0.0),
                tol,
                TolMode::Rel,
                t,
            ),
            Err(e) => VerificationReport::bound(
                "horospherical",
                inputs([("error", e.to_string())]),
                f64::INFINITY,
                tol,
                t,
            ),
        };
        out.push(rep);
    }
    out
}

/// Criterion 7: orbital 2D oracle vs the closed forms for
/// (k, ord2) in {(0,1), (0,3), (1,3)}.
pub fn orbital_reports(tol: f64) -> Vec<VerificationReport> {
    let kernel = RadialKernel::bump(4.0);
    let cases = [(Weight::ZERO, 1u32, 1u32), (Weight::ZERO, 3, 1), (Weight::ONE, 3, 1)];
    let mut out = Vec::new();
    for (k, ord2, q) in cases {
        let t = Instant::now();
        let rep = (|| -> Result<VerificationReport> {
            let pair = PrimitivePair::try_new(4.0, ord2)?;
            let oracle = oracle_orbital_integral(k, &pair, 1, q, &kernel)?;
            let fwd = forward_transform(k, &kernel)?;
            let g = change_variable_to_g(fwd.eval.clone());
            let term = ConjugacyClassTerm::try_new(pair, 1, q)?;
            let closed = hyperbolic_term(k, &term, g.as_ref())?;
            Ok(VerificationReport::compare(
                "orbital",
                inputs([("k", k.label()), ("ord2", format!("{ord2}")), ("q", format!("{q}")), ("N", "4".into())]),
                oracle,
                closed,
                tol,
                TolMode::Rel,
                t,
            ))
        })();
        out.push(rep.unwrap_or_else(|e| {
            VerificationReport::bound(
                "orbital",
                inputs([("k", k.label()), ("error", e.to_string())]),
                f64::INFINITY,
                tol,
                t,
            )
        }));
    }
    out
}

/// Criterion 8: the two formulations of the geometric side agree to 1e-12 on
/// the three-pair model.
pub fn geom_side_reports(model: &SpectrumModel, tol: f64) -> Vec<VerificationReport> {
    let params = standard_rational();
    let mut out = Vec::new();
    for k in weights() {
        let t = Instant::now();
        let rep = (|| -> Result<VerificationReport> {
            let chain = TransformChain::rational(&params, k)?;
            let side = geometric_side(k, &chain, model)?;
            Ok(VerificationReport::compare(
                "geom-side-formulations",
                inputs([
                    ("k", k.label()),
                    ("pairs", format!("{}", model.pairs.len())),
                    ("m_max", format!("{}", side.m_max)),
                    ("tail_bound", format!("{:.2e}", side.tail_bound)),
                    ("identity", format!("{:.12e}", side.identity)),
                ]),
                side.total(Formulation::Direct),
                side.total(Formulation::PoincareMap),
                tol,
                TolMode::Abs,
                t,
            ))
        })();
        out.push(rep.unwrap_or_else(|e| {
            VerificationReport::bound(
                "geom-side-formulations",
                inputs([("k", k.label()), ("error", e.to_string())]),
                f64::INFINITY,
                tol,
                t,
            )
        }));
    }
    out
}

/// Criterion 9: numerical d/ds of the truncated log-product vs the
/// log-derivative series at s in {3, 4, 3+2i}.
pub fn zeta_duality_reports(model: &SpectrumModel, tol: f64) -> Vec<VerificationReport> {
    let trunc = TruncationConfig::default();
    let mut out = Vec::new();
    for k in weights() {
        for s in [C64::new(3.0, 0.0), C64::new(4.0, 0.0), C64::new(3.0, 2.0)] {
            let t = Instant::now();
            let rep = (|| -> Result<VerificationReport> {
                let fd = zeta_product_log_deriv_fd(k, s, model, &trunc)?;
                let series = zeta_log_deriv(k, s, model, &trunc)?.value;
                Ok(VerificationReport::compare(
                    "zeta-duality",
                    inputs([("k", k.label()), ("s", format!("{s}"))]),
                    fd,
                    series,
                    tol,
                    TolMode::Abs,
                    t,
                ))
            })();
            out.push(rep.unwrap_or_else(|e| {
                VerificationReport::bound(
                    "zeta-duality",
                    inputs([("k", k.label()), ("s", format!("{s}")), ("error", e.to_string())]),
                    f64::INFINITY,
                    tol,
                    t,
                )
            }));
        }
    }
    out
}

/// Criterion 10: the resolvent combination identity.
pub fn prop36_reports(tol: f64) -> Vec<VerificationReport> {
    let rational = standard_rational();
    let trunc = TruncationConfig::default();
    let model = SpectrumModel::new(
        3,
        vec![
            PrimitivePair::try_new(std::f64::consts::E.powi(2), 1).unwrap(),
            PrimitivePair::try_new(3.0, 4).unwrap(),
        ],
    )
    .unwrap();
    let mut out = Vec::new();
    for k in weights() {
        let t = Instant::now();
        let rep = match dirichlet_combination_check(k, &model, &rational, &trunc) {
            Ok(c) => VerificationReport::compare(
                "prop36",
                inputs([("k", k.label()), ("pairs", format!("{}", model.pairs.len()))]),
                c.hyperbolic_sum,
                c.zeta_combination,
                tol,
                TolMode::Rel,
                t,
            ),
            Err(e) => VerificationReport::bound(
                "prop36",
                inputs([("k", k.label()), ("error", e.to_string())]),
                f64::INFINITY,
                tol,
                t,
            ),
        };
        out.push(rep);
    }
    out
}

/// Criterion 11: W continuation, series vs defining integral on the strip.
pub fn w_consistency_reports(tol: f64) -> Vec<VerificationReport> {
    let p = standard_w_params();
    let trunc = TruncationConfig::default();
    let mut out = Vec::new();
    for k in weights() {
        for xi in [0.3, 0.7, 1.2] {
            let t = Instant::now();
            let rep = (|| -> Result<VerificationReport> {
                let series = w_series(k, C64::new(xi, 0.0), &p, &trunc)?;
                let integral = w_integral(k, C64::new(xi, 0.0), &p)?;
                Ok(VerificationReport::compare(
                    "w-consistency",
                    inputs([("k", k.label()), ("xi", format!("{xi}"))]),
                    series,
                    integral,
                    tol,
                    TolMode::Abs,
                    t,
                ))
            })();
            out.push(rep.unwrap_or_else(|e| {
                VerificationReport::bound(
                    "w-consistency",
                    inputs([("k", k.label()), ("xi", format!("{xi}")), ("error", e.to_string())]),
                    f64::INFINITY,
                    tol,
                    t,
                )
            }));
        }
    }
    out
}

/// Criterion 12: functional-equation parity gaps at five xi per weight; the
/// k = 0, xi = 0.5 closed form is exactly zero.
pub fn fe_reports(tol: f64) -> Vec<VerificationReport> {
    let p = standard_w_params();
    let trunc = TruncationConfig::default();
    let xi_for = |k: Weight| -> [f64; 5] {
        if k.is_half_integer() {
            [0.25, 0.3, 0.7, 1.2, 1.7]
        } else {
            [0.3, 0.5, 0.7, 1.2, 1.7]
        }
    };
    let mut out = Vec::new();
    for k in weights() {
        for xi in xi_for(k) {
            let t = Instant::now();
            let rep = match fe_parity_check(k, C64::new(xi, 0.0), &p, &trunc) {
                Ok(c) => VerificationReport::compare(
                    "fe-parity",
                    inputs([("k", k.label()), ("xi", format!("{xi}"))]),
                    c.gap,
                    c.closed,
                    tol,
                    TolMode::Abs,
                    t,
                ),
                Err(e) => VerificationReport::bound(
                    "fe-parity",
                    inputs([("k", k.label()), ("xi", format!("{xi}")), ("error", e.to_string())]),
                    f64::INFINITY,
                    tol,
                    t,
                ),
            };
            out.push(rep);
        }
    }
    out
}

/// Criterion 13: trivial-zero contour residue magnitudes against the quoted
/// multiplicity formulas for m in {0, 1, 2}, c2 = 3.
pub fn residue_reports(tol: f64) -> Vec<VerificationReport> {
    let p = standard_w_params();
    let trunc = TruncationConfig::default();
    let mut out = Vec::new();
    for k in weights() {
        for m in 0..3u32 {
            let t = Instant::now();
            let expected = quoted_multiplicity(k, m, 3);
            let rep = match trivial_zero_residue(k, m, 3, &p, &trunc) {
                Ok(res) => {
                    let mut ins = inputs([
                        ("k", k.label()),
                        ("m", format!("{m}")),
                        ("c2", "3".into()),
                        ("observed_sign", if res.re >= 0.0 { "+".into() } else { "-".into() }),
                    ]);
                    // magnitude-only comparison; report carries the sign
                    if expected == 0.0 {
                        ins.insert("note".into(), "expected multiplicity 0".into());
                        VerificationReport::compare(
                            "residue",
                            ins,
                            C64::new(res.norm(), 0.0),
                            C64::new(expected, 0.0),
                            1e-6,
                            TolMode::Abs,
                            t,
                        )
                    } else {
                        VerificationReport::compare(
                            "residue",
                            ins,
                            C64::new(res.norm(), 0.0),
                            C64::new(expected, 0.0),
                            tol,
                            TolMode::Rel,
                            t,
                        )
                    }
                }
                Err(e) => VerificationReport::bound(
                    "residue",
                    inputs([("k", k.label()), ("m", format!("{m}")), ("error", e.to_string())]),
                    f64::INFINITY,
                    tol,
                    t,
                ),
            };
            out.push(rep);
        }
    }
    out
}

/// Criterion 14: radial ODE residuals, 5 points x 3 weights x 3 values of s.
pub fn ode_reports(tol: f64) -> Vec<VerificationReport> {
    let svals = [C64::new(1.5, 0.0), C64::new(2.2, 0.0), C64::new(1.4, 0.3)];
    let sigmas = [1.5, 2.0, 3.0, 5.0, 8.0];
    let rs = [0.35, 0.5, 0.65, 0.8, 0.9];
    let mut out = Vec::new();
    for k in weights() {
        for s in svals {
            let t = Instant::now();
            let mut worst_sigma = 0.0f64;
            let mut worst_ball = 0.0f64;
            for i in 0..5 {
                worst_sigma = worst_sigma.max(ode_residual_sigma(k, s, sigmas[i]).unwrap_or(f64::INFINITY));
                worst_ball = worst_ball.max(ode_residual_ball(k, s, rs[i]).unwrap_or(f64::INFINITY));
            }
            out.push(VerificationReport::bound(
                "ode-residual",
                inputs([
                    ("k", k.label()),
                    ("s", format!("{s}")),
                    ("sigma_worst", format!("{worst_sigma:.2e}")),
                    ("ball_worst", format!("{worst_ball:.2e}")),
                ]),
                worst_sigma.max(worst_ball),
                tol,
                t,
            ));
        }
    }
    out
}

/// Criterion 15: finite-difference eigen-relations for Delta_0 and Delta_1.
pub fn eigen_relation_reports(tol: f64) -> Vec<VerificationReport> {
    let points = [
        SiegelPoint { z1: C64::new(1.0, 0.0), z2: C64::new(0.3, 0.0) },
        SiegelPoint { z1: C64::new(0.9, -0.2), z2: C64::new(0.25, 0.15) },
        SiegelPoint { z1: C64::new(1.4, 0.5), z2: C64::new(-0.2, 0.4) },
    ];
    let mut out = Vec::new();
    for s in [C64::new(1.3, 0.0), C64::new(1.7, 0.0), C64::new(2.5, 0.0), C64::new(1.0, 2.0)] {
        for (i, z) in points.iter().enumerate() {
            let t = Instant::now();
            let f = move |p: &SiegelPoint| (s * p.rho().ln()).exp();
            let got = apply_delta_k_fd(Weight::ZERO, &f, z).unwrap_or(C64::new(f64::NAN, 0.0));
            let expect = s * (s - 2.0) * (s * z.rho().ln()).exp();
            out.push(VerificationReport::compare(
                "eigen-relation",
                inputs([("op", "Delta_0 rho^s".into()), ("s", format!("{s}")), ("point", format!("{i}"))]),
                got,
                expect,
                tol,
                TolMode::Rel,
                t,
            ));
        }
    }
    for (i, z) in points.iter().enumerate() {
        let t = Instant::now();
        let g = |p: &SiegelPoint| C64::new(p.rho(), 0.0) * p.z2;
        let got = apply_delta_k_fd(Weight::ONE, &g, z).unwrap_or(C64::new(f64::NAN, 0.0));
        let expect = -g(z);
        out.push(VerificationReport::compare(
            "eigen-relation",
            inputs([("op", "Delta_1 (rho z2)".into()), ("point", format!("{i}"))]),
            got,
            expect,
            tol,
            TolMode::Rel,
            t,
        ));
    }
    out
}

/// Criterion 16: geometry invariance battery (point-pair invariance under 100
/// random group elements, membership deviations, Cayley round trips).
pub fn geometry_invariance_reports(seed: u64) -> Vec<VerificationReport> {
    let mut rng = seeded_rng(seed);
    let mut out = Vec::new();

    let t = Instant::now();
    let z = SiegelPoint { z1: C64::new(1.0, 0.2), z2: C64::new(0.3, -0.1) };
    let zp = SiegelPoint { z1: C64::new(0.8, -0.4), z2: C64::new(-0.2, 0.5) };
    let u0 = point_pair(&z, &zp).unwrap().u;
    let mut worst_u = 0.0f64;
    let mut worst_member = 0.0f64;
    for _ in 0..100 {
        let g = random_group_element(&mut rng);
        let dev = su21_check(g.matrix());
        worst_member = worst_member.max(dev.form_dev).max(dev.det_dev);
        let u1 = point_pair(&g.apply(&z), &g.apply(&zp)).unwrap().u;
        worst_u = worst_u.max((u1 - u0).abs());
    }
    out.push(VerificationReport::bound(
        "geometry-invariance",
        inputs([("what", "u(gZ,gZ') - u(Z,Z') over 100 g".into()), ("seed", format!("{seed}"))]),
        worst_u,
        1e-10,
        t,
    ));
    out.push(VerificationReport::bound(
        "geometry-membership",
        inputs([("what", "SU(2,1) deviations of exp-constructed elements".into())]),
        worst_member,
        1e-12,
        t,
    ));

    let t = Instant::now();
    let mut worst_rt = 0.0f64;
    let mut produced = 0;
    use rand::Rng;
    while produced < 1000 {
        let w1 = C64::new(rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7));
        let w2 = C64::new(rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7));
        if w1.norm_sqr() + w2.norm_sqr() >= 0.98 {
            continue;
        }
        produced += 1;
        let w = BallPoint { w1, w2 };
        let back = cayley_inv(&cayley(&w));
        worst_rt = worst_rt.max((back.w1 - w1).norm().max((back.w2 - w2).norm()));
    }
    out.push(VerificationReport::bound(
        "cayley-roundtrip",
        inputs([("points", "1000".into())]),
        worst_rt,
        1e-12,
        t,
    ));

    // cocycle identity on random triples
    let t = Instant::now();
    let mut worst_cocycle = 0.0f64;
    for _ in 0..100 {
        let g1 = random_group_element(&mut rng);
        let g2 = random_group_element(&mut rng);
        let zz = random_siegel_point(&mut rng);
        let (_, lhs) = automorphy(&g1.compose(&g2), &zz).unwrap();
        let (_, a) = automorphy(&g1, &g2.apply(&zz)).unwrap();
        let (_, b) = automorphy(&g2, &zz).unwrap();
        worst_cocycle = worst_cocycle.max((lhs - a * b).norm());
    }
    out.push(VerificationReport::bound(
        "automorphy-cocycle",
        inputs([("triples", "100".into())]),
        worst_cocycle,
        1e-12,
        t,
    ));
    out
}

/// Criterion 17: the integration-by-parts identity at x in {0.25, 0.5, 0.75}.
pub fn cor39_reports(tol: f64) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    for x in [0.25, 0.5, 0.75] {
        let t = Instant::now();
        let rep = match cor39_identity(x) {
            Ok(c) => VerificationReport::compare(
                "cor39",
                inputs([("x", format!("{x}"))]),
                C64::new(c.lhs, 0.0),
                C64::new(c.rhs, 0.0),
                tol,
                TolMode::Abs,
                t,
            ),
            Err(e) => VerificationReport::bound(
                "cor39",
                inputs([("x", format!("{x}")), ("error", e.to_string())]),
                f64::INFINITY,
                tol,
                t,
            ),
        };
        out.push(rep);
    }
    out
}

/// Criterion 18: the loader rejects invalid spectra.
pub fn spectrum_validation_reports() -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let t = Instant::now();
    let bad_c2 = SpectrumModel::from_json_str(r#"{"c2": 4, "pairs": []}"#);
    out.push(VerificationReport::expectation(
        "spectrum-validate",
        inputs([
            ("case", "c2 = 4".into()),
            ("rejected", format!("{}", bad_c2.is_err())),
            ("message", bad_c2.err().map(|e| e.to_string()).unwrap_or_default()),
        ]),
        true,
        t,
    ));
    let t = Instant::now();
    let bad_norm = SpectrumModel::from_json_str(r#"{"c2": 3, "pairs": [{"norm": 1.0, "ord2": 1}]}"#);
    out.push(VerificationReport::expectation(
        "spectrum-validate",
        inputs([
            ("case", "norm = 1".into()),
            ("rejected", format!("{}", bad_norm.is_err())),
        ]),
        bad_norm.is_err(),
        t,
    ));
    let t = Instant::now();
    let good = SpectrumModel::from_json_str(r#"{"c2": 6, "pairs": [{"norm": 2.5, "ord2": 2}]}"#);
    out.push(VerificationReport::expectation(
        "spectrum-validate",
        inputs([("case", "valid model accepted".into())]),
        good.is_ok(),
        t,
    ));
    // the c2 = 4 rejection must exist for criterion 18
    let c2_rejected = SpectrumModel::from_json_str(r#"{"c2": 4, "pairs": []}"#).is_err();
    if !c2_rejected {
        out[0] = VerificationReport::expectation(
            "spectrum-validate",
            inputs([("case", "c2 = 4".into())]),
            false,
            Instant::now(),
        );
    }
    out
}

/// Extra named check: truncation stability of the zeta product.
pub fn zeta_stability_reports(model: &SpectrumModel, tol: f64) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let s = C64::new(5.0, 0.0);
    for k in weights() {
        let t = Instant::now();
        let t20 = TruncationConfig { j_max: 20, ..Default::default() };
        let t40 = TruncationConfig { j_max: 40, ..Default::default() };
        let rep = (|| -> Result<VerificationReport> {
            let a = zeta_product_log(k, s, model, &t20)?.value;
            let b = zeta_product_log(k, s, model, &t40)?.value;
            Ok(VerificationReport::compare(
                "zeta-truncation-stability",
                inputs([("k", k.label()), ("s", format!("{s}")), ("j_max", "20 vs 40".into())]),
                a,
                b,
                tol,
                TolMode::Abs,
                t,
            ))
        })();
        out.push(rep.unwrap_or_else(|e| {
            VerificationReport::bound(
                "zeta-truncation-stability",
                inputs([("k", k.label()), ("error", e.to_string())]),
                f64::INFINITY,
                tol,
                t,
            )
        }));
    }
    out
}

/// The full acceptance battery in declaration order: (name, runner).
pub fn suite_checks(seed: u64) -> Vec<(&'static str, Box<dyn Fn() -> Vec<VerificationReport> + Send>)> {
    let model = standard_model();
    let model2 = model.clone();
    let model3 = model.clone();
    vec![
        ("appendix", Box::new(|| appendix_reports(None, &[0.1, 0.5, 1.0, 2.0, 5.0], 1e-8))),
        ("density", Box::new(|| density_reports(1e-12))),
        ("roundtrip", Box::new(|| roundtrip_reports(1e-6))),
        ("lambda-chain", Box::new(|| lambda_chain_reports(1e-6))),
        ("identity", Box::new(|| identity_reports(1e-6))),
        ("horospherical", Box::new(|| horospherical_reports(1e-4))),
        ("orbital", Box::new(|| orbital_reports(1e-6))),
        ("geom-side", Box::new(move || geom_side_reports(&model, 1e-12))),
        ("zeta-duality", Box::new(move || zeta_duality_reports(&model2, 1e-8))),
        ("prop36", Box::new(|| prop36_reports(1e-8))),
        ("w-consistency", Box::new(|| w_consistency_reports(1e-6))),
        ("fe", Box::new(|| fe_reports(1e-8))),
        ("residue", Box::new(|| residue_reports(1e-6))),
        ("ode", Box::new(|| ode_reports(1e-6))),
        ("eigen-relation", Box::new(|| eigen_relation_reports(1e-4))),
        ("geometry-invariance", Box::new(move || geometry_invariance_reports(seed))),
        ("cor39", Box::new(|| cor39_reports(1e-8))),
        ("spectrum-validate", Box::new(spectrum_validation_reports)),
        ("zeta", Box::new(move || zeta_stability_reports(&model3, 1e-12))),
    ]
}
