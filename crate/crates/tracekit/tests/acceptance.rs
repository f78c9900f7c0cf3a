//! Acceptance battery: one test per criterion, each printing a pass/fail line
//! with the worst observed error. Tolerances are pinned in `checks`.

use std::time::Instant;
use tracekit::checks;
use tracekit::report::VerificationReport;

fn summarize(n: u32, name: &str, reports: &[VerificationReport]) -> bool {
    let pass = reports.iter().all(|r| r.pass);
    let worst_abs = reports.iter().map(|r| r.abs_err).fold(0.0f64, f64::max);
    let worst_rel = reports.iter().map(|r| r.rel_err).fold(0.0f64, f64::max);
    println!(
        "ACCEPT {n:02} {name}: {} ({} reports, worst abs {worst_abs:.3e}, worst rel {worst_rel:.3e})",
        if pass { "PASS" } else { "FAIL" },
        reports.len(),
    );
    for r in reports.iter().filter(|r| !r.pass) {
        println!("    failing: {}", r.to_json());
    }
    pass
}

#[test]
fn criterion_01_appendix_oracles() {
    let t = Instant::now();
    let reports = checks::appendix_reports(None, &[0.1, 0.5, 1.0, 2.0, 5.0], 1e-8);
    let ok = summarize(1, "appendix-oracles", &reports);
    let secs = t.elapsed().as_secs_f64();
    println!("    runtime {secs:.2}s (budget 10s)");
    assert!(ok);
    assert!(secs <= 10.0, "appendix battery exceeded its 10s budget: {secs:.2}s");
}

#[test]
fn criterion_02_density_identities() {
    assert!(summarize(2, "density-identities", &checks::density_reports(1e-12)));
}

#[test]
fn criterion_03_transform_round_trips() {
    let t = Instant::now();
    let reports = checks::roundtrip_reports(1e-6);
    let ok = summarize(3, "transform-round-trips", &reports);
    let secs = t.elapsed().as_secs_f64();
    println!("    runtime {secs:.2}s (budget 60s)");
    assert!(ok);
    assert!(secs <= 60.0, "round-trip battery exceeded its 60s budget: {secs:.2}s");
}

#[test]
fn criterion_04_lambda_chain() {
    assert!(summarize(4, "lambda-chain", &checks::lambda_chain_reports(1e-6)));
}

#[test]
fn criterion_05_identity_phi0() {
    assert!(summarize(5, "identity-term-consistency", &checks::identity_reports(1e-6)));
}

#[test]
fn criterion_06_horospherical() {
    let t = Instant::now();
    let reports = checks::horospherical_reports(1e-4);
    let ok = summarize(6, "horospherical-identity", &reports);
    let secs = t.elapsed().as_secs_f64();
    println!("    runtime {secs:.2}s (budget 120s)");
    assert!(ok);
    assert!(secs <= 120.0, "horospherical battery exceeded its 120s budget: {secs:.2}s");
}

#[test]
fn criterion_07_orbital_oracle() {
    assert!(summarize(7, "orbital-oracle", &checks::orbital_reports(1e-6)));
}

#[test]
fn criterion_08_trace_formulations() {
    let model = checks::standard_model();
    assert_eq!(model.pairs.len(), 3);
    assert!(summarize(8, "trace-formulation-equality", &checks::geom_side_reports(&model, 1e-12)));
}

#[test]
fn criterion_09_zeta_duality() {
    let model = checks::standard_model();
    assert!(summarize(9, "zeta-duality", &checks::zeta_duality_reports(&model, 1e-8)));
}

#[test]
fn criterion_10_prop36_combination() {
    assert!(summarize(10, "prop36-combination", &checks::prop36_reports(1e-8)));
}

#[test]
fn criterion_11_w_continuation() {
    assert!(summarize(11, "w-continuation", &checks::w_consistency_reports(1e-6)));
}

#[test]
fn criterion_12_fe_parity() {
    let reports = checks::fe_reports(1e-8);
    let ok = summarize(12, "fe-parity-gaps", &reports);
    // the k = 0, xi = 0.5 closed form is exactly zero
    let exact = tracekit::zeta::parity_gap_closed(
        tracekit::operators::Weight::ZERO,
        tracekit::C64::new(0.5, 0.0),
    );
    println!("    k=0 xi=0.5 closed gap = {exact} (must be exactly 0)");
    assert_eq!(exact, tracekit::C64::new(0.0, 0.0));
    assert!(ok);
}

#[test]
fn criterion_13_trivial_zero_multiplicities() {
    // quoted multiplicities: 8(m+1)^3 for k in {0,1}; 4m(m+1)(2m+1) for k=1/2
    // (c2 = 3, m in {0,1,2}); magnitudes only, the observed sign is recorded.
    let reports = checks::residue_reports(1e-6);
    let ok = summarize(13, "trivial-zero-multiplicities", &reports);
    assert!(ok);
}

#[test]
fn criterion_14_ode_residuals() {
    assert!(summarize(14, "ode-residuals", &checks::ode_reports(1e-6)));
}

#[test]
fn criterion_15_eigen_relations() {
    assert!(summarize(15, "fd-eigen-relations", &checks::eigen_relation_reports(1e-4)));
}

#[test]
fn criterion_16_geometry_invariance() {
    assert!(summarize(16, "geometry-invariance", &checks::geometry_invariance_reports(20_260_809)));
}

#[test]
fn criterion_17_cor39() {
    assert!(summarize(17, "cor39-identity", &checks::cor39_reports(1e-8)));
}

#[test]
fn criterion_18_spectrum_validation() {
    assert!(summarize(18, "spectrum-validation", &checks::spectrum_validation_reports()));
}
