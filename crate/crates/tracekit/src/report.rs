//! The universal machine-readable check record emitted by the CLI and the
//! acceptance suite: named check, inputs, both compared values, errors,
//! tolerance, and a pass flag.

use crate::C64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::time::Instant;

/// Whether `tol` applies to the absolute or the relative error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TolMode {
    Abs,
    Rel,
}

#[derive(Debug, Clone, Serialize)]
struct ComplexRecord {
    re: f64,
    im: f64,
}

/// One verification record. `pass` holds exactly when the declared error mode
/// meets `tol`.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub inputs: BTreeMap<String, String>,
    lhs: ComplexRecord,
    rhs: ComplexRecord,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tol: f64,
    pub mode: TolMode,
    pub pass: bool,
    pub runtime_ms: u128,
}

impl VerificationReport {
    /// Builds a comparison record; `pass` follows from the declared mode.
    pub fn compare(
        check: &str,
        inputs: BTreeMap<String, String>,
        lhs: C64,
        rhs: C64,
        tol: f64,
        mode: TolMode,
        started: Instant,
    ) -> Self {
        let abs_err = (lhs - rhs).norm();
        let scale = lhs.norm().max(rhs.norm());
        let rel_err = if scale > 0.0 { abs_err / scale } else { 0.0 };
        let pass = match mode {
            TolMode::Abs => abs_err <= tol,
            TolMode::Rel => rel_err <= tol,
        };
        VerificationReport {
            check: check.to_string(),
            inputs,
            lhs: ComplexRecord { re: lhs.re, im: lhs.im },
            rhs: ComplexRecord { re: rhs.re, im: rhs.im },
            abs_err,
            rel_err,
            tol,
            mode,
            pass,
            runtime_ms: started.elapsed().as_millis(),
        }
    }

    /// Record for a predicate-style check (lhs = observed magnitude, rhs = 0).
    pub fn bound(
        check: &str,
        inputs: BTreeMap<String, String>,
        observed: f64,
        tol: f64,
        started: Instant,
    ) -> Self {
        Self::compare(
            check,
            inputs,
            C64::new(observed, 0.0),
            C64::new(0.0, 0.0),
            tol,
            TolMode::Abs,
            started,
        )
    }

    /// Record for a yes/no expectation (e.g. "loader rejected bad input").
    pub fn expectation(
        check: &str,
        inputs: BTreeMap<String, String>,
        satisfied: bool,
        started: Instant,
    ) -> Self {
        let observed = if satisfied { 0.0 } else { 1.0 };
        Self::bound(check, inputs, observed, 0.5, started)
    }

    pub fn lhs(&self) -> C64 {
        C64::new(self.lhs.re, self.lhs.im)
    }

    pub fn rhs(&self) -> C64 {
        C64::new(self.rhs.re, self.rhs.im)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

/// Convenience constructor for the `inputs` map.
pub fn inputs<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_flag_follows_declared_mode() {
        let t = Instant::now();
        let r = VerificationReport::compare(
            "demo",
            inputs([("x", "1".into())]),
            C64::new(1.0, 0.0),
            C64::new(1.0 + 1e-9, 0.0),
            1e-8,
            TolMode::Abs,
            t,
        );
        assert!(r.pass && r.abs_err <= r.tol);
        let r2 = VerificationReport::compare(
            "demo",
            BTreeMap::new(),
            C64::new(1.0, 0.0),
            C64::new(2.0, 0.0),
            1e-8,
            TolMode::Rel,
            t,
        );
        assert!(!r2.pass && r2.rel_err > r2.tol);
    }

    #[test]
    fn json_shape_is_stable() {
        let r = VerificationReport::bound("b", BTreeMap::new(), 0.0, 1e-10, Instant::now());
        let s = r.to_json();
        for key in ["\"check\"", "\"lhs\"", "\"rhs\"", "\"abs_err\"", "\"rel_err\"", "\"tol\"", "\"pass\"", "\"runtime_ms\""] {
            assert!(s.contains(key), "missing {key} in {s}");
        }
    }
}
