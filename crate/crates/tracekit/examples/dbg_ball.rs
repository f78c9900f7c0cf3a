fn main() {
    use tracekit::operators::*;
    use tracekit::C64;
    for (k, s, r) in [
        (Weight::ZERO, C64::new(1.5, 0.0), 0.5f64),
        (Weight::HALF, C64::new(2.0, 0.5), 0.6),
        (Weight::ONE, C64::new(2.2, 0.0), 0.4),
        (Weight::ONE, C64::new(1.4, 0.3), 0.3),
    ] {
        match ode_residual_ball(k, s, r) {
            Ok(res) => println!("k={} s={} r={}: residual = {:.3e}", k.label(), s, r, res),
            Err(e) => println!("k={} s={} r={}: {}", k.label(), s, r, e),
        }
    }
}
