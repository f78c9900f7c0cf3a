fn main() {
    use tracekit::operators::Weight;
    use tracekit::transforms::*;
    let kernel = RadialKernel::exponential();
    let fwd = forward_transform(Weight::ZERO, &kernel).unwrap();
    let phi_back = invert_to_phi(Weight::ZERO, &fwd).unwrap();
    for i in 0..=12 {
        let u = 3.0 * i as f64 / 12.0;
        let got = phi_back(u);
        let want = (-u).exp();
        println!("u={u:.3}: got {got:.9}, want {want:.9}, err {:.3e}", (got - want).abs());
    }
}
