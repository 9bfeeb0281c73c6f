//! Convergence measurement for the tensor quadrature at ranks 3 and 4.
use dunkl_spherical::eval::{eval_chi, eval_phi, eval_psi, EvalOptions, SpectralParam};
use dunkl_spherical::CartanPoint;
use std::time::Instant;

fn main() {
    let cases: Vec<(&str, Vec<f64>, Vec<f64>, f64)> = vec![
        ("n4 chi lam=0", vec![0.0; 4], vec![1.4, 0.5, -0.6, -1.3], 1.0),
        ("n4 chishift lam=0", vec![0.0; 4], vec![1.4, 0.5, -0.6, -1.3], 1.0),
        ("n4 chishift lam=0 m05", vec![0.0; 4], vec![1.4, 0.5, -0.6, -1.3], 0.5),
        ("n4 chi lam=0 m05", vec![0.0; 4], vec![1.4, 0.5, -0.6, -1.3], 0.5),
        ("n4 psi lam=0 m05", vec![0.0; 4], vec![1.4, 0.5, -0.6, -1.3], 0.5),
        ("n4 phi rand m05", vec![0.9, 0.3, -0.4, -0.8], vec![1.2, 0.4, -0.5, -1.1], 0.5),
    ];
    for (name, lam, x, m) in cases {
        let lam = SpectralParam::from_real(&lam);
        let x = CartanPoint::new(x).unwrap();
        println!("--- {name} (m={m})");
        let mut prev = None;
        for nodes in [10usize, 14, 18, 22, 26, 30] {
            let t0 = Instant::now();
            let opts = EvalOptions::quad(1e-14).with_fixed_nodes(nodes);
            let v = if name.contains("chishift") {
                use dunkl_spherical::eval::QuadRoute;
                let o = opts.clone().with_route(QuadRoute::Shifted);
                eval_chi(&lam, &x, m, &o)
            } else if name.contains("chi") {
                eval_chi(&lam, &x, m, &opts)
            } else if name.contains("psi") {
                eval_psi(&lam, &x, m, &opts)
            } else {
                eval_phi(&lam, &x, m, &opts)
            }
            .unwrap();
            let dt = t0.elapsed().as_secs_f64();
            let delta = prev.map(|p: num_complex::Complex64| (v.value - p).norm());
            println!(
                "  N={nodes:3}  re={:+.14e} im={:+.14e}  delta={:?}  {:.2}s",
                v.value.re, v.value.im, delta, dt
            );
            prev = Some(v.value);
        }
    }
}
