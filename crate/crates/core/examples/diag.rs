use qorient::channels::*;
use qorient::expfam::*;
use qorient::linalg::*;
use qorient::repr::*;
use qorient::uniform::RngStream;

fn main() {
    let mut rng = RngStream::new(1005, 0).rng();
    let target = depolarizing_choi(0.001, 0.01, 0.1).unwrap();
    let cfg = SaConfig { batch: 2000, max_iters: 200, tol_sigma: 2.0, ..SaConfig::default() };
    let t0 = std::time::Instant::now();
    let dist = CptpFrameBingham::fit(&mut rng, &target, 400.0, &cfg).unwrap();
    println!("fit: {:?} in {:.1}s", dist.record().fit, t0.elapsed().as_secs_f64());
    let theta_norm = dist.params().theta().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    println!("theta norm: {theta_norm:.2}");
    for chains in [1usize, 8] {
        let (chois, diag) = dist.sample_batch(&mut rng, 10_000, &GibbsConfig { burn_in: 100, thin: 2, chains }).unwrap();
        let mut mean = CMat::zeros(4, 4);
        for c in &chois { mean += c.mat(); }
        mean /= C64::new(10_000.0, 0.0);
        println!("chains={chains}: distance {:.4}, mh_fallbacks {}", frobenius_distance(&mean, target.mat()), diag.mh_fallbacks);
    }
}
