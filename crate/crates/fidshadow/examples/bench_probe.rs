use std::time::Instant;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use fidshadow::analytic::*;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(4004);
    for k in 0..20 {
        let m = rng.gen_range(1..=3);
        let raw: Vec<f64> = (0..m).map(|_| rng.gen::<f64>() + 0.05).collect();
        let tot: f64 = raw.iter().sum();
        let probs: Vec<f64> = raw.iter().map(|x| x / tot).collect();
        let axes: Vec<[f64;3]> = (0..m).map(|_| {
            loop {
                let v = [rng.gen::<f64>()-0.5, rng.gen::<f64>()-0.5, rng.gen::<f64>()-0.5];
                let n = (v[0]*v[0]+v[1]*v[1]+v[2]*v[2]).sqrt();
                if n > 1e-3 { return [v[0]/n, v[1]/n, v[2]/n]; }
            }
        }).collect();
        let angles: Vec<f64> = (0..m).map(|_| rng.gen::<f64>()*2.0*std::f64::consts::PI).collect();
        let spec = MixedUnitaryQubitSpec::new(probs, axes, angles).unwrap();
        let s = build_s_matrix(&spec);
        let [l1, l2, l3] = s.eigenvalues();
        if l3 - l1 > 1e-6 {
            let pdf = pdf_mixed_unitary(&spec).unwrap();
            let t = Instant::now();
            let cdf = pdf.cdf_interpolant(2048);
            println!("spec {k}: m={m} l=({l1:.6},{l2:.6},{l3:.6}) gaps l2-l1={:.2e} l3-l2={:.2e} interp {:?} mass {:.9}", l2-l1, l3-l2, t.elapsed(), cdf.total_mass());
        } else {
            println!("spec {k}: degenerate");
        }
    }
}
