//! Prints the fitted degree exponent of BA(10^4, 3) over a range of seeds.

use zipf_audit::netmodels::{degree_distribution, gen_preferential_attachment};

fn main() {
    let seeds: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(50);
    let mut ks = Vec::new();
    for seed in 0..seeds {
        let g = gen_preferential_attachment(10_000, 3, seed).expect("valid parameters");
        let k = degree_distribution(&g)
            .fit_exponent()
            .expect("fit")
            .exponent;
        ks.push(-k);
    }
    let mean = ks.iter().sum::<f64>() / ks.len() as f64;
    let inside = ks.iter().filter(|k| (2.0..=4.0).contains(*k)).count();
    let min = ks.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = ks.iter().cloned().fold(0.0, f64::max);
    println!("seeds={seeds} mean={mean:.4} min={min:.4} max={max:.4} inside_band={inside}");
}
