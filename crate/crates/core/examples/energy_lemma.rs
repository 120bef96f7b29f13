//! Energy envelope, total-variation bounds and coercivity of the energy on
//! random homogeneous trajectories.
//!
//! cargo run --release --example energy_lemma -- [n_modes] [t_max]

use couette_ep::dynamics::IntegratorOptions;
use couette_ep::params::{PlasmaParams, Species};
use couette_ep::verify::{check_lemma_energy, LemmaSample};

fn main() -> couette_ep::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(100);
    let t_max: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(50.0);
    let sample = LemmaSample::random(n, 8, 16.0, t_max, 2024);
    for species in [Species::Ion, Species::Electron] {
        let p = PlasmaParams::all_ones(species);
        for r in check_lemma_energy(&sample, &p, &IntegratorOptions::new(1e-8))? {
            println!(
                "{species:8} {:28} observed {:.6e}  bound {:.6e}  {}",
                r.name,
                r.observed,
                r.bound,
                if r.pass { "pass" } else { "FAIL" }
            );
        }
    }
    Ok(())
}
