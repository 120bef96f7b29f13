//! One forced mode: symmetrized state, energy, total variations and the
//! determinant of the fundamental matrix.
//!
//! cargo run --release --example single_mode -- [ion|electron] [t_max]

use num_complex::Complex64;

use couette_ep::dynamics::{integrate_mode_with, symmetrize, IntegratorOptions, Scheme};
use couette_ep::params::{ModeCoord, PlasmaParams, Species};

fn main() -> couette_ep::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let species = args
        .first()
        .and_then(|s| Species::parse(s))
        .unwrap_or(Species::Ion);
    let t_max: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(40.0);
    let p = PlasmaParams::all_ones(species);
    let mode = ModeCoord::new(1, 5.0)?;

    let eta = Complex64::new(1.0, 0.0);
    let psi = Complex64::new(0.0, 0.5);
    let omega = Complex64::new(0.2, 0.0);
    let initial = symmetrize(eta, psi, 0.0, &mode, &p);
    let times: Vec<f64> = (0..=40).map(|i| t_max * f64::from(i) / 40.0).collect();

    for scheme in [Scheme::Magnus4, Scheme::Rk4] {
        let opts = IntegratorOptions::new(1e-9).with_scheme(scheme);
        let tr = integrate_mode_with(initial, eta + omega, &mode, &p, &times, &opts)?;
        println!(
            "{}: {} steps ({} rejected), max |det Phi - 1| = {:.2e}",
            scheme.as_str(),
            tr.accepted_steps,
            tr.rejected_steps,
            tr.max_det_error()
        );
        if scheme == Scheme::Magnus4 {
            println!(
                "{:>7} {:>11} {:>11} {:>11} {:>9} {:>9}",
                "t", "|c1|", "|c2|", "E", "TV h/g", "TV logl"
            );
            for i in (0..tr.len()).step_by(4) {
                println!(
                    "{:7.2} {:11.4e} {:11.4e} {:11.4e} {:9.4} {:9.4}",
                    tr.times[i],
                    tr.states[i].c1.norm(),
                    tr.states[i].c2.norm(),
                    tr.energies[i],
                    tr.tv_h_gamma[i],
                    tr.tv_log_lambda[i]
                );
            }
        }
    }
    Ok(())
}
