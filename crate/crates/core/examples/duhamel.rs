//! Forced solution two ways (direct propagation and the variation of
//! constants formula) and the lower-bound functional `R(t)`.
//!
//! cargo run --release --example duhamel

use num_complex::Complex64;

use couette_ep::dynamics::{duhamel_solution, integrate_mode, lower_bound_functional, SymPair};
use couette_ep::params::{ModeCoord, PlasmaParams, Species};

fn main() -> couette_ep::Result<()> {
    let p = PlasmaParams::all_ones(Species::Electron);
    let mode = ModeCoord::new(2, 3.0)?;
    let initial = SymPair::real(0.3, -0.1);
    let forcing = Complex64::new(1.0, 0.5);
    let times: Vec<f64> = (0..=10).map(f64::from).collect();

    let tr = integrate_mode(initial, forcing, &mode, &p, &times, 1e-10)?;
    let r = lower_bound_functional(&tr);
    println!(
        "{:>4} {:>12} {:>12} {:>12}",
        "t", "|c| direct", "|c - duh|", "|R(t)|"
    );
    for (i, &t) in times.iter().enumerate() {
        let d = duhamel_solution(initial, forcing, &mode, &p, t, 1e-10)?;
        println!(
            "{t:4.0} {:12.6e} {:12.3e} {:12.6e}",
            tr.states[i].norm(),
            (tr.states[i] - d).norm(),
            r[i].norm()
        );
    }
    Ok(())
}
