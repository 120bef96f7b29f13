//! Coefficients of the symmetrized system along one mode, against their
//! uniform bounds.
//!
//! cargo run --example coefficients -- [k] [xi]

use couette_ep::dynamics::{build_generator, coeffs};
use couette_ep::params::{ModeCoord, PlasmaParams, Species};

fn main() -> couette_ep::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let k: i32 = args.first().and_then(|s| s.parse().ok()).unwrap_or(2);
    let xi: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(6.0);
    let mode = ModeCoord::new(k, xi)?;

    for species in [Species::Ion, Species::Electron] {
        let p = PlasmaParams::all_ones(species);
        println!(
            "{species}: mode ({k}, {xi}), critical time {:.3}, lambda^2 <= {:.3}, |h|/gamma <= {:.4}",
            mode.critical_time(),
            p.lambda_sq_max(),
            p.h_gamma_bound()
        );
        println!(
            "{:>6} {:>10} {:>10} {:>10} {:>10} {:>10}",
            "t", "lambda", "gamma", "h/gamma", "trace L", "|L|inf"
        );
        for i in 0..=12 {
            let t = 0.5 * f64::from(i);
            let c = coeffs(t, &mode, &p);
            let l = build_generator(t, &mode, &p);
            println!(
                "{t:6.2} {:10.5} {:10.5} {:+10.5} {:10.2e} {:10.4}",
                c.lambda,
                c.gamma,
                c.h_over_gamma(),
                l.trace(),
                l.norm_inf()
            );
        }
        println!();
    }
    Ok(())
}
