//! Whole-grid run with the decay, growth and lower-bound checks.
//!
//! The default grid and horizon are reduced so this finishes in seconds;
//! pass `full` for the default k in +-1..8, xi in [-32, 32], n_xi = 513,
//! T = 200 run.
//!
//! cargo run --release --example decay_rates -- [ion|electron] [full]

use couette_ep::runner::RunConfig;
use couette_ep::simulation::{simulate, SampleStride};
use couette_ep::verify::{
    check_lower_growth, check_upper_growth, check_upper_px_phi, check_upper_py,
};

fn main() -> couette_ep::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut cfg = RunConfig::default();
    if let Some(s) = args.first() {
        cfg.set("run.species", s)?;
    }
    if !args.iter().any(|a| a == "full") {
        for kv in [
            "grid.k_max=4",
            "grid.xi_min=-16",
            "grid.xi_max=16",
            "grid.n_xi=257",
            "time.t_max=80",
            "time.n_outputs=801",
        ] {
            cfg.apply_override(kv)?;
        }
    }
    let params = cfg.plasma_params()?;
    let spec = cfg.initial_spec()?;
    let start = std::time::Instant::now();
    let out = simulate(
        &spec,
        &params,
        &cfg.times()?,
        &cfg.integrator(),
        SampleStride::NONE,
    )?;
    println!(
        "{} modes in {:.1} s",
        out.active_modes,
        start.elapsed().as_secs_f64()
    );

    let s = &out.series;
    let fit = cfg.verify.fit_start;
    for r in [
        check_upper_px_phi(s, &spec, &params, fit)?,
        check_upper_py(s, &spec, &params, fit)?,
        check_upper_growth(s, &spec, &params, fit)?,
        check_lower_growth(s, &spec, &params)?,
    ] {
        let slope = r
            .slope
            .map(|v| format!("{v:+.3}"))
            .unwrap_or_else(|| "-".into());
        println!(
            "{:14} slope {slope:>7} (expected {:>5})  K/c = {:.4}  {}",
            r.name,
            r.expected_slope
                .map(|v| format!("{v:+.1}"))
                .unwrap_or_else(|| "-".into()),
            r.observed,
            if r.pass { "pass" } else { "FAIL" }
        );
    }
    Ok(())
}
