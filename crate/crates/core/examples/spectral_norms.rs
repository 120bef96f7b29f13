//! Initial data on a frequency grid, snapshots at a few times and the
//! Plancherel norms, including the weighted-norm identity.
//!
//! cargo run --release --example spectral_norms -- [gaussian_bump|random_band|single_mode]

use couette_ep::dynamics::integrate_mode;
use couette_ep::params::{PlasmaParams, Species};
use couette_ep::spectral::{
    evolve_snapshot, helmholtz_norms, make_initial, snapshot_states, sobolev_norm,
    sym_weighted_norm, FrequencyGrid, Profile,
};

fn main() -> couette_ep::Result<()> {
    let name = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "gaussian_bump".into());
    let grid = FrequencyGrid::new(4, -16.0, 16.0, 129)?;
    let spec = make_initial(&grid, &Profile::by_name(&name)?, 7)?;
    let p = PlasmaParams::all_ones(Species::Ion);

    println!(
        "profile {name}, {} modes, d_xi = {}",
        grid.len(),
        grid.d_xi()
    );
    for (r, s) in [(0.0, 0.0), (-0.5, 0.5), (-1.0, 1.0)] {
        println!(
            "|eta_in|_(H^{r} H^{s}) = {:.6}",
            sobolev_norm(&grid, &spec.eta_hat, r, s)
        );
    }

    let times = [0.0, 2.0, 5.0, 10.0];
    let f = spec.f_hat();
    let trajs = (0..grid.len())
        .map(|i| {
            integrate_mode(
                spec.initial_state(i, &p),
                f[i],
                &grid.mode(i),
                &p,
                &times,
                1e-9,
            )
        })
        .collect::<couette_ep::Result<Vec<_>>>()?;

    println!(
        "{:>5} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "t", "pux", "puy", "qu", "eta", "phi", "id. defect"
    );
    for &t in &times {
        let snap = evolve_snapshot(&spec, &p, &trajs, t)?;
        let n = helmholtz_norms(&snap, &grid, &p);
        let sw = sym_weighted_norm(&snapshot_states(&snap, &grid, &p), &grid, t);
        let defect = (sw - n.growth_square(&p)).abs() / sw.max(f64::MIN_POSITIVE);
        println!(
            "{t:5.1} {:10.4e} {:10.4e} {:10.4e} {:10.4e} {:10.4e} {:10.2e}",
            n.pux, n.puy, n.qu, n.eta, n.phi, defect
        );
        assert!(snap.conservation_residual(&f) < 1e-10);
    }
    Ok(())
}
