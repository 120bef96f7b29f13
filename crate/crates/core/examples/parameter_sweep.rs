//! Sweep of the electron mass on a small grid through the runner, writing
//! `sweep.csv` into a directory.
//!
//! cargo run --release --example parameter_sweep -- [out_dir]

use couette_ep::runner::{cmd_sweep, RunConfig};

fn main() -> couette_ep::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "sweep_out".into());
    let mut cfg = RunConfig::default();
    for kv in [
        "run.species=electron",
        "grid.k_max=3",
        "grid.xi_min=-12",
        "grid.xi_max=12",
        "grid.n_xi=97",
        "time.t_max=80",
        "time.n_outputs=801",
        "verify.lemma_modes=20",
        "verify.lemma_t_max=20",
    ] {
        cfg.apply_override(kv)?;
    }
    cfg.output.dir = dir.into();
    let path = cmd_sweep(&cfg, "m_minus", &[2.0, 0.5, 1.0], 0)?;
    print!(
        "{}",
        std::fs::read_to_string(&path).map_err(|source| couette_ep::Error::IoFailure {
            path: path.display().to_string(),
            source,
        })?
    );
    Ok(())
}
