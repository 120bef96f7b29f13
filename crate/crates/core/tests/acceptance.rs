//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Runs the full-size configurations (default grid, T = 200, both species)
//! so it takes a few minutes in release mode.

mod common;

use std::f64::consts::SQRT_2;
use std::fs;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{fourier_richardson, rel_err, Fourier};
use couette_ep::dynamics::{
    coeffs, duhamel_solution, integrate_mode, lambda_sq, unsymmetrize, IntegratorOptions, SymPair,
};
use couette_ep::params::{ModeCoord, PlasmaParams, Species};
use couette_ep::simulation::{simulate, uniform_times, SampleStride, SimulationOutput};
use couette_ep::spectral::{make_initial, FrequencyGrid, InitialSpec, Profile};
use couette_ep::verify::{
    check_lower_growth, check_upper_growth, check_upper_px_phi, check_upper_py, lemma_reports,
    LemmaSample, DEFAULT_FIT_START,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = [0.0f64; 4];
    let mut ok = true;
    for sp in [Species::Ion, Species::Electron] {
        let p = PlasmaParams::all_ones(sp);
        let (lmax, hg) = match sp {
            Species::Ion => (
                1.0 + p.coupling() / p.t_plus() + 2.0 * p.m_plus() / p.t_plus(),
                SQRT_2 / 2.0,
            ),
            Species::Electron => (1.0 + p.coupling() + 2.0 * p.m_minus(), SQRT_2 / 4.0),
        };
        let off = if sp == Species::Ion { 0 } else { 2 };
        for _ in 0..10_000 {
            let k = rng.gen_range(1..=8) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let mode = ModeCoord::new(k, rng.gen_range(-32.0..=32.0)).unwrap();
            let t = rng.gen_range(0.0..=100.0);
            let l2 = lambda_sq(t, &mode, &p);
            let r = coeffs(t, &mode, &p).h_over_gamma().abs();
            ok &= (1.0..=lmax).contains(&l2) && r <= hg + 1e-12;
            worst[off] = worst[off].max(l2 / lmax);
            worst[off + 1] = worst[off + 1].max(r / hg);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        ok && secs < 1.0,
        format!(
            "2x10^4 samples; max lambda^2/bound ion {:.4} electron {:.4}; max (|h|/gamma)/bound ion {:.4} electron {:.4}; {secs:.3} s",
            worst[0], worst[2], worst[1], worst[3]
        ),
    )
}

/// Criteria 2 and 3 share the trajectories.
fn criteria_2_3() -> (Outcome, Outcome) {
    let start = Instant::now();
    let sample = LemmaSample::random(100, 8, 16.0, 50.0, 2);
    let opts = IntegratorOptions::new(1e-8);
    let mut det = 0.0f64;
    let mut excess_stated = f64::NEG_INFINITY;
    let mut lines3 = Vec::new();
    let mut ok3 = true;
    for sp in [Species::Ion, Species::Electron] {
        let p = PlasmaParams::all_ones(sp);
        let trajs = sample.integrate(&p, &opts).unwrap();
        det = det.max(trajs.iter().map(|t| t.max_det_error()).fold(0.0, f64::max));
        // the criterion's prefactor 2 + sqrt 2, then the species lemma prefactor
        for tr in &trajs {
            for i in 1..tr.len() {
                let lhs = (tr.energies[i] / tr.energies[0]).ln().abs();
                let rhs = (2.0 + SQRT_2) * (tr.tv_h_gamma[i] + tr.tv_log_lambda[i]);
                excess_stated = excess_stated.max(lhs - rhs);
            }
        }
        let reps = lemma_reports(&trajs, &p, sample.t_max);
        let gron = &reps[0];
        let tv_hg = &reps[1];
        let tv_ll = &reps[2];
        ok3 &= gron.pass && tv_hg.pass && tv_ll.pass;
        lines3.push(format!(
            "{sp}: species-prefactor excess {:.2e}, TV_hg {:.3} <= {:.3}, TV_loglambda {:.4} <= {:.4}",
            gron.observed, tv_hg.observed, tv_hg.bound, tv_ll.observed, tv_ll.bound
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    ok3 &= excess_stated <= 1e-6;
    (
        outcome(
            det <= 1e-6 && secs < 10.0,
            format!("100 modes x 2 species to t = 50 at tol 1e-8; max |det Phi - 1| = {det:.2e}; {secs:.2} s"),
        ),
        outcome(
            ok3,
            format!("(2+sqrt2) excess {excess_stated:.2e} <= 1e-6; {}", lines3.join("; ")),
        ),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let p = PlasmaParams::all_ones(Species::Ion);
    let mode = ModeCoord::new(1, 0.0).unwrap();
    let a_in = SymPair::real(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let tr = integrate_mode(a_in, zero, &mode, &p, &[0.0, 10.0], 1e-10).unwrap();
    let (pi, psi) = unsymmetrize(&tr.states[1], 10.0, &mode, &p);
    let (pi0, psi0) = unsymmetrize(&a_in, 0.0, &mode, &p);
    let oracle = fourier_richardson(
        &p,
        1.0,
        0.0,
        zero,
        Fourier { pi: pi0, psi: psi0 },
        10.0,
        1e-5,
    );
    let e_oracle = rel_err(Fourier { pi, psi }, oracle);

    let forced = ModeCoord::new(2, 3.0).unwrap();
    let c0 = SymPair::new(Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.0));
    let f = Complex64::new(0.7, -0.4);
    let direct = integrate_mode(c0, f, &forced, &p, &[0.0, 6.0], 1e-10)
        .unwrap()
        .states[1];
    let duh = duhamel_solution(c0, f, &forced, &p, 6.0, 1e-10).unwrap();
    let e_duh = (direct - duh).norm();
    let secs = start.elapsed().as_secs_f64();
    outcome(
        e_oracle <= 1e-8 && e_duh <= 1e-6 && secs < 30.0,
        format!("relative error vs RK4-Richardson (dt 1e-5) {e_oracle:.2e}; duhamel vs direct {e_duh:.2e}; {secs:.2} s"),
    )
}

fn default_spec(n_xi: usize) -> InitialSpec {
    let g = FrequencyGrid::new(8, -32.0, 32.0, n_xi).unwrap();
    make_initial(&g, &Profile::by_name("gaussian_bump").unwrap(), 0).unwrap()
}

struct FullRun {
    species: Species,
    spec: InitialSpec,
    out: SimulationOutput,
    secs: f64,
}

fn full_run(species: Species, n_xi: usize) -> FullRun {
    let start = Instant::now();
    let spec = default_spec(n_xi);
    let p = PlasmaParams::all_ones(species);
    let times = uniform_times(200.0, 2001).unwrap();
    let out = simulate(
        &spec,
        &p,
        &times,
        &IntegratorOptions::new(1e-8),
        SampleStride::NONE,
    )
    .unwrap();
    FullRun {
        species,
        spec,
        out,
        secs: start.elapsed().as_secs_f64(),
    }
}

fn criterion_5(runs: &[FullRun]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut secs = 0.0;
    for r in runs {
        let p = PlasmaParams::all_ones(r.species);
        let s = &r.out.series;
        let reps = [
            check_upper_px_phi(s, &r.spec, &p, DEFAULT_FIT_START).unwrap(),
            check_upper_py(s, &r.spec, &p, DEFAULT_FIT_START).unwrap(),
            check_upper_growth(s, &r.spec, &p, DEFAULT_FIT_START).unwrap(),
        ];
        ok &= reps.iter().all(|x| x.pass);
        parts.push(format!(
            "{}: px+phi {:+.3}, py {:+.3}, growth {:+.3}",
            r.species,
            reps[0].slope.unwrap_or(f64::NAN),
            reps[1].slope.unwrap_or(f64::NAN),
            reps[2].slope.unwrap_or(f64::NAN)
        ));
        secs += r.secs;
    }
    outcome(
        ok && secs < 300.0,
        format!("slopes on [20, 200]: {}; {secs:.1} s", parts.join("; ")),
    )
}

fn criterion_6(base: &[FullRun], fine: &[FullRun]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (a, b) in base.iter().zip(fine) {
        let p = PlasmaParams::all_ones(a.species);
        let ca = check_lower_growth(&a.out.series, &a.spec, &p)
            .unwrap()
            .observed;
        let cb = check_lower_growth(&b.out.series, &b.spec, &p)
            .unwrap()
            .observed;
        let change = (ca - cb).abs() / cb;
        ok &= ca > 0.0 && cb > 0.0 && change < 0.1;
        parts.push(format!(
            "{}: c_check {ca:.6} (n_xi 513) vs {cb:.6} (n_xi 1025), change {change:.2e}",
            a.species
        ));
    }
    outcome(ok, parts.join("; "))
}

fn criterion_7(runs: &[FullRun]) -> Outcome {
    let cons = runs
        .iter()
        .flat_map(|r| r.out.conservation_residual.iter().copied())
        .fold(0.0f64, f64::max);
    // quadrature of d/dt Gamma = Psi on a short horizon, output dt halved
    let g = FrequencyGrid::new(2, -8.0, 8.0, 33).unwrap();
    let spec = make_initial(&g, &Profile::by_name("gaussian_bump").unwrap(), 0).unwrap();
    let opts = IntegratorOptions::new(1e-12);
    let mut ratios = Vec::new();
    for sp in [Species::Ion, Species::Electron] {
        let p = PlasmaParams::all_ones(sp);
        let e = |n| {
            let out = simulate(
                &spec,
                &p,
                &uniform_times(4.0, n).unwrap(),
                &opts,
                SampleStride::NONE,
            )
            .unwrap();
            *out.quadrature_residual.last().unwrap()
        };
        ratios.push(e(201) / e(401));
    }
    let ok = cons <= 1e-10 && ratios.iter().all(|r| (3.6..=4.4).contains(r));
    outcome(
        ok,
        format!(
            "max |Pi + Gamma - F| {cons:.2e}; trapezoid error ratio dt/(dt/2) ion {:.3} electron {:.3}",
            ratios[0], ratios[1]
        ),
    )
}

fn criterion_8(runs: &[FullRun]) -> Outcome {
    let worst = runs
        .iter()
        .flat_map(|r| {
            r.out
                .series
                .identity_defect(&PlasmaParams::all_ones(r.species))
        })
        .fold(0.0f64, f64::max);
    outcome(
        worst <= 1e-10,
        format!("max relative defect {worst:.2e} over {} runs", runs.len()),
    )
}

fn criterion_9() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let run = |dir: &str, threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_couette-ep"))
            .args(["simulate", "--threads", threads, "--out"])
            .arg(tmp.path().join(dir))
            .args([
                "--set",
                "grid.k_max=4",
                "--set",
                "grid.xi_min=-16",
                "--set",
                "grid.xi_max=16",
            ])
            .args([
                "--set",
                "grid.n_xi=129",
                "--set",
                "time.t_max=40",
                "--set",
                "time.n_outputs=401",
            ])
            .env_remove("COUETTE_EP_THREADS")
            .status()
            .map(|s| s.success())
            .unwrap_or(false)
    };
    let mut ok = true;
    for (d, t) in [("a1", "1"), ("b1", "1"), ("a8", "8"), ("b8", "8")] {
        ok &= run(d, t);
    }
    let read = |d: &str, f: &str| fs::read(tmp.path().join(d).join(f)).unwrap_or_default();
    let mut same = true;
    for f in ["norms.csv", "modes.csv"] {
        let base = read("a1", f);
        same &= !base.is_empty() && ["b1", "a8", "b8"].iter().all(|d| read(d, f) == base);
    }
    outcome(
        ok && same,
        format!("norms.csv and modes.csv byte-identical across 2 runs x threads {{1, 8}}: {same}"),
    )
}

fn main() {
    let mut results: Vec<(u32, Outcome)> = Vec::new();
    let mut report = |n: u32, o: Outcome| {
        println!(
            "ACCEPTANCE {n}: {} | {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        results.push((n, o));
    };
    report(1, criterion_1());
    let (c2, c3) = criteria_2_3();
    report(2, c2);
    report(3, c3);
    report(4, criterion_4());
    let base: Vec<FullRun> = [Species::Ion, Species::Electron]
        .map(|s| full_run(s, 513))
        .into();
    report(5, criterion_5(&base));
    let fine: Vec<FullRun> = [Species::Ion, Species::Electron]
        .map(|s| full_run(s, 1025))
        .into();
    report(6, criterion_6(&base, &fine));
    report(7, criterion_7(&base));
    report(8, criterion_8(&base));
    report(9, criterion_9());

    let failed: Vec<u32> = results
        .iter()
        .filter(|(_, o)| !o.pass)
        .map(|(n, _)| *n)
        .collect();
    if failed.is_empty() {
        println!("ACCEPTANCE: all {} criteria pass", results.len());
    } else {
        println!("ACCEPTANCE: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
