use couette_ep::dynamics::IntegratorOptions;
use couette_ep::params::{PlasmaParams, Species};
use couette_ep::simulation::{simulate, uniform_times, SampleStride, SimulationOutput};
use couette_ep::spectral::{make_initial, FrequencyGrid, InitialSpec, Profile};
use couette_ep::verify::{
    check_lower_growth, check_upper_growth, check_upper_px_phi, check_upper_py, DEFAULT_FIT_START,
};

fn run(spec: &InitialSpec, p: &PlasmaParams, t_max: f64, n_out: usize) -> SimulationOutput {
    let times = uniform_times(t_max, n_out).unwrap();
    simulate(
        spec,
        p,
        &times,
        &IntegratorOptions::new(1e-8),
        SampleStride::NONE,
    )
    .unwrap()
}

fn gaussian(grid: &FrequencyGrid, scale: [f64; 3]) -> InitialSpec {
    let mut prof = Profile::by_name("gaussian_bump").unwrap();
    if let Profile::GaussianBump { field_scale, .. } = &mut prof {
        *field_scale = scale;
    }
    make_initial(grid, &prof, 0).unwrap()
}

#[test]
fn single_k_growth_rate() {
    let g = FrequencyGrid::with_k_list(vec![-1, 1], -32.0, 32.0, 513).unwrap();
    let spec = gaussian(&g, [1.0, 1.0, 1.0]);
    for sp in [Species::Ion, Species::Electron] {
        let p = PlasmaParams::all_ones(sp);
        let out = run(&spec, &p, 200.0, 2001);
        let r = check_upper_growth(&out.series, &spec, &p, DEFAULT_FIT_START).unwrap();
        let s = r.slope.unwrap();
        assert!((s - 0.5).abs() <= 0.1, "{sp}: slope {s}");
        assert!(r.pass);
        assert_eq!(r.window, [20.0, 200.0]);
    }
}

#[test]
fn k_check_stable_under_time_refinement() {
    let g = FrequencyGrid::new(3, -16.0, 16.0, 129).unwrap();
    let spec = gaussian(&g, [1.0, 1.0, 1.0]);
    let p = PlasmaParams::all_ones(Species::Ion);
    let a = run(&spec, &p, 60.0, 601);
    let b = run(&spec, &p, 60.0, 1201);
    for (x, y) in [
        (
            check_upper_growth(&a.series, &spec, &p, 20.0)
                .unwrap()
                .k_check
                .unwrap(),
            check_upper_growth(&b.series, &spec, &p, 20.0)
                .unwrap()
                .k_check
                .unwrap(),
        ),
        (
            check_upper_px_phi(&a.series, &spec, &p, 20.0)
                .unwrap()
                .k_check
                .unwrap(),
            check_upper_px_phi(&b.series, &spec, &p, 20.0)
                .unwrap()
                .k_check
                .unwrap(),
        ),
    ] {
        assert!((x - y).abs() <= 0.05 * y, "{x} vs {y}");
    }
}

#[test]
fn px_phi_ratio_stable_when_horizon_doubles() {
    let g = FrequencyGrid::new(3, -16.0, 16.0, 129).unwrap();
    let spec = gaussian(&g, [1.0, 1.0, 1.0]);
    let p = PlasmaParams::all_ones(Species::Ion);
    let a = run(&spec, &p, 50.0, 501);
    let b = run(&spec, &p, 100.0, 1001);
    let ka = check_upper_px_phi(&a.series, &spec, &p, 20.0)
        .unwrap()
        .k_check
        .unwrap();
    let kb = check_upper_px_phi(&b.series, &spec, &p, 20.0)
        .unwrap()
        .k_check
        .unwrap();
    assert!(ka.is_finite() && kb >= ka);
    assert!((kb - ka) <= 0.05 * ka, "{ka} vs {kb}");
    let ra = check_upper_py(&a.series, &spec, &p, 20.0).unwrap();
    assert!(ra.k_check.unwrap().is_finite());
}

#[test]
fn homogeneous_data_has_constant_r() {
    let g = FrequencyGrid::new(2, -8.0, 8.0, 65).unwrap();
    // omega = -eta makes F_in vanish
    let spec = gaussian(&g, [1.0, 0.5, -1.0]);
    assert!(spec.f_hat().iter().all(|v| v.norm() == 0.0));
    let p = PlasmaParams::all_ones(Species::Electron);
    let out = run(&spec, &p, 30.0, 301);
    let r0 = out.series.r_norm[0];
    for r in &out.series.r_norm {
        assert!((r - r0).abs() <= 1e-9 * r0);
    }
    let rep = check_lower_growth(&out.series, &spec, &p).unwrap();
    assert!(rep.pass && rep.observed > 0.0);
}
