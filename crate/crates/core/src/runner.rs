//! Run configuration and the `simulate`, `verify` and `sweep` pipelines.
//!
//! Configuration files are TOML with one table per section (`[run]`,
//! `[grid]`, ...). Every key has a default, so an empty file is valid.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::dynamics::{IntegratorOptions, Scheme};
use crate::error::{Error, Result};
use crate::params::{charge_for_coupling, PlasmaParams, Species};
use crate::simulation::{simulate, uniform_times, SampleStride, SimulationOutput};
use crate::spectral::{make_initial, Field, FrequencyGrid, InitialSpec, Profile};
use crate::verify::{
    check_lemma_energy, check_lower_growth, check_upper_growth, check_upper_px_phi, check_upper_py,
    Check, LemmaSample, VerificationReport,
};

pub const THREADS_ENV: &str = "COUETTE_EP_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSection {
    pub species: Species,
    pub seed: u64,
    /// 0 selects the rayon default.
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamsSection {
    pub t_plus: f64,
    pub t_minus: f64,
    pub m_plus: f64,
    pub m_minus: f64,
    pub e_charge: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSection {
    pub k_max: u32,
    pub xi_min: f64,
    pub xi_max: f64,
    pub n_xi: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InitialSection {
    pub profile: Profile,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSection {
    pub t_max: f64,
    pub n_outputs: usize,
    pub tol: f64,
    pub scheme: Scheme,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySection {
    pub checks: Vec<Check>,
    pub fit_start: f64,
    pub lemma_modes: usize,
    pub lemma_t_max: f64,
    pub lemma_k_max: i32,
    pub lemma_xi_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputSection {
    pub dir: PathBuf,
    pub mode_xi_stride: usize,
    pub mode_t_stride: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub run: RunSection,
    pub params: ParamsSection,
    pub grid: GridSection,
    pub initial: InitialSection,
    pub time: TimeSection,
    pub verify: VerifySection,
    pub output: OutputSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            run: RunSection {
                species: Species::Ion,
                seed: 0,
                threads: 0,
            },
            params: ParamsSection {
                t_plus: 1.0,
                t_minus: 1.0,
                m_plus: 1.0,
                m_minus: 1.0,
                e_charge: charge_for_coupling(1.0),
            },
            grid: GridSection {
                k_max: 8,
                xi_min: -32.0,
                xi_max: 32.0,
                n_xi: 513,
            },
            initial: InitialSection {
                profile: Profile::by_name("gaussian_bump").expect("known profile"),
            },
            time: TimeSection {
                t_max: 200.0,
                n_outputs: 2001,
                tol: 1e-8,
                scheme: Scheme::Magnus4,
            },
            verify: VerifySection {
                checks: Check::ALL.to_vec(),
                fit_start: 20.0,
                lemma_modes: 100,
                lemma_t_max: 50.0,
                lemma_k_max: 8,
                lemma_xi_max: 16.0,
            },
            output: OutputSection {
                dir: PathBuf::from("out"),
                mode_xi_stride: 32,
                mode_t_stride: 10,
            },
        }
    }
}

fn bad(key: &str, value: &str, what: &str) -> Error {
    Error::ConfigParse(format!("{key} = {value}: {what}"))
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| bad(key, value, "not a valid number"))
}

fn boolean(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(bad(key, value, "expected true or false")),
    }
}

/// Renders a TOML value in the textual form `set` accepts; arrays become
/// comma-separated lists.
fn scalar_text(key: &str, value: &toml::Value) -> Result<String> {
    use toml::Value as V;
    match value {
        V::String(s) => Ok(s.clone()),
        V::Integer(i) => Ok(i.to_string()),
        V::Float(f) => Ok(f.to_string()),
        V::Boolean(b) => Ok(b.to_string()),
        V::Array(items) => Ok(items
            .iter()
            .map(|v| scalar_text(key, v))
            .collect::<Result<Vec<_>>>()?
            .join(",")),
        _ => Err(Error::ConfigParse(format!("{key}: unsupported value type"))),
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::ConfigParse(e.message().to_string()))?;
        let mut cfg = RunConfig::default();
        for (section, body) in &doc {
            let toml::Value::Table(body) = body else {
                return Err(Error::ConfigParse(format!(
                    "'{section}' must be a table such as [{section}]"
                )));
            };
            // the profile selects which other initial.* keys are valid
            let (first, rest): (Vec<_>, Vec<_>) =
                body.iter().partition(|(k, _)| k.as_str() == "profile");
            for (key, value) in first.into_iter().chain(rest) {
                let full = format!("{section}.{key}");
                cfg.set(&full, &scalar_text(&full, value)?)?;
            }
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::IoFailure {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Applies a `section.key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment.split_once('=').ok_or_else(|| {
            Error::ConfigParse(format!("override '{assignment}' is not key=value"))
        })?;
        self.set(k.trim(), v.trim())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "run.species" => {
                self.run.species = Species::parse(value)
                    .ok_or_else(|| bad(key, value, "expected ion or electron"))?
            }
            "run.seed" => self.run.seed = num(key, value)?,
            "run.threads" => self.run.threads = num(key, value)?,
            "params.t_plus" => self.params.t_plus = num(key, value)?,
            "params.t_minus" => self.params.t_minus = num(key, value)?,
            "params.m_plus" => self.params.m_plus = num(key, value)?,
            "params.m_minus" => self.params.m_minus = num(key, value)?,
            "params.e_charge" => self.params.e_charge = num(key, value)?,
            "params.coupling" => {
                let q: f64 = num(key, value)?;
                if !(q > 0.0) {
                    return Err(bad(key, value, "coupling must be positive"));
                }
                self.params.e_charge = charge_for_coupling(q);
            }
            "grid.k_max" => self.grid.k_max = num(key, value)?,
            "grid.xi_min" => self.grid.xi_min = num(key, value)?,
            "grid.xi_max" => self.grid.xi_max = num(key, value)?,
            "grid.n_xi" => self.grid.n_xi = num(key, value)?,
            "initial.profile" => self.initial.profile = Profile::by_name(value)?,
            "time.t_max" => self.time.t_max = num(key, value)?,
            "time.n_outputs" => self.time.n_outputs = num(key, value)?,
            "time.tol" => self.time.tol = num(key, value)?,
            "time.scheme" => {
                self.time.scheme = Scheme::parse(value)
                    .ok_or_else(|| bad(key, value, "expected magnus4 or rk4"))?
            }
            "verify.checks" => {
                self.verify.checks = if value.is_empty() {
                    Vec::new()
                } else {
                    value
                        .split(',')
                        .map(|c| Check::parse(c).ok_or_else(|| bad(key, c, "unknown check")))
                        .collect::<Result<_>>()?
                }
            }
            "verify.fit_start" => self.verify.fit_start = num(key, value)?,
            "verify.lemma_modes" => self.verify.lemma_modes = num(key, value)?,
            "verify.lemma_t_max" => self.verify.lemma_t_max = num(key, value)?,
            "verify.lemma_k_max" => self.verify.lemma_k_max = num(key, value)?,
            "verify.lemma_xi_max" => self.verify.lemma_xi_max = num(key, value)?,
            "output.dir" => self.output.dir = PathBuf::from(value),
            "output.mode_xi_stride" => self.output.mode_xi_stride = num(key, value)?,
            "output.mode_t_stride" => self.output.mode_t_stride = num(key, value)?,
            _ if key.starts_with("initial.") => {
                self.set_profile_key(&key["initial.".len()..], key, value)?
            }
            _ => return Err(bad(key, value, "unknown key")),
        }
        Ok(())
    }

    fn set_profile_key(&mut self, field: &str, key: &str, value: &str) -> Result<()> {
        let name = self.initial.profile.name();
        let inapplicable = || bad(key, value, &format!("not a parameter of profile {name}"));
        match &mut self.initial.profile {
            Profile::GaussianBump {
                amplitude,
                width,
                center,
                decay,
                cutoff,
                field_scale,
            } => match field {
                "amplitude" => *amplitude = num(key, value)?,
                "width" => *width = num(key, value)?,
                "center" => *center = num(key, value)?,
                "decay" => *decay = num(key, value)?,
                "cutoff" => *cutoff = num(key, value)?,
                "scale_eta" => field_scale[0] = num(key, value)?,
                "scale_psi" => field_scale[1] = num(key, value)?,
                "scale_omega" => field_scale[2] = num(key, value)?,
                _ => return Err(inapplicable()),
            },
            Profile::SingleMode {
                k,
                xi0,
                amplitude,
                field: f,
            } => match field {
                "k" => *k = num(key, value)?,
                "xi0" => *xi0 = num(key, value)?,
                "amplitude" => *amplitude = num(key, value)?,
                "field" => {
                    *f = Field::parse(value)
                        .ok_or_else(|| bad(key, value, "expected eta, psi or omega"))?
                }
                _ => return Err(inapplicable()),
            },
            Profile::RandomBand {
                amplitude,
                band,
                decay,
                real,
            } => match field {
                "amplitude" => *amplitude = num(key, value)?,
                "band" => *band = num(key, value)?,
                "decay" => *decay = num(key, value)?,
                "real" => *real = boolean(key, value)?,
                _ => return Err(inapplicable()),
            },
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.time;
        if !(t.t_max > 0.0) || !t.t_max.is_finite() {
            return Err(Error::ConfigParse(format!(
                "time.t_max must be positive, got {}",
                t.t_max
            )));
        }
        if t.n_outputs < 2 {
            return Err(Error::ConfigParse(format!(
                "time.n_outputs must be at least 2, got {}",
                t.n_outputs
            )));
        }
        if !(t.tol > 0.0 && t.tol <= 1e-2) {
            return Err(Error::ConfigParse(format!(
                "time.tol must lie in (0, 1e-2], got {}",
                t.tol
            )));
        }
        if self.output.mode_t_stride == 0 {
            return Err(Error::ConfigParse(
                "output.mode_t_stride must be at least 1".into(),
            ));
        }
        self.plasma_params()?;
        self.frequency_grid()?;
        Ok(())
    }

    pub fn plasma_params(&self) -> Result<PlasmaParams> {
        let p = &self.params;
        PlasmaParams::new(
            self.run.species,
            p.t_plus,
            p.t_minus,
            p.m_plus,
            p.m_minus,
            p.e_charge,
        )
    }

    pub fn frequency_grid(&self) -> Result<FrequencyGrid> {
        let g = &self.grid;
        FrequencyGrid::new(g.k_max, g.xi_min, g.xi_max, g.n_xi)
    }

    pub fn initial_spec(&self) -> Result<InitialSpec> {
        make_initial(
            &self.frequency_grid()?,
            &self.initial.profile,
            self.run.seed,
        )
    }

    pub fn integrator(&self) -> IntegratorOptions {
        IntegratorOptions::new(self.time.tol).with_scheme(self.time.scheme)
    }

    pub fn times(&self) -> Result<Vec<f64>> {
        uniform_times(self.time.t_max, self.time.n_outputs)
    }
}

/// Thread count from, in order: an explicit value, the environment, the
/// configuration. 0 means the rayon default.
pub fn resolve_threads(explicit: Option<usize>, config: usize) -> Result<usize> {
    if let Some(n) = explicit {
        return Ok(n);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map_err(|_| Error::ConfigParse(format!("{THREADS_ENV} = {v}: not a thread count"))),
        _ => Ok(config),
    }
}

fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool construction")
        .install(f)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::IoFailure {
        path: path.display().to_string(),
        source,
    }
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| Error::IoFailure {
        path: path.display().to_string(),
        source: e.into(),
    }
}

fn prepare_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

/// Full-precision scientific notation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_csv(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(csv_err(path))?;
    w.write_record(header).map_err(csv_err(path))?;
    for row in rows {
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(io_err(path))
}

pub const NORMS_HEADER: [&str; 9] = [
    "t",
    "pux",
    "puy",
    "qu",
    "eta",
    "phi",
    "sym_weighted",
    "energy_ratio_min",
    "energy_ratio_max",
];

pub const MODES_HEADER: [&str; 6] = ["k", "xi", "t", "abs_c1", "abs_c2", "energy"];

#[derive(Debug, Clone, Serialize)]
struct Meta<'a> {
    package: &'static str,
    version: &'static str,
    command: &'static str,
    config: &'a RunConfig,
    threads: usize,
    wall_time_s: f64,
    active_modes: usize,
    accepted_steps: u64,
    rejected_steps: u64,
    max_det_error: f64,
    max_conservation_residual: f64,
    max_quadrature_residual: f64,
    max_identity_defect: f64,
}

/// Outcome of [`cmd_simulate`].
#[derive(Debug, Clone)]
pub struct SimulateSummary {
    pub output: SimulationOutput,
    pub files: Vec<PathBuf>,
    pub wall_time_s: f64,
}

fn run_simulation(
    cfg: &RunConfig,
    threads: usize,
    stride: SampleStride,
) -> Result<(InitialSpec, PlasmaParams, SimulationOutput)> {
    cfg.validate()?;
    let params = cfg.plasma_params()?;
    let spec = cfg.initial_spec()?;
    let times = cfg.times()?;
    let opts = cfg.integrator();
    let out = with_pool(threads, || simulate(&spec, &params, &times, &opts, stride))?;
    Ok((spec, params, out))
}

/// Writes `norms.csv`, `modes.csv` and `meta.json` into `cfg.output.dir`.
pub fn cmd_simulate(cfg: &RunConfig, threads: usize) -> Result<SimulateSummary> {
    let start = Instant::now();
    let dir = cfg.output.dir.clone();
    prepare_dir(&dir)?;
    let stride = SampleStride {
        xi_stride: cfg.output.mode_xi_stride,
        t_stride: cfg.output.mode_t_stride,
    };
    let (_, params, out) = run_simulation(cfg, threads, stride)?;
    let s = &out.series;

    let norms = dir.join("norms.csv");
    write_csv(
        &norms,
        &NORMS_HEADER,
        (0..s.len()).map(|i| {
            [
                s.times[i],
                s.pux[i],
                s.puy[i],
                s.qu[i],
                s.eta[i],
                s.phi[i],
                s.sym_weighted[i],
                s.energy_ratio_min[i],
                s.energy_ratio_max[i],
            ]
            .into_iter()
            .map(fmt_f64)
            .collect()
        }),
    )?;

    let modes = dir.join("modes.csv");
    write_csv(
        &modes,
        &MODES_HEADER,
        out.samples.iter().map(|m| {
            vec![
                m.k.to_string(),
                fmt_f64(m.xi),
                fmt_f64(m.t),
                fmt_f64(m.abs_c1),
                fmt_f64(m.abs_c2),
                fmt_f64(m.energy),
            ]
        }),
    )?;

    let wall = start.elapsed().as_secs_f64();
    let meta_path = dir.join("meta.json");
    let max = |v: &[f64]| v.iter().copied().fold(0.0f64, f64::max);
    write_json(
        &meta_path,
        &Meta {
            package: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: "simulate",
            config: cfg,
            threads,
            wall_time_s: wall,
            active_modes: out.active_modes,
            accepted_steps: out.accepted_steps,
            rejected_steps: out.rejected_steps,
            max_det_error: out.max_det_error,
            max_conservation_residual: max(&out.conservation_residual),
            max_quadrature_residual: max(&out.quadrature_residual),
            max_identity_defect: max(&s.identity_defect(&params)),
        },
    )?;
    Ok(SimulateSummary {
        output: out,
        files: vec![norms, modes, meta_path],
        wall_time_s: wall,
    })
}

/// Report names produced by a check, in output order.
pub fn report_names(check: Check) -> Vec<&'static str> {
    match check {
        Check::LemmaEnergy => vec![
            "lemma_energy_gronwall",
            "lemma_energy_tv_h_gamma",
            "lemma_energy_tv_log_lambda",
            "lemma_energy_h_gamma",
        ],
        other => vec![other.as_str()],
    }
}

/// Runs the configured checks. Errors inside a check become failing
/// records; configuration errors are returned.
pub fn run_checks(cfg: &RunConfig, threads: usize) -> Result<Vec<VerificationReport>> {
    cfg.validate()?;
    let params = cfg.plasma_params()?;
    let species = params.species();
    let t_max = cfg.time.t_max;
    let needs_series = cfg.verify.checks.iter().any(|c| *c != Check::LemmaEnergy);
    let sim = if needs_series {
        Some(run_simulation(cfg, threads, SampleStride::NONE))
    } else {
        None
    };

    let mut reports = Vec::new();
    for &check in &cfg.verify.checks {
        if check == Check::LemmaEnergy {
            let sample = LemmaSample::random(
                cfg.verify.lemma_modes,
                cfg.verify.lemma_k_max,
                cfg.verify.lemma_xi_max,
                cfg.verify.lemma_t_max,
                cfg.run.seed,
            );
            let opts = cfg.integrator();
            match with_pool(threads, || check_lemma_energy(&sample, &params, &opts)) {
                Ok(r) => reports.extend(r),
                Err(e) => {
                    for name in report_names(check) {
                        reports.push(VerificationReport::from_error(
                            name,
                            species,
                            cfg.verify.lemma_t_max,
                            &e,
                        ));
                    }
                }
            }
            continue;
        }
        let result = match sim.as_ref().expect("series computed") {
            Err(e) => Err(Error::ConfigParse(format!("simulation failed: {e}"))),
            Ok((spec, p, out)) => {
                let s = &out.series;
                let fit = cfg.verify.fit_start;
                match check {
                    Check::UpperPxPhi => check_upper_px_phi(s, spec, p, fit),
                    Check::UpperPy => check_upper_py(s, spec, p, fit),
                    Check::UpperGrowth => check_upper_growth(s, spec, p, fit),
                    Check::LowerGrowth => check_lower_growth(s, spec, p),
                    Check::LemmaEnergy => unreachable!(),
                }
            }
        };
        match result {
            Ok(r) => reports.push(r),
            Err(e) => reports.push(VerificationReport::from_error(
                check.as_str(),
                species,
                t_max,
                &e,
            )),
        }
    }
    Ok(reports)
}

/// True when every non-degenerate report passes.
pub fn all_pass(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.pass || r.degenerate)
}

#[derive(Debug, Clone)]
pub struct VerifySummary {
    pub reports: Vec<VerificationReport>,
    pub success: bool,
    pub path: PathBuf,
}

/// Writes `report.json` (an array of report objects).
pub fn cmd_verify(cfg: &RunConfig, threads: usize) -> Result<VerifySummary> {
    prepare_dir(&cfg.output.dir)?;
    let reports = run_checks(cfg, threads)?;
    let path = cfg.output.dir.join("report.json");
    write_json(&path, &reports)?;
    Ok(VerifySummary {
        success: all_pass(&reports),
        reports,
        path,
    })
}

pub const SWEEP_AXES: [&str; 6] = ["t_plus", "t_minus", "m_plus", "m_minus", "e_charge", "seed"];

fn axis_key(axis: &str) -> Result<&'static str> {
    match axis {
        "t_plus" => Ok("params.t_plus"),
        "t_minus" => Ok("params.t_minus"),
        "m_plus" => Ok("params.m_plus"),
        "m_minus" => Ok("params.m_minus"),
        "e_charge" => Ok("params.e_charge"),
        "seed" => Ok("run.seed"),
        other => Err(Error::UnknownAxis(other.to_string())),
    }
}

/// Header of `sweep.csv` for a check list.
pub fn sweep_header(axis: &str, checks: &[Check]) -> Vec<String> {
    let mut h = vec![axis.to_string(), "all_pass".to_string()];
    for &c in checks {
        for name in report_names(c) {
            for col in ["pass", "margin", "observed", "slope"] {
                h.push(format!("{name}_{col}"));
            }
        }
    }
    h
}

/// Parses a comma-separated value list.
pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| Error::ConfigParse(format!("sweep value '{s}' is not a number")))
        })
        .collect()
}

/// One verification per value, rows sorted by value, written to `sweep.csv`.
pub fn cmd_sweep(cfg: &RunConfig, axis: &str, values: &[f64], threads: usize) -> Result<PathBuf> {
    let key = axis_key(axis)?;
    prepare_dir(&cfg.output.dir)?;
    let mut sorted = values.to_vec();
    if sorted.iter().any(|v| !v.is_finite()) {
        return Err(Error::ConfigParse("sweep values must be finite".into()));
    }
    sorted.sort_by(f64::total_cmp);

    let mut rows = Vec::with_capacity(sorted.len());
    for &v in &sorted {
        let mut c = cfg.clone();
        let text = if axis == "seed" {
            if v < 0.0 || v.fract() != 0.0 {
                return Err(Error::ConfigParse(format!(
                    "seed value {v} is not a nonnegative integer"
                )));
            }
            format!("{}", v as u64)
        } else {
            format!("{v:e}")
        };
        c.set(key, &text)?;
        let reports = run_checks(&c, threads)?;
        let mut row = vec![text, all_pass(&reports).to_string()];
        for r in &reports {
            row.push(r.pass.to_string());
            row.push(fmt_f64(r.margin));
            row.push(fmt_f64(r.observed));
            row.push(r.slope.map(fmt_f64).unwrap_or_default());
        }
        rows.push(row);
    }
    let path = cfg.output.dir.join("sweep.csv");
    let header = sweep_header(axis, &cfg.verify.checks);
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv(&path, &header, rows.into_iter())?;
    Ok(path)
}
