//! Command-line front end: argument parsing, dispatch, CSV/JSON output and
//! the verification suites.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classical_walk::{
    brute_force_markov, eigenvalues, spectral_transition, weights_for, WalkKind, WalkWeights,
};
use crate::error::{QwError, Result};
use crate::hamming_scheme::{HammingParams, KrawtchoukTable};
use crate::limit_distributions::{
    cesaro_average, identity_suite, limit_closed_n2, limit_example, LimitExample,
    TimeAveragedDistribution,
};
use crate::quantum_walk_engine::{
    fourier_forward, fourier_inverse, fourier_step, initial_state, mode_unitary_eigencheck,
    step_bruteforce, wave_from_table, EnginePath, Walk,
};
use crate::unit_circle_spectrum::{
    build_poly, rho_lower, roots, spectral_coefficients, ModeSpectrum,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum WalkName {
    Simple,
    Independent,
    Nonlocal,
    Mixture,
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PathArg {
    Auto,
    Bruteforce,
    Fourier,
    Spectral,
}

impl From<PathArg> for EnginePath {
    fn from(p: PathArg) -> Self {
        match p {
            PathArg::Auto => EnginePath::Auto,
            PathArg::Bruteforce => EnginePath::Bruteforce,
            PathArg::Fourier => EnginePath::Fourier,
            PathArg::Spectral => EnginePath::Spectral,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Oracle,
    Spectrum,
    Limits,
    All,
}

#[derive(Parser, Debug)]
#[command(
    name = "qwalk",
    version,
    about = "Coined quantum walks on Hamming graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Distance law of the classical random walk after t steps.
    Classical {
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long, default_value_t = 1)]
        t: usize,
        /// Print the Krawtchouk table instead.
        #[arg(long)]
        table: bool,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Class probabilities of the quantum walk for t = 0..=T.
    Quantum {
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long, default_value_t = 10)]
        t: usize,
        /// Emit the full wave vector at the final time instead.
        #[arg(long)]
        wave: bool,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Time-averaged limit distribution.
    Limit {
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long = "T", default_value_t = 2000)]
        horizon: usize,
        /// Evaluate the closed form instead of averaging.
        #[arg(long)]
        closed_form: bool,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Zeros and coefficients of every mode polynomial.
    Spectrum {
        #[command(flatten)]
        walk: WalkArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long = "T", default_value_t = 2000)]
        horizon: usize,
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct WalkArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = WalkName::Simple)]
    pub walk: WalkName,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Mixture parameter, alias for --alpha.
    #[arg(long)]
    pub r: Option<f64>,
    /// One nonnegative weight per line, d+1 lines.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = PathArg::Auto)]
    pub path: PathArg,
}

#[derive(Args, Debug, Clone)]
pub struct IoArgs {
    #[arg(long, value_enum)]
    pub output: Option<OutputFormat>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Classical,
    Quantum,
    Limit,
    Spectrum,
    Verify,
}

/// A fully resolved run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub d: usize,
    pub n: usize,
    pub walk: WalkKind,
    pub t: Option<usize>,
    pub horizon: Option<usize>,
    pub path: EnginePath,
    pub output: OutputFormat,
    #[serde(default)]
    pub closed_form: bool,
    #[serde(default)]
    pub table: bool,
    #[serde(default)]
    pub wave: bool,
    pub suite: Option<Suite>,
    pub out: Option<PathBuf>,
}

/// Rendered output and exit status.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub body: String,
}

fn read_weights(path: &PathBuf) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.parse::<f64>()
                .map_err(|_| QwError::InvalidWeights(format!("cannot parse '{l}' as a number")))
        })
        .collect()
}

impl WalkArgs {
    fn kind(&self) -> Result<WalkKind> {
        Ok(match self.walk {
            WalkName::Simple => WalkKind::Simple,
            WalkName::Independent => WalkKind::Independent,
            WalkName::Nonlocal => WalkKind::NonLocal {
                m: self
                    .m
                    .ok_or_else(|| QwError::InvalidParams("--walk nonlocal needs --m".into()))?,
            },
            WalkName::Mixture => WalkKind::Mixture {
                alpha: self.alpha.or(self.r).ok_or_else(|| {
                    QwError::InvalidParams("--walk mixture needs --alpha or --r".into())
                })?,
            },
            WalkName::Custom => {
                let file = self.weights.as_ref().ok_or_else(|| {
                    QwError::InvalidParams("--walk custom needs --weights FILE".into())
                })?;
                WalkKind::Custom {
                    weights: read_weights(file)?,
                }
            }
        })
    }
}

impl RunConfig {
    fn base(
        mode: Mode,
        walk: &WalkArgs,
        io: &IoArgs,
        default_output: OutputFormat,
    ) -> Result<Self> {
        let config = Self {
            mode,
            d: walk.d,
            n: walk.n,
            walk: walk.kind()?,
            t: None,
            horizon: None,
            path: walk.path.into(),
            output: io.output.unwrap_or(default_output),
            closed_form: false,
            table: false,
            wave: false,
            suite: None,
            out: io.out.clone(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn from_cli(cli: &Cli) -> Result<Self> {
        Ok(match &cli.command {
            Command::Classical { walk, t, table, io } => Self {
                t: Some(*t),
                table: *table,
                ..Self::base(Mode::Classical, walk, io, OutputFormat::Csv)?
            },
            Command::Quantum { walk, t, wave, io } => Self {
                t: Some(*t),
                wave: *wave,
                ..Self::base(Mode::Quantum, walk, io, OutputFormat::Csv)?
            },
            Command::Limit {
                walk,
                horizon,
                closed_form,
                io,
            } => Self {
                horizon: Some(*horizon),
                closed_form: *closed_form,
                ..Self::base(Mode::Limit, walk, io, OutputFormat::Csv)?
            },
            Command::Spectrum { walk, io } => {
                Self::base(Mode::Spectrum, walk, io, OutputFormat::Json)?
            }
            Command::Verify { suite, horizon, io } => Self {
                mode: Mode::Verify,
                d: 0,
                n: 0,
                walk: WalkKind::Simple,
                t: None,
                horizon: Some(*horizon),
                path: EnginePath::Auto,
                output: io.output.unwrap_or(OutputFormat::Json),
                closed_form: false,
                table: false,
                wave: false,
                suite: Some(*suite),
                out: io.out.clone(),
            },
        })
    }

    pub fn params(&self) -> Result<HammingParams> {
        HammingParams::new(self.d, self.n)
    }

    pub fn weights(&self) -> Result<WalkWeights> {
        weights_for(&self.walk, self.params()?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.mode != Mode::Verify {
            self.weights()?;
        }
        if self.horizon == Some(0) {
            return Err(QwError::InvalidParams("--T must be at least 1".into()));
        }
        Ok(())
    }
}

/// Rounds to 15 significant digits and prints the shortest form.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.14e}").parse().unwrap_or(x);
    let mag = rounded.abs();
    if mag != 0.0 && !(1e-5..1e15).contains(&mag) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

fn num(x: f64) -> Value {
    let rounded: f64 = format!("{x:.14e}").parse().unwrap_or(x);
    json!(rounded)
}

fn complex_pair(z: num_complex::Complex64) -> Value {
    json!([num(z.re), num(z.im)])
}

/// Rows of cells rendered either as CSV (with `#` metadata lines) or JSON.
struct Table {
    meta: Vec<(String, Value)>,
    header: Vec<String>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self {
            meta: Vec::new(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn meta(&mut self, key: &str, value: Value) {
        self.meta.push((key.to_string(), value));
    }

    fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => {
                let mut out = String::new();
                for (k, v) in &self.meta {
                    let v = match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    let _ = writeln!(out, "# {k}={v}");
                }
                let _ = writeln!(out, "{}", self.header.join(","));
                for row in &self.rows {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|c| match c {
                            Value::String(s) => s.clone(),
                            Value::Number(n) => {
                                n.as_f64().map(fmt_num).unwrap_or_else(|| n.to_string())
                            }
                            other => other.to_string(),
                        })
                        .collect();
                    let _ = writeln!(out, "{}", cells.join(","));
                }
                out
            }
            OutputFormat::Json => {
                let meta: serde_json::Map<String, Value> = self.meta.iter().cloned().collect();
                let records: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        Value::Object(
                            self.header
                                .iter()
                                .cloned()
                                .zip(row.iter().cloned())
                                .collect(),
                        )
                    })
                    .collect();
                let mut s =
                    serde_json::to_string_pretty(&json!({ "meta": meta, "records": records }))
                        .expect("json values always serialize");
                s.push('\n');
                s
            }
        }
    }
}

/// Executes a configuration and renders its output. Writing to `--out` is
/// left to [`execute`].
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    config.validate()?;
    match config.mode {
        Mode::Classical => run_classical(config),
        Mode::Quantum => run_quantum(config),
        Mode::Limit => run_limit(config),
        Mode::Spectrum => run_spectrum(config),
        Mode::Verify => {
            let report = verify(
                config.suite.unwrap_or(Suite::All),
                config.horizon.unwrap_or(2000),
            )?;
            Ok(RunOutcome {
                exit_code: if report.passed() { 0 } else { 1 },
                body: report.render(config.output),
            })
        }
    }
}

fn ok(body: String) -> Result<RunOutcome> {
    Ok(RunOutcome { exit_code: 0, body })
}

fn walk_meta(table: &mut Table, config: &RunConfig) {
    table.meta("d", json!(config.d));
    table.meta("n", json!(config.n));
    table.meta("walk", json!(config.walk.name()));
}

fn run_classical(config: &RunConfig) -> Result<RunOutcome> {
    let params = config.params()?;
    let weights = config.weights()?;
    let ktable = KrawtchoukTable::new(params)?;
    let d = params.d();
    if config.table {
        let mut header = vec!["i".to_string(), "kappa_i".to_string()];
        header.extend((0..=d).map(|j| format!("K_i({j})")));
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        let mut out = Table::new(&header);
        walk_meta(&mut out, config);
        for i in 0..=d {
            let mut row = vec![json!(i), json!(ktable.kappa(i) as f64)];
            row.extend((0..=d).map(|j| json!(ktable.k(i, j) as f64)));
            out.rows.push(row);
        }
        return ok(out.render(config.output));
    }
    let t = config.t.unwrap_or(1);
    let spec = eigenvalues(&weights, &ktable);
    let (dist, taken) = match config.path {
        EnginePath::Bruteforce => (brute_force_markov(&weights, t)?, "bruteforce"),
        _ => (spectral_transition(&spec, t, &ktable), "spectral"),
    };
    let mut out = Table::new(&["h", "kappa_h", "P_t_per_vertex", "P_t_class_mass"]);
    walk_meta(&mut out, config);
    out.meta("t", json!(t));
    out.meta("path", json!(taken));
    out.meta("periodic", json!(spec.is_periodic()));
    out.meta("reducible", json!(spec.is_reducible()));
    out.meta(
        "rho",
        Value::Array(spec.rho().iter().map(|&r| num(r)).collect()),
    );
    for h in 0..=d {
        out.rows.push(vec![
            json!(h),
            json!(dist.kappa[h] as f64),
            num(dist.per_vertex[h]),
            num(dist.class_mass(h)),
        ]);
    }
    ok(out.render(config.output))
}

fn run_quantum(config: &RunConfig) -> Result<RunOutcome> {
    let walk = Walk::new(config.weights()?)?;
    let t_max = config.t.unwrap_or(10);
    let d = walk.params().d();
    if config.wave {
        let (wave, report) = walk.wave_vector(t_max, config.path)?;
        let mut out = Table::new(&["y", "x", "re", "im"]);
        walk_meta(&mut out, config);
        out.meta("t", json!(t_max));
        out.meta("path", json!(report.taken.name()));
        if let Some(f) = &report.fallback {
            out.meta("fallback", json!(f));
        }
        for y in 0..wave.size {
            for x in 0..wave.size {
                let z = wave.get(y, x);
                out.rows
                    .push(vec![json!(y), json!(x), num(z.re), num(z.im)]);
            }
        }
        return ok(out.render(config.output));
    }
    let kappa: Vec<f64> = walk.table().kappas().iter().map(|&k| k as f64).collect();
    let mut header = vec!["t".to_string()];
    header.extend((0..=d).map(|h| format!("P_class_{h}")));
    header.push("total".to_string());
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut out = Table::new(&header);
    let mut rows = Vec::new();
    let report = walk.class_trajectory(t_max, config.path, |t, p| {
        let masses: Vec<f64> = p.iter().zip(&kappa).map(|(v, k)| v * k).collect();
        let mut row = vec![json!(t)];
        row.extend(masses.iter().map(|&m| num(m)));
        row.push(num(masses.iter().sum()));
        rows.push(row);
    })?;
    walk_meta(&mut out, config);
    out.meta("path", json!(report.taken.name()));
    if let Some(f) = &report.fallback {
        out.meta("fallback", json!(f));
    }
    out.rows = rows;
    ok(out.render(config.output))
}

/// Closed form for a walk: the named example if one matches, else the
/// generic n = 2 formula.
pub fn closed_form_for(config: &RunConfig, walk: &Walk) -> Result<TimeAveragedDistribution> {
    match LimitExample::for_walk(&config.walk, config.d, config.n) {
        Some(example) => limit_example(&example),
        None => limit_closed_n2(walk).map(|(dist, _)| dist),
    }
}

fn run_limit(config: &RunConfig) -> Result<RunOutcome> {
    let walk = Walk::new(config.weights()?)?;
    let (dist, report) = if config.closed_form {
        (closed_form_for(config, &walk)?, None)
    } else {
        let (dist, report) = cesaro_average(&walk, config.horizon.unwrap_or(2000), config.path)?;
        (dist, Some(report))
    };
    let provenance = dist.provenance.label();
    let mut out = Table::new(&["h", "class_mass", "per_vertex_mass", "provenance"]);
    walk_meta(&mut out, config);
    if let Some(r) = report {
        out.meta("path", json!(r.taken.name()));
        if let Some(f) = r.fallback {
            out.meta("fallback", json!(f));
        }
    }
    for h in 0..=config.d {
        out.rows.push(vec![
            json!(h),
            num(dist.class_mass(h)),
            num(dist.per_vertex[h]),
            json!(provenance),
        ]);
    }
    ok(out.render(config.output))
}

fn spectrum_json(spec: &ModeSpectrum) -> Value {
    json!({
        "j": spec.j,
        "rho": num(spec.rho),
        "mu": spec.mu.iter().map(|&z| complex_pair(z)).collect::<Vec<_>>(),
        "theta": spec.theta.iter().map(|&t| num(t)).collect::<Vec<_>>(),
        "c": spec.c.iter().map(|&z| complex_pair(z)).collect::<Vec<_>>(),
        "degenerate": spec.degenerate,
    })
}

fn run_spectrum(config: &RunConfig) -> Result<RunOutcome> {
    let walk = Walk::new(config.weights()?)?;
    let modes = walk.mode_spectra()?;
    match config.output {
        OutputFormat::Json => {
            let body = json!({
                "d": config.d,
                "n": config.n,
                "walk": config.walk.name(),
                "modes": modes.iter().map(spectrum_json).collect::<Vec<_>>(),
            });
            ok(serde_json::to_string_pretty(&body)? + "\n")
        }
        OutputFormat::Csv => {
            let mut out = Table::new(&[
                "j",
                "i",
                "rho",
                "mu_re",
                "mu_im",
                "theta",
                "c_re",
                "c_im",
                "degenerate",
            ]);
            walk_meta(&mut out, config);
            for spec in &modes {
                for i in 0..spec.n() {
                    let c = spec.c.get(i).copied();
                    out.rows.push(vec![
                        json!(spec.j),
                        json!(i),
                        num(spec.rho),
                        num(spec.mu[i].re),
                        num(spec.mu[i].im),
                        num(spec.theta[i]),
                        c.map(|z| num(z.re)).unwrap_or(json!("")),
                        c.map(|z| num(z.im)).unwrap_or(json!("")),
                        json!(spec.degenerate.to_string()),
                    ]);
                }
            }
            ok(out.render(config.output))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyItem {
    pub suite: String,
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub items: Vec<VerifyItem>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    fn push(&mut self, suite: &str, name: String, residual: f64, tolerance: f64) {
        self.items.push(VerifyItem {
            suite: suite.to_string(),
            name,
            passed: residual <= tolerance,
            residual,
            tolerance,
        });
    }

    pub fn render(&self, format: OutputFormat) -> String {
        let mut out = Table::new(&["suite", "name", "passed", "residual", "tolerance"]);
        out.meta("passed", json!(self.passed()));
        for i in &self.items {
            out.rows.push(vec![
                json!(i.suite),
                json!(i.name),
                json!(i.passed.to_string()),
                num(i.residual),
                num(i.tolerance),
            ]);
        }
        out.render(format)
    }
}

pub fn verify(suite: Suite, horizon: usize) -> Result<VerifyReport> {
    let mut report = VerifyReport { items: Vec::new() };
    let all = suite == Suite::All;
    if all || suite == Suite::Identities {
        for check in identity_suite()?.checks {
            let residual = if check.passed() {
                check.max_residual
            } else {
                f64::INFINITY
            };
            let tol = if check.exact { 0.0 } else { 1e-12 };
            report.push(
                "identities",
                format!("{} ({} cases)", check.name, check.cases),
                residual,
                tol,
            );
        }
    }
    if all || suite == Suite::Oracle {
        verify_oracle(&mut report)?;
    }
    if all || suite == Suite::Spectrum {
        verify_spectrum(&mut report)?;
    }
    if all || suite == Suite::Limits {
        verify_limits(&mut report, horizon)?;
    }
    Ok(report)
}

const ORACLE_STEPS: usize = 30;

fn oracle_cases() -> Vec<(usize, usize, WalkKind)> {
    vec![
        (3, 2, WalkKind::Simple),
        (3, 2, WalkKind::NonLocal { m: 2 }),
        (3, 2, WalkKind::Mixture { alpha: 0.3 }),
        (2, 3, WalkKind::Simple),
        (2, 3, WalkKind::Mixture { alpha: 0.3 }),
        (2, 5, WalkKind::Independent),
    ]
}

fn verify_oracle(report: &mut VerifyReport) -> Result<()> {
    for (d, n, kind) in oracle_cases() {
        let walk = Walk::from_kind(&kind, HammingParams::new(d, n)?)?;
        let mut brute = initial_state(&walk);
        let mut fourier = fourier_forward(&walk, &brute)?;
        let mut worst_fourier: f64 = 0.0;
        let mut worst_closed: f64 = 0.0;
        let mut closed_available = true;
        for t in 0..=ORACLE_STEPS {
            if t > 0 {
                brute = step_bruteforce(&walk, &brute)?;
                fourier = fourier_step(&walk, &fourier);
            }
            worst_fourier =
                worst_fourier.max(fourier_inverse(&walk, &fourier)?.max_abs_diff(&brute));
            match walk.spectral_table(t) {
                Ok(table) => {
                    worst_closed =
                        worst_closed.max(wave_from_table(&walk, &table).max_abs_diff(&brute))
                }
                Err(_) => closed_available = false,
            }
        }
        let label = format!("d={d} n={n} {}", kind.name());
        report.push("oracle", format!("{label} fourier"), worst_fourier, 1e-9);
        if closed_available {
            report.push("oracle", format!("{label} closed_form"), worst_closed, 1e-9);
        }
    }
    Ok(())
}

fn verify_spectrum(report: &mut VerifyReport) -> Result<()> {
    const GRID: usize = 400;
    for n in [2usize, 3, 5, 7, 11] {
        let lower = rho_lower(n);
        let mut worst_unit: f64 = 0.0;
        let mut worst_coeff: f64 = 0.0;
        for i in 0..=GRID {
            let rho = lower + (1.0 - lower) * i as f64 / GRID as f64;
            let poly = build_poly(rho, n)?;
            let zs = roots(&poly)?;
            for z in &zs {
                worst_unit = worst_unit.max((poly.eval(*z)).norm());
            }
            if i > 0 && i < GRID {
                let c = spectral_coefficients(&zs, rho, n)?;
                let sum: num_complex::Complex64 = c.iter().sum();
                worst_coeff = worst_coeff.max((sum - 1.0).norm());
            }
        }
        report.push(
            "spectrum",
            format!("n={n} roots are zeros on the unit circle"),
            worst_unit,
            1e-9,
        );
        report.push(
            "spectrum",
            format!("n={n} coefficients sum to one"),
            worst_coeff,
            1e-9,
        );
    }
    for (d, n) in [(2usize, 2usize), (3, 2), (2, 3)] {
        let walk = Walk::from_kind(&WalkKind::Simple, HammingParams::new(d, n)?)?;
        let mut worst: f64 = 0.0;
        for xi in walk.space().class_representatives() {
            worst = worst.max(mode_unitary_eigencheck(&walk, xi)?.max_gap);
        }
        report.push(
            "spectrum",
            format!("d={d} n={n} mode polynomial zeros are eigenvalues"),
            worst,
            1e-8,
        );
    }
    Ok(())
}

/// Examples checked by the limits suite.
pub fn limit_suite_examples() -> Vec<LimitExample> {
    vec![
        LimitExample::SimpleN2 { d: 4 },
        LimitExample::IndependentN2 { d: 2 },
        LimitExample::Nonlocal2N2 { d: 3 },
        LimitExample::MixtureN2 { d: 3, r: 0.3 },
        LimitExample::IndependentGeneral { d: 2, n: 3 },
        LimitExample::SimpleN3 { d: 3 },
    ]
}

fn verify_limits(report: &mut VerifyReport, horizon: usize) -> Result<()> {
    for example in limit_suite_examples() {
        let params = example.params()?;
        let walk = Walk::new(weights_for(&example.walk_kind(), params)?)?;
        let closed = limit_example(&example)?;
        let (avg, _) = cesaro_average(&walk, horizon, EnginePath::Auto)?;
        report.push(
            "limits",
            format!("{} d={} n={}", example.name(), params.d(), params.n()),
            closed.max_abs_diff(&avg),
            5e-3,
        );
    }
    Ok(())
}

/// Runs a configuration and writes the body to `--out` or stdout.
pub fn execute(config: &RunConfig) -> Result<i32> {
    let outcome = run(config)?;
    match &config.out {
        Some(path) => std::fs::write(path, &outcome.body)?,
        None => print!("{}", outcome.body),
    }
    Ok(outcome.exit_code)
}

/// Entry point of the `qwalk` binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match RunConfig::from_cli(&cli).and_then(|c| execute(&c)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!(
                "{}",
                json!({ "error": e.to_string(), "exit_code": e.exit_code() })
            );
            e.exit_code()
        }
    }
}
