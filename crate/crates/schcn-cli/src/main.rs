//! Reproduction harness for the selective-combining hybrid relay network
//! analysis: threshold tables, the MIMO validation example, combiner CDF
//! dumps, Monte Carlo simulation, sweeps and comparison reports. All
//! output is CSV.

mod csvio;
mod errors;
mod report;
mod runner;
mod scenario;
mod sweep;

use clap::{Args, Parser, Subcommand, ValueEnum};
use csvio::fmt_f64;
use errors::AppError;
use schcn_core::analytic::{build_schcn_cdf, schcn_cdf_asymptotic};
use schcn_core::fer::{snr_threshold_prior, snr_threshold_proposed, ModulationSpec, ThresholdTable};
use schcn_core::sim::{CrcMode, PowerMode, SimConfig, SimMode};
use schcn_core::{db_to_linear, linear_to_db, mimo};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "schcn", version, about = "Selective-combining hybrid relay network analysis")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit SNR threshold tables (diversity-aware and prior models)
    Threshold(ThresholdArgs),
    /// MIMO validation example: exact FER, model FER and threshold gaps
    Mimo(MimoArgs),
    /// Dump the combiner-output CDF and its high-SNR asymptote
    Cdf(CdfArgs),
    /// Monte Carlo FER simulation over an SNR grid
    Sim(SimArgs),
    /// Sweep analytic and simulated FER curves over an SNR grid
    Sweep(SweepArgs),
    /// Compare curve CSVs: log10 gaps, fitted slopes, verdicts
    Report(ReportArgs),
}

#[derive(Args)]
struct ThresholdArgs {
    /// Diversity orders, comma separated
    #[arg(long, default_value = "1,2,3,4")]
    orders: String,
    /// Frame lengths, comma separated
    #[arg(long, default_value = "100,200,400")]
    frame_lens: String,
    /// Modulation constant (2 = BPSK)
    #[arg(long, default_value_t = 2.0)]
    c: f64,
    /// Append prior-model rows (marked d = 0)
    #[arg(long)]
    include_prior: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MimoArgs {
    /// Antenna configurations as NTxNR, comma separated
    #[arg(long, default_value = "1x1,1x2,1x4")]
    antennas: String,
    /// SNR grid in dB as start:stop:step
    #[arg(long, default_value = "10:40:5")]
    snr_db_range: String,
    #[arg(long, default_value_t = 100)]
    frame_len: u32,
    #[arg(long, default_value_t = 2.0)]
    c: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CdfArgs {
    /// Relay count
    #[arg(long)]
    n: u32,
    /// Combined relay count
    #[arg(long)]
    nc: u32,
    /// Direct-link rate λ₀
    #[arg(long)]
    lambda0: f64,
    /// Source-relay rate λ_sr
    #[arg(long)]
    lambda_sr: f64,
    /// Relay-destination rate λ_rd
    #[arg(long)]
    lambda_rd: f64,
    /// Linear SNR grid as start:stop:step
    #[arg(long, default_value = "0.1:10:0.1")]
    gamma_range: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct ScenarioArgs {
    /// Named case (case1, case2, case3) or a scenario file path
    #[arg(long, default_value = "case1")]
    scenario: String,
    /// Relay count (named cases only)
    #[arg(long, default_value_t = 3)]
    n: u32,
    /// Combined relay count; overrides the scenario file when given
    #[arg(long)]
    nc: Option<u32>,
    #[arg(long, value_enum, default_value_t = PowerArg::Total)]
    power: PowerArg,
    #[arg(long, default_value_t = 100)]
    frame_len: u32,
    #[arg(long, default_value_t = 2.0)]
    c: f64,
}

impl ScenarioArgs {
    fn resolve(&self) -> Result<schcn_core::sim::Scenario, AppError> {
        let spec = ModulationSpec::new(self.c, self.frame_len);
        let mut s = scenario::resolve(
            &self.scenario,
            self.n,
            self.nc.unwrap_or(self.n),
            self.power.into(),
            spec,
        )?;
        if let Some(nc) = self.nc {
            s.n_c = nc;
        }
        s.validate()?;
        Ok(s)
    }
}

#[derive(Args)]
struct SimArgs {
    #[command(flatten)]
    scn: ScenarioArgs,
    /// SNR grid in dB as start:stop:step
    #[arg(long, default_value = "0:30:2")]
    snr_db_range: String,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Defaults to $SCHCN_SEED, then 0
    #[arg(long, env = "SCHCN_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::SemiAnalytic)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = CrcArg::Bernoulli)]
    crc_mode: CrcArg,
    /// Importance-sampling tilt in dB (0 = plain sampling)
    #[arg(long, default_value_t = 0.0)]
    tilt_db: f64,
    /// Worker threads (0 = all cores)
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    scn: ScenarioArgs,
    /// SNR grid in dB as start:stop:step
    #[arg(long, default_value = "0:30:2")]
    snr_db_range: String,
    /// Curves to compute: closed_form, asymptotic, sim_semi, sim_bit
    #[arg(long, default_value = "closed_form,sim_semi")]
    outputs: String,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Defaults to $SCHCN_SEED, then 0
    #[arg(long, env = "SCHCN_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = CrcArg::Bernoulli)]
    crc_mode: CrcArg,
    #[arg(long, default_value_t = 0.0)]
    tilt_db: f64,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// Curve CSV files produced by `sweep`
    files: Vec<PathBuf>,
    /// Fail pairs whose |log10 gap| exceeds this
    #[arg(long)]
    gap_tol: Option<f64>,
    /// Slope-fit window in dB as start:stop
    #[arg(long, default_value = "25:35")]
    slope_window: String,
    /// Expected log10(FER) slope per decade of SNR
    #[arg(long)]
    expected_slope: Option<f64>,
    #[arg(long, default_value_t = 0.3)]
    slope_tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PowerArg {
    Total,
    Individual,
}

impl From<PowerArg> for PowerMode {
    fn from(p: PowerArg) -> Self {
        match p {
            PowerArg::Total => PowerMode::Total,
            PowerArg::Individual => PowerMode::Individual,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum ModeArg {
    SemiAnalytic,
    BitLevel,
}

impl From<ModeArg> for SimMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::SemiAnalytic => SimMode::SemiAnalytic,
            ModeArg::BitLevel => SimMode::BitLevel,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CrcArg {
    Threshold,
    Bernoulli,
    BitExact,
}

impl From<CrcArg> for CrcMode {
    fn from(c: CrcArg) -> Self {
        match c {
            CrcArg::Threshold => CrcMode::Threshold,
            CrcArg::Bernoulli => CrcMode::Bernoulli,
            CrcArg::BitExact => CrcMode::BitExact,
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.cmd {
        Cmd::Threshold(a) => cmd_threshold(a),
        Cmd::Mimo(a) => cmd_mimo(a),
        Cmd::Cdf(a) => cmd_cdf(a),
        Cmd::Sim(a) => cmd_sim(a),
        Cmd::Sweep(a) => cmd_sweep(a),
        Cmd::Report(a) => cmd_report(a),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, AppError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| AppError::Invalid(format!("bad {what}: {t}")))
        })
        .collect()
}

/// Parse `start:stop:step` into an inclusive, strictly increasing grid.
fn parse_range(s: &str) -> Result<Vec<f64>, AppError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(AppError::Invalid(format!("expected start:stop:step, got {s}")));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.parse()
                .map_err(|_| AppError::Invalid(format!("bad number in range: {p}")))
        })
        .collect::<Result<_, _>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if step.is_nan() || step <= 0.0 || stop < start {
        return Err(AppError::Invalid("range requires stop >= start and step > 0".into()));
    }
    let count = ((stop - start) / step + 1.0 + 1e-9).floor() as usize;
    Ok((0..count).map(|i| start + step * i as f64).collect())
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), AppError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_threshold(a: ThresholdArgs) -> Result<(), AppError> {
    let orders: Vec<u32> = parse_list(&a.orders, "diversity order")?;
    let frame_lens: Vec<u32> = parse_list(&a.frame_lens, "frame length")?;
    if orders.iter().any(|&d| d == 0 || d > 16) {
        return Err(AppError::Invalid("diversity orders must be in 1..=16".into()));
    }
    let mut table = ThresholdTable::proposed(&orders, &frame_lens, a.c)?;
    if a.include_prior {
        let prior = ThresholdTable::prior(&frame_lens, a.c)?;
        table.entries.extend(prior.entries);
    }
    let mut text = String::from("d,L,c,gamma_t_linear,gamma_t_db\n");
    for e in &table.entries {
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            e.d,
            e.frame_len,
            fmt_f64(e.c),
            fmt_f64(e.gamma_t),
            fmt_f64(e.gamma_t_db)
        ));
    }
    write_out(&a.out, &text)
}

fn cmd_mimo(a: MimoArgs) -> Result<(), AppError> {
    let grid = parse_range(&a.snr_db_range)?;
    let antennas: Vec<(u32, u32)> = a
        .antennas
        .split(',')
        .map(|t| {
            let (nt, nr) = t
                .trim()
                .split_once('x')
                .ok_or_else(|| AppError::Invalid(format!("bad antenna config: {t}")))?;
            let parse = |s: &str| {
                s.parse::<u32>()
                    .map_err(|_| AppError::Invalid(format!("bad antenna config: {t}")))
            };
            Ok((parse(nt)?, parse(nr)?))
        })
        .collect::<Result<_, AppError>>()?;
    let spec = ModulationSpec::new(a.c, a.frame_len);
    let prior = snr_threshold_prior(&spec)?;
    let mut text = String::from(
        "snr_db,n_t,n_r,fer_exact,fer_threshold_model,threshold_opt_db,threshold_proposed_db,threshold_prior_db\n",
    );
    for (n_t, n_r) in antennas {
        if n_t == 0 || n_r == 0 {
            return Err(AppError::Invalid("antenna counts must be positive".into()));
        }
        let proposed = snr_threshold_proposed(n_t * n_r, &spec)?;
        for &snr_db in &grid {
            let cfg = mimo::MimoConfig::new(n_t, n_r, db_to_linear(snr_db));
            let exact = mimo::mimo_exact_fer(&cfg, &spec)?;
            let model = mimo::mimo_fer_approx(&cfg, proposed);
            let opt = mimo::mimo_optimal_threshold(&cfg, &spec)?;
            text.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                fmt_f64(snr_db),
                n_t,
                n_r,
                fmt_f64(exact),
                fmt_f64(model),
                fmt_f64(linear_to_db(opt)),
                fmt_f64(linear_to_db(proposed)),
                fmt_f64(linear_to_db(prior)),
            ));
        }
    }
    write_out(&a.out, &text)
}

fn cmd_cdf(a: CdfArgs) -> Result<(), AppError> {
    let grid = parse_range(&a.gamma_range)?;
    let rates = schcn_core::analytic::RateParams::new(a.lambda0, a.lambda_sr, a.lambda_rd);
    let cdf = build_schcn_cdf(a.n, a.nc, &rates)?;
    let mut text = String::from("gamma,cdf,asymptotic\n");
    for &g in &grid {
        text.push_str(&format!(
            "{},{},{}\n",
            fmt_f64(g),
            fmt_f64(cdf.eval(g)),
            fmt_f64(schcn_cdf_asymptotic(a.n, a.nc, &rates, g)),
        ));
    }
    write_out(&a.out, &text)
}

fn cmd_sim(a: SimArgs) -> Result<(), AppError> {
    let scenario = a.scn.resolve()?;
    let grid = parse_range(&a.snr_db_range)?;
    let gamma_t1 = snr_threshold_proposed(1, &scenario.spec)?;
    let mode_label = match a.mode {
        ModeArg::SemiAnalytic => "semi_analytic",
        ModeArg::BitLevel => "bit_level",
    };
    let mut text = String::from("snr_db,fer,ci95,trials,mode\n");
    for &snr_db in &grid {
        let cfg = SimConfig {
            snr_db,
            trials: a.trials,
            seed: a.seed,
            mode: a.mode.into(),
            crc_mode: a.crc_mode.into(),
            tilt_db: a.tilt_db,
        };
        let est = runner::run_sim_point(&scenario, &cfg, gamma_t1, a.workers)?;
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f64(snr_db),
            fmt_f64(est.fer),
            fmt_f64(est.ci95),
            est.trials,
            mode_label,
        ));
    }
    write_out(&a.out, &text)
}

fn cmd_sweep(a: SweepArgs) -> Result<(), AppError> {
    let outputs = a
        .outputs
        .split(',')
        .map(|s| sweep::OutputKind::parse(s.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    let cfg = sweep::SweepConfig {
        scenario: a.scn.resolve()?,
        snr_grid: parse_range(&a.snr_db_range)?,
        outputs,
        trials: a.trials,
        seed: a.seed,
        crc_mode: a.crc_mode.into(),
        tilt_db: a.tilt_db,
        workers: a.workers,
    };
    let curves = sweep::run_sweep(&cfg)?;
    write_out(&a.out, &csvio::emit_curves(&curves)?)
}

fn cmd_report(a: ReportArgs) -> Result<(), AppError> {
    if a.files.is_empty() {
        return Err(AppError::Invalid("no input files".into()));
    }
    let mut curves = Vec::new();
    for f in &a.files {
        let text = std::fs::read_to_string(f)?;
        curves.extend(csvio::parse_curves(&text)?);
    }
    let (lo, hi) = a
        .slope_window
        .split_once(':')
        .ok_or_else(|| AppError::Invalid(format!("bad slope window: {}", a.slope_window)))?;
    let parse = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| AppError::Invalid(format!("bad slope window: {}", a.slope_window)))
    };
    let spec = report::ReportSpec {
        gap_tol: a.gap_tol,
        slope_window: (parse(lo)?, parse(hi)?),
        expected_slope: a.expected_slope,
        slope_tol: a.slope_tol,
    };
    write_out(&a.out, &report::compare_report(&curves, &spec)?)
}
