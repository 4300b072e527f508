//! Sweep orchestration: evaluate any subset of {closed-form, asymptotic,
//! semi-analytic simulation, bit-level simulation} over an SNR grid.

use crate::csvio::FerCurve;
use crate::errors::AppError;
use crate::runner::run_sim_point;
use schcn_core::analytic::{fer_asymptotic, fer_closed_form, RateParams};
use schcn_core::db_to_linear;
use schcn_core::fer::snr_threshold_proposed;
use schcn_core::sim::{CrcMode, Scenario, SimConfig, SimMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputKind {
    ClosedForm,
    Asymptotic,
    SimSemi,
    SimBit,
}

impl OutputKind {
    pub fn label(&self) -> &'static str {
        match self {
            OutputKind::ClosedForm => "closed_form",
            OutputKind::Asymptotic => "asymptotic",
            OutputKind::SimSemi => "sim_semi",
            OutputKind::SimBit => "sim_bit",
        }
    }

    pub fn parse(s: &str) -> Result<Self, AppError> {
        match s {
            "closed_form" => Ok(OutputKind::ClosedForm),
            "asymptotic" => Ok(OutputKind::Asymptotic),
            "sim_semi" => Ok(OutputKind::SimSemi),
            "sim_bit" => Ok(OutputKind::SimBit),
            _ => Err(AppError::Invalid(format!("unknown output kind: {s}"))),
        }
    }

    fn is_sim(&self) -> bool {
        matches!(self, OutputKind::SimSemi | OutputKind::SimBit)
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub scenario: Scenario,
    pub snr_grid: Vec<f64>,
    pub outputs: Vec<OutputKind>,
    pub trials: u64,
    pub seed: u64,
    pub crc_mode: CrcMode,
    pub tilt_db: f64,
    pub workers: usize,
}

impl SweepConfig {
    fn validate(&self) -> Result<(), AppError> {
        self.scenario.validate()?;
        if self.outputs.is_empty() {
            return Err(AppError::Invalid("outputs list is empty".into()));
        }
        if self.snr_grid.is_empty() {
            return Err(AppError::Invalid("SNR grid is empty".into()));
        }
        if !self.snr_grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(AppError::Invalid("SNR grid must be strictly increasing".into()));
        }
        if self.outputs.iter().any(OutputKind::is_sim) && self.trials == 0 {
            return Err(AppError::Invalid(
                "trials must be positive when simulation outputs are requested".into(),
            ));
        }
        Ok(())
    }
}

/// Exponential rates implied by a scenario at one total-SNR point.
pub fn rates_at(scenario: &Scenario, snr_db: f64) -> RateParams {
    let share = scenario.energy_share(db_to_linear(snr_db));
    RateParams::new(
        1.0 / (scenario.omega_0 * share),
        1.0 / (scenario.omega_sr * share),
        1.0 / (scenario.omega_rd * share),
    )
}

/// Run the sweep; one curve per requested output, in request order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<FerCurve>, AppError> {
    cfg.validate()?;
    let scenario = &cfg.scenario;
    let gamma_t1 = snr_threshold_proposed(1, &scenario.spec)?;
    let mut curves = Vec::with_capacity(cfg.outputs.len());
    for kind in &cfg.outputs {
        let mut points = Vec::with_capacity(cfg.snr_grid.len());
        for &snr_db in &cfg.snr_grid {
            let point = match kind {
                OutputKind::ClosedForm => {
                    let rates = rates_at(scenario, snr_db);
                    (snr_db, fer_closed_form(scenario.n, scenario.n_c, &rates, &scenario.spec)?, 0.0)
                }
                OutputKind::Asymptotic => {
                    let rates = rates_at(scenario, snr_db);
                    (snr_db, fer_asymptotic(scenario.n, scenario.n_c, &rates, &scenario.spec)?, 0.0)
                }
                OutputKind::SimSemi | OutputKind::SimBit => {
                    let sim_cfg = SimConfig {
                        snr_db,
                        trials: cfg.trials,
                        seed: cfg.seed,
                        mode: if *kind == OutputKind::SimSemi {
                            SimMode::SemiAnalytic
                        } else {
                            SimMode::BitLevel
                        },
                        crc_mode: cfg.crc_mode,
                        tilt_db: cfg.tilt_db,
                    };
                    let est = run_sim_point(scenario, &sim_cfg, gamma_t1, cfg.workers)?;
                    (snr_db, est.fer, est.ci95)
                }
            };
            points.push(point);
        }
        curves.push(FerCurve {
            label: kind.label().to_string(),
            points,
        });
    }
    Ok(curves)
}
