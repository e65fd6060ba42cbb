//! Phase timing and modeled energy / CO2e accounting.
//!
//! Energy is never metered. Two linear models are offered: runtime times a
//! configured device power, and the fixed per-run energy used for the
//! downsampling savings estimate
//! `(1 - runtime_ratio) * kwh_per_run * n_configs * intensity * overhead_factor`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTiming {
    pub fit_seconds: f64,
    pub eval_seconds: f64,
}

impl PhaseTiming {
    pub fn total(&self) -> f64 {
        self.fit_seconds + self.eval_seconds
    }
}

/// An error raised inside a timed computation, with the time spent before it failed.
#[derive(Debug)]
pub struct TimedError<E> {
    pub error: E,
    pub seconds: f64,
}

/// Runs `action` once, returning its value and wall-clock seconds from a
/// monotonic clock.
pub fn time_phase<T, E>(action: impl FnOnce() -> std::result::Result<T, E>) -> std::result::Result<(T, f64), TimedError<E>> {
    let start = Instant::now();
    let out = action();
    let seconds = start.elapsed().as_secs_f64();
    match out {
        Ok(v) => Ok((v, seconds)),
        Err(error) => Err(TimedError { error, seconds }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyParams {
    /// Energy of one algorithm run on one dataset.
    pub kwh_per_run: f64,
    /// Hyperparameter configurations tried per algorithm.
    pub n_configs: f64,
    /// Grid carbon intensity, gCO2e per kWh.
    pub intensity_g_per_kwh: f64,
    /// Multiplier for prototyping, debugging and re-runs.
    pub overhead_factor: f64,
    /// Average draw used to convert measured runtime into energy.
    pub device_power_watts: f64,
}

impl Default for EnergyParams {
    fn default() -> Self {
        EnergyParams {
            kwh_per_run: 0.51,
            n_configs: 10.0,
            intensity_g_per_kwh: 481.0,
            overhead_factor: 40.0,
            device_power_watts: 200.0,
        }
    }
}

impl EnergyParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("kwh_per_run", self.kwh_per_run),
            ("n_configs", self.n_configs),
            ("intensity_g_per_kwh", self.intensity_g_per_kwh),
            ("overhead_factor", self.overhead_factor),
            ("device_power_watts", self.device_power_watts),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// kWh drawn over `seconds` at `device_power_watts`.
pub fn estimate_energy(seconds: f64, params: &EnergyParams) -> Result<f64> {
    if !(seconds >= 0.0) || !seconds.is_finite() {
        return Err(Error::invalid(format!("runtime must be non-negative, got {seconds}")));
    }
    Ok(seconds * params.device_power_watts / 3_600_000.0)
}

/// Grams of CO2e saved by running at `runtime_ratio` of the full runtime.
pub fn estimate_co2_savings(runtime_ratio: f64, params: &EnergyParams) -> Result<f64> {
    if !(runtime_ratio > 0.0 && runtime_ratio <= 1.0) {
        return Err(Error::invalid(format!("runtime ratio must lie in (0, 1], got {runtime_ratio}")));
    }
    params.validate()?;
    Ok((1.0 - runtime_ratio)
        * params.kwh_per_run
        * params.n_configs
        * params.intensity_g_per_kwh
        * params.overhead_factor)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub runtime_ratio: f64,
    /// Energy of the downsampled workload: `runtime_ratio * kwh_per_run * n_configs * overhead_factor`.
    pub estimated_kwh: f64,
    pub estimated_gco2e: f64,
    pub savings_gco2e: f64,
    pub params: EnergyParams,
    /// Set when the report was built from a measured runtime instead of the per-run constant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measured_seconds: Option<f64>,
}

impl EnergyReport {
    pub fn new(runtime_ratio: f64, params: EnergyParams) -> Result<Self> {
        let savings_gco2e = estimate_co2_savings(runtime_ratio, &params)?;
        let estimated_kwh = runtime_ratio * params.kwh_per_run * params.n_configs * params.overhead_factor;
        Ok(EnergyReport {
            runtime_ratio,
            estimated_kwh,
            estimated_gco2e: estimated_kwh * params.intensity_g_per_kwh,
            savings_gco2e,
            params,
            measured_seconds: None,
        })
    }

    /// Report for one measured run: energy from runtime and device power.
    pub fn from_runtime(seconds: f64, runtime_ratio: f64, params: EnergyParams) -> Result<Self> {
        let mut report = EnergyReport::new(runtime_ratio, params)?;
        report.estimated_kwh = estimate_energy(seconds, &params)?;
        report.estimated_gco2e = report.estimated_kwh * params.intensity_g_per_kwh;
        report.measured_seconds = Some(seconds);
        Ok(report)
    }
}

/// `(fit + eval at fraction p) / (fit + eval at full data)`.
pub fn runtime_ratio(at_fraction: PhaseTiming, at_full: PhaseTiming) -> Result<f64> {
    let full = at_full.total();
    if !(full > 0.0) {
        return Err(Error::invalid("full-data runtime must be positive"));
    }
    Ok(at_fraction.total() / full)
}
