//! Uncertainty propagation: deterministic Monte Carlo over parameter
//! distributions, and one-at-a-time tornado sensitivity.
//!
//! Reproducibility is the design constraint everything here serves. Each
//! sample index owns an independent random substream derived from (seed,
//! index) alone, parameters are drawn in the lexicographic order of their
//! paths, and aggregation runs sequentially over the index-ordered results.
//! Consequently the same config, spec and seed produce bit-identical output
//! whether the samples are evaluated on one thread or sixteen, and two
//! configs sampled under the same spec and seed see identical draws
//! (common random numbers), which makes paired scenario comparisons exact
//! rather than statistical.

use std::collections::BTreeMap;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::finance::{build_cash_flows_with_energy, lcoe, npv, CashFlowSeries};
use crate::pipeline::effective_annual_energy;
use crate::scenarios::{apply_automation, ProjectConfig};

/// Number of bins in summary histograms.
pub const HISTOGRAM_BINS: usize = 50;

/// Default Monte Carlo sample count.
pub const DEFAULT_SAMPLES: u32 = 10_000;

/// Seed used when a spec or CLI invocation does not choose one.
pub const DEFAULT_SEED: u64 = 42;

/// Abort threshold: the run fails once more than this fraction of samples
/// cannot be evaluated.
pub const MAX_FAILED_FRACTION: f64 = 0.5;

/// A numeric field of [`ProjectConfig`] addressable by a dotted path.
///
/// Paths name exactly the fields it makes sense to randomize or sweep;
/// structural fields (pathway, lifetime, schedules) are deliberately not
/// addressable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ParamPath {
    SiteSurfaceTemperature,
    SiteGradient,
    SiteRockDensity,
    SiteSpecificHeat,
    SiteReservoirVolume,
    PlantRatedCapacity,
    PlantCapacityFactor,
    PlantProductionTemperature,
    PlantInjectionTemperature,
    PlantCirculationMassFlow,
    PlantFluidSpecificHeat,
    PlantConversionEfficiency,
    PlantCop,
    PlantBaselineCop,
    PlantUtilization,
    CostsCapex,
    CostsOpex,
    CostsFuelCost,
    AssumptionsDiscountRate,
    AssumptionsInflationRate,
    AssumptionsEnergyTariff,
    EmissionsGridFactor,
    AnnualEnergyOverride,
}

impl ParamPath {
    pub fn parse(path: &str) -> Result<ParamPath> {
        use ParamPath::*;
        Ok(match path {
            "site.surface_temperature" => SiteSurfaceTemperature,
            "site.gradient" => SiteGradient,
            "site.rock_density" => SiteRockDensity,
            "site.specific_heat" => SiteSpecificHeat,
            "site.reservoir_volume" => SiteReservoirVolume,
            "plant.rated_capacity" => PlantRatedCapacity,
            "plant.capacity_factor" => PlantCapacityFactor,
            "plant.production_temperature" => PlantProductionTemperature,
            "plant.injection_temperature" => PlantInjectionTemperature,
            "plant.circulation_mass_flow" => PlantCirculationMassFlow,
            "plant.fluid_specific_heat" => PlantFluidSpecificHeat,
            "plant.conversion_efficiency" => PlantConversionEfficiency,
            "plant.cop" => PlantCop,
            "plant.baseline_cop" => PlantBaselineCop,
            "plant.utilization" => PlantUtilization,
            "costs.capex" => CostsCapex,
            "costs.opex" => CostsOpex,
            "costs.fuel_cost" => CostsFuelCost,
            "assumptions.discount_rate" => AssumptionsDiscountRate,
            "assumptions.inflation_rate" => AssumptionsInflationRate,
            "assumptions.energy_tariff" => AssumptionsEnergyTariff,
            "emissions.grid_factor" => EmissionsGridFactor,
            "annual_energy_override" => AnnualEnergyOverride,
            other => {
                return Err(Error::config(format!(
                    "unknown parameter path \"{other}\""
                )))
            }
        })
    }

    pub fn as_str(self) -> &'static str {
        use ParamPath::*;
        match self {
            SiteSurfaceTemperature => "site.surface_temperature",
            SiteGradient => "site.gradient",
            SiteRockDensity => "site.rock_density",
            SiteSpecificHeat => "site.specific_heat",
            SiteReservoirVolume => "site.reservoir_volume",
            PlantRatedCapacity => "plant.rated_capacity",
            PlantCapacityFactor => "plant.capacity_factor",
            PlantProductionTemperature => "plant.production_temperature",
            PlantInjectionTemperature => "plant.injection_temperature",
            PlantCirculationMassFlow => "plant.circulation_mass_flow",
            PlantFluidSpecificHeat => "plant.fluid_specific_heat",
            PlantConversionEfficiency => "plant.conversion_efficiency",
            PlantCop => "plant.cop",
            PlantBaselineCop => "plant.baseline_cop",
            PlantUtilization => "plant.utilization",
            CostsCapex => "costs.capex",
            CostsOpex => "costs.opex",
            CostsFuelCost => "costs.fuel_cost",
            AssumptionsDiscountRate => "assumptions.discount_rate",
            AssumptionsInflationRate => "assumptions.inflation_rate",
            AssumptionsEnergyTariff => "assumptions.energy_tariff",
            EmissionsGridFactor => "emissions.grid_factor",
            AnnualEnergyOverride => "annual_energy_override",
        }
    }

    /// Current value of the addressed field, if set. Capex reports the
    /// schedule total.
    pub fn base_value(self, config: &ProjectConfig) -> Option<f64> {
        use ParamPath::*;
        match self {
            SiteSurfaceTemperature => Some(config.site.surface_temperature),
            SiteGradient => Some(config.site.gradient),
            SiteRockDensity => Some(config.site.rock_density),
            SiteSpecificHeat => Some(config.site.specific_heat),
            SiteReservoirVolume => Some(config.site.reservoir_volume),
            PlantRatedCapacity => Some(config.plant.rated_capacity),
            PlantCapacityFactor => Some(config.plant.capacity_factor),
            PlantProductionTemperature => config.plant.production_temperature,
            PlantInjectionTemperature => config.plant.injection_temperature,
            PlantCirculationMassFlow => config.plant.circulation_mass_flow,
            PlantFluidSpecificHeat => config.plant.fluid_specific_heat,
            PlantConversionEfficiency => config.plant.conversion_efficiency,
            PlantCop => config.plant.cop,
            PlantBaselineCop => config.plant.baseline_cop,
            PlantUtilization => config.plant.utilization,
            CostsCapex => Some(config.costs.total_capex()),
            CostsOpex => Some(config.costs.opex),
            CostsFuelCost => Some(config.costs.fuel_cost),
            AssumptionsDiscountRate => Some(config.assumptions.discount_rate),
            AssumptionsInflationRate => Some(config.assumptions.inflation_rate),
            AssumptionsEnergyTariff => config.assumptions.energy_tariff,
            EmissionsGridFactor => Some(config.emissions.grid_factor),
            AnnualEnergyOverride => config.annual_energy_override,
        }
    }

    /// Sets the addressed field to an absolute value.
    ///
    /// Optional fields are filled if absent. Setting capex absolutely
    /// requires a single-entry schedule; multi-year schedules can only be
    /// scaled, since one number cannot say how to split across years.
    pub fn set_value(self, config: &mut ProjectConfig, value: f64) -> Result<()> {
        use ParamPath::*;
        match self {
            SiteSurfaceTemperature => config.site.surface_temperature = value,
            SiteGradient => config.site.gradient = value,
            SiteRockDensity => config.site.rock_density = value,
            SiteSpecificHeat => config.site.specific_heat = value,
            SiteReservoirVolume => config.site.reservoir_volume = value,
            PlantRatedCapacity => config.plant.rated_capacity = value,
            PlantCapacityFactor => config.plant.capacity_factor = value,
            PlantProductionTemperature => config.plant.production_temperature = Some(value),
            PlantInjectionTemperature => config.plant.injection_temperature = Some(value),
            PlantCirculationMassFlow => config.plant.circulation_mass_flow = Some(value),
            PlantFluidSpecificHeat => config.plant.fluid_specific_heat = Some(value),
            PlantConversionEfficiency => config.plant.conversion_efficiency = Some(value),
            PlantCop => config.plant.cop = Some(value),
            PlantBaselineCop => config.plant.baseline_cop = Some(value),
            PlantUtilization => config.plant.utilization = Some(value),
            CostsCapex => {
                if config.costs.capex_schedule.len() != 1 {
                    return Err(Error::config(
                        "costs.capex cannot be set absolutely on a multi-year schedule; \
                         use a scale binding",
                    ));
                }
                config.costs.capex_schedule[0].amount = value;
            }
            CostsOpex => config.costs.opex = value,
            CostsFuelCost => config.costs.fuel_cost = value,
            AssumptionsDiscountRate => config.assumptions.discount_rate = value,
            AssumptionsInflationRate => config.assumptions.inflation_rate = value,
            AssumptionsEnergyTariff => config.assumptions.energy_tariff = Some(value),
            EmissionsGridFactor => config.emissions.grid_factor = value,
            AnnualEnergyOverride => config.annual_energy_override = Some(value),
        }
        Ok(())
    }

    /// Multiplies the addressed field by a factor. Capex scales every
    /// schedule entry, preserving the year split.
    pub fn scale_by(self, config: &mut ProjectConfig, factor: f64) -> Result<()> {
        if self == ParamPath::CostsCapex {
            for entry in &mut config.costs.capex_schedule {
                entry.amount *= factor;
            }
            return Ok(());
        }
        let base = self.base_value(config).ok_or_else(|| {
            Error::config(format!(
                "{} has no value in the config to scale",
                self.as_str()
            ))
        })?;
        self.set_value(config, base * factor)
    }
}

/// One randomized parameter: its distribution and how draws bind to the
/// config. With `scale` set, a draw multiplies the config's base value
/// (draws are then dimensionless factors); otherwise draws are absolute
/// values in the field's own units.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterBinding {
    pub distribution: Distribution,
    pub scale: bool,
}

/// A full Monte Carlo specification.
///
/// Parameters are keyed by path string in a BTreeMap so iteration order,
/// and therefore draw order, is the lexicographic path order, which is part
/// of the reproducibility contract.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintySpec {
    pub parameters: BTreeMap<String, ParameterBinding>,
    pub samples: u32,
    pub seed: u64,
}

impl UncertaintySpec {
    pub fn new(parameters: BTreeMap<String, ParameterBinding>, samples: u32, seed: u64) -> Self {
        UncertaintySpec {
            parameters,
            samples,
            seed,
        }
    }

    /// Validates paths, sample count and scale-binding applicability
    /// against the config the spec will run on.
    pub fn validate(&self, config: &ProjectConfig) -> Result<()> {
        if self.parameters.is_empty() {
            return Err(Error::config(
                "uncertainty spec must randomize at least one parameter",
            ));
        }
        if self.samples == 0 {
            return Err(Error::config("uncertainty.samples must be at least 1"));
        }
        for (key, binding) in &self.parameters {
            let path = ParamPath::parse(key)?;
            if binding.scale && path.base_value(config).is_none() {
                return Err(Error::config(format!(
                    "{key}: scale binding requires the config to set a base value"
                )));
            }
        }
        Ok(())
    }
}

/// Derives the independent substream for one sample index. The key is a
/// splitmix64 chain over seed and index, so neighboring indices get
/// unrelated streams and the mapping is stable across platforms.
fn sample_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut state = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One uniform draw in [0, 1) with full 53-bit resolution.
fn unit_uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * 1.110_223_024_625_156_5e-16
}

/// Per-metric raw sample values; `None` marks a failed sample.
#[derive(Debug, Clone, PartialEq)]
pub struct McSamples {
    pub lcoe: Vec<Option<f64>>,
    pub npv: Vec<Option<f64>>,
    /// Lowest-index failure, kept for diagnostics.
    pub first_failure: Option<SampleFailure>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleFailure {
    pub index: u32,
    pub message: String,
}

impl McSamples {
    pub fn failed_samples(&self) -> u32 {
        self.lcoe
            .iter()
            .zip(&self.npv)
            .filter(|(l, n)| l.is_none() || n.is_none())
            .count() as u32
    }
}

struct SampleOutcome {
    lcoe: Option<f64>,
    npv: Option<f64>,
    failure: Option<String>,
}

/// Runs the sampling phase and returns per-sample metric values in index
/// order. Exposed separately from the summary so paired scenario analyses
/// can difference the raw samples.
pub fn run_monte_carlo_samples(config: &ProjectConfig, spec: &UncertaintySpec) -> Result<McSamples> {
    config.validate()?;
    spec.validate(config)?;

    let bindings: Vec<(ParamPath, &ParameterBinding)> = spec
        .parameters
        .iter()
        .map(|(key, binding)| Ok((ParamPath::parse(key)?, binding)))
        .collect::<Result<_>>()?;

    let outcomes: Vec<SampleOutcome> = (0..spec.samples)
        .into_par_iter()
        .map(|index| evaluate_sample(config, &bindings, spec.seed, index))
        .collect();

    let mut lcoe_values = Vec::with_capacity(outcomes.len());
    let mut npv_values = Vec::with_capacity(outcomes.len());
    let mut first_failure = None;
    for (index, outcome) in outcomes.into_iter().enumerate() {
        lcoe_values.push(outcome.lcoe);
        npv_values.push(outcome.npv);
        if first_failure.is_none() {
            if let Some(message) = outcome.failure {
                first_failure = Some(SampleFailure {
                    index: index as u32,
                    message,
                });
            }
        }
    }
    Ok(McSamples {
        lcoe: lcoe_values,
        npv: npv_values,
        first_failure,
    })
}

fn evaluate_sample(
    base: &ProjectConfig,
    bindings: &[(ParamPath, &ParameterBinding)],
    seed: u64,
    index: u32,
) -> SampleOutcome {
    let mut rng = sample_stream(seed, index as u64);
    let mut varied = base.clone();
    for (path, binding) in bindings {
        let draw = binding.distribution.sample(unit_uniform(&mut rng));
        let applied = if binding.scale {
            path.scale_by(&mut varied, draw)
        } else {
            path.set_value(&mut varied, draw)
        };
        let checked = applied.and_then(|()| varied.validate().map(|_| ()));
        if let Err(err) = checked {
            return SampleOutcome {
                lcoe: None,
                npv: None,
                failure: Some(format!("{} = {draw}: {err}", path.as_str())),
            };
        }
    }

    match sample_series(&varied, base) {
        Ok(series) => {
            let rate = varied.assumptions.discount_rate;
            let lcoe_value = lcoe(&series, rate).ok();
            let npv_value = npv(&series, rate).ok();
            let failure = if lcoe_value.is_none() || npv_value.is_none() {
                Some("metric undefined for the sampled parameter set".to_string())
            } else {
                None
            };
            SampleOutcome {
                lcoe: lcoe_value,
                npv: npv_value,
                failure,
            }
        }
        Err(err) => SampleOutcome {
            lcoe: None,
            npv: None,
            failure: Some(err.to_string()),
        },
    }
}

fn sample_series(varied: &ProjectConfig, base: &ProjectConfig) -> Result<CashFlowSeries> {
    let energy = effective_annual_energy(varied, base)?;
    let costs = apply_automation(&varied.costs, &varied.automation)?;
    build_cash_flows_with_energy(&varied.plant, &costs, &varied.assumptions, energy)
}

/// Distribution summary of one metric across the defined samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricStats {
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for a single value.
    pub sd: f64,
    pub p5: f64,
    pub p50: f64,
    pub p95: f64,
    pub n_failed: u32,
    pub histogram: Histogram,
}

/// Fixed-width histogram spanning the central [p1, p99] range; outliers are
/// clamped into the edge bins. Degenerate data collapses to a single bin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloSummary {
    pub samples: u32,
    pub seed: u64,
    pub lcoe: MetricStats,
    pub npv: MetricStats,
    /// Fraction of defined NPV samples strictly above zero.
    pub prob_npv_positive: f64,
}

/// Full Monte Carlo run: samples plus aggregation.
///
/// # Errors
///
/// Rejects configs without a tariff up front (the summary centers on NPV),
/// and aborts when more than [`MAX_FAILED_FRACTION`] of samples fail,
/// reporting the lowest-index failure.
pub fn run_monte_carlo(config: &ProjectConfig, spec: &UncertaintySpec) -> Result<MonteCarloSummary> {
    if config.assumptions.energy_tariff.is_none()
        && !spec.parameters.contains_key("assumptions.energy_tariff")
    {
        return Err(Error::undefined(
            "monte carlo requires assumptions.energy_tariff: \
             the summary reports NPV and its positive-outcome probability",
        ));
    }
    let samples = run_monte_carlo_samples(config, spec)?;

    let failed = samples.failed_samples();
    if f64::from(failed) > MAX_FAILED_FRACTION * f64::from(spec.samples) {
        let detail = samples
            .first_failure
            .as_ref()
            .map(|f| format!("; first failure at sample {}: {}", f.index, f.message))
            .unwrap_or_default();
        return Err(Error::undefined(format!(
            "monte carlo aborted: {failed} of {} samples failed{detail}",
            spec.samples
        )));
    }

    let lcoe_defined: Vec<f64> = samples.lcoe.iter().flatten().copied().collect();
    let npv_defined: Vec<f64> = samples.npv.iter().flatten().copied().collect();
    let lcoe_failed = (samples.lcoe.len() - lcoe_defined.len()) as u32;
    let npv_failed = (samples.npv.len() - npv_defined.len()) as u32;

    Ok(MonteCarloSummary {
        samples: spec.samples,
        seed: spec.seed,
        lcoe: metric_stats(lcoe_defined, lcoe_failed)?,
        npv: metric_stats(npv_defined.clone(), npv_failed)?,
        prob_npv_positive: prob_positive(&npv_defined)?,
    })
}

/// Fraction of values strictly greater than zero.
pub fn prob_positive(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::undefined(
            "positive-outcome probability is undefined over zero samples",
        ));
    }
    let positive = values.iter().filter(|&&v| v > 0.0).count();
    Ok(positive as f64 / values.len() as f64)
}

fn metric_stats(mut values: Vec<f64>, n_failed: u32) -> Result<MetricStats> {
    if values.is_empty() {
        return Err(Error::undefined(
            "metric statistics are undefined: every sample failed",
        ));
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("metric values are finite"));

    // Point distributions make every sample identical; report the value
    // itself rather than accumulating rounding noise.
    let first = values[0];
    let last = values[values.len() - 1];
    if first == last {
        return Ok(MetricStats {
            mean: first,
            sd: 0.0,
            p5: first,
            p50: first,
            p95: first,
            n_failed,
            histogram: Histogram {
                lo: first,
                hi: first,
                counts: vec![values.len() as u32],
            },
        });
    }

    let n = values.len() as f64;
    let mean = compensated_sum(values.iter().copied()) / n;
    let sd = if values.len() < 2 {
        0.0
    } else {
        (compensated_sum(values.iter().map(|v| (v - mean) * (v - mean))) / (n - 1.0)).sqrt()
    };

    Ok(MetricStats {
        mean,
        sd,
        p5: percentile(&values, 0.05),
        p50: percentile(&values, 0.50),
        p95: percentile(&values, 0.95),
        n_failed,
        histogram: histogram(&values),
    })
}

/// Neumaier-compensated sequential sum; immune to evaluation-order effects
/// because the order is fixed by the caller.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut compensation = 0.0;
    for value in values {
        let t = sum + value;
        if sum.abs() >= value.abs() {
            compensation += (sum - t) + value;
        } else {
            compensation += (value - t) + sum;
        }
        sum = t;
    }
    sum + compensation
}

/// Linear-interpolation quantile over a sorted slice (the common "type 7"
/// convention: h = q * (n - 1)).
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = q * (n - 1) as f64;
    let lower = h.floor() as usize;
    if lower + 1 >= n {
        return sorted[n - 1];
    }
    let fraction = h - lower as f64;
    sorted[lower] + fraction * (sorted[lower + 1] - sorted[lower])
}

fn histogram(sorted: &[f64]) -> Histogram {
    let lo = percentile(sorted, 0.01);
    let hi = percentile(sorted, 0.99);
    if hi <= lo {
        return Histogram {
            lo,
            hi,
            counts: vec![sorted.len() as u32],
        };
    }
    let width = (hi - lo) / HISTOGRAM_BINS as f64;
    let mut counts = vec![0u32; HISTOGRAM_BINS];
    for &value in sorted {
        let bin = (((value - lo) / width).floor() as i64).clamp(0, HISTOGRAM_BINS as i64 - 1);
        counts[bin as usize] += 1;
    }
    Histogram { lo, hi, counts }
}

/// Which output a tornado sweep tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TargetMetric {
    #[serde(rename = "lcoe")]
    Lcoe,
    #[serde(rename = "npv")]
    Npv,
}

impl TargetMetric {
    pub fn parse(name: &str) -> Result<TargetMetric> {
        match name {
            "lcoe" => Ok(TargetMetric::Lcoe),
            "npv" => Ok(TargetMetric::Npv),
            other => Err(Error::config(format!(
                "unknown metric \"{other}\" (expected lcoe or npv)"
            ))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TargetMetric::Lcoe => "lcoe",
            TargetMetric::Npv => "npv",
        }
    }
}

/// Input range for one tornado axis. With `scale` set, endpoints multiply
/// the config's base value; otherwise they are absolute.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RangeSpec {
    pub low: f64,
    pub high: f64,
    pub scale: bool,
}

/// One ranked tornado axis. Output cells are `None` when that endpoint made
/// the metric undefined; such axes sort last and carry no swing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TornadoEntry {
    pub parameter: String,
    pub input_low: f64,
    pub input_high: f64,
    pub output_low: Option<f64>,
    pub output_high: Option<f64>,
    pub swing: Option<f64>,
}

/// One-at-a-time sensitivity: evaluates the metric at both endpoints of
/// every range, holding everything else at the base point, and ranks the
/// axes by output swing (largest first).
pub fn tornado(
    config: &ProjectConfig,
    metric: TargetMetric,
    ranges: &BTreeMap<String, RangeSpec>,
) -> Result<Vec<TornadoEntry>> {
    config.validate()?;
    if ranges.is_empty() {
        return Err(Error::config("tornado needs at least one parameter range"));
    }

    let mut entries = Vec::with_capacity(ranges.len());
    for (key, range) in ranges {
        let path = ParamPath::parse(key)?;
        if range.scale && path.base_value(config).is_none() {
            return Err(Error::config(format!(
                "{key}: scale range requires the config to set a base value"
            )));
        }
        let output_low = metric_at(config, path, range.low, range.scale, metric);
        let output_high = metric_at(config, path, range.high, range.scale, metric);
        let swing = match (output_low, output_high) {
            (Some(low), Some(high)) => Some((high - low).abs()),
            _ => None,
        };
        entries.push(TornadoEntry {
            parameter: key.clone(),
            input_low: range.low,
            input_high: range.high,
            output_low,
            output_high,
            swing,
        });
    }

    entries.sort_by(|a, b| match (a.swing, b.swing) {
        (Some(x), Some(y)) => y
            .partial_cmp(&x)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.parameter.cmp(&b.parameter)),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a.parameter.cmp(&b.parameter),
    });
    Ok(entries)
}

fn metric_at(
    base: &ProjectConfig,
    path: ParamPath,
    endpoint: f64,
    scale: bool,
    metric: TargetMetric,
) -> Option<f64> {
    let mut varied = base.clone();
    let applied = if scale {
        path.scale_by(&mut varied, endpoint)
    } else {
        path.set_value(&mut varied, endpoint)
    };
    applied.ok()?;
    varied.validate().ok()?;
    let series = sample_series(&varied, base).ok()?;
    match metric {
        TargetMetric::Lcoe => lcoe(&series, varied.assumptions.discount_rate).ok(),
        TargetMetric::Npv => npv(&series, varied.assumptions.discount_rate).ok(),
    }
}

/// Default tornado ranges for a config: discount rate +/- 2 points, capex
/// +/- 15%, and production temperature +/- 20 degC when the config carries
/// the full thermal model.
pub fn default_tornado_ranges(config: &ProjectConfig) -> BTreeMap<String, RangeSpec> {
    // offsets like 0.06 - 0.02 leave float dust (0.039999...994) that would
    // show up verbatim in reports; snap to the picounit grid
    let snap = |value: f64| (value * 1.0e12).round() / 1.0e12;
    let mut ranges = BTreeMap::new();
    let rate = config.assumptions.discount_rate;
    ranges.insert(
        "assumptions.discount_rate".to_string(),
        RangeSpec {
            low: snap(rate - 0.02),
            high: snap(rate + 0.02),
            scale: false,
        },
    );
    ranges.insert(
        "costs.capex".to_string(),
        RangeSpec {
            low: 0.85,
            high: 1.15,
            scale: true,
        },
    );
    if config.plant.has_thermal_model() {
        let temperature = config
            .plant
            .production_temperature
            .expect("has_thermal_model checked");
        ranges.insert(
            "plant.production_temperature".to_string(),
            RangeSpec {
                low: snap(temperature - 20.0),
                high: snap(temperature + 20.0),
                scale: false,
            },
        );
    }
    ranges
}
