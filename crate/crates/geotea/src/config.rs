//! Project file ingestion and emission.
//!
//! Projects are described in TOML. The schema mirrors [`ProjectConfig`]
//! section by section (`[site]`, `[plant]`, `[costs]`, `[automation]`,
//! `[assumptions]`, plus optional `[emissions]` and `[uncertainty]`), with
//! unknown keys rejected at the offending line. Units are fixed by the
//! schema: USD, MW, MWh, degrees C, kg/m3, J/(kg K), m3, years, and
//! fractions written as decimals.
//!
//! Loading applies documented defaults (reference temperature falls back to
//! the surface temperature, heat pump projects get the reference COP stock,
//! automation reductions derive from the level when not spelled out) and
//! then runs full validation, so a successfully loaded config satisfies
//! every model invariant. [`serialize_project`] emits the explicit form of
//! the same schema; loading its output reproduces the config field for
//! field.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::distribution::Distribution;
use crate::emissions::{EmissionsContext, StageEmissions};
use crate::error::{Error, Result, Warning};
use crate::finance::{CapexEntry, CostModel, FinancialAssumptions, OpexEscalation};
use crate::model::{Pathway, PlantSpec, SiteProfile};
use crate::scenarios::{scenario_for, AutomationLevel, AutomationScenario, ProjectConfig};
use crate::uncertainty::{
    ParamPath, ParameterBinding, RangeSpec, UncertaintySpec, DEFAULT_SAMPLES, DEFAULT_SEED,
};

/// A parsed and validated project file.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectDocument {
    pub config: ProjectConfig,
    /// Monte Carlo spec from the optional `[uncertainty]` section.
    pub uncertainty: Option<UncertaintySpec>,
    /// Soft diagnostics accumulated during validation.
    pub warnings: Vec<Warning>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProjectFile {
    name: String,
    site: SiteFile,
    plant: PlantFile,
    costs: CostsFile,
    automation: AutomationFile,
    assumptions: AssumptionsFile,
    emissions: Option<EmissionsFile>,
    uncertainty: Option<UncertaintyFile>,
    annual_energy_override: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SiteFile {
    surface_temperature: Option<f64>,
    gradient: Option<f64>,
    rock_density: Option<f64>,
    specific_heat: Option<f64>,
    reservoir_volume: Option<f64>,
    reference_temperature: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlantFile {
    pathway: String,
    rated_capacity: f64,
    capacity_factor: f64,
    lifetime: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    generation_start_year: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    production_temperature: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    injection_temperature: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    circulation_mass_flow: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fluid_specific_heat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    conversion_efficiency: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    temperature_coupled: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cop: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    baseline_cop: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    utilization: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CostsFile {
    /// Shorthand for a single year-0 outlay; exclusive with
    /// `capex_schedule`.
    #[serde(skip_serializing_if = "Option::is_none")]
    capex: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    capex_schedule: Option<Vec<CapexEntryFile>>,
    opex: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    fuel_cost: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    opex_escalation: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CapexEntryFile {
    year: u32,
    amount: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AutomationFile {
    level: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    capex_reduction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    opex_reduction: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssumptionsFile {
    discount_rate: Option<f64>,
    inflation_rate: Option<f64>,
    lifetime: Option<u32>,
    energy_tariff: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EmissionsFile {
    grid_factor: Option<f64>,
    construction: Option<f64>,
    operation_per_year: Option<f64>,
    decommissioning: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct UncertaintyFile {
    samples: Option<u32>,
    seed: Option<u64>,
    parameters: BTreeMap<String, DistributionFile>,
}

/// Flat distribution record; the `distribution` tag decides which of the
/// other fields are required. A flat struct (rather than a tagged enum)
/// keeps "missing `mode`" errors attached to the parameter that caused
/// them.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistributionFile {
    distribution: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    low: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    high: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sd: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scale: Option<bool>,
}

/// Reads and validates a project file.
pub fn load_project(path: &Path) -> Result<ProjectDocument> {
    parse_project(&read_file(path)?, &path.display().to_string())
}

/// Parses project TOML; `origin` labels error messages (a path, or a
/// placeholder for in-memory text).
pub fn parse_project(text: &str, origin: &str) -> Result<ProjectDocument> {
    let file: ProjectFile = toml::from_str(text)
        .map_err(|e| Error::parse(format!("{origin}: {e}")))?;

    let site = build_site(&file.site);
    let plant = build_plant(&file.plant)?;
    let costs = build_costs(&file.costs)?;
    let automation = build_automation(&file.automation, plant.pathway)?;
    let assumptions = build_assumptions(&file.assumptions, plant.lifetime);
    let emissions = build_emissions(file.emissions.as_ref().unwrap_or(&EmissionsFile::default()));

    let config = ProjectConfig {
        name: file.name,
        site,
        plant,
        costs,
        automation,
        assumptions,
        emissions,
        annual_energy_override: file.annual_energy_override,
    };
    let warnings = config.validate()?;

    let uncertainty = match file.uncertainty {
        Some(section) => {
            let spec = build_uncertainty(&section)?;
            spec.validate(&config)?;
            Some(spec)
        }
        None => None,
    };

    Ok(ProjectDocument {
        config,
        uncertainty,
        warnings,
    })
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::parse(format!("{}: {e}", path.display())))
}

fn build_site(file: &SiteFile) -> SiteProfile {
    let defaults = SiteProfile::default();
    let surface = file.surface_temperature.unwrap_or(defaults.surface_temperature);
    SiteProfile {
        surface_temperature: surface,
        gradient: file.gradient.unwrap_or(defaults.gradient),
        rock_density: file.rock_density.unwrap_or(defaults.rock_density),
        specific_heat: file.specific_heat.unwrap_or(defaults.specific_heat),
        reservoir_volume: file.reservoir_volume.unwrap_or(defaults.reservoir_volume),
        reference_temperature: file.reference_temperature.unwrap_or(surface),
    }
}

fn build_plant(file: &PlantFile) -> Result<PlantSpec> {
    let pathway = Pathway::from_id(&file.pathway).ok_or_else(|| {
        Error::config(format!(
            "plant.pathway must be one of egs, wells, gshp (got \"{}\")",
            file.pathway
        ))
    })?;
    let mut plant = PlantSpec::new(pathway, file.rated_capacity, file.capacity_factor, file.lifetime);
    if let Some(start) = file.generation_start_year {
        plant.generation_start_year = start;
    }
    plant.production_temperature = file.production_temperature;
    plant.injection_temperature = file.injection_temperature;
    plant.circulation_mass_flow = file.circulation_mass_flow;
    plant.fluid_specific_heat = file.fluid_specific_heat;
    plant.conversion_efficiency = file.conversion_efficiency;
    plant.temperature_coupled = file.temperature_coupled.unwrap_or(false);
    plant.cop = file.cop;
    plant.baseline_cop = file.baseline_cop;
    plant.utilization = file.utilization;
    if pathway == Pathway::Gshp {
        // reference heat pump stock; utilization matches the district
        // cooling duty profile the cost points assume
        plant.cop = plant.cop.or(Some(5.0));
        plant.baseline_cop = plant.baseline_cop.or(Some(3.0));
        plant.utilization = plant.utilization.or(Some(0.55));
    }
    Ok(plant)
}

fn build_costs(file: &CostsFile) -> Result<CostModel> {
    let capex_schedule = match (&file.capex, &file.capex_schedule) {
        (Some(_), Some(_)) => {
            return Err(Error::config(
                "costs.capex and costs.capex_schedule are mutually exclusive; give one",
            ))
        }
        (None, None) => {
            return Err(Error::config(
                "costs needs either capex (single year-0 outlay) or capex_schedule",
            ))
        }
        (Some(amount), None) => vec![CapexEntry { year: 0, amount: *amount }],
        (None, Some(entries)) => entries
            .iter()
            .map(|e| CapexEntry { year: e.year, amount: e.amount })
            .collect(),
    };
    let opex_escalation = match file.opex_escalation.as_deref() {
        None | Some("none") => OpexEscalation::None,
        Some("inflation_indexed") => OpexEscalation::InflationIndexed,
        Some(other) => {
            return Err(Error::config(format!(
                "costs.opex_escalation must be none or inflation_indexed (got \"{other}\")"
            )))
        }
    };
    Ok(CostModel {
        capex_schedule,
        opex: file.opex,
        fuel_cost: file.fuel_cost.unwrap_or(0.0),
        opex_escalation,
    })
}

fn build_automation(file: &AutomationFile, pathway: Pathway) -> Result<AutomationScenario> {
    let level = AutomationLevel::from_id(&file.level).ok_or_else(|| {
        Error::config(format!(
            "automation.level must be one of baseline, moderate, full (got \"{}\")",
            file.level
        ))
    })?;
    match (file.capex_reduction, file.opex_reduction) {
        (None, None) => Ok(scenario_for(pathway, level)),
        (Some(capex_reduction), Some(opex_reduction)) => Ok(AutomationScenario {
            level,
            capex_reduction,
            opex_reduction,
        }),
        _ => Err(Error::config(
            "automation.capex_reduction and automation.opex_reduction must be \
             given together (or both omitted to use the level's derived values)",
        )),
    }
}

fn build_assumptions(file: &AssumptionsFile, plant_lifetime: u32) -> FinancialAssumptions {
    let defaults = FinancialAssumptions::default();
    FinancialAssumptions {
        discount_rate: file.discount_rate.unwrap_or(defaults.discount_rate),
        inflation_rate: file.inflation_rate.unwrap_or(defaults.inflation_rate),
        lifetime: file.lifetime.unwrap_or(plant_lifetime),
        energy_tariff: file.energy_tariff,
    }
}

fn build_emissions(file: &EmissionsFile) -> EmissionsContext {
    let defaults = EmissionsContext::default();
    EmissionsContext {
        grid_factor: file.grid_factor.unwrap_or(defaults.grid_factor),
        stages: StageEmissions {
            construction: file.construction.unwrap_or(0.0),
            operation_per_year: file.operation_per_year.unwrap_or(0.0),
            decommissioning: file.decommissioning.unwrap_or(0.0),
        },
    }
}

fn build_uncertainty(file: &UncertaintyFile) -> Result<UncertaintySpec> {
    let mut parameters = BTreeMap::new();
    for (key, dist_file) in &file.parameters {
        ParamPath::parse(key)?;
        parameters.insert(key.clone(), build_binding(key, dist_file)?);
    }
    Ok(UncertaintySpec::new(
        parameters,
        file.samples.unwrap_or(DEFAULT_SAMPLES),
        file.seed.unwrap_or(DEFAULT_SEED),
    ))
}

fn build_binding(key: &str, file: &DistributionFile) -> Result<ParameterBinding> {
    Ok(ParameterBinding {
        distribution: build_distribution(key, file)?,
        scale: file.scale.unwrap_or(false),
    })
}

fn build_distribution(key: &str, file: &DistributionFile) -> Result<Distribution> {
    let need = |field: Option<f64>, name: &str| {
        field.ok_or_else(|| {
            Error::config(format!(
                "{key}: {} distribution needs {name}",
                file.distribution
            ))
        })
    };
    let forbid = |field: Option<f64>, name: &str| {
        if field.is_some() {
            Err(Error::config(format!(
                "{key}: {} distribution does not take {name}",
                file.distribution
            )))
        } else {
            Ok(())
        }
    };

    match file.distribution.as_str() {
        "point" => {
            forbid(file.low, "low")?;
            forbid(file.mode, "mode")?;
            forbid(file.high, "high")?;
            forbid(file.mean, "mean")?;
            forbid(file.sd, "sd")?;
            Ok(Distribution::point(need(file.value, "value")?))
        }
        "uniform" => {
            forbid(file.value, "value")?;
            forbid(file.mode, "mode")?;
            forbid(file.mean, "mean")?;
            forbid(file.sd, "sd")?;
            Distribution::uniform(need(file.low, "low")?, need(file.high, "high")?)
                .map_err(|e| Error::config(format!("{key}: {e}")))
        }
        "triangular" => {
            forbid(file.value, "value")?;
            forbid(file.mean, "mean")?;
            forbid(file.sd, "sd")?;
            Distribution::triangular(
                need(file.low, "low")?,
                need(file.mode, "mode")?,
                need(file.high, "high")?,
            )
            .map_err(|e| Error::config(format!("{key}: {e}")))
        }
        "normal" => {
            forbid(file.value, "value")?;
            forbid(file.mode, "mode")?;
            Distribution::normal(
                need(file.mean, "mean")?,
                need(file.sd, "sd")?,
                file.low,
                file.high,
            )
            .map_err(|e| Error::config(format!("{key}: {e}")))
        }
        other => Err(Error::config(format!(
            "{key}: unknown distribution \"{other}\" \
             (expected point, uniform, triangular, or normal)"
        ))),
    }
}

/// Serialization mirror: every resolvable field written out explicitly so
/// the emitted file is self-documenting and loads back identically.
#[derive(Serialize)]
struct ProjectFileOut<'a> {
    name: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    annual_energy_override: Option<f64>,
    site: SiteOut,
    plant: PlantFile,
    costs: CostsFile,
    automation: AutomationFile,
    assumptions: AssumptionsOut,
    emissions: EmissionsOut,
}

#[derive(Serialize)]
struct SiteOut {
    surface_temperature: f64,
    gradient: f64,
    rock_density: f64,
    specific_heat: f64,
    reservoir_volume: f64,
    reference_temperature: f64,
}

#[derive(Serialize)]
struct AssumptionsOut {
    discount_rate: f64,
    inflation_rate: f64,
    lifetime: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    energy_tariff: Option<f64>,
}

#[derive(Serialize)]
struct EmissionsOut {
    grid_factor: f64,
    construction: f64,
    operation_per_year: f64,
    decommissioning: f64,
}

/// Renders a config as project-file TOML. Round-trips: loading the output
/// yields a config equal to the input on every field.
pub fn serialize_project(config: &ProjectConfig) -> String {
    let escalation = match config.costs.opex_escalation {
        OpexEscalation::None => "none",
        OpexEscalation::InflationIndexed => "inflation_indexed",
    };
    let out = ProjectFileOut {
        name: &config.name,
        annual_energy_override: config.annual_energy_override,
        site: SiteOut {
            surface_temperature: config.site.surface_temperature,
            gradient: config.site.gradient,
            rock_density: config.site.rock_density,
            specific_heat: config.site.specific_heat,
            reservoir_volume: config.site.reservoir_volume,
            reference_temperature: config.site.reference_temperature,
        },
        plant: PlantFile {
            pathway: config.plant.pathway.id().to_string(),
            rated_capacity: config.plant.rated_capacity,
            capacity_factor: config.plant.capacity_factor,
            lifetime: config.plant.lifetime,
            generation_start_year: Some(config.plant.generation_start_year),
            production_temperature: config.plant.production_temperature,
            injection_temperature: config.plant.injection_temperature,
            circulation_mass_flow: config.plant.circulation_mass_flow,
            fluid_specific_heat: config.plant.fluid_specific_heat,
            conversion_efficiency: config.plant.conversion_efficiency,
            temperature_coupled: Some(config.plant.temperature_coupled),
            cop: config.plant.cop,
            baseline_cop: config.plant.baseline_cop,
            utilization: config.plant.utilization,
        },
        costs: CostsFile {
            capex: None,
            capex_schedule: Some(
                config
                    .costs
                    .capex_schedule
                    .iter()
                    .map(|e| CapexEntryFile { year: e.year, amount: e.amount })
                    .collect(),
            ),
            opex: config.costs.opex,
            fuel_cost: Some(config.costs.fuel_cost),
            opex_escalation: Some(escalation.to_string()),
        },
        automation: AutomationFile {
            level: config.automation.level.id().to_string(),
            capex_reduction: Some(config.automation.capex_reduction),
            opex_reduction: Some(config.automation.opex_reduction),
        },
        assumptions: AssumptionsOut {
            discount_rate: config.assumptions.discount_rate,
            inflation_rate: config.assumptions.inflation_rate,
            lifetime: config.assumptions.lifetime,
            energy_tariff: config.assumptions.energy_tariff,
        },
        emissions: EmissionsOut {
            grid_factor: config.emissions.grid_factor,
            construction: config.emissions.stages.construction,
            operation_per_year: config.emissions.stages.operation_per_year,
            decommissioning: config.emissions.stages.decommissioning,
        },
    };
    toml::to_string_pretty(&out).expect("validated config serializes")
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CalibrationFile {
    egs: Option<CalibrationSection>,
    wells: Option<CalibrationSection>,
    gshp: Option<CalibrationSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CalibrationSection {
    samples: Option<u32>,
    seed: Option<u64>,
    parameters: BTreeMap<String, DistributionFile>,
}

/// Loads the pathway's section of a calibration file as an uncertainty
/// spec. Calibration files carry one `[egs]` / `[wells]` / `[gshp]` section
/// per pathway they cover, each with the same shape as `[uncertainty]`.
pub fn load_calibration(path: &Path, pathway: Pathway) -> Result<UncertaintySpec> {
    let file: CalibrationFile = toml::from_str(&read_file(path)?)
        .map_err(|e| Error::parse(format!("{}: {e}", path.display())))?;
    let section = match pathway {
        Pathway::Egs => file.egs,
        Pathway::WellRepurposing => file.wells,
        Pathway::Gshp => file.gshp,
    };
    let section = section.ok_or_else(|| {
        Error::config(format!(
            "{}: no [{}] section for the project's pathway",
            path.display(),
            pathway.id()
        ))
    })?;
    build_uncertainty(&UncertaintyFile {
        samples: section.samples,
        seed: section.seed,
        parameters: section.parameters,
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RangesFile {
    ranges: BTreeMap<String, RangeFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RangeFile {
    low: f64,
    high: f64,
    scale: Option<bool>,
}

/// Loads tornado ranges: a `[ranges]` table keyed by quoted parameter
/// paths, each entry carrying `low`, `high`, and optional `scale`.
pub fn load_ranges(path: &Path) -> Result<BTreeMap<String, RangeSpec>> {
    let file: RangesFile = toml::from_str(&read_file(path)?)
        .map_err(|e| Error::parse(format!("{}: {e}", path.display())))?;
    let mut ranges = BTreeMap::new();
    for (key, range) in file.ranges {
        ParamPath::parse(&key)?;
        if !range.low.is_finite() || !range.high.is_finite() {
            return Err(Error::config(format!("{key}: range endpoints must be finite")));
        }
        ranges.insert(
            key,
            RangeSpec {
                low: range.low,
                high: range.high,
                scale: range.scale.unwrap_or(false),
            },
        );
    }
    Ok(ranges)
}
