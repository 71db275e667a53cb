//! Site and plant descriptions plus the first-order resource physics used
//! throughout the engine.
//!
//! The physical model is deliberately coarse: a linear geothermal gradient,
//! volumetric heat in place, a single-point thermal-to-electric conversion
//! for EGS, and COP arithmetic for heat pumps. That is the right fidelity
//! for screening-level economics, where cost and finance assumptions swamp
//! second-order reservoir effects. Anything needing a reservoir simulator is
//! out of scope on purpose.
//!
//! Units are fixed crate-wide: temperatures in degC, depths in km, energy in
//! MWh (thermal or electric as stated per field), power in MW, costs in USD.

use serde::Serialize;

use crate::error::{Error, Result, Warning};

/// Hours in a non-leap year; fixed for all capacity/energy conversions.
pub const HOURS_PER_YEAR: f64 = 8760.0;

/// Typical geothermal gradient band for hot sedimentary basins, degC/km.
/// Values outside produce a validation warning, not an error.
pub const GRADIENT_BAND: (f64, f64) = (20.0, 35.0);

/// Typical reservoir rock density band, kg/m3.
pub const ROCK_DENSITY_BAND: (f64, f64) = (2300.0, 2700.0);

/// Typical reservoir rock specific heat band, J/(kg degC).
pub const SPECIFIC_HEAT_BAND: (f64, f64) = (800.0, 1000.0);

/// Plausible COP band for modern ground-source heat pumps in cooling duty.
pub const GSHP_COP_BAND: (f64, f64) = (4.0, 5.5);

/// The three deployment routes the engine compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Pathway {
    /// Enhanced geothermal system: stimulated hot-rock reservoir feeding a
    /// binary power plant.
    #[serde(rename = "egs")]
    Egs,
    /// Repurposed oil and gas wells producing hot brine for power or heat.
    #[serde(rename = "wells")]
    WellRepurposing,
    /// District-scale ground-source heat pump field, cooling duty.
    #[serde(rename = "gshp")]
    Gshp,
}

impl Pathway {
    /// Short machine-readable identifier, used in files and CLI arguments.
    pub fn id(self) -> &'static str {
        match self {
            Pathway::Egs => "egs",
            Pathway::WellRepurposing => "wells",
            Pathway::Gshp => "gshp",
        }
    }

    /// Human-readable name for report headers.
    pub fn display_name(self) -> &'static str {
        match self {
            Pathway::Egs => "Enhanced Geothermal System",
            Pathway::WellRepurposing => "Well Repurposing",
            Pathway::Gshp => "Ground-Source Heat Pump",
        }
    }

    pub fn from_id(id: &str) -> Option<Pathway> {
        match id {
            "egs" => Some(Pathway::Egs),
            "wells" => Some(Pathway::WellRepurposing),
            "gshp" => Some(Pathway::Gshp),
            _ => None,
        }
    }

    pub fn all() -> [Pathway; 3] {
        [Pathway::Egs, Pathway::WellRepurposing, Pathway::Gshp]
    }

    /// True for pathways whose useful output is cooling displaced from the
    /// grid rather than generated electricity.
    pub fn is_cooling(self) -> bool {
        matches!(self, Pathway::Gshp)
    }
}

/// Subsurface description of a candidate site.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SiteProfile {
    /// Mean surface temperature, degC.
    pub surface_temperature: f64,
    /// Geothermal gradient, degC per km of depth.
    pub gradient: f64,
    /// Reservoir rock density, kg/m3.
    pub rock_density: f64,
    /// Reservoir rock specific heat, J/(kg degC).
    pub specific_heat: f64,
    /// Stimulated or accessible reservoir volume, m3.
    pub reservoir_volume: f64,
    /// Rejection temperature for heat-in-place accounting, degC. Defaults to
    /// the surface temperature when not given explicitly.
    pub reference_temperature: f64,
}

impl Default for SiteProfile {
    /// A representative arid-basin site: 27 degC surface, mid-band gradient,
    /// 1 km3 of ordinary sedimentary rock.
    fn default() -> Self {
        SiteProfile {
            surface_temperature: 27.0,
            gradient: 27.5,
            rock_density: 2500.0,
            specific_heat: 900.0,
            reservoir_volume: 1.0e9,
            reference_temperature: 27.0,
        }
    }
}

impl SiteProfile {
    /// Checks hard physical invariants and collects soft-band warnings.
    pub fn validate(&self) -> Result<Vec<Warning>> {
        if !self.gradient.is_finite() || self.gradient <= 0.0 {
            return Err(Error::config("site.gradient must be positive"));
        }
        if !self.rock_density.is_finite() || self.rock_density <= 0.0 {
            return Err(Error::config("site.rock_density must be positive"));
        }
        if !self.specific_heat.is_finite() || self.specific_heat <= 0.0 {
            return Err(Error::config("site.specific_heat must be positive"));
        }
        if !self.reservoir_volume.is_finite() || self.reservoir_volume < 0.0 {
            return Err(Error::config("site.reservoir_volume must be non-negative"));
        }
        if !self.surface_temperature.is_finite() || !self.reference_temperature.is_finite() {
            return Err(Error::config("site temperatures must be finite"));
        }

        let mut warnings = Vec::new();
        if self.gradient < GRADIENT_BAND.0 || self.gradient > GRADIENT_BAND.1 {
            warnings.push(Warning::new(
                "site.gradient",
                format!(
                    "{} degC/km is outside the typical {}-{} degC/km band for hot sedimentary basins",
                    self.gradient, GRADIENT_BAND.0, GRADIENT_BAND.1
                ),
            ));
        }
        if self.rock_density < ROCK_DENSITY_BAND.0 || self.rock_density > ROCK_DENSITY_BAND.1 {
            warnings.push(Warning::new(
                "site.rock_density",
                format!(
                    "{} kg/m3 is outside the typical {}-{} kg/m3 band",
                    self.rock_density, ROCK_DENSITY_BAND.0, ROCK_DENSITY_BAND.1
                ),
            ));
        }
        if self.specific_heat < SPECIFIC_HEAT_BAND.0 || self.specific_heat > SPECIFIC_HEAT_BAND.1 {
            warnings.push(Warning::new(
                "site.specific_heat",
                format!(
                    "{} J/(kg degC) is outside the typical {}-{} band",
                    self.specific_heat, SPECIFIC_HEAT_BAND.0, SPECIFIC_HEAT_BAND.1
                ),
            ));
        }
        Ok(warnings)
    }
}

/// Engineering description of the conversion plant.
///
/// Only `pathway`, `rated_capacity`, `capacity_factor` and `lifetime` are
/// always meaningful. The thermal fields drive the EGS conversion model and
/// the COP fields drive the heat-pump model; both groups are optional and
/// their absence is only an error when a computation actually needs them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlantSpec {
    pub pathway: Pathway,
    /// Nameplate electrical capacity, MW (for GSHP: cooling capacity, MW
    /// thermal).
    pub rated_capacity: f64,
    /// Fraction of the year the plant runs at rated output, 0 to 1.
    pub capacity_factor: f64,
    /// Operating life in years; cash flows span years 0..=lifetime.
    pub lifetime: u32,
    /// First year (inclusive) in which the plant generates; construction
    /// years before it carry investment only. Year indices start at 0.
    pub generation_start_year: u32,

    /// Produced fluid temperature at the plant inlet, degC.
    pub production_temperature: Option<f64>,
    /// Fluid temperature returned to the reservoir, degC.
    pub injection_temperature: Option<f64>,
    /// Circulating fluid mass flow, kg/s.
    pub circulation_mass_flow: Option<f64>,
    /// Circulating fluid specific heat, J/(kg degC).
    pub fluid_specific_heat: Option<f64>,
    /// Thermal-to-electric conversion efficiency, 0 to 1.
    pub conversion_efficiency: Option<f64>,
    /// When true, annual energy for configs without a pinned override is
    /// derived from the thermal fields instead of the rated capacity.
    pub temperature_coupled: bool,

    /// Heat pump coefficient of performance in cooling duty.
    pub cop: Option<f64>,
    /// COP of the conventional cooling stock the heat pump displaces.
    pub baseline_cop: Option<f64>,
    /// Fraction of the year the cooling load is active, 0 to 1.
    pub utilization: Option<f64>,
}

impl PlantSpec {
    /// Minimal plant: the four always-required fields, everything else off.
    pub fn new(pathway: Pathway, rated_capacity: f64, capacity_factor: f64, lifetime: u32) -> Self {
        PlantSpec {
            pathway,
            rated_capacity,
            capacity_factor,
            lifetime,
            generation_start_year: 1,
            production_temperature: None,
            injection_temperature: None,
            circulation_mass_flow: None,
            fluid_specific_heat: None,
            conversion_efficiency: None,
            temperature_coupled: false,
            cop: None,
            baseline_cop: None,
            utilization: None,
        }
    }

    /// True when every field of the EGS thermal output model is present.
    pub fn has_thermal_model(&self) -> bool {
        self.production_temperature.is_some()
            && self.injection_temperature.is_some()
            && self.circulation_mass_flow.is_some()
            && self.fluid_specific_heat.is_some()
            && self.conversion_efficiency.is_some()
    }

    /// Checks hard invariants and collects soft-band warnings.
    pub fn validate(&self) -> Result<Vec<Warning>> {
        if !self.rated_capacity.is_finite() || self.rated_capacity <= 0.0 {
            return Err(Error::config("plant.rated_capacity must be positive"));
        }
        if !self.capacity_factor.is_finite()
            || self.capacity_factor < 0.0
            || self.capacity_factor > 1.0
        {
            return Err(Error::config(
                "plant.capacity_factor must lie in [0, 1]",
            ));
        }
        if self.lifetime == 0 {
            return Err(Error::config("plant.lifetime must be at least 1 year"));
        }
        if self.generation_start_year < 1 || self.generation_start_year > self.lifetime {
            return Err(Error::config(
                "plant.generation_start_year must lie in [1, lifetime]",
            ));
        }
        if let (Some(prod), Some(inj)) = (self.production_temperature, self.injection_temperature)
        {
            if prod < inj {
                return Err(Error::domain(
                    "plant.production_temperature must not be below plant.injection_temperature",
                ));
            }
        }
        if let Some(eta) = self.conversion_efficiency {
            if !(0.0..=1.0).contains(&eta) {
                return Err(Error::config(
                    "plant.conversion_efficiency must lie in [0, 1]",
                ));
            }
        }
        if let Some(flow) = self.circulation_mass_flow {
            if !flow.is_finite() || flow <= 0.0 {
                return Err(Error::config("plant.circulation_mass_flow must be positive"));
            }
        }
        if let Some(cp) = self.fluid_specific_heat {
            if !cp.is_finite() || cp <= 0.0 {
                return Err(Error::config("plant.fluid_specific_heat must be positive"));
            }
        }
        if let Some(cop) = self.cop {
            if !cop.is_finite() || cop <= 1.0 {
                return Err(Error::config("plant.cop must exceed 1"));
            }
        }
        if let Some(base) = self.baseline_cop {
            if !base.is_finite() || base <= 1.0 {
                return Err(Error::config("plant.baseline_cop must exceed 1"));
            }
        }
        if let Some(util) = self.utilization {
            if !util.is_finite() || !(0.0..=1.0).contains(&util) {
                return Err(Error::config("plant.utilization must lie in [0, 1]"));
            }
        }

        let mut warnings = Vec::new();
        if let Some(cop) = self.cop {
            if cop < GSHP_COP_BAND.0 || cop > GSHP_COP_BAND.1 {
                warnings.push(Warning::new(
                    "plant.cop",
                    format!(
                        "{} is outside the {}-{} band reported for modern ground-source units",
                        cop, GSHP_COP_BAND.0, GSHP_COP_BAND.1
                    ),
                ));
            }
            if let Some(base) = self.baseline_cop {
                if cop <= base {
                    warnings.push(Warning::new(
                        "plant.cop",
                        "heat pump COP does not exceed the displaced baseline COP; \
                         grid savings will be zero or negative",
                    ));
                }
            }
        }
        Ok(warnings)
    }
}

/// Temperature at `depth_km` below the surface under a linear gradient, degC.
pub fn temperature_at_depth(site: &SiteProfile, depth_km: f64) -> Result<f64> {
    if !depth_km.is_finite() || depth_km < 0.0 {
        return Err(Error::domain("depth must be non-negative"));
    }
    Ok(site.surface_temperature + site.gradient * depth_km)
}

/// Volumetric heat in place at `depth_km` relative to the site's reference
/// temperature, in joules: rock mass times specific heat times the
/// temperature difference.
///
/// # Errors
///
/// Fails if the depth is negative or the rock at that depth is colder than
/// the reference temperature (negative stored heat has no meaning here).
pub fn heat_in_place(site: &SiteProfile, depth_km: f64) -> Result<f64> {
    let temperature = temperature_at_depth(site, depth_km)?;
    let delta = temperature - site.reference_temperature;
    if delta < 0.0 {
        return Err(Error::domain(
            "rock temperature at the requested depth is below the reference temperature",
        ));
    }
    Ok(site.rock_density * site.specific_heat * site.reservoir_volume * delta)
}

/// Capacity factor implied by an annual energy output, dimensionless.
///
/// The raw ratio is returned even when it falls outside [0, 1]; use
/// [`capacity_factor_band_warning`] to surface implausible values.
pub fn capacity_factor(annual_energy_mwh: f64, rated_capacity_mw: f64) -> Result<f64> {
    if !rated_capacity_mw.is_finite() || rated_capacity_mw <= 0.0 {
        return Err(Error::domain("rated capacity must be positive"));
    }
    if !annual_energy_mwh.is_finite() || annual_energy_mwh < 0.0 {
        return Err(Error::domain("annual energy must be non-negative"));
    }
    Ok(annual_energy_mwh / (rated_capacity_mw * HOURS_PER_YEAR))
}

/// Warning for capacity factors outside the physically meaningful range.
pub fn capacity_factor_band_warning(capacity_factor: f64) -> Option<Warning> {
    if !(0.0..=1.0).contains(&capacity_factor) {
        Some(Warning::new(
            "plant.capacity_factor",
            format!("{capacity_factor} is outside [0, 1]"),
        ))
    } else {
        None
    }
}

/// Annual energy from rated capacity and capacity factor, MWh.
pub fn annual_energy(rated_capacity_mw: f64, capacity_factor: f64) -> Result<f64> {
    if !rated_capacity_mw.is_finite() || rated_capacity_mw < 0.0 {
        return Err(Error::domain("rated capacity must be non-negative"));
    }
    if !capacity_factor.is_finite() || !(0.0..=1.0).contains(&capacity_factor) {
        return Err(Error::domain("capacity factor must lie in [0, 1]"));
    }
    Ok(rated_capacity_mw * HOURS_PER_YEAR * capacity_factor)
}

/// Net electrical output of the EGS conversion loop, MW: mass flow times
/// fluid specific heat times the production-injection temperature drop times
/// conversion efficiency.
///
/// # Errors
///
/// Each missing thermal field is reported by name; a production temperature
/// below injection or an efficiency outside [0, 1] is a domain error. Equal
/// temperatures or zero efficiency are legal and give zero output.
pub fn egs_net_power(plant: &PlantSpec) -> Result<f64> {
    let production = require_thermal(plant.production_temperature, "plant.production_temperature")?;
    let injection = require_thermal(plant.injection_temperature, "plant.injection_temperature")?;
    let flow = require_thermal(plant.circulation_mass_flow, "plant.circulation_mass_flow")?;
    let fluid_cp = require_thermal(plant.fluid_specific_heat, "plant.fluid_specific_heat")?;
    let efficiency = require_thermal(plant.conversion_efficiency, "plant.conversion_efficiency")?;

    if production < injection {
        return Err(Error::domain(
            "production temperature is below injection temperature",
        ));
    }
    if !(0.0..=1.0).contains(&efficiency) {
        return Err(Error::domain("conversion efficiency must lie in [0, 1]"));
    }
    if flow <= 0.0 {
        return Err(Error::domain("circulation mass flow must be positive"));
    }
    if fluid_cp <= 0.0 {
        return Err(Error::domain("fluid specific heat must be positive"));
    }
    Ok(flow * fluid_cp * (production - injection) * efficiency / 1.0e6)
}

fn require_thermal(value: Option<f64>, field: &str) -> Result<f64> {
    value.ok_or_else(|| {
        Error::config(format!("{field} is required for the EGS thermal output model"))
    })
}

/// Electricity drawn by a heat pump meeting a cooling demand, MWh.
pub fn gshp_electricity(cooling_demand_mwh: f64, cop: f64) -> Result<f64> {
    if !cop.is_finite() || cop <= 1.0 {
        return Err(Error::domain("COP must exceed 1"));
    }
    if !cooling_demand_mwh.is_finite() || cooling_demand_mwh < 0.0 {
        return Err(Error::domain("cooling demand must be non-negative"));
    }
    Ok(cooling_demand_mwh / cop)
}

/// Fraction of grid electricity saved by serving a load at `cop` instead of
/// `baseline_cop`: 1 - baseline_cop / cop.
///
/// Negative values (heat pump worse than the baseline) are returned as-is;
/// plant validation warns about them separately.
pub fn gshp_savings_fraction(cop: f64, baseline_cop: f64) -> Result<f64> {
    if !cop.is_finite() || cop <= 0.0 {
        return Err(Error::domain("COP must be positive"));
    }
    if !baseline_cop.is_finite() || baseline_cop <= 0.0 {
        return Err(Error::domain("baseline COP must be positive"));
    }
    Ok(1.0 - baseline_cop / cop)
}

/// Total borehole length needed to carry a peak thermal load, metres:
/// load in kW times 1000, divided by the per-metre extraction rate in W/m.
pub fn borehole_length(peak_load_kw: f64, extraction_rate_w_per_m: f64) -> Result<f64> {
    if !extraction_rate_w_per_m.is_finite() || extraction_rate_w_per_m <= 0.0 {
        return Err(Error::domain("extraction rate must be positive"));
    }
    if !peak_load_kw.is_finite() || peak_load_kw < 0.0 {
        return Err(Error::domain("peak load must be non-negative"));
    }
    Ok(peak_load_kw * 1000.0 / extraction_rate_w_per_m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn site(surface: f64, gradient: f64) -> SiteProfile {
        SiteProfile {
            surface_temperature: surface,
            gradient,
            reference_temperature: surface,
            ..SiteProfile::default()
        }
    }

    #[test]
    fn temperature_rises_linearly_with_depth() {
        let t = temperature_at_depth(&site(27.0, 25.0), 4.0).unwrap();
        assert_relative_eq!(t, 127.0, max_relative = 1e-12);
        let t = temperature_at_depth(&site(27.0, 30.0), 4.0).unwrap();
        assert_relative_eq!(t, 147.0, max_relative = 1e-12);
    }

    #[test]
    fn surface_temperature_at_zero_depth() {
        let t = temperature_at_depth(&site(31.5, 28.0), 0.0).unwrap();
        assert_relative_eq!(t, 31.5, max_relative = 1e-12);
    }

    #[test]
    fn negative_depth_is_rejected() {
        assert!(temperature_at_depth(&site(27.0, 25.0), -0.1).is_err());
    }

    #[test]
    fn heat_in_place_matches_hand_calculation() {
        let mut s = site(27.0, 25.0);
        s.rock_density = 2500.0;
        s.specific_heat = 900.0;
        s.reservoir_volume = 1.0e9;
        // 4 km at 25 degC/km over a 27 degC reference: a 100 degC swing.
        let q = heat_in_place(&s, 4.0).unwrap();
        assert_relative_eq!(q, 2.25e17, max_relative = 1e-12);
    }

    #[test]
    fn heat_in_place_smaller_volume() {
        let mut s = site(27.0, 35.0);
        s.rock_density = 2300.0;
        s.specific_heat = 900.0;
        s.reservoir_volume = 2.0e8;
        let q = heat_in_place(&s, 4.0).unwrap();
        assert_relative_eq!(q, 5.796e16, max_relative = 1e-12);
    }

    #[test]
    fn zero_temperature_difference_stores_no_heat() {
        let q = heat_in_place(&site(27.0, 25.0), 0.0).unwrap();
        assert_eq!(q, 0.0);
    }

    #[test]
    fn rock_colder_than_reference_is_rejected() {
        let mut s = site(27.0, 25.0);
        s.reference_temperature = 200.0;
        assert!(heat_in_place(&s, 0.0).is_err());
    }

    #[test]
    fn capacity_factor_from_energy() {
        assert_relative_eq!(
            capacity_factor(35_040.0, 5.0).unwrap(),
            0.8,
            max_relative = 1e-12
        );
        assert_eq!(capacity_factor(0.0, 5.0).unwrap(), 0.0);
        assert_relative_eq!(
            capacity_factor(43_800.0, 5.0).unwrap(),
            1.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn capacity_factor_rejects_zero_capacity() {
        assert!(capacity_factor(1000.0, 0.0).is_err());
    }

    #[test]
    fn implausible_capacity_factor_warns_but_computes() {
        let cf = capacity_factor(50_000.0, 5.0).unwrap();
        assert!(cf > 1.0);
        assert!(capacity_factor_band_warning(cf).is_some());
        assert!(capacity_factor_band_warning(0.8).is_none());
    }

    #[test]
    fn annual_energy_from_capacity() {
        assert_relative_eq!(annual_energy(5.0, 0.8).unwrap(), 35_040.0, max_relative = 1e-12);
        assert_relative_eq!(annual_energy(2.0, 0.75).unwrap(), 13_140.0, max_relative = 1e-12);
        assert_eq!(annual_energy(5.0, 0.0).unwrap(), 0.0);
        assert!(annual_energy(5.0, 1.2).is_err());
    }

    #[test]
    fn energy_and_capacity_factor_are_inverse() {
        let e = annual_energy(3.1, 0.8).unwrap();
        let cf = capacity_factor(e, 3.1).unwrap();
        assert_relative_eq!(cf, 0.8, max_relative = 1e-12);
    }

    fn thermal_plant(flow: f64, cp: f64, prod: f64, inj: f64, eta: f64) -> PlantSpec {
        let mut plant = PlantSpec::new(Pathway::Egs, 3.0, 0.8, 25);
        plant.circulation_mass_flow = Some(flow);
        plant.fluid_specific_heat = Some(cp);
        plant.production_temperature = Some(prod);
        plant.injection_temperature = Some(inj);
        plant.conversion_efficiency = Some(eta);
        plant
    }

    #[test]
    fn egs_net_power_matches_hand_calculation() {
        let p = egs_net_power(&thermal_plant(50.0, 4200.0, 150.0, 70.0, 0.12)).unwrap();
        assert_relative_eq!(p, 2.016, max_relative = 1e-12);
    }

    #[test]
    fn egs_net_power_zero_cases() {
        let p = egs_net_power(&thermal_plant(50.0, 4200.0, 100.0, 100.0, 0.12)).unwrap();
        assert_eq!(p, 0.0);
        let p = egs_net_power(&thermal_plant(50.0, 4200.0, 150.0, 70.0, 0.0)).unwrap();
        assert_eq!(p, 0.0);
    }

    #[test]
    fn egs_net_power_rejects_inverted_temperatures() {
        assert!(egs_net_power(&thermal_plant(50.0, 4200.0, 60.0, 70.0, 0.12)).is_err());
    }

    #[test]
    fn egs_net_power_names_the_missing_field() {
        let mut plant = thermal_plant(50.0, 4200.0, 150.0, 70.0, 0.12);
        plant.circulation_mass_flow = None;
        let err = egs_net_power(&plant).unwrap_err();
        assert!(err.to_string().contains("plant.circulation_mass_flow"));
    }

    #[test]
    fn gshp_electricity_divides_by_cop() {
        assert_relative_eq!(gshp_electricity(1000.0, 5.0).unwrap(), 200.0, max_relative = 1e-12);
        assert_eq!(gshp_electricity(0.0, 4.0).unwrap(), 0.0);
        assert_relative_eq!(
            gshp_electricity(43_800.0, 4.0).unwrap(),
            10_950.0,
            max_relative = 1e-12
        );
        assert!(gshp_electricity(1000.0, 1.0).is_err());
    }

    #[test]
    fn gshp_savings_fraction_examples() {
        assert_relative_eq!(gshp_savings_fraction(5.0, 3.0).unwrap(), 0.4, max_relative = 1e-12);
        assert_eq!(gshp_savings_fraction(3.0, 3.0).unwrap(), 0.0);
        assert_relative_eq!(
            gshp_savings_fraction(5.5, 3.0).unwrap(),
            1.0 - 3.0 / 5.5,
            max_relative = 1e-12
        );
        assert!(gshp_savings_fraction(0.0, 3.0).is_err());
        assert!(gshp_savings_fraction(5.0, -1.0).is_err());
    }

    #[test]
    fn borehole_length_examples() {
        assert_relative_eq!(borehole_length(50.0, 50.0).unwrap(), 1000.0, max_relative = 1e-12);
        assert_eq!(borehole_length(0.0, 40.0).unwrap(), 0.0);
        assert_relative_eq!(borehole_length(100.0, 40.0).unwrap(), 2500.0, max_relative = 1e-12);
        assert!(borehole_length(50.0, 0.0).is_err());
    }

    #[test]
    fn site_validation_flags_out_of_band_values() {
        let mut s = SiteProfile {
            gradient: 45.0,
            rock_density: 2000.0,
            ..SiteProfile::default()
        };
        let warnings = s.validate().unwrap();
        let fields: Vec<&str> = warnings.iter().map(|w| w.field.as_str()).collect();
        assert!(fields.contains(&"site.gradient"));
        assert!(fields.contains(&"site.rock_density"));

        s.gradient = -1.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn plant_validation_checks_ranges() {
        let mut plant = PlantSpec::new(Pathway::Egs, 3.0, 0.8, 25);
        assert!(plant.validate().unwrap().is_empty());

        plant.capacity_factor = 1.4;
        assert!(plant.validate().is_err());
        plant.capacity_factor = 0.8;

        plant.generation_start_year = 0;
        assert!(plant.validate().is_err());
        plant.generation_start_year = 26;
        assert!(plant.validate().is_err());
        plant.generation_start_year = 1;

        plant.cop = Some(3.5);
        let warnings = plant.validate().unwrap();
        assert!(warnings.iter().any(|w| w.field == "plant.cop"));

        plant.cop = Some(4.5);
        plant.baseline_cop = Some(5.0);
        let warnings = plant.validate().unwrap();
        assert!(warnings.iter().any(|w| w.message.contains("baseline")));
    }

    #[test]
    fn proptest_round_trips_hold() {
        use proptest::prelude::*;
        proptest!(|(capacity in 0.001f64..5000.0, cf in 0.0f64..=1.0)| {
            let e = annual_energy(capacity, cf).unwrap();
            let back = capacity_factor(e, capacity).unwrap();
            prop_assert!((back - cf).abs() <= 1e-12 * cf.max(1.0));
        });
    }
}
