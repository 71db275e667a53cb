//! Avoided grid emissions and the lifetime carbon balance.
//!
//! The displacement logic is a single multiplication: every MWh of grid
//! electricity not consumed avoids the grid's emission factor. For power
//! pathways the displaced quantity is the plant's generation. For heat
//! pumps it is the difference between what conventional cooling and the
//! heat pump draw for the same delivered cooling. Embodied stage emissions
//! (construction, operation, decommissioning) are netted off over the
//! lifetime; they default to zero because credible per-project numbers are
//! rarely available at screening stage.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{annual_energy, gshp_electricity, PlantSpec};

/// Grid emission factor for a heavily gas-fired system, t CO2 per MWh
/// (numerically equal to kg CO2 per kWh).
pub const DEFAULT_GRID_FACTOR: f64 = 0.503;

/// Embodied emissions by project stage, tonnes CO2 (operation is per year).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct StageEmissions {
    pub construction: f64,
    pub operation_per_year: f64,
    pub decommissioning: f64,
}

impl StageEmissions {
    pub fn validate(&self) -> Result<()> {
        for (value, field) in [
            (self.construction, "emissions.construction"),
            (self.operation_per_year, "emissions.operation_per_year"),
            (self.decommissioning, "emissions.decommissioning"),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::config(format!("{field} must be non-negative")));
            }
        }
        Ok(())
    }
}

/// Everything needed to turn displaced MWh into tonnes of CO2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmissionsContext {
    /// t CO2 per MWh of grid electricity displaced.
    pub grid_factor: f64,
    pub stages: StageEmissions,
}

impl Default for EmissionsContext {
    fn default() -> Self {
        EmissionsContext {
            grid_factor: DEFAULT_GRID_FACTOR,
            stages: StageEmissions::default(),
        }
    }
}

impl EmissionsContext {
    pub fn validate(&self) -> Result<()> {
        if !self.grid_factor.is_finite() || self.grid_factor <= 0.0 {
            return Err(Error::config("emissions.grid_factor must be positive"));
        }
        self.stages.validate()
    }
}

/// Emissions results for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmissionsReport {
    /// Grid electricity displaced per operating year, MWh.
    pub annual_displaced_mwh: f64,
    /// CO2 avoided per operating year, tonnes.
    pub avoided_annual_t: f64,
    /// Lifetime avoided CO2 net of embodied stage emissions, tonnes.
    pub avoided_lifetime_net_t: f64,
}

/// CO2 avoided per year by displacing `annual_mwh` of grid electricity,
/// tonnes.
pub fn avoided_emissions(annual_mwh: f64, context: &EmissionsContext) -> Result<f64> {
    context.validate()?;
    if !annual_mwh.is_finite() || annual_mwh < 0.0 {
        return Err(Error::domain("displaced energy must be non-negative"));
    }
    Ok(annual_mwh * context.grid_factor)
}

/// Annual grid electricity displaced by a heat pump serving `cooling_mwh` of
/// delivered cooling at `cop` instead of conventional units at
/// `baseline_cop`, MWh. Negative when the heat pump is worse.
pub fn gshp_displaced_mwh(cooling_mwh: f64, cop: f64, baseline_cop: f64) -> Result<f64> {
    let conventional = gshp_electricity(cooling_mwh, baseline_cop)?;
    let heat_pump = gshp_electricity(cooling_mwh, cop)?;
    Ok(conventional - heat_pump)
}

/// CO2 avoided per year by a ground-source heat pump plant, tonnes.
///
/// The annual delivered cooling comes from the plant's rated (thermal)
/// capacity and utilization; the displaced electricity from the COP spread
/// against the conventional baseline stock.
pub fn gshp_avoided_emissions(plant: &PlantSpec, context: &EmissionsContext) -> Result<f64> {
    let cop = plant
        .cop
        .ok_or_else(|| Error::config("plant.cop is required for heat pump emissions"))?;
    let baseline_cop = plant.baseline_cop.ok_or_else(|| {
        Error::config("plant.baseline_cop is required for heat pump emissions")
    })?;
    let utilization = plant.utilization.ok_or_else(|| {
        Error::config("plant.utilization is required for heat pump emissions")
    })?;
    let cooling_mwh = annual_energy(plant.rated_capacity, utilization)?;
    let displaced = gshp_displaced_mwh(cooling_mwh, cop, baseline_cop)?;
    avoided_emissions(displaced.max(0.0), context)
}

/// Lifetime avoided CO2 net of embodied stage emissions, tonnes. May be
/// negative when stage emissions dominate.
pub fn lifetime_emissions_balance(
    avoided_annual_t: f64,
    lifetime: u32,
    stages: &StageEmissions,
) -> f64 {
    let years = lifetime as f64;
    avoided_annual_t * years
        - stages.construction
        - stages.operation_per_year * years
        - stages.decommissioning
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Pathway;
    use approx::assert_relative_eq;

    #[test]
    fn avoided_emissions_scale_with_the_grid_factor() {
        let context = EmissionsContext::default();
        assert_relative_eq!(
            avoided_emissions(35_040.0, &context).unwrap(),
            17_625.12,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            avoided_emissions(13_140.0, &context).unwrap(),
            6_609.42,
            max_relative = 1e-12
        );
        assert_eq!(avoided_emissions(0.0, &context).unwrap(), 0.0);
    }

    #[test]
    fn grid_factor_must_be_positive() {
        let context = EmissionsContext {
            grid_factor: 0.0,
            ..EmissionsContext::default()
        };
        assert!(avoided_emissions(100.0, &context).is_err());
    }

    #[test]
    fn heat_pump_displacement_is_the_cop_spread() {
        // 48,180 MWh of cooling: conventional at COP 3 draws 16,060,
        // the heat pump at COP 5 draws 9,636
        let displaced = gshp_displaced_mwh(48_180.0, 5.0, 3.0).unwrap();
        assert_relative_eq!(displaced, 6_424.0, max_relative = 1e-12);

        let worse = gshp_displaced_mwh(1000.0, 2.0, 3.0).unwrap();
        assert!(worse < 0.0);
    }

    #[test]
    fn gshp_avoided_emissions_from_plant_fields() {
        let mut plant = PlantSpec::new(Pathway::Gshp, 10.0, 0.9, 25);
        plant.cop = Some(5.0);
        plant.baseline_cop = Some(3.0);
        plant.utilization = Some(0.55);
        let avoided = gshp_avoided_emissions(&plant, &EmissionsContext::default()).unwrap();
        // 48,180 MWh cooling, 6,424 MWh displaced, times 0.503
        assert_relative_eq!(avoided, 6_424.0 * 0.503, max_relative = 1e-12);
    }

    #[test]
    fn gshp_emissions_name_the_missing_field() {
        let plant = PlantSpec::new(Pathway::Gshp, 10.0, 0.9, 25);
        let err = gshp_avoided_emissions(&plant, &EmissionsContext::default()).unwrap_err();
        assert!(err.to_string().contains("plant.cop"));
    }

    #[test]
    fn lifetime_balance_nets_stage_emissions() {
        let stages = StageEmissions {
            construction: 2_000.0,
            operation_per_year: 15.0,
            decommissioning: 650.0,
        };
        let net = lifetime_emissions_balance(6_440.0, 25, &stages);
        assert_relative_eq!(net, 157_975.0, max_relative = 1e-12);

        let zero = StageEmissions::default();
        assert_relative_eq!(
            lifetime_emissions_balance(100.0, 25, &zero),
            2_500.0,
            max_relative = 1e-12
        );

        let heavy = StageEmissions {
            construction: 1.0e6,
            operation_per_year: 0.0,
            decommissioning: 0.0,
        };
        assert!(lifetime_emissions_balance(100.0, 25, &heavy) < 0.0);
    }

    #[test]
    fn negative_stage_emissions_are_rejected() {
        let stages = StageEmissions {
            construction: -1.0,
            ..StageEmissions::default()
        };
        assert!(stages.validate().is_err());
    }
}
