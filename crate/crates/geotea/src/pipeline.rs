//! End-to-end evaluation of one project description: effective energy,
//! automation-adjusted costs, cash flows, financial metrics, emissions.
//!
//! The annual energy resolution deserves a note, because three sources
//! compete. A config may pin its output with `annual_energy_override`
//! (reference presets do, so published figures are reproduced exactly); it
//! may be `temperature_coupled`, deriving output from the thermal fields; or
//! it falls back to rated capacity times capacity factor. Sensitivity layers
//! evaluate a varied config against the base it was derived from: when the
//! base is pinned, the pin is scaled by the relative change in the physical
//! drivers (capacity factor, and thermal output or rated capacity), so a
//! varied reservoir temperature moves a pinned config's energy exactly as it
//! moves the underlying physics, while the base point itself stays exact.

use serde::Serialize;

use crate::emissions::{
    avoided_emissions, gshp_displaced_mwh, lifetime_emissions_balance, EmissionsReport,
};
use crate::error::{Error, Result};
use crate::finance::{
    build_cash_flows_with_energy, irr, lcoe, npv, payback_cumulative, payback_simple,
    CashFlowSeries, CostModel, MetricsReport, OpexEscalation,
};
use crate::model::{annual_energy, egs_net_power, Pathway};
use crate::scenarios::{apply_automation, ProjectConfig};

/// Everything one evaluation produces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    /// Annual useful output the metrics are based on, MWh.
    pub annual_energy_mwh: f64,
    /// Costs after the automation scenario was applied.
    pub effective_costs: CostModel,
    pub series: CashFlowSeries,
    pub metrics: MetricsReport,
    pub emissions: EmissionsReport,
}

/// Evaluates a config on its own terms.
pub fn evaluate(config: &ProjectConfig) -> Result<Evaluation> {
    evaluate_against(config, config)
}

/// Evaluates `varied` as a perturbation of `base`. Sensitivity and Monte
/// Carlo layers call this so pinned energies stay coupled to the drivers
/// they perturb; plain evaluation is the special case `varied == base`.
///
/// Inputs are assumed to be validated; malformed values still fail cleanly
/// with a field-named error rather than producing nonsense.
pub fn evaluate_against(varied: &ProjectConfig, base: &ProjectConfig) -> Result<Evaluation> {
    let energy = effective_annual_energy(varied, base)?;
    let effective_costs = apply_automation(&varied.costs, &varied.automation)?;
    let series =
        build_cash_flows_with_energy(&varied.plant, &effective_costs, &varied.assumptions, energy)?;
    let metrics = metrics_for(varied, &effective_costs, &series, energy)?;
    let emissions = emissions_for(varied, energy)?;
    Ok(Evaluation {
        annual_energy_mwh: energy,
        effective_costs,
        series,
        metrics,
        emissions,
    })
}

/// Annual useful output of `varied` given that it perturbs `base`, MWh.
pub fn effective_annual_energy(varied: &ProjectConfig, base: &ProjectConfig) -> Result<f64> {
    match (varied.annual_energy_override, base.annual_energy_override) {
        // Pin unchanged from the base: scale it by the physical drivers.
        (Some(pinned), Some(base_pin)) if pinned == base_pin => {
            let base_cf = base.plant.capacity_factor;
            if base_cf <= 0.0 {
                return Err(Error::domain(
                    "cannot scale a pinned energy from a zero base capacity factor",
                ));
            }
            let cf_ratio = varied.plant.capacity_factor / base_cf;
            let driver_ratio =
                if base.plant.has_thermal_model() && varied.plant.has_thermal_model() {
                    let base_power = egs_net_power(&base.plant)?;
                    if base_power <= 0.0 {
                        return Err(Error::domain(
                            "cannot scale a pinned energy from a zero base thermal output",
                        ));
                    }
                    egs_net_power(&varied.plant)? / base_power
                } else {
                    // rated_capacity > 0 is a validated invariant
                    varied.plant.rated_capacity / base.plant.rated_capacity
                };
            Ok(pinned * cf_ratio * driver_ratio)
        }
        // The override itself was varied (or newly set): take it verbatim.
        (Some(pinned), _) => {
            if !pinned.is_finite() || pinned < 0.0 {
                return Err(Error::domain("annual energy override must be non-negative"));
            }
            Ok(pinned)
        }
        (None, _) => {
            if varied.plant.temperature_coupled && varied.plant.has_thermal_model() {
                let power = egs_net_power(&varied.plant)?;
                annual_energy(power, varied.plant.capacity_factor)
            } else {
                annual_energy(varied.plant.rated_capacity, varied.plant.capacity_factor)
            }
        }
    }
}

fn metrics_for(
    config: &ProjectConfig,
    effective_costs: &CostModel,
    series: &CashFlowSeries,
    energy: f64,
) -> Result<MetricsReport> {
    let rate = config.assumptions.discount_rate;
    let levelized = lcoe(series, rate)?;
    let net_present = npv(series, rate).ok();
    let internal = irr(series)?;

    // Simple payback assumes a constant annual net inflow, which holds
    // exactly when revenue is defined and opex does not escalate.
    let simple = match config.assumptions.energy_tariff {
        Some(tariff) if effective_costs.opex_escalation == OpexEscalation::None => {
            let inflow = tariff * energy - effective_costs.opex - effective_costs.fuel_cost;
            if inflow > 0.0 {
                payback_simple(effective_costs.total_capex(), inflow).ok()
            } else {
                None
            }
        }
        _ => None,
    };
    let cumulative = if series.revenue_defined {
        payback_cumulative(series)?
    } else {
        None
    };

    Ok(MetricsReport {
        lcoe: levelized,
        npv: net_present,
        irr: internal,
        payback_simple: simple,
        payback_cumulative: cumulative,
    })
}

fn emissions_for(config: &ProjectConfig, energy: f64) -> Result<EmissionsReport> {
    let context = &config.emissions;
    let displaced = match config.plant.pathway {
        // Generation displaces grid electricity one for one.
        Pathway::Egs | Pathway::WellRepurposing => energy,
        // Delivered cooling displaces the COP spread against conventional
        // units; negative spreads pass through as negative savings.
        Pathway::Gshp => {
            let cop = config.plant.cop.ok_or_else(|| {
                Error::config("plant.cop is required for heat pump emissions")
            })?;
            let baseline_cop = config.plant.baseline_cop.ok_or_else(|| {
                Error::config("plant.baseline_cop is required for heat pump emissions")
            })?;
            gshp_displaced_mwh(energy, cop, baseline_cop)?
        }
    };
    context.validate()?;
    let avoided_annual = if displaced >= 0.0 {
        avoided_emissions(displaced, context)?
    } else {
        displaced * context.grid_factor
    };
    Ok(EmissionsReport {
        annual_displaced_mwh: displaced,
        avoided_annual_t: avoided_annual,
        avoided_lifetime_net_t: lifetime_emissions_balance(
            avoided_annual,
            config.plant.lifetime,
            &context.stages,
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::{full_automation, preset, AutomationLevel};
    use approx::assert_relative_eq;

    fn annuity(rate: f64, lifetime: u32) -> f64 {
        (1..=lifetime).map(|t| (1.0 + rate).powi(-(t as i32))).sum()
    }

    #[test]
    fn egs_baseline_reproduces_reference_figures() {
        let config = preset(Pathway::Egs, AutomationLevel::Baseline);
        let eval = evaluate(&config).unwrap();

        assert_eq!(eval.annual_energy_mwh, 21_764.0);

        let af = annuity(0.06, 25);
        let expected_lcoe = (25.0e6 + 1.2e6 * af) / (21_764.0 * af);
        assert_relative_eq!(eval.metrics.lcoe, expected_lcoe, max_relative = 1e-9);
        assert!((eval.metrics.lcoe / 145.0 - 1.0).abs() < 0.01);

        assert_relative_eq!(eval.metrics.payback_simple.unwrap(), 12.5, max_relative = 1e-9);

        let tariff = config.assumptions.energy_tariff.unwrap();
        let expected_npv = -25.0e6 + (tariff * 21_764.0 - 1.2e6) * af;
        assert_relative_eq!(eval.metrics.npv.unwrap(), expected_npv, max_relative = 1e-9);
        assert!(expected_npv > 0.0);

        // positive NPV at 6% means the return clears the discount rate
        assert!(eval.metrics.irr.unwrap().rate > 0.06);
    }

    #[test]
    fn full_automation_presets_keep_their_published_paybacks() {
        for (pathway, payback) in [
            (Pathway::Egs, 10.5),
            (Pathway::WellRepurposing, 7.0),
            (Pathway::Gshp, 5.5),
        ] {
            let config = preset(pathway, AutomationLevel::Full);
            let eval = evaluate(&config).unwrap();
            assert_relative_eq!(
                eval.metrics.payback_simple.unwrap(),
                payback,
                max_relative = 1e-9
            );
        }
    }

    #[test]
    fn automation_reduces_the_effective_costs_in_the_series() {
        let config = preset(Pathway::Egs, AutomationLevel::Full);
        let eval = evaluate(&config).unwrap();
        assert!((eval.effective_costs.total_capex() - 21.5e6).abs() <= 0.01);
        assert!((eval.effective_costs.opex - 1.0e6).abs() <= 0.01);
        assert_eq!(eval.series.years[0].investment, eval.effective_costs.total_capex());
    }

    #[test]
    fn wells_emissions_displace_generation_one_for_one() {
        let config = preset(Pathway::WellRepurposing, AutomationLevel::Baseline);
        let eval = evaluate(&config).unwrap();
        assert_eq!(eval.emissions.annual_displaced_mwh, 10_272.0);
        assert_relative_eq!(
            eval.emissions.avoided_annual_t,
            10_272.0 * 0.503,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            eval.emissions.avoided_lifetime_net_t,
            10_272.0 * 0.503 * 25.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn gshp_emissions_use_the_cop_spread() {
        let config = preset(Pathway::Gshp, AutomationLevel::Baseline);
        let eval = evaluate(&config).unwrap();
        let expected_displaced = 7_932.0 / 3.0 - 7_932.0 / 5.0;
        assert_relative_eq!(
            eval.emissions.annual_displaced_mwh,
            expected_displaced,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            eval.emissions.avoided_annual_t,
            expected_displaced * 0.503,
            max_relative = 1e-12
        );
    }

    #[test]
    fn pinned_energy_scales_with_thermal_output() {
        let base = preset(Pathway::Egs, AutomationLevel::Baseline);
        let mut varied = base.clone();
        varied.plant.production_temperature = Some(130.0);
        // temperature drop falls from 80 to 60 degC
        let energy = effective_annual_energy(&varied, &base).unwrap();
        assert_relative_eq!(energy, 21_764.0 * 60.0 / 80.0, max_relative = 1e-12);
    }

    #[test]
    fn pinned_energy_scales_with_rated_capacity_without_a_thermal_model() {
        let base = preset(Pathway::WellRepurposing, AutomationLevel::Baseline);
        let mut varied = base.clone();
        varied.plant.rated_capacity = 1.8;
        let energy = effective_annual_energy(&varied, &base).unwrap();
        assert_relative_eq!(energy, 10_272.0 * 1.8 / 1.56, max_relative = 1e-12);
    }

    #[test]
    fn pinned_energy_scales_with_capacity_factor() {
        let base = preset(Pathway::Egs, AutomationLevel::Baseline);
        let mut varied = base.clone();
        varied.plant.capacity_factor = 0.9;
        let energy = effective_annual_energy(&varied, &base).unwrap();
        assert_relative_eq!(energy, 21_764.0 * 0.9 / 0.8, max_relative = 1e-12);
    }

    #[test]
    fn a_varied_override_is_taken_verbatim() {
        let base = preset(Pathway::Egs, AutomationLevel::Baseline);
        let mut varied = base.clone();
        varied.annual_energy_override = Some(25_000.0);
        assert_eq!(effective_annual_energy(&varied, &base).unwrap(), 25_000.0);
    }

    #[test]
    fn temperature_coupled_configs_derive_energy_from_the_thermal_fields() {
        let mut config = preset(Pathway::Egs, AutomationLevel::Baseline);
        config.annual_energy_override = None;
        config.plant.temperature_coupled = true;
        config.plant.circulation_mass_flow = Some(50.0);
        // 50 kg/s * 4200 J/(kg degC) * 80 degC * 0.12 = 2.016 MW
        let energy = effective_annual_energy(&config, &config).unwrap();
        assert_relative_eq!(energy, 2.016 * 8760.0 * 0.8, max_relative = 1e-12);
    }

    #[test]
    fn uncoupled_configs_fall_back_to_rated_capacity() {
        let mut config = preset(Pathway::WellRepurposing, AutomationLevel::Baseline);
        config.annual_energy_override = None;
        let energy = effective_annual_energy(&config, &config).unwrap();
        assert_relative_eq!(energy, 1.56 * 8760.0 * 0.75, max_relative = 1e-12);
    }

    #[test]
    fn revenue_metrics_vanish_without_a_tariff() {
        let mut config = preset(Pathway::Egs, AutomationLevel::Baseline);
        config.assumptions.energy_tariff = None;
        let eval = evaluate(&config).unwrap();
        assert!(eval.metrics.npv.is_none());
        assert!(eval.metrics.payback_simple.is_none());
        assert!(eval.metrics.payback_cumulative.is_none());
        assert!(eval.metrics.irr.is_none());
        assert!(eval.metrics.lcoe > 0.0);
    }

    #[test]
    fn simple_payback_absent_when_inflows_cannot_recover() {
        let mut config = preset(Pathway::Egs, AutomationLevel::Baseline);
        config.assumptions.energy_tariff = Some(1.0);
        let eval = evaluate(&config).unwrap();
        assert!(eval.metrics.payback_simple.is_none());
        assert!(eval.metrics.payback_cumulative.is_none());
        assert!(eval.metrics.npv.unwrap() < 0.0);
    }

    #[test]
    fn simple_payback_absent_under_opex_escalation() {
        let mut config = preset(Pathway::Egs, AutomationLevel::Baseline);
        config.costs.opex_escalation = OpexEscalation::InflationIndexed;
        let eval = evaluate(&config).unwrap();
        assert!(eval.metrics.payback_simple.is_none());
        assert!(eval.metrics.payback_cumulative.is_some());
    }

    #[test]
    fn automation_dominates_baseline_at_equal_tariff() {
        let base = preset(Pathway::Egs, AutomationLevel::Baseline);
        let mut full = base.clone();
        full.automation = full_automation(Pathway::Egs);
        let base_eval = evaluate(&base).unwrap();
        let full_eval = evaluate(&full).unwrap();
        assert!(full_eval.metrics.lcoe < base_eval.metrics.lcoe);
        assert!(full_eval.metrics.npv.unwrap() > base_eval.metrics.npv.unwrap());
    }
}
