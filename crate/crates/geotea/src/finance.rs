//! Lifetime cash flow construction and the discounted-cash-flow metrics:
//! levelized cost, net present value, internal rate of return, and payback.
//!
//! All metrics operate on an explicit [`CashFlowSeries`] built once per
//! evaluation, so every metric sees exactly the same flows. Year 0 is the
//! construction year: investment is carried undiscounted there, and
//! operating costs, energy and revenue start at the plant's generation start
//! year. Discount factors are applied iteratively (one division per year),
//! which keeps the arithmetic branch-free and reproducible; tests pin the
//! results against an independent closed-form oracle.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{annual_energy, PlantSpec};

/// Search bracket for IRR roots, exclusive below: rates in (-0.99, 10.0].
pub const IRR_BRACKET: (f64, f64) = (-0.99, 10.0);

/// Grid spacing of the IRR sign-change scan across the bracket.
pub const IRR_GRID_STEP: f64 = 0.005;

/// An IRR candidate is accepted once |NPV| falls below this factor times the
/// sum of absolute net flows.
pub const IRR_NPV_TOLERANCE_FACTOR: f64 = 1e-6;

/// Discount and price assumptions shared by all financial metrics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FinancialAssumptions {
    /// Real discount rate, fractional (0.06 = 6%).
    pub discount_rate: f64,
    /// Annual inflation applied to operating costs when escalation is on.
    pub inflation_rate: f64,
    /// Analysis horizon in years; must match the plant lifetime.
    pub lifetime: u32,
    /// Electricity (or displaced-cooling) sale price, USD/MWh. Revenue-based
    /// metrics are undefined without it.
    pub energy_tariff: Option<f64>,
}

impl Default for FinancialAssumptions {
    fn default() -> Self {
        FinancialAssumptions {
            discount_rate: 0.06,
            inflation_rate: 0.02,
            lifetime: 25,
            energy_tariff: None,
        }
    }
}

impl FinancialAssumptions {
    pub fn validate(&self) -> Result<()> {
        if !self.discount_rate.is_finite() || self.discount_rate <= -1.0 {
            return Err(Error::domain(
                "assumptions.discount_rate must be greater than -1",
            ));
        }
        if !self.inflation_rate.is_finite() || self.inflation_rate <= -1.0 {
            return Err(Error::domain(
                "assumptions.inflation_rate must be greater than -1",
            ));
        }
        if self.lifetime == 0 {
            return Err(Error::config("assumptions.lifetime must be at least 1 year"));
        }
        if let Some(tariff) = self.energy_tariff {
            if !tariff.is_finite() || tariff < 0.0 {
                return Err(Error::config("assumptions.energy_tariff must be non-negative"));
            }
        }
        Ok(())
    }
}

/// How annual operating cost evolves over the plant life.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OpexEscalation {
    /// Constant every operating year.
    #[default]
    None,
    /// Multiplied by (1 + inflation)^t in year t.
    InflationIndexed,
}

/// One investment outlay in a given project year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapexEntry {
    pub year: u32,
    pub amount: f64,
}

/// Capital and operating cost description.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostModel {
    /// Investment outlays by project year. A single year-0 entry is the
    /// common case; multi-year builds list several.
    pub capex_schedule: Vec<CapexEntry>,
    /// Annual operation and maintenance cost, USD/yr.
    pub opex: f64,
    /// Annual fuel or purchased-input cost, USD/yr. Zero for all geothermal
    /// pathways; present so the cash flow identity stays general.
    pub fuel_cost: f64,
    pub opex_escalation: OpexEscalation,
}

impl CostModel {
    /// Cost model with the whole investment in year 0.
    pub fn single(capex: f64, opex: f64) -> Self {
        CostModel {
            capex_schedule: vec![CapexEntry { year: 0, amount: capex }],
            opex,
            fuel_cost: 0.0,
            opex_escalation: OpexEscalation::None,
        }
    }

    /// Sum of all scheduled investment outlays.
    pub fn total_capex(&self) -> f64 {
        self.capex_schedule.iter().map(|e| e.amount).sum()
    }

    pub fn validate(&self, lifetime: u32) -> Result<()> {
        if self.capex_schedule.is_empty() {
            return Err(Error::config("costs.capex_schedule must contain at least one entry"));
        }
        for entry in &self.capex_schedule {
            if !entry.amount.is_finite() || entry.amount < 0.0 {
                return Err(Error::config("costs.capex amounts must be non-negative"));
            }
            if entry.year > lifetime {
                return Err(Error::config(format!(
                    "costs.capex_schedule year {} exceeds the {}-year lifetime",
                    entry.year, lifetime
                )));
            }
        }
        if !self.opex.is_finite() || self.opex < 0.0 {
            return Err(Error::config("costs.opex must be non-negative"));
        }
        if !self.fuel_cost.is_finite() || self.fuel_cost < 0.0 {
            return Err(Error::config("costs.fuel_cost must be non-negative"));
        }
        Ok(())
    }
}

/// One project year of the assembled series. All costs positive, `net` is
/// revenue minus all costs for the year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct YearFlow {
    pub year: u32,
    pub investment: f64,
    pub om: f64,
    pub fuel: f64,
    pub energy_mwh: f64,
    pub revenue: f64,
    pub net: f64,
}

/// Assembled cash flows for years 0..=lifetime.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CashFlowSeries {
    pub years: Vec<YearFlow>,
    /// False when no tariff was given; revenue-based metrics are then
    /// undefined and `net` reflects costs only.
    pub revenue_defined: bool,
}

impl CashFlowSeries {
    pub fn len(&self) -> usize {
        self.years.len()
    }

    pub fn is_empty(&self) -> bool {
        self.years.is_empty()
    }

    pub fn net_flows(&self) -> Vec<f64> {
        self.years.iter().map(|y| y.net).collect()
    }

    pub fn total_investment(&self) -> f64 {
        self.years.iter().map(|y| y.investment).sum()
    }
}

/// Computed internal rate of return.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Irr {
    /// Smallest rate in the bracket at which NPV crosses zero.
    pub rate: f64,
    /// True when the series has several sign-change roots; the reported rate
    /// is then only one of multiple mathematically valid answers.
    pub ambiguous: bool,
}

/// All financial metrics for one evaluation. Fields are `None` when the
/// metric is undefined for the inputs (usually: no tariff, so no revenue).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    /// Levelized cost of energy, USD/MWh. For cooling pathways this is a
    /// levelized cost of cooling; same formula, thermal MWh in the
    /// denominator.
    pub lcoe: f64,
    pub npv: Option<f64>,
    pub irr: Option<Irr>,
    pub payback_simple: Option<f64>,
    pub payback_cumulative: Option<f64>,
}

/// Builds the year-by-year series with annual energy taken from the plant's
/// rated capacity and capacity factor.
pub fn build_cash_flows(
    plant: &PlantSpec,
    costs: &CostModel,
    assumptions: &FinancialAssumptions,
) -> Result<CashFlowSeries> {
    let energy = annual_energy(plant.rated_capacity, plant.capacity_factor)?;
    build_cash_flows_with_energy(plant, costs, assumptions, energy)
}

/// Builds the year-by-year series with an explicitly supplied annual energy,
/// bypassing the capacity-based estimate. This is the entry point the
/// evaluation pipeline uses, since pinned energy overrides and
/// temperature-coupled outputs both land here.
pub fn build_cash_flows_with_energy(
    plant: &PlantSpec,
    costs: &CostModel,
    assumptions: &FinancialAssumptions,
    annual_energy_mwh: f64,
) -> Result<CashFlowSeries> {
    assumptions.validate()?;
    let lifetime = plant.lifetime;
    if assumptions.lifetime != lifetime {
        return Err(Error::config(format!(
            "assumptions.lifetime ({}) must equal plant.lifetime ({})",
            assumptions.lifetime, lifetime
        )));
    }
    costs.validate(lifetime)?;
    if !annual_energy_mwh.is_finite() || annual_energy_mwh < 0.0 {
        return Err(Error::domain("annual energy must be non-negative"));
    }
    let start = plant.generation_start_year;
    if start < 1 || start > lifetime {
        return Err(Error::config(
            "plant.generation_start_year must lie in [1, lifetime]",
        ));
    }

    let tariff = assumptions.energy_tariff;
    let mut escalation = 1.0;
    let mut years = Vec::with_capacity(lifetime as usize + 1);
    for year in 0..=lifetime {
        if year > 0 && costs.opex_escalation == OpexEscalation::InflationIndexed {
            escalation *= 1.0 + assumptions.inflation_rate;
        }
        let investment: f64 = costs
            .capex_schedule
            .iter()
            .filter(|e| e.year == year)
            .map(|e| e.amount)
            .sum();
        let operating = year >= start;
        let om = if operating { costs.opex * escalation } else { 0.0 };
        let fuel = if operating { costs.fuel_cost } else { 0.0 };
        let energy_mwh = if operating { annual_energy_mwh } else { 0.0 };
        let revenue = tariff.map_or(0.0, |t| t * energy_mwh);
        years.push(YearFlow {
            year,
            investment,
            om,
            fuel,
            energy_mwh,
            revenue,
            net: revenue - investment - om - fuel,
        });
    }
    Ok(CashFlowSeries {
        years,
        revenue_defined: tariff.is_some(),
    })
}

/// Levelized cost of energy over the series at the given discount rate,
/// USD/MWh: discounted lifetime costs over discounted lifetime energy.
/// Revenue never enters.
///
/// # Errors
///
/// `Undefined` when the discounted energy total is zero (nothing to levelize
/// over); `Domain` for rates at or below -100%.
pub fn lcoe(series: &CashFlowSeries, discount_rate: f64) -> Result<f64> {
    check_rate(discount_rate)?;
    let mut factor = 1.0;
    let mut costs = 0.0;
    let mut energy = 0.0;
    for (t, year) in series.years.iter().enumerate() {
        if t > 0 {
            factor /= 1.0 + discount_rate;
        }
        costs += (year.investment + year.om + year.fuel) * factor;
        energy += year.energy_mwh * factor;
    }
    if energy <= 0.0 {
        return Err(Error::undefined(
            "levelized cost is undefined: the series delivers no discounted energy",
        ));
    }
    Ok(costs / energy)
}

/// Net present value of the series at the given discount rate, USD.
///
/// # Errors
///
/// `Undefined` when the series has no revenue side (no tariff was set);
/// `Domain` for rates at or below -100%.
pub fn npv(series: &CashFlowSeries, discount_rate: f64) -> Result<f64> {
    if !series.revenue_defined {
        return Err(Error::undefined(
            "NPV is undefined: no energy tariff was given, so the series has no revenue",
        ));
    }
    check_rate(discount_rate)?;
    Ok(discounted_net(&series.net_flows(), discount_rate))
}

/// NPV of a bare net-flow vector (index = project year).
pub fn npv_of_flows(net_flows: &[f64], discount_rate: f64) -> Result<f64> {
    check_rate(discount_rate)?;
    Ok(discounted_net(net_flows, discount_rate))
}

fn check_rate(rate: f64) -> Result<()> {
    if !rate.is_finite() || rate <= -1.0 {
        return Err(Error::domain("discount rate must be greater than -1"));
    }
    Ok(())
}

fn discounted_net(flows: &[f64], rate: f64) -> f64 {
    let mut factor = 1.0;
    let mut total = 0.0;
    for (t, &flow) in flows.iter().enumerate() {
        if t > 0 {
            factor /= 1.0 + rate;
        }
        total += flow * factor;
    }
    total
}

/// Internal rate of return of the series, if one exists.
///
/// The bracket (-0.99, 10] is scanned at [`IRR_GRID_STEP`] for sign changes
/// and each is refined by bisection. `Ok(None)` means no IRR: the flows
/// never change sign, or every root is negative while the undiscounted net
/// total is also negative (the project never recovers its investment at any
/// rate, so quoting a destructive-rate "return" would be misleading). When
/// several roots exist the smallest is reported with `ambiguous` set.
pub fn irr(series: &CashFlowSeries) -> Result<Option<Irr>> {
    irr_of_flows(&series.net_flows())
}

/// [`irr`] over a bare net-flow vector.
pub fn irr_of_flows(flows: &[f64]) -> Result<Option<Irr>> {
    if flows.iter().any(|f| !f.is_finite()) {
        return Err(Error::domain("cash flows must be finite"));
    }
    let has_positive = flows.iter().any(|&f| f > 0.0);
    let has_negative = flows.iter().any(|&f| f < 0.0);
    if !has_positive || !has_negative {
        return Ok(None);
    }

    let scale: f64 = flows.iter().map(|f| f.abs()).sum();
    let tolerance = IRR_NPV_TOLERANCE_FACTOR * scale;
    let (lo, hi) = IRR_BRACKET;
    let steps = ((hi - lo) / IRR_GRID_STEP).round() as usize;

    let mut roots: Vec<f64> = Vec::new();
    let mut prev_rate = lo;
    let mut prev_value = discounted_net(flows, prev_rate);
    for k in 1..=steps {
        let rate = lo + (hi - lo) * (k as f64) / (steps as f64);
        let value = discounted_net(flows, rate);
        if prev_value == 0.0 {
            roots.push(prev_rate);
        } else if prev_value * value < 0.0 {
            roots.push(bisect(flows, prev_rate, rate, prev_value, tolerance));
        }
        prev_rate = rate;
        prev_value = value;
    }
    if prev_value == 0.0 {
        roots.push(prev_rate);
    }

    if roots.is_empty() {
        return Ok(None);
    }
    let undiscounted: f64 = flows.iter().sum();
    if undiscounted < 0.0 && roots.iter().all(|&r| r < 0.0) {
        return Ok(None);
    }
    Ok(Some(Irr {
        rate: roots[0],
        ambiguous: roots.len() > 1,
    }))
}

fn bisect(flows: &[f64], mut lo: f64, mut hi: f64, mut value_lo: f64, tolerance: f64) -> f64 {
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let value_mid = discounted_net(flows, mid);
        if value_mid.abs() <= tolerance || hi - lo < 1e-14 {
            break;
        }
        if value_lo * value_mid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            value_lo = value_mid;
        }
    }
    mid
}

/// Years to recover an initial investment from a constant annual net inflow.
///
/// # Errors
///
/// `Domain` for a negative investment, `Undefined` when the inflow is not
/// positive (the investment is never recovered).
pub fn payback_simple(initial_investment: f64, annual_net_inflow: f64) -> Result<f64> {
    if !initial_investment.is_finite() || initial_investment < 0.0 {
        return Err(Error::domain("initial investment must be non-negative"));
    }
    if initial_investment == 0.0 {
        return Ok(0.0);
    }
    if !annual_net_inflow.is_finite() || annual_net_inflow <= 0.0 {
        return Err(Error::undefined(
            "payback is undefined: annual net inflow is not positive",
        ));
    }
    Ok(initial_investment / annual_net_inflow)
}

/// First time the running (undiscounted) cumulative net flow reaches zero,
/// interpolated linearly within the crossing year. `Ok(None)` when the
/// series never recovers within its horizon.
pub fn payback_cumulative(series: &CashFlowSeries) -> Result<Option<f64>> {
    if !series.revenue_defined {
        return Err(Error::undefined(
            "payback is undefined: no energy tariff was given, so the series has no revenue",
        ));
    }
    let mut cumulative = 0.0;
    let mut previous = 0.0;
    for (t, year) in series.years.iter().enumerate() {
        cumulative += year.net;
        if cumulative >= 0.0 {
            if t == 0 {
                return Ok(Some(0.0));
            }
            // net this year must be positive for the sign to have flipped
            let fraction = -previous / year.net;
            return Ok(Some((t - 1) as f64 + fraction));
        }
        previous = cumulative;
    }
    Ok(None)
}
