//! Acceptance gate: the nine externally checkable claims this engine is
//! built to satisfy, each printed as its own pass/fail line. Run with
//! `cargo test --test acceptance -- --nocapture` to see the list.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;

use approx::assert_relative_eq;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use geotea::config::load_calibration;
use geotea::emissions::{avoided_emissions, gshp_avoided_emissions, EmissionsContext};
use geotea::finance::{
    build_cash_flows_with_energy, irr, lcoe, npv, npv_of_flows, CostModel, FinancialAssumptions,
};
use geotea::model::{
    annual_energy, capacity_factor, temperature_at_depth, Pathway, PlantSpec, SiteProfile,
};
use geotea::pipeline::evaluate;
use geotea::report::{render_comparison, ReportFormat};
use geotea::scenarios::{compare_pathways, preset, AutomationLevel, ProjectConfig};
use geotea::uncertainty::{run_monte_carlo, run_monte_carlo_samples, tornado, TargetMetric};

fn repo_path(relative: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(relative)
}

fn presets_baseline_full() -> Vec<ProjectConfig> {
    Pathway::all()
        .into_iter()
        .flat_map(|p| {
            [AutomationLevel::Baseline, AutomationLevel::Full]
                .into_iter()
                .map(move |l| preset(p, l))
        })
        .collect()
}

/// Annuity factor at 6% over 25 years, computed longhand so it is
/// independent of the engine's discounting loop.
fn annuity_factor(rate: f64, years: u32) -> f64 {
    (1..=years).map(|t| (1.0 + rate).powi(-(t as i32))).sum()
}

fn check(label: &str, body: impl FnOnce()) -> bool {
    let passed = catch_unwind(AssertUnwindSafe(body)).is_ok();
    println!(
        "criterion {label}: {}",
        if passed { "PASS" } else { "FAIL" }
    );
    passed
}

#[test]
fn acceptance_gate() {
    let mut all = true;
    all &= check("1 (reference cost cells)", reference_cost_cells);
    all &= check("2 (levelized cost cross-check)", levelized_cost_cross_check);
    all &= check("3 (payback periods)", payback_periods);
    all &= check("4 (avoided emissions figures)", avoided_emissions_figures);
    all &= check("5 (financial oracle equivalence)", financial_oracle_equivalence);
    all &= check("6 (automation dominance)", automation_dominance);
    all &= check("7 (seeded determinism across thread counts)", seeded_determinism);
    all &= check("8 (sensitivity ranking)", sensitivity_ranking);
    all &= check("9 (resource physics bands)", resource_physics_bands);
    assert!(all, "at least one acceptance criterion failed");
}

/// The six preset rows reproduce the reference CAPEX and OPEX cells at
/// whole-dollar precision, numerically and as rendered.
fn reference_cost_cells() {
    let table = compare_pathways(&presets_baseline_full());
    let expected = [
        (25.0e6, 1.2e6),
        (21.5e6, 1.0e6),
        (8.0e6, 0.35e6),
        (7.2e6, 0.3e6),
        (5.0e6, 0.18e6),
        (4.4e6, 0.15e6),
    ];
    assert_eq!(table.rows.len(), expected.len());
    for (row, (capex, opex)) in table.rows.iter().zip(expected) {
        assert!(
            (row.capex - capex).abs() < 0.005,
            "{}: capex {} != {capex}",
            row.name,
            row.capex
        );
        assert!(
            (row.opex - opex).abs() < 0.005,
            "{}: opex {} != {opex}",
            row.name,
            row.opex
        );
    }
    let text = render_comparison(&table, ReportFormat::Table);
    for cell in [
        "25,000,000",
        "21,500,000",
        "1,200,000",
        "1,000,000",
        "8,000,000",
        "7,200,000",
        "350,000",
        "300,000",
        "5,000,000",
        "4,400,000",
        "180,000",
        "150,000",
    ] {
        assert!(text.contains(cell), "rendered table lacks {cell}");
    }
}

/// Pinned preset energies agree with an explicit discounted-sum inversion
/// of the reference baseline levelized costs to within 1 MWh, baseline
/// LCOEs land within 1% of 145/95/72, and the engine's full-automation
/// predictions land within 5% of the published 125/85/65.
fn levelized_cost_cross_check() {
    let af = annuity_factor(0.06, 25);
    let rows = [
        (Pathway::Egs, 25.0e6, 1.2e6, 145.0, 21_764.0, 125.0),
        (Pathway::WellRepurposing, 8.0e6, 0.35e6, 95.0, 10_272.0, 85.0),
        (Pathway::Gshp, 5.0e6, 0.18e6, 72.0, 7_932.0, 65.0),
    ];
    for (pathway, capex, opex, lcoe_base, pinned_energy, lcoe_full) in rows {
        let inverted = (capex + opex * af) / (lcoe_base * af);
        assert!(
            (inverted - pinned_energy).abs() <= 1.0,
            "{pathway:?}: inverted energy {inverted} vs pinned {pinned_energy}"
        );

        let baseline = evaluate(&preset(pathway, AutomationLevel::Baseline)).unwrap();
        assert!(
            (baseline.metrics.lcoe - lcoe_base).abs() <= 0.01 * lcoe_base,
            "{pathway:?}: baseline LCOE {}",
            baseline.metrics.lcoe
        );

        let full = evaluate(&preset(pathway, AutomationLevel::Full)).unwrap();
        assert!(
            (full.metrics.lcoe - lcoe_full).abs() <= 0.05 * lcoe_full,
            "{pathway:?}: full-automation LCOE {}",
            full.metrics.lcoe
        );
    }
}

/// Simple paybacks reproduce the reference years: baseline rows exactly,
/// full-automation rows within half a year.
fn payback_periods() {
    let rows = [
        (Pathway::Egs, 12.5, 10.5),
        (Pathway::WellRepurposing, 8.0, 7.0),
        (Pathway::Gshp, 6.5, 5.5),
    ];
    for (pathway, base_years, full_years) in rows {
        let baseline = evaluate(&preset(pathway, AutomationLevel::Baseline)).unwrap();
        assert_relative_eq!(
            baseline.metrics.payback_simple.unwrap(),
            base_years,
            max_relative = 1e-9
        );
        let full = evaluate(&preset(pathway, AutomationLevel::Full)).unwrap();
        assert!(
            (full.metrics.payback_simple.unwrap() - full_years).abs() <= 0.5,
            "{pathway:?}: full payback {}",
            full.metrics.payback_simple.unwrap()
        );
    }
}

/// Grid-displacement arithmetic reproduces the published annual
/// avoided-CO2 figures within 1%, and the documented district-cooling
/// assumptions land in the published 4,000 to 5,000 t band.
fn avoided_emissions_figures() {
    let context = EmissionsContext::default();

    let five_mw = annual_energy(5.0, 0.80).unwrap();
    let avoided = avoided_emissions(five_mw, &context).unwrap();
    assert!(
        (avoided - 17_600.0).abs() <= 0.01 * 17_600.0,
        "5 MW case: {avoided}"
    );

    let two_mw = annual_energy(2.0, 0.75).unwrap();
    let avoided = avoided_emissions(two_mw, &context).unwrap();
    assert!(
        (avoided - 6_600.0).abs() <= 0.01 * 6_600.0,
        "2 MW case: {avoided}"
    );

    // 10 MW of district cooling at 55% utilization; conventional stock at
    // COP 3, displacement measured against the documented 55% grid-use
    // reduction, i.e. an equivalent COP of 3 / (1 - 0.55)
    let mut plant = PlantSpec::new(Pathway::Gshp, 10.0, 0.55, 25);
    plant.cop = Some(3.0 / (1.0 - 0.55));
    plant.baseline_cop = Some(3.0);
    plant.utilization = Some(0.55);
    let avoided = gshp_avoided_emissions(&plant, &context).unwrap();
    assert!(
        (4_000.0..=5_000.0).contains(&avoided),
        "district cooling case: {avoided}"
    );
    assert_relative_eq!(avoided, 4443.0015, max_relative = 1e-6);
}

/// 1,000 seeded cash-flow series: levelized cost and NPV agree with a
/// longhand discounting oracle at 1e-9 of the discounted magnitudes, and
/// whenever an IRR is reported the NPV at that rate is zero within the
/// solver's advertised tolerance.
fn financial_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let mut unit = move || (rng.next_u64() >> 11) as f64 * 2f64.powi(-53);

    for _ in 0..1_000 {
        let lifetime = 1 + (unit() * 30.0) as u32;
        let lifetime = lifetime.min(30);
        let start = 1 + (unit() * lifetime as f64) as u32;
        let start = start.min(lifetime);
        let capex = 1.0e5 + unit() * 5.0e7;
        let opex = 1.0e4 + unit() * 2.0e6;
        let fuel = unit() * 1.0e5;
        let tariff = unit() * 300.0;
        let energy = 100.0 + unit() * 50_000.0;
        let rate = unit() * 0.15;

        let mut plant = PlantSpec::new(Pathway::Egs, 1.0, 0.5, lifetime);
        plant.generation_start_year = start;
        let mut costs = CostModel::single(capex, opex);
        costs.fuel_cost = fuel;
        let assumptions = FinancialAssumptions {
            discount_rate: rate,
            inflation_rate: 0.0,
            lifetime,
            energy_tariff: Some(tariff),
        };
        let series = build_cash_flows_with_energy(&plant, &costs, &assumptions, energy).unwrap();

        let mut cost_oracle = capex;
        let mut energy_oracle = 0.0;
        let mut npv_oracle = -capex;
        let mut scale = capex;
        for t in start..=lifetime {
            let df = (1.0 + rate).powi(-(t as i32));
            cost_oracle += (opex + fuel) * df;
            energy_oracle += energy * df;
            npv_oracle += (tariff * energy - opex - fuel) * df;
            scale += (tariff * energy + opex + fuel) * df;
        }
        let lcoe_oracle = cost_oracle / energy_oracle;

        let engine_lcoe = lcoe(&series, rate).unwrap();
        assert!(
            (engine_lcoe - lcoe_oracle).abs() <= 1e-9 * lcoe_oracle.abs().max(1.0),
            "lcoe {engine_lcoe} vs oracle {lcoe_oracle}"
        );
        let engine_npv = npv(&series, rate).unwrap();
        assert!(
            (engine_npv - npv_oracle).abs() <= 1e-9 * scale.max(1.0),
            "npv {engine_npv} vs oracle {npv_oracle}"
        );

        if let Some(found) = irr(&series).unwrap() {
            let flows = series.net_flows();
            let residual = npv_of_flows(&flows, found.rate).unwrap();
            let tolerance = 1e-6 * flows.iter().map(|f| f.abs()).sum::<f64>();
            assert!(
                residual.abs() <= tolerance,
                "irr {} leaves residual {residual}",
                found.rate
            );
        }
    }
}

/// Under common random numbers at 10,000 samples, full automation beats
/// the baseline on every paired NPV sample, narrows the NPV spread, and
/// raises the positive-outcome probability; the shipped calibration lands
/// each probability within ten points of the published figures
/// (45% to 65% for the deep-drilling route, 70% to 85% for well
/// repurposing).
fn automation_dominance() {
    let calibration = repo_path("configs/calibration.toml");
    let cases = [
        (Pathway::Egs, 0.45, 0.65),
        (Pathway::WellRepurposing, 0.70, 0.85),
    ];
    for (pathway, target_base, target_full) in cases {
        let spec = load_calibration(&calibration, pathway).unwrap();
        assert_eq!(spec.samples, 10_000);
        let baseline = preset(pathway, AutomationLevel::Baseline);
        let full = preset(pathway, AutomationLevel::Full);

        let base_samples = run_monte_carlo_samples(&baseline, &spec).unwrap();
        let full_samples = run_monte_carlo_samples(&full, &spec).unwrap();
        for (pair, (b, f)) in base_samples.npv.iter().zip(&full_samples.npv).enumerate() {
            let b = b.expect("baseline sample defined");
            let f = f.expect("full-automation sample defined");
            assert!(f >= b, "{pathway:?} sample {pair}: {f} < {b}");
        }

        let base_summary = run_monte_carlo(&baseline, &spec).unwrap();
        let full_summary = run_monte_carlo(&full, &spec).unwrap();
        assert!(
            full_summary.npv.sd < base_summary.npv.sd,
            "{pathway:?}: sd {} !< {}",
            full_summary.npv.sd,
            base_summary.npv.sd
        );
        assert!(full_summary.prob_npv_positive >= base_summary.prob_npv_positive);

        assert!(
            (base_summary.prob_npv_positive - target_base).abs() <= 0.10,
            "{pathway:?}: baseline P(NPV>0) {} vs target {target_base}",
            base_summary.prob_npv_positive
        );
        assert!(
            (full_summary.prob_npv_positive - target_full).abs() <= 0.10,
            "{pathway:?}: full P(NPV>0) {} vs target {target_full}",
            full_summary.prob_npv_positive
        );
    }
}

/// The CLI produces byte-identical Monte Carlo CSV for repeated seeded
/// runs, including when the worker pool is forced to different sizes.
fn seeded_determinism() {
    let run = |threads: &str| {
        let output = Command::new(env!("CARGO_BIN_EXE_geotea"))
            .args([
                "montecarlo",
                "-f",
                repo_path("configs/egs_baseline.toml").to_str().unwrap(),
                "--calibration",
                repo_path("configs/calibration.toml").to_str().unwrap(),
                "--format",
                "csv",
            ])
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .expect("binary runs");
        assert!(output.status.success(), "exit: {:?}", output.status);
        output.stdout
    };
    let single = run("1");
    let single_again = run("1");
    let many = run("8");
    assert_eq!(single, single_again, "same thread count must be stable");
    assert_eq!(single, many, "thread count must not leak into results");
}

/// On the deep-drilling reference project with the built-in ranges, the
/// discount rate and the production temperature are the two largest
/// levelized-cost swings.
fn sensitivity_ranking() {
    let config = preset(Pathway::Egs, AutomationLevel::Baseline);
    let ranges = geotea::uncertainty::default_tornado_ranges(&config);
    let entries = tornado(&config, TargetMetric::Lcoe, &ranges).unwrap();
    assert!(entries.len() >= 3);
    let top_two: BTreeSet<&str> = entries[..2].iter().map(|e| e.parameter.as_str()).collect();
    let expected: BTreeSet<&str> =
        ["assumptions.discount_rate", "plant.production_temperature"]
            .into_iter()
            .collect();
    assert_eq!(top_two, expected, "ranking: {entries:#?}");
}

/// Bottom-hole temperatures over the plausible gradient and depth ranges
/// stay physical and cover the quoted resource band; capacity factor and
/// annual energy invert each other.
fn resource_physics_bands() {
    let mut min_t = f64::INFINITY;
    let mut max_t = f64::NEG_INFINITY;
    for g_tenths in (250..=350).step_by(5) {
        let gradient = g_tenths as f64 / 10.0;
        let site = SiteProfile {
            gradient,
            ..SiteProfile::default()
        };
        for z_hundredths in (400..=500).step_by(5) {
            let depth = z_hundredths as f64 / 100.0;
            let t = temperature_at_depth(&site, depth).unwrap();
            assert!(
                (120.0..=205.0).contains(&t),
                "T({gradient}, {depth}) = {t}"
            );
            min_t = min_t.min(t);
            max_t = max_t.max(t);
        }
    }
    assert!(max_t >= 170.0, "hot corner only reaches {max_t}");
    assert!(min_t <= 127.0, "cool corner starts at {min_t}");

    let mut rng = ChaCha8Rng::seed_from_u64(0xCF);
    let mut unit = move || (rng.next_u64() >> 11) as f64 * 2f64.powi(-53);
    for _ in 0..1_000 {
        let rated = 0.1 + unit() * 999.9;
        let cf = 0.01 + unit() * 0.99;
        let energy = annual_energy(rated, cf).unwrap();
        let back = capacity_factor(energy, rated).unwrap();
        assert_relative_eq!(back, cf, max_relative = 1e-12);
    }
}
