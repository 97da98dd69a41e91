//! `jsa`: resolve an SPDC configuration (solved GVM point, or explicit
//! pump wavelength with an auto-solved angle), build the JSA grid, report
//! purity, and export the CSV.

use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::Args;
use serde::{Deserialize, Serialize};

use biborate::error::Error as CoreError;
use biborate::io::{fmt9, jsa_to_csv};
use biborate::jsa::{compute_jsa_grid, optimize_bandwidth, schmidt_purity, DEFAULT_GRID};
use biborate::phasematch::{
    partner_wavelength_nm, solve_angle, solve_gvm_degenerate, solve_gvm_nondegenerate,
    GvmCondition, PhotonRole, SolveOptions, SpdcConfig,
};
use biborate::refraction::{Plane, PolarizationAssignment, PropagationGeometry};

use super::LoadedData;
use crate::manifest::write_outputs_with_manifest;

#[derive(Args)]
pub struct JsaArgs {
    /// Crystal name (case-insensitive).
    #[arg(long)]
    pub crystal: String,
    /// Propagation plane; defaults to uniaxial, required for biaxial crystals.
    #[arg(long)]
    pub plane: Option<String>,
    /// Solve this GVM condition for the operating point (gvm1|gvm2|gvm3).
    #[arg(long, conflicts_with = "pump_nm")]
    pub condition: Option<String>,
    /// Explicit pump wavelength (nm); the angle is auto-solved.
    #[arg(long)]
    pub pump_nm: Option<f64>,
    /// Non-degenerate: hold the idler at this wavelength (nm).
    #[arg(long)]
    pub fixed_idler_nm: Option<f64>,
    /// Non-degenerate: hold the signal at this wavelength (nm).
    #[arg(long, conflicts_with = "fixed_idler_nm")]
    pub fixed_signal_nm: Option<f64>,
    /// Crystal length (mm); defaults to 10 (degenerate) or 20 (non-degenerate).
    #[arg(long)]
    pub length_mm: Option<f64>,
    /// Pump bandwidth Δλ (nm).
    #[arg(long, conflicts_with = "optimize_bandwidth")]
    pub bandwidth_nm: Option<f64>,
    /// Search for the Δλ maximizing purity.
    #[arg(long)]
    pub optimize_bandwidth: bool,
    /// Grid nodes per axis.
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    /// Override the span (nm) applied to both axes.
    #[arg(long)]
    pub span_nm: Option<f64>,
    /// Exchange the default signal/idler branch assignment.
    #[arg(long)]
    pub swap: bool,
    /// Output CSV path (default derived from the scenario).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ResolvedJsa {
    pub crystal: String,
    pub plane: String,
    pub condition: Option<String>,
    pub pump_nm: Option<f64>,
    pub fixed_idler_nm: Option<f64>,
    pub fixed_signal_nm: Option<f64>,
    pub length_mm: f64,
    pub bandwidth_nm: Option<f64>,
    pub optimize_bandwidth: bool,
    pub grid: usize,
    pub span_nm: Option<f64>,
    pub swap: bool,
    pub out: String,
}

pub fn run(data: &LoadedData, args: &JsaArgs) -> anyhow::Result<()> {
    let crystal = data.set.get(&args.crystal)?;
    let plane = match &args.plane {
        Some(p) => Plane::parse(p)?,
        None => match crystal.axis_class {
            biborate::crystal::AxisClass::Uniaxial => Plane::Uniaxial,
            biborate::crystal::AxisClass::Biaxial => {
                bail!("--plane is required for biaxial crystal {}", crystal.name)
            }
        },
    };
    if args.condition.is_none() && args.pump_nm.is_none() {
        bail!("specify an operating point: --condition gvmN or --pump-nm");
    }
    if args.bandwidth_nm.is_none() && !args.optimize_bandwidth {
        bail!("specify --bandwidth-nm or --optimize-bandwidth");
    }
    let nondegenerate = args.fixed_idler_nm.is_some() || args.fixed_signal_nm.is_some();
    let length_mm = args.length_mm.unwrap_or(if nondegenerate { 20.0 } else { 10.0 });
    let out = args.out.clone().unwrap_or_else(|| {
        let tag = args
            .condition
            .clone()
            .unwrap_or_else(|| format!("pump{:.0}", args.pump_nm.unwrap_or(0.0)));
        PathBuf::from(format!("jsa_{}_{}_{}.csv", args.crystal.to_lowercase(), plane.name(), tag))
    });
    let resolved = ResolvedJsa {
        crystal: crystal.name.clone(),
        plane: plane.name().to_string(),
        condition: args.condition.clone(),
        pump_nm: args.pump_nm,
        fixed_idler_nm: args.fixed_idler_nm,
        fixed_signal_nm: args.fixed_signal_nm,
        length_mm,
        bandwidth_nm: args.bandwidth_nm,
        optimize_bandwidth: args.optimize_bandwidth,
        grid: args.grid,
        span_nm: args.span_nm,
        swap: args.swap,
        out: out.display().to_string(),
    };
    let (csv, report) = execute(data, &resolved)?;
    write_outputs_with_manifest("jsa", &resolved, data.checksum.clone(), &[(out, csv)])?;
    print!("{report}");
    Ok(())
}

/// Resolve the configuration, build the grid, and serialize it. Returns
/// (csv, human report).
pub fn execute(data: &LoadedData, params: &ResolvedJsa) -> anyhow::Result<(String, String)> {
    let crystal = data.set.get(&params.crystal)?;
    let plane = Plane::parse(&params.plane)?;
    let options = SolveOptions {
        length_mm: params.length_mm,
        swap_signal_idler: params.swap,
        ..SolveOptions::default()
    };

    let mut report = String::new();
    let mut extra: Vec<(String, String)> = Vec::new();

    // Operating point.
    let mut config: SpdcConfig = if let Some(condition) = &params.condition {
        let condition = GvmCondition::parse(condition)?;
        let fixed = params
            .fixed_idler_nm
            .map(|nm| (PhotonRole::Idler, nm))
            .or(params.fixed_signal_nm.map(|nm| (PhotonRole::Signal, nm)));
        let outcome = match fixed {
            Some((role, nm)) => {
                solve_gvm_nondegenerate(crystal, plane, role, nm, condition, &options)?
            }
            None => solve_gvm_degenerate(crystal, plane, condition, &options)?,
        };
        let solution = outcome
            .best()
            .ok_or_else(|| {
                CoreError::RootFind(format!(
                    "{} {} {}: GVM condition not satisfied in the usable window",
                    crystal.name,
                    plane.name(),
                    condition.name()
                ))
            })?
            .clone();
        extra.push(("condition".into(), condition.name().into()));
        if let Some(d_eff) = solution.d_eff_pmv {
            extra.push(("d_eff_pmv".into(), format!("{d_eff:.4}")));
        }
        report.push_str(&format!(
            "operating point: {} {} {} -> lambda_p = {:.2} nm, lambda_s = {:.2} nm, lambda_i = {:.2} nm, angle = {:.3} deg\n",
            crystal.name,
            plane.name(),
            condition.name(),
            solution.config.lambda_p_nm,
            solution.config.lambda_s_nm,
            solution.config.lambda_i_nm,
            solution.angle_deg(),
        ));
        solution.config
    } else {
        // Explicit pump wavelength; angle auto-solved.
        let pump_nm = params.pump_nm.context("pump_nm missing")?;
        let (lambda_s, lambda_i) = match (params.fixed_signal_nm, params.fixed_idler_nm) {
            (Some(s), None) => (s, partner_wavelength_nm(pump_nm, s)),
            (None, Some(i)) => (partner_wavelength_nm(pump_nm, i), i),
            (None, None) => (2.0 * pump_nm, 2.0 * pump_nm),
            (Some(_), Some(_)) => bail!("fix at most one photon wavelength"),
        };
        let geometry = PropagationGeometry::in_plane(plane, 45.0);
        let mut found: Option<SpdcConfig> = None;
        let mut last_err: Option<CoreError> = None;
        let candidates = match plane {
            Plane::Uniaxial => vec![PolarizationAssignment::type2(params.swap)],
            _ => vec![
                PolarizationAssignment::type2(params.swap),
                PolarizationAssignment::type2_ordinary_pump(params.swap),
            ],
        };
        for assignment in candidates {
            let config = SpdcConfig::nondegenerate(
                crystal.clone(),
                geometry,
                assignment,
                lambda_s,
                lambda_i,
                params.length_mm,
                1.0,
            );
            match solve_angle(&config, options.angle_step_deg) {
                Ok(solution) => {
                    let mut config = config;
                    config.geometry =
                        config.geometry.with_tuning_angle_deg(solution.angle_deg);
                    found = Some(config);
                    break;
                }
                Err(e) => last_err = Some(e),
            }
        }
        let config = match found {
            Some(c) => c,
            None => {
                return Err(last_err
                    .map(anyhow::Error::from)
                    .unwrap_or_else(|| anyhow::anyhow!("no phase matching")))
            }
        };
        report.push_str(&format!(
            "operating point: {} {} pump {:.2} nm -> lambda_s = {:.2} nm, lambda_i = {:.2} nm, angle = {:.3} deg\n",
            crystal.name,
            plane.name(),
            config.lambda_p_nm,
            config.lambda_s_nm,
            config.lambda_i_nm,
            config.geometry.tuning_angle_deg(),
        ));
        config
    };

    // Bandwidth.
    if params.optimize_bandwidth {
        let optimum = optimize_bandwidth(&config, params.grid, None)?;
        config.pump_bandwidth_nm = optimum.delta_lambda_nm;
        extra.push(("optimal_delta_lambda_nm".into(), fmt9(optimum.delta_lambda_nm)));
        report.push_str(&format!(
            "optimal bandwidth: delta_lambda = {:.4} nm (purity {:.4}{})\n",
            optimum.delta_lambda_nm,
            optimum.purity,
            if optimum.at_boundary { ", WARNING: at bracket boundary" } else { "" }
        ));
    } else {
        config.pump_bandwidth_nm = params.bandwidth_nm.context("bandwidth missing")?;
    }

    // Grid + purity.
    let grid = compute_jsa_grid(&config, params.grid, params.span_nm)?;
    let schmidt = schmidt_purity(&grid)?;
    extra.push(("purity".into(), fmt9(schmidt.purity)));
    extra.push(("schmidt_number".into(), fmt9(schmidt.schmidt_number)));
    report.push_str(&format!(
        "purity = {:.4}, schmidt number K = {:.4} (grid {}, delta_lambda = {:.4} nm, L = {:.1} mm)\n",
        schmidt.purity,
        schmidt.schmidt_number,
        params.grid,
        config.pump_bandwidth_nm,
        config.length_mm,
    ));
    report.push_str(&format!("wrote {}\n", params.out));
    let csv = jsa_to_csv(&grid, &extra)?;
    Ok((csv, report))
}
