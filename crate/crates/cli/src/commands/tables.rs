//! `tables`: solve GVM operating points across crystals/planes/conditions
//! and render them as Markdown or CSV. "Not satisfied" cells are rendered
//! explicitly and do not fail the run.


use clap::Args;
use serde::{Deserialize, Serialize};

use biborate::crystal::AxisClass;
use biborate::phasematch::{
    solve_gvm_degenerate, solve_gvm_nondegenerate, GvmCondition, GvmOutcome, GvmSolution,
    PhotonRole, SolveOptions,
};
use biborate::refraction::Plane;

use super::{emit, LoadedData, TableDoc};
use crate::manifest::write_outputs_with_manifest;

#[derive(Args)]
pub struct TablesArgs {
    /// Restrict to one or more crystals (repeatable). All when omitted.
    #[arg(long = "crystal")]
    pub crystals: Vec<String>,
    /// Restrict to a propagation plane (uniaxial, xz, yz, xy).
    #[arg(long)]
    pub plane: Option<String>,
    /// Restrict to a GVM condition (gvm1, gvm2, gvm3).
    #[arg(long)]
    pub condition: Option<String>,
    /// Non-degenerate mode: hold the idler at this wavelength (nm).
    #[arg(long)]
    pub fixed_idler_nm: Option<f64>,
    /// Non-degenerate mode: hold the signal at this wavelength (nm).
    #[arg(long, conflicts_with = "fixed_idler_nm")]
    pub fixed_signal_nm: Option<f64>,
    /// Crystal length carried into solved configurations (mm).
    #[arg(long, default_value_t = 10.0)]
    pub length_mm: f64,
    /// Exchange the default signal/idler branch assignment.
    #[arg(long)]
    pub swap: bool,
    #[command(flatten)]
    pub out: crate::CommonOut,
}

/// Fully resolved parameters, recorded in the manifest.
#[derive(Debug, Serialize, Deserialize)]
pub struct ResolvedTables {
    pub crystals: Vec<String>,
    pub plane: Option<String>,
    pub condition: Option<String>,
    pub fixed_idler_nm: Option<f64>,
    pub fixed_signal_nm: Option<f64>,
    pub length_mm: f64,
    pub swap: bool,
    pub format: crate::Format,
    pub out: Option<String>,
}

pub fn run(data: &LoadedData, args: &TablesArgs) -> anyhow::Result<()> {
    let resolved = ResolvedTables {
        crystals: args.crystals.clone(),
        plane: args.plane.clone(),
        condition: args.condition.clone(),
        fixed_idler_nm: args.fixed_idler_nm,
        fixed_signal_nm: args.fixed_signal_nm,
        length_mm: args.length_mm,
        swap: args.swap,
        format: args.out.format,
        out: args.out.out.as_ref().map(|p| p.display().to_string()),
    };
    let text = execute(data, &resolved)?;
    match &args.out.out {
        Some(path) => write_outputs_with_manifest(
            "tables",
            &resolved,
            data.checksum.clone(),
            &[(path.clone(), text)],
        ),
        None => emit(&text, None),
    }
}

pub fn execute(data: &LoadedData, params: &ResolvedTables) -> anyhow::Result<String> {
    let crystal_names: Vec<String> = if params.crystals.is_empty() {
        data.set.names().iter().map(|s| s.to_string()).collect()
    } else {
        params.crystals.clone()
    };
    let plane_filter = params.plane.as_deref().map(Plane::parse).transpose()?;
    let condition_filter =
        params.condition.as_deref().map(GvmCondition::parse).transpose()?;
    let conditions: Vec<GvmCondition> = match condition_filter {
        Some(c) => vec![c],
        None => GvmCondition::ALL.to_vec(),
    };
    let options = SolveOptions {
        length_mm: params.length_mm,
        swap_signal_idler: params.swap,
        ..SolveOptions::default()
    };

    let mut doc = TableDoc {
        columns: vec![
            "crystal",
            "plane",
            "condition",
            "status",
            "lambda_p_nm",
            "lambda_s_nm",
            "lambda_i_nm",
            "angle_deg",
            "angle",
            "pump",
            "signal",
            "idler",
            "d_eff_pmv",
            "d_eff_source",
            "delta_k_rad_um",
            "gvm_residual",
        ],
        rows: Vec::new(),
    };

    for name in &crystal_names {
        let crystal = data.set.get(name)?;
        let planes: Vec<Plane> = match crystal.axis_class {
            AxisClass::Uniaxial => vec![Plane::Uniaxial],
            AxisClass::Biaxial => vec![Plane::Xz, Plane::Yz, Plane::Xy],
        };
        for plane in planes {
            if let Some(filter) = plane_filter {
                if filter != plane {
                    continue;
                }
            }
            for &condition in &conditions {
                let fixed = params
                    .fixed_idler_nm
                    .map(|nm| (PhotonRole::Idler, nm))
                    .or(params.fixed_signal_nm.map(|nm| (PhotonRole::Signal, nm)));
                let outcome = match fixed {
                    Some((role, nm)) => {
                        solve_gvm_nondegenerate(crystal, plane, role, nm, condition, &options)
                    }
                    None => solve_gvm_degenerate(crystal, plane, condition, &options),
                };
                match outcome {
                    Ok(GvmOutcome::Solved(solutions)) => {
                        for solution in &solutions {
                            doc.rows.push(solution_row(&crystal.name, plane, solution));
                        }
                    }
                    Ok(GvmOutcome::NotSatisfied { .. }) => {
                        let mut row = vec![
                            crystal.name.clone(),
                            plane.name().to_string(),
                            condition.name().to_string(),
                            "not satisfied".to_string(),
                        ];
                        row.extend(std::iter::repeat_n(String::new(), 12));
                        doc.rows.push(row);
                    }
                    Err(e) => {
                        // A plane that cannot phase match at all is still a
                        // reportable row, not a failure of the whole table.
                        let mut row = vec![
                            crystal.name.clone(),
                            plane.name().to_string(),
                            condition.name().to_string(),
                            format!("error: {e}"),
                        ];
                        row.extend(std::iter::repeat_n(String::new(), 12));
                        doc.rows.push(row);
                    }
                }
            }
        }
    }
    Ok(doc.render(params.format))
}

fn solution_row(name: &str, plane: Plane, solution: &GvmSolution) -> Vec<String> {
    let config = &solution.config;
    vec![
        name.to_string(),
        plane.name().to_string(),
        solution.condition.name().to_string(),
        "ok".to_string(),
        format!("{:.1}", config.lambda_p_nm),
        format!("{:.1}", config.lambda_s_nm),
        format!("{:.1}", config.lambda_i_nm),
        format!("{:.2}", solution.angle_deg()),
        if plane.tunes_phi() { "phi".to_string() } else { "theta".to_string() },
        config.polarization.pump.short().to_string(),
        config.polarization.signal.short().to_string(),
        config.polarization.idler.short().to_string(),
        solution.d_eff_pmv.map_or(String::from("-"), |d| format!("{d:.3}")),
        format!("{:?}", solution.d_eff_source).to_lowercase(),
        format!("{:.2e}", solution.delta_k_rad_per_um),
        format!("{:.2e}", solution.gvm_residual_inv_c),
    ]
}
